//! Fourier–Motzkin elimination for small systems of linear inequalities.
//!
//! Decides feasibility of `{x : cᵢ·x > rᵢ}` (strict or non-strict per row)
//! without sampling, and produces an explicit witness point when the system
//! is feasible. Intended for the handful-of-rows systems arising from wedge
//! intersection tests; row growth is quadratic per eliminated variable but
//! irrelevant at that size.

/// One inequality `coeffs · x > rhs` (`≥` when `strict` is false).
#[derive(Debug, Clone)]
pub struct Inequality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
    pub strict: bool,
}

impl Inequality {
    pub fn new(coeffs: Vec<f64>, rhs: f64, strict: bool) -> Self {
        Inequality {
            coeffs,
            rhs,
            strict,
        }
    }

    /// Scale so the coefficient vector has unit Euclidean norm (keeps the
    /// zero threshold meaningful across heterogeneous inputs).
    fn normalized(&self) -> Inequality {
        let n = self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 0.0 {
            Inequality {
                coeffs: self.coeffs.iter().map(|c| c / n).collect(),
                rhs: self.rhs / n,
                strict: self.strict,
            }
        } else {
            self.clone()
        }
    }

    fn satisfied_by(&self, x: &[f64]) -> bool {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        if self.strict {
            lhs > self.rhs
        } else {
            lhs >= self.rhs
        }
    }
}

/// Outcome of [`solve`]: either provably empty or feasible with a witness.
#[derive(Debug, Clone)]
pub enum Feasibility {
    Empty,
    Feasible(Vec<f64>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Coefficients at or below this magnitude (after row normalization) are
/// treated as exact zeros during elimination.
const ZERO_EPS: f64 = 1e-12;

/// Decide feasibility of the system over `nvars` variables.
pub fn solve(ineqs: &[Inequality], nvars: usize) -> Feasibility {
    let mut levels: Vec<Vec<Inequality>> = Vec::with_capacity(nvars + 1);
    levels.push(ineqs.iter().map(Inequality::normalized).collect());

    // Eliminate the last remaining variable at each level.
    for var in (0..nvars).rev() {
        let current = levels.last().unwrap();
        let mut next: Vec<Inequality> = Vec::new();
        let mut lowers: Vec<&Inequality> = Vec::new();
        let mut uppers: Vec<&Inequality> = Vec::new();
        for row in current {
            let c = row.coeffs[var];
            if c.abs() <= ZERO_EPS {
                let mut r = row.clone();
                r.coeffs[var] = 0.0;
                next.push(r);
            } else if c > 0.0 {
                lowers.push(row);
            } else {
                uppers.push(row);
            }
        }
        for lo in &lowers {
            for up in &uppers {
                let alpha = lo.coeffs[var];
                let beta = -up.coeffs[var];
                // beta·lo + alpha·up cancels the variable: the combined row
                // reads (beta·lo_c + alpha·up_c)·x > beta·lo_rhs + alpha·up_rhs.
                let coeffs: Vec<f64> = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .enumerate()
                    .map(|(i, (l, u))| if i == var { 0.0 } else { beta * l + alpha * u })
                    .collect();
                let rhs = beta * lo.rhs + alpha * up.rhs;
                next.push(Inequality::new(coeffs, rhs, lo.strict || up.strict).normalized());
            }
        }
        levels.push(next);
    }

    // All variables eliminated: rows are "0 > rhs" constraints.
    for row in levels.last().unwrap() {
        let violated = if row.strict {
            row.rhs >= 0.0
        } else {
            row.rhs > 0.0
        };
        if violated {
            return Feasibility::Empty;
        }
    }

    // Back-substitute a witness from the innermost level outwards.
    let mut x = vec![0.0; nvars];
    for var in 0..nvars {
        // The level holding the rows *before* variable `var` was eliminated
        // is levels[nvars - 1 - var].
        let rows = &levels[nvars - 1 - var];
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for row in rows {
            let c = row.coeffs[var];
            if c.abs() <= ZERO_EPS {
                continue;
            }
            let rest: f64 = row
                .coeffs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != var)
                .map(|(i, coeff)| coeff * x[i])
                .sum();
            let bound = (row.rhs - rest) / c;
            if c > 0.0 {
                lo = lo.max(bound);
            } else {
                hi = hi.min(bound);
            }
        }
        x[var] = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        };
    }

    // The witness must genuinely satisfy the original system; degenerate
    // strict systems (empty interior) surface here as Empty.
    if ineqs.iter().all(|r| r.satisfied_by(&x)) {
        Feasibility::Feasible(x)
    } else {
        Feasibility::Empty
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_box_has_witness() {
        let sys = vec![
            Inequality::new(vec![1.0, 0.0], 0.0, true),
            Inequality::new(vec![-1.0, 0.0], -1.0, true),
            Inequality::new(vec![0.0, 1.0], 2.0, true),
        ];
        match solve(&sys, 2) {
            Feasibility::Feasible(x) => {
                assert!(x[0] > 0.0 && x[0] < 1.0 && x[1] > 2.0);
            }
            Feasibility::Empty => panic!("box should be feasible"),
        }
    }

    #[test]
    fn contradictory_strict_pair_is_empty() {
        let sys = vec![
            Inequality::new(vec![1.0, 1.0, 0.0], 3.0, true),
            Inequality::new(vec![-1.0, -1.0, 0.0], -3.0, true),
        ];
        assert!(!solve(&sys, 3).is_feasible());
    }

    #[test]
    fn shared_boundary_feasible_only_non_strict() {
        let strict = vec![
            Inequality::new(vec![1.0], 0.0, true),
            Inequality::new(vec![-1.0], 0.0, true),
        ];
        assert!(!solve(&strict, 1).is_feasible());
        let closed = vec![
            Inequality::new(vec![1.0], 0.0, false),
            Inequality::new(vec![-1.0], 0.0, false),
        ];
        match solve(&closed, 1) {
            Feasibility::Feasible(x) => assert!(x[0].abs() < 1e-9),
            Feasibility::Empty => panic!("closed half-lines touch at 0"),
        }
    }

    #[test]
    fn unbounded_direction_gets_finite_witness() {
        let sys = vec![Inequality::new(vec![0.0, -2.0, 0.0, 1.0], 5.0, true)];
        match solve(&sys, 4) {
            Feasibility::Feasible(x) => assert!(-2.0 * x[1] + x[3] > 5.0),
            Feasibility::Empty => panic!("single half-space is feasible"),
        }
    }
}
