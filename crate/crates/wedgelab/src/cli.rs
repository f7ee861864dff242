//! Command-line front end over the verification suites.
//!
//! One binary, five subcommands: `geometry verify` runs the wedge
//! calculus property suites, `decompose` factors a Poincare element
//! into a reflection word, `tomita compute` builds modular data for an
//! algebra-and-state fixture, `model verify` drives the lattice model
//! through translation assembly, flow identities, spectrum extraction
//! and stability, and `cgma check` evaluates the net conditions on a
//! fixture file.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails,
//! 2 on unreadable or invalid input. All randomness is seeded from the
//! arguments, reports list their rows in a fixed order, and floats
//! serialize by shortest round-trip, so identical invocations produce
//! byte-identical output.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::Rng;

use crate::cgma::{
    assemble_translations, build_axis_unitary, check_cgma, check_modular_stability,
    check_star_relation, duplicate_conjugation_net, healthy_model_net, model_tag_id,
    non_involutive_net, spectrum_report, wrong_wedge_net, Cone, NetFixture, SpectrumConfig,
};
use crate::freemodel::{
    conjugation_shift_bound, translation_rep, wedge_conjugation, ModelWedgeTag, RapidityGrid,
};
use crate::geometry::{FourVector, PoincareElement};
use crate::recognition::{identify_wedge_map, WedgeMapSample};
use crate::report::{spectrum_csv, Report};
use crate::sampling::{random_proper_poincare, random_translation, random_wedge, rng_for};
use crate::tomita::{
    compute_modular, max_abs, op_mul, verify_tomita, FiniteVNAlgebra, Op, SemilinearOp, Vector, C64,
};
use crate::wedges::{compose_reflections, reflection_word, Wedge};

#[derive(Debug, Parser)]
#[command(
    name = "wedgelab",
    version,
    about = "Wedge geometry and modular structure checks"
)]
pub struct Cli {
    /// Tolerance for geometric identities and reflection words.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_geo: f64,
    /// Tolerance for operator identities.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_op: f64,
    /// Directory that receives the report and data files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wedge calculus suites.
    Geometry {
        #[command(subcommand)]
        cmd: GeometryCmd,
    },
    /// Factor a Poincare element into a word of edge reflections.
    Decompose {
        /// JSON file with the element: {"lambda": 16 floats row-major, "a": 4 floats}.
        #[arg(long, value_name = "FILE")]
        poincare: PathBuf,
    },
    /// Modular data for algebra-and-state fixtures.
    Tomita {
        #[command(subcommand)]
        cmd: TomitaCmd,
    },
    /// Lattice model suites.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Conjugation-net condition checks.
    Cgma {
        #[command(subcommand)]
        cmd: CgmaCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeometryCmd {
    /// Run the reflection, word, and map-recognition suites.
    Verify {
        /// Trials per suite.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Seed for every random draw.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TomitaCmd {
    /// Build the modular data of (algebra, state) and check the theorem.
    Compute {
        /// JSON list of complex matrices, each a row-major list of [re, im].
        #[arg(long, value_name = "FILE")]
        algebra: PathBuf,
        /// JSON list of [re, im] entries.
        #[arg(long, value_name = "FILE")]
        vector: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    /// Build the lattice fixture and run the full model suite.
    Verify {
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        /// Half-size K; the grid holds 2K+1 rapidity points.
        #[arg(long, default_value_t = 200)]
        grid: u32,
        #[arg(long, default_value_t = 0.05)]
        spacing: f64,
        /// Break the fixture on purpose: duplicate-conjugation,
        /// non-involutive, or wrong-wedge.
        #[arg(long, value_name = "NAME")]
        sabotage: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CgmaCmd {
    /// Evaluate the net conditions on a fixture file.
    Check {
        /// JSON fixture with family, conjugations, and optional state.
        #[arg(long, value_name = "FILE")]
        fixture: PathBuf,
    },
}

/// Parse and dispatch, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let emit = Emit {
        out: cli.out.clone(),
        json: cli.json,
    };
    let outcome = match cli.command {
        Command::Geometry {
            cmd: GeometryCmd::Verify { samples, seed },
        } => emit.finish(
            &cmd_geometry_verify(samples, seed, cli.tol_geo),
            "geometry_report.json",
            &[],
        ),
        Command::Decompose { poincare } => cmd_decompose(&poincare, cli.tol_geo, &emit),
        Command::Tomita {
            cmd: TomitaCmd::Compute { algebra, vector },
        } => cmd_tomita_compute(&algebra, &vector, cli.tol_op, &emit),
        Command::Model {
            cmd:
                ModelCmd::Verify {
                    mass,
                    grid,
                    spacing,
                    sabotage,
                },
        } => cmd_model_verify(
            mass,
            grid,
            spacing,
            sabotage.as_deref(),
            cli.tol_geo,
            cli.tol_op,
            &emit,
        ),
        Command::Cgma {
            cmd: CgmaCmd::Check { fixture },
        } => cmd_cgma_check(&fixture, &emit),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

struct Emit {
    out: Option<PathBuf>,
    json: bool,
}

impl Emit {
    /// Write the report (and any extra files) to the output directory,
    /// print it, and map the outcome to an exit code.
    fn finish(
        &self,
        report: &Report,
        file_name: &str,
        extras: &[(&str, &str)],
    ) -> Result<i32, String> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).map_err(|e| format!("create {}: {e}", dir.display()))?;
            let path = dir.join(file_name);
            report
                .write_to(&path)
                .map_err(|e| format!("write {}: {e}", path.display()))?;
            for (name, content) in extras {
                let path = dir.join(name);
                fs::write(&path, content).map_err(|e| format!("write {}: {e}", path.display()))?;
            }
        }
        if self.json {
            print!("{}", report.to_json());
        } else {
            print!("{}", report.render_text());
        }
        Ok(if report.all_passed() { 0 } else { 1 })
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_geometry_verify(samples: usize, seed: u64, tol_geo: f64) -> Report {
    let mut rng = rng_for(seed);
    let mut report = Report::new();

    // Composing the reflections of a wedge and its translate yields the
    // pure translation predicted by the closed form.
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let w = random_wedge(&mut rng);
        let xi = random_translation(&mut rng);
        let composed = w
            .translated(&xi)
            .edge_reflection()
            .compose(&w.edge_reflection());
        let predicted = PoincareElement::pure_translation(w.reflection_translation(&xi));
        worst = worst.max(composed.max_diff(&predicted));
    }
    report.gate("reflection-translation", worst, tol_geo);

    // Every proper element factors into a short word of edge
    // reflections that recomposes to it.
    let mut worst = 0.0f64;
    let mut longest = 0usize;
    let mut failures = Vec::new();
    for k in 0..samples {
        let g = random_proper_poincare(&mut rng);
        match reflection_word(&g, tol_geo) {
            Ok(word) => {
                longest = longest.max(word.len());
                worst = worst.max(compose_reflections(&word).max_diff(&g));
            }
            Err(e) => failures.push(format!("trial {k}: {e}")),
        }
    }
    if failures.is_empty() {
        report.gate("reflection-word", worst, tol_geo);
        report.gate("reflection-word-length", longest as f64, 10.0);
    } else {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        report.fail("reflection-word", None, shown);
    }

    // Wedge correspondences determine the element that induced them.
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..samples {
        let lambda = random_proper_poincare(&mut rng);
        let mut pairs = Vec::new();
        while pairs.len() < 6 {
            let w = random_wedge(&mut rng);
            match w.transform(&lambda) {
                Ok(image) => pairs.push((w, image)),
                Err(_) => continue,
            }
        }
        match identify_wedge_map(&WedgeMapSample::new(pairs), tol_geo.max(1e-12)) {
            Ok(found) => {
                worst = worst
                    .max(found.element.max_diff(&lambda))
                    .max((found.scale - 1.0).abs());
            }
            Err(e) => failures.push(format!("trial {k}: {e}")),
        }
    }
    if failures.is_empty() {
        report.gate("map-recognition", worst, tol_geo);
    } else {
        let shown = failures
            .iter()
            .take(3)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ");
        report.fail("map-recognition", None, shown);
    }

    // A pure dilation is recognized with its exact scale.
    let mut pairs = Vec::new();
    while pairs.len() < 6 {
        let w = random_wedge(&mut rng);
        let stretched = Wedge::new(*w.ell_plus(), *w.ell_minus(), w.apex().scale(2.0));
        match stretched {
            Ok(image) => pairs.push((w, image)),
            Err(_) => continue,
        }
    }
    match identify_wedge_map(&WedgeMapSample::new(pairs), tol_geo.max(1e-12)) {
        Ok(found) => report.gate("map-dilation-scale", (found.scale - 2.0).abs(), tol_geo),
        Err(e) => report.fail("map-dilation-scale", None, e.to_string()),
    }

    report
}

fn cmd_decompose(path: &Path, tol_geo: f64, emit: &Emit) -> Result<i32, String> {
    let value = read_json(path)?;
    let g: PoincareElement =
        serde_json::from_value(value).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut report = Report::new();
    let mut word_file = None;
    match reflection_word(&g, tol_geo) {
        Ok(word) => {
            report.gate(
                "word-residual",
                compose_reflections(&word).max_diff(&g),
                tol_geo,
            );
            report.gate("word-length", word.len() as f64, 10.0);
            let mut text = serde_json::to_string_pretty(&word).expect("word serializes");
            text.push('\n');
            word_file = Some(text);
        }
        Err(e) => report.fail("word-residual", None, e.to_string()),
    }
    let extras: Vec<(&str, &str)> = match &word_file {
        Some(text) => vec![("decompose_word.json", text.as_str())],
        None => Vec::new(),
    };
    emit.finish(&report, "decompose_report.json", &extras)
}

fn parse_complex_matrix(entries: &[[f64; 2]], origin: &Path) -> Result<Op, String> {
    let n = entries.len();
    let d = (n as f64).sqrt().round() as usize;
    if d == 0 || d * d != n {
        return Err(format!(
            "{}: a matrix has {n} entries, not a perfect square",
            origin.display()
        ));
    }
    Ok(Op::from_row_iterator(
        d,
        d,
        entries.iter().map(|[re, im]| C64::new(*re, *im)),
    ))
}

fn cmd_tomita_compute(
    algebra_path: &Path,
    vector_path: &Path,
    tol_op: f64,
    emit: &Emit,
) -> Result<i32, String> {
    let raw_mats: Vec<Vec<[f64; 2]>> = serde_json::from_value(read_json(algebra_path)?)
        .map_err(|e| format!("{}: {e}", algebra_path.display()))?;
    if raw_mats.is_empty() {
        return Err(format!("{}: no generators", algebra_path.display()));
    }
    let mut generators = Vec::new();
    for entries in &raw_mats {
        generators.push(parse_complex_matrix(entries, algebra_path)?);
    }
    let dim = generators[0].nrows();
    if generators.iter().any(|m| m.nrows() != dim) {
        return Err(format!(
            "{}: generators of mixed dimension",
            algebra_path.display()
        ));
    }
    let raw_vec: Vec<[f64; 2]> = serde_json::from_value(read_json(vector_path)?)
        .map_err(|e| format!("{}: {e}", vector_path.display()))?;
    if raw_vec.len() != dim {
        return Err(format!(
            "{}: vector has {} entries, the algebra acts on dimension {dim}",
            vector_path.display(),
            raw_vec.len()
        ));
    }
    let omega = Vector::from_iterator(dim, raw_vec.iter().map(|[re, im]| C64::new(*re, *im)));

    let algebra = FiniteVNAlgebra::algebra_closure(&generators).map_err(|e| e.to_string())?;
    let mut report = Report::new();
    report.info(
        "algebra",
        format!(
            "dimension {} acting on C^{}",
            algebra.algebra_dim(),
            algebra.space_dim()
        ),
    );
    let (cyclic, separating) = algebra
        .is_cyclic_separating(&omega)
        .map_err(|e| e.to_string())?;
    if cyclic {
        report.pass("state-cyclic", 0.0);
    } else {
        report.fail(
            "state-cyclic",
            None,
            "the state is not cyclic for the algebra",
        );
    }
    if separating {
        report.pass("state-separating", 0.0);
    } else {
        report.fail(
            "state-separating",
            None,
            "the state is not separating for the algebra",
        );
    }
    if !(cyclic && separating) {
        return emit.finish(&report, "tomita_report.json", &[]);
    }
    let data = match compute_modular(&algebra, &omega) {
        Ok(data) => data,
        Err(e) => {
            report.fail("modular-construction", None, e.to_string());
            return emit.finish(&report, "tomita_report.json", &[]);
        }
    };
    let mut spectrum = data.delta_spectrum();
    spectrum.sort_by(|a, b| b.partial_cmp(a).expect("finite spectrum"));
    report.info(
        "delta-spectrum",
        serde_json::to_string(&spectrum).expect("spectrum serializes"),
    );
    let check = verify_tomita(&algebra, &data, &[0.1, 1.0, 7.0]);
    report.gate(
        "conjugate-algebra-is-commutant",
        check.jmj_commutant,
        tol_op,
    );
    report.gate("flow-preserves-algebra", check.flow_invariance, tol_op);
    report.gate("conjugation-fixes-state", check.j_fixes_omega, tol_op);
    report.gate("operator-fixes-state", check.delta_fixes_omega, tol_op);
    report.gate("half-power-exchange", check.half_power_exchange, tol_op);
    report.gate("conjugation-involution", check.j_involution, tol_op);
    report.gate("conjugation-antiunitarity", check.j_antiunitarity, tol_op);
    report.gate("state-exchange-symmetry", check.kms_exchange, tol_op);
    emit.finish(&report, "tomita_report.json", &[])
}

fn cmd_model_verify(
    mass: f64,
    grid_k: u32,
    spacing: f64,
    sabotage: Option<&str>,
    tol_geo: f64,
    tol_op: f64,
    emit: &Emit,
) -> Result<i32, String> {
    let grid = RapidityGrid::new(mass, grid_k, spacing).map_err(|e| e.to_string())?;
    // Phase arguments grow with the top energy of the grid, and so does
    // the round-off in any identity that compares two phase paths. The
    // fixture apexes and sampled shifts scale inversely with that
    // energy, keeping every phase a few radians and the identity
    // residuals well inside the operator tolerance at any grid size.
    let top_energy = mass * (grid_k as f64 * spacing).cosh();
    let span = (3.0 / top_energy).min(0.5);
    let apex = FourVector::new(0.3, 1.1, 0.0, 0.0).scale(span);

    if let Some(name) = sabotage {
        let fixture = match name {
            "duplicate-conjugation" => duplicate_conjugation_net(grid, apex),
            "non-involutive" => non_involutive_net(grid, apex),
            "wrong-wedge" => wrong_wedge_net(grid, apex),
            other => {
                return Err(format!(
                    "unknown sabotage {other:?}; expected duplicate-conjugation, \
                     non-involutive, or wrong-wedge"
                ))
            }
        }
        .map_err(|e| e.to_string())?;
        let mut report = Report::new();
        report.append_cgma(&check_cgma(&fixture));
        return emit.finish(&report, "model_report.json", &[]);
    }

    let fixture = healthy_model_net(grid, apex).map_err(|e| e.to_string())?;
    let mut report = Report::new();
    let mut rng = rng_for(0x5EED);
    let xis: Vec<FourVector> = (0..50)
        .map(|_| {
            FourVector::new(
                rng.gen_range(-span..span),
                rng.gen_range(-span..span),
                0.0,
                0.0,
            )
        })
        .collect();

    let system = match assemble_translations(&fixture, &xis) {
        Ok(system) => system,
        Err(e) => {
            report.fail("translation-assembly", None, e.to_string());
            return emit.finish(&report, "model_report.json", &[]);
        }
    };
    let axis_op = system
        .consistency
        .iter()
        .map(|c| c.operator_residual)
        .fold(0.0, f64::max);
    let axis_geo = system
        .consistency
        .iter()
        .map(|c| c.geometric_residual)
        .fold(0.0, f64::max);
    report.gate("axis-consistency", axis_op, tol_op);
    report.gate("axis-geometry", axis_geo, tol_geo);
    report.gate("translation-identity", system.identity_residual, tol_op);
    report.gate("translation-group-law", system.group_law_residual, tol_op);
    report.gate(
        "translation-commutation",
        system.commutation_residual,
        tol_op,
    );
    if system.covariance_checked > 0 {
        report.gate("translation-covariance", system.covariance_residual, tol_op);
    } else {
        report.skip(
            "translation-covariance",
            "no member admitted a covariance check",
        );
    }

    let mut worst = 0.0f64;
    for xi in &xis {
        let built = system.u(xi).map_err(|e| e.to_string())?;
        let analytic = translation_rep(&grid, xi).map_err(|e| e.to_string())?;
        worst = worst.max(max_abs(&(built - analytic)));
    }
    report.gate("translation-vs-analytic", worst, tol_op);

    // One-parameter family along a fixed planar direction: squaring
    // halves the parameter, and the base conjugation inverts it.
    let dir = FourVector::new(0.4, 0.9, 0.0, 0.0).scale(span);
    let base = fixture.members()[0].label.to_wedge();
    let j0 = fixture.members()[0].conj.clone();
    let mut square = 0.0f64;
    let mut reflect = 0.0f64;
    for t in [0.25, 0.5, 1.0] {
        let vt =
            build_axis_unitary(&fixture, &base, &dir.scale(t / 2.0)).map_err(|e| e.to_string())?;
        let v2t = build_axis_unitary(&fixture, &base, &dir.scale(t)).map_err(|e| e.to_string())?;
        square = square.max(max_abs(&(op_mul(&vt, &vt) - v2t)));
        let vt = SemilinearOp::Linear(vt);
        reflect = reflect.max(vt.compose(&j0).distance(&j0.compose(&vt.unitary_inverse())));
    }
    report.gate("flow-square", square, tol_op);
    report.gate("flow-reflection", reflect, tol_op);

    // Conjugations at shifted apexes stay within the Lipschitz bound of
    // the shift, checked on vectors supported in the grid interior.
    let bound = conjugation_shift_bound(&grid, &dir).map_err(|e| e.to_string())?;
    let origin_tag = ModelWedgeTag::right(FourVector::zero()).map_err(|e| e.to_string())?;
    let j_origin = wedge_conjugation(&grid, &origin_tag).map_err(|e| e.to_string())?;
    let dim = fixture.dim();
    let (lo, hi) = (dim / 4, (3 * dim) / 4);
    let mut violation = 0.0f64;
    for _ in 0..20 {
        let mut psi = Vector::zeros(dim);
        for k in lo..hi {
            psi[k] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let norm = psi.norm();
        for t in [0.05, 0.35, 1.0] {
            let tag = ModelWedgeTag::right(dir.scale(t)).map_err(|e| e.to_string())?;
            let jt = wedge_conjugation(&grid, &tag).map_err(|e| e.to_string())?;
            let moved = (jt.apply(&psi) - j_origin.apply(&psi)).norm();
            violation = violation.max(moved - bound * t * norm);
        }
    }
    report.gate("conjugation-shift-bound", violation.max(0.0), tol_op);

    let config = SpectrumConfig::default();
    let spectrum = spectrum_report(&system, &config).map_err(|e| e.to_string())?;
    let worst_violation = spectrum
        .points
        .iter()
        .map(|p| p.0[1].abs() - p.0[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0);
    if matches!(spectrum.cone, Cone::Forward) {
        report.gate("spectrum-cone", worst_violation, tol_op);
    } else {
        report.fail(
            "spectrum-cone",
            Some(worst_violation),
            format!("classified {:?}, expected Forward", spectrum.cone),
        );
    }
    report.gate(
        "spectrum-phase-coherence",
        spectrum.max_phase_residual,
        config.phase_tol,
    );
    let csv = if spectrum.points.len() == grid.dim() {
        report.pass("spectrum-rows", 0.0);
        Some(spectrum_csv(&grid.thetas(), &spectrum))
    } else {
        report.fail(
            "spectrum-rows",
            None,
            format!(
                "{} points for {} grid levels",
                spectrum.points.len(),
                grid.dim()
            ),
        );
        None
    };

    let stability = check_modular_stability(&fixture, &[1, -2, 5]).map_err(|e| e.to_string())?;
    match &stability.operator_unavailable {
        Some(reason) => report.skip("stability-operator", reason),
        None => report.gate("stability-operator", stability.operator_residual, tol_op),
    }
    report.gate(
        "stability-certificates",
        stability.geometric_residual,
        tol_geo,
    );

    report.append_cgma(&check_cgma(&fixture));

    // Star relation for the translation carrying each wedge pair one
    // apex step forward, witnessed by a two-reflection word.
    let lambda = PoincareElement::pure_translation(apex);
    let half_tag = ModelWedgeTag::right(apex.scale(0.5)).map_err(|e| e.to_string())?;
    let word = vec![model_tag_id(&half_tag), fixture.members()[0].id.clone()];
    match check_star_relation(&fixture, &lambda, &word) {
        Ok(star) if star.checked > 0 => report.gate("star-relation", star.residual, tol_op),
        Ok(_) => report.skip("star-relation", "no member image stayed inside the family"),
        Err(e) => report.fail("star-relation", None, e.to_string()),
    }

    let extras: Vec<(&str, &str)> = match &csv {
        Some(text) => vec![("spectrum.csv", text.as_str())],
        None => Vec::new(),
    };
    emit.finish(&report, "model_report.json", &extras)
}

fn cmd_cgma_check(path: &Path, emit: &Emit) -> Result<i32, String> {
    let value = read_json(path)?;
    let fixture = NetFixture::from_json(&value).map_err(|e| e.to_string())?;
    let mut report = Report::new();
    report.append_cgma(&check_cgma(&fixture));
    emit.finish(&report, "cgma_report.json", &[])
}
