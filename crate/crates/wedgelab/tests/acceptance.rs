//! Acceptance gate: one test per advertised guarantee, each run at its
//! stated tolerance and runtime budget, printing a single summary line.

use std::time::{Duration, Instant};

use rand::Rng;

use wedgelab::cgma::{
    assemble_translations, build_axis_unitary, check_cgma, check_modular_stability,
    check_star_relation, duplicate_conjugation_net, healthy_model_net, model_tag_id,
    non_involutive_net, spectrum_report, time_reflected_model_net, two_factor_net, wrong_wedge_net,
    CheckStatus, Cone, NetFixture, SpectrumConfig,
};
use wedgelab::freemodel::{
    conjugation_shift_bound, translation_rep, wedge_conjugation, ModelWedgeTag, RapidityGrid,
};
use wedgelab::geometry::{FourVector, PoincareElement};
use wedgelab::recognition::{identify_wedge_map, WedgeMapSample};
use wedgelab::sampling::{
    random_proper_poincare, random_translation, random_unit3, random_wedge, rng_for,
};
use wedgelab::tomita::{
    compute_modular, max_abs, op_mul, verify_tomita, FiniteVNAlgebra, Op, SemilinearOp, Vector, C64,
};
use wedgelab::wedges::{compose_reflections, reflection_word, Wedge};

fn budget(start: Instant, secs: u64, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(secs),
        "{what} took {elapsed:?}, budget is {secs} s"
    );
}

/// Random unitary on C^n from the QR factor of a Gaussian-ish matrix.
fn random_unitary(n: usize, rng: &mut impl Rng) -> Op {
    let m = Op::from_fn(n, n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    m.qr().q()
}

/// Matrix unit E_pq ⊗ 1 on C^d ⊗ C^d.
fn left_unit(d: usize, p: usize, q: usize) -> Op {
    let mut m = Op::zeros(d * d, d * d);
    for j in 0..d {
        m[(p * d + j, q * d + j)] = C64::new(1.0, 0.0);
    }
    m
}

fn schmidt(weights: &[f64]) -> Vector {
    let d = weights.len();
    let mut v = Vector::zeros(d * d);
    for (i, w) in weights.iter().enumerate() {
        v[i * d + i] = C64::new(w.sqrt(), 0.0);
    }
    v
}

fn normalized_weights(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

/// A rotated factor M_d ⊗ 1 with a rotated faithful Schmidt state.
fn random_factor_fixture(d: usize, rng: &mut impl Rng) -> (Vec<Op>, Vector) {
    let n = d * d;
    let q = random_unitary(n, rng);
    let qh = q.adjoint();
    let mut gens = Vec::new();
    for p in 0..d {
        for r in 0..d {
            gens.push(&q * left_unit(d, p, r) * &qh);
        }
    }
    let omega = &q * schmidt(&normalized_weights(d, rng));
    (gens, omega)
}

/// Direct sum of two rotated 2x2 factors on C^8, a non-factor algebra
/// with a two-dimensional center.
fn random_direct_sum_fixture(rng: &mut impl Rng) -> (Vec<Op>, Vector) {
    let q = random_unitary(8, rng);
    let qh = q.adjoint();
    let mut gens = Vec::new();
    for block in 0..2 {
        for p in 0..2 {
            for r in 0..2 {
                let mut g = Op::zeros(8, 8);
                let small = left_unit(2, p, r);
                for i in 0..4 {
                    for j in 0..4 {
                        g[(4 * block + i, 4 * block + j)] = small[(i, j)];
                    }
                }
                gens.push(&q * g * &qh);
            }
        }
    }
    let mut omega = Vector::zeros(8);
    let mix: f64 = rng.gen_range(0.2..0.8);
    for (block, weight) in [(0usize, mix), (1usize, 1.0 - mix)] {
        let part = schmidt(&normalized_weights(2, rng));
        for i in 0..4 {
            omega[4 * block + i] = part[i] * C64::new(weight.sqrt(), 0.0);
        }
    }
    (gens, &q * omega)
}

/// Brute-force modular spectrum straight from the definition: solve the
/// matrix of S from aΩ ↦ a*Ω over a spanning family, form Δ = S*S, and
/// eigendecompose. Independent of the library construction.
fn brute_force_spectrum(ops: &[Op], omega: &Vector) -> Vec<f64> {
    let dim = omega.len();
    assert_eq!(ops.len(), dim);
    let mut x = Op::zeros(dim, dim);
    let mut y = Op::zeros(dim, dim);
    for (c, op) in ops.iter().enumerate() {
        x.set_column(c, &(op * omega));
        y.set_column(c, &(op.adjoint() * omega));
    }
    let mt = x
        .conjugate()
        .transpose()
        .lu()
        .solve(&y.transpose())
        .expect("cyclic state");
    let s = mt.transpose();
    let delta = s.transpose() * s.conjugate();
    let herm = (&delta + delta.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = herm.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

#[test]
fn modular_theorem_on_random_fixtures() {
    let start = Instant::now();
    let mut rng = rng_for(2024);
    let flow_times = [0.1, 1.0, 7.0];
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let (gens, omega) = if trial % 10 < 7 {
            let d = 2 + trial % 3;
            random_factor_fixture(d, &mut rng)
        } else {
            random_direct_sum_fixture(&mut rng)
        };
        let algebra = FiniteVNAlgebra::algebra_closure(&gens).unwrap();
        assert!(algebra.space_dim() <= 16);
        let data = compute_modular(&algebra, &omega).unwrap();
        let report = verify_tomita(&algebra, &data, &flow_times);
        worst = worst.max(report.max_residual());
    }
    assert!(
        worst <= 1e-9,
        "worst theorem residual {worst:.3e} exceeds 1e-9"
    );

    // The unbalanced two-factor state against the brute-force oracle.
    let d = 2;
    let mut units = Vec::new();
    for p in 0..d {
        for q in 0..d {
            units.push(left_unit(d, p, q));
        }
    }
    let omega = schmidt(&[2.0 / 3.0, 1.0 / 3.0]);
    let algebra = FiniteVNAlgebra::algebra_closure(&units).unwrap();
    let data = compute_modular(&algebra, &omega).unwrap();
    let mut got = data.delta_spectrum();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let oracle = brute_force_spectrum(&units, &omega);
    let expected = [0.5, 1.0, 1.0, 2.0];
    for ((g, o), e) in got.iter().zip(&oracle).zip(expected) {
        assert!((g - o).abs() <= 1e-12, "library {g} vs oracle {o}");
        assert!((g - e).abs() <= 1e-12, "library {g} vs exact {e}");
    }
    println!(
        "PASS modular theorem: 100 fixtures worst residual {worst:.3e} <= 1e-9, \
         unbalanced spectrum matches the oracle to 1e-12"
    );
    budget(start, 10, "modular theorem suite");
}

/// Wedges from moderately boosted frames: the reflection-translation
/// identity is compared at 1e-12, which the error of composing two
/// reflection matrices only respects while their entries stay small.
fn moderate_wedge(rng: &mut impl Rng) -> Wedge {
    loop {
        let axis = 1 + rng.gen_range(0..3usize);
        let g = PoincareElement::pure_translation(random_translation(rng))
            .compose(&PoincareElement::rotation(
                random_unit3(rng),
                rng.gen_range(0.0..6.28),
            ))
            .compose(&PoincareElement::boost(
                random_unit3(rng),
                rng.gen_range(-1.2..1.2),
            ));
        if let Ok(w) = Wedge::standard_along_axis(axis).transform(&g) {
            return w;
        }
    }
}

#[test]
fn wedge_calculus_round_trips() {
    let start = Instant::now();
    let mut rng = rng_for(77);

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let w = moderate_wedge(&mut rng);
        let xi = random_translation(&mut rng);
        let composed = w
            .translated(&xi)
            .edge_reflection()
            .compose(&w.edge_reflection());
        let predicted = PoincareElement::pure_translation(w.reflection_translation(&xi));
        worst = worst.max(composed.max_diff(&predicted));
    }
    assert!(
        worst <= 1e-12,
        "reflection-translation residual {worst:.3e} exceeds 1e-12"
    );
    let translation_worst = worst;

    let mut worst = 0.0f64;
    let mut longest = 0usize;
    for _ in 0..500 {
        let g = random_proper_poincare(&mut rng);
        let word = reflection_word(&g, 1e-9).expect("proper elements decompose");
        longest = longest.max(word.len());
        worst = worst.max(compose_reflections(&word).max_diff(&g));
    }
    assert!(
        worst <= 1e-9,
        "word recomposition residual {worst:.3e} exceeds 1e-9"
    );
    assert!(longest <= 10, "a word used {longest} reflections, limit 10");
    let word_worst = worst;

    let mut worst = 0.0f64;
    for _ in 0..200 {
        let lambda = random_proper_poincare(&mut rng);
        let mut pairs = Vec::new();
        while pairs.len() < 6 {
            let w = random_wedge(&mut rng);
            if let Ok(image) = w.transform(&lambda) {
                pairs.push((w, image));
            }
        }
        let found = identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9).unwrap();
        worst = worst
            .max(found.element.max_diff(&lambda))
            .max((found.scale - 1.0).abs());
    }
    assert!(
        worst <= 1e-9,
        "recognition residual {worst:.3e} exceeds 1e-9"
    );

    let mut pairs = Vec::new();
    while pairs.len() < 6 {
        let w = random_wedge(&mut rng);
        if let Ok(image) = Wedge::new(*w.ell_plus(), *w.ell_minus(), w.apex().scale(2.0)) {
            pairs.push((w, image));
        }
    }
    let dilation = identify_wedge_map(&WedgeMapSample::new(pairs), 1e-9).unwrap();
    assert!(
        (dilation.scale - 2.0).abs() <= 1e-12,
        "dilation scale {} is not 2 to 1e-12",
        dilation.scale
    );
    println!(
        "PASS wedge calculus: translation identity {translation_worst:.3e} <= 1e-12 on 1000, \
         500 words recompose to {word_worst:.3e} <= 1e-9 at length <= {longest}, \
         200 maps recovered to {worst:.3e} <= 1e-9, dilation scale exact"
    );
    budget(start, 30, "wedge calculus suite");
}

#[test]
fn model_reproduces_the_analytic_structure() {
    let start = Instant::now();
    let grid = RapidityGrid::new(1.0, 200, 0.05).unwrap();
    let top_energy = (200.0 * 0.05f64).cosh();
    let span = 3.0 / top_energy;
    let apex = FourVector::new(0.3, 1.1, 0.0, 0.0).scale(span);
    let fixture = healthy_model_net(grid, apex).unwrap();

    let mut rng = rng_for(31);
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
    let system = assemble_translations(&fixture, &xis).unwrap();
    assert!(system.max_internal_residual() <= 1e-12);
    let mut vs_analytic = 0.0f64;
    for xi in &xis {
        let built = system.u(xi).unwrap();
        let analytic = translation_rep(&grid, xi).unwrap();
        vs_analytic = vs_analytic.max(max_abs(&(built - analytic)));
    }
    assert!(
        vs_analytic <= 1e-12,
        "assembled translations differ from the analytic ones by {vs_analytic:.3e}"
    );

    // One-parameter family along a planar direction: V(t)^2 = V(2t) and
    // V(t) J0 = J0 V(t)^{-1}.
    let dir = FourVector::new(0.4, 0.9, 0.0, 0.0).scale(span);
    let base = fixture.members()[0].label.to_wedge();
    let j0 = fixture.members()[0].conj.clone();
    let mut flow_worst = 0.0f64;
    for t in [0.25, 0.5, 1.0] {
        let vt = build_axis_unitary(&fixture, &base, &dir.scale(t / 2.0)).unwrap();
        let v2t = build_axis_unitary(&fixture, &base, &dir.scale(t)).unwrap();
        flow_worst = flow_worst.max(max_abs(&(op_mul(&vt, &vt) - v2t)));
        let vt = SemilinearOp::Linear(vt);
        flow_worst = flow_worst.max(vt.compose(&j0).distance(&j0.compose(&vt.unitary_inverse())));
    }
    assert!(
        flow_worst <= 1e-12,
        "flow identities residual {flow_worst:.3e} exceeds 1e-12"
    );

    // Lipschitz bound on conjugation shifts, on interior vectors.
    let bound = conjugation_shift_bound(&grid, &dir).unwrap();
    let j_origin =
        wedge_conjugation(&grid, &ModelWedgeTag::right(FourVector::zero()).unwrap()).unwrap();
    let dim = grid.dim();
    let (lo, hi) = (dim / 4, (3 * dim) / 4);
    let mut violation = 0.0f64;
    for _ in 0..20 {
        let mut psi = Vector::zeros(dim);
        for k in lo..hi {
            psi[k] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let norm = psi.norm();
        for t in [0.05, 0.35, 1.0] {
            let tag = ModelWedgeTag::right(dir.scale(t)).unwrap();
            let jt = wedge_conjugation(&grid, &tag).unwrap();
            let moved = (jt.apply(&psi) - j_origin.apply(&psi)).norm();
            violation = violation.max(moved - bound * t * norm);
        }
    }
    assert!(
        violation <= 0.0,
        "shift bound violated by {violation:.3e} on an interior vector"
    );

    // Spectrum: forward cone for the healthy net, backward for the
    // time-reflected one, with no cone violation beyond 1e-12.
    let config = SpectrumConfig::default();
    let spectrum = spectrum_report(&system, &config).unwrap();
    assert!(
        matches!(spectrum.cone, Cone::Forward),
        "healthy cone is {:?}",
        spectrum.cone
    );
    let cone_violation = spectrum
        .points
        .iter()
        .map(|p| p.0[1].abs() - p.0[0])
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        cone_violation <= 1e-12,
        "a spectrum point leaves the forward cone by {cone_violation:.3e}"
    );

    let reflected = time_reflected_model_net(grid, apex).unwrap();
    let reflected_system = assemble_translations(&reflected, &xis).unwrap();
    let reflected_spectrum = spectrum_report(&reflected_system, &config).unwrap();
    assert!(
        matches!(reflected_spectrum.cone, Cone::Backward),
        "time-reflected cone is {:?}",
        reflected_spectrum.cone
    );
    println!(
        "PASS model structure: translations match analytic to {vs_analytic:.3e}, \
         flow identities to {flow_worst:.3e}, shift bound holds on 20 interior vectors, \
         cone Forward (worst margin {cone_violation:.3e}) and Backward when reflected"
    );
    budget(start, 20, "model suite");
}

fn outcome<'r>(report: &'r wedgelab::cgma::CgmaReport, name: &str) -> &'r CheckStatus {
    &report
        .outcome(name)
        .unwrap_or_else(|| panic!("no outcome named {name}"))
        .status
}

#[test]
fn condition_checks_discriminate() {
    let grid = RapidityGrid::new(1.0, 8, 0.25).unwrap();
    let apex = FourVector::new(0.3, 1.1, 0.0, 0.0);

    let healthy = healthy_model_net(grid, apex).unwrap();
    let report = check_cgma(&healthy);
    for name in [
        "conjugation-assignment",
        "reflection-covariance",
        "transport-words",
    ] {
        match outcome(&report, name) {
            CheckStatus::Pass => {}
            other => panic!("healthy {name} is {other:?}"),
        }
        let o = report.outcome(name).unwrap();
        assert!(
            o.residual <= 1e-10,
            "healthy {name} residual {:.3e}",
            o.residual
        );
    }
    assert!(
        matches!(
            outcome(&report, "intersection-standardness"),
            CheckStatus::Skipped { .. }
        ),
        "one-particle fixtures cannot evaluate the intersection condition"
    );

    let lambda = PoincareElement::pure_translation(apex);
    let word = vec![
        model_tag_id(&ModelWedgeTag::right(apex.scale(0.5)).unwrap()),
        healthy.members()[0].id.clone(),
    ];
    let star = check_star_relation(&healthy, &lambda, &word).unwrap();
    assert!(star.checked > 0);
    assert!(
        star.residual <= 1e-10,
        "star residual {:.3e} exceeds 1e-10",
        star.residual
    );

    // Each sabotage trips exactly its own alarm among the evaluated
    // conditions.
    let cases: [(&str, NetFixture, &str); 3] = [
        (
            "duplicate-conjugation",
            duplicate_conjugation_net(grid, apex).unwrap(),
            "conjugation-assignment",
        ),
        (
            "non-involutive",
            non_involutive_net(grid, apex).unwrap(),
            "reflection-covariance",
        ),
        (
            "wrong-wedge",
            wrong_wedge_net(grid, apex).unwrap(),
            "reflection-covariance",
        ),
    ];
    for (label, fixture, target) in &cases {
        let report = check_cgma(fixture);
        for o in &report.outcomes {
            match (&o.status, o.name == *target) {
                (CheckStatus::Fail, true) => {}
                (CheckStatus::Fail, false) => {
                    panic!("{label} also fails {}, expected only {target}", o.name)
                }
                (CheckStatus::Pass, true) => panic!("{label} does not trip {target}"),
                _ => {}
            }
        }
    }

    // The finite-dimensional two-factor fixture evaluates everything,
    // including the intersection condition.
    let two = two_factor_net().unwrap();
    let report = check_cgma(&two);
    for o in &report.outcomes {
        assert!(
            matches!(o.status, CheckStatus::Pass),
            "two-factor {} is {:?}",
            o.name,
            o.status
        );
    }
    println!(
        "PASS condition discrimination: healthy net passes with star residual {:.3e}, \
         three sabotages each trip only their own condition, two-factor passes all four",
        star.residual
    );
}

#[test]
fn modular_stability_certificates() {
    let grid = RapidityGrid::new(1.0, 200, 0.05).unwrap();
    let span = 3.0 / (200.0 * 0.05f64).cosh();
    let apex = FourVector::new(0.3, 1.1, 0.0, 0.0).scale(span);
    let fixture = healthy_model_net(grid, apex).unwrap();

    let report = check_modular_stability(&fixture, &[1, -2, 5]).unwrap();
    assert!(report.operator_unavailable.is_none());
    assert!(report.operator_checked > 0);
    assert!(
        report.operator_residual <= 1e-12,
        "covariance residual {:.3e} exceeds 1e-12 at commensurate flow times",
        report.operator_residual
    );
    let mut axes_seen = [false; 3];
    for cert in &report.certificates {
        axes_seen[cert.axis - 1] = true;
        assert!([0.5, 1.0].contains(&cert.rapidity));
        assert!(cert.word_len <= 10);
        assert!(
            cert.residual <= 1e-9,
            "axis {} rapidity {} certificate residual {:.3e}",
            cert.axis,
            cert.rapidity,
            cert.residual
        );
    }
    assert!(
        axes_seen.iter().all(|s| *s),
        "certificates must cover all three boost axes"
    );
    println!(
        "PASS modular stability: covariance {:.3e} <= 1e-12 on {} transported entries, \
         {} boost certificates round-trip to 1e-9",
        report.operator_residual,
        report.operator_checked,
        report.certificates.len()
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let bin = env!("CARGO_BIN_EXE_wedgelab");
    let tmp = tempfile::tempdir().unwrap();
    let mut transcripts = Vec::new();
    for run in 0..2 {
        let dir = tmp.path().join(format!("run{run}"));
        let mut bundle = Vec::new();
        for args in [
            vec!["geometry", "verify", "--samples", "60", "--seed", "7"],
            vec!["model", "verify", "--grid", "24", "--spacing", "0.1"],
        ] {
            let out = std::process::Command::new(bin)
                .arg("--json")
                .arg("--out")
                .arg(&dir)
                .args(&args)
                .output()
                .unwrap();
            assert!(out.status.success(), "{args:?} failed: {out:?}");
            bundle.push(out.stdout);
        }
        for name in ["geometry_report.json", "model_report.json", "spectrum.csv"] {
            bundle.push(std::fs::read(dir.join(name)).unwrap());
        }
        transcripts.push(bundle);
    }
    assert_eq!(
        transcripts[0], transcripts[1],
        "identical invocations must produce byte-identical reports"
    );
    println!("PASS determinism: two runs agree byte for byte across reports and spectrum data");
}
