//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use common::*;
use lqss_core::krein::schur::EigenOrdering;
use lqss_core::krein::{bogoliubov_residual, doubled_up};
use lqss_core::linalg::eigenvalues;
use lqss_core::random::{
    bogoliubov_from_factors, random_bogoliubov, random_general_system, random_passive_system, random_unitary,
    sample_until,
};
use lqss_core::{
    assemble_cascade, assemble_feedback, bloch_messiah, cascade_general, cascade_passive, cayley,
    decompose_bogoliubov, feedback_general, feedback_passive, inverse_cayley, krein_schur, krein_svd,
    reck_decompose, verify_equivalence, ComplexMatrix, EquivalenceReport, Error, FreeParams, FrequencySpec,
    GeneralSystem, PassiveSystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRINT_TOL: f64 = 1e-3;
const EQUIV_TOL: f64 = 1e-6;
const PER_PATH: usize = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(got: f64, want: f64, what: &str) -> Result<(), String> {
    ensure((got - want).abs() <= PRINT_TOL, || format!("{what}: got {got:.5}, want {want:.4}"))
}

/// Pairs each reference value with the nearest unused computed value.
fn match_multiset(got: &[C], reference: &[C]) -> Result<(), String> {
    ensure(got.len() == reference.len(), || format!("{} values, expected {}", got.len(), reference.len()))?;
    let mut free: Vec<C> = got.to_vec();
    for want in reference {
        let (k, d) = free
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (z - want).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or("no values")?;
        ensure(d <= PRINT_TOL, || format!("no eigenvalue near {want}; closest is {}", free[k]))?;
        free.swap_remove(k);
    }
    Ok(())
}

// ---- 1-4: reference systems ---------------------------------------------

fn passive_cascade_reference() -> Outcome {
    let start = Instant::now();
    let sys = three_mode_passive();
    let order = EigenOrdering::Explicit(REF_PASSIVE_DIAG.iter().map(|&(re, im)| c(re, im)).collect());
    let r = cascade_passive(&sys, &order).map_err(|e| e.to_string())?;
    for (d, want) in r.detunings().iter().zip(REF_PASSIVE_DETUNINGS) {
        close(*d, want, "detuning")?;
    }
    let ev = eigenvalues(&sys.generator()).map_err(|e| e.to_string())?;
    let reference: Vec<C> = REF_PASSIVE_DIAG.iter().map(|&(re, im)| c(re, im)).collect();
    match_multiset(&ev, &reference)?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("detunings {:.4?}", r.detunings()))
}

fn passive_feedback_reference() -> Outcome {
    let start = Instant::now();
    let sys = three_mode_passive();
    let r = feedback_passive(&sys, &FreeParams::standard(3)).map_err(|e| e.to_string())?;
    for (k, want) in REF_PASSIVE_NHAT.iter().enumerate() {
        close(r.n_hat[(k, k)].norm(), *want, "Nhat diagonal")?;
    }
    let top = |x: &ComplexMatrix| x.view((0, 0), (3, 3)).into_owned();
    let phi = phase_gauge(&top(&r.state_transform), &ref_passive_w());
    let m_hat = phi.adjoint() * top(&r.m_hat) * &phi;
    close(m_hat[(0, 0)].re, 3.1315, "Mhat[0,0]")?;
    let gain = phi.adjoint() * top(&r.feedback_gain) * &phi;
    let dev = max_abs(&(gain - ref_passive_r()));
    ensure(dev <= PRINT_TOL, || format!("R deviates by {dev:.2e}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.2}s"))?;
    Ok(format!("R max deviation {dev:.1e} after phase alignment"))
}

fn general_cascade_reference() -> Outcome {
    let sys = two_mode_general();
    let r = cascade_general(&sys, &EigenOrdering::AscendingReal).map_err(|e| e.to_string())?;
    for (d, want) in r.detunings().iter().zip(REF_GENERAL_DETUNINGS) {
        close(*d, want, "detuning")?;
    }
    let ev = eigenvalues(&sys.generator()).map_err(|e| e.to_string())?;
    let reference: Vec<C> = REF_GENERAL_DIAG
        .iter()
        .flat_map(|&(re, im)| [c(re, im), c(re, -im)])
        .collect();
    match_multiset(&ev, &reference)?;
    Ok(format!("detunings {:.4?}", r.detunings()))
}

fn general_feedback_reference() -> Outcome {
    let sys = two_mode_general();
    let nn = flat(&sys.n) * &sys.n;
    let mut ev: Vec<C> = eigenvalues(&nn).map_err(|e| e.to_string())?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    for (k, e) in ev.iter().enumerate() {
        let want = if k < 2 { -REF_GENERAL_NN_EIGEN } else { REF_GENERAL_NN_EIGEN };
        ensure((e - c(want, 0.0)).norm() <= PRINT_TOL, || format!("N^flat N eigenvalues {ev:?}"))?;
    }
    let r = feedback_general(&sys, &FreeParams::standard(2)).map_err(|e| e.to_string())?;
    let nonzero: Vec<f64> = r.n_hat.iter().map(|z| z.norm()).filter(|&v| v > 1e-9).collect();
    ensure(nonzero.len() == 4, || format!("Nhat has {} nonzero entries", nonzero.len()))?;
    for v in nonzero {
        close(v, REF_GENERAL_NHAT_ENTRY, "Nhat entry")?;
    }
    let gamma = mode_gauge(&r.state_transform, &ref_general_w());
    let inv = gamma.clone().try_inverse().ok_or("singular gauge")?;
    let checks = [
        ("Mhat", gamma.adjoint() * &r.m_hat * &gamma, ref_general_m_hat()),
        ("X", &inv * &r.x * &gamma, ref_general_x()),
        ("R", &inv * &r.feedback_gain * &gamma, ref_general_r()),
    ];
    let mut worst = 0.0f64;
    for (name, ours, reference) in &checks {
        // Entries are printed to 4 decimals; compare relative to magnitude.
        let dev = (ours - reference)
            .iter()
            .zip(reference.iter())
            .map(|(d, r)| d.norm() / r.norm().max(1.0))
            .fold(0.0, f64::max);
        ensure(dev <= PRINT_TOL, || format!("{name} deviates by {dev:.2e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("Mhat, X, R within {worst:.1e} after per-mode gauge"))
}

// ---- 5 and 8: random suite ---------------------------------------------

struct Case {
    path: &'static str,
    passive: bool,
    source: GeneralSystem,
    realized: GeneralSystem,
    report: EquivalenceReport,
    oracle_error: f64,
    pair_blocks: usize,
}

struct Suite {
    cases: Vec<Case>,
    skipped: Vec<String>,
    seconds: f64,
}

fn shape(k: usize) -> (usize, usize) {
    (1 + k % 6, 1 + (k / 6) % 4)
}

fn passive_case(path: &'static str, sys: &PassiveSystem) -> Result<Case, String> {
    let source = sys.embed();
    let (realized, oracle_error) = match path {
        "passive cascade" => {
            let r = cascade_passive(sys, &EigenOrdering::default()).map_err(|e| e.to_string())?;
            let err = max_rel_error(|s| system_transfer(&source, s), |s| cascade_transfer(&r.pre_network, &r.cavities, s));
            (assemble_cascade(&r).map_err(|e| e.to_string())?, err)
        }
        _ => {
            let r = feedback_passive(sys, &FreeParams::standard(sys.n_modes())).map_err(|e| e.to_string())?;
            let err = max_rel_error(|s| system_transfer(&source, s), |s| feedback_transfer(&r, s));
            (assemble_feedback(&r).map_err(|e| e.to_string())?, err)
        }
    };
    let report = verify_equivalence(&source, &realized, &FrequencySpec::default(), EQUIV_TOL).map_err(|e| e.to_string())?;
    Ok(Case { path, passive: true, source, realized, report, oracle_error, pair_blocks: 0 })
}

/// Squeezing strength of random general systems. The cascade path needs
/// a non-neutral eigenvector at every deflation step, which fails more
/// often as the active couplings grow.
fn active_scale(path: &str) -> f64 {
    if path == "general cascade" {
        0.3
    } else {
        0.5
    }
}

fn general_case(path: &'static str, rng: &mut ChaCha8Rng, n: usize, m: usize) -> Option<Case> {
    let (source, (realized, oracle_error, pair_blocks)) = sample_until(
        rng,
        |r| random_general_system::<f64, _>(r, n, m, active_scale(path)),
        |sys| {
            if path == "general cascade" {
                let ev = eigenvalues(&sys.generator()).ok()?;
                if ev.iter().any(|z| z.im.abs() <= 1e-3) {
                    return None;
                }
                let r = cascade_general(sys, &EigenOrdering::default()).ok()?;
                let err = max_rel_error(|s| system_transfer(sys, s), |s| cascade_transfer(&r.pre_network, &r.cavities, s));
                Some((assemble_cascade(&r).ok()?, err, 0))
            } else {
                let r = feedback_general(sys, &FreeParams::standard(n)).ok()?;
                let err = max_rel_error(|s| system_transfer(sys, s), |s| feedback_transfer(&r, s));
                Some((assemble_feedback(&r).ok()?, err, r.pair_blocks.len()))
            }
        },
    )?;
    let report = verify_equivalence(&source, &realized, &FrequencySpec::default(), EQUIV_TOL).ok()?;
    Some(Case { path, passive: false, source, realized, report, oracle_error, pair_blocks })
}

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let start = Instant::now();
        let mut cases = Vec::new();
        let mut skipped = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
        for path in ["passive cascade", "passive feedback"] {
            for k in 0..PER_PATH {
                let (n, m) = shape(k);
                let sys = random_passive_system::<f64, _>(&mut rng, n, m);
                match passive_case(path, &sys) {
                    Ok(case) => cases.push(case),
                    Err(e) => skipped.push(format!("{path} n={n} m={m}: {e}")),
                }
            }
        }
        for path in ["general cascade", "general feedback"] {
            let mut accepted = 0;
            let mut k = 0;
            while accepted < PER_PATH && k < 2 * PER_PATH {
                let (n, m) = shape(k);
                k += 1;
                match general_case(path, &mut rng, n, m) {
                    Some(case) => {
                        cases.push(case);
                        accepted += 1;
                    }
                    None => skipped.push(format!("{path} n={n} m={m}: resample cap reached")),
                }
            }
        }
        Suite { cases, skipped, seconds: start.elapsed().as_secs_f64() }
    })
}

fn equivalence_suite() -> Outcome {
    let s = suite();
    for skip in &s.skipped {
        println!("    skipped: {skip}");
    }
    let mut worst = 0.0f64;
    for path in ["passive cascade", "passive feedback", "general cascade", "general feedback"] {
        let cases: Vec<&Case> = s.cases.iter().filter(|c| c.path == path).collect();
        ensure(cases.len() >= PER_PATH, || format!("{path}: only {} systems realized", cases.len()))?;
        for c in &cases {
            ensure(c.report.frequencies.len() == 21, || "expected 21 samples".into())?;
            ensure(c.report.passed(), || {
                let failed: Vec<String> = c
                    .report
                    .structural_checks
                    .iter()
                    .filter(|s| !s.pass)
                    .map(|s| format!("{} = {:.2e}", s.name, s.value))
                    .collect();
                format!(
                    "{path} n={} m={}: error {:.2e}, failed checks {failed:?}",
                    c.source.n_modes(),
                    c.source.n_io(),
                    c.report.max_rel_error
                )
            })?;
            ensure(c.oracle_error <= EQUIV_TOL, || format!("{path}: oracle error {:.2e}", c.oracle_error))?;
            worst = worst.max(c.report.max_rel_error).max(c.oracle_error);
        }
    }
    let pairs: usize = s.cases.iter().map(|c| c.pair_blocks).sum();
    ensure(pairs > 0, || "no complex-pair cavity blocks were exercised".into())?;
    ensure(s.seconds < 60.0, || format!("took {:.1}s", s.seconds))?;
    Ok(format!(
        "{} systems, worst error {worst:.1e}, {pairs} pair blocks, {} skipped, {:.1}s",
        s.cases.len(),
        s.skipped.len(),
        s.seconds
    ))
}

fn realizability() -> Outcome {
    let s = suite();
    let mut worst = 0.0f64;
    for c in &s.cases {
        let g = |z: C| transfer(&c.realized.s, &c.realized.n, &c.realized.m, z);
        let res = flat_unitarity(g);
        ensure(res <= 1e-8, || format!("{}: G^flat G - I = {res:.2e}", c.path))?;
        if c.passive {
            let k = c.realized.n_io();
            for z in grid() {
                let gz = g(z);
                let g1 = gz.view((0, 0), (k, k)).into_owned();
                let g2 = gz.view((0, k), (k, k)).into_owned();
                let scale = max_abs(&g1).max(1.0).powi(2);
                let r = max_abs(&(g1.adjoint() * &g1 - eye(k))) / scale;
                ensure(r <= 1e-8 && max_abs(&g2) <= 1e-8, || format!("{}: G^H G - I = {r:.2e}", c.path))?;
                worst = worst.max(r);
            }
        }
        worst = worst.max(res);
    }
    ensure(!s.cases.is_empty(), || "no assembled netlists".into())?;
    Ok(format!("{} netlists, worst residual {worst:.1e}", s.cases.len()))
}

// ---- 6, 7: decomposition oracles ----------------------------------------

fn relative(m: &ComplexMatrix) -> f64 {
    max_abs(m).max(1.0)
}

fn decomposition_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut schur_res, mut svd_res, mut bog, mut gain_res) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut skipped = 0;
    let (mut accepted, mut k) = (0, 0);
    while accepted < 200 && k < 400 {
        let (n, m) = shape(k);
        k += 1;
        let draw = sample_until(
            &mut rng,
            |r| random_general_system::<f64, _>(r, n, m, 0.3).generator(),
            |f| {
                let ev = eigenvalues(f).ok()?;
                if ev.iter().any(|z| z.im.abs() <= 1e-3) {
                    return None;
                }
                krein_schur(f, &EigenOrdering::default()).ok()
            },
        );
        let Some((f, d)) = draw else {
            skipped += 1;
            continue;
        };
        accepted += 1;
        let recon = &d.w * &d.t * flat(&d.w);
        schur_res = schur_res.max(max_abs(&(recon - &f)) / relative(&f));
        bog = bog.max(bogoliubov_residual(&d.w));
        let lower_t2 = (0..n).all(|i| (i..n).all(|j| d.t[(i, n + j)].norm() <= 1e-8 * relative(&f)));
        let lower_t1 = (0..n).all(|i| (i + 1..n).all(|j| d.t[(i, j)].norm() <= 1e-8 * relative(&f)));
        ensure(lower_t1 && lower_t2, || format!("triangular form broken at n={n}"))?;
    }
    let schur_count = accepted;
    let (mut accepted, mut k) = (0, 0);
    while accepted < 200 && k < 400 {
        let (n, m) = shape(k);
        k += 1;
        let draw = sample_until(
            &mut rng,
            |r| random_general_system::<f64, _>(r, n, m, 0.5),
            |sys| {
                let d = krein_svd(&sys.n, 1e-8).ok()?;
                let r = feedback_general(sys, &FreeParams::standard(n)).ok()?;
                Some((d, r.feedback_gain))
            },
        );
        let Some((sys, (d, gain))) = draw else {
            skipped += 1;
            continue;
        };
        accepted += 1;
        let recon = &d.v * &d.n_hat * flat(&d.w);
        svd_res = svd_res.max(max_abs(&(recon - &sys.n)) / relative(&sys.n));
        bog = bog.max(bogoliubov_residual(&d.v)).max(bogoliubov_residual(&d.w));
        gain_res = gain_res.max(bogoliubov_residual(&gain) / relative(&gain).powi(2));
    }
    ensure(schur_count == 200 && accepted == 200, || {
        format!("only {schur_count} / {accepted} admissible inputs, {skipped} draws hit the resample cap")
    })?;
    ensure(schur_res <= 1e-8, || format!("krein_schur residual {schur_res:.2e}"))?;
    ensure(svd_res <= 1e-8, || format!("krein_svd residual {svd_res:.2e}"))?;
    ensure(bog <= 1e-10, || format!("V/W Bogoliubov residual {bog:.2e}"))?;
    ensure(gain_res <= 1e-10, || format!("R Bogoliubov residual {gain_res:.2e} (relative to |R|^2)"))?;
    Ok(format!(
        "200 + 200 inputs ({skipped} skipped at the resample cap): schur {schur_res:.1e}, svd {svd_res:.1e}, \
         V/W {bog:.1e}, R {gain_res:.1e} (relative to |R|^2)"
    ))
}

fn cayley_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut round, mut skew) = (0.0f64, 0.0f64);
    for k in 0..200 {
        let size = 1 + k % 4;
        let r = if k % 2 == 0 {
            random_unitary::<f64, _>(&mut rng, size)
        } else {
            random_bogoliubov::<f64, _>(&mut rng, size, 0.8)
        };
        let x = cayley(&r).map_err(|e| e.to_string())?;
        let back = inverse_cayley(&x).map_err(|e| e.to_string())?;
        round = round.max(max_abs(&(back - &r)) / relative(&r));
        let adj = if k % 2 == 0 { x.adjoint() } else { flat(&x) };
        skew = skew.max(max_abs(&(adj + &x)) / relative(&x));
    }
    ensure(round <= 1e-10, || format!("round trip {round:.2e}"))?;
    ensure(skew <= 1e-10, || format!("skew residual {skew:.2e}"))?;
    Ok(format!("round trip {round:.1e}, skew residual {skew:.1e} (relative to max|X|)"))
}

// ---- 9: static networks -----------------------------------------------

fn static_networks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut x_err, mut bm_res, mut reck_res) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..100 {
        let m = 1 + k % 4;
        let mut x: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.5)).collect();
        if k % 5 == 0 && m > 1 {
            x[1] = x[0];
        }
        if k % 7 == 0 {
            x[m - 1] = 0.0;
        }
        let u2 = random_unitary::<f64, _>(&mut rng, m);
        let u1 = random_unitary::<f64, _>(&mut rng, m);
        let r = bogoliubov_from_factors(&u2, &x, &u1);
        let f = bloch_messiah(&r).map_err(|e| e.to_string())?;
        x.sort_by(|a, b| b.total_cmp(a));
        x_err = x_err.max(f.x.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        for u in [&f.u1, &f.u2] {
            let res = max_abs(&(u.adjoint() * u - eye(m)));
            ensure(res <= 1e-10, || format!("Bloch–Messiah unitary residual {res:.2e}"))?;
        }
        let dec = decompose_bogoliubov(&r).map_err(|e| e.to_string())?;
        bm_res = bm_res.max(max_abs(&(dec.matrix() - &r)) / relative(&r));

        let u = random_unitary::<f64, _>(&mut rng, m);
        let dec = reck_decompose(&u).map_err(|e| e.to_string())?;
        ensure(dec.beam_splitter_count() <= m * (m - 1) / 2, || {
            format!("{} beam splitters for m={m}", dec.beam_splitter_count())
        })?;
        ensure(dec.squeezer_count() == 0, || "squeezer in passive mesh".into())?;
        reck_res = reck_res.max(max_abs(&(dec.matrix() - &u)));
        let doubled = doubled_up(&u, &ComplexMatrix::zeros(m, m));
        ensure(max_abs(&(dec.doubled_matrix() - doubled)) <= 1e-8, || "doubled Reck product".into())?;
    }
    ensure(x_err <= 1e-8, || format!("squeezing recovered to {x_err:.2e}"))?;
    ensure(bm_res <= 1e-8, || format!("Bloch–Messiah product residual {bm_res:.2e}"))?;
    ensure(reck_res <= 1e-8, || format!("Reck product residual {reck_res:.2e}"))?;
    Ok(format!("squeezing {x_err:.1e}, products {bm_res:.1e} / {reck_res:.1e}"))
}

// ---- 10: negative paths -------------------------------------------------

fn one_mode(n1: C, n2: C, m1: C, m2: C) -> GeneralSystem {
    let b = |z: C| ComplexMatrix::from_element(1, 1, z);
    GeneralSystem::new(eye(2), doubled_up(&b(n1), &b(n2)), doubled_up(&b(m1), &b(m2))).unwrap()
}

fn negative_paths() -> Outcome {
    let mut seen = Vec::new();

    // Degenerate parametric amplifier: F has the simple real eigenvalues 0, -1.
    let dpa = one_mode(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0));
    match cascade_general(&dpa, &EigenOrdering::default()) {
        Err(Error::AssumptionIViolated { .. }) => seen.push("AssumptionIViolated"),
        other => return Err(format!("real-eigenvalue system gave {other:?}")),
    }

    let n1 = real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    let n2 = real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let defective = GeneralSystem::new(eye(4), doubled_up(&n1, &n2), eye(4)).unwrap();
    match feedback_general(&defective, &FreeParams::standard(2)) {
        Err(Error::NotSemisimple { .. }) => seen.push("NotSemisimple"),
        other => return Err(format!("defective N^flat N gave {:?}", other.map(|_| "a netlist"))),
    }

    let balanced = one_mode(c(1.0, 0.0), c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.0));
    match feedback_general(&balanced, &FreeParams::standard(1)) {
        Err(Error::KernelMismatch { .. }) => seen.push("KernelMismatch"),
        other => return Err(format!("kernel-mismatched N gave {:?}", other.map(|_| "a netlist"))),
    }

    // Detuning chosen so that X = 2iJ(Mhat - Mbar) has the eigenvalue -1.
    let squeezed = one_mode(c(1.0, 0.0), c(0.0, 0.0), c(0.2, 0.0), c(0.9, 0.3));
    let r = feedback_general(&squeezed, &FreeParams::standard(1)).map_err(|e| e.to_string())?;
    let (h, mu) = (r.m_hat[(0, 0)].re, r.m_hat[(0, 1)].norm());
    let params = FreeParams { detunings: vec![h - (mu * mu - 0.25).sqrt()], interconnect_couplings: vec![1.0] };
    match feedback_general(&squeezed, &params) {
        Err(Error::CayleySingular { .. }) => seen.push("CayleySingular"),
        other => return Err(format!("singular X + I gave {:?}", other.map(|_| "a netlist"))),
    }

    let sys = three_mode_passive().embed();
    let pole = eigenvalues(&sys.generator()).map_err(|e| e.to_string())?[0];
    match sys.transfer_function(pole) {
        Err(Error::PoleAt { .. }) => seen.push("PoleAt"),
        other => return Err(format!("evaluating at a pole gave {:?}", other.map(|_| "a matrix"))),
    }
    Ok(seen.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("passive cascade reference", passive_cascade_reference),
        ("passive feedback reference", passive_feedback_reference),
        ("general cascade reference", general_cascade_reference),
        ("general feedback reference", general_feedback_reference),
        ("transfer-function equivalence suite", equivalence_suite),
        ("Krein decomposition oracles", decomposition_oracles),
        ("Cayley round trip", cayley_round_trip),
        ("physical realizability", realizability),
        ("Bloch–Messiah and Reck", static_networks),
        ("negative paths", negative_paths),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
