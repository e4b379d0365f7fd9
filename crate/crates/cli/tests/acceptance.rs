//! Acceptance gate: one test per release criterion, each printing a single
//! `C..: PASS`/`C..: FAIL` line (visible with `cargo test --test acceptance
//! -- --show-output`). The criteria pin cross-resolution consistency, exact
//! low-mode behavior, bound verification across the parameter grid, blow-up
//! estimation, the dissipation threshold, inequality probes, solver
//! cross-validation, convergence stability, and byte-level reproducibility.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use transport_core::analysis::{
    amgm_rearrangement_check, critical_kappa, energy_ratio_probe, estimate_blowup_time, g_func,
    h1_monotonicity_check, h_func, integrate_asymmetric, minorant_term_ratio, BlowupVerdict,
};
use transport_core::hierarchy;
use transport_core::integrate::IntegratorConfig;
use transport_core::pseudospectral::integrate_pde;
use transport_core::{InitialData, ModelParams};

fn criterion(label: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("{label}: PASS"),
        Err(why) => {
            println!("{label}: FAIL — {why}");
            panic!("{label}: {why}");
        }
    }
}

fn transport(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transport"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn expect_exit(args: &[&str], want: i32) -> Result<Output, String> {
    let out = transport(args);
    let got = out.status.code().unwrap_or(-1);
    if got == want {
        Ok(out)
    } else {
        Err(format!(
            "`transport {}` exited {got}, wanted {want}; stderr: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

#[test]
fn c01_mode_hierarchy_is_resolution_stable() {
    criterion("C01 doubling the truncation leaves the retained modes fixed", || {
        let start = Instant::now();
        let tol = 1e-10;
        let cfg = IntegratorConfig::new(1e-3, 0.4)
            .with_tol(tol)
            .with_sample_interval(0.1)
            .with_overflow_guard(1e40);
        let mut finals = Vec::new();
        for n_modes in [32usize, 64] {
            let init = InitialData::threshold(1.0, n_modes).map_err(|e| e.to_string())?;
            let params =
                ModelParams::main_case(0.0, 1.0, 1.0, n_modes).map_err(|e| e.to_string())?;
            let run = hierarchy::integrate(&init, &params, &cfg).map_err(|e| e.to_string())?;
            if !run.outcome.is_completed() {
                return Err(format!("N={n_modes} run ended early: {:?}", run.outcome));
            }
            let last = run.trajectory.final_state().map_err(|e| e.to_string())?;
            finals.push(last.modes().to_vec());
        }
        let mut worst = 0.0f64;
        for n in 0..32 {
            let (a, b) = (finals[0][n], finals[1][n]);
            let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
        }
        if worst > 4.0 * tol {
            return Err(format!("worst relative deviation {worst:e} > {:e}", 4.0 * tol));
        }
        if start.elapsed() > Duration::from_secs(1) {
            return Err(format!("took {:?}, budget 1s", start.elapsed()));
        }
        Ok(())
    });
}

#[test]
fn c02_low_modes_match_hand_integration() {
    criterion("C02 closed-form low modes reproduced to 1e-9", || {
        // N = 3 keeps the truncation exact; with κ = 0 and A_n = 3/n⁵ the
        // first three modes integrate by hand:
        //     w₁ = 3/2,
        //     w₂(t) = 3/64 + (9/4)t,
        //     w₃(t) = 1/162 + (9/32)t + (27/4)t².
        let init = InitialData::power_law(1.0, 5.0, 3).map_err(|e| e.to_string())?;
        let params = ModelParams::main_case(0.0, 1.0, 1.0, 3).map_err(|e| e.to_string())?;
        for t in [0.1, 0.25] {
            let cfg = IntegratorConfig::new(1e-3, t).with_tol(1e-12);
            let run = hierarchy::integrate(&init, &params, &cfg).map_err(|e| e.to_string())?;
            let last = run.trajectory.final_state().map_err(|e| e.to_string())?;
            let w2 = 3.0 / 64.0 + 9.0 / 4.0 * t;
            let w3 = 1.0 / 162.0 + 9.0 / 32.0 * t + 27.0 / 4.0 * t * t;
            for (n, want) in [(1, 1.5), (2, w2), (3, w3)] {
                let got = last.mode(n).map_err(|e| e.to_string())?;
                if (got - want).abs() > 1e-9 {
                    return Err(format!("w{n}({t}) = {got:.12e}, expected {want:.12e}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c03_lower_bounds_hold_for_undamped_threshold_data() {
    criterion("C03 proven mode lower bounds verified up to 0.9/(2δ)", || {
        let start = Instant::now();
        for (delta, t_end) in [("0.5", "0.9"), ("1", "0.45")] {
            expect_exit(
                &[
                    "verify-bounds",
                    "--family",
                    "threshold",
                    "--delta",
                    delta,
                    "--t-end",
                    t_end,
                    "--guard",
                    "1e40",
                ],
                0,
            )?;
        }
        if start.elapsed() > Duration::from_secs(5) {
            return Err(format!("took {:?}, budget 5s", start.elapsed()));
        }
        Ok(())
    });
}

#[test]
fn c04_lower_bounds_hold_under_subcritical_dissipation() {
    criterion("C04 bounds verified for κ ∈ {0.2, 0.4} × α ∈ {0.3, 0.7, 1}", || {
        for (kappa, t_end) in [("0.2", "4.5"), ("0.4", "2.25")] {
            for alpha in ["0.3", "0.7", "1"] {
                expect_exit(
                    &[
                        "verify-bounds",
                        "--family",
                        "threshold",
                        "--delta",
                        "1",
                        "--kappa",
                        kappa,
                        "--alpha",
                        alpha,
                        "--t-end",
                        t_end,
                        "--guard",
                        "1e300",
                    ],
                    0,
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn c05_blowup_time_estimates_stay_within_proven_bounds() {
    criterion("C05 fitted singularity times respect the proven bounds", || {
        for (kappa, limit) in [(0.0, 0.5), (0.4, 2.5)] {
            let init = InitialData::threshold(1.0, 32).map_err(|e| e.to_string())?;
            let params = ModelParams::main_case(kappa, 1.0, 1.0, 32).map_err(|e| e.to_string())?;
            let cfg = IntegratorConfig::new(1e-3, 0.5)
                .with_tol(1e-10)
                .with_sample_interval(0.01);
            let run = hierarchy::integrate(&init, &params, &cfg).map_err(|e| e.to_string())?;
            let fit = estimate_blowup_time(&run.trajectory).map_err(|e| e.to_string())?;
            match fit.verdict {
                BlowupVerdict::Blowup { t_fit, .. } => {
                    if t_fit > limit * 1.15 {
                        return Err(format!(
                            "κ={kappa}: T_fit = {t_fit:.6e} exceeds {limit} + 15%"
                        ));
                    }
                }
                other => return Err(format!("κ={kappa}: unexpected verdict {other:?}")),
            }
        }
        // Independent divergence evidence: past t = 1/(2δ) the minorant's
        // successive-term ratio exceeds 1, so its series cannot converge.
        let ratio = minorant_term_ratio(64, 0.6, 1.0, 0.0);
        if ratio <= 1.0 {
            return Err(format!("term ratio {ratio} at t=0.6 should exceed 1"));
        }
        Ok(())
    });
}

#[test]
fn c06_dissipation_threshold_matches_the_closed_form() {
    criterion("C06 critical dissipation strength and its sharpness", || {
        // 2/(2e−1), evaluated separately to 50 digits.
        let oracle = 0.45079934712112815793;
        let kc = critical_kappa(1.0);
        if (kc - oracle).abs() > 1e-12 {
            return Err(format!("critical_kappa(1) = {kc:.16e} vs {oracle:.16e}"));
        }
        for i in 1..=100 {
            let kappa = 0.01 * i as f64;
            let grows = g_func(1.0 / kappa, 1.0, kappa) > 1.0;
            let subcritical = kappa < kc;
            if grows != subcritical {
                return Err(format!(
                    "κ={kappa}: growth-at-1/κ {grows} disagrees with κ<κ_c {subcritical}"
                ));
            }
        }
        Ok(())
    });
}

#[test]
fn c07_dissipation_comparison_integrand_stays_nonnegative() {
    criterion("C07 auxiliary comparison function nonnegative on the grid", || {
        for n in 2..=16usize {
            for i in 0..=8 {
                let t = 0.25 * i as f64;
                for kappa in [0.5, 1.0] {
                    for alpha in [0.25, 0.5, 0.75] {
                        let h = h_func(n, t, kappa, alpha, 1.0, 32).map_err(|e| e.to_string())?;
                        if h < -1e-10 {
                            return Err(format!("h({n}, {t}, {kappa}, {alpha}) = {h:e}"));
                        }
                        if t == 0.0 && h != 0.0 {
                            return Err(format!("h({n}, 0) = {h:e}, expected exactly 0"));
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn c08_collocation_crosschecks_the_mode_hierarchy() {
    criterion("C08 independent solvers agree on the first 16 modes", || {
        let start = Instant::now();
        for kappa in ["0", "0.2"] {
            let out = expect_exit(
                &[
                    "compare",
                    "--family",
                    "threshold",
                    "--delta",
                    "0.5",
                    "--kappa",
                    kappa,
                    "--t-end",
                    "0.3",
                ],
                0,
            )?;
            let text = String::from_utf8_lossy(&out.stdout).to_string();
            if !text.contains("PASS") {
                return Err(format!("κ={kappa}: expected PASS summary, got: {text}"));
            }
        }
        if start.elapsed() > Duration::from_secs(10) {
            return Err(format!("took {:?}, budget 10s", start.elapsed()));
        }
        Ok(())
    });
}

#[test]
fn c09_structural_inequalities_hold() {
    criterion("C09 monotonicity, rearrangement, and domination probes", || {
        // Gradient-square variant: the H¹ norm must not increase.
        let sine = InitialData::explicit(vec![1.0]).map_err(|e| e.to_string())?;
        let pde_params =
            ModelParams::new(0, 1, 0.0, 1.0, 1.0, 1, 256).map_err(|e| e.to_string())?;
        let cfg = IntegratorConfig::new(1e-3, 0.3).with_sample_interval(0.01);
        let run = integrate_pde(&sine, &pde_params, &cfg).map_err(|e| e.to_string())?;
        let verdict = h1_monotonicity_check(&run.snapshots, &pde_params).map_err(|e| e.to_string())?;
        if !verdict.pass {
            return Err(format!("H1 rose by {:e}", verdict.max_increase));
        }

        // Weighted rearrangement inequality on random nonnegative sequences.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..10_000 {
            let len = rng.gen_range(1..=63);
            let w: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
            let check = amgm_rearrangement_check(&w, len + 1).map_err(|e| e.to_string())?;
            if !check.holds {
                return Err(format!(
                    "trial {trial}: lhs {:e} < rhs {:e}",
                    check.lhs, check.rhs
                ));
            }
        }

        // The asymmetric hierarchy dominates its symmetrized minorant.
        let init = InitialData::threshold(1.0, 32).map_err(|e| e.to_string())?;
        let params = ModelParams::main_case(0.0, 1.0, 1.0, 32).map_err(|e| e.to_string())?;
        let cfg = IntegratorConfig::new(1e-3, 0.3).with_tol(1e-10);
        let asym = integrate_asymmetric(&init, &params, &cfg, false).map_err(|e| e.to_string())?;
        let sym = integrate_asymmetric(&init, &params, &cfg, true).map_err(|e| e.to_string())?;
        let wa = asym.trajectory.final_state().map_err(|e| e.to_string())?;
        let ws = sym.trajectory.final_state().map_err(|e| e.to_string())?;
        for n in 1..=32 {
            let a = wa.mode(n).map_err(|e| e.to_string())?;
            let b = ws.mode(n).map_err(|e| e.to_string())?;
            if a - b < -1e-9 {
                return Err(format!("mode {n}: asymmetric {a:e} below symmetrized {b:e}"));
            }
        }
        Ok(())
    });
}

#[test]
fn c10_energy_ratio_is_stable_under_step_halving() {
    criterion("C10 normalized energy growth rate stable to 1% under dt/2", || {
        let init = InitialData::threshold(1.0, 32).map_err(|e| e.to_string())?;
        let params = ModelParams::main_case(0.0, 1.0, 1.0, 32).map_err(|e| e.to_string())?;
        let mut ratios = Vec::new();
        for dt in [1e-3, 5e-4] {
            let cfg = IntegratorConfig::new(dt, 0.3)
                .with_tol(1e-10)
                .with_sample_interval(0.05);
            let run = hierarchy::integrate(&init, &params, &cfg).map_err(|e| e.to_string())?;
            if !run.outcome.is_completed() {
                return Err(format!("dt={dt} run ended early: {:?}", run.outcome));
            }
            ratios.push(energy_ratio_probe(&run.trajectory.samples).map_err(|e| e.to_string())?);
        }
        let (coarse, fine) = (&ratios[0], &ratios[1]);
        if coarse.len() != fine.len() {
            return Err(format!("sample mismatch: {} vs {}", coarse.len(), fine.len()));
        }
        for ((t_a, r_a), (t_b, r_b)) in coarse.iter().zip(fine) {
            if t_a != t_b {
                return Err(format!("ratio times drifted: {t_a} vs {t_b}"));
            }
            let rel = (r_a - r_b).abs() / r_a.abs().max(f64::MIN_POSITIVE);
            if rel > 0.01 {
                return Err(format!("at t={t_a}: ratio moved {rel:.3e} under halving"));
            }
        }
        Ok(())
    });
}

#[test]
fn c11_identical_invocations_are_byte_identical() {
    criterion("C11 repeated runs produce identical bytes", || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let path = dir.path().join("run.csv");
        let path_str = path.to_str().ok_or_else(|| s("non-UTF-8 temp path"))?;
        let args = [
            "simulate", "--family", "threshold", "--t-end", "0.2", "--out", path_str,
        ];
        expect_exit(&args, 0)?;
        let first = std::fs::read(&path).map_err(|e| e.to_string())?;
        expect_exit(&args, 0)?;
        let second = std::fs::read(&path).map_err(|e| e.to_string())?;
        if first.is_empty() {
            return Err(s("empty table"));
        }
        if first != second {
            return Err(s("file output differs between identical runs"));
        }

        let run_a = transport(&["simulate", "--family", "threshold", "--t-end", "0.2"]);
        let run_b = transport(&["simulate", "--family", "threshold", "--t-end", "0.2"]);
        if run_a.stdout != run_b.stdout || run_a.stderr != run_b.stderr {
            return Err(s("stream output differs between identical runs"));
        }
        Ok(())
    });
}
