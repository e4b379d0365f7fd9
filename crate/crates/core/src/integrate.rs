//! Adaptive time integration shared by the mode hierarchies.
//!
//! The engine is classical RK4 with step-doubling error control: every step is
//! taken once at `h` and twice at `h/2`, the difference feeds a per-component
//! scaled error estimate, and the Richardson-extrapolated combination (local
//! order 5) is what gets accepted. An integrating-factor variant treats the
//! diagonal damping `-κ n^α w_n` exactly, which keeps large `κ N^α` from
//! forcing tiny steps.
//!
//! Near blow-up the solution grows without bound by design, so overflow is a
//! *reportable outcome*, not an error: integration stops at the last valid
//! state and the trajectory up to that point stays usable.

use crate::error::{Error, Result};
use crate::state::ModeState;

/// Default ceiling on `max_n |w_n|`; crossing it counts as divergence.
pub const DEFAULT_OVERFLOW_GUARD: f64 = 1e12;

/// Absolute floor in the scaled error norm, so modes near zero are controlled
/// absolutely and everything else relatively.
const ERROR_FLOOR: f64 = 1e-14;

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta on the full right-hand side.
    Rk4,
    /// RK4 on the integrating-factor transform `v = e^{Λt} w`, with the
    /// diagonal damping handled exactly by exponential factors.
    IntegratingFactorRk4,
}

/// Integration controls.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    /// Initial (and maximal) step size.
    pub dt: f64,
    /// Scheme for the damped hierarchy.
    pub method: Method,
    /// Step-doubling local error target (scaled, roughly relative).
    pub tol: f64,
    /// Final time; `0` records just the initial state.
    pub t_end: f64,
    /// If set, samples are recorded exactly at multiples of this interval
    /// (plus the initial state and `t_end`); if `None`, every accepted step is
    /// recorded. A shared interval makes runs with different truncations
    /// comparable sample-by-sample.
    pub sample_interval: Option<f64>,
    /// Divergence threshold on `max_n |w_n|`. Blow-up studies that follow the
    /// growth further raise it; `f64::MAX` effectively disables it.
    pub overflow_guard: f64,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        IntegratorConfig {
            dt,
            method: Method::Rk4,
            tol: 1e-10,
            t_end,
            sample_interval: None,
            overflow_guard: DEFAULT_OVERFLOW_GUARD,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_sample_interval(mut self, interval: f64) -> Self {
        self.sample_interval = Some(interval);
        self
    }

    pub fn with_overflow_guard(mut self, guard: f64) -> Self {
        self.overflow_guard = guard;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", format!("step must be finite and > 0, got {}", self.dt)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tol", format!("tolerance must be finite and > 0, got {}", self.tol)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid("t_end", format!("final time must be finite and >= 0, got {}", self.t_end)));
        }
        if let Some(d) = self.sample_interval {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::invalid("sample_interval", format!("must be finite and > 0, got {d}")));
            }
        }
        if !(self.overflow_guard > 0.0) {
            return Err(Error::invalid("overflow_guard", format!("must be > 0, got {}", self.overflow_guard)));
        }
        Ok(())
    }
}

/// Hard ceiling on accepted steps per run. No healthy configuration gets
/// close: it exists so a run whose step has collapsed far below the remaining
/// distance terminates deterministically instead of crawling. The adaptive
/// engine here enforces it as a plain cap — near genuine divergence the
/// error control shrinks steps in proportion to the distance to the pole, so
/// the overflow guard always fires first. The collocation integrator also
/// uses the budget predictively, because there a blow-up can keep amplitudes
/// bounded (the gradient steepens, not the field) and the CFL cut is the
/// only sign of trouble.
pub(crate) const MAX_STEPS: u64 = 10_000_000;

/// How an integration run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum IntegrationOutcome {
    /// Reached `t_end`.
    Completed,
    /// `max_n |w_n|` crossed the overflow guard; `t` is the last valid time
    /// (also the time of the last recorded sample) and `max_abs` the offending
    /// magnitude.
    Diverged { t: f64, max_abs: f64 },
    /// The step shrank below what can advance the run: either under the
    /// absolute floor `~1e-13·(1+t)`, or so small that reaching `t_end`
    /// within the step budget became impossible. Typically the signature of
    /// a singularity just ahead of `t`.
    StepSizeUnderflow { t: f64, dt: f64 },
}

impl IntegrationOutcome {
    pub fn is_completed(&self) -> bool {
        matches!(self, IntegrationOutcome::Completed)
    }
}

/// Right-hand side split into a smooth nonlinear part and exact diagonal
/// damping: `dw/dt = nonlinear(w) - damping ∘ w`.
pub(crate) trait OdeSystem {
    fn dim(&self) -> usize;
    fn nonlinear(&self, w: &[f64], out: &mut [f64]);
    /// Per-component damping rates `λ_i ≥ 0`.
    fn damping(&self) -> &[f64];
}

/// Samples plus how the run ended; `samples` always contains at least the
/// initial state.
pub(crate) struct EngineRun {
    pub samples: Vec<ModeState>,
    pub outcome: IntegrationOutcome,
}

struct Stepper<'a> {
    sys: &'a dyn OdeSystem,
    method: Method,
    // scratch buffers, reused across stages
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
    decay_half: Vec<f64>,
    decay_full: Vec<f64>,
    cached_dt: f64,
}

impl<'a> Stepper<'a> {
    fn new(sys: &'a dyn OdeSystem, method: Method) -> Self {
        let d = sys.dim();
        Stepper {
            sys,
            method,
            k1: vec![0.0; d],
            k2: vec![0.0; d],
            k3: vec![0.0; d],
            k4: vec![0.0; d],
            stage: vec![0.0; d],
            decay_half: vec![0.0; d],
            decay_full: vec![0.0; d],
            cached_dt: f64::NAN,
        }
    }

    fn full_rhs(&self, w: &[f64], out: &mut [f64]) {
        self.sys.nonlinear(w, out);
        for (i, lam) in self.sys.damping().iter().enumerate() {
            out[i] -= lam * w[i];
        }
    }

    /// One step of size `dt` from `w`, written into `out`.
    fn step(&mut self, w: &[f64], dt: f64, out: &mut [f64]) {
        match self.method {
            Method::Rk4 => self.rk4(w, dt, out),
            Method::IntegratingFactorRk4 => self.ifrk4(w, dt, out),
        }
    }

    fn rk4(&mut self, w: &[f64], dt: f64, out: &mut [f64]) {
        let d = w.len();
        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);

        self.full_rhs(w, &mut k1);
        for i in 0..d {
            stage[i] = w[i] + 0.5 * dt * k1[i];
        }
        self.full_rhs(&stage, &mut k2);
        for i in 0..d {
            stage[i] = w[i] + 0.5 * dt * k2[i];
        }
        self.full_rhs(&stage, &mut k3);
        for i in 0..d {
            stage[i] = w[i] + dt * k3[i];
        }
        self.full_rhs(&stage, &mut k4);
        for i in 0..d {
            out[i] = w[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
    }

    /// RK4 on `v = e^{Λt} w`, written back in the original variables. With
    /// `E = e^{-Λ dt/2}` the stages become (all factors decaying, so nothing
    /// stiff is ever amplified):
    ///
    /// ```text
    ///   k1 = N(w)
    ///   k2 = N(E∘(w + dt/2 k1))
    ///   k3 = N(E∘w + dt/2 k2)
    ///   k4 = N(E²∘w + dt E∘k3)
    ///   w' = E²∘w + dt/6 (E²∘k1 + 2 E∘(k2 + k3) + k4)
    /// ```
    fn ifrk4(&mut self, w: &[f64], dt: f64, out: &mut [f64]) {
        let d = w.len();
        if dt != self.cached_dt {
            for (i, lam) in self.sys.damping().iter().enumerate() {
                self.decay_half[i] = (-lam * 0.5 * dt).exp();
                self.decay_full[i] = self.decay_half[i] * self.decay_half[i];
            }
            self.cached_dt = dt;
        }
        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);

        self.sys.nonlinear(w, &mut k1);
        for i in 0..d {
            stage[i] = self.decay_half[i] * (w[i] + 0.5 * dt * k1[i]);
        }
        self.sys.nonlinear(&stage, &mut k2);
        for i in 0..d {
            stage[i] = self.decay_half[i] * w[i] + 0.5 * dt * k2[i];
        }
        self.sys.nonlinear(&stage, &mut k3);
        for i in 0..d {
            stage[i] = self.decay_full[i] * w[i] + dt * self.decay_half[i] * k3[i];
        }
        self.sys.nonlinear(&stage, &mut k4);
        for i in 0..d {
            out[i] = self.decay_full[i] * w[i]
                + dt / 6.0
                    * (self.decay_full[i] * k1[i]
                        + 2.0 * self.decay_half[i] * (k2[i] + k3[i])
                        + k4[i]);
        }

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
    }
}

/// Runs the step-doubling loop from `w0` at `t = 0` to `cfg.t_end`.
pub(crate) fn integrate_system(
    sys: &dyn OdeSystem,
    w0: Vec<f64>,
    cfg: &IntegratorConfig,
) -> Result<EngineRun> {
    cfg.validate()?;
    let d = w0.len();
    debug_assert_eq!(d, sys.dim());
    let mut stepper = Stepper::new(sys, cfg.method);

    let mut samples = vec![ModeState::new(0.0, w0.clone())];
    let mut w = w0;
    let mut t = 0.0_f64;
    let mut dt_next = cfg.dt;
    // Index of the next sample-grid point (interval mode only).
    let mut next_k: u64 = 1;

    let mut big = vec![0.0; d];
    let mut half = vec![0.0; d];
    let mut mid = vec![0.0; d];

    let t_end = cfg.t_end;
    let tiny = 1e-14 * t_end.max(1.0);
    let mut steps: u64 = 0;

    let outcome = 'run: loop {
        if t >= t_end - tiny {
            break IntegrationOutcome::Completed;
        }
        // Backstop only — solutions heading for a pole hit the overflow
        // guard long before this, since the error control keeps the step
        // proportional to the remaining distance to the singularity.
        if steps >= MAX_STEPS {
            break IntegrationOutcome::StepSizeUnderflow { t, dt: dt_next };
        }
        // Next time we are obliged to land on exactly.
        let boundary = match cfg.sample_interval {
            Some(interval) => {
                let mut b = next_k as f64 * interval;
                while b <= t + tiny {
                    next_k += 1;
                    b = next_k as f64 * interval;
                }
                b.min(t_end)
            }
            None => t_end,
        };
        let remaining = boundary - t;
        let mut dt_try = dt_next.min(remaining);
        // If the leftover after this step would be smaller than the underflow
        // floor below, stretch to the boundary: otherwise a step that falls a
        // few ulps short strands the next iteration on an unsteppable sliver.
        if remaining - dt_try < 1e-13 * (t.abs() + 1.0) {
            dt_try = remaining;
        }

        // Attempt/shrink loop for one accepted step.
        let (accepted_dt, growth) = loop {
            if dt_try < 1e-13 * (t.abs() + 1.0) {
                break 'run IntegrationOutcome::StepSizeUnderflow { t, dt: dt_try };
            }
            stepper.step(&w, dt_try, &mut big);
            stepper.step(&w, 0.5 * dt_try, &mut mid);
            stepper.step(&mid, 0.5 * dt_try, &mut half);

            // Scaled error of the h/2 solution: |half - big| / 15 estimates
            // its local error; compare against tol on a relative-ish scale.
            let mut err = 0.0_f64;
            for i in 0..d {
                let scale = ERROR_FLOOR + w[i].abs().max(half[i].abs());
                err = err.max((half[i] - big[i]).abs() / (15.0 * scale));
            }
            if !err.is_finite() {
                dt_try *= 0.2;
                continue;
            }
            if err <= cfg.tol {
                // Accept the Richardson-extrapolated value (order 5).
                for i in 0..d {
                    half[i] += (half[i] - big[i]) / 15.0;
                }
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * (cfg.tol / err).powf(0.2)).clamp(0.2, 5.0)
                };
                break (dt_try, grow);
            }
            dt_try *= (0.9 * (cfg.tol / err).powf(0.2)).clamp(0.2, 0.9);
        };

        // Divergence check before committing the state.
        let max_abs = half.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if !max_abs.is_finite() || max_abs > cfg.overflow_guard {
            break IntegrationOutcome::Diverged { t, max_abs };
        }

        std::mem::swap(&mut w, &mut half);
        steps += 1;
        let landed = accepted_dt >= remaining * (1.0 - 1e-12);
        t = if landed { boundary } else { t + accepted_dt };
        dt_next = (accepted_dt * growth).min(cfg.dt);

        match cfg.sample_interval {
            Some(_) => {
                // Record only on the sample grid; t_end is pushed after the loop.
                if landed && t < t_end - tiny {
                    samples.push(ModeState::new(t, w.clone()));
                    next_k += 1;
                }
            }
            None => samples.push(ModeState::new(t, w.clone())),
        }
    };

    // Make sure the final reached state is recorded exactly once.
    if outcome.is_completed() && samples.last().map(|s| s.t) != Some(t) {
        samples.push(ModeState::new(t, w));
    }
    Ok(EngineRun { samples, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// dy/dt = y (one component), solution e^t.
    struct Exponential {
        damping: Vec<f64>,
    }
    impl OdeSystem for Exponential {
        fn dim(&self) -> usize {
            1
        }
        fn nonlinear(&self, w: &[f64], out: &mut [f64]) {
            out[0] = w[0];
        }
        fn damping(&self) -> &[f64] {
            &self.damping
        }
    }

    /// Pure damping, nonlinear part zero: solution e^{-λt}.
    struct Decay {
        damping: Vec<f64>,
    }
    impl OdeSystem for Decay {
        fn dim(&self) -> usize {
            self.damping.len()
        }
        fn nonlinear(&self, _w: &[f64], out: &mut [f64]) {
            out.fill(0.0);
        }
        fn damping(&self) -> &[f64] {
            &self.damping
        }
    }

    #[test]
    fn reproduces_exponential_growth() {
        let sys = Exponential { damping: vec![0.0] };
        let cfg = IntegratorConfig::new(0.1, 2.0).with_tol(1e-11);
        let run = integrate_system(&sys, vec![1.0], &cfg).unwrap();
        assert!(run.outcome.is_completed());
        let last = run.samples.last().unwrap();
        assert_eq!(last.t, 2.0);
        assert!((last.modes()[0] - 2.0_f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn integrating_factor_is_exact_on_pure_decay() {
        let sys = Decay {
            damping: vec![3.0, 150.0],
        };
        let cfg = IntegratorConfig::new(0.05, 1.0)
            .with_method(Method::IntegratingFactorRk4)
            .with_tol(1e-10);
        let run = integrate_system(&sys, vec![2.0, 1.0], &cfg).unwrap();
        let last = run.samples.last().unwrap();
        // The damping is handled by exact exponentials; only rounding differs.
        // e^{-150} underflows the error floor, so just check it is tiny.
        assert!((last.modes()[0] - 2.0 * (-3.0_f64).exp()).abs() < 1e-12);
        assert!(last.modes()[1].abs() < 1e-16);
    }

    #[test]
    fn classical_rk4_handles_moderate_damping() {
        let sys = Decay { damping: vec![3.0] };
        let cfg = IntegratorConfig::new(0.05, 1.0).with_tol(1e-11);
        let run = integrate_system(&sys, vec![2.0], &cfg).unwrap();
        let last = run.samples.last().unwrap();
        assert!((last.modes()[0] - 2.0 * (-3.0_f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn zero_t_end_returns_single_initial_sample() {
        let sys = Decay { damping: vec![1.0] };
        let cfg = IntegratorConfig::new(0.1, 0.0);
        let run = integrate_system(&sys, vec![5.0], &cfg).unwrap();
        assert!(run.outcome.is_completed());
        assert_eq!(run.samples.len(), 1);
        assert_eq!(run.samples[0].t, 0.0);
        assert_eq!(run.samples[0].modes(), &[5.0]);
    }

    #[test]
    fn sample_interval_lands_on_exact_multiples() {
        let sys = Exponential { damping: vec![0.0] };
        let cfg = IntegratorConfig::new(0.037, 1.0)
            .with_tol(1e-9)
            .with_sample_interval(0.25);
        let run = integrate_system(&sys, vec![1.0], &cfg).unwrap();
        let times: Vec<f64> = run.samples.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        for s in &run.samples {
            assert!((s.modes()[0] - s.t.exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn overflow_guard_reports_divergence_with_last_valid_time() {
        // dy/dt = y² from y(0)=1 blows up at t=1.
        struct Riccati;
        impl OdeSystem for Riccati {
            fn dim(&self) -> usize {
                1
            }
            fn nonlinear(&self, w: &[f64], out: &mut [f64]) {
                out[0] = w[0] * w[0];
            }
            fn damping(&self) -> &[f64] {
                &[0.0]
            }
        }
        let cfg = IntegratorConfig::new(0.01, 2.0).with_overflow_guard(1e6);
        let run = integrate_system(&Riccati, vec![1.0], &cfg).unwrap();
        match run.outcome {
            IntegrationOutcome::Diverged { t, max_abs } => {
                assert!(t < 1.0, "diverged time {t} should precede the pole");
                assert!(t > 0.9, "guard of 1e6 is only crossed close to the pole");
                assert!(max_abs > 1e6);
            }
            IntegrationOutcome::StepSizeUnderflow { t, .. } => {
                panic!("expected overflow before underflow, stopped at t = {t}")
            }
            IntegrationOutcome::Completed => panic!("must not reach t=2 across a pole"),
        }
        // Last sample is the last valid state, consistent with the outcome.
        let last = run.samples.last().unwrap();
        assert!(last.modes()[0] <= 1e6);
    }

    #[test]
    fn rejects_invalid_configs() {
        let sys = Decay { damping: vec![1.0] };
        for cfg in [
            IntegratorConfig::new(0.0, 1.0),
            IntegratorConfig::new(-0.1, 1.0),
            IntegratorConfig::new(0.1, -1.0),
            IntegratorConfig::new(0.1, f64::NAN),
            IntegratorConfig::new(0.1, 1.0).with_tol(0.0),
            IntegratorConfig::new(0.1, 1.0).with_sample_interval(0.0),
            IntegratorConfig::new(0.1, 1.0).with_overflow_guard(-1.0),
        ] {
            assert!(integrate_system(&sys, vec![1.0], &cfg).is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn sample_times_strictly_increase() {
        let sys = Exponential { damping: vec![0.0] };
        for interval in [None, Some(0.1)] {
            let mut cfg = IntegratorConfig::new(0.03, 1.0);
            cfg.sample_interval = interval;
            let run = integrate_system(&sys, vec![1.0], &cfg).unwrap();
            for pair in run.samples.windows(2) {
                assert!(pair[0].t < pair[1].t);
            }
            assert_eq!(run.samples.last().unwrap().t, 1.0);
        }
    }
}
