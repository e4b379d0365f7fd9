//! Fourier collocation solver for the full equation family, all four
//! `(a, b)` cases.
//!
//! The field lives as coefficients `û_n`, `-M/2 < n ≤ M/2`, of a real
//! function on the uniform grid `x_j = -π + 2πj/M`. The quadratic term
//! `(H^a ∂_x^b u) u_x` is formed by multiplier application in Fourier space, a
//! pointwise product in physical space, and a transform back, followed by
//! 2/3-rule dealiasing (modes `|n| > M/3` zeroed), which makes the product
//! alias-free on the retained band. Dissipation `κΛ^α` is diagonal and is
//! advanced exactly by integrating factors inside an RK4 step.
//!
//! This solver shares nothing with the mode hierarchy beyond the equation, so
//! agreement between the two is a real cross-check, not a tautology.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::integrate::{IntegrationOutcome, IntegratorConfig, MAX_STEPS};
use crate::params::ModelParams;
use crate::state::{GridField, ModeState};
use crate::symbols::advection_symbol;

/// Spectral snapshot of a real field: `hat[k]` stores `û_n` for
/// `n = wavenumber(M, k)` (standard DFT index folding).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub t: f64,
    hat: Vec<Complex64>,
}

/// Signed wavenumber of DFT index `k` on an `M`-point grid: `0..M/2` map to
/// themselves, the upper half to negative frequencies, so `-M/2 < n ≤ M/2`.
pub fn wavenumber(m: usize, k: usize) -> i64 {
    debug_assert!(k < m);
    if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

impl SpectralField {
    pub fn zero(t: f64, m: usize) -> Self {
        SpectralField {
            t,
            hat: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    /// Builds `u₀ = Σ A_n sin(nx)` as `û_{±n} = ∓ i A_n/2`.
    ///
    /// Every coefficient must fit strictly below the Nyquist index, i.e.
    /// `n_modes ≤ M/2 - 1`; the unpaired Nyquist mode cannot carry a sine.
    pub fn from_sine_series(init: &InitialData, m: usize) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::invalid("m", format!("grid size must be even and >= 2, got {m}")));
        }
        if init.n_modes() > m / 2 - 1 {
            return Err(Error::invalid(
                "m",
                format!(
                    "grid of {m} points represents modes up to {}, initial data has {}",
                    m / 2 - 1,
                    init.n_modes()
                ),
            ));
        }
        let mut field = SpectralField::zero(0.0, m);
        for (i, &a) in init.coeffs().iter().enumerate() {
            let n = i + 1;
            field.hat[n] = Complex64::new(0.0, -a / 2.0);
            field.hat[m - n] = Complex64::new(0.0, a / 2.0);
        }
        Ok(field)
    }

    /// Grid size `M`.
    pub fn grid_points(&self) -> usize {
        self.hat.len()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.hat
    }

    /// `û_n` by signed wavenumber; zero outside the represented band.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let m = self.hat.len() as i64;
        if n <= -m / 2 || n > m / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let k = if n < 0 { n + m } else { n } as usize;
        self.hat[k]
    }

    /// Largest failure of conjugate symmetry `û_{-n} = conj(û_n)`, including
    /// the reality of the mean and Nyquist coefficients.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let m = self.hat.len();
        let mut worst = self.hat[0].im.abs();
        if m % 2 == 0 {
            worst = worst.max(self.hat[m / 2].im.abs());
        }
        for n in 1..m.div_ceil(2) {
            worst = worst.max((self.hat[n] - self.hat[m - n].conj()).norm());
        }
        worst
    }

    /// `H^s` norm `sqrt(2π Σ_n (1+n²)^s |û_n|²)`; matches
    /// [`ModeState::sobolev_norm`] on odd fields where `û_{±n} = ∓ i w_n`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let m = self.hat.len();
        let sum: f64 = (0..m)
            .map(|k| {
                let n = wavenumber(m, k) as f64;
                (1.0 + n * n).powf(s) * self.hat[k].norm_sqr()
            })
            .sum();
        (2.0 * std::f64::consts::PI * sum).sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.hat.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Zeroes every mode with `|n| > M/3` (2/3-rule dealiasing).
    pub fn dealias(&mut self) {
        let m = self.hat.len();
        let cutoff = (m / 3) as i64;
        for k in 0..m {
            if wavenumber(m, k).abs() > cutoff {
                self.hat[k] = Complex64::new(0.0, 0.0);
            }
        }
    }
}

/// FFT plans plus the `(-1)^k` phase translating between coefficients of
/// `e^{inx}` and DFT coefficients on the grid starting at `x_0 = -π`.
pub struct Transform {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Transform {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transform {
            m,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        }
    }

    fn phase(k: usize) -> f64 {
        if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Physical samples `u(x_j)` from coefficients.
    pub fn synthesize(&self, field: &SpectralField) -> Vec<Complex64> {
        assert_eq!(field.grid_points(), self.m);
        let mut buf: Vec<Complex64> = field
            .hat
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Self::phase(k))
            .collect();
        self.inverse.process(&mut buf);
        buf
    }

    /// Coefficients from physical samples.
    pub fn analyze(&self, t: f64, samples: &[Complex64]) -> SpectralField {
        assert_eq!(samples.len(), self.m);
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.m as f64;
        let hat = buf
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (scale * Self::phase(k)))
            .collect();
        SpectralField { t, hat }
    }

    /// Real-part grid snapshot (the imaginary parts are FFT rounding noise on
    /// conjugate-symmetric fields).
    pub fn to_grid(&self, field: &SpectralField) -> GridField {
        GridField {
            t: field.t,
            values: self.synthesize(field).iter().map(|c| c.re).collect(),
        }
    }
}

fn flux_with(tf: &Transform, field: &SpectralField, a: u8, b: u8) -> SpectralField {
    let m = field.grid_points();
    let mut advect = SpectralField::zero(field.t, m);
    let mut slope = SpectralField::zero(field.t, m);
    for k in 0..m {
        let n = wavenumber(m, k);
        advect.hat[k] = advection_symbol(n, a, b) * field.hat[k];
        slope.hat[k] = Complex64::new(0.0, n as f64) * field.hat[k];
    }
    let v = tf.synthesize(&advect);
    let ux = tf.synthesize(&slope);
    let product: Vec<Complex64> = v.iter().zip(&ux).map(|(a, b)| a * b).collect();
    let mut flux = tf.analyze(field.t, &product);
    flux.dealias();
    flux
}

/// The quadratic term `(H^a ∂_x^b u) u_x`, dealiased by the 2/3 rule.
///
/// Multipliers `(-i sgn n)^a (i n)^b` build the advecting factor, the product
/// happens pointwise on the grid, and modes `|n| > M/3` of the result are
/// zeroed. For one-shot use; the integrator reuses its own FFT plans.
pub fn nonlinear_flux(field: &SpectralField, a: u8, b: u8) -> SpectralField {
    assert!(a <= 1 && b <= 1, "cases are (a, b) ∈ {{0, 1}}²");
    flux_with(&Transform::new(field.grid_points()), field, a, b)
}

fn step_with(
    tf: &Transform,
    field: &SpectralField,
    params: &ModelParams,
    dt: f64,
) -> SpectralField {
    let m = field.grid_points();
    let (a, b) = (params.case_a, params.case_b);
    // u_t = flux - κ Λ^α u, damping handled by exact exponentials E = e^{-λ dt/2}.
    let decay_half: Vec<f64> = (0..m)
        .map(|k| (-params.damping_rate(wavenumber(m, k).unsigned_abs() as usize) * 0.5 * dt).exp())
        .collect();

    let apply = |f: &SpectralField, factors: &dyn Fn(usize) -> f64| {
        let mut out = f.clone();
        for k in 0..m {
            out.hat[k] *= factors(k);
        }
        out
    };
    let combine = |terms: &[(&SpectralField, f64)]| {
        let mut out = SpectralField::zero(field.t, m);
        for (f, c) in terms {
            for k in 0..m {
                out.hat[k] += f.hat[k] * *c;
            }
        }
        out
    };

    let k1 = flux_with(tf, field, a, b);
    let s2 = {
        let mut s = combine(&[(field, 1.0), (&k1, 0.5 * dt)]);
        for k in 0..m {
            s.hat[k] *= decay_half[k];
        }
        s
    };
    let k2 = flux_with(tf, &s2, a, b);
    let s3 = {
        let mut s = apply(field, &|k| decay_half[k]);
        for k in 0..m {
            s.hat[k] += k2.hat[k] * (0.5 * dt);
        }
        s
    };
    let k3 = flux_with(tf, &s3, a, b);
    let s4 = {
        let mut s = apply(field, &|k| decay_half[k] * decay_half[k]);
        for k in 0..m {
            s.hat[k] += k3.hat[k] * (dt * decay_half[k]);
        }
        s
    };
    let k4 = flux_with(tf, &s4, a, b);

    let mut next = SpectralField::zero(field.t + dt, m);
    for k in 0..m {
        let e = decay_half[k];
        next.hat[k] = e * e * field.hat[k]
            + (dt / 6.0)
                * (e * e * k1.hat[k] + 2.0 * e * (k2.hat[k] + k3.hat[k]) + k4.hat[k]);
    }
    next
}

/// Advances one RK4 step with integrating-factor dissipation; dealiasing is
/// applied inside every flux evaluation.
///
/// Divergence is the business of the driving loop ([`integrate_pde`] checks
/// its overflow guard after every step); this function only validates `dt`.
pub fn step_pde(field: &SpectralField, params: &ModelParams, dt: f64) -> Result<SpectralField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("step must be finite and > 0, got {dt}")));
    }
    Ok(step_with(&Transform::new(field.grid_points()), field, params, dt))
}

/// Snapshots plus how the run ended, mirroring the mode integrator.
#[derive(Debug, Clone)]
pub struct PdeRun {
    pub snapshots: Vec<SpectralField>,
    pub outcome: IntegrationOutcome,
}

/// Evolves the sine-series data on `params.grid_points` collocation points up
/// to `cfg.t_end` with base step `cfg.dt`.
///
/// The step is fixed-size except for two protections: it clamps to land
/// exactly on sample-grid times and `t_end`, and a CFL-style check
/// `dt · Σ|n^b û_n| > 1` halves it (re-derived from `cfg.dt` each iteration)
/// before the step is taken. If the halving pushes the step below
/// `1e-13 · (1 + t)`, or the run can no longer reach `t_end` within the
/// step budget, it stops with [`IntegrationOutcome::StepSizeUnderflow`] —
/// the field is moving too fast for any resolvable step. `cfg.tol` plays no
/// role here — accuracy comes from resolution choices.
/// Snapshots are recorded at `t = 0`, at multiples of `cfg.sample_interval`
/// (every step if unset), and at the final time.
pub fn integrate_pde(
    init: &InitialData,
    params: &ModelParams,
    cfg: &IntegratorConfig,
) -> Result<PdeRun> {
    cfg.validate()?;
    let m = params.grid_points;
    let tf = Transform::new(m);
    let mut field = SpectralField::from_sine_series(init, m)?;
    field.dealias();

    let mut snapshots = vec![field.clone()];
    let mut next_k: u64 = 1;
    let t_end = cfg.t_end;
    let tiny = 1e-14 * t_end.max(1.0);
    let mut steps: u64 = 0;
    let mut stalled: u32 = 0;

    let outcome = loop {
        let t = field.t;
        if t >= t_end - tiny {
            break IntegrationOutcome::Completed;
        }
        // CFL-style speed bound from the advecting multiplier magnitudes.
        // The step is re-derived from the base step every iteration, so a
        // transient spike does not depress it permanently.
        let speed: f64 = (0..m)
            .map(|k| {
                let n = wavenumber(m, k).unsigned_abs() as f64;
                let mag = if params.case_b == 1 { n } else { 1.0 };
                mag * field.hat[k].norm()
            })
            .sum();
        let mut dt = cfg.dt;
        while dt * speed > 1.0 {
            dt *= 0.5;
        }
        // A runaway field sends `speed` through the roof and the halving
        // toward zero; bail out rather than spin on steps that no longer
        // advance time. The budget check also catches the slow version of
        // the same failure: a step small enough that the horizon has become
        // unreachable, yet large enough to keep the loop spinning.
        if dt < 1e-13 * (1.0 + t) {
            break IntegrationOutcome::StepSizeUnderflow { t, dt };
        }
        if steps >= MAX_STEPS {
            break IntegrationOutcome::StepSizeUnderflow { t, dt };
        }
        if t_end - t > dt * (MAX_STEPS - steps) as f64 {
            stalled += 1;
            if stalled > 25 {
                break IntegrationOutcome::StepSizeUnderflow { t, dt };
            }
        } else {
            stalled = 0;
        }

        let boundary = match cfg.sample_interval {
            Some(interval) => {
                let mut bnd = next_k as f64 * interval;
                while bnd <= t + tiny {
                    next_k += 1;
                    bnd = next_k as f64 * interval;
                }
                bnd.min(t_end)
            }
            None => t_end,
        };
        let remaining = boundary - t;
        let mut dt_step = dt.min(remaining);
        // Same sliver protection as the mode integrator: never leave a
        // leftover below the underflow floor.
        if remaining - dt_step < 1e-13 * (1.0 + t) {
            dt_step = remaining;
        }

        let mut next = step_with(&tf, &field, params, dt_step);
        let max_abs = next.max_abs();
        if !max_abs.is_finite() || max_abs > cfg.overflow_guard {
            break IntegrationOutcome::Diverged { t, max_abs };
        }
        let landed = dt_step >= remaining * (1.0 - 1e-12);
        if landed {
            next.t = boundary;
        }
        field = next;
        steps += 1;

        match cfg.sample_interval {
            Some(_) => {
                if landed && field.t < t_end - tiny {
                    snapshots.push(field.clone());
                    next_k += 1;
                }
            }
            None => snapshots.push(field.clone()),
        }
    };

    if outcome.is_completed() && snapshots.last().map(|s| s.t) != Some(field.t) {
        snapshots.push(field);
    }
    Ok(PdeRun { snapshots, outcome })
}

/// Modes pulled back out of a field, with the oddness diagnostic.
#[derive(Debug, Clone)]
pub struct ExtractedModes {
    pub state: ModeState,
    /// `max_n |Re û_n|` over the extracted range; odd fields keep their
    /// coefficients purely imaginary, so this measures symmetry drift.
    pub oddness_residual: f64,
}

/// Recovers `w_n = i û_n` (i.e. `w_n = -Im û_n`) for `n = 1..=n_modes`.
pub fn extract_modes(field: &SpectralField, n_modes: usize) -> Result<ExtractedModes> {
    let m = field.grid_points();
    if n_modes > m / 2 {
        return Err(Error::invalid(
            "n_modes",
            format!("field on {m} points only carries modes up to {}", m / 2),
        ));
    }
    let mut w = Vec::with_capacity(n_modes);
    let mut residual = 0.0_f64;
    for n in 1..=n_modes {
        let c = field.coefficient(n as i64);
        w.push(-c.im);
        residual = residual.max(c.re.abs());
    }
    Ok(ExtractedModes {
        state: ModeState::new(field.t, w),
        oddness_residual: residual,
    })
}
