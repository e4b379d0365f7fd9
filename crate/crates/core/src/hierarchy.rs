//! The reduced lower-triangular mode hierarchy of the main case `(a, b) = (1, 1)`.
//!
//! Odd sine-series data stays odd under the flow, and in the real variables
//! `w_n = i û_n` the equation becomes
//!
//! ```text
//!     dw_n/dt = Σ_{l=1}^{n-1} l w_l (n-l) w_{n-l} - κ n^α w_n,   w_n(0) = A_n/2.
//! ```
//!
//! Mode `n` only sees modes `1..n-1`, so truncating at `N` changes nothing for
//! the retained modes: the truncated solve produces the *exact* first `N`
//! modes of the untruncated hierarchy, up to time-stepping error.
//!
//! Two auxiliary quadratic systems share this shape and the comparison
//! arguments around the main result: an asymmetric variant with kernel
//! `l w_l w_{n-l}` and its symmetrized minorant with kernel
//! `√l √(n-l) w_l w_{n-l}`. They reuse the same integrator through
//! [`HierarchyKind`].

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::integrate::{integrate_system, IntegrationOutcome, IntegratorConfig, OdeSystem};
use crate::params::ModelParams;
use crate::state::{ModeState, ModeTrajectory};

/// Which quadratic interaction kernel drives the hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HierarchyKind {
    /// Main-case kernel `l (n-l) w_l w_{n-l}`.
    Transport,
    /// One-sided kernel `l w_l w_{n-l}`.
    Asymmetric,
    /// Symmetrized kernel `√l √(n-l) w_l w_{n-l}`; by AM–GM it never exceeds
    /// the asymmetric sum on non-negative data.
    Symmetrized,
}

impl HierarchyKind {
    pub(crate) fn weight(self, l: usize, m: usize) -> f64 {
        match self {
            HierarchyKind::Transport => (l * m) as f64,
            HierarchyKind::Asymmetric => l as f64,
            HierarchyKind::Symmetrized => ((l * m) as f64).sqrt(),
        }
    }
}

/// A trajectory together with how its integration ended.
#[derive(Debug, Clone)]
pub struct ModeIntegration {
    pub trajectory: ModeTrajectory,
    pub outcome: IntegrationOutcome,
}

/// The quadratic forcing of mode `n` in the main-case hierarchy:
/// `Σ_{l=1}^{n-1} l w_l (n-l) w_{n-l}`; empty (zero) for `n = 1`.
pub fn convolution_term(w: &[f64], n: usize) -> Result<f64> {
    if n < 1 || n > w.len() {
        return Err(Error::ModeIndexOutOfRange { n, len: w.len() });
    }
    Ok(convolution_kind(w, n, HierarchyKind::Transport))
}

fn convolution_kind(w: &[f64], n: usize, kind: HierarchyKind) -> f64 {
    let mut sum = 0.0;
    for l in 1..n {
        sum += kind.weight(l, n - l) * w[l - 1] * w[n - l - 1];
    }
    sum
}

/// Full right-hand side `dw_n/dt = conv_n - κ n^α w_n` of the main case.
///
/// Other `(a, b)` cases have no triangular reduction and are rejected; they
/// live in the collocation solver.
pub fn rhs(state: &ModeState, params: &ModelParams) -> Result<Vec<f64>> {
    if !params.is_main_case() {
        return Err(Error::UnsupportedCase {
            a: params.case_a,
            b: params.case_b,
            context: "the triangular mode reduction only exists for (a, b) = (1, 1)",
        });
    }
    let w = state.modes();
    Ok((1..=w.len())
        .map(|n| convolution_kind(w, n, HierarchyKind::Transport) - params.damping_rate(n) * w[n - 1])
        .collect())
}

pub(crate) struct HierarchySystem {
    kind: HierarchyKind,
    damping: Vec<f64>,
}

impl HierarchySystem {
    pub(crate) fn new(kind: HierarchyKind, params: &ModelParams) -> Self {
        let damping = (1..=params.n_modes).map(|n| params.damping_rate(n)).collect();
        HierarchySystem { kind, damping }
    }
}

impl OdeSystem for HierarchySystem {
    fn dim(&self) -> usize {
        self.damping.len()
    }

    fn nonlinear(&self, w: &[f64], out: &mut [f64]) {
        for n in 1..=w.len() {
            out[n - 1] = convolution_kind(w, n, self.kind);
        }
    }

    fn damping(&self) -> &[f64] {
        &self.damping
    }
}

/// Integrates the main-case hierarchy from `w_n(0) = A_n/2`.
///
/// Samples are recorded per the config (every accepted step, or on the sample
/// grid). Divergence past the overflow guard and step-size underflow end the
/// run early and are reported in the outcome; the samples up to that point
/// remain valid.
pub fn integrate(
    init: &InitialData,
    params: &ModelParams,
    cfg: &IntegratorConfig,
) -> Result<ModeIntegration> {
    if !params.is_main_case() {
        return Err(Error::UnsupportedCase {
            a: params.case_a,
            b: params.case_b,
            context: "the triangular mode reduction only exists for (a, b) = (1, 1)",
        });
    }
    integrate_kind(init, params, cfg, HierarchyKind::Transport)
}

/// Shared driver for all three kernels; public entry points add their own
/// precondition checks.
pub(crate) fn integrate_kind(
    init: &InitialData,
    params: &ModelParams,
    cfg: &IntegratorConfig,
    kind: HierarchyKind,
) -> Result<ModeIntegration> {
    if init.n_modes() != params.n_modes {
        return Err(Error::invalid(
            "init",
            format!(
                "initial data has {} coefficients but params.n_modes = {}",
                init.n_modes(),
                params.n_modes
            ),
        ));
    }
    let sys = HierarchySystem::new(kind, params);
    let run = integrate_system(&sys, init.mode_state().modes().to_vec(), cfg)?;
    Ok(ModeIntegration {
        trajectory: ModeTrajectory {
            params: params.clone(),
            init: init.clone(),
            samples: run.samples,
        },
        outcome: run.outcome,
    })
}

/// The closed form of mode 1: `w_1(t) = (A_1/2) e^{-κt}`.
///
/// Mode 1 has no quadratic forcing (empty sum) and `1^α = 1` kills the
/// α-dependence, so this is exact for every member of the family.
pub fn closed_form_w1(init: &InitialData, params: &ModelParams, t: f64) -> Result<f64> {
    Ok(init.coeff(1)? / 2.0 * (-params.kappa * t).exp())
}
