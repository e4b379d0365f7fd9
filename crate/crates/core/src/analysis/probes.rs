//! Empirical checks of the auxiliary structures: the energy-ratio estimate
//! behind local well-posedness, the weighted AM–GM rearrangement, the
//! asymmetric hierarchy and its symmetrized minorant, and the variant-case
//! `H¹` monotonicity claim.

use crate::error::{Error, Result};
use crate::hierarchy::{self, HierarchyKind, ModeIntegration};
use crate::initial::InitialData;
use crate::integrate::IntegratorConfig;
use crate::params::ModelParams;
use crate::pseudospectral::SpectralField;
use crate::state::ModeState;

/// Slack in the AM–GM comparison `lhs ≥ rhs`, covering rounding in the two
/// sums.
pub const AMGM_SLACK: f64 = 1e-12;

/// Allowed per-step increase of the `H¹` norm before the monotonicity check
/// fails; absorbs time-discretization error of the collocation run.
pub const H1_SLACK: f64 = 1e-9;

/// The ratio `r(t) = (d/dt ‖u‖²_{H³}) / ‖u‖³_{H³}` at the interior snapshots
/// of a mode-space trajectory, using centered differences in time.
///
/// The local well-posedness argument rests on `d/dt ‖u‖²_{H³} ≤ c ‖u‖³_{H³}`
/// for some constant `c`; `max r(t)` is an empirical stand-in for `c`. It is
/// reported, never asserted against a theoretical value. Requires at least 3
/// snapshots with strictly increasing times; a zero-norm snapshot yields
/// `r = 0`.
pub fn energy_ratio_probe(samples: &[ModeState]) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.t, s.sobolev_norm(3.0)))
        .collect();
    energy_ratio_from_norms(&pts)
}

/// [`energy_ratio_probe`] for pseudo-spectral snapshots.
pub fn energy_ratio_probe_fields(fields: &[SpectralField]) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = fields
        .iter()
        .map(|f| (f.t, f.sobolev_norm(3.0)))
        .collect();
    energy_ratio_from_norms(&pts)
}

fn energy_ratio_from_norms(pts: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if pts.len() < 3 {
        return Err(Error::InsufficientSnapshots {
            available: pts.len(),
            required: 3,
        });
    }
    if pts.windows(2).any(|p| p[1].0 <= p[0].0) {
        return Err(Error::invalid(
            "snapshots",
            "snapshot times must be strictly increasing",
        ));
    }
    let ratios = (1..pts.len() - 1)
        .map(|k| {
            let (t_prev, norm_prev) = pts[k - 1];
            let (t_mid, norm_mid) = pts[k];
            let (t_next, norm_next) = pts[k + 1];
            let denom = norm_mid.powi(3);
            let r = if denom == 0.0 {
                0.0
            } else {
                let de = norm_next * norm_next - norm_prev * norm_prev;
                de / (t_next - t_prev) / denom
            };
            (t_mid, r)
        })
        .collect();
    Ok(ratios)
}

/// Result of one AM–GM rearrangement comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmGmCheck {
    /// `Σ_{l=1}^{n-1} l · w_l · w_{n-l}`.
    pub lhs: f64,
    /// `Σ_{l=1}^{n-1} √l · √(n-l) · w_l · w_{n-l}`.
    pub rhs: f64,
    /// `lhs ≥ rhs − AMGM_SLACK`.
    pub holds: bool,
}

/// Checks `Σ l w_l w_{n-l} ≥ Σ √(l(n-l)) w_l w_{n-l}` for a nonnegative
/// sequence.
///
/// Symmetrizing the left sum over `l ↔ n-l` turns the weight into the
/// arithmetic mean `(l + (n-l))/2`, which dominates the geometric mean
/// `√(l(n-l))` termwise — hence the inequality, and hence the symmetrized
/// system is a minorant of the asymmetric one. `w` is 1-based as a mode
/// sequence (`w[0]` is mode 1); the comparison at order `n` reads modes
/// `1..n-1`, so `n` may be at most `w.len() + 1`.
pub fn amgm_rearrangement_check(w: &[f64], n: usize) -> Result<AmGmCheck> {
    for (index, &value) in w.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    if n == 0 || n > w.len() + 1 {
        return Err(Error::ModeIndexOutOfRange { n, len: w.len() });
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for l in 1..n {
        let prod = w[l - 1] * w[n - l - 1];
        lhs += l as f64 * prod;
        rhs += ((l * (n - l)) as f64).sqrt() * prod;
    }
    Ok(AmGmCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - AMGM_SLACK,
    })
}

/// Integrates the asymmetric hierarchy `dw_n/dt = Σ l w_l w_{n-l} − κn^α w_n`
/// or, with `symmetrized`, its minorant with kernel `√(l(n-l))`.
///
/// Both systems preserve nonnegativity, and by the AM–GM comparison the
/// asymmetric trajectory dominates the symmetrized one componentwise from
/// shared nonnegative data — the ODE comparison principle made checkable.
/// Initial data must be nonnegative; the rest of the contract matches
/// [`hierarchy::integrate`].
pub fn integrate_asymmetric(
    init: &InitialData,
    params: &ModelParams,
    cfg: &IntegratorConfig,
    symmetrized: bool,
) -> Result<ModeIntegration> {
    if !params.is_main_case() {
        return Err(Error::UnsupportedCase {
            a: params.case_a,
            b: params.case_b,
            context: "the asymmetric hierarchy arises from the (a, b) = (1, 1) reduction",
        });
    }
    for (index, &value) in init.coeffs().iter().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    let kind = if symmetrized {
        HierarchyKind::Symmetrized
    } else {
        HierarchyKind::Asymmetric
    };
    hierarchy::integrate_kind(init, params, cfg, kind)
}

/// Outcome of the variant-case `H¹` monotonicity check.
#[derive(Debug, Clone)]
pub struct H1Verdict {
    /// Every consecutive pair satisfied `‖u(t_{k+1})‖ ≤ ‖u(t_k)‖ + H1_SLACK`.
    pub pass: bool,
    /// Largest consecutive increase `‖u(t_{k+1})‖ − ‖u(t_k)‖` (negative when
    /// the norm strictly decreases throughout).
    pub max_increase: f64,
    /// `(t, ‖u(t)‖_{H¹})` per snapshot.
    pub norms: Vec<(f64, f64)>,
    /// Index of the first snapshot that exceeded its predecessor beyond the
    /// slack.
    pub first_violation: Option<usize>,
}

/// Checks that `‖u(t)‖_{H¹}` is non-increasing along `(a, b) = (0, 1)`
/// snapshots.
///
/// For that case the equation is `u_t = u_x² − κΛ^α u`: the `H¹` seminorm
/// obeys `d/dt ∫u_x² = (2/3)∫∂_x(u_x³) − dissipation ≤ 0`, and the full norm
/// is claimed non-increasing — which rules blow-up out, in sharp contrast to
/// the main case. Rejects other cases; needs at least 2 snapshots.
pub fn h1_monotonicity_check(
    snapshots: &[SpectralField],
    params: &ModelParams,
) -> Result<H1Verdict> {
    if (params.case_a, params.case_b) != (0, 1) {
        return Err(Error::UnsupportedCase {
            a: params.case_a,
            b: params.case_b,
            context: "the H¹ monotonicity claim is specific to (a, b) = (0, 1)",
        });
    }
    if snapshots.len() < 2 {
        return Err(Error::InsufficientSnapshots {
            available: snapshots.len(),
            required: 2,
        });
    }
    let norms: Vec<(f64, f64)> = snapshots
        .iter()
        .map(|f| (f.t, f.sobolev_norm(1.0)))
        .collect();
    let mut max_increase = f64::NEG_INFINITY;
    let mut first_violation = None;
    for k in 1..norms.len() {
        let rise = norms[k].1 - norms[k - 1].1;
        max_increase = max_increase.max(rise);
        if rise > H1_SLACK && first_violation.is_none() {
            first_violation = Some(k);
        }
    }
    Ok(H1Verdict {
        pass: first_violation.is_none(),
        max_increase,
        norms,
        first_violation,
    })
}
