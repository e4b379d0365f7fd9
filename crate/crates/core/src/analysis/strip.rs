//! Singularity tracking from spectral decay.
//!
//! A solution analytic in a strip of half-width `ρ` has modes decaying like
//! `w_n ≈ C n^{-γ} e^{-ρn}`; fitting `(C, γ, ρ)` per snapshot and watching
//! `ρ(t)` head to zero estimates when analyticity — and with it the solution —
//! is lost. Here the role is deliberately modest: the proven statements give
//! times *by which* blow-up has happened (`1/(2δ)` without dissipation, `1/κ`
//! with), so the fitted time is only ever checked against those as an upper
//! bound, with generous slack. The initial-data families decay algebraically,
//! not exponentially, so fitted widths start near zero and the cascade can
//! push them negative almost immediately; raw values are kept (not clamped),
//! and a width observed to cross zero is reported at the crossing rather
//! than extrapolated from a trend through post-singularity fits.

use crate::error::{Error, Result};
use crate::state::{ModeState, ModeTrajectory};

/// Modes below this magnitude carry no usable log-scale information.
pub const AMPLITUDE_FLOOR: f64 = 1e-14;

/// Fitted widths within this of zero count as zero: an exactly algebraic
/// spectrum fits to `ρ = 0` only up to normal-equation conditioning noise,
/// and that noise must not register as a crossing.
pub const STRIP_ZERO: f64 = 1e-6;

/// Relative slack applied when comparing a fitted blow-up time against a
/// proven upper bound; extrapolation is a heuristic, the bounds are not.
pub const TOL_FIT: f64 = 0.15;

/// Least-squares fit of one snapshot's spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripFit {
    pub t: f64,
    /// Prefactor `C` of `w_n ≈ C n^{-γ} e^{-ρn}`.
    pub amplitude: f64,
    /// Algebraic decay exponent `γ`.
    pub gamma: f64,
    /// Strip width `ρ`; near-zero (or slightly negative, on algebraic data)
    /// means no exponential decay left.
    pub rho: f64,
    /// Root-mean-square residual of the log-space fit.
    pub residual: f64,
}

/// Per-snapshot fits plus the extrapolated verdict.
#[derive(Debug, Clone)]
pub struct SingularityFit {
    pub fits: Vec<StripFit>,
    pub verdict: BlowupVerdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowupVerdict {
    /// The strip width reaches zero at `t_fit` — either observed inside the
    /// snapshot series (interpolated at the sign change) or, when the run
    /// stops while `ρ` is still positive, extrapolated from its final trend.
    Blowup {
        t_fit: f64,
        /// Proven upper bound for this parameter set, from [`blowup_bound`].
        bound: f64,
        /// Whether `t_fit ≤ bound · (1 + TOL_FIT)`.
        within_bound: bool,
    },
    /// `ρ(t)` is not decreasing — no singularity indicated on this horizon.
    NoTrend,
}

/// The proven time by which the minorant diverges: `1/κ` under dissipation,
/// `1/(2δ)` without.
pub fn blowup_bound(delta: f64, kappa: f64) -> f64 {
    if kappa > 0.0 {
        1.0 / kappa
    } else {
        1.0 / (2.0 * delta)
    }
}

/// Fits `log w_n ≈ log C - γ log n - ρ n` over modes `n ≥ n_min` whose
/// amplitude exceeds [`AMPLITUDE_FLOOR`]; requires at least 8 such modes.
/// Modes must be positive to enter the log — non-positive ones are skipped
/// like sub-floor ones.
pub fn fit_analyticity_strip(state: &ModeState, n_min: usize) -> Result<StripFit> {
    let mut rows: Vec<(f64, f64, f64)> = Vec::new(); // (log n, n, log w)
    for (i, &w) in state.modes().iter().enumerate() {
        let n = i + 1;
        if n >= n_min && w > AMPLITUDE_FLOOR {
            rows.push(((n as f64).ln(), n as f64, w.ln()));
        }
    }
    if rows.len() < 8 {
        return Err(Error::InsufficientModes {
            available: rows.len(),
            required: 8,
        });
    }

    // Normal equations for y = c0 - γ·logn - ρ·n with basis (1, -logn, -n).
    let mut ata = [[0.0_f64; 3]; 3];
    let mut aty = [0.0_f64; 3];
    for &(logn, n, y) in &rows {
        let basis = [1.0, -logn, -n];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += basis[r] * basis[c];
            }
            aty[r] += basis[r] * y;
        }
    }
    let sol = solve3(ata, aty).ok_or_else(|| Error::invalid(
        "state",
        "degenerate spectrum: the strip-fit normal equations are singular",
    ))?;

    let mut ss = 0.0_f64;
    for &(logn, n, y) in &rows {
        let fit = sol[0] - sol[1] * logn - sol[2] * n;
        ss += (y - fit) * (y - fit);
    }
    Ok(StripFit {
        t: state.t,
        amplitude: sol[0].exp(),
        gamma: sol[1],
        rho: sol[2],
        residual: (ss / rows.len() as f64).sqrt(),
    })
}

/// Solves a 3×3 system by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0_f64; 3];
    for row in (0..3).rev() {
        let mut v = b[row];
        for k in row + 1..3 {
            v -= a[row][k] * x[k];
        }
        x[row] = v / a[row][row];
    }
    Some(x)
}

/// Fits `ρ(t)` across a trajectory's snapshots (window `n ∈ [N/4, N]`) and
/// linearly extrapolates the final quarter of usable fits to `ρ = 0`.
///
/// Needs `N ≥ 32` so the fitting window holds enough modes; snapshots whose
/// spectrum cannot be fitted (too many sub-floor modes) are skipped. When a
/// fit with `ρ < -STRIP_ZERO` appears inside the series the crossing has
/// been observed and is reported directly; the trend extrapolation only
/// serves runs stopped while the width was still positive, and a
/// non-decreasing trend there yields [`BlowupVerdict::NoTrend`].
pub fn estimate_blowup_time(traj: &ModeTrajectory) -> Result<SingularityFit> {
    let n = traj.params.n_modes;
    if n < 32 {
        return Err(Error::InsufficientModes {
            available: n,
            required: 32,
        });
    }
    let n_min = (n / 4).max(1);
    let mut fits: Vec<StripFit> = traj
        .samples
        .iter()
        .filter_map(|s| fit_analyticity_strip(s, n_min).ok())
        .collect();

    // The width series carries meaning only while a strip exists; once ρ has
    // gone decisively negative the truncated system is past the singularity
    // it was built to locate. When the series contains that sign change, the
    // crossing is *observed* — report it directly (interpolating from the
    // last nonnegative fit) instead of extrapolating a trend through
    // post-singularity widths. Extrapolation below handles the remaining
    // case: a run stopped while ρ was still positive.
    if let Some(i) = fits.iter().position(|f| f.rho < -STRIP_ZERO) {
        let t_fit = if i == 0 {
            fits[0].t
        } else {
            let (a, b) = (fits[i - 1], fits[i]);
            if a.rho > 0.0 {
                a.t + (b.t - a.t) * a.rho / (a.rho - b.rho)
            } else {
                a.t
            }
        };
        fits.truncate(i + 1);
        let bound = blowup_bound(traj.params.delta, traj.params.kappa);
        return Ok(SingularityFit {
            fits,
            verdict: BlowupVerdict::Blowup {
                t_fit,
                bound,
                within_bound: t_fit <= bound * (1.0 + TOL_FIT),
            },
        });
    }

    if fits.len() < 4 {
        return Err(Error::InsufficientSnapshots {
            available: fits.len(),
            required: 4,
        });
    }

    // Straight-line fit of ρ over the last quarter of usable snapshots.
    let window = fits.len().div_ceil(4).max(2);
    let tail = &fits[fits.len() - window..];
    let m = tail.len() as f64;
    let (mut st, mut sr, mut stt, mut str_) = (0.0, 0.0, 0.0, 0.0);
    for f in tail {
        st += f.t;
        sr += f.rho;
        stt += f.t * f.t;
        str_ += f.t * f.rho;
    }
    let denom = m * stt - st * st;
    let verdict = if denom.abs() < 1e-300 {
        BlowupVerdict::NoTrend
    } else {
        let slope = (m * str_ - st * sr) / denom;
        let intercept = (sr - slope * st) / m;
        if slope >= -1e-12 {
            BlowupVerdict::NoTrend
        } else {
            let t_fit = -intercept / slope;
            let bound = blowup_bound(traj.params.delta, traj.params.kappa);
            BlowupVerdict::Blowup {
                t_fit,
                bound,
                within_bound: t_fit <= bound * (1.0 + TOL_FIT),
            }
        }
    };
    Ok(SingularityFit { fits, verdict })
}
