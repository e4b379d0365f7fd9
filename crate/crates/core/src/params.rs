//! Model parameters shared by every solver and probe.

use crate::error::{Error, Result};

/// Parameters of one concrete member of the equation family, plus the
/// discretisation sizes used by the solvers.
///
/// * `(a, b)` selects the advecting operator `H^a ∂_x^b`;
/// * `kappa ≥ 0` is the dissipation strength, `alpha ∈ (0, 2]` its order;
/// * `delta > 0` scales the initial data and the proven bounds;
/// * `n_modes` is the truncation `N` of the mode hierarchy;
/// * `grid_points` is the collocation size `M` (even, `≥ 4N/3` so the
///   2/3-rule dealiased band still contains every retained mode).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub case_a: u8,
    pub case_b: u8,
    pub kappa: f64,
    pub alpha: f64,
    pub delta: f64,
    pub n_modes: usize,
    pub grid_points: usize,
}

impl ModelParams {
    /// Validates every field range; see the struct docs for the constraints.
    pub fn new(
        case_a: u8,
        case_b: u8,
        kappa: f64,
        alpha: f64,
        delta: f64,
        n_modes: usize,
        grid_points: usize,
    ) -> Result<Self> {
        if case_a > 1 {
            return Err(Error::invalid("case_a", format!("must be 0 or 1, got {case_a}")));
        }
        if case_b > 1 {
            return Err(Error::invalid("case_b", format!("must be 0 or 1, got {case_b}")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::invalid(
                "kappa",
                format!("dissipation strength must be finite and >= 0, got {kappa}"),
            ));
        }
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid(
                "alpha",
                format!("dissipation order must lie in (0, 2], got {alpha}"),
            ));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid(
                "delta",
                format!("data scale must be finite and > 0, got {delta}"),
            ));
        }
        if n_modes < 1 {
            return Err(Error::invalid("n_modes", "need at least one mode"));
        }
        if grid_points % 2 != 0 || 3 * grid_points < 4 * n_modes {
            return Err(Error::invalid(
                "grid_points",
                format!(
                    "must be even and >= 4/3 * n_modes = {:.1}, got {grid_points}",
                    4.0 * n_modes as f64 / 3.0
                ),
            ));
        }
        Ok(ModelParams {
            case_a,
            case_b,
            kappa,
            alpha,
            delta,
            n_modes,
            grid_points,
        })
    }

    /// Main-case constructor `(a, b) = (1, 1)` with a grid large enough for
    /// the requested mode count.
    pub fn main_case(kappa: f64, alpha: f64, delta: f64, n_modes: usize) -> Result<Self> {
        let grid = default_grid(n_modes);
        ModelParams::new(1, 1, kappa, alpha, delta, n_modes, grid)
    }

    /// True for the main case `(a, b) = (1, 1)`, the one with the exact
    /// triangular mode reduction.
    pub fn is_main_case(&self) -> bool {
        self.case_a == 1 && self.case_b == 1
    }

    /// Per-mode dissipation rate `κ n^α` for `n ≥ 0`.
    pub fn damping_rate(&self, n: usize) -> f64 {
        self.kappa * (n as f64).powf(self.alpha)
    }
}

/// Smallest even grid size `M ≥ 4N/3` with some headroom, rounded up to a
/// power of two so FFTs take the fast path.
pub fn default_grid(n_modes: usize) -> usize {
    let mut m = 64;
    while 3 * m < 4 * n_modes {
        m *= 2;
    }
    m
}
