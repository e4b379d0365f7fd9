//! Solution representations: mode vectors, time series of them, and
//! physical-space grid snapshots.

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::params::ModelParams;

/// Real mode amplitudes `w_1..w_N` at one instant.
///
/// For odd solutions of the main case, `w_n = i û_n` is real and the field is
/// recovered as `u(t, x) = Σ_n 2 w_n sin(nx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub t: f64,
    w: Vec<f64>,
}

impl ModeState {
    pub fn new(t: f64, w: Vec<f64>) -> Self {
        ModeState { t, w }
    }

    /// Number of retained modes `N`.
    pub fn n_modes(&self) -> usize {
        self.w.len()
    }

    /// Amplitudes as a slice, `w[n-1] = w_n`.
    pub fn modes(&self) -> &[f64] {
        &self.w
    }

    /// `w_n` (1-based).
    pub fn mode(&self, n: usize) -> Result<f64> {
        self.w
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or(Error::ModeIndexOutOfRange {
                n,
                len: self.w.len(),
            })
    }

    /// Largest `|w_n|`; zero for an empty state.
    pub fn max_abs(&self) -> f64 {
        self.w.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// Evaluates `u(t, x) = Σ 2 w_n sin(nx)` at the given points.
    pub fn reconstruct(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter()
            .map(|&x| {
                self.w
                    .iter()
                    .enumerate()
                    .map(|(i, &w)| 2.0 * w * ((i + 1) as f64 * x).sin())
                    .sum()
            })
            .collect()
    }

    /// Samples the reconstruction on the uniform `m`-point collocation grid.
    pub fn on_grid(&self, m: usize) -> GridField {
        let xs = grid_points(m);
        GridField {
            t: self.t,
            values: self.reconstruct(&xs),
        }
    }

    /// `L²[-π, π]` norm via Parseval: `sqrt(4π Σ w_n²)`.
    ///
    /// Each retained mode contributes `2 w_n sin(nx)`, whose squared `L²` norm
    /// is `4 w_n² · π`; orthogonality of the sines sums the contributions.
    pub fn parseval_l2(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `H^s[-π, π]` norm `sqrt(4π Σ (1+n²)^s w_n²)` with the Bessel-potential
    /// weight `(1+n²)^s`; `s = 0` recovers [`ModeState::parseval_l2`].
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let sum: f64 = self
            .w
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let n = (i + 1) as f64;
                (1.0 + n * n).powf(s) * w * w
            })
            .sum();
        (4.0 * std::f64::consts::PI * sum).sqrt()
    }
}

/// Time series of mode states from one integration run.
#[derive(Debug, Clone)]
pub struct ModeTrajectory {
    pub params: ModelParams,
    pub init: InitialData,
    pub samples: Vec<ModeState>,
}

impl ModeTrajectory {
    /// Last recorded state; integrations always record at least the initial
    /// state, so this only fails on a hand-built empty trajectory.
    pub fn final_state(&self) -> Result<&ModeState> {
        self.samples.last().ok_or(Error::InsufficientSnapshots {
            available: 0,
            required: 1,
        })
    }

    /// `(t, w_n)` series for one mode across all samples.
    pub fn mode_series(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        self.samples
            .iter()
            .map(|s| s.mode(n).map(|w| (s.t, w)))
            .collect()
    }
}

/// Physical-space snapshot on the uniform grid `x_j = -π + 2πj/M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub t: f64,
    pub values: Vec<f64>,
}

impl GridField {
    /// Grid size `M`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The grid abscissae matching `values`.
    pub fn xs(&self) -> Vec<f64> {
        grid_points(self.values.len())
    }

    /// Mean over the grid, i.e. the trapezoid value of `(1/2π)∫ u dx`.
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest deviation from oddness, `max_j |u(x_j) + u(-x_j)|`.
    ///
    /// For even `M` the grid maps to itself under `x ↦ -x` (index `j ↦ M-j`
    /// with `x_0 = -π` fixed), so this needs no interpolation. `x_0 = -π` is
    /// its own mirror and contributes `2|u(-π)|`.
    pub fn oddness_residual(&self) -> f64 {
        let m = self.values.len();
        if m == 0 {
            return 0.0;
        }
        let mut worst = 2.0 * self.values[0].abs();
        for j in 1..m {
            worst = worst.max((self.values[j] + self.values[m - j]).abs());
        }
        worst
    }
}

/// Uniform collocation grid `x_j = -π + 2πj/M`, `j = 0..M-1`.
pub fn grid_points(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / m as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_l2_norm_is_sqrt_pi() {
        // w_1 = 1/2 gives u = sin x with squared L2 norm pi.
        let state = ModeState::new(0.0, vec![0.5]);
        assert!((state.parseval_l2() - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sobolev_weight_reduces_to_l2_at_zero() {
        let state = ModeState::new(0.0, vec![0.3, -0.1, 0.07]);
        assert_eq!(state.sobolev_norm(0.0), state.parseval_l2());
    }

    #[test]
    fn sobolev_norm_matches_hand_sum() {
        let state = ModeState::new(0.0, vec![1.0, 0.5]);
        // 4*pi*( (1+1)^1*1 + (1+4)^1*0.25 ) = 4*pi*3.25
        let expected = (4.0 * PI * 3.25).sqrt();
        assert!((state.sobolev_norm(1.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn reconstruct_matches_sine_series() {
        let state = ModeState::new(0.0, vec![0.5, 0.25]);
        let xs = [0.0, PI / 2.0, 1.234];
        let vals = state.reconstruct(&xs);
        for (x, v) in xs.iter().zip(&vals) {
            let expected = x.sin() + 0.5 * (2.0 * x).sin();
            assert!((v - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn reconstruction_is_odd_and_zero_mean() {
        let state = ModeState::new(0.0, vec![0.9, -0.2, 0.05, 0.01]);
        let field = state.on_grid(128);
        assert!(field.oddness_residual() < 1e-14);
        assert!(field.mean().abs() < 1e-15);
    }

    #[test]
    fn grid_runs_from_minus_pi_inclusive() {
        let xs = grid_points(4);
        let expected = [-PI, -PI / 2.0, 0.0, PI / 2.0];
        for (a, b) in xs.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn oddness_residual_flags_even_component() {
        // u = cos x is even: residual should be ~2 = 2*max|cos|.
        let m = 64;
        let values: Vec<f64> = grid_points(m).iter().map(|x| x.cos()).collect();
        let field = GridField { t: 0.0, values };
        assert!((field.oddness_residual() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mode_series_tracks_samples() {
        let params = ModelParams::main_case(0.0, 1.0, 1.0, 2).unwrap();
        let init = InitialData::power_law(1.0, 5.0, 2).unwrap();
        let traj = ModeTrajectory {
            params,
            init,
            samples: vec![
                ModeState::new(0.0, vec![1.0, 2.0]),
                ModeState::new(0.5, vec![3.0, 4.0]),
            ],
        };
        assert_eq!(traj.mode_series(2).unwrap(), vec![(0.0, 2.0), (0.5, 4.0)]);
        assert!(traj.mode_series(3).is_err());
        assert_eq!(traj.final_state().unwrap().t, 0.5);
    }
}
