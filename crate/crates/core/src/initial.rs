//! Initial data given as sine coefficients `A_n`, i.e. `u₀(x) = Σ A_n sin(nx)`.
//!
//! The blow-up statements assume the coefficients dominate the power-law
//! threshold `A_n ≥ 2δ/n⁵`. Constructors here record how far down the mode
//! range that hypothesis actually holds, and the bound verifier refuses to
//! certify data that breaks it.

use crate::error::{Error, Result};
use crate::state::ModeState;

/// How a coefficient sequence was generated; kept so serialised runs can be
/// reproduced without shipping the whole vector.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffFamily {
    /// Hand-picked coefficients.
    Explicit,
    /// `A_n = (2δ+1)/n^p` — strictly above the threshold for `p = 5`.
    Power { delta: f64, p: f64 },
    /// Exactly the threshold `A_n = 2δ/n⁵`.
    Threshold { delta: f64 },
}

/// Sine coefficients of the initial condition, 1-based: `coeffs[n-1] = A_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    coeffs: Vec<f64>,
    family: CoeffFamily,
    /// Largest `n` such that `A_m ≥ 2δ/m⁵` holds for every `m ≤ n`, measured
    /// against the `δ` the data was built with (0 for explicit data).
    hypothesis_up_to: usize,
}

impl InitialData {
    /// Wraps explicit coefficients; callers check the hypothesis themselves
    /// via [`InitialData::hypothesis_valid_up_to`].
    pub fn explicit(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coeffs", "need at least one coefficient"));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid("coeffs", format!("non-finite entry {bad}")));
        }
        Ok(InitialData {
            coeffs,
            family: CoeffFamily::Explicit,
            hypothesis_up_to: 0,
        })
    }

    /// Power-law data `A_n = (2δ+1)/n^p` for `n = 1..=n_modes`.
    ///
    /// `p ≥ 5` is required: for `p < 5` the tail drops below the `2δ/n⁵`
    /// threshold for every large `n`, so the data leaves the regime the lower
    /// bounds are proven in. At `p = 5` the hypothesis holds for all modes
    /// since `2δ + 1 > 2δ`; for `p > 5` it fails beyond some cutoff, which the
    /// constructor records.
    pub fn power_law(delta: f64, p: f64, n_modes: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be finite and > 0, got {delta}")));
        }
        if !(p >= 5.0) {
            return Err(Error::invalid(
                "p",
                format!("decay exponent must be >= 5 to stay above the 2*delta/n^5 threshold, got {p}"),
            ));
        }
        if n_modes < 1 {
            return Err(Error::invalid("n_modes", "need at least one mode"));
        }
        let coeffs: Vec<f64> = (1..=n_modes)
            .map(|n| (2.0 * delta + 1.0) / (n as f64).powf(p))
            .collect();
        let mut data = InitialData {
            coeffs,
            family: CoeffFamily::Power { delta, p },
            hypothesis_up_to: 0,
        };
        data.hypothesis_up_to = data.hypothesis_valid_up_to(delta);
        Ok(data)
    }

    /// Borderline data sitting exactly on the threshold, `A_n = 2δ/n⁵`.
    pub fn threshold(delta: f64, n_modes: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid("delta", format!("must be finite and > 0, got {delta}")));
        }
        if n_modes < 1 {
            return Err(Error::invalid("n_modes", "need at least one mode"));
        }
        let coeffs: Vec<f64> = (1..=n_modes).map(|n| threshold_coeff(delta, n)).collect();
        let mut data = InitialData {
            coeffs,
            family: CoeffFamily::Threshold { delta },
            hypothesis_up_to: 0,
        };
        data.hypothesis_up_to = data.hypothesis_valid_up_to(delta);
        Ok(data)
    }

    /// Number of coefficients.
    pub fn n_modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `A_n` (1-based).
    pub fn coeff(&self, n: usize) -> Result<f64> {
        self.coeffs
            .get(n.wrapping_sub(1))
            .copied()
            .ok_or(Error::ModeIndexOutOfRange {
                n,
                len: self.coeffs.len(),
            })
    }

    /// All coefficients, `A_1..=A_N`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Provenance of the coefficients.
    pub fn family(&self) -> &CoeffFamily {
        &self.family
    }

    /// Hypothesis range recorded at construction (against the built-in `δ`).
    pub fn hypothesis_up_to(&self) -> usize {
        self.hypothesis_up_to
    }

    /// Largest `n` such that `A_m ≥ 2δ/m⁵` for every `m ≤ n`, i.e. the prefix
    /// of modes the lower-bound theorems actually cover for this `δ`.
    ///
    /// The comparison uses the same expression as [`threshold_coeff`], so data
    /// built by [`InitialData::threshold`] passes with equality rather than
    /// falling to rounding.
    pub fn hypothesis_valid_up_to(&self, delta: f64) -> usize {
        let mut up_to = 0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a >= threshold_coeff(delta, i + 1) {
                up_to = i + 1;
            } else {
                break;
            }
        }
        up_to
    }

    /// Mode state at `t = 0` under the reduction `w_n = A_n / 2`.
    ///
    /// The reduction writes `u₀ = Σ A_n sin(nx)` as `Σ û_n e^{inx}` with
    /// `û_{±n} = ∓ i A_n / 2`, and `w_n = i û_n` keeps the positive-`n` half.
    pub fn mode_state(&self) -> ModeState {
        ModeState::new(0.0, self.coeffs.iter().map(|a| a / 2.0).collect())
    }
}

/// The hypothesis threshold `2δ/n⁵`, shared by generators and checkers so the
/// borderline case compares equal on both sides.
pub fn threshold_coeff(delta: f64, n: usize) -> f64 {
    2.0 * delta / (n as f64).powi(5)
}
