use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Tolerance used whenever a rate exponent or a smoothness value is compared with a
/// decision boundary.
pub const RATE_TOL: f64 = 1e-9;

/// How much a [`RateTerm`] can be trusted.
///
/// Closed-form rates of the symbolic weight families are `Exact`. Rates supplied by
/// the user for tabulated weights are `Asserted`, or `Low` when flagged as such;
/// anything derived from a `Low` rate produces `unknown` verdicts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    #[default]
    Exact,
    Asserted,
    Low,
}

/// Asymptotic class of a positive sequence: `a_j ≍ 2^{-βj} j^γ` as `j → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTerm {
    pub beta: f64,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "is_exact")]
    pub confidence: Confidence,
}

fn is_exact(c: &Confidence) -> bool {
    *c == Confidence::Exact
}

/// Sign of `x` with everything within [`RATE_TOL`] of zero treated as zero.
pub fn sign_tol(x: f64) -> Ordering {
    if x > RATE_TOL {
        Ordering::Greater
    } else if x < -RATE_TOL {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl RateTerm {
    /// The constant class `≍ 1`.
    pub const ONE: RateTerm = RateTerm { beta: 0.0, gamma: 0.0, confidence: Confidence::Exact };

    pub fn new(beta: f64, gamma: f64) -> RateTerm {
        RateTerm { beta, gamma, confidence: Confidence::Exact }
    }

    pub fn with_confidence(mut self, confidence: Confidence) -> RateTerm {
        self.confidence = confidence;
        self
    }

    /// The class of `2^{js}`.
    pub fn exp2(s: f64) -> RateTerm {
        RateTerm::new(-s, 0.0)
    }

    /// Product of sequences: exponents add.
    pub fn mul(self, other: RateTerm) -> RateTerm {
        RateTerm {
            beta: self.beta + other.beta,
            gamma: self.gamma + other.gamma,
            confidence: self.confidence.max(other.confidence),
        }
    }

    /// Real power of a sequence: exponents scale.
    pub fn powf(self, r: f64) -> RateTerm {
        RateTerm { beta: r * self.beta, gamma: r * self.gamma, confidence: self.confidence }
    }

    pub fn recip(self) -> RateTerm {
        self.powf(-1.0)
    }

    pub fn div(self, other: RateTerm) -> RateTerm {
        self.mul(other.recip())
    }

    pub fn is_low(&self) -> bool {
        self.confidence == Confidence::Low
    }

    /// `sup_j a_j < ∞`.
    pub fn is_bounded(&self) -> bool {
        match sign_tol(self.beta) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => sign_tol(self.gamma) != Ordering::Greater,
        }
    }

    /// `inf_j a_j > 0`.
    pub fn is_bounded_below(&self) -> bool {
        match sign_tol(self.beta) {
            Ordering::Greater => false,
            Ordering::Less => true,
            Ordering::Equal => sign_tol(self.gamma) != Ordering::Less,
        }
    }

    /// `a_j → 0`.
    pub fn is_null(&self) -> bool {
        match sign_tol(self.beta) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => sign_tol(self.gamma) == Ordering::Less,
        }
    }

    /// `a_j ≍ 1`.
    pub fn is_constant(&self) -> bool {
        sign_tol(self.beta) == Ordering::Equal && sign_tol(self.gamma) == Ordering::Equal
    }

    /// Rate of the running maximum `max_{ν≤j} a_ν`.
    ///
    /// Eventually increasing sequences keep their rate; every other sequence has a
    /// running maximum that settles at a positive constant.
    pub fn prefix_sup(self) -> RateTerm {
        let grows = match sign_tol(self.beta) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => sign_tol(self.gamma) == Ordering::Greater,
        };
        if grows {
            self
        } else {
            RateTerm { beta: 0.0, gamma: 0.0, confidence: self.confidence }
        }
    }

    /// `log2` of the model value `2^{-βj} j^γ` (with `j^γ` read as 1 at `j = 0`).
    pub fn log2_model(&self, j: u32) -> f64 {
        let jf = f64::from(j);
        let log_poly = if j == 0 { 0.0 } else { self.gamma * jf.log2() };
        -self.beta * jf + log_poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_is_componentwise() {
        let a = RateTerm::new(0.5, 1.0);
        let b = RateTerm::new(-0.25, -2.0);
        assert_eq!(a.mul(b), RateTerm::new(0.25, -1.0));
        assert_eq!(a.powf(2.0), RateTerm::new(1.0, 2.0));
        assert_eq!(a.div(a), RateTerm::new(0.0, 0.0));
    }

    #[test]
    fn confidence_propagates_to_the_weakest() {
        let low = RateTerm::new(0.0, 0.0).with_confidence(Confidence::Low);
        assert!(RateTerm::new(1.0, 0.0).mul(low).is_low());
    }

    #[test]
    fn prefix_sup_classes() {
        assert_eq!(RateTerm::new(-0.25, 0.0).prefix_sup(), RateTerm::new(-0.25, 0.0));
        assert_eq!(RateTerm::new(0.5, 0.0).prefix_sup(), RateTerm::ONE);
        assert_eq!(RateTerm::new(0.0, 1.0).prefix_sup(), RateTerm::new(0.0, 1.0));
        assert_eq!(RateTerm::new(0.0, -1.0).prefix_sup(), RateTerm::ONE);
    }

    #[test]
    fn boundedness_classes() {
        assert!(RateTerm::new(0.0, 0.0).is_bounded());
        assert!(!RateTerm::new(0.0, 0.0).is_null());
        assert!(RateTerm::new(0.0, -0.1).is_null());
        assert!(!RateTerm::new(-1e-3, 0.0).is_bounded());
        assert!(!RateTerm::new(1e-12, 5.0).is_bounded());
    }
}
