//! Component catalogs for the multiplicative representation φ(D(t)·v(x)).
//!
//! Catalog-only by design: every member has closed-form first and second
//! derivatives, so the derivative-based axiom characterizations (mixed
//! partial for stochastic impatience, time concavity for risk attitude) can
//! be checked without symbolic machinery. Representation transforms wrap
//! members in `LogShifted`/`LogAffine` nodes, which keep the chain rule
//! available and simplify back into plain catalog members when exact.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Risk-curvature component φ, strictly increasing on its valid range.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurvatureSpec {
    /// φ(y) = y
    Identity,
    /// φ(y) = y^γ, γ > 0
    Power { gamma: f64 },
    /// φ(y) = −(−ln y)^b on y ∈ (0,1), b ∈ (0,1)
    #[serde(rename = "neg_neglog_pow")]
    NegNegLogPow { b: f64 },
    /// φ'(y) = base(exp((ln y − shift)/scale)); the curvature image of a
    /// positive linear transform of (ln D, ln v).
    LogShifted {
        base: Box<CurvatureSpec>,
        scale: f64,
        shift: f64,
    },
}

impl CurvatureSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            CurvatureSpec::Identity => Ok(()),
            CurvatureSpec::Power { gamma } => {
                if gamma.is_finite() && *gamma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("gamma must be finite and positive"))
                }
            }
            CurvatureSpec::NegNegLogPow { b } => {
                if b.is_finite() && *b > 0.0 && *b < 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("b must lie in (0, 1)"))
                }
            }
            CurvatureSpec::LogShifted { base, scale, shift } => {
                if !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::invalid("transform scale must be positive"));
                }
                if !shift.is_finite() {
                    return Err(Error::invalid("transform shift must be finite"));
                }
                base.validate()
            }
        }
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            CurvatureSpec::Identity => y,
            CurvatureSpec::Power { gamma } => y.powf(*gamma),
            CurvatureSpec::NegNegLogPow { b } => -(-y.ln()).powf(*b),
            CurvatureSpec::LogShifted { base, scale, shift } => {
                base.eval(((y.ln() - shift) / scale).exp())
            }
        }
    }

    /// φ(e^z), evaluated directly so the additive form avoids one exp/ln
    /// round trip (e.g. NegNegLogPow gives −(−z)^b).
    pub fn eval_exp(&self, z: f64) -> f64 {
        match self {
            CurvatureSpec::Identity => z.exp(),
            CurvatureSpec::Power { gamma } => (gamma * z).exp(),
            CurvatureSpec::NegNegLogPow { b } => -(-z).powf(*b),
            CurvatureSpec::LogShifted { base, scale, shift } => base.eval_exp((z - shift) / scale),
        }
    }

    pub fn d1(&self, y: f64) -> f64 {
        match self {
            CurvatureSpec::Identity => 1.0,
            CurvatureSpec::Power { gamma } => gamma * y.powf(gamma - 1.0),
            CurvatureSpec::NegNegLogPow { b } => {
                let l = -y.ln();
                (b / y) * l.powf(b - 1.0)
            }
            CurvatureSpec::LogShifted { base, scale, shift } => {
                let g = ((y.ln() - shift) / scale).exp();
                base.d1(g) * g / (scale * y)
            }
        }
    }

    pub fn d2(&self, y: f64) -> f64 {
        match self {
            CurvatureSpec::Identity => 0.0,
            CurvatureSpec::Power { gamma } => gamma * (gamma - 1.0) * y.powf(gamma - 2.0),
            CurvatureSpec::NegNegLogPow { b } => {
                let l = -y.ln();
                -(b / (y * y)) * l.powf(b - 2.0) * (l + b - 1.0)
            }
            CurvatureSpec::LogShifted { base, scale, shift } => {
                let g = ((y.ln() - shift) / scale).exp();
                let g1 = g / (scale * y);
                let g2 = g * (1.0 - scale) / (scale * scale * y * y);
                base.d2(g) * g1 * g1 + base.d1(g) * g2
            }
        }
    }

    pub fn domain_ok(&self, y: f64) -> bool {
        match self {
            CurvatureSpec::Identity | CurvatureSpec::Power { .. } => y > 0.0 && y.is_finite(),
            CurvatureSpec::NegNegLogPow { .. } => y > 0.0 && y < 1.0,
            CurvatureSpec::LogShifted { base, scale, shift } => {
                y > 0.0 && y.is_finite() && base.domain_ok(((y.ln() - shift) / scale).exp())
            }
        }
    }

    /// Check that the whole interval [y_min, y_max] lies in φ's valid range.
    pub fn check_range(&self, y_min: f64, y_max: f64) -> Result<()> {
        if self.domain_ok(y_min) && self.domain_ok(y_max) {
            Ok(())
        } else {
            Err(Error::CurvatureDomain(format!(
                "{self} is not defined on the value range [{y_min}, {y_max}]"
            )))
        }
    }

    /// Collapse exact transform wrappers back into catalog members
    /// (possible when the shift vanishes or the scale is one).
    #[allow(clippy::redundant_guards)]
    pub fn simplified(self) -> CurvatureSpec {
        match self {
            CurvatureSpec::LogShifted { base, scale, shift } if shift == 0.0 => {
                match (*base, scale) {
                    (b, s) if s == 1.0 => b,
                    (CurvatureSpec::Identity, s) => CurvatureSpec::Power { gamma: 1.0 / s },
                    (CurvatureSpec::Power { gamma }, s) => {
                        CurvatureSpec::Power { gamma: gamma / s }
                    }
                    (b, s) => CurvatureSpec::LogShifted {
                        base: Box::new(b),
                        scale: s,
                        shift: 0.0,
                    },
                }
            }
            other => other,
        }
    }
}

impl fmt::Display for CurvatureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureSpec::Identity => write!(f, "identity"),
            CurvatureSpec::Power { gamma } => write!(f, "power(gamma={gamma})"),
            CurvatureSpec::NegNegLogPow { b } => write!(f, "neg_neglog_pow(b={b})"),
            CurvatureSpec::LogShifted { base, scale, shift } => {
                write!(f, "log_shifted({base}, scale={scale}, shift={shift})")
            }
        }
    }
}

/// Discount component D, positive and strictly decreasing on T.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscountSpec {
    /// D(t) = β^t, β ∈ (0,1)
    Exponential { beta: f64 },
    /// D(t) = 1/(1+kt), k > 0
    Hyperbolic { k: f64 },
    /// D(t) = (1+αt)^(−β/α), α, β > 0
    GeneralizedQuasiHyperbolic { alpha: f64, beta: f64 },
    /// D(t) = d^(t^a), d ∈ (0,1), a > 1
    PowerExponent { d: f64, a: f64 },
    /// D(t) = exp(−t − t³/3)
    ExpCubic,
    /// ln D'(t) = scale·ln base(t) + shift; the discount image of a positive
    /// linear transform of ln D.
    LogAffine {
        base: Box<DiscountSpec>,
        scale: f64,
        shift: f64,
    },
}

impl DiscountSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DiscountSpec::Exponential { beta } => {
                if beta.is_finite() && *beta > 0.0 && *beta < 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("beta must lie in (0, 1)"))
                }
            }
            DiscountSpec::Hyperbolic { k } => {
                if k.is_finite() && *k > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("k must be finite and positive"))
                }
            }
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                if alpha.is_finite() && *alpha > 0.0 && beta.is_finite() && *beta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("alpha and beta must be finite and positive"))
                }
            }
            DiscountSpec::PowerExponent { d, a } => {
                if !(d.is_finite() && *d > 0.0 && *d < 1.0) {
                    return Err(Error::invalid("d must lie in (0, 1)"));
                }
                if !(a.is_finite() && *a > 1.0) {
                    return Err(Error::invalid("a must exceed 1"));
                }
                Ok(())
            }
            DiscountSpec::ExpCubic => Ok(()),
            DiscountSpec::LogAffine { base, scale, shift } => {
                if !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::invalid("transform scale must be positive"));
                }
                if !shift.is_finite() {
                    return Err(Error::invalid("transform shift must be finite"));
                }
                base.validate()
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            DiscountSpec::Exponential { beta } => beta.powf(t),
            DiscountSpec::Hyperbolic { k } => 1.0 / (1.0 + k * t),
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                (-(beta / alpha) * (alpha * t).ln_1p()).exp()
            }
            DiscountSpec::PowerExponent { d, a } => (t.powf(*a) * d.ln()).exp(),
            DiscountSpec::ExpCubic => (-t - t * t * t / 3.0).exp(),
            DiscountSpec::LogAffine { .. } => self.ln_eval(t).exp(),
        }
    }

    /// ln D(t) in closed form; the separable No-Future-Bias check and the
    /// additive representation work on this directly.
    pub fn ln_eval(&self, t: f64) -> f64 {
        match self {
            DiscountSpec::Exponential { beta } => t * beta.ln(),
            DiscountSpec::Hyperbolic { k } => -(k * t).ln_1p(),
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                -(beta / alpha) * (alpha * t).ln_1p()
            }
            DiscountSpec::PowerExponent { d, a } => t.powf(*a) * d.ln(),
            DiscountSpec::ExpCubic => -t - t * t * t / 3.0,
            DiscountSpec::LogAffine { base, scale, shift } => scale * base.ln_eval(t) + shift,
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match self {
            DiscountSpec::Exponential { beta } => beta.ln() * self.eval(t),
            DiscountSpec::Hyperbolic { k } => {
                let s = 1.0 + k * t;
                -k / (s * s)
            }
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                let s = 1.0 + alpha * t;
                -beta * (-(beta / alpha + 1.0) * s.ln()).exp()
            }
            DiscountSpec::PowerExponent { d, a } => a * t.powf(a - 1.0) * d.ln() * self.eval(t),
            DiscountSpec::ExpCubic => -(1.0 + t * t) * self.eval(t),
            DiscountSpec::LogAffine { base, scale, .. } => {
                // D' = D · scale · base'/base
                self.eval(t) * scale * base.d1(t) / base.eval(t)
            }
        }
    }

    pub fn d2(&self, t: f64) -> f64 {
        match self {
            DiscountSpec::Exponential { beta } => {
                let l = beta.ln();
                l * l * self.eval(t)
            }
            DiscountSpec::Hyperbolic { k } => {
                let s = 1.0 + k * t;
                2.0 * k * k / (s * s * s)
            }
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                let s = 1.0 + alpha * t;
                beta * (beta + alpha) * (-(beta / alpha + 2.0) * s.ln()).exp()
            }
            DiscountSpec::PowerExponent { d, a } => {
                let ld = d.ln();
                let g1 = a * t.powf(a - 1.0) * ld;
                let g2 = a * (a - 1.0) * t.powf(a - 2.0) * ld;
                (g2 + g1 * g1) * self.eval(t)
            }
            DiscountSpec::ExpCubic => {
                let s = 1.0 + t * t;
                (s * s - 2.0 * t) * self.eval(t)
            }
            DiscountSpec::LogAffine { base, scale, .. } => {
                let f = base.eval(t);
                let r1 = base.d1(t) / f;
                let r2 = base.d2(t) / f;
                self.eval(t) * (scale * scale * r1 * r1 + scale * (r2 - r1 * r1))
            }
        }
    }

    #[allow(clippy::redundant_guards)]
    pub fn simplified(self) -> DiscountSpec {
        match self {
            DiscountSpec::LogAffine { base, scale, shift } if shift == 0.0 => {
                match (*base, scale) {
                    (b, s) if s == 1.0 => b,
                    (DiscountSpec::Exponential { beta }, s) => {
                        DiscountSpec::Exponential { beta: beta.powf(s) }
                    }
                    (DiscountSpec::PowerExponent { d, a }, s) => {
                        DiscountSpec::PowerExponent { d: d.powf(s), a }
                    }
                    (DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta }, s) => {
                        DiscountSpec::GeneralizedQuasiHyperbolic {
                            alpha,
                            beta: beta * s,
                        }
                    }
                    (b, s) => DiscountSpec::LogAffine {
                        base: Box::new(b),
                        scale: s,
                        shift: 0.0,
                    },
                }
            }
            other => other,
        }
    }
}

impl fmt::Display for DiscountSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscountSpec::Exponential { beta } => write!(f, "exponential(beta={beta})"),
            DiscountSpec::Hyperbolic { k } => write!(f, "hyperbolic(k={k})"),
            DiscountSpec::GeneralizedQuasiHyperbolic { alpha, beta } => {
                write!(
                    f,
                    "generalized_quasi_hyperbolic(alpha={alpha}, beta={beta})"
                )
            }
            DiscountSpec::PowerExponent { d, a } => write!(f, "power_exponent(d={d}, a={a})"),
            DiscountSpec::ExpCubic => write!(f, "exp_cubic"),
            DiscountSpec::LogAffine { base, scale, shift } => {
                write!(f, "log_affine({base}, scale={scale}, shift={shift})")
            }
        }
    }
}

/// Prize-evaluation component v, positive and strictly increasing on X.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueSpec {
    /// v(x) = x
    Identity,
    /// v(x) = x^γ, γ > 0
    Power { gamma: f64 },
    /// v(x) = c·x/(1+x), c ∈ (0,1]; range sits inside (0,1)
    BoundedRatio { c: f64 },
    /// ln v'(x) = scale·ln base(x) + shift
    LogAffine {
        base: Box<ValueSpec>,
        scale: f64,
        shift: f64,
    },
}

impl ValueSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ValueSpec::Identity => Ok(()),
            ValueSpec::Power { gamma } => {
                if gamma.is_finite() && *gamma > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("gamma must be finite and positive"))
                }
            }
            ValueSpec::BoundedRatio { c } => {
                if c.is_finite() && *c > 0.0 && *c <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("c must lie in (0, 1]"))
                }
            }
            ValueSpec::LogAffine { base, scale, shift } => {
                if !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::invalid("transform scale must be positive"));
                }
                if !shift.is_finite() {
                    return Err(Error::invalid("transform shift must be finite"));
                }
                base.validate()
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ValueSpec::Identity => x,
            ValueSpec::Power { gamma } => x.powf(*gamma),
            ValueSpec::BoundedRatio { c } => c * x / (1.0 + x),
            ValueSpec::LogAffine { .. } => self.ln_eval(x).exp(),
        }
    }

    pub fn ln_eval(&self, x: f64) -> f64 {
        match self {
            ValueSpec::Identity => x.ln(),
            ValueSpec::Power { gamma } => gamma * x.ln(),
            ValueSpec::BoundedRatio { c } => c.ln() + x.ln() - x.ln_1p(),
            ValueSpec::LogAffine { base, scale, shift } => scale * base.ln_eval(x) + shift,
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match self {
            ValueSpec::Identity => 1.0,
            ValueSpec::Power { gamma } => gamma * x.powf(gamma - 1.0),
            ValueSpec::BoundedRatio { c } => {
                let s = 1.0 + x;
                c / (s * s)
            }
            ValueSpec::LogAffine { base, scale, .. } => {
                self.eval(x) * scale * base.d1(x) / base.eval(x)
            }
        }
    }

    #[allow(clippy::redundant_guards)]
    pub fn simplified(self) -> ValueSpec {
        match self {
            ValueSpec::LogAffine { base, scale, shift } if shift == 0.0 => match (*base, scale) {
                (b, s) if s == 1.0 => b,
                (ValueSpec::Identity, s) => ValueSpec::Power { gamma: s },
                (ValueSpec::Power { gamma }, s) => ValueSpec::Power { gamma: gamma * s },
                (b, s) => ValueSpec::LogAffine {
                    base: Box::new(b),
                    scale: s,
                    shift: 0.0,
                },
            },
            other => other,
        }
    }
}

impl fmt::Display for ValueSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSpec::Identity => write!(f, "identity"),
            ValueSpec::Power { gamma } => write!(f, "power(gamma={gamma})"),
            ValueSpec::BoundedRatio { c } => write!(f, "bounded_ratio(c={c})"),
            ValueSpec::LogAffine { base, scale, shift } => {
                write!(f, "log_affine({base}, scale={scale}, shift={shift})")
            }
        }
    }
}

/// Disappointment adjustment R(z) = λ(e^(κz) − 1): increasing, R(0)=0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpGain {
    pub lambda: f64,
    pub kappa: f64,
}

impl ExpGain {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::invalid("lambda must be finite and positive"));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::invalid("kappa must be finite and positive"));
        }
        Ok(())
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.lambda * (self.kappa * z).exp_m1()
    }
}

/// How the disappointment model resolves the reference utility ū.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceRule {
    /// ū = E_p[u]
    MeanOfLottery,
    /// ū fixed independent of the lottery
    Constant { u_bar: f64 },
}

impl ReferenceRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            ReferenceRule::MeanOfLottery => Ok(()),
            ReferenceRule::Constant { u_bar } => {
                if u_bar.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("u_bar must be finite"))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discount_members_decrease_and_stay_in_unit_interval() {
        let members = [
            DiscountSpec::Exponential { beta: 0.9 },
            DiscountSpec::Hyperbolic { k: 1.0 },
            DiscountSpec::GeneralizedQuasiHyperbolic {
                alpha: 0.5,
                beta: 1.5,
            },
            DiscountSpec::PowerExponent { d: 0.9, a: 2.0 },
            DiscountSpec::ExpCubic,
        ];
        for m in &members {
            m.validate().unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..=50 {
                let t = 10.0 * i as f64 / 50.0;
                let v = m.eval(t);
                assert!(v > 0.0 && v <= 1.0, "{m} at t={t} gave {v}");
                assert!(v < prev, "{m} must strictly decrease");
                assert!((v.ln() - m.ln_eval(t)).abs() < 1e-12 * v.ln().abs().max(1.0));
                prev = v;
            }
        }
    }

    #[test]
    fn parameter_ranges_enforced() {
        assert!(DiscountSpec::Exponential { beta: 1.2 }.validate().is_err());
        assert!(DiscountSpec::Exponential { beta: 1.0 }.validate().is_err());
        assert!(DiscountSpec::PowerExponent { d: 0.9, a: 1.0 }
            .validate()
            .is_err());
        assert!(DiscountSpec::PowerExponent { d: 1.1, a: 2.0 }
            .validate()
            .is_err());
        assert!(CurvatureSpec::NegNegLogPow { b: 1.0 }.validate().is_err());
        assert!(CurvatureSpec::Power { gamma: 0.0 }.validate().is_err());
        assert!(ValueSpec::BoundedRatio { c: 1.5 }.validate().is_err());
        assert!(ValueSpec::BoundedRatio { c: 1.0 }.validate().is_ok());
    }

    #[test]
    fn neg_neglog_pow_matches_closed_form() {
        let phi = CurvatureSpec::NegNegLogPow { b: 0.6 };
        let y = 0.45;
        assert!((phi.eval(y) - -((-y.ln()).powf(0.6))).abs() < 1e-15);
        // eval_exp agrees with eval∘exp.
        let z = -0.8;
        assert!((phi.eval_exp(z) - phi.eval(z.exp())).abs() < 1e-12);
        assert!(phi.domain_ok(0.5));
        assert!(!phi.domain_ok(1.0));
        assert!(!phi.domain_ok(0.0));
    }

    #[test]
    fn spec_derivatives_match_finite_differences() {
        let h = 1e-5;
        let discounts = [
            DiscountSpec::Exponential { beta: 0.9 },
            DiscountSpec::Hyperbolic { k: 1.0 },
            DiscountSpec::GeneralizedQuasiHyperbolic {
                alpha: 0.5,
                beta: 1.5,
            },
            DiscountSpec::PowerExponent { d: 0.9, a: 2.0 },
            DiscountSpec::ExpCubic,
            DiscountSpec::LogAffine {
                base: Box::new(DiscountSpec::Hyperbolic { k: 1.0 }),
                scale: 2.0,
                shift: 0.1,
            },
        ];
        for m in &discounts {
            for t in [0.3, 1.0, 2.5, 7.0] {
                let fd1 = (m.eval(t + h) - m.eval(t - h)) / (2.0 * h);
                let fd2 = (m.eval(t + h) - 2.0 * m.eval(t) + m.eval(t - h)) / (h * h);
                assert!(
                    (m.d1(t) - fd1).abs() <= 1e-6 * fd1.abs().max(1e-3),
                    "{m} d1 at t={t}: {} vs {}",
                    m.d1(t),
                    fd1
                );
                assert!(
                    (m.d2(t) - fd2).abs() <= 1e-4 * fd2.abs().max(1e-2),
                    "{m} d2 at t={t}: {} vs {}",
                    m.d2(t),
                    fd2
                );
            }
        }

        let curvatures = [
            CurvatureSpec::Identity,
            CurvatureSpec::Power { gamma: 0.7 },
            CurvatureSpec::NegNegLogPow { b: 0.6 },
            CurvatureSpec::LogShifted {
                base: Box::new(CurvatureSpec::NegNegLogPow { b: 0.6 }),
                scale: 2.0,
                shift: -0.3,
            },
        ];
        for phi in &curvatures {
            for y in [0.2, 0.45, 0.8] {
                if !phi.domain_ok(y) {
                    continue;
                }
                let fd1 = (phi.eval(y + h) - phi.eval(y - h)) / (2.0 * h);
                let fd2 = (phi.eval(y + h) - 2.0 * phi.eval(y) + phi.eval(y - h)) / (h * h);
                assert!(
                    (phi.d1(y) - fd1).abs() <= 1e-6 * fd1.abs().max(1e-3),
                    "{phi} d1 at {y}"
                );
                assert!(
                    (phi.d2(y) - fd2).abs() <= 1e-4 * fd2.abs().max(1e-2),
                    "{phi} d2 at {y}"
                );
            }
        }

        let values = [
            ValueSpec::Identity,
            ValueSpec::Power { gamma: 0.8 },
            ValueSpec::BoundedRatio { c: 1.0 },
            ValueSpec::LogAffine {
                base: Box::new(ValueSpec::BoundedRatio { c: 0.9 }),
                scale: 2.0,
                shift: -0.2,
            },
        ];
        for v in &values {
            for x in [0.5, 2.0, 50.0] {
                let fd1 = (v.eval(x + h) - v.eval(x - h)) / (2.0 * h);
                assert!(
                    (v.d1(x) - fd1).abs() <= 1e-6 * fd1.abs().max(1e-6),
                    "{v} d1 at {x}"
                );
            }
        }
    }

    #[test]
    fn simplification_yields_catalog_members() {
        let d = DiscountSpec::LogAffine {
            base: Box::new(DiscountSpec::Exponential { beta: 0.9 }),
            scale: 2.0,
            shift: 0.0,
        }
        .simplified();
        assert_eq!(
            d,
            DiscountSpec::Exponential {
                beta: 0.9f64.powf(2.0)
            }
        );

        let v = ValueSpec::LogAffine {
            base: Box::new(ValueSpec::Identity),
            scale: 2.0,
            shift: 0.0,
        }
        .simplified();
        assert_eq!(v, ValueSpec::Power { gamma: 2.0 });

        let phi = CurvatureSpec::LogShifted {
            base: Box::new(CurvatureSpec::Identity),
            scale: 2.0,
            shift: 0.0,
        }
        .simplified();
        assert_eq!(phi, CurvatureSpec::Power { gamma: 0.5 });

        // A nonzero shift cannot be folded away.
        let kept = DiscountSpec::LogAffine {
            base: Box::new(DiscountSpec::Exponential { beta: 0.9 }),
            scale: 2.0,
            shift: 0.1,
        }
        .simplified();
        assert!(matches!(kept, DiscountSpec::LogAffine { .. }));
    }

    #[test]
    fn exp_gain_is_zero_at_zero() {
        let r = ExpGain {
            lambda: 0.5,
            kappa: 1.0,
        };
        r.validate().unwrap();
        assert_eq!(r.eval(0.0), 0.0);
        assert!(r.eval(1.0) > 0.0);
        assert!(r.eval(-1.0) < 0.0);
    }
}
