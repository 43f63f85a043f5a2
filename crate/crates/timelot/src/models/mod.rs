//! The model catalog and its evaluation semantics.
//!
//! Three families share one degenerate backbone u(x,t):
//!
//! * `MultiplicativeEu` — expected utility V(p) = E_p[φ(D(t)·v(x))], with
//!   u = φ(D·v). Evaluates any simple lottery.
//! * `Glbu` — generalized local bilinear utility over half-half binaries:
//!   V(½δ+½δ') = π(½)·max(u,u') + (1−π(½))·min(u,u') with u = D·v. Anything
//!   other than a half-half binary or a degenerate is an error rather than an
//!   extrapolation.
//! * `Disappointment` — V(p) = E_p[u + R(u − ū)] with u = D·v, R(0) = 0, and
//!   ū either the lottery's own mean utility or a constant.

mod additive;
mod conditions;
mod specs;

pub use additive::AdditiveForm;
pub use conditions::{check_representation_conditions, RepresentationConditions};
pub use specs::{CurvatureSpec, DiscountSpec, ExpGain, ReferenceRule, ValueSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lottery::{Domain, Lottery, Outcome};
use crate::verdict::{
    Tolerances, BISECT_TOL_SCALE, DEFAULT_FD_STEP_FRAC, DEFAULT_GRID_N, DEFAULT_SAMPLE_N,
    DEFAULT_SEED, EQ_TOL_SCALE, STRICT_MARGIN_SCALE,
};

/// Expected-utility model V(p) = E_p[φ(D(t)·v(x))].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativeEu {
    phi: CurvatureSpec,
    discount: DiscountSpec,
    value: ValueSpec,
    domain: Domain,
}

impl MultiplicativeEu {
    /// Validates component parameters, that φ is defined on all of
    /// Range(D·v), and the strict-SI/RATL parameter guarantee for the
    /// curved-power combination (b must lie in (1/a, 1) when φ is
    /// neg_neglog_pow and D is power_exponent).
    pub fn new(
        phi: CurvatureSpec,
        discount: DiscountSpec,
        value: ValueSpec,
        domain: Domain,
    ) -> Result<Self> {
        if let (CurvatureSpec::NegNegLogPow { b }, DiscountSpec::PowerExponent { a, .. }) =
            (&phi, &discount)
        {
            if *b <= 1.0 / *a {
                return Err(Error::invalid(format!(
                    "b must lie in (1/a, 1): got b={b} with 1/a={}",
                    1.0 / *a
                )));
            }
        }
        Self::new_outside_guarantee(phi, discount, value, domain)
    }

    /// Same numeric validation as `new` but without the curved-power
    /// parameter guarantee; the region scanner uses this to audit cells
    /// outside the guaranteed rectangle empirically.
    pub fn new_outside_guarantee(
        phi: CurvatureSpec,
        discount: DiscountSpec,
        value: ValueSpec,
        domain: Domain,
    ) -> Result<Self> {
        phi.validate()?;
        discount.validate()?;
        value.validate()?;
        // D decreasing, v increasing: the value range is spanned by the
        // corner points.
        let y_min = discount.eval(domain.t_hi()) * value.eval(domain.x_lo());
        let y_max = discount.eval(domain.t_lo()) * value.eval(domain.x_hi());
        phi.check_range(y_min, y_max)?;
        Ok(MultiplicativeEu {
            phi,
            discount,
            value,
            domain,
        })
    }

    pub fn phi(&self) -> &CurvatureSpec {
        &self.phi
    }

    pub fn discount(&self) -> &DiscountSpec {
        &self.discount
    }

    pub fn value(&self) -> &ValueSpec {
        &self.value
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// u(x,t) = φ(D(t)·v(x)), the degenerate utility.
    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.phi.eval(self.discount.eval(t) * self.value.eval(x))
    }

    /// Analytic mixed partial u_xt via the chain rule.
    pub fn u_xt(&self, x: f64, t: f64) -> f64 {
        let d = self.discount.eval(t);
        let v = self.value.eval(x);
        let d1 = self.discount.d1(t);
        let v1 = self.value.d1(x);
        let y = d * v;
        self.phi.d2(y) * (d1 * v) * (d * v1) + self.phi.d1(y) * d1 * v1
    }

    /// Analytic second time derivative u_tt via the chain rule.
    pub fn u_tt(&self, x: f64, t: f64) -> f64 {
        let d = self.discount.eval(t);
        let v = self.value.eval(x);
        let d1 = self.discount.d1(t);
        let d2 = self.discount.d2(t);
        let y = d * v;
        let g = d1 * v;
        self.phi.d2(y) * g * g + self.phi.d1(y) * d2 * v
    }

    /// Exp/log image: V(p) = E_p[φ*(D*(t) + v*(x))] with φ* = φ∘exp,
    /// D* = ln D, v* = ln v.
    pub fn to_additive(&self) -> Result<AdditiveForm> {
        // Catalog members are positive by construction; the guard protects
        // against degenerate underflow at extreme domains.
        if self.discount.eval(self.domain.t_hi()) <= 0.0
            || self.value.eval(self.domain.x_lo()) <= 0.0
        {
            return Err(Error::NonPositiveComponent);
        }
        Ok(AdditiveForm::new(
            self.phi.clone(),
            self.discount.clone(),
            self.value.clone(),
            self.domain,
        ))
    }

    /// The positive linear representation transform ln D' = a·ln D + b1,
    /// ln v' = a·ln v + b2, with φ adjusted so every lottery keeps its value:
    /// φ'(y) = φ(exp((ln y − b1 − b2)/a)).
    pub fn transform(&self, a: f64, b1: f64, b2: f64) -> Result<MultiplicativeEu> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::invalid("transform scale a must be positive"));
        }
        if !b1.is_finite() || !b2.is_finite() {
            return Err(Error::invalid("transform shifts must be finite"));
        }
        if a == 1.0 && b1 == 0.0 && b2 == 0.0 {
            return Ok(self.clone());
        }
        let phi = CurvatureSpec::LogShifted {
            base: Box::new(self.phi.clone()),
            scale: a,
            shift: b1 + b2,
        }
        .simplified();
        let discount = DiscountSpec::LogAffine {
            base: Box::new(self.discount.clone()),
            scale: a,
            shift: b1,
        }
        .simplified();
        let value = ValueSpec::LogAffine {
            base: Box::new(self.value.clone()),
            scale: a,
            shift: b2,
        }
        .simplified();
        Self::new_outside_guarantee(phi, discount, value, self.domain)
    }
}

/// Central finite-difference estimate of u_xt with steps (hx, ht).
pub fn fd_u_xt(m: &MultiplicativeEu, x: f64, t: f64, hx: f64, ht: f64) -> f64 {
    (m.u(x + hx, t + ht) - m.u(x + hx, t - ht) - m.u(x - hx, t + ht) + m.u(x - hx, t - ht))
        / (4.0 * hx * ht)
}

/// Central finite-difference estimate of u_tt with step ht.
pub fn fd_u_tt(m: &MultiplicativeEu, x: f64, t: f64, ht: f64) -> f64 {
    (m.u(x, t + ht) - 2.0 * m.u(x, t) + m.u(x, t - ht)) / (ht * ht)
}

/// Generalized local bilinear utility over half-half binaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Glbu {
    discount: DiscountSpec,
    value: ValueSpec,
    pi_half: f64,
    domain: Domain,
}

impl Glbu {
    pub fn new(
        discount: DiscountSpec,
        value: ValueSpec,
        pi_half: f64,
        domain: Domain,
    ) -> Result<Self> {
        discount.validate()?;
        value.validate()?;
        if !(pi_half.is_finite() && pi_half > 0.0 && pi_half < 1.0) {
            return Err(Error::invalid("pi_half must lie in (0, 1)"));
        }
        Ok(Glbu {
            discount,
            value,
            pi_half,
            domain,
        })
    }

    pub fn pi_half(&self) -> f64 {
        self.pi_half
    }

    pub fn discount(&self) -> &DiscountSpec {
        &self.discount
    }

    pub fn value(&self) -> &ValueSpec {
        &self.value
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.discount.eval(t) * self.value.eval(x)
    }
}

/// Disappointment model V(p) = E_p[u + R(u − ū)].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disappointment {
    discount: DiscountSpec,
    value: ValueSpec,
    gain: ExpGain,
    reference: ReferenceRule,
    domain: Domain,
}

impl Disappointment {
    pub fn new(
        discount: DiscountSpec,
        value: ValueSpec,
        gain: ExpGain,
        reference: ReferenceRule,
        domain: Domain,
    ) -> Result<Self> {
        discount.validate()?;
        value.validate()?;
        gain.validate()?;
        reference.validate()?;
        Ok(Disappointment {
            discount,
            value,
            gain,
            reference,
            domain,
        })
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.discount.eval(t) * self.value.eval(x)
    }

    pub fn discount(&self) -> &DiscountSpec {
        &self.discount
    }

    pub fn value(&self) -> &ValueSpec {
        &self.value
    }

    pub fn gain(&self) -> ExpGain {
        self.gain
    }

    pub fn reference(&self) -> ReferenceRule {
        self.reference
    }

    fn value_from_utilities(&self, us: &[(f64, f64)]) -> f64 {
        let u_bar = match self.reference {
            ReferenceRule::MeanOfLottery => us.iter().map(|(u, p)| u * p).sum(),
            ReferenceRule::Constant { u_bar } => u_bar,
        };
        us.iter()
            .map(|(u, p)| p * (u + self.gain.eval(u - u_bar)))
            .sum()
    }
}

/// A catalog model: the tag decides both the evaluation rule and which
/// lottery shapes are admissible.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Model {
    MultiplicativeEu(MultiplicativeEu),
    Glbu(Glbu),
    Disappointment(Disappointment),
}

impl Model {
    pub fn multiplicative_eu(
        phi: CurvatureSpec,
        discount: DiscountSpec,
        value: ValueSpec,
        domain: Domain,
    ) -> Result<Self> {
        Ok(Model::MultiplicativeEu(MultiplicativeEu::new(
            phi, discount, value, domain,
        )?))
    }

    pub fn glbu(
        discount: DiscountSpec,
        value: ValueSpec,
        pi_half: f64,
        domain: Domain,
    ) -> Result<Self> {
        Ok(Model::Glbu(Glbu::new(discount, value, pi_half, domain)?))
    }

    pub fn disappointment(
        discount: DiscountSpec,
        value: ValueSpec,
        gain: ExpGain,
        reference: ReferenceRule,
        domain: Domain,
    ) -> Result<Self> {
        Ok(Model::Disappointment(Disappointment::new(
            discount, value, gain, reference, domain,
        )?))
    }

    pub fn domain(&self) -> &Domain {
        match self {
            Model::MultiplicativeEu(m) => &m.domain,
            Model::Glbu(m) => &m.domain,
            Model::Disappointment(m) => &m.domain,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Model::MultiplicativeEu(_) => "multiplicative_eu",
            Model::Glbu(_) => "glbu",
            Model::Disappointment(_) => "disappointment",
        }
    }

    pub fn as_multiplicative_eu(&self) -> Option<&MultiplicativeEu> {
        match self {
            Model::MultiplicativeEu(m) => Some(m),
            _ => None,
        }
    }

    /// Human-readable identifier embedded in reports.
    pub fn id_string(&self) -> String {
        match self {
            Model::MultiplicativeEu(m) => format!(
                "multiplicative_eu(phi={}, discount={}, value={})",
                m.phi, m.discount, m.value
            ),
            Model::Glbu(m) => format!(
                "glbu(pi_half={}, discount={}, value={})",
                m.pi_half, m.discount, m.value
            ),
            Model::Disappointment(m) => format!(
                "disappointment(lambda={}, kappa={}, reference={:?}, discount={}, value={})",
                m.gain.lambda, m.gain.kappa, m.reference, m.discount, m.value
            ),
        }
    }

    /// Degenerate value u(x,t), no domain check. Grid code feeds this points
    /// that are inside the domain by construction.
    pub(crate) fn value_at(&self, x: f64, t: f64) -> f64 {
        match self {
            Model::MultiplicativeEu(m) => m.u(x, t),
            Model::Glbu(m) => m.u(x, t),
            Model::Disappointment(m) => m.u(x, t),
        }
    }

    /// Value of the half-half binary lottery over two outcomes with
    /// degenerate utilities `ua`, `ub`.
    pub(crate) fn half_half(&self, ua: f64, ub: f64) -> f64 {
        match self {
            Model::MultiplicativeEu(_) => 0.5 * (ua + ub),
            Model::Glbu(m) => {
                let pi = m.pi_half;
                pi * ua.max(ub) + (1.0 - pi) * ua.min(ub)
            }
            Model::Disappointment(m) => m.value_from_utilities(&[(ua, 0.5), (ub, 0.5)]),
        }
    }

    /// True when the family evaluates arbitrary finite-support lotteries.
    pub fn supports_general_lotteries(&self) -> bool {
        !matches!(self, Model::Glbu(_))
    }

    /// V restricted to the degenerate lottery at `o`.
    pub fn eval_outcome(&self, o: Outcome) -> Result<f64> {
        self.eval_at(o.x, o.t)
    }

    /// V(δ_(x,t)) with domain and curvature-range checks.
    pub fn eval_at(&self, x: f64, t: f64) -> Result<f64> {
        let domain = self.domain();
        if !domain.contains(x, t) {
            return Err(Error::OutOfDomain {
                x,
                t,
                domain: domain.to_string(),
            });
        }
        if let Model::MultiplicativeEu(m) = self {
            let y = m.discount.eval(t) * m.value.eval(x);
            if !m.phi.domain_ok(y) {
                return Err(Error::CurvatureDomain(format!(
                    "value {y} at ({x}, {t}) is outside the valid range of {}",
                    m.phi
                )));
            }
        }
        Ok(self.value_at(x, t))
    }

    /// V(p). Expected utility and disappointment take any lottery; GLBU is
    /// defined exactly on degenerates and half-half binaries.
    pub fn eval_lottery(&self, p: &Lottery) -> Result<f64> {
        if p.domain() != self.domain() {
            return Err(Error::DomainMismatch);
        }
        match self {
            Model::MultiplicativeEu(m) => {
                Ok(p.atoms().iter().map(|(o, w)| w * m.u(o.x, o.t)).sum())
            }
            Model::Glbu(m) => {
                let atoms = p.atoms();
                match atoms {
                    [(o, _)] => Ok(m.u(o.x, o.t)),
                    [(oa, pa), (ob, pb)]
                        if (pa - 0.5).abs() <= 1e-12 && (pb - 0.5).abs() <= 1e-12 =>
                    {
                        Ok(self.half_half(m.u(oa.x, oa.t), m.u(ob.x, ob.t)))
                    }
                    _ => Err(Error::UnsupportedLotteryShape(format!(
                        "glbu evaluates degenerates and half-half binaries only, got {} atoms with probabilities {:?}",
                        atoms.len(),
                        atoms.iter().map(|(_, w)| *w).collect::<Vec<_>>()
                    ))),
                }
            }
            Model::Disappointment(m) => {
                let us: Vec<(f64, f64)> =
                    p.atoms().iter().map(|(o, w)| (m.u(o.x, o.t), *w)).collect();
                Ok(m.value_from_utilities(&us))
            }
        }
    }

    /// Largest |u| over the default grid; the utility scale behind the
    /// scale-aware tolerance defaults.
    pub fn utility_scale(&self, grid_n: usize) -> f64 {
        let domain = self.domain();
        let xs = domain.x_grid(grid_n);
        let ts = domain.t_grid(grid_n);
        let mut scale: f64 = 0.0;
        for &x in &xs {
            for &t in &ts {
                scale = scale.max(self.value_at(x, t).abs());
            }
        }
        scale.max(f64::MIN_POSITIVE)
    }

    /// Scale-aware default tolerances: eq_tol = 1e-9·max|u|,
    /// strict_margin = 1e-7·max|u|, bisect_tol = 1e-10·max axis length.
    pub fn default_tolerances(&self) -> Tolerances {
        self.default_tolerances_with(DEFAULT_GRID_N, DEFAULT_SAMPLE_N, DEFAULT_SEED)
    }

    pub fn default_tolerances_with(&self, grid_n: usize, sample_n: usize, seed: u64) -> Tolerances {
        let scale = self.utility_scale(grid_n);
        let domain = self.domain();
        let axis = domain.x_len().max(domain.t_len());
        Tolerances::new(
            EQ_TOL_SCALE * scale,
            STRICT_MARGIN_SCALE * scale,
            DEFAULT_FD_STEP_FRAC,
            BISECT_TOL_SCALE * axis,
            grid_n,
            sample_n,
            seed,
        )
        .expect("scaled defaults satisfy the tolerance invariants")
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let value = serde_json::Value::deserialize(deserializer)?;
        crate::files::model_from_value(&value).map_err(serde::de::Error::custom)
    }
}
