//! The exp/log image of a multiplicative model: V(p) = E_p[φ*(D*(t) + v*(x))]
//! with φ* = φ∘exp, D* = ln D, v* = ln v. Converting back recovers the
//! multiplicative form exactly, and both forms agree pointwise to float
//! precision; the round trip is what makes the uniqueness statement about
//! positive linear transforms of (ln D, ln v) checkable.

use serde::Serialize;

use crate::lottery::Domain;
use crate::models::{CurvatureSpec, DiscountSpec, MultiplicativeEu, ValueSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditiveForm {
    phi: CurvatureSpec,
    discount: DiscountSpec,
    value: ValueSpec,
    domain: Domain,
}

impl AdditiveForm {
    pub(crate) fn new(
        phi: CurvatureSpec,
        discount: DiscountSpec,
        value: ValueSpec,
        domain: Domain,
    ) -> Self {
        AdditiveForm {
            phi,
            discount,
            value,
            domain,
        }
    }

    /// φ*(z) = φ(e^z)
    pub fn phi_star(&self, z: f64) -> f64 {
        self.phi.eval_exp(z)
    }

    /// D*(t) = ln D(t)
    pub fn d_star(&self, t: f64) -> f64 {
        self.discount.ln_eval(t)
    }

    /// v*(x) = ln v(x)
    pub fn v_star(&self, x: f64) -> f64 {
        self.value.ln_eval(x)
    }

    /// φ*(D*(t) + v*(x)); agrees with the multiplicative φ(D(t)·v(x)) within
    /// 1e-12 relative at every domain point.
    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.phi_star(self.d_star(t) + self.v_star(x))
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Exact inverse of `MultiplicativeEu::to_additive`.
    pub fn to_multiplicative(&self) -> MultiplicativeEu {
        MultiplicativeEu::new_outside_guarantee(
            self.phi.clone(),
            self.discount.clone(),
            self.value.clone(),
            self.domain,
        )
        .expect("additive forms only arise from validated multiplicative models")
    }
}
