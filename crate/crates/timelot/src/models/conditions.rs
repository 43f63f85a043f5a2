//! Grid certification of the four representation conditions that
//! characterize models satisfying all the audited axioms together with
//! stochastic impatience and risk aversion over time lotteries:
//!
//! 1. φ∘exp convex on ln Range(D·v)
//! 2. D positive and strictly decreasing
//! 3. v positive and strictly increasing
//! 4. t ↦ φ(D(t)·v(x)) concave for each x
//!
//! Components (2) and (3) are certified against tolerances scaled to their
//! own magnitude so the verdicts stay unit-invariant.

use serde::{Deserialize, Serialize};

use crate::lottery::linspace;
use crate::models::MultiplicativeEu;
use crate::verdict::{
    atom, MarginScan, Tolerances, Verdict, Witness, EQ_TOL_SCALE, STRICT_MARGIN_SCALE,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationConditions {
    /// (1) second differences of φ(e^z) nonnegative on ln Range(D·v)
    pub phi_exp_convex: Verdict,
    /// (2) adjacent grid decrements of D strictly positive
    pub discount_strictly_decreasing: Verdict,
    /// (3) adjacent grid increments of v strictly positive
    pub value_strictly_increasing: Verdict,
    /// (4) second time-differences of u(x,·) nonpositive for every grid x
    pub time_slice_concave: Verdict,
}

impl RepresentationConditions {
    pub fn all_hold(&self) -> bool {
        self.phi_exp_convex.holds()
            && self.discount_strictly_decreasing.holds()
            && self.value_strictly_increasing.holds()
            && self.time_slice_concave.holds()
    }
}

pub fn check_representation_conditions(
    m: &MultiplicativeEu,
    tol: &Tolerances,
) -> RepresentationConditions {
    let domain = m.domain();
    let n = tol.grid_n;
    let xs = domain.x_grid(n);
    let ts = domain.t_grid(n);

    // (1) φ∘exp convexity over the log value range.
    let y_min = m.discount().eval(domain.t_hi()) * m.value().eval(domain.x_lo());
    let y_max = m.discount().eval(domain.t_lo()) * m.value().eval(domain.x_hi());
    let zs = linspace(y_min.ln(), y_max.ln(), n);
    let mut convex = MarginScan::new("conditions/phi_exp_convex");
    for w in zs.windows(3) {
        let (z0, z1, z2) = (w[0], w[1], w[2]);
        let margin = m.phi().eval_exp(z0) + m.phi().eval_exp(z2) - 2.0 * m.phi().eval_exp(z1);
        convex.record(margin, tol, || {
            Witness::stencil(
                "conditions/phi_exp_convex",
                vec![z0, z1, z2],
                m.phi().eval_exp(z0) + m.phi().eval_exp(z2),
                2.0 * m.phi().eval_exp(z1),
            )
        });
    }

    // (2) D strictly decreasing, margins in D units.
    let d_scale = ts
        .iter()
        .map(|&t| m.discount().eval(t).abs())
        .fold(0.0f64, f64::max);
    let d_tol = component_tolerances(tol, d_scale);
    let mut decreasing = MarginScan::new("conditions/discount_strictly_decreasing");
    for w in ts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let margin = m.discount().eval(t0) - m.discount().eval(t1);
        decreasing.record(margin, &d_tol, || {
            Witness::stencil(
                "conditions/discount_strictly_decreasing",
                vec![t0, t1],
                m.discount().eval(t0),
                m.discount().eval(t1),
            )
        });
    }

    // (3) v strictly increasing, margins in v units.
    let v_scale = xs
        .iter()
        .map(|&x| m.value().eval(x).abs())
        .fold(0.0f64, f64::max);
    let v_tol = component_tolerances(tol, v_scale);
    let mut increasing = MarginScan::new("conditions/value_strictly_increasing");
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let margin = m.value().eval(x1) - m.value().eval(x0);
        increasing.record(margin, &v_tol, || {
            Witness::stencil(
                "conditions/value_strictly_increasing",
                vec![x0, x1],
                m.value().eval(x1),
                m.value().eval(x0),
            )
        });
    }

    // (4) concavity of each time slice, expressed as the half-half lottery
    // comparison so the witness is reproducible by lottery evaluation.
    let mut concave = MarginScan::new("conditions/time_slice_concave");
    for &x in &xs {
        for w in ts.windows(3) {
            let (t0, t1, t2) = (w[0], w[1], w[2]);
            let mid = m.u(x, t1);
            let avg = 0.5 * (m.u(x, t0) + m.u(x, t2));
            let margin = mid - avg;
            concave.record(margin, tol, || {
                Witness::compared(
                    "conditions/time_slice_concave",
                    vec![atom(x, t1, 1.0)],
                    vec![atom(x, t0, 0.5), atom(x, t2, 0.5)],
                    mid,
                    avg,
                )
            });
        }
    }

    RepresentationConditions {
        phi_exp_convex: convex.verdict(tol).0,
        discount_strictly_decreasing: decreasing.verdict(&d_tol).0,
        value_strictly_increasing: increasing.verdict(&v_tol).0,
        time_slice_concave: concave.verdict(tol).0,
    }
}

fn component_tolerances(tol: &Tolerances, scale: f64) -> Tolerances {
    let scale = scale.max(f64::MIN_POSITIVE);
    Tolerances {
        eq_tol: EQ_TOL_SCALE * scale,
        strict_margin: STRICT_MARGIN_SCALE * scale,
        ..*tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottery::Domain;
    use crate::models::{CurvatureSpec, DiscountSpec, Model, ValueSpec};

    fn tol_for(m: &Model) -> Tolerances {
        m.default_tolerances()
    }

    #[test]
    fn curved_power_passes_all_four() {
        let m = Model::multiplicative_eu(
            CurvatureSpec::NegNegLogPow { b: 0.6 },
            DiscountSpec::PowerExponent { d: 0.9, a: 2.0 },
            ValueSpec::BoundedRatio { c: 1.0 },
            Domain::new(0.1, 10.0, 0.1, 5.0).unwrap(),
        )
        .unwrap();
        let tol = tol_for(&m);
        let r = check_representation_conditions(m.as_multiplicative_eu().unwrap(), &tol);
        assert!(r.phi_exp_convex.holds(), "{:?}", r.phi_exp_convex.label());
        assert!(r.discount_strictly_decreasing.is_strict());
        assert!(r.value_strictly_increasing.is_strict());
        assert!(
            r.time_slice_concave.holds(),
            "{:?}",
            r.time_slice_concave.label()
        );
        assert!(r.all_hold());
    }

    #[test]
    fn edu_fails_only_time_concavity() {
        let m = Model::multiplicative_eu(
            CurvatureSpec::Identity,
            DiscountSpec::Exponential { beta: 0.9 },
            ValueSpec::Identity,
            Domain::new(1.0, 100.0, 0.0, 10.0).unwrap(),
        )
        .unwrap();
        let tol = tol_for(&m);
        let r = check_representation_conditions(m.as_multiplicative_eu().unwrap(), &tol);
        assert!(r.phi_exp_convex.holds());
        assert!(r.discount_strictly_decreasing.is_strict());
        assert!(r.value_strictly_increasing.is_strict());
        assert!(r.time_slice_concave.is_violated(), "beta^t is convex in t");
        assert!(!r.all_hold());
    }

    #[test]
    fn hyperbolic_discount_is_convex_in_time() {
        let m = Model::multiplicative_eu(
            CurvatureSpec::Identity,
            DiscountSpec::Hyperbolic { k: 1.0 },
            ValueSpec::Identity,
            Domain::new(1.0, 100.0, 0.0, 10.0).unwrap(),
        )
        .unwrap();
        let tol = tol_for(&m);
        let r = check_representation_conditions(m.as_multiplicative_eu().unwrap(), &tol);
        // exp is convex so (1) holds; the violation sits in (4).
        assert!(r.phi_exp_convex.holds());
        assert!(r.time_slice_concave.is_violated());
    }

    #[test]
    fn violated_condition_carries_reproducible_witness() {
        let m = Model::multiplicative_eu(
            CurvatureSpec::Identity,
            DiscountSpec::Exponential { beta: 0.9 },
            ValueSpec::Identity,
            Domain::new(1.0, 100.0, 0.0, 10.0).unwrap(),
        )
        .unwrap();
        let tol = tol_for(&m);
        let r = check_representation_conditions(m.as_multiplicative_eu().unwrap(), &tol);
        let w = r
            .time_slice_concave
            .witness()
            .expect("violated carries witness");
        // Re-evaluate both sides from the stored atoms.
        let lhs: f64 = w.lotteries[0]
            .iter()
            .map(|a| a.p * m.eval_at(a.x, a.t).unwrap())
            .sum();
        let rhs: f64 = w.lotteries[1]
            .iter()
            .map(|a| a.p * m.eval_at(a.x, a.t).unwrap())
            .sum();
        assert!((lhs - w.lhs).abs() <= 1e-12 * w.lhs.abs().max(1.0));
        assert!((rhs - w.rhs).abs() <= 1e-12 * w.rhs.abs().max(1.0));
    }
}
