//! Property tests for the lottery algebra and evaluation invariants.

use proptest::prelude::*;

use timelot::models::{CurvatureSpec, DiscountSpec, Model, ValueSpec};
use timelot::{Domain, Lottery};

fn dom() -> Domain {
    Domain::new(1.0, 100.0, 0.0, 10.0).unwrap()
}

fn entry() -> impl Strategy<Value = (f64, f64, f64)> {
    (1.0..100.0f64, 0.0..10.0f64, 0.05..1.0f64)
}

/// Entries with weights normalized to sum to one.
fn lottery() -> impl Strategy<Value = Lottery> {
    prop::collection::vec(entry(), 1..6).prop_map(|raw| {
        let total: f64 = raw.iter().map(|(_, _, w)| w).sum();
        let entries: Vec<(f64, f64, f64)> =
            raw.iter().map(|&(x, t, w)| (x, t, w / total)).collect();
        Lottery::new(dom(), &entries).expect("normalized entries are valid")
    })
}

fn edu() -> Model {
    Model::multiplicative_eu(
        CurvatureSpec::Identity,
        DiscountSpec::Exponential { beta: 0.9 },
        ValueSpec::Identity,
        dom(),
    )
    .unwrap()
}

fn atoms_close(p: &Lottery, q: &Lottery, tol: f64) -> bool {
    p.atoms().len() == q.atoms().len()
        && p.atoms()
            .iter()
            .zip(q.atoms())
            .all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() <= tol)
}

proptest! {
    /// Rebuilding a lottery from its own atoms reproduces it bit-exactly.
    #[test]
    fn canonicalization_is_idempotent(p in lottery()) {
        let again = Lottery::new(dom(), &p.entries()).unwrap();
        prop_assert_eq!(p, again);
    }

    /// Mixture weights compose: ⅔(½p+½q)+⅓r and ⅓p+⅔(½q+½r) are the same
    /// atom map.
    #[test]
    fn mix_is_associative_in_weight(p in lottery(), q in lottery(), r in lottery()) {
        let left = p.mix(&q, 0.5).unwrap().mix(&r, 2.0 / 3.0).unwrap();
        let right = p.mix(&q.mix(&r, 0.5).unwrap(), 1.0 / 3.0).unwrap();
        prop_assert!(atoms_close(&left, &right, 1e-12));
    }

    /// Expected arrival time is linear in the mixture weight for time
    /// lotteries on a common prize.
    #[test]
    fn expected_time_is_linear_under_mixing(
        ts1 in prop::collection::vec(0.0..10.0f64, 1..4),
        ts2 in prop::collection::vec(0.0..10.0f64, 1..4),
        lambda in 0.0..1.0f64,
    ) {
        let uniform = |ts: &[f64]| {
            let w = 1.0 / ts.len() as f64;
            let entries: Vec<(f64, f64, f64)> = ts.iter().map(|&t| (50.0, t, w)).collect();
            Lottery::new(dom(), &entries).unwrap()
        };
        let p = uniform(&ts1);
        let q = uniform(&ts2);
        let mixed = p.mix(&q, lambda).unwrap();
        let want = lambda * p.expected_time().unwrap() + (1.0 - lambda) * q.expected_time().unwrap();
        prop_assert!((mixed.expected_time().unwrap() - want).abs() <= 1e-12 * want.abs().max(1.0));
    }

    /// Expected utility is linear under mixing (independence at the value
    /// level), whatever the curvature components.
    #[test]
    fn eu_value_is_linear_under_mixing(
        p in lottery(),
        q in lottery(),
        lambda in 0.0..1.0f64,
        which in 0usize..3,
    ) {
        let m = match which {
            0 => edu(),
            1 => Model::multiplicative_eu(
                CurvatureSpec::Power { gamma: 0.7 },
                DiscountSpec::Hyperbolic { k: 1.0 },
                ValueSpec::BoundedRatio { c: 1.0 },
                dom(),
            )
            .unwrap(),
            _ => Model::multiplicative_eu(
                CurvatureSpec::Power { gamma: 1.4 },
                DiscountSpec::GeneralizedQuasiHyperbolic { alpha: 0.5, beta: 1.5 },
                ValueSpec::Power { gamma: 0.8 },
                dom(),
            )
            .unwrap(),
        };
        let mixed = p.mix(&q, lambda).unwrap();
        let lhs = m.eval_lottery(&mixed).unwrap();
        let rhs = lambda * m.eval_lottery(&p).unwrap()
            + (1.0 - lambda) * m.eval_lottery(&q).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    /// The bilinear aggregator cannot depend on atom order.
    #[test]
    fn glbu_binary_is_symmetric(
        x1 in 1.0..100.0f64, t1 in 0.0..10.0f64,
        x2 in 1.0..100.0f64, t2 in 0.0..10.0f64,
        pi in 0.05..0.95f64,
    ) {
        let m = Model::glbu(
            DiscountSpec::Exponential { beta: 0.9 },
            ValueSpec::Identity,
            pi,
            dom(),
        )
        .unwrap();
        let p = Lottery::new(dom(), &[(x1, t1, 0.5), (x2, t2, 0.5)]).unwrap();
        let q = Lottery::new(dom(), &[(x2, t2, 0.5), (x1, t1, 0.5)]).unwrap();
        prop_assert_eq!(
            m.eval_lottery(&p).unwrap().to_bits(),
            m.eval_lottery(&q).unwrap().to_bits()
        );
    }

    /// Additive and multiplicative forms agree pointwise.
    #[test]
    fn additive_form_agrees_pointwise(x in 1.0..100.0f64, t in 0.0..10.0f64) {
        let m = edu();
        let eu = m.as_multiplicative_eu().unwrap();
        let add = eu.to_additive().unwrap();
        let direct = eu.u(x, t);
        prop_assert!((add.u(x, t) - direct).abs() <= 1e-12 * direct.abs().max(1e-12));
    }

    /// A valid representation transform never flips a pairwise ranking.
    #[test]
    fn transform_preserves_rankings(p in lottery(), q in lottery(), scale in 0.5..3.0f64) {
        let m = edu();
        let eu = m.as_multiplicative_eu().unwrap();
        let transformed = Model::MultiplicativeEu(eu.transform(scale, 0.2, -0.1).unwrap());
        let eq_tol = m.default_tolerances().eq_tol;
        let d1 = m.eval_lottery(&p).unwrap() - m.eval_lottery(&q).unwrap();
        let d2 = transformed.eval_lottery(&p).unwrap() - transformed.eval_lottery(&q).unwrap();
        if d1.abs() > eq_tol && d2.abs() > eq_tol {
            prop_assert_eq!(d1 > 0.0, d2 > 0.0);
        }
    }
}
