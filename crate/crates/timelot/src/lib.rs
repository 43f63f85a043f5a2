//! timelot — evaluate and numerically audit models of intertemporal choice
//! under risk.
//!
//! A lottery here pays money at a random date; a *time lottery* fixes the
//! prize and randomizes only the delivery time. The crate implements a
//! catalog of choice models over such lotteries — multiplicative expected
//! utility V(p) = E_p[φ(D(t)·v(x))], a local bilinear aggregator over
//! half-half binaries, and a disappointment model — and certifies or refutes
//! behavioral axioms on them: outcome monotonicity, impatience, stochastic
//! impatience, risk attitude over time lotteries (both the midpoint and the
//! general Jensen form), future bias, weak certainty independence, and
//! double cancellation.
//!
//! Every verdict is a grid- or sample-resolution statement — "no violation
//! found" or "violation with reproducible witness" — never a continuum
//! claim. All randomness is seeded and split per check, so audits are
//! deterministic and schedule-independent.
//!
//! The `experiments` module packages the headline demonstrations: the local
//! incompatibility chain (stochastic impatience + no future bias force local
//! risk seeking over time lotteries under weak certainty independence), the
//! bilinear trade-off sweep, the curved-power parameter region scan, and the
//! representation-uniqueness invariance suite.

pub mod axioms;
pub mod error;
pub mod experiments;
pub mod files;
pub mod lottery;
pub mod models;
pub mod solvers;
pub mod verdict;

pub use error::{Error, Result};
pub use lottery::{Domain, Lottery, Outcome};
pub use models::{
    AdditiveForm, CurvatureSpec, DiscountSpec, ExpGain, Model, MultiplicativeEu, ReferenceRule,
    ValueSpec,
};
pub use verdict::{Tolerances, Verdict, Witness};
