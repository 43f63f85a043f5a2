//! One-dimensional monotone solvers: indifference prizes, the local radius
//! inside which they exist, and time certainty equivalents.
//!
//! Everything here is plain bisection. Evaluation is cheap and monotone along
//! the relevant axis (outcome monotonicity in prizes, impatience in time), so
//! bisection gives guaranteed brackets with no derivative plumbing. Every
//! returned solution re-evaluates to its target within `eq_tol` — the
//! certificate is checked before returning, independent of the search path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::models::Model;
use crate::verdict::Tolerances;

pub const DEFAULT_MAX_ITER: usize = 200;

/// Solver knobs: interval tolerance on the search axis, certificate tolerance
/// in utility units, and an iteration cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    /// Axis-units tolerance on the bracket width.
    pub bisect_tol: f64,
    /// Utility-units tolerance on the indifference residual.
    pub eq_tol: f64,
    pub max_iter: usize,
}

impl SolveSettings {
    pub fn new(bisect_tol: f64, eq_tol: f64, max_iter: usize) -> Result<Self> {
        if !(bisect_tol.is_finite() && bisect_tol > 0.0) {
            return Err(Error::invalid("bisect_tol must be finite and positive"));
        }
        if !(eq_tol.is_finite() && eq_tol > 0.0) {
            return Err(Error::invalid("eq_tol must be finite and positive"));
        }
        if max_iter < 64 {
            return Err(Error::invalid("max_iter must be at least 64"));
        }
        Ok(SolveSettings {
            bisect_tol,
            eq_tol,
            max_iter,
        })
    }

    pub fn from_tolerances(tol: &Tolerances) -> Self {
        SolveSettings {
            bisect_tol: tol.bisect_tol,
            eq_tol: tol.eq_tol,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Bisect a monotone function to `target` on [lo, hi]. `increasing` states
/// the expected direction; f(lo) and f(hi) must bracket the target.
fn bisect_monotone(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    increasing: bool,
    s: &SolveSettings,
) -> Result<f64> {
    let sign = if increasing { 1.0 } else { -1.0 };
    let f_lo = sign * (f(lo) - target);
    let f_hi = sign * (f(hi) - target);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::NonMonotoneEvaluation(format!(
            "no bracket on [{lo}, {hi}]: f(lo)-target={}, f(hi)-target={}",
            sign * f_lo,
            sign * f_hi
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..s.max_iter {
        let next = 0.5 * (lo + hi);
        if next == lo || next == hi {
            // Bracket collapsed to adjacent floats; nothing left to split.
            break;
        }
        mid = next;
        let fm = sign * (f(mid) - target);
        if (hi - lo) <= s.bisect_tol && fm.abs() <= s.eq_tol {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = (f(mid) - target).abs();
    if residual <= s.eq_tol {
        Ok(mid)
    } else {
        Err(Error::MaxIterExceeded {
            max_iter: s.max_iter,
            residual,
            eq_tol: s.eq_tol,
        })
    }
}

/// Find y < x with δ_(y, t−τ) ∼ δ_(x, t), by bisection on the prize axis.
///
/// Returns `None` when even the worst prize delivered at t−τ is strictly
/// preferred to δ_(x,t) — then τ exceeds the radius inside which an
/// indifference prize exists (see `local_radius`).
pub fn find_indifferent_prize(
    m: &Model,
    x: f64,
    t: f64,
    tau: f64,
    s: &SolveSettings,
) -> Result<Option<f64>> {
    let domain = *m.domain();
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid("tau must be positive"));
    }
    let earlier = t - tau;
    if earlier < domain.t_lo() || !domain.contains(x, t) {
        return Err(Error::OutOfDomain {
            x,
            t: earlier,
            domain: domain.to_string(),
        });
    }
    let target = m.eval_at(x, t)?;
    let at_earlier = |y: f64| m.value_at(y, earlier);
    if at_earlier(domain.x_lo()) > target {
        // Worst prize still wins at the earlier date: out of reach.
        return Ok(None);
    }
    if at_earlier(x) < target {
        return Err(Error::NonMonotoneEvaluation(format!(
            "impatience violated: moving ({x}, {t}) earlier lowered its value"
        )));
    }
    let y = bisect_monotone(at_earlier, domain.x_lo(), x, target, true, s)?;
    Ok(Some(y.min(x)))
}

/// Radius s > 0 such that for every τ ∈ (0, s) an indifference prize
/// y < x with δ_(y, t−τ) ∼ δ_(x, t) exists.
///
/// Case split on whether the worst prize w = x_lo can ever match δ_(x,t):
/// if V(δ_(w, t_lo)) ≥ V(δ_(x,t)) there is a time d with δ_(w,d) ∼ δ_(x,t)
/// and s = t − d; otherwise the worst prize always loses and s = t − t_lo.
pub fn local_radius(m: &Model, x: f64, t: f64, s: &SolveSettings) -> Result<f64> {
    let domain = *m.domain();
    if !domain.contains(x, t) || t <= domain.t_lo() || t >= domain.t_hi() {
        return Err(Error::OutOfDomain {
            x,
            t,
            domain: domain.to_string(),
        });
    }
    let target = m.eval_at(x, t)?;
    let w = domain.x_lo();
    let worst_at_earliest = m.value_at(w, domain.t_lo());
    if worst_at_earliest >= target {
        // Case 1: δ_(w, ·) crosses the target somewhere in [t_lo, t].
        let d = bisect_monotone(|c| m.value_at(w, c), domain.t_lo(), t, target, false, s)?;
        Ok(t - d)
    } else {
        // Case 2: the worst prize always loses; the radius runs to the
        // domain edge.
        Ok(t - domain.t_lo())
    }
}

/// The fixed delivery time t* whose degenerate lottery is indifferent to the
/// time lottery `p`: |V(δ_(x, t*)) − V(p)| ≤ eq_tol. The sign of t* − t̄_p
/// classifies the instance (t* < t̄: risk seeking, t* > t̄: risk averse).
pub fn time_certainty_equivalent(m: &Model, p: &Lottery, s: &SolveSettings) -> Result<f64> {
    let x = p.prize()?; // errors with NotATimeLottery on mixed prizes
    let target = m.eval_lottery(p)?;
    let domain = *m.domain();
    let at = |t: f64| m.value_at(x, t);
    if target > at(domain.t_lo()) + s.eq_tol || target < at(domain.t_hi()) - s.eq_tol {
        return Err(Error::Unbracketed);
    }
    if p.is_degenerate() {
        return Ok(p.atoms()[0].0.t);
    }
    let lo = domain.t_lo();
    let hi = domain.t_hi();
    // Clamp the target into the achievable range before bisecting; the
    // tolerance guard above bounds how far outside it can sit.
    let target = target.min(at(lo)).max(at(hi));
    bisect_monotone(at, lo, hi, target, false, s)
}
