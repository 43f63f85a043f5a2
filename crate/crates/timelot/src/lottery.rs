//! Domain primitives: dated prizes, simple lotteries over them, and the
//! compact window all checks run on.
//!
//! A lottery is a finite-support distribution over (prize, delivery time)
//! pairs. Construction canonicalizes: coordinates are rounded to 12
//! significant digits, duplicate outcomes are merged, atoms are sorted by
//! (time, prize), and the probability sum is checked — never silently
//! renormalized.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability mass must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Round to 12 significant decimal digits. Outcome equality is exact float
/// equality after this rounding, which makes canonicalization idempotent.
pub(crate) fn canonical12(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let exp = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - exp);
    (v * scale).round() / scale
}

/// Closed prize window X = [x_lo, x_hi] with x_lo > 0 and closed time window
/// T = [t_lo, t_hi] with t_lo >= 0. All audits are certifications on this
/// compact window; x_lo > 0 keeps logarithms of values well defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct Domain {
    x_lo: f64,
    x_hi: f64,
    t_lo: f64,
    t_hi: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainRepr {
    x: [f64; 2],
    t: [f64; 2],
}

impl TryFrom<DomainRepr> for Domain {
    type Error = Error;

    fn try_from(r: DomainRepr) -> Result<Self> {
        Domain::new(r.x[0], r.x[1], r.t[0], r.t[1])
    }
}

impl From<Domain> for DomainRepr {
    fn from(d: Domain) -> Self {
        DomainRepr {
            x: [d.x_lo, d.x_hi],
            t: [d.t_lo, d.t_hi],
        }
    }
}

impl Domain {
    pub fn new(x_lo: f64, x_hi: f64, t_lo: f64, t_hi: f64) -> Result<Self> {
        for v in [x_lo, x_hi, t_lo, t_hi] {
            if !v.is_finite() {
                return Err(Error::invalid("domain bounds must be finite"));
            }
        }
        if x_lo <= 0.0 {
            return Err(Error::invalid("x_lo must be strictly positive"));
        }
        if x_lo >= x_hi {
            return Err(Error::invalid(
                "prize interval must be nondegenerate (x_lo < x_hi)",
            ));
        }
        if t_lo < 0.0 {
            return Err(Error::invalid("t_lo must be nonnegative"));
        }
        if t_lo >= t_hi {
            return Err(Error::invalid(
                "time interval must be nondegenerate (t_lo < t_hi)",
            ));
        }
        Ok(Domain {
            x_lo,
            x_hi,
            t_lo,
            t_hi,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn t_lo(&self) -> f64 {
        self.t_lo
    }

    pub fn t_hi(&self) -> f64 {
        self.t_hi
    }

    pub fn x_len(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn t_len(&self) -> f64 {
        self.t_hi - self.t_lo
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        x.is_finite()
            && t.is_finite()
            && x >= self.x_lo
            && x <= self.x_hi
            && t >= self.t_lo
            && t <= self.t_hi
    }

    /// Equally spaced grid points on the prize axis, endpoints included.
    pub fn x_grid(&self, n: usize) -> Vec<f64> {
        linspace(self.x_lo, self.x_hi, n)
    }

    /// Equally spaced grid points on the time axis, endpoints included.
    pub fn t_grid(&self, n: usize) -> Vec<f64> {
        linspace(self.t_lo, self.t_hi, n)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X=[{}, {}] x T=[{}, {}]",
            self.x_lo, self.x_hi, self.t_lo, self.t_hi
        )
    }
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    let mut pts: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    // Pin the last point so the endpoint is exact.
    pts[n - 1] = hi;
    pts
}

/// A dated prize: `x` units of money delivered at time `t`. Coordinates are
/// stored in canonical (12 significant digit) form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub x: f64,
    pub t: f64,
}

impl Outcome {
    pub fn new(x: f64, t: f64, domain: &Domain) -> Result<Self> {
        let xc = canonical12(x);
        let tc = canonical12(t);
        if !domain.contains(xc, tc) {
            return Err(Error::OutOfDomain {
                x: xc,
                t: tc,
                domain: domain.to_string(),
            });
        }
        Ok(Outcome { x: xc, t: tc })
    }
}

/// A simple (finite-support) lottery over outcomes of one domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Lottery {
    domain: Domain,
    atoms: Vec<(Outcome, f64)>,
}

impl Lottery {
    /// Build a lottery from `(x, t, prob)` entries. Duplicate outcomes are
    /// merged, atoms end up sorted by (t, x), and the probability sum is
    /// checked against one — a wrong sum is an input bug, not something to
    /// fix silently.
    pub fn new(domain: Domain, entries: &[(f64, f64, f64)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut atoms = Vec::with_capacity(entries.len());
        for &(x, t, p) in entries {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::invalid(format!(
                    "atom probability must be strictly positive, got {p}"
                )));
            }
            atoms.push((Outcome::new(x, t, &domain)?, p));
        }
        Self::from_atoms(domain, atoms)
    }

    /// The lottery that pays `x` at time `t` for sure.
    pub fn degenerate(domain: Domain, x: f64, t: f64) -> Result<Self> {
        Self::new(domain, &[(x, t, 1.0)])
    }

    fn from_atoms(domain: Domain, mut atoms: Vec<(Outcome, f64)>) -> Result<Self> {
        atoms.sort_by(|a, b| {
            a.0.t
                .total_cmp(&b.0.t)
                .then_with(|| a.0.x.total_cmp(&b.0.x))
        });
        let mut merged: Vec<(Outcome, f64)> = Vec::with_capacity(atoms.len());
        for (o, p) in atoms {
            match merged.last_mut() {
                Some((last, lp)) if *last == o => *lp += p,
                _ => merged.push((o, p)),
            }
        }
        let sum: f64 = merged.iter().map(|(_, p)| p).sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(Lottery {
            domain,
            atoms: merged,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn atoms(&self) -> &[(Outcome, f64)] {
        &self.atoms
    }

    pub fn entries(&self) -> Vec<(f64, f64, f64)> {
        self.atoms.iter().map(|(o, p)| (o.x, o.t, *p)).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.atoms.len() == 1
    }

    /// λ·self + (1−λ)·other, atomwise. Zero-probability atoms are dropped.
    pub fn mix(&self, other: &Lottery, lambda: f64) -> Result<Lottery> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::invalid(format!(
                "mixture weight must lie in [0, 1], got {lambda}"
            )));
        }
        let mut atoms = Vec::with_capacity(self.atoms.len() + other.atoms.len());
        for &(o, p) in &self.atoms {
            let w = lambda * p;
            if w > 0.0 {
                atoms.push((o, w));
            }
        }
        for &(o, p) in &other.atoms {
            let w = (1.0 - lambda) * p;
            if w > 0.0 {
                atoms.push((o, w));
            }
        }
        Self::from_atoms(self.domain, atoms)
    }

    /// True when every atom pays the same prize.
    pub fn is_time_lottery(&self) -> bool {
        self.atoms.windows(2).all(|w| w[0].0.x == w[1].0.x)
    }

    /// Expected arrival time of a time lottery.
    pub fn expected_time(&self) -> Result<f64> {
        if !self.is_time_lottery() {
            return Err(Error::NotATimeLottery);
        }
        Ok(self.atoms.iter().map(|(o, p)| o.t * p).sum())
    }

    /// The common prize of a time lottery.
    pub fn prize(&self) -> Result<f64> {
        if !self.is_time_lottery() {
            return Err(Error::NotATimeLottery);
        }
        Ok(self.atoms[0].0.x)
    }
}
