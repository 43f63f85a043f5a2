//! Certification vocabulary: tolerances, verdicts, witnesses, and the margin
//! accumulators the grid/sample checks are built on.
//!
//! A verdict is an epistemic statement at one grid/sample resolution, never a
//! continuum claim: `HoldsStrictly`/`HoldsWeakly` mean "no violation found at
//! this resolution", `Violated` always carries a witness that reproduces the
//! reported values under re-evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_N: usize = 41;
pub const DEFAULT_SAMPLE_N: usize = 2000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_FD_STEP_FRAC: f64 = 1e-4;

/// Scale-aware defaults: tolerances are factors of the model's utility range
/// so verdicts are invariant under rescaling money or utility units.
pub const EQ_TOL_SCALE: f64 = 1e-9;
pub const STRICT_MARGIN_SCALE: f64 = 1e-7;
pub const BISECT_TOL_SCALE: f64 = 1e-10;

/// Numerical settings shared by every check: absolute tolerances (utility or
/// axis units), grid resolution, sample count, and the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Indifference tolerance, absolute, utility units.
    pub eq_tol: f64,
    /// Minimum observed margin required to report a strict inequality.
    pub strict_margin: f64,
    /// Finite-difference step as a fraction of axis length.
    pub fd_step_frac: f64,
    /// Bisection tolerance on the prize/time axis, axis units.
    pub bisect_tol: f64,
    /// Grid points per axis.
    pub grid_n: usize,
    /// Random-sample count for sampled checks.
    pub sample_n: usize,
    /// RNG seed; per-check streams are split deterministically from it.
    pub seed: u64,
}

impl Tolerances {
    pub fn new(
        eq_tol: f64,
        strict_margin: f64,
        fd_step_frac: f64,
        bisect_tol: f64,
        grid_n: usize,
        sample_n: usize,
        seed: u64,
    ) -> Result<Self> {
        for (name, v) in [
            ("eq_tol", eq_tol),
            ("strict_margin", strict_margin),
            ("fd_step_frac", fd_step_frac),
            ("bisect_tol", bisect_tol),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and positive"
                )));
            }
        }
        if fd_step_frac >= 0.01 {
            return Err(Error::invalid("fd_step_frac must be below 0.01"));
        }
        if grid_n < 3 {
            return Err(Error::invalid("grid_n must be at least 3"));
        }
        if sample_n == 0 {
            return Err(Error::invalid("sample_n must be positive"));
        }
        Ok(Tolerances {
            eq_tol,
            strict_margin,
            fd_step_frac,
            bisect_tol,
            grid_n,
            sample_n,
            seed,
        })
    }
}

/// One atom of a witness lottery, plain data so reports stay self-contained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessAtom {
    pub x: f64,
    pub t: f64,
    pub p: f64,
}

/// The evidence behind a `Violated` verdict: the offending lotteries (or raw
/// stencil coordinates for derivative-style checks) plus both compared
/// values. `lotteries[0]`/`lotteries[1]` are the compared sides; any further
/// entries are premise context (e.g. the ranked pair behind an implication).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lotteries: Vec<Vec<WitnessAtom>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coords: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    pub fn compared(
        check: &str,
        lhs_lot: Vec<WitnessAtom>,
        rhs_lot: Vec<WitnessAtom>,
        lhs: f64,
        rhs: f64,
    ) -> Self {
        Witness {
            check: check.to_string(),
            lotteries: vec![lhs_lot, rhs_lot],
            coords: Vec::new(),
            lhs,
            rhs,
        }
    }

    pub fn with_context(mut self, context: Vec<Vec<WitnessAtom>>) -> Self {
        self.lotteries.extend(context);
        self
    }

    pub fn stencil(check: &str, coords: Vec<f64>, lhs: f64, rhs: f64) -> Self {
        Witness {
            check: check.to_string(),
            lotteries: Vec::new(),
            coords,
            lhs,
            rhs,
        }
    }
}

pub fn atom(x: f64, t: f64, p: f64) -> WitnessAtom {
    WitnessAtom { x, t, p }
}

/// Outcome of one certify-or-refute check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// Every instance held with margin at least `strict_margin`.
    HoldsStrictly {
        min_margin: f64,
    },
    /// No violation found at this resolution, but some margin fell below the
    /// strict threshold (ties, boundaries, stationary cases).
    HoldsWeakly,
    Violated {
        witness: Witness,
    },
    NotApplicable {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsStrictly { .. } | Verdict::HoldsWeakly)
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Verdict::HoldsStrictly { .. })
    }

    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Violated { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::HoldsStrictly { .. } => "holds_strictly",
            Verdict::HoldsWeakly => "holds_weakly",
            Verdict::Violated { .. } => "violated",
            Verdict::NotApplicable { .. } => "not_applicable",
        }
    }
}

/// Per-check tally of how individual grid/sample instances classified.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCounts {
    /// margin >= strict_margin
    pub strict: u64,
    /// -eq_tol <= margin < strict_margin
    pub weak: u64,
    /// margin < -eq_tol
    pub violated: u64,
    /// instances skipped (ambiguous premise, solver out of reach, ...)
    pub skipped: u64,
}

/// Accumulator for universal ("for all instances") checks. Tracks the
/// minimum margin, keeps the witness at the argmin, and tallies instances.
pub struct MarginScan {
    check: &'static str,
    min_margin: f64,
    worst: Option<Witness>,
    counts: InstanceCounts,
}

impl MarginScan {
    pub fn new(check: &'static str) -> Self {
        MarginScan {
            check,
            min_margin: f64::INFINITY,
            worst: None,
            counts: InstanceCounts::default(),
        }
    }

    pub fn check_id(&self) -> &'static str {
        self.check
    }

    pub fn skip(&mut self) {
        self.counts.skipped += 1;
    }

    /// Record one instance. `witness` is only invoked when this margin is the
    /// worst seen so far.
    pub fn record(&mut self, margin: f64, tol: &Tolerances, witness: impl FnOnce() -> Witness) {
        if margin >= tol.strict_margin {
            self.counts.strict += 1;
        } else if margin >= -tol.eq_tol {
            self.counts.weak += 1;
        } else {
            self.counts.violated += 1;
        }
        if margin < self.min_margin {
            self.min_margin = margin;
            self.worst = Some(witness());
        }
    }

    pub fn instances(&self) -> u64 {
        self.counts.strict + self.counts.weak + self.counts.violated
    }

    pub fn counts(&self) -> InstanceCounts {
        self.counts
    }

    pub fn min_margin(&self) -> f64 {
        self.min_margin
    }

    pub fn verdict(self, tol: &Tolerances) -> (Verdict, InstanceCounts) {
        let counts = self.counts;
        if self.instances() == 0 {
            return (
                Verdict::NotApplicable {
                    reason: format!("{}: no instances to evaluate", self.check),
                },
                counts,
            );
        }
        let verdict = if self.min_margin >= tol.strict_margin {
            Verdict::HoldsStrictly {
                min_margin: self.min_margin,
            }
        } else if self.min_margin >= -tol.eq_tol {
            Verdict::HoldsWeakly
        } else {
            Verdict::Violated {
                witness: self.worst.expect("violated scan retains its witness"),
            }
        };
        (verdict, counts)
    }

    /// Verdict for implication-form checks (WCI, Double Cancellation): an
    /// implication either survives sampling or is refuted, so the result is
    /// capped at `HoldsWeakly`.
    pub fn verdict_capped(self, tol: &Tolerances) -> (Verdict, InstanceCounts) {
        let (v, counts) = self.verdict(tol);
        let v = match v {
            Verdict::HoldsStrictly { .. } => Verdict::HoldsWeakly,
            other => other,
        };
        (v, counts)
    }
}

/// Accumulator for existential ("some instance exhibits the pattern") checks,
/// e.g. Future Bias. Tracks the best margin; `Violated` here means no
/// instance was found, and its witness is the closest candidate.
pub struct BestInstanceScan {
    check: &'static str,
    best_margin: f64,
    best: Option<Witness>,
    counts: InstanceCounts,
}

impl BestInstanceScan {
    pub fn new(check: &'static str) -> Self {
        BestInstanceScan {
            check,
            best_margin: f64::NEG_INFINITY,
            best: None,
            counts: InstanceCounts::default(),
        }
    }

    pub fn record(&mut self, margin: f64, tol: &Tolerances, witness: impl FnOnce() -> Witness) {
        if margin >= tol.strict_margin {
            self.counts.strict += 1;
        } else if margin >= tol.eq_tol {
            self.counts.weak += 1;
        } else {
            self.counts.violated += 1;
        }
        if margin > self.best_margin {
            self.best_margin = margin;
            self.best = Some(witness());
        }
    }

    pub fn verdict(self, tol: &Tolerances) -> (Verdict, InstanceCounts) {
        let counts = self.counts;
        if counts.strict + counts.weak + counts.violated == 0 {
            return (
                Verdict::NotApplicable {
                    reason: format!("{}: no instances to evaluate", self.check),
                },
                counts,
            );
        }
        let verdict = if self.best_margin >= tol.strict_margin {
            Verdict::HoldsStrictly {
                min_margin: self.best_margin,
            }
        } else if self.best_margin >= tol.eq_tol {
            Verdict::HoldsWeakly
        } else {
            Verdict::Violated {
                witness: self.best.expect("scan with instances retains a candidate"),
            }
        };
        (verdict, counts)
    }
}
