//! Headline demonstrations: the local weak-RSTL incompatibility chain,
//! the bilinear-weight trade-off sweep, the curved-power parameter region
//! scan, and the representation-uniqueness invariance suite.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::{
    check_future_bias, check_ratl, check_stochastic_impatience, check_wci, sample_lottery,
    stream_rng, uniform_in, FutureBiasMode, RatlMode, SiMode, STREAM_DEMO_POINTS,
    STREAM_INVARIANCE,
};
use crate::error::{Error, Result};
use crate::lottery::{linspace, Domain, Lottery};

/// The 19-point sweep π ∈ {0.05, 0.10, …, 0.95}.
pub fn default_pi_grid() -> Vec<f64> {
    linspace(0.05, 0.95, 19)
}
use crate::models::{CurvatureSpec, DiscountSpec, Model, MultiplicativeEu, ValueSpec};
use crate::verdict::{atom, Tolerances, Verdict, Witness};

/// Hypothesis verdicts recorded alongside a local weak-RSTL trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSnapshot {
    pub wci: Verdict,
    pub stochastic_impatience: Verdict,
    pub no_future_bias: Verdict,
}

/// One τ row of the incompatibility chain at a fixed interior (x, t):
///
///   binary  = V(½δ_(x,t−τ) + ½δ_(x,t+τ))
///   mid_wci = V(½δ_(y,t)   + ½δ_(x,t−τ))   (no-future-bias step, mixed by WCI)
///   mid_si  = V(½δ_(x,t)   + ½δ_(y,t−τ))   (stochastic-impatience step)
///   degen   = V(δ_(x,t))                   (recombined via δ_(y,t−τ) ∼ δ_(x,t))
///
/// and the chain binary ≥ mid_wci ≥ mid_si ≈ degen forces the final
/// inequality binary ≥ degen − eq_tol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub tau: f64,
    pub y: f64,
    pub binary_value: f64,
    pub mid_wci_value: f64,
    pub mid_si_value: f64,
    pub degenerate_value: f64,
    /// |V(δ_(y,t−τ)) − V(δ_(x,t))|, the solver's indifference residual.
    pub indifference_residual: f64,
}

impl TauRow {
    pub fn step_wci_margin(&self) -> f64 {
        self.binary_value - self.mid_wci_value
    }

    pub fn step_si_margin(&self) -> f64 {
        self.mid_wci_value - self.mid_si_value
    }

    pub fn step_recombine_gap(&self) -> f64 {
        self.mid_si_value - self.degenerate_value
    }

    pub fn final_margin(&self) -> f64 {
        self.binary_value - self.degenerate_value
    }

    /// The three step quantities must compose exactly into the final margin
    /// (pure arithmetic identity, checked to float precision).
    pub fn chain_consistent(&self) -> bool {
        let composed = self.step_wci_margin() + self.step_si_margin() + self.step_recombine_gap();
        let scale = self
            .binary_value
            .abs()
            .max(self.degenerate_value.abs())
            .max(1.0);
        (composed - self.final_margin()).abs() <= 1e-12 * scale
    }

    pub fn final_holds(&self, eq_tol: f64) -> bool {
        self.final_margin() >= -eq_tol
    }
}

/// Full record of one local weak-RSTL demonstration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncompatibilityTrace {
    pub x: f64,
    pub t: f64,
    /// Radius from the indifference-prize construction.
    pub radius: f64,
    /// τ values are drawn from (0, tau_cap); the cap additionally keeps
    /// t + τ inside the time window.
    pub tau_cap: f64,
    pub eq_tol: f64,
    pub hypotheses: HypothesisSnapshot,
    pub rows: Vec<TauRow>,
}

impl IncompatibilityTrace {
    pub fn all_rows_hold(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.final_holds(self.eq_tol) && r.chain_consistent())
    }
}

/// Demonstrate the local incompatibility: a model certified for WCI,
/// stochastic impatience, and no future bias must weakly prefer the
/// symmetric binary ½δ_(x,t−τ) + ½δ_(x,t+τ) to δ_(x,t) for every τ inside
/// the local radius.
///
/// The hypotheses are audited first rather than trusted; a model failing one
/// gets `HypothesisFailed` naming the axiom.
pub fn demo_local_rstl(
    m: &Model,
    x: f64,
    t: f64,
    n_tau: usize,
    tol: &Tolerances,
) -> Result<IncompatibilityTrace> {
    let wci = check_wci(m, tol);
    if !wci.verdict.holds() {
        return Err(Error::HypothesisFailed {
            axiom: "wci".into(),
        });
    }
    let si = check_stochastic_impatience(m, SiMode::FourPoint, tol)?;
    if !si.verdict.holds() {
        return Err(Error::HypothesisFailed {
            axiom: "stochastic_impatience".into(),
        });
    }
    let fb = check_future_bias(m, FutureBiasMode::SeparableLogConvexity, tol)?;
    if !fb.no_future_bias.verdict.holds() {
        return Err(Error::HypothesisFailed {
            axiom: "no_future_bias".into(),
        });
    }
    let hypotheses = HypothesisSnapshot {
        wci: wci.verdict,
        stochastic_impatience: si.verdict,
        no_future_bias: fb.no_future_bias.verdict,
    };

    let solve = crate::solvers::SolveSettings::from_tolerances(tol);
    let radius = crate::solvers::local_radius(m, x, t, &solve)?;
    let domain = *m.domain();
    let tau_cap = radius.min(domain.t_hi() - t);
    let mut rows = Vec::with_capacity(n_tau);
    for i in 1..=n_tau {
        let tau = tau_cap * i as f64 / (n_tau + 1) as f64;
        let y = crate::solvers::find_indifferent_prize(m, x, t, tau, &solve)?.ok_or_else(|| {
            Error::NonMonotoneEvaluation(format!(
                "indifference prize vanished at tau={tau} inside radius {radius}"
            ))
        })?;
        let binary = m.eval_lottery(&Lottery::new(
            domain,
            &[(x, t - tau, 0.5), (x, t + tau, 0.5)],
        )?)?;
        let mid_wci = m.eval_lottery(&Lottery::new(domain, &[(y, t, 0.5), (x, t - tau, 0.5)])?)?;
        let mid_si = m.eval_lottery(&Lottery::new(domain, &[(x, t, 0.5), (y, t - tau, 0.5)])?)?;
        let degen = m.eval_at(x, t)?;
        let residual = (m.eval_at(y, t - tau)? - degen).abs();
        rows.push(TauRow {
            tau,
            y,
            binary_value: binary,
            mid_wci_value: mid_wci,
            mid_si_value: mid_si,
            degenerate_value: degen,
            indifference_residual: residual,
        });
    }
    Ok(IncompatibilityTrace {
        x,
        t,
        radius,
        tau_cap,
        eq_tol: tol.eq_tol,
        hypotheses,
        rows,
    })
}

/// Deterministic interior sample points for running the demonstration at
/// several (x, t) locations.
pub fn demo_points(domain: &Domain, count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = stream_rng(seed, STREAM_DEMO_POINTS);
    (0..count)
        .map(|_| {
            let x = uniform_in(
                &mut rng,
                domain.x_lo() + 0.2 * domain.x_len(),
                domain.x_hi(),
            );
            let t = uniform_in(
                &mut rng,
                domain.t_lo() + 0.25 * domain.t_len(),
                domain.t_lo() + 0.75 * domain.t_len(),
            );
            (x, t)
        })
        .collect()
}

/// One row of the bilinear-weight sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlbuTradeoffRow {
    pub pi: f64,
    pub stochastic_impatience: Verdict,
    /// Midpoint triples where the degenerate strictly beats the binary.
    pub weak_ratl_strict_instances: u64,
    pub no_future_bias: Verdict,
}

impl GlbuTradeoffRow {
    /// The incompatibility: stochastic impatience holding together with a
    /// strict weak-RATL instance would contradict the bilinear trade-off.
    pub fn exhibits_conflict(&self) -> bool {
        self.stochastic_impatience.holds() && self.weak_ratl_strict_instances > 0
    }
}

/// Sweep π(½) over `pi_grid` for a bilinear model on the given base (D, v).
/// The base must rank degenerates without future bias (ln D convex), so the
/// sweep isolates the risk-weight channel.
pub fn glbu_tradeoff_demo(
    pi_grid: &[f64],
    discount: &DiscountSpec,
    value: &ValueSpec,
    domain: Domain,
    grid_n: usize,
    seed: u64,
) -> Result<Vec<GlbuTradeoffRow>> {
    let probe = Model::glbu(discount.clone(), value.clone(), 0.5, domain)?;
    let tol = probe.default_tolerances_with(grid_n, crate::verdict::DEFAULT_SAMPLE_N, seed);
    let fb = check_future_bias(&probe, FutureBiasMode::SeparableLogConvexity, &tol)?;
    if !fb.no_future_bias.verdict.holds() {
        return Err(Error::HypothesisFailed {
            axiom: "no_future_bias".into(),
        });
    }
    pi_grid
        .iter()
        .map(|&pi| {
            let m = Model::glbu(discount.clone(), value.clone(), pi, domain)?;
            let si = check_stochastic_impatience(&m, SiMode::FourPoint, &tol)?;
            let midpoint = check_ratl(&m, RatlMode::Midpoint, &tol)?;
            let fb = check_future_bias(&m, FutureBiasMode::SeparableLogConvexity, &tol)?;
            Ok(GlbuTradeoffRow {
                pi,
                stochastic_impatience: si.verdict,
                weak_ratl_strict_instances: midpoint.ratl.counts.strict,
                no_future_bias: fb.no_future_bias.verdict,
            })
        })
        .collect()
}

/// Classification of one (a, b) parameter cell.
///
/// `strict_*` is the certification flag (every instance held with at least
/// the strict margin); `*_refuted` records an actual violation. Near the
/// b → 1 edge the mixed partial tends to zero, so strict certification can
/// run out of resolution while nothing is refuted — the two flags keep
/// those outcomes apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub a: f64,
    pub b: f64,
    /// Inside the sufficient rectangle a > 1, b ∈ (1/a, 1).
    pub in_guarantee: bool,
    /// `None` when the cell's parameters are not constructible at all.
    pub strict_si: Option<bool>,
    pub strict_ratl: Option<bool>,
    pub si_refuted: Option<bool>,
    pub ratl_refuted: Option<bool>,
}

impl RegionCell {
    pub fn audited(&self) -> bool {
        self.strict_si.is_some()
    }

    /// Constructible but outside the sufficient rectangle: the audit decides
    /// empirically, with no theoretical claim attached.
    pub fn outside_guarantee(&self) -> bool {
        self.audited() && !self.in_guarantee
    }

    pub fn refuted(&self) -> bool {
        self.si_refuted == Some(true) || self.ratl_refuted == Some(true)
    }
}

/// Parameter-region scan over (a, b) at fixed d and v.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub d: f64,
    /// Row-major over (a, b): index = ai * b_values.len() + bi.
    pub cells: Vec<RegionCell>,
}

impl RegionMap {
    pub fn cell(&self, ai: usize, bi: usize) -> &RegionCell {
        &self.cells[ai * self.b_values.len() + bi]
    }

    /// No in-guarantee cell may be refuted on either check. Strict
    /// certification can still run out of resolution at the region's edge
    /// (the strict flags record where), but a refutation inside the
    /// rectangle would contradict the sufficiency claim.
    pub fn guarantee_respected(&self) -> bool {
        !self.cells.iter().any(|c| c.in_guarantee && c.refuted())
    }

    /// In-guarantee cells where both checks certified strictly.
    pub fn strictly_certified(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.in_guarantee && c.strict_si == Some(true) && c.strict_ratl == Some(true))
            .count()
    }
}

pub struct RegionScanConfig {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub d: f64,
    pub value: ValueSpec,
    pub domain: Domain,
    /// Cells per axis (cell centers are audited).
    pub cells: usize,
    /// Per-cell audit grid; smaller than the default so a full scan stays
    /// interactive.
    pub grid_n: usize,
}

impl Default for RegionScanConfig {
    fn default() -> Self {
        RegionScanConfig {
            a_range: (0.5, 4.0),
            b_range: (0.05, 0.95),
            d: 0.9,
            value: ValueSpec::BoundedRatio { c: 1.0 },
            domain: Domain::new(0.1, 10.0, 0.1, 5.0).expect("static window"),
            cells: 50,
            grid_n: 21,
        }
    }
}

/// Audit strict SI and strict weak-RATL on every constructible (a, b) cell.
/// Cells are independent and run in parallel; the aggregation is
/// order-independent.
pub fn scan_example_region(config: &RegionScanConfig) -> Result<RegionMap> {
    if !(config.d > 0.0 && config.d < 1.0) {
        return Err(Error::invalid("d must lie in (0, 1)"));
    }
    if config.cells < 1 {
        return Err(Error::invalid("cells must be positive"));
    }
    let centers = |range: (f64, f64), n: usize| -> Vec<f64> {
        let width = (range.1 - range.0) / n as f64;
        (0..n).map(|i| range.0 + width * (i as f64 + 0.5)).collect()
    };
    let a_values = centers(config.a_range, config.cells);
    let b_values = centers(config.b_range, config.cells);

    let pairs: Vec<(f64, f64)> = a_values
        .iter()
        .flat_map(|&a| b_values.iter().map(move |&b| (a, b)))
        .collect();
    let cells: Vec<RegionCell> = pairs
        .par_iter()
        .map(|&(a, b)| scan_cell(a, b, config))
        .collect();

    Ok(RegionMap {
        a_values,
        b_values,
        d: config.d,
        cells,
    })
}

fn scan_cell(a: f64, b: f64, config: &RegionScanConfig) -> RegionCell {
    let in_guarantee = a > 1.0 && b > 1.0 / a && b < 1.0;
    let model = MultiplicativeEu::new_outside_guarantee(
        CurvatureSpec::NegNegLogPow { b },
        DiscountSpec::PowerExponent { d: config.d, a },
        config.value.clone(),
        config.domain,
    );
    let Ok(eu) = model else {
        return RegionCell {
            a,
            b,
            in_guarantee,
            strict_si: None,
            strict_ratl: None,
            si_refuted: None,
            ratl_refuted: None,
        };
    };
    let m = Model::MultiplicativeEu(eu);
    let tol = m.default_tolerances_with(config.grid_n, 1, 0);
    let si = check_stochastic_impatience(&m, SiMode::FourPoint, &tol)
        .expect("four-point applies to every family");
    let midpoint = check_ratl(&m, RatlMode::Midpoint, &tol).expect("midpoint applies");
    RegionCell {
        a,
        b,
        in_guarantee,
        strict_si: Some(si.verdict.is_strict()),
        strict_ratl: Some(midpoint.ratl.verdict.is_strict()),
        si_refuted: Some(si.verdict.is_violated()),
        ratl_refuted: Some(midpoint.ratl.verdict.is_violated()),
    }
}

/// Result of a pairwise ranking-agreement run between two models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub agreed: bool,
    pub pairs_checked: usize,
    pub disagreements: usize,
    pub witness: Option<Witness>,
}

/// Compare the rankings two models induce on `n_pairs` seeded random lottery
/// pairs. A value gap within a model's own eq_tol counts as a tie for both
/// models; disagreement means both models rank strictly and in opposite
/// directions.
pub fn ranking_agreement(m1: &Model, m2: &Model, n_pairs: usize, seed: u64) -> InvarianceReport {
    let domain = *m1.domain();
    let eq1 = m1.default_tolerances().eq_tol;
    let eq2 = m2.default_tolerances().eq_tol;
    let mut rng = stream_rng(seed, STREAM_INVARIANCE);
    let mut disagreements = 0;
    let mut witness = None;
    for _ in 0..n_pairs {
        let p = sample_lottery(&mut rng, &domain);
        let q = sample_lottery(&mut rng, &domain);
        let d1 = m1.eval_lottery(&p).expect("in-domain lottery")
            - m1.eval_lottery(&q).expect("in-domain lottery");
        let d2 = m2.eval_lottery(&p).expect("in-domain lottery")
            - m2.eval_lottery(&q).expect("in-domain lottery");
        let s1 = sign_with_tie(d1, eq1);
        let s2 = sign_with_tie(d2, eq2);
        if s1 != 0 && s2 != 0 && s1 != s2 {
            disagreements += 1;
            if witness.is_none() {
                witness = Some(Witness::compared(
                    "invariance/ranking_agreement",
                    p.entries().iter().map(|&(x, t, w)| atom(x, t, w)).collect(),
                    q.entries().iter().map(|&(x, t, w)| atom(x, t, w)).collect(),
                    d1,
                    d2,
                ));
            }
        }
    }
    InvarianceReport {
        agreed: disagreements == 0,
        pairs_checked: n_pairs,
        disagreements,
        witness,
    }
}

fn sign_with_tie(delta: f64, eq_tol: f64) -> i8 {
    if delta.abs() <= eq_tol {
        0
    } else if delta > 0.0 {
        1
    } else {
        -1
    }
}

/// Representation uniqueness: the transform ln D' = a·ln D + b1,
/// ln v' = a·ln v + b2 with φ adjusted must leave every pairwise ranking
/// unchanged.
pub fn invariance_suite(
    m: &MultiplicativeEu,
    a: f64,
    b1: f64,
    b2: f64,
    n_pairs: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let transformed = m.transform(a, b1, b2)?;
    Ok(ranking_agreement(
        &Model::MultiplicativeEu(m.clone()),
        &Model::MultiplicativeEu(transformed),
        n_pairs,
        seed,
    ))
}

/// Negative control: apply the same (a, b1, b2) to D and v but leave φ
/// unadjusted. Degenerate rankings survive (the distortion is monotone) but
/// lottery rankings must not.
pub fn broken_transform(
    m: &MultiplicativeEu,
    a: f64,
    b1: f64,
    b2: f64,
) -> Result<MultiplicativeEu> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::invalid("transform scale a must be positive"));
    }
    MultiplicativeEu::new_outside_guarantee(
        m.phi().clone(),
        DiscountSpec::LogAffine {
            base: Box::new(m.discount().clone()),
            scale: a,
            shift: b1,
        }
        .simplified(),
        ValueSpec::LogAffine {
            base: Box::new(m.value().clone()),
            scale: a,
            shift: b2,
        }
        .simplified(),
        *m.domain(),
    )
}
