//! Model and lottery file formats, plus CSV flatteners for reports.
//!
//! JSON is the canonical format. Parsing is strict: unknown keys are errors,
//! never silently ignored, and every constraint violation names the offending
//! parameter (e.g. "beta must lie in (0, 1)").

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::experiments::{GlbuTradeoffRow, IncompatibilityTrace, RegionMap};
use crate::lottery::{Domain, Lottery};
use crate::models::{CurvatureSpec, DiscountSpec, ExpGain, Model, ReferenceRule, ValueSpec};

/// Read and validate a model file.
pub fn parse_model_file(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    parse_model_json(&text)
}

pub fn parse_model_json(text: &str) -> Result<Model> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("invalid JSON: {e}")))?;
    model_from_value(&value)
}

/// Read a lottery file and canonicalize it against `domain`.
pub fn parse_lottery_file(path: &Path, domain: &Domain) -> Result<Lottery> {
    let text = std::fs::read_to_string(path)?;
    parse_lottery_json(&text, domain)
}

pub fn parse_lottery_json(text: &str, domain: &Domain) -> Result<Lottery> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::parse(format!("invalid JSON: {e}")))?;
    let mut obj = Obj::new(&value, "lottery")?;
    let atoms_value = obj.take("atoms")?;
    obj.finish()?;
    let list = atoms_value
        .as_array()
        .ok_or_else(|| Error::parse("lottery: `atoms` must be an array"))?;
    let mut entries = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let mut atom = Obj::new(item, "lottery atom")?;
        let x = atom.take_f64("x")?;
        let t = atom.take_f64("t")?;
        let p = atom.take_f64("p")?;
        atom.finish()
            .map_err(|e| Error::parse(format!("atom {i}: {e}")))?;
        entries.push((x, t, p));
    }
    Lottery::new(*domain, &entries)
}

/// Strict-dispatch model parser; also backs `Model`'s `Deserialize` impl.
pub(crate) fn model_from_value(value: &Value) -> Result<Model> {
    let mut obj = Obj::new(value, "model")?;
    let family = obj.take_str("family")?;
    match family.as_str() {
        "multiplicative_eu" => {
            let phi = curvature_from_value(&obj.take("phi")?)?;
            let discount = discount_from_value(&obj.take("discount")?)?;
            let val = value_spec_from_value(&obj.take("value")?)?;
            let domain = domain_from_value(&obj.take("domain")?)?;
            obj.finish()?;
            Model::multiplicative_eu(phi, discount, val, domain)
        }
        "glbu" => {
            let pi_half = obj.take_f64("pi_half")?;
            let discount = discount_from_value(&obj.take("discount")?)?;
            let val = value_spec_from_value(&obj.take("value")?)?;
            let domain = domain_from_value(&obj.take("domain")?)?;
            obj.finish()?;
            Model::glbu(discount, val, pi_half, domain)
        }
        "disappointment" => {
            let discount = discount_from_value(&obj.take("discount")?)?;
            let val = value_spec_from_value(&obj.take("value")?)?;
            let gain_value = obj.take("gain")?;
            let mut gain_obj = Obj::new(&gain_value, "gain")?;
            let gain = ExpGain {
                lambda: gain_obj.take_f64("lambda")?,
                kappa: gain_obj.take_f64("kappa")?,
            };
            gain_obj.finish()?;
            // The reference rule defaults to the lottery's own mean utility.
            let reference = match obj.take_opt("reference") {
                Some(v) => reference_from_value(&v)?,
                None => ReferenceRule::MeanOfLottery,
            };
            let domain = domain_from_value(&obj.take("domain")?)?;
            obj.finish()?;
            Model::disappointment(discount, val, gain, reference, domain)
        }
        other => Err(Error::parse(format!(
            "unknown model family `{other}` (expected multiplicative_eu, glbu, or disappointment)"
        ))),
    }
}

fn curvature_from_value(value: &Value) -> Result<CurvatureSpec> {
    let mut obj = Obj::new(value, "phi")?;
    let kind = obj.take_str("kind")?;
    let spec = match kind.as_str() {
        "identity" => CurvatureSpec::Identity,
        "power" => CurvatureSpec::Power {
            gamma: obj.take_f64("gamma")?,
        },
        "neg_neglog_pow" => CurvatureSpec::NegNegLogPow {
            b: obj.take_f64("b")?,
        },
        "log_shifted" => CurvatureSpec::LogShifted {
            base: Box::new(curvature_from_value(&obj.take("base")?)?),
            scale: obj.take_f64("scale")?,
            shift: obj.take_f64("shift")?,
        },
        other => {
            return Err(Error::parse(format!(
                "unknown curvature kind `{other}` (expected identity, power, neg_neglog_pow, or log_shifted)"
            )))
        }
    };
    obj.finish()?;
    spec.validate()?;
    Ok(spec)
}

fn discount_from_value(value: &Value) -> Result<DiscountSpec> {
    let mut obj = Obj::new(value, "discount")?;
    let kind = obj.take_str("kind")?;
    let spec = match kind.as_str() {
        "exponential" => DiscountSpec::Exponential {
            beta: obj.take_f64("beta")?,
        },
        "hyperbolic" => DiscountSpec::Hyperbolic {
            k: obj.take_f64("k")?,
        },
        "generalized_quasi_hyperbolic" => DiscountSpec::GeneralizedQuasiHyperbolic {
            alpha: obj.take_f64("alpha")?,
            beta: obj.take_f64("beta")?,
        },
        "power_exponent" => DiscountSpec::PowerExponent {
            d: obj.take_f64("d")?,
            a: obj.take_f64("a")?,
        },
        "exp_cubic" => DiscountSpec::ExpCubic,
        "log_affine" => DiscountSpec::LogAffine {
            base: Box::new(discount_from_value(&obj.take("base")?)?),
            scale: obj.take_f64("scale")?,
            shift: obj.take_f64("shift")?,
        },
        other => {
            return Err(Error::parse(format!(
                "unknown discount kind `{other}` (expected exponential, hyperbolic, generalized_quasi_hyperbolic, power_exponent, exp_cubic, or log_affine)"
            )))
        }
    };
    obj.finish()?;
    spec.validate()?;
    Ok(spec)
}

fn value_spec_from_value(value: &Value) -> Result<ValueSpec> {
    let mut obj = Obj::new(value, "value")?;
    let kind = obj.take_str("kind")?;
    let spec = match kind.as_str() {
        "identity" => ValueSpec::Identity,
        "power" => ValueSpec::Power {
            gamma: obj.take_f64("gamma")?,
        },
        "bounded_ratio" => ValueSpec::BoundedRatio {
            c: obj.take_f64("c")?,
        },
        "log_affine" => ValueSpec::LogAffine {
            base: Box::new(value_spec_from_value(&obj.take("base")?)?),
            scale: obj.take_f64("scale")?,
            shift: obj.take_f64("shift")?,
        },
        other => return Err(Error::parse(format!(
            "unknown value kind `{other}` (expected identity, power, bounded_ratio, or log_affine)"
        ))),
    };
    obj.finish()?;
    spec.validate()?;
    Ok(spec)
}

fn reference_from_value(value: &Value) -> Result<ReferenceRule> {
    let mut obj = Obj::new(value, "reference")?;
    let kind = obj.take_str("kind")?;
    let rule = match kind.as_str() {
        "mean_of_lottery" => ReferenceRule::MeanOfLottery,
        "constant" => ReferenceRule::Constant {
            u_bar: obj.take_f64("u_bar")?,
        },
        other => {
            return Err(Error::parse(format!(
                "unknown reference kind `{other}` (expected mean_of_lottery or constant)"
            )))
        }
    };
    obj.finish()?;
    rule.validate()?;
    Ok(rule)
}

fn domain_from_value(value: &Value) -> Result<Domain> {
    let mut obj = Obj::new(value, "domain")?;
    let x = obj.take_pair("x")?;
    let t = obj.take_pair("t")?;
    obj.finish()?;
    Domain::new(x[0], x[1], t[0], t[1])
}

/// Object reader that consumes keys and rejects leftovers.
struct Obj {
    ctx: &'static str,
    map: Map<String, Value>,
}

impl Obj {
    fn new(value: &Value, ctx: &'static str) -> Result<Self> {
        match value.as_object() {
            Some(map) => Ok(Obj {
                ctx,
                map: map.clone(),
            }),
            None => Err(Error::parse(format!("{ctx}: expected a JSON object"))),
        }
    }

    fn take(&mut self, key: &str) -> Result<Value> {
        self.map
            .remove(key)
            .ok_or_else(|| Error::parse(format!("{}: missing field `{key}`", self.ctx)))
    }

    fn take_opt(&mut self, key: &str) -> Option<Value> {
        self.map.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<f64> {
        let v = self.take(key)?;
        v.as_f64()
            .ok_or_else(|| Error::parse(format!("{}: field `{key}` must be a number", self.ctx)))
    }

    fn take_str(&mut self, key: &str) -> Result<String> {
        let v = self.take(key)?;
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| Error::parse(format!("{}: field `{key}` must be a string", self.ctx)))
    }

    fn take_pair(&mut self, key: &str) -> Result<[f64; 2]> {
        let v = self.take(key)?;
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            Error::parse(format!(
                "{}: field `{key}` must be a two-element array",
                self.ctx
            ))
        })?;
        let lo = arr[0].as_f64();
        let hi = arr[1].as_f64();
        match (lo, hi) {
            (Some(lo), Some(hi)) => Ok([lo, hi]),
            _ => Err(Error::parse(format!(
                "{}: field `{key}` must contain numbers",
                self.ctx
            ))),
        }
    }

    fn finish(self) -> Result<()> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.map.keys().map(String::as_str).collect();
            Err(Error::parse(format!(
                "{}: unknown keys: {}",
                self.ctx,
                keys.join(", ")
            )))
        }
    }
}

/// CSV summary of an audit report: one row per axiom.
pub fn audit_report_to_csv(report: &crate::axioms::AuditReport) -> String {
    let mut out = String::from(
        "axiom,verdict,min_margin,strict_instances,weak_instances,violated_instances,skipped,witness_lhs,witness_rhs\n",
    );
    for (axiom, verdict) in &report.verdicts {
        let counts = report.counts.get(axiom).copied().unwrap_or_default();
        let min_margin = match verdict {
            crate::verdict::Verdict::HoldsStrictly { min_margin } => min_margin.to_string(),
            _ => String::new(),
        };
        let (wl, wr) = match verdict.witness() {
            Some(w) => (w.lhs.to_string(), w.rhs.to_string()),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            axiom,
            verdict.label(),
            min_margin,
            counts.strict,
            counts.weak,
            counts.violated,
            counts.skipped,
            wl,
            wr
        ));
    }
    out
}

/// Plot-ready CSV of a region scan: one row per cell.
pub fn region_map_to_csv(map: &RegionMap) -> String {
    let mut out = String::from(
        "a,b,valid,audited,outside_guarantee,strict_si,strict_ratl,si_refuted,ratl_refuted\n",
    );
    for cell in &map.cells {
        let flag = |v: Option<bool>| match v {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            cell.a,
            cell.b,
            cell.in_guarantee,
            cell.audited(),
            cell.outside_guarantee(),
            flag(cell.strict_si),
            flag(cell.strict_ratl),
            flag(cell.si_refuted),
            flag(cell.ratl_refuted),
        ));
    }
    out
}

/// Plot-ready CSV of a local weak-RSTL trace: one row per τ.
pub fn trace_to_csv(trace: &IncompatibilityTrace) -> String {
    let mut out = String::from(
        "tau,y,binary_value,mid_wci_value,mid_si_value,degenerate_value,final_margin,chain_consistent\n",
    );
    for row in &trace.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.tau,
            row.y,
            row.binary_value,
            row.mid_wci_value,
            row.mid_si_value,
            row.degenerate_value,
            row.final_margin(),
            row.chain_consistent(),
        ));
    }
    out
}

/// CSV of the bilinear-weight sweep: one row per π.
pub fn tradeoff_to_csv(rows: &[GlbuTradeoffRow]) -> String {
    let mut out =
        String::from("pi,stochastic_impatience,weak_ratl_strict_instances,no_future_bias\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.pi,
            row.stochastic_impatience.label(),
            row.weak_ratl_strict_instances,
            row.no_future_bias.label(),
        ));
    }
    out
}
