//! JSON shapes. Scalars are strings `a/b` or `a/b+c/d i`.

use std::collections::BTreeMap;

use fuchsforge_core::fuchs::ResonanceStructure;
use fuchsforge_core::normal_form::{ConjugacyReport, Flavor, HomologicalStep, NormalFormResult};
use fuchsforge_core::{Field, LaurentSeries, OperatorSeries, Poly, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub k: i64,
    pub poly: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub field: String,
    pub kmin: i64,
    pub trunc: i64,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub kmin: i64,
    pub trunc: i64,
    pub coeffs: Vec<String>,
}

fn scalar_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(Scalar::to_string).collect()
}

fn parse_scalar(s: &str, field: Field) -> Result<Scalar, CliError> {
    let v: Scalar = s.parse().map_err(|e| CliError::Input(format!("{e}")))?;
    if !field.contains(&v) {
        return Err(CliError::Input(format!("coefficient `{s}` is not in {}", field.name())));
    }
    Ok(v)
}

pub fn operator_to_json(l: &OperatorSeries, field: Field) -> OperatorJson {
    OperatorJson {
        field: field.name().to_string(),
        kmin: l.kmin(),
        trunc: l.trunc(),
        terms: l.terms().filter(|(_, p)| !p.is_zero()).map(|(k, p)| TermJson { k, poly: scalar_strings(p) }).collect(),
    }
}

pub fn operator_from_json(j: &OperatorJson) -> Result<(OperatorSeries, Field), CliError> {
    let field: Field = j.field.parse().map_err(CliError::Input)?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        if t.k > j.trunc {
            return Err(CliError::Input(format!("term t^{} lies beyond trunc {}", t.k, j.trunc)));
        }
        let coeffs = t.poly.iter().map(|s| parse_scalar(s, field)).collect::<Result<Vec<_>, _>>()?;
        terms.push((t.k, Poly::new(coeffs)));
    }
    let op = OperatorSeries::from_terms(j.trunc, terms);
    if op.kmin() != j.kmin && !op.is_zero() {
        return Err(CliError::Input(format!("kmin {} does not match the lowest nonzero term", j.kmin)));
    }
    Ok((op, field))
}

pub fn series_to_json(s: &LaurentSeries) -> SeriesJson {
    let coeffs = (s.kmin()..=s.trunc()).map(|k| s.coeff(k).to_string()).collect();
    SeriesJson { kmin: s.kmin(), trunc: s.trunc(), coeffs }
}

pub fn series_from_json(j: &SeriesJson, field: Field) -> Result<LaurentSeries, CliError> {
    let coeffs = j.coeffs.iter().map(|s| parse_scalar(s, field)).collect::<Result<Vec<_>, _>>()?;
    Ok(LaurentSeries::from_terms(j.trunc, (j.kmin..).zip(coeffs)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub flavor: String,
    pub passed: bool,
    pub identity_holds: bool,
    pub checked_trunc: i64,
    pub first_failure: Option<i64>,
    pub gcd_ok: bool,
    pub fuchsian_ok: bool,
}

pub fn report_to_json(r: &ConjugacyReport) -> ReportJson {
    ReportJson {
        flavor: match r.flavor {
            Flavor::Weyl => "weyl",
            Flavor::Fuchsian => "fuchsian",
        }
        .to_string(),
        passed: r.passed(),
        identity_holds: r.identity_holds,
        checked_trunc: r.checked_trunc,
        first_failure: r.first_failure,
        gcd_ok: r.gcd_ok,
        fuchsian_ok: r.fuchsian_ok,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonancesJson {
    pub p0: String,
    pub orders: Vec<i64>,
    #[serde(rename = "N")]
    pub n: i64,
    pub w: BTreeMap<i64, String>,
    pub nu: BTreeMap<i64, usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub roots: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<BTreeMap<i64, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index_sets: Option<BTreeMap<i64, Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub jumps: Option<Vec<Vec<i64>>>,
}

pub fn resonances_to_json(r: &ResonanceStructure) -> ResonancesJson {
    let strings = |v: &[Scalar]| v.iter().map(Scalar::to_string).collect::<Vec<_>>();
    let with_roots = r.roots.is_some();
    ResonancesJson {
        p0: r.p0.to_string(),
        orders: r.orders.clone(),
        n: r.bound,
        w: r.w.iter().map(|(j, p)| (*j, p.to_string())).collect(),
        nu: r.nu.clone(),
        roots: r.roots.as_deref().map(strings),
        lambda: with_roots.then(|| r.lambda.iter().map(|(j, v)| (*j, strings(v))).collect()),
        index_sets: with_roots.then(|| r.index_sets.clone()),
        jumps: with_roots.then(|| r.jumps.clone()),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub j: i64,
    pub v: String,
    pub q: String,
    pub h: String,
    pub k: String,
}

fn step_to_json(s: &HomologicalStep) -> StepJson {
    StepJson { j: s.j, v: s.v.to_string(), q: s.q.to_string(), h: s.h.to_string(), k: s.k.to_string() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorJson {
    pub lambda: String,
    pub r: SeriesJson,
}

pub fn factors_to_json(f: &[(Scalar, LaurentSeries)]) -> Vec<FactorJson> {
    f.iter().map(|(l, r)| FactorJson { lambda: l.to_string(), r: series_to_json(r) }).collect()
}

/// A normal form together with its certificate; the input of `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleJson {
    pub kind: String,
    pub source: OperatorJson,
    pub normal_form: OperatorJson,
    pub h: OperatorJson,
    pub k: OperatorJson,
    #[serde(default)]
    pub factors: Option<Vec<FactorJson>>,
    #[serde(default)]
    pub achieved_trunc: Option<i64>,
    #[serde(default)]
    pub repaired: Option<bool>,
    #[serde(default)]
    pub steps: Option<Vec<StepJson>>,
    #[serde(default)]
    pub resonances: Option<ResonancesJson>,
    #[serde(default)]
    pub verify: Option<ReportJson>,
}

pub fn bundle_to_json(source: &OperatorSeries, nf: &NormalFormResult, report: &ConjugacyReport, field: Field) -> BundleJson {
    BundleJson {
        kind: nf.kind.name().to_string(),
        source: operator_to_json(source, field),
        normal_form: operator_to_json(&nf.normal_form, field),
        h: operator_to_json(&nf.conj.h, field),
        k: operator_to_json(&nf.conj.k, field),
        factors: nf.factors.as_deref().map(factors_to_json),
        achieved_trunc: Some(nf.achieved_trunc),
        repaired: Some(nf.repaired),
        steps: Some(nf.steps.iter().map(step_to_json).collect()),
        resonances: Some(resonances_to_json(&nf.resonances)),
        verify: Some(report_to_json(report)),
    }
}
