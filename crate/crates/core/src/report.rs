//! JSON report schema. Field order is fixed by the struct declarations and
//! all containers are ordered, so identical configurations serialize to
//! byte-identical reports.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclo::CyclotomicInteger;
use crate::xlaurent::XLaurent;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedCyclotomic {
    pub m: u64,
    pub coeffs: Vec<String>,
}

impl SerializedCyclotomic {
    pub fn of(v: &CyclotomicInteger) -> SerializedCyclotomic {
        SerializedCyclotomic {
            m: v.conductor(),
            coeffs: v.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedPadic {
    pub ell: u64,
    #[serde(rename = "N")]
    pub precision: u32,
    pub poly: Vec<String>,
}

impl SerializedPadic {
    pub fn of(
        ctx: &crate::cyclo::padic::PadicCyclotomicContext,
        x: &crate::cyclo::padic::PadicElement,
    ) -> SerializedPadic {
        SerializedPadic {
            ell: ctx.ell(),
            precision: ctx.precision(),
            poly: x.coefficients().iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub exp: i64,
    pub coeff: SerializedCyclotomic,
}

pub fn serialize_laurent_cyclo(q: &XLaurent<CyclotomicInteger>) -> Vec<LaurentTerm> {
    q.terms()
        .map(|(exp, c)| LaurentTerm { exp, coeff: SerializedCyclotomic::of(c) })
        .collect()
}

pub fn serialize_laurent_int(q: &XLaurent<BigInt>, m: u64) -> Vec<LaurentTerm> {
    q.terms()
        .map(|(exp, c)| LaurentTerm {
            exp,
            coeff: SerializedCyclotomic::of(&CyclotomicInteger::from_int(m, c.clone())),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionSetReport {
    pub r: usize,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaEntryReport {
    pub class_rep: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub index: usize,
    pub degree: u64,
    #[serde(rename = "Q")]
    pub q: Vec<LaurentTerm>,
    pub mu_chi: Option<u64>,
    pub lambda_chi: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevelReport {
    pub n: u32,
    pub vertices: usize,
    pub kappa_ell_valuation: u64,
    pub ell_invariant_factors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass() -> CheckResult {
        CheckResult { status: "pass".into(), detail: None }
    }
    pub fn fail(detail: String) -> CheckResult {
        CheckResult { status: "fail".into(), detail: Some(detail) }
    }
    pub fn skipped(detail: String) -> CheckResult {
        CheckResult { status: "skipped".into(), detail: Some(detail) }
    }
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationCheckReport {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCheckReport {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_number: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artin: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvaluationCheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_rule: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_lemma: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub congruence: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthCheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub group: String,
    #[serde(rename = "S")]
    pub s: ConnectionSetReport,
    pub beta: Vec<BetaEntryReport>,
    pub ell: u64,
    pub precision: u32,
    #[serde(rename = "K")]
    pub clearing_power: Option<i64>,
    pub f_coeffs: Vec<String>,
    pub mu: Option<u64>,
    pub lambda: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinguished_mod_ell_n: Option<Vec<String>>,
    pub characters: Vec<CharacterReport>,
    pub tower: Vec<TowerLevelReport>,
    pub checks: ChecksReport,
}

/// Character-table report for the `chartab` subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub rep: String,
    pub size: usize,
    pub rep_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowReport {
    pub degree: u64,
    pub values: Vec<SerializedCyclotomic>,
}

/// The scalar-only closed form of the projective-line factor, reported next
/// to the recomputed one; they are expected to differ because the closed
/// form ignores the non-scalar part of the connection set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveLineFactorReport {
    pub computed_q: Vec<LaurentTerm>,
    pub scalar_only_closed_form_q: Vec<LaurentTerm>,
    pub matches_closed_form: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartabReport {
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    pub dixon_prime_note: String,
    pub classes: Vec<ClassReport>,
    pub rows: Vec<TableRowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projective_line_factor: Option<ProjectiveLineFactorReport>,
}

pub fn laurent_from_terms(terms: &[(i64, i64)]) -> XLaurent<BigInt> {
    let mut out = XLaurent::zero();
    for &(e, c) in terms {
        out = out.add(&XLaurent::monomial(e, BigInt::from(c)));
    }
    out
}
