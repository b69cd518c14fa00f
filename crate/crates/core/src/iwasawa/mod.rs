//! The tower polynomial det M(1+T), its Weierstrass invariants, the
//! character-indexed factors Q_chi, and the verifiers tying them together:
//! exact factorization, coefficient identities, sum rules, congruences, the
//! evaluation identity against twisted determinants, and the growth law.

pub mod weier;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chartab::CharacterTable;
use crate::cyclo::padic::{exact_valuation, padic_context};
use crate::cyclo::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::graphs::{
    cayley_graph, derived_graph, jacobian_ell_part, twisted_h_at_1_unchecked, validate_beta,
    voltage_connectivity, BetaAssignment, Multigraph, VoltageAssignment,
};
use crate::groups::{ConnectionSet, FiniteGroup};
use crate::polydet::laurent_det;
use crate::xlaurent::XLaurent;

pub use weier::{distinguished_polynomial_mod, integer_invariants, WeierstrassReport};

/// M(x) = D - (sum over edges of x^{alpha(e)}): the voltage deformation of
/// the Laplacian; M(1) is the Laplacian itself.
pub fn iwasawa_matrix(
    graph: &Multigraph,
    alpha: &VoltageAssignment,
) -> Vec<Vec<XLaurent<BigInt>>> {
    let n = graph.n_vertices();
    let degrees = graph.degrees();
    let mut m: Vec<Vec<XLaurent<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        XLaurent::int_monomial(0, degrees[i] as i64)
                    } else {
                        XLaurent::zero()
                    }
                })
                .collect()
        })
        .collect();
    for e in 0..graph.n_directed_edges() {
        let (o, t) = (graph.origin(e), graph.target(e));
        let term = XLaurent::int_monomial(alpha.on_directed(e), 1);
        m[o][t] = m[o][t].sub(&term);
    }
    m
}

/// det M(x) as an exact Laurent polynomial.
pub fn tower_determinant(graph: &Multigraph, alpha: &VoltageAssignment) -> XLaurent<BigInt> {
    laurent_det(&iwasawa_matrix(graph, alpha))
}

/// The cleared tower polynomial and its invariants at a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IwasawaData {
    pub ell: u64,
    /// K with f_T = x^K det M(x) under x = 1 + T, K = -(minimal exponent).
    pub clearing_power: i64,
    /// Coefficients of f_T, ascending; f_T(0) = 0 always.
    pub f_t: Vec<BigInt>,
    /// g = f / T.
    pub g_t: Vec<BigInt>,
    pub mu: u64,
    pub lambda: u64,
}

impl IwasawaData {
    /// Finite-precision distinguished factor of g, for reports.
    pub fn distinguished_report(&self, precision: u32) -> Result<WeierstrassReport> {
        distinguished_polynomial_mod(&self.g_t, self.ell, precision)
    }
}

/// Extracts the invariants from an exact Laurent determinant. The clearing
/// power x^K is a unit in the power-series ring, so (mu, lambda) do not
/// depend on it.
pub fn iwasawa_data(det: &XLaurent<BigInt>, ell: u64) -> Result<IwasawaData> {
    if det.is_zero() {
        return Err(Error::DeterminantDegenerate);
    }
    let (f_t, clearing_power) = det.clear_to_t_polynomial();
    if !f_t[0].is_zero() {
        return Err(Error::Internal(
            "tower polynomial must vanish at T = 0 (singular Laplacian)".into(),
        ));
    }
    let g_t: Vec<BigInt> = f_t[1..].to_vec();
    let Some((mu, lambda)) = integer_invariants(&g_t, ell) else {
        return Err(Error::DeterminantDegenerate);
    };
    Ok(IwasawaData { ell, clearing_power, f_t, g_t, mu, lambda })
}

/// One character's worth of tower data: Q = r chi(1) - sum over S of
/// x^{beta(t)} chi(t), as an exact Laurent polynomial over `Z[zeta_m]`.
#[derive(Debug, Clone)]
pub struct CharacterIwasawaRecord {
    pub row: usize,
    pub degree: u64,
    pub q: XLaurent<CyclotomicInteger>,
}

pub fn q_chi(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
    row: usize,
) -> CharacterIwasawaRecord {
    let conj = group.conjugacy();
    let m = table.m;
    let degree = table.degrees[row];
    let r = s.r() as i64;
    let mut q = XLaurent::constant(CyclotomicInteger::from_int(m, r * degree as i64));
    for (class, b) in beta.classes() {
        let size = conj.class_size(class) as i64;
        let value = table.rows[row][class].mul_int(&BigInt::from(size));
        q = q.sub(&XLaurent::monomial(b, value));
    }
    CharacterIwasawaRecord { row, degree, q }
}

pub fn character_records(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
) -> Vec<CharacterIwasawaRecord> {
    (0..table.rows.len()).map(|r| q_chi(group, s, beta, table, r)).collect()
}

/// (mu_chi, lambda_chi): minimal coefficient valuation of the cleared
/// T-polynomial of Q_chi and the least index attaining it, valuations taken
/// in the unramified completion at ell. Refuses when ell divides the degree
/// (the invariants of Q and of Q/chi(1) would differ).
pub fn chi_invariants(
    rec: &CharacterIwasawaRecord,
    table: &CharacterTable,
    ell: u64,
) -> Result<(u64, u64)> {
    if rec.degree % ell == 0 {
        return Err(Error::DegreeDivisible { degree: rec.degree, ell });
    }
    let (tpoly, _clearing) = rec.q.clear_to_t_polynomial();
    if tpoly.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroSeries);
    }
    let mut ctx = padic_context(ell, table.m, 64)?;
    let mut best: Option<(u64, u64)> = None;
    for (i, c) in tpoly.iter().enumerate() {
        let Some(v) = exact_valuation(&mut ctx, c)? else {
            continue;
        };
        if best.map_or(true, |(mv, _)| v < mv) {
            best = Some((v, i as u64));
        }
    }
    let (mu, lambda) = best.expect("nonzero polynomial has a finite valuation");
    Ok((mu, lambda))
}

/// Exact verification of det M(1+T) * prod chi(1)^{chi(1)^2} =
/// prod Q_chi(T)^{chi(1)^2} over `Z[zeta_m]`, including the rationality of
/// the character-product side.
pub fn verify_factorization(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
    det: &XLaurent<BigInt>,
) -> Result<()> {
    let m = table.m;
    let mut product: Option<XLaurent<CyclotomicInteger>> = None;
    for rec in character_records(group, s, beta, table) {
        let power = if rec.q.is_zero() {
            XLaurent::zero()
        } else {
            rec.q.pow(rec.degree * rec.degree)
        };
        product = Some(match product {
            None => power,
            Some(acc) => acc.mul(&power),
        });
        if product.as_ref().map_or(false, |p| p.is_zero()) {
            break;
        }
    }
    let product = product.unwrap_or_default();
    for (e, c) in product.terms() {
        if c.as_int().is_none() {
            return Err(Error::FactorizationMismatch {
                exponent: e,
                detail: format!("non-rational coefficient {c} in the character product"),
            });
        }
    }
    let mut degree_scale = BigInt::from(1);
    for &d in &table.degrees {
        degree_scale *= BigInt::from(d).pow((d * d) as u32);
    }
    let rhs = det.to_cyclotomic(m).scale(&CyclotomicInteger::from_int(m, degree_scale));
    let difference = product.sub(&rhs);
    if let Some(exp) = difference.min_exp() {
        let got = product.coeff(exp).cloned().unwrap_or_else(|| CyclotomicInteger::zero(m));
        let want = rhs.coeff(exp).cloned().unwrap_or_else(|| CyclotomicInteger::zero(m));
        return Err(Error::FactorizationMismatch {
            exponent: exp,
            detail: format!("product has {got}, determinant side has {want}"),
        });
    }
    Ok(())
}

/// Coefficient identity for the trivial character: the T^2-coefficient of
/// Q_1 as a power series equals minus the sum of squared voltages over the
/// half-support, and ell not dividing that sum is equivalent to
/// (mu_1, lambda_1) = (0, 2).
#[derive(Debug, Clone)]
pub struct TrivialLemmaReport {
    pub sum_of_squares: BigInt,
    pub sum_is_unit: bool,
    /// None when Q_1 is identically zero.
    pub invariants: Option<(u64, u64)>,
}

pub fn coefficient_lemma_trivial(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    ell: u64,
) -> Result<TrivialLemmaReport> {
    let conj = group.conjugacy();
    let mut q: XLaurent<BigInt> = XLaurent::int_monomial(0, s.r() as i64);
    for (class, b) in beta.classes() {
        q = q.sub(&XLaurent::int_monomial(b, conj.class_size(class) as i64));
    }
    let sum_of_squares = beta.sum_of_squares(group);
    let series = series_prefix(&q, 3);
    if !series[0].is_zero() || !series[1].is_zero() {
        return Err(Error::Internal(
            "Q_1 must vanish to order two at T = 0 by antisymmetry".into(),
        ));
    }
    if series[2] != -sum_of_squares.clone() {
        return Err(Error::Internal(format!(
            "T^2-coefficient of Q_1 is {}, expected {}",
            series[2], -sum_of_squares
        )));
    }
    let invariants = if q.is_zero() {
        None
    } else {
        let (tpoly, _) = q.clear_to_t_polynomial();
        integer_invariants(&tpoly, ell)
    };
    let sum_is_unit = weier::int_valuation(&sum_of_squares, ell) == Some(0);
    let criterion_holds = invariants == Some((0, 2));
    if sum_is_unit != criterion_holds {
        return Err(Error::Internal(format!(
            "unit criterion failed: ell | sum-of-squares is {}, invariants {:?}",
            !sum_is_unit, invariants
        )));
    }
    Ok(TrivialLemmaReport { sum_of_squares, sum_is_unit, invariants })
}

/// First coefficients of the power-series expansion in T of a Laurent
/// polynomial in x = 1 + T (the clearing factor is inverted as a series).
fn series_prefix(q: &XLaurent<BigInt>, len: usize) -> Vec<BigInt> {
    let (cleared, k) = q.clear_to_t_polynomial();
    let mut out = vec![BigInt::zero(); len];
    if cleared.is_empty() {
        return out;
    }
    // (1+T)^{-K} = sum_j binom(-K, j) T^j with integer binomials
    let mut inv_binoms = vec![BigInt::from(1)];
    for j in 1..len {
        let num = BigInt::from(-k - (j as i64 - 1));
        let prev = inv_binoms[j - 1].clone();
        inv_binoms.push(prev * num / BigInt::from(j as i64));
    }
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for i in 0..=j {
            if let Some(c) = cleared.get(i) {
                acc += c * &inv_binoms[j - i];
            }
        }
        *slot = acc;
    }
    out
}

/// Constant-term identity for a nontrivial character: Q_chi(0) is the sum
/// over S of (chi(1) - chi(t)), and it being a unit at ell is equivalent to
/// vanishing invariants.
#[derive(Debug, Clone)]
pub struct NontrivialLemmaReport {
    pub row: usize,
    pub q_at_zero: CyclotomicInteger,
    pub q_at_zero_valuation: Option<u64>,
    pub invariants: (u64, u64),
}

pub fn coefficient_lemma_nontrivial(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
    row: usize,
    ell: u64,
) -> Result<NontrivialLemmaReport> {
    assert!(row > 0, "row 0 is the trivial character");
    let rec = q_chi(group, s, beta, table, row);
    if rec.degree % ell == 0 {
        return Err(Error::DegreeDivisible { degree: rec.degree, ell });
    }
    // Q(0): sum of all Laurent coefficients
    let mut q_at_zero = CyclotomicInteger::zero(table.m);
    for (_, c) in rec.q.terms() {
        q_at_zero = q_at_zero.add(c);
    }
    // independent route: sum over classes of |C| (chi(1) - chi(c))
    let conj = group.conjugacy();
    let mut direct = CyclotomicInteger::zero(table.m);
    for (class, _) in beta.classes() {
        let size = BigInt::from(conj.class_size(class) as i64);
        let term = CyclotomicInteger::from_int(table.m, rec.degree as i64)
            .sub(&table.rows[row][class])
            .mul_int(&size);
        direct = direct.add(&term);
    }
    if q_at_zero != direct {
        return Err(Error::Internal("two routes to Q(0) disagree".into()));
    }
    let mut ctx = padic_context(ell, table.m, 64)?;
    let q_at_zero_valuation = exact_valuation(&mut ctx, &q_at_zero)?;
    let invariants = chi_invariants(&rec, table, ell)?;
    let is_unit = q_at_zero_valuation == Some(0);
    if is_unit != (invariants == (0, 0)) {
        return Err(Error::Internal(format!(
            "constant-term criterion failed on row {row}: v(Q(0)) = {q_at_zero_valuation:?}, invariants {invariants:?}"
        )));
    }
    Ok(NontrivialLemmaReport { row, q_at_zero, q_at_zero_valuation, invariants })
}

/// The additivity of the invariants across the factorization:
/// mu_total = sum chi(1)^2 mu_chi and lambda_total = sum chi(1)^2 lambda_chi - 1.
#[derive(Debug, Clone)]
pub struct SumRuleReport {
    pub mu_total: u64,
    pub lambda_total: u64,
    pub mu_sum: u64,
    pub lambda_sum: u64,
    /// (row, degree, mu_chi, lambda_chi)
    pub per_character: Vec<(usize, u64, u64, u64)>,
}

pub fn sum_rule_check(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
    data: &IwasawaData,
) -> Result<SumRuleReport> {
    let mut mu_sum = 0u64;
    let mut lambda_sum = 0u64;
    let mut per_character = Vec::new();
    for rec in character_records(group, s, beta, table) {
        let (mu, lambda) = chi_invariants(&rec, table, data.ell)?;
        let weight = rec.degree * rec.degree;
        mu_sum += weight * mu;
        lambda_sum += weight * lambda;
        per_character.push((rec.row, rec.degree, mu, lambda));
    }
    let lambda_sum = lambda_sum - 1;
    if data.mu != mu_sum || data.lambda != lambda_sum {
        return Err(Error::Internal(format!(
            "sum rule violated: determinant gives ({}, {}), characters give ({}, {})",
            data.mu, data.lambda, mu_sum, lambda_sum
        )));
    }
    Ok(SumRuleReport {
        mu_total: data.mu,
        lambda_total: data.lambda,
        mu_sum,
        lambda_sum,
        per_character,
    })
}

/// Two characters are congruent when all their values agree in the residue
/// field of the completion.
pub fn congruence_test(table: &CharacterTable, i: usize, j: usize, ell: u64) -> Result<bool> {
    let (di, dj) = (table.degrees[i], table.degrees[j]);
    if di != dj {
        return Err(Error::DegreeMismatch { left: di, right: dj });
    }
    if di % ell == 0 {
        return Err(Error::DegreeDivisible { degree: di, ell });
    }
    let ctx = padic_context(ell, table.m, 8)?;
    for c in 0..table.n_classes() {
        let diff = table.rows[i][c].sub(&table.rows[j][c]);
        let reduced = ctx.reduce(&diff)?;
        if !ctx.is_residue_zero(&reduced) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub congruent: bool,
    pub left: Option<(u64, u64)>,
    pub right: Option<(u64, u64)>,
}

/// For a congruent pair: mu vanishing transfers, and when both mu vanish
/// the lambdas agree.
pub fn congruence_invariant_check(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    table: &CharacterTable,
    i: usize,
    j: usize,
    ell: u64,
) -> Result<CongruenceReport> {
    let congruent = congruence_test(table, i, j, ell)?;
    if !congruent {
        return Ok(CongruenceReport { congruent, left: None, right: None });
    }
    let left = chi_invariants(&q_chi(group, s, beta, table, i), table, ell)?;
    let right = chi_invariants(&q_chi(group, s, beta, table, j), table, ell)?;
    if (left.0 == 0) != (right.0 == 0) {
        return Err(Error::Internal(format!(
            "congruent characters with inequivalent mu-vanishing: {left:?} vs {right:?}"
        )));
    }
    if left.0 == 0 && right.0 == 0 && left.1 != right.1 {
        return Err(Error::Internal(format!(
            "congruent characters with mu = 0 but different lambda: {left:?} vs {right:?}"
        )));
    }
    Ok(CongruenceReport { congruent, left: Some(left), right: Some(right) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationConvention {
    /// T = zeta - 1, i.e. x evaluated at zeta.
    ZetaMinusOne,
    /// T = 1 - zeta, i.e. x evaluated at 2 - zeta.
    OneMinusZeta,
    /// Both substitutions matched a nonzero twisted determinant.
    Both,
    /// All quantities vanished; nothing to distinguish.
    BothZero,
}

impl EvaluationConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvaluationConvention::ZetaMinusOne => "zeta-minus-one",
            EvaluationConvention::OneMinusZeta => "one-minus-zeta",
            EvaluationConvention::Both => "both",
            EvaluationConvention::BothZero => "both-zero",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub level: u32,
    pub convention: EvaluationConvention,
    pub twisted: CyclotomicInteger,
}

/// Compares f at T = zeta - 1 and at T = 1 - zeta against the twisted
/// determinant h(1, psi_1), multiplying both sides by the clearing power so
/// everything stays inside `Z[zeta]`. Exactly one convention is expected to
/// match when the values are nonzero; the survivor is recorded.
pub fn evaluation_identity_check(
    graph: &Multigraph,
    alpha: &VoltageAssignment,
    det: &XLaurent<BigInt>,
    ell: u64,
    level: u32,
) -> Result<EvaluationReport> {
    if det.is_zero() {
        return Err(Error::DeterminantDegenerate);
    }
    let m = ell.pow(level);
    let zeta = CyclotomicInteger::root_of_unity(1, m);
    let det_c = det.to_cyclotomic(m);
    let twisted = twisted_h_at_1_unchecked(graph, alpha, ell, level, 1)?;

    let (value_a, clearing) = det_c.eval_cleared(&zeta);
    if clearing < 0 {
        return Err(Error::Internal(
            "negative clearing power contradicts the palindromic symmetry".into(),
        ));
    }
    let side_a = CyclotomicInteger::root_of_unity(clearing, m).mul(&twisted);
    let match_a = value_a == side_a;

    let two_minus_zeta = CyclotomicInteger::from_int(m, 2).sub(&zeta);
    let (value_b, clearing_b) = det_c.eval_cleared(&two_minus_zeta);
    debug_assert_eq!(clearing, clearing_b);
    let mut side_b = twisted.clone();
    for _ in 0..clearing {
        side_b = side_b.mul(&two_minus_zeta);
    }
    let match_b = value_b == side_b;

    let convention = match (match_a, match_b) {
        (true, true) => {
            if twisted.is_zero() && value_a.is_zero() && value_b.is_zero() {
                EvaluationConvention::BothZero
            } else {
                EvaluationConvention::Both
            }
        }
        (true, false) => EvaluationConvention::ZetaMinusOne,
        (false, true) => EvaluationConvention::OneMinusZeta,
        (false, false) => return Err(Error::NeitherConventionMatches),
    };
    Ok(EvaluationReport { level, convention, twisted })
}

/// The growth law: valuations of the ell-part of the Jacobian along the
/// tower match ell^n mu + n lambda + nu from some level on; nu is fitted at
/// the top level and the stabilization point is searched, never assumed.
#[derive(Debug, Clone)]
pub struct GrowthLevelRow {
    pub level: u32,
    pub vertices: usize,
    pub kappa_valuation: u64,
    pub factor_valuations: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub mu: u64,
    pub lambda: u64,
    pub nu: i64,
    pub stabilized_from: u32,
    pub levels: Vec<GrowthLevelRow>,
}

pub fn growth_check(
    group: &FiniteGroup,
    s: &ConnectionSet,
    beta: &BetaAssignment,
    data: &IwasawaData,
    n_max: u32,
    precision: u32,
) -> Result<GrowthReport> {
    let ell = data.ell;
    validate_beta(group, s, beta, ell, 4)?;
    if !s.tower_eligible() {
        return Err(Error::EulerCharacteristicZero);
    }
    let graph = cayley_graph(group, s);
    let alpha = beta.voltage(group, &graph);
    for level in 1..=n_max {
        if !voltage_connectivity(&graph, &alpha, ell, level)? {
            return Err(Error::CoverDisconnected { level });
        }
    }
    let mut levels = Vec::with_capacity(n_max as usize + 1);
    for level in 0..=n_max {
        let cover = derived_graph(&graph, &alpha, ell, level)?;
        let jac = jacobian_ell_part(&cover, ell, precision)?;
        levels.push(GrowthLevelRow {
            level,
            vertices: cover.n_vertices(),
            kappa_valuation: jac.kappa_valuation,
            factor_valuations: jac.factor_valuations,
        });
    }
    let predict = |nu: i64, level: u32| -> i64 {
        (ell as i64).pow(level) * data.mu as i64 + level as i64 * data.lambda as i64 + nu
    };
    let top = levels.last().unwrap();
    let nu = top.kappa_valuation as i64 - predict(0, n_max);
    let stabilized_from = (0..=n_max)
        .find(|&n0| {
            (n0..=n_max).all(|lv| levels[lv as usize].kappa_valuation as i64 == predict(nu, lv))
        })
        .unwrap_or(n_max);
    if stabilized_from + 1 > n_max {
        return Err(Error::FormulaNeverStabilizes {
            valuations: levels.iter().map(|l| l.kappa_valuation).collect(),
        });
    }
    Ok(GrowthReport { mu: data.mu, lambda: data.lambda, nu, stabilized_from, levels })
}
