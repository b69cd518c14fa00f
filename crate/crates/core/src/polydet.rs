//! Exact determinants of matrices over exact-division domains, and the
//! evaluation-interpolation determinant for matrices of Laurent polynomials.
//!
//! The Laurent determinant clears per-row minimal exponents (tracking the
//! total cleared power), bounds the x-degree by the sum of row maxima,
//! evaluates at small positive integers, takes fraction-free integer
//! determinants and interpolates back exactly. This avoids the intermediate
//! blowup of symbolic elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::cyclo::CyclotomicInteger;
use crate::xlaurent::XLaurent;

/// Integral domains with decidable exact division, enough for fraction-free
/// elimination.
pub trait ExactDomain: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self
    where
        Self: Sized;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics if the division is not exact; Bareiss divisions always are.
    fn exact_div(&self, other: &Self) -> Self;
}

impl ExactDomain for BigInt {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        assert!(num_traits::Zero::is_zero(&r), "non-exact division in fraction-free elimination");
        q
    }
}

/// A fixed-conductor wrapper so the zero element knows its ring.
#[derive(Debug, Clone, PartialEq)]
pub struct CycloAt(pub CyclotomicInteger);

impl ExactDomain for CycloAt {
    fn zero() -> Self {
        // conductor 1 stands in; arithmetic with mixed zeros never happens
        // because matrices are built at a single conductor
        CycloAt(CyclotomicInteger::zero(1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn mul(&self, other: &Self) -> Self {
        CycloAt(self.0.mul(&other.0))
    }
    fn sub(&self, other: &Self) -> Self {
        CycloAt(self.0.sub(&other.0))
    }
    fn neg(&self) -> Self {
        CycloAt(self.0.neg())
    }
    fn exact_div(&self, other: &Self) -> Self {
        CycloAt(
            self.0
                .exact_div(&other.0)
                .expect("non-exact division in fraction-free elimination"),
        )
    }
}

/// Fraction-free (Bareiss) determinant with column pivoting. Exact over any
/// integral domain: every intermediate entry is a minor of the input.
pub fn bareiss_det<T: ExactDomain>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        panic!("empty matrix has no determinant here");
    }
    for row in &m {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let mut sign_flip = false;
    let mut prev: Option<T> = None;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = match &prev {
                    Some(p) => t.exact_div(p),
                    None => t,
                };
            }
            m[i][k] = T::zero();
        }
        prev = Some(m[k][k].clone());
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Determinant of a matrix over `Z[zeta_m]`.
pub fn cyclotomic_det(m: Vec<Vec<CyclotomicInteger>>) -> CyclotomicInteger {
    let conductor = m
        .first()
        .and_then(|r| r.first())
        .map(|c| c.conductor())
        .expect("nonempty matrix");
    let wrapped: Vec<Vec<CycloAt>> = m
        .into_iter()
        .map(|row| row.into_iter().map(CycloAt).collect())
        .collect();
    let det = bareiss_det(wrapped);
    if det.0.is_zero() {
        CyclotomicInteger::zero(conductor)
    } else {
        det.0
    }
}

/// Exact determinant of a matrix of integer Laurent polynomials via
/// evaluation at x = 1..D+1 and integer Lagrange interpolation.
pub fn laurent_det(mat: &[Vec<XLaurent<BigInt>>]) -> XLaurent<BigInt> {
    let n = mat.len();
    assert!(n > 0, "empty matrix");
    for row in mat {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    // per-row clearing
    let mut cleared: Vec<Vec<XLaurent<BigInt>>> = Vec::with_capacity(n);
    let mut total_shift: i64 = 0;
    let mut degree_bound: i64 = 0;
    for row in mat {
        let row_min = row.iter().filter_map(|e| e.min_exp()).min();
        let Some(row_min) = row_min else {
            return XLaurent::zero(); // a zero row
        };
        total_shift += row_min;
        let shifted: Vec<XLaurent<BigInt>> = row.iter().map(|e| e.shift(-row_min)).collect();
        degree_bound += shifted.iter().filter_map(|e| e.max_exp()).max().unwrap();
        cleared.push(shifted);
    }
    let points = degree_bound + 1;
    let mut values: Vec<BigInt> = Vec::with_capacity(points as usize);
    for v in 1..=points {
        let x = BigInt::from(v);
        let numeric: Vec<Vec<BigInt>> = cleared
            .iter()
            .map(|row| row.iter().map(|e| eval_nonneg(e, &x)).collect())
            .collect();
        values.push(bareiss_det(numeric));
    }
    let coeffs = interpolate_integer(&values);
    XLaurent::from_dense(&coeffs, total_shift)
}

fn eval_nonneg(e: &XLaurent<BigInt>, x: &BigInt) -> BigInt {
    if e.is_zero() {
        BigInt::from(0)
    } else {
        e.eval_int(x)
    }
}

/// Lagrange interpolation through (v, y_v) for v = 1..=P, staying in integer
/// arithmetic: with these nodes the weights are signed binomials over a
/// common denominator (P-1)!, so the only divisions are the exact final ones.
fn interpolate_integer(values: &[BigInt]) -> Vec<BigInt> {
    let p = values.len();
    assert!(p > 0);
    if p == 1 {
        return vec![values[0].clone()];
    }
    // full = prod_{v=1..P} (x - v)
    let mut full = vec![BigInt::one()];
    for v in 1..=p as i64 {
        let mut next = vec![BigInt::from(0); full.len() + 1];
        for (i, c) in full.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(v);
        }
        full = next;
    }
    let mut acc = vec![BigInt::from(0); p];
    let mut binom = BigInt::one(); // C(P-1, v-1)
    for (idx, y) in values.iter().enumerate() {
        let v = idx as i64 + 1;
        // q = full / (x - v), synthetic division
        let mut q = vec![BigInt::from(0); p];
        let mut carry = BigInt::from(0);
        for i in (0..p).rev() {
            q[i] = &full[i + 1] + BigInt::from(v) * &carry;
            carry = q[i].clone();
        }
        let sign_flip = (p - 1 - idx) % 2 == 1;
        let w = if sign_flip { -(y * &binom) } else { y * &binom };
        if !num_traits::Zero::is_zero(&w) {
            for (a, qi) in acc.iter_mut().zip(&q) {
                *a += &w * qi;
            }
        }
        binom = binom * BigInt::from(p as i64 - 1 - idx as i64)
            / BigInt::from(idx as i64 + 1);
    }
    let mut fact = BigInt::one(); // (P-1)!
    for k in 2..p {
        fact *= BigInt::from(k as i64);
    }
    acc.into_iter()
        .map(|c| {
            let (q, r) = c.div_rem(&fact);
            assert!(num_traits::Zero::is_zero(&r), "interpolation must produce integer coefficients");
            q
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> XLaurent<BigInt> {
        let mut out = XLaurent::zero();
        for &(e, c) in terms {
            out = out.add(&XLaurent::int_monomial(e, c));
        }
        out
    }

    /// Reference determinant by cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<XLaurent<BigInt>>]) -> XLaurent<BigInt> {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = XLaurent::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<XLaurent<BigInt>>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[i][c].clone())
                        .collect()
                })
                .collect();
            let term = m[0][j].mul(&cofactor_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        // f(x) = 3x^3 - 2x + 7 sampled at 1..5
        let f = |x: i64| 3 * x * x * x - 2 * x + 7;
        let values: Vec<BigInt> = (1..=5).map(|v| BigInt::from(f(v))).collect();
        let coeffs = interpolate_integer(&values);
        let ints: Vec<i64> = coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(ints, vec![7, -2, 0, 3, 0]);
    }

    #[test]
    fn bareiss_matches_known_values() {
        let m: Vec<Vec<BigInt>> = vec![
            vec![2.into(), (-1).into(), 0.into()],
            vec![(-1).into(), 2.into(), (-1).into()],
            vec![0.into(), (-1).into(), 2.into()],
        ];
        assert_eq!(bareiss_det(m), BigInt::from(4));
        // singular matrix
        let s: Vec<Vec<BigInt>> = vec![
            vec![1.into(), 2.into()],
            vec![2.into(), 4.into()],
        ];
        assert_eq!(bareiss_det(s), BigInt::from(0));
    }

    #[test]
    fn laurent_det_agrees_with_cofactor_expansion() {
        let mut state = 0xdead_beefu64;
        let mut rnd = move |range: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64).rem_euclid(2 * range + 1) - range
        };
        for n in 1..=5usize {
            for _ in 0..8 {
                let m: Vec<Vec<XLaurent<BigInt>>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let mut e = XLaurent::zero();
                                for _ in 0..3 {
                                    e = e.add(&lp(&[(rnd(3), rnd(9))]));
                                }
                                e
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(laurent_det(&m), cofactor_det(&m), "n = {n}");
            }
        }
    }

    #[test]
    fn cyclotomic_det_two_by_two() {
        let z = CyclotomicInteger::root_of_unity(1, 4);
        let one = CyclotomicInteger::one(4);
        let m = vec![
            vec![one.clone(), z.clone()],
            vec![z.clone().neg(), one.clone()],
        ];
        // 1*1 - (z * -z) = 1 + z^2 = 1 - 1 = 0
        assert!(cyclotomic_det(m).is_zero());

        let m = vec![
            vec![z.clone(), one.clone()],
            vec![one.clone(), z.clone()],
        ];
        // z^2 - 1 = -2
        assert_eq!(cyclotomic_det(m), CyclotomicInteger::from_int(4, -2));
    }
}
