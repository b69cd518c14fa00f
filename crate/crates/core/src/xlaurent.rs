//! Sparse Laurent polynomials in a single variable x, used as the coefficient
//! carrier for voltage matrices: entries are sums c_a x^a with integer
//! exponents of either sign. Substituting x = 1 + T turns a cleared Laurent
//! polynomial into an honest polynomial in T.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclo::CyclotomicInteger;

/// Minimal ring interface shared by BigInt and CyclotomicInteger
/// coefficients.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Scaling by a rational integer.
    fn mul_big(&self, k: &BigInt) -> Self;
}

impl Ring for BigInt {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_big(&self, k: &BigInt) -> Self {
        self * k
    }
}

impl Ring for CyclotomicInteger {
    fn add(&self, other: &Self) -> Self {
        CyclotomicInteger::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        CyclotomicInteger::mul(self, other)
    }
    fn neg(&self) -> Self {
        CyclotomicInteger::neg(self)
    }
    fn is_zero(&self) -> bool {
        CyclotomicInteger::is_zero(self)
    }
    fn mul_big(&self, k: &BigInt) -> Self {
        self.mul_int(k)
    }
}

/// Zero construction that inherits ring context (the cyclotomic conductor)
/// from a sample element.
pub trait RingWithZero: Ring {
    fn ring_zero(sample: &Self) -> Self;
}

impl RingWithZero for BigInt {
    fn ring_zero(_: &Self) -> Self {
        BigInt::zero()
    }
}

impl RingWithZero for CyclotomicInteger {
    fn ring_zero(sample: &Self) -> Self {
        CyclotomicInteger::zero(sample.conductor())
    }
}

/// Canonical form: the map never stores zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XLaurent<C: Ring> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> Default for XLaurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Ring> XLaurent<C> {
    pub fn zero() -> Self {
        XLaurent { terms: BTreeMap::new() }
    }

    pub fn monomial(exp: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        XLaurent { terms }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i64) -> Option<&C> {
        self.terms.get(&exp)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, exp: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(cur) => {
                let sum = cur.add(c);
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        XLaurent { terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea + eb, &ca.mul(cb));
            }
        }
        out
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: i64) -> Self {
        XLaurent { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (e, t) in &self.terms {
            out.insert_add(*e, &t.mul(c));
        }
        out
    }

    /// self^k for k >= 1 (the sparse form has no canonical one element).
    pub fn pow(&self, k: u64) -> Self {
        assert!(k >= 1, "pow needs a positive exponent");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> XLaurent<D> {
        let mut out = XLaurent::zero();
        for (e, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                out.terms.insert(*e, d);
            }
        }
        out
    }
}

impl<C: RingWithZero> XLaurent<C> {
    /// Clears the pole: returns (p, K) with K = -min_exp and p the dense
    /// coefficient vector of x^K * self as a polynomial in T where x = 1 + T.
    /// The zero polynomial clears to ([], 0).
    pub fn clear_to_t_polynomial(&self) -> (Vec<C>, i64) {
        let Some(min) = self.min_exp() else {
            return (Vec::new(), 0);
        };
        let clearing = -min;
        let degree = (self.max_exp().unwrap() + clearing) as usize;
        let mut out: Vec<C> = vec![C::ring_zero(&self.sample()); degree + 1];
        for (e, c) in &self.terms {
            let n = (e + clearing) as usize;
            // add c * (1+T)^n
            let mut binom = BigInt::from(1);
            for (j, slot) in out.iter_mut().enumerate().take(n + 1) {
                *slot = slot.add(&c.mul_big(&binom));
                binom = binom * (n - j) / (j + 1);
            }
        }
        (out, clearing)
    }

    /// Evaluates x^K * self at x = v, all exponents nonnegative after the
    /// clearing shift. Returns (value, K).
    pub fn eval_cleared(&self, v: &C) -> (C, i64) {
        let min = self.min_exp().expect("eval_cleared of the zero polynomial");
        let clearing = -min;
        let mut acc = C::ring_zero(&self.sample());
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..(e + clearing) {
                term = term.mul(v);
            }
            acc = acc.add(&term);
        }
        (acc, clearing)
    }

    fn sample(&self) -> C {
        self.terms.values().next().expect("nonzero").clone()
    }
}

impl XLaurent<BigInt> {
    pub fn from_dense(coeffs: &[BigInt], shift: i64) -> Self {
        let mut out = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if !Zero::is_zero(c) {
                out.terms.insert(i as i64 + shift, c.clone());
            }
        }
        out
    }

    pub fn int_monomial(exp: i64, c: i64) -> Self {
        Self::monomial(exp, BigInt::from(c))
    }

    /// Promotes integer coefficients into `Z[zeta_m]`.
    pub fn to_cyclotomic(&self, m: u64) -> XLaurent<CyclotomicInteger> {
        self.map_coeffs(|c| CyclotomicInteger::from_int(m, c.clone()))
    }

    /// Evaluation at an integer point (exponents must be nonnegative).
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            assert!(*e >= 0, "eval_int needs a cleared polynomial");
            acc += c * x.pow(*e as u32);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> XLaurent<BigInt> {
        let mut out = XLaurent::zero();
        for &(e, c) in terms {
            out = out.add(&XLaurent::int_monomial(e, c));
        }
        out
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let a = p(&[(2, 5), (-1, 3)]);
        let b = p(&[(2, -5), (0, 1)]);
        let sum = a.add(&b);
        assert_eq!(sum.num_terms(), 2);
        assert_eq!(sum.coeff(2), None);
        assert_eq!(sum.min_exp(), Some(-1));
    }

    #[test]
    fn multiplication_adds_exponents() {
        let a = p(&[(-2, 1), (1, 2)]);
        let b = p(&[(3, 4)]);
        let prod = a.mul(&b);
        assert_eq!(prod, p(&[(1, 4), (4, 8)]));
        assert_eq!(a.shift(3), p(&[(1, 1), (4, 2)]));
    }

    #[test]
    fn clearing_and_substitution() {
        // x - x^{-1} clears by K = 1 to x^2 - 1 = T^2 + 2T
        let a = p(&[(1, 1), (-1, -1)]);
        let (poly, k) = a.clear_to_t_polynomial();
        assert_eq!(k, 1);
        let ints: Vec<i64> = poly.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(ints, vec![0, 2, 1]);

        // 2 - x - x^{-1} clears to -T^2
        let q = p(&[(0, 2), (1, -1), (-1, -1)]);
        let (poly, k) = q.clear_to_t_polynomial();
        assert_eq!(k, 1);
        let ints: Vec<i64> = poly.iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(ints, vec![0, 0, -1]);
    }

    #[test]
    fn eval_cleared_matches_t_polynomial() {
        let a = p(&[(-2, 3), (0, -1), (3, 7)]);
        let (poly, k) = a.clear_to_t_polynomial();
        let x = BigInt::from(5); // T = 4
        let (val, k2) = a.eval_cleared(&x);
        assert_eq!(k, k2);
        let t = BigInt::from(4);
        let horner = poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c);
        assert_eq!(val, horner);
    }

    #[test]
    fn pow_is_repeated_mul() {
        let a = p(&[(-1, 1), (1, 1)]);
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }
}
