//! Exact arithmetic in the cyclotomic integer rings `Z[zeta_m]`, with elements
//! stored in the power basis 1, zeta, ..., zeta^{phi(m)-1} modulo the m-th
//! cyclotomic polynomial. Equality is coefficient equality.

pub mod padic;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        result = result / n * (n - 1);
    }
    result
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn phi_cache() -> &'static Mutex<BTreeMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The m-th cyclotomic polynomial, monic of degree phi(m), coefficients in
/// ascending order. Computed by exact division of x^m - 1 by the lower
/// cyclotomic polynomials.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<BigInt>> {
    assert!(m >= 1);
    if let Some(hit) = phi_cache().lock().unwrap().get(&m) {
        return hit.clone();
    }
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_poly_div(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    phi_cache().lock().unwrap().insert(m, arc.clone());
    arc
}

/// Exact division of integer polynomials (divisor monic); panics on a
/// nonzero remainder, which cannot happen for cyclotomic factors.
fn exact_poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (dd..=dn).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate().take(dd) {
            rem[i - dd + j] -= &c * d;
        }
        quot[i - dd] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact cyclotomic division");
    quot
}

/// An element of `Z[zeta_m]` in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(m: u64) -> CyclotomicInteger {
        CyclotomicInteger { m, coeffs: vec![BigInt::zero(); euler_phi(m) as usize] }
    }

    pub fn from_int(m: u64, v: impl Into<BigInt>) -> CyclotomicInteger {
        let mut out = Self::zero(m);
        out.coeffs[0] = v.into();
        out
    }

    pub fn one(m: u64) -> CyclotomicInteger {
        Self::from_int(m, 1)
    }

    /// zeta_m^k, any integer k.
    pub fn root_of_unity(k: i64, m: u64) -> CyclotomicInteger {
        let k = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigInt::zero(); k + 1];
        poly[k] = BigInt::one();
        Self::from_poly(m, poly)
    }

    /// Reduces an arbitrary-degree polynomial in zeta mod Phi_m.
    pub fn from_poly(m: u64, mut poly: Vec<BigInt>) -> CyclotomicInteger {
        let phi = euler_phi(m) as usize;
        let modulus = cyclotomic_polynomial(m);
        for i in (phi..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            // x^i = -sum_j Phi[j] x^{i-phi+j}
            for (j, d) in modulus.iter().enumerate().take(phi) {
                poly[i - phi + j] -= &c * d;
            }
        }
        poly.resize(phi, BigInt::zero());
        CyclotomicInteger { m, coeffs: poly }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(n) when the element is the rational integer n.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn assert_same_ring(&self, other: &CyclotomicInteger) {
        assert_eq!(self.m, other.m, "mixed conductors: lift first");
    }

    pub fn add(&self, other: &CyclotomicInteger) -> CyclotomicInteger {
        self.assert_same_ring(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CyclotomicInteger { m: self.m, coeffs }
    }

    pub fn sub(&self, other: &CyclotomicInteger) -> CyclotomicInteger {
        self.assert_same_ring(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CyclotomicInteger { m: self.m, coeffs }
    }

    pub fn neg(&self) -> CyclotomicInteger {
        CyclotomicInteger { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &CyclotomicInteger) -> CyclotomicInteger {
        self.assert_same_ring(other);
        let n = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_poly(self.m, prod)
    }

    pub fn mul_int(&self, k: &BigInt) -> CyclotomicInteger {
        CyclotomicInteger { m: self.m, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Galois twist zeta -> zeta^k for k coprime to m.
    pub fn galois_twist(&self, k: i64) -> Result<CyclotomicInteger> {
        let kk = k.rem_euclid(self.m as i64) as u64;
        if num_integer::gcd(kk, self.m) != 1 {
            return Err(Error::NotCoprime { k, m: self.m });
        }
        let mut poly = vec![BigInt::zero(); self.m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(i as u64 * kk % self.m) as usize] += c;
            }
        }
        Ok(Self::from_poly(self.m, poly))
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> CyclotomicInteger {
        self.galois_twist(-1).expect("-1 is a unit mod m")
    }

    /// Rewrites the element in the larger ring `Z[zeta_to]` for m | to.
    pub fn lift_to_conductor(&self, to: u64) -> Result<CyclotomicInteger> {
        if to == self.m {
            return Ok(self.clone());
        }
        if to % self.m != 0 {
            return Err(Error::ConductorMismatch { element_m: self.m, context_m: to });
        }
        let step = (to / self.m) as usize;
        let mut poly = vec![BigInt::zero(); self.coeffs.len() * step];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::from_poly(to, poly))
    }

    /// For m = 2u with u odd, rewrites into `Z[zeta_u]` using
    /// zeta_m = -zeta_u^{(u+1)/2}. Identity otherwise.
    pub fn normalize_even_conductor(&self) -> CyclotomicInteger {
        if self.m % 4 != 2 {
            return self.clone();
        }
        let u = self.m / 2;
        let shift = (u + 1) / 2;
        let mut poly = vec![BigInt::zero(); u as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = (i as u64 * shift % u) as usize;
            if i % 2 == 0 {
                poly[target] += c;
            } else {
                poly[target] -= c;
            }
        }
        Self::from_poly(u, poly)
    }

    /// Field norm down to Z, as the product over all Galois twists.
    pub fn norm(&self) -> BigInt {
        let mut prod = Self::one(self.m);
        for k in 1..=self.m {
            if num_integer::gcd(k, self.m) == 1 {
                prod = prod.mul(&self.galois_twist(k as i64).unwrap());
            }
        }
        prod.as_int().expect("norm is rational")
    }

    /// Exact division: Some(q) with self = q * d when the quotient exists in
    /// the ring. Uses the adjoint (product of the other conjugates).
    pub fn exact_div(&self, d: &CyclotomicInteger) -> Option<CyclotomicInteger> {
        self.assert_same_ring(d);
        if d.is_zero() {
            return None;
        }
        let mut adj = Self::one(self.m);
        for k in 2..=self.m {
            if num_integer::gcd(k, self.m) == 1 {
                adj = adj.mul(&d.galois_twist(k as i64).unwrap());
            }
        }
        let norm = d.mul(&adj).as_int().expect("norm is rational");
        let num = self.mul(&adj);
        let mut out = Vec::with_capacity(num.coeffs.len());
        for c in &num.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, &norm);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CyclotomicInteger { m: self.m, coeffs: out })
    }

    /// Largest power of the rational prime ell dividing every coordinate,
    /// i.e. the ell-content. None for the zero element.
    pub fn int_content_valuation(&self, ell: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let ell = BigInt::from(ell);
        let mut v = 0u64;
        let mut cur: Vec<BigInt> = self.coeffs.clone();
        'outer: loop {
            let mut next = Vec::with_capacity(cur.len());
            for c in &cur {
                let (q, r) = num_integer::Integer::div_rem(c, &ell);
                if !r.is_zero() {
                    break 'outer;
                }
                next.push(q);
            }
            cur = next;
            v += 1;
        }
        Some(v)
    }
}

impl std::fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "z{}", self.m)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(m: u64, v: i64) -> CyclotomicInteger {
        CyclotomicInteger::from_int(m, v)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        let as_i64 = |m: u64| -> Vec<i64> {
            cyclotomic_polynomial(m).iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]); // x - 1
        assert_eq!(as_i64(2), vec![1, 1]); // x + 1
        assert_eq!(as_i64(4), vec![1, 0, 1]); // x^2 + 1
        assert_eq!(as_i64(6), vec![1, -1, 1]); // x^2 - x + 1
        assert_eq!(as_i64(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = CyclotomicInteger::root_of_unity(1, 4);
        assert_eq!(i.mul(&i), int(4, -1));
        let i2 = CyclotomicInteger::root_of_unity(2, 4);
        assert_eq!(i2, int(4, -1));
    }

    #[test]
    fn nontrivial_fifth_roots_sum_to_minus_one() {
        let mut s = CyclotomicInteger::zero(5);
        for k in 1..=4 {
            s = s.add(&CyclotomicInteger::root_of_unity(k, 5));
        }
        assert_eq!(s, int(5, -1));
    }

    #[test]
    fn conjugation_inverts_roots() {
        let z3 = CyclotomicInteger::root_of_unity(1, 3);
        assert_eq!(z3.conj(), CyclotomicInteger::root_of_unity(2, 3));
        // involutive ring map
        let a = z3.mul_int(&BigInt::from(7)).add(&int(3, 5));
        assert_eq!(a.conj().conj(), a);
        let b = CyclotomicInteger::root_of_unity(2, 3).sub(&int(3, 2));
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn zeta_to_the_m_is_one() {
        for m in [1u64, 2, 3, 4, 5, 6, 8, 12, 15, 30] {
            let z = CyclotomicInteger::root_of_unity(1, m);
            let mut p = CyclotomicInteger::one(m);
            for _ in 0..m {
                p = p.mul(&z);
            }
            assert_eq!(p, CyclotomicInteger::one(m), "m = {m}");
        }
    }

    #[test]
    fn norms_of_one_minus_zeta() {
        // N(1 - zeta_m) for m = 3, 4, 5 is 3, 2, 5
        for (m, expect) in [(3u64, 3i64), (4, 2), (5, 5)] {
            let v = int(m, 1).sub(&CyclotomicInteger::root_of_unity(1, m));
            assert_eq!(v.norm(), BigInt::from(expect), "m = {m}");
        }
    }

    #[test]
    fn even_conductor_normalization() {
        // zeta_6 = -zeta_3^2
        let z6 = CyclotomicInteger::root_of_unity(1, 6).normalize_even_conductor();
        let expect = CyclotomicInteger::root_of_unity(2, 3).neg();
        assert_eq!(z6, expect);
        // normalization is a ring map
        let a = CyclotomicInteger::root_of_unity(1, 6).add(&int(6, 3));
        let b = CyclotomicInteger::root_of_unity(5, 6).sub(&int(6, 1));
        assert_eq!(
            a.mul(&b).normalize_even_conductor(),
            a.normalize_even_conductor().mul(&b.normalize_even_conductor())
        );
    }

    #[test]
    fn lift_and_exact_div() {
        let z3 = CyclotomicInteger::root_of_unity(1, 3);
        let lifted = z3.lift_to_conductor(6).unwrap();
        assert_eq!(lifted, CyclotomicInteger::root_of_unity(2, 6));

        let a = CyclotomicInteger::root_of_unity(1, 5).add(&int(5, 2));
        let b = CyclotomicInteger::root_of_unity(3, 5).sub(&int(5, 4));
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.add(&int(5, 1)).exact_div(&b), None);
        assert!(a.exact_div(&CyclotomicInteger::zero(5)).is_none());
    }

    #[test]
    fn galois_twist_requires_coprime() {
        let z6 = CyclotomicInteger::root_of_unity(1, 6);
        assert!(matches!(z6.galois_twist(2), Err(Error::NotCoprime { .. })));
        assert!(z6.galois_twist(5).is_ok());
    }

    #[test]
    fn ring_axioms_sampled() {
        let mut state = 1u64;
        let mut rnd = move |range: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64).rem_euclid(2 * range + 1) - range
        };
        for m in [3u64, 4, 5, 6, 12] {
            let phi = euler_phi(m) as usize;
            let mut sample = || {
                let coeffs = (0..phi).map(|_| BigInt::from(rnd(9))).collect();
                CyclotomicInteger { m, coeffs }
            };
            for _ in 0..50 {
                let (a, b, c) = (sample(), sample(), sample());
                assert_eq!(a.add(&b).sub(&b), a);
                assert_eq!(a.mul(&CyclotomicInteger::one(m)), a);
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }
        }
    }
}
