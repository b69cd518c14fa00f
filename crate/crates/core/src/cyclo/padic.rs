//! Unramified ell-adic completions of cyclotomic rings at finite precision.
//!
//! A context fixes the prime ell, the normalized conductor m (with
//! m = 2 mod 4 replaced by m/2), a working precision of N ell-adic digits
//! and a Hensel-lifted irreducible factor h of the m-th cyclotomic
//! polynomial mod ell^N. Elements are residues in `Z[x]/(ell^N, h)`; since
//! the completion is unramified, ell itself is the uniformizer and
//! valuations are coefficient minima.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{cyclotomic_polynomial, prime_factors, CyclotomicInteger};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u64),
    /// Every coefficient vanished mod ell^N; the true valuation is >= N.
    AboveN,
}

#[derive(Debug, Clone)]
pub struct PadicCyclotomicContext {
    ell: u64,
    m_input: u64,
    m_norm: u64,
    precision: u32,
    modulus: BigInt,
    /// Hensel-lifted factor, monic of degree f, coefficients in [0, ell^N).
    factor: Vec<BigInt>,
    residue_degree: usize,
}

/// A residue in the completion, a polynomial of degree < f over Z/ell^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicElement {
    pub(crate) poly: Vec<BigInt>,
}

impl PadicElement {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.poly
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn normalize_conductor(m: u64) -> u64 {
    if m % 4 == 2 {
        m / 2
    } else {
        m
    }
}

/// Builds the completion context. The irreducible factor of Phi_m mod ell is
/// chosen canonically (lexicographically least coefficient vector), fixing
/// the embedding once and for all; it is then Hensel-lifted to ell^N.
pub fn padic_context(ell: u64, m: u64, precision: u32) -> Result<PadicCyclotomicContext> {
    if !is_prime(ell) {
        return Err(Error::MalformedSpec(format!("ell = {ell} is not prime")));
    }
    if m == 0 || precision == 0 {
        return Err(Error::MalformedSpec("conductor and precision must be positive".into()));
    }
    let m_norm = normalize_conductor(m);
    if m_norm % ell == 0 && m_norm > 1 {
        return Err(Error::RamifiedUnsupported { ell, m_norm });
    }
    let f = multiplicative_order(ell, m_norm);
    let factor_mod_ell = canonical_factor(ell, m_norm, f);
    let modulus = BigInt::from(ell).pow(precision);
    let factor = hensel_lift(ell, m_norm, &factor_mod_ell, &modulus);
    Ok(PadicCyclotomicContext {
        ell,
        m_input: m,
        m_norm,
        precision,
        modulus,
        factor,
        residue_degree: f,
    })
}

impl PadicCyclotomicContext {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn normalized_conductor(&self) -> u64 {
        self.m_norm
    }

    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    /// Always 1: ramified completions are rejected at construction.
    pub fn ramification_index(&self) -> u32 {
        1
    }

    pub fn factor(&self) -> &[BigInt] {
        &self.factor
    }

    /// Same embedding at doubled precision.
    pub fn escalate(&self) -> Result<PadicCyclotomicContext> {
        padic_context(self.ell, self.m_input, self.precision * 2)
    }

    /// Maps a cyclotomic integer into the completion. The element may live
    /// in any conductor that normalizes into a divisor of m_norm.
    pub fn reduce(&self, a: &CyclotomicInteger) -> Result<PadicElement> {
        let a = a.normalize_even_conductor();
        let a = if a.conductor() == self.m_norm {
            a
        } else if self.m_norm % a.conductor() == 0 {
            a.lift_to_conductor(self.m_norm)?
        } else {
            return Err(Error::ConductorMismatch {
                element_m: a.conductor(),
                context_m: self.m_norm,
            });
        };
        let poly: Vec<BigInt> = a.coeffs().iter().map(|c| c.mod_floor(&self.modulus)).collect();
        let poly = mpoly_rem_monic(&poly, &self.factor, &self.modulus);
        Ok(PadicElement { poly: self.pad(poly) })
    }

    fn pad(&self, mut poly: Vec<BigInt>) -> Vec<BigInt> {
        poly.resize(self.residue_degree.max(1), BigInt::zero());
        poly
    }

    pub fn add(&self, x: &PadicElement, y: &PadicElement) -> PadicElement {
        let poly = x
            .poly
            .iter()
            .zip(&y.poly)
            .map(|(a, b)| (a + b).mod_floor(&self.modulus))
            .collect();
        PadicElement { poly }
    }

    pub fn mul(&self, x: &PadicElement, y: &PadicElement) -> PadicElement {
        let mut prod = vec![BigInt::zero(); 2 * self.residue_degree.max(1)];
        for (i, a) in x.poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.poly.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = (&prod[i + j] + a * b).mod_floor(&self.modulus);
                }
            }
        }
        let poly = mpoly_rem_monic(&prod, &self.factor, &self.modulus);
        PadicElement { poly: self.pad(poly) }
    }

    /// ell-adic valuation as the minimum coefficient valuation, capped at
    /// the working precision.
    pub fn valuation(&self, x: &PadicElement) -> Valuation {
        let ell = BigInt::from(self.ell);
        let mut best: Option<u64> = None;
        for c in &x.poly {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u64;
            let mut cur = c.clone();
            while v < self.precision as u64 {
                let (q, r) = cur.div_rem(&ell);
                if !r.is_zero() {
                    break;
                }
                cur = q;
                v += 1;
            }
            if v < self.precision as u64 {
                best = Some(best.map_or(v, |b| b.min(v)));
            }
        }
        match best {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AboveN,
        }
    }

    /// Image in the residue field, as a polynomial over F_ell.
    pub fn residue(&self, x: &PadicElement) -> Vec<u64> {
        let ell = BigInt::from(self.ell);
        x.poly.iter().map(|c| c.mod_floor(&ell).to_u64().unwrap()).collect()
    }

    pub fn is_residue_zero(&self, x: &PadicElement) -> bool {
        self.residue(x).iter().all(|&c| c == 0)
    }
}

/// Exact valuation of a cyclotomic integer, escalating the context precision
/// until the answer is finite. Returns None for the zero element.
pub fn exact_valuation(
    ctx: &mut PadicCyclotomicContext,
    a: &CyclotomicInteger,
) -> Result<Option<u64>> {
    if a.is_zero() {
        return Ok(None);
    }
    loop {
        let x = ctx.reduce(a)?;
        match ctx.valuation(&x) {
            Valuation::Finite(v) => return Ok(Some(v)),
            Valuation::AboveN => *ctx = ctx.escalate()?,
        }
    }
}

fn multiplicative_order(ell: u64, m: u64) -> usize {
    if m == 1 {
        return 1;
    }
    let mut x = ell % m;
    let mut f = 1usize;
    while x != 1 {
        x = x * ell % m;
        f += 1;
    }
    f
}

// ---- arithmetic in F_ell[y] (coefficients as u64, ascending order) ----

fn fp_trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn fp_mul(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % ell as u128) as u64;
        }
    }
    fp_trim(out)
}

fn fp_sub(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + ell - y) % ell;
    }
    fp_trim(out)
}

fn fp_inv_scalar(a: u64, ell: u64) -> u64 {
    // extended Euclid
    let (mut r0, mut r1) = (ell as i128, (a % ell) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "not invertible");
    t0.rem_euclid(ell as i128) as u64
}

fn fp_divrem(a: &[u64], b: &[u64], ell: u64) -> (Vec<u64>, Vec<u64>) {
    let b = fp_trim(b.to_vec());
    assert!(!b.is_empty());
    let lc_inv = fp_inv_scalar(*b.last().unwrap(), ell);
    let mut rem = fp_trim(a.to_vec());
    let mut quot = vec![0u64; a.len().saturating_sub(b.len()) + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let coef = ((*rem.last().unwrap() as u128 * lc_inv as u128) % ell as u128) as u64;
        quot[shift] = coef;
        for (j, &d) in b.iter().enumerate() {
            let sub = (coef as u128 * d as u128 % ell as u128) as u64;
            rem[shift + j] = (rem[shift + j] + ell - sub) % ell;
        }
        rem = fp_trim(rem);
    }
    (fp_trim(quot), rem)
}

fn fp_gcd(a: &[u64], b: &[u64], ell: u64) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = fp_divrem(&a, &b, ell);
        a = b;
        b = r;
    }
    if let Some(&lc) = a.last() {
        let inv = fp_inv_scalar(lc, ell);
        a = a
            .iter()
            .map(|&c| ((c as u128 * inv as u128) % ell as u128) as u64)
            .collect();
    }
    a
}

/// x^e mod f over F_ell, square-and-multiply over the bits of e.
fn fp_powmod_x(e: &BigUint, f: &[u64], ell: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = fp_divrem(&[0, 1], f, ell).1;
    let mut e = e.clone();
    while !e.is_zero() {
        if (&e % 2u32) == BigUint::one() {
            result = fp_divrem(&fp_mul(&result, &base, ell), f, ell).1;
        }
        base = fp_divrem(&fp_mul(&base, &base, ell), f, ell).1;
        e >>= 1;
    }
    result
}

fn fp_is_irreducible(f: &[u64], ell: u64) -> bool {
    let deg = f.len() - 1;
    let q_full = BigUint::from(ell).pow(deg as u32);
    // x^{ell^deg} == x
    let frob = fp_powmod_x(&q_full, f, ell);
    if fp_trim(fp_sub(&frob, &[0, 1], ell)) != Vec::<u64>::new() {
        return false;
    }
    for t in prime_factors(deg as u64) {
        let q_sub = BigUint::from(ell).pow((deg as u64 / t) as u32);
        let x_pow = fp_powmod_x(&q_sub, f, ell);
        let diff = fp_sub(&x_pow, &[0, 1], ell);
        if diff.is_empty() {
            return false;
        }
        let g = fp_gcd(f, &diff, ell);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Deterministic search for a monic irreducible of given degree over F_ell:
/// candidates are enumerated by counting their lower coefficients in base
/// ell, so the result is reproducible.
fn find_irreducible(ell: u64, degree: usize) -> Vec<u64> {
    if degree == 1 {
        return vec![0, 1]; // y itself
    }
    let mut counter = 0u64;
    loop {
        let mut f = vec![0u64; degree + 1];
        let mut c = counter;
        for coeff in f.iter_mut().take(degree) {
            *coeff = c % ell;
            c /= ell;
        }
        assert!(c == 0, "ran out of candidates, impossible for a finite field");
        f[degree] = 1;
        if fp_is_irreducible(&f, ell) {
            return f;
        }
        counter += 1;
    }
}

// ---- elements of F_{ell^f} = F_ell[y]/(q) ----

fn fe_mul(a: &[u64], b: &[u64], q: &[u64], ell: u64) -> Vec<u64> {
    fp_divrem(&fp_mul(a, b, ell), q, ell).1
}

fn fe_pow(a: &[u64], e: &BigUint, q: &[u64], ell: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = a.to_vec();
    let mut e = e.clone();
    while !e.is_zero() {
        if (&e % 2u32) == BigUint::one() {
            result = fe_mul(&result, &base, q, ell);
        }
        base = fe_mul(&base, &base, q, ell);
        e >>= 1;
    }
    result
}

/// An element of exact multiplicative order m in F_{ell^f}, found by powering
/// deterministically enumerated candidates to the cofactor.
fn find_root_of_unity(ell: u64, q: &[u64], m: u64) -> Vec<u64> {
    let f = q.len() - 1;
    let group_order = BigUint::from(ell).pow(f as u32) - BigUint::one();
    let cofactor = &group_order / BigUint::from(m);
    assert!((&cofactor * BigUint::from(m)) == group_order, "m must divide ell^f - 1");
    let mut counter = 1u64;
    loop {
        let mut cand = Vec::new();
        let mut c = counter;
        while c > 0 {
            cand.push(c % ell);
            c /= ell;
        }
        counter += 1;
        if fp_trim(cand.clone()).is_empty() {
            continue;
        }
        let omega = fe_pow(&cand, &cofactor, q, ell);
        if omega == vec![1] && m > 1 {
            continue;
        }
        let order_ok = prime_factors(m).iter().all(|&t| {
            fe_pow(&omega, &BigUint::from(m / t), q, ell) != vec![1]
        });
        if order_ok {
            return omega;
        }
    }
}

/// All monic irreducible factors of Phi_m mod ell (unramified case), each of
/// degree f, returned as coefficient vectors over F_ell; the canonical factor
/// is the lexicographically least one.
fn canonical_factor(ell: u64, m: u64, f: usize) -> Vec<u64> {
    let phi_int: Vec<u64> = {
        let phi = cyclotomic_polynomial(m);
        let ell_big = BigInt::from(ell);
        phi.iter().map(|c| c.mod_floor(&ell_big).to_u64().unwrap()).collect()
    };
    if m == 1 {
        return fp_trim(phi_int); // y - 1
    }
    let q = find_irreducible(ell, f);
    let omega = find_root_of_unity(ell, &q, m);
    // orbits of multiplication by ell on the primitive residues mod m
    let mut seen = vec![false; m as usize];
    let mut factors: Vec<Vec<u64>> = Vec::new();
    for j in 1..m {
        if num_integer::gcd(j, m) != 1 || seen[j as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut u = j;
        loop {
            seen[u as usize] = true;
            orbit.push(u);
            u = u * ell % m;
            if u == j {
                break;
            }
        }
        assert_eq!(orbit.len(), f, "orbit size equals the residue degree");
        // product of (x - omega^u) over the orbit, in F_{ell^f}[x]
        let fe_add = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; a.len().max(b.len())];
            for (i, o) in out.iter_mut().enumerate() {
                *o = (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % ell;
            }
            fp_trim(out)
        };
        let mut poly: Vec<Vec<u64>> = vec![vec![1]];
        for &u in &orbit {
            let root = fe_pow(&omega, &BigUint::from(u), &q, ell);
            let neg_root: Vec<u64> = root.iter().map(|&c| (ell - c) % ell).collect();
            let mut next: Vec<Vec<u64>> = vec![vec![]; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = fe_add(&next[i + 1], c);
                next[i] = fe_add(&next[i], &fe_mul(c, &neg_root, &q, ell));
            }
            poly = next;
        }
        let coeffs: Vec<u64> = poly
            .iter()
            .map(|c| {
                let c = fp_trim(c.clone());
                assert!(c.len() <= 1, "factor coefficients must descend to F_ell");
                c.first().copied().unwrap_or(0)
            })
            .collect();
        factors.push(coeffs);
    }
    // sanity: the factors multiply back to Phi mod ell
    let mut prod = vec![1u64];
    for fac in &factors {
        prod = fp_mul(&prod, fac, ell);
    }
    assert_eq!(fp_trim(prod), fp_trim(phi_int), "factor product must equal Phi mod ell");
    factors.sort();
    factors.into_iter().next().expect("at least one factor")
}

// ---- polynomials over Z/M (BigInt coefficients in [0, M)) ----

fn mpoly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn mpoly_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = (&out[i + j] + x * y).mod_floor(m);
            }
        }
    }
    mpoly_trim(out)
}

fn mpoly_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *o = (x + y).mod_floor(m);
    }
    mpoly_trim(out)
}

fn mpoly_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *o = (x - y).mod_floor(m);
    }
    mpoly_trim(out)
}

/// Division with remainder by a monic divisor over Z/M.
fn mpoly_divrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = mpoly_trim(d.to_vec());
    assert!(d.last().map_or(false, |c| c.is_one()), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    rem = mpoly_trim(rem);
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(d.len()) + 1];
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let coef = rem.last().unwrap().clone();
        quot[shift] = coef.clone();
        for (j, dc) in d.iter().enumerate() {
            rem[shift + j] = (&rem[shift + j] - &coef * dc).mod_floor(m);
        }
        rem = mpoly_trim(rem);
    }
    (mpoly_trim(quot), rem)
}

pub(crate) fn mpoly_rem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    mpoly_divrem_monic(a, d, m).1
}

/// Hensel-lifts the chosen factor of Phi_m from mod ell to mod ell^N,
/// doubling the modulus each round and maintaining Bezout cofactors.
fn hensel_lift(ell: u64, m: u64, factor_mod_ell: &[u64], target: &BigInt) -> Vec<BigInt> {
    let phi = cyclotomic_polynomial(m);
    let ell_big = BigInt::from(ell);
    let to_big = |p: &[u64]| -> Vec<BigInt> { p.iter().map(|&c| BigInt::from(c)).collect() };

    let mut h = to_big(factor_mod_ell);
    if mpoly_trim(mpoly_sub(&phi, &h, &ell_big)).is_empty() {
        // Phi itself is irreducible mod ell: nothing to lift, reduce directly.
        let mut out: Vec<BigInt> = phi.iter().map(|c| c.mod_floor(target)).collect();
        out = mpoly_trim(out);
        return out;
    }

    // cofactor and Bezout data mod ell
    let phi_mod: Vec<u64> = phi
        .iter()
        .map(|c| c.mod_floor(&ell_big).to_u64().unwrap())
        .collect();
    let (g0, r0) = fp_divrem(&phi_mod, factor_mod_ell, ell);
    assert!(r0.is_empty(), "chosen factor must divide Phi mod ell");
    // extended Euclid over F_ell: s*g + t*h = 1
    let (mut r_prev, mut r_cur) = (fp_trim(g0.clone()), fp_trim(factor_mod_ell.to_vec()));
    let (mut s_prev, mut s_cur): (Vec<u64>, Vec<u64>) = (vec![1], vec![]);
    let (mut t_prev, mut t_cur): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r_cur.is_empty() {
        let (q, r) = fp_divrem(&r_prev, &r_cur, ell);
        let s_next = fp_sub(&s_prev, &fp_mul(&q, &s_cur, ell), ell);
        let t_next = fp_sub(&t_prev, &fp_mul(&q, &t_cur, ell), ell);
        (r_prev, r_cur) = (r_cur, r);
        (s_prev, s_cur) = (s_cur, s_next);
        (t_prev, t_cur) = (t_cur, t_next);
    }
    assert_eq!(r_prev.len(), 1, "factor and cofactor must be coprime mod ell");
    let scale = fp_inv_scalar(r_prev[0], ell);
    let scale_poly = |p: &[u64]| -> Vec<u64> {
        p.iter().map(|&c| ((c as u128 * scale as u128) % ell as u128) as u64).collect()
    };
    let mut g = to_big(&g0);
    let mut s = to_big(&scale_poly(&s_prev));
    let mut t = to_big(&scale_poly(&t_prev));

    let mut modulus = ell_big.clone();
    while modulus < *target {
        // classic Hensel step: f = g*h mod m lifts to mod m^2
        let m2 = &modulus * &modulus;
        let f_red: Vec<BigInt> = phi.iter().map(|c| c.mod_floor(&m2)).collect();
        let e = mpoly_sub(&f_red, &mpoly_mul(&g, &h, &m2), &m2);
        let (q, r) = mpoly_divrem_monic(&mpoly_mul(&s, &e, &m2), &h, &m2);
        let g_new = mpoly_add(&mpoly_add(&g, &mpoly_mul(&t, &e, &m2), &m2), &mpoly_mul(&q, &g, &m2), &m2);
        let h_new = mpoly_add(&h, &r, &m2);
        let b = mpoly_sub(
            &mpoly_add(&mpoly_mul(&s, &g_new, &m2), &mpoly_mul(&t, &h_new, &m2), &m2),
            &[BigInt::one()],
            &m2,
        );
        let (c, d) = mpoly_divrem_monic(&mpoly_mul(&s, &b, &m2), &h_new, &m2);
        s = mpoly_sub(&s, &d, &m2);
        t = mpoly_sub(
            &mpoly_sub(&t, &mpoly_mul(&t, &b, &m2), &m2),
            &mpoly_mul(&c, &g_new, &m2),
            &m2,
        );
        g = g_new;
        h = h_new;
        modulus = m2;
    }

    let mut out: Vec<BigInt> = h.iter().map(|c| c.mod_floor(target)).collect();
    out = mpoly_trim(out);
    // sanity: the lifted factor still divides Phi at full precision
    let phi_red: Vec<BigInt> = phi.iter().map(|c| c.mod_floor(target)).collect();
    let rem = mpoly_rem_monic(&phi_red, &out, target);
    assert!(rem.is_empty(), "Hensel lift must divide Phi mod ell^N");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_construction_examples() {
        let ctx = padic_context(2, 3, 16).unwrap();
        assert_eq!(ctx.residue_degree(), 2);
        // factor mod 2 is x^2 + x + 1
        let two = BigInt::from(2);
        let mod2: Vec<u64> = ctx.factor().iter().map(|c| c.mod_floor(&two).to_u64().unwrap()).collect();
        assert_eq!(mod2, vec![1, 1, 1]);

        // m = 6 normalizes to m = 3 and gives the same context
        let ctx6 = padic_context(2, 6, 16).unwrap();
        assert_eq!(ctx6.normalized_conductor(), 3);
        assert_eq!(ctx6.factor(), ctx.factor());

        assert!(matches!(padic_context(3, 3, 16), Err(Error::RamifiedUnsupported { .. })));
        assert!(matches!(padic_context(4, 5, 16), Err(Error::MalformedSpec(_))));
    }

    #[test]
    fn valuations_in_z_zeta3_at_2() {
        let ctx = padic_context(2, 3, 16).unwrap();
        let z = CyclotomicInteger::root_of_unity(1, 3);
        let three = CyclotomicInteger::from_int(3, 3);

        let x = ctx.reduce(&three).unwrap();
        assert_eq!(ctx.valuation(&x), Valuation::Finite(0));

        let one_minus_z = CyclotomicInteger::one(3).sub(&z);
        let x = ctx.reduce(&one_minus_z).unwrap();
        assert_eq!(ctx.valuation(&x), Valuation::Finite(0));
        assert!(!ctx.is_residue_zero(&x));

        let two_z = z.mul_int(&BigInt::from(2));
        let x = ctx.reduce(&two_z).unwrap();
        assert_eq!(ctx.valuation(&x), Valuation::Finite(1));

        let zero = CyclotomicInteger::zero(3);
        assert_eq!(ctx.valuation(&ctx.reduce(&zero).unwrap()), Valuation::AboveN);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let ctx = padic_context(2, 3, 32).unwrap();
        let mut state = 7u64;
        let mut rnd = move |range: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64).rem_euclid(2 * range + 1) - range
        };
        for _ in 0..1000 {
            let sample = |rnd: &mut dyn FnMut(i64) -> i64| {
                let c0 = BigInt::from(rnd(1000));
                let c1 = BigInt::from(rnd(1000));
                let z = CyclotomicInteger::root_of_unity(1, 3).mul_int(&c1);
                CyclotomicInteger::from_int(3, c0).add(&z)
            };
            let a = sample(&mut rnd);
            let b = sample(&mut rnd);
            let lhs_add = ctx.reduce(&a.add(&b)).unwrap();
            let rhs_add = ctx.add(&ctx.reduce(&a).unwrap(), &ctx.reduce(&b).unwrap());
            assert_eq!(lhs_add, rhs_add);
            let lhs_mul = ctx.reduce(&a.mul(&b)).unwrap();
            let rhs_mul = ctx.mul(&ctx.reduce(&a).unwrap(), &ctx.reduce(&b).unwrap());
            assert_eq!(lhs_mul, rhs_mul);
        }
    }

    #[test]
    fn ultrametric_inequality() {
        let mut ctx = padic_context(2, 5, 16).unwrap();
        let mut state = 99u64;
        let mut rnd = move |range: i64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64).rem_euclid(2 * range + 1) - range
        };
        for _ in 0..300 {
            let sample = |rnd: &mut dyn FnMut(i64) -> i64| {
                let mut acc = CyclotomicInteger::from_int(5, rnd(64));
                for k in 1..4 {
                    acc = acc.add(
                        &CyclotomicInteger::root_of_unity(k, 5).mul_int(&BigInt::from(rnd(64))),
                    );
                }
                acc
            };
            let a = sample(&mut rnd);
            let b = sample(&mut rnd);
            let sum = a.add(&b);
            let (va, vb) = (
                exact_valuation(&mut ctx, &a).unwrap(),
                exact_valuation(&mut ctx, &b).unwrap(),
            );
            let vs = exact_valuation(&mut ctx, &sum).unwrap();
            match (va, vb) {
                (Some(va), Some(vb)) => {
                    match vs {
                        Some(vs) => assert!(vs >= va.min(vb)),
                        None => {} // sum can vanish exactly
                    }
                    if va != vb {
                        assert_eq!(vs, Some(va.min(vb)));
                    }
                }
                (None, _) => assert_eq!(vs, vb),
                (_, None) => assert_eq!(vs, va),
            }
        }
    }

    #[test]
    fn escalation_is_consistent() {
        let ctx16 = padic_context(2, 15, 16).unwrap();
        let ctx32 = ctx16.escalate().unwrap();
        assert_eq!(ctx32.precision(), 32);
        assert_eq!(ctx16.residue_degree(), 4); // order of 2 mod 15
        let two = BigInt::from(2);
        let f16: Vec<BigInt> = ctx16.factor().iter().map(|c| c.mod_floor(&two)).collect();
        let f32: Vec<BigInt> = ctx32.factor().iter().map(|c| c.mod_floor(&two)).collect();
        assert_eq!(f16, f32, "escalated context keeps the same embedding");

        let a = CyclotomicInteger::root_of_unity(7, 15)
            .mul_int(&BigInt::from(12))
            .add(&CyclotomicInteger::from_int(15, 40));
        let v16 = ctx16.valuation(&ctx16.reduce(&a).unwrap());
        let v32 = ctx32.valuation(&ctx32.reduce(&a).unwrap());
        assert_eq!(v16, v32);
    }

    #[test]
    fn trivial_conductors() {
        // m = 2 normalizes to 1: the context is plain Z_ell
        let ctx = padic_context(2, 2, 8).unwrap();
        assert_eq!(ctx.normalized_conductor(), 1);
        assert_eq!(ctx.residue_degree(), 1);
        let a = CyclotomicInteger::root_of_unity(1, 2); // -1
        let x = ctx.reduce(&a).unwrap();
        assert_eq!(ctx.valuation(&x), Valuation::Finite(0));
        let twelve = CyclotomicInteger::from_int(1, 12);
        assert_eq!(ctx.valuation(&ctx.reduce(&twelve).unwrap()), Valuation::Finite(2));
    }
}
