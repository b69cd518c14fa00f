//! Reported (finite-precision) Weierstrass data: given an integer polynomial
//! g with invariants (mu, lambda) read off by the valuation rule, produce
//! the distinguished factor of g / ell^mu mod ell^N for human inspection.
//! The exact invariants never depend on this; it exists for reports only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassReport {
    pub ell: u64,
    pub precision: u32,
    pub mu: u64,
    pub lambda: u64,
    /// Monic distinguished polynomial of degree lambda, coefficients mod
    /// ell^N; all non-leading coefficients are divisible by ell.
    pub distinguished: Vec<BigInt>,
}

/// Valuation of an integer at ell; None for zero.
pub fn int_valuation(c: &BigInt, ell: u64) -> Option<u64> {
    if c.is_zero() {
        return None;
    }
    let ell = BigInt::from(ell);
    let mut v = 0u64;
    let mut cur = c.clone();
    loop {
        let (q, r) = cur.div_rem(&ell);
        if !r.is_zero() {
            return Some(v);
        }
        cur = q;
        v += 1;
    }
}

/// (mu, lambda) of a nonzero integer polynomial by the valuation-minimum
/// rule: mu is the least coefficient valuation, lambda the least index
/// attaining it.
pub fn integer_invariants(g: &[BigInt], ell: u64) -> Option<(u64, u64)> {
    let mut mu: Option<u64> = None;
    let mut lambda = 0u64;
    for (i, c) in g.iter().enumerate() {
        if let Some(v) = int_valuation(c, ell) {
            if mu.map_or(true, |m| v < m) {
                mu = Some(v);
                lambda = i as u64;
            }
        }
    }
    mu.map(|m| (m, lambda))
}

/// Splits g = ell^mu * P * U mod (ell^N, T^{deg g + 1}) with P distinguished
/// of degree lambda and U a unit, by linear Hensel steps from the mod-ell
/// factorization g/ell^mu = T^lambda * (unit).
pub fn distinguished_polynomial_mod(
    g: &[BigInt],
    ell: u64,
    precision: u32,
) -> Result<WeierstrassReport> {
    let Some((mu, lambda)) = integer_invariants(g, ell) else {
        return Err(Error::ZeroSeries);
    };
    let lambda_us = lambda as usize;
    let ell_big = BigInt::from(ell);
    let scale = ell_big.pow(mu as u32);
    let reduced: Vec<BigInt> = g
        .iter()
        .map(|c| {
            let (q, r) = c.div_rem(&scale);
            debug_assert!(r.is_zero());
            q
        })
        .collect();
    let modulus = ell_big.pow(precision);
    let d = reduced.len() - 1;
    let trunc = d + 1;
    let norm = |p: &mut Vec<BigInt>| {
        p.truncate(trunc);
        for c in p.iter_mut() {
            *c = c.mod_floor(&modulus);
        }
        while p.len() < trunc {
            p.push(BigInt::zero());
        }
    };
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); trunc];
        for (i, x) in a.iter().enumerate().take(trunc) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if i + j >= trunc {
                    break;
                }
                out[i + j] = (&out[i + j] + x * y).mod_floor(&modulus);
            }
        }
        out
    };

    let mut gg = reduced.clone();
    norm(&mut gg);
    // initial factorization mod ell: P0 = T^lambda, U0 = shifted tail
    let mut p_poly = vec![BigInt::zero(); trunc];
    p_poly[lambda_us] = BigInt::one();
    let mut u_poly = vec![BigInt::zero(); trunc];
    for i in lambda_us..=d {
        u_poly[i - lambda_us] = gg[i].mod_floor(&ell_big);
    }
    // inverse of U mod ell as a power series to degree trunc
    let u0_inv = mod_inverse_scalar(&u_poly[0], &ell_big);
    let mut u_inv_mod_ell = vec![BigInt::zero(); trunc];
    u_inv_mod_ell[0] = u0_inv;
    for k in 1..trunc {
        // coefficient from convolution: sum_{j=1..k} u_j * inv_{k-j} = -u_0 inv_k
        let mut acc = BigInt::zero();
        for j in 1..=k {
            acc += &u_poly[j].mod_floor(&ell_big) * &u_inv_mod_ell[k - j];
        }
        u_inv_mod_ell[k] = (-acc * &u_inv_mod_ell[0]).mod_floor(&ell_big);
    }

    let mut power = ell_big.clone();
    for _ in 1..precision {
        // err = g - P*U, divisible by the current power of ell
        let pu = mul(&p_poly, &u_poly);
        let mut err: Vec<BigInt> = gg
            .iter()
            .zip(&pu)
            .map(|(a, b)| (a - b).mod_floor(&modulus))
            .collect();
        norm(&mut err);
        let e_scaled: Vec<BigInt> = err
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&power);
                debug_assert!(r.is_zero(), "error must vanish to the current precision");
                q.mod_floor(&ell_big)
            })
            .collect();
        // solve dP * U + T^lambda * dU = E  (mod ell, T^trunc)
        let e_uinv = {
            let mut out = vec![BigInt::zero(); trunc];
            for i in 0..trunc {
                if e_scaled[i].is_zero() {
                    continue;
                }
                for j in 0..trunc - i {
                    out[i + j] = (&out[i + j] + &e_scaled[i] * &u_inv_mod_ell[j])
                        .mod_floor(&ell_big);
                }
            }
            out
        };
        let mut dp = vec![BigInt::zero(); trunc];
        dp[..lambda_us].clone_from_slice(&e_uinv[..lambda_us]);
        // dU = shift of (E - dP*U) by lambda
        let dpu = {
            let mut out = vec![BigInt::zero(); trunc];
            for i in 0..lambda_us {
                if dp[i].is_zero() {
                    continue;
                }
                for j in 0..trunc - i {
                    out[i + j] =
                        (&out[i + j] + &dp[i] * &u_poly[j].mod_floor(&ell_big)).mod_floor(&ell_big);
                }
            }
            out
        };
        let mut du = vec![BigInt::zero(); trunc];
        for i in lambda_us..trunc {
            du[i - lambda_us] = (&e_scaled[i] - &dpu[i]).mod_floor(&ell_big);
        }
        for i in 0..lambda_us {
            debug_assert!(
                (&e_scaled[i] - &dpu[i]).mod_floor(&ell_big).is_zero(),
                "low-degree error must be matched by dP"
            );
        }
        for i in 0..trunc {
            p_poly[i] = (&p_poly[i] + &power * &dp[i]).mod_floor(&modulus);
            u_poly[i] = (&u_poly[i] + &power * &du[i]).mod_floor(&modulus);
        }
        power *= &ell_big;
    }

    let mut distinguished = p_poly[..=lambda_us].to_vec();
    distinguished[lambda_us] = BigInt::one();
    Ok(WeierstrassReport { ell, precision, mu, lambda, distinguished })
}

fn mod_inverse_scalar(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "unit coefficient expected");
    e.x.mod_floor(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariants_by_valuation_rule() {
        // -(9T + 18T^2 + 15T^3 + 6T^4 + T^5) / T
        let g = big(&[-9, -18, -15, -6, -1]);
        assert_eq!(integer_invariants(&g, 3), Some((0, 4)));
        assert_eq!(integer_invariants(&g, 5), Some((0, 0)));
        assert_eq!(integer_invariants(&big(&[0, 0]), 7), None);
        assert_eq!(integer_invariants(&big(&[12, 6, 3]), 3), Some((1, 0)));
    }

    #[test]
    fn distinguished_factor_reconstructs_g() {
        let ell = 3u64;
        let precision = 12u32;
        // g = (T^2 + 3T + 3)(1 + T)  -> mu = 0, lambda = 2, distinguished T^2+3T+3
        let g = big(&[3, 6, 4, 1]);
        let report = distinguished_polynomial_mod(&g, ell, precision).unwrap();
        assert_eq!((report.mu, report.lambda), (0, 2));
        assert_eq!(report.distinguished, big(&[3, 3, 1]));

        // verify the defining properties on a less obvious example:
        // g = 2 * (T^3 + 10T + 5) * (3 + T + T^2) at ell = 5
        let dist = big(&[5, 10, 0, 1]);
        let unit = big(&[3, 1, 1]);
        let mut g2 = vec![BigInt::from(0); dist.len() + unit.len() - 1];
        for (i, a) in dist.iter().enumerate() {
            for (j, b) in unit.iter().enumerate() {
                g2[i + j] += a * b * 2;
            }
        }
        let report = distinguished_polynomial_mod(&g2, 5, 10).unwrap();
        assert_eq!((report.mu, report.lambda), (0, 3));
        // 2 is a 5-adic unit so mu = 0; the distinguished factor matches
        assert_eq!(report.distinguished, dist);
        // distinguished shape: monic, lower coefficients divisible by ell
        assert_eq!(report.distinguished.last().unwrap(), &BigInt::from(1));
        for c in &report.distinguished[..3] {
            assert!(int_valuation(c, 5).map_or(true, |v| v >= 1));
        }
    }
}
