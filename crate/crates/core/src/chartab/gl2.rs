//! The two families of GL_2(F_q) characters computed directly from their
//! defining formulas: the projective-line permutation character minus the
//! trivial one, and principal series induced from the upper-triangular
//! Borel subgroup. Both are located inside the Dixon table as a
//! cross-check, so a bug in either construction surfaces as a mismatch.

use num_bigint::BigInt;

use crate::cyclo::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::groups::{gl2_matrices, FiniteGroup, SmallField};

fn catalog_q(q: usize) -> Result<()> {
    if [2, 3, 4, 5].contains(&q) {
        Ok(())
    } else {
        Err(Error::CatalogBoundExceeded(format!("gl2:{q} is outside the catalog")))
    }
}

/// Projective line over F_q as normalized representatives [x : 1] and [1 : 0].
fn projective_points(f: &SmallField) -> Vec<(usize, usize)> {
    let mut pts: Vec<(usize, usize)> = (0..f.q).map(|x| (x, 1)).collect();
    pts.push((1, 0));
    pts
}

fn normalize(f: &SmallField, (x, y): (usize, usize)) -> (usize, usize) {
    if y != 0 {
        (f.mul(x, f.inv(y)), 1)
    } else {
        (1, 0)
    }
}

fn apply(f: &SmallField, m: &[usize; 4], (x, y): (usize, usize)) -> (usize, usize) {
    let nx = f.add(f.mul(m[0], x), f.mul(m[1], y));
    let ny = f.add(f.mul(m[2], x), f.mul(m[3], y));
    normalize(f, (nx, ny))
}

/// The q-dimensional complement of the trivial character inside the
/// permutation character on P^1(F_q): value = fixed points - 1, per
/// conjugacy class of the catalog gl2:q group.
pub fn permutation_character_p1(group: &FiniteGroup, q: usize) -> Result<Vec<CyclotomicInteger>> {
    catalog_q(q)?;
    let (f, mats) = gl2_matrices(q);
    let conj = group.conjugacy();
    let m = conj.exponent;
    let pts = projective_points(&f);
    let mut out = Vec::with_capacity(conj.class_count());
    for &rep in &conj.reps {
        let mat = mats[rep];
        let fixed = pts.iter().filter(|&&p| apply(&f, &mat, p) == p).count() as i64;
        out.push(CyclotomicInteger::from_int(m, fixed - 1));
    }
    Ok(out)
}

/// Character of the induced representation of alpha (x) beta from the Borel
/// subgroup of upper-triangular matrices, where alpha and beta are the
/// power characters of F_q^x with the given exponents. Irreducible exactly
/// when alpha != beta; the equal case is refused.
pub fn principal_series_character(
    group: &FiniteGroup,
    q: usize,
    alpha_power: u64,
    beta_power: u64,
) -> Result<Vec<CyclotomicInteger>> {
    catalog_q(q)?;
    let order_fx = (q - 1) as u64;
    if alpha_power % order_fx == beta_power % order_fx {
        return Err(Error::EqualCharactersNotIrreducible);
    }
    let (f, mats) = gl2_matrices(q);
    let conj = group.conjugacy();
    let m = conj.exponent;
    assert_eq!(m % order_fx, 0, "exponent is divisible by q - 1");
    let step = (m / order_fx) as i64;
    // value of alpha (x) beta on an upper-triangular [a, b; 0, c]
    let borel_value = |mat: &[usize; 4]| -> Option<CyclotomicInteger> {
        if mat[2] != 0 {
            return None;
        }
        let e = alpha_power as i64 * f.dlog(mat[0]) as i64
            + beta_power as i64 * f.dlog(mat[3]) as i64;
        Some(CyclotomicInteger::root_of_unity(e * step, m))
    };
    let borel_order = BigInt::from(((q - 1) * (q - 1) * q) as i64);
    let n = group.order();
    let mut out = Vec::with_capacity(conj.class_count());
    for &rep in &conj.reps {
        let mut acc = CyclotomicInteger::zero(m);
        for x in 0..n {
            let conjugated = group.conjugate(rep, x);
            if let Some(v) = borel_value(&mats[conjugated]) {
                acc = acc.add(&v);
            }
        }
        let value = acc.exact_div(&CyclotomicInteger::from_int(m, borel_order.clone()))
            .ok_or_else(|| {
                Error::Internal("induced character sum must be divisible by |B|".into())
            })?;
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::character_table;
    use crate::groups::build_group;

    #[test]
    fn p1_character_values_q4() {
        let g = build_group("gl2:4").unwrap();
        let row = permutation_character_p1(&g, 4).unwrap();
        let conj = g.conjugacy();
        let m = conj.exponent;
        // identity class value is q = 4
        assert_eq!(row[0], CyclotomicInteger::from_int(m, 4));
        // scalars fix everything: value q on every central class
        let (_, mats) = gl2_matrices(4);
        for (c, &rep) in conj.reps.iter().enumerate() {
            let mat = mats[rep];
            if mat[1] == 0 && mat[2] == 0 && mat[0] == mat[3] {
                assert_eq!(row[c], CyclotomicInteger::from_int(m, 4), "scalar class {c}");
            }
        }
        // diag(a, 1) with a != 1 fixes exactly [1:0] and [0:1]
        let diag = (0..g.order())
            .map(|i| (i, mats[i]))
            .find(|&(_, m)| m[1] == 0 && m[2] == 0 && m[3] == 1 && m[0] == 2)
            .map(|(i, _)| i)
            .unwrap();
        let class = conj.class_of[diag];
        assert_eq!(row[class], CyclotomicInteger::from_int(m, 1));
    }

    #[test]
    fn special_rows_occur_in_the_dixon_table() {
        let g = build_group("gl2:4").unwrap();
        let table = character_table(&g).unwrap();

        let p1 = permutation_character_p1(&g, 4).unwrap();
        let at = table.find_row(&p1).expect("P^1 character must be a table row");
        assert_eq!(table.degrees[at], 4);

        for (a, b) in [(1u64, 0u64), (2, 0), (2, 1)] {
            let ps = principal_series_character(&g, 4, a, b).unwrap();
            let at = table.find_row(&ps).expect("principal series must be a table row");
            assert_eq!(table.degrees[at], 5, "alpha={a} beta={b}");
        }
    }

    #[test]
    fn principal_series_scalar_values() {
        let g = build_group("gl2:4").unwrap();
        let conj = g.conjugacy();
        let m = conj.exponent;
        let ps = principal_series_character(&g, 4, 1, 0).unwrap();
        // degree q + 1 = 5 at the identity
        assert_eq!(ps[0], CyclotomicInteger::from_int(m, 5));
        // on a * Id: (q+1) alpha(a) beta(a)
        let (f, mats) = gl2_matrices(4);
        for (c, &rep) in conj.reps.iter().enumerate() {
            let mat = mats[rep];
            if mat[1] == 0 && mat[2] == 0 && mat[0] == mat[3] && mat[0] != 0 {
                let a = mat[0];
                let expect = CyclotomicInteger::root_of_unity(
                    f.dlog(a) as i64 * (m / 3) as i64,
                    m,
                )
                .mul_int(&BigInt::from(5));
                assert_eq!(ps[c], expect, "scalar a = {a}");
            }
        }
    }

    #[test]
    fn equal_characters_are_refused() {
        let g = build_group("gl2:4").unwrap();
        assert!(matches!(
            principal_series_character(&g, 4, 1, 1),
            Err(Error::EqualCharactersNotIrreducible)
        ));
        assert!(matches!(
            principal_series_character(&g, 4, 0, 3),
            Err(Error::EqualCharactersNotIrreducible)
        ));
    }
}
