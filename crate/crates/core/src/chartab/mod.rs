//! Exact irreducible character tables via the Burnside-Dixon method:
//! simultaneous diagonalization of the class-sum matrices over a prime
//! field F_p with p = 1 mod exponent, followed by a discrete-Fourier lift
//! of each value into the cyclotomic integers of the exponent.

mod gl2;

pub use gl2::{permutation_character_p1, principal_series_character};

use num_bigint::BigInt;

use crate::cyclo::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

/// Bounds keeping the Dixon search desk-scale.
const MAX_GROUP_ORDER: usize = 512;
const MAX_CLASSES: usize = 64;

#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// Group exponent: all values lie in `Z[zeta_m]`.
    pub m: u64,
    /// Row degrees chi(1); row 0 is the trivial character.
    pub degrees: Vec<u64>,
    /// `rows[r][c]` = value of character r on conjugacy class c.
    pub rows: Vec<Vec<CyclotomicInteger>>,
    pub class_reps: Vec<usize>,
    pub class_sizes: Vec<usize>,
}

impl CharacterTable {
    pub fn n_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Index of the row with the given exact values, if present.
    pub fn find_row(&self, values: &[CyclotomicInteger]) -> Option<usize> {
        self.rows.iter().position(|r| r == values)
    }
}

/// Class-sum structure constants: `C_i * C_j = sum_k a[i][j][k] C_k` in the
/// group ring.
pub fn class_multiplication_coefficients(group: &FiniteGroup) -> Vec<Vec<Vec<u64>>> {
    let conj = group.conjugacy();
    let s = conj.class_count();
    let mut a = vec![vec![vec![0u64; s]; s]; s];
    for i in 0..s {
        for j in 0..s {
            let mut tally = vec![0u64; group.order()];
            for &x in &conj.classes[i] {
                for &y in &conj.classes[j] {
                    tally[group.mul(x, y)] += 1;
                }
            }
            for k in 0..s {
                a[i][j][k] = tally[conj.reps[k]];
            }
        }
    }
    a
}

/// Smallest prime p = 1 mod m with p > 2 sqrt(n), i.e. p^2 > 4n.
fn dixon_prime(n: usize, m: u64) -> u64 {
    let mut p = m + 1;
    loop {
        if p * p > 4 * n as u64 && crate::cyclo::padic::is_prime(p) && p % m == 1 {
            return p;
        }
        p += m.max(1);
    }
}

/// Largest d with d^2 <= n.
fn integer_sqrt(n: u64) -> u64 {
    let mut d = 0u64;
    while (d + 1) * (d + 1) <= n {
        d += 1;
    }
    d
}

/// Computes the full irreducible character table.
pub fn character_table(group: &FiniteGroup) -> Result<CharacterTable> {
    let n = group.order();
    let conj = group.conjugacy();
    let s = conj.class_count();
    if n > MAX_GROUP_ORDER || s > MAX_CLASSES {
        return Err(Error::CatalogBoundExceeded(format!(
            "character table for order {n} with {s} classes exceeds the Dixon bounds"
        )));
    }
    let m = conj.exponent;
    let p = dixon_prime(n, m);
    let a = class_multiplication_coefficients(group);
    let sizes: Vec<u64> = conj.classes.iter().map(|c| c.len() as u64).collect();

    // simultaneous eigenvectors of the class matrices over F_p
    let mut subspaces: Vec<Vec<Vec<u64>>> = vec![identity_basis(s)];
    for i in 1..s {
        let matrix: Vec<Vec<u64>> = (0..s)
            .map(|j| (0..s).map(|k| a[i][j][k] % p).collect())
            .collect();
        let mut next = Vec::new();
        for basis in subspaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            for piece in split_invariant_subspace(&matrix, &basis, p) {
                next.push(piece);
            }
        }
        subspaces = next;
    }
    if subspaces.len() != s || subspaces.iter().any(|b| b.len() != 1) {
        return Err(Error::Internal(
            "class matrices failed to split into one-dimensional common eigenspaces".into(),
        ));
    }

    // normalize eigenvectors into central characters and recover degrees
    let inv_sizes: Vec<u64> = sizes.iter().map(|&h| modpow(h % p, p - 2, p)).collect();
    let inv_class: Vec<usize> = conj.inverse_class.clone();
    let sqrt_bound = integer_sqrt(n as u64);
    let mut raw_rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(s); // (degree, chi mod p per class)
    for basis in &subspaces {
        let w = &basis[0];
        if w[0] == 0 {
            return Err(Error::Internal("central character vanishes on the identity class".into()));
        }
        let scale = modpow(w[0], p - 2, p);
        let omega: Vec<u64> = w.iter().map(|&x| mulmod(x, scale, p)).collect();
        // sum_k omega_k omega_{k*} / h_k = n / chi(1)^2
        let mut sum = 0u64;
        for k in 0..s {
            sum = (sum + mulmod(mulmod(omega[k], omega[inv_class[k]], p), inv_sizes[k], p)) % p;
        }
        if sum == 0 {
            return Err(Error::Internal("degree normalization sum vanished mod p".into()));
        }
        let d_squared = mulmod(n as u64 % p, modpow(sum, p - 2, p), p);
        let degree = (1..=sqrt_bound)
            .find(|&d| mulmod(d % p, d % p, p) == d_squared)
            .ok_or_else(|| Error::Internal("no integer degree matches mod p".into()))?;
        let chi: Vec<u64> = (0..s)
            .map(|k| mulmod(mulmod(omega[k], degree % p, p), inv_sizes[k], p))
            .collect();
        raw_rows.push((degree, chi));
    }

    let degree_sum: u64 = raw_rows.iter().map(|(d, _)| d * d).sum();
    if degree_sum != n as u64 {
        return Err(Error::Internal(format!(
            "degrees fail sum of squares: {degree_sum} != {n}"
        )));
    }

    // lift each value to Z[zeta_m] by the discrete Fourier transform over
    // the cyclic group generated by each class representative
    let z = primitive_root_of_order(p, m);
    let mut rows: Vec<(u64, Vec<CyclotomicInteger>)> = Vec::with_capacity(s);
    for (degree, chi) in &raw_rows {
        let mut values = Vec::with_capacity(s);
        for k in 0..s {
            values.push(lift_value(group, k, chi, *degree, p, m, z)?);
        }
        rows.push((*degree, values));
    }

    // deterministic order: trivial character first, then by degree and by
    // serialized values
    let key = |row: &(u64, Vec<CyclotomicInteger>)| -> (u64, Vec<Vec<BigInt>>) {
        (row.0, row.1.iter().map(|v| v.coeffs().to_vec()).collect())
    };
    let one = CyclotomicInteger::one(m);
    rows.sort_by(|a, b| {
        let triv_a = a.0 == 1 && a.1.iter().all(|v| *v == one);
        let triv_b = b.0 == 1 && b.1.iter().all(|v| *v == one);
        triv_b.cmp(&triv_a).then_with(|| key(a).cmp(&key(b)))
    });

    let table = CharacterTable {
        m,
        degrees: rows.iter().map(|(d, _)| *d).collect(),
        rows: rows.into_iter().map(|(_, v)| v).collect(),
        class_reps: conj.reps.clone(),
        class_sizes: conj.classes.iter().map(|c| c.len()).collect(),
    };
    verify_table(group, &table)?;
    Ok(table)
}

/// Exact orthogonality and degree checks; any failure is a bug in the
/// computation, not in the input.
fn verify_table(group: &FiniteGroup, table: &CharacterTable) -> Result<()> {
    let n = BigInt::from(group.order() as i64);
    let s = table.n_classes();
    for i in 0..s {
        if group.order() as u64 % table.degrees[i] != 0 {
            return Err(Error::Internal(format!(
                "degree {} does not divide the group order",
                table.degrees[i]
            )));
        }
        for j in i..s {
            let mut acc = CyclotomicInteger::zero(table.m);
            for c in 0..s {
                let term = table.rows[i][c]
                    .mul(&table.rows[j][c].conj())
                    .mul_int(&BigInt::from(table.class_sizes[c] as i64));
                acc = acc.add(&term);
            }
            let expect = if i == j { n.clone() } else { BigInt::from(0) };
            if acc.as_int() != Some(expect) {
                return Err(Error::Internal(format!(
                    "row orthogonality fails between rows {i} and {j}"
                )));
            }
        }
    }
    Ok(())
}

fn lift_value(
    group: &FiniteGroup,
    class: usize,
    chi_mod_p: &[u64],
    degree: u64,
    p: u64,
    m: u64,
    z: u64,
) -> Result<CyclotomicInteger> {
    let conj = group.conjugacy();
    let rep = conj.reps[class];
    let e = conj.element_orders[rep];
    // chi(g) = sum_u n_u zeta_e^u with n_u = (1/e) sum_t chi(g^t) zeta_e^{-ut}
    let ze = modpow(z, m / e, p); // zeta_e as an element of F_p
    let ze_inv = modpow(ze, p - 2, p);
    let inv_e = modpow(e % p, p - 2, p);
    // classes of powers of the representative
    let mut power_class = Vec::with_capacity(e as usize);
    let mut x = group.identity();
    for _ in 0..e {
        power_class.push(conj.class_of[x]);
        x = group.mul(x, rep);
    }
    let mut total = 0u64;
    let mut poly = vec![BigInt::from(0); m as usize];
    for u in 0..e {
        let mut acc = 0u64;
        let zeu = modpow(ze_inv, u, p);
        let mut zeut = 1u64;
        for t in 0..e {
            acc = (acc + mulmod(chi_mod_p[power_class[t as usize]], zeut, p)) % p;
            zeut = mulmod(zeut, zeu, p);
        }
        let mult = mulmod(acc, inv_e, p);
        if mult > degree {
            return Err(Error::Internal(format!(
                "eigenvalue multiplicity {mult} exceeds the degree {degree}"
            )));
        }
        total += mult;
        if mult > 0 {
            poly[((m / e) * u) as usize] += BigInt::from(mult);
        }
    }
    if total != degree {
        return Err(Error::Internal(format!(
            "eigenvalue multiplicities sum to {total}, expected {degree}"
        )));
    }
    Ok(CyclotomicInteger::from_poly(m, poly))
}

/// Smallest integer of multiplicative order exactly m mod p (requires
/// m | p - 1).
fn primitive_root_of_order(p: u64, m: u64) -> u64 {
    assert_eq!((p - 1) % m, 0);
    let cof = (p - 1) / m;
    let mfactors = crate::cyclo::prime_factors(m);
    'cand: for g in 2..p {
        let z = modpow(g, cof, p);
        if z == 1 && m > 1 {
            continue;
        }
        for &t in &mfactors {
            if modpow(z, m / t, p) == 1 {
                continue 'cand;
            }
        }
        return z;
    }
    unreachable!("F_p^x is cyclic, an element of order m exists")
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn identity_basis(s: usize) -> Vec<Vec<u64>> {
    (0..s)
        .map(|i| {
            let mut v = vec![0u64; s];
            v[i] = 1;
            v
        })
        .collect()
}

/// Splits an invariant subspace into the eigenspaces of the action of
/// `matrix` on it. Returns the pieces in ascending eigenvalue order.
fn split_invariant_subspace(
    matrix: &[Vec<u64>],
    basis: &[Vec<u64>],
    p: u64,
) -> Vec<Vec<Vec<u64>>> {
    let d = basis.len();
    // restriction R: columns are coordinates of matrix * b_c in the basis
    let images: Vec<Vec<u64>> = basis.iter().map(|b| mat_vec(matrix, b, p)).collect();
    let coords = in_basis_coordinates(basis, &images, p);
    let mut restriction = vec![vec![0u64; d]; d];
    for (c, coord) in coords.iter().enumerate() {
        for r in 0..d {
            restriction[r][c] = coord[r];
        }
    }
    let charpoly = characteristic_polynomial(&restriction, p);
    let mut out = Vec::new();
    for lambda in 0..p {
        // Horner
        let mut v = 0u64;
        for c in charpoly.iter().rev() {
            v = (mulmod(v, lambda, p) + c) % p;
        }
        if v != 0 {
            continue;
        }
        let mut shifted = restriction.clone();
        for i in 0..d {
            shifted[i][i] = (shifted[i][i] + p - lambda) % p;
        }
        let kernel = kernel_basis(&shifted, p);
        if kernel.is_empty() {
            continue;
        }
        let piece: Vec<Vec<u64>> = kernel
            .iter()
            .map(|coeffs| {
                let mut v = vec![0u64; basis[0].len()];
                for (c, &co) in coeffs.iter().enumerate() {
                    for (vi, &bi) in v.iter_mut().zip(&basis[c]) {
                        *vi = (*vi + mulmod(co, bi, p)) % p;
                    }
                }
                v
            })
            .collect();
        out.push(piece);
    }
    let total: usize = out.iter().map(|piece| piece.len()).sum();
    assert_eq!(total, d, "eigenspaces of a commuting semisimple action fill the subspace");
    out
}

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            let mut acc = 0u64;
            for (a, b) in row.iter().zip(v) {
                acc = (acc + mulmod(*a, *b, p)) % p;
            }
            acc
        })
        .collect()
}

/// Coordinates of each target vector in the given (independent) basis,
/// solved by Gaussian elimination on [basis^T | targets^T].
fn in_basis_coordinates(basis: &[Vec<u64>], targets: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = basis.len();
    let amb = basis[0].len();
    let t = targets.len();
    // ambient x (d + t) augmented system
    let mut aug = vec![vec![0u64; d + t]; amb];
    for (c, b) in basis.iter().enumerate() {
        for (r, &x) in b.iter().enumerate() {
            aug[r][c] = x;
        }
    }
    for (c, v) in targets.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            aug[r][d + c] = x;
        }
    }
    // forward elimination over the first d columns
    let mut pivot_rows = Vec::with_capacity(d);
    let mut row = 0usize;
    for col in 0..d {
        let Some(pr) = (row..amb).find(|&r| aug[r][col] != 0) else {
            panic!("basis vectors must be independent");
        };
        aug.swap(row, pr);
        let inv = modpow(aug[row][col], p - 2, p);
        for c in col..d + t {
            aug[row][c] = mulmod(aug[row][c], inv, p);
        }
        for r in 0..amb {
            if r != row && aug[r][col] != 0 {
                let f = aug[r][col];
                for c in col..d + t {
                    let sub = mulmod(f, aug[row][c], p);
                    aug[r][c] = (aug[r][c] + p - sub) % p;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    (0..t)
        .map(|c| (0..d).map(|r| aug[pivot_rows[r]][d + c]).collect())
        .collect()
}

/// Characteristic polynomial of a small matrix over F_p, by evaluating
/// det(M - lambda I) at d + 1 points and interpolating.
fn characteristic_polynomial(m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let d = m.len();
    assert!((d as u64) < p, "need more evaluation points than the dimension");
    let points: Vec<u64> = (0..=d as u64).collect();
    let values: Vec<u64> = points
        .iter()
        .map(|&lambda| {
            let mut a = m.to_vec();
            for i in 0..d {
                a[i][i] = (a[i][i] + p - lambda % p) % p;
            }
            det_mod_p(a, p)
        })
        .collect();
    lagrange_mod_p(&points, &values, p)
}

fn det_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(pr) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if pr != k {
            a.swap(k, pr);
            det = p - det;
        }
        det = mulmod(det, a[k][k], p);
        let inv = modpow(a[k][k], p - 2, p);
        for r in k + 1..n {
            if a[r][k] == 0 {
                continue;
            }
            let f = mulmod(a[r][k], inv, p);
            for c in k..n {
                let sub = mulmod(f, a[k][c], p);
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
    }
    det % p
}

fn lagrange_mod_p(points: &[u64], values: &[u64], p: u64) -> Vec<u64> {
    let n = points.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        // numerator polynomial prod_{j != i} (x - x_j), denominator scalar
        let mut num = vec![1u64];
        let mut den = 1u64;
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![0u64; num.len() + 1];
            for (k, &c) in num.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + mulmod(c, p - points[j] % p, p)) % p;
            }
            num = next;
            den = mulmod(den, (points[i] + p - points[j]) % p, p);
        }
        let w = mulmod(values[i], modpow(den, p - 2, p), p);
        for (k, &c) in num.iter().enumerate() {
            out[k] = (out[k] + mulmod(w, c, p)) % p;
        }
    }
    out
}

/// Kernel basis of a square matrix over F_p (coordinates of free columns).
fn kernel_basis(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0usize;
    let mut pivot_cols = vec![false; n];
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = modpow(a[row][col], p - 2, p);
        for c in 0..n {
            a[row][c] = mulmod(a[row][c], inv, p);
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..n {
                    let sub = mulmod(f, a[row][c], p);
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
        pivot_col_of_row.push(col);
        pivot_cols[col] = true;
        row += 1;
        if row == n {
            break;
        }
    }
    let mut out = Vec::new();
    for free in 0..n {
        if pivot_cols[free] {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (p - a[r][free]) % p;
        }
        out.push(v);
    }
    out
}
