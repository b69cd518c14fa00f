//! Integer Smith normal form kernels: full big-integer SNF with minimal-pivot
//! selection, and the ell-local variant working mod ell^N with saturation
//! detection (precision doubles whenever a pivot would vanish mod ell^N).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Invariant factors (positive, each dividing the next) of an integer
/// matrix. Zero rows/columns contribute nothing; for a nonsingular n x n
/// input the result has n entries.
///
/// Nonsingular square matrices take the modular route: all elimination is
/// done mod N = |det|, which bounds every intermediate entry, and the
/// invariant factors are recovered from the determinantal divisors
/// s_i = gcd(g_1 ... g_i, N). Everything else falls back to plain integer
/// elimination.
pub fn smith_normal_form(m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    if rows > 0 && rows == cols {
        let det = crate::polydet::bareiss_det(m.clone()).abs();
        if !det.is_zero() {
            return smith_normal_form_mod_det(m, &det);
        }
    }
    smith_normal_form_general(m)
}

/// Diagonalization over Z/N by extended-gcd row and column combinations.
/// Row operations mod N change every minor by a multiple of N, and each
/// determinantal divisor s_i divides s_n = N, so s_i = gcd(prod g_j, N) is
/// read off the diagonal exactly.
fn smith_normal_form_mod_det(m: Vec<Vec<BigInt>>, n_mod: &BigInt) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|c| c.mod_floor(n_mod)).collect())
        .collect();
    for k in 0..n {
        // bring a nonzero entry to the pivot if one exists
        if a[k][k].is_zero() {
            if let Some((pi, pj)) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                a.swap(k, pi);
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            } else {
                break; // trailing block is 0 mod N: remaining factors absorb N
            }
        }
        // phase 1: shrink the pivot to the gcd of its row and column; each
        // combine on a non-divisible entry strictly divides the pivot, so
        // this terminates along the divisor chain
        loop {
            let mut changed = false;
            for i in k + 1..n {
                if !a[i][k].mod_floor(&a[k][k]).is_zero() {
                    gcd_combine_rows(&mut a, k, i, n_mod);
                    changed = true;
                }
            }
            for j in k + 1..n {
                if !a[k][j].mod_floor(&a[k][k]).is_zero() {
                    gcd_combine_cols(&mut a, k, j, n_mod);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // phase 2: plain eliminations; row operations leave row k intact and
        // column operations leave column k intact, so nothing gets refilled
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let q = &a[i][k] / &pivot;
            for j in k..n {
                let delta = &q * &a[k][j];
                a[i][j] = (&a[i][j] - delta).mod_floor(n_mod);
            }
        }
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let q = &a[k][j] / &pivot;
            for row in a.iter_mut().skip(k) {
                let delta = &q * &row[k];
                row[j] = (&row[j] - delta).mod_floor(n_mod);
            }
        }
    }
    // normalize the diagonal into a divisibility chain: diag(a, b) and
    // diag(gcd, lcm) are equivalent, and after the sweep a_i divides every
    // later entry (0 stands for a multiple of N and absorbs anything)
    let mut diag: Vec<BigInt> = (0..n).map(|k| a[k][k].clone()).collect();
    for i in 0..n {
        for j in i + 1..n {
            let g = num_integer::gcd(diag[i].clone(), diag[j].clone());
            if g.is_zero() {
                continue;
            }
            let l = &diag[i] * &diag[j] / &g;
            diag[i] = g;
            diag[j] = l;
        }
    }
    // determinantal divisors: s_i = gcd(a_1 ... a_i, N), d_i = s_i / s_{i-1}
    let mut factors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut prod = BigInt::one();
    for g in diag {
        prod = (prod * g).mod_floor(n_mod);
        let s = num_integer::gcd(prod.clone(), n_mod.clone());
        let s = if s.is_zero() { n_mod.clone() } else { s };
        factors.push(&s / &prev);
        prev = s;
    }
    factors
}

/// Unimodular 2x2 combination turning (a[k][k], a[i][k]) into (gcd, 0),
/// all rows reduced mod N.
fn gcd_combine_rows(a: &mut [Vec<BigInt>], k: usize, i: usize, n_mod: &BigInt) {
    let x = a[k][k].clone();
    let y = a[i][k].clone();
    let e = x.extended_gcd(&y);
    let (g, u, v) = (e.gcd, e.x, e.y);
    let xs = &x / &g;
    let ys = &y / &g;
    let cols = a[k].len();
    for c in 0..cols {
        let top = (&u * &a[k][c] + &v * &a[i][c]).mod_floor(n_mod);
        let bot = (-&ys * &a[k][c] + &xs * &a[i][c]).mod_floor(n_mod);
        a[k][c] = top;
        a[i][c] = bot;
    }
}

fn gcd_combine_cols(a: &mut [Vec<BigInt>], k: usize, j: usize, n_mod: &BigInt) {
    let x = a[k][k].clone();
    let y = a[k][j].clone();
    let e = x.extended_gcd(&y);
    let (g, u, v) = (e.gcd, e.x, e.y);
    let xs = &x / &g;
    let ys = &y / &g;
    for row in a.iter_mut() {
        let left = (&u * &row[k] + &v * &row[j]).mod_floor(n_mod);
        let right = (-&ys * &row[k] + &xs * &row[j]).mod_floor(n_mod);
        row[k] = left;
        row[j] = right;
    }
}

fn smith_normal_form_general(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut k = 0usize;
    while k < rows.min(cols) {
        // pivot: minimal nonzero magnitude in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing block is zero
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            // clear column k with row operations, keeping remainders
            let mut dirty = false;
            for i in k + 1..rows {
                if m[i][k].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[i][k], &m[k][k]);
                if !q.is_zero() {
                    for j in k..cols {
                        let s = &q * &m[k][j];
                        m[i][j] -= s;
                    }
                }
                if !m[i][k].is_zero() {
                    // remainder smaller than pivot: promote it
                    m.swap(k, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..cols {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[k][j], &m[k][k]);
                if !q.is_zero() {
                    for row in m.iter_mut().skip(k) {
                        let s = &q * &row[k];
                        row[j] -= s;
                    }
                }
                if !m[k][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: pivot must divide the trailing block
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !m[i][j].mod_floor(&m[k][k]).is_zero() {
                        // fold that row in and keep reducing
                        for col in k..cols {
                            let add = m[i][col].clone();
                            m[k][col] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if m[k][k].is_negative() {
            let pivot_neg: BigInt = -m[k][k].clone();
            m[k][k] = pivot_neg;
        }
        factors.push(m[k][k].clone());
        k += 1;
    }
    factors
}

/// Rounded division minimizing the remainder magnitude.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// ell-valuations of the invariant factors, computed mod ell^N. Requires a
/// nonsingular matrix; precision escalates (doubling) until no pivot
/// vanishes mod ell^N. Returns (ascending valuations, precision used).
pub fn snf_ell_valuations(
    matrix: &[Vec<BigInt>],
    ell: u64,
    starting_precision: u32,
) -> (Vec<u64>, u32) {
    let n = matrix.len();
    if n == 0 {
        return (Vec::new(), starting_precision);
    }
    let mut precision = starting_precision.max(1);
    'retry: loop {
        assert!(
            precision < 1 << 24,
            "precision escalation diverged; the input matrix must be nonsingular"
        );
        let modulus = BigInt::from(ell).pow(precision);
        let ell_big = BigInt::from(ell);
        let mut m: Vec<Vec<BigInt>> = matrix
            .iter()
            .map(|row| row.iter().map(|c| c.mod_floor(&modulus)).collect())
            .collect();
        let val = |c: &BigInt| -> u64 {
            // valuation of a residue in [0, ell^N); zero residue maps to N
            if c.is_zero() {
                return precision as u64;
            }
            let mut v = 0u64;
            let mut cur = c.clone();
            loop {
                let (q, r) = cur.div_rem(&ell_big);
                if !r.is_zero() {
                    return v;
                }
                cur = q;
                v += 1;
            }
        };
        let mut valuations = Vec::with_capacity(n);
        for k in 0..n {
            let mut best: Option<(usize, usize, u64)> = None;
            for i in k..n {
                for j in k..n {
                    let v = val(&m[i][j]);
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
            let (pi, pj, v) = best.unwrap();
            if v >= precision as u64 {
                // saturated: cannot distinguish high valuations from zero
                precision *= 2;
                continue 'retry;
            }
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            // normalize pivot to ell^v
            let unit = &m[k][k] / BigInt::from(ell).pow(v as u32);
            let unit_inv = modinv(&unit, &modulus);
            for j in k..n {
                m[k][j] = (&m[k][j] * &unit_inv).mod_floor(&modulus);
            }
            let pivot = BigInt::from(ell).pow(v as u32);
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let factor = &m[i][k] / &pivot; // exact: valuation >= v
                for j in k..n {
                    m[i][j] = (&m[i][j] - &factor * &m[k][j]).mod_floor(&modulus);
                }
            }
            for j in k + 1..n {
                if m[k][j].is_zero() {
                    continue;
                }
                let factor = &m[k][j] / &pivot;
                for row in m.iter_mut().skip(k) {
                    let delta = &factor * &row[k];
                    row[j] = (&row[j] - delta).mod_floor(&modulus);
                }
            }
            valuations.push(v);
        }
        return (valuations, precision);
    }
}

/// Inverse of a unit mod m.
fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not a unit");
    e.x.mod_floor(m)
}
