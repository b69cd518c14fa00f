//! Built-in group families and the descriptor / Cayley-table-file parsers.

use std::collections::BTreeMap;

use super::ff::SmallField;
use super::FiniteGroup;
use crate::error::{Error, Result};

/// Builds a group from a descriptor string.
///
/// Recognized forms: `cyclic:n`, `dihedral:n` (n >= 3), `symmetric:k`
/// (k <= 5), `quaternion8`, `heisenberg:p` (p prime, p <= 5), `gl2:q`
/// (q in {2,3,4,5}), `product(a,b)` and `file:path`.
pub fn build_group(spec: &str) -> Result<FiniteGroup> {
    let spec = spec.trim();
    if let Some(inner) = spec.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let (a, b) = split_top_level(inner)
            .ok_or_else(|| Error::MalformedSpec(format!("product needs two components: {spec}")))?;
        return product(&build_group(a)?, &build_group(b)?, spec);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedSpec(format!("cannot read {path}: {e}")))?;
        return parse_table_file(&text, spec);
    }
    if spec == "quaternion8" {
        return Ok(quaternion8());
    }
    let (family, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::MalformedSpec(format!("unknown descriptor: {spec}")))?;
    let n: usize = arg
        .parse()
        .map_err(|_| Error::MalformedSpec(format!("bad numeric argument in {spec}")))?;
    match family {
        "cyclic" if n >= 1 => Ok(cyclic(n)),
        "dihedral" if n >= 3 => Ok(dihedral(n)),
        "symmetric" if (1..=5).contains(&n) => Ok(symmetric(n)),
        "symmetric" => Err(Error::CatalogBoundExceeded(format!(
            "symmetric:{n} (catalog stops at symmetric:5)"
        ))),
        "heisenberg" if [2, 3, 5].contains(&n) => Ok(heisenberg(n)),
        "heisenberg" => Err(Error::CatalogBoundExceeded(format!(
            "heisenberg:{n} (p must be a prime <= 5)"
        ))),
        "gl2" if [2, 3, 4, 5].contains(&n) => Ok(gl2(n)),
        "gl2" => Err(Error::CatalogBoundExceeded(format!(
            "gl2:{n} (catalog stops at q = 5)"
        ))),
        _ => Err(Error::MalformedSpec(format!("unknown descriptor: {spec}"))),
    }
}

/// Splits `a,b` at the top-level comma, respecting nested parentheses.
fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn cyclic(n: usize) -> FiniteGroup {
    let mult = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteGroup::from_parts(n, mult, labels, format!("cyclic:{n}"))
        .expect("cyclic table is a group")
}

fn dihedral(n: usize) -> FiniteGroup {
    // Element (eps, i) acts on Z/n by x -> eps*x + i; index i for eps = +1,
    // n + i for eps = -1.
    let idx = |eps: i64, i: i64| -> usize {
        let i = i.rem_euclid(n as i64) as usize;
        if eps == 1 {
            i
        } else {
            n + i
        }
    };
    let parts = |g: usize| -> (i64, i64) {
        if g < n {
            (1, g as i64)
        } else {
            (-1, (g - n) as i64)
        }
    };
    let order = 2 * n;
    let mut mult = vec![0usize; order * order];
    for g in 0..order {
        for h in 0..order {
            let (a, i) = parts(g);
            let (b, j) = parts(h);
            // g(h(x)) = a*(b*x + j) + i
            mult[g * order + h] = idx(a * b, a * j + i);
        }
    }
    let labels = (0..order)
        .map(|g| {
            if g == 0 {
                "e".to_string()
            } else if g < n {
                format!("r{g}")
            } else {
                format!("s{}", g - n)
            }
        })
        .collect();
    FiniteGroup::from_parts(order, mult, labels, format!("dihedral:{n}"))
        .expect("dihedral table is a group")
}

fn symmetric(k: usize) -> FiniteGroup {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        perms.push(cur.clone());
        // next permutation in lexicographic order
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index: BTreeMap<Vec<usize>, usize> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let n = perms.len();
    let mut mult = vec![0usize; n * n];
    for (g, p) in perms.iter().enumerate() {
        for (h, q) in perms.iter().enumerate() {
            let comp: Vec<usize> = (0..k).map(|x| p[q[x]]).collect();
            mult[g * n + h] = index[&comp];
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
        .collect();
    FiniteGroup::from_parts(n, mult, labels, format!("symmetric:{k}"))
        .expect("symmetric table is a group")
}

fn quaternion8() -> FiniteGroup {
    // 0..7 = 1, -1, i, -i, j, -j, k, -k; encode as (unit, sign).
    let unit = |g: usize| (g / 2, g % 2 == 1); // unit index 0..3 = 1,i,j,k
    let enc = |u: usize, neg: bool| 2 * u + neg as usize;
    // unit products: table[u][v] = (unit, sign)
    let table = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut mult = vec![0usize; 64];
    for g in 0..8 {
        for h in 0..8 {
            let (u, su) = unit(g);
            let (v, sv) = unit(h);
            let (w, sw) = table[u][v];
            mult[g * 8 + h] = enc(w, su ^ sv ^ sw);
        }
    }
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_parts(8, mult, labels, "quaternion8".to_string())
        .expect("quaternion table is a group")
}

fn heisenberg(p: usize) -> FiniteGroup {
    // Triples (a,b,c) mod p with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
    let n = p * p * p;
    let enc = |a: usize, b: usize, c: usize| (a * p + b) * p + c;
    let mut mult = vec![0usize; n * n];
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                let g = enc(a, b, c);
                for a2 in 0..p {
                    for b2 in 0..p {
                        for c2 in 0..p {
                            let h = enc(a2, b2, c2);
                            mult[g * n + h] =
                                enc((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
                        }
                    }
                }
            }
        }
    }
    let labels = (0..n)
        .map(|g| {
            let (a, b, c) = (g / (p * p), (g / p) % p, g % p);
            let mut s = String::new();
            for (sym, e) in [("x", a), ("y", b), ("z", c)] {
                match e {
                    0 => {}
                    1 => s.push_str(sym),
                    _ => s.push_str(&format!("{sym}{e}")),
                }
            }
            if s.is_empty() {
                s.push('e');
            }
            s
        })
        .collect();
    FiniteGroup::from_parts(n, mult, labels, format!("heisenberg:{p}"))
        .expect("heisenberg table is a group")
}

/// Enumerates the invertible 2x2 matrices over F_q in row-major
/// lexicographic order of (a, b, c, d). Shared with the character-table
/// code, which needs the element <-> matrix correspondence.
pub(crate) fn gl2_matrices(q: usize) -> (SmallField, Vec<[usize; 4]>) {
    let f = SmallField::new(q).expect("q in catalog");
    let mut mats = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let det = f.add(f.mul(a, d), f.neg(f.mul(b, c)));
                    if det != 0 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    (f, mats)
}

fn gl2(q: usize) -> FiniteGroup {
    let (f, mats) = gl2_matrices(q);
    let n = mats.len();
    let index: BTreeMap<[usize; 4], usize> =
        mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut mult = vec![0usize; n * n];
    for (g, m) in mats.iter().enumerate() {
        for (h, w) in mats.iter().enumerate() {
            let prod = [
                f.add(f.mul(m[0], w[0]), f.mul(m[1], w[2])),
                f.add(f.mul(m[0], w[1]), f.mul(m[1], w[3])),
                f.add(f.mul(m[2], w[0]), f.mul(m[3], w[2])),
                f.add(f.mul(m[2], w[1]), f.mul(m[3], w[3])),
            ];
            mult[g * n + h] = index[&prod];
        }
    }
    let labels = mats
        .iter()
        .map(|m| format!("[{},{};{},{}]", m[0], m[1], m[2], m[3]))
        .collect();
    FiniteGroup::from_parts(n, mult, labels, format!("gl2:{q}"))
        .expect("gl2 table is a group")
}

fn product(a: &FiniteGroup, b: &FiniteGroup, spec: &str) -> Result<FiniteGroup> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    if n > FiniteGroup::MAX_ORDER {
        return Err(Error::CatalogBoundExceeded(format!(
            "product order {n} exceeds {}",
            FiniteGroup::MAX_ORDER
        )));
    }
    let mut mult = vec![0usize; n * n];
    for ga in 0..na {
        for gb in 0..nb {
            let g = ga * nb + gb;
            for ha in 0..na {
                for hb in 0..nb {
                    mult[g * n + ha * nb + hb] = a.mul(ga, ha) * nb + b.mul(gb, hb);
                }
            }
        }
    }
    let labels = (0..n)
        .map(|g| format!("{}|{}", a.label(g / nb), b.label(g % nb)))
        .collect();
    FiniteGroup::from_parts(n, mult, labels, spec.to_string())
}

/// Parses the Cayley-table file format: line 1 is n, followed by n lines of
/// n whitespace-separated 1-based indices (row g, column h giving g*h) and an
/// optional `#labels` line. Anything else is rejected.
pub fn parse_table_file(text: &str, descriptor: &str) -> Result<FiniteGroup> {
    let mut lines = text.lines();
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::MalformedSpec("empty table file".into()))?
        .trim()
        .parse()
        .map_err(|_| Error::MalformedSpec("line 1 must be the group order".into()))?;
    if n == 0 || n > FiniteGroup::MAX_ORDER {
        return Err(Error::MalformedSpec(format!(
            "order must be between 1 and {}",
            FiniteGroup::MAX_ORDER
        )));
    }
    let mut mult = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::MalformedSpec(format!("missing table row {}", row + 1)))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::MalformedSpec(format!(
                "row {} has {} entries, expected {n}",
                row + 1,
                entries.len()
            )));
        }
        for e in entries {
            let v: usize = e.parse().map_err(|_| {
                Error::MalformedSpec(format!("bad entry {e:?} in row {}", row + 1))
            })?;
            if v == 0 || v > n {
                return Err(Error::MalformedSpec(format!(
                    "entry {v} out of range 1..={n} in row {}",
                    row + 1
                )));
            }
            mult.push(v - 1);
        }
    }
    let mut labels: Vec<String> = (0..n).map(|i| (i + 1).to_string()).collect();
    let mut saw_labels = false;
    for line in lines {
        if line.trim().is_empty() && !saw_labels {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#labels") {
            if saw_labels {
                return Err(Error::MalformedSpec("duplicate #labels line".into()));
            }
            let given: Vec<&str> = rest.split_whitespace().collect();
            if given.len() != n {
                return Err(Error::MalformedSpec(format!(
                    "#labels has {} entries, expected {n}",
                    given.len()
                )));
            }
            labels = given.into_iter().map(|s| s.to_string()).collect();
            saw_labels = true;
        } else if !line.trim().is_empty() {
            return Err(Error::MalformedSpec(format!(
                "trailing garbage after table: {line:?}"
            )));
        }
    }
    FiniteGroup::from_parts(n, mult, labels, descriptor.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_orders() {
        let g = build_group("cyclic:3").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.conjugacy().exponent, 3);
    }

    #[test]
    fn gl2_orders() {
        // |GL2(F_q)| = (q^2 - 1)(q^2 - q)
        for (q, expect) in [(2usize, 6usize), (3, 48), (4, 180), (5, 480)] {
            let g = build_group(&format!("gl2:{q}")).unwrap();
            assert_eq!(g.order(), expect, "gl2:{q}");
        }
    }

    #[test]
    fn product_order_and_exponent() {
        let g = build_group("product(cyclic:3,symmetric:3)").unwrap();
        assert_eq!(g.order(), 18);
        assert_eq!(g.conjugacy().exponent, 6);
    }

    #[test]
    fn symmetric_labels_compose() {
        let g = build_group("symmetric:3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.label(0), "123");
        // composition sanity: a transposition squared is the identity
        let t = (0..6).find(|&i| g.label(i) == "213").unwrap();
        assert_eq!(g.mul(t, t), g.identity());
    }

    #[test]
    fn quaternion_relations() {
        let g = build_group("quaternion8").unwrap();
        let pick = |s: &str| (0..8).find(|&i| g.label(i) == s).unwrap();
        let (i, j, k, m1) = (pick("i"), pick("j"), pick("k"), pick("-1"));
        assert_eq!(g.mul(i, i), m1);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), pick("-k"));
    }

    #[test]
    fn heisenberg_center() {
        let g = build_group("heisenberg:3").unwrap();
        assert_eq!(g.order(), 27);
        let z = g.center();
        assert_eq!(z.len(), 3);
        // center is generated by the label "z"
        assert!(z.iter().any(|&c| g.label(c) == "z"));
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(matches!(build_group("nope"), Err(Error::MalformedSpec(_))));
        assert!(matches!(build_group("symmetric:6"), Err(Error::CatalogBoundExceeded(_))));
        assert!(matches!(build_group("gl2:7"), Err(Error::CatalogBoundExceeded(_))));
        assert!(matches!(build_group("heisenberg:4"), Err(Error::CatalogBoundExceeded(_))));
    }

    #[test]
    fn table_file_round_trip() {
        let z3 = "3\n1 2 3\n2 3 1\n3 1 2\n";
        let g = parse_table_file(z3, "file:z3").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 2), 0);

        let with_labels = "3\n1 2 3\n2 3 1\n3 1 2\n#labels e a b\n";
        let g = parse_table_file(with_labels, "file:z3").unwrap();
        assert_eq!(g.label(1), "a");

        let garbage = "3\n1 2 3\n2 3 1\n3 1 2\nextra\n";
        assert!(matches!(parse_table_file(garbage, "f"), Err(Error::MalformedSpec(_))));

        let not_group = "3\n1 2 3\n2 1 1\n3 1 2\n";
        assert!(matches!(parse_table_file(not_group, "f"), Err(Error::NonAssociativeTable(_))));
    }
}
