//! Finite groups as explicit multiplication tables, conjugacy structure and
//! Cayley connection sets.

mod catalog;
mod ff;

pub use catalog::{build_group, parse_table_file};
pub(crate) use catalog::gl2_matrices;
pub(crate) use ff::SmallField;

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A finite group stored as an explicit multiplication table. Immutable
/// after construction; all derived data is computed deterministically.
#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>, // row g, column h -> g*h, flattened
    inv: Vec<usize>,
    id: usize,
    labels: Vec<String>,
    descriptor: String,
    conjugacy: OnceLock<ConjugacyData>,
}

/// Conjugacy classes, inverse-class pairing and the group exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyData {
    /// Identity class first, then ordered by least element index; each class
    /// is sorted ascending.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Least element index of each class.
    pub reps: Vec<usize>,
    /// Class index of the inverses of each class.
    pub inverse_class: Vec<usize>,
    /// lcm of the element orders.
    pub exponent: u64,
    /// Order of each element.
    pub element_orders: Vec<u64>,
}

impl FiniteGroup {
    /// Hard bound on stored table size; catalog families stay well below it.
    pub const MAX_ORDER: usize = 2048;
    /// Bound below which associativity is checked on all triples.
    const EXHAUSTIVE_ASSOC: usize = 512;

    /// Validates a raw table (group axioms) and wraps it.
    pub fn from_parts(
        order: usize,
        mult: Vec<usize>,
        labels: Vec<String>,
        descriptor: String,
    ) -> Result<FiniteGroup> {
        if order == 0 || mult.len() != order * order || labels.len() != order {
            return Err(Error::NonAssociativeTable("table dimensions are wrong".into()));
        }
        if order > Self::MAX_ORDER {
            return Err(Error::CatalogBoundExceeded(format!(
                "order {order} exceeds {}",
                Self::MAX_ORDER
            )));
        }
        if let Some(&bad) = mult.iter().find(|&&v| v >= order) {
            return Err(Error::NonAssociativeTable(format!("entry {bad} out of range")));
        }
        let id = (0..order)
            .find(|&e| (0..order).all(|g| mult[e * order + g] == g && mult[g * order + e] == g))
            .ok_or_else(|| Error::NonAssociativeTable("no identity element".into()))?;
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            let h = (0..order)
                .find(|&h| mult[g * order + h] == id)
                .ok_or_else(|| Error::NonAssociativeTable(format!("element {g} has no inverse")))?;
            if mult[h * order + g] != id {
                return Err(Error::NonAssociativeTable(format!(
                    "element {g} has only a one-sided inverse"
                )));
            }
            inv[g] = h;
        }
        let check = |a: usize, b: usize, c: usize| -> bool {
            mult[mult[a * order + b] * order + c] == mult[a * order + mult[b * order + c]]
        };
        if order <= Self::EXHAUSTIVE_ASSOC {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !check(a, b, c) {
                            return Err(Error::NonAssociativeTable(format!(
                                "associativity fails on ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state
            };
            for _ in 0..200_000 {
                let a = (next() % order as u64) as usize;
                let b = (next() % order as u64) as usize;
                let c = (next() % order as u64) as usize;
                if !check(a, b, c) {
                    return Err(Error::NonAssociativeTable(format!(
                        "associativity fails on ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup {
            order,
            mult,
            inv,
            id,
            labels,
            descriptor,
            conjugacy: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn identity(&self) -> usize {
        self.id
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Element index with the given label, if any.
    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut x = g;
        let mut n = 1u64;
        while x != self.id {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// Elements commuting with the whole group, in index order.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Conjugacy classes; computed once and cached.
    pub fn conjugacy(&self) -> &ConjugacyData {
        self.conjugacy.get_or_init(|| self.compute_conjugacy())
    }

    fn compute_conjugacy(&self) -> ConjugacyData {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        // identity class first, then orbits by least unvisited element
        let mut seeds: Vec<usize> = Vec::with_capacity(n);
        seeds.push(self.id);
        seeds.extend((0..n).filter(|&g| g != self.id));
        for seed in seeds {
            if class_of[seed] != usize::MAX {
                continue;
            }
            let mut orbit: Vec<usize> = (0..n).map(|g| self.conjugate(seed, g)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            let idx = classes.len();
            for &x in &orbit {
                class_of[x] = idx;
            }
            classes.push(orbit);
        }
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let inverse_class: Vec<usize> = reps.iter().map(|&r| class_of[self.inv[r]]).collect();
        let element_orders: Vec<u64> = (0..n).map(|g| self.element_order(g)).collect();
        let exponent = element_orders
            .iter()
            .fold(1u64, |acc, &o| num_integer::lcm(acc, o));
        ConjugacyData {
            classes,
            class_of,
            reps,
            inverse_class,
            exponent,
            element_orders,
        }
    }
}

impl ConjugacyData {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }
}

/// A validated Cayley connection set: symmetric, identity-free,
/// conjugation-stable and generating.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    elements: Vec<usize>,
    member: Vec<bool>,
}

impl ConnectionSet {
    pub fn r(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.member[g]
    }

    /// Whether the Cayley graph has nonzero Euler characteristic, i.e. is
    /// not a cycle graph. Required by the tower verifiers.
    pub fn tower_eligible(&self) -> bool {
        self.r() >= 3
    }
}

/// Checks all four connection-set conditions, naming the first violated one.
pub fn validate_connection_set(group: &FiniteGroup, set: &[usize]) -> Result<ConnectionSet> {
    let n = group.order();
    let mut elements: Vec<usize> = set.to_vec();
    elements.sort_unstable();
    elements.dedup();
    if let Some(&bad) = elements.iter().find(|&&s| s >= n) {
        return Err(Error::MalformedSpec(format!("element index {bad} out of range")));
    }
    let mut member = vec![false; n];
    for &s in &elements {
        member[s] = true;
    }
    if member[group.identity()] {
        return Err(Error::ContainsIdentity);
    }
    for &s in &elements {
        if !member[group.inv(s)] {
            return Err(Error::NotSymmetric { element: s });
        }
    }
    for &s in &elements {
        for g in 0..n {
            if !member[group.conjugate(s, g)] {
                return Err(Error::NotConjugationStable { element: s, conjugator: g });
            }
        }
    }
    // closure of <S> from the identity
    let mut reached = vec![false; n];
    reached[group.identity()] = true;
    let mut frontier = vec![group.identity()];
    let mut count = 1usize;
    while let Some(g) = frontier.pop() {
        for &s in &elements {
            let h = group.mul(g, s);
            if !reached[h] {
                reached[h] = true;
                count += 1;
                frontier.push(h);
            }
        }
    }
    if count != n {
        return Err(Error::DoesNotGenerate { reached: count, order: n });
    }
    Ok(ConnectionSet { elements, member })
}

/// The "all" shorthand: every non-identity element.
pub fn full_connection_set(group: &FiniteGroup) -> Result<ConnectionSet> {
    let set: Vec<usize> = (0..group.order()).filter(|&g| g != group.identity()).collect();
    validate_connection_set(group, &set)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALOG: &[&str] = &[
        "cyclic:3",
        "cyclic:5",
        "cyclic:6",
        "cyclic:8",
        "dihedral:4",
        "symmetric:3",
        "symmetric:4",
        "quaternion8",
        "heisenberg:3",
        "product(cyclic:3,symmetric:3)",
        "gl2:4",
    ];

    #[test]
    fn conjugacy_class_shapes() {
        let s3 = build_group("symmetric:3").unwrap();
        let data = s3.conjugacy();
        let mut sizes: Vec<usize> = data.classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes.remove(0), 1); // identity class first
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);

        let c5 = build_group("cyclic:5").unwrap();
        assert_eq!(c5.conjugacy().class_count(), 5);

        let h = build_group("heisenberg:3").unwrap();
        let data = h.conjugacy();
        assert_eq!(data.class_count(), 11);
        let singles = data.classes.iter().filter(|c| c.len() == 1).count();
        let triples = data.classes.iter().filter(|c| c.len() == 3).count();
        assert_eq!((singles, triples), (3, 8));
    }

    #[test]
    fn class_sizes_divide_and_sum() {
        for spec in CATALOG {
            let g = build_group(spec).unwrap();
            let data = g.conjugacy();
            let total: usize = data.classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, g.order(), "{spec}");
            for c in &data.classes {
                assert_eq!(g.order() % c.len(), 0, "{spec}");
            }
            assert_eq!(g.order() as u64 % data.exponent, 0, "{spec}");
            // every member of a class is conjugate to the representative
            for (ci, class) in data.classes.iter().enumerate() {
                let rep = data.reps[ci];
                for &x in class {
                    assert!((0..g.order()).any(|y| g.conjugate(rep, y) == x));
                }
            }
        }
    }

    #[test]
    fn full_set_is_valid_for_catalog() {
        for spec in CATALOG {
            let g = build_group(spec).unwrap();
            if g.order() < 4 {
                continue;
            }
            let s = full_connection_set(&g).unwrap();
            assert_eq!(s.r(), g.order() - 1, "{spec}");
            assert!(s.tower_eligible());
        }
    }

    #[test]
    fn connection_set_violations() {
        let c4 = build_group("cyclic:4").unwrap();
        assert!(matches!(
            validate_connection_set(&c4, &[2]),
            Err(Error::DoesNotGenerate { reached: 2, order: 4 })
        ));
        assert!(matches!(
            validate_connection_set(&c4, &[0, 1, 3]),
            Err(Error::ContainsIdentity)
        ));
        assert!(matches!(
            validate_connection_set(&c4, &[1]),
            Err(Error::NotSymmetric { element: 1 })
        ));

        let s3 = build_group("symmetric:3").unwrap();
        let t = s3.element_by_label("213").unwrap();
        assert!(matches!(
            validate_connection_set(&s3, &[t]),
            Err(Error::NotConjugationStable { .. })
        ));

        let all = full_connection_set(&s3).unwrap();
        assert_eq!(all.r(), 5);
    }

    #[test]
    fn centers_and_orders() {
        let h = build_group("heisenberg:3").unwrap();
        assert_eq!(h.center().len(), 3);
        let c5 = build_group("cyclic:5").unwrap();
        assert_eq!(c5.center().len(), 5);

        // scalar matrix a*Id with a of order 3 in F_4^x has order 3
        let gl = build_group("gl2:4").unwrap();
        let scalar = gl.element_by_label("[2,0;0,2]").unwrap();
        assert_eq!(gl.element_order(scalar), 3);
    }

    #[test]
    fn determinism() {
        let a = build_group("product(cyclic:3,symmetric:3)").unwrap();
        let b = build_group("product(cyclic:3,symmetric:3)").unwrap();
        assert_eq!(a.mult, b.mult);
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.conjugacy(), b.conjugacy());
    }
}
