//! Small finite fields F_q for q in {2, 3, 4, 5}, just enough to enumerate
//! GL_2(F_q). Elements are encoded as 0..q-1; for q = 4 the encoding is
//! a + 2b for a + b*t with t^2 = t + 1.

#[derive(Debug, Clone)]
pub struct SmallField {
    pub q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl SmallField {
    pub fn new(q: usize) -> Option<SmallField> {
        if ![2, 3, 4, 5].contains(&q) {
            return None;
        }
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (s, p) = if q == 4 {
                    let (a0, a1) = (a & 1, a >> 1);
                    let (b0, b1) = (b & 1, b >> 1);
                    let s = (a0 ^ b0) | ((a1 ^ b1) << 1);
                    // (a0 + a1 t)(b0 + b1 t) with t^2 = t + 1
                    let c0 = (a0 & b0) ^ (a1 & b1);
                    let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
                    (s, c0 | (c1 << 1))
                } else {
                    ((a + b) % q, (a * b) % q)
                };
                add[a * q + b] = s as u8;
                mul[a * q + b] = p as u8;
            }
        }
        Some(SmallField { q, add, mul })
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: usize) -> usize {
        assert!(a != 0, "zero has no inverse");
        (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: usize) -> usize {
        assert!(a != 0);
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Smallest generator of the multiplicative group in encoding order.
    pub fn generator(&self) -> usize {
        (1..self.q)
            .find(|&a| self.order(a) == self.q - 1)
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Discrete logarithm with respect to `generator()`.
    pub fn dlog(&self, a: usize) -> usize {
        assert!(a != 0);
        let g = self.generator();
        let mut x = 1;
        for e in 0..self.q - 1 {
            if x == a {
                return e;
            }
            x = self.mul(x, g);
        }
        unreachable!("nonzero element must be a power of the generator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_is_a_field() {
        let f = SmallField::new(4).unwrap();
        for a in 1..4 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        // t * t = t + 1, i.e. 2 * 2 = 3
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.order(2), 3);
        // char 2: a + a = 0
        for a in 0..4 {
            assert_eq!(f.add(a, a), 0);
        }
    }

    #[test]
    fn prime_fields() {
        for q in [2, 3, 5] {
            let f = SmallField::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            assert_eq!(f.generator(), if q == 5 { 2 } else { q - 1 }.min(q - 1));
        }
    }
}
