//! Finite groups given by multiplication tables.

use super::{GroupError, Result};

/// A validated finite group on the elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validate a Cayley table: closure, identity, inverses and associativity.
    ///
    /// Associativity is checked by Light's test against a generating set,
    /// which is equivalent to checking all triples.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::BadTable("table must be square and nonempty".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::BadTable("entry out of range".into()));
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or(GroupError::NoIdentity)? as u32;
        let mut inverse = vec![0u32; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            let y = (0..n)
                .find(|&y| table[x * n + y] == identity && table[y * n + x] == identity)
                .ok_or(GroupError::NoInverse(x))?;
            *inv = y as u32;
        }
        let g = FiniteGroup { n, table, identity, inverse };
        let gens = g.generators();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = g.mul(a, b);
                for &c in &gens {
                    if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                        return Err(GroupError::NotAssociative(a as usize, b as usize, c as usize));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Build from a multiplication closure on `0..n` with identity 0. The
    /// caller guarantees the group axioms (used by the presentation builders
    /// and by subgroup/quotient constructions, which are tested separately).
    pub(crate) fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = f(a, b) as u32;
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("inverse") as u32;
        }
        FiniteGroup { n, table, identity: 0, inverse }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `g h g⁻¹`.
    pub fn conj(&self, g: u32, h: u32) -> u32 {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.n as u32
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|a| (0..self.n).map(|b| self.table[a * self.n + b] as usize).collect()).collect()
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> u64 {
        self.elements().map(|g| self.element_order(g)).fold(1, lcm)
    }

    /// Sorted subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[self.identity as usize] = true;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push(y);
                }
            }
        }
        (0..self.n as u32).filter(|&x| seen[x as usize]).collect()
    }

    /// Greedy generating set: scan elements in order and keep those not yet
    /// in the span of the previous ones.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for g in self.elements() {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.closure(&gens);
                if span.len() == self.n {
                    break;
                }
            }
        }
        gens
    }

    pub fn is_subgroup(&self, set: &[u32]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s.binary_search(&self.identity).is_ok()
            && s.iter().all(|&a| s.iter().all(|&b| s.binary_search(&self.mul(a, self.inv(b))).is_ok()))
    }

    pub fn is_normal(&self, set: &[u32]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.is_subgroup(&s) && self.elements().all(|g| s.iter().all(|&h| s.binary_search(&self.conj(g, h)).is_ok()))
    }

    /// The subgroup on a sorted element list as a group in its own right;
    /// returns the group and the embedding (local index → element of `self`).
    pub fn subgroup(&self, elements: &[u32]) -> (FiniteGroup, Vec<u32>) {
        let mut els = elements.to_vec();
        els.sort_unstable();
        // Put the identity first so the subgroup's identity is 0.
        let pos = els.iter().position(|&x| x == self.identity).expect("subgroup contains identity");
        els.remove(pos);
        els.insert(0, self.identity);
        let index = |x: u32| els.iter().position(|&y| y == x).expect("closed under product");
        let g = FiniteGroup::from_fn(els.len(), |a, b| index(self.mul(els[a], els[b])));
        (g, els)
    }

    /// Quotient by a normal subgroup. Cosets are numbered by increasing
    /// minimal element, so the identity coset is 0. Returns the quotient and
    /// the projection.
    pub fn quotient(&self, normal: &[u32]) -> (FiniteGroup, Vec<u32>) {
        let mut proj = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for g in self.elements() {
            if proj[g as usize] != u32::MAX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(g);
            for &k in normal {
                proj[self.mul(g, k) as usize] = idx;
            }
        }
        let q = FiniteGroup::from_fn(reps.len(), |a, b| proj[self.mul(reps[a], reps[b]) as usize] as usize);
        (q, proj)
    }

    /// Left cosets `x·sub`, ordered by minimal element; each coset sorted.
    pub fn left_cosets(&self, sub: &[u32]) -> Vec<Vec<u32>> {
        let mut assigned = vec![false; self.n];
        let mut out = Vec::new();
        for g in self.elements() {
            if assigned[g as usize] {
                continue;
            }
            let mut coset: Vec<u32> = sub.iter().map(|&s| self.mul(g, s)).collect();
            coset.sort_unstable();
            for &x in &coset {
                assigned[x as usize] = true;
            }
            out.push(coset);
        }
        out
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
