use super::group::{gcd, FiniteGroup};
use super::{GroupError, Result};

/// A finite group together with a splitting `G = H ⋊ ⟨c⟩`, `H` of order
/// prime to ℓ and `c` of order `ℓ^k = [G : H]`.
#[derive(Clone, Debug)]
pub struct InertiaStructure {
    pub group: FiniteGroup,
    pub ell: u64,
    /// Sorted elements of `H`.
    pub h: Vec<u32>,
    pub c: u32,
    /// `[G : H] = ℓ^k`.
    pub k: u32,
    /// `g = h_part[g] · c^exp[g]`.
    exp: Vec<u32>,
    h_part: Vec<u32>,
}

impl InertiaStructure {
    /// Validate a proposed splitting.
    pub fn new(group: FiniteGroup, ell: u64, mut h: Vec<u32>, c: u32) -> Result<Self> {
        h.sort_unstable();
        h.dedup();
        let n = group.order() as u64;
        if !group.is_normal(&h) {
            return Err(GroupError::NotInertiaForm("H is not a normal subgroup".into()));
        }
        if gcd(h.len() as u64, ell) != 1 {
            return Err(GroupError::NotInertiaForm("ell divides #H".into()));
        }
        let index = n / h.len() as u64;
        let mut k = 0;
        let mut t = index;
        while t.is_multiple_of(ell) {
            t /= ell;
            k += 1;
        }
        if t != 1 {
            return Err(GroupError::NotInertiaForm(format!("[G:H] = {index} is not a power of {ell}")));
        }
        if group.element_order(c) != index {
            return Err(GroupError::NotInertiaForm(format!("c has order {}, expected {index}", group.element_order(c))));
        }
        let mut exp = vec![u32::MAX; n as usize];
        let mut h_part = vec![0u32; n as usize];
        let mut cj = group.identity();
        for j in 0..index as u32 {
            for &x in &h {
                let g = group.mul(x, cj);
                if exp[g as usize] != u32::MAX {
                    return Err(GroupError::NotInertiaForm("H meets <c> nontrivially".into()));
                }
                exp[g as usize] = j;
                h_part[g as usize] = x;
            }
            cj = group.mul(cj, c);
        }
        Ok(InertiaStructure { group, ell, h, c, k, exp, h_part })
    }

    pub fn l_order(&self) -> u64 {
        self.ell.pow(self.k)
    }

    pub fn in_h(&self, g: u32) -> bool {
        self.exp[g as usize] == 0
    }

    /// `(h, j)` with `g = h · c^j`.
    pub fn decompose(&self, g: u32) -> (u32, u32) {
        (self.h_part[g as usize], self.exp[g as usize])
    }

    /// `H` as a group in its own right, with its embedding into `G`.
    pub fn h_group(&self) -> (FiniteGroup, Vec<u32>) {
        self.group.subgroup(&self.h)
    }
}

/// Recover `H` as the set of elements of order prime to ℓ and pick `c` as
/// the smallest-index element of order `[G : H]`.
pub fn inertia_split(group: &FiniteGroup, ell: u64) -> Result<InertiaStructure> {
    let h: Vec<u32> = group.elements().filter(|&g| gcd(group.element_order(g), ell) == 1).collect();
    if !group.is_subgroup(&h) {
        return Err(GroupError::NotInertiaForm("elements of order prime to ell do not form a subgroup".into()));
    }
    if !group.is_normal(&h) {
        return Err(GroupError::NotInertiaForm("H is not normal".into()));
    }
    let index = (group.order() / h.len()) as u64;
    let c = group
        .elements()
        .find(|&g| group.element_order(g) == index)
        .ok_or_else(|| GroupError::NotInertiaForm(format!("no element of order [G:H] = {index}")))?;
    InertiaStructure::new(group.clone(), ell, h, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, FamilySpec};

    #[test]
    fn cyclic_fifteen() {
        let g = build_family(&FamilySpec::Cyclic { n: 15 }).unwrap();
        let s = inertia_split(&g, 5).unwrap();
        assert_eq!(s.h.len(), 3);
        assert_eq!(s.group.element_order(s.c), 5);
        for x in g.elements() {
            let (h, j) = s.decompose(x);
            assert!(s.in_h(h));
            assert_eq!(g.mul(h, g.pow(s.c, j as u64)), x);
        }
    }

    #[test]
    fn symmetric_three() {
        let s3 = build_family(&FamilySpec::Dihedral { n: 3 }).unwrap();
        let s = inertia_split(&s3, 5).unwrap();
        assert_eq!(s.h.len(), 6);
        assert_eq!(s.c, s3.identity());
        assert!(matches!(inertia_split(&s3, 3), Err(GroupError::NotInertiaForm(_))));
    }

    #[test]
    fn semidirect_recovered() {
        for (n, lk, sa) in [(11, 5, 3), (41, 5, 10), (2, 25, 1), (43, 7, 4)] {
            let g = build_family(&FamilySpec::Semidirect { n, lk, s: sa }).unwrap();
            let ell = crate::linalg::poly::prime_divisors(lk)[0];
            let s = inertia_split(&g, ell).unwrap();
            assert_eq!(s.h.len() as u64, n);
            assert_eq!(s.l_order(), lk);
        }
    }
}
