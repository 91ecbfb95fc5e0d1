//! Conjugacy classes and ordinary character tables by the Dixon–Schneider
//! method: simultaneous eigenvectors of the class matrices over an auxiliary
//! prime field, lifted to sums of roots of unity and checked exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::FiniteGroup;
use super::{GroupError, Result, MAX_TABLE_ORDER};
use crate::linalg::poly::{cyclotomic_int, int_poly_rem, prime_divisors};
use crate::padic::is_prime;

#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    /// Sorted by `(size, min element)`, identity class first; each class sorted.
    pub classes: Vec<Vec<u32>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn size(&self, r: usize) -> usize {
        self.classes[r].len()
    }

    pub fn rep(&self, r: usize) -> u32 {
        self.classes[r][0]
    }
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let gens = g.generators();
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for x in g.elements() {
        if class_of[x as usize] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        class_of[x as usize] = idx;
        let mut orbit = vec![x];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for &s in &gens {
                let z = g.conj(s, y);
                if class_of[z as usize] == usize::MAX {
                    class_of[z as usize] = idx;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    let id = g.identity();
    classes.sort_by_key(|c| (c.len(), c[0] != id, c[0]));
    for (r, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x as usize] = r;
        }
    }
    ConjugacyClasses { classes, class_of }
}

/// `Σ n_a ζ_e^a` with nonnegative multiplicities, sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSum {
    pub terms: Vec<(u32, u32)>,
}

impl RootSum {
    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|&(_, n)| n as u64).sum()
    }

    /// Image under `ζ ↦ ζ^t`.
    pub fn galois(&self, t: u64, e: u64) -> RootSum {
        let mut terms: Vec<(u32, u32)> = self.terms.iter().map(|&(a, n)| ((a as u64 * t % e) as u32, n)).collect();
        terms.sort_unstable();
        RootSum { terms }
    }

    /// Coefficients in the power basis `1, ζ, …, ζ^(φ(e)−1)`.
    pub fn power_basis(&self, e: u64, phi_e: &[i64]) -> Vec<i64> {
        let mut v = vec![0i64; e as usize];
        for &(a, n) in &self.terms {
            v[a as usize] += n as i64;
        }
        int_poly_rem(&v, phi_e)
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    pub degree: u64,
    /// Value on each conjugacy class.
    pub values: Vec<RootSum>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub classes: ConjugacyClasses,
    pub exponent: u64,
    pub characters: Vec<Character>,
    /// Integer coefficients of `Φ_e`, low degree first.
    pub cyclotomic: Vec<i64>,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn value(&self, chi: usize, g: u32) -> &RootSum {
        &self.characters[chi].values[self.classes.class_of[g as usize]]
    }

    /// Exact check of both orthogonality relations in `Z[ζ_e]`.
    pub fn verify(&self, order: usize) -> Result<()> {
        let e = self.exponent as usize;
        let k = self.classes.len();
        if self.characters.len() != k {
            return Err(GroupError::TableCheckFailed(format!("{} characters for {k} classes", self.characters.len())));
        }
        let check = |acc: Vec<i64>, expect: i64, what: String| -> Result<()> {
            let r = int_poly_rem(&acc, &self.cyclotomic);
            if r[0] != expect || r[1..].iter().any(|&c| c != 0) {
                return Err(GroupError::TableCheckFailed(what));
            }
            Ok(())
        };
        for (i, x) in self.characters.iter().enumerate() {
            if !(order as u64).is_multiple_of(x.degree) {
                return Err(GroupError::TableCheckFailed(format!("degree {} does not divide {order}", x.degree)));
            }
            for (j, y) in self.characters.iter().enumerate().skip(i) {
                let mut acc = vec![0i64; e];
                for r in 0..k {
                    let size = self.classes.size(r) as i64;
                    for &(a, na) in &x.values[r].terms {
                        for &(b, nb) in &y.values[r].terms {
                            acc[(a as usize + e - b as usize) % e] += size * na as i64 * nb as i64;
                        }
                    }
                }
                let expect = if i == j { order as i64 } else { 0 };
                check(acc, expect, format!("row orthogonality for characters {i}, {j}"))?;
            }
        }
        for r in 0..k {
            for s in r..k {
                let mut acc = vec![0i64; e];
                for x in &self.characters {
                    for &(a, na) in &x.values[r].terms {
                        for &(b, nb) in &x.values[s].terms {
                            acc[(a as usize + e - b as usize) % e] += na as i64 * nb as i64;
                        }
                    }
                }
                let expect = if r == s { (order / self.classes.size(r)) as i64 } else { 0 };
                check(acc, expect, format!("column orthogonality for classes {r}, {s}"))?;
            }
        }
        Ok(())
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Reduced row echelon form of a dense matrix mod `p`; returns pivot columns.
fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = invmod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&prow).skip(c) {
                *x = (*x + p - mulmod(f, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a square matrix mod `p`.
fn kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let n = a.first().map_or(0, |r| r.len());
    let pivots = rref(&mut a, p);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Minimal polynomial (monic, low degree first) of `v` under `x`, with the
/// Krylov vectors `v, Xv, …`.
fn krylov_minpoly(x: &[Vec<u64>], v: Vec<u64>, p: u64) -> (Vec<u64>, Vec<Vec<u64>>) {
    let apply = |v: &[u64]| -> Vec<u64> {
        x.iter().map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| (acc + a * b) % p)).collect()
    };
    let mut krylov: Vec<Vec<u64>> = Vec::new();
    // Echelonized Krylov vectors, each with its combination of the originals.
    let mut ech: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut v = v;
    loop {
        let mut w = v.clone();
        let mut comb = vec![0u64; krylov.len() + 1];
        comb[krylov.len()] = 1;
        for (piv, row, rc) in &ech {
            let f = w[*piv];
            if f != 0 {
                for (a, &b) in w.iter_mut().zip(row) {
                    *a = (*a + p - mulmod(f, b, p)) % p;
                }
                for (a, &b) in comb.iter_mut().zip(rc) {
                    *a = (*a + p - mulmod(f, b, p)) % p;
                }
            }
        }
        let Some(piv) = w.iter().position(|&c| c != 0) else {
            return (comb, krylov);
        };
        let inv = invmod(w[piv], p);
        w.iter_mut().for_each(|a| *a = mulmod(*a, inv, p));
        comb.iter_mut().for_each(|a| *a = mulmod(*a, inv, p));
        ech.push((piv, w, comb));
        for (_, _, rc) in ech.iter_mut() {
            rc.resize(krylov.len() + 2, 0);
        }
        let next = apply(&v);
        krylov.push(v);
        v = next;
    }
}

/// Eigenspaces of a diagonalizable matrix mod `p` whose eigenvalues lie in `F_p`.
fn eigenspaces(x: &[Vec<u64>], p: u64, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<Vec<u64>>>> {
    let d = x.len();
    let mut roots: Vec<u64> = Vec::new();
    for _ in 0..8 {
        let v: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        let (minpoly, krylov) = krylov_minpoly(x, v, p);
        let deg = minpoly.len() - 1;
        let found: Vec<u64> = (0..p)
            .filter(|&l| minpoly.iter().rev().fold(0, |acc, &c| (mulmod(acc, l, p) + c) % p) == 0)
            .collect();
        if found.len() != deg {
            return None;
        }
        if deg == d {
            // Simple spectrum: the eigenvector for λ is (m(x)/(x−λ))(X)·v.
            return Some(
                found
                    .iter()
                    .map(|&l| {
                        let mut q = vec![0u64; deg];
                        let mut carry = 0;
                        for i in (0..deg).rev() {
                            carry = (minpoly[i + 1] + mulmod(carry, l, p)) % p;
                            q[i] = carry;
                        }
                        let mut vec = vec![0u64; d];
                        for (c, kv) in q.iter().zip(&krylov) {
                            for (a, &b) in vec.iter_mut().zip(kv) {
                                *a = (*a + mulmod(*c, b, p)) % p;
                            }
                        }
                        vec![vec]
                    })
                    .collect(),
            );
        }
        roots.extend(found);
        roots.sort_unstable();
        roots.dedup();
        let spaces: Vec<Vec<Vec<u64>>> = roots
            .iter()
            .map(|&l| {
                let shifted: Vec<Vec<u64>> = x
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter().enumerate().map(|(j, &a)| if i == j { (a + p - l) % p } else { a }).collect()
                    })
                    .collect();
                kernel(&shifted, p)
            })
            .collect();
        if spaces.iter().map(Vec::len).sum::<usize>() == d {
            return Some(spaces);
        }
    }
    None
}

fn primitive_root(p: u64) -> u64 {
    let fs = prime_divisors(p - 1);
    (2..p).find(|&g| fs.iter().all(|&f| powmod(g, (p - 1) / f, p) != 1)).expect("prime has a primitive root")
}

/// Character table by Dixon–Schneider, verified exactly before returning.
pub fn character_table_dixon(g: &FiniteGroup) -> Result<CharacterTable> {
    let n = g.order();
    if n > MAX_TABLE_ORDER {
        return Err(GroupError::TooLarge { order: n, bound: MAX_TABLE_ORDER });
    }
    let cc = conjugacy_classes(g);
    let k = cc.len();
    let e = g.exponent();
    let p = (1..10_000u64)
        .map(|m| m * e + 1)
        .find(|&p| p > n as u64 && p * p > 4 * n as u64 && is_prime(p))
        .ok_or(GroupError::AuxPrimeSearchFailed(e))?;
    let z = powmod(primitive_root(p), (p - 1) / e, p);

    // (M_j)[s][r] = #{x ∈ C_j : x⁻¹ z_r ∈ C_s}; M_j ω = ω_j ω.
    let class_matrix = |j: usize| -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; k]; k];
        for r in 0..k {
            let zr = cc.rep(r);
            for &x in &cc.classes[j] {
                let s = cc.class_of[g.mul(g.inv(x), zr) as usize];
                m[s][r] += 1;
            }
        }
        m
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c1a5);
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect()];
    for j in 1..k {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(j);
        let mut next = Vec::new();
        for basis in spaces {
            let dim = basis.len();
            if dim == 1 {
                next.push(basis);
                continue;
            }
            // Restriction X with S·X = M·S, read off from rref([S | M S]).
            let mut aug: Vec<Vec<u64>> = (0..k)
                .map(|row| {
                    let mut v: Vec<u64> = basis.iter().map(|b| b[row]).collect();
                    v.extend(basis.iter().map(|b| m[row].iter().zip(b).fold(0, |acc, (&a, &c)| (acc + a * c) % p)));
                    v
                })
                .collect();
            rref(&mut aug, p);
            let x: Vec<Vec<u64>> = aug[..dim].iter().map(|r| r[dim..].to_vec()).collect();
            let split = eigenspaces(&x, p, &mut rng)
                .ok_or_else(|| GroupError::TableCheckFailed("class matrix not diagonalizable mod p".into()))?;
            for local in split {
                let global: Vec<Vec<u64>> = local
                    .iter()
                    .map(|c| {
                        (0..k).map(|row| basis.iter().zip(c).fold(0, |acc, (b, &ci)| (acc + b[row] * ci) % p)).collect()
                    })
                    .collect();
                next.push(global);
            }
        }
        spaces = next;
    }
    if spaces.len() != k {
        return Err(GroupError::TableCheckFailed("class matrices do not separate characters".into()));
    }

    let inv_class: Vec<usize> = (0..k).map(|r| cc.class_of[g.inv(cc.rep(r)) as usize]).collect();
    let orders: Vec<u64> = (0..k).map(|r| g.element_order(cc.rep(r))).collect();
    // Power maps and, per class, the discrete Fourier weights over ⟨g⟩:
    // weights[r][a] lists (class s, Σ_{k: g^k ∈ C_s} z_o^(−a k)).
    let weights: Vec<Vec<Vec<(usize, u64)>>> = (0..k)
        .map(|r| {
            let o = orders[r];
            let zo_inv = invmod(powmod(z, e / o, p), p);
            let mut pw = Vec::with_capacity(o as usize);
            let mut y = g.identity();
            for _ in 0..o {
                pw.push(cc.class_of[y as usize]);
                y = g.mul(y, cc.rep(r));
            }
            let mut distinct = pw.clone();
            distinct.sort_unstable();
            distinct.dedup();
            (0..o)
                .map(|a| {
                    let step = powmod(zo_inv, a, p);
                    let mut acc = vec![0u64; distinct.len()];
                    let mut t = 1;
                    for &s in &pw {
                        let idx = distinct.binary_search(&s).unwrap();
                        acc[idx] = (acc[idx] + t) % p;
                        t = mulmod(t, step, p);
                    }
                    distinct.iter().copied().zip(acc).collect()
                })
                .collect()
        })
        .collect();

    let cyclotomic = cyclotomic_int(e);
    let mut characters = Vec::with_capacity(k);
    for space in spaces {
        let w = &space[0];
        if w[0] == 0 {
            return Err(GroupError::TableCheckFailed("eigenvector vanishes at the identity".into()));
        }
        let w0 = invmod(w[0], p);
        let omega: Vec<u64> = w.iter().map(|&x| mulmod(x, w0, p)).collect();
        let s = (0..k).fold(0, |acc, r| {
            (acc + mulmod(mulmod(omega[r], omega[inv_class[r]], p), invmod(cc.size(r) as u64, p), p)) % p
        });
        let d2 = mulmod(n as u64 % p, invmod(s, p), p);
        let degree = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| GroupError::TableCheckFailed("no integral degree".into()))?;
        let chi: Vec<u64> =
            (0..k).map(|r| mulmod(mulmod(omega[r], degree, p), invmod(cc.size(r) as u64, p), p)).collect();
        let mut values = Vec::with_capacity(k);
        for r in 0..k {
            let o = orders[r];
            let inv_o = invmod(o, p);
            let mut terms = Vec::new();
            for (a, wa) in weights[r].iter().enumerate() {
                let na = mulmod(wa.iter().fold(0, |acc, &(s, c)| (acc + mulmod(chi[s], c, p)) % p), inv_o, p);
                if na > degree {
                    return Err(GroupError::TableCheckFailed(format!("multiplicity out of range on class {r}")));
                }
                if na > 0 {
                    terms.push(((a as u64 * (e / o)) as u32, na as u32));
                }
            }
            let v = RootSum { terms };
            if v.degree() != degree {
                return Err(GroupError::TableCheckFailed(format!("eigenvalue count mismatch on class {r}")));
            }
            values.push(v);
        }
        characters.push(Character { degree, values });
    }
    let key = |c: &Character| {
        let nontrivial = c.values.iter().any(|v| v.terms != [(0, 1)]);
        let vals: Vec<Vec<i64>> = c.values.iter().map(|v| v.power_basis(e, &cyclotomic)).collect();
        (c.degree, nontrivial, vals)
    };
    characters.sort_by_cached_key(key);
    let table = CharacterTable { classes: cc, exponent: e, characters, cyclotomic };
    table.verify(n)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_family, FamilySpec};

    fn degrees(spec: FamilySpec) -> Vec<u64> {
        let g = build_family(&spec).unwrap();
        character_table_dixon(&g).unwrap().characters.iter().map(|c| c.degree).collect()
    }

    #[test]
    fn class_counts() {
        let c6 = build_family(&FamilySpec::Cyclic { n: 6 }).unwrap();
        assert_eq!(conjugacy_classes(&c6).len(), 6);
        let s3 = build_family(&FamilySpec::Dihedral { n: 3 }).unwrap();
        let cc = conjugacy_classes(&s3);
        let sizes: Vec<usize> = (0..cc.len()).map(|r| cc.size(r)).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        let q8 = build_family(&FamilySpec::Quaternion8).unwrap();
        assert_eq!(conjugacy_classes(&q8).len(), 5);
    }

    #[test]
    fn small_tables() {
        assert_eq!(degrees(FamilySpec::Cyclic { n: 1 }), vec![1]);
        assert_eq!(degrees(FamilySpec::Cyclic { n: 3 }), vec![1, 1, 1]);
        assert_eq!(degrees(FamilySpec::Dihedral { n: 3 }), vec![1, 1, 2]);
        assert_eq!(degrees(FamilySpec::Quaternion8), vec![1, 1, 1, 1, 2]);
        assert_eq!(degrees(FamilySpec::Semidirect { n: 11, lk: 5, s: 3 }), vec![1, 1, 1, 1, 1, 5, 5]);
    }

    #[test]
    fn cyclic_three_values() {
        let g = build_family(&FamilySpec::Cyclic { n: 3 }).unwrap();
        let t = character_table_dixon(&g).unwrap();
        assert_eq!(t.exponent, 3);
        // Every value on the generator is a single cube root of unity.
        let mut exps: Vec<u32> = t.characters.iter().map(|c| c.values[1].terms[0].0).collect();
        exps.sort_unstable();
        assert_eq!(exps, vec![0, 1, 2]);
    }

    #[test]
    fn larger_groups_verify() {
        for spec in [
            FamilySpec::Semidirect { n: 41, lk: 5, s: 10 },
            FamilySpec::Semidirect { n: 43, lk: 7, s: 4 },
            FamilySpec::Cyclic { n: 142 },
            FamilySpec::Semidirect { n: 26, lk: 5, s: 1 },
        ] {
            let g = build_family(&spec).unwrap();
            let t = character_table_dixon(&g).unwrap();
            let sum: u64 = t.characters.iter().map(|c| c.degree * c.degree).sum();
            assert_eq!(sum, g.order() as u64);
        }
    }
}
