//! Irreducibility test for modules over `F_q` given by generator matrices,
//! in the Holt–Rees form of the MeatAxe.

use rand::Rng;

use super::{ModrepError, Result};
use crate::linalg::fqmatrix::spin;
use crate::linalg::FqMatrix;
use crate::padic::{FqElem, ResidueField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeatAxeResult {
    Simple,
    /// Basis of a proper nonzero submodule.
    Proper(Vec<Vec<FqElem>>),
}

impl MeatAxeResult {
    pub fn is_simple(&self) -> bool {
        matches!(self, MeatAxeResult::Simple)
    }
}

/// Decide whether `F_q^n` is simple under the algebra generated by `gens`.
/// Each attempt draws a random algebra element; the test is conclusive once
/// an irreducible factor `g` of its characteristic polynomial has
/// `dim ker g(a) = deg g`.
pub fn meataxe_is_simple<R: Rng + ?Sized>(
    fq: &ResidueField,
    gens: &[FqMatrix],
    budget: usize,
    rng: &mut R,
) -> Result<MeatAxeResult> {
    let Some(first) = gens.first() else { return Ok(MeatAxeResult::Simple) };
    let n = first.rows();
    if n <= 1 {
        return Ok(MeatAxeResult::Simple);
    }
    let transposes: Vec<FqMatrix> = gens.iter().map(FqMatrix::transpose).collect();
    let mut pool: Vec<FqMatrix> = gens.to_vec();
    for _ in 0..budget {
        let i = rng.gen_range(0..pool.len());
        let j = rng.gen_range(0..pool.len());
        let prod = pool[i].mul(fq, &pool[j]);
        pool.push(prod);
        let mut a = FqMatrix::zeros(fq, n, n);
        for m in &pool {
            a = a.add(fq, &m.scale(fq, &fq.random(rng)));
        }
        let mut factors = a.charpoly(fq).factor(fq, rng);
        factors.sort_by_key(|(g, _)| g.deg());
        for (g, _) in factors {
            let na = a.eval_poly(fq, &g);
            let ker = na.kernel(fq);
            let Some(v) = ker.first() else { continue };
            let sub = spin(fq, gens, std::slice::from_ref(v));
            if sub.dim() < n {
                return Ok(MeatAxeResult::Proper(sub.vectors));
            }
            if ker.len() != g.deg() {
                continue;
            }
            let kt = na.transpose().kernel(fq);
            let dual = spin(fq, &transposes, &kt[..1]);
            if dual.dim() < n {
                let ann = FqMatrix::from_columns(fq, n, &dual.vectors).transpose().kernel(fq);
                return Ok(MeatAxeResult::Proper(ann));
            }
            return Ok(MeatAxeResult::Simple);
        }
    }
    Err(ModrepError::InconclusiveAfterRetries(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fqmatrix::EchelonBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn is_stable(fq: &ResidueField, gens: &[FqMatrix], sub: &[Vec<FqElem>]) -> bool {
        let mut b = EchelonBasis::new(gens[0].rows());
        for v in sub {
            b.insert(fq, v);
        }
        gens.iter().all(|g| sub.iter().all(|v| b.contains(fq, &g.mul_vec(fq, v))))
    }

    #[test]
    fn rotation_mod_three_is_simple() {
        let fq = ResidueField::prime(3);
        let r = FqMatrix::from_ints(&fq, 2, 2, &[0, -1, 1, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(meataxe_is_simple(&fq, &[r], 16, &mut rng).unwrap(), MeatAxeResult::Simple);
    }

    #[test]
    fn rotation_mod_five_splits() {
        // x² + 1 has roots mod 5.
        let fq = ResidueField::prime(5);
        let r = FqMatrix::from_ints(&fq, 2, 2, &[0, -1, 1, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        match meataxe_is_simple(&fq, std::slice::from_ref(&r), 16, &mut rng).unwrap() {
            MeatAxeResult::Proper(sub) => {
                assert_eq!(sub.len(), 1);
                assert!(is_stable(&fq, &[r], &sub));
            }
            MeatAxeResult::Simple => panic!("expected a proper submodule"),
        }
    }

    #[test]
    fn upper_triangular_found_via_dual() {
        let fq = ResidueField::prime(7);
        let a = FqMatrix::from_ints(&fq, 3, 3, &[1, 1, 0, 0, 1, 1, 0, 0, 1]);
        let b = FqMatrix::from_ints(&fq, 3, 3, &[2, 0, 3, 0, 2, 5, 0, 0, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        match meataxe_is_simple(&fq, &[a.clone(), b.clone()], 16, &mut rng).unwrap() {
            MeatAxeResult::Proper(sub) => assert!(is_stable(&fq, &[a, b], &sub) && sub.len() < 3),
            MeatAxeResult::Simple => panic!("expected a proper submodule"),
        }
    }

    #[test]
    fn companion_of_irreducible_cubic() {
        // x³ + x + 1 is irreducible over F_2.
        let fq = ResidueField::prime(2);
        let c = FqMatrix::from_ints(&fq, 3, 3, &[0, 0, 1, 1, 0, 1, 0, 1, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(meataxe_is_simple(&fq, &[c], 16, &mut rng).unwrap().is_simple());
    }
}
