use super::certificate::SymplecticPiece;
use super::{Result, SymplecticError};
use crate::groups::FiniteGroup;
use crate::linalg::OKMatrix;
use crate::padic::RingSpec;

/// An induced representation with the coset section used to build it.
#[derive(Clone, Debug)]
pub struct InducedPiece {
    pub piece: SymplecticPiece,
    /// `section[γ]` represents the γ-th left coset of the subgroup.
    pub section: Vec<u32>,
}

/// Position of each element of `group` in `sub`, if present.
fn positions(group: &FiniteGroup, sub: &[u32]) -> Vec<Option<usize>> {
    let mut pos = vec![None; group.order()];
    for (i, &x) in sub.iter().enumerate() {
        pos[x as usize] = Some(i);
    }
    pos
}

/// Minimal element of each left coset; the identity coset comes first.
pub fn default_section(group: &FiniteGroup, sub: &[u32]) -> Vec<u32> {
    let mut reps: Vec<u32> = group.left_cosets(sub).iter().map(|c| c[0]).collect();
    let pos = positions(group, sub);
    if let Some(k) = reps.iter().position(|&r| pos[r as usize].is_some()) {
        reps.swap(0, k);
        reps[0] = group.identity();
    }
    reps
}

fn coset_index(group: &FiniteGroup, pos: &[Option<usize>], section: &[u32], x: u32) -> (usize, usize) {
    section
        .iter()
        .enumerate()
        .find_map(|(k, &p)| pos[group.mul(group.inv(p), x) as usize].map(|s| (k, s)))
        .expect("section covers every coset")
}

fn build(
    ring: &RingSpec,
    group: &FiniteGroup,
    pos: &[Option<usize>],
    piece: &SymplecticPiece,
    section: &[u32],
) -> SymplecticPiece {
    let w = piece.dim();
    let m = section.len();
    let images = group
        .elements()
        .map(|g| {
            let mut big = OKMatrix::zeros(ring, m * w, m * w);
            let mut prec = ring.precision();
            for (col, &p) in section.iter().enumerate() {
                // g·p(γ') = p(γ)·s
                let (row, s) = coset_index(group, pos, section, group.mul(g, p));
                let block = &piece.images[s];
                prec = prec.min(block.prec);
                for i in 0..w {
                    for j in 0..w {
                        big.set(row * w + i, col * w + j, *block.get(i, j));
                    }
                }
            }
            big.with_prec(prec)
        })
        .collect();
    let blocks: Vec<&OKMatrix> = vec![&piece.gram; m];
    SymplecticPiece { images, gram: OKMatrix::block_diag(ring, &blocks) }
}

/// Induce a symplectic representation of the subgroup `sub` (listed so that
/// `piece.images[i]` is the image of `sub[i]`) to `group`, with the
/// block-diagonal form. Fails unless every nontrivial element of the kernel
/// has a conjugate outside the kernel, so that the result is faithful.
pub fn induce_symplectic(
    ring: &RingSpec,
    group: &FiniteGroup,
    sub: &[u32],
    piece: &SymplecticPiece,
    section: Option<&[u32]>,
) -> Result<InducedPiece> {
    let pos = positions(group, sub);
    let kernel: Vec<u32> = piece.kernel(ring).into_iter().map(|i| sub[i as usize]).collect();
    for &k in &kernel {
        if k == group.identity() {
            continue;
        }
        let escapes = group.elements().any(|x| {
            let y = group.conj(x, k);
            pos[y as usize].is_none() || !kernel.contains(&y)
        });
        if !escapes {
            return Err(SymplecticError::KernelConditionFails(k));
        }
    }
    let section = match section {
        Some(s) => s.to_vec(),
        None => default_section(group, sub),
    };
    let out = build(ring, group, &pos, piece, &section);
    if !out.is_injective(ring) {
        return Err(SymplecticError::CheckFailed("induced representation is not injective mod ell".into()));
    }
    Ok(InducedPiece { piece: out, section })
}

/// Check that inducing along two sections gives conjugate representations:
/// with `p2(γ) = p1(γ)·t_γ` and `D = blockdiag(f(t_γ))`, both `ψ2 = D⁻¹ψ1D`
/// and `DᵀeD = e` hold.
pub fn section_independence(
    ring: &RingSpec,
    group: &FiniteGroup,
    sub: &[u32],
    piece: &SymplecticPiece,
    first: &[u32],
    second: &[u32],
) -> Result<()> {
    let pos = positions(group, sub);
    let p1 = build(ring, group, &pos, piece, first);
    let p2 = build(ring, group, &pos, piece, second);
    let blocks = first
        .iter()
        .zip(second)
        .map(|(&a, &b)| {
            pos[group.mul(group.inv(a), b) as usize]
                .map(|t| &piece.images[t])
                .ok_or_else(|| SymplecticError::CheckFailed("sections do not list the same cosets".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = OKMatrix::block_diag(ring, &blocks);
    let dinv = d.inv(ring)?;
    for g in group.elements() {
        let conj = dinv.mul(ring, &p1.images[g as usize]).mul(ring, &d);
        if !conj.approx_eq(ring, &p2.images[g as usize]) {
            return Err(SymplecticError::CheckFailed(format!("ψ2({g}) ≠ D⁻¹ψ1({g})D")));
        }
    }
    if !d.transpose().mul(ring, &p1.gram).mul(ring, &d).approx_eq(ring, &p2.gram) {
        return Err(SymplecticError::CheckFailed("D does not preserve the form".into()));
    }
    Ok(())
}
