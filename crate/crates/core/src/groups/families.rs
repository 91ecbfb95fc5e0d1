use serde::{Deserialize, Serialize};

use super::group::FiniteGroup;
use super::{GroupError, Result};

/// Presentations of the built-in group families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Cyclic { n: u64 },
    /// Order `2n`: rotations `r^a` at index `a`, reflections `r^a f` at `n + a`.
    Dihedral { n: u64 },
    /// Indices: 1, −1, i, −i, j, −j, k, −k.
    Quaternion8,
    /// `C_n ⋊ C_lk` with `c h c⁻¹ = h^s`; `h^a c^b` has index `a + n·b`.
    Semidirect { n: u64, lk: u64, s: u64 },
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn build_family(spec: &FamilySpec) -> Result<FiniteGroup> {
    match *spec {
        FamilySpec::Cyclic { n } => build_family(&FamilySpec::Semidirect { n, lk: 1, s: 1 }),
        FamilySpec::Dihedral { n } => build_family(&FamilySpec::Semidirect { n, lk: 2, s: n - 1 }),
        FamilySpec::Quaternion8 => Ok(quaternion8()),
        FamilySpec::Semidirect { n, lk, s } => {
            if n == 0 || lk == 0 {
                return Err(GroupError::BadTable("empty factor".into()));
            }
            let order = (n * lk) as usize;
            if order > 1 << 16 {
                return Err(GroupError::TooLarge { order, bound: 1 << 16 });
            }
            if n > 1 && (super::gcd(s, n) != 1 || pow_mod(s, lk, n) != 1) {
                return Err(GroupError::BadAction { n, k: lk, s });
            }
            let spow: Vec<u64> = (0..lk).map(|b| pow_mod(s, b, n)).collect();
            Ok(FiniteGroup::from_fn(order, |x, y| {
                let (a1, b1) = (x as u64 % n, x as u64 / n);
                let (a2, b2) = (y as u64 % n, y as u64 / n);
                let a = (a1 + spow[b1 as usize] * a2) % n;
                let b = (b1 + b2) % lk;
                (a + n * b) as usize
            }))
        }
    }
}

fn quaternion8() -> FiniteGroup {
    // Unit products among 1, i, j, k as (sign, unit).
    const PROD: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    FiniteGroup::from_fn(8, |x, y| {
        let (neg, u) = PROD[x / 2][y / 2];
        let sign = (x % 2 == 1) ^ (y % 2 == 1) ^ neg;
        2 * u + sign as usize
    })
}
