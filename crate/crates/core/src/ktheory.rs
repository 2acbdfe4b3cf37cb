//! K-groups of the twisted algebra, by signature shape alone.
//!
//! The K-theory is insensitive to the twisting angles (the deformation is
//! a continuous field with constant K-theory), so the groups depend only
//! on `(n, l)`: with no unitary generators the algebra behaves like a
//! higher Toeplitz algebra, `K_0 = ℤ`, `K_1 = 0`; each extra unitary
//! tensors in a circle, and both groups become `ℤ^{2^{n-l-1}}`.

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum KTheoryError {
    #[error("invalid signature (n={n}, l={l}): need 0 <= l <= n")]
    InvalidSignature { n: i64, l: i64 },
    #[error("rank 2^{exponent} exceeds the supported integer width")]
    RankOverflow { exponent: i64 },
}

/// Both K-groups are free abelian; only the ranks vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KGroups {
    pub k0_rank: u128,
    pub k1_rank: u128,
    pub torsion_free: bool,
}

pub fn kgroups(n: i64, l: i64) -> Result<KGroups, KTheoryError> {
    if n < 0 || l < 0 || l > n {
        return Err(KTheoryError::InvalidSignature { n, l });
    }
    if n == l {
        // No unitaries; covers n = l = 0 (the scalars) as well.
        return Ok(KGroups {
            k0_rank: 1,
            k1_rank: 0,
            torsion_free: true,
        });
    }
    let exponent = n - l - 1;
    if exponent >= 128 {
        return Err(KTheoryError::RankOverflow { exponent });
    }
    let rank = 1u128 << exponent;
    Ok(KGroups {
        k0_rank: rank,
        k1_rank: rank,
        torsion_free: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_isometry_signatures_have_toeplitz_k_theory() {
        for n in 0..=5 {
            let k = kgroups(n, n).unwrap();
            assert_eq!((k.k0_rank, k.k1_rank), (1, 0));
            assert!(k.torsion_free);
        }
    }

    #[test]
    fn unitary_directions_double_the_ranks() {
        assert_eq!(
            kgroups(2, 1).unwrap(),
            KGroups { k0_rank: 1, k1_rank: 1, torsion_free: true }
        );
        assert_eq!(
            kgroups(4, 1).unwrap(),
            KGroups { k0_rank: 4, k1_rank: 4, torsion_free: true }
        );
        assert_eq!(
            kgroups(5, 0).unwrap(),
            KGroups { k0_rank: 16, k1_rank: 16, torsion_free: true }
        );
    }

    #[test]
    fn shape_validation() {
        assert!(matches!(
            kgroups(2, 3),
            Err(KTheoryError::InvalidSignature { .. })
        ));
        assert!(matches!(
            kgroups(-1, -1),
            Err(KTheoryError::InvalidSignature { .. })
        ));
        assert!(matches!(
            kgroups(200, 0),
            Err(KTheoryError::RankOverflow { .. })
        ));
    }
}
