//! Finite Gram-matrix model of the GNS/Stinespring space of the averaged
//! state.
//!
//! The completely positive map `φ = ρ∘θ` acts diagonally on the isometry
//! basis `ee_k` (`k ∈ ℕ₀^l`): its value on an element is the diagonal
//! symbol of the averaged part. The associated inner-product space is
//! spanned by symbols `[x ⊗ ee_k]` with
//!
//! ```text
//! ⟨[x ⊗ ee_k], [y ⊗ ee_k']⟩ = 0                    when k ≠ k'
//! ⟨[x ⊗ ee_k], [y ⊗ ee_k]⟩  = φ(y* x) eigenvalue at k
//! ```
//!
//! No completion is built — every statement of interest is about finitely
//! many inner products, assembled here as exact Gram matrices. The module
//! also verifies the reduction lemma: a vector `[s^e s^{*k} ⊗ ee_k]` with
//! `e ≤ k` equals a unimodular constant times `[s^{*(k-e)} ⊗ ee_k]`,
//! exactly.

use crate::algebra::{adjoint, mul, normalize, Element, Letter, NormalMonomial, Signature, Word};
use crate::normkit::diagonal_symbol;
use crate::phase::{Phase, PhasePolynomial};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StinespringError {
    #[error("precondition violated: {reason}")]
    PreconditionViolated { reason: String },
}

/// A symbol `[x ⊗ ee_k]`: an algebra element tensored with the isometry
/// basis vector labeled by the `l`-tuple `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StVector {
    pub x: Element,
    pub k: Vec<u32>,
}

impl StVector {
    pub fn new(sig: &Signature, x: Element, k: Vec<u32>) -> Result<Self, StinespringError> {
        if k.len() != sig.l() {
            return Err(StinespringError::PreconditionViolated {
                reason: format!("label needs {} coordinates, got {}", sig.l(), k.len()),
            });
        }
        Ok(StVector { x, k })
    }
}

/// The scalar `c` with `φ(x) ee_k = c · ee_k`: the diagonal symbol of the
/// averaged part of `x`, read at the cell containing `k`.
pub fn phi_eigenvalue(sig: &Signature, x: &Element, k: &[u32]) -> PhasePolynomial {
    assert!(k.len() == sig.l(), "eigenvalue label needs {} coordinates", sig.l());
    let averaged = crate::algebra::theta(sig, x);
    diagonal_symbol(sig, &averaged)
        .expect("averaging lands in the projection subalgebra")
        .value_at_index(k)
}

/// `⟨v, w⟩` in the Stinespring space, exact.
pub fn st_inner(sig: &Signature, v: &StVector, w: &StVector) -> PhasePolynomial {
    if v.k != w.k {
        return PhasePolynomial::zero();
    }
    phi_eigenvalue(sig, &mul(sig, &adjoint(sig, &w.x), &v.x), &v.k)
}

/// The exact Gram matrix of the given vectors; Hermitian by construction.
pub fn gram_matrix(sig: &Signature, vectors: &[StVector]) -> Vec<Vec<PhasePolynomial>> {
    vectors
        .iter()
        .map(|v| vectors.iter().map(|w| st_inner(sig, v, w)).collect())
        .collect()
}

/// The reduction lemma, computationally: for `0 ≤ e ≤ k` (pointwise) the
/// vector `[s^e s^{*k} ⊗ ee_k]` is a unimodular constant times
/// `[s^{*(k-e)} ⊗ ee_k]`. Returns that constant after asserting the
/// difference has exactly zero norm.
pub fn check_unimodular_reduction(
    sig: &Signature,
    e: &[u32],
    k: &[u32],
) -> Result<Phase, StinespringError> {
    if e.len() != sig.l() || k.len() != sig.l() {
        return Err(StinespringError::PreconditionViolated {
            reason: format!("tuples need {} coordinates", sig.l()),
        });
    }
    if let Some(i) = (0..sig.l()).find(|&i| e[i] > k[i]) {
        return Err(StinespringError::PreconditionViolated {
            reason: format!("e_{} = {} exceeds k_{} = {}", i + 1, e[i], i + 1, k[i]),
        });
    }

    // x is the word s_1^{e_1}…s_l^{e_l} s_1^{*k_1}…s_l^{*k_l}, with its
    // normalization phase kept (the lemma speaks about the word).
    let mut letters = Vec::new();
    for (i, &ei) in e.iter().enumerate() {
        letters.extend(std::iter::repeat_n(Letter::plain(i + 1), ei as usize));
    }
    for (i, &ki) in k.iter().enumerate() {
        letters.extend(std::iter::repeat_n(Letter::star(i + 1), ki as usize));
    }
    let (phase_x, mono_x) = normalize(sig, &Word::new(letters));
    let x = Element::term(mono_x, PhasePolynomial::phase(&phase_x));

    let residual_f: Vec<u32> = k.iter().zip(e).map(|(&ki, &ei)| ki - ei).collect();
    let y = Element::from_monomial(
        NormalMonomial::new(sig, vec![0; sig.l()], residual_f, vec![0; sig.n() - sig.l()])
            .expect("shapes match the signature"),
    );

    let vx = StVector { x, k: k.to_vec() };
    let vy = StVector { x: y, k: k.to_vec() };
    let a = st_inner(sig, &vx, &vx);
    let b = st_inner(sig, &vx, &vy);
    let d = st_inner(sig, &vy, &vy);

    let c = b
        .as_unit_phase()
        .expect("reduction pairing must be a unit phase");
    let c_poly = PhasePolynomial::phase(&c);
    // ‖x − c·y‖² = ⟨x,x⟩ − conj(c)⟨x,y⟩ − c⟨y,x⟩ + |c|²⟨y,y⟩, exactly 0.
    let residual = a
        .sub(&b.mul(&c_poly.conj()))
        .sub(&c_poly.mul(&b.conj()))
        .add(&c_poly.mul(&c_poly.conj()).mul(&d));
    assert!(
        residual.is_zero(),
        "reduction left a nonzero residual: {residual}"
    );
    assert!(c.mul(&c.conj()).is_identity());
    Ok(c)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
/// Small matrices only — plenty for Gram-matrix positivity checks.
#[allow(clippy::needless_range_loop)]
pub(crate) fn symmetric_eigenvalues(mat: &[Vec<f64>]) -> Vec<f64> {
    let n = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    for _ in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..n {
                    let (arp, arq) = (a[r][p], a[r][q]);
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let (apr, aqr) = (a[p][r], a[q][r]);
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Eigenvalues of a complex Hermitian matrix via the real symmetric
/// embedding `[[Re, −Im], [Im, Re]]` (each eigenvalue shows up twice).
pub fn hermitian_eigenvalues(re: &[Vec<f64>], im: &[Vec<f64>]) -> Vec<f64> {
    let n = re.len();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for p in 0..n {
        for q in 0..n {
            big[p][q] = re[p][q];
            big[p][q + n] = -im[p][q];
            big[p + n][q] = im[p][q];
            big[p + n][q + n] = re[p][q];
        }
    }
    symmetric_eigenvalues(&big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_element;
    use crate::phase::AngleAssignment;
    use num_rational::BigRational;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sig_2_1() -> Signature {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 4))]).unwrap();
        Signature::new(2, 1, angles).unwrap()
    }

    fn sig_2_2() -> Signature {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 3))]).unwrap();
        Signature::new(2, 2, angles).unwrap()
    }

    fn sig_3_2() -> Signature {
        let angles = AngleAssignment::exact(
            3,
            vec![(1, 2, rat(1, 3)), (1, 3, rat(1, 5)), (2, 3, rat(2, 7))],
        )
        .unwrap();
        Signature::new(3, 2, angles).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        let sig = sig_2_1();
        let one = Element::one(&sig);
        for k in 0..4u32 {
            assert_eq!(phi_eigenvalue(&sig, &one, &[k]), PhasePolynomial::one());
        }
        let s1 = Element::generator(&sig, 1, false);
        assert!(phi_eigenvalue(&sig, &s1, &[2]).is_zero());
        let proj = mul(&sig, &s1, &adjoint(&sig, &s1));
        assert!(phi_eigenvalue(&sig, &proj, &[0]).is_zero());
        assert_eq!(phi_eigenvalue(&sig, &proj, &[1]), PhasePolynomial::one());
        assert_eq!(phi_eigenvalue(&sig, &proj, &[5]), PhasePolynomial::one());
    }

    #[test]
    fn inner_product_examples() {
        let sig = sig_2_1();
        let one = Element::one(&sig);
        let vac = StVector::new(&sig, one.clone(), vec![0]).unwrap();
        assert_eq!(st_inner(&sig, &vac, &vac), PhasePolynomial::one());

        // [s_1* ⊗ ee_0] has norm zero: the star letter hits the vacuum.
        let s1s = Element::generator(&sig, 1, true);
        let v = StVector::new(&sig, s1s, vec![0]).unwrap();
        assert!(st_inner(&sig, &v, &v).is_zero());

        // Different labels are orthogonal outright.
        let w = StVector::new(&sig, one, vec![1]).unwrap();
        assert!(st_inner(&sig, &v, &w).is_zero());
    }

    #[test]
    fn norm_pattern_follows_star_exponents() {
        // ‖[s^e u^g s^{*f} ⊗ ee_k]‖² = 1 when f ≤ k pointwise, else 0.
        let sig = sig_3_2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f1 in 0..=3u32 {
            for f2 in 0..=3u32 {
                for k1 in 0..=3u32 {
                    for k2 in 0..=3u32 {
                        let e = vec![rng.gen_range(0..=2u32), rng.gen_range(0..=2u32)];
                        let g = vec![rng.gen_range(-2..=2i64)];
                        let m = NormalMonomial::new(&sig, e, vec![f1, f2], g).unwrap();
                        let v = StVector::new(&sig, Element::from_monomial(m), vec![k1, k2])
                            .unwrap();
                        let norm_sq = st_inner(&sig, &v, &v);
                        if f1 <= k1 && f2 <= k2 {
                            assert_eq!(norm_sq, PhasePolynomial::one());
                        } else {
                            assert!(norm_sq.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vacuum_level_basis_is_orthonormal() {
        // {[s_1^e u^g ⊗ ee_0]} for e ≤ 2, |g| ≤ 2 is orthonormal.
        let sig = sig_2_1();
        let mut vectors = Vec::new();
        for e in 0..=2u32 {
            for g in -2..=2i64 {
                let m = NormalMonomial::new(&sig, vec![e], vec![0], vec![g]).unwrap();
                vectors.push(StVector::new(&sig, Element::from_monomial(m), vec![0]).unwrap());
            }
        }
        let gram = gram_matrix(&sig, &vectors);
        for (r, row) in gram.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                if r == c {
                    assert_eq!(entry, &PhasePolynomial::one());
                } else {
                    assert!(entry.is_zero(), "entry ({r},{c}) = {entry}");
                }
            }
        }
    }

    #[test]
    fn level_k_basis_is_orthonormal() {
        let sig = sig_3_2();
        let k = vec![2, 1];
        let mut vectors = Vec::new();
        for e1 in 0..=1u32 {
            for e2 in 0..=1u32 {
                for g in -1..=1i64 {
                    let m = NormalMonomial::new(&sig, vec![e1, e2], k.clone(), vec![g]).unwrap();
                    vectors
                        .push(StVector::new(&sig, Element::from_monomial(m), k.clone()).unwrap());
                }
            }
        }
        let gram = gram_matrix(&sig, &vectors);
        for (r, row) in gram.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                if r == c {
                    assert_eq!(entry, &PhasePolynomial::one());
                } else {
                    assert!(entry.is_zero());
                }
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn gram_matrices_are_hermitian_and_psd() {
        let sig = sig_2_2();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let vectors: Vec<StVector> = (0..4)
                .map(|_| {
                    let x = random_element(&sig, &mut rng, 3, (2, 2, 0), true);
                    let k = vec![rng.gen_range(0..=2u32), rng.gen_range(0..=2u32)];
                    StVector::new(&sig, x, k).unwrap()
                })
                .collect();
            let gram = gram_matrix(&sig, &vectors);
            let m = gram.len();
            for r in 0..m {
                for c in 0..m {
                    assert_eq!(gram[r][c], gram[c][r].conj());
                }
            }
            let re: Vec<Vec<f64>> = gram
                .iter()
                .map(|row| row.iter().map(|v| v.eval(sig.angles()).re).collect())
                .collect();
            let im: Vec<Vec<f64>> = gram
                .iter()
                .map(|row| row.iter().map(|v| v.eval(sig.angles()).im).collect())
                .collect();
            for ev in hermitian_eigenvalues(&re, &im) {
                assert!(ev > -1e-10, "negative Gram eigenvalue {ev}");
            }
        }
    }

    #[test]
    fn reduction_constant_examples() {
        let sig = sig_2_2();
        // e = 0: nothing to reduce.
        let c = check_unimodular_reduction(&sig, &[0, 0], &[2, 1]).unwrap();
        assert!(c.is_identity());

        // Single isometry slot: projection onto an occupied level.
        let sig1 = Signature::commuting(1, 1).unwrap();
        let c = check_unimodular_reduction(&sig1, &[1], &[1]).unwrap();
        assert!(c.is_identity());

        // Two slots with a genuine twist: the constant is w_12^2.
        let c = check_unimodular_reduction(&sig, &[0, 1], &[1, 1]).unwrap();
        assert_eq!(c, Phase::w(1, 2, 2));
    }

    #[test]
    fn reduction_requires_e_below_k() {
        let sig = sig_2_2();
        assert!(matches!(
            check_unimodular_reduction(&sig, &[2, 0], &[1, 1]),
            Err(StinespringError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn reduction_sweep_is_exact() {
        let sig = sig_2_2();
        for e1 in 0..=3u32 {
            for e2 in 0..=3u32 {
                for k1 in e1..=3u32 {
                    for k2 in e2..=3u32 {
                        // The residual assertion inside would panic on failure.
                        let c = check_unimodular_reduction(&sig, &[e1, e2], &[k1, k2]).unwrap();
                        assert!(c.mul(&c.conj()).is_identity());
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_matches_known_spectra() {
        let mat = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut evs = symmetric_eigenvalues(&mat);
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((evs[0] - 1.0).abs() < 1e-12);
        assert!((evs[1] - 3.0).abs() < 1e-12);

        // Hermitian [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let re = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let im = vec![vec![0.0, 1.0], vec![-1.0, 0.0]];
        let mut evs = hermitian_eigenvalues(&re, &im);
        evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((evs[0] - 0.0).abs() < 1e-12 && (evs[1] - 0.0).abs() < 1e-12);
        assert!((evs[2] - 2.0).abs() < 1e-12 && (evs[3] - 2.0).abs() < 1e-12);
    }
}
