//! Exact C*-norms on the commutative projection subalgebra.
//!
//! The balanced monomials `s^e s*^e` (equal exponents, no unitary part)
//! span a commutative ∗-subalgebra 𝒫⁰ that acts diagonally on the standard
//! basis: `s^e s*^e` fixes `e_k` when `k_i ≥ e_i` for every isometry slot
//! and kills it otherwise, with no phase at all. An element of 𝒫⁰ is
//! therefore a function on multi-indices, constant once every `k_i`
//! reaches the largest exponent `N` in play. [`DiagonalSymbol`] stores
//! that function on the `(N+1)^l` cells `α ∈ {0,…,N}^l` (where `α_i = N`
//! stands for the tail `k_i ≥ N`), and the C*-norm is the maximum modulus
//! over cells — exact whenever the coefficients are.

use crate::algebra::{Element, Signature};
use crate::phase::PhasePolynomial;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NormError {
    #[error("element has a monomial outside the projection subalgebra: {monomial}")]
    NotInProjectionAlgebra { monomial: String },
}

/// The eigenvalue function of a diagonal element, tabulated on cells.
/// Cell `α` covers the basis indices with `k_i = α_i` for `α_i < N` and
/// `k_i ≥ N` for `α_i = N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSymbol {
    cutoff: u32,
    values: BTreeMap<Vec<u32>, PhasePolynomial>,
}

impl DiagonalSymbol {
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Number of isometry slots the cells range over.
    pub fn l(&self) -> usize {
        self.values
            .keys()
            .next()
            .map(|cell| cell.len())
            .unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<u32>, &PhasePolynomial)> {
        self.values.iter()
    }

    /// The eigenvalue over the basis index `k` (isometry coordinates only):
    /// coordinates are clamped into the tail cell.
    pub fn value_at_index(&self, k: &[u32]) -> PhasePolynomial {
        let cell: Vec<u32> = k.iter().map(|&ki| ki.min(self.cutoff)).collect();
        self.values
            .get(&cell)
            .cloned()
            .unwrap_or_else(PhasePolynomial::zero)
    }

    /// Pointwise product — the symbol of the product element.
    pub fn pointwise_mul(&self, rhs: &DiagonalSymbol) -> DiagonalSymbol {
        let cutoff = self.cutoff.max(rhs.cutoff);
        let l = self.l().max(rhs.l());
        let mut values = BTreeMap::new();
        for cell in enumerate_cells(l, cutoff) {
            let v = self.value_at_index(&cell).mul(&rhs.value_at_index(&cell));
            values.insert(cell, v);
        }
        DiagonalSymbol { cutoff, values }
    }

    /// Pointwise conjugate — the symbol of the adjoint.
    pub fn conj(&self) -> DiagonalSymbol {
        DiagonalSymbol {
            cutoff: self.cutoff,
            values: self
                .values
                .iter()
                .map(|(cell, v)| (cell.clone(), v.conj()))
                .collect(),
        }
    }
}

impl fmt::Display for DiagonalSymbol {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(cell, v)| {
                let coords: Vec<String> = cell
                    .iter()
                    .map(|&a| {
                        if a == self.cutoff {
                            format!(">={a}")
                        } else {
                            a.to_string()
                        }
                    })
                    .collect();
                format!("({}) -> {v}", coords.join(","))
            })
            .collect();
        write!(out, "{}", parts.join("; "))
    }
}

/// True iff every monomial of `x` is balanced: no unitary part and equal
/// plain/star exponents on each isometry slot.
pub fn in_projection_algebra(_sig: &Signature, x: &Element) -> bool {
    x.iter().all(|(m, _)| m.is_balanced())
}

fn enumerate_cells(l: usize, cutoff: u32) -> Vec<Vec<u32>> {
    let mut cells = vec![Vec::with_capacity(l)];
    for _ in 0..l {
        let mut next = Vec::with_capacity(cells.len() * (cutoff as usize + 1));
        for cell in cells {
            for a in 0..=cutoff {
                let mut grown = cell.clone();
                grown.push(a);
                next.push(grown);
            }
        }
        cells = next;
    }
    cells
}

/// Tabulates the eigenvalue function of a diagonal element: on cell `α`
/// the value is the sum of coefficients of the monomials with `e ≤ α`
/// pointwise. The cutoff is the largest exponent occurring in `x`.
pub fn diagonal_symbol(sig: &Signature, x: &Element) -> Result<DiagonalSymbol, NormError> {
    for (m, _) in x.iter() {
        if !m.is_balanced() {
            return Err(NormError::NotInProjectionAlgebra {
                monomial: m.to_string(),
            });
        }
    }
    let cutoff = x
        .iter()
        .flat_map(|(m, _)| m.e().iter().copied())
        .max()
        .unwrap_or(0);
    let mut values = BTreeMap::new();
    for cell in enumerate_cells(sig.l(), cutoff) {
        let mut v = PhasePolynomial::zero();
        for (m, c) in x.iter() {
            if m.e().iter().zip(&cell).all(|(&ei, &ai)| ei <= ai) {
                v = v.add(c);
            }
        }
        values.insert(cell, v);
    }
    Ok(DiagonalSymbol { cutoff, values })
}

/// The C*-norm of a diagonal element: max modulus over cells. `exact_sq`
/// is the squared norm as an exact rational whenever every cell value is
/// a plain Gaussian-rational scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct PalNorm {
    pub value: f64,
    pub exact_sq: Option<BigRational>,
}

pub fn pal_norm(sig: &Signature, x: &Element) -> Result<PalNorm, NormError> {
    let symbol = diagonal_symbol(sig, x)?;
    let mut exact_sq = Some(BigRational::from_integer(0.into()));
    let mut numeric_sq = 0.0f64;
    for (_, v) in symbol.cells() {
        match (v.as_scalar(), &mut exact_sq) {
            (Some(c), Some(best)) => {
                let sq = c.norm_sqr();
                if sq > *best {
                    *best = sq;
                }
            }
            _ => exact_sq = None,
        }
        let sq = v.eval(sig.angles()).norm_sqr();
        if sq > numeric_sq {
            numeric_sq = sq;
        }
    }
    let value = match &exact_sq {
        Some(sq) => sq.to_f64().unwrap_or(numeric_sq).sqrt(),
        None => numeric_sq.sqrt(),
    };
    Ok(PalNorm { value, exact_sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{adjoint, mul, random_monomial, Element, NormalMonomial};
    use crate::phase::AngleAssignment;
    use crate::scalar::GaussianRational;
    use num_traits::One;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sig_l1() -> Signature {
        Signature::commuting(1, 1).unwrap()
    }

    fn sig_l2() -> Signature {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 3))]).unwrap();
        Signature::new(2, 2, angles).unwrap()
    }

    fn balanced(sig: &Signature, e: Vec<u32>) -> Element {
        Element::from_monomial(NormalMonomial::new(sig, e.clone(), e, vec![]).unwrap())
    }

    #[test]
    fn membership_matches_balance() {
        let sig = sig_l2();
        assert!(in_projection_algebra(&sig, &balanced(&sig, vec![1, 0])));
        assert!(in_projection_algebra(
            &sig,
            &balanced(&sig, vec![2, 0]).add(&balanced(&sig, vec![0, 1]))
        ));
        assert!(!in_projection_algebra(
            &sig,
            &Element::generator(&sig, 1, false)
        ));
        assert!(in_projection_algebra(&sig, &Element::zero()));
    }

    #[test]
    fn symbol_of_single_range_projection() {
        let sig = sig_l1();
        let symbol = diagonal_symbol(&sig, &Element::one(&sig)).unwrap();
        assert_eq!(symbol.cutoff(), 0);
        assert_eq!(symbol.value_at_index(&[0]), PhasePolynomial::one());
        assert_eq!(symbol.value_at_index(&[7]), PhasePolynomial::one());

        let p = balanced(&sig, vec![1]);
        let symbol = diagonal_symbol(&sig, &p).unwrap();
        assert_eq!(symbol.cutoff(), 1);
        assert_eq!(symbol.value_at_index(&[0]), PhasePolynomial::zero());
        assert_eq!(symbol.value_at_index(&[1]), PhasePolynomial::one());
        assert_eq!(symbol.value_at_index(&[9]), PhasePolynomial::one());

        let complement = Element::one(&sig).sub(&p);
        let symbol = diagonal_symbol(&sig, &complement).unwrap();
        assert_eq!(symbol.value_at_index(&[0]), PhasePolynomial::one());
        assert_eq!(symbol.value_at_index(&[1]), PhasePolynomial::zero());
        assert_eq!(symbol.value_at_index(&[4]), PhasePolynomial::zero());
    }

    #[test]
    fn symbol_rejects_unbalanced_input() {
        let sig = sig_l1();
        let err = diagonal_symbol(&sig, &Element::generator(&sig, 1, false)).unwrap_err();
        assert!(matches!(err, NormError::NotInProjectionAlgebra { .. }));
    }

    #[test]
    fn norm_examples() {
        let sig = sig_l1();
        let p2 = balanced(&sig, vec![2]);
        let norm = pal_norm(&sig, &p2).unwrap();
        assert_eq!(norm.exact_sq, Some(BigRational::one()));
        assert_eq!(norm.value, 1.0);

        let complement = Element::one(&sig).sub(&balanced(&sig, vec![1]));
        let norm = pal_norm(&sig, &complement).unwrap();
        assert_eq!(norm.exact_sq, Some(BigRational::one()));

        // 2·(1 − p) + 3·p has cell values (2, 3): norm 3, exactly.
        let two = Element::scalar(&sig, GaussianRational::from_int(2));
        let three_p = balanced(&sig, vec![1]).scale(&PhasePolynomial::from_int(3));
        let x = mul(&sig, &two, &complement).add(&three_p);
        let norm = pal_norm(&sig, &x).unwrap();
        assert_eq!(norm.exact_sq, Some(rat(9, 1)));
        assert_eq!(norm.value, 3.0);

        let zero = pal_norm(&sig, &Element::zero()).unwrap();
        assert_eq!(zero.exact_sq, Some(rat(0, 1)));
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn no_isometries_leaves_a_single_cell() {
        let sig = Signature::commuting(1, 0).unwrap();
        let x = Element::scalar(&sig, GaussianRational::new(rat(1, 2), rat(1, 3)));
        let symbol = diagonal_symbol(&sig, &x).unwrap();
        assert_eq!(symbol.cells().count(), 1);
        let norm = pal_norm(&sig, &x).unwrap();
        assert_eq!(norm.exact_sq, Some(rat(1, 4) + rat(1, 9)));
    }

    fn random_diagonal(sig: &Signature, rng: &mut ChaCha8Rng, terms: usize) -> Element {
        let mut x = Element::zero();
        for _ in 0..terms {
            let m = random_monomial(sig, rng, (4, 0, 0));
            let e = m.e().to_vec();
            let c = GaussianRational::new(
                rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
                rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            );
            x.add_term(
                NormalMonomial::new(sig, e.clone(), e, vec![]).unwrap(),
                PhasePolynomial::scalar(c),
            );
        }
        x
    }

    #[test]
    fn symbol_is_a_star_homomorphism() {
        let sig = sig_l2();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..30 {
            let x = random_diagonal(&sig, &mut rng, 3);
            let y = random_diagonal(&sig, &mut rng, 3);
            let sx = diagonal_symbol(&sig, &x).unwrap();
            let sy = diagonal_symbol(&sig, &y).unwrap();
            let sxy = diagonal_symbol(&sig, &mul(&sig, &x, &y)).unwrap();
            let pointwise = sx.pointwise_mul(&sy);
            let top = sxy.cutoff().max(pointwise.cutoff());
            for k1 in 0..=top {
                for k2 in 0..=top {
                    assert_eq!(
                        sxy.value_at_index(&[k1, k2]),
                        pointwise.value_at_index(&[k1, k2])
                    );
                }
            }
            let sadj = diagonal_symbol(&sig, &adjoint(&sig, &x)).unwrap();
            assert_eq!(sadj, sx.conj());
        }
    }

    #[test]
    fn norm_satisfies_the_cstar_identity() {
        let sig = sig_l2();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..30 {
            let x = random_diagonal(&sig, &mut rng, 3);
            let xx = mul(&sig, &adjoint(&sig, &x), &x);
            let nx = pal_norm(&sig, &x).unwrap();
            let nxx = pal_norm(&sig, &xx).unwrap();
            // ‖x*x‖ = ‖x‖², exactly: the squared-norm rationals satisfy
            // exact_sq(x*x) = exact_sq(x)².
            let sq = nx.exact_sq.clone().unwrap();
            assert_eq!(nxx.exact_sq, Some(&sq * &sq));
        }
    }
}
