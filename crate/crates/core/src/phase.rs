//! Exact arithmetic with unimodular phases.
//!
//! All phases produced by the twisted commutation relations, the shift
//! representation, the deformation cocycle and the diagonal intertwiner are
//! integer words in the half-phases `w_ij` (`i < j`), where `w_ij^2 = z_ij`
//! and `w_ji = conj(w_ij)`. A [`Phase`] stores such a word as an exponent
//! vector, together with an optional rational torsion factor `e^{2πi·r}`
//! contributed by the torus action. Equality of phases is therefore exact;
//! floating point enters only through [`Phase::eval`].
//!
//! [`PhasePolynomial`] is the group ring of the phase group over Gaussian
//! rationals — the coefficient ring for elements of the algebra. Its terms
//! are kept canonical: quarter turns (`e^{2πi·k/4} = i^k`) are folded into
//! the Gaussian-rational coefficient, so two equal ring elements always
//! compare equal structurally.
//!
//! An [`AngleAssignment`] fixes the values `φ_ij` with `z_ij = e^{2πi·φ_ij}`.
//! Pairs whose angle is exactly the rational zero commute on the nose, and
//! the assignment's [`AngleAssignment::w_power`] constructor emits no symbol
//! for them; this keeps the fully commuting signature (and the base algebra
//! of a deformation) genuinely phase-free.

use crate::scalar::GaussianRational;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A single angle value `φ_ij`.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    Rational(BigRational),
    Real(f64),
}

impl Angle {
    pub fn zero() -> Self {
        Angle::Rational(BigRational::zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Angle::Rational(r) if r.is_zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Angle::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Angle::Rational(r) => Some(r),
            Angle::Real(_) => None,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational(r) => write!(out, "{r}"),
            Angle::Real(x) => write!(out, "{x}"),
        }
    }
}

/// Whether an assignment promises exact (all-rational) angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PhaseError {
    #[error("angle pair ({i},{j}) invalid for n={n}: need 1 <= i < j <= n")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("exact mode requires rational angles, but phi_({i},{j}) is a float")]
    NonRationalAngle { i: usize, j: usize },
}

/// The assignment `(i,j) -> φ_ij` for `1 <= i < j <= n`, with
/// `z_ij = e^{2πi·φ_ij}` and `w_ij = e^{πi·φ_ij}`. Missing pairs mean
/// `φ_ij = 0`. Values are immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleAssignment {
    n: usize,
    entries: BTreeMap<(usize, usize), Angle>,
    mode: Mode,
}

impl AngleAssignment {
    /// All angles zero: the fully commuting signature.
    pub fn zero(n: usize) -> Self {
        AngleAssignment {
            n,
            entries: BTreeMap::new(),
            mode: Mode::Exact,
        }
    }

    pub fn new(
        n: usize,
        pairs: Vec<(usize, usize, Angle)>,
        mode: Mode,
    ) -> Result<Self, PhaseError> {
        let mut entries = BTreeMap::new();
        for (i, j, value) in pairs {
            if i == 0 || i >= j || j > n {
                return Err(PhaseError::InvalidPair { i, j, n });
            }
            if mode == Mode::Exact && value.as_rational().is_none() {
                return Err(PhaseError::NonRationalAngle { i, j });
            }
            // Exact zeros are not stored: the pair carries no symbol.
            if !value.is_exact_zero() {
                entries.insert((i, j), value);
            } else {
                entries.remove(&(i, j));
            }
        }
        Ok(AngleAssignment { n, entries, mode })
    }

    pub fn exact(n: usize, pairs: Vec<(usize, usize, BigRational)>) -> Result<Self, PhaseError> {
        Self::new(
            n,
            pairs
                .into_iter()
                .map(|(i, j, r)| (i, j, Angle::Rational(r)))
                .collect(),
            Mode::Exact,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    /// The angle `φ_ij`; requires `i < j`.
    pub fn phi(&self, i: usize, j: usize) -> Angle {
        assert!(i >= 1 && i < j && j <= self.n, "phi({i},{j}) out of range");
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Angle::zero)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &Angle)> {
        self.entries.iter().map(|(&(i, j), a)| (i, j, a))
    }

    /// True when `φ_ij` is exactly zero, i.e. the pair commutes with no
    /// phase and no `w_ij` symbol exists for it.
    pub fn is_trivial_pair(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        !self.entries.contains_key(&key)
    }

    /// `w_ij^k`, accepting the pair in either order (`w_ji = conj(w_ij)`).
    /// Emits the identity for pairs with exactly zero angle.
    pub fn w_power(&self, i: usize, j: usize, k: i64) -> Phase {
        assert!(i != j, "w_power needs distinct indices");
        if k == 0 || self.is_trivial_pair(i, j) {
            Phase::identity()
        } else {
            Phase::w(i, j, k)
        }
    }

    /// `z_ij^k = w_ij^{2k}`, same conventions as [`Self::w_power`].
    pub fn z_power(&self, i: usize, j: usize, k: i64) -> Phase {
        self.w_power(i, j, 2 * k)
    }
}

fn frac_mod_one(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// An exact unimodular scalar: `e^{2πi·qturns} · Π w_ij^{k_ij}`.
///
/// The exponent map stores only nonzero exponents with keys `i < j`;
/// `qturns` is reduced to `[0, 1)`. Multiplication is exponent-wise
/// addition, so the phases form an abelian group with exact equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Phase {
    qturns: BigRational,
    exps: BTreeMap<(usize, usize), i64>,
}

impl Phase {
    pub fn identity() -> Self {
        Phase {
            qturns: BigRational::zero(),
            exps: BTreeMap::new(),
        }
    }

    /// The raw word generator `w_ij^k`; a pair given in reverse order is
    /// flipped via `w_ji = w_ij^{-1}` (as a formal symbol: conjugation).
    pub fn w(i: usize, j: usize, k: i64) -> Self {
        assert!(i != j && i >= 1 && j >= 1, "invalid half-phase pair ({i},{j})");
        let mut exps = BTreeMap::new();
        if k != 0 {
            if i < j {
                exps.insert((i, j), k);
            } else {
                exps.insert((j, i), -k);
            }
        }
        Phase {
            qturns: BigRational::zero(),
            exps,
        }
    }

    /// The torsion phase `e^{2πi·r}`, reduced mod 1.
    pub fn torsion(r: &BigRational) -> Self {
        Phase {
            qturns: frac_mod_one(r),
            exps: BTreeMap::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.qturns.is_zero() && self.exps.is_empty()
    }

    pub fn exponent(&self, i: usize, j: usize) -> i64 {
        assert!(i < j);
        self.exps.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.exps.iter().map(|(&p, &k)| (p, k))
    }

    pub fn qturns(&self) -> &BigRational {
        &self.qturns
    }

    pub fn mul(&self, rhs: &Phase) -> Phase {
        let mut exps = self.exps.clone();
        for (&key, &k) in &rhs.exps {
            let entry = exps.entry(key).or_insert(0);
            *entry += k;
            if *entry == 0 {
                exps.remove(&key);
            }
        }
        Phase {
            qturns: frac_mod_one(&(&self.qturns + &rhs.qturns)),
            exps,
        }
    }

    pub fn conj(&self) -> Phase {
        Phase {
            qturns: frac_mod_one(&(-self.qturns.clone())),
            exps: self.exps.iter().map(|(&key, &k)| (key, -k)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Phase {
        let kr = BigRational::from_integer(k.into());
        Phase {
            qturns: frac_mod_one(&(&self.qturns * kr)),
            exps: self
                .exps
                .iter()
                .filter_map(|(&key, &e)| {
                    let p = e * k;
                    (p != 0).then_some((key, p))
                })
                .collect(),
        }
    }

    /// Relabels the symbol indices through `map` (torsion untouched). `map`
    /// must be strictly increasing on the indices in use, so ordered pairs
    /// stay ordered.
    pub fn map_indices(&self, map: impl Fn(usize) -> usize) -> Phase {
        Phase {
            qturns: self.qturns.clone(),
            exps: self
                .exps
                .iter()
                .map(|(&(i, j), &k)| {
                    let (mi, mj) = (map(i), map(j));
                    assert!(mi < mj, "index map must preserve order");
                    ((mi, mj), k)
                })
                .collect(),
        }
    }

    /// Splits off whole quarter turns: returns `(p, a)` with
    /// `self = i^a · p` and `p.qturns` in `[0, 1/4)`.
    pub fn canonical_quarters(&self) -> (Phase, u8) {
        let four = BigRational::from_integer(4.into());
        let quarters = (&self.qturns * &four).floor();
        let a = quarters.to_integer().to_i64().unwrap_or(0).rem_euclid(4) as u8;
        let reduced = &self.qturns - quarters / four;
        (
            Phase {
                qturns: reduced,
                exps: self.exps.clone(),
            },
            a,
        )
    }

    /// Total angle in turns mod 1, available when every involved angle is
    /// rational: the phase evaluates to `e^{2πi·turns}`.
    pub fn turns(&self, angles: &AngleAssignment) -> Option<BigRational> {
        let mut total = self.qturns.clone();
        let two = BigRational::from_integer(2.into());
        for (&(i, j), &k) in &self.exps {
            let phi = angles.phi(i, j);
            let r = phi.as_rational()?;
            total += r * BigRational::from_integer(k.into()) / &two;
        }
        Some(frac_mod_one(&total))
    }

    pub fn eval(&self, angles: &AngleAssignment) -> Complex64 {
        if let Some(t) = self.turns(angles) {
            let theta = 2.0 * std::f64::consts::PI * t.to_f64().unwrap_or(f64::NAN);
            return Complex64::new(theta.cos(), theta.sin());
        }
        let mut turns = self.qturns.to_f64().unwrap_or(f64::NAN);
        for (&(i, j), &k) in &self.exps {
            turns += angles.phi(i, j).to_f64() * (k as f64) / 2.0;
        }
        let theta = 2.0 * std::f64::consts::PI * turns;
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(out, "1");
        }
        let mut parts = Vec::new();
        if !self.qturns.is_zero() {
            parts.push(format!("e[{}]", self.qturns));
        }
        for (&(i, j), &k) in &self.exps {
            if k == 1 {
                parts.push(format!("w[{i},{j}]"));
            } else {
                parts.push(format!("w[{i},{j}]^{k}"));
            }
        }
        write!(out, "{}", parts.join("*"))
    }
}

/// Result of evaluating a phase against an angle assignment: the complex
/// value, and — when every involved angle is rational — the exact exponent
/// `r` (mod 2) with value `e^{πi·r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseValue {
    pub half_turns: Option<BigRational>,
    pub value: Complex64,
}

pub fn phase_mul(a: &Phase, b: &Phase) -> Phase {
    a.mul(b)
}

pub fn phase_conj(a: &Phase) -> Phase {
    a.conj()
}

pub fn phase_eval(a: &Phase, angles: &AngleAssignment) -> PhaseValue {
    PhaseValue {
        half_turns: a
            .turns(angles)
            .map(|t| t * BigRational::from_integer(2.into())),
        value: a.eval(angles),
    }
}

/// An element of the group ring of the phase group over the Gaussian
/// rationals: a finite sum `Σ c_p · p` with exact coefficients.
///
/// Terms are canonical: no zero coefficients, and each phase carries
/// `qturns` in `[0, 1/4)` — whole quarter turns are folded into the
/// coefficient as powers of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PhasePolynomial {
    terms: BTreeMap<Phase, GaussianRational>,
}

impl PhasePolynomial {
    pub fn zero() -> Self {
        PhasePolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::term(&Phase::identity(), c)
    }

    pub fn from_int(v: i64) -> Self {
        Self::scalar(GaussianRational::from_int(v))
    }

    pub fn phase(p: &Phase) -> Self {
        Self::term(p, GaussianRational::one())
    }

    pub fn term(p: &Phase, c: GaussianRational) -> Self {
        let mut poly = Self::zero();
        poly.add_term(p, c);
        poly
    }

    fn add_term(&mut self, p: &Phase, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let (canonical, quarters) = p.canonical_quarters();
        let coeff = &c * &GaussianRational::i_pow(quarters);
        match self.terms.get_mut(&canonical) {
            Some(existing) => {
                let sum = &*existing + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&canonical);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(canonical, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Phase, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &PhasePolynomial) -> PhasePolynomial {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> PhasePolynomial {
        PhasePolynomial {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &PhasePolynomial) -> PhasePolynomial {
        let mut out = Self::zero();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &rhs.terms {
                out.add_term(&pa.mul(pb), ca * cb);
            }
        }
        out
    }

    pub fn mul_phase(&self, p: &Phase) -> PhasePolynomial {
        let mut out = Self::zero();
        for (q, c) in &self.terms {
            out.add_term(&q.mul(p), c.clone());
        }
        out
    }

    pub fn mul_scalar(&self, c: &GaussianRational) -> PhasePolynomial {
        let mut out = Self::zero();
        for (p, existing) in &self.terms {
            out.add_term(p, existing * c);
        }
        out
    }

    pub fn conj(&self) -> PhasePolynomial {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            out.add_term(&p.conj(), c.conj());
        }
        out
    }

    /// Relabels every term's symbol indices; see [`Phase::map_indices`].
    pub fn map_indices(&self, map: impl Fn(usize) -> usize) -> PhasePolynomial {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            out.add_term(&p.map_indices(&map), c.clone());
        }
        out
    }

    /// `Some(c)` when the polynomial is the plain scalar `c` (no phase
    /// symbols, no torsion); the zero polynomial is the scalar 0.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (p, c) = self.terms.iter().next().unwrap();
                p.is_identity().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some(p)` when the polynomial is a single unimodular phase: one term
    /// whose coefficient is a power of `i` (folded back into the phase).
    pub fn as_unit_phase(&self) -> Option<Phase> {
        if self.terms.len() != 1 {
            return None;
        }
        let (p, c) = self.terms.iter().next().unwrap();
        let quarter: BigRational = BigRational::new(1.into(), 4.into());
        for a in 0u8..4 {
            if *c == GaussianRational::i_pow(a) {
                let torsion = Phase::torsion(&(quarter * BigRational::from_integer(a.into())));
                return Some(p.mul(&torsion));
            }
        }
        None
    }

    pub fn eval(&self, angles: &AngleAssignment) -> Complex64 {
        self.terms
            .iter()
            .map(|(p, c)| p.eval(angles) * c.to_complex())
            .sum()
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut rendered = Vec::new();
        for (p, c) in &self.terms {
            rendered.push(render_coeff_term(p, c));
        }
        let mut text = String::new();
        for (idx, term) in rendered.iter().enumerate() {
            if idx == 0 {
                text.push_str(term);
            } else if let Some(rest) = term.strip_prefix('-') {
                text.push_str(" - ");
                text.push_str(rest);
            } else {
                text.push_str(" + ");
                text.push_str(term);
            }
        }
        write!(out, "{text}")
    }
}

/// Renders one group-ring term `c · p`; wraps the scalar in parentheses
/// when its text has an interior sign, so products stay unambiguous.
fn render_coeff_term(p: &Phase, c: &GaussianRational) -> String {
    let coeff = c.to_string();
    let needs_parens = coeff[1..].contains(['+', '-']);
    if p.is_identity() {
        if needs_parens {
            format!("({coeff})")
        } else {
            coeff
        }
    } else if c.is_one() {
        p.to_string()
    } else if needs_parens {
        format!("({coeff})*{p}")
    } else {
        format!("{coeff}*{p}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn half_phases_square_to_full_phases() {
        let w = Phase::w(1, 2, 1);
        assert_eq!(w.mul(&w), Phase::w(1, 2, 2));
        assert_eq!(w.mul(&Phase::identity()), w);
        assert_eq!(Phase::w(1, 2, 2).mul(&Phase::w(1, 2, -2)), Phase::identity());
    }

    #[test]
    fn reversed_pair_is_conjugate() {
        assert_eq!(Phase::w(2, 1, 1), Phase::w(1, 2, -1));
        assert_eq!(Phase::w(1, 2, 2).conj(), Phase::w(1, 2, -2));
        let p = Phase::w(1, 3, 5).mul(&Phase::torsion(&rat(1, 3)));
        assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn eval_matches_known_angles() {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 2))]).unwrap();
        let w = Phase::w(1, 2, 1);
        // e^{πi/2} = i
        assert!(close(w.eval(&angles), Complex64::new(0.0, 1.0), 1e-15));

        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 3))]).unwrap();
        let z = Phase::w(1, 2, 2);
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(close(z.eval(&angles), expect, 1e-15));

        assert!(close(
            Phase::identity().eval(&angles),
            Complex64::new(1.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn eval_reports_exact_half_turns() {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 3))]).unwrap();
        let v = phase_eval(&Phase::w(1, 2, 5), &angles);
        // w^5 = e^{5πi/3}: r = 5/3 mod 2.
        assert_eq!(v.half_turns, Some(rat(5, 3)));

        let numeric = AngleAssignment::new(
            2,
            vec![(1, 2, Angle::Real(0.125))],
            Mode::Numeric,
        )
        .unwrap();
        assert_eq!(phase_eval(&Phase::w(1, 2, 1), &numeric).half_turns, None);
        assert!((phase_eval(&Phase::w(1, 2, 1), &numeric).value.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trivial_pairs_emit_no_symbol() {
        let angles = AngleAssignment::exact(3, vec![(1, 2, rat(1, 4)), (1, 3, rat(0, 1))]).unwrap();
        assert!(angles.is_trivial_pair(1, 3));
        assert!(angles.is_trivial_pair(2, 3));
        assert!(!angles.is_trivial_pair(1, 2));
        assert!(angles.w_power(1, 3, 7).is_identity());
        assert!(angles.z_power(2, 3, -1).is_identity());
        assert_eq!(angles.w_power(2, 1, 3), Phase::w(1, 2, -3));
    }

    #[test]
    fn assignment_validation() {
        assert_eq!(
            AngleAssignment::exact(2, vec![(2, 1, rat(1, 2))]),
            Err(PhaseError::InvalidPair { i: 2, j: 1, n: 2 })
        );
        assert_eq!(
            AngleAssignment::new(3, vec![(1, 2, Angle::Real(0.3))], Mode::Exact),
            Err(PhaseError::NonRationalAngle { i: 1, j: 2 })
        );
    }

    #[test]
    fn quarter_turns_fold_into_coefficients() {
        // e^{2πi·1/2} = -1 exactly.
        let half = PhasePolynomial::phase(&Phase::torsion(&rat(1, 2)));
        assert_eq!(half.as_scalar(), Some(GaussianRational::from_int(-1)));
        // e^{2πi·3/4} = -i exactly.
        let threequarters = PhasePolynomial::phase(&Phase::torsion(&rat(3, 4)));
        assert_eq!(
            threequarters.as_scalar(),
            Some(-&GaussianRational::i())
        );
        // e^{2πi·1/3} stays an honest torsion phase.
        let third = PhasePolynomial::phase(&Phase::torsion(&rat(1, 3)));
        assert_eq!(third.as_scalar(), None);
        assert_eq!(third.as_unit_phase(), Some(Phase::torsion(&rat(1, 3))));
        // Folding respects products: e^{2πi·2/3} · e^{2πi·2/3} = e^{2πi·1/3}.
        let twothirds = PhasePolynomial::phase(&Phase::torsion(&rat(2, 3)));
        assert_eq!(twothirds.mul(&twothirds), third);
    }

    #[test]
    fn unit_phase_extraction_absorbs_i_powers() {
        let p = Phase::w(1, 2, 3);
        let poly = PhasePolynomial::term(&p, GaussianRational::i());
        let unit = poly.as_unit_phase().unwrap();
        assert_eq!(unit, p.mul(&Phase::torsion(&rat(1, 4))));
        let not_unit = PhasePolynomial::term(&p, GaussianRational::from_int(2));
        assert_eq!(not_unit.as_unit_phase(), None);
    }

    #[test]
    fn polynomial_display_round_shapes() {
        let p = PhasePolynomial::term(&Phase::w(1, 2, -2), GaussianRational::one());
        assert_eq!(p.to_string(), "w[1,2]^-2");
        let q = PhasePolynomial::from_int(2)
            .add(&PhasePolynomial::term(&Phase::w(1, 2, 1), GaussianRational::from_int(-3)));
        assert_eq!(q.to_string(), "2 - 3*w[1,2]");
        assert_eq!(PhasePolynomial::zero().to_string(), "0");
    }

    fn arb_phase() -> impl Strategy<Value = Phase> {
        let exps = proptest::collection::btree_map((1usize..3usize, 0usize..2usize), -3i64..4i64, 0..3);
        (exps, 0i64..8i64).prop_map(|(raw, q)| {
            let mut p = Phase::torsion(&rat(q, 8));
            for ((i, spread), k) in raw {
                let j = i + 1 + spread;
                p = p.mul(&Phase::w(i, j, k));
            }
            p
        })
    }

    fn arb_poly() -> impl Strategy<Value = PhasePolynomial> {
        proptest::collection::vec((arb_phase(), -3i64..4i64, -3i64..4i64), 0..4).prop_map(|terms| {
            let mut poly = PhasePolynomial::zero();
            for (p, a, b) in terms {
                let c = GaussianRational::new(rat(a, 1), rat(b, 2));
                poly = poly.add(&PhasePolynomial::term(&p, c));
            }
            poly
        })
    }

    proptest! {
        #[test]
        fn phase_group_laws(p in arb_phase(), q in arb_phase(), r in arb_phase()) {
            prop_assert_eq!(p.mul(&q), q.mul(&p));
            prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
            prop_assert_eq!(p.mul(&p.conj()), Phase::identity());
            prop_assert_eq!(p.conj().conj(), p);
        }

        #[test]
        fn eval_is_a_homomorphism(p in arb_phase(), q in arb_phase()) {
            let angles = AngleAssignment::exact(
                4,
                vec![(1, 2, rat(1, 3)), (1, 3, rat(2, 5)), (2, 3, rat(1, 7)), (3, 4, rat(5, 4))],
            ).unwrap();
            let lhs = p.mul(&q).eval(&angles);
            let rhs = p.eval(&angles) * q.eval(&angles);
            prop_assert!((lhs - rhs).norm() < 1e-14);
            let c = p.conj().eval(&angles);
            prop_assert!((c - p.eval(&angles).conj()).norm() < 1e-14);
            prop_assert!((p.eval(&angles).norm() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn group_ring_laws(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(x.add(&y), y.add(&x));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert_eq!(x.sub(&x), PhasePolynomial::zero());
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        }
    }
}
