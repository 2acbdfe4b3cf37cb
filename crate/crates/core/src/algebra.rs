//! Words, normal forms and the involutive algebra of a signature.
//!
//! A [`Signature`] `(n, l, angles)` presents `n` generators `s_1..s_n`;
//! the first `l` are isometries (`s_i* s_i = 1`), the remaining ones are
//! unitaries (`s_j* s_j = s_j s_j* = 1`), and distinct generators satisfy
//! the twisted commutation relations
//!
//! ```text
//! s_i s_j  = z_ij · s_j s_i          s_i* s_j = conj(z_ij) · s_j s_i*
//! ```
//!
//! with `z_ij = e^{2πi·φ_ij}` and `z_ji = conj(z_ij)`. Every word reduces
//! to a unique phase times a normal monomial
//! `s_1^{e_1} s_1*^{f_1} ⋯ s_l^{e_l} s_l*^{f_l} u_{l+1}^{g_{l+1}} ⋯ u_n^{g_n}`,
//! and these monomials form a linear basis. [`normalize`] computes the
//! reduction by ordered insertion; [`normalize_randomized`] reduces by
//! randomly chosen single rewrite steps and must reach the same answer —
//! the confluence suite checks exactly that.
//!
//! [`Element`]s are finite linear combinations of normal monomials with
//! group-ring coefficients, supporting exact products, adjoints, the
//! integer grading [`degree`], the torus action [`alpha`], the averaging
//! projection [`theta`], and embeddings into larger signatures.

use crate::phase::{AngleAssignment, Phase, PhasePolynomial};
use crate::scalar::GaussianRational;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AlgebraError {
    #[error("invalid signature (n={n}, l={l}): {reason}")]
    InvalidSignature { n: usize, l: usize, reason: String },
    #[error("operation requires a nonzero element")]
    ZeroInput,
    #[error("incompatible signatures: {reason}")]
    IncompatibleSignatures { reason: String },
    #[error("monomial shape mismatch: {reason}")]
    MonomialShape { reason: String },
}

/// Generator layout: `n` generators, the first `l` isometries, the rest
/// unitaries, twisted by the given angle assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    n: usize,
    l: usize,
    angles: AngleAssignment,
}

impl Signature {
    pub fn new(n: usize, l: usize, angles: AngleAssignment) -> Result<Self, AlgebraError> {
        if l > n {
            return Err(AlgebraError::InvalidSignature {
                n,
                l,
                reason: "need 0 <= l <= n".into(),
            });
        }
        if angles.n() != n {
            return Err(AlgebraError::InvalidSignature {
                n,
                l,
                reason: format!("angle assignment is for n={}", angles.n()),
            });
        }
        Ok(Signature { n, l, angles })
    }

    /// All angles zero: the fully commuting signature on `(n, l)`.
    pub fn commuting(n: usize, l: usize) -> Result<Self, AlgebraError> {
        Signature::new(n, l, AngleAssignment::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn angles(&self) -> &AngleAssignment {
        &self.angles
    }

    /// 1-based: true for `1 <= i <= l`.
    pub fn is_isometry(&self, i: usize) -> bool {
        i >= 1 && i <= self.l
    }

    fn assert_index(&self, i: usize) {
        assert!(i >= 1 && i <= self.n, "generator index {i} outside 1..={}", self.n);
    }

    fn assert_monomial(&self, m: &NormalMonomial) {
        assert!(
            m.e.len() == self.l && m.g.len() == self.n - self.l,
            "monomial shaped for (l={}, n-l={}) used with signature (n={}, l={})",
            m.e.len(),
            m.g.len(),
            self.n,
            self.l
        );
    }
}

/// One generator occurrence: `s_index` or `s_index*`. For unitary indices
/// a starred letter is the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub index: usize,
    pub star: bool,
}

impl Letter {
    pub fn plain(index: usize) -> Self {
        Letter { index, star: false }
    }

    pub fn star(index: usize) -> Self {
        Letter { index, star: true }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}{}", self.index, if self.star { "*" } else { "" })
    }
}

/// An arbitrary word in the generators and their adjoints. Any letter
/// sequence is legal input; normalization never fails and never yields 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The adjoint word: reversed order, every star flipped.
    pub fn adjoint(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&Letter { index, star }| Letter { index, star: !star })
                .collect(),
        }
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

/// Exponent record of a basis monomial:
/// `s_1^{e_1} s_1*^{f_1} ⋯ s_l^{e_l} s_l*^{f_l} u_{l+1}^{g_1} ⋯ u_n^{g_{n-l}}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalMonomial {
    e: Vec<u32>,
    f: Vec<u32>,
    g: Vec<i64>,
}

impl NormalMonomial {
    pub fn identity(sig: &Signature) -> Self {
        NormalMonomial {
            e: vec![0; sig.l],
            f: vec![0; sig.l],
            g: vec![0; sig.n - sig.l],
        }
    }

    pub fn new(
        sig: &Signature,
        e: Vec<u32>,
        f: Vec<u32>,
        g: Vec<i64>,
    ) -> Result<Self, AlgebraError> {
        if e.len() != sig.l || f.len() != sig.l || g.len() != sig.n - sig.l {
            return Err(AlgebraError::MonomialShape {
                reason: format!(
                    "expected lengths ({}, {}, {}), got ({}, {}, {})",
                    sig.l,
                    sig.l,
                    sig.n - sig.l,
                    e.len(),
                    f.len(),
                    g.len()
                ),
            });
        }
        Ok(NormalMonomial { e, f, g })
    }

    /// The monomial of a single letter.
    pub fn generator(sig: &Signature, i: usize, star: bool) -> Self {
        sig.assert_index(i);
        let mut m = NormalMonomial::identity(sig);
        if sig.is_isometry(i) {
            if star {
                m.f[i - 1] = 1;
            } else {
                m.e[i - 1] = 1;
            }
        } else {
            m.g[i - 1 - sig.l] = if star { -1 } else { 1 };
        }
        m
    }

    pub fn e(&self) -> &[u32] {
        &self.e
    }

    pub fn f(&self) -> &[u32] {
        &self.f
    }

    pub fn g(&self) -> &[i64] {
        &self.g
    }

    pub fn is_identity(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
            && self.f.iter().all(|&v| v == 0)
            && self.g.iter().all(|&v| v == 0)
    }

    /// Balanced monomials are the ones the averaging projection keeps:
    /// `e_i = f_i` for every isometry slot and all unitary exponents zero.
    pub fn is_balanced(&self) -> bool {
        self.e == self.f && self.g.iter().all(|&v| v == 0)
    }

    /// The canonical word spelling of the monomial.
    pub fn to_word(&self) -> Word {
        let l = self.e.len();
        let mut letters = Vec::new();
        for i in 0..l {
            letters.extend(std::iter::repeat_n(Letter::plain(i + 1), self.e[i] as usize));
            letters.extend(std::iter::repeat_n(Letter::star(i + 1), self.f[i] as usize));
        }
        for (slot, &gv) in self.g.iter().enumerate() {
            let index = l + 1 + slot;
            let letter = if gv >= 0 {
                Letter::plain(index)
            } else {
                Letter::star(index)
            };
            letters.extend(std::iter::repeat_n(letter, gv.unsigned_abs() as usize));
        }
        Word::new(letters)
    }

    pub fn word_len(&self) -> usize {
        self.e.iter().map(|&v| v as usize).sum::<usize>()
            + self.f.iter().map(|&v| v as usize).sum::<usize>()
            + self.g.iter().map(|&v| v.unsigned_abs() as usize).sum::<usize>()
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.e.len();
        let mut parts = Vec::new();
        for i in 0..l {
            if self.e[i] > 0 {
                if self.e[i] == 1 {
                    parts.push(format!("s{}", i + 1));
                } else {
                    parts.push(format!("s{}^{}", i + 1, self.e[i]));
                }
            }
            if self.f[i] > 0 {
                if self.f[i] == 1 {
                    parts.push(format!("s{}*", i + 1));
                } else {
                    parts.push(format!("s{}*^{}", i + 1, self.f[i]));
                }
            }
        }
        for (slot, &gv) in self.g.iter().enumerate() {
            if gv != 0 {
                if gv == 1 {
                    parts.push(format!("u{}", l + 1 + slot));
                } else {
                    parts.push(format!("u{}^{}", l + 1 + slot, gv));
                }
            }
        }
        if parts.is_empty() {
            write!(out, "1")
        } else {
            write!(out, "{}", parts.join(" "))
        }
    }
}

/// The integer weight of a monomial under the gauge action of the torus:
/// `p_i = e_i - f_i` on isometry slots, `p_j = g_j` on unitary slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree(pub Vec<i64>);

impl Degree {
    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(out, "({})", body.join(","))
    }
}

/// A finite linear combination of normal monomials with exact group-ring
/// coefficients. No zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<NormalMonomial, PhasePolynomial>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one(sig: &Signature) -> Self {
        Element::from_monomial(NormalMonomial::identity(sig))
    }

    pub fn scalar(sig: &Signature, c: GaussianRational) -> Self {
        Element::term(NormalMonomial::identity(sig), PhasePolynomial::scalar(c))
    }

    pub fn from_monomial(m: NormalMonomial) -> Self {
        Element::term(m, PhasePolynomial::one())
    }

    pub fn term(m: NormalMonomial, coeff: PhasePolynomial) -> Self {
        let mut element = Element::zero();
        element.add_term(m, coeff);
        element
    }

    pub fn generator(sig: &Signature, i: usize, star: bool) -> Self {
        Element::from_monomial(NormalMonomial::generator(sig, i, star))
    }

    pub fn add_term(&mut self, m: NormalMonomial, coeff: PhasePolynomial) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&coeff);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NormalMonomial, &PhasePolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &NormalMonomial) -> PhasePolynomial {
        self.terms.get(m).cloned().unwrap_or_else(PhasePolynomial::zero)
    }

    pub fn add(&self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Element) -> Element {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &PhasePolynomial) -> Element {
        let mut out = Element::zero();
        for (m, existing) in &self.terms {
            out.add_term(m.clone(), existing.mul(c));
        }
        out
    }

    /// Numeric view of the coefficients under the signature's angles.
    pub fn eval_coefficients(&self, angles: &AngleAssignment) -> Vec<(NormalMonomial, Complex64)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval(angles)))
            .collect()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut text = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let coeff = c.to_string();
            let coeff_wrapped = if c.num_terms() > 1 {
                format!("({coeff})")
            } else {
                coeff.clone()
            };
            let term = if m.is_identity() {
                coeff_wrapped.clone()
            } else if coeff == "1" {
                m.to_string()
            } else {
                format!("{coeff_wrapped}*{m}")
            };
            if idx == 0 {
                match term.strip_prefix("-1*") {
                    Some(rest) => {
                        text.push('-');
                        text.push_str(rest);
                    }
                    None => text.push_str(&term),
                }
            } else if let Some(rest) = term.strip_prefix('-') {
                text.push_str(" - ");
                // "- 1*m" reads better as "- m".
                text.push_str(rest.strip_prefix("1*").unwrap_or(rest));
            } else {
                text.push_str(" + ");
                text.push_str(&term);
            }
        }
        write!(out, "{text}")
    }
}

/// The phase for swapping an adjacent pair `X Y -> c · Y X`, where `X` has
/// index `left`, `Y` has index `right`, and the indices differ: `c = z_{left,right}`
/// when the two letters have equal star flags, `conj(z_{left,right})` otherwise.
fn swap_phase(angles: &AngleAssignment, left: &Letter, right: &Letter, count: i64) -> Phase {
    let sign = if left.star == right.star { 1 } else { -1 };
    angles.z_power(left.index, right.index, sign * count)
}

/// Reduces a word to its unique `(phase, normal monomial)` pair by inserting
/// letters left to right into an already-normal prefix. Insertion walks the
/// new letter over every block with a larger generator index (emitting the
/// swap phases), then merges it into its own block, cancelling `s* s = 1`
/// (and `s s* = 1` for unitaries).
pub fn normalize(sig: &Signature, w: &Word) -> (Phase, NormalMonomial) {
    let mut phase = Phase::identity();
    let mut acc = NormalMonomial::identity(sig);
    for letter in &w.letters {
        insert_letter(sig, &mut acc, &mut phase, *letter);
    }
    (phase, acc)
}

fn insert_letter(sig: &Signature, acc: &mut NormalMonomial, phase: &mut Phase, letter: Letter) {
    sig.assert_index(letter.index);
    let a = letter.index;
    // Walk left over every block with a larger index, one letter kind at a time.
    for b in (a + 1)..=sig.n {
        let (plain_count, star_count) = if sig.is_isometry(b) {
            (acc.e[b - 1] as i64, acc.f[b - 1] as i64)
        } else {
            let gv = acc.g[b - 1 - sig.l];
            if gv >= 0 {
                (gv, 0)
            } else {
                (0, -gv)
            }
        };
        if plain_count != 0 {
            *phase = phase.mul(&swap_phase(
                sig.angles(),
                &Letter::plain(b),
                &letter,
                plain_count,
            ));
        }
        if star_count != 0 {
            *phase = phase.mul(&swap_phase(
                sig.angles(),
                &Letter::star(b),
                &letter,
                star_count,
            ));
        }
    }
    // Merge into the letter's own block.
    if sig.is_isometry(a) {
        if letter.star {
            acc.f[a - 1] += 1;
        } else if acc.f[a - 1] > 0 {
            // The block ends in s_a*; the arriving s_a cancels it: s* s = 1.
            acc.f[a - 1] -= 1;
        } else {
            acc.e[a - 1] += 1;
        }
    } else {
        acc.g[a - 1 - sig.l] += if letter.star { -1 } else { 1 };
    }
}

/// Same reduction as [`normalize`], but by repeatedly applying a single
/// randomly chosen rewrite step (adjacent cancellation or adjacent swap)
/// until none applies. The `(length, inversions)` measure drops on every
/// step, so this terminates; agreement with [`normalize`] on random words
/// is the operational confluence check.
pub fn normalize_randomized(sig: &Signature, w: &Word, seed: u64) -> (Phase, NormalMonomial) {
    #[derive(Clone, Copy)]
    enum Redex {
        Cancel(usize),
        Swap(usize),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phase = Phase::identity();
    let mut letters = w.letters.clone();
    for letter in &letters {
        sig.assert_index(letter.index);
    }
    loop {
        let mut redexes = Vec::new();
        for pos in 0..letters.len().saturating_sub(1) {
            let (x, y) = (letters[pos], letters[pos + 1]);
            if x.index == y.index {
                let cancels = (x.star && !y.star)
                    || (!x.star && y.star && !sig.is_isometry(x.index));
                if cancels {
                    redexes.push(Redex::Cancel(pos));
                }
            } else if x.index > y.index {
                redexes.push(Redex::Swap(pos));
            }
        }
        if redexes.is_empty() {
            break;
        }
        match redexes[rng.gen_range(0..redexes.len())] {
            Redex::Cancel(pos) => {
                letters.drain(pos..pos + 2);
            }
            Redex::Swap(pos) => {
                let (x, y) = (letters[pos], letters[pos + 1]);
                phase = phase.mul(&swap_phase(sig.angles(), &x, &y, 1));
                letters.swap(pos, pos + 1);
            }
        }
    }
    // No redex left: letters are sorted by index, each isometry block is
    // plain-then-star, each unitary block single-signed. Tally exponents.
    let mut acc = NormalMonomial::identity(sig);
    for letter in letters {
        if sig.is_isometry(letter.index) {
            if letter.star {
                acc.f[letter.index - 1] += 1;
            } else {
                acc.e[letter.index - 1] += 1;
            }
        } else {
            acc.g[letter.index - 1 - sig.l] += if letter.star { -1 } else { 1 };
        }
    }
    (phase, acc)
}

/// Exact product: bilinear extension of word concatenation + normalization.
pub fn mul(sig: &Signature, x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    for (mx, cx) in x.iter() {
        sig.assert_monomial(mx);
        let wx = mx.to_word();
        for (my, cy) in y.iter() {
            sig.assert_monomial(my);
            let (phase, m) = normalize(sig, &wx.concat(&my.to_word()));
            out.add_term(m, cx.mul(cy).mul_phase(&phase));
        }
    }
    out
}

/// The conjugate-linear involution `x -> x*`.
pub fn adjoint(sig: &Signature, x: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in x.iter() {
        sig.assert_monomial(m);
        let (phase, adj) = normalize(sig, &m.to_word().adjoint());
        out.add_term(adj, c.conj().mul_phase(&phase));
    }
    out
}

/// The grading weight of a monomial.
pub fn degree(sig: &Signature, m: &NormalMonomial) -> Degree {
    sig.assert_monomial(m);
    let mut p = Vec::with_capacity(sig.n);
    for i in 0..sig.l {
        p.push(m.e[i] as i64 - m.f[i] as i64);
    }
    p.extend_from_slice(&m.g);
    Degree(p)
}

/// The gauge action of the torus point `t = (t_1, ..., t_n)` (in turns):
/// each monomial of weight `p` is scaled by `e^{2πi·(p·t)}`, exactly.
pub fn alpha(sig: &Signature, t: &[BigRational], x: &Element) -> Element {
    assert!(t.len() == sig.n, "torus point needs {} coordinates", sig.n);
    let mut out = Element::zero();
    for (m, c) in x.iter() {
        let p = degree(sig, m);
        let mut turns = BigRational::zero();
        for (pk, tk) in p.0.iter().zip(t) {
            turns += tk * BigRational::from_integer((*pk).into());
        }
        out.add_term(m.clone(), c.mul_phase(&Phase::torsion(&turns)));
    }
    out
}

/// Numeric variant of [`alpha`] for irrational torus points: returns the
/// evaluated coefficients instead of exact ones.
pub fn alpha_eval(sig: &Signature, t: &[f64], x: &Element) -> Vec<(NormalMonomial, Complex64)> {
    assert!(t.len() == sig.n, "torus point needs {} coordinates", sig.n);
    x.iter()
        .map(|(m, c)| {
            let p = degree(sig, m);
            let angle: f64 = p
                .0
                .iter()
                .zip(t)
                .map(|(pk, tk)| 2.0 * std::f64::consts::PI * (*pk as f64) * tk)
                .sum();
            let twist = Complex64::new(angle.cos(), angle.sin());
            (m.clone(), c.eval(sig.angles()) * twist)
        })
        .collect()
}

/// Averaging over the gauge action: keeps exactly the balanced monomials
/// (`e_i = f_i`, all unitary exponents zero). Idempotent and unital.
pub fn theta(sig: &Signature, x: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in x.iter() {
        sig.assert_monomial(m);
        if m.is_balanced() {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// `theta(x* x)` for nonzero `x` — the witness that the averaging
/// projection is faithful. The result is nonzero for every nonzero `x`;
/// the property suites assert this exactly.
pub fn theta_faithful_witness(sig: &Signature, x: &Element) -> Result<Element, AlgebraError> {
    if x.is_zero() {
        return Err(AlgebraError::ZeroInput);
    }
    Ok(theta(sig, &mul(sig, &adjoint(sig, x), x)))
}

/// The canonical kind-preserving index injection of `small` into `big`:
/// isometry `i` goes to `i`, the `j`-th unitary goes to the `j`-th unitary
/// of `big` (index `big.l + j`).
fn embed_index(small: &Signature, big: &Signature, i: usize) -> usize {
    if i <= small.l {
        i
    } else {
        big.l + (i - small.l)
    }
}

/// Embeds an element into a larger signature along the canonical injection.
/// Requires `big` to have at least as many isometries and unitaries, with
/// equal angles on corresponding pairs; then basis monomials map to basis
/// monomials and the map is multiplicative and ∗-preserving.
pub fn embed(small: &Signature, big: &Signature, x: &Element) -> Result<Element, AlgebraError> {
    if big.l < small.l || big.n - big.l < small.n - small.l {
        return Err(AlgebraError::IncompatibleSignatures {
            reason: format!(
                "target (n={}, l={}) does not extend source (n={}, l={})",
                big.n, big.l, small.n, small.l
            ),
        });
    }
    for i in 1..=small.n {
        for j in (i + 1)..=small.n {
            let (bi, bj) = (embed_index(small, big, i), embed_index(small, big, j));
            if small.angles().phi(i, j) != big.angles().phi(bi, bj) {
                return Err(AlgebraError::IncompatibleSignatures {
                    reason: format!(
                        "angle mismatch: phi_({i},{j}) != phi'_({bi},{bj})"
                    ),
                });
            }
        }
    }
    let mut out = Element::zero();
    for (m, c) in x.iter() {
        small.assert_monomial(m);
        let mut e = vec![0u32; big.l];
        let mut f = vec![0u32; big.l];
        let mut g = vec![0i64; big.n - big.l];
        e[..small.l].copy_from_slice(&m.e);
        f[..small.l].copy_from_slice(&m.f);
        g[..small.n - small.l].copy_from_slice(&m.g);
        let mapped = NormalMonomial { e, f, g };
        out.add_term(mapped, c.map_indices(|i| embed_index(small, big, i)));
    }
    Ok(out)
}

/// Deterministic random words/elements for the property suites.
pub fn random_word(sig: &Signature, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter {
            index: rng.gen_range(1..=sig.n().max(1)),
            star: rng.gen_bool(0.5),
        })
        .collect();
    Word::new(letters)
}

/// A random normal monomial with exponents bounded by `(e_max, f_max, g_max)`.
pub fn random_monomial(
    sig: &Signature,
    rng: &mut ChaCha8Rng,
    bounds: (u32, u32, i64),
) -> NormalMonomial {
    let (e_max, f_max, g_max) = bounds;
    NormalMonomial {
        e: (0..sig.l).map(|_| rng.gen_range(0..=e_max)).collect(),
        f: (0..sig.l).map(|_| rng.gen_range(0..=f_max)).collect(),
        g: (0..sig.n - sig.l).map(|_| rng.gen_range(-g_max..=g_max)).collect(),
    }
}

/// A random element with `terms` monomials inside the bounds and small
/// Gaussian-rational coefficients (plus an optional random phase factor).
pub fn random_element(
    sig: &Signature,
    rng: &mut ChaCha8Rng,
    terms: usize,
    bounds: (u32, u32, i64),
    with_phases: bool,
) -> Element {
    let mut out = Element::zero();
    for _ in 0..terms {
        let m = random_monomial(sig, rng, bounds);
        let c = GaussianRational::new(
            BigRational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into()),
            BigRational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into()),
        );
        let mut coeff = PhasePolynomial::scalar(c);
        if with_phases && sig.n() >= 2 && rng.gen_bool(0.5) {
            let i = rng.gen_range(1..sig.n());
            let j = rng.gen_range(i + 1..=sig.n());
            coeff = coeff.mul_phase(&sig.angles().w_power(i, j, rng.gen_range(-2i64..=2)));
        }
        out.add_term(m, coeff);
    }
    out
}
