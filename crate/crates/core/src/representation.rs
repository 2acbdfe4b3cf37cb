//! The standard representation on a truncated basis, and coefficient
//! extraction.
//!
//! The algebra acts on `ℓ²(ℕ₀)^{⊗l} ⊗ ℓ²(ℤ)^{⊗(n−l)}` with basis `e_k`:
//! the generator `Γ_i` raises `k_i` and twists by the phases of the
//! coordinates to its left,
//!
//! ```text
//! Γ_i e_k   = ∏_{q<i} w_{qi}^{-2 k_q} · e_{k+δ_i}
//! Γ_i* e_k  = ∏_{q<i} w_{qi}^{+2 k_q} · e_{k-δ_i}   (0 when k_i = 0, i ≤ l)
//! ```
//!
//! Everything here works on a finite window `0 ≤ k_i ≤ K` (isometry slots)
//! / `|k_j| ≤ K` (unitary slots). A shift that would leave the window is
//! an error, not a silent projection — callers quantify over vectors with
//! `band` letters of headroom so that exact statements stay exact.
//! Amplitudes are exact phase polynomials; numeric output is obtained by
//! evaluating them at the signature's angles.
//!
//! [`extract_coefficients`] inverts `x ↦ apply_element(x, ·)` on a
//! declared exponent box by probing basis vectors `e_{(f̃,0)}` in order of
//! increasing `Σf̃` and peeling off already-recovered terms — the
//! operational form of the representation's injectivity.

use crate::algebra::{mul, normalize, Element, Letter, NormalMonomial, Signature, Word};
use crate::phase::{Phase, PhasePolynomial};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RepresentationError {
    #[error("image index {index} leaves the truncation window")]
    TruncationOverflow { index: String },
    #[error("recovered amplitude at {index} falls outside the declared exponent box")]
    BoundsExceeded { index: String },
    #[error("invalid multi-index: {reason}")]
    InvalidIndex { reason: String },
    #[error("invalid truncation: {reason}")]
    InvalidTruncation { reason: String },
    #[error("truncation too small for the exponent box: need K >= {needed}, have {have}")]
    TruncationTooSmall { needed: u32, have: u32 },
}

/// A basis label: `n` coordinates, nonnegative on the isometry slots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex {
    k: Vec<i64>,
}

impl MultiIndex {
    pub fn new(sig: &Signature, k: Vec<i64>) -> Result<Self, RepresentationError> {
        if k.len() != sig.n() {
            return Err(RepresentationError::InvalidIndex {
                reason: format!("expected {} coordinates, got {}", sig.n(), k.len()),
            });
        }
        if let Some(i) = (0..sig.l()).find(|&i| k[i] < 0) {
            return Err(RepresentationError::InvalidIndex {
                reason: format!("coordinate {} of an isometry slot is negative", i + 1),
            });
        }
        Ok(MultiIndex { k })
    }

    pub fn zero(sig: &Signature) -> Self {
        MultiIndex { k: vec![0; sig.n()] }
    }

    pub fn coords(&self) -> &[i64] {
        &self.k
    }

    fn shifted(&self, i: usize, delta: i64) -> MultiIndex {
        let mut k = self.k.clone();
        k[i - 1] += delta;
        MultiIndex { k }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.k.iter().map(|v| v.to_string()).collect();
        write!(out, "({})", body.join(","))
    }
}

/// The finite window: isometry coordinates in `0..=K`, unitary ones in
/// `-K..=K`. `band` is the headroom margin the exact suites quantify over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    cutoff: u32,
    band: u32,
}

impl Truncation {
    pub fn new(cutoff: u32, band: u32) -> Result<Self, RepresentationError> {
        if band > cutoff {
            return Err(RepresentationError::InvalidTruncation {
                reason: format!("band {band} exceeds cutoff {cutoff}"),
            });
        }
        Ok(Truncation { cutoff, band })
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn band(&self) -> u32 {
        self.band
    }

    pub fn contains(&self, sig: &Signature, idx: &MultiIndex) -> bool {
        let k_max = self.cutoff as i64;
        idx.k.iter().enumerate().all(|(pos, &v)| {
            if pos < sig.l() {
                (0..=k_max).contains(&v)
            } else {
                v.abs() <= k_max
            }
        })
    }

    /// True when the index keeps `band` steps of headroom to every wall
    /// that a raise/lower can hit.
    pub fn in_band(&self, sig: &Signature, idx: &MultiIndex) -> bool {
        let safe = (self.cutoff - self.band) as i64;
        idx.k.iter().enumerate().all(|(pos, &v)| {
            if pos < sig.l() {
                (0..=safe).contains(&v)
            } else {
                v.abs() <= safe
            }
        })
    }

    /// Every valid index of the window, lexicographically.
    pub fn indices(&self, sig: &Signature) -> Vec<MultiIndex> {
        let k_max = self.cutoff as i64;
        let mut out = vec![Vec::with_capacity(sig.n())];
        for pos in 0..sig.n() {
            let lo = if pos < sig.l() { 0 } else { -k_max };
            let mut next = Vec::with_capacity(out.len() * (k_max - lo + 1) as usize);
            for stem in out {
                for v in lo..=k_max {
                    let mut grown = stem.clone();
                    grown.push(v);
                    next.push(grown);
                }
            }
            out = next;
        }
        out.into_iter().map(|k| MultiIndex { k }).collect()
    }

    /// The band-interior indices only.
    pub fn band_indices(&self, sig: &Signature) -> Vec<MultiIndex> {
        self.indices(sig)
            .into_iter()
            .filter(|idx| self.in_band(sig, idx))
            .collect()
    }
}

/// A finitely supported vector with exact amplitudes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruncatedState {
    amplitudes: BTreeMap<MultiIndex, PhasePolynomial>,
}

impl TruncatedState {
    pub fn zero() -> Self {
        TruncatedState::default()
    }

    pub fn basis(idx: MultiIndex) -> Self {
        let mut v = TruncatedState::zero();
        v.add_term(idx, PhasePolynomial::one());
        v
    }

    pub fn add_term(&mut self, idx: MultiIndex, amp: PhasePolynomial) {
        if amp.is_zero() {
            return;
        }
        match self.amplitudes.get_mut(&idx) {
            Some(existing) => {
                let sum = existing.add(&amp);
                if sum.is_zero() {
                    self.amplitudes.remove(&idx);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.amplitudes.insert(idx, amp);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, idx: &MultiIndex) -> PhasePolynomial {
        self.amplitudes
            .get(idx)
            .cloned()
            .unwrap_or_else(PhasePolynomial::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &PhasePolynomial)> {
        self.amplitudes.iter()
    }

    pub fn add(&self, rhs: &TruncatedState) -> TruncatedState {
        let mut out = self.clone();
        for (idx, amp) in &rhs.amplitudes {
            out.add_term(idx.clone(), amp.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &TruncatedState) -> TruncatedState {
        let mut out = self.clone();
        for (idx, amp) in &rhs.amplitudes {
            out.add_term(idx.clone(), amp.neg());
        }
        out
    }

    pub fn scale(&self, c: &PhasePolynomial) -> TruncatedState {
        let mut out = TruncatedState::zero();
        for (idx, amp) in &self.amplitudes {
            out.add_term(idx.clone(), amp.mul(c));
        }
        out
    }

    /// `⟨self, rhs⟩`, linear in the first slot, exact.
    pub fn inner_exact(&self, rhs: &TruncatedState) -> PhasePolynomial {
        let mut total = PhasePolynomial::zero();
        for (idx, amp) in &self.amplitudes {
            if let Some(other) = rhs.amplitudes.get(idx) {
                total = total.add(&amp.mul(&other.conj()));
            }
        }
        total
    }

    pub fn eval(&self, sig: &Signature) -> Vec<(MultiIndex, Complex64)> {
        self.amplitudes
            .iter()
            .map(|(idx, amp)| (idx.clone(), amp.eval(sig.angles())))
            .collect()
    }
}

/// One generator step `Γ_i` (or `Γ_i*`). Exact; fails only when an image
/// index leaves the window.
pub fn apply_generator(
    sig: &Signature,
    trunc: &Truncation,
    i: usize,
    star: bool,
    v: &TruncatedState,
) -> Result<TruncatedState, RepresentationError> {
    assert!(i >= 1 && i <= sig.n(), "generator index {i} outside 1..={}", sig.n());
    let mut out = TruncatedState::zero();
    for (idx, amp) in v.iter() {
        if star && sig.is_isometry(i) && idx.k[i - 1] == 0 {
            continue; // Γ_i* annihilates k_i = 0 on isometry slots
        }
        let image = idx.shifted(i, if star { -1 } else { 1 });
        if !trunc.contains(sig, &image) {
            return Err(RepresentationError::TruncationOverflow {
                index: image.to_string(),
            });
        }
        let mut phase = Phase::identity();
        for q in 1..i {
            let sign = if star { 2 } else { -2 };
            phase = phase.mul(&sig.angles().w_power(q, i, sign * idx.k[q - 1]));
        }
        out.add_term(image, amp.mul_phase(&phase));
    }
    Ok(out)
}

/// The linear action of an element: each monomial's letters applied right
/// to left, summed over terms with exact coefficients.
pub fn apply_element(
    sig: &Signature,
    trunc: &Truncation,
    x: &Element,
    v: &TruncatedState,
) -> Result<TruncatedState, RepresentationError> {
    let mut out = TruncatedState::zero();
    for (m, coeff) in x.iter() {
        let mut state = v.clone();
        for letter in m.to_word().letters.iter().rev() {
            state = apply_generator(sig, trunc, letter.index, letter.star, &state)?;
            if state.is_zero() {
                break;
            }
        }
        let scaled = state.scale(coeff);
        out = out.add(&scaled);
    }
    Ok(out)
}

fn exponent_box_tuples(l: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(l)];
    for _ in 0..l {
        let mut next = Vec::with_capacity(out.len() * (max as usize + 1));
        for stem in out {
            for v in 0..=max {
                let mut grown = stem.clone();
                grown.push(v);
                next.push(grown);
            }
        }
        out = next;
    }
    out
}

/// Recovers the element behind a black-box action on the truncated basis.
///
/// `oracle(idx)` must behave like `apply_element(x, e_idx)` for some `x`
/// whose exponents satisfy `e_i ≤ bounds.0`, `f_i ≤ bounds.1`,
/// `|g_j| ≤ bounds.2`. Probes the vectors `e_{(f̃,0)}` by increasing `Σf̃`;
/// at stage `f̃` every term with star exponents `f̃` shows up — after
/// subtracting the already-recovered part — as the amplitude at
/// `e_{(e,g)}`, times the (unimodular, known) phase the bare monomial
/// picks up on that probe. Division by that phase yields the coefficient.
pub fn extract_coefficients(
    sig: &Signature,
    trunc: &Truncation,
    oracle: &mut dyn FnMut(&MultiIndex) -> Result<TruncatedState, RepresentationError>,
    bounds: (u32, u32, u32),
) -> Result<Element, RepresentationError> {
    let (e_max, f_max, g_max) = bounds;
    let needed = e_max + f_max + 1;
    if trunc.cutoff() < needed || g_max > trunc.cutoff().saturating_sub(1) {
        return Err(RepresentationError::TruncationTooSmall {
            needed: needed.max(g_max + 1),
            have: trunc.cutoff(),
        });
    }

    let mut probes = exponent_box_tuples(sig.l(), f_max);
    probes.sort_by_key(|t| (t.iter().map(|&v| v as u64).sum::<u64>(), t.clone()));

    let mut recovered = Element::zero();
    for f_tilde in probes {
        let mut probe_coords: Vec<i64> = f_tilde.iter().map(|&v| v as i64).collect();
        probe_coords.extend(std::iter::repeat_n(0, sig.n() - sig.l()));
        let probe = MultiIndex { k: probe_coords };

        let observed = oracle(&probe)?;
        let expected = apply_element(sig, trunc, &recovered, &TruncatedState::basis(probe.clone()))?;
        let residual = observed.sub(&expected);

        for (idx, amp) in residual.iter() {
            let e: Vec<i64> = idx.k[..sig.l()].to_vec();
            let g: Vec<i64> = idx.k[sig.l()..].to_vec();
            let in_box = e.iter().all(|&v| 0 <= v && v <= e_max as i64)
                && g.iter().all(|&v| v.abs() <= g_max as i64);
            if !in_box {
                return Err(RepresentationError::BoundsExceeded {
                    index: idx.to_string(),
                });
            }
            let m = NormalMonomial::new(
                sig,
                e.iter().map(|&v| v as u32).collect(),
                f_tilde.clone(),
                g,
            )
            .expect("exponent box shapes match the signature");
            // The bare monomial sends the probe to idx with a single
            // unimodular phase; divide it out.
            let bare = apply_element(
                sig,
                trunc,
                &Element::from_monomial(m.clone()),
                &TruncatedState::basis(probe.clone()),
            )?;
            let phase = bare
                .amplitude(idx)
                .as_unit_phase()
                .expect("monomial action on a basis vector is a unit phase");
            recovered.add_term(m, amp.mul_phase(&phase.conj()));
        }
    }
    Ok(recovered)
}

/// A rule assigning to each exponent tuple `(e_1..e_l, g_{l+1}..g_n)` a
/// word with exactly that letter multiset (plain letters only; negative
/// unitary exponents use inverses). `Canonical` is ascending index order;
/// `Seeded` shuffles deterministically per tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialChoice {
    Canonical,
    Seeded(u64),
}

impl MonomialChoice {
    pub fn word(&self, sig: &Signature, tuple: &[i64]) -> Word {
        assert!(tuple.len() == sig.n(), "tuple needs {} entries", sig.n());
        let mut letters = Vec::new();
        for (pos, &v) in tuple.iter().enumerate() {
            let index = pos + 1;
            if sig.is_isometry(index) {
                assert!(v >= 0, "isometry exponent e_{index} must be nonnegative");
                letters.extend(std::iter::repeat_n(Letter::plain(index), v as usize));
            } else {
                let letter = if v >= 0 {
                    Letter::plain(index)
                } else {
                    Letter::star(index)
                };
                letters.extend(std::iter::repeat_n(letter, v.unsigned_abs() as usize));
            }
        }
        if let MonomialChoice::Seeded(seed) = self {
            let mut mix = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
            for &v in tuple {
                mix = mix
                    .rotate_left(23)
                    .wrapping_add(v as u64)
                    .wrapping_mul(0xBF58_476D_1CE4_E5B9);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(mix);
            letters.shuffle(&mut rng);
        }
        Word::new(letters)
    }
}

/// The phase `λ(s_i, m)` with `s_i · m_tuple = λ · m_{tuple+δ_i}`,
/// computed as the ratio of the two normalization phases. Unimodular by
/// construction.
pub fn lambda_constant(
    sig: &Signature,
    choice: &MonomialChoice,
    i: usize,
    tuple: &[i64],
) -> Phase {
    let m = choice.word(sig, tuple);
    let mut raised = tuple.to_vec();
    raised[i - 1] += 1;
    let m_next = choice.word(sig, &raised);

    let mut product = vec![Letter::plain(i)];
    product.extend_from_slice(&m.letters);
    let (ph_num, mono_num) = normalize(sig, &Word::new(product));
    let (ph_den, mono_den) = normalize(sig, &m_next);
    debug_assert_eq!(mono_num, mono_den, "successor words reduce to different monomials");
    ph_num.mul(&ph_den.conj())
}

/// The transition phase `μ(m′, m)` with `m′_tuple = μ · m_tuple` for two
/// choices over the same exponent tuple.
pub fn mu_constant(
    sig: &Signature,
    choice_a: &MonomialChoice,
    choice_b: &MonomialChoice,
    tuple: &[i64],
) -> Phase {
    let (ph_a, mono_a) = normalize(sig, &choice_a.word(sig, tuple));
    let (ph_b, mono_b) = normalize(sig, &choice_b.word(sig, tuple));
    debug_assert_eq!(mono_a, mono_b);
    ph_a.mul(&ph_b.conj())
}

#[derive(Clone, Debug, Default)]
pub struct ChoiceEquivalenceReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl ChoiceEquivalenceReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, exactly, the consistency identity tying two monomial choices:
/// `λ(s_i, m) · μ(m′, m) = λ′(s_i, m′) · μ(m′_{+δ_i}, m_{+δ_i})` for every
/// sampled tuple and every generator. Violations would indicate a bug,
/// not a mathematical possibility; they are reported rather than panicked
/// so the CLI can surface them.
pub fn verify_choice_equivalence(
    sig: &Signature,
    choice: &MonomialChoice,
    choice_prime: &MonomialChoice,
    tuples: &[Vec<i64>],
) -> ChoiceEquivalenceReport {
    let mut report = ChoiceEquivalenceReport::default();
    for tuple in tuples {
        for i in 1..=sig.n() {
            let mut raised = tuple.clone();
            raised[i - 1] += 1;
            let lambda = lambda_constant(sig, choice, i, tuple);
            let lambda_prime = lambda_constant(sig, choice_prime, i, tuple);
            let mu = mu_constant(sig, choice_prime, choice, tuple);
            let mu_raised = mu_constant(sig, choice_prime, choice, &raised);
            let lhs = lambda.mul(&mu);
            let rhs = lambda_prime.mul(&mu_raised);
            report.checked += 1;
            if lhs != rhs {
                report.violations.push(format!(
                    "i={i}, tuple={tuple:?}: {lhs} != {rhs}"
                ));
            }
        }
    }
    report
}

/// Builds the elementwise commutation-relation checks on every band basis
/// vector; returns the number of identities verified. Exact equality of
/// states throughout — any failure panics with the offending data.
pub fn check_relations_on_band(
    sig: &Signature,
    trunc: &Truncation,
) -> Result<usize, RepresentationError> {
    let band = trunc.band_indices(sig);
    let mut checked = 0;
    let gen = |i: usize, star: bool| Element::generator(sig, i, star);
    for idx in &band {
        let v = TruncatedState::basis(idx.clone());
        for i in 1..=sig.n() {
            // s_i* s_i = 1 for every generator; s_j s_j* = 1 for unitaries.
            let si_v = apply_generator(sig, trunc, i, false, &v)?;
            let back = apply_generator(sig, trunc, i, true, &si_v)?;
            assert_eq!(back, v, "isometry relation failed at {idx}, i={i}");
            checked += 1;
            if !sig.is_isometry(i) {
                let si_star = apply_generator(sig, trunc, i, true, &v)?;
                let forth = apply_generator(sig, trunc, i, false, &si_star)?;
                assert_eq!(forth, v, "unitary relation failed at {idx}, i={i}");
                checked += 1;
            }
            for j in 1..=sig.n() {
                if i == j {
                    continue;
                }
                // s_i s_j = z_ij s_j s_i  and  s_i* s_j = conj(z_ij) s_j s_i*.
                let z = sig.angles().z_power(i, j, 1);
                let lhs = apply_element(
                    sig,
                    trunc,
                    &mul(sig, &gen(i, false), &gen(j, false)),
                    &v,
                )?;
                let rhs = apply_element(
                    sig,
                    trunc,
                    &mul(sig, &gen(j, false), &gen(i, false)),
                    &v,
                )?
                .scale(&PhasePolynomial::phase(&z));
                assert_eq!(lhs, rhs, "commutation failed at {idx}, i={i}, j={j}");
                checked += 1;

                let lhs = apply_element(
                    sig,
                    trunc,
                    &mul(sig, &gen(i, true), &gen(j, false)),
                    &v,
                )?;
                let rhs = apply_element(
                    sig,
                    trunc,
                    &mul(sig, &gen(j, false), &gen(i, true)),
                    &v,
                )?
                .scale(&PhasePolynomial::phase(&z.conj()));
                assert_eq!(lhs, rhs, "star commutation failed at {idx}, i={i}, j={j}");
                checked += 1;
            }
        }
    }
    Ok(checked)
}
