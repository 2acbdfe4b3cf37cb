//! Self-checking verification suites.
//!
//! Each suite replays a family of identities against independently
//! computed expectations and returns a [`Report`]: the number of cases,
//! the failures (with inputs and, in numeric mode, residuals), and the
//! wall time. A suite passes exactly when its failure list is empty.
//!
//! In `exact` mode every comparison is symbolic equality of canonical
//! forms. In `numeric` mode a mismatch is tolerated when the evaluated
//! residual stays below [`NUMERIC_TOLERANCE`] — the mode that makes
//! irrational angle assignments checkable.

use crate::algebra::{
    adjoint, embed, mul, normalize, normalize_randomized, random_element, random_monomial,
    random_word, theta, theta_faithful_witness, Element, Letter, NormalMonomial, Signature, Word,
};
use crate::deformation::{deformed_mul, psi, verify_intertwiner, DeformationContext};
use crate::ktheory::kgroups;
use crate::normkit::{in_projection_algebra, pal_norm};
use crate::phase::{Angle, AngleAssignment, PhasePolynomial};
use crate::representation::{
    apply_element, apply_generator, extract_coefficients, verify_choice_equivalence,
    MonomialChoice, MultiIndex, TruncatedState, Truncation,
};
use crate::scalar::GaussianRational;
use crate::stinespring::{gram_matrix, st_inner, StVector};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::Instant;

/// Residual bound for numeric-mode comparisons.
pub const NUMERIC_TOLERANCE: f64 = 1e-12;

/// All suite names accepted by [`run_suite`].
pub const SUITE_NAMES: &[&str] = &[
    "confluence",
    "relations",
    "injectivity",
    "norms",
    "stinespring",
    "deformation",
    "intertwiner",
    "embedding",
    "ktheory-table",
    "theta",
];

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error("unknown suite '{name}' (expected one of {expected})", expected = SUITE_NAMES.join(", "))]
    UnknownSuite { name: String },
}

/// One failed case: what was fed in, how far off it was (numeric mode),
/// and what went wrong.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub message: String,
}

/// The outcome of one suite run. `pass` is `failures.is_empty()`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_ms: u128,
    pub mode: String,
    pub seed: u64,
    pub pass: bool,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Shared suite parameters: the signature under test, the truncation
/// window for representation-level suites, the RNG seed, and the mode.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    pub sig: Signature,
    pub trunc: Truncation,
    pub seed: u64,
    pub numeric: bool,
}

impl SuiteContext {
    pub fn new(sig: Signature, trunc: Truncation, seed: u64, numeric: bool) -> Self {
        SuiteContext {
            sig,
            trunc,
            seed,
            numeric,
        }
    }

    fn mode_name(&self) -> &'static str {
        if self.numeric {
            "numeric"
        } else {
            "exact"
        }
    }
}

struct Recorder {
    suite: &'static str,
    cases: usize,
    failures: Vec<Failure>,
    started: Instant,
    mode: String,
    seed: u64,
}

impl Recorder {
    fn new(suite: &'static str, ctx_mode: &str, seed: u64) -> Self {
        Recorder {
            suite,
            cases: 0,
            failures: Vec::new(),
            started: Instant::now(),
            mode: ctx_mode.to_string(),
            seed,
        }
    }

    fn fail(&mut self, input: impl Into<String>, residual: Option<f64>, message: impl Into<String>) {
        if self.failures.len() < 64 {
            self.failures.push(Failure {
                input: input.into(),
                residual,
                message: message.into(),
            });
        }
    }

    fn finish(self) -> Report {
        let pass = self.failures.is_empty();
        Report {
            suite: self.suite.to_string(),
            cases: self.cases,
            failures: self.failures,
            wall_ms: self.started.elapsed().as_millis(),
            mode: self.mode,
            seed: self.seed,
            pass,
        }
    }
}

fn element_residual(sig: &Signature, a: &Element, b: &Element) -> f64 {
    a.sub(b)
        .eval_coefficients(sig.angles())
        .iter()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

fn state_residual(sig: &Signature, a: &TruncatedState, b: &TruncatedState) -> f64 {
    a.sub(b)
        .eval(sig)
        .iter()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

/// Exact-or-numeric element comparison; records a failure on mismatch.
fn compare_elements(
    rec: &mut Recorder,
    sig: &Signature,
    numeric: bool,
    got: &Element,
    want: &Element,
    input: &str,
    what: &str,
) {
    rec.cases += 1;
    if got == want {
        return;
    }
    let residual = element_residual(sig, got, want);
    if numeric && residual <= NUMERIC_TOLERANCE {
        return;
    }
    rec.fail(
        input,
        Some(residual),
        format!("{what}: got {got}, expected {want}"),
    );
}

fn compare_states(
    rec: &mut Recorder,
    sig: &Signature,
    numeric: bool,
    got: &TruncatedState,
    want: &TruncatedState,
    input: &str,
    what: &str,
) {
    rec.cases += 1;
    if got == want {
        return;
    }
    let residual = state_residual(sig, got, want);
    if numeric && residual <= NUMERIC_TOLERANCE {
        return;
    }
    rec.fail(input, Some(residual), what.to_string());
}

/// Applies a word to a truncated basis state, rightmost letter first.
fn apply_word(
    sig: &Signature,
    trunc: &Truncation,
    word: &Word,
    v: &TruncatedState,
) -> Result<TruncatedState, crate::representation::RepresentationError> {
    let mut state = v.clone();
    for letter in word.letters.iter().rev() {
        if state.is_zero() {
            break;
        }
        state = apply_generator(sig, trunc, letter.index, letter.star, &state)?;
    }
    Ok(state)
}

/// Cartesian grid `{0..=max}^dims`.
fn grid_u32(dims: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..dims {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..=max {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Cartesian tuple grid over a signature: isometry coordinates range over
/// `0..=iso_max`, unitary coordinates over `-uni_max..=uni_max`.
fn grid_tuples(sig: &Signature, iso_max: i64, uni_max: i64, cap: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for i in 1..=sig.n() {
        let range: Vec<i64> = if sig.is_isometry(i) {
            (0..=iso_max).collect()
        } else {
            (-uni_max..=uni_max).collect()
        };
        let mut next = Vec::new();
        for prefixix in &out {
            for &v in &range {
                let mut p = prefixix.clone();
                p.push(v);
                next.push(p);
                if next.len() >= cap {
                    break;
                }
            }
            if next.len() >= cap {
                break;
            }
        }
        out = next;
    }
    out
}

fn random_rational_angles(n: usize, rng: &mut ChaCha8Rng) -> AngleAssignment {
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let den = rng.gen_range(1i64..=12);
            let num = rng.gen_range(0i64..(2 * den).max(1));
            pairs.push((i, j, BigRational::new(num.into(), den.into())));
        }
    }
    AngleAssignment::exact(n, pairs).expect("valid random angles")
}

/// Two independent normalization strategies agree on random words: the
/// deterministic insertion pass and the randomized rewriting loop.
pub fn confluence_suite(
    ctx: &SuiteContext,
    words: usize,
    max_len: usize,
    fixed_sig: Option<&Signature>,
) -> Report {
    let mut rec = Recorder::new("confluence", ctx.mode_name(), ctx.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for case in 0..words {
        let sig = match fixed_sig {
            Some(s) => s.clone(),
            None => {
                let n = rng.gen_range(1..=4usize);
                let l = rng.gen_range(0..=n);
                let angles = random_rational_angles(n, &mut rng);
                Signature::new(n, l, angles).expect("valid random signature")
            }
        };
        let word = random_word(&sig, &mut rng, max_len);
        let reference = normalize(&sig, &word);
        let randomized = normalize_randomized(&sig, &word, ctx.seed ^ (case as u64));
        rec.cases += 1;
        if reference != randomized {
            rec.fail(
                format!("n={} l={} word={}", sig.n(), sig.l(), word),
                None,
                format!(
                    "strategies disagree: ({}, {}) vs ({}, {})",
                    reference.0, reference.1, randomized.0, randomized.1
                ),
            );
        }
    }
    rec.finish()
}

/// Builds `s_i^k s_i^{*k}` as a word (plains first in operator order).
fn range_projection_word(i: usize, k: u32) -> Word {
    let mut letters = vec![Letter::plain(i); k as usize];
    letters.extend(vec![Letter::star(i); k as usize]);
    Word::new(letters)
}

/// The defining relations and their first consequences, replayed on every
/// band basis vector of the truncated representation:
///
/// * cancellation `s_i^* s_i = 1` (both orders for unitaries), iterated
///   to `s_i^{*k} s_i^k = 1`;
/// * both commutation moves, plain–plain and star–plain, with the exact
///   scalar factor;
/// * the star–star move `s_j^* s_i^* = conj(z_ij) s_i^* s_j^*`;
/// * range projections `p_i(k) = s_i^k s_i^{*k}`: idempotent, nested
///   (`p_i(k) p_i(m) = p_i(m)` for `k ≤ m`, both orders), diagonal with
///   the known 0/1 action, and commuting with every other generator
///   letter without any scalar factor.
pub fn relations_suite(ctx: &SuiteContext) -> Report {
    let mut rec = Recorder::new("relations", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let trunc = &ctx.trunc;
    if trunc.band() == 0 {
        rec.fail("-", None, "relations suite needs a band of at least 1");
        return rec.finish();
    }
    let k_max = trunc.band();

    // (name, lhs word, rhs word, scalar factor applied to the rhs)
    let mut identities: Vec<(String, Word, Word, PhasePolynomial)> = Vec::new();
    let unit = PhasePolynomial::one();
    for i in 1..=sig.n() {
        for k in 1..=k_max {
            // s_i^{*k} s_i^k = 1
            let mut letters = vec![Letter::star(i); k as usize];
            letters.extend(vec![Letter::plain(i); k as usize]);
            identities.push((
                format!("s{i}*^{k} s{i}^{k} = 1"),
                Word::new(letters),
                Word::empty(),
                unit.clone(),
            ));
            if !sig.is_isometry(i) {
                identities.push((
                    format!("s{i}^{k} s{i}*^{k} = 1 (unitary)"),
                    range_projection_word(i, k),
                    Word::empty(),
                    unit.clone(),
                ));
            }
            // p_i(k) p_i(k) = p_i(k)
            let p = range_projection_word(i, k);
            identities.push((
                format!("p{i}({k}) idempotent"),
                p.concat(&p),
                p.clone(),
                unit.clone(),
            ));
            for m in k..=k_max {
                let pm = range_projection_word(i, m);
                identities.push((
                    format!("p{i}({k}) p{i}({m}) = p{i}({m})"),
                    p.concat(&pm),
                    pm.clone(),
                    unit.clone(),
                ));
                identities.push((
                    format!("p{i}({m}) p{i}({k}) = p{i}({m})"),
                    pm.concat(&p),
                    pm.clone(),
                    unit.clone(),
                ));
            }
        }
        for j in 1..=sig.n() {
            if i == j {
                continue;
            }
            let z = PhasePolynomial::phase(&sig.angles().z_power(i, j, 1));
            let zbar = PhasePolynomial::phase(&sig.angles().z_power(i, j, -1));
            identities.push((
                format!("s{i} s{j} = z[{i},{j}] s{j} s{i}"),
                Word::new(vec![Letter::plain(i), Letter::plain(j)]),
                Word::new(vec![Letter::plain(j), Letter::plain(i)]),
                z.clone(),
            ));
            identities.push((
                format!("s{i}* s{j} = conj(z[{i},{j}]) s{j} s{i}*"),
                Word::new(vec![Letter::star(i), Letter::plain(j)]),
                Word::new(vec![Letter::plain(j), Letter::star(i)]),
                zbar.clone(),
            ));
            identities.push((
                format!("s{j}* s{i}* = conj(z[{i},{j}]) s{i}* s{j}*"),
                Word::new(vec![Letter::star(j), Letter::star(i)]),
                Word::new(vec![Letter::star(i), Letter::star(j)]),
                zbar,
            ));
            // Generators pass through the other index's range projection
            // without picking up any scalar.
            for k in 1..=k_max.min(trunc.band()) {
                let p = range_projection_word(j, k);
                for star in [false, true] {
                    let letter = Letter {
                        index: i,
                        star,
                    };
                    identities.push((
                        format!(
                            "s{i}{} p{j}({k}) = p{j}({k}) s{i}{}",
                            if star { "*" } else { "" },
                            if star { "*" } else { "" }
                        ),
                        Word::new(vec![letter]).concat(&p),
                        p.concat(&Word::new(vec![letter])),
                        unit.clone(),
                    ));
                }
            }
        }
    }

    let band = trunc.band_indices(sig);
    for idx in &band {
        let v = TruncatedState::basis(idx.clone());
        for (name, lhs, rhs, factor) in &identities {
            let left = apply_word(sig, trunc, lhs, &v);
            let right = apply_word(sig, trunc, rhs, &v).map(|s| s.scale(factor));
            match (left, right) {
                (Ok(a), Ok(b)) => {
                    compare_states(
                        &mut rec,
                        sig,
                        ctx.numeric,
                        &a,
                        &b,
                        &format!("{name} at {idx}"),
                        "relation failed",
                    );
                }
                (l, r) => {
                    rec.cases += 1;
                    rec.fail(
                        format!("{name} at {idx}"),
                        None,
                        format!("application error: {l:?} / {r:?}"),
                    );
                }
            }
        }
        // Range projections act 0/1-diagonally: p_i(k) e_idx is e_idx when
        // the i-th coordinate is at least k, and 0 otherwise.
        for i in 1..=sig.l() {
            for k in 1..=k_max {
                let p = range_projection_word(i, k);
                match apply_word(sig, trunc, &p, &v) {
                    Ok(got) => {
                        let want = if idx.coords()[i - 1] >= k as i64 {
                            v.clone()
                        } else {
                            TruncatedState::zero()
                        };
                        compare_states(
                            &mut rec,
                            sig,
                            ctx.numeric,
                            &got,
                            &want,
                            &format!("p{i}({k}) at {idx}"),
                            "range projection is not the expected 0/1 diagonal",
                        );
                    }
                    Err(e) => {
                        rec.cases += 1;
                        rec.fail(format!("p{i}({k}) at {idx}"), None, format!("{e}"));
                    }
                }
            }
        }
    }
    rec.finish()
}

/// Round-trips random elements through the truncated representation:
/// coefficient extraction from matrix entries recovers the element
/// exactly.
pub fn injectivity_suite(ctx: &SuiteContext, elements: usize, bounds: (u32, u32, u32)) -> Report {
    let mut rec = Recorder::new("injectivity", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let trunc = &ctx.trunc;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..elements {
        let terms = rng.gen_range(1..=4usize);
        let x = random_element(
            sig,
            &mut rng,
            terms,
            (bounds.0, bounds.1, bounds.2 as i64),
            true,
        );
        let mut oracle = |idx: &MultiIndex| {
            apply_element(sig, trunc, &x, &TruncatedState::basis(idx.clone()))
        };
        rec.cases += 1;
        match extract_coefficients(sig, trunc, &mut oracle, bounds) {
            Ok(recovered) => {
                if recovered != x {
                    let residual = element_residual(sig, &recovered, &x);
                    rec.fail(
                        x.to_string(),
                        Some(residual),
                        format!("extraction returned {recovered}"),
                    );
                }
            }
            Err(e) => rec.fail(x.to_string(), None, format!("{e}")),
        }
    }
    rec.finish()
}

/// A random element of the diagonal subalgebra: a sum of balanced
/// monomials `s^a s^{*a}` with Gaussian-rational coefficients.
fn random_diagonal_element(
    sig: &Signature,
    rng: &mut ChaCha8Rng,
    terms: usize,
    exp_max: u32,
) -> Element {
    let mut x = Element::zero();
    for _ in 0..terms {
        let a: Vec<u32> = (0..sig.l()).map(|_| rng.gen_range(0..=exp_max)).collect();
        let m = NormalMonomial::new(sig, a.clone(), a, vec![0; sig.n() - sig.l()])
            .expect("balanced monomial");
        let c = GaussianRational::new(
            BigRational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into()),
            BigRational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into()),
        );
        x.add_term(m, PhasePolynomial::scalar(c));
    }
    x
}

/// The closed-form norm on the diagonal subalgebra agrees exactly with
/// the operator norm of the (diagonal) truncated action, and satisfies
/// the C*-identity `‖x*x‖ = ‖x‖²` exactly.
pub fn norms_suite(ctx: &SuiteContext, elements: usize) -> Report {
    let mut rec = Recorder::new("norms", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..elements {
        let terms = rng.gen_range(1..=4);
        let x = random_diagonal_element(sig, &mut rng, terms, 4);
        if x.is_zero() {
            continue;
        }
        rec.cases += 1;
        let input = x.to_string();
        if !in_projection_algebra(sig, &x) {
            rec.fail(&input, None, "generator produced a non-diagonal element");
            continue;
        }
        let pal = match pal_norm(sig, &x) {
            Ok(p) => p,
            Err(e) => {
                rec.fail(&input, None, format!("{e}"));
                continue;
            }
        };
        let Some(exact_sq) = pal.exact_sq.clone() else {
            rec.fail(&input, None, "expected an exact squared norm");
            continue;
        };

        // Independent route: act on every basis vector of the finite
        // window and take the largest amplitude. Balanced monomials act
        // diagonally, so the operator norm is that maximum.
        let cutoff = x
            .iter()
            .flat_map(|(m, _)| m.e().iter().copied())
            .max()
            .unwrap_or(0);
        let trunc = Truncation::new(cutoff, 0).expect("zero band is valid");
        let mut op_sq = BigRational::from_integer(0.into());
        let mut ok = true;
        for cell in grid_u32(sig.l(), cutoff) {
            let mut coords: Vec<i64> = cell.iter().map(|&v| v as i64).collect();
            coords.extend(std::iter::repeat_n(0, sig.n() - sig.l()));
            let idx = MultiIndex::new(sig, coords).expect("window index");
            let state = match apply_element(sig, &trunc, &x, &TruncatedState::basis(idx.clone())) {
                Ok(s) => s,
                Err(e) => {
                    rec.fail(&input, None, format!("{e}"));
                    ok = false;
                    break;
                }
            };
            for (at, _amp) in state.iter() {
                if at != &idx {
                    rec.fail(&input, None, format!("off-diagonal action at {idx} -> {at}"));
                    ok = false;
                }
            }
            let amp = state.amplitude(&idx);
            match amp.as_scalar() {
                Some(c) => {
                    let sq = c.norm_sqr();
                    if sq > op_sq {
                        op_sq = sq;
                    }
                }
                None => {
                    rec.fail(&input, None, "non-scalar diagonal amplitude");
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        if op_sq != exact_sq {
            rec.fail(
                &input,
                None,
                format!("closed form {exact_sq} vs operator maximum {op_sq}"),
            );
            continue;
        }
        // C*-identity, exactly.
        let xx = mul(sig, &adjoint(sig, &x), &x);
        match pal_norm(sig, &xx) {
            Ok(p2) => match p2.exact_sq {
                Some(sq2) => {
                    if sq2 != (&exact_sq * &exact_sq) {
                        rec.fail(
                            &input,
                            None,
                            format!("C*-identity broke: ‖x*x‖² = {sq2}, ‖x‖⁴ = {}", &exact_sq * &exact_sq),
                        );
                    }
                }
                None => rec.fail(&input, None, "x*x lost exactness"),
            },
            Err(e) => rec.fail(&input, None, format!("{e}")),
        }
    }
    rec.finish()
}

/// Induced-space geometry: the 0/1 norm trichotomy for monomial vectors,
/// orthonormality of the standard bases at the vacuum and at a higher
/// level, and orthogonality across levels.
pub fn stinespring_suite(ctx: &SuiteContext) -> Report {
    let mut rec = Recorder::new("stinespring", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let l = sig.l();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);

    // (a) ‖[s^e u^g s^{*f} ⊗ ee_k]‖² is 1 when f ≤ k coordinatewise, 0
    // otherwise — exhaustively over the (f, k) grid.
    let cap = if l <= 2 { 5 } else { 2 };
    let f_grid = grid_u32(l, cap);
    for f in &f_grid {
        for k in &f_grid {
            let e: Vec<u32> = (0..l).map(|_| rng.gen_range(0..=2)).collect();
            let g: Vec<i64> = (0..sig.n() - l).map(|_| rng.gen_range(-2..=2)).collect();
            let m = NormalMonomial::new(sig, e, f.clone(), g).expect("monomial");
            let v = StVector::new(sig, Element::from_monomial(m.clone()), k.clone())
                .expect("labelled vector");
            let norm_sq = st_inner(sig, &v, &v);
            let expected_one = f.iter().zip(k.iter()).all(|(fi, ki)| fi <= ki);
            rec.cases += 1;
            let good = if expected_one {
                norm_sq == PhasePolynomial::one()
            } else {
                norm_sq.is_zero()
            };
            if !good {
                rec.fail(
                    format!("[{m} ⊗ ee_{k:?}]"),
                    None,
                    format!("norm² = {norm_sq}, expected {}", u32::from(expected_one)),
                );
            }
        }
    }

    // (b) Orthonormal bases: star-free monomials at the vacuum level, and
    // monomials with f pinned to k at level k. Gram must be the identity.
    let check_gram = |rec: &mut Recorder, label: &str, vectors: &[StVector]| {
        let gram = gram_matrix(sig, vectors);
        for (r, row) in gram.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                rec.cases += 1;
                let good = if r == c {
                    entry == &PhasePolynomial::one()
                } else {
                    entry.is_zero()
                };
                if !good {
                    rec.fail(
                        format!("{label} entry ({r},{c})"),
                        None,
                        format!("Gram entry {entry}"),
                    );
                }
            }
        }
    };

    let e_bound = if sig.n() <= 3 { 2 } else { 1 };
    let g_bound: i64 = if sig.n() <= 3 { 2 } else { 1 };
    let level = |k: Vec<u32>| -> Vec<StVector> {
        let mut vectors = Vec::new();
        for e in grid_u32(l, e_bound) {
            for g in grid_tuples_unitary(sig, g_bound) {
                let m = NormalMonomial::new(sig, e.clone(), k.clone(), g).expect("monomial");
                vectors.push(
                    StVector::new(sig, Element::from_monomial(m), k.clone())
                        .expect("labelled vector"),
                );
            }
        }
        vectors
    };
    let vacuum = level(vec![0; l]);
    check_gram(&mut rec, "vacuum basis", &vacuum);
    let k_high: Vec<u32> = (0..l).map(|i| 1 + (i as u32 % 2)).collect();
    let high = level(k_high.clone());
    if l > 0 {
        check_gram(&mut rec, "higher-level basis", &high);
    }

    // (c) Vectors at different levels are orthogonal.
    for v in vacuum.iter().take(10) {
        for w in high.iter().take(10) {
            rec.cases += 1;
            let ip = st_inner(sig, v, w);
            if !ip.is_zero() {
                rec.fail(
                    format!("cross-level pair ({:?}, {:?})", v.k, w.k),
                    None,
                    format!("inner product {ip}"),
                );
            }
        }
    }
    rec.finish()
}

/// Grid of unitary exponent tuples `{-bound..=bound}^(n-l)`.
fn grid_tuples_unitary(sig: &Signature, bound: i64) -> Vec<Vec<i64>> {
    let dims = sig.n() - sig.l();
    let mut out = vec![vec![]];
    for _ in 0..dims {
        let mut next = Vec::new();
        for prefix in &out {
            for v in -bound..=bound {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The degree-twist isomorphism transports products, adjoints and the
/// unit onto the deformed multiplication; the deformed product is
/// associative and unital.
pub fn deformation_suite(ctx: &SuiteContext, pairs: usize, triples: usize) -> Report {
    let mut rec = Recorder::new("deformation", ctx.mode_name(), ctx.seed);
    let dctx = DeformationContext::new(ctx.sig.clone());
    let sig = ctx.sig.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);

    for _ in 0..pairs {
        let m1 = random_monomial(&sig, &mut rng, (2, 2, 2));
        let m2 = random_monomial(&sig, &mut rng, (2, 2, 2));
        let x = Element::from_monomial(m1.clone());
        let y = Element::from_monomial(m2.clone());
        let lhs = psi(&dctx, &mul(dctx.target(), &x, &y));
        let rhs = deformed_mul(&dctx, &psi(&dctx, &x), &psi(&dctx, &y));
        compare_elements(
            &mut rec,
            &sig,
            ctx.numeric,
            &lhs,
            &rhs,
            &format!("({m1}, {m2})"),
            "twist map is not multiplicative",
        );
        let alhs = psi(&dctx, &adjoint(dctx.target(), &x));
        let arhs = adjoint(dctx.base(), &psi(&dctx, &x));
        compare_elements(
            &mut rec,
            &sig,
            ctx.numeric,
            &alhs,
            &arhs,
            &format!("{m1}"),
            "twist map does not respect adjoints",
        );
    }

    for _ in 0..triples {
        let x = random_element(&sig, &mut rng, 2, (1, 1, 1), true);
        let y = random_element(&sig, &mut rng, 2, (1, 1, 1), true);
        let z = random_element(&sig, &mut rng, 2, (1, 1, 1), true);
        let lhs = deformed_mul(&dctx, &deformed_mul(&dctx, &x, &y), &z);
        let rhs = deformed_mul(&dctx, &x, &deformed_mul(&dctx, &y, &z));
        compare_elements(
            &mut rec,
            &sig,
            ctx.numeric,
            &lhs,
            &rhs,
            &format!("({x}; {y}; {z})"),
            "deformed product is not associative",
        );
    }
    rec.finish()
}

/// The diagonal unitary intertwines the deformed action of the twisted
/// generators with the straight action — generator by generator, band
/// vector by band vector.
pub fn intertwiner_suite(ctx: &SuiteContext) -> Report {
    let mut rec = Recorder::new("intertwiner", ctx.mode_name(), ctx.seed);
    let dctx = DeformationContext::new(ctx.sig.clone());
    let report = verify_intertwiner(&dctx, &ctx.trunc);
    for entry in &report.entries {
        rec.cases += entry.vectors_checked;
        let good = if ctx.numeric {
            entry.max_residual <= NUMERIC_TOLERANCE
        } else {
            entry.exact_match
        };
        if !good {
            rec.fail(
                format!(
                    "generator {}{}",
                    entry.generator,
                    if entry.star { "*" } else { "" }
                ),
                Some(entry.max_residual),
                "intertwining identity failed",
            );
        }
    }
    rec.finish()
}

/// Builds the canonical enlargement of a signature: one extra isometry
/// and one extra unitary, matching angles on the embedded pairs and
/// seeded rational angles elsewhere.
pub fn enlarged_signature(sig: &Signature, seed: u64) -> Signature {
    let n = sig.n();
    let l = sig.l();
    let n_big = n + 2;
    let l_big = l + 1;
    let preimage = |b: usize| -> Option<usize> {
        if b >= 1 && b <= l {
            Some(b)
        } else if b > l_big && b <= l_big + (n - l) {
            Some(l + (b - l_big))
        } else {
            None
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 1..=n_big {
        for j in (i + 1)..=n_big {
            let angle = match (preimage(i), preimage(j)) {
                (Some(a), Some(b)) => sig.angles().phi(a.min(b), a.max(b)),
                _ => {
                    let den = rng.gen_range(1i64..=10);
                    let num = rng.gen_range(0i64..(2 * den).max(1));
                    Angle::Rational(BigRational::new(num.into(), den.into()))
                }
            };
            pairs.push((i, j, angle));
        }
    }
    let angles = AngleAssignment::new(n_big, pairs, sig.angles().mode())
        .expect("valid enlarged angles");
    Signature::new(n_big, l_big, angles).expect("valid enlarged signature")
}

/// The canonical index injection into an enlarged signature is an exact
/// ∗-homomorphism on random elements, and normalization constants from
/// different monomial orderings are consistent across choices.
pub fn embedding_suite(ctx: &SuiteContext, elements: usize) -> Report {
    let mut rec = Recorder::new("embedding", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let big = enlarged_signature(sig, ctx.seed.wrapping_add(17));
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);

    for _ in 0..elements {
        let x = random_element(sig, &mut rng, 3, (2, 2, 2), true);
        let y = random_element(sig, &mut rng, 3, (2, 2, 2), true);
        let input = format!("({x}; {y})");
        let ex = match embed(sig, &big, &x) {
            Ok(v) => v,
            Err(e) => {
                rec.cases += 1;
                rec.fail(&input, None, format!("{e}"));
                continue;
            }
        };
        let ey = embed(sig, &big, &y).expect("embedding succeeded once");
        let lhs = embed(sig, &big, &mul(sig, &x, &y)).expect("embedding succeeded once");
        compare_elements(
            &mut rec,
            &big,
            ctx.numeric,
            &lhs,
            &mul(&big, &ex, &ey),
            &input,
            "embedding is not multiplicative",
        );
        let albs = embed(sig, &big, &adjoint(sig, &x)).expect("embedding succeeded once");
        compare_elements(
            &mut rec,
            &big,
            ctx.numeric,
            &albs,
            &adjoint(&big, &ex),
            &input,
            "embedding does not respect adjoints",
        );
        rec.cases += 1;
        if ex.num_terms() != x.num_terms() {
            rec.fail(&input, None, "embedding merged or dropped basis terms");
        }
    }

    // Normalization constants for different monomial orderings: the
    // canonical ordering against three shuffled ones, on a tuple grid.
    let tuples = grid_tuples(sig, 3, 3, 400);
    for s in 1..=3u64 {
        let report = verify_choice_equivalence(
            sig,
            &MonomialChoice::Canonical,
            &MonomialChoice::Seeded(ctx.seed.wrapping_add(s)),
            &tuples,
        );
        rec.cases += report.checked;
        for violation in &report.violations {
            rec.fail(format!("ordering seed {s}"), None, violation.clone());
        }
    }
    rec.finish()
}

/// The K-group ranks against a frozen table for every signature shape
/// with at most five generators.
pub fn ktheory_table_suite(ctx: &SuiteContext) -> Report {
    let mut rec = Recorder::new("ktheory-table", ctx.mode_name(), ctx.seed);
    // (n, l, k0 rank, k1 rank)
    let table: [(i64, i64, u128, u128); 21] = [
        (0, 0, 1, 0),
        (1, 0, 1, 1),
        (1, 1, 1, 0),
        (2, 0, 2, 2),
        (2, 1, 1, 1),
        (2, 2, 1, 0),
        (3, 0, 4, 4),
        (3, 1, 2, 2),
        (3, 2, 1, 1),
        (3, 3, 1, 0),
        (4, 0, 8, 8),
        (4, 1, 4, 4),
        (4, 2, 2, 2),
        (4, 3, 1, 1),
        (4, 4, 1, 0),
        (5, 0, 16, 16),
        (5, 1, 8, 8),
        (5, 2, 4, 4),
        (5, 3, 2, 2),
        (5, 4, 1, 1),
        (5, 5, 1, 0),
    ];
    for (n, l, k0, k1) in table {
        rec.cases += 1;
        match kgroups(n, l) {
            Ok(groups) => {
                if groups.k0_rank != k0 || groups.k1_rank != k1 || !groups.torsion_free {
                    rec.fail(
                        format!("(n={n}, l={l})"),
                        None,
                        format!(
                            "got (Z^{}, Z^{}), expected (Z^{k0}, Z^{k1})",
                            groups.k0_rank, groups.k1_rank
                        ),
                    );
                }
            }
            Err(e) => rec.fail(format!("(n={n}, l={l})"), None, format!("{e}")),
        }
    }
    rec.finish()
}

/// The averaging projection is idempotent and faithful on positives:
/// `θ∘θ = θ` and `θ(x*x) ≠ 0` for nonzero `x`, exactly.
pub fn theta_suite(ctx: &SuiteContext, elements: usize) -> Report {
    let mut rec = Recorder::new("theta", ctx.mode_name(), ctx.seed);
    let sig = &ctx.sig;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut produced = 0usize;
    while produced < elements {
        let terms = rng.gen_range(1..=4);
        let x = random_element(sig, &mut rng, terms, (2, 2, 2), true);
        if x.is_zero() {
            continue;
        }
        produced += 1;
        let input = x.to_string();
        let t = theta(sig, &x);
        compare_elements(
            &mut rec,
            sig,
            ctx.numeric,
            &theta(sig, &t),
            &t,
            &input,
            "averaging projection is not idempotent",
        );
        rec.cases += 1;
        if !in_projection_algebra(sig, &t) {
            rec.fail(&input, None, "projected element is not diagonal");
        }
        rec.cases += 1;
        match theta_faithful_witness(sig, &x) {
            Ok(w) => {
                if w.is_zero() {
                    rec.fail(&input, None, "θ(x*x) vanished for nonzero x");
                }
            }
            Err(e) => rec.fail(&input, None, format!("{e}")),
        }
    }
    rec.finish()
}

/// Runs one named suite with its default sizes.
pub fn run_suite(ctx: &SuiteContext, name: &str) -> Result<Report, SuiteError> {
    match name {
        "confluence" => Ok(confluence_suite(ctx, 10_000, 12, None)),
        "relations" => Ok(relations_suite(ctx)),
        "injectivity" => Ok(injectivity_suite(ctx, 500, (3, 3, 3))),
        "norms" => Ok(norms_suite(ctx, 200)),
        "stinespring" => Ok(stinespring_suite(ctx)),
        "deformation" => Ok(deformation_suite(ctx, 1000, 1000)),
        "intertwiner" => Ok(intertwiner_suite(ctx)),
        "embedding" => Ok(embedding_suite(ctx, 200)),
        "ktheory-table" => Ok(ktheory_table_suite(ctx)),
        "theta" => Ok(theta_suite(ctx, 100)),
        other => Err(SuiteError::UnknownSuite {
            name: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::AngleAssignment;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ctx_2_1() -> SuiteContext {
        let angles = AngleAssignment::exact(2, vec![(1, 2, rat(1, 4))]).unwrap();
        let sig = Signature::new(2, 1, angles).unwrap();
        SuiteContext::new(sig, Truncation::new(8, 2).unwrap(), 42, false)
    }

    fn ctx_3_2() -> SuiteContext {
        let angles = AngleAssignment::exact(
            3,
            vec![(1, 2, rat(1, 3)), (1, 3, rat(1, 5)), (2, 3, rat(2, 7))],
        )
        .unwrap();
        let sig = Signature::new(3, 2, angles).unwrap();
        SuiteContext::new(sig, Truncation::new(8, 2).unwrap(), 42, false)
    }

    #[test]
    fn default_relations_config_passes() {
        let ctx = ctx_2_1();
        let report = relations_suite(&ctx);
        assert!(report.pass(), "failures: {:?}", report.failures);
        assert!(report.cases > 0);
    }

    #[test]
    fn small_suites_pass_on_a_mixed_signature() {
        let ctx = ctx_3_2();
        let confluence = confluence_suite(&ctx, 200, 10, None);
        assert!(confluence.pass(), "failures: {:?}", confluence.failures);
        let injectivity = injectivity_suite(&ctx, 10, (2, 2, 2));
        assert!(injectivity.pass(), "failures: {:?}", injectivity.failures);
        let norms = norms_suite(&ctx, 20);
        assert!(norms.pass(), "failures: {:?}", norms.failures);
        let stinespring = stinespring_suite(&ctx);
        assert!(stinespring.pass(), "failures: {:?}", stinespring.failures);
        let deformation = deformation_suite(&ctx, 50, 20);
        assert!(deformation.pass(), "failures: {:?}", deformation.failures);
        let theta = theta_suite(&ctx, 20);
        assert!(theta.pass(), "failures: {:?}", theta.failures);
        let ktheory = ktheory_table_suite(&ctx);
        assert!(ktheory.pass(), "failures: {:?}", ktheory.failures);
    }

    #[test]
    fn representation_level_suites_pass() {
        let mut ctx = ctx_2_1();
        ctx.trunc = Truncation::new(6, 2).unwrap();
        let intertwiner = intertwiner_suite(&ctx);
        assert!(intertwiner.pass(), "failures: {:?}", intertwiner.failures);
        let embedding = embedding_suite(&ctx, 20);
        assert!(embedding.pass(), "failures: {:?}", embedding.failures);
    }

    #[test]
    fn reports_serialize_and_unknown_suites_error() {
        let ctx = ctx_2_1();
        let report = ktheory_table_suite(&ctx);
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"suite\":\"ktheory-table\""));
        assert!(json.contains("\"pass\":true"));
        assert!(run_suite(&ctx, "no-such-suite").is_err());
    }
}
