//! Straightening of words in the generators of `Dist(G_m)` into the PBW
//! normal form: positive divided powers, then torus binomials, then negative
//! divided powers, each block in a fixed order.
//!
//! Each step rewrites the leftmost adjacent pair that violates the order and
//! strictly decreases the measure (total root exponent, letter count,
//! inversions), compared lexicographically; the decrease is asserted.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{binom, Field, Prime, Scalar};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::relations::root_sum;
use crate::tensor::{GeneratorSymbol, TensorModule};
use crate::torus::{linear_form_binomial_element, TorusAlgebraContext, TorusMonomial};

pub const STEP_CAP: usize = 1_000_000;

/// Positive roots `(i,j)`, `i<j`, and negative roots `(i,j)`, `i>j`, in
/// the orders used by the normal form.
pub fn root_order(n: usize) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    if n < 2 {
        return Err(Error::InvalidParams("root orders need n >= 2".into()));
    }
    let mut pos = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            pos.push((i, j));
        }
    }
    let mut neg = Vec::new();
    for j in 2..=n {
        for k in (1..j).rev() {
            neg.push((j, k));
        }
    }
    Ok((pos, neg))
}

/// `(n, p, m)`: the algebra `Dist(G_m)` of `GL(n)` over `F_p`.
#[derive(Clone, Debug)]
pub struct RewriteContext {
    n: usize,
    p: Prime,
    m: u32,
    q: u64,
    positive: Vec<(usize, usize)>,
    negative: Vec<(usize, usize)>,
    torus: Arc<TorusAlgebraContext>,
}

impl RewriteContext {
    pub fn new(n: usize, p: u64, m: u32) -> Result<Self> {
        let p = Prime::new(p)?;
        let torus = TorusAlgebraContext::char_p(n, p, m)?;
        let (positive, negative) = root_order(n)?;
        Ok(RewriteContext { n, p, m, q: p.pow(m)?, positive, negative, torus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> Field {
        Field::Prime(self.p)
    }

    fn key(&self, l: &Letter) -> (u8, usize) {
        match *l {
            Letter::Root { i, j, .. } if i < j => (0, self.positive.iter().position(|r| *r == (i, j)).expect("valid root")),
            Letter::Tor { axis, .. } => (1, axis),
            Letter::Root { i, j, .. } => (2, self.negative.iter().position(|r| *r == (i, j)).expect("valid root")),
        }
    }

    fn scalar(&self, v: i64) -> Scalar {
        self.field().from_i64(v)
    }
}

/// Internal letter: a divided power or a torus binomial `binom(H_axis, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Letter {
    Root { i: usize, j: usize, k: u64 },
    Tor { axis: usize, a: u64 },
}

impl Letter {
    fn exponent(&self) -> u64 {
        match *self {
            Letter::Root { k, .. } => k,
            Letter::Tor { a, .. } => a,
        }
    }
}

type Word = Vec<Letter>;

/// A product of generators, left to right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorWord {
    pub letters: Vec<GeneratorSymbol>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<GeneratorSymbol>) -> Self {
        GeneratorWord { letters }
    }

    /// Parses `x(1,2)^(3) binom(H1,2) x(2,1)`; factors may be separated by
    /// whitespace or `*`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut letters = Vec::new();
        let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = cleaned.as_str();
        let err = |what: &str| Error::Malformed(format!("cannot parse word {src:?}: {what}"));
        while !rest.is_empty() {
            rest = rest.trim_start_matches('*');
            if rest.is_empty() {
                break;
            }
            if let Some(body) = rest.strip_prefix("x(") {
                let close = body.find(')').ok_or_else(|| err("missing ')'"))?;
                let (i, j) = body[..close].split_once(',').ok_or_else(|| err("root needs two indices"))?;
                let i: usize = i.parse().map_err(|_| err(i))?;
                let j: usize = j.parse().map_err(|_| err(j))?;
                rest = &body[close + 1..];
                let mut k = 1;
                if let Some(pow) = rest.strip_prefix("^(") {
                    let close = pow.find(')').ok_or_else(|| err("missing ')'"))?;
                    k = pow[..close].parse().map_err(|_| err(&pow[..close]))?;
                    rest = &pow[close + 1..];
                }
                letters.push(GeneratorSymbol::DividedPower { root: (i, j), k });
            } else if let Some(body) = rest.strip_prefix("binom(H") {
                let close = body.find(')').ok_or_else(|| err("missing ')'"))?;
                let (axis, a) = body[..close].split_once(',').ok_or_else(|| err("binomial needs two arguments"))?;
                let axis: usize = axis.parse().map_err(|_| err(axis))?;
                let a: u64 = a.parse().map_err(|_| err(a))?;
                letters.push(GeneratorSymbol::BinomialH { axis, a });
                rest = &body[close + 1..];
            } else {
                return Err(err(rest));
            }
        }
        Ok(GeneratorWord { letters })
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        GeneratorWord { letters: self.letters.iter().chain(&other.letters).cloned().collect() }
    }

    /// Uniform letters: a random root or axis with exponent in `[0, q)`.
    pub fn random<R: Rng>(rng: &mut R, ctx: &RewriteContext, max_len: usize) -> Self {
        let len = rng.gen_range(0..=max_len);
        let roots: Vec<(usize, usize)> = ctx.positive.iter().chain(&ctx.negative).copied().collect();
        let letters = (0..len)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    GeneratorSymbol::DividedPower { root: roots[rng.gen_range(0..roots.len())], k: rng.gen_range(0..ctx.q) }
                } else {
                    GeneratorSymbol::BinomialH { axis: rng.gen_range(1..=ctx.n), a: rng.gen_range(0..ctx.q) }
                }
            })
            .collect();
        GeneratorWord { letters }
    }

    pub fn matrix(&self, module: &TensorModule) -> Result<SparseMatrix> {
        let mut out = SparseMatrix::identity(module.dim(), module.field());
        for l in &self.letters {
            out = out.mul(&module.matrix_of_symbol(l)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `∏_{i<j} x_{ij}^{(a_ij)} · ∏ binom(H_i, b_i) · ∏_{i>j} x_{ij}^{(c_ij)}`
/// with exponents listed in the root orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PBWMonomial {
    pub positive: Vec<u64>,
    pub torus: TorusMonomial,
    pub negative: Vec<u64>,
}

impl PBWMonomial {
    pub fn unit(ctx: &RewriteContext) -> Self {
        PBWMonomial {
            positive: vec![0; ctx.positive.len()],
            torus: TorusMonomial::unit(ctx.n),
            negative: vec![0; ctx.negative.len()],
        }
    }

    /// The word spelling out this monomial (zero exponents omitted).
    pub fn to_word(&self, ctx: &RewriteContext) -> GeneratorWord {
        let mut letters = Vec::new();
        for (root, k) in ctx.positive.iter().zip(&self.positive) {
            if *k > 0 {
                letters.push(GeneratorSymbol::DividedPower { root: *root, k: *k });
            }
        }
        for (axis, a) in self.torus.0.iter().enumerate() {
            if *a > 0 {
                letters.push(GeneratorSymbol::BinomialH { axis: axis + 1, a: u64::from(*a) });
            }
        }
        for (root, k) in ctx.negative.iter().zip(&self.negative) {
            if *k > 0 {
                letters.push(GeneratorSymbol::DividedPower { root: *root, k: *k });
            }
        }
        GeneratorWord { letters }
    }

    fn from_normal_word(ctx: &RewriteContext, w: &[Letter]) -> Self {
        let mut out = Self::unit(ctx);
        for l in w {
            match *l {
                Letter::Tor { axis, a } => out.torus.0[axis - 1] = a as u32,
                Letter::Root { i, j, k } if i < j => out.positive[ctx.key(l).1] = k,
                Letter::Root { k, .. } => out.negative[ctx.key(l).1] = k,
            }
        }
        out
    }
}

/// Linear combination of PBW monomials with nonzero coefficients in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormElement {
    pub terms: BTreeMap<PBWMonomial, Scalar>,
}

impl NormalFormElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn matrix(&self, ctx: &RewriteContext, module: &TensorModule) -> Result<SparseMatrix> {
        let mut acc = SparseMatrix::zero(module.dim(), module.field());
        for (mono, c) in &self.terms {
            acc = acc.add(&mono.to_word(ctx).matrix(module)?.scale(c))?;
        }
        Ok(acc)
    }

    /// Product of two normal forms, itself straightened.
    pub fn multiply(&self, other: &NormalFormElement, ctx: &RewriteContext) -> Result<NormalFormElement> {
        let mut acc: BTreeMap<PBWMonomial, Scalar> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = pbw_rewrite(&a.to_word(ctx).concat(&b.to_word(ctx)), ctx)?;
                let c = ca * cb;
                for (mono, v) in prod.terms {
                    let slot = acc.entry(mono).or_insert_with(|| ctx.field().zero());
                    *slot += &(&v * &c);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(NormalFormElement { terms: acc })
    }

    pub fn render(&self, ctx: &RewriteContext) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let w = m.to_word(ctx);
                match (w.letters.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => w.to_string(),
                    (false, false) => format!("{c}*{w}"),
                }
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_json(&self, ctx: &RewriteContext) -> String {
        serde_json::to_string_pretty(&NormalFormJson { nf: self, ctx }).expect("normal forms serialize")
    }
}

struct NormalFormJson<'a> {
    nf: &'a NormalFormElement,
    ctx: &'a RewriteContext,
}

impl Serialize for NormalFormJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct TermJson {
            coefficient: String,
            monomial: PBWMonomial,
            word: String,
        }
        let terms: Vec<TermJson> = self
            .nf
            .terms
            .iter()
            .map(|(m, c)| TermJson { coefficient: c.to_string(), monomial: m.clone(), word: m.to_word(self.ctx).to_string() })
            .collect();
        let mut st = serializer.serialize_struct("NormalFormElement", 4)?;
        st.serialize_field("positive_roots", &self.ctx.positive)?;
        st.serialize_field("negative_roots", &self.ctx.negative)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `(total root exponent, letter count, inversions)`.
type Measure = (u64, usize, usize);

struct Engine<'a> {
    ctx: &'a RewriteContext,
    linear_forms: HashMap<(Vec<i64>, i64, u64), Vec<(Word, Scalar)>>,
}

impl<'a> Engine<'a> {
    fn measure(&self, w: &[Letter]) -> Measure {
        let roots = w.iter().filter_map(|l| if let Letter::Root { k, .. } = l { Some(*k) } else { None }).sum();
        let mut inv = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if self.ctx.key(&w[a]) >= self.ctx.key(&w[b]) {
                    inv += 1;
                }
            }
        }
        (roots, w.len(), inv)
    }

    fn torus_letters(&self, mono: &TorusMonomial) -> Word {
        mono.0
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .map(|(axis, a)| Letter::Tor { axis: axis + 1, a: u64::from(*a) })
            .collect()
    }

    /// `binom(⟨coeffs, H⟩ + c, a)` as a combination of normal torus words.
    fn linear_form(&mut self, coeffs: Vec<i64>, c: i64, a: u64) -> Result<Vec<(Word, Scalar)>> {
        let key = (coeffs, c, a);
        if let Some(v) = self.linear_forms.get(&key) {
            return Ok(v.clone());
        }
        let el = linear_form_binomial_element(&self.ctx.torus, &key.0, key.1, key.2)?;
        let v: Vec<(Word, Scalar)> = el.terms().iter().map(|(m, s)| (self.torus_letters(m), s.clone())).collect();
        self.linear_forms.insert(key, v.clone());
        Ok(v)
    }

    /// Index of the leftmost violation: a zero-exponent letter, or an
    /// adjacent pair whose keys do not strictly increase.
    fn violation(&self, w: &[Letter]) -> Option<usize> {
        for (idx, l) in w.iter().enumerate() {
            if l.exponent() == 0 {
                return Some(idx);
            }
            if idx + 1 < w.len() && w[idx + 1].exponent() != 0 && self.ctx.key(l) >= self.ctx.key(&w[idx + 1]) {
                return Some(idx);
            }
        }
        None
    }

    /// Replacement for `w[idx..idx+2]` (or `w[idx]` for a zero exponent).
    fn step(&mut self, w: &[Letter], idx: usize) -> Result<(usize, Vec<(Word, Scalar)>)> {
        let ctx = self.ctx;
        let one = ctx.field().one();
        if w[idx].exponent() == 0 {
            return Ok((1, vec![(vec![], one)]));
        }
        let (l, r) = (w[idx], w[idx + 1]);
        let q = ctx.q;
        let out = match (l, r) {
            (Letter::Root { i, j, k }, Letter::Root { i: i2, j: j2, k: k2 }) if (i, j) == (i2, j2) => {
                if k + k2 >= q {
                    debug_assert!(ctx.scalar(1).is_one());
                    vec![]
                } else {
                    let c = ctx.field().from_bigint(&binom((k + k2) as i64, k));
                    vec![(vec![Letter::Root { i, j, k: k + k2 }], c)]
                }
            }
            (Letter::Tor { axis, a }, Letter::Tor { axis: axis2, a: b }) if axis == axis2 => {
                let mut terms = Vec::new();
                for t in 0..=a.min(b) {
                    let e = a + b - t;
                    let c = ctx.field().from_bigint(&(binom(e as i64, a - t) * binom(b as i64, t)));
                    if e >= q {
                        if !c.is_zero() {
                            return Err(Error::MeasureViolation(format!("binom(H,{a})binom(H,{b}) leaves the truncated span")));
                        }
                        continue;
                    }
                    terms.push((vec![Letter::Tor { axis, a: e }], c));
                }
                terms
            }
            (Letter::Tor { .. }, Letter::Tor { .. }) => vec![(vec![r, l], one)],
            // binom(H_axis, a) x^(k) = x^(k) binom(H_axis + δ, a)
            (Letter::Tor { axis, a }, Letter::Root { i, j, k }) => {
                let delta = shift_of(axis, i, j, k);
                (0..=a)
                    .map(|t| {
                        let mut w = vec![r];
                        if t > 0 {
                            w.push(Letter::Tor { axis, a: t });
                        }
                        (w, ctx.field().from_bigint(&binom(delta, a - t)))
                    })
                    .collect()
            }
            // x^(k) binom(H_axis, a) = binom(H_axis - δ, a) x^(k)
            (Letter::Root { i, j, k }, Letter::Tor { axis, a }) => {
                let delta = shift_of(axis, i, j, k);
                (0..=a)
                    .map(|t| {
                        let mut w = Vec::new();
                        if t > 0 {
                            w.push(Letter::Tor { axis, a: t });
                        }
                        w.push(l);
                        (w, ctx.field().from_bigint(&binom(-delta, a - t)))
                    })
                    .collect()
            }
            (Letter::Root { i, j, k }, Letter::Root { i: i2, j: j2, k: k2 }) => {
                if (i, j) == (j2, i2) {
                    // x_β^(k) x_{-β}^(k2) = Σ_a x_{-β}^(k2-a) binom(H_β - k - k2 + 2a, a) x_β^(k-a)
                    let mut coeffs = vec![0i64; ctx.n];
                    coeffs[i - 1] = 1;
                    coeffs[j - 1] = -1;
                    let mut terms = Vec::new();
                    for a in 0..=k.min(k2) {
                        let c = -(k as i64) - (k2 as i64) + 2 * a as i64;
                        for (tw, s) in self.linear_form(coeffs.clone(), c, a)? {
                            let mut w = vec![Letter::Root { i: i2, j: j2, k: k2 - a }];
                            w.extend(tw);
                            w.push(Letter::Root { i, j, k: k - a });
                            w.retain(|x| x.exponent() > 0);
                            terms.push((w, s));
                        }
                    }
                    terms
                } else if let Some(((si, sj), c)) = root_sum((i, j), (i2, j2)) {
                    // x_α^(k) x_β^(l) = Σ_a c^a x_β^(l-a) x_{α+β}^(a) x_α^(k-a)
                    (0..=k.min(k2))
                        .map(|a| {
                            let mut w = vec![
                                Letter::Root { i: i2, j: j2, k: k2 - a },
                                Letter::Root { i: si, j: sj, k: a },
                                Letter::Root { i, j, k: k - a },
                            ];
                            w.retain(|x| x.exponent() > 0);
                            (w, ctx.scalar(c.pow(a as u32)))
                        })
                        .collect()
                } else {
                    vec![(vec![r, l], one)]
                }
            }
        };
        Ok((2, out.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
    }
}

fn shift_of(axis: usize, i: usize, j: usize, k: u64) -> i64 {
    if axis == i {
        k as i64
    } else if axis == j {
        -(k as i64)
    } else {
        0
    }
}

/// Statistics of a rewrite run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RewriteStats {
    pub steps: usize,
    /// Every step was checked to strictly decrease the measure.
    pub measure_checked: bool,
}

fn letters_of(word: &GeneratorWord, ctx: &RewriteContext) -> Result<Vec<(Word, Scalar)>> {
    let bad = |what: String| Error::InvalidParams(format!("letter {what} outside Dist(G_{}) for n={}, q={}", ctx.m, ctx.n, ctx.q));
    let mut words: Vec<(Word, Scalar)> = vec![(vec![], ctx.field().one())];
    for sym in &word.letters {
        let expansion: Vec<(Word, Scalar)> = match sym {
            GeneratorSymbol::DividedPower { root: (i, j), k } => {
                if *i == *j || !(1..=ctx.n).contains(i) || !(1..=ctx.n).contains(j) || *k >= ctx.q {
                    return Err(bad(sym.to_string()));
                }
                vec![(vec![Letter::Root { i: *i, j: *j, k: *k }], ctx.field().one())]
            }
            GeneratorSymbol::BinomialH { axis, a } => {
                if !(1..=ctx.n).contains(axis) || *a >= ctx.q {
                    return Err(bad(sym.to_string()));
                }
                vec![(vec![Letter::Tor { axis: *axis, a: *a }], ctx.field().one())]
            }
            GeneratorSymbol::BinomialLinearForm { coeffs, c, j } => {
                if coeffs.len() != ctx.n || *j >= ctx.q {
                    return Err(bad(sym.to_string()));
                }
                let mut eng = Engine { ctx, linear_forms: HashMap::new() };
                eng.linear_form(coeffs.clone(), *c, *j)?
            }
        };
        let mut next = Vec::with_capacity(words.len() * expansion.len());
        for (w, c) in &words {
            for (e, s) in &expansion {
                let mut nw = w.clone();
                nw.extend(e.iter().copied());
                next.push((nw, c * s));
            }
        }
        words = next;
    }
    Ok(words)
}

/// Straightens `word` into PBW normal form.
pub fn pbw_rewrite(word: &GeneratorWord, ctx: &RewriteContext) -> Result<NormalFormElement> {
    pbw_rewrite_with_stats(word, ctx, STEP_CAP).map(|(nf, _)| nf)
}

/// As [`pbw_rewrite`], with an explicit step cap and run statistics.
pub fn pbw_rewrite_with_stats(word: &GeneratorWord, ctx: &RewriteContext, cap: usize) -> Result<(NormalFormElement, RewriteStats)> {
    let mut engine = Engine { ctx, linear_forms: HashMap::new() };
    // Terms are processed in decreasing measure; since a step only produces
    // strictly smaller terms, a popped word never reappears and like terms
    // are fully combined before they are expanded.
    let mut pending: BTreeMap<(Measure, Word), Scalar> = BTreeMap::new();
    let mut done: BTreeMap<PBWMonomial, Scalar> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(Measure, Word), Scalar>, key: (Measure, Word), c: Scalar| {
        let slot = pending.entry(key).or_insert_with(|| ctx.field().zero());
        *slot += &c;
    };
    for (w, c) in letters_of(word, ctx)? {
        let m = engine.measure(&w);
        push(&mut pending, (m, w), c);
    }
    let mut stats = RewriteStats { steps: 0, measure_checked: true };
    while let Some(((measure, w), c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let Some(idx) = engine.violation(&w) else {
            let slot = done.entry(PBWMonomial::from_normal_word(ctx, &w)).or_insert_with(|| ctx.field().zero());
            *slot += &c;
            continue;
        };
        stats.steps += 1;
        if stats.steps > cap {
            return Err(Error::StepCapExceeded { cap, word: word.to_string() });
        }
        let (width, replacement) = engine.step(&w, idx)?;
        for (mid, s) in replacement {
            let mut nw: Word = w[..idx].to_vec();
            nw.extend(mid);
            nw.extend_from_slice(&w[idx + width..]);
            let nm = engine.measure(&nw);
            if nm >= measure {
                return Err(Error::MeasureViolation(format!("{measure:?} -> {nm:?} rewriting {}", word)));
            }
            push(&mut pending, (nm, nw), &c * &s);
        }
    }
    done.retain(|_, v| !v.is_zero());
    Ok((NormalFormElement { terms: done }, stats))
}

/// Compares the matrix images of `word` and `nf` on `module`.
pub fn certify_rewrite(word: &GeneratorWord, nf: &NormalFormElement, ctx: &RewriteContext, module: &TensorModule) -> Result<bool> {
    if module.field() != ctx.field() || module.n() != ctx.n {
        return Err(Error::ContextMismatch("module does not match the rewrite context".into()));
    }
    Ok(word.matrix(module)? == nf.matrix(ctx, module)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::RSParams;

    fn ctx(n: usize, p: u64, m: u32) -> RewriteContext {
        RewriteContext::new(n, p, m).unwrap()
    }

    fn module(c: &RewriteContext, d: i64) -> TensorModule {
        TensorModule::polynomial(c.n(), d, c.field()).unwrap()
    }

    #[test]
    fn root_order_examples() {
        assert_eq!(root_order(2).unwrap(), (vec![(1, 2)], vec![(2, 1)]));
        let (pos, neg) = root_order(3).unwrap();
        assert_eq!(pos, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(neg, vec![(2, 1), (3, 2), (3, 1)]);
        assert!(root_order(1).is_err());
    }

    #[test]
    fn ordered_word_is_fixed() {
        let c = ctx(2, 2, 2);
        let w = GeneratorWord::parse("x(1,2) x(2,1)").unwrap();
        let nf = pbw_rewrite(&w, &c).unwrap();
        assert_eq!(nf.terms.len(), 1);
        assert_eq!(nf.render(&c), "x(1,2)^(1)*x(2,1)^(1)");
    }

    #[test]
    fn opposite_roots() {
        let c = ctx(2, 2, 2);
        let w = GeneratorWord::parse("x(2,1)*x(1,2)").unwrap();
        let nf = pbw_rewrite(&w, &c).unwrap();
        assert_eq!(nf.render(&c), "binom(H2, 1) + binom(H1, 1) + x(1,2)^(1)*x(2,1)^(1)");
        for d in [2, 3] {
            assert!(certify_rewrite(&w, &nf, &c, &module(&c, d)).unwrap());
        }
    }

    #[test]
    fn torus_past_positive_root() {
        let c = ctx(2, 2, 2);
        let w = GeneratorWord::parse("binom(H1,1) x(1,2)").unwrap();
        let nf = pbw_rewrite(&w, &c).unwrap();
        // binom(H1,1) x = x (binom(H1,1) + 1)
        assert_eq!(nf.render(&c), "x(1,2)^(1) + x(1,2)^(1)*binom(H1, 1)");
        for d in [2, 3] {
            assert!(certify_rewrite(&w, &nf, &c, &module(&c, d)).unwrap());
        }
    }

    #[test]
    fn identity_and_parse_errors() {
        let c = ctx(2, 3, 1);
        let w = GeneratorWord::parse("").unwrap();
        let nf = pbw_rewrite(&w, &c).unwrap();
        assert_eq!(nf.render(&c), "1");
        assert!(certify_rewrite(&w, &nf, &c, &module(&c, 2)).unwrap());
        assert!(GeneratorWord::parse("y(1,2)").is_err());
        assert!(pbw_rewrite(&GeneratorWord::parse("x(1,2)^(3)").unwrap(), &c).is_err());
        assert!(pbw_rewrite(&GeneratorWord::parse("x(1,1)").unwrap(), &c).is_err());
    }

    #[test]
    fn merge_vanishes_past_q() {
        let c = ctx(2, 2, 1);
        let w = GeneratorWord::parse("x(1,2) x(1,2)").unwrap();
        assert!(pbw_rewrite(&w, &c).unwrap().is_zero());
        let c = ctx(2, 3, 1);
        let nf = pbw_rewrite(&w, &c).unwrap();
        assert_eq!(nf.render(&c), "2*x(1,2)^(2)");
    }

    #[test]
    fn step_cap_is_explicit() {
        let c = ctx(3, 3, 1);
        let w = GeneratorWord::parse("x(3,1)^(2) x(1,3)^(2) x(2,1)^(2) x(1,2)^(2)").unwrap();
        assert!(matches!(pbw_rewrite_with_stats(&w, &c, 2), Err(Error::StepCapExceeded { cap: 2, .. })));
        let (nf, stats) = pbw_rewrite_with_stats(&w, &c, STEP_CAP).unwrap();
        assert!(stats.measure_checked && stats.steps > 2);
        assert!(certify_rewrite(&w, &nf, &c, &module(&c, 2)).unwrap());
    }

    #[test]
    fn mixed_module_certifies() {
        let c = ctx(2, 3, 1);
        let m = TensorModule::new(RSParams::new(2, 1, 1).unwrap(), c.field()).unwrap();
        let w = GeneratorWord::parse("x(2,1)^(2) binom(H2,2) x(1,2)^(2) binom(H1,1)").unwrap();
        let nf = pbw_rewrite(&w, &c).unwrap();
        assert!(certify_rewrite(&w, &nf, &c, &m).unwrap());
    }

    #[test]
    fn monomial_words_are_fixed() {
        let c = ctx(3, 2, 2);
        let mono = PBWMonomial { positive: vec![1, 0, 3], torus: TorusMonomial(vec![2, 0, 1]), negative: vec![0, 2, 1] };
        let nf = pbw_rewrite(&mono.to_word(&c), &c).unwrap();
        assert_eq!(nf.terms.len(), 1);
        assert!(nf.terms[&mono].is_one());
    }
}
