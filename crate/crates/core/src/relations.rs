//! Relation instances as small expression trees. The same tree is rendered
//! as text and evaluated as a matrix identity on a tensor module.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{binom, Field, Prime};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::tensor::TensorModule;
use crate::torus::render_linear_form;

/// One factor of a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `x_{ε_i-ε_j}^{(k)}`, 1-based.
    Root { i: usize, j: usize, k: u64 },
    /// `binom(⟨coeffs, H⟩ + c, j)`, or with `primed` the variables are `H'_i = H_i + s`.
    Binom { coeffs: Vec<i64>, c: i64, j: u64, primed: bool },
    /// `⟨coeffs, H⟩ + c`.
    Linear { coeffs: Vec<i64>, c: i64 },
    /// `∏_{k=from}^{to} (⟨coeffs, H⟩ + k)`.
    Product { coeffs: Vec<i64>, from: i64, to: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub factors: Vec<Factor>,
}

/// A sum of terms; the empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn term(coeff: i64, factors: Vec<Factor>) -> Self {
        let mut e = Expr::zero();
        e.push(coeff, factors);
        e
    }

    /// Appends a term; `binom(·, 0)` and `x^{(0)}` factors are dropped since they equal 1.
    pub fn push(&mut self, coeff: i64, mut factors: Vec<Factor>) {
        factors.retain(|f| !matches!(f, Factor::Binom { j: 0, .. } | Factor::Root { k: 0, .. }));
        self.terms.push(Term { coeff, factors });
    }

    /// Drops terms whose integer coefficient vanishes in the field.
    fn reduce(mut self, p: Option<Prime>) -> Self {
        self.terms.retain(|t| match p {
            Some(p) => t.coeff.rem_euclid(p.get() as i64) != 0,
            None => t.coeff != 0,
        });
        self
    }

    pub fn factors(&self) -> impl Iterator<Item = &Factor> {
        self.terms.iter().flat_map(|t| t.factors.iter())
    }
}

/// Matrix evaluation of expressions, with a factor cache.
pub struct Evaluator<'a> {
    module: &'a TensorModule,
    shift: i64,
    cache: HashMap<Factor, SparseMatrix>,
}

impl<'a> Evaluator<'a> {
    /// `shift` is the `s` in `H'_i = H_i + s`.
    pub fn new(module: &'a TensorModule, shift: i64) -> Self {
        Evaluator { module, shift, cache: HashMap::new() }
    }

    pub fn factor(&mut self, f: &Factor) -> Result<SparseMatrix> {
        if let Some(m) = self.cache.get(f) {
            return Ok(m.clone());
        }
        let m = match f {
            Factor::Root { i, j, k } => self.module.matrix_divided_power(*i, *j, *k)?,
            Factor::Binom { coeffs, c, j, primed } => {
                let extra = if *primed { self.shift * coeffs.iter().sum::<i64>() } else { 0 };
                self.module.matrix_linear_form_binomial(coeffs, c + extra, *j)?
            }
            Factor::Linear { coeffs, c } => self.module.matrix_linear_form_product(coeffs, *c, *c)?,
            Factor::Product { coeffs, from, to } => self.module.matrix_linear_form_product(coeffs, *from, *to)?,
        };
        self.cache.insert(f.clone(), m.clone());
        Ok(m)
    }

    pub fn expr(&mut self, e: &Expr) -> Result<SparseMatrix> {
        let field = self.module.field();
        let mut acc = SparseMatrix::zero(self.module.dim(), field);
        for t in &e.terms {
            let mut prod = SparseMatrix::identity(self.module.dim(), field);
            for f in &t.factors {
                prod = prod.mul(&self.factor(f)?)?;
            }
            acc = acc.add(&prod.scale(&field.from_i64(t.coeff)))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Root { i, j, k } if *k == 1 => write!(f, "x({i},{j})"),
            Factor::Root { i, j, k } => write!(f, "x({i},{j})^({k})"),
            Factor::Binom { coeffs, c, j, primed } => {
                let var = if *primed { "H'" } else { "H" };
                write!(f, "binom({}, {j})", render_linear_form(coeffs, var, *c))
            }
            Factor::Linear { coeffs, c } => {
                let body = render_linear_form(coeffs, "H", *c);
                if coeffs.iter().filter(|a| **a != 0).count() > 1 || *c != 0 {
                    write!(f, "({body})")
                } else {
                    write!(f, "{body}")
                }
            }
            Factor::Product { coeffs, from, to } => {
                write!(f, "prod_{{k={from}}}^{{{to}}}({}+k)", render_linear_form(coeffs, "H", 0))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let mag = t.coeff.unsigned_abs();
            match (idx, t.coeff < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let body: Vec<String> = match t.factors.as_slice() {
                [Factor::Linear { coeffs, c }] => vec![render_linear_form(coeffs, "H", *c)],
                fs => fs.iter().map(ToString::to_string).collect(),
            };
            match (body.is_empty(), mag) {
                (true, _) => write!(f, "{mag}")?,
                (false, 1) => write!(f, "{}", body.join("*"))?,
                (false, _) => write!(f, "{mag}*{}", body.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Relation families. Names follow the usual letters; the char-0 ones are
/// those of the `e_i, f_i, H_i` presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RelationFamily {
    #[serde(rename = "a")]
    Char0Commute,
    #[serde(rename = "b")]
    Char0Bracket,
    #[serde(rename = "c_e")]
    Char0WeightE,
    #[serde(rename = "c_f")]
    Char0WeightF,
    #[serde(rename = "d")]
    Char0Degree,
    #[serde(rename = "e")]
    Char0Subset,
    #[serde(rename = "serre_e")]
    SerreE,
    #[serde(rename = "serre_f")]
    SerreF,
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "a'")]
    APrime,
    #[serde(rename = "c'")]
    CPrime,
    #[serde(rename = "e'")]
    EPrime,
    #[serde(rename = "g'")]
    GPrime,
    #[serde(rename = "h'")]
    HPrime,
    #[serde(rename = "i'")]
    IPrime,
    #[serde(rename = "j")]
    J,
}

impl RelationFamily {
    pub fn name(self) -> &'static str {
        use RelationFamily::*;
        match self {
            Char0Commute | A => "a",
            Char0Bracket | B => "b",
            Char0WeightE => "c_e",
            Char0WeightF => "c_f",
            Char0Degree | D => "d",
            Char0Subset | E => "e",
            SerreE => "serre_e",
            SerreF => "serre_f",
            C => "c",
            F => "f",
            G => "g",
            H => "h",
            I => "i",
            APrime => "a'",
            CPrime => "c'",
            EPrime => "e'",
            GPrime => "g'",
            HPrime => "h'",
            IPrime => "i'",
            J => "j",
        }
    }
}

/// A concrete relation: family plus index and exponent data.
///
/// | family | indices | exponents |
/// |---|---|---|
/// | a, a' | `[i]` | `[a, b]` |
/// | b | `[i, j]` (root) | `[k, l]` |
/// | c, c' | `[i, j]` | `[a, b]` |
/// | d, f | `[i, j, k, l]` (roots α, β) | `[k, l]` |
/// | e, e' | `[i, j]` (root α) | `[k, l]` |
/// | g, h, g', h' | `[i, j, axis]` | `[k, a]` |
/// | i, i' | `[]` | `[j]` (power `p^j`) |
/// | j | subset members | `[j]` |
/// | char 0 a, b, c_e, c_f, serre | `[i, j]` | `[]` |
/// | char 0 d | `[]` | `[]` |
/// | char 0 e | subset members | `[]` |
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RelationInstance {
    pub family: RelationFamily,
    pub indices: Vec<usize>,
    pub exponents: Vec<u64>,
}

impl RelationInstance {
    pub fn new(family: RelationFamily, indices: Vec<usize>, exponents: Vec<u64>) -> Self {
        RelationInstance { family, indices, exponents }
    }
}

/// Ambient data a relation needs beyond its own indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationContext {
    pub n: usize,
    pub r: i64,
    pub s: i64,
    /// `None` in characteristic zero.
    pub p: Option<Prime>,
}

impl RelationContext {
    /// `d = r + (n-1)s`.
    pub fn degree(&self) -> i64 {
        self.r + (self.n as i64 - 1) * self.s
    }

    pub fn field(&self) -> Field {
        match self.p {
            Some(p) => Field::Prime(p),
            None => Field::Rational,
        }
    }
}

/// Sign used for the torus shift in the `(g)`/`(h)` families. `Corrected`
/// is the one that holds; `Literal` (`binom(H_i,a) x = x binom(H_i-k,a)`)
/// is kept so its failure can be demonstrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftConvention {
    #[default]
    Corrected,
    Literal,
}

fn unit(n: usize, axis: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[axis - 1] = 1;
    v
}

fn root(i: usize, j: usize, k: u64) -> Factor {
    Factor::Root { i, j, k }
}

fn subset_coeffs(n: usize, members: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n];
    for m in members {
        v[m - 1] = 1;
    }
    v
}

fn bad(inst: &RelationInstance) -> Error {
    Error::Malformed(format!("{inst:?}"))
}

fn i64_of(v: u64) -> i64 {
    v as i64
}

/// Both sides of a relation, with the corrected shift convention.
pub fn relation_sides(inst: &RelationInstance, ctx: &RelationContext) -> Result<(Expr, Expr)> {
    relation_sides_with(inst, ctx, ShiftConvention::Corrected)
}

pub fn relation_sides_with(
    inst: &RelationInstance,
    ctx: &RelationContext,
    convention: ShiftConvention,
) -> Result<(Expr, Expr)> {
    use RelationFamily::*;
    let n = ctx.n;
    let idx = &inst.indices;
    let ex = &inst.exponents;
    let valid_axis = |a: usize| (1..=n).contains(&a);
    let valid_root = |i: usize, j: usize| valid_axis(i) && valid_axis(j) && i != j;
    let need = |ni: usize, ne: usize| -> Result<()> {
        if idx.len() != ni || ex.len() != ne {
            return Err(bad(inst));
        }
        Ok(())
    };
    let primed = matches!(inst.family, APrime | CPrime | EPrime | GPrime | HPrime | IPrime | J);
    let hb = |axis: usize, c: i64, a: u64| Factor::Binom { coeffs: unit(n, axis), c, j: a, primed };

    let (lhs, rhs) = match inst.family {
        Char0Commute => {
            need(2, 0)?;
            if !idx.iter().all(|a| valid_axis(*a)) {
                return Err(bad(inst));
            }
            let h = |a| Factor::Linear { coeffs: unit(n, a), c: 0 };
            (Expr::term(1, vec![h(idx[0]), h(idx[1])]), Expr::term(1, vec![h(idx[1]), h(idx[0])]))
        }
        Char0Bracket => {
            need(2, 0)?;
            let (i, j) = (idx[0], idx[1]);
            if !(1..n).contains(&i) || !(1..n).contains(&j) {
                return Err(bad(inst));
            }
            let mut lhs = Expr::term(1, vec![root(i, i + 1, 1), root(j + 1, j, 1)]);
            lhs.push(-1, vec![root(j + 1, j, 1), root(i, i + 1, 1)]);
            let rhs = if i == j {
                let mut c = unit(n, i);
                c[i] = -1;
                Expr::term(1, vec![Factor::Linear { coeffs: c, c: 0 }])
            } else {
                Expr::zero()
            };
            (lhs, rhs)
        }
        Char0WeightE | Char0WeightF => {
            need(2, 0)?;
            let (i, j) = (idx[0], idx[1]);
            if !valid_axis(i) || !(1..n).contains(&j) {
                return Err(bad(inst));
            }
            let x = if inst.family == Char0WeightE { root(j, j + 1, 1) } else { root(j + 1, j, 1) };
            let h = Factor::Linear { coeffs: unit(n, i), c: 0 };
            let mut lhs = Expr::term(1, vec![h.clone(), x.clone()]);
            lhs.push(-1, vec![x.clone(), h]);
            let pairing = i64::from(i == j) - i64::from(i == j + 1);
            let sign = if inst.family == Char0WeightE { 1 } else { -1 };
            (lhs, Expr::term(sign * pairing, vec![x]).reduce(None))
        }
        Char0Degree => {
            need(0, 0)?;
            (Expr::term(1, vec![Factor::Linear { coeffs: vec![1; n], c: 0 }]), Expr::term(ctx.r - ctx.s, vec![]).reduce(None))
        }
        Char0Subset => {
            if idx.is_empty() || idx.len() >= n || !ex.is_empty() || !idx.iter().all(|a| valid_axis(*a)) {
                return Err(bad(inst));
            }
            let f = Factor::Product { coeffs: subset_coeffs(n, idx), from: -ctx.r, to: ctx.s };
            (Expr::term(1, vec![f]), Expr::zero())
        }
        SerreE | SerreF => {
            need(2, 0)?;
            let (i, j) = (idx[0], idx[1]);
            if !(1..n).contains(&i) || !(1..n).contains(&j) || i == j {
                return Err(bad(inst));
            }
            let g = |a: usize| if inst.family == SerreE { root(a, a + 1, 1) } else { root(a + 1, a, 1) };
            let mut lhs = Expr::zero();
            if i.abs_diff(j) == 1 {
                lhs.push(1, vec![g(i), g(i), g(j)]);
                lhs.push(-2, vec![g(i), g(j), g(i)]);
                lhs.push(1, vec![g(j), g(i), g(i)]);
            } else {
                lhs.push(1, vec![g(i), g(j)]);
                lhs.push(-1, vec![g(j), g(i)]);
            }
            (lhs, Expr::zero())
        }
        A | APrime => {
            need(1, 2)?;
            let (i, a, b) = (idx[0], ex[0], ex[1]);
            if !valid_axis(i) {
                return Err(bad(inst));
            }
            let mut rhs = Expr::zero();
            for j in 0..=a.min(b) {
                let c = binom(i64_of(a + b - j), a - j) * binom(i64_of(b), b - j);
                rhs.push(to_i64(&c, inst)?, vec![hb(i, 0, a + b - j)]);
            }
            (Expr::term(1, vec![hb(i, 0, a), hb(i, 0, b)]), rhs)
        }
        B => {
            need(2, 2)?;
            let (i, j, k, l) = (idx[0], idx[1], ex[0], ex[1]);
            if !valid_root(i, j) {
                return Err(bad(inst));
            }
            let c = to_i64(&binom(i64_of(k + l), k), inst)?;
            (Expr::term(1, vec![root(i, j, k), root(i, j, l)]), Expr::term(c, vec![root(i, j, k + l)]))
        }
        C | CPrime => {
            need(2, 2)?;
            let (i, j, a, b) = (idx[0], idx[1], ex[0], ex[1]);
            if !valid_axis(i) || !valid_axis(j) {
                return Err(bad(inst));
            }
            (Expr::term(1, vec![hb(i, 0, a), hb(j, 0, b)]), Expr::term(1, vec![hb(j, 0, b), hb(i, 0, a)]))
        }
        D => {
            need(4, 2)?;
            let (i, j, k2, l2) = (idx[0], idx[1], idx[2], idx[3]);
            let (k, l) = (ex[0], ex[1]);
            if !valid_root(i, j) || !valid_root(k2, l2) {
                return Err(bad(inst));
            }
            // α = ε_i - ε_j, β = ε_k2 - ε_l2
            let (sum, c) = root_sum((i, j), (k2, l2)).ok_or_else(|| bad(inst))?;
            let mut rhs = Expr::zero();
            for a in 0..=k.min(l) {
                rhs.push(c.pow(a as u32), vec![root(k2, l2, l - a), root(sum.0, sum.1, a), root(i, j, k - a)]);
            }
            (Expr::term(1, vec![root(i, j, k), root(k2, l2, l)]), rhs)
        }
        E | EPrime => {
            need(2, 2)?;
            let (i, j, k, l) = (idx[0], idx[1], ex[0], ex[1]);
            if !valid_root(i, j) {
                return Err(bad(inst));
            }
            let mut h_alpha = vec![0; n];
            h_alpha[i - 1] = 1;
            h_alpha[j - 1] = -1;
            let mut rhs = Expr::zero();
            for a in 0..=k.min(l) {
                let b = Factor::Binom { coeffs: h_alpha.clone(), c: -i64_of(k) - i64_of(l) + 2 * i64_of(a), j: a, primed };
                rhs.push(1, vec![root(j, i, l - a), b, root(i, j, k - a)]);
            }
            (Expr::term(1, vec![root(i, j, k), root(j, i, l)]), rhs)
        }
        F => {
            need(4, 2)?;
            let (i, j, k2, l2) = (idx[0], idx[1], idx[2], idx[3]);
            if !valid_root(i, j) || !valid_root(k2, l2) || (i == l2 && j == k2) || root_sum((i, j), (k2, l2)).is_some() {
                return Err(bad(inst));
            }
            let (k, l) = (ex[0], ex[1]);
            (Expr::term(1, vec![root(i, j, k), root(k2, l2, l)]), Expr::term(1, vec![root(k2, l2, l), root(i, j, k)]))
        }
        G | GPrime | H | HPrime => {
            need(3, 2)?;
            let (i, j, axis, k, a) = (idx[0], idx[1], idx[2], ex[0], ex[1]);
            if !valid_root(i, j) || !valid_axis(axis) {
                return Err(bad(inst));
            }
            // binom(H_i,a) x = x binom(H_i + k, a), binom(H_j,a) x = x binom(H_j - k, a)
            let mut delta = if axis == i {
                i64_of(k)
            } else if axis == j {
                -i64_of(k)
            } else {
                0
            };
            if convention == ShiftConvention::Literal {
                delta = -delta;
            }
            let x = root(i, j, k);
            let shifted = |d: i64| -> Vec<(i64, Factor)> {
                (0..=a)
                    .map(|t| (binom(d, a - t), hb(axis, 0, t)))
                    .map(|(c, f)| (i64::try_from(c).expect("small binomial"), f))
                    .collect()
            };
            if matches!(inst.family, G | GPrime) {
                let mut rhs = Expr::zero();
                for (c, f) in shifted(delta) {
                    rhs.push(c, vec![x.clone(), f]);
                }
                (Expr::term(1, vec![hb(axis, 0, a), x]), rhs)
            } else {
                let mut rhs = Expr::zero();
                for (c, f) in shifted(-delta) {
                    rhs.push(c, vec![f, x.clone()]);
                }
                (Expr::term(1, vec![x.clone(), hb(axis, 0, a)]), rhs)
            }
        }
        I | IPrime => {
            need(0, 1)?;
            let p = ctx.p.ok_or_else(|| bad(inst))?;
            let power = p.pow(ex[0] as u32)?;
            let c = if inst.family == I { -ctx.r } else { -ctx.degree() };
            let f = Factor::Binom { coeffs: vec![1; n], c, j: power, primed };
            (Expr::term(1, vec![f]), Expr::zero())
        }
        J => {
            if idx.is_empty() || idx.len() >= n || ex.len() != 1 || !idx.iter().all(|a| valid_axis(*a)) {
                return Err(bad(inst));
            }
            let p = ctx.p.ok_or_else(|| bad(inst))?;
            let power = p.pow(ex[0] as u32)?;
            let c = ctx.s - idx.len() as i64 * ctx.s;
            let f = Factor::Binom { coeffs: subset_coeffs(n, idx), c, j: power, primed };
            (Expr::term(1, vec![f]), Expr::zero())
        }
    };
    Ok((lhs.reduce(ctx.p), rhs.reduce(ctx.p)))
}

/// For roots `α = ε_i - ε_j`, `β = ε_k - ε_l` with `α + β` a root, that
/// root and the sign `c_{α,β}`.
pub fn root_sum(alpha: (usize, usize), beta: (usize, usize)) -> Option<((usize, usize), i64)> {
    let ((i, j), (k, l)) = (alpha, beta);
    if j == k && i != l {
        Some(((i, l), 1))
    } else if l == i && j != k {
        Some(((k, j), -1))
    } else {
        None
    }
}

fn to_i64(v: &num_bigint::BigInt, inst: &RelationInstance) -> Result<i64> {
    i64::try_from(v).map_err(|_| bad(inst))
}

/// `lhs = rhs` in text form.
pub fn render_relation(inst: &RelationInstance, ctx: &RelationContext) -> Result<String> {
    let (l, r) = relation_sides(inst, ctx)?;
    Ok(format!("{l} = {r}"))
}

/// Whether both sides agree as matrices on `module`.
pub fn verify_relation_instance(inst: &RelationInstance, ctx: &RelationContext, module: &TensorModule) -> Result<bool> {
    let mut ev = Evaluator::new(module, ctx.s);
    verify_with(inst, ctx, &mut ev, ShiftConvention::Corrected)
}

pub fn verify_with(
    inst: &RelationInstance,
    ctx: &RelationContext,
    ev: &mut Evaluator<'_>,
    convention: ShiftConvention,
) -> Result<bool> {
    if ev.module.field() != ctx.field() || ev.module.n() != ctx.n {
        return Err(Error::ContextMismatch("relation context does not match the module".into()));
    }
    let (l, r) = relation_sides_with(inst, ctx, convention)?;
    Ok(ev.expr(&l)? == ev.expr(&r)?)
}
