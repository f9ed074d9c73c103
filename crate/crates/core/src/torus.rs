//! Commutative torus algebras realized on finite integer grids.
//!
//! In characteristic `p` the algebra `Dist(T_m)` has the monomial basis
//! `∏ binom(H_i, b_i)` with `0 <= b_i < q = p^m`; evaluating at the points of
//! any box `[o, o+q)^n` identifies it with the algebra of all functions on
//! that box. In characteristic zero the quotient by `∏_{k=-r}^{s}(H_i+k)` is
//! identified with functions on `[-s, r]^n`. Ideals generated by functions
//! are then described by their common zero sets, and quotient dimensions are
//! point counts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binom, binom_mod_p_i64, Field, Prime, Scalar};
use crate::error::{Error, Result};
use crate::weights::{proper_subsets, RSParams, Weight};

const GRID_GUARD: u128 = 10_000_000;

/// The ambient algebra: number of variables, field, Frobenius level and grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAlgebraContext {
    n: usize,
    field: Field,
    m: u32,
    grid_lo: i64,
    side: u64,
}

impl TorusAlgebraContext {
    /// `Dist(T_m)` over `F_p` on the grid `[0, q)^n`.
    pub fn char_p(n: usize, p: Prime, m: u32) -> Result<Arc<Self>> {
        Self::char_p_shifted(n, p, m, 0)
    }

    /// `Dist(T_m)` over `F_p` on the grid `[offset, offset + q)^n`.
    pub fn char_p_shifted(n: usize, p: Prime, m: u32, offset: i64) -> Result<Arc<Self>> {
        if m == 0 {
            return Err(Error::InvalidParams("Frobenius level m must be >= 1".into()));
        }
        let q = p.pow(m)?;
        Self::build(n, Field::Prime(p), m, offset, q)
    }

    /// `K[H_1..H_n]/I_1` over the rationals on the grid `[-s, r]^n`.
    pub fn char_zero(n: usize, r: i64, s: i64) -> Result<Arc<Self>> {
        if r < 0 || s < 0 {
            return Err(Error::InvalidParams(format!("r, s must be >= 0, got {r}, {s}")));
        }
        Self::build(n, Field::Rational, 0, -s, (r + s + 1) as u64)
    }

    fn build(n: usize, field: Field, m: u32, grid_lo: i64, side: u64) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        let points = (side as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if points > GRID_GUARD {
            return Err(Error::GridTooLarge(points));
        }
        Ok(Arc::new(TorusAlgebraContext { n, field, m, grid_lo, side }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `q = p^m` in characteristic `p`.
    pub fn q(&self) -> Option<u64> {
        match self.field {
            Field::Prime(_) => Some(self.side),
            Field::Rational => None,
        }
    }

    pub fn grid_lo(&self) -> i64 {
        self.grid_lo
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn grid_len(&self) -> usize {
        (self.side as usize).pow(self.n as u32)
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let side = self.side as usize;
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = self.grid_lo + (index % side) as i64;
            index /= side;
        }
        out
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if point.len() != self.n {
            return None;
        }
        let mut idx = 0usize;
        for v in point {
            let off = v - self.grid_lo;
            if off < 0 || off as u64 >= self.side {
                return None;
            }
            idx = idx * self.side as usize + off as usize;
        }
        Some(idx)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.grid_len()).map(|i| self.point(i))
    }

    fn scalar(&self, v: &BigInt) -> Scalar {
        self.field.from_bigint(v)
    }
}

/// Exponent vector of a monomial `∏ binom(H_i, b_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TorusMonomial(pub Vec<u32>);

impl TorusMonomial {
    pub fn unit(n: usize) -> Self {
        TorusMonomial(vec![0; n])
    }

    pub fn single(n: usize, axis: usize, b: u32) -> Self {
        let mut v = vec![0; n];
        v[axis] = b;
        TorusMonomial(v)
    }
}

/// A sparse combination of torus monomials; no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    ctx: Arc<TorusAlgebraContext>,
    terms: BTreeMap<TorusMonomial, Scalar>,
}

impl TorusElement {
    pub fn zero(ctx: &Arc<TorusAlgebraContext>) -> Self {
        TorusElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<TorusAlgebraContext>) -> Self {
        Self::monomial(ctx, TorusMonomial::unit(ctx.n), ctx.field.one())
    }

    /// `coeff · ∏ binom(H_i, b_i)`, reduced into the basis in characteristic `p`.
    pub fn monomial(ctx: &Arc<TorusAlgebraContext>, b: TorusMonomial, coeff: Scalar) -> Self {
        let mut out = Self::zero(ctx);
        out.add_term(b, coeff);
        out.reduce()
    }

    pub fn context(&self) -> &Arc<TorusAlgebraContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<TorusMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, b: TorusMonomial, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_ctx(&self, other: &TorusElement) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch("torus elements live in different algebras".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TorusElement {
        let mut out = Self::zero(&self.ctx);
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &TorusElement) -> Result<TorusElement> {
        self.add(&other.scale(&-self.ctx.field.one()))
    }

    /// Product in the monomial basis, axis by axis via
    /// `binom(H,b)binom(H,a) = Σ_j binom(a+b-j, a-j) binom(b, j) binom(H, a+b-j)`.
    pub fn multiply(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ctx(other)?;
        let mut out = Self::zero(&self.ctx);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let coeff = cx * cy;
                let per_axis: Vec<Vec<(u32, BigInt)>> =
                    x.0.iter().zip(&y.0).map(|(a, b)| binomial_product(*a, *b)).collect();
                expand_axes(&per_axis, &mut |exps, c| {
                    out.add_term(TorusMonomial(exps.to_vec()), &coeff * &self.ctx.scalar(c));
                });
            }
        }
        Ok(out.reduce())
    }

    /// In characteristic `p`, rewrites monomials with an exponent `>= q` into
    /// the basis by evaluating on `[0, q)` and interpolating.
    fn reduce(self) -> TorusElement {
        let Some(q) = self.ctx.q() else { return self };
        if self.terms.keys().all(|b| b.0.iter().all(|e| u64::from(*e) < q)) {
            return self;
        }
        let mut out = Self::zero(&self.ctx);
        for (b, c) in self.terms {
            let per_axis: Vec<Vec<(u32, BigInt)>> = b
                .0
                .iter()
                .map(|e| {
                    if u64::from(*e) < q {
                        vec![(*e, BigInt::from(1))]
                    } else {
                        reduce_univariate(u64::from(*e), q)
                    }
                })
                .collect();
            expand_axes(&per_axis, &mut |exps, v| {
                out.add_term(TorusMonomial(exps.to_vec()), &c * &self.ctx.scalar(v));
            });
        }
        out
    }

    /// Substitutes integers for the `H_i`.
    pub fn evaluate(&self, point: &[i64]) -> Result<Scalar> {
        if point.len() != self.ctx.n {
            return Err(Error::InvalidParams(format!("point of length {} in {} variables", point.len(), self.ctx.n)));
        }
        let field = self.ctx.field;
        let mut acc = field.zero();
        for (b, c) in &self.terms {
            let mut term = c.clone();
            for (x, e) in point.iter().zip(&b.0) {
                term = &term * &eval_binom(field, *x, u64::from(*e));
                if term.is_zero() {
                    break;
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    pub fn to_grid(&self) -> GridFunction {
        let values = (0..self.ctx.grid_len())
            .into_par_iter()
            .map(|i| self.evaluate(&self.ctx.point(i)).expect("grid points have length n"))
            .collect();
        GridFunction { ctx: self.ctx.clone(), values }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = b
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| format!("binom(H{},{})", i + 1, e))
                .collect();
            match (factors.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

fn eval_binom(field: Field, x: i64, e: u64) -> Scalar {
    match field {
        Field::Prime(p) => Scalar::Mod { value: binom_mod_p_i64(x, e, p.get()), modulus: p },
        Field::Rational => field.from_bigint(&binom(x, e)),
    }
}

/// Integer structure constants of `binom(H,a)·binom(H,b)`.
pub fn binomial_product(a: u32, b: u32) -> Vec<(u32, BigInt)> {
    let (a64, b64) = (u64::from(a), u64::from(b));
    (0..=a.min(b))
        .map(|j| {
            let j64 = u64::from(j);
            let c = binom((a64 + b64 - j64) as i64, a64 - j64) * binom(b64 as i64, j64);
            (a + b - j, c)
        })
        .collect()
}

/// `binom(H, e)` for `e >= q` expressed in `binom(H, b)`, `b < q`, through
/// its values on `[0, q)`.
fn reduce_univariate(e: u64, q: u64) -> Vec<(u32, BigInt)> {
    let values: Vec<BigInt> = (0..q as i64).map(|x| binom(x, e)).collect();
    newton_coefficients(&values)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| c != &BigInt::from(0))
        .map(|(b, c)| (b as u32, c))
        .collect()
}

/// Forward differences at the left endpoint: `f(lo + x) = Σ_b c_b binom(x, b)`.
fn newton_coefficients<T>(values: &[T]) -> Vec<T>
where
    T: Clone,
    for<'a> &'a T: std::ops::Sub<&'a T, Output = T>,
{
    let mut work = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    for _ in 0..values.len() {
        out.push(work[0].clone());
        work = work.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

fn expand_axes(per_axis: &[Vec<(u32, BigInt)>], sink: &mut dyn FnMut(&[u32], &BigInt)) {
    fn go(
        per_axis: &[Vec<(u32, BigInt)>],
        exps: &mut Vec<u32>,
        acc: BigInt,
        sink: &mut dyn FnMut(&[u32], &BigInt),
    ) {
        let Some(axis) = per_axis.get(exps.len()) else {
            sink(exps, &acc);
            return;
        };
        for (e, c) in axis {
            exps.push(*e);
            go(per_axis, exps, &acc * c, sink);
            exps.pop();
        }
    }
    go(per_axis, &mut Vec::with_capacity(per_axis.len()), BigInt::from(1), sink);
}

/// Exact values on every grid point, indexed like [`TorusAlgebraContext::point`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    ctx: Arc<TorusAlgebraContext>,
    values: Vec<Scalar>,
}

impl GridFunction {
    pub fn from_fn(ctx: &Arc<TorusAlgebraContext>, f: impl Fn(&[i64]) -> Scalar + Sync) -> Self {
        let values = (0..ctx.grid_len()).into_par_iter().map(|i| f(&ctx.point(i))).collect();
        GridFunction { ctx: ctx.clone(), values }
    }

    pub fn constant(ctx: &Arc<TorusAlgebraContext>, c: Scalar) -> Self {
        GridFunction { ctx: ctx.clone(), values: vec![c; ctx.grid_len()] }
    }

    pub fn indicator(ctx: &Arc<TorusAlgebraContext>, point: &[i64]) -> Result<Self> {
        let idx = ctx
            .index_of(point)
            .ok_or_else(|| Error::InvalidParams(format!("{point:?} is not a grid point")))?;
        let mut values = vec![ctx.field.zero(); ctx.grid_len()];
        values[idx] = ctx.field.one();
        Ok(GridFunction { ctx: ctx.clone(), values })
    }

    pub fn from_values(ctx: &Arc<TorusAlgebraContext>, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != ctx.grid_len() || values.iter().any(|v| v.field() != ctx.field) {
            return Err(Error::ContextMismatch("grid values do not match the context".into()));
        }
        Ok(GridFunction { ctx: ctx.clone(), values })
    }

    pub fn context(&self) -> &Arc<TorusAlgebraContext> {
        &self.ctx
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value_at(&self, point: &[i64]) -> Option<&Scalar> {
        self.ctx.index_of(point).map(|i| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn pointwise_mul(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch("grid functions on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(GridFunction { ctx: self.ctx.clone(), values })
    }

    /// Common zeros of this function, sorted descending.
    pub fn zero_set(&self) -> Vec<Weight> {
        let mut pts: Vec<Weight> = (0..self.values.len())
            .filter(|i| self.values[*i].is_zero())
            .map(|i| Weight(self.ctx.point(i)))
            .collect();
        pts.sort_by(|a, b| b.cmp(a));
        pts
    }
}

/// The unique element of the context's canonical span whose grid values are
/// `f`: Newton forward differences along each axis, then the change of basis
/// `binom(H - lo, b) = Σ_t binom(H, t) binom(-lo, b - t)`.
pub fn interpolate(f: &GridFunction) -> TorusElement {
    let ctx = &f.ctx;
    let side = ctx.side as usize;
    let field = ctx.field;
    let shift_matrix: Vec<Vec<Scalar>> = (0..side)
        .map(|t| {
            (0..side)
                .map(|b| if b >= t { field.from_bigint(&binom(-ctx.grid_lo, (b - t) as u64)) } else { field.zero() })
                .collect()
        })
        .collect();
    let mut data = f.values.clone();
    let stride_of = |axis: usize| side.pow((ctx.n - 1 - axis) as u32);
    for axis in 0..ctx.n {
        let stride = stride_of(axis);
        let lines: Vec<usize> = (0..data.len()).filter(|i| (i / stride) % side == 0).collect();
        for start in lines {
            let line: Vec<Scalar> = (0..side).map(|k| data[start + k * stride].clone()).collect();
            let diffs = newton_coefficients(&line);
            for (t, row) in shift_matrix.iter().enumerate() {
                let mut acc = field.zero();
                for (b, d) in diffs.iter().enumerate() {
                    if !row[b].is_zero() && !d.is_zero() {
                        acc += &(&row[b] * d);
                    }
                }
                data[start + t * stride] = acc;
            }
        }
    }
    let mut out = TorusElement::zero(ctx);
    for (i, c) in data.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let exps = ctx.point(i).iter().map(|v| (v - ctx.grid_lo) as u32).collect();
        out.add_term(TorusMonomial(exps), c);
    }
    out
}

pub fn to_grid(x: &TorusElement) -> GridFunction {
    x.to_grid()
}

/// `h_b = ∏_i Σ_{k=b_i}^{q-1} (-1)^{k-b_i} binom(k, b_i) binom(H_i, k)`.
pub fn idempotent_h(ctx: &Arc<TorusAlgebraContext>, b: &TorusMonomial) -> Result<TorusElement> {
    let q = ctx.q().ok_or_else(|| Error::InvalidParams("idempotents h_b need characteristic p".into()))?;
    if b.0.len() != ctx.n || b.0.iter().any(|e| u64::from(*e) >= q) {
        return Err(Error::InvalidParams(format!("exponents {:?} outside [0,{q})^{}", b.0, ctx.n)));
    }
    let mut out = TorusElement::one(ctx);
    for (axis, bi) in b.0.iter().enumerate() {
        let mut factor = TorusElement::zero(ctx);
        for k in u64::from(*bi)..q {
            let sign = if (k - u64::from(*bi)) % 2 == 0 { 1 } else { -1 };
            let c = binom(k as i64, u64::from(*bi)) * sign;
            factor.add_term(TorusMonomial::single(ctx.n, axis, k as u32), ctx.scalar(&c));
        }
        out = out.multiply(&factor)?;
    }
    Ok(out)
}

/// `binom(H_i + c, j) = Σ_t binom(H_i, t) binom(c, j - t)`; negative `c` goes
/// through the reflection rule inside [`binom`].
pub fn shifted_binomial(ctx: &Arc<TorusAlgebraContext>, axis: usize, c: i64, j: u64) -> Result<TorusElement> {
    if axis >= ctx.n {
        return Err(Error::InvalidParams(format!("axis {axis} out of range")));
    }
    let mut out = TorusElement::zero(ctx);
    for t in 0..=j {
        out.add_term(TorusMonomial::single(ctx.n, axis, t as u32), ctx.scalar(&binom(c, j - t)));
    }
    Ok(out.reduce())
}

/// The grid function `λ ↦ binom(⟨coeffs, λ⟩ + c, j)`.
pub fn linear_form_binomial(ctx: &Arc<TorusAlgebraContext>, coeffs: &[i64], c: i64, j: u64) -> Result<GridFunction> {
    let g = TorusGenerator::Binomial { coefficients: coeffs.to_vec(), c, j };
    g.check_len(ctx.n)?;
    Ok(g.grid(ctx))
}

/// The element `binom(⟨coeffs, H⟩ + c, j)` expanded symbolically by repeated
/// Vandermonde convolution, with `binom(-H, t) = (-1)^t Σ_v binom(t-1, t-v) binom(H, v)`.
pub fn linear_form_binomial_element(
    ctx: &Arc<TorusAlgebraContext>,
    coeffs: &[i64],
    c: i64,
    j: u64,
) -> Result<TorusElement> {
    if coeffs.len() != ctx.n {
        return Err(Error::InvalidParams(format!("{} coefficients for {} variables", coeffs.len(), ctx.n)));
    }
    let j = j as usize;
    let mut acc: Vec<TorusElement> = (0..=j)
        .map(|u| TorusElement::monomial(ctx, TorusMonomial::unit(ctx.n), ctx.scalar(&binom(c, u as u64))))
        .collect();
    for (axis, &e) in coeffs.iter().enumerate() {
        let parts: Vec<TorusElement> = (0..=j).map(|t| signed_variable_binomial(ctx, axis, e.signum(), t)).collect();
        for _ in 0..e.unsigned_abs() {
            let mut next = vec![TorusElement::zero(ctx); j + 1];
            for u in 0..=j {
                for t in 0..=u {
                    let prod = acc[u - t].multiply(&parts[t])?;
                    next[u] = next[u].add(&prod)?;
                }
            }
            acc = next;
        }
    }
    Ok(acc.swap_remove(j))
}

fn signed_variable_binomial(ctx: &Arc<TorusAlgebraContext>, axis: usize, sign: i64, t: usize) -> TorusElement {
    if t == 0 {
        return TorusElement::one(ctx);
    }
    if sign > 0 {
        return TorusElement::monomial(ctx, TorusMonomial::single(ctx.n, axis, t as u32), ctx.field.one());
    }
    let mut out = TorusElement::zero(ctx);
    let parity = if t % 2 == 0 { 1 } else { -1 };
    for v in 1..=t {
        let c = binom(t as i64 - 1, (t - v) as u64) * parity;
        out.add_term(TorusMonomial::single(ctx.n, axis, v as u32), ctx.scalar(&c));
    }
    out.reduce()
}

/// The automorphism `binom(H_i, b) ↦ binom(H_i + s, b)`.
pub fn sigma_shift(x: &TorusElement, s: i64) -> Result<TorusElement> {
    let ctx = x.context();
    let mut out = TorusElement::zero(ctx);
    for (b, c) in x.terms() {
        let mut term = TorusElement::monomial(ctx, TorusMonomial::unit(ctx.n), c.clone());
        for (axis, e) in b.0.iter().enumerate() {
            if *e > 0 {
                term = term.multiply(&shifted_binomial(ctx, axis, s, u64::from(*e))?)?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// A generator of a torus ideal, as a function of the weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TorusGenerator {
    /// `binom(⟨coefficients, H⟩ + c, j)`
    Binomial { coefficients: Vec<i64>, c: i64, j: u64 },
    /// `∏_{k=from}^{to} (⟨coefficients, H⟩ + k)`
    ShiftedProduct { coefficients: Vec<i64>, from: i64, to: i64 },
}

impl TorusGenerator {
    pub fn coefficients(&self) -> &[i64] {
        match self {
            TorusGenerator::Binomial { coefficients, .. } | TorusGenerator::ShiftedProduct { coefficients, .. } => {
                coefficients
            }
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.coefficients().len() != n {
            return Err(Error::InvalidParams(format!(
                "generator has {} coefficients, context has {n} variables",
                self.coefficients().len()
            )));
        }
        Ok(())
    }

    fn form(&self, point: &[i64]) -> i64 {
        self.coefficients().iter().zip(point).map(|(a, b)| a * b).sum()
    }

    /// Exact value at an integral weight.
    pub fn value_at(&self, point: &[i64], field: Field) -> Scalar {
        let x = self.form(point);
        match self {
            TorusGenerator::Binomial { c, j, .. } => eval_binom(field, x + c, *j),
            TorusGenerator::ShiftedProduct { from, to, .. } => {
                let mut acc = BigInt::from(1);
                for k in *from..=*to {
                    acc *= BigInt::from(x + k);
                }
                field.from_bigint(&acc)
            }
        }
    }

    /// Zero test without building the scalar.
    pub fn vanishes_at(&self, point: &[i64], field: Field) -> bool {
        let x = self.form(point);
        match (self, field) {
            (TorusGenerator::Binomial { c, j, .. }, Field::Prime(p)) => binom_mod_p_i64(x + c, *j, p.get()) == 0,
            (TorusGenerator::Binomial { c, j, .. }, Field::Rational) => *j > 0 && (0..*j as i64).contains(&(x + c)),
            (TorusGenerator::ShiftedProduct { from, to, .. }, Field::Rational) => (-to..=-from).contains(&x),
            (TorusGenerator::ShiftedProduct { .. }, Field::Prime(_)) => self.value_at(point, field).is_zero(),
        }
    }

    pub fn grid(&self, ctx: &Arc<TorusAlgebraContext>) -> GridFunction {
        GridFunction::from_fn(ctx, |pt| self.value_at(pt, ctx.field))
    }
}

impl fmt::Display for TorusGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusGenerator::Binomial { coefficients, c, j } => {
                write!(f, "binom({}, {j})", render_linear_form(coefficients, "H", *c))
            }
            TorusGenerator::ShiftedProduct { coefficients, from, to } => {
                let x = render_linear_form(coefficients, "H", 0);
                if from == to {
                    write!(f, "{}", render_linear_form(coefficients, "H", *from))
                } else {
                    write!(f, "prod_{{k={from}}}^{{{to}}} ({x}+k)")
                }
            }
        }
    }
}

/// `H1+H2-3` style rendering of `⟨coeffs, H⟩ + c`.
pub fn render_linear_form(coeffs: &[i64], var: &str, c: i64) -> String {
    let mut out = String::new();
    for (i, a) in coeffs.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        let sign = if *a < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let mag = if a.abs() == 1 { String::new() } else { format!("{}", a.abs()) };
        out.push_str(&format!("{sign}{mag}{var}{}", i + 1));
    }
    if c != 0 || out.is_empty() {
        if c >= 0 && !out.is_empty() {
            out.push('+');
        }
        out.push_str(&c.to_string());
    }
    out
}

/// Which part of the ideal a generator belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum GeneratorRole {
    /// The degree condition on `H_1 + … + H_n`.
    Degree,
    /// The Frobenius truncation `J_m` (or its σ-shift) on one axis.
    Frobenius { axis: usize },
    /// A proper subset sum `H_S`, given as a 1-based index list.
    Subset { subset: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRecord {
    #[serde(flatten)]
    pub role: GeneratorRole,
    #[serde(flatten)]
    pub generator: TorusGenerator,
}

/// Which ideal to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealKind {
    /// `I₀(n,r,s)` in characteristic zero; `max_subset` keeps only subsets of
    /// at most that many elements.
    Char0Rs { params: RSParams, max_subset: Option<usize> },
    /// `I₀(n,d)` in characteristic `p`.
    CharpD { n: usize, d: i64, p: u64, m: u32 },
    /// `I₀(n,r,s)` in characteristic `p`, on the σ-shifted grid `[-s, q-s)^n`.
    CharpRs { params: RSParams, p: u64, m: u32 },
}

/// Generators of a torus ideal together with their exact common zero set.
#[derive(Clone, Debug, Serialize)]
pub struct IdealDescriptor {
    pub kind: IdealKind,
    #[serde(skip)]
    context: Arc<TorusAlgebraContext>,
    pub generators: Vec<GeneratorRecord>,
    pub vanishing_locus: Vec<Weight>,
    /// Whether adding the next power `p^{m+t+1}` to every truncated family
    /// leaves the locus unchanged (characteristic `p` only).
    pub truncation_verified: Option<bool>,
}

impl IdealDescriptor {
    pub fn context(&self) -> &Arc<TorusAlgebraContext> {
        &self.context
    }

    pub fn generator_grid(&self, index: usize) -> Option<GridFunction> {
        self.generators.get(index).map(|g| g.generator.grid(&self.context))
    }

    pub fn quotient_dimension(&self) -> usize {
        self.vanishing_locus.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ideal descriptors always serialize")
    }
}

pub fn quotient_dimension(ideal: &IdealDescriptor) -> usize {
    ideal.quotient_dimension()
}

/// Exact common zero set of `generators` on the context grid, descending.
pub fn vanishing_locus(ctx: &Arc<TorusAlgebraContext>, generators: &[TorusGenerator]) -> Vec<Weight> {
    const CHUNK: usize = 4096;
    let field = ctx.field;
    let len = ctx.grid_len();
    let hi = ctx.grid_lo + ctx.side as i64 - 1;
    let mut pts: Vec<Weight> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let start = chunk * CHUNK;
            let mut pt = ctx.point(start);
            let mut found = Vec::new();
            for idx in start..(start + CHUNK).min(len) {
                if idx > start {
                    // odometer step, last coordinate fastest
                    for v in pt.iter_mut().rev() {
                        if *v < hi {
                            *v += 1;
                            break;
                        }
                        *v = ctx.grid_lo;
                    }
                }
                if generators.iter().all(|g| g.vanishes_at(&pt, field)) {
                    found.push(Weight(pt.clone()));
                }
            }
            found
        })
        .collect();
    pts.sort_by(|a, b| b.cmp(a));
    pts
}

fn subset_coeffs(n: usize, mask: u32) -> Vec<i64> {
    (0..n).map(|i| i64::from(mask >> i & 1)).collect()
}

fn subset_members(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn unit(n: usize, axis: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[axis] = 1;
    v
}

/// `t = floor(log_p n)`.
pub fn log_bound(p: Prime, n: usize) -> u32 {
    p.floor_log(n as u64)
}

/// Builds the ideal and computes its vanishing locus. Infinite `j`-families
/// are truncated at `j <= m + t`; the truncation is re-checked with one more
/// power and the outcome stored in `truncation_verified`.
pub fn build_ideal(kind: IdealKind) -> Result<IdealDescriptor> {
    match kind {
        IdealKind::Char0Rs { params, max_subset } => {
            require_rational_n(&params)?;
            let n = params.n;
            let ctx = TorusAlgebraContext::char_zero(n, params.r, params.s)?;
            let mut generators = vec![GeneratorRecord {
                role: GeneratorRole::Degree,
                generator: TorusGenerator::ShiftedProduct {
                    coefficients: vec![1; n],
                    from: params.s - params.r,
                    to: params.s - params.r,
                },
            }];
            for mask in proper_subsets(n) {
                if max_subset.is_some_and(|k| mask.count_ones() as usize > k) {
                    continue;
                }
                generators.push(GeneratorRecord {
                    role: GeneratorRole::Subset { subset: subset_members(n, mask) },
                    generator: TorusGenerator::ShiftedProduct {
                        coefficients: subset_coeffs(n, mask),
                        from: -params.r,
                        to: params.s,
                    },
                });
            }
            let gens: Vec<_> = generators.iter().map(|g| g.generator.clone()).collect();
            let vanishing_locus = vanishing_locus(&ctx, &gens);
            Ok(IdealDescriptor { kind, context: ctx, generators, vanishing_locus, truncation_verified: None })
        }
        IdealKind::CharpD { n, d, p, m } => {
            let p = Prime::new(p)?;
            let q = p.pow(m)?;
            if d < 0 || d as u64 >= q {
                return Err(Error::InvalidParams(format!("need 0 <= d < q, got d={d}, q={q}")));
            }
            let ctx = TorusAlgebraContext::char_p(n, p, m)?;
            let t = log_bound(p, n);
            let build = |top: u32| -> Result<Vec<GeneratorRecord>> {
                let mut gens = Vec::new();
                for j in 0..=top {
                    gens.push(GeneratorRecord {
                        role: GeneratorRole::Degree,
                        generator: TorusGenerator::Binomial { coefficients: vec![1; n], c: -d, j: p.pow(j)? },
                    });
                }
                for axis in 0..n {
                    for j in m..=top {
                        gens.push(GeneratorRecord {
                            role: GeneratorRole::Frobenius { axis: axis + 1 },
                            generator: TorusGenerator::Binomial { coefficients: unit(n, axis), c: 0, j: p.pow(j)? },
                        });
                    }
                }
                Ok(gens)
            };
            finish_truncated(kind, ctx, build(m + t)?, build(m + t + 1)?)
        }
        IdealKind::CharpRs { params, p, m } => {
            require_rational_n(&params)?;
            let p = Prime::new(p)?;
            let q = p.pow(m)?;
            let d = params.shifted_degree();
            if d as u64 >= q {
                return Err(Error::InvalidParams(format!("need d = r+(n-1)s < q, got d={d}, q={q}")));
            }
            let n = params.n;
            let s = params.s;
            let ctx = TorusAlgebraContext::char_p_shifted(n, p, m, -s)?;
            let t = log_bound(p, n);
            let build = |top: u32| -> Result<Vec<GeneratorRecord>> {
                let mut gens = Vec::new();
                for j in 0..=top {
                    gens.push(GeneratorRecord {
                        role: GeneratorRole::Degree,
                        generator: TorusGenerator::Binomial {
                            coefficients: vec![1; n],
                            c: s - params.r,
                            j: p.pow(j)?,
                        },
                    });
                }
                for axis in 0..n {
                    for j in m..=top {
                        gens.push(GeneratorRecord {
                            role: GeneratorRole::Frobenius { axis: axis + 1 },
                            generator: TorusGenerator::Binomial { coefficients: unit(n, axis), c: s, j: p.pow(j)? },
                        });
                    }
                }
                for mask in proper_subsets(n) {
                    for j in m..=top {
                        gens.push(GeneratorRecord {
                            role: GeneratorRole::Subset { subset: subset_members(n, mask) },
                            generator: TorusGenerator::Binomial { coefficients: subset_coeffs(n, mask), c: s, j: p.pow(j)? },
                        });
                    }
                }
                Ok(gens)
            };
            finish_truncated(kind, ctx, build(m + t)?, build(m + t + 1)?)
        }
    }
}

fn require_rational_n(params: &RSParams) -> Result<()> {
    if params.n < 2 {
        return Err(Error::InvalidParams("rational ideals need n >= 2".into()));
    }
    Ok(())
}

fn finish_truncated(
    kind: IdealKind,
    ctx: Arc<TorusAlgebraContext>,
    generators: Vec<GeneratorRecord>,
    extended: Vec<GeneratorRecord>,
) -> Result<IdealDescriptor> {
    let gens: Vec<_> = generators.iter().map(|g| g.generator.clone()).collect();
    let more: Vec<_> = extended.iter().map(|g| g.generator.clone()).collect();
    let locus = vanishing_locus(&ctx, &gens);
    let check = vanishing_locus(&ctx, &more);
    Ok(IdealDescriptor {
        kind,
        context: ctx,
        generators,
        truncation_verified: Some(check == locus),
        vanishing_locus: locus,
    })
}
