//! Weight sets of GL(n): the polynomial sets Λ(n,d), the mixed-tensor sets
//! Λ(n,r,s) and their dominant parts, the sets π′ and π″ inside
//! Λ⁺(n, r+(n-1)s), the determinant-shift bijection between π″ and
//! Λ⁺(n,r,s), the complement ν′ and the Weyl dimension bookkeeping.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer weight `(λ_1, …, λ_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(entries: impl Into<Vec<i64>>) -> Self {
        Weight(entries.into())
    }

    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Weakly decreasing entries.
    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Sum of entries indexed by the bitmask `subset`.
    pub fn subset_sum(&self, subset: u32) -> i64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .map(|(_, v)| v)
            .sum()
    }

    /// `self + c·(1, …, 1)`.
    pub fn shifted(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|v| v + c).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<&[i64]> for Weight {
    fn from(v: &[i64]) -> Self {
        Weight(v.to_vec())
    }
}

/// Parameters `(n, r, s)` of the mixed tensor space `E^{⊗r} ⊗ (E*)^{⊗s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RSParams {
    pub n: usize,
    pub r: i64,
    pub s: i64,
}

impl RSParams {
    /// `n >= 1`, `r, s >= 0`; a genuinely mixed space (`s > 0`) needs `n >= 2`.
    pub fn new(n: usize, r: i64, s: i64) -> Result<Self> {
        if n == 0 || r < 0 || s < 0 {
            return Err(Error::InvalidParams(format!("need n >= 1 and r, s >= 0, got ({n},{r},{s})")));
        }
        if s > 0 && n < 2 {
            return Err(Error::InvalidParams(format!("mixed tensor space needs n >= 2, got n={n}")));
        }
        Ok(RSParams { n, r, s })
    }

    /// The polynomial degree `d = r + (n-1)s` of the shifted weights.
    pub fn shifted_degree(&self) -> i64 {
        self.r + (self.n as i64 - 1) * self.s
    }
}

impl fmt::Display for RSParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.r, self.s)
    }
}

/// A deduplicated weight list in descending lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSet {
    members: Vec<Weight>,
}

impl WeightSet {
    pub fn members(&self) -> &[Weight] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.members.binary_search_by(|m| w.cmp(m)).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Weight> {
        self.members.iter()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("weight sets always serialize")
    }
}

impl FromIterator<Weight> for WeightSet {
    fn from_iter<I: IntoIterator<Item = Weight>>(iter: I) -> Self {
        let set: BTreeSet<Weight> = iter.into_iter().collect();
        WeightSet { members: set.into_iter().rev().collect() }
    }
}

impl<'a> IntoIterator for &'a WeightSet {
    type Item = &'a Weight;
    type IntoIter = std::slice::Iter<'a, Weight>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Index sets `P⁺_λ`, `P⁻_λ` and `R⁺_λ` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSupport {
    pub positive_positions: Vec<usize>,
    pub negative_positions: Vec<usize>,
    pub above_s_positions: Vec<usize>,
}

impl SignSupport {
    pub fn of(w: &Weight, s: i64) -> Self {
        let pick = |pred: &dyn Fn(i64) -> bool| {
            w.0.iter().enumerate().filter(|(_, v)| pred(**v)).map(|(i, _)| i).collect()
        };
        SignSupport {
            positive_positions: pick(&|v| v > 0),
            negative_positions: pick(&|v| v < 0),
            above_s_positions: pick(&|v| v > s),
        }
    }
}

/// Nonempty proper subsets of `{0, …, n-1}` as bitmasks, in increasing order.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = u32> {
    let full = (1u32 << n) - 1;
    (1..full).filter(move |_| n >= 2)
}

/// All points of the box `[lo, hi]^n` in ascending lexicographic order.
pub fn box_points(n: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = if lo <= hi { Some(vec![lo; n]) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = cur.as_mut().unwrap();
        let mut i = n;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < hi {
                next[i] += 1;
                for v in next.iter_mut().skip(i + 1) {
                    *v = lo;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Compositions of `d` into `n` nonnegative parts.
fn compositions(n: usize, d: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, d: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in (0..=d).rev() {
            prefix.push(v);
            go(n, d - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Λ(n,d): nonnegative weights of `E^{⊗d}`.
pub fn enumerate_lambda(n: usize, d: i64) -> WeightSet {
    compositions(n, d).into_iter().map(Weight).collect()
}

/// Λ⁺(n,d): partitions of `d` with at most `n` parts, padded with zeros.
pub fn enumerate_dominant(n: usize, d: i64) -> WeightSet {
    enumerate_lambda(n, d).iter().filter(|w| w.is_dominant()).cloned().collect()
}

/// Membership in Λ(n,r,s) straight from the definition: the positive part sums
/// to `r - t` and the negative part to `t - s` for some `0 <= t <= min(r,s)`.
pub fn in_lambda_rs(w: &Weight, p: &RSParams) -> bool {
    if w.len() != p.n {
        return false;
    }
    let pos: i64 = w.0.iter().filter(|v| **v > 0).sum();
    let neg: i64 = w.0.iter().filter(|v| **v < 0).sum();
    let t = p.r - pos;
    (0..=p.r.min(p.s)).contains(&t) && neg == t - p.s
}

/// Λ(n,r,s), built from the t-decomposition: a composition of `r - t`
/// and a composition of `s - t` placed on disjoint positions.
pub fn enumerate_lambda_rs(p: &RSParams) -> WeightSet {
    let mut out = Vec::new();
    for t in 0..=p.r.min(p.s) {
        let negs = compositions(p.n, p.s - t);
        for pos in compositions(p.n, p.r - t) {
            for neg in &negs {
                if pos.iter().zip(neg).all(|(a, b)| *a == 0 || *b == 0) {
                    out.push(Weight(pos.iter().zip(neg).map(|(a, b)| a - b).collect()));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The alternatives to condition (b) characterizing Λ(n,r,s) together with
/// the degree condition; the same tags name the prefix-sum alternatives for
/// dominant weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// two-sided bound
    B,
    /// upper bound only
    B1,
    /// lower bound only
    B2,
    /// positive part bounded by r
    B3,
    /// negative part bounded by -s
    B4,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::B, Variant::B1, Variant::B2, Variant::B3, Variant::B4];
}

fn check_len(w: &Weight, n: usize) -> Result<()> {
    if w.len() != n {
        return Err(Error::InvalidParams(format!("weight {w} has length {}, expected {n}", w.len())));
    }
    Ok(())
}

/// Degree condition `Σλ_i = r - s` together with the chosen subset condition.
pub fn lambda_rs_condition(w: &Weight, p: &RSParams, variant: Variant) -> Result<bool> {
    check_len(w, p.n)?;
    if w.degree() != p.r - p.s {
        return Ok(false);
    }
    let (r, s) = (p.r, p.s);
    let mut subsets = proper_subsets(p.n).map(|sub| w.subset_sum(sub));
    Ok(match variant {
        Variant::B => subsets.all(|v| -s <= v && v <= r),
        Variant::B1 => subsets.all(|v| v <= r),
        Variant::B2 => subsets.all(|v| -s <= v),
        Variant::B3 => w.0.iter().filter(|v| **v > 0).sum::<i64>() <= r,
        Variant::B4 => -s <= w.0.iter().filter(|v| **v < 0).sum::<i64>(),
    })
}

/// Prefix-sum characterization of Λ⁺(n,r,s) for a dominant weight.
pub fn lambda_plus_rs_condition(w: &Weight, p: &RSParams, variant: Variant) -> Result<bool> {
    check_len(w, p.n)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0.clone()));
    }
    if w.degree() != p.r - p.s {
        return Ok(false);
    }
    let (r, s, n) = (p.r, p.s, p.n);
    let prefix: Vec<i64> = w
        .0
        .iter()
        .scan(0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    // prefix[k-1] = μ_1 + … + μ_k
    Ok(match variant {
        Variant::B => prefix.iter().all(|v| -s <= *v && *v <= r),
        Variant::B1 => prefix[..n - 1].iter().all(|v| *v <= r),
        // tail sums μ_k + … + μ_n for k > 1; the prefix reading of this
        // bound admits (1,-1) for (2,0,0)
        Variant::B2 => (1..n).all(|k| -s <= w.0[k..].iter().sum::<i64>()),
        Variant::B3 => w.0.iter().take_while(|v| **v > 0).sum::<i64>() <= r,
        Variant::B4 => -s <= w.0.iter().skip_while(|v| **v >= 0).sum::<i64>(),
    })
}

/// Λ⁺(n,r,s) via the prefix-sum conditions, scanning dominant weights of the
/// box `[-s, r]^n`.
pub fn enumerate_lambda_plus_rs(p: &RSParams) -> WeightSet {
    dominant_in_box(p.n, -p.s, p.r, p.r - p.s)
        .filter(|w| lambda_plus_rs_condition(w, p, Variant::B).unwrap_or(false))
        .collect()
}

/// Dominant weights with entries in `[lo, hi]` and the given degree.
fn dominant_in_box(n: usize, lo: i64, hi: i64, degree: i64) -> impl Iterator<Item = Weight> {
    fn go(n: usize, lo: i64, hi: i64, remaining: i64, prefix: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if prefix.len() == n {
            if remaining == 0 {
                out.push(Weight(prefix.clone()));
            }
            return;
        }
        let cap = prefix.last().copied().unwrap_or(hi).min(hi);
        let slots = (n - prefix.len()) as i64;
        for v in (lo..=cap).rev() {
            // the rest is bounded by v per slot and lo per slot
            let rest = remaining - v;
            if rest > v * (slots - 1) || rest < lo * (slots - 1) {
                continue;
            }
            prefix.push(v);
            go(n, lo, hi, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, lo, hi, degree, &mut Vec::with_capacity(n), &mut out);
    out.into_iter()
}

fn require_dominant_degree(w: &Weight, p: &RSParams) -> Result<()> {
    check_len(w, p.n)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0.clone()));
    }
    let d = p.shifted_degree();
    if w.degree() != d {
        return Err(Error::DegreeMismatch(w.degree(), d));
    }
    Ok(())
}

fn require_polynomial_dominant(w: &Weight, p: &RSParams) -> Result<()> {
    require_dominant_degree(w, p)?;
    if w.0.iter().any(|v| *v < 0) {
        return Err(Error::OutsideDomain {
            weight: w.0.clone(),
            domain: format!("Λ⁺({}, {})", p.n, p.shifted_degree()),
        });
    }
    Ok(())
}

/// π′: all entries of the dominant degree-`r+(n-1)s` weight lie in `[0, r+s]`.
pub fn pi_prime_membership(w: &Weight, p: &RSParams) -> Result<bool> {
    require_dominant_degree(w, p)?;
    Ok(w.0.iter().all(|v| (0..=p.r + p.s).contains(v)))
}

/// π″: `Σ_{i ∈ R⁺_λ} λ_i <= r + |R⁺_λ| s`.
pub fn pi_double_prime_membership(w: &Weight, p: &RSParams) -> Result<bool> {
    require_polynomial_dominant(w, p)?;
    let above = SignSupport::of(w, p.s).above_s_positions;
    let total: i64 = above.iter().map(|i| w.0[*i]).sum();
    Ok(total <= p.r + above.len() as i64 * p.s)
}

pub fn pi_prime_set(p: &RSParams) -> WeightSet {
    enumerate_dominant(p.n, p.shifted_degree())
        .iter()
        .filter(|w| pi_prime_membership(w, p).unwrap_or(false))
        .cloned()
        .collect()
}

pub fn pi_double_prime_set(p: &RSParams) -> WeightSet {
    enumerate_dominant(p.n, p.shifted_degree())
        .iter()
        .filter(|w| pi_double_prime_membership(w, p).unwrap_or(false))
        .cloned()
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftDirection {
    /// `μ ↦ μ + sν`
    ToPiDoublePrime,
    /// `λ ↦ λ - sν`
    ToLambdaPlusRs,
}

/// Twist by the `s`-th power of the determinant, in either direction.
pub fn shift_bijection(w: &Weight, p: &RSParams, direction: ShiftDirection) -> Result<Weight> {
    check_len(w, p.n)?;
    match direction {
        ShiftDirection::ToPiDoublePrime => {
            let ok = w.is_dominant() && lambda_plus_rs_condition(w, p, Variant::B)?;
            if !ok {
                return Err(Error::OutsideDomain { weight: w.0.clone(), domain: format!("Λ⁺{p}") });
            }
            Ok(w.shifted(p.s))
        }
        ShiftDirection::ToLambdaPlusRs => {
            let ok = w.is_dominant()
                && w.degree() == p.shifted_degree()
                && w.0.iter().all(|v| *v >= 0)
                && pi_double_prime_membership(w, p)?;
            if !ok {
                return Err(Error::OutsideDomain { weight: w.0.clone(), domain: format!("π″{p}") });
            }
            Ok(w.shifted(-p.s))
        }
    }
}

/// `a ⊵ b`: every prefix sum of `a` dominates that of `b`.
pub fn dominance_geq(a: &Weight, b: &Weight) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidParams(format!("length mismatch {a} vs {b}")));
    }
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let (mut sa, mut sb) = (0, 0);
    for (x, y) in a.0.iter().zip(&b.0) {
        sa += x;
        sb += y;
        if sa < sb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that `set` is closed upward under dominance inside `ambient`.
/// Returns the first missing weight as the error.
pub fn check_saturated(set: &WeightSet, ambient: &WeightSet) -> Result<()> {
    for mu in set {
        for kappa in ambient {
            if dominance_geq(kappa, mu)? && !set.contains(kappa) {
                return Err(Error::NotSaturated(kappa.0.clone()));
            }
        }
    }
    Ok(())
}

/// ν′ = Λ⁺(n, r+(n-1)s) \ π″, verified saturated.
pub fn nu_prime_set(p: &RSParams) -> Result<WeightSet> {
    let ambient = enumerate_dominant(p.n, p.shifted_degree());
    let mut nu = Vec::new();
    for w in &ambient {
        if !pi_double_prime_membership(w, p)? {
            nu.push(w.clone());
        }
    }
    let nu: WeightSet = nu.into_iter().collect();
    check_saturated(&nu, &ambient)?;
    Ok(nu)
}

/// Weyl's product formula for the dimension of the GL(n) standard module of a
/// dominant weight.
pub fn weyl_dimension(w: &Weight) -> Result<BigInt> {
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0.clone()));
    }
    let n = w.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (j - i) as i64;
            num *= BigInt::from(w.0[i] - w.0[j] + gap);
            den *= BigInt::from(gap);
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

/// `Σ weyl_dimension(μ)²` over a set of dominant weights.
pub fn sum_of_squared_dimensions(set: &WeightSet) -> Result<BigInt> {
    let mut acc = BigInt::zero();
    for w in set {
        let d = weyl_dimension(w)?;
        acc += &d * &d;
    }
    Ok(acc)
}
