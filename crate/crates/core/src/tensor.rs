//! Mixed tensor spaces `E^{⊗r} ⊗ (E*)^{⊗s}` with the action of divided
//! powers and torus binomials as exact sparse matrices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::{binom, binom_mod_p_i64, Field, Scalar};
use crate::error::{Error, Result};
use crate::matrix::{Echelon, SparseMatrix};
use crate::torus::{GeneratorRecord, IdealDescriptor, IdealKind, TorusElement, TorusGenerator};
use crate::weights::{RSParams, Weight};

const MODULE_GUARD: usize = 1 << 16;
pub const DEFAULT_CLOSURE_CAP: usize = 5000;

/// A basis vector `v_{i_1}⊗…⊗v_{i_r}⊗v*_{j_1}⊗…⊗v*_{j_s}`, 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorBasisIndex {
    pub covariant: Vec<usize>,
    pub contravariant: Vec<usize>,
}

/// One letter of the generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSymbol {
    /// `x_{ε_i-ε_j}^{(k)}`, 1-based.
    DividedPower { root: (usize, usize), k: u64 },
    /// `binom(H_axis, a)`, 1-based axis.
    BinomialH { axis: usize, a: u64 },
    /// `binom(⟨coeffs, H⟩ + c, j)`.
    BinomialLinearForm { coeffs: Vec<i64>, c: i64, j: u64 },
}

/// The module `E^{r,s}` over a field, with lexicographic basis order
/// (covariant positions first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorModule {
    params: RSParams,
    field: Field,
    dim: usize,
}

impl TensorModule {
    pub fn new(params: RSParams, field: Field) -> Result<Self> {
        let slots = (params.r + params.s) as u32;
        let dim = params
            .n
            .checked_pow(slots)
            .filter(|d| *d <= MODULE_GUARD)
            .ok_or_else(|| Error::InvalidParams(format!("E^{{{},{}}} for n={} is too large", params.r, params.s, params.n)))?;
        Ok(TensorModule { params, field, dim })
    }

    /// `E^{⊗d}`.
    pub fn polynomial(n: usize, d: i64, field: Field) -> Result<Self> {
        Self::new(RSParams::new(n, d, 0)?, field)
    }

    pub fn params(&self) -> RSParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slots(&self) -> usize {
        (self.params.r + self.params.s) as usize
    }

    /// 0-based factor indices of a basis vector, most significant first.
    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let n = self.params.n;
        let mut out = vec![0; self.slots()];
        for slot in out.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        out
    }

    fn from_digits(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, d| acc * self.params.n + d)
    }

    pub fn basis_index(&self, idx: usize) -> TensorBasisIndex {
        let d = self.digits(idx);
        let r = self.params.r as usize;
        TensorBasisIndex {
            covariant: d[..r].iter().map(|v| v + 1).collect(),
            contravariant: d[r..].iter().map(|v| v + 1).collect(),
        }
    }

    pub fn index_of(&self, b: &TensorBasisIndex) -> Result<usize> {
        let ok = b.covariant.len() == self.params.r as usize
            && b.contravariant.len() == self.params.s as usize
            && b.covariant.iter().chain(&b.contravariant).all(|v| (1..=self.params.n).contains(v));
        if !ok {
            return Err(Error::InvalidParams(format!("{b:?} is not a basis index of E^{{{},{}}}", self.params.r, self.params.s)));
        }
        let digits: Vec<usize> = b.covariant.iter().chain(&b.contravariant).map(|v| v - 1).collect();
        Ok(self.from_digits(&digits))
    }

    pub fn weight_at(&self, idx: usize) -> Weight {
        let mut w = vec![0i64; self.params.n];
        let r = self.params.r as usize;
        for (pos, d) in self.digits(idx).into_iter().enumerate() {
            w[d] += if pos < r { 1 } else { -1 };
        }
        Weight(w)
    }

    pub fn weights(&self) -> Vec<Weight> {
        (0..self.dim).map(|i| self.weight_at(i)).collect()
    }

    fn check_root(&self, i: usize, j: usize) -> Result<()> {
        if i == j || i == 0 || j == 0 || i > self.params.n || j > self.params.n {
            return Err(Error::InvalidParams(format!("({i},{j}) is not a root for n={}", self.params.n)));
        }
        Ok(())
    }

    /// `x_{ε_i-ε_j}^{(k)}` (1-based `i, j`) as the sum over `k`-subsets of
    /// tensor positions of the single-factor actions `v_j ↦ v_i` on `E`
    /// and `v*_i ↦ -v*_j` on `E*`.
    pub fn matrix_divided_power(&self, i: usize, j: usize, k: u64) -> Result<SparseMatrix> {
        self.check_root(i, j)?;
        let (i0, j0) = (i - 1, j - 1);
        let r = self.params.r as usize;
        let mut triplets = Vec::new();
        for col in 0..self.dim {
            let digits = self.digits(col);
            let active: Vec<usize> = (0..digits.len())
                .filter(|&pos| if pos < r { digits[pos] == j0 } else { digits[pos] == i0 })
                .collect();
            if (active.len() as u64) < k {
                continue;
            }
            for subset in k_subsets(active.len(), k as usize) {
                let mut target = digits.clone();
                let mut sign = 1i64;
                for &a in &subset {
                    let pos = active[a];
                    if pos < r {
                        target[pos] = i0;
                    } else {
                        target[pos] = j0;
                        sign = -sign;
                    }
                }
                triplets.push((self.from_digits(&target), col, self.field.from_i64(sign)));
            }
        }
        SparseMatrix::from_triplets(self.dim, self.field, triplets)
    }

    fn diagonal(&self, f: impl Fn(&Weight) -> Scalar) -> SparseMatrix {
        SparseMatrix::from_diagonal(self.field, (0..self.dim).map(|i| f(&self.weight_at(i))))
    }

    fn binom_scalar(&self, x: i64, j: u64) -> Scalar {
        match self.field {
            Field::Prime(p) => Scalar::Mod { value: binom_mod_p_i64(x, j, p.get()), modulus: p },
            Field::Rational => self.field.from_bigint(&binom(x, j)),
        }
    }

    /// Diagonal `binom(λ_axis, a)`, 1-based axis.
    pub fn matrix_binomial_h(&self, axis: usize, a: u64) -> Result<SparseMatrix> {
        if axis == 0 || axis > self.params.n {
            return Err(Error::InvalidParams(format!("axis {axis} out of range for n={}", self.params.n)));
        }
        Ok(self.diagonal(|w| self.binom_scalar(w.0[axis - 1], a)))
    }

    /// Diagonal `binom(⟨coeffs, λ⟩ + c, j)`.
    pub fn matrix_linear_form_binomial(&self, coeffs: &[i64], c: i64, j: u64) -> Result<SparseMatrix> {
        self.check_coeffs(coeffs)?;
        Ok(self.diagonal(|w| self.binom_scalar(dot(coeffs, &w.0) + c, j)))
    }

    /// Diagonal `∏_{k=from}^{to} (⟨coeffs, λ⟩ + k)`.
    pub fn matrix_linear_form_product(&self, coeffs: &[i64], from: i64, to: i64) -> Result<SparseMatrix> {
        self.check_coeffs(coeffs)?;
        Ok(self.diagonal(|w| {
            let x = dot(coeffs, &w.0);
            let mut acc = BigInt::from(1);
            for k in from..=to {
                acc *= x + k;
            }
            self.field.from_bigint(&acc)
        }))
    }

    fn check_coeffs(&self, coeffs: &[i64]) -> Result<()> {
        if coeffs.len() != self.params.n {
            return Err(Error::InvalidParams(format!("{} coefficients for n={}", coeffs.len(), self.params.n)));
        }
        Ok(())
    }

    pub fn matrix_of_generator(&self, g: &TorusGenerator) -> Result<SparseMatrix> {
        match g {
            TorusGenerator::Binomial { coefficients, c, j } => self.matrix_linear_form_binomial(coefficients, *c, *j),
            TorusGenerator::ShiftedProduct { coefficients, from, to } => {
                self.matrix_linear_form_product(coefficients, *from, *to)
            }
        }
    }

    pub fn matrix_of_symbol(&self, g: &GeneratorSymbol) -> Result<SparseMatrix> {
        match g {
            GeneratorSymbol::DividedPower { root, k } => self.matrix_divided_power(root.0, root.1, *k),
            GeneratorSymbol::BinomialH { axis, a } => self.matrix_binomial_h(*axis, *a),
            GeneratorSymbol::BinomialLinearForm { coeffs, c, j } => self.matrix_linear_form_binomial(coeffs, *c, *j),
        }
    }

    /// Diagonal action of a torus element, whose monomials are `∏ binom(H_i, b_i)`.
    pub fn matrix_of_torus_element(&self, x: &TorusElement) -> Result<SparseMatrix> {
        if x.context().n() != self.params.n || x.context().field() != self.field {
            return Err(Error::ContextMismatch("torus element does not act on this module".into()));
        }
        let diag: Result<Vec<Scalar>> = (0..self.dim).map(|i| x.evaluate(&self.weight_at(i).0)).collect();
        Ok(SparseMatrix::from_diagonal(self.field, diag?))
    }

    /// Number of distinct weights, i.e. the dimension of the image of the torus.
    pub fn s0_dimension(&self) -> usize {
        self.weights().into_iter().collect::<BTreeSet<_>>().len()
    }

    /// `x_α^{(1)}` for every root together with every `H_i`.
    pub fn chevalley_generators(&self) -> Result<Vec<SparseMatrix>> {
        self.frobenius_generators(1, 2)
    }

    /// `x_α^{(p^u)}` and `binom(H_i, p^u)` for every root, axis and `u < m`.
    pub fn frobenius_generators(&self, m: u32, p: u64) -> Result<Vec<SparseMatrix>> {
        let n = self.params.n;
        let mut out = Vec::new();
        for u in 0..m {
            let k = p.pow(u);
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        out.push(self.matrix_divided_power(i, j, k)?);
                    }
                }
                out.push(self.matrix_binomial_h(i, k)?);
            }
        }
        Ok(out)
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All `k`-element subsets of `0..len` as increasing index lists.
fn k_subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            if len - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Dimension of the unital algebra generated by `generators`: the identity is
/// closed under right multiplication by generators, rank tracked in echelon
/// form. Fails with `CapExceeded` rather than truncating.
pub fn algebra_closure_dimension(generators: &[SparseMatrix], dim: usize, field: Field, cap: usize) -> Result<usize> {
    if generators.iter().any(|g| g.dim() != dim || g.field() != field) {
        return Err(Error::ContextMismatch("closure generators must share size and field".into()));
    }
    let mut echelon = Echelon::new(field, dim * dim);
    let id = SparseMatrix::identity(dim, field);
    echelon.insert(id.to_dense_vec())?;
    let mut frontier = vec![id];
    while let Some(b) = frontier.pop() {
        for g in generators {
            let prod = b.mul(g)?;
            if echelon.insert(prod.to_dense_vec())? {
                if echelon.rank() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                frontier.push(prod);
            }
        }
    }
    Ok(echelon.rank())
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelCheck {
    #[serde(flatten)]
    pub generator: GeneratorRecord,
    pub pass: bool,
    /// Basis vectors on which the image is nonzero.
    pub nonzero_on: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub checks: Vec<KernelCheck>,
    pub pass: bool,
}

/// Diagonal image of each generator under the module, asserted zero.
pub fn kernel_vanishing_report(ideal: &IdealDescriptor, module: &TensorModule) -> Result<KernelReport> {
    let p = module.params();
    let ok = match ideal.kind {
        IdealKind::Char0Rs { params, .. } => module.field() == Field::Rational && params == p,
        IdealKind::CharpD { n, d, p: prime, .. } => {
            module.field().characteristic() == prime && p.n == n && p.r == d && p.s == 0
        }
        IdealKind::CharpRs { params, p: prime, .. } => module.field().characteristic() == prime && params == p,
    };
    if !ok {
        return Err(Error::ContextMismatch(format!("ideal {:?} does not match the module E^{{{},{}}}", ideal.kind, p.r, p.s)));
    }
    kernel_report_for(&ideal.generators, module)
}

/// Same check for an arbitrary generator list.
pub fn kernel_report_for(generators: &[GeneratorRecord], module: &TensorModule) -> Result<KernelReport> {
    let weights = module.weights();
    let checks: Vec<KernelCheck> = generators
        .iter()
        .map(|g| {
            let nonzero_on = weights.iter().filter(|w| !g.generator.vanishes_at(&w.0, module.field())).count();
            KernelCheck { generator: g.clone(), pass: nonzero_on == 0, nonzero_on }
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(KernelReport { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{binomial_mod_p_lucas, Prime};
    use crate::torus::{build_ideal, GeneratorRole};
    use crate::weights::{enumerate_lambda, enumerate_lambda_rs};

    fn q() -> Field {
        Field::Rational
    }

    fn fp(p: u64) -> Field {
        Field::Prime(Prime::new(p).unwrap())
    }

    fn rs(n: usize, r: i64, s: i64) -> RSParams {
        RSParams::new(n, r, s).unwrap()
    }

    #[test]
    fn weight_examples() {
        let m = TensorModule::polynomial(3, 2, q()).unwrap();
        let idx = m.index_of(&TensorBasisIndex { covariant: vec![1, 1], contravariant: vec![] }).unwrap();
        assert_eq!(m.weight_at(idx), Weight(vec![2, 0, 0]));
        let mixed = TensorModule::new(rs(2, 1, 1), q()).unwrap();
        assert_eq!(mixed.weight_at(0), Weight(vec![0, 0]));
        let set: BTreeSet<Weight> = mixed.weights().into_iter().collect();
        let expected: BTreeSet<Weight> = enumerate_lambda_rs(&rs(2, 1, 1)).iter().cloned().collect();
        assert_eq!(set, expected);
        assert_eq!(mixed.basis_index(1), TensorBasisIndex { covariant: vec![1], contravariant: vec![2] });
    }

    #[test]
    fn divided_power_examples() {
        let e = TensorModule::polynomial(2, 1, q()).unwrap();
        assert_eq!(e.matrix_divided_power(1, 2, 0).unwrap(), SparseMatrix::identity(2, q()));
        let x = e.matrix_divided_power(1, 2, 1).unwrap();
        assert_eq!(x.nnz(), 1);
        assert!(x.get(0, 1).is_one());
        assert!(e.matrix_divided_power(1, 1, 1).is_err());

        let e2 = TensorModule::polynomial(2, 2, q()).unwrap();
        let x2 = e2.matrix_divided_power(1, 2, 2).unwrap();
        assert_eq!(x2.nnz(), 1);
        assert!(x2.get(0, 3).is_one());
        // (e ⊗ 1 + 1 ⊗ e)^2 / 2 over the rationals
        let x1 = e2.matrix_divided_power(1, 2, 1).unwrap();
        assert_eq!(x1.pow(2).unwrap(), x2.scale(&q().from_i64(2)));
    }

    #[test]
    fn divided_power_integrality() {
        for params in [rs(2, 2, 0), rs(3, 3, 0), rs(2, 1, 1), rs(3, 1, 1), rs(2, 2, 1)] {
            let m = TensorModule::new(params, q()).unwrap();
            for (i, j) in [(1, 2), (2, 1)] {
                let x1 = m.matrix_divided_power(i, j, 1).unwrap();
                let mut fact = 1;
                for k in 1..=3u64 {
                    fact *= k as i64;
                    let xk = m.matrix_divided_power(i, j, k).unwrap();
                    assert_eq!(xk.scale(&q().from_i64(fact)), x1.pow(k as u32).unwrap(), "{params} ({i},{j}) k={k}");
                }
            }
        }
    }

    #[test]
    fn binomial_h_examples() {
        let m = TensorModule::new(rs(2, 1, 1), q()).unwrap();
        assert_eq!(m.matrix_binomial_h(1, 0).unwrap(), SparseMatrix::identity(4, q()));
        let h = m.matrix_binomial_h(1, 1).unwrap();
        let diag: Vec<Scalar> = (0..4).map(|i| h.get(i, i)).collect();
        assert_eq!(diag, vec![q().zero(), q().from_i64(1), q().from_i64(-1), q().zero()]);

        let p = Prime::new(3).unwrap();
        let m3 = TensorModule::polynomial(2, 4, fp(3)).unwrap();
        for a in 0..9u64 {
            let mat = m3.matrix_binomial_h(1, a).unwrap();
            for i in 0..m3.dim() {
                let lam = m3.weight_at(i).0[0] as u64;
                assert_eq!(mat.get(i, i), binomial_mod_p_lucas(lam, a, p));
            }
        }
    }

    #[test]
    fn linear_form_examples() {
        let m = TensorModule::polynomial(3, 2, q()).unwrap();
        assert!(m.matrix_linear_form_binomial(&[1, 1, 1], -2, 1).unwrap().is_zero());
        let mixed = TensorModule::new(rs(2, 1, 1), q()).unwrap();
        assert!(mixed.matrix_linear_form_product(&[1, 0], -1, 1).unwrap().is_zero());
        let m2 = TensorModule::polynomial(2, 3, fp(2)).unwrap();
        for axis in [[1, 0], [0, 1]] {
            assert!(m2.matrix_linear_form_binomial(&axis, 0, 4).unwrap().is_zero());
        }
    }

    #[test]
    fn s0_examples() {
        assert_eq!(TensorModule::new(rs(2, 1, 1), q()).unwrap().s0_dimension(), 3);
        assert_eq!(TensorModule::polynomial(3, 3, q()).unwrap().s0_dimension(), enumerate_lambda(3, 3).len());
        assert_eq!(TensorModule::polynomial(1, 4, q()).unwrap().s0_dimension(), 1);
    }

    #[test]
    fn closure_examples() {
        let m = TensorModule::polynomial(2, 2, q()).unwrap();
        let gens = m.chevalley_generators().unwrap();
        assert_eq!(algebra_closure_dimension(&gens, m.dim(), q(), DEFAULT_CLOSURE_CAP).unwrap(), 10);
        let mixed = TensorModule::new(rs(2, 1, 1), q()).unwrap();
        let gens = mixed.chevalley_generators().unwrap();
        assert_eq!(algebra_closure_dimension(&gens, 4, q(), DEFAULT_CLOSURE_CAP).unwrap(), 10);
        assert_eq!(algebra_closure_dimension(&[SparseMatrix::identity(3, q())], 3, q(), 10).unwrap(), 1);
        assert!(matches!(algebra_closure_dimension(&m.chevalley_generators().unwrap(), 4, q(), 5), Err(Error::CapExceeded(5))));
    }

    #[test]
    fn kernel_examples() {
        let params = rs(2, 1, 1);
        let ideal = build_ideal(IdealKind::Char0Rs { params, max_subset: None }).unwrap();
        let module = TensorModule::new(params, q()).unwrap();
        assert!(kernel_vanishing_report(&ideal, &module).unwrap().pass);

        let ideal = build_ideal(IdealKind::CharpD { n: 2, d: 3, p: 2, m: 2 }).unwrap();
        let module = TensorModule::polynomial(2, 3, fp(2)).unwrap();
        let report = kernel_vanishing_report(&ideal, &module).unwrap();
        assert!(report.pass);
        assert!(report.checks.iter().any(|c| c.generator.generator == TorusGenerator::Binomial {
            coefficients: vec![1, 1],
            c: -3,
            j: 8
        }));

        let wrong = GeneratorRecord {
            role: GeneratorRole::Degree,
            generator: TorusGenerator::Binomial { coefficients: vec![1, 1], c: -2, j: 1 },
        };
        let report = kernel_report_for(&[wrong], &module).unwrap();
        assert!(!report.pass);
        assert_eq!(report.checks[0].nonzero_on, module.dim());

        let other = TensorModule::polynomial(2, 2, fp(2)).unwrap();
        assert!(kernel_vanishing_report(&ideal, &other).is_err());
    }
}
