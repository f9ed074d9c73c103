//! Finite generator/relation presentations of `S(n,r,s)` in characteristic
//! zero and of `S(n,d)`, `S(n,r,s)` in characteristic `p`, and the pipeline
//! that checks them against the tensor-space representations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{Field, Prime};
use crate::error::{Error, Result};
use crate::relations::{
    relation_sides, render_relation, verify_with, Evaluator, RelationContext, RelationFamily, RelationInstance,
    ShiftConvention,
};
use crate::tensor::{algebra_closure_dimension, kernel_vanishing_report, GeneratorSymbol, KernelReport, TensorModule, DEFAULT_CLOSURE_CAP};
use crate::torus::{build_ideal, log_bound, vanishing_locus, IdealKind, TorusGenerator};
use crate::weights::{enumerate_lambda_plus_rs, enumerate_lambda_rs, proper_subsets, sum_of_squared_dimensions, RSParams};

/// Largest module on which the closure dimension is computed during verification.
const CLOSURE_MODULE_LIMIT: usize = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationLabel {
    Char0Rational,
    CharpSchur,
    CharpRational,
}

impl PresentationLabel {
    pub fn name(self) -> &'static str {
        match self {
            PresentationLabel::Char0Rational => "char0_rational",
            PresentationLabel::CharpSchur => "charp_schur",
            PresentationLabel::CharpRational => "charp_rational",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PresentationParams {
    Char0 { n: usize, r: i64, s: i64 },
    Schur { n: usize, d: i64, p: u64, m: u32 },
    Rational { n: usize, r: i64, s: i64, p: u64, m: u32 },
}

impl PresentationParams {
    pub fn n(&self) -> usize {
        match *self {
            PresentationParams::Char0 { n, .. }
            | PresentationParams::Schur { n, .. }
            | PresentationParams::Rational { n, .. } => n,
        }
    }

    /// `(r, s)` of the natural module.
    pub fn rs(&self) -> (i64, i64) {
        match *self {
            PresentationParams::Char0 { r, s, .. } | PresentationParams::Rational { r, s, .. } => (r, s),
            PresentationParams::Schur { d, .. } => (d, 0),
        }
    }

    pub fn prime(&self) -> Option<(u64, u32)> {
        match *self {
            PresentationParams::Char0 { .. } => None,
            PresentationParams::Schur { p, m, .. } | PresentationParams::Rational { p, m, .. } => Some((p, m)),
        }
    }
}

/// Range of `j` in the subset family of the characteristic-`p` rational
/// presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JRange {
    /// `m <= j <= m+t`; below `m` the family does not vanish on the module.
    #[default]
    Frobenius,
    /// `0 <= j <= m+t`.
    Literal,
}

/// Range of `j` in the degree family `binom(H_1+...+H_n-d, p^j)` of the
/// characteristic-`p` Schur presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IRange {
    /// `0 <= j <= m+t`; needed once `n(q-1) - d >= p^(m+t)`, e.g. `(3,1,2,2)`.
    #[default]
    Inclusive,
    /// `0 <= j < m+t`.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct PresentationOptions {
    /// Keep only subsets with `|S| <= n/2` in the char-0 subset family.
    pub subset_limit: bool,
    pub j_range: JRange,
    pub i_range: IRange,
}

impl PresentationOptions {
    fn is_default(&self) -> bool {
        *self == PresentationOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub label: PresentationLabel,
    pub params: PresentationParams,
    #[serde(skip_serializing_if = "PresentationOptions::is_default")]
    pub options: PresentationOptions,
    pub generators: Vec<GeneratorSymbol>,
    pub relations: Vec<RelationInstance>,
}

impl Presentation {
    pub fn context(&self) -> RelationContext {
        let (r, s) = self.params.rs();
        let p = self.params.prime().map(|(p, _)| Prime::new(p).expect("validated at build time"));
        RelationContext { n: self.params.n(), r, s, p }
    }

    pub fn field(&self) -> Field {
        self.context().field()
    }

    /// The module the presentation is checked on.
    pub fn natural_module(&self) -> Result<TensorModule> {
        let (r, s) = self.params.rs();
        TensorModule::new(RSParams::new(self.params.n(), r, s)?, self.field())
    }

    /// The torus ideal the presentation's kernel families encode.
    pub fn ideal_kind(&self) -> Result<IdealKind> {
        let n = self.params.n();
        Ok(match self.params {
            PresentationParams::Char0 { r, s, .. } => IdealKind::Char0Rs {
                params: RSParams::new(n, r, s)?,
                max_subset: self.options.subset_limit.then_some(n / 2),
            },
            PresentationParams::Schur { d, p, m, .. } => IdealKind::CharpD { n, d, p, m },
            PresentationParams::Rational { r, s, p, m, .. } => IdealKind::CharpRs { params: RSParams::new(n, r, s)?, p, m },
        })
    }

    /// Kernel families rewritten as torus generators in the variables `H_i`.
    pub fn kernel_generators(&self) -> Result<Vec<TorusGenerator>> {
        let ctx = self.context();
        let mut out = Vec::new();
        for inst in &self.relations {
            use RelationFamily::*;
            if !matches!(inst.family, Char0Degree | Char0Subset | I | IPrime | J) {
                continue;
            }
            let (lhs, rhs) = relation_sides(inst, &ctx)?;
            let g = match inst.family {
                Char0Degree => TorusGenerator::ShiftedProduct {
                    coefficients: vec![1; ctx.n],
                    from: ctx.s - ctx.r,
                    to: ctx.s - ctx.r,
                },
                _ => match (lhs.terms.as_slice(), rhs.terms.is_empty()) {
                    ([t], true) if t.coeff == 1 && t.factors.len() == 1 => factor_generator(&t.factors[0], ctx.s)?,
                    _ => return Err(Error::Malformed(format!("{inst:?} is not a kernel relation"))),
                },
            };
            out.push(g);
        }
        Ok(out)
    }

    /// Number of relation instances per family name.
    pub fn relation_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut out = BTreeMap::new();
        for r in &self.relations {
            *out.entry(r.family.name()).or_insert(0) += 1;
        }
        out
    }
}

fn factor_generator(f: &crate::relations::Factor, s: i64) -> Result<TorusGenerator> {
    use crate::relations::Factor;
    match f {
        Factor::Binom { coeffs, c, j, primed } => {
            let extra = if *primed { s * coeffs.iter().sum::<i64>() } else { 0 };
            Ok(TorusGenerator::Binomial { coefficients: coeffs.clone(), c: c + extra, j: *j })
        }
        Factor::Product { coeffs, from, to } => {
            Ok(TorusGenerator::ShiftedProduct { coefficients: coeffs.clone(), from: *from, to: *to })
        }
        other => Err(Error::Malformed(format!("{other} is not a torus generator"))),
    }
}

fn roots(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

fn members(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn validate(label: PresentationLabel, params: &PresentationParams) -> Result<()> {
    let shape_ok = matches!(
        (label, params),
        (PresentationLabel::Char0Rational, PresentationParams::Char0 { .. })
            | (PresentationLabel::CharpSchur, PresentationParams::Schur { .. })
            | (PresentationLabel::CharpRational, PresentationParams::Rational { .. })
    );
    if !shape_ok {
        return Err(Error::InvalidParams(format!("parameters {params:?} do not fit {}", label.name())));
    }
    let n = params.n();
    let (r, s) = params.rs();
    if n == 0 || r < 0 || s < 0 {
        return Err(Error::InvalidParams(format!("need n >= 1 and r, s, d >= 0, got {params:?}")));
    }
    if label != PresentationLabel::CharpSchur && n < 2 {
        return Err(Error::InvalidParams("rational presentations need n >= 2".into()));
    }
    if let Some((p, m)) = params.prime() {
        let p = Prime::new(p)?;
        if m == 0 {
            return Err(Error::InvalidParams("m must be >= 1".into()));
        }
        let q = p.pow(m)?;
        let d = r + (n as i64 - 1) * s;
        if d as u64 >= q {
            return Err(Error::InvalidParams(format!("need d = {d} < q = {q}")));
        }
    }
    Ok(())
}

/// Materializes every relation instance with all ranges expanded.
pub fn build_presentation(
    label: PresentationLabel,
    params: PresentationParams,
    options: PresentationOptions,
) -> Result<Presentation> {
    use RelationFamily::*;
    validate(label, &params)?;
    let n = params.n();
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    let rel = |f, i: Vec<usize>, e: Vec<u64>| RelationInstance::new(f, i, e);

    match params {
        PresentationParams::Char0 { .. } => {
            for i in 1..n {
                generators.push(GeneratorSymbol::DividedPower { root: (i, i + 1), k: 1 });
                generators.push(GeneratorSymbol::DividedPower { root: (i + 1, i), k: 1 });
            }
            for i in 1..=n {
                generators.push(GeneratorSymbol::BinomialH { axis: i, a: 1 });
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    relations.push(rel(Char0Commute, vec![i, j], vec![]));
                }
            }
            for i in 1..n {
                for j in 1..n {
                    relations.push(rel(Char0Bracket, vec![i, j], vec![]));
                }
            }
            for fam in [Char0WeightE, Char0WeightF] {
                for i in 1..=n {
                    for j in 1..n {
                        relations.push(rel(fam, vec![i, j], vec![]));
                    }
                }
            }
            relations.push(rel(Char0Degree, vec![], vec![]));
            for mask in proper_subsets(n) {
                if options.subset_limit && 2 * mask.count_ones() as usize > n {
                    continue;
                }
                relations.push(rel(Char0Subset, members(n, mask), vec![]));
            }
        }
        PresentationParams::Schur { p, m, .. } | PresentationParams::Rational { p, m, .. } => {
            let rational = label == PresentationLabel::CharpRational;
            let prime = Prime::new(p)?;
            let q = prime.pow(m)?;
            let t = log_bound(prime, n);
            let s = params.rs().1;
            let powers: Vec<u64> = (0..m).map(|u| prime.pow(u)).collect::<Result<_>>()?;
            let (fa, fc, fe, fg, fh) = if rational { (APrime, CPrime, EPrime, GPrime, HPrime) } else { (A, C, E, G, H) };

            for i in 1..=n {
                for a in 0..q {
                    generators.push(if rational {
                        let mut coeffs = vec![0; n];
                        coeffs[i - 1] = 1;
                        GeneratorSymbol::BinomialLinearForm { coeffs, c: s, j: a }
                    } else {
                        GeneratorSymbol::BinomialH { axis: i, a }
                    });
                }
            }
            for root in roots(n) {
                for k in 0..q {
                    generators.push(GeneratorSymbol::DividedPower { root, k });
                }
            }

            for i in 1..=n {
                for a in 0..q {
                    for b in 0..q {
                        relations.push(rel(fa, vec![i], vec![a, b]));
                    }
                }
            }
            for (i, j) in roots(n) {
                for k in 0..q {
                    for l in 0..q {
                        relations.push(rel(B, vec![i, j], vec![k, l]));
                    }
                }
            }
            let pairs = |f: &mut dyn FnMut(u64, u64)| {
                for &u in &powers {
                    for &v in &powers {
                        f(u, v);
                    }
                }
            };
            for i in 1..=n {
                for j in 1..=n {
                    pairs(&mut |u, v| relations.push(rel(fc, vec![i, j], vec![u, v])));
                }
            }
            for alpha in roots(n) {
                for beta in roots(n) {
                    if crate::relations::root_sum(alpha, beta).is_some() {
                        pairs(&mut |u, v| relations.push(rel(D, vec![alpha.0, alpha.1, beta.0, beta.1], vec![u, v])));
                    }
                }
            }
            for (i, j) in roots(n) {
                pairs(&mut |u, v| relations.push(rel(fe, vec![i, j], vec![u, v])));
            }
            for alpha in roots(n) {
                for beta in roots(n) {
                    let opposite = alpha.0 == beta.1 && alpha.1 == beta.0;
                    if !opposite && crate::relations::root_sum(alpha, beta).is_none() {
                        pairs(&mut |u, v| relations.push(rel(F, vec![alpha.0, alpha.1, beta.0, beta.1], vec![u, v])));
                    }
                }
            }
            for fam in [fg, fh] {
                for (i, j) in roots(n) {
                    for axis in 1..=n {
                        pairs(&mut |u, v| relations.push(rel(fam, vec![i, j, axis], vec![u, v])));
                    }
                }
            }
            if rational {
                for j in 0..=m + t {
                    relations.push(rel(IPrime, vec![], vec![u64::from(j)]));
                }
                let lo = match options.j_range {
                    JRange::Frobenius => m,
                    JRange::Literal => 0,
                };
                for mask in proper_subsets(n) {
                    for j in lo..=m + t {
                        relations.push(rel(J, members(n, mask), vec![u64::from(j)]));
                    }
                }
            } else {
                let top = match options.i_range {
                    IRange::Inclusive => m + t,
                    IRange::Literal => m + t - 1,
                };
                for j in 0..=top {
                    relations.push(rel(I, vec![], vec![u64::from(j)]));
                }
            }
        }
    }
    Ok(Presentation { label, params, options, generators, relations })
}

/// Serre relations, checked as derived identities of the char-0 presentation.
pub fn serre_relations(n: usize) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    for fam in [RelationFamily::SerreE, RelationFamily::SerreF] {
        for i in 1..n {
            for j in 1..n {
                if i != j {
                    out.push(RelationInstance::new(fam, vec![i, j], vec![]));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    #[serde(flatten)]
    pub relation: RelationInstance,
    pub text: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionCheck {
    pub name: String,
    pub values: BTreeMap<String, usize>,
    pub pass: bool,
}

impl DimensionCheck {
    fn agree(name: &str, values: &[(&str, usize)]) -> Self {
        let pass = values.windows(2).all(|w| w[0].1 == w[1].1);
        DimensionCheck {
            name: name.to_string(),
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub label: PresentationLabel,
    pub params: PresentationParams,
    pub relations: Vec<RelationCheck>,
    pub derived: Vec<RelationCheck>,
    pub kernel: KernelReport,
    pub dimensions: Vec<DimensionCheck>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .relations
            .iter()
            .chain(&self.derived)
            .filter(|c| !c.pass)
            .map(|c| format!("relation {}: {}", c.relation.family.name(), c.text))
            .collect();
        out.extend(self.kernel.checks.iter().filter(|c| !c.pass).map(|c| format!("kernel generator {}", c.generator.generator)));
        out.extend(self.dimensions.iter().filter(|d| !d.pass).map(|d| format!("dimension check {}: {:?}", d.name, d.values)));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn check_all(list: &[RelationInstance], ctx: &RelationContext, module: &TensorModule) -> Result<Vec<RelationCheck>> {
    list.par_iter()
        .map_init(
            || Evaluator::new(module, ctx.s),
            |ev, inst| {
                Ok(RelationCheck {
                    relation: inst.clone(),
                    text: render_relation(inst, ctx)?,
                    pass: verify_with(inst, ctx, ev, ShiftConvention::Corrected)?,
                })
            },
        )
        .collect()
}

/// Runs every check on the natural module of the presentation.
pub fn verify_presentation(pres: &Presentation) -> Result<VerificationReport> {
    let module = pres.natural_module()?;
    verify_presentation_on(pres, &module)
}

/// Relations as matrix identities, kernel generators vanishing, the three
/// independent counts of the torus quotient, and in characteristic zero the
/// closure dimension against the sum of squared Weyl dimensions.
pub fn verify_presentation_on(pres: &Presentation, module: &TensorModule) -> Result<VerificationReport> {
    let start = Instant::now();
    let ctx = pres.context();
    let (r, s) = pres.params.rs();
    let rs = RSParams::new(ctx.n, r, s)?;
    if module.params() != rs || module.field() != ctx.field() {
        return Err(Error::ContextMismatch("module does not match the presentation".into()));
    }
    let relations = check_all(&pres.relations, &ctx, module)?;
    let derived = if pres.label == PresentationLabel::Char0Rational {
        check_all(&serre_relations(ctx.n), &ctx, module)?
    } else {
        Vec::new()
    };

    let ideal = build_ideal(pres.ideal_kind()?)?;
    let kernel = kernel_vanishing_report(&ideal, module)?;
    let weight_count = enumerate_lambda_rs(&rs).len();
    let mut dimensions = vec![DimensionCheck::agree(
        "torus_quotient",
        &[
            ("s0_dimension", module.s0_dimension()),
            ("quotient_dimension", ideal.quotient_dimension()),
            ("weight_count", weight_count),
        ],
    )];

    let torus = ideal.context();
    let kernel_gens = pres.kernel_generators()?;
    let presented = vanishing_locus(torus, &kernel_gens);
    let mut locus = DimensionCheck::agree(
        "presentation_locus",
        &[("presentation_locus", presented.len()), ("ideal_locus", ideal.vanishing_locus.len())],
    );
    locus.pass &= presented == ideal.vanishing_locus;
    dimensions.push(locus);
    if let Some(ok) = ideal.truncation_verified {
        dimensions.push(DimensionCheck {
            name: "truncation".into(),
            values: BTreeMap::from([("verified".to_string(), usize::from(ok))]),
            pass: ok,
        });
    }

    if pres.label == PresentationLabel::Char0Rational && module.dim() <= CLOSURE_MODULE_LIMIT {
        let gens = module.chevalley_generators()?;
        let closure = algebra_closure_dimension(&gens, module.dim(), module.field(), DEFAULT_CLOSURE_CAP)?;
        let weyl = sum_of_squared_dimensions(&enumerate_lambda_plus_rs(&rs))?;
        let weyl = usize::try_from(weyl).map_err(|_| Error::CapExceeded(DEFAULT_CLOSURE_CAP))?;
        dimensions.push(DimensionCheck::agree("closure", &[("closure_dimension", closure), ("weyl_sum", weyl)]));
    }

    let pass = relations.iter().chain(&derived).all(|c| c.pass) && kernel.pass && dimensions.iter().all(|d| d.pass);
    Ok(VerificationReport {
        label: pres.label,
        params: pres.params,
        relations,
        derived,
        kernel,
        dimensions,
        pass,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Text,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "text" => Ok(ExportFormat::Text),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

impl std::fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorSymbol::DividedPower { root, k } => write!(f, "x({},{})^({k})", root.0, root.1),
            GeneratorSymbol::BinomialH { axis, a } => write!(f, "binom(H{axis}, {a})"),
            GeneratorSymbol::BinomialLinearForm { coeffs, c, j } => {
                write!(f, "binom({}, {j})", crate::torus::render_linear_form(coeffs, "H", *c))
            }
        }
    }
}

/// Deterministic JSON or text rendering.
pub fn export_presentation(pres: &Presentation, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Json => Ok(serde_json::to_string_pretty(pres).expect("presentations always serialize") + "\n"),
        ExportFormat::Text => {
            let ctx = pres.context();
            let mut out = String::new();
            let _ = writeln!(out, "label: {}", pres.label.name());
            let _ = writeln!(out, "params: {}", serde_json::to_string(&pres.params).expect("params serialize"));
            let _ = writeln!(out, "generators ({}):", pres.generators.len());
            for g in &pres.generators {
                let _ = writeln!(out, "  {g}");
            }
            let _ = writeln!(out, "relations ({}):", pres.relations.len());
            for r in &pres.relations {
                let _ = writeln!(out, "  ({} {:?} {:?}) {}", r.family.name(), r.indices, r.exponents, render_relation(r, &ctx)?);
            }
            Ok(out)
        }
    }
}

/// The desk grid of presentations: `n <= 3`, `d <= 3` or `r, s <= 1`,
/// `p in {2, 3}` and every `m` with `d < p^m <= 9`.
pub fn desk_grid() -> Vec<(PresentationLabel, PresentationParams)> {
    let mut out = Vec::new();
    for n in 2..=3usize {
        for (r, s) in [(1, 0), (2, 0), (3, 0), (0, 1), (1, 1)] {
            out.push((PresentationLabel::Char0Rational, PresentationParams::Char0 { n, r, s }));
        }
    }
    for p in [2u64, 3] {
        for m in 1..=3u32 {
            let q = p.pow(m) as i64;
            if q > 9 {
                continue;
            }
            for n in 2..=3usize {
                for d in 1..=3i64 {
                    if d < q {
                        out.push((PresentationLabel::CharpSchur, PresentationParams::Schur { n, d, p, m }));
                    }
                }
                for (r, s) in [(1, 0), (0, 1), (1, 1)] {
                    if r + (n as i64 - 1) * s < q {
                        out.push((PresentationLabel::CharpRational, PresentationParams::Rational { n, r, s, p, m }));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn char0(n: usize, r: i64, s: i64) -> Presentation {
        build_presentation(PresentationLabel::Char0Rational, PresentationParams::Char0 { n, r, s }, PresentationOptions::default()).unwrap()
    }

    fn schur(n: usize, d: i64, p: u64, m: u32) -> Presentation {
        build_presentation(PresentationLabel::CharpSchur, PresentationParams::Schur { n, d, p, m }, PresentationOptions::default()).unwrap()
    }

    fn rational(n: usize, r: i64, s: i64, p: u64, m: u32, j_range: JRange) -> Presentation {
        build_presentation(
            PresentationLabel::CharpRational,
            PresentationParams::Rational { n, r, s, p, m },
            PresentationOptions { j_range, ..Default::default() },
        )
        .unwrap()
    }

    #[test]
    fn char0_example_counts() {
        let pres = char0(2, 1, 1);
        assert_eq!(pres.generators.len(), 4);
        let counts = pres.relation_counts();
        assert_eq!(counts, BTreeMap::from([("a", 1), ("b", 1), ("c_e", 2), ("c_f", 2), ("d", 1), ("e", 2)]));
        let text = export_presentation(&pres, ExportFormat::Text).unwrap();
        assert!(text.contains("H1+H2 = 0"));
        assert!(text.contains("prod_{k=-1}^{1}(H2+k) = 0"));
    }

    #[test]
    fn schur_kernel_family() {
        let pres = schur(2, 3, 2, 2);
        let i: Vec<_> = pres.relations.iter().filter(|r| r.family == RelationFamily::I).collect();
        assert_eq!(i.len(), 4);
        let opts = PresentationOptions { i_range: IRange::Literal, ..Default::default() };
        let literal = build_presentation(PresentationLabel::CharpSchur, PresentationParams::Schur { n: 2, d: 3, p: 2, m: 2 }, opts).unwrap();
        assert_eq!(literal.relation_counts()["i"], 3);
        let text = export_presentation(&pres, ExportFormat::Text).unwrap();
        assert!(text.contains("binom(H1+H2-3, 1) = 0"));
    }

    #[test]
    fn subset_limit_variant() {
        let opts = PresentationOptions { subset_limit: true, ..Default::default() };
        let pres = build_presentation(PresentationLabel::Char0Rational, PresentationParams::Char0 { n: 4, r: 1, s: 1 }, opts).unwrap();
        assert_eq!(pres.relation_counts()["e"], 4 + 6);
        assert_eq!(char0(4, 1, 1).relation_counts()["e"], 14);
    }

    #[test]
    fn rejections() {
        let d = PresentationOptions::default();
        assert!(build_presentation(PresentationLabel::CharpSchur, PresentationParams::Schur { n: 2, d: 4, p: 2, m: 2 }, d).is_err());
        assert!(build_presentation(PresentationLabel::Char0Rational, PresentationParams::Char0 { n: 1, r: 1, s: 0 }, d).is_err());
        assert!(build_presentation(PresentationLabel::CharpRational, PresentationParams::Rational { n: 1, r: 1, s: 0, p: 2, m: 2 }, d).is_err());
        assert!(build_presentation(PresentationLabel::CharpRational, PresentationParams::Schur { n: 2, d: 1, p: 2, m: 2 }, d).is_err());
        assert!(matches!("xml".parse::<ExportFormat>(), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn verify_examples() {
        let report = verify_presentation(&char0(2, 1, 1)).unwrap();
        assert!(report.pass, "{:?}", report.failures());
        let closure = report.dimensions.iter().find(|d| d.name == "closure").unwrap();
        assert_eq!(closure.values["closure_dimension"], 10);

        let report = verify_presentation(&schur(2, 3, 2, 2)).unwrap();
        assert!(report.pass, "{:?}", report.failures());

        let report = verify_presentation(&rational(2, 1, 1, 2, 2, JRange::Frobenius)).unwrap();
        assert!(report.pass, "{:?}", report.failures());
    }

    #[test]
    fn literal_i_range_leaves_extra_weight() {
        let params = PresentationParams::Schur { n: 3, d: 1, p: 2, m: 2 };
        let opts = PresentationOptions { i_range: IRange::Literal, ..Default::default() };
        let report = verify_presentation(&build_presentation(PresentationLabel::CharpSchur, params, opts).unwrap()).unwrap();
        let locus = report.dimensions.iter().find(|d| d.name == "presentation_locus").unwrap();
        assert!(!locus.pass);
        assert_eq!(locus.values["presentation_locus"], 4);
        let report = verify_presentation(&build_presentation(PresentationLabel::CharpSchur, params, Default::default()).unwrap()).unwrap();
        assert!(report.pass, "{:?}", report.failures());
    }

    #[test]
    fn literal_j_range_is_reported() {
        let report = verify_presentation(&rational(2, 1, 1, 2, 2, JRange::Literal)).unwrap();
        assert!(!report.pass);
        let failing: Vec<_> = report.relations.iter().filter(|c| !c.pass).collect();
        assert!(failing.iter().all(|c| c.relation.family == RelationFamily::J && c.relation.exponents[0] < 2));
        let locus = report.dimensions.iter().find(|d| d.name == "presentation_locus").unwrap();
        assert!(!locus.pass);
    }

    #[test]
    fn export_is_deterministic() {
        let pres = char0(2, 1, 1);
        let a = export_presentation(&pres, ExportFormat::Json).unwrap();
        let b = export_presentation(&char0(2, 1, 1), ExportFormat::Json).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("{\n  \"label\": \"char0_rational\""));
    }
}
