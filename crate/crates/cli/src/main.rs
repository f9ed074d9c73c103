//! `schur`: weight enumeration, dimension checks, presentation export and
//! verification, PBW rewriting, and the (4,1,1) counterexample.
//!
//! Exit codes: 0 pass, 2 a check failed, 3 invalid parameters, 4 a resource
//! cap was hit. Data goes to stdout (or `--output`); timing goes to stderr.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use schur_core::arith::Field;
use schur_core::presentation::{
    build_presentation, desk_grid, export_presentation, verify_presentation, ExportFormat, IRange, JRange,
    PresentationLabel, PresentationOptions, PresentationParams,
};
use schur_core::rewrite::{certify_rewrite, pbw_rewrite_with_stats, GeneratorWord, RewriteContext, STEP_CAP};
use schur_core::tensor::{algebra_closure_dimension, TensorModule, DEFAULT_CLOSURE_CAP};
use schur_core::torus::{build_ideal, IdealKind};
use schur_core::weights::{
    enumerate_dominant, enumerate_lambda, enumerate_lambda_plus_rs, enumerate_lambda_rs, in_lambda_rs, nu_prime_set,
    pi_double_prime_membership, pi_double_prime_set, pi_prime_membership, pi_prime_set, sum_of_squared_dimensions,
    RSParams, SignSupport, Weight, WeightSet,
};
use schur_core::Error;

#[derive(Parser)]
#[command(name = "schur", version, about = "Exact computations in Schur algebras S(n,d) and rational Schur algebras S(n,r,s)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report timing on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a weight set.
    Weights(WeightsArgs),
    /// Compare |Λ|, torus quotient dimensions, Weyl dimension sums and closure dimensions.
    Dims(DimsArgs),
    /// Build presentations and check every relation on the tensor representation.
    Verify(VerifyArgs),
    /// Build a presentation and export it.
    Present(PresentArgs),
    /// Straighten words into PBW normal form and certify them on tensor modules.
    RewriteDemo(RewriteArgs),
    /// The weight (2,2,0,0) for (n,r,s) = (4,1,1).
    Counterexample(CounterexampleArgs),
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
    /// Degree of the polynomial case; same as `--r d --s 0`.
    #[arg(long)]
    d: Option<i64>,
    /// Characteristic: 0 or a prime.
    #[arg(long = "char", visible_alias = "p", default_value_t = 0)]
    characteristic: u64,
    /// Frobenius exponent: q = p^m.
    #[arg(long, default_value_t = 1)]
    m: u32,
}

impl ParamArgs {
    fn n(&self) -> Result<usize, Error> {
        self.n.ok_or_else(|| Error::InvalidParams("--n is required".into()))
    }

    /// `(r, s)`, with `--d` standing for `(d, 0)`.
    fn rs(&self) -> Result<(i64, i64), Error> {
        match (self.d, self.r, self.s) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(Error::InvalidParams("give either --d or --r/--s".into())),
            (Some(d), None, None) => Ok((d, 0)),
            (None, r, s) => Ok((r.unwrap_or(0), s.unwrap_or(0))),
        }
    }

    fn rs_params(&self) -> Result<RSParams, Error> {
        let (r, s) = self.rs()?;
        RSParams::new(self.n()?, r, s)
    }

    fn field(&self) -> Result<Field, Error> {
        match self.characteristic {
            0 => Ok(Field::Rational),
            p => Field::prime(p),
        }
    }

    fn presentation(&self, label: Option<LabelArg>) -> Result<(PresentationLabel, PresentationParams), Error> {
        let n = self.n()?;
        let (r, s) = self.rs()?;
        let (p, m) = (self.characteristic, self.m);
        let label = match label {
            Some(l) => l.into(),
            None if p == 0 => PresentationLabel::Char0Rational,
            None if self.d.is_some() => PresentationLabel::CharpSchur,
            None => PresentationLabel::CharpRational,
        };
        let params = match label {
            PresentationLabel::Char0Rational if p == 0 => PresentationParams::Char0 { n, r, s },
            PresentationLabel::CharpSchur if p != 0 && s == 0 => PresentationParams::Schur { n, d: r, p, m },
            PresentationLabel::CharpRational if p != 0 => PresentationParams::Rational { n, r, s, p, m },
            _ => return Err(Error::InvalidParams(format!("parameters do not fit {}", label.name()))),
        };
        Ok((label, params))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Char0Rational,
    CharpSchur,
    CharpRational,
}

impl From<LabelArg> for PresentationLabel {
    fn from(l: LabelArg) -> Self {
        match l {
            LabelArg::Char0Rational => PresentationLabel::Char0Rational,
            LabelArg::CharpSchur => PresentationLabel::CharpSchur,
            LabelArg::CharpRational => PresentationLabel::CharpRational,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    /// Λ(n,d), or Λ(n,r,s) when s > 0
    Lambda,
    /// dominant members of the above
    Dominant,
    PiPrime,
    PiDoublePrime,
    NuPrime,
}

#[derive(Args)]
struct WeightsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = SetArg::Lambda)]
    set: SetArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Clone, Default)]
struct OptionArgs {
    /// Keep only subsets with |S| <= n/2 in the char-0 subset family.
    #[arg(long)]
    subset_limit: bool,
    /// Use 0 <= j <= m+t in the rational subset family instead of m <= j <= m+t.
    #[arg(long)]
    literal_j_range: bool,
    /// Use 0 <= j < m+t in the Schur degree family instead of 0 <= j <= m+t.
    #[arg(long)]
    literal_i_range: bool,
}

impl OptionArgs {
    fn options(&self) -> PresentationOptions {
        PresentationOptions {
            subset_limit: self.subset_limit,
            j_range: if self.literal_j_range { JRange::Literal } else { JRange::Frobenius },
            i_range: if self.literal_i_range { IRange::Literal } else { IRange::Inclusive },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// n <= 3; d <= 3 or r,s <= 1; p in {2,3}; d < p^m <= 9
    Desk,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    label: Option<LabelArg>,
    #[arg(long, value_enum, conflicts_with_all = ["n", "label"])]
    preset: Option<Preset>,
    #[command(flatten)]
    options: OptionArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct PresentArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    label: Option<LabelArg>,
    #[command(flatten)]
    options: OptionArgs,
    /// json or text
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct RewriteArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "char", visible_alias = "p")]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// A word such as "x(2,1) x(1,2) binom(H1,1)"; may be repeated.
    #[arg(long)]
    word: Vec<String>,
    /// Number of random words, used when no --word is given.
    #[arg(long, default_value_t = 5)]
    random: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

/// A command's rendered output and whether every requested check passed.
struct Outcome {
    text: String,
    pass: bool,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::GridTooLarge(_) | Error::CapExceeded(_) | Error::StepCapExceeded { .. } => 4,
        Error::MeasureViolation(_) | Error::NotSaturated(_) => 2,
        _ => 3,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn weights(args: &WeightsArgs) -> Result<Outcome, Error> {
    let n = args.params.n()?;
    let (r, s) = args.params.rs()?;
    let set: WeightSet = if s == 0 {
        match args.set {
            SetArg::Lambda => enumerate_lambda(n, r),
            SetArg::Dominant => enumerate_dominant(n, r),
            _ => {
                let p = args.params.rs_params()?;
                rs_set(args.set, &p)?
            }
        }
    } else {
        rs_set(args.set, &args.params.rs_params()?)?
    };
    let text = match args.format {
        Format::Json => format!("{}\n", set.to_json()),
        Format::Table => set.iter().map(|w| format!("{w}\n")).collect(),
    };
    Ok(Outcome { text, pass: true })
}

fn rs_set(which: SetArg, p: &RSParams) -> Result<WeightSet, Error> {
    Ok(match which {
        SetArg::Lambda => enumerate_lambda_rs(p),
        SetArg::Dominant => enumerate_lambda_plus_rs(p),
        SetArg::PiPrime => pi_prime_set(p),
        SetArg::PiDoublePrime => pi_double_prime_set(p),
        SetArg::NuPrime => nu_prime_set(p)?,
    })
}

fn dims(args: &DimsArgs) -> Result<Outcome, Error> {
    let params = args.params.rs_params()?;
    let field = args.params.field()?;
    let lambda = enumerate_lambda_rs(&params).len();
    let module = TensorModule::new(params, field)?;
    let s0 = module.s0_dimension();
    let mut values = serde_json::Map::new();
    values.insert("lambda".into(), json!(lambda));
    values.insert("s0".into(), json!(s0));
    let mut pass = lambda == s0;
    let kind = match args.params.characteristic {
        0 => IdealKind::Char0Rs { params, max_subset: None },
        p if args.params.d.is_some() => IdealKind::CharpD { n: params.n, d: params.r, p, m: args.params.m },
        p => IdealKind::CharpRs { params, p, m: args.params.m },
    };
    let quotient = build_ideal(kind)?.quotient_dimension();
    values.insert("torus_quotient".into(), json!(quotient));
    pass &= quotient == lambda;
    if field == Field::Rational {
        let weyl = sum_of_squared_dimensions(&enumerate_lambda_plus_rs(&params))?;
        let closure = algebra_closure_dimension(&module.chevalley_generators()?, module.dim(), field, DEFAULT_CLOSURE_CAP)?;
        pass &= weyl == closure.into();
        values.insert("weyl_square_sum".into(), json!(weyl.to_string()));
        values.insert("closure".into(), json!(closure));
    }
    let text = match args.format {
        Format::Json => {
            let doc = json!({"n": params.n, "r": params.r, "s": params.s, "char": args.params.characteristic,
                "m": (args.params.characteristic != 0).then_some(args.params.m), "dimensions": values, "pass": pass});
            to_json(&doc)
        }
        Format::Table => {
            let mut t = format!("(n,r,s) = ({},{},{}), char {}\n", params.n, params.r, params.s, args.params.characteristic);
            let label = |k: &str| match k {
                "lambda" => "|Λ|",
                "s0" => "distinct weights of the module",
                "torus_quotient" => "torus quotient dimension",
                "weyl_square_sum" => "Σ dim²",
                _ => "closure",
            };
            for key in ["lambda", "s0", "torus_quotient", "weyl_square_sum", "closure"] {
                if let Some(v) = values.get(key) {
                    let v = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                    let _ = writeln!(t, "{} = {v}", label(key));
                }
            }
            let _ = writeln!(t, "{}", if pass { "PASS" } else { "FAIL" });
            t
        }
    };
    Ok(Outcome { text, pass })
}

fn verify(args: &VerifyArgs, verbose: bool) -> Result<Outcome, Error> {
    let cases = match args.preset {
        Some(Preset::Desk) => desk_grid(),
        None => vec![args.params.presentation(args.label)?],
    };
    let options = args.options.options();
    let mut reports = Vec::new();
    for (label, params) in cases {
        let pres = build_presentation(label, params, options)?;
        let report = verify_presentation(&pres)?;
        if verbose {
            eprintln!("{} {params:?}: {:.2?}", label.name(), report.elapsed);
        }
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = match args.format {
        Format::Json => to_json(&reports),
        Format::Table => {
            let mut t = String::new();
            for r in &reports {
                let _ = writeln!(
                    t,
                    "{} {} {}: {} relations, {} derived, {} kernel generators, {} dimension checks",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.label.name(),
                    serde_json::to_string(&r.params).expect("params serialize"),
                    r.relations.len(),
                    r.derived.len(),
                    r.kernel.checks.len(),
                    r.dimensions.len(),
                );
                for f in r.failures() {
                    let _ = writeln!(t, "    {f}");
                }
            }
            let _ = writeln!(t, "{} of {} presentations pass", reports.iter().filter(|r| r.pass).count(), reports.len());
            t
        }
    };
    Ok(Outcome { text, pass })
}

fn present(args: &PresentArgs) -> Result<Outcome, Error> {
    let format: ExportFormat = args.format.parse()?;
    let (label, params) = args.params.presentation(args.label)?;
    let pres = build_presentation(label, params, args.options.options())?;
    Ok(Outcome { text: export_presentation(&pres, format)?, pass: true })
}

fn rewrite_demo(args: &RewriteArgs) -> Result<Outcome, Error> {
    let ctx = RewriteContext::new(args.n, args.p, args.m)?;
    let field = ctx.field();
    let words: Vec<GeneratorWord> = if args.word.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        (0..args.random).map(|_| GeneratorWord::random(&mut rng, &ctx, args.max_len)).collect()
    } else {
        args.word.iter().map(|w| GeneratorWord::parse(w)).collect::<Result<_, _>>()?
    };
    let top = (ctx.q() - 1).min(3) as i64;
    let mut modules = Vec::new();
    for d in 1..=top {
        modules.push((format!("E^{d}"), TensorModule::polynomial(args.n, d, field)?));
    }
    modules.push(("E^{1,1}".to_string(), TensorModule::new(RSParams::new(args.n, 1, 1)?, field)?));
    let mut pass = true;
    let mut entries = Vec::new();
    let mut t = String::new();
    for w in &words {
        let (nf, stats) = pbw_rewrite_with_stats(w, &ctx, STEP_CAP)?;
        let mut certified = serde_json::Map::new();
        for (name, module) in &modules {
            let ok = certify_rewrite(w, &nf, &ctx, module)?;
            pass &= ok;
            certified.insert(name.clone(), json!(ok));
        }
        let all = certified.values().all(|v| v == &json!(true));
        let _ = writeln!(t, "word:        {w}");
        let _ = writeln!(t, "normal form: {}", nf.render(&ctx));
        let _ = writeln!(t, "steps:       {}", stats.steps);
        let names: Vec<&str> = certified.keys().map(String::as_str).collect();
        let _ = writeln!(t, "certified:   {} on {}\n", if all { "yes" } else { "NO" }, names.join(", "));
        let nf_json: serde_json::Value = serde_json::from_str(&nf.to_json(&ctx)).expect("normal form JSON");
        entries.push(json!({"word": w.to_string(), "letters": w, "normal_form": nf_json, "steps": stats.steps, "certified": certified}));
    }
    let text = match args.format {
        Format::Json => to_json(&json!({"n": args.n, "p": args.p, "m": args.m, "words": entries, "pass": pass})),
        Format::Table => t,
    };
    Ok(Outcome { text, pass })
}

fn counterexample(args: &CounterexampleArgs) -> Result<Outcome, Error> {
    let p = RSParams::new(4, 1, 1)?;
    let lambda = Weight::new(vec![2, 2, 0, 0]);
    let in_pi_prime = pi_prime_membership(&lambda, &p)?;
    let in_pi_double = pi_double_prime_membership(&lambda, &p)?;
    let above = SignSupport::of(&lambda, p.s).above_s_positions;
    let lhs: i64 = above.iter().map(|i| lambda.0[*i]).sum();
    let rhs = p.r + above.len() as i64 * p.s;
    let mu = lambda.shifted(-p.s);
    let mu_in = in_lambda_rs(&mu, &p);
    let pass = in_pi_prime && !in_pi_double && lhs == 4 && rhs == 3 && !mu_in;
    let r_plus: Vec<usize> = above.iter().map(|i| i + 1).collect();
    let text = match args.format {
        Format::Json => to_json(&json!({
            "params": p, "lambda": lambda, "pi_prime": in_pi_prime, "pi_double_prime": in_pi_double,
            "r_plus": r_plus, "sum_over_r_plus": lhs, "bound": rhs, "shifted": mu, "shifted_in_lambda_rs": mu_in, "pass": pass,
        })),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(t, "(n,r,s) = {p}, λ = {lambda}");
            let _ = writeln!(t, "λ ∈ π′: {} (all entries in [0, r+s] = [0,{}])", yes(in_pi_prime), p.r + p.s);
            let _ = writeln!(t, "R⁺ = {{i : λ_i > s}} = {r_plus:?}, |R⁺| = {}", r_plus.len());
            let _ = writeln!(t, "λ ∈ π″: {} (Σ_(i∈R⁺) λ_i = {lhs} > {rhs} = r + |R⁺|s)", yes(in_pi_double));
            let _ = writeln!(t, "λ - sν = {mu} ∈ Λ(4,1,1): {} (μ_1+μ_2 = {} > r = {})", yes(mu_in), mu.0[0] + mu.0[1], p.r);
            let _ = writeln!(t, "{}", if pass { "PASS" } else { "FAIL" });
            t
        }
    };
    Ok(Outcome { text, pass })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Weights(a) => weights(a),
        Command::Dims(a) => dims(a),
        Command::Verify(a) => verify(a, cli.verbose),
        Command::Present(a) => present(a),
        Command::RewriteDemo(a) => rewrite_demo(a),
        Command::Counterexample(a) => counterexample(a),
    };
    if cli.verbose {
        eprintln!("elapsed: {:.3?}", start.elapsed());
    }
    match result {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(3);
            }
            ExitCode::from(if out.pass { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
