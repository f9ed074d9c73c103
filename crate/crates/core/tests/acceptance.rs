//! The twelve acceptance criteria. Each prints one PASS/FAIL line with its
//! elapsed time; a criterion also fails if it overruns its time budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use schur_core::arith::{binom, binom_mod_p_i64, binomial_mod_p_lucas, kummer_carry_count, valuation, Field, Prime};
use schur_core::presentation::{build_presentation, desk_grid, verify_presentation};
use schur_core::rewrite::{certify_rewrite, pbw_rewrite_with_stats, GeneratorWord, RewriteContext, STEP_CAP};
use schur_core::tensor::{algebra_closure_dimension, TensorModule, DEFAULT_CLOSURE_CAP};
use schur_core::torus::{build_ideal, idempotent_h, shifted_binomial, IdealKind, TorusAlgebraContext, TorusElement, TorusMonomial};
use schur_core::weights::{
    box_points, enumerate_dominant, enumerate_lambda_plus_rs, enumerate_lambda_rs, in_lambda_rs, lambda_plus_rs_condition,
    lambda_rs_condition, nu_prime_set, pi_double_prime_membership, pi_double_prime_set, pi_prime_membership,
    shift_bijection, sum_of_squared_dimensions, weyl_dimension, RSParams, ShiftDirection, Variant, Weight, WeightSet,
};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn donkin() -> Check {
    let p = RSParams::new(4, 1, 1).map_err(err)?;
    let lambda = Weight::new(vec![2, 2, 0, 0]);
    ensure(pi_prime_membership(&lambda, &p).map_err(err)?, || "λ should lie in π′".into())?;
    ensure(!pi_double_prime_membership(&lambda, &p).map_err(err)?, || "λ should not lie in π″".into())?;
    let above: Vec<i64> = lambda.0.iter().copied().filter(|v| *v > p.s).collect();
    ensure(above.len() == 2, || format!("|R⁺| = {}", above.len()))?;
    let lhs: i64 = above.iter().sum();
    let rhs = p.r + above.len() as i64 * p.s;
    ensure(lhs == 4 && rhs == 3, || format!("expected 4 > 3, got {lhs} > {rhs}"))?;
    // the shifted weight violates the subset bound and is outside the locus
    let mu = Weight::new(vec![1, 1, -1, -1]);
    ensure(!in_lambda_rs(&mu, &p), || "μ should not lie in Λ(4,1,1)".into())?;
    let ideal = build_ideal(IdealKind::Char0Rs { params: p, max_subset: None }).map_err(err)?;
    ensure(!ideal.vanishing_locus.contains(&mu), || "μ should lie outside the char-0 locus".into())
}

fn lambda_equivalences() -> Check {
    for n in 2..=4usize {
        for r in 0..=3 {
            for s in 0..=3 {
                let p = RSParams::new(n, r, s).map_err(err)?;
                let mut members = BTreeSet::new();
                for pt in box_points(n, -(s + 2), r + 2) {
                    let w = Weight::new(pt);
                    let truth = in_lambda_rs(&w, &p);
                    if truth {
                        members.insert(w.clone());
                    }
                    for v in Variant::ALL {
                        let got = lambda_rs_condition(&w, &p, v).map_err(err)?;
                        ensure(got == truth, || format!("{v:?} disagrees at {w} for {p}"))?;
                    }
                    if w.is_dominant() {
                        for v in Variant::ALL {
                            let got = lambda_plus_rs_condition(&w, &p, v).map_err(err)?;
                            ensure(got == truth, || format!("prefix {v:?} disagrees at {w} for {p}"))?;
                        }
                    }
                }
                let listed: BTreeSet<Weight> = enumerate_lambda_rs(&p).iter().cloned().collect();
                ensure(listed == members, || format!("enumeration of Λ{p} differs from the definition"))?;
            }
        }
    }
    Ok(())
}

fn shift_bijection_check() -> Check {
    for n in 2..=4usize {
        for r in 0..=3 {
            for s in 0..=3 {
                let p = RSParams::new(n, r, s).map_err(err)?;
                let source = enumerate_lambda_plus_rs(&p);
                let target = pi_double_prime_set(&p);
                let mut image = BTreeSet::new();
                for mu in &source {
                    let lam = shift_bijection(mu, &p, ShiftDirection::ToPiDoublePrime).map_err(err)?;
                    ensure(target.contains(&lam), || format!("{mu} maps to {lam} outside π″ for {p}"))?;
                    let back = shift_bijection(&lam, &p, ShiftDirection::ToLambdaPlusRs).map_err(err)?;
                    ensure(&back == mu, || format!("{mu} -> {lam} -> {back} for {p}"))?;
                    image.insert(lam);
                }
                ensure(image.len() == source.len() && image.len() == target.len(), || {
                    format!("{p}: |Λ⁺| = {}, |image| = {}, |π″| = {}", source.len(), image.len(), target.len())
                })?;
            }
        }
    }
    Ok(())
}

fn binomial_suite() -> Check {
    let primes: Vec<Prime> = [2u64, 3, 5, 7].iter().map(|p| Prime::new(*p).unwrap()).collect();
    let mut row = vec![BigInt::one()];
    for a in 0..=2000u64 {
        if a > 0 {
            let mut next = vec![BigInt::one(); a as usize + 1];
            for b in 1..a as usize {
                next[b] = &row[b - 1] + &row[b];
            }
            row = next;
        }
        row.par_iter().enumerate().try_for_each(|(b, exact)| -> Check {
            let b = b as u64;
            for p in &primes {
                let lucas = binomial_mod_p_lucas(BigUint::from(a), BigUint::from(b), *p);
                let expected = Field::Prime(*p).from_bigint(exact);
                ensure(lucas == expected, || format!("Lucas fails at ({a},{b}) mod {}", p.get()))?;
                let k = kummer_carry_count(BigUint::from(a), BigUint::from(b), *p).map_err(err)? as u32;
                // p^k divides exactly: p^k | binom(a,b) and p^(k+1) does not
                let pk = p.get().pow(k);
                let rem = exact % (pk * p.get());
                let exact_power = (&rem % pk).is_zero() && !rem.is_zero();
                ensure(exact_power, || format!("Kummer fails at ({a},{b}) for p={}", p.get()))?;
            }
            Ok(())
        })?;
    }
    for (a, b) in [(6u64, 3u64), (7, 3), (2000, 1000)] {
        let v = valuation(&binom(a as i64, b), primes[0]).unwrap_or(0);
        ensure(v == kummer_carry_count(a, b, primes[0]).map_err(err)?, || format!("valuation of binom({a},{b})"))?;
    }
    for a in -50i64..=50 {
        for b in 1..=50u64 {
            ensure(binom(a, b) == binom(a - 1, b) + binom(a - 1, b - 1), || format!("Pascal fails at ({a},{b})"))?;
        }
    }
    let ctx = TorusAlgebraContext::char_zero(2, 3, 3).map_err(err)?;
    for c in -3i64..=3 {
        for j in 0..=4u64 {
            let x = shifted_binomial(&ctx, 0, c, j).map_err(err)?;
            for l in -3i64..=3 {
                let got = x.evaluate(&[l, 0]).map_err(err)?;
                let want = Field::Rational.from_bigint(&binom(l + c, j));
                ensure(got == want, || format!("shift fails for c={c}, j={j} at {l}"))?;
            }
        }
    }
    Ok(())
}

fn boundedness() -> Check {
    for p in [2u64, 3] {
        for m in 1..=2u32 {
            let q = p.pow(m) as i64;
            let span = 2 * m; // ⌈log_p q²⌉
            for l in 0..=2 * m {
                for a in -q..=q * q {
                    let zero_everywhere = (l..=l + span).all(|j| binom_mod_p_i64(a, p.pow(j), p) == 0);
                    let expected = 0 <= a && a < p.pow(l) as i64;
                    ensure(zero_everywhere == expected, || format!("p={p}, m={m}, l={l}, a={a}"))?;
                    if a < 0 {
                        // the witness j = k with p^k >= -a and k >= l has value ±1
                        let k = l.max(m);
                        let v = binom_mod_p_i64(a, p.pow(k), p);
                        ensure(v == 1 || v == p - 1, || format!("a={a}: binom(a, p^{k}) = {v} mod {p}"))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn idempotents() -> Check {
    let cases = [(2u64, 1u32, 1usize), (2, 1, 2), (3, 1, 1), (3, 1, 2), (2, 2, 2)];
    for (p, m, n) in cases {
        let ctx = TorusAlgebraContext::char_p(n, Prime::new(p).map_err(err)?, m).map_err(err)?;
        let hs: Vec<(Vec<i64>, TorusElement)> = ctx
            .points()
            .map(|b| {
                let mono = TorusMonomial(b.iter().map(|v| *v as u32).collect());
                idempotent_h(&ctx, &mono).map(|h| (b, h))
            })
            .collect::<Result<_, _>>()
            .map_err(err)?;
        ensure(hs.len() as u64 == ctx.q().unwrap().pow(n as u32), || "wrong number of idempotents".into())?;
        let mut total = TorusElement::zero(&ctx);
        for (a, ha) in &hs {
            ensure(!ha.is_zero(), || format!("h_{a:?} is zero"))?;
            for (b, hb) in &hs {
                let prod = ha.multiply(hb).map_err(err)?;
                let want = if a == b { ha.clone() } else { TorusElement::zero(&ctx) };
                ensure(prod == want, || format!("h_{a:?} h_{b:?} wrong for p={p}, m={m}, n={n}"))?;
            }
            // primitive: its grid function is a single point indicator
            let support = ha.to_grid().values().iter().filter(|v| !v.is_zero()).count();
            ensure(support == 1, || format!("h_{a:?} has support {support}"))?;
            total = total.add(ha).map_err(err)?;
        }
        ensure(total == TorusElement::one(&ctx), || format!("Σh_b != 1 for p={p}, m={m}, n={n}"))?;
    }
    Ok(())
}

fn dimension_theorems() -> Check {
    let mut kinds = Vec::new();
    for n in 1..=3usize {
        for r in 0..=2 {
            for s in 0..=2 {
                if n >= 2 {
                    kinds.push(IdealKind::Char0Rs { params: RSParams::new(n, r, s).map_err(err)?, max_subset: None });
                }
            }
        }
        for p in [2u64, 3, 5] {
            let mut m = 1u32;
            while (p.pow(m) as u128).pow(n as u32) <= 1_000_000 {
                let q = p.pow(m) as i64;
                for d in 0..=4 {
                    if d < q {
                        kinds.push(IdealKind::CharpD { n, d, p, m });
                    }
                }
                for r in 0..=2 {
                    for s in 0..=2 {
                        if n >= 2 && r + (n as i64 - 1) * s < q {
                            kinds.push(IdealKind::CharpRs { params: RSParams::new(n, r, s).map_err(err)?, p, m });
                        }
                    }
                }
                m += 1;
            }
        }
    }
    kinds.par_iter().try_for_each(|kind| -> Check {
        let ideal = build_ideal(*kind).map_err(err)?;
        let (params, field) = match *kind {
            IdealKind::Char0Rs { params, .. } => (params, Field::Rational),
            IdealKind::CharpD { n, d, p, .. } => (RSParams::new(n, d, 0).map_err(err)?, Field::prime(p).map_err(err)?),
            IdealKind::CharpRs { params, p, .. } => (params, Field::prime(p).map_err(err)?),
        };
        let lambda = enumerate_lambda_rs(&params).len();
        let module = TensorModule::new(params, field).map_err(err)?;
        let quotient = ideal.quotient_dimension();
        let s0 = module.s0_dimension();
        ensure(quotient == lambda && lambda == s0, || format!("{kind:?}: quotient {quotient}, |Λ| {lambda}, s0 {s0}"))?;
        let locus: BTreeSet<&Weight> = ideal.vanishing_locus.iter().collect();
        let weights = module.weights();
        let weights: BTreeSet<&Weight> = weights.iter().collect();
        ensure(locus == weights, || format!("{kind:?}: locus differs from the module weights"))
    })
}

fn relation_sweep() -> Check {
    for (label, params) in desk_grid() {
        let pres = build_presentation(label, params, Default::default()).map_err(err)?;
        let report = verify_presentation(&pres).map_err(err)?;
        ensure(report.pass, || format!("{} {params:?}: {:?}", label.name(), report.failures()))?;
    }
    Ok(())
}

fn closure_dimensions() -> Check {
    let cases = [((2usize, 2i64, 0i64), 10usize), ((2, 3, 0), 20), ((3, 2, 0), 45), ((2, 1, 1), 10)];
    for ((n, r, s), expected) in cases {
        let params = RSParams::new(n, r, s).map_err(err)?;
        let module = TensorModule::new(params, Field::Rational).map_err(err)?;
        let gens = module.chevalley_generators().map_err(err)?;
        let dim = algebra_closure_dimension(&gens, module.dim(), Field::Rational, DEFAULT_CLOSURE_CAP).map_err(err)?;
        let weyl = sum_of_squared_dimensions(&enumerate_lambda_plus_rs(&params)).map_err(err)?;
        ensure(dim == expected && weyl == BigInt::from(expected), || format!("({n},{r},{s}): closure {dim}, Weyl sum {weyl}"))?;
    }
    Ok(())
}

fn pbw_certification() -> Check {
    let configs = [(2usize, 2u64, 1u32), (2, 2, 2), (2, 2, 3), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 2, 2), (3, 2, 3), (3, 3, 1), (3, 3, 2)];
    configs.par_iter().try_for_each(|&(n, p, m)| -> Check {
        let ctx = RewriteContext::new(n, p, m).map_err(err)?;
        let field = ctx.field();
        let top = (ctx.q() - 1).min(3) as i64;
        let mut modules: Vec<TensorModule> = (1..=top).map(|d| TensorModule::polynomial(n, d, field)).collect::<Result<_, _>>().map_err(err)?;
        modules.push(TensorModule::new(RSParams::new(n, 1, 1).map_err(err)?, field).map_err(err)?);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 * n as u64 + 10 * p + u64::from(m));
        for _ in 0..200 {
            let w = GeneratorWord::random(&mut rng, &ctx, 6);
            let (nf, stats) = pbw_rewrite_with_stats(&w, &ctx, STEP_CAP).map_err(|e| format!("{w}: {e}"))?;
            ensure(stats.measure_checked, || "measure not checked".into())?;
            for module in &modules {
                ensure(certify_rewrite(&w, &nf, &ctx, module).map_err(err)?, || {
                    format!("{w} fails on a module of dimension {} for (n,p,m)=({n},{p},{m})", module.dim())
                })?;
            }
        }
        Ok(())
    })
}

fn cellular_bookkeeping() -> Check {
    for n in 2..=4usize {
        for r in 0..=2 {
            for s in 0..=2 {
                let p = RSParams::new(n, r, s).map_err(err)?;
                let nu = nu_prime_set(&p).map_err(|e| format!("{p}: {e}"))?;
                let pi = pi_double_prime_set(&p);
                let ambient = enumerate_dominant(n, p.shifted_degree());
                ensure(nu.len() + pi.len() == ambient.len(), || format!("{p}: ν′ and π″ do not partition"))?;
                let lhs = sum_of_squared_dimensions(&pi).map_err(err)?;
                let rhs = sum_of_squared_dimensions(&enumerate_lambda_plus_rs(&p)).map_err(err)?;
                ensure(lhs == rhs, || format!("{p}: Σ_π″ = {lhs}, Σ_Λ⁺ = {rhs}"))?;
                for w in pi.iter() {
                    weyl_dimension(w).map_err(err)?;
                }
            }
        }
    }
    Ok(())
}

fn subset_remark() -> Check {
    for n in 2..=4usize {
        for r in 0..=2 {
            for s in 0..=2 {
                let params = RSParams::new(n, r, s).map_err(err)?;
                let full = build_ideal(IdealKind::Char0Rs { params, max_subset: None }).map_err(err)?;
                let half = build_ideal(IdealKind::Char0Rs { params, max_subset: Some(n / 2) }).map_err(err)?;
                ensure(full.vanishing_locus == half.vanishing_locus, || format!("{params}: loci differ"))?;
                let expected: WeightSet = enumerate_lambda_rs(&params);
                ensure(full.vanishing_locus.len() == expected.len(), || format!("{params}: locus size"))?;
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, u64, fn() -> Check)> = vec![
        ("Donkin counterexample (4,1,1)", 1, donkin),
        ("Λ(n,r,s) predicate equivalences", 10, lambda_equivalences),
        ("Λ⁺(n,r,s) ↔ π″ shift bijection", 5, shift_bijection_check),
        ("binomial suite: Lucas, Kummer, Pascal, shifts", 30, binomial_suite),
        ("boundedness criterion for binom(a, p^j)", 5, boundedness),
        ("torus idempotents h_b", 10, idempotents),
        ("quotient dimension = |Λ| = s0 dimension", 60, dimension_theorems),
        ("relation sweep and kernel vanishing on the desk grid", 120, relation_sweep),
        ("char-0 closure dimensions", 60, closure_dimensions),
        ("PBW rewriting certified on tensor modules", 120, pbw_certification),
        ("ν′ saturation and dimension identity", 10, cellular_bookkeeping),
        ("|S| <= n/2 subset generators give the same locus", 5, subset_remark),
    ];
    let mut failed = Vec::new();
    for (idx, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed < Duration::from_secs(limit), || format!("took {elapsed:.2?}, budget {limit} s"))
        });
        match &outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({elapsed:.2?})", idx + 1),
            Err(why) => {
                println!("criterion {:>2}: FAIL  {name} ({elapsed:.2?}): {why}", idx + 1);
                failed.push(idx + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
