//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;

use lpn::algebra::{check_axioms, AtomId};
use lpn::complexity::{beta_chain, beta_lower_bound, pigeonhole_pair, run_pipeline};
use lpn::lpn::{build_lpn, LpnParams};
use lpn::repr::{
    build_affine, build_doubled, build_power, degree_audit, verify_full, verify_weak, Budget, Clause,
};
use lpn::term::{equation_length, falsify, parse_equation, ra_axioms, FalsifyMode, FalsifyOutcome};
use lpn::xi::{
    affine_power, build_xi_seeded, check_xi_fast, eval_bounds, power_parameters, replay_certificate, search_weakrep,
    sufficiency_thresholds, SearchMode,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(t)
}

fn c1() -> Outcome {
    let t0 = Instant::now();
    let a = build_lpn(LpnParams::new(3, 2).unwrap()).unwrap();
    ensure!(a.atom_count() == 7, "atom count {}", a.atom_count());
    ensure!(a.element_count() == Some(128), "element count {:?}", a.element_count());
    let r = check_axioms(&a);
    ensure!(r.all_pass(), "axioms: {:?}", r.first_failure());
    let t = within(t0, Duration::from_secs(1))?;
    Ok(format!("L(3,2): 7 atoms, 128 elements, all axioms pass in {t:?}"))
}

fn c2() -> Outcome {
    let t0 = Instant::now();
    let b = Budget::default();
    for q in [3usize, 4, 5, 7, 8, 9] {
        let s = build_affine(q).unwrap();
        let v = verify_full(&s, &b).unwrap();
        ensure!(v.pass, "q={q}: {}", v.summary(&s));
        let audit = degree_audit(&s, &b).unwrap();
        for d in &audit.degrees {
            ensure!(d.min == q - 1 && d.max == q - 1, "q={q}: degree of {} in [{}, {}]", d.atom, d.min, d.max);
        }
        ensure!(audit.lemma_d.as_ref().is_some_and(|l| l.a_degrees_equal_p_minus_1), "q={q}: degree condition");
    }
    let t = within(t0, Duration::from_secs(10))?;
    Ok(format!("affine q in {{3,4,5,7,8,9}} full representations, all a-degrees q-1, {t:?}"))
}

fn c3() -> Outcome {
    let t0 = Instant::now();
    let s = build_doubled(3).unwrap();
    ensure!(s.base_size() == 18, "base {}", s.base_size());
    let v = verify_full(&s, &Budget::default()).unwrap();
    ensure!(v.pass, "{}", v.summary(&s));
    let t = within(t0, Duration::from_secs(1))?;
    Ok(format!("doubled q=3: full representation on 18 points, {t:?}"))
}

fn c4() -> Outcome {
    let t0 = Instant::now();
    let b = Budget::default();
    let s = build_power(Arc::new(build_affine(3).unwrap()), 2).unwrap();
    ensure!(s.base_size() == 81, "base {}", s.base_size());
    let weak = verify_weak(&s, &b).unwrap();
    ensure!(weak.pass, "weak: {}", weak.summary(&s));
    let full = verify_full(&s, &b).unwrap();
    ensure!(!full.pass, "full verification passed");
    let f = full.failure.as_ref().unwrap();
    ensure!(f.clause == Clause::Complement, "clause {:?}", f.clause);
    let (u, v) = f.points.ok_or("no certificate points")?;
    let alg = s.algebra();
    for a in 0..alg.atom_count() {
        let img = s.image(alg.atom(AtomId(a))).unwrap();
        ensure!(!img.get(u, v), "certificate pair ({u},{v}) lies in image of {}", alg.atom_name(AtomId(a)));
    }
    let t = within(t0, Duration::from_secs(30))?;
    Ok(format!(
        "power m=2 on 81 points: weak PASS, full FAIL, pair ({u},{v}) in no atom image, {t:?}"
    ))
}

fn c5() -> Outcome {
    let t0 = Instant::now();
    let b = Budget::default();
    let mut runs = Vec::new();
    for p in [3usize, 4, 5] {
        for n in [2usize, 3] {
            runs.push((p, n, 1u32, 80u64));
        }
    }
    for n in [2usize, 3] {
        // p = 4, 5 at m = 2 have d = 256, 625 > 200.
        runs.push((3, n, 2, 20));
    }
    let (mut total, mut passes, mut replayed) = (0, 0, 0);
    for (p, n, m, seeds) in runs {
        let theta = affine_power(p, m).unwrap();
        ensure!(theta.base_size() <= 200, "d = {}", theta.base_size());
        for seed in 0..seeds {
            let x = build_xi_seeded(theta.clone(), n, seed).unwrap();
            let fast = check_xi_fast(&x, &b).unwrap();
            let generic = verify_weak(&x, &b).unwrap();
            ensure!(
                fast.pass == generic.pass,
                "disagreement at p={p} n={n} m={m} seed={seed}: fast {} generic {}",
                fast.pass,
                generic.pass
            );
            if let Some(f) = &fast.failure {
                ensure!(replay_certificate(&x, f, &b).unwrap(), "certificate does not replay at seed {seed}");
                replayed += 1;
            }
            total += 1;
            passes += fast.pass as usize;
        }
    }
    ensure!(total >= 500, "only {total} instances");
    Ok(format!(
        "{total} instances, fast = generic in all, {passes} pass, {replayed} failure certificates replayed, {:?}",
        t0.elapsed()
    ))
}

/// Independent exact oracle for the two inequalities.
fn exact_oracle(p: u64, n: u64, d: u64, k: u64) -> (bool, bool) {
    let big = BigUint::from;
    let n2 = big(n * n);
    let one = BigUint::one();
    let i1 = n2.pow(d as u32) > big(4) * &n2 * big(d) * big(d - 1) * (&n2 - &one).pow(d as u32);
    let i2 = big(n).pow(k as u32) > big(4) * big(p + 1) * big(n) * big(d) * big(d) * big(n - 1).pow(k as u32);
    (i1, i2)
}

fn first_true(mut f: impl FnMut(u64) -> bool, from: u64) -> u64 {
    (from..).find(|&x| f(x)).unwrap()
}

fn c6() -> Outcome {
    let mut points = 0;
    let mut flips = 0;
    for p in [3u64, 4, 5, 7, 9] {
        for n in [2u64, 3] {
            // d near the flip of (1), k near the flip of (2) at that d.
            let d0 = first_true(|d| exact_oracle(p, n, d, 1).0, 2);
            for d in d0 - 2..=d0 + 2 {
                let k0 = first_true(|k| exact_oracle(p, n, d, k).1, 1);
                for k in [k0 - 1, k0, k0 + 1, 2 * k0] {
                    let r = eval_bounds(p, n, d, k);
                    let (e1, e2) = exact_oracle(p, n, d, k);
                    ensure!(
                        r.ineq1_holds == Some(e1) && r.ineq2_holds == Some(e2),
                        "p={p} n={n} d={d} k={k}: log {:?}/{:?} exact {e1}/{e2}",
                        r.ineq1_holds,
                        r.ineq2_holds
                    );
                    flips += (e1 != (d > d0 - 1)) as usize;
                    points += 1;
                }
            }
        }
    }
    ensure!(points == 200, "grid has {points} points");
    ensure!(flips == 0, "inequality (1) is not monotone in d");

    // Sufficient m: every m above the three thresholds.
    let mut m_checked = 0;
    for p in [3u64, 5, 7, 9] {
        for n in [2u64, 3] {
            let t = sufficiency_thresholds(p, n);
            for m in t.m_guaranteed..t.m_guaranteed + 12 {
                let (l1, l2) = log_margins_f64(p, n, m as i32);
                ensure!(l1 > 0.0 && l2 > 0.0, "p={p} n={n} m={m}: margins {l1} {l2}");
                if let Some((d, k)) = power_parameters(p, m as u32) {
                    ensure!(eval_bounds(p, n, d, k).both_hold(), "p={p} n={n} m={m}: library verdict");
                }
                m_checked += 1;
            }
        }
    }
    // Sufficient p: d = p^2, k = p-1.
    let mut p_checked = 0;
    for n in [2u64, 3] {
        let t = sufficiency_thresholds(3, n);
        let thr = t.p_thresholds[0].max(t.p_thresholds[1]);
        for p in (thr + 1..thr + 100).chain([2 * thr, 10 * thr, 1_000_003]) {
            let r = eval_bounds(p, n, p * p, p - 1);
            ensure!(r.both_hold(), "n={n} p={p}: {:?}", r);
            p_checked += 1;
        }
    }
    Ok(format!(
        "{points} grid points log = exact; {m_checked} (p,n,m) above the m thresholds and {p_checked} p above the p thresholds satisfy both"
    ))
}

/// Log margins at `d = p^(2m)`, `k = (p-1)^m` without integer overflow.
fn log_margins_f64(p: u64, n: u64, m: i32) -> (f64, f64) {
    let (pf, nf) = (p as f64, n as f64);
    let d = pf.powi(2 * m);
    let k = (pf - 1.0).powi(m);
    let l1 = d * (nf * nf / (nf * nf - 1.0)).ln() - (4.0 * nf * nf * d * (d - 1.0)).ln();
    let l2 = k * (nf / (nf - 1.0)).ln() - (4.0 * (pf + 1.0) * nf * d * d).ln();
    (l1, l2)
}

fn c7() -> Outcome {
    let b = Budget::default();
    let seeds = 0..32u64;
    let mut lines = Vec::new();
    for m in [1u32, 2, 3] {
        let mode = if m <= 2 { SearchMode::Strict } else { SearchMode::Fast };
        let r1 = search_weakrep(3, 2, m, seeds.clone(), mode, &b).map_err(|e| e.to_string())?;
        let r2 = search_weakrep(3, 2, m, seeds.clone(), SearchMode::Fast, &b).map_err(|e| e.to_string())?;
        for (x, y) in r1.entries.iter().zip(&r2.entries) {
            ensure!(
                (x.seed, x.pass, x.condition, x.points) == (y.seed, y.pass, y.condition, y.points),
                "m={m} seed {} not deterministic",
                x.seed
            );
        }
        if m <= 2 {
            ensure!(r1.entries.iter().all(|e| e.strict_pass == Some(e.pass)), "m={m}: strict disagreement");
        }
        let passes = r1.entries.iter().filter(|e| e.pass).count();
        lines.push(format!("m={m}: {passes}/32 pass"));
    }
    Ok(format!("(p,n)=(3,2) seeds 0..32: {}", lines.join(", ")))
}

fn c8() -> Outcome {
    let t0 = Instant::now();
    let mut parts = Vec::new();
    for gamma in [1u32, 2, 3] {
        let r = run_pipeline(gamma, 100, 0, None).map_err(|e| e.to_string())?;
        ensure!(
            r.passed == 100,
            "gamma={gamma}: {} of 100; first failure {:?}",
            r.passed,
            r.trials.iter().find(|t| !t.ok)
        );
        ensure!(r.trials.iter().all(|t| t.pair.is_some()), "gamma={gamma}: pigeonhole failed");
        parts.push(format!("gamma={gamma} L({},{})->L({},{})", r.p, r.n, r.target_p, r.n));
    }
    // pigeonhole on a fixed example as a sanity anchor
    let a = build_lpn(LpnParams::new(5, 3).unwrap()).unwrap();
    let g = [a.parse_element("a0").unwrap(), a.parse_element("a0+a1+t1").unwrap()];
    ensure!(pigeonhole_pair(&a, &g).unwrap() == (2, 3), "pigeonhole example");
    let t = within(t0, Duration::from_secs(60))?;
    Ok(format!("300/300 embeddings verified ({}), {t:?}", parts.join(", ")))
}

fn c9() -> Outcome {
    let a = build_lpn(LpnParams::new(3, 2).unwrap()).unwrap();
    let eq = parse_equation("x1;x1 = x1").unwrap();
    let out = falsify(&eq, &a, FalsifyMode::exhaustive()).unwrap();
    let FalsifyOutcome::Falsified { assignment } = &out else {
        return Err(format!("x1;x1 = x1 not falsified: {out:?}"));
    };
    let x = assignment[0];
    ensure!(a.compose_bits(x, x) != x, "witness does not falsify");
    ensure!(x <= 1 << 1, "witness {} comes after a0", a.format_bits(x));
    for (name, ax) in ra_axioms() {
        let r = falsify(&ax, &a, FalsifyMode::exhaustive()).unwrap();
        ensure!(r == FalsifyOutcome::Valid, "{name}: {}", r.render(&a));
    }
    let len = equation_length(&parse_equation("(x1+x2)&x3 = x1&x3 + x2&x3").unwrap());
    ensure!(len == 12, "length {len}");
    Ok(format!(
        "x1;x1 = x1 falsified by {}; {} axioms VALID; distributive law length 12",
        out.render(&a),
        ra_axioms().len()
    ))
}

fn c10() -> Outcome {
    let b7 = beta_lower_bound(&BigUint::from(128u32)).unwrap();
    ensure!((b7 - 3f64.log2()).abs() <= 1e-12, "beta(2^7) = {b7}");
    let mut prev = f64::NEG_INFINITY;
    for e in 7..=2000u32 {
        let m = BigUint::from(1u8) << e;
        for v in [m.clone(), &m + BigUint::from(e), (&m << 1u32) - BigUint::one()] {
            let b = beta_lower_bound(&v).unwrap();
            ensure!(b >= prev, "not monotone at 2^{e}");
            prev = b;
        }
    }
    let rows = beta_chain(97);
    ensure!(rows.len() == 29, "{} odd prime powers up to 97", rows.len());
    if let Some(r) = rows.iter().find(|r| !r.holds) {
        return Err(format!("chain fails at p={}: {} >= {}", r.p, r.beta, r.log2_p_plus_1));
    }
    Ok(format!("beta(2^7) = log2 3, monotone on 5982 samples, chain holds for {} p <= 97", rows.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("L(3,2) construction", c1),
        ("affine representations", c2),
        ("doubling", c3),
        ("power is weak, not full", c4),
        ("oracle equivalence", c5),
        ("bounds", c6),
        ("weak-representation seed sweep", c7),
        ("subalgebra embedding pipeline", c8),
        ("equation machinery", c9),
        ("beta bound", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
