//! The `lpn` command-line tool. Every subcommand delegates to one library
//! operation and prints a text report, or JSON with `--json`.
//!
//! Exit codes: 0 pass, 1 a verification failed, 2 usage, 3 file or parse
//! error, 4 resource budget, 5 internal error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{check_axioms, generate_subalgebra, Element, FiniteRelationAlgebra};
use crate::complexity::{
    algebra_size, beta_lower_bound, build_gamma_embedding, choose_params, default_target, pigeonhole_pair, run_pipeline,
};
use crate::error::{Error, Result};
use crate::io::{load_algebra, load_structure, save_algebra, save_structure};
use crate::lpn::{build_fused, build_lpn, build_lpn_arc, fusion_embedding, notrap_flag, FusionSpec, LpnParams};
use crate::repr::{build_affine, build_doubled, build_power, degree_audit, verify_full, verify_weak, Budget};
use crate::term::{equation_length, falsify, parse_equation, FalsifyMode, FalsifyOutcome};
use crate::xi::{
    build_xi_seeded, check_xi_fast, eval_bounds, montecarlo, power_parameters, search_weakrep, sufficiency_thresholds,
    SearchMode,
};

#[derive(Parser, Debug)]
#[command(name = "lpn", version, about = "Relation algebras L(p,n) and their (weak) representations")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (0 = one per core). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Algebra file (`ra v1`).
    #[arg(long, conflicts_with_all = ["p", "n"])]
    pub algebra: Option<PathBuf>,
    /// Build L(p,n) directly.
    #[arg(long, requires = "n")]
    pub p: Option<usize>,
    #[arg(long, requires = "p")]
    pub n: Option<usize>,
}

impl AlgebraSource {
    fn load(&self) -> Result<Arc<FiniteRelationAlgebra>> {
        match (&self.algebra, self.p, self.n) {
            (Some(path), _, _) => Ok(Arc::new(load_algebra(path)?)),
            (None, Some(p), Some(n)) => build_lpn_arc(LpnParams::new(p, n)?),
            _ => Err(Error::Usage("give --algebra FILE or --p P --n N".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build L(p,n) and write it as an algebra file.
    Construct {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the fused subalgebra Lij(p,n), optionally checking its embedding into L(q,n).
    Fuse {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        target: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the relation-algebra axioms on atoms.
    CheckAxioms { file: PathBuf },
    /// Representation of L(q,0) on the affine plane over GF(q).
    Affine {
        #[arg(long)]
        q: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Representation of L(q,1) on two copies of the affine plane.
    Double {
        #[arg(long)]
        q: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// The m-th power of a structure.
    Power {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Verify a structure as a weak or a full representation.
    Verify {
        file: PathBuf,
        #[arg(long, conflicts_with = "full")]
        weak: bool,
        #[arg(long)]
        full: bool,
    },
    /// Per-atom degrees and the degree condition for L(p,n).
    DegreeAudit { file: PathBuf },
    /// The random structure over an inner structure for L(p,0), with a seeded class partition.
    Xi {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seed sweep over the random structure on the m-th power of the affine plane.
    Search {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        seed_start: u64,
        #[arg(long, default_value_t = 16)]
        seeds: u64,
        /// Also run the generic verifier on every instance.
        #[arg(long)]
        strict: bool,
    },
    /// The two counting inequalities and the failure bound.
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
        /// Use d = p^(2m), k = (p-1)^m.
        #[arg(long, conflicts_with_all = ["d", "k"])]
        m: Option<u32>,
        #[arg(long, requires = "k")]
        d: Option<u64>,
        #[arg(long, requires = "d")]
        k: Option<u64>,
    },
    /// Sufficient m and p for the inequalities.
    Thresholds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Empirical failure rate of the random structure against the analytic bound.
    Montecarlo {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Atoms of the subalgebra generated by the given elements.
    Subalgebra {
        #[command(flatten)]
        source: AlgebraSource,
        /// Generator, e.g. `a0+a1`. Repeatable.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// A pair a_i, a_j that no generator separates.
    Pigeonhole {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// Embed Sg(gens) of L(p,n) into L(target,n), or run random trials with --gamma.
    Embed {
        #[arg(long, requires = "n", conflicts_with = "gamma")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        #[arg(long = "gen")]
        gens: Vec<String>,
        #[arg(long)]
        gamma: Option<u32>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Search for an assignment falsifying an equation.
    Falsify {
        equation: String,
        #[command(flatten)]
        source: AlgebraSource,
        /// Random trials instead of exhaustive search.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Lower bound on equational complexity at size m = 2^log2m.
    Beta {
        #[arg(long)]
        log2m: u64,
    },
    /// Parameters (p, n) for a generator count gamma.
    Params {
        #[arg(long)]
        gamma: u32,
    },
}

/// Result of one subcommand.
pub struct Report {
    pub text: String,
    pub json: Value,
    /// False when a verification failed (exit code 1).
    pub pass: bool,
}

impl Report {
    fn new(text: String, json: Value, pass: bool) -> Self {
        Report { text, json, pass }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn parse_gens(alg: &FiniteRelationAlgebra, gens: &[String]) -> Result<Vec<Element>> {
    gens.iter().map(|g| alg.parse_element(g)).collect()
}

fn written(files: &[PathBuf]) -> String {
    files.iter().map(|f| format!("wrote {}\n", f.display())).collect()
}

fn save_structure_report(s: &crate::repr::LabeledStructure, out: &Path, what: String) -> Result<Report> {
    let files = save_structure(s, out)?;
    Ok(Report::new(
        format!("{what}\n{}", written(&files)),
        json!({ "kind": s.kind_name(), "points": s.base_size(), "files": files }),
        true,
    ))
}

pub fn run_command(cmd: &Command) -> Result<Report> {
    let budget = Budget::from_env();
    match cmd {
        Command::Construct { p, n, output } => {
            let params = LpnParams::new(*p, *n)?;
            let alg = build_lpn(params)?;
            let mut text = format!(
                "L({p},{n}): {} atoms, {} elements; 2n > p: {}\n",
                alg.atom_count(),
                algebra_size(*p, *n),
                notrap_flag(params)
            );
            if let Some(out) = output {
                save_algebra(&alg, out)?;
                text += &written(std::slice::from_ref(out));
            }
            let json = json!({
                "p": p, "n": n, "atoms": alg.atom_names(),
                "elements": algebra_size(*p, *n).to_string(),
                "not_representable_flag": notrap_flag(params),
            });
            Ok(Report::new(text, json, true))
        }
        Command::Fuse { p, n, i, j, target, output } => {
            let params = LpnParams::new(*p, *n)?;
            let spec = FusionSpec::new(*i, *j)?;
            let fused = build_fused(params, spec)?;
            let mut text = format!(
                "L{i}{j}({p},{n}): atoms {}\n",
                fused.algebra.atom_names().join(" ")
            );
            let mut json = json!({ "p": p, "n": n, "i": spec.i, "j": spec.j, "atoms": fused.algebra.atom_names() });
            let mut pass = true;
            if let Some(q) = target {
                let e = fusion_embedding(params, spec, *q)?;
                let v = e.check();
                pass = v.ok;
                text += &format!("embedding into L({q},{n}): {}\n", verdict_word(v.ok));
                json["embedding"] = to_json(&v);
            }
            if let Some(out) = output {
                save_algebra(&fused.algebra, out)?;
                text += &written(std::slice::from_ref(out));
            }
            Ok(Report::new(text, json, pass))
        }
        Command::CheckAxioms { file } => {
            let alg = load_algebra(file)?;
            let r = check_axioms(&alg);
            let mut text = String::new();
            for (name, o) in r.outcomes() {
                let word = match o {
                    crate::algebra::AxiomOutcome::Pass => "pass".to_string(),
                    crate::algebra::AxiomOutcome::ByConstruction => "pass (by construction)".to_string(),
                    crate::algebra::AxiomOutcome::Fail(w) => {
                        let atoms: Vec<&str> = w.atoms.iter().map(|&a| alg.atom_name(a)).collect();
                        format!("FAIL at ({}): {}", atoms.join(", "), w.detail)
                    }
                };
                text += &format!("{name}: {word}\n");
            }
            text += if r.all_pass() { "all axioms pass\n" } else { "axioms FAIL\n" };
            Ok(Report::new(text, to_json(&r), r.all_pass()))
        }
        Command::Affine { q, output } => {
            let s = build_affine(*q)?;
            save_structure_report(&s, output, format!("affine plane over GF({q}): {} points", s.base_size()))
        }
        Command::Double { q, output } => {
            let s = build_doubled(*q)?;
            save_structure_report(&s, output, format!("doubled affine plane over GF({q}): {} points", s.base_size()))
        }
        Command::Power { inner, m, output } => {
            let inner = Arc::new(load_structure(inner)?);
            let s = build_power(inner, *m)?;
            save_structure_report(&s, output, format!("power m={m}: {} points", s.base_size()))
        }
        Command::Verify { file, weak: _, full } => {
            let s = load_structure(file)?;
            let (mode, v) = if *full {
                ("full", verify_full(&s, &budget)?)
            } else {
                ("weak", verify_weak(&s, &budget)?)
            };
            let text = format!("{mode}: {}\n", v.summary(&s));
            let mut json = to_json(&v);
            json["mode"] = json!(mode);
            Ok(Report::new(text, json, v.pass))
        }
        Command::DegreeAudit { file } => {
            let s = load_structure(file)?;
            let a = degree_audit(&s, &budget)?;
            let mut text = format!("{} points\n", a.base_size);
            for d in &a.degrees {
                text += &format!("{}: min {} max {}\n", d.atom, d.min, d.max);
            }
            if let Some(l) = &a.lemma_d {
                text += &format!(
                    "a-degrees all p-1: {}; p-1 >= 2n-1: {}; degree condition {}\n",
                    l.a_degrees_equal_p_minus_1,
                    l.p_minus_1_at_least_2n_minus_1,
                    if l.holds { "holds" } else { "fails" }
                );
            }
            Ok(Report::new(text, to_json(&a), true))
        }
        Command::Xi { inner, n, seed, output } => {
            let inner = Arc::new(load_structure(inner)?);
            let s = build_xi_seeded(inner, *n, *seed)?;
            let v = check_xi_fast(&s, &budget)?;
            let mut text = format!("xi n={n} seed={seed}: {} points; fast check {}\n", s.base_size(), verdict_word(v.pass));
            if let Some(f) = &v.failure {
                text += &format!("{:?} at {:?}: {}\n", f.condition, f.points, f.detail);
            }
            let mut files = Vec::new();
            if let Some(out) = output {
                files = save_structure(&s, out)?;
                text += &written(&files);
            }
            let json = json!({ "seed": seed, "n": n, "points": s.base_size(), "verdict": v, "files": files });
            Ok(Report::new(text, json, v.pass))
        }
        Command::Search { p, n, m, seed_start, seeds, strict } => {
            let mode = if *strict { SearchMode::Strict } else { SearchMode::Fast };
            let end = seed_start
                .checked_add(*seeds)
                .ok_or_else(|| Error::Usage("seed range overflows".into()))?;
            let r = search_weakrep(*p, *n, *m, *seed_start..end, mode, &budget)?;
            let passes = r.entries.iter().filter(|e| e.pass).count();
            let mut text = format!(
                "p={p} n={n} m={m} points={} seeds {}..{} mode {:?}\n",
                r.points, seed_start, end, mode
            );
            for e in &r.entries {
                let c = e.condition.map(|c| format!(" {c:?} at {:?}", e.points.unwrap_or_default())).unwrap_or_default();
                text += &format!("seed {}: {}{c}\n", e.seed, verdict_word(e.pass));
            }
            text += &format!("{passes} of {} seeds pass\n", r.entries.len());
            Ok(Report::new(text, to_json(&r), true))
        }
        Command::Bounds { p, n, m, d, k } => {
            let (d, k) = match (m, d, k) {
                (Some(m), _, _) => power_parameters(*p, *m).ok_or_else(|| Error::Parameter("p^(2m) overflows".into()))?,
                (None, Some(d), Some(k)) => (*d, *k),
                _ => return Err(Error::Usage("give --m or both --d and --k".into())),
            };
            let r = eval_bounds(*p, *n, d, k);
            let b = |x: Option<bool>| x.map_or("n/a".to_string(), |v| v.to_string());
            let text = format!(
                "p={p} n={n} d={d} k={k}\nineq1={} ineq2={}\nfailure bound {:.6e} (log10 {:.4})\n",
                b(r.ineq1_holds),
                b(r.ineq2_holds),
                r.failure_prob_upper_bound,
                r.failure_log10
            );
            Ok(Report::new(text, to_json(&r), true))
        }
        Command::Thresholds { p, n } => {
            let t = sufficiency_thresholds(*p, *n);
            let text = format!(
                "m thresholds {:.4} {:.4} {:.4}; least guaranteed m = {}\np thresholds {} {}\n",
                t.m_thresholds[0], t.m_thresholds[1], t.m_thresholds[2], t.m_guaranteed, t.p_thresholds[0], t.p_thresholds[1]
            );
            Ok(Report::new(text, to_json(&t), true))
        }
        Command::Montecarlo { p, n, m, trials, seed } => {
            let r = montecarlo(*p, *n, *m, *trials, *seed, &budget)?;
            let text = format!(
                "seeds {seed}..{}: {} failures of {trials}, rate {:.4}, 95% interval [{:.4}, {:.4}]\nanalytic bound {:.6e}{}; consistent: {}\n",
                seed + trials,
                r.failures,
                r.rate,
                r.wilson_low,
                r.wilson_high,
                r.bound.failure_prob_upper_bound,
                if r.vacuous { " (vacuous)" } else { "" },
                r.consistent
            );
            Ok(Report::new(text, to_json(&r), r.consistent))
        }
        Command::Subalgebra { source, gens } => {
            let alg = source.load()?;
            let g = parse_gens(&alg, gens)?;
            let sg = generate_subalgebra(&alg, &g)?;
            let atoms: Vec<String> = sg.atoms().iter().map(|&a| alg.format_bits(a)).collect();
            let text = format!("{} atoms, {} elements\n{}\n", atoms.len(), 1u128 << atoms.len(), atoms.join("\n"));
            Ok(Report::new(text, json!({ "atoms": atoms }), true))
        }
        Command::Pigeonhole { p, n, gens } => {
            let alg = build_lpn(LpnParams::new(*p, *n)?)?;
            let g = parse_gens(&alg, gens)?;
            let (i, j) = pigeonhole_pair(&alg, &g)?;
            Ok(Report::new(format!("({i},{j})\n"), json!({ "i": i, "j": j }), true))
        }
        Command::Embed { p, n, gens, gamma, trials, seed, target } => {
            if let Some(gamma) = gamma {
                let r = run_pipeline(*gamma, *trials, *seed, *target)?;
                let text = format!(
                    "gamma={gamma}: L({},{}) into L({},{}); seeds {seed}..{}: {} of {} embeddings verified\n",
                    r.p,
                    r.n,
                    r.target_p,
                    r.n,
                    seed + trials,
                    r.passed,
                    r.trials.len()
                );
                let pass = r.passed == r.trials.len();
                return Ok(Report::new(text, to_json(&r), pass));
            }
            let (Some(p), Some(n)) = (p, n) else {
                return Err(Error::Usage("give --gamma or --p, --n and --gen".into()));
            };
            if gens.is_empty() {
                return Err(Error::Usage("at least one --gen required".into()));
            }
            let alg = build_lpn_arc(LpnParams::new(*p, *n)?)?;
            let g = parse_gens(&alg, gens)?;
            let q = target.unwrap_or_else(|| default_target(*p));
            let e = build_gamma_embedding(&alg, &g, q)?;
            let tgt = e.embedding.target().clone();
            let mut text = format!("pair ({},{}); Sg has {} atoms; into L({q},{n}): PASS\n", e.plan.pair.0, e.plan.pair.1, e.subalgebra.len());
            let mut images = Vec::new();
            for (a, img) in e.embedding.atom_images() {
                text += &format!("{} -> {}\n", alg.format_bits(a), tgt.format_bits(img));
                images.push(json!([alg.format_bits(a), tgt.format_bits(img)]));
            }
            Ok(Report::new(text, json!({ "plan": e.plan, "images": images }), true))
        }
        Command::Falsify { equation, source, random, seed, budget: limit } => {
            let alg = source.load()?;
            let eq = parse_equation(equation)?;
            let mode = match random {
                Some(trials) => FalsifyMode::Random { seed: *seed, trials: *trials },
                None => limit.map_or(FalsifyMode::exhaustive(), |b| FalsifyMode::Exhaustive { budget: b }),
            };
            let out = falsify(&eq, &alg, mode)?;
            let mut text = format!("{eq} (length {})\n{}\n", equation_length(&eq), out.render(&alg));
            if random.is_some() {
                text += &format!("seed {seed}\n");
            }
            let pass = !matches!(out, FalsifyOutcome::Falsified { .. });
            let json = json!({ "equation": eq.to_string(), "length": equation_length(&eq), "outcome": out, "seed": random.map(|_| seed) });
            Ok(Report::new(text, json, pass))
        }
        Command::Beta { log2m } => {
            let m = BigUint::from(1u8) << *log2m;
            let b = beta_lower_bound(&m)?;
            Ok(Report::new(format!("beta(2^{log2m}) > {b:.12}\n"), json!({ "log2m": log2m, "bound": b }), true))
        }
        Command::Params { gamma } => {
            let (p, n) = choose_params(*gamma)?;
            let text = format!("gamma={gamma}: p={p} n={n}; |L(p,n)| = 2^{}\n", p + n + 2);
            Ok(Report::new(text, json!({ "gamma": gamma, "p": p, "n": n, "size_log2": p + n + 2 }), true))
        }
    }
}

/// Parses `args`, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // A second call in the same process keeps the first pool; results do not depend on it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run_command(&cli.command) {
        Ok(r) => {
            use std::io::Write;
            let body = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("json") + "\n"
            } else {
                r.text
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if r.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Report> {
        let cli = Cli::try_parse_from(std::iter::once("lpn").chain(args.iter().copied())).unwrap();
        run_command(&cli.command)
    }

    #[test]
    fn bounds_example() {
        let r = run(&["bounds", "--p", "3", "--n", "2", "--m", "1"]).unwrap();
        assert!(r.text.contains("ineq1=false ineq2=false"), "{}", r.text);
        assert_eq!(r.json["ineq1_holds"], json!(false));
    }

    #[test]
    fn construct_and_check() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("l32.ra");
        let f = f.to_str().unwrap();
        assert!(run(&["construct", "--p", "3", "--n", "2", "-o", f]).unwrap().pass);
        let r = run(&["check-axioms", f]).unwrap();
        assert!(r.pass && r.text.contains("all axioms pass"));
    }

    #[test]
    fn affine_verify_full() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("aff3.rel");
        let f = f.to_str().unwrap();
        run(&["affine", "--q", "3", "-o", f]).unwrap();
        assert!(run(&["verify", "--full", f]).unwrap().pass);
        let out = dir.path().join("p2.rel");
        run(&["power", "--inner", f, "--m", "2", "-o", out.to_str().unwrap()]).unwrap();
        assert!(run(&["verify", "--weak", out.to_str().unwrap()]).unwrap().pass);
        assert!(!run(&["verify", "--full", out.to_str().unwrap()]).unwrap().pass);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with(["lpn", "construct", "--p", "2", "--n", "1"]), 2);
        assert_eq!(main_with(["lpn", "check-axioms", "/nonexistent/x.ra"]), 3);
        assert_eq!(main_with(["lpn", "bogus"]), 2);
        assert_eq!(main_with(["lpn", "falsify", "x1;x1 = x1", "--p", "3", "--n", "2"]), 1);
        assert_eq!(main_with(["lpn", "params", "--gamma", "2"]), 0);
    }

    #[test]
    fn json_is_deterministic() {
        let a = run(&["search", "--p", "3", "--n", "2", "--seeds", "8"]).unwrap().json;
        let b = run(&["search", "--p", "3", "--n", "2", "--seeds", "8"]).unwrap().json;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
