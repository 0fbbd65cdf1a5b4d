//! Every subalgebra generated by gamma elements embeds into a larger L(p',n).

use lpn::complexity::run_pipeline;

fn main() -> lpn::Result<()> {
    for gamma in 1..=3 {
        let r = run_pipeline(gamma, 100, 0, None)?;
        println!(
            "gamma={gamma}: L({},{}) -> L({},{}), {} of {} verified",
            r.p,
            r.n,
            r.target_p,
            r.n,
            r.passed,
            r.trials.len()
        );
        let t = &r.trials[0];
        println!("  seed {}: gens {:?}, pair {:?}, Sg has {} atoms", t.seed, t.generators, t.pair, t.subalgebra_atoms);
    }
    Ok(())
}
