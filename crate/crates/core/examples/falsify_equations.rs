//! Parse equations, measure their length and search for falsifying assignments.

use lpn::lpn::{build_lpn, LpnParams};
use lpn::term::{equation_length, falsify, parse_equation, ra_axioms, FalsifyMode};

fn main() -> lpn::Result<()> {
    let alg = build_lpn(LpnParams::new(3, 2)?)?;
    for text in ["x1;x1 = x1", "(x1+x2)&x3 = x1&x3 + x2&x3", "x1;x2 = x2;x1", "x1;-x1 = -e"] {
        let eq = parse_equation(text)?;
        let out = falsify(&eq, &alg, FalsifyMode::exhaustive())?;
        println!("{eq}  [length {}]  {}", equation_length(&eq), out.render(&alg));
    }
    for (name, eq) in ra_axioms() {
        println!("{name}: {}", falsify(&eq, &alg, FalsifyMode::exhaustive())?.render(&alg));
    }
    Ok(())
}
