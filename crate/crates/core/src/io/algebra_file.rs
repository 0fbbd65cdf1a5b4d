//! `ra v1` text format.
//!
//! ```text
//! ra v1
//! atoms 4 1' a0 a1 a2
//! identity 1'
//! symmetric true
//! comp 1' 1' = 1'
//! comp a0 a1 = a2
//! comp a1 a1 = 1'+a0
//! ```
//!
//! Symmetric algebras list each unordered atom pair once. Otherwise every
//! ordered pair is listed and `converse <a> <b>` lines give the converse of
//! each atom that is not self-converse.

use std::fmt::Write as _;

use crate::algebra::{AtomId, FiniteRelationAlgebra};
use crate::error::{Error, Result};
use crate::lpn::{build_lpn, LpnParams};

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '\'')
}

pub fn print_algebra(alg: &FiniteRelationAlgebra) -> String {
    let k = alg.atom_count();
    let name = |i: usize| alg.atom_name(AtomId(i));
    let mut out = String::from("ra v1\n");
    writeln!(out, "atoms {k} {}", alg.atom_names().join(" ")).unwrap();
    let ids: Vec<&str> = alg.identity_atoms().map(|a| alg.atom_name(a)).collect();
    writeln!(out, "identity {}", ids.join(" ")).unwrap();
    let sym = alg.is_symmetric();
    writeln!(out, "symmetric {sym}").unwrap();
    if !sym {
        for a in 0..k {
            let c = alg.converse_atom(AtomId(a)).0;
            if c != a {
                writeln!(out, "converse {} {}", name(a), name(c)).unwrap();
            }
        }
    }
    for a in 0..k {
        let start = if sym { a } else { 0 };
        for b in start..k {
            let prod = alg.atom_product(AtomId(a), AtomId(b));
            let rhs = if prod == 0 { "0".to_string() } else { alg.format_bits(prod) };
            writeln!(out, "comp {} {} = {rhs}", name(a), name(b)).unwrap();
        }
    }
    out
}

pub fn parse_algebra(text: &str) -> Result<FiniteRelationAlgebra> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "ra v1")) => {}
        Some((ln, other)) => return Err(Error::parse(ln, format!("expected 'ra v1', found {other:?}"))),
        None => return Err(Error::parse(1, "empty algebra file")),
    }

    let mut names: Vec<String> = Vec::new();
    let mut identity: Vec<usize> = Vec::new();
    let mut symmetric: Option<bool> = None;
    let mut converse_pairs: Vec<(usize, usize)> = Vec::new();
    let mut comps: Vec<(usize, usize, u64, usize)> = Vec::new();

    let index = |names: &[String], s: &str, ln: usize| -> Result<usize> {
        names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::parse(ln, format!("unknown atom {s:?}")))
    };

    for (ln, line) in lines {
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or_default();
        let rest: Vec<&str> = words.collect();
        match key {
            "atoms" => {
                if !names.is_empty() {
                    return Err(Error::parse(ln, "duplicate atoms line"));
                }
                let (count, list) = rest.split_first().ok_or_else(|| Error::parse(ln, "atoms needs a count"))?;
                let count: usize = count.parse().map_err(|_| Error::parse(ln, "bad atom count"))?;
                if list.len() != count {
                    return Err(Error::parse(ln, format!("atoms declares {count} names, found {}", list.len())));
                }
                for n in list {
                    if !valid_name(n) {
                        return Err(Error::parse(ln, format!("invalid atom name {n:?}")));
                    }
                }
                names = list.iter().map(|s| s.to_string()).collect();
            }
            "identity" => {
                if rest.is_empty() {
                    return Err(Error::parse(ln, "identity needs at least one atom"));
                }
                for n in rest {
                    identity.push(index(&names, n, ln)?);
                }
            }
            "symmetric" => {
                symmetric = Some(match rest.as_slice() {
                    ["true"] => true,
                    ["false"] => false,
                    _ => return Err(Error::parse(ln, "symmetric must be true or false")),
                });
            }
            "converse" => match rest.as_slice() {
                [a, b] => converse_pairs.push((index(&names, a, ln)?, index(&names, b, ln)?)),
                _ => return Err(Error::parse(ln, "converse needs two atoms")),
            },
            "comp" => match rest.as_slice() {
                [a, b, "=", rhs] => {
                    let (a, b) = (index(&names, a, ln)?, index(&names, b, ln)?);
                    let mut bits = 0u64;
                    if *rhs != "0" {
                        for part in rhs.split('+') {
                            bits |= 1 << index(&names, part, ln)?;
                        }
                    }
                    comps.push((a, b, bits, ln));
                }
                _ => return Err(Error::parse(ln, "expected 'comp <a> <b> = <atoms>|0'")),
            },
            other => return Err(Error::parse(ln, format!("unknown keyword {other:?}"))),
        }
    }

    let k = names.len();
    if k == 0 {
        return Err(Error::parse(0, "missing atoms line"));
    }
    let symmetric = symmetric.ok_or_else(|| Error::parse(0, "missing symmetric line"))?;
    let mut converse: Vec<usize> = (0..k).collect();
    for (a, b) in converse_pairs {
        if symmetric && a != b {
            return Err(Error::parse(0, "converse line in a symmetric algebra"));
        }
        converse[a] = b;
        converse[b] = a;
    }
    let mut table: Vec<Option<u64>> = vec![None; k * k];
    for (a, b, bits, ln) in comps {
        let mut slots = vec![a * k + b];
        if symmetric && a != b {
            slots.push(b * k + a);
        }
        for s in slots {
            if table[s].replace(bits).is_some() {
                return Err(Error::parse(ln, format!("duplicate comp entry for {} {}", names[a], names[b])));
            }
        }
    }
    if let Some(pos) = table.iter().position(Option::is_none) {
        return Err(Error::parse(0, format!("missing comp {} {}", names[pos / k], names[pos % k])));
    }
    let table = table.into_iter().map(Option::unwrap).collect();
    FiniteRelationAlgebra::new(names, &identity, converse, table).map_err(|e| Error::parse(0, e.to_string()))
}

/// Returns `L(p,n)` with its parameters attached when `alg` is equal to it,
/// and `alg` unchanged otherwise.
pub fn recognize_lpn(alg: FiniteRelationAlgebra) -> FiniteRelationAlgebra {
    let k = alg.atom_count();
    let t_count = alg.atom_names().iter().filter(|n| n.starts_with('t')).count();
    if k < t_count + 5 {
        return alg;
    }
    let p = k - 2 - t_count;
    match LpnParams::new(p, t_count).and_then(build_lpn) {
        Ok(l) if l == alg => l,
        _ => alg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_lpn() {
        for (p, n) in [(3, 0), (3, 2), (5, 3), (4, 1)] {
            let a = build_lpn(LpnParams::new(p, n).unwrap()).unwrap();
            let text = print_algebra(&a);
            let b = parse_algebra(&text).unwrap();
            assert_eq!(a, b);
            assert_eq!(print_algebra(&b), text);
            assert_eq!(recognize_lpn(b).lpn_params(), Some(LpnParams { p, n }));
        }
    }

    #[test]
    fn l30_text() {
        let a = build_lpn(LpnParams::new(3, 0).unwrap()).unwrap();
        let text = print_algebra(&a);
        assert!(text.starts_with("ra v1\natoms 5 1' a0 a1 a2 a3\nidentity 1'\nsymmetric true\n"));
        assert!(text.contains("comp a0 a1 = a2+a3\n"));
        assert!(text.contains("comp a0 a0 = 1'+a0\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with("comp")).count(), 15);
    }

    #[test]
    fn non_symmetric_round_trip() {
        // Z/3 group algebra: atoms e, r, s with r˘ = s.
        let names = vec!["e".to_string(), "r".into(), "s".into()];
        let table = vec![1, 2, 4, 2, 4, 1, 4, 1, 2];
        let a = FiniteRelationAlgebra::new(names, &[0], vec![0, 2, 1], table).unwrap();
        let text = print_algebra(&a);
        assert!(text.contains("converse r s"));
        assert_eq!(parse_algebra(&text).unwrap(), a);
    }

    #[test]
    fn rejects() {
        let good = print_algebra(&build_lpn(LpnParams::new(3, 0).unwrap()).unwrap());
        assert!(matches!(parse_algebra("rb v1\n"), Err(Error::Parse { pos: 1, .. })));
        let missing: String = good.lines().filter(|l| *l != "comp a2 a3 = a0+a1").map(|l| format!("{l}\n")).collect();
        assert!(parse_algebra(&missing).is_err());
        let dup = format!("{good}comp a0 a1 = a2\n");
        assert!(parse_algebra(&dup).is_err());
        let bad = good.replace("comp a0 a1 = a2+a3", "comp a0 a1 = a2+b7");
        assert!(matches!(parse_algebra(&bad), Err(Error::Parse { .. })));
        assert!(parse_algebra(&good.replace("atoms 5", "atoms 6")).is_err());
    }
}
