//! `structure v1` text format.
//!
//! ```text
//! structure v1
//! kind atom-labeling
//! algebra l30.ra
//! base 9
//! edge 0 1 a0
//! ```
//!
//! `kind power` has one line `power m=<m> inner=<path>`; `kind xi` has
//! `xi inner=<path> n=<n> seed=<u64>` or `xi inner=<path> n=<n>` followed by
//! one `tedge <x> <y> <i>` line for every cross pair. Relative paths are
//! resolved against the directory of the file that names them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{load_algebra, print_algebra};
use crate::error::{Error, Result};
use crate::repr::{build_power, AtomLabeling, LabeledStructure, StructureKind};
use crate::xi::{build_xi, ExplicitPartition, Partition, PartitionRecipe};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XiClasses {
    Seed(u64),
    Edges(Vec<(usize, usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureBody {
    AtomLabeling {
        base: usize,
        /// `(u, v, atom name)` with `u < v`.
        edges: Vec<(usize, usize, String)>,
    },
    Power {
        m: u32,
        inner: PathBuf,
    },
    Xi {
        inner: PathBuf,
        n: usize,
        classes: XiClasses,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFile {
    pub algebra: PathBuf,
    pub body: StructureBody,
}

fn kv<'a>(word: &'a str, key: &str, ln: usize) -> Result<&'a str> {
    word.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(ln, format!("expected {key}=...")))
}

fn num<T: std::str::FromStr>(s: &str, ln: usize) -> Result<T> {
    s.parse().map_err(|_| Error::parse(ln, format!("bad number {s:?}")))
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "structure v1")) => {}
            Some((ln, other)) => return Err(Error::parse(ln, format!("expected 'structure v1', found {other:?}"))),
            None => return Err(Error::parse(1, "empty structure file")),
        }
        let mut kind: Option<String> = None;
        let mut algebra: Option<PathBuf> = None;
        let mut base: Option<usize> = None;
        let mut edges = Vec::new();
        let mut power: Option<(u32, PathBuf)> = None;
        let mut xi: Option<(PathBuf, usize, Option<u64>)> = None;
        let mut tedges = Vec::new();
        let mut seen_edges = std::collections::HashSet::new();

        for (ln, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["kind", k] if kind.is_none() => kind = Some(k.to_string()),
                ["algebra", p] if algebra.is_none() => algebra = Some(PathBuf::from(p)),
                ["base", d] if base.is_none() => base = Some(num(d, ln)?),
                ["edge", u, v, a] => {
                    let (u, v): (usize, usize) = (num(u, ln)?, num(v, ln)?);
                    if u >= v {
                        return Err(Error::parse(ln, "edge needs u < v"));
                    }
                    if !seen_edges.insert((u, v)) {
                        return Err(Error::parse(ln, format!("duplicate edge {u} {v}")));
                    }
                    edges.push((u, v, a.to_string()));
                }
                ["power", m, inner] if power.is_none() => {
                    power = Some((num(kv(m, "m", ln)?, ln)?, PathBuf::from(kv(inner, "inner", ln)?)));
                }
                ["xi", inner, n, rest @ ..] if xi.is_none() => {
                    let seed = match rest {
                        [] => None,
                        [s] => Some(num(kv(s, "seed", ln)?, ln)?),
                        _ => return Err(Error::parse(ln, "trailing words on xi line")),
                    };
                    xi = Some((PathBuf::from(kv(inner, "inner", ln)?), num(kv(n, "n", ln)?, ln)?, seed));
                }
                ["tedge", x, y, i] => tedges.push((num(x, ln)?, num(y, ln)?, num(i, ln)?)),
                _ => return Err(Error::parse(ln, format!("unexpected line {line:?}"))),
            }
        }
        let algebra = algebra.ok_or_else(|| Error::parse(0, "missing algebra line"))?;
        let kind = kind.ok_or_else(|| Error::parse(0, "missing kind line"))?;
        let misplaced = |what: &str| Error::parse(0, format!("{what} lines do not belong to kind {kind}"));
        let body = match kind.as_str() {
            "atom-labeling" => {
                if power.is_some() || xi.is_some() || !tedges.is_empty() {
                    return Err(misplaced("power/xi/tedge"));
                }
                StructureBody::AtomLabeling {
                    base: base.ok_or_else(|| Error::parse(0, "missing base line"))?,
                    edges,
                }
            }
            "power" => {
                if base.is_some() || !edges.is_empty() || xi.is_some() || !tedges.is_empty() {
                    return Err(misplaced("base/edge/xi/tedge"));
                }
                let (m, inner) = power.ok_or_else(|| Error::parse(0, "missing power line"))?;
                StructureBody::Power { m, inner }
            }
            "xi" => {
                if base.is_some() || !edges.is_empty() || power.is_some() {
                    return Err(misplaced("base/edge/power"));
                }
                let (inner, n, seed) = xi.ok_or_else(|| Error::parse(0, "missing xi line"))?;
                let classes = match (seed, tedges.is_empty()) {
                    (Some(s), true) => XiClasses::Seed(s),
                    (None, false) => XiClasses::Edges(tedges),
                    (Some(_), false) => return Err(Error::parse(0, "xi has both a seed and tedge lines")),
                    (None, true) => return Err(Error::parse(0, "xi needs a seed or tedge lines")),
                };
                StructureBody::Xi { inner, n, classes }
            }
            other => return Err(Error::parse(0, format!("unknown kind {other:?}"))),
        };
        Ok(StructureFile { algebra, body })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("structure v1\n");
        let kind = match self.body {
            StructureBody::AtomLabeling { .. } => "atom-labeling",
            StructureBody::Power { .. } => "power",
            StructureBody::Xi { .. } => "xi",
        };
        writeln!(out, "kind {kind}").unwrap();
        writeln!(out, "algebra {}", self.algebra.display()).unwrap();
        match &self.body {
            StructureBody::AtomLabeling { base, edges } => {
                writeln!(out, "base {base}").unwrap();
                for (u, v, a) in edges {
                    writeln!(out, "edge {u} {v} {a}").unwrap();
                }
            }
            StructureBody::Power { m, inner } => {
                writeln!(out, "power m={m} inner={}", inner.display()).unwrap();
            }
            StructureBody::Xi { inner, n, classes } => match classes {
                XiClasses::Seed(s) => writeln!(out, "xi inner={} n={n} seed={s}", inner.display()).unwrap(),
                XiClasses::Edges(es) => {
                    writeln!(out, "xi inner={} n={n}", inner.display()).unwrap();
                    for (x, y, i) in es {
                        writeln!(out, "tedge {x} {y} {i}").unwrap();
                    }
                }
            },
        }
        out
    }

    /// Builds the structure, resolving relative paths against `dir`.
    pub fn resolve(&self, dir: &Path) -> Result<LabeledStructure> {
        let alg = Arc::new(load_algebra(&dir.join(&self.algebra))?);
        match &self.body {
            StructureBody::AtomLabeling { base, edges } => {
                let mut lab = AtomLabeling::new(&alg, *base)?;
                for (u, v, a) in edges {
                    let atom = alg
                        .atom_by_name(a)
                        .ok_or_else(|| Error::parse(0, format!("atom {a:?} not in the algebra")))?;
                    lab.set(&alg, *u, *v, atom)?;
                }
                Ok(LabeledStructure::from_labeling(alg, lab))
            }
            StructureBody::Power { m, inner } => {
                let inner = Arc::new(load_structure(&dir.join(inner))?);
                if **inner.algebra() != *alg {
                    return Err(Error::parse(0, "power algebra differs from the inner structure's"));
                }
                let s = build_power(inner, *m)?;
                Ok(Arc::try_unwrap(s).unwrap_or_else(|a| (*a).clone()))
            }
            StructureBody::Xi { inner, n, classes } => {
                let inner = Arc::new(load_structure(&dir.join(inner))?);
                let d = inner.base_size();
                let part = match classes {
                    XiClasses::Seed(s) => Partition::Seeded(PartitionRecipe::new(*s, *n, d)?),
                    XiClasses::Edges(es) => Partition::Explicit(ExplicitPartition::from_edges(d, *n, es)?),
                };
                let s = build_xi(inner, *n, part)?;
                if **s.algebra() != *alg {
                    return Err(Error::parse(0, "xi algebra file is not the expected L(p,n)"));
                }
                Ok(s)
            }
        }
    }

    /// Describes `s`. Power and xi structures refer to their inner
    /// structure through `inner`.
    pub fn describe(s: &LabeledStructure, algebra: &Path, inner: Option<&Path>) -> Result<Self> {
        let need_inner = || inner.map(Path::to_path_buf).ok_or_else(|| Error::Usage("inner path required".into()));
        let body = match s.kind() {
            StructureKind::AtomLabeling(l) => StructureBody::AtomLabeling {
                base: l.base_size(),
                edges: l
                    .edges()
                    .map(|(u, v, a)| (u, v, s.algebra().atom_name(a).to_string()))
                    .collect(),
            },
            StructureKind::Power { m, .. } => StructureBody::Power {
                m: *m,
                inner: need_inner()?,
            },
            StructureKind::Xi { n, partition, .. } => StructureBody::Xi {
                inner: need_inner()?,
                n: *n,
                classes: match partition.seed() {
                    Some(seed) => XiClasses::Seed(seed),
                    None => XiClasses::Edges(partition.to_explicit().edges().collect()),
                },
            },
        };
        Ok(StructureFile {
            algebra: algebra.to_path_buf(),
            body,
        })
    }
}

pub fn load_structure(path: &Path) -> Result<LabeledStructure> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let file = StructureFile::parse(&text)?;
    file.resolve(path.parent().unwrap_or(Path::new(".")))
}

fn file_name(p: &Path) -> PathBuf {
    PathBuf::from(p.file_name().expect("file path"))
}

/// Writes `s` to `path`, its algebra to `<stem>.ra` and, for power and xi,
/// the inner structure to `<stem>.inner.rel` (recursively). Returns every
/// file written.
pub fn save_structure(s: &LabeledStructure, path: &Path) -> Result<Vec<PathBuf>> {
    let alg_path = path.with_extension("ra");
    fs::write(&alg_path, print_algebra(s.algebra()))?;
    let mut written = vec![alg_path.clone()];
    let inner_path = match s.kind() {
        StructureKind::AtomLabeling(_) => None,
        StructureKind::Power { inner, .. } | StructureKind::Xi { inner, .. } => {
            let p = path.with_extension("inner.rel");
            written.extend(save_structure(inner, &p)?);
            Some(file_name(&p))
        }
    };
    let f = StructureFile::describe(s, &file_name(&alg_path), inner_path.as_deref())?;
    fs::write(path, f.to_text())?;
    written.push(path.to_path_buf());
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{build_affine, Budget};
    use crate::xi::build_xi_seeded;

    fn same_labels(a: &LabeledStructure, b: &LabeledStructure) {
        let bud = Budget::default();
        assert_eq!(a.base_size(), b.base_size());
        assert_eq!(a.kind_name(), b.kind_name());
        assert_eq!(**a.algebra(), **b.algebra());
        assert_eq!(a.label_table(&bud).unwrap(), b.label_table(&bud).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let cases = [
            "structure v1\nkind atom-labeling\nalgebra a.ra\nbase 3\nedge 0 1 a0\nedge 1 2 a1\n",
            "structure v1\nkind power\nalgebra a.ra\npower m=2 inner=x.rel\n",
            "structure v1\nkind xi\nalgebra b.ra\nxi inner=x.rel n=2 seed=17\n",
            "structure v1\nkind xi\nalgebra b.ra\nxi inner=x.rel n=2\ntedge 0 0 1\ntedge 0 1 2\n",
        ];
        for c in cases {
            let f = StructureFile::parse(c).unwrap();
            assert_eq!(f.to_text(), c);
            assert_eq!(StructureFile::parse(&f.to_text()).unwrap(), f);
        }
    }

    #[test]
    fn rejects() {
        let both = "structure v1\nkind xi\nalgebra b.ra\nxi inner=x.rel n=2 seed=1\ntedge 0 0 1\n";
        assert!(StructureFile::parse(both).is_err());
        let dup = "structure v1\nkind atom-labeling\nalgebra a.ra\nbase 3\nedge 0 1 a0\nedge 0 1 a1\n";
        assert!(StructureFile::parse(dup).is_err());
        let order = "structure v1\nkind atom-labeling\nalgebra a.ra\nbase 3\nedge 1 0 a0\n";
        assert!(StructureFile::parse(order).is_err());
        assert!(StructureFile::parse("structure v2\n").is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let a = Arc::new(build_affine(3).unwrap());
        let p = build_power(a.clone(), 2).unwrap();
        let x = build_xi_seeded(a.clone(), 2, 5).unwrap();
        let expl = {
            let StructureKind::Xi { partition, .. } = x.kind() else { unreachable!() };
            build_xi(a.clone(), 2, Partition::Explicit(partition.to_explicit())).unwrap()
        };
        for (name, s) in [("aff.rel", &*a), ("pow.rel", &*p), ("xi.rel", &x), ("xe.rel", &expl)] {
            let path = dir.path().join(name);
            let files = save_structure(s, &path).unwrap();
            assert!(files.iter().all(|f| f.exists()));
            let back = load_structure(&path).unwrap();
            same_labels(s, &back);
            let text = fs::read_to_string(&path).unwrap();
            let again = StructureFile::parse(&text).unwrap();
            assert_eq!(again.to_text(), text);
        }
    }

    #[test]
    fn unknown_atom() {
        let dir = tempfile::tempdir().unwrap();
        let a = build_affine(3).unwrap();
        let path = dir.path().join("a.rel");
        save_structure(&a, &path).unwrap();
        let text: String = fs::read_to_string(&path)
            .unwrap()
            .lines()
            .map(|l| if l.starts_with("edge 0 1 ") { "edge 0 1 q9\n".to_string() } else { format!("{l}\n") })
            .collect();
        fs::write(&path, text).unwrap();
        assert!(matches!(load_structure(&path), Err(Error::Parse { .. })));
    }
}
