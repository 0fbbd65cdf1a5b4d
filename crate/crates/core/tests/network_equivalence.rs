//! The atomic-network checker and the generic verifier agree on every
//! atom labeling of at most 30 points tried here.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lpn::algebra::AtomId;
use lpn::repr::{build_affine, build_doubled, network_check, verify_weak, Budget, LabeledStructure, StructureKind};

fn agree(s: &LabeledStructure) -> bool {
    let net = network_check(s).unwrap().is_none();
    let gen = verify_weak(s, &Budget::default()).unwrap().pass;
    assert_eq!(net, gen, "network {net} generic {gen}");
    gen
}

fn perturb(s: &LabeledStructure, rng: &mut ChaCha8Rng, changes: usize) -> LabeledStructure {
    let StructureKind::AtomLabeling(l) = s.kind() else { unreachable!() };
    let alg = s.algebra().clone();
    let mut l = l.clone();
    let d = s.base_size();
    for _ in 0..changes {
        let u = rng.gen_range(0..d);
        let v = (u + rng.gen_range(1..d)) % d;
        let atom = rng.gen_range(1..alg.atom_count());
        l.set(&alg, u, v, AtomId(atom)).unwrap();
    }
    LabeledStructure::from_labeling(alg, l)
}

#[test]
fn built_structures_pass_both() {
    for q in [3, 4, 5] {
        assert!(agree(&build_affine(q).unwrap()));
    }
    assert!(agree(&build_doubled(3).unwrap()));
}

#[test]
fn perturbed_structures_agree() {
    let bases: Vec<Arc<LabeledStructure>> = [build_affine(3), build_affine(4), build_affine(5), build_doubled(3)]
        .into_iter()
        .map(|s| Arc::new(s.unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    for base in &bases {
        assert!(base.base_size() <= 30);
        for changes in [1, 1, 2, 3] {
            for _ in 0..25 {
                let s = perturb(base, &mut rng, changes);
                failures += !agree(&s) as usize;
            }
        }
    }
    assert!(failures > 0);
}
