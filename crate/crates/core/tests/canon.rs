use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::RngExt;
use symdesign::builders::{affine_plane, projective_plane, trivial_symmetric};
use symdesign::canon::{canonical_form, fingerprint, isomorphic};
use symdesign::compose::sane;
use symdesign::incidence::IncidenceStructure;
use symdesign::latin::{jm_sample, rng_for, LatinSquare};
use symdesign::perms::{enumerate_group, is_automorphism};
use symdesign::symplectic::{grid_partitions, sminus};

fn shuffled(d: &IncidenceStructure, seed: u64) -> (IncidenceStructure, Vec<usize>) {
    let mut rng = rng_for(seed, 1);
    let mut map: Vec<usize> = (0..d.v()).collect();
    map.shuffle(&mut rng);
    let mut e = d.relabel(&map).unwrap();
    let mut blocks = e.blocks().to_vec();
    blocks.shuffle(&mut rng);
    e = IncidenceStructure::new(d.v(), blocks).unwrap();
    (e, map)
}

fn designs() -> Vec<IncidenceStructure> {
    vec![
        projective_plane(2).unwrap(),
        projective_plane(3).unwrap(),
        affine_plane(3).unwrap().0,
        sminus(2).unwrap(),
        sane(2, &LatinSquare::cyclic(4)).unwrap().design,
        trivial_symmetric(6).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_keeps_certificate(seed in any::<u64>(), which in 0usize..6) {
        let d = &designs()[which];
        let (e, _) = shuffled(d, seed);
        let a = canonical_form(d, None).unwrap();
        let b = canonical_form(&e, None).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.order, b.order);
    }
}

#[test]
fn labeling_maps_design_onto_certificate() {
    for d in designs() {
        let c = canonical_form(&d, None).unwrap();
        assert_eq!(d.relabel(&c.labeling).unwrap().sorted_blocks(), c.blocks);
        assert_eq!(c.design().unwrap().sorted_blocks(), c.blocks);
        for g in &c.generators {
            assert!(is_automorphism(&d, g));
        }
    }
}

#[test]
fn perturbed_designs_are_told_apart() {
    let mut rng = rng_for(3, 0);
    for d in designs().into_iter().take(5) {
        let c = canonical_form(&d, None).unwrap();
        for _ in 0..10 {
            let mut blocks = d.blocks().to_vec();
            let i = rng.random_range(0..blocks.len());
            let inside = blocks[i][0];
            let outside = (0..d.v()).find(|x| !blocks[i].contains(x)).unwrap();
            blocks[i].retain(|&x| x != inside);
            blocks[i].push(outside);
            blocks[i].sort_unstable();
            let e = IncidenceStructure::new(d.v(), blocks).unwrap();
            assert!(!isomorphic(&d, &e).unwrap());
            assert_ne!(canonical_form(&e, None).unwrap().hash, c.hash);
        }
    }
}

#[test]
fn dual_and_complement_of_fano() {
    let fano = projective_plane(2).unwrap();
    assert!(isomorphic(&fano, &fano.dual().unwrap()).unwrap());
    assert!(!isomorphic(&fano, &fano.complement().unwrap()).unwrap());
}

#[test]
fn partition_orders_match_brute_force() {
    let s = sminus(2).unwrap();
    let full = canonical_form(&s, None).unwrap();
    let group = enumerate_group(&full.generators, 16, 20_000).unwrap();
    let (_, by_v) = grid_partitions(2);
    let preserves = |g: &symdesign::perms::Permutation| {
        by_v.iter().all(|part| {
            let j = by_v.iter().position(|p| p.contains(&g.apply(part[0]))).unwrap();
            part.iter().all(|&x| by_v[j].contains(&g.apply(x)))
        })
    };
    let brute = group.iter().filter(|g| preserves(g)).count();
    let restricted = canonical_form(&s, Some(&by_v)).unwrap();
    assert_eq!(restricted.order.to_string(), brute.to_string());
    assert_eq!(brute, 768);
}

#[test]
fn fingerprints_agree_on_isomorphic_copies() {
    let d = sane(3, &jm_sample(5, 7, 1250)).unwrap().design;
    let (e, _) = shuffled(&d, 11);
    assert_eq!(fingerprint(&d), fingerprint(&e));
}
