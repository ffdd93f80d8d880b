use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::RngExt;
use symdesign::builders::{affine_plane, affine_space_hyperplanes, dual_transversal, projective_plane, trivial_symmetric};
use symdesign::canon::canonical_form;
use symdesign::compose::{construct, diagonal_translations, pair_count_strata, predict, sane, Composition, CompositionInput};
use symdesign::latin::{bijections_by_edge_colouring, jm_sample, rng_for, LatinSquare};
use symdesign::perms::{decompose_wreath, is_automorphism, phi_beta, Permutation, WreathFrame};
use symdesign::symplectic::{ingredients, D2Labels};

/// Blocks rebuilt straight from the inputs.
fn blocks_by_hand(input: &CompositionInput) -> BTreeSet<Vec<usize>> {
    let v0 = input.d0().v();
    let class_of = input.resolution().class_of(input.d0().b());
    let mut out = BTreeSet::new();
    for (beta, bl) in input.d1().blocks().iter().enumerate() {
        for gamma in input.d2().blocks() {
            let mut block = Vec::new();
            for &l in gamma {
                let j = input.psi().image(beta, class_of[l]);
                assert!(bl.contains(&j));
                block.extend(input.d0().blocks()[l].iter().map(|&d| j * v0 + d));
            }
            block.sort_unstable();
            out.insert(block);
        }
    }
    out
}

fn plane_input(q: u32, d1: symdesign::incidence::IncidenceStructure) -> CompositionInput {
    let (d0, res) = affine_plane(q).unwrap();
    let psi = bijections_by_edge_colouring(&d1, res.r()).unwrap();
    let (d2, g) = dual_transversal(&d0, &res).unwrap();
    CompositionInput::new(d0, res, d1, psi, d2, g).unwrap()
}

fn check_against_hand(input: &CompositionInput) -> Composition {
    let c = construct(input).unwrap();
    let built: BTreeSet<Vec<usize>> = c.design.sorted_blocks().into_iter().collect();
    assert_eq!(built, blocks_by_hand(input));
    let l = &c.ledger;
    assert_eq!((c.design.v(), c.design.b()), (l.points, l.blocks));
    assert!(c.design.blocks().iter().all(|b| b.len() == l.block_size));
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sane_blocks_and_strata(seed in any::<u64>(), q in 2u32..=4) {
        let n = q as usize + 2;
        let (d0, res) = affine_plane(q).unwrap();
        let input = CompositionInput::affine(d0, res, &jm_sample(n, seed, 10 * n * n * n)).unwrap();
        let c = check_against_hand(&input);
        let l = &c.ledger;
        let (same, cross) = pair_count_strata(&c);
        prop_assert_eq!(same, BTreeSet::from([l.lambda0 * l.r2]));
        prop_assert_eq!(cross, BTreeSet::from([l.lambda1 * l.lambda2]));
        prop_assert!(c.design.is_symmetric());
    }
}

#[test]
fn non_trivial_d1() {
    for (q, d1) in [
        (2, projective_plane(2).unwrap()),
        (3, projective_plane(3).unwrap()),
        (4, projective_plane(4).unwrap()),
        (3, projective_plane(2).unwrap().complement().unwrap()),
    ] {
        let input = plane_input(q, d1);
        let c = check_against_hand(&input);
        let (same, _) = pair_count_strata(&c);
        assert_eq!(same.len(), 1);
    }
    let (d0, res) = affine_space_hyperplanes(3, 2).unwrap();
    let c = check_against_hand(&CompositionInput::affine(d0, res, &LatinSquare::cyclic(8)).unwrap());
    assert_eq!(c.design.parameters().unwrap(), (64, 28, 12));
    assert_eq!(predict(&CompositionInput::affine(affine_plane(4).unwrap().0, affine_plane(4).unwrap().1, &LatinSquare::cyclic(6)).unwrap()).unwrap().lambda, Some(4));
}

#[test]
fn diagonal_translations_on_any_square() {
    for seed in 0..5 {
        let c = sane(4, &jm_sample(6, seed, 2160)).unwrap();
        for t in diagonal_translations(4, 6).unwrap() {
            assert!(is_automorphism(&c.design, &t));
        }
    }
}

fn power(g: &Permutation, m: usize) -> Permutation {
    (0..m).fold(Permutation::identity(g.degree()), |acc, _| acc.then(g))
}

fn order(g: &Permutation) -> usize {
    let mut p = g.clone();
    let mut m = 1;
    while !p.is_identity() {
        p = p.then(g);
        m += 1;
    }
    m
}

fn random_automorphisms(c: &Composition, count: usize, seed: u64) -> Vec<Permutation> {
    let gens = canonical_form(&c.design, Some(&c.point_partition())).unwrap().generators;
    let mut rng = rng_for(seed, 0);
    (0..count)
        .map(|_| {
            (0..15).fold(Permutation::identity(c.design.v()), |acc, _| {
                acc.then(&gens[rng.random_range(0..gens.len())])
            })
        })
        .collect()
}

fn inputs() -> Vec<CompositionInput> {
    vec![
        CompositionInput::affine(affine_plane(3).unwrap().0, affine_plane(3).unwrap().1, &LatinSquare::cyclic(5)).unwrap(),
        CompositionInput::affine(affine_plane(4).unwrap().0, affine_plane(4).unwrap().1, &jm_sample(6, 2, 2160)).unwrap(),
        ingredients(2, D2Labels::Complemented).unwrap(),
        ingredients(3, D2Labels::Complemented).unwrap(),
    ]
}

#[test]
fn phi_beta_is_a_homomorphism() {
    for input in inputs() {
        let c = construct(&input).unwrap();
        let frame = WreathFrame::new(&input);
        let auts = random_automorphisms(&c, 40, 5);
        let mut checked = 0;
        for beta in 0..input.d1().b() {
            let fixing: Vec<_> = auts
                .iter()
                .map(|g| decompose_wreath(g, c.v0, c.v1).unwrap())
                .filter(|w| frame.sigma_block(&w.sigma, beta) == Some(beta))
                .collect();
            for a in &fixing {
                for b in &fixing {
                    let ab = decompose_wreath(&a.to_permutation().then(&b.to_permutation()), c.v0, c.v1).unwrap();
                    let lhs = phi_beta(&ab, beta, &frame).unwrap();
                    let rhs = phi_beta(a, beta, &frame).unwrap().then(&phi_beta(b, beta, &frame).unwrap());
                    assert_eq!(lhs, rhs);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn trivial_sigma_fixes_every_class() {
    for input in inputs() {
        let c = construct(&input).unwrap();
        let frame = WreathFrame::new(&input);
        let classes = input.resolution().r();
        let mut nontrivial = 0;
        for g in random_automorphisms(&c, 30, 9) {
            let w = decompose_wreath(&g, c.v0, c.v1).unwrap();
            let k = power(&g, order(&w.sigma));
            assert!(is_automorphism(&c.design, &k));
            let wk = decompose_wreath(&k, c.v0, c.v1).unwrap();
            assert!(wk.sigma.is_identity());
            nontrivial += usize::from(!k.is_identity());
            for h in &wk.h {
                for cl in 0..classes {
                    assert_eq!(frame.class_image(h, cl), Some(cl));
                }
            }
        }
        assert!(nontrivial > 0);
    }
}

#[test]
fn trivial_d1_composition_is_sane() {
    let sq = LatinSquare::cyclic(4);
    let (d0, res) = affine_plane(2).unwrap();
    let via_new = {
        let d1 = trivial_symmetric(4).unwrap();
        let psi = symdesign::latin::latin_to_bijections(&sq, &d1, &[0, 1, 2]).unwrap();
        let (d2, g) = dual_transversal(&d0, &res).unwrap();
        construct(&CompositionInput::new(d0, res, d1, psi, d2, g).unwrap()).unwrap()
    };
    assert!(via_new.design.is_symmetric());
    assert_eq!(via_new.design.parameters().unwrap(), (16, 6, 2));
}
