//! Isomorphism search on every group of order at most 16.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use profinite::catalog;
use profinite::fingrp::{are_isomorphic, direct_product, semidirect_product, FiniteGroup, GroupHom};

const CAP: usize = 512;

fn c(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

fn prod(parts: &[FiniteGroup]) -> FiniteGroup {
    parts[1..].iter().fold(parts[0].clone(), |acc, g| direct_product(&acc, g))
}

/// `C_n ⋊ C_k`, the generator acting as multiplication by `u`.
fn cyclic_extension(n: usize, k: usize, u: usize) -> FiniteGroup {
    let act: Vec<Vec<usize>> = (0..k)
        .map(|h| {
            let m = (0..h).fold(1, |acc, _| acc * u % n);
            (0..n).map(|x| x * m % n).collect()
        })
        .collect();
    semidirect_product(&c(n), &c(k), &act).unwrap().group
}

fn named(name: &str) -> FiniteGroup {
    catalog::by_name(name, CAP).unwrap()
}

/// One representative of each isomorphism class, grouped by order.
fn all_groups() -> Vec<(String, FiniteGroup)> {
    let v4 = prod(&[c(2), c(2)]);
    let swap: Vec<Vec<usize>> = (0..4).map(|h| if h % 2 == 0 { vec![0, 1, 2, 3] } else { vec![0, 2, 1, 3] }).collect();
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    let mut add = |name: &str, g: FiniteGroup| out.push((name.to_string(), g));
    for n in [1, 2, 3, 5, 7, 11, 13, 15] {
        add(&format!("C{n}"), c(n));
    }
    add("C4", c(4));
    add("V4", named("V4"));
    add("C6", c(6));
    add("S3", named("S3"));
    add("C8", c(8));
    add("C4xC2", prod(&[c(4), c(2)]));
    add("C2^3", prod(&[c(2), c(2), c(2)]));
    add("D4", named("D4"));
    add("Q8", named("Q8"));
    add("C9", c(9));
    add("C3xC3", prod(&[c(3), c(3)]));
    add("C10", c(10));
    add("D5", named("D5"));
    add("C12", c(12));
    add("C6xC2", prod(&[c(6), c(2)]));
    add("D6", named("D6"));
    add("A4", named("A4"));
    add("Dic3", named("Dic3"));
    add("C14", c(14));
    add("D7", named("D7"));
    add("C16", c(16));
    add("C8xC2", prod(&[c(8), c(2)]));
    add("C4xC4", prod(&[c(4), c(4)]));
    add("C4xC2^2", prod(&[c(4), c(2), c(2)]));
    add("C2^4", prod(&[c(2), c(2), c(2), c(2)]));
    add("D8", named("D8"));
    add("SD16", cyclic_extension(8, 2, 3));
    add("M16", cyclic_extension(8, 2, 5));
    add("Q16", named("Q16"));
    add("C4:C4", cyclic_extension(4, 4, 3));
    add("C2^2:C4", semidirect_product(&v4, &c(4), &swap).unwrap().group);
    add("D4xC2", prod(&[named("D4"), c(2)]));
    add("Q8xC2", prod(&[named("Q8"), c(2)]));
    add("Pauli", named("Pauli"));
    out
}

#[test]
fn counts_by_order() {
    let groups = all_groups();
    let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
    for (n, &count) in expected.iter().enumerate() {
        let got = groups.iter().filter(|(_, g)| g.order() == n + 1).count();
        assert_eq!(got, count, "groups of order {}", n + 1);
    }
}

#[test]
fn distinct_classes_are_not_isomorphic() {
    let groups = all_groups();
    for (i, (n1, g1)) in groups.iter().enumerate() {
        for (n2, g2) in groups.iter().skip(i + 1).filter(|(_, g)| g.order() == g1.order()) {
            assert!(are_isomorphic(g1, g2, CAP).unwrap().is_none(), "{n1} and {n2} reported isomorphic");
        }
    }
}

#[test]
fn relabelled_copies_are_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for (name, g) in all_groups() {
        let mut perm: Vec<usize> = g.elements().collect();
        perm.shuffle(&mut rng);
        let h = g.relabel(&perm).unwrap();
        let iso = are_isomorphic(&g, &h, CAP).unwrap().unwrap_or_else(|| panic!("{name} not matched with a relabelling"));
        assert!(iso.is_isomorphism(), "{name}");
        // the witness is a homomorphism in its own right
        GroupHom::new(&g, &h, iso.images().to_vec()).unwrap();
    }
}
