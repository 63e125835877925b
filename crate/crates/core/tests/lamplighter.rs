//! Finite quotients of the lamplighter group and their connecting maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use profinite::lamptower::{
    base_projection, character_level_group, fiber_sum, inflate_character, lamp_level, lamp_tower, tower_projection,
    verify_level_iso, LampElement,
};
use profinite::Rotation;

const CAP: usize = 512;

/// All vectors in `(Z/n)^m` in mixed-radix order, last coordinate fastest.
fn vectors(n: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out.into_iter().flat_map(|v| (0..n).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn pair(n0: u64, phi: &[u64], f: &[u64]) -> Rotation {
    Rotation::new(phi.iter().zip(f).map(|(a, b)| (a * b) as i64).sum(), n0 as i64)
}

#[test]
fn level_orders_and_skips() {
    let t = lamp_tower(2, 6, CAP).unwrap();
    let orders: Vec<usize> = t.levels.values().map(|l| l.group().order()).collect();
    assert_eq!(orders, vec![2, 8, 24, 64, 160, 384]);
    assert!(t.skipped.is_empty());
    let t = lamp_tower(3, 6, CAP).unwrap();
    assert_eq!(t.levels.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    assert_eq!(t.skipped, vec![5, 6]);
    for (&(m1, m2), map) in &t.maps {
        assert_eq!(m1 % m2, 0);
        assert!(map.group_proj.is_surjective());
        let expected = 3usize.pow((m1 - m2) as u32) * (m1 / m2);
        assert_eq!(map.group_proj.kernel().len(), expected, "({m1}, {m2})");
    }
}

#[test]
fn projection_is_the_fiber_sum() {
    for (n0, m1, m2) in [(2, 4, 2), (2, 6, 3), (2, 6, 2), (3, 6, 3), (3, 4, 2), (2, 5, 1)] {
        let p = base_projection(n0, m1, m2).unwrap();
        let lamps = vectors(n0, m1);
        for (i, f) in lamps.iter().enumerate() {
            let mut by_hand = vec![0; m2];
            for (x, v) in f.iter().enumerate() {
                by_hand[x % m2] = (by_hand[x % m2] + v) % n0;
            }
            assert_eq!(fiber_sum(n0, f, m2), by_hand);
            assert_eq!(vectors(n0, m2)[p.base_proj[i]], by_hand);
        }
    }
}

#[test]
fn duality_identity_exhaustive() {
    for (n0, m1, m2) in [(2, 4, 2), (2, 6, 3), (2, 6, 2), (3, 6, 3), (3, 4, 2)] {
        let p = base_projection(n0, m1, m2).unwrap();
        assert!(p.duality_identity_holds());
        assert!(p.matches_pairing_definition().unwrap());
        for f in vectors(n0, m1) {
            let pf = fiber_sum(n0, &f, m2);
            for phi in vectors(n0, m2) {
                let lifted = inflate_character(&phi, m1);
                assert_eq!(lifted.len(), m1);
                assert_eq!(pair(n0, &phi, &pf), pair(n0, &lifted, &f));
            }
        }
    }
    assert!(base_projection(2, 6, 4).is_err());
}

#[test]
fn levels_rebuilt_from_characters() {
    for (n0, m) in [(2, 1), (2, 2), (2, 3), (3, 2)] {
        let iso = verify_level_iso(n0, m, CAP).unwrap();
        assert!(iso.is_isomorphism());
        assert_eq!(character_level_group(n0, m).unwrap().order(), lamp_level(n0, m, CAP).unwrap().group().order());
    }
}

#[test]
fn tower_maps_compose() {
    for n0 in [2, 3] {
        let t = lamp_tower(n0, 6, CAP).unwrap();
        let checks = t.coherence_checks();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.pass));
    }
    let direct = tower_projection(2, 4, 1, CAP).unwrap();
    let via = tower_projection(2, 4, 2, CAP).unwrap().group_proj.then(&tower_projection(2, 2, 1, CAP).unwrap().group_proj);
    assert_eq!(via.unwrap().images(), direct.group_proj.images());
}

fn random_element(rng: &mut ChaCha8Rng, n0: u64) -> LampElement {
    let lamps: Vec<(i64, i64)> = (0..rng.gen_range(0..5)).map(|_| (rng.gen_range(-8..=8), rng.gen_range(0..n0 as i64))).collect();
    LampElement::new(n0, &lamps, rng.gen_range(-6..=6))
}

#[test]
fn lamplighter_elements_give_coherent_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n0 in [2, 3] {
        let t = lamp_tower(n0, 6, CAP).unwrap();
        for _ in 0..200 {
            let (g, h) = (random_element(&mut rng, n0), random_element(&mut rng, n0));
            let (fg, fh) = (t.image_of(&g).unwrap(), t.image_of(&h).unwrap());
            let fgh = t.image_of(&g.mul(&h)).unwrap();
            assert!(t.is_coherent(&fg) && t.is_coherent(&fgh));
            for (m, level) in &t.levels {
                assert_eq!(level.group().mul(fg.entries[m], fh.entries[m]), fgh.entries[m]);
            }
        }
        assert!(t.image_of(&LampElement::new(n0 + 1, &[], 0)).is_err());
    }
}

#[test]
fn lamp_element_arithmetic() {
    let t = LampElement::new(2, &[], 1);
    let a = LampElement::new(2, &[(0, 1)], 0);
    let ta = t.mul(&a);
    assert_eq!(ta.lamps.keys().copied().collect::<Vec<_>>(), vec![1]);
    assert_eq!(a.mul(&a), LampElement::new(2, &[], 0));
    assert_eq!(LampElement::new(3, &[(2, 1), (2, 2)], 0).lamps.len(), 0);
}
