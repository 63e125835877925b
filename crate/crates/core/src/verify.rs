//! The acceptance suite as library checks. Each function covers one
//! criterion and returns a single [`Check`] whose detail names the first
//! failure, if any.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abdual::AbGroup;
use crate::catalog;
use crate::charorbit::reconstruct_split_extension;
use crate::error::Result;
use crate::findex::{core_quotient, low_index_subgroups, Presentation};
use crate::fingrp::are_isomorphic;
use crate::heisen::{char_orbit_data, connecting_map, h_level, heisenberg, ideals, FiniteRing};
use crate::lamptower::{base_projection, lamp_tower, verify_level_iso};
use crate::report::Check;
use crate::wreath::{rf_map_verdict, separating_character, LampConfig, RfMapFlags};
use crate::Rotation;

pub const DUALITY_MAX_ORDER: usize = 64;
pub const ANNIHILATOR_MAX_ORDER: usize = 36;
pub const DUALITY_PAIRS: [(u64, usize, usize); 5] = [(2, 4, 2), (2, 6, 3), (2, 6, 2), (3, 6, 3), (3, 4, 2)];
pub const LEVEL_ISO_CASES: [(u64, usize); 4] = [(2, 1), (2, 2), (2, 3), (3, 2)];
pub const HEISENBERG_RINGS: [&str; 5] = ["2", "3", "4", "6", "2x2"];
pub const SEPARATION_SAMPLES: usize = 100;
const SEPARATION_SEED: u64 = 0x1a3b;

fn outcome(name: &str, run: impl FnOnce() -> Result<std::result::Result<String, String>>) -> Check {
    match run() {
        Ok(Ok(detail)) => Check::new(name, true, detail),
        Ok(Err(detail)) => Check::new(name, false, detail),
        Err(e) => Check::new(name, false, format!("error: {e}")),
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Ok(Err(format!($($fmt)*)));
        }
    };
}

/// Invariant-factor lists `d_1 | d_2 | …` with product at most `max_order`, the trivial group included.
pub fn invariant_factor_lists(max_order: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, product: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let step = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { step };
        while product * d <= max {
            prefix.push(d);
            extend(prefix, product * d, max, out);
            prefix.pop();
            d += step;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out
}

/// Double duality for every group of order at most 64 and `|S|·|Ann(S)| = |A|`
/// for every subgroup of every group of order at most 36.
pub fn duality() -> Check {
    outcome("duality", || {
        let lists = invariant_factor_lists(DUALITY_MAX_ORDER as u64);
        let mut subgroups = 0;
        for factors in &lists {
            let a = AbGroup::new(factors.clone())?;
            let ev = a.evaluation_map()?;
            let mut seen = vec![false; a.order()];
            for beta in &ev {
                ensure!(!std::mem::replace(&mut seen[beta.index()], true), "evaluation map of {a} is not injective");
            }
            for x in 0..a.order() {
                for y in 0..a.order() {
                    let sum = ev[a.index_of(&a.add(&a.element(x), &a.element(y)))].clone();
                    ensure!(ev[x].add(&ev[y])? == sum, "evaluation map of {a} is not additive");
                }
            }
            if a.order() <= ANNIHILATOR_MAX_ORDER {
                for s in a.subgroups() {
                    let ann = a.annihilator(&s)?;
                    ensure!(s.len() * ann.len() == a.order(), "|S|·|Ann S| != |A| in {a}");
                    subgroups += 1;
                }
            }
        }
        Ok(Ok(format!("{} groups double-dual, {subgroups} subgroups annihilated", lists.len())))
    })
}

/// Every catalog split extension is rebuilt from its character data.
pub fn reconstruction() -> Check {
    outcome("reconstruction", || {
        for name in catalog::SPLIT_EXTENSIONS {
            let ext = catalog::split_extension(name)?;
            let r = reconstruct_split_extension(&ext.group, &ext.normal, &ext.complement)?;
            ensure!(r.witness.is_isomorphism(), "{name}: witness is not an isomorphism");
        }
        Ok(Ok(catalog::SPLIT_EXTENSIONS.join(", ")))
    })
}

/// Lamplighter levels, maps, coherence, the pairing identity and the level isomorphisms.
pub fn lamplighter(cap: usize) -> Check {
    outcome("lamplighter-tower", || {
        let mut levels = 0;
        let mut maps = 0;
        let mut skipped = Vec::new();
        for n0 in [2u64, 3] {
            let tower = lamp_tower(n0, 6, cap)?;
            for (&m, level) in &tower.levels {
                let lamps = n0.pow(m as u32) as usize;
                ensure!(level.group().order() == lamps * m, "level ({n0}, {m}) has order {}", level.group().order());
                ensure!(level.characters.order() == lamps, "level ({n0}, {m}) has {} characters", level.characters.order());
                levels += 1;
            }
            for (&(m1, m2), map) in &tower.maps {
                let hom = &map.group_proj;
                ensure!(hom.is_surjective(), "({n0}, {m1}, {m2}) projection is not onto");
                let expected = n0.pow(m1 as u32) as usize * m1 / (n0.pow(m2 as u32) as usize * m2);
                ensure!(hom.kernel().len() == expected, "({n0}, {m1}, {m2}) kernel has order {}", hom.kernel().len());
                maps += 1;
            }
            if let Some(c) = tower.coherence_checks().iter().find(|c| !c.pass) {
                return Ok(Err(format!("n0 = {n0}: chain {:?} is not coherent", c.chain)));
            }
            skipped.extend(tower.skipped.iter().map(|m| format!("({n0}, {m})")));
        }
        for (n0, m1, m2) in DUALITY_PAIRS {
            let p = base_projection(n0, m1, m2)?;
            ensure!(p.duality_identity_holds(), "pairing identity fails at ({n0}, {m1}, {m2})");
            ensure!(p.matches_pairing_definition()?, "fiber sums differ from the dual projection at ({n0}, {m1}, {m2})");
        }
        for (n0, m) in LEVEL_ISO_CASES {
            ensure!(verify_level_iso(n0, m, cap)?.is_isomorphism(), "level ({n0}, {m}) is not rebuilt");
        }
        let skipped = if skipped.is_empty() { String::new() } else { format!(", over cap {}", skipped.join(" ")) };
        Ok(Ok(format!("{levels} levels, {maps} maps{skipped}")))
    })
}

/// Orbit and stabilizer formulas, `H(Z/2) ≅ D4`, and level kernels.
pub fn heisenberg_family(cap: usize) -> Check {
    outcome("heisenberg", || {
        let mut pairs = 0;
        for name in HEISENBERG_RINGS {
            let ring: FiniteRing = name.parse()?;
            let heis = heisenberg(&ring, cap)?;
            let r = ring.order();
            for beta in 0..r {
                for psi in 0..r {
                    let d = char_orbit_data(&heis, beta, psi);
                    ensure!(d.consistent(), "{ring}: orbit data for (β, ψ) = ({beta}, {psi}) disagrees: {d:?}");
                    pairs += 1;
                }
            }
            let all = ideals(&ring);
            let mut levels = Vec::new();
            for ideal in &all {
                let level = h_level(&heis, ideal, cap)?;
                let expected: Vec<(usize, usize, usize)> = ideal.elements().iter().map(|&c| (0, 0, c)).collect();
                ensure!(level.kernel_triples() == expected, "{ring}: wrong kernel for ideal {:?}", ideal.elements());
                levels.push(level);
            }
            for i in &levels {
                for j in levels.iter().filter(|j| i.ideal.is_subset_of(&j.ideal)) {
                    let step = connecting_map(i, j)?;
                    let composed = i.canonical.then(&step)?;
                    ensure!(composed.images() == j.canonical.images(), "{ring}: levels are not coherent");
                }
            }
        }
        let h2 = heisenberg(&"2".parse()?, cap)?;
        ensure!(are_isomorphic(&h2.group, &catalog::dihedral(4)?, cap)?.is_some(), "H(Z/2) is not D4");
        Ok(Ok(format!("{} rings, {pairs} character pairs", HEISENBERG_RINGS.len())))
    })
}

/// The verdict written case by case, kept apart from [`rf_map_verdict`].
fn verdict_table(f: &RfMapFlags) -> (bool, bool) {
    let wreath_shape_ok = if f.h_finite { true } else { f.lambda_abelian };
    let map = if f.lambda_map && f.h_rf { wreath_shape_ok } else { false };
    let rf = match (f.lambda_rf, f.h_rf) {
        (true, true) => wreath_shape_ok,
        _ => false,
    };
    (map, rf)
}

/// The verdict agrees with the case table on every admissible flag setting.
pub fn rf_map_table() -> Check {
    outcome("rf-map-verdict", || {
        let all = RfMapFlags::admissible();
        for f in &all {
            let v = rf_map_verdict(f)?;
            ensure!((v.map, v.rf) == verdict_table(f), "verdict differs at {f:?}");
        }
        let lamplighter = RfMapFlags { lambda_map: true, lambda_rf: true, lambda_abelian: true, h_rf: true, ..Default::default() };
        let v = rf_map_verdict(&lamplighter)?;
        ensure!(v.map && v.rf, "lamplighter verdict is {v:?}");
        let s3_wr_z = RfMapFlags { lambda_map: true, lambda_rf: true, h_rf: true, ..Default::default() };
        let v = rf_map_verdict(&s3_wr_z)?;
        ensure!(!v.map && !v.rf, "S3 wr Z verdict is {v:?}");
        let s3_wr_finite = RfMapFlags { h_finite: true, ..s3_wr_z };
        let v = rf_map_verdict(&s3_wr_finite)?;
        ensure!(v.map && v.rf, "S3 wr finite verdict is {v:?}");
        Ok(Ok(format!("{} flag settings", all.len())))
    })
}

/// Random lamp configurations with support in `[-10, 10]` and `n0 ∈ {2, 3, 4}`.
pub fn random_lamp_configs(count: usize, seed: u64) -> Vec<LampConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n0 = rng.gen_range(2..=4u64);
            let size = rng.gen_range(1..=6);
            let mut points: Vec<(i64, i64)> = Vec::new();
            while points.len() < size {
                let k = rng.gen_range(-10..=10);
                if points.iter().all(|&(p, _)| p != k) {
                    points.push((k, rng.gen_range(1..n0 as i64)));
                }
            }
            LampConfig::new(n0, &points).expect("nonzero configuration")
        })
        .collect()
}

/// The separating character is periodic, sees distinct residues, and pairs nontrivially.
pub fn separating_characters() -> Check {
    outcome("separating-characters", || {
        for f in random_lamp_configs(SEPARATION_SAMPLES, SEPARATION_SEED) {
            let s = separating_character(&f);
            let m = s.period as i64;
            ensure!(s.phi.len() == s.period, "character length differs from its period for {f:?}");
            let mut residues: Vec<i64> = f.support().keys().map(|k| k.rem_euclid(m)).collect();
            residues.sort_unstable();
            residues.dedup();
            ensure!(residues.len() == f.support().len(), "residues collide mod {m} for {f:?}");
            let total: u64 = f.support().iter().map(|(&k, &v)| s.phi[k.rem_euclid(m) as usize] * v).sum();
            let value = Rotation::new((total % f.n0()) as i64, f.n0() as i64);
            ensure!(!value.is_zero() && value == s.value, "pairing is {value} for {f:?}");
        }
        Ok(Ok(format!("{SEPARATION_SAMPLES} random configurations")))
    })
}

/// Subgroups of `Z²` of index `n`, counted through Hermite normal forms `[[a, b], [0, d]]`.
pub fn hermite_form_count(n: usize) -> usize {
    (1..=n).filter(|a| n.is_multiple_of(*a)).map(|a| n / a).sum()
}

/// Subgroups of `F_2` of index `n`: transitive pairs of permutations over `(n-1)!`.
pub fn free_rank_two_count(n: usize) -> usize {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let all = perms(n);
    let mut transitive = 0;
    for s in &all {
        for t in &all {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for y in [s[x], t[x]] {
                    if !std::mem::replace(&mut seen[y], true) {
                        stack.push(y);
                    }
                }
            }
            transitive += usize::from(seen.iter().all(|&b| b));
        }
    }
    transitive / (1..n).product::<usize>()
}

fn index_counts(p: &Presentation, n_max: usize) -> Result<Vec<usize>> {
    let recs = low_index_subgroups(p, n_max)?;
    Ok((1..=n_max).map(|k| recs.iter().filter(|r| r.index == k).count()).collect())
}

/// Low-index counts against closed forms and oracles, and the core quotient of `Z`.
pub fn low_index(cap: usize) -> Check {
    outcome("low-index", || {
        let z: Presentation = "a;".parse()?;
        ensure!(index_counts(&z, 7)? == vec![1; 7], "Z counts are {:?}", index_counts(&z, 7)?);
        let z2: Presentation = "a,b;abAB".parse()?;
        let expected: Vec<usize> = (1..=6).map(hermite_form_count).collect();
        let got = index_counts(&z2, 6)?;
        ensure!(got == expected, "Z² counts {got:?}, Hermite forms give {expected:?}");
        let f2: Presentation = "a,b;".parse()?;
        let expected: Vec<usize> = (1..=3).map(free_rank_two_count).collect();
        let got = index_counts(&f2, 3)?;
        ensure!(got == expected, "F2 counts {got:?}, transitive actions give {expected:?}");
        let q = core_quotient(&z, 4, cap)?;
        ensure!(
            q.group.order() == 12 && q.group.element_order(q.generator_images[0]) == 12,
            "core quotient of Z at index 4 has order {}",
            q.group.order()
        );
        Ok(Ok("Z, Z², F2 counts and the Z core quotient".into()))
    })
}

/// Criteria 1 to 7 in order.
pub fn all(cap: usize) -> Vec<Check> {
    vec![
        duality(),
        reconstruction(),
        lamplighter(cap),
        heisenberg_family(cap),
        rf_map_table(),
        separating_characters(),
        low_index(cap),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        assert_eq!((2..=6).map(hermite_form_count).collect::<Vec<_>>(), vec![3, 4, 7, 6, 12]);
        assert_eq!(free_rank_two_count(2), 3);
        assert_eq!(free_rank_two_count(3), 13);
    }

    #[test]
    fn factor_lists() {
        let small = invariant_factor_lists(8);
        assert_eq!(small.len(), 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3);
        assert!(small.contains(&vec![2, 2, 2]));
        assert!(small.contains(&vec![2, 4]));
    }
}
