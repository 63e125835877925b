//! The finite levels `C_{n0} ≀ C_m` of the profinite lamplighter tower,
//! the maps between them, and coherent families over the divisibility poset.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::abdual::AbGroup;
use crate::charorbit::DualAction;
use crate::error::{Error, Result};
use crate::fingrp::{are_isomorphic, semidirect_product, FiniteGroup, GroupHom};
use crate::wreath::{wreath_order, wreath_product, WreathGroup};
use crate::{IntMatrix, Rotation};

/// One level: `C_{n0} ≀ C_m`, the lamp group `A(m)` of maps `C_m → C_{n0}`,
/// and the period-`m` characters `N̂(m)`.
#[derive(Clone, Debug)]
pub struct LampLevel {
    pub n0: u64,
    pub m: usize,
    pub wreath: WreathGroup,
    /// `A(m)`, coordinates `f̄(0), …, f̄(m-1)`.
    pub lamps: AbGroup,
    /// `N̂(m)`, coordinates are the exponents `Φ(0), …, Φ(m-1)` in `μ_{n0}`.
    pub characters: AbGroup,
}

impl LampLevel {
    pub fn group(&self) -> &FiniteGroup {
        &self.wreath.carrier
    }

    /// `⟨f̄, Φ⟩ = Σ_k Φ(k)·f̄(k) / n0`.
    pub fn pairing(&self, lamps: &[u64], phi: &[u64]) -> Rotation {
        self.lamps.pairing_raw(phi, lamps)
    }
}

fn power_group(n0: u64, m: usize) -> Result<AbGroup> {
    if n0 < 2 {
        return Err(Error::Parse(format!("n0 = {n0} must be at least 2")));
    }
    if m == 0 {
        return Err(Error::Parse("period must be at least 1".into()));
    }
    AbGroup::new(vec![n0; m])
}

pub fn lamp_level(n0: u64, m: usize, cap: usize) -> Result<LampLevel> {
    let lamps = power_group(n0, m)?;
    let wreath = wreath_product(&FiniteGroup::cyclic(n0 as usize), &FiniteGroup::cyclic(m), cap)?;
    Ok(LampLevel { n0, m, wreath, characters: lamps.clone(), lamps })
}

/// Character injection and lamp projection between periods `m2 | m1`.
#[derive(Clone, Debug)]
pub struct BaseProjection {
    pub n0: u64,
    pub m1: usize,
    pub m2: usize,
    /// `N̂(m2) → N̂(m1)` on character indices.
    pub char_inj: Vec<usize>,
    /// `A(m1) → A(m2)` on element indices, by fiber sums.
    pub base_proj: Vec<usize>,
}

/// Fiber sum `p(f̄)(k) = Σ_{j ≡ k (mod m2)} f̄(j)`.
pub fn fiber_sum(n0: u64, f: &[u64], m2: usize) -> Vec<u64> {
    let mut out = vec![0; m2];
    for (j, &v) in f.iter().enumerate() {
        out[j % m2] = (out[j % m2] + v) % n0;
    }
    out
}

/// `Φ ∘ i`: a period-`m2` character read with period `m1`.
pub fn inflate_character(phi: &[u64], m1: usize) -> Vec<u64> {
    (0..m1).map(|j| phi[j % phi.len()]).collect()
}

pub fn base_projection(n0: u64, m1: usize, m2: usize) -> Result<BaseProjection> {
    if m2 == 0 || !m1.is_multiple_of(m2) {
        return Err(Error::NotADivisor { m1, m2 });
    }
    let (a1, a2) = (power_group(n0, m1)?, power_group(n0, m2)?);
    let char_inj = a2.elements().map(|phi| a1.index_of(&inflate_character(&phi, m1))).collect();
    let base_proj = a1.elements().map(|f| a2.index_of(&fiber_sum(n0, &f, m2))).collect();
    Ok(BaseProjection { n0, m1, m2, char_inj, base_proj })
}

impl BaseProjection {
    /// The projection determined by `⟨p(f̄), Φ⟩ = ⟨f̄, Φ∘i⟩` alone: solve for
    /// the element of `A(m2)` whose pairing with each basis character matches.
    pub fn project_by_pairing(&self, f: &[u64]) -> Result<Vec<u64>> {
        let (a1, a2) = (power_group(self.n0, self.m1)?, power_group(self.n0, self.m2)?);
        let values: Vec<Rotation> =
            (0..self.m2).map(|k| a1.pairing_raw(&inflate_character(&a2.basis(k), self.m1), f)).collect();
        Ok(a2.character_from_basis_values(&values)?.exps().to_vec())
    }

    /// Exhaustive check of `⟨p(f̄), Φ⟩ = ⟨f̄, Φ∘i⟩` over all pairs.
    pub fn duality_identity_holds(&self) -> bool {
        let (a1, a2) = (power_group(self.n0, self.m1).unwrap(), power_group(self.n0, self.m2).unwrap());
        let phis: Vec<Vec<u64>> = a2.elements().collect();
        let ok = a1.elements().enumerate().all(|(fi, f)| {
            let pf = a2.element(self.base_proj[fi]);
            phis.iter().enumerate().all(|(ci, phi)| {
                a2.pairing_raw(phi, &pf) == a1.pairing_raw(&a1.element(self.char_inj[ci]), &f)
            })
        });
        ok
    }

    /// Whether the fiber-sum map agrees with the pairing-defined projection everywhere.
    pub fn matches_pairing_definition(&self) -> Result<bool> {
        let (a1, a2) = (power_group(self.n0, self.m1)?, power_group(self.n0, self.m2)?);
        for (fi, f) in a1.elements().enumerate() {
            if a2.index_of(&self.project_by_pairing(&f)?) != self.base_proj[fi] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Connecting map between two levels.
#[derive(Clone, Debug)]
pub struct TowerMap {
    pub base: BaseProjection,
    /// `(f̄, k) ↦ (p(f̄), k mod m2)`.
    pub group_proj: GroupHom,
}

pub fn tower_projection(n0: u64, m1: usize, m2: usize, cap: usize) -> Result<TowerMap> {
    let base = base_projection(n0, m1, m2)?;
    let from = lamp_level(n0, m1, cap)?;
    let to = lamp_level(n0, m2, cap)?;
    tower_map_between(&from, &to, base)
}

fn tower_map_between(from: &LampLevel, to: &LampLevel, base: BaseProjection) -> Result<TowerMap> {
    let (m1, m2) = (from.m, to.m);
    let image = from
        .group()
        .elements()
        .map(|x| base.base_proj[x / m1] * m2 + (x % m1) % m2)
        .collect();
    let group_proj = GroupHom::new(from.group(), to.group(), image)?;
    Ok(TowerMap { base, group_proj })
}

/// Levels for every `m ≤ max_m` whose table fits under `cap`, with all connecting maps.
#[derive(Clone, Debug)]
pub struct LampTower {
    pub n0: u64,
    pub levels: BTreeMap<usize, LampLevel>,
    /// Keyed by `(m1, m2)` with `m2 | m1`.
    pub maps: BTreeMap<(usize, usize), TowerMap>,
    /// Periods skipped because the level exceeds the cap.
    pub skipped: Vec<usize>,
}

pub fn lamp_tower(n0: u64, max_m: usize, cap: usize) -> Result<LampTower> {
    let mut levels = BTreeMap::new();
    let mut skipped = Vec::new();
    for m in 1..=max_m {
        match wreath_order(n0 as usize, m) {
            Some(o) if o <= cap => {
                levels.insert(m, lamp_level(n0, m, cap)?);
            }
            _ => skipped.push(m),
        }
    }
    let mut maps = BTreeMap::new();
    for (&m1, from) in &levels {
        for (&m2, to) in &levels {
            if m1 % m2 == 0 {
                maps.insert((m1, m2), tower_map_between(from, to, base_projection(n0, m1, m2)?)?);
            }
        }
    }
    Ok(LampTower { n0, levels, maps, skipped })
}

/// One coherence check `p(m0→m2) = p(m1→m2) ∘ p(m0→m1)`.
#[derive(Clone, Debug, Serialize)]
pub struct CoherenceCheck {
    pub chain: (usize, usize, usize),
    pub pass: bool,
}

impl LampTower {
    /// Every chain `m2 | m1 | m0` among the built levels.
    pub fn coherence_checks(&self) -> Vec<CoherenceCheck> {
        let ms: Vec<usize> = self.levels.keys().copied().collect();
        let mut out = Vec::new();
        for &m0 in &ms {
            for &m1 in ms.iter().filter(|&&m1| m0 % m1 == 0) {
                for &m2 in ms.iter().filter(|&&m2| m1 % m2 == 0) {
                    let direct = &self.maps[&(m0, m2)].group_proj;
                    let pass = self.maps[&(m0, m1)]
                        .group_proj
                        .then(&self.maps[&(m1, m2)].group_proj)
                        .is_ok_and(|c| c.images() == direct.images());
                    out.push(CoherenceCheck { chain: (m0, m1, m2), pass });
                }
            }
        }
        out
    }

    /// Image of a lamplighter element at every level.
    pub fn image_of(&self, g: &LampElement) -> Result<CoherentFamily> {
        if g.n0 != self.n0 {
            return Err(Error::GroupMismatch(format!("lamps mod {} in a tower mod {}", g.n0, self.n0)));
        }
        let entries = self.levels.iter().map(|(&m, level)| (m, g.reduce(level))).collect();
        Ok(CoherentFamily { entries })
    }

    /// Whether `family` is compatible with every connecting map.
    pub fn is_coherent(&self, family: &CoherentFamily) -> bool {
        self.maps.iter().all(|(&(m1, m2), map)| match (family.entries.get(&m1), family.entries.get(&m2)) {
            (Some(&x1), Some(&x2)) => map.group_proj.apply(x1) == x2,
            _ => true,
        })
    }
}

/// An element of the inverse limit, truncated to finitely many levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoherentFamily {
    /// period ↦ element index of that level's group
    pub entries: BTreeMap<usize, usize>,
}

/// An element `(f, s)` of the lamplighter `C_{n0} ≀ Z`, `f` finitely supported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LampElement {
    pub n0: u64,
    pub lamps: BTreeMap<i64, u64>,
    pub shift: i64,
}

impl LampElement {
    pub fn new(n0: u64, lamps: &[(i64, i64)], shift: i64) -> Self {
        let mut map = BTreeMap::new();
        for &(k, v) in lamps {
            let e = map.entry(k).or_insert(0);
            *e = (*e + v.rem_euclid(n0 as i64) as u64) % n0;
        }
        map.retain(|_, v| *v != 0);
        LampElement { n0, lamps: map, shift }
    }

    /// `(f, s)(f', s') = (f + s·f', s + s')`, with `(s·f')(x) = f'(x - s)`.
    pub fn mul(&self, other: &LampElement) -> LampElement {
        let mut lamps = self.lamps.clone();
        for (&k, &v) in &other.lamps {
            let e = lamps.entry(k + self.shift).or_insert(0);
            *e = (*e + v) % self.n0;
        }
        lamps.retain(|_, v| *v != 0);
        LampElement { n0: self.n0, lamps, shift: self.shift + other.shift }
    }

    fn reduce(&self, level: &LampLevel) -> usize {
        let m = level.m;
        let mut f = vec![0u64; m];
        for (&k, &v) in &self.lamps {
            let r = k.rem_euclid(m as i64) as usize;
            f[r] = (f[r] + v) % self.n0;
        }
        level.lamps.index_of(&f) * m + self.shift.rem_euclid(m as i64) as usize
    }
}

/// Level `m` rebuilt from character data: `dual(N̂(m)) ⋊ C_m`, with `C_m`
/// shifting characters by `(a·Φ)(k) = Φ(k - a)` and acting on the dual by
/// the contragredient action.
pub fn character_level_group(n0: u64, m: usize) -> Result<FiniteGroup> {
    let nhat = power_group(n0, m)?;
    let cm = FiniteGroup::cyclic(m);
    let mats: Vec<IntMatrix> = cm
        .elements()
        .map(|a| {
            let mut mat = IntMatrix::zeros(m, m);
            for k in 0..m {
                mat[((k + a) % m, k)] = 1;
            }
            mat
        })
        .collect();
    let shift = DualAction::new(&cm, &nhat, mats)?;
    let dual = nhat.dual_group();
    let perms: Vec<Vec<usize>> = cm.elements().map(|a| shift.character_permutation(a).to_vec()).collect();
    Ok(semidirect_product(&dual.to_finite_group(), &cm, &perms)?.group.with_label(format!("dual(N({m})):C{m}")))
}

/// Verified isomorphism from [`character_level_group`] onto `C_{n0} ≀ C_m`.
pub fn verify_level_iso(n0: u64, m: usize, cap: usize) -> Result<GroupHom> {
    let level = lamp_level(n0, m, cap)?;
    let rebuilt = character_level_group(n0, m)?;
    are_isomorphic(&rebuilt, level.group(), cap)?
        .ok_or_else(|| Error::WitnessNotFound(format!("level ({n0}, {m}) differs from its reconstruction")))
}
