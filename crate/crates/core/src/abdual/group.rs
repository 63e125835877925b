use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::rotation::Rotation;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::fingrp::FiniteGroup;

type Rot = Rotation<i64>;

/// Finite abelian group `Z/d_1 × … × Z/d_k` in invariant-factor form.
///
/// Elements are exponent vectors; they are indexed in mixed radix with the
/// first coordinate most significant, so index order is lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbGroup {
    factors: Vec<u64>,
}

impl AbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidFactors(format!("factor {d} < 2")));
        }
        if let Some(w) = factors.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::InvalidFactors(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(AbGroup { factors })
    }

    pub fn trivial() -> Self {
        AbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbGroup { factors: vec![n] }
        }
    }

    /// Canonical form of `Z/n_1 × … × Z/n_k` for arbitrary orders `n_i ≥ 1`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidFactors("cyclic order 0".into()));
        }
        let diag: Vec<i64> = orders.iter().map(|&n| n as i64).collect();
        let snf = smith_normal_form(&IntMatrix::diagonal(&diag));
        Self::new(snf.diagonal_entries().into_iter().filter(|&d| d > 1).map(|d| d as u64).collect())
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<u64>() as usize
    }

    /// Exponent of the group (largest invariant factor).
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1;
        v
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.factors).all(|(a, d)| a < d)
    }

    pub fn element(&self, mut index: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank()];
        for (slot, &d) in v.iter_mut().zip(&self.factors).rev() {
            *slot = (index as u64) % d;
            index /= d as usize;
        }
        v
    }

    pub fn index_of(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.factors).fold(0usize, |acc, (&a, &d)| acc * d as usize + a as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Reduce an arbitrary integer vector into the group.
    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter().zip(&self.factors).map(|(&a, &d)| a.rem_euclid(d as i64) as u64).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.factors).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.factors).map(|(a, d)| (d - a) % d).collect()
    }

    pub fn scale(&self, x: &[u64], k: i64) -> Vec<u64> {
        self.reduce(&x.iter().map(|&a| a as i64 * k).collect::<Vec<_>>())
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &d)| d / num_integer::gcd(a, d))
            .fold(1, num_integer::lcm)
    }

    /// Cayley table of the group.
    pub fn to_finite_group(&self) -> FiniteGroup {
        let elems: Vec<Vec<u64>> = self.elements().collect();
        FiniteGroup::from_fn(self.to_string(), self.order(), |a, b| self.index_of(&self.add(&elems[a], &elems[b])))
            .expect("abelian group table is valid")
    }

    /// Applies an integer matrix to an exponent vector (column convention).
    pub fn apply_matrix(&self, m: &IntMatrix<i64>, x: &[u64]) -> Vec<u64> {
        let xi: Vec<i64> = x.iter().map(|&a| a as i64).collect();
        let mods: Vec<i64> = self.factors.iter().map(|&d| d as i64).collect();
        m.apply_mod(&xi, &mods).into_iter().map(|a| a as u64).collect()
    }

    /// Whether `m` induces a well-defined endomorphism on exponent vectors.
    pub fn is_endomorphism_matrix(&self, m: &IntMatrix<i64>) -> bool {
        let k = self.rank();
        if m.rows() != k || m.cols() != k {
            return false;
        }
        // column j scaled by d_j must vanish in every coordinate
        (0..k).all(|j| (0..k).all(|i| (m[(i, j)] * self.factors[j] as i64).rem_euclid(self.factors[i] as i64) == 0))
    }

    /// Smallest subgroup containing `gens`.
    pub fn generate(&self, gens: &[Vec<u64>]) -> Result<AbSubgroup> {
        if let Some(g) = gens.iter().find(|g| !self.contains(g)) {
            return Err(Error::GroupMismatch(format!("{g:?} is not an element of {self}")));
        }
        let mut seen = vec![false; self.order()];
        let mut frontier = vec![self.zero()];
        seen[0] = true;
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                let iy = self.index_of(&y);
                if !seen[iy] {
                    seen[iy] = true;
                    frontier.push(y);
                }
            }
        }
        Ok(AbSubgroup {
            group: self.clone(),
            elems: seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect(),
        })
    }

    /// Validates an explicit subset as a subgroup.
    pub fn subgroup(&self, elems: &[Vec<u64>]) -> Result<AbSubgroup> {
        if let Some(g) = elems.iter().find(|g| !self.contains(g)) {
            return Err(Error::GroupMismatch(format!("{g:?} is not an element of {self}")));
        }
        let set: BTreeSet<usize> = elems.iter().map(|x| self.index_of(x)).collect();
        if !set.contains(&0) {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &set {
            for &b in &set {
                let s = self.index_of(&self.add(&self.element(a), &self.element(b)));
                if !set.contains(&s) {
                    return Err(Error::NotASubgroup("not closed under addition".into()));
                }
            }
        }
        Ok(AbSubgroup { group: self.clone(), elems: set.into_iter().collect() })
    }

    /// Every subgroup, sorted by order and then by element list.
    pub fn subgroups(&self) -> Vec<AbSubgroup> {
        let trivial = self.generate(&[]).expect("empty generating set");
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(trivial.elems.clone());
        let mut queue = vec![trivial];
        let mut out = Vec::new();
        while let Some(s) = queue.pop() {
            let members: HashSet<usize> = s.elems.iter().copied().collect();
            for x in 0..self.order() {
                if members.contains(&x) {
                    continue;
                }
                let mut gens: Vec<Vec<u64>> = s.elems.iter().map(|&i| self.element(i)).collect();
                gens.push(self.element(x));
                let t = self.generate(&gens).expect("elements of self");
                if seen.insert(t.elems.clone()) {
                    queue.push(t);
                }
            }
            out.push(s);
        }
        out.sort_by(|a, b| (a.len(), &a.elems).cmp(&(b.len(), &b.elems)));
        out
    }

    /// The dual group: characters have the same invariant factors.
    pub fn dual_group(&self) -> AbGroup {
        self.clone()
    }

    pub fn character(&self, exps: Vec<u64>) -> Result<Character> {
        if !self.contains(&exps) {
            return Err(Error::GroupMismatch(format!("{exps:?} is not a character of {self}")));
        }
        Ok(Character { group: self.clone(), exps })
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        self.elements().map(move |exps| Character { group: self.clone(), exps })
    }

    /// `Σ c_i x_i / d_i mod 1` on raw exponent vectors already known to lie in the group.
    pub fn pairing_raw(&self, chi: &[u64], x: &[u64]) -> Rot {
        let e = self.exponent();
        let num = chi
            .iter()
            .zip(x)
            .zip(&self.factors)
            .fold(0u64, |acc, ((&c, &a), &d)| (acc + (c * a % d) * (e / d)) % e);
        Rot::new(num as i64, e as i64)
    }

    /// The unique character taking the given values on the standard basis.
    pub fn character_from_basis_values(&self, values: &[Rot]) -> Result<Character> {
        if values.len() != self.rank() {
            return Err(Error::GroupMismatch("basis value count differs from rank".into()));
        }
        let mut exps = Vec::with_capacity(self.rank());
        for (v, &d) in values.iter().zip(&self.factors) {
            let den = *v.denom() as u64;
            if d % den != 0 {
                return Err(Error::NotACharacter(format!("value {v} on a generator of order {d}")));
            }
            exps.push(*v.numer() as u64 * (d / den));
        }
        Ok(Character { group: self.clone(), exps })
    }

    /// Solves for the character agreeing with `f`, checking the identity on every element.
    pub fn solve_character(&self, f: impl Fn(&[u64]) -> Rot) -> Result<Character> {
        let values: Vec<Rot> = (0..self.rank()).map(|i| f(&self.basis(i))).collect();
        let chi = self.character_from_basis_values(&values)?;
        for x in self.elements() {
            if self.pairing_raw(&chi.exps, &x) != f(&x) {
                return Err(Error::NotACharacter(format!("not additive at {x:?}")));
            }
        }
        Ok(chi)
    }

    /// `{χ : χ(s) = 0 for all s ∈ S}` as a subgroup of the dual.
    pub fn annihilator(&self, s: &AbSubgroup) -> Result<AbSubgroup> {
        if s.group != *self {
            return Err(Error::GroupMismatch(format!("subgroup of {} used with {self}", s.group)));
        }
        let dual = self.dual_group();
        let members: Vec<Vec<u64>> = s.elems.iter().map(|&i| self.element(i)).collect();
        let elems = (0..dual.order())
            .filter(|&c| {
                let chi = dual.element(c);
                members.iter().all(|x| self.pairing_raw(&chi, x).is_zero())
            })
            .collect();
        Ok(AbSubgroup { group: dual, elems })
    }

    /// Characters of `A/S`, realized as the characters of `A` trivial on `S`.
    pub fn characters_of_quotient(&self, s: &AbSubgroup) -> Result<Vec<Character>> {
        let ann = self.annihilator(s)?;
        Ok(ann.elems.iter().map(|&c| Character { group: self.clone(), exps: self.element(c) }).collect())
    }

    /// Evaluation map `A → dual(dual(A))`, `x ↦ (χ ↦ χ(x))`, solved through the pairing.
    pub fn evaluation_map(&self) -> Result<Vec<Character>> {
        let dual = self.dual_group();
        self.elements().map(|x| dual.solve_character(|chi| self.pairing_raw(chi, &x))).collect()
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbGroup({self})")
    }
}

/// A character `x ↦ Σ c_i x_i / d_i` of an [`AbGroup`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Character {
    group: AbGroup,
    exps: Vec<u64>,
}

impl Character {
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    pub fn index(&self) -> usize {
        self.group.index_of(&self.exps)
    }

    pub fn add(&self, other: &Character) -> Result<Character> {
        if self.group != other.group {
            return Err(Error::GroupMismatch("characters of different groups".into()));
        }
        Ok(Character { group: self.group.clone(), exps: self.group.add(&self.exps, &other.exps) })
    }
}

/// Character value `χ(x)` as an exact rotation.
pub fn pairing(chi: &Character, x: &[u64]) -> Result<Rot> {
    if !chi.group.contains(x) {
        return Err(Error::GroupMismatch(format!("{x:?} is not an element of {}", chi.group)));
    }
    Ok(chi.group.pairing_raw(&chi.exps, x))
}

/// Subgroup of an [`AbGroup`] as a sorted list of element indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbSubgroup {
    group: AbGroup,
    elems: Vec<usize>,
}

impl AbSubgroup {
    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn indices(&self) -> &[usize] {
        &self.elems
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.elems.iter().map(|&i| self.group.element(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.group.contains(x) && self.elems.binary_search(&self.group.index_of(x)).is_ok()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CharacterJson {
    pub exps: Vec<u64>,
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson { exps: self.exps.clone() }.serialize(s)
    }
}
