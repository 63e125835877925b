//! Heisenberg groups `H(R)` over rings `R = Z/n_1 × … × Z/n_k`, their level
//! groups `H(R, I)`, and the orbit data of characters of `N = {(0,b,c)}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::charorbit::{reconstruct_split_extension, Reconstruction};
use crate::error::{Error, Result};
use crate::fingrp::{direct_product, FiniteGroup, GroupHom, Subgroup};
use crate::Rotation;

/// `Z/n_1 × … × Z/n_k` with componentwise operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteRing {
    moduli: Vec<u64>,
}

impl FiniteRing {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&n| n < 2) {
            return Err(Error::InvalidFactors(format!("ring moduli {moduli:?} must be at least 2")));
        }
        Ok(FiniteRing { moduli })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    /// Mixed radix, first component most significant.
    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &n) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = idx as u64 % n;
            idx /= n as usize;
        }
        out
    }

    pub fn index_of(&self, x: &[u64]) -> usize {
        x.iter().zip(&self.moduli).fold(0, |acc, (&v, &n)| acc * n as usize + (v % n) as usize)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, |a, b, n| (a + b) % n)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.combine(x, y, |a, b, n| a * b % n)
    }

    pub fn neg(&self, x: usize) -> usize {
        let v: Vec<u64> = self.element(x).iter().zip(&self.moduli).map(|(&a, &n)| (n - a) % n).collect();
        self.index_of(&v)
    }

    pub fn one(&self) -> usize {
        self.index_of(&vec![1; self.moduli.len()])
    }

    fn combine(&self, x: usize, y: usize, op: impl Fn(u64, u64, u64) -> u64) -> usize {
        let (a, b) = (self.element(x), self.element(y));
        let v: Vec<u64> = (0..a.len()).map(|i| op(a[i], b[i], self.moduli[i])).collect();
        self.index_of(&v)
    }

    /// Additive characters, indexed like ring elements: `ψ_e(x) = Σ e_i x_i / n_i`.
    pub fn character_value(&self, e: usize, x: usize) -> Rotation {
        let (e, x) = (self.element(e), self.element(x));
        self.moduli
            .iter()
            .enumerate()
            .map(|(i, &n)| Rotation::new((e[i] * x[i] % n) as i64, n as i64))
            .sum()
    }
}

impl FromStr for FiniteRing {
    type Err = Error;

    /// `"4"` or `"2x2"`.
    fn from_str(s: &str) -> Result<Self> {
        let moduli = s
            .split(['x', 'X', '*'])
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad ring modulus {t:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        FiniteRing::new(moduli)
    }
}

impl fmt::Display for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z/{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ideal {
    #[serde(skip)]
    ring: FiniteRing,
    elems: Vec<usize>,
}

impl Ideal {
    pub fn new(ring: &FiniteRing, elems: &[usize]) -> Result<Self> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let n = ring.order();
        let mut member = vec![false; n];
        for &x in &elems {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, order: n });
            }
            member[x] = true;
        }
        let closed = member[0]
            && elems.iter().all(|&x| {
                elems.iter().all(|&y| member[ring.add(x, y)]) && (0..n).all(|r| member[ring.mul(r, x)])
            });
        if !closed {
            return Err(Error::NotAnIdeal);
        }
        Ok(Ideal { ring: ring.clone(), elems })
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn elements(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    /// Coset number of each ring element in `R/I`, numbered by smallest representative.
    pub fn coset_labels(&self) -> (Vec<usize>, usize) {
        let n = self.ring.order();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            if label[x] == usize::MAX {
                for &i in &self.elems {
                    label[self.ring.add(x, i)] = count;
                }
                count += 1;
            }
        }
        (label, count)
    }
}

/// All ideals, sorted by size and then by element list.
pub fn ideals(ring: &FiniteRing) -> Vec<Ideal> {
    // every ideal of a product of Z/n_i is a product of ideals d_i·Z/n_i
    let divisors: Vec<Vec<u64>> = ring.moduli.iter().map(|&n| (1..=n).filter(|d| n % d == 0).collect()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; divisors.len()];
    loop {
        let elems: Vec<usize> = (0..ring.order())
            .filter(|&x| {
                let v = ring.element(x);
                v.iter().zip(&choice).enumerate().all(|(i, (&a, &c))| a % divisors[i][c] == 0)
            })
            .collect();
        out.push(Ideal { ring: ring.clone(), elems });
        let mut i = 0;
        loop {
            if i == choice.len() {
                out.sort_by(|a, b| (a.len(), &a.elems).cmp(&(b.len(), &b.elems)));
                return out;
            }
            choice[i] += 1;
            if choice[i] < divisors[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// `I_ψ = {a : aR ⊆ ker ψ}`.
pub fn stabilizer_ideal(ring: &FiniteRing, psi: usize) -> Ideal {
    let n = ring.order();
    let elems: Vec<usize> =
        (0..n).filter(|&a| (0..n).all(|r| ring.character_value(psi, ring.mul(a, r)).is_zero())).collect();
    Ideal { ring: ring.clone(), elems }
}

/// `H(R)` with `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`, element `(a,b,c)`
/// stored at `(a·|R| + b)·|R| + c`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    pub ring: FiniteRing,
    pub group: FiniteGroup,
    /// `{(0,b,c)}`
    pub n: Subgroup,
    /// `{(a,0,0)}`
    pub h: Subgroup,
}

impl Heisenberg {
    pub fn encode(&self, a: usize, b: usize, c: usize) -> usize {
        let r = self.ring.order();
        (a * r + b) * r + c
    }

    pub fn decode(&self, x: usize) -> (usize, usize, usize) {
        let r = self.ring.order();
        (x / (r * r), x / r % r, x % r)
    }
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        return Err(Error::CapExceeded { order, cap });
    }
    Ok(())
}

pub fn heisenberg(ring: &FiniteRing, cap: usize) -> Result<Heisenberg> {
    let r = ring.order();
    let order = r.checked_pow(3).unwrap_or(usize::MAX);
    check_cap(order, cap)?;
    let split = |x: usize| (x / (r * r), x / r % r, x % r);
    let group = FiniteGroup::from_fn(format!("H({ring})"), order, |x, y| {
        let ((a, b, c), (a2, b2, c2)) = (split(x), split(y));
        let c3 = ring.add(ring.add(c, c2), ring.mul(a, b2));
        (ring.add(a, a2) * r + ring.add(b, b2)) * r + c3
    })?;
    let n = Subgroup::from_elements(&group, &(0..r * r).collect::<Vec<_>>())?;
    let h = Subgroup::from_elements(&group, &(0..r).map(|a| a * r * r).collect::<Vec<_>>())?;
    Ok(Heisenberg { ring: ring.clone(), group, n, h })
}

/// `H(R, I) = R × R × R/I`, with the canonical map from `H(R)`.
#[derive(Clone, Debug)]
pub struct HLevel {
    pub ideal: Ideal,
    pub group: FiniteGroup,
    pub canonical: GroupHom,
    coset: Vec<usize>,
    cosets: usize,
}

impl HLevel {
    pub fn ring(&self) -> &FiniteRing {
        self.ideal.ring()
    }

    /// Kernel of the canonical map as `(a,b,c)` triples.
    pub fn kernel_triples(&self) -> Vec<(usize, usize, usize)> {
        let r = self.ring().order();
        self.canonical.kernel().elements().iter().map(|&x| (x / (r * r), x / r % r, x % r)).collect()
    }
}

pub fn h_level(heis: &Heisenberg, ideal: &Ideal, cap: usize) -> Result<HLevel> {
    let ring = &heis.ring;
    if ideal.ring() != ring {
        return Err(Error::GroupMismatch(format!("ideal of {} used with H({ring})", ideal.ring())));
    }
    let r = ring.order();
    let (coset, q) = ideal.coset_labels();
    let rep: Vec<usize> = (0..q).map(|k| coset.iter().position(|&l| l == k).unwrap()).collect();
    check_cap(r * r * q, cap)?;
    let split = |x: usize| (x / (r * q), x / q % r, x % q);
    let group = FiniteGroup::from_fn(format!("H({ring},I{})", ideal.len()), r * r * q, |x, y| {
        let ((a, b, z), (a2, b2, z2)) = (split(x), split(y));
        let z3 = coset[ring.add(ring.add(rep[z], rep[z2]), ring.mul(a, b2))];
        (ring.add(a, a2) * r + ring.add(b, b2)) * q + z3
    })?;
    let image = heis.group.elements().map(|x| {
        let (a, b, c) = heis.decode(x);
        (a * r + b) * q + coset[c]
    });
    let canonical = GroupHom::new(&heis.group, &group, image.collect())?;
    Ok(HLevel { ideal: ideal.clone(), group, canonical, coset, cosets: q })
}

/// `H(R, I) → H(R, J)` for `I ⊆ J`.
pub fn connecting_map(from: &HLevel, to: &HLevel) -> Result<GroupHom> {
    if !from.ideal.is_subset_of(&to.ideal) {
        return Err(Error::NotASubgroup("source ideal is not contained in the target ideal".into()));
    }
    let r = from.ring().order();
    let (q1, q2) = (from.cosets, to.cosets);
    let rep: Vec<usize> = (0..q1).map(|k| from.coset.iter().position(|&l| l == k).unwrap()).collect();
    let image = from.group.elements().map(|x| (x / q1) * q2 + to.coset[rep[x % q1]]).collect();
    debug_assert_eq!(from.group.order() / q1, r * r);
    GroupHom::new(&from.group, &to.group, image)
}

/// Orbit data of `χ_{β,ψ}(0,b,c) = β(b)ψ(c)` under conjugation by `H = {(a,0,0)}`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitData {
    pub beta: usize,
    pub psi: usize,
    /// computed by conjugating inside `H(R)`
    pub orbit_size: usize,
    /// ring elements `a` with `(a,0,0)` fixing the character, by conjugation
    pub stabilizer: Vec<usize>,
    /// `I_ψ` from its defining formula
    pub stabilizer_ideal: Vec<usize>,
    /// `|R / I_ψ|`
    pub predicted_orbit_size: usize,
    /// whether each conjugate is `χ_{β·ψ_a, ψ}` with `ψ_a(b) = ψ(-ab)`
    pub twist_formula_holds: bool,
}

impl OrbitData {
    pub fn consistent(&self) -> bool {
        self.orbit_size == self.predicted_orbit_size && self.stabilizer == self.stabilizer_ideal && self.twist_formula_holds
    }
}

pub fn char_orbit_data(heis: &Heisenberg, beta: usize, psi: usize) -> OrbitData {
    let ring = &heis.ring;
    let r = ring.order();
    let g = &heis.group;
    let chi = |b: usize, c: usize| ring.character_value(beta, b) + ring.character_value(psi, c);
    let base: Vec<Rotation> = (0..r * r).map(|x| chi(x / r, x % r)).collect();
    let mut orbit: Vec<Vec<Rotation>> = Vec::new();
    let mut stabilizer = Vec::new();
    let mut twist_formula_holds = true;
    for a in 0..r {
        let h = heis.encode(a, 0, 0);
        let conj: Vec<Rotation> = (0..r * r)
            .map(|x| {
                let (_, b, c) = heis.decode(g.mul(g.mul(g.inv(h), x), h));
                chi(b, c)
            })
            .collect();
        let minus_a = ring.neg(a);
        twist_formula_holds &= (0..r * r).all(|x| {
            let (b, c) = (x / r, x % r);
            conj[x] == chi(b, c) + ring.character_value(psi, ring.mul(minus_a, b))
        });
        if conj == base {
            stabilizer.push(a);
        }
        if !orbit.contains(&conj) {
            orbit.push(conj);
        }
    }
    let ideal = stabilizer_ideal(ring, psi);
    OrbitData {
        beta,
        psi,
        orbit_size: orbit.len(),
        stabilizer,
        predicted_orbit_size: r / ideal.len(),
        stabilizer_ideal: ideal.elems,
        twist_formula_holds,
    }
}

/// `H(R) ≅ dual(dual(N)) ⋊ H` through the character-orbit reconstruction.
pub fn reconstruct(heis: &Heisenberg) -> Result<Reconstruction> {
    reconstruct_split_extension(&heis.group, &heis.n, &heis.h)
}

/// `H(Z/n_1 × … × Z/n_k) → H(Z/n_1) × … × H(Z/n_k)`, splitting each coordinate
/// by component. The product is nested to the left.
pub fn component_split(heis: &Heisenberg, cap: usize) -> Result<GroupHom> {
    let ring = &heis.ring;
    let parts: Vec<Heisenberg> =
        ring.moduli.iter().map(|&n| heisenberg(&FiniteRing::new(vec![n])?, cap)).collect::<Result<_>>()?;
    let mut target = parts[0].group.clone();
    for p in &parts[1..] {
        target = direct_product(&target, &p.group);
    }
    let image = heis
        .group
        .elements()
        .map(|x| {
            let (a, b, c) = heis.decode(x);
            let (a, b, c) = (ring.element(a), ring.element(b), ring.element(c));
            parts.iter().enumerate().fold(0, |acc, (i, p)| {
                acc * p.group.order() + p.encode(a[i] as usize, b[i] as usize, c[i] as usize)
            })
        })
        .collect();
    GroupHom::new(&heis.group, &target, image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::DEFAULT_CAP;

    fn ring(s: &str) -> FiniteRing {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(ring("2x3").moduli(), &[2, 3]);
        assert_eq!(ring("4").to_string(), "Z/4");
        assert_eq!(ring("2x2").to_string(), "Z/2xZ/2");
        assert!("1".parse::<FiniteRing>().is_err());
        assert!("2xq".parse::<FiniteRing>().is_err());
    }

    #[test]
    fn ideal_counts_and_ends() {
        assert_eq!(ideals(&ring("12")).len(), 6);
        let i = ideals(&ring("2x3"));
        assert_eq!(i.len(), 4);
        assert_eq!(i[0].elements(), &[0]);
        assert_eq!(i[3].len(), 6);
        assert_eq!(Ideal::new(&ring("4"), &[0, 1]).unwrap_err(), Error::NotAnIdeal);
    }

    #[test]
    fn small_heisenberg_groups() {
        let h2 = heisenberg(&ring("2"), DEFAULT_CAP).unwrap();
        assert_eq!(h2.group.order_histogram().get(&2), Some(&5));
        let h3 = heisenberg(&ring("3"), DEFAULT_CAP).unwrap();
        assert_eq!(h3.group.exponent(), 3);
        assert!(h3.group.center().len() >= 3);
        assert!(matches!(heisenberg(&ring("9"), DEFAULT_CAP), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn level_kernel() {
        let r = ring("4");
        let h = heisenberg(&r, DEFAULT_CAP).unwrap();
        let i = Ideal::new(&r, &[0, 2]).unwrap();
        let l = h_level(&h, &i, DEFAULT_CAP).unwrap();
        assert_eq!(l.group.order(), 32);
        assert_eq!(l.kernel_triples(), vec![(0, 0, 0), (0, 0, 2)]);
        let whole = h_level(&h, ideals(&r).last().unwrap(), DEFAULT_CAP).unwrap();
        assert!(whole.group.is_abelian());
        assert_eq!(whole.group.order(), 16);
    }

    #[test]
    fn orbit_examples() {
        let r = ring("4");
        let h = heisenberg(&r, DEFAULT_CAP).unwrap();
        let trivial = char_orbit_data(&h, 1, 0);
        assert_eq!((trivial.orbit_size, trivial.stabilizer_ideal.len()), (1, 4));
        let d = char_orbit_data(&h, 0, 2);
        assert_eq!(d.stabilizer_ideal, vec![0, 2]);
        assert_eq!(d.orbit_size, 2);
        assert!(d.consistent());
        let h3 = heisenberg(&ring("3"), DEFAULT_CAP).unwrap();
        let d3 = char_orbit_data(&h3, 0, 1);
        assert_eq!((d3.orbit_size, d3.stabilizer_ideal.clone()), (3, vec![0]));
    }

    #[test]
    fn split_into_components() {
        let h = heisenberg(&ring("2x2"), DEFAULT_CAP).unwrap();
        assert!(component_split(&h, DEFAULT_CAP).unwrap().is_isomorphism());
    }
}
