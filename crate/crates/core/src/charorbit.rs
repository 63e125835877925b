//! Finite groups acting on finite abelian groups, the induced action on
//! characters, orbits and stabilizers, and the reconstruction of a split
//! extension `G = N ⋊ H` (with `N` abelian) from its character data.

use std::collections::VecDeque;

use crate::abdual::{AbGroup, Character};
use crate::error::{Error, Result};
use crate::fingrp::{
    abelian_structure, generate_subgroup, semidirect_product, FiniteGroup, GroupHom, SemidirectProduct, Subgroup,
};
use crate::{IntMatrix, Rotation};

/// `H` acting on `N` by automorphisms `x ↦ mats[h]·x`, with the contragredient
/// action on characters `(h·χ)(x) = χ(h⁻¹·x)`.
#[derive(Clone, Debug)]
pub struct DualAction {
    h: FiniteGroup,
    n: AbGroup,
    mats: Vec<IntMatrix>,
    elem_perm: Vec<Vec<usize>>,
    char_perm: Vec<Vec<usize>>,
}

impl DualAction {
    /// Validates each matrix as an automorphism and the family as a homomorphism `H → Aut(N)`.
    pub fn new(h: &FiniteGroup, n: &AbGroup, mats: Vec<IntMatrix>) -> Result<Self> {
        if mats.len() != h.order() {
            return Err(Error::NotAnAutomorphism(format!("{} matrices for |H| = {}", mats.len(), h.order())));
        }
        let mut elem_perm = Vec::with_capacity(mats.len());
        for (hi, m) in mats.iter().enumerate() {
            if !n.is_endomorphism_matrix(m) {
                return Err(Error::NotAnAutomorphism(format!("matrix for {hi} is not well defined on {n}")));
            }
            let perm: Vec<usize> = n.elements().map(|x| n.index_of(&n.apply_matrix(m, &x))).collect();
            let mut hit = vec![false; n.order()];
            if perm.iter().any(|&y| std::mem::replace(&mut hit[y], true)) {
                return Err(Error::NotAnAutomorphism(format!("matrix for {hi} is not bijective")));
            }
            elem_perm.push(perm);
        }
        for h1 in h.elements() {
            for h2 in h.elements() {
                let h12 = h.mul(h1, h2);
                if (0..n.order()).any(|x| elem_perm[h12][x] != elem_perm[h1][elem_perm[h2][x]]) {
                    return Err(Error::NotAHomomorphism(format!("act[{h1}·{h2}] != act[{h1}]∘act[{h2}]")));
                }
            }
        }
        let mut act = DualAction { h: h.clone(), n: n.clone(), mats, elem_perm, char_perm: vec![] };
        act.char_perm = h
            .elements()
            .map(|hi| {
                n.characters()
                    .map(|chi| act.transport_character(hi, &chi).map(|c| c.index()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(act)
    }

    /// Builds the matrices from automorphisms given as permutations of element indices.
    pub fn from_permutations(h: &FiniteGroup, n: &AbGroup, perms: &[Vec<usize>]) -> Result<Self> {
        let mats = perms
            .iter()
            .map(|p| {
                let cols: Vec<Vec<u64>> = (0..n.rank()).map(|j| n.element(p[n.index_of(&n.basis(j))])).collect();
                IntMatrix::from_rows((0..n.rank()).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect())
            })
            .collect();
        let act = Self::new(h, n, mats)?;
        if act.elem_perm.as_slice() != perms {
            return Err(Error::NotAnAutomorphism("permutation is not additive".into()));
        }
        Ok(act)
    }

    pub fn trivial(h: &FiniteGroup, n: &AbGroup) -> Self {
        Self::new(h, n, vec![IntMatrix::identity(n.rank()); h.order()]).expect("trivial action is valid")
    }

    pub fn acting_group(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn module(&self) -> &AbGroup {
        &self.n
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.mats
    }

    /// `act[h]` as a permutation of element indices of `N`.
    pub fn element_permutation(&self, h: usize) -> &[usize] {
        &self.elem_perm[h]
    }

    /// `h·χ` as a permutation of character indices.
    pub fn character_permutation(&self, h: usize) -> &[usize] {
        &self.char_perm[h]
    }

    pub fn act_on_element(&self, h: usize, x: &[u64]) -> Vec<u64> {
        self.n.apply_matrix(&self.mats[h], x)
    }

    /// Solves for the character `h·χ` from its defining identity
    /// `(h·χ)(x) = χ(act[h⁻¹](x))`, evaluated on the standard basis.
    pub fn transport_character(&self, h: usize, chi: &Character) -> Result<Character> {
        if chi.group() != &self.n {
            return Err(Error::GroupMismatch(format!("character of {} under action on {}", chi.group(), self.n)));
        }
        let hinv = self.h.inv(h);
        let values: Vec<Rotation> = (0..self.n.rank())
            .map(|i| self.n.pairing_raw(chi.exps(), &self.act_on_element(hinv, &self.n.basis(i))))
            .collect();
        self.n.character_from_basis_values(&values)
    }

    pub fn act_on_character(&self, h: usize, chi: &Character) -> Result<Character> {
        if chi.group() != &self.n {
            return Err(Error::GroupMismatch(format!("character of {} under action on {}", chi.group(), self.n)));
        }
        self.n.character(self.n.element(self.char_perm[h][chi.index()]))
    }

    /// The action on `B = dual(N̂)` obtained by transporting the character
    /// action through the pairing once more: `(h·β)(χ) = β(h⁻¹·χ)`.
    pub fn double_dual(&self) -> Result<DualAction> {
        let chars = self.n.dual_group();
        let b = chars.dual_group();
        let mats = self
            .h
            .elements()
            .map(|h| {
                let hinv = self.h.inv(h);
                let cols: Vec<Vec<u64>> = (0..b.rank())
                    .map(|j| {
                        let beta = b.basis(j);
                        let values: Vec<Rotation> = (0..chars.rank())
                            .map(|i| {
                                let moved = chars.element(self.char_perm[hinv][chars.index_of(&chars.basis(i))]);
                                chars.pairing_raw(&beta, &moved)
                            })
                            .collect();
                        chars.character_from_basis_values(&values).map(|c| c.exps().to_vec())
                    })
                    .collect::<Result<_>>()?;
                Ok(IntMatrix::from_rows((0..b.rank()).map(|i| cols.iter().map(|c| c[i] as i64).collect()).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        DualAction::new(&self.h, &b, mats)
    }

    /// `N ⋊ H` with `N` as its Cayley table.
    pub fn semidirect(&self) -> Result<SemidirectProduct> {
        semidirect_product(&self.n.to_finite_group(), &self.h, &self.elem_perm)
    }
}

/// Orbit of `χ` (sorted by exponent vector) and its stabilizer in `H`.
pub fn orbit_and_stabilizer(act: &DualAction, chi: &Character) -> Result<(Vec<Character>, Subgroup)> {
    if chi.group() != act.module() {
        return Err(Error::GroupMismatch(format!("character of {} under action on {}", chi.group(), act.module())));
    }
    let n = act.module();
    let c = chi.index();
    let mut orbit: Vec<usize> = act.h.elements().map(|h| act.char_perm[h][c]).collect();
    orbit.sort_unstable();
    orbit.dedup();
    let stab: Vec<usize> = act.h.elements().filter(|&h| act.char_perm[h][c] == c).collect();
    let stab = Subgroup::from_elements(&act.h, &stab)?;
    let orbit = orbit.into_iter().map(|i| n.character(n.element(i))).collect::<Result<_>>()?;
    Ok((orbit, stab))
}

/// All orbits on characters, each sorted, ordered by their lexicographically minimal member.
pub fn character_orbits(act: &DualAction) -> Vec<Vec<Character>> {
    let n = act.module();
    let mut seen = vec![false; n.order()];
    let mut out = Vec::new();
    for c in 0..n.order() {
        if seen[c] {
            continue;
        }
        let mut orbit: Vec<usize> = act.h.elements().map(|h| act.char_perm[h][c]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit.iter().for_each(|&i| seen[i] = true);
        out.push(orbit.into_iter().map(|i| n.character(n.element(i)).expect("in range")).collect());
    }
    out
}

/// Characters with finite `H`-orbit together with the action on them.
#[derive(Clone, Debug)]
pub struct PeriodicCharacters {
    pub characters: Vec<Character>,
    pub action: DualAction,
}

/// For a finite acting group every orbit is finite, so this is the whole dual.
pub fn periodic_character_group(act: &DualAction) -> PeriodicCharacters {
    PeriodicCharacters { characters: act.module().characters().collect(), action: act.clone() }
}

/// Every automorphism of `n`, as a matrix on exponent vectors, in lexicographic column order.
pub fn automorphism_matrices(n: &AbGroup) -> Vec<IntMatrix> {
    let k = n.rank();
    // column j may be any element whose order divides d_j
    let columns: Vec<Vec<Vec<u64>>> = (0..k)
        .map(|j| n.elements().filter(|x| n.factors()[j].is_multiple_of(n.element_order(x))).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let m = IntMatrix::from_rows(
            (0..k).map(|i| (0..k).map(|j| columns[j][choice[j]][i] as i64).collect()).collect(),
        );
        let mut hit = vec![false; n.order()];
        if n.elements().all(|x| !std::mem::replace(&mut hit[n.index_of(&n.apply_matrix(&m, &x))], true)) {
            out.push(m);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < columns[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Every homomorphism `H → Aut(N)`, optionally only the injective ones.
pub fn all_actions(h: &FiniteGroup, n: &AbGroup, faithful_only: bool) -> Vec<DualAction> {
    let auts = automorphism_matrices(n);
    let perms: Vec<Vec<usize>> =
        auts.iter().map(|m| n.elements().map(|x| n.index_of(&n.apply_matrix(m, &x))).collect()).collect();
    let id = (0..n.order()).collect::<Vec<_>>();
    let gens = small_generating_set(h);
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(assign) = extend_action(h, &gens, &choice, &perms, &id) {
            let faithful = h.elements().filter(|&x| assign[x] == id).count() == 1;
            if faithful || !faithful_only {
                let mats = assign
                    .iter()
                    .map(|p| auts[perms.iter().position(|q| q == p).expect("closed under composition")].clone())
                    .collect();
                out.push(DualAction::new(h, n, mats).expect("extended assignment is an action"));
            }
        }
        let mut pos = gens.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < perms.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn small_generating_set(h: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = generate_subgroup(h, &[]).expect("valid");
    for x in h.elements() {
        if span.len() == h.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = generate_subgroup(h, &gens).expect("valid");
        }
    }
    gens
}

fn extend_action(
    h: &FiniteGroup,
    gens: &[usize],
    choice: &[usize],
    perms: &[Vec<usize>],
    id: &[usize],
) -> Option<Vec<Vec<usize>>> {
    let mut assign: Vec<Option<Vec<usize>>> = vec![None; h.order()];
    assign[h.identity()] = Some(id.to_vec());
    let mut queue = VecDeque::from([h.identity()]);
    while let Some(x) = queue.pop_front() {
        let px = assign[x].clone().expect("queued");
        for (&s, &c) in gens.iter().zip(choice) {
            let composed: Vec<usize> = perms[c].iter().map(|&y| px[y]).collect();
            let xs = h.mul(x, s);
            match &assign[xs] {
                Some(existing) if *existing != composed => return None,
                Some(_) => {}
                None => {
                    assign[xs] = Some(composed);
                    queue.push_back(xs);
                }
            }
        }
    }
    assign.into_iter().collect()
}

/// Output of [`reconstruct_split_extension`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// `N` in invariant-factor form.
    pub module: AbGroup,
    /// The action of `H` on `B = dual(N̂)`, transported through the pairing twice.
    pub double_dual_action: DualAction,
    /// `B ⋊ H`.
    pub product: SemidirectProduct,
    /// Verified isomorphism `B ⋊ H → G`, `(β, h) ↦ ev⁻¹(β)·h`.
    pub witness: GroupHom,
}

/// Rebuilds `G = N ⋊ H` as `dual(N̂^{H-per}) ⋊ H` and checks it against `G`.
pub fn reconstruct_split_extension(g: &FiniteGroup, n: &Subgroup, h: &Subgroup) -> Result<Reconstruction> {
    if n.parent() != g || h.parent() != g {
        return Err(Error::GroupMismatch("subgroups of a different group".into()));
    }
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    if !n.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if n.intersection(h).len() != 1 {
        return Err(Error::NotAComplement("N ∩ H is nontrivial".into()));
    }
    if n.len() * h.len() != g.order() {
        return Err(Error::NotAComplement("|N|·|H| != |G|".into()));
    }

    let (n_grp, n_incl) = n.as_group("N");
    let (h_grp, h_incl) = h.as_group("H");
    let (module, to_module) = abelian_structure(&n_grp)?;
    let from_module = to_module.inverse()?;

    // conjugation by H on N, in invariant-factor coordinates
    let n_pos = |x: usize| n.elements().binary_search(&x).expect("normal subgroup is closed under conjugation");
    let perms: Vec<Vec<usize>> = h_grp
        .elements()
        .map(|hh| {
            let hg = h_incl.apply(hh);
            (0..module.order())
                .map(|x| to_module.apply(n_pos(g.conj(hg, n_incl.apply(from_module.apply(x))))))
                .collect()
        })
        .collect();
    let action = DualAction::from_permutations(&h_grp, &module, &perms)?;
    let periodic = periodic_character_group(&action);
    let double_dual_action = periodic.action.double_dual()?;
    let product = double_dual_action.semidirect()?;

    let b = double_dual_action.module();
    let ev = module.evaluation_map()?;
    let mut ev_inv = vec![usize::MAX; b.order()];
    for (x, beta) in ev.iter().enumerate() {
        ev_inv[beta.index()] = x;
    }
    if ev_inv.contains(&usize::MAX) {
        return Err(Error::WitnessNotFound("evaluation map is not bijective".into()));
    }
    let nh = h_grp.order();
    let image = product
        .group
        .elements()
        .map(|p| {
            let (beta, hh) = (p / nh, p % nh);
            g.mul(n_incl.apply(from_module.apply(ev_inv[beta])), h_incl.apply(hh))
        })
        .collect();
    let witness = GroupHom::new(&product.group, g, image)
        .map_err(|e| Error::WitnessNotFound(format!("canonical map is not a homomorphism: {e}")))?;
    if !witness.is_isomorphism() {
        return Err(Error::WitnessNotFound("canonical map is not bijective".into()));
    }
    Ok(Reconstruction { module, double_dual_action, product, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn inversion(n: u64) -> DualAction {
        let ab = AbGroup::cyclic(n);
        DualAction::new(&FiniteGroup::cyclic(2), &ab, vec![IntMatrix::identity(1), IntMatrix::from_i64_rows(&[vec![-1]])])
            .unwrap()
    }

    #[test]
    fn trivial_character_is_fixed() {
        let act = inversion(3);
        let (orbit, stab) = orbit_and_stabilizer(&act, &act.module().character(vec![0]).unwrap()).unwrap();
        assert_eq!(orbit.len(), 1);
        assert_eq!(stab.len(), 2);
    }

    #[test]
    fn inversion_on_c3() {
        let act = inversion(3);
        let (orbit, stab) = orbit_and_stabilizer(&act, &act.module().character(vec![1]).unwrap()).unwrap();
        let exps: Vec<&[u64]> = orbit.iter().map(|c| c.exps()).collect();
        assert_eq!(exps, vec![&[1][..], &[2][..]]);
        assert_eq!(stab.len(), 1);
    }

    #[test]
    fn inversion_on_c4_orbits() {
        let act = inversion(4);
        let orbits: Vec<Vec<u64>> =
            character_orbits(&act).iter().map(|o| o.iter().map(|c| c.exps()[0]).collect()).collect();
        assert_eq!(orbits, vec![vec![0], vec![1, 3], vec![2]]);
        assert_eq!(periodic_character_group(&act).characters.len(), 4);
    }

    #[test]
    fn cycling_involutions_of_v4() {
        // generator maps e1 -> e2 -> e1 + e2 -> e1
        let v4 = AbGroup::new(vec![2, 2]).unwrap();
        let r = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 1]]);
        let r2 = &r * &r;
        let act = DualAction::new(&FiniteGroup::cyclic(3), &v4, vec![IntMatrix::identity(2), r, r2]).unwrap();
        for chi in v4.characters().filter(|c| !c.is_trivial()) {
            assert_eq!(orbit_and_stabilizer(&act, &chi).unwrap().0.len(), 3);
        }
    }

    #[test]
    fn rejects_non_actions() {
        let c3 = AbGroup::cyclic(3);
        // inversion twice is the identity, so C3 cannot act by it
        let inv = IntMatrix::from_i64_rows(&[vec![-1]]);
        let r = DualAction::new(&FiniteGroup::cyclic(3), &c3, vec![IntMatrix::identity(1), inv.clone(), inv]);
        assert!(matches!(r, Err(Error::NotAHomomorphism(_))));
        let zero = IntMatrix::from_i64_rows(&[vec![0]]);
        assert!(DualAction::new(&FiniteGroup::cyclic(2), &c3, vec![IntMatrix::identity(1), zero]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_matrices(&AbGroup::cyclic(8)).len(), 4);
        assert_eq!(automorphism_matrices(&AbGroup::new(vec![2, 2, 2]).unwrap()).len(), 168);
        assert_eq!(automorphism_matrices(&AbGroup::new(vec![2, 4]).unwrap()).len(), 8);
        assert_eq!(automorphism_matrices(&AbGroup::trivial()).len(), 1);
    }

    #[test]
    fn faithful_action_counts() {
        // S3 embeds in GL(2, 2) ≅ S3 in 6 ways; C3 acts faithfully on V4 in 2 ways
        let v4 = AbGroup::new(vec![2, 2]).unwrap();
        let s3 = catalog::by_name("S3", 100).unwrap();
        assert_eq!(all_actions(&s3, &v4, true).len(), 6);
        assert_eq!(all_actions(&FiniteGroup::cyclic(3), &v4, true).len(), 2);
        assert_eq!(all_actions(&FiniteGroup::cyclic(2), &AbGroup::cyclic(7), false).len(), 2);
    }

    #[test]
    fn reconstruct_s3_and_direct_product() {
        let e = catalog::split_extension("S3").unwrap();
        let r = reconstruct_split_extension(&e.group, &e.normal, &e.complement).unwrap();
        assert!(r.witness.is_isomorphism());
        assert_eq!(r.module.factors(), &[3]);

        let c6 = FiniteGroup::cyclic(6);
        let n = generate_subgroup(&c6, &[2]).unwrap();
        let h = generate_subgroup(&c6, &[3]).unwrap();
        assert!(reconstruct_split_extension(&c6, &n, &h).is_ok());
    }

    #[test]
    fn reconstruct_rejects_bad_input() {
        let e = catalog::split_extension("S3").unwrap();
        assert!(matches!(
            reconstruct_split_extension(&e.group, &e.complement, &e.normal),
            Err(Error::NotNormal)
        ));
        let c4 = FiniteGroup::cyclic(4);
        let n = generate_subgroup(&c4, &[2]).unwrap();
        assert!(matches!(reconstruct_split_extension(&c4, &n, &n), Err(Error::NotAComplement(_))));
    }
}
