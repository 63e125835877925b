use std::collections::VecDeque;

use super::{FiniteGroup, GroupHom};
use crate::error::{Error, Result};

/// A subgroup of `parent`, as a strictly sorted list of element indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    elems: Vec<usize>,
}

/// Smallest subgroup of `g` containing `gens`.
pub fn generate_subgroup(g: &FiniteGroup, gens: &[usize]) -> Result<Subgroup> {
    for &x in gens {
        g.check_index(x)?;
    }
    let mut member = vec![false; g.order()];
    member[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    let elems = member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
    Ok(Subgroup { parent: g.clone(), elems })
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(parent: FiniteGroup, elems: Vec<usize>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        Subgroup { parent, elems }
    }

    /// Validates an explicit element set.
    pub fn from_elements(parent: &FiniteGroup, elems: &[usize]) -> Result<Self> {
        for &x in elems {
            parent.check_index(x)?;
        }
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut member = vec![false; parent.order()];
        sorted.iter().for_each(|&x| member[x] = true);
        if !member[parent.identity()] {
            return Err(Error::NotASubgroup("missing identity".into()));
        }
        for &a in &sorted {
            if !member[parent.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &sorted {
                if !member[parent.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("{a}·{b} missing")));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elems: sorted })
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elems: vec![parent.identity()] }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup { parent: parent.clone(), elems: parent.elements().collect() }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
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

    pub fn index(&self) -> usize {
        self.parent.order() / self.len()
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        g.elements().all(|x| self.elems.iter().all(|&n| self.contains(g.conj(x, n))))
    }

    pub fn is_abelian(&self) -> bool {
        self.elems.iter().all(|&a| self.elems.iter().all(|&b| self.parent.commutes(a, b)))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elems = self.elems.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup { parent: self.parent.clone(), elems }
    }

    /// The subgroup as a group in its own right, plus the inclusion.
    /// Element `i` of the new group is the `i`-th smallest member.
    pub fn as_group(&self, label: impl Into<String>) -> (FiniteGroup, GroupHom) {
        let g = &self.parent;
        let pos = |x: usize| self.elems.binary_search(&x).expect("closed subgroup");
        let sub = FiniteGroup::from_fn(label, self.len(), |a, b| pos(g.mul(self.elems[a], self.elems[b])))
            .expect("subgroup table is valid");
        let incl = GroupHom::new(&sub, g, self.elems.clone()).expect("inclusion is a homomorphism");
        (sub, incl)
    }
}

/// `G/N` with the quotient map. Cosets are numbered by their smallest element.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if n.parent() != g {
        return Err(Error::GroupMismatch("subgroup of a different group".into()));
    }
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] == usize::MAX {
            for &k in n.elements() {
                coset[g.mul(x, k)] = reps.len();
            }
            reps.push(x);
        }
    }
    let label = format!("{}/{}", g.label(), n.len());
    let q = FiniteGroup::from_fn(label, reps.len(), |a, b| coset[g.mul(reps[a], reps[b])])?;
    let hom = GroupHom::new(g, &q, coset)?;
    Ok((q, hom))
}
