use std::collections::BTreeMap;

use serde::Serialize;

use super::{abelianization, FiniteGroup, GroupHom};
use crate::error::{Error, Result};

/// Isomorphism invariants compared before any search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order_histogram: BTreeMap<usize, usize>,
    pub abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelianization: Vec<u64>,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let (ab, _) = abelianization(g);
    Fingerprint {
        order: g.order(),
        order_histogram: g.order_histogram(),
        abelian: g.is_abelian(),
        center_order: g.center().len(),
        derived_order: g.derived_subgroup().len(),
        abelianization: ab.factors().to_vec(),
    }
}

/// Decides `G1 ≅ G2`, returning a verified isomorphism when one exists.
///
/// Groups larger than `cap` are refused. After the fingerprint filter the
/// search backtracks over images of a generating set of `G1`, extending each
/// partial assignment along the Cayley graph of the generated subgroup and
/// rejecting it at the first inconsistency or collision.
pub fn are_isomorphic(g1: &FiniteGroup, g2: &FiniteGroup, cap: usize) -> Result<Option<GroupHom>> {
    for g in [g1, g2] {
        if g.order() > cap {
            return Err(Error::CapExceeded { order: g.order(), cap });
        }
    }
    if g1.order() != g2.order() || fingerprint(g1) != fingerprint(g2) {
        return Ok(None);
    }
    let class1 = element_classes(g1);
    let class2 = element_classes(g2);
    let candidates: Vec<Vec<usize>> =
        g1.elements().map(|x| g2.elements().filter(|&y| class2[y] == class1[x]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }

    let gens = search_generators(g1, &candidates);
    let mut images = Vec::with_capacity(gens.len());
    Ok(search(g1, g2, &gens, &candidates, &mut images).map(|image| {
        GroupHom::new(g1, g2, image).expect("search only returns consistent maps")
    }))
}

/// (element order, centralizer order): preserved by every isomorphism.
fn element_classes(g: &FiniteGroup) -> Vec<(usize, usize)> {
    g.elements().map(|x| (g.element_order(x), g.centralizer_size(x))).collect()
}

/// Generating set preferring elements with few candidate images.
fn search_generators(g: &FiniteGroup, candidates: &[Vec<usize>]) -> Vec<usize> {
    let orders = g.element_orders();
    let mut pool: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    pool.sort_by_key(|&x| (candidates[x].len(), std::cmp::Reverse(orders[x]), x));
    let mut gens = Vec::new();
    let mut span = super::generate_subgroup(g, &[]).expect("valid");
    for x in pool {
        if span.len() == g.order() {
            break;
        }
        if !span.contains(x) {
            gens.push(x);
            span = super::generate_subgroup(g, &gens).expect("valid");
        }
    }
    gens
}

fn search(
    g1: &FiniteGroup,
    g2: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let level = images.len();
    if level == gens.len() {
        let map = extend(g1, g2, gens, images)?;
        return map.into_iter().collect::<Option<Vec<usize>>>();
    }
    for &y in &candidates[gens[level]] {
        images.push(y);
        if extend(g1, g2, &gens[..=level], images).is_some() {
            if let Some(found) = search(g1, g2, gens, candidates, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// Extends `gens[i] ↦ images[i]` over the subgroup they generate.
/// `None` when the extension is not a well-defined injective homomorphism.
fn extend(g1: &FiniteGroup, g2: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let mut map = vec![None; g1.order()];
    let mut used = vec![false; g2.order()];
    map[g1.identity()] = Some(g2.identity());
    used[g2.identity()] = true;
    let mut queue = vec![g1.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &t) in gens.iter().zip(images) {
            let xs = g1.mul(x, s);
            let target = g2.mul(fx, t);
            match map[xs] {
                Some(existing) if existing != target => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[target], true) {
                        return None;
                    }
                    map[xs] = Some(target);
                    queue.push(xs);
                }
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::{direct_product, DEFAULT_CAP};

    #[test]
    fn crt_and_abelian_flag() {
        let c6 = FiniteGroup::cyclic(6);
        let c2c3 = direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        let w = are_isomorphic(&c6, &c2c3, DEFAULT_CAP).unwrap().unwrap();
        assert!(w.is_isomorphism());
        let c2c2 = direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert!(are_isomorphic(&FiniteGroup::cyclic(4), &c2c2, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let c = FiniteGroup::cyclic(20);
        assert!(matches!(are_isomorphic(&c, &c, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn relabeled_copy_is_found() {
        let g = direct_product(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(2));
        let perm: Vec<usize> = (0..8).map(|i| (i * 3 + 1) % 8).collect();
        let h = g.relabel(&perm).unwrap();
        assert!(are_isomorphic(&g, &h, DEFAULT_CAP).unwrap().is_some());
    }
}
