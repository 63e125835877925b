use std::collections::VecDeque;

use super::{quotient, FiniteGroup, GroupHom};
use crate::abdual::{smith_diagonal_and_right, AbGroup, IntMatrix};
use crate::error::{Error, Result};

/// Invariant factors of an abelian table group with an explicit isomorphism
/// onto [`AbGroup::to_finite_group`].
///
/// Works from a relation matrix: a spanning tree of the Cayley graph gives
/// every element an exponent vector in the chosen generators, and each
/// non-tree edge contributes one relation. The right Smith transform then
/// carries exponent vectors to invariant-factor coordinates.
pub fn abelian_structure(g: &FiniteGroup) -> Result<(AbGroup, GroupHom)> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let gens = greedy_generators(g);
    let k = gens.len();

    let mut vec_of: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    vec_of[g.identity()] = Some(vec![0; k]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let vx = vec_of[x].clone().expect("visited");
        for (i, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let mut step = vx.clone();
            step[i] += 1;
            match &vec_of[y] {
                None => {
                    vec_of[y] = Some(step);
                    queue.push_back(y);
                }
                Some(vy) => {
                    let rel: Vec<i64> = step.iter().zip(vy).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|&v| v != 0) {
                        relations.push(rel);
                    }
                }
            }
        }
    }

    if k == 0 {
        let ab = AbGroup::trivial();
        let hom = GroupHom::new(g, &ab.to_finite_group(), vec![0])?;
        return Ok((ab, hom));
    }

    let rel_matrix = IntMatrix::<i64>::from_rows(relations);
    let (diag, right) = smith_diagonal_and_right(&rel_matrix);
    let kept: Vec<usize> = (0..k).filter(|&i| diag.get(i).copied().unwrap_or(0) != 1).collect();
    if kept.iter().any(|&i| diag.get(i).copied().unwrap_or(0) == 0) {
        return Err(Error::InvalidTable("relation lattice has infinite quotient".into()));
    }
    let ab = AbGroup::new(kept.iter().map(|&i| diag[i] as u64).collect())?;

    let image = g
        .elements()
        .map(|x| {
            let v = vec_of[x].as_ref().expect("all elements reached");
            let coords: Vec<i64> =
                kept.iter().map(|&j| (0..k).map(|i| v[i] * right[(i, j)]).sum::<i64>()).collect();
            ab.index_of(&ab.reduce(&coords))
        })
        .collect();
    let hom = GroupHom::new(g, &ab.to_finite_group(), image)?;
    if !hom.is_isomorphism() {
        return Err(Error::WitnessNotFound("abelian structure map is not bijective".into()));
    }
    Ok((ab, hom))
}

/// `G/[G, G]` in invariant-factor form with the quotient map onto its table.
pub fn abelianization(g: &FiniteGroup) -> (AbGroup, GroupHom) {
    let derived = g.derived_subgroup();
    let (q, to_q) = quotient(g, &derived).expect("derived subgroup is normal");
    let (ab, iso) = abelian_structure(&q).expect("abelianization is abelian");
    (ab, to_q.then(&iso).expect("composable"))
}

/// Generators picked by descending element order, skipping anything already generated.
fn greedy_generators(g: &FiniteGroup) -> Vec<usize> {
    let orders = g.element_orders();
    let mut by_order: Vec<usize> = g.elements().collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
    let mut gens = Vec::new();
    let mut span = super::generate_subgroup(g, &[]).expect("valid");
    for x in by_order {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::direct_product;

    #[test]
    fn structure_of_products() {
        let g = direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        let (ab, iso) = abelian_structure(&g).unwrap();
        assert_eq!(ab.factors(), &[6]);
        assert!(iso.is_isomorphism());

        let g = direct_product(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(6));
        assert_eq!(abelian_structure(&g).unwrap().0.factors(), &[2, 12]);

        let (ab, _) = abelian_structure(&FiniteGroup::trivial()).unwrap();
        assert!(ab.is_trivial());
    }

    #[test]
    fn abelianization_of_abelian_group_is_itself() {
        let g = direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
        let (ab, hom) = abelianization(&g);
        assert_eq!(ab.factors(), &[2, 4]);
        assert!(hom.is_isomorphism());
    }
}
