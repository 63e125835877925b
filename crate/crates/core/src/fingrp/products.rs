use super::{FiniteGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};

/// `N ⋊ H` together with its canonical embeddings.
///
/// The pair `(n, h)` has index `n·|H| + h`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    pub normal: GroupHom,
    pub complement: GroupHom,
}

impl SemidirectProduct {
    pub fn normal_subgroup(&self) -> Subgroup {
        self.normal.image_subgroup()
    }

    pub fn complement_subgroup(&self) -> Subgroup {
        self.complement.image_subgroup()
    }
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let nb = b.order();
    FiniteGroup::from_fn(format!("{}x{}", a.label(), b.label()), a.order() * nb, |x, y| {
        a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
    })
    .expect("direct product table is valid")
}

/// Checks that `act` is a homomorphism `H → Aut(N)`, each entry a permutation of `N`.
pub fn validate_action(n: &FiniteGroup, h: &FiniteGroup, act: &[Vec<usize>]) -> Result<()> {
    if act.len() != h.order() {
        return Err(Error::NotAnAutomorphism(format!("{} maps for |H| = {}", act.len(), h.order())));
    }
    for (hi, a) in act.iter().enumerate() {
        if a.len() != n.order() {
            return Err(Error::NotAnAutomorphism(format!("map for {hi} has wrong length")));
        }
        let mut hit = vec![false; n.order()];
        for &y in a {
            if y >= n.order() || std::mem::replace(&mut hit[y], true) {
                return Err(Error::NotAnAutomorphism(format!("map for {hi} is not bijective")));
            }
        }
        for x in n.elements() {
            for (y, xy) in n.row(x).enumerate() {
                if a[xy] != n.mul(a[x], a[y]) {
                    return Err(Error::NotAnAutomorphism(format!("map for {hi} is not multiplicative")));
                }
            }
        }
    }
    for h1 in h.elements() {
        for h2 in h.elements() {
            let h12 = h.mul(h1, h2);
            if n.elements().any(|x| act[h12][x] != act[h1][act[h2][x]]) {
                return Err(Error::NotAHomomorphism(format!("act[{h1}·{h2}] != act[{h1}]∘act[{h2}]")));
            }
        }
    }
    Ok(())
}

/// `(n, h)(n', h') = (n·act[h](n'), h·h')`.
pub fn semidirect_product(n: &FiniteGroup, h: &FiniteGroup, act: &[Vec<usize>]) -> Result<SemidirectProduct> {
    validate_action(n, h, act)?;
    let nh = h.order();
    let label = format!("{}:{}", n.label(), h.label());
    let group = FiniteGroup::from_fn(label, n.order() * nh, |x, y| {
        let (n1, h1) = (x / nh, x % nh);
        let (n2, h2) = (y / nh, y % nh);
        n.mul(n1, act[h1][n2]) * nh + h.mul(h1, h2)
    })?;
    let normal = GroupHom::new(n, &group, n.elements().map(|x| x * nh + h.identity()).collect())?;
    let complement = GroupHom::new(h, &group, h.elements().map(|y| n.identity() * nh + y).collect())?;
    Ok(SemidirectProduct { group, normal, complement })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_action_gives_nonabelian_order_six() {
        let c3 = FiniteGroup::cyclic(3);
        let c2 = FiniteGroup::cyclic(2);
        let act = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let sd = semidirect_product(&c3, &c2, &act).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        assert!(sd.normal_subgroup().is_normal());
        assert!(!sd.complement_subgroup().is_normal());
    }

    #[test]
    fn trivial_action_is_direct_product() {
        let c2 = FiniteGroup::cyclic(2);
        let c4 = FiniteGroup::cyclic(4);
        let act = vec![c2.elements().collect::<Vec<_>>(); 4];
        let sd = semidirect_product(&c2, &c4, &act).unwrap();
        assert_eq!(sd.group, direct_product(&c2, &c4));
        assert!(sd.group.is_abelian());
    }

    #[test]
    fn rejects_bad_actions() {
        let c3 = FiniteGroup::cyclic(3);
        let c2 = FiniteGroup::cyclic(2);
        // not bijective
        assert!(semidirect_product(&c3, &c2, &[vec![0, 1, 2], vec![0, 0, 0]]).is_err());
        // act[3] is the identity but act[1]∘act[2] is inversion
        let c4 = FiniteGroup::cyclic(4);
        let bad = vec![vec![0, 1, 2], vec![0, 2, 1], vec![0, 1, 2], vec![0, 1, 2]];
        assert!(matches!(semidirect_product(&c3, &c4, &bad), Err(Error::NotAHomomorphism(_))));
    }
}
