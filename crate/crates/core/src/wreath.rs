//! Restricted wreath products of finite groups, the quotient onto the
//! abelianized base, the MAP/RF verdict for `Λ ≀ H`, and separating
//! characters for finitely supported lamp configurations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingrp::{abelianization, FiniteGroup, GroupHom, Subgroup};
use crate::Rotation;

/// `Λ ≀ H = (⊕_{h∈H} Λ) ⋊ H`, with `H` moving coordinates by left translation:
/// `(a·f)(x) = f(a⁻¹x)`.
///
/// The element `(f, a)` has index `idx(f)·|H| + a`, where `idx(f)` reads the
/// coordinates `f(0), …, f(|H|-1)` as base-`|Λ|` digits, most significant first.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    pub lambda: FiniteGroup,
    pub top: FiniteGroup,
    pub carrier: FiniteGroup,
    pub base: Subgroup,
    pub complement: Subgroup,
    /// `coordinates[x]` embeds `Λ` as the coordinate at `x ∈ H`.
    pub coordinates: Vec<GroupHom>,
}

/// `|Λ|^{|H|}·|H|`, or `None` on overflow.
pub fn wreath_order(lambda: usize, top: usize) -> Option<usize> {
    lambda.checked_pow(top as u32)?.checked_mul(top)
}

pub(crate) fn decode_coords(mut idx: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut f = vec![0; len];
    for slot in f.iter_mut().rev() {
        *slot = idx % radix;
        idx /= radix;
    }
    f
}

pub(crate) fn encode_coords(f: &[usize], radix: usize) -> usize {
    f.iter().fold(0, |acc, &d| acc * radix + d)
}

impl WreathGroup {
    pub fn encode(&self, f: &[usize], a: usize) -> usize {
        encode_coords(f, self.lambda.order()) * self.top.order() + a
    }

    pub fn decode(&self, x: usize) -> (Vec<usize>, usize) {
        let m = self.top.order();
        (decode_coords(x / m, self.lambda.order(), m), x % m)
    }

    /// `a·f` on coordinate vectors.
    pub fn shift(&self, a: usize, f: &[usize]) -> Vec<usize> {
        let top = &self.top;
        top.elements().map(|x| f[top.mul(top.inv(a), x)]).collect()
    }
}

pub fn wreath_product(lambda: &FiniteGroup, top: &FiniteGroup, cap: usize) -> Result<WreathGroup> {
    let (l, m) = (lambda.order(), top.order());
    let order = wreath_order(l, m).filter(|&o| o <= cap).ok_or(Error::CapExceeded {
        order: wreath_order(l, m).unwrap_or(usize::MAX),
        cap,
    })?;
    let nbase = order / m;
    let coords: Vec<Vec<usize>> = (0..nbase).map(|i| decode_coords(i, l, m)).collect();
    // shifted[a][i] = index of a·f_i
    let shifted: Vec<Vec<usize>> = top
        .elements()
        .map(|a| {
            coords
                .iter()
                .map(|f| encode_coords(&top.elements().map(|x| f[top.mul(top.inv(a), x)]).collect::<Vec<_>>(), l))
                .collect()
        })
        .collect();
    let label = format!("{}wr{}", lambda.label(), top.label());
    let carrier = FiniteGroup::from_fn(label, order, |x, y| {
        let (f1, a1) = (&coords[x / m], x % m);
        let (f2, a2) = (&coords[shifted[a1][y / m]], y % m);
        let prod: Vec<usize> = f1.iter().zip(f2).map(|(&p, &q)| lambda.mul(p, q)).collect();
        encode_coords(&prod, l) * m + top.mul(a1, a2)
    })?;

    let identity_f = vec![lambda.identity(); m];
    let e_top = top.identity();
    let base = Subgroup::from_elements(&carrier, &(0..nbase).map(|i| i * m + e_top).collect::<Vec<_>>())?;
    let complement = Subgroup::from_elements(
        &carrier,
        &top.elements().map(|a| encode_coords(&identity_f, l) * m + a).collect::<Vec<_>>(),
    )?;
    let coordinates = top
        .elements()
        .map(|x| {
            let image = lambda
                .elements()
                .map(|v| {
                    let mut f = identity_f.clone();
                    f[x] = v;
                    encode_coords(&f, l) * m + e_top
                })
                .collect();
            GroupHom::new(lambda, &carrier, image)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathGroup { lambda: lambda.clone(), top: top.clone(), carrier, base, complement, coordinates })
}

/// The quotient `Λ ≀ H → Λ^Ab ≀ H`, applying the abelianization coordinatewise.
pub fn abelianization_quotient(w: &WreathGroup, cap: usize) -> Result<(WreathGroup, GroupHom)> {
    let (_, to_ab) = abelianization(&w.lambda);
    let target = wreath_product(to_ab.target(), &w.top, cap)?;
    let image = w
        .carrier
        .elements()
        .map(|x| {
            let (f, a) = w.decode(x);
            let g: Vec<usize> = f.iter().map(|&v| to_ab.apply(v)).collect();
            target.encode(&g, a)
        })
        .collect();
    let hom = GroupHom::new(&w.carrier, &target.carrier, image)?;
    Ok((target, hom))
}

/// Hypotheses on `Λ` and `H` for the MAP/RF verdict on `Λ ≀ H`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RfMapFlags {
    pub lambda_map: bool,
    pub lambda_rf: bool,
    pub lambda_abelian: bool,
    pub lambda_trivial: bool,
    pub h_finite: bool,
    pub h_rf: bool,
}

impl RfMapFlags {
    /// Checks the implications between flags that hold for every countable group.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidFlags(m.into()));
        if self.lambda_abelian && !self.lambda_map {
            return bad("abelian groups are MAP");
        }
        if self.lambda_rf && !self.lambda_map {
            return bad("RF groups are MAP");
        }
        if self.h_finite && !self.h_rf {
            return bad("finite groups are RF");
        }
        if self.lambda_trivial && !(self.lambda_map && self.lambda_rf && self.lambda_abelian) {
            return bad("the trivial group is abelian, MAP and RF");
        }
        Ok(())
    }

    /// All flag settings that pass [`validate`](Self::validate) with `Λ` nontrivial.
    pub fn admissible() -> Vec<RfMapFlags> {
        (0u32..64)
            .map(|bits| RfMapFlags {
                lambda_map: bits & 1 != 0,
                lambda_rf: bits & 2 != 0,
                lambda_abelian: bits & 4 != 0,
                lambda_trivial: bits & 8 != 0,
                h_finite: bits & 16 != 0,
                h_rf: bits & 32 != 0,
            })
            .filter(|f| !f.lambda_trivial && f.validate().is_ok())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub map: bool,
    pub rf: bool,
}

/// Whether `Λ ≀ H` is MAP and whether it is RF, for `Λ` with at least two elements.
pub fn rf_map_verdict(flags: &RfMapFlags) -> Result<Verdict> {
    if flags.lambda_trivial {
        return Err(Error::InvalidFlags("Λ must have at least two elements".into()));
    }
    flags.validate()?;
    let shape = flags.h_rf && (flags.h_finite || flags.lambda_abelian);
    Ok(Verdict { map: flags.lambda_map && shape, rf: flags.lambda_rf && shape })
}

/// A nonzero finitely supported map `Z → C_{n0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LampConfig {
    n0: u64,
    support: BTreeMap<i64, u64>,
}

#[derive(Deserialize, Serialize)]
struct LampConfigJson {
    support: Vec<(i64, i64)>,
    n0: u64,
}

impl LampConfig {
    /// Values are reduced mod `n0`; zero values are dropped.
    pub fn new(n0: u64, points: &[(i64, i64)]) -> Result<Self> {
        if n0 < 2 {
            return Err(Error::Parse(format!("n0 = {n0} must be at least 2")));
        }
        let mut support = BTreeMap::new();
        for &(k, v) in points {
            if support.contains_key(&k) {
                return Err(Error::Parse(format!("position {k} given twice")));
            }
            let r = v.rem_euclid(n0 as i64) as u64;
            if r != 0 {
                support.insert(k, r);
            }
        }
        if support.is_empty() {
            return Err(Error::ZeroElement);
        }
        Ok(LampConfig { n0, support })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: LampConfigJson = serde_json::from_str(s)?;
        Self::new(j.n0, &j.support)
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn support(&self) -> &BTreeMap<i64, u64> {
        &self.support
    }

    /// `⟨Φ, f⟩ = Σ_k Φ(k mod m)·f(k) / n0` for a period-`m` character given by its exponents.
    pub fn pair_periodic(&self, phi: &[u64]) -> Rotation {
        let m = phi.len() as i64;
        let num: i64 = self.support.iter().map(|(&k, &v)| (phi[k.rem_euclid(m) as usize] * v) as i64).sum();
        Rotation::new(num, self.n0 as i64)
    }
}

/// A periodic character witnessing that a lamp configuration is nontrivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub period: usize,
    /// `Φ(k) = exp(2πi·phi[k mod period]/n0)`.
    pub phi: Vec<u64>,
    pub value: Rotation,
}

/// Builds a periodic character that is nontrivial on `f`.
///
/// The period is the first `m`, scanning up from the spread of the
/// support, at which the support positions have distinct residues. Each
/// occupied residue gets exponent 1; if the resulting value cancels, the
/// largest support position is bumped to exponent 2.
pub fn separating_character(f: &LampConfig) -> Separation {
    let lo = *f.support.keys().next().expect("nonempty support");
    let hi = *f.support.keys().next_back().expect("nonempty support");
    let mut m = ((hi - lo) as usize).max(1);
    while !distinct_residues(f.support.keys(), m) {
        m += 1;
    }
    let mut phi = vec![0u64; m];
    for &k in f.support.keys() {
        phi[k.rem_euclid(m as i64) as usize] = 1;
    }
    let mut value = f.pair_periodic(&phi);
    if value.is_zero() {
        phi[hi.rem_euclid(m as i64) as usize] = 2 % f.n0;
        value = f.pair_periodic(&phi);
    }
    Separation { period: m, phi, value }
}

fn distinct_residues<'a>(keys: impl Iterator<Item = &'a i64>, m: usize) -> bool {
    let mut seen = vec![false; m];
    keys.into_iter().all(|&k| !std::mem::replace(&mut seen[k.rem_euclid(m as i64) as usize], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::{are_isomorphic, DEFAULT_CAP};

    #[test]
    fn c2_wr_c2_is_dihedral() {
        let c2 = FiniteGroup::cyclic(2);
        let w = wreath_product(&c2, &c2, DEFAULT_CAP).unwrap();
        assert_eq!(w.carrier.order(), 8);
        let d4 = crate::catalog::dihedral(4).unwrap();
        assert!(are_isomorphic(&w.carrier, &d4, DEFAULT_CAP).unwrap().is_some());
    }

    #[test]
    fn trivial_base_gives_top() {
        let c3 = FiniteGroup::cyclic(3);
        let w = wreath_product(&FiniteGroup::trivial(), &c3, DEFAULT_CAP).unwrap();
        assert!(are_isomorphic(&w.carrier, &c3, DEFAULT_CAP).unwrap().is_some());
    }

    #[test]
    fn c2_wr_c3_abelianization() {
        let w = wreath_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3), DEFAULT_CAP).unwrap();
        assert_eq!(w.carrier.order(), 24);
        assert_eq!(abelianization(&w.carrier).0.factors(), &[6]);
    }

    #[test]
    fn cap_exceeded_for_large_base() {
        let a5 = crate::catalog::alternating(5, DEFAULT_CAP).unwrap();
        let r = wreath_product(&a5, &FiniteGroup::cyclic(2), DEFAULT_CAP);
        assert!(matches!(r, Err(Error::CapExceeded { order: 7200, cap: 512 })));
    }

    #[test]
    fn s3_wr_c2_quotient() {
        let s3 = crate::catalog::symmetric(3, DEFAULT_CAP).unwrap();
        let w = wreath_product(&s3, &FiniteGroup::cyclic(2), DEFAULT_CAP).unwrap();
        let (target, hom) = abelianization_quotient(&w, DEFAULT_CAP).unwrap();
        assert_eq!(target.carrier.order(), 8);
        assert!(hom.is_surjective());
        assert_eq!(hom.kernel().len(), 9);
    }

    #[test]
    fn abelian_base_quotient_is_iso() {
        let c3 = FiniteGroup::cyclic(3);
        let w = wreath_product(&c3, &FiniteGroup::cyclic(2), DEFAULT_CAP).unwrap();
        let (_, hom) = abelianization_quotient(&w, DEFAULT_CAP).unwrap();
        assert!(hom.is_isomorphism());
    }

    #[test]
    fn verdict_examples() {
        let lamplighter = RfMapFlags { lambda_map: true, lambda_rf: true, lambda_abelian: true, h_rf: true, ..Default::default() };
        assert_eq!(rf_map_verdict(&lamplighter).unwrap(), Verdict { map: true, rf: true });
        let s3_wr_z = RfMapFlags { lambda_abelian: false, ..lamplighter };
        assert_eq!(rf_map_verdict(&s3_wr_z).unwrap(), Verdict { map: false, rf: false });
        let s3_wr_finite = RfMapFlags { h_finite: true, ..s3_wr_z };
        assert_eq!(rf_map_verdict(&s3_wr_finite).unwrap(), Verdict { map: true, rf: true });
        let trivial = RfMapFlags { lambda_trivial: true, ..lamplighter };
        assert!(rf_map_verdict(&trivial).is_err());
        assert!(rf_map_verdict(&RfMapFlags { h_finite: true, h_rf: false, ..lamplighter }).is_err());
        assert_eq!(RfMapFlags::admissible().len(), 15);
    }

    #[test]
    fn separation_single_point() {
        let f = LampConfig::new(2, &[(0, 1)]).unwrap();
        let s = separating_character(&f);
        assert_eq!((s.period, s.phi.clone(), s.value), (1, vec![1], Rotation::new(1, 2)));
    }

    #[test]
    fn separation_cancelling_pair() {
        let f = LampConfig::new(2, &[(0, 1), (3, 1)]).unwrap();
        let s = separating_character(&f);
        assert_eq!(s.period, 4);
        assert_eq!(s.phi, vec![1, 0, 0, 0]);
        assert_eq!(s.value, Rotation::new(1, 2));
    }

    #[test]
    fn separation_scan_skips_collision() {
        let f = LampConfig::new(3, &[(-1, 1), (5, 2)]).unwrap();
        let s = separating_character(&f);
        assert_eq!(s.period, 7);
        assert_eq!(s.value, Rotation::new(2, 3));
    }

    #[test]
    fn zero_config_rejected() {
        assert_eq!(LampConfig::new(3, &[(1, 3)]), Err(Error::ZeroElement));
        assert!(LampConfig::new(3, &[]).is_err());
        let f = LampConfig::from_json(r#"{"support": [[0, 1], [2, 5]], "n0": 4}"#).unwrap();
        assert_eq!(f.support().get(&2), Some(&1));
    }
}
