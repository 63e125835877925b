//! Named groups used by the CLI and the test suites.
//!
//! Names: `Cn` (cyclic), `Sn`, `An`, `Dn` (dihedral of order 2n), `Dicn`
//! (dicyclic of order 4n), `Q8`, `Q16`, `V4`, `Pauli`, `C2wrC2`, and
//! `Cn:k` for `C_n ⋊ C_k` with a generator of `C_k` acting as
//! multiplication by the smallest unit of order `k` mod `n`.

use crate::error::{Error, Result};
use crate::fingrp::{direct_product, semidirect_product, FiniteGroup, Subgroup};

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

fn perm_group(label: &str, degree: usize, gens: &[Perm], cap: usize) -> Result<(FiniteGroup, Vec<Perm>)> {
    FiniteGroup::from_generators(label, (0..degree).collect(), gens, compose, cap)
}

fn cycle(degree: usize, points: &[usize]) -> Perm {
    let mut p: Perm = (0..degree).collect();
    for (i, &x) in points.iter().enumerate() {
        p[x] = points[(i + 1) % points.len()];
    }
    p
}

fn lookup(elems: &[Perm], p: &Perm) -> usize {
    elems.binary_search(p).expect("permutation belongs to the group")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n)
}

pub fn symmetric(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n <= 1 {
        return Ok(FiniteGroup::trivial().with_label(format!("S{n}")));
    }
    let all: Vec<usize> = (0..n).collect();
    Ok(perm_group(&format!("S{n}"), n, &[cycle(n, &[0, 1]), cycle(n, &all)], cap)?.0)
}

pub fn alternating(n: usize, cap: usize) -> Result<FiniteGroup> {
    if n <= 2 {
        return Ok(FiniteGroup::trivial().with_label(format!("A{n}")));
    }
    let gens: Vec<Perm> = (2..n).map(|k| cycle(n, &[0, 1, k])).collect();
    Ok(perm_group(&format!("A{n}"), n, &gens, cap)?.0)
}

/// Dihedral group of order `2n` with the rotation subgroup and one reflection.
pub fn dihedral_with_parts(n: usize) -> Result<(FiniteGroup, Subgroup, Subgroup)> {
    if n < 3 {
        return Err(Error::Parse(format!("dihedral D{n} needs n >= 3")));
    }
    let r: Perm = (0..n).map(|i| (i + 1) % n).collect();
    let s: Perm = (0..n).map(|i| (n - i) % n).collect();
    let (g, elems) = perm_group(&format!("D{n}"), n, &[r.clone(), s.clone()], usize::MAX)?;
    let rot = crate::fingrp::generate_subgroup(&g, &[lookup(&elems, &r)])?;
    let refl = crate::fingrp::generate_subgroup(&g, &[lookup(&elems, &s)])?;
    Ok((g, rot, refl))
}

pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 2 {
        return Ok(klein_four().with_label("D2"));
    }
    Ok(dihedral_with_parts(n)?.0)
}

/// `⟨a, x | a^{2n}, x² = aⁿ, x a x⁻¹ = a⁻¹⟩`, order `4n`. Element `(k, e)` ↦ `a^k x^e`.
pub fn dicyclic(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::Parse(format!("dicyclic Dic{n} needs n >= 2")));
    }
    let m = 2 * n;
    let label = if n.is_power_of_two() { format!("Q{}", 4 * n) } else { format!("Dic{n}") };
    FiniteGroup::from_fn(label, 2 * m, |x, y| {
        let (k1, e1) = (x / 2, x % 2);
        let (k2, e2) = (y / 2, y % 2);
        let (k, e) = match (e1, e2) {
            (0, _) => (k1 + k2, e2),
            (_, 0) => (k1 + m - k2, 1),
            _ => (k1 + m - k2 + n, 0),
        };
        (k % m) * 2 + e
    })
}

pub fn klein_four() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2)).with_label("V4")
}

/// Pauli group: generated by the Pauli X and Z matrices and `i·I` over the Gaussian integers.
pub fn pauli() -> FiniteGroup {
    // 2x2 matrices with Gaussian integer entries (re, im)
    type M = [[(i64, i64); 2]; 2];
    fn mul(a: &M, b: &M) -> M {
        let cm = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let mut out = [[(0, 0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let (p, q) = (cm(a[i][0], b[0][j]), cm(a[i][1], b[1][j]));
                out[i][j] = (p.0 + q.0, p.1 + q.1);
            }
        }
        out
    }
    let id: M = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]];
    let x: M = [[(0, 0), (1, 0)], [(1, 0), (0, 0)]];
    let z: M = [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]];
    let i: M = [[(0, 1), (0, 0)], [(0, 0), (0, 1)]];
    FiniteGroup::from_generators("Pauli", id, &[x, z, i], mul, 64).expect("Pauli group has order 16").0
}

/// Smallest unit of `Z/n` with multiplicative order exactly `k`.
pub fn unit_of_order(n: usize, k: usize) -> Option<usize> {
    (1..n).find(|&u| {
        num_integer::gcd(u, n) == 1 && {
            let mut x = u % n;
            let mut ord = 1;
            while x != 1 % n {
                x = x * u % n;
                ord += 1;
            }
            ord == k
        }
    })
}

/// `C_n ⋊ C_k` with the generator of `C_k` acting by the smallest unit of order `k`.
pub fn metacyclic(n: usize, k: usize) -> Result<FiniteGroup> {
    let u = unit_of_order(n, k).ok_or_else(|| Error::Parse(format!("no unit of order {k} mod {n}")))?;
    let act: Vec<Vec<usize>> = (0..k)
        .map(|j| {
            let uj = (0..j).fold(1 % n, |acc, _| acc * u % n);
            (0..n).map(|x| x * uj % n).collect()
        })
        .collect();
    let g = semidirect_product(&cyclic(n), &cyclic(k), &act)?.group;
    Ok(g.with_label(format!("C{n}:{k}")))
}

/// Parses a catalog name.
pub fn by_name(name: &str, cap: usize) -> Result<FiniteGroup> {
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("unknown group {name:?}")));
    let g = match name {
        "V4" => klein_four(),
        "Pauli" => pauli(),
        "C2wrC2" => split_extension("C2wrC2")?.group,
        _ if name.starts_with("Dic") => dicyclic(num(&name[3..])?)?,
        _ if name.starts_with('Q') => {
            let n = num(&name[1..])?;
            if n < 8 || !n.is_power_of_two() {
                return Err(Error::Parse(format!("quaternion group {name} needs order 2^k >= 8")));
            }
            dicyclic(n / 4)?
        }
        _ if name.starts_with('C') => match name[1..].split_once(':') {
            Some((n, k)) => metacyclic(num(n)?, num(k)?)?,
            None => {
                let n = num(&name[1..])?;
                if n == 0 {
                    return Err(Error::Parse("C0 is not finite".into()));
                }
                cyclic(n)
            }
        },
        _ if name.starts_with('S') => symmetric(num(&name[1..])?, cap)?,
        _ if name.starts_with('A') => alternating(num(&name[1..])?, cap)?,
        _ if name.starts_with('D') => dihedral(num(&name[1..])?)?,
        _ => return Err(Error::Parse(format!("unknown group {name:?}"))),
    };
    if g.order() > cap {
        return Err(Error::CapExceeded { order: g.order(), cap });
    }
    Ok(g)
}

/// A split extension `G = N ⋊ H` with `N` abelian, given by subgroups of `G`.
#[derive(Clone, Debug)]
pub struct SplitExtension {
    pub name: String,
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub complement: Subgroup,
}

pub const SPLIT_EXTENSIONS: &[&str] = &["S3", "D4", "D5", "D6", "A4", "C7:3", "C2wrC2"];

/// Permutation realizations of the split extensions in [`SPLIT_EXTENSIONS`].
pub fn split_extension(name: &str) -> Result<SplitExtension> {
    let gen_sub = crate::fingrp::generate_subgroup;
    let (group, normal, complement) = match name {
        "S3" => {
            let (a, b) = (cycle(3, &[0, 1, 2]), cycle(3, &[0, 1]));
            let (g, el) = perm_group("S3", 3, &[a.clone(), b.clone()], usize::MAX)?;
            let n = gen_sub(&g, &[lookup(&el, &a)])?;
            let h = gen_sub(&g, &[lookup(&el, &b)])?;
            (g, n, h)
        }
        "A4" => {
            let v1 = compose(&cycle(4, &[0, 1]), &cycle(4, &[2, 3]));
            let v2 = compose(&cycle(4, &[0, 2]), &cycle(4, &[1, 3]));
            let t = cycle(4, &[1, 2, 3]);
            let (g, el) = perm_group("A4", 4, &[v1.clone(), v2.clone(), t.clone()], usize::MAX)?;
            let n = gen_sub(&g, &[lookup(&el, &v1), lookup(&el, &v2)])?;
            let h = gen_sub(&g, &[lookup(&el, &t)])?;
            (g, n, h)
        }
        "C7:3" => {
            let shift: Perm = (0..7).map(|x| (x + 1) % 7).collect();
            let scale: Perm = (0..7).map(|x| 2 * x % 7).collect();
            let (g, el) = perm_group("C7:3", 7, &[shift.clone(), scale.clone()], usize::MAX)?;
            let n = gen_sub(&g, &[lookup(&el, &shift)])?;
            let h = gen_sub(&g, &[lookup(&el, &scale)])?;
            (g, n, h)
        }
        "C2wrC2" => {
            let (b1, b2) = (cycle(4, &[0, 1]), cycle(4, &[2, 3]));
            let top = compose(&cycle(4, &[0, 2]), &cycle(4, &[1, 3]));
            let (g, el) = perm_group("C2wrC2", 4, &[b1.clone(), b2.clone(), top.clone()], usize::MAX)?;
            let n = gen_sub(&g, &[lookup(&el, &b1), lookup(&el, &b2)])?;
            let h = gen_sub(&g, &[lookup(&el, &top)])?;
            (g, n, h)
        }
        _ if name.starts_with('D') => {
            let n = name[1..].parse::<usize>().map_err(|_| Error::Parse(format!("unknown extension {name:?}")))?;
            dihedral_with_parts(n)?
        }
        _ => return Err(Error::Parse(format!("unknown extension {name:?}"))),
    };
    Ok(SplitExtension { name: name.to_string(), group, normal, complement })
}
