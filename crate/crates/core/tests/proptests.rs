use num_bigint::BigInt;
use num_traits::{One, Signed};

use proptest::prelude::*;

use profinite::abdual::{pairing, smith_normal_form, AbGroup, IntMatrix, Rotation};
use profinite::fingrp::{direct_product, quotient, semidirect_product, FiniteGroup, Subgroup};
use profinite::scalar::Scalar;
use profinite::verify::invariant_factor_lists;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of all k×k minors, for k = 1..=min(rows, cols).
fn determinantal_divisors<T: Scalar>(m: &IntMatrix<T>) -> Vec<T> {
    let r = m.rows().min(m.cols());
    (1..=r)
        .map(|k| {
            let mut g = T::zero();
            for rows in subsets(m.rows(), k) {
                for cols in subsets(m.cols(), k) {
                    let minor = IntMatrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m[(i, j)].clone()).collect()).collect());
                    g = g.gcd(&minor.determinant());
                }
            }
            g
        })
        .collect()
}

/// Exact copy in `BigInt`; the product check can overflow narrow types
/// even when every entry of the factorization fits.
fn widen<T: Scalar>(m: &IntMatrix<T>) -> IntMatrix<BigInt> {
    IntMatrix::from_rows(m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string().parse().unwrap()).collect()).collect())
}

fn check_snf<T: Scalar>(m: &IntMatrix<T>) -> Result<(), TestCaseError> {
    let s = smith_normal_form(m);
    let (l, r) = (widen(&s.left), widen(&s.right));
    prop_assert_eq!(&(&(&l * &widen(m)) * &r), &widen(&s.diag));
    prop_assert!(s.diag.is_diagonal());
    prop_assert!(l.determinant().abs().is_one());
    prop_assert!(r.determinant().abs().is_one());
    let d = s.diagonal_entries();
    for w in d.windows(2) {
        prop_assert!(!w[0].is_negative());
        let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        prop_assert!(divides);
    }
    // d_1 ⋯ d_k equals the k-th determinantal divisor
    let mut prefix = T::one();
    for (k, dk) in determinantal_divisors(m).into_iter().enumerate() {
        prefix = prefix * d[k].clone();
        prop_assert_eq!(&prefix, &dk);
    }
    Ok(())
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-10i64..=10, c), r))
}

fn convert<T: Scalar>(rows: &[Vec<i64>]) -> IntMatrix<T> {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| T::of_i64(x)).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn snf_i64(rows in small_matrix()) {
        check_snf(&convert::<i64>(&rows))?;
    }

    #[test]
    fn snf_i128(rows in small_matrix()) {
        check_snf(&convert::<i128>(&rows))?;
    }

    #[test]
    fn snf_bigint(rows in small_matrix()) {
        check_snf(&convert::<BigInt>(&rows))?;
    }
}

fn ab_group(max_order: u64) -> impl Strategy<Value = AbGroup> {
    let lists = invariant_factor_lists(max_order);
    (0..lists.len()).prop_map(move |i| AbGroup::new(lists[i].clone()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_bilinear(a in ab_group(96), seed in any::<[u32; 4]>()) {
        let n = a.order();
        let pick = |k: usize| a.element(seed[k] as usize % n);
        let (c1, c2, x, y) = (pick(0), pick(1), pick(2), pick(3));
        let chi = |c: &[u64]| a.character(c.to_vec()).unwrap();
        prop_assert_eq!(
            pairing(&chi(&c1), &a.add(&x, &y)).unwrap(),
            pairing(&chi(&c1), &x).unwrap() + pairing(&chi(&c1), &y).unwrap()
        );
        prop_assert_eq!(
            pairing(&chi(&a.add(&c1, &c2)), &x).unwrap(),
            pairing(&chi(&c1), &x).unwrap() + pairing(&chi(&c2), &x).unwrap()
        );
        // a nonzero element is seen by some character
        if x.iter().any(|&v| v != 0) {
            prop_assert!(a.characters().any(|c| !pairing(&c, &x).unwrap().is_zero()));
        }
    }

    #[test]
    fn double_dual_is_canonical(a in ab_group(64)) {
        let ev = a.evaluation_map().unwrap();
        let dual = a.dual_group();
        for (i, x) in a.elements().enumerate() {
            for chi in dual.elements() {
                prop_assert_eq!(dual.pairing_raw(ev[i].exps(), &chi), a.pairing_raw(&chi, &x));
            }
        }
        let mut idx: Vec<usize> = ev.iter().map(|c| c.index()).collect();
        idx.sort_unstable();
        idx.dedup();
        prop_assert_eq!(idx.len(), a.order());
    }

    #[test]
    fn annihilator_sizes(a in ab_group(36)) {
        for s in a.subgroups() {
            let ann = a.annihilator(&s).unwrap();
            prop_assert_eq!(s.len() * ann.len(), a.order());
            for chi in ann.elements() {
                prop_assert!(s.elements().iter().all(|x| a.pairing_raw(&chi, x).is_zero()));
            }
            // Ann(Ann(S)) = S under the self-duality of coordinates
            prop_assert_eq!(a.annihilator(&ann).unwrap().elements(), s.elements());
        }
    }

    #[test]
    fn quotient_kernel_is_the_normal_subgroup(a in ab_group(48), pick in any::<usize>()) {
        let g = a.to_finite_group();
        let subs = a.subgroups();
        let s = &subs[pick % subs.len()];
        let elems: Vec<usize> = s.indices().to_vec();
        let n = Subgroup::from_elements(&g, &elems).unwrap();
        let (q, hom) = quotient(&g, &n).unwrap();
        prop_assert_eq!(q.order() * n.len(), g.order());
        prop_assert!(hom.is_surjective());
        let kernel = hom.kernel();
        prop_assert_eq!(kernel.elements(), n.elements());
    }

    #[test]
    fn trivial_action_gives_direct_product(x in 1usize..=8, y in 1usize..=8) {
        let (n, h) = (FiniteGroup::cyclic(x), FiniteGroup::cyclic(y));
        let act: Vec<Vec<usize>> = h.elements().map(|_| n.elements().collect()).collect();
        let sd = semidirect_product(&n, &h, &act).unwrap();
        prop_assert_eq!(&sd.group, &direct_product(&n, &h));
        prop_assert!(sd.normal_subgroup().is_normal());
        prop_assert!(sd.complement_subgroup().is_normal());
    }

    #[test]
    fn rotations_reduce(num in -1000i64..1000, den in 1i64..200) {
        let r = Rotation::new(num, den);
        prop_assert!(*r.numer() >= 0 && r.numer() < r.denom());
        prop_assert_eq!(r.scale(den), Rotation::zero());
    }
}
