//! Subgroups of small index in finitely presented groups.

use std::collections::BTreeSet;

use profinite::catalog;
use profinite::fingrp::{are_isomorphic, FiniteGroup};
use profinite::findex::{core_quotient, low_index_subgroups, Presentation, MAX_INDEX, MAX_RANK};

fn pres(s: &str) -> Presentation {
    s.parse().unwrap()
}

fn counts(p: &Presentation, n: usize) -> Vec<usize> {
    let recs = low_index_subgroups(p, n).unwrap();
    (1..=n).map(|k| recs.iter().filter(|r| r.index == k).count()).collect()
}

/// Subgroups of index `n` in Z² by Hermite normal forms `[[a, b], [0, d]]`, `ad = n`, `0 ≤ b < d`.
fn hermite_z2(n: usize) -> usize {
    (1..=n).filter(|a| n.is_multiple_of(*a)).map(|a| (0..n / a).count()).sum()
}

/// Subgroups of index `n` in Z³: upper triangular Hermite forms with diagonal
/// `(a, b, c)` have `b·c²` choices above the diagonal.
fn hermite_z3(n: usize) -> usize {
    let mut total = 0;
    for a in 1..=n {
        for b in 1..=n {
            if n.is_multiple_of(a * b) {
                let c = n / (a * b);
                total += b * c * c;
            }
        }
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Index-`n` subgroups of F2: transitive pairs of permutations of `n` points,
/// each subgroup counted `(n-1)!` times.
fn free_rank_two(n: usize) -> usize {
    let perms = permutations(n);
    let mut transitive = 0;
    for a in &perms {
        for b in &perms {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for y in [a[x], b[x]] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if seen.iter().all(|&s| s) {
                transitive += 1;
            }
        }
    }
    transitive / (1..n).product::<usize>()
}

/// Hall's recursion `a_n = n·n! − Σ_{k<n} (n−k)!·a_k` for F2.
fn hall_f2(n_max: usize) -> Vec<usize> {
    let fact = |k: usize| (1..=k).product::<usize>();
    let mut a: Vec<usize> = Vec::new();
    for n in 1..=n_max {
        let sub: usize = (1..n).map(|k| fact(n - k) * a[k - 1]).sum();
        a.push(n * fact(n) - sub);
    }
    a
}

#[test]
fn free_abelian_counts() {
    let z2 = pres("a,b;abAB");
    let expected: Vec<usize> = (1..=6).map(hermite_z2).collect();
    assert_eq!(expected, vec![1, 3, 4, 7, 6, 12]);
    assert_eq!(counts(&z2, 6), expected);
    let z3 = pres("a,b,c;abAB,acAC,bcBC");
    let expected: Vec<usize> = (1..=4).map(hermite_z3).collect();
    assert_eq!(expected[1], 7);
    assert_eq!(counts(&z3, 4), expected);
    assert_eq!(counts(&pres("a"), 7), vec![1; 7]);
}

#[test]
fn free_group_counts() {
    let f2 = pres("a,b");
    let brute: Vec<usize> = (1..=4).map(free_rank_two).collect();
    assert_eq!(brute, vec![1, 3, 13, 71]);
    assert_eq!(hall_f2(4), brute);
    assert_eq!(counts(&f2, 7), hall_f2(7));
}

#[test]
fn finite_presentations() {
    let s3 = pres("a,b;aa,bbb,abab");
    assert_eq!(counts(&s3, 6), vec![1, 1, 3, 0, 0, 1]);
    let q = core_quotient(&s3, 3, 512).unwrap();
    assert!(are_isomorphic(&q.group, &catalog::symmetric(3, 512).unwrap(), 512).unwrap().is_some());
    let c4 = pres("a;aaaa");
    assert_eq!(counts(&c4, 7), vec![1, 1, 0, 1, 0, 0, 0]);
    let q8 = pres("a,b;aaaa,aaBB,abaB");
    let q = core_quotient(&q8, 7, 512).unwrap();
    // every proper subgroup of Q8 contains the center
    assert_eq!(q.group.order(), 4);
    assert!(q.group.is_abelian());
}

#[test]
fn tables_are_valid_standard_and_distinct() {
    for s in ["a,b", "a,b;abAB", "a,b;aa,bbb,abab", "a,b,c;abAB,acAC,bcBC", "a,b;aabb"] {
        let p = pres(s);
        let n = if p.rank() == 3 { 4 } else { 5 };
        let recs = low_index_subgroups(&p, n).unwrap();
        let mut seen = BTreeSet::new();
        for r in &recs {
            r.validate(&p).unwrap();
            assert!(r.is_standard());
            assert!(seen.insert(r.table.clone()), "{s}: duplicate table");
            for w in p.relators() {
                assert!((0..r.index).all(|c| r.trace(c, w) == c));
            }
        }
        assert!(recs.windows(2).all(|w| w[0].index <= w[1].index));
    }
}

#[test]
fn core_quotients_of_z2() {
    let z2 = pres("a,b;abAB");
    let q = core_quotient(&z2, 2, 512).unwrap();
    assert!(are_isomorphic(&q.group, &catalog::klein_four(), 512).unwrap().is_some());
    assert_eq!(q.subgroups, 4);
    let q = core_quotient(&z2, 1, 512).unwrap();
    assert_eq!(q.group.order(), 1);
    let q = core_quotient(&z2, 3, 512).unwrap();
    let target = profinite::fingrp::direct_product(&FiniteGroup::cyclic(6), &FiniteGroup::cyclic(6));
    assert!(are_isomorphic(&q.group, &target, 512).unwrap().is_some());
    assert_eq!(q.evaluate(&[1, 2, -1, -2]), q.group.identity());
}

#[test]
fn limits_and_parsing() {
    assert!(low_index_subgroups(&pres("a,b"), MAX_INDEX + 1).is_err());
    let wide = Presentation::new(MAX_RANK + 1, vec![]).unwrap();
    assert!(low_index_subgroups(&wide, 2).is_err());
    assert!(low_index_subgroups(&pres("a,b"), 0).unwrap().is_empty());
    assert!("a,a".parse::<Presentation>().is_err());
    assert!("a;ab".parse::<Presentation>().is_err());
    assert!(Presentation::new(1, vec![vec![2]]).is_err());
    let p = pres("a,b;abAB, aA");
    assert_eq!(p.relators().len(), 1);
    assert_eq!(p.to_string(), "a,b;abAB");
}
