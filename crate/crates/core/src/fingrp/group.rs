use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Subgroup;
use crate::error::{Error, Result};

/// Default largest order for which tables are built and isomorphisms searched.
pub const DEFAULT_CAP: usize = 512;

/// Full associativity is checked up to this order; larger tables are sampled.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 512;
const ASSOCIATIVITY_SAMPLES: usize = 200_000;

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`. Cloning is cheap; the table is shared.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

struct GroupData {
    label: String,
    order: usize,
    // row-major: table[a * order + b] = a·b
    table: Vec<u32>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Builds and validates the table `a·b = mul(a, b)`.
    pub fn from_fn(label: impl Into<String>, order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if order > u32::MAX as usize {
            return Err(Error::InvalidTable("order too large".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(Error::InvalidTable(format!("entry {c} at ({a}, {b}) out of range")));
                }
                table.push(c as u32);
            }
        }
        Self::from_flat(label.into(), order, table)
    }

    pub fn from_table(label: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        Self::from_fn(label, n, |a, b| rows[a][b])
    }

    fn from_flat(label: String, order: usize, table: Vec<u32>) -> Result<Self> {
        let n = order;
        let at = |a: usize, b: usize| table[a * n + b] as usize;

        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let c = at(a, b);
                if seen[c] == a + 1 {
                    return Err(Error::InvalidTable(format!("row {a} repeats {c}")));
                }
                seen[c] = a + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..n {
            for a in 0..n {
                let c = at(a, b);
                if seen[c] == b + 1 {
                    return Err(Error::InvalidTable(format!("column {b} repeats {c}")));
                }
                seen[c] = b + 1;
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let inv: Vec<usize> = (0..n)
            .map(|x| (0..n).find(|&y| at(x, y) == identity).expect("latin square row contains identity"))
            .collect();
        if (0..n).any(|x| at(inv[x], x) != identity) {
            return Err(Error::InvalidTable("left and right inverses differ".into()));
        }

        if n <= FULL_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    let row_ab = &table[ab * n..(ab + 1) * n];
                    let row_b = &table[b * n..(b + 1) * n];
                    let row_a = &table[a * n..(a + 1) * n];
                    for c in 0..n {
                        if row_ab[c] != row_a[row_b[c] as usize] {
                            return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }

        Ok(FiniteGroup(Arc::new(GroupData { label, order, table, identity, inv })))
    }

    /// Closure of `gens` under `mul`, with elements indexed in ascending `T` order.
    ///
    /// Returns the group and the element list. Fails once more than `cap`
    /// elements have been produced.
    pub fn from_generators<T: Ord + Clone>(
        label: impl Into<String>,
        identity: T,
        gens: &[T],
        mul: impl Fn(&T, &T) -> T,
        cap: usize,
    ) -> Result<(Self, Vec<T>)> {
        let mut set = BTreeSet::new();
        set.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = mul(&x, g);
                if set.insert(y.clone()) {
                    if set.len() > cap {
                        return Err(Error::CapExceeded { order: set.len(), cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<T> = set.into_iter().collect();
        let index: BTreeMap<&T, usize> = elems.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let group = Self::from_fn(label, elems.len(), |a, b| index[&mul(&elems[a], &elems[b])])?;
        Ok((group, elems))
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(format!("C{n}"), n, |a, b| (a + b) % n).expect("cyclic table is valid")
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        let d = &self.0;
        FiniteGroup(Arc::new(GroupData {
            label: label.into(),
            order: d.order,
            table: d.table.clone(),
            identity: d.identity,
            inv: d.inv.clone(),
        }))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.table[a * self.0.order..(a + 1) * self.0.order].iter().map(|&c| c as usize)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn check_index(&self, x: usize) -> Result<()> {
        if x < self.order() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x, order: self.order() })
        }
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(acc, base))
    }

    /// `g·x·g⁻¹`
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹·b⁻¹·a·b`
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        self.elements().map(|a| self.element_order(a)).collect()
    }

    /// Element order ↦ number of elements of that order.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for o in self.element_orders() {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    pub fn exponent(&self) -> usize {
        self.element_orders().into_iter().fold(1, num_integer::lcm)
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| (a + 1..self.order()).all(|b| self.commutes(a, b)))
    }

    pub fn centralizer_size(&self, a: usize) -> usize {
        self.elements().filter(|&b| self.commutes(a, b)).count()
    }

    pub fn center(&self) -> Subgroup {
        let elems = self.elements().filter(|&a| self.elements().all(|b| self.commutes(a, b))).collect();
        Subgroup::from_sorted_unchecked(self.clone(), elems)
    }

    /// `[G, G]`, generated by all commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let comms: BTreeSet<usize> =
            self.elements().flat_map(|a| self.elements().map(move |b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        let gens: Vec<usize> = comms.into_iter().collect();
        super::generate_subgroup(self, &gens).expect("commutators are elements")
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            label: self.label().to_string(),
            order: self.order(),
            table: self.elements().map(|a| self.row(a).collect()).collect(),
        }
    }

    pub fn from_json(j: &GroupJson) -> Result<Self> {
        if j.table.len() != j.order {
            return Err(Error::InvalidTable(format!("declared order {} but {} rows", j.order, j.table.len())));
        }
        Self::from_table(j.label.clone(), &j.table)
    }

    /// Same group with elements renamed by the bijection `perm` (old index ↦ new index).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.order();
        let mut back = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || back[new] != usize::MAX {
                return Err(Error::InvalidTable("relabeling is not a bijection".into()));
            }
            back[new] = old;
        }
        Self::from_fn(self.label(), n, |a, b| perm[self.mul(back[a], back[b])])
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.order() == other.order() && self.0.table == other.0.table)
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label(), self.order())
    }
}

/// On-disk group format: `{"label", "order", "table"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub label: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table("x", &[]).is_err());
        assert!(FiniteGroup::from_table("x", &[vec![0, 1], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table("x", &[vec![0, 2], vec![1, 0]]).is_err());
        // latin square without identity
        let rows: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (2 * a + 2 * b) % 3).collect()).collect();
        assert!(FiniteGroup::from_table("q", &rows).is_err());
        // loop of order 5 with an involution, so not associative
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("loop", &rows), Err(Error::InvalidTable(m)) if m.contains("associative")));
    }

    #[test]
    fn cyclic_basics() {
        let c6 = FiniteGroup::cyclic(6);
        assert_eq!(c6.identity(), 0);
        assert_eq!(c6.inv(2), 4);
        assert_eq!(c6.element_order(2), 3);
        assert_eq!(c6.pow(5, -2), 2);
        assert!(c6.is_abelian());
        assert_eq!(c6.exponent(), 6);
        assert_eq!(c6.derived_subgroup().len(), 1);
    }

    #[test]
    fn json_round_trip_revalidates() {
        let c4 = FiniteGroup::cyclic(4);
        let j = c4.to_json();
        assert_eq!(FiniteGroup::from_json(&j).unwrap(), c4);
        let mut bad = j.clone();
        bad.table[1][1] = 1;
        assert!(FiniteGroup::from_json(&bad).is_err());
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.starts_with(r#"{"label":"C4","order":4,"table":[[0,1,2,3]"#));
    }

    #[test]
    fn from_generators_closes_permutations() {
        let mul = |p: &Vec<usize>, q: &Vec<usize>| q.iter().map(|&i| p[i]).collect::<Vec<_>>();
        let (s3, elems) = FiniteGroup::from_generators("S3", vec![0, 1, 2], &[vec![1, 0, 2], vec![1, 2, 0]], mul, 100).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(elems[s3.identity()], vec![0, 1, 2]);
        assert!(!s3.is_abelian());
        assert!(matches!(
            FiniteGroup::from_generators("S3", vec![0, 1, 2], &[vec![1, 0, 2], vec![1, 2, 0]], mul, 4),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn sampled_associativity_above_limit() {
        let g = FiniteGroup::cyclic(600);
        assert_eq!(g.order(), 600);
    }
}
