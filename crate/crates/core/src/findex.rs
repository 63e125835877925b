//! Finitely presented groups and enumeration of their subgroups of small
//! index through standardized coset tables.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingrp::FiniteGroup;

pub const MAX_RANK: usize = 3;
pub const MAX_INDEX: usize = 7;

/// A letter is `±(g + 1)` for generator `g`.
pub type Word = Vec<i32>;

fn free_reduce(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Column of a letter in a coset table: `2g` for `g`, `2g + 1` for `g⁻¹`.
fn column(letter: i32) -> usize {
    let g = (letter.unsigned_abs() - 1) as usize;
    2 * g + usize::from(letter < 0)
}

fn inverse_column(col: usize) -> usize {
    col ^ 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    rank: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(rank: usize, relators: Vec<Word>) -> Result<Self> {
        for w in &relators {
            if let Some(&bad) = w.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > rank) {
                return Err(Error::Parse(format!("letter {bad} out of range for rank {rank}")));
            }
        }
        let relators = relators.iter().map(|w| free_reduce(w)).filter(|w| !w.is_empty()).collect();
        Ok(Presentation { rank, relators })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

impl FromStr for Presentation {
    type Err = Error;

    /// `"a,b;abAB"`: generators, then comma-separated relators with
    /// uppercase letters for inverses.
    fn from_str(s: &str) -> Result<Self> {
        let (gens, rels) = s.split_once(';').unwrap_or((s, ""));
        let names: Vec<char> = gens
            .split(',')
            .map(str::trim)
            .map(|t| {
                let mut cs = t.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => Ok(c),
                    _ => Err(Error::Parse(format!("generator {t:?} must be one lowercase letter"))),
                }
            })
            .collect::<Result<_>>()?;
        for (i, c) in names.iter().enumerate() {
            if names[..i].contains(c) {
                return Err(Error::Parse(format!("generator {c} listed twice")));
            }
        }
        let relators = rels
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.chars()
                    .map(|c| {
                        let g = names
                            .iter()
                            .position(|&n| n == c.to_ascii_lowercase())
                            .ok_or_else(|| Error::Parse(format!("unknown generator {c:?} in relator {t:?}")))?;
                        Ok(if c.is_ascii_uppercase() { -(g as i32 + 1) } else { g as i32 + 1 })
                    })
                    .collect::<Result<Word>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(names.len(), relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = |l: i32| {
            let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
            if l < 0 { c.to_ascii_uppercase() } else { c }
        };
        let gens: Vec<String> = (1..=self.rank as i32).map(|g| letter(g).to_string()).collect();
        let rels: Vec<String> = self.relators.iter().map(|w| w.iter().map(|&l| letter(l)).collect()).collect();
        write!(f, "{};{}", gens.join(","), rels.join(","))
    }
}

/// A subgroup of finite index, by the action on its cosets.
///
/// Coset 0 is the subgroup itself; `table[c][2g]` is `c·g` and
/// `table[c][2g + 1]` is `c·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupRecord {
    pub index: usize,
    pub table: Vec<Vec<usize>>,
    pub canonical: bool,
}

impl SubgroupRecord {
    /// Permutation of the cosets induced by generator `g`.
    pub fn generator_permutation(&self, g: usize) -> Vec<usize> {
        self.table.iter().map(|row| row[2 * g]).collect()
    }

    pub fn trace(&self, coset: usize, word: &[i32]) -> usize {
        word.iter().fold(coset, |c, &l| self.table[c][column(l)])
    }

    /// Whether the table is the breadth-first standard form: scanning rows in
    /// order, cosets appear for the first time in increasing order.
    pub fn is_standard(&self) -> bool {
        let mut next = 1;
        for row in &self.table {
            for &d in row {
                if d == next {
                    next += 1;
                } else if d > next {
                    return false;
                }
            }
        }
        next == self.index
    }

    /// Checks the coset-table invariants against `p`.
    pub fn validate(&self, p: &Presentation) -> Result<()> {
        let n = self.index;
        let bad = |m: &str| Err(Error::InvalidTable(m.into()));
        if self.table.len() != n || self.table.iter().any(|r| r.len() != 2 * p.rank || r.iter().any(|&d| d >= n)) {
            return bad("coset table has the wrong shape");
        }
        for col in 0..2 * p.rank {
            if (0..n).any(|c| self.table[self.table[c][col]][inverse_column(col)] != c) {
                return bad("generator column is not a permutation");
            }
        }
        if !p.relators.iter().all(|w| (0..n).all(|c| self.trace(c, w) == c)) {
            return bad("a relator acts nontrivially");
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &self.table[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        if seen.contains(&false) {
            return bad("action is not transitive");
        }
        Ok(())
    }
}

const UNDEF: usize = usize::MAX;

struct Search<'a> {
    pres: &'a Presentation,
    n_max: usize,
    table: Vec<Vec<usize>>,
    used: usize,
    found: Vec<SubgroupRecord>,
}

impl Search<'_> {
    fn first_undefined(&self) -> Option<(usize, usize)> {
        (0..self.used).flat_map(|c| (0..self.table[c].len()).map(move |x| (c, x))).find(|&(c, x)| self.table[c][x] == UNDEF)
    }

    /// Sets `c·col = d` and the matching inverse entry. Returns false on a clash.
    fn assign(&mut self, c: usize, col: usize, d: usize, trail: &mut Vec<(usize, usize)>) -> bool {
        let inv = inverse_column(col);
        match (self.table[c][col], self.table[d][inv]) {
            (UNDEF, UNDEF) => {
                self.table[c][col] = d;
                trail.push((c, col));
                if (d, inv) != (c, col) {
                    self.table[d][inv] = c;
                    trail.push((d, inv));
                }
                true
            }
            (x, y) => x == d && y == c,
        }
    }

    /// Scans every relator from every coset, filling forced entries.
    /// Returns false if some relator cannot close up.
    fn deduce(&mut self, trail: &mut Vec<(usize, usize)>) -> bool {
        let mut changed = true;
        while changed {
            changed = false;
            for rel in &self.pres.relators {
                for start in 0..self.used {
                    let (mut f, mut i) = (start, 0);
                    while i < rel.len() && self.table[f][column(rel[i])] != UNDEF {
                        f = self.table[f][column(rel[i])];
                        i += 1;
                    }
                    if i == rel.len() {
                        if f != start {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (start, rel.len());
                    while j > i && self.table[b][inverse_column(column(rel[j - 1]))] != UNDEF {
                        b = self.table[b][inverse_column(column(rel[j - 1]))];
                        j -= 1;
                    }
                    if j == i + 1 {
                        if !self.assign(f, column(rel[i]), b, trail) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
        }
        true
    }

    fn run(&mut self) {
        let Some((c, col)) = self.first_undefined() else {
            let table: Vec<Vec<usize>> = self.table[..self.used].to_vec();
            self.found.push(SubgroupRecord { index: self.used, table, canonical: true });
            return;
        };
        let limit = if self.used < self.n_max { self.used + 1 } else { self.used };
        for d in 0..limit {
            let fresh = d == self.used;
            if !fresh && self.table[d][inverse_column(col)] != UNDEF {
                continue;
            }
            if fresh {
                self.used += 1;
            }
            let mut trail = Vec::new();
            if self.assign(c, col, d, &mut trail) && self.deduce(&mut trail) {
                self.run();
            }
            for (x, y) in trail {
                self.table[x][y] = UNDEF;
            }
            if fresh {
                self.used -= 1;
            }
        }
    }
}

/// Every subgroup of index at most `n_max`, each exactly once, ordered by
/// index and then by search order.
pub fn low_index_subgroups(p: &Presentation, n_max: usize) -> Result<Vec<SubgroupRecord>> {
    if p.rank > MAX_RANK || n_max > MAX_INDEX {
        return Err(Error::LimitsExceeded(format!(
            "rank {} and index {n_max} must be at most {MAX_RANK} and {MAX_INDEX}",
            p.rank
        )));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mut search = Search { pres: p, n_max, table: vec![vec![UNDEF; 2 * p.rank]; n_max], used: 1, found: Vec::new() };
    let mut trail = Vec::new();
    if search.deduce(&mut trail) {
        search.run();
    }
    let mut found = search.found;
    found.sort_by_key(|r| r.index);
    Ok(found)
}

/// The image of `P` acting on the cosets of all its subgroups of index at most `n`.
#[derive(Clone, Debug)]
pub struct CoreQuotient {
    pub group: FiniteGroup,
    /// Image of each generator in `group`.
    pub generator_images: Vec<usize>,
    /// Number of subgroups whose cores were intersected.
    pub subgroups: usize,
}

impl CoreQuotient {
    /// Image of a word.
    pub fn evaluate(&self, word: &[i32]) -> usize {
        word.iter().fold(self.group.identity(), |acc, &l| {
            let g = self.generator_images[(l.unsigned_abs() - 1) as usize];
            self.group.mul(acc, if l < 0 { self.group.inv(g) } else { g })
        })
    }
}

pub fn core_quotient(p: &Presentation, n: usize, cap: usize) -> Result<CoreQuotient> {
    let records = low_index_subgroups(p, n)?;
    let degree: usize = records.iter().map(|r| r.index).sum();
    let gens: Vec<Vec<usize>> = (0..p.rank)
        .map(|g| {
            let mut offset = 0;
            let mut perm = Vec::with_capacity(degree);
            for r in &records {
                perm.extend(r.generator_permutation(g).iter().map(|&d| d + offset));
                offset += r.index;
            }
            perm
        })
        .collect();
    let compose = |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { a.iter().map(|&i| b[i]).collect() };
    let (group, elems) = FiniteGroup::from_generators(format!("core{n}({p})"), (0..degree).collect(), &gens, compose, cap)?;
    let generator_images = gens.iter().map(|g| elems.binary_search(g).expect("generator lies in its closure")).collect();
    let q = CoreQuotient { group, generator_images, subgroups: records.len() };
    if p.relators.iter().any(|w| q.evaluate(w) != q.group.identity()) {
        return Err(Error::NotAHomomorphism("a relator survives in the coset action".into()));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::DEFAULT_CAP;

    fn counts(s: &str, n: usize) -> Vec<usize> {
        let recs = low_index_subgroups(&s.parse().unwrap(), n).unwrap();
        (1..=n).map(|k| recs.iter().filter(|r| r.index == k).count()).collect()
    }

    #[test]
    fn parse_round_trip() {
        let p: Presentation = "a,b;abAB, aA".parse().unwrap();
        assert_eq!(p.relators(), &[vec![1, 2, -1, -2]]);
        assert_eq!(p.to_string(), "a,b;abAB");
        assert!("a,b;abc".parse::<Presentation>().is_err());
        assert!("a,a;".parse::<Presentation>().is_err());
    }

    #[test]
    fn known_counts() {
        assert_eq!(counts("a;", 7), vec![1; 7]);
        assert_eq!(counts("a,b;abAB", 6), vec![1, 3, 4, 7, 6, 12]);
        assert_eq!(counts("a,b;", 3), vec![1, 3, 13]);
        assert_eq!(counts("a,b;aa,bb,abab", 4), vec![1, 3, 0, 1]);
    }

    #[test]
    fn tables_are_valid_and_standard() {
        let p: Presentation = "a,b;abAB".parse().unwrap();
        for r in low_index_subgroups(&p, 5).unwrap() {
            r.validate(&p).unwrap();
            assert!(r.is_standard());
        }
    }

    #[test]
    fn limits() {
        let p: Presentation = "a,b,c,d;".parse().unwrap();
        assert!(matches!(low_index_subgroups(&p, 2), Err(Error::LimitsExceeded(_))));
        let z: Presentation = "a;".parse().unwrap();
        assert!(matches!(low_index_subgroups(&z, 8), Err(Error::LimitsExceeded(_))));
    }

    #[test]
    fn core_quotients() {
        let z: Presentation = "a;".parse().unwrap();
        let q = core_quotient(&z, 4, DEFAULT_CAP).unwrap();
        assert_eq!(q.group.order(), 12);
        assert!(q.group.is_abelian());
        assert_eq!(q.group.element_order(q.generator_images[0]), 12);
        let z2: Presentation = "a,b;abAB".parse().unwrap();
        let q2 = core_quotient(&z2, 2, DEFAULT_CAP).unwrap();
        assert_eq!((q2.group.order(), q2.group.exponent()), (4, 2));
        assert_eq!(core_quotient(&z2, 1, DEFAULT_CAP).unwrap().group.order(), 1);
    }
}
