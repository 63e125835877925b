use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism between finite groups, stored as its image array.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    image: Vec<usize>,
}

impl GroupHom {
    /// Validates `image[x·y] = image[x]·image[y]` for every pair.
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!("{} images for {} elements", image.len(), source.order())));
        }
        if let Some(&y) = image.iter().find(|&&y| y >= target.order()) {
            return Err(Error::IndexOutOfRange { index: y, order: target.order() });
        }
        if image[source.identity()] != target.identity() {
            return Err(Error::NotAHomomorphism("identity not preserved".into()));
        }
        for x in source.elements() {
            let ix = image[x];
            for (y, xy) in source.row(x).enumerate() {
                if image[xy] != target.mul(ix, image[y]) {
                    return Err(Error::NotAHomomorphism(format!("fails at ({x}, {y})")));
                }
            }
        }
        Ok(GroupHom { source: source.clone(), target: target.clone(), image })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), image: g.elements().collect() }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        let elems = self.source.elements().filter(|&x| self.image[x] == e).collect();
        Subgroup::from_sorted_unchecked(self.source.clone(), elems)
    }

    pub fn image_subgroup(&self) -> Subgroup {
        let mut elems = self.image.clone();
        elems.sort_unstable();
        elems.dedup();
        Subgroup::from_sorted_unchecked(self.target.clone(), elems)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_subgroup().len() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    /// `next ∘ self`
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(Error::GroupMismatch("composition of non-matching homomorphisms".into()));
        }
        let image = self.image.iter().map(|&y| next.image[y]).collect();
        Ok(GroupHom { source: self.source.clone(), target: next.target.clone(), image })
    }

    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism() {
            return Err(Error::NotAHomomorphism("inverse of a non-isomorphism".into()));
        }
        let mut image = vec![0; self.target.order()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Ok(GroupHom { source: self.target.clone(), target: self.source.clone(), image })
    }
}
