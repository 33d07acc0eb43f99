use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{BasedSpace, SparseVec};
use crate::scalar::Field;

/// Linear map stored column by column: `cols[j]` is the image of source basis vector `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap<F> {
    source: BasedSpace,
    target: BasedSpace,
    cols: Vec<SparseVec<F>>,
}

impl<F: Field> LinMap<F> {
    pub fn new(source: BasedSpace, target: BasedSpace, cols: Vec<SparseVec<F>>) -> Result<Self> {
        if cols.len() != source.dim() {
            return Err(Error::dims("linear map columns", source.dim(), cols.len()));
        }
        let td = target.dim();
        for c in &cols {
            if c.dim() != td {
                return Err(Error::dims("linear map column length", td, c.dim()));
            }
        }
        Ok(LinMap { source, target, cols })
    }

    pub fn from_fn(
        source: BasedSpace,
        target: BasedSpace,
        mut f: impl FnMut(usize) -> SparseVec<F>,
    ) -> Result<Self> {
        let cols = (0..source.dim()).map(&mut f).collect();
        Self::new(source, target, cols)
    }

    /// Builds a map from `(row, col, value)` triples; repeated positions accumulate.
    pub fn from_triples(
        source: BasedSpace,
        target: BasedSpace,
        triples: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Result<Self> {
        let td = target.dim();
        let sd = source.dim();
        let mut cols = vec![SparseVec::zeros(td); sd];
        for (r, c, v) in triples {
            if r >= td || c >= sd {
                return Err(Error::Shape(format!(
                    "entry ({r}, {c}) outside a {td}×{sd} matrix"
                )));
            }
            cols[c].add_term(r, v);
        }
        Self::new(source, target, cols)
    }

    pub fn identity(space: &BasedSpace) -> Self {
        let n = space.dim();
        LinMap {
            source: space.clone(),
            target: space.clone(),
            cols: (0..n).map(|i| SparseVec::unit(n, i)).collect(),
        }
    }

    pub fn zero(source: &BasedSpace, target: &BasedSpace) -> Self {
        LinMap {
            source: source.clone(),
            target: target.clone(),
            cols: vec![SparseVec::zeros(target.dim()); source.dim()],
        }
    }

    pub fn source(&self) -> &BasedSpace {
        &self.source
    }

    pub fn target(&self) -> &BasedSpace {
        &self.target
    }

    pub fn col(&self, j: usize) -> &SparseVec<F> {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[SparseVec<F>] {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> F {
        self.cols[c].coeff(r)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        assert_eq!(v.dim(), self.source.dim(), "apply: vector/source dimension");
        let mut out = SparseVec::zeros(self.target.dim());
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        out
    }

    pub fn try_apply(&self, v: &SparseVec<F>) -> Result<SparseVec<F>> {
        if v.dim() != self.source.dim() {
            return Err(Error::dims("apply", self.source.dim(), v.dim()));
        }
        Ok(self.apply(v))
    }

    /// `self ∘ inner`; spaces must agree label-wise.
    pub fn compose(&self, inner: &LinMap<F>) -> Result<LinMap<F>> {
        if inner.target != self.source {
            return Err(Error::SpaceMismatch(format!(
                "compose: {:?} vs {:?}",
                inner.target, self.source
            )));
        }
        Ok(LinMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            cols: inner.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn tensor(&self, other: &LinMap<F>) -> LinMap<F> {
        let mut cols = Vec::with_capacity(self.cols.len() * other.cols.len());
        for a in &self.cols {
            for b in &other.cols {
                cols.push(a.kron(b));
            }
        }
        LinMap {
            source: self.source.tensor(&other.source),
            target: self.target.tensor(&other.target),
            cols,
        }
    }

    fn check_same_shape(&self, other: &LinMap<F>, what: &str) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::SpaceMismatch(what.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &LinMap<F>) -> Result<LinMap<F>> {
        self.check_same_shape(other, "add")?;
        Ok(LinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &LinMap<F>) -> Result<LinMap<F>> {
        self.check_same_shape(other, "sub")?;
        Ok(LinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scaled(&self, c: &F) -> LinMap<F> {
        LinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cols: self.cols.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// Same matrix read between spaces of equal dimensions.
    pub fn relabel(&self, source: &BasedSpace, target: &BasedSpace) -> Result<LinMap<F>> {
        if source.dim() != self.source.dim() || target.dim() != self.target.dim() {
            return Err(Error::Shape("relabel: dimensions differ".into()));
        }
        Ok(LinMap {
            source: source.clone(),
            target: target.clone(),
            cols: self.cols.clone(),
        })
    }

    /// Rows of the matrix as sparse vectors over the source.
    pub fn rows(&self) -> Vec<SparseVec<F>> {
        let mut rows = vec![SparseVec::zeros(self.source.dim()); self.target.dim()];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                rows[i].add_term(j, x.clone());
            }
        }
        rows
    }

    pub fn transpose(&self) -> LinMap<F> {
        LinMap {
            source: self.target.clone(),
            target: self.source.clone(),
            cols: self.rows(),
        }
    }

    pub fn pow(&self, k: usize) -> Result<LinMap<F>> {
        let mut acc = LinMap::identity(&self.source);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// First source basis vector on which two maps differ.
    pub fn first_difference(&self, other: &LinMap<F>) -> Option<usize> {
        if self.source.dim() != other.source.dim() || self.target.dim() != other.target.dim() {
            return Some(0);
        }
        self.cols.iter().zip(&other.cols).position(|(a, b)| a != b)
    }

    pub fn same_matrix(&self, other: &LinMap<F>) -> bool {
        self.source.dim() == other.source.dim()
            && self.target.dim() == other.target.dim()
            && self.cols == other.cols
    }
}

impl<F: fmt::Debug> fmt::Debug for LinMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMap {:?} -> {:?}", self.source, self.target)?;
        for (j, c) in self.cols.iter().enumerate() {
            writeln!(f, "  {j}: {c:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn swap() -> LinMap<Rational> {
        let s = BasedSpace::new(["e1", "e2"]).unwrap();
        LinMap::from_triples(s.clone(), s, [(0, 1, r(1)), (1, 0, r(1))]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let s = BasedSpace::new(["a", "b", "c"]).unwrap();
        let id = LinMap::<Rational>::identity(&s);
        assert_eq!(id.tensor(&id), LinMap::identity(&s.tensor(&s)));
    }

    #[test]
    fn tensor_with_zero_is_zero() {
        let f = swap();
        let z = LinMap::zero(f.source(), f.target());
        assert!(f.tensor(&z).is_zero());
    }

    #[test]
    fn swap_tensor_swap() {
        let f = swap();
        let ff = f.tensor(&f);
        let e11 = SparseVec::unit(4, 0);
        assert_eq!(ff.apply(&e11), SparseVec::unit(4, 3));
    }

    #[test]
    fn compose_checks_spaces() {
        let f = swap();
        let other = BasedSpace::new(["x", "y"]).unwrap();
        let g = LinMap::<Rational>::identity(&other);
        assert!(f.compose(&g).is_err());
        assert!(f.compose(&f).unwrap().same_matrix(&LinMap::identity(f.source())));
    }

    #[test]
    fn triples_out_of_range() {
        let s = BasedSpace::new(["a"]).unwrap();
        assert!(LinMap::from_triples(s.clone(), s, [(1, 0, r(1))]).is_err());
    }
}
