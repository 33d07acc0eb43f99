use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::BasedSpace;
use crate::scalar::Field;

/// Sparse coordinate vector; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<F> {
    dim: usize,
    entries: BTreeMap<usize, F>,
}

impl<F: Field> SparseVec<F> {
    pub fn zeros(dim: usize) -> Self {
        SparseVec {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries.insert(i, F::one());
        v
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut v = Self::zeros(dim);
        for (i, c) in entries {
            v.add_term(i, c);
        }
        v
    }

    pub fn from_dense(values: &[F]) -> Self {
        Self::from_entries(values.len(), values.iter().cloned().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&F> {
        self.entries.get(&i)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.entries.get(&i).cloned().unwrap_or_else(F::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn first(&self) -> Option<(usize, &F)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn to_dense(&self) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn add_term(&mut self, i: usize, c: F) {
        debug_assert!(i < self.dim, "index {i} out of range {}", self.dim);
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c·other`
    pub fn add_scaled(&mut self, other: &SparseVec<F>, c: &F) {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_term(*i, x.clone() * c.clone());
        }
    }

    pub fn scaled(&self, c: &F) -> SparseVec<F> {
        if c.is_zero() {
            return Self::zeros(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> SparseVec<F> {
        SparseVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, x)| (*i, -x.clone())).collect(),
        }
    }

    pub fn add(&self, other: &SparseVec<F>) -> SparseVec<F> {
        let mut out = self.clone();
        out.add_scaled(other, &F::one());
        out
    }

    pub fn sub(&self, other: &SparseVec<F>) -> SparseVec<F> {
        let mut out = self.clone();
        out.add_scaled(other, &-F::one());
        out
    }

    /// Tensor product with row-major indexing (`self` outer).
    pub fn kron(&self, other: &SparseVec<F>) -> SparseVec<F> {
        let mut entries = BTreeMap::new();
        for (i, a) in &self.entries {
            for (j, b) in &other.entries {
                entries.insert(i * other.dim + j, a.clone() * b.clone());
            }
        }
        SparseVec {
            dim: self.dim * other.dim,
            entries,
        }
    }

    pub fn dot(&self, other: &SparseVec<F>) -> F {
        let mut acc = F::zero();
        for (i, a) in &self.entries {
            if let Some(b) = other.entries.get(i) {
                acc += a.clone() * b.clone();
            }
        }
        acc
    }

    /// Same coordinates read in a space of equal dimension.
    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        if dim != self.dim {
            return Err(Error::dims("vector reinterpretation", self.dim, dim));
        }
        self.dim = dim;
        Ok(self)
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, entries: BTreeMap<usize, F>) -> Self {
        SparseVec { dim, entries }
    }

    pub(crate) fn into_entries(self) -> BTreeMap<usize, F> {
        self.entries
    }

    /// Linear combination of basis labels, e.g. `2·x - 1/2·g⊗x`.
    pub fn display_in(&self, space: &BasedSpace) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in self.entries.iter().enumerate() {
            let label = space.label(*i);
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                out.push_str(&mag);
                out.push('·');
            }
            out.push_str(&label);
        }
        out
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseVec[{}]{{", self.dim)?;
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {c:?}")?;
        }
        write!(f, "}}")
    }
}
