use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Factor {
    Labeled(Arc<[String]>),
    Anonymous(usize),
}

impl Factor {
    fn dim(&self) -> usize {
        match self {
            Factor::Labeled(l) => l.len(),
            Factor::Anonymous(n) => *n,
        }
    }

    fn label(&self, i: usize) -> String {
        match self {
            Factor::Labeled(l) => l[i].clone(),
            Factor::Anonymous(_) => format!("#{i}"),
        }
    }

    fn same(&self, other: &Factor) -> bool {
        match (self, other) {
            (Factor::Labeled(a), Factor::Labeled(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => self == other,
        }
    }
}

/// A finite-dimensional space with an ordered, labeled basis.
///
/// Tensor products are kept as a list of factors and never expanded, so
/// labels of a tensor power are produced on demand.
#[derive(Clone)]
pub struct BasedSpace {
    factors: Arc<[Factor]>,
}

impl BasedSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Shape(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(BasedSpace {
            factors: Arc::from(vec![Factor::Labeled(Arc::from(labels))]),
        })
    }

    /// Space of the given dimension with labels `#0, #1, ...`.
    pub fn anonymous(dim: usize) -> Self {
        BasedSpace {
            factors: Arc::from(vec![Factor::Anonymous(dim)]),
        }
    }

    /// The ground field as a one-dimensional space with basis label `1`.
    pub fn scalar() -> Self {
        BasedSpace {
            factors: Arc::from(vec![Factor::Labeled(Arc::from(vec!["1".to_string()]))]),
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).product()
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_dims(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::dim).collect()
    }

    pub fn factor(&self, i: usize) -> BasedSpace {
        BasedSpace {
            factors: Arc::from(vec![self.factors[i].clone()]),
        }
    }

    pub fn label(&self, mut i: usize) -> String {
        let mut parts = Vec::with_capacity(self.factors.len());
        for f in self.factors.iter().rev() {
            let d = f.dim();
            parts.push(f.label(i % d));
            i /= d;
        }
        parts.reverse();
        parts.join("⊗")
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    /// Position of a label, matching the full `⊗`-joined form.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        if self.factors.len() == 1 {
            if let Factor::Labeled(l) = &self.factors[0] {
                return l.iter().position(|x| x == label);
            }
        }
        (0..self.dim()).find(|&i| self.label(i) == label)
    }

    /// Row-major tensor product: `self` is the outer factor.
    pub fn tensor(&self, other: &BasedSpace) -> BasedSpace {
        let mut f: Vec<Factor> = self.factors.to_vec();
        f.extend(other.factors.iter().cloned());
        BasedSpace {
            factors: Arc::from(f),
        }
    }

    /// `self^{⊗k}`; `k = 0` gives the scalar space.
    pub fn power(&self, k: usize) -> BasedSpace {
        if k == 0 {
            return BasedSpace::scalar();
        }
        let mut f = Vec::with_capacity(k * self.factors.len());
        for _ in 0..k {
            f.extend(self.factors.iter().cloned());
        }
        BasedSpace {
            factors: Arc::from(f),
        }
    }
}

impl PartialEq for BasedSpace {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.factors, &other.factors) {
            return true;
        }
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(other.factors.iter())
                .all(|(a, b)| a.same(b))
    }
}

impl Eq for BasedSpace {}

impl fmt::Debug for BasedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.factor_dims().iter().map(|d| d.to_string()).collect();
        write!(f, "BasedSpace({})", dims.join("⊗"))
    }
}
