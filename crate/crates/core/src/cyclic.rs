//! Hochschild chains, cyclic operators, the Connes complex and the cyclic bicomplex.
//!
//! Chains of degree `n` live in `B^{⊗(n+1)}` with the row-major flat index of
//! [`BasedSpace::power`]. Every operator exists in two forms: a vector-level
//! function that never materializes a matrix (used on large coring chains), and
//! a [`LinMap`] builder guarded by [`DIM_GUARDRAIL`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hopf::Algebra;
use crate::linalg::tensor::{apply_to_legs, rotate_last_to_front};
use crate::linalg::{
    quotient, rank, solve_affine, BasedSpace, LinMap, Quotient, Rref, SparseVec, DIM_GUARDRAIL,
};
use crate::scalar::Field;

/// `d^(n+1)`, or `None` on overflow.
fn chain_dim(d: usize, n: usize) -> Option<usize> {
    d.checked_pow(u32::try_from(n + 1).ok()?)
}

fn guard(what: impl Into<String>, requested: Option<usize>) -> Result<usize> {
    match requested {
        Some(r) if r <= DIM_GUARDRAIL => Ok(r),
        r => Err(Error::Guardrail {
            what: what.into(),
            requested: r.unwrap_or(usize::MAX),
            limit: DIM_GUARDRAIL,
        }),
    }
}

/// `C_n(B) = B^{⊗(n+1)}` as a based space.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    pub degree: usize,
    pub space: BasedSpace,
}

impl ChainSpace {
    /// Refuses spaces above the dimension guardrail.
    pub fn new<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<Self> {
        guard(format!("C_{n}"), chain_dim(algebra.dim(), n))?;
        Ok(ChainSpace {
            degree: n,
            space: algebra.space().power(n + 1),
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn below_space<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<BasedSpace> {
    if n == 0 {
        Ok(BasedSpace::anonymous(0))
    } else {
        Ok(ChainSpace::new(algebra, n - 1)?.space)
    }
}

fn sign<F: Field>(k: usize) -> F {
    if k.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

fn check_len<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) {
    assert_eq!(
        Some(v.dim()),
        chain_dim(algebra.dim(), n),
        "chain of degree {n} has wrong length"
    );
}

// ---- vector-level operators ----

/// `d_i` on a single chain of degree `n ≥ 1`.
pub fn apply_face<F: Field>(algebra: &Algebra<F>, n: usize, i: usize, v: &SparseVec<F>) -> SparseVec<F> {
    assert!(n >= 1 && i <= n, "face d_{i} on C_{n}");
    check_len(algebra, n, v);
    let d = algebra.dim();
    let dims = vec![d; n + 1];
    if i < n {
        apply_to_legs(v, &dims, i, 2, algebra.mult())
    } else {
        apply_to_legs(&rotate_last_to_front(v, d), &dims, 0, 2, algebra.mult())
    }
}

/// `Σ_{i ∈ range} (−1)^i d_i`; the zero vector of length 0 on `C_0`.
fn alternating_faces<F: Field>(
    algebra: &Algebra<F>,
    n: usize,
    upto: usize,
    v: &SparseVec<F>,
) -> SparseVec<F> {
    if n == 0 {
        return SparseVec::zeros(0);
    }
    let mut out = SparseVec::zeros(v.dim() / algebra.dim());
    for i in 0..upto {
        out.add_scaled(&apply_face(algebra, n, i, v), &sign::<F>(i));
    }
    out
}

/// Hochschild boundary `d`.
pub fn apply_boundary<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    alternating_faces(algebra, n, n + 1, v)
}

/// Truncated boundary `d′`, omitting the last face.
pub fn apply_truncated<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    alternating_faces(algebra, n, n, v)
}

/// Plain rotation `b_0⊗…⊗b_n ↦ b_n⊗b_0⊗…⊗b_{n−1}`, no sign.
pub fn apply_rotation<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    check_len(algebra, n, v);
    rotate_last_to_front(v, algebra.dim())
}

/// Signed cyclic operator `t_n = (−1)^n · rotation`.
pub fn apply_cyclic<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    apply_rotation(algebra, n, v).scaled(&sign::<F>(n))
}

/// Norm `N = 1 + t + ⋯ + t^n`.
pub fn apply_norm<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    let mut out = v.clone();
    let mut cur = v.clone();
    for _ in 0..n {
        cur = apply_cyclic(algebra, n, &cur);
        out = out.add(&cur);
    }
    out
}

/// `1 − t`.
pub fn apply_one_minus_t<F: Field>(algebra: &Algebra<F>, n: usize, v: &SparseVec<F>) -> SparseVec<F> {
    v.sub(&apply_cyclic(algebra, n, v))
}

// ---- materialized operators ----

fn materialize<F: Field>(
    source: BasedSpace,
    target: BasedSpace,
    f: impl Fn(&SparseVec<F>) -> SparseVec<F>,
) -> Result<LinMap<F>> {
    let n = source.dim();
    LinMap::from_fn(source, target, |j| f(&SparseVec::unit(n, j)))
}

/// Face map `d_i: C_n → C_{n−1}`.
pub fn face_map<F: Field>(algebra: &Algebra<F>, n: usize, i: usize) -> Result<LinMap<F>> {
    if n == 0 || i > n {
        return Err(Error::Shape(format!("no face d_{i} on C_{n}")));
    }
    let src = ChainSpace::new(algebra, n)?.space;
    materialize(src, below_space(algebra, n)?, |v| apply_face(algebra, n, i, v))
}

pub fn hochschild_boundary<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<LinMap<F>> {
    let src = ChainSpace::new(algebra, n)?.space;
    materialize(src, below_space(algebra, n)?, |v| apply_boundary(algebra, n, v))
}

pub fn truncated_boundary<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<LinMap<F>> {
    let src = ChainSpace::new(algebra, n)?.space;
    materialize(src, below_space(algebra, n)?, |v| apply_truncated(algebra, n, v))
}

pub fn cyclic_operator<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<LinMap<F>> {
    let s = ChainSpace::new(algebra, n)?.space;
    materialize(s.clone(), s, |v| apply_cyclic(algebra, n, v))
}

pub fn norm_operator<F: Field>(algebra: &Algebra<F>, n: usize) -> Result<LinMap<F>> {
    let s = ChainSpace::new(algebra, n)?.space;
    materialize(s.clone(), s, |v| apply_norm(algebra, n, v))
}

// ---- Connes complex ----

/// Quotient complex `C_n / Im(1 − t_n)` with the induced boundary.
#[derive(Clone, Debug)]
pub struct ConnesComplex<F> {
    /// `quotients[n]` is `C^λ_n`.
    pub quotients: Vec<Quotient<F>>,
    /// `boundaries[n]: C^λ_n → C^λ_{n−1}`; into the zero space for `n = 0`.
    pub boundaries: Vec<LinMap<F>>,
}

impl<F: Field> ConnesComplex<F> {
    pub fn dim(&self, n: usize) -> usize {
        self.quotients[n].space.dim()
    }
}

/// Builds the Connes complex through degree `max_n`, verifying that `d`
/// preserves `Im(1 − t)` and that the induced `d∘d` vanishes.
pub fn connes_complex<F: Field>(algebra: &Algebra<F>, max_n: usize) -> Result<ConnesComplex<F>> {
    let mut quotients: Vec<Quotient<F>> = Vec::with_capacity(max_n + 1);
    let mut boundaries = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let c = ChainSpace::new(algebra, n)?;
        let t = cyclic_operator(algebra, n)?;
        let delta = LinMap::identity(&c.space).sub(&t)?;
        let q = quotient(&c.space, delta.cols())?;
        let bd = hochschild_boundary(algebra, n)?;
        let induced = if n == 0 {
            LinMap::zero(&q.space, &BasedSpace::anonymous(0))
        } else {
            let below = &quotients[n - 1];
            let stable = below.projection.compose(&bd)?.compose(&delta)?;
            if !stable.is_zero() {
                return Err(Error::Falsification(format!(
                    "d does not preserve Im(1 − t) in degree {n}"
                )));
            }
            below.projection.compose(&bd)?.compose(&q.section)?
        };
        if n >= 1 {
            let prev: &LinMap<F> = &boundaries[n - 1];
            if n >= 2 && !prev.compose(&induced)?.is_zero() {
                return Err(Error::Falsification(format!(
                    "induced d∘d ≠ 0 on the Connes complex in degree {n}"
                )));
            }
        }
        quotients.push(q);
        boundaries.push(induced);
    }
    Ok(ConnesComplex {
        quotients,
        boundaries,
    })
}

// ---- cyclic bicomplex ----

/// Element of `Tot_m = ⊕_p C_{m−p}`; column `p` holds a chain of degree `m − p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalChain<F> {
    pub top_degree: usize,
    components: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> TotalChain<F> {
    pub fn zero(top_degree: usize) -> Self {
        TotalChain {
            top_degree,
            components: BTreeMap::new(),
        }
    }

    /// Adds `v` to column `p`; zero results are dropped.
    pub fn add_to(&mut self, p: usize, v: &SparseVec<F>) {
        assert!(
            p <= self.top_degree,
            "column {p} beyond degree {}",
            self.top_degree
        );
        let entry = self
            .components
            .entry(p)
            .or_insert_with(|| SparseVec::zeros(v.dim()));
        assert_eq!(entry.dim(), v.dim(), "column {p} shape");
        entry.add_scaled(v, &F::one());
        if entry.is_zero() {
            self.components.remove(&p);
        }
    }

    /// The chain in column `p`, `None` if it is zero.
    pub fn column(&self, p: usize) -> Option<&SparseVec<F>> {
        self.components.get(&p)
    }

    /// The component of Hochschild degree `q`, i.e. column `top_degree − q`.
    pub fn degree_component(&self, q: usize) -> Option<&SparseVec<F>> {
        self.top_degree.checked_sub(q).and_then(|p| self.column(p))
    }

    pub fn columns(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> + '_ {
        self.components.iter().map(|(p, v)| (*p, v))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sub(&self, other: &TotalChain<F>) -> TotalChain<F> {
        assert_eq!(self.top_degree, other.top_degree, "total degree");
        let mut out = self.clone();
        for (p, v) in other.columns() {
            out.add_to(p, &v.neg());
        }
        out
    }

    /// Applies `f(q, chain)` to every component of Hochschild degree `q`.
    pub fn map_components(&self, mut f: impl FnMut(usize, &SparseVec<F>) -> SparseVec<F>) -> TotalChain<F> {
        let mut out = TotalChain::zero(self.top_degree);
        for (p, v) in self.columns() {
            out.add_to(p, &f(self.top_degree - p, v));
        }
        out
    }

    /// Flat coordinates in `Tot_m`, columns in increasing order.
    fn flatten(&self, d: usize) -> SparseVec<F> {
        let m = self.top_degree;
        let offsets = tot_offsets(d, m);
        let total = offsets[m + 1];
        let mut out = SparseVec::zeros(total);
        for (p, v) in self.columns() {
            for (i, c) in v.iter() {
                out.add_term(offsets[p] + i, c.clone());
            }
        }
        out
    }

    fn unflatten(v: &SparseVec<F>, d: usize, m: usize) -> TotalChain<F> {
        let offsets = tot_offsets(d, m);
        let mut out = TotalChain::zero(m);
        for p in 0..=m {
            let len = offsets[p + 1] - offsets[p];
            let part = SparseVec::from_entries(
                len,
                v.iter()
                    .filter(|(i, _)| *i >= offsets[p] && *i < offsets[p + 1])
                    .map(|(i, c)| (i - offsets[p], c.clone())),
            );
            if !part.is_zero() {
                out.add_to(p, &part);
            }
        }
        out
    }
}

/// Start of each column in the flat layout of `Tot_m`, plus the total length.
fn tot_offsets(d: usize, m: usize) -> Vec<usize> {
    let mut out = vec![0];
    for p in 0..=m {
        let len = chain_dim(d, m - p).expect("total chain dimension");
        out.push(out[p] + len);
    }
    out
}

fn tot_dim(d: usize, m: usize) -> Option<usize> {
    (0..=m).try_fold(0usize, |acc, q| acc.checked_add(chain_dim(d, q)?))
}

/// Total differential of the cyclic bicomplex.
///
/// Even columns carry `(C_*, d)`, odd columns `(C_*, −d′)`. The horizontal map
/// out of an odd column is `1 − t`, out of an even column `p > 0` it is `N`.
/// On `Tot_0` the differential is zero and the result is the empty chain.
pub fn total_differential<F: Field>(algebra: &Algebra<F>, x: &TotalChain<F>) -> TotalChain<F> {
    let m = x.top_degree;
    if m == 0 {
        return TotalChain::zero(0);
    }
    let mut out = TotalChain::zero(m - 1);
    for (p, v) in x.columns() {
        let q = m - p;
        if q > 0 {
            let vert = if p % 2 == 0 {
                apply_boundary(algebra, q, v)
            } else {
                apply_truncated(algebra, q, v).neg()
            };
            out.add_to(p, &vert);
        }
        if p > 0 {
            let horiz = if p % 2 == 1 {
                apply_one_minus_t(algebra, q, v)
            } else {
                apply_norm(algebra, q, v)
            };
            out.add_to(p - 1, &horiz);
        }
    }
    out
}

/// `D: Tot_m → Tot_{m−1}` as a matrix, for `m ≥ 1`.
pub fn total_differential_map<F: Field>(algebra: &Algebra<F>, m: usize) -> Result<LinMap<F>> {
    let d = algebra.dim();
    let src = guard(format!("Tot_{m}"), tot_dim(d, m))?;
    let tgt = if m == 0 {
        0
    } else {
        guard(format!("Tot_{}", m - 1), tot_dim(d, m - 1))?
    };
    LinMap::from_fn(BasedSpace::anonymous(src), BasedSpace::anonymous(tgt), |j| {
        if m == 0 {
            return SparseVec::zeros(0);
        }
        let x = TotalChain::unflatten(&SparseVec::unit(src, j), d, m);
        total_differential(algebra, &x).flatten(d)
    })
}

/// Differentials `D_1, …, D_max` of the total complex; `D∘D = 0` is verified.
#[derive(Clone, Debug)]
pub struct TotalComplex<F> {
    /// `differentials[m]` is `D_m: Tot_m → Tot_{m−1}`; index 0 is the zero map.
    pub differentials: Vec<LinMap<F>>,
}

pub fn cyclic_bicomplex_total<F: Field>(
    algebra: &Algebra<F>,
    max_total_degree: usize,
) -> Result<TotalComplex<F>> {
    let mut differentials = Vec::with_capacity(max_total_degree + 1);
    for m in 0..=max_total_degree {
        let dm = total_differential_map(algebra, m)?;
        if m >= 2 {
            let prev: &LinMap<F> = &differentials[m - 1];
            if !prev.compose(&dm)?.is_zero() {
                return Err(Error::Falsification(format!("D∘D ≠ 0 on Tot_{m}")));
            }
        }
        differentials.push(dm);
    }
    Ok(TotalComplex { differentials })
}

// ---- homology ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologyMode {
    Bicomplex,
    Connes,
}

impl HomologyMode {
    pub fn name(self) -> &'static str {
        match self {
            HomologyMode::Bicomplex => "bicomplex",
            HomologyMode::Connes => "connes",
        }
    }
}

/// `HC_n` with cycle representatives of a basis.
///
/// In bicomplex mode the representatives are flat vectors of `Tot_n`; in
/// Connes mode they are chains in `C_n` lifted by the quotient section.
#[derive(Clone, Debug)]
pub struct Homology<F> {
    pub degree: usize,
    pub mode: HomologyMode,
    pub dim: usize,
    pub basis: Vec<SparseVec<F>>,
}

/// Basis of `ker(out) / im(inc)` as representatives from `ker(out)`.
fn homology_basis<F: Field>(out: &LinMap<F>, inc: &LinMap<F>) -> Vec<SparseVec<F>> {
    let n = out.source().dim();
    let mut rref = Rref::from_rows(n, inc.cols());
    let mut basis = Vec::new();
    let cycles = Rref::from_rows(n, &out.rows()).null_space();
    for z in cycles {
        if rref.insert(&z) {
            basis.push(z);
        }
    }
    basis
}

pub fn cyclic_homology<F: Field>(algebra: &Algebra<F>, n: usize, mode: HomologyMode) -> Result<Homology<F>> {
    let basis = match mode {
        HomologyMode::Bicomplex => {
            let tc = cyclic_bicomplex_total(algebra, n + 1)?;
            homology_basis(&tc.differentials[n], &tc.differentials[n + 1])
        }
        HomologyMode::Connes => {
            let cc = connes_complex(algebra, n + 1)?;
            homology_basis(&cc.boundaries[n], &cc.boundaries[n + 1])
                .iter()
                .map(|z| cc.quotients[n].section.apply(z))
                .collect()
        }
    };
    Ok(Homology {
        degree: n,
        mode,
        dim: basis.len(),
        basis,
    })
}

/// Rank-only dimension of `HC_n`, cheaper than [`cyclic_homology`].
pub fn cyclic_homology_dim<F: Field>(algebra: &Algebra<F>, n: usize, mode: HomologyMode) -> Result<usize> {
    let (out, inc) = match mode {
        HomologyMode::Bicomplex => {
            let tc = cyclic_bicomplex_total(algebra, n + 1)?;
            (tc.differentials[n].clone(), tc.differentials[n + 1].clone())
        }
        HomologyMode::Connes => {
            let cc = connes_complex(algebra, n + 1)?;
            (cc.boundaries[n].clone(), cc.boundaries[n + 1].clone())
        }
    };
    Ok(out.source().dim() - rank(&out) - rank(&inc))
}

/// A cycle of the total complex over a fixed algebra.
#[derive(Clone, Debug)]
pub struct CyclicClass<F> {
    pub representative: TotalChain<F>,
    pub degree: usize,
}

impl<F: Field> CyclicClass<F> {
    /// Fails with a falsification error unless `D(representative) = 0`.
    pub fn new(algebra: &Algebra<F>, representative: TotalChain<F>) -> Result<Self> {
        let dx = total_differential(algebra, &representative);
        if !dx.is_zero() {
            return Err(Error::Falsification(format!(
                "total differential of a degree {} chain is nonzero",
                representative.top_degree
            )));
        }
        Ok(CyclicClass {
            degree: representative.top_degree,
            representative,
        })
    }
}

/// Is `x − y` a total boundary? Both must have the same degree.
pub fn same_class<F: Field>(algebra: &Algebra<F>, x: &TotalChain<F>, y: &TotalChain<F>) -> Result<bool> {
    if x.top_degree != y.top_degree {
        return Err(Error::Shape(format!(
            "classes of degrees {} and {}",
            x.top_degree, y.top_degree
        )));
    }
    let diff = x.sub(y);
    if diff.is_zero() {
        return Ok(true);
    }
    let m = x.top_degree;
    let dm = total_differential_map(algebra, m + 1)?;
    Ok(solve_affine(&dm, &diff.flatten(algebra.dim()), &[])?.is_some())
}

/// `(−1)^⌊i/2⌋ · i! / ⌊i/2⌋!` in exact integer arithmetic.
pub fn chern_coefficient<F: Field>(i: usize) -> F {
    let half = i / 2;
    let mut num = F::one();
    for k in (half + 1)..=i {
        num *= F::from_i64(k as i64);
    }
    num * sign::<F>(half)
}
