//! 2-cocycles and the deformations they induce on Hopf algebras, comodule
//! algebras, tensor products and strong connections.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::comod::{Coaction, ComoduleAlgebra, Side};
use crate::error::{Error, Result};
use crate::galois::{CleavingMap, StrongConnection};
use crate::hopf::{convolution_inverse, Algebra, Coalgebra, FiniteGroup, HopfAlgebra};
use crate::linalg::tensor::decode;
use crate::linalg::{BasedSpace, LinMap, SparseVec};
use crate::report::CheckReport;
use crate::scalar::Field;

/// Convolution-invertible normalized functional `γ: H⊗H → 𝕂`.
#[derive(Clone, Debug)]
pub struct TwoCocycle<F> {
    pub hopf: Arc<HopfAlgebra<F>>,
    pub gamma: LinMap<F>,
    pub gamma_inv: LinMap<F>,
}

/// `H⊗H` with componentwise product and `Δ(h⊗k) = h₁⊗k₁⊗h₂⊗k₂`.
pub fn tensor_bialgebra<F: Field>(h: &HopfAlgebra<F>) -> (Coalgebra<F>, Algebra<F>) {
    (
        h.coalgebra().tensor(h.coalgebra()),
        h.algebra().tensor(h.algebra()),
    )
}

fn functional_space<F: Field>(h: &HopfAlgebra<F>, gamma: &LinMap<F>) -> Result<LinMap<F>> {
    let n = h.dim();
    if gamma.source().dim() != n * n || gamma.target().dim() != 1 {
        return Err(Error::Shape(format!(
            "a cocycle is a functional on a space of dimension {}",
            n * n
        )));
    }
    gamma.relabel(&h.space().tensor(h.space()), &BasedSpace::scalar())
}

/// `Σ γ(h₁,k₁) h₂k₂` for basis elements `h, k`.
fn left_action<F: Field>(h: &HopfAlgebra<F>, gamma: &LinMap<F>, i: usize, j: usize) -> SparseVec<F> {
    let n = h.dim();
    let mut out = SparseVec::zeros(n);
    for (p, c) in h.comult().col(i).iter() {
        for (q, d) in h.comult().col(j).iter() {
            let g = gamma.entry(0, (p / n) * n + q / n);
            if g.is_zero() {
                continue;
            }
            out.add_scaled(h.algebra().mul_basis(p % n, q % n), &(c.clone() * d.clone() * g));
        }
    }
    out
}

/// Both cocycle conditions over all basis triples and convolution invertibility.
pub fn check_cocycle<F: Field>(h: &HopfAlgebra<F>, gamma: &LinMap<F>) -> Result<CheckReport> {
    let gamma = functional_space(h, gamma)?;
    let n = h.dim();
    let label = |i: usize| h.space().label(i);
    let mut report = CheckReport::new();
    let one = h.unit();
    for i in 0..n {
        let e = h.counit().col(i).coeff(0);
        let right = gamma.apply(&SparseVec::unit(n, i).kron(one)).coeff(0);
        let left = gamma.apply(&one.kron(&SparseVec::unit(n, i))).coeff(0);
        if right != e || left != e {
            report.fail(
                "cocycle_2",
                format!("γ({0},1) or γ(1,{0}) differs from ε({0})", label(i)),
            );
            break;
        }
    }
    let act: Vec<Vec<SparseVec<F>>> = (0..n)
        .map(|i| (0..n).map(|j| left_action(h, &gamma, i, j)).collect())
        .collect();
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = gamma.apply(&act[i][j].kron(&SparseVec::unit(n, k))).coeff(0);
                let rhs = gamma.apply(&SparseVec::unit(n, i).kron(&act[j][k])).coeff(0);
                if lhs != rhs {
                    report.fail(
                        "cocycle_1",
                        format!("fails at ({}, {}, {})", label(i), label(j), label(k)),
                    );
                    break 'outer;
                }
            }
        }
    }
    let (c, _) = tensor_bialgebra(h);
    if convolution_inverse(&gamma, &c, &Algebra::scalar())?.is_none() {
        report.fail("convolution invertibility", "γ has no convolution inverse on H⊗H");
    }
    Ok(report)
}

impl<F: Field> TwoCocycle<F> {
    /// Validates `gamma` and computes `γ⁻¹` on the tensor bialgebra.
    pub fn new(hopf: Arc<HopfAlgebra<F>>, gamma: LinMap<F>) -> Result<Self> {
        let gamma = functional_space(&hopf, &gamma)?;
        check_cocycle(&hopf, &gamma)?.into_result()?;
        let (c, _) = tensor_bialgebra(&hopf);
        let gamma_inv = convolution_inverse(&gamma, &c, &Algebra::scalar())?
            .ok_or_else(|| Error::NotInvertible("cocycle".into()))?;
        Ok(TwoCocycle {
            hopf,
            gamma,
            gamma_inv,
        })
    }

    /// From values `γ(h_i, h_j)` on basis pairs.
    pub fn from_values(hopf: Arc<HopfAlgebra<F>>, value: impl Fn(usize, usize) -> F) -> Result<Self> {
        let n = hopf.dim();
        let gamma = LinMap::from_fn(hopf.space().tensor(hopf.space()), BasedSpace::scalar(), |k| {
            SparseVec::from_entries(1, [(0, value(k / n, k % n))])
        })?;
        Self::new(hopf, gamma)
    }

    /// `ε⊗ε`.
    pub fn trivial(hopf: Arc<HopfAlgebra<F>>) -> Self {
        let eps = hopf.counit().tensor(hopf.counit());
        let eps = eps
            .relabel(&hopf.space().tensor(hopf.space()), &BasedSpace::scalar())
            .expect("ε⊗ε");
        TwoCocycle {
            hopf,
            gamma: eps.clone(),
            gamma_inv: eps,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> F {
        self.gamma.entry(0, i * self.hopf.dim() + j)
    }

    pub fn inv_value(&self, i: usize, j: usize) -> F {
        self.gamma_inv.entry(0, i * self.hopf.dim() + j)
    }

    pub fn is_trivial(&self) -> bool {
        let eps = self.hopf.counit().tensor(self.hopf.counit());
        self.gamma.same_matrix(&eps)
    }
}

/// Compiles a group 2-cocycle `c` on the character group of `G` into a
/// cocycle on the function algebra `𝕂^G`.
///
/// Characters are identified with elements through a basis of `G` chosen
/// greedily in element order, so `G` must have exponent 2 and the field odd
/// characteristic.
pub fn compile_function_cocycle<F: Field>(
    hopf: Arc<HopfAlgebra<F>>,
    group: &FiniteGroup,
    c: impl Fn(usize, usize) -> F,
) -> Result<TwoCocycle<F>> {
    let n = group.order();
    if hopf.dim() != n {
        return Err(Error::dims("function-algebra cocycle", n, hopf.dim()));
    }
    if F::characteristic() == 2 {
        return Err(Error::NotInvertible(
            "character basis needs characteristic ≠ 2".into(),
        ));
    }
    if (0..n).any(|x| group.mul(x, x) != group.identity()) {
        return Err(Error::InvalidGroup(
            "characters are only available for exponent-2 groups".into(),
        ));
    }
    // coordinates over a greedily chosen basis
    let mut bits: BTreeMap<usize, u32> = BTreeMap::from([(group.identity(), 0)]);
    let mut rank = 0;
    for x in 0..n {
        if bits.contains_key(&x) {
            continue;
        }
        let existing: Vec<(usize, u32)> = bits.iter().map(|(&k, &v)| (k, v)).collect();
        for (y, b) in existing {
            bits.insert(group.mul(x, y), b | (1 << rank));
        }
        rank += 1;
    }
    let sign = |x: usize, y: usize| {
        if (bits[&x] & bits[&y]).count_ones().is_multiple_of(2) {
            F::one()
        } else {
            -F::one()
        }
    };
    let norm = F::from_i64((n * n) as i64)
        .inv()
        .ok_or_else(|| Error::NotInvertible("group order vanishes in the field".into()))?;
    let mut table = vec![vec![F::zero(); n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        for (y, entry) in row.iter_mut().enumerate() {
            let mut s = F::zero();
            for chi in 0..n {
                for psi in 0..n {
                    s += sign(x, chi) * sign(y, psi) * c(chi, psi);
                }
            }
            *entry = s * norm.clone();
        }
    }
    TwoCocycle::from_values(hopf, |i, j| table[i][j].clone())
}

fn same_hopf<F: Field>(a: &Arc<HopfAlgebra<F>>, b: &Arc<HopfAlgebra<F>>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.mult().same_matrix(b.mult())
            && a.comult().same_matrix(b.comult())
            && a.antipode().same_matrix(b.antipode())
            && a.unit() == b.unit())
}

/// `h ↦ f(h₁)·m(h₂)·g(h₃)` for functionals `f, g` and a linear map `m`.
fn sandwich<F: Field>(h: &HopfAlgebra<F>, f: &LinMap<F>, m: &LinMap<F>, g: &LinMap<F>) -> Result<LinMap<F>> {
    let n = h.dim();
    LinMap::from_fn(h.space().clone(), m.target().clone(), |j| {
        let mut out = SparseVec::zeros(m.target().dim());
        for (idx, c) in h.iterated_comult(&h.basis(j), 3).iter() {
            let d = decode(idx, &[n, n, n]);
            let s = c.clone() * f.entry(0, d[0]) * g.entry(0, d[2]);
            if !s.is_zero() {
                out.add_scaled(m.col(d[1]), &s);
            }
        }
        out
    })
}

/// A Hopf algebra deformed by a 2-cocycle, with the auxiliary functionals `u_γ`, `v_γ`.
#[derive(Clone, Debug)]
pub struct DeformedHopf<F> {
    pub base: Arc<HopfAlgebra<F>>,
    pub cocycle: TwoCocycle<F>,
    pub result: Arc<HopfAlgebra<F>>,
    pub u: LinMap<F>,
    pub u_inv: LinMap<F>,
    pub v: LinMap<F>,
    pub v_inv: LinMap<F>,
}

/// `H_γ`: new product `γ(h₁,k₁)h₂k₂γ⁻¹(h₃,k₃)`, antipodes `u*S*u⁻¹` and `v*S⁻¹*v⁻¹`.
pub fn deform_hopf<F: Field>(cocycle: &TwoCocycle<F>) -> Result<DeformedHopf<F>> {
    let h = &cocycle.hopf;
    let n = h.dim();
    let s = h.space();
    let d3: Vec<SparseVec<F>> = (0..n).map(|i| h.iterated_comult(&h.basis(i), 3)).collect();
    let mult = LinMap::from_fn(s.tensor(s), s.clone(), |k| {
        let (i, j) = (k / n, k % n);
        let mut out = SparseVec::zeros(n);
        for (x, c) in d3[i].iter() {
            let a = decode(x, &[n, n, n]);
            for (y, d) in d3[j].iter() {
                let b = decode(y, &[n, n, n]);
                let w = cocycle.value(a[0], b[0]) * cocycle.inv_value(a[2], b[2]);
                if !w.is_zero() {
                    out.add_scaled(h.algebra().mul_basis(a[1], b[1]), &(c.clone() * d.clone() * w));
                }
            }
        }
        out
    })?;
    let functional = |g: &LinMap<F>, inner: &LinMap<F>, swap: bool| {
        LinMap::from_fn(s.clone(), BasedSpace::scalar(), |j| {
            let mut total = F::zero();
            for (idx, c) in h.comult().col(j).iter() {
                let (p, q) = (idx / n, idx % n);
                let arg = if swap {
                    SparseVec::unit(n, q).kron(inner.col(p))
                } else {
                    SparseVec::unit(n, p).kron(inner.col(q))
                };
                total += c.clone() * g.apply(&arg).coeff(0);
            }
            SparseVec::from_entries(1, [(0, total)])
        })
    };
    // u(h) = γ(h₁, S h₂), v(h) = γ(h₂, S⁻¹ h₁)
    let u = functional(&cocycle.gamma, h.antipode(), false)?;
    let v = functional(&cocycle.gamma, h.antipode_inv(), true)?;
    let k = Algebra::scalar();
    let u_inv =
        convolution_inverse(&u, h.coalgebra(), &k)?.ok_or_else(|| Error::NotInvertible("u_γ".into()))?;
    let v_inv =
        convolution_inverse(&v, h.coalgebra(), &k)?.ok_or_else(|| Error::NotInvertible("v_γ".into()))?;
    let antipode = sandwich(h, &u, h.antipode(), &u_inv)?;
    let antipode_inv = sandwich(h, &v, h.antipode_inv(), &v_inv)?;
    let result = HopfAlgebra::new(
        s.clone(),
        mult,
        h.unit().clone(),
        h.comult().clone(),
        h.counit().clone(),
        antipode,
        Some(antipode_inv),
    )?;
    result.ensure_valid()?;
    Ok(DeformedHopf {
        base: h.clone(),
        cocycle: cocycle.clone(),
        result: Arc::new(result),
        u,
        u_inv,
        v,
        v_inv,
    })
}

/// `a·_γã = a₍₀₎ã₍₀₎γ⁻¹(a₍₁₎,ã₍₁₎)`; the coaction is kept and now lands in `H_γ`.
pub fn deform_comodule_algebra_right<F: Field>(
    a: &ComoduleAlgebra<F>,
    d: &DeformedHopf<F>,
) -> Result<ComoduleAlgebra<F>> {
    let rho = a.right()?;
    if !same_hopf(&rho.hopf, &d.base) {
        return Err(Error::Shape("cocycle lives on a different Hopf algebra".into()));
    }
    let product = pair_right(rho, rho, &d.cocycle.gamma_inv)?;
    let mult = a.algebra.mult().compose(&product)?;
    let algebra = Algebra::new(a.space().clone(), mult, Some(a.unit().clone()))?;
    let right = Coaction::right(d.result.clone(), rho.map.clone())?;
    ComoduleAlgebra::new(algebra, Some(right), a.left.clone())
}

/// `a•_σã = σ(a₍₋₁₎,ã₍₋₁₎)a₍₀₎ã₍₀₎`; the left coaction now lands in `K_σ`.
pub fn deform_comodule_algebra_left<F: Field>(
    a: &ComoduleAlgebra<F>,
    d: &DeformedHopf<F>,
) -> Result<ComoduleAlgebra<F>> {
    let lambda = a.left()?;
    if !same_hopf(&lambda.hopf, &d.base) {
        return Err(Error::Shape("cocycle lives on a different Hopf algebra".into()));
    }
    let product = pair_left(lambda, lambda, &d.cocycle.gamma)?;
    let mult = a.algebra.mult().compose(&product)?;
    let algebra = Algebra::new(a.space().clone(), mult, Some(a.unit().clone()))?;
    let left = Coaction::left(d.result.clone(), lambda.map.clone())?;
    ComoduleAlgebra::new(algebra, a.right.clone(), Some(left))
}

/// `v⊗w ↦ v₍₀₎⊗w₍₀₎ f(v₍₁₎,w₍₁₎)`.
pub fn pair_right<F: Field>(v: &Coaction<F>, w: &Coaction<F>, f: &LinMap<F>) -> Result<LinMap<F>> {
    if v.side != Side::Right || w.side != Side::Right {
        return Err(Error::Shape("expected right coactions".into()));
    }
    let h = v.hopf.dim();
    let (nv, nw) = (v.dim(), w.dim());
    LinMap::from_fn(v.space().tensor(w.space()), v.space().tensor(w.space()), |k| {
        let mut out = SparseVec::zeros(nv * nw);
        for (x, c) in v.map.col(k / nw).iter() {
            for (y, d) in w.map.col(k % nw).iter() {
                let s = f.entry(0, (x % h) * h + y % h);
                if !s.is_zero() {
                    out.add_term((x / h) * nw + y / h, c.clone() * d.clone() * s);
                }
            }
        }
        out
    })
}

/// `v⊗w ↦ f(v₍₋₁₎,w₍₋₁₎) v₍₀₎⊗w₍₀₎`.
pub fn pair_left<F: Field>(v: &Coaction<F>, w: &Coaction<F>, f: &LinMap<F>) -> Result<LinMap<F>> {
    if v.side != Side::Left || w.side != Side::Left {
        return Err(Error::Shape("expected left coactions".into()));
    }
    let (nv, nw) = (v.dim(), w.dim());
    let k = v.hopf.dim();
    LinMap::from_fn(v.space().tensor(w.space()), v.space().tensor(w.space()), |idx| {
        let mut out = SparseVec::zeros(nv * nw);
        for (x, c) in v.map.col(idx / nw).iter() {
            for (y, d) in w.map.col(idx % nw).iter() {
                let s = f.entry(0, (x / nv) * k + y / nw);
                if !s.is_zero() {
                    out.add_term((x % nv) * nw + y % nw, c.clone() * d.clone() * s);
                }
            }
        }
        out
    })
}

/// A linear isomorphism with its claimed inverse.
#[derive(Clone, Debug)]
pub struct Iso<F> {
    pub forward: LinMap<F>,
    pub inverse: LinMap<F>,
}

impl<F: Field> Iso<F> {
    pub fn check_inverse(&self) -> Option<String> {
        let id = LinMap::identity(self.forward.source());
        let a = self.inverse.compose(&self.forward).ok()?;
        let b = self.forward.compose(&self.inverse).ok()?;
        if let Some(j) = a.first_difference(&id) {
            return Some(format!(
                "inverse∘forward ≠ id at {}",
                self.forward.source().label(j)
            ));
        }
        if let Some(j) = b.first_difference(&id) {
            return Some(format!(
                "forward∘inverse ≠ id at {}",
                self.forward.source().label(j)
            ));
        }
        None
    }
}

/// `α(v⊗w) = v₍₀₎⊗w₍₀₎γ⁻¹(v₍₁₎,w₍₁₎)` and its inverse.
pub fn alpha_iso<F: Field>(v: &Coaction<F>, w: &Coaction<F>, c: &TwoCocycle<F>) -> Result<Iso<F>> {
    Ok(Iso {
        forward: pair_right(v, w, &c.gamma_inv)?,
        inverse: pair_right(v, w, &c.gamma)?,
    })
}

/// `φ(v⊗w) = σ(v₍₋₁₎,w₍₋₁₎)v₍₀₎⊗w₍₀₎` and its inverse.
pub fn phi_iso<F: Field>(v: &Coaction<F>, w: &Coaction<F>, c: &TwoCocycle<F>) -> Result<Iso<F>> {
    Ok(Iso {
        forward: pair_left(v, w, &c.gamma)?,
        inverse: pair_left(v, w, &c.gamma_inv)?,
    })
}

/// `α` is inverse to `α⁻¹` and intertwines the `⊗^γ` coaction with the undeformed diagonal one.
pub fn check_alpha<F: Field>(v: &Coaction<F>, w: &Coaction<F>, d: &DeformedHopf<F>) -> Result<CheckReport> {
    let iso = alpha_iso(v, w, &d.cocycle)?;
    let mut report = CheckReport::new();
    report.check("α∘α⁻¹ = id", iso.check_inverse());
    let plain = v.diagonal(w)?;
    let vg = Coaction::right(d.result.clone(), v.map.clone())?;
    let wg = Coaction::right(d.result.clone(), w.map.clone())?;
    let twisted = vg.diagonal(&wg)?;
    let lhs = plain.map.compose(&iso.forward)?;
    let rhs = iso.forward.tensor(&LinMap::identity(d.base.space())).compose(
        &twisted
            .map
            .relabel(twisted.map.source(), &iso.forward.source().tensor(d.base.space()))?,
    )?;
    if !lhs.same_matrix(&rhs) {
        report.fail("α colinear", "ρ∘α ≠ (α⊗id)∘ρ^γ");
    }
    Ok(report)
}

/// Mirror of [`check_alpha`] for left comodules over `K_σ`.
pub fn check_phi<F: Field>(v: &Coaction<F>, w: &Coaction<F>, d: &DeformedHopf<F>) -> Result<CheckReport> {
    let iso = phi_iso(v, w, &d.cocycle)?;
    let mut report = CheckReport::new();
    report.check("φ∘φ⁻¹ = id", iso.check_inverse());
    let plain = v.diagonal(w)?;
    let vs = Coaction::left(d.result.clone(), v.map.clone())?;
    let ws = Coaction::left(d.result.clone(), w.map.clone())?;
    let twisted = vs.diagonal(&ws)?;
    let lhs = plain.map.compose(&iso.forward)?;
    let k = d.base.space();
    let rhs = LinMap::identity(k).tensor(&iso.forward).compose(
        &twisted
            .map
            .relabel(twisted.map.source(), &k.tensor(iso.forward.source()))?,
    )?;
    if !lhs.same_matrix(&rhs) {
        report.fail("φ colinear", "λ∘φ ≠ (id⊗φ)∘λ^σ");
    }
    Ok(report)
}

/// `𝔣(h) = h₃u(h₁)γ⁻¹(S h₂,h₄)` and `𝔣⁻¹(h) = h₃u⁻¹(h₂)γ(S h₁,h₄)`.
pub fn ff_map<F: Field>(d: &DeformedHopf<F>) -> Result<Iso<F>> {
    let h = &d.base;
    let n = h.dim();
    let s = h.space();
    let d4: Vec<SparseVec<F>> = (0..n).map(|i| h.iterated_comult(&h.basis(i), 4)).collect();
    let pairing = |g: &LinMap<F>, x: usize, y: usize| {
        g.apply(&h.antipode().col(x).kron(&SparseVec::unit(n, y)))
            .coeff(0)
    };
    let forward = LinMap::from_fn(s.clone(), s.clone(), |j| {
        let mut out = SparseVec::zeros(n);
        for (idx, c) in d4[j].iter() {
            let a = decode(idx, &[n, n, n, n]);
            let w = c.clone() * d.u.entry(0, a[0]) * pairing(&d.cocycle.gamma_inv, a[1], a[3]);
            out.add_term(a[2], w);
        }
        out
    })?;
    let inverse = LinMap::from_fn(s.clone(), s.clone(), |j| {
        let mut out = SparseVec::zeros(n);
        for (idx, c) in d4[j].iter() {
            let a = decode(idx, &[n, n, n, n]);
            let w = c.clone() * d.u_inv.entry(0, a[1]) * pairing(&d.cocycle.gamma, a[0], a[3]);
            out.add_term(a[2], w);
        }
        out
    })?;
    Ok(Iso { forward, inverse })
}

/// `𝔣` is invertible and carries the adjoint coaction of `H_γ` to that of `H`.
pub fn check_ff<F: Field>(d: &DeformedHopf<F>) -> Result<CheckReport> {
    let iso = ff_map(d)?;
    let mut report = CheckReport::new();
    report.check("𝔣∘𝔣⁻¹ = id", iso.check_inverse());
    let ad = d.base.adjoint_coaction()?;
    let ad_g = d.result.adjoint_coaction()?;
    let lhs = ad.compose(&iso.forward)?;
    let rhs = iso
        .forward
        .tensor(&LinMap::identity(d.base.space()))
        .compose(&ad_g)?;
    if !lhs.same_matrix(&rhs) {
        report.fail("𝔣 colinear", "Ad∘𝔣 ≠ (𝔣⊗id)∘Ad_γ");
    }
    Ok(report)
}

/// `Σ f(h₁)·m(h₂)` for a functional `f`.
fn left_scale<F: Field>(h: &HopfAlgebra<F>, f: &LinMap<F>, m: &LinMap<F>) -> Result<LinMap<F>> {
    let n = h.dim();
    LinMap::from_fn(m.source().clone(), m.target().clone(), |j| {
        let mut out = SparseVec::zeros(m.target().dim());
        for (idx, c) in h.comult().col(j).iter() {
            let s = c.clone() * f.entry(0, idx / n);
            if !s.is_zero() {
                out.add_scaled(m.col(idx % n), &s);
            }
        }
        out
    })
}

/// `ℓ_γ(h) = h₍₂₎^⟨1⟩⊗h₍₂₎^⟨2⟩ u_γ(h₍₁₎)`.
pub fn deform_connection_right<F: Field>(
    ell: &StrongConnection<F>,
    d: &DeformedHopf<F>,
) -> Result<StrongConnection<F>> {
    Ok(StrongConnection {
        ell: left_scale(&d.base, &d.u, &ell.ell)?,
    })
}

/// `α⁻¹∘ℓ∘𝔣`, the same connection assembled from the comparison isomorphisms.
pub fn deform_connection_right_via_iso<F: Field>(
    ell: &StrongConnection<F>,
    a: &ComoduleAlgebra<F>,
    d: &DeformedHopf<F>,
) -> Result<StrongConnection<F>> {
    let rho = a.right()?;
    let alpha = alpha_iso(rho, rho, &d.cocycle)?;
    let ff = ff_map(d)?;
    let ell = alpha.inverse.compose(&ell.ell)?.compose(&ff.forward)?;
    Ok(StrongConnection { ell })
}

/// Same `φ`, deformed inverse `φ_γ⁻¹(h) = φ⁻¹(h₍₂₎)u_γ(h₍₁₎)`.
pub fn deform_cleaving<F: Field>(c: &CleavingMap<F>, d: &DeformedHopf<F>) -> Result<CleavingMap<F>> {
    Ok(CleavingMap {
        phi: c.phi.clone(),
        phi_inv: left_scale(&d.base, &d.u, &c.phi_inv)?,
    })
}

/// `σℓ(h) = σ⁻¹(h^⟨1⟩₍₋₁₎,h^⟨2⟩₍₋₁₎)h^⟨1⟩₍₀₎⊗h^⟨2⟩₍₀₎`, i.e. `φ⁻¹_{A,A}∘ℓ`.
pub fn deform_connection_left<F: Field>(
    ell: &StrongConnection<F>,
    a: &ComoduleAlgebra<F>,
    sigma: &TwoCocycle<F>,
) -> Result<StrongConnection<F>> {
    let lambda = a.left()?;
    if !same_hopf(&lambda.hopf, &sigma.hopf) {
        return Err(Error::Shape("cocycle lives on a different Hopf algebra".into()));
    }
    let phi = phi_iso(lambda, lambda, sigma)?;
    Ok(StrongConnection {
        ell: phi.inverse.compose(&ell.ell)?,
    })
}

/// `σℓ_γ(h) = σ⁻¹(h₍₂₎^⟨1⟩₍₋₁₎,h₍₂₎^⟨2⟩₍₋₁₎)h₍₂₎^⟨1⟩₍₀₎⊗h₍₂₎^⟨2⟩₍₀₎u_γ(h₍₁₎)`, evaluated directly.
pub fn deform_connection_both<F: Field>(
    ell: &StrongConnection<F>,
    a: &ComoduleAlgebra<F>,
    d: &DeformedHopf<F>,
    sigma: &TwoCocycle<F>,
) -> Result<StrongConnection<F>> {
    let lambda = a.left()?;
    if !same_hopf(&lambda.hopf, &sigma.hopf) || !same_hopf(&a.right()?.hopf, &d.base) {
        return Err(Error::Shape("cocycles live on different Hopf algebras".into()));
    }
    let h = &d.base;
    let hn = h.dim();
    let n = a.dim();
    let kn = sigma.hopf.dim();
    let out = LinMap::from_fn(ell.ell.source().clone(), ell.ell.target().clone(), |j| {
        let mut out = SparseVec::zeros(n * n);
        for (idx, c) in h.comult().col(j).iter() {
            let u = d.u.entry(0, idx / hn);
            if u.is_zero() {
                continue;
            }
            for (r, e) in ell.ell.col(idx % hn).iter() {
                for (x, f) in lambda.map.col(r / n).iter() {
                    for (y, g) in lambda.map.col(r % n).iter() {
                        let s = sigma.inv_value(x / n, y / n);
                        if s.is_zero() {
                            continue;
                        }
                        debug_assert!(x / n < kn && y / n < kn);
                        let w = c.clone() * u.clone() * e.clone() * f.clone() * g.clone() * s;
                        out.add_term((x % n) * n + y % n, w);
                    }
                }
            }
        }
        out
    })?;
    Ok(StrongConnection { ell: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comod::translation_coaction;
    use crate::galois::{canonical_map, connection_from_cleaving};
    use crate::hopf::{build_function_algebra, build_group_algebra, build_sweedler_h4};
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn klein() -> Arc<HopfAlgebra<Q>> {
        Arc::new(build_group_algebra(&FiniteGroup::klein()).unwrap())
    }

    /// `(−1)^{x₂y₁}` with `a = (1,0)`, `b = (0,1)`.
    fn bicharacter(i: usize, j: usize) -> Q {
        if (i >> 1) & j & 1 == 1 {
            q(-1)
        } else {
            q(1)
        }
    }

    fn sweedler_cocycle(h: Arc<HopfAlgebra<Q>>) -> Result<TwoCocycle<Q>> {
        // basis 1, g, x, gx
        let table = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, -1]];
        TwoCocycle::from_values(h, |i, j| q(table[i][j]))
    }

    #[test]
    fn trivial_cocycle_passes_and_deforms_nothing() {
        let h = klein();
        let t = TwoCocycle::trivial(h.clone());
        assert!(check_cocycle(&h, &t.gamma).unwrap().is_ok());
        let d = deform_hopf(&t).unwrap();
        assert!(d.result.mult().same_matrix(h.mult()));
        assert!(d.result.antipode().same_matrix(h.antipode()));
        assert!(d.result.antipode_inv().same_matrix(h.antipode_inv()));
    }

    #[test]
    fn bicharacter_is_a_cocycle_and_abelian_algebra_is_unchanged() {
        let h = klein();
        let c = TwoCocycle::from_values(h.clone(), bicharacter).unwrap();
        let d = deform_hopf(&c).unwrap();
        assert!(d.result.mult().same_matrix(h.mult()));
        // u(g) = γ(g, g⁻¹)
        for g in 0..4 {
            assert_eq!(d.u.entry(0, g), bicharacter(g, g));
        }
    }

    #[test]
    fn non_normalized_functional_fails_cocycle_2() {
        let h = klein();
        let gamma = LinMap::from_fn(h.space().power(2), BasedSpace::scalar(), |_| {
            SparseVec::unit(1, 0).scaled(&q(2))
        })
        .unwrap();
        let r = check_cocycle(&h, &gamma).unwrap();
        assert!(r.mentions("cocycle_2"));
        assert!(TwoCocycle::new(h, gamma).is_err());
    }

    #[test]
    fn sweedler_deformation_is_hopf() {
        let h = Arc::new(build_sweedler_h4::<Q>().unwrap());
        let c = sweedler_cocycle(h.clone()).unwrap();
        let d = deform_hopf(&c).unwrap();
        assert!(d.result.check_axioms().is_empty());
        // the family is lazy, so H_γ keeps its product while A_γ does not
        assert!(d.result.mult().same_matrix(h.mult()));
        let a = ComoduleAlgebra::regular(h.clone());
        let ag = deform_comodule_algebra_right(&a, &d).unwrap();
        assert!(ag.check().is_ok());
        assert!(!ag.algebra.mult().same_matrix(h.mult()));
        assert!(check_ff(&d).unwrap().is_ok());
    }

    #[test]
    fn f2_deformed_product_anticommutes() {
        let h = klein();
        let c = TwoCocycle::from_values(h.clone(), bicharacter).unwrap();
        let d = deform_hopf(&c).unwrap();
        let a = ComoduleAlgebra::regular(h.clone());
        let ag = deform_comodule_algebra_right(&a, &d).unwrap();
        assert!(ag.check().is_ok());
        let (ea, eb) = (SparseVec::unit(4, 1), SparseVec::unit(4, 2));
        assert_eq!(ag.algebra.mul(&ea, &eb), SparseVec::unit(4, 3));
        assert_eq!(ag.algebra.mul(&eb, &ea), SparseVec::unit(4, 3).scaled(&q(-1)));
        let r = check_alpha(a.right().unwrap(), a.right().unwrap(), &d).unwrap();
        assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn function_cocycle_on_c2() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let k = Arc::new(build_function_algebra::<Q>(&g).unwrap());
        let sigma =
            compile_function_cocycle(k, &g, |x, y| if x == 1 && y == 1 { q(-1) } else { q(1) }).unwrap();
        let half = Q::from_i64(1).div(&q(2)).unwrap();
        assert_eq!(sigma.value(0, 0), half);
        assert_eq!(sigma.value(0, 1), half);
        assert_eq!(sigma.value(1, 1), -half);
    }

    #[test]
    fn deformed_connection_on_c4_matches_cleft_formula() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let sub = [0, 2];
        let c2 = g.subgroup(&sub).unwrap();
        let h = Arc::new(build_function_algebra::<Q>(&c2).unwrap());
        let a = build_function_algebra::<Q>(&g).unwrap();
        let rho = translation_coaction(&g, &sub, h.clone()).unwrap();
        let a = ComoduleAlgebra::new_checked(a.algebra().clone(), Some(rho), None).unwrap();
        let sigma =
            compile_function_cocycle(h.clone(), &c2, |x, y| if x == 1 && y == 1 { q(-1) } else { q(1) })
                .unwrap();
        let d = deform_hopf(&sigma).unwrap();
        let phi = LinMap::from_fn(h.space().clone(), a.space().clone(), |k| {
            SparseVec::from_entries(4, [0, 1].iter().map(|&s| (g.mul(s, sub[k]), q(1))))
        })
        .unwrap();
        let cleave = CleavingMap::new(&a, phi).unwrap();
        let ell = connection_from_cleaving(&cleave, &h).unwrap();
        let ag = deform_comodule_algebra_right(&a, &d).unwrap();
        let gg = canonical_map(&ag).unwrap();
        let lg = deform_connection_right(&ell, &d).unwrap();
        assert!(gg.verify_strong_connection(&lg.ell).unwrap().is_ok());
        let via = deform_connection_right_via_iso(&ell, &a, &d).unwrap();
        assert_eq!(via.ell, lg.ell);
        let cg = deform_cleaving(&cleave, &d).unwrap();
        assert!(cg.check(&ag).unwrap().is_ok());
        let direct = connection_from_cleaving(&cg, &d.result).unwrap();
        assert!(direct.ell.same_matrix(&lg.ell));
    }
}
