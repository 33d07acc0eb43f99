//! Comodules, comodule algebras, coinvariants and cotensor products.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::{check_left_coaction, check_right_coaction, Algebra, FiniteGroup, HopfAlgebra};
use crate::linalg::tensor::{apply_to_legs, permute_legs};
use crate::linalg::{BasedSpace, LinMap, SparseVec, Subspace};
use crate::report::CheckReport;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `V → V⊗H`
    Right,
    /// `V → H⊗V`
    Left,
}

#[derive(Clone, Debug)]
pub struct Coaction<F> {
    pub hopf: Arc<HopfAlgebra<F>>,
    pub map: LinMap<F>,
    pub side: Side,
}

impl<F: Field> Coaction<F> {
    pub fn new(hopf: Arc<HopfAlgebra<F>>, map: LinMap<F>, side: Side) -> Result<Self> {
        let v = map.source().clone();
        let target = match side {
            Side::Right => v.tensor(hopf.space()),
            Side::Left => hopf.space().tensor(&v),
        };
        if map.target().dim() != target.dim() {
            return Err(Error::dims("coaction target", target.dim(), map.target().dim()));
        }
        let map = map.relabel(&v, &target)?;
        Ok(Coaction { hopf, map, side })
    }

    pub fn right(hopf: Arc<HopfAlgebra<F>>, map: LinMap<F>) -> Result<Self> {
        Self::new(hopf, map, Side::Right)
    }

    pub fn left(hopf: Arc<HopfAlgebra<F>>, map: LinMap<F>) -> Result<Self> {
        Self::new(hopf, map, Side::Left)
    }

    /// `v ↦ v⊗1` or `v ↦ 1⊗v`.
    pub fn trivial(hopf: Arc<HopfAlgebra<F>>, space: &BasedSpace, side: Side) -> Self {
        let one = hopf.unit().clone();
        let n = space.dim();
        let target = match side {
            Side::Right => space.tensor(hopf.space()),
            Side::Left => hopf.space().tensor(space),
        };
        let map = LinMap::from_fn(space.clone(), target, |i| {
            let e = SparseVec::unit(n, i);
            match side {
                Side::Right => e.kron(&one),
                Side::Left => one.kron(&e),
            }
        })
        .expect("trivial coaction");
        Coaction { hopf, map, side }
    }

    pub fn space(&self) -> &BasedSpace {
        self.map.source()
    }

    pub fn dim(&self) -> usize {
        self.map.source().dim()
    }

    pub fn apply(&self, v: &SparseVec<F>) -> SparseVec<F> {
        self.map.apply(v)
    }

    pub fn check(&self) -> Option<String> {
        match self.side {
            Side::Right => check_right_coaction(&self.hopf, &self.map),
            Side::Left => check_left_coaction(&self.hopf, &self.map),
        }
    }

    /// `λ(v) = S⁻¹(v₍₁₎)⊗v₍₀₎` from a right coaction.
    pub fn induced_left(&self) -> Result<Coaction<F>> {
        if self.side != Side::Right {
            return Err(Error::Shape(
                "induced left coaction needs a right coaction".into(),
            ));
        }
        let (v, h) = (self.dim(), self.hopf.dim());
        let map = LinMap::from_fn(
            self.space().clone(),
            self.hopf.space().tensor(self.space()),
            |i| {
                let r = apply_to_legs(self.map.col(i), &[v, h], 1, 1, self.hopf.antipode_inv());
                permute_legs(&r, &[v, h], &[1, 0])
            },
        )?;
        Ok(Coaction {
            hopf: self.hopf.clone(),
            map,
            side: Side::Left,
        })
    }

    /// Diagonal coaction on `V⊗W`: `v₍₀₎⊗w₍₀₎⊗v₍₁₎w₍₁₎` (mirrored on the left).
    pub fn diagonal(&self, other: &Coaction<F>) -> Result<Coaction<F>> {
        if self.side != other.side || !Arc::ptr_eq(&self.hopf, &other.hopf) {
            return Err(Error::Shape(
                "diagonal coaction needs matching sides and Hopf algebra".into(),
            ));
        }
        let (v, w, h) = (self.dim(), other.dim(), self.hopf.dim());
        let space = self.space().tensor(other.space());
        let mult = self.hopf.mult();
        let map = LinMap::from_fn(space.clone(), BasedSpace::anonymous(v * w * h), |k| {
            let (i, j) = (k / w, k % w);
            let t = self.map.col(i).kron(other.map.col(j));
            match self.side {
                // v h w h -> v w h h -> v w h
                Side::Right => {
                    let p = permute_legs(&t, &[v, h, w, h], &[0, 2, 1, 3]);
                    apply_to_legs(&p, &[v, w, h, h], 2, 2, mult)
                }
                // h v h w -> h h v w -> h v w
                Side::Left => {
                    let p = permute_legs(&t, &[h, v, h, w], &[0, 2, 1, 3]);
                    apply_to_legs(&p, &[h, h, v, w], 0, 2, mult)
                }
            }
        })?;
        Coaction::new(self.hopf.clone(), map, self.side)
    }
}

/// `(λ⊗id)∘ρ = (id⊗ρ)∘λ` for a left coaction `λ` by `K` and a right coaction `ρ` by `H`.
pub fn check_bicomodule<F: Field>(left: &Coaction<F>, right: &Coaction<F>) -> CheckReport {
    let mut report = CheckReport::new();
    if left.side != Side::Left || right.side != Side::Right || left.dim() != right.dim() {
        report.fail(
            "bicomodule",
            "needs a left and a right coaction on the same space",
        );
        return report;
    }
    let (k, v, h) = (left.hopf.dim(), left.dim(), right.hopf.dim());
    for i in 0..v {
        let a = apply_to_legs(right.map.col(i), &[v, h], 0, 1, &left.map);
        let b = apply_to_legs(left.map.col(i), &[k, v], 1, 1, &right.map);
        if a != b {
            report.fail(
                "bicomodule",
                format!("(λ⊗id)ρ ≠ (id⊗ρ)λ at {}", left.space().label(i)),
            );
            break;
        }
    }
    report
}

/// Algebra with a right coaction and optionally a left one.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra<F> {
    pub algebra: Algebra<F>,
    pub right: Option<Coaction<F>>,
    pub left: Option<Coaction<F>>,
}

impl<F: Field> ComoduleAlgebra<F> {
    pub fn new(algebra: Algebra<F>, right: Option<Coaction<F>>, left: Option<Coaction<F>>) -> Result<Self> {
        for c in right.iter().chain(left.iter()) {
            if c.dim() != algebra.dim() {
                return Err(Error::dims("coaction source", algebra.dim(), c.dim()));
            }
        }
        if let Some(r) = &right {
            if r.side != Side::Right {
                return Err(Error::Shape("right coaction has the wrong side".into()));
            }
        }
        if let Some(l) = &left {
            if l.side != Side::Left {
                return Err(Error::Shape("left coaction has the wrong side".into()));
            }
        }
        algebra.unit_or_err()?;
        Ok(ComoduleAlgebra { algebra, right, left })
    }

    /// Validating constructor: fails with the first broken equation.
    pub fn new_checked(
        algebra: Algebra<F>,
        right: Option<Coaction<F>>,
        left: Option<Coaction<F>>,
    ) -> Result<Self> {
        let a = Self::new(algebra, right, left)?;
        a.check().into_result()?;
        Ok(a)
    }

    /// `A = H` with `ρ = Δ`.
    pub fn regular(hopf: Arc<HopfAlgebra<F>>) -> Self {
        let rho = Coaction::right(hopf.clone(), hopf.comult().clone()).expect("regular");
        ComoduleAlgebra {
            algebra: hopf.algebra().clone(),
            right: Some(rho),
            left: None,
        }
    }

    pub fn space(&self) -> &BasedSpace {
        self.algebra.space()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn unit(&self) -> &SparseVec<F> {
        self.algebra.unit().expect("comodule algebras are unital")
    }

    pub fn right(&self) -> Result<&Coaction<F>> {
        self.right
            .as_ref()
            .ok_or_else(|| Error::Shape("no right coaction".into()))
    }

    pub fn left(&self) -> Result<&Coaction<F>> {
        self.left
            .as_ref()
            .ok_or_else(|| Error::Shape("no left coaction".into()))
    }

    pub fn hopf(&self) -> Result<&Arc<HopfAlgebra<F>>> {
        Ok(&self.right()?.hopf)
    }

    pub fn with_algebra(&self, algebra: Algebra<F>) -> Self {
        ComoduleAlgebra {
            algebra,
            right: self.right.clone(),
            left: self.left.clone(),
        }
    }

    /// Coaction axioms, the algebra-map property of each coaction and, with two sides, commutation.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new();
        if let Some(w) = self.algebra.check_associativity() {
            report.fail("associativity", w);
        }
        if let Some(w) = self.algebra.check_unit() {
            report.fail("unitality", w);
        }
        for c in self.right.iter().chain(self.left.iter()) {
            let tag = match c.side {
                Side::Right => "right",
                Side::Left => "left",
            };
            if let Some(w) = c.check() {
                report.fail(format!("{tag} coaction"), w);
            }
            let target = match c.side {
                Side::Right => self.algebra.tensor(c.hopf.algebra()),
                Side::Left => c.hopf.algebra().tensor(&self.algebra),
            };
            if let Some(w) = self.algebra.check_algebra_map(&target, &c.map) {
                report.fail(format!("{tag} coaction is an algebra map"), w);
            }
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            report.merge(check_bicomodule(l, r));
        }
        report
    }
}

/// Subalgebra `B = {a : ρ(a) = a⊗1}` with its own basis and product.
#[derive(Clone, Debug)]
pub struct Coinvariants<F> {
    pub subspace: Subspace<F>,
    pub space: BasedSpace,
    pub inclusion: LinMap<F>,
    pub algebra: Algebra<F>,
}

impl<F: Field> Coinvariants<F> {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Coordinates of an element of `A` lying in `B`.
    pub fn coords(&self, a: &SparseVec<F>) -> Option<SparseVec<F>> {
        self.subspace.coords(a)
    }

    /// `A → B` reading pivot coordinates; correct only on elements of `B`.
    pub fn pivot_projection(&self) -> LinMap<F> {
        self.subspace
            .pivot_projection(&self.space)
            .expect("pivot projection")
    }
}

/// Subalgebra spanned by `vectors`, with product and unit read in echelon coordinates.
pub fn subalgebra<F: Field>(algebra: &Algebra<F>, vectors: &[SparseVec<F>]) -> Result<Coinvariants<F>> {
    let subspace = Subspace::spanned_by(algebra.space(), vectors)?;
    let space = BasedSpace::new(subspace.labels())?;
    let inclusion = subspace.inclusion(&space)?;
    let unit = algebra.unit_or_err()?;
    let unit_b = subspace
        .coords(unit)
        .ok_or_else(|| Error::axiom("subalgebra", "unit not contained"))?;
    let basis = subspace.basis().to_vec();
    let mut failure = None;
    let b_alg = Algebra::from_products(space.clone(), Some(unit_b), |i, j| {
        let p = algebra.mul(&basis[i], &basis[j]);
        match subspace.coords(&p) {
            Some(c) => c,
            None => {
                failure.get_or_insert((i, j));
                SparseVec::zeros(basis.len())
            }
        }
    })?;
    if let Some((i, j)) = failure {
        return Err(Error::axiom(
            "subalgebra",
            format!(
                "product of {} and {} leaves the subspace",
                space.label(i),
                space.label(j)
            ),
        ));
    }
    Ok(Coinvariants {
        subspace,
        space,
        inclusion,
        algebra: b_alg,
    })
}

/// Coinvariants of the right coaction.
pub fn coinvariants<F: Field>(a: &ComoduleAlgebra<F>) -> Result<Coinvariants<F>> {
    let rho = a.right()?;
    let one_h = rho.hopf.unit().clone();
    let n = a.dim();
    let defect = LinMap::from_fn(a.space().clone(), rho.map.target().clone(), |i| {
        rho.map.col(i).sub(&SparseVec::unit(n, i).kron(&one_h))
    })?;
    let k = crate::linalg::kernel(&defect);
    subalgebra(&a.algebra, &k)
}

/// `V □^H W = ker(ρ⊗id − id⊗λ) ⊆ V⊗W`.
pub fn cotensor<F: Field>(v: &Coaction<F>, w: &Coaction<F>) -> Result<Subspace<F>> {
    if v.side != Side::Right || w.side != Side::Left {
        return Err(Error::Shape("cotensor needs a right and a left comodule".into()));
    }
    if v.hopf.dim() != w.hopf.dim() {
        return Err(Error::Shape("cotensor over different Hopf algebras".into()));
    }
    let defect = cotensor_defect(v, w)?;
    Ok(Subspace::kernel_of(&defect))
}

/// The map `ρ⊗id − id⊗λ : V⊗W → V⊗H⊗W`.
pub fn cotensor_defect<F: Field>(v: &Coaction<F>, w: &Coaction<F>) -> Result<LinMap<F>> {
    let (nv, nw, h) = (v.dim(), w.dim(), v.hopf.dim());
    let target = v.space().tensor(v.hopf.space()).tensor(w.space());
    LinMap::from_fn(v.space().tensor(w.space()), target, |k| {
        let e = SparseVec::unit(nv * nw, k);
        let a = apply_to_legs(&e, &[nv, nw], 0, 1, &v.map);
        let b = apply_to_legs(&e, &[nv, nw], 1, 1, &w.map);
        debug_assert_eq!(a.dim(), nv * h * nw);
        a.sub(&b)
    })
}

/// Right coaction of `𝕂^N` on `𝕂^G` dual to right translation by a subgroup:
/// `δ_y ↦ Σ_{xn=y} δ_x⊗δ_n`. `sub[k]` is the element of `G` matching basis `k` of `hopf`.
pub fn translation_coaction<F: Field>(
    group: &FiniteGroup,
    sub: &[usize],
    hopf: Arc<HopfAlgebra<F>>,
) -> Result<Coaction<F>> {
    let n = group.order();
    let m = sub.len();
    if hopf.dim() != m {
        return Err(Error::dims("translation coaction", m, hopf.dim()));
    }
    let space = BasedSpace::new(group.names().iter().map(|x| format!("δ{x}")))?;
    let map = LinMap::from_fn(space.clone(), space.tensor(hopf.space()), |y| {
        let mut v = SparseVec::zeros(n * m);
        for (k, &s) in sub.iter().enumerate() {
            let x = group.mul(y, group.inverse(s));
            v.add_term(x * m + k, F::one());
        }
        v
    })?;
    let rho = Coaction::right(hopf, map)?;
    if let Some(w) = rho.check() {
        return Err(Error::axiom("translation coaction", w));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{build_function_algebra, build_group_algebra, build_sweedler_h4, FiniteGroup};
    use crate::scalar::Rational;

    type Q = Rational;

    fn c2() -> Arc<HopfAlgebra<Q>> {
        Arc::new(build_group_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap())
    }

    #[test]
    fn regular_comodule_passes_and_zero_fails() {
        let h = c2();
        let a = ComoduleAlgebra::regular(h.clone());
        assert!(a.check().is_ok());
        let z = LinMap::zero(h.space(), &h.space().tensor(h.space()));
        let bad = Coaction::right(h, z).unwrap();
        assert!(bad.check().unwrap().contains("(id⊗ε)ρ"));
    }

    #[test]
    fn coinvariants_of_regular_are_scalars() {
        let a = ComoduleAlgebra::regular(c2());
        let b = coinvariants(&a).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.inclusion.col(0), a.unit());
    }

    #[test]
    fn trivial_coaction_has_everything_coinvariant() {
        let h = c2();
        let k: HopfAlgebra<Q> = build_function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap();
        let rho = Coaction::trivial(h, k.space(), Side::Right);
        let a = ComoduleAlgebra::new_checked(k.algebra().clone(), Some(rho), None).unwrap();
        assert_eq!(coinvariants(&a).unwrap().dim(), 4);
    }

    #[test]
    fn cotensor_of_regular_comodules() {
        let h = c2();
        let rho = Coaction::right(h.clone(), h.comult().clone()).unwrap();
        let lambda = Coaction::left(h.clone(), h.comult().clone()).unwrap();
        let m = cotensor(&rho, &lambda).unwrap();
        assert_eq!(m.dim(), h.dim());
        for i in 0..h.dim() {
            assert!(m.contains(h.comult().col(i)));
        }
        let triv = Coaction::trivial(h.clone(), &BasedSpace::scalar(), Side::Left);
        let vk = cotensor(&rho, &triv).unwrap();
        assert_eq!(vk.dim(), 1);
    }

    #[test]
    fn induced_left_coaction_axioms() {
        let h = Arc::new(build_sweedler_h4::<Q>().unwrap());
        let rho = Coaction::right(h.clone(), h.comult().clone()).unwrap();
        let lambda = rho.induced_left().unwrap();
        assert!(lambda.check().is_none());
        let g = c2();
        let rho = Coaction::right(g.clone(), g.comult().clone()).unwrap();
        let l = rho.induced_left().unwrap();
        assert_eq!(*l.map.col(1), SparseVec::unit(2, 1).kron(&SparseVec::unit(2, 1)));
    }

    #[test]
    fn diagonal_coaction_is_a_coaction() {
        let h = Arc::new(build_sweedler_h4::<Q>().unwrap());
        let rho = Coaction::right(h.clone(), h.comult().clone()).unwrap();
        assert!(rho.diagonal(&rho).unwrap().check().is_none());
        let lam = Coaction::left(h.clone(), h.comult().clone()).unwrap();
        assert!(lam.diagonal(&lam).unwrap().check().is_none());
    }

    #[test]
    fn trivial_left_coaction_commutes() {
        let h = c2();
        let rho = Coaction::right(h.clone(), h.comult().clone()).unwrap();
        let triv = Coaction::trivial(h.clone(), h.space(), Side::Left);
        assert!(check_bicomodule(&triv, &rho).is_ok());
    }
}
