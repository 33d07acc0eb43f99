//! Algebras, coalgebras and Hopf algebras given by structure constants.

mod builders;
mod convolution;

pub use builders::{
    build_function_algebra, build_group_algebra, build_sweedler_h4, FiniteGroup, MAX_GROUP_ORDER,
};
pub use convolution::{convolution_inverse, convolution_unit, convolve};

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::tensor::{apply_to_legs, permute_legs};
use crate::linalg::{invert, kernel, BasedSpace, LinMap, SparseVec};
use crate::scalar::Field;

/// Unital (or non-unital) associative algebra with multiplication `A⊗A → A`.
#[derive(Clone, Debug)]
pub struct Algebra<F> {
    space: BasedSpace,
    mult: LinMap<F>,
    unit: Option<SparseVec<F>>,
}

impl<F: Field> Algebra<F> {
    pub fn new(space: BasedSpace, mult: LinMap<F>, unit: Option<SparseVec<F>>) -> Result<Self> {
        let n = space.dim();
        if mult.source().dim() != n * n || mult.target().dim() != n {
            return Err(Error::Shape(format!(
                "multiplication must map dimension {} to {n}",
                n * n
            )));
        }
        if let Some(u) = &unit {
            if u.dim() != n {
                return Err(Error::dims("unit", n, u.dim()));
            }
        }
        let mult = mult.relabel(&space.tensor(&space), &space)?;
        Ok(Algebra { space, mult, unit })
    }

    /// Algebra from a product rule on basis elements.
    pub fn from_products(
        space: BasedSpace,
        unit: Option<SparseVec<F>>,
        mut product: impl FnMut(usize, usize) -> SparseVec<F>,
    ) -> Result<Self> {
        let n = space.dim();
        let mult = LinMap::from_fn(space.tensor(&space), space.clone(), |k| product(k / n, k % n))?;
        Self::new(space, mult, unit)
    }

    /// The ground field.
    pub fn scalar() -> Self {
        let s = BasedSpace::scalar();
        Algebra::from_products(s, Some(SparseVec::unit(1, 0)), |_, _| SparseVec::unit(1, 0))
            .expect("scalar algebra")
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mult(&self) -> &LinMap<F> {
        &self.mult
    }

    pub fn unit(&self) -> Option<&SparseVec<F>> {
        self.unit.as_ref()
    }

    pub fn unit_or_err(&self) -> Result<&SparseVec<F>> {
        self.unit
            .as_ref()
            .ok_or_else(|| Error::Shape("algebra has no unit".into()))
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec<F> {
        self.mult.col(i * self.dim() + j)
    }

    pub fn mul(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zeros(self.dim());
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(self.mul_basis(i, j), &(x.clone() * y.clone()));
            }
        }
        out
    }

    /// Componentwise product on `A⊗B`.
    pub fn tensor(&self, other: &Algebra<F>) -> Algebra<F> {
        let (na, nb) = (self.dim(), other.dim());
        let space = self.space.tensor(&other.space);
        let unit = match (&self.unit, &other.unit) {
            (Some(a), Some(b)) => Some(a.kron(b)),
            _ => None,
        };
        Algebra::from_products(space, unit, |x, y| {
            let (i, j) = (x / nb, x % nb);
            let (k, l) = (y / nb, y % nb);
            self.mul_basis(i, k).kron(other.mul_basis(j, l))
        })
        .map(|mut a| {
            debug_assert_eq!(a.dim(), na * nb);
            a.space = self.space.tensor(&other.space);
            a
        })
        .expect("tensor algebra")
    }

    pub fn check_associativity(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = self.mul(ij, &SparseVec::unit(n, k));
                    let right = self.mul(&SparseVec::unit(n, i), self.mul_basis(j, k));
                    if left != right {
                        return Some(format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            self.space.label(i),
                            self.space.label(j),
                            self.space.label(k),
                            self.space.label(i),
                            self.space.label(j),
                            self.space.label(k)
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn check_unit(&self) -> Option<String> {
        let Some(u) = &self.unit else {
            return Some("no unit".into());
        };
        let n = self.dim();
        for i in 0..n {
            let e = SparseVec::unit(n, i);
            if self.mul(u, &e) != e || self.mul(&e, u) != e {
                return Some(format!("1·{0} or {0}·1 ≠ {0}", self.space.label(i)));
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i)))
    }

    /// Is `f: self → other` a unital multiplicative map? Returns the broken equation.
    pub fn check_algebra_map(&self, other: &Algebra<F>, f: &LinMap<F>) -> Option<String> {
        let n = self.dim();
        if let (Some(u), Some(v)) = (&self.unit, &other.unit) {
            if f.apply(u) != *v {
                return Some("unitality f(1) = 1".into());
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = f.apply(self.mul_basis(i, j));
                let rhs = other.mul(f.col(i), f.col(j));
                if lhs != rhs {
                    return Some(format!(
                        "multiplicativity f({0}·{1}) = f({0})·f({1})",
                        self.space.label(i),
                        self.space.label(j)
                    ));
                }
            }
        }
        None
    }
}

/// Coassociative counital coalgebra.
#[derive(Clone, Debug)]
pub struct Coalgebra<F> {
    space: BasedSpace,
    comult: LinMap<F>,
    counit: LinMap<F>,
}

impl<F: Field> Coalgebra<F> {
    pub fn new(space: BasedSpace, comult: LinMap<F>, counit: LinMap<F>) -> Result<Self> {
        let n = space.dim();
        if comult.source().dim() != n || comult.target().dim() != n * n {
            return Err(Error::Shape("comultiplication must map H to H⊗H".into()));
        }
        if counit.source().dim() != n || counit.target().dim() != 1 {
            return Err(Error::Shape("counit must map H to the ground field".into()));
        }
        let comult = comult.relabel(&space, &space.tensor(&space))?;
        let counit = counit.relabel(&space, &BasedSpace::scalar())?;
        Ok(Coalgebra {
            space,
            comult,
            counit,
        })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn comult(&self) -> &LinMap<F> {
        &self.comult
    }

    pub fn counit(&self) -> &LinMap<F> {
        &self.counit
    }

    pub fn counit_of(&self, v: &SparseVec<F>) -> F {
        self.counit.apply(v).coeff(0)
    }

    /// `Δ^{(legs-1)}(v)` in `H^{⊗legs}`; `legs = 1` returns `v`.
    pub fn iterated(&self, v: &SparseVec<F>, legs: usize) -> SparseVec<F> {
        assert!(legs >= 1);
        let n = self.dim();
        let mut out = v.clone();
        for k in 1..legs {
            let dims = vec![n; k];
            out = apply_to_legs(&out, &dims, k - 1, 1, &self.comult);
        }
        out
    }

    /// Coalgebra on `C⊗D` with `Δ(c⊗d) = c₁⊗d₁⊗c₂⊗d₂`.
    pub fn tensor(&self, other: &Coalgebra<F>) -> Coalgebra<F> {
        let (nc, nd) = (self.dim(), other.dim());
        let space = self.space.tensor(&other.space);
        let comult = LinMap::from_fn(space.clone(), space.tensor(&space), |k| {
            let v = self.comult.col(k / nd).kron(other.comult.col(k % nd));
            permute_legs(&v, &[nc, nc, nd, nd], &[0, 2, 1, 3])
        })
        .expect("tensor comultiplication");
        let counit = self.counit.tensor(&other.counit);
        let counit = counit
            .relabel(&space, &BasedSpace::scalar())
            .expect("tensor counit");
        Coalgebra {
            space,
            comult,
            counit,
        }
    }

    pub fn check_coassociativity(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            let d = self.comult.col(i);
            let left = apply_to_legs(d, &[n, n], 0, 1, &self.comult);
            let right = apply_to_legs(d, &[n, n], 1, 1, &self.comult);
            if left != right {
                return Some(format!("(Δ⊗id)Δ({0}) ≠ (id⊗Δ)Δ({0})", self.space.label(i)));
            }
        }
        None
    }

    pub fn check_counit(&self) -> Option<String> {
        let n = self.dim();
        for i in 0..n {
            let d = self.comult.col(i);
            let e = SparseVec::unit(n, i);
            let left = apply_to_legs(d, &[n, n], 0, 1, &self.counit);
            let right = apply_to_legs(d, &[n, n], 1, 1, &self.counit);
            if left != e || right != e {
                return Some(format!("(ε⊗id)Δ or (id⊗ε)Δ fails on {}", self.space.label(i)));
            }
        }
        None
    }

    pub fn is_cocommutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            let d = self.comult.col(i);
            permute_legs(d, &[n, n], &[1, 0]) == *d
        })
    }
}

/// The axiom families checked by [`HopfAlgebra::check_axioms`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Associativity,
    Unitality,
    Coassociativity,
    Counitality,
    Compatibility,
    Antipode,
    AntipodeInverse,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::Unitality => "unitality",
            Axiom::Coassociativity => "coassociativity",
            Axiom::Counitality => "counitality",
            Axiom::Compatibility => "bialgebra compatibility",
            Axiom::Antipode => "antipode",
            Axiom::AntipodeInverse => "antipode inverse",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct HopfAlgebra<F> {
    algebra: Algebra<F>,
    coalgebra: Coalgebra<F>,
    antipode: LinMap<F>,
    antipode_inv: LinMap<F>,
}

impl<F: Field> HopfAlgebra<F> {
    /// Assembles the structure maps; only shapes are validated.
    pub fn new(
        space: BasedSpace,
        mult: LinMap<F>,
        unit: SparseVec<F>,
        comult: LinMap<F>,
        counit: LinMap<F>,
        antipode: LinMap<F>,
        antipode_inv: Option<LinMap<F>>,
    ) -> Result<Self> {
        let algebra = Algebra::new(space.clone(), mult, Some(unit))?;
        let coalgebra = Coalgebra::new(space.clone(), comult, counit)?;
        if antipode.source().dim() != space.dim() || antipode.target().dim() != space.dim() {
            return Err(Error::Shape("antipode must map H to H".into()));
        }
        let antipode = antipode.relabel(&space, &space)?;
        let antipode_inv = match antipode_inv {
            Some(s) => s.relabel(&space, &space)?,
            None => invert(&antipode)?.ok_or_else(|| Error::NotInvertible("antipode is singular".into()))?,
        };
        Ok(HopfAlgebra {
            algebra,
            coalgebra,
            antipode,
            antipode_inv,
        })
    }

    /// Like [`HopfAlgebra::new`] but fails on the first violated axiom.
    pub fn new_checked(
        space: BasedSpace,
        mult: LinMap<F>,
        unit: SparseVec<F>,
        comult: LinMap<F>,
        counit: LinMap<F>,
        antipode: LinMap<F>,
        antipode_inv: Option<LinMap<F>>,
    ) -> Result<Self> {
        let h = Self::new(space, mult, unit, comult, counit, antipode, antipode_inv)?;
        h.ensure_valid()?;
        Ok(h)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.check_axioms().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::axiom(v.axiom.name(), v.witness)),
        }
    }

    pub fn space(&self) -> &BasedSpace {
        self.algebra.space()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.algebra
    }

    pub fn coalgebra(&self) -> &Coalgebra<F> {
        &self.coalgebra
    }

    pub fn mult(&self) -> &LinMap<F> {
        self.algebra.mult()
    }

    pub fn unit(&self) -> &SparseVec<F> {
        self.algebra.unit().expect("Hopf algebras are unital")
    }

    pub fn comult(&self) -> &LinMap<F> {
        self.coalgebra.comult()
    }

    pub fn counit(&self) -> &LinMap<F> {
        self.coalgebra.counit()
    }

    pub fn antipode(&self) -> &LinMap<F> {
        &self.antipode
    }

    pub fn antipode_inv(&self) -> &LinMap<F> {
        &self.antipode_inv
    }

    pub fn mul(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        self.algebra.mul(a, b)
    }

    pub fn counit_of(&self, v: &SparseVec<F>) -> F {
        self.coalgebra.counit_of(v)
    }

    pub fn iterated_comult(&self, v: &SparseVec<F>, legs: usize) -> SparseVec<F> {
        self.coalgebra.iterated(v, legs)
    }

    pub fn basis(&self, i: usize) -> SparseVec<F> {
        SparseVec::unit(self.dim(), i)
    }

    /// The seven axiom families as exact map equalities; empty iff `self` is a Hopf algebra.
    pub fn check_axioms(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |axiom, w: Option<String>| {
            if let Some(witness) = w {
                out.push(Violation { axiom, witness });
            }
        };
        push(Axiom::Associativity, self.algebra.check_associativity());
        push(Axiom::Unitality, self.algebra.check_unit());
        push(Axiom::Coassociativity, self.coalgebra.check_coassociativity());
        push(Axiom::Counitality, self.coalgebra.check_counit());
        push(Axiom::Compatibility, self.check_compatibility());
        push(Axiom::Antipode, self.check_antipode());
        push(Axiom::AntipodeInverse, self.check_antipode_inverse());
        out
    }

    fn check_compatibility(&self) -> Option<String> {
        let n = self.dim();
        let hh = self.algebra.tensor(&self.algebra);
        let one = self.unit();
        if self.comult().apply(one) != one.kron(one) {
            return Some("Δ(1) ≠ 1⊗1".into());
        }
        if !self.counit_of(one).is_one() {
            return Some("ε(1) ≠ 1".into());
        }
        for i in 0..n {
            for j in 0..n {
                let p = self.algebra.mul_basis(i, j);
                let lhs = self.comult().apply(p);
                let rhs = hh.mul(self.comult().col(i), self.comult().col(j));
                if lhs != rhs {
                    return Some(format!(
                        "Δ({0}·{1}) ≠ Δ({0})Δ({1})",
                        self.space().label(i),
                        self.space().label(j)
                    ));
                }
                let e = self.counit_of(p);
                if e != self.counit_of(&self.basis(i)) * self.counit_of(&self.basis(j)) {
                    return Some(format!(
                        "ε({0}·{1}) ≠ ε({0})ε({1})",
                        self.space().label(i),
                        self.space().label(j)
                    ));
                }
            }
        }
        None
    }

    fn check_antipode(&self) -> Option<String> {
        let n = self.dim();
        let id = LinMap::identity(self.space());
        let unit = convolution_unit(&self.coalgebra, &self.algebra);
        let left = convolve(&self.antipode, &id, &self.coalgebra, &self.algebra).ok()?;
        let right = convolve(&id, &self.antipode, &self.coalgebra, &self.algebra).ok()?;
        for (name, m) in [("S(h₁)h₂", &left), ("h₁S(h₂)", &right)] {
            if let Some(j) = m.first_difference(&unit) {
                if j < n {
                    return Some(format!("{name} ≠ ε(h)1 at h = {}", self.space().label(j)));
                }
            }
        }
        None
    }

    fn check_antipode_inverse(&self) -> Option<String> {
        let id = LinMap::identity(self.space());
        let a = self.antipode.compose(&self.antipode_inv).ok()?;
        let b = self.antipode_inv.compose(&self.antipode).ok()?;
        if let Some(j) = a.first_difference(&id) {
            return Some(format!("S∘S⁻¹ ≠ id at {}", self.space().label(j)));
        }
        if let Some(j) = b.first_difference(&id) {
            return Some(format!("S⁻¹∘S ≠ id at {}", self.space().label(j)));
        }
        None
    }

    /// Same data with the antipode replaced; no validation.
    pub fn with_antipode(&self, antipode: LinMap<F>, antipode_inv: LinMap<F>) -> Self {
        HopfAlgebra {
            algebra: self.algebra.clone(),
            coalgebra: self.coalgebra.clone(),
            antipode,
            antipode_inv,
        }
    }

    /// Same coalgebra and antipodes with a new multiplication; no validation.
    pub fn with_algebra(&self, algebra: Algebra<F>) -> Self {
        HopfAlgebra {
            algebra,
            coalgebra: self.coalgebra.clone(),
            antipode: self.antipode.clone(),
            antipode_inv: self.antipode_inv.clone(),
        }
    }

    /// `Ad(h) = h₍₂₎ ⊗ S(h₍₁₎)h₍₃₎`, verified to be a right coaction.
    pub fn adjoint_coaction(&self) -> Result<LinMap<F>> {
        let n = self.dim();
        let s = self.space();
        let ad = LinMap::from_fn(s.clone(), s.tensor(s), |i| {
            let d3 = self.iterated_comult(&self.basis(i), 3);
            let mut out = SparseVec::zeros(n * n);
            for (idx, c) in d3.iter() {
                let (a, b, k) = (idx / (n * n), (idx / n) % n, idx % n);
                let right = self.algebra.mul(self.antipode.col(a), &self.basis(k));
                out.add_scaled(&self.basis(b).kron(&right), c);
            }
            out
        })?;
        if let Some(w) = check_right_coaction(self, &ad) {
            return Err(Error::axiom("adjoint coaction", w));
        }
        Ok(ad)
    }

    /// Basis of `{h : h₍₁₎⊗h₍₂₎ = h₍₂₎⊗h₍₁₎}`.
    pub fn cotrace_space(&self) -> Vec<SparseVec<F>> {
        let n = self.dim();
        let defect = LinMap::from_fn(self.space().clone(), self.space().power(2), |i| {
            let d = self.comult().col(i);
            d.sub(&permute_legs(d, &[n, n], &[1, 0]))
        })
        .expect("cotrace defect");
        kernel(&defect)
    }

    pub fn is_cotrace(&self, h: &SparseVec<F>) -> bool {
        let n = self.dim();
        let d = self.comult().apply(h);
        permute_legs(&d, &[n, n], &[1, 0]) == d
    }
}

/// Coassociativity and counitality of a right coaction `V → V⊗H`; returns a witness on failure.
pub fn check_right_coaction<F: Field>(h: &HopfAlgebra<F>, rho: &LinMap<F>) -> Option<String> {
    let n = h.dim();
    let v = rho.source().dim();
    if rho.target().dim() != v * n {
        return Some("coaction has the wrong target dimension".into());
    }
    for i in 0..v {
        let r = rho.col(i);
        let left = apply_to_legs(r, &[v, n], 0, 1, rho);
        let right = apply_to_legs(r, &[v, n], 1, 1, h.comult());
        if left != right {
            return Some(format!("(ρ⊗id)ρ ≠ (id⊗Δ)ρ at {}", rho.source().label(i)));
        }
        let c = apply_to_legs(r, &[v, n], 1, 1, h.counit());
        if c != SparseVec::unit(v, i) {
            return Some(format!("(id⊗ε)ρ ≠ id at {}", rho.source().label(i)));
        }
    }
    None
}

/// Coassociativity and counitality of a left coaction `V → K⊗V`.
pub fn check_left_coaction<F: Field>(k: &HopfAlgebra<F>, lambda: &LinMap<F>) -> Option<String> {
    let n = k.dim();
    let v = lambda.source().dim();
    if lambda.target().dim() != v * n {
        return Some("coaction has the wrong target dimension".into());
    }
    for i in 0..v {
        let l = lambda.col(i);
        let left = apply_to_legs(l, &[n, v], 0, 1, k.comult());
        let right = apply_to_legs(l, &[n, v], 1, 1, lambda);
        if left != right {
            return Some(format!("(Δ⊗id)λ ≠ (id⊗λ)λ at {}", lambda.source().label(i)));
        }
        let c = apply_to_legs(l, &[n, v], 0, 1, k.counit());
        if c != SparseVec::unit(v, i) {
            return Some(format!("(ε⊗id)λ ≠ id at {}", lambda.source().label(i)));
        }
    }
    None
}
