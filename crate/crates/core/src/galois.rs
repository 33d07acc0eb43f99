//! Canonical and translation maps, strong connections and cleaving maps.

use std::sync::Arc;

use crate::comod::{coinvariants, Coinvariants, ComoduleAlgebra};
use crate::error::{Error, Result};
use crate::hopf::{convolution_inverse, convolution_unit, convolve, HopfAlgebra};
use crate::linalg::tensor::{apply_to_legs, permute_legs, rotate_first_to_back};
use crate::linalg::{invert, quotient, solve_affine, BasedSpace, LinMap, Quotient, SparseVec};
use crate::report::CheckReport;
use crate::scalar::Field;

/// Unknown count above which the strong-connection solver refuses to run.
pub const MAX_CONNECTION_UNKNOWNS: usize = 4096;

#[derive(Clone, Debug)]
pub struct GaloisExtension<F> {
    pub algebra: ComoduleAlgebra<F>,
    pub base: Coinvariants<F>,
    /// `A⊗_B A` with `π_B` as projection.
    pub balanced: Quotient<F>,
    /// `A⊗_B A → A⊗H`.
    pub can: LinMap<F>,
    pub can_inverse: Option<LinMap<F>>,
}

/// `A⊗_B A` as the quotient of `A⊗A` by `ab⊗a′ − a⊗ba′`.
pub fn balanced_tensor<F: Field>(a: &ComoduleAlgebra<F>, b: &Coinvariants<F>) -> Result<Quotient<F>> {
    let n = a.dim();
    let alg = &a.algebra;
    let mut relations = Vec::new();
    for bv in b.subspace.basis() {
        for i in 0..n {
            let ab = alg.mul(&SparseVec::unit(n, i), bv);
            for k in 0..n {
                let ek = SparseVec::unit(n, k);
                let ba = alg.mul(bv, &ek);
                let r = ab.kron(&ek).sub(&SparseVec::unit(n, i).kron(&ba));
                if !r.is_zero() {
                    relations.push(r);
                }
            }
        }
    }
    quotient(&a.space().tensor(a.space()), &relations)
}

/// `a⊗ã ↦ aã₍₀₎⊗ã₍₁₎` on `A⊗A`.
pub fn canonical_lift<F: Field>(a: &ComoduleAlgebra<F>) -> Result<LinMap<F>> {
    let rho = a.right()?;
    let (n, h) = (a.dim(), rho.hopf.dim());
    LinMap::from_fn(
        a.space().tensor(a.space()),
        a.space().tensor(rho.hopf.space()),
        |k| {
            let (i, j) = (k / n, k % n);
            let mut out = SparseVec::zeros(n * h);
            for (idx, c) in rho.map.col(j).iter() {
                let p = a.algebra.mul_basis(i, idx / h);
                out.add_scaled(&p.kron(&SparseVec::unit(h, idx % h)), c);
            }
            out
        },
    )
}

/// Builds the extension record; bijectivity is decided by exact rank.
pub fn canonical_map<F: Field>(a: &ComoduleAlgebra<F>) -> Result<GaloisExtension<F>> {
    let hopf = a.hopf()?.clone();
    let base = coinvariants(a)?;
    let balanced = balanced_tensor(a, &base)?;
    let lift = canonical_lift(a)?;
    let kernel_part =
        LinMap::identity(lift.source()).sub(&balanced.section.compose(&balanced.projection)?)?;
    if !lift.compose(&kernel_part)?.is_zero() {
        return Err(Error::axiom(
            "can",
            "the canonical map does not factor through A⊗_B A",
        ));
    }
    let can = lift.compose(&balanced.section)?;
    let target = a.dim() * hopf.dim();
    if balanced.space.dim() != target {
        return Err(Error::NotGalois(format!(
            "dimension of A⊗_B A is {}, dimension of A⊗H is {target}",
            balanced.space.dim()
        )));
    }
    let can_inverse = invert(&can)?;
    Ok(GaloisExtension {
        algebra: a.clone(),
        base,
        balanced,
        can,
        can_inverse,
    })
}

impl<F: Field> GaloisExtension<F> {
    pub fn is_bijective(&self) -> bool {
        self.can_inverse.is_some()
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebra<F>> {
        &self
            .algebra
            .right
            .as_ref()
            .expect("extensions carry a right coaction")
            .hopf
    }

    pub fn space(&self) -> &BasedSpace {
        self.algebra.space()
    }

    fn require_bijective(&self) -> Result<&LinMap<F>> {
        self.can_inverse
            .as_ref()
            .ok_or_else(|| Error::NotGalois("canonical map is not bijective".into()))
    }

    /// `τ(h) = can⁻¹(1⊗h)`.
    pub fn translation_map(&self) -> Result<LinMap<F>> {
        let inv = self.require_bijective()?;
        let hopf = self.hopf();
        let one = self.algebra.unit();
        LinMap::from_fn(hopf.space().clone(), self.balanced.space.clone(), |i| {
            inv.apply(&one.kron(&hopf.basis(i)))
        })
    }

    fn ell_target(&self) -> BasedSpace {
        self.space().tensor(self.space())
    }

    fn check_ell_shape(&self, ell: &LinMap<F>) -> Result<()> {
        let n = self.algebra.dim();
        let h = self.hopf().dim();
        if ell.source().dim() != h || ell.target().dim() != n * n {
            return Err(Error::Shape(format!(
                "strong connection must map dimension {h} to {}",
                n * n
            )));
        }
        Ok(())
    }

    /// `(id⊗ρ)ℓ(h) − (ℓ⊗id)Δ(h)` in `A⊗A⊗H`.
    fn sw1_defect(&self, ell: &LinMap<F>, j: usize) -> SparseVec<F> {
        let n = self.algebra.dim();
        let hopf = self.hopf();
        let h = hopf.dim();
        let rho = &self.algebra.right.as_ref().expect("right coaction").map;
        let lhs = apply_to_legs(ell.col(j), &[n, n], 1, 1, rho);
        let rhs = apply_to_legs(hopf.comult().col(j), &[h, h], 0, 1, ell);
        lhs.sub(&rhs)
    }

    /// `h^⟨1⟩₍₀₎⊗h^⟨2⟩⊗h^⟨1⟩₍₁₎ − ℓ(h₍₂₎)⊗S(h₍₁₎)` in `A⊗A⊗H`.
    fn sw2_defect(&self, ell: &LinMap<F>, j: usize) -> SparseVec<F> {
        let n = self.algebra.dim();
        let hopf = self.hopf();
        let h = hopf.dim();
        let rho = &self.algebra.right.as_ref().expect("right coaction").map;
        let l = apply_to_legs(ell.col(j), &[n, n], 0, 1, rho);
        let lhs = permute_legs(&l, &[n, h, n], &[0, 2, 1]);
        let r = apply_to_legs(hopf.comult().col(j), &[h, h], 1, 1, ell);
        let r = apply_to_legs(&r, &[h, n, n], 0, 1, hopf.antipode());
        let rhs = rotate_first_to_back(&r, h);
        lhs.sub(&rhs)
    }

    /// `can(π_B(ℓ(h)))` in `A⊗H`.
    fn sw3_value(&self, ell: &LinMap<F>, j: usize) -> SparseVec<F> {
        self.can.apply(&self.balanced.projection.apply(ell.col(j)))
    }

    /// Checks the three Sweedler-form identities, the lift property and `h^⟨1⟩h^⟨2⟩ = ε(h)1`.
    pub fn verify_strong_connection(&self, ell: &LinMap<F>) -> Result<CheckReport> {
        self.check_ell_shape(ell)?;
        let hopf = self.hopf();
        let one = self.algebra.unit();
        let tau = self.translation_map().ok();
        let mut report = CheckReport::new();
        let label = |j: usize| hopf.space().label(j);
        for j in 0..hopf.dim() {
            if !self.sw1_defect(ell, j).is_zero() {
                report.fail("Sw1", format!("(id⊗ρ)ℓ ≠ (ℓ⊗id)Δ at {}", label(j)));
            }
            if !self.sw2_defect(ell, j).is_zero() {
                report.fail("Sw2", format!("(λ⊗id)ℓ ≠ (id⊗ℓ)Δ at {}", label(j)));
            }
            if self.sw3_value(ell, j) != one.kron(&hopf.basis(j)) {
                report.fail("Sw3", format!("can∘π_B∘ℓ ≠ 1⊗id at {}", label(j)));
            }
            if let Some(t) = &tau {
                if self.balanced.projection.apply(ell.col(j)) != *t.col(j) {
                    report.fail("lift", format!("π_B∘ℓ ≠ τ at {}", label(j)));
                }
            }
            let prod = self.algebra.algebra.mult().apply(ell.col(j));
            if prod != one.scaled(&hopf.counit().col(j).coeff(0)) {
                report.fail("μ∘ℓ = η∘ε", format!("h^⟨1⟩h^⟨2⟩ ≠ ε(h)1 at {}", label(j)));
            }
        }
        Ok(report)
    }

    /// Solves the axioms, together with `ℓ(1) = 1⊗1`, as one affine system for the matrix of `ℓ`.
    pub fn solve_strong_connection(&self) -> Result<StrongConnection<F>> {
        self.require_bijective()?;
        let n = self.algebra.dim();
        let hopf = self.hopf();
        let h = hopf.dim();
        let nn = n * n;
        let unknowns = h * nn;
        if unknowns > MAX_CONNECTION_UNKNOWNS {
            return Err(Error::Guardrail {
                what: "strong connection system".into(),
                requested: unknowns,
                limit: MAX_CONNECTION_UNKNOWNS,
            });
        }
        let b12 = nn * h;
        let b3 = n * h;
        let off2 = h * b12;
        let off3 = 2 * h * b12;
        let off4 = off3 + h * b3;
        let eqs = off4 + nn;
        let source = hopf.space().clone();
        let target = self.ell_target();
        let unit_h = hopf.unit();
        let mut triples = Vec::new();
        for i in 0..h {
            for r in 0..nn {
                let e = LinMap::from_triples(source.clone(), target.clone(), [(r, i, F::one())])?;
                let col = i * nn + r;
                for j in 0..h {
                    for (t, c) in self.sw1_defect(&e, j).iter() {
                        triples.push((j * b12 + t, col, c.clone()));
                    }
                    for (t, c) in self.sw2_defect(&e, j).iter() {
                        triples.push((off2 + j * b12 + t, col, c.clone()));
                    }
                    for (t, c) in self.sw3_value(&e, j).iter() {
                        triples.push((off3 + j * b3 + t, col, c.clone()));
                    }
                }
                let c = unit_h.coeff(i);
                if !c.is_zero() {
                    triples.push((off4 + r, col, c));
                }
            }
        }
        let system = LinMap::from_triples(
            BasedSpace::anonymous(unknowns),
            BasedSpace::anonymous(eqs),
            triples,
        )?;
        let one = self.algebra.unit();
        let mut rhs = SparseVec::zeros(eqs);
        for j in 0..h {
            for (t, c) in one.kron(&hopf.basis(j)).iter() {
                rhs.add_term(off3 + j * b3 + t, c.clone());
            }
        }
        for (t, c) in one.kron(one).iter() {
            rhs.add_term(off4 + t, c.clone());
        }
        let x = solve_affine(&system, &rhs, &[])?
            .ok_or_else(|| Error::NoSolution("no strong connection exists over this field".into()))?;
        let ell = LinMap::from_fn(source, target, |i| {
            SparseVec::from_entries(nn, (0..nn).map(|r| (r, x.coeff(i * nn + r))))
        })?;
        let report = self.verify_strong_connection(&ell)?;
        report.into_result()?;
        Ok(StrongConnection { ell })
    }

    /// Wraps `ell` after verification.
    pub fn strong_connection(&self, ell: LinMap<F>) -> Result<StrongConnection<F>> {
        self.verify_strong_connection(&ell)?.into_result()?;
        let ell = ell.relabel(self.hopf().space(), &self.ell_target())?;
        Ok(StrongConnection { ell })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongConnection<F> {
    /// `H → A⊗A`, `h ↦ h^⟨1⟩⊗h^⟨2⟩`.
    pub ell: LinMap<F>,
}

impl<F: Field> StrongConnection<F> {
    pub fn is_unital(&self, hopf: &HopfAlgebra<F>, one: &SparseVec<F>) -> bool {
        self.ell.apply(hopf.unit()) == one.kron(one)
    }
}

/// Unital, colinear, convolution-invertible `φ: H → A`.
#[derive(Clone, Debug)]
pub struct CleavingMap<F> {
    pub phi: LinMap<F>,
    pub phi_inv: LinMap<F>,
}

impl<F: Field> CleavingMap<F> {
    /// Computes `φ⁻¹` and checks colinearity and unitality.
    pub fn new(a: &ComoduleAlgebra<F>, phi: LinMap<F>) -> Result<Self> {
        let hopf = a.hopf()?;
        let phi = phi.relabel(hopf.space(), a.space())?;
        let phi_inv = convolution_inverse(&phi, hopf.coalgebra(), &a.algebra)?
            .ok_or_else(|| Error::NotInvertible("cleaving map has no convolution inverse".into()))?;
        let c = CleavingMap { phi, phi_inv };
        c.check(a)?.into_result()?;
        Ok(c)
    }

    pub fn check(&self, a: &ComoduleAlgebra<F>) -> Result<CheckReport> {
        let rho = a.right()?;
        let hopf = &rho.hopf;
        let h = hopf.dim();
        let mut report = CheckReport::new();
        for j in 0..h {
            let lhs = rho.map.apply(self.phi.col(j));
            let rhs = apply_to_legs(hopf.comult().col(j), &[h, h], 0, 1, &self.phi);
            if lhs != rhs {
                report.fail(
                    "colinearity",
                    format!("ρ∘φ ≠ (φ⊗id)∘Δ at {}", hopf.space().label(j)),
                );
            }
        }
        if self.phi.apply(hopf.unit()) != *a.unit() {
            report.fail("unitality", "φ(1) ≠ 1");
        }
        let e = convolution_unit(hopf.coalgebra(), &a.algebra);
        if convolve(&self.phi, &self.phi_inv, hopf.coalgebra(), &a.algebra)? != e
            || convolve(&self.phi_inv, &self.phi, hopf.coalgebra(), &a.algebra)? != e
        {
            report.fail("convolution inverse", "φ*φ⁻¹ ≠ η∘ε");
        }
        Ok(report)
    }
}

/// `ℓ(h) = φ⁻¹(h₍₁₎)⊗φ(h₍₂₎)`.
pub fn connection_from_cleaving<F: Field>(
    c: &CleavingMap<F>,
    hopf: &HopfAlgebra<F>,
) -> Result<StrongConnection<F>> {
    let h = hopf.dim();
    let a = c.phi.target();
    let ell = LinMap::from_fn(hopf.space().clone(), a.tensor(a), |j| {
        let mut out = SparseVec::zeros(a.dim() * a.dim());
        for (idx, x) in hopf.comult().col(j).iter() {
            out.add_scaled(&c.phi_inv.col(idx / h).kron(c.phi.col(idx % h)), x);
        }
        out
    })?;
    Ok(StrongConnection { ell })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comod::{translation_coaction, Coaction, Side};
    use crate::hopf::{build_function_algebra, build_group_algebra, build_sweedler_h4, FiniteGroup};
    use crate::scalar::Rational;

    type Q = Rational;

    fn c2_regular() -> ComoduleAlgebra<Q> {
        let h = Arc::new(build_group_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap());
        ComoduleAlgebra::regular(h)
    }

    /// `𝕂^{C4}` over `𝕂^{C2}` translating by `{e, g2}`.
    fn c4_over_c2() -> ComoduleAlgebra<Q> {
        let g = FiniteGroup::cyclic(4).unwrap();
        let sub = [0, 2];
        let h = Arc::new(build_function_algebra(&g.subgroup(&sub).unwrap()).unwrap());
        let a = build_function_algebra::<Q>(&g).unwrap();
        let rho = translation_coaction(&g, &sub, h).unwrap();
        ComoduleAlgebra::new_checked(a.algebra().clone(), Some(rho), None).unwrap()
    }

    /// `φ(δ_n) = Σ_c δ_{s(c)n}` with coset representatives `e, g`.
    fn c4_cleaving(a: &ComoduleAlgebra<Q>) -> CleavingMap<Q> {
        let g = FiniteGroup::cyclic(4).unwrap();
        let (reps, sub) = ([0, 1], [0, 2]);
        let hopf = a.hopf().unwrap();
        let phi = LinMap::from_fn(hopf.space().clone(), a.space().clone(), |k| {
            SparseVec::from_entries(4, reps.iter().map(|&s| (g.mul(s, sub[k]), Q::one())))
        })
        .unwrap();
        CleavingMap::new(a, phi).unwrap()
    }

    fn antipode_connection(h: &HopfAlgebra<Q>) -> LinMap<Q> {
        let n = h.dim();
        LinMap::from_fn(h.space().clone(), h.space().power(2), |j| {
            apply_to_legs(h.comult().col(j), &[n, n], 0, 1, h.antipode())
        })
        .unwrap()
    }

    #[test]
    fn trivial_base_keeps_full_tensor() {
        let a = c2_regular();
        let g = canonical_map(&a).unwrap();
        assert_eq!(g.base.dim(), 1);
        assert_eq!(g.balanced.space.dim(), 4);
        assert!(g.is_bijective());
        // can(g⊗g) = 1⊗g
        let gg = SparseVec::unit(4, 3);
        assert_eq!(g.can.apply(&gg), SparseVec::unit(4, 1));
    }

    #[test]
    fn translation_of_group_like() {
        let g = canonical_map(&c2_regular()).unwrap();
        let tau = g.translation_map().unwrap();
        assert_eq!(tau.col(1), &SparseVec::unit(4, 3));
        assert_eq!(tau.col(0), &SparseVec::unit(4, 0));
    }

    #[test]
    fn c4_over_c2_is_galois() {
        let a = c4_over_c2();
        let g = canonical_map(&a).unwrap();
        assert_eq!(g.base.dim(), 2);
        assert_eq!(g.balanced.space.dim(), 8);
        assert!(g.is_bijective());
        let tau = g.translation_map().unwrap();
        let one = a.unit();
        for j in 0..2 {
            let h = g.hopf().basis(j);
            assert_eq!(g.can.apply(tau.col(j)), one.kron(&h));
        }
    }

    #[test]
    fn trivial_coaction_is_not_galois() {
        let h = Arc::new(build_group_algebra::<Q>(&FiniteGroup::cyclic(2).unwrap()).unwrap());
        let k = build_function_algebra::<Q>(&FiniteGroup::cyclic(3).unwrap()).unwrap();
        let rho = Coaction::trivial(h, k.space(), Side::Right);
        let a = ComoduleAlgebra::new_checked(k.algebra().clone(), Some(rho), None).unwrap();
        let g = balanced_tensor(&a, &coinvariants(&a).unwrap()).unwrap();
        assert_eq!(g.space.dim(), 3);
        assert!(matches!(canonical_map(&a), Err(Error::NotGalois(_))));
    }

    #[test]
    fn antipode_connection_verifies_and_zero_fails() {
        let a = c2_regular();
        let g = canonical_map(&a).unwrap();
        let ell = antipode_connection(g.hopf());
        assert!(g.verify_strong_connection(&ell).unwrap().is_ok());
        let z = LinMap::zero(ell.source(), ell.target());
        let r = g.verify_strong_connection(&z).unwrap();
        assert!(r.mentions("Sw3"));
        assert!(!r.mentions("Sw1"));
    }

    #[test]
    fn solver_output_verifies() {
        let h = Arc::new(build_sweedler_h4::<Q>().unwrap());
        for a in [ComoduleAlgebra::regular(h), c2_regular(), c4_over_c2()] {
            let g = canonical_map(&a).unwrap();
            let c = g.solve_strong_connection().unwrap();
            assert!(g.verify_strong_connection(&c.ell).unwrap().is_ok());
            assert!(c.is_unital(g.hopf(), a.unit()));
        }
    }

    #[test]
    fn identity_cleaving_gives_antipode_connection() {
        let a = c2_regular();
        let hopf = a.hopf().unwrap().clone();
        let c = CleavingMap::new(&a, LinMap::identity(hopf.space())).unwrap();
        assert_eq!(&c.phi_inv, hopf.antipode());
        let ell = connection_from_cleaving(&c, &hopf).unwrap();
        assert!(ell.ell.same_matrix(&antipode_connection(&hopf)));
        assert!(ell.is_unital(&hopf, a.unit()));
    }

    #[test]
    fn coset_cleaving_connection_verifies() {
        let a = c4_over_c2();
        let g = canonical_map(&a).unwrap();
        let c = c4_cleaving(&a);
        let ell = connection_from_cleaving(&c, g.hopf()).unwrap();
        assert!(g.verify_strong_connection(&ell.ell).unwrap().is_ok());
        assert!(ell.is_unital(g.hopf(), a.unit()));
    }

    #[test]
    fn non_colinear_map_is_not_a_cleaving() {
        let a = c4_over_c2();
        let hopf = a.hopf().unwrap().clone();
        let one = a.unit().clone();
        let phi = LinMap::from_fn(hopf.space().clone(), a.space().clone(), |_| one.clone()).unwrap();
        assert!(CleavingMap::new(&a, phi).is_err());
    }
}
