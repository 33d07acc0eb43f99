//! The five desk-scale extensions used by the test suites and the CLI.
//!
//! | name | H | A | extras |
//! |------|---|---|--------|
//! | f1 | `Q[C2]` | regular | cleaving `id` |
//! | f2 | `Q[C2×C2]` | regular | bicharacter `gamma` |
//! | f3 | Sweedler `H4` | regular | cocycle `gamma` |
//! | f4 | `𝕂^{C2}` | `𝕂^{C4}` | cleaving, restriction to the subgroup `{e, g2}` |
//! | f5 | `𝕂^{C2}` | `𝕂^{C2}⊗𝕂^{C2}` | left `K = 𝕂^{C2}`, `sigma`, `gamma`, pullback to `𝕂^{C2^3}` |

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::comod::{translation_coaction, Coaction, ComoduleAlgebra};
use crate::error::{Error, Result};
use crate::galois::CleavingMap;
use crate::hopf::{
    build_function_algebra, build_group_algebra, build_sweedler_h4, convolve, Algebra, FiniteGroup,
    HopfAlgebra,
};
use crate::linalg::tensor::{decode, encode};
use crate::linalg::{BasedSpace, LinMap, SparseVec};
use crate::scalar::Field;
use crate::twist::{compile_function_cocycle, TwoCocycle};

pub const FIXTURE_NAMES: [&str; 5] = ["f1", "f2", "f3", "f4", "f5"];

/// A cocycle together with the name of the Hopf algebra it lives on.
#[derive(Clone, Debug)]
pub struct NamedCocycle<F> {
    pub hopf: String,
    pub cocycle: TwoCocycle<F>,
}

/// Unital comodule-algebra map `A → Ā`.
#[derive(Clone, Debug)]
pub struct Morphism<F> {
    pub target: ComoduleAlgebra<F>,
    pub map: LinMap<F>,
}

#[derive(Clone, Debug)]
pub struct Fixture<F> {
    pub name: String,
    pub hopf_algebras: BTreeMap<String, Arc<HopfAlgebra<F>>>,
    /// Name of the structure Hopf algebra `H`.
    pub right_hopf: String,
    /// Name of the external symmetry `K`, if any.
    pub left_hopf: Option<String>,
    pub algebra: ComoduleAlgebra<F>,
    pub cocycles: BTreeMap<String, NamedCocycle<F>>,
    pub cleaving: Option<CleavingMap<F>>,
    pub morphism: Option<Morphism<F>>,
    pub checks: Vec<String>,
}

impl<F: Field> Fixture<F> {
    pub fn hopf(&self) -> &Arc<HopfAlgebra<F>> {
        &self.hopf_algebras[&self.right_hopf]
    }

    pub fn external(&self) -> Option<&Arc<HopfAlgebra<F>>> {
        self.left_hopf.as_ref().map(|k| &self.hopf_algebras[k])
    }

    pub fn cocycle(&self, name: &str) -> Result<&TwoCocycle<F>> {
        self.cocycles
            .get(name)
            .map(|c| &c.cocycle)
            .ok_or_else(|| Error::Parse(format!("fixture {} has no cocycle {name:?}", self.name)))
    }

    /// The cocycle on `H`, if the fixture has one.
    pub fn right_cocycle(&self) -> Option<&TwoCocycle<F>> {
        self.cocycles
            .values()
            .find(|c| c.hopf == self.right_hopf)
            .map(|c| &c.cocycle)
    }

    /// The cocycle on `K`, if the fixture has one.
    pub fn left_cocycle(&self) -> Option<&TwoCocycle<F>> {
        let k = self.left_hopf.as_ref()?;
        self.cocycles.values().find(|c| &c.hopf == k).map(|c| &c.cocycle)
    }
}

pub fn fixture<F: Field>(name: &str) -> Result<Fixture<F>> {
    match name {
        "f1" => f1(),
        "f2" => f2(),
        "f3" => f3(),
        "f4" => f4(),
        "f5" => f5(),
        _ => Err(Error::Parse(format!("unknown fixture {name:?}"))),
    }
}

fn regular_fixture<F: Field>(name: &str, hname: &str, h: HopfAlgebra<F>) -> Result<Fixture<F>> {
    let h = Arc::new(h);
    let algebra = ComoduleAlgebra::regular(h.clone());
    algebra.check().into_result()?;
    let cleaving = CleavingMap::new(&algebra, LinMap::identity(h.space()))?;
    Ok(Fixture {
        name: name.into(),
        hopf_algebras: BTreeMap::from([(hname.to_string(), h)]),
        right_hopf: hname.into(),
        left_hopf: None,
        algebra,
        cocycles: BTreeMap::new(),
        cleaving: Some(cleaving),
        morphism: None,
        checks: Vec::new(),
    })
}

/// `Q[C2]` as a comodule algebra over itself.
pub fn f1<F: Field>() -> Result<Fixture<F>> {
    let mut f = regular_fixture("f1", "H", build_group_algebra(&FiniteGroup::cyclic(2)?)?)?;
    f.checks = vec!["hopf-axioms".into(), "galois".into(), "chern-weil".into()];
    Ok(f)
}

/// `γ(x, y) = (−1)^{x₂y₁}`, so `γ(b, a) = −1` and `γ(a, b) = 1`.
pub fn klein_bicharacter<F: Field>(i: usize, j: usize) -> F {
    if (i >> 1) & j & 1 == 1 {
        -F::one()
    } else {
        F::one()
    }
}

/// `Q[C2×C2]` over itself with the bicharacter cocycle.
pub fn f2<F: Field>() -> Result<Fixture<F>> {
    let mut f = regular_fixture("f2", "H", build_group_algebra(&FiniteGroup::klein())?)?;
    let c = TwoCocycle::from_values(f.hopf().clone(), klein_bicharacter)?;
    f.cocycles.insert(
        "gamma".into(),
        NamedCocycle {
            hopf: "H".into(),
            cocycle: c,
        },
    );
    f.checks = vec![
        "prop-deformation-hopf".into(),
        "thm-deformed-strong-conn-right".into(),
        "prop-chw-deform-right".into(),
    ];
    Ok(f)
}

/// Sweedler's `H4` over itself with the lazy cocycle of parameter 1.
pub fn f3<F: Field>() -> Result<Fixture<F>> {
    let mut f = regular_fixture("f3", "H", build_sweedler_h4()?)?;
    // basis 1, g, x, gx
    let table = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, -1]];
    let c = TwoCocycle::from_values(f.hopf().clone(), |i, j| F::from_i64(table[i][j]))?;
    f.cocycles.insert(
        "gamma".into(),
        NamedCocycle {
            hopf: "H".into(),
            cocycle: c,
        },
    );
    f.checks = vec![
        "prop-deformation-hopf".into(),
        "thm-deformed-strong-conn-right".into(),
    ];
    Ok(f)
}

/// Index of `g2` in `C4` and the subgroup `{e, g2}`.
const F4_SUB: [usize; 2] = [0, 2];

/// `𝕂^{C4}` over `𝕂^{C2}`, the functions on the subgroup `{e, g2}`.
pub fn f4<F: Field>() -> Result<Fixture<F>> {
    let c4 = FiniteGroup::cyclic(4)?;
    let sub = c4.subgroup(&F4_SUB)?;
    let h = Arc::new(build_function_algebra::<F>(&sub)?);
    let a_hopf = build_function_algebra::<F>(&c4)?;
    let rho = translation_coaction(&c4, &F4_SUB, h.clone())?;
    let algebra = ComoduleAlgebra::new_checked(a_hopf.algebra().clone(), Some(rho), None)?;
    // φ(δ_n) = Σ over coset representatives {e, g} of δ_{s·n}
    let reps = [0usize, 1];
    let phi = LinMap::from_fn(h.space().clone(), algebra.space().clone(), |k| {
        SparseVec::from_entries(4, reps.iter().map(|&s| (c4.mul(s, F4_SUB[k]), F::one())))
    })?;
    let cleaving = CleavingMap::new(&algebra, phi)?;
    // restriction to the subgroup
    let sub_hopf = build_function_algebra::<F>(&sub)?;
    let target_rho = translation_coaction(&sub, &[0, 1], h.clone())?;
    let target = ComoduleAlgebra::new_checked(sub_hopf.algebra().clone(), Some(target_rho), None)?;
    let map = LinMap::from_fn(algebra.space().clone(), target.space().clone(), |x| match F4_SUB
        .iter()
        .position(|&s| s == x)
    {
        Some(p) => SparseVec::unit(2, p),
        None => SparseVec::zeros(2),
    })?;
    Ok(Fixture {
        name: "f4".into(),
        hopf_algebras: BTreeMap::from([("H".to_string(), h)]),
        right_hopf: "H".into(),
        left_hopf: None,
        algebra,
        cocycles: BTreeMap::new(),
        cleaving: Some(cleaving),
        morphism: Some(Morphism { target, map }),
        checks: vec![
            "galois".into(),
            "chern-weil".into(),
            "prop-pushforward".into(),
            "naturality".into(),
        ],
    })
}

/// Pullback along `x ↦ x·g2` on `𝕂^{C4}`: a left `B`-linear, colinear automorphism of f4.
pub fn f4_shift<F: Field>() -> Result<LinMap<F>> {
    let c4 = FiniteGroup::cyclic(4)?;
    let s = BasedSpace::new(c4.names().iter().map(|x| format!("δ{x}")))?;
    LinMap::from_fn(s.clone(), s, |y| SparseVec::unit(4, c4.mul(y, c4.inverse(2))))
}

/// `(𝕂^{C2})^{⊗k}` as a single-factor algebra with labels `δx⊗δy⊗…`.
fn function_power<F: Field>(base: &HopfAlgebra<F>, k: usize) -> Result<Algebra<F>> {
    let mut alg = base.algebra().clone();
    for _ in 1..k {
        alg = alg.tensor(base.algebra());
    }
    let space = BasedSpace::new(alg.space().labels())?;
    Algebra::new(space, alg.mult().clone(), alg.unit().cloned())
}

/// Coaction of `hopf` through its coproduct on one leg of `(𝕂^{C2})^{⊗k}`.
fn leg_coaction<F: Field>(
    hopf: &Arc<HopfAlgebra<F>>,
    space: &BasedSpace,
    k: usize,
    leg: usize,
    right: bool,
) -> Result<Coaction<F>> {
    let d = hopf.dim();
    let dims = vec![d; k];
    let target = if right {
        space.tensor(hopf.space())
    } else {
        hopf.space().tensor(space)
    };
    let map = LinMap::from_fn(space.clone(), target, |i| {
        let digits = decode(i, &dims);
        let mut out = SparseVec::zeros(space.dim() * d);
        for (idx, c) in hopf.comult().col(digits[leg]).iter() {
            let (first, second) = (idx / d, idx % d);
            let mut new = digits.clone();
            let j = if right {
                new[leg] = first;
                encode(&new, &dims) * d + second
            } else {
                new[leg] = second;
                first * space.dim() + encode(&new, &dims)
            };
            out.add_term(j, c.clone());
        }
        out
    })?;
    if right {
        Coaction::right(hopf.clone(), map)
    } else {
        Coaction::left(hopf.clone(), map)
    }
}

/// `𝕂^{C2}⊗𝕂^{C2}` with `K` on the left leg and `H` on the right leg.
pub fn f5<F: Field>() -> Result<Fixture<F>> {
    let c2 = FiniteGroup::cyclic(2)?;
    let k = Arc::new(build_function_algebra::<F>(&c2)?);
    let h = Arc::new(build_function_algebra::<F>(&c2)?);
    let alg = function_power(&h, 2)?;
    let space = alg.space().clone();
    let rho = leg_coaction(&h, &space, 2, 1, true)?;
    let lambda = leg_coaction(&k, &space, 2, 0, false)?;
    let algebra = ComoduleAlgebra::new_checked(alg, Some(rho), Some(lambda))?;
    // φ(h) = 1⊗h, gauged by β(δe) = 1 − b, β(δg) = b with b = δg⊗1
    let one_k = k.unit().clone();
    let phi = LinMap::from_fn(h.space().clone(), space.clone(), |j| one_k.kron(&h.basis(j)))?;
    let b = SparseVec::unit(2, 1).kron(h.unit());
    let one = algebra.unit().clone();
    let beta = LinMap::new(h.space().clone(), space.clone(), vec![one.sub(&b), b])?;
    let gauged = convolve(&beta, &phi, h.coalgebra(), &algebra.algebra)?;
    let cleaving = CleavingMap::new(&algebra, gauged)?;
    let sign = |x: usize, y: usize| if x == 1 && y == 1 { -F::one() } else { F::one() };
    let sigma = compile_function_cocycle(k.clone(), &c2, sign)?;
    let gamma = compile_function_cocycle(h.clone(), &c2, sign)?;
    // pullback along (x, y, z) ↦ (x, y)
    let talg = function_power(&h, 3)?;
    let tspace = talg.space().clone();
    let trho = leg_coaction(&h, &tspace, 3, 1, true)?;
    let tlambda = leg_coaction(&k, &tspace, 3, 0, false)?;
    let target = ComoduleAlgebra::new_checked(talg, Some(trho), Some(tlambda))?;
    let map = LinMap::from_fn(space.clone(), tspace, |i| SparseVec::unit(4, i).kron(h.unit()))?;
    Ok(Fixture {
        name: "f5".into(),
        hopf_algebras: BTreeMap::from([("H".to_string(), h), ("K".to_string(), k)]),
        right_hopf: "H".into(),
        left_hopf: Some("K".into()),
        algebra,
        cocycles: BTreeMap::from([
            (
                "gamma".to_string(),
                NamedCocycle {
                    hopf: "H".into(),
                    cocycle: gamma,
                },
            ),
            (
                "sigma".to_string(),
                NamedCocycle {
                    hopf: "K".into(),
                    cocycle: sigma,
                },
            ),
        ]),
        cleaving: Some(cleaving),
        morphism: Some(Morphism { target, map }),
        checks: vec!["prop-chw-deform-external".into(), "combined".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comod::{check_bicomodule, coinvariants};
    use crate::galois::canonical_map;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn all_fixtures_build_and_are_galois() {
        for name in FIXTURE_NAMES {
            let f = fixture::<Q>(name).unwrap();
            assert!(f.algebra.check().is_ok(), "{name}");
            let g = canonical_map(&f.algebra).unwrap();
            assert!(g.is_bijective(), "{name}");
        }
    }

    #[test]
    fn base_dimensions() {
        let dims: Vec<usize> = FIXTURE_NAMES
            .iter()
            .map(|n| coinvariants(&fixture::<Q>(n).unwrap().algebra).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 2]);
    }

    #[test]
    fn f4_morphism_is_a_comodule_algebra_map() {
        let f = f4::<Q>().unwrap();
        let m = f.morphism.unwrap();
        assert!(f
            .algebra
            .algebra
            .check_algebra_map(&m.target.algebra, &m.map)
            .is_none());
        let shift = f4_shift::<Q>().unwrap();
        assert!(f
            .algebra
            .algebra
            .check_algebra_map(&f.algebra.algebra, &shift)
            .is_none());
    }

    #[test]
    fn f5_is_a_bicomodule_and_gauge_is_not_trivial() {
        let f = f5::<Q>().unwrap();
        let r = check_bicomodule(f.algebra.left().unwrap(), f.algebra.right().unwrap());
        assert!(r.is_ok());
        let phi = &f.cleaving.as_ref().unwrap().phi;
        // φ′(δe) = δe⊗δe + δg⊗δg
        assert_eq!(
            *phi.col(0),
            SparseVec::from_entries(4, [(0, Q::one()), (3, Q::one())])
        );
        let s = f.left_cocycle().unwrap();
        assert_eq!(s.value(1, 1), Q::parse("-1/2").unwrap());
        assert_eq!(s.value(0, 0), Q::parse("1/2").unwrap());
    }
}
