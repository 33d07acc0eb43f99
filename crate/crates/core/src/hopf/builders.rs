use crate::error::{Error, Result};
use crate::hopf::HopfAlgebra;
use crate::linalg::{BasedSpace, LinMap, SparseVec};
use crate::scalar::Field;

pub const MAX_GROUP_ORDER: usize = 24;

/// Finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!(
                "order {n} outside 1..={MAX_GROUP_ORDER}"
            )));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup {
            names,
            table,
            identity,
            inverse,
        })
    }

    /// `C_n` with elements `e, g, g2, ...`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table)
    }

    /// `C2×C2` with elements `e, a, b, ab`; `a = (1,0)`, `b = (0,1)`.
    pub fn klein() -> Self {
        let names = ["e", "a", "b", "ab"].map(String::from).to_vec();
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        Self::from_table(names, table).expect("Klein four-group")
    }

    /// `S3` as permutations of `{1,2,3}` in one-line notation.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let names = perms
            .iter()
            .map(|p| {
                if *p == [0, 1, 2] {
                    "e".to_string()
                } else {
                    p.iter().map(|x| (x + 1).to_string()).collect()
                }
            })
            .collect();
        // (p∘q)(i) = p(q(i))
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let r = [p[q[0]], p[q[1]], p[q[2]]];
                        perms.iter().position(|s| *s == r).expect("closed")
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("S3")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Subgroup on the listed elements, keeping their names and order.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Self> {
        let pos = |x: usize| elements.iter().position(|&y| y == x);
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let p = pos(self.mul(a, b)).ok_or_else(|| {
                    Error::InvalidGroup("subgroup is not closed under multiplication".into())
                })?;
                row.push(p);
            }
            table.push(row);
        }
        let names = elements.iter().map(|&a| self.names[a].clone()).collect();
        Self::from_table(names, table)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// `𝕂[G]`: group-like basis, `S(g) = g⁻¹`.
pub fn build_group_algebra<F: Field>(g: &FiniteGroup) -> Result<HopfAlgebra<F>> {
    let n = g.order();
    let space = BasedSpace::new(g.names().iter().cloned())?;
    let hh = space.tensor(&space);
    let mult = LinMap::from_fn(hh.clone(), space.clone(), |k| {
        SparseVec::unit(n, g.mul(k / n, k % n))
    })?;
    let unit = SparseVec::unit(n, g.identity());
    let comult = LinMap::from_fn(space.clone(), hh, |a| SparseVec::unit(n * n, a * n + a))?;
    let counit = LinMap::from_fn(space.clone(), BasedSpace::scalar(), |_| SparseVec::unit(1, 0))?;
    let antipode = LinMap::from_fn(space.clone(), space.clone(), |a| SparseVec::unit(n, g.inverse(a)))?;
    HopfAlgebra::new_checked(
        space,
        mult,
        unit,
        comult,
        counit,
        antipode.clone(),
        Some(antipode),
    )
}

/// `𝕂^G`: delta-function basis `δ_x`, pointwise product.
pub fn build_function_algebra<F: Field>(g: &FiniteGroup) -> Result<HopfAlgebra<F>> {
    let n = g.order();
    let space = BasedSpace::new(g.names().iter().map(|x| format!("δ{x}")))?;
    let hh = space.tensor(&space);
    let mult = LinMap::from_fn(hh.clone(), space.clone(), |k| {
        let (a, b) = (k / n, k % n);
        if a == b {
            SparseVec::unit(n, a)
        } else {
            SparseVec::zeros(n)
        }
    })?;
    let unit = SparseVec::from_entries(n, (0..n).map(|i| (i, F::one())));
    let comult = LinMap::from_fn(space.clone(), hh, |x| {
        let mut v = SparseVec::zeros(n * n);
        for u in 0..n {
            let w = g.mul(g.inverse(u), x);
            v.add_term(u * n + w, F::one());
        }
        v
    })?;
    let counit = LinMap::from_fn(space.clone(), BasedSpace::scalar(), |x| {
        if x == g.identity() {
            SparseVec::unit(1, 0)
        } else {
            SparseVec::zeros(1)
        }
    })?;
    let antipode = LinMap::from_fn(space.clone(), space.clone(), |x| SparseVec::unit(n, g.inverse(x)))?;
    HopfAlgebra::new_checked(space, mult, unit, comult, counit, antipode, None)
}

/// Sweedler's four-dimensional Hopf algebra with basis `1, g, x, gx`.
///
/// `g² = 1`, `x² = 0`, `xg = −gx`, `Δg = g⊗g`, `Δx = x⊗1 + g⊗x`.
pub fn build_sweedler_h4<F: Field>() -> Result<HopfAlgebra<F>> {
    let space = BasedSpace::new(["1", "g", "x", "gx"])?;
    let hh = space.tensor(&space);
    // basis index = 2·(x-degree) + (g-degree)
    let mult = LinMap::from_fn(hh.clone(), space.clone(), |k| {
        let (p, q) = (k / 4, k % 4);
        let (a, b) = (p % 2, p / 2);
        let (c, d) = (q % 2, q / 2);
        if b + d > 1 {
            return SparseVec::zeros(4);
        }
        let sign = if b * c == 1 { -F::one() } else { F::one() };
        SparseVec::from_entries(4, [(2 * (b + d) + (a + c) % 2, sign)])
    })?;
    let unit = SparseVec::unit(4, 0);
    let one = F::one;
    let comult = LinMap::from_triples(
        space.clone(),
        hh,
        [
            (0, 0, one()),
            (4 + 1, 1, one()),
            (2 * 4, 2, one()),
            (4 + 2, 2, one()),
            (3 * 4 + 1, 3, one()),
            (3, 3, one()),
        ],
    )?;
    let counit = LinMap::from_triples(
        space.clone(),
        BasedSpace::scalar(),
        [(0, 0, one()), (0, 1, one())],
    )?;
    let antipode = LinMap::from_triples(
        space.clone(),
        space.clone(),
        [(0, 0, one()), (1, 1, one()), (3, 2, -one()), (2, 3, one())],
    )?;
    HopfAlgebra::new_checked(space, mult, unit, comult, counit, antipode, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{convolution_inverse, Axiom};
    use crate::linalg::tensor::permute_legs;
    use crate::scalar::Rational;

    type Q = Rational;

    fn all_builders() -> Vec<(&'static str, HopfAlgebra<Q>)> {
        vec![
            (
                "Q[C2]",
                build_group_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap(),
            ),
            ("Q[C2xC2]", build_group_algebra(&FiniteGroup::klein()).unwrap()),
            ("Q[S3]", build_group_algebra(&FiniteGroup::symmetric3()).unwrap()),
            (
                "K^C2",
                build_function_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap(),
            ),
            (
                "K^C4",
                build_function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap(),
            ),
            (
                "K^S3",
                build_function_algebra(&FiniteGroup::symmetric3()).unwrap(),
            ),
            ("H4", build_sweedler_h4().unwrap()),
        ]
    }

    #[test]
    fn every_builder_satisfies_the_axioms() {
        for (name, h) in all_builders() {
            assert!(h.check_axioms().is_empty(), "{name}: {:?}", h.check_axioms());
        }
    }

    #[test]
    fn antipode_is_convolution_inverse_of_identity() {
        for (name, h) in all_builders() {
            let id = LinMap::identity(h.space());
            let s = convolution_inverse(&id, h.coalgebra(), h.algebra())
                .unwrap()
                .unwrap();
            assert_eq!(&s, h.antipode(), "{name}");
        }
    }

    #[test]
    fn invalid_tables_rejected() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table(names.clone(), vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_table(names, vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(FiniteGroup::cyclic(25).is_err());
    }

    #[test]
    fn s3_is_nonabelian() {
        let g = FiniteGroup::symmetric3();
        assert!(!g.is_abelian());
        let h: HopfAlgebra<Q> = build_group_algebra(&g).unwrap();
        assert!(!h.algebra().is_commutative());
        let f: HopfAlgebra<Q> = build_function_algebra(&g).unwrap();
        assert!(f.algebra().is_commutative());
        assert!(!f.coalgebra().is_cocommutative());
    }

    #[test]
    fn c2_antipode_is_identity() {
        let h: HopfAlgebra<Q> = build_group_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap();
        assert_eq!(h.antipode(), &LinMap::identity(h.space()));
        let k: HopfAlgebra<Q> = build_group_algebra(&FiniteGroup::klein()).unwrap();
        assert!(k.coalgebra().is_cocommutative());
    }

    #[test]
    fn function_algebra_comult_is_dual_to_group_product() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let f: HopfAlgebra<Q> = build_function_algebra(&g).unwrap();
        let n = g.order();
        for z in 0..n {
            let d = f.comult().col(z);
            for x in 0..n {
                for y in 0..n {
                    let expected = if g.mul(x, y) == z { Q::one() } else { Q::zero() };
                    assert_eq!(d.coeff(x * n + y), expected);
                }
            }
        }
    }

    #[test]
    fn sweedler_relations_and_antipode_order() {
        let h: HopfAlgebra<Q> = build_sweedler_h4().unwrap();
        let (one, g, x, gx) = (h.basis(0), h.basis(1), h.basis(2), h.basis(3));
        assert_eq!(h.mul(&g, &g), one);
        assert!(h.mul(&x, &x).is_zero());
        assert_eq!(h.mul(&x, &g), gx.neg());
        assert_eq!(h.mul(&g, &x), gx);
        let s = h.antipode();
        let s2 = s.compose(s).unwrap();
        assert_eq!(s2.apply(&x), x.neg());
        assert_eq!(s2.compose(&s2).unwrap(), LinMap::identity(h.space()));
        let d = h.comult().col(2);
        assert_ne!(&permute_legs(d, &[4, 4], &[1, 0]), d);
        let bad = h.with_antipode(LinMap::identity(h.space()), LinMap::identity(h.space()));
        assert!(bad.check_axioms().iter().any(|v| v.axiom == Axiom::Antipode));
    }
}
