use std::sync::Arc;

use proptest::prelude::*;

use hopf_cw::chernweil::{invariance_check_right, ChernWeil};
use hopf_cw::comod::ComoduleAlgebra;
use hopf_cw::cyclic::{
    apply_boundary, apply_cyclic, apply_norm, apply_one_minus_t, apply_truncated, cyclic_homology_dim,
    HomologyMode,
};
use hopf_cw::fixtures::fixture;
use hopf_cw::galois::canonical_map;
use hopf_cw::hopf::{build_function_algebra, build_group_algebra, build_sweedler_h4, FiniteGroup};
use hopf_cw::hopf::{convolution_unit, convolve};
use hopf_cw::hopf::{Algebra, HopfAlgebra};
use hopf_cw::io::{export, parse_spec, read_spec, to_canonical_string};
use hopf_cw::linalg::{kernel, quotient, rank, BasedSpace, LinMap, SparseVec};
use hopf_cw::scalar::{Field, Rational, F7};
use hopf_cw::twist::{check_cocycle, deform_hopf, TwoCocycle};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn f7() -> impl Strategy<Value = F7> {
    (0i64..7).prop_map(F7::new)
}

/// Sparse matrices with about half their entries zero.
fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = LinMap<Rational>> {
    proptest::collection::vec(prop_oneof![Just(Rational::zero()), rational()], rows * cols).prop_map(
        move |vals| {
            let triples = vals.into_iter().enumerate().map(|(k, v)| (k / cols, k % cols, v));
            LinMap::from_triples(BasedSpace::anonymous(cols), BasedSpace::anonymous(rows), triples).unwrap()
        },
    )
}

fn sized_matrix() -> impl Strategy<Value = LinMap<Rational>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))
}

fn vector(dim: usize) -> impl Strategy<Value = SparseVec<Rational>> {
    proptest::collection::vec(prop_oneof![Just(Rational::zero()), rational()], dim)
        .prop_map(|v| SparseVec::from_dense(&v))
}

fn hopf_algebras() -> Vec<Arc<HopfAlgebra<Rational>>> {
    vec![
        Arc::new(build_group_algebra(&FiniteGroup::cyclic(2).unwrap()).unwrap()),
        Arc::new(build_group_algebra(&FiniteGroup::symmetric3()).unwrap()),
        Arc::new(build_function_algebra(&FiniteGroup::symmetric3()).unwrap()),
        Arc::new(build_function_algebra(&FiniteGroup::cyclic(4).unwrap()).unwrap()),
        Arc::new(build_sweedler_h4().unwrap()),
    ]
}

/// `γ(x,y) = (−1)^{xᵀBy} μ(x)μ(y)/μ(x+y)` on `C2×C2`, elements as bit pairs.
fn klein_cocycle(form: u8, mu: [Rational; 3]) -> impl Fn(usize, usize) -> Rational {
    move |x, y| {
        let bit = |i: usize, j: usize| ((form >> (2 * i + j)) & 1) as usize;
        let mut e = 0;
        for i in 0..2 {
            for j in 0..2 {
                e += ((x >> i) & 1) * bit(i, j) * ((y >> j) & 1);
            }
        }
        let m = |z: usize| {
            if z == 0 {
                Rational::one()
            } else {
                mu[z - 1].clone()
            }
        };
        let sign = if e % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
        sign * m(x) * m(y) * m(x ^ y).inv().unwrap()
    }
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((a.clone() + b.clone()) * c.clone(), a.clone() * c.clone() + b.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() - a.clone(), Rational::zero());
        match a.inv() {
            Some(i) => prop_assert_eq!(a * i, Rational::one()),
            None => prop_assert!(a.is_zero()),
        }
        prop_assert!(b.div(&Rational::zero()).is_err());
    }

    #[test]
    fn prime_field_laws(a in f7(), b in f7()) {
        prop_assert_eq!(a.pow(7), a);
        prop_assert_eq!((a + b).pow(7), a.pow(7) + b.pow(7));
        if let Some(i) = a.inv() {
            prop_assert_eq!(a * i, F7::one());
        }
    }

    #[test]
    fn rational_parse_round_trip(a in rational()) {
        prop_assert_eq!(Rational::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn rank_nullity(f in sized_matrix()) {
        prop_assert_eq!(kernel(&f).len() + rank(&f), f.source().dim());
        for v in kernel(&f) {
            prop_assert!(f.apply(&v).is_zero());
        }
    }

    #[test]
    fn quotient_projection_splits(rels in (1usize..6).prop_flat_map(|n| proptest::collection::vec(vector(n), 0..4))) {
        let n = rels.first().map_or(1, |v| v.dim());
        let space = BasedSpace::anonymous(n);
        let q = quotient(&space, &rels).unwrap();
        let id = q.projection.compose(&q.section).unwrap();
        prop_assert!(id.same_matrix(&LinMap::identity(&q.space)));
        for r in &rels {
            prop_assert!(q.projection.apply(r).is_zero());
        }
    }

    #[test]
    fn tensor_respects_composition(
        (f, f2, g, g2) in (1usize..4, 1usize..4, 1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(a, b, c, d, e, h)| (matrix(b, a), matrix(c, b), matrix(e, d), matrix(h, e)))
    ) {
        let lhs = f2.tensor(&g2).compose(&f.tensor(&g)).unwrap();
        let rhs = f2.compose(&f).unwrap().tensor(&g2.compose(&g).unwrap());
        prop_assert!(lhs.same_matrix(&rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn convolution_is_associative_and_unital(
        (k, f, g, e) in (0usize..5).prop_flat_map(|k| {
            let d = hopf_algebras()[k].dim();
            (Just(k), matrix(d, d), matrix(d, d), matrix(d, d))
        })
    ) {
        let h = &hopf_algebras()[k];
        let (c, a) = (h.coalgebra(), h.algebra());
        let relabel = |m: &LinMap<Rational>| m.relabel(h.space(), h.space()).unwrap();
        let (f, g, e) = (relabel(&f), relabel(&g), relabel(&e));
        let left = convolve(&convolve(&f, &g, c, a).unwrap(), &e, c, a).unwrap();
        let right = convolve(&f, &convolve(&g, &e, c, a).unwrap(), c, a).unwrap();
        prop_assert!(left.same_matrix(&right));
        let unit = convolution_unit(c, a);
        prop_assert!(convolve(&f, &unit, c, a).unwrap().same_matrix(&f));
        prop_assert!(convolve(&unit, &f, c, a).unwrap().same_matrix(&f));
    }

    #[test]
    fn cotraces_are_flip_invariant(k in 0usize..5, coeffs in proptest::collection::vec(rational(), 8)) {
        let h = &hopf_algebras()[k];
        let basis = h.cotrace_space();
        prop_assert_eq!(h.cotrace_space(), basis.clone());
        let mut v = SparseVec::zeros(h.dim());
        for (b, c) in basis.iter().zip(&coeffs) {
            v.add_scaled(b, c);
        }
        prop_assert!(h.is_cotrace(&v));
        let flip = |w: &SparseVec<Rational>| {
            let n = h.dim();
            SparseVec::from_entries(n * n, w.iter().map(|(i, c)| ((i % n) * n + i / n, c.clone())))
        };
        let dv = h.iterated_comult(&v, 2);
        prop_assert_eq!(flip(&dv), dv);
    }

    #[test]
    fn cyclic_kernel_identities(k in 0usize..3, n in 1usize..4, seed in proptest::collection::vec(rational(), 64)) {
        let algebras: Vec<Algebra<Rational>> = vec![
            Algebra::scalar(),
            build_group_algebra::<Rational>(&FiniteGroup::cyclic(2).unwrap()).unwrap().algebra().clone(),
            build_function_algebra::<Rational>(&FiniteGroup::cyclic(2).unwrap()).unwrap().algebra().clone(),
        ];
        let a = &algebras[k];
        let dim = a.dim().pow(n as u32 + 1);
        let v = SparseVec::from_dense(&seed[..dim.min(64)].iter().cloned().chain(std::iter::repeat(Rational::zero())).take(dim).collect::<Vec<_>>());
        prop_assert!(apply_boundary(a, n - 1, &apply_boundary(a, n, &v)).is_zero());
        prop_assert!(apply_truncated(a, n - 1, &apply_truncated(a, n, &v)).is_zero());
        let mut t = v.clone();
        for _ in 0..=n {
            t = apply_cyclic(a, n, &t);
        }
        prop_assert_eq!(&t, &v);
        prop_assert_eq!(
            apply_one_minus_t(a, n - 1, &apply_truncated(a, n, &v)),
            apply_boundary(a, n, &apply_one_minus_t(a, n, &v))
        );
        prop_assert_eq!(
            apply_truncated(a, n, &apply_norm(a, n, &v)),
            apply_norm(a, n - 1, &apply_boundary(a, n, &v))
        );
    }

    #[test]
    fn random_klein_cocycles_deform_to_hopf_algebras(form in 0u8..16, mu in [nonzero(), nonzero(), nonzero()]) {
        let h = Arc::new(build_group_algebra::<Rational>(&FiniteGroup::klein()).unwrap());
        let c = TwoCocycle::from_values(h.clone(), klein_cocycle(form, mu)).unwrap();
        prop_assert!(check_cocycle(&h, &c.gamma).unwrap().is_ok());
        let d = deform_hopf(&c).unwrap();
        prop_assert!(d.result.check_axioms().is_empty());
        let reg = ComoduleAlgebra::regular(h.clone());
        let g = canonical_map(&reg).unwrap();
        let cw = ChernWeil::from_extension(g).unwrap();
        for t in cw.cotraces() {
            let chk = invariance_check_right(&cw, &d, &t, 1).unwrap();
            prop_assert!(chk.report.is_ok(), "{:?}", chk.report);
        }
    }

    #[test]
    fn trivial_cocycle_changes_nothing(k in 0usize..5) {
        let h = hopf_algebras()[k].clone();
        let d = deform_hopf(&TwoCocycle::trivial(h.clone())).unwrap();
        prop_assert!(d.result.mult().same_matrix(h.mult()));
        prop_assert!(d.result.antipode().same_matrix(h.antipode()));
    }

    #[test]
    fn spec_round_trip_with_random_cocycle(form in 0u8..16, mu in [nonzero(), nonzero(), nonzero()]) {
        let mut fx = fixture::<Rational>("f2").unwrap();
        let c = TwoCocycle::from_values(fx.hopf().clone(), klein_cocycle(form, mu)).unwrap();
        fx.cocycles.get_mut("gamma").unwrap().cocycle = c;
        let text = to_canonical_string(&export(&fx).unwrap()).unwrap();
        let spec = read_spec(&text).unwrap();
        prop_assert_eq!(to_canonical_string(&spec).unwrap(), text.clone());
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }
}

#[test]
fn connes_and_bicomplex_agree_on_small_algebras() {
    let algebras: Vec<Algebra<Rational>> = vec![
        Algebra::scalar(),
        build_group_algebra::<Rational>(&FiniteGroup::cyclic(2).unwrap())
            .unwrap()
            .algebra()
            .clone(),
    ];
    for a in &algebras {
        for n in 0..=4 {
            let c = cyclic_homology_dim(a, n, HomologyMode::Connes).unwrap();
            let b = cyclic_homology_dim(a, n, HomologyMode::Bicomplex).unwrap();
            assert_eq!(c, b, "HC_{n} of a dim-{} algebra", a.dim());
        }
    }
}
