//! Acceptance criteria 1 to 12, exact arithmetic throughout.
//!
//! Prints one PASS/FAIL line per criterion and exits non-zero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use hopf_cw::chernweil::{
    combined_check, naturality_chain_check, naturality_check, ChernWeil, ExternalDeformation,
    RightDeformation,
};
use hopf_cw::comod::check_bicomodule;
use hopf_cw::cyclic::{
    cyclic_homology_dim, cyclic_operator, hochschild_boundary, norm_operator, total_differential_map,
    truncated_boundary, HomologyMode,
};
use hopf_cw::fixtures::{fixture, Fixture, FIXTURE_NAMES};
use hopf_cw::galois::{canonical_map, connection_from_cleaving, GaloisExtension, StrongConnection};
use hopf_cw::hopf::{
    build_function_algebra, build_group_algebra, build_sweedler_h4, convolution_inverse, convolution_unit,
    convolve, Algebra, FiniteGroup, HopfAlgebra,
};
use hopf_cw::io::{load_spec, run_suite, to_canonical_string};
use hopf_cw::linalg::{LinMap, SparseVec};
use hopf_cw::report::CheckReport;
use hopf_cw::scalar::{Field, Rational};
use hopf_cw::twist::{
    check_cocycle, check_ff, compile_function_cocycle, deform_cleaving, deform_comodule_algebra_left,
    deform_comodule_algebra_right, deform_connection_both, deform_connection_left, deform_connection_right,
    deform_hopf, tensor_bialgebra, DeformedHopf,
};

type Q = Rational;
type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok(r: hopf_cw::Result<CheckReport>, what: &str) -> Outcome {
    let r = r.map_err(|e| format!("{what}: {e}"))?;
    match r.findings.first() {
        None => Ok(()),
        Some(f) => Err(format!("{what}: {} ({})", f.equation, f.witness)),
    }
}

fn e<T>(r: hopf_cw::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|err| format!("{what}: {err}"))
}

fn fx(name: &str) -> Result<Fixture<Q>, String> {
    e(fixture::<Q>(name), name)
}

fn solved(f: &Fixture<Q>) -> Result<(GaloisExtension<Q>, StrongConnection<Q>), String> {
    let g = e(canonical_map(&f.algebra), &f.name)?;
    let ell = e(g.solve_strong_connection(), &f.name)?;
    Ok((g, ell))
}

fn cleft_context(f: &Fixture<Q>) -> Result<ChernWeil<Q>, String> {
    let g = e(canonical_map(&f.algebra), &f.name)?;
    let c = f.cleaving.as_ref().ok_or("no cleaving map")?;
    let ell = e(connection_from_cleaving(c, f.hopf()), &f.name)?;
    e(ChernWeil::new(g, ell), &f.name)
}

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("C2", FiniteGroup::cyclic(2).unwrap()),
        ("C2×C2", FiniteGroup::klein()),
        ("C4", FiniteGroup::cyclic(4).unwrap()),
        ("S3", FiniteGroup::symmetric3()),
    ]
}

fn criterion_1() -> Outcome {
    let g = |n: &str| groups().into_iter().find(|(m, _)| *m == n).unwrap().1;
    let mut algebras: Vec<(String, HopfAlgebra<Q>)> = Vec::new();
    for n in ["C2", "C2×C2", "S3"] {
        algebras.push((format!("Q[{n}]"), e(build_group_algebra(&g(n)), n)?));
    }
    for n in ["C2", "C4", "S3"] {
        algebras.push((format!("K^{n}"), e(build_function_algebra(&g(n)), n)?));
    }
    algebras.push(("H4".into(), e(build_sweedler_h4(), "H4")?));
    for (name, h) in &algebras {
        if let Some(v) = h.check_axioms().first() {
            return Err(format!("{name}: {} ({})", v.axiom.name(), v.witness));
        }
        let id = LinMap::identity(h.space());
        let inv = e(convolution_inverse(&id, h.coalgebra(), h.algebra()), name)?;
        ensure(
            inv.is_some_and(|s| s.same_matrix(h.antipode())),
            format!("{name}: S is not the convolution inverse of id"),
        )?;
    }
    Ok(())
}

/// Conjugacy classes of a group given by its table.
fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut classes = Vec::new();
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..g.order()).map(|y| g.mul(g.mul(y, x), g.inverse(y))).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class);
    }
    classes
}

fn criterion_2() -> Outcome {
    let s3 = FiniteGroup::symmetric3();
    let classes = conjugacy_classes(&s3);
    ensure(classes.len() == 3, format!("S3 has {} classes", classes.len()))?;
    let fun = e(build_function_algebra::<Q>(&s3), "K^S3")?;
    let tr = fun.cotrace_space();
    ensure(tr.len() == 3, format!("dim H^tr(K^S3) = {}", tr.len()))?;
    // each cotrace is a class function
    for v in &tr {
        for class in &classes {
            let c0 = v.coeff(class[0]);
            ensure(
                class.iter().all(|&x| v.coeff(x) == c0),
                "a cotrace of K^S3 is not a class function",
            )?;
        }
    }
    let grp = e(build_group_algebra::<Q>(&s3), "Q[S3]")?;
    let tr = grp.cotrace_space();
    ensure(tr.len() == s3.order(), format!("dim H^tr(Q[S3]) = {}", tr.len()))?;
    for x in 0..s3.order() {
        ensure(grp.is_cotrace(&grp.basis(x)), "a group element is not a cotrace")?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    for name in ["f1", "f2", "f4"] {
        let f = fx(name)?;
        let (g, ell) = solved(&f)?;
        ensure(g.is_bijective(), format!("{name}: can is not bijective"))?;
        let r = e(g.verify_strong_connection(&ell.ell), name)?;
        for eq in ["Sw1", "Sw2", "Sw3"] {
            ensure(!r.mentions(eq), format!("{name}: {eq} fails"))?;
        }
        ok(Ok(r), name)?;
    }
    for name in FIXTURE_NAMES {
        let f = fx(name)?;
        let (_, ell) = solved(&f)?;
        let h = f.hopf();
        let one = f.algebra.unit();
        for j in 0..h.dim() {
            let prod = f.algebra.algebra.mult().apply(ell.ell.col(j));
            let eps = h.counit_of(&h.basis(j));
            ensure(
                prod == one.scaled(&eps),
                format!("{name}: h^<1>h^<2> ≠ ε(h)1 at {}", h.space().label(j)),
            )?;
        }
    }
    Ok(())
}

fn deformation_basics(name: &str, d: &DeformedHopf<Q>) -> Outcome {
    let h = &d.base;
    if let Some(v) = d.result.check_axioms().first() {
        return Err(format!("{name}: H_γ {} ({})", v.axiom.name(), v.witness));
    }
    let s = e(d.result.antipode().compose(d.result.antipode_inv()), name)?;
    ensure(
        s.same_matrix(&LinMap::identity(h.space())),
        format!("{name}: S_γ∘S_γ⁻¹ ≠ id"),
    )?;
    let (coal, _) = tensor_bialgebra(h);
    let k = Algebra::scalar();
    let gg = e(convolve(&d.cocycle.gamma, &d.cocycle.gamma_inv, &coal, &k), name)?;
    ensure(
        gg.same_matrix(&convolution_unit(&coal, &k)),
        format!("{name}: γ*γ⁻¹ ≠ ε⊗ε"),
    )?;
    let uu = e(convolve(&d.u, &d.u_inv, h.coalgebra(), &k), name)?;
    ensure(
        uu.same_matrix(&convolution_unit(h.coalgebra(), &k)),
        format!("{name}: u*u⁻¹ ≠ ε"),
    )?;
    ok(check_ff(d), &format!("{name}: 𝔣"))
}

fn criterion_4() -> Outcome {
    for name in ["f2", "f3"] {
        let f = fx(name)?;
        let c = e(f.cocycle("gamma"), name)?;
        ok(check_cocycle(f.hopf(), &c.gamma), &format!("{name}: cocycle"))?;
        let d = e(deform_hopf(c), name)?;
        deformation_basics(name, &d)?;
        let (_, ell) = solved(&f)?;
        let ag = e(deform_comodule_algebra_right(&f.algebra, &d), name)?;
        let gg = e(canonical_map(&ag), name)?;
        let lg = e(deform_connection_right(&ell, &d), name)?;
        ok(gg.verify_strong_connection(&lg.ell), &format!("{name}: ℓ_γ"))?;
        if name == "f2" {
            ensure(!ag.algebra.is_commutative(), "A_γ is commutative")?;
            let (a, b) = (
                ag.space().index_of("a").unwrap(),
                ag.space().index_of("b").unwrap(),
            );
            let (ua, ub) = (SparseVec::unit(4, a), SparseVec::unit(4, b));
            ensure(
                ag.algebra.mul(&ua, &ub) == ag.algebra.mul(&ub, &ua).neg(),
                "a·_γ b ≠ −b·_γ a",
            )?;
        }
    }
    // cleft formula on F4 with the C2 sign cocycle on H
    let f = fx("f4")?;
    let sub = e(
        FiniteGroup::cyclic(4).and_then(|c| c.subgroup(&[0, 2])),
        "C2 ⊂ C4",
    )?;
    let sign = |x: usize, y: usize| if x == 1 && y == 1 { -Q::one() } else { Q::one() };
    let c = e(
        compile_function_cocycle(f.hopf().clone(), &sub, sign),
        "f4 cocycle",
    )?;
    let d = e(deform_hopf(&c), "f4")?;
    deformation_basics("f4", &d)?;
    let cleaving = f.cleaving.as_ref().ok_or("f4 has no cleaving map")?;
    let ag = e(deform_comodule_algebra_right(&f.algebra, &d), "f4")?;
    let dc = e(deform_cleaving(cleaving, &d), "f4")?;
    ok(dc.check(&ag), "f4: deformed cleaving")?;
    let cleft = e(connection_from_cleaving(&dc, &d.result), "f4")?;
    let general = e(
        connection_from_cleaving(cleaving, f.hopf()).and_then(|l| deform_connection_right(&l, &d)),
        "f4",
    )?;
    ensure(
        cleft.ell.same_matrix(&general.ell),
        "f4: cleft ℓ_γ differs from the general formula",
    )?;
    ok(
        e(canonical_map(&ag), "f4")?.verify_strong_connection(&general.ell),
        "f4: ℓ_γ",
    )
}

fn criterion_5() -> Outcome {
    let f = fx("f5")?;
    let a = &f.algebra;
    ok(
        Ok(check_bicomodule(
            a.left.as_ref().ok_or("no left coaction")?,
            e(a.right(), "f5")?,
        )),
        "f5 bicomodule",
    )?;
    let ds = e(deform_hopf(e(f.cocycle("sigma"), "f5")?), "σ")?;
    let dg = e(deform_hopf(e(f.cocycle("gamma"), "f5")?), "γ")?;
    let (_, ell) = solved(&f)?;
    let sigma = &ds.cocycle;
    let sa = e(deform_comodule_algebra_left(a, &ds), "σA")?;
    let sl = e(deform_connection_left(&ell, a, sigma), "σℓ")?;
    ok(
        e(canonical_map(&sa), "σA")?.verify_strong_connection(&sl.ell),
        "σℓ",
    )?;
    let both = e(deform_connection_both(&ell, a, &dg, sigma), "(σℓ)_γ")?;
    let one = e(deform_connection_right(&sl, &dg), "(σℓ)_γ")?;
    let ag = e(deform_comodule_algebra_right(a, &dg), "A_γ")?;
    let two = e(
        deform_connection_right(&ell, &dg).and_then(|lg| deform_connection_left(&lg, &ag, sigma)),
        "σ(ℓ_γ)",
    )?;
    ensure(one.ell.same_matrix(&two.ell), "(σℓ)_γ ≠ σ(ℓ_γ)")?;
    ensure(
        both.ell.same_matrix(&one.ell),
        "doubly deformed ℓ differs from the composites",
    )?;
    let sag = e(deform_comodule_algebra_right(&sa, &dg), "σA_γ")?;
    ok(
        e(canonical_map(&sag), "σA_γ")?.verify_strong_connection(&both.ell),
        "σℓ_γ",
    )
}

fn zero_map(m: &LinMap<Q>) -> bool {
    m.is_zero()
}

fn criterion_6() -> Outcome {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let algebras = [
        ("K", Algebra::<Q>::scalar()),
        (
            "K^C2",
            e(build_function_algebra::<Q>(&c2), "K^C2")?.algebra().clone(),
        ),
    ];
    for (name, a) in &algebras {
        let ctx = |n: usize| format!("{name}, n = {n}");
        for n in 0..=4 {
            let t = e(cyclic_operator(a, n), name)?;
            let id = LinMap::identity(t.source());
            ensure(
                e(t.pow(n + 1), name)?.same_matrix(&id),
                format!("t^(n+1) ≠ id ({})", ctx(n)),
            )?;
            if n == 0 {
                continue;
            }
            let d = e(hochschild_boundary(a, n), name)?;
            let dp = e(truncated_boundary(a, n), name)?;
            let t_low = e(cyclic_operator(a, n - 1), name)?;
            let one_minus = |t: &LinMap<Q>| LinMap::identity(t.source()).sub(t).unwrap();
            let lhs = e(one_minus(&t_low).compose(&dp), name)?;
            let rhs = e(d.compose(&one_minus(&t)), name)?;
            ensure(lhs.same_matrix(&rhs), format!("(1−t)d′ ≠ d(1−t) ({})", ctx(n)))?;
            let lhs = e(dp.compose(&e(norm_operator(a, n), name)?), name)?;
            let rhs = e(e(norm_operator(a, n - 1), name)?.compose(&d), name)?;
            ensure(lhs.same_matrix(&rhs), format!("d′N ≠ Nd ({})", ctx(n)))?;
            if n >= 2 {
                let d_low = e(hochschild_boundary(a, n - 1), name)?;
                ensure(
                    zero_map(&e(d_low.compose(&d), name)?),
                    format!("d² ≠ 0 ({})", ctx(n)),
                )?;
                let dp_low = e(truncated_boundary(a, n - 1), name)?;
                ensure(
                    zero_map(&e(dp_low.compose(&dp), name)?),
                    format!("d′² ≠ 0 ({})", ctx(n)),
                )?;
                let big = e(total_differential_map(a, n), name)?;
                let big_low = e(total_differential_map(a, n - 1), name)?;
                ensure(
                    zero_map(&e(big_low.compose(&big), name)?),
                    format!("D² ≠ 0 ({})", ctx(n)),
                )?;
            }
        }
    }
    let k = Algebra::<Q>::scalar();
    for mode in [HomologyMode::Connes, HomologyMode::Bicomplex] {
        for (n, expected) in [(0, 1), (1, 0), (2, 1)] {
            let dim = e(cyclic_homology_dim(&k, n, mode), "HC(K)")?;
            ensure(
                dim == expected,
                format!("HC_{n}(K) has dim {dim} in {} mode", mode.name()),
            )?;
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut printed_failures = Vec::new();
    for name in ["f1", "f4"] {
        let f = fx(name)?;
        let (g, ell) = solved(&f)?;
        let cw = e(ChernWeil::new(g, ell), name)?;
        for h in cw.cotraces() {
            let hl = h.display_in(cw.hopf().space());
            for n in 0..=2 {
                let r = e(cw.report(&h, n), name)?;
                for (flag, passed) in &r.flags {
                    ensure(*passed, format!("{name}: {flag} fails at h = {hl}, n = {n}"))?;
                }
                if n == 0 {
                    continue;
                }
                let ids = e(cw.chern_identities(&h, n), name)?;
                ensure(
                    ids.first,
                    format!("{name}: d(2c_2n) ≠ (1−t)c_2n−1 at h = {hl}, n = {n}"),
                )?;
                ensure(
                    ids.second,
                    format!("{name}: d′((2n−1)c_2n−1) ≠ N c_2n−2 at h = {hl}, n = {n}"),
                )?;
                if !ids.second_printed {
                    printed_failures.push(format!("{name} h = {hl} n = {n}"));
                }
            }
        }
    }
    ensure(
        printed_failures.is_empty(),
        format!(
            "second identity with coefficient n fails at [{}]; it holds with coefficient 2n−1",
            printed_failures.join("; ")
        ),
    )
}

fn criterion_8() -> Outcome {
    for name in ["f1", "f4"] {
        let f = fx(name)?;
        let cw = cleft_context(&f)?;
        let one = cw.coring.base.coords(cw.galois.algebra.unit()).ok_or("1 ∉ B")?;
        for h in cw.cotraces() {
            let eps = cw.hopf().counit_of(&h);
            let mut p = one.clone();
            for n in 0..=2 {
                if n > 0 {
                    p = p.kron(&one);
                }
                let x = e(cw.x_n(&h, n), name)?;
                ensure(x == p.scaled(&eps), format!("{name}: x_{n} ≠ ε(h)1^⊗{}", n + 1))?;
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let f = fx("f4")?;
    let m = f.morphism.as_ref().ok_or("f4 has no morphism")?;
    let (g, ell) = solved(&f)?;
    let cw = e(ChernWeil::new(g, ell), "f4")?;
    let gbar = e(canonical_map(&m.target), "f4 target")?;
    for h in cw.cotraces() {
        for n in 0..=2 {
            ok(
                naturality_chain_check(&cw, &gbar, &m.map, &h, n),
                &format!("naturality n = {n}"),
            )?;
        }
    }
    // corrupted: δe ↦ 3δe
    let mut cols = m.map.cols().to_vec();
    cols[0] = cols[0].scaled(&Q::from_i64(3));
    let bad = e(
        LinMap::new(m.map.source().clone(), m.map.target().clone(), cols),
        "corrupted map",
    )?;
    let h = cw.cotraces().into_iter().next().ok_or("no cotraces")?;
    let negative = naturality_check(&cw, &gbar, &bad, &h, 1);
    ensure(
        negative.map_or(true, |r| !r.is_ok()),
        "negative control: corrupted morphism passed",
    )
}

fn criterion_10() -> Outcome {
    let f = fx("f2")?;
    let (g, ell) = solved(&f)?;
    let cw = e(ChernWeil::new(g, ell), "f2")?;
    let d = e(deform_hopf(e(f.cocycle("gamma"), "f2")?), "f2")?;
    let rd = e(RightDeformation::new(&cw, &d), "f2")?;
    let mut differs = false;
    for h in cw.cotraces() {
        for n in 0..=2 {
            let chk = e(rd.check(&cw, &h, n), "f2")?;
            ok(Ok(chk.report), &format!("f2 n = {n}"))?;
            let xg = e(rd.deformed.x_n(&h, n), "f2")?;
            ensure(xg == e(cw.x_n(&h, n), "f2")?, format!("x_{n}(ℓ_γ) ≠ x_{n}(ℓ)"))?;
            differs |= chk.c_differs;
        }
    }
    ensure(differs, "c_n(ℓ_γ) = c_n(ℓ) for every (h, n)")
}

fn criterion_11() -> Outcome {
    let f = fx("f5")?;
    let (g, ell) = solved(&f)?;
    let cw = e(ChernWeil::new(g, ell), "f5")?;
    let ds = e(deform_hopf(e(f.cocycle("sigma"), "f5")?), "σ")?;
    let dg = e(deform_hopf(e(f.cocycle("gamma"), "f5")?), "γ")?;
    let ext = e(ExternalDeformation::new(&cw, &ds), "f5")?;
    let morphism = f.morphism.as_ref().map(|m| (&m.target, &m.map));
    for h in cw.cotraces() {
        for n in 0..=2 {
            ok(
                ext.compare(&cw, &h, n),
                &format!("direct vs compositional n = {n}"),
            )?;
            ok(
                combined_check(&cw, &dg, &ds, &h, n, morphism),
                &format!("combined n = {n}"),
            )?;
        }
    }
    Ok(())
}

fn criterion_12() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let run = || -> Result<Vec<String>, String> {
        FIXTURE_NAMES
            .iter()
            .map(|name| {
                let spec = e(load_spec(dir.join(format!("{name}.json"))), name)?;
                let r = e(run_suite(&spec, "all"), name)?;
                ensure(r.passed(), format!("{name}: full suite has failures"))?;
                e(to_canonical_string(&r), name)
            })
            .collect()
    };
    let (first, second) = (run()?, run()?);
    for (name, (a, b)) in FIXTURE_NAMES.iter().zip(first.iter().zip(&second)) {
        ensure(a == b, format!("{name}: reports differ between runs"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Hopf axiom suite", criterion_1),
        ("cotrace dimensions", criterion_2),
        ("Galois suite", criterion_3),
        ("deformation suite (γ)", criterion_4),
        ("external-symmetry suite (σ)", criterion_5),
        ("cyclic-homology kernel", criterion_6),
        ("Chern-Weil core", criterion_7),
        ("cleft value", criterion_8),
        ("naturality", criterion_9),
        ("γ-invariance", criterion_10),
        ("external and combined deformation", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
