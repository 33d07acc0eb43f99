//! Named verification suites and the commands behind the CLI.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::chernweil::{
    check_morphism, combined_check, naturality_chain_check, naturality_check, pushforward_connection,
    ChernWeil, CombinedDeformation, ExternalDeformation, RightDeformation,
};
use crate::comod::check_bicomodule;
use crate::cyclic::{cyclic_homology_dim, HomologyMode};
use crate::error::{Error, Result};
use crate::fixtures::{Fixture, Morphism, NamedCocycle};
use crate::galois::{canonical_map, connection_from_cleaving, GaloisExtension, StrongConnection};
use crate::hopf::{convolution_unit, convolve, Algebra, HopfAlgebra};
use crate::io::spec::{build, export, FixtureSpec};
use crate::linalg::{LinMap, SparseVec};
use crate::report::CheckReport;
use crate::scalar::Field;
use crate::twist::{
    check_cocycle, check_ff, deform_cleaving, deform_comodule_algebra_left, deform_comodule_algebra_right,
    deform_connection_both, deform_connection_left, deform_connection_right, deform_connection_right_via_iso,
    deform_hopf, tensor_bialgebra, DeformedHopf,
};

pub const TOOL: &str = concat!("hopf-cw ", env!("CARGO_PKG_VERSION"));

/// Highest Chern-Weil degree exercised by the suites.
pub const MAX_DEGREE: usize = 2;

pub const SUITES: [&str; 11] = [
    "hopf-axioms",
    "galois",
    "chern-weil",
    "prop-deformation-hopf",
    "thm-deformed-strong-conn-right",
    "prop-pushforward",
    "naturality",
    "prop-chw-deform-right",
    "prop-chw-deform-external",
    "combined",
    "all",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Deterministic report: no timings, checks in execution order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tool: String,
    pub fixture: String,
    pub field: String,
    pub suite: String,
    pub checks: Vec<CheckEntry>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// One line per check followed by a tally.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("{tag} {}", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" ({w})"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} / {}: {} passed, {} failed, {} skipped\n",
            self.fixture,
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        ));
        out
    }
}

fn witness(report: &CheckReport) -> String {
    report
        .findings
        .iter()
        .map(|f| format!("{}: {}", f.equation, f.witness))
        .collect::<Vec<_>>()
        .join("; ")
}

struct Run<'a, F> {
    fx: &'a Fixture<F>,
    prefix: String,
    checks: Vec<CheckEntry>,
}

impl<F: Field> Run<'_, F> {
    fn push(&mut self, name: &str, status: Status, witness: Option<String>) {
        self.checks.push(CheckEntry {
            name: format!("{}/{name}", self.prefix),
            status,
            witness,
        });
    }

    fn record(&mut self, name: &str, outcome: Result<CheckReport>) {
        match outcome {
            Ok(r) if r.is_ok() => self.push(name, Status::Pass, None),
            Ok(r) => self.push(name, Status::Fail, Some(witness(&r))),
            Err(e @ Error::Guardrail { .. }) => self.push(name, Status::Skip, Some(e.to_string())),
            Err(e) => self.push(name, Status::Fail, Some(e.to_string())),
        }
    }

    fn expect(&mut self, name: &str, ok: Result<bool>, why: &str) {
        let report = ok.map(|b| {
            let mut r = CheckReport::new();
            if !b {
                r.fail(name, why);
            }
            r
        });
        self.record(name, report);
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.push(name, Status::Skip, Some(why.to_string()));
    }
}

/// The connection the suites use: from the cleaving map when one is given, else solved.
pub fn fixture_connection<F: Field>(fx: &Fixture<F>, g: &GaloisExtension<F>) -> Result<StrongConnection<F>> {
    match &fx.cleaving {
        Some(c) => g.strong_connection(connection_from_cleaving(c, fx.hopf())?.ell),
        None => g.solve_strong_connection(),
    }
}

fn context<F: Field>(fx: &Fixture<F>) -> Result<ChernWeil<F>> {
    let g = canonical_map(&fx.algebra)?;
    let ell = fixture_connection(fx, &g)?;
    ChernWeil::new(g, ell)
}

fn cotrace_label<F: Field>(h: &HopfAlgebra<F>, v: &SparseVec<F>) -> String {
    v.display_in(h.space())
}

fn hopf_axioms<F: Field>(run: &mut Run<'_, F>) {
    for (name, h) in &run.fx.hopf_algebras {
        let mut r = CheckReport::new();
        for v in h.check_axioms() {
            r.fail(v.axiom.name(), v.witness);
        }
        run.record(&format!("{name}: axioms"), Ok(r));
        let conv = (|| {
            let id = LinMap::identity(h.space());
            let e = convolution_unit(h.coalgebra(), h.algebra());
            let (c, a) = (h.coalgebra(), h.algebra());
            Ok(convolve(h.antipode(), &id, c, a)? == e && convolve(&id, h.antipode(), c, a)? == e)
        })();
        run.expect(
            &format!("{name}: S * id = id * S = η∘ε"),
            conv,
            "S is not the convolution inverse of id",
        );
    }
}

fn galois<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    run.record("comodule algebra", Ok(fx.algebra.check()));
    if let (Some(l), Ok(r)) = (&fx.algebra.left, fx.algebra.right()) {
        run.record("bicomodule", Ok(check_bicomodule(l, r)));
    }
    let g = match canonical_map(&fx.algebra) {
        Ok(g) => g,
        Err(e) => return run.record("canonical map bijective", Err(e)),
    };
    run.expect(
        "canonical map bijective",
        Ok(g.is_bijective()),
        "can is not bijective",
    );
    let solved = g
        .solve_strong_connection()
        .and_then(|ell| g.verify_strong_connection(&ell.ell));
    run.record("solved strong connection (Sw1–Sw3, μ∘ℓ = η∘ε)", solved);
    match &fx.cleaving {
        None => run.skip("cleaving map", "no cleaving map"),
        Some(c) => {
            run.record("cleaving map", c.check(&fx.algebra));
            let from =
                connection_from_cleaving(c, fx.hopf()).and_then(|ell| g.verify_strong_connection(&ell.ell));
            run.record("connection from cleaving", from);
        }
    }
}

fn chern_weil<F: Field>(run: &mut Run<'_, F>) {
    let cw = match context(run.fx) {
        Ok(cw) => cw,
        Err(e) => return run.record("Chern-Weil context", Err(e)),
    };
    let hopf = cw.hopf().clone();
    let one_b = cw.coring.base.coords(cw.galois.algebra.unit());
    for h in cw.cotraces() {
        let hl = cotrace_label(&hopf, &h);
        for n in 0..=MAX_DEGREE {
            let flags = cw.report(&h, n).map(|r| {
                let mut rep = CheckReport::new();
                for (flag, ok) in &r.flags {
                    if !ok {
                        rep.fail(flag.clone(), format!("h = {hl}, n = {n}"));
                    }
                }
                rep
            });
            run.record(&format!("chw flags [h = {hl}, n = {n}]"), flags);
            if n >= 1 {
                let ids = cw.chern_identities(&h, n).map(|ids| {
                    let mut rep = CheckReport::new();
                    if !ids.first {
                        rep.fail("d(2c_2n) = (1−t)c_2n−1", format!("n = {n}"));
                    }
                    if !ids.second {
                        rep.fail("d′((2n−1)c_2n−1) = N c_2n−2", format!("n = {n}"));
                    }
                    if n == 1 && !ids.second_printed {
                        rep.fail("d′(n c_2n−1) = N c_2n−2", "n = 1");
                    }
                    rep
                });
                run.record(&format!("cycle identities [h = {hl}, n = {n}]"), ids);
            }
            if run.fx.cleaving.is_some() {
                let cleft = (|| {
                    let one = one_b
                        .clone()
                        .ok_or_else(|| Error::Falsification("1 ∉ B".into()))?;
                    let mut p = one.clone();
                    for _ in 0..n {
                        p = p.kron(&one);
                    }
                    Ok(cw.x_n(&h, n)? == p.scaled(&hopf.counit_of(&h)))
                })();
                run.expect(
                    &format!("cleft value [h = {hl}, n = {n}]"),
                    cleft,
                    "x_n ≠ ε(h)1^⊗",
                );
            }
        }
    }
}

fn deformation_hopf<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    if fx.cocycles.is_empty() {
        return run.skip("cocycles", "fixture has no cocycle");
    }
    for (name, c) in &fx.cocycles {
        let h = &c.cocycle.hopf;
        run.record(&format!("{name}: cocycle"), check_cocycle(h, &c.cocycle.gamma));
        let d = match deform_hopf(&c.cocycle) {
            Ok(d) => d,
            Err(e) => {
                run.record(&format!("{name}: H_γ"), Err(e));
                continue;
            }
        };
        let mut axioms = CheckReport::new();
        for v in d.result.check_axioms() {
            axioms.fail(v.axiom.name(), v.witness);
        }
        run.record(&format!("{name}: H_γ axioms"), Ok(axioms));
        let s = d.result.antipode().compose(d.result.antipode_inv());
        run.expect(
            &format!("{name}: S_γ∘S_γ⁻¹ = id"),
            s.map(|s| s.same_matrix(&LinMap::identity(h.space()))),
            "S_γ∘S_γ⁻¹ ≠ id",
        );
        let gg = (|| {
            let (coal, _) = tensor_bialgebra(h);
            let k = Algebra::scalar();
            Ok(convolve(&c.cocycle.gamma, &c.cocycle.gamma_inv, &coal, &k)? == convolution_unit(&coal, &k))
        })();
        run.expect(&format!("{name}: γ*γ⁻¹ = ε⊗ε"), gg, "γ*γ⁻¹ ≠ ε⊗ε");
        let uu = (|| {
            let k = Algebra::scalar();
            Ok(
                convolve(&d.u, &d.u_inv, h.coalgebra(), &k)? == convolution_unit(h.coalgebra(), &k)
                    && convolve(&d.v, &d.v_inv, h.coalgebra(), &k)? == convolution_unit(h.coalgebra(), &k),
            )
        })();
        run.expect(
            &format!("{name}: u*u⁻¹ = v*v⁻¹ = ε"),
            uu,
            "u or v is not inverted",
        );
        run.record(&format!("{name}: 𝔣"), check_ff(&d));
        let deformed = if c.hopf == fx.right_hopf {
            deform_comodule_algebra_right(&fx.algebra, &d)
        } else {
            deform_comodule_algebra_left(&fx.algebra, &d)
        };
        run.record(
            &format!("{name}: deformed comodule algebra"),
            deformed.map(|a| a.check()),
        );
    }
}

fn deformed<F: Field>(c: Option<&crate::twist::TwoCocycle<F>>) -> Option<Result<DeformedHopf<F>>> {
    c.map(deform_hopf)
}

fn strong_conn_right<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let Some(d) = deformed(fx.right_cocycle()) else {
        return run.skip("ℓ_γ", "no cocycle on H");
    };
    let checks = (|| {
        let d = d?;
        let g = canonical_map(&fx.algebra)?;
        let ell = fixture_connection(fx, &g)?;
        let ag = deform_comodule_algebra_right(&fx.algebra, &d)?;
        let gg = canonical_map(&ag)?;
        let lg = deform_connection_right(&ell, &d)?;
        let verified = gg.verify_strong_connection(&lg.ell)?;
        let via = deform_connection_right_via_iso(&ell, &fx.algebra, &d)?;
        let mut same = CheckReport::new();
        if !via.ell.same_matrix(&lg.ell) {
            same.fail("ℓ_γ = α⁻¹∘ℓ∘𝔣", "closed formula and isomorphism path differ");
        }
        let cleft = fx.cleaving.as_ref().map(|c| {
            (|| {
                let dc = deform_cleaving(c, &d)?;
                let mut r = dc.check(&ag)?;
                let general = deform_connection_right(
                    &StrongConnection {
                        ell: connection_from_cleaving(c, fx.hopf())?.ell,
                    },
                    &d,
                )?;
                if !connection_from_cleaving(&dc, &d.result)?
                    .ell
                    .same_matrix(&general.ell)
                {
                    r.fail("cleft formula", "φ_γ⁻¹⊗φ differs from the general ℓ_γ");
                }
                Ok(r)
            })()
        });
        Ok((verified, same, cleft))
    })();
    match checks {
        Err(e) => run.record("ℓ_γ strong connection", Err(e)),
        Ok((verified, same, cleft)) => {
            run.record("ℓ_γ strong connection", Ok(verified));
            run.record("ℓ_γ = α⁻¹∘ℓ∘𝔣", Ok(same));
            match cleft {
                None => run.skip("deformed cleaving", "no cleaving map"),
                Some(r) => run.record("deformed cleaving", r),
            }
        }
    }
}

fn pushforward<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let Some(Morphism { target, map }) = &fx.morphism else {
        return run.skip("pushforward", "no morphism");
    };
    run.record("morphism", check_morphism(&fx.algebra, target, map));
    let parts = (|| {
        let g = canonical_map(&fx.algebra)?;
        let gbar = canonical_map(target)?;
        let ell = fixture_connection(fx, &g)?;
        Ok((g, gbar, ell))
    })();
    let (g, gbar, ell) = match parts {
        Ok(p) => p,
        Err(e) => return run.record("pushed connection", Err(e)),
    };
    let pushed = map
        .tensor(map)
        .compose(&ell.ell)
        .and_then(|l| gbar.verify_strong_connection(&l));
    run.record("(f⊗f)∘ℓ strong connection", pushed);
    let iso = pushforward_connection(&g, &gbar, &ell, map, fx.cleaving.as_ref()).map(|_| CheckReport::new());
    run.record("B̄⊗_B A ≅ Ā and f∘φ cleaving", iso);
}

fn naturality<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let Some(Morphism { target, map }) = &fx.morphism else {
        return run.skip("naturality", "no morphism");
    };
    let parts = context(fx).and_then(|cw| Ok((canonical_map(target)?, cw)));
    let (gbar, cw) = match parts {
        Ok(p) => p,
        Err(e) => return run.record("naturality context", Err(e)),
    };
    let hopf = cw.hopf().clone();
    let cotraces = cw.cotraces();
    for h in &cotraces {
        let hl = cotrace_label(&hopf, h);
        for n in 0..=MAX_DEGREE {
            run.record(
                &format!("x_n(ℓ̄) = f^⊗ x_n(ℓ) [h = {hl}, n = {n}]"),
                naturality_chain_check(&cw, &gbar, map, h, n),
            );
            run.record(
                &format!("class naturality [h = {hl}, n = {n}]"),
                naturality_check(&cw, &gbar, map, h, n),
            );
        }
    }
    let bad = map.scaled(&F::from_i64(2));
    let negative = cotraces
        .first()
        .map(|h| naturality_check(&cw, &gbar, &bad, h, 1).map(|r| !r.is_ok()))
        .unwrap_or(Ok(true));
    run.expect("negative control (2f)", negative, "corrupted morphism passed");
}

fn chw_right<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let Some(d) = deformed(fx.right_cocycle()) else {
        return run.skip("x_n(ℓ_γ)", "no cocycle on H");
    };
    let parts = d.and_then(|d| {
        let cw = context(fx)?;
        let rd = RightDeformation::new(&cw, &d)?;
        Ok((cw, rd))
    });
    let (cw, rd) = match parts {
        Ok(p) => p,
        Err(e) => return run.record("deformed context", Err(e)),
    };
    let hopf = cw.hopf().clone();
    let mut differs = false;
    for h in cw.cotraces() {
        let hl = cotrace_label(&hopf, &h);
        for n in 0..=MAX_DEGREE {
            let out = rd.check(&cw, &h, n);
            if let Ok(o) = &out {
                differs |= o.c_differs;
            }
            run.record(
                &format!("x_n(ℓ_γ) = x_n(ℓ) [h = {hl}, n = {n}]"),
                out.map(|o| o.report),
            );
        }
    }
    let name = "c_n(ℓ_γ) ≠ c_n(ℓ) for some (h, n)";
    if differs {
        run.push(name, Status::Pass, None);
    } else {
        run.skip(name, "c_n(ℓ_γ) = c_n(ℓ) for every basis cotrace on this fixture");
    }
}

fn chw_external<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let Some(d) = deformed(fx.left_cocycle()) else {
        return run.skip("x_n(σℓ)", "no cocycle on K");
    };
    let parts = d.and_then(|d| {
        let cw = context(fx)?;
        let ext = ExternalDeformation::new(&cw, &d)?;
        Ok((cw, ext))
    });
    let (cw, ext) = match parts {
        Ok(p) => p,
        Err(e) => return run.record("deformed context", Err(e)),
    };
    let hopf = cw.hopf().clone();
    for h in cw.cotraces() {
        let hl = cotrace_label(&hopf, &h);
        for n in 0..=MAX_DEGREE {
            run.record(
                &format!("x_n(σℓ) direct = compositional [h = {hl}, n = {n}]"),
                ext.compare(&cw, &h, n),
            );
        }
        run.record(
            &format!("chw_1(σℓ) cycle over σB [h = {hl}]"),
            ext.evaluate(&cw, &h, 1).map(|o| o.report),
        );
    }
}

fn combined<F: Field>(run: &mut Run<'_, F>) {
    let fx = run.fx;
    let (Some(dg), Some(ds)) = (deformed(fx.right_cocycle()), deformed(fx.left_cocycle())) else {
        return run.skip("combined", "needs cocycles on both H and K");
    };
    let parts = (|| {
        let (dg, ds) = (dg?, ds?);
        let cw = context(fx)?;
        let a = &fx.algebra;
        let sigma = &ds.cocycle;
        let both = deform_connection_both(&cw.ell, a, &dg, sigma)?;
        let one = deform_connection_right(&deform_connection_left(&cw.ell, a, sigma)?, &dg)?;
        let ag = deform_comodule_algebra_right(a, &dg)?;
        let two = deform_connection_left(&deform_connection_right(&cw.ell, &dg)?, &ag, sigma)?;
        let mut r = CheckReport::new();
        if !one.ell.same_matrix(&both.ell) || !two.ell.same_matrix(&both.ell) {
            r.fail("(σℓ)_γ = σ(ℓ_γ)", "the deformation orders disagree");
        }
        CombinedDeformation::new(&cw, &dg, &ds)?;
        Ok((cw, dg, ds, r))
    })();
    let (cw, dg, ds, r) = match parts {
        Ok(p) => p,
        Err(e) => return run.record("(σℓ)_γ = σ(ℓ_γ)", Err(e)),
    };
    run.record("(σℓ)_γ = σ(ℓ_γ)", Ok(r));
    let morphism = fx.morphism.as_ref().map(|m| (&m.target, &m.map));
    let hopf = cw.hopf().clone();
    for h in cw.cotraces() {
        let hl = cotrace_label(&hopf, &h);
        for n in 0..=MAX_DEGREE {
            run.record(
                &format!("x_n(σℓ_γ) = x_n(σℓ) [h = {hl}, n = {n}]"),
                combined_check(&cw, &dg, &ds, &h, n, morphism),
            );
        }
    }
}

fn run_one<F: Field>(run: &mut Run<'_, F>, suite: &str) {
    match suite {
        "hopf-axioms" => hopf_axioms(run),
        "galois" => galois(run),
        "chern-weil" => chern_weil(run),
        "prop-deformation-hopf" => deformation_hopf(run),
        "thm-deformed-strong-conn-right" => strong_conn_right(run),
        "prop-pushforward" => pushforward(run),
        "naturality" => naturality(run),
        "prop-chw-deform-right" => chw_right(run),
        "prop-chw-deform-external" => chw_external(run),
        "combined" => combined(run),
        _ => unreachable!("suite names are validated"),
    }
}

/// Runs a named suite on an in-memory fixture. `"all"` runs every suite;
/// `"fixture"` runs the suites listed in the fixture's `checks`.
pub fn run_suite_on<F: Field>(fx: &Fixture<F>, suite: &str) -> Result<Report> {
    let names: Vec<String> = match suite {
        "all" => SUITES[..SUITES.len() - 1].iter().map(|s| s.to_string()).collect(),
        "fixture" => fx.checks.clone(),
        s => vec![s.to_string()],
    };
    for n in &names {
        if n == "all" || !SUITES.contains(&n.as_str()) {
            return Err(Error::Parse(format!("unknown suite {n:?}")));
        }
    }
    let mut checks = Vec::new();
    for name in &names {
        let mut run = Run {
            fx,
            prefix: name.clone(),
            checks: Vec::new(),
        };
        run_one(&mut run, name);
        checks.extend(run.checks);
    }
    Ok(Report {
        tool: TOOL.to_string(),
        fixture: fx.name.clone(),
        field: F::name(),
        suite: suite.to_string(),
        checks,
    })
}

pub fn run_suite(spec: &FixtureSpec, suite: &str) -> Result<Report> {
    crate::with_field!(spec.field_kind()?, F => run_suite_on(&build::<F>(spec)?, suite))
}

/// Output of `compute chw`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChwOutput {
    pub tool: String,
    pub fixture: String,
    pub degree: usize,
    pub cotrace: String,
    pub base_basis: Vec<String>,
    /// `x_i` for `i = 0, …, 2n`, written in the basis of `B`.
    pub x: Vec<String>,
    /// Column `p` of the total chain, i.e. `(−1)^⌊i/2⌋ i!/⌊i/2⌋! · x_i` with `i = 2n − p`.
    pub columns: BTreeMap<usize, String>,
    pub flags: BTreeMap<String, bool>,
    pub signed_rotation: Vec<bool>,
    /// `dim HC_{2n}(B)` by the bicomplex.
    pub hc_dim: usize,
}

impl ChwOutput {
    pub fn passed(&self) -> bool {
        self.flags.values().all(|&b| b)
    }
}

/// Resolves a basis label of `H`, or a comma-separated coefficient list.
pub fn parse_cotrace<F: Field>(h: &HopfAlgebra<F>, selector: &str) -> Result<SparseVec<F>> {
    if let Some(i) = h.space().labels().iter().position(|l| l == selector.trim()) {
        return Ok(h.basis(i));
    }
    let parts: Vec<&str> = selector.split(',').map(str::trim).collect();
    if parts.len() != h.dim() {
        return Err(Error::Parse(format!(
            "cotrace {selector:?} is neither a basis label nor {} coefficients",
            h.dim()
        )));
    }
    let mut v = SparseVec::zeros(h.dim());
    for (i, p) in parts.iter().enumerate() {
        v.add_term(i, F::parse(p)?);
    }
    Ok(v)
}

fn chw_on<F: Field>(fx: &Fixture<F>, selector: &str, n: usize) -> Result<ChwOutput> {
    let cw = context(fx)?;
    let h = parse_cotrace(cw.hopf(), selector)?;
    let r = cw.report(&h, n)?;
    let bs = &cw.coring.base.space;
    let chain_space = |i: usize| bs.power(i + 1);
    let x =
        r.x.iter()
            .enumerate()
            .map(|(i, v)| v.display_in(&chain_space(i)))
            .collect();
    let columns = r
        .representative
        .columns()
        .map(|(p, v)| (p, v.display_in(&chain_space(2 * n - p))))
        .collect();
    let hc_dim = cyclic_homology_dim(cw.base_algebra(), 2 * n, HomologyMode::Bicomplex)?;
    Ok(ChwOutput {
        tool: TOOL.to_string(),
        fixture: fx.name.clone(),
        degree: n,
        cotrace: h.display_in(cw.hopf().space()),
        base_basis: bs.labels(),
        x,
        columns,
        flags: r.flags,
        signed_rotation: r.signed_rotation,
        hc_dim,
    })
}

pub fn compute_chw(spec: &FixtureSpec, selector: &str, n: usize) -> Result<ChwOutput> {
    crate::with_field!(spec.field_kind()?, F => chw_on(&build::<F>(spec)?, selector, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyOutput {
    pub fixture: String,
    pub degree: usize,
    pub mode: String,
    pub base_dim: usize,
    pub dim: usize,
}

pub fn homology(spec: &FixtureSpec, n: usize, mode: HomologyMode) -> Result<HomologyOutput> {
    crate::with_field!(spec.field_kind()?, F => {
        let fx = build::<F>(spec)?;
        let b = crate::comod::coinvariants(&fx.algebra)?;
        Ok(HomologyOutput {
            fixture: fx.name.clone(),
            degree: n,
            mode: mode.name().to_string(),
            base_dim: b.dim(),
            dim: cyclic_homology_dim(&b.algebra, n, mode)?,
        })
    })
}

fn deform_on<F: Field>(fx: &Fixture<F>, cocycle: &str) -> Result<Fixture<F>> {
    let NamedCocycle { hopf, cocycle: c } = fx
        .cocycles
        .get(cocycle)
        .ok_or_else(|| Error::Parse(format!("fixture {} has no cocycle {cocycle:?}", fx.name)))?;
    let d = deform_hopf(c)?;
    let right = *hopf == fx.right_hopf;
    let deform = |a: &crate::comod::ComoduleAlgebra<F>| {
        if right {
            deform_comodule_algebra_right(a, &d)
        } else {
            deform_comodule_algebra_left(a, &d)
        }
    };
    let algebra = deform(&fx.algebra)?;
    let mut hopf_algebras = fx.hopf_algebras.clone();
    hopf_algebras.insert(hopf.clone(), Arc::clone(&d.result));
    let cleaving = match (&fx.cleaving, right) {
        (Some(c), true) => Some(deform_cleaving(c, &d)?),
        (Some(c), false) => crate::galois::CleavingMap::new(&algebra, c.phi.clone()).ok(),
        (None, _) => None,
    };
    let morphism = match &fx.morphism {
        None => None,
        Some(m) => Some(Morphism {
            target: deform(&m.target)?,
            map: m.map.clone(),
        }),
    };
    Ok(Fixture {
        name: format!("{}-{cocycle}", fx.name),
        hopf_algebras,
        right_hopf: fx.right_hopf.clone(),
        left_hopf: fx.left_hopf.clone(),
        algebra,
        cocycles: BTreeMap::new(),
        cleaving,
        morphism,
        checks: vec!["hopf-axioms".into(), "galois".into()],
    })
}

/// The fixture deformed by one of its cocycles, as a new canonical spec.
///
/// The cocycle's Hopf algebra is replaced by its deformation and the comodule
/// algebra (and morphism target) by the corresponding deformed product.
pub fn deform_spec(spec: &FixtureSpec, cocycle: &str) -> Result<FixtureSpec> {
    crate::with_field!(spec.field_kind()?, F => export(&deform_on(&build::<F>(spec)?, cocycle)?))
}
