//! JSON fixture files.
//!
//! Structure constants are sparse, listed source index first, with exact
//! coefficients written as `"n"` or `"p/q"`:
//!
//! | key | entry | meaning |
//! |-----|-------|---------|
//! | `mult` | `[i, j, k, c]` | `e_i e_j` has coefficient `c` on `e_k` |
//! | `comult` | `[i, j, k, c]` | `Δ(e_i)` has coefficient `c` on `e_j⊗e_k` |
//! | `unit`, `counit` | `[i, c]` | coefficient of `e_i` in `1`, value `ε(e_i)` |
//! | `antipode`, `cleaving`, morphism `map` | `[i, j, c]` | `f(e_i)` has coefficient `c` on `e_j` |
//! | `right_coaction.map` | `[i, a, h, c]` | `ρ(e_i)` has coefficient `c` on `e_a⊗h` |
//! | `left_coaction.map` | `[i, k, a, c]` | `λ(e_i)` has coefficient `c` on `k⊗e_a` |
//! | cocycle `values` | `[i, j, c]` | `γ(e_i, e_j) = c` |
//!
//! A canonical file lists entries sorted, with nonzero coefficients in lowest
//! terms, and is printed by [`to_canonical_string`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::comod::{Coaction, ComoduleAlgebra};
use crate::error::{Error, Result};
use crate::fixtures::{Fixture, Morphism, NamedCocycle};
use crate::galois::CleavingMap;
use crate::hopf::{Algebra, HopfAlgebra};
use crate::linalg::tensor::decode;
use crate::linalg::{BasedSpace, LinMap, SparseVec, DIM_GUARDRAIL};
use crate::scalar::{Field, FieldKind};
use crate::twist::TwoCocycle;

pub type Entry1 = (usize, String);
pub type Entry2 = (usize, usize, String);
pub type Entry3 = (usize, usize, usize, String);

/// Largest basis accepted in a fixture file.
pub const MAX_SPEC_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSpec {
    pub basis: Vec<String>,
    pub mult: Vec<Entry3>,
    pub unit: Vec<Entry1>,
    pub comult: Vec<Entry3>,
    pub counit: Vec<Entry1>,
    pub antipode: Vec<Entry2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode_inv: Option<Vec<Entry2>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoactionSpec {
    pub hopf: String,
    pub map: Vec<Entry3>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub basis: Vec<String>,
    pub mult: Vec<Entry3>,
    pub unit: Vec<Entry1>,
    pub right_coaction: CoactionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_coaction: Option<CoactionSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub hopf: String,
    pub values: Vec<Entry2>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub target: AlgebraSpec,
    pub map: Vec<Entry2>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub name: String,
    pub field: String,
    pub hopf_algebras: BTreeMap<String, HopfSpec>,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cocycles: BTreeMap<String, CocycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cleaving: Option<Vec<Entry2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
    pub checks: Vec<String>,
}

impl FixtureSpec {
    pub fn field_kind(&self) -> Result<FieldKind> {
        FieldKind::parse(&self.field)
    }
}

/// Parses a fixture document without building it.
pub fn parse_spec(text: &str) -> Result<FixtureSpec> {
    Ok(serde_json::from_str(text)?)
}

/// Parses and fully validates a fixture document.
pub fn read_spec(text: &str) -> Result<FixtureSpec> {
    let spec = parse_spec(text)?;
    crate::with_field!(spec.field_kind()?, F => build::<F>(&spec).map(|_| ()))?;
    Ok(spec)
}

/// Reads, parses and fully validates a fixture file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<FixtureSpec> {
    read_spec(&std::fs::read_to_string(path)?)
}

pub fn save_spec(spec: &FixtureSpec, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_canonical_string(spec)?)?;
    Ok(())
}

/// Pretty JSON with every array of scalars kept on one line, and a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, 0, &mut out)?;
    out.push('\n');
    Ok(out)
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) -> Result<()> {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(item, depth + 1, out)?;
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(serde_json::to_string)
                .collect::<std::result::Result<_, _>>()?;
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(key)?);
                out.push_str(": ");
                write_value(item, depth + 1, out)?;
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        other => out.push_str(&serde_json::to_string(other)?),
    }
    Ok(())
}

// ---- building ----

fn coeff<F: Field>(s: &str) -> Result<F> {
    F::parse(s).map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
}

fn space(basis: &[String], what: &str) -> Result<BasedSpace> {
    if basis.is_empty() || basis.len() > MAX_SPEC_DIM {
        return Err(Error::Guardrail {
            what: format!("basis of {what}"),
            requested: basis.len(),
            limit: MAX_SPEC_DIM,
        });
    }
    BasedSpace::new(basis.iter().cloned())
}

fn check_index(i: usize, dim: usize, what: &str) -> Result<()> {
    if i >= dim {
        return Err(Error::Parse(format!("{what}: index {i} out of range 0..{dim}")));
    }
    Ok(())
}

fn vector<F: Field>(entries: &[Entry1], dim: usize, what: &str) -> Result<SparseVec<F>> {
    let mut v = SparseVec::zeros(dim);
    for (i, c) in entries {
        check_index(*i, dim, what)?;
        v.add_term(*i, coeff(c)?);
    }
    Ok(v)
}

fn map2<F: Field>(
    entries: &[Entry2],
    source: &BasedSpace,
    target: &BasedSpace,
    what: &str,
) -> Result<LinMap<F>> {
    let mut triples = Vec::with_capacity(entries.len());
    for (i, j, c) in entries {
        check_index(*i, source.dim(), what)?;
        check_index(*j, target.dim(), what)?;
        triples.push((*j, *i, coeff(c)?));
    }
    LinMap::from_triples(source.clone(), target.clone(), triples)
}

/// Entries `[i, j, k, c]` with `i` in `source` and `(j, k)` in `left⊗right`.
fn map3<F: Field>(
    entries: &[Entry3],
    source: &BasedSpace,
    left: &BasedSpace,
    right: &BasedSpace,
    what: &str,
) -> Result<LinMap<F>> {
    let target = left.tensor(right);
    let mut triples = Vec::with_capacity(entries.len());
    for (i, j, k, c) in entries {
        check_index(*i, source.dim(), what)?;
        check_index(*j, left.dim(), what)?;
        check_index(*k, right.dim(), what)?;
        triples.push((j * right.dim() + k, *i, coeff(c)?));
    }
    LinMap::from_triples(source.clone(), target, triples)
}

/// Multiplication entries `[i, j, k, c]` as a map `V⊗V → V`.
fn mult_map<F: Field>(entries: &[Entry3], s: &BasedSpace, what: &str) -> Result<LinMap<F>> {
    let n = s.dim();
    let mut triples = Vec::with_capacity(entries.len());
    for (i, j, k, c) in entries {
        check_index(*i, n, what)?;
        check_index(*j, n, what)?;
        check_index(*k, n, what)?;
        triples.push((*k, i * n + j, coeff(c)?));
    }
    LinMap::from_triples(s.tensor(s), s.clone(), triples)
}

fn build_hopf<F: Field>(name: &str, h: &HopfSpec) -> Result<HopfAlgebra<F>> {
    let s = space(&h.basis, name)?;
    let k = BasedSpace::scalar();
    let mult = mult_map(&h.mult, &s, name)?;
    let unit = vector(&h.unit, s.dim(), name)?;
    let comult = map3(&h.comult, &s, &s, &s, name)?;
    let counit_v: SparseVec<F> = vector(&h.counit, s.dim(), name)?;
    let counit = LinMap::from_fn(s.clone(), k, |i| {
        SparseVec::from_entries(1, [(0, counit_v.coeff(i))])
    })?;
    let antipode = map2(&h.antipode, &s, &s, name)?;
    let antipode_inv = h
        .antipode_inv
        .as_ref()
        .map(|e| map2(e, &s, &s, name))
        .transpose()?;
    HopfAlgebra::new_checked(s, mult, unit, comult, counit, antipode, antipode_inv)
}

fn resolve<'a, F>(
    hopfs: &'a BTreeMap<String, Arc<HopfAlgebra<F>>>,
    name: &str,
) -> Result<&'a Arc<HopfAlgebra<F>>> {
    hopfs
        .get(name)
        .ok_or_else(|| Error::Parse(format!("unknown Hopf algebra {name:?}")))
}

fn build_algebra<F: Field>(
    a: &AlgebraSpec,
    hopfs: &BTreeMap<String, Arc<HopfAlgebra<F>>>,
    what: &str,
) -> Result<ComoduleAlgebra<F>> {
    let s = space(&a.basis, what)?;
    let mult = mult_map(&a.mult, &s, what)?;
    let unit = vector(&a.unit, s.dim(), what)?;
    let algebra = Algebra::new(s.clone(), mult, Some(unit))?;
    let h = resolve(hopfs, &a.right_coaction.hopf)?;
    let rho = map3(&a.right_coaction.map, &s, &s, h.space(), what)?;
    let right = Coaction::right(h.clone(), rho)?;
    let left = match &a.left_coaction {
        None => None,
        Some(l) => {
            let k = resolve(hopfs, &l.hopf)?;
            let lambda = map3(&l.map, &s, k.space(), &s, what)?;
            Some(Coaction::left(k.clone(), lambda)?)
        }
    };
    ComoduleAlgebra::new_checked(algebra, Some(right), left)
}

/// Builds every object of the fixture and runs all axiom-level checks.
pub fn build<F: Field>(spec: &FixtureSpec) -> Result<Fixture<F>> {
    let kind = spec.field_kind()?;
    if kind != FieldKind::parse(&F::name())? {
        return Err(Error::Parse(format!(
            "fixture is over {}, requested {}",
            spec.field,
            F::name()
        )));
    }
    let mut hopfs = BTreeMap::new();
    for (name, h) in &spec.hopf_algebras {
        hopfs.insert(name.clone(), Arc::new(build_hopf::<F>(name, h)?));
    }
    let algebra = build_algebra(&spec.algebra, &hopfs, "algebra")?;
    let a2 = algebra.dim() * algebra.dim();
    if a2 * algebra.hopf()?.dim() > DIM_GUARDRAIL {
        return Err(Error::Guardrail {
            what: "strong-connection unknowns".into(),
            requested: a2 * algebra.hopf()?.dim(),
            limit: DIM_GUARDRAIL,
        });
    }
    let mut cocycles = BTreeMap::new();
    for (name, c) in &spec.cocycles {
        let h = resolve(&hopfs, &c.hopf)?;
        let n = h.dim();
        let mut values = vec![F::zero(); n * n];
        for (i, j, v) in &c.values {
            check_index(*i, n, name)?;
            check_index(*j, n, name)?;
            values[i * n + j] = coeff(v)?;
        }
        let cocycle = TwoCocycle::from_values(h.clone(), |i, j| values[i * n + j].clone())?;
        cocycles.insert(
            name.clone(),
            NamedCocycle {
                hopf: c.hopf.clone(),
                cocycle,
            },
        );
    }
    let h = algebra.hopf()?.clone();
    let cleaving = match &spec.cleaving {
        None => None,
        Some(e) => Some(CleavingMap::new(
            &algebra,
            map2(e, h.space(), algebra.space(), "cleaving")?,
        )?),
    };
    let morphism = match &spec.morphism {
        None => None,
        Some(m) => {
            let target = build_algebra(&m.target, &hopfs, "morphism target")?;
            let map = map2(&m.map, algebra.space(), target.space(), "morphism")?;
            Some(Morphism { target, map })
        }
    };
    let right_hopf = spec.algebra.right_coaction.hopf.clone();
    let left_hopf = spec.algebra.left_coaction.as_ref().map(|l| l.hopf.clone());
    Ok(Fixture {
        name: spec.name.clone(),
        hopf_algebras: hopfs,
        right_hopf,
        left_hopf,
        algebra,
        cocycles,
        cleaving,
        morphism,
        checks: spec.checks.clone(),
    })
}

// ---- export ----

fn entries1<F: Field>(v: &SparseVec<F>) -> Vec<Entry1> {
    v.iter().map(|(i, c)| (i, c.to_string())).collect()
}

fn entries2<F: Field>(f: &LinMap<F>) -> Vec<Entry2> {
    let mut out = Vec::new();
    for i in 0..f.source().dim() {
        for (j, c) in f.col(i).iter() {
            out.push((i, j, c.to_string()));
        }
    }
    out
}

/// Entries of a map into a two-leg space with leg dimensions `dims`.
fn entries3<F: Field>(f: &LinMap<F>, dims: [usize; 2]) -> Vec<Entry3> {
    let mut out = Vec::new();
    for i in 0..f.source().dim() {
        for (idx, c) in f.col(i).iter() {
            let d = decode(idx, &dims);
            out.push((i, d[0], d[1], c.to_string()));
        }
    }
    out
}

fn hopf_spec<F: Field>(h: &HopfAlgebra<F>) -> HopfSpec {
    let n = h.dim();
    let counit = (0..n)
        .map(|i| h.counit().entry(0, i))
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_string()))
        .collect();
    HopfSpec {
        basis: h.space().labels(),
        mult: mult_entries(h.mult(), n),
        unit: entries1(h.unit()),
        comult: entries3(h.comult(), [n, n]),
        counit,
        antipode: entries2(h.antipode()),
        antipode_inv: Some(entries2(h.antipode_inv())),
    }
}

fn mult_entries<F: Field>(m: &LinMap<F>, n: usize) -> Vec<Entry3> {
    let mut out: Vec<Entry3> = entries2(m)
        .into_iter()
        .map(|(ij, k, c)| (ij / n, ij % n, k, c))
        .collect();
    out.sort();
    out
}

fn hopf_name<F: Field>(fx: &Fixture<F>, h: &Arc<HopfAlgebra<F>>, fallback: &str) -> String {
    fx.hopf_algebras
        .iter()
        .find(|(_, x)| Arc::ptr_eq(x, h))
        .map(|(k, _)| k.clone())
        .unwrap_or_else(|| fallback.to_string())
}

fn algebra_spec<F: Field>(fx: &Fixture<F>, a: &ComoduleAlgebra<F>) -> Result<AlgebraSpec> {
    let n = a.dim();
    let rho = a.right()?;
    let right_coaction = CoactionSpec {
        hopf: hopf_name(fx, &rho.hopf, &fx.right_hopf),
        map: entries3(&rho.map, [n, rho.hopf.dim()]),
    };
    let left_coaction = a.left.as_ref().map(|l| CoactionSpec {
        hopf: hopf_name(fx, &l.hopf, fx.left_hopf.as_deref().unwrap_or("K")),
        map: entries3(&l.map, [l.hopf.dim(), n]),
    });
    Ok(AlgebraSpec {
        basis: a.space().labels(),
        mult: mult_entries(a.algebra.mult(), n),
        unit: entries1(a.unit()),
        right_coaction,
        left_coaction,
    })
}

/// The canonical file for an in-memory fixture.
pub fn export<F: Field>(fx: &Fixture<F>) -> Result<FixtureSpec> {
    let mut hopf_algebras = BTreeMap::new();
    for (name, h) in &fx.hopf_algebras {
        hopf_algebras.insert(name.clone(), hopf_spec(h));
    }
    let mut cocycles = BTreeMap::new();
    for (name, c) in &fx.cocycles {
        let n = c.cocycle.hopf.dim();
        let mut values = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = c.cocycle.value(i, j);
                if !v.is_zero() {
                    values.push((i, j, v.to_string()));
                }
            }
        }
        cocycles.insert(
            name.clone(),
            CocycleSpec {
                hopf: c.hopf.clone(),
                values,
            },
        );
    }
    let morphism = match &fx.morphism {
        None => None,
        Some(m) => Some(MorphismSpec {
            target: algebra_spec(fx, &m.target)?,
            map: entries2(&m.map),
        }),
    };
    Ok(FixtureSpec {
        name: fx.name.clone(),
        field: F::name(),
        hopf_algebras,
        algebra: algebra_spec(fx, &fx.algebra)?,
        cocycles,
        cleaving: fx.cleaving.as_ref().map(|c| entries2(&c.phi)),
        morphism,
        checks: fx.checks.clone(),
    })
}
