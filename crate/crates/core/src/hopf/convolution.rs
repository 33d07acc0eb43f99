use crate::error::{Error, Result};
use crate::hopf::{Algebra, Coalgebra};
use crate::linalg::{solve_affine, BasedSpace, LinMap, SparseVec};
use crate::scalar::Field;

fn check_conv_shape<F: Field>(f: &LinMap<F>, c: &Coalgebra<F>, a: &Algebra<F>) -> Result<()> {
    if f.source().dim() != c.dim() || f.target().dim() != a.dim() {
        return Err(Error::Shape(format!(
            "convolution map must go from dimension {} to {}",
            c.dim(),
            a.dim()
        )));
    }
    Ok(())
}

/// `f * g = μ∘(f⊗g)∘Δ`.
pub fn convolve<F: Field>(
    f: &LinMap<F>,
    g: &LinMap<F>,
    c: &Coalgebra<F>,
    a: &Algebra<F>,
) -> Result<LinMap<F>> {
    check_conv_shape(f, c, a)?;
    check_conv_shape(g, c, a)?;
    let n = c.dim();
    LinMap::from_fn(f.source().clone(), f.target().clone(), |k| {
        let mut out = SparseVec::zeros(a.dim());
        for (idx, x) in c.comult().col(k).iter() {
            let p = a.mul(f.col(idx / n), g.col(idx % n));
            out.add_scaled(&p, x);
        }
        out
    })
}

/// `η∘ε`, the unit of the convolution algebra.
pub fn convolution_unit<F: Field>(c: &Coalgebra<F>, a: &Algebra<F>) -> LinMap<F> {
    let one = a.unit().cloned().unwrap_or_else(|| SparseVec::zeros(a.dim()));
    LinMap::from_fn(c.space().clone(), a.space().clone(), |k| {
        one.scaled(&c.counit().col(k).coeff(0))
    })
    .expect("convolution unit")
}

/// Two-sided convolution inverse found by solving `f*g = g*f = η∘ε`.
///
/// Returns `Ok(None)` when no inverse exists.
pub fn convolution_inverse<F: Field>(
    f: &LinMap<F>,
    c: &Coalgebra<F>,
    a: &Algebra<F>,
) -> Result<Option<LinMap<F>>> {
    check_conv_shape(f, c, a)?;
    let (nc, na) = (c.dim(), a.dim());
    let one = a.unit_or_err()?.clone();
    // unknown g_{j,r} = coefficient of a_r in g(c_j), index j·na + r
    let unknowns = nc * na;
    let eqs = 2 * nc * na;
    let mut triples = Vec::new();
    for k in 0..nc {
        for (idx, x) in c.comult().col(k).iter() {
            let (i, j) = (idx / nc, idx % nc);
            for r in 0..na {
                let er = SparseVec::unit(na, r);
                // (f*g)(c_k): f(c_i)·a_r weighted by g_{j,r}
                for (t, y) in a.mul(f.col(i), &er).iter() {
                    triples.push((k * na + t, j * na + r, x.clone() * y.clone()));
                }
                // (g*f)(c_k): a_r·f(c_j) weighted by g_{i,r}
                for (t, y) in a.mul(&er, f.col(j)).iter() {
                    triples.push((nc * na + k * na + t, i * na + r, x.clone() * y.clone()));
                }
            }
        }
    }
    let system = LinMap::from_triples(
        BasedSpace::anonymous(unknowns),
        BasedSpace::anonymous(eqs),
        triples,
    )?;
    let mut rhs = SparseVec::zeros(eqs);
    for k in 0..nc {
        let e = c.counit().col(k).coeff(0);
        for (t, y) in one.iter() {
            rhs.add_term(k * na + t, e.clone() * y.clone());
            rhs.add_term(nc * na + k * na + t, e.clone() * y.clone());
        }
    }
    let Some(x) = solve_affine(&system, &rhs, &[])? else {
        return Ok(None);
    };
    let g = LinMap::from_fn(f.source().clone(), f.target().clone(), |j| {
        SparseVec::from_entries(na, (0..na).map(|r| (r, x.coeff(j * na + r))))
    })?;
    Ok(Some(g))
}
