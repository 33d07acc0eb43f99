use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{BasedSpace, LinMap, SparseVec};
use crate::scalar::Field;

/// Incrementally maintained reduced row echelon form.
///
/// Pivots are the first nonzero column of each row and every pivot column is
/// zero outside its row, so the final form depends only on the row space.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: HashMap<usize, usize>,
}

impl<F: Field> Rref<F> {
    pub fn new(ncols: usize) -> Self {
        Rref {
            ncols,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn from_rows<'a>(ncols: usize, rows: impl IntoIterator<Item = &'a SparseVec<F>>) -> Self {
        let mut r = Rref::new(ncols);
        for v in rows {
            r.insert(v);
        }
        r
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let hits: Vec<(usize, F)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row.get(&c).map(|&r| (r, x.clone())))
            .collect();
        let mut out = v.clone();
        for (r, x) in hits {
            out.add_scaled(&self.rows[r], &-x);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        assert_eq!(v.dim(), self.ncols, "row length");
        let w = self.reduce(v);
        let Some((p, lead)) = w.first() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero leading entry");
        let w = w.scaled(&inv);
        for row in &mut self.rows {
            if let Some(x) = row.get(p).cloned() {
                row.add_scaled(&w, &-x);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(w);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot_row.keys().copied().collect();
        p.sort_unstable();
        p
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row.contains_key(&c)
    }

    pub fn row_for_pivot(&self, c: usize) -> Option<&SparseVec<F>> {
        self.pivot_row.get(&c).map(|&r| &self.rows[r])
    }

    /// Rows ordered by pivot column.
    pub fn rows(&self) -> Vec<SparseVec<F>> {
        self.pivots()
            .into_iter()
            .map(|p| self.rows[self.pivot_row[&p]].clone())
            .collect()
    }

    /// Basis of the null space of the row space, one vector per free column.
    pub fn null_space(&self) -> Vec<SparseVec<F>> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.is_pivot(f) {
                continue;
            }
            let mut x = SparseVec::unit(self.ncols, f);
            for (p, &r) in &self.pivot_row {
                if let Some(c) = self.rows[r].get(f) {
                    x.add_term(*p, -c.clone());
                }
            }
            out.push(x);
        }
        out
    }
}

pub fn kernel<F: Field>(f: &LinMap<F>) -> Vec<SparseVec<F>> {
    let rows = f.rows();
    Rref::from_rows(f.source().dim(), &rows).null_space()
}

pub fn image<F: Field>(f: &LinMap<F>) -> Vec<SparseVec<F>> {
    Rref::from_rows(f.target().dim(), f.cols()).rows()
}

pub fn rank<F: Field>(f: &LinMap<F>) -> usize {
    Rref::from_rows(f.target().dim(), f.cols()).rank()
}

/// A subspace with an echelon basis and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subspace<F> {
    ambient: BasedSpace,
    basis: Vec<SparseVec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn spanned_by(ambient: &BasedSpace, vectors: &[SparseVec<F>]) -> Result<Self> {
        for v in vectors {
            if v.dim() != ambient.dim() {
                return Err(Error::dims("subspace generator", ambient.dim(), v.dim()));
            }
        }
        let rref = Rref::from_rows(ambient.dim(), vectors);
        Ok(Subspace {
            ambient: ambient.clone(),
            basis: rref.rows(),
            pivots: rref.pivots(),
        })
    }

    pub fn kernel_of(f: &LinMap<F>) -> Self {
        let k = kernel(f);
        Self::spanned_by(f.source(), &k).expect("kernel vectors live in the source")
    }

    pub fn ambient(&self) -> &BasedSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.basis
    }

    /// Coordinates in the echelon basis, or `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        let c = SparseVec::from_entries(
            self.dim(),
            self.pivots.iter().enumerate().map(|(k, p)| (k, v.coeff(*p))),
        );
        if self.combine(&c) == *v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.coords(v).is_some()
    }

    pub fn combine(&self, c: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zeros(self.ambient.dim());
        for (k, x) in c.iter() {
            out.add_scaled(&self.basis[k], x);
        }
        out
    }

    /// Labels of the echelon basis vectors written in the ambient basis.
    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|b| b.display_in(&self.ambient)).collect()
    }

    pub fn inclusion(&self, source: &BasedSpace) -> Result<LinMap<F>> {
        LinMap::new(source.clone(), self.ambient.clone(), self.basis.clone())
    }

    /// Map `ambient → subspace` reading coordinates at the pivots; a left inverse of the inclusion.
    pub fn pivot_projection(&self, target: &BasedSpace) -> Result<LinMap<F>> {
        let triples = self.pivots.iter().enumerate().map(|(k, p)| (k, *p, F::one()));
        LinMap::from_triples(self.ambient.clone(), target.clone(), triples)
    }
}

/// Quotient `V/W` with basis the non-pivot labels of `V`.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    pub space: BasedSpace,
    pub projection: LinMap<F>,
    pub section: LinMap<F>,
}

pub fn quotient<F: Field>(space: &BasedSpace, subspace: &[SparseVec<F>]) -> Result<Quotient<F>> {
    let n = space.dim();
    for v in subspace {
        if v.dim() != n {
            return Err(Error::dims("quotient relation", n, v.dim()));
        }
    }
    let rref = Rref::from_rows(n, subspace);
    let kept: Vec<usize> = (0..n).filter(|c| !rref.is_pivot(*c)).collect();
    let mut pos = vec![usize::MAX; n];
    for (q, &j) in kept.iter().enumerate() {
        pos[j] = q;
    }
    let qspace = if kept.len() == n {
        space.clone()
    } else {
        BasedSpace::new(kept.iter().map(|&j| space.label(j)))?
    };
    let m = kept.len();
    let proj_cols = (0..n)
        .map(|j| {
            if pos[j] != usize::MAX {
                SparseVec::unit(m, pos[j])
            } else {
                let row = rref.row_for_pivot(j).expect("pivot row");
                SparseVec::from_entries(
                    m,
                    row.iter()
                        .filter(|(k, _)| *k != j)
                        .map(|(k, c)| (pos[k], -c.clone())),
                )
            }
        })
        .collect();
    let projection = LinMap::new(space.clone(), qspace.clone(), proj_cols)?;
    let section = LinMap::new(
        qspace.clone(),
        space.clone(),
        kept.iter().map(|&j| SparseVec::unit(n, j)).collect(),
    )?;
    Ok(Quotient {
        space: qspace,
        projection,
        section,
    })
}

/// Solves `f(x) = y` with `g(x) = 0` for every constraint `g`.
///
/// Free variables are set to zero, so the answer is determined by the
/// system alone. Returns `Ok(None)` when the system is inconsistent.
pub fn solve_affine<F: Field>(
    f: &LinMap<F>,
    y: &SparseVec<F>,
    constraints: &[LinMap<F>],
) -> Result<Option<SparseVec<F>>> {
    let n = f.source().dim();
    if y.dim() != f.target().dim() {
        return Err(Error::dims(
            "solve_affine right-hand side",
            f.target().dim(),
            y.dim(),
        ));
    }
    for g in constraints {
        if g.source().dim() != n {
            return Err(Error::dims("solve_affine constraint", n, g.source().dim()));
        }
    }
    let mut rref = Rref::new(n + 1);
    let mut push = |row: &SparseVec<F>, rhs: F| {
        let mut aug = SparseVec::from_sorted_unchecked(n + 1, row.clone().into_entries());
        aug.add_term(n, rhs);
        rref.insert(&aug);
    };
    for (i, row) in f.rows().iter().enumerate() {
        push(row, y.coeff(i));
    }
    for g in constraints {
        for row in g.rows() {
            push(&row, F::zero());
        }
    }
    if rref.is_pivot(n) {
        return Ok(None);
    }
    let x = SparseVec::from_entries(
        n,
        rref.pivots()
            .into_iter()
            .map(|p| (p, rref.row_for_pivot(p).expect("pivot").coeff(n))),
    );
    Ok(Some(x))
}

/// Inverse of a square map, `None` when singular.
pub fn invert<F: Field>(f: &LinMap<F>) -> Result<Option<LinMap<F>>> {
    let n = f.source().dim();
    if f.target().dim() != n {
        return Err(Error::dims("invert: square matrix", n, f.target().dim()));
    }
    let mut rref = Rref::new(2 * n);
    for (i, row) in f.rows().into_iter().enumerate() {
        let mut aug = SparseVec::from_sorted_unchecked(2 * n, row.into_entries());
        aug.add_term(n + i, F::one());
        rref.insert(&aug);
    }
    if (0..n).any(|c| !rref.is_pivot(c)) {
        return Ok(None);
    }
    let mut triples = Vec::new();
    for p in 0..n {
        let row = rref.row_for_pivot(p).expect("pivot");
        for (c, x) in row.iter() {
            if c >= n {
                triples.push((p, c - n, x.clone()));
            }
        }
    }
    Ok(Some(LinMap::from_triples(
        f.target().clone(),
        f.source().clone(),
        triples,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn space(n: usize) -> BasedSpace {
        BasedSpace::new((0..n).map(|i| format!("e{i}"))).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> LinMap<Rational> {
        let m = rows.len();
        let n = rows[0].len();
        let mut t = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.push((i, j, r(*x)));
            }
        }
        LinMap::from_triples(space(n), space(m), t).unwrap()
    }

    #[test]
    fn kernel_and_image_of_rank_one() {
        let f = mat(&[&[1, 2], &[2, 4]]);
        let k = kernel(&f);
        assert_eq!(k, vec![SparseVec::from_dense(&[r(-2), r(1)])]);
        assert_eq!(image(&f), vec![SparseVec::from_dense(&[r(1), r(2)])]);
        assert!(f.apply(&k[0]).is_zero());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let s = space(3);
        let q = quotient::<Rational>(&s, &[]).unwrap();
        assert_eq!(q.projection, LinMap::identity(&s));
    }

    #[test]
    fn quotient_by_difference() {
        let s = space(2);
        let q = quotient(&s, &[SparseVec::from_dense(&[r(1), r(-1)])]).unwrap();
        assert_eq!(q.space.labels(), ["e1"]);
        assert_eq!(q.projection.apply(&SparseVec::unit(2, 0)), SparseVec::unit(1, 0));
        let back = q.projection.compose(&q.section).unwrap();
        assert_eq!(back, LinMap::identity(&q.space));
    }

    #[test]
    fn solve_identity() {
        let f = mat(&[&[1, 0], &[0, 1]]);
        let y = SparseVec::unit(2, 0);
        assert_eq!(solve_affine(&f, &y, &[]).unwrap(), Some(y));
    }

    #[test]
    fn solve_inconsistent() {
        let f = LinMap::<Rational>::zero(&space(2), &space(2));
        assert_eq!(solve_affine(&f, &SparseVec::unit(2, 1), &[]).unwrap(), None);
    }

    #[test]
    fn solve_free_variable_zero() {
        // x0 + x1 = 3: pivot x0, free x1 = 0
        let f = mat(&[&[1, 1]]);
        let y = SparseVec::from_dense(&[r(3)]);
        let x = solve_affine(&f, &y, &[]).unwrap().unwrap();
        assert_eq!(x, SparseVec::from_dense(&[r(3), r(0)]));
        // with the constraint x0 - x1 = 0
        let g = mat(&[&[1, -1]]);
        let x = solve_affine(&f, &y, &[g]).unwrap().unwrap();
        assert_eq!(x.to_dense(), vec![Rational::parse("3/2").unwrap(); 2]);
    }

    #[test]
    fn invert_square() {
        let f = mat(&[&[2, 1], &[1, 1]]);
        let g = invert(&f).unwrap().unwrap();
        assert!(f.compose(&g).unwrap().same_matrix(&LinMap::identity(&space(2))));
        assert!(invert(&mat(&[&[1, 1], &[1, 1]])).unwrap().is_none());
    }

    #[test]
    fn subspace_coordinates() {
        let s = space(3);
        let w = Subspace::spanned_by(
            &s,
            &[
                SparseVec::from_dense(&[r(1), r(1), r(0)]),
                SparseVec::from_dense(&[r(0), r(0), r(2)]),
            ],
        )
        .unwrap();
        let v = SparseVec::from_dense(&[r(3), r(3), r(1)]);
        assert_eq!(w.coords(&v).unwrap().to_dense(), vec![r(3), r(1)]);
        assert!(w.coords(&SparseVec::unit(3, 0)).is_none());
    }
}
