//! Leg manipulations on vectors in tensor powers, addressed by flat row-major index.

use std::collections::BTreeMap;

use crate::linalg::{LinMap, SparseVec};
use crate::scalar::Field;

/// Replaces a contiguous block of legs.
///
/// `v` lives in `P ⊗ X ⊗ S` with `dim X = inner` and `dim S = suffix`; each
/// basis vector `x` of `X` is sent to `image(x)` in a space of dimension
/// `out_inner`. The result lives in `P ⊗ Y ⊗ S`.
pub fn map_block<F: Field, G>(
    v: &SparseVec<F>,
    inner: usize,
    suffix: usize,
    out_inner: usize,
    mut image: G,
) -> SparseVec<F>
where
    G: FnMut(usize) -> SparseVec<F>,
{
    let block = inner * suffix;
    assert!(block > 0 && v.dim().is_multiple_of(block), "map_block: shape");
    let prefix = v.dim() / block;
    let out_block = out_inner * suffix;
    let mut cache: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    let mut out = SparseVec::zeros(prefix * out_block);
    for (idx, c) in v.iter() {
        let p = idx / block;
        let x = (idx % block) / suffix;
        let s = idx % suffix;
        let img = cache.entry(x).or_insert_with(|| image(x));
        for (y, d) in img.iter() {
            out.add_term(p * out_block + y * suffix + s, c.clone() * d.clone());
        }
    }
    out
}

/// Applies `f` to legs `start..start + f_legs` of a vector whose legs have dimensions `dims`.
pub fn apply_to_legs<F: Field>(
    v: &SparseVec<F>,
    dims: &[usize],
    start: usize,
    count: usize,
    f: &LinMap<F>,
) -> SparseVec<F> {
    let inner: usize = dims[start..start + count].iter().product();
    let suffix: usize = dims[start + count..].iter().product();
    assert_eq!(inner, f.source().dim(), "apply_to_legs: block dimension");
    map_block(v, inner, suffix, f.target().dim(), |x| f.col(x).clone())
}

/// Moves the last leg (dimension `last`) to the front.
pub fn rotate_last_to_front<F: Field>(v: &SparseVec<F>, last: usize) -> SparseVec<F> {
    let rest = v.dim() / last;
    SparseVec::from_entries(
        v.dim(),
        v.iter().map(|(i, c)| ((i % last) * rest + i / last, c.clone())),
    )
}

/// Moves the first leg (dimension `first`) to the back.
pub fn rotate_first_to_back<F: Field>(v: &SparseVec<F>, first: usize) -> SparseVec<F> {
    let rest = v.dim() / first;
    SparseVec::from_entries(
        v.dim(),
        v.iter().map(|(i, c)| ((i % rest) * first + i / rest, c.clone())),
    )
}

/// Permutes legs: output leg `k` is input leg `perm[k]`.
pub fn permute_legs<F: Field>(v: &SparseVec<F>, dims: &[usize], perm: &[usize]) -> SparseVec<F> {
    assert_eq!(dims.len(), perm.len(), "permute_legs: arity");
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut digits = vec![0usize; dims.len()];
    SparseVec::from_entries(
        v.dim(),
        v.iter().map(|(mut i, c)| {
            for k in (0..dims.len()).rev() {
                digits[k] = i % dims[k];
                i /= dims[k];
            }
            let mut j = 0;
            for (k, &p) in perm.iter().enumerate() {
                j = j * out_dims[k] + digits[p];
            }
            (j, c.clone())
        }),
    )
}

/// Splits a flat index into its leg indices.
pub fn decode(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
    out
}

pub fn encode(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// Contracts the given legs with scalar functionals.
pub fn contract_leg<F: Field>(
    v: &SparseVec<F>,
    dims: &[usize],
    leg: usize,
    functional: &LinMap<F>,
) -> SparseVec<F> {
    assert_eq!(functional.target().dim(), 1, "contract_leg: functional");
    apply_to_legs(v, dims, leg, 1, functional)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::BasedSpace;
    use crate::scalar::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn rotations_are_inverse() {
        let dims = [2, 3, 4];
        let v = SparseVec::from_entries(24, (0..24).map(|i| (i, r(i as i64 + 1))));
        let w = rotate_last_to_front(&v, 4);
        assert_eq!(rotate_first_to_back(&w, 4), v);
        assert_eq!(w, permute_legs(&v, &dims, &[2, 0, 1]));
    }

    #[test]
    fn apply_to_middle_leg() {
        let s = BasedSpace::new(["a", "b"]).unwrap();
        let swap = LinMap::from_triples(s.clone(), s, [(0, 1, r(1)), (1, 0, r(1))]).unwrap();
        // a⊗a⊗b -> a⊗b⊗b
        let v = SparseVec::unit(8, encode(&[0, 0, 1], &[2, 2, 2]));
        let w = apply_to_legs(&v, &[2, 2, 2], 1, 1, &swap);
        assert_eq!(w, SparseVec::unit(8, encode(&[0, 1, 1], &[2, 2, 2])));
    }

    #[test]
    fn encode_decode_roundtrip() {
        let dims = [3, 1, 5, 2];
        for i in 0..30 {
            assert_eq!(encode(&decode(i, &dims), &dims), i);
        }
    }
}
