//! The coring `M = A□^H A`, the chains `c_n`, `x_n`, the Chern-Weil cycle and
//! its behavior under pushforward and cocycle deformations.
//!
//! Chains over `M` are stored in the ambient `(A⊗A)^{⊗(n+1)}`. The product
//! `m·m′ = ε̄(m)m′` is extended to all of `A⊗A` by `(x⊗y)(x′⊗y′) = xyx′⊗y′`,
//! which is associative, so the cyclic operators of [`crate::cyclic`] apply
//! unchanged; membership in `M^{⊗(n+1)}` is checked separately.

use std::collections::BTreeMap;

use crate::comod::{cotensor, cotensor_defect, Coinvariants, ComoduleAlgebra};
use crate::cyclic::{
    apply_boundary, apply_cyclic, apply_face, apply_norm, apply_one_minus_t, apply_rotation, apply_truncated,
    chern_coefficient, same_class, total_differential, CyclicClass, TotalChain,
};
use crate::error::{Error, Result};
use crate::galois::{canonical_map, CleavingMap, GaloisExtension, StrongConnection};
use crate::hopf::{Algebra, HopfAlgebra};
use crate::linalg::tensor::{apply_to_legs, decode, rotate_last_to_front};
use crate::linalg::{quotient, LinMap, Quotient, SparseVec, Subspace, DIM_GUARDRAIL};
use crate::report::CheckReport;
use crate::scalar::Field;
use crate::twist::{
    deform_comodule_algebra_left, deform_comodule_algebra_right, deform_connection_both,
    deform_connection_left, deform_connection_right, DeformedHopf, TwoCocycle,
};

/// Largest flat index of an ambient chain `(A⊗A)^{⊗k}` the module will address.
pub const AMBIENT_INDEX_LIMIT: usize = 1 << 24;

/// Applies `f` to each of `legs` consecutive legs of dimension `f.source().dim()`.
fn apply_each_leg<F: Field>(v: &SparseVec<F>, legs: usize, f: &LinMap<F>) -> SparseVec<F> {
    let (din, dout) = (f.source().dim(), f.target().dim());
    let mut out = v.clone();
    for k in (0..legs).rev() {
        let mut dims = vec![din; k + 1];
        dims.extend(std::iter::repeat_n(dout, legs - k - 1));
        out = apply_to_legs(&out, &dims, k, 1, f);
    }
    out
}

/// The coring `M` with its counit and the ambient product on `A⊗A`.
#[derive(Clone, Debug)]
pub struct CoringM<F> {
    /// `A⊗A` with `(x⊗y)(x′⊗y′) = xyx′⊗y′`; no unit.
    pub ambient: Algebra<F>,
    /// `A□^H A` inside `A⊗A`.
    pub carrier: Subspace<F>,
    /// `ρ⊗id − id⊗λ`, whose kernel is the carrier.
    pub defect: LinMap<F>,
    /// `ε̄(a⊗ã) = aã` as a map `A⊗A → A`.
    pub counit: LinMap<F>,
    pub base: Coinvariants<F>,
}

/// Builds `M` and checks that `ε̄(M) ⊆ B`, that `M` is closed under the
/// product and that the product is associative on `M`.
pub fn build_coring<F: Field>(g: &GaloisExtension<F>) -> Result<CoringM<F>> {
    let a = &g.algebra.algebra;
    let n = a.dim();
    let rho = g.algebra.right()?;
    let lambda = rho.induced_left()?;
    let carrier = cotensor(rho, &lambda)?;
    let defect = cotensor_defect(rho, &lambda)?;
    let aa = a.space().tensor(a.space());
    let ambient = Algebra::from_products(aa, None, |i, j| {
        let (x, y) = (i / n, i % n);
        let (x2, y2) = (j / n, j % n);
        let xyx = a.mul(a.mul_basis(x, y), &SparseVec::unit(n, x2));
        xyx.kron(&SparseVec::unit(n, y2))
    })?;
    let counit = a.mult().clone();
    let coring = CoringM {
        ambient,
        carrier,
        defect,
        counit,
        base: g.base.clone(),
    };
    for (k, m) in coring.carrier.basis().iter().enumerate() {
        if coring.base.coords(&coring.counit.apply(m)).is_none() {
            return Err(Error::Falsification(format!(
                "ε̄ of M-basis vector {k} is not in B"
            )));
        }
    }
    let basis = coring.carrier.basis();
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let xy = coring.ambient.mul(x, y);
            if !coring.carrier.contains(&xy) {
                return Err(Error::Falsification(format!("M is not closed: m{i}·m{j}")));
            }
            for z in basis {
                if coring.ambient.mul(&xy, z) != coring.ambient.mul(x, &coring.ambient.mul(y, z)) {
                    return Err(Error::Falsification(format!(
                        "M product not associative at m{i}, m{j}"
                    )));
                }
            }
        }
    }
    Ok(coring)
}

impl<F: Field> CoringM<F> {
    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// Dimension of one ambient leg, `(dim A)²`.
    pub fn leg(&self) -> usize {
        self.ambient.dim()
    }

    /// `None` if every factor of the degree-`n` chain lies in `M`, else the first offending factor.
    pub fn membership_defect(&self, c: &SparseVec<F>, n: usize) -> Option<usize> {
        let dims = vec![self.leg(); n + 1];
        (0..=n).find(|&k| !apply_to_legs(c, &dims, k, 1, &self.defect).is_zero())
    }

    /// `ε̄^{⊗(n+1)}`, landing in `A^{⊗(n+1)}`.
    pub fn counit_chain(&self, c: &SparseVec<F>, n: usize) -> SparseVec<F> {
        apply_each_leg(c, n + 1, &self.counit)
    }

    /// Rewrites an element of `A^{⊗(n+1)}` in `B`-coordinates, failing if it is not in `B^{⊗(n+1)}`.
    pub fn to_base(&self, x: &SparseVec<F>, n: usize) -> Result<SparseVec<F>> {
        let proj = self.base.pivot_projection();
        let xb = apply_each_leg(x, n + 1, &proj);
        if apply_each_leg(&xb, n + 1, &self.base.inclusion) != *x {
            return Err(Error::Falsification(format!(
                "x_{n} does not lie in B^⊗{}",
                n + 1
            )));
        }
        Ok(xb)
    }

    /// Back from `B`-coordinates to `A^{⊗(n+1)}`.
    pub fn from_base(&self, x: &SparseVec<F>, n: usize) -> SparseVec<F> {
        apply_each_leg(x, n + 1, &self.base.inclusion)
    }

    fn check_index(&self, legs: usize) -> Result<()> {
        let total = (0..legs).try_fold(1usize, |acc, _| acc.checked_mul(self.leg()));
        match total {
            Some(t) if t <= AMBIENT_INDEX_LIMIT => Ok(()),
            t => Err(Error::Guardrail {
                what: format!("ambient chain with {legs} factors"),
                requested: t.unwrap_or(usize::MAX),
                limit: AMBIENT_INDEX_LIMIT,
            }),
        }
    }
}

/// `ℓ(h₍₁₎)⊗…⊗ℓ(h₍ₙ₊₁₎)` with the last `A`-leg moved to the front, so that
/// factor `j` is `h₍ⱼ₋₁₎^⟨2⟩⊗h₍ⱼ₎^⟨1⟩` and factor 0 is `h₍ₙ₊₁₎^⟨2⟩⊗h₍₁₎^⟨1⟩`.
fn connection_chain<F: Field>(
    hopf: &HopfAlgebra<F>,
    ell: &LinMap<F>,
    h: &SparseVec<F>,
    n: usize,
) -> SparseVec<F> {
    let legs = n + 1;
    let d = hopf.iterated_comult(h, legs);
    let v = apply_each_leg(&d, legs, ell);
    let a = (ell.target().dim() as f64).sqrt().round() as usize;
    debug_assert_eq!(a * a, ell.target().dim());
    rotate_last_to_front(&v, a)
}

fn require_cotrace<F: Field>(hopf: &HopfAlgebra<F>, h: &SparseVec<F>) -> Result<()> {
    if h.dim() != hopf.dim() {
        return Err(Error::dims("cotrace", hopf.dim(), h.dim()));
    }
    if !hopf.is_cotrace(h) {
        return Err(Error::NotCotrace(format!(
            "{} has non-symmetric coproduct",
            h.display_in(hopf.space())
        )));
    }
    Ok(())
}

/// Outcome of the two cyclic identities for a degree `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChernIdentities {
    /// `d(2c_{2n}) = (1−t)c_{2n−1}`.
    pub first: bool,
    /// `d′((2n−1)c_{2n−1}) = N c_{2n−2}`.
    pub second: bool,
    /// The second identity with coefficient `n` in place of `2n−1`.
    pub second_printed: bool,
}

/// A principal comodule algebra with a verified strong connection and its coring.
#[derive(Clone, Debug)]
pub struct ChernWeil<F> {
    pub galois: GaloisExtension<F>,
    pub coring: CoringM<F>,
    pub ell: StrongConnection<F>,
}

impl<F: Field> ChernWeil<F> {
    pub fn new(galois: GaloisExtension<F>, ell: StrongConnection<F>) -> Result<Self> {
        galois.verify_strong_connection(&ell.ell)?.into_result()?;
        let coring = build_coring(&galois)?;
        Ok(ChernWeil { galois, coring, ell })
    }

    /// Solves for a strong connection when none is supplied.
    pub fn from_extension(galois: GaloisExtension<F>) -> Result<Self> {
        let ell = galois.solve_strong_connection()?;
        Self::new(galois, ell)
    }

    pub fn hopf(&self) -> &HopfAlgebra<F> {
        self.galois.hopf()
    }

    pub fn base_algebra(&self) -> &Algebra<F> {
        &self.coring.base.algebra
    }

    pub fn cotraces(&self) -> Vec<SparseVec<F>> {
        self.hopf().cotrace_space()
    }

    /// `c_n(ℓ)(h)`; `h` must be a cotrace and the result is checked to lie in `M^{⊗(n+1)}`.
    pub fn c_n(&self, h: &SparseVec<F>, n: usize) -> Result<SparseVec<F>> {
        require_cotrace(self.hopf(), h)?;
        self.coring.check_index(n + 1)?;
        let c = connection_chain(self.hopf(), &self.ell.ell, h, n);
        if let Some(k) = self.coring.membership_defect(&c, n) {
            return Err(Error::Falsification(format!("factor {k} of c_{n} is not in M")));
        }
        Ok(c)
    }

    /// `d_i c_n(ℓ)(h) = c_{n−1}(ℓ)(h)` for every `0 ≤ i ≤ n`.
    pub fn face_compat_check(&self, h: &SparseVec<F>, n: usize) -> Result<CheckReport> {
        let mut report = CheckReport::new();
        if n == 0 {
            return Ok(report);
        }
        let c = self.c_n(h, n)?;
        let below = self.c_n(h, n - 1)?;
        for i in 0..=n {
            if apply_face(&self.coring.ambient, n, i, &c) != below {
                report.fail("d_i c_n = c_{n−1}", format!("fails for i = {i}, n = {n}"));
            }
        }
        Ok(report)
    }

    /// Plain and signed rotation invariance of `c_n(ℓ)(h)`.
    pub fn rotation_invariance(&self, h: &SparseVec<F>, n: usize) -> Result<(bool, bool)> {
        let c = self.c_n(h, n)?;
        let amb = &self.coring.ambient;
        Ok((apply_rotation(amb, n, &c) == c, apply_cyclic(amb, n, &c) == c))
    }

    /// The two identities that make the Chern-Weil chain a cycle, for `n ≥ 1`.
    pub fn chern_identities(&self, h: &SparseVec<F>, n: usize) -> Result<ChernIdentities> {
        if n == 0 {
            return Err(Error::Shape("the cycle identities need n ≥ 1".into()));
        }
        let amb = &self.coring.ambient;
        let top = self.c_n(h, 2 * n)?;
        let mid = self.c_n(h, 2 * n - 1)?;
        let low = self.c_n(h, 2 * n - 2)?;
        let two = F::from_i64(2);
        let first = apply_boundary(amb, 2 * n, &top.scaled(&two)) == apply_one_minus_t(amb, 2 * n - 1, &mid);
        let rhs = apply_norm(amb, 2 * n - 2, &low);
        let second = apply_truncated(amb, 2 * n - 1, &mid.scaled(&F::from_i64(2 * n as i64 - 1))) == rhs;
        let second_printed = apply_truncated(amb, 2 * n - 1, &mid.scaled(&F::from_i64(n as i64))) == rhs;
        Ok(ChernIdentities {
            first,
            second,
            second_printed,
        })
    }

    fn cycle_over_m(&self, h: &SparseVec<F>, n: usize) -> Result<TotalChain<F>> {
        let mut chain = TotalChain::zero(2 * n);
        for i in 0..=2 * n {
            let c = self.c_n(h, i)?;
            chain.add_to(2 * n - i, &c.scaled(&chern_coefficient(i)));
        }
        Ok(chain)
    }

    /// `chw̃_n(ℓ)(h)` in the total complex over `M`, with `D = 0` verified.
    pub fn chw_cycle(&self, h: &SparseVec<F>, n: usize) -> Result<TotalChain<F>> {
        let chain = self.cycle_over_m(h, n)?;
        if !total_differential(&self.coring.ambient, &chain).is_zero() {
            return Err(Error::Falsification(format!("D(chw̃_{n}) ≠ 0")));
        }
        Ok(chain)
    }

    /// `x_n(ℓ, h) = ε̄^{⊗(n+1)} c_n(ℓ)(h)` in `A^{⊗(n+1)}`.
    pub fn x_n_ambient(&self, h: &SparseVec<F>, n: usize) -> Result<SparseVec<F>> {
        Ok(self.coring.counit_chain(&self.c_n(h, n)?, n))
    }

    /// `x_n(ℓ, h)` in `B`-coordinates.
    pub fn x_n(&self, h: &SparseVec<F>, n: usize) -> Result<SparseVec<F>> {
        self.coring.to_base(&self.x_n_ambient(h, n)?, n)
    }

    fn guard_degree(&self, n: usize) -> Result<()> {
        let b = self.coring.base.dim();
        let requested = u32::try_from(2 * n + 1).ok().and_then(|e| b.checked_pow(e));
        match requested {
            Some(r) if r <= DIM_GUARDRAIL => self.coring.check_index(2 * n + 1),
            r => Err(Error::Guardrail {
                what: format!("chw_{n} over B"),
                requested: r.unwrap_or(usize::MAX),
                limit: DIM_GUARDRAIL,
            }),
        }
    }

    /// `chw_n(ℓ)(h)` as a class in `HC_{2n}(B)`; `D = 0` is re-verified over `B`.
    pub fn chw(&self, h: &SparseVec<F>, n: usize) -> Result<CyclicClass<F>> {
        self.guard_degree(n)?;
        let mut chain = TotalChain::zero(2 * n);
        for i in 0..=2 * n {
            chain.add_to(2 * n - i, &self.x_n(h, i)?.scaled(&chern_coefficient(i)));
        }
        CyclicClass::new(self.base_algebra(), chain)
    }

    /// Every chain-level quantity for `(h, n)` with its verification flags.
    pub fn report(&self, h: &SparseVec<F>, n: usize) -> Result<ChernWeilReport<F>> {
        self.guard_degree(n)?;
        require_cotrace(self.hopf(), h)?;
        let amb = &self.coring.ambient;
        let cs: Vec<SparseVec<F>> = (0..=2 * n)
            .map(|i| connection_chain(self.hopf(), &self.ell.ell, h, i))
            .collect();
        let member = cs
            .iter()
            .enumerate()
            .all(|(i, c)| self.coring.membership_defect(c, i).is_none());
        let unsigned = cs
            .iter()
            .enumerate()
            .all(|(i, c)| apply_rotation(amb, i, c) == *c);
        let signed = cs
            .iter()
            .enumerate()
            .map(|(i, c)| apply_cyclic(amb, i, c) == *c)
            .collect();
        let faces = (1..cs.len()).all(|i| (0..=i).all(|k| apply_face(amb, i, k, &cs[i]) == cs[i - 1]));
        let mut over_m = TotalChain::zero(2 * n);
        let mut chain = TotalChain::zero(2 * n);
        let mut x = Vec::with_capacity(cs.len());
        for (i, c) in cs.iter().enumerate() {
            let k = chern_coefficient::<F>(i);
            over_m.add_to(2 * n - i, &c.scaled(&k));
            let xi = self.coring.to_base(&self.coring.counit_chain(c, i), i)?;
            chain.add_to(2 * n - i, &xi.scaled(&k));
            x.push(xi);
        }
        let mut flags = BTreeMap::new();
        flags.insert("c_n ∈ M^⊗(n+1)".to_string(), member);
        flags.insert("d_i c_n = c_{n−1}".to_string(), faces);
        flags.insert("unsigned rotation invariance".to_string(), unsigned);
        flags.insert(
            "D(chw̃) = 0".to_string(),
            total_differential(amb, &over_m).is_zero(),
        );
        flags.insert(
            "D(chw) = 0".to_string(),
            total_differential(self.base_algebra(), &chain).is_zero(),
        );
        Ok(ChernWeilReport {
            degree: n,
            cotrace: h.clone(),
            x,
            representative: chain,
            flags,
            signed_rotation: signed,
        })
    }
}

/// Chain-level data of one Chern-Weil evaluation.
#[derive(Clone, Debug)]
pub struct ChernWeilReport<F> {
    pub degree: usize,
    pub cotrace: SparseVec<F>,
    /// `x_i(ℓ, h)` in `B`-coordinates for `i = 0, …, 2n`.
    pub x: Vec<SparseVec<F>>,
    pub representative: TotalChain<F>,
    pub flags: BTreeMap<String, bool>,
    /// Whether the signed `t_i` fixes `c_i`, recorded per degree and not required.
    pub signed_rotation: Vec<bool>,
}

impl<F: Field> ChernWeilReport<F> {
    pub fn accepted(&self) -> bool {
        self.flags.values().all(|&b| b)
    }
}

// ---- morphisms and pushforward ----

/// Colinearity (both sides when present), unitality and multiplicativity of `f: A → Ā`.
pub fn check_morphism<F: Field>(
    a: &ComoduleAlgebra<F>,
    abar: &ComoduleAlgebra<F>,
    f: &LinMap<F>,
) -> Result<CheckReport> {
    if f.source().dim() != a.dim() || f.target().dim() != abar.dim() {
        return Err(Error::Shape(format!(
            "morphism must map dimension {} to {}",
            a.dim(),
            abar.dim()
        )));
    }
    let mut report = CheckReport::new();
    let (rho, rhobar) = (a.right()?, abar.right()?);
    let h = rho.hopf.dim();
    for i in 0..a.dim() {
        let lhs = rhobar.map.apply(f.col(i));
        let rhs = apply_to_legs(rho.map.col(i), &[a.dim(), h], 0, 1, f);
        if lhs != rhs {
            report.fail("colinearity", format!("ρ̄∘f ≠ (f⊗id)∘ρ at {}", a.space().label(i)));
            break;
        }
    }
    if let (Some(l), Some(lbar)) = (&a.left, &abar.left) {
        let k = l.hopf.dim();
        for i in 0..a.dim() {
            let lhs = lbar.map.apply(f.col(i));
            let rhs = apply_to_legs(l.map.col(i), &[k, a.dim()], 1, 1, f);
            if lhs != rhs {
                report.fail(
                    "left colinearity",
                    format!("λ̄∘f ≠ (id⊗f)∘λ at {}", a.space().label(i)),
                );
                break;
            }
        }
    }
    if let Some(w) = a.algebra.check_algebra_map(&abar.algebra, f) {
        let eq = if w.starts_with("unitality") {
            "unitality"
        } else {
            "multiplicativity"
        };
        report.fail(eq, w);
    }
    Ok(report)
}

/// `f|_B : B → B̄` in coinvariant coordinates.
pub fn restrict_to_base<F: Field>(
    g: &GaloisExtension<F>,
    gbar: &GaloisExtension<F>,
    f: &LinMap<F>,
) -> Result<LinMap<F>> {
    LinMap::from_fn(g.base.space.clone(), gbar.base.space.clone(), |b| {
        gbar.base
            .coords(&f.apply(g.base.inclusion.col(b)))
            .unwrap_or_else(|| SparseVec::zeros(gbar.base.dim()))
    })
    .and_then(|fb| {
        for b in 0..g.base.dim() {
            let image = f.apply(g.base.inclusion.col(b));
            if gbar.base.inclusion.apply(fb.col(b)) != image {
                return Err(Error::Falsification("f(B) is not contained in B̄".into()));
            }
        }
        Ok(fb)
    })
}

/// `f^{⊗(n+1)}` on a chain given in coordinates.
pub fn pushforward_chain<F: Field>(f: &LinMap<F>, x: &SparseVec<F>, n: usize) -> SparseVec<F> {
    apply_each_leg(x, n + 1, f)
}

/// The induced extension data of a comodule-algebra morphism.
#[derive(Clone, Debug)]
pub struct Pushforward<F> {
    /// `ℓ̄ = (f⊗f)∘ℓ`, verified on `B̄ ⊆ Ā`.
    pub ell: StrongConnection<F>,
    pub restriction: LinMap<F>,
    /// `B̄⊗_B A` as a quotient of `B̄⊗A`.
    pub balanced: Quotient<F>,
    /// `α(ā) = ā₀f(ā₁^⟨1⟩)⊗_B ā₁^⟨2⟩`.
    pub alpha: LinMap<F>,
    /// `β(b̄⊗_B a) = b̄f(a)`.
    pub beta: LinMap<F>,
    /// `f∘φ` with inverse `f∘φ⁻¹`, when a cleaving map was supplied.
    pub cleaving: Option<CleavingMap<F>>,
}

pub fn pushforward_connection<F: Field>(
    g: &GaloisExtension<F>,
    gbar: &GaloisExtension<F>,
    ell: &StrongConnection<F>,
    f: &LinMap<F>,
    cleaving: Option<&CleavingMap<F>>,
) -> Result<Pushforward<F>> {
    let (a, abar) = (&g.algebra, &gbar.algebra);
    check_morphism(a, abar, f)?.into_result()?;
    let ell_bar = gbar.strong_connection(f.tensor(f).compose(&ell.ell)?)?;
    let fb = restrict_to_base(g, gbar, f)?;
    let (na, nab) = (a.dim(), abar.dim());
    let (nb, nbb) = (g.base.dim(), gbar.base.dim());
    let bbar = &gbar.base;
    let space = bbar.space.tensor(a.space());
    let mut relations = Vec::new();
    for x in 0..nbb {
        let ex = SparseVec::unit(nbb, x);
        for b in 0..nb {
            let left = bbar.algebra.mul(&ex, fb.col(b));
            for y in 0..na {
                let ey = SparseVec::unit(na, y);
                let right = a.algebra.mul(g.base.inclusion.col(b), &ey);
                relations.push(left.kron(&ey).sub(&ex.kron(&right)));
            }
        }
    }
    let balanced = quotient(&space, &relations)?;
    let beta_full = LinMap::from_fn(space.clone(), abar.space().clone(), |k| {
        abar.algebra.mul(bbar.inclusion.col(k / na), f.col(k % na))
    })?;
    if relations.iter().any(|r| !beta_full.apply(r).is_zero()) {
        return Err(Error::axiom(
            "β well-defined",
            "β does not vanish on the balancing relations",
        ));
    }
    let beta = beta_full.compose(&balanced.section)?;
    let rhobar = abar.right()?;
    let h = rhobar.hopf.dim();
    let proj = bbar.pivot_projection();
    let alpha = LinMap::from_fn(abar.space().clone(), balanced.space.clone(), |i| {
        let mut w = SparseVec::zeros(nab * na);
        for (idx, c) in rhobar.map.col(i).iter() {
            let (a0, a1) = (idx / h, idx % h);
            for (r, e) in ell.ell.col(a1).iter() {
                let left = abar.algebra.mul(&SparseVec::unit(nab, a0), f.col(r / na));
                w.add_scaled(&left.kron(&SparseVec::unit(na, r % na)), &(c.clone() * e.clone()));
            }
        }
        let wb = apply_to_legs(&w, &[nab, na], 0, 1, &proj);
        balanced.projection.apply(&wb)
    })?;
    // the first leg of each α-value must already lie in B̄
    for i in 0..nab {
        let back = beta.apply(alpha.col(i));
        if back != SparseVec::unit(nab, i) {
            return Err(Error::axiom(
                "β∘α = id",
                format!("fails at {}", abar.space().label(i)),
            ));
        }
    }
    let id_q = LinMap::identity(&balanced.space);
    if !alpha.compose(&beta)?.same_matrix(&id_q) {
        return Err(Error::axiom(
            "α∘β = id",
            "α∘β differs from the identity on B̄⊗_B A",
        ));
    }
    let rho = a.right()?;
    for k in 0..space.dim() {
        let e = SparseVec::unit(space.dim(), k);
        let lhs = rhobar.map.apply(&beta_full.apply(&e));
        let coacted = apply_to_legs(&e, &[nbb, na], 1, 1, &rho.map);
        let rhs = apply_to_legs(&coacted, &[nbb, na, h], 0, 2, &beta_full);
        if lhs != rhs {
            return Err(Error::axiom("β colinear", format!("fails at {}", space.label(k))));
        }
    }
    let cleaving = match cleaving {
        None => None,
        Some(c) => {
            let cb = CleavingMap {
                phi: f.compose(&c.phi)?.relabel(rhobar.hopf.space(), abar.space())?,
                phi_inv: f
                    .compose(&c.phi_inv)?
                    .relabel(rhobar.hopf.space(), abar.space())?,
            };
            cb.check(abar)?.into_result()?;
            Some(cb)
        }
    };
    Ok(Pushforward {
        ell: ell_bar,
        restriction: fb,
        balanced,
        alpha,
        beta,
        cleaving,
    })
}

/// `x_n(ℓ̄, h) = f^{⊗(n+1)} x_n(ℓ, h)` exactly. Also returns the context of `ℓ̄` and `f|_B`
/// for the class-level comparison.
///
/// The pushed-forward context and the restriction `f|_B`.
type Pushed<F> = (ChernWeil<F>, LinMap<F>);

/// A morphism that is not colinear, unital and multiplicative is reported as a failure.
fn naturality_chain<F: Field>(
    cw: &ChernWeil<F>,
    gbar: &GaloisExtension<F>,
    f: &LinMap<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<(CheckReport, Option<Pushed<F>>)> {
    let mut report = check_morphism(&cw.galois.algebra, &gbar.algebra, f)?;
    if !report.is_ok() {
        return Ok((report, None));
    }
    let fb = match restrict_to_base(&cw.galois, gbar, f) {
        Ok(fb) => fb,
        Err(e) => {
            report.fail("f(B) ⊆ B̄", e.to_string());
            return Ok((report, None));
        }
    };
    let ell_bar = StrongConnection {
        ell: f.tensor(f).compose(&cw.ell.ell)?,
    };
    let cwbar = ChernWeil::new(gbar.clone(), ell_bar)?;
    if cwbar.x_n(h, n)? != pushforward_chain(&fb, &cw.x_n(h, n)?, n) {
        report.fail("x_n(ℓ̄,h) = f^⊗ x_n(ℓ,h)", format!("chains differ at n = {n}"));
    }
    Ok((report, Some((cwbar, fb))))
}

/// Chain-level naturality only.
pub fn naturality_chain_check<F: Field>(
    cw: &ChernWeil<F>,
    gbar: &GaloisExtension<F>,
    f: &LinMap<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<CheckReport> {
    Ok(naturality_chain(cw, gbar, f, h, n)?.0)
}

/// Chain-level naturality, then agreement of `f_*chw_n(ℓ)` and `chw_n(ℓ̄)` in `HC_{2n}(B̄)`.
pub fn naturality_check<F: Field>(
    cw: &ChernWeil<F>,
    gbar: &GaloisExtension<F>,
    f: &LinMap<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<CheckReport> {
    let (mut report, bar) = naturality_chain(cw, gbar, f, h, n)?;
    let Some((cwbar, fb)) = bar else {
        return Ok(report);
    };
    let pushed = cw
        .chw(h, n)?
        .representative
        .map_components(|q, v| pushforward_chain(&fb, v, q));
    let own = cwbar.chw(h, n)?.representative;
    if !same_class(cwbar.base_algebra(), &own, &pushed)? {
        report.fail("HC(f)∘c_B = c_B̄∘Qb(f)", format!("classes differ at n = {n}"));
    }
    Ok(report)
}

/// `x_n` is unchanged when `ℓ` is transported along a left `B`-linear colinear automorphism `g`.
pub fn isomorphism_invariance<F: Field>(
    cw: &ChernWeil<F>,
    g: &LinMap<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<CheckReport> {
    let a = &cw.galois.algebra;
    let mut report = check_morphism(a, a, g)?;
    for b in 0..cw.coring.base.dim() {
        let v = cw.coring.base.inclusion.col(b);
        if g.apply(v) != *v {
            report.fail("g|_B = id", format!("g moves B-basis vector {b}"));
        }
    }
    if crate::linalg::invert(g)?.is_none() {
        report.fail("g invertible", "g is singular");
    }
    if !report.is_ok() {
        return Ok(report);
    }
    let moved = cw.galois.strong_connection(g.tensor(g).compose(&cw.ell.ell)?)?;
    let other = ChernWeil::new(cw.galois.clone(), moved)?;
    if other.x_n(h, n)? != cw.x_n(h, n)? {
        report.fail("x_n(ℓ′,h) = x_n(ℓ,h)", format!("chains differ at n = {n}"));
    }
    Ok(report)
}

// ---- deformations ----

/// Outcome of a deformation comparison for one `(h, n)`.
#[derive(Clone, Debug)]
pub struct DeformationCheck {
    pub report: CheckReport,
    /// Whether the intermediate chain in `M^{⊗(n+1)}` changed under the deformation.
    pub c_differs: bool,
}

/// `B ⊆ A_γ` over `H_γ` with `ℓ_γ`, next to the undeformed data.
#[derive(Clone, Debug)]
pub struct RightDeformation<F> {
    pub deformed: ChernWeil<F>,
    pub hopf: DeformedHopf<F>,
}

impl<F: Field> RightDeformation<F> {
    pub fn new(cw: &ChernWeil<F>, d: &DeformedHopf<F>) -> Result<Self> {
        let a = deform_comodule_algebra_right(&cw.galois.algebra, d)?;
        let g = canonical_map(&a)?;
        let ell = deform_connection_right(&cw.ell, d)?;
        Ok(RightDeformation {
            deformed: ChernWeil::new(g, ell)?,
            hopf: d.clone(),
        })
    }

    /// `c_n(ℓ_γ)(h)` straight from the deformed formula: `Δ^{(2n+1)}(h)` with
    /// `u_γ` on the odd legs and `ℓ` on the even ones.
    pub fn c_n_direct(&self, cw: &ChernWeil<F>, h: &SparseVec<F>, n: usize) -> Result<SparseVec<F>> {
        require_cotrace(&self.hopf.base, h)?;
        let hopf = &self.hopf.base;
        let hd = hopf.dim();
        let legs = 2 * n + 2;
        let a = cw.galois.algebra.dim();
        let mut out = SparseVec::zeros((a * a).pow(n as u32 + 1));
        for (idx, c) in hopf.iterated_comult(h, legs).iter() {
            let digits = decode(idx, &vec![hd; legs]);
            let mut w = c.clone();
            for k in 0..=n {
                w *= self.hopf.u.entry(0, digits[2 * k]);
            }
            if w.is_zero() {
                continue;
            }
            let mut term = cw.ell.ell.col(digits[1]).clone();
            for k in 1..=n {
                term = term.kron(cw.ell.ell.col(digits[2 * k + 1]));
            }
            out.add_scaled(&term, &w);
        }
        Ok(rotate_last_to_front(&out, a))
    }

    /// Invariance `x_n(ℓ_γ,h) = x_n(ℓ,h)` with face compatibility and both `c_n(ℓ_γ)` paths.
    pub fn check(&self, cw: &ChernWeil<F>, h: &SparseVec<F>, n: usize) -> Result<DeformationCheck> {
        let mut report = CheckReport::new();
        if !self.deformed.hopf().is_cotrace(h) {
            report.fail("H_γ^tr = H^tr", "cotrace of H is not a cotrace of H_γ");
        }
        let cg = self.deformed.c_n(h, n)?;
        if self.c_n_direct(cw, h, n)? != cg {
            report.fail("c_n(ℓ_γ) direct = generic", format!("paths differ at n = {n}"));
        }
        report.merge(self.deformed.face_compat_check(h, n)?);
        let (unsigned, _) = self.deformed.rotation_invariance(h, n)?;
        if !unsigned {
            report.fail(
                "rotation invariance",
                format!("c_{n}(ℓ_γ) is not rotation invariant"),
            );
        }
        let xg = self.deformed.x_n_ambient(h, n)?;
        self.deformed.coring.to_base(&xg, n)?;
        if xg != cw.x_n_ambient(h, n)? {
            report.fail("x_n(ℓ_γ,h) = x_n(ℓ,h)", format!("chains differ at n = {n}"));
        }
        let c_differs = cg != cw.c_n(h, n)?;
        Ok(DeformationCheck { report, c_differs })
    }
}

pub fn invariance_check_right<F: Field>(
    cw: &ChernWeil<F>,
    d: &DeformedHopf<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<DeformationCheck> {
    RightDeformation::new(cw, d)?.check(cw, h, n)
}

/// `(a₍₋₂₎, a₍₋₁₎, a₍₀₎, coefficient)` as basis indices.
type Term<F> = (usize, usize, usize, F);

/// Expansions `a ↦ Σ a₍₋₂₎⊗a₍₋₁₎⊗a₍₀₎` of each basis vector.
fn double_coaction<F: Field>(a: &ComoduleAlgebra<F>) -> Result<Vec<Vec<Term<F>>>> {
    let lambda = a.left()?;
    let n = a.dim();
    Ok((0..n)
        .map(|i| {
            let mut out = Vec::new();
            for (idx, c) in lambda.map.col(i).iter() {
                let (outer, mid) = (idx / n, idx % n);
                for (idx2, c2) in lambda.map.col(mid).iter() {
                    out.push((outer, idx2 / n, idx2 % n, c.clone() * c2.clone()));
                }
            }
            out
        })
        .collect())
}

/// Largest degree for which the literal external formula is enumerated.
pub const MAX_DIRECT_DEGREE: usize = 3;

/// `x_n(σℓ, h)` from the double-cocycle formula, using only `ℓ`, the left
/// coaction, `σ^{±1}` and the undeformed product of `A`. Lands in `A^{⊗(n+1)}`.
pub fn x_n_external_direct<F: Field>(
    cw: &ChernWeil<F>,
    sigma: &TwoCocycle<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<SparseVec<F>> {
    if n > MAX_DIRECT_DEGREE {
        return Err(Error::Guardrail {
            what: "direct external formula degree".into(),
            requested: n,
            limit: MAX_DIRECT_DEGREE,
        });
    }
    require_cotrace(cw.hopf(), h)?;
    let a = &cw.galois.algebra;
    if sigma.hopf.dim() != a.left()?.hopf.dim() {
        return Err(Error::dims(
            "σ on the left Hopf algebra",
            a.left()?.hopf.dim(),
            sigma.hopf.dim(),
        ));
    }
    let na = a.dim();
    let exp = double_coaction(a)?;
    let legs = n + 1;
    let d = cw.hopf().iterated_comult(h, legs);
    let v = apply_each_leg(&d, legs, &cw.ell.ell);
    let mut out = SparseVec::zeros(na.pow(legs as u32));
    let dims = vec![na; 2 * legs];
    for (idx, c) in v.iter() {
        let digits = decode(idx, &dims);
        let mut walk = ExternalWalk {
            exp: &exp,
            sigma,
            alg: &a.algebra,
            digits: &digits,
            legs,
            chosen: Vec::with_capacity(2 * legs),
            out: &mut out,
        };
        walk.run(c.clone(), Vec::new());
    }
    Ok(out)
}

struct ExternalWalk<'a, F> {
    exp: &'a [Vec<(usize, usize, usize, F)>],
    sigma: &'a TwoCocycle<F>,
    alg: &'a Algebra<F>,
    digits: &'a [usize],
    legs: usize,
    /// `(k₋₂, k₋₁, a₀)` picked for each leg so far; legs alternate `p_j, q_j`.
    chosen: Vec<(usize, usize, usize)>,
    out: &'a mut SparseVec<F>,
}

impl<F: Field> ExternalWalk<'_, F> {
    /// `factors` holds the products `q_{j−1}p_j` for `j ≥ 1` decided so far.
    fn run(&mut self, weight: F, factors: Vec<SparseVec<F>>) {
        let pos = self.chosen.len();
        if pos == 2 * self.legs {
            let (q_last, p_first) = (self.chosen[pos - 1], self.chosen[0]);
            let w = weight * self.sigma.value(q_last.1, p_first.1);
            if w.is_zero() {
                return;
            }
            let first = self.alg.mul_basis(q_last.2, p_first.2);
            let mut t = first.clone();
            for f in &factors {
                t = t.kron(f);
            }
            self.out.add_scaled(&t, &w);
            return;
        }
        let leg = self.digits[pos];
        for &(k2, k1, a0, ref c) in &self.exp[leg] {
            let mut w = weight.clone() * c.clone();
            let mut next = factors.clone();
            if pos % 2 == 1 {
                let p = self.chosen[pos - 1];
                w *= self.sigma.inv_value(p.0, k2);
            } else if pos > 0 {
                let q = self.chosen[pos - 1];
                w *= self.sigma.value(q.1, k1);
                let prod = self.alg.mul_basis(q.2, a0);
                if prod.is_zero() {
                    continue;
                }
                next.push(prod.clone());
            }
            if w.is_zero() {
                continue;
            }
            self.chosen.push((k2, k1, a0));
            self.run(w, next);
            self.chosen.pop();
        }
    }
}

/// `σB ⊆ σA` with `σℓ`, next to the undeformed data.
#[derive(Clone, Debug)]
pub struct ExternalDeformation<F> {
    pub deformed: ChernWeil<F>,
    pub sigma: TwoCocycle<F>,
}

/// Result of the σ-deformed evaluation.
#[derive(Clone, Debug)]
pub struct ExternalOutcome<F> {
    pub report: CheckReport,
    /// `x_i(σℓ, h)` in `σB`-coordinates, `i = 0, …, 2n`.
    pub x: Vec<SparseVec<F>>,
    pub class: CyclicClass<F>,
}

impl<F: Field> ExternalDeformation<F> {
    pub fn new(cw: &ChernWeil<F>, d: &DeformedHopf<F>) -> Result<Self> {
        let a = deform_comodule_algebra_left(&cw.galois.algebra, d)?;
        let g = canonical_map(&a)?;
        let ell = deform_connection_left(&cw.ell, &cw.galois.algebra, &d.cocycle)?;
        Ok(ExternalDeformation {
            deformed: ChernWeil::new(g, ell)?,
            sigma: d.cocycle.clone(),
        })
    }

    /// Direct against compositional `x_n(σℓ, h)`, with face compatibility and
    /// rotation invariance of `c_n(σℓ)(h)`.
    pub fn compare(&self, cw: &ChernWeil<F>, h: &SparseVec<F>, n: usize) -> Result<CheckReport> {
        let mut report = CheckReport::new();
        let sw = &self.deformed;
        if x_n_external_direct(cw, &self.sigma, h, n)? != sw.x_n_ambient(h, n)? {
            report.fail(
                "x_n(σℓ) direct = compositional",
                format!("paths differ at n = {n}"),
            );
        }
        let (unsigned, _) = sw.rotation_invariance(h, n)?;
        if !unsigned {
            report.fail(
                "rotation invariance",
                format!("c_{n}(σℓ) is not rotation invariant"),
            );
        }
        report.merge(sw.face_compat_check(h, n)?);
        Ok(report)
    }

    /// [`Self::compare`] for every degree up to `n`, then `x_i(σℓ, h)` for `i ≤ 2n`
    /// and the class in `HC_{2n}(σB)`.
    pub fn evaluate(&self, cw: &ChernWeil<F>, h: &SparseVec<F>, n: usize) -> Result<ExternalOutcome<F>> {
        let mut report = CheckReport::new();
        for i in 0..=n.min(MAX_DIRECT_DEGREE) {
            report.merge(self.compare(cw, h, i)?);
        }
        let x = (0..=2 * n)
            .map(|i| self.deformed.x_n(h, i))
            .collect::<Result<Vec<_>>>()?;
        let class = self.deformed.chw(h, n)?;
        Ok(ExternalOutcome { report, x, class })
    }
}

pub fn chw_deformed_external<F: Field>(
    cw: &ChernWeil<F>,
    d: &DeformedHopf<F>,
    h: &SparseVec<F>,
    n: usize,
) -> Result<ExternalOutcome<F>> {
    ExternalDeformation::new(cw, d)?.evaluate(cw, h, n)
}

/// `σB ⊆ σA_γ` over `H_γ` with `σℓ_γ`, next to the σ-only deformation.
#[derive(Clone, Debug)]
pub struct CombinedDeformation<F> {
    pub both: ChernWeil<F>,
    pub left_only: ExternalDeformation<F>,
}

impl<F: Field> CombinedDeformation<F> {
    pub fn new(cw: &ChernWeil<F>, dgamma: &DeformedHopf<F>, dsigma: &DeformedHopf<F>) -> Result<Self> {
        let a = &cw.galois.algebra;
        let ag = deform_comodule_algebra_right(a, dgamma)?;
        let sag = deform_comodule_algebra_left(&ag, dsigma)?;
        let other = deform_comodule_algebra_right(&deform_comodule_algebra_left(a, dsigma)?, dgamma)?;
        if !sag.algebra.mult().same_matrix(other.algebra.mult()) {
            return Err(Error::Falsification(
                "σ(A_γ) and (σA)_γ have different products".into(),
            ));
        }
        let g = canonical_map(&sag)?;
        let ell = deform_connection_both(&cw.ell, a, dgamma, &dsigma.cocycle)?;
        Ok(CombinedDeformation {
            both: ChernWeil::new(g, ell)?,
            left_only: ExternalDeformation::new(cw, dsigma)?,
        })
    }

    /// `x_n(σℓ_γ, h) = x_n(σℓ, h)` with face compatibility of `c_n(σℓ_γ)(h)`.
    pub fn check(&self, h: &SparseVec<F>, n: usize) -> Result<DeformationCheck> {
        let mut report = CheckReport::new();
        let other = &self.left_only.deformed;
        if self.both.x_n_ambient(h, n)? != other.x_n_ambient(h, n)? {
            report.fail("x_n(σℓ_γ,h) = x_n(σℓ,h)", format!("chains differ at n = {n}"));
        }
        let c_differs = self.both.c_n(h, n)? != other.c_n(h, n)?;
        report.merge(self.both.face_compat_check(h, n)?);
        Ok(DeformationCheck { report, c_differs })
    }
}

/// Combined deformation check, plus chain-level naturality over the σ-deformed extensions
/// when a bicomodule morphism `f: A → Ā` is supplied.
pub fn combined_check<F: Field>(
    cw: &ChernWeil<F>,
    dgamma: &DeformedHopf<F>,
    dsigma: &DeformedHopf<F>,
    h: &SparseVec<F>,
    n: usize,
    morphism: Option<(&ComoduleAlgebra<F>, &LinMap<F>)>,
) -> Result<CheckReport> {
    let combined = CombinedDeformation::new(cw, dgamma, dsigma)?;
    let mut report = combined.check(h, n)?.report;
    if let Some((target, f)) = morphism {
        let sa = &combined.left_only.deformed;
        let starget = deform_comodule_algebra_left(target, dsigma)?;
        if let Some(w) = sa.galois.algebra.algebra.check_algebra_map(&starget.algebra, f) {
            report.fail("f multiplicative after deformation", w);
            return Ok(report);
        }
        let gbar = canonical_map(&starget)?;
        report.merge(naturality_chain_check(sa, &gbar, f, h, n)?);
    }
    Ok(report)
}
