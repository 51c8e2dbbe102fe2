//! CCZ-equivalence witnessing through the graph map
//! L(x, y) = (x + gamma (Tr(alpha x) + Tr(beta y)), y), and EA-inequivalence
//! certification through EA-invariants (algebraic degree, component-degree
//! power-function exclusion). There is deliberately no EA-equivalence
//! decision procedure here.

use crate::error::Result;
use crate::gfield::{Ctx, FieldElement};
use crate::vfunc::{interpolate, p_weight, VectorialFunction};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

/// The linear map L on F_{p^n} x F_{p^m} used as the CCZ witness.
#[derive(Clone, Debug)]
pub struct GraphMap {
    pub domain: Ctx,
    pub codomain: Ctx,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma: FieldElement,
}

impl GraphMap {
    pub fn new(
        domain: &Ctx,
        codomain: &Ctx,
        alpha: FieldElement,
        beta: FieldElement,
        gamma: FieldElement,
    ) -> Self {
        assert!(!gamma.is_zero(), "gamma must be nonzero");
        assert_eq!(alpha.ctx_id(), domain.id());
        assert_eq!(gamma.ctx_id(), domain.id());
        assert_eq!(beta.ctx_id(), codomain.id());
        GraphMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            alpha,
            beta,
            gamma,
        }
    }

    pub fn from_params(f0: &VectorialFunction, params: &crate::construct::ConstructionParams) -> Self {
        Self::new(f0.domain(), f0.codomain(), params.alpha, params.beta, params.gamma)
    }

    pub fn apply(&self, x: FieldElement, y: FieldElement) -> (FieldElement, FieldElement) {
        let dom = &self.domain;
        let cod = &self.codomain;
        let t = (dom.trace(dom.mul(self.alpha, x)) + cod.trace(cod.mul(self.beta, y))) % dom.p();
        (dom.add(x, dom.scl(t, self.gamma)), y)
    }

    /// Permutation criterion Tr(alpha gamma) != -1. At small sizes the
    /// criterion is additionally checked against brute-force injectivity
    /// over all p^{n+m} pairs; the two must agree.
    pub fn is_permutation(&self) -> bool {
        let dom = &self.domain;
        let p = dom.p();
        let by_trace = dom.trace(dom.mul(self.alpha, self.gamma)) != p - 1;
        let pairs = dom.size() as u128 * self.codomain.size() as u128;
        if pairs <= 1 << 16 {
            let brute = self.is_permutation_brute_force();
            assert_eq!(
                by_trace, brute,
                "trace criterion disagrees with exhaustive injectivity"
            );
        }
        by_trace
    }

    /// Exhaustive injectivity over all pairs.
    pub fn is_permutation_brute_force(&self) -> bool {
        let dom = &self.domain;
        let cod = &self.codomain;
        for y in cod.elements() {
            let mut seen = vec![false; dom.size() as usize];
            for x in dom.elements() {
                let (xx, _) = self.apply(x, y);
                let r = xx.rank() as usize;
                if seen[r] {
                    return false;
                }
                seen[r] = true;
            }
        }
        true
    }
}

/// Does L map the graph of F onto the graph of FH, as sets of p^n pairs?
/// Pairs are compared by sorting their packed ranks, bit-exactly.
pub fn verify_ccz_witness(
    f: &VectorialFunction,
    fh: &VectorialFunction,
    gm: &GraphMap,
) -> bool {
    let dom = f.domain();
    let cod = f.codomain();
    assert_eq!(dom.id(), fh.domain().id());
    assert_eq!(cod.id(), fh.codomain().id());
    let pack = |x: FieldElement, y: FieldElement| x.rank() * cod.size() + y.rank();
    let mut mapped: Vec<u64> = dom
        .elements()
        .map(|x| {
            let (xx, yy) = gm.apply(x, f.value(x));
            pack(xx, yy)
        })
        .collect();
    let mut target: Vec<u64> = dom.elements().map(|y| pack(y, fh.value(y))).collect();
    mapped.sort_unstable();
    target.sort_unstable();
    mapped == target
}

/// Outcome of the degree-based EA test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EaVerdict {
    /// Degrees differ (both >= 2): certainly EA-inequivalent.
    InequivalentByDegree { left: u32, right: u32 },
    /// Equal degrees (or affine input): no verdict from this invariant.
    Undetermined,
}

/// Compare algebraic degrees; degrees <= 1 never produce a verdict.
pub fn ea_distinguish(f: &VectorialFunction, g: &VectorialFunction) -> Result<EaVerdict> {
    let df = f.degree()?;
    let dg = g.degree()?;
    if df != dg && df >= 2 && dg >= 2 {
        Ok(EaVerdict::InequivalentByDegree { left: df, right: dg })
    } else {
        Ok(EaVerdict::Undetermined)
    }
}

/// Algebraic degree of the component Tr(c F) read off from the univariate
/// coefficients of F: Tr(cF) = sum_j (cF)^{p^j} mod (x^{p^n} - x), and the
/// p-weight of an exponent is invariant under the cyclic digit shift
/// e -> e p^j, so only same-exponent cancellations matter.
pub fn component_degree(
    f_poly: &crate::vfunc::UnivariatePoly,
    c: FieldElement,
) -> u32 {
    let ctx = f_poly.ctx();
    let n = ctx.n();
    let ord = ctx.size() - 1;
    let mut coeffs: HashMap<u64, FieldElement> = HashMap::new();
    for (e, a) in f_poly.terms() {
        let ca = ctx.mul(c, a);
        for j in 0..n {
            let ee = if e == 0 {
                0
            } else {
                (e as u128 * (ctx.p() as u128).pow(j) - 1).rem_euclid(ord as u128) as u64 + 1
            };
            let contrib = ctx.frob_iter(ca, j);
            let slot = coeffs.entry(ee).or_insert_with(|| ctx.zero());
            *slot = ctx.add(*slot, contrib);
        }
    }
    coeffs
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&e, _)| p_weight(e, ctx.p()))
        .max()
        .unwrap_or(0)
}

/// Search for c != 0 with degree(Tr(cF)) outside {0, 1, degree(F)}; finding
/// one certifies F EA-inequivalent to every power function.
pub fn power_function_exclusion(f: &VectorialFunction) -> Result<bool> {
    assert!(f.is_nn(), "power-function exclusion applies to (n,n)-functions");
    let ctx = f.domain();
    let d = f.degree()?;
    let poly = interpolate(f)?;
    let found = (1..ctx.size()).into_par_iter().any(|cr| {
        let dc = component_degree(&poly, ctx.element(cr));
        dc != 0 && dc != 1 && dc != d
    });
    Ok(found)
}

/// Random affine permutation x -> M x + b with M an invertible matrix over
/// F_p in the power basis.
pub fn random_affine_permutation(ctx: &Ctx, rng: &mut impl Rng) -> VectorialFunction {
    let n = ctx.n() as usize;
    let mat = loop {
        let m = crate::fp::FpMat::from_fn(ctx.p(), n, n, |_, _| rng.gen_range(0..ctx.p()));
        if m.rank() == n {
            break m;
        }
    };
    let shift = ctx.element(rng.gen_range(0..ctx.size()));
    VectorialFunction::from_fn(ctx, ctx, |x| {
        let v = mat.mul_vec(&ctx.coeffs(x));
        ctx.add(ctx.from_coeffs(&v), shift)
    })
}

/// Random affine (not necessarily invertible) map domain -> codomain.
pub fn random_affine_map(dom: &Ctx, cod: &Ctx, rng: &mut impl Rng) -> VectorialFunction {
    let rows = cod.n() as usize;
    let cols = dom.n() as usize;
    let m = crate::fp::FpMat::from_fn(dom.p(), rows, cols, |_, _| rng.gen_range(0..dom.p()));
    let shift = cod.element(rng.gen_range(0..cod.size()));
    VectorialFunction::from_fn(dom, cod, |x| {
        let v = m.mul_vec(&dom.coeffs(x));
        cod.add(cod.from_coeffs(&v), shift)
    })
}

/// A1 ∘ F ∘ A2 + A3 for random affine permutations A1, A2 and a random
/// affine A3; EA-equivalent to F by construction.
pub fn random_ea_transform(f: &VectorialFunction, rng: &mut impl Rng) -> VectorialFunction {
    let dom = f.domain();
    let cod = f.codomain();
    let a1 = random_affine_permutation(cod, rng);
    let a2 = random_affine_permutation(dom, rng);
    let a3 = random_affine_map(dom, cod, rng);
    VectorialFunction::from_fn(dom, cod, |x| {
        let inner = a2.value(x);
        cod.add(a1.value(f.value(inner)), a3.value(x))
    })
}
