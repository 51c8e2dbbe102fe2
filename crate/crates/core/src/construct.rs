//! The CCZ twist: parameter completion (alpha, c) for a structure pair
//! (gamma, beta), the involution H(x) = x + gamma (Tr(alpha x) + Tr(beta F(x))),
//! and the companion function F∘H built twice over, by direct composition and
//! by the closed switching formula
//!
//!     F∘H = F + eps D_gamma F + F_DO(gamma) (eps^2 - eps),
//!
//! which must agree entrywise on every construction. The same pipeline covers
//! (n,n)-functions and (n,m)-functions with m | n; the latter replace cx by
//! Tr^n_m(cx) and the component trace by Tr^m_1.

use crate::error::{Error, Result};
use crate::gfield::{canonical_embedding, span_iter, Ctx, FieldElement};
use crate::linstruct::{annihilators_of_image, l_gamma_at, lmap_of};
use crate::vfunc::{do_decompose, interpolate, VectorialFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// The full parameter tuple of one construction. `beta` lives in the
/// codomain field, everything else in the domain field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma: FieldElement,
    pub c: FieldElement,
}

/// Hex-rank serialization of a parameter tuple, as used in result files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamsJson {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub c: String,
}

impl ConstructionParams {
    pub fn to_json(&self, dom: &Ctx, cod: &Ctx) -> ParamsJson {
        ParamsJson {
            alpha: dom.fmt_element(self.alpha),
            beta: cod.fmt_element(self.beta),
            gamma: dom.fmt_element(self.gamma),
            c: dom.fmt_element(self.c),
        }
    }

    pub fn from_json(dom: &Ctx, cod: &Ctx, j: &ParamsJson) -> Result<Self> {
        Ok(ConstructionParams {
            alpha: dom.parse_element(&j.alpha)?,
            beta: cod.parse_element(&j.beta)?,
            gamma: dom.parse_element(&j.gamma)?,
            c: dom.parse_element(&j.c)?,
        })
    }
}

/// beta lifted into the domain field (identity in the (n,n) case).
fn lift_beta(f0: &VectorialFunction, beta: FieldElement) -> Result<FieldElement> {
    if f0.is_nn() {
        Ok(beta)
    } else {
        Ok(canonical_embedding(f0.codomain(), f0.domain())?.embed(beta))
    }
}

/// Complete a valid structure pair (gamma, beta) to a full parameter tuple:
/// alpha is the canonical solution of Tr(alpha gamma) = -2 and c the
/// canonical solution of Tr(c beta gamma) = -Tr(beta D_gamma F_0(0)).
pub fn complete_params(
    f0: &VectorialFunction,
    gamma: FieldElement,
    beta: FieldElement,
) -> Result<ConstructionParams> {
    let dom = f0.domain();
    let p = dom.p();
    let alpha = dom.solve_trace_affine((2 * p - 2) % p, gamma)?.solution;
    let c = solve_c(f0, gamma, beta)?;
    let params = ConstructionParams { alpha, beta, gamma, c };
    validate_params(f0, &params)?;
    Ok(params)
}

/// Complete with an explicit alpha (e.g. alpha = 0 in characteristic 2, or
/// -2/n when gcd(n, p) = 1); the alpha constraint is still verified.
pub fn complete_params_with_alpha(
    f0: &VectorialFunction,
    gamma: FieldElement,
    beta: FieldElement,
    alpha: FieldElement,
) -> Result<ConstructionParams> {
    let c = solve_c(f0, gamma, beta)?;
    let params = ConstructionParams { alpha, beta, gamma, c };
    validate_params(f0, &params)?;
    Ok(params)
}

fn solve_c(
    f0: &VectorialFunction,
    gamma: FieldElement,
    beta: FieldElement,
) -> Result<FieldElement> {
    let dom = f0.domain();
    let cod = f0.codomain();
    let p = dom.p();
    let d0 = cod.sub(f0.value(gamma), f0.value(dom.zero()));
    let target = (p - cod.trace(cod.mul(beta, d0))) % p;
    let weight = dom.mul(lift_beta(f0, beta)?, gamma);
    Ok(dom.solve_trace_affine(target, weight)?.solution)
}

/// Check the three construction invariants, the last one exhaustively:
///   Tr(alpha gamma) = -2,
///   Tr(c beta gamma) = -Tr(beta D_gamma F_0(0)),
///   Tr(beta D_gamma F(x)) = 0 for every x, with F the adjusted function.
pub fn validate_params(f0: &VectorialFunction, params: &ConstructionParams) -> Result<()> {
    let dom = f0.domain();
    let cod = f0.codomain();
    let p = dom.p();
    let gamma = params.gamma;
    if gamma.is_zero() || params.beta.is_zero() {
        return Err(Error::InvalidStructurePair {
            gamma: gamma.rank(),
            beta: params.beta.rank(),
        });
    }
    let bad = || Error::InvalidStructurePair {
        gamma: gamma.rank(),
        beta: params.beta.rank(),
    };
    if dom.trace(dom.mul(params.alpha, gamma)) != (2 * p - 2) % p {
        return Err(bad());
    }
    let beta_hat = lift_beta(f0, params.beta)?;
    let d0 = cod.sub(f0.value(gamma), f0.value(dom.zero()));
    let lhs = dom.trace(dom.mul(dom.mul(params.c, beta_hat), gamma));
    let rhs = (p - cod.trace(cod.mul(params.beta, d0))) % p;
    if lhs != rhs {
        return Err(bad());
    }
    let f = adjusted_function(f0, params)?;
    let df = f.derivative(gamma);
    for x in dom.elements() {
        if cod.trace(cod.mul(params.beta, df.value(x))) != 0 {
            return Err(bad());
        }
    }
    Ok(())
}

/// F = F_0 + cx, or F_0 + Tr^n_m(cx) in the (n,m) case.
pub fn adjusted_function(
    f0: &VectorialFunction,
    params: &ConstructionParams,
) -> Result<VectorialFunction> {
    let dom = f0.domain();
    let cod = f0.codomain();
    let c = params.c;
    let f = if f0.is_nn() {
        VectorialFunction::from_fn(dom, cod, |x| cod.add(f0.value(x), dom.mul(c, x)))
    } else {
        let emb = canonical_embedding(cod, dom)?;
        let m = cod.n();
        let mut table = Vec::with_capacity(dom.size() as usize);
        for x in dom.elements() {
            let t = dom.rel_trace(dom.mul(c, x), m)?;
            table.push(cod.add(f0.value(x), emb.retract(t)?));
        }
        VectorialFunction::from_table(dom, cod, table)
    };
    Ok(f)
}

/// eps(x) = Tr(alpha x) + Tr^m_1(beta F(x)) as a prime-field table.
pub fn epsilon_table(f: &VectorialFunction, params: &ConstructionParams) -> Vec<u8> {
    let dom = f.domain();
    let cod = f.codomain();
    let p = dom.p();
    dom.elements()
        .map(|x| {
            let ta = dom.trace(dom.mul(params.alpha, x));
            let tb = cod.trace(cod.mul(params.beta, f.value(x)));
            ((ta + tb) % p) as u8
        })
        .collect()
}

/// H(x) = x + gamma * eps(x); verified to be an involution on every point.
pub fn build_involution(
    f: &VectorialFunction,
    params: &ConstructionParams,
) -> Result<VectorialFunction> {
    let dom = f.domain();
    let eps = epsilon_table(f, params);
    let h = VectorialFunction::from_fn(dom, dom, |x| {
        dom.add(x, dom.scl(eps[x.rank() as usize] as u64, params.gamma))
    });
    for x in dom.elements() {
        if h.value(h.value(x)) != x {
            return Err(Error::InvolutionFailed);
        }
    }
    Ok(h)
}

/// Whether the EA-inequivalence certificate (degree comparison) applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EaStatus {
    /// degree(F∘H) differs from degree(F_0), both >= 2: EA-inequivalent.
    InequivalentByDegree,
    /// CCZ-equivalent companion, but the degree certificate is silent.
    Undetermined,
}

/// Everything one construction produces.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub params: ConstructionParams,
    /// F = F_0 + cx (EA-equivalent to F_0).
    pub f: VectorialFunction,
    /// The involution H.
    pub h: VectorialFunction,
    /// F∘H by direct composition.
    pub fh: VectorialFunction,
    /// F∘H by the closed formula; equal to `fh` entrywise.
    pub fh_closed: VectorialFunction,
    pub epsilon: Vec<u8>,
    pub degree: u32,
    pub f0_degree: u32,
    pub ea_status: EaStatus,
}

/// Run the (n,n) construction for a quadratic F_0 and a validated tuple.
pub fn twist(f0: &VectorialFunction, params: &ConstructionParams) -> Result<ConstructionResult> {
    assert!(f0.is_nn(), "use twist_nm for (n,m)-functions");
    twist_impl(f0, params)
}

/// Run the (n,m) construction (m | n); the m = n case coincides with `twist`.
pub fn twist_nm(f0: &VectorialFunction, params: &ConstructionParams) -> Result<ConstructionResult> {
    if f0.domain().n() % f0.codomain().n() != 0 {
        return Err(Error::NotADivisor { m: f0.codomain().n(), n: f0.domain().n() });
    }
    twist_impl(f0, params)
}

fn twist_impl(f0: &VectorialFunction, params: &ConstructionParams) -> Result<ConstructionResult> {
    let dom = f0.domain();
    let cod = f0.codomain();
    let p = dom.p();
    validate_params(f0, params)?;
    let f = adjusted_function(f0, params)?;

    let f_poly = interpolate(&f)?;
    let f0_degree = f_poly.algebraic_degree().max(f0.degree()?);
    if f_poly.algebraic_degree() > 2 {
        return Err(Error::DegreeTooHigh(f_poly.algebraic_degree()));
    }
    let (do_part, _, _) = do_decompose(&f_poly)?;
    // F_DO(gamma) lands back in the codomain subfield
    let do_gamma_lifted = do_part.evaluate_at(params.gamma);
    let do_gamma = if f0.is_nn() {
        do_gamma_lifted
    } else {
        canonical_embedding(cod, dom)?.retract(do_gamma_lifted)?
    };

    let eps = epsilon_table(&f, params);
    let h = build_involution(&f, params)?;
    let fh = f.compose(&h);

    let df = f.derivative(params.gamma);
    let closed_table: Vec<FieldElement> = dom
        .elements()
        .map(|x| {
            let e = eps[x.rank() as usize] as u64;
            let mut v = cod.add(f.value(x), cod.scl(e, df.value(x)));
            if p > 2 {
                let e2me = (e * e + p - e) % p;
                v = cod.add(v, cod.scl(e2me, do_gamma));
            }
            v
        })
        .collect();
    let fh_closed = VectorialFunction::from_table(dom, cod, closed_table);
    let mismatches = fh
        .table()
        .iter()
        .zip(fh_closed.table())
        .filter(|(a, b)| a != b)
        .count();
    if mismatches != 0 {
        return Err(Error::ClosedFormMismatch(mismatches));
    }

    let degree = fh.degree()?;
    let ea_status = if degree != f0_degree && degree >= 2 && f0_degree >= 2 {
        EaStatus::InequivalentByDegree
    } else {
        EaStatus::Undetermined
    };
    Ok(ConstructionResult {
        params: *params,
        f,
        h,
        fh,
        fh_closed,
        epsilon: eps,
        degree,
        f0_degree,
        ea_status,
    })
}

// ---------------------------------------------------------------------------
// Derivative identities behind the degree bounds.

/// Residuals of the two product-derivative identities for quadratic F:
/// the third derivative of F_3 = Tr(beta F) D_gamma F equals
/// Tr(beta L_{g2}(g3)) L_gamma(g1) + Tr(beta L_{g1}(g3)) L_gamma(g2)
/// + Tr(beta L_{g1}(g2)) L_gamma(g3), and in odd characteristic half the
/// fourth derivative of F_4 = Tr(beta F)^2 equals the trace-paired analogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaResidual {
    pub cubic_mismatches: usize,
    pub quartic_mismatches: Option<usize>,
}

impl LemmaResidual {
    pub fn is_zero(&self) -> bool {
        self.cubic_mismatches == 0 && self.quartic_mismatches.unwrap_or(0) == 0
    }
}

pub fn derive_lemma_identities(
    f: &VectorialFunction,
    beta: FieldElement,
    gamma: FieldElement,
    g1: FieldElement,
    g2: FieldElement,
    g3: FieldElement,
) -> Result<LemmaResidual> {
    let dom = f.domain();
    let cod = f.codomain();
    let p = dom.p();
    let tr_l = |a: FieldElement, b: FieldElement| cod.trace(cod.mul(beta, l_gamma_at(f, a, b)));
    let lg = |x: FieldElement| l_gamma_at(f, gamma, x);

    // F_3 = Tr(beta F) * D_gamma F, then D_{g3} D_{g2} D_{g1}
    let df = f.derivative(gamma);
    let f3: Vec<FieldElement> = dom
        .elements()
        .map(|x| {
            let t = cod.trace(cod.mul(beta, f.value(x)));
            cod.scl(t, df.value(x))
        })
        .collect();
    let deriv = |table: &[FieldElement], g: FieldElement| -> Vec<FieldElement> {
        dom.elements()
            .map(|x| {
                let shifted = table[dom.add(x, g).rank() as usize];
                cod.sub(shifted, table[x.rank() as usize])
            })
            .collect()
    };
    let d3 = deriv(&deriv(&deriv(&f3, g1), g2), g3);
    let rhs3 = {
        let mut acc = cod.scl(tr_l(g2, g3), lg(g1));
        acc = cod.add(acc, cod.scl(tr_l(g1, g3), lg(g2)));
        cod.add(acc, cod.scl(tr_l(g1, g2), lg(g3)))
    };
    let cubic_mismatches = d3.iter().filter(|&&v| v != rhs3).count();

    // F_4 = Tr(beta F)^2 (odd characteristic only): half the fourth derivative
    let quartic_mismatches = if p > 2 {
        let f4: Vec<u64> = dom
            .elements()
            .map(|x| {
                let t = cod.trace(cod.mul(beta, f.value(x)));
                t * t % p
            })
            .collect();
        let pderiv = |table: &[u64], g: FieldElement| -> Vec<u64> {
            dom.elements()
                .map(|x| (table[dom.add(x, g).rank() as usize] + p - table[x.rank() as usize]) % p)
                .collect()
        };
        let d4 = pderiv(&pderiv(&pderiv(&pderiv(&f4, gamma), g1), g2), g3);
        let half = crate::fp::fp_inv(2, p);
        let rhs4 = (tr_l(g2, g3) * tr_l(gamma, g1)
            + tr_l(g1, g3) * tr_l(gamma, g2)
            + tr_l(g1, g2) * tr_l(gamma, g3))
            % p;
        Some(d4.iter().filter(|&&v| v * half % p != rhs4).count())
    } else {
        None
    };
    Ok(LemmaResidual { cubic_mismatches, quartic_mismatches })
}

// ---------------------------------------------------------------------------
// Tuple enumeration.

/// Per-gamma annihilator sizes and the total number of valid
/// (alpha, beta, gamma, c) tuples: each valid (gamma, beta) admits p^{n-1}
/// choices of alpha and p^{n-1} choices of c.
#[derive(Clone, Debug)]
pub struct TupleCount {
    pub total: u128,
    /// (gamma rank, number of valid beta) for gammas with at least one beta.
    pub per_gamma: Vec<(u64, u64)>,
}

pub fn count_valid_tuples(f0: &VectorialFunction) -> Result<TupleCount> {
    let dom = f0.domain();
    let p = dom.p();
    let per_ab = (p as u128).pow(2 * (dom.n() - 1));
    let mut per_gamma = Vec::new();
    let mut total = 0u128;
    for gamma in dom.elements().skip(1) {
        let map = lmap_of(f0, gamma)?;
        let ann = annihilators_of_image(&map);
        if ann.is_empty() {
            continue;
        }
        let betas = (p as u128).pow(ann.len() as u32) - 1;
        per_gamma.push((gamma.rank(), betas as u64));
        total += betas * per_ab;
    }
    Ok(TupleCount { total, per_gamma })
}

/// Materialize every valid tuple in canonical (gamma, beta, alpha, c) order.
/// Intended for small fields; refuses to build more than the given cap.
pub fn enumerate_all_tuples(
    f0: &VectorialFunction,
    cap: usize,
) -> Result<Vec<ConstructionParams>> {
    let count = count_valid_tuples(f0)?;
    if count.total > cap as u128 {
        return Err(Error::Other(format!(
            "{} tuples exceed the cap of {cap}",
            count.total
        )));
    }
    let dom = f0.domain();
    let cod = f0.codomain();
    let p = dom.p();
    let mut out = Vec::with_capacity(count.total as usize);
    for gamma in dom.elements().skip(1) {
        let map = lmap_of(f0, gamma)?;
        let ann = annihilators_of_image(&map);
        if ann.is_empty() {
            continue;
        }
        let mut betas: Vec<FieldElement> =
            span_iter(cod, &ann).filter(|b| !b.is_zero()).collect();
        betas.sort();
        for beta in betas {
            let alpha_sys = dom.solve_trace_affine((2 * p - 2) % p, gamma)?;
            let beta_hat = lift_beta(f0, beta)?;
            let d0 = cod.sub(f0.value(gamma), f0.value(dom.zero()));
            let c_target = (p - cod.trace(cod.mul(beta, d0))) % p;
            let c_sys = dom.solve_trace_affine(c_target, dom.mul(beta_hat, gamma))?;
            let mut alphas: Vec<FieldElement> = alpha_sys.iter_solutions(dom).collect();
            alphas.sort();
            let mut cs: Vec<FieldElement> = c_sys.iter_solutions(dom).collect();
            cs.sort();
            for &alpha in &alphas {
                for &c in &cs {
                    out.push(ConstructionParams { alpha, beta, gamma, c });
                }
            }
        }
    }
    Ok(out)
}

/// Deterministic random sample of valid tuples (duplicates possible).
pub fn sample_valid_tuples(
    f0: &VectorialFunction,
    count: usize,
    seed: u64,
) -> Result<Vec<ConstructionParams>> {
    let dom = f0.domain();
    let cod = f0.codomain();
    let p = dom.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut guard = 0usize;
    while out.len() < count {
        guard += 1;
        if guard > count * 1000 {
            return Err(Error::Other("no valid tuples found while sampling".into()));
        }
        let gamma = dom.element(1 + rng.gen_range(0..dom.size() - 1));
        let map = lmap_of(f0, gamma)?;
        let ann = annihilators_of_image(&map);
        if ann.is_empty() {
            continue;
        }
        let beta = loop {
            let idx = rng.gen_range(1..(p as u128).pow(ann.len() as u32)) as u64;
            let mut rem = idx;
            let mut acc = cod.zero();
            for &b in &ann {
                let s = rem % p;
                rem /= p;
                if s != 0 {
                    acc = cod.add(acc, cod.scl(s, b));
                }
            }
            if !acc.is_zero() {
                break acc;
            }
        };
        let alpha_sys = dom.solve_trace_affine((2 * p - 2) % p, gamma)?;
        let beta_hat = lift_beta(f0, beta)?;
        let d0 = cod.sub(f0.value(gamma), f0.value(dom.zero()));
        let c_target = (p - cod.trace(cod.mul(beta, d0))) % p;
        let c_sys = dom.solve_trace_affine(c_target, dom.mul(beta_hat, gamma))?;
        let pick = |sys: &crate::gfield::TraceAffine, rng: &mut ChaCha8Rng| {
            let mut acc = sys.solution;
            for &k in &sys.kernel_basis {
                let s = rng.gen_range(0..p);
                if s != 0 {
                    acc = dom.add(acc, dom.scl(s, k));
                }
            }
            acc
        };
        let alpha = pick(&alpha_sys, &mut rng);
        let c = pick(&c_sys, &mut rng);
        out.push(ConstructionParams { alpha, beta, gamma, c });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Named parameter recipes.

/// alpha = -2/n as a prime-field constant; defined when gcd(n, p) = 1.
pub fn alpha_gcd_recipe(ctx: &Ctx) -> Option<FieldElement> {
    let p = ctx.p();
    let n = ctx.n() as u64 % p;
    if n == 0 {
        return None;
    }
    let v = (2 * p - 2) % p * crate::fp::fp_inv(n, p) % p;
    Some(ctx.from_prime(v))
}

/// beta = zeta - zeta^{p^d} for the canonical zeta in F_{p^{2d}} \ F_{p^d};
/// satisfies beta^{p^d} + beta = 0. Needs 2d | n.
pub fn beta_zeta_recipe(ctx: &Ctx, d: u32) -> Result<FieldElement> {
    if d == 0 || ctx.n() % (2 * d) != 0 {
        return Err(Error::NotADivisor { m: 2 * d, n: ctx.n() });
    }
    let zeta = ctx
        .elements()
        .find(|&z| ctx.frob_iter(z, 2 * d) == z && ctx.frob_iter(z, d) != z)
        .expect("F_{p^{2d}} strictly contains F_{p^d}");
    let beta = ctx.sub(zeta, ctx.frob_iter(zeta, d));
    debug_assert!(ctx.add(ctx.frob_iter(beta, d), beta).is_zero());
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::FieldCtx;
    use crate::linstruct::find_structure_pair;
    use crate::vfunc::{evaluate, UnivariatePoly};

    fn power_fn(ctx: &Ctx, e: u64) -> VectorialFunction {
        evaluate(&UnivariatePoly::monomial(ctx, e, ctx.one()))
    }

    #[test]
    fn gold_odd_n_paper_parameters() {
        // x^{2^i+1}, n odd, gamma = beta = 1: alpha = 0, c = 1
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f0 = power_fn(&ctx, 3);
        let params = complete_params(&f0, ctx.one(), ctx.one()).unwrap();
        assert!(params.alpha.is_zero());
        assert_eq!(params.c, ctx.one());
    }

    #[test]
    fn gold_even_n_canonical_c_is_zero() {
        // n even: Tr(1) = 0, both c = 0 and c = 1 valid; canonical pick 0
        let ctx = FieldCtx::with_default_modulus(2, 6).unwrap();
        let f0 = power_fn(&ctx, 3);
        let params = complete_params(&f0, ctx.one(), ctx.one()).unwrap();
        assert!(params.c.is_zero());
        let with_one = ConstructionParams { c: ctx.one(), ..params };
        validate_params(&f0, &with_one).unwrap();
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f0 = power_fn(&ctx, 3);
        // beta = g is not an annihilator for gamma = 1 (only beta = 1 is)
        let bad = complete_params(&f0, ctx.one(), ctx.generator());
        assert!(matches!(bad, Err(Error::InvalidStructurePair { .. })));
    }

    #[test]
    fn involution_fixed_points_and_gold_shape() {
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f0 = power_fn(&ctx, 3);
        let params = complete_params(&f0, ctx.one(), ctx.one()).unwrap();
        let f = adjusted_function(&f0, &params).unwrap();
        let eps = epsilon_table(&f, &params);
        let h = build_involution(&f, &params).unwrap();
        for x in ctx.elements() {
            if eps[x.rank() as usize] == 0 {
                assert_eq!(h.value(x), x);
            }
            // H(x) = x + Tr(x^{2^i+1} + x)
            let t = ctx.trace(ctx.add(ctx.pow(x, 3), x));
            assert_eq!(h.value(x), ctx.add(x, ctx.from_prime(t)));
        }
    }

    #[test]
    fn twist_matches_gold_table_formula() {
        // FH = x^{2^i+1} + x + (x^{2^i} + x) Tr(x^{2^i+1} + x), degree 3
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f0 = power_fn(&ctx, 3);
        let params = complete_params(&f0, ctx.one(), ctx.one()).unwrap();
        let result = twist(&f0, &params).unwrap();
        let direct = VectorialFunction::from_fn(&ctx, &ctx, |x| {
            let x3 = ctx.pow(x, 3);
            let t = ctx.trace(ctx.add(x3, x));
            let lin = ctx.add(ctx.pow(x, 2), x);
            ctx.add(ctx.add(x3, x), ctx.scl(t, lin))
        });
        assert_eq!(result.fh, direct);
        assert_eq!(result.degree, 3);
        assert_eq!(result.f0_degree, 2);
        assert_eq!(result.ea_status, EaStatus::InequivalentByDegree);
        assert_eq!(result.fh, result.fh_closed);
    }

    #[test]
    fn pary_gold_quartic_twist() {
        // p = 3, n = 4, c = 0, gamma = 1, beta^3 + beta = 0, Tr(alpha) = 1:
        // FH = x^{p^i+1} + eps (x^{p^i} + x + 1) + eps^2 - eps, degree 4
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        let f0 = power_fn(&ctx, 4);
        let beta = beta_zeta_recipe(&ctx, 1).unwrap();
        let params = complete_params(&f0, ctx.one(), beta).unwrap();
        assert!(params.c.is_zero());
        assert_eq!(ctx.trace(params.alpha), 1); // -2 = 1 mod 3
        let result = twist(&f0, &params).unwrap();
        assert_eq!(result.degree, 4);
        let alpha = params.alpha;
        let direct = VectorialFunction::from_fn(&ctx, &ctx, |x| {
            let g = ctx.pow(x, 4);
            let e = ctx.trace(ctx.add(ctx.mul(alpha, x), ctx.mul(beta, g)));
            let mid = ctx.add(ctx.add(ctx.pow(x, 3), x), ctx.one());
            let e2me = (e * e + 3 - e) % 3;
            ctx.add(ctx.add(g, ctx.scl(e, mid)), ctx.from_prime(e2me))
        });
        assert_eq!(result.fh, direct);
    }

    #[test]
    fn degenerate_input_degree_collapses() {
        // F_0 = x Tr(x) with Tr(gamma) = 0, Tr(beta gamma) = 0: construction
        // runs but the degree certificate stays silent
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f0 = VectorialFunction::from_fn(&ctx, &ctx, |x| ctx.scl(ctx.trace(x), x));
        let gamma = ctx
            .elements()
            .skip(1)
            .find(|&g| ctx.trace(g) == 0)
            .unwrap();
        let beta = ctx
            .elements()
            .skip(1)
            .find(|&b| ctx.trace(ctx.mul(b, gamma)) == 0 && b != ctx.one())
            .unwrap();
        let params = complete_params(&f0, gamma, beta).unwrap();
        let result = twist(&f0, &params).unwrap();
        assert!(result.degree <= 2);
        assert_eq!(result.ea_status, EaStatus::Undetermined);
    }

    #[test]
    fn lemma_identities_zero_residual() {
        let mut seed = 0x853C49E6748FEA9Bu64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        let ctx = FieldCtx::with_default_modulus(2, 6).unwrap();
        let f = power_fn(&ctx, 3);
        for _ in 0..100 {
            let el = |r: &mut dyn FnMut() -> u64| ctx.element(r() % ctx.size());
            let res = derive_lemma_identities(
                &f,
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
            )
            .unwrap();
            assert!(res.is_zero(), "cubic identity failed: {res:?}");
        }
        let ctx3 = FieldCtx::with_default_modulus(3, 4).unwrap();
        let f3 = power_fn(&ctx3, 4);
        for _ in 0..100 {
            let el = |r: &mut dyn FnMut() -> u64| ctx3.element(r() % ctx3.size());
            let res = derive_lemma_identities(
                &f3,
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
                el(&mut rng),
            )
            .unwrap();
            assert!(res.is_zero(), "quartic identity failed: {res:?}");
        }
        // any gamma_i = 0 keeps both sides at zero
        let res = derive_lemma_identities(
            &f3,
            ctx3.generator(),
            ctx3.element(5),
            ctx3.zero(),
            ctx3.element(7),
            ctx3.element(11),
        )
        .unwrap();
        assert!(res.is_zero());
    }

    #[test]
    fn tuple_count_apn_formula() {
        // APN F_0 at n = 4: exactly 2^{2n-2} (2^n - 1) = 960
        let ctx = FieldCtx::with_default_modulus(2, 4).unwrap();
        let f0 = power_fn(&ctx, 3);
        let count = count_valid_tuples(&f0).unwrap();
        assert_eq!(count.total, 960);
        let all = enumerate_all_tuples(&f0, 1 << 12).unwrap();
        assert_eq!(all.len(), 960);
        for params in all.iter().step_by(37) {
            validate_params(&f0, params).unwrap();
        }
    }

    #[test]
    fn sampled_tuples_are_valid() {
        let ctx = FieldCtx::with_default_modulus(2, 6).unwrap();
        let f0 = power_fn(&ctx, 3);
        for params in sample_valid_tuples(&f0, 50, 7).unwrap() {
            validate_params(&f0, &params).unwrap();
            let h = build_involution(&adjusted_function(&f0, &params).unwrap(), &params).unwrap();
            for x in ctx.elements() {
                assert_eq!(h.value(h.value(x)), x);
            }
        }
    }

    #[test]
    fn recipes() {
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        let alpha = alpha_gcd_recipe(&ctx).unwrap();
        assert_eq!(ctx.trace(alpha), 1); // Tr(-2/n) = -2 = 1 mod 3
        let beta = beta_zeta_recipe(&ctx, 1).unwrap();
        assert!(ctx.add(ctx.pow(beta, 3), beta).is_zero());
        assert!(beta_zeta_recipe(&ctx, 3).is_err());
        let ctx9 = FieldCtx::with_default_modulus(3, 3).unwrap();
        assert!(alpha_gcd_recipe(&ctx9).is_none());
    }
}
