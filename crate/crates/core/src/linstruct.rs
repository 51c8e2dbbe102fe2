//! Linear structures, linear translators and linear kernels of component
//! functions Tr(beta F); the (gamma, beta) structure-pair search; and the
//! linearized annihilator polynomial ell(x) whose roots are the valid beta
//! for a given gamma in characteristic 2.
//!
//! For quadratic F the map L_gamma(x) = D_gamma F(x) - D_gamma F(0) is
//! F_p-bilinear in (gamma, x), which turns every search here into small
//! F_p-linear algebra.

use crate::error::{Error, Result};
use crate::fp::FpMat;
use crate::gfield::{span_iter, Ctx, FieldElement};
use crate::vfunc::{interpolate, UnivariatePoly, VectorialFunction};
use std::sync::Arc;

/// The differential of F at gamma with its constant term removed, evaluated
/// through the value table: L_gamma(x) = F(x+gamma) - F(x) - (F(gamma) - F(0)).
#[inline]
pub fn l_gamma_at(f: &VectorialFunction, gamma: FieldElement, x: FieldElement) -> FieldElement {
    let dom = f.domain();
    let cod = f.codomain();
    let shifted = f.value(dom.add(x, gamma));
    let base = cod.sub(f.value(gamma), f.value(dom.zero()));
    cod.sub(cod.sub(shifted, f.value(x)), base)
}

/// L_gamma as an F_p-linear map F_{p^n} -> F_{p^m}, with cached kernel and
/// image bases. Only meaningful for quadratic F; construction probes
/// linearity and rejects functions where the probes fail.
#[derive(Clone, Debug)]
pub struct LinearMap {
    domain: Ctx,
    codomain: Ctx,
    matrix: FpMat,
    kernel: Vec<FieldElement>,
    image: Vec<FieldElement>,
}

impl LinearMap {
    pub fn matrix(&self) -> &FpMat {
        &self.matrix
    }

    pub fn kernel_basis(&self) -> &[FieldElement] {
        &self.kernel
    }

    pub fn image_basis(&self) -> &[FieldElement] {
        &self.image
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    pub fn nullity(&self) -> usize {
        self.kernel.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.codomain.n() as usize
    }

    pub fn apply(&self, x: FieldElement) -> FieldElement {
        let coords = self.domain.coeffs(x);
        self.codomain.from_coeffs(&self.matrix.mul_vec(&coords))
    }
}

/// Matrix form of L_gamma for quadratic F; errors when an additivity probe
/// reveals the function is not quadratic.
pub fn lmap_of(f: &VectorialFunction, gamma: FieldElement) -> Result<LinearMap> {
    let dom = f.domain();
    let cod = f.codomain();
    assert!(!gamma.is_zero(), "gamma must be nonzero");
    let n = dom.n() as usize;
    let m = cod.n() as usize;
    let matrix = FpMat::from_fn(dom.p(), m, n, |r, c| {
        let img = l_gamma_at(f, gamma, dom.basis_vector(c));
        cod.coeffs(img)[r]
    });
    let map = LinearMap {
        domain: Arc::clone(dom),
        codomain: Arc::clone(cod),
        kernel: matrix.nullspace().iter().map(|v| dom.from_coeffs(v)).collect(),
        image: column_space_basis(&matrix, cod),
        matrix,
    };
    // cheap additivity probes catch callers handing in non-quadratic F
    let mut state = gamma.rank().wrapping_mul(0x9E3779B97F4A7C15) | 1;
    for _ in 0..20 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let x = dom.element(state % dom.size());
        if l_gamma_at(f, gamma, x) != map.apply(x) {
            return Err(Error::NotQuadratic);
        }
    }
    Ok(map)
}

fn column_space_basis(matrix: &FpMat, cod: &Ctx) -> Vec<FieldElement> {
    let mut copy = matrix.clone();
    let pivots = copy.rref();
    pivots
        .iter()
        .map(|&col| {
            let coords: Vec<u64> = (0..matrix.rows).map(|r| matrix.at(r, col)).collect();
            cod.from_coeffs(&coords)
        })
        .collect()
}

/// Basis of (Im L)^perp = { beta : Tr(beta L(x)) = 0 for all x }, computed as
/// the null space of the trace pairing against the image basis.
pub fn annihilators_of_image(map: &LinearMap) -> Vec<FieldElement> {
    let cod = &map.codomain;
    let m = cod.n() as usize;
    let rows = map.image.len();
    if rows == 0 {
        // zero map: every beta annihilates
        return (0..m).map(|j| cod.basis_vector(j)).collect();
    }
    let pairing = FpMat::from_fn(cod.p(), rows, m, |r, c| {
        cod.trace(cod.mul(map.image[r], cod.basis_vector(c)))
    });
    pairing
        .nullspace()
        .iter()
        .map(|v| cod.from_coeffs(v))
        .collect()
}

/// The linear kernel LK of the component Tr(beta F): all gamma with
/// Tr(beta L_gamma(x)) = 0 for every x.
#[derive(Clone, Debug)]
pub struct LinearKernel {
    pub basis: Vec<FieldElement>,
    pub dim: usize,
}

impl LinearKernel {
    pub fn iter_elements<'a>(&'a self, ctx: &'a Ctx) -> impl Iterator<Item = FieldElement> + 'a {
        span_iter(ctx, &self.basis)
    }
}

/// Linear kernel of Tr(beta F) for quadratic F, via the bilinear form
/// B[i][j] = Tr(beta L_{e_j}(e_i)) on the power basis.
pub fn linear_kernel(f: &VectorialFunction, beta: FieldElement) -> Result<LinearKernel> {
    let dom = f.domain();
    let cod = f.codomain();
    assert!(!beta.is_zero(), "beta must be nonzero");
    assert_eq!(beta.ctx_id(), cod.id());
    let n = dom.n() as usize;
    let form = FpMat::from_fn(dom.p(), n, n, |i, j| {
        let lij = l_gamma_at(f, dom.basis_vector(j), dom.basis_vector(i));
        cod.trace(cod.mul(beta, lij))
    });
    let basis: Vec<FieldElement> = form.nullspace().iter().map(|v| dom.from_coeffs(v)).collect();
    // probe that the bilinear reduction was legitimate (quadratic F)
    let mut state = beta.rank().wrapping_mul(0xA24BAED4963EE407) | 1;
    for _ in 0..20 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let gamma = dom.element(state % dom.size());
        state ^= state >> 11;
        let x = dom.element(state % dom.size());
        let actual = cod.trace(cod.mul(beta, l_gamma_at(f, gamma, x)));
        let gc = dom.coeffs(gamma);
        let xc = dom.coeffs(x);
        let mut predicted = 0u64;
        for (i, &xi) in xc.iter().enumerate() {
            for (j, &gj) in gc.iter().enumerate() {
                predicted = (predicted + form.at(i, j) * xi % dom.p() * gj) % dom.p();
            }
        }
        if actual != predicted {
            return Err(Error::NotQuadratic);
        }
    }
    Ok(LinearKernel { dim: basis.len(), basis })
}

/// Smallest nonzero element (canonical rank order) of the span of `basis`.
pub fn min_nonzero_in_span(ctx: &Ctx, basis: &[FieldElement]) -> Option<FieldElement> {
    span_iter(ctx, basis).filter(|e| !e.is_zero()).min()
}

/// First (gamma, beta) pair in canonical order such that gamma is a linear
/// structure of Tr(beta F); `None` exactly when no component has one
/// (for quadratic F: p odd and F planar).
pub fn find_structure_pair(
    f: &VectorialFunction,
) -> Result<Option<(FieldElement, FieldElement)>> {
    let dom = f.domain();
    for gamma in dom.elements().skip(1) {
        let map = lmap_of(f, gamma)?;
        let ann = annihilators_of_image(&map);
        if let Some(beta) = min_nonzero_in_span(f.codomain(), &ann) {
            return Ok(Some((gamma, beta)));
        }
    }
    Ok(None)
}

/// Every (gamma, beta) structure pair, gamma-major canonical order.
pub fn structure_pairs(f: &VectorialFunction) -> Result<Vec<(FieldElement, FieldElement)>> {
    let dom = f.domain();
    let cod = f.codomain();
    let mut out = Vec::new();
    for gamma in dom.elements().skip(1) {
        let map = lmap_of(f, gamma)?;
        let ann = annihilators_of_image(&map);
        let mut betas: Vec<FieldElement> =
            span_iter(cod, &ann).filter(|b| !b.is_zero()).collect();
        betas.sort();
        out.extend(betas.into_iter().map(|b| (gamma, b)));
    }
    Ok(out)
}

/// The constant b in F_p with Tr(beta F(x + gamma)) - Tr(beta F(x)) = b for
/// all x, if the difference is constant; works for arbitrary F.
pub fn is_linear_structure(
    f: &VectorialFunction,
    beta: FieldElement,
    gamma: FieldElement,
) -> Option<u64> {
    let dom = f.domain();
    let cod = f.codomain();
    let component = |x: FieldElement| cod.trace(cod.mul(beta, f.value(x)));
    let b = (component(gamma) + dom.p() - component(dom.zero())) % dom.p();
    for x in dom.elements() {
        let diff = (component(dom.add(x, gamma)) + dom.p() - component(x)) % dom.p();
        if diff != b {
            return None;
        }
    }
    Some(b)
}

/// The linearized polynomial ell(x) whose roots are exactly the valid beta
/// for the given gamma (characteristic 2 only): writing
/// L_gamma(x) = sum a_i x^{2^i}, the coefficient of x^{2^j} in ell is
/// a_{(n-j) mod n}^{2^j}.
pub fn ell_polynomial(f: &VectorialFunction, gamma: FieldElement) -> Result<UnivariatePoly> {
    let dom = f.domain();
    if dom.p() != 2 {
        return Err(Error::NotBinary);
    }
    assert!(f.is_nn(), "ell(x) is defined for (n,n)-functions");
    assert!(!gamma.is_zero(), "gamma must be nonzero");
    let n = dom.n();
    let l_table = VectorialFunction::from_fn(dom, dom, |x| l_gamma_at(f, gamma, x));
    let l_poly = interpolate(&l_table)?;
    // a linearized polynomial only carries 2-power exponents
    let mut coeffs = vec![dom.zero(); n as usize];
    for (e, c) in l_poly.terms() {
        let i = e.trailing_zeros();
        if e != 1u64 << i || i >= n {
            return Err(Error::NotQuadratic);
        }
        coeffs[i as usize] = c;
    }
    let mut ell = UnivariatePoly::zero(dom);
    for j in 0..n {
        let src = coeffs[((n - j) % n) as usize];
        if src.is_zero() {
            continue;
        }
        let c = dom.frob_iter(src, j);
        ell.insert_add(1u64 << j, c);
    }
    Ok(ell)
}

/// All roots of a sparse polynomial, by evaluation sweep.
pub fn roots_of(poly: &UnivariatePoly) -> Vec<FieldElement> {
    let ctx = poly.ctx();
    ctx.elements()
        .filter(|&x| poly.evaluate_at(x).is_zero())
        .collect()
}
