//! (n,m)-functions as value tables, univariate polynomials over F_{p^n},
//! conversion between the two, algebraic degree and the DO/linear/constant
//! decomposition of quadratic functions.

use crate::error::{Error, Result};
use crate::gfield::{canonical_embedding, Ctx, FieldElement};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::sync::OnceLock;

/// A function F_{p^n} -> F_{p^m} stored as a full value table indexed by
/// domain rank. For (n,n)-functions domain and codomain coincide.
#[derive(Clone, Debug)]
pub struct VectorialFunction {
    domain: Ctx,
    codomain: Ctx,
    table: Vec<FieldElement>,
    degree_cache: OnceLock<u32>,
}

impl PartialEq for VectorialFunction {
    fn eq(&self, other: &Self) -> bool {
        self.domain.id() == other.domain.id()
            && self.codomain.id() == other.codomain.id()
            && self.table == other.table
    }
}
impl Eq for VectorialFunction {}

impl VectorialFunction {
    pub fn from_table(domain: &Ctx, codomain: &Ctx, table: Vec<FieldElement>) -> Self {
        assert_eq!(table.len() as u64, domain.size(), "table length must be p^n");
        assert!(
            table.iter().all(|v| v.ctx_id() == codomain.id()),
            "table entries must belong to the codomain"
        );
        assert!(
            codomain.p() == domain.p() && domain.n() % codomain.n() == 0,
            "codomain must be F_{{p^m}} with m | n"
        );
        VectorialFunction {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            table,
            degree_cache: OnceLock::new(),
        }
    }

    pub fn from_fn(domain: &Ctx, codomain: &Ctx, f: impl Fn(FieldElement) -> FieldElement) -> Self {
        let table = domain.elements().map(f).collect();
        Self::from_table(domain, codomain, table)
    }

    /// Identity map on a field.
    pub fn identity(ctx: &Ctx) -> Self {
        Self::from_fn(ctx, ctx, |x| x)
    }

    pub fn domain(&self) -> &Ctx {
        &self.domain
    }

    pub fn codomain(&self) -> &Ctx {
        &self.codomain
    }

    pub fn is_nn(&self) -> bool {
        self.domain.id() == self.codomain.id()
    }

    pub fn table(&self) -> &[FieldElement] {
        &self.table
    }

    #[inline]
    pub fn value(&self, x: FieldElement) -> FieldElement {
        assert_eq!(x.ctx_id(), self.domain.id());
        self.table[x.rank() as usize]
    }

    #[inline]
    pub fn value_at_rank(&self, rank: u64) -> FieldElement {
        self.table[rank as usize]
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.domain.id(), other.domain.id());
        assert_eq!(self.codomain.id(), other.codomain.id());
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(&a, &b)| self.codomain.add(a, b))
            .collect();
        Self::from_table(&self.domain, &self.codomain, table)
    }

    /// f(g(x)); g must land in f's domain.
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(
            inner.codomain.id(),
            self.domain.id(),
            "codomain of inner function must equal domain of outer"
        );
        let table = inner
            .table
            .iter()
            .map(|v| self.table[v.rank() as usize])
            .collect();
        Self::from_table(&inner.domain, &self.codomain, table)
    }

    /// Directional derivative D_gamma f (x) = f(x + gamma) - f(x).
    pub fn derivative(&self, gamma: FieldElement) -> Self {
        assert_eq!(gamma.ctx_id(), self.domain.id());
        let d = &self.domain;
        let table = d
            .elements()
            .map(|x| {
                let shifted = self.table[d.add(x, gamma).rank() as usize];
                self.codomain.sub(shifted, self.table[x.rank() as usize])
            })
            .collect();
        Self::from_table(d, &self.codomain, table)
    }

    pub fn is_bijective(&self) -> bool {
        if !self.is_nn() {
            return false;
        }
        let mut seen = vec![false; self.table.len()];
        for v in &self.table {
            let r = v.rank() as usize;
            if seen[r] {
                return false;
            }
            seen[r] = true;
        }
        true
    }

    pub fn compositional_inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![self.domain.zero(); self.table.len()];
        for (x, v) in self.table.iter().enumerate() {
            inv[v.rank() as usize] = self.domain.element(x as u64);
        }
        Some(Self::from_table(&self.domain, &self.codomain, inv))
    }

    /// Table of the codomain function lifted into the domain field through
    /// the canonical subfield embedding; identity for (n,n).
    pub fn lifted_table(&self) -> Result<Vec<FieldElement>> {
        if self.is_nn() {
            return Ok(self.table.clone());
        }
        let emb = canonical_embedding(&self.codomain, &self.domain)?;
        Ok(self.table.iter().map(|&v| emb.embed(v)).collect())
    }

    /// Algebraic degree, computed through interpolation once and cached.
    pub fn degree(&self) -> Result<u32> {
        if let Some(&d) = self.degree_cache.get() {
            return Ok(d);
        }
        let d = interpolate(self)?.algebraic_degree();
        Ok(*self.degree_cache.get_or_init(|| d))
    }

    pub fn known_degree(&self) -> Option<u32> {
        self.degree_cache.get().copied()
    }

    pub fn set_degree_hint(&self, d: u32) {
        let _ = self.degree_cache.set(d);
    }

    /// One hex rank per line, line index = input rank.
    pub fn to_table_file(&self) -> String {
        let mut out = String::with_capacity(self.table.len() * 6);
        for v in &self.table {
            let _ = writeln!(out, "{:#x}", v.rank());
        }
        out
    }

    pub fn parse_table_file(domain: &Ctx, codomain: &Ctx, text: &str) -> Result<Self> {
        let mut table = Vec::with_capacity(domain.size() as usize);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = codomain.parse_element(line).map_err(|e| Error::BadTable {
                line: i + 1,
                msg: e.to_string(),
            })?;
            table.push(v);
        }
        if table.len() as u64 != domain.size() {
            return Err(Error::BadTable {
                line: table.len(),
                msg: format!("expected {} entries, got {}", domain.size(), table.len()),
            });
        }
        Ok(Self::from_table(domain, codomain, table))
    }
}

/// p-weight of an exponent: digit sum of its base-p expansion.
pub fn p_weight(mut e: u64, p: u64) -> u32 {
    let mut w = 0;
    while e > 0 {
        w += (e % p) as u32;
        e /= p;
    }
    w
}

/// Sparse univariate polynomial over F_{p^n}, exponents < p^n.
#[derive(Clone, Debug)]
pub struct UnivariatePoly {
    ctx: Ctx,
    terms: BTreeMap<u64, FieldElement>,
}

impl PartialEq for UnivariatePoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.terms == other.terms
    }
}
impl Eq for UnivariatePoly {}

impl UnivariatePoly {
    pub fn zero(ctx: &Ctx) -> Self {
        UnivariatePoly { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (u64, FieldElement)>) -> Self {
        let mut poly = Self::zero(ctx);
        for (e, c) in terms {
            poly.insert_add(e, c);
        }
        poly
    }

    /// Monomial c x^e.
    pub fn monomial(ctx: &Ctx, e: u64, c: FieldElement) -> Self {
        Self::from_terms(ctx, [(e, c)])
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, FieldElement)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coefficient(&self, e: u64) -> FieldElement {
        self.terms.get(&e).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate c x^e, dropping the term if the coefficient cancels.
    pub fn insert_add(&mut self, e: u64, c: FieldElement) {
        assert!(e < self.ctx.size(), "exponent out of range");
        assert_eq!(c.ctx_id(), self.ctx.id());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(|| self.ctx.zero());
        *entry = self.ctx.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ctx.id(), other.ctx.id());
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.insert_add(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.ctx.id(), other.ctx.id());
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.insert_add(e, self.ctx.neg(c));
        }
        out
    }

    /// Maximum p-weight over stored exponents; 0 for the zero polynomial.
    pub fn algebraic_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&e| p_weight(e, self.ctx.p()))
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate_at(&self, x: FieldElement) -> FieldElement {
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for (&e, &c) in &self.terms {
            acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, e)));
        }
        acc
    }

    /// Canonical string form, terms in descending exponent order:
    /// `x^9 + g^5*x^3 + g^2` with `g` the context generator.
    pub fn poly_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let ctx = &self.ctx;
        let g = ctx.generator();
        let mut parts = Vec::with_capacity(self.terms.len());
        for (&e, &c) in self.terms.iter().rev() {
            let coef = if c == ctx.one() {
                None
            } else {
                // discrete log of the coefficient in the generator
                let mut k = 0u64;
                let mut cur = ctx.one();
                while cur != c {
                    cur = ctx.mul(cur, g);
                    k += 1;
                }
                Some(if k == 1 { "g".to_string() } else { format!("g^{k}") })
            };
            let part = match (coef, e) {
                (None, 0) => "1".to_string(),
                (None, 1) => "x".to_string(),
                (None, _) => format!("x^{e}"),
                (Some(cs), 0) => cs,
                (Some(cs), 1) => format!("{cs}*x"),
                (Some(cs), _) => format!("{cs}*x^{e}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }

    /// Parse the canonical string form. Coefficients may be written as `g^k`,
    /// `g`, a decimal prime-field constant, or a `0x..` element rank.
    pub fn parse(ctx: &Ctx, s: &str) -> Result<Self> {
        let mut poly = Self::zero(ctx);
        let s = s.trim();
        if s == "0" {
            return Ok(poly);
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 && !cur.trim().is_empty() => {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
                '-' if i == 0 => neg = true,
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            terms.push((neg, cur));
        }
        for (negated, term) in terms {
            let term = term.replace(' ', "");
            if term.is_empty() {
                return Err(Error::BadPolynomial(format!("empty term in `{s}`")));
            }
            let (coef_str, exp) = match term.find('x') {
                // careful: '0x..' hex ranks contain an 'x'
                Some(idx) if !(idx >= 1 && term.as_bytes()[idx - 1] == b'0' && !term[..idx - 1].contains('x'))
                    || !term[idx + 1..].starts_with(|c: char| c.is_ascii_hexdigit()) =>
                {
                    let coef = term[..idx].trim_end_matches('*');
                    let rest = &term[idx + 1..];
                    let e = if let Some(e) = rest.strip_prefix('^') {
                        e.parse::<u64>()
                            .map_err(|e| Error::BadPolynomial(format!("bad exponent in `{term}`: {e}")))?
                    } else if rest.is_empty() {
                        1
                    } else {
                        return Err(Error::BadPolynomial(format!("bad term `{term}`")));
                    };
                    (coef.to_string(), e)
                }
                _ => (term.clone(), 0),
            };
            let mut c = parse_coefficient(ctx, &coef_str)?;
            if negated {
                c = ctx.neg(c);
            }
            if exp >= ctx.size() {
                return Err(Error::BadPolynomial(format!(
                    "exponent {exp} out of range in `{term}`"
                )));
            }
            poly.insert_add(exp, c);
        }
        Ok(poly)
    }
}

fn parse_coefficient(ctx: &Ctx, s: &str) -> Result<FieldElement> {
    if s.is_empty() {
        return Ok(ctx.one());
    }
    if s == "g" {
        return Ok(ctx.generator());
    }
    if let Some(k) = s.strip_prefix("g^") {
        let k: u64 = k
            .parse()
            .map_err(|e| Error::BadPolynomial(format!("bad generator power `{s}`: {e}")))?;
        return Ok(ctx.pow(ctx.generator(), k));
    }
    if s.starts_with("0x") || s.starts_with("0X") {
        return ctx
            .parse_element(s)
            .map_err(|e| Error::BadPolynomial(e.to_string()));
    }
    let v: u64 = s
        .parse()
        .map_err(|e| Error::BadPolynomial(format!("bad coefficient `{s}`: {e}")))?;
    Ok(ctx.from_prime(v))
}

/// Build the value table of a polynomial.
pub fn evaluate(poly: &UnivariatePoly) -> VectorialFunction {
    let ctx = poly.ctx();
    VectorialFunction::from_fn(ctx, ctx, |x| poly.evaluate_at(x))
}

/// Unique polynomial of degree < p^n through all table points, computed by
/// multiplicative-group discrete Fourier coefficients over a fixed generator:
/// c_j = -sum_{a != 0} f(a) a^{-j} for 1 <= j <= p^n - 2, with c_0 = f(0) and
/// the x^{p^n - 1} coefficient equal to -sum_a f(a).
///
/// (n,m)-functions are first lifted into F_{p^n} through the canonical
/// subfield embedding.
pub fn interpolate(f: &VectorialFunction) -> Result<UnivariatePoly> {
    let ctx = f.domain();
    let q = ctx.size();
    let table = f.lifted_table()?;

    let mut poly = UnivariatePoly::zero(ctx);
    poly.insert_add(0, table[0]);
    let mut total = ctx.zero();
    for &v in &table {
        total = ctx.add(total, v);
    }
    if q >= 2 {
        poly.insert_add(q - 1, ctx.neg(total));
    }

    let g = ctx.generator();
    let ord = q - 1;
    // vals[t] = f(g^t)
    let mut powers = Vec::with_capacity(ord as usize);
    let mut vals = Vec::with_capacity(ord as usize);
    let mut cur = ctx.one();
    for _ in 0..ord {
        powers.push(cur);
        vals.push(table[cur.rank() as usize]);
        cur = ctx.mul(cur, g);
    }
    for j in 1..ord {
        // g^{-j t} walks by steps of g^{ord - j}
        let step = (ord - j) % ord;
        let mut idx = 0u64;
        let mut acc = ctx.zero();
        for t in 0..ord as usize {
            let v = vals[t];
            if !v.is_zero() {
                acc = ctx.add(acc, ctx.mul(v, powers[idx as usize]));
            }
            idx += step;
            if idx >= ord {
                idx -= ord;
            }
        }
        poly.insert_add(j, ctx.neg(acc));
    }
    Ok(poly)
}

/// Split a polynomial of algebraic degree <= 2 into its Dembowski-Ostrom
/// part (exponent p-weight 2), linear part (weight 1) and constant.
pub fn do_decompose(
    poly: &UnivariatePoly,
) -> Result<(UnivariatePoly, UnivariatePoly, FieldElement)> {
    let deg = poly.algebraic_degree();
    if deg > 2 {
        return Err(Error::DegreeTooHigh(deg));
    }
    let ctx = poly.ctx();
    let p = ctx.p();
    let mut do_part = UnivariatePoly::zero(ctx);
    let mut linear = UnivariatePoly::zero(ctx);
    let mut constant = ctx.zero();
    for (e, c) in poly.terms() {
        match p_weight(e, p) {
            0 => constant = ctx.add(constant, c),
            1 => linear.insert_add(e, c),
            2 => do_part.insert_add(e, c),
            _ => unreachable!(),
        }
    }
    Ok((do_part, linear, constant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::FieldCtx;

    fn f2n(n: u32) -> Ctx {
        FieldCtx::with_default_modulus(2, n).unwrap()
    }

    #[test]
    fn zero_poly_evaluates_to_zero_table() {
        let ctx = f2n(4);
        let f = evaluate(&UnivariatePoly::zero(&ctx));
        assert!(f.table().iter().all(|v| v.is_zero()));
        assert_eq!(UnivariatePoly::zero(&ctx).algebraic_degree(), 0);
    }

    #[test]
    fn cube_on_f8_forced_by_modulus() {
        // u^3 = u + 1 under u^3 + u + 1 = 0
        let ctx = f2n(3);
        let cube = UnivariatePoly::monomial(&ctx, 3, ctx.one());
        let f = evaluate(&cube);
        let u = ctx.element(2);
        assert_eq!(f.value(u), ctx.element(0b011));
    }

    #[test]
    fn gold_plus_x_vanishes_at_one_for_odd_n() {
        let ctx = f2n(5);
        let poly = UnivariatePoly::from_terms(&ctx, [(3, ctx.one()), (1, ctx.one())]);
        assert!(evaluate(&poly).value(ctx.one()).is_zero());
    }

    #[test]
    fn identity_interpolates_to_x() {
        let ctx = f2n(4);
        let poly = interpolate(&VectorialFunction::identity(&ctx)).unwrap();
        assert_eq!(poly, UnivariatePoly::monomial(&ctx, 1, ctx.one()));
    }

    #[test]
    fn interpolation_round_trip_sparse() {
        let mut seed = 0xD1B54A32D192ED03u64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for n in 4..=7 {
            let ctx = f2n(n);
            for _ in 0..25 {
                let mut poly = UnivariatePoly::zero(&ctx);
                for _ in 0..4 {
                    let e = rng() % ctx.size();
                    let c = ctx.element(rng() % ctx.size());
                    poly.insert_add(e, c);
                }
                let back = interpolate(&evaluate(&poly)).unwrap();
                assert_eq!(back, poly);
            }
        }
        // odd characteristic too
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        for _ in 0..25 {
            let mut poly = UnivariatePoly::zero(&ctx);
            for _ in 0..4 {
                poly.insert_add(rng() % ctx.size(), ctx.element(rng() % ctx.size()));
            }
            assert_eq!(interpolate(&evaluate(&poly)).unwrap(), poly);
        }
    }

    #[test]
    fn degree_of_power_functions() {
        let ctx = f2n(6);
        assert_eq!(UnivariatePoly::monomial(&ctx, 3, ctx.one()).algebraic_degree(), 2);
        let ctx3 = FieldCtx::with_default_modulus(3, 4).unwrap();
        assert_eq!(UnivariatePoly::monomial(&ctx3, 4, ctx3.one()).algebraic_degree(), 2);
        assert_eq!(p_weight(3, 2), 2);
        assert_eq!(p_weight(4, 3), 2);
    }

    #[test]
    fn gold_twist_table_has_weight_three_exponent() {
        // table of x^{2^i+1} + (x^{2^i}+x) Tr(x^{2^i+1}+x) on F_{2^5}, i = 1
        let ctx = f2n(5);
        let f = VectorialFunction::from_fn(&ctx, &ctx, |x| {
            let x3 = ctx.pow(x, 3);
            let core = ctx.add(x3, x);
            let t = ctx.trace(core);
            let lin = ctx.add(ctx.pow(x, 2), x);
            ctx.add(x3, ctx.scl(t, lin))
        });
        let poly = interpolate(&f).unwrap();
        assert_eq!(poly.algebraic_degree(), 3);
    }

    #[test]
    fn do_decompose_splits_by_weight() {
        let ctx = f2n(5);
        let c = ctx.generator();
        // x^{2^i+1} + c x -> (x^3, cx, 0)
        let poly = UnivariatePoly::from_terms(&ctx, [(3, ctx.one()), (1, c)]);
        let (do_part, lin, konst) = do_decompose(&poly).unwrap();
        assert_eq!(do_part, UnivariatePoly::monomial(&ctx, 3, ctx.one()));
        assert_eq!(lin, UnivariatePoly::monomial(&ctx, 1, c));
        assert!(konst.is_zero());
        // p=2: exponent 2^{i+1} has weight 1, lands in the linear part
        let sq = UnivariatePoly::monomial(&ctx, 4, ctx.one());
        let (d2, l2, _) = do_decompose(&sq).unwrap();
        assert!(d2.is_zero());
        assert_eq!(l2.num_terms(), 1);
        // degree > 2 is rejected
        let cubic = UnivariatePoly::monomial(&ctx, 7, ctx.one());
        assert!(do_decompose(&cubic).is_err());
        // DO-part of x^{p^i+1} evaluated at gamma = 1 is 1
        let ctx3 = FieldCtx::with_default_modulus(3, 4).unwrap();
        let gold = UnivariatePoly::monomial(&ctx3, 4, ctx3.one());
        let (dp, _, _) = do_decompose(&gold).unwrap();
        assert_eq!(dp.evaluate_at(ctx3.one()), ctx3.one());
    }

    #[test]
    fn derivative_examples() {
        let ctx = f2n(5);
        let cube = evaluate(&UnivariatePoly::monomial(&ctx, 3, ctx.one()));
        // D_0 f = 0
        assert!(cube
            .derivative(ctx.zero())
            .table()
            .iter()
            .all(|v| v.is_zero()));
        // D_1 x^3 = x^2 + x + 1
        let d1 = cube.derivative(ctx.one());
        let expected = evaluate(&UnivariatePoly::from_terms(
            &ctx,
            [(2, ctx.one()), (1, ctx.one()), (0, ctx.one())],
        ));
        assert_eq!(d1, expected);
    }

    #[test]
    fn composition_with_identity() {
        let ctx = f2n(4);
        let f = evaluate(&UnivariatePoly::monomial(&ctx, 3, ctx.one()));
        assert_eq!(f.compose(&VectorialFunction::identity(&ctx)), f);
        assert_eq!(VectorialFunction::identity(&ctx).compose(&f), f);
    }

    #[test]
    fn l_gamma_additivity_for_quadratic() {
        // L_{gamma+gamma'} = L_gamma + L_gamma' pointwise, exhaustively at n=4
        let ctx = f2n(4);
        let f = evaluate(&UnivariatePoly::monomial(&ctx, 3, ctx.one()));
        let l = |gamma: FieldElement| {
            let d = f.derivative(gamma);
            let d0 = d.value(ctx.zero());
            VectorialFunction::from_fn(&ctx, &ctx, |x| ctx.sub(d.value(x), d0))
        };
        for g1 in ctx.elements() {
            for g2 in ctx.elements() {
                assert_eq!(l(ctx.add(g1, g2)), l(g1).add(&l(g2)));
            }
        }
    }

    #[test]
    fn poly_string_roundtrip() {
        let ctx = f2n(4);
        let g = ctx.generator();
        let poly = UnivariatePoly::from_terms(
            &ctx,
            [
                (9, ctx.one()),
                (3, ctx.pow(g, 5)),
                (0, ctx.pow(g, 2)),
            ],
        );
        let s = poly.poly_string();
        assert_eq!(s, "x^9 + g^5*x^3 + g^2");
        assert_eq!(UnivariatePoly::parse(&ctx, &s).unwrap(), poly);
        assert_eq!(UnivariatePoly::parse(&ctx, "0").unwrap(), UnivariatePoly::zero(&ctx));
        // odd characteristic with minus signs and integer coefficients
        let ctx3 = FieldCtx::with_default_modulus(3, 3).unwrap();
        let parsed = UnivariatePoly::parse(&ctx3, "x^4 - x + 2").unwrap();
        let direct = UnivariatePoly::from_terms(
            &ctx3,
            [
                (4, ctx3.one()),
                (1, ctx3.from_prime(2)),
                (0, ctx3.from_prime(2)),
            ],
        );
        assert_eq!(parsed, direct);
    }

    #[test]
    fn table_file_roundtrip() {
        let ctx = f2n(4);
        let f = evaluate(&UnivariatePoly::monomial(&ctx, 3, ctx.one()));
        let text = f.to_table_file();
        let back = VectorialFunction::parse_table_file(&ctx, &ctx, &text).unwrap();
        assert_eq!(back, f);
        assert!(VectorialFunction::parse_table_file(&ctx, &ctx, "0x0\n0x1\n").is_err());
    }

    #[test]
    fn nm_function_lift_and_interpolate() {
        // Tr^4_2 : F_16 -> F_4 interpolates to x + x^4 lifted
        let dom = f2n(4);
        let cod = f2n(2);
        let emb = canonical_embedding(&cod, &dom).unwrap();
        let f = VectorialFunction::from_fn(&dom, &cod, |x| {
            emb.retract(dom.rel_trace(x, 2).unwrap()).unwrap()
        });
        let poly = interpolate(&f).unwrap();
        let expected = UnivariatePoly::from_terms(&dom, [(1, dom.one()), (4, dom.one())]);
        assert_eq!(poly, expected);
        assert_eq!(f.degree().unwrap(), 1);
    }
}
