//! Exact arithmetic in F_{p^n}: field contexts, elements, trace maps,
//! subfield embeddings and affine trace constraints.
//!
//! A [`FieldCtx`] fixes the prime p, the extension degree n and a monic
//! irreducible modulus of degree n over F_p. Elements are stored by their
//! integer rank sum(coeffs[i] * p^i) with coordinates taken in the power
//! basis of the modulus root. All arithmetic goes through the context; for
//! p^n <= 2^20 discrete-log tables back multiplication, above that the
//! schoolbook reduction path is used.

use crate::error::{Error, Result};
use crate::fp::{self, fp_add, fp_mul, fp_sub, FpMat};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

/// Shared handle to a field context.
pub type Ctx = Arc<FieldCtx>;

/// Hard cap on p^n; desk-scale fields only.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;
/// Discrete-log and trace tables are built up to this size.
pub const TABLE_LIMIT: u64 = 1 << 20;

static NEXT_CTX_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CtxId(u32);

/// Element of F_{p^n}. A plain value: copyable, sendable, ordered by rank.
///
/// The context id is carried along so that cross-field arithmetic is caught
/// at the first operation rather than producing garbage.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement {
    rank: u64,
    ctx: CtxId,
}

impl FieldElement {
    #[inline]
    pub fn rank(&self) -> u64 {
        self.rank
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    #[inline]
    pub fn ctx_id(&self) -> CtxId {
        self.ctx
    }
}

pub struct FieldCtx {
    p: u64,
    n: u32,
    size: u64,
    modulus: Vec<u64>,
    id: CtxId,
    generator_rank: u64,
    log: Option<Vec<u32>>,
    antilog: Option<Vec<u32>>,
    trace_tab: Option<Vec<u8>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx({})", self.spec_string())
    }
}

impl FieldCtx {
    /// Build a context from an explicit monic irreducible modulus
    /// (ascending coefficients, length n+1).
    pub fn new(p: u64, n: u32, modulus: Vec<u64>) -> Result<Ctx> {
        if !fp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::BadFieldSpec("extension degree must be >= 1".into()));
        }
        let size = (p as u128).pow(n);
        if size > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge(size.min(u64::MAX as u128) as u64));
        }
        let size = size as u64;
        let mut modulus = modulus;
        for c in &mut modulus {
            *c %= p;
        }
        fp::poly_trim(&mut modulus);
        if fp::poly_deg(&modulus) != Some(n as usize)
            || modulus[n as usize] != 1
            || !fp::poly_is_irreducible(&modulus, p)
        {
            return Err(Error::NotIrreducible(n));
        }

        let mut ctx = FieldCtx {
            p,
            n,
            size,
            modulus,
            id: CtxId(NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed)),
            generator_rank: 0,
            log: None,
            antilog: None,
            trace_tab: None,
        };
        ctx.generator_rank = ctx.find_generator();
        if size <= TABLE_LIMIT {
            ctx.build_tables();
        }
        Ok(Arc::new(ctx))
    }

    /// Context with the canonical default modulus: the monic irreducible of
    /// degree n whose non-leading coefficient vector has the smallest rank.
    pub fn with_default_modulus(p: u64, n: u32) -> Result<Ctx> {
        Self::new(p, n, default_modulus(p, n)?)
    }

    /// Parse a field spec like `p=2,n=9,mod=x^9+x^4+1`. The `mod` part is
    /// optional; without it the default modulus is used.
    pub fn parse_spec(spec: &str) -> Result<Ctx> {
        let mut p = None;
        let mut n = None;
        let mut modulus = None;
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::BadFieldSpec(format!("expected key=value, got `{part}`")))?;
            match key.trim() {
                "p" => {
                    p = Some(value.trim().parse::<u64>().map_err(|e| {
                        Error::BadFieldSpec(format!("bad characteristic `{value}`: {e}"))
                    })?)
                }
                "n" => {
                    n = Some(value.trim().parse::<u32>().map_err(|e| {
                        Error::BadFieldSpec(format!("bad degree `{value}`: {e}"))
                    })?)
                }
                "mod" => modulus = Some(value.trim().to_string()),
                other => return Err(Error::BadFieldSpec(format!("unknown key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::BadFieldSpec("missing p".into()))?;
        let n = n.ok_or_else(|| Error::BadFieldSpec("missing n".into()))?;
        match modulus {
            Some(m) => Self::new(p, n, parse_modulus(&m, p)?),
            None => Self::with_default_modulus(p, n),
        }
    }

    /// Canonical spec string for this context.
    pub fn spec_string(&self) -> String {
        format!("p={},n={},mod={}", self.p, self.n, format_modulus(&self.modulus))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of elements p^n.
    #[inline]
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn id(&self) -> CtxId {
        self.id
    }

    #[inline]
    fn check(&self, x: FieldElement) {
        assert!(
            x.ctx == self.id,
            "element belongs to a different field context"
        );
    }

    #[inline]
    pub fn element(&self, rank: u64) -> FieldElement {
        assert!(rank < self.size, "rank {rank} out of range");
        FieldElement { rank, ctx: self.id }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Smallest-rank multiplicative generator.
    pub fn generator(&self) -> FieldElement {
        self.element(self.generator_rank)
    }

    /// Element of the prime subfield with value s (0 <= s < p).
    #[inline]
    pub fn from_prime(&self, s: u64) -> FieldElement {
        self.element(s % self.p)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size).map(move |r| FieldElement { rank: r, ctx: self.id })
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        self.check(x);
        rank_to_coeffs(x.rank, self.p, self.n)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.n as usize);
        let mut rank = 0u64;
        for &c in coeffs.iter().rev() {
            debug_assert!(c < self.p);
            rank = rank * self.p + c % self.p;
        }
        self.element(rank)
    }

    // -- ring operations ----------------------------------------------------

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        if self.p == 2 {
            return FieldElement { rank: x.rank ^ y.rank, ctx: self.id };
        }
        let p = self.p;
        let (mut a, mut b) = (x.rank, y.rank);
        let mut rank = 0u64;
        let mut mult = 1u64;
        while a != 0 || b != 0 {
            rank += fp_add(a % p, b % p, p) * mult;
            a /= p;
            b /= p;
            mult *= p;
        }
        FieldElement { rank, ctx: self.id }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.check(x);
        if self.p == 2 {
            return x;
        }
        let p = self.p;
        let mut a = x.rank;
        let mut rank = 0u64;
        let mut mult = 1u64;
        while a != 0 {
            rank += fp_sub(0, a % p, p) * mult;
            a /= p;
            mult *= p;
        }
        FieldElement { rank, ctx: self.id }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    /// Scalar multiple s * x with s in the prime field.
    pub fn scl(&self, s: u64, x: FieldElement) -> FieldElement {
        self.check(x);
        let s = s % self.p;
        if self.p == 2 {
            return if s == 0 { self.zero() } else { x };
        }
        let p = self.p;
        let mut a = x.rank;
        let mut rank = 0u64;
        let mut mult = 1u64;
        while a != 0 {
            rank += fp_mul(a % p, s, p) * mult;
            a /= p;
            mult *= p;
        }
        FieldElement { rank, ctx: self.id }
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.check(x);
        self.check(y);
        if x.rank == 0 || y.rank == 0 {
            return self.zero();
        }
        if let (Some(log), Some(antilog)) = (&self.log, &self.antilog) {
            let ord = self.size - 1;
            let e = (log[x.rank as usize] as u64 + log[y.rank as usize] as u64) % ord;
            return FieldElement { rank: antilog[e as usize] as u64, ctx: self.id };
        }
        self.mul_notable(x, y)
    }

    fn mul_notable(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let a = rank_to_coeffs(x.rank, self.p, self.n);
        let b = rank_to_coeffs(y.rank, self.p, self.n);
        let prod = fp::poly_mulmod(&a, &b, &self.modulus, self.p);
        let mut rank = 0u64;
        for &c in prod.iter().rev() {
            rank = rank * self.p + c;
        }
        FieldElement { rank, ctx: self.id }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, x: FieldElement) -> FieldElement {
        self.check(x);
        assert!(x.rank != 0, "inverse of zero");
        if let (Some(log), Some(antilog)) = (&self.log, &self.antilog) {
            let ord = self.size - 1;
            let e = (ord - log[x.rank as usize] as u64) % ord;
            return FieldElement { rank: antilog[e as usize] as u64, ctx: self.id };
        }
        self.pow(x, self.size - 2)
    }

    /// x^e for e >= 0, with the convention 0^0 = 1.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        self.check(x);
        if x.rank == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let ord = self.size - 1;
        let e = e % ord;
        if let (Some(log), Some(antilog)) = (&self.log, &self.antilog) {
            let le = (log[x.rank as usize] as u128 * e as u128 % ord as u128) as usize;
            return FieldElement { rank: antilog[le] as u64, ctx: self.id };
        }
        let mut acc = self.one();
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_notable(acc, base);
            }
            base = self.mul_notable(base, base);
            e >>= 1;
        }
        acc
    }

    /// x^e for signed e; negative exponents of zero are rejected.
    pub fn pow_signed(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            return Ok(self.pow(x, e as u64));
        }
        if x.rank == 0 {
            return Err(Error::ZeroToNegativePower);
        }
        let ord = (self.size - 1) as i64;
        Ok(self.pow(x, e.rem_euclid(ord) as u64))
    }

    /// Frobenius x -> x^p.
    #[inline]
    pub fn frob(&self, x: FieldElement) -> FieldElement {
        self.pow(x, self.p)
    }

    /// Iterated Frobenius x -> x^{p^k}.
    pub fn frob_iter(&self, x: FieldElement, k: u32) -> FieldElement {
        let mut y = x;
        for _ in 0..(k % self.n) {
            y = self.frob(y);
        }
        y
    }

    // -- traces ---------------------------------------------------------------

    /// Absolute trace Tr: F_{p^n} -> F_p as a prime-field value.
    pub fn trace(&self, x: FieldElement) -> u64 {
        self.check(x);
        if let Some(tab) = &self.trace_tab {
            return tab[x.rank as usize] as u64;
        }
        let t = self.rel_trace(x, 1).expect("1 divides n");
        t.rank
    }

    /// Relative trace Tr^n_m(x) = sum over j of x^{p^{jm}}, an element of the
    /// subfield of size p^m sitting inside this field.
    pub fn rel_trace(&self, x: FieldElement, m: u32) -> Result<FieldElement> {
        self.check(x);
        if m == 0 || self.n % m != 0 {
            return Err(Error::NotADivisor { m, n: self.n });
        }
        let mut acc = x;
        let mut t = x;
        for _ in 1..(self.n / m) {
            t = self.frob_iter(t, m);
            acc = self.add(acc, t);
        }
        Ok(acc)
    }

    /// Solutions of the affine trace constraint Tr(weight * z) = target.
    ///
    /// Returns the canonical (smallest-rank) solution together with a basis
    /// of the hyperplane { z : Tr(weight * z) = 0 }; the full solution set is
    /// the returned coset, of size p^{n-1}.
    pub fn solve_trace_affine(&self, target: u64, weight: FieldElement) -> Result<TraceAffine> {
        self.check(weight);
        if weight.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let target = target % self.p;
        let n = self.n as usize;
        let row = FpMat::from_fn(self.p, 1, n, |_, j| {
            self.trace(self.mul(weight, self.basis_vector(j)))
        });
        let kernel_basis: Vec<FieldElement> = row
            .nullspace()
            .into_iter()
            .map(|v| self.from_coeffs(&v))
            .collect();
        let solution = self
            .elements()
            .find(|&z| self.trace(self.mul(weight, z)) == target)
            .expect("a nonzero weight trace form is surjective");
        Ok(TraceAffine { target, weight, solution, kernel_basis })
    }

    /// j-th power-basis vector (the element of rank p^j).
    #[inline]
    pub fn basis_vector(&self, j: usize) -> FieldElement {
        self.element(self.p.pow(j as u32))
    }

    /// Dual basis of a given basis with respect to the trace form:
    /// Tr(dual[i] * basis[j]) = [i == j].
    pub fn dual_basis(&self, basis: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let n = self.n as usize;
        if basis.len() != n {
            return Err(Error::Other(format!("need {n} basis elements")));
        }
        let gram = FpMat::from_fn(self.p, n, n, |j, k| {
            self.trace(self.mul(basis[j], self.basis_vector(k)))
        });
        let inv = gram
            .inverse()
            .ok_or_else(|| Error::Other("given vectors do not form a basis".into()))?;
        // column i of inv is the coefficient vector of dual[i]
        Ok((0..n)
            .map(|i| {
                let coeffs: Vec<u64> = (0..n).map(|k| inv.at(k, i)).collect();
                self.from_coeffs(&coeffs)
            })
            .collect())
    }

    // -- formatting -----------------------------------------------------------

    /// Hex rank form, e.g. `0x1f`.
    pub fn fmt_element(&self, x: FieldElement) -> String {
        self.check(x);
        format!("{:#x}", x.rank)
    }

    /// Power-basis polynomial form in the root symbol `t`, e.g. `t^4+t+1`.
    pub fn fmt_element_poly(&self, x: FieldElement) -> String {
        let coeffs = self.coeffs(x);
        let mut out = String::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            match (c, i) {
                (_, 0) => {
                    let _ = write!(out, "{c}");
                }
                (1, 1) => out.push('t'),
                (1, _) => {
                    let _ = write!(out, "t^{i}");
                }
                (_, 1) => {
                    let _ = write!(out, "{c}*t");
                }
                (_, _) => {
                    let _ = write!(out, "{c}*t^{i}");
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parse `0x..` hex or decimal rank.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let rank = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            u64::from_str_radix(hex, 16)
        } else {
            s.parse::<u64>()
        }
        .map_err(|e| Error::BadFieldSpec(format!("bad element `{s}`: {e}")))?;
        if rank >= self.size {
            return Err(Error::BadFieldSpec(format!(
                "rank {rank} out of range for {}",
                self.spec_string()
            )));
        }
        Ok(self.element(rank))
    }

    // -- construction helpers ---------------------------------------------------

    fn find_generator(&self) -> u64 {
        let ord = self.size - 1;
        if ord == 1 {
            return 1;
        }
        let factors = fp::prime_factors(ord);
        'candidates: for rank in 2..self.size {
            let g = FieldElement { rank, ctx: self.id };
            for &f in &factors {
                if self.pow_notable(g, ord / f).rank == 1 {
                    continue 'candidates;
                }
            }
            return rank;
        }
        unreachable!("a finite field always has a multiplicative generator");
    }

    fn pow_notable(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_notable(acc, base);
            }
            base = self.mul_notable(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.size as usize;
        let ord = q - 1;
        let g = FieldElement { rank: self.generator_rank, ctx: self.id };
        let mut antilog = vec![0u32; ord.max(1)];
        let mut log = vec![0u32; q];
        let mut cur = self.one();
        for (e, slot) in antilog.iter_mut().enumerate() {
            *slot = cur.rank as u32;
            log[cur.rank as usize] = e as u32;
            cur = self.mul_notable(cur, g);
        }
        debug_assert_eq!(cur.rank, 1, "generator order mismatch");
        self.log = Some(log);
        self.antilog = Some(antilog);

        let mut trace_tab = vec![0u8; q];
        for rank in 0..self.size {
            let x = FieldElement { rank, ctx: self.id };
            let mut acc = x;
            let mut t = x;
            for _ in 1..self.n {
                t = self.pow_notable(t, self.p);
                acc = self.add(acc, t);
            }
            debug_assert!(acc.rank < self.p, "trace landed outside the prime field");
            trace_tab[rank as usize] = acc.rank as u8;
        }
        self.trace_tab = Some(trace_tab);
    }
}

/// Canonical solution and kernel of Tr(weight * z) = target.
#[derive(Clone, Debug)]
pub struct TraceAffine {
    pub target: u64,
    pub weight: FieldElement,
    pub solution: FieldElement,
    pub kernel_basis: Vec<FieldElement>,
}

impl TraceAffine {
    /// Size of the solution set, p^{n-1}.
    pub fn solution_count(&self, ctx: &FieldCtx) -> u64 {
        ctx.p().pow(ctx.n() - 1)
    }

    /// All solutions, in no particular order (coset enumeration).
    pub fn iter_solutions<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = FieldElement> + 'a {
        span_iter(ctx, &self.kernel_basis).map(move |k| ctx.add(self.solution, k))
    }
}

/// Iterate over the F_p-span of the given vectors (all p^dim combinations).
pub fn span_iter<'a>(
    ctx: &'a FieldCtx,
    basis: &'a [FieldElement],
) -> impl Iterator<Item = FieldElement> + 'a {
    let total = ctx.p().pow(basis.len() as u32);
    (0..total).map(move |mut idx| {
        let mut acc = ctx.zero();
        for &b in basis {
            let s = idx % ctx.p();
            idx /= ctx.p();
            if s != 0 {
                acc = ctx.add(acc, ctx.scl(s, b));
            }
        }
        acc
    })
}

fn rank_to_coeffs(mut rank: u64, p: u64, n: u32) -> Vec<u64> {
    let mut coeffs = vec![0u64; n as usize];
    for c in coeffs.iter_mut() {
        *c = rank % p;
        rank /= p;
    }
    coeffs
}

// ---------------------------------------------------------------------------
// Default moduli.

static DEFAULT_MODULI: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();

/// The canonical modulus for F_{p^n}: x^n + r(x) where r is the polynomial of
/// smallest rank making the sum irreducible.
pub fn default_modulus(p: u64, n: u32) -> Result<Vec<u64>> {
    if !fp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let size = (p as u128).pow(n);
    if n == 0 || size > MAX_FIELD_SIZE as u128 {
        return Err(Error::NoDefaultModulus { p, n });
    }
    let cache = DEFAULT_MODULI.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(p, n)) {
        return Ok(m.clone());
    }
    for low_rank in 0..size as u64 {
        let mut candidate = rank_to_coeffs(low_rank, p, n);
        candidate.push(1);
        if fp::poly_is_irreducible(&candidate, p) {
            cache.lock().unwrap().insert((p, n), candidate.clone());
            return Ok(candidate);
        }
    }
    Err(Error::NoDefaultModulus { p, n })
}

fn format_modulus(m: &[u64]) -> String {
    let mut out = String::new();
    for (e, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (c, e) {
            (_, 0) => {
                let _ = write!(out, "{c}");
            }
            (1, 1) => out.push('x'),
            (1, _) => {
                let _ = write!(out, "x^{e}");
            }
            (_, 1) => {
                let _ = write!(out, "{c}*x");
            }
            (_, _) => {
                let _ = write!(out, "{c}*x^{e}");
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn parse_modulus(s: &str, p: u64) -> Result<Vec<u64>> {
    let mut coeffs: Vec<u64> = Vec::new();
    for term in s.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::BadFieldSpec(format!("empty term in modulus `{s}`")));
        }
        let (coef_str, exp) = if let Some(idx) = term.find('x') {
            let coef = term[..idx].trim().trim_end_matches('*').trim();
            let rest = &term[idx + 1..];
            let exp = if let Some(e) = rest.strip_prefix('^') {
                e.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::BadFieldSpec(format!("bad exponent in `{term}`: {e}")))?
            } else if rest.trim().is_empty() {
                1
            } else {
                return Err(Error::BadFieldSpec(format!("bad term `{term}`")));
            };
            (coef, exp)
        } else {
            (term, 0)
        };
        let c = if coef_str.is_empty() {
            1
        } else {
            coef_str
                .parse::<u64>()
                .map_err(|e| Error::BadFieldSpec(format!("bad coefficient in `{term}`: {e}")))?
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = fp_add(coeffs[exp], c % p, p);
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// Subfield embeddings.

/// The canonical embedding of F_{p^m} into F_{p^n} (m | n), realized by a
/// chosen root of the subfield modulus inside the big field.
pub struct SubfieldEmbedding {
    sub: Ctx,
    sup: Ctx,
    root: FieldElement,
    root_powers: Vec<FieldElement>,
    retract_map: HashMap<u64, u64>,
}

impl SubfieldEmbedding {
    /// Embedding through the smallest-rank root of the subfield modulus.
    pub fn new(sub: &Ctx, sup: &Ctx) -> Result<Arc<Self>> {
        let roots = Self::roots_of_sub_modulus(sub, sup)?;
        let root = *roots.first().expect("an irreducible of degree m | n splits in F_{p^n}");
        Ok(Arc::new(Self::from_root(sub, sup, root)))
    }

    /// Embedding through an explicit root (must satisfy the subfield modulus).
    pub fn with_root(sub: &Ctx, sup: &Ctx, root: FieldElement) -> Result<Arc<Self>> {
        if !Self::is_root(sub, sup, root) {
            return Err(Error::Other("element is not a root of the subfield modulus".into()));
        }
        Ok(Arc::new(Self::from_root(sub, sup, root)))
    }

    /// All roots of the subfield modulus in the big field, in rank order.
    /// These are exactly the m Frobenius-conjugate embedding choices.
    pub fn roots_of_sub_modulus(sub: &Ctx, sup: &Ctx) -> Result<Vec<FieldElement>> {
        if sub.p() != sup.p() || sub.n() == 0 || sup.n() % sub.n() != 0 {
            return Err(Error::NotADivisor { m: sub.n(), n: sup.n() });
        }
        Ok(sup.elements().filter(|&y| Self::is_root(sub, sup, y)).collect())
    }

    fn is_root(sub: &Ctx, sup: &Ctx, y: FieldElement) -> bool {
        // Horner evaluation of the subfield modulus at y
        let mut acc = sup.zero();
        for &c in sub.modulus().iter().rev() {
            acc = sup.mul(acc, y);
            acc = sup.add(acc, sup.from_prime(c));
        }
        acc.is_zero()
    }

    fn from_root(sub: &Ctx, sup: &Ctx, root: FieldElement) -> Self {
        let m = sub.n() as usize;
        let mut root_powers = Vec::with_capacity(m);
        let mut cur = sup.one();
        for _ in 0..m {
            root_powers.push(cur);
            cur = sup.mul(cur, root);
        }
        let emb = SubfieldEmbedding {
            sub: Arc::clone(sub),
            sup: Arc::clone(sup),
            root,
            root_powers,
            retract_map: HashMap::new(),
        };
        let mut retract_map = HashMap::with_capacity(sub.size() as usize);
        for x in sub.elements() {
            retract_map.insert(emb.embed(x).rank(), x.rank());
        }
        SubfieldEmbedding { retract_map, ..emb }
    }

    pub fn sub(&self) -> &Ctx {
        &self.sub
    }

    pub fn sup(&self) -> &Ctx {
        &self.sup
    }

    pub fn root(&self) -> FieldElement {
        self.root
    }

    pub fn embed(&self, x: FieldElement) -> FieldElement {
        let coeffs = self.sub.coeffs(x);
        let mut acc = self.sup.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc = self.sup.add(acc, self.sup.scl(c, self.root_powers[i]));
            }
        }
        acc
    }

    pub fn retract(&self, y: FieldElement) -> Result<FieldElement> {
        self.sup.check(y);
        self.retract_map
            .get(&y.rank())
            .map(|&r| self.sub.element(r))
            .ok_or(Error::NotInSubfield(y.rank()))
    }

    pub fn contains(&self, y: FieldElement) -> bool {
        self.retract_map.contains_key(&y.rank())
    }
}

static EMB_CACHE: OnceLock<Mutex<HashMap<(CtxId, CtxId), Arc<SubfieldEmbedding>>>> = OnceLock::new();

/// Cached canonical embedding for a (sub, sup) context pair.
pub fn canonical_embedding(sub: &Ctx, sup: &Ctx) -> Result<Arc<SubfieldEmbedding>> {
    let cache = EMB_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = cache.lock().unwrap().get(&(sub.id(), sup.id())) {
        return Ok(Arc::clone(e));
    }
    let emb = SubfieldEmbedding::new(sub, sup)?;
    cache
        .lock()
        .unwrap()
        .insert((sub.id(), sup.id()), Arc::clone(&emb));
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> Ctx {
        FieldCtx::with_default_modulus(2, 3).unwrap()
    }

    #[test]
    fn default_f8_modulus_is_x3_x_1() {
        let ctx = f8();
        assert_eq!(ctx.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn additive_identity_and_inverse() {
        let ctx = FieldCtx::with_default_modulus(3, 3).unwrap();
        for x in ctx.elements() {
            assert_eq!(ctx.add(x, ctx.zero()), x);
            let negx = ctx.scl(ctx.p() - 1, x);
            assert!(ctx.add(x, negx).is_zero());
        }
    }

    #[test]
    fn f8_products_forced_by_modulus() {
        // u^3 + u + 1 = 0, so u * u^2 = u + 1 and u^5 = u^2 + u + 1
        let ctx = f8();
        let u = ctx.element(2);
        let u2 = ctx.element(4);
        assert_eq!(ctx.mul(u, u2), ctx.element(0b011));
        assert_eq!(ctx.pow(u, 5), ctx.element(0b111));
        assert_eq!(ctx.add(u, u2), ctx.element(0b110));
    }

    #[test]
    fn pow_identities() {
        let ctx = FieldCtx::with_default_modulus(5, 2).unwrap();
        for x in ctx.elements().skip(1) {
            assert_eq!(ctx.pow(x, 0), ctx.one());
            assert_eq!(ctx.pow(x, ctx.size() - 1), ctx.one());
        }
        assert!(ctx.pow_signed(ctx.zero(), -1).is_err());
        let x = ctx.element(7);
        let xi = ctx.pow_signed(x, -1).unwrap();
        assert_eq!(ctx.mul(x, xi), ctx.one());
    }

    #[test]
    fn generator_has_order_minus_one_exactly() {
        // derived oracle: exhaustive multiplication to find the order
        let ctx = FieldCtx::with_default_modulus(3, 2).unwrap();
        let g = ctx.generator();
        let mut cur = g;
        let mut order = 1;
        while cur != ctx.one() {
            cur = ctx.mul(cur, g);
            order += 1;
        }
        assert_eq!(order, ctx.size() - 1);
        // g^{(q-1)/2} = -1 for odd p
        let minus_one = ctx.neg(ctx.one());
        assert_eq!(ctx.pow(g, (ctx.size() - 1) / 2), minus_one);
    }

    #[test]
    fn table_and_schoolbook_multiplication_agree() {
        let ctx = f8();
        for x in ctx.elements() {
            for y in ctx.elements() {
                assert_eq!(ctx.mul(x, y), ctx.mul_notable(x, y));
            }
        }
    }

    #[test]
    fn trace_of_one_is_n_mod_p() {
        for n in 1..=8u32 {
            let ctx = FieldCtx::with_default_modulus(2, n).unwrap();
            assert_eq!(ctx.trace(ctx.one()), (n % 2) as u64);
        }
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        assert_eq!(ctx.trace(ctx.one()), 4 % 3);
    }

    #[test]
    fn frobenius_is_additive() {
        let ctx = FieldCtx::with_default_modulus(3, 3).unwrap();
        for x in ctx.elements() {
            for y in ctx.elements().step_by(5) {
                let lhs = ctx.frob(ctx.add(x, y));
                let rhs = ctx.add(ctx.frob(x), ctx.frob(y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rel_trace_lands_in_subfield_and_towers() {
        let ctx = FieldCtx::with_default_modulus(2, 6).unwrap();
        for x in ctx.elements() {
            let t = ctx.rel_trace(x, 2).unwrap();
            // fixed by x -> x^{p^2}
            assert_eq!(ctx.frob_iter(t, 2), t);
            // tower identity Tr^6_1 = Tr^2_1 ∘ Tr^6_2 pointwise
            let direct = ctx.trace(x);
            let via_tower = ctx.rel_trace(t, 1).unwrap().rank();
            assert_eq!(direct, via_tower);
        }
        assert!(ctx.rel_trace(ctx.one(), 4).is_err());
    }

    #[test]
    fn rel_trace_kills_beta_of_zeta_form() {
        // beta = zeta - zeta^{p^d} has Tr^n_d(beta) = 0; here d = 2, n = 4, p = 3
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        let zeta = ctx
            .elements()
            .find(|&z| ctx.frob_iter(z, 2) != z)
            .unwrap();
        let beta = ctx.sub(zeta, ctx.frob_iter(zeta, 2));
        assert!(ctx.rel_trace(beta, 2).unwrap().is_zero());
    }

    #[test]
    fn solve_trace_affine_examples() {
        let ctx = FieldCtx::with_default_modulus(2, 4).unwrap();
        // target 0 -> canonical solution 0
        let sys = ctx.solve_trace_affine(0, ctx.one()).unwrap();
        assert!(sys.solution.is_zero());
        // derived oracle: count solutions by enumeration at n = 4
        let count = ctx
            .elements()
            .filter(|&z| ctx.trace(z) == 1)
            .count() as u64;
        assert_eq!(count, 8);
        let sys1 = ctx.solve_trace_affine(1, ctx.one()).unwrap();
        assert_eq!(sys1.solution_count(&ctx), 8);
        assert_eq!(sys1.iter_solutions(&ctx).count(), 8);
        for z in sys1.iter_solutions(&ctx) {
            assert_eq!(ctx.trace(z), 1);
        }
        assert!(ctx.solve_trace_affine(1, ctx.zero()).is_err());
    }

    #[test]
    fn trace_one_gives_c_equals_one_for_odd_n() {
        // choosing c with Tr(c) = 1: canonical pick is c = 1 when n is odd
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let sys = ctx.solve_trace_affine(1, ctx.one()).unwrap();
        assert_eq!(sys.solution, ctx.one());
    }

    #[test]
    fn exhaustive_trace_affine_small_fields() {
        for (p, n) in [(2u64, 4u32), (3, 3)] {
            let ctx = FieldCtx::with_default_modulus(p, n).unwrap();
            for weight in ctx.elements().skip(1) {
                for target in 0..p {
                    let sys = ctx.solve_trace_affine(target, weight).unwrap();
                    assert_eq!(ctx.trace(ctx.mul(weight, sys.solution)), target);
                    for k in &sys.kernel_basis {
                        assert_eq!(ctx.trace(ctx.mul(weight, *k)), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn dual_basis_property() {
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let basis: Vec<_> = (0..5).map(|j| ctx.basis_vector(j)).collect();
        let dual = ctx.dual_basis(&basis).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(ctx.trace(ctx.mul(dual[i], basis[j])), u64::from(i == j));
            }
        }
    }

    #[test]
    fn spec_string_roundtrip() {
        let ctx = FieldCtx::parse_spec("p=2,n=9,mod=x^9+x^4+1").unwrap();
        assert_eq!(ctx.spec_string(), "p=2,n=9,mod=x^9+x^4+1");
        let ctx2 = FieldCtx::parse_spec(&ctx.spec_string()).unwrap();
        assert_eq!(ctx2.modulus(), ctx.modulus());
        assert!(FieldCtx::parse_spec("p=4,n=2").is_err());
        assert!(FieldCtx::parse_spec("p=2,n=4,mod=x^4+1").is_err());
    }

    #[test]
    fn embedding_f8_into_f512() {
        let sub = f8();
        let sup = FieldCtx::with_default_modulus(2, 9).unwrap();
        let roots = SubfieldEmbedding::roots_of_sub_modulus(&sub, &sup).unwrap();
        assert_eq!(roots.len(), 3);
        for &r in &roots {
            let emb = SubfieldEmbedding::with_root(&sub, &sup, r).unwrap();
            // field homomorphism on all of F_8
            for x in sub.elements() {
                for y in sub.elements() {
                    assert_eq!(
                        emb.embed(sub.mul(x, y)),
                        sup.mul(emb.embed(x), emb.embed(y))
                    );
                    assert_eq!(
                        emb.embed(sub.add(x, y)),
                        sup.add(emb.embed(x), emb.embed(y))
                    );
                }
                assert_eq!(emb.retract(emb.embed(x)).unwrap(), x);
            }
        }
        let emb = canonical_embedding(&sub, &sup).unwrap();
        assert_eq!(emb.root(), roots[0]);
        assert!(emb.retract(sup.generator()).is_err() || emb.contains(sup.generator()));
    }

    #[test]
    #[should_panic(expected = "different field context")]
    fn context_mismatch_panics() {
        let a = f8();
        let b = FieldCtx::with_default_modulus(2, 3).unwrap();
        let _ = a.add(a.one(), b.one());
    }
}
