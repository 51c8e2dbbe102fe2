//! Exact CCZ/EA invariants of (n,m)-functions: Walsh coefficients and full
//! spectra, difference distribution tables, differential uniformity and
//! linearity.
//!
//! Characteristic 2 uses in-place Walsh-Hadamard butterflies on sign vectors
//! (one per component, reindexed through the trace Gram matrix); odd
//! characteristic counts trace residues and keeps values in Z[xi_p]. All
//! accept/reject comparisons are bit-exact; no floating point anywhere.

use crate::cyclotomic::CyclotomicInt;
use crate::error::{Error, Result};
use crate::gfield::FieldElement;
use crate::vfunc::VectorialFunction;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// A squared Walsh magnitude: an exact nonnegative integer when rational,
/// the full cyclotomic value otherwise.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SpectrumValue {
    Int(u64),
    Cyclotomic(CyclotomicInt),
}

impl SpectrumValue {
    fn from_norm_sq(z: CyclotomicInt) -> Self {
        match z.rational_value() {
            Some(v) => {
                debug_assert!(v >= 0, "a squared magnitude cannot be negative");
                SpectrumValue::Int(v as u64)
            }
            None => SpectrumValue::Cyclotomic(z),
        }
    }

    pub fn as_int(&self) -> Option<u64> {
        match self {
            SpectrumValue::Int(v) => Some(*v),
            SpectrumValue::Cyclotomic(_) => None,
        }
    }
}

impl Serialize for SpectrumValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectrumValue::Int(v) => s.serialize_u64(*v),
            SpectrumValue::Cyclotomic(z) => {
                let mut seq = s.serialize_seq(Some(z.coords().len()))?;
                for c in z.coords() {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
        }
    }
}

/// Multiset of squared Walsh magnitudes |W_F(a, b)|^2 over all a and b != 0,
/// stored as sorted (value, multiplicity) pairs keyed by canonical form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WalshSpectrum {
    pub entries: Vec<(SpectrumValue, u64)>,
}

impl WalshSpectrum {
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn is_all_rational(&self) -> bool {
        self.entries
            .iter()
            .all(|(v, _)| matches!(v, SpectrumValue::Int(_)))
    }

    pub fn max_sq(&self) -> Option<&SpectrumValue> {
        self.entries.iter().map(|(v, _)| v).max()
    }
}

/// Walsh coefficient W_F(a, b) = sum_x xi^{Tr(b F(x)) - Tr(a x)} by direct
/// residue counting. This is the definitional route; it is kept independent
/// of the butterfly used by [`full_spectrum`] so the two can cross-check.
pub fn walsh_coefficient(
    f: &VectorialFunction,
    a: FieldElement,
    b: FieldElement,
) -> CyclotomicInt {
    let dom = f.domain();
    let cod = f.codomain();
    assert_eq!(a.ctx_id(), dom.id());
    assert_eq!(b.ctx_id(), cod.id());
    let p = dom.p();
    let mut counts = vec![0i64; p as usize];
    for x in dom.elements() {
        let tb = cod.trace(cod.mul(b, f.value(x)));
        let ta = dom.trace(dom.mul(a, x));
        counts[((tb + p - ta) % p) as usize] += 1;
    }
    CyclotomicInt::new(counts)
}

/// All W_F(a, b) for a fixed b != 0 in characteristic 2, indexed by a-rank.
/// One O(n 2^n) in-place butterfly plus a Gram-matrix reindex.
pub fn walsh_component_p2(f: &VectorialFunction, b: FieldElement) -> Vec<i64> {
    let dom = f.domain();
    let cod = f.codomain();
    assert_eq!(dom.p(), 2);
    let q = dom.size() as usize;
    let n = dom.n() as usize;
    let mut v: Vec<i64> = (0..q)
        .map(|x| 1 - 2 * cod.trace(cod.mul(b, f.value_at_rank(x as u64))) as i64)
        .collect();
    // butterfly: after all rounds, v[s] = sum_x (+-1) (-1)^{<s, x>}
    let mut h = 1usize;
    while h < q {
        for block in (0..q).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (v[i], v[i + h]);
                v[i] = x + y;
                v[i + h] = x - y;
            }
        }
        h *= 2;
    }
    // Tr(a x) = bits(a)^T G bits(x) with G the trace Gram matrix of the
    // power basis, so W(a, b) sits at butterfly index G a
    let gram: Vec<u64> = (0..n)
        .map(|i| {
            let mut row = 0u64;
            for j in 0..n {
                let t = dom.mul(dom.basis_vector(i), dom.basis_vector(j));
                row |= dom.trace(t) << j;
            }
            row
        })
        .collect();
    (0..q as u64)
        .map(|a| {
            let mut s = 0u64;
            for (i, row) in gram.iter().enumerate() {
                s |= (((row & a).count_ones() & 1) as u64) << i;
            }
            v[s as usize]
        })
        .collect()
}

/// All W_F(a, b) for a fixed b in odd characteristic, by residue counting.
pub fn walsh_component_oddp(f: &VectorialFunction, b: FieldElement) -> Vec<CyclotomicInt> {
    let dom = f.domain();
    let cod = f.codomain();
    let p = dom.p();
    let q = dom.size();
    let ord = q - 1;
    let tb: Vec<u64> = (0..q)
        .map(|x| cod.trace(cod.mul(b, f.value_at_rank(x))))
        .collect();
    // walk x = g^t once per a, reading Tr(a g^t) along the shifted log scale
    let g = dom.generator();
    let mut antilog = Vec::with_capacity(ord as usize);
    let mut cur = dom.one();
    for _ in 0..ord {
        antilog.push(cur.rank());
        cur = dom.mul(cur, g);
    }
    let mut loga = vec![0u64; q as usize];
    for (t, &xr) in antilog.iter().enumerate() {
        loga[xr as usize] = t as u64;
    }
    let tr: Vec<u64> = (0..q).map(|r| dom.trace(dom.element(r))).collect();
    (0..q)
        .map(|a| {
            let mut counts = vec![0i64; p as usize];
            if a == 0 {
                for x in 0..q {
                    counts[tb[x as usize] as usize] += 1;
                }
            } else {
                counts[tb[0] as usize] += 1; // x = 0 term
                let la = loga[a as usize];
                for t in 0..ord {
                    let xr = antilog[t as usize];
                    let ta = tr[antilog[((la + t) % ord) as usize] as usize];
                    counts[((tb[xr as usize] + p - ta) % p) as usize] += 1;
                }
            }
            CyclotomicInt::new(counts)
        })
        .collect()
}

/// Complete multiset of squared Walsh magnitudes over all a and all b != 0.
pub fn full_spectrum(f: &VectorialFunction) -> WalshSpectrum {
    let cod = f.codomain();
    let bs: Vec<FieldElement> = cod.elements().skip(1).collect();
    let maps: Vec<BTreeMap<SpectrumValue, u64>> = bs
        .par_iter()
        .map(|&b| {
            let mut hist = BTreeMap::new();
            if f.domain().p() == 2 {
                for w in walsh_component_p2(f, b) {
                    let sq = (w * w) as u64;
                    *hist.entry(SpectrumValue::Int(sq)).or_insert(0) += 1;
                }
            } else {
                for w in walsh_component_oddp(f, b) {
                    let v = SpectrumValue::from_norm_sq(w.norm_sq());
                    *hist.entry(v).or_insert(0) += 1;
                }
            }
            hist
        })
        .collect();
    let mut merged: BTreeMap<SpectrumValue, u64> = BTreeMap::new();
    for hist in maps {
        for (k, v) in hist {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    WalshSpectrum { entries: merged.into_iter().collect() }
}

/// Differential spectrum and uniformity of an (n,m)-function. Rows are
/// streamed, never retained: the type stores the multiset of all DDT counts
/// (zero cells included) and their maximum.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Ddt {
    pub delta: u64,
    /// (count value, multiplicity) over all cells (a != 0, b), sorted.
    pub spectrum: Vec<(u64, u64)>,
}

pub fn ddt(f: &VectorialFunction) -> Ddt {
    let dom = f.domain();
    let cod = f.codomain();
    let q = dom.size();
    let quadratic_p2 = dom.p() == 2 && f.known_degree() == Some(2);
    let hists: Vec<BTreeMap<u64, u64>> = (1..q)
        .into_par_iter()
        .map(|ar| {
            let a = dom.element(ar);
            let mut row = vec![0u32; cod.size() as usize];
            for x in dom.elements() {
                let d = cod.sub(f.value(dom.add(x, a)), f.value(x));
                row[d.rank() as usize] += 1;
            }
            debug_assert_eq!(row.iter().map(|&c| c as u64).sum::<u64>(), q);
            if quadratic_p2 {
                assert!(
                    row.iter().all(|&c| c % 2 == 0),
                    "derivative of a quadratic binary function must hit values evenly"
                );
            }
            let mut hist = BTreeMap::new();
            for &c in &row {
                *hist.entry(c as u64).or_insert(0u64) += 1;
            }
            hist
        })
        .collect();
    let mut spectrum: BTreeMap<u64, u64> = BTreeMap::new();
    for hist in hists {
        for (k, v) in hist {
            *spectrum.entry(k).or_insert(0) += v;
        }
    }
    let delta = spectrum.keys().max().copied().unwrap_or(0);
    Ddt { delta, spectrum: spectrum.into_iter().collect() }
}

/// Linearity |W_F|^2, with the nonlinearity attached when it is defined
/// (p = 2 and |W_F|^2 a perfect square).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Linearity {
    pub linearity_sq: u64,
    pub nonlinearity: Option<u64>,
}

pub fn linearity(f: &VectorialFunction, spectrum: &WalshSpectrum) -> Result<Linearity> {
    if !spectrum.is_all_rational() {
        return Err(Error::NonRationalMagnitude);
    }
    let linearity_sq = spectrum
        .entries
        .iter()
        .filter_map(|(v, _)| v.as_int())
        .max()
        .unwrap_or(0);
    let nonlinearity = if f.domain().p() == 2 {
        let w = isqrt(linearity_sq);
        (w * w == linearity_sq).then(|| (1u64 << (f.domain().n() - 1)) - w / 2)
    } else {
        None
    };
    Ok(Linearity { linearity_sq, nonlinearity })
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// The JSON invariant report; field order is the stable golden-file order.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub linearity_sq: u64,
    pub delta: u64,
    pub walsh_spectrum: Vec<(SpectrumValue, u64)>,
    pub diff_spectrum: Vec<(u64, u64)>,
}

pub fn report(f: &VectorialFunction) -> Result<InvariantReport> {
    let spectrum = full_spectrum(f);
    let lin = linearity(f, &spectrum)?;
    let d = ddt(f);
    Ok(InvariantReport {
        linearity_sq: lin.linearity_sq,
        delta: d.delta,
        walsh_spectrum: spectrum.entries,
        diff_spectrum: d.spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfield::{Ctx, FieldCtx};
    use crate::vfunc::{evaluate, UnivariatePoly};

    fn power_fn(ctx: &Ctx, e: u64) -> VectorialFunction {
        let f = evaluate(&UnivariatePoly::monomial(ctx, e, ctx.one()));
        f.set_degree_hint(crate::vfunc::p_weight(e, ctx.p()));
        f
    }

    #[test]
    fn walsh_at_origin_is_field_size() {
        let ctx = FieldCtx::with_default_modulus(3, 3).unwrap();
        let f = power_fn(&ctx, 4);
        let w = walsh_coefficient(&f, ctx.zero(), ctx.zero());
        assert_eq!(w.rational_value(), Some(27));
    }

    #[test]
    fn cube_on_f32_is_almost_bent() {
        // brute force over all 32 x 32 pairs: |W(a,b)| in {0, 8} for b != 0
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f = power_fn(&ctx, 3);
        for b in ctx.elements().skip(1) {
            let fast = walsh_component_p2(&f, b);
            for a in ctx.elements() {
                let slow = walsh_coefficient(&f, a, b).rational_value().unwrap();
                assert_eq!(slow, fast[a.rank() as usize]);
                assert!(slow.abs() == 0 || slow.abs() == 8);
            }
        }
    }

    #[test]
    fn butterfly_and_counting_agree_odd_p() {
        let ctx = FieldCtx::with_default_modulus(3, 3).unwrap();
        let f = power_fn(&ctx, 4);
        for b in ctx.elements().skip(1).take(5) {
            let all = walsh_component_oddp(&f, b);
            for a in ctx.elements() {
                assert_eq!(all[a.rank() as usize], walsh_coefficient(&f, a, b));
            }
        }
    }

    #[test]
    fn parseval_per_component() {
        let ctx2 = FieldCtx::with_default_modulus(2, 5).unwrap();
        let f2 = power_fn(&ctx2, 3);
        for b in ctx2.elements().skip(1) {
            let total: i64 = walsh_component_p2(&f2, b).iter().map(|w| w * w).sum();
            assert_eq!(total as u64, ctx2.size() * ctx2.size());
        }
        let ctx3 = FieldCtx::with_default_modulus(3, 3).unwrap();
        let f3 = power_fn(&ctx3, 4);
        for b in ctx3.elements().skip(1) {
            let mut total = CyclotomicInt::zero(3);
            for w in walsh_component_oddp(&f3, b) {
                total = total.add(&w.norm_sq());
            }
            assert_eq!(total.rational_value(), Some((ctx3.size() * ctx3.size()) as i64));
        }
    }

    #[test]
    fn pary_gold_spectrum_three_values() {
        // x^{3^i+1} with n/gcd even: squared values {0, 3^n, 3^{n+2d}}
        let ctx = FieldCtx::with_default_modulus(3, 4).unwrap();
        let f = power_fn(&ctx, 4);
        let spec = full_spectrum(&f);
        assert!(spec.is_all_rational());
        let values: Vec<u64> = spec.entries.iter().map(|(v, _)| v.as_int().unwrap()).collect();
        assert_eq!(values, vec![0, 81, 729]);
        assert_eq!(spec.total_multiplicity(), 81 * 80);
        let lin = linearity(&f, &spec).unwrap();
        assert_eq!(lin.linearity_sq, 729);
        assert_eq!(lin.nonlinearity, None);
    }

    #[test]
    fn gold_ddt_values() {
        // gcd(i, n) = 1, p = 2: APN
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let d = ddt(&power_fn(&ctx, 3));
        assert_eq!(d.delta, 2);
        // multiset covers all (q-1) q cells and row mass adds back to q each
        let cells: u64 = d.spectrum.iter().map(|(_, m)| m).sum();
        assert_eq!(cells, (ctx.size() - 1) * ctx.size());
        let mass: u64 = d.spectrum.iter().map(|(v, m)| v * m).sum();
        assert_eq!(mass, (ctx.size() - 1) * ctx.size());

        // odd p: x^{p^i+1} with n/gcd even has delta = p^gcd
        let ctx3 = FieldCtx::with_default_modulus(3, 4).unwrap();
        let d3 = ddt(&power_fn(&ctx3, 4));
        assert_eq!(d3.delta, 3);
        // planar x^2: delta = 1
        let dsq = ddt(&power_fn(&ctx3, 2));
        assert_eq!(dsq.delta, 1);
    }

    #[test]
    fn linearity_of_affine_and_ab_functions() {
        let ctx = FieldCtx::with_default_modulus(2, 5).unwrap();
        let affine = power_fn(&ctx, 2); // x^2 is linear
        let spec = full_spectrum(&affine);
        let lin = linearity(&affine, &spec).unwrap();
        assert_eq!(lin.linearity_sq, ctx.size() * ctx.size());
        assert_eq!(lin.nonlinearity, Some(0));

        let cube = power_fn(&ctx, 3);
        let lin3 = linearity(&cube, &full_spectrum(&cube)).unwrap();
        assert_eq!(lin3.linearity_sq, 64);
        assert_eq!(lin3.nonlinearity, Some(12)); // 2^4 - 8/2
    }

    #[test]
    fn planar_square_components_are_bent() {
        // every component of x^2 on F_9 meets the bent bound |W|^2 = p^n
        let ctx = FieldCtx::with_default_modulus(3, 2).unwrap();
        let spec = full_spectrum(&power_fn(&ctx, 2));
        assert_eq!(spec.entries.len(), 1);
        assert_eq!(spec.entries[0].0.as_int(), Some(9));
    }

    #[test]
    fn report_json_key_order() {
        let ctx = FieldCtx::with_default_modulus(2, 4).unwrap();
        let rep = report(&power_fn(&ctx, 3)).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let li = json.find("linearity_sq").unwrap();
        let de = json.find("delta").unwrap();
        let ws = json.find("walsh_spectrum").unwrap();
        let ds = json.find("diff_spectrum").unwrap();
        assert!(li < de && de < ws && ws < ds);
    }
}
