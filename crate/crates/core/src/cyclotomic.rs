//! Exact arithmetic in Z[xi_p], xi_p a primitive complex p-th root of unity.
//!
//! An element is a length-p integer vector (c_0, ..., c_{p-1}) standing for
//! sum(c_j * xi^j), taken modulo the relation sum_j xi^j = 0, i.e. modulo the
//! all-ones vector. The canonical representative subtracts the minimum
//! coordinate, so the minimum coordinate of a canonical value is 0.
//!
//! Walsh coefficients in odd characteristic are carried in this ring; their
//! squared magnitudes z * conj(z) are compared bit-exactly.

use serde::Serialize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct CyclotomicInt {
    coords: Vec<i64>,
}

impl CyclotomicInt {
    /// Canonicalized value from raw xi-power coordinates.
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(coords.len() >= 2, "need p >= 2 coordinates");
        let mut z = CyclotomicInt { coords };
        z.canonicalize();
        z
    }

    pub fn zero(p: u64) -> Self {
        CyclotomicInt { coords: vec![0; p as usize] }
    }

    pub fn from_int(v: i64, p: u64) -> Self {
        let mut coords = vec![0i64; p as usize];
        coords[0] = v;
        Self::new(coords)
    }

    /// xi^j with 0 <= j < p.
    pub fn root_power(j: u64, p: u64) -> Self {
        let mut coords = vec![0i64; p as usize];
        coords[(j % p) as usize] = 1;
        Self::new(coords)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.coords.len() as u64
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    fn canonicalize(&mut self) {
        let min = *self.coords.iter().min().expect("nonempty");
        if min != 0 {
            for c in &mut self.coords {
                *c -= min;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// A value is a rational integer iff all xi^1..xi^{p-1} coordinates agree;
    /// it then equals c_0 - c_1.
    pub fn is_rational(&self) -> bool {
        self.coords[1..].windows(2).all(|w| w[0] == w[1]) || self.p() == 2
    }

    pub fn rational_value(&self) -> Option<i64> {
        if self.p() == 2 {
            return Some(self.coords[0] - self.coords[1]);
        }
        self.is_rational().then(|| self.coords[0] - self.coords[1])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Convolution modulo xi^p = 1 (further reduction happens in canonical form).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p(), other.p());
        let p = self.coords.len();
        let mut out = vec![0i64; p];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if b != 0 {
                    let k = (i + j) % p;
                    out[k] += a * b;
                }
            }
        }
        Self::new(out)
    }

    /// Complex conjugation xi -> xi^{-1}: coordinate index negation mod p.
    pub fn conj(&self) -> Self {
        let p = self.coords.len();
        let mut out = vec![0i64; p];
        for (j, &c) in self.coords.iter().enumerate() {
            out[(p - j) % p] = c;
        }
        Self::new(out)
    }

    /// |z|^2 = z * conj(z), exact.
    pub fn norm_sq(&self) -> Self {
        self.mul(&self.conj())
    }

    /// Numerical evaluation sum c_j exp(2 pi i j / p); sanity bridge only,
    /// never used in any accept/reject decision.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.coords.len() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &c) in self.coords.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / p;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        (re, im)
    }
}
