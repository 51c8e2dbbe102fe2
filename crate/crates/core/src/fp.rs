//! Arithmetic over the prime field F_p and dense F_p-linear algebra.
//!
//! Everything here works with a runtime prime `p`. Polynomials over F_p are
//! coefficient vectors in ascending-degree order; matrices are row-major.

/// Reduce a possibly large signed value into 0..p.
pub fn fp_norm(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

pub fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn fp_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod a prime p; panics on zero.
pub fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    fp_pow(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (ascending coefficients, no trailing zeros).

pub fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let md = poly_deg(m).expect("zero modulus");
    let lead_inv = fp_inv(m[md], p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(rd) = poly_deg(&r) {
        if rd < md {
            break;
        }
        let factor = fp_mul(r[rd], lead_inv, p);
        for i in 0..=md {
            let idx = rd - md + i;
            r[idx] = fp_sub(r[idx], fp_mul(factor, m[i], p), p);
        }
    }
    poly_trim(&mut r);
    r
}

pub fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = fp_add(prod[i + j], fp_mul(ai, bj, p), p);
        }
    }
    poly_rem(&prod, m, p)
}

pub fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = poly_rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize monic
    if let Some(d) = poly_deg(&x) {
        let inv = fp_inv(x[d], p);
        for c in &mut x {
            *c = fp_mul(*c, inv, p);
        }
    }
    x
}

/// Irreducibility over F_p of a monic degree-n polynomial:
/// x^{p^n} = x mod f, and gcd(x^{p^k} - x, f) = 1 for every k | n, k < n.
pub fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let n = match poly_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    // t_k = x^{p^k} mod f, advanced one Frobenius step at a time
    let x_red = poly_rem(&[0, 1], f, p);
    let mut t = x_red.clone();
    let mut frob = Vec::with_capacity(n);
    for _ in 0..n {
        t = poly_powmod(&t, p, f, p);
        frob.push(t.clone());
    }
    // x^{p^n} == x ?
    if !poly_sub(&frob[n - 1], &x_red, p).is_empty() {
        return false;
    }
    for k in 1..n {
        if n % k != 0 {
            continue;
        }
        let d = poly_sub(&frob[k - 1], &x_red, p);
        if d.is_empty() {
            return false; // x^{p^k} = x: f divides a smaller field polynomial
        }
        let g = poly_gcd(&d, f, p);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        *slot = fp_sub(ai, bi, p);
    }
    poly_trim(&mut out);
    out
}

// ---------------------------------------------------------------------------
// Dense matrices over F_p.

/// Row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zero(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.a[r * cols + c] = f(r, c) % p;
            }
        }
        m
    }

    pub fn identity(p: u64, n: usize) -> Self {
        Self::from_fn(p, n, n, |r, c| u64::from(r == c))
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.a[r * self.cols + c] = v % self.p;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut s = 0u64;
                for c in 0..self.cols {
                    s = fp_add(s, fp_mul(self.at(r, c), v[c], self.p), self.p);
                }
                s
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot column per pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(sel) = (row..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if sel != row {
                for c in 0..self.cols {
                    self.a.swap(sel * self.cols + c, row * self.cols + c);
                }
            }
            let inv = fp_inv(self.at(row, col), p);
            for c in col..self.cols {
                let v = fp_mul(self.at(row, c), inv, p);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.at(r, col) != 0 {
                    let factor = self.at(r, col);
                    for c in col..self.cols {
                        let v = fp_sub(self.at(r, c), fp_mul(factor, self.at(row, c), p), p);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of { x : A x = 0 }.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = fp_sub(0, m.at(prow, free), p);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of A x = b, if any.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let p = self.p;
        let mut aug = FpMat::from_fn(p, self.rows, self.cols + 1, |r, c| {
            if c == self.cols {
                b[r]
            } else {
                self.at(r, c)
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constants column
        }
        let mut x = vec![0u64; self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut aug = FpMat::from_fn(p, n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c)
            } else {
                u64::from(c - n == r)
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n {
            return None;
        }
        Some(FpMat::from_fn(p, n, n, |r, c| aug.at(r, n + c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_known_cases() {
        // x^2 + x + 1 irreducible over F_2, x^2 + 1 is not
        assert!(poly_is_irreducible(&[1, 1, 1], 2));
        assert!(!poly_is_irreducible(&[1, 0, 1], 2));
        // x^3 + x + 1 over F_2
        assert!(poly_is_irreducible(&[1, 1, 0, 1], 2));
        // x^2 + 1 over F_3 (no square root of -1 mod 3)
        assert!(poly_is_irreducible(&[1, 0, 1], 3));
        // x^2 - x = x(x-1)
        assert!(!poly_is_irreducible(&[0, 2, 1], 3));
        // degree-9 product of deg 4 * deg 5 must be rejected even though
        // neither factor degree divides a proper divisor of 9
        let f4 = [1, 1, 0, 0, 1]; // x^4+x+1, irreducible
        let f5 = [1, 0, 1, 0, 0, 1]; // x^5+x^2+1, irreducible
        let mut prod = vec![0u64; 10];
        for (i, &a) in f4.iter().enumerate() {
            for (j, &b) in f5.iter().enumerate() {
                prod[i + j] ^= a & b;
            }
        }
        assert!(!poly_is_irreducible(&prod, 2));
    }

    #[test]
    fn matrix_solve_and_nullspace() {
        let p = 3;
        let m = FpMat::from_fn(p, 2, 3, |r, c| [[1, 2, 0], [0, 1, 1]][r][c]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert_eq!(m.mul_vec(v), vec![0, 0]);
        }
        let sol = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&sol), vec![1, 2]);
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let p = 5;
        let m = FpMat::from_fn(p, 3, 3, |r, c| [[1, 2, 3], [0, 1, 4], [2, 0, 1]][r][c]);
        let inv = m.inverse().unwrap();
        for j in 0..3 {
            let mut e = vec![0u64; 3];
            e[j] = 1;
            assert_eq!(m.mul_vec(&inv.mul_vec(&e)), e);
        }
        assert_eq!(m.rank(), 3);
    }
}
