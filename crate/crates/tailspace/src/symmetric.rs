//! Permutation-symmetric functions: level profiles, elementary symmetric
//! polynomials evaluated through Krawtchouk recurrences, the auxiliary
//! function H_{k,n}(x) = T_k((x_1+..+x_n)/n) with its expansion in the
//! elementary symmetric basis, and the coefficient bound for the L1 distance
//! of symmetric polynomials from tail spaces.

use crate::chebyshev::{chebyshev_row, tilde_c};
use crate::error::{Error, Result};
use crate::hypercube::{BooleanFunction, Capacity, Lp};

/// Profiles are tiny (n+1 floats) but weights need C(n,m) in f64 range.
pub const MAX_PROFILE_DIMENSION: u32 = 1000;

/// Exact evaluation of the l-th elementary symmetric multilinear polynomial
/// at any point with `m` coordinates equal to -1, via the Krawtchouk-type
/// two-term recurrence
/// (l+1) K_{l+1} = (n - 2m) K_l - (n - l + 1) K_{l-1}.
///
/// Returns `None` when a checked i128 operation would overflow.
pub fn krawtchouk_exact(n: u32, l: u32, m: u32) -> Option<i128> {
    let s = n as i128 - 2 * m as i128;
    let prev: i128 = 1; // K_0
    if l == 0 {
        return Some(prev);
    }
    let mut prev = prev;
    let mut cur = s; // K_1
    for j in 1..l {
        let a = s.checked_mul(cur)?;
        let b = (n as i128 - j as i128 + 1).checked_mul(prev)?;
        let num = a.checked_sub(b)?;
        // K values are integers, so the division is exact.
        let next = num / (j as i128 + 1);
        prev = cur;
        cur = next;
    }
    Some(cur)
}

fn krawtchouk_f64(n: u32, l: u32, m: u32) -> f64 {
    let s = n as f64 - 2.0 * m as f64;
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = s;
    for j in 1..l {
        let next = (s * cur - (n as f64 - j as f64 + 1.0) * prev) / (j as f64 + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// f_l evaluated at a point with `m` coordinates equal to -1. Exact integer
/// arithmetic wherever it fits in 128 bits, f64 recurrence beyond that.
pub fn elem_sym_value(n: u32, l: u32, m: u32) -> Result<f64> {
    if l > n {
        return Err(Error::LevelOutOfRange { level: l, n });
    }
    if m > n {
        return Err(Error::Invalid(format!("m = {m} exceeds n = {n}")));
    }
    Ok(krawtchouk(n, l, m))
}

fn krawtchouk(n: u32, l: u32, m: u32) -> f64 {
    match krawtchouk_exact(n, l, m) {
        Some(v) => v as f64,
        None => krawtchouk_f64(n, l, m),
    }
}

pub(crate) fn binomial_f64(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The level weights C(n,m)/2^n for m = 0..=n.
pub fn level_weights(n: u32) -> Vec<f64> {
    let mut w = Vec::with_capacity(n as usize + 1);
    let mut cur = 0.5f64.powi(n as i32);
    for m in 0..=n {
        w.push(cur);
        if m < n {
            cur = cur * (n - m) as f64 / (m + 1) as f64;
        }
    }
    w
}

pub(crate) fn profile_norm(levels: &[f64], weights: &[f64], p: Lp) -> f64 {
    match p {
        Lp::Inf => levels.iter().fold(0.0, |a, v| a.max(v.abs())),
        Lp::Finite(q) if q == 1.0 => levels.iter().zip(weights).map(|(v, w)| v.abs() * w).sum(),
        Lp::Finite(q) if q == 2.0 => levels
            .iter()
            .zip(weights)
            .map(|(v, w)| v * v * w)
            .sum::<f64>()
            .sqrt(),
        Lp::Finite(q) => {
            let m = levels.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = levels
                .iter()
                .zip(weights)
                .map(|(v, w)| (v.abs() / m).powf(q) * w)
                .sum();
            m * s.powf(1.0 / q)
        }
    }
}

/// A permutation-symmetric function stored by level: `levels[m]` is the value
/// at any point with exactly m coordinates equal to -1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProfile {
    n: u32,
    levels: Vec<f64>,
}

impl SymmetricProfile {
    pub fn new(n: u32, levels: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_PROFILE_DIMENSION {
            return Err(Error::Capacity {
                n,
                max: MAX_PROFILE_DIMENSION,
            });
        }
        if levels.len() != n as usize + 1 {
            return Err(Error::BadLength {
                n,
                len: levels.len(),
            });
        }
        if !levels.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SymmetricProfile { n, levels })
    }

    pub fn constant(n: u32, c: f64) -> Result<Self> {
        Self::new(n, vec![c; n as usize + 1])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn norm(&self, p: Lp) -> f64 {
        profile_norm(&self.levels, &level_weights(self.n), p)
    }

    /// E[f h] for two symmetric functions.
    pub fn inner(&self, other: &SymmetricProfile) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let w = level_weights(self.n);
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .zip(&w)
            .map(|((a, b), w)| a * b * w)
            .sum())
    }

    /// Coefficients in the elementary symmetric basis, via orthogonality:
    /// gamma_l = <f, f_l> / C(n,l).
    pub fn basis_coefficients(&self) -> Vec<f64> {
        let w = level_weights(self.n);
        (0..=self.n)
            .map(|l| {
                let pairing: f64 = (0..=self.n)
                    .map(|m| w[m as usize] * self.levels[m as usize] * krawtchouk(self.n, l, m))
                    .sum();
                pairing / binomial_f64(self.n, l)
            })
            .collect()
    }

    pub fn to_dense(&self, cap: Capacity) -> Result<BooleanFunction> {
        cap.check(self.n)?;
        let values = (0..1usize << self.n)
            .map(|b| self.levels[b.count_ones() as usize])
            .collect();
        BooleanFunction::new(self.n, values)
    }

    /// Level-average a dense function; exact when the input is symmetric.
    pub fn from_dense(f: &BooleanFunction) -> SymmetricProfile {
        let n = f.n();
        let mut sums = vec![0.0; n as usize + 1];
        let mut counts = vec![0usize; n as usize + 1];
        for (b, &v) in f.values().iter().enumerate() {
            let m = b.count_ones() as usize;
            sums[m] += v;
            counts[m] += 1;
        }
        let levels = sums
            .iter()
            .zip(&counts)
            .map(|(s, c)| s / *c as f64)
            .collect();
        SymmetricProfile { n, levels }
    }

    pub fn scale(&self, c: f64) -> SymmetricProfile {
        SymmetricProfile {
            n: self.n,
            levels: self.levels.iter().map(|v| c * v).collect(),
        }
    }

    pub fn sub(&self, other: &SymmetricProfile) -> Result<SymmetricProfile> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(SymmetricProfile {
            n: self.n,
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

/// A symmetric polynomial sum_l alpha[l] f_l in the elementary symmetric basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPoly {
    n: u32,
    alpha: Vec<f64>,
}

impl SymmetricPoly {
    pub fn new(n: u32, alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() > n as usize + 1 {
            return Err(Error::Invalid(format!(
                "coefficient count {} out of range for n = {n}",
                alpha.len()
            )));
        }
        if !alpha.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(SymmetricPoly { n, alpha })
    }

    /// The basis polynomial f_l itself.
    pub fn basis(n: u32, l: u32) -> Result<Self> {
        if l > n {
            return Err(Error::LevelOutOfRange { level: l, n });
        }
        let mut alpha = vec![0.0; l as usize + 1];
        alpha[l as usize] = 1.0;
        Self::new(n, alpha)
    }

    pub fn zero(n: u32) -> Self {
        SymmetricPoly {
            n,
            alpha: vec![0.0],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.alpha.iter().rposition(|&a| a != 0.0).unwrap_or(0) as u32
    }

    pub fn to_profile(&self) -> Result<SymmetricProfile> {
        let n = self.n;
        let levels = (0..=n)
            .map(|m| {
                self.alpha
                    .iter()
                    .enumerate()
                    .map(|(l, &a)| {
                        if a == 0.0 {
                            0.0
                        } else {
                            a * krawtchouk(n, l as u32, m)
                        }
                    })
                    .sum()
            })
            .collect();
        SymmetricProfile::new(n, levels)
    }

    pub fn to_dense(&self, cap: Capacity) -> Result<BooleanFunction> {
        self.to_profile()?.to_dense(cap)
    }

    pub fn sub(&self, other: &SymmetricPoly) -> Result<SymmetricPoly> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let len = self.alpha.len().max(other.alpha.len());
        let alpha = (0..len)
            .map(|i| {
                self.alpha.get(i).copied().unwrap_or(0.0)
                    - other.alpha.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        SymmetricPoly::new(self.n, alpha)
    }

    pub fn scale(&self, c: f64) -> SymmetricPoly {
        SymmetricPoly {
            n: self.n,
            alpha: self.alpha.iter().map(|a| c * a).collect(),
        }
    }
}

/// The profile of H_{k,n}(x) = T_k((x_1+..+x_n)/n): levels[m] = T_k((n-2m)/n).
pub fn build_h(k: u32, n: u32) -> Result<SymmetricProfile> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!(
            "build_h needs n >= k >= 1, got k={k} n={n}"
        )));
    }
    let levels = (0..=n)
        .map(|m| {
            let t = (n as f64 - 2.0 * m as f64) / n as f64;
            (k as f64 * t.clamp(-1.0, 1.0).acos()).cos()
        })
        .collect();
    SymmetricProfile::new(n, levels)
}

/// Expansion T_k((x_1+..+x_n)/n) = sum_l beta[l] f_l, solved from the level
/// profile through the finite-difference triangular system. Odd-parity
/// entries (k - l odd) vanish and are pinned to zero.
#[derive(Debug, Clone)]
pub struct BetaExpansion {
    pub beta: Vec<f64>,
    /// max over m of |sum_l beta_l f_l(m) - T_k((n-2m)/n)|, a conditioning diagnostic.
    pub max_residual: f64,
}

/// Minimal double-double arithmetic for the triangular back substitution.
/// The system amplifies coefficient errors by factors in the thousands at
/// large n, so intermediate betas must carry more than f64 precision to meet
/// the 1e-9 residual budget.
mod dd {
    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: e }
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    pub fn from_i128(v: i128) -> Dd {
        let hi = v as f64;
        // hi is integral for |v| >= 2^53, so the cast back is exact within range.
        let rem = v - hi as i128;
        quick_two_sum(hi, rem as f64)
    }

    pub fn add(x: Dd, y: Dd) -> Dd {
        let s = two_sum(x.hi, y.hi);
        let lo = s.lo + x.lo + y.lo;
        quick_two_sum(s.hi, lo)
    }

    pub fn mul(x: Dd, y: Dd) -> Dd {
        let p = two_prod(x.hi, y.hi);
        let lo = p.lo + x.hi * y.lo + x.lo * y.hi;
        quick_two_sum(p.hi, lo)
    }

    pub fn neg(x: Dd) -> Dd {
        Dd { hi: -x.hi, lo: -x.lo }
    }

    /// Exact scaling by a power of two.
    pub fn scale_pow2(x: Dd, s: f64) -> Dd {
        Dd {
            hi: x.hi * s,
            lo: x.lo * s,
        }
    }

    pub fn to_f64(x: Dd) -> f64 {
        x.hi + x.lo
    }
}

/// Forward-difference triangle in place: d[l] becomes the l-th difference at 0.
fn difference_triangle_f64(d: &mut [f64]) {
    let k = d.len() - 1;
    for s in 1..=k {
        for i in (s..=k).rev() {
            d[i] -= d[i - 1];
        }
    }
}

fn difference_triangle_i128(d: &mut [i128]) -> bool {
    let k = d.len() - 1;
    for s in 1..=k {
        for i in (s..=k).rev() {
            match d[i].checked_sub(d[i - 1]) {
                Some(v) => d[i] = v,
                None => return false,
            }
        }
    }
    true
}

/// T_k((n-2m)/n) for m = 0..=k as exact integers N_m with T = N_m / n^k.
fn h_rhs_exact(k: u32, n: u32) -> Option<Vec<i128>> {
    let row = chebyshev_row(k).ok()?;
    let kk = k as usize;
    let mut out = Vec::with_capacity(kk + 1);
    for m in 0..=kk {
        let s = n as i128 - 2 * m as i128;
        let mut acc: i128 = 0;
        let mut s_pow: i128 = 1;
        let mut n_pows = vec![1i128; kk + 1];
        for j in 1..=kk {
            n_pows[j] = n_pows[j - 1].checked_mul(n as i128)?;
        }
        for j in 0..=kk {
            let c = row.coeff(j as u32);
            if c != 0 {
                let term = c.checked_mul(s_pow)?.checked_mul(n_pows[kk - j])?;
                acc = acc.checked_add(term)?;
            }
            if j < kk {
                s_pow = s_pow.checked_mul(s)?;
            }
        }
        out.push(acc);
    }
    Some(out)
}

pub fn beta_expansion(k: u32, n: u32) -> Result<BetaExpansion> {
    if k == 0 || k > n {
        return Err(Error::Invalid(format!(
            "beta_expansion needs n >= k >= 1, got k={k} n={n}"
        )));
    }
    let kk = k as usize;

    // Exact path: solve the n^k-scaled system D beta' = Delta N in
    // double-double arithmetic (the diagonal is (-2)^l, an exact power of
    // two) and rescale once at the end. Falls back to plain f64 when the
    // integer tables overflow.
    let exact_rhs = h_rhs_exact(k, n)
        .and_then(|mut ints| difference_triangle_i128(&mut ints).then_some(ints));
    let exact_basis: Option<Vec<Vec<i128>>> = (0..=kk)
        .map(|j| {
            (0..=kk)
                .map(|m| krawtchouk_exact(n, j as u32, m as u32))
                .collect::<Option<Vec<i128>>>()
                .and_then(|mut ints| difference_triangle_i128(&mut ints).then_some(ints))
        })
        .collect();

    let mut beta = vec![0.0f64; kk + 1];
    match (exact_rhs, exact_basis) {
        (Some(rhs_int), Some(basis_int)) => {
            let mut scaled: Vec<dd::Dd> = vec![dd::from_f64(0.0); kk + 1];
            for l in (0..=kk).rev() {
                let mut acc = dd::from_i128(rhs_int[l]);
                for j in l + 1..=kk {
                    let term = dd::mul(scaled[j], dd::from_i128(basis_int[j][l]));
                    acc = dd::add(acc, dd::neg(term));
                }
                // basis_int[l][l] = (-2)^l.
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                scaled[l] = dd::scale_pow2(acc, sign / (1u64 << l) as f64);
            }
            let nk = (n as f64).powi(k as i32);
            for l in 0..=kk {
                beta[l] = dd::to_f64(scaled[l]) / nk;
            }
        }
        _ => {
            let mut rhs: Vec<f64> = (0..=kk)
                .map(|m| {
                    let t = (n as f64 - 2.0 * m as f64) / n as f64;
                    (k as f64 * t.clamp(-1.0, 1.0).acos()).cos()
                })
                .collect();
            difference_triangle_f64(&mut rhs);
            let mut basis: Vec<Vec<f64>> = Vec::with_capacity(kk + 1);
            for j in 0..=kk {
                let mut d: Vec<f64> = (0..=kk)
                    .map(|m| krawtchouk(n, j as u32, m as u32))
                    .collect();
                difference_triangle_f64(&mut d);
                basis.push(d);
            }
            for l in (0..=kk).rev() {
                let mut acc = rhs[l];
                for j in l + 1..=kk {
                    acc -= beta[j] * basis[j][l];
                }
                beta[l] = acc / basis[l][l];
            }
        }
    }
    for (l, b) in beta.iter_mut().enumerate() {
        if (kk - l) % 2 == 1 {
            *b = 0.0;
        }
    }

    // Residual diagnostic over the full profile.
    let h = build_h(k, n)?;
    let mut max_residual = 0.0f64;
    for m in 0..=n {
        let fit: f64 = beta
            .iter()
            .enumerate()
            .filter(|(_, b)| **b != 0.0)
            .map(|(l, b)| b * krawtchouk(n, l as u32, m))
            .sum();
        max_residual = max_residual.max((fit - h.levels()[m as usize]).abs());
    }
    Ok(BetaExpansion { beta, max_residual })
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The sign polynomial phi_{d,k,n} = sum over 1 <= l <= d with d - l even of
/// sign(beta_{l,k,n}) f_l. That formula makes phi_0 and phi_{-1} the zero
/// polynomial. Requires k - d even for d >= 1; callers substitute k-1 when
/// the gap is odd.
pub fn build_phi(d: i32, k: u32, n: u32) -> Result<SymmetricPoly> {
    if d <= 0 {
        return Ok(SymmetricPoly::zero(n));
    }
    let d = d as u32;
    if d > k || k > n {
        return Err(Error::Invalid(format!(
            "build_phi needs n >= k >= d, got d={d} k={k} n={n}"
        )));
    }
    if (k - d) % 2 != 0 {
        return Err(Error::Invalid(format!(
            "build_phi needs k - d even (substitute k-1 for odd gaps), got d={d} k={k}"
        )));
    }
    let expansion = beta_expansion(k, n)?;
    let mut alpha = vec![0.0; d as usize + 1];
    for l in 1..=d as usize {
        if (d as usize - l) % 2 == 0 {
            alpha[l] = sign(expansion.beta[l]);
        }
    }
    SymmetricPoly::new(n, alpha)
}

/// The coefficient bound sum_l |alpha_l| |c_tilde(k,l)| on the L1 distance of
/// a symmetric polynomial from the k-th tail space.
pub fn symmetric_bound(poly: &SymmetricPoly, k: u32) -> Result<f64> {
    if poly.degree() > k {
        return Err(Error::Invalid(format!(
            "symmetric_bound needs k >= degree, got k={k} degree={}",
            poly.degree()
        )));
    }
    let mut acc = 0.0;
    for (l, &a) in poly.alpha().iter().enumerate() {
        if a != 0.0 {
            acc += a.abs() * (tilde_c(k, l as u32)?.unsigned_abs() as f64);
        }
    }
    Ok(acc)
}
