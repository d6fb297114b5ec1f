//! Exact Chebyshev coefficients c(k,l) and the parity-adjusted variant
//! c̃(k,l): c(k,l) when k-l is even, c(k-1,l) when k-l is odd.
//!
//! Coefficients are kept in 128-bit integers with checked arithmetic, which
//! covers every k up to 102 before the first overflow; anything beyond is
//! reported as an explicit error rather than drifting in floats.

use crate::error::{Error, Result};
use std::io::Write;

/// Monomial coefficients of the k-th Chebyshev polynomial of the first kind:
/// T_k(x) = sum_l c[l] x^l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebyshevRow {
    k: u32,
    c: Vec<i128>,
}

impl ChebyshevRow {
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn coeff(&self, l: u32) -> i128 {
        self.c.get(l as usize).copied().unwrap_or(0)
    }

    /// Evaluate T_k(x) from the monomial coefficients (Horner).
    pub fn eval(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

/// Exact coefficients via the three-term recurrence
/// T_{k+1} = 2 x T_k - T_{k-1}, T_0 = 1, T_1 = x.
pub fn chebyshev_row(k: u32) -> Result<ChebyshevRow> {
    let mut prev: Vec<i128> = vec![1];
    if k == 0 {
        return Ok(ChebyshevRow { k, c: prev });
    }
    let mut cur: Vec<i128> = vec![0, 1];
    for _ in 1..k {
        let mut next = vec![0i128; cur.len() + 1];
        for (l, &c) in cur.iter().enumerate() {
            let doubled = c.checked_mul(2).ok_or(Error::Overflow("chebyshev_row"))?;
            next[l + 1] = next[l + 1]
                .checked_add(doubled)
                .ok_or(Error::Overflow("chebyshev_row"))?;
        }
        for (l, &c) in prev.iter().enumerate() {
            next[l] = next[l]
                .checked_sub(c)
                .ok_or(Error::Overflow("chebyshev_row"))?;
        }
        prev = cur;
        cur = next;
    }
    Ok(ChebyshevRow { k, c: cur })
}

/// The parity-adjusted coefficient c̃(k,l).
pub fn tilde_c(k: u32, l: u32) -> Result<i128> {
    if l > k {
        return Err(Error::Invalid(format!("tilde_c: l = {l} exceeds k = {k}")));
    }
    if (k - l) % 2 == 0 {
        Ok(chebyshev_row(k)?.coeff(l))
    } else {
        Ok(chebyshev_row(k - 1)?.coeff(l))
    }
}

/// Exact check of |c̃(k,l)| <= k^l / l!, i.e. |c̃(k,l)| * l! <= k^l in integers.
pub fn tilde_c_within_bound(k: u32, l: u32) -> Result<bool> {
    let c = tilde_c(k, l)?.unsigned_abs();
    let mut factorial: u128 = 1;
    let mut power: u128 = 1;
    for i in 1..=l {
        factorial = factorial
            .checked_mul(i as u128)
            .ok_or(Error::Overflow("tilde_c bound"))?;
        power = power
            .checked_mul(k as u128)
            .ok_or(Error::Overflow("tilde_c bound"))?;
    }
    let lhs = c.checked_mul(factorial).ok_or(Error::Overflow("tilde_c bound"))?;
    Ok(lhs <= power)
}

/// The float value of the bound k^l / l!.
pub fn coefficient_bound(k: u32, l: u32) -> f64 {
    let mut b = 1.0f64;
    for i in 1..=l {
        b *= k as f64 / i as f64;
    }
    b
}

/// CSV table of coefficients: one row (k, l, c, c_tilde, bound) per pair l <= k.
pub fn write_coefficient_table<W: Write>(out: &mut W, k_max: u32) -> Result<()> {
    writeln!(out, "k,l,c,c_tilde,bound")?;
    for k in 0..=k_max {
        let row = chebyshev_row(k)?;
        for l in 0..=k {
            writeln!(
                out,
                "{},{},{},{},{}",
                k,
                l,
                row.coeff(l),
                tilde_c(k, l)?,
                coefficient_bound(k, l)
            )?;
        }
    }
    Ok(())
}
