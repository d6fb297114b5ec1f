//! Lions-Peetre K-functionals K(a, t; A0, A1) = inf { ||a0||_A0 + t ||a1||_A1 }
//! over splittings a = a0 + a1, for the pairs (l1, l2), (l2, linf) and
//! (l2, lq) with q > 2, plus the discrete min-formula and the dual
//! intersection norms that certify them.
//!
//! The (l1,l2) and (l2,linf) pairs reduce to a one-dimensional convex search
//! over a clip threshold with breakpoints at the sorted entries. The (l2,lq)
//! pair is solved through its optimality path c + beta c^(q-1) = a, which
//! meets the dual ball intersection exactly at the root of a scalar
//! equation, so both witnesses come out with machine-precision gaps.

use crate::error::{Error, Result};
use crate::hypercube::{Lp, Spectrum};
use serde::Serialize;

/// The interpolation couple a K-functional query runs against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormPair {
    /// (l1, l2)
    L1L2,
    /// (l2, linf)
    L2Linf,
    /// (l2, lq) with q in (2, inf); q = inf callers should use L2Linf.
    L2Lq(f64),
}

#[derive(Debug, Clone)]
pub struct KQuery {
    pub a: Vec<f64>,
    pub t: f64,
    pub pair: NormPair,
}

impl KQuery {
    pub fn new(a: Vec<f64>, t: f64, pair: NormPair) -> Result<Self> {
        if !a.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Invalid(format!("K-functional parameter t = {t} must be >= 0")));
        }
        if let NormPair::L2Lq(q) = pair {
            if q.is_infinite() && q > 0.0 {
                return Ok(KQuery { a, t, pair: NormPair::L2Linf });
            }
            if !(q > 2.0) || !q.is_finite() {
                return Err(Error::Invalid(format!("L2Lq pair needs q in (2, inf], got {q}")));
            }
        }
        Ok(KQuery { a, t, pair })
    }
}

/// Certified K-functional value with primal decomposition and dual witness.
#[derive(Debug, Clone, Serialize)]
pub struct KResult {
    pub value: f64,
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
    /// Dual certificate u with ||u||_{A0*} <= 1 and ||u||_{A1*} <= t.
    pub dual: Vec<f64>,
    /// The pairing <a, u>, a rigorous lower bound on the value.
    pub lower: f64,
    pub gap: f64,
    pub converged: bool,
}

pub fn vec_norm(xs: &[f64], p: Lp) -> f64 {
    match p {
        Lp::Inf => xs.iter().fold(0.0, |m, v| m.max(v.abs())),
        Lp::Finite(p) if p == 1.0 => xs.iter().map(|v| v.abs()).sum(),
        Lp::Finite(p) if p == 2.0 => xs.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Lp::Finite(p) => {
            let m = xs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = xs.iter().map(|v| (v.abs() / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Golden-section minimum of a unimodal function on [lo, hi].
fn golden_min(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

struct SortedAbs {
    /// |a| sorted descending, with s[n] = 0 appended.
    s: Vec<f64>,
    /// prefix1[r] = sum of the r largest |a_i|.
    prefix1: Vec<f64>,
    /// prefix2[r] = sum of squares of the r largest |a_i|.
    prefix2: Vec<f64>,
}

fn sorted_abs(a: &[f64]) -> SortedAbs {
    let mut s: Vec<f64> = a.iter().map(|v| v.abs()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let n = s.len();
    let mut prefix1 = vec![0.0; n + 1];
    let mut prefix2 = vec![0.0; n + 1];
    for i in 0..n {
        prefix1[i + 1] = prefix1[i] + s[i];
        prefix2[i + 1] = prefix2[i] + s[i] * s[i];
    }
    s.push(0.0);
    SortedAbs { s, prefix1, prefix2 }
}

fn clip(a: &[f64], lambda: f64) -> Vec<f64> {
    a.iter()
        .map(|&v| v.clamp(-lambda, lambda))
        .collect()
}

fn excess(a: &[f64], lambda: f64) -> Vec<f64> {
    a.iter()
        .map(|&v| v.signum() * (v.abs() - lambda).max(0.0))
        .collect()
}

/// Scale u into the dual ball {||u||_p0 <= b0, ||u||_p1 <= b1}.
fn shrink_feasible(u: &mut [f64], p0: Lp, b0: f64, p1: Lp, b1: f64) {
    let r0 = vec_norm(u, p0);
    let r1 = vec_norm(u, p1);
    let mut sigma = 1.0f64;
    if r0 > 0.0 {
        sigma = sigma.min(b0 / r0);
    }
    if r1 > 0.0 {
        sigma = sigma.min(b1 / r1);
    }
    if sigma < 1.0 {
        for v in u.iter_mut() {
            *v *= sigma;
        }
    }
}

/// Exact K-functional for the closed-form pairs, certified solve for L2Lq.
pub fn k_exact(query: &KQuery, tol: f64) -> Result<KResult> {
    let a = &query.a;
    let t = query.t;
    let n = a.len();
    let zero = vec![0.0; n];
    let amax = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // Everything in a1 is free when t = 0; nothing to solve.
    if t == 0.0 || amax == 0.0 {
        return Ok(KResult {
            value: if amax == 0.0 { 0.0 } else { 0.0 },
            a0: zero.clone(),
            a1: a.clone(),
            dual: zero,
            lower: 0.0,
            gap: 0.0,
            converged: true,
        });
    }

    match query.pair {
        NormPair::L2Linf => Ok(k_threshold_pair(a, t, true)),
        NormPair::L1L2 => Ok(k_threshold_pair(a, t, false)),
        NormPair::L2Lq(q) => k_l2_lq(a, t, q, tol),
    }
}

/// Shared 1-D threshold search. `linf_side` picks (l2, linf); otherwise (l1, l2).
///
/// The excess energy sum_{i<r} (s_i - lambda)^2 is accumulated around the
/// segment top (all increments nonnegative); the naive prefix-sum form
/// cancels catastrophically when the excess is tiny and misranks segments.
fn k_threshold_pair(a: &[f64], t: f64, linf_side: bool) -> KResult {
    let sa = sorted_abs(a);
    let n = a.len();

    // tail2[r] = sum of squares of the n - r smallest entries.
    let mut tail2 = vec![0.0f64; n + 1];
    for r in (0..n).rev() {
        tail2[r] = tail2[r + 1] + sa.s[r] * sa.s[r];
    }

    // Center-shifted moments of the top r entries: with c the segment top,
    // shift_b = sum (s_i - c), shift_a = sum (s_i - c)^2 over i < r.
    let mut shift_a = 0.0f64;
    let mut shift_b = 0.0f64;
    let mut best = (0.0f64, f64::INFINITY);
    for r in 1..=n {
        let c = sa.s[r - 1];
        if r >= 2 {
            // Re-center from the previous segment top.
            let prev_c = sa.s[r - 2];
            let d = prev_c - c;
            shift_a += 2.0 * d * shift_b + (r - 1) as f64 * d * d;
            shift_b += (r - 1) as f64 * d;
        }
        let hi = c;
        let lo = sa.s[r];
        let cost = |lambda: f64| -> f64 {
            let delta = c - lambda;
            if linf_side {
                let h2 = shift_a + 2.0 * delta * shift_b + r as f64 * delta * delta;
                h2.sqrt() + t * lambda
            } else {
                let l1_excess = shift_b + r as f64 * delta;
                let clip2 = tail2[r] + r as f64 * lambda * lambda;
                l1_excess + t * clip2.sqrt()
            }
        };
        if hi <= lo {
            continue;
        }
        let (lam, val) = golden_min(lo, hi, cost);
        for (l, v) in [(lam, val), (lo, cost(lo)), (hi, cost(hi))] {
            if v < best.1 {
                best = (l, v);
            }
        }
    }
    // lambda = 0 endpoint (pure A0 side).
    if n > 0 {
        let v0 = if linf_side {
            tail2[0].sqrt()
        } else {
            sa.prefix1[n] // all mass in the l1 part
        };
        if v0 < best.1 {
            best = (0.0, v0);
        }
    }

    let lambda = best.0;
    let a1 = clip(a, lambda);
    let a0 = excess(a, lambda);
    let (value, mut dual);
    if linf_side {
        value = vec_norm(&a0, Lp::Finite(2.0)) + t * vec_norm(&a1, Lp::Inf);
        let h = vec_norm(&a0, Lp::Finite(2.0));
        if h > 1e-300 {
            dual = a0.iter().map(|v| v / h).collect::<Vec<f64>>();
        } else {
            // Everything clipped: spread t over the maximal entries.
            let cut = sa.s[0] * (1.0 - 1e-12);
            let m = a.iter().filter(|v| v.abs() >= cut).count().max(1);
            dual = a
                .iter()
                .map(|&v| {
                    if v.abs() >= cut {
                        v.signum() * t / m as f64
                    } else {
                        0.0
                    }
                })
                .collect();
        }
        shrink_feasible(&mut dual, Lp::Finite(2.0), 1.0, Lp::Finite(1.0), t);
    } else {
        value = vec_norm(&a0, Lp::Finite(1.0)) + t * vec_norm(&a1, Lp::Finite(2.0));
        let h = vec_norm(&a1, Lp::Finite(2.0));
        if h > 1e-300 {
            dual = a1.iter().map(|v| t * v / h).collect::<Vec<f64>>();
        } else {
            dual = a.iter().map(|v| v.signum()).collect();
        }
        shrink_feasible(&mut dual, Lp::Inf, 1.0, Lp::Finite(2.0), t);
    }
    let lower = dot(a, &dual);
    KResult {
        value,
        a0,
        a1,
        dual,
        lower,
        gap: value - lower,
        converged: true,
    }
}

/// min ||a - c||_2 + t ||c||_q via the per-coordinate optimality path
/// c + beta c^(q-1) = |a|, with beta pinned down by a scalar root-find.
fn k_l2_lq(a: &[f64], t: f64, q: f64, tol: f64) -> Result<KResult> {
    let qstar = q / (q - 1.0);
    let n = a.len();
    let abs: Vec<f64> = a.iter().map(|v| v.abs()).collect();

    // c(beta) per coordinate, by safeguarded Newton on [0, s].
    let path = |beta: f64| -> Vec<f64> {
        abs.iter()
            .map(|&s| {
                if s == 0.0 {
                    return 0.0;
                }
                let (mut lo, mut hi) = (0.0f64, s);
                let mut c = s / (1.0 + beta * s.powf(q - 2.0)).max(1.0);
                for _ in 0..60 {
                    let pw = c.powf(q - 2.0);
                    let f = c + beta * pw * c - s;
                    if f.abs() <= 1e-15 * s {
                        break;
                    }
                    if f > 0.0 {
                        hi = c;
                    } else {
                        lo = c;
                    }
                    let df = 1.0 + beta * (q - 1.0) * pw;
                    let next = c - f / df;
                    c = if next > lo && next < hi {
                        next
                    } else {
                        0.5 * (lo + hi)
                    };
                }
                c
            })
            .collect()
    };

    // G(beta) = ||c||_q^(q-1) / || c^(q-1) ||_2 equals the q*-norm of the unit
    // l2 residual direction; the optimum sits where it crosses t.
    let ratio = |c: &[f64]| -> f64 {
        let cq = vec_norm(c, Lp::Finite(q));
        let pw: Vec<f64> = c.iter().map(|v| v.powf(q - 1.0)).collect();
        let denom = vec_norm(&pw, Lp::Finite(2.0));
        if denom == 0.0 {
            f64::INFINITY
        } else {
            cq.powf(q - 1.0) / denom
        }
    };

    let assemble = |c_abs: &[f64], converged: bool| -> KResult {
        let a1: Vec<f64> = a
            .iter()
            .zip(c_abs)
            .map(|(&v, &c)| v.signum() * c)
            .collect();
        let a0: Vec<f64> = a.iter().zip(&a1).map(|(v, c)| v - c).collect();
        let value = vec_norm(&a0, Lp::Finite(2.0)) + t * vec_norm(&a1, Lp::Finite(q));
        let r2 = vec_norm(&a0, Lp::Finite(2.0));
        let mut dual: Vec<f64> = if r2 > 1e-300 {
            a0.iter().map(|v| v / r2).collect()
        } else {
            // c = a: certificate from the q-norm duality map.
            let denom = vec_norm(a, Lp::Finite(q)).powf(q - 1.0);
            a.iter()
                .map(|&v| t * v.signum() * v.abs().powf(q - 1.0) / denom)
                .collect()
        };
        shrink_feasible(&mut dual, Lp::Finite(2.0), 1.0, Lp::Finite(qstar), t);
        let lower = dot(a, &dual);
        KResult {
            value,
            a0,
            a1,
            dual,
            lower,
            gap: value - lower,
            converged,
        }
    };

    // Endpoint c = a: optimal when the duality-map certificate is l2-feasible.
    let g0 = ratio(&abs);
    if t <= g0 {
        return Ok(assemble(&abs, true));
    }
    // Endpoint c = 0: optimal when u = a/||a||_2 is q*-feasible.
    if vec_norm(a, Lp::Finite(qstar)) / vec_norm(a, Lp::Finite(2.0)) <= t {
        return Ok(assemble(&vec![0.0; n], true));
    }

    // Bracket the crossing G(beta) = t, then bisect until the certificate gap
    // closes. Any root gives a zero-gap pair, so non-monotonicity is harmless.
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let mut guard = 0;
    while ratio(&path(hi)) < t && guard < 200 {
        lo = hi;
        hi *= 4.0;
        guard += 1;
    }
    let mut best: Option<KResult> = None;
    let mut converged = false;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let c = path(mid);
        let res = assemble(&c, true);
        let better = best.as_ref().map_or(true, |b| res.gap < b.gap);
        if better {
            best = Some(res);
        }
        if best.as_ref().unwrap().gap <= tol {
            converged = true;
            break;
        }
        if ratio(&c) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut out = best.unwrap_or_else(|| assemble(&abs, false));
    out.converged = converged;
    Ok(out)
}

/// The discrete min-formula min_r (sum_{i<=r} a*_i^2)^(1/2) + k a*_{r+1},
/// with a* the decreasing rearrangement of |a| and a*_{n+1} = 0. Always an
/// upper bound for K(a, k; l2, linf); ties break toward smaller r.
pub fn k_minformula(a: &[f64], k: f64) -> f64 {
    let sa = sorted_abs(a);
    let n = a.len();
    let mut best = f64::INFINITY;
    for r in 0..=n {
        let v = sa.prefix2[r].sqrt() + k * sa.s[r];
        if v < best - 0.0 {
            if v < best {
                best = v;
            }
        }
    }
    best
}

/// The singleton-level functional |Ef| + max_i |f^({i})| + sqrt((r-1)/r) * l2
/// of the singleton coefficients; r = inf uses factor 1.
pub fn thm12_rhs(spectrum: &Spectrum, r: Lp) -> Result<f64> {
    let factor = match r {
        Lp::Inf => 1.0,
        Lp::Finite(r) => {
            if r <= 1.0 {
                return Err(Error::InvalidExponent);
            }
            ((r - 1.0) / r).sqrt()
        }
    };
    let n = spectrum.n();
    let mean = spectrum.coeff(0).abs();
    let mut max1 = 0.0f64;
    let mut sum2 = 0.0f64;
    for i in 0..n {
        let c = spectrum.coeff(1usize << i);
        max1 = max1.max(c.abs());
        sum2 += c * c;
    }
    Ok(mean + max1 + factor * sum2.sqrt())
}

/// K(a, sqrt(r*); l1, l2), the K-functional form of the L_{r*} norm of a
/// Rademacher sum with coefficients a.
pub fn hitczenko_value(a: &[f64], r: Lp, tol: f64) -> Result<KResult> {
    let rstar = match r {
        Lp::Inf => 1.0,
        Lp::Finite(v) => {
            if v <= 1.0 {
                return Err(Error::InvalidExponent);
            }
            v / (v - 1.0)
        }
    };
    let query = KQuery::new(a.to_vec(), rstar.sqrt(), NormPair::L1L2)?;
    k_exact(&query, tol)
}

/// Norm of the dual of (A0 + t A1): max(||y||_{A0*}, ||y||_{A1*} / t).
pub fn dual_intersection_norm(y: &[f64], t: f64, pair: NormPair) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("dual norm needs t > 0, got {t}")));
    }
    Ok(match pair {
        NormPair::L1L2 => vec_norm(y, Lp::Inf).max(vec_norm(y, Lp::Finite(2.0)) / t),
        NormPair::L2Linf => vec_norm(y, Lp::Finite(2.0)).max(vec_norm(y, Lp::Finite(1.0)) / t),
        NormPair::L2Lq(q) => {
            let qstar = if q.is_infinite() { 1.0 } else { q / (q - 1.0) };
            vec_norm(y, Lp::Finite(2.0)).max(vec_norm(y, Lp::Finite(qstar)) / t)
        }
    })
}
