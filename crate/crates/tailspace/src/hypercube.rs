//! Dense functions on {-1,1}^n, their Walsh spectra and spectral projections.
//!
//! Mask convention (fixed for all file formats): bit `i` of an index `b` is
//! set iff coordinate `x_i = -1`. A subset `S` of coordinates is likewise a
//! bitmask, and the Walsh character `w_S(x) = prod_{i in S} x_i` evaluates to
//! `(-1)^popcount(S & b)`.
//!
//! The analysis transform carries the `2^-n` factor, so `Spectrum::coeff(s)`
//! is the plain Fourier-Walsh coefficient `E[f w_S]`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default cap on the dense dimension: 2^14 = 16384 table entries.
pub const DEFAULT_MAX_DIMENSION: u32 = 14;

/// Hard limit implied by `usize` shifts and sane memory use.
pub const ABSOLUTE_MAX_DIMENSION: u32 = 26;

/// Configurable dense-capacity guard used at allocation boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capacity(pub u32);

impl Default for Capacity {
    fn default() -> Self {
        Capacity(DEFAULT_MAX_DIMENSION)
    }
}

impl Capacity {
    pub fn check(self, n: u32) -> Result<()> {
        let max = self.0.min(ABSOLUTE_MAX_DIMENSION);
        if n == 0 || n > max {
            return Err(Error::Capacity { n, max });
        }
        Ok(())
    }
}

/// Exponent of an L_p norm; `Inf` is the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lp {
    Finite(f64),
    Inf,
}

impl Lp {
    pub fn new(p: f64) -> Result<Lp> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Lp::Inf);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidExponent);
        }
        Ok(Lp::Finite(p))
    }

    pub fn inf() -> Lp {
        Lp::Inf
    }

    /// Conjugate exponent: 1/p + 1/p* = 1.
    pub fn conjugate(self) -> Lp {
        match self {
            Lp::Inf => Lp::Finite(1.0),
            Lp::Finite(p) if p == 1.0 => Lp::Inf,
            Lp::Finite(p) => Lp::Finite(p / (p - 1.0)),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Lp::Finite(p) => p,
            Lp::Inf => f64::INFINITY,
        }
    }

    pub fn parse(s: &str) -> Result<Lp> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Lp::Inf);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Invalid(format!("cannot parse exponent {s:?}")))?;
        Lp::new(p)
    }
}

impl Serialize for Lp {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lp::Finite(p) => ser.serialize_f64(*p),
            Lp::Inf => ser.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Lp {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Lp, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        let r = Repr::deserialize(de)?;
        let lp = match r {
            Repr::Num(p) => Lp::new(p),
            Repr::Str(s) => Lp::parse(&s),
        };
        lp.map_err(serde::de::Error::custom)
    }
}

/// Dense real-valued function on the hypercube, indexed by point bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanFunction {
    n: u32,
    values: Vec<f64>,
}

/// Dense Fourier-Walsh coefficient table, indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: u32,
    coeffs: Vec<f64>,
}

fn check_table(n: u32, data: &[f64]) -> Result<()> {
    if n == 0 || n > ABSOLUTE_MAX_DIMENSION {
        return Err(Error::Capacity {
            n,
            max: ABSOLUTE_MAX_DIMENSION,
        });
    }
    if data.len() != 1usize << n {
        return Err(Error::BadLength { n, len: data.len() });
    }
    if !data.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// In-place Walsh-Hadamard butterfly (unnormalized, self-inverse up to 2^n).
pub(crate) fn wht_in_place(data: &mut [f64]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        let mut i = 0;
        while i < len {
            for j in i..i + h {
                let a = data[j];
                let b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
            i += h * 2;
        }
        h *= 2;
    }
}

impl BooleanFunction {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        check_table(n, &values)?;
        Ok(BooleanFunction { n, values })
    }

    pub fn constant(n: u32, c: f64) -> Result<Self> {
        Self::new(n, vec![c; 1usize << n])
    }

    /// The Walsh character w_S for the subset encoded by `mask`.
    pub fn character(n: u32, mask: usize) -> Result<Self> {
        if mask >= (1usize << n) {
            return Err(Error::Invalid(format!("mask {mask} out of range for n = {n}")));
        }
        let values = (0..1usize << n)
            .map(|b| if (b & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Self::new(n, values)
    }

    /// The Rademacher sum sum_i a_i x_i.
    pub fn rademacher_sum(a: &[f64]) -> Result<Self> {
        let n = a.len() as u32;
        if n == 0 || n > ABSOLUTE_MAX_DIMENSION {
            return Err(Error::Capacity {
                n,
                max: ABSOLUTE_MAX_DIMENSION,
            });
        }
        let values = (0..1usize << n)
            .map(|b| {
                (0..a.len())
                    .map(|i| if b >> i & 1 == 1 { -a[i] } else { a[i] })
                    .sum()
            })
            .collect();
        Self::new(n, values)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Point evaluation at the point encoded by `mask` (bit i set means x_i = -1).
    pub fn eval(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    /// Analysis transform: coefficients f̂(S) = E[f w_S], O(n 2^n).
    pub fn fwht(&self) -> Spectrum {
        let mut data = self.values.clone();
        wht_in_place(&mut data);
        let scale = 1.0 / self.values.len() as f64;
        for v in &mut data {
            *v *= scale;
        }
        Spectrum {
            n: self.n,
            coeffs: data,
        }
    }

    /// L_p norm with respect to the uniform probability measure.
    pub fn norm(&self, p: Lp) -> f64 {
        norm_weighted(&self.values, p, 1.0 / self.values.len() as f64)
    }

    /// Pairing E[f h]; equals the spectral inner product by Parseval.
    pub fn inner(&self, other: &BooleanFunction) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let dot: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(dot / self.values.len() as f64)
    }

    /// Spectral projection onto the levels in `set`.
    pub fn project(&self, set: &SpectralSet) -> Result<BooleanFunction> {
        if self.n != set.n {
            return Err(Error::DimensionMismatch(self.n, set.n));
        }
        set.require_nonempty()?;
        Ok(self.fwht().restrict(set)?.inverse_fwht())
    }

    pub fn scale(&self, c: f64) -> BooleanFunction {
        BooleanFunction {
            n: self.n,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn sub(&self, other: &BooleanFunction) -> Result<BooleanFunction> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(BooleanFunction {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add(&self, other: &BooleanFunction) -> Result<BooleanFunction> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(BooleanFunction {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

pub(crate) fn norm_weighted(values: &[f64], p: Lp, w: f64) -> f64 {
    match p {
        Lp::Inf => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        Lp::Finite(p) if p == 1.0 => values.iter().map(|v| v.abs()).sum::<f64>() * w,
        Lp::Finite(p) if p == 2.0 => (values.iter().map(|v| v * v).sum::<f64>() * w).sqrt(),
        Lp::Finite(p) => {
            // Scale by the max to keep powers in range.
            let m = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = values.iter().map(|v| (v.abs() / m).powf(p)).sum();
            m * (s * w).powf(1.0 / p)
        }
    }
}

impl Spectrum {
    pub fn new(n: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_table(n, &coeffs)?;
        Ok(Spectrum { n, coeffs })
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::new(n, vec![0.0; 1usize << n])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// Synthesis transform; exact inverse of `BooleanFunction::fwht`.
    pub fn inverse_fwht(&self) -> BooleanFunction {
        let mut data = self.coeffs.clone();
        wht_in_place(&mut data);
        BooleanFunction {
            n: self.n,
            values: data,
        }
    }

    /// Zero out every coefficient whose level is outside `set`.
    pub fn restrict(&self, set: &SpectralSet) -> Result<Spectrum> {
        if self.n != set.n {
            return Err(Error::DimensionMismatch(self.n, set.n));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(b, &c)| if set.contains(b.count_ones()) { c } else { 0.0 })
            .collect();
        Ok(Spectrum { n: self.n, coeffs })
    }

    /// Largest level carrying a coefficient above `tol` in absolute value.
    pub fn degree(&self, tol: f64) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(b, _)| b.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Fourier coefficients with level <= d, flattened in mask order.
    pub fn low_levels(&self, d: u32) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(b, _)| b.count_ones() <= d)
            .map(|(_, &c)| c)
            .collect()
    }

    /// sum over |S| in `set` of f̂(S)^2.
    pub fn level_energy(&self, set: &SpectralSet) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(b, _)| set.contains(b.count_ones()))
            .map(|(_, c)| c * c)
            .sum()
    }

    /// l2 norm of the coefficient table (equals the function's L2 norm).
    pub fn l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// A set of spectral levels I ⊆ {0,..,n}, stored as a bitset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralSet {
    n: u32,
    bits: u64,
}

impl SpectralSet {
    pub fn from_levels(n: u32, levels: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &l in levels {
            if l > n {
                return Err(Error::LevelOutOfRange { level: l, n });
            }
            bits |= 1 << l;
        }
        Ok(SpectralSet { n, bits })
    }

    /// The tail levels {k+1,..,n}; the approximation space of the k-th tail distance.
    pub fn tail(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::LevelOutOfRange { level: k, n });
        }
        Self::from_levels(n, &(k + 1..=n).collect::<Vec<_>>())
    }

    /// The low levels {0,..,k}.
    pub fn low(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::LevelOutOfRange { level: k, n });
        }
        Self::from_levels(n, &(0..=k).collect::<Vec<_>>())
    }

    /// The single level {k}.
    pub fn level(n: u32, k: u32) -> Result<Self> {
        if k > n {
            return Err(Error::LevelOutOfRange { level: k, n });
        }
        Self::from_levels(n, &[k])
    }

    pub fn all(n: u32) -> Self {
        SpectralSet {
            n,
            bits: if n >= 63 { u64::MAX } else { (1u64 << (n + 1)) - 1 },
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, level: u32) -> bool {
        level <= self.n && self.bits >> level & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyLevels);
        }
        Ok(())
    }

    pub fn complement(&self) -> SpectralSet {
        SpectralSet {
            n: self.n,
            bits: !self.bits & ((1u64 << (self.n + 1)) - 1),
        }
    }

    pub fn levels(&self) -> Vec<u32> {
        (0..=self.n).filter(|&l| self.contains(l)).collect()
    }

    /// Number of subset masks whose level lies in the set.
    pub fn mask_count(&self) -> usize {
        self.levels()
            .iter()
            .map(|&l| binomial_usize(self.n, l))
            .sum()
    }
}

pub(crate) fn binomial_usize(n: u32, k: u32) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc as usize
}

/// On-disk JSON form shared by both dense representations:
/// `{"n": int, "repr": "values"|"coeffs", "data": [...]}` in mask order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionJson {
    pub n: u32,
    pub repr: String,
    pub data: Vec<f64>,
}

/// A loaded dense table in either representation.
#[derive(Debug, Clone)]
pub enum FunctionData {
    Values(BooleanFunction),
    Coeffs(Spectrum),
}

impl FunctionData {
    pub fn from_json_str(s: &str, cap: Capacity) -> Result<Self> {
        let j: FunctionJson = serde_json::from_str(s)?;
        cap.check(j.n)?;
        match j.repr.as_str() {
            "values" => Ok(FunctionData::Values(BooleanFunction::new(j.n, j.data)?)),
            "coeffs" => Ok(FunctionData::Coeffs(Spectrum::new(j.n, j.data)?)),
            other => Err(Error::Invalid(format!("unknown repr {other:?}"))),
        }
    }

    pub fn to_json(&self) -> FunctionJson {
        match self {
            FunctionData::Values(f) => FunctionJson {
                n: f.n(),
                repr: "values".into(),
                data: f.values().to_vec(),
            },
            FunctionData::Coeffs(s) => FunctionJson {
                n: s.n(),
                repr: "coeffs".into(),
                data: s.coeffs().to_vec(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force O(4^n) transform used as the independent oracle.
    fn naive_fwht(f: &BooleanFunction) -> Vec<f64> {
        let len = f.len();
        (0..len)
            .map(|s| {
                let mut acc = 0.0;
                for b in 0..len {
                    let sign = if (s & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * f.values()[b];
                }
                acc / len as f64
            })
            .collect()
    }

    fn random_function(n: u32, seed: u64) -> BooleanFunction {
        // Tiny xorshift so the unit tests do not depend on rand.
        let mut state = seed.wrapping_mul(2685821657736338717).max(1);
        let values = (0..1usize << n)
            .map(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state as f64 / u64::MAX as f64) * 2.0 - 1.0
            })
            .collect();
        BooleanFunction::new(n, values).unwrap()
    }

    #[test]
    fn character_transforms_to_unit_mask() {
        // f = w_{{1}} at n = 2 (coordinate 1 is bit 0).
        let f = BooleanFunction::character(2, 0b01).unwrap();
        let s = f.fwht();
        assert_eq!(s.coeffs(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_transforms_to_empty_mask() {
        let f = BooleanFunction::constant(3, 1.0).unwrap();
        let s = f.fwht();
        assert_eq!(s.coeff(0), 1.0);
        assert!(s.coeffs()[1..].iter().all(|&c| c == 0.0));
    }

    #[test]
    fn all_characters_transform_to_unit_masks() {
        for n in 1..=8u32 {
            for mask in 0..1usize << n {
                let s = BooleanFunction::character(n, mask).unwrap().fwht();
                for (b, &c) in s.coeffs().iter().enumerate() {
                    let expect = if b == mask { 1.0 } else { 0.0 };
                    assert!((c - expect).abs() <= 1e-12, "n={n} mask={mask} b={b}");
                }
            }
        }
    }

    #[test]
    fn fwht_matches_naive_oracle() {
        let f = random_function(6, 42);
        let fast = f.fwht();
        let slow = naive_fwht(&f);
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn roundtrip_identity() {
        let f = random_function(6, 7);
        let back = f.fwht().inverse_fwht();
        let scale = f.norm(Lp::Inf).max(1.0);
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn unit_coeff_synthesizes_product_character() {
        // coeffs = e_{{1,2}} at n = 2 -> values (1,-1,-1,1) in mask order 00,01,10,11.
        let mut s = Spectrum::zero(2).unwrap();
        s.coeffs_mut()[0b11] = 1.0;
        let f = s.inverse_fwht();
        assert_eq!(f.values(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn parseval_holds() {
        let f = random_function(8, 3);
        let s = f.fwht();
        let spec: f64 = s.coeffs().iter().map(|c| c * c).sum();
        let spatial = f.norm(Lp::Finite(2.0)).powi(2);
        assert!((spec - spatial).abs() <= 1e-12 * spatial.max(1.0));
    }

    #[test]
    fn projection_level_selection() {
        // project(w_{{1}} + w_{{1,2}}, I={1}) = w_{{1}}
        let a = BooleanFunction::character(2, 0b01).unwrap();
        let b = BooleanFunction::character(2, 0b11).unwrap();
        let f = a.add(&b).unwrap();
        let p = f.project(&SpectralSet::level(2, 1).unwrap()).unwrap();
        for (x, y) in p.values().iter().zip(a.values()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_identity_and_idempotence() {
        let f = random_function(6, 11);
        let every = SpectralSet::all(6);
        let p = f.project(&every).unwrap();
        for (x, y) in p.values().iter().zip(f.values()) {
            assert!((x - y).abs() <= 1e-12);
        }
        let set = SpectralSet::from_levels(6, &[2, 3]).unwrap();
        let once = f.project(&set).unwrap();
        let twice = once.project(&set).unwrap();
        for (x, y) in once.values().iter().zip(twice.values()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_energy_matches_brute_force_spectrum() {
        let f = random_function(6, 19);
        let set = SpectralSet::level(6, 2).unwrap();
        let p = f.project(&set).unwrap();
        let slow = naive_fwht(&f);
        let expect: f64 = slow
            .iter()
            .enumerate()
            .filter(|(b, _)| b.count_ones() == 2)
            .map(|(_, c)| c * c)
            .sum();
        let got = p.norm(Lp::Finite(2.0)).powi(2);
        assert!((got - expect).abs() <= 1e-12);
    }

    #[test]
    fn projection_self_adjoint() {
        let f = random_function(5, 23);
        let h = random_function(5, 29);
        let set = SpectralSet::from_levels(5, &[1, 4]).unwrap();
        let lhs = f.project(&set).unwrap().inner(&h).unwrap();
        let rhs = f.inner(&h.project(&set).unwrap()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn low_degree_orthogonal_to_tail() {
        let f = random_function(6, 31).project(&SpectralSet::low(6, 2).unwrap()).unwrap();
        let g = random_function(6, 37).project(&SpectralSet::tail(6, 2).unwrap()).unwrap();
        assert!(f.inner(&g).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn norm_examples() {
        let c = BooleanFunction::constant(4, -2.5).unwrap();
        for p in [Lp::Finite(1.0), Lp::Finite(2.0), Lp::Finite(3.5), Lp::Inf] {
            assert!((c.norm(p) - 2.5).abs() <= 1e-12);
        }
        // f = x_1 + x_2 at n = 2: values (2, 0, 0, -2), L1 norm 1.
        let f = BooleanFunction::rademacher_sum(&[1.0, 1.0]).unwrap();
        assert_eq!(f.values(), &[2.0, 0.0, 0.0, -2.0]);
        assert!((f.norm(Lp::Finite(1.0)) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn norm_monotone_in_p() {
        let f = random_function(6, 41);
        let n1 = f.norm(Lp::Finite(1.0));
        let n2 = f.norm(Lp::Finite(2.0));
        let ni = f.norm(Lp::Inf);
        assert!(n1 <= n2 + 1e-12 && n2 <= ni + 1e-12);
    }

    #[test]
    fn inner_orthogonality_and_parseval() {
        let s = BooleanFunction::character(5, 0b00101).unwrap();
        let t = BooleanFunction::character(5, 0b00111).unwrap();
        assert!(s.inner(&t).unwrap().abs() <= 1e-12);
        let f = random_function(6, 43);
        let h = random_function(6, 47);
        let spatial = f.inner(&h).unwrap();
        let spectral: f64 = f
            .fwht()
            .coeffs()
            .iter()
            .zip(h.fwht().coeffs())
            .map(|(a, b)| a * b)
            .sum();
        assert!((spatial - spectral).abs() <= 1e-12);
        assert!((f.inner(&f).unwrap() - f.norm(Lp::Finite(2.0)).powi(2)).abs() <= 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let f = random_function(3, 1);
        let h = random_function(4, 1);
        assert!(matches!(f.inner(&h), Err(Error::DimensionMismatch(3, 4))));
    }

    #[test]
    fn capacity_and_validation_errors() {
        assert!(Capacity::default().check(14).is_ok());
        assert!(matches!(
            Capacity::default().check(15),
            Err(Error::Capacity { .. })
        ));
        assert!(BooleanFunction::new(3, vec![0.0; 7]).is_err());
        assert!(BooleanFunction::new(2, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
        assert!(Lp::new(0.5).is_err());
        assert!(Lp::new(f64::NAN).is_err());
    }

    #[test]
    fn spectral_set_basics() {
        let t = SpectralSet::tail(6, 2).unwrap();
        assert_eq!(t.levels(), vec![3, 4, 5, 6]);
        assert_eq!(t.complement().levels(), vec![0, 1, 2]);
        assert_eq!(SpectralSet::tail(6, 6).unwrap().levels(), Vec::<u32>::new());
        assert!(SpectralSet::tail(6, 6).unwrap().require_nonempty().is_err());
        assert_eq!(SpectralSet::low(4, 1).unwrap().mask_count(), 5);
    }

    #[test]
    fn json_roundtrip() {
        let f = random_function(4, 53);
        let j = serde_json::to_string(&FunctionData::Values(f.clone()).to_json()).unwrap();
        match FunctionData::from_json_str(&j, Capacity::default()).unwrap() {
            FunctionData::Values(g) => assert_eq!(f, g),
            _ => panic!("wrong repr"),
        }
        assert!(FunctionData::from_json_str("{bad", Capacity::default()).is_err());
        let big = FunctionJson {
            n: 20,
            repr: "values".into(),
            data: vec![],
        };
        let s = serde_json::to_string(&big).unwrap();
        assert!(matches!(
            FunctionData::from_json_str(&s, Capacity::default()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn lp_parse_and_conjugate() {
        assert_eq!(Lp::parse("inf").unwrap(), Lp::Inf);
        assert_eq!(Lp::parse("2").unwrap(), Lp::Finite(2.0));
        assert_eq!(Lp::Finite(1.0).conjugate(), Lp::Inf);
        assert_eq!(Lp::Inf.conjugate(), Lp::Finite(1.0));
        let q = Lp::Finite(4.0).conjugate();
        match q {
            Lp::Finite(v) => assert!((v - 4.0 / 3.0).abs() <= 1e-15),
            _ => panic!(),
        }
    }
}
