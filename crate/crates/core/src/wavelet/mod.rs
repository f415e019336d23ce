//! Orthogonal discrete wavelet transform on dyadic signals.
//!
//! The forward transform is the Mallat pyramid with periodic boundary
//! handling, so it is multiplication by an orthogonal `n x n` matrix `W`:
//! the inverse is the transpose, energy is preserved and white Gaussian noise
//! stays white in the coefficient domain.
//!
//! Coefficients are indexed by resolution level. With `n = 2^J` samples and a
//! primary level `j0`, a decomposition holds `2^j0` scaling coefficients and
//! detail levels `j = j0..J-1`, where level `j` has `2^j` coefficients.

mod filters;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ShrinkError};

/// A real-valued signal whose length is a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(ShrinkError::TooShort);
        }
        if !n.is_power_of_two() {
            return Err(ShrinkError::NotDyadic(n));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ShrinkError::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of resolution levels `J = log2(n)`.
    pub fn levels(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// A Daubechies orthonormal wavelet basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletBasis {
    order: usize,
    lowpass: &'static [f64],
}

impl WaveletBasis {
    /// Daubechies basis with `vanishing_moments` null moments (1 through 10).
    /// `daubechies(1)` is the Haar basis.
    pub fn daubechies(vanishing_moments: usize) -> Result<Self> {
        filters::daubechies(vanishing_moments)
            .map(|lowpass| Self {
                order: vanishing_moments,
                lowpass,
            })
            .ok_or_else(|| ShrinkError::UnknownBasis(format!("db{vanishing_moments}")))
    }

    pub fn family(&self) -> &'static str {
        "daubechies"
    }

    pub fn vanishing_moments(&self) -> usize {
        self.order
    }

    /// Low-pass (scaling) filter.
    pub fn filter(&self) -> &'static [f64] {
        self.lowpass
    }

    /// High-pass filter, `g[k] = (-1)^k h[L-1-k]`.
    pub fn highpass(&self) -> Vec<f64> {
        let len = self.lowpass.len();
        (0..len)
            .map(|k| {
                let v = self.lowpass[len - 1 - k];
                if k % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

impl Default for WaveletBasis {
    fn default() -> Self {
        Self::daubechies(10).expect("db10 is embedded")
    }
}

impl fmt::Display for WaveletBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "db{}", self.order)
    }
}

impl FromStr for WaveletBasis {
    type Err = ShrinkError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let order = lower
            .strip_prefix("db")
            .and_then(|rest| rest.parse::<usize>().ok())
            .ok_or_else(|| ShrinkError::UnknownBasis(s.to_string()))?;
        Self::daubechies(order).map_err(|_| ShrinkError::UnknownBasis(s.to_string()))
    }
}

impl Serialize for WaveletBasis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WaveletBasis {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Scaling coefficients at the primary level plus detail coefficients for
/// every finer level.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    coarse: Vec<f64>,
    details: Vec<Vec<f64>>,
    j0: usize,
    basis: WaveletBasis,
}

impl WaveletDecomposition {
    /// Assembles a decomposition, checking that level `j` holds `2^j` values.
    pub fn new(coarse: Vec<f64>, details: Vec<Vec<f64>>, j0: usize, basis: WaveletBasis) -> Result<Self> {
        let decomp = Self {
            coarse,
            details,
            j0,
            basis,
        };
        decomp.validate()?;
        Ok(decomp)
    }

    fn validate(&self) -> Result<()> {
        let expected = 1usize << self.j0;
        if self.coarse.len() != expected {
            return Err(ShrinkError::LevelSizeMismatch {
                level: self.j0,
                expected,
                found: self.coarse.len(),
            });
        }
        if self.details.is_empty() {
            return Err(ShrinkError::InvalidLevel {
                j0: self.j0,
                levels: self.j0,
            });
        }
        for (offset, level) in self.details.iter().enumerate() {
            let j = self.j0 + offset;
            let expected = 1usize << j;
            if level.len() != expected {
                return Err(ShrinkError::LevelSizeMismatch {
                    level: j,
                    expected,
                    found: level.len(),
                });
            }
        }
        Ok(())
    }

    /// Zero decomposition with the layout of an `n = 2^levels` signal.
    pub fn zeros(levels: usize, j0: usize, basis: WaveletBasis) -> Result<Self> {
        if j0 >= levels {
            return Err(ShrinkError::InvalidLevel { j0, levels });
        }
        let details = (j0..levels).map(|j| vec![0.0; 1 << j]).collect();
        Self::new(vec![0.0; 1 << j0], details, j0, basis)
    }

    pub fn j0(&self) -> usize {
        self.j0
    }

    /// Number of resolution levels `J` of the underlying signal.
    pub fn levels(&self) -> usize {
        self.j0 + self.details.len()
    }

    pub fn basis(&self) -> WaveletBasis {
        self.basis
    }

    /// Total number of coefficients; equals the signal length.
    pub fn len(&self) -> usize {
        1 << self.levels()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coarse(&self) -> &[f64] {
        &self.coarse
    }

    pub fn coarse_mut(&mut self) -> &mut [f64] {
        &mut self.coarse
    }

    /// Detail coefficients at absolute level `j`, if present.
    pub fn detail(&self, j: usize) -> Option<&[f64]> {
        j.checked_sub(self.j0)
            .and_then(|i| self.details.get(i))
            .map(Vec::as_slice)
    }

    pub fn detail_mut(&mut self, j: usize) -> Option<&mut [f64]> {
        j.checked_sub(self.j0)
            .and_then(|i| self.details.get_mut(i))
            .map(Vec::as_mut_slice)
    }

    /// `(level, coefficients)` pairs from coarsest to finest.
    pub fn details(&self) -> impl Iterator<Item = (usize, &[f64])> {
        let j0 = self.j0;
        self.details
            .iter()
            .enumerate()
            .map(move |(i, d)| (j0 + i, d.as_slice()))
    }

    pub fn details_mut(&mut self) -> impl Iterator<Item = (usize, &mut Vec<f64>)> {
        let j0 = self.j0;
        self.details.iter_mut().enumerate().map(move |(i, d)| (j0 + i, d))
    }

    /// Finest-level detail coefficients (level `J-1`).
    pub fn finest(&self) -> &[f64] {
        self.details.last().expect("validated non-empty")
    }

    /// Flattened coefficient vector: coarse first, then levels coarse to fine.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&self.coarse);
        for d in &self.details {
            out.extend_from_slice(d);
        }
        out
    }

    /// Inverse of [`WaveletDecomposition::to_vec`].
    pub fn from_flat(flat: &[f64], j0: usize, basis: WaveletBasis) -> Result<Self> {
        let n = flat.len();
        if !n.is_power_of_two() || n < 2 {
            return Err(ShrinkError::NotDyadic(n));
        }
        let levels = n.trailing_zeros() as usize;
        if j0 >= levels {
            return Err(ShrinkError::InvalidLevel { j0, levels });
        }
        let coarse = flat[..1 << j0].to_vec();
        let details = (j0..levels).map(|j| flat[1 << j..1 << (j + 1)].to_vec()).collect();
        Self::new(coarse, details, j0, basis)
    }

    pub fn energy(&self) -> f64 {
        self.coarse
            .iter()
            .chain(self.details.iter().flatten())
            .map(|v| v * v)
            .sum()
    }
}

/// One analysis step: `x` of even length `n` into `n/2` smooth and `n/2`
/// detail coefficients, filters wrapped periodically.
fn analysis_step(x: &[f64], lowpass: &[f64], highpass: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let half = n / 2;
    let mut smooth = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut s = 0.0;
        let mut d = 0.0;
        for (i, (&h, &g)) in lowpass.iter().zip(highpass).enumerate() {
            let v = x[(2 * k + i) % n];
            s += h * v;
            d += g * v;
        }
        smooth[k] = s;
        detail[k] = d;
    }
    (smooth, detail)
}

fn synthesis_step(smooth: &[f64], detail: &[f64], lowpass: &[f64], highpass: &[f64]) -> Vec<f64> {
    let half = smooth.len();
    let n = 2 * half;
    let mut x = vec![0.0; n];
    for k in 0..half {
        let (s, d) = (smooth[k], detail[k]);
        for (i, (&h, &g)) in lowpass.iter().zip(highpass).enumerate() {
            x[(2 * k + i) % n] += h * s + g * d;
        }
    }
    x
}

/// Forward transform down to primary level `j0`.
pub fn dwt(signal: &Signal, basis: &WaveletBasis, j0: usize) -> Result<WaveletDecomposition> {
    let levels = signal.levels();
    if j0 >= levels {
        return Err(ShrinkError::InvalidLevel { j0, levels });
    }
    let lowpass = basis.filter();
    let highpass = basis.highpass();
    let mut current = signal.as_slice().to_vec();
    let mut details = Vec::with_capacity(levels - j0);
    for _ in j0..levels {
        let (smooth, detail) = analysis_step(&current, lowpass, &highpass);
        details.push(detail);
        current = smooth;
    }
    details.reverse();
    WaveletDecomposition::new(current, details, j0, *basis)
}

/// Inverse transform (`W'`) using the decomposition's own basis.
pub fn idwt(decomp: &WaveletDecomposition) -> Result<Signal> {
    decomp.validate()?;
    let lowpass = decomp.basis.filter();
    let highpass = decomp.basis.highpass();
    let mut current = decomp.coarse.clone();
    for detail in &decomp.details {
        current = synthesis_step(&current, detail, lowpass, &highpass);
    }
    Signal::new(current)
}
