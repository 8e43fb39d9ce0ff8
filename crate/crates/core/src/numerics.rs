//! Complex helpers and rotation-number construction.
//!
//! Rotation numbers are built from finite continued fractions
//! `1/(a1 + 1/(a2 + ... + 1/am))`. Convergents are computed with checked
//! 128-bit integer arithmetic; an overflow is reported as an error rather
//! than rounded away.

use std::f64::consts::TAU;
use std::fmt;

use thiserror::Error;

/// A point of the plane. All iteration runs on this type.
pub type Complex = num_complex::Complex64;

/// Partial quotients of the default hedgehog rotation number.
pub const DEFAULT_THETA_TERMS: [u64; 3] = [3, 10, 20000];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("continued fraction needs at least one term")]
    EmptyExpansion,
    #[error("continued fraction term {index} is zero; terms must be >= 1")]
    ZeroTerm { index: usize },
    #[error("integer overflow while computing convergent {index}")]
    Overflow { index: usize },
    #[error("denominator must be positive, got {0}")]
    NonPositiveDenominator(i128),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

/// Modulus `|z|`.
#[inline]
pub fn modulus(z: Complex) -> f64 {
    z.norm()
}

/// Argument of `z` wrapped into `[0, 2π)`. `angle(0)` is 0.
#[inline]
pub fn angle(z: Complex) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    if a >= 0.0 {
        return a;
    }
    let wrapped = a + TAU;
    // tiny negative angles round up to exactly 2π
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

#[inline]
pub fn from_polar(modulus: f64, angle: f64) -> Complex {
    Complex::new(modulus * angle.cos(), modulus * angle.sin())
}

#[inline]
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `e^{2πiθ}`, the multiplier of a germ with rotation number θ.
pub fn multiplier(theta: f64) -> Complex {
    from_polar(1.0, TAU * theta)
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction `p/q` with `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalApproximant {
    p: i128,
    q: i128,
}

impl RationalApproximant {
    pub fn new(p: i128, q: i128) -> Result<Self, NumericsError> {
        if q <= 0 {
            return Err(NumericsError::NonPositiveDenominator(q));
        }
        let g = gcd(p, q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn numerator(&self) -> i128 {
        self.p
    }

    pub fn denominator(&self) -> i128 {
        self.q
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for RationalApproximant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A finite continued fraction `1/(a1 + 1/(a2 + ... + 1/am))`, every `ai >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    terms: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(terms: Vec<u64>) -> Result<Self, NumericsError> {
        if terms.is_empty() {
            return Err(NumericsError::EmptyExpansion);
        }
        if let Some(index) = terms.iter().position(|&a| a == 0) {
            return Err(NumericsError::ZeroTerm { index });
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// Exact value as a reduced rational (the last convergent).
    pub fn rational(&self) -> Result<RationalApproximant, NumericsError> {
        let all = self.convergents()?;
        Ok(*all.last().expect("non-empty expansion has a convergent"))
    }

    /// Value in `(0, 1]`, converted to floating point only after the
    /// exact rational is known.
    pub fn value(&self) -> Result<f64, NumericsError> {
        self.rational().map(|r| r.to_f64())
    }

    /// Convergents `p_i/q_i`, one per term, via
    /// `p_i = a_i p_{i-1} + p_{i-2}` and the same for `q`.
    pub fn convergents(&self) -> Result<Vec<RationalApproximant>, NumericsError> {
        // leading zero term: [0; a1, a2, ...]
        let (mut p_prev2, mut p_prev) = (1i128, 0i128);
        let (mut q_prev2, mut q_prev) = (0i128, 1i128);
        let mut out = Vec::with_capacity(self.terms.len());
        for (index, &a) in self.terms.iter().enumerate() {
            let a = i128::from(a);
            let step = |prev: i128, prev2: i128| {
                a.checked_mul(prev)
                    .and_then(|v| v.checked_add(prev2))
                    .ok_or(NumericsError::Overflow { index })
            };
            let p = step(p_prev, p_prev2)?;
            let q = step(q_prev, q_prev2)?;
            // consecutive convergents are already in lowest terms
            out.push(RationalApproximant { p, q });
            p_prev2 = p_prev;
            p_prev = p;
            q_prev2 = q_prev;
            q_prev = q;
        }
        Ok(out)
    }

    /// The expansion cut after its first `len` terms.
    pub fn truncated(&self, len: usize) -> Result<Self, NumericsError> {
        Self::new(self.terms[..len.min(self.terms.len())].to_vec())
    }
}

impl Default for ContinuedFraction {
    fn default() -> Self {
        Self {
            terms: DEFAULT_THETA_TERMS.to_vec(),
        }
    }
}

pub fn cf_value(cf: &ContinuedFraction) -> Result<f64, NumericsError> {
    cf.value()
}

pub fn convergents(cf: &ContinuedFraction) -> Result<Vec<RationalApproximant>, NumericsError> {
    cf.convergents()
}

/// Outcome of testing one approximant against `|θ - p/q| > r/q^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiophantineWitness {
    pub approximant: RationalApproximant,
    pub distance: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Finite-depth witness check of the Diophantine inequality for each
/// given approximant. This says nothing about θ beyond the listed
/// rationals.
pub fn diophantine_check(
    theta: f64,
    r: f64,
    k: f64,
    approximants: &[RationalApproximant],
) -> Result<Vec<DiophantineWitness>, NumericsError> {
    if !r.is_finite() || r <= 0.0 {
        return Err(NumericsError::InvalidParameter {
            name: "r",
            reason: format!("must be a positive finite number, got {r}"),
        });
    }
    if !k.is_finite() || k < 2.0 {
        return Err(NumericsError::InvalidParameter {
            name: "k",
            reason: format!("must be finite and >= 2, got {k}"),
        });
    }
    Ok(approximants
        .iter()
        .map(|&approximant| {
            let distance = (theta - approximant.to_f64()).abs();
            let bound = r / (approximant.q as f64).powf(k);
            DiophantineWitness {
                approximant,
                distance,
                bound,
                holds: distance > bound,
            }
        })
        .collect())
}
