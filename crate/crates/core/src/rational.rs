use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rotation number `p/q` in lowest terms with `0 <= p < q`.
///
/// `0/1` is the only value with `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IrreducibleRational {
    p: i64,
    q: i64,
}

impl IrreducibleRational {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 || p < 0 || p >= q {
            return Err(Error::InvalidInput(format!("{p}/{q} is not in [0, 1)")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(Self { p, q })
    }

    /// Reduces `p/q` to lowest terms. The flag is true when a common factor
    /// was removed.
    pub fn reduced(p: i64, q: i64) -> Result<(Self, bool)> {
        if q < 1 || p < 0 || p >= q {
            return Err(Error::InvalidInput(format!("{p}/{q} is not in [0, 1)")));
        }
        let g = p.gcd(&q);
        Ok((Self { p: p / g, q: q / g }, g != 1))
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Period as an iteration count.
    pub fn period(&self) -> usize {
        self.q as usize
    }

    pub fn angle(&self) -> f64 {
        std::f64::consts::TAU * self.p as f64 / self.q as f64
    }

    /// The root `e^{2 pi i p/q}` of the satellite on the unit circle.
    pub fn root(&self) -> Complex64 {
        let (s, c) = self.angle().sin_cos();
        Complex64::new(c, s)
    }
}

impl fmt::Display for IrreducibleRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for IrreducibleRational {
    type Err = Error;

    /// Parses `p/q`, reducing it if needed.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::InvalidInput(format!("expected p/q, got {s:?}")))?;
        let p: i64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad numerator in {s:?}")))?;
        let q: i64 = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad denominator in {s:?}")))?;
        Self::reduced(p, q).map(|(r, _)| r)
    }
}
