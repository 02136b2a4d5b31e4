//! The scalar field abstraction.
//!
//! All geometry in this crate is generic over [`Scalar`]. Two fields are
//! provided: arbitrary-precision rationals ([`Rat`]), where every zero test is
//! exact, and `f64`, where a zero test means "below the configured absolute
//! tolerance on canonically scaled data". The float field exists only for
//! numerically generated division points; every lemma-verification suite runs
//! on rationals.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar: arbitrary-precision numerator and denominator,
/// always stored in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

static FLOAT_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E112E0BE826D695); // 1e-9

/// Absolute tolerance used by all `f64` zero tests. Default `1e-9`.
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Set the process-wide float tolerance. Call once at startup, before any
/// float-mode computation; recorded in every run manifest.
pub fn set_float_tolerance(tol: f64) {
    assert!(tol > 0.0 && tol.is_finite());
    FLOAT_TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether equality decisions in this field are exact.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Zero test: exact for rationals, `|x| <= tolerance` for floats.
    fn is_negligible(&self) -> bool;

    /// Compare absolute values (pivot selection).
    fn abs_cmp(&self, other: &Self) -> Ordering;

    /// Scale a vector to its canonical projective representative in place.
    /// Returns `false` if the vector is (negligibly) zero.
    ///
    /// Rationals: clear denominators, divide by the integer gcd, make the
    /// first nonzero coordinate positive. Floats: divide by the first
    /// largest-magnitude entry, which becomes exactly `1.0`.
    fn canonicalize(v: &mut [Self]) -> bool;

    /// Scale a matrix row so that exact mode stays fraction-free and float
    /// mode has unit max-norm. Rank/nullspace preserving.
    fn normalize_row(row: &mut [Self]);

    fn parse_repr(s: &str) -> Result<Self>;

    /// Serialized form; must round-trip through [`Scalar::parse_repr`].
    fn repr(&self) -> String;

    fn to_f64(&self) -> f64;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }

    fn canonicalize(v: &mut [Self]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return false;
        }
        let mut den = BigInt::one();
        for x in v.iter() {
            den = den.lcm(x.denom());
        }
        let den = Rat::from_integer(den);
        for x in v.iter_mut() {
            *x = x.clone() * den.clone();
        }
        let mut g = BigInt::zero();
        for x in v.iter() {
            g = g.gcd(x.numer());
        }
        let g = Rat::from_integer(g);
        for x in v.iter_mut() {
            *x = x.clone() / g.clone();
        }
        if v.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()) == Some(true) {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        true
    }

    fn normalize_row(row: &mut [Self]) {
        let mut den = BigInt::one();
        for x in row.iter() {
            den = den.lcm(x.denom());
        }
        if !den.is_one() {
            let den = Rat::from_integer(den);
            for x in row.iter_mut() {
                *x = x.clone() * den.clone();
            }
        }
    }

    fn parse_repr(s: &str) -> Result<Self> {
        Rat::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
    }

    fn repr(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= float_tolerance()
    }

    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().partial_cmp(&other.abs()).unwrap_or(Ordering::Equal)
    }

    fn canonicalize(v: &mut [Self]) -> bool {
        let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm == 0.0 {
            return false;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        // sign by the first entry within a relative window of the maximum;
        // the window absorbs cluster-level noise when two entries tie for
        // largest magnitude with opposite signs
        let lead = v
            .iter()
            .position(|x| x.abs() >= 1.0 - 1e-6)
            .expect("scaled vector attains its maximum");
        if v[lead] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        true
    }

    fn normalize_row(row: &mut [Self]) {
        let m = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m > 0.0 {
            for x in row.iter_mut() {
                *x /= m;
            }
        }
    }

    fn parse_repr(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| Error::Parse(format!("bad float {s:?}")))?;
            let d: f64 = d.trim().parse().map_err(|_| Error::Parse(format!("bad float {s:?}")))?;
            return Ok(n / d);
        }
        s.parse().map_err(|_| Error::Parse(format!("bad float {s:?}")))
    }

    fn repr(&self) -> String {
        // shortest round-trip form
        format!("{self}")
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Exact dot product of two equal-length slices.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// 3-vector cross product.
pub fn cross3<S: Scalar>(a: &[S], b: &[S]) -> [S; 3] {
    debug_assert!(a.len() == 3 && b.len() == 3);
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Lexicographic comparison of coordinate vectors.
pub fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Component-wise equality up to the field's zero test.
pub fn vec_eq<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x.clone() - y.clone()).is_negligible())
}

/// Group canonical vectors into equality classes. Exact mode groups identical
/// vectors; float mode clusters within the tolerance, scanning in sorted
/// order with a window on the leading coordinate. Deterministic: classes are
/// ordered by their lexicographically smallest member, which is also the
/// representative (index 0 of each class).
pub fn cluster_canonical<S: Scalar>(vecs: &[Vec<S>]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..vecs.len()).collect();
    order.sort_by(|&i, &j| lex_cmp(&vecs[i], &vecs[j]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut window: Vec<usize> = Vec::new();
    for &i in &order {
        let v = &vecs[i];
        window.retain(|&g| {
            let rep = &vecs[groups[g][0]];
            (v[0].clone() - rep[0].clone()).is_negligible()
        });
        let hit = window
            .iter()
            .copied()
            .find(|&g| vec_eq(&vecs[groups[g][0]], v));
        match hit {
            Some(g) => groups[g].push(i),
            None => {
                groups.push(vec![i]);
                window.push(groups.len() - 1);
            }
        }
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_is_1e9() {
        assert_eq!(float_tolerance(), 1e-9);
    }

    #[test]
    fn rational_repr_round_trips() {
        let x = Rat::from_ratio(-22, 8);
        let s = x.repr();
        assert_eq!(s, "-11/4");
        assert_eq!(Rat::parse_repr(&s).unwrap(), x);
    }

    #[test]
    fn rational_canonical_form() {
        let mut v: Vec<Rat> = [(2, 1), (4, 1), (6, 1)]
            .iter()
            .map(|&(n, d)| Rat::from_ratio(n, d))
            .collect();
        assert!(Rat::canonicalize(&mut v));
        let want: Vec<Rat> = [1, 2, 3].iter().map(|&n| Rat::from_i64(n)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn float_canonical_scales_largest_entry() {
        let mut v = vec![0.5, -2.0, 1.0];
        assert!(f64::canonicalize(&mut v));
        assert_eq!(v, vec![-0.25, 1.0, -0.5]);
    }
}
