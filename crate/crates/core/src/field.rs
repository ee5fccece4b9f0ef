//! Exact scalar fields.
//!
//! Every computation in the crate is generic over [`Field`]. Two families are
//! provided: the prime fields [`Fp`] (with [`F2`] as the default working
//! field) and the rationals [`Rational`] backed by arbitrary-precision
//! integers.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::linalg::{self, Matrix};

pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Short identifier used on the command line and in reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn parse_scalar(s: &str) -> Result<Self, Error>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Rank of a matrix over this field.
    fn rank(m: &Matrix<Self>) -> usize {
        linalg::gauss_rank(m)
    }
}

/// The prime field of order `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u32>(u32);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp((self.0 + o.0) % P)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp((self.0 + P - o.0) % P)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> Field for Fp<P> {
    const NAME: &'static str = match P {
        2 => "f2",
        3 => "f3",
        _ => "fp",
    };

    fn zero() -> Self {
        Fp(0)
    }

    fn one() -> Self {
        Fp(1 % P)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let (mut base, mut exp, mut acc) = (self.0 as u64, P as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Some(Fp(acc as u32))
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn parse_scalar(s: &str) -> Result<Self, Error> {
        let v: i64 = s.trim().parse().map_err(|_| Error::Parse(format!("not an element of F{P}: {s:?}")))?;
        Ok(Fp::new(v))
    }
}

/// Rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Rational(self.0 + o.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Rational(self.0 - o.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Rational(self.0 * o.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Field for Rational {
    const NAME: &'static str = "q";

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn from_i64(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn parse_scalar(s: &str) -> Result<Self, Error> {
        BigRational::from_str(s.trim()).map(Rational).map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    }

    fn rank(m: &Matrix<Self>) -> usize {
        fraction_free_rank(m)
    }
}

/// Bareiss elimination on the integer matrix obtained by clearing the
/// denominators of each row. All intermediate divisions are exact.
fn fraction_free_rank(m: &Matrix<Rational>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let lcm = (0..cols).fold(BigInt::one(), |acc, c| acc.lcm(m.get(r, c).0.denom()));
            (0..cols)
                .map(|c| {
                    let q = &m.get(r, c).0;
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect();

    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let a = F3::new(2);
        assert_eq!(a * a, F3::one());
        assert_eq!(a.inv(), Some(a));
        assert_eq!(-F2::one(), F2::one());
        assert_eq!(F2::zero().inv(), None);
        assert_eq!(Fp::<7>::new(3).inv(), Some(Fp::<7>::new(5)));
    }

    #[test]
    fn rational_display_roundtrip() {
        let q = Rational::parse_scalar("-6/4").unwrap();
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rational::parse_scalar(&q.to_string()).unwrap(), q);
        assert_eq!(Rational::from_i64(5).to_string(), "5");
        assert!(Rational::parse_scalar("x").is_err());
    }

    #[test]
    fn fraction_free_rank_matches_gauss() {
        let rows = [[1i64, 2, 3], [2, 4, 6], [1, 0, -1], [0, 2, 4]];
        let m = Matrix::from_fn(4, 3, |r, c| Rational::from_i64(rows[r][c]));
        assert_eq!(Rational::rank(&m), 2);
        assert_eq!(linalg::gauss_rank(&m), 2);

        let half = Rational::parse_scalar("1/2").unwrap();
        let m = Matrix::from_fn(2, 2, |r, c| if r == c { half.clone() } else { Rational::from_i64(3) });
        assert_eq!(Rational::rank(&m), 2);
    }
}
