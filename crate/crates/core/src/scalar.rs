//! Exact coefficients: arbitrary-precision rationals or elements of a prime field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The base field shared by every polynomial of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// `F_p` for a prime `p < 2^31`.
    Prime(u32),
}

impl Field {
    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Prime {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Maps a rational number into this field. Fails in `F_p` when `p` divides the denominator.
    pub fn from_rational(self, q: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rational => Some(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pm = BigInt::from(p);
                let num = q.numer().mod_floor(&pm).to_u64()? as u32;
                let den = q.denom().mod_floor(&pm).to_u64()? as u32;
                if den == 0 {
                    return None;
                }
                let num = Scalar::Prime { value: num, modulus: p };
                let den = Scalar::Prime { value: den, modulus: p };
                Some(&num * &den.inverse())
            }
        }
    }

    pub fn is_prime_field(self) -> bool {
        matches!(self, Field::Prime(_))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp {p}"),
        }
    }
}

/// Checks primality of a candidate modulus by trial division.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    /// Always in lowest terms with positive denominator (maintained by `BigRational`).
    Rational(BigRational),
    Prime { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Prime { .. } => false,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inverse(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                Scalar::Rational(q.recip())
            }
            Scalar::Prime { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Prime {
                    value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                    modulus: *modulus,
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self * &other.inverse()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    /// Canonical `num/den` (or `num`) string; prime-field elements print their representative.
    pub fn to_canonical_string(&self) -> String {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, .. } => value.to_string(),
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn same_prime(a: u32, b: u32) -> u32 {
    assert_eq!(a, b, "mixed prime moduli");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Prime {
                    value: ((*a as u64 + *b as u64) % p as u64) as u32,
                    modulus: p,
                }
            }
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Prime {
                    value: ((*a as u64 * *b as u64) % p as u64) as u32,
                    modulus: p,
                }
            }
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = q.from_rational(&BigRational::new(6.into(), (-4).into())).unwrap();
        assert_eq!(a.to_canonical_string(), "-3/2");
        let b = &a * &a.inverse();
        assert!(b.is_one());
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(7);
        for n in 1..7 {
            let x = f.from_i64(n);
            assert!((&x * &x.inverse()).is_one());
        }
        assert_eq!(f.from_i64(-1).to_canonical_string(), "6");
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::Prime(5);
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half.to_canonical_string(), "3");
        assert!(f.from_rational(&BigRational::new(1.into(), 5.into())).is_none());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2147483647));
        assert!(!is_prime(91));
    }
}
