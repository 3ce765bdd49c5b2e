//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.
//!
//! Every scalar is kept in canonical form (reduced fraction, least nonnegative
//! residue), so structural equality of polynomials is meaningful.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    /// The rationals.
    Q,
    /// Integers modulo the given prime.
    Fp(u64),
}

impl FieldKind {
    pub fn zero(self) -> Scalar {
        match self {
            FieldKind::Q => Scalar::Q(BigRational::zero()),
            FieldKind::Fp(p) => Scalar::Fp { val: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldKind::Q => Scalar::Q(BigRational::one()),
            FieldKind::Fp(p) => Scalar::Fp { val: 1 % p, p },
        }
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldKind::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            FieldKind::Fp(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Fp { val: r, p }
            }
        }
    }

    pub fn from_ratio(self, num: BigInt, den: BigInt) -> Scalar {
        match self {
            FieldKind::Q => Scalar::Q(BigRational::new(num, den)),
            FieldKind::Fp(p) => {
                let n = mod_bigint(&num, p);
                let d = mod_bigint(&den, p);
                let s = Scalar::Fp { val: d, p };
                Scalar::Fp { val: n, p }.mul(&s.inv())
            }
        }
    }
}

fn mod_bigint(v: &BigInt, p: u64) -> u64 {
    let m = v % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// A field element: exact rational, or a residue mod a prime carried with the value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { val: u64, p: u64 },
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Q(_) => FieldKind::Q,
            Scalar::Fp { p, .. } => FieldKind::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                Scalar::Fp { val: (a + b) % p, p: *p }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { val, p } => Scalar::Fp { val: (p - val) % p, p: *p },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { val: a, p }, Scalar::Fp { val: b, p: q }) => {
                assert_eq!(p, q, "mixed moduli");
                let prod = (*a as u128 * *b as u128) % (*p as u128);
                Scalar::Fp { val: prod as u64, p: *p }
            }
            _ => panic!("mixed coefficient fields"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { val, p } => {
                assert!(*val != 0, "inverse of zero");
                Scalar::Fp { val: pow_mod(*val, p - 2, *p), p: *p }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }
}

/// Parse "a" or "a/b" (integers of any size, optional leading minus) into a
/// scalar of the given field.
pub fn scalar_parse(s: &str, kind: FieldKind) -> Result<Scalar, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        None => (s, "1"),
        Some((a, b)) => (a.trim(), b.trim()),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad integer '{num}'"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad integer '{den}'"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(kind.from_ratio(num, den))
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{}", val),
        }
    }
}
