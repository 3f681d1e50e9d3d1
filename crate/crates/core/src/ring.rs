//! Exact coefficient rings: `Z/nZ` with canonical residues and `Q` with
//! reduced arbitrary-precision fractions.
//!
//! Scalars carry no ring tag beyond their variant; every operation goes
//! through a [`RingSpec`], which owns the modulus.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingSpec {
    Zmod { n: u64 },
    #[serde(rename = "Q", alias = "Rationals")]
    Rationals,
}

/// A canonical ring element: a residue in `[0, n)` or a reduced fraction
/// with positive denominator. Equality is representational equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Residue(u64),
    Rational(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue(r) => write!(f, "{r}"),
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod { n } => write!(f, "Z/{n}"),
            RingSpec::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Accepts `zmod:N`, `z/N`, `q` and `rationals`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "q" || lower == "rationals" {
            return Ok(RingSpec::Rationals);
        }
        let digits = lower
            .strip_prefix("zmod:")
            .or_else(|| lower.strip_prefix("z/"))
            .ok_or_else(|| Error::Schema(format!("unrecognised ring {s:?}")))?;
        let n: u64 = digits
            .parse()
            .map_err(|_| Error::Schema(format!("unrecognised modulus in {s:?}")))?;
        RingSpec::zmod(n)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl RingSpec {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(RingSpec::Zmod { n })
    }

    /// Rejects a deserialized spec that bypassed [`RingSpec::zmod`].
    pub fn validated(self) -> Result<Self> {
        match self {
            RingSpec::Zmod { n } => RingSpec::zmod(n),
            RingSpec::Rationals => Ok(self),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            RingSpec::Zmod { n } => Some(*n),
            RingSpec::Rationals => None,
        }
    }

    pub fn is_enumerable(&self) -> bool {
        matches!(self, RingSpec::Zmod { .. })
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.modulus()
    }

    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Zmod { n } => is_prime(*n),
            RingSpec::Rationals => true,
        }
    }

    /// Ring-level sufficient check for `2x = 0 => x = 0`.
    pub fn is_two_torsion_free(&self) -> bool {
        match self {
            RingSpec::Zmod { n } => n % 2 == 1,
            RingSpec::Rationals => true,
        }
    }

    pub fn enumerate_scalars(&self) -> Result<Vec<Scalar>> {
        match self {
            RingSpec::Zmod { n } => Ok((0..*n).map(Scalar::Residue).collect()),
            RingSpec::Rationals => Err(Error::NotEnumerable),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            RingSpec::Zmod { .. } => Scalar::Residue(0),
            RingSpec::Rationals => Scalar::Rational(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            RingSpec::Zmod { .. } => Scalar::Residue(1),
            RingSpec::Rationals => Scalar::Rational(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce_i128(v as i128)
    }

    fn reduce_i128(&self, v: i128) -> Scalar {
        match self {
            RingSpec::Zmod { n } => Scalar::Residue(v.rem_euclid(*n as i128) as u64),
            RingSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Reduces `p/q` into the ring; fails when `q` is not invertible.
    pub fn from_fraction(&self, p: &BigInt, q: &BigInt) -> Result<Scalar> {
        let bad = || Error::InvalidScalar {
            value: format!("{p}/{q}"),
            ring: self.to_string(),
        };
        if q.is_zero() {
            return Err(bad());
        }
        match self {
            RingSpec::Rationals => Ok(Scalar::Rational(BigRational::new(p.clone(), q.clone()))),
            RingSpec::Zmod { n } => {
                let modulus = BigInt::from(*n);
                let num = p.mod_floor(&modulus).to_u64().ok_or_else(bad)?;
                let den = q.mod_floor(&modulus).to_u64().ok_or_else(bad)?;
                let inv = self.inv(&Scalar::Residue(den)).ok_or_else(bad)?;
                Ok(self.mul(&Scalar::Residue(num), &inv))
            }
        }
    }

    /// Parses `"3"`, `"-2"` or `"3/4"`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::InvalidScalar {
            value: s.to_string(),
            ring: self.to_string(),
        };
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        self.from_fraction(&p, &q)
    }

    /// True when `x` is a canonical element of this ring.
    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (RingSpec::Zmod { n }, Scalar::Residue(r)) => r < n,
            (RingSpec::Rationals, Scalar::Rational(_)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Residue(r) => *r == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn add(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (RingSpec::Zmod { n }, Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            (RingSpec::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => {
                Scalar::Rational(a + b)
            }
            _ => mixed(self, x, y),
        }
    }

    pub fn neg(&self, x: &Scalar) -> Scalar {
        match (self, x) {
            (RingSpec::Zmod { n }, Scalar::Residue(a)) => {
                Scalar::Residue(if *a == 0 { 0 } else { n - a })
            }
            (RingSpec::Rationals, Scalar::Rational(a)) => Scalar::Rational(-a),
            _ => mixed(self, x, x),
        }
    }

    pub fn sub(&self, x: &Scalar, y: &Scalar) -> Scalar {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, x, y) {
            (RingSpec::Zmod { n }, Scalar::Residue(a), Scalar::Residue(b)) => {
                Scalar::Residue(((*a as u128 * *b as u128) % *n as u128) as u64)
            }
            (RingSpec::Rationals, Scalar::Rational(a), Scalar::Rational(b)) => {
                Scalar::Rational(a * b)
            }
            _ => mixed(self, x, y),
        }
    }

    /// `acc + x * y`, the inner-loop primitive of every contraction.
    pub fn mul_add(&self, acc: &Scalar, x: &Scalar, y: &Scalar) -> Scalar {
        match (self, acc, x, y) {
            (RingSpec::Zmod { n }, Scalar::Residue(c), Scalar::Residue(a), Scalar::Residue(b)) => {
                let n = *n as u128;
                Scalar::Residue(((*c as u128 + (*a as u128 * *b as u128) % n) % n) as u64)
            }
            _ => self.add(acc, &self.mul(x, y)),
        }
    }

    pub fn scale_int(&self, c: i64, x: &Scalar) -> Scalar {
        self.mul(&self.from_i64(c), x)
    }

    /// Multiplicative inverse when `x` is a unit.
    pub fn inv(&self, x: &Scalar) -> Option<Scalar> {
        match (self, x) {
            (RingSpec::Zmod { n }, Scalar::Residue(a)) => {
                let e = (*a as i128).extended_gcd(&(*n as i128));
                (e.gcd == 1).then(|| self.reduce_i128(e.x))
            }
            (RingSpec::Rationals, Scalar::Rational(a)) => {
                (!a.is_zero()).then(|| Scalar::Rational(a.recip()))
            }
            _ => None,
        }
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        self.inv(x).is_some()
    }

    /// Residue of `x` as an integer in `[0, n)`; `None` over `Q`.
    pub fn residue(&self, x: &Scalar) -> Option<u64> {
        match x {
            Scalar::Residue(r) => Some(*r),
            Scalar::Rational(_) => None,
        }
    }
}

#[cold]
fn mixed(ring: &RingSpec, x: &Scalar, y: &Scalar) -> Scalar {
    panic!("scalar {x:?} or {y:?} does not belong to ring {ring}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::zmod(n).unwrap()
    }

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(p.into(), d.into()))
    }

    #[test]
    fn modular_reduction() {
        let r = z(3);
        assert_eq!(r.add(&Scalar::Residue(2), &Scalar::Residue(2)), Scalar::Residue(1));
        assert_eq!(r.from_i64(-1), Scalar::Residue(2));
    }

    #[test]
    fn inverses() {
        assert_eq!(z(4).inv(&Scalar::Residue(2)), None);
        assert_eq!(z(4).inv(&Scalar::Residue(3)), Some(Scalar::Residue(3)));
        assert_eq!(RingSpec::Rationals.inv(&q(3, 2)), Some(q(2, 3)));
        assert_eq!(RingSpec::Rationals.inv(&q(0, 1)), None);
    }

    #[test]
    fn two_torsion() {
        assert!(z(3).is_two_torsion_free());
        assert!(!z(4).is_two_torsion_free());
        assert!(RingSpec::Rationals.is_two_torsion_free());
    }

    #[test]
    fn enumeration() {
        assert_eq!(
            z(2).enumerate_scalars().unwrap(),
            vec![Scalar::Residue(0), Scalar::Residue(1)]
        );
        assert_eq!(z(5).enumerate_scalars().unwrap().len(), 5);
        assert!(matches!(
            RingSpec::Rationals.enumerate_scalars(),
            Err(Error::NotEnumerable)
        ));
    }

    #[test]
    fn invalid_modulus() {
        assert!(matches!(RingSpec::zmod(1), Err(Error::InvalidModulus(1))));
        let bad: RingSpec = serde_json::from_str(r#"{"kind":"Zmod","n":0}"#).unwrap();
        assert!(bad.validated().is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("zmod:7".parse::<RingSpec>().unwrap(), z(7));
        assert_eq!("Q".parse::<RingSpec>().unwrap(), RingSpec::Rationals);
        assert_eq!(z(5).parse_scalar("1/2").unwrap(), Scalar::Residue(3));
        assert!(z(4).parse_scalar("1/2").is_err());
        assert_eq!(RingSpec::Rationals.parse_scalar("-6/4").unwrap(), q(-3, 2));
        let json: RingSpec = serde_json::from_str(r#"{"kind":"Q"}"#).unwrap();
        assert_eq!(json, RingSpec::Rationals);
        assert_eq!(serde_json::to_string(&z(3)).unwrap(), r#"{"kind":"Zmod","n":3}"#);
    }

    #[test]
    fn odd_moduli_have_no_two_torsion_exhaustively() {
        for n in (3..40).step_by(2) {
            let r = z(n);
            for x in r.enumerate_scalars().unwrap() {
                if r.is_zero(&r.add(&x, &x)) {
                    assert!(r.is_zero(&x), "n = {n}, x = {x}");
                }
            }
        }
    }

    fn residue_triple() -> impl Strategy<Value = (u64, u64, u64, u64)> {
        (2u64..60).prop_flat_map(|n| (Just(n), 0..n, 0..n, 0..n))
    }

    proptest! {
        #[test]
        fn zmod_ring_axioms((n, a, b, c) in residue_triple()) {
            let r = z(n);
            let (a, b, c) = (Scalar::Residue(a), Scalar::Residue(b), Scalar::Residue(c));
            prop_assert_eq!(r.add(&a, &b), r.add(&b, &a));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
            prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
            prop_assert_eq!(
                r.mul(&a, &r.add(&b, &c)),
                r.add(&r.mul(&a, &b), &r.mul(&a, &c))
            );
            prop_assert_eq!(r.mul_add(&c, &a, &b), r.add(&c, &r.mul(&a, &b)));
            if let Some(inv) = r.inv(&a) {
                prop_assert_eq!(r.mul(&a, &inv), r.one());
            }
        }

        #[test]
        fn rational_ring_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
            let r = RingSpec::Rationals;
            let (x, y) = (q(a, b), q(c, d));
            prop_assert_eq!(r.add(&x, &y), r.add(&y, &x));
            prop_assert_eq!(r.mul(&r.mul(&x, &y), &x), r.mul(&x, &r.mul(&y, &x)));
            if let Some(inv) = r.inv(&x) {
                prop_assert_eq!(r.mul(&x, &inv), r.one());
            }
        }
    }
}
