//! Exact arithmetic: big rationals and real quadratic surds `u + v√d`.
//!
//! Every algebraic system handled by the solver has rational coefficients and
//! degree at most two, so all quantities live in some field `Q(√d)`. Values
//! drawn from different fields are never mixed within one computation; doing
//! so is a logic error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Trial division stops here; any cofactor left over is kept as is.
const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// Parses `"n"`, `"n/d"` or a plain decimal such as `"-0.75"` without loss.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_integer(num).ok_or_else(bad)?;
        let den: BigInt = parse_integer(den).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(whole) || !all_digits(frac) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10u32), frac.len());
    let q = BigRational::new(num, den);
    Ok(if negative { -q } else { q })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `"2"` or `"-1/2"`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `"num/den"`, including integers (`"2/1"`).
pub fn fmt_ratio(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// Splits a positive integer into `(s, d)` with `n = s²·d` and `d` squarefree.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut rest = n.clone();
    let mut root = BigInt::one();
    let mut f: u64 = 2;
    loop {
        let fb = BigInt::from(f);
        if &fb * &fb > rest || f > TRIAL_DIVISION_LIMIT {
            break;
        }
        let sq = &fb * &fb;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            root *= &fb;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        root *= r;
        rest = BigInt::one();
    }
    (root, rest)
}

/// An element `u + v√d` of a real quadratic field, kept in normal form:
/// either `v = 0` and `d = 1`, or `d ≥ 2` is squarefree (up to the trial
/// division limit) and `v ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    rational: Rational,
    coeff: Rational,
    radicand: BigInt,
}

impl Surd {
    pub fn new(rational: Rational, coeff: Rational, radicand: BigInt) -> Self {
        assert!(
            !radicand.is_negative(),
            "negative radicand {radicand} is not real"
        );
        if coeff.is_zero() || radicand.is_zero() {
            return Self::from_rational(rational);
        }
        let (root, rest) = split_square(&radicand);
        let coeff = coeff * BigRational::from_integer(root);
        if rest.is_one() {
            Self::from_rational(rational + coeff)
        } else {
            Surd {
                rational,
                coeff,
                radicand: rest,
            }
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Surd {
            rational: q,
            coeff: Rational::zero(),
            radicand: BigInt::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(int(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// `√q` for a nonnegative rational `q`; `None` when `q < 0`.
    pub fn sqrt(q: &Rational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Self::zero());
        }
        // √(a/b) = √(ab) / b
        let radicand = q.numer() * q.denom();
        Some(Surd::new(
            Rational::zero(),
            Rational::new(BigInt::one(), q.denom().clone()),
            radicand,
        ))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn surd_part(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.rational.is_one()
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let su = sign_of(&self.rational);
        let sv = sign_of(&self.coeff);
        if sv == 0 {
            return su;
        }
        if su == 0 || su == sv {
            return sv;
        }
        let u2 = &self.rational * &self.rational;
        let v2d = &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone());
        if u2 > v2d {
            su
        } else {
            sv
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn conjugate(&self) -> Self {
        Surd {
            rational: self.rational.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// `u² − v²d`, the field norm.
    pub fn norm(&self) -> Rational {
        &self.rational * &self.rational
            - &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero surd");
        let n = self.norm();
        let c = self.conjugate();
        Surd {
            rational: c.rational / &n,
            coeff: c.coeff / &n,
            radicand: c.radicand,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        let u = rational_to_f64(&self.rational);
        if self.coeff.is_zero() {
            return u;
        }
        let v = rational_to_f64(&self.coeff);
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        u + v * d.sqrt()
    }

    fn field(&self, other: &Surd) -> BigInt {
        if self.coeff.is_zero() {
            other.radicand.clone()
        } else if other.coeff.is_zero() || self.radicand == other.radicand {
            self.radicand.clone()
        } else {
            panic!(
                "cannot combine values from Q(sqrt({})) and Q(sqrt({}))",
                self.radicand, other.radicand
            )
        }
    }

    fn compatible(&self, other: &Surd) -> bool {
        self.coeff.is_zero() || other.coeff.is_zero() || self.radicand == other.radicand
    }

    fn normalized(rational: Rational, coeff: Rational, radicand: BigInt) -> Self {
        if coeff.is_zero() {
            Self::from_rational(rational)
        } else {
            Surd {
                rational,
                coeff,
                radicand,
            }
        }
    }
}

fn sign_of(q: &Rational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::from_rational(q)
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Self {
        Surd::from_int(v)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.compatible(other) {
            return None;
        }
        Some((self - other).signum().cmp(&0))
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            rational: -self.rational.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let d = self.field(rhs);
        Surd::normalized(&self.rational + &rhs.rational, &self.coeff + &rhs.coeff, d)
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let d = self.field(rhs);
        Surd::normalized(&self.rational - &rhs.rational, &self.coeff - &rhs.coeff, d)
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let d = self.field(rhs);
        let dq = BigRational::from_integer(d.clone());
        let u = &self.rational * &rhs.rational + &self.coeff * &rhs.coeff * dq;
        let v = &self.rational * &rhs.coeff + &self.coeff * &rhs.rational;
        Surd::normalized(u, v, d)
    }
}

impl Div<&Surd> for &Surd {
    type Output = Surd;
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $f(self, rhs: Surd) -> Surd { (&self).$f(&rhs) }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $f(self, rhs: &Surd) -> Surd { (&self).$f(rhs) }
        }
        impl $tr<Surd> for &Surd {
            type Output = Surd;
            fn $f(self, rhs: Surd) -> Surd { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return f.write_str(&fmt_rational(&self.rational));
        }
        let v = self.coeff.abs();
        let root = if v.is_one() {
            format!("sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", fmt_rational(&v), self.radicand)
        };
        let sign = if self.coeff.is_negative() { "-" } else { "+" };
        if self.rational.is_zero() {
            if self.coeff.is_negative() {
                write!(f, "-{root}")
            } else {
                f.write_str(&root)
            }
        } else {
            write!(f, "{} {sign} {root}", fmt_rational(&self.rational))
        }
    }
}

/// Rationals serialize as `"num/den"`; irrational surds as `{u, v, d}`.
impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.coeff.is_zero() {
            return serializer.serialize_str(&fmt_ratio(&self.rational));
        }
        let mut st = serializer.serialize_struct("Surd", 3)?;
        st.serialize_field("d", &self.radicand.to_string())?;
        st.serialize_field("u", &fmt_ratio(&self.rational))?;
        st.serialize_field("v", &fmt_ratio(&self.coeff))?;
        st.end()
    }
}

/// Real roots of `a x² + b x + c = 0` in increasing order (one root when the
/// equation is linear or the discriminant vanishes, none when it is negative).
pub fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> Vec<Surd> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        return vec![Surd::from_rational(-c / b)];
    }
    let disc = b * b - int(4) * a * c;
    let Some(root) = Surd::sqrt(&disc) else {
        return Vec::new();
    };
    let two_a = Surd::from_rational(int(2) * a);
    let minus_b = Surd::from_rational(-b.clone());
    if root.is_zero() {
        return vec![&minus_b / &two_a];
    }
    let mut roots = vec![(&minus_b - &root) / &two_a, (&minus_b + &root) / &two_a];
    roots.sort_by(|x, y| x.partial_cmp(y).expect("same field"));
    roots
}

/// Evaluates `a x² + b x + c` exactly.
pub fn eval_quadratic(a: &Rational, b: &Rational, c: &Rational, x: &Surd) -> Surd {
    let a = Surd::from_rational(a.clone());
    let b = Surd::from_rational(b.clone());
    let c = Surd::from_rational(c.clone());
    &(&(&a * x) + &b) * x + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.7").unwrap(), rat(7, 10));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), rat(2, 3));
        for bad in ["", "1/0", "a", "1.2.3", "1/x", "--1", ".", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_forms() {
        assert_eq!(fmt_rational(&rat(4, 2)), "2");
        assert_eq!(fmt_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(fmt_ratio(&int(2)), "2/1");
    }

    #[test]
    fn sqrt_extracts_squares() {
        let s = Surd::sqrt(&int(80)).unwrap();
        assert_eq!(s.surd_part(), &int(4));
        assert_eq!(s.radicand(), &BigInt::from(5));
        assert_eq!(Surd::sqrt(&rat(9, 4)).unwrap(), Surd::ratio(3, 2));
        assert!(Surd::sqrt(&int(-1)).is_none());
        // √(5/3) = √15 / 3
        let s = Surd::sqrt(&rat(5, 3)).unwrap();
        assert_eq!(s.radicand(), &BigInt::from(15));
        assert_eq!(s.surd_part(), &rat(1, 3));
    }

    #[test]
    fn field_arithmetic() {
        let r5 = Surd::sqrt(&int(5)).unwrap();
        let x = &Surd::from_int(3) - &r5;
        let y = &Surd::from_int(3) + &r5;
        assert_eq!(&x * &y, Surd::from_int(4));
        assert_eq!(&(&x / &y) * &y, x);
        assert_eq!(r5.square(), Surd::from_int(5));
        assert!(x.is_positive());
        assert!((&Surd::from_int(2) - &r5).is_negative());
    }

    #[test]
    fn roots_of_quadratics() {
        // 8a² − 12a + 2 = 0  →  (3 ∓ √5)/4
        let r = quadratic_roots(&int(8), &int(-12), &int(2));
        assert_eq!(r.len(), 2);
        let r5 = Surd::sqrt(&int(5)).unwrap();
        assert_eq!(r[0], &(&Surd::from_int(3) - &r5) / &Surd::from_int(4));
        assert_eq!(r[1], &(&Surd::from_int(3) + &r5) / &Surd::from_int(4));
        assert!((r[0].to_f64() - 0.190_983_005_625_052_6).abs() < 1e-15);
        let r = quadratic_roots(&int(22), &int(-32), &int(10));
        assert_eq!(r, vec![Surd::ratio(5, 11), Surd::from_int(1)]);
        assert!(quadratic_roots(&int(1), &int(0), &int(1)).is_empty());
        assert_eq!(
            quadratic_roots(&int(0), &int(2), &int(1)),
            vec![Surd::ratio(-1, 2)]
        );
    }

    #[test]
    fn display_and_serialize() {
        let r5 = Surd::sqrt(&int(5)).unwrap();
        let x = &(&Surd::from_int(3) - &r5) / &Surd::from_int(4);
        assert_eq!(x.to_string(), "3/4 - 1/4*sqrt(5)");
        assert_eq!(Surd::ratio(-1, 11).to_string(), "-1/11");
        assert_eq!(
            serde_json::to_string(&Surd::ratio(1, 2)).unwrap(),
            "\"1/2\""
        );
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"d":"5","u":"3/4","v":"-1/4"}"#
        );
    }

    #[test]
    #[should_panic(expected = "cannot combine")]
    fn mixing_fields_panics() {
        let _ = &Surd::sqrt(&int(2)).unwrap() + &Surd::sqrt(&int(3)).unwrap();
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
        }

        proptest! {
            #[test]
            fn roots_satisfy_equation(a in small_rat(), b in small_rat(), c in small_rat()) {
                for x in quadratic_roots(&a, &b, &c) {
                    prop_assert!(eval_quadratic(&a, &b, &c, &x).is_zero());
                }
            }

            #[test]
            fn decimal_round_trip(n in -100_000i64..100_000) {
                let sign = if n < 0 { "-" } else { "" };
                let text = format!("{sign}{}.{:03}", n.abs() / 1000, n.abs() % 1000);
                prop_assert_eq!(parse_rational(&text).unwrap(), rat(n, 1000));
            }

            #[test]
            fn sign_matches_float(u in small_rat(), v in small_rat(), d in 2i64..40) {
                let s = Surd::new(u, v, BigInt::from(d));
                let f = s.to_f64();
                if f.abs() > 1e-9 {
                    prop_assert_eq!(s.signum(), if f > 0.0 { 1 } else { -1 });
                }
            }
        }
    }
}
