//! Exact arithmetic on finite sums `Σ q_r·√r` with rational `q_r` and
//! square-free radicands `r`.
//!
//! Every amplitude that shows up when (anti)symmetrizing a product state or
//! building the three-particle mixed-symmetry basis is of this form, so all
//! overlaps and expectation values can be checked with equality instead of a
//! tolerance.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Largest square-free radicand a [`RadicalRational`] may carry.
pub const MAX_RADICAND: u64 = 1_000_000;

/// Largest integer we are willing to factor by trial division when taking a
/// square root.
const MAX_FACTORABLE: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("square root of negative rational {0}")]
    NegativeRadicand(Rational),
    #[error("radicand {0} exceeds the supported bound {MAX_RADICAND}")]
    RadicandCapacity(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a value with more than one radical term is not supported")]
    MultiTermDivision,
    #[error("invalid exact value: {0}")]
    Parse(String),
}

/// Shorthand for building a rational from two machine integers.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Splits `n` into `(outer, inner)` with `n = outer²·inner` and `inner`
/// square-free.
pub fn square_free_decompose(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            outer *= p.pow(e / 2);
            if e % 2 == 1 {
                inner *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    inner *= rest;
    (outer, inner)
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && square_free_decompose(n).0 == 1
}

/// Product of two square-free radicands: `√a·√b = g·√((a/g)(b/g))` with
/// `g = gcd(a, b)`. The cofactors are coprime and square-free, so their
/// product is square-free as well.
fn multiply_radicands(a: u64, b: u64) -> Result<(u64, u64), ExactError> {
    let g = a.gcd(&b);
    let (x, y) = (a / g, b / g);
    let r = x
        .checked_mul(y)
        .filter(|r| *r <= MAX_RADICAND)
        .ok_or_else(|| ExactError::RadicandCapacity(format!("{x}*{y}")))?;
    Ok((g, r))
}

fn to_factorable(n: &BigInt) -> Result<u64, ExactError> {
    n.to_u64()
        .filter(|v| *v <= MAX_FACTORABLE)
        .ok_or_else(|| ExactError::RadicandCapacity(n.to_string()))
}

/// Exact value `Σ q_r·√r`. The representation is canonical: keys are
/// square-free, coefficients are nonzero, and zero is the empty map, so
/// structural equality is numeric equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RadicalRationalRepr", into = "RadicalRationalRepr")]
pub struct RadicalRational {
    terms: BTreeMap<u64, Rational>,
}

impl RadicalRational {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `q·√r` for any positive `r`; square factors of `r` are pulled into the
    /// coefficient.
    pub fn term(q: Rational, r: u64) -> Result<Self, ExactError> {
        if r == 0 || q.is_zero() {
            return Ok(Self::zero());
        }
        let (outer, inner) = square_free_decompose(r);
        if inner > MAX_RADICAND {
            return Err(ExactError::RadicandCapacity(inner.to_string()));
        }
        let mut terms = BTreeMap::new();
        terms.insert(inner, q * Rational::from_integer(BigInt::from(outer)));
        Ok(Self { terms })
    }

    /// `√r` for a nonnegative integer.
    pub fn sqrt_int(r: u64) -> Result<Self, ExactError> {
        Self::term(Rational::one(), r)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(r, q)| (*r, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a rational, if it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(r, c)| (*r, c * q)).collect(),
        }
    }

    fn add_term(&mut self, r: u64, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(r).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        let mut out = Self::zero();
        for (ra, qa) in &self.terms {
            for (rb, qb) in &other.terms {
                let (g, r) = multiply_radicands(*ra, *rb)?;
                out.add_term(r, qa * qb * Rational::from_integer(BigInt::from(g)));
            }
        }
        Ok(out)
    }

    /// Reciprocal of a single-term value: `1/(q√r) = √r/(q·r)`.
    pub fn recip(&self) -> Result<Self, ExactError> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (None, _) => Err(ExactError::DivisionByZero),
            (Some((r, q)), None) => {
                let denom = q * Rational::from_integer(BigInt::from(*r));
                Ok(Self {
                    terms: BTreeMap::from([(*r, denom.recip())]),
                })
            }
            _ => Err(ExactError::MultiTermDivision),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.checked_mul(&other.recip()?)
    }

    pub fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }
}

/// Exact `√q` in the form `(s/d)·√r` with `r` square-free.
pub fn rsqrt_of_rational(q: &Rational) -> Result<RadicalRational, ExactError> {
    if q.is_negative() {
        return Err(ExactError::NegativeRadicand(q.clone()));
    }
    if q.is_zero() {
        return Ok(RadicalRational::zero());
    }
    // √(p/d) = (sp·√rp)/(sd·√rd) = sp·√(rp·rd) / (sd·rd)
    let (sp, rp) = square_free_decompose(to_factorable(q.numer())?);
    let (sd, rd) = square_free_decompose(to_factorable(q.denom())?);
    if rp > MAX_RADICAND || rd > MAX_RADICAND {
        return Err(ExactError::RadicandCapacity(q.to_string()));
    }
    let (g, r) = multiply_radicands(rp, rd)?;
    let coeff = Rational::new(BigInt::from(sp) * BigInt::from(g), BigInt::from(sd) * BigInt::from(rd));
    RadicalRational::term(coeff, r)
}

impl From<Rational> for RadicalRational {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for RadicalRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl<'a> Add<&'a RadicalRational> for &RadicalRational {
    type Output = RadicalRational;

    fn add(self, rhs: &'a RadicalRational) -> RadicalRational {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RadicalRational {
    type Output = RadicalRational;

    fn add(mut self, rhs: RadicalRational) -> RadicalRational {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a RadicalRational> for RadicalRational {
    fn add_assign(&mut self, rhs: &'a RadicalRational) {
        for (r, q) in &rhs.terms {
            self.add_term(*r, q.clone());
        }
    }
}

impl Neg for RadicalRational {
    type Output = RadicalRational;

    fn neg(self) -> RadicalRational {
        Self {
            terms: self.terms.into_iter().map(|(r, q)| (r, -q)).collect(),
        }
    }
}

impl Neg for &RadicalRational {
    type Output = RadicalRational;

    fn neg(self) -> RadicalRational {
        -self.clone()
    }
}

impl<'a> Sub<&'a RadicalRational> for &RadicalRational {
    type Output = RadicalRational;

    fn sub(self, rhs: &'a RadicalRational) -> RadicalRational {
        self + &(-rhs)
    }
}

impl Sub for RadicalRational {
    type Output = RadicalRational;

    fn sub(self, rhs: RadicalRational) -> RadicalRational {
        &self - &rhs
    }
}

/// Panics if the product needs a radicand above [`MAX_RADICAND`]; use
/// [`RadicalRational::checked_mul`] where that can happen.
impl<'a> Mul<&'a RadicalRational> for &RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: &'a RadicalRational) -> RadicalRational {
        self.checked_mul(rhs).expect("radicand capacity exceeded")
    }
}

impl Mul for RadicalRational {
    type Output = RadicalRational;

    fn mul(self, rhs: RadicalRational) -> RadicalRational {
        &self * &rhs
    }
}

impl fmt::Display for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, q)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            if i == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *r == 1 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "sqrt({r})")?;
            } else {
                write!(f, "{mag}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadicalRational({self})")
    }
}

/// Parses the human form produced by `Display`, e.g. `-2/3 + 1/6*sqrt(6)`;
/// radicands need not be square-free.
impl FromStr for RadicalRational {
    type Err = ExactError;

    fn from_str(text: &str) -> Result<Self, ExactError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ExactError::Parse("empty value".into()));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        for (i, c) in compact.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' | '-' if depth == 0 && i > start => {
                    pieces.push(&compact[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&compact[start..]);
        let bad = || ExactError::Parse(format!("{text:?}"));
        let mut out = RadicalRational::zero();
        for piece in pieces {
            let (negative, body) = match piece.as_bytes().first() {
                Some(b'-') => (true, &piece[1..]),
                Some(b'+') => (false, &piece[1..]),
                _ => (false, piece),
            };
            let (coef, radicand) = match body.find("sqrt(") {
                Some(pos) => {
                    let inner = body[pos + 5..].strip_suffix(')').ok_or_else(bad)?;
                    let r: u64 = inner.parse().map_err(|_| bad())?;
                    let coef = match &body[..pos] {
                        "" => "1",
                        c => c.strip_suffix('*').ok_or_else(bad)?,
                    };
                    (coef, r)
                }
                None => (body, 1),
            };
            let mut q: Rational = coef.parse().map_err(|_| bad())?;
            if negative {
                q = -q;
            }
            out += &RadicalRational::term(q, radicand)?;
        }
        Ok(out)
    }
}

/// Wire form: `{"terms": [[r, "p/q"], ...]}` with ascending `r`.
#[derive(Serialize, Deserialize)]
struct RadicalRationalRepr {
    terms: Vec<(u64, String)>,
}

impl From<RadicalRational> for RadicalRationalRepr {
    fn from(v: RadicalRational) -> Self {
        Self {
            terms: v
                .terms
                .iter()
                .map(|(r, q)| (*r, format!("{}/{}", q.numer(), q.denom())))
                .collect(),
        }
    }
}

impl TryFrom<RadicalRationalRepr> for RadicalRational {
    type Error = ExactError;

    fn try_from(repr: RadicalRationalRepr) -> Result<Self, ExactError> {
        let mut out = RadicalRational::zero();
        for (r, text) in repr.terms {
            if !is_square_free(r) {
                return Err(ExactError::Parse(format!("radicand {r} is not square-free")));
            }
            if r > MAX_RADICAND {
                return Err(ExactError::RadicandCapacity(r.to_string()));
            }
            let q: Rational = text
                .trim()
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad rational {text:?}")))?;
            out.add_term(r, q);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inv_sqrt(n: u64) -> RadicalRational {
        RadicalRational::sqrt_int(n).unwrap().recip().unwrap()
    }

    #[test]
    fn add_merges_like_radicals() {
        let h = inv_sqrt(2);
        assert_eq!(&h + &h, RadicalRational::sqrt_int(2).unwrap());
        let x = RadicalRational::term(ratio(3, 7), 5).unwrap();
        assert_eq!(&x + &RadicalRational::zero(), x);
        assert!((&inv_sqrt(6) + &(-inv_sqrt(6))).is_zero());
    }

    #[test]
    fn mul_reduces_radicands() {
        assert_eq!(&inv_sqrt(6) * &inv_sqrt(6), RadicalRational::from_rational(ratio(1, 6)));
        let a = RadicalRational::from_rational(ratio(1, 2)) * inv_sqrt(3);
        let prod = &a * &inv_sqrt(6);
        assert_eq!(prod, RadicalRational::term(ratio(1, 12), 2).unwrap());
        assert!((prod.to_f64() - 1.0 / (2.0 * 3f64.sqrt()) / 6f64.sqrt()).abs() < 1e-15);
        let r2 = RadicalRational::sqrt_int(2).unwrap();
        let r3 = RadicalRational::sqrt_int(3).unwrap();
        assert_eq!(&r2 * &r3, RadicalRational::sqrt_int(6).unwrap());
    }

    #[test]
    fn sqrt_of_rational_forms() {
        assert_eq!(
            rsqrt_of_rational(&ratio(1, 6)).unwrap(),
            RadicalRational::term(ratio(1, 6), 6).unwrap()
        );
        assert_eq!(
            rsqrt_of_rational(&ratio(4, 1)).unwrap(),
            RadicalRational::from_integer(2)
        );
        assert_eq!(
            rsqrt_of_rational(&ratio(1, 2)).unwrap(),
            RadicalRational::term(ratio(1, 2), 2).unwrap()
        );
        assert!(matches!(
            rsqrt_of_rational(&ratio(-1, 2)),
            Err(ExactError::NegativeRadicand(_))
        ));
        assert!(rsqrt_of_rational(&Rational::zero()).unwrap().is_zero());
    }

    #[test]
    fn capacity_is_enforced() {
        // 999983 and 999979 are prime; their product is square-free and too big.
        let a = RadicalRational::sqrt_int(999_983).unwrap();
        let b = RadicalRational::sqrt_int(999_979).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(ExactError::RadicandCapacity(_))));
        assert!(RadicalRational::sqrt_int(2_000_003).is_err());
    }

    #[test]
    fn recip_rejects_multi_term_and_zero() {
        let two_terms = &RadicalRational::one() + &RadicalRational::sqrt_int(2).unwrap();
        assert_eq!(two_terms.recip(), Err(ExactError::MultiTermDivision));
        assert_eq!(RadicalRational::zero().recip(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn display_and_json() {
        let v = &RadicalRational::term(ratio(1, 6), 6).unwrap() - &RadicalRational::from_rational(ratio(2, 3));
        assert_eq!(v.to_string(), "-2/3 + 1/6*sqrt(6)");
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"terms":[[1,"-2/3"],[6,"1/6"]]}"#);
        let back: RadicalRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<RadicalRational>(r#"{"terms":[[4,"1/2"]]}"#).is_err());
    }

    #[test]
    fn parse_human_form() {
        let v: RadicalRational = "-2/3 + 1/6*sqrt(6)".parse().unwrap();
        assert_eq!(v.to_string(), "-2/3 + 1/6*sqrt(6)");
        assert_eq!("sqrt(8)".parse::<RadicalRational>().unwrap().to_string(), "2*sqrt(2)");
        assert_eq!(
            "-sqrt(2)+sqrt(2)".parse::<RadicalRational>().unwrap(),
            RadicalRational::zero()
        );
        assert_eq!(
            "3".parse::<RadicalRational>().unwrap(),
            RadicalRational::from_integer(3)
        );
        for bad in ["", "1/0x", "sqrt(2", "2sqrt(3)", "sqrt(-2)"] {
            assert!(bad.parse::<RadicalRational>().is_err(), "{bad}");
        }
    }

    fn arb_value() -> impl Strategy<Value = RadicalRational> {
        let radicands = prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10, 15, 30]);
        prop::collection::vec((radicands, -20i64..20, 1i64..12), 0..4).prop_map(|ts| {
            ts.into_iter().fold(RadicalRational::zero(), |acc, (r, p, q)| {
                &acc + &RadicalRational::term(ratio(p, q), r).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn display_parses_back(a in arb_value()) {
            prop_assert_eq!(a.to_string().parse::<RadicalRational>().unwrap(), a);
        }

        #[test]
        fn ring_axioms(a in arb_value(), b in arb_value(), c in arb_value()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &RadicalRational::one(), a.clone());
        }

        #[test]
        fn float_shadow(a in arb_value(), b in arb_value(), c in arb_value()) {
            let exact = (&(&a * &b) - &c).to_f64();
            let float = a.to_f64() * b.to_f64() - c.to_f64();
            let scale = 1.0f64.max(exact.abs()).max(a.to_f64().abs() * b.to_f64().abs() + c.to_f64().abs());
            prop_assert!((exact - float).abs() <= 1e-12 * scale);
        }

        #[test]
        fn difference_zero_iff_identical(a in arb_value(), b in arb_value()) {
            prop_assert_eq!((&a - &b).is_zero(), a == b);
        }

        #[test]
        fn sqrt_squares_back(p in 0i64..1000, q in 1i64..1000) {
            let s = rsqrt_of_rational(&ratio(p, q)).unwrap();
            prop_assert!(s.num_terms() <= 1);
            prop_assert_eq!((&s * &s).as_rational().unwrap(), ratio(p, q));
        }
    }
}
