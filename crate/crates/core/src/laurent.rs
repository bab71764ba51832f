//! Laurent polynomials in `q` with integer coefficients and half-integer
//! exponents.
//!
//! Exponents are stored doubled (`2e`) so that `q^{1/2}` is exact. Every
//! invariant the engine produces ends up with integer exponents; half-integer
//! terms only show up transiently inside quantum integers of even argument.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("quantum integer [{0}]_q is only defined for n >= 1")]
    NonPositiveQuantum(i64),
    #[error("cannot evaluate at q = -1: half-integer exponent {0}/2 present")]
    HalfIntegerAtMinusOne(i64),
    #[error("evaluation point must be 1 or -1, got {0}")]
    BadEvaluationPoint(i64),
    #[error("cannot parse Laurent polynomial: {0}")]
    Parse(String),
}

/// Exact Laurent polynomial in `q^{1/2}`.
///
/// Keys of `terms` are doubled exponents; zero coefficients are never stored,
/// so derived equality is canonical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e` for an integer exponent `e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        Self::half_monomial(c, 2 * e)
    }

    /// `c * q^{e2/2}`.
    pub fn half_monomial(c: impl Into<BigInt>, e2: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e2, c);
        }
        Self { terms }
    }

    /// Build from `(integer exponent, coefficient)` pairs; repeated exponents
    /// are summed.
    pub fn from_int_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(2 * e, c.into());
        }
        p
    }

    /// Symmetric sum `q^{(n-1)/2} + q^{(n-3)/2} + ... + q^{-(n-1)/2}`.
    pub fn quantum_integer(n: i64) -> Result<Self, LaurentError> {
        if n < 1 {
            return Err(LaurentError::NonPositiveQuantum(n));
        }
        let mut p = Self::zero();
        let mut e2 = n - 1;
        while e2 >= -(n - 1) {
            p.terms.insert(e2, BigInt::one());
            e2 -= 2;
        }
        Ok(p)
    }

    fn add_term(&mut self, e2: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e2).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e2);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate `(doubled exponent, coefficient)` in increasing exponent order.
    pub fn half_terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Iterate `(exponent, coefficient)`; panics on half-integer exponents.
    pub fn int_terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| {
            assert!(e % 2 == 0, "half-integer exponent {e}/2");
            (e / 2, c)
        })
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.half_coeff(2 * e)
    }

    pub fn half_coeff(&self, e2: i64) -> BigInt {
        self.terms.get(&e2).cloned().unwrap_or_default()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Invariant under `q -> q^{-1}`.
    pub fn is_palindromic(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| self.terms.get(&-e).is_some_and(|d| d == c))
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Largest doubled exponent, `None` for the zero polynomial.
    pub fn max_half_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_half_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Largest integer exponent; `None` for zero or when it is half-integral.
    pub fn degree(&self) -> Option<i64> {
        self.max_half_exponent().filter(|e| e % 2 == 0).map(|e| e / 2)
    }

    /// Exact value at `q = 1` or `q = -1`.
    pub fn evaluate(&self, q0: i64) -> Result<BigInt, LaurentError> {
        match q0 {
            1 => Ok(self.terms.values().sum()),
            -1 => {
                let mut acc = BigInt::zero();
                for (e2, c) in &self.terms {
                    if e2 % 2 != 0 {
                        return Err(LaurentError::HalfIntegerAtMinusOne(*e2));
                    }
                    if (e2 / 2) % 2 == 0 {
                        acc += c;
                    } else {
                        acc -= c;
                    }
                }
                Ok(acc)
            }
            other => Err(LaurentError::BadEvaluationPoint(other)),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate `q -> q^{-1}`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    fn exponent_label(e2: i64) -> String {
        if e2 % 2 == 0 {
            (e2 / 2).to_string()
        } else {
            format!("{e2}/2")
        }
    }

    fn parse_exponent_label(s: &str) -> Option<i64> {
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<i64>().ok(),
            Some(_) => None,
            None => s.trim().parse::<i64>().ok().map(|e| 2 * e),
        }
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;

    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Renders like `q^-1 + 10 + q`, lowest exponent first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e2, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = match *e2 {
                0 => String::new(),
                2 => "q".to_string(),
                e if e % 2 == 0 => format!("q^{}", e / 2),
                e => format!("q^({e}/2)"),
            };
            if var.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{abs}{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Parses the `Display` syntax: signed terms `c`, `cq`, `cq^e`, `q^(k/2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LaurentError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // split into signed chunks, keeping '-' that belongs to an exponent
        let mut chunks: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            let exponent_sign = matches!(prev, Some('^') | Some('('));
            if (ch == '+' || ch == '-') && !exponent_sign && !cur.is_empty() {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        chunks.push(cur);

        let mut p = LaurentPoly::zero();
        for chunk in chunks {
            let (sign, body) = match chunk.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            let (coef_part, var_part) = match body.find('q') {
                Some(i) => (&body[..i], Some(&body[i + 1..])),
                None => (body, None),
            };
            let coef: BigInt = if coef_part.is_empty() {
                if var_part.is_none() {
                    return Err(err());
                }
                BigInt::one()
            } else {
                coef_part.parse().map_err(|_| err())?
            };
            let e2 = match var_part {
                None => 0,
                Some("") => 2,
                Some(rest) => {
                    let exp = rest.strip_prefix('^').ok_or_else(err)?;
                    let exp = exp
                        .strip_prefix('(')
                        .and_then(|x| x.strip_suffix(')'))
                        .unwrap_or(exp);
                    Self::parse_exponent_label(exp).ok_or_else(err)?
                }
            };
            p.add_term(e2, coef * sign);
        }
        Ok(p)
    }
}

/// Writes a big integer as a JSON number when it fits in i64, else as a
/// decimal string. For `#[serde(serialize_with = ...)]`.
pub fn serialize_bigint<S: Serializer>(v: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => serializer.serialize_i64(x),
        None => serializer.serialize_str(&v.to_string()),
    }
}

/// JSON form: object from exponent strings (`"-2"`, `"0"`, `"3"`, or `"1/2"`
/// for half-integers) to integer coefficients. Coefficients outside the i64
/// range are written as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (e2, c) in &self.terms {
            let key = Self::exponent_label(*e2);
            match c.to_i64() {
                Some(v) => map.serialize_entry(&key, &v)?,
                None => map.serialize_entry(&key, &c.to_string())?,
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coef {
            Int(i64),
            Text(String),
        }

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponent strings to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, Coef>()? {
                    let e2 = LaurentPoly::parse_exponent_label(&k)
                        .ok_or_else(|| de::Error::custom(format!("bad exponent key {k:?}")))?;
                    let c = match v {
                        Coef::Int(i) => BigInt::from(i),
                        Coef::Text(t) => t
                            .parse::<BigInt>()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {t:?}")))?,
                    };
                    p.add_term(e2, c);
                }
                Ok(p)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("q") + &p("q^-1"), p("q^-1 + q"));
        assert_eq!(&p("q^-1 + 10 + q") + &LaurentPoly::zero(), p("q^-1 + 10 + q"));
        assert_eq!(
            &p("q^-1 + 10 + q") + &p("q^-1 + 8 + q"),
            p("2q^-1 + 18 + 2q")
        );
    }

    #[test]
    fn mul_examples() {
        let half = LaurentPoly::half_monomial(1, 1) + LaurentPoly::half_monomial(1, -1);
        assert_eq!(&half * &half, p("q + 2 + q^-1"));
        let x = p("q + 1 + q^-1");
        assert_eq!(&x * &LaurentPoly::one(), x);
        assert!((&x * &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(LaurentPoly::quantum_integer(1).unwrap(), LaurentPoly::one());
        assert_eq!(
            LaurentPoly::quantum_integer(2).unwrap(),
            LaurentPoly::half_monomial(1, 1) + LaurentPoly::half_monomial(1, -1)
        );
        assert_eq!(LaurentPoly::quantum_integer(3).unwrap(), p("q + 1 + q^-1"));
        assert_eq!(
            LaurentPoly::quantum_integer(0),
            Err(LaurentError::NonPositiveQuantum(0))
        );
        assert!(LaurentPoly::quantum_integer(-3).is_err());
    }

    #[test]
    fn quantum_integer_properties_up_to_50() {
        for n in 1..=50 {
            let qn = LaurentPoly::quantum_integer(n).unwrap();
            assert!(qn.is_palindromic());
            assert_eq!(qn.len() as i64, n);
            assert_eq!(qn.evaluate(1).unwrap(), BigInt::from(n));
            let sq = &qn * &qn;
            assert!(sq.has_integer_exponents());
            let expected = if n % 2 == 1 { 1 } else { 0 };
            assert_eq!(sq.evaluate(-1).unwrap(), BigInt::from(expected));
        }
    }

    #[test]
    fn evaluation_examples() {
        let g = p("q^-1 + 10 + q");
        assert_eq!(g.evaluate(1).unwrap(), BigInt::from(12));
        assert_eq!(g.evaluate(-1).unwrap(), BigInt::from(8));
        assert_eq!(LaurentPoly::zero().evaluate(1).unwrap(), BigInt::zero());
        assert_eq!(LaurentPoly::zero().evaluate(-1).unwrap(), BigInt::zero());
        let q2 = LaurentPoly::quantum_integer(2).unwrap();
        assert_eq!(q2.evaluate(1).unwrap(), BigInt::from(2));
        assert_eq!(q2.evaluate(-1), Err(LaurentError::HalfIntegerAtMinusOne(-1)));
        assert_eq!(g.evaluate(2), Err(LaurentError::BadEvaluationPoint(2)));
    }

    #[test]
    fn display_and_parse() {
        let g = p("6q^-2+64q^-1+256+64q+6q^2");
        assert_eq!(g.to_string(), "6q^-2 + 64q^-1 + 256 + 64q + 6q^2");
        assert_eq!(p(&g.to_string()), g);
        assert_eq!(p("-q + 3").to_string(), "3 - q");
        assert_eq!(p("q^(1/2) + q^(-1/2)"), LaurentPoly::quantum_integer(2).unwrap());
        assert_eq!(p("0"), LaurentPoly::zero());
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("3x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_form() {
        let g = p("q^-1 + 10 + q");
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"-1":1,"0":10,"1":1}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let big = LaurentPoly::constant(BigInt::from(i64::MAX) * 4);
        let back: LaurentPoly = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn palindromic_and_degree() {
        assert!(p("q^-1 + 10 + q").is_palindromic());
        assert!(!p("q^-1 + 10").is_palindromic());
        assert_eq!(p("q^-3 + 1 + q^3").degree(), Some(3));
        assert_eq!(LaurentPoly::zero().degree(), None);
    }
}
