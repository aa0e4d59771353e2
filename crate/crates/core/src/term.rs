//! Canonical term algebra for the function class closed under the model's
//! operators.
//!
//! Every function is a finite sum of terms
//!
//! ```text
//!     coeff * x1^a * x2^eps * r^c * exp(-s r),      r^2 = x1^2 + x2^2
//! ```
//!
//! with exact rational `coeff` and `s >= 0`, integer `a >= 0`, `c` of either
//! sign, and `eps` restricted to 0 or 1. Higher powers of `x2` are rewritten
//! with `x2^2 = r^2 - x1^2`, which makes the representation canonical: two
//! sums are equal as functions iff they have identical term maps. Dunkl
//! derivatives, reflections, multiplication by coordinates, `1/r`, and
//! `exp(-s r)` all stay inside the class.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Canonical monomial key `x1^a * x2^eps * r^c * exp(-s r)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub a: u32,
    pub eps: u8,
    pub c: i32,
    pub s: Rational,
}

/// Pre-canonical term with an unrestricted `x2` power.
#[derive(Debug, Clone)]
pub struct RawTerm {
    pub coeff: Rational,
    pub a: u32,
    pub b: u32,
    pub c: i32,
    pub s: Rational,
}

/// Reflection axes: `X1` sends `x1 -> -x1`, `X2` sends `x2 -> -x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// A function in the canonical class, stored as a sorted term map with no
/// zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctionExpr {
    terms: BTreeMap<TermKey, Rational>,
}

impl FunctionExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(coeff: Rational) -> Self {
        Self::term(coeff, 0, 0, 0, Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// Single canonical term. Panics if `eps > 1` or `s < 0`; use
    /// [`FunctionExpr::from_raw_terms`] for unnormalized input.
    pub fn term(coeff: Rational, a: u32, eps: u8, c: i32, s: Rational) -> Self {
        assert!(eps <= 1, "eps must be 0 or 1");
        assert!(!s.is_negative(), "decay rate must be nonnegative");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(TermKey { a, eps, c, s }, coeff);
        }
        FunctionExpr { terms }
    }

    /// Canonicalize a list of raw terms, expanding even `x2` powers through
    /// `x2^2 = r^2 - x1^2` and merging duplicates.
    pub fn from_raw_terms<I: IntoIterator<Item = RawTerm>>(raw: I) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for t in raw {
            if t.s.is_negative() {
                return Err(Error::NonPositiveDecay(t.s.to_string()));
            }
            push_raw(&mut terms, t);
        }
        Ok(FunctionExpr { terms })
    }

    /// Canonicalization path for operator output, where decay rates are
    /// inherited from the input and cannot turn negative.
    pub(crate) fn from_raw_terms_unchecked<I: IntoIterator<Item = RawTerm>>(raw: I) -> Self {
        let mut terms = BTreeMap::new();
        for t in raw {
            debug_assert!(!t.s.is_negative());
            push_raw(&mut terms, t);
        }
        FunctionExpr { terms }
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

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v * factor))
            .collect();
        FunctionExpr { terms }
    }

    /// Product of two expressions; `eps` overflow is renormalized.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                push_raw(
                    &mut terms,
                    RawTerm {
                        coeff: v1 * v2,
                        a: k1.a + k2.a,
                        b: (k1.eps + k2.eps) as u32,
                        c: k1.c + k2.c,
                        s: &k1.s + &k2.s,
                    },
                );
            }
        }
        FunctionExpr { terms }
    }

    pub fn reflect(&self, axis: Axis) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                let flip = match axis {
                    Axis::X1 => k.a % 2 == 1,
                    Axis::X2 => k.eps == 1,
                };
                (k.clone(), if flip { -v } else { v.clone() })
            })
            .collect();
        FunctionExpr { terms }
    }

    /// Rescale coordinates `x -> lambda x` with `lambda > 0`.
    pub fn dilate(&self, lambda: &Rational) -> Self {
        assert!(
            !lambda.is_zero() && !lambda.is_negative(),
            "dilation factor must be positive"
        );
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| {
                let degree = k.a as i32 + k.eps as i32 + k.c;
                let key = TermKey {
                    a: k.a,
                    eps: k.eps,
                    c: k.c,
                    s: &k.s * lambda,
                };
                (key, v * &lambda.pow(degree))
            })
            .collect();
        FunctionExpr { terms }
    }

    pub fn evaluate(&self, x1: f64, x2: f64) -> Result<f64> {
        let r = x1.hypot(x2);
        let mut acc = 0.0;
        for (k, v) in &self.terms {
            if r == 0.0 && k.c < 0 {
                return Err(Error::SingularEvaluation { exponent: k.c });
            }
            let mut val = v.to_f64() * x1.powi(k.a as i32) * r.powi(k.c);
            if k.eps == 1 {
                val *= x2;
            }
            if !k.s.is_zero() {
                val *= (-k.s.to_f64() * r).exp();
            }
            acc += val;
        }
        Ok(acc)
    }

    fn add_scaled(&self, other: &Self, sign: i64) -> Self {
        let mut terms = self.terms.clone();
        let sign = Rational::from_int(sign);
        for (k, v) in &other.terms {
            accumulate(&mut terms, k.clone(), v * &sign);
        }
        FunctionExpr { terms }
    }
}

fn accumulate(terms: &mut BTreeMap<TermKey, Rational>, key: TermKey, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    let entry = terms.entry(key);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += &coeff;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn push_raw(terms: &mut BTreeMap<TermKey, Rational>, t: RawTerm) {
    if t.coeff.is_zero() {
        return;
    }
    let q = t.b / 2;
    let eps = (t.b % 2) as u8;
    for j in 0..=q {
        let bin = num_integer::binomial(BigInt::from(q), BigInt::from(j));
        let mut coeff = &t.coeff * &Rational::from_big(BigRational::from_integer(bin));
        if (q - j) % 2 == 1 {
            coeff = -coeff;
        }
        let key = TermKey {
            a: t.a + 2 * (q - j),
            eps,
            c: t.c + 2 * j as i32,
            s: t.s.clone(),
        };
        accumulate(terms, key, coeff);
    }
}

impl std::ops::Add for &FunctionExpr {
    type Output = FunctionExpr;
    fn add(self, rhs: &FunctionExpr) -> FunctionExpr {
        self.add_scaled(rhs, 1)
    }
}

impl std::ops::Sub for &FunctionExpr {
    type Output = FunctionExpr;
    fn sub(self, rhs: &FunctionExpr) -> FunctionExpr {
        self.add_scaled(rhs, -1)
    }
}

impl std::ops::Neg for &FunctionExpr {
    type Output = FunctionExpr;
    fn neg(self) -> FunctionExpr {
        self.scale(&Rational::from_int(-1))
    }
}

impl fmt::Display for FunctionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{v}")?;
            if k.a > 0 {
                write!(f, "*x1^{}", k.a)?;
            }
            if k.eps == 1 {
                write!(f, "*x2")?;
            }
            if k.c != 0 {
                write!(f, "*r^{}", k.c)?;
            }
            if !k.s.is_zero() {
                write!(f, "*exp(-{} r)", k.s)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: Rational,
    a: u32,
    eps: u8,
    c: i32,
    s: Rational,
}

#[derive(Serialize, Deserialize)]
struct ExprJson {
    terms: Vec<TermJson>,
}

impl Serialize for FunctionExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| TermJson {
                coeff: v.clone(),
                a: k.a,
                eps: k.eps,
                c: k.c,
                s: k.s.clone(),
            })
            .collect();
        ExprJson { terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FunctionExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = ExprJson::deserialize(deserializer)?;
        let mut raw = Vec::with_capacity(json.terms.len());
        for t in json.terms {
            if t.eps > 1 {
                return Err(D::Error::custom(format!("eps must be 0 or 1, got {}", t.eps)));
            }
            raw.push(RawTerm {
                coeff: t.coeff,
                a: t.a,
                b: t.eps as u32,
                c: t.c,
                s: t.s,
            });
        }
        FunctionExpr::from_raw_terms(raw).map_err(|e| D::Error::custom(format!("{e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn cube_of_x2_canonicalizes() {
        let raw = RawTerm {
            coeff: Rational::one(),
            a: 0,
            b: 3,
            c: 0,
            s: Rational::zero(),
        };
        let expr = FunctionExpr::from_raw_terms([raw]).unwrap();
        let expected = &FunctionExpr::term(Rational::one(), 0, 1, 2, Rational::zero())
            - &FunctionExpr::term(Rational::one(), 2, 1, 0, Rational::zero());
        assert_eq!(expr, expected);
    }

    #[test]
    fn x2_squared_via_mul() {
        let x2 = FunctionExpr::term(Rational::one(), 0, 1, 0, Rational::zero());
        let sq = x2.mul(&x2);
        let expected = &FunctionExpr::term(Rational::one(), 0, 0, 2, Rational::zero())
            - &FunctionExpr::term(Rational::one(), 2, 0, 0, Rational::zero());
        assert_eq!(sq, expected);
    }

    #[test]
    fn negative_decay_rejected() {
        let raw = RawTerm {
            coeff: Rational::one(),
            a: 0,
            b: 0,
            c: 0,
            s: rat(-1, 2),
        };
        assert!(matches!(
            FunctionExpr::from_raw_terms([raw]),
            Err(Error::NonPositiveDecay(_))
        ));
    }

    #[test]
    fn singular_evaluation_at_origin() {
        let expr = FunctionExpr::term(Rational::one(), 0, 0, -1, Rational::zero());
        assert!(matches!(
            expr.evaluate(0.0, 0.0),
            Err(Error::SingularEvaluation { exponent: -1 })
        ));
        let poly = FunctionExpr::term(Rational::one(), 0, 0, 2, Rational::zero());
        assert_eq!(poly.evaluate(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn reflect_flips_odd_factors() {
        let expr = &FunctionExpr::term(rat(1, 2), 3, 1, 0, Rational::zero())
            + &FunctionExpr::term(rat(2, 1), 2, 0, -1, Rational::one());
        let r1 = expr.reflect(Axis::X1);
        let val = expr.evaluate(0.7, -0.3).unwrap();
        let val_r1 = r1.evaluate(-0.7, -0.3).unwrap();
        assert!((val - val_r1).abs() < 1e-14);
        assert_eq!(r1.reflect(Axis::X1), expr);
    }

    #[test]
    fn json_shape_matches_interface() {
        let expr = &FunctionExpr::term(rat(3, 2), 2, 1, -1, Rational::zero())
            + &FunctionExpr::term(rat(-1, 3), 0, 0, 0, rat(1, 2));
        let value = serde_json::to_value(&expr).unwrap();
        let expected = serde_json::json!({
            "terms": [
                {"coeff": "-1/3", "a": 0, "eps": 0, "c": 0, "s": "1/2"},
                {"coeff": "3/2", "a": 2, "eps": 1, "c": -1, "s": "0/1"},
            ]
        });
        assert_eq!(value, expected);
        let back: FunctionExpr = serde_json::from_value(value).unwrap();
        assert_eq!(back, expr);
    }

    #[test]
    fn json_rejects_bad_eps() {
        let text = r#"{"terms":[{"coeff":"1/1","a":0,"eps":2,"c":0,"s":"0/1"}]}"#;
        assert!(serde_json::from_str::<FunctionExpr>(text).is_err());
    }

    #[test]
    fn json_merges_duplicate_keys() {
        let text = r#"{"terms":[
            {"coeff":"1/2","a":1,"eps":0,"c":0,"s":"0/1"},
            {"coeff":"1/2","a":1,"eps":0,"c":0,"s":"0/1"}
        ]}"#;
        let expr: FunctionExpr = serde_json::from_str(text).unwrap();
        assert_eq!(
            expr,
            FunctionExpr::term(Rational::one(), 1, 0, 0, Rational::zero())
        );
    }

    #[test]
    fn distinct_keys_are_linearly_independent() {
        let zero = Rational::zero;
        let basis = [
            FunctionExpr::term(Rational::one(), 0, 0, 0, zero()),
            FunctionExpr::term(Rational::one(), 2, 0, 0, zero()),
            FunctionExpr::term(Rational::one(), 0, 1, 0, zero()),
            FunctionExpr::term(Rational::one(), 0, 0, 1, zero()),
            FunctionExpr::term(Rational::one(), 2, 0, -2, zero()),
            FunctionExpr::term(Rational::one(), 0, 0, 0, rat(1, 2)),
        ];
        let points = [
            (0.3, 0.7),
            (1.1, -0.4),
            (-0.8, 0.9),
            (0.5, 1.3),
            (-1.2, -0.6),
            (0.9, 0.2),
        ];
        let n = basis.len();
        let mut m: Vec<Vec<f64>> = points
            .iter()
            .map(|&(x1, x2)| basis.iter().map(|b| b.evaluate(x1, x2).unwrap()).collect())
            .collect();
        let scale = m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).max_by(|&i, &j| {
                m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
            });
            let Some(p) = pivot else { break };
            if m[p][col].abs() <= 1e-9 * scale {
                continue;
            }
            m.swap(rank, p);
            let pivot_row = m[rank].clone();
            for row in m.iter_mut().skip(rank + 1) {
                let f = row[col] / pivot_row[col];
                for (j, entry) in row.iter_mut().enumerate().skip(col) {
                    *entry -= f * pivot_row[j];
                }
            }
            rank += 1;
        }
        assert_eq!(rank, n);
    }

    fn coeff_strategy() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(p, q)| Rational::new(p, q))
    }

    fn decay_strategy() -> impl Strategy<Value = Rational> {
        prop_oneof![
            Just(Rational::zero()),
            Just(rat(1, 2)),
            Just(Rational::one()),
            Just(rat(3, 2)),
        ]
    }

    fn raw_terms_strategy() -> impl Strategy<Value = Vec<RawTerm>> {
        let term = (coeff_strategy(), 0u32..=6, 0u32..=7, -5i32..=5, decay_strategy()).prop_map(
            |(coeff, a, b, c, s)| RawTerm { coeff, a, b, c, s },
        );
        proptest::collection::vec(term, 1..6)
    }

    fn eval_raw(raw: &[RawTerm], x1: f64, x2: f64) -> (f64, f64) {
        let r = x1.hypot(x2);
        let mut acc = 0.0;
        let mut magnitude = 0.0;
        for t in raw {
            let v = t.coeff.to_f64()
                * x1.powi(t.a as i32)
                * x2.powi(t.b as i32)
                * r.powi(t.c)
                * (-t.s.to_f64() * r).exp();
            acc += v;
            magnitude += v.abs();
        }
        (acc, magnitude)
    }

    proptest! {
        #[test]
        fn canonicalization_preserves_values(
            raw in raw_terms_strategy(),
            sx in prop_oneof![Just(-1.0), Just(1.0)],
            sy in prop_oneof![Just(-1.0), Just(1.0)],
            mx in 0.1f64..1.8,
            my in 0.1f64..1.8,
        ) {
            let expr = FunctionExpr::from_raw_terms(raw.clone()).unwrap();
            let (x1, x2) = (sx * mx, sy * my);
            let (direct, magnitude) = eval_raw(&raw, x1, x2);
            let canonical = expr.evaluate(x1, x2).unwrap();
            prop_assert!(
                (canonical - direct).abs() <= 1e-10 * (1.0 + magnitude),
                "canonical {canonical} vs direct {direct}"
            );
        }

        #[test]
        fn rewrite_by_r_squared_split_is_invariant(raw in raw_terms_strategy()) {
            let expr = FunctionExpr::from_raw_terms(raw).unwrap();
            // Replace every term's r^c by r^{c-2} (x1^2 + x2^2); the
            // canonical form must not change.
            let rewritten: Vec<RawTerm> = expr
                .iter()
                .flat_map(|(k, v)| {
                    [
                        RawTerm {
                            coeff: v.clone(),
                            a: k.a + 2,
                            b: k.eps as u32,
                            c: k.c - 2,
                            s: k.s.clone(),
                        },
                        RawTerm {
                            coeff: v.clone(),
                            a: k.a,
                            b: k.eps as u32 + 2,
                            c: k.c - 2,
                            s: k.s.clone(),
                        },
                    ]
                })
                .collect();
            let back = FunctionExpr::from_raw_terms(rewritten).unwrap();
            prop_assert_eq!(back, expr);
        }

        #[test]
        fn reflection_is_an_involution(raw in raw_terms_strategy()) {
            let expr = FunctionExpr::from_raw_terms(raw).unwrap();
            prop_assert_eq!(expr.reflect(Axis::X1).reflect(Axis::X1), expr.clone());
            prop_assert_eq!(expr.reflect(Axis::X2).reflect(Axis::X2), expr);
        }

        #[test]
        fn dilation_round_trip(raw in raw_terms_strategy(), p in 1i64..=6, q in 1i64..=6) {
            let expr = FunctionExpr::from_raw_terms(raw).unwrap();
            let lambda = Rational::new(p, q);
            let back = expr.dilate(&lambda).dilate(&lambda.recip());
            prop_assert_eq!(back, expr);
        }

        #[test]
        fn serde_round_trip(raw in raw_terms_strategy()) {
            let expr = FunctionExpr::from_raw_terms(raw).unwrap();
            let text = serde_json::to_string(&expr).unwrap();
            let back: FunctionExpr = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, expr);
        }
    }
}
