//! Complete residuated lattices on the rational unit interval.
//!
//! Every degree is an exact [`Degree`] in `[0, 1] ∩ ℚ`. The three standard
//! continuous t-norms (Gödel, Łukasiewicz, product) are closed on rationals,
//! so comparisons and fixpoint stabilization are decided exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact truth degree in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(BigRational);

impl Degree {
    pub fn zero() -> Self {
        Degree(BigRational::zero())
    }

    pub fn one() -> Self {
        Degree(BigRational::one())
    }

    /// Builds `numer / denom`, rejecting a zero denominator and values
    /// outside the unit interval.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidDegree {
                literal: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_rational(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::InvalidDegree {
                literal: value.to_string(),
                reason: "outside [0,1]".into(),
            });
        }
        Ok(Degree(value))
    }

    /// Unchecked constructor for results of closed lattice operations.
    fn raw(value: BigRational) -> Self {
        debug_assert!(!value.is_negative() && value <= BigRational::one());
        Degree(value)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Lossy conversion, for display only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for Degree {
    fn default() -> Self {
        Degree::zero()
    }
}

/// Canonical `p/q` form; `0` and `1` print without a denominator.
impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Degree {
    type Err = Error;

    /// Accepts `p/q`, plain integers and finite decimals (`0.7` is read as
    /// exactly `7/10`).
    fn from_str(s: &str) -> Result<Self> {
        let literal = s.trim();
        let bad = |reason: &str| Error::InvalidDegree {
            literal: s.to_string(),
            reason: reason.to_string(),
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());

        let value = if let Some((p, q)) = literal.split_once('/') {
            let (p, q) = (p.trim(), q.trim());
            if !digits(p) || !digits(q) {
                return Err(bad("expected p/q with non-negative integers"));
            }
            let q: BigInt = q.parse().map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            BigRational::new(p.parse().map_err(|_| bad("bad numerator"))?, q)
        } else if let Some((int, frac)) = literal.split_once('.') {
            if !(digits(int) || int.is_empty()) || !digits(frac) {
                return Err(bad("expected a finite decimal"));
            }
            let int = if int.is_empty() { "0" } else { int };
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let whole: BigInt = int.parse().map_err(|_| bad("bad integer part"))?;
            let frac: BigInt = frac.parse().map_err(|_| bad("bad fraction part"))?;
            BigRational::new(whole * &scale + frac, scale)
        } else if digits(literal) {
            BigRational::from_integer(literal.parse().map_err(|_| bad("bad integer"))?)
        } else {
            return Err(bad("not a rational literal"));
        };

        Degree::from_rational(value).map_err(|_| bad("outside [0,1]"))
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A complete residuated lattice whose carrier is (a subset of) the rational
/// unit interval ordered linearly.
///
/// Implementors provide the monoid operation and its residuum; the lattice
/// operations are fixed by the linear order.
pub trait ResiduatedLattice {
    fn tnorm(&self, a: &Degree, b: &Degree) -> Degree;

    /// The right adjoint of [`tnorm`](Self::tnorm):
    /// `a ⊗ b ≤ c` iff `a ≤ b → c`.
    fn residuum(&self, a: &Degree, b: &Degree) -> Degree;

    /// Whether `⊗` coincides with the lattice meet.
    fn is_heyting(&self) -> bool;

    fn biresiduum(&self, a: &Degree, b: &Degree) -> Degree {
        meet(&self.residuum(a, b), &self.residuum(b, a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    #[serde(rename = "godel", alias = "goedel")]
    Goedel,
    Lukasiewicz,
    Product,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 3] = [LatticeKind::Goedel, LatticeKind::Lukasiewicz, LatticeKind::Product];
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeKind::Goedel => "godel",
            LatticeKind::Lukasiewicz => "lukasiewicz",
            LatticeKind::Product => "product",
        })
    }
}

impl FromStr for LatticeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "godel" | "goedel" | "gödel" | "min" => Ok(LatticeKind::Goedel),
            "lukasiewicz" | "łukasiewicz" => Ok(LatticeKind::Lukasiewicz),
            "product" | "goguen" => Ok(LatticeKind::Product),
            other => Err(format!("unknown lattice kind {other:?}")),
        }
    }
}

impl ResiduatedLattice for LatticeKind {
    fn tnorm(&self, a: &Degree, b: &Degree) -> Degree {
        match self {
            LatticeKind::Goedel => meet(a, b),
            LatticeKind::Lukasiewicz => {
                let s = &a.0 + &b.0 - BigRational::one();
                if s.is_positive() {
                    Degree::raw(s)
                } else {
                    Degree::zero()
                }
            }
            LatticeKind::Product => Degree::raw(&a.0 * &b.0),
        }
    }

    fn residuum(&self, a: &Degree, b: &Degree) -> Degree {
        if a <= b {
            return Degree::one();
        }
        match self {
            LatticeKind::Goedel => b.clone(),
            LatticeKind::Lukasiewicz => Degree::raw(BigRational::one() - &a.0 + &b.0),
            // a > b ≥ 0, so a is non-zero here
            LatticeKind::Product => Degree::raw(&b.0 / &a.0),
        }
    }

    fn is_heyting(&self) -> bool {
        matches!(self, LatticeKind::Goedel)
    }
}

pub fn meet(a: &Degree, b: &Degree) -> Degree {
    a.min(b).clone()
}

pub fn join(a: &Degree, b: &Degree) -> Degree {
    a.max(b).clone()
}

/// Infimum of a finite family; the empty infimum is `1`.
pub fn inf<I>(values: I) -> Degree
where
    I: IntoIterator<Item = Degree>,
{
    values.into_iter().min().unwrap_or_else(Degree::one)
}

/// Supremum of a finite family; the empty supremum is `0`.
pub fn sup<I>(values: I) -> Degree
where
    I: IntoIterator<Item = Degree>,
{
    values.into_iter().max().unwrap_or_else(Degree::zero)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn d(s: &str) -> Degree {
        s.parse().unwrap()
    }

    pub(crate) fn arb_degree() -> impl Strategy<Value = Degree> {
        (1i64..=12)
            .prop_flat_map(|q| (0..=q, Just(q)))
            .prop_map(|(p, q)| Degree::new(p, q).unwrap())
    }

    fn arb_kind() -> impl Strategy<Value = LatticeKind> {
        prop_oneof![
            Just(LatticeKind::Goedel),
            Just(LatticeKind::Lukasiewicz),
            Just(LatticeKind::Product)
        ]
    }

    #[test]
    fn tnorm_table() {
        use LatticeKind::*;
        assert_eq!(Goedel.tnorm(&d("0.7"), &d("0.6")), d("0.6"));
        assert_eq!(Lukasiewicz.tnorm(&d("0.7"), &d("0.6")), d("0.3"));
        assert_eq!(Product.tnorm(&d("0.6"), &d("7/8")), d("21/40"));
        for k in LatticeKind::ALL {
            assert_eq!(k.tnorm(&d("0.37"), &Degree::zero()), Degree::zero());
            assert_eq!(k.tnorm(&d("0.37"), &Degree::one()), d("0.37"));
        }
        assert_eq!(Lukasiewicz.tnorm(&d("0.3"), &d("0.5")), Degree::zero());
    }

    #[test]
    fn residuum_table() {
        use LatticeKind::*;
        assert_eq!(Goedel.residuum(&d("0.7"), &d("0.6")), d("0.6"));
        assert_eq!(Product.residuum(&d("0.8"), &d("0.7")), d("7/8"));
        assert_eq!(Lukasiewicz.residuum(&d("0.7"), &d("0.6")), d("0.9"));
        for k in LatticeKind::ALL {
            assert_eq!(k.residuum(&d("2/3"), &d("2/3")), Degree::one());
            assert_eq!(k.residuum(&Degree::one(), &Degree::zero()), Degree::zero());
        }
    }

    #[test]
    fn biresiduum_values() {
        use LatticeKind::*;
        assert_eq!(Goedel.biresiduum(&d("0.7"), &d("0.6")), d("0.6"));
        assert_eq!(Lukasiewicz.biresiduum(&d("0.3"), &d("0.5")), d("0.8"));
        assert_eq!(Product.biresiduum(&d("0.4"), &d("0.4")), Degree::one());
    }

    #[test]
    fn inf_sup_conventions() {
        assert_eq!(inf(vec![d("0.6"), d("0.7"), d("1")]), d("0.6"));
        assert_eq!(inf(Vec::new()), Degree::one());
        assert_eq!(sup(Vec::new()), Degree::zero());
        assert_eq!(join(&d("0.5"), &d("0.8")), d("0.8"));
        assert_eq!(meet(&d("0.5"), &d("0.8")), d("0.5"));
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(d("0.7"), Degree::new(7, 10).unwrap());
        assert_eq!(d(" 14/20 "), Degree::new(7, 10).unwrap());
        assert_eq!(d("1"), Degree::one());
        assert_eq!(d("1.000"), Degree::one());
        assert_eq!(d(".25"), Degree::new(1, 4).unwrap());
        for bad in ["3/2", "-0.1", "1.5", "1/0", "abc", "", "0.7e1", "sqrt(2)", "1/-2"] {
            assert!(bad.parse::<Degree>().is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(d("0.6").to_string(), "3/5");
        assert_eq!(d("36/49").to_string(), "36/49");
        assert_eq!(Degree::one().to_string(), "1");
        assert_eq!(Degree::zero().to_string(), "0");
    }

    #[test]
    fn kind_names() {
        for k in LatticeKind::ALL {
            assert_eq!(k.to_string().parse::<LatticeKind>().unwrap(), k);
        }
        assert_eq!(serde_json::to_string(&LatticeKind::Goedel).unwrap(), "\"godel\"");
        assert!("heyting".parse::<LatticeKind>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn adjunction(k in arb_kind(), a in arb_degree(), b in arb_degree(), c in arb_degree()) {
            prop_assert_eq!(k.tnorm(&a, &b) <= c, a <= k.residuum(&b, &c));
        }

        #[test]
        fn commutative_monoid(k in arb_kind(), a in arb_degree(), b in arb_degree(), c in arb_degree()) {
            prop_assert_eq!(k.tnorm(&a, &b), k.tnorm(&b, &a));
            prop_assert_eq!(k.tnorm(&k.tnorm(&a, &b), &c), k.tnorm(&a, &k.tnorm(&b, &c)));
            prop_assert_eq!(k.tnorm(&a, &Degree::one()), a);
        }

        #[test]
        fn monotonicity(k in arb_kind(), a in arb_degree(), a2 in arb_degree(), b in arb_degree(), b2 in arb_degree()) {
            let (lo_a, hi_a) = if a <= a2 { (&a, &a2) } else { (&a2, &a) };
            let (lo_b, hi_b) = if b <= b2 { (&b, &b2) } else { (&b2, &b) };
            prop_assert!(k.tnorm(lo_a, lo_b) <= k.tnorm(hi_a, hi_b));
            prop_assert!(k.residuum(hi_a, lo_b) <= k.residuum(lo_a, hi_b));
        }

        #[test]
        fn residuum_one_iff_le(k in arb_kind(), a in arb_degree(), b in arb_degree()) {
            prop_assert_eq!(k.residuum(&a, &b).is_one(), a <= b);
            prop_assert_eq!(k.biresiduum(&a, &b).is_one(), a == b);
        }

        #[test]
        fn modus_ponens_and_exchange(k in arb_kind(), a in arb_degree(), b in arb_degree(), c in arb_degree()) {
            prop_assert!(k.tnorm(&a, &Degree::zero()).is_zero());
            prop_assert!(k.tnorm(&a, &k.residuum(&a, &b)) <= b);
            prop_assert!(k.residuum(&a, &k.residuum(&b, &c)) <= k.residuum(&k.tnorm(&a, &b), &c));
            prop_assert!(k.tnorm(&a, &k.residuum(&b, &c)) <= k.residuum(&b, &k.tnorm(&a, &c)));
        }

        #[test]
        fn biresiduum_transfer(k in arb_kind(), a in arb_degree(), b in arb_degree(), c in arb_degree()) {
            let rhs = k.biresiduum(&k.biresiduum(&c, &a), &k.biresiduum(&c, &b));
            prop_assert!(k.biresiduum(&a, &b) <= rhs);
        }

        #[test]
        fn finite_distributivity(
            k in arb_kind(),
            a in arb_degree(),
            bs in prop::collection::vec(arb_degree(), 0..6),
        ) {
            let lhs = k.tnorm(&a, &sup(bs.clone()));
            prop_assert_eq!(lhs, sup(bs.iter().map(|b| k.tnorm(&a, b))));
            let lhs = k.residuum(&sup(bs.clone()), &a);
            prop_assert_eq!(lhs, inf(bs.iter().map(|b| k.residuum(b, &a))));
        }

        #[test]
        fn continuity_over_finite_infima(
            k in arb_kind(),
            a in arb_degree(),
            bs in prop::collection::vec(arb_degree(), 1..6),
        ) {
            prop_assert_eq!(k.tnorm(&a, &inf(bs.clone())), inf(bs.iter().map(|b| k.tnorm(&a, b))));
        }

        #[test]
        fn display_roundtrip(a in arb_degree()) {
            prop_assert_eq!(a.to_string().parse::<Degree>().unwrap(), a);
        }
    }
}
