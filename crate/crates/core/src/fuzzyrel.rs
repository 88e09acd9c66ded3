//! Finite-support fuzzy sets and fuzzy relations.
//!
//! Both containers are kept in canonical sparse form: a zero degree is never
//! stored, so structural equality coincides with semantic equality.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{inf, join, meet, Degree, ResiduatedLattice};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FuzzySet {
    entries: BTreeMap<String, Degree>,
}

impl FuzzySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The crisp singleton `{x:1}`.
    pub fn singleton(x: impl Into<String>) -> Self {
        let mut set = Self::new();
        set.set(x, Degree::one());
        set
    }

    pub fn get(&self, x: &str) -> Degree {
        self.entries.get(x).cloned().unwrap_or_default()
    }

    /// Sets the degree of `x`; a zero degree removes the entry.
    pub fn set(&mut self, x: impl Into<String>, degree: Degree) {
        let x = x.into();
        if degree.is_zero() {
            self.entries.remove(&x);
        } else {
            self.entries.insert(x, degree);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Degree)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Pointwise `self ≤ other`.
    pub fn leq(&self, other: &FuzzySet) -> bool {
        self.iter().all(|(x, a)| *a <= other.get(x))
    }

    /// `λ ∧ f`.
    pub fn scalar_meet(&self, lambda: &Degree) -> FuzzySet {
        self.iter().map(|(x, a)| (x.to_string(), meet(lambda, a))).collect()
    }
}

impl FromIterator<(String, Degree)> for FuzzySet {
    fn from_iter<T: IntoIterator<Item = (String, Degree)>>(iter: T) -> Self {
        let mut set = FuzzySet::new();
        for (x, a) in iter {
            set.set(x, a);
        }
        set
    }
}

impl Serialize for FuzzySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FuzzySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = BTreeMap::<String, Degree>::deserialize(deserializer)?;
        Ok(entries.into_iter().collect())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FuzzyRelation {
    entries: BTreeMap<(String, String), Degree>,
}

impl FuzzyRelation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity<'a, I>(universe: I) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        universe
            .into_iter()
            .map(|x| ((x.to_string(), x.to_string()), Degree::one()))
            .collect()
    }

    pub fn get(&self, x: &str, y: &str) -> Degree {
        // BTreeMap lookups need an owned key tuple
        self.entries
            .get(&(x.to_string(), y.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn set(&mut self, x: impl Into<String>, y: impl Into<String>, degree: Degree) {
        let key = (x.into(), y.into());
        if degree.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, degree);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &Degree)> {
        self.entries.iter().map(|((x, y), a)| (x.as_str(), y.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Elements appearing as a first component.
    pub fn domain(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(x, _)| x.as_str()).collect()
    }

    /// Elements appearing as a second component.
    pub fn range(&self) -> BTreeSet<&str> {
        self.entries.keys().map(|(_, y)| y.as_str()).collect()
    }

    pub fn converse(&self) -> FuzzyRelation {
        self.iter()
            .map(|(x, y, a)| ((y.to_string(), x.to_string()), a.clone()))
            .collect()
    }

    pub fn leq(&self, other: &FuzzyRelation) -> bool {
        self.iter().all(|(x, y, a)| *a <= other.get(x, y))
    }

    pub fn scalar_meet(&self, lambda: &Degree) -> FuzzyRelation {
        self.iter()
            .map(|(x, y, a)| ((x.to_string(), y.to_string()), meet(lambda, a)))
            .collect()
    }

    /// Rows of the relation grouped by first component.
    fn rows(&self) -> BTreeMap<&str, Vec<(&str, &Degree)>> {
        let mut rows: BTreeMap<&str, Vec<(&str, &Degree)>> = BTreeMap::new();
        for (x, y, a) in self.iter() {
            rows.entry(x).or_default().push((y, a));
        }
        rows
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::json("relation", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("relation serialization is infallible")
    }
}

impl FromIterator<((String, String), Degree)> for FuzzyRelation {
    fn from_iter<T: IntoIterator<Item = ((String, String), Degree)>>(iter: T) -> Self {
        let mut rel = FuzzyRelation::new();
        for ((x, y), a) in iter {
            rel.set(x, y, a);
        }
        rel
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    from: String,
    to: String,
    degree: Degree,
}

impl Serialize for FuzzyRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(x, y, a)| RelationEntry {
            from: x.to_string(),
            to: y.to_string(),
            degree: a.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for FuzzyRelation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<RelationEntry>::deserialize(deserializer)?;
        let mut seen = BTreeSet::new();
        let mut rel = FuzzyRelation::new();
        for RelationEntry { from, to, degree } in raw {
            if !seen.insert((from.clone(), to.clone())) {
                return Err(serde::de::Error::custom(format!(
                    "duplicate relation entry ({from}, {to})"
                )));
            }
            rel.set(from, to, degree);
        }
        Ok(rel)
    }
}

/// Degree to which `f` is a subset of `g`.
pub fn subsethood<L: ResiduatedLattice + ?Sized>(lat: &L, f: &FuzzySet, g: &FuzzySet) -> Degree {
    // outside both supports the term is 0 → 0 = 1
    let keys: BTreeSet<&str> = f.support().chain(g.support()).collect();
    inf(keys.into_iter().map(|x| lat.residuum(&f.get(x), &g.get(x))))
}

/// Degree to which `f` equals `g`.
pub fn equality<L: ResiduatedLattice + ?Sized>(lat: &L, f: &FuzzySet, g: &FuzzySet) -> Degree {
    let keys: BTreeSet<&str> = f.support().chain(g.support()).collect();
    inf(keys.into_iter().map(|x| lat.biresiduum(&f.get(x), &g.get(x))))
}

/// Degree to which relation `phi` is contained in `psi`.
pub fn relation_subsethood<L: ResiduatedLattice + ?Sized>(lat: &L, phi: &FuzzyRelation, psi: &FuzzyRelation) -> Degree {
    // only pairs in the support of phi can give a value below 1
    inf(phi.iter().map(|(x, y, a)| lat.residuum(a, &psi.get(x, y))))
}

/// `(φ ∘ ψ)(x,z) = ⋁_y φ(x,y) ⊗ ψ(y,z)`.
pub fn compose<L: ResiduatedLattice + ?Sized>(lat: &L, phi: &FuzzyRelation, psi: &FuzzyRelation) -> FuzzyRelation {
    let psi_rows = psi.rows();
    let mut out: BTreeMap<(String, String), Degree> = BTreeMap::new();
    for (x, y, a) in phi.iter() {
        let Some(row) = psi_rows.get(y) else { continue };
        for (z, b) in row {
            let v = lat.tnorm(a, b);
            if v.is_zero() {
                continue;
            }
            out.entry((x.to_string(), z.to_string()))
                .and_modify(|cur| *cur = join(cur, &v))
                .or_insert(v);
        }
    }
    FuzzyRelation { entries: out }
}

/// `(f ∘ φ)(y) = ⋁_x f(x) ⊗ φ(x,y)`.
pub fn compose_set_rel<L: ResiduatedLattice + ?Sized>(lat: &L, f: &FuzzySet, phi: &FuzzyRelation) -> FuzzySet {
    let rows = phi.rows();
    let mut out = FuzzySet::new();
    for (x, a) in f.iter() {
        for (y, b) in rows.get(x).into_iter().flatten() {
            let v = join(&out.get(y), &lat.tnorm(a, b));
            out.set(*y, v);
        }
    }
    out
}

/// `(φ ∘ g)(x) = ⋁_y φ(x,y) ⊗ g(y)`.
pub fn compose_rel_set<L: ResiduatedLattice + ?Sized>(lat: &L, phi: &FuzzyRelation, g: &FuzzySet) -> FuzzySet {
    let mut out = FuzzySet::new();
    for (x, y, a) in phi.iter() {
        let b = g.get(y);
        if b.is_zero() {
            continue;
        }
        let v = join(&out.get(x), &lat.tnorm(a, &b));
        out.set(x, v);
    }
    out
}

/// `f ∘ g = ⋁_x f(x) ⊗ g(x)`, the scalar closing a language expression.
pub fn compose_set_set<L: ResiduatedLattice + ?Sized>(lat: &L, f: &FuzzySet, g: &FuzzySet) -> Degree {
    f.iter().map(|(x, a)| lat.tnorm(a, &g.get(x))).max().unwrap_or_default()
}

/// `⋃Φ`; the union of no relations is empty.
pub fn union<'a, I>(relations: I) -> FuzzyRelation
where
    I: IntoIterator<Item = &'a FuzzyRelation>,
{
    let mut out = FuzzyRelation::new();
    for rel in relations {
        for (x, y, a) in rel.iter() {
            let v = join(&out.get(x, y), a);
            out.set(x, y, v);
        }
    }
    out
}

pub fn is_reflexive<'a, I>(phi: &FuzzyRelation, universe: I) -> bool
where
    I: IntoIterator<Item = &'a str>,
{
    universe.into_iter().all(|x| phi.get(x, x).is_one())
}

pub fn is_symmetric(phi: &FuzzyRelation) -> bool {
    *phi == phi.converse()
}

pub fn is_transitive<L: ResiduatedLattice + ?Sized>(lat: &L, phi: &FuzzyRelation) -> bool {
    compose(lat, phi, phi).leq(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{arb_degree, d};
    use crate::lattice::LatticeKind::{self, Goedel};
    use proptest::prelude::*;

    fn set(pairs: &[(&str, &str)]) -> FuzzySet {
        pairs.iter().map(|(x, a)| (x.to_string(), d(a))).collect()
    }

    fn rel(triples: &[(&str, &str, &str)]) -> FuzzyRelation {
        triples
            .iter()
            .map(|(x, y, a)| ((x.to_string(), y.to_string()), d(a)))
            .collect()
    }

    #[test]
    fn zero_entries_are_dropped() {
        let f = set(&[("x", "0"), ("y", "0.5")]);
        assert_eq!(f.len(), 1);
        assert_eq!(f, set(&[("y", "1/2")]));
        let r = rel(&[("a", "b", "0")]);
        assert!(r.is_empty());
    }

    #[test]
    fn subsethood_examples() {
        assert_eq!(
            subsethood(&Goedel, &set(&[("x", "0.5")]), &set(&[("x", "0.7")])),
            Degree::one()
        );
        assert_eq!(
            subsethood(&Goedel, &set(&[("x", "0.7")]), &set(&[("x", "0.6")])),
            d("0.6")
        );
        assert_eq!(
            subsethood(&Goedel, &set(&[("x", "0.7"), ("y", "0.2")]), &set(&[("x", "0.6")])),
            Degree::zero()
        );
    }

    #[test]
    fn equality_examples() {
        let f = set(&[("x", "0.7"), ("z", "1/3")]);
        for k in LatticeKind::ALL {
            assert_eq!(equality(&k, &f, &f), Degree::one());
            assert_eq!(equality(&k, &set(&[("x", "1")]), &FuzzySet::new()), Degree::zero());
        }
        assert_eq!(
            equality(&Goedel, &set(&[("x", "0.7")]), &set(&[("x", "0.6")])),
            d("0.6")
        );
    }

    #[test]
    fn composition_examples() {
        let phi = rel(&[("u", "v", "0.5"), ("u", "w", "0.8")]);
        let psi = rel(&[("v", "a", "0.6"), ("w", "a", "0.7")]);
        assert_eq!(compose(&Goedel, &phi, &psi), rel(&[("u", "a", "0.7")]));
        assert!(compose(&Goedel, &phi, &FuzzyRelation::new()).is_empty());
        let id = FuzzyRelation::identity(["u", "v", "w"]);
        assert_eq!(compose(&Goedel, &id, &phi), phi);

        let sigma = set(&[("u", "0.7")]);
        assert_eq!(
            compose_set_rel(&Goedel, &sigma, &phi),
            set(&[("v", "0.5"), ("w", "0.7")])
        );
        assert_eq!(
            compose_set_rel(&Goedel, &sigma, &FuzzyRelation::identity(["u", "v"])),
            sigma
        );
        assert!(compose_set_rel(&Goedel, &FuzzySet::new(), &phi).is_empty());

        let tau = set(&[("v", "0.6"), ("w", "0.7")]);
        assert_eq!(compose_rel_set(&Goedel, &phi, &tau), set(&[("u", "0.7")]));
        assert_eq!(compose_set_set(&Goedel, &sigma, &tau), Degree::zero());
    }

    #[test]
    fn converse_union_scalar() {
        let phi = rel(&[("u", "v", "0.5"), ("u", "w", "0.8")]);
        assert_eq!(phi.converse().converse(), phi);
        assert_eq!(phi.converse().get("w", "u"), d("0.8"));
        assert!(union(std::iter::empty()).is_empty());
        assert_eq!(
            rel(&[("u", "u'", "1")]).scalar_meet(&d("0.6")),
            rel(&[("u", "u'", "0.6")])
        );
        assert_eq!(
            set(&[("x", "0.9"), ("y", "0.2")]).scalar_meet(&d("0.5")),
            set(&[("x", "0.5"), ("y", "0.2")])
        );
    }

    #[test]
    fn relation_shape_predicates() {
        let id = FuzzyRelation::identity(["x", "y"]);
        assert!(is_reflexive(&id, ["x", "y"]));
        assert!(is_symmetric(&id));
        assert!(is_transitive(&Goedel, &id));

        let r = rel(&[("x", "y", "1")]);
        assert!(!is_reflexive(&r, ["x", "y"]));
        assert!(!is_symmetric(&r));
    }

    #[test]
    fn json_schema() {
        let r = rel(&[("u", "u'", "0.7"), ("w", "v'", "3/5")]);
        let text = r.to_json();
        assert!(text.contains("\"from\": \"u\""));
        assert!(text.contains("\"degree\": \"7/10\""));
        assert_eq!(FuzzyRelation::from_json(&text).unwrap(), r);

        let dup = r#"[{"from":"a","to":"b","degree":"1"},{"from":"a","to":"b","degree":"1/2"}]"#;
        assert!(FuzzyRelation::from_json(dup).is_err());
        let out_of_range = r#"[{"from":"a","to":"b","degree":"3/2"}]"#;
        assert!(FuzzyRelation::from_json(out_of_range).is_err());
    }

    const UNIVERSE: [&str; 4] = ["a", "b", "c", "d"];

    fn arb_relation() -> impl Strategy<Value = FuzzyRelation> {
        prop::collection::vec(((0..4usize, 0..4usize), arb_degree()), 0..10).prop_map(|entries| {
            entries
                .into_iter()
                .map(|((i, j), a)| ((UNIVERSE[i].to_string(), UNIVERSE[j].to_string()), a))
                .collect()
        })
    }

    fn arb_set() -> impl Strategy<Value = FuzzySet> {
        prop::collection::vec((0..4usize, arb_degree()), 0..5)
            .prop_map(|entries| entries.into_iter().map(|(i, a)| (UNIVERSE[i].to_string(), a)).collect())
    }

    fn arb_kind() -> impl Strategy<Value = LatticeKind> {
        prop::sample::select(LatticeKind::ALL.to_vec())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn composition_is_associative(k in arb_kind(), p in arb_relation(), q in arb_relation(), r in arb_relation(), f in arb_set()) {
            prop_assert_eq!(compose(&k, &compose(&k, &p, &q), &r), compose(&k, &p, &compose(&k, &q, &r)));
            prop_assert_eq!(
                compose_set_rel(&k, &compose_set_rel(&k, &f, &p), &q),
                compose_set_rel(&k, &f, &compose(&k, &p, &q))
            );
            prop_assert_eq!(
                compose_rel_set(&k, &compose(&k, &p, &q), &f),
                compose_rel_set(&k, &p, &compose_rel_set(&k, &q, &f))
            );
        }

        #[test]
        fn converse_of_composition(k in arb_kind(), p in arb_relation(), q in arb_relation()) {
            prop_assert_eq!(compose(&k, &p, &q).converse(), compose(&k, &q.converse(), &p.converse()));
        }

        #[test]
        fn subsethood_one_iff_pointwise(k in arb_kind(), f in arb_set(), g in arb_set()) {
            prop_assert_eq!(subsethood(&k, &f, &g).is_one(), f.leq(&g));
            prop_assert_eq!(equality(&k, &f, &g).is_one(), f == g);
            prop_assert_eq!(equality(&k, &f, &g), meet(&subsethood(&k, &f, &g), &subsethood(&k, &g, &f)));
        }

        #[test]
        fn union_is_least_upper_bound(rs in prop::collection::vec(arb_relation(), 0..4), ub in arb_relation()) {
            let u = union(&rs);
            for r in &rs {
                prop_assert!(r.leq(&u));
            }
            if rs.iter().all(|r| r.leq(&ub)) {
                prop_assert!(u.leq(&ub));
            }
        }
    }
}
