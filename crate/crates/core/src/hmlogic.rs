//! Hennessy-Milner formulas over fuzzy automata.
//!
//! Formulas are built from the terminal set `T`, symbol steps `<s> f`,
//! constant guards `(a -> f)` / `(a <-> f)` and conjunctions `(f & g)`.
//! Over a linear lattice with continuous `⊗`, the greatest fuzzy simulation
//! is the infimum of `f(x) → f(x')` over all guard-by-implication formulas,
//! and the greatest fuzzy bisimulation the infimum of `f(x) ↔ f(x')` over
//! all guard-by-biresiduum formulas. This module evaluates formulas and
//! approximates those infima by bounded enumeration.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::FuzzyAutomaton;
use crate::error::{Error, Result};
use crate::fuzzyrel::{FuzzyRelation, FuzzySet};
use crate::lattice::{meet, Degree, ResiduatedLattice};
use crate::simrel::{greatest, RelationKind, DEFAULT_MAX_ITERS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Tau,
    Step(String, Box<Formula>),
    Implies(Degree, Box<Formula>),
    Iff(Degree, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
}

/// Which guards a formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    /// Guards `a → f` only; characterizes simulations.
    Sim,
    /// Guards `a ↔ f` only; characterizes bisimulations.
    Bisim,
}

impl Fragment {
    pub fn relation_kind(self) -> RelationKind {
        match self {
            Fragment::Sim => RelationKind::Simulation,
            Fragment::Bisim => RelationKind::Bisimulation,
        }
    }

    fn compare<L: ResiduatedLattice + ?Sized>(self, lat: &L, p: &Degree, q: &Degree) -> Degree {
        match self {
            Fragment::Sim => lat.residuum(p, q),
            Fragment::Bisim => lat.biresiduum(p, q),
        }
    }

    fn guard(self, a: Degree, f: Formula) -> Formula {
        match self {
            Fragment::Sim => Formula::Implies(a, Box::new(f)),
            Fragment::Bisim => Formula::Iff(a, Box::new(f)),
        }
    }
}

impl FromStr for Fragment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sim" => Ok(Fragment::Sim),
            "bisim" => Ok(Fragment::Bisim),
            other => Err(format!("unknown fragment {other:?} (expected sim or bisim)")),
        }
    }
}

impl Formula {
    pub fn step(symbol: impl Into<String>, f: Formula) -> Formula {
        Formula::Step(symbol.into(), Box::new(f))
    }

    pub fn implies(a: Degree, f: Formula) -> Formula {
        Formula::Implies(a, Box::new(f))
    }

    pub fn iff(a: Degree, f: Formula) -> Formula {
        Formula::Iff(a, Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    /// Nesting depth of symbol steps.
    pub fn step_depth(&self) -> usize {
        match self {
            Formula::Tau => 0,
            Formula::Step(_, f) => 1 + f.step_depth(),
            Formula::Implies(_, f) | Formula::Iff(_, f) => f.step_depth(),
            Formula::And(f, g) => f.step_depth().max(g.step_depth()),
        }
    }

    pub fn in_fragment(&self, fragment: Fragment) -> bool {
        match self {
            Formula::Tau => true,
            Formula::Step(_, f) => f.in_fragment(fragment),
            Formula::Implies(_, f) => fragment == Fragment::Sim && f.in_fragment(fragment),
            Formula::Iff(_, f) => fragment == Fragment::Bisim && f.in_fragment(fragment),
            Formula::And(f, g) => f.in_fragment(fragment) && g.in_fragment(fragment),
        }
    }

    pub fn symbols(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Tau => {}
            Formula::Step(s, f) => {
                out.insert(s);
                f.collect_symbols(out);
            }
            Formula::Implies(_, f) | Formula::Iff(_, f) => f.collect_symbols(out),
            Formula::And(f, g) => {
                f.collect_symbols(out);
                g.collect_symbols(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Tau => write!(f, "T"),
            Formula::Step(s, g) => write!(f, "<{s}> {g}"),
            Formula::Implies(a, g) => write!(f, "({a} -> {g})"),
            Formula::Iff(a, g) => write!(f, "({a} <-> {g})"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::FormulaSyntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.eat("T") || self.eat("τ") {
            return Ok(Formula::Tau);
        }
        if self.eat("<") {
            let end = self.rest().find('>').ok_or_else(|| self.error("unterminated symbol"))?;
            let symbol = self.rest()[..end].trim().to_string();
            if symbol.is_empty() {
                return Err(self.error("empty symbol"));
            }
            self.pos += end + 1;
            return Ok(Formula::step(symbol, self.formula()?));
        }
        if self.eat("(") {
            self.skip_ws();
            let starts_constant = self.rest().starts_with(|c: char| c.is_ascii_digit() || c == '.');
            let inner = if starts_constant {
                let start = self.pos;
                let len = self
                    .rest()
                    .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '/'))
                    .unwrap_or(self.rest().len());
                self.pos += len;
                let a: Degree = self.text[start..self.pos]
                    .parse()
                    .map_err(|e: Error| Error::FormulaSyntax {
                        position: start,
                        message: e.to_string(),
                    })?;
                if self.eat("<->") {
                    Formula::iff(a, self.formula()?)
                } else if self.eat("->") {
                    Formula::implies(a, self.formula()?)
                } else {
                    return Err(self.error("expected \"->\" or \"<->\" after constant"));
                }
            } else {
                let mut acc = self.formula()?;
                self.expect("&")?;
                acc = Formula::and(acc, self.formula()?);
                while self.eat("&") {
                    acc = Formula::and(acc, self.formula()?);
                }
                acc
            };
            self.expect(")")?;
            return Ok(inner);
        }
        Err(self.error("expected \"T\", \"<\" or \"(\""))
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(text: &str) -> Result<Formula> {
        let mut parser = Parser { text, pos: 0 };
        let f = parser.formula()?;
        parser.skip_ws();
        if parser.pos != text.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(f)
    }
}

/// `f` as a fuzzy set over the states of `a`.
pub fn eval_formula<L: ResiduatedLattice + ?Sized>(lat: &L, a: &FuzzyAutomaton, f: &Formula) -> Result<FuzzySet> {
    if let Some(s) = f.symbols().into_iter().find(|s| !a.has_symbol(s)) {
        return Err(Error::UnknownSymbol {
            context: format!("formula on automaton {}", a.name()),
            symbol: s.into(),
        });
    }
    Ok(eval_lenient(lat, a, f))
}

/// Evaluation where a symbol outside the alphabet has no transitions.
fn eval_lenient<L: ResiduatedLattice + ?Sized>(lat: &L, a: &FuzzyAutomaton, f: &Formula) -> FuzzySet {
    let pointwise = |g: &Formula, op: &dyn Fn(&Degree) -> Degree| -> FuzzySet {
        let inner = eval_lenient(lat, a, g);
        a.states().iter().map(|x| (x.clone(), op(&inner.get(x)))).collect()
    };
    match f {
        Formula::Tau => a.terminal().clone(),
        Formula::Step(s, g) => {
            let inner = eval_lenient(lat, a, g);
            let mut out = FuzzySet::new();
            if let Ok(delta) = a.delta(s) {
                for (x, y, d) in delta.iter() {
                    let v = lat.tnorm(d, &inner.get(y));
                    if v > out.get(x) {
                        out.set(x, v);
                    }
                }
            }
            out
        }
        Formula::Implies(c, g) => pointwise(g, &|v| lat.residuum(c, v)),
        Formula::Iff(c, g) => pointwise(g, &|v| lat.biresiduum(c, v)),
        Formula::And(g, h) => {
            let (fg, fh) = (eval_lenient(lat, a, g), eval_lenient(lat, a, h));
            a.states()
                .iter()
                .map(|x| (x.clone(), meet(&fg.get(x), &fh.get(x))))
                .collect()
        }
    }
}

/// Bounds on the enumeration behind [`hm_degree_bounded_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HmOptions {
    /// Maximum number of guard constants.
    pub pool_cap: usize,
    /// Maximum number of semantically distinct formulas kept. Past it the
    /// enumeration stops growing and the result stays an upper bound.
    pub formula_cap: usize,
    /// Iteration cap for the fixpoint used by [`hm_agreement`].
    pub max_iters: usize,
}

impl Default for HmOptions {
    fn default() -> Self {
        HmOptions {
            pool_cap: 64,
            formula_cap: 4_096,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// Formulas evaluated jointly on the disjoint union of two automata.
///
/// A formula is identified with its value vector (states of `a` first, then
/// states of `b`); only the first formula found for each vector is kept.
struct Enumeration<'a, L: ?Sized> {
    lat: &'a L,
    fragment: Fragment,
    options: &'a HmOptions,
    a: &'a FuzzyAutomaton,
    b: &'a FuzzyAutomaton,
    symbols: Vec<String>,
    /// `succ[symbol][state] -> [(state, degree)]` over joint indices.
    succ: Vec<Vec<Vec<(usize, Degree)>>>,
    base_values: BTreeSet<Degree>,
    /// Atoms and guarded atoms; the infimum is taken over these.
    units: Vec<(Vec<Degree>, Formula)>,
    unit_index: HashMap<Vec<Degree>, usize>,
    /// Closure of `units` under conjunction; steps are taken over these.
    conjunctions: Vec<(Vec<Degree>, Formula)>,
    conj_index: HashMap<Vec<Degree>, usize>,
    /// Number of conjunctions already used as step arguments.
    stepped: usize,
    pool: BTreeSet<Degree>,
}

impl<'a, L: ResiduatedLattice + ?Sized> Enumeration<'a, L> {
    fn new(
        lat: &'a L,
        a: &'a FuzzyAutomaton,
        b: &'a FuzzyAutomaton,
        fragment: Fragment,
        options: &'a HmOptions,
    ) -> Self {
        let symbols: Vec<String> = a
            .alphabet()
            .iter()
            .chain(b.alphabet())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = a.states().len();
        let index_a = |x: &str| a.states().iter().position(|s| s == x).expect("known state");
        let index_b = |x: &str| n + b.states().iter().position(|s| s == x).expect("known state");
        let mut base_values = BTreeSet::new();
        let succ = symbols
            .iter()
            .map(|s| {
                let mut rows = vec![Vec::new(); n + b.states().len()];
                if let Ok(rel) = a.delta(s) {
                    for (x, y, d) in rel.iter() {
                        rows[index_a(x)].push((index_a(y), d.clone()));
                        base_values.insert(d.clone());
                    }
                }
                if let Ok(rel) = b.delta(s) {
                    for (x, y, d) in rel.iter() {
                        rows[index_b(x)].push((index_b(y), d.clone()));
                        base_values.insert(d.clone());
                    }
                }
                rows
            })
            .collect();
        for set in [a.terminal(), b.terminal()] {
            base_values.extend(set.iter().map(|(_, d)| d.clone()));
        }
        Enumeration {
            lat,
            fragment,
            options,
            a,
            b,
            symbols,
            succ,
            base_values,
            units: Vec::new(),
            unit_index: HashMap::new(),
            conjunctions: Vec::new(),
            conj_index: HashMap::new(),
            stepped: 0,
            pool: BTreeSet::new(),
        }
    }

    fn tau(&self) -> Vec<Degree> {
        let left = self.a.states().iter().map(|x| self.a.terminal().get(x));
        let right = self.b.states().iter().map(|x| self.b.terminal().get(x));
        left.chain(right).collect()
    }

    fn step(&self, symbol: usize, v: &[Degree]) -> Vec<Degree> {
        self.succ[symbol]
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(y, d)| self.lat.tnorm(d, &v[*y]))
                    .max()
                    .unwrap_or_default()
            })
            .collect()
    }

    fn full(&self) -> bool {
        self.units.len() + self.conjunctions.len() >= self.options.formula_cap
    }

    fn add_unit(&mut self, v: Vec<Degree>, f: Formula) -> bool {
        if self.unit_index.contains_key(&v) || self.full() {
            return false;
        }
        self.unit_index.insert(v.clone(), self.units.len());
        self.units.push((v, f));
        true
    }

    fn add_conjunction(&mut self, v: Vec<Degree>, f: Formula) {
        if self.conj_index.contains_key(&v) || self.full() {
            return;
        }
        self.conj_index.insert(v.clone(), self.conjunctions.len());
        self.conjunctions.push((v, f));
    }

    /// Adds `u` to the conjunction closure together with its meets with
    /// everything already there.
    fn close_with(&mut self, v: &[Degree], f: &Formula) {
        let existing = self.conjunctions.len();
        self.add_conjunction(v.to_vec(), f.clone());
        for i in 0..existing {
            if self.full() {
                return;
            }
            let (cv, cf) = &self.conjunctions[i];
            let m: Vec<Degree> = cv.iter().zip(v).map(|(p, q)| meet(p, q)).collect();
            if !self.conj_index.contains_key(&m) {
                let g = Formula::and(cf.clone(), f.clone());
                self.add_conjunction(m, g);
            }
        }
    }

    fn extend_pool(&mut self, atoms: &[(Vec<Degree>, Formula)]) {
        let keep_zero = self.fragment == Fragment::Bisim;
        let candidates = self
            .base_values
            .iter()
            .chain(atoms.iter().flat_map(|(v, _)| v.iter()))
            .filter(|d| !d.is_one() && (keep_zero || !d.is_zero()));
        for d in candidates {
            if self.pool.len() >= self.options.pool_cap {
                break;
            }
            self.pool.insert(d.clone());
        }
    }

    fn guard_vec(&self, a: &Degree, v: &[Degree]) -> Vec<Degree> {
        v.iter()
            .map(|x| match self.fragment {
                Fragment::Sim => self.lat.residuum(a, x),
                Fragment::Bisim => self.lat.biresiduum(a, x),
            })
            .collect()
    }

    /// Adds the formulas of the next step-depth (depth 0 on the first call).
    fn grow(&mut self) {
        let mut atoms = Vec::new();
        if self.units.is_empty() {
            atoms.push((self.tau(), Formula::Tau));
        } else {
            let fresh: Vec<_> = self.conjunctions[self.stepped..].to_vec();
            self.stepped = self.conjunctions.len();
            for (v, f) in &fresh {
                for (i, s) in self.symbols.iter().enumerate() {
                    atoms.push((self.step(i, v), Formula::step(s.clone(), f.clone())));
                }
            }
        }
        self.extend_pool(&atoms);

        let mut new_units = Vec::new();
        for (v, f) in atoms {
            if self.add_unit(v.clone(), f.clone()) {
                new_units.push((v, f));
            }
        }
        // Guards distribute over conjunction for implications, so guarding
        // atoms suffices there; for biresiduum guards it is a deliberate
        // restriction that keeps the enumeration small.
        let guard_targets = self.units.clone();
        let pool: Vec<Degree> = self.pool.iter().cloned().collect();
        for (v, f) in &guard_targets {
            for a in &pool {
                let g = self.guard_vec(a, v);
                let formula = self.fragment.guard(a.clone(), f.clone());
                if self.add_unit(g.clone(), formula.clone()) {
                    new_units.push((g, formula));
                }
            }
        }
        for (v, f) in &new_units {
            self.close_with(v, f);
        }
    }

    fn enumerate(
        lat: &'a L,
        a: &'a FuzzyAutomaton,
        b: &'a FuzzyAutomaton,
        depth: usize,
        fragment: Fragment,
        options: &'a HmOptions,
    ) -> Self {
        let mut e = Enumeration::new(lat, a, b, fragment, options);
        for _ in 0..=depth {
            e.grow();
        }
        e
    }

    fn degree(&self, i: usize, j: usize) -> Degree {
        let n = self.a.states().len();
        self.units
            .iter()
            .map(|(v, _)| self.fragment.compare(self.lat, &v[i], &v[n + j]))
            .min()
            .unwrap_or_else(Degree::one)
    }
}

/// `⋀ f(x) → f(x')` (or `↔` for [`Fragment::Bisim`]) over the enumerated
/// formulas of step-depth at most `depth`.
///
/// Only finitely many formulas are visited, so the result is an upper bound
/// on the true degree; it is antitone in `depth`.
pub fn hm_degree_bounded<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    depth: usize,
    fragment: Fragment,
) -> FuzzyRelation {
    hm_degree_bounded_with(lat, a, b, depth, fragment, &HmOptions::default())
}

pub fn hm_degree_bounded_with<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    depth: usize,
    fragment: Fragment,
    options: &HmOptions,
) -> FuzzyRelation {
    let e = Enumeration::enumerate(lat, a, b, depth, fragment, options);
    let mut rel = FuzzyRelation::new();
    for (i, x) in a.states().iter().enumerate() {
        for (j, y) in b.states().iter().enumerate() {
            rel.set(x.as_str(), y.as_str(), e.degree(i, j));
        }
    }
    rel
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmAgreement {
    pub fragment: Fragment,
    pub depth: usize,
    pub relation: FuzzyRelation,
    /// The greatest fuzzy simulation (bisimulation) computed by refinement.
    pub fixpoint: FuzzyRelation,
    pub matches_fixpoint: bool,
}

/// Compares the bounded formula degree with the greatest fuzzy simulation
/// (bisimulation) from the fixpoint computation.
pub fn hm_agreement<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    depth: usize,
    fragment: Fragment,
    options: &HmOptions,
) -> Result<HmAgreement> {
    let report = greatest(lat, fragment.relation_kind(), a, b, options.max_iters);
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations,
        });
    }
    let relation = hm_degree_bounded_with(lat, a, b, depth, fragment, options);
    Ok(HmAgreement {
        fragment,
        depth,
        matches_fixpoint: relation == report.relation,
        relation,
        fixpoint: report.relation,
    })
}

/// Searches for a formula `f` of step-depth at most `depth` with
/// `f(x) → f(x') ≤ target` (or `↔`). Any formula returned has been
/// re-evaluated on both automata.
#[allow(clippy::too_many_arguments)]
pub fn distinguishing_formula<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    x: &str,
    xp: &str,
    target: &Degree,
    depth: usize,
    fragment: Fragment,
) -> Result<Option<Formula>> {
    let i = a
        .states()
        .iter()
        .position(|s| s == x)
        .ok_or_else(|| Error::UnknownState {
            context: format!("automaton {}", a.name()),
            state: x.into(),
        })?;
    let j = b
        .states()
        .iter()
        .position(|s| s == xp)
        .ok_or_else(|| Error::UnknownState {
            context: format!("automaton {}", b.name()),
            state: xp.into(),
        })?;
    let options = HmOptions::default();
    let e = Enumeration::enumerate(lat, a, b, depth, fragment, &options);
    let n = a.states().len();
    for (v, f) in &e.units {
        if fragment.compare(lat, &v[i], &v[n + j]) > *target {
            continue;
        }
        let left = eval_lenient(lat, a, f).get(x);
        let right = eval_lenient(lat, b, f).get(xp);
        if fragment.compare(lat, &left, &right) <= *target {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}
