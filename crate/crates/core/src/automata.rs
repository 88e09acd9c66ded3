//! Fuzzy automata, their JSON interchange format, and fuzzy-language
//! evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzyrel::{compose_rel_set, compose_set_rel, compose_set_set, FuzzyRelation, FuzzySet};
use crate::lattice::{Degree, ResiduatedLattice};

/// A finite fuzzy automaton `⟨A, δ, σ, τ⟩` over a finite alphabet.
///
/// States and symbols keep their declaration order. The transition function
/// is stored as one relation `δ_s` per alphabet symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyAutomaton {
    name: String,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: FuzzySet,
    terminal: FuzzySet,
    delta: BTreeMap<String, FuzzyRelation>,
}

impl FuzzyAutomaton {
    /// An automaton with the given states and alphabet and all degrees zero.
    pub fn new<S, T>(name: impl Into<String>, states: S, alphabet: T) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
    {
        let name = name.into();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if states.is_empty() {
            return Err(Error::EmptyStates { name });
        }
        check_unique("states", &states)?;
        check_unique("alphabet", &alphabet)?;
        let delta = alphabet.iter().map(|s| (s.clone(), FuzzyRelation::new())).collect();
        Ok(FuzzyAutomaton {
            name,
            alphabet,
            states,
            initial: FuzzySet::new(),
            terminal: FuzzySet::new(),
            delta,
        })
    }

    pub fn set_initial(&mut self, x: &str, degree: Degree) -> Result<()> {
        self.require_state("initial", x)?;
        self.initial.set(x, degree);
        Ok(())
    }

    pub fn set_terminal(&mut self, x: &str, degree: Degree) -> Result<()> {
        self.require_state("terminal", x)?;
        self.terminal.set(x, degree);
        Ok(())
    }

    pub fn set_transition(&mut self, from: &str, symbol: &str, to: &str, degree: Degree) -> Result<()> {
        self.require_state("transition source", from)?;
        self.require_state("transition target", to)?;
        let rel = self.delta.get_mut(symbol).ok_or_else(|| Error::UnknownSymbol {
            context: "transition".into(),
            symbol: symbol.into(),
        })?;
        rel.set(from, to, degree);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> &FuzzySet {
        &self.initial
    }

    pub fn terminal(&self) -> &FuzzySet {
        &self.terminal
    }

    pub fn has_state(&self, x: &str) -> bool {
        self.states.iter().any(|s| s == x)
    }

    pub fn has_symbol(&self, s: &str) -> bool {
        self.delta.contains_key(s)
    }

    /// The slice `δ_s(x,y) = δ(x,s,y)`.
    pub fn delta(&self, symbol: &str) -> Result<&FuzzyRelation> {
        self.delta.get(symbol).ok_or_else(|| Error::UnknownSymbol {
            context: format!("automaton {}", self.name),
            symbol: symbol.into(),
        })
    }

    /// `(symbol, δ_symbol)` pairs in alphabet order.
    pub fn transitions(&self) -> impl Iterator<Item = (&str, &FuzzyRelation)> {
        self.alphabet.iter().map(move |s| (s.as_str(), &self.delta[s]))
    }

    /// The same automaton with `σ = {x:1}`.
    pub fn from_state(&self, x: &str) -> Result<FuzzyAutomaton> {
        self.require_state("start state", x)?;
        let mut a = self.clone();
        a.initial = FuzzySet::singleton(x);
        Ok(a)
    }

    fn require_state(&self, context: &str, x: &str) -> Result<()> {
        if self.has_state(x) {
            Ok(())
        } else {
            Err(Error::UnknownState {
                context: format!("automaton {} {context}", self.name),
                state: x.into(),
            })
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawAutomaton = serde_json::from_str(text).map_err(|e| Error::json("automaton", e))?;
        raw.into_automaton()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawAutomaton::from(self)).expect("automaton serialization is infallible")
    }
}

fn check_unique(field: &str, items: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for item in items {
        if !seen.insert(item) {
            return Err(Error::Duplicate {
                context: field.into(),
                entry: format!("{item:?}"),
            });
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomaton {
    #[serde(default)]
    name: String,
    alphabet: Vec<String>,
    states: Vec<String>,
    #[serde(default)]
    initial: BTreeMap<String, String>,
    #[serde(default)]
    terminal: BTreeMap<String, String>,
    #[serde(default)]
    transitions: Vec<RawTransition>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    from: String,
    symbol: String,
    to: String,
    degree: String,
}

fn parse_field(field: String, literal: &str) -> Result<Degree> {
    literal.parse().map_err(|e: Error| Error::InvalidField {
        field,
        message: e.to_string(),
    })
}

impl RawAutomaton {
    fn into_automaton(self) -> Result<FuzzyAutomaton> {
        let mut a = FuzzyAutomaton::new(self.name, self.states, self.alphabet)?;
        for (x, lit) in &self.initial {
            let degree = parse_field(format!("initial.{x}"), lit)?;
            a.set_initial(x, degree)?;
        }
        for (x, lit) in &self.terminal {
            let degree = parse_field(format!("terminal.{x}"), lit)?;
            a.set_terminal(x, degree)?;
        }
        let mut seen = BTreeSet::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let degree = parse_field(format!("transitions[{i}].degree"), &t.degree)?;
            if !seen.insert((&t.from, &t.symbol, &t.to)) {
                return Err(Error::Duplicate {
                    context: format!("transitions[{i}]"),
                    entry: format!("({}, {}, {})", t.from, t.symbol, t.to),
                });
            }
            a.set_transition(&t.from, &t.symbol, &t.to, degree)
                .map_err(|e| Error::InvalidField {
                    field: format!("transitions[{i}]"),
                    message: e.to_string(),
                })?;
        }
        Ok(a)
    }
}

impl From<&FuzzyAutomaton> for RawAutomaton {
    fn from(a: &FuzzyAutomaton) -> Self {
        let map = |f: &FuzzySet| f.iter().map(|(x, d)| (x.to_string(), d.to_string())).collect();
        let transitions = a
            .transitions()
            .flat_map(|(s, rel)| {
                rel.iter().map(move |(x, y, d)| RawTransition {
                    from: x.to_string(),
                    symbol: s.to_string(),
                    to: y.to_string(),
                    degree: d.to_string(),
                })
            })
            .collect();
        RawAutomaton {
            name: a.name.clone(),
            alphabet: a.alphabet.clone(),
            states: a.states.clone(),
            initial: map(&a.initial),
            terminal: map(&a.terminal),
            transitions,
        }
    }
}

/// A finite word over the alphabet; the empty word is `ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<String>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads a word from text. Symbols may be separated by whitespace or
    /// commas; an unseparated token that is not itself a symbol is split into
    /// characters. The empty string (or `ε`) is the empty word.
    pub fn parse(text: &str, alphabet: &[String]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let known = |s: &str| alphabet.iter().any(|a| a == s);
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let mut symbols = Vec::new();
        for token in tokens {
            if known(token) {
                symbols.push(token.to_string());
                continue;
            }
            for c in token.chars() {
                let s = c.to_string();
                if !known(&s) {
                    return Err(Error::UnknownSymbol {
                        context: format!("word {text:?}"),
                        symbol: token.to_string(),
                    });
                }
                symbols.push(s);
            }
        }
        Ok(Word(symbols))
    }
}

impl<S: Into<String>> FromIterator<S> for Word {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        Word(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let sep = if self.0.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        f.write_str(&self.0.join(sep))
    }
}

/// `L(A)(s₁…sₙ) = σ ∘ δ_{s₁} ∘ … ∘ δ_{sₙ} ∘ τ`, folded left to right.
pub fn lang_degree<L: ResiduatedLattice + ?Sized>(lat: &L, a: &FuzzyAutomaton, word: &Word) -> Result<Degree> {
    let mut current = a.initial.clone();
    for s in word.symbols() {
        current = compose_set_rel(lat, &current, a.delta(s)?);
    }
    Ok(compose_set_set(lat, &current, &a.terminal))
}

/// `L(A, x)(w)`: the language degree when starting crisply in `x`.
pub fn lang_degree_from_state<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    x: &str,
    word: &Word,
) -> Result<Degree> {
    lang_degree(lat, &a.from_state(x)?, word)
}

/// `(δ_{s₁} ∘ … ∘ δ_{sₙ} ∘ τ)` for every state at once, folded right to left.
pub fn state_languages<L: ResiduatedLattice + ?Sized>(lat: &L, a: &FuzzyAutomaton, word: &Word) -> Result<FuzzySet> {
    let mut current = a.terminal.clone();
    for s in word.symbols().iter().rev() {
        current = compose_rel_set(lat, a.delta(s)?, &current);
    }
    Ok(current)
}

/// All words of length at most `k`, shortest first, lexicographic within a
/// length (by symbol name).
pub fn words_up_to(a: &FuzzyAutomaton, k: usize) -> Vec<Word> {
    let mut symbols: Vec<&String> = a.alphabet.iter().collect();
    symbols.sort();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..k {
        if symbols.is_empty() {
            break;
        }
        let next: Vec<Word> = layer
            .iter()
            .flat_map(|w| {
                symbols.iter().map(move |s| {
                    let mut v = w.0.clone();
                    v.push((*s).clone());
                    Word(v)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiveLength {
    /// No word longer than this has a non-zero degree.
    Bounded(usize),
    Unbounded,
}

impl LiveLength {
    pub fn within(self, k: usize) -> bool {
        matches!(self, LiveLength::Bounded(n) if n <= k)
    }
}

/// Exactness certificate for bounded language comparisons: the longest path
/// from `support(σ)` to `support(τ)` in the transition support graph, or
/// [`LiveLength::Unbounded`] when such paths can be arbitrarily long.
pub fn max_live_word_length(a: &FuzzyAutomaton) -> LiveLength {
    let sources: BTreeSet<&str> = a.initial.support().collect();
    live_length_from(a, &sources)
}

/// Like [`max_live_word_length`], but for the languages `L(A, x)` of every
/// state `x`.
pub fn max_live_word_length_any_state(a: &FuzzyAutomaton) -> LiveLength {
    let sources: BTreeSet<&str> = a.states.iter().map(String::as_str).collect();
    live_length_from(a, &sources)
}

fn live_length_from(a: &FuzzyAutomaton, sources: &BTreeSet<&str>) -> LiveLength {
    let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut pred: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (_, rel) in a.transitions() {
        for (x, y, _) in rel.iter() {
            succ.entry(x).or_default().insert(y);
            pred.entry(y).or_default().insert(x);
        }
    }
    fn reach<'a>(start: Vec<&'a str>, edges: &BTreeMap<&'a str, BTreeSet<&'a str>>) -> BTreeSet<&'a str> {
        let mut seen: BTreeSet<&str> = start.iter().copied().collect();
        let mut stack = start;
        while let Some(x) = stack.pop() {
            for &y in edges.get(x).into_iter().flatten() {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }
    let forward = reach(sources.iter().copied().collect(), &succ);
    let backward = reach(a.terminal.support().collect(), &pred);
    let live: BTreeSet<&str> = forward.intersection(&backward).copied().collect();

    // longest path to a terminal inside the live subgraph; a back edge means a cycle
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done(usize),
    }
    fn visit<'a>(
        x: &'a str,
        live: &BTreeSet<&'a str>,
        succ: &BTreeMap<&'a str, BTreeSet<&'a str>>,
        terminal: &FuzzySet,
        marks: &mut BTreeMap<&'a str, Mark>,
    ) -> Option<usize> {
        match marks.get(x) {
            Some(Mark::Active) => return None,
            Some(Mark::Done(n)) => return Some(*n),
            None => {}
        }
        marks.insert(x, Mark::Active);
        let mut best = 0;
        for &y in succ.get(x).into_iter().flatten() {
            if live.contains(y) {
                best = best.max(1 + visit(y, live, succ, terminal, marks)?);
            }
        }
        debug_assert!(best > 0 || !terminal.get(x).is_zero());
        marks.insert(x, Mark::Done(best));
        Some(best)
    }

    let mut marks = BTreeMap::new();
    let mut longest = 0;
    for &x in sources.iter().filter(|x| live.contains(*x)) {
        match visit(x, &live, &succ, &a.terminal, &mut marks) {
            Some(n) => longest = longest.max(n),
            None => return LiveLength::Unbounded,
        }
    }
    LiveLength::Bounded(longest)
}
