//! Brute-force verifiers and seeded generators for testing.
//!
//! Everything here is written against the scalar lattice operations only and
//! deliberately avoids the composition routines of [`crate::fuzzyrel`], so it
//! can serve as an independent check on [`crate::simrel`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::FuzzyAutomaton;
use crate::error::{Error, Result};
use crate::fuzzyrel::FuzzyRelation;
use crate::lattice::{Degree, ResiduatedLattice};
use crate::simrel::RelationKind;

/// One inequality family in the definition of (bi)simulations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `σ ≤ σ' ∘ φ⁻¹`
    Initial,
    /// `φ⁻¹ ∘ δ_s ≤ δ'_s ∘ φ⁻¹`
    Transition(String),
    /// `φ⁻¹ ∘ τ ≤ τ'`
    Terminal,
    /// `σ' ≤ σ ∘ φ`
    ConverseInitial,
    /// `φ ∘ δ'_s ≤ δ_s ∘ φ`
    ConverseTransition(String),
    /// `φ ∘ τ' ≤ τ`
    ConverseTerminal,
}

impl Condition {
    /// Conditions that only concern initial states; they are what separates
    /// crisp from fuzzy (bi)simulations.
    pub fn is_initial(&self) -> bool {
        matches!(self, Condition::Initial | Condition::ConverseInitial)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    State(String),
    Pair(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub at: Coordinate,
    pub lhs: Degree,
    pub rhs: Degree,
}

pub type ConditionReport = BTreeMap<Condition, Vec<Violation>>;

fn sup_of<I: IntoIterator<Item = Degree>>(values: I) -> Degree {
    let mut acc = Degree::zero();
    for v in values {
        if v > acc {
            acc = v;
        }
    }
    acc
}

fn delta_at(aut: &FuzzyAutomaton, s: &str, x: &str, y: &str) -> Degree {
    aut.delta(s).map(|r| r.get(x, y)).unwrap_or_default()
}

fn symbols(a: &FuzzyAutomaton, b: &FuzzyAutomaton) -> Vec<String> {
    let mut all: Vec<String> = a.alphabet().iter().chain(b.alphabet()).cloned().collect();
    all.sort();
    all.dedup();
    all
}

/// Expands the simulation inequalities from `a` to `b` for the relation
/// `phi(x, x')`, given as a lookup so the converse direction can reuse it.
fn expand_direction<L, F>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: F,
    converse: bool,
    out: &mut ConditionReport,
) where
    L: ResiduatedLattice + ?Sized,
    F: Fn(&str, &str) -> Degree,
{
    let (initial, transition, terminal): (_, fn(String) -> Condition, _) = if converse {
        (
            Condition::ConverseInitial,
            Condition::ConverseTransition,
            Condition::ConverseTerminal,
        )
    } else {
        (Condition::Initial, Condition::Transition, Condition::Terminal)
    };
    let mut push = |cond: Condition, at: Coordinate, lhs: Degree, rhs: Degree| {
        if lhs > rhs {
            out.entry(cond).or_default().push(Violation { at, lhs, rhs });
        }
    };

    for x in a.states() {
        let lhs = a.initial().get(x);
        let rhs = sup_of(b.states().iter().map(|xp| lat.tnorm(&b.initial().get(xp), &phi(x, xp))));
        push(initial.clone(), Coordinate::State(x.clone()), lhs, rhs);
    }

    for s in symbols(a, b) {
        for xp in b.states() {
            for y in a.states() {
                let lhs = sup_of(
                    a.states()
                        .iter()
                        .map(|x| lat.tnorm(&phi(x, xp), &delta_at(a, &s, x, y))),
                );
                let rhs = sup_of(
                    b.states()
                        .iter()
                        .map(|yp| lat.tnorm(&delta_at(b, &s, xp, yp), &phi(y, yp))),
                );
                push(transition(s.clone()), Coordinate::Pair(xp.clone(), y.clone()), lhs, rhs);
            }
        }
    }

    for xp in b.states() {
        let lhs = sup_of(a.states().iter().map(|x| lat.tnorm(&phi(x, xp), &a.terminal().get(x))));
        let rhs = b.terminal().get(xp);
        push(terminal.clone(), Coordinate::State(xp.clone()), lhs, rhs);
    }
}

/// Every violated coordinate of the crisp simulation (`kind = Simulation`)
/// or crisp bisimulation conditions, with both sides of the inequality.
///
/// The relation is a fuzzy (bi)simulation iff all violations are of
/// [`Condition::is_initial`] conditions, and a crisp one iff the report is
/// empty.
pub fn pointwise_condition_report<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> ConditionReport {
    let mut out = ConditionReport::new();
    expand_direction(lat, a, b, |x, xp| phi.get(x, xp), false, &mut out);
    if kind == RelationKind::Bisimulation {
        expand_direction(lat, b, a, |xp, x| phi.get(x, xp), true, &mut out);
    }
    out
}

/// The greatest simulation below `seed`, by refinement started at `seed`.
pub fn shrink_to_simulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    seed: &FuzzyRelation,
    max_iters: usize,
) -> Result<FuzzyRelation> {
    shrink(lat, RelationKind::Simulation, a, b, seed, max_iters)
}

pub fn shrink_to_bisimulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    seed: &FuzzyRelation,
    max_iters: usize,
) -> Result<FuzzyRelation> {
    shrink(lat, RelationKind::Bisimulation, a, b, seed, max_iters)
}

fn shrink<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    seed: &FuzzyRelation,
    max_iters: usize,
) -> Result<FuzzyRelation> {
    let alphabet = symbols(a, b);
    let mut psi = seed.clone();
    for _ in 0..max_iters {
        let mut next = FuzzyRelation::new();
        for x in a.states() {
            for xp in b.states() {
                let current = psi.get(x, xp);
                if current.is_zero() {
                    continue;
                }
                let (tx, txp) = (a.terminal().get(x), b.terminal().get(xp));
                let mut bounds = vec![current, lat.residuum(&tx, &txp)];
                if kind == RelationKind::Bisimulation {
                    bounds.push(lat.residuum(&txp, &tx));
                }
                for s in &alphabet {
                    for y in a.states() {
                        let matched = sup_of(
                            b.states()
                                .iter()
                                .map(|yp| lat.tnorm(&delta_at(b, s, xp, yp), &psi.get(y, yp))),
                        );
                        bounds.push(lat.residuum(&delta_at(a, s, x, y), &matched));
                    }
                    if kind == RelationKind::Bisimulation {
                        for yp in b.states() {
                            let matched = sup_of(
                                a.states()
                                    .iter()
                                    .map(|y| lat.tnorm(&delta_at(a, s, x, y), &psi.get(y, yp))),
                            );
                            bounds.push(lat.residuum(&delta_at(b, s, xp, yp), &matched));
                        }
                    }
                }
                let value = bounds.into_iter().min().expect("at least two bounds");
                next.set(x.as_str(), xp.as_str(), value);
            }
        }
        if next == psi {
            return Ok(psi);
        }
        psi = next;
    }
    Err(Error::NotConverged { iterations: max_iters })
}

/// A seeded random relation together with what produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSample {
    pub relation: FuzzyRelation,
    pub seed: u64,
    pub value_pool: Vec<Degree>,
}

/// Each pair is included with probability `density`, with a degree drawn
/// uniformly from `pool`. Zero draws simply leave the pair out.
pub fn random_relation(
    universe_a: &[String],
    universe_b: &[String],
    pool: &[Degree],
    density: f64,
    seed: u64,
) -> RelationSample {
    assert!(!pool.is_empty(), "value pool must not be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relation = FuzzyRelation::new();
    for x in universe_a {
        for y in universe_b {
            if rng.gen_bool(density) {
                let d = pool[rng.gen_range(0..pool.len())].clone();
                relation.set(x.as_str(), y.as_str(), d);
            }
        }
    }
    RelationSample {
        relation,
        seed,
        value_pool: pool.to_vec(),
    }
}

/// A random automaton on states `{prefix}0 .. {prefix}{n-1}`.
///
/// Initial, terminal and transition degrees are drawn like
/// [`random_relation`]; `density` applies to each potential entry.
pub fn random_automaton(
    prefix: &str,
    n_states: usize,
    alphabet: &[&str],
    pool: &[Degree],
    density: f64,
    seed: u64,
) -> FuzzyAutomaton {
    assert!(!pool.is_empty(), "value pool must not be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<String> = (0..n_states).map(|i| format!("{prefix}{i}")).collect();
    let mut aut = FuzzyAutomaton::new(prefix, states.iter().cloned(), alphabet.iter().copied())
        .expect("generated automaton is well formed");
    let draw = |rng: &mut ChaCha8Rng| -> Option<Degree> {
        rng.gen_bool(density)
            .then(|| pool[rng.gen_range(0..pool.len())].clone())
    };
    for x in &states {
        if let Some(d) = draw(&mut rng) {
            aut.set_initial(x, d).unwrap();
        }
        if let Some(d) = draw(&mut rng) {
            aut.set_terminal(x, d).unwrap();
        }
    }
    for s in alphabet {
        for x in &states {
            for y in &states {
                if let Some(d) = draw(&mut rng) {
                    aut.set_transition(x, s, y, d).unwrap();
                }
            }
        }
    }
    aut
}

/// `{1/den, 2/den, …, 1}`.
pub fn uniform_pool(den: i64) -> Vec<Degree> {
    (1..=den).map(|p| Degree::new(p, den).unwrap()).collect()
}
