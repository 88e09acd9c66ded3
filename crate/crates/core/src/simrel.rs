//! Fuzzy simulations and bisimulations between fuzzy automata.
//!
//! A fuzzy relation `φ ⊆ A × A'` is a *fuzzy simulation* when for every
//! symbol `s`
//!
//! ```text
//! φ⁻¹ ∘ δ_s ≤ δ'_s ∘ φ⁻¹        φ⁻¹ ∘ τ ≤ τ'
//! ```
//!
//! and a *fuzzy bisimulation* when `φ⁻¹` is additionally a fuzzy simulation
//! from `A'` to `A`. How well initial states are matched is measured by the
//! norm `S(σ, σ' ∘ φ⁻¹)` rather than required outright; adding the condition
//! `σ ≤ σ' ∘ φ⁻¹` gives back the crisp (forward) notions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::{
    lang_degree, max_live_word_length, max_live_word_length_any_state, state_languages, words_up_to, FuzzyAutomaton,
};
use crate::error::{Error, Result};
use crate::fuzzyrel::{
    compose, compose_rel_set, compose_set_rel, relation_subsethood, subsethood, FuzzyRelation, FuzzySet,
};
use crate::lattice::{inf, meet, Degree, ResiduatedLattice};

/// Default sweep cap for the fixpoint iteration.
pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Simulation,
    Bisimulation,
}

impl std::str::FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sim" | "simulation" => Ok(RelationKind::Simulation),
            "bisim" | "bisimulation" => Ok(RelationKind::Bisimulation),
            other => Err(format!("unknown relation kind {other:?} (expected sim or bisim)")),
        }
    }
}

/// Outcome of a greatest-fixpoint computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub kind: RelationKind,
    pub relation: FuzzyRelation,
    pub norm: Degree,
    /// Number of refinement sweeps performed.
    pub iterations: usize,
    /// `true` iff the last sweep left the relation unchanged.
    pub converged: bool,
}

/// Union of both alphabets; a symbol missing from one automaton has no
/// transitions there.
fn joint_alphabet<'a>(a: &'a FuzzyAutomaton, b: &'a FuzzyAutomaton) -> BTreeSet<&'a str> {
    a.alphabet().iter().chain(b.alphabet()).map(String::as_str).collect()
}

fn delta_or_empty<'a>(a: &'a FuzzyAutomaton, s: &str, empty: &'a FuzzyRelation) -> &'a FuzzyRelation {
    a.delta(s).unwrap_or(empty)
}

/// Rejects relations mentioning states outside `A × A'`.
pub fn validate_relation(a: &FuzzyAutomaton, b: &FuzzyAutomaton, phi: &FuzzyRelation) -> Result<()> {
    for x in phi.domain() {
        if !a.has_state(x) {
            return Err(Error::UnknownState {
                context: format!("relation source (automaton {})", a.name()),
                state: x.into(),
            });
        }
    }
    for y in phi.range() {
        if !b.has_state(y) {
            return Err(Error::UnknownState {
                context: format!("relation target (automaton {})", b.name()),
                state: y.into(),
            });
        }
    }
    Ok(())
}

/// Transition and terminal conditions of a fuzzy simulation from `a` to `b`.
fn simulation_conditions_hold<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> bool {
    let inv = phi.converse();
    let empty = FuzzyRelation::new();
    let transitions_ok = joint_alphabet(a, b).into_iter().all(|s| {
        let lhs = compose(lat, &inv, delta_or_empty(a, s, &empty));
        let rhs = compose(lat, delta_or_empty(b, s, &empty), &inv);
        lhs.leq(&rhs)
    });
    transitions_ok && compose_rel_set(lat, &inv, a.terminal()).leq(b.terminal())
}

fn initial_condition_holds<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> bool {
    a.initial().leq(&compose_set_rel(lat, b.initial(), &phi.converse()))
}

pub fn check_fuzzy_simulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Result<bool> {
    validate_relation(a, b, phi)?;
    Ok(simulation_conditions_hold(lat, a, b, phi))
}

pub fn check_fuzzy_bisimulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Result<bool> {
    validate_relation(a, b, phi)?;
    Ok(simulation_conditions_hold(lat, a, b, phi) && simulation_conditions_hold(lat, b, a, &phi.converse()))
}

/// Forward simulation in the crisp sense: a fuzzy simulation that also
/// satisfies `σ ≤ σ' ∘ φ⁻¹`.
pub fn check_crisp_simulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Result<bool> {
    Ok(check_fuzzy_simulation(lat, a, b, phi)? && initial_condition_holds(lat, a, b, phi))
}

pub fn check_crisp_bisimulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Result<bool> {
    Ok(check_fuzzy_bisimulation(lat, a, b, phi)?
        && initial_condition_holds(lat, a, b, phi)
        && initial_condition_holds(lat, b, a, &phi.converse()))
}

/// `S(σ, σ' ∘ φ⁻¹)`. Defined for any relation; it is the norm of `φ` when
/// `φ` is a fuzzy simulation.
pub fn sim_norm<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Degree {
    subsethood(lat, a.initial(), &compose_set_rel(lat, b.initial(), &phi.converse()))
}

/// `S(σ, σ' ∘ φ⁻¹) ∧ S(σ', σ ∘ φ)`.
pub fn bisim_norm<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Degree {
    meet(&sim_norm(lat, a, b, phi), &sim_norm(lat, b, a, &phi.converse()))
}

pub fn norm<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Degree {
    match kind {
        RelationKind::Simulation => sim_norm(lat, a, b, phi),
        RelationKind::Bisimulation => bisim_norm(lat, a, b, phi),
    }
}

/// Successor lists `[symbol][state] -> [(target, degree)]` over state indices.
type Adjacency = Vec<Vec<Vec<(usize, Degree)>>>;

/// Dense greatest-fixpoint refinement over `A × A'`.
///
/// Starting from the terminal bound `τ(x) → τ'(x')` (with `↔` for
/// bisimulations), each [`sweep`](Refinement::sweep) replaces `φ` by
///
/// ```text
/// φ(x,x') ∧ ⋀_s ⋀_y δ_s(x,y) → (δ'_s ∘ φ⁻¹)(x',y)
/// ```
///
/// intersected, for bisimulations, with the symmetric constraint
/// `⋀_s ⋀_y' δ'_s(x',y') → (δ_s ∘ φ)(x,y')`. The operator is monotone and
/// every fuzzy simulation (bisimulation) lies below every iterate, so an
/// exact fixpoint is the greatest one.
pub struct Refinement<'a, L: ?Sized> {
    lat: &'a L,
    kind: RelationKind,
    a: &'a FuzzyAutomaton,
    b: &'a FuzzyAutomaton,
    succ_a: Adjacency,
    succ_b: Adjacency,
    current: Vec<Vec<Degree>>,
    sweeps: usize,
    stable: bool,
}

fn adjacency(aut: &FuzzyAutomaton, symbols: &[&str]) -> Adjacency {
    let index = |x: &str| aut.states().iter().position(|s| s == x).expect("validated state");
    symbols
        .iter()
        .map(|s| {
            let mut rows = vec![Vec::new(); aut.states().len()];
            if let Ok(rel) = aut.delta(s) {
                for (x, y, d) in rel.iter() {
                    rows[index(x)].push((index(y), d.clone()));
                }
            }
            rows
        })
        .collect()
}

impl<'a, L: ResiduatedLattice + ?Sized> Refinement<'a, L> {
    pub fn new(lat: &'a L, kind: RelationKind, a: &'a FuzzyAutomaton, b: &'a FuzzyAutomaton) -> Self {
        let symbols: Vec<&str> = joint_alphabet(a, b).into_iter().collect();
        let current = a
            .states()
            .iter()
            .map(|x| {
                let tx = a.terminal().get(x);
                b.states()
                    .iter()
                    .map(|y| {
                        let ty = b.terminal().get(y);
                        match kind {
                            RelationKind::Simulation => lat.residuum(&tx, &ty),
                            RelationKind::Bisimulation => lat.biresiduum(&tx, &ty),
                        }
                    })
                    .collect()
            })
            .collect();
        Refinement {
            lat,
            kind,
            a,
            b,
            succ_a: adjacency(a, &symbols),
            succ_b: adjacency(b, &symbols),
            current,
            sweeps: 0,
            stable: false,
        }
    }

    /// Performs one sweep; returns `true` if the relation changed.
    pub fn sweep(&mut self) -> bool {
        let lat = self.lat;
        let (n, m) = (self.a.states().len(), self.b.states().len());
        let phi = &self.current;
        let mut next = phi.clone();

        for (succ_a, succ_b) in self.succ_a.iter().zip(&self.succ_b) {
            // forward[x'][y] = (δ'_s ∘ φ⁻¹)(x', y)
            let forward: Vec<Vec<Degree>> = (0..m)
                .map(|xp| {
                    (0..n)
                        .map(|y| {
                            succ_b[xp]
                                .iter()
                                .map(|(yp, d)| lat.tnorm(d, &phi[y][*yp]))
                                .max()
                                .unwrap_or_default()
                        })
                        .collect()
                })
                .collect();
            for x in 0..n {
                for (y, d) in &succ_a[x] {
                    for xp in 0..m {
                        let bound = lat.residuum(d, &forward[xp][*y]);
                        if bound < next[x][xp] {
                            next[x][xp] = bound;
                        }
                    }
                }
            }

            if self.kind == RelationKind::Bisimulation {
                // backward[x][y'] = (δ_s ∘ φ)(x, y')
                let backward: Vec<Vec<Degree>> = (0..n)
                    .map(|x| {
                        (0..m)
                            .map(|yp| {
                                succ_a[x]
                                    .iter()
                                    .map(|(y, d)| lat.tnorm(d, &phi[*y][yp]))
                                    .max()
                                    .unwrap_or_default()
                            })
                            .collect()
                    })
                    .collect();
                for xp in 0..m {
                    for (yp, d) in &succ_b[xp] {
                        for x in 0..n {
                            let bound = lat.residuum(d, &backward[x][*yp]);
                            if bound < next[x][xp] {
                                next[x][xp] = bound;
                            }
                        }
                    }
                }
            }
        }

        self.sweeps += 1;
        let changed = next != self.current;
        self.current = next;
        self.stable = !changed;
        changed
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Every degree currently stored, including zeros.
    pub fn values(&self) -> impl Iterator<Item = &Degree> {
        self.current.iter().flatten()
    }

    pub fn relation(&self) -> FuzzyRelation {
        let mut rel = FuzzyRelation::new();
        for (x, row) in self.a.states().iter().zip(&self.current) {
            for (y, d) in self.b.states().iter().zip(row) {
                rel.set(x.as_str(), y.as_str(), d.clone());
            }
        }
        rel
    }

    /// Sweeps until stable or until `max_iters` sweeps have been spent.
    pub fn run(mut self, max_iters: usize) -> SimReport {
        while !self.stable && self.sweeps < max_iters {
            self.sweep();
        }
        let relation = self.relation();
        SimReport {
            kind: self.kind,
            norm: norm(self.lat, self.kind, self.a, self.b, &relation),
            relation,
            iterations: self.sweeps,
            converged: self.stable,
        }
    }
}

/// The greatest fuzzy simulation between `a` and `b`.
///
/// When `converged` is false the relation is still an upper bound on every
/// fuzzy simulation, but need not be one itself.
pub fn greatest_fuzzy_simulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    max_iters: usize,
) -> SimReport {
    Refinement::new(lat, RelationKind::Simulation, a, b).run(max_iters)
}

pub fn greatest_fuzzy_bisimulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    max_iters: usize,
) -> SimReport {
    Refinement::new(lat, RelationKind::Bisimulation, a, b).run(max_iters)
}

pub fn greatest<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    max_iters: usize,
) -> SimReport {
    Refinement::new(lat, kind, a, b).run(max_iters)
}

/// The largest `λ` for which `phi` satisfies every λ-approximate
/// simulation inclusion from `a` to `b`.
fn approx_sim_degree<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Degree {
    let inv = phi.converse();
    let empty = FuzzyRelation::new();
    let mut degrees = vec![
        sim_norm(lat, a, b, phi),
        subsethood(lat, &compose_rel_set(lat, &inv, a.terminal()), b.terminal()),
    ];
    for s in joint_alphabet(a, b) {
        let lhs = compose(lat, &inv, delta_or_empty(a, s, &empty));
        let rhs = compose(lat, delta_or_empty(b, s, &empty), &inv);
        degrees.push(relation_subsethood(lat, &lhs, &rhs));
    }
    inf(degrees)
}

/// The degree to which `phi` is an approximate simulation (bisimulation):
/// the meet of all defining inclusion degrees. Only defined over a Heyting
/// algebra.
pub fn approx_degree<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
) -> Result<Degree> {
    if !lat.is_heyting() {
        return Err(Error::NotHeyting);
    }
    validate_relation(a, b, phi)?;
    let forward = approx_sim_degree(lat, a, b, phi);
    Ok(match kind {
        RelationKind::Simulation => forward,
        RelationKind::Bisimulation => meet(&forward, &approx_sim_degree(lat, b, a, &phi.converse())),
    })
}

pub fn check_lambda_approx_simulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
    lambda: &Degree,
) -> Result<bool> {
    Ok(*lambda <= approx_degree(lat, RelationKind::Simulation, a, b, phi)?)
}

pub fn check_lambda_approx_bisimulation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
    lambda: &Degree,
) -> Result<bool> {
    Ok(*lambda <= approx_degree(lat, RelationKind::Bisimulation, a, b, phi)?)
}

/// Raises every entry `≥ λ` to 1 and keeps the others.
///
/// Applied to the greatest fuzzy simulation (bisimulation) with `λ` equal to
/// its norm, the result is a λ-approximate simulation (bisimulation) above it.
pub fn approx_from_greatest(phi: &FuzzyRelation, lambda: &Degree) -> FuzzyRelation {
    phi.iter()
        .map(|(x, y, d)| {
            let d = if d >= lambda { Degree::one() } else { d.clone() };
            ((x.to_string(), y.to_string()), d)
        })
        .collect()
}

/// The maximal `λ` admitting a λ-approximate simulation (bisimulation): the
/// norm of the greatest fuzzy one.
pub fn max_approx_lambda<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    max_iters: usize,
) -> Result<Degree> {
    if !lat.is_heyting() {
        return Err(Error::NotHeyting);
    }
    let report = greatest(lat, kind, a, b, max_iters);
    if !report.converged {
        return Err(Error::NotConverged {
            iterations: report.iterations,
        });
    }
    Ok(report.norm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub kind: RelationKind,
    pub max_len: usize,
    /// `φ(x,x') ≤ S(L(A,x), L(A',x'))` (or `E`) for every pair, over words
    /// of length at most `max_len`.
    pub pointwise_ok: bool,
    /// `‖φ‖ ≤ S(L(A), L(A'))` (or `E`) over the same words.
    pub global_ok: bool,
    /// Both automata certify that no longer word has a non-zero degree, so
    /// the truncated degrees are the true ones.
    pub exact: bool,
    pub norm: Degree,
    /// The truncated `S(L(A), L(A'))` (or `E`).
    pub language_degree: Degree,
}

/// Checks language preservation (simulations) or invariance
/// (bisimulations) on all words up to length `max_len`.
pub fn verify_preservation<L: ResiduatedLattice + ?Sized>(
    lat: &L,
    kind: RelationKind,
    a: &FuzzyAutomaton,
    b: &FuzzyAutomaton,
    phi: &FuzzyRelation,
    max_len: usize,
) -> Result<PreservationReport> {
    validate_relation(a, b, phi)?;
    let compare = |p: &Degree, q: &Degree| match kind {
        RelationKind::Simulation => lat.residuum(p, q),
        RelationKind::Bisimulation => lat.biresiduum(p, q),
    };

    // the two automata may have different alphabets; use all words over both
    let mut words: BTreeSet<_> = words_up_to(a, max_len).into_iter().collect();
    words.extend(words_up_to(b, max_len));
    let empty = FuzzySet::new();

    let mut pointwise: Vec<Degree> = vec![Degree::one(); phi.len()];
    let mut global = Degree::one();
    for w in &words {
        let known_a = w.symbols().iter().all(|s| a.has_symbol(s));
        let known_b = w.symbols().iter().all(|s| b.has_symbol(s));
        let from_a = if known_a {
            state_languages(lat, a, w)?
        } else {
            empty.clone()
        };
        let from_b = if known_b {
            state_languages(lat, b, w)?
        } else {
            empty.clone()
        };
        for (slot, (x, y, _)) in pointwise.iter_mut().zip(phi.iter()) {
            *slot = meet(slot, &compare(&from_a.get(x), &from_b.get(y)));
        }
        let la = if known_a {
            lang_degree(lat, a, w)?
        } else {
            Degree::zero()
        };
        let lb = if known_b {
            lang_degree(lat, b, w)?
        } else {
            Degree::zero()
        };
        global = meet(&global, &compare(&la, &lb));
    }

    let pointwise_ok = phi.iter().zip(&pointwise).all(|((_, _, d), bound)| d <= bound);
    let norm = norm(lat, kind, a, b, phi);
    let exact = [a, b]
        .iter()
        .all(|aut| max_live_word_length(aut).within(max_len) && max_live_word_length_any_state(aut).within(max_len));
    Ok(PreservationReport {
        kind,
        max_len,
        pointwise_ok,
        global_ok: norm <= global,
        exact,
        norm,
        language_degree: global,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzyrel::{is_reflexive, is_symmetric, is_transitive};
    use crate::lattice::tests::d;
    use crate::lattice::LatticeKind::{self, Goedel, Lukasiewicz, Product};

    fn fig() -> (FuzzyAutomaton, FuzzyAutomaton) {
        (
            FuzzyAutomaton::from_json(include_str!("../fixtures/A.json")).unwrap(),
            FuzzyAutomaton::from_json(include_str!("../fixtures/Aprime.json")).unwrap(),
        )
    }

    fn rel(entries: &[(&str, &str, &str)]) -> FuzzyRelation {
        entries
            .iter()
            .map(|(x, y, a)| ((x.to_string(), y.to_string()), d(a)))
            .collect()
    }

    fn sim_godel() -> FuzzyRelation {
        FuzzyRelation::from_json(include_str!("../fixtures/greatest_sim_godel.json")).unwrap()
    }

    fn bisim_godel() -> FuzzyRelation {
        FuzzyRelation::from_json(include_str!("../fixtures/greatest_bisim_godel.json")).unwrap()
    }

    #[test]
    fn fuzzy_simulation_checks() {
        let (a, b) = fig();
        assert!(check_fuzzy_simulation(&Goedel, &a, &b, &sim_godel()).unwrap());
        assert!(check_fuzzy_simulation(&Goedel, &a, &b, &FuzzyRelation::new()).unwrap());

        let mut raised = sim_godel();
        raised.set("u", "u'", d("0.8"));
        assert!(!check_fuzzy_simulation(&Goedel, &a, &b, &raised).unwrap());

        let stray = rel(&[("u", "zz", "1")]);
        assert!(matches!(
            check_fuzzy_simulation(&Goedel, &a, &b, &stray),
            Err(Error::UnknownState { .. })
        ));
    }

    #[test]
    fn crisp_checks() {
        let (a, b) = fig();
        assert!(!check_crisp_simulation(&Goedel, &a, &b, &sim_godel()).unwrap());
        assert!(!check_crisp_bisimulation(&Goedel, &a, &b, &bisim_godel()).unwrap());
        let id = FuzzyRelation::identity(a.states().iter().map(String::as_str));
        for k in LatticeKind::ALL {
            assert!(check_crisp_simulation(&k, &a, &a, &id).unwrap());
            assert!(check_crisp_bisimulation(&k, &a, &a, &id).unwrap());
        }
    }

    #[test]
    fn fuzzy_bisimulation_checks() {
        let (a, b) = fig();
        assert!(check_fuzzy_bisimulation(&Goedel, &a, &b, &bisim_godel()).unwrap());
        assert!(!check_fuzzy_bisimulation(&Goedel, &a, &b, &sim_godel()).unwrap());
        assert!(check_fuzzy_bisimulation(&Goedel, &a, &b, &FuzzyRelation::new()).unwrap());
    }

    #[test]
    fn norms() {
        let (a, b) = fig();
        assert_eq!(sim_norm(&Goedel, &a, &b, &sim_godel()), d("0.6"));
        let product_sim = rel(&[
            ("u", "u'", "7/8"),
            ("v", "v'", "1"),
            ("v", "w'", "1"),
            ("w", "v'", "6/7"),
            ("w", "w'", "1"),
        ]);
        assert_eq!(sim_norm(&Product, &a, &b, &product_sim), d("0.75"));
        let product_bisim = rel(&[
            ("u", "u'", "6/7"),
            ("v", "v'", "1"),
            ("v", "w'", "6/7"),
            ("w", "v'", "6/7"),
            ("w", "w'", "1"),
        ]);
        assert_eq!(bisim_norm(&Product, &a, &b, &product_bisim), d("36/49"));
    }

    #[test]
    fn greatest_simulation_examples() {
        let (a, b) = fig();
        let report = greatest_fuzzy_simulation(&Goedel, &a, &b, DEFAULT_MAX_ITERS);
        assert!(report.converged);
        assert_eq!(report.relation, sim_godel());
        assert_eq!(report.norm, d("3/5"));

        let report = greatest_fuzzy_simulation(&Product, &a, &b, DEFAULT_MAX_ITERS);
        assert!(report.converged);
        assert_eq!(
            report.relation,
            rel(&[
                ("u", "u'", "7/8"),
                ("v", "v'", "1"),
                ("v", "w'", "1"),
                ("w", "v'", "6/7"),
                ("w", "w'", "1"),
            ])
        );
        assert_eq!(report.norm, d("3/4"));
    }

    #[test]
    fn greatest_bisimulation_examples() {
        let (a, b) = fig();
        let report = greatest_fuzzy_bisimulation(&Goedel, &a, &b, DEFAULT_MAX_ITERS);
        assert!(report.converged);
        assert_eq!(report.relation, bisim_godel());
        assert_eq!(report.norm, d("3/5"));

        let report = greatest_fuzzy_bisimulation(&Product, &a, &b, DEFAULT_MAX_ITERS);
        assert!(report.converged);
        assert_eq!(
            report.relation,
            rel(&[
                ("u", "u'", "6/7"),
                ("v", "v'", "1"),
                ("v", "w'", "6/7"),
                ("w", "v'", "6/7"),
                ("w", "w'", "1"),
            ])
        );
        assert_eq!(report.norm, d("36/49"));
    }

    #[test]
    fn auto_relations_are_preorders_and_equivalences() {
        let (a, b) = fig();
        for k in LatticeKind::ALL {
            for aut in [&a, &b] {
                let states = || aut.states().iter().map(String::as_str);
                let sim = greatest_fuzzy_simulation(&k, aut, aut, DEFAULT_MAX_ITERS);
                assert!(sim.converged);
                assert!(sim.norm.is_one());
                assert!(is_reflexive(&sim.relation, states()));
                assert!(is_transitive(&k, &sim.relation));

                let bisim = greatest_fuzzy_bisimulation(&k, aut, aut, DEFAULT_MAX_ITERS);
                assert!(bisim.converged);
                assert!(bisim.norm.is_one());
                assert!(is_reflexive(&bisim.relation, states()));
                assert!(is_symmetric(&bisim.relation));
                assert!(is_transitive(&k, &bisim.relation));
            }
        }
    }

    #[test]
    fn iteration_cap_is_reported() {
        let (a, b) = fig();
        let report = greatest_fuzzy_simulation(&Goedel, &a, &b, 1);
        assert!(!report.converged);
        assert_eq!(report.iterations, 1);
        // still an upper bound on the true answer
        assert!(sim_godel().leq(&report.relation));
    }

    #[test]
    fn approximate_relations() {
        let (a, b) = fig();
        let ones = FuzzyRelation::from_json(include_str!("../fixtures/approx_all_ones.json")).unwrap();
        let lambda = d("0.6");
        assert_eq!(approx_from_greatest(&sim_godel(), &lambda), ones);
        assert_eq!(approx_from_greatest(&bisim_godel(), &lambda), ones);
        assert!(check_lambda_approx_simulation(&Goedel, &a, &b, &ones, &lambda).unwrap());
        assert!(check_lambda_approx_bisimulation(&Goedel, &a, &b, &ones, &lambda).unwrap());
        assert!(check_lambda_approx_simulation(&Goedel, &a, &b, &FuzzyRelation::new(), &Degree::zero()).unwrap());
        assert!(!check_lambda_approx_simulation(&Goedel, &a, &b, &ones, &d("0.61")).unwrap());

        assert_eq!(
            check_lambda_approx_simulation(&Product, &a, &b, &ones, &lambda),
            Err(Error::NotHeyting)
        );
        assert_eq!(
            max_approx_lambda(&Lukasiewicz, RelationKind::Simulation, &a, &b, 10),
            Err(Error::NotHeyting)
        );
    }

    #[test]
    fn approx_from_greatest_edges() {
        let phi = sim_godel();
        let all_ones = approx_from_greatest(&phi, &Degree::zero());
        assert!(all_ones.iter().all(|(_, _, d)| d.is_one()));
        assert_eq!(all_ones.len(), phi.len());
        let low = rel(&[("u", "u'", "0.3"), ("v", "v'", "0.9")]);
        assert_eq!(approx_from_greatest(&low, &Degree::one()), low);
    }

    #[test]
    fn max_lambda_values() {
        let (a, b) = fig();
        let sim = max_approx_lambda(&Goedel, RelationKind::Simulation, &a, &b, DEFAULT_MAX_ITERS);
        assert_eq!(sim, Ok(d("3/5")));
        let bisim = max_approx_lambda(&Goedel, RelationKind::Bisimulation, &a, &b, DEFAULT_MAX_ITERS);
        assert_eq!(bisim, Ok(d("3/5")));
        let auto = max_approx_lambda(&Goedel, RelationKind::Simulation, &a, &a, DEFAULT_MAX_ITERS);
        assert_eq!(auto, Ok(Degree::one()));
    }

    #[test]
    fn preservation_reports() {
        let (a, b) = fig();
        let report = verify_preservation(&Goedel, RelationKind::Simulation, &a, &b, &sim_godel(), 2).unwrap();
        assert!(report.pointwise_ok && report.global_ok && report.exact);
        assert_eq!(report.language_degree, d("0.6"));

        let empty = verify_preservation(&Goedel, RelationKind::Simulation, &a, &b, &FuzzyRelation::new(), 0).unwrap();
        assert!(empty.pointwise_ok && empty.global_ok);

        let report = verify_preservation(&Goedel, RelationKind::Bisimulation, &a, &b, &bisim_godel(), 2).unwrap();
        assert!(report.pointwise_ok && report.global_ok && report.exact);
        assert_eq!(report.language_degree, d("0.6"));

        // too short to be exact: words of length 1 are live
        let short = verify_preservation(&Goedel, RelationKind::Simulation, &a, &b, &sim_godel(), 0).unwrap();
        assert!(!short.exact);
    }
}
