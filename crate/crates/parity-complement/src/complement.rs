//! The two-phase complementation construction.
//!
//! The complement Büchi automaton runs a plain subset construction in phase
//! one, may nondeterministically transfer into a marked flattened tree whose
//! root carries the current subset image, and then tracks the tree
//! deterministically in phase two. A phase-two step that cannot be completed
//! to a valid FNHT blocks, which surfaces as the absence of a successor.

use std::collections::HashMap;

use crate::automata::{better_or_equal, BuchiAutomaton, BuchiTransition, ParityAutomaton};
use crate::fnht::{
    enumerate_fnhts_with_root, mfts_of, next_marker, Fnht, MarkerKind, Mft, NodeLabels, NodePath,
    PathStep,
};
use crate::set::StateSet;
use crate::{Error, Result};

/// A state of the complement automaton: subset phase or tree phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComplementState {
    Subset(StateSet),
    Tree(Mft),
}

/// Result of one deterministic step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Advance {
        state: ComplementState,
        accepting: bool,
    },
    Blocked,
}

/// `δ`: the image of a state set under a letter.
pub fn delta(p: &ParityAutomaton, s: StateSet, letter: usize) -> StateSet {
    let mut out = StateSet::EMPTY;
    for t in p.transitions() {
        if t.letter == letter && s.contains(t.from) {
            out.insert(t.to);
        }
    }
    out
}

/// `δ_i`: the image restricted to transitions whose priority is ≽ `i`.
/// `i` may be negative; that arises in the marker update.
pub fn delta_pri(p: &ParityAutomaton, s: StateSet, letter: usize, i: i32) -> StateSet {
    let mut out = StateSet::EMPTY;
    for t in p.transitions() {
        if t.letter == letter && s.contains(t.from) && better_or_equal(t.priority, i) {
            out.insert(t.to);
        }
    }
    out
}

/// One phase-one step. Only the transition on the empty subset is accepting.
pub fn subset_step(p: &ParityAutomaton, s: StateSet, letter: usize) -> StepOutcome {
    StepOutcome::Advance {
        state: ComplementState::Subset(delta(p, s, letter)),
        accepting: s.is_empty(),
    }
}

/// All transfer targets from subset `s` under `letter`: every valid MFT whose
/// root carries exactly the subset image. Empty when the image is empty.
pub fn transfer_targets(
    p: &ParityAutomaton,
    s: StateSet,
    letter: usize,
    cap: Option<usize>,
) -> Result<Vec<Mft>> {
    let root = delta(p, s, letter);
    if root.is_empty() {
        return Ok(Vec::new());
    }
    let max_priority = p.max_priority().ok_or(Error::MaxPriorityTooLow(i32::MIN))?;
    let mut out = Vec::new();
    for t in enumerate_fnhts_with_root(root, max_priority, cap)? {
        out.extend(mfts_of(&t));
        if let Some(cap) = cap {
            if out.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        }
    }
    Ok(out)
}

/// One phase-two step: propagate labels level-wise, prune top-down, complete
/// the forced labels, then update marker and marking. Blocks when the result
/// is not a valid FNHT.
pub fn mft_step(p: &ParityAutomaton, m: &Mft, letter: usize) -> StepOutcome {
    let t = &m.tree;
    let universe = StateSet::full(p.num_states());
    let max_priority = match p.max_priority() {
        Some(mp) => mp,
        None => return StepOutcome::Blocked,
    };

    // raw label propagation per node kind
    let mut raw_states: HashMap<NodePath, StateSet> = HashMap::new();
    let mut raw_recurrent: HashMap<NodePath, StateSet> = HashMap::new();
    for (path, labels) in t.nodes() {
        let level = t.level(path);
        if path.is_stepchild() {
            raw_states.insert(path.clone(), delta_pri(p, labels.states, letter, level + 1));
        } else {
            raw_states.insert(path.clone(), delta_pri(p, labels.states, letter, level - 1));
            raw_recurrent.insert(
                path.clone(),
                delta_pri(p, labels.recurrent, letter, level - 1)
                    .union(delta_pri(p, labels.states, letter, level)),
            );
        }
    }

    // top-down pruning; BTreeMap order visits parents and older siblings first
    let mut new: std::collections::BTreeMap<NodePath, NodeLabels> = Default::default();
    for (path, _) in t.nodes() {
        if path.is_root() {
            new.insert(
                path.clone(),
                NodeLabels {
                    states: raw_states[path],
                    pure: StateSet::EMPTY,
                    recurrent: StateSet::EMPTY,
                },
            );
        } else if path.is_natural_child() {
            let parent = path.parent().unwrap();
            let PathStep::Nat(c) = *path.0.last().unwrap() else {
                unreachable!()
            };
            let mut taken = StateSet::EMPTY;
            for c2 in 0..c {
                taken = taken.union(raw_states[&parent.child(PathStep::Nat(c2))]);
            }
            let states = raw_states[path].intersect(new[&parent].states).minus(taken);
            let recurrent = raw_recurrent[path].intersect(states);
            new.insert(
                path.clone(),
                NodeLabels {
                    states,
                    pure: states.minus(recurrent),
                    recurrent,
                },
            );
        } else {
            // stepchild inherits the pure states of its natural parent; the
            // raw stepchild rule is superseded but must stay consistent
            let parent = path.parent().unwrap();
            let states = new[&parent].pure;
            debug_assert!(states.is_subset_of(raw_states[path]));
            new.insert(
                path.clone(),
                NodeLabels {
                    states,
                    pure: StateSet::EMPTY,
                    recurrent: StateSet::EMPTY,
                },
            );
        }
    }
    // complete the forced stepchild recurrent sets
    let paths: Vec<NodePath> = new.keys().cloned().collect();
    for path in &paths {
        if path.is_stepchild() {
            let mut children = StateSet::EMPTY;
            for c in t.natural_children(path) {
                children = children.union(new[&c].states);
            }
            let labels = new.get_mut(path).unwrap();
            labels.recurrent = labels.states.minus(children);
        }
    }

    let candidate = Fnht::from_nodes(new, t.max_even());
    if !candidate.validate(universe, max_priority).is_empty() {
        return StepOutcome::Blocked;
    }

    // marker update
    let marker_level = t.level(&m.marker.node);
    let new_labels = candidate.labels(&m.marker.node).unwrap();
    let surviving = match m.marker.kind {
        MarkerKind::R => {
            delta_pri(p, m.marking, letter, marker_level - 1).intersect(new_labels.recurrent)
        }
        MarkerKind::P => {
            delta_pri(p, m.marking, letter, marker_level - 3).intersect(new_labels.pure)
        }
    };
    if surviving.is_empty() {
        let (marker, marking) = next_marker(&candidate, &m.marker)
            .expect("a valid FNHT always has a marker candidate");
        StepOutcome::Advance {
            state: ComplementState::Tree(Mft {
                tree: candidate,
                marker,
                marking,
            }),
            accepting: true,
        }
    } else {
        StepOutcome::Advance {
            state: ComplementState::Tree(Mft {
                tree: candidate,
                marker: m.marker.clone(),
                marking: surviving,
            }),
            accepting: false,
        }
    }
}

/// The explicit complement automaton, with per-phase state counts.
#[derive(Debug, Clone)]
pub struct Complement {
    pub automaton: BuchiAutomaton,
    pub subset_states: usize,
    pub tree_states: usize,
}

fn subset_name(p: &ParityAutomaton, s: StateSet) -> String {
    let names: Vec<&str> = s.iter().map(|i| p.states()[i].as_str()).collect();
    format!("S:{{{}}}", names.join(","))
}

fn state_name(p: &ParityAutomaton, state: &ComplementState) -> String {
    match state {
        ComplementState::Subset(s) => subset_name(p, *s),
        ComplementState::Tree(m) => m.state_id(p.states()),
    }
}

/// Build the reachable part of the complement Büchi automaton of a normalized
/// parity automaton with π_e ≥ 2.
///
/// `cap` bounds the number of reachable states; exceeding it is an error.
pub fn build_complement(p: &ParityAutomaton, cap: Option<usize>) -> Result<Complement> {
    p.max_even_priority()?;
    let initial = ComplementState::Subset(p.initial());
    let mut index: HashMap<ComplementState, usize> = HashMap::new();
    let mut order: Vec<ComplementState> = Vec::new();
    let mut worklist: Vec<usize> = Vec::new();
    let mut transitions: Vec<BuchiTransition> = Vec::new();
    let mut transfer_cache: HashMap<(StateSet, usize), Vec<Mft>> = HashMap::new();

    let intern = |state: ComplementState,
                      index: &mut HashMap<ComplementState, usize>,
                      order: &mut Vec<ComplementState>,
                      worklist: &mut Vec<usize>|
     -> Result<usize> {
        if let Some(&i) = index.get(&state) {
            return Ok(i);
        }
        if let Some(cap) = cap {
            if order.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
        }
        let i = order.len();
        index.insert(state.clone(), i);
        order.push(state);
        worklist.push(i);
        Ok(i)
    };

    intern(initial, &mut index, &mut order, &mut worklist)?;
    while let Some(i) = worklist.pop() {
        let state = order[i].clone();
        for letter in 0..p.alphabet().len() {
            match &state {
                ComplementState::Subset(s) => {
                    let StepOutcome::Advance {
                        state: succ,
                        accepting,
                    } = subset_step(p, *s, letter)
                    else {
                        unreachable!()
                    };
                    let j = intern(succ, &mut index, &mut order, &mut worklist)?;
                    transitions.push(BuchiTransition {
                        from: i,
                        letter,
                        to: j,
                        accepting,
                    });
                    let targets = match transfer_cache.get(&(*s, letter)) {
                        Some(ts) => ts.clone(),
                        None => {
                            let ts = transfer_targets(p, *s, letter, cap)?;
                            transfer_cache.insert((*s, letter), ts.clone());
                            ts
                        }
                    };
                    for m in targets {
                        let j = intern(
                            ComplementState::Tree(m),
                            &mut index,
                            &mut order,
                            &mut worklist,
                        )?;
                        transitions.push(BuchiTransition {
                            from: i,
                            letter,
                            to: j,
                            accepting: false,
                        });
                    }
                }
                ComplementState::Tree(m) => match mft_step(p, m, letter) {
                    StepOutcome::Blocked => {}
                    StepOutcome::Advance {
                        state: succ,
                        accepting,
                    } => {
                        let j = intern(succ, &mut index, &mut order, &mut worklist)?;
                        transitions.push(BuchiTransition {
                            from: i,
                            letter,
                            to: j,
                            accepting,
                        });
                    }
                },
            }
        }
    }

    let subset_states = order
        .iter()
        .filter(|s| matches!(s, ComplementState::Subset(_)))
        .count();
    let tree_states = order.len() - subset_states;
    let names: Vec<String> = order.iter().map(|s| state_name(p, s)).collect();
    let automaton = BuchiAutomaton::from_parts(
        names,
        p.alphabet().to_vec(),
        StateSet::singleton(0),
        transitions,
    );
    Ok(Complement {
        automaton,
        subset_states,
        tree_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ParityTransition;
    use crate::fnht::Marker;
    use std::collections::BTreeMap;

    // one state q; letter a has a priority-2 self-loop, letter b a priority-1
    // self-loop; accepts exactly the words with infinitely many a
    fn p_ab() -> ParityAutomaton {
        ParityAutomaton::from_parts(
            vec!["q".into()],
            vec!["a".into(), "b".into()],
            StateSet::singleton(0),
            vec![
                ParityTransition { from: 0, letter: 0, to: 0, priority: 2 },
                ParityTransition { from: 0, letter: 1, to: 0, priority: 1 },
            ],
        )
    }

    // as p_ab but letter b carries priority 3, so the max priority is odd
    fn p_ab3() -> ParityAutomaton {
        ParityAutomaton::from_parts(
            vec!["q".into()],
            vec!["a".into(), "b".into()],
            StateSet::singleton(0),
            vec![
                ParityTransition { from: 0, letter: 0, to: 0, priority: 2 },
                ParityTransition { from: 0, letter: 1, to: 0, priority: 3 },
            ],
        )
    }

    fn m0() -> Mft {
        let q = StateSet::singleton(0);
        let mut nodes = BTreeMap::new();
        nodes.insert(
            NodePath::root(),
            NodeLabels { states: q, pure: StateSet::EMPTY, recurrent: StateSet::EMPTY },
        );
        nodes.insert(
            NodePath::parse("0").unwrap(),
            NodeLabels { states: q, pure: q, recurrent: StateSet::EMPTY },
        );
        Mft {
            tree: Fnht::from_nodes(nodes, 2),
            marker: Marker { node: NodePath::parse("0").unwrap(), kind: MarkerKind::P },
            marking: q,
        }
    }

    fn root_leaf_mft() -> Mft {
        let q = StateSet::singleton(0);
        let mut nodes = BTreeMap::new();
        nodes.insert(
            NodePath::root(),
            NodeLabels { states: q, pure: StateSet::EMPTY, recurrent: q },
        );
        Mft {
            tree: Fnht::from_nodes(nodes, 2),
            marker: Marker { node: NodePath::root(), kind: MarkerKind::R },
            marking: q,
        }
    }

    #[test]
    fn delta_pri_examples() {
        // two states a, b; one letter; priorities 1, 2, 3 on the three edges
        let p = ParityAutomaton::from_parts(
            vec!["a".into(), "b".into()],
            vec!["x".into()],
            StateSet::singleton(0),
            vec![
                ParityTransition { from: 0, letter: 0, to: 0, priority: 1 },
                ParityTransition { from: 0, letter: 0, to: 1, priority: 2 },
                ParityTransition { from: 1, letter: 0, to: 1, priority: 3 },
            ],
        );
        let a = StateSet::singleton(0);
        let b = StateSet::singleton(1);
        assert_eq!(delta(&p, a, 0), StateSet::full(2));
        assert_eq!(delta_pri(&p, a, 0, 2), b);
        assert_eq!(delta_pri(&p, b, 0, 1), StateSet::EMPTY);
        assert_eq!(delta_pri(&p, StateSet::full(2), 0, 3), StateSet::full(2));
        // negative thresholds are legal and keep even priorities only
        assert_eq!(delta_pri(&p, a, 0, -1), b);
    }

    #[test]
    fn subset_step_accepts_only_on_empty() {
        let p = p_ab();
        match subset_step(&p, StateSet::singleton(0), 0) {
            StepOutcome::Advance { state, accepting } => {
                assert_eq!(state, ComplementState::Subset(StateSet::singleton(0)));
                assert!(!accepting);
            }
            StepOutcome::Blocked => panic!("subset phase never blocks"),
        }
        match subset_step(&p, StateSet::EMPTY, 0) {
            StepOutcome::Advance { state, accepting } => {
                assert_eq!(state, ComplementState::Subset(StateSet::EMPTY));
                assert!(accepting);
            }
            StepOutcome::Blocked => panic!("subset phase never blocks"),
        }
    }

    #[test]
    fn transfer_targets_single_state() {
        let p = p_ab();
        let targets = transfer_targets(&p, StateSet::singleton(0), 0, None).unwrap();
        assert_eq!(targets, vec![m0()]);
        assert!(transfer_targets(&p, StateSet::EMPTY, 0, None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn mft_step_blocks_on_recurrent_only_image() {
        // priority-2 letter: the leaf loses its pure states, not a valid tree
        assert_eq!(mft_step(&p_ab(), &m0(), 0), StepOutcome::Blocked);
    }

    #[test]
    fn mft_step_accepting_self_loop() {
        // priority-1 letter: marking drains, breakpoint fires, tree unchanged
        assert_eq!(
            mft_step(&p_ab(), &m0(), 1),
            StepOutcome::Advance {
                state: ComplementState::Tree(m0()),
                accepting: true,
            }
        );
    }

    #[test]
    fn mft_step_root_leaf_nonaccepting() {
        // priority-2 letter keeps the marking alive: no breakpoint
        assert_eq!(
            mft_step(&p_ab3(), &root_leaf_mft(), 0),
            StepOutcome::Advance {
                state: ComplementState::Tree(root_leaf_mft()),
                accepting: false,
            }
        );
    }

    #[test]
    fn mft_step_root_leaf_accepting() {
        // priority-3 letter kills the marking at level 1: breakpoint fires
        assert_eq!(
            mft_step(&p_ab3(), &root_leaf_mft(), 1),
            StepOutcome::Advance {
                state: ComplementState::Tree(root_leaf_mft()),
                accepting: true,
            }
        );
    }

    #[test]
    fn build_complement_two_states() {
        let c = build_complement(&p_ab(), None).unwrap();
        assert_eq!(c.subset_states, 1);
        assert_eq!(c.tree_states, 1);
        assert_eq!(c.automaton.num_states(), 2);
        // subset: a and b keep the subset plus one transfer each;
        // tree: blocked on a, accepting self-loop on b
        assert_eq!(c.automaton.transitions().len(), 5);
        assert_eq!(
            c.automaton
                .transitions()
                .iter()
                .filter(|t| t.accepting)
                .count(),
            1
        );
    }

    #[test]
    fn build_complement_of_empty_language() {
        // q0 -2-> q1 -1-> q1: sole run sees priority 1 forever, so L(P) = ∅
        let p = ParityAutomaton::from_parts(
            vec!["q0".into(), "q1".into()],
            vec!["a".into()],
            StateSet::singleton(0),
            vec![
                ParityTransition { from: 0, letter: 0, to: 1, priority: 2 },
                ParityTransition { from: 1, letter: 0, to: 1, priority: 1 },
            ],
        );
        let c = build_complement(&p, None).unwrap();
        let w = crate::automata::LassoWord::new(vec![], vec![0]).unwrap();
        assert!(crate::analysis::buchi_lasso_member(&c.automaton, &w).unwrap());
    }

    #[test]
    fn build_complement_respects_cap() {
        assert!(matches!(
            build_complement(&p_ab(), Some(1)),
            Err(Error::CapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn build_complement_is_deterministic() {
        let a = build_complement(&p_ab3(), None).unwrap();
        let b = build_complement(&p_ab3(), None).unwrap();
        assert_eq!(a.automaton.states(), b.automaton.states());
        assert_eq!(a.automaton.transitions(), b.automaton.transitions());
    }
}
