//! Core automaton representations, the priority order and normalization.
//!
//! Both automaton kinds use transition-based acceptance: a parity automaton
//! attaches a priority to every transition, a Büchi automaton flags a subset
//! of transitions as accepting. State and letter ids are opaque strings mapped
//! to dense indices; all set-valued operations work on [`StateSet`] indices.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::set::{StateSet, MAX_STATES};
use crate::{Error, Result};

/// `i ≻ j`: `i` is strictly better for acceptance than `j`.
///
/// Any even priority beats any odd one, larger evens beat smaller evens, and
/// smaller odds beat larger odds. Accepts arbitrary integers; negative odd
/// arguments arise in the marker update of the complementation construction.
pub fn strictly_better(i: i32, j: i32) -> bool {
    let i_even = i % 2 == 0;
    let j_even = j % 2 == 0;
    (i_even && !j_even) || (i_even && j_even && i > j) || (!i_even && !j_even && i < j)
}

/// `i ≽ j`: equality or `i ≻ j`.
pub fn better_or_equal(i: i32, j: i32) -> bool {
    i == j || strictly_better(i, j)
}

/// The ≽-maximum of a non-empty priority set: the priority that dominates
/// acceptance.
pub fn opt_priority<I: IntoIterator<Item = i32>>(priorities: I) -> Result<i32> {
    let mut best: Option<i32> = None;
    for p in priorities {
        best = Some(match best {
            None => p,
            Some(b) if strictly_better(p, b) => p,
            Some(b) => b,
        });
    }
    best.ok_or(Error::EmptyPrioritySet)
}

/// A transition of a parity automaton, in index form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParityTransition {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
    pub priority: i32,
}

/// A transition of a Büchi automaton, in index form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BuchiTransition {
    pub from: usize,
    pub letter: usize,
    pub to: usize,
    pub accepting: bool,
}

/// Explicit-state nondeterministic parity automaton with per-transition
/// priorities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: StateSet,
    transitions: Vec<ParityTransition>,
}

/// Explicit-state nondeterministic Büchi automaton with accepting transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: StateSet,
    transitions: Vec<BuchiTransition>,
}

/// An ultimately periodic word `u · v^ω`, over letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<usize>,
    period: Vec<usize>,
}

impl LassoWord {
    pub fn new(prefix: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// The letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Total number of distinct positions in the finite unfolding
    /// (`|u| + |v|`).
    pub fn unfolded_len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Successor position in the unfolding; wraps from the last period
    /// position back to the first.
    pub fn next_position(&self, pos: usize) -> usize {
        if pos + 1 < self.unfolded_len() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// The same ω-word with the period rotated left by `k`.
    pub fn rotate_period(&self, k: usize) -> LassoWord {
        let n = self.period.len();
        let k = k % n;
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(&self.period[..k]);
        let mut period = self.period[k..].to_vec();
        period.extend_from_slice(&self.period[..k]);
        LassoWord { prefix, period }
    }

    /// The same ω-word with the period repeated `k` times.
    pub fn unroll_period(&self, k: usize) -> LassoWord {
        assert!(k >= 1);
        let period = self.period.repeat(k);
        LassoWord {
            prefix: self.prefix.clone(),
            period,
        }
    }
}

fn index_names(kind: &str, names: &[String]) -> Result<HashMap<String, usize>> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::Format(format!("duplicate {kind} id `{n}`")));
        }
    }
    Ok(map)
}

impl ParityAutomaton {
    /// Build from named parts. Fails on unknown ids, duplicate transitions,
    /// an empty initial set, or negative priorities.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: &[String],
        transitions: &[(String, String, String, i32)],
    ) -> Result<Self> {
        if states.len() > MAX_STATES {
            return Err(Error::TooManyStates {
                max: MAX_STATES,
                got: states.len(),
            });
        }
        let state_ix = index_names("state", &states)?;
        let letter_ix = index_names("letter", &alphabet)?;
        let mut init = StateSet::EMPTY;
        for s in initial {
            init.insert(*state_ix.get(s).ok_or_else(|| Error::UnknownState(s.clone()))?);
        }
        if init.is_empty() {
            return Err(Error::EmptyInitialSet);
        }
        let mut seen = std::collections::HashSet::new();
        let mut ts = Vec::with_capacity(transitions.len());
        for (from, letter, to, priority) in transitions {
            let f = *state_ix.get(from).ok_or_else(|| Error::UnknownState(from.clone()))?;
            let l = *letter_ix.get(letter).ok_or_else(|| Error::UnknownLetter(letter.clone()))?;
            let t = *state_ix.get(to).ok_or_else(|| Error::UnknownState(to.clone()))?;
            if *priority < 0 {
                return Err(Error::NegativePriority(*priority));
            }
            if !seen.insert((f, l, t)) {
                return Err(Error::DuplicateTransition(from.clone(), letter.clone(), to.clone()));
            }
            ts.push(ParityTransition {
                from: f,
                letter: l,
                to: t,
                priority: *priority,
            });
        }
        Ok(ParityAutomaton {
            states,
            alphabet,
            initial: init,
            transitions: ts,
        })
    }

    /// Build directly from index-form parts; intended for generated automata.
    pub fn from_parts(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: StateSet,
        transitions: Vec<ParityTransition>,
    ) -> Self {
        debug_assert!(!initial.is_empty());
        ParityAutomaton {
            states,
            alphabet,
            initial,
            transitions,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> StateSet {
        self.initial
    }

    pub fn transitions(&self) -> &[ParityTransition] {
        &self.transitions
    }

    pub fn letter_index(&self, name: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    /// The priority set Π, sorted ascending. Empty iff there are no
    /// transitions.
    pub fn priorities(&self) -> Vec<i32> {
        let mut ps: Vec<i32> = self.transitions.iter().map(|t| t.priority).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn max_priority(&self) -> Option<i32> {
        self.transitions.iter().map(|t| t.priority).max()
    }

    /// The maximal even priority π_e = opt Π. The complementation
    /// construction needs π_e ≥ 2; anything lower is an error.
    pub fn max_even_priority(&self) -> Result<i32> {
        let opt = opt_priority(self.transitions.iter().map(|t| t.priority))
            .map_err(|_| Error::MaxPriorityTooLow(i32::MIN))?;
        if opt % 2 != 0 || opt < 2 {
            return Err(Error::MaxPriorityTooLow(opt));
        }
        Ok(opt)
    }

    /// Bring Π into normal form: first shift everything down by 2 until
    /// min Π ∈ {0,1}, then squash holes lowest first (pri > h maps to
    /// pri − 2). Structure and per-run acceptance are unchanged.
    pub fn normalize(&self) -> ParityAutomaton {
        let mut out = self.clone();
        let Some(&min) = out.priorities().first() else {
            return out;
        };
        let shift = min - (min % 2);
        if shift > 0 {
            for t in &mut out.transitions {
                t.priority -= shift;
            }
        }
        loop {
            let ps = out.priorities();
            let (&min, &max) = (ps.first().unwrap(), ps.last().unwrap());
            let hole = (min + 1..max).find(|h| !ps.contains(h));
            match hole {
                None => break,
                Some(h) => {
                    for t in &mut out.transitions {
                        if t.priority > h {
                            t.priority -= 2;
                        }
                    }
                }
            }
        }
        out
    }
}

impl BuchiAutomaton {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: &[String],
        transitions: &[(String, String, String, bool)],
    ) -> Result<Self> {
        let as_parity: Vec<_> = transitions
            .iter()
            .map(|(f, l, t, acc)| (f.clone(), l.clone(), t.clone(), if *acc { 2 } else { 1 }))
            .collect();
        let p = ParityAutomaton::new(states, alphabet, initial, &as_parity)?;
        Ok(BuchiAutomaton {
            states: p.states,
            alphabet: p.alphabet,
            initial: p.initial,
            transitions: p
                .transitions
                .iter()
                .map(|t| BuchiTransition {
                    from: t.from,
                    letter: t.letter,
                    to: t.to,
                    accepting: t.priority == 2,
                })
                .collect(),
        })
    }

    pub fn from_parts(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: StateSet,
        transitions: Vec<BuchiTransition>,
    ) -> Self {
        debug_assert!(!initial.is_empty());
        BuchiAutomaton {
            states,
            alphabet,
            initial,
            transitions,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> StateSet {
        self.initial
    }

    pub fn transitions(&self) -> &[BuchiTransition] {
        &self.transitions
    }

    pub fn letter_index(&self, name: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }
}

/// Render a Büchi automaton as the parity automaton with Π = {1,2}:
/// accepting transitions get priority 2, the rest priority 1.
pub fn buchi_as_parity(b: &BuchiAutomaton) -> ParityAutomaton {
    ParityAutomaton {
        states: b.states.clone(),
        alphabet: b.alphabet.clone(),
        initial: b.initial,
        transitions: b
            .transitions
            .iter()
            .map(|t| ParityTransition {
                from: t.from,
                letter: t.letter,
                to: t.to,
                priority: if t.accepting { 2 } else { 1 },
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonDoc {
    kind: String,
    states: Vec<String>,
    initial: Vec<String>,
    alphabet: Vec<String>,
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    from: String,
    letter: String,
    to: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    priority: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    accepting: Option<bool>,
}

/// Either automaton kind, as read from the JSON wire format.
#[derive(Debug, Clone)]
pub enum Automaton {
    Parity(ParityAutomaton),
    Buchi(BuchiAutomaton),
}

impl Automaton {
    pub fn from_json_str(s: &str) -> Result<Automaton> {
        let doc: AutomatonDoc = serde_json::from_str(s)?;
        match doc.kind.as_str() {
            "parity" => {
                let ts = doc
                    .transitions
                    .iter()
                    .map(|t| {
                        if t.accepting.is_some() {
                            return Err(Error::Format(
                                "parity transitions carry `priority`, not `accepting`".into(),
                            ));
                        }
                        let p = t.priority.ok_or_else(|| {
                            Error::Format("parity transition missing `priority`".into())
                        })?;
                        Ok((t.from.clone(), t.letter.clone(), t.to.clone(), p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Automaton::Parity(ParityAutomaton::new(
                    doc.states,
                    doc.alphabet,
                    &doc.initial,
                    &ts,
                )?))
            }
            "buchi" => {
                let ts = doc
                    .transitions
                    .iter()
                    .map(|t| {
                        if t.priority.is_some() {
                            return Err(Error::Format(
                                "buchi transitions carry `accepting`, not `priority`".into(),
                            ));
                        }
                        let a = t.accepting.ok_or_else(|| {
                            Error::Format("buchi transition missing `accepting`".into())
                        })?;
                        Ok((t.from.clone(), t.letter.clone(), t.to.clone(), a))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Automaton::Buchi(BuchiAutomaton::new(
                    doc.states,
                    doc.alphabet,
                    &doc.initial,
                    &ts,
                )?))
            }
            other => Err(Error::Format(format!("unknown automaton kind `{other}`"))),
        }
    }

    pub fn to_json_string(&self) -> String {
        let doc = match self {
            Automaton::Parity(p) => AutomatonDoc {
                kind: "parity".into(),
                states: p.states.clone(),
                initial: p.initial.iter().map(|i| p.states[i].clone()).collect(),
                alphabet: p.alphabet.clone(),
                transitions: p
                    .transitions
                    .iter()
                    .map(|t| TransitionDoc {
                        from: p.states[t.from].clone(),
                        letter: p.alphabet[t.letter].clone(),
                        to: p.states[t.to].clone(),
                        priority: Some(t.priority),
                        accepting: None,
                    })
                    .collect(),
            },
            Automaton::Buchi(b) => AutomatonDoc {
                kind: "buchi".into(),
                states: b.states.clone(),
                initial: b.initial.iter().map(|i| b.states[i].clone()).collect(),
                alphabet: b.alphabet.clone(),
                transitions: b
                    .transitions
                    .iter()
                    .map(|t| TransitionDoc {
                        from: b.states[t.from].clone(),
                        letter: b.alphabet[t.letter].clone(),
                        to: b.states[t.to].clone(),
                        priority: None,
                        accepting: Some(t.accepting),
                    })
                    .collect(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority_order_examples() {
        assert!(better_or_equal(2, 1));
        assert!(better_or_equal(4, 2));
        assert!(better_or_equal(1, 3));
        assert!(better_or_equal(3, 3));
        assert!(!better_or_equal(3, 1));
        // negative odd arguments occur in the marker update
        assert!(better_or_equal(-1, 1));
        assert!(!better_or_equal(1, -1));
        assert!(better_or_equal(0, 1));
    }

    #[test]
    fn opt_priority_examples() {
        assert_eq!(opt_priority([1, 2, 3]).unwrap(), 2);
        assert_eq!(opt_priority([5]).unwrap(), 5);
        assert_eq!(opt_priority([1, 3]).unwrap(), 1);
        assert!(matches!(opt_priority([]), Err(Error::EmptyPrioritySet)));
    }

    fn single_loop(priorities: &[i32]) -> ParityAutomaton {
        // one state, one letter per priority, self-loops
        let alphabet: Vec<String> = (0..priorities.len()).map(|i| format!("a{i}")).collect();
        let ts: Vec<_> = priorities
            .iter()
            .enumerate()
            .map(|(i, &p)| ("q".to_string(), format!("a{i}"), "q".to_string(), p))
            .collect();
        ParityAutomaton::new(vec!["q".into()], alphabet, &["q".into()], &ts).unwrap()
    }

    #[test]
    fn normalize_shifts_down() {
        let p = single_loop(&[2, 3, 4]).normalize();
        assert_eq!(p.priorities(), vec![0, 1, 2]);
    }

    #[test]
    fn normalize_squashes_holes() {
        let p = single_loop(&[1, 3, 4]).normalize();
        assert_eq!(p.priorities(), vec![1, 2]);
        // 1 stays 1, 3 -> 1, 4 -> 2
        let pris: Vec<i32> = p.transitions().iter().map(|t| t.priority).collect();
        assert_eq!(pris, vec![1, 1, 2]);
    }

    #[test]
    fn normalize_fixpoint() {
        let p = single_loop(&[1, 2]);
        assert_eq!(p.normalize(), p);
    }

    #[test]
    fn max_even_priority_cases() {
        assert_eq!(single_loop(&[1, 2]).max_even_priority().unwrap(), 2);
        assert_eq!(single_loop(&[0, 1, 2, 3]).max_even_priority().unwrap(), 2);
        assert!(single_loop(&[0, 1]).max_even_priority().is_err());
    }

    #[test]
    fn buchi_rendering() {
        let b = BuchiAutomaton::new(
            vec!["q".into()],
            vec!["a".into(), "b".into()],
            &["q".into()],
            &[
                ("q".into(), "a".into(), "q".into(), true),
                ("q".into(), "b".into(), "q".into(), false),
            ],
        )
        .unwrap();
        let p = buchi_as_parity(&b);
        let pris: Vec<i32> = p.transitions().iter().map(|t| t.priority).collect();
        assert_eq!(pris, vec![2, 1]);
        assert_eq!(p.priorities(), vec![1, 2]);
    }

    #[test]
    fn json_rejects_unknown_fields_and_duplicates() {
        let bad = r#"{"kind":"parity","states":["q"],"initial":["q"],"alphabet":["a"],
            "transitions":[{"from":"q","letter":"a","to":"q","priority":1}],"extra":1}"#;
        assert!(Automaton::from_json_str(bad).is_err());
        let dup = r#"{"kind":"parity","states":["q"],"initial":["q"],"alphabet":["a"],
            "transitions":[{"from":"q","letter":"a","to":"q","priority":1},
                           {"from":"q","letter":"a","to":"q","priority":2}]}"#;
        assert!(matches!(
            Automaton::from_json_str(dup),
            Err(Error::DuplicateTransition(..))
        ));
    }

    #[test]
    fn json_roundtrip_is_byte_stable() {
        let src = r#"{"kind":"buchi","states":["p","q"],"initial":["p"],"alphabet":["a"],
            "transitions":[{"from":"p","letter":"a","to":"q","accepting":true},
                           {"from":"q","letter":"a","to":"p","accepting":false}]}"#;
        let once = Automaton::from_json_str(src).unwrap().to_json_string();
        let twice = Automaton::from_json_str(&once).unwrap().to_json_string();
        assert_eq!(once, twice);
    }

    #[test]
    fn lasso_positions() {
        let w = LassoWord::new(vec![0, 1], vec![2, 3]).unwrap();
        assert_eq!(w.letter_at(0), 0);
        assert_eq!(w.letter_at(3), 3);
        assert_eq!(w.letter_at(4), 2);
        assert_eq!(w.next_position(3), 2);
        assert!(LassoWord::new(vec![], vec![]).is_err());
    }
}
