//! The full automaton `P_n^Π` and the hard-word family.
//!
//! Letters of the full automaton are total maps from ordered state pairs to
//! priority sets; a transition exists exactly on the non-empty entries, with
//! the ≽-optimal priority of the entry. The astronomically large full
//! alphabet is never materialized: letters are registered on demand and
//! deduplicated by content.
//!
//! For every full FNHT `t` two letters β_t ⊆ γ_t are defined clause by clause
//! from the labels of `t`; the hard word is the lasso `(β_t γ_t^{h-1})^ω`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::automata::{opt_priority, LassoWord, ParityAutomaton, ParityTransition};
use crate::fnht::{enumerate_fnhts, EnumOptions, Fnht};
use crate::set::StateSet;
use crate::{Error, Result};

/// A letter of the full automaton: a sparse map from state pairs to
/// non-empty priority sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MatrixLetter {
    entries: BTreeMap<(usize, usize), BTreeSet<i32>>,
}

impl MatrixLetter {
    pub fn add(&mut self, from: usize, to: usize, priority: i32) {
        self.entries.entry((from, to)).or_default().insert(priority);
    }

    pub fn entry(&self, from: usize, to: usize) -> Option<&BTreeSet<i32>> {
        self.entries.get(&(from, to))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BTreeSet<i32>)> {
        self.entries.iter()
    }

    /// Entrywise superset check; γ_t ⊇ β_t holds by construction.
    pub fn contains_letter(&self, other: &MatrixLetter) -> bool {
        other.entries.iter().all(|(k, ps)| {
            self.entries
                .get(k)
                .map(|own| ps.is_subset(own))
                .unwrap_or(false)
        })
    }

    pub fn to_json_string(&self, state_names: &[String]) -> String {
        let doc = MatrixLetterDoc {
            matrix: self
                .entries
                .iter()
                .map(|(&(p, q), ps)| {
                    (
                        format!("{},{}", state_names[p], state_names[q]),
                        ps.iter().copied().collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json_str(s: &str, state_names: &[String]) -> Result<MatrixLetter> {
        let doc: MatrixLetterDoc = serde_json::from_str(s)?;
        let mut letter = MatrixLetter::default();
        for (key, ps) in doc.matrix {
            let (p, q) = key
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad matrix key `{key}`")))?;
            let pi = state_names
                .iter()
                .position(|n| n == p)
                .ok_or_else(|| Error::UnknownState(p.to_string()))?;
            let qi = state_names
                .iter()
                .position(|n| n == q)
                .ok_or_else(|| Error::UnknownState(q.to_string()))?;
            for pr in ps {
                letter.add(pi, qi, pr);
            }
        }
        Ok(letter)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixLetterDoc {
    matrix: BTreeMap<String, Vec<i32>>,
}

/// The full automaton over `n` states with an on-demand letter registry.
#[derive(Debug, Clone)]
pub struct FullAutomaton {
    n: usize,
    priorities: Vec<i32>,
    letters: Vec<(String, MatrixLetter)>,
    index: HashMap<MatrixLetter, usize>,
}

impl FullAutomaton {
    /// `priorities` must be a contiguous interval with min ∈ {0,1} and
    /// optimal priority ≥ 2.
    pub fn new(n: usize, priorities: &[i32]) -> Result<Self> {
        if n == 0 || n > crate::set::MAX_STATES {
            return Err(Error::TooManyStates {
                max: crate::set::MAX_STATES,
                got: n,
            });
        }
        let mut ps = priorities.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let (&min, &max) = match (ps.first(), ps.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::EmptyPrioritySet),
        };
        if min != 0 && min != 1 {
            return Err(Error::Format("priority set must start at 0 or 1".into()));
        }
        if ps.len() as i32 != max - min + 1 {
            return Err(Error::Format("priority set must be contiguous".into()));
        }
        let opt = opt_priority(ps.iter().copied())?;
        if opt < 2 {
            return Err(Error::MaxPriorityTooLow(opt));
        }
        Ok(FullAutomaton {
            n,
            priorities: ps,
            letters: Vec::new(),
            index: HashMap::new(),
        })
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn priorities(&self) -> &[i32] {
        &self.priorities
    }

    pub fn max_priority(&self) -> i32 {
        *self.priorities.last().unwrap()
    }

    pub fn state_names(&self) -> Vec<String> {
        (0..self.n).map(|i| format!("q{i}")).collect()
    }

    /// Register a letter, deduplicated by content; returns its index. The
    /// name of the first registration wins.
    pub fn register(&mut self, letter: MatrixLetter, name: &str) -> usize {
        if let Some(&i) = self.index.get(&letter) {
            return i;
        }
        let i = self.letters.len();
        self.index.insert(letter.clone(), i);
        self.letters.push((name.to_string(), letter));
        i
    }

    pub fn letter(&self, i: usize) -> &MatrixLetter {
        &self.letters[i].1
    }

    pub fn letter_names(&self) -> Vec<String> {
        self.letters.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Render the registered fragment as an explicit parity automaton:
    /// all states initial, transitions on the non-empty matrix entries with
    /// the ≽-optimal priority of the entry.
    ///
    /// The priority set is part of the automaton's definition, not of the
    /// fragment: a non-initial, unreachable padding state carries a self-loop
    /// at the top priority so the rendered automaton spans the declared range
    /// even when the registered letters do not.
    pub fn to_parity(&self) -> ParityAutomaton {
        let mut transitions = Vec::new();
        for (li, (_, letter)) in self.letters.iter().enumerate() {
            for (&(from, to), ps) in letter.entries() {
                let priority = opt_priority(ps.iter().copied()).expect("entries are non-empty");
                transitions.push(ParityTransition {
                    from,
                    letter: li,
                    to,
                    priority,
                });
            }
        }
        let mut states = self.state_names();
        if !self.letters.is_empty() {
            // one padding loop for the top priority, one for the maximal even
            // priority when the top one is odd
            let top = self.max_priority();
            let mut pads = vec![top];
            if top % 2 != 0 {
                pads.push(top - 1);
            }
            for (i, priority) in pads.into_iter().enumerate() {
                states.push(format!("_pad{i}"));
                transitions.push(ParityTransition {
                    from: self.n + i,
                    letter: 0,
                    to: self.n + i,
                    priority,
                });
            }
        }
        ParityAutomaton::from_parts(
            states,
            self.letter_names(),
            StateSet::full(self.n),
            transitions,
        )
    }
}

/// The letter β_t of a full FNHT `t`, built clause by clause.
pub fn beta_letter(t: &Fnht, priorities: &[i32]) -> MatrixLetter {
    let has = |p: i32| priorities.contains(&p);
    let mut letter = MatrixLetter::default();
    for (path, labels) in t.nodes() {
        let level = t.level(path);
        if path.is_stepchild() {
            if has(level + 1) {
                for p in labels.states.iter() {
                    for q in labels.states.iter() {
                        letter.add(p, q, level + 1);
                    }
                }
            }
            let children = t.natural_children(path);
            let mut child_union = StateSet::EMPTY;
            for c in &children {
                child_union = child_union.union(t.labels(c).unwrap().states);
            }
            for p in labels.recurrent.iter() {
                for q in child_union.iter() {
                    letter.add(p, q, level);
                }
            }
            // older sibling (larger index) to younger sibling (smaller index)
            for (ci, c) in children.iter().enumerate() {
                for c2 in children.iter().skip(ci + 1) {
                    for p in t.labels(c2).unwrap().states.iter() {
                        for q in t.labels(c).unwrap().states.iter() {
                            letter.add(p, q, level);
                        }
                    }
                }
            }
        } else {
            for p in labels.pure.iter() {
                for q in labels.recurrent.iter() {
                    letter.add(p, q, level);
                }
            }
            for p in labels.recurrent.iter() {
                for q in labels.recurrent.iter() {
                    letter.add(p, q, level - 1);
                }
            }
            for p in labels.pure.iter() {
                for q in labels.pure.iter() {
                    letter.add(p, q, level - 1);
                }
            }
        }
    }
    letter
}

/// The letter γ_t: β_t plus the stabilising clauses.
pub fn gamma_letter(t: &Fnht, priorities: &[i32]) -> MatrixLetter {
    let has = |p: i32| priorities.contains(&p);
    let mut letter = beta_letter(t, priorities);
    for (path, labels) in t.nodes() {
        let level = t.level(path);
        if path.is_stepchild() {
            for p in labels.recurrent.iter() {
                for q in labels.recurrent.iter() {
                    letter.add(p, q, level);
                }
            }
        } else if has(level - 2) {
            for p in labels.recurrent.iter() {
                for q in labels.recurrent.iter() {
                    letter.add(p, q, level - 2);
                }
            }
            for p in labels.pure.iter() {
                for q in labels.pure.iter() {
                    letter.add(p, q, level - 2);
                }
            }
        }
    }
    letter
}

/// The default period length: `|fnht(Q, π)| + 1`.
pub fn default_h(num_states: usize, max_priority: i32) -> Result<usize> {
    let all = enumerate_fnhts(num_states, max_priority, &EnumOptions::default())?;
    Ok(all.len() + 1)
}

/// The hard word `(β_t γ_t^{h-1})^ω` for a full FNHT `t`, registering both
/// letters with the automaton.
pub fn hard_word(fa: &mut FullAutomaton, t: &Fnht, h: usize) -> Result<LassoWord> {
    if h < 2 {
        return Err(Error::Format("hard-word parameter h must be ≥ 2".into()));
    }
    let priorities = fa.priorities().to_vec();
    let beta = fa.register(beta_letter(t, &priorities), "beta");
    let gamma = fa.register(gamma_letter(t, &priorities), "gamma");
    let mut period = vec![beta];
    period.extend(std::iter::repeat(gamma).take(h - 1));
    LassoWord::new(Vec::new(), period)
}
