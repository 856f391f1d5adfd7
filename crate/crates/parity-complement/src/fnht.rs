//! Flattened nested history trees (FNHTs) and marked flattened trees (MFTs).
//!
//! An FNHT is an ordered labelled tree over node paths built from natural
//! numbers and the stepchild symbol `s`. Node kinds strictly alternate: the
//! root is a stepchild, stepchildren have only natural children, natural
//! children only stepchildren. Every node carries a state set `l_s`; natural
//! children split theirs into pure states `l_p` and recurrent states `l_r`.
//! Levels are derived, never stored: the root sits at the maximal even
//! priority and every stepchild edge descends by two.
//!
//! An MFT adds a round-robin breakpoint marker `(node, r|p)` together with the
//! non-empty marking set currently being drained.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::set::StateSet;
use crate::{Error, Result};

/// One step of a node path: a natural-child slot or the stepchild slot.
///
/// `Nat` sorts before `Step`, so the derived path order is depth-first
/// pre-order with natural children in sibling order before the stepchild.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathStep {
    Nat(u32),
    Step,
}

/// A node identifier: the path from the root. The empty path is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodePath(pub Vec<PathStep>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// A node is a stepchild iff its path is empty or ends in the stepchild
    /// symbol.
    pub fn is_stepchild(&self) -> bool {
        matches!(self.0.last(), None | Some(PathStep::Step))
    }

    pub fn is_natural_child(&self) -> bool {
        !self.is_stepchild()
    }

    pub fn parent(&self) -> Option<NodePath> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodePath(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, step: PathStep) -> NodePath {
        let mut p = self.0.clone();
        p.push(step);
        NodePath(p)
    }

    /// Path string form: `""`, `"0"`, `"0.s"`, `"0.s.1"`.
    pub fn to_string_form(&self) -> String {
        self.0
            .iter()
            .map(|s| match s {
                PathStep::Nat(c) => c.to_string(),
                PathStep::Step => "s".to_string(),
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(s: &str) -> Result<NodePath> {
        if s.is_empty() {
            return Ok(NodePath::root());
        }
        let mut steps = Vec::new();
        for part in s.split('.') {
            if part == "s" {
                steps.push(PathStep::Step);
            } else {
                let c: u32 = part
                    .parse()
                    .map_err(|_| Error::Format(format!("bad path segment `{part}`")))?;
                steps.push(PathStep::Nat(c));
            }
        }
        Ok(NodePath(steps))
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_form())
    }
}

/// The level of a node: the maximal even priority minus two per stepchild
/// step in the path.
pub fn level_of(path: &NodePath, max_even: i32) -> i32 {
    let steps = path.0.iter().filter(|s| **s == PathStep::Step).count() as i32;
    max_even - 2 * steps
}

/// State labels of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeLabels {
    /// `l_s`
    pub states: StateSet,
    /// `l_p`
    pub pure: StateSet,
    /// `l_r`
    pub recurrent: StateSet,
}

/// A flattened nested history tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fnht {
    nodes: BTreeMap<NodePath, NodeLabels>,
    max_even: i32,
}

/// Marker kind: breakpoint on the recurrent states or on the pure states of
/// a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MarkerKind {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "p")]
    P,
}

/// A breakpoint marker: a node plus the kind of set being tracked there.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marker {
    pub node: NodePath,
    pub kind: MarkerKind,
}

/// A marked flattened tree: an FNHT plus marker and non-empty marking set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mft {
    pub tree: Fnht,
    pub marker: Marker,
    pub marking: StateSet,
}

impl Fnht {
    pub fn from_nodes(nodes: BTreeMap<NodePath, NodeLabels>, max_even: i32) -> Self {
        Fnht { nodes, max_even }
    }

    pub fn max_even(&self) -> i32 {
        self.max_even
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodePath, &NodeLabels)> {
        self.nodes.iter()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn labels(&self, path: &NodePath) -> Option<&NodeLabels> {
        self.nodes.get(path)
    }

    pub fn contains(&self, path: &NodePath) -> bool {
        self.nodes.contains_key(path)
    }

    pub fn root_states(&self) -> StateSet {
        self.nodes[&NodePath::root()].states
    }

    pub fn level(&self, path: &NodePath) -> i32 {
        level_of(path, self.max_even)
    }

    /// Natural children of `path`, in sibling order.
    pub fn natural_children(&self, path: &NodePath) -> Vec<NodePath> {
        let mut out = Vec::new();
        for c in 0.. {
            let child = path.child(PathStep::Nat(c));
            if self.nodes.contains_key(&child) {
                out.push(child);
            } else {
                break;
            }
        }
        out
    }

    pub fn is_leaf(&self, path: &NodePath) -> bool {
        !self.nodes.contains_key(&path.child(PathStep::Step))
            && !self.nodes.contains_key(&path.child(PathStep::Nat(0)))
    }

    /// The FNHT is full iff the root carries the whole state universe.
    pub fn is_full(&self, universe: StateSet) -> bool {
        self.root_states() == universe
    }

    /// Check every FNHT constraint, including the root-leaf rule against the
    /// parity of `max_priority` and containment in the state universe.
    /// Returns the list of violated constraints, empty when valid.
    pub fn validate(&self, universe: StateSet, max_priority: i32) -> Vec<String> {
        let mut v = Vec::new();
        let expected_even = max_priority - max_priority.rem_euclid(2);
        if self.max_even != expected_even {
            v.push(format!(
                "max_even {} does not match max priority {}",
                self.max_even, max_priority
            ));
        }
        if !self.nodes.contains_key(&NodePath::root()) {
            v.push("tree has no root".into());
            return v;
        }
        for (path, labels) in &self.nodes {
            let name = if path.is_root() {
                "ε".to_string()
            } else {
                path.to_string_form()
            };
            if let Some(parent) = path.parent() {
                match self.nodes.get(&parent) {
                    None => v.push(format!("tree not prefix closed at {name}")),
                    Some(_) => {
                        let parent_step = parent.is_stepchild();
                        let last = *path.0.last().unwrap();
                        if parent_step && last == PathStep::Step {
                            v.push(format!("stepchild {name} of a stepchild"));
                        }
                        if !parent_step && matches!(last, PathStep::Nat(_)) {
                            v.push(format!("natural child {name} of a natural child"));
                        }
                    }
                }
                if let PathStep::Nat(c) = *path.0.last().unwrap() {
                    if c > 0 && !self.nodes.contains_key(&parent.child(PathStep::Nat(c - 1))) {
                        v.push(format!("order closure violated at {name}"));
                    }
                }
            }
            if self.level(path) < 2 {
                v.push(format!("level below 2 at {name}"));
            }
            if labels.states.is_empty() {
                v.push(format!("empty state label at {name}"));
            }
            if !labels.states.is_subset_of(universe) {
                v.push(format!("state label outside universe at {name}"));
            }
            let leaf = self.is_leaf(path);
            if leaf && path.is_stepchild() {
                if !path.is_root() {
                    v.push(format!("stepchild leaf {name}"));
                } else if max_priority % 2 == 0 {
                    v.push("root leaf requires odd max priority".into());
                }
            }
            if path.is_stepchild() {
                if !labels.pure.is_empty() {
                    v.push(format!("stepchild {name} has pure states"));
                }
                let children = self.natural_children(path);
                let mut union = labels.recurrent;
                let mut disjoint = true;
                let mut covered = StateSet::EMPTY;
                for c in &children {
                    let cs = self.nodes[c].states;
                    if !cs.is_disjoint_from(covered) || !cs.is_disjoint_from(labels.recurrent) {
                        disjoint = false;
                    }
                    covered = covered.union(cs);
                    union = union.union(cs);
                }
                if !disjoint {
                    v.push("stepchild partition not disjoint".into());
                }
                if union != labels.states {
                    v.push(format!("stepchild partition does not cover l_s at {name}"));
                }
            } else {
                if labels.pure.is_empty() {
                    v.push(format!("natural child {name} has empty pure set"));
                }
                if !labels.pure.is_disjoint_from(labels.recurrent) {
                    v.push(format!("pure and recurrent overlap at {name}"));
                }
                if labels.pure.union(labels.recurrent) != labels.states {
                    v.push(format!("pure/recurrent do not partition l_s at {name}"));
                }
                let step = path.child(PathStep::Step);
                if let Some(sl) = self.nodes.get(&step) {
                    if sl.states != labels.pure {
                        v.push(format!("stepchild states differ from pure states at {name}"));
                    }
                }
            }
        }
        v
    }

    /// Deterministic order used for golden counts: tree size, then node
    /// paths, then label sets ordered by state index.
    pub fn canonical_cmp(&self, other: &Fnht) -> Ordering {
        self.nodes
            .len()
            .cmp(&other.nodes.len())
            .then_with(|| {
                let a: Vec<&NodePath> = self.nodes.keys().collect();
                let b: Vec<&NodePath> = other.nodes.keys().collect();
                a.cmp(&b)
            })
            .then_with(|| {
                for ((_, la), (_, lb)) in self.nodes.iter().zip(other.nodes.iter()) {
                    let o = cmp_sets(la.states, lb.states)
                        .then_with(|| cmp_sets(la.pure, lb.pure))
                        .then_with(|| cmp_sets(la.recurrent, lb.recurrent));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

/// Lexicographic comparison of the sorted member index sequences.
fn cmp_sets(a: StateSet, b: StateSet) -> Ordering {
    a.iter().cmp(b.iter())
}

impl Mft {
    /// The marking is full iff it equals the whole marked set.
    pub fn is_full_marking(&self) -> bool {
        let labels = &self.tree.labels(&self.marker.node).expect("marker node in tree");
        match self.marker.kind {
            MarkerKind::R => self.marking == labels.recurrent,
            MarkerKind::P => self.marking == labels.pure,
        }
    }

    /// MFT-specific constraints on top of the underlying FNHT's.
    pub fn validate(&self, universe: StateSet, max_priority: i32) -> Vec<String> {
        let mut v = self.tree.validate(universe, max_priority);
        match self.tree.labels(&self.marker.node) {
            None => v.push("marker node not in tree".into()),
            Some(labels) => {
                if self.marking.is_empty() {
                    v.push("empty marking".into());
                }
                match self.marker.kind {
                    MarkerKind::R => {
                        if !self.marking.is_subset_of(labels.recurrent) {
                            v.push("marking not within recurrent states".into());
                        }
                    }
                    MarkerKind::P => {
                        if !self.tree.is_leaf(&self.marker.node) {
                            v.push("pure marker on a non-leaf".into());
                        }
                        if !self.marking.is_subset_of(labels.pure) {
                            v.push("marking not within pure states".into());
                        }
                    }
                }
            }
        }
        v
    }

    pub fn canonical_cmp(&self, other: &Mft) -> Ordering {
        self.tree
            .canonical_cmp(&other.tree)
            .then_with(|| self.marker.node.cmp(&other.marker.node))
            .then_with(|| self.marker.kind.cmp(&other.marker.kind))
            .then_with(|| cmp_sets(self.marking, other.marking))
    }
}

// ---------------------------------------------------------------------------
// Markers and round-robin order
// ---------------------------------------------------------------------------

/// All structural marker slots of a tree, in round-robin order: depth-first
/// pre-order, the r-slot of a node before its p-slot, p-slots only at leaves.
pub fn marker_slots(t: &Fnht) -> Vec<Marker> {
    let mut slots = Vec::new();
    for (path, _) in t.nodes() {
        slots.push(Marker {
            node: path.clone(),
            kind: MarkerKind::R,
        });
        if t.is_leaf(path) {
            slots.push(Marker {
                node: path.clone(),
                kind: MarkerKind::P,
            });
        }
    }
    slots
}

fn slot_set(t: &Fnht, m: &Marker) -> StateSet {
    let labels = t.labels(&m.node).expect("slot node in tree");
    match m.kind {
        MarkerKind::R => labels.recurrent,
        MarkerKind::P => labels.pure,
    }
}

/// The first marker at or after slot position `start` whose tracked set is
/// non-empty, with that full set as marking.
fn scan_marker(t: &Fnht, slots: &[Marker], start: usize) -> Result<(Marker, StateSet)> {
    for j in 0..slots.len() {
        let m = &slots[(start + j) % slots.len()];
        let set = slot_set(t, m);
        if !set.is_empty() {
            return Ok((m.clone(), set));
        }
    }
    Err(Error::NoMarkerAvailable)
}

/// The next marker strictly after `current` in round-robin order whose set is
/// non-empty; wraps around and may return `current` itself.
pub fn next_marker(t: &Fnht, current: &Marker) -> Result<(Marker, StateSet)> {
    let slots = marker_slots(t);
    let idx = slots
        .iter()
        .position(|m| m == current)
        .ok_or(Error::NoMarkerAvailable)?;
    scan_marker(t, &slots, idx + 1)
}

/// The first valid marker in round-robin order; entry point of a fresh
/// breakpoint cycle.
pub fn first_marker(t: &Fnht) -> Result<(Marker, StateSet)> {
    let slots = marker_slots(t);
    scan_marker(t, &slots, 0)
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Options for the FNHT/MFT enumerators.
#[derive(Debug, Clone, Default)]
pub struct EnumOptions {
    /// Emit only full FNHTs (root label = universe).
    pub full_only: bool,
    /// Abort with an error once more than this many items would be emitted.
    pub cap: Option<usize>,
}

struct Budget {
    cap: Option<usize>,
}

impl Budget {
    fn charge(&self, count: usize) -> Result<()> {
        match self.cap {
            Some(cap) if count > cap => Err(Error::CapExceeded { cap }),
            _ => Ok(()),
        }
    }
}

type Subtree = Vec<(NodePath, NodeLabels)>;

fn prefixed(step: PathStep, subtree: &Subtree) -> Vec<(NodePath, NodeLabels)> {
    subtree
        .iter()
        .map(|(p, l)| {
            let mut path = vec![step];
            path.extend_from_slice(&p.0);
            (NodePath(path), *l)
        })
        .collect()
}

/// Ordered partitions of `set` into non-empty blocks, first block first.
fn ordered_partitions(set: StateSet) -> Vec<Vec<StateSet>> {
    if set.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // fix the lowest element into the first block to avoid duplicates? No:
    // order matters, so every non-empty subset may lead.
    for first in set.non_empty_subsets() {
        for mut rest in ordered_partitions(set.minus(first)) {
            let mut blocks = vec![first];
            blocks.append(&mut rest);
            out.push(blocks);
        }
    }
    out
}

/// Subtrees rooted at a natural child with state set `set` at `level`.
fn enumerate_natural(set: StateSet, level: i32, budget: &Budget) -> Result<Vec<Subtree>> {
    let mut out = Vec::new();
    for pure in set.non_empty_subsets() {
        let labels = NodeLabels {
            states: set,
            pure,
            recurrent: set.minus(pure),
        };
        // leaf variant
        out.push(vec![(NodePath::root(), labels)]);
        budget.charge(out.len())?;
        if level - 2 >= 2 {
            for step_tree in enumerate_stepchild(pure, level - 2, false, budget)? {
                let mut nodes = vec![(NodePath::root(), labels)];
                nodes.extend(prefixed(PathStep::Step, &step_tree));
                out.push(nodes);
                budget.charge(out.len())?;
            }
        }
    }
    Ok(out)
}

/// Subtrees rooted at a stepchild with state set `set` at `level`.
/// `allow_leaf` holds only for the root of a tree with odd maximal priority.
fn enumerate_stepchild(
    set: StateSet,
    level: i32,
    allow_leaf: bool,
    budget: &Budget,
) -> Result<Vec<Subtree>> {
    let mut out = Vec::new();
    if allow_leaf {
        let labels = NodeLabels {
            states: set,
            pure: StateSet::EMPTY,
            recurrent: set,
        };
        out.push(vec![(NodePath::root(), labels)]);
        budget.charge(out.len())?;
    }
    for recurrent in set.subsets() {
        let rest = set.minus(recurrent);
        if rest.is_empty() {
            continue; // no children would make this a stepchild leaf
        }
        let labels = NodeLabels {
            states: set,
            pure: StateSet::EMPTY,
            recurrent,
        };
        for blocks in ordered_partitions(rest) {
            // per-block subtree choices, combined as a cartesian product
            let mut choices: Vec<Vec<Subtree>> = Vec::with_capacity(blocks.len());
            for block in &blocks {
                choices.push(enumerate_natural(*block, level, budget)?);
            }
            let mut picks = vec![0usize; blocks.len()];
            loop {
                let mut nodes = vec![(NodePath::root(), labels)];
                for (c, pick) in picks.iter().enumerate() {
                    nodes.extend(prefixed(PathStep::Nat(c as u32), &choices[c][*pick]));
                }
                out.push(nodes);
                budget.charge(out.len())?;
                // advance the odometer
                let mut i = picks.len();
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    picks[i] += 1;
                    if picks[i] < choices[i].len() {
                        break;
                    }
                    picks[i] = 0;
                }
                if picks.iter().all(|p| *p == 0) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn assemble(nodes: Vec<(NodePath, NodeLabels)>, max_even: i32) -> Fnht {
    Fnht {
        nodes: nodes.into_iter().collect(),
        max_even,
    }
}

fn even_of(max_priority: i32) -> Result<i32> {
    let even = max_priority - max_priority.rem_euclid(2);
    if even < 2 {
        return Err(Error::MaxPriorityTooLow(even));
    }
    Ok(even)
}

/// Every valid FNHT whose root carries exactly `root`, in canonical order.
pub fn enumerate_fnhts_with_root(
    root: StateSet,
    max_priority: i32,
    cap: Option<usize>,
) -> Result<Vec<Fnht>> {
    let max_even = even_of(max_priority)?;
    if root.is_empty() {
        return Ok(Vec::new());
    }
    let budget = Budget { cap };
    let allow_leaf = max_priority % 2 != 0;
    let mut out: Vec<Fnht> = enumerate_stepchild(root, max_even, allow_leaf, &budget)?
        .into_iter()
        .map(|nodes| assemble(nodes, max_even))
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// Every valid FNHT over a `universe_size`-state universe with the given
/// maximal priority, each exactly once, in canonical order.
pub fn enumerate_fnhts(
    universe_size: usize,
    max_priority: i32,
    opts: &EnumOptions,
) -> Result<Vec<Fnht>> {
    let universe = StateSet::full(universe_size);
    let budget = Budget { cap: opts.cap };
    let mut out = Vec::new();
    let roots: Vec<StateSet> = if opts.full_only {
        vec![universe]
    } else {
        universe.non_empty_subsets().collect()
    };
    for root in roots {
        for t in enumerate_fnhts_with_root(root, max_priority, opts.cap)? {
            out.push(t);
            budget.charge(out.len())?;
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// All MFTs over a fixed FNHT: every valid marker paired with every non-empty
/// subset of its tracked set.
pub fn mfts_of(t: &Fnht) -> Vec<Mft> {
    let mut out = Vec::new();
    for slot in marker_slots(t) {
        let set = slot_set(t, &slot);
        for marking in set.non_empty_subsets() {
            out.push(Mft {
                tree: t.clone(),
                marker: slot.clone(),
                marking,
            });
        }
    }
    out
}

/// Every valid MFT over the universe, each exactly once, in canonical order.
pub fn enumerate_mfts(
    universe_size: usize,
    max_priority: i32,
    opts: &EnumOptions,
) -> Result<Vec<Mft>> {
    let budget = Budget { cap: opts.cap };
    let mut out = Vec::new();
    for t in enumerate_fnhts(universe_size, max_priority, opts)? {
        for m in mfts_of(&t) {
            out.push(m);
            budget.charge(out.len())?;
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Counting injections
// ---------------------------------------------------------------------------

/// Map a non-full FNHT to a full one by giving the root a fresh youngest
/// natural child holding the missing states as pure states.
pub fn inject_nonfull_fnht(t: &Fnht, universe: StateSet) -> Result<Fnht> {
    if t.is_full(universe) {
        return Err(Error::AlreadyFull);
    }
    let missing = universe.minus(t.root_states());
    let mut nodes = t.nodes.clone();
    let fresh = NodePath::root().child(PathStep::Nat(
        t.natural_children(&NodePath::root()).len() as u32,
    ));
    nodes.insert(
        fresh,
        NodeLabels {
            states: missing,
            pure: missing,
            recurrent: StateSet::EMPTY,
        },
    );
    nodes.get_mut(&NodePath::root()).unwrap().states = universe;
    Ok(Fnht {
        nodes,
        max_even: t.max_even,
    })
}

/// Map an MFT with non-full marking to one with full marking.
///
/// A fresh node holding the marking as pure states is attached — as youngest
/// natural sibling of the marker node when that is a natural child, as its
/// youngest natural child when it is a stepchild — and the marking is removed
/// from the tracked set, whose remainder becomes the (now full) marking. The
/// single-node tree is the corner case: the marking moves into the root's
/// recurrent set and the remainder into a fresh child.
pub fn inject_nonfull_mft(m: &Mft) -> Result<Mft> {
    if m.is_full_marking() {
        return Err(Error::MarkingAlreadyFull);
    }
    let t = &m.tree;
    let marker = &m.marker;
    if t.num_nodes() == 1 {
        // single-node tree: marker is necessarily (ε, r)
        let root_states = t.root_states();
        let rest = root_states.minus(m.marking);
        let mut nodes = BTreeMap::new();
        nodes.insert(
            NodePath::root(),
            NodeLabels {
                states: root_states,
                pure: StateSet::EMPTY,
                recurrent: m.marking,
            },
        );
        nodes.insert(
            NodePath::root().child(PathStep::Nat(0)),
            NodeLabels {
                states: rest,
                pure: rest,
                recurrent: StateSet::EMPTY,
            },
        );
        return Ok(Mft {
            tree: Fnht {
                nodes,
                max_even: t.max_even,
            },
            marker: marker.clone(),
            marking: m.marking,
        });
    }
    let mut nodes = t.nodes.clone();
    let fresh = if marker.node.is_natural_child() {
        let parent = marker.node.parent().unwrap();
        parent.child(PathStep::Nat(t.natural_children(&parent).len() as u32))
    } else {
        marker
            .node
            .child(PathStep::Nat(t.natural_children(&marker.node).len() as u32))
    };
    nodes.insert(
        fresh,
        NodeLabels {
            states: m.marking,
            pure: m.marking,
            recurrent: StateSet::EMPTY,
        },
    );
    let labels = nodes.get_mut(&marker.node).unwrap();
    let new_marking = match marker.kind {
        MarkerKind::P => {
            labels.pure = labels.pure.minus(m.marking);
            labels.states = labels.states.minus(m.marking);
            labels.pure
        }
        MarkerKind::R => {
            labels.recurrent = labels.recurrent.minus(m.marking);
            if marker.node.is_natural_child() {
                labels.states = labels.states.minus(m.marking);
            }
            labels.recurrent
        }
    };
    Ok(Mft {
        tree: Fnht {
            nodes,
            max_even: t.max_even,
        },
        marker: marker.clone(),
        marking: new_marking,
    })
}

// ---------------------------------------------------------------------------
// JSON form (debugging and golden tests)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    path: String,
    states: Vec<String>,
    pure: Vec<String>,
    recurrent: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FnhtDoc {
    max_even: i32,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkerDoc {
    node: String,
    kind: MarkerKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MftDoc {
    max_even: i32,
    nodes: Vec<NodeDoc>,
    marker: MarkerDoc,
    marking: Vec<String>,
}

fn set_to_names(set: StateSet, names: &[String]) -> Vec<String> {
    set.iter().map(|i| names[i].clone()).collect()
}

fn names_to_set(ids: &[String], names: &[String]) -> Result<StateSet> {
    let mut set = StateSet::EMPTY;
    for id in ids {
        let i = names
            .iter()
            .position(|n| n == id)
            .ok_or_else(|| Error::UnknownState(id.clone()))?;
        set.insert(i);
    }
    Ok(set)
}

impl Fnht {
    fn node_docs(&self, names: &[String]) -> Vec<NodeDoc> {
        self.nodes
            .iter()
            .map(|(p, l)| NodeDoc {
                path: p.to_string_form(),
                states: set_to_names(l.states, names),
                pure: set_to_names(l.pure, names),
                recurrent: set_to_names(l.recurrent, names),
            })
            .collect()
    }

    pub fn to_json_string(&self, names: &[String]) -> String {
        let doc = FnhtDoc {
            max_even: self.max_even,
            nodes: self.node_docs(names),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json_str(s: &str, names: &[String]) -> Result<Fnht> {
        let doc: FnhtDoc = serde_json::from_str(s)?;
        let mut nodes = BTreeMap::new();
        for n in &doc.nodes {
            let path = NodePath::parse(&n.path)?;
            let labels = NodeLabels {
                states: names_to_set(&n.states, names)?,
                pure: names_to_set(&n.pure, names)?,
                recurrent: names_to_set(&n.recurrent, names)?,
            };
            if nodes.insert(path, labels).is_some() {
                return Err(Error::Format(format!("duplicate node `{}`", n.path)));
            }
        }
        Ok(Fnht {
            nodes,
            max_even: doc.max_even,
        })
    }
}

impl Mft {
    pub fn to_json_string(&self, names: &[String]) -> String {
        let doc = MftDoc {
            max_even: self.tree.max_even,
            nodes: self.tree.node_docs(names),
            marker: MarkerDoc {
                node: self.marker.node.to_string_form(),
                kind: self.marker.kind,
            },
            marking: set_to_names(self.marking, names),
        };
        serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
    }

    pub fn from_json_str(s: &str, names: &[String]) -> Result<Mft> {
        let doc: MftDoc = serde_json::from_str(s)?;
        let tree = Fnht::from_json_str(
            &serde_json::to_string(&FnhtDoc {
                max_even: doc.max_even,
                nodes: doc.nodes,
            })
            .unwrap(),
            names,
        )?;
        Ok(Mft {
            tree,
            marker: Marker {
                node: NodePath::parse(&doc.marker.node)?,
                kind: doc.marker.kind,
            },
            marking: names_to_set(&doc.marking, names)?,
        })
    }

    /// Compact stable identifier, used to name phase-2 states of the
    /// complement automaton.
    pub fn state_id(&self, names: &[String]) -> String {
        let doc = MftDoc {
            max_even: self.tree.max_even,
            nodes: self.tree.node_docs(names),
            marker: MarkerDoc {
                node: self.marker.node.to_string_form(),
                kind: self.marker.kind,
            },
            marking: set_to_names(self.marking, names),
        };
        format!("M:{}", serde_json::to_string(&doc).unwrap())
    }
}
