//! Build the full automaton over two states, pick a full tree, emit its hard
//! input word, and trace the deterministic tree-phase run on that word.

use parity_complement::fnht::first_marker;
use parity_complement::{
    complement_lasso_member_on_the_fly, default_h, enumerate_fnhts, hard_word, mft_step,
    parity_lasso_member, ComplementState, EnumOptions, FullAutomaton, Mft, StepOutcome,
};

fn main() {
    let n = 2;
    let priorities = vec![1, 2];
    let full = enumerate_fnhts(
        n,
        2,
        &EnumOptions {
            full_only: true,
            cap: None,
        },
    )
    .unwrap();
    println!("{} full trees over {n} states", full.len());

    let t = &full[0];
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    println!("tree: {}", t.to_json_string(&names));

    let mut fa = FullAutomaton::new(n, &priorities).unwrap();
    let h = default_h(n, 2).unwrap();
    let w = hard_word(&mut fa, t, h).unwrap();
    let p = fa.to_parity();
    println!(
        "word period has length {} over {} matrix letters",
        w.period().len(),
        p.alphabet().len()
    );

    // the word avoids every accepting run of the full automaton but lands in
    // the complement language
    assert!(!parity_lasso_member(&p, &w).unwrap());
    assert!(complement_lasso_member_on_the_fly(&p, &w, Some(100_000)).unwrap());
    println!("rejected by the automaton, accepted by the complement");

    // trace the canonical run from the fully marked tree
    let (marker, marking) = first_marker(t).unwrap();
    let mut m = Mft {
        tree: t.clone(),
        marker,
        marking,
    };
    for i in 0..3 * h {
        match mft_step(&p, &m, w.letter_at(i)) {
            StepOutcome::Blocked => {
                println!("step {i}: blocked");
                break;
            }
            StepOutcome::Advance { state, accepting } => {
                let ComplementState::Tree(next) = state else {
                    unreachable!()
                };
                println!(
                    "step {i}: marker at {:?} ({:?}), accepting: {accepting}",
                    next.marker.node, next.marker.kind
                );
                m = next;
            }
        }
    }
}
