//! Decide membership of ultimately periodic words by two independent routes:
//! directly on the parity automaton, and through the Büchi translation.

use parity_complement::{
    buchi_lasso_member, parity_lasso_member, parity_to_buchi, LassoWord, ParityAutomaton,
};

fn main() {
    // two states: s0 demands an eventual `b` (priority 1 until it happens),
    // s1 then accepts everything at priority 0 except `a`, which resets
    let p = ParityAutomaton::new(
        vec!["s0".into(), "s1".into()],
        vec!["a".into(), "b".into()],
        &["s0".into()],
        &[
            ("s0".into(), "a".into(), "s0".into(), 1),
            ("s0".into(), "b".into(), "s1".into(), 0),
            ("s1".into(), "b".into(), "s1".into(), 0),
            ("s1".into(), "a".into(), "s0".into(), 1),
        ],
    )
    .unwrap();
    let b = parity_to_buchi(&p);

    let words = [
        LassoWord::new(vec![], vec![1]).unwrap(),       // b^w
        LassoWord::new(vec![], vec![0]).unwrap(),       // a^w
        LassoWord::new(vec![0, 0], vec![1]).unwrap(),   // aab^w
        LassoWord::new(vec![], vec![0, 1]).unwrap(),    // (ab)^w
        LassoWord::new(vec![1], vec![1, 0]).unwrap(),   // b(ba)^w
    ];
    for w in &words {
        let direct = parity_lasso_member(&p, w).unwrap();
        let translated = buchi_lasso_member(&b, w).unwrap();
        assert_eq!(direct, translated);
        println!(
            "prefix {:?} period {:?}: {}",
            w.prefix(),
            w.period(),
            if direct { "member" } else { "not a member" }
        );
    }
}
