//! Enumerate the flattened trees underlying the construction and print a
//! small table of counts: all trees, full trees, and marked trees.

use parity_complement::{enumerate_fnhts, enumerate_mfts, EnumOptions, Fnht, NodePath};

fn main() {
    println!("{:>3} {:>3} {:>8} {:>8} {:>8}", "n", "pi", "fnht", "full", "mft");
    for n in 1..=3usize {
        for pi in 2..=4i32 {
            let all = enumerate_fnhts(n, pi, &EnumOptions::default()).unwrap();
            let full = all
                .iter()
                .filter(|t| t.labels(&NodePath::root()).unwrap().states.len() == n)
                .count();
            let mfts = enumerate_mfts(n, pi, &EnumOptions::default()).unwrap();
            println!("{n:>3} {pi:>3} {:>8} {full:>8} {:>8}", all.len(), mfts.len());
        }
    }

    // show the two trees over a single state with priorities {1, 2, 3}
    let names = vec!["q".to_string()];
    let trees: Vec<Fnht> = enumerate_fnhts(1, 3, &EnumOptions::default()).unwrap();
    for t in &trees {
        println!("{}", t.to_json_string(&names));
    }
}
