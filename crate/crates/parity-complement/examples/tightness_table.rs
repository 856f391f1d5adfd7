//! Count the state-space ingredients over a small grid and check that the
//! complement never exceeds (4n + 1) times the number of full trees.

use parity_complement::tightness_report;

fn main() {
    for n in 1..=3usize {
        for pi in 2..=3i32 {
            let r = tightness_report(n, pi, None).unwrap();
            print!("{}", r.to_text());
            assert!(r.holds());
            println!();
        }
    }
}
