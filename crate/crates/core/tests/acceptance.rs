//! Acceptance suite: one line per criterion. Exits nonzero if any fails.

use toric_lc::selftest::{run_criterion, SelftestOptions, Status};

fn main() {
    let opts = SelftestOptions::default();
    let mut failed = 0;
    println!("acceptance criteria");
    for id in 1..=11 {
        let r = run_criterion(id, &opts);
        println!("{r}");
        failed += (r.status != Status::Pass) as usize;
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
