use relcat_core::suites::*;
use std::time::Instant;
fn main() {
    for name in [SuiteName::Roundtrip, SuiteName::Oracles, SuiteName::Crypto, SuiteName::Malcev] {
        let t = Instant::now();
        let r = run_suite(name, 1_000_000).unwrap();
        println!("{name}: {:?} passed={}", t.elapsed(), r.passed);
        for i in &r.items { println!("   [{}] {} — {}", if i.passed {"PASS"} else {"FAIL"}, i.name, i.detail); }
    }
}
