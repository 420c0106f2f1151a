//! The twisted spray on the line bundle over P¹ and the smallest admissible twist.

use polyrank::pipeline::DEFAULT_SEED;
use polyrank::spray::{check_spray_p1, minimal_twist_p1, twisted_spray_p1};

fn main() -> polyrank::Result<()> {
    for m in 0..=2 {
        println!("{}", twisted_spray_p1(m));
        let check = check_spray_p1(m, 32, DEFAULT_SEED)?;
        println!(
            "  zero section {} / fixes Λ {} / charts agree {} over {} samples -> {}",
            check.zero_section,
            check.lambda_fixed,
            check.consistency,
            check.samples_checked,
            if check.passed() { "spray" } else { "not a spray" }
        );
    }
    println!("minimal twist: {}", minimal_twist_p1());
    Ok(())
}
