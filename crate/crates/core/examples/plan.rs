//! Which orders q^m admit a t-multimagic square by composing verified
//! factors, and which requirement blocks the rest.

use multimagic::plan_order;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q, t, m) in [(7, 3, 8), (5, 3, 5), (5, 3, 4), (9, 4, 11)] {
        let plan = plan_order(q, t, m)?;
        println!("{plan}");
        if let Err(e) = plan.require_feasible() {
            println!("  -> {e}");
        }
    }
    Ok(())
}
