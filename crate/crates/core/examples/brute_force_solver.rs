//! Exact middle curves by exhaustive search: decision at a fixed distance
//! and optimisation of the distance.
//!
//! ```text
//! cargo run --example brute_force_solver
//! ```

use middle_curve::geometry::{Curve, CurveSet};
use middle_curve::middle::{BruteForce, Variant};

fn main() -> middle_curve::Result<()> {
    let ps = CurveSet::new(vec![
        Curve::from_scalars("P1", &[0.0, 3.0, 1.0, 5.0])?,
        Curve::from_scalars("P2", &[0.5, 2.0, 2.0, 4.5])?,
        Curve::from_scalars("P3", &[-0.5, 3.5, 0.5, 5.5])?,
    ])?;
    let solver = BruteForce::default();

    for v in Variant::ALL {
        let out = solver.solve(&ps, 1.0, 4, v)?;
        match out.witness {
            Some(m) => {
                let refs: Vec<String> = m.refs().iter().map(|r| r.to_string()).collect();
                println!("{v}: feasible at 1 with {}", refs.join(" "));
            }
            None => println!("{v}: infeasible at 1"),
        }
    }

    for ell in 1..=4 {
        let best = solver.optimize(&ps, ell, Variant::Ordered)?;
        println!(
            "ordered, ell = {ell}: optimal radius {}",
            best.radius.unwrap()
        );
    }

    // A tiny budget turns into a resource error instead of a long run.
    match BruteForce::new(10).solve(&ps, 0.5, 4, Variant::Restricted) {
        Err(e) => println!("with a budget of 10: {e} (exit code {})", e.exit_code()),
        Ok(out) => println!("with a budget of 10: feasible = {}", out.feasible),
    }
    Ok(())
}
