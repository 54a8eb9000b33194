//! Approximate middle curve from a grid center, compared with the exact
//! optimum.
//!
//! ```text
//! cargo run --example approximation
//! ```

use middle_curve::approx::{ApproxParams, GridApprox};
use middle_curve::geometry::{Curve, CurveSet, Point};
use middle_curve::middle::{brute_force_optimize, Variant};

fn planar(id: &str, pts: &[[f64; 2]]) -> Curve {
    Curve::new(
        id,
        pts.iter()
            .map(|p| Point::new(p.to_vec()).unwrap())
            .collect(),
    )
    .unwrap()
}

fn main() -> middle_curve::Result<()> {
    let ps = CurveSet::new(vec![
        planar("A", &[[0.0, 0.0], [2.0, 3.0], [4.0, 0.0]]),
        planar("B", &[[0.0, 1.0], [2.0, 4.0], [4.0, 1.0]]),
        planar("C", &[[1.0, 0.0], [3.0, 3.0], [4.0, -1.0]]),
    ])?;
    let ell = 2;
    let opt = brute_force_optimize(&ps, ell, Variant::Unordered)?
        .radius
        .unwrap();
    println!("exact optimum for ell = {ell}: {opt:.4}");

    for eps in [1.0, 0.5, 0.25] {
        let r = GridApprox::default().middle(&ps, ApproxParams::new(ell, eps)?)?;
        let refs: Vec<String> = r.middle.refs().iter().map(|x| x.to_string()).collect();
        println!(
            "eps {eps}: center radius {:.4}, middle {} radius {:.4}, ratio {:.3} (bound {})",
            r.center.radius,
            refs.join(" "),
            r.radius,
            r.radius / opt,
            2.0 + eps
        );
    }
    Ok(())
}
