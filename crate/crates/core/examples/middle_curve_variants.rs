//! Checking candidate middle curves under the unordered, ordered and
//! restricted variants.
//!
//! ```text
//! cargo run --example middle_curve_variants
//! ```

use middle_curve::geometry::{Curve, CurveSet};
use middle_curve::middle::{max_discrete_frechet, verify, ProvenancedCurve, Variant, VertexRef};

fn report(ps: &CurveSet, name: &str, refs: Vec<VertexRef>, delta: f64) -> middle_curve::Result<()> {
    let m = ProvenancedCurve::resolve(refs, ps)?;
    let refs: Vec<String> = m.refs().iter().map(|r| r.to_string()).collect();
    println!(
        "{name}: {} (max distance {})",
        refs.join(" "),
        max_discrete_frechet(m.curve(), ps)?
    );
    for v in Variant::ALL {
        println!(
            "  {:<10} at delta {delta}: {}",
            v.as_str(),
            verify(&m, ps, delta, v)?
        );
    }
    Ok(())
}

fn main() -> middle_curve::Result<()> {
    let ps = CurveSet::new(vec![
        Curve::from_scalars("P", &[0.0, 2.0])?,
        Curve::from_scalars("Q", &[0.0, 1.0, 2.0])?,
    ])?;
    report(
        &ps,
        "endpoints of P",
        vec![VertexRef::new("P", 1), VertexRef::new("P", 2)],
        1.0,
    )?;
    // Q[2] used twice: the order along Q can be kept, but the first copy
    // cannot be matched to Q[2] itself.
    report(
        &ps,
        "Q[2] twice",
        vec![VertexRef::new("Q", 2), VertexRef::new("Q", 2)],
        1.0,
    )?;

    let single = CurveSet::new(vec![Curve::from_scalars("S", &[0.0, 1.0])?])?;
    report(
        &single,
        "S backwards",
        vec![VertexRef::new("S", 2), VertexRef::new("S", 1)],
        1.0,
    )?;
    Ok(())
}
