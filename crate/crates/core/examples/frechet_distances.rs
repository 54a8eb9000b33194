//! Discrete Fréchet distance with its witness traversal, and the continuous
//! decision on the same pair.
//!
//! ```text
//! cargo run --example frechet_distances
//! ```

use middle_curve::frechet::{
    continuous_frechet_decision, discrete_frechet, discrete_frechet_decision,
};
use middle_curve::geometry::{Curve, Point};

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
    let p = planar("P", &[[0.0, 0.0], [2.0, 1.0], [4.0, 0.0], [6.0, 1.0]]);
    let q = planar("Q", &[[0.0, 1.0], [3.0, 2.0], [6.0, 0.0]]);

    let r = discrete_frechet(&p, &q)?;
    println!("d_DF(P, Q) = {:.4}", r.value);
    println!("witness: {}", r.witness);

    for delta in [1.0, r.value, 2.0] {
        println!(
            "delta {delta:.4}: discrete {}, continuous {}",
            discrete_frechet_decision(&p, &q, delta)?,
            continuous_frechet_decision(&p, &q, delta)?
        );
    }

    // The continuous distance can be much smaller than the discrete one.
    let seg = Curve::from_scalars("seg", &[0.0, 10.0])?;
    let dense = Curve::from_scalars("dense", &[0.0, 2.5, 5.0, 7.5, 10.0])?;
    println!(
        "segment vs subdivided segment: discrete {}, continuous within 0: {}",
        discrete_frechet(&seg, &dense)?.value,
        continuous_frechet_decision(&seg, &dense, 0.0)?
    );
    Ok(())
}
