//! The shortest common supersequence reduction on ({AB, BB}, 3): encoded
//! curves, the middle curve built from the supersequence ABB, and decoding
//! it back.
//!
//! ```text
//! cargo run --example scs_reduction
//! ```

use middle_curve::middle::{verify, Variant};
use middle_curve::reduction::{
    decode_middle_to_sequence, enumerate_it, reduction_equivalence, scs_brute_force,
    supersequence_to_middle, ReductionInstance, ScsInstance,
};

fn show(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> middle_curve::Result<()> {
    let inst = ScsInstance::new(["AB", "BB"], 3)?;
    let (feasible, witness) = scs_brute_force(&inst);
    println!(
        "SCS feasible: {feasible}, witness {}",
        witness.as_deref().unwrap_or("-")
    );
    println!("splits: {:?}", enumerate_it(inst.t()));

    let ri = ReductionInstance::new(&inst, 1, 2)?;
    for c in ri.curve_set() {
        println!("{:>4}: {}", c.id(), show(&c.scalars()));
    }

    let m = supersequence_to_middle("ABB", &ri)?;
    let refs: Vec<String> = m.refs().iter().map(|r| r.to_string()).collect();
    println!(
        "M = {}  from {}",
        show(&m.curve().scalars()),
        refs.join(" ")
    );
    println!(
        "restricted at 1: {}",
        verify(&m, ri.curve_set(), 1.0, Variant::Restricted)?
    );
    println!("decoded: {}", decode_middle_to_sequence(m.curve(), 1, 2)?);

    for inst in [
        ScsInstance::new(["AB", "BA"], 2)?,
        ScsInstance::new(["AB", "BA"], 3)?,
    ] {
        let (scs, middle) = reduction_equivalence(&inst, Variant::Unordered)?;
        println!(
            "{:?}, t = {}: scs {scs}, middle curve {middle}",
            inst.sequences(),
            inst.t()
        );
    }
    Ok(())
}
