//! Curve, middle-curve and SCS files, CSV import and SVG output, written to
//! a temporary directory.
//!
//! ```text
//! cargo run --example file_formats
//! ```

use middle_curve::cli::{
    parse_curve_csv, read_curve_set, render_svg, write_curve_set, MiddleFile, ScsFile,
};
use middle_curve::middle::{BruteForce, Variant};

fn main() -> middle_curve::Result<()> {
    let dir = std::env::temp_dir().join("middle-curve-file-formats");
    std::fs::create_dir_all(&dir)?;

    let ps = parse_curve_csv(
        "id,x,y\nwalk,0,0\nwalk,1.5,2\nwalk,3,0\nrun,0,0.5\nrun,1,2.5\nrun,3,0.5\n",
    )?;
    let curves = dir.join("tracks.json");
    write_curve_set(&curves, &ps)?;
    println!("{}", std::fs::read_to_string(&curves)?);
    assert_eq!(read_curve_set(&curves)?, ps);

    let out = BruteForce::default().optimize(&ps, 3, Variant::Restricted)?;
    let m = out.witness.expect("optimisation always has a witness");
    let middle = MiddleFile::new(&m, out.radius.unwrap(), Variant::Restricted)?;
    println!("{}", middle.to_json()?);

    let scs = ScsFile {
        sequences: vec!["AB".into(), "BB".into()],
        t: 3,
    };
    print!("{}", scs.to_json()?);

    let svg = dir.join("tracks.svg");
    std::fs::write(&svg, render_svg(&ps.iter().collect::<Vec<_>>())?)?;
    println!("wrote {}", svg.display());
    Ok(())
}
