//! Calling the separation oracles directly: is a point inside the upper
//! image, and if not, which halfspace cuts it off?
//!
//! cargo run --example separation_oracle

use outer_approx::oracles::ideal_point;
use outer_approx::separation::{separate, shift_for_tsep, TsepShift};
use outer_approx::{ExplicitSet, Instance, MasterLp, Mode, ObjPoint, OracleKind, SepOptions};

fn main() {
    let inst = Instance::Explicit(ExplicitSet {
        p: 2,
        points: vec![vec![2, 9], vec![3, 7], vec![5, 4], vec![7, 2], vec![6, 6]],
    });
    let (ideal, seeds) = ideal_point(&inst).unwrap();
    println!("ideal point {ideal}");

    let mut sep = MasterLp::new(OracleKind::Sep, 2, &seeds, TsepShift::none(2));
    let mut tsep = MasterLp::new(
        OracleKind::TSep,
        2,
        &seeds,
        shift_for_tsep(&inst, Mode::Exact),
    );
    for y in [[2, 2], [4, 4], [5, 5], [8, 8]] {
        let y = ObjPoint::from_ints(&y);
        for master in [&mut sep, &mut tsep] {
            let ans = separate(&y, master, &inst, &SepOptions::default()).unwrap();
            match ans.cut {
                Some(cut) => println!(
                    "{y} {}: outside, cut {}",
                    master.kind().name(),
                    cut.canonical()
                ),
                None => println!("{y} {}: inside", master.kind().name()),
            }
        }
    }
}
