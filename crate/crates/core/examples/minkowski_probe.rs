//! Shortest cylinder under random elements of SL(2,R).

use cusp_excursion::origami::{hermite_planar, minkowski_probe, Origami};

fn main() {
    println!("Hermite constant in the plane: {:.4}", hermite_planar());
    for (name, o) in [("torus", Origami::torus()), ("L", Origami::l_shape())] {
        let r = minkowski_probe(&o, 500, None, 3);
        println!(
            "{name}: bound {:.4}, largest shortest cylinder {:.4}, failures {}",
            r.bound, r.empirical_max, r.failures
        );
    }
}
