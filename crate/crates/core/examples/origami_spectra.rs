//! Saddle connections and cylinders of the torus and the three-square L.

use cusp_excursion::origami::{cylinders, saddle_connections, Origami};

fn main() -> cusp_excursion::Result<()> {
    let l = Origami::from_json(r#"{"n":3,"h":[2,1,3],"v":[3,2,1]}"#)?;
    for (name, o) in [("torus", Origami::torus()), ("L", l)] {
        println!("{name}: genus {}, cone angles {:?} (multiples of 2 pi)", o.genus(), o.cone_angles());
        let s = saddle_connections(&o, 10.0);
        let c = cylinders(&o, 10.0);
        println!("  radius 10: {} saddle vectors, {} cylinder vectors", s.len(), c.len());
        for e in s.entries.iter().filter(|e| e.a >= 0 && e.b > 0).take(8) {
            println!("    ({}, {}) x{}", e.a, e.b, e.multiplicity);
        }
    }
    Ok(())
}
