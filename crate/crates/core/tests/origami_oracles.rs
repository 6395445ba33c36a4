mod common;

use common::*;
use cusp_excursion::origami::{cylinders, saddle_connections, Origami};

fn surfaces() -> Vec<Origami> {
    vec![
        Origami::torus(),
        Origami::l_shape(),
        Origami::from_one_line(&[2, 1], &[1, 2]).unwrap(),
        Origami::from_one_line(&[2, 3, 1, 4], &[4, 2, 3, 1]).unwrap(),
        Origami::from_one_line(&[2, 1, 4, 3], &[3, 4, 2, 1]).unwrap(),
        Origami::from_one_line(&[2, 3, 4, 5, 1], &[1, 3, 2, 5, 4]).unwrap(),
    ]
}

#[test]
fn saddles_match_unfolding() {
    for o in surfaces() {
        let got = spectrum_counts(&saddle_connections(&o, 15.0));
        assert_eq!(got, unfolded_saddles(&o, 15), "h={:?} v={:?}", o.h(), o.v());
    }
}

#[test]
fn cylinders_match_renormalisation() {
    for o in surfaces() {
        let got = spectrum_counts(&cylinders(&o, 15.0));
        assert_eq!(got, renormalised_spectrum(&o, 15), "h={:?} v={:?}", o.h(), o.v());
    }
}

#[test]
fn l_shape_spectra_contain_axis_vectors() {
    let l = Origami::l_shape();
    let sad = saddle_connections(&l, 5.0);
    assert!(sad.contains(1, 0) && sad.is_symmetric());
    let cyl = cylinders(&l, 5.0);
    assert!(cyl.contains(1, 0) && cyl.contains(2, 0) && cyl.is_symmetric());
}
