//! Shared fixtures for the benchmarks.

use cuspcount::blowup::BlowupClass;
use cuspcount::{EllipsoidShape, PerturbedRational};

/// `(2, 3 + δ, 7 + 2δ)`: tie-free, with three axes so the lattice-path
/// search has to branch.
pub fn three_axis_shape() -> EllipsoidShape {
    let delta = PerturbedRational::delta();
    EllipsoidShape::new(vec![
        PerturbedRational::from_int(2),
        PerturbedRational::from_int(3) + delta.clone(),
        PerturbedRational::from_int(7) + delta.scale_int(2),
    ])
    .expect("positive factors")
}

/// The proper transform of `5ℓ − 2e` against the `(11, 2)` cusp, pushed to
/// the projective plane, as a Cremona input of moderate length.
pub fn cremona_input() -> BlowupClass {
    let class = BlowupClass::f1(5, 2, Vec::new());
    let tilde = cuspcount::blowup::proper_transform_class(&class, 11, 2).expect("coprime cusp");
    cuspcount::blowup::f1_to_cp2(&tilde)
}
