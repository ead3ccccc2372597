//! The lattice `Λθ = A·Z²`, `A = [[θ, −1], [1, θ]]`, and its relative and
//! hyperbolic minima.

mod grid;
mod minima;
mod point;

pub use minima::{
    brute_minima, check_empty_parallelogram, class_difference, convergent_minima, enumerate_box,
    hyperbolic_from_relative, min_product_profile, relative_minima_convergent, ClassKey,
    MinimaKind, MinimaSequence, TieReport, DEFAULT_MAX_PREIMAGES,
};
pub use point::{
    axis_point, class_key, require_theta_above_one, v_point, LatticePoint, PointLabel, V_REFINE,
};
