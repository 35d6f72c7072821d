//! The standard small systems used by the verification suites.

use crate::algebra::CrossedProduct;
use crate::dynsys::DynSystem;
use crate::scalar::Real;

/// `σ = (0 1)` on two points.
pub fn swap<T: Real>() -> DynSystem<T> {
    DynSystem::finite(vec![1, 0]).expect("valid permutation")
}

/// `σ = (0 1)(2)`.
pub fn swap_and_fixed<T: Real>() -> DynSystem<T> {
    DynSystem::finite(vec![1, 0, 2]).expect("valid permutation")
}

/// `σ = (0 1)(2 3)`.
pub fn two_two_cycles<T: Real>() -> DynSystem<T> {
    DynSystem::finite(vec![1, 0, 3, 2]).expect("valid permutation")
}

pub fn rotation<T: Real>(p: u64, q: u64) -> DynSystem<T> {
    DynSystem::rotation(p, q).expect("valid rotation")
}

/// Rotation by the golden-ratio conjugate.
pub fn golden_rotation<T: Real>() -> DynSystem<T> {
    DynSystem::irrational(T::lit((5f64.sqrt() - 1.0) / 2.0)).expect("angle in (0, 1)")
}

/// Named finite systems.
pub fn finite<T: Real>() -> Vec<(&'static str, CrossedProduct<T>)> {
    vec![
        ("swap", CrossedProduct::new(swap())),
        ("swap+fixed", CrossedProduct::new(swap_and_fixed())),
        ("two-2-cycles", CrossedProduct::new(two_two_cycles())),
    ]
}

/// Named periodic-type systems: the finite ones and rotations by 1/2 and 1/3.
pub fn periodic<T: Real>() -> Vec<(&'static str, CrossedProduct<T>)> {
    let mut out = finite();
    out.push(("rot-1/2", CrossedProduct::new(rotation(1, 2))));
    out.push(("rot-1/3", CrossedProduct::new(rotation(1, 3))));
    out
}

/// Every fixture, including the irrational rotation.
pub fn all<T: Real>() -> Vec<(&'static str, CrossedProduct<T>)> {
    let mut out = periodic();
    out.push(("golden", CrossedProduct::new(golden_rotation())));
    out
}
