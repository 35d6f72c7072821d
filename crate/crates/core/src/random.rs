//! Seeded generators for elements, positive elements and ideal batteries.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly, Model};
use crate::ideals::IdealSpec;
use crate::laurent::LaurentPoly;
use crate::scalar::Real;

/// Default seed of every reproducible run.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random generalized polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementShape {
    pub max_degree: i64,
    /// Probability that a degree carries a term.
    pub degree_density: f64,
    /// Probability that a point value (or trigonometric coefficient) is nonzero.
    pub coeff_density: f64,
    /// Trigonometric degree of coefficients on the circle.
    pub trig_degree: i64,
}

impl ElementShape {
    pub fn dense(max_degree: i64) -> Self {
        Self { max_degree, degree_density: 0.7, coeff_density: 0.8, trig_degree: 2 }
    }

    pub fn sparse(max_degree: i64) -> Self {
        Self { max_degree, degree_density: 0.4, coeff_density: 0.5, trig_degree: 1 }
    }
}

fn complex<T: Real, R: Rng>(r: &mut R) -> Complex<T> {
    Complex::new(T::lit(r.gen_range(-1.0..=1.0)), T::lit(r.gen_range(-1.0..=1.0)))
}

fn coefficient<T: Real, R: Rng>(model: Model, shape: &ElementShape, r: &mut R) -> CoefficientFunction<T> {
    match model {
        Model::Discrete(n) => {
            let mut v: Vec<Complex<T>> =
                (0..n).map(|_| if r.gen_bool(shape.coeff_density) { complex(r) } else { Complex::default() }).collect();
            if v.iter().all(|z| *z == Complex::default()) {
                v[r.gen_range(0..n)] = complex(r);
            }
            CoefficientFunction::Discrete(v)
        }
        Model::Trig => {
            let d = shape.trig_degree;
            let mut l = LaurentPoly::zero();
            for k in -d..=d {
                if r.gen_bool(shape.coeff_density) {
                    l.add_term(k, complex(r));
                }
            }
            if l.is_empty() {
                l.add_term(r.gen_range(-d..=d), complex(r));
            }
            CoefficientFunction::Trig(l)
        }
    }
}

/// A nonzero random element with degrees in `[−max_degree, max_degree]`.
pub fn random_element<T: Real, R: Rng>(cp: &CrossedProduct<T>, shape: &ElementShape, r: &mut R) -> GenPoly<T> {
    let d = shape.max_degree;
    let mut degrees: Vec<i64> = (-d..=d).filter(|_| r.gen_bool(shape.degree_density)).collect();
    if degrees.is_empty() {
        degrees.push(r.gen_range(-d..=d));
    }
    let terms: Vec<(i64, CoefficientFunction<T>)> =
        degrees.into_iter().map(|n| (n, coefficient(cp.model(), shape, r))).collect();
    let a = GenPoly::from_terms(cp.model(), terms).expect("coefficients match the model");
    if a.is_zero() {
        random_element(cp, shape, r)
    } else {
        a
    }
}

/// `a* a` for a random nonzero `a`.
pub fn random_positive<T: Real, R: Rng>(cp: &CrossedProduct<T>, shape: &ElementShape, r: &mut R) -> GenPoly<T> {
    let a = random_element(cp, shape, r);
    cp.mul(&cp.adjoint(&a).expect("model checked"), &a).expect("model checked")
}

/// `count` nonzero ideals with one or two sparse generators of degree at most 3.
pub fn ideal_battery<T: Real>(cp: &CrossedProduct<T>, seed: u64, count: usize) -> Vec<IdealSpec<T>> {
    let mut r = rng(seed);
    let shape = ElementShape::sparse(3);
    (0..count)
        .map(|_| {
            let k = r.gen_range(1..=2);
            IdealSpec::Generated((0..k).map(|_| random_element(cp, &shape, &mut r)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::DynSystem;

    #[test]
    fn seeded_generation_is_reproducible() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 0, 2]).unwrap());
        let a = random_element(&cp, &ElementShape::dense(3), &mut rng(7));
        let b = random_element(&cp, &ElementShape::dense(3), &mut rng(7));
        assert_eq!(a, b);
        assert!(a.degrees().all(|n| n.abs() <= 3));
        let battery = ideal_battery(&cp, DEFAULT_SEED, 5);
        assert_eq!(battery, ideal_battery(&cp, DEFAULT_SEED, 5));
    }

    #[test]
    fn positive_elements_are_positive() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 3).unwrap());
        let p = random_positive(&cp, &ElementShape::dense(2), &mut rng(3));
        assert!(cp.positivity_check(&p, &crate::reps::SampleGrid::new(32, 8)).unwrap());
    }
}
