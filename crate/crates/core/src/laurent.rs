//! Laurent polynomials `Σ c_k z^k` with complex coefficients.
//!
//! The same type serves as a trigonometric polynomial on the circle
//! (`z = e^{2πix}`) and as an entry of the symbolic matrices `C(𝕋, M_p)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cpow, czero, unit, Real};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly<T> {
    coeffs: BTreeMap<i64, Complex<T>>,
}

impl<T: Real> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: Complex<T>) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != czero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, Complex<T>)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in iter {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: Complex<T>) {
        let e = self.coeffs.entry(k).or_insert_with(czero);
        *e += c;
        if *e == czero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Complex<T> {
        self.coeffs.get(&k).copied().unwrap_or_else(czero)
    }

    /// Stored coefficients in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(mut self, tol: T) -> Self {
        self.coeffs.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn is_zero(&self, tol: T) -> bool {
        self.coeffs.values().all(|c| c.norm() <= tol)
    }

    /// `max |k|` over stored terms (0 for the zero polynomial).
    pub fn degree_bound(&self) -> u64 {
        self.coeffs.keys().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().fold(czero(), |acc, (&k, &c)| acc + c * cpow(z, k))
    }

    /// Evaluation as a trigonometric polynomial at `x` turns.
    pub fn eval_turns(&self, x: T) -> Complex<T> {
        self.coeffs.iter().fold(czero(), |acc, (&k, &c)| acc + c * unit(T::from_i64(k) * x))
    }

    /// `Σ |c_k|`, an upper bound of the sup norm on the unit circle.
    pub fn l1(&self) -> T {
        self.coeffs.values().fold(T::zero(), |acc, c| acc + c.norm())
    }

    /// `Σ |k|·|c_k|`, which bounds the derivative in the angle variable (per radian).
    pub fn weighted_l1(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (&k, c)| acc + T::from_i64(k.abs()) * c.norm())
    }

    /// Pointwise conjugate on the unit circle: `c_k ↦ conj(c_{−k})`.
    pub fn conj_on_circle(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, &c)| (k, c * s)))
    }

    /// Multiplies `c_k` by `phase(k)`; used for composition with rotations.
    pub fn map_phases<F: Fn(i64) -> Complex<T>>(&self, phase: F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, &c)| (k, c * phase(k))))
    }

    /// Substitutes `z ↦ z^m` (`m ≠ 0`).
    pub fn compose_power(&self, m: i64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(&k, &c)| (k * m, c)))
    }
}

impl<T: Real> Add for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (&k, &c) in &rhs.coeffs {
            out.add_term(k, c);
        }
        out
    }
}

impl<T: Real> Sub for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (&k, &c) in &rhs.coeffs {
            out.add_term(k, -c);
        }
        out
    }
}

impl<T: Real> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, &c)| (k, -c)).collect() }
    }
}

impl<T: Real> Mul for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (&i, &a) in &self.coeffs {
            for (&j, &b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}
