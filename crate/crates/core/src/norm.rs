//! Operator norms through the irreducible representations.
//!
//! For periodic systems `‖a‖ = sup_{y,t} ‖π_{y,t}(a)‖`. The supremum runs over
//! orbit representatives and `t = e^{2πis}`; the map `(y, s) ↦ ‖π_{y,t}(a)‖` is
//! a trigonometric polynomial in both variables, so a branch-and-bound over
//! parameter cells returns an estimate together with a certified enclosure
//! radius. Cells are bounded both by a Lipschitz estimate and by the
//! second-order Bernstein estimate `‖a‖ ≤ v / (1 − r²/2)`, valid for the cell
//! containing the maximizer, where `v` is the centre value and `r` the cell
//! radius weighted by the degrees in `y` and `t`.

use std::cell::Cell as Counter;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::algebra::{CoefficientFunction, CrossedProduct, GenPoly};
use crate::dynsys::{DynSystem, Point};
use crate::error::Result;
use crate::linalg::power_norm_lower;
use crate::reps::{period, rep_periodic, SampleGrid};
use crate::scalar::{czero, unit, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Initial sampling resolution; cells are refined from there.
    pub grid: SampleGrid,
    /// Target enclosure radius.
    pub tol: f64,
    /// Cap on representation evaluations.
    pub max_evals: usize,
    /// Half-width of the `ℓ²` window for aperiodic systems.
    pub window: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { grid: SampleGrid::default(), tol: 1e-6, max_evals: 400_000, window: 256 }
    }
}

impl NormOptions {
    /// Coarse settings for reporting witness norms.
    pub fn quick() -> Self {
        Self { grid: SampleGrid::new(32, 8), tol: 1e-6, max_evals: 20_000, window: 64 }
    }
}

/// `‖a‖` lies in `[estimate, estimate + rigor]`; `estimate` itself is attained.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormEstimate<T> {
    pub estimate: T,
    pub rigor: T,
    /// Set for aperiodic systems, where only the window compression is sampled
    /// and the upper end of the enclosure is `Σ_n sup|a(n)|`.
    pub lower_bound_only: bool,
    pub evaluations: usize,
}

struct Cell<T> {
    base: usize,
    y: T,
    hy: T,
    s: T,
    hs: T,
    value: T,
    upper: T,
}

impl<T: Real> PartialEq for Cell<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Cell<T> {}
impl<T: Real> PartialOrd for Cell<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Cell<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.as_f64().total_cmp(&other.upper.as_f64())
    }
}

/// Lipschitz data of one family of base points.
struct Family<T> {
    /// Index base point, or `None` for the rotation transversal.
    index: Option<usize>,
    lip_y: T,
    lip_s: T,
    /// Trigonometric degree in `y` (per turn) and in `t`.
    deg_y: T,
    deg_t: T,
}

impl<T: Real> Family<T> {
    fn upper(&self, value: T, hy: T, hs: T) -> T {
        let first = value + self.lip_y * hy + self.lip_s * hs;
        let two_pi = T::PI() + T::PI();
        let r = two_pi * (self.deg_y * hy + self.deg_t * hs);
        let denom = T::one() - r * r * T::lit(0.5);
        if denom > T::zero() {
            first.min(value / denom)
        } else {
            first
        }
    }
}

fn deg_t<T: Real>(a: &GenPoly<T>, p: usize) -> T {
    T::from_usize(a.degrees().map(|n| (n.unsigned_abs() as usize).div_ceil(p)).max().unwrap_or(0))
}

fn lip_s<T: Real, F>(a: &GenPoly<T>, p: usize, sup: F) -> T
where
    F: Fn(&CoefficientFunction<T>) -> T,
{
    let two_pi = T::PI() + T::PI();
    a.terms().fold(T::zero(), |acc, (n, f)| {
        let k = (n.unsigned_abs() as usize).div_ceil(p);
        acc + two_pi * T::from_usize(k) * sup(f)
    })
}

/// `‖π_{y,t}(a)‖`.
pub fn norm_at<T: Real>(cp: &CrossedProduct<T>, y: Point<T>, t: Complex<T>, a: &GenPoly<T>) -> Result<T> {
    Ok(rep_periodic(cp, y, t, a)?.spectral_norm())
}

pub fn operator_norm<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>, opts: &NormOptions) -> Result<NormEstimate<T>> {
    cp.check(a)?;
    if a.is_zero() {
        return Ok(NormEstimate { estimate: T::zero(), rigor: T::zero(), lower_bound_only: false, evaluations: 0 });
    }
    let families: Vec<Family<T>> = match cp.system() {
        DynSystem::IrrationalRotation { .. } => return aperiodic_lower(cp, a, opts),
        DynSystem::Finite(fs) => fs
            .orbits()
            .iter()
            .map(|o| {
                let sup = |f: &CoefficientFunction<T>| match f {
                    CoefficientFunction::Discrete(v) => o.points.iter().fold(T::zero(), |m, &x| m.max(v[x].norm())),
                    CoefficientFunction::Trig(_) => unreachable!(),
                };
                Family {
                    index: Some(o.base()),
                    lip_y: T::zero(),
                    lip_s: lip_s(a, o.period, sup),
                    deg_y: T::zero(),
                    deg_t: deg_t(a, o.period),
                }
            })
            .collect(),
        DynSystem::RationalRotation { q, .. } => {
            let lip_y = a.terms().fold(T::zero(), |acc, (_, f)| acc + f.derivative_bound());
            let deg_y = a
                .terms()
                .map(|(_, f)| match f {
                    CoefficientFunction::Trig(p) => p.degree_bound(),
                    CoefficientFunction::Discrete(_) => 0,
                })
                .max()
                .unwrap_or(0);
            vec![Family {
                index: None,
                lip_y,
                lip_s: lip_s(a, *q as usize, CoefficientFunction::sup_bound),
                deg_y: T::lit(deg_y as f64),
                deg_t: deg_t(a, *q as usize),
            }]
        }
    };
    let half = T::lit(0.5);
    let span_y = match cp.system() {
        DynSystem::RationalRotation { q, .. } => T::one() / T::lit(*q as f64),
        _ => T::zero(),
    };
    let m_t = opts.grid.t_points.max(1);
    let m_y = if span_y > T::zero() { opts.grid.y_points.max(1) } else { 1 };
    let hs0 = half / T::from_usize(m_t);
    let hy0 = half * span_y / T::from_usize(m_y);

    let evals = Counter::new(0usize);
    let mut best = T::zero();
    let eval = |fam: &Family<T>, y: T, s: T, hy: T, hs: T, base: usize| -> Result<Cell<T>> {
        let point = match fam.index {
            Some(i) => Point::Index(i),
            None => Point::Circle(y),
        };
        let value = norm_at(cp, point, unit(s), a)?;
        evals.set(evals.get() + 1);
        Ok(Cell { base, y, hy, s, hs, value, upper: fam.upper(value, hy, hs) })
    };

    let mut heap = BinaryHeap::new();
    for (bi, fam) in families.iter().enumerate() {
        for iy in 0..m_y {
            let y = span_y * (T::from_usize(iy) + half) / T::from_usize(m_y);
            for is in 0..m_t {
                let s = T::from_usize(is) / T::from_usize(m_t);
                let cell = eval(fam, y, s, hy0, hs0, bi)?;
                best = best.max(cell.value);
                heap.push(cell);
            }
        }
    }
    let tol = T::lit(opts.tol);
    let third = T::one() / T::lit(3.0);
    while let Some(top) = heap.peek() {
        if top.upper - best <= tol || evals.get() >= opts.max_evals {
            break;
        }
        let cell = heap.pop().expect("peeked");
        let fam = &families[cell.base];
        // Trisect along the dominant direction; the middle child keeps the centre value.
        let split_y = fam.lip_y * cell.hy > fam.lip_s * cell.hs;
        let (hy, hs) = if split_y { (cell.hy * third, cell.hs) } else { (cell.hy, cell.hs * third) };
        for side in [-T::one(), T::one()] {
            let (y, s) = if split_y {
                (cell.y + side * hy * T::lit(2.0), cell.s)
            } else {
                (cell.y, cell.s + side * hs * T::lit(2.0))
            };
            let child = eval(fam, y, s, hy, hs, cell.base)?;
            best = best.max(child.value);
            heap.push(child);
        }
        heap.push(Cell { hy, hs, upper: fam.upper(cell.value, hy, hs), ..cell });
    }
    let top = heap.peek().map_or(best, |c| c.upper);
    Ok(NormEstimate { estimate: best, rigor: (top - best).max(T::zero()), lower_bound_only: false, evaluations: evals.get() })
}

/// Window compressions of `π_x` at sampled `x`; each power-iteration value is a
/// certified lower bound of `‖a‖`.
fn aperiodic_lower<T: Real>(cp: &CrossedProduct<T>, a: &GenPoly<T>, opts: &NormOptions) -> Result<NormEstimate<T>> {
    let w = opts.window.max(a.degree_bound() as usize) as i64;
    let size = (2 * w + 1) as usize;
    let sys = cp.system();
    let mut best = T::zero();
    let samples = opts.grid.y_points.clamp(1, 8);
    for j in 0..samples {
        let x = T::from_usize(j) / T::from_usize(samples);
        // band[n][i] = a(n)(σ^{i+n} x) for the column e_i
        let band: Vec<(i64, Vec<Complex<T>>)> = a
            .terms()
            .map(|(n, f)| {
                let vals = (-w..=w).map(|i| f.eval(sys.apply(Point::Circle(x), i + n))).collect();
                (n, vals)
            })
            .collect();
        let apply = |v: &[Complex<T>]| {
            let mut out = vec![czero(); size];
            for (n, vals) in &band {
                for i in -w..=w {
                    let target = i + n;
                    if target.abs() <= w {
                        out[(target + w) as usize] += vals[(i + w) as usize] * v[(i + w) as usize];
                    }
                }
            }
            out
        };
        let apply_adj = |v: &[Complex<T>]| {
            let mut out = vec![czero(); size];
            for (n, vals) in &band {
                for i in -w..=w {
                    let target = i + n;
                    if target.abs() <= w {
                        out[(i + w) as usize] += vals[(i + w) as usize].conj() * v[(target + w) as usize];
                    }
                }
            }
            out
        };
        best = best.max(power_norm_lower(size, apply, apply_adj, 500));
    }
    let upper = a.l1_bound();
    Ok(NormEstimate {
        estimate: best,
        rigor: (upper - best).max(T::zero()),
        lower_bound_only: true,
        evaluations: samples,
    })
}

/// Period of the orbit through a base point, exposed for callers that build
/// their own parameter sweeps.
pub fn base_period<T: Real>(cp: &CrossedProduct<T>, y: Point<T>) -> Result<usize> {
    period(cp, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Model;
    use crate::laurent::LaurentPoly;

    fn opts() -> NormOptions {
        NormOptions { grid: SampleGrid::new(32, 8), tol: 1e-7, ..Default::default() }
    }

    #[test]
    fn unitary_has_norm_one() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![1, 2, 0, 4, 3]).unwrap());
        let est = operator_norm(&cp, &cp.delta(1), &opts()).unwrap();
        assert!((est.estimate - 1.0).abs() < 1e-12);
        assert!(est.rigor <= 1e-7);
    }

    #[test]
    fn one_plus_delta_on_fixed_point() {
        // π_{y,t}(1 + δ) = 1 + t, sup |1 + t| = 2
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::finite(vec![0]).unwrap());
        let a = cp.one().add(&cp.delta(1)).unwrap();
        let est = operator_norm(&cp, &a, &NormOptions { grid: SampleGrid::new(17, 1), ..opts() }).unwrap();
        assert!((est.estimate - 2.0).abs() < 1e-8);
        assert!(est.estimate <= 2.0 + 1e-12);
    }

    #[test]
    fn multiplication_operator_norm_is_sup() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::rotation(1, 3).unwrap());
        let f = CoefficientFunction::Trig(LaurentPoly::from_coeffs([(0, Complex::new(1.0, 0.0)), (1, Complex::new(0.5, 0.0))]));
        let est = operator_norm(&cp, &cp.func(f), &opts()).unwrap();
        assert!((est.estimate - 1.5).abs() < 1e-8, "{est:?}");
        assert!(est.estimate + est.rigor >= 1.5 - 1e-12);
    }

    #[test]
    fn irrational_is_lower_bound() {
        let cp: CrossedProduct<f64> = CrossedProduct::new(DynSystem::irrational(2f64.sqrt() - 1.0).unwrap());
        let a = cp.one().add(&cp.delta(1)).unwrap();
        let est = operator_norm(&cp, &a, &NormOptions { window: 64, ..opts() }).unwrap();
        assert!(est.lower_bound_only);
        assert!(est.estimate <= 2.0 + 1e-12 && est.estimate > 1.99);
        let z = GenPoly::<f64>::zero(Model::Trig);
        assert_eq!(operator_norm(&cp, &z, &opts()).unwrap().estimate, 0.0);
    }
}
