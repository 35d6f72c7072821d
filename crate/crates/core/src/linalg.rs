//! Small dense complex linear algebra: matrices, Hermitian spectra,
//! spectral norms, polynomial roots, and exact rational rank.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::scalar::{cone, czero, Real};

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_diag(d: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<Complex<T>>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, a| m.max(a.norm()))
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    /// Spectral norm (largest singular value).
    pub fn spectral_norm(&self) -> T {
        if self.data.is_empty() {
            return T::zero();
        }
        let gram = if self.rows >= self.cols {
            self.adjoint().matmul(self)
        } else {
            self.matmul(&self.adjoint())
        };
        let top = hermitian_eigenvalues(&gram).into_iter().fold(T::zero(), T::max);
        top.max(T::zero()).sqrt()
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is embedded as the real symmetric `[[Re, −Im], [Im, Re]]`,
/// whose spectrum is that of `H` with every eigenvalue doubled, and
/// diagonalized by cyclic Jacobi sweeps.
pub fn hermitian_eigenvalues<T: Real>(h: &CMatrix<T>) -> Vec<T> {
    let n = h.rows();
    assert_eq!(n, h.cols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    let m = 2 * n;
    let mut a = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            // Symmetrize to absorb rounding in the Hermitian input.
            let z = (h[(i, j)] + h[(j, i)].conj()) * T::lit(0.5);
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[(i + n) * m + j] = z.im;
            a[i * m + (j + n)] = -z.im;
        }
    }
    jacobi_symmetric(&mut a, m);
    let mut ev: Vec<T> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    // Each eigenvalue appears twice; keep every other one.
    ev.into_iter().step_by(2).collect()
}

fn jacobi_symmetric<T: Real>(a: &mut [T], m: usize) {
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..m {
            diag += a[i * m + i] * a[i * m + i];
            for j in (i + 1)..m {
                off += a[i * m + j] * a[i * m + j];
            }
        }
        if off <= eps * eps * diag.max(T::min_positive_value()) || off == T::zero() {
            return;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let zeta = (aqq - app) / (T::lit(2.0) * apq);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
                a[p * m + q] = T::zero();
                a[q * m + p] = T::zero();
            }
        }
    }
}

/// Lower bound of `‖A‖` by power iteration on `A*A`, for operators given
/// only through their action. Every iterate gives `‖Av‖/‖v‖ ≤ ‖A‖`, so the
/// result is a certified lower bound whether or not it has converged.
pub fn power_norm_lower<T, F, G>(dim: usize, apply: F, apply_adj: G, iters: usize) -> T
where
    T: Real,
    F: Fn(&[Complex<T>]) -> Vec<Complex<T>>,
    G: Fn(&[Complex<T>]) -> Vec<Complex<T>>,
{
    if dim == 0 {
        return T::zero();
    }
    let norm = |v: &[Complex<T>]| v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    // Deterministic start with no special alignment.
    let mut v: Vec<Complex<T>> = (0..dim)
        .map(|i| Complex::new(T::one() + T::from_usize(i % 7) * T::lit(0.1), T::from_usize(i % 3) * T::lit(0.05)))
        .collect();
    let mut best = T::zero();
    let mut prev = T::zero();
    for _ in 0..iters {
        let nv = norm(&v);
        if nv == T::zero() {
            break;
        }
        for z in v.iter_mut() {
            *z = *z / nv;
        }
        let av = apply(&v);
        let est = norm(&av);
        best = best.max(est);
        if (est - prev).abs() <= T::lit(1e-13) * est.max(T::one()) {
            break;
        }
        prev = est;
        v = apply_adj(&av);
    }
    best
}

/// All complex roots of `Σ c_k z^k` (`coeffs[k] = c_k`, leading coefficient nonzero),
/// by Aberth–Ehrlich iteration.
pub fn poly_roots<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut c: Vec<Complex<T>> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == czero()) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let c: Vec<Complex<T>> = c.iter().map(|x| x / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = T::one() + c[..deg].iter().fold(T::zero(), |m, x| m.max(x.norm()));
    let mut z: Vec<Complex<T>> = (0..deg)
        .map(|k| {
            let ang = T::TAU() * (T::from_usize(k) + T::lit(0.25)) / T::from_usize(deg);
            Complex::new(ang.cos(), ang.sin()) * radius * T::lit(0.5)
        })
        .collect();
    let eval = |x: Complex<T>| {
        let mut p = czero::<T>();
        let mut dp = czero::<T>();
        for k in (0..=deg).rev() {
            dp = dp * x + p;
            p = p * x + c[k];
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = T::zero();
        for i in 0..deg {
            let (p, dp) = eval(z[i]);
            if p == czero() {
                continue;
            }
            let ratio = p / dp;
            let mut sum = czero::<T>();
            for j in 0..deg {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff != czero() {
                        sum += cone::<T>() / diff;
                    }
                }
            }
            let step = ratio / (cone::<T>() - ratio * sum);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(T::one()));
            }
        }
        if moved <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    // Newton polish.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(*zi);
            if dp == czero() {
                break;
            }
            let step = p / dp;
            if step.re.is_finite() && step.im.is_finite() {
                *zi -= step;
            }
        }
    }
    z
}

pub type Rational = Ratio<i128>;

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Rational::one() / rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v *= inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Basis of the null space `{v : M v = 0}` of a rational matrix with `ncols` columns.
pub fn rational_nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Rational::one() / rows[rank][col];
        for v in rows[rank].iter_mut() {
            *v *= inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f];
            }
            v
        })
        .collect()
}

/// Whether every entry of a rational vector is zero outside `allowed`.
pub fn supported_in(v: &[Rational], allowed: &[bool]) -> bool {
    v.iter().zip(allowed).all(|(x, &ok)| ok || x.is_zero())
}
