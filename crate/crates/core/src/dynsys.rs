//! Dynamical systems `(X, σ)` and their periodicity structure.
//!
//! Three models are supported: a finite set carrying the discrete topology
//! with a permutation, a rotation of the circle by a rational angle `p/q`,
//! and a rotation by a caller-asserted irrational angle. Circle points are
//! parametrized in turns, `x ∈ [0, 1)`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    FiniteDiscrete,
    RationalRotation,
    IrrationalRotation,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::FiniteDiscrete => "finite",
            SystemKind::RationalRotation => "rational-rotation",
            SystemKind::IrrationalRotation => "irrational-rotation",
        }
    }
}

/// A permutation of `{0, …, N−1}` with optional point labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSystem {
    sigma: Vec<usize>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteSystem {
    pub fn new(sigma: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::InvalidSystem("point set must be nonempty".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &s) in sigma.iter().enumerate() {
            if s >= n {
                return Err(Error::InvalidSystem(format!("sigma[{i}] = {s} out of range 0..{n}")));
            }
            if inverse[s] != usize::MAX {
                return Err(Error::InvalidSystem(format!("sigma is not a bijection: {s} hit twice")));
            }
            inverse[s] = i;
        }
        Ok(Self { sigma, inverse, labels: None })
    }

    /// Builds the permutation from disjoint cycles over `{0, …, n−1}`; unlisted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut sigma: Vec<usize> = (0..n).collect();
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n || !seen.insert(x) {
                    return Err(Error::InvalidSystem(format!("bad cycle entry {x}")));
                }
                sigma[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::new(sigma)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.sigma.len() {
            return Err(Error::InvalidSystem(format!(
                "{} labels for {} points",
                labels.len(),
                self.sigma.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `σ^n(x)` for any integer `n`.
    pub fn apply(&self, x: usize, n: i64) -> usize {
        let table = if n >= 0 { &self.sigma } else { &self.inverse };
        let mut y = x;
        for _ in 0..n.unsigned_abs() {
            y = table[y];
        }
        y
    }

    /// Orbit decomposition; orbits are ordered by their lowest point, which is listed first.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut points = vec![start];
            seen[start] = true;
            let mut y = self.sigma[start];
            while y != start {
                seen[y] = true;
                points.push(y);
                y = self.sigma[y];
            }
            out.push(Orbit { period: points.len(), points });
        }
        out
    }

    /// Exact period of every point.
    pub fn periods(&self) -> Vec<usize> {
        let mut per = vec![0; self.len()];
        for orbit in self.orbits() {
            for &x in &orbit.points {
                per[x] = orbit.period;
            }
        }
        per
    }

    pub fn period_lcm(&self) -> usize {
        self.orbits().iter().fold(1, |acc, o| acc.lcm(&o.period))
    }

    /// Whether `set` is invariant under σ (hence σ⁻¹, the set being finite).
    pub fn is_invariant(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&x| x < self.len() && set.contains(&self.sigma[x]))
    }

    /// Restriction of σ to an invariant subset; returns the subsystem and the
    /// increasing list of original indices (new index `i` ↦ `map[i]`).
    pub fn restrict(&self, subset: &BTreeSet<usize>) -> Result<(FiniteSystem, Vec<usize>)> {
        if subset.is_empty() {
            return Err(Error::Precondition("restriction to an empty set".into()));
        }
        if !self.is_invariant(subset) {
            return Err(Error::Precondition("restriction to a non-invariant set".into()));
        }
        let map: Vec<usize> = subset.iter().copied().collect();
        let mut index = BTreeMap::new();
        for (i, &x) in map.iter().enumerate() {
            index.insert(x, i);
        }
        let sigma = map.iter().map(|&x| index[&self.sigma[x]]).collect();
        let mut sub = FiniteSystem::new(sigma)?;
        if let Some(labels) = &self.labels {
            sub.labels = Some(map.iter().map(|&x| labels[x].clone()).collect());
        }
        Ok((sub, map))
    }
}

/// A cyclically ordered orbit `x, σ(x), …, σ^{p−1}(x)`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Orbit {
    pub points: Vec<usize>,
    pub period: usize,
}

impl Orbit {
    /// Lowest-index point, used as the canonical base point of the orbit.
    pub fn base(&self) -> usize {
        self.points[0]
    }
}

/// The dynamical system `Σ = (X, σ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DynSystem<T> {
    Finite(FiniteSystem),
    /// Rotation by `p/q` turns, `gcd(p, q) = 1`, `0 ≤ p < q`.
    RationalRotation { p: u64, q: u64 },
    /// Rotation by `theta` turns; irrationality is asserted by the caller.
    IrrationalRotation { theta: T },
}

/// A point of `X`: an index for finite systems, a position in turns on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point<T> {
    Index(usize),
    Circle(T),
}

/// A subset of `X` as produced by the periodicity computations.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSet {
    Empty,
    Whole,
    Indices(BTreeSet<usize>),
}

impl PointSet {
    pub fn is_empty(&self) -> bool {
        match self {
            PointSet::Empty => true,
            PointSet::Whole => false,
            PointSet::Indices(s) => s.is_empty(),
        }
    }

    pub fn contains_index(&self, x: usize) -> bool {
        match self {
            PointSet::Empty => false,
            PointSet::Whole => true,
            PointSet::Indices(s) => s.contains(&x),
        }
    }

    fn union(&self, other: &PointSet) -> PointSet {
        match (self, other) {
            (PointSet::Whole, _) | (_, PointSet::Whole) => PointSet::Whole,
            (PointSet::Empty, o) | (o, PointSet::Empty) => o.clone(),
            (PointSet::Indices(a), PointSet::Indices(b)) => {
                PointSet::Indices(a.union(b).copied().collect())
            }
        }
    }
}

/// Periodicity data of a system up to a period bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PeriodicityProfile {
    pub max_n: u64,
    /// `Per^n(σ)` for `0 ≤ n ≤ max_n` (`Per^0 = X`).
    pub per_n: BTreeMap<u64, PointSet>,
    /// `Per_n(σ)`, points of exact period `n`, for `1 ≤ n ≤ max_n`.
    pub per_exact: BTreeMap<u64, PointSet>,
    /// Finite systems only; rotations report their structure through the sets.
    pub orbits: Vec<Orbit>,
    pub aperiodic: PointSet,
    pub pip: PointSet,
}

impl<T: Real> DynSystem<T> {
    pub fn finite(sigma: Vec<usize>) -> Result<Self> {
        Ok(DynSystem::Finite(FiniteSystem::new(sigma)?))
    }

    /// Rotation by `p/q` turns; the fraction is reduced and taken mod 1.
    pub fn rotation(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSystem("rotation denominator is zero".into()));
        }
        let p = p % q;
        let g = p.gcd(&q);
        Ok(DynSystem::RationalRotation { p: p / g, q: q / g })
    }

    pub fn irrational(theta: T) -> Result<Self> {
        if !(theta > T::zero() && theta < T::one()) {
            return Err(Error::InvalidSystem(format!("irrational angle {theta} not in (0, 1)")));
        }
        Ok(DynSystem::IrrationalRotation { theta })
    }

    pub fn kind(&self) -> SystemKind {
        match self {
            DynSystem::Finite(_) => SystemKind::FiniteDiscrete,
            DynSystem::RationalRotation { .. } => SystemKind::RationalRotation,
            DynSystem::IrrationalRotation { .. } => SystemKind::IrrationalRotation,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSystem> {
        match self {
            DynSystem::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub(crate) fn require_finite(&self, op: &'static str) -> Result<&FiniteSystem> {
        self.as_finite().ok_or(Error::UnsupportedKind { kind: self.kind().name(), op })
    }

    /// True for finite systems and rational rotations: every point is periodic.
    pub fn is_periodic_type(&self) -> bool {
        !matches!(self, DynSystem::IrrationalRotation { .. })
    }

    /// Number of points, for finite systems.
    pub fn point_count(&self) -> Option<usize> {
        self.as_finite().map(FiniteSystem::len)
    }

    /// Rotation angle in turns.
    pub fn angle(&self) -> Option<T> {
        match self {
            DynSystem::Finite(_) => None,
            DynSystem::RationalRotation { p, q } => Some(T::lit(*p as f64) / T::lit(*q as f64)),
            DynSystem::IrrationalRotation { theta } => Some(*theta),
        }
    }

    /// `σ^n(x)`. Rational rotations shift by the exact residue `n·p mod q`.
    pub fn apply(&self, x: Point<T>, n: i64) -> Point<T> {
        match (self, x) {
            (DynSystem::Finite(f), Point::Index(i)) => Point::Index(f.apply(i, n)),
            (DynSystem::RationalRotation { p, q }, Point::Circle(c)) => {
                let q = *q as i64;
                let r = (n.rem_euclid(q) * (*p as i64)).rem_euclid(q);
                Point::Circle(frac(c + T::from_i64(r) / T::from_i64(q)))
            }
            (DynSystem::IrrationalRotation { theta }, Point::Circle(c)) => {
                Point::Circle(frac(c + T::from_i64(n) * *theta))
            }
            (_, pt) => pt,
        }
    }

    /// Exact period of a point, `None` for aperiodic points.
    pub fn period_of(&self, x: Point<T>) -> Result<Option<usize>> {
        match (self, x) {
            (DynSystem::Finite(f), Point::Index(i)) => {
                if i >= f.len() {
                    return Err(Error::Precondition(format!("point {i} out of range")));
                }
                Ok(Some(f.periods()[i]))
            }
            (DynSystem::RationalRotation { q, .. }, Point::Circle(_)) => Ok(Some(*q as usize)),
            (DynSystem::IrrationalRotation { .. }, Point::Circle(_)) => Ok(None),
            _ => Err(Error::Precondition("point type does not match the system".into())),
        }
    }

    /// Orbits of a finite system.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        Ok(self.require_finite("orbits")?.orbits())
    }

    /// Default period bound: twice the lcm of the orbit periods, `2q` for rational rotations.
    pub fn default_max_n(&self) -> u64 {
        match self {
            DynSystem::Finite(f) => 2 * f.period_lcm() as u64,
            DynSystem::RationalRotation { q, .. } => 2 * q,
            DynSystem::IrrationalRotation { .. } => 2,
        }
    }

    /// `Per^n(σ)` for a single `n ≥ 0`.
    pub fn per_n(&self, n: u64) -> PointSet {
        if n == 0 {
            return self.whole();
        }
        match self {
            DynSystem::Finite(f) => {
                let per = f.periods();
                PointSet::Indices((0..f.len()).filter(|&x| n.is_multiple_of(per[x] as u64)).collect())
            }
            DynSystem::RationalRotation { q, .. } => {
                if n.is_multiple_of(*q) {
                    PointSet::Whole
                } else {
                    PointSet::Empty
                }
            }
            DynSystem::IrrationalRotation { .. } => PointSet::Empty,
        }
    }

    /// `Per^n(σ)` for a signed degree (`Per^{−n} = Per^n`).
    pub fn per_signed(&self, n: i64) -> PointSet {
        self.per_n(n.unsigned_abs())
    }

    fn whole(&self) -> PointSet {
        match self {
            DynSystem::Finite(f) => PointSet::Indices((0..f.len()).collect()),
            _ => PointSet::Whole,
        }
    }

    pub fn periodicity_profile(&self, max_n: u64) -> Result<PeriodicityProfile> {
        if max_n == 0 {
            return Err(Error::Precondition("max_n must be positive".into()));
        }
        let mut per_n = BTreeMap::new();
        let mut per_exact = BTreeMap::new();
        for n in 0..=max_n {
            per_n.insert(n, self.per_n(n));
        }
        match self {
            DynSystem::Finite(f) => {
                let per = f.periods();
                for n in 1..=max_n {
                    let set = (0..f.len()).filter(|&x| per[x] as u64 == n).collect();
                    per_exact.insert(n, PointSet::Indices(set));
                }
                // Discrete topology: every periodic point is interior to its Per_k.
                Ok(PeriodicityProfile {
                    max_n,
                    per_n,
                    per_exact,
                    orbits: f.orbits(),
                    aperiodic: PointSet::Indices(BTreeSet::new()),
                    pip: self.whole(),
                })
            }
            DynSystem::RationalRotation { q, .. } => {
                for n in 1..=max_n {
                    let set = if n == *q { PointSet::Whole } else { PointSet::Empty };
                    per_exact.insert(n, set);
                }
                Ok(PeriodicityProfile {
                    max_n,
                    per_n,
                    per_exact,
                    orbits: Vec::new(),
                    aperiodic: PointSet::Empty,
                    pip: PointSet::Whole,
                })
            }
            DynSystem::IrrationalRotation { .. } => {
                for n in 1..=max_n {
                    per_exact.insert(n, PointSet::Empty);
                }
                Ok(PeriodicityProfile {
                    max_n,
                    per_n,
                    per_exact,
                    orbits: Vec::new(),
                    aperiodic: PointSet::Whole,
                    pip: PointSet::Empty,
                })
            }
        }
    }

    /// Topologically free iff every `Per^n(σ)`, `n ≥ 1`, has empty interior.
    pub fn is_topologically_free(&self) -> bool {
        match self {
            // Finite and discrete: every point is periodic and open.
            DynSystem::Finite(_) => false,
            DynSystem::RationalRotation { .. } => false,
            DynSystem::IrrationalRotation { .. } => true,
        }
    }

    /// Whether `Per^∞(σ) ∪ PIP(σ)` is dense in `X`.
    pub fn dense_union_check(&self) -> bool {
        let profile = match self.periodicity_profile(self.default_max_n()) {
            Ok(p) => p,
            Err(_) => return false,
        };
        // Closures are identities on finite discrete spaces, and the circle
        // models only produce empty or full sets.
        profile.aperiodic.union(&profile.pip) == self.whole()
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac<T: Real>(x: T) -> T {
    let f = x - x.floor();
    if f >= T::one() {
        T::zero()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> DynSystem<f64> {
        DynSystem::finite(vec![1, 0]).unwrap()
    }

    fn idx(v: &[usize]) -> PointSet {
        PointSet::Indices(v.iter().copied().collect())
    }

    #[test]
    fn orbit_decomposition() {
        let o = swap().orbits().unwrap();
        assert_eq!(o, vec![Orbit { points: vec![0, 1], period: 2 }]);

        let s: DynSystem<f64> = DynSystem::finite(vec![1, 0, 2]).unwrap();
        let o = s.orbits().unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!((o[0].points.clone(), o[0].period), (vec![0, 1], 2));
        assert_eq!((o[1].points.clone(), o[1].period), (vec![2], 1));

        let f = FiniteSystem::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap();
        let periods: Vec<usize> = f.orbits().iter().map(|o| o.period).collect();
        assert_eq!(periods, vec![3, 2, 1]);
        assert_eq!(f.orbits()[0].points, vec![0, 1, 2]);
    }

    #[test]
    fn rotations_have_no_orbit_listing() {
        let r: DynSystem<f64> = DynSystem::rotation(1, 3).unwrap();
        assert!(matches!(r.orbits(), Err(Error::UnsupportedKind { .. })));
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(FiniteSystem::new(vec![0, 0]).is_err());
        assert!(FiniteSystem::new(vec![2, 0]).is_err());
        assert!(FiniteSystem::new(vec![]).is_err());
    }

    #[test]
    fn rotation_is_reduced() {
        let r: DynSystem<f64> = DynSystem::rotation(2, 6).unwrap();
        assert_eq!(r, DynSystem::RationalRotation { p: 1, q: 3 });
        let r: DynSystem<f64> = DynSystem::rotation(5, 5).unwrap();
        assert_eq!(r, DynSystem::RationalRotation { p: 0, q: 1 });
    }

    #[test]
    fn profile_swap() {
        let p = swap().periodicity_profile(2).unwrap();
        assert_eq!(p.per_n[&1], idx(&[]));
        assert_eq!(p.per_n[&2], idx(&[0, 1]));
        assert_eq!(p.per_exact[&2], idx(&[0, 1]));
        assert_eq!(p.per_n[&0], idx(&[0, 1]));
    }

    #[test]
    fn profile_rotation_third() {
        let r: DynSystem<f64> = DynSystem::rotation(1, 3).unwrap();
        let p = r.periodicity_profile(6).unwrap();
        for n in [3, 6] {
            assert_eq!(p.per_n[&n], PointSet::Whole);
        }
        for n in [1, 2, 4, 5] {
            assert_eq!(p.per_n[&n], PointSet::Empty);
        }
        assert_eq!(p.per_exact[&3], PointSet::Whole);
        assert_eq!(p.pip, PointSet::Whole);
        assert_eq!(p.aperiodic, PointSet::Empty);
    }

    #[test]
    fn profile_two_cycle_plus_fixed() {
        let s: DynSystem<f64> = DynSystem::finite(vec![1, 0, 2]).unwrap();
        let p = s.periodicity_profile(2).unwrap();
        assert_eq!(p.per_n[&1], idx(&[2]));
        assert_eq!(p.per_n[&2], idx(&[0, 1, 2]));
        assert_eq!(p.per_exact[&1], idx(&[2]));
        assert_eq!(p.per_exact[&2], idx(&[0, 1]));
    }

    #[test]
    fn irrational_profile() {
        let s: DynSystem<f64> = DynSystem::irrational(2f64.sqrt() - 1.0).unwrap();
        let p = s.periodicity_profile(5).unwrap();
        assert!((1..=5).all(|n| p.per_n[&n] == PointSet::Empty));
        assert_eq!(p.aperiodic, PointSet::Whole);
        assert_eq!(s.period_of(Point::Circle(0.3)).unwrap(), None);
    }

    #[test]
    fn freeness_and_density() {
        let rot: DynSystem<f64> = DynSystem::rotation(1, 3).unwrap();
        let irr: DynSystem<f64> = DynSystem::irrational(2f64.sqrt() - 1.0).unwrap();
        assert!(!swap().is_topologically_free());
        assert!(!rot.is_topologically_free());
        assert!(irr.is_topologically_free());
        let r25: DynSystem<f64> = DynSystem::rotation(2, 5).unwrap();
        for s in [swap(), rot, irr, r25] {
            assert!(s.dense_union_check());
        }
    }

    #[test]
    fn default_period_bound() {
        let f: DynSystem<f64> =
            DynSystem::Finite(FiniteSystem::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap());
        assert_eq!(f.default_max_n(), 12);
        let r: DynSystem<f64> = DynSystem::rotation(2, 5).unwrap();
        assert_eq!(r.default_max_n(), 10);
    }

    #[test]
    fn rational_apply_is_exact_mod_q() {
        let r: DynSystem<f64> = DynSystem::rotation(1, 3).unwrap();
        let x = Point::Circle(0.1);
        assert_eq!(r.apply(x, 3), Point::Circle(0.1));
        assert_eq!(r.apply(x, -3), Point::Circle(0.1));
        if let Point::Circle(c) = r.apply(x, 1) {
            assert!((c - (0.1 + 1.0 / 3.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn restrict_to_invariant_subset() {
        let f = FiniteSystem::from_cycles(3, &[&[0, 1]]).unwrap();
        let (sub, map) = f.restrict(&[0, 1].into_iter().collect()).unwrap();
        assert_eq!(sub.sigma(), &[1, 0]);
        assert_eq!(map, vec![0, 1]);
        assert!(f.restrict(&[0, 2].into_iter().collect()).is_err());
    }
}
