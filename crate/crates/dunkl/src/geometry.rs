//! Root systems, reflection groups, orbit geometry and the reflection-invariant weight.
//!
//! Everything here is plain dense linear algebra on small matrices; the
//! catalog groups have at most 8 elements, so closure enumeration with a
//! floating-point tolerance is sufficient.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{DunklError, Result};

/// Entrywise tolerance for matrix/vector equality inside group closure.
pub const TOL_GROUP: f64 = 1e-10;
/// Tolerance for root-set membership checks.
pub const TOL_ROOT: f64 = 1e-9;
/// Guard against non-terminating closures from irrational-angle generators.
pub const MAX_GROUP_ORDER: usize = 1024;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Reflection of `x` in the hyperplane orthogonal to `alpha`.
pub fn reflect(alpha: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let nn = dot(alpha, alpha);
    if nn == 0.0 {
        return Err(DunklError::InvalidArgument("zero root".into()));
    }
    let c = 2.0 * dot(x, alpha) / nn;
    Ok(x.iter().zip(alpha).map(|(xi, ai)| xi - c * ai).collect())
}

/// Dense square matrix stored row-major; the element type of a reflection group.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl SquareMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    /// Householder-type reflection matrix `I - 2 αα^T/‖α‖²`.
    pub fn reflection(alpha: &[f64]) -> Self {
        let dim = alpha.len();
        let nn = dot(alpha, alpha);
        let mut m = Self::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] -= 2.0 * alpha[i] * alpha[j] / nn;
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self { dim: n, data }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * x[j]).sum())
            .collect()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.data[k * n + i] * self.data[k * n + j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                if (s - expect).abs() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// A finite root system with a multiplicity value per root.
#[derive(Debug, Clone)]
pub struct RootSystemSpec {
    pub dimension: usize,
    pub roots: Vec<Vec<f64>>,
    pub multiplicity: Vec<f64>,
}

/// Lexicographic positivity: first nonzero coordinate positive.
fn lex_positive(v: &[f64]) -> bool {
    for &c in v {
        if c.abs() > TOL_ROOT {
            return c > 0.0;
        }
    }
    false
}

impl RootSystemSpec {
    pub fn new(dimension: usize, roots: Vec<Vec<f64>>, multiplicity: Vec<f64>) -> Result<Self> {
        if roots.len() != multiplicity.len() {
            return Err(DunklError::InvalidArgument(
                "roots and multiplicity lists must have equal length".into(),
            ));
        }
        if roots.iter().any(|r| r.len() != dimension) {
            return Err(DunklError::InvalidArgument(
                "every root must have the stated dimension".into(),
            ));
        }
        Ok(Self {
            dimension,
            roots,
            multiplicity,
        })
    }

    /// Catalog presets. `k` carries one value per multiplicity orbit.
    pub fn preset(name: &str, k: &[f64]) -> Result<Self> {
        let k1 = |i: usize| -> f64 { k.get(i).copied().unwrap_or_else(|| k[0]) };
        if k.is_empty() || k.iter().any(|v| *v < 0.0) {
            return Err(DunklError::InvalidArgument(
                "multiplicity values must be nonnegative and nonempty".into(),
            ));
        }
        match name {
            // Z2 acting on the line.
            "rank1" => Self::new(1, vec![vec![1.0], vec![-1.0]], vec![k1(0); 2]),
            // Sign flips per coordinate; k may differ per axis.
            "z2_product" => {
                let n = k.len();
                let mut roots = Vec::new();
                let mut mult = Vec::new();
                for d in 0..n {
                    for s in [1.0, -1.0] {
                        let mut v = vec![0.0; n];
                        v[d] = s;
                        roots.push(v);
                        mult.push(k1(d));
                    }
                }
                Self::new(n, roots, mult)
            }
            "b2" => {
                let (ks, kl) = (k1(0), k1(1));
                let roots = vec![
                    vec![1.0, 0.0],
                    vec![-1.0, 0.0],
                    vec![0.0, 1.0],
                    vec![0.0, -1.0],
                    vec![1.0, 1.0],
                    vec![-1.0, -1.0],
                    vec![1.0, -1.0],
                    vec![-1.0, 1.0],
                ];
                let mult = vec![ks, ks, ks, ks, kl, kl, kl, kl];
                Self::new(2, roots, mult)
            }
            "a2" => {
                let h = 3f64.sqrt() / 2.0;
                let base = [vec![1.0, 0.0], vec![-0.5, h], vec![-0.5, -h]];
                let mut roots = Vec::new();
                for r in &base {
                    roots.push(r.clone());
                    roots.push(r.iter().map(|c| -c).collect());
                }
                Self::new(2, roots, vec![k1(0); 6])
            }
            other => Err(DunklError::InvalidArgument(format!(
                "unknown preset '{other}'"
            ))),
        }
    }

    /// Positive subsystem: one of each ±pair, chosen by lexicographic positivity.
    pub fn positive_roots(&self) -> Vec<(Vec<f64>, f64)> {
        self.roots
            .iter()
            .zip(&self.multiplicity)
            .filter(|(r, _)| lex_positive(r))
            .map(|(r, m)| (r.clone(), *m))
            .collect()
    }

    fn find_root(&self, v: &[f64]) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() <= TOL_ROOT))
    }

    /// Diagnostic validation; an empty list of violations means valid.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, r) in self.roots.iter().enumerate() {
            if norm(r) <= TOL_ROOT {
                violations.push(format!("root #{i} is the zero vector"));
            }
        }
        if violations.is_empty() {
            // closure under each reflection, and multiplicity invariance
            for (i, alpha) in self.roots.iter().enumerate() {
                for (j, beta) in self.roots.iter().enumerate() {
                    let image = reflect(alpha, beta).expect("nonzero root");
                    match self.find_root(&image) {
                        None => violations.push(format!(
                            "closure violation: sigma_(root #{i}) maps root #{j} outside the set"
                        )),
                        Some(idx) => {
                            if (self.multiplicity[idx] - self.multiplicity[j]).abs() > TOL_ROOT {
                                violations.push(format!(
                                    "multiplicity not G-invariant: roots #{j} and #{idx} lie in one orbit but carry k = {} and {}",
                                    self.multiplicity[j], self.multiplicity[idx]
                                ));
                            }
                        }
                    }
                }
            }
            // each ± pair contributes exactly one positive root
            let pos = self.positive_roots().len();
            if 2 * pos != self.roots.len() {
                violations.push(format!(
                    "positive subsystem has {pos} roots but the system has {} (expected exactly one of each ±pair)",
                    self.roots.len()
                ));
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite orthogonal group generated by the root reflections.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    pub dimension: usize,
    pub elements: Vec<SquareMatrix>,
    /// Position of each root's reflection inside `elements`.
    pub generator_index: BTreeMap<usize, usize>,
}

impl ReflectionGroup {
    /// Closure of the generating reflections under matrix product, terminating
    /// at a fixpoint. Elements end up sorted by their entries so the order is
    /// deterministic.
    pub fn generate(spec: &RootSystemSpec) -> Result<Self> {
        let report = spec.validate();
        if !report.is_valid() {
            return Err(DunklError::InvalidRootSystem(report.violations.join("; ")));
        }
        let generators: Vec<SquareMatrix> = spec
            .roots
            .iter()
            .map(|r| SquareMatrix::reflection(r))
            .collect();
        let mut elements = vec![SquareMatrix::identity(spec.dimension)];
        let mut frontier = elements.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &generators {
                    let p = m.mul(g);
                    if !elements.iter().any(|e| e.approx_eq(&p, TOL_GROUP))
                        && !next.iter().any(|e: &SquareMatrix| e.approx_eq(&p, TOL_GROUP))
                    {
                        next.push(p);
                    }
                }
            }
            elements.extend(next.iter().cloned());
            if elements.len() > MAX_GROUP_ORDER {
                return Err(DunklError::NotAFiniteGroup {
                    max_order: MAX_GROUP_ORDER,
                });
            }
            frontier = next;
        }
        for e in &elements {
            if !e.is_orthogonal(TOL_GROUP) {
                return Err(DunklError::InvalidRootSystem(
                    "generated element is not orthogonal".into(),
                ));
            }
        }
        elements.sort_by(|a, b| {
            a.data
                .iter()
                .zip(&b.data)
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut generator_index = BTreeMap::new();
        for (ri, r) in spec.roots.iter().enumerate() {
            let refl = SquareMatrix::reflection(r);
            let pos = elements
                .iter()
                .position(|e| e.approx_eq(&refl, TOL_GROUP))
                .expect("generator must be in its own closure");
            generator_index.insert(ri, pos);
        }
        Ok(Self {
            dimension: spec.dimension,
            elements,
            generator_index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Trivial group on `dim` coordinates (the k = 0 / empty-root-system case).
    pub fn trivial(dim: usize) -> Self {
        Self {
            dimension: dim,
            elements: vec![SquareMatrix::identity(dim)],
            generator_index: BTreeMap::new(),
        }
    }

    /// `{g·x : g ∈ G}` with near-duplicates merged, sorted for determinism.
    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for g in &self.elements {
            let y = g.apply(x);
            if !out
                .iter()
                .any(|o| o.iter().zip(&y).all(|(a, b)| (a - b).abs() <= TOL_GROUP))
            {
                out.push(y);
            }
        }
        out.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    }

    /// Orbit distance `d_G(x, y) = min_g ‖g·y − x‖`.
    pub fn orbit_distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.elements
            .iter()
            .map(|g| norm(&sub(&g.apply(y), x)))
            .fold(f64::INFINITY, f64::min)
    }

    /// `max_g ‖g·x − y‖`, the outer bound in the support arguments.
    pub fn max_orbit_distance(&self, x: &[f64], y: &[f64]) -> f64 {
        self.elements
            .iter()
            .map(|g| norm(&sub(&g.apply(x), y)))
            .fold(0.0, f64::max)
    }
}

/// Weight data derived from a root system: γ_k, the homogeneous dimension and
/// the (lazily computed) Gaussian normalization constant.
#[derive(Debug)]
pub struct WeightContext {
    pub root_system: RootSystemSpec,
    pub group: ReflectionGroup,
    pub gamma_k: f64,
    pub homogeneous_dimension: f64,
    positive: Vec<(Vec<f64>, f64)>,
    c_k_cache: OnceLock<f64>,
}

impl Clone for WeightContext {
    fn clone(&self) -> Self {
        let c = OnceLock::new();
        if let Some(v) = self.c_k_cache.get() {
            let _ = c.set(*v);
        }
        Self {
            root_system: self.root_system.clone(),
            group: self.group.clone(),
            gamma_k: self.gamma_k,
            homogeneous_dimension: self.homogeneous_dimension,
            positive: self.positive.clone(),
            c_k_cache: c,
        }
    }
}

impl WeightContext {
    pub fn new(root_system: RootSystemSpec) -> Result<Self> {
        let group = ReflectionGroup::generate(&root_system)?;
        let positive = root_system.positive_roots();
        let gamma_k: f64 = positive.iter().map(|(_, k)| k).sum();
        let total_k: f64 = root_system.multiplicity.iter().sum();
        Ok(Self {
            homogeneous_dimension: root_system.dimension as f64 + total_k,
            gamma_k,
            group,
            positive,
            root_system,
        c_k_cache: OnceLock::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.root_system.dimension
    }

    pub fn positive_roots(&self) -> &[(Vec<f64>, f64)] {
        &self.positive
    }

    /// `h_k(x) = ∏_{α∈R⁺} |⟨α,x⟩|^{k(α)}`.
    pub fn weight(&self, x: &[f64]) -> f64 {
        self.positive
            .iter()
            .map(|(alpha, k)| dot(alpha, x).abs().powf(*k))
            .product()
    }

    /// Squared weight `h_k²`, the density of m_k against Lebesgue measure.
    pub fn weight_sq(&self, x: &[f64]) -> f64 {
        self.positive
            .iter()
            .map(|(alpha, k)| dot(alpha, x).abs().powf(2.0 * k))
            .product()
    }

    /// Cached Gaussian normalization; `compute` runs at most once.
    pub fn c_k_cached(&self, compute: impl FnOnce() -> f64) -> f64 {
        *self.c_k_cache.get_or_init(compute)
    }

    pub fn c_k_if_set(&self) -> Option<f64> {
        self.c_k_cache.get().copied()
    }
}

/// Ball-derived regions used by the support theorems and the BMO proof split.
#[derive(Debug, Clone)]
pub enum OrbitRegion {
    /// Closed ball B(x, r).
    Ball { center: Vec<f64>, radius: f64 },
    /// Doubled ball B* = B(x, 2r).
    DoubledBall { center: Vec<f64>, radius: f64 },
    /// Q* = ∪_g g·B(x, 2r).
    OrbitUnion { center: Vec<f64>, radius: f64 },
    /// ∩_g B(g·x, r).
    OrbitIntersection { center: Vec<f64>, radius: f64 },
}

impl OrbitRegion {
    pub fn contains(&self, group: &ReflectionGroup, y: &[f64]) -> bool {
        match self {
            OrbitRegion::Ball { center, radius } => norm(&sub(y, center)) <= *radius,
            OrbitRegion::DoubledBall { center, radius } => norm(&sub(y, center)) <= 2.0 * radius,
            // min_g ‖g·y − x‖ ≤ 2r, using G-invariance of Q* membership
            OrbitRegion::OrbitUnion { center, radius } => {
                group.orbit_distance(center, y) <= 2.0 * radius
            }
            OrbitRegion::OrbitIntersection { center, radius } => {
                group.max_orbit_distance(center, y) <= *radius
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub pairs_checked: usize,
    pub violations: usize,
    /// min over pairs of (min_g ‖g·z − x‖ − 2‖y − x‖).
    pub min_slack: f64,
}

/// Samples y ∈ B(x, r) and z ∉ Q*(x, r) and checks the separation inequality
/// `min_g ‖g·z − x‖ > 2‖y − x‖` on each pair.
pub fn separation_check<R: Rng>(
    group: &ReflectionGroup,
    x: &[f64],
    r: f64,
    samples: usize,
    box_half_width: f64,
    rng: &mut R,
) -> Result<SeparationReport> {
    if r <= 0.0 {
        return Err(DunklError::InvalidArgument("radius must be positive".into()));
    }
    let dim = x.len();
    let q_star = OrbitRegion::OrbitUnion {
        center: x.to_vec(),
        radius: r,
    };
    let mut min_slack = f64::INFINITY;
    let mut violations = 0;
    let mut checked = 0;
    while checked < samples {
        // y uniform in B(x, r) by rejection from the bounding cube
        let y: Vec<f64> = loop {
            let cand: Vec<f64> = (0..dim)
                .map(|d| x[d] + rng.gen_range(-r..=r))
                .collect();
            if norm(&sub(&cand, x)) <= r {
                break cand;
            }
        };
        // z uniform in the box, rejected until it leaves Q*
        let z: Vec<f64> = loop {
            let cand: Vec<f64> = (0..dim)
                .map(|_| rng.gen_range(-box_half_width..=box_half_width))
                .collect();
            if !q_star.contains(group, &cand) {
                break cand;
            }
        };
        let slack = group.orbit_distance(x, &z) - 2.0 * norm(&sub(&y, x));
        if slack <= 0.0 {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
        checked += 1;
    }
    Ok(SeparationReport {
        pairs_checked: checked,
        violations,
        min_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reflect_flips_first_coordinate() {
        let r = reflect(&[1.0, 0.0], &[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(r[0], -3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], 4.0, epsilon = 1e-14);
    }

    #[test]
    fn reflect_swaps_coordinates_across_diagonal() {
        let r = reflect(&[1.0, -1.0], &[2.5, -0.75]).unwrap();
        assert_abs_diff_eq!(r[0], -0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], 2.5, epsilon = 1e-14);
    }

    #[test]
    fn reflect_fixes_hyperplane_points() {
        let r = reflect(&[0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r, vec![0.0, 0.0]);
    }

    #[test]
    fn reflect_rejects_zero_root() {
        assert!(reflect(&[0.0, 0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn rank1_system_is_valid() {
        let spec = RootSystemSpec::preset("rank1", &[0.5]).unwrap();
        assert!(spec.validate().is_valid());
    }

    #[test]
    fn missing_negative_root_is_a_closure_violation() {
        let spec = RootSystemSpec::new(1, vec![vec![1.0]], vec![1.0]).unwrap();
        let report = spec.validate();
        assert!(!report.is_valid());
        assert!(report.violations.iter().any(|v| v.contains("closure")));
    }

    #[test]
    fn b2_with_uneven_short_multiplicities_fails_invariance() {
        // e1 and e2 lie in one orbit under B2, so different k's must be flagged.
        let mut spec = RootSystemSpec::preset("b2", &[1.0, 2.0]).unwrap();
        spec.multiplicity[0] = 0.5; // ±e1 pair gets k = 0.5 ...
        spec.multiplicity[1] = 0.5;
        // ... while ±e2 keeps 1.0
        let report = spec.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("not G-invariant")));
    }

    #[test]
    fn group_orders_match_catalog() {
        for (name, k, order) in [
            ("rank1", vec![1.0], 2usize),
            ("z2_product", vec![1.0, 2.0], 4),
            ("b2", vec![1.0, 1.0], 8),
            ("a2", vec![1.0], 6),
        ] {
            let spec = RootSystemSpec::preset(name, &k).unwrap();
            let g = ReflectionGroup::generate(&spec).unwrap();
            assert_eq!(g.order(), order, "group order for {name}");
        }
    }

    #[test]
    fn b2_group_matches_dihedral_order_8() {
        // Independent construction: rotations by 90° and one mirror.
        let spec = RootSystemSpec::preset("b2", &[1.0, 1.0]).unwrap();
        let g = ReflectionGroup::generate(&spec).unwrap();
        let mut dihedral: Vec<SquareMatrix> = Vec::new();
        for q in 0..4 {
            let th = std::f64::consts::FRAC_PI_2 * q as f64;
            let rot = SquareMatrix {
                dim: 2,
                data: vec![th.cos(), -th.sin(), th.sin(), th.cos()],
            };
            let mirror = SquareMatrix {
                dim: 2,
                data: vec![1.0, 0.0, 0.0, -1.0],
            };
            dihedral.push(rot.mul(&mirror));
            let th = std::f64::consts::FRAC_PI_2 * q as f64;
            dihedral.push(SquareMatrix {
                dim: 2,
                data: vec![th.cos(), -th.sin(), th.sin(), th.cos()],
            });
        }
        for d in &dihedral {
            assert!(
                g.elements.iter().any(|e| e.approx_eq(d, 1e-9)),
                "dihedral element missing from generated group"
            );
        }
    }

    #[test]
    fn orbit_examples() {
        let spec = RootSystemSpec::preset("rank1", &[1.0]).unwrap();
        let g = ReflectionGroup::generate(&spec).unwrap();
        let orb = g.orbit(&[3.0]);
        assert_eq!(orb.len(), 2);
        assert_abs_diff_eq!(orb[0][0], -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(orb[1][0], 3.0, epsilon = 1e-12);

        let b2 = ReflectionGroup::generate(&RootSystemSpec::preset("b2", &[1.0, 1.0]).unwrap())
            .unwrap();
        assert_eq!(b2.orbit(&[0.0, 0.0]).len(), 1);
        let orb = b2.orbit(&[1.0, 0.0]);
        assert_eq!(orb.len(), 4);
        for target in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
            assert!(orb
                .iter()
                .any(|o| (o[0] - target[0]).abs() < 1e-10 && (o[1] - target[1]).abs() < 1e-10));
        }
    }

    #[test]
    fn orbit_distance_examples() {
        let g = ReflectionGroup::generate(&RootSystemSpec::preset("rank1", &[1.0]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(g.orbit_distance(&[1.0], &[-3.0]), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.orbit_distance(&[0.7], &[0.7]), 0.0, epsilon = 1e-12);

        let b2 = ReflectionGroup::generate(&RootSystemSpec::preset("b2", &[1.0, 1.0]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(
            b2.orbit_distance(&[1.0, 0.0], &[0.0, 1.0]),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn weight_examples() {
        let ctx = WeightContext::new(RootSystemSpec::preset("rank1", &[1.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(ctx.weight(&[2.0]), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ctx.gamma_k, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ctx.homogeneous_dimension, 3.0, epsilon = 1e-12);

        let ctx0 = WeightContext::new(RootSystemSpec::preset("rank1", &[0.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(ctx0.weight(&[13.7]), 1.0, epsilon = 1e-12);

        let z2 = WeightContext::new(RootSystemSpec::preset("z2_product", &[1.0, 2.0]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(z2.weight(&[2.0, 3.0]), 18.0, epsilon = 1e-10);
    }

    #[test]
    fn weight_is_group_invariant_and_homogeneous() {
        let ctx = WeightContext::new(RootSystemSpec::preset("b2", &[1.0, 0.5]).unwrap()).unwrap();
        let x = [0.63, -1.21];
        let hx = ctx.weight(&x);
        for g in &ctx.group.elements {
            assert_abs_diff_eq!(ctx.weight(&g.apply(&x)), hx, epsilon = 1e-10);
        }
        let lam = 1.7;
        let scaled: Vec<f64> = x.iter().map(|c| c * lam).collect();
        assert_abs_diff_eq!(
            ctx.weight(&scaled),
            lam.powf(ctx.gamma_k) * hx,
            epsilon = 1e-10
        );
    }

    #[test]
    fn region_membership_examples() {
        let g = ReflectionGroup::generate(&RootSystemSpec::preset("rank1", &[1.0]).unwrap())
            .unwrap();
        let q = OrbitRegion::OrbitUnion {
            center: vec![2.0],
            radius: 0.5,
        };
        assert!(q.contains(&g, &[-2.5]));
        let inter = OrbitRegion::OrbitIntersection {
            center: vec![2.0],
            radius: 1.0,
        };
        assert!(!inter.contains(&g, &[0.5]));
        // Q*(0, r) is exactly B(0, 2r)
        let q0 = OrbitRegion::OrbitUnion {
            center: vec![0.0],
            radius: 0.5,
        };
        assert!(q0.contains(&g, &[0.99]));
        assert!(!q0.contains(&g, &[1.01]));
    }

    #[test]
    fn separation_holds_on_sampled_pairs() {
        let g = ReflectionGroup::generate(&RootSystemSpec::preset("rank1", &[1.0]).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let report = separation_check(&g, &[1.0], 0.3, 100, 5.0, &mut rng).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.min_slack > 0.0);
    }

    #[test]
    fn orbit_distance_is_invariant_pseudometric_on_samples() {
        let b2 = ReflectionGroup::generate(&RootSystemSpec::preset("b2", &[1.0, 1.0]).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let q: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let w: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let d = b2.orbit_distance(&p, &q);
            assert_abs_diff_eq!(d, b2.orbit_distance(&q, &p), epsilon = 1e-10);
            assert!(d <= norm(&sub(&q, &p)) + 1e-12);
            for g in &b2.elements {
                assert_abs_diff_eq!(b2.orbit_distance(&g.apply(&p), &q), d, epsilon = 1e-10);
            }
            assert!(d <= b2.orbit_distance(&p, &w) + b2.orbit_distance(&w, &q) + 1e-10);
        }
    }
}
