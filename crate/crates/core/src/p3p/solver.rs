//! Ratio-substitution solver for the distance system
//! `e_i^2 + e_j^2 - 2 cos_ij e_i e_j = s_ij^2`.
//!
//! Writing `e_i = u e_k`, `e_j = v e_k` for an anchor `k` and eliminating
//! `e_k^2` leaves two conics in `(u, v)`. Their resultant in `v` is a quartic
//! in `u`, solved with companion-matrix eigenvalues. Each root is lifted back
//! and polished with Newton's method on the full system.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::triangle::{distances, CameraCenter, Triangle};
use super::P3pError;

/// Equation `k` couples the two vertices other than `k`.
pub const PAIRS: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

/// A P3P distance system: triangle plus the three viewing-angle cosines.
#[derive(Debug, Clone, PartialEq)]
pub struct P3PInstance {
    pub triangle: Triangle,
    pub cos12: f64,
    pub cos13: f64,
    pub cos23: f64,
}

impl P3PInstance {
    pub fn new(triangle: Triangle, cos12: f64, cos13: f64, cos23: f64) -> Result<Self, P3pError> {
        for (name, c) in [("cos12", cos12), ("cos13", cos13), ("cos23", cos23)] {
            if !(c > -1.0 && c < 1.0) {
                return Err(P3pError::InvalidCosine { name, value: c });
            }
        }
        Ok(P3PInstance {
            triangle,
            cos12,
            cos13,
            cos23,
        })
    }

    /// Cosine between vertices `i` and `j` (0-based).
    pub fn cos(&self, i: usize, j: usize) -> f64 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.cos12,
            (0, 2) => self.cos13,
            (1, 2) => self.cos23,
            _ => panic!("no cosine for vertex pair ({i}, {j})"),
        }
    }

    /// Squared side between vertices `i` and `j` (0-based).
    pub fn side_sq(&self, i: usize, j: usize) -> f64 {
        let [a, b, c] = self.triangle.squared_sides_f64();
        match (i.min(j), i.max(j)) {
            (0, 1) => a,
            (0, 2) => b,
            (1, 2) => c,
            _ => panic!("no side for vertex pair ({i}, {j})"),
        }
    }

    /// Values of the three equations, ordered as [`PAIRS`].
    pub fn eval(&self, e: &[Complex64; 3]) -> [Complex64; 3] {
        PAIRS.map(|(i, j)| {
            e[i] * e[i] + e[j] * e[j] - e[i] * e[j] * (2.0 * self.cos(i, j)) - self.side_sq(i, j)
        })
    }

    /// Jacobian of [`P3PInstance::eval`].
    pub fn jacobian(&self, e: &[Complex64; 3]) -> Matrix3<Complex64> {
        let mut m = Matrix3::zeros();
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let c = self.cos(i, j);
            m[(k, i)] = (e[i] - e[j] * c) * 2.0;
            m[(k, j)] = (e[j] - e[i] * c) * 2.0;
        }
        m
    }

    /// Max absolute equation value.
    pub fn residual(&self, e: &[Complex64; 3]) -> f64 {
        self.eval(e).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Builds the instance seen from camera center `o`.
pub fn instance_from_center(t: &Triangle, o: CameraCenter) -> Result<P3PInstance, P3pError> {
    let d = distances(t, o);
    let tiny = 1e-12 * t.scale();
    if let Some(v) = d.iter().position(|x| *x <= tiny) {
        return Err(P3pError::VertexCoincidence { vertex: v });
    }
    let p = o.to_vector();
    let verts = t.vertices();
    let rays = verts.map(|v| v - p);
    let cos = |i: usize, j: usize| rays[i].dot(&rays[j]) / (d[i] * d[j]);
    let c = [cos(0, 1), cos(0, 2), cos(1, 2)];
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        if c[k].abs() >= 1.0 - 1e-14 {
            return Err(P3pError::CollinearWithEdge { edge: (i, j) });
        }
    }
    P3PInstance::new(t.clone(), c[0], c[1], c[2])
}

/// One root of the distance system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub e: [Complex64; 3],
    pub residual: f64,
    pub is_physical: bool,
    pub multiplicity_hint: Option<usize>,
}

impl SolutionTriple {
    pub fn from_values(inst: &P3PInstance, e: [Complex64; 3]) -> Self {
        let e = canonical_sign(e);
        let scale = inst.triangle.scale();
        let is_physical = e.iter().all(|v| v.re > 0.0 && v.im.abs() <= 1e-8 * scale);
        SolutionTriple {
            residual: inst.residual(&e),
            e,
            is_physical,
            multiplicity_hint: None,
        }
    }

    pub fn from_real(inst: &P3PInstance, e: [f64; 3]) -> Self {
        Self::from_values(inst, e.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn real(&self) -> [f64; 3] {
        self.e.map(|v| v.re)
    }

    pub fn distance_to(&self, other: &[Complex64; 3]) -> f64 {
        let o = canonical_sign(*other);
        self.e
            .iter()
            .zip(&o)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Picks the representative of `{e, -e}` with `Re(e1) >= 0`, ties broken by
/// `Re(e2) >= 0` and then `Re(e3) >= 0`.
pub fn canonical_sign(e: [Complex64; 3]) -> [Complex64; 3] {
    for v in &e {
        if v.re > 0.0 {
            return e;
        }
        if v.re < 0.0 {
            return e.map(|x| -x);
        }
    }
    e
}

/// Numerical knobs of the solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Clustering radius relative to `sqrt(s12^2 + s13^2 + s23^2)`.
    pub cluster_radius: f64,
    pub polish_max_iter: usize,
    /// The eliminant counts as identically zero when every coefficient is
    /// below this fraction of its term mass.
    pub continuum_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cluster_radius: 1e-6,
            polish_max_iter: 50,
            continuum_tol: 1e-10,
        }
    }
}

/// Full solver output.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Cluster representatives; `multiplicity_hint` holds the cluster size.
    pub solutions: Vec<SolutionTriple>,
    /// Roots of the eliminant that had no finite lift.
    pub escaped: usize,
    /// Vertex used as the ratio anchor.
    pub anchor: usize,
    /// Polished roots before clustering.
    pub raw: Vec<[Complex64; 3]>,
}

/// All solutions with default options.
pub fn solve(inst: &P3PInstance) -> Result<Vec<SolutionTriple>, P3pError> {
    Ok(solve_with(inst, &SolverOptions::default())?.solutions)
}

pub fn solve_with(inst: &P3PInstance, opts: &SolverOptions) -> Result<SolveReport, P3pError> {
    let first = eliminant(inst, 0);
    if is_zero_poly(&first, opts.continuum_tol) {
        return Err(P3pError::ContinuumDetected {
            samples: continuum_samples(inst),
        });
    }
    let quality = |r: &[Tracked; 5]| {
        let n = r.iter().map(|c| c.v * c.v).sum::<f64>().sqrt();
        r[4].v.abs() / n
    };
    // Distinct solutions can share the ratio used by one anchor (for
    // instance `e2 / e1 = 1` on a symmetric configuration), which merges
    // their eliminant roots. No two solutions share every ratio, so prefer
    // the anchor whose roots are least crowded.
    let mut candidates = Vec::with_capacity(3);
    for k in 0..3 {
        let q = if k == 0 { first } else { eliminant(inst, k) };
        let roots = poly_roots(&q.iter().map(|c| c.v).collect::<Vec<_>>());
        let crowd = crowding(&roots);
        let good = quality(&q) >= 1e-8;
        candidates.push((k, good, crowd, quality(&q), roots));
        if good && crowd <= 1 {
            break;
        }
    }
    let pick = if candidates.iter().any(|c| c.1) {
        candidates.iter().filter(|c| c.1).min_by_key(|c| c.2)
    } else {
        candidates.iter().max_by(|a, b| a.3.total_cmp(&b.3))
    };
    let (anchor, roots) = pick.map(|c| (c.0, c.4.clone())).expect("three anchors tried");
    let mut escaped = 4 - roots.len();
    let mut raw = Vec::new();
    let scale = inst.triangle.scale();
    let mut lifted = Vec::new();
    for u in &roots {
        match lift(inst, anchor, *u, false) {
            Some(e0) => {
                let e = polish(inst, e0, opts.polish_max_iter);
                if inst.residual(&e) > 1e-6 * scale * scale {
                    return Err(P3pError::NumericalFailure {
                        residual: inst.residual(&e),
                    });
                }
                raw.push(canonical_sign(e));
                lifted.push(*u);
            }
            None => escaped += 1,
        }
    }
    // Two distinct solutions can share a ratio u (a repeated root of the
    // eliminant with different v). When lifts coincide, try the other root
    // of P for the duplicate and keep it if it is a new solution.
    let radius = opts.cluster_radius * scale;
    let close = |a: &[Complex64; 3], b: &[Complex64; 3]| {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt() <= radius
    };
    for j in 1..raw.len() {
        if !(0..j).any(|i| close(&raw[i], &raw[j])) {
            continue;
        }
        if let Some(e0) = lift(inst, anchor, lifted[j], true) {
            let e = canonical_sign(polish(inst, e0, opts.polish_max_iter));
            if inst.residual(&e) <= 1e-10 * inst.side_sq(0, 1) && !raw.iter().any(|r| close(r, &e)) {
                raw[j] = e;
            }
        }
    }
    // Solutions with a vanishing anchor component have no finite ratio;
    // recover them through the other anchors.
    if escaped > 0 {
        for k in (0..3).filter(|&k| k != anchor) {
            let q: Vec<f64> = eliminant(inst, k).iter().map(|c| c.v).collect();
            for u in poly_roots(&q) {
                if raw.len() >= 4 {
                    break;
                }
                for alt in [false, true] {
                    let Some(e0) = lift(inst, k, u, alt) else { continue };
                    let e = canonical_sign(polish(inst, e0, opts.polish_max_iter));
                    if inst.residual(&e) <= 1e-10 * inst.side_sq(0, 1)
                        && !raw.iter().any(|r| close(r, &e))
                    {
                        raw.push(e);
                        break;
                    }
                }
            }
        }
        escaped = 4usize.saturating_sub(raw.len());
    }
    let solutions = cluster(inst, &raw, radius);
    let tol = 1e-10 * inst.side_sq(0, 1);
    if let Some(bad) = solutions.iter().find(|s| s.residual > tol) {
        return Err(P3pError::NumericalFailure {
            residual: bad.residual,
        });
    }
    Ok(SolveReport {
        solutions,
        escaped,
        anchor,
        raw,
    })
}

/// Solutions other than the cluster containing `known`.
pub fn complementary_solutions(
    inst: &P3PInstance,
    known: &[Complex64; 3],
) -> Result<Vec<SolutionTriple>, P3pError> {
    complementary_with(inst, known, &SolverOptions::default())
}

pub fn complementary_with(
    inst: &P3PInstance,
    known: &[Complex64; 3],
    opts: &SolverOptions,
) -> Result<Vec<SolutionTriple>, P3pError> {
    let mut sols = solve_with(inst, opts)?.solutions;
    let (idx, dist) = sols
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.distance_to(known)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(P3pError::KnownNotFound { distance: f64::INFINITY })?;
    if dist > 1e-3 * inst.triangle.scale() {
        return Err(P3pError::KnownNotFound { distance: dist });
    }
    sols.remove(idx);
    Ok(sols)
}

/// The roots left after removing the `mu` polished roots nearest to
/// `known`. Unlike [`complementary_solutions`] this does not depend on the
/// clustering radius, so a triple root split by rounding is removed whole.
pub fn complementary_deflated(
    inst: &P3PInstance,
    known: &[Complex64; 3],
    mu: usize,
    opts: &SolverOptions,
) -> Result<Vec<SolutionTriple>, P3pError> {
    let rep = solve_with(inst, opts)?;
    let known = canonical_sign(*known);
    let dist = |e: &[Complex64; 3]| {
        e.iter().zip(&known).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut order: Vec<usize> = (0..rep.raw.len()).collect();
    order.sort_by(|&a, &b| dist(&rep.raw[a]).total_cmp(&dist(&rep.raw[b])));
    match order.first() {
        Some(&i) if dist(&rep.raw[i]) <= 1e-3 * inst.triangle.scale() => {}
        Some(&i) => return Err(P3pError::KnownNotFound { distance: dist(&rep.raw[i]) }),
        None => return Err(P3pError::KnownNotFound { distance: f64::INFINITY }),
    }
    let mut rest: Vec<SolutionTriple> = order
        .iter()
        .skip(mu)
        .map(|&i| {
            let mut s = SolutionTriple::from_values(inst, rep.raw[i]);
            s.multiplicity_hint = Some(1);
            s
        })
        .collect();
    rest.sort_by(|a, b| {
        a.e.iter()
            .map(|x| (x.re, x.im))
            .partial_cmp(b.e.iter().map(|x| (x.re, x.im)))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(rest)
}

/// True iff the eliminant is numerically the zero polynomial, which
/// signals a positive-dimensional solution set.
pub fn detect_continuum(inst: &P3PInstance, tol: f64) -> bool {
    is_zero_poly(&eliminant(inst, 0), tol)
}

/// Value together with the sum of absolute values of the terms it was
/// built from, as a cancellation-aware scale.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    v: f64,
    m: f64,
}

impl Tracked {
    fn c(x: f64) -> Self {
        Tracked { v: x, m: x.abs() }
    }
    fn add(self, o: Self) -> Self {
        Tracked {
            v: self.v + o.v,
            m: self.m + o.m,
        }
    }
    fn sub(self, o: Self) -> Self {
        Tracked {
            v: self.v - o.v,
            m: self.m + o.m,
        }
    }
    fn mul(self, o: Self) -> Self {
        Tracked {
            v: self.v * o.v,
            m: self.m * o.m,
        }
    }
}

type TPoly = Vec<Tracked>;

fn tp_sub(a: &TPoly, b: &TPoly) -> TPoly {
    (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Tracked::c(0.0));
            let y = b.get(i).copied().unwrap_or(Tracked::c(0.0));
            x.sub(y)
        })
        .collect()
}

fn tp_mul(a: &TPoly, b: &TPoly) -> TPoly {
    let mut out = vec![Tracked::c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

/// Ratio-substitution data for anchor `k`: `(i, j, a, b, c, c_ki, c_kj, c_ij)`.
fn anchor_data(inst: &P3PInstance, k: usize) -> (usize, usize, [f64; 6]) {
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    (
        i,
        j,
        [
            inst.side_sq(k, i),
            inst.side_sq(k, j),
            inst.side_sq(i, j),
            inst.cos(k, i),
            inst.cos(k, j),
            inst.cos(i, j),
        ],
    )
}

/// Coefficients (ascending powers of `u`) of the conic pair
/// `P(v) = a v^2 + p1 v + p0`, `Q(v) = a v^2 + q1 v + q0`.
fn conics(d: &[f64; 6]) -> (TPoly, TPoly, TPoly, TPoly) {
    let [a, b, c, cki, ckj, cij] = d.map(Tracked::c);
    let two = Tracked::c(2.0);
    // q(u) = 1 - 2 c_ki u + u^2
    let q: TPoly = vec![Tracked::c(1.0), Tracked::c(0.0).sub(two.mul(cki)), Tracked::c(1.0)];
    let p1 = vec![Tracked::c(0.0).sub(two.mul(a).mul(ckj))];
    let p0 = tp_sub(&vec![a], &tp_mul(&vec![b], &q));
    let q1 = vec![Tracked::c(0.0), Tracked::c(0.0).sub(two.mul(a).mul(cij))];
    let q0 = tp_sub(
        &vec![Tracked::c(0.0), Tracked::c(0.0), a],
        &tp_mul(&vec![c], &q),
    );
    (p1, p0, q1, q0)
}

/// Degree-4 eliminant in `u` (ascending coefficients).
fn eliminant(inst: &P3PInstance, k: usize) -> [Tracked; 5] {
    let (_, _, d) = anchor_data(inst, k);
    let (p1, p0, q1, q0) = conics(&d);
    let a = vec![Tracked::c(d[0])];
    let dq = tp_sub(&q0, &p0);
    let dl = tp_sub(&q1, &p1);
    let cross = tp_sub(&tp_mul(&p1, &q0), &tp_mul(&q1, &p0));
    let r = tp_sub(&tp_mul(&a, &tp_mul(&dq, &dq)), &tp_mul(&dl, &cross));
    let mut out = [Tracked::c(0.0); 5];
    for (o, c) in out.iter_mut().zip(r) {
        *o = c;
    }
    out
}

fn is_zero_poly(r: &[Tracked; 5], tol: f64) -> bool {
    let mass = r.iter().map(|c| c.m).fold(0.0, f64::max);
    mass == 0.0 || r.iter().all(|c| c.v.abs() <= tol * mass)
}

/// Roots of a real polynomial given by ascending coefficients. Leading
/// coefficients that are negligible relative to the rest are dropped.
/// Size of the largest group of roots within `1e-3 (1 + |u|)` of one root.
fn crowding(roots: &[Complex64]) -> usize {
    roots
        .iter()
        .map(|u| roots.iter().filter(|v| (*v - u).norm() <= 1e-3 * (1.0 + u.norm())).count())
        .max()
        .unwrap_or(0)
}

pub(crate) fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let norm = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].abs() <= 1e-14 * norm {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for r in 1..deg {
        comp[(r, r - 1)] = 1.0;
    }
    for r in 0..deg {
        comp[(r, deg - 1)] = -coeffs[r] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Lifts an eliminant root `u` to a full solution. With `alternative`, the
/// other root of `P` is used.
fn lift(inst: &P3PInstance, k: usize, u: Complex64, alternative: bool) -> Option<[Complex64; 3]> {
    let (i, j, d) = anchor_data(inst, k);
    let [a, b, c, cki, ckj, cij] = d;
    let q = Complex64::new(1.0, 0.0) + u * u - u * (2.0 * cki);
    let p1 = Complex64::new(-2.0 * a * ckj, 0.0);
    let p0 = a - q * b;
    let q1 = u * (-2.0 * a * cij);
    let q0 = u * u * a - q * c;
    let disc = (p1 * p1 - p0 * (4.0 * a)).sqrt();
    let cands = [(-p1 + disc) / (2.0 * a), (-p1 - disc) / (2.0 * a)];
    // both roots of P; the one on Q is the lift
    let qv = |v: Complex64| (v * v * a + q1 * v + q0).norm();
    let pick = usize::from(qv(cands[1]) < qv(cands[0]));
    let v = cands[if alternative { 1 - pick } else { pick }];
    if q.norm() <= 1e-14 * (1.0 + u.norm_sqr()) || !v.is_finite() {
        return None;
    }
    let ek = (a / q).sqrt();
    let mut e = [Complex64::new(0.0, 0.0); 3];
    e[k] = ek;
    e[i] = u * ek;
    e[j] = v * ek;
    e.iter().all(|x| x.is_finite()).then_some(e)
}

/// Newton iteration on the full system, returning the best iterate seen.
pub(crate) fn polish(inst: &P3PInstance, e0: [Complex64; 3], max_iter: usize) -> [Complex64; 3] {
    let mut e = e0;
    let mut best = (inst.residual(&e), e);
    for _ in 0..max_iter {
        let f = inst.eval(&e);
        let jac = inst.jacobian(&e);
        let Some(step) = jac.lu().solve(&Vector3::new(f[0], f[1], f[2])) else {
            break;
        };
        if !step.iter().all(|s| s.is_finite()) {
            break;
        }
        for (x, s) in e.iter_mut().zip(step.iter()) {
            *x -= s;
        }
        let r = inst.residual(&e);
        if r < best.0 {
            best = (r, e);
        }
        let enorm = e.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if step.norm() < 1e-14 * (1.0 + enorm) {
            break;
        }
    }
    best.1
}

/// Single-linkage clustering; each cluster is reported by its centroid.
fn cluster(inst: &P3PInstance, raw: &[[Complex64; 3]], radius: f64) -> Vec<SolutionTriple> {
    let n = raw.len();
    let mut label: Vec<usize> = (0..n).collect();
    let dist = |a: &[Complex64; 3], b: &[Complex64; 3]| {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    };
    for i in 0..n {
        for j in i + 1..n {
            if dist(&raw[i], &raw[j]) <= radius {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for i in 0..n {
        if seen.contains(&label[i]) {
            continue;
        }
        seen.push(label[i]);
        let members: Vec<&[Complex64; 3]> = (0..n).filter(|&j| label[j] == label[i]).map(|j| &raw[j]).collect();
        let m = members.len() as f64;
        let mut c = [Complex64::new(0.0, 0.0); 3];
        for e in &members {
            for (ci, ei) in c.iter_mut().zip(e.iter()) {
                *ci += ei / m;
            }
        }
        // The centroid of a split multiple root is the better estimate, but
        // a near-multiple configuration can bias it; then keep the best member.
        let centroid = SolutionTriple::from_values(inst, c);
        let worst = members.iter().map(|e| inst.residual(e)).fold(0.0, f64::max);
        let mut sol = if centroid.residual <= worst.max(1e-14 * inst.side_sq(0, 1)) {
            centroid
        } else {
            members
                .iter()
                .map(|e| SolutionTriple::from_values(inst, **e))
                .min_by(|a, b| a.residual.total_cmp(&b.residual))
                .expect("non-empty cluster")
        };
        sol.multiplicity_hint = Some(members.len());
        out.push(sol);
    }
    out.sort_by(|a, b| {
        a.e.iter()
            .map(|x| (x.re, x.im))
            .partial_cmp(b.e.iter().map(|x| (x.re, x.im)))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}

/// Representative solutions on the circumcircle continuum: the arc whose
/// inscribed angles reproduce the instance cosines, sampled at 16 points.
pub fn continuum_samples(inst: &P3PInstance) -> Vec<SolutionTriple> {
    let t = &inst.triangle;
    let ([cx, cy], r) = t.circumcircle();
    let ang = |p: nalgebra::Vector3<f64>| (p.y - cy).atan2(p.x - cx);
    let verts = t.vertices();
    let mut a: Vec<f64> = verts.iter().map(|v| ang(*v)).collect();
    a.sort_by(f64::total_cmp);
    let arcs = [(a[0], a[1]), (a[1], a[2]), (a[2], a[0] + std::f64::consts::TAU)];
    let at = |phi: f64| CameraCenter::new(cx + r * phi.cos(), cy + r * phi.sin(), 0.0);
    let target = [inst.cos12, inst.cos13, inst.cos23];
    let mismatch = |phi: f64| match instance_from_center(t, at(phi)) {
        Ok(i) => [i.cos12, i.cos13, i.cos23]
            .iter()
            .zip(&target)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    };
    let best = arcs
        .iter()
        .min_by(|x, y| mismatch((x.0 + x.1) / 2.0).total_cmp(&mismatch((y.0 + y.1) / 2.0)))
        .copied();
    let Some((lo, hi)) = best else {
        return Vec::new();
    };
    if mismatch((lo + hi) / 2.0) > 1e-6 {
        return Vec::new();
    }
    (0..16)
        .map(|s| {
            let phi = lo + (hi - lo) * (s as f64 + 0.5) / 16.0;
            SolutionTriple::from_real(inst, distances(t, at(phi)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p3p::make_triangle;

    #[test]
    fn equilateral_unit_solution() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        let inst = P3PInstance::new(t, 0.5, 0.5, 0.5).unwrap();
        let sols = solve(&inst).unwrap();
        let one = [Complex64::new(1.0, 0.0); 3];
        let hit = sols.iter().find(|s| s.distance_to(&one) < 1e-10).unwrap_or_else(|| panic!("{sols:?}"));
        assert!(hit.residual < 1e-12);
        assert!(hit.is_physical);
    }

    #[test]
    fn cosine_range_enforced() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            P3PInstance::new(t, 1.0, 0.5, 0.5),
            Err(P3pError::InvalidCosine { .. })
        ));
    }

    #[test]
    fn instance_from_right_triangle_center() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let inst = instance_from_center(&t, CameraCenter::new(4.0, 2.0, 1.0)).unwrap();
        assert!((inst.cos12 - 1.0 / 126f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            instance_from_center(&t, CameraCenter::new(0.0, 0.0, 0.0)),
            Err(P3pError::VertexCoincidence { vertex: 0 })
        ));
    }

    #[test]
    fn generic_instance_has_four_roots() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let o = CameraCenter::new(1.3, 2.1, 4.4);
        let inst = instance_from_center(&t, o).unwrap();
        let rep = solve_with(&inst, &SolverOptions::default()).unwrap();
        assert_eq!(rep.solutions.len(), 4);
        assert_eq!(rep.escaped, 0);
        let seed = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        assert!(rep.solutions.iter().any(|s| s.distance_to(&seed) < 1e-9));
        for s in &rep.solutions {
            assert!(s.residual < 1e-10 * 49.0);
            assert_eq!(s.multiplicity_hint, Some(1));
        }
        let comp = complementary_solutions(&inst, &seed).unwrap();
        assert_eq!(comp.len(), 3);
    }

    #[test]
    fn cylinder_instance_has_double_root() {
        let t = make_triangle(5.0, 4.0, 3.0).unwrap();
        let o = CameraCenter::new(4.0, 2.0, 1.0);
        let inst = instance_from_center(&t, o).unwrap();
        let sols = solve(&inst).unwrap();
        let seed = distances(&t, o).map(|x| Complex64::new(x, 0.0));
        let hit = sols.iter().find(|s| s.distance_to(&seed) < 1e-6).unwrap();
        assert_eq!(hit.multiplicity_hint, Some(2));
        let comp = complementary_solutions(&inst, &seed).unwrap();
        assert!(comp.len() <= 2);
        for c in comp {
            assert!(c.residual < 1e-9);
        }
        assert!(!detect_continuum(&inst, 1e-10));
    }

    #[test]
    fn circumcircle_is_a_continuum() {
        let t = make_triangle(7.0, 6.0, 5.0).unwrap();
        let ([cx, cy], r) = t.circumcircle();
        let o = CameraCenter::new(cx + r * 0.3f64.cos(), cy + r * 0.3f64.sin(), 0.0);
        let inst = instance_from_center(&t, o).unwrap();
        assert!(detect_continuum(&inst, 1e-10));
        match solve(&inst) {
            Err(P3pError::ContinuumDetected { samples }) => {
                assert_eq!(samples.len(), 16);
                for s in samples {
                    assert!(s.residual < 1e-9, "{}", s.residual);
                }
            }
            other => panic!("expected continuum, got {other:?}"),
        }
        let off = instance_from_center(&t, CameraCenter::new(1.0, 1.0, 2.0)).unwrap();
        assert!(!detect_continuum(&off, 1e-10));
    }
}
