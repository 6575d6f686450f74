//! Syntax clustering of representation vectors.
//!
//! K-means with k-means++ seeding, the clustering error (per cluster, the
//! number of points outside the cluster's majority category), the best-of-n
//! protocol, and a 2-D PCA projection for plotting.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("input error: {0}")]
    Input(alloc::string::String),
}

fn input(msg: impl Into<alloc::string::String>) -> ClusterError {
    ClusterError::Input(msg.into())
}

pub const DEFAULT_MAX_ITERS: usize = 300;

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringRun {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squared distances to the centroids.
    pub wcss: f64,
    pub iterations: usize,
    /// WCSS after each assignment step.
    pub wcss_history: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_points(points: &[Vec<f64>]) -> Result<usize, ClusterError> {
    let dim = points.first().map_or(0, Vec::len);
    if let Some(i) = points.iter().position(|p| p.len() != dim) {
        return Err(input(alloc::format!("point {i} has dimension {}, expected {dim}", points[i].len())));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(input("points contain a non-finite coordinate"));
    }
    Ok(dim)
}

/// Sum of squared distances from each point to its assigned centroid.
pub fn wcss(points: &[Vec<f64>], assignments: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points.iter().zip(assignments).map(|(p, &c)| sq_dist(p, &centroids[c])).sum()
}

/// Nearest centroid; ties go to the lower index.
fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, sq_dist(p, &centroids[0]));
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.gen_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = d2.iter().rposition(|&d| d > 0.0).expect("positive total");
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            rng.gen_range(0..points.len())
        };
        let c = points[pick].clone();
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// K-means with k-means++ seeding and Lloyd iterations until the
/// assignments stabilize or `max_iters` is reached.
///
/// An empty cluster takes the point farthest from its centroid (among
/// clusters with more than one point).
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, max_iters: usize) -> Result<ClusteringRun, ClusterError> {
    check_points(points)?;
    if k == 0 {
        return Err(input("k must be at least 1"));
    }
    if points.len() < k {
        return Err(input(alloc::format!("{} points cannot form {k} clusters", points.len())));
    }
    let dim = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut assignments = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let mut changed = false;
        let mut dists = vec![0.0; points.len()];
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            dists[i] = d;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        let mut sizes = vec![0usize; k];
        assignments.iter().for_each(|&c| sizes[c] += 1);
        // Repair empty clusters by stealing the worst-fitting point.
        while let Some(empty) = sizes.iter().position(|&s| s == 0) {
            let victim = (0..points.len())
                .filter(|&i| sizes[assignments[i]] > 1)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if dists[b] >= dists[i] => Some(b),
                    _ => Some(i),
                })
                .expect("points.len() >= k leaves a cluster with two points");
            sizes[assignments[victim]] -= 1;
            assignments[victim] = empty;
            sizes[empty] = 1;
            dists[victim] = 0.0;
            centroids[empty] = points[victim].clone();
            changed = true;
        }
        let current = dists.iter().sum::<f64>();
        if let Some(&prev) = history.last() {
            assert!(current <= prev + 1e-9 * (1.0 + prev), "WCSS increased from {prev} to {current}");
        }
        history.push(current);

        let mut sums = vec![vec![0.0; dim]; k];
        for (p, &c) in points.iter().zip(&assignments) {
            sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
        }
        for (c, sum) in sums.into_iter().enumerate() {
            centroids[c] = sum.into_iter().map(|s| s / sizes[c] as f64).collect();
        }
        if !changed {
            break;
        }
    }
    let total = wcss(points, &assignments, &centroids);
    Ok(ClusteringRun { k, assignments, centroids, wcss: total, iterations, wcss_history: history })
}

/// Category counts and errors per cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    /// `counts[c][j]` is the number of points of category `j + 1` in cluster `c`.
    pub counts: Vec<Vec<usize>>,
    /// Majority category per cluster (1-based; ties go to the lowest).
    pub majority: Vec<usize>,
    pub errors: Vec<usize>,
    pub total: usize,
}

/// Majority category and error of one cluster's count list.
pub fn cluster_error(counts: &[usize]) -> (usize, usize) {
    let mut best = 0;
    for (j, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = j;
        }
    }
    let size: usize = counts.iter().sum();
    (best + 1, size - counts.get(best).copied().unwrap_or(0))
}

/// Clustering error of `assignments` against 1-based category `labels`.
/// Each cluster is scored against its own majority independently.
pub fn clustering_error(assignments: &[usize], labels: &[usize], k: usize) -> Result<ErrorReport, ClusterError> {
    if assignments.len() != labels.len() {
        return Err(input(alloc::format!("{} labels for {} points", labels.len(), assignments.len())));
    }
    if labels.contains(&0) {
        return Err(input("categories are numbered from 1"));
    }
    if let Some(&bad) = assignments.iter().find(|&&a| a >= k) {
        return Err(input(alloc::format!("cluster {bad} out of range for k={k}")));
    }
    let categories = labels.iter().copied().max().unwrap_or(1);
    let mut counts = vec![vec![0usize; categories]; k];
    for (&a, &l) in assignments.iter().zip(labels) {
        counts[a][l - 1] += 1;
    }
    let (majority, errors): (Vec<usize>, Vec<usize>) = counts.iter().map(|c| cluster_error(c)).unzip();
    let total = errors.iter().sum();
    Ok(ErrorReport { counts, majority, errors, total })
}

/// One k-means run scored by clustering error.
pub fn clustering_trial(
    points: &[Vec<f64>],
    labels: &[usize],
    k: usize,
    seed: u64,
) -> Result<(ClusteringRun, ErrorReport), ClusterError> {
    if labels.len() != points.len() {
        return Err(input(alloc::format!("{} labels for {} points", labels.len(), points.len())));
    }
    let run = kmeans(points, k, seed, DEFAULT_MAX_ITERS)?;
    let report = clustering_error(&run.assignments, labels, k)?;
    Ok((run, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestOfN {
    pub best_error: usize,
    /// Seed of the first run reaching `best_error`.
    pub best_seed: u64,
    pub base_seed: u64,
    /// Total error of every run, in seed order.
    pub errors: Vec<usize>,
}

impl BestOfN {
    /// Reduces per-run errors (in seed order) to the minimum; ties go to the lowest seed.
    pub fn from_errors(base_seed: u64, errors: Vec<usize>) -> Result<Self, ClusterError> {
        let (idx, &best_error) = errors
            .iter()
            .enumerate()
            .min_by_key(|&(i, e)| (*e, i))
            .ok_or_else(|| input("best-of-n needs at least one run"))?;
        Ok(Self { best_error, best_seed: base_seed + idx as u64, base_seed, errors })
    }
}

/// Runs k-means with seeds `base_seed..base_seed + n` and keeps the smallest error.
pub fn best_of_n_clustering(
    points: &[Vec<f64>],
    labels: &[usize],
    k: usize,
    n: usize,
    base_seed: u64,
) -> Result<BestOfN, ClusterError> {
    if n == 0 {
        return Err(input("best-of-n needs at least one run"));
    }
    let errors = (0..n as u64)
        .map(|i| clustering_trial(points, labels, k, base_seed + i).map(|(_, r)| r.total))
        .collect::<Result<Vec<_>, _>>()?;
    BestOfN::from_errors(base_seed, errors)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcaProjection {
    pub coordinates: Vec<[f64; 2]>,
    /// Unit principal axes (a zero vector when the data has rank < 2).
    pub components: [Vec<f64>; 2],
    /// Variance along each axis.
    pub variances: [f64; 2],
    pub total_variance: f64,
    /// Set when all points coincide; coordinates are then all zero.
    pub degenerate: bool,
}

impl PcaProjection {
    /// Fraction of the total variance captured by the two axes.
    pub fn explained(&self) -> f64 {
        if self.total_variance > 0.0 {
            (self.variances[0] + self.variances[1]) / self.total_variance
        } else {
            0.0
        }
    }
}

const PCA_TOL: f64 = 1e-10;
const PCA_MAX_ITERS: usize = 100_000;

fn matvec(m: &[f64], d: usize, v: &[f64]) -> Vec<f64> {
    (0..d).map(|i| m[i * d..(i + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Dominant eigenpair of a symmetric PSD matrix, or `None` when it is (numerically) zero.
fn top_eigen(m: &[f64], d: usize, scale: f64) -> Option<(f64, Vec<f64>)> {
    // Start from the largest column: it lies in the range of `m`.
    let col = |j: usize| -> Vec<f64> { (0..d).map(|i| m[i * d + j]).collect() };
    let start = (0..d).map(col).max_by(|a, b| norm(a).total_cmp(&norm(b)))?;
    let n0 = norm(&start);
    if n0 <= PCA_TOL * scale.max(f64::MIN_POSITIVE) {
        return None;
    }
    let mut v: Vec<f64> = start.iter().map(|x| x / n0).collect();
    for _ in 0..PCA_MAX_ITERS {
        let w = matvec(m, d, &v);
        let nw = norm(&w);
        if nw == 0.0 {
            return None;
        }
        let next: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let delta = libm::sqrt(next.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum());
        v = next;
        if delta < PCA_TOL {
            break;
        }
    }
    let mv = matvec(m, d, &v);
    let lambda = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
    Some((lambda, v))
}

fn fix_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Mean-centers `points` and projects them onto the top two eigenvectors of
/// their covariance (power iteration with deflation).
pub fn pca_project_2d(points: &[Vec<f64>]) -> Result<PcaProjection, ClusterError> {
    let d = check_points(points)?;
    if points.len() < 2 || d < 2 {
        return Err(input("PCA needs at least two points of dimension two or more"));
    }
    let n = points.len() as f64;
    let mut mean = vec![0.0; d];
    for p in points {
        mean.iter_mut().zip(p).for_each(|(m, v)| *m += v / n);
    }
    let centered: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&mean).map(|(v, m)| v - m).collect()).collect();
    let mut cov = vec![0.0; d * d];
    for p in &centered {
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] += p[i] * p[j] / n;
            }
        }
    }
    let total_variance: f64 = (0..d).map(|i| cov[i * d + i]).sum();
    let zero = PcaProjection {
        coordinates: vec![[0.0, 0.0]; points.len()],
        components: [vec![0.0; d], vec![0.0; d]],
        variances: [0.0, 0.0],
        total_variance,
        degenerate: true,
    };
    if total_variance <= 0.0 {
        return Ok(zero);
    }
    let mut components = [vec![0.0; d], vec![0.0; d]];
    let mut variances = [0.0, 0.0];
    for slot in 0..2 {
        let Some((lambda, mut v)) = top_eigen(&cov, d, total_variance) else { break };
        fix_sign(&mut v);
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] -= lambda * v[i] * v[j];
            }
        }
        variances[slot] = lambda;
        components[slot] = v;
    }
    let coordinates = centered
        .iter()
        .map(|p| {
            let dot = |c: &[f64]| p.iter().zip(c).map(|(a, b)| a * b).sum::<f64>();
            [dot(&components[0]), dot(&components[1])]
        })
        .collect();
    Ok(PcaProjection { coordinates, components, variances, total_variance, degenerate: false })
}
