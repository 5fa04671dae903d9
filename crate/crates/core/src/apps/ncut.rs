//! Normalized-cut clustering by the matrix quadratic transform (FPC): the
//! auxiliary update is closed form and the assignment update is a per-point
//! argmax.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::apps::network::GraphInstance;
use crate::error::{FpError, Result};
use crate::inner::{enumerate_assignments, row_argmax};
use crate::problem::{ConstraintSet, Curvature, FPProblem, ProblemKind, RatioSpec, Sense};
use crate::rng::seeded;
use crate::solver::{Recorder, SolverConfig, SolverTrace, Status, Transform};

/// Redraws allowed for an emptied cluster before giving up.
const EMPTY_CLUSTER_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct FpcSolution {
    pub labels: Vec<usize>,
    pub ncut: f64,
    pub trace: SolverTrace,
}

/// `sum_k cut(V_k) / vol(V_k)`, or `None` when a cluster is empty.
pub fn ncut_value(graph: &GraphInstance, labels: &[usize]) -> Option<f64> {
    let n = graph.nodes();
    let k = graph.clusters;
    let mut vol = vec![0.0; k];
    let mut within = vec![0.0; k];
    for i in 0..n {
        let c = labels[i];
        for j in 0..n {
            let w = graph.w[(i, j)];
            vol[c] += w;
            if labels[j] == c {
                within[c] += w;
            }
        }
    }
    if vol.iter().any(|v| *v <= 0.0) {
        return None;
    }
    Some(vol.iter().zip(&within).map(|(v, s)| (v - s) / v).sum())
}

fn check_labels(graph: &GraphInstance, labels: &[usize]) -> Result<()> {
    if labels.len() != graph.nodes() {
        return Err(FpError::ShapeMismatch(format!("{} labels for {} nodes", labels.len(), graph.nodes())));
    }
    if labels.iter().any(|&c| c >= graph.clusters) {
        return Err(FpError::InvalidProblem(format!("labels must lie in 0..{}", graph.clusters)));
    }
    let mut seen = vec![false; graph.clusters];
    labels.iter().for_each(|&c| seen[c] = true);
    if seen.contains(&false) {
        return Err(FpError::InvalidProblem("initial assignment leaves a cluster empty".into()));
    }
    Ok(())
}

/// Symmetric square root of a positive semidefinite matrix.
pub fn psd_sqrt_real(w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(w.clone());
    let scale = w.norm().max(1.0);
    if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
        if min < -1e-10 * scale {
            return Err(FpError::InvalidProblem(format!("similarity matrix is not positive semidefinite (min eigenvalue {min:e})")));
        }
    }
    let root = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&root) * eig.eigenvectors.transpose())
}

fn indicator(labels: &[usize], k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(labels.len(), k, |i, c| if labels[i] == c { 1.0 } else { 0.0 })
}

/// Normalized cut as a sum-of-ratios minimization over one-hot assignments:
/// ratio `k` is `x_k^T (D - W) x_k / d^T x_k`.
pub fn ncut_problem(graph: &GraphInstance) -> Result<FPProblem> {
    graph.validate()?;
    let n = graph.nodes();
    let d = DVector::from_vec(graph.degrees());
    let laplacian = DMatrix::from_diagonal(&d) - &graph.w;
    let ratios = (0..graph.clusters)
        .map(|c| {
            let (l, lg, dn, dg) = (laplacian.clone(), laplacian.clone(), d.clone(), d.clone());
            let col = move |x: &[f64]| DVector::from_column_slice(&x[c * n..(c + 1) * n]);
            let spread = move |v: DVector<f64>, len: usize| {
                let mut g = vec![0.0; len];
                g[c * n..(c + 1) * n].copy_from_slice(v.as_slice());
                g
            };
            RatioSpec::new(
                move |x| {
                    let v = col(x);
                    v.dot(&(&l * &v))
                },
                move |x| spread(&lg * col(x) * 2.0, x.len()),
                move |x| dn.dot(&col(x)),
                move |x| spread(dg.clone(), x.len()),
                Curvature::ConvexConcave,
            )
        })
        .collect();
    FPProblem::new(ProblemKind::SumMin, ratios, ConstraintSet::DiscreteAssignment { n, k: graph.clusters })
}

/// Globally optimal labels by enumerating all `K^N` labellings.
pub fn ncut_oracle(graph: &GraphInstance) -> Result<(Vec<usize>, f64)> {
    graph.validate()?;
    let f = |labels: &[usize]| ncut_value(graph, labels);
    let (labels, value, _) = enumerate_assignments(graph.nodes(), graph.clusters, &f, Sense::Minimize)?;
    Ok((labels, value))
}

/// `mu_k = 2 W^{1/2} y_k - (y_k^T y_k) d` stacked as columns.
fn scores(root: &DMatrix<f64>, d: &DVector<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    let mut mu = root * y * 2.0;
    for c in 0..y.ncols() {
        let yy = y.column(c).norm_squared();
        let mut col = mu.column_mut(c);
        col -= d * yy;
    }
    mu
}

/// `sum_k 2 y_k^T W^{1/2} x_k - (y_k^T y_k) d^T x_k`.
fn surrogate(root: &DMatrix<f64>, d: &DVector<f64>, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (0..x.ncols())
        .map(|c| {
            let xc = x.column(c);
            2.0 * y.column(c).dot(&(root * xc)) - y.column(c).norm_squared() * d.dot(&xc)
        })
        .sum()
}

fn has_empty(labels: &[usize], k: usize) -> Vec<usize> {
    let mut count = vec![0usize; k];
    labels.iter().for_each(|&c| count[c] += 1);
    (0..k).filter(|&c| count[c] == 0).collect()
}

/// FPC from `init`. Stops when the assignment repeats. An emptied cluster has
/// its auxiliary redrawn as a random unit vector (seeded by `config.seed`);
/// the redrawn step is kept only if every cluster is populated and the ncut
/// does not increase, otherwise the run ends with [`Status::EmptyCluster`].
pub fn solve_ncut_fpc(graph: &GraphInstance, init: &[usize], config: &SolverConfig) -> Result<FpcSolution> {
    config.validate()?;
    graph.validate()?;
    check_labels(graph, init)?;
    let k = graph.clusters;
    let root = psd_sqrt_real(&graph.w)?;
    let d = DVector::from_vec(graph.degrees());
    let mut rng = seeded(config.seed);
    let mut labels = init.to_vec();
    let mut value = ncut_value(graph, &labels).expect("checked nonempty");
    let mut rec = Recorder::new(Sense::Minimize, Transform::Quadratic);
    rec.push(value, value, 0.0);
    let mut status = Status::MaxIters;
    for _ in 0..config.max_iters {
        let x = indicator(&labels, k);
        let mut y = &root * &x;
        for c in 0..k {
            let vol = d.dot(&x.column(c));
            y.column_mut(c).scale_mut(1.0 / vol);
        }
        let mut next = row_argmax(&scores(&root, &d, &y));
        let mut redrawn = false;
        let mut tries = 0;
        loop {
            let empty = has_empty(&next, k);
            if empty.is_empty() {
                break;
            }
            if tries == EMPTY_CLUSTER_RETRIES {
                break;
            }
            tries += 1;
            redrawn = true;
            for &c in &empty {
                let v = DVector::from_fn(graph.nodes(), |_, _| rng.sample::<f64, _>(StandardNormal));
                y.set_column(c, &(&v / v.norm()));
            }
            next = row_argmax(&scores(&root, &d, &y));
        }
        let Some(nv) = ncut_value(graph, &next) else {
            status = Status::EmptyCluster;
            break;
        };
        if redrawn && nv > value {
            status = Status::EmptyCluster;
            break;
        }
        if next == labels {
            status = Status::Converged;
            break;
        }
        let s = surrogate(&root, &d, &indicator(&next, k), &y);
        rec.push(nv, k as f64 - s, y.norm());
        labels = next;
        value = nv;
    }
    Ok(FpcSolution { labels, ncut: value, trace: rec.finish(status) })
}

/// Two planted blocks of sizes `n / 2` and `n - n / 2`:
/// `W = 0.85 [same block] + 0.05 + 0.1 exp(-|v_i - v_j|^2)` for Gaussian points
/// `v_i`. Every term is positive semidefinite, the diagonal is 1, within-block
/// similarities lie in `[0.9, 1]` and cross-block ones in `[0.05, 0.15]`.
pub fn planted_graph(n: usize, seed: u64) -> Result<GraphInstance> {
    if n < 2 {
        return Err(FpError::InvalidProblem("a planted graph needs at least two nodes".into()));
    }
    let mut rng = seeded(seed);
    let v: Vec<(f64, f64)> =
        (0..n).map(|_| (rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))).collect();
    let block = |i: usize| usize::from(i >= n / 2);
    let w = DMatrix::from_fn(n, n, |i, j| {
        let kernel = (-((v[i].0 - v[j].0).powi(2) + (v[i].1 - v[j].1).powi(2))).exp();
        let same = if block(i) == block(j) { 0.85 } else { 0.0 };
        (same + 0.05 + 0.1 * kernel).min(1.0)
    });
    let mut g = GraphInstance::new(w, 2)?;
    g.seed = seed;
    Ok(g)
}

/// Two tight pairs `{0, 1}` and `{2, 3}` joined by weak 0.1 edges, `K = 2`.
pub fn four_node_graph() -> GraphInstance {
    let w = DMatrix::from_row_slice(4, 4, &[1.0, 0.9, 0.1, 0.1, 0.9, 1.0, 0.1, 0.1, 0.1, 0.1, 1.0, 0.9, 0.1, 0.1, 0.9, 1.0]);
    GraphInstance::new(w, 2).expect("valid four-node graph")
}

/// Uniformly random labelling with every cluster populated.
pub fn random_labels<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        if has_empty(&labels, k).is_empty() {
            return labels;
        }
    }
}

/// Whether two labellings describe the same partition up to relabelling.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
