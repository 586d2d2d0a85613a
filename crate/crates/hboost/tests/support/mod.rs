//! Independent oracles used by the integration tests. Nothing here calls the
//! code under test.

#![allow(dead_code)]

use hboost_core::{CondensedMatrix, LinkageMethod, Rng};
use rand::{Rng as _, SeedableRng};

pub const WINE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/wine.csv");

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn unit_cube_points(rng: &mut Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

fn mean_point(points: &[Vec<f64>], leaves: &[usize]) -> Vec<f64> {
    let dim = points[0].len();
    let mut c = vec![0.0; dim];
    for &l in leaves {
        for (ci, x) in c.iter_mut().zip(&points[l]) {
            *ci += x;
        }
    }
    c.iter().map(|v| v / leaves.len() as f64).collect()
}

struct Cluster {
    id: usize,
    leaves: Vec<usize>,
    /// WPGMA leaf weights, 2^-depth.
    weights: Vec<f64>,
    /// WPGMC centre: midpoint of the two merged centres.
    median: Vec<f64>,
}

/// Inter-cluster dissimilarity recomputed from the raw points.
fn linkage_distance(points: &[Vec<f64>], a: &Cluster, b: &Cluster, method: LinkageMethod) -> f64 {
    let pairs = || {
        a.leaves
            .iter()
            .flat_map(|&i| b.leaves.iter().map(move |&j| (i, j)))
    };
    match method {
        LinkageMethod::Single => pairs()
            .map(|(i, j)| dist(&points[i], &points[j]))
            .fold(f64::INFINITY, f64::min),
        LinkageMethod::Complete => pairs()
            .map(|(i, j)| dist(&points[i], &points[j]))
            .fold(0.0, f64::max),
        LinkageMethod::Average => {
            pairs()
                .map(|(i, j)| dist(&points[i], &points[j]))
                .sum::<f64>()
                / (a.leaves.len() * b.leaves.len()) as f64
        }
        LinkageMethod::Weighted => {
            let mut s = 0.0;
            for (x, &i) in a.leaves.iter().enumerate() {
                for (y, &j) in b.leaves.iter().enumerate() {
                    s += a.weights[x] * b.weights[y] * dist(&points[i], &points[j]);
                }
            }
            s
        }
        LinkageMethod::Centroid => dist(
            &mean_point(points, &a.leaves),
            &mean_point(points, &b.leaves),
        ),
        LinkageMethod::Median => dist(&a.median, &b.median),
        LinkageMethod::Ward => {
            let (na, nb) = (a.leaves.len() as f64, b.leaves.len() as f64);
            (2.0 * na * nb / (na + nb)).sqrt()
                * dist(
                    &mean_point(points, &a.leaves),
                    &mean_point(points, &b.leaves),
                )
        }
    }
}

/// Merge `(left, right, height, size)` records from brute-force
/// agglomeration: every step scores all active pairs from scratch and takes
/// the smallest, ties going to the smallest `(min_id, max_id)`. `left` is
/// the cluster holding the smaller leaf.
pub fn naive_agglomerate(
    points: &[Vec<f64>],
    method: LinkageMethod,
) -> Vec<(usize, usize, f64, usize)> {
    let n = points.len();
    let mut active: Vec<Cluster> = (0..n)
        .map(|i| Cluster {
            id: i,
            leaves: vec![i],
            weights: vec![1.0],
            median: points[i].clone(),
        })
        .collect();
    let mut out = Vec::new();
    for t in 0..n - 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for x in 0..active.len() {
            for y in x + 1..active.len() {
                let d = linkage_distance(points, &active[x], &active[y], method);
                let (ia, ib) = (active[x].id, active[y].id);
                let key = (ia.min(ib), ia.max(ib));
                let better = match best {
                    None => true,
                    Some((bd, bk, _, _)) => d < bd || (d == bd && key < bk),
                };
                if better {
                    best = Some((d, key, x, y));
                }
            }
        }
        let (height, _, x, y) = best.unwrap();
        let b = active.remove(y);
        let a = active.remove(x);
        let (left, right) = if a.leaves.iter().min() < b.leaves.iter().min() {
            (&a, &b)
        } else {
            (&b, &a)
        };
        out.push((left.id, right.id, height, a.leaves.len() + b.leaves.len()));
        let mut leaves = a.leaves.clone();
        leaves.extend(&b.leaves);
        let weights = a
            .weights
            .iter()
            .chain(&b.weights)
            .map(|w| w / 2.0)
            .collect();
        let median = a
            .median
            .iter()
            .zip(&b.median)
            .map(|(p, q)| (p + q) / 2.0)
            .collect();
        active.push(Cluster {
            id: n + t,
            leaves,
            weights,
            median,
        });
    }
    out
}

/// Random merge list over `n` leaves. With `increasing`, heights strictly
/// increase; otherwise they are arbitrary positive values.
pub fn random_merges(rng: &mut Rng, n: usize, increasing: bool) -> Vec<(usize, usize, f64, usize)> {
    let mut active: Vec<(usize, usize)> = (0..n).map(|i| (i, 1)).collect();
    let mut height = 0.0;
    let mut out = Vec::new();
    for t in 0..n - 1 {
        let x = rng.random_range(0..active.len());
        let a = active.swap_remove(x);
        let y = rng.random_range(0..active.len());
        let b = active.swap_remove(y);
        let h = if increasing {
            height += 0.05 + rng.random::<f64>();
            height
        } else {
            0.1 + 5.0 * rng.random::<f64>()
        };
        out.push((a.0, b.0, h, a.1 + b.1));
        active.push((n + t, a.1 + b.1));
    }
    out
}

/// Cophenetic matrix by walking parent pointers to the lowest common
/// ancestor of every leaf pair.
pub fn lca_cophenetic(n: usize, merges: &[(usize, usize, f64, usize)]) -> CondensedMatrix {
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut height = vec![0.0; 2 * n - 1];
    for (t, &(a, b, h, _)) in merges.iter().enumerate() {
        parent[a] = n + t;
        parent[b] = n + t;
        height[n + t] = h;
    }
    let ancestors = |mut v: usize| {
        let mut path = vec![];
        while parent[v] != usize::MAX {
            v = parent[v];
            path.push(v);
        }
        path
    };
    CondensedMatrix::from_fn(n, |i, j| {
        let up_i = ancestors(i);
        let lca = ancestors(j).into_iter().find(|v| up_i.contains(v)).unwrap();
        height[lca]
    })
    .unwrap()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        (values[m / 2 - 1] + values[m / 2]) / 2.0
    }
}
