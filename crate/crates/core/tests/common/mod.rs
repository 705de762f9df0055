//! Brute-force oracles shared by the integration tests. None of them call the
//! solvers they are used to check.

#![allow(dead_code)]

use rand::Rng;

/// All set partitions of `0..m`, as restricted growth strings.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let top = prefix.iter().copied().max().map_or(0, |b| b + 1);
        for b in 0..=top {
            prefix.push(b);
            grow(prefix, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), m, &mut out);
    out
}

/// Minimum over all partitions of `points` of the summed block cost, where a
/// block with raw diameter `d` costs `h(max(d, floor))` and is allowed only
/// if `d < eps`. Distances come from `dist`.
pub fn naive_content(
    points: &[usize],
    dist: &dyn Fn(usize, usize) -> f64,
    h: &dyn Fn(f64) -> f64,
    floor: f64,
    eps: Option<f64>,
) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for labels in set_partitions(points.len()) {
        let blocks = labels.iter().copied().max().unwrap() + 1;
        let mut total = 0.0;
        for b in 0..blocks {
            let members: Vec<usize> = (0..points.len()).filter(|&i| labels[i] == b).map(|i| points[i]).collect();
            let mut d: f64 = 0.0;
            for &x in &members {
                for &y in &members {
                    d = d.max(dist(x, y));
                }
            }
            if eps.is_some_and(|e| d >= e) {
                total = f64::INFINITY;
                break;
            }
            total += h(d.max(floor));
        }
        best = best.min(total);
    }
    best
}

/// Root-finding for `n r^α = 1` by bisection on `[0, 64]`.
pub fn bisect_dimension(n: f64, r: f64) -> f64 {
    let g = |a: f64| n * r.powf(a) - 1.0;
    let (mut lo, mut hi) = (0.0f64, 64.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Random points in the plane, as rows of a distance matrix computed here.
pub fn random_plane_matrix(rng: &mut impl Rng, m: usize) -> Vec<Vec<f64>> {
    let pts: Vec<(f64, f64)> = (0..m).map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))).collect();
    pts.iter()
        .map(|a| pts.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
        .collect()
}

/// Shortest-path closure of random positive edge weights: always a metric,
/// usually not Euclidean.
pub fn random_path_metric(rng: &mut impl Rng, m: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let w = rng.random_range(0.1..3.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Direct check of the metric axioms on a matrix, within a relative slack.
pub fn is_metric(d: &[Vec<f64>], slack: f64) -> bool {
    let m = d.len();
    for x in 0..m {
        if d[x][x] != 0.0 {
            return false;
        }
        for y in 0..m {
            if d[x][y] != d[y][x] || (x != y && !(d[x][y] > 0.0)) {
                return false;
            }
            for z in 0..m {
                let bound = d[x][y] + d[y][z];
                if d[x][z] > bound * (1.0 + slack) {
                    return false;
                }
            }
        }
    }
    true
}
