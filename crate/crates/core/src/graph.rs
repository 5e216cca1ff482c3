//! Weighted undirected graphs and their Laplacian spectral quantities.
//!
//! A [`WeightedGraph`] is validated on construction (symmetric, nonnegative,
//! zero diagonal, connected), so every graph held by the rest of the crate is
//! known-good. The Laplacian `L = D - A` of a connected graph is symmetric
//! positive semi-definite with a simple zero eigenvalue; its second-smallest
//! eigenvalue (the algebraic connectivity) sets the consensus decay rate.

use crate::error::{Error, Result};

/// Positive weights below this are rejected as rounding noise rather than
/// treated as edges, so connectivity cannot hinge on a 1e-16 entry.
pub const MIN_EDGE_WEIGHT: f64 = 1e-15;

/// Symmetric nonnegative adjacency with zero diagonal, connected.
///
/// Stored dense row-major; the experiments this crate targets have at most a
/// few hundred agents.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// Validates `rows` as an adjacency matrix and builds the graph.
    ///
    /// Rejects non-square input, asymmetry, negative (or sub-threshold
    /// positive) weights, nonzero diagonal entries, and disconnected support.
    /// Errors carry the first violating 1-based index pair.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "graph needs at least 2 agents, got {n}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "adjacency row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let w = rows[i][j];
                if !w.is_finite() || (w != 0.0 && w < MIN_EDGE_WEIGHT) {
                    return Err(Error::NegativeWeight {
                        i: i + 1,
                        j: j + 1,
                        value: w,
                    });
                }
                if i == j && w != 0.0 {
                    return Err(Error::NonzeroDiagonal { i: i + 1, value: w });
                }
                if j > i && rows[j][i] != w {
                    return Err(Error::AsymmetricWeights {
                        i: i + 1,
                        j: j + 1,
                        a: w,
                        b: rows[j][i],
                    });
                }
                weights[i * n + j] = w;
            }
        }
        if let Some(unreached) = first_unreached(n, &weights) {
            return Err(Error::DisconnectedGraph {
                unreached: unreached + 1,
            });
        }
        Ok(WeightedGraph { n, weights })
    }

    pub fn agent_count(&self) -> usize {
        self.n
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Builds `L = D - A` with row degrees on the diagonal.
    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            let mut degree = 0.0;
            for j in 0..n {
                let w = self.weight(i, j);
                degree += w;
                entries[i * n + j] = -w;
            }
            entries[i * n + i] = degree;
        }
        LaplacianMatrix { n, entries }
    }
}

/// Breadth-first reachability from agent 1 over strictly positive entries.
///
/// Takes raw adjacency rows so it can be asked about matrices that would not
/// pass [`WeightedGraph::from_rows`]. Entries are treated as edges when
/// positive; callers wanting the noise-threshold semantics should validate
/// through `from_rows`.
pub fn is_connected(rows: &[Vec<f64>]) -> bool {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return false;
    }
    let mut flat = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            flat[i * n + j] = rows[i][j];
        }
    }
    first_unreached(n, &flat).is_none()
}

/// Returns the first agent (0-based) unreachable from agent 0, if any.
fn first_unreached(n: usize, weights: &[f64]) -> Option<usize> {
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !seen[j] && weights[i * n + j] > 0.0 {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().position(|&s| !s)
}

/// Dense symmetric graph Laplacian, produced by [`WeightedGraph::laplacian`].
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl LaplacianMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Weighted degree of agent `i`, i.e. the diagonal entry `L_ii`.
    pub fn degree(&self, i: usize) -> f64 {
        self.entry(i, i)
    }

    pub fn min_degree(&self) -> f64 {
        (0..self.n)
            .map(|i| self.degree(i))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_degree(&self) -> f64 {
        (0..self.n).map(|i| self.degree(i)).fold(0.0, f64::max)
    }

    /// Quadratic form `z' L z`.
    pub fn quadratic_form(&self, z: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let mut dot = 0.0;
            for j in 0..self.n {
                dot += row[j] * z[j];
            }
            acc += z[i] * dot;
        }
        acc
    }

    /// Writes `-L z` into `out`; the consensus control stack.
    pub fn apply_negated(&self, z: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let row = self.row(i);
            let mut dot = 0.0;
            for j in 0..self.n {
                dot += row[j] * z[j];
            }
            out[i] = -dot;
        }
    }

    /// Algebraic connectivity: the second-smallest eigenvalue.
    ///
    /// Strictly positive for Laplacians of connected graphs, which is the
    /// only kind this type can hold.
    pub fn fiedler_value(&self) -> Result<f64> {
        let eig = jacobi_eigenvalues(self.n, &self.entries)?;
        let rho2 = eig[1];
        if rho2 <= 0.0 {
            return Err(Error::NumericalFailure(format!(
                "second-smallest Laplacian eigenvalue is not positive: {rho2}"
            )));
        }
        Ok(rho2)
    }

    /// Spectral norm; equals the largest eigenvalue since `L` is symmetric
    /// positive semi-definite.
    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = jacobi_eigenvalues(self.n, &self.entries)?;
        Ok(eig[self.n - 1])
    }
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending.
///
/// Plane rotations annihilate one off-diagonal element at a time; the
/// off-diagonal mass shrinks quadratically per sweep, so a few dozen sweeps
/// reach machine precision for the small matrices used here. Follows the
/// classic formulation in Numerical Recipes section 11.1.
fn jacobi_eigenvalues(n: usize, matrix: &[f64]) -> Result<Vec<f64>> {
    let mut a = matrix.to_vec();
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let scale: f64 = matrix.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].abs())
            .sum();
        if off <= scale * 1e-15 {
            d.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
            return Ok(d);
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() <= scale * 1e-300 {
                    1.0
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                let mut rotate = |i: usize, j: usize, k: usize, l: usize, a: &mut [f64]| {
                    let g = a[i * n + j];
                    let h = a[k * n + l];
                    a[i * n + j] = g - s * (h + g * tau);
                    a[k * n + l] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(j, p, j, q, &mut a);
                }
                for j in (p + 1)..q {
                    rotate(p, j, j, q, &mut a);
                }
                for j in (q + 1)..n {
                    rotate(p, j, q, j, &mut a);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::NumericalFailure(format!(
        "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Adjacency recovered from the four-agent benchmark Laplacian.
    pub(crate) fn four_agent_rows() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 3.4, 0.0, 0.0],
            vec![3.4, 0.0, 2.1, 4.3],
            vec![0.0, 2.1, 0.0, 1.1],
            vec![0.0, 4.3, 1.1, 0.0],
        ]
    }

    fn pair_rows() -> Vec<Vec<f64>> {
        vec![vec![0.0, 1.0], vec![1.0, 0.0]]
    }

    fn path3_rows() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ]
    }

    #[test]
    fn four_agent_graph_is_valid() {
        let g = WeightedGraph::from_rows(&four_agent_rows()).unwrap();
        assert_eq!(g.agent_count(), 4);
    }

    #[test]
    fn single_edge_is_smallest_connected_graph() {
        let g = WeightedGraph::from_rows(&pair_rows()).unwrap();
        assert_eq!(g.agent_count(), 2);
    }

    #[test]
    fn isolated_agent_is_rejected() {
        let rows = vec![
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ];
        assert_eq!(
            WeightedGraph::from_rows(&rows),
            Err(Error::DisconnectedGraph { unreached: 3 })
        );
    }

    #[test]
    fn asymmetry_names_first_pair() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert_eq!(
            WeightedGraph::from_rows(&rows),
            Err(Error::AsymmetricWeights {
                i: 1,
                j: 2,
                a: 1.0,
                b: 2.0
            })
        );
    }

    #[test]
    fn negative_and_noise_weights_are_rejected() {
        let rows = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(matches!(
            WeightedGraph::from_rows(&rows),
            Err(Error::NegativeWeight { i: 1, j: 2, .. })
        ));
        let noisy = vec![vec![0.0, 1e-16], vec![1e-16, 0.0]];
        assert!(matches!(
            WeightedGraph::from_rows(&noisy),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn nonzero_diagonal_is_rejected() {
        let rows = vec![vec![0.5, 1.0], vec![1.0, 0.0]];
        assert_eq!(
            WeightedGraph::from_rows(&rows),
            Err(Error::NonzeroDiagonal { i: 1, value: 0.5 })
        );
    }

    #[test]
    fn four_agent_laplacian_diagonal() {
        let lap = WeightedGraph::from_rows(&four_agent_rows())
            .unwrap()
            .laplacian();
        let degrees: Vec<f64> = (0..4).map(|i| lap.degree(i)).collect();
        assert_eq!(degrees, vec![3.4, 9.8, 3.2, 5.4]);
        assert_eq!(lap.entry(0, 1), -3.4);
        assert_eq!(lap.entry(1, 3), -4.3);
    }

    #[test]
    fn single_edge_laplacian() {
        let lap = WeightedGraph::from_rows(&pair_rows()).unwrap().laplacian();
        assert_eq!(
            (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| lap.entry(i, j))
                .collect::<Vec<_>>(),
            vec![1.0, -1.0, -1.0, 1.0]
        );
    }

    #[test]
    fn path_laplacian_matches_textbook_form() {
        let lap = WeightedGraph::from_rows(&path3_rows()).unwrap().laplacian();
        let expected = [[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(lap.entry(i, j), expected[i][j]);
            }
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let lap = WeightedGraph::from_rows(&four_agent_rows())
            .unwrap()
            .laplacian();
        for i in 0..4 {
            let sum: f64 = lap.row(i).iter().sum();
            assert!(sum.abs() < 1e-12, "row {i} sums to {sum}");
        }
    }

    #[test]
    fn connectivity_probe() {
        assert!(is_connected(&four_agent_rows()));
        let complete3 = vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        assert!(is_connected(&complete3));
        // Two disjoint edges on four agents.
        let disjoint = vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        assert!(!is_connected(&disjoint));
    }

    #[test]
    fn known_spectra() {
        let pair = WeightedGraph::from_rows(&pair_rows()).unwrap().laplacian();
        assert_relative_eq!(pair.fiedler_value().unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(pair.spectral_norm().unwrap(), 2.0, max_relative = 1e-12);

        // Unit-weight path on 3 agents has eigenvalues 0, 1, 3.
        let path = WeightedGraph::from_rows(&path3_rows()).unwrap().laplacian();
        assert_relative_eq!(path.fiedler_value().unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(path.spectral_norm().unwrap(), 3.0, max_relative = 1e-12);
    }

    // Regression constants frozen from the characteristic-polynomial oracle
    // (see the oracle crate), cross-checked against an independent solver.
    pub(crate) const FOUR_AGENT_RHO2: f64 = 3.102898054233241;
    pub(crate) const FOUR_AGENT_NORM: f64 = 13.466876669075827;

    #[test]
    fn four_agent_spectral_constants() {
        let lap = WeightedGraph::from_rows(&four_agent_rows())
            .unwrap()
            .laplacian();
        assert_relative_eq!(
            lap.fiedler_value().unwrap(),
            FOUR_AGENT_RHO2,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            lap.spectral_norm().unwrap(),
            FOUR_AGENT_NORM,
            max_relative = 1e-10
        );
    }

    #[test]
    fn lemma_quadratic_bounds_hold_on_random_vectors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let lap = WeightedGraph::from_rows(&four_agent_rows())
            .unwrap()
            .laplacian();
        let rho2 = lap.fiedler_value().unwrap();
        for _ in 0..1000 {
            let z: Vec<f64> = (0..4).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let zlz = lap.quadratic_form(&z);
            assert!(zlz >= -1e-10, "Laplacian form went negative: {zlz}");
            let mean = z.iter().sum::<f64>() / 4.0;
            let kn: f64 = z.iter().map(|v| (v - mean) * (v - mean)).sum();
            assert!(
                rho2 * kn <= zlz + 1e-9 * zlz.abs().max(1.0),
                "rho2 * z'Kz = {} exceeds z'Lz = {}",
                rho2 * kn,
                zlz
            );
        }
        // The form vanishes on constant vectors.
        let ones = vec![3.25; 4];
        assert!(lap.quadratic_form(&ones).abs() < 1e-12);
    }
}
