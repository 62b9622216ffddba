//! Exact discrete optimal transport for small point sets.
//!
//! Solved with the transportation simplex: a northwest-corner basis, dual
//! potentials on the basis tree, and cycle pivots until no reduced cost is
//! negative. Degenerate stalls switch to Bland's rule.

use thiserror::Error;

use crate::embeddings::squared_distance;

/// Largest side accepted by [`solve_exact`].
pub const DEFAULT_MAX_POINTS: usize = 512;

const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("transport problem has an empty side")]
    Empty,
    #[error("cost matrix is {rows}x{cols} but masses have lengths {sources} and {targets}")]
    Shape {
        rows: usize,
        cols: usize,
        sources: usize,
        targets: usize,
    },
    #[error("{side} masses sum to {sum}, expected 1")]
    MassMismatch { side: &'static str, sum: f64 },
    #[error("negative mass {0}")]
    NegativeMass(f64),
    #[error("negative cost {0}")]
    NegativeCost(f64),
    #[error("non-finite cost")]
    NonFinite,
    #[error("problem of size {rows}x{cols} exceeds cap {cap}")]
    TooLarge { rows: usize, cols: usize, cap: usize },
    #[error("point dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Balanced transport problem with unit total mass on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    rows: usize,
    cols: usize,
    cost: Vec<f64>,
    source: Vec<f64>,
    target: Vec<f64>,
}

impl TransportProblem {
    pub fn new(
        cost: Vec<Vec<f64>>,
        source: Vec<f64>,
        target: Vec<f64>,
    ) -> Result<Self, TransportError> {
        let rows = cost.len();
        let cols = cost.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(TransportError::Empty);
        }
        if cost.iter().any(|r| r.len() != cols) || source.len() != rows || target.len() != cols {
            return Err(TransportError::Shape {
                rows,
                cols,
                sources: source.len(),
                targets: target.len(),
            });
        }
        for &c in cost.iter().flatten() {
            if !c.is_finite() {
                return Err(TransportError::NonFinite);
            }
            if c < 0.0 {
                return Err(TransportError::NegativeCost(c));
            }
        }
        for (side, masses) in [("source", &source), ("target", &target)] {
            if let Some(&m) = masses.iter().find(|m| !(**m >= 0.0)) {
                return Err(TransportError::NegativeMass(m));
            }
            let sum: f64 = masses.iter().sum();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(TransportError::MassMismatch { side, sum });
            }
        }
        Ok(TransportProblem {
            rows,
            cols,
            cost: cost.into_iter().flatten().collect(),
            source,
            target,
        })
    }

    /// Uniform masses `1/n` and `1/m`.
    pub fn uniform(cost: Vec<Vec<f64>>) -> Result<Self, TransportError> {
        let rows = cost.len();
        let cols = cost.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(TransportError::Empty);
        }
        Self::new(
            cost,
            vec![1.0 / rows as f64; rows],
            vec![1.0 / cols as f64; cols],
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.cols + j]
    }

    pub fn source_mass(&self) -> &[f64] {
        &self.source
    }

    pub fn target_mass(&self) -> &[f64] {
        &self.target
    }
}

/// Optimal flow and its objective `Σ flow ⊙ cost`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub flow: Vec<Vec<f64>>,
    pub objective: f64,
}

/// Solves `p` exactly. Sides larger than [`DEFAULT_MAX_POINTS`] are rejected.
pub fn solve_exact(p: &TransportProblem) -> Result<TransportPlan, TransportError> {
    solve_exact_capped(p, DEFAULT_MAX_POINTS)
}

pub fn solve_exact_capped(
    p: &TransportProblem,
    cap: usize,
) -> Result<TransportPlan, TransportError> {
    if p.rows > cap || p.cols > cap {
        return Err(TransportError::TooLarge {
            rows: p.rows,
            cols: p.cols,
            cap,
        });
    }
    let mut s = Simplex::northwest(p);
    s.optimize(p);
    let mut flow = vec![vec![0.0; p.cols]; p.rows];
    let mut objective = 0.0;
    for (&(i, j), &x) in s.cells.iter().zip(&s.flow) {
        flow[i][j] += x;
        objective += x * p.cost(i, j);
    }
    Ok(TransportPlan { flow, objective })
}

struct Simplex {
    rows: usize,
    cols: usize,
    /// Basic cells; always `rows + cols - 1` of them, forming a spanning tree.
    cells: Vec<(usize, usize)>,
    flow: Vec<f64>,
    basic: Vec<bool>,
}

impl Simplex {
    fn northwest(p: &TransportProblem) -> Self {
        let (n, m) = (p.rows, p.cols);
        let mut supply = p.source.clone();
        let mut demand = p.target.clone();
        let mut cells = Vec::with_capacity(n + m - 1);
        let mut flow = Vec::with_capacity(n + m - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = supply[i].min(demand[j]).max(0.0);
            cells.push((i, j));
            flow.push(x);
            supply[i] -= x;
            demand[j] -= x;
            if i == n - 1 && j == m - 1 {
                break;
            }
            if j == m - 1 || (i < n - 1 && supply[i] <= demand[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        let mut basic = vec![false; n * m];
        for &(i, j) in &cells {
            basic[i * m + j] = true;
        }
        Simplex {
            rows: n,
            cols: m,
            cells,
            flow,
            basic,
        }
    }

    /// Tree adjacency over nodes `0..rows` (rows) and `rows..rows+cols` (cols);
    /// entries are basis cell indices.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.rows + self.cols];
        for (k, &(i, j)) in self.cells.iter().enumerate() {
            adj[i].push(k);
            adj[self.rows + j].push(k);
        }
        adj
    }

    fn potentials(&self, p: &TransportProblem, adj: &[Vec<usize>]) -> (Vec<f64>, Vec<f64>) {
        let mut u = vec![f64::NAN; self.rows];
        let mut v = vec![f64::NAN; self.cols];
        u[0] = 0.0;
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            for &k in &adj[node] {
                let (i, j) = self.cells[k];
                let c = p.cost(i, j);
                if node < self.rows {
                    if v[j].is_nan() {
                        v[j] = c - u[i];
                        stack.push(self.rows + j);
                    }
                } else if u[i].is_nan() {
                    u[i] = c - v[j];
                    stack.push(i);
                }
            }
        }
        (u, v)
    }

    /// Basis cells on the tree path from row `i` to column `j`, in order.
    fn path(&self, adj: &[Vec<usize>], i: usize, j: usize) -> Vec<usize> {
        let total = self.rows + self.cols;
        let goal = self.rows + j;
        let mut via = vec![usize::MAX; total];
        let mut seen = vec![false; total];
        seen[i] = true;
        let mut stack = vec![i];
        while let Some(node) = stack.pop() {
            if node == goal {
                break;
            }
            for &k in &adj[node] {
                let (r, c) = self.cells[k];
                let other = if node < self.rows { self.rows + c } else { r };
                if !seen[other] {
                    seen[other] = true;
                    via[other] = k;
                    stack.push(other);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = goal;
        while node != i {
            let k = via[node];
            path.push(k);
            let (r, c) = self.cells[k];
            node = if node < self.rows { self.rows + c } else { r };
        }
        path.reverse();
        path
    }

    fn optimize(&mut self, p: &TransportProblem) {
        let scale = p.cost.iter().fold(1.0f64, |a, &c| a.max(c));
        let eps = 1e-12 * scale;
        let max_iter = 50 * (self.rows + self.cols) * (self.rows + self.cols) + 1000;
        let mut degenerate_run = 0usize;
        for _ in 0..max_iter {
            let adj = self.adjacency();
            let (u, v) = self.potentials(p, &adj);
            let bland = degenerate_run > self.rows + self.cols;
            let mut entering = None;
            let mut best = -eps;
            'scan: for i in 0..self.rows {
                for j in 0..self.cols {
                    if self.basic[i * self.cols + j] {
                        continue;
                    }
                    let reduced = p.cost(i, j) - u[i] - v[j];
                    if reduced < best {
                        best = reduced;
                        entering = Some((i, j));
                        if bland {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((ei, ej)) = entering else { return };
            let path = self.path(&adj, ei, ej);
            // Signs alternate starting with a decrease on the first path cell.
            let mut theta = f64::INFINITY;
            let mut leaving = usize::MAX;
            for &k in path.iter().step_by(2) {
                let better = self.flow[k] < theta
                    || (bland && self.flow[k] == theta && self.cells[k] < self.cells[leaving]);
                if better {
                    theta = self.flow[k];
                    leaving = k;
                }
            }
            for (pos, &k) in path.iter().enumerate() {
                if pos % 2 == 0 {
                    self.flow[k] = (self.flow[k] - theta).max(0.0);
                } else {
                    self.flow[k] += theta;
                }
            }
            degenerate_run = if theta <= 0.0 { degenerate_run + 1 } else { 0 };
            let (li, lj) = self.cells[leaving];
            self.basic[li * self.cols + lj] = false;
            self.basic[ei * self.cols + ej] = true;
            self.cells[leaving] = (ei, ej);
            self.flow[leaving] = theta;
        }
        log::warn!(
            "transport simplex hit its iteration cap on a {}x{} problem",
            self.rows,
            self.cols
        );
    }
}

/// Euclidean ground cost between two point clouds.
pub fn euclidean_cost(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, TransportError> {
    if a.is_empty() || b.is_empty() {
        return Err(TransportError::Empty);
    }
    let d = a[0].len();
    if let Some(p) = a.iter().chain(b).find(|p| p.len() != d) {
        return Err(TransportError::DimensionMismatch(d, p.len()));
    }
    Ok(a.iter()
        .map(|x| b.iter().map(|y| squared_distance(x, y).sqrt()).collect())
        .collect())
}

/// Wasserstein-1 distance between uniformly weighted point sets.
pub fn wasserstein_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64, TransportError> {
    wasserstein_from_cost(euclidean_cost(a, b)?)
}

/// Optimal objective for a precomputed cost matrix with uniform masses.
pub fn wasserstein_from_cost(cost: Vec<Vec<f64>>) -> Result<f64, TransportError> {
    let p = TransportProblem::uniform(cost)?;
    Ok(solve_exact(&p)?.objective)
}
