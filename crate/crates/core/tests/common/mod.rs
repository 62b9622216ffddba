//! Independent oracles and fixture helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use amreval::penman::{read_corpus, to_triples, AmrEntry, AmrGraph, Triple};

pub fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

pub fn load(path: &str) -> Vec<AmrEntry> {
    let text = std::fs::read_to_string(fixture(path)).unwrap();
    read_corpus(&text).unwrap()
}

/// Solves the square system by Gaussian elimination with partial pivoting;
/// `None` when singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        combinations(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Transport LP optimum by enumerating every basis of `n + m - 1` cells and
/// keeping the feasible ones (the LP optimum is attained at a vertex).
pub fn transport_lp_oracle(cost: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let k = n + m - 1;
    // Equality rows: all row sums and the first m - 1 column sums.
    let mut rhs: Vec<f64> = a.to_vec();
    rhs.extend_from_slice(&b[..m - 1]);
    let mut best = f64::INFINITY;
    combinations(cells.len(), k, 0, &mut Vec::new(), &mut |basis| {
        let mut mat = vec![vec![0.0; k]; k];
        for (col, &ci) in basis.iter().enumerate() {
            let (i, j) = cells[ci];
            mat[i][col] = 1.0;
            if j < m - 1 {
                mat[n + j][col] = 1.0;
            }
        }
        if let Some(x) = solve_linear(mat, rhs.clone()) {
            if x.iter().all(|&v| v >= -1e-12) {
                let obj: f64 = basis
                    .iter()
                    .zip(&x)
                    .map(|(&ci, &v)| cost[cells[ci].0][cells[ci].1] * v)
                    .sum();
                best = best.min(obj);
            }
        }
    });
    best
}

fn rename_triple(t: &Triple, map: &dyn Fn(&str) -> String) -> Triple {
    match t {
        Triple::Instance { var, concept } => Triple::Instance {
            var: map(var),
            concept: concept.clone(),
        },
        Triple::Attribute { role, var, value } => Triple::Attribute {
            role: role.clone(),
            var: map(var),
            value: value.clone(),
        },
        Triple::Relation { role, source, target } => Triple::Relation {
            role: role.clone(),
            source: map(source),
            target: map(target),
        },
    }
}

/// Matched triples under an explicit candidate→reference variable map.
pub fn matched_under(cand: &AmrGraph, reference: &AmrGraph, mapping: &[Option<usize>]) -> usize {
    let mut bag: HashMap<Triple, usize> = HashMap::new();
    for t in to_triples(reference) {
        *bag.entry(t).or_insert(0) += 1;
    }
    let rename = |v: &str| -> String {
        let i = cand.index_of(v).unwrap();
        match mapping[i] {
            Some(j) => reference.var(j).to_string(),
            None => format!("\u{0}unmapped{i}"),
        }
    };
    let mut matched = 0;
    for t in to_triples(cand) {
        let t = rename_triple(&t, &rename);
        if let Some(c) = bag.get_mut(&t) {
            if *c > 0 {
                *c -= 1;
                matched += 1;
            }
        }
    }
    matched
}

/// Best Smatch F1 over every injective partial variable mapping.
pub fn exhaustive_smatch(cand: &AmrGraph, reference: &AmrGraph) -> f64 {
    fn rec(
        i: usize,
        cand: &AmrGraph,
        reference: &AmrGraph,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        best: &mut usize,
    ) {
        if i == cand.node_count() {
            *best = (*best).max(matched_under(cand, reference, map));
            return;
        }
        map[i] = None;
        rec(i + 1, cand, reference, map, used, best);
        for j in 0..reference.node_count() {
            if !used[j] {
                used[j] = true;
                map[i] = Some(j);
                rec(i + 1, cand, reference, map, used, best);
                used[j] = false;
            }
        }
        map[i] = None;
    }
    let mut best = 0;
    rec(
        0,
        cand,
        reference,
        &mut vec![None; cand.node_count()],
        &mut vec![false; reference.node_count()],
        &mut best,
    );
    let c = to_triples(cand).len() as f64;
    let r = to_triples(reference).len() as f64;
    let m = best as f64;
    if m == 0.0 {
        0.0
    } else {
        2.0 * m / (c + r)
    }
}
