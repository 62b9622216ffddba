use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{MetricId, MetricScore};
use crate::embeddings::EmbeddingStore;
use crate::penman::{AmrGraph, TOP_ROLE};

const GAIN_EPSILON: f64 = 1e-12;

/// How instance triples score against each other.
pub enum ConceptMatch<'a> {
    /// 1 on equal concepts, else 0.
    Exact,
    /// 1 on equal concepts, else cosine when at least `threshold`.
    Graded {
        embeddings: &'a EmbeddingStore,
        threshold: f64,
    },
}

impl ConceptMatch<'_> {
    fn weight(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 1.0;
        }
        match self {
            ConceptMatch::Exact => 0.0,
            ConceptMatch::Graded {
                embeddings,
                threshold,
            } => match embeddings.cosine_similarity(a, b) {
                Some(c) if c >= *threshold => c,
                _ => 0.0,
            },
        }
    }
}

/// Injective partial map from candidate variables to reference variables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarAlignment {
    /// `mapping[i]` is the reference node aligned to candidate node `i`.
    pub mapping: Vec<Option<usize>>,
    /// The same mapping by variable name, in candidate order.
    pub pairs: Vec<(String, String)>,
    /// Matched (possibly graded) triple mass under this mapping.
    pub matched: f64,
}

/// Relation triples of the candidate grouped by (source, target, role).
struct RelGroup {
    source: usize,
    target: usize,
    role: u32,
    count: usize,
}

/// Precomputed match weights for one candidate/reference pair.
struct Problem {
    n_cand: usize,
    n_ref: usize,
    /// Instance + attribute mass gained by mapping candidate i to reference j.
    unary: Vec<f64>,
    groups: Vec<RelGroup>,
    ref_rel: HashMap<(usize, usize, u32), usize>,
    incident: Vec<Vec<usize>>,
    /// Candidate/reference relation pairs sharing a role, as
    /// (cand source, cand target, ref source, ref target).
    anchors: Vec<(usize, usize, usize, usize)>,
}

impl Problem {
    fn new(cand: &AmrGraph, refg: &AmrGraph, concepts: &ConceptMatch<'_>) -> Self {
        let (n_cand, n_ref) = (cand.node_count(), refg.node_count());
        let attr_bag = |g: &AmrGraph| {
            let mut per_node: Vec<HashMap<(String, String), usize>> = vec![HashMap::new(); g.node_count()];
            for a in g.attributes() {
                *per_node[a.source]
                    .entry((a.role.clone(), a.value.clone()))
                    .or_insert(0) += 1;
            }
            *per_node[g.root()]
                .entry((TOP_ROLE.to_string(), g.concept(g.root()).to_string()))
                .or_insert(0) += 1;
            per_node
        };
        let cand_attrs = attr_bag(cand);
        let ref_attrs = attr_bag(refg);
        let mut unary = vec![0.0; n_cand * n_ref];
        for i in 0..n_cand {
            for j in 0..n_ref {
                let mut w = concepts.weight(cand.concept(i), refg.concept(j));
                for (key, &c) in &cand_attrs[i] {
                    if let Some(&r) = ref_attrs[j].get(key) {
                        w += c.min(r) as f64;
                    }
                }
                unary[i * n_ref + j] = w;
            }
        }

        let mut roles: HashMap<&str, u32> = HashMap::new();
        let mut ref_rel = HashMap::new();
        for e in refg.edges() {
            let r = role_id(e.role.as_str(), &mut roles);
            *ref_rel.entry((e.source, e.target, r)).or_insert(0) += 1;
        }
        let mut grouped: HashMap<(usize, usize, u32), usize> = HashMap::new();
        let mut order = Vec::new();
        for e in cand.edges() {
            let r = role_id(e.role.as_str(), &mut roles);
            let key = (e.source, e.target, r);
            let slot = grouped.entry(key).or_insert(0);
            if *slot == 0 {
                order.push(key);
            }
            *slot += 1;
        }
        let groups: Vec<RelGroup> = order
            .into_iter()
            .map(|k| RelGroup {
                source: k.0,
                target: k.1,
                role: k.2,
                count: grouped[&k],
            })
            .collect();
        let mut ref_edges: Vec<(usize, usize, u32)> = ref_rel.keys().copied().collect();
        ref_edges.sort_unstable();
        let mut anchors = Vec::new();
        for g in &groups {
            for &(rs, rt, r) in &ref_edges {
                if r == g.role && (g.source == g.target) == (rs == rt) {
                    anchors.push((g.source, g.target, rs, rt));
                }
            }
        }
        let mut incident = vec![Vec::new(); n_cand];
        for (gi, g) in groups.iter().enumerate() {
            incident[g.source].push(gi);
            if g.target != g.source {
                incident[g.target].push(gi);
            }
        }
        Problem {
            n_cand,
            n_ref,
            unary,
            groups,
            ref_rel,
            incident,
            anchors,
        }
    }

    fn unary(&self, i: usize, j: Option<usize>) -> f64 {
        j.map_or(0.0, |j| self.unary[i * self.n_ref + j])
    }

    fn group_score(&self, g: &RelGroup, map: &[Option<usize>]) -> f64 {
        match (map[g.source], map[g.target]) {
            (Some(s), Some(t)) => g
                .count
                .min(self.ref_rel.get(&(s, t, g.role)).copied().unwrap_or(0)) as f64,
            _ => 0.0,
        }
    }

    fn total(&self, map: &[Option<usize>]) -> f64 {
        let u: f64 = (0..self.n_cand).map(|i| self.unary(i, map[i])).sum();
        let r: f64 = self.groups.iter().map(|g| self.group_score(g, map)).sum();
        u + r
    }

    /// Score change from giving the listed candidate nodes new targets.
    fn delta(
        &self,
        map: &mut [Option<usize>],
        changes: &[(usize, Option<usize>)],
        stamp: &mut [usize],
        epoch: usize,
    ) -> f64 {
        let mut touched = Vec::new();
        for &(i, _) in changes {
            for &gi in &self.incident[i] {
                if stamp[gi] != epoch {
                    stamp[gi] = epoch;
                    touched.push(gi);
                }
            }
        }
        let before: f64 = touched
            .iter()
            .map(|&gi| self.group_score(&self.groups[gi], map))
            .sum::<f64>()
            + changes.iter().map(|&(i, _)| self.unary(i, map[i])).sum::<f64>();
        let saved: Vec<Option<usize>> = changes.iter().map(|&(i, _)| map[i]).collect();
        for &(i, j) in changes {
            map[i] = j;
        }
        let after: f64 = touched
            .iter()
            .map(|&gi| self.group_score(&self.groups[gi], map))
            .sum::<f64>()
            + changes.iter().map(|&(i, _)| self.unary(i, map[i])).sum::<f64>();
        for (&(i, _), old) in changes.iter().zip(saved) {
            map[i] = old;
        }
        after - before
    }

    /// Greedy start: each candidate node in order takes the free reference
    /// node with the largest unary weight (lowest index on ties); leftovers
    /// are paired with free reference nodes in index order.
    fn greedy_start(&self) -> Vec<Option<usize>> {
        let mut map = vec![None; self.n_cand];
        let mut used = vec![false; self.n_ref];
        for (i, slot) in map.iter_mut().enumerate() {
            let mut best: Option<(usize, f64)> = None;
            for (j, &taken) in used.iter().enumerate() {
                let w = self.unary(i, Some(j));
                if !taken && w > 0.0 && best.is_none_or(|(_, bw)| w > bw) {
                    best = Some((j, w));
                }
            }
            if let Some((j, _)) = best {
                *slot = Some(j);
                used[j] = true;
            }
        }
        let mut free = (0..self.n_ref).filter(|&j| !used[j]);
        for slot in map.iter_mut().filter(|s| s.is_none()) {
            *slot = free.next();
        }
        map
    }

    /// Random start that first pins one randomly chosen role-compatible
    /// relation pair, so matches needing two simultaneous moves are reachable.
    fn random_start(&self, rng: &mut ChaCha8Rng) -> Vec<Option<usize>> {
        let mut map = vec![None; self.n_cand];
        let mut used = vec![false; self.n_ref];
        if let Some(&(cs, ct, rs, rt)) = self.anchors.choose(rng) {
            map[cs] = Some(rs);
            map[ct] = Some(rt);
            used[rs] = true;
            used[rt] = true;
        }
        let mut free: Vec<usize> = (0..self.n_ref).filter(|&j| !used[j]).collect();
        free.shuffle(rng);
        let mut cand_order: Vec<usize> = (0..self.n_cand).filter(|&i| map[i].is_none()).collect();
        cand_order.shuffle(rng);
        for (&i, j) in cand_order.iter().zip(free) {
            map[i] = Some(j);
        }
        map
    }

    /// Steepest-ascent hill climbing over remap and swap moves.
    fn climb(&self, mut map: Vec<Option<usize>>) -> (Vec<Option<usize>>, f64) {
        let mut owner = vec![None; self.n_ref];
        for (i, j) in map.iter().enumerate() {
            if let Some(j) = j {
                owner[*j] = Some(i);
            }
        }
        let mut stamp = vec![0usize; self.groups.len()];
        let mut epoch = 0usize;
        loop {
            let mut best_gain = GAIN_EPSILON;
            let mut best_move: Option<[(usize, Option<usize>); 2]> = None;
            for i in 0..self.n_cand {
                for j in 0..self.n_ref {
                    if map[i] == Some(j) {
                        continue;
                    }
                    let changes: [(usize, Option<usize>); 2] = match owner[j] {
                        None => [(i, Some(j)), (i, Some(j))],
                        Some(k) => {
                            if k < i && map[i].is_some() {
                                // evaluated from k's side already
                                continue;
                            }
                            [(i, Some(j)), (k, map[i])]
                        }
                    };
                    let moves: &[(usize, Option<usize>)] = if owner[j].is_none() {
                        &changes[..1]
                    } else {
                        &changes[..]
                    };
                    epoch += 1;
                    let gain = self.delta(&mut map, moves, &mut stamp, epoch);
                    if gain > best_gain {
                        best_gain = gain;
                        best_move = Some(changes);
                    }
                }
            }
            let Some(changes) = best_move else { break };
            let moves: &[(usize, Option<usize>)] = if changes[0] == changes[1] {
                &changes[..1]
            } else {
                &changes[..]
            };
            for &(i, _) in moves {
                if let Some(j) = map[i] {
                    owner[j] = None;
                }
            }
            for &(i, j) in moves {
                map[i] = j;
            }
            for &(i, j) in moves {
                if let Some(j) = j {
                    owner[j] = Some(i);
                }
            }
        }
        let score = self.total(&map);
        (map, score)
    }

    fn solve(&self, restarts: usize, seed: u64) -> (Vec<Option<usize>>, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = self.climb(self.greedy_start());
        for _ in 1..restarts.max(1) {
            let candidate = self.climb(self.random_start(&mut rng));
            if candidate.1 > best.1 + GAIN_EPSILON {
                best = candidate;
            }
        }
        best
    }
}

fn role_id<'a>(r: &'a str, roles: &mut HashMap<&'a str, u32>) -> u32 {
    let next = roles.len() as u32;
    *roles.entry(r).or_insert(next)
}

fn triple_count(g: &AmrGraph) -> f64 {
    (g.node_count() + g.edges().len() + g.attributes().len() + 1) as f64
}

/// Smatch-style F1 under the best variable alignment found by hill climbing
/// with `restarts` starts. `concepts` decides instance triple credit.
pub fn smatch_with(
    candidate: &AmrGraph,
    reference: &AmrGraph,
    concepts: &ConceptMatch<'_>,
    restarts: usize,
    seed: u64,
) -> (f64, f64, f64, VarAlignment) {
    let problem = Problem::new(candidate, reference, concepts);
    let (mapping, matched) = problem.solve(restarts, seed);
    let pairs = mapping
        .iter()
        .enumerate()
        .filter_map(|(i, j)| j.map(|j| (candidate.var(i).to_string(), reference.var(j).to_string())))
        .collect();
    (
        matched,
        triple_count(candidate),
        triple_count(reference),
        VarAlignment {
            mapping,
            pairs,
            matched,
        },
    )
}

/// Smatch F1 and the alignment that achieved it.
pub fn smatch(
    candidate: &AmrGraph,
    reference: &AmrGraph,
    restarts: usize,
    seed: u64,
) -> (MetricScore, VarAlignment) {
    let (m, c, r, alignment) = smatch_with(candidate, reference, &ConceptMatch::Exact, restarts, seed);
    (MetricScore::from_triples(MetricId::Smatch, m, c, r), alignment)
}

/// Smatch with graded concept credit from embedding cosine similarity.
pub fn s2match(
    candidate: &AmrGraph,
    reference: &AmrGraph,
    embeddings: &EmbeddingStore,
    threshold: f64,
    restarts: usize,
    seed: u64,
) -> MetricScore {
    let concepts = ConceptMatch::Graded {
        embeddings,
        threshold,
    };
    let (m, c, r, _) = smatch_with(candidate, reference, &concepts, restarts, seed);
    MetricScore::from_triples(MetricId::S2match, m, c, r)
}
