use std::collections::VecDeque;

use crate::automata::{SemiAutomaton, State, Word};

/// Shortest merging distances on the pair graph, computed backwards from the
/// diagonal. `dist[p][q] == usize::MAX` when `{p, q}` cannot be merged.
pub(crate) struct PairGraph {
    n: usize,
    dist: Vec<usize>,
}

impl PairGraph {
    pub(crate) fn new(sa: &SemiAutomaton) -> Self {
        let n = sa.num_states();
        let pred = sa.predecessors();
        let mut dist = vec![usize::MAX; n * n];
        let mut queue = VecDeque::new();
        for p in 0..n {
            dist[p * n + p] = 0;
            queue.push_back((p, p));
        }
        while let Some((p, q)) = queue.pop_front() {
            let d = dist[p * n + q];
            for pre in &pred {
                for &p0 in &pre[p] {
                    for &q0 in &pre[q] {
                        if p0 != q0 && dist[p0 * n + q0] == usize::MAX {
                            dist[p0 * n + q0] = d + 1;
                            dist[q0 * n + p0] = d + 1;
                            queue.push_back((p0.min(q0), p0.max(q0)));
                        }
                    }
                }
            }
        }
        Self { n, dist }
    }

    pub(crate) fn dist(&self, p: State, q: State) -> usize {
        self.dist[p * self.n + q]
    }

    pub(crate) fn all_mergeable(&self) -> bool {
        self.dist.iter().all(|&d| d != usize::MAX)
    }

    /// Lexicographically smallest among the shortest words merging `p` and `q`.
    pub(crate) fn merging_word(&self, sa: &SemiAutomaton, mut p: State, mut q: State) -> Option<Word> {
        let mut d = self.dist(p, q);
        if d == usize::MAX {
            return None;
        }
        let mut w = Word::empty();
        while d > 0 {
            let x = (0..sa.num_symbols())
                .find(|&x| self.dist(sa.step(p, x), sa.step(q, x)) == d - 1)
                .expect("distance labels are consistent");
            w.push(x);
            p = sa.step(p, x);
            q = sa.step(q, x);
            d -= 1;
        }
        Some(w)
    }
}

/// A synchronizing word of length at most `n³`, or `None` when the automaton
/// is not synchronizing.
///
/// Repeatedly merges the pair of the current image with the smallest merging
/// distance (ties by smallest states), always via the lexicographically
/// smallest shortest merging word.
pub fn greedy_sync(sa: &SemiAutomaton) -> Option<Word> {
    let graph = PairGraph::new(sa);
    if !graph.all_mergeable() {
        return None;
    }
    let n = sa.num_states();
    let mut current: Vec<State> = (0..n).collect();
    let mut w = Word::empty();
    while current.len() > 1 {
        let mut best = (usize::MAX, 0, 0);
        for (i, &p) in current.iter().enumerate() {
            for &q in &current[i + 1..] {
                let d = graph.dist(p, q);
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        let merge = graph
            .merging_word(sa, best.1, best.2)
            .expect("every pair is mergeable");
        let mut seen = vec![false; n];
        current = current
            .iter()
            .map(|&q| sa.apply_word(q, &merge))
            .filter(|&t| !std::mem::replace(&mut seen[t], true))
            .collect();
        current.sort_unstable();
        w.extend_with(&merge);
    }
    Some(w)
}
