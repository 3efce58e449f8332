//! Minimum vertex cover by branch and bound.

use super::OracleBudget;
use crate::error::{Error, Result};

/// Size of a minimum vertex cover and one such cover (sorted).
pub fn oracle_vertex_cover(n: usize, edges: &[(usize, usize)], budget: &OracleBudget) -> Result<(usize, Vec<usize>)> {
    if n > budget.max_cover_vertices {
        return Err(Error::capacity(format!("{n} vertices exceed the vertex cover budget of {}", budget.max_cover_vertices)));
    }
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        return Err(Error::domain(format!("invalid edge ({u},{v})")));
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut search = Search { adj, best: (0..n as u32).fold(0, |m, v| m | 1 << v), deadline: budget.deadline() };
    search.branch(0, 0)?;
    let cover: Vec<usize> = (0..n).filter(|&v| search.best >> v & 1 == 1).collect();
    Ok((cover.len(), cover))
}

struct Search {
    adj: Vec<u32>,
    best: u32,
    deadline: super::Deadline,
}

impl Search {
    /// `removed` vertices are decided; `taken` is the partial cover.
    fn branch(&mut self, removed: u32, taken: u32) -> Result<()> {
        self.deadline.check()?;
        let alive = |v: usize| removed >> v & 1 == 0;
        let degree = |v: usize| (self.adj[v] & !removed).count_ones();
        let n = self.adj.len();
        let Some(v) = (0..n).filter(|&v| alive(v)).max_by_key(|&v| (degree(v), std::cmp::Reverse(v))) else {
            return self.record(taken);
        };
        if degree(v) == 0 {
            return self.record(taken);
        }
        if taken.count_ones() + self.matching_bound(removed) >= self.best.count_ones() {
            return Ok(());
        }
        let nbrs = self.adj[v] & !removed;
        self.branch(removed | 1 << v, taken | 1 << v)?;
        self.branch(removed | 1 << v | nbrs, taken | nbrs)
    }

    fn record(&mut self, taken: u32) -> Result<()> {
        if taken.count_ones() < self.best.count_ones() {
            self.best = taken;
        }
        Ok(())
    }

    /// Size of a greedy maximal matching among undecided vertices.
    fn matching_bound(&self, removed: u32) -> u32 {
        let mut used = removed;
        let mut size = 0;
        for u in 0..self.adj.len() {
            if used >> u & 1 == 1 {
                continue;
            }
            let free = self.adj[u] & !used;
            if free != 0 {
                used |= 1 << u | 1 << free.trailing_zeros();
                size += 1;
            }
        }
        size
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: usize, edges: &[(usize, usize)]) -> usize {
        oracle_vertex_cover(n, edges, &OracleBudget::default()).unwrap().0
    }

    #[test]
    fn small_graphs() {
        assert_eq!(solve(2, &[(0, 1)]), 1);
        assert_eq!(solve(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 3);
        assert_eq!(solve(3, &[]), 0);
        let petersen = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        assert_eq!(solve(10, &petersen), 6);
    }

    #[test]
    fn cover_is_valid() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)];
        let (k, cover) = oracle_vertex_cover(6, &edges, &OracleBudget::default()).unwrap();
        assert_eq!(k, cover.len());
        assert!(edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v)));
        assert_eq!(k, 3);
    }
}
