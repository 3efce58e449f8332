//! Nice tree decompositions: leaf, introduce, forget and binary join nodes,
//! with a single-vertex root bag.

use serde::{Deserialize, Serialize};

use super::{TdViolation, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NiceKind {
    Leaf(VertexId),
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted.
    pub bag: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first; the root is the last node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(self.nodes.iter().map(|n| n.bag.clone()).collect(), edges)
    }

    /// Describes the first node whose kind does not match its bags.
    pub fn check_kinds(&self) -> Option<String> {
        for (i, node) in self.nodes.iter().enumerate() {
            let child = |k: usize| &self.nodes[node.children[k]].bag;
            if node.children.iter().any(|&c| c >= i) {
                return Some(format!("node {i} is stored before a child"));
            }
            let ok = match node.kind {
                NiceKind::Leaf(v) => node.children.is_empty() && node.bag == vec![v],
                NiceKind::Introduce(v) => {
                    node.children.len() == 1 && {
                        let mut b = child(0).clone();
                        b.push(v);
                        b.sort_unstable();
                        !child(0).contains(&v) && b == node.bag
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && {
                        let mut b = node.bag.clone();
                        b.push(v);
                        b.sort_unstable();
                        !node.bag.contains(&v) && b == *child(0)
                    }
                }
                NiceKind::Join => node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag,
            };
            if !ok {
                return Some(format!("node {i} does not satisfy its {:?} kind", node.kind));
            }
        }
        match self.nodes.last() {
            Some(root) if root.bag.len() == 1 => None,
            _ => Some("root bag must hold exactly one vertex".into()),
        }
    }

    /// Full validation against `graph`: tree decomposition conditions plus
    /// node kinds.
    pub fn validate(&self, graph: &Graph) -> Vec<String> {
        let mut out: Vec<String> =
            self.as_tree_decomposition().validate(graph).iter().map(|v| format!("{v:?}")).collect();
        out.extend(self.check_kinds());
        out
    }

    /// For each graph pair, the first introduce node (children-first order)
    /// whose introduced vertex is one endpoint and whose bag holds the other.
    pub fn assign_pairs(&self, pairs: &[(VertexId, VertexId)], n: usize) -> Result<Vec<usize>> {
        let mut first: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            if let NiceKind::Introduce(v) = node.kind {
                for &u in &node.bag {
                    if u != v {
                        first[v].push((u, i));
                    }
                }
            }
        }
        pairs
            .iter()
            .map(|&(u, v)| {
                let a = first[u].iter().find(|x| x.0 == v).map(|x| x.1);
                let b = first[v].iter().find(|x| x.0 == u).map(|x| x.1);
                a.into_iter().chain(b).min().ok_or_else(|| Error::domain(format!("pair ({u},{v}) shares no bag")))
            })
            .collect()
    }
}

/// Converts a valid decomposition of an `n`-vertex graph into nice form
/// rooted at a bag holding `root` (the smallest vertex of the first bag when
/// `None`). Width is preserved.
pub fn to_nice(td: &TreeDecomposition, n: usize, root: Option<VertexId>) -> Result<NiceDecomposition> {
    let structural: Vec<TdViolation> = td
        .validate_pairs(n, std::iter::empty())
        .into_iter()
        .filter(|v| !matches!(v, TdViolation::EdgeUncovered(..)))
        .collect();
    if !structural.is_empty() {
        return Err(Error::domain(format!("invalid tree decomposition: {structural:?}")));
    }
    if n == 0 {
        return Err(Error::domain("cannot build a nice decomposition of an empty graph"));
    }
    if td.bags.iter().any(Vec::is_empty) {
        return Err(Error::domain("decomposition has an empty bag"));
    }
    let r = match root {
        Some(r) if r < n => r,
        Some(r) => return Err(Error::domain(format!("root {r} outside the graph"))),
        None => td.bags.iter().flat_map(|b| b.first()).copied().next().unwrap_or(0),
    };
    let top = td.bags.iter().position(|b| b.contains(&r)).expect("every vertex is covered");
    let adj = td.adjacency();
    let mut builder = Builder { nodes: Vec::new() };
    // iterative post-order over the bag tree
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut order = Vec::new();
    let mut stack = vec![top];
    parent[top] = top;
    while let Some(t) = stack.pop() {
        order.push(t);
        for &c in &adj[t] {
            if parent[c] == usize::MAX {
                parent[c] = t;
                stack.push(c);
            }
        }
    }
    let mut built = vec![usize::MAX; td.bags.len()];
    for &t in order.iter().rev() {
        let bag = &td.bags[t];
        let mut arms = Vec::new();
        for &c in &adj[t] {
            if c != t && parent[c] == t {
                arms.push(builder.morph(built[c], bag));
            }
        }
        let node = if arms.is_empty() {
            builder.leaf_up_to(bag)
        } else {
            let mut acc = arms[0];
            for &arm in &arms[1..] {
                acc = builder.push(NiceKind::Join, bag.clone(), vec![acc, arm]);
            }
            acc
        };
        built[t] = node;
    }
    builder.morph(built[top], &[r]);
    Ok(NiceDecomposition { nodes: builder.nodes })
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NiceKind, bag: Vec<VertexId>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// A leaf on the smallest vertex followed by introductions of the rest.
    fn leaf_up_to(&mut self, bag: &[VertexId]) -> usize {
        let mut cur = self.push(NiceKind::Leaf(bag[0]), vec![bag[0]], vec![]);
        let mut have = vec![bag[0]];
        for &v in &bag[1..] {
            have.push(v);
            have.sort_unstable();
            cur = self.push(NiceKind::Introduce(v), have.clone(), vec![cur]);
        }
        cur
    }

    /// Forgets then introduces vertices one at a time until the bag is `target`.
    fn morph(&mut self, mut cur: usize, target: &[VertexId]) -> usize {
        let mut bag = self.nodes[cur].bag.clone();
        let gone: Vec<VertexId> = bag.iter().copied().filter(|v| !target.contains(v)).collect();
        for v in gone {
            bag.retain(|&x| x != v);
            cur = self.push(NiceKind::Forget(v), bag.clone(), vec![cur]);
        }
        let new: Vec<VertexId> = target.iter().copied().filter(|v| !bag.contains(v)).collect();
        for v in new {
            bag.push(v);
            bag.sort_unstable();
            cur = self.push(NiceKind::Introduce(v), bag.clone(), vec![cur]);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::treewidth::heuristic_decompose;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, int(1)))).unwrap()
    }

    #[test]
    fn single_bag_becomes_a_chain() {
        let g = graph(2, &[(0, 1)]);
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let nice = to_nice(&td, 2, Some(0)).unwrap();
        assert!(nice.validate(&g).is_empty());
        assert_eq!(nice.width(), 1);
        assert_eq!(nice.nodes.last().unwrap().bag, vec![0]);
    }

    #[test]
    fn path_keeps_width_one() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = to_nice(&td, 3, None).unwrap();
        assert!(nice.validate(&g).is_empty());
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn star_has_join_arms() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition::new(vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]], vec![(0, 1), (0, 2), (0, 3)]);
        let nice = to_nice(&td, 4, Some(0)).unwrap();
        assert!(nice.validate(&g).is_empty());
        assert_eq!(nice.width(), 1);
        assert_eq!(nice.nodes.iter().filter(|n| n.kind == NiceKind::Join).count(), 2);
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![]);
        assert!(to_nice(&td, 2, None).is_err());
    }

    #[test]
    fn every_edge_gets_an_introduce_node() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]);
        let nice = to_nice(&heuristic_decompose(&g), 5, Some(2)).unwrap();
        assert!(nice.validate(&g).is_empty());
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let at = nice.assign_pairs(&pairs, 5).unwrap();
        for (&(u, v), &i) in pairs.iter().zip(&at) {
            let node = &nice.nodes[i];
            assert!(matches!(node.kind, NiceKind::Introduce(x) if x == u || x == v));
            assert!(node.bag.contains(&u) && node.bag.contains(&v));
        }
    }
}
