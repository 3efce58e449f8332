//! Set partitions of bag positions as restricted-growth label vectors;
//! label 0 marks an excluded position.

use crate::graph::UnionFind;

/// Relabels nonzero labels to `1, 2, …` in order of first appearance.
pub fn canonicalize(labels: &mut [u8]) {
    let mut map = [0u8; 256];
    let mut next = 1u8;
    for l in labels.iter_mut() {
        if *l != 0 {
            if map[*l as usize] == 0 {
                map[*l as usize] = next;
                next += 1;
            }
            *l = map[*l as usize];
        }
    }
}

/// Puts the parts labelled `a` and `b` together.
pub fn merge(labels: &mut [u8], a: u8, b: u8) {
    for l in labels.iter_mut() {
        if *l == b {
            *l = a;
        }
    }
    canonicalize(labels);
}

pub fn fresh_label(labels: &[u8]) -> u8 {
    labels.iter().copied().max().unwrap_or(0) + 1
}

/// Finest common coarsening of two partitions with the same excluded
/// positions; `None` when the excluded positions differ.
pub fn join(a: &[u8], b: &[u8]) -> Option<Vec<u8>> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| (*x == 0) != (*y == 0)) {
        return None;
    }
    let k = a.len();
    let mut uf = UnionFind::new(k);
    for labels in [a, b] {
        for i in 0..k {
            for j in i + 1..k {
                if labels[i] != 0 && labels[i] == labels[j] {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut out: Vec<u8> = (0..k).map(|i| if a[i] == 0 { 0 } else { uf.find(i) as u8 + 1 }).collect();
    canonicalize(&mut out);
    Some(out)
}
