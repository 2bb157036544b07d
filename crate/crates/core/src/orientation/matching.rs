//! Exact orientation by maximum bipartite matching (Hopcroft–Karp).
//!
//! Left side: edges. Right side: `ℓ` slots per node, slot `v·ℓ + s`. An
//! orientation with in-degree at most ℓ exists iff every edge is matched.

use std::collections::VecDeque;

use super::{Orientation, Status};
use crate::hypergraph::Hypergraph;

const FREE: u32 = u32::MAX;
const UNREACHED: u32 = u32::MAX;

struct Matcher<'a> {
    g: &'a Hypergraph,
    ell: usize,
    match_left: Vec<u32>,
    match_right: Vec<u32>,
    dist: Vec<u32>,
    cursor: Vec<u32>,
}

impl<'a> Matcher<'a> {
    fn new(g: &'a Hypergraph, ell: usize) -> Self {
        Matcher {
            g,
            ell,
            match_left: vec![FREE; g.n()],
            match_right: vec![FREE; g.m() * ell],
            dist: vec![UNREACHED; g.n()],
            cursor: vec![0; g.n()],
        }
    }

    fn arity(&self, e: usize) -> u32 {
        (self.g.edge(e).len() * self.ell) as u32
    }

    fn slot(&self, e: usize, i: u32) -> usize {
        let i = i as usize;
        self.g.edge(e)[i / self.ell] as usize * self.ell + i % self.ell
    }

    /// Layers the left vertices by alternating-path distance from the free
    /// ones; true if some free slot is reachable.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for e in 0..self.g.n() {
            if self.match_left[e] == FREE {
                self.dist[e] = 0;
                queue.push_back(e);
            } else {
                self.dist[e] = UNREACHED;
            }
        }
        let mut found = false;
        while let Some(e) = queue.pop_front() {
            for i in 0..self.arity(e) {
                let w = self.match_right[self.slot(e, i)];
                if w == FREE {
                    found = true;
                } else if self.dist[w as usize] == UNREACHED {
                    self.dist[w as usize] = self.dist[e] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        found
    }

    /// Iterative search for an augmenting path from the free edge `root`
    /// along the BFS layers.
    fn augment(&mut self, root: usize, stack: &mut Vec<usize>) -> bool {
        stack.clear();
        stack.push(root);
        while let Some(&e) = stack.last() {
            if self.cursor[e] < self.arity(e) {
                let i = self.cursor[e];
                self.cursor[e] += 1;
                let r = self.slot(e, i);
                let w = self.match_right[r];
                if w == FREE {
                    // Every edge on the stack takes the slot it last tried.
                    for &x in stack.iter() {
                        let r = self.slot(x, self.cursor[x] - 1);
                        self.match_left[x] = r as u32;
                        self.match_right[r] = x as u32;
                    }
                    return true;
                }
                if self.dist[w as usize] == self.dist[e] + 1 {
                    stack.push(w as usize);
                }
            } else {
                self.dist[e] = UNREACHED;
                stack.pop();
            }
        }
        false
    }

    fn run(&mut self) -> usize {
        let mut size = 0;
        let mut stack = Vec::new();
        while self.bfs() {
            self.cursor.iter_mut().for_each(|c| *c = 0);
            for e in 0..self.g.n() {
                if self.match_left[e] == FREE && self.augment(e, &mut stack) {
                    size += 1;
                }
            }
        }
        size
    }
}

/// Decides exactly whether `g` has an orientation with in-degree at most
/// `ell`, returning one if so. On failure the assignment is a maximum
/// partial placement.
pub fn matching_orient(g: &Hypergraph, ell: u32) -> Orientation {
    let ell = ell as usize;
    let mut matcher = Matcher::new(g, ell);
    let size = if ell == 0 { 0 } else { matcher.run() };
    let assignment = matcher
        .match_left
        .iter()
        .map(|&r| (r != FREE).then(|| (r as usize / ell) as u32))
        .collect();
    let status = if size == g.n() {
        Status::Success
    } else {
        Status::Infeasible { max_placed: size }
    };
    Orientation { assignment, status }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::sample_regular;
    use crate::orientation::verify;

    fn graph(m: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(m, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    /// Tries every assignment of edges to their nodes.
    fn brute_force(g: &Hypergraph, ell: u32) -> bool {
        fn go(g: &Hypergraph, ell: u32, e: usize, load: &mut [u32]) -> bool {
            if e == g.n() {
                return true;
            }
            for &v in g.edge(e) {
                if load[v as usize] < ell {
                    load[v as usize] += 1;
                    if go(g, ell, e + 1, load) {
                        return true;
                    }
                    load[v as usize] -= 1;
                }
            }
            false
        }
        go(g, ell, 0, &mut vec![0; g.m()])
    }

    #[test]
    fn pair_twice() {
        let g = graph(2, &[&[0, 1], &[0, 1]]);
        let o = matching_orient(&g, 1);
        assert!(verify(&g, &o, 1));
        let mut targets: Vec<u32> = o.assignment.iter().map(|a| a.unwrap()).collect();
        targets.sort();
        assert_eq!(targets, [0, 1]);
    }

    #[test]
    fn hall_violation() {
        let g = graph(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        let o = matching_orient(&g, 1);
        assert_eq!(o.status, Status::Infeasible { max_placed: 2 });
        assert_eq!(o.placed(), 2);
    }

    #[test]
    fn capacity_two() {
        let g = graph(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        assert!(brute_force(&g, 2));
        let o = matching_orient(&g, 2);
        assert!(verify(&g, &o, 2));
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..200u64 {
            let m = 4 + (seed % 5) as usize;
            let k = 2 + (seed % 2) as u32;
            let ell = 1 + (seed % 2) as u32;
            let n = 2 + (seed % 7) as usize * ell as usize;
            let g = sample_regular(m, n, k, seed).unwrap();
            let o = matching_orient(&g, ell);
            assert_eq!(o.is_success(), brute_force(&g, ell), "seed={seed}");
            if o.is_success() {
                assert!(verify(&g, &o, ell));
            }
        }
    }

    #[test]
    fn long_augmenting_paths() {
        // A path of pairs where each new key pushes all earlier ones over.
        let m = 5000;
        let edges: Vec<Vec<u32>> = (0..m as u32 - 1).map(|i| vec![i, i + 1]).collect();
        let g = Hypergraph::new(m, edges).unwrap();
        let o = matching_orient(&g, 1);
        assert!(verify(&g, &o, 1));
    }
}
