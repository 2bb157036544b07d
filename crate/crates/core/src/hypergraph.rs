//! Random hypergraphs and the peeling process.
//!
//! Nodes are buckets and hyperedges are keys: a key with `k` choices is an
//! edge on `k` distinct nodes. Edges and per-node incidence lists are kept
//! in flat CSR arrays.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{derive, rng_from_seed, stream, Rng};
use crate::thresholds::DegreeSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    m: usize,
    edge_offsets: Vec<usize>,
    edge_nodes: Vec<u32>,
    inc_offsets: Vec<usize>,
    incidence: Vec<u32>,
}

impl Hypergraph {
    /// Builds a hypergraph on `m` nodes. Each edge is sorted; it must have at
    /// least two distinct nodes, all below `m`.
    pub fn new<E, I>(m: usize, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        if m > u32::MAX as usize {
            return Err(Error::domain(format!("node count {m} does not fit in u32")));
        }
        let mut edge_offsets = vec![0];
        let mut edge_nodes = Vec::new();
        for (i, edge) in edges.into_iter().enumerate() {
            let start = edge_nodes.len();
            edge_nodes.extend(edge);
            let slice = &mut edge_nodes[start..];
            slice.sort_unstable();
            if slice.len() < 2 {
                return Err(Error::domain(format!("edge {i} has fewer than two nodes")));
            }
            if slice.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("edge {i} repeats a node")));
            }
            if *slice.last().unwrap() as usize >= m {
                return Err(Error::domain(format!("edge {i} has a node outside 0..{m}")));
            }
            edge_offsets.push(edge_nodes.len());
        }
        Ok(Self::from_csr(m, edge_offsets, edge_nodes))
    }

    /// Assumes the edges are already valid.
    fn from_csr(m: usize, edge_offsets: Vec<usize>, edge_nodes: Vec<u32>) -> Self {
        let mut inc_offsets = vec![0usize; m + 1];
        for &v in &edge_nodes {
            inc_offsets[v as usize + 1] += 1;
        }
        for v in 0..m {
            inc_offsets[v + 1] += inc_offsets[v];
        }
        let mut fill = inc_offsets.clone();
        let mut incidence = vec![0u32; edge_nodes.len()];
        for e in 0..edge_offsets.len() - 1 {
            for &v in &edge_nodes[edge_offsets[e]..edge_offsets[e + 1]] {
                incidence[fill[v as usize]] = e as u32;
                fill[v as usize] += 1;
            }
        }
        Hypergraph {
            m,
            edge_offsets,
            edge_nodes,
            inc_offsets,
            incidence,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.edge_offsets.len() - 1
    }

    pub fn edge(&self, e: usize) -> &[u32] {
        &self.edge_nodes[self.edge_offsets[e]..self.edge_offsets[e + 1]]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.n()).map(move |e| self.edge(e))
    }

    /// Edge ids containing `v`, in increasing order.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incidence[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.inc_offsets[v + 1] - self.inc_offsets[v]
    }

    pub fn max_edge_size(&self) -> usize {
        self.edge_offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Sum of all edge sizes.
    pub fn total_size(&self) -> usize {
        self.edge_nodes.len()
    }

    /// The sub-hypergraph made of the listed edges, on the same node ids.
    pub fn restrict_to_edges(&self, edges: &[u32]) -> Hypergraph {
        let mut offsets = Vec::with_capacity(edges.len() + 1);
        offsets.push(0);
        let mut nodes = Vec::new();
        for &e in edges {
            nodes.extend_from_slice(self.edge(e as usize));
            offsets.push(nodes.len());
        }
        Self::from_csr(self.m, offsets, nodes)
    }

    /// Text form: a `m n` header, then one line of node ids per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.total_size() * 6);
        writeln!(out, "{} {}", self.m, self.n()).unwrap();
        for edge in self.edges() {
            let mut first = true;
            for v in edge {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::read_text(text.as_bytes())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (m, n) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(Error::parse(1, "missing 'm n' header"));
            };
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(i + 1, "header must be 'm n'"));
            }
            let m = fields[0]
                .parse::<usize>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let n = fields[1]
                .parse::<usize>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            break (m, n);
        };
        let mut edges = Vec::with_capacity(n);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if edges.len() == n {
                return Err(Error::parse(i + 1, format!("more than {n} edges")));
            }
            let edge = line
                .split_whitespace()
                .map(|f| f.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            edges.push(edge);
        }
        if edges.len() != n {
            return Err(Error::parse(
                n + 1,
                format!("expected {n} edges, found {}", edges.len()),
            ));
        }
        Self::new(m, edges)
    }
}

fn sample_subset(rng: &mut Rng, m: usize, k: usize, out: &mut Vec<u32>) {
    let start = out.len();
    out.extend(
        rand::seq::index::sample(rng, m, k)
            .into_iter()
            .map(|v| v as u32),
    );
    out[start..].sort_unstable();
}

/// `n` edges, each a uniformly random `k`-subset of `0..m`, drawn
/// independently (the same subset may appear more than once).
pub fn sample_regular(m: usize, n: usize, k: u32, seed: u64) -> Result<Hypergraph> {
    let k = k as usize;
    if k < 2 || k > m {
        return Err(Error::domain(format!("edge size {k} must lie in 2..={m}")));
    }
    let mut rng = rng_from_seed(derive(seed, stream::EDGES));
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut nodes = Vec::with_capacity(n * k);
    for _ in 0..n {
        sample_subset(&mut rng, m, k, &mut nodes);
        offsets.push(nodes.len());
    }
    Ok(Hypergraph::from_csr(m, offsets, nodes))
}

/// Like [`sample_regular`], but each edge first draws its size from `spec`.
///
/// Sizes come from a separate random stream, so a point mass at `k`
/// reproduces `sample_regular(m, n, k, seed)` exactly.
pub fn sample_mixed(m: usize, n: usize, spec: &DegreeSpec, seed: u64) -> Result<Hypergraph> {
    if spec.max_degree() as usize > m {
        return Err(Error::domain(format!(
            "degree {} exceeds node count {m}",
            spec.max_degree()
        )));
    }
    if let Some(k) = spec.as_point_mass() {
        return sample_regular(m, n, k, seed);
    }
    let cumulative: Vec<(usize, f64)> = spec
        .weights()
        .iter()
        .scan(0.0, |acc, (&k, &w)| {
            *acc += w;
            Some((k as usize, *acc))
        })
        .collect();
    let mut edge_rng = rng_from_seed(derive(seed, stream::EDGES));
    let mut degree_rng = rng_from_seed(derive(seed, stream::DEGREES));
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    let mut nodes = Vec::new();
    for _ in 0..n {
        let u: f64 = degree_rng.random();
        let k = cumulative
            .iter()
            .find(|&&(_, acc)| u < acc)
            .map_or(cumulative.last().unwrap().0, |&(k, _)| k);
        sample_subset(&mut edge_rng, m, k, &mut nodes);
        offsets.push(nodes.len());
    }
    Ok(Hypergraph::from_csr(m, offsets, nodes))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreStats {
    /// `m̂`
    pub core_nodes: usize,
    /// `n̂`
    pub core_edges: usize,
    /// `n̂ / m̂`, or 0 for an empty core.
    pub edge_density: f64,
    /// Synchronous peeling rounds until no deficient node remained.
    pub rounds: usize,
}

#[derive(Debug, Clone)]
pub struct Peeled {
    pub stats: CoreStats,
    /// The core on the original node ids.
    pub core: Hypergraph,
    /// Ids (in the input) of the edges that survived, increasing.
    pub kept_edges: Vec<u32>,
}

impl Peeled {
    pub fn is_empty(&self) -> bool {
        self.stats.core_edges == 0
    }
}

/// The ℓ-core: repeatedly delete nodes of degree below `ell` together with
/// their incident edges.
pub fn peel(g: &Hypergraph, ell: u32) -> Peeled {
    let ell = ell as usize;
    let mut degree: Vec<usize> = (0..g.m()).map(|v| g.degree(v)).collect();
    let mut edge_alive = vec![true; g.n()];
    let mut queued = vec![false; g.m()];
    let mut wave: Vec<u32> = Vec::new();
    for v in 0..g.m() {
        if degree[v] < ell {
            queued[v] = true;
            if degree[v] > 0 {
                wave.push(v as u32);
            }
        }
    }
    let mut rounds = 0;
    let mut next = Vec::new();
    while !wave.is_empty() {
        let mut deleted = false;
        for &v in &wave {
            for &e in g.incident(v as usize) {
                if !edge_alive[e as usize] {
                    continue;
                }
                edge_alive[e as usize] = false;
                deleted = true;
                for &u in g.edge(e as usize) {
                    let u = u as usize;
                    degree[u] -= 1;
                    if !queued[u] && degree[u] < ell {
                        queued[u] = true;
                        if degree[u] > 0 {
                            next.push(u as u32);
                        }
                    }
                }
            }
        }
        rounds += deleted as usize;
        std::mem::swap(&mut wave, &mut next);
        next.clear();
    }
    let kept_edges: Vec<u32> = (0..g.n() as u32)
        .filter(|&e| edge_alive[e as usize])
        .collect();
    let core_nodes = (0..g.m()).filter(|&v| !queued[v]).count();
    let core_edges = kept_edges.len();
    let edge_density = if core_nodes == 0 {
        0.0
    } else {
        core_edges as f64 / core_nodes as f64
    };
    Peeled {
        stats: CoreStats {
            core_nodes,
            core_edges,
            edge_density,
            rounds,
        },
        core: g.restrict_to_edges(&kept_edges),
        kept_edges,
    }
}

/// True when every node that touches an edge has degree at least `ell`.
pub fn min_degree_at_least(g: &Hypergraph, ell: u32) -> bool {
    (0..g.m()).all(|v| g.degree(v) == 0 || g.degree(v) >= ell as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sample() {
        let g = sample_regular(10, 0, 3, 5).unwrap();
        assert_eq!(g.n(), 0);
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn only_one_subset() {
        let g = sample_regular(3, 5, 3, 11).unwrap();
        assert_eq!(g.n(), 5);
        assert!(g.edges().all(|e| e == [0, 1, 2]));
    }

    #[test]
    fn oversized_edges_rejected() {
        assert!(sample_regular(2, 1, 3, 0).is_err());
        let spec = DegreeSpec::point_mass(6).unwrap();
        assert!(sample_mixed(5, 1, &spec, 0).is_err());
    }

    #[test]
    fn mixed_single_pair() {
        let spec = DegreeSpec::point_mass(2).unwrap();
        let g = sample_mixed(5, 1, &spec, 99).unwrap();
        assert_eq!(g.n(), 1);
        let e = g.edge(0);
        assert_eq!(e.len(), 2);
        assert_ne!(e[0], e[1]);
    }

    #[test]
    fn mixed_point_mass_matches_regular() {
        let spec = DegreeSpec::point_mass(4).unwrap();
        assert_eq!(
            sample_mixed(500, 300, &spec, 3).unwrap(),
            sample_regular(500, 300, 4, 3).unwrap()
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(
            sample_regular(1000, 900, 3, 42).unwrap(),
            sample_regular(1000, 900, 3, 42).unwrap()
        );
        assert_ne!(
            sample_regular(1000, 900, 3, 42).unwrap(),
            sample_regular(1000, 900, 3, 43).unwrap()
        );
    }

    #[test]
    fn incidence_is_inverse_of_edges() {
        let g = sample_regular(200, 400, 4, 8).unwrap();
        let mut rebuilt = vec![Vec::new(); g.m()];
        for (e, edge) in g.edges().enumerate() {
            for &v in edge {
                rebuilt[v as usize].push(e as u32);
            }
        }
        for (v, incident) in rebuilt.iter().enumerate() {
            assert_eq!(g.incident(v), incident.as_slice());
        }
    }

    #[test]
    fn invalid_edges_rejected() {
        assert!(Hypergraph::new(3, [vec![0u32]]).is_err());
        assert!(Hypergraph::new(3, [vec![0u32, 0]]).is_err());
        assert!(Hypergraph::new(3, [vec![0u32, 3]]).is_err());
        let g = Hypergraph::new(3, [vec![2u32, 0]]).unwrap();
        assert_eq!(g.edge(0), &[0, 2]);
    }

    #[test]
    fn single_edge_has_empty_two_core() {
        let g = Hypergraph::new(3, [vec![0u32, 1, 2]]).unwrap();
        let p = peel(&g, 2);
        assert!(p.is_empty());
        assert_eq!(p.stats.core_nodes, 0);
        assert_eq!(p.stats.edge_density, 0.0);
        assert_eq!(p.stats.rounds, 1);
    }

    #[test]
    fn doubled_edge_is_its_own_two_core() {
        let g = Hypergraph::new(3, [vec![0u32, 1, 2], vec![0, 1, 2]]).unwrap();
        let p = peel(&g, 2);
        assert_eq!(p.stats.core_edges, 2);
        assert_eq!(p.stats.core_nodes, 3);
        assert!((p.stats.edge_density - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.stats.rounds, 0);
        assert_eq!(p.core, g);
    }

    #[test]
    fn chain_peels_in_rounds() {
        // A path of 3-edges; every round strips the two end edges.
        let edges: Vec<Vec<u32>> = (0..5).map(|i| vec![2 * i, 2 * i + 1, 2 * i + 2]).collect();
        let g = Hypergraph::new(11, edges).unwrap();
        let p = peel(&g, 2);
        assert!(p.is_empty());
        assert_eq!(p.stats.rounds, 1);
    }

    #[test]
    fn text_format() {
        let g = Hypergraph::new(5, [vec![0u32, 1, 4], vec![2, 3]]).unwrap();
        assert_eq!(g.to_text(), "5 2\n0 1 4\n2 3\n");
        assert_eq!(Hypergraph::from_text(&g.to_text()).unwrap(), g);
        assert!(Hypergraph::from_text("5 3\n0 1\n").is_err());
        assert!(Hypergraph::from_text("5\n").is_err());
        assert!(matches!(
            Hypergraph::from_text("5 1\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
