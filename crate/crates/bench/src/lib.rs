//! Fixed instances for the benchmarks, so every run times the same inputs.

use kcuckoo::{from_hypergraph, sample_regular, Gf2System, Hypergraph};

/// Seed shared by all benchmark instances.
pub const SEED: u64 = 0x5eed;

/// Node counts the benchmarks sweep over.
pub const SIZES: [usize; 3] = [1_000, 10_000, 100_000];

/// A random k-uniform hypergraph on `m` nodes at load `c`.
pub fn hypergraph(m: usize, k: u32, c: f64) -> Hypergraph {
    sample_regular(m, (c * m as f64).round() as usize, k, SEED).expect("valid instance")
}

/// The XORSAT system of [`hypergraph`].
pub fn system(m: usize, k: u32, c: f64) -> Gf2System {
    from_hypergraph(&hypergraph(m, k, c), SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_fixed() {
        assert_eq!(hypergraph(1000, 3, 0.9), hypergraph(1000, 3, 0.9));
        assert_eq!(hypergraph(1000, 3, 0.9).n(), 900);
        assert_eq!(system(1000, 3, 0.9).equations(), 900);
    }
}
