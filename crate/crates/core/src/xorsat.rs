//! Random XORSAT systems over GF(2).
//!
//! Each hyperedge `{j1, …, jk}` becomes the equation
//! `x_{j1} + … + x_{jk} = b` with a random right-hand side `b`. Peeling the
//! hypergraph is exactly the elimination of variables that occur once, so
//! the 2-core decides satisfiability.

use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::rng::{derive, rng_from_seed, stream};

/// `n` equations over `m` variables, rows packed 64 variables per word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2System {
    m: usize,
    words: usize,
    rows: Vec<u64>,
    rhs: Vec<bool>,
}

impl Gf2System {
    pub fn new<R, I>(m: usize, rows: R, rhs: Vec<bool>) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = u32>,
    {
        let words = m.div_ceil(64);
        let mut packed = Vec::new();
        let mut count = 0;
        for (i, row) in rows.into_iter().enumerate() {
            let start = packed.len();
            packed.resize(start + words, 0u64);
            for v in row {
                let v = v as usize;
                if v >= m {
                    return Err(Error::domain(format!(
                        "equation {i} uses variable {v} >= {m}"
                    )));
                }
                packed[start + v / 64] ^= 1 << (v % 64);
            }
            count += 1;
        }
        if count != rhs.len() {
            return Err(Error::domain(format!(
                "{count} equations but {} right-hand sides",
                rhs.len()
            )));
        }
        Ok(Gf2System {
            m,
            words,
            rows: packed,
            rhs,
        })
    }

    pub fn variables(&self) -> usize {
        self.m
    }

    pub fn equations(&self) -> usize {
        self.rhs.len()
    }

    pub fn rhs(&self) -> &[bool] {
        &self.rhs
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// Variables with coefficient 1 in equation `i`, increasing.
    pub fn row_vars(&self, i: usize) -> Vec<u32> {
        let mut out = Vec::new();
        for (w, &word) in self.row(i).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push((w * 64 + bits.trailing_zeros() as usize) as u32);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn popcount(&self, i: usize) -> u32 {
        self.row(i).iter().map(|w| w.count_ones()).sum()
    }

    /// Same left-hand side with a different right-hand side.
    pub fn with_rhs(&self, rhs: Vec<bool>) -> Result<Self> {
        if rhs.len() != self.equations() {
            return Err(Error::domain("right-hand side length mismatch"));
        }
        Ok(Gf2System {
            rhs,
            ..self.clone()
        })
    }

    /// True when `assignment` satisfies every equation.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.m
            && (0..self.equations()).all(|i| {
                let parity = self
                    .row_vars(i)
                    .iter()
                    .fold(false, |acc, &v| acc ^ assignment[v as usize]);
                parity == self.rhs[i]
            })
    }

    /// Text dump: `p xor n m`, then one line per equation with its variable
    /// indices, `=`, and the right-hand side.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p xor {} {}", self.equations(), self.m).unwrap();
        for i in 0..self.equations() {
            for v in self.row_vars(i) {
                write!(out, "{v} ").unwrap();
            }
            writeln!(out, "= {}", self.rhs[i] as u8).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('c'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "p" || fields[1] != "xor" {
            return Err(Error::parse(hline + 1, "header must be 'p xor n m'"));
        }
        let n: usize = fields[2]
            .parse()
            .map_err(|_| Error::parse(hline + 1, "bad equation count"))?;
        let m: usize = fields[3]
            .parse()
            .map_err(|_| Error::parse(hline + 1, "bad variable count"))?;
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (i, line) in lines {
            let (lhs, b) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "missing '='"))?;
            let vars = lhs
                .split_whitespace()
                .map(str::parse::<u32>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let b = match b.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::parse(
                        i + 1,
                        format!("bad right-hand side {other:?}"),
                    ))
                }
            };
            rows.push(vars);
            rhs.push(b);
        }
        if rows.len() != n {
            return Err(Error::parse(
                n + 1,
                format!("expected {n} equations, found {}", rows.len()),
            ));
        }
        Self::new(m, rows, rhs)
    }
}

/// One equation per edge of `g`, right-hand sides uniform from `seed`.
pub fn from_hypergraph(g: &Hypergraph, seed: u64) -> Gf2System {
    let mut rng = rng_from_seed(derive(seed, stream::RHS));
    let rhs = (0..g.n()).map(|_| rng.random::<bool>()).collect();
    Gf2System::new(g.m(), g.edges().map(|e| e.iter().copied()), rhs)
        .expect("hypergraph edges are valid equations")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    pub satisfiable: bool,
    /// A satisfying assignment (free variables set to 0), when one exists.
    pub witness: Option<Vec<bool>>,
}

impl Solution {
    pub fn full_row_rank(&self, equations: usize) -> bool {
        self.rank == equations
    }
}

/// Gauss–Jordan elimination over GF(2).
pub fn rank_and_solve(s: &Gf2System) -> Solution {
    let n = s.equations();
    let words = s.words;
    let mut rows = s.rows.clone();
    let mut rhs = s.rhs.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..s.m {
        if rank == n {
            break;
        }
        let w = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(p) = (rank..n).find(|&r| rows[r * words + w] & bit != 0) else {
            continue;
        };
        if p != rank {
            for j in w..words {
                rows.swap(p * words + j, rank * words + j);
            }
            rhs.swap(p, rank);
        }
        // Rows at or below the pivot are zero in all earlier columns, so
        // only words from `w` on need XORing.
        let (before, rest) = rows.split_at_mut(rank * words);
        let (pivot_row, after) = rest.split_at_mut(words);
        let pivot_rhs = rhs[rank];
        for (r, row) in before.chunks_exact_mut(words).enumerate().chain(
            after
                .chunks_exact_mut(words)
                .enumerate()
                .map(|(i, c)| (rank + 1 + i, c)),
        ) {
            if row[w] & bit != 0 {
                for j in w..words {
                    row[j] ^= pivot_row[j];
                }
                rhs[r] ^= pivot_rhs;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let satisfiable = rhs[rank..].iter().all(|&b| !b);
    let witness = satisfiable.then(|| {
        let mut x = vec![false; s.m];
        for (r, &col) in pivots.iter().enumerate() {
            x[col] = rhs[r];
        }
        x
    });
    Solution {
        rank,
        satisfiable,
        witness,
    }
}

/// Exhaustive satisfiability check; only for `m <= 20`.
pub fn brute_force_satisfiable(s: &Gf2System) -> Result<bool> {
    if s.m > 20 {
        return Err(Error::Config(format!(
            "brute force limited to 20 variables, got {}",
            s.m
        )));
    }
    let masks: Vec<u32> = (0..s.equations())
        .map(|i| s.row_vars(i).iter().fold(0u32, |acc, &v| acc | 1 << v))
        .collect();
    Ok((0u32..1 << s.m).any(|x| {
        masks
            .iter()
            .zip(&s.rhs)
            .all(|(&mask, &b)| ((x & mask).count_ones() & 1 == 1) == b)
    }))
}
