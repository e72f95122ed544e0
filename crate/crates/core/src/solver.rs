//! Exact maximum walk length on small grids.
//!
//! The main solver is a subset dynamic program over `(visited set, last
//! cell)` states, i.e. a longest Hamiltonian path with Manhattan edge
//! weights. States are processed one popcount layer at a time; a layer only
//! reads the previous one, so its masks are evaluated in parallel and then
//! written back in mask order. Results never depend on the thread count.
//!
//! Two factorial enumerators back it up as oracles on tiny inputs.

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{lower_target, mcneil, theorem_status, TheoremStatus};
use crate::grid::{manhattan, Cell, GridDims, Labeling, Walk};

pub const DEFAULT_CELL_CAP: usize = 20;
/// Above this the DP table no longer fits comfortably in memory.
pub const HARD_CELL_CEILING: usize = 22;
pub const BRUTE_FORCE_MAX_CELLS: usize = 9;
pub const MULTISET_BRUTE_FORCE_MAX_LEN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(
        "{dims} has {cells} cells, above the cap of {cap}; the subset DP would need about {} MiB",
        estimated_bytes / (1 << 20)
    )]
    OverCap {
        dims: GridDims,
        cells: usize,
        cap: usize,
        estimated_bytes: u64,
    },
    #[error("cell cap {requested} exceeds the hard ceiling of {HARD_CELL_CEILING}")]
    CapTooHigh { requested: usize },
    #[error("brute force is limited to {limit} items, got {size}")]
    BruteForceTooLarge { size: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    BitmaskDP,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BitmaskDP => "bitmask-dp",
            Method::BruteForce => "brute-force",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub dims: GridDims,
    pub optimum: u64,
    pub witness: Labeling,
    pub method: Method,
    pub elapsed: Duration,
}

/// Bytes of the DP value table for `cells` cells.
pub fn dp_memory_estimate(cells: usize) -> u64 {
    (1u64 << cells) * cells as u64 * std::mem::size_of::<u16>() as u64
}

/// Exact maximum walk length, with a witness labeling.
///
/// Among optimal end cells, and among optimal predecessors while
/// backtracking, the lowest row-major index wins.
pub fn solve_exact(dims: GridDims, cell_cap: usize) -> Result<SolveResult, SolverError> {
    if cell_cap > HARD_CELL_CEILING {
        return Err(SolverError::CapTooHigh {
            requested: cell_cap,
        });
    }
    let cells = dims.cell_count();
    if cells > cell_cap {
        return Err(SolverError::OverCap {
            dims,
            cells,
            cap: cell_cap,
            estimated_bytes: dp_memory_estimate(cells),
        });
    }
    let start = Instant::now();
    let order = longest_path(dims);
    let walk = Walk::new(dims, order).expect("DP path visits every cell once");
    let witness = walk.to_labeling();
    let optimum = walk.length();
    Ok(SolveResult {
        dims,
        optimum,
        witness,
        method: Method::BitmaskDP,
        elapsed: start.elapsed(),
    })
}

fn longest_path(dims: GridDims) -> Vec<Cell> {
    let n = dims.cell_count();
    let cells: Vec<Cell> = dims.cells().collect();
    if n == 1 {
        return cells;
    }
    let dist: Vec<u16> = cells
        .iter()
        .flat_map(|&a| cells.iter().map(move |&b| manhattan(a, b) as u16))
        .collect();
    let d = |u: usize, v: usize| dist[u * n + v];

    // value[mask * n + v]: longest path through exactly `mask`, ending at v.
    // Singletons start at zero, which is also the fill value.
    let mut value = vec![0u16; (1usize << n) * n];
    let mut layer_out: Vec<u16> = Vec::new();
    for size in 2..=n {
        let masks = masks_with_popcount(n, size);
        layer_out.clear();
        layer_out.resize(masks.len() * n, 0);
        let prev = &value;
        layer_out
            .par_chunks_mut(n)
            .zip(masks.par_iter())
            .for_each(|(out, &mask)| {
                for v in bits(mask) {
                    let rest = mask & !(1 << v);
                    let base = rest * n;
                    out[v] = bits(rest)
                        .map(|u| prev[base + u] + d(u, v))
                        .max()
                        .unwrap_or(0);
                }
            });
        for (k, &mask) in masks.iter().enumerate() {
            value[mask * n..(mask + 1) * n].copy_from_slice(&layer_out[k * n..(k + 1) * n]);
        }
    }

    let full = (1usize << n) - 1;
    let row = &value[full * n..(full + 1) * n];
    let best = *row.iter().max().expect("non-empty grid");
    let mut cur = row.iter().position(|&x| x == best).expect("max exists");
    let mut mask = full;
    let mut rev = vec![cur];
    while mask.count_ones() > 1 {
        let rest = mask & !(1 << cur);
        let target = value[mask * n + cur];
        let prev = bits(rest)
            .find(|&u| value[rest * n + u] + d(u, cur) == target)
            .expect("some predecessor realises the optimum");
        rev.push(prev);
        mask = rest;
        cur = prev;
    }
    rev.into_iter().rev().map(|idx| cells[idx]).collect()
}

fn bits(mask: usize) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// All `width`-bit masks with exactly `k` bits set, ascending.
fn masks_with_popcount(width: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if k == 0 || k > width {
        return out;
    }
    let limit = 1usize << width;
    let mut x = (1usize << k) - 1;
    while x < limit {
        out.push(x);
        // Gosper's hack: next integer with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Rearranges `v` into the next lexicographic permutation; false once the
/// sequence is back to ascending order. Repeated values yield each distinct
/// arrangement once.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        v.reverse();
        return false;
    };
    let j = (i + 1..v.len())
        .rev()
        .find(|&j| v[j] > v[i])
        .expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Maximum walk length by trying every visiting order.
pub fn brute_force(dims: GridDims) -> Result<u64, SolverError> {
    let size = dims.cell_count();
    if size > BRUTE_FORCE_MAX_CELLS {
        return Err(SolverError::BruteForceTooLarge {
            size,
            limit: BRUTE_FORCE_MAX_CELLS,
        });
    }
    let mut order: Vec<Cell> = dims.cells().collect();
    let mut best = 0;
    loop {
        let len: u64 = order.windows(2).map(|w| manhattan(w[0], w[1])).sum();
        best = best.max(len);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best)
}

/// Maximum of `Σ|x_{i+1} − x_i|` over the distinct arrangements of `copies`
/// copies of `1..=range`.
pub fn multiset_brute_force(copies: usize, range: usize) -> Result<u64, SolverError> {
    let size = copies * range;
    if size > MULTISET_BRUTE_FORCE_MAX_LEN {
        return Err(SolverError::BruteForceTooLarge {
            size,
            limit: MULTISET_BRUTE_FORCE_MAX_LEN,
        });
    }
    let mut seq: Vec<u64> = (1..=range as u64)
        .flat_map(|v| std::iter::repeat_n(v, copies))
        .collect();
    let mut best = 0;
    loop {
        let total: u64 = seq.windows(2).map(|w| w[0].abs_diff(w[1])).sum();
        best = best.max(total);
        if !next_permutation(&mut seq) {
            break;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// The optimum equals the lower target `r`.
    Lower,
    /// The optimum equals `r + 1`.
    Upper,
}

/// Which end of the bound interval a solved instance landed on.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub status: TheoremStatus,
    pub result: SolveResult,
    pub endpoint: Endpoint,
    /// Conjectured value for square grids.
    pub conjecture: Option<u64>,
}

impl Resolution {
    pub fn optimum(&self) -> u64 {
        self.result.optimum
    }

    pub fn conjecture_matches(&self) -> Option<bool> {
        self.conjecture.map(|c| c == self.result.optimum)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.status;
        write!(f, "M={}", self.result.optimum)?;
        match self.endpoint {
            Endpoint::Lower => write!(f, ", equals r")?,
            Endpoint::Upper => write!(f, ", equals r+1")?,
        }
        if s.is_exact() {
            write!(f, " (exact case confirmed, r={})", s.lower_target)?;
        } else {
            write!(f, " (interval {{{}, {}}})", s.lower_target, s.upper)?;
        }
        if let Some(c) = self.conjecture {
            let verdict = if c == self.result.optimum {
                "matches"
            } else {
                "differs from"
            };
            write!(f, "; {verdict} conjectured {c}")?;
        }
        Ok(())
    }
}

pub fn resolve_interval(dims: GridDims, cell_cap: usize) -> Result<Resolution, SolverError> {
    let result = solve_exact(dims, cell_cap)?;
    let status = theorem_status(dims);
    let endpoint = if result.optimum == status.lower_target {
        Endpoint::Lower
    } else {
        assert_eq!(
            result.optimum, status.upper,
            "{dims}: optimum {} escapes [{}, {}]",
            result.optimum, status.lower_target, status.upper
        );
        Endpoint::Upper
    };
    let conjecture = if dims.rows() == dims.cols() {
        mcneil(dims.rows() as u64)
    } else {
        None
    };
    debug_assert!(result.optimum >= lower_target(dims));
    Ok(Resolution {
        status,
        result,
        endpoint,
        conjecture,
    })
}
