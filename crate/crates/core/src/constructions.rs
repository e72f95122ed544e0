//! Explicit labelings whose walks reach the lower target.
//!
//! The grid generators share one pattern: cells are split into blocks, and
//! labels alternate between two blocks that sit diagonally opposite each
//! other, so that every step crosses the middle of the grid in both axes.
//! Only a few steps (the hand-offs between block pairs) fail to cross, and
//! those account for the gap to the upper bound.

use thiserror::Error;

use crate::grid::{Cell, GridDims, Labeling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{generator} requires {requirement}, got {m}x{n}")]
    Shape {
        generator: &'static str,
        requirement: &'static str,
        m: usize,
        n: usize,
    },
}

struct Fill {
    dims: GridDims,
    labels: Vec<u64>,
}

impl Fill {
    fn new(m: usize, n: usize) -> Self {
        let dims = GridDims::new(m, n).expect("generator dims are validated by the caller");
        Self {
            dims,
            labels: vec![0; m * n],
        }
    }

    fn put(&mut self, i: usize, j: usize, label: u64) {
        let idx = (i - 1) * self.dims.cols() + (j - 1);
        debug_assert_eq!(self.labels[idx], 0, "cell ({i},{j}) labeled twice");
        self.labels[idx] = label;
    }

    fn finish(self) -> Labeling {
        Labeling::new(self.dims, self.labels).expect("generator produced a bijection")
    }
}

/// Cells of the block `rows x cols`, bottom row first, right to left.
fn reverse_row_major(
    rows: impl DoubleEndedIterator<Item = usize> + Clone,
    cols: impl DoubleEndedIterator<Item = usize> + Clone,
) -> Vec<Cell> {
    rows.rev()
        .flat_map(|i| cols.clone().rev().map(move |j| Cell::new(i, j)))
        .collect()
}

fn shape_err(
    generator: &'static str,
    requirement: &'static str,
    m: usize,
    n: usize,
) -> ConstructionError {
    ConstructionError::Shape {
        generator,
        requirement,
        m,
        n,
    }
}

/// Zigzag labeling of the path `1 x n`, length `⌊n²/2⌋ − 1` (0 for `n = 1`).
pub fn construct_path(n: usize) -> Result<Labeling, ConstructionError> {
    if n == 0 {
        return Err(shape_err("construct_path", "n >= 1", 1, n));
    }
    let k = n / 2;
    let mut order = Vec::with_capacity(n);
    if n % 2 == 0 {
        order.push(k);
        for t in 0..k - 1 {
            order.push(n - t);
            order.push(1 + t);
        }
        order.push(k + 1);
    } else {
        order.push(k + 1);
        for t in 0..k {
            order.push(n - t);
            order.push(1 + t);
        }
    }
    let mut fill = Fill::new(1, n);
    for (step, &j) in order.iter().enumerate() {
        fill.put(1, j, step as u64 + 1);
    }
    Ok(fill.finish())
}

/// The `2 x n` labeling for odd `n >= 3`, length `(n+1)² − 4`.
pub fn construct_2xn_odd(n: usize) -> Result<Labeling, ConstructionError> {
    if n < 3 || n % 2 == 0 {
        return Err(shape_err("construct_2xn_odd", "odd n >= 3", 2, n));
    }
    let k = (n - 1) / 2;
    let nn = n as u64;
    let mut fill = Fill::new(2, n);
    for j in 1..=k {
        let back = 2 * (j as u64 - 1);
        fill.put(1, j, nn - 1 - back);
        fill.put(2, j, 2 * nn - 1 - back);
    }
    fill.put(1, k + 1, nn + 1);
    fill.put(1, k + 2, 2 * nn);
    for (t, j) in (k + 3..=n).enumerate() {
        fill.put(1, j, nn + 3 + 2 * t as u64);
    }
    for (t, j) in (k + 1..=n).enumerate() {
        fill.put(2, j, 2 * t as u64 + 1);
    }
    Ok(fill.finish())
}

/// Quadrant labeling for even `m, n`, length `mn(m+n)/2 − 3`.
///
/// Odd labels `1, 3, …` run through the top-left quadrant, each followed by
/// its translate in the bottom-right quadrant. The second half pairs the
/// top-right quadrant with the bottom-left the same way.
pub fn construct_even_even(m: usize, n: usize) -> Result<Labeling, ConstructionError> {
    if m == 0 || n == 0 || m % 2 == 1 || n % 2 == 1 {
        return Err(shape_err("construct_even_even", "even m, n >= 2", m, n));
    }
    let (hm, hn) = (m / 2, n / 2);
    let half = (m * n / 2) as u64;
    let mut fill = Fill::new(m, n);

    for (k, c) in reverse_row_major(1..=hm, 1..=hn).into_iter().enumerate() {
        let label = 2 * k as u64 + 1;
        fill.put(c.i, c.j, label);
        fill.put(c.i + hm, c.j + hn, label + 1);
    }
    let top_right: Vec<Cell> = (1..=hm)
        .rev()
        .flat_map(|i| (hn + 1..=n).map(move |j| Cell::new(i, j)))
        .collect();
    for (k, c) in top_right.into_iter().enumerate() {
        let label = half + 1 + 2 * k as u64;
        fill.put(c.i, c.j, label);
        fill.put(c.i + hm, c.j - hn, label + 1);
    }
    Ok(fill.finish())
}

/// Block labeling for odd `m, n >= 3`, length `mn(m+n)/2 − (m+n)/2 − 1`.
pub fn construct_odd_odd(m: usize, n: usize) -> Result<Labeling, ConstructionError> {
    if m < 3 || n < 3 || m % 2 == 0 || n % 2 == 0 {
        return Err(shape_err("construct_odd_odd", "odd m, n >= 3", m, n));
    }
    let mid_row = (m + 1) / 2;
    let mid_col = (n + 1) / 2;
    let side = (n - 1) / 2;
    let r = ((m + 1) * (n - 1) / 2) as u64;
    let mut fill = Fill::new(m, n);

    // Upper-left block (through the middle row) against lower-right.
    for (k, c) in reverse_row_major(1..=mid_row, 1..=side)
        .into_iter()
        .enumerate()
    {
        let label = 2 * k as u64 + 1;
        fill.put(c.i, c.j, label);
        fill.put(c.i + (m - 1) / 2, c.j + mid_col, label + 1);
    }
    // Middle column, upper half against lower half.
    for t in 0..(m - 1) / 2 {
        let label = r + 1 + 2 * t as u64;
        fill.put(1 + t, mid_col, label);
        fill.put(mid_row + 1 + t, mid_col, label + 1);
    }
    // Upper-right block against lower-left.
    let upper_right = reverse_row_major(1..=(m - 1) / 2, mid_col + 1..=n);
    for (k, c) in upper_right.into_iter().enumerate() {
        let label = r + m as u64 + 2 * k as u64;
        fill.put(c.i, c.j, label);
        fill.put(c.i + mid_row, c.j - mid_col, label + 1);
    }
    fill.put(mid_row, mid_col, (m * n) as u64);
    Ok(fill.finish())
}

/// Block labeling for odd `m >= 3` and even `n >= 4`, length
/// `mn(m+n)/2 − n/2 − 1`.
pub fn construct_odd_even(m: usize, n: usize) -> Result<Labeling, ConstructionError> {
    if m < 3 || m % 2 == 0 || n < 4 || n % 2 == 1 {
        return Err(shape_err(
            "construct_odd_even",
            "odd m >= 3 and even n >= 4",
            m,
            n,
        ));
    }
    let mid_row = (m + 1) / 2;
    let hn = n / 2;
    let total = (m * n) as u64;
    let r = ((m + 1) * n / 2 - 3) as u64;
    let mut fill = Fill::new(m, n);

    // Odd labels 1..=r on the left, above and along the middle row (minus its
    // first cell); their even successors on the right, below and along it.
    let mut left: Vec<Cell> = (2..=hn).rev().map(|j| Cell::new(mid_row, j)).collect();
    left.extend(reverse_row_major(1..=mid_row - 1, 1..=hn));
    let mut right = reverse_row_major(mid_row + 1..=m, hn + 1..=n);
    right.extend((hn + 2..=n).rev().map(|j| Cell::new(mid_row, j)));
    debug_assert_eq!(left.len(), right.len());
    for (k, (a, b)) in left.into_iter().zip(right).enumerate() {
        let label = 2 * k as u64 + 1;
        fill.put(a.i, a.j, label);
        fill.put(b.i, b.j, label + 1);
    }

    // Lower-left against upper-right.
    let lower_left = reverse_row_major(mid_row + 1..=m, 1..=hn);
    let upper_right: Vec<Cell> = (1..mid_row)
        .flat_map(|i| (hn + 1..=n).rev().map(move |j| Cell::new(i, j)))
        .collect();
    for (k, (a, b)) in lower_left.into_iter().zip(upper_right).enumerate() {
        let label = r + 2 + 2 * k as u64;
        fill.put(a.i, a.j, label);
        fill.put(b.i, b.j, label + 1);
    }
    fill.put(mid_row, 1, total - 1);
    fill.put(mid_row, hn + 1, total);
    Ok(fill.finish())
}

/// Labeling reaching [`crate::bounds::lower_target`] for any grid.
pub fn construct_optimal(dims: GridDims) -> Labeling {
    let (m, n) = (dims.rows(), dims.cols());
    let canon = dims.canonical();
    let (short, long) = (canon.rows(), canon.cols());
    let flipped = canon != dims;

    let built = match (short, long % 2 == 0) {
        (1, _) => construct_path(long),
        (2, false) => construct_2xn_odd(long),
        _ if m % 2 == 0 && n % 2 == 0 => return construct_even_even(m, n).expect("even dims"),
        _ if m % 2 == 1 && n % 2 == 1 => return construct_odd_odd(m, n).expect("odd dims"),
        _ if m % 2 == 1 => return construct_odd_even(m, n).expect("odd x even dims"),
        _ => {
            return construct_odd_even(n, m)
                .expect("even x odd dims")
                .transpose()
        }
    };
    let built = built.expect("dispatch respects generator preconditions");
    if flipped {
        built.transpose()
    } else {
        built
    }
}

/// An arrangement of `copies` copies of each value in `1..=range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetSequence {
    pub copies: usize,
    pub range: usize,
    pub values: Vec<u64>,
}

impl MultisetSequence {
    pub fn total_variation(&self) -> u64 {
        self.values.windows(2).map(|w| w[0].abs_diff(w[1])).sum()
    }
}

/// Arrangement maximizing `Σ|x_{i+1} − x_i|`.
///
/// Values alternate between a low pool and a high pool, crossing the median
/// on every step; the median value itself (odd `range`) is split between
/// the pools and placed at the ends, where it costs nothing.
pub fn construct_multiset_sequence(copies: usize, range: usize) -> MultisetSequence {
    assert!(
        copies >= 1 && range >= 1,
        "copies and range must be positive"
    );
    if range == 1 {
        return MultisetSequence {
            copies,
            range,
            values: vec![1; copies],
        };
    }
    let k = range / 2;
    let repeat = |vals: std::ops::RangeInclusive<usize>| -> Vec<u64> {
        vals.flat_map(|v| std::iter::repeat_n(v as u64, copies))
            .collect()
    };
    let mut low = repeat(1..=k);
    let mut high = repeat(range - k + 1..=range);
    // Endpoints as (value, taken from the low pool).
    let (first, last) = if range % 2 == 0 {
        // L H L H … L H, entering at k and leaving at k + 1.
        ((k as u64, true), (k as u64 + 1, false))
    } else {
        let median = k as u64 + 1;
        let (to_low, to_high) = (copies.div_ceil(2), copies / 2);
        low.extend(std::iter::repeat_n(median, to_low));
        high.extend(std::iter::repeat_n(median, to_high));
        if copies % 2 == 0 {
            ((median, true), (median, false))
        } else if copies >= 3 {
            ((median, true), (median, true))
        } else {
            // A single median: the far end settles for the largest low value.
            ((median, true), (k as u64, true))
        }
    };
    let mut take = |(v, from_low): (u64, bool)| {
        let pool = if from_low { &mut low } else { &mut high };
        let pos = pool.iter().position(|&x| x == v).expect("endpoint in pool");
        pool.remove(pos)
    };
    let start = take(first);
    let end = take(last);

    let mut values = Vec::with_capacity(copies * range);
    values.push(start);
    // After a low start the next value comes from the high pool.
    let (hi_it, mut lo_it) = (high.into_iter(), low.into_iter());
    for h in hi_it {
        values.push(h);
        match lo_it.next() {
            Some(l) => values.push(l),
            None => break,
        }
    }
    values.extend(lo_it);
    values.push(end);
    debug_assert_eq!(values.len(), copies * range);
    MultisetSequence {
        copies,
        range,
        values,
    }
}
