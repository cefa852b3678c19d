use crate::error::Result;

use super::coloring::{ColorField, ColoringSpec, CombinatorialLine};

/// Outcome of one exhaustive line search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSearch {
    pub line: Option<CombinatorialLine>,
    pub lines_checked: u64,
    /// Points of `Z^N` where the coloring value vanishes.
    pub zero_points: u64,
}

/// Direction masks (bit `j` = coordinate `j`) in search order: by number of
/// ones, then lexicographically on `(w_0, w_1, ..)`.
pub fn direction_order(n: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (1..1u32 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), (0..n).map(|j| (m >> j) & 1).collect::<Vec<_>>()));
    masks
}

/// First monochromatic line in search order, or `None` after all
/// `5^N - 4^N` lines.
pub fn find_monochromatic_line<F: ColorField>(spec: &ColoringSpec<F>) -> Option<CombinatorialLine> {
    search_lines(spec).line
}

pub fn search_lines<F: ColorField>(spec: &ColoringSpec<F>) -> LineSearch {
    let table = F::color_table(spec);
    search_table(spec.n(), &table)
}

/// Line search over a precomputed color table indexed by `sum i_j 4^j`.
pub fn search_table(n: usize, table: &[Option<u32>]) -> LineSearch {
    let zero_points = table.iter().filter(|c| c.is_none()).count() as u64;
    let mut lines_checked = 0u64;
    let weight = |j: usize| 1usize << (2 * j);
    for mask in direction_order(n) {
        let step: usize = (0..n).filter(|&j| mask >> j & 1 == 1).map(weight).sum();
        let free: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 0).collect();
        // Odometer over the free coordinates; the last one moves fastest so
        // `v` runs in lexicographic order.
        let mut digits = vec![0u8; free.len()];
        loop {
            lines_checked += 1;
            let base: usize = free.iter().zip(&digits).map(|(&j, &d)| d as usize * weight(j)).sum();
            if let Some(c0) = table[base] {
                if (1..4).all(|k| table[base + k * step] == Some(c0)) {
                    let mut v = vec![0u8; n];
                    for (&j, &d) in free.iter().zip(&digits) {
                        v[j] = d;
                    }
                    let w = (0..n).map(|j| mask >> j & 1 == 1).collect();
                    return LineSearch { line: Some(CombinatorialLine { v, w }), lines_checked, zero_points };
                }
            }
            if !advance(&mut digits) {
                break;
            }
        }
    }
    LineSearch { line: None, lines_checked, zero_points }
}

fn advance(digits: &mut [u8]) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < 3 {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// True when the four line values are nonzero and share a color.
pub fn is_monochromatic<F: ColorField>(spec: &ColoringSpec<F>, line: &CombinatorialLine) -> Result<bool> {
    let values = super::coloring::line_values(spec, line)?;
    if values.iter().any(|v| v.is_zero()) {
        return Ok(false);
    }
    let first = values[0].color(&spec.quotient)?;
    for v in &values[1..] {
        if v.color(&spec.quotient)? != first {
            return Ok(false);
        }
    }
    Ok(true)
}
