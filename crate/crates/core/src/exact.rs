//! Exact cover over at most 128 points with bitmask pieces.

use rayon::prelude::*;

/// All ways to pick pieces that cover each point of `universe` exactly once.
/// Each solution lists piece indices in the order chosen (lowest uncovered
/// point first), so every unordered cover appears once.
pub fn exact_covers(universe: u128, pieces: &[u128]) -> Vec<Vec<usize>> {
    let by_point = index_pieces(universe, pieces);
    let first = universe.trailing_zeros() as usize;
    if universe == 0 {
        return vec![Vec::new()];
    }
    // the top level is split across threads; order of results is preserved
    by_point[first]
        .par_iter()
        .map(|&p| {
            let mut out = Vec::new();
            let mut stack = vec![p];
            solve(universe & !pieces[p], pieces, &by_point, &mut stack, &mut out);
            out
        })
        .flatten_iter()
        .collect()
}

/// Number of exact covers.
pub fn count_exact_covers(universe: u128, pieces: &[u128]) -> u64 {
    let by_point = index_pieces(universe, pieces);
    if universe == 0 {
        return 1;
    }
    let first = universe.trailing_zeros() as usize;
    by_point[first]
        .par_iter()
        .map(|&p| count(universe & !pieces[p], pieces, &by_point))
        .sum()
}

fn index_pieces(universe: u128, pieces: &[u128]) -> Vec<Vec<usize>> {
    let mut by_point = vec![Vec::new(); 128];
    for (k, &m) in pieces.iter().enumerate() {
        if m & !universe != 0 || m == 0 {
            continue;
        }
        let mut b = m;
        while b != 0 {
            by_point[b.trailing_zeros() as usize].push(k);
            b &= b - 1;
        }
    }
    by_point
}

fn solve(
    open: u128,
    pieces: &[u128],
    by_point: &[Vec<usize>],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if open == 0 {
        out.push(stack.clone());
        return;
    }
    let p = open.trailing_zeros() as usize;
    for &k in &by_point[p] {
        let m = pieces[k];
        if m & !open == 0 {
            stack.push(k);
            solve(open & !m, pieces, by_point, stack, out);
            stack.pop();
        }
    }
}

fn count(open: u128, pieces: &[u128], by_point: &[Vec<usize>]) -> u64 {
    if open == 0 {
        return 1;
    }
    let p = open.trailing_zeros() as usize;
    by_point[p]
        .iter()
        .filter(|&&k| pieces[k] & !open == 0)
        .map(|&k| count(open & !pieces[k], pieces, by_point))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domino_tilings_of_2x4() {
        // cells 0..8, row-major 2 x 4
        let mut pieces = Vec::new();
        for r in 0..2 {
            for c in 0..3 {
                pieces.push(1u128 << (r * 4 + c) | 1u128 << (r * 4 + c + 1));
            }
        }
        for c in 0..4 {
            pieces.push(1u128 << c | 1u128 << (4 + c));
        }
        assert_eq!(count_exact_covers(0xff, &pieces), 5);
        let sols = exact_covers(0xff, &pieces);
        assert_eq!(sols.len(), 5);
        for s in sols {
            assert_eq!(s.iter().fold(0u128, |a, &k| a | pieces[k]), 0xff);
        }
    }

    #[test]
    fn set_partitions_of_four() {
        // every nonempty subset is a piece: covers are set partitions, Bell(4) = 15
        let pieces: Vec<u128> = (1u128..16).collect();
        assert_eq!(count_exact_covers(0xf, &pieces), 15);
    }
}
