//! Non-crossing partitions of the disk `{1, …, n}`, embedded as
//! permutations whose cycles are the blocks traversed in increasing order.

use crate::perm_core::{kreweras_disk, Perm, SetPartition};

/// Geodesic characterization: a permutation is non-crossing (lies on a
/// geodesic from the identity to the full cycle) iff
/// `#(π) + #(π⁻¹ γ_n) = n + 1`.
pub fn is_nc_perm(pi: &Perm) -> bool {
    let n = pi.degree();
    pi.cycle_count() + kreweras_disk(pi).cycle_count() == n + 1
}

/// Blocks-of-a-partition variant of [`is_nc_perm`].
pub fn is_nc_partition(p: &SetPartition) -> bool {
    let cycles: Vec<Vec<u32>> = p.blocks().to_vec();
    let pi = Perm::from_cycles(p.n(), &cycles).expect("partition blocks are disjoint");
    is_nc_perm(&pi)
}

/// Visits every non-crossing partition of `{1, …, n}` exactly once, as a
/// permutation with increasing cycles. Visit order is deterministic.
///
/// The enumeration runs a stack automaton over positions `1, …, n`: each
/// position either opens a new block (pushed on the stack) or joins a block
/// currently on the stack, closing every block nested above it. Joining a
/// non-top block closes the blocks above, which is exactly what forbids
/// crossings.
pub fn for_each_nc<F: FnMut(&Perm)>(n: u32, f: &mut F) {
    if n == 0 {
        return;
    }
    let mut stack: Vec<Vec<u32>> = Vec::new();
    let mut closed: Vec<Vec<u32>> = Vec::new();
    rec(1, n, &mut stack, &mut closed, f);
}

fn rec<F: FnMut(&Perm)>(
    i: u32,
    n: u32,
    stack: &mut Vec<Vec<u32>>,
    closed: &mut Vec<Vec<u32>>,
    f: &mut F,
) {
    if i > n {
        let mut cycles: Vec<Vec<u32>> = closed.clone();
        cycles.extend(stack.iter().cloned());
        let pi = Perm::from_cycles(n, &cycles).expect("blocks are disjoint");
        f(&pi);
        return;
    }
    // Open a new block with i.
    stack.push(vec![i]);
    rec(i + 1, n, stack, closed, f);
    stack.pop();
    // Join the block at depth d, closing everything nested above it.
    for d in (0..stack.len()).rev() {
        let popped: Vec<Vec<u32>> = stack.drain(d + 1..).collect();
        let restore = closed.len();
        closed.extend(popped);
        stack[d].push(i);
        rec(i + 1, n, stack, closed, f);
        stack[d].pop();
        let back: Vec<Vec<u32>> = closed.drain(restore..).collect();
        stack.extend(back);
    }
}

/// All of `NC(n)` as a sorted list.
pub fn nc_list(n: u32) -> Vec<Perm> {
    let mut out = Vec::new();
    for_each_nc(n, &mut |pi| out.push(pi.clone()));
    out.sort_unstable();
    out
}

pub fn count_nc(n: u32) -> u64 {
    let mut c = 0u64;
    for_each_nc(n, &mut |_| c += 1);
    c
}

/// Catalan number `C_n`, for cross-checking enumeration counts.
pub fn catalan(n: u32) -> u64 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_catalan() {
        for n in 0..=9 {
            assert_eq!(count_nc(n), catalan(n), "n = {n}");
        }
    }

    #[test]
    fn members_are_non_crossing_and_distinct() {
        for n in 1..=7 {
            let list = nc_list(n);
            assert_eq!(list.len() as u64, catalan(n));
            for pi in &list {
                assert!(is_nc_perm(pi));
            }
            let mut dedup = list.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), list.len());
        }
    }

    #[test]
    fn crossing_pairing_is_rejected() {
        let crossing = Perm::parse_with_degree("(1,3)(2,4)", 4).unwrap();
        assert!(!is_nc_perm(&crossing));
        let nested = Perm::parse_with_degree("(1,4)(2,3)", 4).unwrap();
        assert!(is_nc_perm(&nested));
    }

    #[test]
    fn kreweras_complement_is_an_nc_involution_up_to_rotation() {
        // Kr is a bijection of NC(n); #(π) + #(Kr π) = n + 1 throughout.
        let n = 6;
        let mut images = std::collections::BTreeSet::new();
        for_each_nc(n, &mut |pi| {
            let kr = kreweras_disk(pi);
            assert!(is_nc_perm(&kr));
            assert_eq!(pi.cycle_count() + kr.cycle_count(), n + 1);
            images.insert(kr.clone());
        });
        assert_eq!(images.len() as u64, catalan(n));
    }
}
