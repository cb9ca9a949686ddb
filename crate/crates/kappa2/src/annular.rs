//! Enumeration of annular non-crossing permutations `S_NC(n, m)`.
//!
//! A permutation `π` of `{1, …, n+m}` belongs to `S_NC(n, m)` when it joins
//! the two circles (`π ∨ γ_{n,m} = 1`) and lies on a geodesic,
//! `#(π) + #(π⁻¹ γ_{n,m}) = n + m`, where `γ_{n,m} = (1,…,n)(n+1,…,n+m)`.
//!
//! The enumerator grows cycles depth-first in a canonical order (each cycle
//! starts at the smallest unused point, so every permutation is produced
//! exactly once) while maintaining both `π` and `σ = π⁻¹ γ` incrementally:
//! appending a point multiplies `σ` on the right by a transposition, so the
//! cycle counts — and with them the geodesic defect — are updated in place.
//! The defect never decreases along a branch, which makes pruning exact.
//!
//! Optional structural flags restrict the scan to the sub-families the
//! cumulant formulas need; all of them prune during the walk rather than
//! filtering afterwards.

use crate::perm_core::Perm;
use crate::ExecMode;

/// Structural restrictions applied while enumerating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SncFlags {
    /// Every cycle contains at most one even point ("separates the evens").
    pub sep_even: bool,
    /// Every cycle stays within one parity class.
    pub pure_parity: bool,
    /// All cycles have length two (pairings).
    pub pairs_only: bool,
    /// Cycles consisting solely of odd points have even length.
    pub odd_cycles_even_len: bool,
}

impl SncFlags {
    pub const NONE: SncFlags = SncFlags {
        sep_even: false,
        pure_parity: false,
        pairs_only: false,
        odd_cycles_even_len: false,
    };
}

/// Does the finished permutation satisfy the flag set? Used by the
/// brute-force cross-check and the predicate-based family filters.
pub fn flags_hold(pi: &Perm, flags: SncFlags) -> bool {
    for cycle in pi.cycles() {
        let evens = cycle.iter().filter(|&&x| x % 2 == 0).count();
        if flags.sep_even && evens > 1 {
            return false;
        }
        if flags.pure_parity && evens != 0 && evens != cycle.len() {
            return false;
        }
        if flags.pairs_only && cycle.len() != 2 {
            return false;
        }
        if flags.odd_cycles_even_len && evens == 0 && cycle.len() % 2 == 1 {
            return false;
        }
    }
    true
}

/// Membership predicate for `S_NC(n, m)`.
pub fn is_snc(pi: &Perm, n: u32, m: u32) -> bool {
    if pi.degree() != n + m {
        return false;
    }
    let mixed = pi
        .cycles()
        .iter()
        .any(|c| c.iter().any(|&x| x <= n) && c.iter().any(|&x| x > n));
    if !mixed {
        return false;
    }
    let kr = pi.inverse().compose(&Perm::gamma_annulus(n, m));
    pi.cycle_count() + kr.cycle_count() == n + m
}

/// `|S_NC(n, m)| = n·m/(2(n+m)) · C(2n, n) · C(2m, m)`.
pub fn snc_count_formula(n: u32, m: u32) -> u128 {
    let binom = |a: u128, b: u128| -> u128 {
        let mut r: u128 = 1;
        for k in 0..b {
            r = r * (a - k) / (k + 1);
        }
        r
    };
    let (n, m) = (n as u128, m as u128);
    n * m * binom(2 * n, n) * binom(2 * m, m) / (2 * (n + m))
}

#[derive(Debug, Clone, Copy)]
struct Open {
    first: u32,
    last: u32,
    len: u32,
    evens: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Close,
    Append(u32),
}

#[derive(Clone)]
struct State {
    n: u32,
    t: u32,
    flags: SncFlags,
    gamma_inv: Vec<u32>,
    /// Image table of the permutation under construction; the open cycle is
    /// kept virtually closed (`last ↦ first`).
    p: Vec<u32>,
    /// Image table of `σ = p⁻¹ γ`, maintained incrementally.
    q: Vec<u32>,
    used: Vec<bool>,
    p_cycles: u32,
    q_cycles: u32,
    open: Option<Open>,
}

struct AppendUndo {
    y: u32,
    prev_last: u32,
    u: u32,
    v: u32,
    q_delta: i32,
}

struct CloseUndo {
    prev: Open,
    started: Option<u32>,
}

impl State {
    fn new(n: u32, m: u32, flags: SncFlags) -> State {
        assert!(n >= 1 && m >= 1, "annulus needs points on both circles");
        let t = n + m;
        let gamma = Perm::gamma_annulus(n, m);
        let mut st = State {
            n,
            t,
            flags,
            gamma_inv: gamma.inverse().images().to_vec(),
            p: (1..=t).collect(),
            q: gamma.images().to_vec(),
            used: vec![false; t as usize],
            p_cycles: t,
            q_cycles: 2,
            open: None,
        };
        st.start_next();
        st
    }

    #[inline]
    fn complete(&self) -> bool {
        self.open.is_none()
    }

    /// Geodesic defect `|p| + |σ| − |γ|`; zero on a geodesic through the
    /// identity, exactly two for `S_NC(n, m)`.
    #[inline]
    fn defect(&self) -> i32 {
        self.t as i32 + 2 - self.p_cycles as i32 - self.q_cycles as i32
    }

    fn start_next(&mut self) {
        let c = (1..=self.t).find(|&x| !self.used[(x - 1) as usize]);
        if let Some(c) = c {
            self.used[(c - 1) as usize] = true;
            self.open = Some(Open {
                first: c,
                last: c,
                len: 1,
                evens: (c % 2 == 0) as u32,
            });
        }
    }

    fn close_allowed(&self) -> bool {
        let oc = self.open.as_ref().expect("open cycle");
        if self.flags.pairs_only && oc.len != 2 {
            return false;
        }
        if self.flags.odd_cycles_even_len && oc.evens == 0 && oc.len % 2 == 1 {
            return false;
        }
        true
    }

    fn append_allowed(&self, y: u32) -> bool {
        if self.used[(y - 1) as usize] {
            return false;
        }
        let oc = self.open.as_ref().expect("open cycle");
        if self.flags.pairs_only && oc.len >= 2 {
            return false;
        }
        if self.flags.sep_even && y % 2 == 0 && oc.evens > 0 {
            return false;
        }
        if self.flags.pure_parity && y % 2 != oc.first % 2 {
            return false;
        }
        true
    }

    /// Walks the `q`-cycle of `u` looking for `v`; used to predict how the
    /// transposition changes the cycle count.
    fn same_q_cycle(&self, u: u32, v: u32) -> bool {
        let mut x = self.q[(u - 1) as usize];
        loop {
            if x == v {
                return true;
            }
            if x == u {
                return false;
            }
            x = self.q[(x - 1) as usize];
        }
    }

    fn apply_append(&mut self, y: u32) -> AppendUndo {
        let oc = self.open.as_ref().expect("open cycle");
        let (first, last) = (oc.first, oc.last);
        // Splice y into the open cycle: p ↦ (first, y) ∘ p.
        self.p[(last - 1) as usize] = y;
        self.p[(y - 1) as usize] = first;
        self.p_cycles -= 1;
        // And σ ↦ σ ∘ (γ⁻¹(first), γ⁻¹(y)).
        let u = self.gamma_inv[(first - 1) as usize];
        let v = self.gamma_inv[(y - 1) as usize];
        let q_delta = if self.same_q_cycle(u, v) { 1 } else { -1 };
        self.q.swap((u - 1) as usize, (v - 1) as usize);
        self.q_cycles = (self.q_cycles as i32 + q_delta) as u32;
        self.used[(y - 1) as usize] = true;
        let oc = self.open.as_mut().unwrap();
        let prev_last = oc.last;
        oc.last = y;
        oc.len += 1;
        oc.evens += (y % 2 == 0) as u32;
        AppendUndo {
            y,
            prev_last,
            u,
            v,
            q_delta,
        }
    }

    fn undo_append(&mut self, undo: AppendUndo) {
        let oc = self.open.as_mut().expect("open cycle");
        oc.last = undo.prev_last;
        oc.len -= 1;
        oc.evens -= (undo.y % 2 == 0) as u32;
        let first = oc.first;
        self.used[(undo.y - 1) as usize] = false;
        self.q.swap((undo.u - 1) as usize, (undo.v - 1) as usize);
        self.q_cycles = (self.q_cycles as i32 - undo.q_delta) as u32;
        self.p[(undo.prev_last - 1) as usize] = first;
        self.p[(undo.y - 1) as usize] = undo.y;
        self.p_cycles += 1;
    }

    fn apply_close(&mut self) -> CloseUndo {
        let prev = self.open.take().expect("open cycle");
        self.start_next();
        let started = self.open.as_ref().map(|oc| oc.first);
        CloseUndo { prev, started }
    }

    fn undo_close(&mut self, undo: CloseUndo) {
        if let Some(c) = undo.started {
            self.used[(c - 1) as usize] = false;
        }
        self.open = Some(undo.prev);
    }

    fn apply_op(&mut self, op: Op) {
        match op {
            Op::Close => {
                self.apply_close();
            }
            Op::Append(y) => {
                self.apply_append(y);
            }
        }
    }

    /// A finished permutation joins the circles iff some cycle meets both.
    fn connected(&self) -> bool {
        let mut seen = vec![false; self.t as usize];
        for start in 1..=self.t {
            if seen[(start - 1) as usize] {
                continue;
            }
            let (mut outer, mut inner) = (false, false);
            let mut x = start;
            while !seen[(x - 1) as usize] {
                seen[(x - 1) as usize] = true;
                if x <= self.n {
                    outer = true;
                } else {
                    inner = true;
                }
                x = self.p[(x - 1) as usize];
            }
            if outer && inner {
                return true;
            }
        }
        false
    }
}

fn run<F: FnMut(&[u32], &[u32])>(st: &mut State, f: &mut F) {
    if st.complete() {
        if st.defect() == 2 && st.connected() {
            f(&st.p, &st.q);
        }
        return;
    }
    if st.close_allowed() {
        let undo = st.apply_close();
        run(st, f);
        st.undo_close(undo);
    }
    let first = st.open.as_ref().expect("open cycle").first;
    for y in first + 1..=st.t {
        if !st.append_allowed(y) {
            continue;
        }
        let undo = st.apply_append(y);
        if st.defect() <= 2 {
            run(st, f);
        }
        st.undo_append(undo);
    }
}

/// Valid single moves from the current state, in canonical order.
fn valid_ops(st: &mut State) -> Vec<Op> {
    let mut ops = Vec::new();
    if st.complete() {
        return ops;
    }
    if st.close_allowed() {
        ops.push(Op::Close);
    }
    let first = st.open.as_ref().expect("open cycle").first;
    for y in first + 1..=st.t {
        if !st.append_allowed(y) {
            continue;
        }
        let undo = st.apply_append(y);
        if st.defect() <= 2 {
            ops.push(Op::Append(y));
        }
        st.undo_append(undo);
    }
    ops
}

fn replay(n: u32, m: u32, flags: SncFlags, prefix: &[Op]) -> State {
    let mut st = State::new(n, m, flags);
    for &op in prefix {
        st.apply_op(op);
    }
    st
}

/// Visits every member of `S_NC(n, m)` satisfying `flags`, sequentially and
/// in canonical order. The callback receives the image tables of `π` and of
/// its annular Kreweras complement `π⁻¹ γ_{n,m}`.
pub fn for_each_snc<F: FnMut(&[u32], &[u32])>(n: u32, m: u32, flags: SncFlags, f: &mut F) {
    let mut st = State::new(n, m, flags);
    run(&mut st, f);
}

/// Fold over `S_NC(n, m)`, optionally fanning the enumeration tree out on a
/// rayon pool. `fold` must be order-insensitive up to `merge` (sums,
/// counters, set unions); partial results are merged in canonical prefix
/// order, so the outcome is deterministic in both modes.
pub fn scan<R, MK, F, M>(n: u32, m: u32, flags: SncFlags, mode: ExecMode, mk: MK, fold: F, merge: M) -> R
where
    R: Send,
    MK: Fn() -> R + Sync,
    F: Fn(&mut R, &[u32], &[u32]) + Sync,
    M: Fn(R, R) -> R,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        let target = 256.max(4 * rayon::current_num_threads());
        let mut frontier: Vec<Vec<Op>> = vec![Vec::new()];
        loop {
            if frontier.len() >= target {
                break;
            }
            let mut next = Vec::with_capacity(frontier.len() * 4);
            let mut grew = false;
            for prefix in &frontier {
                let mut st = replay(n, m, flags, prefix);
                if st.complete() {
                    next.push(prefix.clone());
                    continue;
                }
                for op in valid_ops(&mut st) {
                    let mut child = prefix.clone();
                    child.push(op);
                    next.push(child);
                    grew = true;
                }
            }
            frontier = next;
            if !grew {
                break;
            }
        }
        let locals: Vec<R> = frontier
            .par_iter()
            .map(|prefix| {
                let mut st = replay(n, m, flags, prefix);
                let mut local = mk();
                run(&mut st, &mut |p, q| fold(&mut local, p, q));
                local
            })
            .collect();
        return locals.into_iter().fold(mk(), merge);
    }
    let _ = (&mode, &merge);
    let mut acc = mk();
    for_each_snc(n, m, flags, &mut |p, q| fold(&mut acc, p, q));
    acc
}

pub fn count_snc(n: u32, m: u32, flags: SncFlags, mode: ExecMode) -> u64 {
    scan(n, m, flags, mode, || 0u64, |c, _, _| *c += 1, |a, b| a + b)
}

/// All members as `(π, π⁻¹γ)` pairs in canonical enumeration order.
pub fn snc_members(n: u32, m: u32, flags: SncFlags) -> Vec<(Perm, Perm)> {
    let mut out = Vec::new();
    for_each_snc(n, m, flags, &mut |p, q| {
        out.push((
            Perm::from_images(p.to_vec()).expect("valid image table"),
            Perm::from_images(q.to_vec()).expect("valid image table"),
        ));
    });
    out
}

/// Independent cross-check: filter all of `S_{n+m}` by the membership
/// predicate. Only practical for `n + m ≤ 8`.
pub fn brute_snc_members(n: u32, m: u32, flags: SncFlags) -> Vec<(Perm, Perm)> {
    use itertools::Itertools;
    let t = n + m;
    let mut out = Vec::new();
    for img in (1..=t).permutations(t as usize) {
        let pi = Perm::from_images(img).expect("permutation of 1..=t");
        if is_snc(&pi, n, m) && flags_hold(&pi, flags) {
            let kr = pi.inverse().compose(&Perm::gamma_annulus(n, m));
            out.push((pi, kr));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<(Perm, Perm)>) -> Vec<(Perm, Perm)> {
        v.sort();
        v
    }

    #[test]
    fn snc_2_1_members_and_complements() {
        let members = snc_members(2, 1, SncFlags::NONE);
        assert_eq!(members.len(), 4);
        let expect = [
            ("(1,2,3)", "(1)(2,3)"),
            ("(1,3,2)", "(1,3)(2)"),
            ("(1,3)(2)", "(1,2,3)"),
            ("(1)(2,3)", "(1,3,2)"),
        ];
        let got: std::collections::BTreeSet<(String, String)> = members
            .iter()
            .map(|(p, q)| (p.to_string(), q.to_string()))
            .collect();
        let want: std::collections::BTreeSet<(String, String)> = expect
            .iter()
            .map(|&(p, q)| (p.to_string(), q.to_string()))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn snc_2_2_is_s4_minus_six() {
        use itertools::Itertools;
        let members: std::collections::BTreeSet<Perm> =
            snc_members(2, 2, SncFlags::NONE).into_iter().map(|(p, _)| p).collect();
        assert_eq!(members.len(), 18);
        let excluded: std::collections::BTreeSet<Perm> = [
            "(1)(2)(3)(4)",
            "(1)(2)(3,4)",
            "(1,2)(3)(4)",
            "(1,2)(3,4)",
            "(1,3,2,4)",
            "(1,4,2,3)",
        ]
        .iter()
        .map(|s| Perm::parse_with_degree(s, 4).unwrap())
        .collect();
        let all: std::collections::BTreeSet<Perm> = (1..=4u32)
            .permutations(4)
            .map(|img| Perm::from_images(img).unwrap())
            .collect();
        let expected: std::collections::BTreeSet<Perm> =
            all.difference(&excluded).cloned().collect();
        assert_eq!(members, expected);
    }

    #[test]
    fn dfs_matches_brute_force_with_flags() {
        let flag_sets = [
            SncFlags::NONE,
            SncFlags {
                sep_even: true,
                ..SncFlags::NONE
            },
            SncFlags {
                pure_parity: true,
                ..SncFlags::NONE
            },
            SncFlags {
                pairs_only: true,
                ..SncFlags::NONE
            },
            SncFlags {
                sep_even: true,
                odd_cycles_even_len: true,
                ..SncFlags::NONE
            },
        ];
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (4, 2), (3, 3)] {
            for flags in flag_sets {
                assert_eq!(
                    sorted(snc_members(n, m, flags)),
                    sorted(brute_snc_members(n, m, flags)),
                    "(n, m) = ({n}, {m}), {flags:?}"
                );
            }
        }
    }

    #[test]
    fn counts_match_product_formula() {
        for (n, m) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 2), (4, 4)] {
            assert_eq!(
                count_snc(n, m, SncFlags::NONE, ExecMode::Sequential) as u128,
                snc_count_formula(n, m),
                "(n, m) = ({n}, {m})"
            );
        }
    }

    #[test]
    fn kreweras_complement_stays_annular_non_crossing() {
        for (p, q) in snc_members(3, 2, SncFlags::NONE) {
            assert!(is_snc(&q, 3, 2), "complement of {p} is {q}");
            // Complementing twice conjugates by γ.
            let gamma = Perm::gamma_annulus(3, 2);
            let krkr = q.inverse().compose(&gamma);
            assert_eq!(krkr, gamma.inverse().compose(&p).compose(&gamma));
        }
    }

    #[test]
    fn parallel_scan_agrees_with_sequential() {
        for (n, m) in [(2, 2), (3, 3), (4, 3)] {
            let seq = count_snc(n, m, SncFlags::NONE, ExecMode::Sequential);
            let par = count_snc(n, m, SncFlags::NONE, ExecMode::Parallel);
            assert_eq!(seq, par);
            let members_via_scan: Vec<Perm> = scan(
                n,
                m,
                SncFlags::NONE,
                ExecMode::Parallel,
                Vec::new,
                |acc: &mut Vec<Perm>, p, _| acc.push(Perm::from_images(p.to_vec()).unwrap()),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            );
            let sequential: Vec<Perm> = snc_members(n, m, SncFlags::NONE)
                .into_iter()
                .map(|(p, _)| p)
                .collect();
            assert_eq!(members_via_scan, sequential, "canonical order preserved");
        }
    }
}
