//! The indexing families behind the second-order formulas.
//!
//! All sizes are literal circle sizes: `family(J, 4, 2)` lives on the
//! `(4, 2)`-annulus. Families tied to the doubling construction (`J`, `A`,
//! `FE`, `FO`, `X`, `XE`, `K`, `spoke`) require both sizes to be even.
//!
//! * `nc` — non-crossing partitions of the disk (no inner circle).
//! * `snc` — annular non-crossing permutations.
//! * `psnc` — partitioned permutations: `snc` members plus disconnected
//!   pairs `NC(n) × NC(m)` carrying one marked cycle per circle.
//! * `J` — `π ∈ snc` with bipartite block graph whose complement `π⁻¹γ`
//!   separates the evens; indexes the connected part of the
//!   anti-commutator and commutator sums.
//! * `A` — admissible members of `J` (no flexible pair); `FE` / `FO` — the
//!   inadmissible members, split by the parity of the first flexible point.
//! * `X` / `XE` — marked disconnected pairs whose halves have connected
//!   bipartite graphs; `XE` keeps members all of whose cycles are even.
//! * `K` — the Kreweras complements of `J`: `σ ∈ snc` separating the
//!   evens with `G_{γσ⁻¹}` bipartite.
//! * `sncpar` — `snc` members whose cycles stay in one parity class;
//!   `nc2nonpar` — annular pairings with no parity-preserving pair.
//! * `spoke` — annular pairings whose parity-preserving pairs are exactly
//!   the through pairs and obey the rigid rotation closure.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::annular::{self, SncFlags};
use crate::nc_disk;
use crate::perm_core::Perm;
use crate::pi_graph::{self, PiGraph};
use crate::ExecMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    Nc,
    Snc,
    PsNc,
    J,
    A,
    Fe,
    Fo,
    X,
    Xe,
    K,
    SncPar,
    Nc2NonPar,
    Spoke,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyName::Nc => "nc",
            FamilyName::Snc => "snc",
            FamilyName::PsNc => "psnc",
            FamilyName::J => "J",
            FamilyName::A => "A",
            FamilyName::Fe => "FE",
            FamilyName::Fo => "FO",
            FamilyName::X => "X",
            FamilyName::Xe => "XE",
            FamilyName::K => "K",
            FamilyName::SncPar => "sncpar",
            FamilyName::Nc2NonPar => "nc2nonpar",
            FamilyName::Spoke => "spoke",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyName {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "nc" => FamilyName::Nc,
            "snc" => FamilyName::Snc,
            "psnc" => FamilyName::PsNc,
            "J" => FamilyName::J,
            "A" => FamilyName::A,
            "FE" => FamilyName::Fe,
            "FO" => FamilyName::Fo,
            "X" => FamilyName::X,
            "XE" => FamilyName::Xe,
            "K" => FamilyName::K,
            "sncpar" => FamilyName::SncPar,
            "nc2nonpar" => FamilyName::Nc2NonPar,
            "spoke" => FamilyName::Spoke,
            other => return Err(FamilyError::UnknownFamily(other.to_string())),
        })
    }
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family} needs even circle sizes, got ({n}, {m})")]
    OddSizes { family: FamilyName, n: u32, m: u32 },
    #[error("family {family} needs points on both circles")]
    NeedsAnnulus { family: FamilyName },
    #[error("family {family} lives on the disk and takes no inner size")]
    DiskOnly { family: FamilyName },
    #[error("({n}, {m}) exceeds the bound for family {family} (total points ≤ {bound})")]
    SizeBound {
        family: FamilyName,
        n: u32,
        m: u32,
        bound: u32,
    },
}

/// A family member: a permutation, optionally carrying one marked cycle on
/// each circle; the marked cycles are merged into a single block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyMember {
    pub pi: Perm,
    /// Marked cycles `(C₁ ⊆ outer, C₂ ⊆ inner)` for partitioned members.
    pub merged: Option<(Vec<u32>, Vec<u32>)>,
}

impl FamilyMember {
    pub fn plain(pi: Perm) -> FamilyMember {
        FamilyMember { pi, merged: None }
    }

    /// The block structure: cycles of `pi` as sorted sets, with the marked
    /// pair merged into one block.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut blocks: Vec<Vec<u32>> = self
            .pi
            .cycles()
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if let Some((c1, c2)) = &self.merged {
            let mut sets: Vec<Vec<u32>> = Vec::new();
            for marked in [c1, c2] {
                let mut s = marked.clone();
                s.sort_unstable();
                let pos = blocks.iter().position(|b| *b == s).expect("marked cycle");
                sets.push(blocks.remove(pos));
            }
            let mut merged: Vec<u32> = sets.concat();
            merged.sort_unstable();
            blocks.push(merged);
        }
        blocks.sort_unstable();
        blocks
    }
}

impl fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.merged {
            None => write!(f, "{}", self.pi),
            Some((c1, c2)) => {
                let cycle = |c: &[u32]| {
                    let parts: Vec<String> = c.iter().map(u32::to_string).collect();
                    format!("({})", parts.join(","))
                };
                write!(f, "pi={} merged={}+{}", self.pi, cycle(c1), cycle(c2))
            }
        }
    }
}

/// A fully materialized family.
#[derive(Debug, Clone)]
pub struct IndexFamily {
    pub name: FamilyName,
    pub n: u32,
    pub m: u32,
    pub members: Vec<FamilyMember>,
}

impl IndexFamily {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&serde_json::json!({
            "family": self.name.to_string(),
            "n": self.n,
            "m": self.m,
            "count": self.members.len(),
            "members": self.members.iter().map(member_json).collect::<Vec<_>>(),
        }))
        .expect("serializable")
    }
}

pub fn member_json(member: &FamilyMember) -> serde_json::Value {
    match &member.merged {
        None => serde_json::Value::String(member.pi.to_string()),
        Some((c1, c2)) => serde_json::json!({
            "pi": member.pi.to_string(),
            "A": c1,
            "B": c2,
        }),
    }
}

/// Materialization bound (total points) for [`family`].
fn materialize_bound(name: FamilyName) -> u32 {
    match name {
        FamilyName::Nc => 12,
        FamilyName::Snc | FamilyName::PsNc | FamilyName::SncPar => 10,
        FamilyName::J | FamilyName::A | FamilyName::Fe | FamilyName::Fo | FamilyName::K => 12,
        FamilyName::X | FamilyName::Xe => 12,
        FamilyName::Nc2NonPar => 12,
        FamilyName::Spoke => 24,
    }
}

/// Streaming bound (total points) for [`for_each_member`] and
/// [`family_count`].
fn stream_bound(name: FamilyName) -> u32 {
    match name {
        FamilyName::Nc => 16,
        FamilyName::Snc | FamilyName::PsNc | FamilyName::SncPar => 12,
        FamilyName::J | FamilyName::A | FamilyName::Fe | FamilyName::Fo | FamilyName::K => 16,
        FamilyName::X | FamilyName::Xe => 16,
        FamilyName::Nc2NonPar => 14,
        FamilyName::Spoke => 48,
    }
}

fn check(name: FamilyName, n: u32, m: u32, bound: u32) -> Result<(), FamilyError> {
    if name == FamilyName::Nc {
        if m != 0 {
            return Err(FamilyError::DiskOnly { family: name });
        }
        if n == 0 || n > bound {
            return Err(FamilyError::SizeBound {
                family: name,
                n,
                m,
                bound,
            });
        }
        return Ok(());
    }
    if n == 0 || m == 0 {
        return Err(FamilyError::NeedsAnnulus { family: name });
    }
    let even_only = matches!(
        name,
        FamilyName::J
            | FamilyName::A
            | FamilyName::Fe
            | FamilyName::Fo
            | FamilyName::X
            | FamilyName::Xe
            | FamilyName::K
            | FamilyName::Spoke
    );
    if even_only && (n % 2 != 0 || m % 2 != 0) {
        return Err(FamilyError::OddSizes { family: name, n, m });
    }
    if n + m > bound {
        return Err(FamilyError::SizeBound {
            family: name,
            n,
            m,
            bound,
        });
    }
    Ok(())
}

/// Membership predicate for `J`: annular non-crossing, bipartite block
/// graph, complement separates the evens.
pub fn is_j_member(pi: &Perm, n: u32, m: u32) -> bool {
    annular::is_snc(pi, n, m)
        && PiGraph::from_perm(pi).is_bipartite()
        && annular::flags_hold(
            &pi.inverse().compose(&Perm::gamma_annulus(n, m)),
            SncFlags {
                sep_even: true,
                ..SncFlags::NONE
            },
        )
}

/// Membership predicate for `K`: annular non-crossing, separates the
/// evens, and `G_{γσ⁻¹}` is bipartite.
pub fn is_k_member(sigma: &Perm, n: u32, m: u32) -> bool {
    annular::is_snc(sigma, n, m)
        && annular::flags_hold(
            sigma,
            SncFlags {
                sep_even: true,
                ..SncFlags::NONE
            },
        )
        && PiGraph::from_perm(&Perm::gamma_annulus(n, m).compose(&sigma.inverse())).is_bipartite()
}

/// Reconstructs the `J`-member from one survivor of the complement-side
/// scan: given the image table of a separating `σ ∈ S_NC(n, m)`, returns
/// `(π, σ)` with `π = γσ⁻¹` when `G_π` is bipartite.
pub(crate) fn j_from_sigma_images(sigma_img: &[u32], n: u32, m: u32) -> Option<(Perm, Perm)> {
    let sigma = Perm::from_images(sigma_img.to_vec()).expect("valid image table");
    let pi = Perm::gamma_annulus(n, m).compose(&sigma.inverse());
    if PiGraph::from_perm(&pi).is_bipartite() {
        Some((pi, sigma))
    } else {
        None
    }
}

/// The complement-side scan flags for `J`/`K`: both conditions are
/// necessary for membership, so pruning with them is exact.
pub(crate) const K_SIDE_FLAGS: SncFlags = SncFlags {
    sep_even: true,
    pure_parity: false,
    pairs_only: false,
    odd_cycles_even_len: true,
};

/// Visits `(π, σ = π⁻¹γ)` for every `π ∈ J(n, m)`, via the complement-side
/// scan (enumerate separating `σ`, keep bipartite `γσ⁻¹`).
pub fn for_each_j<F: FnMut(&Perm, &Perm)>(n: u32, m: u32, f: &mut F) {
    annular::for_each_snc(n, m, K_SIDE_FLAGS, &mut |sigma_img, _| {
        if let Some((pi, sigma)) = j_from_sigma_images(sigma_img, n, m) {
            f(&pi, &sigma);
        }
    });
}

/// First-order analogue of `X`: non-crossing partitions of `{1, …, k}`
/// whose block graph is connected and bipartite.
pub fn first_order_x_list(k: u32) -> Vec<Perm> {
    let mut out = Vec::new();
    nc_disk::for_each_nc(k, &mut |pi| {
        let g = PiGraph::from_perm(pi);
        if g.is_connected() && g.is_bipartite() {
            out.push(pi.clone());
        }
    });
    out
}

fn shift_perm(pi: &Perm, offset: u32, degree: u32) -> Perm {
    let cycles: Vec<Vec<u32>> = pi
        .cycles()
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + offset).collect())
        .collect();
    Perm::from_cycles(degree, &cycles).expect("shifted cycles are disjoint")
}

fn product_perm(p1: &Perm, p2: &Perm) -> Perm {
    let n = p1.degree();
    let t = n + p2.degree();
    let mut cycles = p1.cycles();
    cycles.extend(shift_perm(p2, n, t).cycles().into_iter().filter(|c| c[0] > n));
    Perm::from_cycles(t, &cycles).expect("disjoint supports")
}

/// Visits every `X(n, m)` member (`even_only` further restricts to `XE`).
fn for_each_x<F: FnMut(FamilyMember)>(n: u32, m: u32, even_only: bool, f: &mut F) {
    let all_even = |pi: &Perm| pi.cycles().iter().all(|c| c.len() % 2 == 0);
    let xs1: Vec<Perm> = first_order_x_list(n)
        .into_iter()
        .filter(|p| !even_only || all_even(p))
        .collect();
    let xs2: Vec<Perm> = first_order_x_list(m)
        .into_iter()
        .filter(|p| !even_only || all_even(p))
        .collect();
    for p1 in &xs1 {
        for p2 in &xs2 {
            let pi = product_perm(p1, p2);
            let cycles1 = p1.cycles();
            let cycles2: Vec<Vec<u32>> = p2
                .cycles()
                .into_iter()
                .map(|c| c.into_iter().map(|x| x + n).collect())
                .collect();
            for c1 in &cycles1 {
                for c2 in &cycles2 {
                    f(FamilyMember {
                        pi: pi.clone(),
                        merged: Some((c1.clone(), c2.clone())),
                    });
                }
            }
        }
    }
}

/// Visits every member of the spoke family on the `(n, m)`-annulus.
///
/// Members are built by choosing `k ≥ 1` outer interval pairs
/// `(2s, γ(2s))`, `k` inner interval pairs, and one of the `k` rotations
/// aligning them; the chosen pairs split into through pairs forced by the
/// closure `(u, v) ↦ (γ_B(u), γ_B⁻¹(v))`, the rest stay as interval pairs.
pub fn for_each_spoke<F: FnMut(Perm)>(n: u32, m: u32, f: &mut F) {
    let t = n + m;
    let gamma = Perm::gamma_annulus(n, m);
    let outer_pairs = n / 2;
    let inner_pairs = m / 2;
    for k in 1..=outer_pairs.min(inner_pairs) {
        for s_choice in (1..=outer_pairs).combinations(k as usize) {
            for t_choice in (1..=inner_pairs).combinations(k as usize) {
                let outer_evens: Vec<u32> = s_choice.iter().map(|&s| 2 * s).collect();
                let inner_evens: Vec<u32> = t_choice.iter().map(|&w| n + 2 * w).collect();
                let mut support: Vec<u32> = Vec::with_capacity(4 * k as usize);
                for &e in outer_evens.iter().chain(&inner_evens) {
                    support.push(e);
                    support.push(gamma.apply(e));
                }
                let gb = gamma.restrict(&support);
                let gb_inv = gb.inverse();
                for anchor in 0..k as usize {
                    let mut cycles: Vec<Vec<u32>> = Vec::with_capacity((t / 2) as usize);
                    let start = (outer_evens[0], inner_evens[anchor]);
                    let (mut u, mut v) = start;
                    loop {
                        cycles.push(vec![u, v]);
                        u = gb.apply(u);
                        v = gb_inv.apply(v);
                        if (u, v) == start {
                            break;
                        }
                    }
                    debug_assert_eq!(cycles.len(), 2 * k as usize);
                    for s in 1..=outer_pairs {
                        if !s_choice.contains(&s) {
                            cycles.push(vec![2 * s, gamma.apply(2 * s)]);
                        }
                    }
                    for w in 1..=inner_pairs {
                        if !t_choice.contains(&w) {
                            cycles.push(vec![n + 2 * w, gamma.apply(n + 2 * w)]);
                        }
                    }
                    f(Perm::from_cycles(t, &cycles).expect("pairs are disjoint"));
                }
            }
        }
    }
}

/// Spoke membership predicate, independent of the generator: an annular
/// non-crossing pairing whose pairs preserve parity exactly when they
/// cross circles, whose same-circle pairs are `(even, γ(even))`, and whose
/// through pairs obey the rotation closure.
pub fn is_spoke(pi: &Perm, n: u32, m: u32) -> bool {
    if !pi.is_pairing() || !annular::is_snc(pi, n, m) {
        return false;
    }
    let gamma = Perm::gamma_annulus(n, m);
    let t = n + m;
    let mut through: Vec<u32> = Vec::new();
    for i in 1..=t {
        let j = pi.apply(i);
        let crossing = (i <= n) != (j <= n);
        let parity_preserving = i % 2 == j % 2;
        if crossing != parity_preserving {
            return false;
        }
        if crossing {
            through.push(i);
        } else if !(i % 2 == 0 && gamma.apply(i) == j) && !(j % 2 == 0 && gamma.apply(j) == i) {
            return false;
        }
    }
    if through.is_empty() {
        return false;
    }
    let gb = gamma.restrict(&through);
    let gb_inv = gb.inverse();
    for &u in &through {
        let v = pi.apply(u);
        if pi.apply(gb.apply(u)) != gb_inv.apply(v) {
            return false;
        }
    }
    true
}

/// Streams the members of a family in deterministic generation order.
pub fn for_each_member<F: FnMut(FamilyMember)>(
    name: FamilyName,
    n: u32,
    m: u32,
    f: &mut F,
) -> Result<(), FamilyError> {
    check(name, n, m, stream_bound(name))?;
    match name {
        FamilyName::Nc => {
            nc_disk::for_each_nc(n, &mut |pi| f(FamilyMember::plain(pi.clone())));
        }
        FamilyName::Snc => {
            annular::for_each_snc(n, m, SncFlags::NONE, &mut |p, _| {
                f(FamilyMember::plain(
                    Perm::from_images(p.to_vec()).expect("valid image table"),
                ));
            });
        }
        FamilyName::SncPar => {
            let flags = SncFlags {
                pure_parity: true,
                ..SncFlags::NONE
            };
            annular::for_each_snc(n, m, flags, &mut |p, _| {
                f(FamilyMember::plain(
                    Perm::from_images(p.to_vec()).expect("valid image table"),
                ));
            });
        }
        FamilyName::Nc2NonPar => {
            let flags = SncFlags {
                pairs_only: true,
                ..SncFlags::NONE
            };
            annular::for_each_snc(n, m, flags, &mut |p, _| {
                let pi = Perm::from_images(p.to_vec()).expect("valid image table");
                let non_par = pi.cycles().iter().all(|c| c[0] % 2 != c[1] % 2);
                if non_par {
                    f(FamilyMember::plain(pi));
                }
            });
        }
        FamilyName::PsNc => {
            annular::for_each_snc(n, m, SncFlags::NONE, &mut |p, _| {
                f(FamilyMember::plain(
                    Perm::from_images(p.to_vec()).expect("valid image table"),
                ));
            });
            let outer = nc_disk::nc_list(n);
            let inner = nc_disk::nc_list(m);
            for p1 in &outer {
                for p2 in &inner {
                    let pi = product_perm(p1, p2);
                    for c1 in p1.cycles() {
                        for c2 in p2.cycles() {
                            let shifted: Vec<u32> = c2.iter().map(|&x| x + n).collect();
                            f(FamilyMember {
                                pi: pi.clone(),
                                merged: Some((c1.clone(), shifted)),
                            });
                        }
                    }
                }
            }
        }
        FamilyName::J => {
            for_each_j(n, m, &mut |pi, _| f(FamilyMember::plain(pi.clone())));
        }
        FamilyName::K => {
            for_each_j(n, m, &mut |_, sigma| f(FamilyMember::plain(sigma.clone())));
        }
        FamilyName::A => {
            for_each_j(n, m, &mut |pi, _| {
                if pi_graph::is_admissible(pi) {
                    f(FamilyMember::plain(pi.clone()));
                }
            });
        }
        FamilyName::Fe | FamilyName::Fo => {
            let want_even = name == FamilyName::Fe;
            for_each_j(n, m, &mut |pi, _| {
                if let Some(fp) = pi_graph::first_flexible(pi, n) {
                    if (fp % 2 == 0) == want_even {
                        f(FamilyMember::plain(pi.clone()));
                    }
                }
            });
        }
        FamilyName::X => for_each_x(n, m, false, f),
        FamilyName::Xe => for_each_x(n, m, true, f),
        FamilyName::Spoke => {
            for_each_spoke(n, m, &mut |pi| f(FamilyMember::plain(pi)));
        }
    }
    Ok(())
}

/// Materializes a family, sorted canonically.
pub fn family(name: FamilyName, n: u32, m: u32) -> Result<IndexFamily, FamilyError> {
    check(name, n, m, materialize_bound(name))?;
    let mut members = Vec::new();
    for_each_member(name, n, m, &mut |member| members.push(member))?;
    members.sort_unstable();
    Ok(IndexFamily {
        name,
        n,
        m,
        members,
    })
}

/// Streaming member count; the scan-backed families fan out in parallel
/// under `ExecMode::Parallel`.
pub fn family_count(
    name: FamilyName,
    n: u32,
    m: u32,
    mode: ExecMode,
) -> Result<u64, FamilyError> {
    check(name, n, m, stream_bound(name))?;
    let count_scan = |flags: SncFlags, filter: &(dyn Fn(&[u32], &[u32]) -> bool + Sync)| -> u64 {
        annular::scan(
            n,
            m,
            flags,
            mode,
            || 0u64,
            |c, p, q| {
                if filter(p, q) {
                    *c += 1;
                }
            },
            |a, b| a + b,
        )
    };
    Ok(match name {
        FamilyName::Snc => count_scan(SncFlags::NONE, &|_, _| true),
        FamilyName::SncPar => count_scan(
            SncFlags {
                pure_parity: true,
                ..SncFlags::NONE
            },
            &|_, _| true,
        ),
        FamilyName::Nc2NonPar => count_scan(
            SncFlags {
                pairs_only: true,
                ..SncFlags::NONE
            },
            &|p, _| (1..=p.len() as u32).all(|i| i % 2 != p[(i - 1) as usize] % 2),
        ),
        FamilyName::J | FamilyName::K => {
            count_scan(K_SIDE_FLAGS, &|p, _| j_from_sigma_images(p, n, m).is_some())
        }
        FamilyName::A => count_scan(K_SIDE_FLAGS, &|p, _| {
            j_from_sigma_images(p, n, m)
                .is_some_and(|(pi, _)| pi_graph::is_admissible(&pi))
        }),
        FamilyName::Fe | FamilyName::Fo => {
            let want_even = name == FamilyName::Fe;
            count_scan(K_SIDE_FLAGS, &|p, _| {
                j_from_sigma_images(p, n, m).is_some_and(|(pi, _)| {
                    pi_graph::first_flexible(&pi, n)
                        .is_some_and(|fp| (fp % 2 == 0) == want_even)
                })
            })
        }
        _ => {
            let mut c = 0u64;
            for_each_member(name, n, m, &mut |_| c += 1)?;
            c
        }
    })
}

/// Pinned non-members whose exclusion is structurally meaningful: each
/// satisfies every cheap necessary condition of its family yet fails
/// membership. They are re-checked by the test suite.
pub struct CounterExample {
    pub family: FamilyName,
    pub n: u32,
    pub m: u32,
    pub member: &'static str,
    pub reason: &'static str,
}

pub fn counter_examples() -> Vec<CounterExample> {
    vec![
        CounterExample {
            family: FamilyName::K,
            n: 2,
            m: 2,
            member: "(1,3)(2)(4)",
            reason: "separates the evens and its all-odd cycle has even length, \
                     but γσ⁻¹ = (1,4,3,2) is a single block carrying two loop \
                     edges, so the block graph is not bipartite",
        },
        CounterExample {
            family: FamilyName::K,
            n: 4,
            m: 4,
            member: "(1,8)(2,7)(3,5,6)(4)",
            reason: "separates the evens with no all-odd cycle, but \
                     γσ⁻¹ = (1,5,4)(2,8)(3,7)(6) has a triangle in its block \
                     graph, so the graph is not bipartite",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_4_2_has_fourteen_members() {
        let fam = family(FamilyName::J, 4, 2).unwrap();
        assert_eq!(fam.count(), 14);
        for member in &fam.members {
            assert!(is_j_member(&member.pi, 4, 2), "{}", member.pi);
        }
    }

    #[test]
    fn j_2_2_is_the_single_crossing_pairing() {
        let fam = family(FamilyName::J, 2, 2).unwrap();
        assert_eq!(fam.count(), 1);
        assert_eq!(fam.members[0].pi.to_string(), "(1,3)(2,4)");
    }

    #[test]
    fn j_scan_agrees_with_predicate_filter() {
        for (n, m) in [(2, 2), (4, 2), (2, 4), (4, 4)] {
            let scanned: std::collections::BTreeSet<Perm> = family(FamilyName::J, n, m)
                .unwrap()
                .members
                .into_iter()
                .map(|mb| mb.pi)
                .collect();
            let mut filtered = std::collections::BTreeSet::new();
            annular::for_each_snc(n, m, SncFlags::NONE, &mut |p, _| {
                let pi = Perm::from_images(p.to_vec()).unwrap();
                if is_j_member(&pi, n, m) {
                    filtered.insert(pi);
                }
            });
            assert_eq!(scanned, filtered, "(n, m) = ({n}, {m})");
        }
    }

    #[test]
    fn k_is_the_kreweras_complement_of_j() {
        for (n, m) in [(2, 2), (4, 2), (4, 4)] {
            let k_members: std::collections::BTreeSet<Perm> = family(FamilyName::K, n, m)
                .unwrap()
                .members
                .into_iter()
                .map(|mb| mb.pi)
                .collect();
            let mut complements = std::collections::BTreeSet::new();
            for_each_j(n, m, &mut |_, sigma| {
                complements.insert(sigma.clone());
            });
            assert_eq!(k_members, complements);
            for sigma in &k_members {
                assert!(is_k_member(sigma, n, m));
            }
        }
    }

    #[test]
    fn x_merge_counts() {
        // One bipartite-connected half on each circle at (2, 2), with two
        // singleton cycles each: four marked combinations.
        let fam = family(FamilyName::X, 2, 2).unwrap();
        assert_eq!(fam.count(), 4);
        // (4, 2): the five bipartite-connected members of NC(4) carry
        // 2 + 3 + 3 + 3 + 3 = 14 outer cycles, times two inner choices.
        let fam = family(FamilyName::X, 4, 2).unwrap();
        assert_eq!(fam.count(), 28);
        for member in &fam.members {
            let g = PiGraph::from_blocks(&member.blocks(), 6);
            assert!(g.is_connected() && g.is_bipartite(), "{member}");
        }
    }

    #[test]
    fn xe_members_at_4_4() {
        let fam = family(FamilyName::Xe, 4, 4).unwrap();
        assert_eq!(fam.count(), 4);
        for member in &fam.members {
            assert!(member.pi.cycles().iter().all(|c| c.len() % 2 == 0));
        }
        // Empty when either halved size is odd.
        assert_eq!(family(FamilyName::Xe, 2, 2).unwrap().count(), 0);
        assert_eq!(family(FamilyName::Xe, 2, 4).unwrap().count(), 0);
        assert_eq!(family(FamilyName::Xe, 6, 4).unwrap().count(), 0);
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(family_count(FamilyName::A, 2, 2, ExecMode::Sequential).unwrap(), 1);
        assert_eq!(family_count(FamilyName::A, 4, 2, ExecMode::Sequential).unwrap(), 2);
        assert_eq!(family_count(FamilyName::A, 4, 4, ExecMode::Sequential).unwrap(), 20);
        let a42 = family(FamilyName::A, 4, 2).unwrap();
        let got: Vec<String> = a42.members.iter().map(|mb| mb.pi.to_string()).collect();
        assert_eq!(got, vec!["(1,5,4)(2,3,6)", "(1,6,4)(2,3,5)"]);
    }

    #[test]
    fn j_splits_into_a_fe_fo() {
        for (n, m) in [(2, 2), (4, 2), (4, 4), (6, 2)] {
            let j = family_count(FamilyName::J, n, m, ExecMode::Sequential).unwrap();
            let a = family_count(FamilyName::A, n, m, ExecMode::Sequential).unwrap();
            let fe = family_count(FamilyName::Fe, n, m, ExecMode::Sequential).unwrap();
            let fo = family_count(FamilyName::Fo, n, m, ExecMode::Sequential).unwrap();
            assert_eq!(j, a + fe + fo, "(n, m) = ({n}, {m})");
            assert_eq!(fe, fo, "cancelling halves must balance at ({n}, {m})");
        }
    }

    #[test]
    fn spoke_counts_match_the_closed_formula() {
        let binom = |a: u64, b: u64| -> u64 {
            let mut r = 1u64;
            for k in 0..b {
                r = r * (a - k) / (k + 1);
            }
            r
        };
        for (n, m) in [(2, 2), (4, 2), (4, 4), (6, 2), (6, 4), (6, 6), (8, 4)] {
            let (cap_n, cap_m) = (n / 2, m / 2);
            let expect: u64 = (1..=cap_n.min(cap_m))
                .map(|k| k as u64 * binom(cap_n as u64, k as u64) * binom(cap_m as u64, k as u64))
                .sum();
            let got = family_count(FamilyName::Spoke, n, m, ExecMode::Sequential).unwrap();
            assert_eq!(got, expect, "(n, m) = ({n}, {m})");
        }
    }

    #[test]
    fn spoke_generator_agrees_with_predicate() {
        for (n, m) in [(2, 2), (4, 2), (4, 4), (6, 2), (6, 4)] {
            let generated: std::collections::BTreeSet<Perm> = family(FamilyName::Spoke, n, m)
                .unwrap()
                .members
                .into_iter()
                .map(|mb| mb.pi)
                .collect();
            let mut filtered = std::collections::BTreeSet::new();
            let flags = SncFlags {
                pairs_only: true,
                ..SncFlags::NONE
            };
            annular::for_each_snc(n, m, flags, &mut |p, _| {
                let pi = Perm::from_images(p.to_vec()).unwrap();
                if is_spoke(&pi, n, m) {
                    filtered.insert(pi);
                }
            });
            assert_eq!(generated, filtered, "(n, m) = ({n}, {m})");
        }
    }

    #[test]
    fn all_through_spokes_on_the_square_annulus() {
        // With every pair a through pair the count drops to n/2, and the
        // smallest case has exactly two members.
        for n in [2u32, 4, 6, 8] {
            let all_through: Vec<Perm> = family(FamilyName::Spoke, n, n)
                .unwrap()
                .members
                .into_iter()
                .map(|mb| mb.pi)
                .filter(|pi| {
                    pi.cycles()
                        .iter()
                        .all(|c| (c[0] <= n) != (c[1] <= n))
                })
                .collect();
            assert_eq!(all_through.len() as u32, n / 2, "n = {n}");
        }
    }

    #[test]
    fn psnc_1_1_has_two_members() {
        let fam = family(FamilyName::PsNc, 1, 1).unwrap();
        assert_eq!(fam.count(), 2);
        assert_eq!(fam.members[0].pi.to_string(), "(1)(2)");
        assert!(fam.members[0].merged.is_some());
        assert_eq!(fam.members[1].pi.to_string(), "(1,2)");
        assert!(fam.members[1].merged.is_none());
    }

    #[test]
    fn counter_examples_fail_membership_for_the_stated_reason() {
        for ce in counter_examples() {
            let sigma = Perm::parse_with_degree(ce.member, ce.n + ce.m).unwrap();
            assert!(annular::is_snc(&sigma, ce.n, ce.m), "{}", ce.member);
            assert!(
                annular::flags_hold(&sigma, K_SIDE_FLAGS),
                "necessary conditions must hold for {}",
                ce.member
            );
            assert!(!is_k_member(&sigma, ce.n, ce.m), "{}", ce.member);
            let pi = Perm::gamma_annulus(ce.n, ce.m).compose(&sigma.inverse());
            assert!(!PiGraph::from_perm(&pi).is_bipartite(), "{}", ce.member);
        }
    }

    #[test]
    fn counter_example_complements_match_pinned_values() {
        let sigma = Perm::parse_with_degree("(1,3)(2)(4)", 4).unwrap();
        let pi = Perm::gamma_annulus(2, 2).compose(&sigma.inverse());
        assert_eq!(pi, Perm::parse_with_degree("(1,4,3,2)", 4).unwrap());
        let sigma = Perm::parse_with_degree("(1,8)(2,7)(3,5,6)(4)", 8).unwrap();
        let pi = Perm::gamma_annulus(4, 4).compose(&sigma.inverse());
        assert_eq!(pi, Perm::parse_with_degree("(1,5,4)(2,8)(3,7)(6)", 8).unwrap());
    }

    #[test]
    fn bounds_and_parity_are_enforced() {
        assert!(matches!(
            family(FamilyName::J, 3, 2),
            Err(FamilyError::OddSizes { .. })
        ));
        assert!(matches!(
            family(FamilyName::Snc, 10, 4),
            Err(FamilyError::SizeBound { .. })
        ));
        assert!(matches!(
            family(FamilyName::Nc, 4, 2),
            Err(FamilyError::DiskOnly { .. })
        ));
        assert!(matches!(
            family(FamilyName::Snc, 4, 0),
            Err(FamilyError::NeedsAnnulus { .. })
        ));
    }
}
