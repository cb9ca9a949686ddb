//! Permutations of `{1, …, n}` in one-line (image table) form, cycle
//! manipulation, the geodesic partial order, and set partitions.
//!
//! Conventions used across the crate:
//! * points are 1-based `u32`s;
//! * composition acts right to left: `compose(p, q)` maps `i ↦ p(q(i))`;
//! * cycle notation is canonical: every cycle is rotated to start at its
//!   minimum and cycles are listed by increasing minimum, singletons
//!   included.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image table is not a bijection on 1..={0}")]
    NotBijective(u32),
    #[error("point {0} out of range 1..={1}")]
    OutOfRange(u32, u32),
    #[error("point {0} appears in two cycles")]
    DuplicatePoint(u32),
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation of `{1, …, n}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    /// `img[i - 1]` is the image of `i`.
    img: Vec<u32>,
}

impl Perm {
    pub fn identity(n: u32) -> Self {
        Perm {
            img: (1..=n).collect(),
        }
    }

    /// Builds a permutation from its image table (`img[i-1] = π(i)`).
    pub fn from_images(img: Vec<u32>) -> Result<Self, PermError> {
        let n = img.len() as u32;
        let mut seen = vec![false; img.len()];
        for &v in &img {
            if v == 0 || v > n {
                return Err(PermError::OutOfRange(v, n));
            }
            if seen[(v - 1) as usize] {
                return Err(PermError::NotBijective(n));
            }
            seen[(v - 1) as usize] = true;
        }
        Ok(Perm { img })
    }

    /// Builds a permutation of `{1, …, n}` from disjoint cycles; points not
    /// mentioned are fixed.
    pub fn from_cycles(n: u32, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut img: Vec<u32> = (1..=n).collect();
        let mut touched = vec![false; n as usize];
        for cycle in cycles {
            for k in 0..cycle.len() {
                let x = cycle[k];
                let y = cycle[(k + 1) % cycle.len()];
                if x == 0 || x > n {
                    return Err(PermError::OutOfRange(x, n));
                }
                if touched[(x - 1) as usize] {
                    return Err(PermError::DuplicatePoint(x));
                }
                touched[(x - 1) as usize] = true;
                img[(x - 1) as usize] = y;
            }
        }
        Perm::from_images(img)
    }

    /// The full cycle `(1, 2, …, n)`.
    pub fn gamma_n(n: u32) -> Self {
        let mut img: Vec<u32> = (2..=n).collect();
        img.push(1);
        Perm { img }
    }

    /// The two-circle rotation `(1, …, n)(n+1, …, n+m)`.
    pub fn gamma_annulus(n: u32, m: u32) -> Self {
        let mut img = Vec::with_capacity((n + m) as usize);
        for i in 1..=n {
            img.push(if i == n { 1 } else { i + 1 });
        }
        for i in n + 1..=n + m {
            img.push(if i == n + m { n + 1 } else { i + 1 });
        }
        Perm { img }
    }

    /// The interval pairing `(1,2)(3,4)⋯(n−1,n)`; `n` must be even.
    pub fn interval_pairing(n: u32) -> Self {
        assert!(n % 2 == 0, "interval pairing needs an even ground set");
        let mut img = Vec::with_capacity(n as usize);
        for i in 1..=n {
            img.push(if i % 2 == 1 { i + 1 } else { i - 1 });
        }
        Perm { img }
    }

    pub fn degree(&self) -> u32 {
        self.img.len() as u32
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.img[(i - 1) as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    /// `self ∘ other`: maps `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            img: other.img.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[(v - 1) as usize] = i as u32 + 1;
        }
        Perm { img }
    }

    /// `tau ∘ self ∘ tau⁻¹`.
    pub fn conjugate_by(&self, tau: &Perm) -> Perm {
        tau.compose(self).compose(&tau.inverse())
    }

    /// Cycles in canonical form: each rotated to start at its minimum,
    /// listed by increasing minimum, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n as usize];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[(start - 1) as usize] {
                continue;
            }
            let mut cycle = vec![start];
            seen[(start - 1) as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[(x - 1) as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> u32 {
        let n = self.degree();
        let mut seen = vec![false; n as usize];
        let mut count = 0;
        for start in 1..=n {
            if seen[(start - 1) as usize] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[(x - 1) as usize] {
                seen[(x - 1) as usize] = true;
                x = self.apply(x);
            }
        }
        count
    }

    /// Cycle lengths sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut t: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        t.sort_unstable_by(|x, y| y.cmp(x));
        t
    }

    /// Metric length `|π| = n − #(π)`, the minimal number of transpositions.
    pub fn length(&self) -> u32 {
        self.degree() - self.cycle_count()
    }

    pub fn is_pairing(&self) -> bool {
        (1..=self.degree()).all(|i| {
            let j = self.apply(i);
            j != i && self.apply(j) == i
        })
    }

    /// Restriction of the cyclic structure to `support`: `x` maps to the
    /// first element of `support` on the forward orbit `π(x), π²(x), …`.
    ///
    /// When `support` is a union of cycles this is the plain restriction;
    /// otherwise skipped points are spliced out, preserving cyclic order.
    pub fn restrict(&self, support: &[u32]) -> SupportPerm {
        let mut sorted: Vec<u32> = support.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let in_support = |x: u32| sorted.binary_search(&x).is_ok();
        let img = sorted
            .iter()
            .map(|&x| {
                let mut y = self.apply(x);
                while !in_support(y) {
                    y = self.apply(y);
                }
                y
            })
            .collect();
        SupportPerm {
            support: sorted,
            img,
        }
    }

    /// Geodesic partial order: `sigma ≤ self` iff every cycle of `sigma`
    /// lies inside a cycle of `self` and the restriction of `sigma` to each
    /// cycle `C` of `self` is non-crossing with respect to the cyclic order
    /// of `C`, i.e. `#(σ|_C) + #(σ|_C⁻¹ C) = |C| + 1`.
    pub fn leq(sigma: &Perm, pi: &Perm) -> bool {
        assert_eq!(sigma.degree(), pi.degree());
        for cycle in pi.cycles() {
            let sub = sigma.restrict(&cycle);
            // Containment: sigma must map the cycle's support to itself
            // pointwise (no skips may occur).
            for (idx, &x) in sub.support.iter().enumerate() {
                if sigma.apply(x) != sub.img[idx] {
                    return false;
                }
            }
            let k = cycle.len() as u32;
            let cyc = SupportPerm::from_cycle_sequence(&cycle);
            if sub.cycle_count() + sub.inverse().compose(&cyc).cycle_count() != k + 1 {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<u32>>, PermError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(PermError::Parse(s.to_string()));
    }
    let mut cycles = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let Some(inner) = rest.strip_prefix('(') else {
            return Err(PermError::Parse(s.to_string()));
        };
        let Some(close) = inner.find(')') else {
            return Err(PermError::Parse(s.to_string()));
        };
        let body = &inner[..close];
        if body.is_empty() {
            return Err(PermError::Parse(s.to_string()));
        }
        let cycle = body
            .split(',')
            .map(|tok| tok.parse::<u32>().map_err(|_| PermError::Parse(s.to_string())))
            .collect::<Result<Vec<u32>, _>>()?;
        if cycle.contains(&0) {
            return Err(PermError::Parse(s.to_string()));
        }
        cycles.push(cycle);
        rest = &inner[close + 1..];
    }
    Ok(cycles)
}

impl Perm {
    /// Parses cycle notation onto an explicit ground set `{1, …, n}`.
    pub fn parse_with_degree(s: &str, n: u32) -> Result<Perm, PermError> {
        let cycles = parse_cycles(s)?;
        Perm::from_cycles(n, &cycles)
    }
}

impl FromStr for Perm {
    type Err = PermError;

    /// Parses cycle notation; the degree is the largest point mentioned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cycles = parse_cycles(s)?;
        let n = cycles
            .iter()
            .flat_map(|c| c.iter().copied())
            .max()
            .ok_or_else(|| PermError::Parse(s.to_string()))?;
        Perm::from_cycles(n, &cycles)
    }
}

/// A permutation of an arbitrary support set, keeping original labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPerm {
    /// Sorted, deduplicated support.
    support: Vec<u32>,
    /// `img[k]` is the image of `support[k]`.
    img: Vec<u32>,
}

impl SupportPerm {
    /// The cyclic permutation `c₁ → c₂ → ⋯ → c_k → c₁` on the support
    /// `{c₁, …, c_k}` given as a sequence.
    pub fn from_cycle_sequence(cycle: &[u32]) -> Self {
        let mut pairs: Vec<(u32, u32)> = cycle
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, cycle[(i + 1) % cycle.len()]))
            .collect();
        pairs.sort_unstable();
        SupportPerm {
            support: pairs.iter().map(|&(x, _)| x).collect(),
            img: pairs.iter().map(|&(_, y)| y).collect(),
        }
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn apply(&self, x: u32) -> u32 {
        let k = self.support.binary_search(&x).expect("point in support");
        self.img[k]
    }

    pub fn compose(&self, other: &SupportPerm) -> SupportPerm {
        assert_eq!(self.support, other.support);
        SupportPerm {
            support: self.support.clone(),
            img: other.img.iter().map(|&y| self.apply(y)).collect(),
        }
    }

    pub fn inverse(&self) -> SupportPerm {
        let mut pairs: Vec<(u32, u32)> = self
            .support
            .iter()
            .zip(&self.img)
            .map(|(&x, &y)| (y, x))
            .collect();
        pairs.sort_unstable();
        SupportPerm {
            support: pairs.iter().map(|&(x, _)| x).collect(),
            img: pairs.iter().map(|&(_, y)| y).collect(),
        }
    }

    pub fn cycle_count(&self) -> u32 {
        let mut seen = vec![false; self.support.len()];
        let mut count = 0;
        for k in 0..self.support.len() {
            if seen[k] {
                continue;
            }
            count += 1;
            let mut pos = k;
            while !seen[pos] {
                seen[pos] = true;
                let y = self.img[pos];
                pos = self.support.binary_search(&y).unwrap();
            }
        }
        count
    }

    /// Cycles in canonical form, with original labels.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.support.len()];
        let mut out = Vec::new();
        for k in 0..self.support.len() {
            if seen[k] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut pos = k;
            while !seen[pos] {
                seen[pos] = true;
                cycle.push(self.support[pos]);
                pos = self.support.binary_search(&self.img[pos]).unwrap();
            }
            out.push(cycle);
        }
        out
    }
}

/// A set partition of `{1, …, n}` with canonically ordered blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: u32,
    /// Each block sorted; blocks ordered by minimum.
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    pub fn from_blocks(n: u32, blocks: Vec<Vec<u32>>) -> Result<Self, PermError> {
        let mut seen = vec![false; n as usize];
        let mut blocks: Vec<Vec<u32>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            for &x in b {
                if x == 0 || x > n {
                    return Err(PermError::OutOfRange(x, n));
                }
                if seen[(x - 1) as usize] {
                    return Err(PermError::DuplicatePoint(x));
                }
                seen[(x - 1) as usize] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(PermError::NotBijective(n));
        }
        blocks.sort_unstable();
        Ok(SetPartition { n, blocks })
    }

    /// The partition whose blocks are the cycles (orbits) of `pi`.
    pub fn from_perm(pi: &Perm) -> Self {
        let mut blocks: Vec<Vec<u32>> = pi
            .cycles()
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        blocks.sort_unstable();
        SetPartition {
            n: pi.degree(),
            blocks,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `x`.
    pub fn block_index(&self, x: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .expect("point in partition")
    }

    /// Lattice join (finest common coarsening).
    pub fn join(&self, other: &SetPartition) -> SetPartition {
        assert_eq!(self.n, other.n);
        let mut dsu = Dsu::new(self.n as usize);
        for part in [self, other] {
            for b in &part.blocks {
                for w in b.windows(2) {
                    dsu.union((w[0] - 1) as usize, (w[1] - 1) as usize);
                }
            }
        }
        let mut map: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for x in 1..=self.n {
            map.entry(dsu.find((x - 1) as usize)).or_default().push(x);
        }
        let mut blocks: Vec<Vec<u32>> = map.into_values().collect();
        blocks.sort_unstable();
        SetPartition { n: self.n, blocks }
    }

    /// Refinement order: every block of `self` is contained in a block of
    /// `other`.
    pub fn leq(&self, other: &SetPartition) -> bool {
        assert_eq!(self.n, other.n);
        self.blocks
            .iter()
            .all(|b| b[1..].iter().all(|&x| other.block_index(x) == other.block_index(b[0])))
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Small union-find used for partition joins and connectivity checks.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// Returns true when the two elements were in different classes.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

/// Kreweras complement on the disk: `π ↦ π⁻¹ (1, 2, …, n)`.
pub fn kreweras_disk(pi: &Perm) -> Perm {
    pi.inverse().compose(&Perm::gamma_n(pi.degree()))
}

/// Kreweras complement on the `(n, m)`-annulus: `π ↦ π⁻¹ γ_{n,m}`.
pub fn kreweras_annulus(pi: &Perm, n: u32, m: u32) -> Perm {
    assert_eq!(pi.degree(), n + m);
    pi.inverse().compose(&Perm::gamma_annulus(n, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn compose_is_right_to_left() {
        // I ∘ π for the interval pairing of degree 16 and a fixed annular
        // permutation; the product's cycle structure is pinned by hand.
        let pi = Perm::parse_with_degree("(1,3,8)(2)(4,5,7,16,9)(6)(10,11)(12,13)(14,15)", 16)
            .unwrap();
        let ipi = Perm::interval_pairing(16).compose(&pi);
        let expected =
            Perm::parse_with_degree("(2,1,4,6,5,8)(10,12,14,16)(3,7,15,13,11,9)", 16).unwrap();
        assert_eq!(ipi, expected);
    }

    #[test]
    fn kreweras_disk_example() {
        let pi = Perm::parse_with_degree("(1,3,6,7)(4,5)(8,10)(9)", 10).unwrap();
        let kr = kreweras_disk(&pi);
        assert_eq!(kr, Perm::parse_with_degree("(1,2)(3,5)(4)(6)(7,10)(8,9)", 10).unwrap());
        // Complementation formula: #(π) + #(Kr(π)) = n + 1 on the disk.
        assert_eq!(pi.cycle_count() + kr.cycle_count(), 10 + 1);
    }

    #[test]
    fn kreweras_annulus_example() {
        let pi = Perm::parse_with_degree("(2,3,8,6,1)(4,7)(5)", 8).unwrap();
        let kr = kreweras_annulus(&pi, 5, 3);
        assert_eq!(kr, Perm::parse_with_degree("(1)(2)(3,7)(4,5,6)(8)", 8).unwrap());
        // Annular geodesic condition: #(π) + #(π⁻¹γ) = n + m.
        assert_eq!(pi.cycle_count() + kr.cycle_count(), 8);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["(1,6,4)(2,3,5)", "(1,5,4)(2,3)(6)", "(1)(2)(3)(4)"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("( 1, 3 ) (2,4)"), p("(1,3)(2,4)"));
        assert!("(1,3)(2,".parse::<Perm>().is_err());
        assert!("(1,1)".parse::<Perm>().is_err());
        assert!("".parse::<Perm>().is_err());
    }

    #[test]
    fn restriction_skips_missing_points() {
        // γ_6 restricted to {1, 3, 4} is the 3-cycle 1 → 3 → 4 → 1.
        let gamma = Perm::gamma_n(6);
        let sub = gamma.restrict(&[4, 1, 3]);
        assert_eq!(sub.cycles(), vec![vec![1, 3, 4]]);
    }

    #[test]
    fn geodesic_order_examples() {
        let gamma3 = Perm::gamma_n(3);
        assert!(Perm::leq(&Perm::identity(3), &gamma3));
        assert!(Perm::leq(&p("(1,3)(2)"), &gamma3));
        assert!(Perm::leq(&gamma3, &gamma3));
        // A crossing pairing is not below the full cycle.
        let gamma4 = Perm::gamma_n(4);
        assert!(!Perm::leq(&Perm::parse_with_degree("(1,3)(2,4)", 4).unwrap(), &gamma4));
        assert!(Perm::leq(&Perm::parse_with_degree("(1,2)(3,4)", 4).unwrap(), &gamma4));
        // Not a refinement: (1,2) does not sit inside (1,3)(2)(4)'s cycles.
        assert!(!Perm::leq(
            &Perm::parse_with_degree("(1,2)", 4).unwrap(),
            &Perm::parse_with_degree("(1,3)", 4).unwrap()
        ));
    }

    #[test]
    fn partition_lattice_basics() {
        let pi = SetPartition::from_blocks(4, vec![vec![1, 3], vec![2], vec![4]]).unwrap();
        let rho = SetPartition::from_blocks(4, vec![vec![1], vec![3], vec![2, 4]]).unwrap();
        let join = pi.join(&rho);
        assert_eq!(
            join,
            SetPartition::from_blocks(4, vec![vec![1, 3], vec![2, 4]]).unwrap()
        );
        assert!(pi.leq(&join));
        assert!(rho.leq(&join));
        assert!(!join.is_full());
        assert!(join.join(&SetPartition::from_perm(&Perm::gamma_n(4))).is_full());
    }
}
