//! The multigraph attached to a partition of `{1, …, 2k}`: one vertex per
//! block, and for every consecutive pair `(2i−1, 2i)` an edge joining the
//! blocks containing its two points.
//!
//! Connectivity of this graph detects `π ∨ (1,2)(3,4)⋯ = 1`; bipartiteness
//! yields the two-coloring behind the `ε`-tuples that route each block of a
//! summand to the variable `a` or `b`, and bridges are the "flexible"
//! consecutive pairs whose members cancel out of the commutator sum.

use crate::perm_core::Perm;

/// Multigraph on the blocks of a partition; loops and parallel edges are
/// kept, since both are structurally meaningful (a loop kills
/// bipartiteness, a parallel edge kills bridge-ness).
#[derive(Debug, Clone)]
pub struct PiGraph {
    /// `block_of[x - 1]` is the vertex holding point `x`.
    block_of: Vec<usize>,
    /// Edge `i` joins the blocks of `2i+1` and `2i+2` (0-based pair index).
    edges: Vec<(usize, usize)>,
    num_vertices: usize,
}

impl PiGraph {
    /// Builds the graph from explicit blocks covering `{1, …, points}`;
    /// `points` must be even.
    pub fn from_blocks(blocks: &[Vec<u32>], points: u32) -> PiGraph {
        assert!(points % 2 == 0, "pair edges need an even ground set");
        let mut block_of = vec![usize::MAX; points as usize];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                block_of[(x - 1) as usize] = b;
            }
        }
        assert!(
            block_of.iter().all(|&b| b != usize::MAX),
            "blocks must cover the ground set"
        );
        let edges = (0..points / 2)
            .map(|i| {
                (
                    block_of[(2 * i) as usize],
                    block_of[(2 * i + 1) as usize],
                )
            })
            .collect();
        PiGraph {
            block_of,
            edges,
            num_vertices: blocks.len(),
        }
    }

    /// Graph of the cycles of a permutation.
    pub fn from_perm(pi: &Perm) -> PiGraph {
        PiGraph::from_blocks(&pi.cycles(), pi.degree())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_of_point(&self, x: u32) -> usize {
        self.block_of[(x - 1) as usize]
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for (eid, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, eid));
            if u != v {
                adj[v].push((u, eid));
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == self.num_vertices
    }

    /// Two-coloring of the vertices, or `None` if some cycle is odd (loops
    /// included). Deterministic anchoring: each component is rooted at its
    /// smallest vertex index with color `false`, so the block containing
    /// point 1 always gets color `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut color: Vec<Option<bool>> = vec![None; self.num_vertices];
        for root in 0..self.num_vertices {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &(v, _) in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) => {
                            if cv == cu {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Bridge flags per edge index. A loop or an edge with a parallel twin
    /// is never a bridge.
    pub fn bridges(&self) -> Vec<bool> {
        let adj = self.adjacency();
        let n = self.num_vertices;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut out = vec![false; self.edges.len()];
        let mut timer = 0usize;
        // Iterative DFS; (vertex, entering edge, adjacency cursor).
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(&mut (u, in_edge, ref mut cursor)) = stack.last_mut() {
                if *cursor < adj[u].len() {
                    let (v, eid) = adj[u][*cursor];
                    *cursor += 1;
                    if eid == in_edge {
                        continue;
                    }
                    if disc[v] != usize::MAX {
                        low[u] = low[u].min(disc[v]);
                    } else {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        stack.push((v, eid, 0));
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (parent, _, _)) = stack.last_mut() {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            out[in_edge] = true;
                        }
                    }
                }
            }
        }
        out
    }
}

/// One of the two admissible variable-routing tuples of a bipartite,
/// connected block graph. Entry `i` says where pair `(2i−1, 2i)` points:
/// `false` renders as `1` (the odd point `2i−1` lies in the distinguished
/// class `A`), `true` renders as `∗` (the even point `2i` lies in `A`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon {
    stars: Vec<bool>,
    a_set: Vec<u32>,
    sign: i32,
}

impl Epsilon {
    pub fn stars(&self) -> &[bool] {
        &self.stars
    }

    /// The distinguished class `A(ε)` as a sorted point set.
    pub fn a_set(&self) -> &[u32] {
        &self.a_set
    }

    /// `s(ε) = (−1)^{#evens in A(ε)}`.
    pub fn sign(&self) -> i32 {
        self.sign
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, &star) in self.stars.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if star { "*" } else { "1" })?;
        }
        write!(f, ")")
    }
}

/// The two valid tuples for a connected bipartite block structure, the
/// first normalized so that `1 ∈ A(ε)`. Returns `None` when the graph is
/// not bipartite or not connected (in which case no tuple, or more than
/// two, would be valid).
pub fn epsilon_pair(blocks: &[Vec<u32>], points: u32) -> Option<(Epsilon, Epsilon)> {
    let graph = PiGraph::from_blocks(blocks, points);
    if !graph.is_connected() {
        return None;
    }
    let coloring = graph.bipartition()?;
    let class_of_one = coloring[graph.vertex_of_point(1)];
    let build = |a_color: bool| -> Epsilon {
        let a_set: Vec<u32> =
            (1..=points).filter(|&x| coloring[graph.vertex_of_point(x)] == a_color).collect();
        let stars: Vec<bool> = (0..points / 2)
            .map(|i| {
                // Exactly one endpoint of each pair lies in A.
                let odd_in_a = coloring[graph.vertex_of_point(2 * i + 1)] == a_color;
                !odd_in_a
            })
            .collect();
        let evens_in_a = a_set.iter().filter(|&&x| x % 2 == 0).count();
        Epsilon {
            stars,
            a_set,
            sign: if evens_in_a % 2 == 0 { 1 } else { -1 },
        }
    };
    Some((build(class_of_one), build(!class_of_one)))
}

/// `I ∘ π` where `I = (1,2)(3,4)⋯` on the degree of `π`.
pub fn i_pi(pi: &Perm) -> Perm {
    Perm::interval_pairing(pi.degree()).compose(pi)
}

/// Cycle factorization of `I ∘ π` for members of the pairing-based
/// commutator family: the cycle through 2 (outer evens), the cycle through
/// `2n+2` (inner evens), and the remaining all-odd cycles.
#[derive(Debug, Clone)]
pub struct IPiFactorization {
    /// Cycle of `I ∘ π` containing 2, rotated to start at 2.
    pub c_out: Vec<u32>,
    /// Cycle containing `2n+2`, rotated to start at `2n+2`.
    pub c_inn: Vec<u32>,
    /// Remaining cycles; for family members these are all-odd.
    pub odd_cycles: Vec<Vec<u32>>,
}

impl IPiFactorization {
    /// The scan list: `c_out` from 2, then `c_inn` from `2n+2`.
    pub fn l_list(&self) -> Vec<u32> {
        let mut l = self.c_out.clone();
        l.extend(&self.c_inn);
        l
    }
}

/// Splits the cycles of `I ∘ π`; `two_n` is the number of points on the
/// outer circle. Returns `None` if 2 and `2n+2` share a cycle or a leftover
/// cycle contains an even point.
pub fn i_pi_factorization(pi: &Perm, two_n: u32) -> Option<IPiFactorization> {
    let t = pi.degree();
    assert!(two_n % 2 == 0 && two_n + 2 <= t);
    let rotate_to = |cycle: &[u32], anchor: u32| -> Vec<u32> {
        let pos = cycle.iter().position(|&x| x == anchor).unwrap();
        cycle[pos..].iter().chain(&cycle[..pos]).copied().collect()
    };
    let mut c_out = None;
    let mut c_inn = None;
    let mut odd_cycles = Vec::new();
    for cycle in i_pi(pi).cycles() {
        if cycle.contains(&2) {
            if cycle.contains(&(two_n + 2)) {
                return None;
            }
            c_out = Some(rotate_to(&cycle, 2));
        } else if cycle.contains(&(two_n + 2)) {
            c_inn = Some(rotate_to(&cycle, two_n + 2));
        } else {
            if cycle.iter().any(|&x| x % 2 == 0) {
                return None;
            }
            odd_cycles.push(cycle);
        }
    }
    Some(IPiFactorization {
        c_out: c_out?,
        c_inn: c_inn?,
        odd_cycles,
    })
}

/// Pair indices `i` (1-based) whose points `2i−1, 2i` share a cycle of
/// `I ∘ π`.
pub fn flexible_pair_indices(pi: &Perm) -> Vec<u32> {
    let t = pi.degree();
    let ipi = i_pi(pi);
    let mut cycle_id = vec![0usize; t as usize];
    for (id, cycle) in ipi.cycles().into_iter().enumerate() {
        for x in cycle {
            cycle_id[(x - 1) as usize] = id;
        }
    }
    (1..=t / 2)
        .filter(|&i| cycle_id[(2 * i - 2) as usize] == cycle_id[(2 * i - 1) as usize])
        .collect()
}

pub fn is_admissible(pi: &Perm) -> bool {
    flexible_pair_indices(pi).is_empty()
}

/// `f_π`: the first point of the scan list belonging to a flexible pair.
/// `None` when `π` is admissible.
pub fn first_flexible(pi: &Perm, two_n: u32) -> Option<u32> {
    let fact = i_pi_factorization(pi, two_n)?;
    let flexible = flexible_pair_indices(pi);
    fact.l_list()
        .into_iter()
        .find(|&x| flexible.contains(&x.div_ceil(2)))
}

fn window_shift_down(t: u32, two_i: u32, two_j: u32) -> Option<Perm> {
    let mut img: Vec<u32> = (1..=t).collect();
    img[(two_i - 2) as usize] = two_j;
    img[(two_i - 1) as usize] = two_j - 1;
    for x in two_i + 1..=two_j {
        img[(x - 1) as usize] = x - 2;
    }
    Perm::from_images(img).ok()
}

fn window_shift_up(t: u32, two_i: u32, two_j: u32) -> Option<Perm> {
    let mut img: Vec<u32> = (1..=t).collect();
    img[(two_j - 2) as usize] = two_i;
    img[(two_j - 1) as usize] = two_i - 1;
    for x in two_i - 1..=two_j - 2 {
        img[(x - 1) as usize] = x + 2;
    }
    Perm::from_images(img).ok()
}

/// The sign-flipping conjugation sending a member whose first flexible
/// point is even to one whose first flexible point is odd: with
/// `f_π = 2i` and `2j` the largest even before `2i−1` in the scan list,
/// conjugate by `τ = (2i−1 ↦ 2j, 2i ↦ 2j−1, t ↦ t−2 on (2i, 2j])`.
pub fn t_map(pi: &Perm, two_n: u32) -> Option<Perm> {
    let f = first_flexible(pi, two_n)?;
    if f % 2 == 1 {
        return None;
    }
    let fact = i_pi_factorization(pi, two_n)?;
    let l = fact.l_list();
    let pos = l.iter().position(|&x| x == f - 1)?;
    let two_j = l[..pos].iter().filter(|&&x| x % 2 == 0).max().copied()?;
    let tau = window_shift_down(pi.degree(), f, two_j)?;
    Some(pi.conjugate_by(&tau))
}

/// Inverse of [`t_map`]: with `f_δ = 2j−1` and `2i` the first even after
/// `2j−1` in the scan list, conjugate by
/// `τ′ = (2j−1 ↦ 2i, 2j ↦ 2i−1, t ↦ t+2 on [2i−1, 2j−2])`.
pub fn u_map(delta: &Perm, two_n: u32) -> Option<Perm> {
    let f = first_flexible(delta, two_n)?;
    if f % 2 == 0 {
        return None;
    }
    let fact = i_pi_factorization(delta, two_n)?;
    let l = fact.l_list();
    let pos = l.iter().position(|&x| x == f)?;
    let two_i = l[pos + 1..].iter().find(|&&x| x % 2 == 0).copied()?;
    let tau = window_shift_up(delta.degree(), two_i, f + 1)?;
    Some(delta.conjugate_by(&tau))
}
