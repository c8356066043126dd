//! Finite state graphs on the lattice `(1/M)ℤ[i]`, `M = γΓ`, with edges
//! `z → β·z − t_j`. A node is live when it starts an infinite path; the live
//! nodes are exactly the points of `K` in that lattice.
//!
//! Three node sets give the same live set: the whole ball `|z|² ≤ R′²`, the
//! nodes reachable from a given start point, and the lattice points inside a
//! depth-`k` cylinder cover of `K`. Any finite node set containing
//! `K ∩ (1/M)ℤ[i]` works, because a bounded infinite orbit forces membership
//! and every point of `K` has a successor in `K`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ifs::{Coding, IfsSpec};
use crate::{GaussInteger, GaussRational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    denominator: GaussInteger,
    nodes: Vec<GaussInteger>,
    index: HashMap<GaussInteger, usize>,
    edges: Vec<Vec<(usize, usize)>>,
}

/// `Γt_j · (M/Γ)`, so that the successor numerator is `βω − shift_j`.
fn shifts(spec: &IfsSpec, m: &GaussInteger) -> Vec<GaussInteger> {
    let cofactor = m
        .exact_div(spec.gamma())
        .expect("denominator is a multiple of the digit denominator");
    spec.scaled_digits().iter().map(|t| t * &cofactor).collect()
}

fn successor(spec: &IfsSpec, omega: &GaussInteger, shift: &GaussInteger) -> GaussInteger {
    &(spec.beta() * omega) - shift
}

/// Exact test `|ω/M|² ≤ R′²` with `R′² = a/b`.
struct Ball {
    a: BigInt,
    b: BigInt,
    norm_m: BigInt,
}

impl Ball {
    fn new(spec: &IfsSpec, m: &GaussInteger) -> Self {
        let r = spec.bounding_radius_sq();
        Ball {
            a: r.numer().clone(),
            b: r.denom().clone(),
            norm_m: m.norm(),
        }
    }

    fn contains(&self, omega: &GaussInteger) -> bool {
        &self.b * omega.norm() <= &self.a * &self.norm_m
    }

    /// Largest integer `L` with `|ω|² ≤ L` for every node.
    fn limit(&self) -> BigInt {
        (&self.a * &self.norm_m).div_floor(&self.b)
    }
}

fn node_denominator(spec: &IfsSpec, gamma: &GaussInteger) -> Result<GaussInteger> {
    if gamma.is_zero() {
        return Err(Error::domain("denominator must be nonzero"));
    }
    Ok((gamma * spec.gamma()).canonical())
}

fn too_many(what: &str, m: &GaussInteger, cap: usize) -> Error {
    Error::resource(format!("{what} for denominator {m}"), cap as u64)
}

impl StateGraph {
    fn from_nodes(spec: &IfsSpec, m: GaussInteger, mut nodes: Vec<GaussInteger>) -> Self {
        nodes.sort();
        nodes.dedup();
        let index: HashMap<GaussInteger, usize> =
            nodes.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let sh = shifts(spec, &m);
        let edges = nodes
            .iter()
            .map(|w| {
                sh.iter()
                    .enumerate()
                    .filter_map(|(j, s)| index.get(&successor(spec, w, s)).map(|&k| (j, k)))
                    .collect()
            })
            .collect();
        StateGraph {
            denominator: m,
            nodes,
            index,
            edges,
        }
    }

    /// Common denominator `M` of all nodes (canonical associate of `γΓ`).
    pub fn denominator(&self) -> &GaussInteger {
        &self.denominator
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node numerators `ω`, sorted; node `i` is `ω_i / M`.
    pub fn numerators(&self) -> &[GaussInteger] {
        &self.nodes
    }

    pub fn value(&self, i: usize) -> GaussRational {
        GaussRational::new(self.nodes[i].clone(), self.denominator.clone())
            .expect("nonzero denominator")
    }

    pub fn values(&self) -> Vec<GaussRational> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    /// Outgoing `(digit index, target node)` pairs, by increasing digit.
    pub fn edges(&self, i: usize) -> &[(usize, usize)] {
        &self.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, z: &GaussRational) -> Option<usize> {
        let omega = (z.num() * &self.denominator).exact_div(z.den())?;
        self.index.get(&omega).copied()
    }

    pub fn contains(&self, z: &GaussRational) -> bool {
        self.index_of(z).is_some()
    }

    /// Greatest subgraph in which every node has an outgoing edge.
    pub fn prune_to_live(&self) -> StateGraph {
        let n = self.len();
        let mut out_deg: Vec<usize> = self.edges.iter().map(Vec::len).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, es) in self.edges.iter().enumerate() {
            for &(_, k) in es {
                preds[k].push(i);
            }
        }
        let mut dead = vec![false; n];
        let mut work: Vec<usize> = (0..n).filter(|&i| out_deg[i] == 0).collect();
        for &i in &work {
            dead[i] = true;
        }
        while let Some(k) = work.pop() {
            for &p in &preds[k] {
                out_deg[p] -= 1;
                if out_deg[p] == 0 && !dead[p] {
                    dead[p] = true;
                    work.push(p);
                }
            }
        }
        let mut remap = vec![usize::MAX; n];
        let mut nodes = Vec::new();
        for i in 0..n {
            if !dead[i] {
                remap[i] = nodes.len();
                nodes.push(self.nodes[i].clone());
            }
        }
        let edges = (0..n)
            .filter(|&i| !dead[i])
            .map(|i| {
                self.edges[i]
                    .iter()
                    .filter(|&&(_, k)| !dead[k])
                    .map(|&(j, k)| (j, remap[k]))
                    .collect()
            })
            .collect();
        let index = nodes.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        StateGraph {
            denominator: self.denominator.clone(),
            nodes,
            index,
            edges,
        }
    }

    /// Follow the smallest live digit from `start` until a node repeats.
    /// The graph must already be pruned.
    pub fn walk_coding(&self, start: usize) -> Coding {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut word = Vec::new();
        let mut cur = start;
        loop {
            if let Some(&pos) = seen.get(&cur) {
                let period = word.split_off(pos);
                return Coding {
                    preperiod: word,
                    period,
                };
            }
            seen.insert(cur, word.len());
            let &(j, next) = self.edges[cur]
                .first()
                .expect("every node of a pruned graph has a successor");
            word.push(j);
            cur = next;
        }
    }

    /// Graphviz rendering with canonical rational labels and 1-based digits.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph K {\n");
        for i in 0..self.len() {
            let _ = writeln!(s, "  \"{}\";", self.value(i));
        }
        for i in 0..self.len() {
            for &(j, k) in &self.edges[i] {
                let _ = writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    self.value(i),
                    self.value(k),
                    j + 1
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// All lattice points `ω/M` in the bounding ball, `M = γΓ`.
pub fn build_state_graph(spec: &IfsSpec, gamma: &GaussInteger, cap: usize) -> Result<StateGraph> {
    build_ball_graph(spec, gamma, &spec.bounding_radius_sq(), cap)
}

/// All lattice points `ω/M` with `|ω/M|² ≤ radius_sq`. Any radius at least
/// `R′` yields the same live set.
pub fn build_ball_graph(
    spec: &IfsSpec,
    gamma: &GaussInteger,
    radius_sq: &Ratio<BigInt>,
    cap: usize,
) -> Result<StateGraph> {
    let m = node_denominator(spec, gamma)?;
    let ball = Ball {
        a: radius_sq.numer().clone(),
        b: radius_sq.denom().clone(),
        norm_m: m.norm(),
    };
    let limit = ball.limit();
    let x = limit.sqrt();
    if x > BigInt::from(cap) {
        return Err(too_many("state graph", &m, cap));
    }
    let mut count = BigInt::zero();
    let mut re = -x.clone();
    while re <= x {
        count += 2 * (&limit - &re * &re).sqrt() + 1;
        if count > BigInt::from(cap) {
            return Err(too_many("state graph", &m, cap));
        }
        re += 1;
    }
    let mut nodes = Vec::new();
    let mut re = -x.clone();
    while re <= x {
        let y = (&limit - &re * &re).sqrt();
        let mut im = -y.clone();
        while im <= y {
            nodes.push(GaussInteger::new(re.clone(), im.clone()));
            im += 1;
        }
        re += 1;
    }
    Ok(StateGraph::from_nodes(spec, m, nodes))
}

/// Greatest fixed point of "has a successor": the points of `K` on the lattice.
pub fn prune_to_live(graph: &StateGraph) -> StateGraph {
    graph.prune_to_live()
}

/// Ball nodes reachable from `z` on the lattice `(1/(den(z)Γ))ℤ[i]`.
pub fn reachable_graph(spec: &IfsSpec, z: &GaussRational, cap: usize) -> Result<StateGraph> {
    let m = node_denominator(spec, z.den())?;
    let ball = Ball::new(spec, &m);
    let start = (z.num() * &m)
        .exact_div(z.den())
        .expect("denominator divides M");
    let sh = shifts(spec, &m);
    let mut seen: HashSet<GaussInteger> = HashSet::new();
    let mut queue = VecDeque::new();
    if ball.contains(&start) {
        seen.insert(start.clone());
        queue.push_back(start);
    }
    while let Some(w) = queue.pop_front() {
        for s in &sh {
            let next = successor(spec, &w, s);
            if ball.contains(&next) && !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(too_many("reachable state graph", &m, cap));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(StateGraph::from_nodes(spec, m, seen.into_iter().collect()))
}

/// Lattice points `ω/M` inside the depth-`k` cylinder discs
/// `|z − c_I/β^k|² ≤ R′²/N(β)^k`, with `k` the least depth at which the disc
/// radius is at most the lattice spacing `1/|M|`.
pub fn cylinder_graph(spec: &IfsSpec, gamma: &GaussInteger, cap: usize) -> Result<StateGraph> {
    let m = node_denominator(spec, gamma)?;
    let r = spec.bounding_radius_sq();
    let (a, b) = (r.numer().clone(), r.denom().clone());
    let norm_m = m.norm();
    let norm_beta = spec.beta().norm();
    let lhs = &a * &norm_m;
    let mut k = 0u64;
    let mut nbk = BigInt::one();
    while lhs > &b * &nbk {
        k += 1;
        nbk *= &norm_beta;
    }

    let mut centers: HashSet<GaussInteger> = HashSet::from([GaussInteger::zero()]);
    for _ in 0..k {
        let size = centers.len().saturating_mul(spec.ell());
        if size > cap {
            return Err(too_many("cylinder cover", &m, cap));
        }
        let mut next = HashSet::with_capacity(size);
        for c in &centers {
            let bc = c * spec.beta();
            for t in spec.scaled_digits() {
                next.insert(&bc + t);
            }
        }
        centers = next;
    }

    let dk = spec.gamma() * &spec.beta().pow(k);
    let norm_dk = dk.norm();
    let dk_conj = dk.conj();
    let rhs = &a * &norm_m * &norm_dk;
    let scale = &b * &nbk;
    let mut nodes: HashSet<GaussInteger> = HashSet::new();
    for c in &centers {
        let cm = c * &m;
        let p = &cm * &dk_conj;
        let fr = p.re.div_floor(&norm_dk);
        let fi = p.im.div_floor(&norm_dk);
        for dr in -1i64..=2 {
            for di in -1i64..=2 {
                let w = GaussInteger::new(&fr + dr, &fi + di);
                let diff = &(&w * &dk) - &cm;
                if &scale * diff.norm() <= rhs {
                    nodes.insert(w);
                }
            }
        }
        if nodes.len() > cap {
            return Err(too_many("cylinder cover", &m, cap));
        }
    }
    Ok(StateGraph::from_nodes(spec, m, nodes.into_iter().collect()))
}

/// Live part of the cylinder graph: every point of `K` in `(1/(γΓ))ℤ[i]`.
pub fn live_graph(spec: &IfsSpec, gamma: &GaussInteger, cap: usize) -> Result<StateGraph> {
    Ok(cylinder_graph(spec, gamma, cap)?.prune_to_live())
}

fn outside_ball(spec: &IfsSpec, z: &GaussRational) -> bool {
    z.abs_sq() > spec.bounding_radius_sq()
}

pub fn is_member(spec: &IfsSpec, z: &GaussRational, cap: usize) -> Result<bool> {
    if outside_ball(spec, z) {
        return Ok(false);
    }
    let live = reachable_graph(spec, z, cap)?.prune_to_live();
    Ok(live.contains(z))
}

/// A coding of `z` from the smallest-digit walk through the live graph.
/// Not minimized; see [`Coding::minimized`].
pub fn coding_of(spec: &IfsSpec, z: &GaussRational, cap: usize) -> Result<Coding> {
    let not_member = || Error::domain(format!("{z} is not a point of the attractor"));
    if outside_ball(spec, z) {
        return Err(not_member());
    }
    let live = reachable_graph(spec, z, cap)?.prune_to_live();
    let start = live.index_of(z).ok_or_else(not_member)?;
    Ok(live.walk_coding(start))
}
