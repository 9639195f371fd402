//! Exact maximum `t`-intersecting sets by clique search, and checks on the
//! structure of extremal sets.

use crate::ekr::{closed_form_bound, projection_residual, standard_coset, Mode};
use crate::error::{Error, Result};
use crate::glq::{fixes_t_space_pointwise, stabilizes_t_space, GroupData};
use crate::scheme::Idempotents;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

pub const GRAPH_MAX_ORDER: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn and_not_in_place(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= !b);
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// `x ~ y` iff `x` and `y` are NOT `t`-intersecting.
#[derive(Clone, Debug)]
pub struct IntersectionGraph {
    pub t: usize,
    pub mode: Mode,
    /// Per group class: whether `x⁻¹y` in that class makes `x, y` intersect.
    pub intersecting_class: Vec<bool>,
    adj: Vec<Bits>,
}

impl IntersectionGraph {
    pub fn order(&self) -> usize {
        self.adj.len()
    }
    pub fn adjacent(&self, x: u32, y: u32) -> bool {
        self.adj[x as usize].get(y as usize)
    }
    pub fn degree(&self, x: u32) -> usize {
        self.adj[x as usize].count()
    }
    pub fn is_independent(&self, set: &[u32]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &x)| set[i + 1..].iter().all(|&y| !self.adjacent(x, y)))
    }
}

pub fn build_graph(group: &GroupData, t: usize, mode: Mode) -> Result<IntersectionGraph> {
    let order = group.order();
    if order > GRAPH_MAX_ORDER {
        return Err(Error::BudgetExceeded {
            what: "graph vertices",
            needed: order as u64,
            limit: GRAPH_MAX_ORDER as u64,
        });
    }
    let field = group.field();
    let intersecting_class: Vec<bool> = (0..group.num_classes())
        .map(|c| {
            let s = &group.class(c).index;
            match mode {
                Mode::Points => fixes_t_space_pointwise(s, t, field),
                Mode::Spaces => stabilizes_t_space(s, t),
            }
        })
        .collect();
    let adj = (0..order as u32)
        .into_par_iter()
        .map(|x| {
            let xi = group.inverse(x);
            let mut b = Bits::new(order);
            for y in 0..order as u32 {
                if y != x && !intersecting_class[group.class_of(group.mul(xi, y))] {
                    b.set(y as usize);
                }
            }
            b
        })
        .collect();
    Ok(IntersectionGraph {
        t,
        mode,
        intersecting_class,
        adj,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueResult {
    pub max_size: usize,
    /// Sorted element ids, identity included.
    pub witness: Vec<u32>,
    /// `false` when the search stopped at the timeout.
    pub exact: bool,
    pub witness_verified: bool,
    #[serde(skip)]
    pub nodes: u64,
    #[serde(skip)]
    pub runtime: Duration,
}

/// Compatibility structure on the identity's non-neighbours, relabelled by
/// decreasing degree.
struct Search {
    verts: Vec<u32>,
    nbr: Vec<Bits>,
}

impl Search {
    fn new(g: &IntersectionGraph, group: &GroupData) -> Search {
        let id = group.identity();
        let mut verts: Vec<u32> = (0..g.order() as u32).filter(|&y| y != id && !g.adjacent(id, y)).collect();
        let deg = |y: u32| verts.iter().filter(|&&z| z != y && !g.adjacent(y, z)).count();
        let mut keyed: Vec<(usize, u32)> = verts.iter().map(|&y| (deg(y), y)).collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        verts = keyed.into_iter().map(|(_, y)| y).collect();
        let k = verts.len();
        let nbr = (0..k)
            .map(|i| {
                let mut b = Bits::new(k);
                for j in 0..k {
                    if i != j && !g.adjacent(verts[i], verts[j]) {
                        b.set(j);
                    }
                }
                b
            })
            .collect();
        Search { verts, nbr }
    }

    fn len(&self) -> usize {
        self.verts.len()
    }

    /// Greedy colouring of `p`: vertices with their colour bound, ascending.
    fn colour(&self, p: &Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut q = p.clone();
        let mut k = 0;
        while !q.is_empty() {
            k += 1;
            let mut r = q.clone();
            while let Some(v) = r.first() {
                r.clear(v);
                q.clear(v);
                r.and_not_in_place(&self.nbr[v]);
                out.push((v, k));
            }
        }
        out
    }
}

struct Shared<'a> {
    s: &'a Search,
    best: AtomicUsize,
    witness: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    deadline: Option<Instant>,
    timed_out: AtomicBool,
    /// Stop as soon as a clique of this size is found.
    target: Option<usize>,
}

impl Shared<'_> {
    fn expand(&self, c: &mut Vec<usize>, mut p: Bits) {
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed);
        if nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out.store(true, Ordering::Relaxed);
                }
            }
        }
        if self.timed_out.load(Ordering::Relaxed) || self.done() {
            return;
        }
        let order = self.s.colour(&p);
        for &(v, k) in order.iter().rev() {
            if c.len() + k <= self.bar() || self.done() {
                return;
            }
            c.push(v);
            let np = p.and(&self.s.nbr[v]);
            if np.is_empty() {
                self.offer(c);
            } else {
                self.expand(c, np);
            }
            c.pop();
            p.clear(v);
        }
    }

    /// Cliques must beat this size to be explored.
    fn bar(&self) -> usize {
        match self.target {
            Some(t) => t - 1,
            None => self.best.load(Ordering::Relaxed),
        }
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.best.load(Ordering::Relaxed) >= t)
    }

    fn offer(&self, c: &[usize]) {
        let mut w = self.witness.lock().unwrap();
        if c.len() > self.best.load(Ordering::Relaxed) {
            self.best.store(c.len(), Ordering::Relaxed);
            *w = c.to_vec();
        }
    }
}

/// Exact maximum independent set, with the identity fixed in the set.
pub fn max_independent(g: &IntersectionGraph, group: &GroupData, timeout: Option<Duration>) -> CliqueResult {
    let start = Instant::now();
    let s = Search::new(g, group);
    let shared = Shared {
        s: &s,
        best: AtomicUsize::new(0),
        witness: Mutex::new(vec![]),
        nodes: AtomicU64::new(0),
        deadline: timeout.map(|d| start + d),
        timed_out: AtomicBool::new(false),
        target: None,
    };
    let mut all = Bits::new(s.len());
    (0..s.len()).for_each(|i| all.set(i));
    let order = s.colour(&all);
    // branch i owns vertex order[i] with the vertices before it still free
    let branches: Vec<(usize, usize, Bits)> = {
        let mut p = all.clone();
        let mut v = Vec::with_capacity(order.len());
        for &(u, k) in order.iter().rev() {
            v.push((u, k, p.and(&s.nbr[u])));
            p.clear(u);
        }
        v
    };
    branches.par_iter().for_each(|(u, k, np)| {
        if *k <= shared.best.load(Ordering::Relaxed) {
            return;
        }
        let mut c = vec![*u];
        if np.is_empty() {
            shared.offer(&c);
        } else {
            shared.expand(&mut c, np.clone());
        }
    });
    let best = shared.best.load(Ordering::Relaxed);
    let exact = !shared.timed_out.load(Ordering::Relaxed);
    let witness = if exact {
        canonical_witness(&s, best).unwrap_or_else(|| shared.witness.lock().unwrap().clone())
    } else {
        shared.witness.lock().unwrap().clone()
    };
    let mut members: Vec<u32> = witness.iter().map(|&i| s.verts[i]).collect();
    members.push(group.identity());
    members.sort_unstable();
    CliqueResult {
        max_size: best + 1,
        witness_verified: g.is_independent(&members) && members.len() == best + 1,
        witness: members,
        exact,
        nodes: shared.nodes.load(Ordering::Relaxed),
        runtime: start.elapsed(),
    }
}

/// The first clique of the given size in a sequential search order, so the
/// witness does not depend on thread scheduling.
fn canonical_witness(s: &Search, size: usize) -> Option<Vec<usize>> {
    if size == 0 {
        return Some(vec![]);
    }
    let shared = Shared {
        s,
        best: AtomicUsize::new(0),
        witness: Mutex::new(vec![]),
        nodes: AtomicU64::new(0),
        deadline: None,
        timed_out: AtomicBool::new(false),
        target: Some(size),
    };
    let mut all = Bits::new(s.len());
    (0..s.len()).for_each(|i| all.set(i));
    shared.expand(&mut Vec::new(), all);
    let w = shared.witness.into_inner().unwrap();
    (w.len() == size).then_some(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    pub t: usize,
    pub mode: Mode,
    pub witness_size: usize,
    pub witness_independent: bool,
    pub coset_size: usize,
    pub closed_form: String,
    pub coset_matches_formula: bool,
    pub coset_independent: bool,
    pub transpose_independent: bool,
    pub coset_transpose_independent: bool,
    /// `None` when the group is too large for idempotents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_in_span: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_in_span: Option<bool>,
}

impl ExtremalReport {
    pub fn passed(&self) -> bool {
        self.witness_independent
            && self.coset_matches_formula
            && self.coset_independent
            && self.transpose_independent
            && self.coset_transpose_independent
            && self.witness_in_span != Some(false)
            && self.coset_in_span != Some(false)
    }
}

fn transpose_set(group: &GroupData, set: &[u32]) -> Vec<u32> {
    set.iter()
        .map(|&x| group.lookup(&group.matrix(x).transpose()).expect("transpose is invertible"))
        .collect()
}

/// `proj` is the idempotent data together with the constituent rows
/// spanning the coset module.
pub fn verify_extremal(
    group: &GroupData,
    g: &IntersectionGraph,
    witness: &[u32],
    proj: Option<(&Idempotents, &[usize])>,
) -> ExtremalReport {
    let (t, mode) = (g.t, g.mode);
    let coset = standard_coset(group, t, mode);
    let closed = closed_form_bound(group.field().q(), group.n(), t, mode);
    let in_span = |set: &[u32]| proj.map(|(ids, cons)| projection_residual(group, ids, cons, set).iter().all(|c| c.is_zero()));
    ExtremalReport {
        t,
        mode,
        witness_size: witness.len(),
        witness_independent: g.is_independent(witness),
        coset_size: coset.len(),
        coset_matches_formula: BigInt::from(coset.len()) == closed,
        closed_form: closed.to_string(),
        coset_independent: g.is_independent(&coset),
        transpose_independent: g.is_independent(&transpose_set(group, witness)),
        coset_transpose_independent: g.is_independent(&transpose_set(group, &coset)),
        witness_in_span: in_span(witness),
        coset_in_span: in_span(&coset),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfq::build_field;

    fn solve(q: u64, n: usize, t: usize, mode: Mode) -> (GroupData, IntersectionGraph, CliqueResult) {
        let f = build_field(q).unwrap();
        let grp = GroupData::build(&f, n, 1000).unwrap();
        let g = build_graph(&grp, t, mode).unwrap();
        let r = max_independent(&g, &grp, None);
        (grp, g, r)
    }

    #[test]
    fn derangement_degree() {
        let f = build_field(2).unwrap();
        let grp = GroupData::build(&f, 3, 1000).unwrap();
        let g = build_graph(&grp, 1, Mode::Points).unwrap();
        assert_eq!(g.degree(grp.identity()), 48);
        assert!((0..grp.order() as u32).all(|x| g.degree(x) == 48));
    }

    #[test]
    fn small_maxima() {
        for (q, n, t, mode, want) in [
            (2, 2, 1, Mode::Points, 2),
            (3, 2, 1, Mode::Points, 6),
            (2, 3, 1, Mode::Points, 24),
            (2, 3, 1, Mode::Spaces, 24),
        ] {
            let (_, g, r) = solve(q, n, t, mode);
            assert!(r.exact);
            assert!(r.witness_verified);
            assert_eq!(r.max_size, want, "GL({n},{q}) t={t} {mode}");
            assert!(g.is_independent(&r.witness));
        }
    }

    #[test]
    fn witness_is_canonical() {
        let (_, _, a) = solve(3, 2, 1, Mode::Points);
        let (_, _, b) = solve(3, 2, 1, Mode::Points);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn zero_timeout_flags_lower_bound() {
        let f = build_field(2).unwrap();
        let grp = GroupData::build(&f, 3, 1000).unwrap();
        let g = build_graph(&grp, 1, Mode::Spaces).unwrap();
        let r = max_independent(&g, &grp, Some(Duration::ZERO));
        assert!(!r.exact);
        assert!(r.max_size <= 24);
        assert!(r.witness_verified);
    }

    #[test]
    fn gl32_extremal_structure() {
        let (grp, g, r) = solve(2, 3, 1, Mode::Points);
        let rep = verify_extremal(&grp, &g, &r.witness, None);
        assert_eq!(rep.coset_size, 24);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn large_groups_rejected() {
        let f = build_field(3).unwrap();
        let grp = GroupData::build(&f, 3, 20_000).unwrap();
        assert!(matches!(build_graph(&grp, 1, Mode::Points), Err(Error::BudgetExceeded { .. })));
    }
}
