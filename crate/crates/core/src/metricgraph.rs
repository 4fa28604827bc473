//! Metric graphs, the rigidity threshold for quasi-isometries between them,
//! and a bounded search for quasi-isometries between finite sample nets.
//!
//! A `(k, c)`-quasi-isometry `f: X → Y` satisfies
//! `d(fx₁, fx₂)/k − c < d(x₁, x₂) < k·d(fx₁, fx₂) + c` for all pairs and
//! `d(y, f(X)) < c` for every `y`. The search discretizes both graphs at a
//! fixed number of sample points per unit length. A returned witness is a
//! verified map between the nets. `None` means no map between the nets passes
//! at that density. It is evidence that no quasi-isometry exists, not a proof.

use crate::error::{Error, Result};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Exact edge lengths and distances.
pub type Length = Ratio<i64>;

/// A finite connected multigraph with positive rational edge lengths. Loops are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MetricGraphDoc", into = "MetricGraphDoc")]
pub struct MetricGraph {
    vertices: usize,
    edges: Vec<(usize, usize, Length)>,
    vdist: Vec<Vec<Length>>,
}

/// Serialized form: an edge list with lengths as `[numerator, denominator]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricGraphDoc {
    /// Vertex count.
    pub vertices: usize,
    /// `(u, v, [num, den])` per edge.
    pub edges: Vec<(usize, usize, [i64; 2])>,
}

impl TryFrom<MetricGraphDoc> for MetricGraph {
    type Error = Error;
    fn try_from(d: MetricGraphDoc) -> Result<Self> {
        let edges = d
            .edges
            .into_iter()
            .map(|(u, v, [n, m])| {
                if m == 0 {
                    Err(Error::Parse(format!("edge ({u}, {v}) has zero denominator")))
                } else {
                    Ok((u, v, Ratio::new(n, m)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        MetricGraph::new(d.vertices, edges)
    }
}

impl From<MetricGraph> for MetricGraphDoc {
    fn from(g: MetricGraph) -> Self {
        MetricGraphDoc { vertices: g.vertices, edges: g.edges.iter().map(|&(u, v, l)| (u, v, [*l.numer(), *l.denom()])).collect() }
    }
}

/// A vertex or a point interior to an edge, at distance `t` from the edge's first endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Point {
    /// A vertex.
    Vertex(usize),
    /// An interior point with `0 < t < length`.
    Edge {
        /// Edge index.
        edge: usize,
        /// Distance from the first endpoint.
        t: Length,
    },
}

impl MetricGraph {
    /// Builds a metric graph, rejecting nonpositive lengths, bad endpoints, and disconnected graphs.
    pub fn new(vertices: usize, edges: Vec<(usize, usize, Length)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInput("metric graph needs a vertex".into()));
        }
        for &(u, v, l) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range")));
            }
            if l <= Ratio::from_integer(0) {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) has nonpositive length {l}")));
            }
        }
        let mut d: Vec<Vec<Option<Length>>> = vec![vec![None; vertices]; vertices];
        for (v, row) in d.iter_mut().enumerate() {
            row[v] = Some(Ratio::from_integer(0));
        }
        for &(u, v, l) in &edges {
            if u != v && d[u][v].is_none_or(|x| l < x) {
                d[u][v] = Some(l);
                d[v][u] = Some(l);
            }
        }
        for m in 0..vertices {
            for i in 0..vertices {
                let Some(a) = d[i][m] else { continue };
                for j in 0..vertices {
                    if let Some(b) = d[m][j] {
                        if d[i][j].is_none_or(|x| a + b < x) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        if d.iter().flatten().any(|x| x.is_none()) {
            return Err(Error::Disconnected("metric graph is disconnected".into()));
        }
        let vdist = d.into_iter().map(|r| r.into_iter().map(|x| x.unwrap()).collect()).collect();
        Ok(MetricGraph { vertices, edges, vdist })
    }

    /// Builds a graph from integer lengths.
    pub fn from_integer_lengths(vertices: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        Self::new(vertices, edges.iter().map(|&(u, v, l)| (u, v, Ratio::from_integer(l))).collect())
    }

    /// Vertex count.
    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    /// Edge list.
    pub fn edges(&self) -> &[(usize, usize, Length)] {
        &self.edges
    }

    /// Degree of a vertex; a loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b, _)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Shortest edge length.
    pub fn min_length(&self) -> Option<Length> {
        self.edges.iter().map(|e| e.2).min()
    }

    /// The same graph with every length multiplied by `lambda`.
    pub fn scaled(&self, lambda: Length) -> Result<Self> {
        Self::new(self.vertices, self.edges.iter().map(|&(u, v, l)| (u, v, l * lambda)).collect())
    }

    /// The graph with vertices renamed by `perm` (old index → new index) and edges listed in `order`.
    pub fn relabeled(&self, perm: &[usize], order: &[usize]) -> Result<Self> {
        let edges = order.iter().map(|&e| {
            let (u, v, l) = self.edges[e];
            (perm[u], perm[v], l)
        });
        Self::new(self.vertices, edges.collect())
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        match *p {
            Point::Vertex(v) if v < self.vertices => Ok(()),
            Point::Edge { edge, t } if edge < self.edges.len() && t > Ratio::from_integer(0) && t < self.edges[edge].2 => Ok(()),
            _ => Err(Error::InvalidInput(format!("{p:?} is not a point of the graph"))),
        }
    }

    /// Ways out of a point: `(vertex, distance to it)`.
    fn exits(&self, p: &Point) -> [(usize, Length); 2] {
        match *p {
            Point::Vertex(v) => [(v, Ratio::from_integer(0)); 2],
            Point::Edge { edge, t } => {
                let (u, v, l) = self.edges[edge];
                [(u, t), (v, l - t)]
            }
        }
    }

    fn distance_unchecked(&self, x: &Point, y: &Point) -> Length {
        let mut best = None::<Length>;
        if let (Point::Edge { edge: e1, t: t1 }, Point::Edge { edge: e2, t: t2 }) = (x, y) {
            if e1 == e2 {
                best = Some(if t1 > t2 { t1 - t2 } else { t2 - t1 });
            }
        }
        for (a, da) in self.exits(x) {
            for (b, db) in self.exits(y) {
                let cand = da + self.vdist[a][b] + db;
                if best.is_none_or(|x| cand < x) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap()
    }

    /// Sample net: every vertex, then the points at spacing `1/density` inside each edge.
    pub fn sample_net(&self, density: u32) -> Result<Vec<Point>> {
        if density == 0 {
            return Err(Error::InvalidInput("density must be positive".into()));
        }
        let mut out: Vec<Point> = (0..self.vertices).map(Point::Vertex).collect();
        for (e, &(_, _, l)) in self.edges.iter().enumerate() {
            let mut j = 1i64;
            loop {
                let t = Ratio::new(j, density as i64);
                if t >= l {
                    break;
                }
                out.push(Point::Edge { edge: e, t });
                j += 1;
            }
        }
        Ok(out)
    }
}

/// Exact shortest-path distance between two points.
pub fn distance(g: &MetricGraph, x: &Point, y: &Point) -> Result<Length> {
    g.check_point(x)?;
    g.check_point(y)?;
    Ok(g.distance_unchecked(x, y))
}

/// The constants of the rigidity lemma for given `k` and `c`. Derived values are computed on demand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QIParams {
    /// Multiplicative constant.
    pub k: f64,
    /// Additive constant.
    pub c: f64,
}

impl QIParams {
    /// Quasi-inverse multiplicative constant `k′ = k`.
    pub fn k_prime(&self) -> f64 {
        self.k
    }
    /// Quasi-inverse additive constant `c′ = 3kc`.
    pub fn c_prime(&self) -> f64 {
        3.0 * self.k * self.c
    }
    /// Round-trip displacement bound `s = kc`.
    pub fn s(&self) -> f64 {
        self.k * self.c
    }
    /// Edge-length threshold `u = 6k³(k²+3)c`.
    pub fn u(&self) -> f64 {
        6.0 * self.k.powi(3) * (self.k * self.k + 3.0) * self.c
    }
    /// Vertex-proximity bound `t = max((k²+2)c, k′(k′²+2)c′) = 3k²(k²+2)c`.
    pub fn t(&self) -> f64 {
        let (k, c) = (self.k, self.c);
        ((k * k + 2.0) * c).max(self.k_prime() * (self.k_prime().powi(2) + 2.0) * self.c_prime())
    }
    /// Bound for the quasi-inverse, `t′ = max((k′²+2)c, k(k²+2)c)`.
    pub fn t_prime(&self) -> f64 {
        let (k, c) = (self.k, self.c);
        ((self.k_prime().powi(2) + 2.0) * c).max(k * (k * k + 2.0) * c)
    }
    /// True when `k` or `c` equals 1, outside the strict regime `k, c > 1`.
    pub fn boundary_regime(&self) -> bool {
        self.k <= 1.0 || self.c <= 1.0
    }
}

/// Validates `k, c ≥ 1` and returns the parameter set.
pub fn thresholds(k: f64, c: f64) -> Result<QIParams> {
    if !(k.is_finite() && c.is_finite()) || k <= 0.0 || c <= 0.0 {
        return Err(Error::InvalidInput(format!("k = {k} and c = {c} must be positive")));
    }
    if k < 1.0 || c < 1.0 {
        return Err(Error::InvalidInput(format!("k = {k} and c = {c} must be at least 1")));
    }
    Ok(QIParams { k, c })
}

/// A map from the sample net of the first graph to sample points of the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QiWitness {
    /// Domain points.
    pub domain: Vec<Point>,
    /// Image of each domain point.
    pub image: Vec<Point>,
}

/// Checks the two-sided `(k, c)` inequality on all pairs and `c`-coarse surjectivity onto `targets`.
pub fn verify_map(g1: &MetricGraph, g2: &MetricGraph, w: &QiWitness, k: f64, c: f64, targets: &[Point]) -> Result<bool> {
    if w.domain.len() != w.image.len() {
        return Err(Error::InvalidInput("domain and image lengths differ".into()));
    }
    for p in &w.domain {
        g1.check_point(p)?;
    }
    for p in w.image.iter().chain(targets) {
        g2.check_point(p)?;
    }
    let f = |x: Length| *x.numer() as f64 / *x.denom() as f64;
    for i in 0..w.domain.len() {
        for j in i + 1..w.domain.len() {
            let d = f(g1.distance_unchecked(&w.domain[i], &w.domain[j]));
            let dp = f(g2.distance_unchecked(&w.image[i], &w.image[j]));
            if !(dp / k - c < d && d < k * dp + c) {
                return Ok(false);
            }
        }
    }
    Ok(targets.iter().all(|y| w.image.iter().any(|z| f(g2.distance_unchecked(y, z)) < c)))
}

const WORDS: usize = 64;

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(n: usize) -> Self {
        let mut v = vec![0u64; n.div_ceil(WORDS)];
        for i in 0..n {
            v[i / WORDS] |= 1 << (i % WORDS);
        }
        Bits(v)
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORDS + b)
            })
        })
    }
    fn clear(&mut self, i: usize) {
        self.0[i / WORDS] &= !(1 << (i % WORDS));
    }
    fn only(&mut self, i: usize) {
        self.0.iter_mut().for_each(|w| *w = 0);
        self.0[i / WORDS] |= 1 << (i % WORDS);
    }
    fn intersects(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).any(|(a, b)| a & b != 0)
    }
    fn or_assign(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a |= b);
    }
}

/// Default cap on search nodes for [`search_quasi_isometry`].
pub const DEFAULT_NODE_BUDGET: usize = 5_000_000;
/// Largest sample net the search accepts.
pub const MAX_SAMPLES: usize = 4096;

struct Search<'a> {
    k: f64,
    c: f64,
    d1: &'a [Vec<f64>],
    d2: &'a [Vec<f64>],
    near: &'a [Bits],
    order: &'a [usize],
    nodes: &'a AtomicUsize,
    budget: usize,
}

impl Search<'_> {
    /// Restricts every unassigned domain after `x ↦ y`; false on a wipeout or a coverage failure.
    fn propagate(&self, dom: &mut [Bits], assigned: &[bool], x: usize, y: usize) -> bool {
        dom[x].only(y);
        for z in 0..dom.len() {
            if assigned[z] || z == x {
                continue;
            }
            let d = self.d1[x][z];
            let (lo, hi) = ((d - self.c) / self.k, self.k * (d + self.c));
            let drop: Vec<usize> = dom[z].ones().filter(|&v| !(self.d2[y][v] > lo && self.d2[y][v] < hi)).collect();
            for v in drop {
                dom[z].clear(v);
            }
            if dom[z].count() == 0 {
                return false;
            }
        }
        let mut reach = Bits(vec![0; dom[0].0.len()]);
        for d in dom.iter() {
            reach.or_assign(d);
        }
        self.near.iter().all(|n| n.intersects(&reach))
    }

    fn solve(&self, dom: Vec<Bits>, assigned: &mut Vec<bool>) -> Result<Option<Vec<usize>>> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::Resource(format!("quasi-isometry search exceeded {} nodes", self.budget)));
        }
        let pick = {
            let forced = (0..dom.len()).find(|&z| !assigned[z] && dom[z].count() == 1);
            forced.or_else(|| self.order.iter().copied().find(|&z| !assigned[z]))
        };
        let Some(x) = pick else {
            return Ok(Some(dom.iter().map(|d| d.ones().next().unwrap()).collect()));
        };
        assigned[x] = true;
        for y in dom[x].ones().collect::<Vec<_>>() {
            let mut next = dom.clone();
            if self.propagate(&mut next, assigned, x, y) {
                if let Some(sol) = self.solve(next, assigned)? {
                    return Ok(Some(sol));
                }
            }
        }
        assigned[x] = false;
        Ok(None)
    }
}

/// Greedy farthest-first ordering starting from index 0.
fn farthest_first(d: &[Vec<f64>]) -> Vec<usize> {
    let n = d.len();
    let mut order = vec![0];
    let mut gap: Vec<f64> = d[0].clone();
    let mut used = vec![false; n];
    used[0] = true;
    while order.len() < n {
        let next = (0..n).filter(|&i| !used[i]).max_by(|&a, &b| gap[a].total_cmp(&gap[b]).then(b.cmp(&a))).unwrap();
        used[next] = true;
        order.push(next);
        for i in 0..n {
            gap[i] = gap[i].min(d[next][i]);
        }
    }
    order
}

fn distance_matrix(g: &MetricGraph, pts: &[Point]) -> Vec<Vec<f64>> {
    pts.par_iter()
        .map(|p| {
            pts.iter()
                .map(|q| {
                    let r = g.distance_unchecked(p, q);
                    *r.numer() as f64 / *r.denom() as f64
                })
                .collect()
        })
        .collect()
}

/// Searches for a `(k, c)`-quasi-isometry from the sample net of `g1` to sample points of `g2`.
///
/// Backtracking with forward checking assigns domain points in farthest-first
/// order. The anchor (first domain point) is tried against every target in
/// parallel, and the witness with the least anchor image is returned.
pub fn search_quasi_isometry(g1: &MetricGraph, g2: &MetricGraph, k: f64, c: f64, density: u32) -> Result<Option<QiWitness>> {
    search_quasi_isometry_with_budget(g1, g2, k, c, density, DEFAULT_NODE_BUDGET)
}

/// [`search_quasi_isometry`] with an explicit node budget.
pub fn search_quasi_isometry_with_budget(g1: &MetricGraph, g2: &MetricGraph, k: f64, c: f64, density: u32, budget: usize) -> Result<Option<QiWitness>> {
    thresholds(k, c)?;
    let xs = g1.sample_net(density)?;
    let ys = g2.sample_net(density)?;
    if xs.len() > MAX_SAMPLES || ys.len() > MAX_SAMPLES {
        return Err(Error::Resource(format!("sample nets of size {} and {} exceed {MAX_SAMPLES}", xs.len(), ys.len())));
    }
    let d1 = distance_matrix(g1, &xs);
    let d2 = distance_matrix(g2, &ys);
    let near: Vec<Bits> = d2
        .iter()
        .map(|row| {
            let mut b = Bits(vec![0; ys.len().div_ceil(WORDS)]);
            for (j, &d) in row.iter().enumerate() {
                if d < c {
                    b.0[j / WORDS] |= 1 << (j % WORDS);
                }
            }
            b
        })
        .collect();
    let order = farthest_first(&d1);
    let nodes = AtomicUsize::new(0);
    let s = Search { k, c, d1: &d1, d2: &d2, near: &near, order: &order, nodes: &nodes, budget };
    let anchor = order[0];
    let start = vec![Bits::full(ys.len()); xs.len()];
    let found = (0..ys.len())
        .into_par_iter()
        .map(|y| {
            let mut dom = start.clone();
            let mut assigned = vec![false; xs.len()];
            assigned[anchor] = true;
            if !s.propagate(&mut dom, &assigned, anchor, y) {
                return Ok(None);
            }
            s.solve(dom, &mut assigned)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(None),
        Some(Err(e)) => Err(e),
        Some(Ok(sol)) => {
            let sol = sol.expect("only solutions are kept");
            let w = QiWitness { domain: xs.clone(), image: sol.iter().map(|&j| ys[j]).collect() };
            if !verify_map(g1, g2, &w, k, c, &ys)? {
                return Err(Error::InvariantViolation("search returned a map that fails verification".into()));
            }
            Ok(Some(w))
        }
    }
}

/// Canonical adjacency code of the underlying multigraph: the least row-major
/// multiplicity matrix over vertex orders produced by individualization and refinement.
pub fn canonical_code(g: &MetricGraph) -> Result<Vec<u32>> {
    let n = g.vertices;
    if n > 12 {
        return Err(Error::Resource(format!("canonical form is limited to 12 vertices, got {n}")));
    }
    let mut adj = vec![vec![0u32; n]; n];
    for &(u, v, _) in &g.edges {
        adj[u][v] += 1;
        if u != v {
            adj[v][u] += 1;
        }
    }
    fn refine(adj: &[Vec<u32>], mut color: Vec<usize>) -> Vec<usize> {
        let n = adj.len();
        loop {
            let sig: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(usize, u32)> = (0..n).filter(|&w| adj[v][w] > 0).map(|w| (color[w], adj[v][w])).collect();
                    s.sort_unstable();
                    (color[v], s)
                })
                .collect();
            let keys: BTreeMap<&(usize, Vec<(usize, u32)>), usize> = sig.iter().map(|s| (s, 0)).collect();
            let rank: BTreeMap<_, usize> = keys.keys().enumerate().map(|(i, k)| (*k, i)).collect();
            let next: Vec<usize> = sig.iter().map(|s| rank[s]).collect();
            let before = color.iter().collect::<std::collections::BTreeSet<_>>().len();
            if rank.len() == before {
                return next;
            }
            color = next;
        }
    }
    fn search(adj: &[Vec<u32>], color: Vec<usize>, best: &mut Option<Vec<u32>>) {
        let n = adj.len();
        let color = refine(adj, color);
        let classes = color.iter().collect::<std::collections::BTreeSet<_>>().len();
        if classes == n {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| color[v]);
            let code: Vec<u32> = order.iter().flat_map(|&i| order.iter().map(move |&j| adj[i][j])).collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        // Individualize each vertex of the first non-singleton cell, smallest color first.
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &color {
            *sizes.entry(c).or_default() += 1;
        }
        let cell = *sizes.iter().find(|(_, &s)| s > 1).unwrap().0;
        for v in (0..n).filter(|&v| color[v] == cell) {
            let mut next: Vec<usize> = color.iter().map(|&c| 2 * c + 1).collect();
            next[v] = 2 * cell;
            search(adj, next, best);
        }
    }
    let mut best = None;
    search(&adj, vec![0; n], &mut best);
    let mut code = vec![n as u32];
    code.extend(best.unwrap_or_default());
    Ok(code)
}

/// Combinatorial isomorphism of the underlying multigraphs; lengths are ignored.
pub fn is_isomorphic(g1: &MetricGraph, g2: &MetricGraph) -> Result<bool> {
    Ok(canonical_code(g1)? == canonical_code(g2)?)
}

/// Small graphs without degree-two vertices, as `(name, vertices, edges)`.
pub fn small_graph_shapes() -> Vec<(&'static str, usize, Vec<(usize, usize)>)> {
    vec![
        ("bouquet2", 1, vec![(0, 0), (0, 0)]),
        ("bouquet3", 1, vec![(0, 0), (0, 0), (0, 0)]),
        ("theta", 2, vec![(0, 1), (0, 1), (0, 1)]),
        ("theta4", 2, vec![(0, 1), (0, 1), (0, 1), (0, 1)]),
        ("handcuff", 2, vec![(0, 0), (0, 1), (1, 1)]),
        ("k4", 4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    ]
}

/// One test case of the rigidity suite.
#[derive(Clone, Debug)]
pub struct QiCase {
    /// Short description.
    pub name: String,
    /// First graph.
    pub g1: MetricGraph,
    /// Second graph.
    pub g2: MetricGraph,
    /// Whether the underlying graphs are isomorphic by construction.
    pub isomorphic: bool,
}

/// Deterministic suite of `pairs` non-isomorphic and `pairs` isomorphic pairs with
/// integer lengths in `[min_len, min_len + 4]`.
pub fn rigidity_suite(pairs: usize, min_len: i64, seed: u64) -> Result<Vec<QiCase>> {
    let shapes = small_graph_shapes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengths = |m: usize, rng: &mut ChaCha8Rng| -> Vec<i64> { (0..m).map(|_| rng.gen_range(min_len..=min_len + 4)).collect() };
    let build = |(_, nv, es): &(&str, usize, Vec<(usize, usize)>), ls: &[i64]| {
        MetricGraph::from_integer_lengths(*nv, &es.iter().zip(ls).map(|(&(u, v), &l)| (u, v, l)).collect::<Vec<_>>())
    };
    let combos: Vec<(usize, usize)> = (0..shapes.len()).flat_map(|i| (i + 1..shapes.len()).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for p in 0..pairs {
        let (i, j) = combos[p % combos.len()];
        let (a, b) = (&shapes[i], &shapes[j]);
        let g1 = build(a, &lengths(a.2.len(), &mut rng))?;
        let g2 = build(b, &lengths(b.2.len(), &mut rng))?;
        out.push(QiCase { name: format!("{} vs {}", a.0, b.0), g1, g2, isomorphic: false });
    }
    for p in 0..pairs {
        let s = &shapes[p % shapes.len()];
        let g1 = build(s, &lengths(s.2.len(), &mut rng))?;
        let mut perm: Vec<usize> = (0..s.1).collect();
        let mut order: Vec<usize> = (0..s.2.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let g2 = g1.relabeled(&perm, &order)?;
        out.push(QiCase { name: format!("{} relabeled", s.0), g1, g2, isomorphic: true });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_values() {
        let p = thresholds(2.0, 1.0).unwrap();
        assert_eq!(p.u(), 336.0);
        assert!(p.boundary_regime());
        let p = thresholds(2.0, 2.0).unwrap();
        assert_eq!((p.k_prime(), p.c_prime(), p.s()), (2.0, 12.0, 4.0));
        assert!(thresholds(0.0, 2.0).is_err());
    }

    #[test]
    fn single_edge_distance() {
        let g = MetricGraph::from_integer_lengths(2, &[(0, 1, 7)]).unwrap();
        assert_eq!(distance(&g, &Point::Vertex(0), &Point::Vertex(1)).unwrap(), Ratio::from_integer(7));
        let p = Point::Edge { edge: 0, t: Ratio::new(5, 2) };
        assert_eq!(distance(&g, &p, &p).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn path_and_cycle_differ() {
        let path = MetricGraph::from_integer_lengths(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let cycle = MetricGraph::from_integer_lengths(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        assert!(!is_isomorphic(&path, &cycle).unwrap());
        assert!(is_isomorphic(&cycle, &cycle).unwrap());
    }
}
