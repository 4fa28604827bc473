//! Covers of the bouquet of two circles and the invariants that recover their gluing involution.
//!
//! A cover is a directed graph whose edges carry labels `a` and `b`, with one
//! incoming and one outgoing edge of each label at every vertex. Cutting the
//! cover open at a point inside a `b`-edge gives a graph with two boundary
//! vertices; its universal cover is a tree whose isomorphism type, without
//! labels, determines the involution the cover was built from.
//!
//! Per-vertex tree invariants (distance to the boundary, the isomorphism class
//! of the rooted view, and `d_a`) are invariant under deck transformations, so
//! they are computed once on the finite quotient and pulled back to the
//! explicit truncated tree along the covering projection.

use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::metricgraph::MetricGraph;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

/// Edge label of the bouquet of two circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// The first circle.
    A,
    /// The second circle.
    B,
}

/// Point interior to a `b`-edge where the cover is cut open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basepoint {
    /// Index into the cover's edge list.
    pub edge: usize,
}

/// A finite cover of the bouquet of two circles with a basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedCover {
    /// Number of vertices.
    pub vertices: usize,
    /// Directed labeled edges `(src, dst, label)`.
    pub edges: Vec<(usize, usize, Label)>,
    /// Basepoint descriptor.
    pub basepoint: Basepoint,
}

impl PointedCover {
    /// Checks one incoming and one outgoing edge of each label at every vertex, and connectivity.
    pub fn check_covering(&self) -> Result<()> {
        let mut out = vec![[0usize; 2]; self.vertices];
        let mut inc = vec![[0usize; 2]; self.vertices];
        for &(s, d, l) in &self.edges {
            if s >= self.vertices || d >= self.vertices {
                return Err(Error::Malformed(format!("edge ({s}, {d}) out of range")));
            }
            out[s][l as usize] += 1;
            inc[d][l as usize] += 1;
        }
        for v in 0..self.vertices {
            if out[v] != [1, 1] || inc[v] != [1, 1] {
                return Err(Error::Malformed(format!("vertex {v} violates the covering condition")));
            }
        }
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        let mut adj = vec![Vec::new(); self.vertices];
        for &(s, d, _) in &self.edges {
            adj[s].push(d);
            adj[d].push(s);
        }
        if self.vertices > 0 {
            seen[0] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Malformed("cover is disconnected".into()));
        }
        match self.edges.get(self.basepoint.edge) {
            Some(&(_, _, Label::B)) => Ok(()),
            _ => Err(Error::Malformed("basepoint must lie on a b-edge".into())),
        }
    }

    /// Vertex sets of the connected components of the `b`-edges.
    pub fn b_components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(s, d, l) in &self.edges {
            if l == Label::B {
                let (a, b) = (find(&mut parent, s), find(&mut parent, d));
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// The `4n`-vertex cover attached to an involution `σ` of `{1..n}`.
///
/// Vertex `v_i` (one-based) is stored at index `i-1`. The `a`-edges form the
/// cycle `v_i → v_{i+1}`. A `b` 1-cycle sits at `v_i` when `i` is even, when
/// `i ≥ 2n`, or when `i = 2j-1` with `σ(j) = j`; each transposition `(i j)`
/// adds a `b` 2-cycle between `v_{2i-1}` and `v_{2j-1}`. The basepoint lies on
/// the 1-cycle at `v_{4n-1}`.
pub fn build_cover(n: usize, sigma: &Involution) -> Result<PointedCover> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if sigma.len() != n {
        return Err(Error::InvalidInput(format!("σ acts on {} points, expected {n}", sigma.len())));
    }
    let nv = 4 * n;
    let mut edges = Vec::with_capacity(2 * nv);
    for i in 0..nv {
        edges.push((i, (i + 1) % nv, Label::A));
    }
    let mut basepoint = None;
    for i in 1..=nv {
        let odd_cut = i % 2 == 1 && i < 2 * n;
        let fixed = odd_cut && sigma.apply(i.div_ceil(2) - 1) == i.div_ceil(2) - 1;
        if i % 2 == 0 || i >= 2 * n || fixed {
            if i == nv - 1 {
                basepoint = Some(edges.len());
            }
            edges.push((i - 1, i - 1, Label::B));
        }
    }
    for (i, j) in sigma.transpositions() {
        let (vi, vj) = (2 * i, 2 * j);
        edges.push((vi, vj, Label::B));
        edges.push((vj, vi, Label::B));
    }
    let cover = PointedCover { vertices: nv, edges, basepoint: Basepoint { edge: basepoint.expect("v_{4n-1} carries a 1-cycle") } };
    cover.check_covering()?;
    Ok(cover)
}

/// A finite undirected multigraph with a set of boundary vertices. Labels may be erased.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryGraph {
    /// Number of vertices.
    pub vertices: usize,
    /// Undirected edges; `[v, v]` is a loop.
    pub edges: Vec<[usize; 2]>,
    /// Edge labels, if known.
    pub labels: Vec<Option<Label>>,
    /// Boundary flags per vertex.
    pub boundary: Vec<bool>,
}

impl BoundaryGraph {
    /// A copy with all labels erased.
    pub fn erase_labels(&self) -> Self {
        BoundaryGraph { labels: vec![None; self.edges.len()], ..self.clone() }
    }

    /// Half-edges leaving `v`, as `(edge, end)` with `end` the endpoint index at `v`.
    fn half_edges(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.vertices];
        for (e, &[x, y]) in self.edges.iter().enumerate() {
            out[x].push((e, 0));
            out[y].push((e, 1));
        }
        out
    }
}

/// Splits the basepoint edge: two new degree-one boundary vertices replace the point.
pub fn cut_basepoint(c: &PointedCover) -> BoundaryGraph {
    let nv = c.vertices;
    let mut edges = Vec::with_capacity(c.edges.len() + 1);
    let mut labels = Vec::with_capacity(c.edges.len() + 1);
    for (e, &(s, d, l)) in c.edges.iter().enumerate() {
        if e == c.basepoint.edge {
            edges.push([s, nv]);
            labels.push(Some(l));
            edges.push([d, nv + 1]);
            labels.push(Some(l));
        } else {
            edges.push([s, d]);
            labels.push(Some(l));
        }
    }
    let mut boundary = vec![false; nv + 2];
    boundary[nv] = true;
    boundary[nv + 1] = true;
    BoundaryGraph { vertices: nv + 2, edges, labels, boundary }
}

/// Deck-invariant data of the universal cover, computed on the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    /// Distance from each vertex to the boundary.
    pub dist: Vec<Option<usize>>,
    /// Class of each vertex's rooted view in the tree (stable color refinement).
    pub view_class: Vec<usize>,
    /// Refinement rounds until the coloring stabilized.
    pub rounds: usize,
    /// Quotient edges whose lifts lie in `E1`.
    pub e1: Vec<bool>,
    /// Quotient edges whose lifts lie in `E2`.
    pub e2: Vec<bool>,
    /// Quotient edges whose endpoints are equidistant from the boundary (diagnostic).
    pub equidistant: Vec<bool>,
    /// `d_a` of each vertex: zero on the boundary, otherwise one plus the least
    /// number of `E2` edges on a path to a neighbor of the boundary.
    pub d_a: Vec<Option<usize>>,
}

/// Stable color refinement starting from the boundary marking; neighbors are
/// counted over half-edges, so a loop contributes its vertex twice.
fn refine(g: &BoundaryGraph) -> (Vec<usize>, usize) {
    let halves = g.half_edges();
    let other = |e: usize, end: usize| g.edges[e][1 - end];
    let mut color: Vec<usize> = g.boundary.iter().map(|&b| b as usize).collect();
    let mut classes = color.iter().collect::<BTreeSet<_>>().len();
    let mut rounds = 0;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..g.vertices)
            .map(|v| {
                let mut ns: Vec<usize> = halves[v].iter().map(|&(e, end)| color[other(e, end)]).collect();
                ns.sort_unstable();
                (color[v], ns)
            })
            .collect();
        let mut index: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in &sigs {
            let k = index.len();
            index.entry(s).or_insert(k);
        }
        // Renumber by sorted signature so that class ids do not depend on vertex order.
        let ordered: BTreeMap<&(usize, Vec<usize>), usize> = index.keys().enumerate().map(|(i, &k)| (k, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| ordered[s]).collect();
        let n_next = ordered.len();
        rounds += 1;
        if n_next == classes {
            return (color, rounds);
        }
        color = next;
        classes = n_next;
    }
}

/// Computes the deck-invariant tree data on a graph with boundary.
pub fn quotient_invariants(g: &BoundaryGraph) -> QuotientInvariants {
    let halves = g.half_edges();
    let mut dist = vec![None; g.vertices];
    let mut queue = VecDeque::new();
    for v in 0..g.vertices {
        if g.boundary[v] {
            dist[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(e, end) in &halves[v] {
            let w = g.edges[e][1 - end];
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    let (view_class, rounds) = refine(g);
    let e1: Vec<bool> = g.edges.iter().map(|&[x, y]| view_class[x] == view_class[y]).collect();
    let equidistant: Vec<bool> = g.edges.iter().map(|&[x, y]| dist[x] == dist[y]).collect();
    // A lift of edge e is adjacent to the lifts of every other half-edge at its two endpoints.
    let e2: Vec<bool> = (0..g.edges.len())
        .map(|e| {
            if e1[e] {
                return false;
            }
            let [x, y] = g.edges[e];
            let mut count = 0;
            for (v, end) in [(x, 0), (y, 1)] {
                for &(f, fend) in &halves[v] {
                    if (f, fend) != (e, end) && e1[f] {
                        count += 1;
                    }
                }
            }
            count >= 2
        })
        .collect();
    let mut d_a = vec![None; g.vertices];
    let mut queue = VecDeque::new();
    for v in 0..g.vertices {
        if g.boundary[v] {
            d_a[v] = Some(0);
        }
    }
    for v in 0..g.vertices {
        if !g.boundary[v] && halves[v].iter().any(|&(e, end)| g.boundary[g.edges[e][1 - end]]) {
            d_a[v] = Some(1);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(e, end) in &halves[v] {
            let w = g.edges[e][1 - end];
            if e2[e] && d_a[w].is_none() {
                d_a[w] = Some(d_a[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    QuotientInvariants { dist, view_class, rounds, e1, e2, equidistant, d_a }
}

const TREE_NODE_BUDGET: usize = 20_000_000;

/// Ball of radius `R` around one boundary lift in the universal cover of a graph with boundary.
///
/// Nodes are stored as parent arrays. Node 0 is the root; every other node
/// records its parent, the quotient edge it was reached along, and the quotient
/// vertex it projects to.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedTree {
    /// The graph being unwrapped.
    pub quotient: BoundaryGraph,
    /// Truncation radius.
    pub radius: usize,
    /// Parent of each node (`u32::MAX` for the root).
    pub parent: Vec<u32>,
    /// Quotient edge from the parent to each node (`u32::MAX` for the root).
    pub via: Vec<u32>,
    /// Quotient vertex of each node.
    pub proj: Vec<u32>,
    /// Depth of each node.
    pub depth: Vec<u16>,
}

impl TruncatedTree {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.parent.len()
    }
    /// True when the tree has no nodes.
    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
    /// Whether a node lies in `∂T`.
    pub fn is_boundary(&self, node: usize) -> bool {
        self.quotient.boundary[self.proj[node] as usize]
    }
    /// Whether a node sits at the truncation radius and may be missing neighbors.
    pub fn is_frontier(&self, node: usize) -> bool {
        self.depth[node] as usize == self.radius
    }
    /// Label of the edge from a node's parent, if labels are known.
    pub fn label(&self, node: usize) -> Option<Label> {
        match self.via[node] {
            u32::MAX => None,
            e => self.quotient.labels[e as usize],
        }
    }
    /// A copy whose quotient labels are erased.
    pub fn erase_labels(&self) -> Self {
        TruncatedTree { quotient: self.quotient.erase_labels(), ..self.clone() }
    }
}

/// Default truncation radius for covers built from an involution on `n` points.
pub fn default_radius(n: usize) -> usize {
    2 * n + 2
}

/// Unwraps `g` from its first boundary vertex out to radius `r`.
pub fn truncated_universal_cover(g: &BoundaryGraph, r: usize) -> Result<TruncatedTree> {
    if r == 0 {
        return Err(Error::InvalidInput("truncation radius must be at least 1".into()));
    }
    if r > u16::MAX as usize {
        return Err(Error::Resource(format!("radius {r} exceeds the depth field")));
    }
    let root = g
        .boundary
        .iter()
        .position(|&b| b)
        .ok_or_else(|| Error::InvalidInput("graph has no boundary vertex".into()))?;
    let halves = g.half_edges();
    let mut t = TruncatedTree {
        quotient: g.clone(),
        radius: r,
        parent: vec![u32::MAX],
        via: vec![u32::MAX],
        proj: vec![root as u32],
        depth: vec![0],
    };
    let mut arrival: Vec<(u32, u8)> = vec![(u32::MAX, 0)];
    let mut head = 0;
    while head < t.len() {
        let node = head;
        head += 1;
        if t.depth[node] as usize >= r {
            continue;
        }
        let v = t.proj[node] as usize;
        let (ae, aend) = arrival[node];
        for &(e, end) in &halves[v] {
            // Skip the reverse of the half-edge we arrived along.
            if ae != u32::MAX && e == ae as usize && end == 1 - aend as usize {
                continue;
            }
            if t.len() >= TREE_NODE_BUDGET {
                return Err(Error::Resource(format!(
                    "truncated tree at radius {r} exceeds the budget of {TREE_NODE_BUDGET} nodes"
                )));
            }
            t.parent.push(node as u32);
            t.via.push(e as u32);
            t.proj.push(g.edges[e][1 - end] as u32);
            t.depth.push(t.depth[node] + 1);
            arrival.push((e as u32, (1 - end) as u8));
        }
    }
    Ok(t)
}

/// The `E1`/`E2`/`d_a` invariants on the explicit tree. Tree edges are named by their child node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeInvariants {
    /// Tree edges whose endpoints have isomorphic rooted views.
    pub e1: Vec<usize>,
    /// Tree edges outside `E1` adjacent to at least two `E1` edges.
    pub e2: Vec<usize>,
    /// Tree edges whose endpoints are equidistant from `∂T` (diagnostic).
    pub equidistant: Vec<usize>,
    /// `d_a` per node.
    pub d_a: Vec<Option<usize>>,
    /// Nodes grouped by `d_a`.
    pub levels: BTreeMap<usize, Vec<usize>>,
}

/// Computes the tree invariants without reading labels, then checks that `E2`
/// is exactly the set of `a`-edge lifts wherever labels are known.
pub fn tree_invariants(t: &TruncatedTree) -> Result<TreeInvariants> {
    let q = quotient_invariants(&t.quotient.erase_labels());
    let mut inv = TreeInvariants { e1: Vec::new(), e2: Vec::new(), equidistant: Vec::new(), d_a: Vec::with_capacity(t.len()), levels: BTreeMap::new() };
    for node in 0..t.len() {
        let d = q.d_a[t.proj[node] as usize];
        inv.d_a.push(d);
        if let Some(d) = d {
            inv.levels.entry(d).or_default().push(node);
        }
        if node == 0 {
            continue;
        }
        let e = t.via[node] as usize;
        if q.e1[e] {
            inv.e1.push(node);
        }
        if q.e2[e] {
            inv.e2.push(node);
        }
        if q.equidistant[e] {
            inv.equidistant.push(node);
        }
        if let Some(l) = t.label(node) {
            if (l == Label::A) != q.e2[e] {
                return Err(Error::InvariantViolation(format!(
                    "tree edge into node {node} is labeled {l:?} but E2 membership is {}",
                    q.e2[e]
                )));
            }
        }
    }
    Ok(inv)
}

/// Reconstructs `σ` from the levels of `d_a`: the transposition `(i j)` is
/// present iff some tree edge joins level `2i+1` to level `2j+1`.
pub fn recover_sigma(t: &TruncatedTree) -> Result<Involution> {
    let q = quotient_invariants(&t.quotient.erase_labels());
    let d_a: Vec<Option<usize>> = t.proj.iter().map(|&v| q.d_a[v as usize]).collect();
    let top = d_a.iter().flatten().copied().max().ok_or_else(|| Error::Malformed("tree has no levels".into()))?;
    if top < 3 || top % 2 == 0 {
        return Err(Error::Malformed(format!("deepest d_a level {top} is not of the form 2n+1")));
    }
    let n = (top - 1) / 2;
    let mut images: Vec<Option<usize>> = vec![None; n];
    for node in 1..t.len() {
        let parent = t.parent[node] as usize;
        let (Some(x), Some(y)) = (d_a[node], d_a[parent]) else { continue };
        if x == y || x % 2 == 0 || y % 2 == 0 || x < 3 || y < 3 {
            continue;
        }
        let (i, j) = ((x - 3) / 2, (y - 3) / 2);
        for (p, q) in [(i, j), (j, i)] {
            match images[p] {
                None => images[p] = Some(q),
                Some(old) if old == q => {}
                Some(old) => {
                    return Err(Error::Malformed(format!(
                        "level {} joins both level {} and level {}",
                        2 * p + 3,
                        2 * old + 3,
                        2 * q + 3
                    )))
                }
            }
        }
    }
    let table: Vec<usize> = images.iter().enumerate().map(|(i, m)| m.unwrap_or(i)).collect();
    Involution::new(table).map_err(|e| Error::Malformed(e.to_string()))
}

/// The `2s`-vertex cover: one `a`-cycle, a `b` 2-cycle joining `u_0` and `u_s`,
/// and `b` 1-cycles at the remaining `2s-2` vertices. The basepoint lies on the
/// 1-cycle at `u_1`.
pub fn initcover(s: usize) -> Result<PointedCover> {
    if s < 2 {
        return Err(Error::InvalidInput("initcover needs s ≥ 2".into()));
    }
    let nv = 2 * s;
    let mut edges: Vec<(usize, usize, Label)> = (0..nv).map(|i| (i, (i + 1) % nv, Label::A)).collect();
    edges.push((0, s, Label::B));
    edges.push((s, 0, Label::B));
    let mut basepoint = None;
    for v in 1..nv {
        if v != s {
            if basepoint.is_none() {
                basepoint = Some(edges.len());
            }
            edges.push((v, v, Label::B));
        }
    }
    let c = PointedCover { vertices: nv, edges, basepoint: Basepoint { edge: basepoint.unwrap() } };
    c.check_covering()?;
    Ok(c)
}

/// The graph of `a`-edges with the vertices of `btilde` identified, smoothed at
/// degree-two vertices; for [`initcover`] this is a bouquet of two circles.
pub fn collapse_to_bouquet(c: &PointedCover, btilde: &[usize]) -> Result<MetricGraph> {
    let comps = c.b_components();
    let mut sorted = btilde.to_vec();
    sorted.sort_unstable();
    if !comps.contains(&sorted) {
        return Err(Error::InvalidInput(format!("{btilde:?} is not a b-component")));
    }
    let hub = sorted[0];
    let rep = |v: usize| if sorted.binary_search(&v).is_ok() { hub } else { v };
    let a_edges: Vec<[usize; 2]> = c.edges.iter().filter(|e| e.2 == Label::A).map(|&(s, d, _)| [rep(s), rep(d)]).collect();
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for &[x, y] in &a_edges {
        *degree.entry(x).or_default() += 1;
        *degree.entry(y).or_default() += 1;
    }
    let branch: Vec<usize> = {
        let mut b: Vec<usize> = degree.iter().filter(|(_, &d)| d != 2).map(|(&v, _)| v).collect();
        b.sort_unstable();
        b
    };
    if branch != vec![hub] || degree[&hub] != 4 {
        return Err(Error::Malformed("identifying the component does not leave a single degree-4 vertex".into()));
    }
    // Walk each loop out of the hub along unused edges.
    let mut used = vec![false; a_edges.len()];
    let mut lengths = Vec::new();
    loop {
        let Some(start) = (0..a_edges.len()).find(|&e| !used[e] && a_edges[e].contains(&hub)) else { break };
        used[start] = true;
        let mut cur = if a_edges[start][0] == hub { a_edges[start][1] } else { a_edges[start][0] };
        let mut len = 1i64;
        while cur != hub {
            let e = (0..a_edges.len()).find(|&e| !used[e] && a_edges[e].contains(&cur)).ok_or_else(|| Error::Malformed("dangling a-path".into()))?;
            used[e] = true;
            cur = if a_edges[e][0] == cur { a_edges[e][1] } else { a_edges[e][0] };
            len += 1;
        }
        lengths.push(len);
    }
    if lengths.len() != 2 || used.iter().any(|u| !u) {
        return Err(Error::Malformed(format!("collapse yields {} loops, not 2", lengths.len())));
    }
    MetricGraph::new(1, vec![(0, 0, Ratio::from_integer(lengths[0])), (0, 0, Ratio::from_integer(lengths[1]))])
}

/// Exhaustive count of simple graphs on `v` labeled vertices with maximum degree at most `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphCount {
    /// Number of vertices.
    pub vertices: usize,
    /// Degree cap.
    pub max_degree: usize,
    /// Exact count.
    pub count: u64,
    /// `v^(n v)`.
    pub bound: u128,
    /// Whether `count ≤ bound`.
    pub holds: bool,
}

/// Counts simple undirected graphs on `v` labeled vertices with every degree at most `n`.
pub fn count_bounded_degree_graphs(v: usize, n: usize) -> Result<GraphCount> {
    if v > 5 || n > 4 {
        return Err(Error::Resource(format!("graph count guard is |V| ≤ 5 and n ≤ 4, got |V| = {v}, n = {n}")));
    }
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
    let mut count = 0u64;
    for mask in 0u32..(1u32 << pairs.len()) {
        let mut deg = [0usize; 5];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        if deg[..v].iter().all(|&d| d <= n) {
            count += 1;
        }
    }
    let bound = (v as u128).pow((n * v) as u32);
    Ok(GraphCount { vertices: v, max_degree: n, count, bound, holds: count as u128 <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_cover() {
        let c = build_cover(1, &Involution::identity(1)).unwrap();
        assert_eq!(c.vertices, 4);
        assert_eq!(c.edges.iter().filter(|e| e.2 == Label::B && e.0 == e.1).count(), 4);
        let g = cut_basepoint(&c);
        assert_eq!(g.vertices, 6);
        assert_eq!(g.edges.len(), c.edges.len() + 1);
    }

    #[test]
    fn round_trip_small() {
        for n in 1..=3 {
            for s in Involution::all(n) {
                let t = truncated_universal_cover(&cut_basepoint(&build_cover(n, &s).unwrap()), default_radius(n)).unwrap();
                assert_eq!(recover_sigma(&t).unwrap(), s);
            }
        }
    }

    #[test]
    fn graph_counts() {
        let c = count_bounded_degree_graphs(2, 1).unwrap();
        assert_eq!((c.count, c.bound, c.holds), (2, 4, true));
        let c = count_bounded_degree_graphs(3, 0).unwrap();
        assert_eq!((c.count, c.bound), (1, 1));
    }
}
