//! Combinatorial right-angled polyhedra.
//!
//! A polyhedron is a cell decomposition of the 2-sphere given by its faces
//! (cyclic sequences of edge ids) and its edges (the pair of faces each one
//! borders). Vertices are derived: in a simple polyhedron every vertex is the
//! meeting point of exactly three faces, so a vertex is named by the sorted
//! triple of faces around it.

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Face-to-face data derived from consistent incidence lists.
#[derive(Clone, Debug)]
struct Topology {
    adjacency: Vec<Vec<bool>>,
    /// `neighbors[f][k]` is the face across the `k`-th edge of `f`.
    neighbors: Vec<Vec<usize>>,
    /// Sorted face triples.
    vertices: Vec<[usize; 3]>,
    /// `corner_vertex[f][k]` is the vertex between edges `k` and `k+1` of `f`.
    corner_vertex: Vec<Vec<usize>>,
    edge_vertices: Vec<[usize; 2]>,
}

/// A combinatorial polyhedron. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    faces: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
    topo: std::result::Result<Topology, Vec<Problem>>,
}

/// One failed check, tagged structural when incidence itself is broken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Problem {
    /// True when the incidence data is not a closed 2-sphere complex.
    pub structural: bool,
    /// Human-readable reason.
    pub message: String,
}

impl Problem {
    fn structural(message: String) -> Self {
        Problem { structural: true, message }
    }
    fn coxeter(message: String) -> Self {
        Problem { structural: false, message }
    }
}

/// Outcome of [`validate_right_angled`]. Empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Every violated invariant, structural ones first.
    pub problems: Vec<Problem>,
}

impl ValidationReport {
    /// True when no invariant is violated.
    pub fn is_empty(&self) -> bool {
        self.problems.is_empty()
    }
    /// True when some incidence-level check failed.
    pub fn has_structural_failure(&self) -> bool {
        self.problems.iter().any(|p| p.structural)
    }
    /// Messages of the problems in report order.
    pub fn messages(&self) -> Vec<String> {
        self.problems.iter().map(|p| p.message.clone()).collect()
    }
}

/// Serialized form: `faces` as edge-id cycles, `edges` as face pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronDoc {
    /// Each face as a cyclic sequence of edge ids.
    pub faces: Vec<Vec<usize>>,
    /// Each edge as the pair of faces it borders.
    pub edges: Vec<[usize; 2]>,
}

impl Polyhedron {
    /// Builds a polyhedron from incidence lists. Only index ranges are checked
    /// here; incidence consistency is reported by [`validate_right_angled`].
    pub fn new(faces: Vec<Vec<usize>>, edges: Vec<[usize; 2]>) -> Result<Self> {
        for (f, cyc) in faces.iter().enumerate() {
            if let Some(&e) = cyc.iter().find(|&&e| e >= edges.len()) {
                return Err(Error::InvalidInput(format!("face {f} names edge {e}, but there are {} edges", edges.len())));
            }
        }
        for (e, pair) in edges.iter().enumerate() {
            if let Some(&f) = pair.iter().find(|&&f| f >= faces.len()) {
                return Err(Error::InvalidInput(format!("edge {e} names face {f}, but there are {} faces", faces.len())));
            }
        }
        let topo = build_topology(&faces, &edges);
        Ok(Polyhedron { faces, edges, topo })
    }

    /// Builds a polyhedron from faces given as cycles of vertex labels.
    pub fn from_vertex_cycles(cycles: &[Vec<usize>]) -> Result<Self> {
        let mut edge_id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edge_faces: Vec<Vec<usize>> = Vec::new();
        let mut faces = Vec::with_capacity(cycles.len());
        for (f, cyc) in cycles.iter().enumerate() {
            let k = cyc.len();
            let mut face = Vec::with_capacity(k);
            for i in 0..k {
                let (a, b) = (cyc[i], cyc[(i + 1) % k]);
                let key = (a.min(b), a.max(b));
                let next = edge_id.len();
                let id = *edge_id.entry(key).or_insert(next);
                if id == edge_faces.len() {
                    edge_faces.push(Vec::new());
                }
                edge_faces[id].push(f);
                face.push(id);
            }
            faces.push(face);
        }
        let mut edges = Vec::with_capacity(edge_faces.len());
        for (e, fs) in edge_faces.iter().enumerate() {
            if fs.len() != 2 {
                return Err(Error::Structural(format!("edge {e} borders {} faces", fs.len())));
            }
            edges.push([fs[0], fs[1]]);
        }
        Polyhedron::new(faces, edges)
    }

    /// Parses the JSON document form and re-derives vertices.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolyhedronDoc = serde_json::from_str(text)?;
        Polyhedron::new(doc.faces, doc.edges)
    }

    /// JSON document form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc()).expect("plain data serializes")
    }

    /// Document form.
    pub fn doc(&self) -> PolyhedronDoc {
        PolyhedronDoc { faces: self.faces.clone(), edges: self.edges.clone() }
    }

    fn topo(&self) -> Result<&Topology> {
        self.topo.as_ref().map_err(|probs| {
            Error::Structural(probs.iter().map(|p| p.message.as_str()).collect::<Vec<_>>().join("; "))
        })
    }

    /// Number of faces.
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }
    /// Number of edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    /// Number of vertices, or zero if the incidence data is inconsistent.
    pub fn num_vertices(&self) -> usize {
        self.topo.as_ref().map(|t| t.vertices.len()).unwrap_or(0)
    }
    /// Edge cycle of face `f`.
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }
    /// All faces as edge cycles.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }
    /// Faces bordering edge `e`.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }
    /// All edges as face pairs.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }
    /// True when the incidence data describes a closed cell complex.
    pub fn is_well_formed(&self) -> bool {
        self.topo.is_ok()
    }
    /// Whether faces `f` and `g` share an edge.
    pub fn adjacent(&self, f: usize, g: usize) -> bool {
        self.topo.as_ref().map(|t| t.adjacency[f][g]).unwrap_or(false)
    }
    /// Faces across the edges of `f`, in the cyclic order of `f`.
    pub fn neighbors(&self, f: usize) -> &[usize] {
        &self.topo.as_ref().expect("well-formed polyhedron").neighbors[f]
    }
    /// Vertices as sorted face triples.
    pub fn vertices(&self) -> &[[usize; 3]] {
        &self.topo.as_ref().expect("well-formed polyhedron").vertices
    }
    /// Vertex between edges `k` and `k+1` of face `f`.
    pub fn corner_vertex(&self, f: usize, k: usize) -> usize {
        self.topo.as_ref().expect("well-formed polyhedron").corner_vertex[f][k]
    }
    /// The two endpoints of edge `e`.
    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        self.topo.as_ref().expect("well-formed polyhedron").edge_vertices[e]
    }
    /// Face of edge `e` other than `f`.
    pub fn other_face(&self, e: usize, f: usize) -> usize {
        let [a, b] = self.edges[e];
        if a == f {
            b
        } else {
            a
        }
    }
    /// Position of edge `e` in the cycle of face `f`.
    pub fn edge_position(&self, f: usize, e: usize) -> Option<usize> {
        self.faces[f].iter().position(|&x| x == e)
    }
    /// The edge shared by faces `f` and `g`, if any.
    pub fn shared_edge(&self, f: usize, g: usize) -> Option<usize> {
        self.faces[f].iter().copied().find(|&e| self.other_face(e, f) == g && self.edges[e].contains(&f))
    }
    /// The third edge at the vertex between edges `k` and `k+1` of `f`.
    pub fn leaving_edge(&self, f: usize, k: usize) -> usize {
        let t = self.topo.as_ref().expect("well-formed polyhedron");
        let cyc = &self.faces[f];
        let (e1, e2) = (cyc[k], cyc[(k + 1) % cyc.len()]);
        let g1 = self.other_face(e1, f);
        let g2 = self.other_face(e2, f);
        let _ = t;
        self.shared_edge(g1, g2).expect("simple vertex has a third edge")
    }
}

fn build_topology(faces: &[Vec<usize>], edges: &[[usize; 2]]) -> std::result::Result<Topology, Vec<Problem>> {
    let mut probs = Vec::new();
    let nf = faces.len();
    let mut seen_in: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (f, cyc) in faces.iter().enumerate() {
        if cyc.len() < 3 {
            probs.push(Problem::structural(format!("face {f} has only {} edges", cyc.len())));
        }
        for &e in cyc {
            seen_in[e].push(f);
        }
    }
    for (e, fs) in seen_in.iter().enumerate() {
        let mut listed = edges[e].to_vec();
        listed.sort_unstable();
        let mut fs = fs.clone();
        fs.sort_unstable();
        if fs.len() != 2 || fs[0] == fs[1] {
            probs.push(Problem::structural(format!("edge {e} borders {} faces", fs.len())));
        } else if fs != listed {
            probs.push(Problem::structural(format!("edge {e} is listed as bordering faces {listed:?} but appears in faces {fs:?}")));
        }
    }
    if !probs.is_empty() {
        return Err(probs);
    }
    let mut adjacency = vec![vec![false; nf]; nf];
    let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
    for &[a, b] in edges {
        adjacency[a][b] = true;
        adjacency[b][a] = true;
        *pair_count.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let mut multi: Vec<_> = pair_count.iter().filter(|(_, &c)| c > 1).map(|(&k, _)| k).collect();
    multi.sort_unstable();
    for (a, b) in multi {
        probs.push(Problem::structural(format!("faces {a} and {b} share more than one edge")));
    }
    if !probs.is_empty() {
        return Err(probs);
    }
    let other = |e: usize, f: usize| if edges[e][0] == f { edges[e][1] } else { edges[e][0] };
    let neighbors: Vec<Vec<usize>> =
        faces.iter().enumerate().map(|(f, cyc)| cyc.iter().map(|&e| other(e, f)).collect()).collect();
    let mut triple_count: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut corner_triples: Vec<Vec<[usize; 3]>> = Vec::with_capacity(nf);
    for (f, cyc) in faces.iter().enumerate() {
        let k = cyc.len();
        let mut row = Vec::with_capacity(k);
        for i in 0..k {
            let mut t = [f, neighbors[f][i], neighbors[f][(i + 1) % k]];
            t.sort_unstable();
            *triple_count.entry(t).or_default() += 1;
            row.push(t);
        }
        corner_triples.push(row);
    }
    let bad: Vec<_> = triple_count.iter().filter(|(_, &c)| c != 3).collect();
    if !bad.is_empty() {
        let (t, c) = bad[0];
        probs.push(Problem::coxeter(format!(
            "vertex of degree other than 3 ({} inconsistent corners, e.g. faces {t:?} meet at {c} corners)",
            bad.len()
        )));
        return Err(probs);
    }
    let vertices: Vec<[usize; 3]> = triple_count.keys().copied().collect();
    let index: HashMap<[usize; 3], usize> = vertices.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let corner_vertex: Vec<Vec<usize>> =
        corner_triples.iter().map(|row| row.iter().map(|t| index[t]).collect()).collect();
    let mut edge_vertices = vec![[usize::MAX; 2]; edges.len()];
    for (f, cyc) in faces.iter().enumerate() {
        let k = cyc.len();
        for i in 0..k {
            let e = cyc[i];
            let a = corner_vertex[f][(i + k - 1) % k];
            let b = corner_vertex[f][i];
            edge_vertices[e] = [a.min(b), a.max(b)];
        }
    }
    Ok(Topology { adjacency, neighbors, vertices, corner_vertex, edge_vertices })
}

/// The regular dodecahedron: 12 pentagons, 30 edges, 20 vertices.
pub fn dodecahedron() -> Polyhedron {
    // Vertices: top ring a_i = i, upper ring b_i = 5+i, lower ring c_i = 10+i, bottom ring d_i = 15+i.
    let a = |i: usize| i % 5;
    let b = |i: usize| 5 + i % 5;
    let c = |i: usize| 10 + i % 5;
    let d = |i: usize| 15 + i % 5;
    let mut cycles = vec![(0..5).map(a).collect::<Vec<_>>()];
    for i in 0..5 {
        cycles.push(vec![a(i), a(i + 1), b(i + 1), c(i), b(i)]);
    }
    for i in 0..5 {
        cycles.push(vec![d(i), d(i + 1), c(i + 1), b(i + 1), c(i)]);
    }
    cycles.push((0..5).rev().map(d).collect());
    Polyhedron::from_vertex_cycles(&cycles).expect("dodecahedron is well formed")
}

/// The cube, a simple polyhedron that is not right-angled in the required sense.
pub fn cube() -> Polyhedron {
    let cycles = vec![
        vec![0, 1, 2, 3],
        vec![4, 7, 6, 5],
        vec![0, 4, 5, 1],
        vec![1, 5, 6, 2],
        vec![2, 6, 7, 3],
        vec![3, 7, 4, 0],
    ];
    Polyhedron::from_vertex_cycles(&cycles).expect("cube is well formed")
}

/// Looks up a built-in polyhedron by name.
pub fn builtin(name: &str) -> Option<Polyhedron> {
    match name {
        "dodecahedron" => Some(dodecahedron()),
        "cube" => Some(cube()),
        _ => None,
    }
}

/// Lists every violated invariant of a right-angled polyhedron.
pub fn validate_right_angled(p: &Polyhedron) -> ValidationReport {
    let topo = match &p.topo {
        Err(probs) => return ValidationReport { problems: probs.clone() },
        Ok(t) => t,
    };
    let mut problems = Vec::new();
    let nf = p.num_faces();
    if !faces_connected(p, &(0..nf).collect::<Vec<_>>()) {
        problems.push(Problem::structural("face adjacency graph is disconnected".into()));
    }
    let chi = topo.vertices.len() as i64 - p.num_edges() as i64 + nf as i64;
    if chi != 2 {
        problems.push(Problem::structural(format!("Euler characteristic is {chi}, not 2")));
    }
    for (f, cyc) in p.faces.iter().enumerate() {
        if cyc.len() < 5 {
            problems.push(Problem::coxeter(format!("face with {} edges (face {f})", cyc.len())));
        }
    }
    if let Some(l) = short_face_loop(p, 3) {
        problems.push(Problem::coxeter(format!("face loop of length 3: {l:?}")));
    }
    if let Some(l) = short_face_loop(p, 4) {
        problems.push(Problem::coxeter(format!("face loop of length 4: {l:?}")));
    }
    if nf < 12 {
        problems.push(Problem::coxeter(format!("only {nf} faces, fewer than 12")));
    }
    ValidationReport { problems }
}

/// Finds a face loop of length 3 or 4, if one exists.
fn short_face_loop(p: &Polyhedron, len: usize) -> Option<Vec<usize>> {
    let nf = p.num_faces();
    for a in 0..nf {
        for &b in p.neighbors(a) {
            if b <= a {
                continue;
            }
            for &c in p.neighbors(b) {
                if c <= a || c == b {
                    continue;
                }
                if len == 3 {
                    if c > b && p.adjacent(a, c) && is_face_loop(p, &[a, b, c]).unwrap_or(false) {
                        return Some(vec![a, b, c]);
                    }
                    continue;
                }
                for &d in p.neighbors(c) {
                    if d <= a || d == b || d == c || !p.adjacent(d, a) {
                        continue;
                    }
                    if is_face_loop(p, &[a, b, c, d]).unwrap_or(false) {
                        return Some(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// Whether `faces` is a face loop: consecutive faces adjacent (cyclically),
/// non-consecutive faces not adjacent. Lists shorter than 3 are never loops.
/// Three faces meeting at a common vertex do not form a loop.
pub fn is_face_loop(p: &Polyhedron, faces: &[usize]) -> Result<bool> {
    let n = faces.len();
    let distinct: BTreeSet<_> = faces.iter().collect();
    if distinct.len() != n {
        return Err(Error::InvalidInput(format!("repeated face in {faces:?}")));
    }
    if let Some(&f) = faces.iter().find(|&&f| f >= p.num_faces()) {
        return Err(Error::InvalidInput(format!("face {f} out of range")));
    }
    if n < 3 {
        return Ok(false);
    }
    for i in 0..n {
        for j in i + 1..n {
            let consecutive = j == i + 1 || (i == 0 && j == n - 1);
            if consecutive != p.adjacent(faces[i], faces[j]) {
                return Ok(false);
            }
        }
    }
    if n == 3 {
        let mut t = [faces[0], faces[1], faces[2]];
        t.sort_unstable();
        if p.topo()?.vertices.binary_search(&t).is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn faces_connected(p: &Polyhedron, set: &[usize]) -> bool {
    if set.is_empty() {
        return false;
    }
    let inside: BTreeSet<usize> = set.iter().copied().collect();
    let mut seen = BTreeSet::from([set[0]]);
    let mut stack = vec![set[0]];
    while let Some(f) = stack.pop() {
        for &g in p.neighbors(f) {
            if inside.contains(&g) && seen.insert(g) {
                stack.push(g);
            }
        }
    }
    seen.len() == inside.len()
}

/// Closed subcomplex counts `(V, E, F)` spanned by a face set.
pub fn subcomplex_counts(p: &Polyhedron, set: &[usize]) -> (usize, usize, usize) {
    let inside: BTreeSet<usize> = set.iter().copied().collect();
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &f in &inside {
        for (k, &e) in p.face(f).iter().enumerate() {
            edges.insert(e);
            verts.insert(p.corner_vertex(f, k));
        }
    }
    (verts.len(), edges.len(), inside.len())
}

/// Whether `set` is nonempty, adjacency-connected and spans a subcomplex with Euler characteristic 1.
pub fn is_face_disk(p: &Polyhedron, set: &[usize]) -> bool {
    if set.is_empty() || !p.is_well_formed() || set.iter().any(|&f| f >= p.num_faces()) {
        return false;
    }
    if !faces_connected(p, set) {
        return false;
    }
    let (v, e, f) = subcomplex_counts(p, set);
    v as i64 - e as i64 + f as i64 == 1
}

/// A validated face disk together with its boundary data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDisk {
    /// Sorted face ids.
    pub faces: Vec<usize>,
    /// Boundary edges in cyclic order.
    pub boundary_edges: Vec<usize>,
    /// Complement faces across the boundary, cyclically ordered, consecutive repeats merged.
    pub transverse_faces: Vec<usize>,
    /// Boundary vertices lying on exactly one face of the disk.
    pub corner_vertices: usize,
    /// Number of edges in the closed subcomplex.
    pub edge_count: usize,
}

impl FaceDisk {
    /// Validates `set` as a face disk of `p` and records its boundary.
    pub fn new(p: &Polyhedron, set: &[usize]) -> Result<Self> {
        if !is_face_disk(p, set) {
            return Err(Error::InvalidInput(format!("faces {set:?} do not form a face disk")));
        }
        let faces: Vec<usize> = set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let inside: BTreeSet<usize> = faces.iter().copied().collect();
        let mut boundary: Vec<usize> = Vec::new();
        let mut edge_set = BTreeSet::new();
        for &f in &faces {
            for &e in p.face(f) {
                edge_set.insert(e);
                if !inside.contains(&p.other_face(e, f)) {
                    boundary.push(e);
                }
            }
        }
        boundary.sort_unstable();
        let mut at_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &e in &boundary {
            for v in p.edge_vertices(e) {
                at_vertex.entry(v).or_default().push(e);
            }
        }
        let mut ordered = Vec::with_capacity(boundary.len());
        if let Some(&start) = boundary.first() {
            let mut cur = start;
            let mut via = p.edge_vertices(start)[1];
            loop {
                ordered.push(cur);
                let nexts = &at_vertex[&via];
                if nexts.len() != 2 {
                    return Err(Error::InvariantViolation(format!("boundary vertex {via} meets {} boundary edges", nexts.len())));
                }
                let next = if nexts[0] == cur { nexts[1] } else { nexts[0] };
                if next == start {
                    break;
                }
                let [x, y] = p.edge_vertices(next);
                via = if x == via { y } else { x };
                cur = next;
                if ordered.len() > boundary.len() {
                    return Err(Error::InvariantViolation("boundary walk does not close".into()));
                }
            }
        }
        if ordered.len() != boundary.len() {
            return Err(Error::InvariantViolation("disk boundary is not a single cycle".into()));
        }
        let outside = |e: usize| {
            let [a, b] = p.edge_faces(e);
            if inside.contains(&a) {
                b
            } else {
                a
            }
        };
        let mut transverse: Vec<usize> = Vec::new();
        for &e in &ordered {
            let g = outside(e);
            if transverse.last() != Some(&g) {
                transverse.push(g);
            }
        }
        while transverse.len() > 1 && transverse.first() == transverse.last() {
            transverse.pop();
        }
        let corner_vertices = p
            .vertices()
            .iter()
            .filter(|t| t.iter().filter(|f| inside.contains(f)).count() == 1)
            .count();
        Ok(FaceDisk { faces, boundary_edges: ordered, transverse_faces: transverse, corner_vertices, edge_count: edge_set.len() })
    }
}

/// Whether the faces transverse to `d`, in boundary order, form a face loop.
pub fn satisfies_convexity(p: &Polyhedron, d: &FaceDisk) -> Result<bool> {
    if d.faces.len() == p.num_faces() {
        return Err(Error::InvalidInput("the disk is the whole polyhedron; no transverse faces".into()));
    }
    let t = &d.transverse_faces;
    let distinct: BTreeSet<_> = t.iter().collect();
    if distinct.len() != t.len() {
        return Ok(false);
    }
    is_face_loop(p, t)
}

/// Bitmask view of a polyhedron with at most 64 faces, for exhaustive subset scans.
struct Masks {
    nf: usize,
    adj: Vec<u64>,
    vertex: Vec<u64>,
    edge: Vec<u64>,
}

impl Masks {
    fn new(p: &Polyhedron) -> Self {
        let nf = p.num_faces();
        let adj = (0..nf).map(|f| p.neighbors(f).iter().fold(0u64, |m, &g| m | 1 << g)).collect();
        let vertex = p.vertices().iter().map(|t| t.iter().fold(0u64, |m, &f| m | 1 << f)).collect();
        let edge = p.edges().iter().map(|&[a, b]| (1u64 << a) | (1u64 << b)).collect();
        Masks { nf, adj, vertex, edge }
    }

    fn connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let mut seen = set & set.wrapping_neg();
        loop {
            let mut grow = seen;
            let mut s = seen;
            while s != 0 {
                let f = s.trailing_zeros() as usize;
                s &= s - 1;
                grow |= self.adj[f] & set;
            }
            if grow == seen {
                return seen == set;
            }
            seen = grow;
        }
    }

    /// `(is_disk, edge_count, corner_count)` for a face subset.
    fn classify(&self, set: u64) -> (bool, usize, usize) {
        if !self.connected(set) {
            return (false, 0, 0);
        }
        let mut v = 0i64;
        let mut corners = 0usize;
        for &m in &self.vertex {
            match (m & set).count_ones() {
                0 => {}
                1 => {
                    v += 1;
                    corners += 1
                }
                _ => v += 1,
            }
        }
        let e = self.edge.iter().filter(|&&m| m & set != 0).count();
        let f = set.count_ones() as i64;
        (v - e as i64 + f == 1, e, corners)
    }
}

const SUBSET_GUARD_FACES: usize = 24;

fn subset_scan<T, F, R>(p: &Polyhedron, init: T, f: F, reduce: R) -> Result<T>
where
    T: Send + Sync + Clone,
    F: Fn(T, u64, usize, usize) -> T + Send + Sync,
    R: Fn(T, T) -> T + Send + Sync,
{
    if !p.is_well_formed() {
        return Err(Error::Structural("polyhedron incidence is inconsistent".into()));
    }
    if p.num_faces() > SUBSET_GUARD_FACES {
        return Err(Error::Resource(format!(
            "exhaustive subset scan over {} faces exceeds the guard of {SUBSET_GUARD_FACES}",
            p.num_faces()
        )));
    }
    let masks = Masks::new(p);
    let full: u64 = (1u64 << masks.nf) - 1;
    let chunk = 1u64 << 10;
    let chunks = (full + 1).div_ceil(chunk);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init.clone();
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(full + 1);
            for set in lo.max(1)..hi {
                if set == full {
                    continue;
                }
                let (disk, e, corners) = masks.classify(set);
                if disk {
                    acc = f(acc, set, e, corners);
                }
            }
            acc
        })
        .reduce(|| init.clone(), reduce))
}

/// Maximum number of edges (interior and boundary) in the closed subcomplex of a face disk.
pub fn c_of_p(p: &Polyhedron) -> Result<usize> {
    subset_scan(p, 0usize, |acc, _, e, _| acc.max(e), |a, b| a.max(b))
}

/// Summary of the exhaustive face-subset classification.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubsetCensus {
    /// Number of subsets examined, including the empty and full sets.
    pub subsets: u64,
    /// Proper nonempty subsets that are face disks.
    pub face_disks: u64,
    /// Face disks with at most four corner vertices.
    pub few_corner_disks: u64,
    /// Smallest face count among those.
    pub min_faces_few_corners: Option<usize>,
    /// Maximum closed-subcomplex edge count.
    pub max_edges: usize,
}

/// Classifies every face subset of `p`.
pub fn classify_subsets(p: &Polyhedron) -> Result<SubsetCensus> {
    let nf = p.num_faces();
    let mut census = subset_scan(
        p,
        SubsetCensus::default(),
        |mut acc, set, e, corners| {
            acc.face_disks += 1;
            acc.max_edges = acc.max_edges.max(e);
            if corners <= 4 {
                acc.few_corner_disks += 1;
                let k = set.count_ones() as usize;
                acc.min_faces_few_corners = Some(acc.min_faces_few_corners.map_or(k, |m| m.min(k)));
            }
            acc
        },
        |a, b| SubsetCensus {
            subsets: 0,
            face_disks: a.face_disks + b.face_disks,
            few_corner_disks: a.few_corner_disks + b.few_corner_disks,
            min_faces_few_corners: match (a.min_faces_few_corners, b.min_faces_few_corners) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            max_edges: a.max_edges.max(b.max_edges),
        },
    )?;
    census.subsets = 1u64 << nf;
    Ok(census)
}

/// Whether every face disk with at most four corner vertices has more than half the faces.
pub fn check_degree_lemma(p: &Polyhedron) -> Result<bool> {
    let half = p.num_faces();
    let census = classify_subsets(p)?;
    Ok(census.min_faces_few_corners.is_none_or(|m| 2 * m > half))
}

/// How the edges of two faces of equal length are matched when gluing.
///
/// Edge at position `k` of the first face is matched with position
/// `offset + k` (or `offset - k` when `reflect`) of the second face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    /// Cyclic shift.
    pub offset: usize,
    /// Reverse the direction of the second face.
    pub reflect: bool,
}

impl Alignment {
    /// The matching used for doubling across a face.
    pub const IDENTITY: Alignment = Alignment { offset: 0, reflect: false };

    fn image(&self, k: usize, m: usize) -> usize {
        if self.reflect {
            (self.offset + m - k % m) % m
        } else {
            (self.offset + k) % m
        }
    }
}

/// Result of gluing two polyhedra along a face, with id maps from each input.
#[derive(Clone, Debug)]
pub struct Glued {
    /// The glued polyhedron.
    pub polyhedron: Polyhedron,
    /// New id of each face of the first input (`None` for the glued face).
    pub face_from_first: Vec<Option<usize>>,
    /// New id of each face of the second input (`None` for the glued face).
    pub face_from_second: Vec<Option<usize>>,
    /// New id of each edge of the first input (`None` for edges of the glued face).
    pub edge_from_first: Vec<Option<usize>>,
    /// New id of each edge of the second input (`None` for edges of the glued face).
    pub edge_from_second: Vec<Option<usize>>,
}

/// Glues `p1` and `p2` along faces `x` and `y`. The two glued faces disappear,
/// each face adjacent to `x` fuses with the face adjacent to `y` across the
/// matched edge, and the edges leaving the glued faces' vertices merge.
pub fn glue(p1: &Polyhedron, x: usize, p2: &Polyhedron, y: usize, al: Alignment) -> Result<Glued> {
    p1.topo()?;
    p2.topo()?;
    if x >= p1.num_faces() || y >= p2.num_faces() {
        return Err(Error::InvalidInput("glued face out of range".into()));
    }
    let m = p1.face(x).len();
    if p2.face(y).len() != m {
        return Err(Error::InvalidInput(format!(
            "glued faces have different edge counts ({m} and {})",
            p2.face(y).len()
        )));
    }
    let ymatch = |k: usize| al.image(k, m);
    let a_face = |k: usize| p1.neighbors(x)[k];
    let b_face = |k: usize| p2.neighbors(y)[ymatch(k)];
    // Corner k of x lies between edges k and k+1; its partner corner of y lies between the matched edges.
    let y_corner = |k: usize| {
        let (u, v) = (ymatch(k), ymatch(k + 1));
        if (u + 1) % m == v {
            u
        } else {
            v
        }
    };

    let mut face_from_first = vec![None; p1.num_faces()];
    let mut next = 0;
    for (f, slot) in face_from_first.iter_mut().enumerate() {
        if f != x {
            *slot = Some(next);
            next += 1;
        }
    }
    let mut face_from_second = vec![None; p2.num_faces()];
    let mut fused_partner: HashMap<usize, usize> = HashMap::new();
    for k in 0..m {
        face_from_second[b_face(k)] = face_from_first[a_face(k)];
        fused_partner.insert(a_face(k), b_face(k));
    }
    for (f, slot) in face_from_second.iter_mut().enumerate() {
        if f != y && slot.is_none() {
            *slot = Some(next);
            next += 1;
        }
    }
    let x_edges: BTreeSet<usize> = p1.face(x).iter().copied().collect();
    let y_edges: BTreeSet<usize> = p2.face(y).iter().copied().collect();
    let mut edge_from_first = vec![None; p1.num_edges()];
    let mut new_edges: Vec<[usize; 2]> = Vec::new();
    for (e, slot) in edge_from_first.iter_mut().enumerate() {
        if !x_edges.contains(&e) {
            let [a, b] = p1.edge_faces(e);
            *slot = Some(new_edges.len());
            new_edges.push([face_from_first[a].unwrap(), face_from_first[b].unwrap()]);
        }
    }
    let mut edge_from_second = vec![None; p2.num_edges()];
    for k in 0..m {
        let l1 = p1.leaving_edge(x, k);
        let l2 = p2.leaving_edge(y, y_corner(k));
        let id = edge_from_first[l1].unwrap();
        let [a, b] = p2.edge_faces(l2);
        let mut want = [face_from_second[a].unwrap(), face_from_second[b].unwrap()];
        let mut have = new_edges[id];
        want.sort_unstable();
        have.sort_unstable();
        if want != have {
            return Err(Error::InvalidInput("alignment does not match the corners of the glued faces".into()));
        }
        edge_from_second[l2] = Some(id);
    }
    for e in 0..p2.num_edges() {
        if !y_edges.contains(&e) && edge_from_second[e].is_none() {
            let [a, b] = p2.edge_faces(e);
            edge_from_second[e] = Some(new_edges.len());
            new_edges.push([face_from_second[a].unwrap(), face_from_second[b].unwrap()]);
        }
    }
    let mut new_faces: Vec<Vec<usize>> = vec![Vec::new(); next];
    for f in 0..p1.num_faces() {
        if f == x {
            continue;
        }
        let id = face_from_first[f].unwrap();
        if let Some(&g) = fused_partner.get(&f) {
            new_faces[id] = splice(p1, f, x, &edge_from_first, p2, g, y, &edge_from_second)?;
        } else {
            new_faces[id] = p1.face(f).iter().map(|&e| edge_from_first[e].unwrap()).collect();
        }
    }
    let fused_second: BTreeSet<usize> = fused_partner.values().copied().collect();
    for f in 0..p2.num_faces() {
        if f == y || fused_second.contains(&f) {
            continue;
        }
        new_faces[face_from_second[f].unwrap()] = p2.face(f).iter().map(|&e| edge_from_second[e].unwrap()).collect();
    }
    let polyhedron = Polyhedron::new(new_faces, new_edges)?;
    polyhedron.topo()?;
    Ok(Glued { polyhedron, face_from_first, face_from_second, edge_from_first, edge_from_second })
}

#[allow(clippy::too_many_arguments)]
fn splice(
    p1: &Polyhedron,
    a: usize,
    x: usize,
    map1: &[Option<usize>],
    p2: &Polyhedron,
    b: usize,
    y: usize,
    map2: &[Option<usize>],
) -> Result<Vec<usize>> {
    let rotate_after = |p: &Polyhedron, f: usize, g: usize| -> Vec<usize> {
        let e = p.shared_edge(f, g).expect("fused face borders the glued face");
        let cyc = p.face(f);
        let pos = cyc.iter().position(|&z| z == e).unwrap();
        (1..cyc.len()).map(|i| cyc[(pos + i) % cyc.len()]).collect()
    };
    let ra: Vec<usize> = rotate_after(p1, a, x).into_iter().map(|e| map1[e].unwrap()).collect();
    let rb: Vec<usize> = rotate_after(p2, b, y).into_iter().map(|e| map2[e].unwrap()).collect();
    let last = *ra.last().unwrap();
    let inner = &rb[1..rb.len() - 1];
    let mut out = ra.clone();
    if rb[0] == last && *rb.last().unwrap() == ra[0] {
        out.extend_from_slice(inner);
    } else if *rb.last().unwrap() == last && rb[0] == ra[0] {
        out.extend(inner.iter().rev());
    } else {
        return Err(Error::InvalidInput("fused faces do not share their corner edges".into()));
    }
    Ok(out)
}

/// The double of `p` across face `f`.
pub fn double(p: &Polyhedron, f: usize) -> Result<Polyhedron> {
    Ok(glue(p, f, p, f, Alignment::IDENTITY)?.polyhedron)
}

/// A transverse-face matching for amalgamating two face disks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    /// Transverse face of the first disk.
    pub x: usize,
    /// Transverse face of the second disk.
    pub y: usize,
    /// Edge matching between `x` and `y`.
    pub alignment: Alignment,
}

/// Output of [`amalgamate_disks`].
#[derive(Clone, Debug)]
pub struct Amalgamation {
    /// The glued polyhedron and id maps.
    pub glued: Glued,
    /// The union of the two disks inside the glued polyhedron.
    pub disk: FaceDisk,
    /// Number of input faces (pieces) making up the union.
    pub pieces: usize,
}

/// Glues `p1` and `p2` along matched transverse faces and returns the union of the two disks.
pub fn amalgamate_disks(p1: &Polyhedron, d1: &FaceDisk, p2: &Polyhedron, d2: &FaceDisk, mt: Matching) -> Result<Amalgamation> {
    if !satisfies_convexity(p1, d1)? || !satisfies_convexity(p2, d2)? {
        return Err(Error::InvalidInput("both disks must satisfy the convexity condition".into()));
    }
    if !d1.transverse_faces.contains(&mt.x) || !d2.transverse_faces.contains(&mt.y) {
        return Err(Error::InvalidInput("matched faces must be transverse to their disks".into()));
    }
    let m = p1.face(mt.x).len();
    if p2.face(mt.y).len() != m {
        return Err(Error::InvalidInput(format!(
            "matched faces have different edge counts ({m} and {})",
            p2.face(mt.y).len()
        )));
    }
    let contact = |p: &Polyhedron, d: &FaceDisk, f: usize| -> BTreeSet<usize> {
        (0..p.face(f).len()).filter(|&k| d.faces.binary_search(&p.neighbors(f)[k]).is_ok()).collect()
    };
    let c1: BTreeSet<usize> = contact(p1, d1, mt.x).into_iter().map(|k| mt.alignment.image(k, m)).collect();
    let c2 = contact(p2, d2, mt.y);
    if c1 != c2 {
        return Err(Error::InvalidInput("the matching does not carry one disk's contact edges onto the other's".into()));
    }
    let glued = glue(p1, mt.x, p2, mt.y, mt.alignment)?;
    let mut set: BTreeSet<usize> = d1.faces.iter().map(|&f| glued.face_from_first[f].unwrap()).collect();
    set.extend(d2.faces.iter().map(|&f| glued.face_from_second[f].unwrap()));
    let set: Vec<usize> = set.into_iter().collect();
    let disk = FaceDisk::new(&glued.polyhedron, &set)?;
    Ok(Amalgamation { glued, disk, pieces: d1.faces.len() + d2.faces.len() })
}

/// Canonical code of a polyhedron: the lexicographically least breadth-first
/// reading over all starting faces, edges and directions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u32>);

fn reading(p: &Polyhedron, f0: usize, j0: usize, d0: bool, with_relabel: bool) -> (Vec<u32>, Option<Polyhedron>) {
    let nf = p.num_faces();
    let mut label = vec![u32::MAX; nf];
    let mut entry = vec![(0usize, true); nf];
    let mut order = Vec::with_capacity(nf);
    label[f0] = 0;
    entry[f0] = (j0, d0);
    order.push(f0);
    let mut code = Vec::with_capacity(2 * p.num_edges() + nf);
    let mut head = 0;
    let mut edge_label: Vec<Option<usize>> = vec![None; p.num_edges()];
    let mut new_faces: Vec<Vec<usize>> = Vec::new();
    let mut next_edge = 0usize;
    while head < order.len() {
        let f = order[head];
        head += 1;
        let (j, fwd) = entry[f];
        let k = p.face(f).len();
        code.push(k as u32);
        let mut row = Vec::with_capacity(k);
        for t in 0..k {
            let pos = if fwd { (j + t) % k } else { (j + k - t % k) % k };
            let e = p.face(f)[pos];
            let g = p.other_face(e, f);
            if label[g] == u32::MAX {
                label[g] = order.len() as u32;
                let start_vertex = if fwd { p.corner_vertex(f, (pos + k - 1) % k) } else { p.corner_vertex(f, pos) };
                let kg = p.face(g).len();
                let jg = p.edge_position(g, e).unwrap();
                let g_fwd = p.corner_vertex(g, (jg + kg - 1) % kg) != start_vertex;
                entry[g] = (jg, g_fwd);
                order.push(g);
            }
            code.push(label[g]);
            if with_relabel {
                let id = *edge_label[e].get_or_insert_with(|| {
                    next_edge += 1;
                    next_edge - 1
                });
                row.push(id);
            }
        }
        if with_relabel {
            new_faces.push(row);
        }
    }
    if !with_relabel {
        return (code, None);
    }
    let mut edges = vec![[usize::MAX; 2]; p.num_edges()];
    for (fl, row) in new_faces.iter().enumerate() {
        for &e in row {
            if edges[e][0] == usize::MAX {
                edges[e][0] = fl;
            } else {
                edges[e][1] = fl;
            }
        }
    }
    for pair in &mut edges {
        pair.sort_unstable();
    }
    (code, Some(Polyhedron::new(new_faces, edges).expect("relabeling preserves ranges")))
}

fn best_start(p: &Polyhedron) -> Result<(usize, usize, bool, Vec<u32>)> {
    p.topo()?;
    let mut best: Option<(usize, usize, bool, Vec<u32>)> = None;
    for f in 0..p.num_faces() {
        for j in 0..p.face(f).len() {
            for d in [true, false] {
                let (code, _) = reading(p, f, j, d, false);
                if best.as_ref().is_none_or(|b| code < b.3) {
                    best = Some((f, j, d, code));
                }
            }
        }
    }
    best.ok_or_else(|| Error::InvalidInput("polyhedron has no faces".into()))
}

/// Canonical code; equal codes iff the polyhedra are isomorphic (reflections allowed).
pub fn canonical_code(p: &Polyhedron) -> Result<CanonicalCode> {
    Ok(CanonicalCode(best_start(p)?.3))
}

/// The relabeled representative realizing the canonical code.
pub fn canonical_form(p: &Polyhedron) -> Result<Polyhedron> {
    let (f, j, d, _) = best_start(p)?;
    Ok(reading(p, f, j, d, true).1.expect("relabel requested"))
}

/// Whether two polyhedra are combinatorially isomorphic.
pub fn is_isomorphic(p: &Polyhedron, q: &Polyhedron) -> Result<bool> {
    if p.num_faces() != q.num_faces() || p.num_edges() != q.num_edges() {
        return Ok(false);
    }
    Ok(canonical_code(p)? == canonical_code(q)?)
}
