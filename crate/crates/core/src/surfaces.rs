//! Immersed surfaces assembled from copies of a pentagonal face.
//!
//! A chain of `n` chambers is laid out by alternately reflecting across two
//! non-adjacent neighbors of a pentagonal face `F₁`. The `F₁` faces of the
//! chain are coplanar and fuse into one face of the chained polyhedron `P̂`;
//! together with one adjacent face `F₂` they form a face disk `D`. The sides
//! of `D` are mirrors. Every second side on the long edge of the chain that
//! lies on an `F₂`-type wall, away from `F₂` itself, is a cut side. An
//! involution on the cut sides re-pairs them to produce the orbifold `D_σ`.
//!
//! Cells, edges and vertices of the tiling are named by group data: a cell by
//! its canonical `(chamber, face)` pair, an edge by the least of the four
//! chambers around it and its two faces, a vertex by the least of the eight
//! chambers around it and its three faces. Complexes built here carry those
//! tags, so every gluing can be checked geometrically.

use crate::coxeter::{Cell, CoxeterGroup, Side, Wall, Word};
use crate::error::{Error, Result};
use crate::involution::Involution;
use crate::polyhedron::{glue, satisfies_convexity, Alignment, FaceDisk, Polyhedron};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

/// Largest chain length accepted by the builders.
pub const MAX_N: usize = 7;
/// Largest development depth.
pub const MAX_DEPTH: usize = 4;

/// Input of [`build_disk`].
#[derive(Clone, Debug)]
pub struct DiskSpec {
    /// Host polyhedron.
    pub host: Polyhedron,
    /// Pentagonal face copied along the chain.
    pub f1: usize,
    /// Face adjacent to `f1` attached at the first chamber.
    pub f2: usize,
    /// Number of `f1` copies.
    pub n: usize,
}

impl DiskSpec {
    /// Validates the face choice and chain length.
    pub fn new(host: Polyhedron, f1: usize, f2: usize, n: usize) -> Result<Self> {
        if !host.is_well_formed() {
            return Err(Error::InvalidInput("host polyhedron is malformed".into()));
        }
        if f1 >= host.num_faces() || f2 >= host.num_faces() {
            return Err(Error::InvalidInput("face id out of range".into()));
        }
        if host.face(f1).len() != 5 {
            return Err(Error::InvalidInput(format!("face {f1} has {} edges, not 5", host.face(f1).len())));
        }
        if !host.adjacent(f1, f2) {
            return Err(Error::InvalidInput(format!("faces {f1} and {f2} are not adjacent")));
        }
        if n == 0 || n > MAX_N {
            return Err(Error::Resource(format!("chain length {n} is outside 1..={MAX_N}")));
        }
        Ok(DiskSpec { host, f1, f2, n })
    }

    /// Face 0 of the dodecahedron and its first neighbor.
    pub fn dodecahedral(n: usize) -> Result<Self> {
        let host = crate::polyhedron::dodecahedron();
        let f2 = host.neighbors(0)[0];
        Self::new(host, 0, f2, n)
    }
}

/// A boundary edge of a single cell, oriented along a boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CellEdge {
    /// Cell index.
    pub cell: usize,
    /// Side of the cell (toward the `side`-th neighbor of its face).
    pub side: usize,
    /// Corner where the walk enters the edge.
    pub from: usize,
    /// Corner where the walk leaves the edge.
    pub to: usize,
}

/// A maximal run of boundary cell edges on one transverse wall.
#[derive(Clone, Debug, Serialize)]
pub struct BoundarySide {
    /// The transverse wall.
    pub wall: Wall,
    /// Cell edges in walk order.
    pub edges: Vec<CellEdge>,
    /// The matching transverse face of `P̂`.
    pub hat_face: usize,
}

/// An edge shared by two cells of one copy of the disk.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct InteriorEdge {
    /// First incidence.
    pub a: CellEdge,
    /// Second incidence; `from`/`to` are the corners identified with `a.from`/`a.to`.
    pub b: CellEdge,
}

/// The face disk `D` with its cell structure.
#[derive(Clone, Debug, Serialize)]
pub struct Disk {
    /// Chain length.
    pub n: usize,
    /// `F₁` and its neighbors `G₁ = F₂, G₂, .., G₅` in cyclic order.
    pub f1: u16,
    /// Neighbors of `F₁` starting from `F₂`.
    pub g: [u16; 5],
    /// Chambers of the chain.
    pub chain: Vec<Word>,
    /// The chained polyhedron.
    #[serde(skip)]
    pub hat: Polyhedron,
    /// Tiling cells making up each face of `P̂`.
    pub pieces: Vec<Vec<Cell>>,
    /// `D` as a face disk of `P̂`.
    pub face_disk: FaceDisk,
    /// Cells: the `n` copies of `F₁` in chain order, then `F₂`.
    pub cells: Vec<Cell>,
    /// Interior edges.
    pub interior: Vec<InteriorEdge>,
    /// Sides in boundary order.
    pub sides: Vec<BoundarySide>,
    /// Indices into `sides` of the cut sides, in chain order.
    pub cuts: Vec<usize>,
    #[serde(skip)]
    group: CoxeterGroup,
    #[serde(skip)]
    host: Polyhedron,
}

type EdgeKey = (Word, u16, u16);
type VertexKey = (Word, [u16; 3]);

/// Tiling geometry helpers over a host polyhedron.
struct Tiling<'a> {
    w: &'a CoxeterGroup,
    host: &'a Polyhedron,
}

impl Tiling<'_> {
    fn nbr(&self, f: u16, t: usize) -> u16 {
        let ns = self.host.neighbors(f as usize);
        ns[t % ns.len()] as u16
    }
    fn sides(&self, f: u16) -> usize {
        self.host.face(f as usize).len()
    }
    fn edge_key(&self, c: &Cell, t: usize) -> EdgeKey {
        let (f, g) = (c.face, self.nbr(c.face, t));
        let a = &c.chamber;
        let b = self.w.mul_gen(a, f);
        let cands = [self.w.mul_gen(a, g), self.w.mul_gen(&b, g), b, a.clone()];
        let least = cands.into_iter().min().unwrap();
        (least, f.min(g), f.max(g))
    }
    fn vertex_key(&self, c: &Cell, corner: usize) -> VertexKey {
        let k = self.sides(c.face);
        let mut fs = [c.face, self.nbr(c.face, corner), self.nbr(c.face, (corner + 1) % k)];
        let mut cur = vec![c.chamber.clone()];
        for &s in &fs {
            let more: Vec<Word> = cur.iter().map(|x| self.w.mul_gen(x, s)).collect();
            cur.extend(more);
        }
        fs.sort_unstable();
        (cur.into_iter().min().unwrap(), fs)
    }
    fn translate(&self, h: &Word, c: &Cell) -> Cell {
        self.w.cell(&self.w.mul(h, &c.chamber), c.face)
    }
    fn translate_wall(&self, h: &Word, wl: &Wall) -> Wall {
        self.w.wall(&self.w.mul(h, &wl.chamber), wl.generator)
    }
    /// Corners of a cell side: `t-1` and `t`.
    fn ends(&self, c: &Cell, t: usize) -> [usize; 2] {
        let k = self.sides(c.face);
        [(t + k - 1) % k, t]
    }
}

/// Combinatorial summary of a finite set of tiling cells.
struct CellSetShape {
    interior: Vec<InteriorEdge>,
    walk: Vec<CellEdge>,
    euler: i64,
    connected: bool,
    manifold: bool,
}

fn analyze(t: &Tiling, cells: &[Cell]) -> CellSetShape {
    let mut edges: HashMap<EdgeKey, Vec<(usize, usize)>> = HashMap::new();
    let mut verts: HashMap<VertexKey, Vec<(usize, usize)>> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        for s in 0..t.sides(c.face) {
            edges.entry(t.edge_key(c, s)).or_default().push((i, s));
            verts.entry(t.vertex_key(c, s)).or_default().push((i, s));
        }
    }
    let mut manifold = edges.values().all(|v| v.len() <= 2);
    let vkey = |i: usize, corner: usize| t.vertex_key(&cells[i], corner);
    let mut interior = Vec::new();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut keys: Vec<&EdgeKey> = edges.keys().collect();
    keys.sort();
    for k in keys {
        let inc = &edges[k];
        if inc.len() == 2 {
            let [(ci, si), (cj, sj)] = [inc[0], inc[1]];
            let ea = t.ends(&cells[ci], si);
            let eb = t.ends(&cells[cj], sj);
            let b = if vkey(ci, ea[0]) == vkey(cj, eb[0]) { [eb[0], eb[1]] } else { [eb[1], eb[0]] };
            interior.push(InteriorEdge {
                a: CellEdge { cell: ci, side: si, from: ea[0], to: ea[1] },
                b: CellEdge { cell: cj, side: sj, from: b[0], to: b[1] },
            });
            let (x, y) = (find(&mut parent, ci), find(&mut parent, cj));
            parent[x] = y;
        }
    }
    let roots: HashSet<usize> = (0..cells.len()).map(|i| find(&mut parent, i)).collect();
    // Vertex links: corners at a vertex joined through shared edges must form one path or cycle.
    for corners in verts.values() {
        if corners.len() > 1 {
            let idx: HashMap<(usize, usize), usize> = corners.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut lp: Vec<usize> = (0..corners.len()).collect();
            for e in &interior {
                for (x, y) in [(e.a.from, e.b.from), (e.a.to, e.b.to)] {
                    if let (Some(&i), Some(&j)) = (idx.get(&(e.a.cell, x)), idx.get(&(e.b.cell, y))) {
                        let (a, b) = (find(&mut lp, i), find(&mut lp, j));
                        lp[a] = b;
                    }
                }
            }
            let comps: HashSet<usize> = (0..corners.len()).map(|i| find(&mut lp, i)).collect();
            if comps.len() != 1 {
                manifold = false;
            }
        }
    }
    let boundary: Vec<(usize, usize)> = {
        let mut b: Vec<(usize, usize)> = edges.values().filter(|v| v.len() == 1).map(|v| v[0]).collect();
        b.sort_unstable();
        b
    };
    let mut walk = Vec::new();
    if manifold && !boundary.is_empty() {
        let mut at: HashMap<VertexKey, Vec<usize>> = HashMap::new();
        for (i, &(c, s)) in boundary.iter().enumerate() {
            for corner in t.ends(&cells[c], s) {
                at.entry(vkey(c, corner)).or_default().push(i);
            }
        }
        if at.values().all(|v| v.len() == 2) {
            let (c0, s0) = boundary[0];
            let [f0, t0] = t.ends(&cells[c0], s0);
            walk.push(CellEdge { cell: c0, side: s0, from: f0, to: t0 });
            let mut cur = 0usize;
            loop {
                let last = *walk.last().unwrap();
                let key = vkey(last.cell, last.to);
                let v = &at[&key];
                let next = if v[0] == cur { v[1] } else { v[0] };
                if next == 0 {
                    break;
                }
                let (c, s) = boundary[next];
                let [a, b] = t.ends(&cells[c], s);
                let (from, to) = if vkey(c, a) == key { (a, b) } else { (b, a) };
                walk.push(CellEdge { cell: c, side: s, from, to });
                cur = next;
                if walk.len() > boundary.len() {
                    break;
                }
            }
        }
        if walk.len() != boundary.len() {
            walk.clear();
            manifold = false;
        }
    }
    let euler = verts.len() as i64 - edges.len() as i64 + cells.len() as i64;
    CellSetShape { interior, walk, euler, connected: roots.len() == 1, manifold }
}

/// Groups a boundary walk into maximal same-wall runs, starting at a wall change.
fn split_sides(t: &Tiling, cells: &[Cell], walk: &[CellEdge]) -> Vec<(Wall, Vec<CellEdge>)> {
    let wall_of = |e: &CellEdge| t.w.wall(&cells[e.cell].chamber, t.nbr(cells[e.cell].face, e.side));
    let walls: Vec<Wall> = walk.iter().map(wall_of).collect();
    let n = walk.len();
    let start = (0..n).find(|&i| walls[i] != walls[(i + n - 1) % n]).unwrap_or(0);
    let mut out: Vec<(Wall, Vec<CellEdge>)> = Vec::new();
    for j in 0..n {
        let i = (start + j) % n;
        match out.last_mut() {
            Some((w, es)) if *w == walls[i] => es.push(walk[i]),
            _ => out.push((walls[i].clone(), vec![walk[i]])),
        }
    }
    out
}

/// Whether a cyclic wall sequence has consecutive walls crossing and all others disjoint.
fn walls_form_loop(w: &CoxeterGroup, walls: &[Wall]) -> bool {
    let k = walls.len();
    if k < 3 {
        return false;
    }
    let refl: Vec<Word> = walls.iter().map(|x| w.wall_reflection(x)).collect();
    let commute = |a: &Word, b: &Word| w.mul(a, b) == w.mul(b, a);
    for i in 0..k {
        for j in i + 1..k {
            let adjacent = j == i + 1 || (i == 0 && j == k - 1);
            if walls[i] == walls[j] || commute(&refl[i], &refl[j]) != adjacent {
                return false;
            }
        }
    }
    true
}

/// Builds `P̂`, the disk `D`, and its cut sides.
pub fn build_disk(spec: &DiskSpec) -> Result<Disk> {
    let host = &spec.host;
    let w = CoxeterGroup::new(host)?;
    let t = Tiling { w: &w, host };
    let f1 = spec.f1 as u16;
    let ns = host.neighbors(spec.f1);
    let start = ns.iter().position(|&x| x == spec.f2).expect("adjacency checked");
    let g: [u16; 5] = std::array::from_fn(|i| ns[(start + i) % 5] as u16);
    let step = |i: usize| if i % 2 == 0 { g[2] } else { g[4] };
    let mut chain = vec![Word::identity()];
    for i in 0..spec.n - 1 {
        let next = w.mul_gen(&chain[i], step(i));
        chain.push(next);
    }
    // Chain the polyhedron, tracking which tiling cells make up each face.
    let mut hat = host.clone();
    let mut pieces: Vec<Vec<Cell>> = (0..host.num_faces()).map(|f| vec![w.cell(&Word::identity(), f as u16)]).collect();
    for i in 0..spec.n - 1 {
        let s = step(i);
        let target = w.cell(&chain[i], s);
        let x = pieces.iter().position(|ps| ps.contains(&target)).ok_or_else(|| Error::Construction("chain face missing from P̂".into()))?;
        if pieces[x].len() != 1 {
            return Err(Error::Construction("chain face is fused in P̂".into()));
        }
        let gl = glue(&hat, x, host, s as usize, Alignment::IDENTITY)?;
        let mut next: Vec<Vec<Cell>> = vec![Vec::new(); gl.polyhedron.num_faces()];
        for (f, id) in gl.face_from_first.iter().enumerate() {
            if let Some(id) = id {
                next[*id].extend(pieces[f].iter().cloned());
            }
        }
        for (f, id) in gl.face_from_second.iter().enumerate() {
            if let Some(id) = id {
                next[*id].push(w.cell(&chain[i + 1], f as u16));
            }
        }
        hat = gl.polyhedron;
        pieces = next;
    }
    let mut cells: Vec<Cell> = chain.iter().map(|c| w.cell(c, f1)).collect();
    cells.push(w.cell(&Word::identity(), g[0]));
    let face_of = |c: &Cell| pieces.iter().position(|ps| ps.contains(c));
    let d1 = face_of(&cells[0]).ok_or_else(|| Error::Construction("F₁ cell missing".into()))?;
    let d2 = face_of(&cells[spec.n]).ok_or_else(|| Error::Construction("F₂ cell missing".into()))?;
    let mut want: Vec<Cell> = cells[..spec.n].to_vec();
    want.sort();
    let mut got = pieces[d1].clone();
    got.sort();
    if got != want || pieces[d2].len() != 1 {
        return Err(Error::Construction("the F₁ copies do not fuse into one face of P̂".into()));
    }
    let face_disk = FaceDisk::new(&hat, &[d1, d2])?;
    if !satisfies_convexity(&hat, &face_disk)? {
        return Err(Error::Construction("D fails the convexity condition in P̂".into()));
    }
    let shape = analyze(&t, &cells);
    if !shape.manifold || !shape.connected || shape.euler != 1 {
        return Err(Error::Construction("D is not a disk at the cell level".into()));
    }
    let runs = split_sides(&t, &cells, &shape.walk);
    let mut sides = Vec::with_capacity(runs.len());
    for (wall, edges) in runs {
        let e = edges[0];
        let c = &cells[e.cell];
        let across = w.cell(&c.chamber, t.nbr(c.face, e.side));
        let tf = face_of(&across).ok_or_else(|| Error::Construction("transverse cell missing from P̂".into()))?;
        sides.push(BoundarySide { wall, edges, hat_face: tf });
    }
    // The cell-level sides must be the transverse faces of D in P̂, in the same cyclic order.
    let hat_cycle: Vec<usize> = sides.iter().map(|s| s.hat_face).collect();
    let be = &face_disk.transverse_faces;
    let rotations_match = |seq: &[usize]| (0..be.len()).any(|r| (0..be.len()).all(|i| seq[i] == be[(i + r) % be.len()]));
    let reversed: Vec<usize> = hat_cycle.iter().rev().copied().collect();
    if hat_cycle.len() != be.len() || !(rotations_match(&hat_cycle) || rotations_match(&reversed)) {
        return Err(Error::Construction("cell-level sides disagree with the boundary of D in P̂".into()));
    }
    let f2_cell = spec.n;
    let mut cuts: Vec<usize> = (0..sides.len())
        .filter(|&i| {
            let s = &sides[i];
            s.wall.generator == g[0] && s.edges.len() == 2 && s.edges.iter().all(|e| e.cell != f2_cell)
        })
        .collect();
    cuts.sort_by_key(|&i| sides[i].edges.iter().map(|e| e.cell).min());
    Ok(Disk {
        n: spec.n,
        f1,
        g,
        chain,
        hat,
        pieces,
        face_disk,
        cells,
        interior: shape.interior,
        sides,
        cuts,
        group: w,
        host: host.clone(),
    })
}

impl Disk {
    /// The group of the host polyhedron.
    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }
    /// The host polyhedron.
    pub fn host(&self) -> &Polyhedron {
        &self.host
    }
    fn tiling(&self) -> Tiling<'_> {
        Tiling { w: &self.group, host: &self.host }
    }
    /// Number of cut sides.
    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }
    /// Whether the transverse walls of `D` form a loop of crossing walls.
    pub fn is_convex(&self) -> bool {
        let walls: Vec<Wall> = self.sides.iter().map(|s| s.wall.clone()).collect();
        walls_form_loop(&self.group, &walls)
    }
    /// Euler characteristic of the reflection orbifold `D̄` as a fraction `(numerator, 4)`:
    /// `4 - 2k + k` for `k` right-angled corners.
    pub fn orbifold_euler_times_four(&self) -> i64 {
        let k = self.sides.len() as i64;
        4 - 2 * k + k
    }

    /// Element taking side `i` onto side `j`, placing the image of `D` across side `j`.
    /// With `reversed` the ends of the sides are swapped and the element is even;
    /// otherwise ends match and the element is odd.
    pub fn side_map(&self, i: usize, j: usize, reversed: bool) -> Result<Word> {
        let w = &self.group;
        let t = self.tiling();
        let (si, sj) = (&self.sides[i], &self.sides[j]);
        if si.edges.len() != sj.edges.len() {
            return Err(Error::Construction(format!("sides {i} and {j} have different lengths")));
        }
        let rj = w.wall_reflection(&sj.wall);
        let len = si.edges.len();
        let partner = |k: usize| if reversed { sj.edges[len - 1 - k] } else { sj.edges[k] };
        let x = &self.cells[si.edges[0].cell];
        let y = &self.cells[partner(0).cell];
        let reps = |c: &Cell| [c.chamber.clone(), w.mul_gen(&c.chamber, c.face)];
        let mut found: Vec<Word> = Vec::new();
        for cy in reps(y) {
            for cx in reps(x) {
                let g = w.product(&[&rj, &cy, &w.inverse(&cx)]);
                if (g.len() % 2 == 0) != reversed || found.contains(&g) {
                    continue;
                }
                let ok = (0..len).all(|k| {
                    let a = si.edges[k];
                    let b = partner(k);
                    let img = t.translate(&g, &self.cells[a.cell]);
                    let across = t.translate(&rj, &self.cells[b.cell]);
                    img == across && t.edge_key(&img, a.side) == t.edge_key(&self.cells[b.cell], b.side)
                });
                if ok {
                    found.push(g);
                }
            }
        }
        found.sort();
        found.into_iter().next().ok_or_else(|| Error::Construction(format!("no group element realizes the pairing of sides {i} and {j}")))
    }
}

/// How a side of one copy of `D` is closed up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SideLabel {
    /// The side is a mirror.
    Reflector,
    /// The side is glued to a side of some copy; `element` carries `D` across it.
    Glued {
        /// Partner copy.
        copy: usize,
        /// Partner side.
        side: usize,
        /// Element placing the partner copy across this side.
        element: Word,
        /// Whether the ends of the two sides are swapped.
        reversed: bool,
    },
}

/// Kind of a complex edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    /// Shared by two cells of one copy.
    Interior,
    /// A mirror edge with one incidence.
    Reflector,
    /// Two boundary cell edges identified by a side gluing, with the element used.
    Glued(Word),
}

/// One edge of a complex: one or two cell incidences, with ends identified in order.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexEdge {
    /// Kind.
    pub kind: EdgeKind,
    /// Incidences `(cell, side, from, to)`; for two incidences the `from` corners coincide.
    pub incidences: Vec<CellEdge>,
}

/// A polygonal 2-complex whose cells are immersed tiling cells, possibly with mirror edges.
#[derive(Clone, Debug, Serialize)]
pub struct OrbifoldComplex {
    /// Tiling tag of each cell.
    pub tags: Vec<Cell>,
    /// Number of corners of each cell.
    pub corners: Vec<usize>,
    /// Copy of `D` each cell belongs to.
    pub copy_of: Vec<usize>,
    /// Edges.
    pub edges: Vec<ComplexEdge>,
    /// Vertex id of each cell corner.
    pub vertex_of: Vec<Vec<usize>>,
    /// Number of vertices.
    pub num_vertices: usize,
    /// Side labels per copy, when built from a disk.
    pub table: Vec<Vec<SideLabel>>,
    /// The involution used, when built from one.
    pub sigma: Option<Involution>,
}

impl OrbifoldComplex {
    /// Assembles a complex from cells and edges, identifying corners through the edges.
    pub fn from_parts(tags: Vec<Cell>, corners: Vec<usize>, copy_of: Vec<usize>, edges: Vec<ComplexEdge>) -> Result<Self> {
        let nc = tags.len();
        if corners.len() != nc || copy_of.len() != nc {
            return Err(Error::InvalidInput("cell arrays differ in length".into()));
        }
        let offset: Vec<usize> = corners.iter().scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        }).collect();
        let total: usize = corners.iter().sum();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        for e in &edges {
            let ok = match e.kind {
                EdgeKind::Reflector => e.incidences.len() == 1,
                _ => e.incidences.len() == 2,
            };
            if !ok {
                return Err(Error::InvariantViolation(format!("edge {:?} has {} incidences", e.kind, e.incidences.len())));
            }
            for inc in &e.incidences {
                let k = *corners.get(inc.cell).ok_or_else(|| Error::InvalidInput("incidence cell out of range".into()))?;
                let ends = [(inc.side + k - 1) % k, inc.side % k];
                let mut given = [inc.from, inc.to];
                given.sort_unstable();
                let mut want = ends;
                want.sort_unstable();
                if inc.side >= k || given != want {
                    return Err(Error::InvariantViolation(format!("incidence {inc:?} does not match its cell")));
                }
                if !used.insert((inc.cell, inc.side)) {
                    return Err(Error::InvariantViolation(format!("cell side ({}, {}) lies on two edges", inc.cell, inc.side)));
                }
            }
            if e.incidences.len() == 2 {
                let (a, b) = (e.incidences[0], e.incidences[1]);
                for (x, y) in [(offset[a.cell] + a.from, offset[b.cell] + b.from), (offset[a.cell] + a.to, offset[b.cell] + b.to)] {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx] = ry;
                }
            }
        }
        if used.len() != total {
            return Err(Error::InvariantViolation(format!("{} of {total} cell sides lie on no edge", total - used.len())));
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut vertex_of = Vec::with_capacity(nc);
        for c in 0..nc {
            let row: Vec<usize> = (0..corners[c])
                .map(|k| {
                    let r = find(&mut parent, offset[c] + k);
                    let next = ids.len();
                    *ids.entry(r).or_insert(next)
                })
                .collect();
            vertex_of.push(row);
        }
        Ok(OrbifoldComplex { tags, corners, copy_of, edges, vertex_of, num_vertices: ids.len(), table: Vec::new(), sigma: None })
    }

    /// Number of cells.
    pub fn num_cells(&self) -> usize {
        self.tags.len()
    }

    /// Number of copies of `D`.
    pub fn num_copies(&self) -> usize {
        self.table.len().max(1)
    }

    /// Whether any mirror edge remains.
    pub fn has_reflectors(&self) -> bool {
        self.edges.iter().any(|e| e.kind == EdgeKind::Reflector)
    }
}

fn disk_copy_edges(d: &Disk, copy: usize) -> Vec<ComplexEdge> {
    let base = copy * d.cells.len();
    let shift = |e: CellEdge| CellEdge { cell: e.cell + base, ..e };
    d.interior.iter().map(|ie| ComplexEdge { kind: EdgeKind::Interior, incidences: vec![shift(ie.a), shift(ie.b)] }).collect()
}

fn side_edges(d: &Disk, c1: usize, s1: usize, c2: usize, s2: usize, label: &SideLabel) -> Vec<ComplexEdge> {
    let nc = d.cells.len();
    match label {
        SideLabel::Reflector => d.sides[s1]
            .edges
            .iter()
            .map(|&e| ComplexEdge { kind: EdgeKind::Reflector, incidences: vec![CellEdge { cell: e.cell + c1 * nc, ..e }] })
            .collect(),
        SideLabel::Glued { element, reversed, .. } => {
            let a = &d.sides[s1].edges;
            let b = &d.sides[s2].edges;
            let len = a.len();
            (0..len)
                .map(|k| {
                    let x = CellEdge { cell: a[k].cell + c1 * nc, ..a[k] };
                    let y = if *reversed {
                        let e = b[len - 1 - k];
                        CellEdge { cell: e.cell + c2 * nc, side: e.side, from: e.to, to: e.from }
                    } else {
                        CellEdge { cell: b[k].cell + c2 * nc, ..b[k] }
                    };
                    ComplexEdge { kind: EdgeKind::Glued(element.clone()), incidences: vec![x, y] }
                })
                .collect()
        }
    }
}

/// Builds a complex from copies of `D` and a full side table.
fn complex_from_table(d: &Disk, table: Vec<Vec<SideLabel>>, sigma: Option<Involution>) -> Result<OrbifoldComplex> {
    let copies = table.len();
    let nc = d.cells.len();
    let mut edges = Vec::new();
    for c in 0..copies {
        edges.extend(disk_copy_edges(d, c));
        for (s, label) in table[c].iter().enumerate() {
            match label {
                SideLabel::Reflector => edges.extend(side_edges(d, c, s, c, s, label)),
                SideLabel::Glued { copy, side, .. } => {
                    match table[*copy].get(*side) {
                        Some(SideLabel::Glued { copy: bc, side: bs, .. }) if *bc == c && *bs == s => {}
                        _ => return Err(Error::Construction(format!("side {s} of copy {c} is not paired symmetrically"))),
                    }
                    if (c, s) < (*copy, *side) {
                        edges.extend(side_edges(d, c, s, *copy, *side, label));
                    }
                }
            }
        }
    }
    let tags: Vec<Cell> = (0..copies).flat_map(|_| d.cells.iter().cloned()).collect();
    let corners: Vec<usize> = tags.iter().map(|c| d.host.face(c.face as usize).len()).collect();
    let copy_of: Vec<usize> = (0..copies).flat_map(|c| std::iter::repeat_n(c, nc)).collect();
    let mut cx = OrbifoldComplex::from_parts(tags, corners, copy_of, edges)?;
    cx.table = table;
    cx.sigma = sigma;
    Ok(cx)
}

/// Re-pairs the cut sides of `D` by `σ`; fixed points stay mirrors.
pub fn glue_sigma(d: &Disk, sigma: &Involution) -> Result<OrbifoldComplex> {
    let m = d.cuts.len();
    if sigma.len() != m {
        return Err(Error::InvalidInput(format!("σ acts on {} points but D has {m} cut sides", sigma.len())));
    }
    let mut row = vec![SideLabel::Reflector; d.sides.len()];
    for i in 0..m {
        let j = sigma.apply(i);
        if j != i {
            let (si, sj) = (d.cuts[i], d.cuts[j]);
            row[sj] = SideLabel::Glued { copy: 0, side: si, element: d.side_map(si, sj, true)?, reversed: true };
        }
    }
    let cx = complex_from_table(d, vec![row], Some(sigma.clone()))?;
    check_consistency(d, &cx)?;
    Ok(cx)
}

/// Checks that every glued edge is realized by its element and interior edges are tiling edges.
pub fn check_consistency(d: &Disk, c: &OrbifoldComplex) -> Result<()> {
    let t = d.tiling();
    for (i, e) in c.edges.iter().enumerate() {
        let g = match &e.kind {
            EdgeKind::Reflector => continue,
            EdgeKind::Interior => Word::identity(),
            EdgeKind::Glued(g) => g.clone(),
        };
        let (a, b) = (e.incidences[0], e.incidences[1]);
        let (ta, tb) = (&c.tags[a.cell], &c.tags[b.cell]);
        // Element g carries the cell across b's side onto a's cell, so g⁻¹ takes a's edge onto b's edge.
        let gi = d.group.inverse(&g);
        let img = t.translate(&gi, ta);
        if t.edge_key(&img, a.side) != t.edge_key(tb, b.side) {
            return Err(Error::InvariantViolation(format!("edge {i} is not realized by its gluing element")));
        }
        if !g.is_empty() && img == *tb {
            return Err(Error::InvariantViolation(format!("edge {i} folds a cell onto its partner")));
        }
    }
    Ok(())
}

/// Orbifold degree of every vertex.
///
/// A vertex whose link closes up keeps its number of corners. A vertex whose
/// link is a path between two mirrors with `c` corners has degree `2c` when
/// the mirrors continue each other (`c` even) and `4c` when they meet at a corner.
pub fn orbifold_vertex_degrees(c: &OrbifoldComplex) -> Vec<usize> {
    let mut corners = vec![0usize; c.num_vertices];
    for row in &c.vertex_of {
        for &v in row {
            corners[v] += 1;
        }
    }
    let mut ends = vec![0usize; c.num_vertices];
    for e in c.edges.iter().filter(|e| e.kind == EdgeKind::Reflector) {
        let inc = e.incidences[0];
        ends[c.vertex_of[inc.cell][inc.from]] += 1;
        ends[c.vertex_of[inc.cell][inc.to]] += 1;
    }
    (0..c.num_vertices)
        .map(|v| match ends[v] {
            0 => corners[v],
            _ if corners[v] % 2 == 0 => 2 * corners[v],
            _ => 4 * corners[v],
        })
        .collect()
}

/// True iff `D` satisfies the convexity condition and every orbifold degree is 4.
pub fn check_injectivity_hypotheses(d: &Disk, c: &OrbifoldComplex) -> bool {
    d.is_convex() && satisfies_convexity(&d.hat, &d.face_disk).unwrap_or(false) && orbifold_vertex_degrees(c).iter().all(|&x| x == 4)
}

/// `V - E + F` of a closed surface complex.
pub fn euler_characteristic(c: &OrbifoldComplex) -> Result<i64> {
    if c.has_reflectors() {
        return Err(Error::NotASurface("mirror edges remain; the complex is an orbifold, not a closed surface".into()));
    }
    Ok(c.num_vertices as i64 - c.edges.len() as i64 + c.num_cells() as i64)
}

/// Genus of a closed orientable surface complex.
pub fn genus(c: &OrbifoldComplex) -> Result<i64> {
    let chi = euler_characteristic(c)?;
    if chi % 2 != 0 || chi > 2 {
        return Err(Error::NotASurface(format!("Euler characteristic {chi} is not that of a closed orientable surface")));
    }
    Ok((2 - chi) / 2)
}

/// Slots of the closed variant: `copy * m + cut` for four copies of `D`.
pub fn closed_slot(m: usize, copy: usize, cut: usize) -> usize {
    copy * m + cut
}

/// The closed surface made of four copies of `D` indexed by `Z/2 × Z/2`.
///
/// Sides are colored alternately around `D`; a side of color `X` in copy `g`
/// is glued to the same side of copy `g + X`, which closes up every corner
/// with four cells. The `4m = 2n - 2` cut slots are instead paired by `σ`. A
/// slot fixed by `σ` keeps its default partner, which must then be fixed too.
pub fn closed_surface_variant(d: &Disk, sigma: &Involution) -> Result<OrbifoldComplex> {
    if d.n % 2 == 0 {
        return Err(Error::InvalidInput(format!("the closed variant needs odd n, got {}", d.n)));
    }
    let k = d.sides.len();
    if k % 2 != 0 {
        return Err(Error::Construction(format!("D has an odd number of sides ({k})")));
    }
    let m = d.cuts.len();
    if sigma.len() != 4 * m {
        return Err(Error::InvalidInput(format!("σ acts on {} points but there are {} cut slots", sigma.len(), 4 * m)));
    }
    let color = |s: usize| 1usize << (s % 2);
    let parity = |g: usize| (g.count_ones() % 2) as usize;
    let cut_index: HashMap<usize, usize> = d.cuts.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut table = vec![vec![SideLabel::Reflector; k]; 4];
    for g in 0..4 {
        for s in 0..k {
            let (pc, ps) = match cut_index.get(&s) {
                None => (g ^ color(s), s),
                Some(&i) => {
                    let slot = closed_slot(m, g, i);
                    let base = closed_slot(m, g ^ color(s), i);
                    let img = sigma.apply(slot);
                    if img == slot {
                        if sigma.apply(base) != base {
                            return Err(Error::Construction(format!("slot {} is fixed but its default partner {} is not", slot + 1, base + 1)));
                        }
                        (g ^ color(s), s)
                    } else {
                        (img / m, d.cuts[img % m])
                    }
                }
            };
            let reversed = parity(g) == parity(pc);
            // The element carries the partner copy across this side: it maps the partner side onto side s.
            let element = d.side_map(ps, s, reversed)?;
            table[g][s] = SideLabel::Glued { copy: pc, side: ps, element, reversed };
        }
    }
    let cx = complex_from_table(d, table, Some(sigma.clone()))?;
    check_consistency(d, &cx)?;
    Ok(cx)
}

/// The walls transverse to `D` with their gluing labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfSpaceInvariant {
    /// Transverse walls in boundary order.
    pub walls: Vec<Wall>,
    /// Canonical development table: per class of copies, the element and target class across each side.
    pub labels: Vec<Vec<(usize, Word)>>,
}

impl HalfSpaceInvariant {
    /// Consecutive walls cross and walls two or more steps apart are disjoint.
    pub fn satisfies_axioms(&self, w: &CoxeterGroup) -> bool {
        walls_form_loop(w, &self.walls)
    }
}

/// Transitions of the development automaton: crossing side `s` of copy `g`.
fn transitions(d: &Disk, c: &OrbifoldComplex) -> Vec<Vec<(usize, Word)>> {
    (0..c.table.len()).map(|g| (0..d.sides.len()).map(|s| crossing(d, c, g, s)).collect()).collect()
}

/// Copies merged when their developments agree (coarsest stable partition).
fn development_classes(trans: &[Vec<(usize, Word)>]) -> Vec<usize> {
    let mut class = vec![0usize; trans.len()];
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, &Word)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..trans.len())
            .map(|g| {
                let sig = (class[g], trans[g].iter().map(|(to, e)| (class[*to], e)).collect());
                let k = ids.len();
                *ids.entry(sig).or_insert(k)
            })
            .collect();
        let stable = ids.len() == class.iter().collect::<HashSet<_>>().len();
        class = next;
        if stable {
            return class;
        }
    }
}

/// Encoding of the development read from copy `start`, with classes numbered in breadth-first order.
fn development_code(trans: &[Vec<(usize, Word)>], class: &[usize], start: usize) -> Vec<Vec<(usize, Word)>> {
    let mut index: HashMap<usize, usize> = HashMap::from([(class[start], 0)]);
    let mut order = vec![start];
    let mut q = VecDeque::from([start]);
    while let Some(g) = q.pop_front() {
        for (to, _) in &trans[g] {
            if !index.contains_key(&class[*to]) {
                index.insert(class[*to], order.len());
                order.push(*to);
                q.push_back(*to);
            }
        }
    }
    order.iter().map(|&g| trans[g].iter().map(|(to, e)| (index[&class[*to]], e.clone())).collect()).collect()
}

/// Reads off the transverse walls of `D` and the canonical side table of `c`.
pub fn halfspace_invariant(d: &Disk, c: &OrbifoldComplex) -> HalfSpaceInvariant {
    let walls = d.sides.iter().map(|s| s.wall.clone()).collect();
    let trans = transitions(d, c);
    let class = development_classes(&trans);
    let labels = (0..trans.len()).map(|s| development_code(&trans, &class, s)).min().unwrap_or_default();
    HalfSpaceInvariant { walls, labels }
}

/// Element carrying `D` across side `s` of copy `g`, and the copy reached.
fn crossing(d: &Disk, c: &OrbifoldComplex, g: usize, s: usize) -> (usize, Word) {
    match &c.table[g][s] {
        SideLabel::Reflector => (g, d.group.wall_reflection(&d.sides[s].wall)),
        SideLabel::Glued { copy, element, .. } => (*copy, element.clone()),
    }
}

/// Decides whether two complexes over the same `D` give inequivalent immersions,
/// starting with the base copy of `c2` at translate `h`.
///
/// The base copy of `c1` walks toward `h·D` through its development: at each
/// step it crosses a side whose wall separates it from `h·D`, which strictly
/// lowers the number of separating walls. When no wall separates the two, the
/// cell sets are compared and then the side tables are compared along both
/// developments.
pub fn inequivalent_at(d: &Disk, c1: &OrbifoldComplex, c2: &OrbifoldComplex, h: &Word) -> Result<bool> {
    let w = &d.group;
    let t = d.tiling();
    let target: Vec<Cell> = d.cells.iter().map(|x| t.translate(h, x)).collect();
    let (mut copy, mut pos) = (0usize, Word::identity());
    let cur_cells = |pos: &Word| -> Vec<Cell> { d.cells.iter().map(|x| t.translate(pos, x)).collect() };
    let start = w.d_p_cells(&cur_cells(&pos), &target)?;
    let mut dist = start;
    let mut steps = 0;
    while dist > 0 {
        let here = cur_cells(&pos);
        let mut moved = false;
        for s in 0..d.sides.len() {
            let wall = t.translate_wall(&pos, &d.sides[s].wall);
            let mine = w.cell_side(&wall, &here[0]);
            if target.iter().all(|x| {
                let side = w.cell_side(&wall, x);
                side != Side::On && side != mine
            }) {
                let (nc, g) = crossing(d, c1, copy, s);
                let npos = w.mul(&pos, &g);
                let nd = w.d_p_cells(&cur_cells(&npos), &target)?;
                if nd >= dist {
                    return Err(Error::InvariantViolation(format!("crossing side {s} does not reduce d_P ({dist} → {nd})")));
                }
                copy = nc;
                pos = npos;
                dist = nd;
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok(true);
        }
        steps += 1;
        if steps > start {
            return Err(Error::InvariantViolation("normalization did not terminate".into()));
        }
    }
    let mut a = cur_cells(&pos);
    let mut b = target.clone();
    a.sort();
    b.sort();
    if a != b {
        return Ok(true);
    }
    let conj = |x: &Word, g: &Word| w.conjugate(x, g);
    for start2 in 0..c2.table.len().max(1) {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut q = VecDeque::from([(copy, pos.clone(), start2, h.clone())]);
        let mut agree = true;
        while let Some((g1, p1, g2, p2)) = q.pop_front() {
            if !seen.insert((g1, g2)) {
                continue;
            }
            for s in 0..d.sides.len() {
                let (n1, e1) = crossing(d, c1, g1, s);
                let (n2, e2) = crossing(d, c2, g2, s);
                if conj(&p1, &e1) != conj(&p2, &e2) {
                    agree = false;
                    break;
                }
                q.push_back((n1, w.mul(&p1, &e1), n2, w.mul(&p2, &e2)));
            }
            if !agree {
                break;
            }
        }
        if agree {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`inequivalent_at`] with both base copies at the identity.
pub fn inequivalent(d: &Disk, c1: &OrbifoldComplex, c2: &OrbifoldComplex) -> Result<bool> {
    inequivalent_at(d, c1, c2, &Word::identity())
}

/// One stage of a development.
#[derive(Clone, Debug, Serialize)]
pub struct DevelopStage {
    /// Word length bound.
    pub depth: usize,
    /// Placed copies `(copy, translate)`.
    pub translates: usize,
    /// Cells in the union.
    pub cells: usize,
    /// Sides of the union (maximal same-wall boundary runs).
    pub sides: usize,
    /// Whether the transverse walls of the union form a loop of crossing walls.
    pub convex: bool,
}

/// The union of placed copies of `D`.
#[derive(Clone, Debug, Serialize)]
pub struct Developed {
    /// Placements `(copy, translate)` in discovery order.
    pub placements: Vec<(usize, Word)>,
    /// All cells of the union.
    pub cells: Vec<Cell>,
    /// Per-depth summaries.
    pub stages: Vec<DevelopStage>,
}

struct UnionShape {
    cells: Vec<Cell>,
    runs: Vec<(Wall, Vec<CellEdge>)>,
    convex: bool,
}

fn check_union(d: &Disk, placements: &[(usize, Word)]) -> Result<UnionShape> {
    let t = d.tiling();
    let mut cells = Vec::new();
    let mut seen = HashSet::new();
    for (_, p) in placements {
        for x in &d.cells {
            let y = t.translate(p, x);
            if !seen.insert(y.clone()) {
                return Err(Error::InvariantViolation(format!("two placed copies share the cell {:?} at {}", y.face, y.chamber)));
            }
            cells.push(y);
        }
    }
    let shape = analyze(&t, &cells);
    if !shape.manifold || !shape.connected || shape.euler != 1 {
        return Err(Error::InvariantViolation(format!(
            "the union of {} copies is not an embedded disk (χ = {}, connected = {}, surface = {})",
            placements.len(),
            shape.euler,
            shape.connected,
            shape.manifold
        )));
    }
    let runs = split_sides(&t, &cells, &shape.walk);
    let walls: Vec<Wall> = runs.iter().map(|r| r.0.clone()).collect();
    let convex = walls_form_loop(&d.group, &walls);
    Ok(UnionShape { cells, runs, convex })
}

fn stage(depth: usize, placements: &[(usize, Word)], u: &UnionShape) -> DevelopStage {
    DevelopStage { depth, translates: placements.len(), cells: u.cells.len(), sides: u.runs.len(), convex: u.convex }
}

/// The union of copies placed at the given `(copy, translate)` pairs, checked to be an embedded disk.
pub fn develop_union(d: &Disk, placements: &[(usize, Word)]) -> Result<Developed> {
    let u = check_union(d, placements)?;
    Ok(Developed { placements: placements.to_vec(), stages: vec![stage(0, placements, &u)], cells: u.cells })
}

/// Develops a single-copy complex by successive doubling.
///
/// Stage `k` maps the whole stage `k - 1` union across one of its boundary
/// sides, using the element that carries the base copy across the matching
/// side of `D`. Sides of `D` are tried cyclically from side `k - 1`; a side is
/// used only when the image lies strictly beyond its wall. Each stage is
/// checked to be an embedded disk and its convexity is recorded.
pub fn develop(d: &Disk, c: &OrbifoldComplex, depth: usize) -> Result<Developed> {
    if depth > MAX_DEPTH {
        return Err(Error::Resource(format!("development depth {depth} exceeds {MAX_DEPTH}")));
    }
    if c.table.len() != 1 {
        return Err(Error::InvalidInput("doubling development needs a single-copy complex; use develop_ball".into()));
    }
    let w = &d.group;
    let mut placements = vec![(0usize, Word::identity())];
    let mut u = check_union(d, &placements)?;
    let mut stages = vec![stage(0, &placements, &u)];
    for level in 1..=depth {
        let mut chosen = None;
        for offset in 0..d.sides.len() {
            let want = (level - 1 + offset) % d.sides.len();
            let first = d.sides[want].edges[0];
            let Some(run) = u.runs.iter().find(|(_, es)| es.iter().any(|e| e.cell == first.cell && e.side == first.side)) else {
                continue;
            };
            let h = crossing(d, c, 0, want).1;
            let wall = &run.0;
            let near = w.cell_side(wall, &u.cells[0]);
            let moved: Vec<Cell> = u.cells.iter().map(|x| d.tiling().translate(&h, x)).collect();
            let far_ok = moved.iter().all(|x| matches!(w.cell_side(wall, x), sd if sd != Side::On && sd != near));
            let near_ok = u.cells.iter().all(|x| w.cell_side(wall, x) == near);
            if near_ok && far_ok {
                chosen = Some(h);
                break;
            }
        }
        let h = chosen.ok_or_else(|| Error::InvariantViolation(format!("no boundary side admits a doubling at stage {level}")))?;
        let more: Vec<(usize, Word)> = placements.iter().map(|(g, q)| (*g, w.mul(&h, q))).collect();
        placements.extend(more);
        u = check_union(d, &placements)?;
        stages.push(stage(level, &placements, &u));
    }
    Ok(Developed { placements, cells: u.cells, stages })
}

/// Develops `c` from its base copy: all placements reached by crossing at most `depth` sides.
/// The union is checked to be an embedded disk; it is not convex past depth 0.
pub fn develop_ball(d: &Disk, c: &OrbifoldComplex, depth: usize) -> Result<Developed> {
    if depth > MAX_DEPTH {
        return Err(Error::Resource(format!("development depth {depth} exceeds {MAX_DEPTH}")));
    }
    let w = &d.group;
    let mut placements = vec![(0usize, Word::identity())];
    let mut index: HashSet<(usize, Word)> = HashSet::from([(0, Word::identity())]);
    let mut frontier = vec![0usize];
    let mut stages = Vec::new();
    let mut u = check_union(d, &placements)?;
    stages.push(stage(0, &placements, &u));
    for level in 1..=depth {
        let mut next = Vec::new();
        for &i in &frontier {
            let (g, p) = placements[i].clone();
            for s in 0..d.sides.len() {
                let (ng, e) = crossing(d, c, g, s);
                let key = (ng, w.mul(&p, &e));
                if index.insert(key.clone()) {
                    next.push(placements.len());
                    placements.push(key);
                }
            }
        }
        frontier = next;
        u = check_union(d, &placements)?;
        stages.push(stage(level, &placements, &u));
    }
    Ok(Developed { placements, cells: u.cells, stages })
}

/// Which complexes the census builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CensusMode {
    /// The orbifolds `D_σ`, with `σ` acting on the cut sides of one disk.
    Orbifold,
    /// The closed surfaces `S_σ`, with `σ` acting on the `2n - 2` cut slots.
    Closed,
}

/// Which involutions to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaFilter {
    /// Every involution.
    All,
    /// The identity and single transpositions.
    Transpositions,
    /// An explicit list.
    Explicit(Vec<Involution>),
}

/// One class of the census.
#[derive(Clone, Debug, Serialize)]
pub struct CensusClass {
    /// Representative involution.
    pub sigma: String,
    /// Number of involutions in the class.
    pub members: usize,
    /// Invariant digest.
    pub invariant: String,
}

/// One row of the census.
#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    /// Chain length.
    pub n: usize,
    /// Number of cut symbols `σ` acts on.
    pub cut_edges: usize,
    /// Number of involutions enumerated.
    pub involutions: u64,
    /// Number of those passing the injectivity hypotheses.
    pub admissible: u64,
    /// Pairwise-inequivalent classes among the admissible ones.
    pub classes: usize,
    /// Genus of the surfaces (closed mode).
    pub genus: Option<i64>,
    /// `(2g - c₀ - 3)!` (closed mode).
    pub factorial_bound: Option<f64>,
    /// `e^{g ln g}` (closed mode).
    pub exp_bound: Option<f64>,
    /// Whether `classes ≥ (n - 1)!` (closed mode).
    pub meets_factorial: Option<bool>,
    /// Classes, sorted by invariant.
    pub details: Vec<CensusClass>,
}

/// Census output.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    /// Mode.
    pub mode: CensusMode,
    /// Frozen Euler constant `c₀` used for the bounds.
    pub c0: i64,
    /// Rows in increasing `n`.
    pub rows: Vec<CensusRow>,
}

/// `χ(S_σ) = -n - C0` for the closed variant.
pub const C0: i64 = 1;

fn factorial(n: i64) -> f64 {
    (1..=n.max(0)).map(|x| x as f64).product()
}

/// Counts inequivalent complexes for each `n` in `ns`.
pub fn census(host: &Polyhedron, f1: usize, f2: usize, ns: &[usize], mode: CensusMode, filter: &SigmaFilter) -> Result<CensusReport> {
    let mut rows = Vec::new();
    for &n in ns {
        if n > 6 && mode == CensusMode::Orbifold || n > MAX_N {
            return Err(Error::Resource(format!("census guard exceeded: n = {n}")));
        }
        if mode == CensusMode::Closed && n % 2 == 0 {
            return Err(Error::InvalidInput(format!("closed census needs odd n, got {n}")));
        }
        let spec = DiskSpec::new(host.clone(), f1, f2, n)?;
        let d = build_disk(&spec)?;
        let m = match mode {
            CensusMode::Orbifold => d.num_cuts(),
            CensusMode::Closed => 4 * d.num_cuts(),
        };
        let sigmas: Vec<Involution> = match filter {
            SigmaFilter::All => Involution::all(m),
            SigmaFilter::Transpositions => {
                let mut v = vec![Involution::identity(m)];
                for i in 0..m {
                    for j in i + 1..m {
                        v.push(Involution::from_transpositions(m, &[(i, j)])?);
                    }
                }
                v
            }
            SigmaFilter::Explicit(list) => {
                if let Some(s) = list.iter().find(|s| s.len() != m) {
                    return Err(Error::InvalidInput(format!("σ = {s} acts on {} points, expected {m}", s.len())));
                }
                list.clone()
            }
        };
        let built: Vec<Option<(Involution, OrbifoldComplex)>> = sigmas
            .par_iter()
            .map(|s| {
                let cx = match mode {
                    CensusMode::Orbifold => glue_sigma(&d, s),
                    CensusMode::Closed => match closed_surface_variant(&d, s) {
                        Err(Error::Construction(_)) => return Ok(None),
                        other => other,
                    },
                }?;
                Ok(check_injectivity_hypotheses(&d, &cx).then(|| (s.clone(), cx)))
            })
            .collect::<Result<_>>()?;
        let admissible: Vec<(Involution, OrbifoldComplex)> = built.into_iter().flatten().collect();
        // Pre-filter by invariant; confirm collisions and distinctness with the full decision procedure.
        let mut by_inv: BTreeMap<HalfSpaceInvariant, Vec<usize>> = BTreeMap::new();
        for (i, (_, cx)) in admissible.iter().enumerate() {
            by_inv.entry(halfspace_invariant(&d, cx)).or_default().push(i);
        }
        for members in by_inv.values() {
            let rep = &admissible[members[0]].1;
            for &j in &members[1..] {
                if inequivalent(&d, rep, &admissible[j].1)? {
                    return Err(Error::InvariantViolation("equal invariants but inequivalent complexes".into()));
                }
            }
        }
        let reps: Vec<usize> = by_inv.values().map(|v| v[0]).collect();
        let pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|a| (a + 1..reps.len()).map(move |b| (a, b))).collect();
        let clash = pairs
            .par_iter()
            .map(|&(a, b)| inequivalent(&d, &admissible[reps[a]].1, &admissible[reps[b]].1).map(|x| !x))
            .collect::<Result<Vec<bool>>>()?;
        if clash.iter().any(|&x| x) {
            return Err(Error::InvariantViolation("distinct invariants but equivalent complexes".into()));
        }
        let details: Vec<CensusClass> = by_inv
            .iter()
            .map(|(inv, members)| CensusClass {
                sigma: admissible[members[0]].0.to_string(),
                members: members.len(),
                invariant: format!("{:016x}", fxhash(&format!("{:?}", inv.labels))),
            })
            .collect();
        let (genus, fb, eb) = match mode {
            CensusMode::Orbifold => (None, None, None),
            CensusMode::Closed => {
                let g = match admissible.first() {
                    Some((_, cx)) => crate::surfaces::genus(cx)?,
                    None => (n as i64 + C0) / 2 + 1,
                };
                let gf = g as f64;
                (Some(g), Some(factorial(2 * g - C0 - 3)), Some((gf * gf.ln()).exp()))
            }
        };
        rows.push(CensusRow {
            n,
            cut_edges: m,
            involutions: sigmas.len() as u64,
            admissible: admissible.len() as u64,
            classes: by_inv.len(),
            genus,
            factorial_bound: fb,
            exp_bound: eb,
            meets_factorial: (mode == CensusMode::Closed).then(|| by_inv.len() as f64 >= factorial(n as i64 - 1)),
            details,
        });
    }
    Ok(CensusReport { mode, c0: C0, rows })
}

/// Version of the CSV layout and error-code table.
pub const SCHEMA_VERSION: u32 = 1;

impl CensusReport {
    /// CSV with columns `n, cut_edges, involutions, classes, genus, factorial_bound, exp_bound`.
    pub fn to_csv(&self, schema_header: bool) -> Result<String> {
        let mut out = Vec::new();
        if schema_header {
            out.extend_from_slice(format!("# schema-version {SCHEMA_VERSION}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut out);
        let wr = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["n", "cut_edges", "involutions", "classes", "genus", "factorial_bound", "exp_bound"]).map_err(wr)?;
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6e}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.cut_edges.to_string(),
                r.involutions.to_string(),
                r.classes.to_string(),
                r.genus.map(|g| g.to_string()).unwrap_or_default(),
                opt(r.factorial_bound),
                opt(r.exp_bound),
            ])
            .map_err(wr)?;
        }
        w.flush()?;
        drop(w);
        String::from_utf8(out).map_err(|e| Error::Io(e.to_string()))
    }

    /// Plain-text listing of every class with its representative and invariant digest.
    pub fn detail_text(&self) -> String {
        let mut s = format!("mode {:?}\nc0 {}\n", self.mode, self.c0);
        for r in &self.rows {
            s += &format!(
                "\n[n = {}] cut_edges = {} involutions = {} admissible = {} classes = {}\n",
                r.n, r.cut_edges, r.involutions, r.admissible, r.classes
            );
            if let (Some(g), Some(ok)) = (r.genus, r.meets_factorial) {
                s += &format!("genus = {g} classes >= (n-1)! : {ok}\n");
            }
            for (i, c) in r.details.iter().enumerate() {
                s += &format!("class {i}: sigma = {} members = {} invariant = {}\n", c.sigma, c.members, c.invariant);
            }
        }
        s
    }
}

/// Stable 64-bit FNV-1a digest.
fn fxhash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
