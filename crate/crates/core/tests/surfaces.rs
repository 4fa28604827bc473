use surface_census::coxeter::{Cell, Word};
use surface_census::polyhedron::{cube, dodecahedron, satisfies_convexity, Polyhedron};
use surface_census::surfaces::*;
use surface_census::{Error, Involution};

fn disk(n: usize) -> Disk {
    build_disk(&DiskSpec::dodecahedral(n).unwrap()).unwrap()
}

fn tag() -> Cell {
    Cell { chamber: Word::identity(), face: 0 }
}

/// The boundary surface of a polyhedron as a complex: one cell per face, one edge per polyhedron edge.
fn boundary_surface(p: &Polyhedron) -> OrbifoldComplex {
    let mut edges = Vec::new();
    for (e, &[f, g]) in p.edges().iter().enumerate() {
        let tf = p.edge_position(f, e).unwrap();
        let tg = p.edge_position(g, e).unwrap();
        let (kf, kg) = (p.face(f).len(), p.face(g).len());
        let a = CellEdge { cell: f, side: tf, from: (tf + kf - 1) % kf, to: tf };
        let gfrom = (tg + kg - 1) % kg;
        let b = if p.corner_vertex(g, gfrom) == p.corner_vertex(f, a.from) {
            CellEdge { cell: g, side: tg, from: gfrom, to: tg }
        } else {
            CellEdge { cell: g, side: tg, from: tg, to: gfrom }
        };
        edges.push(ComplexEdge { kind: EdgeKind::Interior, incidences: vec![a, b] });
    }
    let nf = p.num_faces();
    let corners = (0..nf).map(|f| p.face(f).len()).collect();
    OrbifoldComplex::from_parts(vec![tag(); nf], corners, vec![0; nf], edges).unwrap()
}

/// One polygon with every side a mirror.
fn mirror_polygon(k: usize) -> OrbifoldComplex {
    let edges = (0..k)
        .map(|t| ComplexEdge { kind: EdgeKind::Reflector, incidences: vec![CellEdge { cell: 0, side: t, from: (t + k - 1) % k, to: t }] })
        .collect();
    OrbifoldComplex::from_parts(vec![tag()], vec![k], vec![0], edges).unwrap()
}

#[test]
fn disk_shape_for_each_chain_length() {
    for n in 1..=7 {
        let d = disk(n);
        assert_eq!(d.n, n);
        assert_eq!(d.sides.len(), n + 5, "n = {n}");
        assert_eq!(d.num_cuts(), (n - 1) / 2);
        assert_eq!(d.chain.len(), n);
        assert_eq!(d.cells.len(), n + 1);
        assert_eq!(d.face_disk.faces.len(), 2);
        assert!(d.is_convex());
        assert!(satisfies_convexity(&d.hat, &d.face_disk).unwrap());
        let boundary: usize = d.sides.iter().map(|s| s.edges.len()).sum();
        let total: usize = d.cells.iter().map(|c| d.host().face(c.face as usize).len()).sum();
        assert_eq!(total, boundary + 2 * d.interior.len());
        for &c in &d.cuts {
            assert_eq!(d.sides[c].edges.len(), 2);
        }
    }
    assert_eq!(disk(4).num_cuts(), 1);
    assert_eq!(disk(5).cuts, vec![0, 2]);
    assert_eq!(disk(7).cuts, vec![0, 2, 4]);
}

#[test]
fn short_chains() {
    let d1 = disk(1);
    assert!(d1.cuts.is_empty());
    assert_eq!(d1.face_disk.faces.iter().map(|&f| d1.pieces[f].len()).sum::<usize>(), 2);
    let d2 = disk(2);
    assert!(d2.cuts.is_empty());
    assert_eq!(d2.face_disk.faces.iter().map(|&f| d2.pieces[f].len()).sum::<usize>(), 3);
    let c = glue_sigma(&d2, &Involution::identity(0)).unwrap();
    assert!(c.has_reflectors());
    assert!(matches!(euler_characteristic(&c), Err(Error::NotASurface(_))));
}

#[test]
fn bad_disk_specs_are_rejected() {
    assert!(DiskSpec::new(cube(), 0, 1, 3).is_err());
    let p = dodecahedron();
    let far = (1..12).find(|&g| !p.adjacent(0, g)).unwrap();
    assert!(DiskSpec::new(p.clone(), 0, far, 3).is_err());
    assert!(matches!(DiskSpec::new(p.clone(), 0, p.neighbors(0)[0], 8), Err(Error::Resource(_))));
    assert!(DiskSpec::new(p, 0, 1, 0).is_err());
}

#[test]
fn mirror_polygons_have_degree_four_corners() {
    for k in [4, 5, 8] {
        let c = mirror_polygon(k);
        assert_eq!(c.num_vertices, k);
        assert!(orbifold_vertex_degrees(&c).iter().all(|&x| x == 4));
    }
}

#[test]
fn polyhedron_boundaries_are_spheres_with_degree_three() {
    for p in [cube(), dodecahedron()] {
        let c = boundary_surface(&p);
        assert_eq!(c.num_vertices, p.num_vertices());
        assert_eq!(euler_characteristic(&c).unwrap(), 2);
        assert_eq!(genus(&c).unwrap(), 0);
        assert!(orbifold_vertex_degrees(&c).iter().all(|&x| x == 3));
    }
}

#[test]
fn degree_three_gluing_fails_hypotheses() {
    // Two pentagons glued along one side: the shared corners see two cells between mirrors.
    let e = |cell, side: usize| CellEdge { cell, side, from: (side + 4) % 5, to: side };
    let mut edges = vec![ComplexEdge { kind: EdgeKind::Interior, incidences: vec![e(0, 0), CellEdge { cell: 1, side: 0, from: 0, to: 4 }] }];
    for cell in 0..2 {
        for side in 1..5 {
            edges.push(ComplexEdge { kind: EdgeKind::Reflector, incidences: vec![e(cell, side)] });
        }
    }
    let c = OrbifoldComplex::from_parts(vec![tag(); 2], vec![5, 5], vec![0, 0], edges).unwrap();
    assert!(orbifold_vertex_degrees(&c).iter().all(|&x| x == 4));

    let d = disk(5);
    let bad = boundary_surface(&dodecahedron());
    assert!(!check_injectivity_hypotheses(&d, &bad));
}

#[test]
fn malformed_parts_are_rejected() {
    let e = ComplexEdge { kind: EdgeKind::Reflector, incidences: vec![CellEdge { cell: 0, side: 0, from: 2, to: 0 }] };
    assert!(OrbifoldComplex::from_parts(vec![tag()], vec![4], vec![0], vec![e]).is_err());
    assert!(OrbifoldComplex::from_parts(vec![tag()], vec![4, 4], vec![0], vec![]).is_err());
}

#[test]
fn transposition_gluing_is_consistent() {
    for n in [5, 6] {
        let d = disk(n);
        for sigma in Involution::all(d.num_cuts()) {
            let c = glue_sigma(&d, &sigma).unwrap();
            check_consistency(&d, &c).unwrap();
            assert!(check_injectivity_hypotheses(&d, &c), "n = {n}, σ = {sigma}");
            let glued = c.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Glued(_))).count();
            assert_eq!(glued, 2 * sigma.transpositions().len());
        }
    }
    assert!(glue_sigma(&disk(5), &Involution::identity(3)).is_err());
}

#[test]
fn developments_double_and_stay_convex() {
    let d = disk(5);
    let c = glue_sigma(&d, &Involution::parse_cycles(2, "(1 2)").unwrap()).unwrap();
    let dev = develop(&d, &c, 3).unwrap();
    assert_eq!(dev.stages.len(), 4);
    for (k, s) in dev.stages.iter().enumerate() {
        assert_eq!(s.depth, k);
        assert_eq!(s.translates, 1 << k);
        assert_eq!(s.cells, (1 << k) * d.cells.len());
        assert!(s.convex);
    }
    assert_eq!(dev.placements.len(), 8);
    assert!(develop(&d, &c, MAX_DEPTH + 1).is_err());
    let ball = develop_ball(&d, &c, 1).unwrap();
    assert!(ball.placements.len() > 1);
}

#[test]
fn closed_variant_closes_every_corner_with_four_cells() {
    let d = disk(5);
    let c = closed_surface_variant(&d, &Involution::identity(4 * d.num_cuts())).unwrap();
    assert_eq!(c.num_copies(), 4);
    assert!(!c.has_reflectors());
    let mut corners = vec![0; c.num_vertices];
    for row in &c.vertex_of {
        for &v in row {
            corners[v] += 1;
        }
    }
    let d_corners = |v: usize| c.vertex_of.iter().enumerate().any(|(cell, row)| {
        row.iter().enumerate().any(|(k, &x)| x == v && d.sides.iter().any(|s| s.edges.iter().any(|e| e.cell == cell % d.cells.len() && (e.from == k || e.to == k))))
    });
    for v in 0..c.num_vertices {
        if d_corners(v) {
            assert_eq!(corners[v], 4, "vertex {v}");
        }
    }
    assert!(orbifold_vertex_degrees(&c).iter().all(|&x| x == 4));
}

#[test]
fn closed_euler_characteristic_and_genus() {
    for n in [3, 5, 7] {
        let d = disk(n);
        let m = d.num_cuts();
        let id = closed_surface_variant(&d, &Involution::identity(4 * m)).unwrap();
        let chi = euler_characteristic(&id).unwrap();
        assert_eq!(chi, -(n as i64) - C0);
        assert_eq!(chi, d.orbifold_euler_times_four());
        assert_eq!(chi, 4 - d.sides.len() as i64);
        assert_eq!(genus(&id).unwrap(), (n as i64 + 3) / 2);
        let mut checked = 0;
        for (i, j) in (0..4 * m).flat_map(|i| (i + 1..4 * m).map(move |j| (i, j))) {
            let sigma = Involution::from_transpositions(4 * m, &[(i, j)]).unwrap();
            if let Ok(c) = closed_surface_variant(&d, &sigma) {
                if check_injectivity_hypotheses(&d, &c) {
                    assert_eq!(euler_characteristic(&c).unwrap(), -(n as i64) - C0);
                    checked += 1;
                }
            }
        }
        assert!(n == 3 || checked > 0);
    }
    assert!(closed_surface_variant(&disk(4), &Involution::identity(4)).is_err());
}

#[test]
fn halfspace_invariants_satisfy_axioms() {
    for n in [5, 6] {
        let d = disk(n);
        for sigma in Involution::all(d.num_cuts()) {
            let c = glue_sigma(&d, &sigma).unwrap();
            let h = halfspace_invariant(&d, &c);
            assert_eq!(h.walls.len(), d.sides.len());
            assert!(h.satisfies_axioms(d.group()));
        }
    }
}

#[test]
fn inequivalence_is_symmetric_and_irreflexive() {
    let d = disk(5);
    let a = glue_sigma(&d, &Involution::identity(2)).unwrap();
    let b = glue_sigma(&d, &Involution::parse_cycles(2, "(1 2)").unwrap()).unwrap();
    assert!(inequivalent(&d, &a, &b).unwrap());
    assert!(inequivalent(&d, &b, &a).unwrap());
    assert!(!inequivalent(&d, &a, &a).unwrap());
    assert!(!inequivalent(&d, &b, &b).unwrap());
    assert_ne!(halfspace_invariant(&d, &a), halfspace_invariant(&d, &b));
}

#[test]
fn orbifold_census_counts_involutions() {
    let p = dodecahedron();
    let report = census(&p, 0, p.neighbors(0)[0], &[1, 2, 3, 4, 5, 6], CensusMode::Orbifold, &SigmaFilter::All).unwrap();
    let classes: Vec<usize> = report.rows.iter().map(|r| r.classes).collect();
    assert_eq!(classes, vec![1, 1, 1, 1, 2, 2]);
    for r in &report.rows {
        assert_eq!(r.involutions, surface_census::involution::involution_count((r.n - 1) / 2));
        assert_eq!(r.admissible as usize, r.details.iter().map(|c| c.members).sum::<usize>());
    }
    let csv = report.to_csv(true).unwrap();
    assert!(csv.starts_with(&format!("# schema-version {SCHEMA_VERSION}\n")));
    assert_eq!(csv.lines().count(), 2 + 6);
    assert!(census(&p, 0, p.neighbors(0)[0], &[7], CensusMode::Orbifold, &SigmaFilter::All).is_err());
    assert!(census(&p, 0, p.neighbors(0)[0], &[4], CensusMode::Closed, &SigmaFilter::All).is_err());
}

#[test]
fn closed_census_small() {
    let p = dodecahedron();
    let report = census(&p, 0, p.neighbors(0)[0], &[3], CensusMode::Closed, &SigmaFilter::All).unwrap();
    let row = &report.rows[0];
    assert_eq!((row.involutions, row.admissible, row.classes), (10, 5, 2));
    assert_eq!(row.genus, Some(3));
    let t = census(&p, 0, p.neighbors(0)[0], &[3], CensusMode::Closed, &SigmaFilter::Transpositions).unwrap();
    assert!(t.rows[0].classes <= row.classes);
}
