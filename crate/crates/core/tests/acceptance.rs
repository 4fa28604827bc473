//! Acceptance checks. Each criterion prints one PASS or FAIL line; the process
//! fails if any criterion fails.

mod common;

use common::Tits;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};
use surface_census::coxeter::{CoxeterGroup, Word};
use surface_census::graphcovers::*;
use surface_census::metricgraph::{rigidity_suite, search_quasi_isometry, thresholds, verify_map};
use surface_census::polyhedron::*;
use surface_census::surfaces::*;
use surface_census::{Involution, Result};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { pass, detail: detail.into() })
}

/// Involutions of `{0..m}` counted by running through every permutation.
fn involutions_by_permutations(m: usize) -> u64 {
    fn go(perm: &mut Vec<usize>, k: usize, count: &mut u64) {
        if k == perm.len() {
            if (0..perm.len()).all(|i| perm[perm[i]] == i) {
                *count += 1;
            }
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(perm, k + 1, count);
            perm.swap(k, i);
        }
    }
    let mut count = 0;
    go(&mut (0..m).collect(), 0, &mut count);
    count
}

fn recovered(n: usize, s: &Involution) -> Result<Involution> {
    let t = truncated_universal_cover(&cut_basepoint(&build_cover(n, s)?), default_radius(n))?;
    // Recovery reads no labels.
    recover_sigma(&t)
}

fn graph_cover_census() -> Result<Verdict> {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut ok = true;
    for m in 1..=6 {
        let mut seen = BTreeSet::new();
        for s in Involution::all(m) {
            seen.insert(recovered(m, &s)?.images().to_vec());
        }
        let oracle = involutions_by_permutations(m);
        ok &= seen.len() as u64 == oracle;
        counts.push(seen.len());
    }
    let elapsed = start.elapsed();
    ok &= counts == [1, 2, 4, 10, 26, 76] && elapsed < Duration::from_secs(60);
    verdict(ok, format!("distinct recovered {counts:?} in {:.1} s", elapsed.as_secs_f64()))
}

fn sigma_round_trip() -> Result<Verdict> {
    let start = Instant::now();
    let (mut total, mut bad) = (0, 0);
    for n in 1..=5 {
        for s in Involution::all(n) {
            total += 1;
            bad += (recovered(n, &s)? != s) as usize;
        }
    }
    let elapsed = start.elapsed();
    verdict(bad == 0 && elapsed < Duration::from_secs(120), format!("{total} involutions, {bad} mismatches, {:.1} s", elapsed.as_secs_f64()))
}

fn e2_identification() -> Result<Verdict> {
    let (mut edges, mut exceptions) = (0usize, 0usize);
    for n in 1..=5 {
        for s in Involution::all(n) {
            let t = truncated_universal_cover(&cut_basepoint(&build_cover(n, &s)?), default_radius(n))?;
            let blind = tree_invariants(&t.erase_labels())?;
            let e2: HashSet<usize> = blind.e2.into_iter().collect();
            for node in 1..t.len() {
                edges += 1;
                exceptions += ((t.label(node) == Some(Label::A)) != e2.contains(&node)) as usize;
            }
        }
    }
    verdict(exceptions == 0, format!("{edges} tree edges checked, {exceptions} exceptions"))
}

fn dodecahedron_subsets() -> Result<Verdict> {
    let start = Instant::now();
    let p = dodecahedron();
    let valid = validate_right_angled(&p).is_empty();
    let c = classify_subsets(&p)?;
    let lemma = check_degree_lemma(&p)?;
    let elapsed = start.elapsed();
    let min = c.min_faces_few_corners;
    let ok = valid && lemma && c.subsets == 4096 && min.is_some_and(|k| k > 6) && elapsed < Duration::from_secs(10);
    verdict(ok, format!("{} subsets, {} face disks, {} with at most 4 corners (fewest faces {:?}), {:.2} s", c.subsets, c.face_disks, c.few_corner_disks, min, elapsed.as_secs_f64()))
}

/// Positions of the sides of `f` that touch the disk.
fn contact(p: &Polyhedron, d: &FaceDisk, f: usize) -> BTreeSet<usize> {
    (0..p.face(f).len()).filter(|&k| d.faces.contains(&p.neighbors(f)[k])).collect()
}

fn shifted(k: usize, a: Alignment, m: usize) -> usize {
    if a.reflect {
        (a.offset + m - k % m) % m
    } else {
        (a.offset + k) % m
    }
}

fn compatible(p1: &Polyhedron, d1: &FaceDisk, x: usize, p2: &Polyhedron, d2: &FaceDisk, y: usize) -> Vec<Alignment> {
    let m = p1.face(x).len();
    if p2.face(y).len() != m {
        return Vec::new();
    }
    let (c1, c2) = (contact(p1, d1, x), contact(p2, d2, y));
    (0..m)
        .flat_map(|offset| [false, true].map(|reflect| Alignment { offset, reflect }))
        .filter(|&a| c1.iter().map(|&k| shifted(k, a, m)).collect::<BTreeSet<_>>() == c2)
        .collect()
}

/// Returns `None` for a clean amalgamation, or a description of the violation.
fn amalgamate_and_check(p1: &Polyhedron, d1: &FaceDisk, p2: &Polyhedron, d2: &FaceDisk, mt: Matching) -> (Option<String>, Option<Polyhedron>) {
    match amalgamate_disks(p1, d1, p2, d2, mt) {
        Err(e) => (Some(format!("amalgamation failed: {e}")), None),
        Ok(a) => {
            let q = &a.glued.polyhedron;
            if !satisfies_convexity(q, &a.disk).unwrap_or(false) {
                (Some(format!("union {:?} is not convex", a.disk.faces)), None)
            } else if !validate_right_angled(q).is_empty() {
                (Some("glued polyhedron is not right-angled".into()), None)
            } else {
                (None, Some(a.glued.polyhedron))
            }
        }
    }
}

fn random_convex_disk(p: &Polyhedron, rng: &mut ChaCha8Rng) -> Option<FaceDisk> {
    let size = rng.gen_range(1..=4);
    let mut set = vec![rng.gen_range(0..p.num_faces())];
    while set.len() < size {
        let f = *set.choose(rng)?;
        let g = *p.neighbors(f).choose(rng)?;
        if !set.contains(&g) {
            set.push(g);
        }
    }
    set.sort_unstable();
    if !is_face_disk(p, &set) {
        return None;
    }
    let d = FaceDisk::new(p, &set).ok()?;
    satisfies_convexity(p, &d).ok()?.then_some(d)
}

fn convexity_preservation() -> Result<Verdict> {
    let p = dodecahedron();
    let mut violations = Vec::new();

    // Every one- and two-face disk against a one- or two-face disk through face 0.
    let mut small = vec![vec![0]];
    small.extend(p.neighbors(0).iter().map(|&g| vec![0.min(g), 0.max(g)]));
    let mut all_small: Vec<Vec<usize>> = (0..12).map(|f| vec![f]).collect();
    all_small.extend(p.edges().iter().map(|&[a, b]| vec![a.min(b), a.max(b)]));
    let mut exhaustive = 0;
    for s1 in &small {
        let d1 = FaceDisk::new(&p, s1)?;
        for s2 in &all_small {
            let d2 = FaceDisk::new(&p, s2)?;
            for &x in &d1.transverse_faces {
                for &y in &d2.transverse_faces {
                    for a in compatible(&p, &d1, x, &p, &d2, y) {
                        exhaustive += 1;
                        if let (Some(v), _) = amalgamate_and_check(&p, &d1, &p, &d2, Matching { x, y, alignment: a }) {
                            violations.push(v);
                        }
                    }
                }
            }
        }
    }

    // Randomized amalgamations over a growing pool of hosts.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pool = vec![p.clone(), double(&p, 0)?];
    let mut random = 0;
    let mut attempts = 0;
    while random < 1000 && attempts < 200_000 {
        attempts += 1;
        let p1 = pool.choose(&mut rng).unwrap().clone();
        let p2 = pool.choose(&mut rng).unwrap().clone();
        let (Some(d1), Some(d2)) = (random_convex_disk(&p1, &mut rng), random_convex_disk(&p2, &mut rng)) else { continue };
        let x = *d1.transverse_faces.choose(&mut rng).unwrap();
        let ys: Vec<usize> = d2.transverse_faces.iter().copied().filter(|&y| p2.face(y).len() == p1.face(x).len()).collect();
        let Some(&y) = ys.choose(&mut rng) else { continue };
        let Some(&a) = compatible(&p1, &d1, x, &p2, &d2, y).choose(&mut rng) else { continue };
        random += 1;
        match amalgamate_and_check(&p1, &d1, &p2, &d2, Matching { x, y, alignment: a }) {
            (Some(v), _) => violations.push(v),
            (None, Some(q)) => {
                if q.num_faces() <= 40 && pool.len() < 40 {
                    pool.push(q);
                }
            }
            _ => {}
        }
    }
    verdict(
        violations.is_empty() && random == 1000,
        format!("{exhaustive} exhaustive and {random} random amalgamations, {} violations{}", violations.len(), violations.first().map(|v| format!(" (first: {v})")).unwrap_or_default()),
    )
}

fn coxeter_oracle() -> Result<Verdict> {
    let start = Instant::now();
    let p = dodecahedron();
    let g = CoxeterGroup::new(&p)?;
    let t = Tits::new(&p);
    let bfs = t.ball(4);
    // Partition all words of length at most 4 by normal form and by matrix.
    let mut by_nf: HashMap<Word, usize> = HashMap::new();
    let mut by_matrix: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut words = 0usize;
    let mut length_ok = true;
    let mut stack: Vec<Vec<u16>> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        words += 1;
        let nf = g.normal_form(&w)?;
        let m = t.of(&w);
        length_ok &= bfs.get(&m) == Some(&nf.len());
        let next = by_nf.len();
        let a = *by_nf.entry(nf).or_insert(next);
        let next = by_matrix.len();
        let b = *by_matrix.entry(m).or_insert(next);
        pairs.insert((a, b));
        if w.len() < 4 {
            for s in 0..12 {
                let mut x = w.clone();
                x.push(s);
                stack.push(x);
            }
        }
    }
    let same_partition = pairs.len() == by_nf.len() && pairs.len() == by_matrix.len();
    let ball = g.cayley_ball(4)?;
    let e = [Word::identity()];
    let mut dp_ok = ball.len() == bfs.len();
    for w in ball.iter() {
        dp_ok &= g.d_p(&e, std::slice::from_ref(w))? == g.word_length(w.letters())?;
    }
    let elapsed = start.elapsed();
    verdict(
        same_partition && length_ok && dp_ok && elapsed < Duration::from_secs(300),
        format!("{words} words in {} classes (oracle {}), d_P = length on {} elements, {:.1} s", by_nf.len(), by_matrix.len(), ball.len(), elapsed.as_secs_f64()),
    )
}

fn surface_census() -> Result<Verdict> {
    let p = dodecahedron();
    let f2 = p.neighbors(0)[0];
    let report = census(&p, 0, f2, &[1, 2, 3, 4], CensusMode::Orbifold, &SigmaFilter::All)?;
    let mut ok = report.rows.iter().all(|r| r.classes as u64 == r.involutions);
    let classes: Vec<usize> = report.rows.iter().map(|r| r.classes).collect();
    let mut pairs = 0;
    for n in 1..=6 {
        let d = build_disk(&DiskSpec::new(p.clone(), 0, f2, n)?)?;
        let cs: Vec<OrbifoldComplex> = Involution::all(d.num_cuts()).iter().map(|s| glue_sigma(&d, s)).collect::<Result<_>>()?;
        let inv: Vec<HalfSpaceInvariant> = cs.iter().map(|c| halfspace_invariant(&d, c)).collect();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                pairs += 1;
                let differ = inv[i] != inv[j];
                ok &= differ == inequivalent(&d, &cs[i], &cs[j])?;
                ok &= differ == inequivalent(&d, &cs[j], &cs[i])?;
            }
        }
    }
    verdict(ok, format!("classes {classes:?} equal raw counts; invariant and inequivalence agree on {pairs} ordered pairs (n up to 6)"))
}

fn euler_bookkeeping() -> Result<Verdict> {
    let p = dodecahedron();
    let f2 = p.neighbors(0)[0];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ok = true;
    let mut tested = Vec::new();
    for n in [3usize, 5, 7] {
        let d = build_disk(&DiskSpec::new(p.clone(), 0, f2, n)?)?;
        let slots = 4 * d.num_cuts();
        let sigmas: Vec<Involution> = if n < 7 {
            Involution::all(slots)
        } else {
            let mut pick: Vec<Involution> = Involution::all(slots);
            pick.shuffle(&mut rng);
            pick.truncate(3000);
            pick.push(Involution::identity(slots));
            pick
        };
        let mut count = 0;
        for s in &sigmas {
            let Ok(c) = closed_surface_variant(&d, s) else { continue };
            if !check_injectivity_hypotheses(&d, &c) {
                continue;
            }
            count += 1;
            let chi = euler_characteristic(&c)?;
            let g = genus(&c)?;
            ok &= chi == -(n as i64) - C0 && 2 * g == n as i64 + C0 + 2;
        }
        ok &= count > 0;
        tested.push((n, count));
    }
    verdict(ok, format!("c0 = {C0}; surfaces tested per n: {tested:?}"))
}

fn graph_count_bound() -> Result<Verdict> {
    let mut ok = true;
    let mut rows = Vec::new();
    for v in 0..=4 {
        for n in 0..=3 {
            let c = count_bounded_degree_graphs(v, n)?;
            ok &= c.count as u128 <= (v as u128).pow((n * v) as u32) && c.holds;
            rows.push(c.count);
        }
    }
    verdict(ok, format!("{} (|V|, n) cases, largest count {}", rows.len(), rows.iter().max().unwrap()))
}

fn quasi_isometry_suite() -> Result<Verdict> {
    let (k, c) = (1.05, 1.05);
    let q = thresholds(k, c)?;
    let min_len = q.u().floor() as i64 + 1;
    let mut ok = thresholds(2.0, 1.0)?.u() == 336.0;
    for (k, c) in [(1.0, 1.0), (2.0, 2.0), (1.5, 3.0), (k, c)] {
        let t = thresholds(k, c)?;
        ok &= t.k_prime() == k && t.c_prime() == 3.0 * k * c && t.s() == k * c;
    }
    let (mut witnesses, mut non_iso_found) = (0, 0);
    for case in rigidity_suite(20, min_len, 7)? {
        let found = search_quasi_isometry(&case.g1, &case.g2, k, c, 2)?;
        if case.isomorphic {
            if let Some(w) = &found {
                let targets = case.g2.sample_net(2)?;
                ok &= verify_map(&case.g1, &case.g2, w, k, c, &targets)?;
                witnesses += 1;
            }
        } else {
            non_iso_found += found.is_some() as usize;
        }
    }
    ok &= witnesses == 20 && non_iso_found == 0;
    verdict(ok, format!("u = {:.4}, edges >= {min_len}; {witnesses}/20 isomorphic pairs with witnesses, {non_iso_found}/20 non-isomorphic pairs with witnesses", q.u()))
}

fn bounds_report() -> Result<Verdict> {
    const GOLDEN_C_OF_P: usize = 30;
    let p = dodecahedron();
    let runs: Vec<usize> = (0..2).map(|_| c_of_p(&p)).collect::<Result<_>>()?;
    let c2 = 8 * runs[0] + 1;
    verdict(runs.iter().all(|&c| c == GOLDEN_C_OF_P) && c2 == 241, format!("c(P) = {} on both runs, c2 = {c2}", runs[0]))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Verdict>); 11] = [
        ("graph-cover census", graph_cover_census),
        ("sigma round trip", sigma_round_trip),
        ("E2 identification", e2_identification),
        ("dodecahedron subsets", dodecahedron_subsets),
        ("convexity preservation", convexity_preservation),
        ("coxeter oracle", coxeter_oracle),
        ("surface census", surface_census),
        ("euler bookkeeping", euler_bookkeeping),
        ("graph count bound", graph_count_bound),
        ("quasi-isometry suite", quasi_isometry_suite),
        ("bounds report", bounds_report),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check().unwrap_or_else(|e| Verdict { pass: false, detail: format!("error {}: {e}", e.code()) });
        println!("{} {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += !v.pass as usize;
    }
    let summary: BTreeMap<&str, usize> = BTreeMap::from([("passed", criteria.len() - failed), ("failed", failed)]);
    println!("acceptance: {summary:?}");
    if failed > 0 {
        std::process::exit(1);
    }
}
