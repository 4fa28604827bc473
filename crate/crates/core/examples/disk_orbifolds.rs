//! Builds the pentagonal disk, re-glues its cut sides, checks the orbifold
//! degrees and develops the result by successive doubling.

use surface_census::surfaces::{build_disk, check_injectivity_hypotheses, develop, glue_sigma, halfspace_invariant, inequivalent, orbifold_vertex_degrees, DiskSpec};
use surface_census::Involution;

fn main() -> surface_census::Result<()> {
    let d = build_disk(&DiskSpec::dodecahedral(5)?)?;
    println!("n = 5: P̂ has {} faces; D has {} cells and {} sides; cut sides {:?}", d.hat.num_faces(), d.cells.len(), d.sides.len(), d.cuts);

    let mut complexes = Vec::new();
    for sigma in Involution::all(d.num_cuts()) {
        let c = glue_sigma(&d, &sigma)?;
        let degrees = orbifold_vertex_degrees(&c);
        println!("σ = {sigma}: {} vertices, degrees {{{}}}, hypotheses hold: {}", c.num_vertices, degrees.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","), check_injectivity_hypotheses(&d, &c));
        let dev = develop(&d, &c, 4)?;
        for s in &dev.stages {
            println!("  stage {}: {} copies, {} sides, convex = {}", s.depth, s.translates, s.sides, s.convex);
        }
        println!("  transverse walls satisfy the crossing pattern: {}", halfspace_invariant(&d, &c).satisfies_axioms(d.group()));
        complexes.push(c);
    }
    println!("identity vs (1,2) inequivalent: {}", inequivalent(&d, &complexes[0], &complexes[1])?);
    Ok(())
}
