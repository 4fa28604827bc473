//! Closed surfaces from four copies of the disk: Euler characteristic, genus
//! and the inequivalence census for odd chain lengths.

use surface_census::polyhedron::dodecahedron;
use surface_census::surfaces::{build_disk, census, closed_surface_variant, euler_characteristic, genus, CensusMode, DiskSpec, SigmaFilter};
use surface_census::Involution;

fn main() -> surface_census::Result<()> {
    for n in [3, 5] {
        let d = build_disk(&DiskSpec::dodecahedral(n)?)?;
        let c = closed_surface_variant(&d, &Involution::identity(4 * d.num_cuts()))?;
        println!("n = {n}: {} cells, χ = {}, genus {}", c.num_cells(), euler_characteristic(&c)?, genus(&c)?);
    }
    let p = dodecahedron();
    let f2 = p.neighbors(0)[0];
    let report = census(&p, 0, f2, &[3, 5], CensusMode::Closed, &SigmaFilter::All)?;
    print!("{}", report.to_csv(false)?);
    print!("{}", report.detail_text());
    Ok(())
}
