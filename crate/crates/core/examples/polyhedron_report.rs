//! Validates the dodecahedron, lists its face-disk census and shows that the
//! cube fails the right-angled conditions.

use surface_census::polyhedron::{c_of_p, classify_subsets, cube, dodecahedron, validate_right_angled, FaceDisk, satisfies_convexity};

fn main() -> surface_census::Result<()> {
    let p = dodecahedron();
    println!("dodecahedron: {} faces, {} edges, {} vertices", p.num_faces(), p.num_edges(), p.num_vertices());
    println!("problems: {:?}", validate_right_angled(&p).messages());

    let census = classify_subsets(&p)?;
    println!("{} subsets, {} face disks, {} with at most four corners", census.subsets, census.face_disks, census.few_corner_disks);
    println!("c(P) = {}", c_of_p(&p)?);

    let pair = [0, p.neighbors(0)[0]];
    let disk = FaceDisk::new(&p, &pair)?;
    println!("two adjacent faces: transverse faces {:?}, convex = {}", disk.transverse_faces, satisfies_convexity(&p, &disk)?);

    println!("cube: {:?}", validate_right_angled(&cube()).messages());
    Ok(())
}
