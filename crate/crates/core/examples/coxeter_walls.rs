//! Normal forms, walls and wall-crossing distance in the dodecahedral group.

use surface_census::coxeter::{CoxeterGroup, Word};
use surface_census::polyhedron::dodecahedron;

fn main() -> surface_census::Result<()> {
    let w = CoxeterGroup::new(&dodecahedron())?;
    let g = w.normal_form(&[3, 0, 3, 1, 1, 7])?;
    println!("normal form of s3 s0 s3 s1 s1 s7: {g}");
    println!("inverse: {}", w.inverse(&g));

    for r in 0..=4 {
        let ball = w.cayley_ball(r)?;
        println!("ball of radius {r}: {} elements", ball.len());
    }

    let e = Word::identity();
    let walls = w.walls_between(&e, &g);
    println!("{} walls separate e from {g}; d_P = {}", walls.len(), w.d_p(&[e], &[g.clone()])?);
    for wall in &walls {
        println!("  wall through {} across face {}", wall.chamber, wall.generator);
    }
    Ok(())
}
