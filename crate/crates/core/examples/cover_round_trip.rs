//! Builds the pointed cover for an involution, erases its labels, and reads
//! the involution back from the truncated universal cover.

use surface_census::graphcovers::{build_cover, cut_basepoint, default_radius, recover_sigma, tree_invariants, truncated_universal_cover};
use surface_census::Involution;

fn main() -> surface_census::Result<()> {
    let n = 4;
    let sigma = Involution::parse_cycles(n, "(1,2)(3,4)")?;
    let cover = build_cover(n, &sigma)?;
    println!("cover of the bouquet for σ = {sigma}: {} vertices", cover.vertices);

    let cut = cut_basepoint(&cover);
    let tree = truncated_universal_cover(&cut, default_radius(n))?.erase_labels();
    let inv = tree_invariants(&tree)?;
    println!("tree with {} nodes; {} edges in E1, {} in E2", tree.len(), inv.e1.len(), inv.e2.len());

    let back = recover_sigma(&tree)?;
    println!("recovered σ = {back} (match: {})", back == sigma);

    let mut distinct = std::collections::BTreeSet::new();
    for s in Involution::all(n) {
        let t = truncated_universal_cover(&cut_basepoint(&build_cover(n, &s)?), default_radius(n))?.erase_labels();
        distinct.insert(recover_sigma(&t)?.to_string());
    }
    println!("{} involutions on {n} points give {} distinct recovered invariants", Involution::all(n).len(), distinct.len());
    Ok(())
}
