//! Searches for quasi-isometries between metric graphs with long edges.

use surface_census::metricgraph::{rigidity_suite, search_quasi_isometry, thresholds};

fn main() -> surface_census::Result<()> {
    let (k, c) = (1.05, 1.05);
    let q = thresholds(k, c)?;
    println!("k = {k}, c = {c}: k' = {}, c' = {:.4}, s = {:.4}, u = {:.4}", q.k_prime(), q.c_prime(), q.s(), q.u());
    println!("u(2, 1) = {}", thresholds(2.0, 1.0)?.u());

    for case in rigidity_suite(3, 30, 7)? {
        let found = search_quasi_isometry(&case.g1, &case.g2, k, c, 2)?;
        println!("{:<24} isomorphic = {:<5} witness = {}", case.name, case.isomorphic, found.is_some());
    }
    Ok(())
}
