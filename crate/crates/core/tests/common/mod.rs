//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use surface_census::polyhedron::Polyhedron;

pub type Mat = Vec<i64>;
pub const N: usize = 12;

/// Integer Tits representation: adjacent faces are orthogonal, the rest are parallel.
pub struct Tits {
    pub gens: Vec<Mat>,
    pub bilinear: Vec<Vec<i64>>,
}

impl Tits {
    pub fn new(p: &Polyhedron) -> Self {
        let bilinear: Vec<Vec<i64>> = (0..N)
            .map(|s| (0..N).map(|t| if s == t { 1 } else if p.adjacent(s, t) { 0 } else { -1 }).collect())
            .collect();
        let gens = (0..N)
            .map(|s| {
                let mut m = vec![0; N * N];
                for v in 0..N {
                    // Column v is the image of basis vector e_v.
                    for r in 0..N {
                        m[r * N + v] = (r == v) as i64;
                    }
                    m[s * N + v] -= 2 * bilinear[s][v];
                }
                m
            })
            .collect();
        Tits { gens, bilinear }
    }

    pub fn identity() -> Mat {
        (0..N * N).map(|i| (i / N == i % N) as i64).collect()
    }

    pub fn mul(a: &Mat, b: &Mat) -> Mat {
        let mut c = vec![0; N * N];
        for i in 0..N {
            for k in 0..N {
                let x = a[i * N + k];
                if x != 0 {
                    for j in 0..N {
                        c[i * N + j] += x * b[k * N + j];
                    }
                }
            }
        }
        c
    }

    pub fn of(&self, w: &[u16]) -> Mat {
        w.iter().fold(Self::identity(), |m, &s| Self::mul(&m, &self.gens[s as usize]))
    }

    pub fn apply(m: &Mat, v: &[i64]) -> Vec<i64> {
        (0..N).map(|r| (0..N).map(|c| m[r * N + c] * v[c]).sum()).collect()
    }

    /// BFS distances of all elements within radius `r`.
    pub fn ball(&self, r: usize) -> HashMap<Mat, usize> {
        let mut dist = HashMap::from([(Self::identity(), 0)]);
        let mut q = VecDeque::from([Self::identity()]);
        while let Some(m) = q.pop_front() {
            let d = dist[&m];
            if d == r {
                continue;
            }
            for g in &self.gens {
                let x = Self::mul(&m, g);
                if !dist.contains_key(&x) {
                    dist.insert(x.clone(), d + 1);
                    q.push_back(x);
                }
            }
        }
        dist
    }
}
