//! Permutations of order at most two.
//!
//! Points are stored zero-based; cycle notation is printed one-based.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A permutation `σ` of `{0, .., m-1}` with `σ∘σ = id`. Fixed points are allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Involution {
    images: Vec<usize>,
}

impl Involution {
    /// Identity on `m` points.
    pub fn identity(m: usize) -> Self {
        Involution { images: (0..m).collect() }
    }

    /// Builds an involution from its image table, checking `σ(σ(i)) = i`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        for (i, &j) in images.iter().enumerate() {
            if j >= m {
                return Err(Error::InvalidInput(format!("image {j} of point {i} is out of range 0..{m}")));
            }
            if images[j] != i {
                return Err(Error::InvalidInput(format!("not an involution: σ({i}) = {j} but σ({j}) = {}", images[j])));
            }
        }
        Ok(Involution { images })
    }

    /// Builds an involution on `m` points from disjoint zero-based transpositions.
    pub fn from_transpositions(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut images: Vec<usize> = (0..m).collect();
        for &(a, b) in pairs {
            if a >= m || b >= m || a == b {
                return Err(Error::InvalidInput(format!("bad transposition ({a} {b}) on {m} points")));
            }
            if images[a] != a || images[b] != b {
                return Err(Error::InvalidInput(format!("transposition ({a} {b}) overlaps another")));
            }
            images[a] = b;
            images[b] = a;
        }
        Ok(Involution { images })
    }

    /// Parses one-based cycle notation such as `(1,2)(3,4)` or `(1 2)`; `()` is the identity.
    pub fn parse_cycles(m: usize, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidInput(format!("expected '(' in cycle notation {text:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::InvalidInput(format!("unclosed cycle in {text:?}")))?;
            let body = &open[..close];
            let pts: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad point {s:?} in {text:?}"))))
                .collect::<Result<_>>()?;
            match pts.as_slice() {
                [] | [_] => {}
                [a, b] if *a >= 1 && *b >= 1 => pairs.push((a - 1, b - 1)),
                _ => return Err(Error::InvalidInput(format!("cycle ({body}) is not a transposition"))),
            }
            rest = open[close + 1..].trim_start();
        }
        Self::from_transpositions(m, &pairs)
    }

    /// Number of points acted on.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    /// True when acting on zero points.
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Image table.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// True when `σ = id`.
    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// True when `σ` has no fixed points.
    pub fn is_fixed_point_free(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i != j)
    }

    /// Zero-based transpositions `(i, j)` with `i < j`, sorted.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
            .collect()
    }

    /// All involutions on `m` points in lexicographic order of image tables.
    pub fn all(m: usize) -> Vec<Involution> {
        let mut out = Vec::new();
        let mut images = vec![usize::MAX; m];
        fn rec(i: usize, images: &mut Vec<usize>, out: &mut Vec<Involution>) {
            let m = images.len();
            if i == m {
                out.push(Involution { images: images.clone() });
                return;
            }
            if images[i] != usize::MAX {
                rec(i + 1, images, out);
                return;
            }
            images[i] = i;
            rec(i + 1, images, out);
            for j in i + 1..m {
                if images[j] == usize::MAX {
                    images[i] = j;
                    images[j] = i;
                    rec(i + 1, images, out);
                    images[j] = usize::MAX;
                }
            }
            images[i] = usize::MAX;
        }
        rec(0, &mut images, &mut out);
        out.sort();
        out
    }

    /// All fixed-point-free involutions on `m` points.
    pub fn all_fixed_point_free(m: usize) -> Vec<Involution> {
        Self::all(m).into_iter().filter(|s| s.is_fixed_point_free()).collect()
    }
}

/// Number of involutions on `m` points, by the recurrence `I(m) = I(m-1) + (m-1) I(m-2)`.
pub fn involution_count(m: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for k in 2..=m as u64 {
        let c = b + (k - 1) * a;
        a = b;
        b = c;
    }
    b
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ts = self.transpositions();
        if ts.is_empty() {
            return write!(f, "()");
        }
        for (a, b) in ts {
            write!(f, "({},{})", a + 1, b + 1)?;
        }
        Ok(())
    }
}
