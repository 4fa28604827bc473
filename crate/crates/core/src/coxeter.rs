//! The right-angled Coxeter group generated by reflections in the faces of a polyhedron.
//!
//! Generators are face ids. Two generators commute exactly when their faces
//! are adjacent; every generator is an involution. Elements are kept in
//! shortlex normal form over the face-id order.

use crate::error::{Error, Result};
use crate::polyhedron::Polyhedron;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

/// A word in the generators. Words returned by [`CoxeterGroup`] are in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u16>);

impl Word {
    /// The empty word.
    pub fn identity() -> Self {
        Word(Vec::new())
    }
    /// Number of letters.
    pub fn len(&self) -> usize {
        self.0.len()
    }
    /// True for the empty word.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    /// Letters.
    pub fn letters(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// A chamber of the developed tessellation, named by its group element.
pub type Chamber = Word;

/// Side of a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Same side as the identity chamber.
    Positive,
    /// Opposite side from the identity chamber.
    Negative,
    /// A cell lying in the wall itself.
    On,
}

/// A wall, stored by its canonical presentation: the shortest chamber adjacent
/// to it and the generator crossed from there.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Wall {
    /// Shortest chamber adjacent to the wall.
    pub chamber: Word,
    /// Face crossed from that chamber.
    pub generator: u16,
}

/// A 2-cell of the tessellation: face `face` of chamber `chamber`.
///
/// The same geometric cell is also face `face` of `chamber · s_face`; the
/// canonical presentation keeps the shorter of the two chambers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    /// Chamber containing the cell.
    pub chamber: Word,
    /// Face of the fundamental polyhedron.
    pub face: u16,
}

const BALL_GUARD: usize = 5;

/// The group `Γ(P)` of a polyhedron.
#[derive(Debug)]
pub struct CoxeterGroup {
    commute: Vec<Vec<bool>>,
    balls: Mutex<HashMap<usize, Arc<Vec<Word>>>>,
}

impl Clone for CoxeterGroup {
    fn clone(&self) -> Self {
        CoxeterGroup { commute: self.commute.clone(), balls: Mutex::new(HashMap::new()) }
    }
}

impl CoxeterGroup {
    /// The group of `p`: faces are generators, adjacent faces commute.
    pub fn new(p: &Polyhedron) -> Result<Self> {
        if !p.is_well_formed() {
            return Err(Error::Structural("polyhedron incidence is inconsistent".into()));
        }
        let n = p.num_faces();
        let commute = (0..n).map(|s| (0..n).map(|t| s != t && p.adjacent(s, t)).collect()).collect();
        Ok(CoxeterGroup { commute, balls: Mutex::new(HashMap::new()) })
    }

    /// Builds the group from an explicit commutation table (symmetric, false on the diagonal).
    pub fn from_commutation(commute: Vec<Vec<bool>>) -> Result<Self> {
        let n = commute.len();
        for s in 0..n {
            if commute[s].len() != n || commute[s][s] {
                return Err(Error::InvalidInput("commutation table must be square with a false diagonal".into()));
            }
            for t in 0..n {
                if commute[s][t] != commute[t][s] {
                    return Err(Error::InvalidInput("commutation table must be symmetric".into()));
                }
            }
        }
        Ok(CoxeterGroup { commute, balls: Mutex::new(HashMap::new()) })
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.commute.len()
    }

    /// Whether distinct generators `s` and `t` commute.
    pub fn commutes(&self, s: u16, t: u16) -> bool {
        self.commute[s as usize][t as usize]
    }

    fn check(&self, letters: &[u16]) -> Result<()> {
        match letters.iter().find(|&&s| s as usize >= self.rank()) {
            Some(s) => Err(Error::InvalidInput(format!("generator {s} out of range 0..{}", self.rank()))),
            None => Ok(()),
        }
    }

    /// Multiplies a reduced word on the right by `s`, keeping it reduced.
    fn push_reduced(&self, w: &mut Vec<u16>, s: u16) {
        for i in (0..w.len()).rev() {
            let t = w[i];
            if t == s {
                w.remove(i);
                return;
            }
            if !self.commutes(s, t) {
                break;
            }
        }
        w.push(s);
    }

    /// Shortlex-least rearrangement of a reduced word under commutations.
    fn lex_least(&self, mut w: Vec<u16>) -> Vec<u16> {
        let mut out = Vec::with_capacity(w.len());
        while !w.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..w.len() {
                let movable = w[..i].iter().all(|&t| self.commutes(t, w[i]));
                if movable && best.is_none_or(|b| w[i] < w[b]) {
                    best = Some(i);
                }
            }
            let i = best.expect("the first letter is always movable");
            out.push(w.remove(i));
        }
        out
    }

    /// Shortlex normal form of an arbitrary word.
    pub fn normal_form(&self, letters: &[u16]) -> Result<Word> {
        self.check(letters)?;
        Ok(self.nf(letters))
    }

    fn nf(&self, letters: &[u16]) -> Word {
        let mut w = Vec::with_capacity(letters.len());
        for &s in letters {
            self.push_reduced(&mut w, s);
        }
        Word(self.lex_least(w))
    }

    /// Length of the normal form.
    pub fn word_length(&self, letters: &[u16]) -> Result<usize> {
        Ok(self.normal_form(letters)?.len())
    }

    /// Product `a · b` in normal form.
    pub fn mul(&self, a: &Word, b: &Word) -> Word {
        let mut w = a.0.clone();
        for &s in &b.0 {
            self.push_reduced(&mut w, s);
        }
        Word(self.lex_least(w))
    }

    /// Product `a · s` in normal form.
    pub fn mul_gen(&self, a: &Word, s: u16) -> Word {
        let mut w = a.0.clone();
        self.push_reduced(&mut w, s);
        Word(self.lex_least(w))
    }

    /// Product `s · a` in normal form.
    pub fn gen_mul(&self, s: u16, a: &Word) -> Word {
        let mut w = Vec::with_capacity(a.len() + 1);
        for &t in std::iter::once(&s).chain(a.0.iter()) {
            self.push_reduced(&mut w, t);
        }
        Word(self.lex_least(w))
    }

    /// Inverse in normal form.
    pub fn inverse(&self, a: &Word) -> Word {
        let rev: Vec<u16> = a.0.iter().rev().copied().collect();
        Word(self.lex_least(rev))
    }

    /// Product of a list of elements.
    pub fn product(&self, parts: &[&Word]) -> Word {
        let mut w = Vec::new();
        for p in parts {
            for &s in &p.0 {
                self.push_reduced(&mut w, s);
            }
        }
        Word(self.lex_least(w))
    }

    /// Conjugate `g · a · g⁻¹`.
    pub fn conjugate(&self, g: &Word, a: &Word) -> Word {
        let gi = self.inverse(g);
        self.product(&[g, a, &gi])
    }

    /// Whether `s` is a right descent of the reduced word `w` (`ℓ(w s) < ℓ(w)`).
    pub fn is_right_descent(&self, w: &Word, s: u16) -> bool {
        for &t in w.0.iter().rev() {
            if t == s {
                return true;
            }
            if !self.commutes(s, t) {
                return false;
            }
        }
        false
    }

    /// The reflection `x · s · x⁻¹` across face `s` of chamber `x`.
    pub fn reflection(&self, x: &Word, s: u16) -> Word {
        let xs = self.mul_gen(x, s);
        let xi = self.inverse(x);
        self.mul(&xs, &xi)
    }

    /// The wall containing face `s` of chamber `x`, in canonical presentation.
    pub fn wall(&self, x: &Word, s: u16) -> Wall {
        let mut w = x.0.clone();
        loop {
            let mut stepped = false;
            for i in (0..w.len()).rev() {
                let t = w[i];
                let tail_ok = w[i + 1..].iter().all(|&u| self.commutes(u, t));
                if tail_ok && (t == s || self.commutes(t, s)) {
                    w.remove(i);
                    stepped = true;
                    break;
                }
            }
            if !stepped {
                break;
            }
        }
        Wall { chamber: Word(self.lex_least(w)), generator: s }
    }

    /// The reflection element of a wall.
    pub fn wall_reflection(&self, wall: &Wall) -> Word {
        self.reflection(&wall.chamber, wall.generator)
    }

    /// Side of a chamber relative to a wall, decided by whether the reflection shortens it.
    pub fn wall_side(&self, wall: &Wall, ch: &Chamber) -> Side {
        let r = self.wall_reflection(wall);
        self.side_of_reflection(&r, ch)
    }

    fn side_of_reflection(&self, r: &Word, ch: &Chamber) -> Side {
        if self.mul(r, ch).len() < ch.len() {
            Side::Negative
        } else {
            Side::Positive
        }
    }

    /// Canonical presentation of the cell `(chamber, face)`.
    pub fn cell(&self, chamber: &Word, face: u16) -> Cell {
        let other = self.mul_gen(chamber, face);
        let chamber = if other < *chamber { other } else { chamber.clone() };
        Cell { chamber, face }
    }

    /// Side of a cell relative to a wall.
    pub fn cell_side(&self, wall: &Wall, cell: &Cell) -> Side {
        if self.wall(&cell.chamber, cell.face) == *wall {
            return Side::On;
        }
        self.wall_side(wall, &cell.chamber)
    }

    /// Walls crossed by the normal-form gallery from chamber `a` to chamber `b`.
    pub fn walls_between(&self, a: &Word, b: &Word) -> Vec<Wall> {
        let ai = self.inverse(a);
        let step = self.mul(&ai, b);
        let mut cur = a.clone();
        let mut out = Vec::with_capacity(step.len());
        for &s in &step.0 {
            out.push(self.wall(&cur, s));
            cur = self.mul_gen(&cur, s);
        }
        out
    }

    /// Number of walls with every chamber of `a` strictly on one side and every chamber of `b` strictly on the other.
    pub fn d_p(&self, a: &[Chamber], b: &[Chamber]) -> Result<usize> {
        let ca: Vec<Cell> = a.iter().map(|x| Cell { chamber: x.clone(), face: u16::MAX }).collect();
        let cb: Vec<Cell> = b.iter().map(|x| Cell { chamber: x.clone(), face: u16::MAX }).collect();
        self.d_p_cells(&ca, &cb)
    }

    /// [`Self::d_p`] for sets of cells; a cell lying in a wall is on neither side of it.
    /// A cell with face `u16::MAX` stands for a bare chamber.
    pub fn d_p_cells(&self, a: &[Cell], b: &[Cell]) -> Result<usize> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidInput("d_P needs nonempty sets".into()));
        }
        let mut candidates = BTreeSet::new();
        for x in a {
            for y in b {
                candidates.extend(self.walls_between(&x.chamber, &y.chamber));
            }
        }
        let side = |w: &Wall, c: &Cell| {
            if c.face == u16::MAX {
                self.wall_side(w, &c.chamber)
            } else {
                self.cell_side(w, c)
            }
        };
        let mut count = 0;
        for w in &candidates {
            let sa = side(w, &a[0]);
            if sa == Side::On || a.iter().any(|c| side(w, c) != sa) {
                continue;
            }
            if b.iter().all(|c| {
                let s = side(w, c);
                s != Side::On && s != sa
            }) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// All elements of length at most `r`, sorted in shortlex order. Memoized.
    pub fn cayley_ball(&self, r: usize) -> Result<Arc<Vec<Word>>> {
        if r > BALL_GUARD {
            return Err(Error::Resource(format!("Cayley ball radius {r} exceeds the guard of {BALL_GUARD}")));
        }
        if let Some(b) = self.balls.lock().expect("cache lock").get(&r) {
            return Ok(b.clone());
        }
        let mut seen: BTreeSet<Word> = BTreeSet::from([Word::identity()]);
        let mut frontier = vec![Word::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..self.rank() as u16 {
                    if self.is_right_descent(w, s) {
                        continue;
                    }
                    let x = self.mul_gen(w, s);
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
            frontier = next;
        }
        let ball = Arc::new(seen.into_iter().collect::<Vec<_>>());
        self.balls.lock().expect("cache lock").insert(r, ball.clone());
        Ok(ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::dodecahedron;

    fn group() -> CoxeterGroup {
        CoxeterGroup::new(&dodecahedron()).unwrap()
    }

    #[test]
    fn involution_and_commutation() {
        let g = group();
        assert!(g.normal_form(&[3, 3]).unwrap().is_empty());
        let p = dodecahedron();
        let t = p.neighbors(0)[0] as u16;
        assert_eq!(g.normal_form(&[0, t, 0]).unwrap(), Word(vec![t]));
        assert_eq!(g.word_length(&[0, 0, 5]).unwrap(), 1);
        assert!(g.normal_form(&[12]).is_err());
    }

    #[test]
    fn small_balls() {
        let g = group();
        assert_eq!(g.cayley_ball(0).unwrap().len(), 1);
        assert_eq!(g.cayley_ball(1).unwrap().len(), 13);
        assert_eq!(g.cayley_ball(2).unwrap().len(), 1 + 12 + 132 - 30);
        assert!(g.cayley_ball(6).is_err());
    }

    #[test]
    fn one_crossing() {
        let g = group();
        let s = Word(vec![4]);
        let w = g.wall(&Word::identity(), 4);
        assert_eq!(g.wall_side(&w, &Word::identity()), Side::Positive);
        assert_eq!(g.wall_side(&w, &s), Side::Negative);
        assert_eq!(g.d_p(&[Word::identity()], &[s.clone()]).unwrap(), 1);
        assert_eq!(g.d_p(&[s.clone()], &[s]).unwrap(), 0);
    }
}
