//! Generators of progression-free sets: seeded random maximal sets, the
//! index-order greedy set, and exhaustive branch-and-bound maxima for tiny
//! spaces.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::FieldElem;
use crate::space::{Point, Space};

/// Largest space [`exhaustive_maximum`] accepts.
pub const EXHAUSTIVE_LIMIT: u32 = 81;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Exhaustive,
    Greedy,
    RandomMaximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub seed: u64,
    /// Node budget for exhaustive search.
    pub limit: Option<u64>,
}

impl SearchConfig {
    pub fn run(&self, space: &Space) -> Result<Vec<Point>> {
        match self.mode {
            SearchMode::Exhaustive => Ok(exhaustive_maximum(space, self.limit)?.1),
            SearchMode::Greedy => greedy_maximal(space),
            SearchMode::RandomMaximal => random_maximal(space, self.seed),
        }
    }
}

/// A progression-free set under construction. `blocked[x]` counts the pairs
/// of members that would form a progression with `x`.
struct CapState<'a> {
    space: &'a Space,
    two: FieldElem,
    half: FieldElem,
    member: Vec<bool>,
    blocked: Vec<u32>,
    members: Vec<Point>,
}

impl<'a> CapState<'a> {
    fn new(space: &'a Space) -> Result<Self> {
        let field = space.field();
        if !field.is_odd() {
            return Err(Error::EvenOrder(space.q()));
        }
        let two = field.scalar_from_int(2);
        Ok(CapState {
            space,
            two,
            half: field.inv(two)?,
            member: vec![false; space.size() as usize],
            blocked: vec![0; space.size() as usize],
            members: Vec::new(),
        })
    }

    fn completions(&self, a: Point, y: Point) -> [Point; 3] {
        let s = self.space;
        [
            s.sub(s.scale(self.two, y), a),
            s.sub(s.scale(self.two, a), y),
            s.scale(self.half, s.add(a, y)),
        ]
    }

    fn is_free(&self, x: Point) -> bool {
        let i = x.index() as usize;
        !self.member[i] && self.blocked[i] == 0
    }

    fn push(&mut self, y: Point) {
        for idx in 0..self.members.len() {
            for x in self.completions(self.members[idx], y) {
                self.blocked[x.index() as usize] += 1;
            }
        }
        self.member[y.index() as usize] = true;
        self.members.push(y);
    }

    fn pop(&mut self) {
        let y = self.members.pop().expect("pop on empty state");
        self.member[y.index() as usize] = false;
        for idx in 0..self.members.len() {
            for x in self.completions(self.members[idx], y) {
                self.blocked[x.index() as usize] -= 1;
            }
        }
    }

    fn fill_in_order(&mut self, order: &[Point]) {
        for &p in order {
            if self.is_free(p) {
                self.push(p);
            }
        }
    }

    fn into_sorted(mut self) -> Vec<Point> {
        self.members.sort_unstable();
        self.members
    }
}

/// Shuffles the points with a ChaCha8 stream seeded by `seed`, then adds each
/// point that keeps the set progression-free. The result is maximal.
pub fn random_maximal(space: &Space, seed: u64) -> Result<Vec<Point>> {
    let mut state = CapState::new(space)?;
    let mut order: Vec<Point> = space.points().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    state.fill_in_order(&order);
    Ok(state.into_sorted())
}

/// Index-order greedy maximal set.
pub fn greedy_maximal(space: &Space) -> Result<Vec<Point>> {
    let mut state = CapState::new(space)?;
    let order: Vec<Point> = space.points().collect();
    state.fill_in_order(&order);
    Ok(state.into_sorted())
}

/// True iff `set` is progression-free and every other point would create a
/// progression.
pub fn is_maximal(set: &[Point], space: &Space) -> Result<bool> {
    if !crate::increment::is_progression_free(set, space)? {
        return Ok(false);
    }
    let mut state = CapState::new(space)?;
    for &p in set {
        state.push(space.check(p)?);
    }
    Ok(space.points().all(|p| !state.is_free(p)))
}

/// Maximum progression-free set by branch and bound over points in index
/// order (include before exclude), returning its size and the
/// lexicographically first maximum set.
pub fn exhaustive_maximum(space: &Space, limit: Option<u64>) -> Result<(usize, Vec<Point>)> {
    if space.size() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!(
            "exhaustive search needs q^r <= {EXHAUSTIVE_LIMIT}, got {}",
            space.size()
        )));
    }
    let mut state = CapState::new(space)?;
    let mut best = Vec::new();
    let mut nodes = 0u64;
    branch(&mut state, 0, &mut best, &mut nodes, limit)?;
    Ok((best.len(), best))
}

fn branch(
    state: &mut CapState<'_>,
    next: u32,
    best: &mut Vec<Point>,
    nodes: &mut u64,
    limit: Option<u64>,
) -> Result<()> {
    *nodes += 1;
    if limit.is_some_and(|l| *nodes > l) {
        return Err(Error::BudgetExhausted(limit.unwrap()));
    }
    let n = state.space.size();
    let mut free = (next..n).map(Point::new).filter(|&p| state.is_free(p));
    let Some(pick) = free.next() else {
        if state.members.len() > best.len() {
            *best = state.members.clone();
        }
        return Ok(());
    };
    let available = 1 + free.count();
    if state.members.len() + available <= best.len() {
        return Ok(());
    }
    state.push(pick);
    branch(state, pick.index() + 1, best, nodes, limit)?;
    state.pop();
    branch(state, pick.index() + 1, best, nodes, limit)
}
