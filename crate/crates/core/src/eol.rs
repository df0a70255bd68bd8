//! END-OF-THE-LINE instances and a path-following solver.
//!
//! A vertex set `{0,1}^n` with successor `S` and predecessor `P`. There is an edge
//! `x -> y` when `S(x) = y` and `P(y) = x`; `0^n` starts a line. A solution is a vertex
//! with `P(S(x)) != x` (an end) or `S(P(x)) != x != 0^n` (another start).

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub const MAX_BITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EolInstance {
    n: u32,
    succ: Vec<u32>,
    pred: Vec<u32>,
}

impl EolInstance {
    /// Instance from explicit tables; both must have `2^n` entries inside `[0, 2^n)`.
    pub fn new(n: u32, succ: Vec<u32>, pred: Vec<u32>) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::Unsupported(format!(
                "bit width {n} outside [1, {MAX_BITS}]"
            )));
        }
        let size = 1usize << n;
        if succ.len() != size || pred.len() != size {
            return Err(Error::MalformedInstance(format!(
                "tables must have {size} entries"
            )));
        }
        if succ.iter().chain(&pred).any(|&v| v as usize >= size) {
            return Err(Error::MalformedInstance(
                "table entry outside the vertex set".into(),
            ));
        }
        if pred[0] != 0 || succ[0] == 0 {
            return Err(Error::MalformedInstance("need P(0) = 0 != S(0)".into()));
        }
        Ok(Self { n, succ, pred })
    }

    /// The single line `0 -> 1 -> ... -> len`; every other vertex is isolated.
    pub fn line(n: u32, len: u32) -> Result<Self> {
        let size = 1u64 << n.min(MAX_BITS);
        if len == 0 || u64::from(len) >= size {
            return Err(Error::Precondition(format!(
                "line length {len} must lie in [1, 2^n)"
            )));
        }
        let order: Vec<u32> = (0..=len).collect();
        Self::from_structure(n, &order, &[])
    }

    fn from_structure(n: u32, line: &[u32], cycles: &[Vec<u32>]) -> Result<Self> {
        let size = 1usize << n;
        let mut succ: Vec<u32> = (0..size as u32).collect();
        let mut pred = succ.clone();
        for w in line.windows(2) {
            succ[w[0] as usize] = w[1];
            pred[w[1] as usize] = w[0];
        }
        for c in cycles.iter().filter(|c| c.len() > 1) {
            for (i, &x) in c.iter().enumerate() {
                let y = c[(i + 1) % c.len()];
                succ[x as usize] = y;
                pred[y as usize] = x;
            }
        }
        Self::new(n, succ, pred)
    }

    /// One line out of `0^n` through a random subset of vertices, the rest split into
    /// random cycles (length-one cycles are isolated vertices).
    pub fn random(n: u32, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::Unsupported(format!(
                "bit width {n} outside [1, {MAX_BITS}]"
            )));
        }
        let mut rng = rng::seeded(seed);
        let mut rest: Vec<u32> = (1..1u32 << n).collect();
        rest.shuffle(&mut rng);
        let len = rng.random_range(1..=rest.len());
        let mut line = vec![0];
        line.extend_from_slice(&rest[..len]);
        let mut cycles = Vec::new();
        let mut tail = &rest[len..];
        while !tail.is_empty() {
            let c = rng.random_range(1..=tail.len());
            cycles.push(tail[..c].to_vec());
            tail = &tail[c..];
        }
        Self::from_structure(n, &line, &cycles)
    }

    pub fn bits(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn s(&self, x: u32) -> u32 {
        self.succ[x as usize]
    }

    pub fn p(&self, x: u32) -> u32 {
        self.pred[x as usize]
    }

    /// Whether `x` is a solution, evaluated directly from `S` and `P`.
    pub fn is_solution(&self, x: u32) -> bool {
        (x as usize) < self.size() && (self.p(self.s(x)) != x || (self.s(self.p(x)) != x && x != 0))
    }
}

/// Follow edges from `0^n` until the line ends and return its last vertex.
pub fn end_of_line_solve(inst: &EolInstance) -> Result<u32> {
    let mut seen = vec![false; inst.size()];
    let mut x = 0u32;
    seen[0] = true;
    loop {
        let y = inst.s(x);
        if inst.p(y) != x {
            return Ok(x);
        }
        // unreachable while P is a function, kept against hand-built tables
        if seen[y as usize] {
            return Err(Error::MalformedInstance(format!(
                "vertex {y} reached twice while following the line"
            )));
        }
        seen[y as usize] = true;
        x = y;
    }
}
