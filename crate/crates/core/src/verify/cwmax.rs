//! Maximum constant-weight codes by clique search.
//!
//! Vertices are the weight-`w` words of length `n`, adjacent when at distance
//! at least `dmin`. The symmetric group on coordinates acts on this graph and
//! is transitive on vertices, so some maximum clique contains the first
//! vertex `v0`. Its stabiliser is transitive on the neighbours of `v0` that
//! meet `v0` in a fixed number of coordinates, so the second vertex only
//! ranges over one representative per intersection size.

use crate::code::{BinaryWord, MAX_LENGTH};
use crate::error::{input, Error, Result};

use super::binom;

/// Largest vertex count accepted by [`max_constant_weight`].
pub const CWMAX_CAP: usize = 10_000;

type Bits = Vec<u64>;

fn bit(s: &Bits, v: usize) -> bool {
    s[v / 64] >> (v % 64) & 1 == 1
}

fn clear(s: &mut Bits, v: usize) {
    s[v / 64] &= !(1 << (v % 64));
}

fn first(s: &Bits) -> Option<usize> {
    s.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_empty(s: &Bits) -> bool {
    s.iter().all(|&w| w == 0)
}

struct Clique {
    adj: Vec<Bits>,
    best: Vec<usize>,
}

impl Clique {
    /// Greedy sequential colouring of `p`; vertices in colour order with the
    /// running colour count, which bounds the clique size inside each prefix.
    fn color_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !is_empty(&uncolored) {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = first(&q) {
                clear(&mut uncolored, v);
                clear(&mut q, v);
                for (qw, aw) in q.iter_mut().zip(&self.adj[v]) {
                    *qw &= !aw;
                }
                order.push(v);
                bounds.push(color);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bits) {
        let (order, bounds) = self.color_sort(&p);
        for idx in (0..order.len()).rev() {
            if clique.len() + bounds[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            clique.push(v);
            let next = and(&p, &self.adj[v]);
            if is_empty(&next) {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            clear(&mut p, v);
        }
    }
}

fn weight_words(n: usize, w: usize) -> Vec<BinaryWord> {
    let mut out: Vec<BinaryWord> =
        super::subsets(n, w).into_iter().map(|m| BinaryWord::new(n, m).expect("subset of n bits")).collect();
    out.sort_unstable();
    out
}

/// Largest set of weight-`w` words of length `n` with pairwise distance at
/// least `dmin`, with a witness of that size.
pub fn max_constant_weight(n: usize, w: usize, dmin: usize) -> Result<(usize, Vec<BinaryWord>)> {
    if n == 0 || n > 16 || n > MAX_LENGTH {
        return input(format!("length {n} outside 1..=16"));
    }
    if w > n {
        return input(format!("weight {w} exceeds length {n}"));
    }
    let count = binom(n as u64, w as u64) as usize;
    if count > CWMAX_CAP {
        return Err(Error::Capability(format!("C({n},{w}) = {count} words exceed the cap of {CWMAX_CAP}")));
    }
    let words = weight_words(n, w);
    let m = words.len();
    let blocks = m.div_ceil(64);
    let mut adj = vec![vec![0u64; blocks]; m];
    for a in 0..m {
        for b in a + 1..m {
            if words[a].distance_unchecked(&words[b]) >= dmin {
                adj[a][b / 64] |= 1 << (b % 64);
                adj[b][a / 64] |= 1 << (a % 64);
            }
        }
    }
    let mut search = Clique { adj, best: vec![0] };
    // one representative second vertex per intersection size with v0
    let v0 = words[0];
    let mut reps: Vec<usize> = Vec::new();
    let mut seen = vec![false; w + 1];
    for u in 1..m {
        let meet = (v0.bits() & words[u].bits()).count_ones() as usize;
        if bit(&search.adj[0], u) && !seen[meet] {
            seen[meet] = true;
            reps.push(u);
        }
    }
    for u in reps {
        let p = and(&search.adj[0], &search.adj[u]);
        let mut clique = vec![0, u];
        if search.best.len() < 2 {
            search.best = clique.clone();
        }
        if !is_empty(&p) {
            search.expand(&mut clique, p);
        }
    }
    let mut witness: Vec<BinaryWord> = search.best.iter().map(|&v| words[v]).collect();
    witness.sort_unstable();
    Ok((witness.len(), witness))
}
