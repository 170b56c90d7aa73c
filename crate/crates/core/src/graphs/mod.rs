//! Minimal distance graphs, colour refinement, canonical labelling and
//! isomorphism search.

mod canon;
mod partition;

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::code::{BinaryWord, Code};
use crate::error::{input, Error, Result};

pub use canon::{
    canonical_form, canonical_form_capped, find_colored_isomorphism, find_isomorphism, isomorphism_from_forms,
    CanonicalForm, Certificate, GraphIsomorphism, SearchStats, VERTEX_CAP,
};

/// Simple undirected graph on vertices `0..n`, with sorted adjacency lists
/// and a bit matrix for constant-time edge queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    matrix: Vec<u64>,
    words: usize,
    edges: usize,
}

impl Graph {
    fn empty(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph { adj: vec![Vec::new(); n], matrix: vec![0; n * words], words, edges: 0 }
    }

    /// Builds a graph from an edge list; duplicate edges collapse, loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return input(format!("edge ({u}, {v}) outside 0..{n}"));
            }
            if u == v {
                return input(format!("loop at vertex {u}"));
            }
            if !g.has_edge(u, v) {
                g.set(u, v);
                g.set(v, u);
                g.edges += 1;
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    fn set(&mut self, u: usize, v: usize) {
        self.matrix[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[u].push(v as u32);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v as usize)).filter(|&(u, v)| u < v))
    }

    /// Relabelled copy in which vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("permutation of a simple graph")
    }
}

/// Vertex colouring; vertices with smaller colour values come first in the
/// ordered partition used by refinement and canonical labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring(Vec<u32>);

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Coloring {
        Coloring(colors)
    }

    pub fn uniform(n: usize) -> Coloring {
        Coloring(vec![0; n])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn class_count(&self) -> usize {
        let mut c = self.0.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Vertex classes in ascending colour order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut values = self.0.clone();
        values.sort_unstable();
        values.dedup();
        values.iter().map(|&c| (0..self.0.len()).filter(|&v| self.0[v] == c).collect()).collect()
    }
}

/// Coarsest equitable refinement of `initial`: vertices in one class have
/// the same number of neighbours in every class. Classes are numbered
/// `0..k` in the order of the refined ordered partition, which does not
/// depend on vertex ids.
pub fn color_refinement(g: &Graph, initial: &Coloring) -> Result<Coloring> {
    if initial.len() != g.vertex_count() {
        return input(format!("colouring covers {} vertices, graph has {}", initial.len(), g.vertex_count()));
    }
    let mut p = partition::Partition::from_colors(initial.as_slice());
    let starts = p.cell_starts();
    p.refine(g, &starts, &mut Default::default());
    Ok(Coloring(p.cell_indices()))
}

/// Minimal distance graph of a code: codewords as vertices (in the code's
/// lexicographic order), edges between codewords at distance exactly `d`.
#[derive(Clone, Debug)]
pub struct MinDistGraph {
    pub words: Vec<BinaryWord>,
    pub d: usize,
    pub graph: Graph,
}

pub fn build_mdg(c: &Code) -> Result<MinDistGraph> {
    let d = c.require_distance()?;
    let words = c.words().to_vec();
    let lists: Vec<Vec<usize>> = (0..words.len())
        .into_par_iter()
        .map(|i| (i + 1..words.len()).filter(|&j| words[i].distance_unchecked(&words[j]) == d).collect())
        .collect();
    let graph =
        Graph::from_edges(words.len(), lists.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |&j| (i, j))))?;
    Ok(MinDistGraph { words, d, graph })
}

/// DIMACS edge format: `p edge V E`, then `c v <i> <hexword>` annotations,
/// then `e u v` lines with 1-based endpoints and `u < v`.
pub fn to_dimacs(mdg: &MinDistGraph) -> String {
    let g = &mdg.graph;
    let mut out = String::new();
    writeln!(out, "c minimal distance graph, d = {}", mdg.d).unwrap();
    writeln!(out, "p edge {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (i, w) in mdg.words.iter().enumerate() {
        writeln!(out, "c v {} {}", i + 1, w.to_hex()).unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Parses DIMACS edge format, returning the graph and any `c v` annotations.
pub fn parse_dimacs(text: &str) -> Result<(Graph, Vec<Option<String>>)> {
    let perr = |line: usize, msg: String| Error::Parse { line, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut notes: Vec<Option<String>> = Vec::new();
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", "v", i, word] => {
                let (n, _) = header.ok_or_else(|| perr(no, "annotation before header".into()))?;
                let i: usize = i.parse().map_err(|_| perr(no, format!("bad vertex {i:?}")))?;
                if i == 0 || i > n {
                    return Err(perr(no, format!("vertex {i} outside 1..={n}")));
                }
                notes[i - 1] = Some(word.to_string());
            }
            ["c", ..] => {}
            ["p", "edge", v, e] => {
                if header.is_some() {
                    return Err(perr(no, "second header".into()));
                }
                let v: usize = v.parse().map_err(|_| perr(no, format!("bad vertex count {v:?}")))?;
                let e: usize = e.parse().map_err(|_| perr(no, format!("bad edge count {e:?}")))?;
                header = Some((v, e));
                notes = vec![None; v];
            }
            ["e", u, v] => {
                let (n, _) = header.ok_or_else(|| perr(no, "edge before header".into()))?;
                let u: usize = u.parse().map_err(|_| perr(no, format!("bad endpoint {u:?}")))?;
                let v: usize = v.parse().map_err(|_| perr(no, format!("bad endpoint {v:?}")))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(perr(no, format!("edge ({u}, {v}) outside 1..={n}")));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(perr(no, format!("unrecognised line {line:?}"))),
        }
    }
    let (n, e) = header.ok_or_else(|| perr(1, "missing `p edge` header".into()))?;
    let g = Graph::from_edges(n, edges).map_err(|err| perr(0, err.to_string()))?;
    if g.edge_count() != e {
        return Err(perr(0, format!("header declares {e} edges, found {}", g.edge_count())));
    }
    Ok((g, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_word_code_has_single_edge() {
        let a = BinaryWord::zero(8).unwrap();
        let b = BinaryWord::from_support(8, &[2, 5, 7]).unwrap();
        let mdg = build_mdg(&Code::new(8, [a, b]).unwrap()).unwrap();
        assert_eq!(mdg.d, 3);
        assert_eq!(mdg.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn single_word_code_has_no_mdg() {
        let c = Code::new(4, [BinaryWord::zero(4).unwrap()]).unwrap();
        assert!(build_mdg(&c).is_err());
    }

    #[test]
    fn refinement_of_regular_graph_is_trivial() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let c = color_refinement(&g, &Coloring::uniform(5)).unwrap();
        assert_eq!(c.class_count(), 1);
    }

    #[test]
    fn refinement_splits_path_endpoints() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let c = color_refinement(&g, &Coloring::uniform(3)).unwrap();
        assert_eq!(c.as_slice(), &[0, 1, 0]);
        assert_eq!(c.classes(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn refinement_is_idempotent_and_never_merges() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6)]).unwrap();
        let initial = Coloring::new(vec![0, 0, 0, 0, 1, 0, 0]);
        let once = color_refinement(&g, &initial).unwrap();
        let twice = color_refinement(&g, &once).unwrap();
        assert_eq!(once, twice);
        for v in 0..7 {
            for u in 0..7 {
                if once.as_slice()[u] == once.as_slice()[v] {
                    assert_eq!(initial.as_slice()[u], initial.as_slice()[v]);
                }
            }
        }
        // stability: equal colours see equal neighbour colour multisets
        for u in 0..7 {
            for v in 0..7 {
                if once.as_slice()[u] == once.as_slice()[v] {
                    let mut a: Vec<u32> = g.neighbors(u).iter().map(|&x| once.as_slice()[x as usize]).collect();
                    let mut b: Vec<u32> = g.neighbors(v).iter().map(|&x| once.as_slice()[x as usize]).collect();
                    a.sort();
                    b.sort();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn dimacs_round_trip() {
        let words = ["0000", "0011", "0101", "0110"].map(|s| BinaryWord::from_bit_str(s).unwrap());
        let mdg = build_mdg(&Code::new(4, words).unwrap()).unwrap();
        let text = to_dimacs(&mdg);
        assert!(text.contains("p edge 4 6\n"));
        assert!(text.contains("c v 2 3\n"));
        assert!(text.contains("e 1 2\n"));
        let (g, notes) = parse_dimacs(&text).unwrap();
        assert_eq!(g, mdg.graph);
        assert_eq!(notes[3].as_deref(), Some("6"));
    }

    #[test]
    fn dimacs_rejects_garbage() {
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("p edge 2 2\ne 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\nx\n").is_err());
    }
}
