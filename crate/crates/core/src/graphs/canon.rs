//! Canonical labelling by individualization–refinement.
//!
//! The search tree has equitable ordered partitions as nodes; a child
//! individualizes one vertex of the target cell (first smallest
//! non-singleton cell) and refines. Leaves are discrete partitions, i.e.
//! labellings. The canonical leaf is the maximum over all leaves of
//! `(refinement traces along the path, relabelled adjacency matrix)`.
//!
//! Pruning, all of it exact:
//! * a node whose trace prefix is smaller than the best leaf's is skipped;
//! * automorphisms found from equal leaves prune children of a node that lie
//!   in one orbit of the group generated by the automorphisms fixing the
//!   node's path pointwise;
//! * when a leaf is equivalent to the first or best leaf, the search jumps
//!   back to their common ancestor, since the branch being explored is the
//!   image of one already explored.

use std::cmp::Ordering;

use super::partition::{mix, Partition, RefineScratch};
use super::{Coloring, Graph};
use crate::error::{Error, Result};

/// Default vertex cap for canonical labelling.
pub const VERTEX_CAP: usize = 4096;

/// Canonical labelling of a coloured graph.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<usize>,
    pub certificate: Certificate,
    pub stats: SearchStats,
}

/// Byte string that is equal for two coloured graphs iff they are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(Vec<u8>);

impl Certificate {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Debug for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Certificate({} bytes)", self.0.len())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub automorphisms: u64,
}

#[derive(Clone)]
struct Leaf {
    lab: Vec<u32>,
    pos: Vec<u32>,
    rows: Vec<u64>,
    path: Vec<u32>,
    traces: Vec<u64>,
}

struct Searcher<'g> {
    g: &'g Graph,
    words: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    scratch: RefineScratch,
    stats: SearchStats,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'g> Searcher<'g> {
    fn leaf_rows(&self, part: &Partition) -> Vec<u64> {
        let n = part.size();
        let mut rows = vec![0u64; n * self.words];
        for (label, &v) in part.lab.iter().enumerate() {
            let row = &mut rows[label * self.words..(label + 1) * self.words];
            for &u in self.g.neighbors(v as usize) {
                let l = part.pos[u as usize] as usize;
                row[l / 64] |= 1u64 << (l % 64);
            }
        }
        rows
    }

    /// Orbits of the subgroup generated by known automorphisms fixing `path`.
    fn stabilizer_orbits(&self, path: &[u32]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.vertex_count());
        for gamma in &self.generators {
            if path.iter().all(|&v| gamma[v as usize] == v) {
                for (v, &img) in gamma.iter().enumerate() {
                    uf.union(v as u32, img);
                }
            }
        }
        uf
    }

    /// Records the automorphism mapping `leaf` onto `onto` and returns the
    /// level to jump back to, if the automorphism maps the diverging
    /// branch of `leaf` onto that of `onto`.
    fn record(&mut self, leaf: &Leaf, onto_first: bool) -> Option<usize> {
        let onto = if onto_first { self.first.as_ref() } else { self.best.as_ref() }.unwrap();
        let gamma: Vec<u32> = (0..leaf.lab.len()).map(|v| onto.lab[leaf.pos[v] as usize]).collect();
        let k = common_prefix(&leaf.path, &onto.path);
        let maps_branch =
            k < leaf.path.len() && k < onto.path.len() && (0..=k).all(|i| gamma[leaf.path[i] as usize] == onto.path[i]);
        if gamma.iter().enumerate().any(|(v, &img)| v as u32 != img) {
            self.generators.push(gamma);
            self.stats.automorphisms += 1;
        }
        maps_branch.then_some(k)
    }

    /// Compares a trace sequence with the best leaf's traces, treating a
    /// proper prefix of the best leaf's sequence as equal.
    fn cmp_best_prefix(&self, traces: &[u64]) -> Ordering {
        match &self.best {
            None => Ordering::Equal,
            Some(b) => {
                for (i, t) in traces.iter().enumerate() {
                    match b.traces.get(i) {
                        None => return Ordering::Greater,
                        Some(bt) => match t.cmp(bt) {
                            Ordering::Equal => {}
                            other => return other,
                        },
                    }
                }
                Ordering::Equal
            }
        }
    }

    fn at_leaf(&mut self, part: &Partition, path: &[u32], traces: &[u64], eq_first: bool) -> Option<usize> {
        self.stats.leaves += 1;
        let leaf = Leaf {
            lab: part.lab.clone(),
            pos: part.pos.clone(),
            rows: self.leaf_rows(part),
            path: path.to_vec(),
            traces: traces.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first = Some(leaf.clone());
            self.best = Some(leaf);
            return None;
        };
        if eq_first && leaf.traces.len() == first.traces.len() && leaf.rows == first.rows {
            return self.record(&leaf, true);
        }
        let best = self.best.as_ref().unwrap();
        let order = self
            .cmp_best_prefix(&leaf.traces)
            .then_with(|| leaf.traces.len().cmp(&best.traces.len()))
            .then_with(|| leaf.rows.cmp(&best.rows));
        match order {
            Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            Ordering::Equal => self.record(&leaf, false),
            Ordering::Less => None,
        }
    }

    fn search(
        &mut self,
        part: &Partition,
        path: &mut Vec<u32>,
        traces: &mut Vec<u64>,
        eq_first: bool,
    ) -> Option<usize> {
        self.stats.nodes += 1;
        if part.is_discrete() {
            return self.at_leaf(part, path, traces, eq_first);
        }
        let depth = path.len();
        let target = part.target_cell().expect("non-discrete partition has a target cell");
        let mut candidates = part.cell(target).to_vec();
        candidates.sort_unstable();
        let mut done: Vec<u32> = Vec::new();
        let mut orbits: Option<(usize, UnionFind)> = None;
        for w in candidates {
            if !done.is_empty() {
                if orbits.as_ref().is_none_or(|(n, _)| *n != self.generators.len()) {
                    orbits = Some((self.generators.len(), self.stabilizer_orbits(path)));
                }
                let uf = &mut orbits.as_mut().unwrap().1;
                let rw = uf.find(w);
                if done.iter().any(|&e| uf.find(e) == rw) {
                    continue;
                }
            }
            let mut child = part.clone();
            let s = child.individualize(w);
            let trace = mix(child.refine(self.g, &[s], &mut self.scratch), depth as u64);
            let slot = traces.len();
            traces.push(trace);
            done.push(w);
            if self.cmp_best_prefix(traces) == Ordering::Less {
                traces.pop();
                continue;
            }
            let child_eq_first = eq_first && self.first.as_ref().is_none_or(|f| f.traces.get(slot) == Some(&trace));

            path.push(w);
            let jump = self.search(&child, path, traces, child_eq_first);
            path.pop();
            traces.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }
}

fn check_inputs(g: &Graph, colors: &Coloring, cap: usize) -> Result<()> {
    if g.vertex_count() > cap {
        return Err(Error::Capability(format!(
            "graph with {} vertices exceeds the canonical labelling cap of {cap}",
            g.vertex_count()
        )));
    }
    if colors.len() != g.vertex_count() {
        return Err(Error::Input(format!(
            "colouring covers {} vertices, graph has {}",
            colors.len(),
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Canonical labelling of `g` with vertex colours `colors` (vertices of
/// smaller colour value receive smaller labels).
pub fn canonical_form(g: &Graph, colors: &Coloring) -> Result<CanonicalForm> {
    canonical_form_capped(g, colors, VERTEX_CAP)
}

pub fn canonical_form_capped(g: &Graph, colors: &Coloring, cap: usize) -> Result<CanonicalForm> {
    check_inputs(g, colors, cap)?;
    let n = g.vertex_count();
    let mut searcher = Searcher {
        g,
        words: n.div_ceil(64).max(1),
        first: None,
        best: None,
        generators: Vec::new(),
        scratch: RefineScratch::default(),
        stats: SearchStats::default(),
    };

    let mut root = Partition::from_colors(colors.as_slice());
    let starts = root.cell_starts();
    let root_trace = root.refine(g, &starts, &mut searcher.scratch);
    let mut path = Vec::new();
    let mut traces = vec![root_trace];
    if n > 0 {
        searcher.search(&root, &mut path, &mut traces, true);
    }

    let mut bytes = Vec::with_capacity(8 + 4 * n + 8 * n * searcher.words);
    bytes.extend_from_slice(&(n as u64).to_le_bytes());
    let (labeling, rows) = match &searcher.best {
        Some(best) => {
            for &v in &best.lab {
                bytes.extend_from_slice(&colors.as_slice()[v as usize].to_le_bytes());
            }
            (best.pos.iter().map(|&p| p as usize).collect(), best.rows.as_slice())
        }
        None => (Vec::new(), &[][..]),
    };
    for r in rows {
        bytes.extend_from_slice(&r.to_le_bytes());
    }
    Ok(CanonicalForm { labeling, certificate: Certificate(bytes), stats: searcher.stats })
}

/// Vertex bijection between two graphs; `map[v]` is the image of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIsomorphism {
    pub map: Vec<usize>,
}

impl GraphIsomorphism {
    /// Exhaustive check that the map is a colour-preserving bijection that
    /// maps edges to edges and non-edges to non-edges.
    pub fn verify(&self, g1: &Graph, c1: &Coloring, g2: &Graph, c2: &Coloring) -> bool {
        let n = g1.vertex_count();
        if g2.vertex_count() != n || self.map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &img in &self.map {
            if img >= n || std::mem::replace(&mut hit[img], true) {
                return false;
            }
        }
        if (0..n).any(|v| c1.as_slice()[v] != c2.as_slice()[self.map[v]]) {
            return false;
        }
        if g1.edge_count() != g2.edge_count() {
            return false;
        }
        (0..n).all(|u| (u + 1..n).all(|v| g1.has_edge(u, v) == g2.has_edge(self.map[u], self.map[v])))
    }
}

/// Isomorphism between two coloured graphs, or `None` when they are not
/// isomorphic. Any returned map has passed [`GraphIsomorphism::verify`].
pub fn find_colored_isomorphism(
    g1: &Graph,
    c1: &Coloring,
    g2: &Graph,
    c2: &Coloring,
) -> Result<Option<GraphIsomorphism>> {
    check_inputs(g1, c1, VERTEX_CAP)?;
    check_inputs(g2, c2, VERTEX_CAP)?;
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let f1 = canonical_form(g1, c1)?;
    let f2 = canonical_form(g2, c2)?;
    Ok(isomorphism_from_forms(&f1, &f2).filter(|iso| iso.verify(g1, c1, g2, c2)))
}

/// Composes two canonical labellings with equal certificates.
pub fn isomorphism_from_forms(f1: &CanonicalForm, f2: &CanonicalForm) -> Option<GraphIsomorphism> {
    if f1.certificate != f2.certificate {
        return None;
    }
    let mut inverse2 = vec![0usize; f2.labeling.len()];
    for (v, &l) in f2.labeling.iter().enumerate() {
        inverse2[l] = v;
    }
    Some(GraphIsomorphism { map: f1.labeling.iter().map(|&l| inverse2[l]).collect() })
}

pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<GraphIsomorphism>> {
    let c1 = Coloring::uniform(g1.vertex_count());
    let c2 = Coloring::uniform(g2.vertex_count());
    find_colored_isomorphism(g1, &c1, g2, &c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    fn cert(g: &Graph) -> Certificate {
        canonical_form(g, &Coloring::uniform(g.vertex_count())).unwrap().certificate
    }

    fn shuffled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
        let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
        perm.shuffle(rng);
        g.permuted(&perm)
    }

    #[test]
    fn triangle_and_path_differ() {
        let triangle = cycle(3);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_ne!(cert(&triangle), cert(&path));
    }

    #[test]
    fn certificates_are_deterministic() {
        assert_eq!(cert(&petersen()), cert(&petersen()));
    }

    #[test]
    fn relabelled_copies_share_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [petersen(), cycle(12), Graph::from_edges(6, [(0, 1), (2, 3)]).unwrap()] {
            let c = cert(&g);
            for _ in 0..20 {
                let h = shuffled(&g, &mut rng);
                assert_eq!(cert(&h), c);
                let iso = find_isomorphism(&g, &h).unwrap().expect("isomorphic");
                let u = Coloring::uniform(g.vertex_count());
                assert!(iso.verify(&g, &u, &h, &u));
            }
        }
    }

    #[test]
    fn distinguishes_cospectral_style_pairs() {
        // C6 versus two disjoint triangles: both 2-regular on 6 vertices
        let c6 = cycle(6);
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_ne!(cert(&c6), cert(&two_triangles));
        assert!(find_isomorphism(&c6, &two_triangles).unwrap().is_none());
    }

    #[test]
    fn colours_are_part_of_the_certificate() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let a = Coloring::new(vec![0, 0, 1]);
        let b = Coloring::new(vec![1, 0, 0]);
        let c = Coloring::new(vec![0, 1, 0]);
        let ca = canonical_form(&g, &a).unwrap().certificate;
        assert_eq!(ca, canonical_form(&g, &b).unwrap().certificate);
        assert_ne!(ca, canonical_form(&g, &c).unwrap().certificate);
        // colour values, not only the induced partition, matter
        let shifted = Coloring::new(vec![5, 5, 6]);
        assert_ne!(ca, canonical_form(&g, &shifted).unwrap().certificate);
    }

    #[test]
    fn cap_is_enforced() {
        let g = cycle(10);
        let err = canonical_form_capped(&g, &Coloring::uniform(10), 5).unwrap_err();
        assert!(matches!(err, Error::Capability(_)));
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        assert!(find_isomorphism(&cycle(5), &cycle(6)).unwrap().is_none());
    }

    #[test]
    fn symmetric_graphs_are_cheap() {
        // hypercube Q6: 64 vertices, automorphism group of order 46080
        let n = 64;
        let edges = (0..n).flat_map(|v| (0..6).map(move |b| (v, v ^ (1 << b)))).filter(|(a, b)| a < b);
        let q6 = Graph::from_edges(n, edges).unwrap();
        let form = canonical_form(&q6, &Coloring::uniform(n)).unwrap();
        assert!(form.stats.leaves < 2000, "{:?}", form.stats);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert_eq!(cert(&shuffled(&q6, &mut rng)), form.certificate);
    }
}
