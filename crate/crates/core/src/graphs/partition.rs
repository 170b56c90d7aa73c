//! Ordered partitions of a vertex set and equitable refinement.
//!
//! Cells are contiguous ranges of `lab` identified by their start position.
//! Every decision taken during refinement depends only on cell positions,
//! cell sizes and neighbour counts, never on vertex ids, so refining a
//! relabelled graph yields the relabelled partition and the same trace.

use std::collections::VecDeque;

use super::Graph;

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    /// position -> vertex
    pub(crate) lab: Vec<u32>,
    /// vertex -> position
    pub(crate) pos: Vec<u32>,
    /// position -> start of the cell containing it
    start: Vec<u32>,
    /// cell start -> cell length (only meaningful at start positions)
    len: Vec<u32>,
    cells: usize,
}

/// 64-bit mixing step used to fold refinement events into a trace value.
#[inline]
pub(crate) fn mix(h: u64, v: u64) -> u64 {
    let mut z = h ^ v.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Partition {
    /// Cells ordered by ascending colour value, vertices ascending within a cell.
    pub(crate) fn from_colors(colors: &[u32]) -> Partition {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0u32; n];
        for (p, &v) in lab.iter().enumerate() {
            pos[v as usize] = p as u32;
        }
        let mut start = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut cells = 0;
        let mut s = 0;
        while s < n {
            let c = colors[lab[s] as usize];
            let mut e = s;
            while e < n && colors[lab[e] as usize] == c {
                start[e] = s as u32;
                e += 1;
            }
            len[s] = (e - s) as u32;
            cells += 1;
            s = e;
        }
        Partition { lab, pos, start, len, cells }
    }

    pub(crate) fn size(&self) -> usize {
        self.lab.len()
    }

    pub(crate) fn is_discrete(&self) -> bool {
        self.cells == self.size()
    }

    /// Cell starts in order.
    pub(crate) fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0usize;
        while s < self.size() {
            out.push(s as u32);
            s += self.len[s] as usize;
        }
        out
    }

    pub(crate) fn cell(&self, start: u32) -> &[u32] {
        let s = start as usize;
        &self.lab[s..s + self.len[s] as usize]
    }

    /// Colour of every vertex: index of its cell in the ordered partition.
    pub(crate) fn cell_indices(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.size()];
        for (i, s) in self.cell_starts().into_iter().enumerate() {
            for &v in self.cell(s) {
                out[v as usize] = i as u32;
            }
        }
        out
    }

    /// First smallest non-singleton cell.
    pub(crate) fn target_cell(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        let mut s = 0usize;
        while s < self.size() {
            let l = self.len[s];
            if l > 1 && best.is_none_or(|(_, bl)| l < bl) {
                best = Some((s as u32, l));
            }
            s += l as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Splits `v` off its cell as a singleton placed first; returns the
    /// singleton's position.
    pub(crate) fn individualize(&mut self, v: u32) -> u32 {
        let p = self.pos[v as usize] as usize;
        let s = self.start[p] as usize;
        let l = self.len[s] as usize;
        debug_assert!(l > 1);
        let first = self.lab[s];
        self.lab.swap(s, p);
        self.pos[first as usize] = p as u32;
        self.pos[v as usize] = s as u32;
        self.len[s] = 1;
        self.len[s + 1] = (l - 1) as u32;
        for q in s + 1..s + l {
            self.start[q] = (s + 1) as u32;
        }
        self.cells += 1;
        s as u32
    }

    /// Refines to the coarsest equitable partition finer than the current
    /// one, assuming it is already equitable with respect to every cell not
    /// listed in `splitters`. Returns a trace value that is invariant under
    /// relabelling of the graph.
    pub(crate) fn refine(&mut self, g: &Graph, splitters: &[u32], scratch: &mut RefineScratch) -> u64 {
        let n = self.size();
        scratch.ensure(n);
        let mut trace: u64 = self.cells as u64;
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &s in splitters {
            if !scratch.in_queue[s as usize] {
                scratch.in_queue[s as usize] = true;
                queue.push_back(s);
            }
        }
        let mut splitter = Vec::new();
        let mut touched_cells: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            scratch.in_queue[w as usize] = false;
            if self.is_discrete() {
                continue;
            }
            splitter.clear();
            splitter.extend_from_slice(self.cell(w));
            let touched = &mut scratch.touched;
            touched.clear();
            for &v in &splitter {
                for &u in g.neighbors(v as usize) {
                    if scratch.count[u as usize] == 0 {
                        touched.push(u);
                    }
                    scratch.count[u as usize] += 1;
                }
            }
            touched_cells.clear();
            for &u in touched.iter() {
                let s = self.start[self.pos[u as usize] as usize];
                if !scratch.cell_mark[s as usize] {
                    scratch.cell_mark[s as usize] = true;
                    touched_cells.push(s);
                }
            }
            touched_cells.sort_unstable();
            trace = mix(trace, w as u64);
            for &c in &touched_cells {
                scratch.cell_mark[c as usize] = false;
                let l = self.len[c as usize] as usize;
                if l == 1 {
                    trace = mix(trace, (c as u64) << 32 | scratch.count[self.lab[c as usize] as usize] as u64);
                    continue;
                }
                let cs = c as usize;
                let cell = &mut self.lab[cs..cs + l];
                let first = scratch.count[cell[0] as usize];
                if cell.iter().all(|&v| scratch.count[v as usize] == first) {
                    trace = mix(trace, (c as u64) << 32 | first as u64);
                    continue;
                }
                let count = &scratch.count;
                cell.sort_by_key(|&v| (count[v as usize], v));
                // fragments of equal count, in ascending count order
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut a = cs;
                while a < cs + l {
                    let k = count[self.lab[a] as usize];
                    let mut b = a;
                    while b < cs + l && count[self.lab[b] as usize] == k {
                        b += 1;
                    }
                    frags.push((a, b - a));
                    trace = mix(trace, ((a as u64) << 40) | ((b - a) as u64) << 20 | k as u64);
                    a = b;
                }
                for &(fs, fl) in &frags {
                    self.len[fs] = fl as u32;
                    for q in fs..fs + fl {
                        self.start[q] = fs as u32;
                        self.pos[self.lab[q] as usize] = q as u32;
                    }
                }
                self.cells += frags.len() - 1;
                if scratch.in_queue[cs] {
                    for &(fs, _) in &frags[1..] {
                        scratch.in_queue[fs] = true;
                        queue.push_back(fs as u32);
                    }
                } else {
                    let largest = frags
                        .iter()
                        .enumerate()
                        .max_by_key(|&(i, &(_, fl))| (fl, std::cmp::Reverse(i)))
                        .map(|(i, _)| i)
                        .unwrap();
                    for (i, &(fs, _)) in frags.iter().enumerate() {
                        if i != largest {
                            scratch.in_queue[fs] = true;
                            queue.push_back(fs as u32);
                        }
                    }
                }
            }
            for &u in scratch.touched.iter() {
                scratch.count[u as usize] = 0;
            }
        }
        mix(trace, self.cells as u64)
    }
}

/// Reusable buffers for [`Partition::refine`].
#[derive(Default)]
pub(crate) struct RefineScratch {
    count: Vec<u32>,
    in_queue: Vec<bool>,
    cell_mark: Vec<bool>,
    touched: Vec<u32>,
}

impl RefineScratch {
    fn ensure(&mut self, n: usize) {
        if self.count.len() < n {
            self.count.resize(n, 0);
            self.in_queue.resize(n, false);
            self.cell_mark.resize(n, false);
        }
    }
}
