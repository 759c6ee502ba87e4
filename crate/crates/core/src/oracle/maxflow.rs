//! Integer max-flow / min-cut: highest-label push-relabel with global relabeling and gaps.

use std::collections::VecDeque;

const NONE: u32 = u32::MAX;

/// Graph with terminal capacities and symmetric arc pairs in compressed rows.
#[derive(Clone)]
pub struct Graph {
    first: Vec<u32>,
    head: Vec<u32>,
    sister: Vec<u32>,
    rcap: Vec<i64>,
    /// Positive: residual from the source; negative: residual to the sink.
    tr_cap: Vec<i64>,
    flow_offset: i64,
}

/// Arc list under construction.
pub struct GraphBuilder {
    n: usize,
    tr_s: Vec<i64>,
    tr_t: Vec<i64>,
    arcs: Vec<(u32, u32, i64, i64)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { n, tr_s: vec![0; n], tr_t: vec![0; n], arcs: Vec::new() }
    }

    pub fn add_terminal(&mut self, i: usize, source: i64, sink: i64) {
        self.tr_s[i] += source;
        self.tr_t[i] += sink;
    }

    /// Arc `i → j` with capacity `cap` and its reverse with `rev`.
    pub fn add_edge(&mut self, i: usize, j: usize, cap: i64, rev: i64) {
        self.arcs.push((i as u32, j as u32, cap, rev));
    }

    pub fn build(self) -> Graph {
        let n = self.n;
        let mut deg = vec![0u32; n + 1];
        for &(i, j, _, _) in &self.arcs {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        let mut first = vec![0u32; n + 1];
        for k in 0..n {
            first[k + 1] = first[k] + deg[k];
        }
        let m = first[n] as usize;
        let mut fill = first.clone();
        let mut head = vec![0u32; m];
        let mut sister = vec![0u32; m];
        let mut rcap = vec![0i64; m];
        for &(i, j, c, r) in &self.arcs {
            let a = fill[i as usize];
            fill[i as usize] += 1;
            let b = fill[j as usize];
            fill[j as usize] += 1;
            head[a as usize] = j;
            rcap[a as usize] = c;
            sister[a as usize] = b;
            head[b as usize] = i;
            rcap[b as usize] = r;
            sister[b as usize] = a;
        }
        let mut flow_offset = 0;
        let tr_cap = (0..n)
            .map(|k| {
                let (s, t) = (self.tr_s[k], self.tr_t[k]);
                flow_offset += s.min(t);
                s - t
            })
            .collect();
        Graph { first, head, sister, rcap, tr_cap, flow_offset }
    }
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.tr_cap.len()
    }

    fn arcs(&self, i: usize) -> std::ops::Range<usize> {
        self.first[i] as usize..self.first[i + 1] as usize
    }

    /// Maximum preflow by highest-label push-relabel with global relabeling and the gap
    /// heuristic; returns the flow into the sink. Excess stranded at nodes cut off from the
    /// sink is never returned, which leaves the minimum cut intact.
    pub fn max_preflow(&mut self) -> i64 {
        let n = self.node_count();
        // distances to the sink never exceed n
        let top = n as u32 + 1;
        let mut excess = vec![0i64; n];
        for (e, t) in excess.iter_mut().zip(&mut self.tr_cap) {
            if *t > 0 {
                *e = std::mem::take(t);
            }
        }
        let mut flow = self.flow_offset;
        let mut label = vec![top; n];
        let mut cur: Vec<u32> = self.first[..n].to_vec();
        let mut active: Vec<Vec<u32>> = vec![Vec::new(); n + 2];
        let mut layers = Layers::new(n);
        let mut highest;
        let relabel_period = 6 * n + self.head.len() / 2;
        let mut work = 0usize;

        macro_rules! global_relabel {
            () => {{
                self.distances_to_sink(&mut label);
                active.iter_mut().for_each(Vec::clear);
                layers.rebuild(&label, top);
                highest = 0;
                for i in 0..n {
                    cur[i] = self.first[i];
                    if excess[i] > 0 && label[i] < top {
                        active[label[i] as usize].push(i as u32);
                        highest = highest.max(label[i] as usize);
                    }
                }
            }};
        }
        global_relabel!();

        loop {
            while highest > 0 && active[highest].is_empty() {
                highest -= 1;
            }
            let Some(i) = active[highest].pop() else { break };
            let i = i as usize;
            if label[i] as usize != highest || excess[i] == 0 {
                continue;
            }
            while excess[i] > 0 {
                if label[i] == 1 && self.tr_cap[i] < 0 {
                    let d = excess[i].min(-self.tr_cap[i]);
                    self.tr_cap[i] += d;
                    excess[i] -= d;
                    flow += d;
                    continue;
                }
                let end = self.first[i + 1];
                while cur[i] < end && excess[i] > 0 {
                    let a = cur[i] as usize;
                    let j = self.head[a] as usize;
                    if self.rcap[a] > 0 && label[j] + 1 == label[i] {
                        let d = excess[i].min(self.rcap[a]);
                        self.rcap[a] -= d;
                        self.rcap[self.sister[a] as usize] += d;
                        excess[i] -= d;
                        if excess[j] == 0 {
                            active[label[j] as usize].push(j as u32);
                            highest = highest.max(label[j] as usize);
                        }
                        excess[j] += d;
                        if self.rcap[a] == 0 {
                            cur[i] += 1;
                        }
                    } else {
                        cur[i] += 1;
                    }
                }
                if excess[i] == 0 {
                    break;
                }
                let old = label[i];
                let mut d = if self.tr_cap[i] < 0 { 1 } else { top };
                for a in self.arcs(i) {
                    if self.rcap[a] > 0 {
                        d = d.min(label[self.head[a] as usize] + 1);
                    }
                }
                work += 12 + (end - self.first[i]) as usize;
                layers.remove(i, old);
                cur[i] = self.first[i];
                if layers.is_empty(old) {
                    // nothing at `old` any more: everything above it is cut off
                    layers.lift_above(old, &mut label, top);
                    label[i] = top;
                } else {
                    label[i] = d.min(top);
                    if label[i] < top {
                        layers.insert(i, label[i]);
                    }
                }
                if label[i] >= top {
                    break;
                }
            }
            if excess[i] > 0 && label[i] < top {
                active[label[i] as usize].push(i as u32);
                highest = highest.max(label[i] as usize);
            }
            if work > relabel_period {
                work = 0;
                global_relabel!();
            }
        }
        flow
    }

    /// Exact residual distances to the sink; unreachable nodes get `n + 1`.
    fn distances_to_sink(&self, label: &mut [u32]) {
        let n = self.node_count();
        let top = n as u32 + 1;
        label.iter_mut().for_each(|l| *l = top);
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (i, l) in label.iter_mut().enumerate().take(n) {
            if self.tr_cap[i] < 0 {
                *l = 1;
                queue.push_back(i);
            }
        }
        while let Some(k) = queue.pop_front() {
            for a in self.arcs(k) {
                let j = self.head[a] as usize;
                if label[j] == top && self.rcap[self.sister[a] as usize] > 0 {
                    label[j] = label[k] + 1;
                    queue.push_back(j);
                }
            }
        }
    }

    /// Nodes that cannot reach the sink in the residual graph: the largest minimum cut
    /// source side.
    pub fn maximal_source_side(&self) -> Vec<bool> {
        let n = self.node_count();
        let mut reaches = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| self.tr_cap[i] < 0).collect();
        for &i in &queue {
            reaches[i] = true;
        }
        while let Some(k) = queue.pop_front() {
            for a in self.arcs(k) {
                let j = self.head[a] as usize;
                if !reaches[j] && self.rcap[self.sister[a] as usize] > 0 {
                    reaches[j] = true;
                    queue.push_back(j);
                }
            }
        }
        reaches.into_iter().map(|r| !r).collect()
    }
}

/// Doubly linked lists of the nodes at each label below the cutoff.
struct Layers {
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    max: u32,
}

impl Layers {
    fn new(n: usize) -> Self {
        Layers { head: vec![NONE; n + 2], next: vec![NONE; n], prev: vec![NONE; n], max: 0 }
    }

    fn rebuild(&mut self, label: &[u32], top: u32) {
        self.head.iter_mut().for_each(|h| *h = NONE);
        self.max = 0;
        for (i, &l) in label.iter().enumerate() {
            if l < top {
                self.insert(i, l);
            }
        }
    }

    fn insert(&mut self, i: usize, l: u32) {
        let h = self.head[l as usize];
        self.next[i] = h;
        self.prev[i] = NONE;
        if h != NONE {
            self.prev[h as usize] = i as u32;
        }
        self.head[l as usize] = i as u32;
        self.max = self.max.max(l);
    }

    fn remove(&mut self, i: usize, l: u32) {
        let (p, nx) = (self.prev[i], self.next[i]);
        if p == NONE {
            self.head[l as usize] = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx != NONE {
            self.prev[nx as usize] = p;
        }
    }

    fn is_empty(&self, l: u32) -> bool {
        self.head[l as usize] == NONE
    }

    fn lift_above(&mut self, l: u32, label: &mut [u32], top: u32) {
        for k in (l + 1)..=self.max {
            let mut i = self.head[k as usize];
            while i != NONE {
                label[i as usize] = top;
                i = self.next[i as usize];
            }
            self.head[k as usize] = NONE;
        }
        self.max = l.saturating_sub(1);
    }
}

#[cfg(test)]
mod bk;
