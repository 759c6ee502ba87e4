//! Boykov–Kolmogorov augmenting trees, kept as a reference for the preflow solver.

use std::collections::VecDeque;

use super::{Graph, NONE};

const TERMINAL: u32 = u32::MAX - 1;
const ORPHAN: u32 = u32::MAX - 2;
const INF_DIST: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tree {
    Free,
    Source,
    Sink,
}

struct State {
    tree: Vec<Tree>,
    parent: Vec<u32>,
    ts: Vec<u64>,
    dist: Vec<u32>,
    queued: Vec<bool>,
    active: VecDeque<u32>,
    orphans: VecDeque<u32>,
    time: u64,
}

impl Graph {
    /// Maximum flow value; leaves the residual graph in place.
    pub fn max_flow(&mut self) -> i64 {
        let n = self.node_count();
        let mut st = State {
            tree: vec![Tree::Free; n],
            parent: vec![NONE; n],
            ts: vec![0; n],
            dist: vec![0; n],
            queued: vec![false; n],
            active: VecDeque::new(),
            orphans: VecDeque::new(),
            time: 0,
        };
        for i in 0..n {
            if self.tr_cap[i] != 0 {
                st.tree[i] = if self.tr_cap[i] > 0 { Tree::Source } else { Tree::Sink };
                st.parent[i] = TERMINAL;
                st.dist[i] = 1;
                st.queued[i] = true;
                st.active.push_back(i as u32);
            }
        }
        let mut flow = self.flow_offset;
        let mut current: Option<usize> = None;
        loop {
            let i = match current.filter(|&i| st.parent[i] != NONE) {
                Some(i) => i,
                None => match self.next_active(&mut st) {
                    Some(i) => i,
                    None => break,
                },
            };
            let bridge = self.grow(&mut st, i);
            st.time += 1;
            match bridge {
                Some(a) => {
                    current = Some(i);
                    flow += self.augment(&mut st, a);
                    self.adopt(&mut st);
                }
                None => current = None,
            }
        }
        flow
    }

    fn next_active(&self, st: &mut State) -> Option<usize> {
        while let Some(i) = st.active.pop_front() {
            let i = i as usize;
            st.queued[i] = false;
            if st.parent[i] != NONE {
                return Some(i);
            }
        }
        None
    }

    fn activate(st: &mut State, j: usize) {
        if !st.queued[j] {
            st.queued[j] = true;
            st.active.push_back(j as u32);
        }
    }

    /// Grows the tree of `i`; returns an arc from the source tree to the sink tree.
    fn grow(&self, st: &mut State, i: usize) -> Option<usize> {
        let source = st.tree[i] == Tree::Source;
        for a in self.arcs(i) {
            let residual = if source { self.rcap[a] } else { self.rcap[self.sister[a] as usize] };
            if residual == 0 {
                continue;
            }
            let j = self.head[a] as usize;
            if st.tree[j] == Tree::Free {
                st.tree[j] = st.tree[i];
                st.parent[j] = self.sister[a];
                st.ts[j] = st.ts[i];
                st.dist[j] = st.dist[i] + 1;
                Self::activate(st, j);
            } else if st.tree[j] != st.tree[i] {
                return Some(if source { a } else { self.sister[a] as usize });
            } else if st.ts[j] <= st.ts[i] && st.dist[j] > st.dist[i] {
                st.parent[j] = self.sister[a];
                st.ts[j] = st.ts[i];
                st.dist[j] = st.dist[i] + 1;
            }
        }
        None
    }

    fn tail(&self, a: usize) -> usize {
        self.head[self.sister[a] as usize] as usize
    }

    fn augment(&mut self, st: &mut State, bridge: usize) -> i64 {
        let mut f = self.rcap[bridge];
        let mut x = self.tail(bridge);
        while st.parent[x] != TERMINAL {
            let a = st.parent[x] as usize;
            f = f.min(self.rcap[self.sister[a] as usize]);
            x = self.head[a] as usize;
        }
        f = f.min(self.tr_cap[x]);
        let mut y = self.head[bridge] as usize;
        while st.parent[y] != TERMINAL {
            let a = st.parent[y] as usize;
            f = f.min(self.rcap[a]);
            y = self.head[a] as usize;
        }
        f = f.min(-self.tr_cap[y]);

        self.rcap[bridge] -= f;
        self.rcap[self.sister[bridge] as usize] += f;
        let mut x = self.tail(bridge);
        while st.parent[x] != TERMINAL {
            let a = st.parent[x] as usize;
            let s = self.sister[a] as usize;
            self.rcap[a] += f;
            self.rcap[s] -= f;
            if self.rcap[s] == 0 {
                st.parent[x] = ORPHAN;
                st.orphans.push_back(x as u32);
            }
            x = self.head[a] as usize;
        }
        self.tr_cap[x] -= f;
        if self.tr_cap[x] == 0 {
            st.parent[x] = ORPHAN;
            st.orphans.push_back(x as u32);
        }
        let mut y = self.head[bridge] as usize;
        while st.parent[y] != TERMINAL {
            let a = st.parent[y] as usize;
            self.rcap[self.sister[a] as usize] += f;
            self.rcap[a] -= f;
            if self.rcap[a] == 0 {
                st.parent[y] = ORPHAN;
                st.orphans.push_back(y as u32);
            }
            y = self.head[a] as usize;
        }
        self.tr_cap[y] += f;
        if self.tr_cap[y] == 0 {
            st.parent[y] = ORPHAN;
            st.orphans.push_back(y as u32);
        }
        f
    }

    fn adopt(&self, st: &mut State) {
        while let Some(i) = st.orphans.pop_front() {
            self.adopt_one(st, i as usize);
        }
    }

    fn adopt_one(&self, st: &mut State, i: usize) {
        let source = st.tree[i] == Tree::Source;
        // residual of the arc from a candidate parent down to i
        let feeds = |a: usize| if source { self.rcap[self.sister[a] as usize] > 0 } else { self.rcap[a] > 0 };
        let mut best: Option<(usize, u32)> = None;
        for a in self.arcs(i) {
            if !feeds(a) {
                continue;
            }
            let j = self.head[a] as usize;
            if st.tree[j] != st.tree[i] || st.parent[j] == NONE {
                continue;
            }
            let mut d: u32 = 0;
            let mut k = j;
            loop {
                if st.ts[k] == st.time {
                    d = d.saturating_add(st.dist[k]);
                    break;
                }
                let pa = st.parent[k];
                d += 1;
                if pa == TERMINAL {
                    st.ts[k] = st.time;
                    st.dist[k] = 1;
                    break;
                }
                if pa == ORPHAN || pa == NONE {
                    d = INF_DIST;
                    break;
                }
                k = self.head[pa as usize] as usize;
            }
            if d == INF_DIST {
                continue;
            }
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((a, d));
            }
            let mut k = j;
            let mut dd = d;
            while st.ts[k] != st.time {
                st.ts[k] = st.time;
                st.dist[k] = dd;
                dd -= 1;
                k = self.head[st.parent[k] as usize] as usize;
            }
        }
        match best {
            Some((a, d)) => {
                st.parent[i] = a as u32;
                st.ts[i] = st.time;
                st.dist[i] = d + 1;
            }
            None => {
                for a in self.arcs(i) {
                    let j = self.head[a] as usize;
                    if st.tree[j] != st.tree[i] {
                        continue;
                    }
                    if feeds(a) {
                        Self::activate(st, j);
                    }
                    let pj = st.parent[j];
                    if pj != TERMINAL && pj != ORPHAN && pj != NONE && self.head[pj as usize] as usize == i {
                        st.parent[j] = ORPHAN;
                        st.orphans.push_back(j as u32);
                    }
                }
                st.tree[i] = Tree::Free;
                st.parent[i] = NONE;
            }
        }
    }
}
