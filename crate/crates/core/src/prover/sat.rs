//! Small CDCL solver: two watched literals, first-UIP learning and
//! backjumping, no restarts. Decisions always take the smallest unassigned
//! variable with `false` first. Learned clauses are implied by the input and
//! every propagated value is forced by decisions on smaller variables, so the
//! first model found is the least one in that order.

use std::time::Instant;

/// Literal encoding: `2 * var` is positive, `2 * var + 1` negative.
pub(crate) type Lit = u32;

pub(crate) fn pos(v: u32) -> Lit {
    2 * v
}

pub(crate) fn neg(v: u32) -> Lit {
    2 * v + 1
}

fn var(l: Lit) -> usize {
    (l / 2) as usize
}

const UNSET: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Timeout;

#[derive(Debug, Default)]
pub(crate) struct Solver {
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    empty: bool,
    nvars: usize,
}

impl Solver {
    pub fn new(nvars: usize) -> Self {
        Solver {
            nvars,
            ..Solver::default()
        }
    }

    /// Adds a clause; duplicate literals are merged and tautologies dropped.
    pub fn add(&mut self, mut lits: Vec<Lit>) {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] / 2 == w[1] / 2) {
            return;
        }
        debug_assert!(lits.iter().all(|&l| var(l) < self.nvars));
        match lits.len() {
            0 => self.empty = true,
            1 => self.units.push(lits[0]),
            _ => self.clauses.push(lits),
        }
    }

    pub fn solve(self, deadline: Instant) -> Result<Option<Vec<bool>>, Timeout> {
        if self.empty {
            return Ok(None);
        }
        let n = self.nvars;
        let mut st = State {
            value: vec![UNSET; n],
            level: vec![0; n],
            reason: vec![None; n],
            seen: vec![false; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            head: 0,
            watches: vec![Vec::new(); 2 * n],
            clauses: self.clauses,
        };
        for (ci, c) in st.clauses.iter().enumerate() {
            st.watches[c[0] as usize].push(ci);
            st.watches[c[1] as usize].push(ci);
        }
        for &u in &self.units {
            if !st.enqueue(u, None) {
                return Ok(None);
            }
        }
        let mut next = 0usize;
        let mut ticks = 0u32;
        loop {
            ticks = ticks.wrapping_add(1);
            if ticks % 1024 == 0 && Instant::now() >= deadline {
                return Err(Timeout);
            }
            if let Some(conflict) = st.propagate() {
                if st.trail_lim.is_empty() {
                    return Ok(None);
                }
                let (learned, back) = st.analyze(conflict);
                next = next.min(st.backjump(back));
                st.learn(learned);
            } else {
                while next < n && st.value[next] != UNSET {
                    next += 1;
                }
                if next == n {
                    return Ok(Some(st.value.iter().map(|&v| v == 1).collect()));
                }
                st.trail_lim.push(st.trail.len());
                st.enqueue(neg(next as u32), None);
            }
        }
    }
}

struct State {
    value: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    /// Trail length at the start of each decision level.
    trail_lim: Vec<usize>,
    head: usize,
    watches: Vec<Vec<usize>>,
    clauses: Vec<Vec<Lit>>,
}

impl State {
    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[var(l)] {
            UNSET => UNSET,
            v => v ^ (l as u8 & 1),
        }
    }

    /// Returns false if `l` is already false.
    fn enqueue(&mut self, l: Lit, reason: Option<usize>) -> bool {
        match self.lit_value(l) {
            1 => true,
            0 => false,
            _ => {
                let v = var(l);
                self.value[v] = 1 ^ (l as u8 & 1);
                self.level[v] = self.trail_lim.len();
                self.reason[v] = reason;
                self.trail.push(l);
                true
            }
        }
    }

    /// Undoes every level above `level`; returns the smallest variable freed.
    fn backjump(&mut self, level: usize) -> usize {
        let mark = self.trail_lim[level];
        self.trail_lim.truncate(level);
        let mut least = usize::MAX;
        for l in self.trail.drain(mark..) {
            let v = var(l);
            self.value[v] = UNSET;
            self.reason[v] = None;
            least = least.min(v);
        }
        self.head = mark;
        least
    }

    /// First-UIP clause for `conflict` (asserting literal first, a literal of
    /// the backjump level second) and the level to return to.
    fn analyze(&mut self, mut conflict: usize) -> (Vec<Lit>, usize) {
        let current = self.trail_lim.len();
        let mut learned: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut implied: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            for &q in &self.clauses[conflict] {
                let v = var(q);
                if Some(q) == implied || self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                if self.level[v] == current {
                    pending += 1;
                } else {
                    learned.push(q);
                }
            }
            let l = loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break self.trail[idx];
                }
            };
            self.seen[var(l)] = false;
            pending -= 1;
            if pending == 0 {
                learned[0] = l ^ 1;
                break;
            }
            implied = Some(l);
            conflict = self.reason[var(l)].expect("implied literal has a reason");
        }
        for &q in &learned[1..] {
            self.seen[var(q)] = false;
        }
        let mut back = 0;
        if let Some(k) = (1..learned.len()).max_by_key(|&k| self.level[var(learned[k])]) {
            learned.swap(1, k);
            back = self.level[var(learned[1])];
        }
        (learned, back)
    }

    fn learn(&mut self, learned: Vec<Lit>) {
        let asserting = learned[0];
        if learned.len() == 1 {
            self.enqueue(asserting, None);
            return;
        }
        let ci = self.clauses.len();
        self.watches[learned[0] as usize].push(ci);
        self.watches[learned[1] as usize].push(ci);
        self.clauses.push(learned);
        self.enqueue(asserting, Some(ci));
    }

    /// Unit propagation; returns a falsified clause on conflict.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let falsified = self.trail[self.head] ^ 1;
            self.head += 1;
            let mut watching = std::mem::take(&mut self.watches[falsified as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < watching.len() {
                let ci = watching[i];
                let c = &mut self.clauses[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                let first = c[0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                let c = &self.clauses[ci];
                if let Some(k) = (2..c.len()).find(|&k| self.lit_value(c[k]) != 0) {
                    let c = &mut self.clauses[ci];
                    c.swap(1, k);
                    self.watches[c[1] as usize].push(ci);
                    watching.swap_remove(i);
                    continue;
                }
                i += 1;
                if !self.enqueue(first, Some(ci)) {
                    conflict = Some(ci);
                    break;
                }
            }
            self.watches[falsified as usize] = watching;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }
}
