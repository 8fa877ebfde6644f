//! Goal-directed connection search (clausal tableau with reduction and
//! extension steps) under a path-length bound.

use std::collections::HashMap;
use std::time::Instant;

use crate::embedding::{ClauseSet, ClauseSource, FoLiteral};

use super::certificate::{resolvent, Binding, ProofCertificate, ProofStep};
use super::matrix::{MLit, Matrix, Subst};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DepthOutcome {
    Proved,
    /// No proof, and the bound never pruned a possible extension.
    Exhausted,
    /// No proof within the bound.
    Limited,
    Timeout,
}

#[derive(Debug, Clone, Copy)]
enum Close {
    Reduction,
    Extension(usize),
}

#[derive(Debug)]
struct ProofNode {
    clause: usize,
    offset: u32,
    entry: Option<usize>,
    closes: Vec<Option<Close>>,
}

#[derive(Debug, Clone, Copy)]
struct PathEntry {
    node: usize,
    lit: usize,
    parent: Option<usize>,
    len: usize,
}

#[derive(Debug, Clone, Copy)]
struct Goal {
    node: usize,
    lit: usize,
    path: Option<usize>,
}

enum Step {
    Done,
    Fail,
    Timeout,
}

pub(crate) struct ConnectionProver<'a> {
    cs: &'a ClauseSet,
    m: Matrix,
    /// (predicate, polarity) to the clause literals carrying it, in input order.
    index: HashMap<(u32, bool), Vec<(usize, usize)>>,
    starts: Vec<usize>,
    subst: Subst,
    nodes: Vec<ProofNode>,
    paths: Vec<PathEntry>,
    limit: usize,
    pruned: bool,
    deadline: Instant,
    ticks: u32,
}

impl<'a> ConnectionProver<'a> {
    pub fn new(cs: &'a ClauseSet, deadline: Instant) -> Self {
        let m = Matrix::new(cs);
        let mut index: HashMap<(u32, bool), Vec<(usize, usize)>> = HashMap::new();
        for (ci, c) in m.clauses.iter().enumerate() {
            for (li, l) in c.lits.iter().enumerate() {
                index.entry((l.pred, l.positive)).or_default().push((ci, li));
            }
        }
        // Positive clauses start the search; goal clauses are tried first.
        let positive: Vec<usize> = (0..m.clauses.len())
            .filter(|&i| m.clauses[i].lits.iter().all(|l| l.positive))
            .collect();
        let is_goal = |i: &usize| matches!(cs.clauses[*i].source, ClauseSource::Goal { .. });
        let starts = positive
            .iter()
            .copied()
            .filter(is_goal)
            .chain(positive.iter().copied().filter(|i| !is_goal(i)))
            .collect();
        ConnectionProver {
            cs,
            m,
            index,
            starts,
            subst: Subst::default(),
            nodes: Vec::new(),
            paths: Vec::new(),
            limit: 0,
            pruned: false,
            deadline,
            ticks: 0,
        }
    }

    fn reset(&mut self) {
        self.subst = Subst::default();
        self.nodes.clear();
        self.paths.clear();
    }

    /// One round of iterative deepening with paths of at most `limit` literals.
    pub fn search(&mut self, limit: usize) -> DepthOutcome {
        self.limit = limit;
        self.pruned = false;
        for si in 0..self.starts.len() {
            let start = self.starts[si];
            self.reset();
            let offset = self.subst.fresh(&self.m.clauses[start]);
            let n = self.m.clauses[start].lits.len();
            self.nodes.push(ProofNode {
                clause: start,
                offset,
                entry: None,
                closes: vec![None; n],
            });
            let mut goals: Vec<Goal> = (0..n)
                .rev()
                .map(|lit| Goal {
                    node: 0,
                    lit,
                    path: None,
                })
                .collect();
            match self.solve(&mut goals) {
                Step::Done => return DepthOutcome::Proved,
                Step::Timeout => return DepthOutcome::Timeout,
                Step::Fail => {}
            }
        }
        self.reset();
        if self.pruned {
            DepthOutcome::Limited
        } else {
            DepthOutcome::Exhausted
        }
    }

    fn lit(&self, node: usize, lit: usize) -> (&MLit, u32) {
        let n = &self.nodes[node];
        (&self.m.clauses[n.clause].lits[lit], n.offset)
    }

    fn path_entries(&self, mut at: Option<usize>) -> Vec<PathEntry> {
        let mut out = Vec::new();
        while let Some(i) = at {
            out.push(self.paths[i]);
            at = self.paths[i].parent;
        }
        out
    }

    fn timed_out(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        self.ticks % 256 == 0 && Instant::now() >= self.deadline
    }

    fn solve(&mut self, goals: &mut Vec<Goal>) -> Step {
        let Some(goal) = goals.pop() else {
            return Step::Done;
        };
        if self.timed_out() {
            goals.push(goal);
            return Step::Timeout;
        }
        let (lit, off) = self.lit(goal.node, goal.lit);
        let (positive, pred, args) = (lit.positive, lit.pred, lit.args.clone());
        let path = self.path_entries(goal.path);

        // Regularity: no literal may repeat on its own path.
        for p in &path {
            let (pl, po) = self.lit(p.node, p.lit);
            if pl.positive == positive
                && pl.pred == pred
                && pl.args.iter().zip(&args).all(|(&a, &b)| {
                    self.subst.identical(&self.m, (a, po), (b, off))
                })
            {
                goals.push(goal);
                return Step::Fail;
            }
        }

        for p in &path {
            let (pl, po) = self.lit(p.node, p.lit);
            if pl.positive == positive || pl.pred != pred {
                continue;
            }
            let pargs = pl.args.clone();
            let mark = self.subst.mark();
            if self.subst.unify_args(&self.m, &pargs, po, &args, off) {
                self.nodes[goal.node].closes[goal.lit] = Some(Close::Reduction);
                match self.solve(goals) {
                    Step::Fail => {}
                    done => return done,
                }
            }
            self.subst.undo(mark);
        }

        let depth = goal.path.map_or(0, |p| self.paths[p].len);
        let candidates = self.index.get(&(pred, !positive)).cloned().unwrap_or_default();
        if depth >= self.limit {
            self.pruned |= !candidates.is_empty();
        } else {
            for (ci, cl) in candidates {
                let mark = self.subst.mark();
                let (node_mark, path_mark) = (self.nodes.len(), self.paths.len());
                let offset = self.subst.fresh(&self.m.clauses[ci]);
                let other = self.m.clauses[ci].lits[cl].args.clone();
                if self.subst.unify_args(&self.m, &args, off, &other, offset) {
                    let n = self.m.clauses[ci].lits.len();
                    let child = self.nodes.len();
                    self.nodes.push(ProofNode {
                        clause: ci,
                        offset,
                        entry: Some(cl),
                        closes: vec![None; n],
                    });
                    self.nodes[goal.node].closes[goal.lit] = Some(Close::Extension(child));
                    self.paths.push(PathEntry {
                        node: goal.node,
                        lit: goal.lit,
                        parent: goal.path,
                        len: depth + 1,
                    });
                    let path = Some(self.paths.len() - 1);
                    let before = goals.len();
                    goals.extend((0..n).rev().filter(|&i| i != cl).map(|lit| Goal {
                        node: child,
                        lit,
                        path,
                    }));
                    match self.solve(goals) {
                        Step::Fail => {}
                        done => return done,
                    }
                    goals.truncate(before);
                }
                self.subst.undo(mark);
                self.nodes.truncate(node_mark);
                self.paths.truncate(path_mark);
            }
        }
        goals.push(goal);
        Step::Fail
    }

    /// Resolution refutation read off the closed tableau from the last
    /// successful `search`.
    pub fn certificate(&self) -> ProofCertificate {
        let mut steps = Vec::new();
        let (_, root) = self.derive(0, &mut steps);
        debug_assert!(root.is_empty(), "tableau conversion left {root:?}");
        ProofCertificate { steps }
    }

    fn instance(&self, node: usize) -> Vec<FoLiteral> {
        let n = &self.nodes[node];
        self.m.clauses[n.clause]
            .lits
            .iter()
            .map(|l| self.subst.to_literal(&self.m, l, n.offset))
            .collect()
    }

    /// Derives a clause for the subtree at `node` whose literals are the
    /// entry literal and complements of path literals above it.
    fn derive(&self, node: usize, steps: &mut Vec<ProofStep>) -> (usize, Vec<FoLiteral>) {
        let n = &self.nodes[node];
        let mc = &self.m.clauses[n.clause];
        let bindings = mc
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| Binding {
                var: v.clone(),
                term: self.subst.to_term(&self.m, self.var_node(n.clause, i), n.offset),
            })
            .collect();
        let lits = self.instance(node);
        steps.push(ProofStep::Instance {
            clause: n.clause,
            bindings,
            result: lits.clone(),
        });
        debug_assert_eq!(
            self.cs.clauses[n.clause].literals.len(),
            lits.len(),
            "matrix mirrors the clause set"
        );
        let mut cur = (steps.len() - 1, lits.clone());
        for (i, close) in n.closes.iter().enumerate() {
            if Some(i) == n.entry {
                continue;
            }
            let Some(Close::Extension(child)) = close else {
                continue;
            };
            let target = &lits[i];
            let (child_step, child_lits) = self.derive(*child, steps);
            let comp = target.complement();
            match (
                cur.1.iter().position(|l| l == target),
                child_lits.iter().position(|l| *l == comp),
            ) {
                (_, None) => {
                    cur = (child_step, child_lits);
                    break;
                }
                (None, Some(_)) => {}
                (Some(li), Some(ri)) => {
                    let result = resolvent(&cur.1, target, &child_lits, &comp);
                    steps.push(ProofStep::Resolve {
                        left: cur.0,
                        left_literal: li,
                        right: child_step,
                        right_literal: ri,
                        bindings: vec![],
                        result: result.clone(),
                    });
                    cur = (steps.len() - 1, result);
                }
            }
        }
        cur
    }

    /// Some node holding local variable `i` of clause `c`.
    fn var_node(&self, c: usize, i: usize) -> u32 {
        self.m.var_node(c, i)
    }
}
