//! Built-in CDCL solver.
//!
//! Two watched literals, first-UIP learning with non-chronological
//! backjumping and Luby restarts. Branching is either by variable activity
//! (ties to the lowest id, saved phase starting at true) or strictly by the
//! lowest unassigned id set to true. Both are deterministic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::cnf::{Assignment, CnfInstance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Branching {
    #[default]
    Activity,
    LowestIndex,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverConfig {
    pub branching: Branching,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Assignment),
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

pub fn solve(cnf: &CnfInstance, config: SolverConfig) -> SatOutcome {
    solve_with_stats(cnf, config).0
}

pub fn solve_with_stats(cnf: &CnfInstance, config: SolverConfig) -> (SatOutcome, SolveStats) {
    let mut s = Solver::new(cnf.num_vars(), config);
    for c in cnf.clauses() {
        s.add_clause(c);
    }
    let outcome = s.run();
    (outcome, s.stats)
}

type Lit = u32;
const UNDEF: u8 = 2;
const NO_REASON: u32 = u32::MAX;

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn from_dimacs(l: i32) -> Lit {
    let v = l.unsigned_abs() - 1;
    2 * v + u32::from(l < 0)
}

struct Solver {
    config: SolverConfig,
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: BinaryHeap<(u64, Reverse<u32>)>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    stats: SolveStats,
}

impl Solver {
    fn new(num_vars: usize, config: SolverConfig) -> Self {
        let mut heap = BinaryHeap::with_capacity(num_vars);
        for v in 0..num_vars {
            heap.push((0f64.to_bits(), Reverse(v as u32)));
        }
        Solver {
            config,
            num_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            assign: vec![UNDEF; num_vars],
            level: vec![0; num_vars],
            reason: vec![NO_REASON; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; num_vars],
            var_inc: 1.0,
            heap,
            phase: vec![true; num_vars],
            seen: vec![false; num_vars],
            ok: true,
            stats: SolveStats::default(),
        }
    }

    /// 1 true, 0 false, 2 unassigned.
    #[inline]
    fn value(&self, l: Lit) -> u8 {
        match self.assign[var(l)] {
            UNDEF => UNDEF,
            a => a ^ (l & 1) as u8,
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: u32) {
        let v = var(l);
        self.assign[v] = 1 ^ (l & 1) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn add_clause(&mut self, dimacs: &[i32]) {
        if !self.ok {
            return;
        }
        let mut c: Vec<Lit> = dimacs.iter().map(|&l| from_dimacs(l)).collect();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] ^ 1 == w[1]) {
            return;
        }
        match c.len() {
            0 => self.ok = false,
            1 => match self.value(c[0]) {
                UNDEF => self.enqueue(c[0], NO_REASON),
                0 => self.ok = false,
                _ => {}
            },
            _ => {
                let cref = self.clauses.len() as u32;
                self.watches[c[0] as usize].push(cref);
                self.watches[c[1] as usize].push(cref);
                self.clauses.push(c);
            }
        }
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = p ^ 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let cref = ws[i];
                i += 1;
                let clause = &mut self.clauses[cref as usize];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.assign[var(first)] != UNDEF && self.assign[var(first)] ^ (first & 1) as u8 == 1 {
                    ws[j] = cref;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = match self.assign[var(l)] {
                        UNDEF => UNDEF,
                        a => a ^ (l & 1) as u8,
                    };
                    if val != 0 {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(cref);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cref;
                j += 1;
                if self.value(first) == 0 {
                    conflict = Some(cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, cref);
                }
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
            self.rebuild_heap();
        } else if self.assign[v] == UNDEF {
            self.heap.push((self.activity[v].to_bits(), Reverse(v as u32)));
        }
    }

    fn rebuild_heap(&mut self) {
        self.heap.clear();
        for v in 0..self.num_vars {
            if self.assign[v] == UNDEF {
                self.heap.push((self.activity[v].to_bits(), Reverse(v as u32)));
            }
        }
    }

    /// First-UIP clause and backjump level.
    fn analyze(&mut self, mut cref: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let start = usize::from(p.is_some());
            let len = self.clauses[cref as usize].len();
            for k in start..len {
                let q = self.clauses[cref as usize][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[var(lit)] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            cref = self.reason[var(lit)];
        }
        learnt[0] = p.unwrap() ^ 1;
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[var(learnt[1])];
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNDEF;
            self.reason[v] = NO_REASON;
            if self.config.branching == Branching::Activity {
                self.heap.push((self.activity[v].to_bits(), Reverse(v as u32)));
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        match self.config.branching {
            Branching::LowestIndex => (0..self.num_vars)
                .find(|&v| self.assign[v] == UNDEF)
                .map(|v| 2 * v as u32),
            Branching::Activity => {
                while let Some((bits, Reverse(v))) = self.heap.pop() {
                    let v = v as usize;
                    if self.assign[v] == UNDEF && self.activity[v].to_bits() == bits {
                        return Some(2 * v as u32 + u32::from(!self.phase[v]));
                    }
                }
                // stale heap: fall back to a scan
                (0..self.num_vars)
                    .find(|&v| self.assign[v] == UNDEF)
                    .map(|v| 2 * v as u32 + u32::from(!self.phase[v]))
            }
        }
    }

    fn run(&mut self) -> SatOutcome {
        if !self.ok || self.propagate().is_some() {
            return SatOutcome::Unsat;
        }
        let mut restart_index = 0u32;
        let mut budget = 100 * luby(restart_index);
        let mut since_restart = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if self.decision_level() == 0 {
                    return SatOutcome::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = self.clauses.len() as u32;
                    self.watches[learnt[0] as usize].push(cref);
                    self.watches[learnt[1] as usize].push(cref);
                    let asserting = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(asserting, cref);
                }
                self.var_inc /= 0.95;
                if since_restart >= budget {
                    self.backtrack(0);
                    self.stats.restarts += 1;
                    restart_index += 1;
                    budget = 100 * luby(restart_index);
                    since_restart = 0;
                }
            } else {
                match self.pick_branch() {
                    None => {
                        let mut model = Assignment::new(self.num_vars);
                        for v in 0..self.num_vars {
                            model.set(v + 1, self.assign[v] == 1);
                        }
                        return SatOutcome::Sat(model);
                    }
                    Some(lit) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(lit, NO_REASON);
                    }
                }
            }
        }
    }
}

/// Luby sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}
