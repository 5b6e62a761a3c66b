//! Random structured Java snippets with independently computed expected
//! metrics. The NPath expectation comes from exhaustively enumerating the
//! entry-to-exit paths of an acyclic control-flow graph built from the
//! generator's own tree, never from the tree the library parses.
//!
//! Path model of the graph: a condition with k `&&`/`||` operators is a
//! chain of k + 1 atoms, each of the first k having a short-circuit edge to
//! the statement's join point. Loops are unrolled once (no back edge). A
//! switch fans out to every case; without a default it also has a direct
//! edge to the join. A try fans out to its body and to every catch, all of
//! which then flow through the finally block.

#![allow(dead_code)]

use inspect_core::rng::{derive, Rng};
use rand::Rng as _;

#[derive(Debug, Clone)]
pub enum Stmt {
    Simple { ops: u32 },
    Ternary { ops: u32 },
    If { ops: u32, then: Vec<Stmt> },
    IfElse { ops: u32, then: Vec<Stmt>, otherwise: Else },
    Loop { kind: Loop, ops: u32, body: Vec<Stmt> },
    Switch { cases: Vec<Vec<Stmt>>, default: Option<Vec<Stmt>> },
    Try { body: Vec<Stmt>, catches: Vec<Vec<Stmt>>, finally: Option<Vec<Stmt>> },
    Block(Vec<Stmt>),
    Synchronized(Vec<Stmt>),
}

#[derive(Debug, Clone)]
pub enum Else {
    Block(Vec<Stmt>),
    ElseIf(Box<Stmt>),
}

#[derive(Debug, Clone, Copy)]
pub enum Loop {
    While,
    DoWhile,
    For,
    ForEach,
}

/// A generated method with its expected metrics.
#[derive(Debug, Clone)]
pub struct Snippet {
    pub body: Vec<Stmt>,
    pub source: String,
    pub npath: u64,
    pub decision_points: u64,
}

impl Snippet {
    pub fn new(body: Vec<Stmt>) -> Snippet {
        let source = render_method(&body);
        let npath = enumerate_paths(&body);
        let decision_points = decisions(&body);
        Snippet { body, source, npath, decision_points }
    }

    /// `self` followed by `other` in one method body.
    pub fn then(&self, other: &Snippet) -> Snippet {
        let mut body = self.body.clone();
        body.extend(other.body.iter().cloned());
        Snippet::new(body)
    }
}

struct Gen<'a> {
    rng: &'a mut Rng,
    budget: u64,
    depth: usize,
}

impl Gen<'_> {
    fn ops(&mut self) -> u32 {
        let want = [0, 0, 0, 1, 1, 2][self.rng.random_range(0..6)];
        let ops = want.min(self.budget as u32);
        self.budget -= u64::from(ops);
        ops
    }

    /// Spends one decision point if available.
    fn take(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    fn block(&mut self, max: usize) -> Vec<Stmt> {
        let len = self.rng.random_range(0..=max);
        (0..len).map(|_| self.stmt()).collect()
    }

    fn nested(&mut self) -> Vec<Stmt> {
        self.depth += 1;
        let b = if self.depth > 4 { vec![Stmt::Simple { ops: 0 }] } else { self.block(3) };
        self.depth -= 1;
        b
    }

    fn stmt(&mut self) -> Stmt {
        let pick = self.rng.random_range(0..13);
        if (2..=10).contains(&pick) && !self.take() {
            return Stmt::Simple { ops: 0 };
        }
        match pick {
            0 | 11 | 12 => Stmt::Simple { ops: self.ops() },
            1 => {
                if self.take() {
                    Stmt::Ternary { ops: self.ops() }
                } else {
                    Stmt::Simple { ops: 0 }
                }
            }
            2 => Stmt::If { ops: self.ops(), then: self.nested() },
            3 | 4 => {
                let ops = self.ops();
                let then = self.nested();
                let otherwise = if self.rng.random_bool(0.4) && self.take() {
                    let ops2 = self.ops();
                    let inner = self.nested();
                    Else::ElseIf(Box::new(Stmt::If { ops: ops2, then: inner }))
                } else {
                    Else::Block(self.nested())
                };
                Stmt::IfElse { ops, then, otherwise }
            }
            5 => Stmt::Loop { kind: Loop::While, ops: self.ops(), body: self.nested() },
            6 => Stmt::Loop { kind: Loop::DoWhile, ops: self.ops(), body: self.nested() },
            7 => Stmt::Loop { kind: Loop::For, ops: self.ops(), body: self.nested() },
            8 => Stmt::Loop { kind: Loop::ForEach, ops: 0, body: self.nested() },
            9 => {
                // First case already paid for.
                let mut cases = vec![self.nested()];
                while self.rng.random_bool(0.5) && self.take() {
                    cases.push(self.nested());
                }
                let default = self.rng.random_bool(0.5).then(|| self.nested());
                Stmt::Switch { cases, default }
            }
            _ => {
                if self.rng.random_bool(0.2) {
                    // Refund: a block or synchronized region costs nothing.
                    self.budget += 1;
                    return if self.rng.random_bool(0.5) {
                        Stmt::Block(self.nested())
                    } else {
                        Stmt::Synchronized(self.nested())
                    };
                }
                let body = self.nested();
                let mut catches = vec![self.nested()];
                while self.rng.random_bool(0.3) && self.take() {
                    catches.push(self.nested());
                }
                let finally = self.rng.random_bool(0.4).then(|| self.nested());
                Stmt::Try { body, catches, finally }
            }
        }
    }
}

/// A snippet with at most `max_decisions` decision points and at most
/// `max_paths` paths.
pub fn generate(rng: &mut Rng, max_decisions: u64, max_paths: u64) -> Snippet {
    loop {
        let budget = rng.random_range(0..=max_decisions);
        let mut gen = Gen { rng: &mut *rng, budget, depth: 0 };
        let len = gen.rng.random_range(1..=6);
        let body: Vec<Stmt> = (0..len).map(|_| gen.stmt()).collect();
        if count_paths(&body) <= max_paths {
            return Snippet::new(body);
        }
    }
}

pub fn snippets(seed: u64, count: usize, max_decisions: u64) -> Vec<Snippet> {
    let mut rng = derive(seed, "oracle-snippets", "");
    (0..count).map(|_| generate(&mut rng, max_decisions, 100_000)).collect()
}

// ---- rendering ------------------------------------------------------------

const ATOMS: [&str; 8] = [
    "a < b",
    "ready",
    "items.isEmpty()",
    "count >= limit",
    "!done",
    "(a & mask) != 0",
    "name.equals(other)",
    "b == 0",
];

struct Writer {
    out: String,
    counter: usize,
}

impl Writer {
    fn line(&mut self, indent: usize, text: &str) {
        for _ in 0..indent {
            self.out.push_str("    ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn cond(&mut self, ops: u32) -> String {
        let mut s = String::new();
        for i in 0..=ops as usize {
            if i > 0 {
                s.push_str(if (self.counter + i).is_multiple_of(3) { " || " } else { " && " });
            }
            s.push_str(ATOMS[(self.counter + i * 5) % ATOMS.len()]);
        }
        self.counter += 1;
        s
    }

    fn stmts(&mut self, body: &[Stmt], indent: usize) {
        for s in body {
            self.stmt(s, indent);
        }
    }

    fn stmt(&mut self, s: &Stmt, indent: usize) {
        match s {
            Stmt::Simple { ops: 0 } => {
                let text = ["total += a * 2;", "log(name);", "int tmp = a - b;", "items.add(name);"]
                    [self.counter % 4];
                self.counter += 1;
                self.line(indent, text);
            }
            Stmt::Simple { ops } => {
                let c = self.cond(*ops);
                self.line(indent, &format!("flag = {c};"));
            }
            Stmt::Ternary { ops } => {
                let c = self.cond(*ops);
                self.line(indent, &format!("total = {c} ? a : b;"));
            }
            Stmt::If { ops, then } => {
                let c = self.cond(*ops);
                self.line(indent, &format!("if ({c}) {{"));
                self.stmts(then, indent + 1);
                self.line(indent, "}");
            }
            Stmt::IfElse { ops, then, otherwise } => {
                let c = self.cond(*ops);
                self.line(indent, &format!("if ({c}) {{"));
                self.stmts(then, indent + 1);
                match otherwise {
                    Else::Block(b) => {
                        self.line(indent, "} else {");
                        self.stmts(b, indent + 1);
                        self.line(indent, "}");
                    }
                    Else::ElseIf(inner) => {
                        self.out.push_str(&"    ".repeat(indent));
                        self.out.push_str("} else ");
                        let mut nested = Writer { out: String::new(), counter: self.counter };
                        nested.stmt(inner, indent);
                        self.counter = nested.counter;
                        self.out.push_str(nested.out.trim_start());
                    }
                }
            }
            Stmt::Loop { kind, ops, body } => {
                match kind {
                    Loop::While => {
                        let c = self.cond(*ops);
                        self.line(indent, &format!("while ({c}) {{"));
                    }
                    Loop::For => {
                        let c = self.cond(*ops);
                        self.line(indent, &format!("for (int i = 0; {c}; i++) {{"));
                    }
                    Loop::ForEach => self.line(indent, "for (String item : items) {"),
                    Loop::DoWhile => self.line(indent, "do {"),
                }
                self.stmts(body, indent + 1);
                if let Loop::DoWhile = kind {
                    let c = self.cond(*ops);
                    self.line(indent, &format!("}} while ({c});"));
                } else {
                    self.line(indent, "}");
                }
            }
            Stmt::Switch { cases, default } => {
                self.line(indent, "switch (mode) {");
                for (i, body) in cases.iter().enumerate() {
                    self.line(indent + 1, &format!("case {i}:"));
                    self.stmts(body, indent + 2);
                    self.line(indent + 2, "break;");
                }
                if let Some(body) = default {
                    self.line(indent + 1, "default:");
                    self.stmts(body, indent + 2);
                }
                self.line(indent, "}");
            }
            Stmt::Try { body, catches, finally } => {
                self.line(indent, "try {");
                self.stmts(body, indent + 1);
                for (i, c) in catches.iter().enumerate() {
                    self.line(indent, &format!("}} catch (IllegalStateException e{i}) {{"));
                    self.stmts(c, indent + 1);
                }
                if let Some(f) = finally {
                    self.line(indent, "} finally {");
                    self.stmts(f, indent + 1);
                }
                self.line(indent, "}");
            }
            Stmt::Block(b) => {
                self.line(indent, "{");
                self.stmts(b, indent + 1);
                self.line(indent, "}");
            }
            Stmt::Synchronized(b) => {
                self.line(indent, "synchronized (lock) {");
                self.stmts(b, indent + 1);
                self.line(indent, "}");
            }
        }
    }
}

pub fn render_method(body: &[Stmt]) -> String {
    let mut w = Writer { out: String::new(), counter: 0 };
    w.line(0, "public void probe(int a, int b, String name) {");
    w.stmts(body, 1);
    w.line(0, "}");
    w.out
}

// ---- control-flow graph -----------------------------------------------------

/// Adjacency lists; node 0 is the entry.
#[derive(Default)]
struct Cfg {
    succ: Vec<Vec<usize>>,
}

impl Cfg {
    fn node(&mut self) -> usize {
        self.succ.push(Vec::new());
        self.succ.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.succ[a].push(b);
    }

    /// Condition chain starting at `from`; returns the last atom. Every
    /// earlier atom short-circuits to `join`.
    fn condition(&mut self, from: usize, ops: u32, join: usize) -> usize {
        let mut atom = self.node();
        self.edge(from, atom);
        for _ in 0..ops {
            let next = self.node();
            self.edge(atom, next);
            self.edge(atom, join);
            atom = next;
        }
        atom
    }

    fn seq(&mut self, body: &[Stmt], mut at: usize) -> usize {
        for s in body {
            at = self.stmt(s, at);
        }
        at
    }

    fn stmt(&mut self, s: &Stmt, from: usize) -> usize {
        match s {
            Stmt::Simple { .. } => {
                let n = self.node();
                self.edge(from, n);
                n
            }
            Stmt::Ternary { ops } => {
                let join = self.node();
                let last = self.condition(from, *ops, join);
                for _ in 0..2 {
                    let arm = self.node();
                    self.edge(last, arm);
                    self.edge(arm, join);
                }
                join
            }
            Stmt::If { ops, then } | Stmt::Loop { ops, body: then, .. } => {
                let join = self.node();
                let last = self.condition(from, *ops, join);
                let entry = self.node();
                self.edge(last, entry);
                let exit = self.seq(then, entry);
                self.edge(exit, join);
                self.edge(last, join);
                join
            }
            Stmt::IfElse { ops, then, otherwise } => {
                let join = self.node();
                let last = self.condition(from, *ops, join);
                let entry = self.node();
                self.edge(last, entry);
                let exit = self.seq(then, entry);
                self.edge(exit, join);
                let entry = self.node();
                self.edge(last, entry);
                let exit = match otherwise {
                    Else::Block(b) => self.seq(b, entry),
                    Else::ElseIf(inner) => self.stmt(inner, entry),
                };
                self.edge(exit, join);
                join
            }
            Stmt::Switch { cases, default } => {
                let head = self.node();
                self.edge(from, head);
                let join = self.node();
                for body in cases.iter().chain(default) {
                    let entry = self.node();
                    self.edge(head, entry);
                    let exit = self.seq(body, entry);
                    self.edge(exit, join);
                }
                if default.is_none() {
                    self.edge(head, join);
                }
                join
            }
            Stmt::Try { body, catches, finally } => {
                let head = self.node();
                self.edge(from, head);
                let after = self.node();
                let entry = self.node();
                self.edge(head, entry);
                let exit = self.seq(body, entry);
                self.edge(exit, after);
                for c in catches {
                    let entry = self.node();
                    self.edge(head, entry);
                    let exit = self.seq(c, entry);
                    self.edge(exit, after);
                }
                match finally {
                    Some(f) => self.seq(f, after),
                    None => after,
                }
            }
            Stmt::Block(b) | Stmt::Synchronized(b) => self.seq(b, from),
        }
    }
}

fn graph(body: &[Stmt]) -> (Cfg, usize) {
    let mut g = Cfg::default();
    let entry = g.node();
    let exit = g.seq(body, entry);
    (g, exit)
}

/// Path count by dynamic programming over the DAG; used only to keep the
/// enumeration cheap.
pub fn count_paths(body: &[Stmt]) -> u64 {
    let (g, exit) = graph(body);
    // Nodes are created before their successors except join points, so
    // memoised recursion is simplest.
    fn go(g: &Cfg, n: usize, exit: usize, memo: &mut Vec<Option<u64>>) -> u64 {
        if n == exit {
            return 1;
        }
        if let Some(v) = memo[n] {
            return v;
        }
        let v = g.succ[n].iter().fold(0u64, |acc, &s| acc.saturating_add(go(g, s, exit, memo)));
        memo[n] = Some(v);
        v
    }
    let mut memo = vec![None; g.succ.len()];
    go(&g, 0, exit, &mut memo)
}

/// Walks every entry-to-exit path one by one.
pub fn enumerate_paths(body: &[Stmt]) -> u64 {
    let (g, exit) = graph(body);
    let mut paths = 0u64;
    // Explicit stack of (node, next successor index).
    let mut stack = vec![(0usize, 0usize)];
    while let Some((node, next)) = stack.last_mut() {
        if *node == exit {
            paths += 1;
            stack.pop();
            continue;
        }
        match g.succ[*node].get(*next).copied() {
            Some(s) => {
                *next += 1;
                stack.push((s, 0));
            }
            None => {
                stack.pop();
            }
        }
    }
    paths
}

/// Branching decisions visible in the generated text.
pub fn decisions(body: &[Stmt]) -> u64 {
    body.iter().map(decisions_of).sum()
}

fn decisions_of(s: &Stmt) -> u64 {
    let ops = |o: &u32| u64::from(*o);
    match s {
        Stmt::Simple { ops: o } => ops(o),
        Stmt::Ternary { ops: o } => 1 + ops(o),
        Stmt::If { ops: o, then } => 1 + ops(o) + decisions(then),
        Stmt::IfElse { ops: o, then, otherwise } => {
            let rest = match otherwise {
                Else::Block(b) => decisions(b),
                Else::ElseIf(inner) => decisions_of(inner),
            };
            1 + ops(o) + decisions(then) + rest
        }
        Stmt::Loop { ops: o, body, .. } => 1 + ops(o) + decisions(body),
        Stmt::Switch { cases, default } => {
            cases.len() as u64 + cases.iter().chain(default).map(|b| decisions(b)).sum::<u64>()
        }
        Stmt::Try { body, catches, finally } => {
            catches.len() as u64
                + decisions(body)
                + catches.iter().chain(finally).map(|b| decisions(b)).sum::<u64>()
        }
        Stmt::Block(b) | Stmt::Synchronized(b) => decisions(b),
    }
}
