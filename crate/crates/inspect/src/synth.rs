//! Seeded generator of plausible Java methods.
//!
//! Every method draws targets for its structure count, nesting depth,
//! operator vocabulary and variable pool, so a few thousand methods cover
//! every class of every task. Types are not checked; the text only has to
//! lex and parse like Java.

use std::collections::BTreeSet;

use inspect_core::lexer::{tokenize, TokenKind};
use inspect_core::rng::{derive, Rng};
use inspect_core::taskgen::MethodSample;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng as _;

const VERBS: &[&str] = &[
    "load", "parse", "build", "compute", "update", "render", "check", "find", "apply", "merge", "resolve", "handle",
    "process", "format", "collect", "validate", "convert", "create", "write", "read", "send", "fetch", "scan",
    "split", "join", "filter", "sort", "encode", "decode", "register", "notify", "refresh", "evaluate", "normalize",
    "dispatch", "emit", "schedule", "flush", "reset", "commit", "verify", "extract", "prepare", "store", "lookup",
];
const NOUNS: &[&str] = &[
    "Config", "Entry", "Token", "Buffer", "Record", "Node", "Value", "Item", "Range", "Path", "Message", "Event",
    "Session", "Request", "Response", "Header", "Field", "Column", "Row", "Table", "Slot", "Cache", "Queue", "Batch",
    "Frame", "Segment", "Chunk", "Block", "Tree", "Graph", "Edge", "Vertex", "Key", "Label", "Score", "Limit",
    "Offset", "Count", "Total", "Result",
];
const ADJECTIVES: &[&str] = &[
    "raw", "next", "prev", "first", "last", "current", "total", "local", "temp", "max", "min", "old", "fresh",
    "base", "inner", "outer", "left", "right", "start", "end", "pending", "cached", "parsed", "active", "initial",
];
const CLASS_PREFIXES: &[&str] = &[
    "Json", "Xml", "Http", "File", "Lazy", "Default", "Simple", "Async", "Local", "Remote", "Shared", "Mutable",
    "Immutable", "Sorted", "Linked", "Hash", "Buffered", "Cached", "Indexed", "Weighted", "Bounded", "Concurrent",
    "Virtual", "Composite",
];
const TLDS: &[&str] = &["com", "org", "io", "net", "dev"];
const ORGS: &[&str] = &[
    "acme", "example", "nimbus", "orbit", "quartz", "helix", "lumen", "cobalt", "summit", "harbor", "atlas",
    "falcon", "granite", "meridian", "pioneer", "spruce", "tundra", "vector", "zephyr", "willow",
];
const MODULES: &[&str] = &[
    "core", "util", "io", "net", "data", "model", "service", "cache", "parse", "render", "config", "store", "auth",
    "event", "graph", "index", "text", "time", "math", "sched",
];
const RECEIVER_METHODS: &[&str] = &["add", "remove", "put", "append", "accept", "offer", "push", "update", "mark", "clear"];
const PREDICATES: &[&str] = &["isEmpty", "hasNext", "isValid", "isReady", "isClosed", "contains", "matches"];
const EXCEPTIONS: &[&str] = &[
    "IllegalStateException",
    "IllegalArgumentException",
    "IOException",
    "RuntimeException",
    "UnsupportedOperationException",
];
const PRIMS: &[&str] = &["int", "long", "short", "byte", "char", "float", "double", "boolean"];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];
const BINARY_OPS: &[&str] = &["+", "-", "*", "/", "%", "&", "|", "^", "<<", ">>", ">>>"];
const RELATIONAL_OPS: &[&str] = &["==", "!=", "<", ">", "<=", ">="];
const LOGICAL_OPS: &[&str] = &["&&", "||"];
const UNARY_OPS: &[&str] = &["!", "~", "++", "--"];

fn all_ops() -> Vec<&'static str> {
    [ASSIGN_OPS, BINARY_OPS, RELATIONAL_OPS, LOGICAL_OPS, UNARY_OPS].concat()
}

fn camel(a: &str, b: &str) -> String {
    format!("{a}{b}")
}

fn lower_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_ascii_lowercase().to_string() + c.as_str(),
        None => String::new(),
    }
}

#[derive(Debug, Clone)]
enum Stmt {
    Line(String),
    Block { head: String, bodies: Vec<(String, Vec<Stmt>)>, tail: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    If,
    IfElse,
    While,
    DoWhile,
    For,
    ForEach,
    Switch,
    TryCatch,
    TryFinally,
    TryCatchFinally,
}

struct Gen {
    rng: Rng,
    ops: BTreeSet<&'static str>,
    vars: Vec<String>,
    loop_depth: usize,
}

impl Gen {
    fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        items.choose(&mut self.rng).expect("non-empty list")
    }

    fn has(&self, op: &str) -> bool {
        self.ops.contains(op)
    }

    fn allowed(&self, from: &[&'static str]) -> Vec<&'static str> {
        from.iter().copied().filter(|o| self.ops.contains(o)).collect()
    }

    fn method_name(&mut self) -> String {
        camel(self.pick(VERBS), self.pick(NOUNS))
    }

    fn class_name(&mut self) -> String {
        camel(self.pick(CLASS_PREFIXES), self.pick(NOUNS))
    }

    fn var(&mut self) -> Option<String> {
        if self.vars.is_empty() {
            None
        } else {
            let i = self.rng.random_range(0..self.vars.len());
            Some(self.vars[i].clone())
        }
    }

    fn literal(&mut self) -> String {
        match self.rng.random_range(0..6) {
            0 | 1 => self.rng.random_range(0..100).to_string(),
            2 => format!("\"{}\"", lower_first(self.pick(NOUNS))),
            3 => format!("'{}'", (b'a' + self.rng.random_range(0..26u8)) as char),
            4 => format!("{}.{}", self.rng.random_range(0..10), self.rng.random_range(1..10)),
            _ => self.pick(&["true", "false", "null"]).to_string(),
        }
    }

    fn atom(&mut self) -> String {
        match self.rng.random_range(0..5) {
            0 | 1 => self.var().unwrap_or_else(|| self.literal()),
            2 => self.literal(),
            3 => {
                let name = self.method_name();
                let arg = self.var().unwrap_or_else(|| self.literal());
                format!("{name}({arg})")
            }
            _ => {
                let name = self.method_name();
                format!("{name}()")
            }
        }
    }

    fn expr(&mut self) -> String {
        let binary = self.allowed(BINARY_OPS);
        let mut e = self.atom();
        if !binary.is_empty() && self.chance(0.5) {
            let op = *self.pick(&binary);
            let rhs = self.atom();
            e = format!("{e} {op} {rhs}");
        }
        if self.has("~") && self.chance(0.1) {
            e = format!("~{}", self.atom());
        }
        e
    }

    fn predicate(&mut self) -> String {
        let relational = self.allowed(RELATIONAL_OPS);
        let base = match self.rng.random_range(0..4) {
            0 if !relational.is_empty() => {
                let op = *self.pick(&relational);
                let (a, b) = (self.atom(), self.atom());
                format!("{a} {op} {b}")
            }
            1 => match self.var() {
                Some(v) => {
                    let p = self.pick(PREDICATES);
                    format!("{v}.{p}()")
                }
                None => format!("{}()", self.method_name()),
            },
            2 if self.chance(0.15) => match self.var() {
                Some(v) => format!("{v} instanceof {}", self.class_name()),
                None => format!("{}()", self.method_name()),
            },
            _ => {
                let name = self.method_name();
                let arg = self.var().unwrap_or_default();
                format!("{name}({arg})")
            }
        };
        if self.has("!") && self.chance(0.2) {
            format!("!{base}")
        } else {
            base
        }
    }

    fn condition(&mut self) -> String {
        let logical = self.allowed(LOGICAL_OPS);
        let mut c = self.predicate();
        if !logical.is_empty() {
            while self.chance(0.4) {
                let op = *self.pick(&logical);
                let rhs = self.predicate();
                c = format!("{c} {op} {rhs}");
            }
        }
        c
    }

    fn simple_statement(&mut self) -> String {
        let assign = self.allowed(ASSIGN_OPS);
        let incdec = self.allowed(&["++", "--"]);
        loop {
            match self.rng.random_range(0..10) {
                0..=2 => {
                    let name = self.method_name();
                    let args: Vec<String> = (0..self.rng.random_range(0..3)).map(|_| self.expr()).collect();
                    return format!("{name}({});", args.join(", "));
                }
                3 | 4 => {
                    if let Some(v) = self.var() {
                        let m = self.pick(RECEIVER_METHODS);
                        let arg = self.expr();
                        return format!("{v}.{m}({arg});");
                    }
                }
                5 | 6 if !assign.is_empty() => {
                    if let Some(v) = self.var() {
                        let op = *self.pick(&assign);
                        let e = self.expr();
                        return format!("{v} {op} {e};");
                    }
                }
                7 if !incdec.is_empty() => {
                    if let Some(v) = self.var() {
                        let op = *self.pick(&incdec);
                        return format!("{v}{op};");
                    }
                }
                8 => {
                    if self.chance(0.3) {
                        let name = self.method_name();
                        let inner = self.method_name();
                        return format!("{name}(() -> {inner}());");
                    }
                    if self.chance(0.15) {
                        let name = self.method_name();
                        let target = self.method_name();
                        return format!("{name}(this::{target});");
                    }
                }
                9 => {
                    if self.chance(0.15) {
                        let c = self.condition();
                        return format!("assert {c};");
                    }
                    if self.chance(0.1) {
                        let (a, b) = (self.atom(), self.atom());
                        let c = self.predicate();
                        let name = self.method_name();
                        return format!("{name}({c} ? {a} : {b});");
                    }
                }
                _ => {}
            }
        }
    }

    fn leaves(&mut self, out: &mut Vec<Stmt>) {
        for _ in 0..self.rng.random_range(0..3) {
            let s = self.simple_statement();
            out.push(Stmt::Line(s));
        }
    }

    fn pick_kind(&mut self) -> Kind {
        let mut kinds = vec![Kind::If, Kind::If, Kind::IfElse, Kind::While, Kind::DoWhile, Kind::Switch, Kind::TryFinally];
        if self.has("=") && self.has("<") && self.has("++") && !self.vars.is_empty() {
            kinds.extend([Kind::For, Kind::For]);
        }
        if !self.vars.is_empty() {
            kinds.extend([Kind::ForEach, Kind::TryCatch, Kind::TryCatchFinally]);
        }
        *self.pick(&kinds)
    }

    /// Splits `n` structures with exact maximum depth `h` over `parts`
    /// bodies. Returns `(structures, depth)` per body.
    fn distribute(&mut self, n: usize, h: usize, parts: usize) -> Vec<(usize, usize)> {
        let mut counts = vec![0; parts];
        if h == 0 {
            return vec![(0, 0); parts];
        }
        counts[0] = h;
        for _ in h..n {
            let j = self.rng.random_range(0..parts);
            counts[j] += 1;
        }
        let mut out: Vec<(usize, usize)> = counts
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if j == 0 {
                    (c, h)
                } else if c == 0 {
                    (0, 0)
                } else {
                    (c, self.rng.random_range(1..=c.min(h)))
                }
            })
            .collect();
        out.shuffle(&mut self.rng);
        out
    }

    /// A block holding exactly `n` structures nested exactly `h` deep.
    fn block(&mut self, n: usize, h: usize) -> Vec<Stmt> {
        let mut out = Vec::new();
        if n == 0 {
            self.leaves(&mut out);
            return out;
        }
        let top = if h == 1 { n } else { self.rng.random_range(1..=n - (h - 1)) };
        let inner = self.distribute(n - top, h - 1, top);
        for (ni, hi) in inner {
            self.leaves(&mut out);
            let s = self.structure(ni, hi);
            out.push(s);
        }
        if self.chance(0.5) {
            self.leaves(&mut out);
        }
        out
    }

    fn loop_body(&mut self, n: usize, h: usize) -> Vec<Stmt> {
        self.loop_depth += 1;
        let mut body = self.block(n, h);
        if self.chance(0.15) {
            body.push(Stmt::Line(if self.chance(0.5) { "continue;" } else { "break;" }.into()));
        }
        self.loop_depth -= 1;
        body
    }

    fn structure(&mut self, n: usize, h: usize) -> Stmt {
        let kind = self.pick_kind();
        match kind {
            Kind::If | Kind::IfElse => {
                let cond = self.condition();
                let parts = if kind == Kind::If { 1 } else { 2 };
                let split = self.distribute(n, h, parts);
                let mut bodies = vec![(format!("if ({cond}) {{"), self.block(split[0].0, split[0].1))];
                if parts == 2 {
                    bodies.push(("} else {".into(), self.block(split[1].0, split[1].1)));
                }
                Stmt::Block { head: String::new(), bodies, tail: "}".into() }
            }
            Kind::While => {
                let cond = self.condition();
                let body = self.loop_body(n, h);
                Stmt::Block { head: String::new(), bodies: vec![(format!("while ({cond}) {{"), body)], tail: "}".into() }
            }
            Kind::DoWhile => {
                let body = self.loop_body(n, h);
                let cond = self.condition();
                Stmt::Block { head: String::new(), bodies: vec![("do {".into(), body)], tail: format!("}} while ({cond});") }
            }
            Kind::For => {
                let i = self.var().expect("vars checked");
                let bound = self.atom();
                let body = self.loop_body(n, h);
                Stmt::Block {
                    head: String::new(),
                    bodies: vec![(format!("for (int {i} = 0; {i} < {bound}; {i}++) {{"), body)],
                    tail: "}".into(),
                }
            }
            Kind::ForEach => {
                let v = self.var().expect("vars checked");
                let ty = self.class_name();
                let source = match self.var() {
                    Some(s) if s != v => s,
                    _ => format!("{}()", self.method_name()),
                };
                let body = self.loop_body(n, h);
                Stmt::Block { head: String::new(), bodies: vec![(format!("for ({ty} {v} : {source}) {{"), body)], tail: "}".into() }
            }
            Kind::Switch => {
                let subject = self.var().unwrap_or_else(|| format!("{}()", self.method_name()));
                let cases = self.rng.random_range(1..=3);
                let with_default = self.chance(0.6);
                let parts = cases + usize::from(with_default);
                let split = self.distribute(n, h, parts);
                let strings = self.chance(0.3);
                let mut bodies = Vec::new();
                for (j, (nj, hj)) in split.into_iter().enumerate() {
                    let label = if j == cases {
                        "default:".to_string()
                    } else if strings {
                        format!("case \"{}\":", lower_first(NOUNS[(j * 7) % NOUNS.len()]))
                    } else {
                        format!("case {j}:")
                    };
                    let mut body = self.block(nj, hj);
                    if self.chance(0.8) {
                        body.push(Stmt::Line("break;".into()));
                    }
                    bodies.push((label, body));
                }
                Stmt::Block { head: format!("switch ({subject}) {{"), bodies, tail: "}".into() }
            }
            Kind::TryCatch | Kind::TryFinally | Kind::TryCatchFinally => {
                let catches = match kind {
                    Kind::TryFinally => 0,
                    _ => self.rng.random_range(1..=2),
                };
                let finally = kind != Kind::TryCatch;
                let split = self.distribute(n, h, 1 + catches + usize::from(finally));
                let mut bodies = vec![("try {".to_string(), self.block(split[0].0, split[0].1))];
                for c in 0..catches {
                    let ex = if c == 0 { self.pick(EXCEPTIONS).to_string() } else { format!("{}Exception", self.class_name()) };
                    let e = self.var().expect("vars checked");
                    let mut body = self.block(split[1 + c].0, split[1 + c].1);
                    if self.chance(0.3) {
                        body.push(Stmt::Line(format!("throw new {}(\"{}\");", self.pick(EXCEPTIONS), lower_first(self.pick(NOUNS)))));
                    }
                    bodies.push((format!("}} catch ({ex} {e}) {{"), body));
                }
                if finally {
                    let (nf, hf) = split[1 + catches];
                    bodies.push(("} finally {".into(), self.block(nf, hf)));
                }
                Stmt::Block { head: String::new(), bodies, tail: "}".into() }
            }
        }
    }
}

fn render(stmts: &[Stmt], indent: usize, out: &mut String) {
    let pad = "    ".repeat(indent);
    for s in stmts {
        match s {
            Stmt::Line(l) => {
                out.push_str(&pad);
                out.push_str(l);
                out.push('\n');
            }
            Stmt::Block { head, bodies, tail } => {
                let mut inner = indent;
                if !head.is_empty() {
                    out.push_str(&pad);
                    out.push_str(head);
                    out.push('\n');
                    inner += 1;
                }
                for (open, body) in bodies {
                    out.push_str(&"    ".repeat(inner));
                    out.push_str(open);
                    out.push('\n');
                    render(body, inner + 1, out);
                }
                out.push_str(&pad);
                out.push_str(tail);
                out.push('\n');
            }
        }
    }
}

/// Statements that each use exactly one operator and no new variables.
fn operator_witness(op: &str, name: &str) -> String {
    match op {
        "!" => format!("{name}(!ready());"),
        "~" => format!("{name}(~1);"),
        "++" | "--" => format!("this.counter{op};"),
        _ if ASSIGN_OPS.contains(&op) => format!("this.counter {op} 1;"),
        _ => format!("{name}(1 {op} 2);"),
    }
}

fn trivial_accessor(rng: &mut Rng) -> String {
    let noun = *NOUNS.choose(rng).expect("nouns");
    let field = lower_first(noun);
    let ty = *["int", "long", "String", "boolean"].choose(rng).expect("types");
    match rng.random_range(0..3) {
        0 => format!("public {ty} get{noun}() {{\n    return {field};\n}}\n"),
        1 => format!("public void set{noun}({ty} {field}) {{\n    this.{field} = {field};\n}}\n"),
        _ => format!("public boolean is{noun}() {{\n    return {field};\n}}\n"),
    }
}

fn imports(rng: &mut Rng) -> Vec<String> {
    let mut out = Vec::new();
    for _ in 0..rng.random_range(0..=3) {
        let pkg = format!(
            "{}.{}.{}",
            TLDS.choose(rng).expect("tlds"),
            ORGS.choose(rng).expect("orgs"),
            MODULES.choose(rng).expect("modules")
        );
        let class = camel(CLASS_PREFIXES.choose(rng).expect("prefixes"), NOUNS.choose(rng).expect("nouns"));
        out.push(match rng.random_range(0..10) {
            0 => format!("import {pkg}.*;"),
            1 => format!("import static {pkg}.{class}.DEFAULT;"),
            _ => format!("import {pkg}.{class};"),
        });
    }
    if rng.random_bool(0.3) {
        out.push((*["import java.util.List;", "import java.util.Map;", "import java.io.IOException;"].choose(rng).expect("std")).into());
    }
    out
}

fn local_class(g: &mut Gen) -> String {
    let mods = ["private", "protected", "public", "static", "final", "volatile", "transient"];
    let mut fields = String::new();
    for _ in 0..g.rng.random_range(1..=3) {
        let m = *g.pick(&mods);
        let ty = *g.pick(PRIMS);
        let name = lower_first(g.pick(NOUNS));
        fields.push_str(&format!("        {m} {ty} {name};\n"));
    }
    let extra = match g.rng.random_range(0..3) {
        0 => "        native void poke();\n".to_string(),
        1 => "        strictfp double scale() { return 0.5; }\n".to_string(),
        _ => "        synchronized void touch() { }\n".to_string(),
    };
    let head = if g.chance(0.3) { "abstract class" } else { "class" };
    let name = g.class_name();
    let ext = if g.chance(0.4) { format!(" extends {}", g.class_name()) } else { String::new() };
    format!("    {head} {name}{ext} {{\n{fields}{extra}    }}\n")
}

/// One synthetic method with its imports.
pub fn synth_method(seed: u64, index: usize) -> MethodSample {
    let id = format!("synth-{index:05}");
    let mut rng = derive(seed, "synth", &id);
    let imports = imports(&mut rng);
    if rng.random_bool(0.03) {
        let source = trivial_accessor(&mut rng);
        return MethodSample { id, source, imports };
    }

    let structures = if rng.random_bool(0.05) { rng.random_range(10..=12) } else { rng.random_range(0..=9) };
    let depth = if structures == 0 { 0 } else { rng.random_range(1..=structures.min(4)) };
    let mut ops_all = all_ops();
    ops_all.shuffle(&mut rng);
    let op_count = if rng.random_bool(0.05) { rng.random_range(10..=13) } else { rng.random_range(0..=9) };
    let ops: BTreeSet<&'static str> = ops_all.into_iter().take(op_count).collect();
    let var_count = if rng.random_bool(0.05) { rng.random_range(10..=12) } else { rng.random_range(0..=9) };
    let mut vars = BTreeSet::new();
    while vars.len() < var_count {
        let name = if rng.random_bool(0.5) {
            camel(ADJECTIVES.choose(&mut rng).expect("adjectives"), NOUNS.choose(&mut rng).expect("nouns"))
        } else {
            lower_first(NOUNS.choose(&mut rng).expect("nouns"))
        };
        vars.insert(name);
    }
    let mut vars: Vec<String> = vars.into_iter().collect();
    vars.shuffle(&mut rng);

    let mut g = Gen { rng, ops, vars: vars.clone(), loop_depth: 0 };
    let params = g.rng.random_range(0..=vars.len().min(3));
    let type_for = |g: &mut Gen| -> String {
        match g.rng.random_range(0..4) {
            0 | 1 => g.pick(PRIMS).to_string(),
            2 => "String".into(),
            _ => g.class_name(),
        }
    };

    let mut header = String::new();
    if g.chance(0.1) {
        header.push_str("@Override\n");
    }
    let visibility = *g.pick(&["public", "public", "private", "protected", ""]);
    let mut mods: Vec<&str> = vec![visibility];
    for (m, p) in [("static", 0.2), ("final", 0.1), ("synchronized", 0.08), ("strictfp", 0.03)] {
        if g.chance(p) {
            mods.push(m);
        }
    }
    let ret = if g.chance(0.4) { "void".to_string() } else { type_for(&mut g) };
    let name = g.method_name();
    let mut param_list: Vec<String> = Vec::new();
    for (k, v) in vars[..params].iter().enumerate() {
        if k + 1 == params && g.chance(0.1) {
            param_list.push(format!("int... {v}"));
        } else {
            let ty = type_for(&mut g);
            let fin = if g.chance(0.1) { "final " } else { "" };
            param_list.push(format!("{fin}{ty} {v}"));
        }
    }
    let throws = if g.chance(0.15) { format!(" throws {}", g.pick(EXCEPTIONS)) } else { String::new() };
    let mods: Vec<&str> = mods.into_iter().filter(|m| !m.is_empty()).collect();
    let prefix = if mods.is_empty() { String::new() } else { format!("{} ", mods.join(" ")) };
    header.push_str(&format!("{prefix}{ret} {name}({}){throws} {{\n", param_list.join(", ")));

    let mut body = String::new();
    for v in &vars[params..] {
        let ty = type_for(&mut g);
        if g.has("=") {
            let e = g.expr();
            body.push_str(&format!("    {ty} {v} = {e};\n"));
        } else {
            body.push_str(&format!("    {ty} {v};\n"));
        }
    }
    if g.chance(0.08) {
        body.push_str(&local_class(&mut g));
    }
    if g.chance(0.15) {
        let class = g.class_name();
        let e = g.expr();
        body.push_str(&format!("    register(new {class}({e}));\n"));
    }
    let stmts = g.block(structures, depth);
    render(&stmts, 1, &mut body);
    if ret != "void" {
        let e = g.expr();
        body.push_str(&format!("    return {e};\n"));
    }

    // Make every drawn operator actually occur.
    let draft = format!("{header}{body}}}\n");
    let used: BTreeSet<String> = tokenize(&draft)
        .map(|t| t.into_iter().filter(|t| t.kind == TokenKind::Operator).map(|t| t.text).collect())
        .unwrap_or_default();
    let mut witnesses = String::new();
    for op in g.ops.clone() {
        if !used.contains(op) {
            let name = g.method_name();
            witnesses.push_str(&format!("    {}\n", operator_witness(op, &name)));
        }
    }
    let source = format!("{header}{witnesses}{body}}}\n");
    MethodSample { id, source, imports }
}

/// `count` synthetic methods with ids `synth-00000`, `synth-00001`, ...
pub fn synth_corpus(count: usize, seed: u64) -> Vec<MethodSample> {
    (0..count).map(|i| synth_method(seed, i)).collect()
}
