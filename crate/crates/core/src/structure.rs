//! Control-structure tree over a token stream, and the method metrics built
//! on it: structure count, nesting depth, cyclomatic and NPath complexity,
//! unique operators and unique variables.
//!
//! Parsing is token-level and forgiving. Lambda bodies, anonymous classes,
//! switch expressions and array initialisers stay inside the statement that
//! contains them and are never expanded into structure nodes.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    For,
    While,
    DoWhile,
}

/// What the parenthesised governing expression of a structure contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Condition {
    /// Number of `&&` and `||` tokens.
    pub logical_ops: u32,
    /// Number of conditional-expression `?` tokens.
    pub ternaries: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCase {
    pub is_default: bool,
    pub body: Node,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Sequence(Vec<Node>),
    If {
        condition: Condition,
        then_branch: Box<Node>,
    },
    /// `else_branch` is a bare `If`/`IfElse` node for `else if` chains and a
    /// `Sequence` otherwise.
    IfElse {
        condition: Condition,
        then_branch: Box<Node>,
        else_branch: Box<Node>,
    },
    Loop {
        kind: LoopKind,
        condition: Condition,
        body: Box<Node>,
    },
    Switch {
        condition: Condition,
        cases: Vec<SwitchCase>,
    },
    Try {
        body: Box<Node>,
        catches: Vec<Node>,
        finally: Option<Box<Node>>,
    },
    Ternary {
        condition_logical_ops: u32,
    },
    /// A simple statement. `logical_ops` counts `&&`/`||` not attributed to
    /// a ternary condition.
    Statement {
        logical_ops: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("unbalanced delimiters")]
    UnbalancedDelimiters,
    #[error("unexpected token {found:?} at index {index}")]
    UnexpectedToken { index: usize, found: alloc::string::String },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("structures nested deeper than {MAX_DEPTH}")]
    TooDeep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("npath complexity exceeds u64")]
pub struct NpathOverflow;

const MAX_DEPTH: usize = 200;

impl Node {
    pub fn is_structure(&self) -> bool {
        matches!(
            self,
            Node::If { .. } | Node::IfElse { .. } | Node::Loop { .. } | Node::Switch { .. } | Node::Try { .. }
        )
    }

    /// Direct children in source order.
    pub fn children(&self) -> Vec<&Node> {
        match self {
            Node::Sequence(items) => items.iter().collect(),
            Node::If { then_branch, .. } => alloc::vec![&**then_branch],
            Node::IfElse { then_branch, else_branch, .. } => alloc::vec![&**then_branch, &**else_branch],
            Node::Loop { body, .. } => alloc::vec![&**body],
            Node::Switch { cases, .. } => cases.iter().map(|c| &c.body).collect(),
            Node::Try { body, catches, finally } => core::iter::once(&**body)
                .chain(catches.iter())
                .chain(finally.iter().map(|f| &**f))
                .collect(),
            Node::Ternary { .. } | Node::Statement { .. } => Vec::new(),
        }
    }
}

fn balanced(tokens: &[Token]) -> bool {
    let mut stack = Vec::new();
    for t in tokens {
        match t.text.as_str() {
            "(" | "[" | "{" => stack.push(t.text.as_str()),
            ")" | "]" | "}" => {
                let want = match t.text.as_str() {
                    ")" => "(",
                    "]" => "[",
                    _ => "{",
                };
                if stack.pop() != Some(want) {
                    return false;
                }
            }
            _ => {}
        }
    }
    stack.is_empty()
}

const STATEMENT_KEYWORDS: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "try", "catch", "finally", "synchronized",
    "return", "throw", "case", "default",
];

/// If `tokens` is a whole method declaration (optional header followed by a
/// braced body that closes the stream), returns the body range excluding the
/// braces.
fn method_body(tokens: &[Token]) -> Option<core::ops::Range<usize>> {
    let last = tokens.len().checked_sub(1)?;
    if !tokens[last].is("}") {
        return None;
    }
    let mut depth = 0i32;
    let mut open = None;
    for i in (0..=last).rev() {
        match tokens[i].text.as_str() {
            "}" => depth += 1,
            "{" => {
                depth -= 1;
                if depth == 0 {
                    open = Some(i);
                    break;
                }
            }
            _ => {}
        }
    }
    let open = open?;
    let header = &tokens[..open];
    if let Some(first) = header.first() {
        if STATEMENT_KEYWORDS.contains(&first.text.as_str()) {
            return None;
        }
        let mut paren = 0i32;
        for t in header {
            match t.text.as_str() {
                "(" => paren += 1,
                ")" => paren -= 1,
                ";" | "{" | "}" | "->" => return None,
                "=" if paren == 0 => return None,
                _ => {}
            }
        }
        let last_header = header.last().map(|t| t.text.as_str());
        let has_throws = header.iter().any(|t| t.is("throws"));
        if last_header != Some(")") && !has_throws {
            return None;
        }
    }
    Some(open + 1..last)
}

/// Parses a method (or a bare statement list, or a braced block) into its
/// structure tree. The root is always a `Sequence`.
pub fn parse_blocks(tokens: &[Token]) -> Result<Node, StructureError> {
    if !balanced(tokens) {
        return Err(StructureError::UnbalancedDelimiters);
    }
    let range = method_body(tokens).unwrap_or(0..tokens.len());
    let mut parser = Parser { toks: &tokens[..range.end], pos: range.start, depth: 0 };
    let mut items = Vec::new();
    while parser.pos < parser.toks.len() {
        parser.statement_into(&mut items)?;
    }
    Ok(Node::Sequence(items))
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + offset)
    }

    fn unexpected(&self) -> StructureError {
        match self.toks.get(self.pos) {
            Some(t) => StructureError::UnexpectedToken { index: self.pos, found: t.text.clone() },
            None => StructureError::UnexpectedEnd,
        }
    }

    fn expect(&mut self, lexeme: &str) -> Result<(), StructureError> {
        if self.peek() == Some(lexeme) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    /// Index of the delimiter closing the one at `open`.
    fn matching(&self, open: usize) -> Result<usize, StructureError> {
        let mut depth = 0i32;
        for (i, t) in self.toks.iter().enumerate().skip(open) {
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(i);
                    }
                }
                _ => {}
            }
        }
        Err(StructureError::UnbalancedDelimiters)
    }

    fn condition(&mut self) -> Result<Condition, StructureError> {
        if self.peek() != Some("(") {
            return Err(self.unexpected());
        }
        let close = self.matching(self.pos)?;
        let inner = &self.toks[self.pos + 1..close];
        self.pos = close + 1;
        Ok(Condition {
            logical_ops: inner.iter().filter(|t| is_logical(t)).count() as u32,
            ternaries: (0..inner.len()).filter(|&i| is_ternary_question(inner, i)).count() as u32,
        })
    }

    /// Parses one statement as a body and wraps it in a `Sequence`.
    fn body(&mut self) -> Result<Node, StructureError> {
        let mut items = Vec::new();
        if self.peek().is_none() {
            return Err(StructureError::UnexpectedEnd);
        }
        self.statement_into(&mut items)?;
        Ok(Node::Sequence(items))
    }

    fn block_into(&mut self, items: &mut Vec<Node>) -> Result<(), StructureError> {
        self.expect("{")?;
        while self.peek() != Some("}") {
            if self.peek().is_none() {
                return Err(StructureError::UnexpectedEnd);
            }
            self.statement_into(items)?;
        }
        self.pos += 1;
        Ok(())
    }

    fn block(&mut self) -> Result<Node, StructureError> {
        let mut items = Vec::new();
        self.block_into(&mut items)?;
        Ok(Node::Sequence(items))
    }

    /// Parses one statement, appending its node(s). Bare blocks are spliced
    /// into `items`; empty statements append nothing.
    fn statement_into(&mut self, items: &mut Vec<Node>) -> Result<(), StructureError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(StructureError::TooDeep);
        }
        let result = self.statement_inner(items);
        self.depth -= 1;
        result
    }

    fn statement_inner(&mut self, items: &mut Vec<Node>) -> Result<(), StructureError> {
        let Some(head) = self.peek() else {
            return Err(StructureError::UnexpectedEnd);
        };
        match head {
            "{" => self.block_into(items)?,
            ";" => self.pos += 1,
            "if" => {
                let node = self.if_statement()?;
                items.push(node);
            }
            "for" | "while" => {
                let kind = if head == "for" { LoopKind::For } else { LoopKind::While };
                self.pos += 1;
                let condition = self.condition()?;
                let body = Box::new(self.body()?);
                items.push(Node::Loop { kind, condition, body });
            }
            "do" => {
                self.pos += 1;
                let body = Box::new(self.body()?);
                self.expect("while")?;
                let condition = self.condition()?;
                if self.peek() == Some(";") {
                    self.pos += 1;
                }
                items.push(Node::Loop { kind: LoopKind::DoWhile, condition, body });
            }
            "switch" if self.is_switch_statement() => {
                let node = self.switch_statement()?;
                items.push(node);
            }
            "try" => {
                let node = self.try_statement()?;
                items.push(node);
            }
            "synchronized" if self.peek_at(1).is_some_and(|t| t.is("(")) => {
                self.pos += 1;
                self.condition()?;
                self.block_into(items)?;
            }
            "else" | "case" | "default" | "catch" | "finally" | "}" | ")" | "]" => {
                return Err(self.unexpected());
            }
            _ if self.is_label() => {
                self.pos += 2;
                self.statement_into(items)?;
            }
            _ => self.simple_statement(items)?,
        }
        Ok(())
    }

    fn is_label(&self) -> bool {
        matches!(self.peek_at(0), Some(t) if t.kind == TokenKind::Identifier)
            && matches!(self.peek_at(1), Some(t) if t.is(":"))
    }

    /// A `switch` at statement start whose block is not followed by more
    /// expression tokens (e.g. `switch (x) { ... }.foo();` is an expression).
    fn is_switch_statement(&self) -> bool {
        let Some(open) = self.peek_at(1).filter(|t| t.is("(")).map(|_| self.pos + 1) else {
            return false;
        };
        let Ok(close) = self.matching(open) else { return false };
        if !self.toks.get(close + 1).is_some_and(|t| t.is("{")) {
            return false;
        }
        let Ok(end) = self.matching(close + 1) else { return false };
        !self.toks.get(end + 1).is_some_and(|t| matches!(t.text.as_str(), "." | ";"))
    }

    fn if_statement(&mut self) -> Result<Node, StructureError> {
        self.expect("if")?;
        let condition = self.condition()?;
        let then_branch = Box::new(self.body()?);
        if self.peek() != Some("else") {
            return Ok(Node::If { condition, then_branch });
        }
        self.pos += 1;
        let else_branch = if self.peek() == Some("if") {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(StructureError::TooDeep);
            }
            let node = self.if_statement();
            self.depth -= 1;
            Box::new(node?)
        } else {
            Box::new(self.body()?)
        };
        Ok(Node::IfElse { condition, then_branch, else_branch })
    }

    fn switch_statement(&mut self) -> Result<Node, StructureError> {
        self.expect("switch")?;
        let condition = self.condition()?;
        self.expect("{")?;
        let mut cases = Vec::new();
        loop {
            match self.peek() {
                Some("}") => {
                    self.pos += 1;
                    break;
                }
                Some(label @ ("case" | "default")) => {
                    let is_default = label == "default";
                    self.pos += 1;
                    let arrow = self.skip_case_label()?;
                    let mut items = Vec::new();
                    if arrow {
                        self.statement_into(&mut items)?;
                    } else {
                        while !matches!(self.peek(), Some("case" | "default" | "}") | None) {
                            self.statement_into(&mut items)?;
                        }
                    }
                    cases.push(SwitchCase { is_default, body: Node::Sequence(items) });
                }
                _ => return Err(self.unexpected()),
            }
        }
        if cases.is_empty() {
            return Ok(Node::Statement { logical_ops: condition.logical_ops });
        }
        Ok(Node::Switch { condition, cases })
    }

    /// Skips a case label up to and including `:` or `->`; returns true for
    /// the arrow form.
    fn skip_case_label(&mut self) -> Result<bool, StructureError> {
        let mut depth = 0i32;
        while let Some(t) = self.toks.get(self.pos) {
            self.pos += 1;
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                ":" if depth == 0 => return Ok(false),
                "->" if depth == 0 => return Ok(true),
                _ => {}
            }
        }
        Err(StructureError::UnexpectedEnd)
    }

    fn try_statement(&mut self) -> Result<Node, StructureError> {
        self.expect("try")?;
        if self.peek() == Some("(") {
            self.condition()?;
        }
        let body = Box::new(self.block()?);
        let mut catches = Vec::new();
        while self.peek() == Some("catch") {
            self.pos += 1;
            self.condition()?;
            catches.push(self.block()?);
        }
        let finally = if self.peek() == Some("finally") {
            self.pos += 1;
            Some(Box::new(self.block()?))
        } else {
            None
        };
        Ok(Node::Try { body, catches, finally })
    }

    fn simple_statement(&mut self, items: &mut Vec<Node>) -> Result<(), StructureError> {
        let start = self.pos;
        let mut depth = 0i32;
        let mut declares_type = false;
        let mut end = self.toks.len();
        let mut i = start;
        while i < self.toks.len() {
            let t = &self.toks[i];
            match t.text.as_str() {
                "(" | "[" => depth += 1,
                ")" | "]" => depth -= 1,
                "class" | "interface" | "enum" if depth == 0 => declares_type = true,
                "{" if depth == 0 && declares_type => {
                    end = self.matching(i)? + 1;
                    break;
                }
                "{" => {
                    i = self.matching(i)? + 1;
                    continue;
                }
                ";" if depth == 0 => {
                    end = i + 1;
                    break;
                }
                "}" if depth == 0 => {
                    end = i;
                    break;
                }
                _ => {}
            }
            i += 1;
        }
        if end == start {
            return Err(self.unexpected());
        }
        self.pos = end;
        push_expression_nodes(&self.toks[start..end], items);
        Ok(())
    }
}

fn is_logical(t: &Token) -> bool {
    t.is("&&") || t.is("||")
}

/// Whether the `?` at `i` is a conditional operator rather than a generic
/// wildcard (`<?>`, `<? extends T>`, `Map<?, ?>`).
fn is_ternary_question(tokens: &[Token], i: usize) -> bool {
    if !tokens[i].is("?") {
        return false;
    }
    let prev = i.checked_sub(1).map(|p| tokens[p].text.as_str());
    let next = tokens.get(i + 1).map(|t| t.text.as_str());
    let wildcard = matches!(prev, Some("<" | ","))
        && matches!(next, Some(">" | ">>" | ">>>" | "," | "extends" | "super"));
    !wildcard
}

fn is_expression_boundary(t: &Token) -> bool {
    t.class == crate::lexer::TokenClass::Assignment
        || matches!(t.text.as_str(), "," | "return" | "?" | ":" | "->" | ";" | "{" | "}" | "throw" | "yield" | "assert")
}

/// Emits a `Ternary` node per conditional operator, followed by the
/// `Statement` leaf.
fn push_expression_nodes(tokens: &[Token], items: &mut Vec<Node>) {
    let mut claimed = alloc::vec![false; tokens.len()];
    for q in (0..tokens.len()).filter(|&i| is_ternary_question(tokens, i)) {
        let mut depth = 0i32;
        let mut ops = 0;
        for j in (0..q).rev() {
            let t = &tokens[j];
            match t.text.as_str() {
                ")" | "]" => depth += 1,
                "(" | "[" => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                _ if depth == 0 && is_expression_boundary(t) => break,
                _ => {}
            }
            if is_logical(t) && !claimed[j] {
                claimed[j] = true;
                ops += 1;
            }
        }
        items.push(Node::Ternary { condition_logical_ops: ops });
    }
    let logical_ops = tokens
        .iter()
        .zip(&claimed)
        .filter(|(t, c)| is_logical(t) && !**c)
        .count() as u32;
    items.push(Node::Statement { logical_ops });
}

/// Number of if, if-else, loop, switch and try nodes. Ternaries excluded.
pub fn count_structures(tree: &Node) -> usize {
    usize::from(tree.is_structure()) + tree.children().into_iter().map(count_structures).sum::<usize>()
}

/// McCabe complexity: one plus the number of decision points (if, loops,
/// case labels, catch clauses, ternaries, `&&`, `||`).
pub fn cyclomatic_complexity(tree: &Node) -> u64 {
    1 + decision_points(tree)
}

fn decision_points(node: &Node) -> u64 {
    let cond = |c: &Condition| u64::from(c.logical_ops) + u64::from(c.ternaries);
    let own = match node {
        Node::If { condition, .. } | Node::IfElse { condition, .. } | Node::Loop { condition, .. } => {
            1 + cond(condition)
        }
        Node::Switch { condition, cases } => {
            cases.iter().filter(|c| !c.is_default).count() as u64 + cond(condition)
        }
        Node::Try { catches, .. } => catches.len() as u64,
        Node::Ternary { condition_logical_ops } => 1 + u64::from(*condition_logical_ops),
        Node::Statement { logical_ops } => u64::from(*logical_ops),
        Node::Sequence(_) => 0,
    };
    own + node.children().into_iter().map(decision_points).sum::<u64>()
}

/// NPath complexity (acyclic execution paths).
///
/// Sequences multiply; `if` is ops + then + 1; `if-else` is ops + then +
/// else; loops are ops + body + 1; `switch` sums its cases plus one when
/// there is no default; `try` is (body + catches) times finally; a ternary is
/// ops + 2; a statement is 1.
pub fn npath_complexity(tree: &Node) -> Result<u64, NpathOverflow> {
    let add = |a: u64, b: u64| a.checked_add(b).ok_or(NpathOverflow);
    Ok(match tree {
        Node::Sequence(items) => {
            let mut product: u64 = 1;
            for item in items {
                product = product.checked_mul(npath_complexity(item)?).ok_or(NpathOverflow)?;
            }
            product
        }
        Node::If { condition, then_branch } => {
            add(add(u64::from(condition.logical_ops), npath_complexity(then_branch)?)?, 1)?
        }
        Node::IfElse { condition, then_branch, else_branch } => add(
            add(u64::from(condition.logical_ops), npath_complexity(then_branch)?)?,
            npath_complexity(else_branch)?,
        )?,
        Node::Loop { condition, body, .. } => {
            add(add(u64::from(condition.logical_ops), npath_complexity(body)?)?, 1)?
        }
        Node::Switch { cases, .. } => {
            let mut total = u64::from(!cases.iter().any(|c| c.is_default));
            for case in cases {
                total = add(total, npath_complexity(&case.body)?)?;
            }
            total
        }
        Node::Try { body, catches, finally } => {
            let mut total = npath_complexity(body)?;
            for c in catches {
                total = add(total, npath_complexity(c)?)?;
            }
            match finally {
                Some(f) => total.checked_mul(npath_complexity(f)?).ok_or(NpathOverflow)?,
                None => total,
            }
        }
        Node::Ternary { condition_logical_ops } => add(u64::from(*condition_logical_ops), 2)?,
        Node::Statement { .. } => 1,
    })
}

/// Maximum structure nesting depth; the method body is depth 0 and an
/// `else if` stays at the depth of its chain.
pub fn max_indentation(tree: &Node) -> usize {
    fn walk(node: &Node, depth: usize) -> usize {
        match node {
            Node::IfElse { then_branch, else_branch, .. } => {
                let inner = depth + 1;
                let else_depth = if matches!(**else_branch, Node::If { .. } | Node::IfElse { .. }) {
                    walk(else_branch, depth)
                } else {
                    walk(else_branch, inner)
                };
                walk(then_branch, inner).max(else_depth)
            }
            _ if node.is_structure() => {
                node.children().into_iter().map(|c| walk(c, depth + 1)).max().unwrap_or(depth + 1)
            }
            _ => node.children().into_iter().map(|c| walk(c, depth)).max().unwrap_or(depth),
        }
    }
    walk(tree, 0)
}

/// Number of distinct operator lexemes.
pub fn unique_operators(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Operator)
        .map(|t| t.text.as_str())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Whether the identifier at `i` is variable-like: not a call, not a member
/// access, not in type position, not an annotation, not after `new`/`class`.
pub fn is_variable_like(tokens: &[Token], i: usize) -> bool {
    let t = &tokens[i];
    if t.kind != TokenKind::Identifier {
        return false;
    }
    let next = tokens.get(i + 1);
    let prev = i.checked_sub(1).map(|p| &tokens[p]);
    if next.is_some_and(|n| n.is("(") || n.kind == TokenKind::Identifier) {
        return false;
    }
    !prev.is_some_and(|p| p.is(".") || p.is("new") || p.is("class") || p.is("@"))
}

/// Number of distinct variable-like identifier lexemes.
pub fn unique_variables(tokens: &[Token]) -> usize {
    (0..tokens.len())
        .filter(|&i| is_variable_like(tokens, i))
        .map(|i| tokens[i].text.as_str())
        .collect::<BTreeSet<_>>()
        .len()
}

/// All seven method metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricVector {
    pub token_count: usize,
    pub unique_operators: usize,
    pub unique_variables: usize,
    pub structure_count: usize,
    pub max_nesting: usize,
    pub cyclomatic: u64,
    /// Saturates at `u64::MAX` when the exact value overflows.
    pub npath: u64,
}

pub fn measure(tokens: &[Token]) -> Result<MetricVector, StructureError> {
    let tree = parse_blocks(tokens)?;
    Ok(MetricVector {
        token_count: tokens.len(),
        unique_operators: unique_operators(tokens),
        unique_variables: unique_variables(tokens),
        structure_count: count_structures(&tree),
        max_nesting: max_indentation(&tree),
        cyclomatic: cyclomatic_complexity(&tree),
        npath: npath_complexity(&tree).unwrap_or(u64::MAX),
    })
}
