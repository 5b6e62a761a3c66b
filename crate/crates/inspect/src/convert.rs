//! Converts a tree of `.java` files into a method corpus.
//!
//! Methods are found at the token level: inside a class body, a run of
//! tokens with a return type, a name, a parameter list and a braced body.
//! Constructors, initializer blocks and nested types' headers are skipped;
//! methods of nested types are collected too.

use std::fs;
use std::path::Path;

use inspect_core::lexer::{tokenize, Token, TokenClass, TokenKind};
use inspect_core::taskgen::MethodSample;
use walkdir::WalkDir;

use crate::{Error, Result};

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConvertStats {
    pub files: usize,
    pub unlexable_files: usize,
    pub methods: usize,
}

fn matching_brace(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.is("{") {
            depth += 1;
        } else if t.is("}") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

fn matching_paren(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.is("(") {
            depth += 1;
        } else if t.is(")") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

fn is_type_decl(tokens: &[Token]) -> bool {
    tokens.iter().any(|t| t.is("class") || t.is("interface") || t.is("enum") || (t.is("record") && t.kind == TokenKind::Identifier))
}

/// Method declarations `(start token, name token, body close token)` in a
/// class body spanning `tokens[from..to]`.
fn methods_in_body(tokens: &[Token], from: usize, to: usize, out: &mut Vec<(usize, usize, usize)>) {
    let mut start = from;
    let mut i = from;
    while i < to {
        let t = &tokens[i];
        if t.is(";") {
            start = i + 1;
        } else if t.is("{") {
            let Some(close) = matching_brace(tokens, i) else { return };
            let decl = &tokens[start..i];
            if is_type_decl(decl) {
                methods_in_body(tokens, i + 1, close, out);
            } else if let Some(name) = method_name(decl) {
                out.push((start, start + name, close));
            }
            i = close;
            start = close + 1;
        } else if t.is("(") {
            // Skip annotation arguments and parameter lists whole.
            match matching_paren(tokens, i) {
                Some(c) => i = c,
                None => return,
            }
        }
        i += 1;
    }
}

/// Index (within `decl`) of the method name, if `decl` is a method header.
fn method_name(decl: &[Token]) -> Option<usize> {
    let open = decl.iter().position(|t| t.is("("))?;
    if open == 0 || decl[open - 1].kind != TokenKind::Identifier {
        return None;
    }
    let before = &decl[..open - 1];
    // The token before the name must end a type; annotations and
    // modifiers alone mean a constructor.
    let last = before.iter().rev().find(|t| !t.is("@"))?;
    let type_end = last.kind == TokenKind::Identifier && !before.ends_with_annotation()
        || last.class == TokenClass::PrimitiveType
        || last.is(">")
        || last.is(">>")
        || last.is("]");
    if !type_end || decl.iter().any(|t| t.is("=") || t.is("new")) {
        return None;
    }
    Some(open - 1)
}

trait AnnotationTail {
    fn ends_with_annotation(&self) -> bool;
}

impl AnnotationTail for [Token] {
    /// `@Name` or `@a.b.Name` at the end of a header prefix.
    fn ends_with_annotation(&self) -> bool {
        let mut j = self.len();
        while j >= 2 && self[j - 1].kind == TokenKind::Identifier {
            if self[j - 2].is("@") {
                return true;
            }
            if self[j - 2].is(".") && j >= 3 {
                j -= 2;
            } else {
                return false;
            }
        }
        false
    }
}

/// Methods and import declarations of one Java source file.
pub fn extract_methods(source: &str, file_id: &str) -> Option<Vec<MethodSample>> {
    let tokens = tokenize(source).ok()?;
    let mut imports = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i].is("import") {
            let end = tokens[i..].iter().position(|t| t.is(";")).map_or(tokens.len() - 1, |p| i + p);
            imports.push(source[tokens[i].span.start..tokens[end].span.end].to_string());
            i = end;
        }
        i += 1;
    }
    let mut found = Vec::new();
    methods_in_body(&tokens, 0, tokens.len(), &mut found);
    let methods = found
        .into_iter()
        .map(|(start, name, close)| {
            let line = source[..tokens[name].span.start].matches('\n').count() + 1;
            MethodSample {
                id: format!("{file_id}#{}@{line}", tokens[name].text),
                source: source[tokens[start].span.start..tokens[close].span.end].to_string(),
                imports: imports.clone(),
            }
        })
        .collect();
    Some(methods)
}

/// Walks `root` in sorted order and extracts every method of every `.java`
/// file. Ids are `<relative path>#<name>@<line>`.
pub fn convert_tree(root: &Path) -> Result<(Vec<MethodSample>, ConvertStats)> {
    let mut stats = ConvertStats::default();
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Invalid(e.to_string()))?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|x| x != "java") {
            continue;
        }
        stats.files += 1;
        let bytes = fs::read(path).map_err(Error::io(path))?;
        let text = String::from_utf8_lossy(&bytes);
        let rel = path.strip_prefix(root).unwrap_or(path).to_string_lossy().replace('\\', "/");
        match extract_methods(&text, &rel) {
            Some(methods) => {
                stats.methods += methods.len();
                out.extend(methods);
            }
            None => stats.unlexable_files += 1,
        }
    }
    Ok((out, stats))
}
