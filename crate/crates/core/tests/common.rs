#![allow(dead_code)]

use proptest::prelude::*;

/// Lexemes that each lex to exactly one token.
pub const FRAGMENTS: &[&str] = &[
    "public", "static", "final", "private", "synchronized", "if", "else", "for", "while", "do", "return",
    "break", "continue", "switch", "case", "default", "int", "long", "boolean", "char", "double", "byte",
    "try", "catch", "finally", "throw", "throws", "new", "this", "class", "instanceof", "void", "null",
    "true", "false", "count", "items", "_tmp", "$x", "name2", "List", "value", "+", "-", "*", "/", "%",
    "++", "--", "=", "+=", "-=", ">>>=", "<<=", "==", "!=", "<", ">", "<=", ">=", "&&", "||", "!", "&",
    "|", "^", "~", "<<", ">>", ">>>", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "?", ":", "->",
    "::", "...", "0", "42", "0x1F", "3.5e2", "1_000L", "2.0f", "'a'", "'\\n'", "\"hello world\"",
    "\"a\\\"b\"", "\"\"",
];

pub const SEPARATORS: &[&str] = &[" ", "\n", "\t", "  ", " /* note */ ", " // note\n", "\r\n"];

pub fn fragments(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(FRAGMENTS), 0..max)
}

pub fn source_of(parts: &[&str], seps: &[usize]) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push_str(SEPARATORS[seps[i % seps.len()] % SEPARATORS.len()]);
        }
        s.push_str(p);
    }
    s
}
