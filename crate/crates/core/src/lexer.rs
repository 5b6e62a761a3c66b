//! Java method lexer and keyword/operator/symbol taxonomy.
//!
//! The lexer drops comments and whitespace, keeps string, char and numeric
//! literals as single tokens, and resolves operators by maximal munch.
//! `<` and `>` are always relational operators and `>>`/`>>>` are always
//! shifts; there is no attempt to recognise type arguments.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Broad lexical category of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Keyword,
    Operator,
    Symbol,
    Identifier,
    Literal,
}

/// Fine-grained class of a token.
///
/// Ten of these form the keyword/operator/symbol taxonomy probed by the KTX
/// task (see [`KTX_CLASSES`]); `OtherKeyword`, `Identifier` and `Literal`
/// complete the partition over everything the lexer emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenClass {
    Modifier,
    FlowControl,
    PrimitiveType,
    ErrorHandling,
    OtherKeyword,
    Arithmetic,
    Assignment,
    Relational,
    Logical,
    Bitwise,
    Symbol,
    Identifier,
    Literal,
}

/// The ten taxonomy classes, in KTX label order.
pub const KTX_CLASSES: [TokenClass; 10] = [
    TokenClass::Modifier,
    TokenClass::FlowControl,
    TokenClass::PrimitiveType,
    TokenClass::ErrorHandling,
    TokenClass::Arithmetic,
    TokenClass::Assignment,
    TokenClass::Relational,
    TokenClass::Logical,
    TokenClass::Bitwise,
    TokenClass::Symbol,
];

const MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "volatile",
    "transient",
    "native",
    "strictfp",
];
const FLOW_CONTROL: &[&str] = &[
    "if", "else", "for", "while", "do", "switch", "case", "default", "break", "continue", "return",
];
const PRIMITIVE_TYPES: &[&str] = &[
    "int", "long", "short", "byte", "char", "float", "double", "boolean", "void",
];
const ERROR_HANDLING: &[&str] = &["try", "catch", "finally", "throw", "throws", "assert"];
const OTHER_KEYWORDS: &[&str] = &[
    "class",
    "new",
    "instanceof",
    "this",
    "super",
    "import",
    "package",
    "enum",
    "interface",
    "extends",
    "implements",
    "const",
    "goto",
];

const ARITHMETIC: &[&str] = &["+", "-", "*", "/", "%", "++", "--"];
const ASSIGNMENT: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
];
const RELATIONAL: &[&str] = &["==", "!=", "<", ">", "<=", ">="];
const LOGICAL: &[&str] = &["&&", "||", "!"];
const BITWISE: &[&str] = &["&", "|", "^", "~", "<<", ">>", ">>>"];
const SYMBOLS: &[&str] = &[
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "::", "@", "?", ":", "->", "...",
];

const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

/// Every reserved Java keyword, in a fixed order.
pub const ALL_KEYWORDS: [&str; 50] = [
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "volatile",
    "transient",
    "native",
    "strictfp",
    "if",
    "else",
    "for",
    "while",
    "do",
    "switch",
    "case",
    "default",
    "break",
    "continue",
    "return",
    "int",
    "long",
    "short",
    "byte",
    "char",
    "float",
    "double",
    "boolean",
    "void",
    "try",
    "catch",
    "finally",
    "throw",
    "throws",
    "assert",
    "class",
    "new",
    "instanceof",
    "this",
    "super",
    "import",
    "package",
    "enum",
    "interface",
    "extends",
    "implements",
    "const",
    "goto",
];

impl TokenClass {
    /// Lexemes belonging to this class. Empty for identifiers and literals,
    /// which are open classes.
    pub fn members(self) -> &'static [&'static str] {
        match self {
            TokenClass::Modifier => MODIFIERS,
            TokenClass::FlowControl => FLOW_CONTROL,
            TokenClass::PrimitiveType => PRIMITIVE_TYPES,
            TokenClass::ErrorHandling => ERROR_HANDLING,
            TokenClass::OtherKeyword => OTHER_KEYWORDS,
            TokenClass::Arithmetic => ARITHMETIC,
            TokenClass::Assignment => ASSIGNMENT,
            TokenClass::Relational => RELATIONAL,
            TokenClass::Logical => LOGICAL,
            TokenClass::Bitwise => BITWISE,
            TokenClass::Symbol => SYMBOLS,
            TokenClass::Identifier | TokenClass::Literal => &[],
        }
    }

    pub fn kind(self) -> TokenKind {
        match self {
            TokenClass::Modifier
            | TokenClass::FlowControl
            | TokenClass::PrimitiveType
            | TokenClass::ErrorHandling
            | TokenClass::OtherKeyword => TokenKind::Keyword,
            TokenClass::Arithmetic
            | TokenClass::Assignment
            | TokenClass::Relational
            | TokenClass::Logical
            | TokenClass::Bitwise => TokenKind::Operator,
            TokenClass::Symbol => TokenKind::Symbol,
            TokenClass::Identifier => TokenKind::Identifier,
            TokenClass::Literal => TokenKind::Literal,
        }
    }

    /// Label index in the KTX task, if this class is part of the taxonomy.
    pub fn ktx_label(self) -> Option<usize> {
        KTX_CLASSES.iter().position(|&c| c == self)
    }

    pub fn name(self) -> &'static str {
        match self {
            TokenClass::Modifier => "modifier",
            TokenClass::FlowControl => "flow_control",
            TokenClass::PrimitiveType => "primitive_type",
            TokenClass::ErrorHandling => "error_handling",
            TokenClass::OtherKeyword => "other_keyword",
            TokenClass::Arithmetic => "arithmetic",
            TokenClass::Assignment => "assignment",
            TokenClass::Relational => "relational",
            TokenClass::Logical => "logical",
            TokenClass::Bitwise => "bitwise",
            TokenClass::Symbol => "symbol",
            TokenClass::Identifier => "identifier",
            TokenClass::Literal => "literal",
        }
    }
}

impl fmt::Display for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Byte range of a token in the source it was lexed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub class: TokenClass,
    pub span: Span,
}

impl Token {
    pub fn is(&self, lexeme: &str) -> bool {
        self.text == lexeme
    }
}

/// Reasons a sample cannot be lexed. Any of these means the corpus sample
/// is skipped.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexError {
    #[error("unterminated string literal starting at byte {0}")]
    UnterminatedString(usize),
    #[error("unterminated char literal starting at byte {0}")]
    UnterminatedChar(usize),
    #[error("unterminated block comment starting at byte {0}")]
    UnterminatedComment(usize),
    #[error("unexpected character {ch:?} at byte {offset}")]
    UnexpectedCharacter { ch: char, offset: usize },
}

/// Class of a keyword, operator or symbol lexeme; `None` for anything else.
pub fn classify_lexeme(lexeme: &str) -> Option<TokenClass> {
    const FIXED: [TokenClass; 11] = [
        TokenClass::Modifier,
        TokenClass::FlowControl,
        TokenClass::PrimitiveType,
        TokenClass::ErrorHandling,
        TokenClass::OtherKeyword,
        TokenClass::Arithmetic,
        TokenClass::Assignment,
        TokenClass::Relational,
        TokenClass::Logical,
        TokenClass::Bitwise,
        TokenClass::Symbol,
    ];
    FIXED
        .into_iter()
        .find(|class| class.members().contains(&lexeme))
}

pub fn is_keyword(lexeme: &str) -> bool {
    ALL_KEYWORDS.contains(&lexeme)
}

/// Class of a token produced by [`tokenize`].
pub fn classify_token(token: &Token) -> TokenClass {
    token.class
}

/// Operator and symbol lexemes sorted longest first, for maximal munch.
fn punctuation() -> &'static [&'static str] {
    // Kept sorted by descending length by hand; checked in tests.
    &[
        ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++",
        "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%",
        "=", "<", ">", "!", "&", "|", "^", "~", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
        "?", ":",
    ]
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Tokenizes Java method source.
///
/// Comments, tabs, newlines and other whitespace are removed. Joining the
/// resulting lexemes with single spaces and lexing again reproduces the same
/// lexemes and classes.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &source[i..];
        let c = rest.chars().next().unwrap_or('\0');
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("//") {
            i = rest.find('\n').map_or(bytes.len(), |p| i + p + 1);
            continue;
        }
        if let Some(comment) = rest.strip_prefix("/*") {
            match comment.find("*/") {
                Some(p) => i += p + 4,
                None => return Err(LexError::UnterminatedComment(i)),
            }
            continue;
        }
        let start = i;
        let (len, class) = if rest.starts_with("\"\"\"") {
            (text_block_len(rest).ok_or(LexError::UnterminatedString(start))?, TokenClass::Literal)
        } else if c == '"' {
            (quoted_len(rest, '"').ok_or(LexError::UnterminatedString(start))?, TokenClass::Literal)
        } else if c == '\'' {
            (quoted_len(rest, '\'').ok_or(LexError::UnterminatedChar(start))?, TokenClass::Literal)
        } else if c.is_ascii_digit()
            || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit()))
        {
            (number_len(rest), TokenClass::Literal)
        } else if is_ident_start(c) {
            let len = rest
                .char_indices()
                .find(|&(_, ch)| !is_ident_part(ch))
                .map_or(rest.len(), |(p, _)| p);
            let word = &rest[..len];
            let class = if LITERAL_WORDS.contains(&word) {
                TokenClass::Literal
            } else {
                classify_lexeme(word)
                    .filter(|class| class.kind() == TokenKind::Keyword)
                    .unwrap_or(TokenClass::Identifier)
            };
            (len, class)
        } else if let Some(op) = punctuation().iter().find(|op| rest.starts_with(**op)) {
            (op.len(), classify_lexeme(op).expect("punctuation is classified"))
        } else {
            return Err(LexError::UnexpectedCharacter { ch: c, offset: start });
        };
        i += len;
        tokens.push(Token {
            text: String::from(&source[start..i]),
            kind: class.kind(),
            class,
            span: Span { start, end: i },
        });
    }
    Ok(tokens)
}

/// Length of a `"..."` or `'...'` literal including quotes.
fn quoted_len(rest: &str, quote: char) -> Option<usize> {
    let mut escaped = false;
    for (p, ch) in rest.char_indices().skip(1) {
        match ch {
            '\n' | '\r' => return None,
            '\\' if !escaped => escaped = true,
            _ if ch == quote && !escaped => return Some(p + 1),
            _ => escaped = false,
        }
    }
    None
}

fn text_block_len(rest: &str) -> Option<usize> {
    let body = &rest[3..];
    let mut escaped = false;
    for (p, ch) in body.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        if ch == '\\' {
            escaped = true;
        } else if body[p..].starts_with("\"\"\"") {
            return Some(3 + p + 3);
        }
    }
    None
}

fn number_len(rest: &str) -> usize {
    let b = rest.as_bytes();
    let digits = |mut p: usize, pred: fn(u8) -> bool| {
        while p < b.len() && (pred(b[p]) || b[p] == b'_') {
            p += 1;
        }
        p
    };
    let mut p;
    if b.len() > 1 && b[0] == b'0' && matches!(b[1], b'x' | b'X' | b'b' | b'B') {
        p = digits(2, |c| c.is_ascii_hexdigit());
    } else {
        p = digits(0, |c| c.is_ascii_digit());
        if p < b.len() && b[p] == b'.' && !(p + 1 < b.len() && (b[p + 1] == b'.' || is_ident_start(b[p + 1] as char) && !matches!(b[p + 1], b'e' | b'E' | b'f' | b'F' | b'd' | b'D'))) {
            p = digits(p + 1, |c| c.is_ascii_digit());
        }
        if p < b.len() && matches!(b[p], b'e' | b'E') {
            let mut q = p + 1;
            if q < b.len() && matches!(b[q], b'+' | b'-') {
                q += 1;
            }
            if q < b.len() && b[q].is_ascii_digit() {
                p = digits(q, |c| c.is_ascii_digit());
            }
        }
    }
    if p < b.len() && matches!(b[p], b'l' | b'L' | b'f' | b'F' | b'd' | b'D') {
        p += 1;
    }
    p
}

/// Joins token lexemes with single spaces; this is the preprocessed form fed
/// to models.
pub fn join_lexemes<S: AsRef<str>>(lexemes: &[S]) -> String {
    let mut out = String::new();
    for (i, lexeme) in lexemes.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(lexeme.as_ref());
    }
    out
}

pub fn join_tokens(tokens: &[Token]) -> String {
    let lexemes: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
    join_lexemes(&lexemes)
}
