//! Single-site mutation operators that turn a valid method into an
//! incorrect-code negative for the TYP, REA, JBL, SRI, SRK and SCK tasks.
//!
//! Every operator picks its site uniformly among applicable positions and
//! draws replacements from a fixed, sorted candidate list, so the result is
//! a pure function of the token stream and the generator state.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng as _, RngCore};

use crate::lexer::{is_keyword, Token, TokenClass, TokenKind, ALL_KEYWORDS};
use crate::task::Task;

/// Where a mutation was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    Single(usize),
    /// Adjacent pair `(i, i + 1)`.
    Swap(usize),
}

impl Site {
    pub fn positions(self) -> Vec<usize> {
        match self {
            Site::Single(i) => alloc::vec![i],
            Site::Swap(i) => alloc::vec![i, i + 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutation {
    pub task: Task,
    pub original: Vec<String>,
    pub mutated: Vec<String>,
    pub site: Site,
    /// Lexeme written at the site (the first position for swaps).
    pub replacement: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no applicable mutation site for {0}")]
pub struct NoApplicableSite(pub Task);

fn pick<'a, T>(rng: &mut impl RngCore, items: &'a [T]) -> &'a T {
    let i = rng.random_range(0..items.len() as u64) as usize;
    &items[i]
}

fn lexemes(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.text.clone()).collect()
}

fn replace_at(task: Task, tokens: &[Token], index: usize, replacement: String) -> Mutation {
    let original = lexemes(tokens);
    let mut mutated = original.clone();
    mutated[index] = replacement.clone();
    Mutation { task, original, mutated, site: Site::Single(index), replacement }
}

/// Adjacent-character transpositions of `word` that are neither the word
/// itself nor a keyword, in position order.
pub fn transpositions(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let mut out: Vec<String> = Vec::new();
    for i in 0..chars.len().saturating_sub(1) {
        let mut c = chars.clone();
        c.swap(i, i + 1);
        let s: String = c.into_iter().collect();
        if s != word && !is_keyword(&s) && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// TYP: misspell one primitive-type keyword by swapping two adjacent letters.
pub fn mutate_typ(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let sites: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].class == TokenClass::PrimitiveType)
        .collect();
    if sites.is_empty() {
        return Err(NoApplicableSite(Task::TYP));
    }
    let site = *pick(rng, &sites);
    let options = transpositions(&tokens[site].text);
    let replacement = pick(rng, &options).clone();
    Ok(replace_at(Task::TYP, tokens, site, replacement))
}

/// Assignment operators that may stand in for a relational operator.
pub fn rea_replacements(relational: &str) -> &'static [&'static str] {
    match relational {
        "<=" => &["+="],
        ">=" => &["-="],
        "==" => &["="],
        "!=" => &["/="],
        "<" => &["&=", "|="],
        ">" => &["%="],
        _ => &[],
    }
}

/// REA: replace one relational operator with its paired assignment operator.
pub fn mutate_rea(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let sites: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].class == TokenClass::Relational)
        .collect();
    if sites.is_empty() {
        return Err(NoApplicableSite(Task::REA));
    }
    let site = *pick(rng, &sites);
    let replacement = String::from(*pick(rng, rea_replacements(&tokens[site].text)));
    Ok(replace_at(Task::REA, tokens, site, replacement))
}

/// JBL: swap one pair of adjacent, non-identical tokens.
pub fn mutate_jbl(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let sites: Vec<usize> = (0..tokens.len().saturating_sub(1))
        .filter(|&i| tokens[i].text != tokens[i + 1].text)
        .collect();
    if sites.is_empty() {
        return Err(NoApplicableSite(Task::JBL));
    }
    let site = *pick(rng, &sites);
    let original = lexemes(tokens);
    let mut mutated = original.clone();
    mutated.swap(site, site + 1);
    let replacement = mutated[site].clone();
    Ok(Mutation { task: Task::JBL, original, mutated, site: Site::Swap(site), replacement })
}

/// SRI: replace one identifier occurrence with a different identifier from
/// the same sample.
pub fn mutate_sri(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let names: BTreeSet<&str> = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text.as_str())
        .collect();
    if names.len() < 2 {
        return Err(NoApplicableSite(Task::SRI));
    }
    let sites: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].kind == TokenKind::Identifier)
        .collect();
    let site = *pick(rng, &sites);
    let others: Vec<&str> = names.into_iter().filter(|n| *n != tokens[site].text).collect();
    let replacement = String::from(*pick(rng, &others));
    Ok(replace_at(Task::SRI, tokens, site, replacement))
}

/// SRK: replace one keyword with any other Java keyword.
pub fn mutate_srk(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let sites: Vec<usize> = (0..tokens.len())
        .filter(|&i| tokens[i].kind == TokenKind::Keyword)
        .collect();
    if sites.is_empty() {
        return Err(NoApplicableSite(Task::SRK));
    }
    let site = *pick(rng, &sites);
    let others: Vec<&str> = ALL_KEYWORDS.iter().copied().filter(|k| *k != tokens[site].text).collect();
    let replacement = String::from(*pick(rng, &others));
    Ok(replace_at(Task::SRK, tokens, site, replacement))
}

const SCK_CLASSES: [TokenClass; 4] = [
    TokenClass::Modifier,
    TokenClass::FlowControl,
    TokenClass::PrimitiveType,
    TokenClass::ErrorHandling,
];

/// SCK: replace one keyword with a different keyword of the same taxonomy
/// class.
pub fn mutate_sck(tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    let sites: Vec<usize> = (0..tokens.len())
        .filter(|&i| SCK_CLASSES.contains(&tokens[i].class))
        .collect();
    if sites.is_empty() {
        return Err(NoApplicableSite(Task::SCK));
    }
    let site = *pick(rng, &sites);
    let others: Vec<&str> = tokens[site]
        .class
        .members()
        .iter()
        .copied()
        .filter(|k| *k != tokens[site].text)
        .collect();
    let replacement = String::from(*pick(rng, &others));
    Ok(replace_at(Task::SCK, tokens, site, replacement))
}

/// Dispatches to the operator for an incorrect-code task.
pub fn mutate(task: Task, tokens: &[Token], rng: &mut impl RngCore) -> Result<Mutation, NoApplicableSite> {
    match task {
        Task::TYP => mutate_typ(tokens, rng),
        Task::REA => mutate_rea(tokens, rng),
        Task::JBL => mutate_jbl(tokens, rng),
        Task::SRI => mutate_sri(tokens, rng),
        Task::SRK => mutate_srk(tokens, rng),
        Task::SCK => mutate_sck(tokens, rng),
        other => Err(NoApplicableSite(other)),
    }
}

/// Whether `mutate(task, tokens, _)` can succeed, without drawing.
pub fn is_applicable(task: Task, tokens: &[Token]) -> bool {
    match task {
        Task::TYP => tokens.iter().any(|t| t.class == TokenClass::PrimitiveType),
        Task::REA => tokens.iter().any(|t| t.class == TokenClass::Relational),
        Task::JBL => tokens.windows(2).any(|w| w[0].text != w[1].text),
        Task::SRI => {
            let mut names = tokens.iter().filter(|t| t.kind == TokenKind::Identifier).map(|t| &t.text);
            match names.next() {
                Some(first) => names.any(|n| n != first),
                None => false,
            }
        }
        Task::SRK => tokens.iter().any(|t| t.kind == TokenKind::Keyword),
        Task::SCK => tokens.iter().any(|t| SCK_CLASSES.contains(&t.class)),
        _ => false,
    }
}
