//! Balanced, split, labeled datasets for the fifteen probing tasks.
//!
//! Samples are analysed once ([`analyze`]); [`build_dataset`] then labels,
//! filters and draws from the analysed corpus. Within each class the
//! shortest eligible methods are preferred (ties broken by a seeded
//! shuffle), every class is split 60/20/20 on its own, and incorrect-code
//! positives and negatives come from disjoint methods.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::lexer::{join_lexemes, join_tokens, tokenize, LexError, Token, TokenClass, TokenKind, KTX_CLASSES};
use crate::mutator;
use crate::rng::{derive, Rng};
use crate::structure::{self, MetricVector};
use crate::task::{Task, TaskFamily};

/// NPT class boundaries, inclusive.
pub const NPATH_BINS: [(u64, u64); 10] = [
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 6),
    (7, 8),
    (9, 10),
    (11, 15),
    (16, 20),
    (21, 30),
    (31, 100),
];

/// Token budget of the probed models; longer samples are truncated.
pub const DEFAULT_MAX_TOKENS: usize = 512;

/// One corpus method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSample {
    pub id: String,
    #[serde(rename = "method_text")]
    pub source: String,
    #[serde(default)]
    pub imports: Vec<String>,
}

/// A lexed corpus method with its metrics.
#[derive(Debug, Clone)]
pub struct AnalyzedSample {
    pub id: String,
    pub tokens: Vec<Token>,
    pub imports: Vec<String>,
    /// `None` when the structure parser rejected the sample.
    pub metrics: Option<MetricVector>,
    /// Trivial getter or setter.
    pub excluded: bool,
}

pub fn analyze(sample: &MethodSample) -> Result<AnalyzedSample, LexError> {
    let tokens = tokenize(&sample.source)?;
    let metrics = structure::measure(&tokens).ok();
    let excluded = exclude_trivial(&tokens);
    Ok(AnalyzedSample {
        id: sample.id.clone(),
        tokens,
        imports: sample.imports.clone(),
        metrics,
        excluded,
    })
}

fn is_accessor_name(name: &str) -> bool {
    ["get", "set", "is"].iter().any(|prefix| {
        name.strip_prefix(prefix)
            .and_then(|rest| rest.chars().next())
            .is_some_and(|c| c.is_ascii_uppercase() || c == '_')
    })
}

/// True for basic getters and setters: an accessor-style name and a body
/// that is a single return or a single assignment.
pub fn exclude_trivial(tokens: &[Token]) -> bool {
    let Some(paren) = tokens.iter().position(|t| t.is("(")) else {
        return false;
    };
    let Some(name) = paren.checked_sub(1).map(|i| &tokens[i]) else {
        return false;
    };
    if name.kind != TokenKind::Identifier || !is_accessor_name(&name.text) {
        return false;
    }
    let Some(open) = tokens.iter().position(|t| t.is("{")) else {
        return false;
    };
    if tokens.last().map(|t| t.text.as_str()) != Some("}") {
        return false;
    }
    let body = &tokens[open + 1..tokens.len() - 1];
    if body.iter().any(|t| t.is("{") || t.is("}")) {
        return false;
    }
    let mut depth = 0i32;
    let mut semicolons = 0;
    let mut assigns = false;
    for t in body {
        match t.text.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            ";" if depth == 0 => semicolons += 1,
            _ if depth == 0 && t.class == TokenClass::Assignment => assigns = true,
            _ => {}
        }
    }
    let single = semicolons == 1 && body.last().is_some_and(|t| t.is(";"));
    single && (body[0].is("return") || assigns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("value outside the task's class range")]
pub struct Unlabelable;

/// Equal-frequency length boundaries: class `k` holds token counts in
/// `[b[k-1], b[k])` with open outer ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBins(pub [usize; 4]);

impl LengthBins {
    pub fn from_counts(counts: &[usize]) -> Option<Self> {
        if counts.is_empty() {
            return None;
        }
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        Some(LengthBins([1, 2, 3, 4].map(|q| sorted[q * n / 5])))
    }

    pub fn class_of(&self, token_count: usize) -> usize {
        self.0.iter().filter(|b| token_count >= **b).count()
    }
}

pub fn npath_bin(npath: u64) -> Result<usize, Unlabelable> {
    NPATH_BINS
        .iter()
        .position(|(lo, hi)| (*lo..=*hi).contains(&npath))
        .ok_or(Unlabelable)
}

/// Label of a method for a metrics-based task (and LEN, given bins).
pub fn label_metric(task: Task, metrics: &MetricVector, bins: Option<&LengthBins>) -> Result<usize, Unlabelable> {
    let below = |v: usize, n: usize| if v < n { Ok(v) } else { Err(Unlabelable) };
    match task {
        Task::LEN => bins.map(|b| b.class_of(metrics.token_count)).ok_or(Unlabelable),
        Task::OCU => below(metrics.unique_operators, 10),
        Task::VCU => below(metrics.unique_variables, 10),
        Task::CSC => below(metrics.structure_count, 10),
        Task::MXN => below(metrics.max_nesting, 5),
        Task::CPX => match metrics.cyclomatic {
            c @ 1..=10 => Ok(c as usize - 1),
            _ => Err(Unlabelable),
        },
        Task::NPT => npath_bin(metrics.npath),
        _ => Err(Unlabelable),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 60/20/20 of `count`, which must be a multiple of 5.
fn split_sizes(count: usize) -> [usize; 3] {
    let part = count / 5;
    [count - 2 * part, part, part]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledExample {
    /// Example id, unique within the dataset; embedding files key on it.
    pub id: u64,
    pub split: Split,
    pub label: usize,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_token_index: Option<usize>,
    /// Corpus method the example was derived from.
    pub sample_id: String,
}

/// Per-class KTX vocabulary, partitioned by split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtxVocabulary {
    pub classes: Vec<KtxClassVocabulary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtxClassVocabulary {
    pub class: TokenClass,
    pub train: Vec<String>,
    pub val: Vec<String>,
    pub test: Vec<String>,
}

impl KtxClassVocabulary {
    pub fn split_of(&self, lexeme: &str) -> Option<Split> {
        let has = |v: &Vec<String>| v.iter().any(|s| s == lexeme);
        if has(&self.train) {
            Some(Split::Train)
        } else if has(&self.val) {
            Some(Split::Val)
        } else if has(&self.test) {
            Some(Split::Test)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DatasetError {
    #[error("{task}: class {class} has {available} eligible samples in {split}, {needed} needed")]
    InsufficientSamples { task: Task, class: usize, split: Split, needed: usize, available: usize },
    #[error("{task}: n = {n} must be a positive multiple of 5 x {classes} classes")]
    InvalidSize { task: Task, n: usize, classes: usize },
    #[error("KTX class {0} has fewer than 3 members")]
    ClassTooSmall(TokenClass),
}

/// Partitions every taxonomy class's lexemes into disjoint train/val/test
/// vocabularies: 20% (at least one) each for val and test, the rest train.
pub fn ktx_generalization_split(seed: u64) -> Result<KtxVocabulary, DatasetError> {
    let mut classes = Vec::new();
    for class in KTX_CLASSES {
        let members = class.members();
        if members.len() < 3 {
            return Err(DatasetError::ClassTooSmall(class));
        }
        let mut shuffled: Vec<String> = members.iter().map(|s| s.to_string()).collect();
        shuffled.shuffle(&mut derive(seed, "ktx-vocabulary", class.name()));
        let held = ((members.len() as f64 * 0.2 + 0.5) as usize).max(1);
        let test = shuffled.split_off(shuffled.len() - held);
        let val = shuffled.split_off(shuffled.len() - held);
        let sorted = |mut v: Vec<String>| {
            v.sort();
            v
        };
        classes.push(KtxClassVocabulary {
            class,
            train: sorted(shuffled),
            val: sorted(val),
            test: sorted(test),
        });
    }
    Ok(KtxVocabulary { classes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentifierKind {
    Package,
    Class,
    Method,
    Variable,
}

impl IdentifierKind {
    pub const ALL: [IdentifierKind; 4] =
        [IdentifierKind::Package, IdentifierKind::Class, IdentifierKind::Method, IdentifierKind::Variable];

    pub fn label(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestedIdentifier {
    pub text: String,
    pub kind: IdentifierKind,
    /// First sample (in corpus order) the identifier was seen in.
    pub sample_id: String,
}

/// Package named by an import declaration: the dotted name minus its final
/// simple name (minus the member name too, for static imports).
pub fn import_package(import: &str) -> Option<String> {
    let tokens = tokenize(import).ok()?;
    let mut parts: Vec<&str> = Vec::new();
    let mut is_static = false;
    for t in &tokens {
        match t.text.as_str() {
            "import" | ";" | "." => {}
            "static" => is_static = true,
            _ if t.kind == TokenKind::Identifier || t.is("*") => parts.push(&t.text),
            _ => return None,
        }
    }
    let drop = if is_static { 2 } else { 1 };
    if parts.len() <= drop {
        return None;
    }
    parts.truncate(parts.len() - drop);
    if parts.contains(&"*") {
        return None;
    }
    Some(join_dotted(&parts))
}

fn join_dotted(parts: &[&str]) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push('.');
        }
        s.push_str(p);
    }
    s
}

/// Whether the `>` at `gt` closes a type-argument list such as
/// `List<String>`.
fn closes_type_arguments(tokens: &[Token], gt: usize) -> bool {
    let mut depth = 0;
    for j in (0..gt).rev() {
        let t = &tokens[j];
        match t.text.as_str() {
            ">" => depth += 1,
            ">>" => depth += 2,
            "<" => {
                if depth == 0 {
                    return j > 0 && tokens[j - 1].kind == TokenKind::Identifier;
                }
                depth -= 1;
            }
            "," | "." | "?" | "[" | "]" | "extends" | "super" | "&" => {}
            _ if t.kind == TokenKind::Identifier || t.class == TokenClass::PrimitiveType => {}
            _ => return false,
        }
    }
    false
}

/// Classifies identifier occurrences in one method by token context.
fn identifier_kinds(tokens: &[Token]) -> Vec<(usize, IdentifierKind)> {
    let mut out = Vec::new();
    let mut class_positions = BTreeSet::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.is("new") {
            let mut j = i + 1;
            let mut last = None;
            while j < tokens.len() && (tokens[j].kind == TokenKind::Identifier || tokens[j].is(".")) {
                if tokens[j].kind == TokenKind::Identifier {
                    last = Some(j);
                }
                j += 1;
            }
            if let Some(j) = last {
                class_positions.insert(j);
            }
        } else if (t.is("extends") || t.is("implements"))
            && tokens.get(i + 1).is_some_and(|n| n.kind == TokenKind::Identifier)
        {
            class_positions.insert(i + 1);
        }
    }
    for (i, t) in tokens.iter().enumerate() {
        if t.kind != TokenKind::Identifier {
            continue;
        }
        if class_positions.contains(&i) {
            out.push((i, IdentifierKind::Class));
            continue;
        }
        let next = tokens.get(i + 1).map(|n| n.text.as_str());
        if next == Some("(") {
            out.push((i, IdentifierKind::Method));
            continue;
        }
        let Some(prev) = i.checked_sub(1).map(|p| &tokens[p]) else { continue };
        let typed = prev.kind == TokenKind::Identifier
            || prev.class == TokenClass::PrimitiveType
            || prev.is("]")
            || (prev.is(">") && closes_type_arguments(tokens, i - 1));
        if typed && matches!(next, Some("=" | ";" | "," | ")" | ":")) {
            out.push((i, IdentifierKind::Variable));
        }
    }
    out
}

/// Harvests package, class, method and variable names from a corpus.
/// Identifiers seen in more than one role are dropped. Output is sorted by
/// kind, then text.
pub fn extract_identifiers(corpus: &[AnalyzedSample]) -> Vec<HarvestedIdentifier> {
    let mut seen: BTreeMap<String, (BTreeSet<IdentifierKind>, usize)> = BTreeMap::new();
    let mut note = |text: String, kind: IdentifierKind, idx: usize| {
        let entry = seen.entry(text).or_insert_with(|| (BTreeSet::new(), idx));
        entry.0.insert(kind);
    };
    for (idx, sample) in corpus.iter().enumerate() {
        for import in &sample.imports {
            if let Some(pkg) = import_package(import) {
                note(pkg, IdentifierKind::Package, idx);
            }
        }
        for (pos, kind) in identifier_kinds(&sample.tokens) {
            note(sample.tokens[pos].text.clone(), kind, idx);
        }
    }
    let mut out: Vec<HarvestedIdentifier> = seen
        .into_iter()
        .filter(|(_, (kinds, _))| kinds.len() == 1)
        .map(|(text, (kinds, idx))| HarvestedIdentifier {
            text,
            kind: *kinds.iter().next().expect("one kind"),
            sample_id: corpus[idx].id.clone(),
        })
        .collect();
    out.sort_by(|a, b| (a.kind, &a.text).cmp(&(b.kind, &b.text)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetConfig {
    /// Total examples.
    pub n: usize,
    pub seed: u64,
    pub max_tokens: usize,
}

impl DatasetConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        DatasetConfig { n, seed, max_tokens: DEFAULT_MAX_TOKENS }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskDataset {
    pub task: Task,
    pub class_count: usize,
    pub label_schema: Vec<String>,
    pub seed: u64,
    pub n: usize,
    /// LEN quintile boundaries.
    pub bin_boundaries: Option<LengthBins>,
    pub ktx_vocabulary: Option<KtxVocabulary>,
    /// Fraction of examples longer than the token budget.
    pub truncation_rate: f64,
    pub examples: Vec<LabeledExample>,
}

impl TaskDataset {
    pub fn count(&self, label: usize, split: Split) -> usize {
        self.examples.iter().filter(|e| e.label == label && e.split == split).count()
    }
}

/// An example before split assignment and id numbering.
#[derive(Debug, Clone)]
struct Draft {
    label: usize,
    text: String,
    target_token_index: Option<usize>,
    sample_id: String,
    token_count: usize,
}

/// Candidate awaiting selection; `key` indexes into the caller's table.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    key: usize,
    token_count: usize,
}

/// Shuffles, then keeps the `needed` shortest. The kept set is shuffled
/// again so that split assignment does not follow length.
fn take_shortest(mut pool: Vec<Candidate>, needed: usize, rng: &mut Rng) -> Option<Vec<Candidate>> {
    if pool.len() < needed {
        return None;
    }
    pool.shuffle(rng);
    pool.sort_by_key(|c| c.token_count);
    pool.truncate(needed);
    pool.shuffle(rng);
    Some(pool)
}

fn eligible(corpus: &[AnalyzedSample]) -> impl Iterator<Item = (usize, &AnalyzedSample)> {
    corpus.iter().enumerate().filter(|(_, s)| !s.excluded && !s.tokens.is_empty())
}

/// Builds the dataset for `task`.
pub fn build_dataset(task: Task, corpus: &[AnalyzedSample], config: &DatasetConfig) -> Result<TaskDataset, DatasetError> {
    let classes = task.class_count();
    if config.n == 0 || !config.n.is_multiple_of(classes * 5) {
        return Err(DatasetError::InvalidSize { task, n: config.n, classes });
    }
    let per_class = config.n / classes;
    let mut rng = derive(config.seed, "dataset", task.code());
    let mut bin_boundaries = None;
    let mut ktx_vocabulary = None;

    // (label, split) -> drafts; split is None until assigned per class.
    let mut by_class: Vec<Vec<Draft>> = (0..classes).map(|_| Vec::new()).collect();
    let mut presplit: Vec<(Split, Draft)> = Vec::new();

    let insufficient = |class: usize, split: Split, needed: usize, available: usize| DatasetError::InsufficientSamples {
        task,
        class,
        split,
        needed,
        available,
    };

    match task.family() {
        TaskFamily::Metric | TaskFamily::Token if task != Task::KTX && task != Task::IDN => {
            let bins = if task == Task::LEN {
                let counts: Vec<usize> = eligible(corpus).map(|(_, s)| s.tokens.len()).collect();
                let bins = LengthBins::from_counts(&counts);
                bin_boundaries = bins.clone();
                bins
            } else {
                None
            };
            let mut pools: Vec<Vec<Candidate>> = (0..classes).map(|_| Vec::new()).collect();
            for (idx, sample) in eligible(corpus) {
                let label = match (&sample.metrics, task) {
                    (Some(m), _) => label_metric(task, m, bins.as_ref()),
                    (None, Task::LEN) => Ok(bins.as_ref().map_or(0, |b| b.class_of(sample.tokens.len()))),
                    (None, _) => Err(Unlabelable),
                };
                if let Ok(label) = label {
                    pools[label].push(Candidate { key: idx, token_count: sample.tokens.len() });
                }
            }
            for (label, pool) in pools.into_iter().enumerate() {
                let available = pool.len();
                let chosen = take_shortest(pool, per_class, &mut rng)
                    .ok_or_else(|| insufficient(label, Split::Train, per_class, available))?;
                by_class[label] = chosen
                    .into_iter()
                    .map(|c| {
                        let s = &corpus[c.key];
                        Draft {
                            label,
                            text: join_tokens(&s.tokens),
                            target_token_index: None,
                            sample_id: s.id.clone(),
                            token_count: s.tokens.len(),
                        }
                    })
                    .collect();
            }
        }
        TaskFamily::IncorrectCode => {
            let pool: Vec<Candidate> = eligible(corpus)
                .filter(|(_, s)| mutator::is_applicable(task, &s.tokens))
                .map(|(idx, s)| Candidate { key: idx, token_count: s.tokens.len() })
                .collect();
            let available = pool.len();
            let chosen = take_shortest(pool, config.n, &mut rng)
                .ok_or_else(|| insufficient(1, Split::Train, config.n, available))?;
            let (negatives, positives) = chosen.split_at(per_class);
            by_class[0] = negatives
                .iter()
                .map(|c| {
                    let s = &corpus[c.key];
                    Draft {
                        label: 0,
                        text: join_tokens(&s.tokens),
                        target_token_index: None,
                        sample_id: s.id.clone(),
                        token_count: s.tokens.len(),
                    }
                })
                .collect();
            by_class[1] = positives
                .iter()
                .map(|c| {
                    let s = &corpus[c.key];
                    let mut site_rng = derive(config.seed, task.code(), &s.id);
                    let m = mutator::mutate(task, &s.tokens, &mut site_rng).expect("applicability checked");
                    Draft {
                        label: 1,
                        text: join_lexemes(&m.mutated),
                        target_token_index: None,
                        sample_id: s.id.clone(),
                        token_count: s.tokens.len(),
                    }
                })
                .collect();
        }
        _ if task == Task::IDN => {
            let harvested = extract_identifiers(corpus);
            for kind in IdentifierKind::ALL {
                let label = kind.label();
                let items: Vec<&HarvestedIdentifier> = harvested.iter().filter(|h| h.kind == kind).collect();
                let pool: Vec<Candidate> =
                    (0..items.len()).map(|key| Candidate { key, token_count: 1 }).collect();
                let chosen = take_shortest(pool, per_class, &mut rng)
                    .ok_or_else(|| insufficient(label, Split::Train, per_class, items.len()))?;
                by_class[label] = chosen
                    .into_iter()
                    .map(|c| Draft {
                        label,
                        text: items[c.key].text.clone(),
                        target_token_index: None,
                        sample_id: items[c.key].sample_id.clone(),
                        token_count: 1,
                    })
                    .collect();
            }
        }
        _ => {
            let vocabulary = ktx_generalization_split(config.seed)?;
            let sizes = split_sizes(per_class);
            for (label, vocab) in vocabulary.classes.iter().enumerate() {
                // (split) -> candidates of (sample, token index)
                let mut pools: [Vec<(usize, usize)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
                for (idx, sample) in eligible(corpus) {
                    let mut per_split: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
                    for (pos, t) in sample.tokens.iter().enumerate() {
                        if t.class == vocab.class {
                            if let Some(split) = vocab.split_of(&t.text) {
                                per_split[split as usize].push(pos);
                            }
                        }
                    }
                    for (s, positions) in per_split.iter().enumerate() {
                        if !positions.is_empty() {
                            let key = alloc::format!("{}#{label}#{s}", sample.id);
                            let mut pick_rng = derive(config.seed, "ktx-target", &key);
                            let choice = positions[pick_rng.random_range(0..positions.len() as u64) as usize];
                            pools[s].push((idx, choice));
                        }
                    }
                }
                for split in Split::ALL {
                    let items = &pools[split as usize];
                    let needed = sizes[split as usize];
                    let pool: Vec<Candidate> = items
                        .iter()
                        .enumerate()
                        .map(|(key, (idx, _))| Candidate { key, token_count: corpus[*idx].tokens.len() })
                        .collect();
                    let chosen = take_shortest(pool, needed, &mut rng)
                        .ok_or_else(|| insufficient(label, split, needed, items.len()))?;
                    for c in chosen {
                        let (idx, pos) = items[c.key];
                        let s = &corpus[idx];
                        presplit.push((
                            split,
                            Draft {
                                label,
                                text: join_tokens(&s.tokens),
                                target_token_index: Some(pos),
                                sample_id: s.id.clone(),
                                token_count: s.tokens.len(),
                            },
                        ));
                    }
                }
            }
            ktx_vocabulary = Some(vocabulary);
        }
    }

    for drafts in by_class {
        let sizes = split_sizes(drafts.len());
        let mut it = drafts.into_iter();
        for split in Split::ALL {
            for draft in it.by_ref().take(sizes[split as usize]) {
                presplit.push((split, draft));
            }
        }
    }

    let truncated = presplit.iter().filter(|(_, d)| d.token_count > config.max_tokens).count();
    let truncation_rate = truncated as f64 / presplit.len() as f64;

    let mut examples = Vec::with_capacity(presplit.len());
    for split in Split::ALL {
        let mut part: Vec<Draft> = presplit.iter().filter(|(s, _)| *s == split).map(|(_, d)| d.clone()).collect();
        part.shuffle(&mut rng);
        for d in part {
            examples.push(LabeledExample {
                id: examples.len() as u64,
                split,
                label: d.label,
                text: d.text,
                target_token_index: d.target_token_index,
                sample_id: d.sample_id,
            });
        }
    }

    Ok(TaskDataset {
        task,
        class_count: classes,
        label_schema: task.label_schema(),
        seed: config.seed,
        n: config.n,
        bin_boundaries,
        ktx_vocabulary,
        truncation_rate,
        examples,
    })
}
