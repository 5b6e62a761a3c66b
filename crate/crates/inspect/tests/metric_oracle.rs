mod support;

use inspect_core::lexer::tokenize;
use inspect_core::structure::measure;
use support::oracle::{snippets, Snippet};

fn measured(s: &Snippet) -> (u64, u64) {
    let tokens = tokenize(&s.source).unwrap_or_else(|e| panic!("{e}\n{}", s.source));
    let m = measure(&tokens).unwrap_or_else(|e| panic!("{e}\n{}", s.source));
    (m.cyclomatic, m.npath)
}

#[test]
fn npath_and_cyclomatic_match_path_enumeration() {
    for s in snippets(11, 300, 12) {
        assert!(s.decision_points <= 12);
        let (cc, np) = measured(&s);
        assert_eq!(np, s.npath, "npath\n{}", s.source);
        assert_eq!(cc, 1 + s.decision_points, "cyclomatic\n{}", s.source);
    }
}

#[test]
fn sequential_composition() {
    let pool = snippets(12, 120, 6);
    for pair in pool.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (cc_a, np_a) = measured(a);
        let (cc_b, np_b) = measured(b);
        let (cc, np) = measured(&a.then(b));
        assert_eq!(cc, cc_a + cc_b - 1);
        assert_eq!(np, np_a * np_b);
    }
}

#[test]
fn generator_covers_every_construct() {
    let text: String = snippets(13, 200, 12).iter().map(|s| s.source.clone()).collect();
    for needle in ["else if", "} else {", "do {", "while (", "for (int", "for (String", "switch", "default:", "catch", "finally", "synchronized", " ? ", "||", "&&"] {
        assert!(text.contains(needle), "{needle}");
    }
}
