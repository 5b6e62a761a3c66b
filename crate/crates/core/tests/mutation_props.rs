mod common;

use common::fragments;
use inspect_core::lexer::{is_keyword, tokenize, Token, TokenClass, TokenKind, ALL_KEYWORDS};
use inspect_core::mutator::{is_applicable, mutate, rea_replacements, Mutation, Site};
use inspect_core::rng::derive;
use inspect_core::Task;
use proptest::prelude::*;

const TASKS: [Task; 6] = [Task::TYP, Task::REA, Task::JBL, Task::SRI, Task::SRK, Task::SCK];

fn check(tokens: &[Token], m: &Mutation) -> Result<(), TestCaseError> {
    let original: Vec<&str> = tokens.iter().map(|t| t.text.as_str()).collect();
    prop_assert_eq!(&m.original, &original);
    prop_assert_eq!(m.mutated.len(), original.len());
    let changed: Vec<usize> = (0..original.len()).filter(|&i| m.mutated[i] != original[i]).collect();
    match m.site {
        Site::Single(i) => {
            prop_assert_eq!(&changed, &vec![i]);
            prop_assert_eq!(&m.mutated[i], &m.replacement);
        }
        Site::Swap(i) => {
            prop_assert_eq!(&changed, &vec![i, i + 1]);
            prop_assert_eq!(m.mutated[i].as_str(), original[i + 1]);
            prop_assert_eq!(m.mutated[i + 1].as_str(), original[i]);
        }
    }
    let site = changed[0];
    let (before, after) = (&tokens[site], m.mutated[site].as_str());
    match m.task {
        Task::TYP => {
            prop_assert_eq!(before.class, TokenClass::PrimitiveType);
            prop_assert!(!is_keyword(after));
            let mut a: Vec<char> = after.chars().collect();
            let mut b: Vec<char> = before.text.chars().collect();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
        Task::REA => {
            prop_assert_eq!(before.class, TokenClass::Relational);
            prop_assert!(rea_replacements(&before.text).contains(&after));
        }
        Task::JBL => prop_assert!(matches!(m.site, Site::Swap(_))),
        Task::SRI => {
            prop_assert_eq!(before.kind, TokenKind::Identifier);
            prop_assert!(tokens.iter().any(|t| t.kind == TokenKind::Identifier && t.text == after));
        }
        Task::SRK => {
            prop_assert_eq!(before.kind, TokenKind::Keyword);
            prop_assert!(ALL_KEYWORDS.contains(&after));
        }
        Task::SCK => {
            prop_assert!(before.class.members().contains(&after));
            prop_assert!(matches!(
                before.class,
                TokenClass::Modifier | TokenClass::FlowControl | TokenClass::PrimitiveType | TokenClass::ErrorHandling
            ));
        }
        _ => unreachable!(),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn single_site_and_class_preserving(parts in fragments(40), seed in any::<u64>()) {
        let tokens = tokenize(&parts.join(" ")).unwrap();
        for task in TASKS {
            let mut rng = derive(seed, "mutation-prop", task.code());
            match mutate(task, &tokens, &mut rng) {
                Ok(m) => {
                    prop_assert!(is_applicable(task, &tokens));
                    prop_assert_eq!(m.task, task);
                    check(&tokens, &m)?;
                    let again = mutate(task, &tokens, &mut derive(seed, "mutation-prop", task.code())).unwrap();
                    prop_assert_eq!(again, m);
                }
                Err(_) => prop_assert!(!is_applicable(task, &tokens)),
            }
        }
    }
}

#[test]
fn non_mutation_tasks_are_rejected() {
    let tokens = tokenize("int x = a < b ? 1 : 2 ;").unwrap();
    for task in [Task::KTX, Task::IDN, Task::LEN, Task::NPT] {
        assert!(mutate(task, &tokens, &mut derive(0, "m", "")).is_err());
        assert!(!is_applicable(task, &tokens));
    }
}
