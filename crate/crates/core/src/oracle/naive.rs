//! Direct matcher on syntax trees, independent of automata.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Symbol};
use crate::regex::RegexAst;

/// End positions reachable by matching `ast` from each position in `from`.
fn ends(ast: &RegexAst, alphabet: &Alphabet, word: &[Symbol], from: &BTreeSet<usize>) -> BTreeSet<usize> {
    match ast {
        RegexAst::Epsilon => from.clone(),
        RegexAst::Letter(a) => from
            .iter()
            .filter(|&&i| word.get(i) == Some(a))
            .map(|&i| i + 1)
            .collect(),
        RegexAst::Dot => from
            .iter()
            .filter(|&&i| word.get(i).is_some_and(|&s| !alphabet.is_eol(s)))
            .map(|&i| i + 1)
            .collect(),
        RegexAst::Class(set) => from
            .iter()
            .filter(|&&i| word.get(i).is_some_and(|s| set.contains(s)))
            .map(|&i| i + 1)
            .collect(),
        RegexAst::Concat(a, b) => {
            let mid = ends(a, alphabet, word, from);
            ends(b, alphabet, word, &mid)
        }
        RegexAst::Alt(a, b) => {
            let mut out = ends(a, alphabet, word, from);
            out.extend(ends(b, alphabet, word, from));
            out
        }
        RegexAst::Star(a) => {
            let mut all = from.clone();
            let mut frontier = from.clone();
            while !frontier.is_empty() {
                let next = ends(a, alphabet, word, &frontier);
                frontier = next.difference(&all).copied().collect();
                all.extend(frontier.iter().copied());
            }
            all
        }
    }
}

/// Whether `word` as a whole is in the language of `ast`.
pub fn matches(ast: &RegexAst, alphabet: &Alphabet, word: &[Symbol]) -> bool {
    ends(ast, alphabet, word, &BTreeSet::from([0])).contains(&word.len())
}
