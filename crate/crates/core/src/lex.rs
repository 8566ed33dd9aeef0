//! The lexicographic order on words, first-difference decompositions,
//! order-preserving binary coding, and bounded prefix-freeness checks.
//!
//! For words `u`, `v` over an ordered alphabet, `u` precedes `v` when `u` is
//! a proper prefix of `v`, or when at the first position where they differ
//! the letter of `u` is smaller. This is a linear order on any set of words;
//! the crate's order-analysis layer studies its structure on whole languages.

use std::cmp::Ordering;
use std::error::Error;
use std::fmt;

use crate::alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
use crate::grammar::{Grammar, GrammarError};
use crate::parallel;

/// Errors from order comparisons.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LexError {
    Alphabet(AlphabetError),
    /// `first_difference` requires its inputs in strictly ascending order.
    NotStrictlyOrdered,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexError::Alphabet(e) => e.fmt(f),
            LexError::NotStrictlyOrdered => {
                write!(
                    f,
                    "inputs must be distinct and in ascending lexicographic order"
                )
            }
        }
    }
}

impl Error for LexError {}

impl From<AlphabetError> for LexError {
    fn from(e: AlphabetError) -> LexError {
        LexError::Alphabet(e)
    }
}

/// Compares two words in the lexicographic order of the given alphabet.
pub fn lex_compare(
    u: &Word,
    v: &Word,
    alphabet: &OrderedAlphabet,
) -> Result<Ordering, AlphabetError> {
    alphabet.check_word(u)?;
    alphabet.check_word(v)?;
    Ok(compare_words(u, v))
}

/// Comparison on already-validated words. Equals the derived `Ord` on
/// [`Word`]; spelled out here as the crate's reference definition.
pub(crate) fn compare_words(u: &Word, v: &Word) -> Ordering {
    for (x, y) in u.into_iter().zip(v) {
        match x.cmp(&y) {
            Ordering::Equal => continue,
            decided => return decided,
        }
    }
    u.len().cmp(&v.len())
}

/// Structure of the first difference between two strictly ordered words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FirstDifference {
    /// The smaller word is a proper prefix of the larger.
    PrefixRelated,
    /// The words split as `common·c·lower_rest` and `common·d·upper_rest`
    /// with `c < d`.
    Split(SplitDifference),
}

/// The decomposition `u = common·lower_letter·lower_rest`,
/// `v = common·upper_letter·upper_rest` with `lower_letter < upper_letter`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitDifference {
    pub common: Word,
    pub lower_letter: Letter,
    pub upper_letter: Letter,
    pub lower_rest: Word,
    pub upper_rest: Word,
}

/// Decomposes a strictly ordered pair `u < v` at its first difference.
pub fn first_difference(
    u: &Word,
    v: &Word,
    alphabet: &OrderedAlphabet,
) -> Result<FirstDifference, LexError> {
    if lex_compare(u, v, alphabet)? != Ordering::Less {
        return Err(LexError::NotStrictlyOrdered);
    }
    let ul = u.letters();
    let vl = v.letters();
    let split = ul.iter().zip(vl).position(|(x, y)| x != y);
    Ok(match split {
        None => FirstDifference::PrefixRelated,
        Some(i) => FirstDifference::Split(SplitDifference {
            common: Word::from_letters(ul[..i].to_vec()),
            lower_letter: ul[i],
            upper_letter: vl[i],
            lower_rest: Word::from_letters(ul[i + 1..].to_vec()),
            upper_rest: Word::from_letters(vl[i + 1..].to_vec()),
        }),
    })
}

/// The two-letter alphabet `0 < 1`.
pub fn binary_alphabet() -> OrderedAlphabet {
    OrderedAlphabet::new(["0", "1"]).expect("binary alphabet is valid")
}

/// Errors from binary coding.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CodingError {
    /// The code was built for a different alphabet than the one in use.
    AlphabetMismatch,
    /// A letter is out of range for the coded alphabet.
    UnmappedLetter { rank: usize },
    /// A nonterminal name collides with a binary alphabet token.
    NonterminalClash(String),
    /// Rebuilding the encoded grammar failed.
    Grammar(GrammarError),
}

impl fmt::Display for CodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodingError::AlphabetMismatch => {
                write!(f, "binary code was built for a different alphabet")
            }
            CodingError::UnmappedLetter { rank } => {
                write!(f, "letter rank {rank} has no assigned code")
            }
            CodingError::NonterminalClash(name) => {
                write!(
                    f,
                    "nonterminal {name:?} collides with a binary alphabet token"
                )
            }
            CodingError::Grammar(e) => e.fmt(f),
        }
    }
}

impl Error for CodingError {}

impl From<GrammarError> for CodingError {
    fn from(e: GrammarError) -> CodingError {
        CodingError::Grammar(e)
    }
}

/// An order-preserving fixed-width binary code for one alphabet.
///
/// The letter of rank `r` maps to the width-`W` big-endian binary numeral of
/// `r`, where `W = ceil(log2(n))` for an `n`-letter alphabet (and `W = 1`
/// when `n = 1`). Because all codes share one width, comparing two encoded
/// words letter by letter decides blocks in step: the coding is an order
/// isomorphism from words over the source alphabet onto its image.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryCode {
    source: OrderedAlphabet,
    width: usize,
    codes: Vec<Word>,
}

impl BinaryCode {
    pub fn for_alphabet(alphabet: &OrderedAlphabet) -> BinaryCode {
        let n = alphabet.len();
        let width = if n <= 2 {
            1
        } else {
            (usize::BITS - (n - 1).leading_zeros()) as usize
        };
        let zero = Letter::from_rank(0);
        let one = Letter::from_rank(1);
        let codes = (0..n)
            .map(|r| {
                (0..width)
                    .rev()
                    .map(|bit| if r >> bit & 1 == 1 { one } else { zero })
                    .collect()
            })
            .collect();
        BinaryCode {
            source: alphabet.clone(),
            width,
            codes,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn source(&self) -> &OrderedAlphabet {
        &self.source
    }

    /// The code word (over [`binary_alphabet`]) of one letter.
    pub fn code(&self, letter: Letter) -> Result<&Word, CodingError> {
        self.codes
            .get(letter.rank())
            .ok_or(CodingError::UnmappedLetter {
                rank: letter.rank(),
            })
    }

    /// Blockwise encoding of a word; the result has `width * w.len()` letters.
    pub fn encode_word(&self, w: &Word) -> Result<Word, CodingError> {
        let mut letters = Vec::with_capacity(self.width * w.len());
        for letter in w {
            letters.extend_from_slice(self.code(letter)?.letters());
        }
        Ok(Word::from_letters(letters))
    }
}

/// Rewrites a grammar over the binary alphabet by replacing every terminal
/// with its code word. Nonterminals, the start symbol, and the production
/// structure are unchanged, so the encoded grammar generates exactly the
/// encodings of the original language.
pub fn encode_grammar(g: &Grammar, code: &BinaryCode) -> Result<Grammar, CodingError> {
    if code.source != *g.alphabet() {
        return Err(CodingError::AlphabetMismatch);
    }
    let binary = binary_alphabet();
    for id in 0..g.nonterminal_count() {
        let name = g.nonterminal_name(crate::grammar::NonterminalId::new(id));
        if binary.letter(name).is_some() {
            return Err(CodingError::NonterminalClash(name.to_owned()));
        }
    }
    let mut builder = Grammar::builder(binary.clone(), g.start_name())?;
    for p in g.productions() {
        let mut tokens: Vec<String> = Vec::new();
        for s in &p.rhs {
            match s {
                crate::grammar::Symbol::Terminal(t) => {
                    for bit in code.code(*t)? {
                        tokens.push(binary.token(bit).to_owned());
                    }
                }
                crate::grammar::Symbol::Nonterminal(x) => {
                    tokens.push(g.nonterminal_name(*x).to_owned());
                }
            }
        }
        builder.production(g.nonterminal_name(p.lhs), &tokens)?;
    }
    Ok(builder.finish())
}

/// Outcome of a bounded prefix-freeness check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrefixVerdict {
    /// No enumerated word is a proper prefix of another.
    Free,
    /// `prefix` and `extension` are both in the language window.
    Violation { prefix: Word, extension: Word },
}

/// Checks that no generated word of length at most `max_len` is a proper
/// prefix of another such word.
pub fn prefix_free_bounded(g: &Grammar, max_len: usize) -> Result<PrefixVerdict, GrammarError> {
    let words = g.enumerate_up_to(max_len)?;
    Ok(prefix_scan(&words))
}

/// Like [`prefix_free_bounded`] with an explicit enumeration cap.
pub fn prefix_free_bounded_with_cap(
    g: &Grammar,
    max_len: usize,
    cap: usize,
) -> Result<PrefixVerdict, GrammarError> {
    let words = g.enumerate_up_to_with_cap(max_len, cap)?;
    Ok(prefix_scan(&words))
}

/// Prefix scan over a lexicographically sorted, duplicate-free word list.
///
/// Adjacent pairs suffice: if `u` is a proper prefix of some later `w`, every
/// word between `u` and `w` in the order also extends `u`, so in particular
/// the immediate successor of `u` does.
pub(crate) fn prefix_scan(sorted: &[Word]) -> PrefixVerdict {
    let pairs = sorted.len().saturating_sub(1);
    match parallel::find_first_index(pairs, |i| sorted[i].is_proper_prefix_of(&sorted[i + 1])) {
        None => PrefixVerdict::Free,
        Some(i) => PrefixVerdict::Violation {
            prefix: sorted[i].clone(),
            extension: sorted[i + 1].clone(),
        },
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn abc() -> OrderedAlphabet {
        OrderedAlphabet::new(["a", "b", "c"]).unwrap()
    }

    fn w(a: &OrderedAlphabet, s: &str) -> Word {
        a.parse_word(s).unwrap()
    }

    #[test]
    fn comparison_matches_definition() {
        let a = abc();
        let cmp = |x: &str, y: &str| lex_compare(&w(&a, x), &w(&a, y), &a).unwrap();
        assert_eq!(cmp("a", "a a"), Ordering::Less, "proper prefix first");
        assert_eq!(
            cmp("a a b", "a b"),
            Ordering::Less,
            "first difference decides"
        );
        assert_eq!(cmp("a b", "b"), Ordering::Less);
        assert_eq!(cmp("c", "c"), Ordering::Equal);
        assert_eq!(cmp("b", "a c"), Ordering::Greater);
        assert_eq!(cmp("-", "a"), Ordering::Less);
    }

    pub(crate) fn all_words_up_to(a: &OrderedAlphabet, max_len: usize) -> Vec<Word> {
        let mut all = vec![Word::new()];
        let mut layer = vec![Word::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &layer {
                for letter in a.letters() {
                    let mut ext = word.clone();
                    ext.push(letter);
                    next.push(ext);
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    #[test]
    fn comparison_agrees_with_derived_word_order() {
        // Exhaustive over all words of length <= 3 on three letters.
        let a = abc();
        let all = all_words_up_to(&a, 3);
        for u in &all {
            for v in &all {
                assert_eq!(lex_compare(u, v, &a).unwrap(), u.cmp(v));
            }
        }
    }

    #[test]
    fn comparison_validates_letters() {
        let a = abc();
        let big = OrderedAlphabet::new(["a", "b", "c", "d"]).unwrap();
        let foreign = big.parse_word("d").unwrap();
        assert!(lex_compare(&foreign, &w(&a, "a"), &a).is_err());
    }

    #[test]
    fn first_difference_splits_words() {
        let a = abc();
        match first_difference(&w(&a, "a a b"), &w(&a, "a b"), &a).unwrap() {
            FirstDifference::Split(d) => {
                assert_eq!(d.common, w(&a, "a"));
                assert_eq!(a.token(d.lower_letter), "a");
                assert_eq!(a.token(d.upper_letter), "b");
                assert_eq!(d.lower_rest, w(&a, "b"));
                assert_eq!(d.upper_rest, Word::new());
            }
            other => panic!("expected a split, got {other:?}"),
        }
        assert_eq!(
            first_difference(&w(&a, "a"), &w(&a, "a a"), &a).unwrap(),
            FirstDifference::PrefixRelated
        );
        assert_eq!(
            first_difference(&w(&a, "b"), &w(&a, "a"), &a).unwrap_err(),
            LexError::NotStrictlyOrdered
        );
        assert_eq!(
            first_difference(&w(&a, "b"), &w(&a, "b"), &a).unwrap_err(),
            LexError::NotStrictlyOrdered
        );
    }

    #[test]
    fn code_widths() {
        let sizes_and_widths = [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (14, 4), (18, 5)];
        for (n, want) in sizes_and_widths {
            let tokens: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
            let a = OrderedAlphabet::new(&tokens).unwrap();
            let code = BinaryCode::for_alphabet(&a);
            assert_eq!(code.width(), want, "alphabet of {n} letters");
        }
    }

    #[test]
    fn codes_are_strictly_increasing() {
        let tokens: Vec<String> = (0..11).map(|i| format!("t{i}")).collect();
        let a = OrderedAlphabet::new(&tokens).unwrap();
        let code = BinaryCode::for_alphabet(&a);
        let binary = binary_alphabet();
        for r in 0..a.len() - 1 {
            let lo = code.code(a.letter_at(r).unwrap()).unwrap();
            let hi = code.code(a.letter_at(r + 1).unwrap()).unwrap();
            assert_eq!(lex_compare(lo, hi, &binary).unwrap(), Ordering::Less);
            assert_eq!(lo.len(), code.width());
        }
    }

    #[test]
    fn encoding_is_an_order_isomorphism_on_small_words() {
        let a = abc();
        let code = BinaryCode::for_alphabet(&a);
        let binary = binary_alphabet();
        let all = all_words_up_to(&a, 3);
        for u in &all {
            for v in &all {
                let plain = lex_compare(u, v, &a).unwrap();
                let coded = lex_compare(
                    &code.encode_word(u).unwrap(),
                    &code.encode_word(v).unwrap(),
                    &binary,
                )
                .unwrap();
                assert_eq!(plain, coded, "{u:?} vs {v:?}");
            }
        }
    }

    #[test]
    fn encode_grammar_preserves_language() {
        let g = Grammar::parse("alphabet: a b c\nstart: S\nS -> a S c | b\n").unwrap();
        let code = BinaryCode::for_alphabet(g.alphabet());
        let e = encode_grammar(&g, &code).unwrap();
        assert_eq!(e.alphabet(), &binary_alphabet());
        let plain = g.enumerate_up_to(5).unwrap();
        let encoded = e.enumerate_up_to(5 * code.width()).unwrap();
        let expected: Vec<Word> = plain.iter().map(|w| code.encode_word(w).unwrap()).collect();
        assert_eq!(encoded, expected);
    }

    #[test]
    fn encode_grammar_checks_its_inputs() {
        let g = Grammar::parse("alphabet: a\nstart: S\nS -> a\n").unwrap();
        let other = BinaryCode::for_alphabet(&abc());
        assert_eq!(
            encode_grammar(&g, &other).unwrap_err(),
            CodingError::AlphabetMismatch
        );

        let clash = Grammar::parse("alphabet: a\nstart: 0\n0 -> a\n").unwrap();
        let code = BinaryCode::for_alphabet(clash.alphabet());
        assert_eq!(
            encode_grammar(&clash, &code).unwrap_err(),
            CodingError::NonterminalClash("0".into())
        );
    }

    #[test]
    fn binary_encoding_of_binary_alphabet_is_identity() {
        let g = Grammar::parse("alphabet: 0 1\nstart: S\nS -> 0 0 S | 1 1 S | 0 1\n").unwrap();
        let code = BinaryCode::for_alphabet(g.alphabet());
        assert_eq!(code.width(), 1);
        assert_eq!(encode_grammar(&g, &code).unwrap(), g);
    }

    #[test]
    fn prefix_check_finds_violations() {
        let bad = Grammar::parse("alphabet: a b\nstart: S\nS -> a | a b\n").unwrap();
        let a = bad.alphabet().clone();
        assert_eq!(
            prefix_free_bounded(&bad, 2).unwrap(),
            PrefixVerdict::Violation {
                prefix: w(&a, "a"),
                extension: w(&a, "a b")
            }
        );

        let good = Grammar::parse("alphabet: a b\nstart: S\nS -> a S | b\n").unwrap();
        assert_eq!(prefix_free_bounded(&good, 6).unwrap(), PrefixVerdict::Free);

        let comparison =
            Grammar::parse("alphabet: 0 1\nstart: S\nS -> 0 0 S | 1 1 S | 0 1\n").unwrap();
        assert_eq!(
            prefix_free_bounded(&comparison, 8).unwrap(),
            PrefixVerdict::Free
        );
    }

    #[test]
    fn prefix_scan_agrees_with_quadratic_reference() {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a | a b | b a | b\n").unwrap();
        let words = g.enumerate_up_to(2).unwrap();
        let naive = words.iter().enumerate().find_map(|(i, u)| {
            words
                .iter()
                .skip(i + 1)
                .find(|v| u.is_proper_prefix_of(v))
                .map(|v| (u.clone(), v.clone()))
        });
        match prefix_scan(&words) {
            PrefixVerdict::Violation { prefix, extension } => {
                assert_eq!(naive, Some((prefix, extension)));
            }
            PrefixVerdict::Free => assert_eq!(naive, None),
        }
    }
}
