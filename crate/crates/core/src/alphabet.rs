//! Ordered alphabets, letters, and words.
//!
//! An [`OrderedAlphabet`] is a finite, totally ordered set of printable
//! tokens; the position of a token in the declaration list is its rank and
//! defines the letter order used everywhere else in the crate. A [`Letter`]
//! is an index into one alphabet and a [`Word`] is a finite letter sequence.
//!
//! `Word` derives `Ord` on the underlying letter vector, which coincides with
//! the lexicographic order on words: a proper prefix precedes its extensions,
//! and otherwise the first differing letter decides.

use std::collections::HashMap;
use std::error::Error;
use std::fmt;

/// Maximum number of letters an alphabet may hold.
pub const MAX_ALPHABET_LEN: usize = u16::MAX as usize;

/// Token used on input and output to denote the empty word.
pub const EMPTY_WORD_TOKEN: &str = "-";

/// A letter of some [`OrderedAlphabet`], identified by its rank.
///
/// Letters carry no reference to their alphabet; operations that need token
/// names or bounds checking take the alphabet as an explicit argument.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(u16);

impl Letter {
    pub(crate) fn from_rank(rank: usize) -> Letter {
        debug_assert!(rank <= MAX_ALPHABET_LEN);
        Letter(rank as u16)
    }

    /// Position of this letter in its alphabet's order, starting at 0.
    pub fn rank(self) -> usize {
        self.0 as usize
    }
}

/// A finite sequence of letters.
///
/// The derived `Ord` is the lexicographic word order: comparison proceeds
/// letter by letter and a word that runs out first (a proper prefix) compares
/// smaller.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && other.starts_with(self)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word(letters)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = Letter;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Letter>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Errors from alphabet construction and word parsing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlphabetError {
    /// An alphabet must contain at least one token.
    Empty,
    /// A token was empty, contained whitespace/control characters or `#`,
    /// or collided with reserved punctuation (`-`, `|`, `->`).
    InvalidToken(String),
    /// The same token was declared twice.
    DuplicateToken(String),
    /// More than [`MAX_ALPHABET_LEN`] tokens were declared.
    TooManyTokens(usize),
    /// A word literal referenced a token that is not in the alphabet.
    UnknownToken(String),
    /// A letter's rank exceeds the size of the alphabet it is used with.
    LetterOutOfRange { rank: usize, size: usize },
}

impl fmt::Display for AlphabetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphabetError::Empty => write!(f, "alphabet must contain at least one token"),
            AlphabetError::InvalidToken(t) => write!(f, "invalid alphabet token {t:?}"),
            AlphabetError::DuplicateToken(t) => write!(f, "duplicate alphabet token {t:?}"),
            AlphabetError::TooManyTokens(n) => {
                write!(
                    f,
                    "alphabet has {n} tokens, more than the maximum {MAX_ALPHABET_LEN}"
                )
            }
            AlphabetError::UnknownToken(t) => write!(f, "token {t:?} is not in the alphabet"),
            AlphabetError::LetterOutOfRange { rank, size } => {
                write!(
                    f,
                    "letter rank {rank} out of range for alphabet of size {size}"
                )
            }
        }
    }
}

impl Error for AlphabetError {}

/// A finite, totally ordered alphabet of printable tokens.
///
/// The declaration order of the tokens is the letter order: the token at
/// position `r` is the letter of rank `r`, and smaller rank means smaller
/// letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderedAlphabet {
    tokens: Vec<String>,
    rank: HashMap<String, u16>,
}

pub(crate) fn valid_token(token: &str) -> bool {
    !token.is_empty()
        && token != EMPTY_WORD_TOKEN
        && token != "|"
        && token != "->"
        && token
            .chars()
            .all(|c| !c.is_whitespace() && !c.is_control() && c != '#' && c != ',')
}

impl OrderedAlphabet {
    /// Builds an alphabet from tokens in ascending order.
    pub fn new<S: AsRef<str>, I: IntoIterator<Item = S>>(
        tokens: I,
    ) -> Result<OrderedAlphabet, AlphabetError> {
        let tokens: Vec<String> = tokens.into_iter().map(|t| t.as_ref().to_owned()).collect();
        if tokens.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if tokens.len() > MAX_ALPHABET_LEN {
            return Err(AlphabetError::TooManyTokens(tokens.len()));
        }
        let mut rank = HashMap::with_capacity(tokens.len());
        for (r, token) in tokens.iter().enumerate() {
            if !valid_token(token) {
                return Err(AlphabetError::InvalidToken(token.clone()));
            }
            if rank.insert(token.clone(), r as u16).is_some() {
                return Err(AlphabetError::DuplicateToken(token.clone()));
            }
        }
        Ok(OrderedAlphabet { tokens, rank })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All letters in ascending order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.tokens.len()).map(Letter::from_rank)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Looks a letter up by token.
    pub fn letter(&self, token: &str) -> Option<Letter> {
        self.rank.get(token).map(|&r| Letter(r))
    }

    /// The letter of the given rank, if the alphabet is that large.
    pub fn letter_at(&self, rank: usize) -> Option<Letter> {
        (rank < self.tokens.len()).then(|| Letter::from_rank(rank))
    }

    /// Token of a letter. Panics if the letter is out of range; use
    /// [`OrderedAlphabet::check_word`] first for untrusted input.
    pub fn token(&self, letter: Letter) -> &str {
        &self.tokens[letter.rank()]
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.rank() < self.tokens.len()
    }

    /// Verifies that every letter of `w` is in range for this alphabet.
    pub fn check_word(&self, w: &Word) -> Result<(), AlphabetError> {
        for letter in w {
            if !self.contains(letter) {
                return Err(AlphabetError::LetterOutOfRange {
                    rank: letter.rank(),
                    size: self.tokens.len(),
                });
            }
        }
        Ok(())
    }

    /// Parses a word literal: tokens separated by whitespace and/or commas,
    /// or the single token `-` for the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, AlphabetError> {
        let trimmed = text.trim();
        if trimmed == EMPTY_WORD_TOKEN {
            return Ok(Word::new());
        }
        let mut letters = Vec::new();
        for token in trimmed.split(|c: char| c.is_whitespace() || c == ',') {
            if token.is_empty() {
                continue;
            }
            match self.letter(token) {
                Some(letter) => letters.push(letter),
                None => return Err(AlphabetError::UnknownToken(token.to_owned())),
            }
        }
        Ok(Word(letters))
    }

    /// Renders a word as space-separated tokens, or `-` if it is empty.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return EMPTY_WORD_TOKEN.to_owned();
        }
        let mut out = String::new();
        for (i, letter) in w.into_iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(self.token(letter));
        }
        out
    }
}
