//! Context-free grammars over ordered alphabets.
//!
//! Productions are ε-free: every right side contains at least one symbol.
//! Grammars are written and parsed in a small line format:
//!
//! ```text
//! # comment
//! alphabet: a b
//! start: S
//! S -> a S | b
//! ```
//!
//! The first line declares the alphabet tokens in ascending order, the second
//! names the start symbol, and every further line lists the alternatives of
//! one left side. A token on a right side is a terminal exactly when it
//! appears in the alphabet line; any other token is a nonterminal. `#` starts
//! a comment that runs to the end of the line.

use std::collections::HashMap;
use std::error::Error;
use std::fmt;
use std::str::FromStr;

use crate::alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
use crate::enumerate;
use crate::recognize;
use crate::DEFAULT_WORD_CAP;

/// Maximum number of nonterminals a grammar may hold.
pub const MAX_NONTERMINALS: usize = u16::MAX as usize;

/// Index of a nonterminal inside one [`Grammar`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NonterminalId(u16);

impl NonterminalId {
    pub(crate) fn new(index: usize) -> NonterminalId {
        debug_assert!(index <= MAX_NONTERMINALS);
        NonterminalId(index as u16)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One grammar symbol: a terminal letter or a nonterminal reference.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    Terminal(Letter),
    Nonterminal(NonterminalId),
}

/// A single production `lhs -> rhs` with a non-empty right side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Production {
    pub lhs: NonterminalId,
    pub rhs: Vec<Symbol>,
}

/// Errors from grammar construction, parsing, and bounded operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GrammarError {
    /// The text did not start with an `alphabet:` line.
    MissingAlphabetLine,
    /// No `start:` line followed the alphabet line.
    MissingStartLine,
    /// A line could not be parsed; the message says why.
    Syntax { line: usize, message: String },
    /// A production right side was empty (ε productions are not allowed).
    EmptyRightSide { line: Option<usize> },
    /// An alphabet token was used as a left side or as the start symbol.
    TerminalLeftSide { token: String, line: Option<usize> },
    /// A nonterminal name is not a valid token.
    InvalidName { token: String, line: Option<usize> },
    /// More than [`MAX_NONTERMINALS`] distinct nonterminals.
    TooManyNonterminals(usize),
    /// An alphabet-level problem (bad token list, foreign letter, ...).
    Alphabet(AlphabetError),
    /// Bounded enumeration exceeded its word cap.
    EnumerationCapExceeded { cap: usize },
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |line: &Option<usize>| match line {
            Some(n) => format!(" (line {n})"),
            None => String::new(),
        };
        match self {
            GrammarError::MissingAlphabetLine => {
                write!(f, "grammar must begin with an 'alphabet:' line")
            }
            GrammarError::MissingStartLine => {
                write!(
                    f,
                    "grammar must declare a start symbol with a 'start:' line"
                )
            }
            GrammarError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            GrammarError::EmptyRightSide { line } => {
                write!(f, "empty production right side{}", at(line))
            }
            GrammarError::TerminalLeftSide { token, line } => {
                write!(
                    f,
                    "alphabet token {token:?} used as a nonterminal{}",
                    at(line)
                )
            }
            GrammarError::InvalidName { token, line } => {
                write!(f, "invalid nonterminal name {token:?}{}", at(line))
            }
            GrammarError::TooManyNonterminals(n) => {
                write!(
                    f,
                    "grammar has {n} nonterminals, more than the maximum {MAX_NONTERMINALS}"
                )
            }
            GrammarError::Alphabet(e) => e.fmt(f),
            GrammarError::EnumerationCapExceeded { cap } => {
                write!(f, "enumeration exceeded the cap of {cap} stored words")
            }
        }
    }
}

impl Error for GrammarError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        // `Display` already forwards the inner message for this variant.
        match self {
            GrammarError::Alphabet(e) => e.source(),
            _ => None,
        }
    }
}

impl From<AlphabetError> for GrammarError {
    fn from(e: AlphabetError) -> GrammarError {
        GrammarError::Alphabet(e)
    }
}

/// A context-free grammar with ε-free productions over an ordered alphabet.
#[derive(Clone, Debug)]
pub struct Grammar {
    alphabet: OrderedAlphabet,
    nonterminals: Vec<String>,
    nt_index: HashMap<String, NonterminalId>,
    start: NonterminalId,
    productions: Vec<Production>,
    prods_by_lhs: Vec<Vec<u32>>,
}

impl PartialEq for Grammar {
    fn eq(&self, other: &Grammar) -> bool {
        self.alphabet == other.alphabet
            && self.nonterminals == other.nonterminals
            && self.start == other.start
            && self.productions == other.productions
    }
}

impl Eq for Grammar {}

impl Grammar {
    /// Starts building a grammar programmatically. The start symbol is the
    /// nonterminal with index 0.
    pub fn builder(alphabet: OrderedAlphabet, start: &str) -> Result<GrammarBuilder, GrammarError> {
        GrammarBuilder::new(alphabet, start, None)
    }

    /// Parses the line format described in the module documentation.
    pub fn parse(text: &str) -> Result<Grammar, GrammarError> {
        // Strip comments and blank lines, keeping 1-based line numbers.
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let trimmed = stripped.trim();
            if !trimmed.is_empty() {
                lines.push((i + 1, trimmed));
            }
        }
        let mut it = lines.into_iter();

        let (line_no, alphabet_line) = it.next().ok_or(GrammarError::MissingAlphabetLine)?;
        let tokens = alphabet_line
            .strip_prefix("alphabet:")
            .ok_or(GrammarError::MissingAlphabetLine)?;
        let alphabet = OrderedAlphabet::new(tokens.split_whitespace())?;
        let _ = line_no;

        let (line_no, start_line) = it.next().ok_or(GrammarError::MissingStartLine)?;
        let start_field = start_line
            .strip_prefix("start:")
            .ok_or(GrammarError::MissingStartLine)?
            .trim();
        let mut start_tokens = start_field.split_whitespace();
        let start = match (start_tokens.next(), start_tokens.next()) {
            (Some(tok), None) => tok,
            _ => {
                return Err(GrammarError::Syntax {
                    line: line_no,
                    message: "start line must name exactly one symbol".into(),
                })
            }
        };

        let mut builder = GrammarBuilder::new(alphabet, start, Some(line_no))?;
        for (line_no, line) in it {
            let (lhs, rest) = line.split_once("->").ok_or_else(|| GrammarError::Syntax {
                line: line_no,
                message: "expected a production of the form 'A -> s1 s2 | t1'".into(),
            })?;
            let lhs = lhs.trim();
            if lhs.split_whitespace().count() != 1 {
                return Err(GrammarError::Syntax {
                    line: line_no,
                    message: "production left side must be a single nonterminal".into(),
                });
            }
            for alternative in rest.split('|') {
                let symbols: Vec<&str> = alternative.split_whitespace().collect();
                builder.production_at(lhs, &symbols, Some(line_no))?;
            }
        }
        Ok(builder.finish())
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn start(&self) -> NonterminalId {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.nonterminals[self.start.index()]
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn nonterminal_name(&self, id: NonterminalId) -> &str {
        &self.nonterminals[id.index()]
    }

    pub fn nonterminal(&self, name: &str) -> Option<NonterminalId> {
        self.nt_index.get(name).copied()
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    /// Productions with the given left side, in declaration order.
    pub fn productions_of(&self, id: NonterminalId) -> impl Iterator<Item = &Production> + '_ {
        self.prods_by_lhs[id.index()]
            .iter()
            .map(move |&i| &self.productions[i as usize])
    }

    /// True when every right side is a terminal string optionally followed by
    /// one trailing nonterminal.
    pub fn is_right_linear(&self) -> bool {
        self.productions.iter().all(|p| {
            p.rhs[..p.rhs.len() - 1]
                .iter()
                .all(|s| matches!(s, Symbol::Terminal(_)))
        })
    }

    /// Removes useless symbols: keeps exactly the nonterminals that are both
    /// reachable from the start symbol and generating, except that the start
    /// symbol itself is always kept. If the language is empty the result has
    /// no productions at all.
    pub fn trim(&self) -> Grammar {
        let n = self.nonterminals.len();

        let considered: Vec<&Production> = self.productions.iter().collect();
        let mut generating = vec![false; n];
        loop {
            let mut changed = false;
            for p in &considered {
                if generating[p.lhs.index()] {
                    continue;
                }
                let ok = p.rhs.iter().all(|s| match s {
                    Symbol::Terminal(_) => true,
                    Symbol::Nonterminal(x) => generating[x.index()],
                });
                if ok {
                    generating[p.lhs.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // Productions usable in some terminating derivation.
        let usable: Vec<&Production> = self
            .productions
            .iter()
            .filter(|p| {
                p.rhs.iter().all(|s| match s {
                    Symbol::Terminal(_) => true,
                    Symbol::Nonterminal(x) => generating[x.index()],
                })
            })
            .collect();

        let mut reachable = vec![false; n];
        reachable[self.start.index()] = true;
        loop {
            let mut changed = false;
            for p in &usable {
                if !reachable[p.lhs.index()] {
                    continue;
                }
                for s in &p.rhs {
                    if let Symbol::Nonterminal(x) = s {
                        if !reachable[x.index()] {
                            reachable[x.index()] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let keep: Vec<bool> = (0..n)
            .map(|i| (generating[i] && reachable[i]) || i == self.start.index())
            .collect();
        let mut remap: Vec<Option<NonterminalId>> = vec![None; n];
        let mut nonterminals = Vec::new();
        for (i, name) in self.nonterminals.iter().enumerate() {
            if keep[i] {
                remap[i] = Some(NonterminalId::new(nonterminals.len()));
                nonterminals.push(name.clone());
            }
        }

        let productions: Vec<Production> = usable
            .iter()
            .filter(|p| reachable[p.lhs.index()] && generating[p.lhs.index()])
            .map(|p| Production {
                lhs: remap[p.lhs.index()].unwrap(),
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::Terminal(t) => Symbol::Terminal(*t),
                        Symbol::Nonterminal(x) => Symbol::Nonterminal(remap[x.index()].unwrap()),
                    })
                    .collect(),
            })
            .collect();

        let nt_index = nonterminals
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), NonterminalId::new(i)))
            .collect();
        let prods_by_lhs = index_by_lhs(nonterminals.len(), &productions);
        Grammar {
            alphabet: self.alphabet.clone(),
            nonterminals,
            nt_index,
            start: remap[self.start.index()].unwrap(),
            productions,
            prods_by_lhs,
        }
    }

    /// Chart-based recognition: does the grammar derive `w` from the start
    /// symbol? Works on any grammar of this crate (no normal form needed).
    pub fn recognize(&self, w: &Word) -> Result<bool, GrammarError> {
        self.alphabet.check_word(w)?;
        Ok(recognize::earley_recognize(self, w))
    }

    /// All generated words of length at most `max_len`, in ascending
    /// lexicographic order, without duplicates.
    pub fn enumerate_up_to(&self, max_len: usize) -> Result<Vec<Word>, GrammarError> {
        enumerate::enumerate_up_to(self, max_len, DEFAULT_WORD_CAP)
    }

    /// Like [`Grammar::enumerate_up_to`] with an explicit cap on the total
    /// number of stored words.
    pub fn enumerate_up_to_with_cap(
        &self,
        max_len: usize,
        cap: usize,
    ) -> Result<Vec<Word>, GrammarError> {
        enumerate::enumerate_up_to(self, max_len, cap)
    }

    fn symbol_name(&self, s: &Symbol) -> &str {
        match s {
            Symbol::Terminal(t) => self.alphabet.token(*t),
            Symbol::Nonterminal(x) => &self.nonterminals[x.index()],
        }
    }
}

impl fmt::Display for Grammar {
    /// Writes the grammar in its line format. Consecutive productions with
    /// the same left side share a line, so parsing the output yields an equal
    /// grammar (same symbol numbering, same production order).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alphabet:")?;
        for token in self.alphabet.tokens() {
            write!(f, " {token}")?;
        }
        writeln!(f)?;
        writeln!(f, "start: {}", self.start_name())?;
        let mut i = 0;
        while i < self.productions.len() {
            let lhs = self.productions[i].lhs;
            write!(f, "{} ->", self.nonterminals[lhs.index()])?;
            let mut first = true;
            while i < self.productions.len() && self.productions[i].lhs == lhs {
                if !first {
                    write!(f, " |")?;
                }
                first = false;
                for s in &self.productions[i].rhs {
                    write!(f, " {}", self.symbol_name(s))?;
                }
                i += 1;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Grammar, GrammarError> {
        Grammar::parse(s)
    }
}

fn index_by_lhs(nonterminal_count: usize, productions: &[Production]) -> Vec<Vec<u32>> {
    let mut by_lhs = vec![Vec::new(); nonterminal_count];
    for (i, p) in productions.iter().enumerate() {
        by_lhs[p.lhs.index()].push(i as u32);
    }
    by_lhs
}

/// Incremental construction of a [`Grammar`].
///
/// Right-side tokens are classified exactly like the file format: a token is
/// a terminal when it is in the alphabet and a nonterminal otherwise.
/// Nonterminals are declared by use; the start symbol always has index 0.
pub struct GrammarBuilder {
    alphabet: OrderedAlphabet,
    nonterminals: Vec<String>,
    nt_index: HashMap<String, NonterminalId>,
    productions: Vec<Production>,
}

impl GrammarBuilder {
    fn new(
        alphabet: OrderedAlphabet,
        start: &str,
        line: Option<usize>,
    ) -> Result<GrammarBuilder, GrammarError> {
        let mut builder = GrammarBuilder {
            alphabet,
            nonterminals: Vec::new(),
            nt_index: HashMap::new(),
            productions: Vec::new(),
        };
        builder.declare(start, line)?;
        Ok(builder)
    }

    fn declare(&mut self, name: &str, line: Option<usize>) -> Result<NonterminalId, GrammarError> {
        if let Some(&id) = self.nt_index.get(name) {
            return Ok(id);
        }
        if self.alphabet.letter(name).is_some() {
            return Err(GrammarError::TerminalLeftSide {
                token: name.to_owned(),
                line,
            });
        }
        if !crate::alphabet::valid_token(name) {
            return Err(GrammarError::InvalidName {
                token: name.to_owned(),
                line,
            });
        }
        if self.nonterminals.len() == MAX_NONTERMINALS {
            return Err(GrammarError::TooManyNonterminals(
                self.nonterminals.len() + 1,
            ));
        }
        let id = NonterminalId::new(self.nonterminals.len());
        self.nonterminals.push(name.to_owned());
        self.nt_index.insert(name.to_owned(), id);
        Ok(id)
    }

    /// Adds one production. Tokens in `rhs` that are alphabet letters become
    /// terminals; all others become nonterminals.
    pub fn production<S: AsRef<str>>(&mut self, lhs: &str, rhs: &[S]) -> Result<(), GrammarError> {
        self.production_at(lhs, rhs, None)
    }

    fn production_at<S: AsRef<str>>(
        &mut self,
        lhs: &str,
        rhs: &[S],
        line: Option<usize>,
    ) -> Result<(), GrammarError> {
        if self.alphabet.letter(lhs).is_some() {
            return Err(GrammarError::TerminalLeftSide {
                token: lhs.to_owned(),
                line,
            });
        }
        let lhs = self.declare(lhs, line)?;
        if rhs.is_empty() {
            return Err(GrammarError::EmptyRightSide { line });
        }
        let mut symbols = Vec::with_capacity(rhs.len());
        for token in rhs {
            let token = token.as_ref();
            match self.alphabet.letter(token) {
                Some(letter) => symbols.push(Symbol::Terminal(letter)),
                None => symbols.push(Symbol::Nonterminal(self.declare(token, line)?)),
            }
        }
        self.productions.push(Production { lhs, rhs: symbols });
        Ok(())
    }

    pub fn finish(self) -> Grammar {
        let prods_by_lhs = index_by_lhs(self.nonterminals.len(), &self.productions);
        Grammar {
            alphabet: self.alphabet,
            nonterminals: self.nonterminals,
            nt_index: self.nt_index,
            start: NonterminalId::new(0),
            productions: self.productions,
            prods_by_lhs,
        }
    }
}
