//! Word correspondence instances and their compilation into prefix grammars.
//!
//! An instance is a finite list of pairs `(α_i, β_i)` of non-empty words over
//! `{a, b}`. A *solution* is a non-empty index sequence `i_1 … i_m` with
//! `α_{i_1}⋯α_{i_m} = β_{i_1}⋯β_{i_m}`. Solvability is undecidable in
//! general; [`PcpInstance::brute_force_solve`] searches exhaustively up to a
//! depth bound and recognizes when the search space is exhausted early, which
//! proves unsolvability outright.
//!
//! [`ReductionArtifacts`] compiles an instance of size `n` into a context-free
//! grammar over an ordered alphabet of `4n + 10` letters whose language is
//! densely ordered by the lexicographic order exactly when the instance has
//! no solution. A solution produces a *gap pair*: two words adjacent in the
//! language order with nothing in between ([`ReductionArtifacts::gap_witness`],
//! screened empirically by [`ReductionArtifacts::certify_adjacent`]). In the
//! other direction, every word of the language has explicit order neighbors
//! above and below ([`ReductionArtifacts::neighbor_witnesses`]), so the order
//! never has endpoints.

use std::collections::HashSet;
use std::error::Error;
use std::fmt;

use crate::alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
use crate::grammar::{Grammar, GrammarError};
use crate::lex::{prefix_scan, PrefixVerdict};
use crate::parallel;

/// Errors from instance parsing, solving, and witness construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PcpError {
    /// The instance has no pairs.
    NoPairs,
    /// A line of an instance file does not hold exactly two words.
    BadPairLine {
        line: usize,
    },
    /// A word contains a letter other than `a` or `b`.
    BadLetter {
        ch: char,
        line: Option<usize>,
    },
    /// An `α_i` or `β_i` is empty.
    EmptyWord {
        line: Option<usize>,
    },
    /// A solution index is outside `1..=n`.
    IndexOutOfRange {
        index: usize,
        size: usize,
    },
    /// A solution or index sequence is empty.
    EmptySolution,
    /// The index sequence does not equalize the two sides.
    NotASolution {
        alpha: String,
        beta: String,
    },
    /// A claimed gap pair does not have the required shape.
    MalformedWitnessPair(String),
    /// The bounded prefix-freeness premise of a certificate failed.
    PrefixPremiseFailed {
        prefix: String,
        extension: String,
    },
    /// A word expected in the reduction language is not generated.
    NotInLanguage(String),
    /// A generated word does not decompose as its shape requires.
    Undecomposable(String),
    /// An internal consistency check failed; this indicates a bug.
    Internal(String),
    Grammar(GrammarError),
    Alphabet(AlphabetError),
}

impl fmt::Display for PcpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |line: &Option<usize>| match line {
            Some(l) => format!(" on line {l}"),
            None => String::new(),
        };
        match self {
            PcpError::NoPairs => write!(f, "instance has no pairs"),
            PcpError::BadPairLine { line } => {
                write!(f, "line {line}: expected two words separated by whitespace")
            }
            PcpError::BadLetter { ch, line } => {
                write!(
                    f,
                    "invalid letter {ch:?}{}: words use only a and b",
                    at(line)
                )
            }
            PcpError::EmptyWord { line } => {
                write!(
                    f,
                    "empty word{}: both sides of a pair must be non-empty",
                    at(line)
                )
            }
            PcpError::IndexOutOfRange { index, size } => {
                write!(
                    f,
                    "index {index} out of range for {size} pairs (indices are 1-based)"
                )
            }
            PcpError::EmptySolution => write!(f, "index sequence is empty"),
            PcpError::NotASolution { alpha, beta } => {
                write!(
                    f,
                    "sides disagree: alpha side spells {alpha}, beta side spells {beta}"
                )
            }
            PcpError::MalformedWitnessPair(msg) => write!(f, "malformed witness pair: {msg}"),
            PcpError::PrefixPremiseFailed { prefix, extension } => write!(
                f,
                "prefix-freeness premise failed: '{prefix}' and its extension '{extension}' \
                 are both generated"
            ),
            PcpError::NotInLanguage(w) => {
                write!(f, "word '{w}' is not generated by the reduction grammar")
            }
            PcpError::Undecomposable(w) => {
                write!(
                    f,
                    "word '{w}' does not decompose as its final letter requires"
                )
            }
            PcpError::Internal(msg) => write!(f, "internal consistency check failed: {msg}"),
            PcpError::Grammar(e) => e.fmt(f),
            PcpError::Alphabet(e) => e.fmt(f),
        }
    }
}

impl Error for PcpError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        // `Display` already forwards the inner message for these variants.
        match self {
            PcpError::Grammar(e) => e.source(),
            PcpError::Alphabet(e) => e.source(),
            _ => None,
        }
    }
}

impl From<GrammarError> for PcpError {
    fn from(e: GrammarError) -> PcpError {
        PcpError::Grammar(e)
    }
}

impl From<AlphabetError> for PcpError {
    fn from(e: AlphabetError) -> PcpError {
        PcpError::Alphabet(e)
    }
}

/// A letter of the two-letter base alphabet, ordered `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AbLetter {
    A,
    B,
}

impl AbLetter {
    pub fn token(self) -> &'static str {
        match self {
            AbLetter::A => "a",
            AbLetter::B => "b",
        }
    }
}

impl fmt::Display for AbLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A word over `{a, b}`, written without separators (`abba`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct AbWord(Vec<AbLetter>);

impl AbWord {
    pub fn new() -> AbWord {
        AbWord(Vec::new())
    }

    /// Parses a run of `a`/`b` characters; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<AbWord, PcpError> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                'a' => letters.push(AbLetter::A),
                'b' => letters.push(AbLetter::B),
                _ => return Err(PcpError::BadLetter { ch, line: None }),
            }
        }
        Ok(AbWord(letters))
    }

    pub fn letters(&self) -> &[AbLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: AbLetter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &AbWord) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn reversed(&self) -> AbWord {
        AbWord(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for AbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for l in &self.0 {
            f.write_str(l.token())?;
        }
        Ok(())
    }
}

impl FromIterator<AbLetter> for AbWord {
    fn from_iter<I: IntoIterator<Item = AbLetter>>(iter: I) -> AbWord {
        AbWord(iter.into_iter().collect())
    }
}

/// One pair `(α_i, β_i)` of an instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PcpPair {
    pub alpha: AbWord,
    pub beta: AbWord,
}

/// A word correspondence instance: a non-empty list of pairs of non-empty
/// words over `{a, b}`. Pairs are addressed by 1-based index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PcpInstance {
    pairs: Vec<PcpPair>,
}

impl PcpInstance {
    pub fn new(pairs: Vec<PcpPair>) -> Result<PcpInstance, PcpError> {
        if pairs.is_empty() {
            return Err(PcpError::NoPairs);
        }
        for p in &pairs {
            if p.alpha.is_empty() || p.beta.is_empty() {
                return Err(PcpError::EmptyWord { line: None });
            }
        }
        Ok(PcpInstance { pairs })
    }

    /// Parses the instance file format: one pair per line as
    /// `<alpha> <beta>`, `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<PcpInstance, PcpError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(PcpError::BadPairLine { line });
            }
            let parse_side = |s: &str| {
                AbWord::parse(s).map_err(|e| match e {
                    PcpError::BadLetter { ch, .. } => PcpError::BadLetter {
                        ch,
                        line: Some(line),
                    },
                    other => other,
                })
            };
            let alpha = parse_side(fields[0])?;
            let beta = parse_side(fields[1])?;
            if alpha.is_empty() || beta.is_empty() {
                return Err(PcpError::EmptyWord { line: Some(line) });
            }
            pairs.push(PcpPair { alpha, beta });
        }
        if pairs.is_empty() {
            return Err(PcpError::NoPairs);
        }
        Ok(PcpInstance { pairs })
    }

    /// Number of pairs `n`.
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[PcpPair] {
        &self.pairs
    }

    /// The pair at a 1-based index.
    pub fn pair(&self, index: usize) -> Result<&PcpPair, PcpError> {
        if index == 0 || index > self.pairs.len() {
            return Err(PcpError::IndexOutOfRange {
                index,
                size: self.pairs.len(),
            });
        }
        Ok(&self.pairs[index - 1])
    }

    fn concat(&self, indices: &[usize], side: Side) -> Result<AbWord, PcpError> {
        let mut out = AbWord::new();
        for &i in indices {
            let pair = self.pair(i)?;
            out.extend_from(match side {
                Side::Alpha => &pair.alpha,
                Side::Beta => &pair.beta,
            });
        }
        Ok(out)
    }

    /// Concatenation `α_{i_1}⋯α_{i_m}` of the alpha side.
    pub fn alpha_concat(&self, indices: &[usize]) -> Result<AbWord, PcpError> {
        self.concat(indices, Side::Alpha)
    }

    /// Concatenation `β_{i_1}⋯β_{i_m}` of the beta side.
    pub fn beta_concat(&self, indices: &[usize]) -> Result<AbWord, PcpError> {
        self.concat(indices, Side::Beta)
    }

    /// Checks that an index sequence is a solution.
    pub fn verify_solution(&self, s: &Solution) -> Result<(), PcpError> {
        let alpha = self.alpha_concat(s.indices())?;
        let beta = self.beta_concat(s.indices())?;
        if alpha != beta {
            return Err(PcpError::NotASolution {
                alpha: alpha.to_string(),
                beta: beta.to_string(),
            });
        }
        Ok(())
    }

    /// Breadth-first search for a solution of at most `max_depth` indices.
    ///
    /// Search states are overhangs (the unmatched tail of the longer side);
    /// two index sequences with the same overhang have the same futures, so
    /// each overhang is explored once, from its first occurrence in
    /// breadth-first order. The returned solution is therefore the shortest
    /// one, and the lexicographically least index sequence among the
    /// shortest. When the frontier empties before the depth bound, no
    /// solution exists at any depth and the outcome says so.
    pub fn brute_force_solve(&self, max_depth: usize) -> SearchOutcome {
        let mut visited: HashSet<Overhang> = HashSet::new();
        // The root: nothing matched yet, empty overhang on the alpha side.
        let root = Overhang {
            side: Side::Alpha,
            tail: AbWord::new(),
        };
        visited.insert(root.clone());
        let mut frontier: Vec<(Vec<usize>, Overhang)> = vec![(Vec::new(), root)];

        for _depth in 1..=max_depth {
            let children = parallel::map_indexed(frontier.len(), |i| {
                let (indices, overhang) = &frontier[i];
                let mut out = Vec::with_capacity(self.pairs.len());
                for (k, pair) in self.pairs.iter().enumerate() {
                    if let Some(next) = overhang.extend(&pair.alpha, &pair.beta) {
                        let mut seq = indices.clone();
                        seq.push(k + 1);
                        out.push((seq, next));
                    }
                }
                out
            });
            let mut next_frontier = Vec::new();
            for group in children {
                for (seq, overhang) in group {
                    if overhang.tail.is_empty() {
                        return SearchOutcome::Solution(
                            Solution::new(seq).expect("extended sequences are non-empty"),
                        );
                    }
                    if visited.insert(overhang.clone()) {
                        next_frontier.push((seq, overhang));
                    }
                }
            }
            if next_frontier.is_empty() {
                return SearchOutcome::NoneFound {
                    max_depth,
                    exhausted: true,
                };
            }
            frontier = next_frontier;
        }
        SearchOutcome::NoneFound {
            max_depth,
            exhausted: false,
        }
    }
}

impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            writeln!(f, "{} {}", p.alpha, p.beta)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Side {
    Alpha,
    Beta,
}

/// The unmatched tail of the longer side during the solution search. The
/// `side` names which side is ahead; the empty tail with `side == Alpha`
/// doubles as the initial state.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Overhang {
    side: Side,
    tail: AbWord,
}

impl Overhang {
    /// Appends one pair; `None` when the sides conflict.
    fn extend(&self, alpha: &AbWord, beta: &AbWord) -> Option<Overhang> {
        // The ahead side's pending tail extends by its own word; the behind
        // side must consume the combined string letter by letter.
        let (ahead_tail, behind_word, ahead_word) = match self.side {
            Side::Alpha => (&self.tail, beta, alpha),
            Side::Beta => (&self.tail, alpha, beta),
        };
        let mut combined: Vec<AbLetter> = Vec::with_capacity(ahead_tail.len() + ahead_word.len());
        combined.extend_from_slice(ahead_tail.letters());
        combined.extend_from_slice(ahead_word.letters());
        let matched = behind_word.len().min(combined.len());
        if combined[..matched] != behind_word.letters()[..matched] {
            return None;
        }
        if behind_word.len() <= combined.len() {
            Some(Overhang {
                side: self.side,
                tail: combined[matched..].iter().copied().collect(),
            })
        } else {
            // The behind side overtook: the overhang flips sides.
            Some(Overhang {
                side: match self.side {
                    Side::Alpha => Side::Beta,
                    Side::Beta => Side::Alpha,
                },
                tail: behind_word.letters()[matched..].iter().copied().collect(),
            })
        }
    }
}

/// A candidate solution: a non-empty sequence of 1-based pair indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution(Vec<usize>);

impl Solution {
    pub fn new(indices: Vec<usize>) -> Result<Solution, PcpError> {
        if indices.is_empty() {
            return Err(PcpError::EmptySolution);
        }
        Ok(Solution(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{idx}")?;
        }
        Ok(())
    }
}

/// Result of the bounded solution search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SearchOutcome {
    Solution(Solution),
    /// No solution with at most `max_depth` indices. When `exhausted` is
    /// true the frontier emptied early, so no solution exists at any depth.
    NoneFound {
        max_depth: usize,
        exhausted: bool,
    },
}

/// How a letter of the reduction alphabet is classified.
///
/// The alphabet for an instance of size `n` interleaves, for each
/// `j ∈ 1..=n+2`, a block `c_j < d_{j,0} < d_{j,1} < d_{j,2}`, followed by
/// the two closing letters `cent < dollar`. The first `n` of the `c_j` are
/// the index letters `1..n`; `c_{n+1}` and `c_{n+2}` are `a` and `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeltaClass {
    /// `c_j` for `j ∈ 1..=n+2` (an index letter when `j ≤ n`, else `a`/`b`).
    C(usize),
    /// `d_{j,k}` for `j ∈ 1..=n+2`, `k ∈ 0..=2`.
    D {
        j: usize,
        k: usize,
    },
    Cent,
    Dollar,
}

/// The compiled reduction: ordered alphabet, prefix grammar, and helpers for
/// building and checking the witnesses the construction promises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionArtifacts {
    instance: PcpInstance,
    delta: OrderedAlphabet,
    grammar: Grammar,
    /// `c[j-1]` for `j ∈ 1..=n+2`.
    c: Vec<Letter>,
    /// `d[j-1][k]` for `j ∈ 1..=n+2`, `k ∈ 0..=2`.
    d: Vec<[Letter; 3]>,
    cent: Letter,
    dollar: Letter,
}

impl ReductionArtifacts {
    /// Compiles an instance of size `n` into its reduction grammar over
    /// `4n + 10` letters with `9n + 13` productions.
    pub fn new(instance: PcpInstance) -> Result<ReductionArtifacts, PcpError> {
        let n = instance.size();
        let delta = build_delta_alphabet(n)?;
        let c: Vec<Letter> = (0..n + 2)
            .map(|j| delta.letter_at(4 * j).expect("block start"))
            .collect();
        let d: Vec<[Letter; 3]> = (0..n + 2)
            .map(|j| {
                [
                    delta.letter_at(4 * j + 1).expect("d0"),
                    delta.letter_at(4 * j + 2).expect("d1"),
                    delta.letter_at(4 * j + 3).expect("d2"),
                ]
            })
            .collect();
        let cent = delta.letter("cent").expect("cent is in the alphabet");
        let dollar = delta.letter("dollar").expect("dollar is in the alphabet");

        let mut b = Grammar::builder(delta.clone(), "S")?;
        b.production("S", &["A", "cent"])?;
        b.production("S", &["B", "dollar"])?;
        b.production("S", &["C"])?;
        let rev_tokens = |w: &AbWord| -> Vec<String> {
            w.letters()
                .iter()
                .rev()
                .map(|l| l.token().to_owned())
                .collect()
        };
        for (i, pair) in instance.pairs().iter().enumerate() {
            let index_token = delta.token(c[i]).to_owned();
            let tail = rev_tokens(&pair.alpha);
            let mut rhs = vec![index_token.clone(), "A".to_owned()];
            rhs.extend(tail.iter().cloned());
            b.production("A", &rhs)?;
            let mut rhs = vec![index_token];
            rhs.extend(tail);
            b.production("A", &rhs)?;
        }
        for (i, pair) in instance.pairs().iter().enumerate() {
            let index_token = delta.token(c[i]).to_owned();
            let tail = rev_tokens(&pair.beta);
            let mut rhs = vec![index_token.clone(), "B".to_owned()];
            rhs.extend(tail.iter().cloned());
            b.production("B", &rhs)?;
            let mut rhs = vec![index_token];
            rhs.extend(tail);
            b.production("B", &rhs)?;
        }
        for &cj in &c {
            b.production("C", &[delta.token(cj), "C"])?;
        }
        for j in 1..=n + 2 {
            b.production("C", &[format!("D{j}")])?;
        }
        for j in 1..=n + 2 {
            let name = format!("D{j}");
            let block = &d[j - 1];
            b.production(&name, &[delta.token(block[0]).to_owned(), name.clone()])?;
            b.production(&name, &[delta.token(block[2]).to_owned(), name.clone()])?;
            b.production(&name, &[delta.token(block[1]).to_owned()])?;
        }
        let grammar = b.finish();
        debug_assert_eq!(grammar.productions().len(), 9 * n + 13);

        Ok(ReductionArtifacts {
            instance,
            delta,
            grammar,
            c,
            d,
            cent,
            dollar,
        })
    }

    pub fn instance(&self) -> &PcpInstance {
        &self.instance
    }

    pub fn delta(&self) -> &OrderedAlphabet {
        &self.delta
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    /// Instance size `n`.
    pub fn size(&self) -> usize {
        self.instance.size()
    }

    pub fn cent(&self) -> Letter {
        self.cent
    }

    pub fn dollar(&self) -> Letter {
        self.dollar
    }

    /// The index letter for a 1-based pair index.
    pub fn index_letter(&self, index: usize) -> Result<Letter, PcpError> {
        if index == 0 || index > self.size() {
            return Err(PcpError::IndexOutOfRange {
                index,
                size: self.size(),
            });
        }
        Ok(self.c[index - 1])
    }

    /// The letter spelling `a` or `b` inside the reduction alphabet.
    pub fn ab_letter(&self, l: AbLetter) -> Letter {
        match l {
            AbLetter::A => self.c[self.size()],
            AbLetter::B => self.c[self.size() + 1],
        }
    }

    /// The letter `d_{j,k}` for `j ∈ 1..=n+2`, `k ∈ 0..=2`.
    pub fn d_letter(&self, j: usize, k: usize) -> Letter {
        self.d[j - 1][k]
    }

    /// Classifies a letter of the reduction alphabet.
    pub fn classify(&self, letter: Letter) -> Option<DeltaClass> {
        let rank = letter.rank();
        let blocks = 4 * (self.size() + 2);
        if rank < blocks {
            let j = rank / 4 + 1;
            return Some(match rank % 4 {
                0 => DeltaClass::C(j),
                k => DeltaClass::D { j, k: k - 1 },
            });
        }
        match rank - blocks {
            0 => Some(DeltaClass::Cent),
            1 => Some(DeltaClass::Dollar),
            _ => None,
        }
    }

    fn side_word(&self, indices: &[usize], side: Side) -> Result<Word, PcpError> {
        if indices.is_empty() {
            return Err(PcpError::EmptySolution);
        }
        let concat = self.instance.concat(indices, side)?;
        let mut letters = Vec::with_capacity(indices.len() + concat.len() + 1);
        for &i in indices {
            letters.push(self.index_letter(i)?);
        }
        letters.extend(concat.letters().iter().rev().map(|&l| self.ab_letter(l)));
        letters.push(match side {
            Side::Alpha => self.cent,
            Side::Beta => self.dollar,
        });
        Ok(Word::from_letters(letters))
    }

    /// The alpha-side word `i_1 … i_m · rev(α_{i_1}⋯α_{i_m}) · cent`.
    pub fn alpha_word(&self, indices: &[usize]) -> Result<Word, PcpError> {
        self.side_word(indices, Side::Alpha)
    }

    /// The beta-side word `i_1 … i_m · rev(β_{i_1}⋯β_{i_m}) · dollar`.
    pub fn beta_word(&self, indices: &[usize]) -> Result<Word, PcpError> {
        self.side_word(indices, Side::Beta)
    }

    /// The gap pair of a verified solution: two generated words that differ
    /// only in their final letter (`cent` vs. `dollar`), which is adjacent in
    /// the alphabet order. No generated word lies strictly between them, so
    /// the language order is not dense.
    pub fn gap_witness(&self, s: &Solution) -> Result<(Word, Word), PcpError> {
        self.instance.verify_solution(s)?;
        Ok((self.alpha_word(s.indices())?, self.beta_word(s.indices())?))
    }

    /// Screens a claimed gap pair against every generated word of length at
    /// most `max_len`.
    ///
    /// The certificate records the three checked premises: the pair differs
    /// exactly in its adjacent final letters, the generated words within the
    /// bound form an antichain under the prefix order, and none of them lies
    /// strictly between the pair. A strictly-between word refutes the claim.
    pub fn certify_adjacent(
        &self,
        lower: &Word,
        upper: &Word,
        max_len: usize,
    ) -> Result<AdjacencyOutcome, PcpError> {
        self.delta.check_word(lower)?;
        self.delta.check_word(upper)?;
        let (Some((&last_l, body_l)), Some((&last_u, body_u))) =
            (lower.letters().split_last(), upper.letters().split_last())
        else {
            return Err(PcpError::MalformedWitnessPair(
                "words must be non-empty".into(),
            ));
        };
        if last_l != self.cent || last_u != self.dollar {
            return Err(PcpError::MalformedWitnessPair(
                "the pair must end in cent and dollar respectively".into(),
            ));
        }
        if body_l != body_u {
            return Err(PcpError::MalformedWitnessPair(
                "the words must agree except for their final letter".into(),
            ));
        }
        debug_assert_eq!(self.dollar.rank(), self.cent.rank() + 1);
        for w in [lower, upper] {
            if !self.grammar.recognize(w)? {
                return Err(PcpError::NotInLanguage(self.delta.render(w)));
            }
        }

        let words = self.grammar.enumerate_up_to(max_len)?;
        if let PrefixVerdict::Violation { prefix, extension } = prefix_scan(&words) {
            return Err(PcpError::PrefixPremiseFailed {
                prefix: self.delta.render(&prefix),
                extension: self.delta.render(&extension),
            });
        }
        let start = words.partition_point(|w| w <= lower);
        if start < words.len() && &words[start] < upper {
            return Ok(AdjacencyOutcome::Refuted(words[start].clone()));
        }
        Ok(AdjacencyOutcome::Certified(AdjacencyCertificate {
            lower: lower.clone(),
            upper: upper.clone(),
            bound: max_len,
            words_screened: words.len(),
        }))
    }

    /// Produces generated words strictly below and above `v`, witnessing
    /// that `v` is neither least nor greatest in the language order.
    pub fn neighbor_witnesses(&self, v: &Word) -> Result<Neighbors, PcpError> {
        self.delta.check_word(v)?;
        if !self.grammar.recognize(v)? {
            return Err(PcpError::NotInLanguage(self.delta.render(v)));
        }
        let rendered = || self.delta.render(v);
        let last = *v.letters().last().expect("generated words are non-empty");
        let (below, above) = match self.classify(last).expect("letter was validated") {
            DeltaClass::Cent => self.sequence_neighbors(v, Side::Alpha)?,
            DeltaClass::Dollar => self.sequence_neighbors(v, Side::Beta)?,
            DeltaClass::D { j, k: 1 } => {
                let body = &v.letters()[..v.len() - 1];
                let mut below: Vec<Letter> = body.to_vec();
                below.extend([self.d_letter(j, 0), self.d_letter(j, 1)]);
                let mut above: Vec<Letter> = body.to_vec();
                above.extend([self.d_letter(j, 2), self.d_letter(j, 1)]);
                (Word::from_letters(below), Word::from_letters(above))
            }
            _ => return Err(PcpError::Undecomposable(rendered())),
        };
        for w in [&below, &above] {
            if !self.grammar.recognize(w)? {
                return Err(PcpError::Internal(format!(
                    "constructed neighbor '{}' is not generated",
                    self.delta.render(w)
                )));
            }
        }
        if !(below < *v && *v < above) {
            return Err(PcpError::Internal(format!(
                "neighbors of '{}' are not ordered around it",
                rendered()
            )));
        }
        Ok(Neighbors { below, above })
    }

    /// Neighbors of a sequence word `i_1 … i_m · rev(concat) · cent|dollar`:
    /// appending index 1 to the sequence yields a smaller generated word
    /// (an index letter displaces a letter from `{a, b}` or the closer), and
    /// the single letter `d_{i_1,1}` is a larger one.
    fn sequence_neighbors(&self, v: &Word, side: Side) -> Result<(Word, Word), PcpError> {
        let letters = v.letters();
        let n = self.size();
        let mut indices = Vec::new();
        for &l in &letters[..letters.len() - 1] {
            match self.classify(l) {
                Some(DeltaClass::C(j)) if j <= n => indices.push(j),
                _ => break,
            }
        }
        if indices.is_empty() {
            return Err(PcpError::Undecomposable(self.delta.render(v)));
        }
        let expected = self.side_word(&indices, side)?;
        if expected != *v {
            return Err(PcpError::Undecomposable(self.delta.render(v)));
        }
        indices.push(1);
        let below = self.side_word(&indices, side)?;
        let above = Word::from_letters(vec![self.d_letter(indices[0], 1)]);
        Ok((below, above))
    }
}

/// Result of screening a claimed gap pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AdjacencyOutcome {
    Certified(AdjacencyCertificate),
    /// A generated word strictly between the pair.
    Refuted(Word),
}

/// Record of a successful adjacency screen: within the length bound, the
/// generated words are prefix-free and none lies strictly between the pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdjacencyCertificate {
    pub lower: Word,
    pub upper: Word,
    pub bound: usize,
    pub words_screened: usize,
}

impl fmt::Display for AdjacencyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "adjacent within length {}: screened {} generated words, none strictly between",
            self.bound, self.words_screened
        )
    }
}

/// Generated words strictly below and above a given word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Neighbors {
    pub below: Word,
    pub above: Word,
}

/// The ordered reduction alphabet for instances of size `n`: for each
/// `j ∈ 1..=n+2` the block `c_j, d_{j,0}, d_{j,1}, d_{j,2}`, then `cent` and
/// `dollar`. Index letters are spelled `1..n`; `c_{n+1}` and `c_{n+2}` are
/// spelled `a` and `b`; the `d` letters are spelled `d<j>.<k>`.
pub fn build_delta_alphabet(n: usize) -> Result<OrderedAlphabet, PcpError> {
    let mut tokens = Vec::with_capacity(4 * n + 10);
    for j in 1..=n + 2 {
        let c = if j <= n {
            j.to_string()
        } else if j == n + 1 {
            "a".to_owned()
        } else {
            "b".to_owned()
        };
        tokens.push(c);
        for k in 0..3 {
            tokens.push(format!("d{j}.{k}"));
        }
    }
    tokens.push("cent".to_owned());
    tokens.push("dollar".to_owned());
    Ok(OrderedAlphabet::new(tokens)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solvable() -> PcpInstance {
        PcpInstance::parse("ab a\nb bb\n").unwrap()
    }

    fn unsolvable() -> PcpInstance {
        PcpInstance::parse("ab ba\n").unwrap()
    }

    fn words(delta: &OrderedAlphabet, texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| delta.parse_word(t).unwrap()).collect()
    }

    #[test]
    fn parsing_accepts_comments_and_rejects_bad_lines() {
        let text = "# two pairs\nab a  # first\n\nb bb\n";
        let i = PcpInstance::parse(text).unwrap();
        assert_eq!(i.size(), 2);
        assert_eq!(i.pair(1).unwrap().alpha, AbWord::parse("ab").unwrap());
        assert_eq!(i.to_string(), "ab a\nb bb\n");

        assert_eq!(
            PcpInstance::parse("# nothing\n").unwrap_err(),
            PcpError::NoPairs
        );
        assert_eq!(
            PcpInstance::parse("ab\n").unwrap_err(),
            PcpError::BadPairLine { line: 1 }
        );
        assert_eq!(
            PcpInstance::parse("ab a\nax b\n").unwrap_err(),
            PcpError::BadLetter {
                ch: 'x',
                line: Some(2)
            }
        );
        assert_eq!(
            PcpInstance::parse("ab a b\n").unwrap_err(),
            PcpError::BadPairLine { line: 1 }
        );
    }

    #[test]
    fn solution_verification_checks_the_sides() {
        let i = solvable();
        let good = Solution::new(vec![1, 2]).unwrap();
        i.verify_solution(&good).unwrap();
        let bad = Solution::new(vec![2, 1]).unwrap();
        assert_eq!(
            i.verify_solution(&bad).unwrap_err(),
            PcpError::NotASolution {
                alpha: "bab".into(),
                beta: "bba".into()
            }
        );
        let out = Solution::new(vec![3]).unwrap();
        assert_eq!(
            i.verify_solution(&out).unwrap_err(),
            PcpError::IndexOutOfRange { index: 3, size: 2 }
        );
        assert_eq!(Solution::new(vec![]).unwrap_err(), PcpError::EmptySolution);
    }

    #[test]
    fn brute_force_finds_the_least_shortest_solution() {
        let i = solvable();
        match i.brute_force_solve(3) {
            SearchOutcome::Solution(s) => assert_eq!(s.indices(), &[1, 2]),
            other => panic!("expected a solution, got {other:?}"),
        }
        assert_eq!(
            i.brute_force_solve(1),
            SearchOutcome::NoneFound {
                max_depth: 1,
                exhausted: false
            }
        );
        // Two one-index solutions: the smaller index wins.
        let tie = PcpInstance::parse("b b\na a\n").unwrap();
        match tie.brute_force_solve(2) {
            SearchOutcome::Solution(s) => assert_eq!(s.indices(), &[1]),
            other => panic!("expected a solution, got {other:?}"),
        }
    }

    #[test]
    fn brute_force_detects_exhaustion() {
        assert_eq!(
            unsolvable().brute_force_solve(8),
            SearchOutcome::NoneFound {
                max_depth: 8,
                exhausted: true
            }
        );
        // A growing overhang never dies but never closes either.
        let growing = PcpInstance::parse("a aa\n").unwrap();
        assert_eq!(
            growing.brute_force_solve(5),
            SearchOutcome::NoneFound {
                max_depth: 5,
                exhausted: false
            }
        );
    }

    #[test]
    fn delta_alphabet_interleaves_blocks_in_order() {
        let delta = build_delta_alphabet(1).unwrap();
        assert_eq!(
            delta.tokens(),
            [
                "1", "d1.0", "d1.1", "d1.2", "a", "d2.0", "d2.1", "d2.2", "b", "d3.0", "d3.1",
                "d3.2", "cent", "dollar"
            ]
        );
        for n in 1..=6 {
            let delta = build_delta_alphabet(n).unwrap();
            assert_eq!(delta.len(), 4 * n + 10);
        }
    }

    #[test]
    fn classification_covers_the_alphabet() {
        let r = ReductionArtifacts::new(solvable()).unwrap();
        let mut cs = 0;
        let mut ds = 0;
        for letter in r.delta().letters() {
            match r.classify(letter).unwrap() {
                DeltaClass::C(j) => {
                    assert_eq!(letter, r.c[j - 1]);
                    cs += 1;
                }
                DeltaClass::D { j, k } => {
                    assert_eq!(letter, r.d_letter(j, k));
                    ds += 1;
                }
                DeltaClass::Cent => assert_eq!(letter, r.cent()),
                DeltaClass::Dollar => assert_eq!(letter, r.dollar()),
            }
        }
        assert_eq!((cs, ds), (4, 12));
        assert_eq!(r.dollar().rank(), r.cent().rank() + 1);
        assert_eq!(r.ab_letter(AbLetter::A), r.delta().letter("a").unwrap());
        assert_eq!(r.index_letter(1).unwrap(), r.delta().letter("1").unwrap());
    }

    #[test]
    fn reduction_grammar_has_the_promised_shape() {
        for n in 1..=4 {
            let pairs = (0..n)
                .map(|_| PcpPair {
                    alpha: AbWord::parse("ab").unwrap(),
                    beta: AbWord::parse("b").unwrap(),
                })
                .collect();
            let r = ReductionArtifacts::new(PcpInstance::new(pairs).unwrap()).unwrap();
            assert_eq!(r.delta().len(), 4 * n + 10);
            assert_eq!(r.grammar().productions().len(), 9 * n + 13);
            assert_eq!(r.grammar().start_name(), "S");
            // S, A, B, C, D1..D{n+2}
            assert_eq!(r.grammar().nonterminal_count(), n + 6);
        }
    }

    #[test]
    fn reduction_grammar_generates_the_three_word_families() {
        let r = ReductionArtifacts::new(unsolvable()).unwrap();
        let delta = r.delta();
        let inside = words(
            delta,
            &[
                "1 b a cent",
                "1 a b dollar",
                "d1.1",
                "d3.0 d3.2 d3.1",
                "1 a b d2.1",
                "1 1 b a b a cent",
            ],
        );
        for w in &inside {
            assert!(r.grammar().recognize(w).unwrap(), "{}", delta.render(w));
        }
        let outside = words(
            delta,
            &[
                "-",
                "cent",
                "1 a b cent",
                "1 b a dollar",
                "d1.0",
                "1 cent",
                "b a cent",
            ],
        );
        for w in &outside {
            assert!(!r.grammar().recognize(w).unwrap(), "{}", delta.render(w));
        }
    }

    #[test]
    fn gap_witness_spells_the_reversed_concatenation() {
        let r = ReductionArtifacts::new(solvable()).unwrap();
        let s = Solution::new(vec![1, 2]).unwrap();
        let (u_alpha, u_beta) = r.gap_witness(&s).unwrap();
        assert_eq!(r.delta().render(&u_alpha), "1 2 b b a cent");
        assert_eq!(r.delta().render(&u_beta), "1 2 b b a dollar");
        assert!(r.grammar().recognize(&u_alpha).unwrap());
        assert!(r.grammar().recognize(&u_beta).unwrap());
        assert!(u_alpha < u_beta);

        let not = Solution::new(vec![1]).unwrap();
        assert!(matches!(
            r.gap_witness(&not),
            Err(PcpError::NotASolution { .. })
        ));
    }

    #[test]
    fn adjacency_certification_screens_the_language() {
        let r = ReductionArtifacts::new(solvable()).unwrap();
        let s = Solution::new(vec![1, 2]).unwrap();
        let (u_alpha, u_beta) = r.gap_witness(&s).unwrap();
        match r.certify_adjacent(&u_alpha, &u_beta, 7).unwrap() {
            AdjacencyOutcome::Certified(cert) => {
                assert_eq!(cert.bound, 7);
                assert!(cert.words_screened > 0);
                assert_eq!(cert.lower, u_alpha);
            }
            AdjacencyOutcome::Refuted(w) => {
                panic!("unexpected word between the pair: {}", r.delta().render(&w))
            }
        }

        // Shape violations are reported before any screening.
        let err = r.certify_adjacent(&u_beta, &u_alpha, 4).unwrap_err();
        assert!(matches!(err, PcpError::MalformedWitnessPair(_)));
        let stranger = r.delta().parse_word("1 b a cent").unwrap();
        let err = r.certify_adjacent(&stranger, &u_beta, 4).unwrap_err();
        assert!(matches!(err, PcpError::MalformedWitnessPair(_)));
    }

    #[test]
    fn neighbor_witnesses_match_the_constructions() {
        let r = ReductionArtifacts::new(unsolvable()).unwrap();
        let delta = r.delta();

        let v = delta.parse_word("1 b a cent").unwrap();
        let n = r.neighbor_witnesses(&v).unwrap();
        assert_eq!(delta.render(&n.below), "1 1 b a b a cent");
        assert_eq!(delta.render(&n.above), "d1.1");

        let v = delta.parse_word("1 a b dollar").unwrap();
        let n = r.neighbor_witnesses(&v).unwrap();
        assert_eq!(delta.render(&n.below), "1 1 a b a b dollar");
        assert_eq!(delta.render(&n.above), "d1.1");

        let v = delta.parse_word("d1.0 d1.1").unwrap();
        let n = r.neighbor_witnesses(&v).unwrap();
        assert_eq!(delta.render(&n.below), "d1.0 d1.0 d1.1");
        assert_eq!(delta.render(&n.above), "d1.0 d1.2 d1.1");

        let v = delta.parse_word("1 a b d2.1").unwrap();
        let n = r.neighbor_witnesses(&v).unwrap();
        assert_eq!(delta.render(&n.below), "1 a b d2.0 d2.1");
        assert_eq!(delta.render(&n.above), "1 a b d2.2 d2.1");

        let outside = delta.parse_word("cent").unwrap();
        assert!(matches!(
            r.neighbor_witnesses(&outside),
            Err(PcpError::NotInLanguage(_))
        ));
    }

    #[test]
    fn side_words_validate_their_indices() {
        let r = ReductionArtifacts::new(solvable()).unwrap();
        assert_eq!(r.alpha_word(&[]).unwrap_err(), PcpError::EmptySolution);
        assert_eq!(
            r.alpha_word(&[0]).unwrap_err(),
            PcpError::IndexOutOfRange { index: 0, size: 2 }
        );
        assert_eq!(r.delta().render(&r.alpha_word(&[2]).unwrap()), "2 b cent");
        assert_eq!(
            r.delta().render(&r.beta_word(&[2]).unwrap()),
            "2 b b dollar"
        );
    }
}
