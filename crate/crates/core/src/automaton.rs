//! Synchronized finite automata over padded convolutions.
//!
//! A *convolution* writes a tuple of words in one string by stacking them
//! into tracks: position `i` holds the `i`-th letter of every track, with a
//! pad mark `_` on tracks whose word has already ended. A string of stacked
//! symbols is *well formed* when no track resumes after padding and not every
//! track is padded at once (the all-pad symbol is excluded from the alphabet
//! altogether). Relations on words — such as the lexicographic order — become
//! ordinary regular languages of convolutions, and the boolean/projection
//! operations on these automata decide first-order properties of a regular
//! language exactly.
//!
//! Every operation here is deterministic: state numbering follows insertion
//! order of a breadth-first exploration and transition lists are kept sorted,
//! so repeated runs produce byte-identical automata and witnesses.
//!
//! All public constructions with two or more tracks accept only well-formed
//! convolutions; `complement`, `lift`, and `project` re-intersect with the
//! well-formedness automaton to keep that invariant.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::error::Error;
use std::fmt;
use std::fmt::Write as _;

use crate::alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
use crate::grammar::{Grammar, Symbol};
use crate::DEFAULT_STATE_CAP;

/// Pad mark used when rendering convolution symbols.
pub const PAD_MARK: &str = "_";

/// Errors from automaton construction and operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AutomatonError {
    Alphabet(AlphabetError),
    /// Binary operations require both automata to share one alphabet.
    AlphabetMismatch,
    /// The symbol space `(n+1)^tracks` does not fit the symbol index type.
    TooManySymbols {
        letters: usize,
        tracks: usize,
    },
    /// A track selection (placement, projection, convolution arity) is bad.
    TrackSelection(String),
    /// `from_right_linear` was given a grammar that is not right-linear.
    NotRightLinear,
    /// A state index exceeds the declared state count.
    StateOutOfRange {
        state: u32,
        count: usize,
    },
    /// A symbol index exceeds the alphabet's symbol count.
    SymbolOutOfRange {
        symbol: u32,
        count: u32,
    },
    /// Subset construction exceeded its state cap.
    StateCapExceeded {
        cap: usize,
    },
    /// A word count exceeded the range of `u64`.
    CountOverflow,
    /// A symbol string is not a well-formed convolution.
    MalformedConvolution,
}

impl fmt::Display for AutomatonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonError::Alphabet(e) => e.fmt(f),
            AutomatonError::AlphabetMismatch => {
                write!(f, "automata are over different alphabets")
            }
            AutomatonError::TooManySymbols { letters, tracks } => write!(
                f,
                "convolution alphabet with {letters} letters and {tracks} tracks is too large"
            ),
            AutomatonError::TrackSelection(msg) => write!(f, "bad track selection: {msg}"),
            AutomatonError::NotRightLinear => {
                write!(f, "grammar is not right-linear")
            }
            AutomatonError::StateOutOfRange { state, count } => {
                write!(f, "state {state} out of range for {count} states")
            }
            AutomatonError::SymbolOutOfRange { symbol, count } => {
                write!(f, "symbol {symbol} out of range for {count} symbols")
            }
            AutomatonError::StateCapExceeded { cap } => {
                write!(f, "subset construction exceeded the cap of {cap} states")
            }
            AutomatonError::CountOverflow => write!(f, "word count exceeds u64"),
            AutomatonError::MalformedConvolution => {
                write!(f, "symbol string is not a well-formed convolution")
            }
        }
    }
}

impl Error for AutomatonError {}

impl From<AlphabetError> for AutomatonError {
    fn from(e: AlphabetError) -> AutomatonError {
        AutomatonError::Alphabet(e)
    }
}

/// The alphabet of `tracks`-fold convolutions over a base alphabet.
///
/// A symbol assigns each track either a base letter or the pad mark, except
/// that the all-pad assignment is excluded. Symbols are numbered `0..count`
/// in a fixed order (mixed-radix over component values with track 0 least
/// significant); for one track the symbol index equals the letter rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvolutionAlphabet {
    base: OrderedAlphabet,
    tracks: usize,
}

impl ConvolutionAlphabet {
    pub fn new(
        base: OrderedAlphabet,
        tracks: usize,
    ) -> Result<ConvolutionAlphabet, AutomatonError> {
        if tracks == 0 {
            return Err(AutomatonError::TrackSelection(
                "at least one track required".into(),
            ));
        }
        let radix = base.len() as u64 + 1;
        let mut space: u64 = 1;
        for _ in 0..tracks {
            space = space
                .checked_mul(radix)
                .filter(|&s| s <= u32::MAX as u64 + 1)
                .ok_or(AutomatonError::TooManySymbols {
                    letters: base.len(),
                    tracks,
                })?;
        }
        Ok(ConvolutionAlphabet { base, tracks })
    }

    /// Single-track alphabet: symbols are exactly the base letters.
    pub fn plain(base: OrderedAlphabet) -> ConvolutionAlphabet {
        ConvolutionAlphabet { base, tracks: 1 }
    }

    pub fn pairs(base: OrderedAlphabet) -> Result<ConvolutionAlphabet, AutomatonError> {
        ConvolutionAlphabet::new(base, 2)
    }

    pub fn base(&self) -> &OrderedAlphabet {
        &self.base
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    fn radix(&self) -> u64 {
        self.base.len() as u64 + 1
    }

    pub fn symbol_count(&self) -> u32 {
        (self.radix().pow(self.tracks as u32) - 1) as u32
    }

    /// Component of a symbol on one track: `None` is the pad.
    pub fn component(&self, symbol: u32, track: usize) -> Option<Letter> {
        debug_assert!(track < self.tracks);
        let raw = symbol as u64 + 1;
        let value = raw / self.radix().pow(track as u32) % self.radix();
        (value > 0).then(|| Letter::from_rank(value as usize - 1))
    }

    pub fn components(&self, symbol: u32) -> Vec<Option<Letter>> {
        (0..self.tracks)
            .map(|t| self.component(symbol, t))
            .collect()
    }

    /// Symbol with the given components; `None` when all are pads.
    pub fn symbol(&self, components: &[Option<Letter>]) -> Result<Option<u32>, AutomatonError> {
        if components.len() != self.tracks {
            return Err(AutomatonError::TrackSelection(format!(
                "expected {} components, got {}",
                self.tracks,
                components.len()
            )));
        }
        let mut raw: u64 = 0;
        for (t, c) in components.iter().enumerate() {
            let value = match c {
                None => 0,
                Some(letter) => {
                    if !self.base.contains(*letter) {
                        return Err(AlphabetError::LetterOutOfRange {
                            rank: letter.rank(),
                            size: self.base.len(),
                        }
                        .into());
                    }
                    letter.rank() as u64 + 1
                }
            };
            raw += value * self.radix().pow(t as u32);
        }
        Ok((raw > 0).then(|| (raw - 1) as u32))
    }

    /// Writes a word tuple as a well-formed symbol string.
    pub fn convolve(&self, words: &[&Word]) -> Result<Vec<u32>, AutomatonError> {
        if words.len() != self.tracks {
            return Err(AutomatonError::TrackSelection(format!(
                "expected {} words, got {}",
                self.tracks,
                words.len()
            )));
        }
        for w in words {
            self.base.check_word(w)?;
        }
        let length = words.iter().map(|w| w.len()).max().unwrap_or(0);
        let mut symbols = Vec::with_capacity(length);
        for i in 0..length {
            let components: Vec<Option<Letter>> =
                words.iter().map(|w| w.letters().get(i).copied()).collect();
            let symbol = self
                .symbol(&components)?
                .expect("position below max length");
            symbols.push(symbol);
        }
        Ok(symbols)
    }

    /// Reads a word tuple back from a well-formed symbol string.
    pub fn deconvolve(&self, symbols: &[u32]) -> Result<Vec<Word>, AutomatonError> {
        let count = self.symbol_count();
        for &s in symbols {
            if s >= count {
                return Err(AutomatonError::SymbolOutOfRange { symbol: s, count });
            }
        }
        let mut words = Vec::with_capacity(self.tracks);
        for t in 0..self.tracks {
            let mut letters = Vec::new();
            let mut padded = false;
            for &s in symbols {
                match self.component(s, t) {
                    Some(letter) if !padded => letters.push(letter),
                    Some(_) => return Err(AutomatonError::MalformedConvolution),
                    None => padded = true,
                }
            }
            words.push(Word::from_letters(letters));
        }
        Ok(words)
    }

    /// Renders a symbol for dumps: the bare token for one track, a
    /// parenthesized component tuple otherwise.
    pub fn render_symbol(&self, symbol: u32) -> String {
        if self.tracks == 1 {
            match self.component(symbol, 0) {
                Some(letter) => self.base.token(letter).to_owned(),
                None => PAD_MARK.to_owned(),
            }
        } else {
            let mut out = String::from("(");
            for t in 0..self.tracks {
                if t > 0 {
                    out.push(',');
                }
                match self.component(symbol, t) {
                    Some(letter) => out.push_str(self.base.token(letter)),
                    None => out.push_str(PAD_MARK),
                }
            }
            out.push(')');
            out
        }
    }
}

/// Result of an emptiness test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Emptiness {
    Empty,
    /// A shortest accepted symbol string; among the shortest, the one with
    /// the smallest symbol sequence (for one track: lexicographically
    /// smallest by letter rank).
    Witness(Vec<u32>),
}

/// Size of an automaton's language.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LanguageSize {
    Empty,
    Finite(u64),
    Infinite,
}

/// A nondeterministic finite automaton over a convolution alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Nfa {
    alphabet: ConvolutionAlphabet,
    state_count: usize,
    initial: Vec<u32>,
    accepting: Vec<bool>,
    /// Per-state transition list, sorted by (symbol, target).
    delta: Vec<Vec<(u32, u32)>>,
}

impl Nfa {
    /// Builds an automaton from explicit parts, validating all indices.
    pub fn new(
        alphabet: ConvolutionAlphabet,
        state_count: usize,
        initial: &[u32],
        accepting: &[u32],
        transitions: &[(u32, u32, u32)],
    ) -> Result<Nfa, AutomatonError> {
        let check_state = |s: u32| {
            ((s as usize) < state_count)
                .then_some(())
                .ok_or(AutomatonError::StateOutOfRange {
                    state: s,
                    count: state_count,
                })
        };
        let symbol_count = alphabet.symbol_count();
        for &s in initial {
            check_state(s)?;
        }
        for &s in accepting {
            check_state(s)?;
        }
        for &(from, symbol, to) in transitions {
            check_state(from)?;
            check_state(to)?;
            if symbol >= symbol_count {
                return Err(AutomatonError::SymbolOutOfRange {
                    symbol,
                    count: symbol_count,
                });
            }
        }
        let mut acc = vec![false; state_count];
        for &s in accepting {
            acc[s as usize] = true;
        }
        Ok(Nfa::from_parts(
            alphabet,
            state_count,
            initial.to_vec(),
            acc,
            transitions.to_vec(),
        ))
    }

    /// Internal constructor: normalizes ordering so that equal automata have
    /// equal representations.
    fn from_parts(
        alphabet: ConvolutionAlphabet,
        state_count: usize,
        mut initial: Vec<u32>,
        accepting: Vec<bool>,
        transitions: Vec<(u32, u32, u32)>,
    ) -> Nfa {
        debug_assert_eq!(accepting.len(), state_count);
        initial.sort_unstable();
        initial.dedup();
        let mut delta = vec![Vec::new(); state_count];
        for (from, symbol, to) in transitions {
            delta[from as usize].push((symbol, to));
        }
        for list in &mut delta {
            list.sort_unstable();
            list.dedup();
        }
        Nfa {
            alphabet,
            state_count,
            initial,
            accepting,
            delta,
        }
    }

    pub fn alphabet(&self) -> &ConvolutionAlphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_accepting(&self, state: u32) -> bool {
        self.accepting[state as usize]
    }

    /// Transitions of one state, sorted by (symbol, target).
    pub fn transitions(&self, state: u32) -> &[(u32, u32)] {
        &self.delta[state as usize]
    }

    /// The automaton accepting exactly one word (single track).
    pub fn single_word(base: &OrderedAlphabet, w: &Word) -> Result<Nfa, AutomatonError> {
        base.check_word(w)?;
        let alphabet = ConvolutionAlphabet::plain(base.clone());
        let transitions: Vec<(u32, u32, u32)> = w
            .letters()
            .iter()
            .enumerate()
            .map(|(i, l)| (i as u32, l.rank() as u32, i as u32 + 1))
            .collect();
        let mut accepting = vec![false; w.len() + 1];
        accepting[w.len()] = true;
        Ok(Nfa::from_parts(
            alphabet,
            w.len() + 1,
            vec![0],
            accepting,
            transitions,
        ))
    }

    /// Compiles a right-linear grammar into an equivalent automaton.
    ///
    /// States are the nonterminals, followed by intermediate spell-out states
    /// for multi-letter right sides, followed by one accept state. Unit
    /// productions become ε-moves that are eliminated before returning.
    pub fn from_right_linear(g: &Grammar) -> Result<Nfa, AutomatonError> {
        if !g.is_right_linear() {
            return Err(AutomatonError::NotRightLinear);
        }
        let alphabet = ConvolutionAlphabet::plain(g.alphabet().clone());
        let nts = g.nonterminal_count();
        let accept = nts as u32;
        let mut state_count = nts + 1;
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        let mut eps: Vec<(u32, u32)> = Vec::new();

        for p in g.productions() {
            let (letters, tail) = match p.rhs.split_last() {
                Some((Symbol::Nonterminal(x), head)) => (head, Some(*x)),
                _ => (p.rhs.as_slice(), None),
            };
            let from = p.lhs.index() as u32;
            if letters.is_empty() {
                let tail = tail.expect("ε-free right side has a symbol");
                eps.push((from, tail.index() as u32));
                continue;
            }
            let mut cur = from;
            for (i, s) in letters.iter().enumerate() {
                let letter = match s {
                    Symbol::Terminal(t) => t.rank() as u32,
                    Symbol::Nonterminal(_) => return Err(AutomatonError::NotRightLinear),
                };
                let target = if i + 1 == letters.len() {
                    match tail {
                        Some(x) => x.index() as u32,
                        None => accept,
                    }
                } else {
                    let fresh = state_count as u32;
                    state_count += 1;
                    fresh
                };
                transitions.push((cur, letter, target));
                cur = target;
            }
        }

        let mut accepting = vec![false; state_count];
        accepting[accept as usize] = true;
        let transitions = eliminate_epsilon(state_count, transitions, &eps, &mut accepting);
        Ok(Nfa::from_parts(
            alphabet,
            state_count,
            vec![g.start().index() as u32],
            accepting,
            transitions,
        ))
    }

    /// The synchronized order relation: accepts the convolution of `(u, v)`
    /// exactly when `u` precedes `v` lexicographically (strictly).
    ///
    /// Four states: `0` — no difference yet; `1` — a smaller letter of `u`
    /// committed the order; `2` — `u` has ended (accepting: either a proper
    /// prefix or a committed order with `u` exhausted); `3` — `v` has ended
    /// after the order was committed. Only well-formed convolutions are
    /// accepted: once a track pads, every later symbol must pad it too.
    pub fn lex_relation(base: &OrderedAlphabet) -> Nfa {
        let alphabet = ConvolutionAlphabet::new(base.clone(), 2)
            .expect("pair alphabet over a valid base always fits");
        const EQ: u32 = 0;
        const LT: u32 = 1;
        const U_ENDED: u32 = 2;
        const V_ENDED: u32 = 3;
        let mut transitions = Vec::new();
        for x in base.letters() {
            for y in base.letters() {
                let sym = alphabet.symbol(&[Some(x), Some(y)]).unwrap().unwrap();
                if x == y {
                    transitions.push((EQ, sym, EQ));
                } else if x < y {
                    transitions.push((EQ, sym, LT));
                }
                transitions.push((LT, sym, LT));
            }
        }
        for y in base.letters() {
            let sym = alphabet.symbol(&[None, Some(y)]).unwrap().unwrap();
            transitions.push((EQ, sym, U_ENDED));
            transitions.push((LT, sym, U_ENDED));
            transitions.push((U_ENDED, sym, U_ENDED));
        }
        for x in base.letters() {
            let sym = alphabet.symbol(&[Some(x), None]).unwrap().unwrap();
            transitions.push((LT, sym, V_ENDED));
            transitions.push((V_ENDED, sym, V_ENDED));
        }
        let accepting = vec![false, true, true, true];
        Nfa::from_parts(alphabet, 4, vec![EQ], accepting, transitions)
    }

    /// Accepts exactly the well-formed convolutions: no track resumes after
    /// padding. States are the sets of still-alive tracks.
    pub fn well_formed(base: &OrderedAlphabet, tracks: usize) -> Result<Nfa, AutomatonError> {
        let alphabet = ConvolutionAlphabet::new(base.clone(), tracks)?;
        if tracks > 16 {
            return Err(AutomatonError::TrackSelection("too many tracks".into()));
        }
        let full: u32 = (1 << tracks) - 1;
        let state_of = |mask: u32| mask - 1;
        let mut transitions = Vec::new();
        for symbol in 0..alphabet.symbol_count() {
            let mut pattern: u32 = 0;
            for t in 0..tracks {
                if alphabet.component(symbol, t).is_some() {
                    pattern |= 1 << t;
                }
            }
            debug_assert!(pattern != 0, "the all-pad symbol is excluded");
            for mask in 1..=full {
                if pattern & !mask == 0 {
                    transitions.push((state_of(mask), symbol, state_of(pattern)));
                }
            }
        }
        let accepting = vec![true; full as usize];
        Ok(Nfa::from_parts(
            alphabet,
            full as usize,
            vec![state_of(full)],
            accepting,
            transitions,
        ))
    }

    /// Runs the automaton on a symbol string.
    pub fn accepts(&self, symbols: &[u32]) -> bool {
        let mut current: Vec<u32> = self.initial.clone();
        for &symbol in symbols {
            debug_assert!(symbol < self.alphabet.symbol_count());
            let mut next: Vec<u32> = Vec::new();
            for &q in &current {
                let list = &self.delta[q as usize];
                let from = list.partition_point(|&(s, _)| s < symbol);
                for &(s, to) in &list[from..] {
                    if s != symbol {
                        break;
                    }
                    next.push(to);
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|&q| self.accepting[q as usize])
    }

    /// Single-track membership test.
    pub fn accepts_word(&self, w: &Word) -> Result<bool, AutomatonError> {
        let symbols = self.alphabet.convolve(&[w])?;
        Ok(self.accepts(&symbols))
    }

    /// Two-track membership test on the convolution of `(u, v)`.
    pub fn accepts_pair(&self, u: &Word, v: &Word) -> Result<bool, AutomatonError> {
        let symbols = self.alphabet.convolve(&[u, v])?;
        Ok(self.accepts(&symbols))
    }

    /// Restriction to states that lie on some accepting path.
    pub fn trim(&self) -> Nfa {
        let mut forward = vec![false; self.state_count];
        let mut queue: VecDeque<u32> = self.initial.iter().copied().collect();
        for &q in &self.initial {
            forward[q as usize] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &(_, to) in &self.delta[q as usize] {
                if !forward[to as usize] {
                    forward[to as usize] = true;
                    queue.push_back(to);
                }
            }
        }

        let mut reverse: Vec<Vec<u32>> = vec![Vec::new(); self.state_count];
        for (from, list) in self.delta.iter().enumerate() {
            for &(_, to) in list {
                reverse[to as usize].push(from as u32);
            }
        }
        let mut backward = vec![false; self.state_count];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for (q, &acc) in self.accepting.iter().enumerate() {
            if acc {
                backward[q] = true;
                queue.push_back(q as u32);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &from in &reverse[q as usize] {
                if !backward[from as usize] {
                    backward[from as usize] = true;
                    queue.push_back(from);
                }
            }
        }

        let keep: Vec<bool> = (0..self.state_count)
            .map(|q| forward[q] && backward[q])
            .collect();
        let mut remap: Vec<Option<u32>> = vec![None; self.state_count];
        let mut kept = 0u32;
        for q in 0..self.state_count {
            if keep[q] {
                remap[q] = Some(kept);
                kept += 1;
            }
        }
        let initial: Vec<u32> = self
            .initial
            .iter()
            .filter_map(|&q| remap[q as usize])
            .collect();
        let mut accepting = vec![false; kept as usize];
        let mut transitions = Vec::new();
        for q in 0..self.state_count {
            let Some(new_q) = remap[q] else { continue };
            accepting[new_q as usize] = self.accepting[q];
            for &(symbol, to) in &self.delta[q] {
                if let Some(new_to) = remap[to as usize] {
                    transitions.push((new_q, symbol, new_to));
                }
            }
        }
        Nfa::from_parts(
            self.alphabet.clone(),
            kept as usize,
            initial,
            accepting,
            transitions,
        )
    }

    /// Product intersection of two automata over the same alphabet, built
    /// over reachable state pairs only.
    pub fn intersect(&self, other: &Nfa) -> Result<Nfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut queue: VecDeque<(u32, u32)> = VecDeque::new();
        for &q1 in &self.initial {
            for &q2 in &other.initial {
                if let Entry::Vacant(slot) = ids.entry((q1, q2)) {
                    slot.insert(order.len() as u32);
                    order.push((q1, q2));
                    queue.push_back((q1, q2));
                }
            }
        }
        let initial: Vec<u32> = (0..queue.len() as u32).collect();
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        while let Some((q1, q2)) = queue.pop_front() {
            let from = ids[&(q1, q2)];
            let list1 = &self.delta[q1 as usize];
            let list2 = &other.delta[q2 as usize];
            let (mut i, mut j) = (0, 0);
            while i < list1.len() && j < list2.len() {
                let s1 = list1[i].0;
                let s2 = list2[j].0;
                if s1 < s2 {
                    i += 1;
                } else if s2 < s1 {
                    j += 1;
                } else {
                    let run1_end = list1[i..].iter().take_while(|&&(s, _)| s == s1).count() + i;
                    let run2_end = list2[j..].iter().take_while(|&&(s, _)| s == s1).count() + j;
                    for &(_, t1) in &list1[i..run1_end] {
                        for &(_, t2) in &list2[j..run2_end] {
                            let next = (t1, t2);
                            let id = match ids.get(&next) {
                                Some(&id) => id,
                                None => {
                                    let id = order.len() as u32;
                                    ids.insert(next, id);
                                    order.push(next);
                                    queue.push_back(next);
                                    id
                                }
                            };
                            transitions.push((from, s1, id));
                        }
                    }
                    i = run1_end;
                    j = run2_end;
                }
            }
        }
        let accepting: Vec<bool> = order
            .iter()
            .map(|&(q1, q2)| self.accepting[q1 as usize] && other.accepting[q2 as usize])
            .collect();
        Ok(Nfa::from_parts(
            self.alphabet.clone(),
            order.len(),
            initial,
            accepting,
            transitions,
        ))
    }

    /// Subset construction; the result is a complete deterministic automaton
    /// (one initial state, exactly one successor per state and symbol).
    fn determinize(&self, cap: usize) -> Result<Nfa, AutomatonError> {
        let symbol_count = self.alphabet.symbol_count();
        let mut ids: HashMap<Box<[u32]>, u32> = HashMap::new();
        let mut subsets: Vec<Box<[u32]>> = Vec::new();
        let mut queue: VecDeque<u32> = VecDeque::new();

        let mut intern = |subset: Box<[u32]>,
                          subsets: &mut Vec<Box<[u32]>>,
                          queue: &mut VecDeque<u32>|
         -> Result<u32, AutomatonError> {
            if let Some(&id) = ids.get(&subset) {
                return Ok(id);
            }
            if subsets.len() >= cap {
                return Err(AutomatonError::StateCapExceeded { cap });
            }
            let id = subsets.len() as u32;
            ids.insert(subset.clone(), id);
            subsets.push(subset);
            queue.push_back(id);
            Ok(id)
        };

        let start: Box<[u32]> = self.initial.clone().into_boxed_slice();
        intern(start, &mut subsets, &mut queue)?;
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        let mut accepting: Vec<bool> = Vec::new();
        while let Some(id) = queue.pop_front() {
            let subset = subsets[id as usize].clone();
            // successors[s] = union of per-state successors on symbol s
            let mut successors: HashMap<u32, Vec<u32>> = HashMap::new();
            for &q in subset.iter() {
                for &(symbol, to) in &self.delta[q as usize] {
                    successors.entry(symbol).or_default().push(to);
                }
            }
            for symbol in 0..symbol_count {
                let mut next = successors.remove(&symbol).unwrap_or_default();
                next.sort_unstable();
                next.dedup();
                let next_id = intern(next.into_boxed_slice(), &mut subsets, &mut queue)?;
                transitions.push((id, symbol, next_id));
            }
        }
        for subset in &subsets {
            accepting.push(subset.iter().any(|&q| self.accepting[q as usize]));
        }
        Ok(Nfa::from_parts(
            self.alphabet.clone(),
            subsets.len(),
            vec![0],
            accepting,
            transitions,
        ))
    }

    /// Complement within the well-formed convolutions (for one track: within
    /// all words) via subset construction, with the default state cap.
    pub fn complement(&self) -> Result<Nfa, AutomatonError> {
        self.complement_with_cap(DEFAULT_STATE_CAP)
    }

    /// Like [`Nfa::complement`] with an explicit subset-construction cap.
    pub fn complement_with_cap(&self, cap: usize) -> Result<Nfa, AutomatonError> {
        let mut dfa = self.trim().determinize(cap)?;
        for acc in &mut dfa.accepting {
            *acc = !*acc;
        }
        if self.alphabet.tracks() >= 2 {
            let wf = Nfa::well_formed(self.alphabet.base(), self.alphabet.tracks())?;
            dfa = dfa.intersect(&wf)?;
        }
        Ok(dfa)
    }

    /// Re-embeds this automaton into a wider convolution: track `i` of `self`
    /// is read from track `placement[i]`, all other tracks are unconstrained.
    /// (With `self` a single-track automaton this is cylindrification.)
    pub fn lift(&self, tracks: usize, placement: &[usize]) -> Result<Nfa, AutomatonError> {
        if placement.len() != self.alphabet.tracks() {
            return Err(AutomatonError::TrackSelection(format!(
                "placement has {} entries for {} tracks",
                placement.len(),
                self.alphabet.tracks()
            )));
        }
        let mut seen = vec![false; tracks];
        for &t in placement {
            if t >= tracks {
                return Err(AutomatonError::TrackSelection(format!(
                    "track {t} out of range for {tracks} tracks"
                )));
            }
            if seen[t] {
                return Err(AutomatonError::TrackSelection(format!(
                    "track {t} used twice"
                )));
            }
            seen[t] = true;
        }
        let wide = ConvolutionAlphabet::new(self.alphabet.base().clone(), tracks)?;

        // One fresh sink state accepts the tail where every placed track has
        // ended but unplaced tracks continue.
        let fin = self.state_count as u32;
        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        for symbol in 0..wide.symbol_count() {
            let induced: Vec<Option<Letter>> = placement
                .iter()
                .map(|&t| wide.component(symbol, t))
                .collect();
            match self.alphabet.symbol(&induced)? {
                Some(inner) => {
                    for (q, list) in self.delta.iter().enumerate() {
                        let from = list.partition_point(|&(s, _)| s < inner);
                        for &(s, to) in &list[from..] {
                            if s != inner {
                                break;
                            }
                            transitions.push((q as u32, symbol, to));
                        }
                    }
                }
                None => {
                    for (q, &acc) in self.accepting.iter().enumerate() {
                        if acc {
                            transitions.push((q as u32, symbol, fin));
                        }
                    }
                    transitions.push((fin, symbol, fin));
                }
            }
        }
        let mut accepting = self.accepting.clone();
        accepting.push(true);
        let raw = Nfa::from_parts(
            wide,
            self.state_count + 1,
            self.initial.clone(),
            accepting,
            transitions,
        );
        let wf = Nfa::well_formed(self.alphabet.base(), tracks)?;
        raw.intersect(&wf)
    }

    /// Existential projection onto a selection of tracks: keeps track
    /// `keep[j]` as new track `j` and quantifies the rest away. Symbols whose
    /// kept components are all pads become ε-moves, which are eliminated.
    pub fn project(&self, keep: &[usize]) -> Result<Nfa, AutomatonError> {
        let tracks = self.alphabet.tracks();
        if keep.is_empty() {
            return Err(AutomatonError::TrackSelection(
                "kept track set is empty".into(),
            ));
        }
        let mut seen = vec![false; tracks];
        for &t in keep {
            if t >= tracks {
                return Err(AutomatonError::TrackSelection(format!(
                    "track {t} out of range for {tracks} tracks"
                )));
            }
            if seen[t] {
                return Err(AutomatonError::TrackSelection(format!(
                    "track {t} kept twice"
                )));
            }
            seen[t] = true;
        }
        let narrow = ConvolutionAlphabet::new(self.alphabet.base().clone(), keep.len())?;

        // Precompute the image of every wide symbol.
        let mut image: Vec<Option<u32>> = Vec::with_capacity(self.alphabet.symbol_count() as usize);
        for symbol in 0..self.alphabet.symbol_count() {
            let components: Vec<Option<Letter>> = keep
                .iter()
                .map(|&t| self.alphabet.component(symbol, t))
                .collect();
            image.push(narrow.symbol(&components)?);
        }

        let mut transitions: Vec<(u32, u32, u32)> = Vec::new();
        let mut eps: Vec<(u32, u32)> = Vec::new();
        for (q, list) in self.delta.iter().enumerate() {
            for &(symbol, to) in list {
                match image[symbol as usize] {
                    Some(s) => transitions.push((q as u32, s, to)),
                    None => eps.push((q as u32, to)),
                }
            }
        }
        let mut accepting = self.accepting.clone();
        let transitions = eliminate_epsilon(self.state_count, transitions, &eps, &mut accepting);
        let raw = Nfa::from_parts(
            narrow,
            self.state_count,
            self.initial.clone(),
            accepting,
            transitions,
        );
        if keep.len() >= 2 {
            let wf = Nfa::well_formed(self.alphabet.base(), keep.len())?;
            raw.intersect(&wf)
        } else {
            Ok(raw)
        }
    }

    /// Emptiness test with a canonical witness: a shortest accepted symbol
    /// string, smallest symbol sequence among the shortest.
    pub fn emptiness(&self) -> Emptiness {
        // Distance from each state to an accepting state (backward BFS).
        let mut reverse: Vec<Vec<u32>> = vec![Vec::new(); self.state_count];
        for (from, list) in self.delta.iter().enumerate() {
            for &(_, to) in list {
                reverse[to as usize].push(from as u32);
            }
        }
        let mut dist: Vec<Option<u32>> = vec![None; self.state_count];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for (q, &acc) in self.accepting.iter().enumerate() {
            if acc {
                dist[q] = Some(0);
                queue.push_back(q as u32);
            }
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q as usize].unwrap();
            for &from in &reverse[q as usize] {
                if dist[from as usize].is_none() {
                    dist[from as usize] = Some(d + 1);
                    queue.push_back(from);
                }
            }
        }

        let best = self.initial.iter().filter_map(|&q| dist[q as usize]).min();
        let Some(length) = best else {
            return Emptiness::Empty;
        };

        // Greedy forward walk over the viable frontier: at each step take the
        // smallest symbol that still allows finishing in the remaining steps.
        let mut frontier: Vec<u32> = self
            .initial
            .iter()
            .copied()
            .filter(|&q| dist[q as usize] == Some(length))
            .collect();
        let mut witness = Vec::with_capacity(length as usize);
        for remaining in (1..=length).rev() {
            let mut chosen: Option<(u32, Vec<u32>)> = None;
            'symbols: for symbol in 0..self.alphabet.symbol_count() {
                let mut next: Vec<u32> = Vec::new();
                for &q in &frontier {
                    let list = &self.delta[q as usize];
                    let from = list.partition_point(|&(s, _)| s < symbol);
                    for &(s, to) in &list[from..] {
                        if s != symbol {
                            break;
                        }
                        if dist[to as usize] == Some(remaining - 1) {
                            next.push(to);
                        }
                    }
                }
                if !next.is_empty() {
                    next.sort_unstable();
                    next.dedup();
                    chosen = Some((symbol, next));
                    break 'symbols;
                }
            }
            let (symbol, next) = chosen.expect("distance labels guarantee a viable symbol");
            witness.push(symbol);
            frontier = next;
        }
        debug_assert!(frontier.iter().any(|&q| self.accepting[q as usize]));
        Emptiness::Witness(witness)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.emptiness(), Emptiness::Empty)
    }

    /// Exact size of the accepted language.
    pub fn cardinality(&self) -> Result<LanguageSize, AutomatonError> {
        let trimmed = self.trim();
        if trimmed.initial.is_empty() {
            return Ok(LanguageSize::Empty);
        }
        // In a trimmed automaton every transition consumes one symbol, so a
        // cycle pumps words of unboundedly many lengths.
        if trimmed.has_cycle() {
            return Ok(LanguageSize::Infinite);
        }
        // Acyclic: count paths in the determinized, trimmed DAG.
        let dfa = trimmed.determinize(DEFAULT_STATE_CAP)?.trim();
        if dfa.initial.is_empty() {
            return Ok(LanguageSize::Empty);
        }
        let mut indegree = vec![0usize; dfa.state_count];
        for list in &dfa.delta {
            for &(_, to) in list {
                indegree[to as usize] += 1;
            }
        }
        let mut paths = vec![0u64; dfa.state_count];
        for &q in &dfa.initial {
            paths[q as usize] = 1;
        }
        let mut queue: VecDeque<u32> = (0..dfa.state_count as u32)
            .filter(|&q| indegree[q as usize] == 0)
            .collect();
        let mut total: u64 = 0;
        let mut visited = 0usize;
        while let Some(q) = queue.pop_front() {
            visited += 1;
            if dfa.accepting[q as usize] {
                total = total
                    .checked_add(paths[q as usize])
                    .ok_or(AutomatonError::CountOverflow)?;
            }
            for &(_, to) in &dfa.delta[q as usize] {
                paths[to as usize] = paths[to as usize]
                    .checked_add(paths[q as usize])
                    .ok_or(AutomatonError::CountOverflow)?;
                indegree[to as usize] -= 1;
                if indegree[to as usize] == 0 {
                    queue.push_back(to);
                }
            }
        }
        debug_assert_eq!(visited, dfa.state_count, "determinized trim is acyclic");
        Ok(LanguageSize::Finite(total))
    }

    fn has_cycle(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color = vec![Color::White; self.state_count];
        let mut stack: Vec<(u32, usize)> = Vec::new();
        for root in 0..self.state_count as u32 {
            if color[root as usize] != Color::White {
                continue;
            }
            color[root as usize] = Color::Gray;
            stack.push((root, 0));
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                if *next < self.delta[q as usize].len() {
                    let (_, to) = self.delta[q as usize][*next];
                    *next += 1;
                    match color[to as usize] {
                        Color::Gray => return true,
                        Color::White => {
                            color[to as usize] = Color::Gray;
                            stack.push((to, 0));
                        }
                        Color::Black => {}
                    }
                } else {
                    color[q as usize] = Color::Black;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Plain-text dump: one `state` line per state, then one `trans` line per
    /// transition, both in ascending order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for q in 0..self.state_count as u32 {
            write!(out, "state {q}").unwrap();
            if self.initial.binary_search(&q).is_ok() {
                out.push_str(" initial");
            }
            if self.accepting[q as usize] {
                out.push_str(" accepting");
            }
            out.push('\n');
        }
        for q in 0..self.state_count {
            for &(symbol, to) in &self.delta[q] {
                writeln!(
                    out,
                    "trans {q} {} {to}",
                    self.alphabet.render_symbol(symbol)
                )
                .unwrap();
            }
        }
        out
    }
}

/// Replaces ε-moves by letter transitions and acceptance inheritance along
/// ε-closures. Returns the closed letter-transition list.
fn eliminate_epsilon(
    state_count: usize,
    transitions: Vec<(u32, u32, u32)>,
    eps: &[(u32, u32)],
    accepting: &mut [bool],
) -> Vec<(u32, u32, u32)> {
    if eps.is_empty() {
        return transitions;
    }
    let mut eps_adj: Vec<Vec<u32>> = vec![Vec::new(); state_count];
    for &(from, to) in eps {
        eps_adj[from as usize].push(to);
    }
    let mut by_state: Vec<Vec<(u32, u32)>> = vec![Vec::new(); state_count];
    for &(from, symbol, to) in &transitions {
        by_state[from as usize].push((symbol, to));
    }
    let mut closed = transitions;
    for q in 0..state_count {
        // BFS over the ε-graph from q.
        let mut reached = vec![false; state_count];
        reached[q] = true;
        let mut queue: VecDeque<u32> = VecDeque::from([q as u32]);
        while let Some(p) = queue.pop_front() {
            for &to in &eps_adj[p as usize] {
                if !reached[to as usize] {
                    reached[to as usize] = true;
                    queue.push_back(to);
                }
            }
        }
        for (p, &hit) in reached.iter().enumerate() {
            if !hit || p == q {
                continue;
            }
            if accepting[p] {
                accepting[q] = true;
            }
            for &(symbol, to) in &by_state[p] {
                closed.push((q as u32, symbol, to));
            }
        }
    }
    closed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::Grammar;
    use std::cmp::Ordering;

    fn ab() -> OrderedAlphabet {
        OrderedAlphabet::new(["a", "b"]).unwrap()
    }

    fn w(a: &OrderedAlphabet, s: &str) -> Word {
        a.parse_word(s).unwrap()
    }

    fn astarb_nfa() -> Nfa {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a S | b\n").unwrap();
        Nfa::from_right_linear(&g).unwrap()
    }

    #[test]
    fn symbol_numbering_round_trips() {
        let conv = ConvolutionAlphabet::new(ab(), 2).unwrap();
        assert_eq!(conv.symbol_count(), 8);
        let mut seen = Vec::new();
        for sym in 0..conv.symbol_count() {
            let comps = conv.components(sym);
            assert_eq!(conv.symbol(&comps).unwrap(), Some(sym));
            seen.push(comps);
        }
        // Pads and letters both occur; the all-pad tuple is excluded.
        assert!(!seen.contains(&vec![None, None]));
        assert_eq!(conv.symbol(&[None, None]).unwrap(), None);

        let plain = ConvolutionAlphabet::plain(ab());
        assert_eq!(plain.symbol_count(), 2);
        let b = plain.base().letter("b").unwrap();
        assert_eq!(plain.symbol(&[Some(b)]).unwrap(), Some(1));
    }

    #[test]
    fn convolve_and_deconvolve_round_trip() {
        let a = ab();
        let conv = ConvolutionAlphabet::new(a.clone(), 2).unwrap();
        let u = w(&a, "a b");
        let v = w(&a, "b");
        let symbols = conv.convolve(&[&u, &v]).unwrap();
        assert_eq!(symbols.len(), 2);
        assert_eq!(
            conv.deconvolve(&symbols).unwrap(),
            vec![u.clone(), v.clone()]
        );

        // A resumed track is rejected on decode.
        let pad_then_letter = [
            conv.symbol(&[None, Some(a.letter("a").unwrap())])
                .unwrap()
                .unwrap(),
            conv.symbol(&[Some(a.letter("a").unwrap()), None])
                .unwrap()
                .unwrap(),
        ];
        assert_eq!(
            conv.deconvolve(&pad_then_letter).unwrap_err(),
            AutomatonError::MalformedConvolution
        );
    }

    #[test]
    fn right_linear_compilation_accepts_the_language() {
        let a = ab();
        let nfa = astarb_nfa();
        for yes in ["b", "a b", "a a a b"] {
            assert!(nfa.accepts_word(&w(&a, yes)).unwrap(), "{yes}");
        }
        for no in ["-", "a", "b a", "b b", "a a"] {
            assert!(!nfa.accepts_word(&w(&a, no)).unwrap(), "{no}");
        }
    }

    #[test]
    fn unit_productions_compile_through_epsilon_elimination() {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> T\nT -> a T | b\n").unwrap();
        let a = ab();
        let nfa = Nfa::from_right_linear(&g).unwrap();
        assert!(nfa.accepts_word(&w(&a, "a a b")).unwrap());
        assert!(!nfa.accepts_word(&w(&a, "a")).unwrap());
    }

    #[test]
    fn from_right_linear_rejects_center_recursion() {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a S b | a b\n").unwrap();
        assert_eq!(
            Nfa::from_right_linear(&g).unwrap_err(),
            AutomatonError::NotRightLinear
        );
    }

    #[test]
    fn lex_relation_agrees_with_comparison() {
        let a = ab();
        let rel = Nfa::lex_relation(&a);
        let words = crate::lex::tests::all_words_up_to(&a, 3);
        for u in &words {
            for v in &words {
                let expected = crate::lex::lex_compare(u, v, &a).unwrap() == Ordering::Less;
                assert_eq!(
                    rel.accepts_pair(u, v).unwrap(),
                    expected,
                    "{:?} < {:?}",
                    a.render(u),
                    a.render(v)
                );
            }
        }
    }

    #[test]
    fn lex_relation_rejects_malformed_convolutions() {
        let a = ab();
        let rel = Nfa::lex_relation(&a);
        let conv = rel.alphabet().clone();
        let la = a.letter("a").unwrap();
        let lb = a.letter("b").unwrap();
        // (a,_) then (a,b): track 1 resumes after padding.
        let bad = [
            conv.symbol(&[Some(la), None]).unwrap().unwrap(),
            conv.symbol(&[Some(la), Some(lb)]).unwrap().unwrap(),
        ];
        assert!(!rel.accepts(&bad));
        // (_,b) then (a,_): track 0 resumes after padding.
        let bad = [
            conv.symbol(&[None, Some(lb)]).unwrap().unwrap(),
            conv.symbol(&[Some(la), None]).unwrap().unwrap(),
        ];
        assert!(!rel.accepts(&bad));
    }

    #[test]
    fn well_formedness_automaton_characterizes_convolutions() {
        let a = ab();
        let wf = Nfa::well_formed(&a, 2).unwrap();
        let conv = wf.alphabet().clone();
        // Every convolution of a word pair is accepted.
        let words = crate::lex::tests::all_words_up_to(&a, 2);
        for u in &words {
            for v in &words {
                let symbols = conv.convolve(&[u, v]).unwrap();
                assert!(wf.accepts(&symbols));
            }
        }
        // Exhaustive: acceptance of any 2-symbol string equals decodability.
        for s1 in 0..conv.symbol_count() {
            for s2 in 0..conv.symbol_count() {
                let accepted = wf.accepts(&[s1, s2]);
                let decodes = conv.deconvolve(&[s1, s2]).is_ok();
                assert_eq!(accepted, decodes, "symbols {s1},{s2}");
            }
        }
    }

    #[test]
    fn boolean_operations_match_set_semantics() {
        let a = ab();
        let astarb = astarb_nfa();
        let complement = astarb.complement().unwrap();
        let single = Nfa::single_word(&a, &w(&a, "a b")).unwrap();
        let both = astarb.intersect(&single).unwrap();
        let words = crate::lex::tests::all_words_up_to(&a, 4);
        for x in &words {
            let in_l = astarb.accepts_word(x).unwrap();
            assert_eq!(complement.accepts_word(x).unwrap(), !in_l);
            assert_eq!(both.accepts_word(x).unwrap(), in_l && *x == w(&a, "a b"));
        }
    }

    #[test]
    fn complement_respects_well_formedness() {
        let a = ab();
        let rel = Nfa::lex_relation(&a);
        let non_less = rel.complement().unwrap();
        let words = crate::lex::tests::all_words_up_to(&a, 3);
        for u in &words {
            for v in &words {
                let expected = crate::lex::lex_compare(u, v, &a).unwrap() != Ordering::Less;
                assert_eq!(non_less.accepts_pair(u, v).unwrap(), expected);
            }
        }
        // Malformed strings stay outside the complement.
        let conv = rel.alphabet().clone();
        let la = a.letter("a").unwrap();
        let bad = [
            conv.symbol(&[Some(la), None]).unwrap().unwrap(),
            conv.symbol(&[Some(la), Some(la)]).unwrap().unwrap(),
        ];
        assert!(!non_less.accepts(&bad));
    }

    #[test]
    fn lift_constrains_one_track() {
        let a = ab();
        let single = Nfa::single_word(&a, &w(&a, "b")).unwrap();
        let lifted = single.lift(2, &[0]).unwrap();
        assert!(lifted.accepts_pair(&w(&a, "b"), &w(&a, "a b")).unwrap());
        assert!(lifted.accepts_pair(&w(&a, "b"), &Word::new()).unwrap());
        assert!(lifted.accepts_pair(&w(&a, "b"), &w(&a, "b")).unwrap());
        assert!(!lifted.accepts_pair(&w(&a, "a"), &w(&a, "b")).unwrap());
        assert!(!lifted.accepts_pair(&w(&a, "b b"), &w(&a, "b")).unwrap());
    }

    #[test]
    fn projection_is_existential_quantification() {
        let a = ab();
        let rel = Nfa::lex_relation(&a);
        // {v : ∃u. u < v} = all non-empty words.
        let has_smaller = rel.project(&[1]).unwrap();
        assert_eq!(has_smaller.alphabet().tracks(), 1);
        let words = crate::lex::tests::all_words_up_to(&a, 3);
        for v in &words {
            assert_eq!(has_smaller.accepts_word(v).unwrap(), !v.is_empty());
        }
        // {u : ∃v. u < v} = all words: some extension is always larger.
        let has_larger = rel.project(&[0]).unwrap();
        for u in &words {
            assert!(has_larger.accepts_word(u).unwrap());
        }
    }

    #[test]
    fn emptiness_yields_canonical_witnesses() {
        let a = ab();
        assert_eq!(
            astarb_nfa().emptiness(),
            Emptiness::Witness(vec![1]),
            "shortest word b"
        );
        // {ba, ab}: two shortest words; the lexicographically smaller wins.
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> b a | a b\n").unwrap();
        let nfa = Nfa::from_right_linear(&g).unwrap();
        match nfa.emptiness() {
            Emptiness::Witness(symbols) => {
                let words = nfa.alphabet().deconvolve(&symbols).unwrap();
                assert_eq!(words, vec![w(&a, "a b")]);
            }
            Emptiness::Empty => panic!("language is non-empty"),
        }
        // Empty language.
        let dead = Nfa::new(ConvolutionAlphabet::plain(a.clone()), 1, &[0], &[], &[]).unwrap();
        assert_eq!(dead.emptiness(), Emptiness::Empty);
        // ε in the language: empty witness.
        let eps = Nfa::new(ConvolutionAlphabet::plain(a), 1, &[0], &[0], &[]).unwrap();
        assert_eq!(eps.emptiness(), Emptiness::Witness(vec![]));
    }

    #[test]
    fn cardinality_distinguishes_empty_finite_infinite() {
        assert_eq!(astarb_nfa().cardinality().unwrap(), LanguageSize::Infinite);
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a | a b | b a\n").unwrap();
        let nfa = Nfa::from_right_linear(&g).unwrap();
        assert_eq!(nfa.cardinality().unwrap(), LanguageSize::Finite(3));
        let dead = Nfa::new(ConvolutionAlphabet::plain(ab()), 1, &[0], &[], &[]).unwrap();
        assert_eq!(dead.cardinality().unwrap(), LanguageSize::Empty);
        // Ambiguous acceptance of one word still counts it once.
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a b | a T\nT -> b\n").unwrap();
        let nfa = Nfa::from_right_linear(&g).unwrap();
        assert_eq!(nfa.cardinality().unwrap(), LanguageSize::Finite(1));
    }

    #[test]
    fn trim_drops_useless_states() {
        let a = ConvolutionAlphabet::plain(ab());
        // State 2 is unreachable; state 3 cannot reach acceptance.
        let nfa = Nfa::new(
            a,
            4,
            &[0],
            &[1],
            &[(0, 0, 1), (2, 0, 1), (0, 1, 3), (3, 1, 3)],
        )
        .unwrap();
        let t = nfa.trim();
        assert_eq!(t.state_count(), 2);
        assert_eq!(t.transitions(0), &[(0, 1)]);
        assert!(t.accepts_word(&ab().parse_word("a").unwrap()).unwrap());
        assert!(!t.accepts_word(&ab().parse_word("a a").unwrap()).unwrap());
    }

    #[test]
    fn dump_format_is_stable() {
        let a = ab();
        let single = Nfa::single_word(&a, &w(&a, "a b")).unwrap();
        assert_eq!(
            single.dump(),
            "state 0 initial\nstate 1\nstate 2 accepting\ntrans 0 a 1\ntrans 1 b 2\n"
        );
        let conv = ConvolutionAlphabet::new(a, 2).unwrap();
        let la = Letter::from_rank(0);
        let pair = conv.symbol(&[Some(la), None]).unwrap().unwrap();
        let tiny = Nfa::new(conv, 2, &[0], &[1], &[(0, pair, 1)]).unwrap();
        assert_eq!(
            tiny.dump(),
            "state 0 initial\nstate 1 accepting\ntrans 0 (a,_) 1\n"
        );
    }

    #[test]
    fn new_validates_indices() {
        let a = ConvolutionAlphabet::plain(ab());
        assert_eq!(
            Nfa::new(a.clone(), 1, &[1], &[], &[]).unwrap_err(),
            AutomatonError::StateOutOfRange { state: 1, count: 1 }
        );
        assert_eq!(
            Nfa::new(a, 1, &[0], &[0], &[(0, 5, 0)]).unwrap_err(),
            AutomatonError::SymbolOutOfRange {
                symbol: 5,
                count: 2
            }
        );
    }
}
