//! Exact lexicographic-order analysis for formal languages.
//!
//! The crate has three layers:
//!
//! * **Grammars** ([`grammar`], [`enumerate`]): ordered alphabets, context-free
//!   grammars with ε-free productions, chart-based recognition, and bounded
//!   enumeration of the generated language in lexicographic order.
//! * **Correspondence systems** ([`pcp`]): instances of the word matching
//!   problem over `{a, b}`, a bounded solver, and the reduction that compiles an
//!   instance into a prefix grammar whose language order is dense exactly when
//!   the instance has no solution. Witness constructions (gap pairs, middle
//!   words, order-theoretic neighbors) make the correspondence executable.
//! * **Automata** ([`automaton`], [`order`]): synchronized multi-track automata
//!   over padded convolutions, the boolean/projection toolkit on top of them,
//!   and exact decision procedures for density, endpoints, and order type of
//!   regular languages.
//!
//! Everything is deterministic: enumeration output, automaton state numbering,
//! and emptiness witnesses do not depend on hash iteration order or thread
//! scheduling. The `parallel` feature (on by default) switches the inner loops
//! to rayon data parallelism without changing any result.

pub mod alphabet;
pub mod automaton;
pub mod enumerate;
pub mod grammar;
pub mod lex;
pub mod order;
mod parallel;
pub mod pcp;
mod recognize;

pub use alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
pub use automaton::{AutomatonError, ConvolutionAlphabet, Emptiness, LanguageSize, Nfa};
pub use grammar::{Grammar, GrammarBuilder, GrammarError, NonterminalId, Production, Symbol};
pub use lex::{
    binary_alphabet, encode_grammar, first_difference, lex_compare, prefix_free_bounded,
    prefix_free_bounded_with_cap, BinaryCode, CodingError, FirstDifference, LexError,
    PrefixVerdict, SplitDifference,
};
pub use order::{
    DensityProbeReport, DensityVerdict, MiddleOutcome, OrderError, OrderReport, OrderType,
    PairOutcome, PairProbe,
};
pub use pcp::{
    AbLetter, AbWord, AdjacencyCertificate, AdjacencyOutcome, Neighbors, PcpError, PcpInstance,
    PcpPair, ReductionArtifacts, SearchOutcome, Solution,
};

/// Default ceiling on the total number of words materialized by bounded
/// enumeration before the operation reports a resource error.
pub const DEFAULT_WORD_CAP: usize = 10_000_000;

/// Default ceiling on constructed automaton states for subset constructions.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;
