//! Exact order analysis for regular languages and bounded density probing
//! for the reduction grammars.
//!
//! For a right-linear grammar, the lexicographic order on its language is an
//! automatic structure: the order relation, restricted to pairs of generated
//! words, is itself a regular language of two-track convolutions. Density
//! ("every pair has something in between"), endpoints (least/greatest
//! elements), cardinality, and — for infinite dense languages — the exact
//! countable order type are all decided exactly by automaton constructions,
//! each returning a concrete witness when the property fails.
//!
//! For the context-free reduction grammars the same questions are undecidable
//! in general; [`probe_density_cfl`] screens them empirically over a bounded
//! enumeration. Given the reduction artifacts it resolves *every* consecutive
//! pair: either an explicit middle word, or a detected solution of the
//! underlying correspondence instance (the only way a gap can occur).

use std::error::Error;
use std::fmt;
use std::fmt::Write as _;

use crate::alphabet::{AlphabetError, Letter, OrderedAlphabet, Word};
use crate::automaton::{AutomatonError, Emptiness, LanguageSize, Nfa};
use crate::grammar::{Grammar, GrammarError};
use crate::lex::{first_difference, FirstDifference, LexError};
use crate::parallel;
use crate::pcp::{DeltaClass, PcpError, ReductionArtifacts, Solution};

/// Errors from the order-analysis procedures.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrderError {
    Alphabet(AlphabetError),
    Grammar(GrammarError),
    Automaton(AutomatonError),
    Pcp(PcpError),
    /// A middle was requested for a pair that is not strictly increasing.
    NotStrictlyBelow,
    /// The probed grammar is not the grammar of the supplied reduction.
    GrammarMismatch,
    /// An internal consistency check failed; this indicates a bug.
    Internal(String),
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::Alphabet(e) => e.fmt(f),
            OrderError::Grammar(e) => e.fmt(f),
            OrderError::Automaton(e) => e.fmt(f),
            OrderError::Pcp(e) => e.fmt(f),
            OrderError::NotStrictlyBelow => {
                write!(f, "the first word must be strictly below the second")
            }
            OrderError::GrammarMismatch => {
                write!(
                    f,
                    "the grammar is not the reduction grammar of the given instance"
                )
            }
            OrderError::Internal(msg) => write!(f, "internal consistency check failed: {msg}"),
        }
    }
}

impl Error for OrderError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        // The wrapping variants forward the inner message verbatim in
        // `Display`, so they stay transparent in the chain as well.
        match self {
            OrderError::Alphabet(e) => e.source(),
            OrderError::Grammar(e) => e.source(),
            OrderError::Automaton(e) => e.source(),
            OrderError::Pcp(e) => e.source(),
            _ => None,
        }
    }
}

impl From<AlphabetError> for OrderError {
    fn from(e: AlphabetError) -> OrderError {
        OrderError::Alphabet(e)
    }
}

impl From<GrammarError> for OrderError {
    fn from(e: GrammarError) -> OrderError {
        OrderError::Grammar(e)
    }
}

impl From<AutomatonError> for OrderError {
    fn from(e: AutomatonError) -> OrderError {
        OrderError::Automaton(e)
    }
}

impl From<PcpError> for OrderError {
    fn from(e: PcpError) -> OrderError {
        OrderError::Pcp(e)
    }
}

impl From<LexError> for OrderError {
    fn from(e: LexError) -> OrderError {
        match e {
            LexError::Alphabet(a) => OrderError::Alphabet(a),
            LexError::NotStrictlyOrdered => OrderError::NotStrictlyBelow,
        }
    }
}

/// Whether the language order is dense.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DensityVerdict {
    /// Every strictly increasing pair has a generated word in between.
    Dense,
    /// An adjacent pair: nothing generated lies strictly between.
    NotDense { lower: Word, upper: Word },
    /// Fewer than two words: there are no pairs to separate.
    TooFewElements,
}

/// The order type of a regular language, exact.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderType {
    /// A finite order of the given size.
    Finite(u64),
    /// Dense, no least and no greatest element.
    Eta,
    /// Dense with a least element only.
    OnePlusEta,
    /// Dense with a greatest element only.
    EtaPlusOne,
    /// Dense with both endpoints.
    OnePlusEtaPlusOne,
    /// Infinite but not dense.
    Other,
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderType::Finite(k) => write!(f, "finite({k})"),
            OrderType::Eta => write!(f, "eta"),
            OrderType::OnePlusEta => write!(f, "1+eta"),
            OrderType::EtaPlusOne => write!(f, "eta+1"),
            OrderType::OnePlusEtaPlusOne => write!(f, "1+eta+1"),
            OrderType::Other => write!(f, "other"),
        }
    }
}

/// Full order analysis of a regular language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderReport {
    pub cardinality: LanguageSize,
    pub density: DensityVerdict,
    pub least: Option<Word>,
    pub greatest: Option<Word>,
    pub order_type: OrderType,
    alphabet: OrderedAlphabet,
}

impl fmt::Display for OrderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cardinality {
            LanguageSize::Empty => writeln!(f, "cardinality=0")?,
            LanguageSize::Finite(k) => writeln!(f, "cardinality={k}")?,
            LanguageSize::Infinite => writeln!(f, "cardinality=infinite")?,
        }
        match &self.density {
            DensityVerdict::Dense => writeln!(f, "dense=yes")?,
            DensityVerdict::NotDense { lower, upper } => {
                writeln!(f, "dense=no")?;
                writeln!(
                    f,
                    "adjacent={} | {}",
                    self.alphabet.render(lower),
                    self.alphabet.render(upper)
                )?;
            }
            DensityVerdict::TooFewElements => writeln!(f, "dense=trivial")?,
        }
        match &self.least {
            Some(w) => writeln!(f, "least={}", self.alphabet.render(w))?,
            None => writeln!(f, "least=none")?,
        }
        match &self.greatest {
            Some(w) => writeln!(f, "greatest={}", self.alphabet.render(w))?,
            None => writeln!(f, "greatest=none")?,
        }
        write!(f, "order_type={}", self.order_type)
    }
}

/// Compiles a grammar (trimmed first, so only useful productions must be
/// right-linear) into a trimmed automaton for its language.
fn language_nfa(g: &Grammar) -> Result<Nfa, OrderError> {
    let trimmed = g.trim();
    Ok(Nfa::from_right_linear(&trimmed)?.trim())
}

/// Decides whether the language order of a right-linear grammar is dense,
/// returning an adjacent pair when it is not.
pub fn decide_dense_regular(g: &Grammar) -> Result<DensityVerdict, OrderError> {
    let a = language_nfa(g)?;
    density_of(&a, g.alphabet())
}

fn density_of(a: &Nfa, base: &OrderedAlphabet) -> Result<DensityVerdict, OrderError> {
    // Density needs at least two words to be a meaningful question.
    match a.emptiness() {
        Emptiness::Empty => return Ok(DensityVerdict::TooFewElements),
        Emptiness::Witness(symbols) => {
            let first = a
                .alphabet()
                .deconvolve(&symbols)?
                .pop()
                .expect("single-track witness decodes to one word");
            let rest = a.intersect(&Nfa::single_word(base, &first)?.complement()?)?;
            if rest.is_empty() {
                return Ok(DensityVerdict::TooFewElements);
            }
        }
    }

    let lex = Nfa::lex_relation(base);
    // Increasing pairs of generated words.
    let pairs = lex
        .intersect(&a.lift(2, &[0])?)?
        .intersect(&a.lift(2, &[1])?)?;
    // (x, z) such that some generated y satisfies x < y < z.
    let separated = lex
        .lift(3, &[0, 1])?
        .intersect(&lex.lift(3, &[1, 2])?)?
        .intersect(&a.lift(3, &[1])?)?
        .project(&[0, 2])?;
    let adjacent = pairs.intersect(&separated.complement()?)?;
    match adjacent.emptiness() {
        Emptiness::Empty => Ok(DensityVerdict::Dense),
        Emptiness::Witness(symbols) => {
            let mut pair = adjacent.alphabet().deconvolve(&symbols)?;
            let upper = pair.pop().expect("two tracks");
            let lower = pair.pop().expect("two tracks");
            Ok(DensityVerdict::NotDense { lower, upper })
        }
    }
}

/// Computes the least and greatest generated words of a right-linear grammar,
/// if they exist.
pub fn decide_endpoints_regular(g: &Grammar) -> Result<(Option<Word>, Option<Word>), OrderError> {
    let a = language_nfa(g)?;
    endpoints_of(&a, g.alphabet())
}

fn endpoints_of(
    a: &Nfa,
    base: &OrderedAlphabet,
) -> Result<(Option<Word>, Option<Word>), OrderError> {
    let lex = Nfa::lex_relation(base);
    let decode_one = |e: Emptiness| -> Result<Option<Word>, OrderError> {
        match e {
            Emptiness::Empty => Ok(None),
            Emptiness::Witness(symbols) => Ok(Some(
                a.alphabet()
                    .deconvolve(&symbols)?
                    .pop()
                    .expect("single-track witness decodes to one word"),
            )),
        }
    };
    // {v : some generated u is strictly below v}
    let non_minimal = lex.intersect(&a.lift(2, &[0])?)?.project(&[1])?;
    let least = decode_one(a.intersect(&non_minimal.complement()?)?.emptiness())?;
    // {u : some generated v is strictly above u}
    let non_maximal = lex.intersect(&a.lift(2, &[1])?)?.project(&[0])?;
    let greatest = decode_one(a.intersect(&non_maximal.complement()?)?.emptiness())?;
    Ok((least, greatest))
}

/// Classifies the order type of a right-linear grammar's language exactly.
///
/// A countably infinite dense order is, by its endpoints, one of exactly
/// four types; an infinite non-dense language is reported as
/// [`OrderType::Other`], and finite languages by their size.
pub fn classify_regular_order_type(g: &Grammar) -> Result<OrderReport, OrderError> {
    let a = language_nfa(g)?;
    let cardinality = a.cardinality()?;
    let density = density_of(&a, g.alphabet())?;
    let (least, greatest) = endpoints_of(&a, g.alphabet())?;
    let order_type = match cardinality {
        LanguageSize::Empty => OrderType::Finite(0),
        LanguageSize::Finite(k) => OrderType::Finite(k),
        LanguageSize::Infinite => match density {
            DensityVerdict::Dense => match (&least, &greatest) {
                (None, None) => OrderType::Eta,
                (Some(_), None) => OrderType::OnePlusEta,
                (None, Some(_)) => OrderType::EtaPlusOne,
                (Some(_), Some(_)) => OrderType::OnePlusEtaPlusOne,
            },
            _ => OrderType::Other,
        },
    };
    Ok(OrderReport {
        cardinality,
        density,
        least,
        greatest,
        order_type,
        alphabet: g.alphabet().clone(),
    })
}

/// Outcome of a middle-word request on the reduction language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MiddleOutcome {
    /// A generated word strictly between the pair.
    Middle(Word),
    /// The pair is a gap pair: its shared body encodes this solution of the
    /// underlying instance, and nothing generated lies between.
    SolutionDetected(Solution),
}

/// Produces a generated word strictly between two generated words of the
/// reduction language, or detects that the pair is a solution gap.
///
/// The construction follows the shape of the first difference. Writing
/// `u = w·c·…` and `v = w·d·…` with `c < d`:
///
/// * `c` is the cent and `d` the dollar: then `w` encodes a solution and
///   the pair is a gap — no middle exists.
/// * both difference letters lie in the same letter block: the block's
///   sublanguage is dense in itself, and an explicit middle is built from
///   the two tails.
/// * `c` lies in a letter block and `d` beyond it: inserting the block's
///   largest interior letter before the final letter of `u` gives a middle.
/// * `d` lies in a letter block and `c` before it: inserting the block's
///   smallest interior letter before the final letter of `v` gives a middle.
/// * both are plain letters: `w` extended by one interior letter of `c`'s
///   block gives a middle.
///
/// Every returned word is re-verified for membership and order before being
/// handed back.
pub fn middle_witness(
    r: &ReductionArtifacts,
    lower: &Word,
    upper: &Word,
) -> Result<MiddleOutcome, OrderError> {
    r.delta().check_word(lower)?;
    r.delta().check_word(upper)?;
    for w in [lower, upper] {
        if !r.grammar().recognize(w)? {
            return Err(PcpError::NotInLanguage(r.delta().render(w)).into());
        }
    }
    middle_core(r, lower, upper)
}

/// The case dispatch behind [`middle_witness`]; assumes both words are
/// generated (callers guarantee it) and checks everything else.
fn middle_core(
    r: &ReductionArtifacts,
    lower: &Word,
    upper: &Word,
) -> Result<MiddleOutcome, OrderError> {
    let split = match first_difference(lower, upper, r.delta())? {
        FirstDifference::PrefixRelated => {
            return Err(OrderError::Internal(
                "generated words must be prefix-incomparable".into(),
            ))
        }
        FirstDifference::Split(s) => s,
    };
    let w = &split.common;
    let classify = |letter: Letter| {
        r.classify(letter)
            .ok_or_else(|| OrderError::Internal("letter outside the reduction alphabet".into()))
    };
    let c = classify(split.lower_letter)?;
    let d = classify(split.upper_letter)?;

    let z = match (c, d) {
        (DeltaClass::Cent, DeltaClass::Dollar) => {
            // Shared body = indices · reversed concatenation: the indices
            // equalize the two sides, which is exactly a solution.
            let mut indices = Vec::new();
            for &l in w.letters() {
                match r.classify(l) {
                    Some(DeltaClass::C(j)) if j <= r.size() => indices.push(j),
                    _ => break,
                }
            }
            let solution = Solution::new(indices)
                .map_err(|_| OrderError::Internal("gap body carries no indices".into()))?;
            r.instance().verify_solution(&solution).map_err(|e| {
                OrderError::Internal(format!("gap body does not verify as a solution: {e}"))
            })?;
            return Ok(MiddleOutcome::SolutionDetected(solution));
        }
        (DeltaClass::D { j: i, .. }, DeltaClass::D { j, .. }) if i == j => {
            same_block_middle(r, j, w, lower, upper)?
        }
        // d lies beyond every letter of c's block: push u upward inside it.
        (DeltaClass::D { j, .. }, _) => insert_before_final(lower, r.d_letter(j, 2)),
        // c lies below every interior letter of d's block: pull v downward.
        (DeltaClass::C(_), DeltaClass::D { j, .. }) => insert_before_final(upper, r.d_letter(j, 0)),
        // Two plain letters: the shared prefix is a valid head, and one
        // interior letter of c's block lands strictly between c and d.
        (DeltaClass::C(i), _) => {
            let mut letters = w.letters().to_vec();
            letters.push(r.d_letter(i, 1));
            Word::from_letters(letters)
        }
        _ => {
            return Err(OrderError::Internal(
                "impossible letter combination at the first difference".into(),
            ))
        }
    };

    if !r.grammar().recognize(&z)? {
        return Err(OrderError::Internal(format!(
            "constructed middle '{}' is not generated",
            r.delta().render(&z)
        )));
    }
    if !(lower < &z && &z < upper) {
        return Err(OrderError::Internal(format!(
            "constructed middle '{}' is not between the pair",
            r.delta().render(&z)
        )));
    }
    Ok(MiddleOutcome::Middle(z))
}

/// Middle for a pair whose difference letters lie in the same block `j`.
/// Both tails are then full words of the block sublanguage
/// `{d_{j,0}, d_{j,2}}*·d_{j,1}`, which is dense in itself.
fn same_block_middle(
    r: &ReductionArtifacts,
    j: usize,
    w: &Word,
    lower: &Word,
    upper: &Word,
) -> Result<Word, OrderError> {
    let d0 = r.d_letter(j, 0);
    let d1 = r.d_letter(j, 1);
    let d2 = r.d_letter(j, 2);
    let lower_tail = &lower.letters()[w.len()..];
    let upper_tail = &upper.letters()[w.len()..];
    let mut z = w.letters().to_vec();
    match (lower_tail[0], upper_tail[0]) {
        // (d0…, d2…): the bare final letter sits between the two branches.
        (a, b) if a == d0 && b == d2 => z.push(d1),
        // (d0…, d1): the upper tail is the one-letter word; climb above the
        // lower tail by extending its leading run of the larger branch.
        (a, b) if a == d0 && b == d1 => {
            let rest = &lower_tail[1..];
            let run = rest.iter().take_while(|&&l| l == d2).count();
            z.push(d0);
            z.extend(std::iter::repeat_n(d2, run + 1));
            z.push(d1);
        }
        // (d1, d2…): the lower tail is the one-letter word; dive below the
        // upper tail by extending its leading run of the smaller branch.
        (a, b) if a == d1 && b == d2 => {
            let rest = &upper_tail[1..];
            let run = rest.iter().take_while(|&&l| l == d0).count();
            let extra = if rest[run] == d1 { run + 1 } else { run };
            z.push(d2);
            z.extend(std::iter::repeat_n(d0, extra));
            z.push(d1);
        }
        _ => {
            return Err(OrderError::Internal(
                "same-block difference letters are not ordered as expected".into(),
            ))
        }
    }
    Ok(Word::from_letters(z))
}

/// Inserts a letter immediately before the final letter of a word.
fn insert_before_final(word: &Word, letter: Letter) -> Word {
    let letters = word.letters();
    let mut out = Vec::with_capacity(letters.len() + 1);
    out.extend_from_slice(&letters[..letters.len() - 1]);
    out.push(letter);
    out.push(letters[letters.len() - 1]);
    Word::from_letters(out)
}

/// How one consecutive pair of the bounded enumeration was resolved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PairOutcome {
    /// A generated word strictly between the pair.
    Middle(Word),
    /// The pair is a gap pair encoding this solution.
    SolutionDetected(Solution),
    /// No middle was found within the search bound (plain mode only; this
    /// never claims the pair is adjacent).
    Unresolved,
}

/// One consecutive pair of the bounded enumeration and its resolution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairProbe {
    pub lower: Word,
    pub upper: Word,
    pub outcome: PairOutcome,
}

/// Report of a bounded density probe over an enumerated language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensityProbeReport {
    pub max_len: usize,
    pub word_count: usize,
    pub pairs: Vec<PairProbe>,
    pub middles_found: usize,
    pub solutions_detected: usize,
    pub unresolved: usize,
    /// Fewer than two words were generated within the bound.
    pub too_few: bool,
    alphabet: OrderedAlphabet,
}

impl fmt::Display for DensityProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "max_len={} words={} pairs={} middles={} solutions={} unresolved={}",
            self.max_len,
            self.word_count,
            self.pairs.len(),
            self.middles_found,
            self.solutions_detected,
            self.unresolved
        )?;
        if self.too_few {
            writeln!(f, "too few words to form pairs")?;
        }
        for p in &self.pairs {
            let mut line = format!(
                "{} | {}",
                self.alphabet.render(&p.lower),
                self.alphabet.render(&p.upper)
            );
            match &p.outcome {
                PairOutcome::Middle(z) => {
                    write!(line, " -> middle {}", self.alphabet.render(z)).unwrap()
                }
                PairOutcome::SolutionDetected(s) => write!(line, " -> solution {s}").unwrap(),
                PairOutcome::Unresolved => line.push_str(" -> unresolved"),
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Probes density of a context-free language over a bounded enumeration:
/// every consecutive pair of generated words within `max_len` is resolved.
///
/// With reduction artifacts (whose grammar must equal `g`), every pair is
/// resolved exactly: a middle word or a detected solution. Without them, a
/// middle is searched among words up to `max_len + 4`; pairs without one are
/// reported unresolved, never claimed adjacent.
pub fn probe_density_cfl(
    g: &Grammar,
    max_len: usize,
    reduction: Option<&ReductionArtifacts>,
) -> Result<DensityProbeReport, OrderError> {
    if let Some(r) = reduction {
        if r.grammar() != g {
            return Err(OrderError::GrammarMismatch);
        }
    }
    let words = g.enumerate_up_to(max_len)?;
    let mut report = DensityProbeReport {
        max_len,
        word_count: words.len(),
        pairs: Vec::new(),
        middles_found: 0,
        solutions_detected: 0,
        unresolved: 0,
        too_few: words.len() <= 1,
        alphabet: g.alphabet().clone(),
    };
    if report.too_few {
        return Ok(report);
    }

    let pair_count = words.len() - 1;
    let outcomes: Vec<Result<PairOutcome, OrderError>> = match reduction {
        Some(r) => parallel::map_indexed(pair_count, |i| {
            middle_core(r, &words[i], &words[i + 1]).map(|m| match m {
                MiddleOutcome::Middle(z) => PairOutcome::Middle(z),
                MiddleOutcome::SolutionDetected(s) => PairOutcome::SolutionDetected(s),
            })
        }),
        None => {
            let deeper = g.enumerate_up_to(max_len + 4)?;
            parallel::map_indexed(pair_count, |i| {
                let (lower, upper) = (&words[i], &words[i + 1]);
                let at = deeper.partition_point(|w| w <= lower);
                if at < deeper.len() && &deeper[at] < upper {
                    Ok(PairOutcome::Middle(deeper[at].clone()))
                } else {
                    Ok(PairOutcome::Unresolved)
                }
            })
        }
    };

    report.pairs.reserve(pair_count);
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        match &outcome {
            PairOutcome::Middle(_) => report.middles_found += 1,
            PairOutcome::SolutionDetected(_) => report.solutions_detected += 1,
            PairOutcome::Unresolved => report.unresolved += 1,
        }
        report.pairs.push(PairProbe {
            lower: words[i].clone(),
            upper: words[i + 1].clone(),
            outcome,
        });
    }
    Ok(report)
}
