//! Bounded enumeration of generated words.
//!
//! `enumerate_up_to(g, max_len)` materializes every word of length at most
//! `max_len` that the grammar derives, sorted lexicographically. The core is
//! a memo table of word sets per (nonterminal, exact length), filled length
//! by length; a production's words are assembled by splicing memoized
//! segments, with minimum-length pruning to skip impossible splits.
//!
//! Within one length, a right side consisting of a single nonterminal (a unit
//! production) depends on word sets of the *same* length. Nonterminals are
//! therefore processed children-first along the unit-production graph; if
//! that graph is cyclic the pass falls back to a monotone fixpoint loop.

use crate::alphabet::{Letter, Word};
use crate::grammar::{Grammar, GrammarError, Symbol};
use crate::parallel;

type RawWord = Vec<Letter>;

/// Minimum derivable word length per nonterminal (`usize::MAX` when the
/// nonterminal generates nothing).
pub(crate) fn min_word_lengths(g: &Grammar) -> Vec<usize> {
    let n = g.nonterminal_count();
    let mut min_len = vec![usize::MAX; n];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut total = 0usize;
            let mut possible = true;
            for s in &p.rhs {
                match s {
                    Symbol::Terminal(_) => total = total.saturating_add(1),
                    Symbol::Nonterminal(x) => {
                        let m = min_len[x.index()];
                        if m == usize::MAX {
                            possible = false;
                            break;
                        }
                        total = total.saturating_add(m);
                    }
                }
            }
            if possible && total < min_len[p.lhs.index()] {
                min_len[p.lhs.index()] = total;
                changed = true;
            }
        }
        if !changed {
            return min_len;
        }
    }
}

/// Children-first order along unit productions, or `None` if that graph has
/// a cycle.
fn unit_topological_order(g: &Grammar) -> Option<Vec<usize>> {
    let n = g.nonterminal_count();
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in g.productions() {
        if let [Symbol::Nonterminal(x)] = p.rhs.as_slice() {
            deps[p.lhs.index()].push(x.index());
        }
    }
    for d in &mut deps {
        d.sort_unstable();
        d.dedup();
    }
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (lhs, ds) in deps.iter().enumerate() {
        indegree[lhs] = ds.len();
        for &x in ds {
            dependents[x].push(lhs);
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    while let Some(x) = ready.pop() {
        order.push(x);
        for &lhs in &dependents[x] {
            indegree[lhs] -= 1;
            if indegree[lhs] == 0 {
                ready.push(lhs);
            }
        }
    }
    (order.len() == n).then_some(order)
}

struct Enumerator<'g> {
    g: &'g Grammar,
    min_len: Vec<usize>,
    /// memo[nt][len]: sorted, deduplicated words of exactly `len` letters.
    memo: Vec<Vec<Vec<RawWord>>>,
    stored: usize,
    cap: usize,
}

impl<'g> Enumerator<'g> {
    /// Words of exactly `len` letters derivable from `nt`, using only memo
    /// entries of smaller lengths plus the current state of same-length
    /// entries (complete when visited children-first).
    fn expand_nonterminal(&self, nt: usize, len: usize) -> Vec<RawWord> {
        let prods: Vec<&crate::grammar::Production> = self
            .g
            .productions_of(crate::grammar::NonterminalId::new(nt))
            .collect();
        let mut chunks = parallel::map_indexed(prods.len(), |i| {
            let p = prods[i];
            let mut suffix_min = vec![0usize; p.rhs.len() + 1];
            for pos in (0..p.rhs.len()).rev() {
                let own = match &p.rhs[pos] {
                    Symbol::Terminal(_) => 1,
                    Symbol::Nonterminal(x) => self.min_len[x.index()],
                };
                suffix_min[pos] = own.saturating_add(suffix_min[pos + 1]);
            }
            let mut out = Vec::new();
            let mut current = Vec::with_capacity(len);
            self.splice(&p.rhs, 0, len, &suffix_min, &mut current, &mut out);
            out
        });
        let total: usize = chunks.iter().map(Vec::len).sum();
        let mut words: Vec<RawWord> = Vec::with_capacity(total);
        for chunk in &mut chunks {
            words.append(chunk);
        }
        parallel::sort_unstable(&mut words);
        words.dedup();
        words
    }

    fn splice(
        &self,
        rhs: &[Symbol],
        pos: usize,
        remaining: usize,
        suffix_min: &[usize],
        current: &mut Vec<Letter>,
        out: &mut Vec<RawWord>,
    ) {
        if remaining < suffix_min[pos] {
            return;
        }
        if pos == rhs.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        match &rhs[pos] {
            Symbol::Terminal(t) => {
                current.push(*t);
                self.splice(rhs, pos + 1, remaining - 1, suffix_min, current, out);
                current.pop();
            }
            Symbol::Nonterminal(x) => {
                let lo = self.min_len[x.index()];
                if lo == usize::MAX {
                    return;
                }
                let hi = remaining - suffix_min[pos + 1];
                for k in lo..=hi {
                    let depth = current.len();
                    for w in &self.memo[x.index()][k] {
                        current.extend_from_slice(w);
                        self.splice(rhs, pos + 1, remaining - k, suffix_min, current, out);
                        current.truncate(depth);
                    }
                }
            }
        }
    }
}

pub(crate) fn enumerate_up_to(
    g: &Grammar,
    max_len: usize,
    cap: usize,
) -> Result<Vec<Word>, GrammarError> {
    let n = g.nonterminal_count();
    let order = unit_topological_order(g);
    let mut e = Enumerator {
        g,
        min_len: min_word_lengths(g),
        memo: vec![vec![Vec::new(); max_len + 1]; n],
        stored: 0,
        cap,
    };

    for len in 1..=max_len {
        match &order {
            Some(order) => {
                for &nt in order {
                    let words = e.expand_nonterminal(nt, len);
                    e.stored += words.len();
                    e.memo[nt][len] = words;
                    if e.stored > e.cap {
                        return Err(GrammarError::EnumerationCapExceeded { cap });
                    }
                }
            }
            None => {
                // Unit-production cycle: iterate to a fixpoint. Word sets
                // only grow, and each round either adds a word somewhere or
                // terminates, so this converges after at most #nonterminal
                // rounds of propagation around any cycle.
                loop {
                    let mut changed = false;
                    for nt in 0..n {
                        let words = e.expand_nonterminal(nt, len);
                        if words.len() != e.memo[nt][len].len() {
                            changed = true;
                        }
                        e.stored = e.stored - e.memo[nt][len].len() + words.len();
                        e.memo[nt][len] = words;
                        if e.stored > e.cap {
                            return Err(GrammarError::EnumerationCapExceeded { cap });
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }
    }

    let start = g.start().index();
    let total: usize = (1..=max_len).map(|len| e.memo[start][len].len()).sum();
    let mut all = Vec::with_capacity(total);
    for len in 1..=max_len {
        all.append(&mut e.memo[start][len]);
    }
    parallel::sort_unstable(&mut all);
    Ok(all.into_iter().map(Word::from_letters).collect())
}
