//! Chart-based recognition.
//!
//! A classic Earley recognizer, simplified by the crate-wide guarantee that
//! productions are ε-free: a completion always spans at least one letter, so
//! the chart cell being completed from is strictly older than the current one
//! and never grows while it is scanned.

use std::collections::HashSet;

use crate::alphabet::Word;
use crate::grammar::{Grammar, Symbol};

/// (production index, dot position, origin cell).
type Item = (u32, u32, u32);

struct Chart {
    cells: Vec<Vec<Item>>,
    seen: Vec<HashSet<Item>>,
}

impl Chart {
    fn new(positions: usize) -> Chart {
        Chart {
            cells: vec![Vec::new(); positions],
            seen: vec![HashSet::new(); positions],
        }
    }

    fn push(&mut self, cell: usize, item: Item) {
        if self.seen[cell].insert(item) {
            self.cells[cell].push(item);
        }
    }
}

pub(crate) fn earley_recognize(g: &Grammar, w: &Word) -> bool {
    let letters = w.letters();
    let n = letters.len();
    let prods = g.productions();
    let mut chart = Chart::new(n + 1);

    for (i, p) in prods.iter().enumerate() {
        if p.lhs == g.start() {
            chart.push(0, (i as u32, 0, 0));
        }
    }

    // `k` walks one more position than `letters` has and later cells are
    // pushed to while cell `k` is scanned, so no iterator fits here.
    #[allow(clippy::needless_range_loop)]
    for k in 0..=n {
        let mut i = 0;
        while i < chart.cells[k].len() {
            let (pi, dot, origin) = chart.cells[k][i];
            i += 1;
            let rhs = &prods[pi as usize].rhs;
            if (dot as usize) < rhs.len() {
                match rhs[dot as usize] {
                    Symbol::Terminal(t) => {
                        if k < n && letters[k] == t {
                            chart.push(k + 1, (pi, dot + 1, origin));
                        }
                    }
                    Symbol::Nonterminal(x) => {
                        for (qi, q) in prods.iter().enumerate() {
                            if q.lhs == x {
                                chart.push(k, (qi as u32, 0, k as u32));
                            }
                        }
                    }
                }
            } else {
                let lhs = prods[pi as usize].lhs;
                let from = origin as usize;
                debug_assert!(from < k, "ε-free completions always advance");
                let waiting = chart.cells[from].len();
                for j in 0..waiting {
                    let (qi, qdot, qorigin) = chart.cells[from][j];
                    let qrhs = &prods[qi as usize].rhs;
                    if (qdot as usize) < qrhs.len()
                        && qrhs[qdot as usize] == Symbol::Nonterminal(lhs)
                    {
                        chart.push(k, (qi, qdot + 1, qorigin));
                    }
                }
            }
        }
    }

    chart.cells[n].iter().any(|&(pi, dot, origin)| {
        origin == 0
            && prods[pi as usize].lhs == g.start()
            && dot as usize == prods[pi as usize].rhs.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recognizes(g: &Grammar, word: &str) -> bool {
        let w = g.alphabet().parse_word(word).unwrap();
        g.recognize(&w).unwrap()
    }

    #[test]
    fn right_linear_language() {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a S | b\n").unwrap();
        for yes in ["b", "a b", "a a a b"] {
            assert!(recognizes(&g, yes), "{yes} should be accepted");
        }
        for no in ["-", "a", "b b", "b a", "a a"] {
            assert!(!recognizes(&g, no), "{no} should be rejected");
        }
    }

    #[test]
    fn center_recursive_language() {
        // Even-length palindromic bracketing: { a^k b^k | k >= 1 }.
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> a S b | a b\n").unwrap();
        for yes in ["a b", "a a b b", "a a a b b b"] {
            assert!(recognizes(&g, yes), "{yes} should be accepted");
        }
        for no in ["-", "a", "b a", "a a b", "a b a b"] {
            assert!(!recognizes(&g, no), "{no} should be rejected");
        }
    }

    #[test]
    fn unit_chains_resolve() {
        let g = Grammar::parse("alphabet: a b\nstart: S\nS -> T\nT -> U\nU -> a U | b\n").unwrap();
        assert!(recognizes(&g, "a a b"));
        assert!(!recognizes(&g, "a a"));
    }

    #[test]
    fn ambiguity_does_not_confuse_recognition() {
        let g = Grammar::parse("alphabet: a\nstart: S\nS -> S S | a\n").unwrap();
        assert!(recognizes(&g, "a"));
        assert!(recognizes(&g, "a a a a"));
        assert!(!recognizes(&g, "-"));
    }

    #[test]
    fn empty_language_rejects_everything() {
        let g = Grammar::parse("alphabet: a\nstart: S\nS -> a X\n").unwrap();
        assert!(!recognizes(&g, "a"));
        assert!(!recognizes(&g, "-"));
    }
}
