//! Acceptance suite: one test per criterion, each printing a `PASS` line and
//! holding to its time budget.

use std::time::{Duration, Instant};

use lexord::order::{classify_regular_order_type, middle_witness, probe_density_cfl};
use lexord::{
    binary_alphabet, encode_grammar, lex_compare, AdjacencyOutcome, BinaryCode, Grammar,
    MiddleOutcome, Nfa, OrderType, OrderedAlphabet, PairOutcome, PcpInstance, ReductionArtifacts,
    SearchOutcome, Solution, Word,
};

fn artifacts(text: &str) -> ReductionArtifacts {
    ReductionArtifacts::new(PcpInstance::parse(text).unwrap()).unwrap()
}

fn budget(start: Instant, limit: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= limit,
        "{what} took {elapsed:?}, budget {limit:?}"
    );
}

/// Every word over `a` up to `max_len`, the empty word included, in
/// length-major order (every length fully enumerated).
fn all_words(a: &OrderedAlphabet, max_len: usize) -> Vec<Word> {
    let mut layers: Vec<Vec<Word>> = vec![vec![Word::from_letters(Vec::new())]];
    for len in 1..=max_len {
        let mut layer = Vec::new();
        for w in &layers[len - 1] {
            for letter in a.letters() {
                let mut next = w.letters().to_vec();
                next.push(letter);
                layer.push(Word::from_letters(next));
            }
        }
        layers.push(layer);
    }
    layers.into_iter().flatten().collect()
}

#[test]
fn criterion_1_reduction_shape() {
    let start = Instant::now();
    for n in 1..=6usize {
        let pairs: String = (0..n).map(|_| "ab ba\n").collect();
        let r = artifacts(&pairs);
        let delta = r.delta();
        assert_eq!(delta.len(), 4 * n + 10, "alphabet size for n={n}");
        assert_eq!(
            r.grammar().productions().len(),
            9 * n + 13,
            "productions for n={n}"
        );
        // The letter chain: each block contributes c_j < d_j0 < d_j1 < d_j2,
        // and the two endmarkers sit at the top, adjacent.
        for j in 1..=(n + 2) {
            let c = if j <= n {
                delta.letter(&j.to_string()).unwrap()
            } else if j == n + 1 {
                delta.letter("a").unwrap()
            } else {
                delta.letter("b").unwrap()
            };
            assert_eq!(c.rank(), 4 * (j - 1));
            for k in 0..3 {
                assert_eq!(r.d_letter(j, k).rank(), 4 * (j - 1) + 1 + k);
            }
        }
        assert_eq!(r.cent().rank(), 4 * (n + 2));
        assert_eq!(r.dollar().rank(), 4 * (n + 2) + 1);
        assert_eq!(r.dollar().rank(), delta.len() - 1);
    }
    budget(start, Duration::from_secs(1), "criterion 1");
    println!("[acceptance] criterion 1 (alphabet and grammar shape for n=1..6): PASS");
}

#[test]
fn criterion_2_solvable_witness_pipeline() {
    let start = Instant::now();
    let r = artifacts("ab a\nb bb\n");
    let solution = match r.instance().brute_force_solve(3) {
        SearchOutcome::Solution(s) => s,
        other => panic!("expected a solution, got {other:?}"),
    };
    assert_eq!(solution, Solution::new(vec![1, 2]).unwrap());

    let (u_alpha, u_beta) = r.gap_witness(&solution).unwrap();
    assert_eq!(r.delta().render(&u_alpha), "1 2 b b a cent");
    assert_eq!(r.delta().render(&u_beta), "1 2 b b a dollar");
    assert!(r.grammar().recognize(&u_alpha).unwrap());
    assert!(r.grammar().recognize(&u_beta).unwrap());

    match r.certify_adjacent(&u_alpha, &u_beta, 10).unwrap() {
        AdjacencyOutcome::Certified(cert) => {
            assert_eq!(cert.bound, 10);
            assert!(
                cert.words_screened > 1_000_000,
                "screened {}",
                cert.words_screened
            );
        }
        AdjacencyOutcome::Refuted(w) => {
            panic!("gap pair refuted by {}", r.delta().render(&w))
        }
    }
    budget(start, Duration::from_secs(30), "criterion 2");
    println!("[acceptance] criterion 2 (solvable instance: solution, gap pair, adjacency): PASS");
}

#[test]
fn criterion_3_unsolvable_instance_is_dense_in_the_window() {
    let start = Instant::now();
    let r = artifacts("ab ba\n");
    match r.instance().brute_force_solve(8) {
        SearchOutcome::NoneFound { exhausted, .. } => {
            assert!(
                exhausted,
                "the search space collapses, proving unsolvability"
            )
        }
        SearchOutcome::Solution(s) => panic!("unexpected solution {s}"),
    }
    let report = probe_density_cfl(r.grammar(), 5, Some(&r)).unwrap();
    assert!(report.word_count > 100);
    assert_eq!(report.solutions_detected, 0);
    assert_eq!(report.unresolved, 0);
    assert_eq!(report.middles_found, report.pairs.len());
    assert!(report
        .pairs
        .iter()
        .all(|p| matches!(p.outcome, PairOutcome::Middle(_))));
    budget(start, Duration::from_secs(60), "criterion 3");
    println!(
        "[acceptance] criterion 3 (unsolvable instance: exhaustion, every pair separated): PASS"
    );
}

#[test]
fn criterion_4_middle_request_detects_the_solution() {
    let start = Instant::now();
    let r = artifacts("ab a\nb bb\n");
    let s = Solution::new(vec![1, 2]).unwrap();
    let (u_alpha, u_beta) = r.gap_witness(&s).unwrap();
    match middle_witness(&r, &u_alpha, &u_beta).unwrap() {
        MiddleOutcome::SolutionDetected(found) => assert_eq!(found, s),
        MiddleOutcome::Middle(z) => panic!("impossible middle {}", r.delta().render(&z)),
    }
    budget(start, Duration::from_secs(1), "criterion 4");
    println!("[acceptance] criterion 4 (gap pair middle request returns the solution): PASS");
}

#[test]
fn criterion_5_comparison_language_is_eta_and_coding_invariant() {
    let start = Instant::now();
    let g = Grammar::parse("alphabet: 0 1\nstart: S\nS -> 0 0 S | 1 1 S | 0 1\n").unwrap();
    let report = classify_regular_order_type(&g).unwrap();
    assert_eq!(report.order_type, OrderType::Eta);

    let code = BinaryCode::for_alphabet(g.alphabet());
    let encoded = encode_grammar(&g, &code).unwrap();
    assert_eq!(
        classify_regular_order_type(&encoded).unwrap().order_type,
        OrderType::Eta
    );
    budget(start, Duration::from_secs(5), "criterion 5");
    println!("[acceptance] criterion 5 (comparison language: eta, stable under coding): PASS");
}

#[test]
fn criterion_6_block_sublanguages_and_their_union_are_eta() {
    let start = Instant::now();
    let r = artifacts("ab ba\n");
    let alphabet_line = format!("alphabet: {}", r.delta().tokens().join(" "));
    for j in 1..=3usize {
        let text = format!("{alphabet_line}\nstart: D\nD -> d{j}.0 D | d{j}.2 D | d{j}.1\n");
        let g = Grammar::parse(&text).unwrap();
        let report = classify_regular_order_type(&g).unwrap();
        assert_eq!(report.order_type, OrderType::Eta, "block {j}");
    }
    // The plain-word family: heads over the plain letters, then any block.
    let union = format!(
        "{alphabet_line}\nstart: C\n\
         C -> 1 C | a C | b C | D1 | D2 | D3\n\
         D1 -> d1.0 D1 | d1.2 D1 | d1.1\n\
         D2 -> d2.0 D2 | d2.2 D2 | d2.1\n\
         D3 -> d3.0 D3 | d3.2 D3 | d3.1\n"
    );
    let g = Grammar::parse(&union).unwrap();
    let report = classify_regular_order_type(&g).unwrap();
    assert_eq!(report.order_type, OrderType::Eta);
    budget(start, Duration::from_secs(5), "criterion 6");
    println!("[acceptance] criterion 6 (block sublanguages and their union: eta): PASS");
}

#[test]
fn criterion_7_neighbors_exist_for_every_generated_word() {
    let start = Instant::now();
    let r = artifacts("ab ba\n");
    let words = r.grammar().enumerate_up_to(5).unwrap();
    assert!(words.len() > 100);
    for w in &words {
        let n = r
            .neighbor_witnesses(w)
            .unwrap_or_else(|e| panic!("no neighbors for {}: {e}", r.delta().render(w)));
        assert!(n.below < *w && *w < n.above);
    }
    budget(start, Duration::from_secs(30), "criterion 7");
    println!("[acceptance] criterion 7 (every generated word has verified neighbors): PASS");
}

#[test]
fn criterion_8_order_laws_and_boolean_algebra() {
    let start = Instant::now();

    // Trichotomy and transitivity, exhaustively over three letters.
    let three = OrderedAlphabet::new(["a", "b", "c"]).unwrap();
    let words = all_words(&three, 3);
    assert_eq!(words.len(), 40);
    for u in &words {
        for v in &words {
            let uv = lex_compare(u, v, &three).unwrap();
            let vu = lex_compare(v, u, &three).unwrap();
            assert_eq!(uv, vu.reverse());
            assert_eq!(uv == std::cmp::Ordering::Equal, u == v);
        }
    }
    for u in &words {
        for v in &words {
            if lex_compare(u, v, &three).unwrap() != std::cmp::Ordering::Less {
                continue;
            }
            for z in &words {
                if lex_compare(v, z, &three).unwrap() == std::cmp::Ordering::Less {
                    assert_eq!(lex_compare(u, z, &three).unwrap(), std::cmp::Ordering::Less);
                }
            }
        }
    }

    // The order automaton agrees with the comparison function.
    let two = OrderedAlphabet::new(["0", "1"]).unwrap();
    let rel = Nfa::lex_relation(&two);
    let small = all_words(&two, 3);
    for u in &small {
        for v in &small {
            let expected = lex_compare(u, v, &two).unwrap() == std::cmp::Ordering::Less;
            assert_eq!(rel.accepts_pair(u, v).unwrap(), expected, "{u:?} vs {v:?}");
        }
    }

    // Boolean operations match set semantics on the membership level.
    let g1 = Grammar::parse("alphabet: 0 1\nstart: S\nS -> 0 0 S | 1 1 S | 0 1\n").unwrap();
    let g2 = Grammar::parse("alphabet: 0 1\nstart: S\nS -> 0 S | 1\n").unwrap();
    let a1 = Nfa::from_right_linear(&g1.trim()).unwrap();
    let a2 = Nfa::from_right_linear(&g2.trim()).unwrap();
    let both = a1.intersect(&a2).unwrap();
    let not1 = a1.complement().unwrap();
    for w in all_words(&two, 5) {
        let in1 = a1.accepts_word(&w).unwrap();
        let in2 = a2.accepts_word(&w).unwrap();
        assert_eq!(both.accepts_word(&w).unwrap(), in1 && in2);
        assert_eq!(not1.accepts_word(&w).unwrap(), !in1);
    }
    budget(start, Duration::from_secs(60), "criterion 8");
    println!("[acceptance] criterion 8 (order laws, relation automaton, boolean algebra): PASS");
}

#[test]
fn criterion_9_binary_coding_is_an_order_isomorphism() {
    let start = Instant::now();
    let r2 = artifacts("ab ba\nba ab\n");
    let code2 = BinaryCode::for_alphabet(r2.delta());
    assert_eq!(r2.delta().len(), 18);
    assert_eq!(
        code2.width(),
        5,
        "width is the base-two logarithm of 18, rounded up"
    );

    let r1 = artifacts("ab ba\n");
    let code1 = BinaryCode::for_alphabet(r1.delta());
    let words = all_words(r1.delta(), 3);
    let encoded: Vec<Word> = words
        .iter()
        .map(|w| code1.encode_word(w).unwrap())
        .collect();
    let binary = binary_alphabet();
    for (i, u) in words.iter().enumerate() {
        for (k, v) in words.iter().enumerate() {
            assert_eq!(
                lex_compare(u, v, r1.delta()).unwrap(),
                lex_compare(&encoded[i], &encoded[k], &binary).unwrap(),
                "order must be preserved for {u:?} vs {v:?}"
            );
        }
    }
    budget(start, Duration::from_secs(30), "criterion 9");
    println!("[acceptance] criterion 9 (fixed-width coding preserves the order): PASS");
}
