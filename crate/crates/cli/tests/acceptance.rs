//! Acceptance criteria 1-9, each reported as one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use biasaware::detector::{BiasDetector, Lexicon, LexiconDetector};
use biasaware::eval::{self, reference, Averages, ClassMetrics, ConfusionMatrix, EvalCase};
use biasaware::retriever::{chunk_text, cosine_distance, ingest, Chunking, Document, Embedder, HashedEmbedder, VectorStore};
use biasaware::Label;
use common::{fixture, Workspace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn c1_metric_formulas() {
    let biased = ClassMetrics::from_precision_recall(0.818, 0.9, reference::BIASED_SUPPORT);
    assert!(close(biased.f1, 0.857, 1e-3), "biased F1 {}", biased.f1);
    let non_biased = ClassMetrics::from_precision_recall(0.714, 0.714, reference::NON_BIASED_SUPPORT);
    let m = Averages::macro_of(&biased, &non_biased);
    assert!(close(m.precision, 0.766, 1e-3), "macro precision {}", m.precision);
    assert!(close(m.recall, 0.807, 1e-3), "macro recall {}", m.recall);
}

fn c2_confusion_reconstruction() {
    let r = eval::metrics(&ConfusionMatrix::new(18, 4, 2, 10));
    assert_eq!(format!("{:.3}", r.biased.precision), "0.818");
    assert_eq!(format!("{:.3}", r.biased.recall), "0.900");
    assert_eq!((r.biased.support, r.non_biased.support), (20, 14));
    // The published table shows 0.714 here; the counts it implies give 10/12.
    assert_eq!(format!("{:.3}", r.non_biased.precision), "0.833");
    assert_ne!(format!("{:.3}", r.non_biased.precision), format!("{:.3}", reference::NON_BIASED_PRECISION));
}

fn case(actual: Label, predicted: Label) -> EvalCase {
    EvalCase {
        query_id: String::new(),
        predicted,
        confidence: 0.5,
        sources: vec![],
        ground_truth: Some(actual),
        mixed: false,
    }
}

fn c3_metrics_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let labels = [Label::Biased, Label::NonBiased];
    for _ in 0..1000 {
        let n = rng.gen_range(0..=1000);
        let pairs: Vec<(Label, Label)> =
            (0..n).map(|_| (*labels.choose(&mut rng).unwrap(), *labels.choose(&mut rng).unwrap())).collect();
        let cases: Vec<EvalCase> = pairs.iter().map(|&(a, p)| case(a, p)).collect();
        let got = eval::metrics(&eval::confusion(&cases));
        for (class, cm) in [(Label::Biased, got.biased), (Label::NonBiased, got.non_biased)] {
            let predicted = pairs.iter().filter(|(_, p)| *p == class).count();
            let actual = pairs.iter().filter(|(a, _)| *a == class).count();
            let hit = pairs.iter().filter(|&&(a, p)| a == class && p == class).count();
            let precision = if predicted == 0 { 0.0 } else { hit as f64 / predicted as f64 };
            let recall = if actual == 0 { 0.0 } else { hit as f64 / actual as f64 };
            let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
            assert_eq!((cm.precision, cm.recall, cm.f1, cm.support), (precision, recall, f1, actual as u64));
        }
    }
}

fn c4_retrieval_oracle() {
    const VOCAB: &[&str] = &["rates", "bank", "vote", "storm", "crop", "tax", "court", "ship", "port", "rail"];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let text = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(0..5);
        let words: Vec<&str> = (0..n).map(|_| *VOCAB.choose(rng).unwrap()).collect();
        if words.is_empty() { "--".to_string() } else { words.join(" ") }
    };
    let embedder = HashedEmbedder::new(32).unwrap();
    for _ in 0..100 {
        let n = rng.gen_range(1..=200);
        let docs: Vec<Document> = (0..n)
            .map(|i| Document {
                doc_id: format!("d{:03}", rng.gen_range(0..1000) * 1000 + i),
                title: String::new(),
                body: text(&mut rng),
                label: None,
                source: String::new(),
            })
            .collect();
        let mut store = VectorStore::new(&embedder, Chunking::new(64, 8).unwrap());
        ingest(&docs, &mut store, &embedder).unwrap();
        for _ in 0..rng.gen_range(1..=5) {
            let q = text(&mut rng);
            let k = rng.gen_range(1..=20);
            let qv = embedder.embed(&q).unwrap();
            let mut oracle: Vec<(f64, String)> = store
                .records()
                .iter()
                .map(|r| (cosine_distance(&qv, &r.vector), r.chunk.chunk_id.clone()))
                .collect();
            oracle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
            oracle.truncate(k);
            let got: Vec<(f64, String)> = store
                .search(&q, k, &embedder)
                .unwrap()
                .into_iter()
                .map(|h| (h.distance, h.record.chunk.chunk_id.clone()))
                .collect();
            assert_eq!(got, oracle);
        }
    }
}

fn check_spans(spans: &[(usize, usize)], len: usize, size: usize, overlap: usize) {
    assert!(!spans.is_empty() || len == 0);
    if len == 0 {
        return;
    }
    assert_eq!(spans[0].0, 0);
    assert_eq!(spans.last().unwrap().1, len);
    for (i, &(s, e)) in spans.iter().enumerate() {
        assert!(s < e && e - s <= size);
        if i + 1 < spans.len() {
            assert_eq!(e - s, size, "only the last chunk may be short");
            assert_eq!(e - spans[i + 1].0, overlap, "size {size} overlap {overlap} len {len}");
        }
    }
}

fn c5_chunk_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for size in 1..=1024usize {
        for overlap in 0..size {
            let len = rng.gen_range(0..=2 * size + 7);
            check_spans(&Chunking::new(size, overlap).unwrap().spans(len), len, size, overlap);
        }
    }
    let alphabet: Vec<char> = "ab é漢 \n.".chars().collect();
    for _ in 0..300 {
        let size = rng.gen_range(1..=1024);
        let overlap = rng.gen_range(0..size);
        let body: String = (0..rng.gen_range(1..3000)).map(|_| *alphabet.choose(&mut rng).unwrap()).collect();
        let chunks = chunk_text("d", &body, Chunking::new(size, overlap).unwrap()).unwrap();
        let spans: Vec<(usize, usize)> = chunks.iter().map(|c| (c.char_start, c.char_end)).collect();
        let chars: Vec<char> = body.chars().collect();
        check_spans(&spans, chars.len(), size, overlap);
        for c in &chunks {
            assert_eq!(c.text, chars[c.char_start..c.char_end].iter().collect::<String>());
        }
    }
}

fn c6_detector() {
    let lex = Lexicon::new([("radical".to_string(), 2.0), ("disaster".to_string(), 1.5)], 1.0, -1.0).unwrap();
    let det = LexiconDetector::new(lex);
    let v = det.classify("a radical disaster").unwrap();
    assert_eq!(v.label, Label::Biased);
    assert!(close(v.probability, 0.9241, 1e-4), "{}", v.probability);
    for text in ["the weather report", ""] {
        let v = det.classify(text).unwrap();
        assert_eq!(v.label, Label::NonBiased);
        assert!(close(v.probability, 0.7311, 1e-4), "{}", v.probability);
    }

    let builtin = Lexicon::builtin();
    let a = LexiconDetector::new(builtin.clone());
    let b = LexiconDetector::new(Lexicon::builtin());
    let cues = ["radical", "reckless", "agenda", "disaster", "elites", "propaganda"];
    let words = ["the", "report", "said", "rates", "on", "tuesday", "council", "budget"];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let n = rng.gen_range(0..30);
        let mut text: String = (0..n)
            .map(|_| if rng.gen_bool(0.2) { *cues.choose(&mut rng).unwrap() } else { *words.choose(&mut rng).unwrap() })
            .collect::<Vec<_>>()
            .join(" ");
        let (x, y) = (a.classify(&text).unwrap(), b.classify(&text).unwrap());
        assert_eq!((x.label, x.probability.to_bits()), (y.label, y.probability.to_bits()));
        let before = builtin.p_bias(&text);
        text.push(' ');
        text.push_str(cues.choose(&mut rng).unwrap());
        assert!(builtin.p_bias(&text) > before, "adding a cue must raise p_bias: {text:?}");
    }
}

fn c7_end_to_end_golden() {
    let ws = Workspace::ingested();
    let queries = fixture("queries.jsonl");
    let queries = queries.to_str().unwrap();
    let names = ["metrics.csv", "mixed.csv", "confusion.csv"];
    let mut runs = Vec::new();
    for out in ["run1", "run2"] {
        let r = ws.run(&["eval", "--queries", queries, "--out", &ws.p(out)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        runs.push(names.map(|n| std::fs::read_to_string(ws.path(out).join(n)).unwrap()));
    }
    assert_eq!(runs[0], runs[1], "repeated runs differ");
    for (name, got) in names.iter().zip(&runs[0]) {
        let golden = std::fs::read_to_string(fixture("golden").join(name)).unwrap();
        assert_eq!(got, &golden, "{name} differs from golden");
    }

    // Recount the golden metrics from the per-case verdicts.
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("run1/report.json")).unwrap()).unwrap();
    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    for c in report["cases"].as_array().unwrap() {
        let Some(actual) = c["ground_truth"].as_str() else { continue };
        match (actual == "Biased", c["predicted"].as_str() == Some("Biased")) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
    }
    let div = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let f1 = |p: f64, r: f64| if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    let (pb, rb, pn, rn) = (div(tp, tp + fp), div(tp, tp + fn_), div(tn, tn + fn_), div(tn, tn + fp));
    let (sb, sn) = ((tp + fn_) as f64, (tn + fp) as f64);
    let w = |x: f64, y: f64| (x * sb + y * sn) / (sb + sn);
    let expected = format!(
        "metric,biased,non_biased,weighted_avg,macro_avg\n\
         Precision,{pb:.3},{pn:.3},{:.3},{:.3}\n\
         Recall,{rb:.3},{rn:.3},{:.3},{:.3}\n\
         F1-Score,{:.3},{:.3},{:.3},{:.3}\n\
         Support,{},{},-,-\n",
        w(pb, pn),
        (pb + pn) / 2.0,
        w(rb, rn),
        (rb + rn) / 2.0,
        f1(pb, rb),
        f1(pn, rn),
        w(f1(pb, rb), f1(pn, rn)),
        (f1(pb, rb) + f1(pn, rn)) / 2.0,
        tp + fn_,
        tn + fp
    );
    assert_eq!(runs[0][0], expected);
    assert_eq!(runs[0][2], format!("actual,predicted_biased,predicted_non_biased\nBiased,{tp},{fn_}\nNon-biased,{fp},{tn}\n"));
}

fn c8_output_shape() {
    let ws = Workspace::ingested();
    let r = ws.run(&["query", "--question", "Why is the radical regime wrecking the economy with reckless spending?"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    let at = lines.iter().position(|l| *l == "This content contains bias.").expect("bias sentence");
    assert!(lines[at + 1].starts_with("source="), "analysis line follows the verdict");
    let r = ws.run(&["query", "--question", "What turnout did election officials report at polling stations?"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l == "This content appears unbiased."));
}

fn c9_reference_only() {
    assert_eq!(reference::MEAN_CONFIDENCE, 0.821);
    assert_eq!(reference::EXAMPLE_BIASED_SCORE, 0.7811554670333862);
    assert_eq!(reference::EXAMPLE_UNBIASED_SCORE, 0.7738906145095825);
    // The full weighted row cannot be reproduced from counts consistent with
    // the per-class figures.
    let r = eval::metrics(&ConfusionMatrix::new(18, 4, 2, 10));
    assert_eq!(format!("{:.3}", r.weighted_avg.recall), "0.824");
    assert_ne!(format!("{:.3}", r.weighted_avg.recall), format!("{:.3}", reference::WEIGHTED_RECALL));
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap();
    for value in ["0.821", "0.7811554670333862", "0.7738906145095825", "0.795"] {
        assert!(readme.contains(value), "README should record reference value {value}");
    }
}

fn main() -> std::process::ExitCode {
    let criteria: [(&str, fn()); 9] = [
        ("1 metric formulas match published per-class and macro figures", c1_metric_formulas),
        ("2 confusion matrix reconstruction (18, 4, 2, 10)", c2_confusion_reconstruction),
        ("3 metrics equal brute-force recount on 1000 random case sets", c3_metrics_oracle),
        ("4 search equals exhaustive sort on 100 random stores", c4_retrieval_oracle),
        ("5 chunk spans cover every body with exact overlaps", c5_chunk_coverage),
        ("6 lexicon detector deterministic, monotone, worked examples", c6_detector),
        ("7 hermetic end-to-end run reproduces golden tables", c7_end_to_end_golden),
        ("8 query output shape for biased and neutral questions", c8_output_shape),
        ("9 unreproducible figures kept as reference constants only", c9_reference_only),
    ];
    let mut failed = Vec::new();
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} ({:.2}s)", started.elapsed().as_secs_f64());
        if outcome.is_err() {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        println!("all {} acceptance criteria passed", criteria.len());
        std::process::ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
