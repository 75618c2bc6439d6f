use ambistl_bench::{regions, sweep};
use ambistl_core::corpus::bundled_corpus;
use ambistl_core::{default_lexicon, evaluate_candidates, robustness, translate, DEFAULT_N_BEST};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn corpus(c: &mut Criterion) {
    let lexicon = default_lexicon();
    let sentences = bundled_corpus();
    c.bench_function("translate_corpus", |b| {
        b.iter(|| {
            for s in &sentences {
                black_box(translate(&s.text, &lexicon, DEFAULT_N_BEST).unwrap());
            }
        })
    });
    let mut group = c.benchmark_group("translate_sentence");
    for id in ["S1", "S8", "S12"] {
        let s = sentences.iter().find(|s| s.id == id).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(id), &s.text, |b, text| {
            b.iter(|| translate(black_box(text), &lexicon, DEFAULT_N_BEST).unwrap())
        });
    }
    group.finish();
}

fn robustness_eval(c: &mut Criterion) {
    let lexicon = default_lexicon();
    let regions = regions();
    let s12 = bundled_corpus().into_iter().find(|s| s.id == "S12").unwrap();
    let set = translate(&s12.text, &lexicon, DEFAULT_N_BEST).unwrap();
    let mut group = c.benchmark_group("robustness_s12");
    for len in [64usize, 512] {
        let x = sweep(len);
        group.bench_with_input(BenchmarkId::new("all_candidates", len), &x, |b, x| {
            b.iter(|| evaluate_candidates(&set, x, &regions))
        });
        let formula = &set.candidates[0].formula;
        group.bench_with_input(BenchmarkId::new("every_start_time", len), &x, |b, x| {
            b.iter(|| (0..x.len()).filter_map(|t| robustness(formula, x, &regions, t).ok()).sum::<f64>())
        });
    }
    group.finish();
}

criterion_group!(benches, corpus, robustness_eval);
criterion_main!(benches);
