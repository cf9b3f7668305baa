use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pomalg::amalgam::build_tower;
use pomalg::fixtures::{max_chain, strong_gap_amalgam, strong_gap_pomonoid};
use pomalg::{Relation, SPoset, TensorPoset};

fn tensor(c: &mut Criterion) {
    let s = Arc::new(strong_gap_pomonoid());
    let (a, b) = (SPoset::regular_right(&s), SPoset::regular_left(&s));
    c.bench_function("tensor regular 5x5", |bn| bn.iter(|| TensorPoset::new(black_box(&a), black_box(&b)).unwrap()));
    let chain = Arc::new(max_chain(12));
    let (a, b) = (SPoset::regular_right(&chain), SPoset::regular_left(&chain));
    c.bench_function("tensor max chain 12", |bn| bn.iter(|| TensorPoset::new(black_box(&a), black_box(&b)).unwrap()));
}

fn closure(c: &mut Criterion) {
    let n = 400;
    let r = Relation::from_pairs(n, (0..n - 1).map(|i| (i, i + 1)).chain((0..n).step_by(7).map(|i| (i, (i * 3) % n))));
    c.bench_function("closure 400", |bn| bn.iter(|| black_box(&r).closure()));
}

fn tower(c: &mut Criterion) {
    let a = strong_gap_amalgam();
    c.bench_function("tower depth 4", |bn| bn.iter(|| build_tower(black_box(&a), 4, 2000).unwrap()));
}

fn words(c: &mut Criterion) {
    let a = strong_gap_amalgam();
    let lhs = a.parse_word("1:e 2:f 1:e").unwrap();
    let rhs = a.parse_word("1:b 2:b").unwrap();
    c.bench_function("word search depth 4", |bn| bn.iter(|| a.word_leq_bounded(black_box(&lhs), black_box(&rhs), 4)));
}

criterion_group!(benches, tensor, closure, tower, words);
criterion_main!(benches);
