use bohm_core::combinators::{church, k, zero};
use bohm_core::{
    discriminate, left_inverse, normalize, parse, separate, Budget, GenConfig, Generator, Name,
    Term,
};
use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

fn random_pairs(n: usize) -> Vec<(Term, Term)> {
    let cfg = GenConfig {
        seed: 42,
        max_size: 40,
        max_order: 3,
        free_pool: ["y1", "y2", "y3"].into_iter().map(Name::from).collect(),
    };
    let mut g = Generator::new(cfg).unwrap();
    (0..n).map(|_| g.distinct_pair().unwrap()).collect()
}

fn normalization(c: &mut Criterion) {
    let skk = parse(r"(\x.\y.\z. x z (y z)) (\x.\y.x) (\x.\y.x)").unwrap();
    let power = Term::apps(church(3), [church(3), Term::var("f"), Term::var("x")]);
    c.bench_function("normalize skk", |b| {
        b.iter(|| normalize(black_box(&skk), Budget::DEFAULT))
    });
    c.bench_function("normalize 3^3", |b| {
        b.iter(|| normalize(black_box(&power), Budget::DEFAULT))
    });
}

fn separation(c: &mut Criterion) {
    let n1 = parse(r"\t1.\t2.\t3. t1 (\u. t2) (\v. t2 t1 (\z.\s. z v)) t3").unwrap();
    let n2 = parse(r"\u.\v. u (\t. v) (\x. v u \z. z)").unwrap();
    c.bench_function("separate example pair", |b| {
        b.iter(|| separate(black_box(&n1), black_box(&n2)))
    });

    let pairs = random_pairs(64);
    c.bench_function("separate 64 random pairs", |b| {
        b.iter_batched(
            || pairs.clone(),
            |ps| ps.iter().filter(|(a, b)| separate(a, b).is_ok()).count(),
            BatchSize::SmallInput,
        )
    });
}

fn corollaries(c: &mut Criterion) {
    let (three, two) = (church(3), church(2));
    c.bench_function("discriminate 3 / 2", |b| {
        b.iter(|| discriminate(black_box(&three), black_box(&two), &k(), &zero()))
    });
    let f = parse(r"\x.\y. y x").unwrap();
    c.bench_function("left inverse", |b| b.iter(|| left_inverse(black_box(&f))));
}

criterion_group!(benches, normalization, separation, corollaries);
criterion_main!(benches);
