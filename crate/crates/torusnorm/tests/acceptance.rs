use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torusnorm::ball::UnitBall;
use torusnorm::fixtures;
use torusnorm::genfun::*;
use torusnorm::oracle::{brute_norms, brute_spectrum};
use torusnorm::reconstruct::{graph_from_norm, raw_from_norm};
use torusnorm::spectrum::spectrum;
use torusnorm::surface::validate;
use torusnorm::{EmbeddedGraph, HomologyClass, Weight};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    check(e < limit, || format!("took {e:.2?}, limit {limit:?}"))
}

fn ball(g: &EmbeddedGraph) -> Result<UnitBall, String> {
    UnitBall::new(g).map_err(|e| e.to_string())
}

fn golden_pair() -> Outcome {
    let t = Instant::now();
    let left = ball(&fixtures::hexagon_graph())?;
    let right = ball(&fixtures::octagon_graph())?;
    check(left.extremal_points().len() == 6, || format!("left has {} extremal points", left.extremal_points().len()))?;
    check(right.extremal_points().len() == 8, || format!("right has {} extremal points", right.extremal_points().len()))?;
    check(!marked_equal(&left, &right).is_present(), || "marked spectra reported equal".into())?;
    let (fl, fr) = (generating_function(&left), generating_function(&right));
    let (l, r) = jointly_scaled(&fl, &fr).map_err(|e| e.to_string())?;
    let num = Dense::from_1d(&[1, 0, 3, 4, 3, 0, 1]);
    let den = Dense::from_1d(&[1, 0, -1, 0, -1, 0, 1]);
    check(l.ehrhart_form().equals_quotient(&num, &den), || "left Ehrhart form".into())?;
    check(r.ehrhart_form().equals_quotient(&num, &den), || "right Ehrhart form".into())?;
    let prefix: Vec<BigInt> = [1, 0, 4, 4, 8].iter().map(|&v| BigInt::from(v)).collect();
    for f in [&l, &r] {
        let s = f.series(5).map_err(|e| e.to_string())?;
        check(s == prefix, || format!("series prefix {s:?}"))?;
    }
    check(unmarked_equal_det(&fl, &fr, DENSE_RANK_CAP).map_err(|e| e.to_string())?, || "det says different".into())?;
    let v = unmarked_equal_rand(&fl, &fr, 20, 0, 1).map_err(|e| e.to_string())?;
    check(!v.different, || "randomized says different".into())?;
    within(t, Duration::from_secs(5))?;
    Ok(format!("6 vs 8 extremal points, equal Ehrhart forms, error<={}", v.error_bound()))
}

fn extremal_bound() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let g = fixtures::random_embedding(&mut rng, 30);
        let b = UnitBall::new(&g).map_err(|e| format!("embedding {i}: {e}"))?;
        let n = b.extremal_points().len();
        let bound = 4 * g.vertex_count() + 5;
        check(g.vertex_count() <= 30 && n <= bound, || format!("embedding {i}: {n} > {bound}"))?;
        worst = worst.max(n as f64 / bound as f64);
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!("200 embeddings, max ratio to 4V+5 = {worst:.2}"))
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for (name, g) in fixtures::small_fixtures() {
        if g.vertex_count() > 12 {
            continue;
        }
        count += 1;
        let b = UnitBall::new(&g).map_err(|e| format!("{name}: {e}"))?;
        let coords = b.basis().coords();
        let (brute, _) = brute_norms(&g, coords, 5);
        for (c, w) in &brute {
            check(&b.norm_eval(*c) == w, || format!("{name}: norm at {c}"))?;
        }
        let fast = spectrum(&b, 50).map_err(|e| e.to_string())?;
        let slow = brute_spectrum(&g, coords, 50);
        check(fast.len() == 50, || format!("{name}: spectrum has {} items", fast.len()))?;
        let fv: Vec<&Weight> = fast.iter().map(|i| &i.value).collect();
        let sv: Vec<&Weight> = slow.items.iter().map(|i| &i.0).collect();
        check(fv == sv, || format!("{name}: spectrum values differ"))?;
        let group = |items: &mut dyn Iterator<Item = (Weight, HomologyClass)>| {
            let mut m: BTreeMap<Weight, BTreeSet<HomologyClass>> = BTreeMap::new();
            for (w, c) in items {
                m.entry(w).or_default().insert(c);
            }
            m
        };
        let fg = group(&mut fast.iter().map(|i| (i.value.clone(), i.class)));
        let sg = group(&mut slow.items.iter().cloned());
        let all = group(&mut slow.complete.iter().map(|(c, w)| (w.clone(), *c)));
        let last = fv[49].clone();
        for (w, cs) in &fg {
            if *w == last {
                // the k-th value may be cut inside its class set
                check(cs.is_subset(&all[w]) && cs.len() == sg[w].len(), || format!("{name}: classes at last value"))?;
            } else {
                check(Some(cs) == sg.get(w), || format!("{name}: classes at a value"))?;
            }
        }
        check(fast.iter().map(|i| i.class).collect::<BTreeSet<_>>().len() == 50, || format!("{name}: repeated class"))?;
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{count} fixtures, |x|,|y|<=5 and spectrum(50)"))
}

fn random_class<R: Rng>(rng: &mut R, r: i64) -> HomologyClass {
    HomologyClass::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

fn norm_axioms() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut graphs = Vec::new();
    for _ in 0..100 {
        let g = fixtures::random_embedding(&mut rng, 16);
        let b = ball(&g)?;
        graphs.push(b);
    }
    for case in 0..1000 {
        let b = &graphs[rng.gen_range(0..graphs.len())];
        let (a, c) = (random_class(&mut rng, 8), random_class(&mut rng, 8));
        let k = rng.gen_range(0..=5i64);
        let (na, nc, ns) = (b.norm_eval(a), b.norm_eval(c), b.norm_eval(a + c));
        check(ns <= &na + &nc, || format!("case {case}: subadditivity at {a}, {c}"))?;
        check(b.norm_eval(k * a) == na.scaled(k), || format!("case {case}: homogeneity at {a}, k={k}"))?;
        check(b.norm_eval(-a) == na, || format!("case {case}: symmetry at {a}"))?;
        check(na.is_zero() == a.is_zero(), || format!("case {case}: separation at {a}"))?;
        check(na.signum().map_err(|e| e.to_string())? != std::cmp::Ordering::Less, || format!("case {case}: sign"))?;
    }
    within(t, Duration::from_secs(60))?;
    Ok("1000 cases over 100 random embeddings".into())
}

fn unimodular_partition() -> Outcome {
    let mut count = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut all = fixtures::small_fixtures();
    for i in 0..20 {
        all.push((format!("random-{i}"), fixtures::random_embedding(&mut rng, 30)));
    }
    all.push(("grid-10x10".to_string(), fixtures::grid(10, 10)));
    for (name, g) in all {
        count += 1;
        let b = UnitBall::new(&g).map_err(|e| format!("{name}: {e}"))?;
        let h = b.h();
        for i in 0..h.len() {
            let (p, q) = (h[i].class, h[(i + 1) % h.len()].class);
            check(p.det(q) == 1, || format!("{name}: det({p}, {q}) = {}", p.det(q)))?;
            if i + 1 < h.len() {
                check(p.angle_cmp(q) == std::cmp::Ordering::Less, || format!("{name}: rays out of order"))?;
            }
        }
        check(b.iterations() <= 2 * h.len(), || format!("{name}: {} iterations for |H|={}", b.iterations(), h.len()))?;
    }
    Ok(format!("{count} instances"))
}

fn to_frame(g: &EmbeddedGraph, b: &UnitBall) -> Result<UnitBall, String> {
    let frame = g.frame().ok_or("reconstruction has no frame")?;
    let (fa, fb) = (frame.sum(&b.basis().a.darts), frame.sum(&b.basis().b.darts));
    b.transformed(g, [[fa.x, fb.x], [fa.y, fb.y]]).map_err(|e| e.to_string())
}

fn reconstruction() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut vertices = 0;
    for i in 0..50 {
        let spec = fixtures::random_norm_spec(&mut rng, 5, 4);
        let raw = raw_from_norm(&spec).map_err(|e| format!("spec {i}: {e}"))?;
        let report = validate(&raw);
        check(report.is_ok(), || format!("spec {i}: {report}"))?;
        let g = graph_from_norm(&spec).map_err(|e| format!("spec {i}: {e}"))?;
        check(g.vertex_count() as u64 == spec.expected_vertices(), || format!("spec {i}: vertex count"))?;
        check((0..g.vertex_count()).all(|v| g.rotation(v).len() == 4), || format!("spec {i}: not 4-regular"))?;
        vertices += g.vertex_count();
        let b = to_frame(&g, &ball(&g)?)?;
        let got: BTreeSet<(HomologyClass, BigRational)> = b
            .extremal_points()
            .into_iter()
            .map(|(c, w)| (c, w.to_rational(g.scale()).expect("rational weights")))
            .collect();
        let want: BTreeSet<(HomologyClass, BigRational)> = spec.points().iter().cloned().collect();
        check(got == want, || format!("spec {i}: extremal set {got:?} vs {want:?}"))?;
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("50 specs, {vertices} vertices in total"))
}

fn marked_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pool: Vec<(EmbeddedGraph, UnitBall)> = fixtures::small_fixtures()
        .into_iter()
        .map(|(_, g)| {
            let b = UnitBall::new(&g).expect("fixture ball");
            (g, b)
        })
        .collect();
    for i in 0..100 {
        let (g, b) = &pool[rng.gen_range(0..pool.len())];
        let m = fixtures::random_unimodular(&mut rng, 10);
        let moved = b.transformed(g, m).map_err(|e| e.to_string())?;
        let found = marked_equal(b, &moved).matrix.ok_or_else(|| format!("case {i}: no match for {m:?}"))?;
        let src: BTreeMap<HomologyClass, Weight> = b.extremal_points().into_iter().collect();
        let dst: BTreeMap<HomologyClass, Weight> = moved.extremal_points().into_iter().collect();
        let image: BTreeMap<HomologyClass, Weight> = src.iter().map(|(c, w)| (c.transform(found), w.clone())).collect();
        check(image == dst, || format!("case {i}: {found:?} does not map the extremal sets"))?;
    }
    Ok("100 matrices".into())
}

fn randomized_pit() -> Outcome {
    let t = Instant::now();
    let f = |g: &EmbeddedGraph| ball(g).map(|b| generating_function(&b));
    let (a, b) = (f(&fixtures::grid(3, 3))?, f(&fixtures::grid(3, 4))?);
    let (l, r) = (f(&fixtures::hexagon_graph())?, f(&fixtures::octagon_graph())?);
    let mut bound = String::new();
    for seed in 0..50 {
        let v = unmarked_equal_rand(&a, &b, 20, seed, 2).map_err(|e| e.to_string())?;
        let w = v.witness.as_ref().ok_or_else(|| format!("seed {seed}: grids not separated"))?;
        check(verify_witness(&a, &b, w).map_err(|e| e.to_string())?, || format!("seed {seed}: witness fails"))?;
        let v = unmarked_equal_rand(&l, &r, 20, seed, 2).map_err(|e| e.to_string())?;
        check(!v.different, || format!("seed {seed}: isospectral pair separated"))?;
        bound = v.error_bound();
    }
    check(bound == "2^-20", || format!("bound reported as {bound}"))?;
    Ok(format!("50 seeds each way, error<={bound}, {:.2?}", t.elapsed()))
}

fn median_query_time(b: &UnitBall, queries: &[HomologyClass]) -> Duration {
    let mut runs: Vec<Duration> = (0..9)
        .map(|_| {
            let t = Instant::now();
            for q in queries {
                std::hint::black_box(b.norm_eval(*q));
            }
            t.elapsed()
        })
        .collect();
    runs.sort();
    runs[4]
}

fn smoke_benchmark() -> Outcome {
    let g = fixtures::grid(10, 10);
    let t = Instant::now();
    let b = ball(&g)?;
    let s = spectrum(&b, 10_000).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    check(s.len() == 10_000, || "short spectrum".into())?;
    check(took < Duration::from_secs(10), || format!("spectrum(10^4) took {took:.2?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let queries: Vec<HomologyClass> = (0..20_000).map(|_| random_class(&mut rng, 1000)).collect();
    let mut balls: Vec<UnitBall> = (1..=12).map(|k| UnitBall::new(&fixtures::staircase(k)).expect("staircase")).collect();
    balls.push(b);
    for i in 0..40 {
        let g = fixtures::random_embedding(&mut rng, 30);
        if let Ok(b) = UnitBall::new(&g) {
            balls.push(b);
        }
        if i % 10 == 0 {
            let spec = fixtures::random_norm_spec(&mut rng, 5, 4);
            balls.push(ball(&graph_from_norm(&spec).map_err(|e| e.to_string())?)?);
        }
    }
    balls.sort_by_key(|b| b.h().len());
    let small = &balls[0];
    let large = balls
        .iter()
        .rev()
        .find(|b| b.h().len() >= 2 * small.h().len())
        .ok_or("no fixture with twice the |H|")?;
    let (ts, tl) = (median_query_time(small, &queries), median_query_time(large, &queries));
    let ratio = tl.as_secs_f64() / ts.as_secs_f64();
    let size_ratio = large.h().len() as f64 / small.h().len() as f64;
    check(ratio < 2.0, || format!("query time ratio {ratio:.2} for |H| ratio {size_ratio:.1}"))?;
    Ok(format!(
        "spectrum(10^4) on 100 vertices in {took:.2?}; |H| {} -> {}: query time x{ratio:.2}",
        small.h().len(),
        large.h().len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("golden isospectral pair", golden_pair),
        ("extremal-point bound", extremal_bound),
        ("oracle equivalence", oracle_equivalence),
        ("norm axioms", norm_axioms),
        ("unimodular partition", unimodular_partition),
        ("reconstruction round trip", reconstruction),
        ("marked-equality invariance", marked_invariance),
        ("randomized identity test", randomized_pit),
        ("smoke benchmark", smoke_benchmark),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({:.2?}) {detail}", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({:.2?}) {why}", i + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
