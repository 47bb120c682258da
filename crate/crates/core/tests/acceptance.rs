//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each; exits nonzero if any fails.

use normality_lab::algebra::{classify_obstruction, is_pisot, log_commensurable, IntPoly, Verdict};
use normality_lab::fourier::fourier_exact;
use normality_lab::ifs::presets::{cantor, dyadic};
use normality_lab::ifs::{AffineMap, SelfSimilarSystem};
use normality_lab::martingale::{martingale_gap, stopping_time};
use normality_lab::rational::{int, ratio, to_f64};
use normality_lab::sampling::{
    digits, orbit_sequence, tail_digits, uniform_sample, SampledWords, WordSource, DEFAULT_GUARD,
};
use normality_lab::stats::correlation::tuple_term;
use normality_lab::stats::{
    default_grid, digit_frequencies, discrepancy, k_level_correlation, level_spacings, TestFunction,
};
use normality_lab::fourier::fourier_empirical;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn mixed() -> SelfSimilarSystem {
    SelfSimilarSystem::new(
        vec![AffineMap::new(ratio(1, 2), int(0)), AffineMap::new(ratio(1, 4), ratio(3, 4))],
        vec![ratio(2, 3), ratio(1, 3)],
    )
    .unwrap()
}

fn flipped() -> SelfSimilarSystem {
    SelfSimilarSystem::new(
        vec![
            AffineMap::new(ratio(-2, 5), ratio(2, 5)),
            AffineMap::new(ratio(1, 5), ratio(4, 5)),
            AffineMap::new(ratio(1, 5), ratio(2, 5)),
        ],
        vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)],
    )
    .unwrap()
}

fn cantor_obstruction() -> Outcome {
    let sys = cantor();
    let mut ones = 0;
    let mut short = 0;
    for seed in 0..20 {
        let s = digits(&sys, &mut SampledWords::new(&sys, seed), 3, 1000, DEFAULT_GUARD).unwrap();
        if s.certified_length < 1000 {
            short += 1;
        }
        ones += digit_frequencies(&s, 1).unwrap().counts[1];
    }
    let verdict = classify_obstruction(&sys, 3).unwrap().verdict;
    Outcome {
        pass: ones == 0 && short == 0 && verdict == Verdict::MatchesObstructionForm,
        detail: format!("digit-1 count {ones} over 20x1000 digits, verdict {verdict}"),
    }
}

fn desk_scale_normality() -> Outcome {
    let sys = cantor();
    let n = 10_000;
    let (mut disc_ok, mut weyl_ok) = (0, 0);
    let (mut worst_disc, mut worst_weyl) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let s = digits(&sys, &mut SampledWords::new(&sys, seed), 2, n - 1 + tail_digits(2), DEFAULT_GUARD).unwrap();
        let orbit = orbit_sequence(&s, n).unwrap();
        let d = discrepancy(&orbit).unwrap();
        let w = (1..=10).map(|q| fourier_empirical(&orbit, q).modulus()).fold(0.0, f64::max);
        disc_ok += (d <= 0.05) as u32;
        weyl_ok += (w <= 0.05) as u32;
        worst_disc = worst_disc.max(d);
        worst_weyl = worst_weyl.max(w);
    }
    Outcome {
        pass: disc_ok >= 18 && weyl_ok >= 18,
        detail: format!(
            "discrepancy <= 0.05 on {disc_ok}/20 (max {worst_disc:.4}), |F_q| <= 0.05 for q<=10 on {weyl_ok}/20 (max {worst_weyl:.4})"
        ),
    }
}

fn fourier_exactness() -> Outcome {
    let tol = 1e-9;
    let zero = fourier_exact(&flipped(), &int(0), tol, 10_000_000).unwrap();
    let f0 = zero.re == 1.0 && zero.im == 0.0 && zero.error == 0.0;
    let dy = dyadic();
    let worst_odd = (1..=1000i64)
        .step_by(2)
        .map(|q| fourier_exact(&dy, &int(q), tol, 10_000_000).unwrap().modulus())
        .fold(0.0, f64::max);
    let c = cantor();
    let f1 = fourier_exact(&c, &int(1), tol, 10_000_000).unwrap().modulus();
    let worst_cantor = (1..=8u32)
        .map(|m| (fourier_exact(&c, &int(3i64.pow(m)), tol, 10_000_000).unwrap().modulus() - f1).abs())
        .fold(0.0, f64::max);
    Outcome {
        pass: f0 && worst_odd <= tol && worst_cantor <= 2.0 * tol,
        detail: format!("F_0 exact: {f0}; max odd dyadic |F_q| {worst_odd:.2e}; max Cantor 3^m deviation {worst_cantor:.2e}"),
    }
}

/// Independent estimate: i.i.d. points `f_w(0)` with `|f_w'|` below 1e-13,
/// words drawn by inverse-CDF sampling in plain `f64`.
fn monte_carlo_transform(sys: &SelfSimilarSystem, qs: &[f64], samples: usize, seed: u64) -> Vec<Complex64> {
    let slopes: Vec<f64> = sys.maps().iter().map(|m| to_f64(&m.slope)).collect();
    let offsets: Vec<f64> = sys.maps().iter().map(|m| to_f64(&m.offset)).collect();
    let mut cdf = Vec::new();
    let mut acc = 0.0;
    for w in sys.weights() {
        acc += to_f64(w);
        cdf.push(acc);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut sums = vec![Complex64::new(0.0, 0.0); qs.len()];
    for _ in 0..samples {
        // x = t_{i1} + s_{i1} (t_{i2} + s_{i2} (...)).
        let (mut x, mut scale) = (0.0, 1.0);
        while scale.abs() > 1e-13 {
            let u: f64 = rng.random();
            let i = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
            x += scale * offsets[i];
            scale *= slopes[i];
        }
        for (s, q) in sums.iter_mut().zip(qs) {
            *s += Complex64::from_polar(1.0, 2.0 * PI * q * x);
        }
    }
    sums.into_iter().map(|s| s / samples as f64).collect()
}

fn monte_carlo_equivalence() -> Outcome {
    let tol = 1e-9;
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for (k, sys) in [cantor(), mixed(), flipped()].iter().enumerate() {
        let qs: Vec<BigRational> = (0..20)
            .map(|_| {
                let d = rng.random_range(1..=12i64);
                ratio(rng.random_range(-100 * d..=100 * d), d)
            })
            .collect();
        let qf: Vec<f64> = qs.iter().map(to_f64).collect();
        let mc = monte_carlo_transform(sys, &qf, 1_000_000, 77 + k as u64);
        for (q, est) in qs.iter().zip(mc) {
            let v = fourier_exact(sys, q, tol, 10_000_000).unwrap();
            let diff = (Complex64::new(v.re, v.im) - est).norm();
            worst = worst.max(diff);
            failures += (diff > 3e-3 + tol) as u32;
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("{failures}/60 disagreements, max |exact - MC| {worst:.2e}"),
    }
}

fn stopping_time_exactness() -> Outcome {
    let systems = [cantor(), mixed(), flipped()];
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut violations = 0;
    let mut checked = 0;
    for trial in 0..1000u64 {
        let sys = &systems[(trial % 3) as usize];
        let p = [2u64, 3, 5][((trial / 3) % 3) as usize];
        let n: u64 = rng.random_range(0..=300);
        let seed: u64 = rng.random();
        let rec = stopping_time(sys, &mut SampledWords::new(sys, seed), n, p).unwrap();
        let mut src = SampledWords::new(sys, seed);
        let word = src.prefix(rec.beta).unwrap().to_vec();
        let slope = |m: usize| {
            word[..m]
                .iter()
                .fold(BigRational::one(), |acc, &s| acc * &sys.maps()[s as usize - 1].slope)
        };
        let threshold = BigRational::new(BigInt::one(), BigInt::from(p).pow(n as u32));
        let minimal = slope(rec.beta).abs() < threshold && slope(rec.beta - 1).abs() >= threshold;
        let c0 = sys.min_contraction();
        let lower = (n as f64 * (p as f64).ln() / (1.0 / to_f64(&c0)).ln()).ceil() as usize;
        let r_ok = rec.r.abs() >= c0 && rec.r.abs() < int(1) && rec.r == &slope(rec.beta) * BigRational::from_integer(BigInt::from(p).pow(n as u32));
        violations += (!minimal) as u32 + (rec.beta < lower) as u32 + (!r_ok) as u32;
        checked += 1;
    }
    Outcome {
        pass: violations == 0,
        detail: format!("{violations} violations over {checked} (omega, n) pairs"),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn martingale_gap_decay() -> Outcome {
    let sys = cantor();
    let mut ok = true;
    let mut parts = Vec::new();
    for q in 1..=3i64 {
        let (mut small, mut large) = (Vec::new(), Vec::new());
        for seed in 0..10 {
            let g = martingale_gap(&sys, seed, q, &[100, 10_000], 2, 1e-9, 10_000_000).unwrap();
            small.push(g.rows[0].gap);
            large.push(g.rows[1].gap);
        }
        let (ms, ml) = (median(small), median(large));
        ok &= ml <= 0.1 && ml <= ms;
        parts.push(format!("q={q}: median gap N=1e2 {ms:.4}, N=1e4 {ml:.4}"));
    }
    Outcome {
        pass: ok,
        detail: parts.join("; "),
    }
}

fn full_enumeration(values: &[f64], k: usize, g: &TestFunction) -> f64 {
    let n = values.len();
    let mut total = 0.0;
    let mut u = vec![0usize; k];
    'outer: loop {
        if (0..k).all(|i| (0..i).all(|j| u[i] != u[j])) {
            total += tuple_term(g, values, &u);
        }
        let mut i = k;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            u[i] += 1;
            if u[i] < n {
                break;
            }
            u[i] = 0;
        }
    }
    total / n as f64
}

fn correlation_oracle() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    let mut mismatches = 0;
    for i in 0..200 {
        let n = rng.random_range(3..=30usize);
        let k = 2 + i % 2;
        let values: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let w = rng.random_range(0.05..0.95) * n as f64 / 2.0;
        let g = if i % 4 < 2 { TestFunction::Box { half_width: w } } else { TestFunction::Triangle { half_width: w } };
        let sample = normality_lab::sampling::SequenceSample::from_values(values.clone(), "oracle");
        let fast = k_level_correlation(&sample, k, &g).unwrap().value;
        mismatches += (fast != full_enumeration(&values, k, &g)) as u32;
    }
    let (mut r2_ok, mut spacing_ok) = (0, 0);
    let (mut worst_r2, mut worst_sp) = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let s = uniform_sample(10_000, 1000 + seed);
        let r2 = k_level_correlation(&s, 2, &TestFunction::Box { half_width: 0.5 }).unwrap().value;
        let sp = level_spacings(&s, &default_grid()).unwrap().sup_distance;
        r2_ok += ((r2 - 1.0).abs() <= 0.1) as u32;
        spacing_ok += (sp <= 0.03) as u32;
        worst_r2 = worst_r2.max((r2 - 1.0).abs());
        worst_sp = worst_sp.max(sp);
    }
    Outcome {
        pass: mismatches == 0 && r2_ok >= 18 && spacing_ok >= 18,
        detail: format!(
            "{mismatches}/200 oracle mismatches; R_2 within 10% on {r2_ok}/20 (max dev {worst_r2:.4}); spacing sup <= 0.03 on {spacing_ok}/20 (max {worst_sp:.4})"
        ),
    }
}

fn classifier_ground_truth() -> Outcome {
    let mut wrong = Vec::new();
    let expect_ratio = |s: BigRational, b: u64, r: Option<BigRational>, wrong: &mut Vec<String>| {
        let got = log_commensurable(&s, b).unwrap();
        if got.ratio != r || got.commensurable != r.is_some() {
            wrong.push(format!("({s}, {b})"));
        }
    };
    expect_ratio(ratio(1, 3), 3, Some(int(-1)), &mut wrong);
    expect_ratio(ratio(1, 2), 8, Some(ratio(-1, 3)), &mut wrong);
    expect_ratio(ratio(2, 3), 6, None, &mut wrong);
    for m in 2..=100i64 {
        if !is_pisot(&IntPoly::from_descending(&[1, -m])).unwrap().is_pisot {
            wrong.push(format!("x - {m}"));
        }
    }
    if !is_pisot(&IntPoly::from_descending(&[1, -1, -1])).unwrap().is_pisot {
        wrong.push("x^2 - x - 1".into());
    }
    if is_pisot(&IntPoly::from_descending(&[1, 0, -3])).unwrap().is_pisot {
        wrong.push("x^2 - 3".into());
    }
    Outcome {
        pass: wrong.is_empty(),
        detail: if wrong.is_empty() { "all 104 cases exact".into() } else { format!("wrong: {}", wrong.join(", ")) },
    }
}

fn digit_certificate_stability() -> Outcome {
    let mut mismatches = 0;
    let mut compared = 0;
    for sys in [cantor(), mixed(), flipped()] {
        for base in [2u32, 3, 10] {
            for seed in 0..100 {
                let a = digits(&sys, &mut SampledWords::new(&sys, seed), base, 300, DEFAULT_GUARD).unwrap();
                let b = digits(&sys, &mut SampledWords::new(&sys, seed), base, 300, DEFAULT_GUARD + 10).unwrap();
                let n = a.certified_length.min(b.certified_length);
                mismatches += a.digits[..n].iter().zip(&b.digits[..n]).filter(|(x, y)| x != y).count();
                mismatches += a.certified_length.abs_diff(b.certified_length);
                compared += n;
            }
        }
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("{mismatches} mismatches over {compared} digits"),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        ("cantor obstruction", cantor_obstruction, Duration::from_secs(10)),
        ("desk-scale normality", desk_scale_normality, Duration::from_secs(120)),
        ("fourier exactness", fourier_exactness, Duration::from_secs(60)),
        ("monte carlo equivalence", monte_carlo_equivalence, Duration::from_secs(300)),
        ("stopping-time exactness", stopping_time_exactness, Duration::from_secs(600)),
        ("martingale gap", martingale_gap_decay, Duration::from_secs(600)),
        ("correlation oracle", correlation_oracle, Duration::from_secs(600)),
        ("classifier ground truth", classifier_ground_truth, Duration::from_secs(10)),
        ("digit-certificate stability", digit_certificate_stability, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let pass = outcome.pass && in_time;
        failed += (!pass) as u32;
        println!(
            "criterion {} {:<28} {}  {} [{:.1}s of {}s{}]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", too slow" }
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
