use normality_lab::fourier::fourier_exact;
use normality_lab::ifs::presets::{cantor, dyadic};
use normality_lab::ifs::{AffineMap, SelfSimilarSystem, Word};
use normality_lab::martingale::{stopping_time, stopping_times};
use normality_lab::rational::{exp_2pi_i, int, ratio, to_f64};
use normality_lab::sampling::{
    digits, orbit_sequence, point_of_word, tail_digits, PeriodicWord, SampledWords, WordSource,
    DEFAULT_GUARD,
};
use normality_lab::stats::correlation::{coordinate_term, tuple_term};
use normality_lab::stats::{k_level_correlation, TestFunction};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use std::f64::consts::PI;

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

fn named(i: usize) -> SelfSimilarSystem {
    match i % 4 {
        0 => cantor(),
        1 => dyadic(),
        2 => mixed(),
        _ => flipped(),
    }
}

/// Homogeneous system `x ↦ x/d + k/d` for a set of digits `k`.
fn homogeneous() -> impl Strategy<Value = SelfSimilarSystem> {
    (2i64..=7)
        .prop_flat_map(|d| (Just(d), proptest::sample::subsequence((0..d).collect::<Vec<_>>(), 2..=(d as usize).min(4))))
        .prop_flat_map(|(d, ks)| {
            let n = ks.len();
            (Just(d), Just(ks), proptest::collection::vec(1i64..=5, n))
        })
        .prop_map(|(d, ks, w)| {
            let total: i64 = w.iter().sum();
            SelfSimilarSystem::new(
                ks.iter().map(|&k| AffineMap::new(ratio(1, d), ratio(k, d))).collect(),
                w.iter().map(|&x| ratio(x, total)).collect(),
            )
            .unwrap()
        })
}

fn rational_q() -> impl Strategy<Value = BigRational> {
    (-2000i64..=2000, 1i64..=20).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn digits_survive_more_guard_digits(sys in 0usize..4, seed in any::<u64>(), base in prop::sample::select(vec![2u32, 3, 7, 10])) {
        let system = named(sys);
        let d1 = digits(&system, &mut SampledWords::new(&system, seed), base, 200, DEFAULT_GUARD).unwrap();
        let d2 = digits(&system, &mut SampledWords::new(&system, seed), base, 200, DEFAULT_GUARD + 10).unwrap();
        prop_assert_eq!(&d1.digits[..d1.certified_length], &d2.digits[..d1.certified_length]);
        // The digits name a b-adic cell that contains the enclosure.
        let lo = normality_lab::sampling::digits::digits_value(&d1.digits, base);
        let hi = &lo + BigRational::new(1.into(), num_bigint::BigInt::from(base).pow(200));
        let iv = d1.source.interval();
        let frac = |x: &BigRational| x - x.floor();
        prop_assume!(iv.lo.floor() == iv.hi.floor());
        prop_assert!(frac(&iv.lo) >= lo && frac(&iv.hi) < hi);
    }

    #[test]
    fn enclosures_nest_around_periodic_points(
        sys in 0usize..4,
        pre in proptest::collection::vec(1u32..=2, 0..4),
        period in proptest::collection::vec(1u32..=2, 1..4),
        extra in 1usize..30,
    ) {
        let system = named(sys);
        let mut src = PeriodicWord::new(pre, period, system.len()).unwrap();
        let x = src.exact_point(&system).unwrap();
        let mut prev: Option<normality_lab::ifs::Interval> = None;
        for m in [extra, 2 * extra, 4 * extra] {
            let w = Word::new(src.prefix(m).unwrap().to_vec());
            let approx = point_of_word(&system, &w, &system.hull().midpoint()).unwrap();
            prop_assert!(approx.interval().contains(&x));
            // Images of the hull under longer prefixes are nested.
            let image = system.compose(&w).unwrap().image(system.hull());
            if let Some(p) = &prev {
                prop_assert!(p.contains_interval(&image));
            }
            prev = Some(image);
        }
    }

    #[test]
    fn orbit_matches_exact_arithmetic(sys in 0usize..4, seed in any::<u64>(), base in 2u32..=10) {
        let system = named(sys);
        let n = 40;
        let stream = digits(&system, &mut SampledWords::new(&system, seed), base, n - 1 + tail_digits(base), DEFAULT_GUARD).unwrap();
        let orbit = orbit_sequence(&stream, n).unwrap();
        let x = &stream.source.center;
        let b = BigRational::from_integer(base.into());
        let mut bx = x - x.floor();
        for k in 0..n {
            let exact = to_f64(&bx);
            let slack = orbit.errors[k] + to_f64(&stream.source.radius) * to_f64(&b).powi(k as i32) + 1e-15;
            prop_assert!((orbit.values[k] - exact).abs() <= slack, "k = {}: {} vs {}", k, orbit.values[k], exact);
            bx = &bx * &b;
            bx = &bx - bx.floor();
        }
    }

    #[test]
    fn windowed_correlation_equals_full_enumeration(
        values in proptest::collection::vec(-2.0f64..3.0, 3..30),
        k in 2usize..=3,
        width_frac in 0.01f64..0.99,
        triangle in any::<bool>(),
    ) {
        let n = values.len();
        let w = width_frac * n as f64 / 2.0;
        let g = if triangle { TestFunction::Triangle { half_width: w } } else { TestFunction::Box { half_width: w } };
        let sample = normality_lab::sampling::SequenceSample::from_values(values.clone(), "prop");
        let fast = k_level_correlation(&sample, k, &g).unwrap();
        let reduced: Vec<f64> = values.iter().map(|v| v.rem_euclid(1.0)).collect();
        prop_assert_eq!(fast.value, brute_force(&reduced, k, &g));
    }

    #[test]
    fn conjugate_symmetry(sys in 0usize..4, q in rational_q()) {
        let system = named(sys);
        let a = fourier_exact(&system, &q, 1e-9, 10_000_000).unwrap();
        let b = fourier_exact(&system, &-q.clone(), 1e-9, 10_000_000).unwrap();
        prop_assert!((a.re - b.re).abs() <= a.error + b.error);
        prop_assert!((a.im + b.im).abs() <= a.error + b.error);
        prop_assert!(a.modulus() <= 1.0 + a.error);
    }

    #[test]
    fn self_similarity_residual(sys in 0usize..4, q in rational_q()) {
        let system = named(sys);
        let tol = 1e-9;
        let f = fourier_exact(&system, &q, tol, 10_000_000).unwrap();
        let mut rhs = Complex64::new(0.0, 0.0);
        for (m, p) in system.maps().iter().zip(system.weights()) {
            let child = fourier_exact(&system, &(&q * &m.slope), tol, 10_000_000).unwrap();
            let (c, s) = exp_2pi_i(&(&q * &m.offset));
            rhs += to_f64(p) * Complex64::new(c, s) * Complex64::new(child.re, child.im);
        }
        let n = system.len() as f64;
        prop_assert!((Complex64::new(f.re, f.im) - rhs).norm() <= (n + 1.0) * tol);
    }

    #[test]
    fn homogeneous_product_oracle(system in homogeneous(), q in rational_q()) {
        let tol = 1e-9;
        let f = fourier_exact(&system, &q, tol, 10_000_000).unwrap();
        let oracle = product_oracle(&system, to_f64(&q), tol / 2.0);
        prop_assert!((Complex64::new(f.re, f.im) - oracle).norm() <= 2.0 * tol);
    }

    #[test]
    fn stopping_time_invariants(sys in 0usize..4, seed in any::<u64>(), p in 2u64..=7, n in 0u64..150) {
        let system = named(sys);
        let rec = stopping_time(&system, &mut SampledWords::new(&system, seed), n, p).unwrap();
        let mut src = SampledWords::new(&system, seed);
        let word = src.prefix(rec.beta).unwrap().to_vec();
        let slope = |m: usize| word[..m].iter().fold(BigRational::one(), |acc, &s| acc * &system.maps()[s as usize - 1].slope);
        let threshold = BigRational::new(1.into(), num_bigint::BigInt::from(p).pow(n as u32));
        prop_assert!(slope(rec.beta).abs() < threshold);
        prop_assert!(slope(rec.beta - 1).abs() >= threshold);
        prop_assert_eq!(&slope(rec.beta), rec.slope_product());
        let c0 = system.min_contraction();
        prop_assert!(rec.r.abs() >= c0 && rec.r.abs() < int(1));
        // β_n is nondecreasing in n and agrees with the batched computation.
        let all = stopping_times(&system, &mut SampledWords::new(&system, seed), p, n + 1).unwrap();
        prop_assert!(all.windows(2).all(|w| w[0].beta <= w[1].beta));
        prop_assert_eq!(&all[n as usize], &rec);
    }
}

/// Every ordered `k`-tuple of distinct indices, in lexicographic order.
fn brute_force(values: &[f64], k: usize, g: &TestFunction) -> f64 {
    let n = values.len();
    let mut total = 0.0;
    let mut u = vec![0usize; k];
    loop {
        let distinct = (0..k).all(|i| (0..i).all(|j| u[i] != u[j]));
        if distinct {
            total += tuple_term(g, values, &u);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return total / n as f64;
            }
            i -= 1;
            u[i] += 1;
            if u[i] < n {
                break;
            }
            u[i] = 0;
        }
    }
}

/// `Π_k Σ_i p_i e^{2πi q s^k t_i}`, truncated once the remaining factors are
/// within `tail` of one.
fn product_oracle(system: &SelfSimilarSystem, q: f64, tail: f64) -> Complex64 {
    let s = to_f64(&system.maps()[0].slope);
    let ts: Vec<f64> = system.maps().iter().map(|m| to_f64(&m.offset)).collect();
    let ps: Vec<f64> = system.weights().iter().map(to_f64).collect();
    let reach = ts.iter().fold(0.0f64, |a, t| a.max(t.abs())) / (1.0 - s.abs());
    let mut prod = Complex64::new(1.0, 0.0);
    let mut scale = q;
    while 2.0 * PI * scale.abs() * reach > tail {
        let factor: Complex64 = ts
            .iter()
            .zip(&ps)
            .map(|(t, p)| *p * Complex64::from_polar(1.0, 2.0 * PI * scale * t))
            .sum();
        prod *= factor;
        scale *= s;
    }
    prod
}

#[test]
fn coordinate_term_wraps() {
    let g = TestFunction::Box { half_width: 0.5 };
    assert_eq!(coordinate_term(&g, 10.0, 0.98), 1.0);
    assert_eq!(coordinate_term(&g, 10.0, 0.5), 0.0);
}
