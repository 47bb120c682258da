use super::output::{num, system_hash, Report};
use super::{CliError, Command, DigitArgs, SampleArgs, SequenceArgs};
use crate::algebra::{classify_obstruction, incommensurable_witness, IntPoly, RealAlgebraic};
use crate::fourier::{decay_fit, decay_profile, del_criterion_check, fourier_exact, FourierError};
use crate::ifs::{self, ComposedPrefix, Interval, SelfSimilarSystem, SystemSpec, Word};
use crate::martingale::martingale_gap;
use crate::rational::{format_rational, parse_rational};
use crate::sampling::{
    beta_orbit, digits, orbit_sequence, point_of_word, power_orbit, tail_digits, uniform_sample_for_task, DigitStream,
    PointApproximation, RealParam, SampledWords, SamplingError, SequenceSample, WordSource, RNG_ALGORITHM,
};
use crate::stats::{
    default_grid, digit_frequencies, discrepancy, k_level_correlation, level_spacings, weyl_report, TestFunction,
};
use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::Path;

fn load_system(path: &Path) -> Result<(SelfSimilarSystem, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let spec = SystemSpec::from_json(&text)?;
    let system = SelfSimilarSystem::from_spec(&spec)?;
    let hash = system_hash(&system.to_spec().to_json());
    Ok((system, hash))
}

fn with_system(report: &mut Report, path: &Path, hash: String) {
    report.system_sha256 = Some(hash);
    report.param("system", path.display());
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Validate(a) => validate(&a.system),
        Command::Classify { system, base } => classify(&system.system, *base),
        Command::Fourier { system, q, fourier } => fourier_cmd(&system.system, q, fourier.tol, fourier.budget),
        Command::Decay {
            system,
            j_max,
            per_band,
            del_alpha,
            fourier,
        } => decay(&system.system, *j_max, *per_band, *del_alpha, fourier.tol, fourier.budget),
        Command::Orbit { system, sample, digits } => orbit(&system.system, sample, digits),
        Command::Digits { system, sample, digits } => digit_streams(&system.system, sample, digits),
        Command::BetaOrbit {
            system,
            sample,
            beta,
            beta_poly,
            beta_bracket,
            precision_bits,
        } => {
            let param = real_param("beta", beta, beta_poly, beta_bracket)?;
            beta_cmd(&system.system, sample, &param, *precision_bits)
        }
        Command::PowerOrbit {
            x,
            x_poly,
            x_bracket,
            length,
        } => power(&real_param("x", x, x_poly, x_bracket)?, *length),
        Command::Normality {
            system,
            sample,
            digits,
            block,
            q_max,
            discrepancy_threshold,
            weyl_threshold,
            frequency_threshold,
        } => normality(
            &system.system,
            sample,
            digits,
            *block,
            *q_max,
            [*discrepancy_threshold, *frequency_threshold, *weyl_threshold],
        ),
        Command::Correlations {
            seq,
            k,
            box_width,
            triangle,
            tolerance,
        } => {
            let g = match (box_width, triangle) {
                (_, Some(w)) => TestFunction::Triangle { half_width: *w },
                (Some(w), None) => TestFunction::Box { half_width: *w },
                (None, None) => TestFunction::Box { half_width: 0.5 },
            };
            correlations(seq, *k, g, *tolerance)
        }
        Command::Spacings { seq, s_grid, threshold } => spacings(seq, s_grid.as_deref(), *threshold),
        Command::Martingale {
            system,
            seed,
            base,
            q,
            n_list,
            fourier,
        } => martingale(&system.system, *seed, *base, *q, n_list, fourier.tol, fourier.budget),
    }
}

fn validate(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let spec = SystemSpec::from_json(&text)?;
    let checked = ifs::validate(&spec)?;
    let system = SelfSimilarSystem::from_spec(&spec)?;
    let mut r = Report::new("validate", vec!["index", "slope", "offset", "weight", "fixed_point"]);
    with_system(&mut r, path, system_hash(&system.to_spec().to_json()));
    for (i, (m, w)) in system.maps().iter().zip(system.weights()).enumerate() {
        r.row(vec![
            (i + 1).to_string(),
            format_rational(&m.slope),
            format_rational(&m.offset),
            format_rational(w),
            format_rational(&checked.fixed_points[i]),
        ]);
    }
    r.note("valid", true);
    r.summary = json!({
        "valid": true,
        "maps": checked.maps,
        "hull": [format_rational(&checked.hull.lo), format_rational(&checked.hull.hi)],
        "contraction": format_rational(&checked.contraction),
        "homogeneous": checked.homogeneous,
        "fixed_points": checked.fixed_points.iter().map(format_rational).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn classify(path: &Path, base: u64) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let report = classify_obstruction(&system, base)?;
    let witness = incommensurable_witness(&system, base)?;
    let mut r = Report::new(
        "classify",
        vec![
            "index",
            "slope",
            "translation",
            "slope_commensurable",
            "log_ratio",
            "translation_passes",
            "translation_numerator",
            "translation_exponent",
        ],
    );
    with_system(&mut r, path, hash);
    r.param("base", base);
    for m in &report.maps {
        r.row(vec![
            m.index.to_string(),
            format_rational(&m.slope),
            format_rational(&m.translation),
            m.slope_check.commensurable.to_string(),
            m.slope_check.ratio.as_ref().map(format_rational).unwrap_or_default(),
            m.translation_check.passes.to_string(),
            m.translation_check.numerator.as_ref().map(|k| k.to_string()).unwrap_or_default(),
            m.translation_check.exponent.map(|e| e.to_string()).unwrap_or_default(),
        ]);
    }
    r.note("verdict", report.verdict);
    r.note("incommensurable_witness", witness.map(|i| i.to_string()).unwrap_or_else(|| "none".into()));
    r.summary = json!({
        "verdict": report.verdict.to_string(),
        "incommensurable_witness": witness,
        "report": to_value(&report),
    });
    Ok(r)
}

fn fourier_cmd(path: &Path, q: &str, tol: f64, budget: u64) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let q = parse_rational(q)?;
    let v = fourier_exact(&system, &q, tol, budget)?;
    let mut r = Report::new("fourier", vec!["q", "re", "im", "modulus", "error_bound"]);
    with_system(&mut r, path, hash);
    r.param("q", format_rational(&q)).param("tol", num(tol)).param("budget", budget);
    r.row(vec![format_rational(&q), num(v.re), num(v.im), num(v.modulus()), num(v.error)]);
    r.summary = json!({ "value": to_value(&v), "modulus": v.modulus() });
    Ok(r)
}

fn decay(path: &Path, j_max: u32, per_band: u64, del_alpha: Option<f64>, tol: f64, budget: u64) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let profile = decay_profile(&system, j_max, per_band, tol, budget)?;
    let mut r = Report::new(
        "decay",
        vec!["j", "lo", "hi", "argmax", "sup", "max_error", "evaluated", "budget_exceeded"],
    );
    with_system(&mut r, path, hash);
    r.param("j_max", j_max).param("per_band", per_band).param("tol", num(tol)).param("budget", budget);
    if let Some(a) = del_alpha {
        r.param("del_alpha", num(a));
    }
    for b in &profile.bands {
        r.row(vec![
            b.j.to_string(),
            b.lo.to_string(),
            b.hi.to_string(),
            b.argmax.to_string(),
            num(b.sup),
            num(b.max_error),
            b.evaluated.to_string(),
            b.budget_exceeded.to_string(),
        ]);
    }
    let (fit, fit_error) = match decay_fit(&profile) {
        Ok(f) => (Some(f), None),
        Err(e @ FourierError::InsufficientBands { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let del = del_alpha.map(|a| del_criterion_check(&profile, a)).transpose()?;
    // Fits are empirical; the exact classifier is listed next to them.
    let obstruction: Vec<Value> = (2..=10u64)
        .map(|b| classify_obstruction(&system, b).map(|rep| json!({ "base": b, "verdict": rep.verdict.to_string() })))
        .collect::<Result<_, _>>()?;
    if let Some(f) = &fit {
        r.note("regime", format!("{:?}", f.regime).to_lowercase());
    }
    r.summary = json!({
        "profile": to_value(&profile),
        "fit": fit.as_ref().map(to_value),
        "fit_error": fit_error,
        "del_check": del.as_ref().map(to_value),
        "obstruction": obstruction,
    });
    Ok(r)
}

fn check_samples(sample: &SampleArgs) -> Result<(), CliError> {
    if sample.samples == 0 || sample.length == 0 {
        return Err(CliError::Config("--samples and --length must be positive".into()));
    }
    Ok(())
}

fn sample_params(r: &mut Report, sample: &SampleArgs) {
    r.seed = Some(sample.seed);
    r.param("samples", sample.samples).param("length", sample.length).param("rng", RNG_ALGORITHM);
}

/// Digit streams and orbits `T_b^n x_ω`, `n = 0 … length-1`, one PRNG stream per sample.
fn orbit_streams(
    system: &SelfSimilarSystem,
    sample: &SampleArgs,
    d: &DigitArgs,
) -> Result<Vec<(DigitStream, SequenceSample)>, CliError> {
    check_samples(sample)?;
    if d.base < 2 {
        return Err(CliError::Config(format!("base {} must be at least 2", d.base)));
    }
    let n_digits = sample.length - 1 + tail_digits(d.base);
    let out = (0..sample.samples)
        .into_par_iter()
        .map(|task| {
            let mut src = SampledWords::for_task(system, sample.seed, task);
            let stream = digits(system, &mut src, d.base, n_digits, d.guard)?;
            let mut orbit = orbit_sequence(&stream, sample.length)?;
            orbit.seed = Some(sample.seed);
            orbit.rng = Some(RNG_ALGORITHM.into());
            Ok((stream, orbit))
        })
        .collect::<Result<Vec<_>, SamplingError>>()?;
    Ok(out)
}

fn orbit(path: &Path, sample: &SampleArgs, d: &DigitArgs) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let streams = orbit_streams(&system, sample, d)?;
    let mut r = Report::new("orbit", vec!["sample", "n", "value", "error"]);
    with_system(&mut r, path, hash);
    sample_params(&mut r, sample);
    r.param("base", d.base).param("guard", d.guard);
    let mut meta = Vec::new();
    for (task, (stream, orbit)) in streams.iter().enumerate() {
        for (i, (v, e)) in orbit.values.iter().zip(&orbit.errors).enumerate() {
            r.row(vec![task.to_string(), (orbit.start + i as u64).to_string(), num(*v), num(*e)]);
        }
        meta.push(json!({
            "task": task,
            "word_depth": stream.depth(),
            "certified_digits": stream.certified_length,
            "values": orbit.len(),
            "max_error": orbit.max_error(),
        }));
    }
    r.summary = json!({ "base": d.base, "rng": RNG_ALGORITHM, "samples": meta });
    Ok(r)
}

fn digit_string(stream: &DigitStream) -> String {
    let ds = &stream.digits[..stream.certified_length.min(stream.digits.len())];
    if stream.base <= 36 {
        ds.iter().map(|&d| std::char::from_digit(d, stream.base).expect("digit below base")).collect()
    } else {
        ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(":")
    }
}

fn digit_streams(path: &Path, sample: &SampleArgs, d: &DigitArgs) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    check_samples(sample)?;
    if d.base < 2 {
        return Err(CliError::Config(format!("base {} must be at least 2", d.base)));
    }
    let streams = (0..sample.samples)
        .into_par_iter()
        .map(|task| {
            let mut src = SampledWords::for_task(&system, sample.seed, task);
            digits(&system, &mut src, d.base, sample.length, d.guard)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new("digits", vec!["sample", "word_depth", "certified_digits", "digits"]);
    with_system(&mut r, path, hash);
    sample_params(&mut r, sample);
    r.param("base", d.base).param("guard", d.guard);
    let mut meta = Vec::new();
    for (task, s) in streams.iter().enumerate() {
        let text = digit_string(s);
        r.row(vec![task.to_string(), s.depth().to_string(), s.certified_length.to_string(), text.clone()]);
        meta.push(json!({
            "task": task,
            "word_depth": s.depth(),
            "certified_digits": s.certified_length,
            "digits": text,
        }));
    }
    r.summary = json!({ "base": d.base, "rng": RNG_ALGORITHM, "samples": meta });
    Ok(r)
}

fn real_param(
    name: &str,
    value: &Option<String>,
    poly: &Option<String>,
    bracket: &Option<String>,
) -> Result<RealParam, CliError> {
    match (value, poly, bracket) {
        (Some(v), None, _) => Ok(RealParam::Rational(parse_rational(v)?)),
        (None, Some(p), Some(b)) => {
            let poly = IntPoly::parse_descending(p)?;
            let (lo, hi) = b
                .split_once(',')
                .ok_or_else(|| CliError::Config(format!("bracket {b:?} must be lo,hi")))?;
            let iv = Interval::new(parse_rational(lo)?, parse_rational(hi)?);
            Ok(RealParam::Algebraic(RealAlgebraic::new(poly, iv)?))
        }
        _ => Err(CliError::Config(format!("give --{name} or --{name}-poly with --{name}-bracket"))),
    }
}

fn describe_param(p: &RealParam) -> String {
    match p {
        RealParam::Rational(r) => format_rational(r),
        RealParam::Algebraic(a) => format!("root of {} in {}", a.poly, a.enclosure),
    }
}

/// A sampled point enclosed to radius at most `2^-bits`.
fn sample_point(system: &SelfSimilarSystem, seed: u64, task: u64, bits: u64) -> Result<PointApproximation, CliError> {
    let mut src = SampledWords::for_task(system, seed, task);
    let w = system.hull().width();
    let scale = BigInt::from(1) << bits;
    let mut prefix = ComposedPrefix::new(system);
    // radius = |P| / D^m · W ≤ 2^-bits
    loop {
        let (p, _, d) = prefix.raw();
        if prefix.depth() > 0 && p.abs() * w.numer() * &scale <= d * w.denom() {
            break;
        }
        let m = prefix.depth();
        let s = src.prefix(m + 1).expect("sampled words never end")[m];
        prefix.push(s);
    }
    let word = Word::new(src.prefix(prefix.depth()).expect("already drawn").to_vec());
    Ok(point_of_word(system, &word, &system.hull().midpoint())?)
}

fn beta_cmd(path: &Path, sample: &SampleArgs, param: &RealParam, precision_bits: Option<u64>) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    check_samples(sample)?;
    let growth = param.approx().log2().max(0.0);
    let bits = precision_bits.unwrap_or((growth * sample.length as f64).ceil() as u64 + 64);
    let orbits = (0..sample.samples)
        .into_par_iter()
        .map(|task| {
            let x = sample_point(&system, sample.seed, task, bits)?;
            let mut o = beta_orbit(&x, param, sample.length)?;
            o.seed = Some(sample.seed);
            Ok((x.word.len(), o))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut r = Report::new("beta-orbit", vec!["sample", "n", "value", "error"]);
    with_system(&mut r, path, hash);
    sample_params(&mut r, sample);
    r.param("beta", describe_param(param)).param("precision_bits", bits);
    let mut meta = Vec::new();
    for (task, (depth, o)) in orbits.iter().enumerate() {
        for (i, (v, e)) in o.values.iter().zip(&o.errors).enumerate() {
            r.row(vec![task.to_string(), (o.start + i as u64).to_string(), num(*v), num(*e)]);
        }
        meta.push(json!({ "task": task, "word_depth": depth, "values": o.len(), "max_error": o.max_error() }));
    }
    r.summary = json!({ "beta": describe_param(param), "precision_bits": bits, "samples": meta });
    Ok(r)
}

fn power(param: &RealParam, length: usize) -> Result<Report, CliError> {
    let o = power_orbit(param, length)?;
    let mut r = Report::new("power-orbit", vec!["n", "value", "error"]);
    r.param("x", describe_param(param)).param("length", length);
    for (i, (v, e)) in o.values.iter().zip(&o.errors).enumerate() {
        r.row(vec![(o.start + i as u64).to_string(), num(*v), num(*e)]);
    }
    r.summary = json!({ "x": describe_param(param), "values": o.len(), "max_error": o.max_error() });
    Ok(r)
}

fn normality(
    path: &Path,
    sample: &SampleArgs,
    d: &DigitArgs,
    block: usize,
    q_max: i64,
    thresholds: [f64; 3],
) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let streams = orbit_streams(&system, sample, d)?;
    let mut r = Report::new("normality", vec!["sample", "statistic", "value", "threshold", "pass"]);
    with_system(&mut r, path, hash);
    sample_params(&mut r, sample);
    r.param("base", d.base)
        .param("guard", d.guard)
        .param("block", block)
        .param("q_max", q_max)
        .param("discrepancy_threshold", num(thresholds[0]))
        .param("frequency_threshold", num(thresholds[1]))
        .param("weyl_threshold", num(thresholds[2]));
    let names = ["discrepancy", "block_frequency_deviation", "weyl_max_modulus"];
    let mut passing = [0u64; 3];
    let mut meta = Vec::new();
    for (task, (stream, orbit)) in streams.iter().enumerate() {
        let values = [
            discrepancy(orbit)?,
            digit_frequencies(stream, block)?.max_deviation,
            weyl_report(orbit, q_max, thresholds[2])?.max_modulus,
        ];
        let mut entry = serde_json::Map::new();
        entry.insert("task".into(), json!(task));
        for i in 0..3 {
            let pass = values[i] <= thresholds[i];
            passing[i] += pass as u64;
            r.row(vec![task.to_string(), names[i].into(), num(values[i]), num(thresholds[i]), pass.to_string()]);
            entry.insert(names[i].into(), json!({ "value": values[i], "threshold": thresholds[i], "pass": pass }));
        }
        meta.push(Value::Object(entry));
    }
    for i in 0..3 {
        r.note(&format!("{}_passing", names[i]), format!("{}/{}", passing[i], sample.samples));
    }
    r.summary = json!({
        "samples": meta,
        "passing": {
            names[0]: passing[0],
            names[1]: passing[1],
            names[2]: passing[2],
        },
        "total": sample.samples,
    });
    Ok(r)
}

fn sequences(seq: &SequenceArgs, r: &mut Report) -> Result<Vec<SequenceSample>, CliError> {
    sample_params(r, &seq.sample);
    match &seq.system {
        Some(path) if !seq.uniform => {
            let (system, hash) = load_system(path)?;
            with_system(r, path, hash);
            r.param("base", seq.digits.base).param("guard", seq.digits.guard);
            Ok(orbit_streams(&system, &seq.sample, &seq.digits)?
                .into_iter()
                .map(|(_, o)| o)
                .collect())
        }
        _ => {
            check_samples(&seq.sample)?;
            r.param("source", "iid uniform");
            Ok((0..seq.sample.samples)
                .map(|task| uniform_sample_for_task(seq.sample.length, seq.sample.seed, task))
                .collect())
        }
    }
}

fn correlations(seq: &SequenceArgs, k: usize, g: TestFunction, tolerance: f64) -> Result<Report, CliError> {
    let mut r = Report::new("correlations", vec!["sample", "k", "value", "integral", "deviation", "tuples", "pass"]);
    let samples = sequences(seq, &mut r)?;
    r.param("k", k).param("test_function", serde_json::to_string(&g).expect("plain data")).param("tolerance", num(tolerance));
    let results = samples
        .iter()
        .map(|s| k_level_correlation(s, k, &g))
        .collect::<Result<Vec<_>, _>>()?;
    let mut passing = 0u64;
    let mut meta = Vec::new();
    for (task, c) in results.iter().enumerate() {
        let pass = c.deviation <= tolerance * c.integral;
        passing += pass as u64;
        r.row(vec![
            task.to_string(),
            k.to_string(),
            num(c.value),
            num(c.integral),
            num(c.deviation),
            c.tuples.to_string(),
            pass.to_string(),
        ]);
        meta.push(json!({ "task": task, "result": to_value(c), "pass": pass }));
    }
    r.note("passing", format!("{passing}/{}", results.len()));
    r.summary = json!({
        "k": k,
        "test_function": to_value(&g),
        "tolerance": tolerance,
        "samples": meta,
        "passing": passing,
        "total": results.len(),
    });
    Ok(r)
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("bad grid {s:?}"));
    let grid: Vec<f64> = if let [a, b, step] = s.split(':').collect::<Vec<_>>()[..] {
        let (a, b, step): (f64, f64, f64) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            step.trim().parse().map_err(|_| bad())?,
        );
        if !(step > 0.0) || b < a {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| a + i as f64 * step).collect()
    } else {
        s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if grid.is_empty() || grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(bad());
    }
    Ok(grid)
}

fn spacings(seq: &SequenceArgs, grid: Option<&str>, threshold: f64) -> Result<Report, CliError> {
    let mut r = Report::new("spacings", vec!["sample", "s", "g", "poisson"]);
    let samples = sequences(seq, &mut r)?;
    let grid = match grid {
        Some(g) => parse_grid(g)?,
        None => default_grid(),
    };
    r.param("s_grid", grid.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")).param("threshold", num(threshold));
    let reports = samples
        .iter()
        .map(|s| level_spacings(s, &grid))
        .collect::<Result<Vec<_>, _>>()?;
    let mut passing = 0u64;
    let mut meta = Vec::new();
    for (task, rep) in reports.iter().enumerate() {
        for (s, g) in rep.grid.iter().zip(&rep.g) {
            r.row(vec![task.to_string(), num(*s), num(*g), num(-(-s).exp_m1())]);
        }
        let pass = rep.sup_distance <= threshold;
        passing += pass as u64;
        meta.push(json!({
            "task": task,
            "n": rep.n,
            "sup_distance": rep.sup_distance,
            "grid_distance": rep.grid_distance,
            "pass": pass,
        }));
    }
    r.note("passing", format!("{passing}/{}", reports.len()));
    r.summary = json!({ "threshold": threshold, "samples": meta, "passing": passing, "total": reports.len() });
    Ok(r)
}

fn martingale(path: &Path, seed: u64, p: u64, q: i64, n_list: &str, tol: f64, budget: u64) -> Result<Report, CliError> {
    let (system, hash) = load_system(path)?;
    let ns: Vec<usize> = n_list
        .split(',')
        .map(|v| v.trim().parse().map_err(|_| CliError::Config(format!("bad N list {n_list:?}"))))
        .collect::<Result<_, _>>()?;
    let series = martingale_gap(&system, seed, q, &ns, p, tol, budget)?;
    let mut r = Report::new(
        "martingale",
        vec!["N", "empirical_re", "empirical_im", "cylinder_re", "cylinder_im", "gap", "error"],
    );
    with_system(&mut r, path, hash);
    r.seed = Some(seed);
    r.param("base", p)
        .param("q", q)
        .param("N_list", n_list)
        .param("tol", num(tol))
        .param("budget", budget)
        .param("rng", RNG_ALGORITHM);
    for row in &series.rows {
        r.row(vec![
            row.n.to_string(),
            num(row.empirical_re),
            num(row.empirical_im),
            num(row.cylinder_re),
            num(row.cylinder_im),
            num(row.gap),
            num(row.error),
        ]);
    }
    r.summary = to_value(&series);
    Ok(r)
}
