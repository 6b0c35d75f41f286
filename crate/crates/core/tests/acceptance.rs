//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always appear in the test output.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use parity_loqc::cli;
use parity_loqc::fock::{build_tn, elim_resource, fidelity, make_state, tn_reference, FockState, Rail, Surd};
use parity_loqc::gate::{
    expected_uses, f_z_klm_exact, factory_grid, factory_minimum, gate_budget, klm_concat, klm_resource_bound,
    p_gate_cnot, reference, solve_min_w, FactoryCostModel, GateConfig, TeleporterSpec,
};
use parity_loqc::mc::mc_report;
use parity_loqc::parity::{encode_logical, logical_fidelity, CodeRegister};
use parity_loqc::walk::{
    absorb_prob, markov_exact, mean_encoder_uses, mean_passage_closed, EncoderStage, EncodingWidth, WalkProblem,
};

const FID_TOL: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn occ(ket: &str) -> Vec<u32> {
    ket.chars().map(|ch| ch.to_digit(10).unwrap()).collect()
}

fn uniform(kets: &[&str]) -> FockState {
    let a = c(1.0 / (kets.len() as f64).sqrt(), 0.0);
    make_state(1, kets.iter().map(|k| (occ(k), a))).unwrap()
}

fn timed(limit: Duration, o: Outcome, start: Instant) -> Outcome {
    let t = start.elapsed();
    let detail = format!("{}; {:.3} s (limit {} s)", o.detail, t.as_secs_f64(), limit.as_secs());
    outcome(o.passed && t < limit, detail)
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["parity-loqc"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

fn elimination_single() -> Outcome {
    let start = Instant::now();
    let (code, text) = run_cli(&["verify"]);
    let float = elim_resource::<Complex64>(Rail::Single).unwrap();
    let exact = elim_resource::<Surd>(Rail::Single).unwrap();
    let f = fidelity(&float.state, &uniform(&["0011", "1001", "1100"])).unwrap();
    let p = exact.probability.as_rational();
    let ok = code == 0 && text.contains("\"passed\": true") && f >= 1.0 - FID_TOL && p == Some(rat(12, 441));
    timed(Duration::from_secs(1), outcome(ok, format!("verify exit {code}, fidelity {f:.15}, P = {p:?}")), start)
}

fn seven_term() -> Outcome {
    let run = elim_resource::<Complex64>(Rail::Single).unwrap();
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let expected = [
        ("010111", r3),
        ("010210", -3.0 * r2),
        ("011011", r3),
        ("012010", 3.0 * r2),
        ("110011", 1.0),
        ("110110", -r3),
        ("111010", r3),
    ];
    let worst = expected
        .iter()
        .map(|(k, v)| (run.mixed.amplitude(&occ(k)).copied().unwrap_or_default() - c(v / 7.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let ok = worst <= 1e-12 && run.mixed.len() == expected.len();
    outcome(ok, format!("{} terms, max |deviation| {worst:.2e}", run.mixed.len()))
}

fn elimination_dual() -> Outcome {
    let float = elim_resource::<Complex64>(Rail::Dual).unwrap();
    let exact = elim_resource::<Surd>(Rail::Dual).unwrap();
    let f = fidelity(&float.state, &uniform(&["10001011", "01101001", "01110100"])).unwrap();
    let p = exact.probability.as_rational();
    let ok = float.state.mode_count() == 8 && f >= 1.0 - FID_TOL && p == Some(rat(12, 441));
    outcome(ok, format!("{} modes, fidelity {f:.15}, P = {p:?}", float.state.mode_count()))
}

fn tn_growth() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 1.0;
    for n in 1..=5 {
        let built = build_tn::<Complex64>(n).unwrap();
        worst = worst.min(fidelity(&built.state, &tn_reference::<Complex64>(n).unwrap()).unwrap());
    }
    timed(Duration::from_secs(5), outcome(worst >= 1.0 - FID_TOL, format!("min fidelity {worst:.15}")), start)
}

fn random_qubit(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (a, b) = (c(v[0], v[1]), c(v[2], v[3]));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

fn two_qubit_inputs(rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let mut v = vec![
        vec![one, z, z, z],
        vec![z, one, z, z],
        vec![z, z, one, z],
        vec![z, z, z, one],
        vec![c(h, 0.0), z, c(0.0, h), z],
    ];
    let raw: Vec<Complex64> = (0..4).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.push(raw.into_iter().map(|a| a / n).collect());
    v
}

fn parity_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 1.0;
    for w in 1..=4 {
        for _ in 0..6 {
            let (a, b) = random_qubit(&mut rng);
            let grown = encode_logical(a, b, w).unwrap().encoder_step(0, 0).unwrap();
            let direct = encode_logical(a, b, w + 1).unwrap();
            let diff: f64 = (0..1u64 << (w + 1))
                .map(|k| (grown.register().amplitude(k) - direct.register().amplitude(k)).norm())
                .fold(0.0, f64::max);
            worst = worst.min(1.0 - diff);

            let q = encode_logical(a, b, w + 1).unwrap();
            for comp in 0..=w as usize {
                for outcome in [false, true] {
                    let (ra, rb) = q.z_measure_recover(0, comp, outcome).unwrap().readout_logical().unwrap();
                    worst = worst.min(logical_fidelity(&[ra, rb], &[a, b]));
                }
            }

            let ideal = [a, b * c(0.0, 1.0)];
            for pattern in 0..1u32 << (w - 1) {
                let outcomes: Vec<bool> = (0..w - 1).map(|i| pattern >> i & 1 == 1).collect();
                let out = encode_logical(a, b, w).unwrap().logical_z90_forced(0, &outcomes).unwrap();
                let (za, zb) = out.readout_logical().unwrap();
                worst = worst.min(logical_fidelity(&[za, zb], &ideal));
            }
        }
    }
    for wc in 1..=4 {
        for wt in 1..=4 {
            for input in two_qubit_inputs(&mut rng) {
                let reg = CodeRegister::from_logical(&input, &[wc, wt]).unwrap();
                let ideal = [input[0], input[1], input[3], input[2]];
                let out = reg.logical_cnot(0, 1, &mut rng).unwrap();
                worst = worst.min(logical_fidelity(&out.logical_amplitudes().unwrap(), &ideal));
            }
        }
    }
    timed(Duration::from_secs(30), outcome(1.0 - worst <= FID_TOL, format!("min fidelity {worst:.15}")), start)
}

fn closed_forms() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [0.51, 0.6, 2.0 / 3.0, 0.75, 0.8] {
        for w in 1..=20u32 {
            let width = EncodingWidth::new(w);
            let add = WalkProblem::adding(p, width).unwrap();
            let ma = markov_exact(&add).unwrap();
            worst = worst.max((absorb_prob(&add).unwrap() - ma.absorb_prob_right).abs());
            worst = worst.max((mean_passage_closed(&add).unwrap() - ma.mean_steps_to_right.unwrap()).abs());
            let n_add = mean_encoder_uses(EncoderStage::Add, p, width).unwrap().unwrap();
            worst = worst.max((n_add - ma.mean_steps_to_right.unwrap()).abs());

            let re = WalkProblem::reencoding(p, width).unwrap();
            let mr = markov_exact(&re).unwrap();
            let n_re = mean_encoder_uses(EncoderStage::ReSuccess, p, width).unwrap().unwrap();
            worst = worst.max((n_re - mr.mean_steps_to_right.unwrap()).abs());
            if w > 1 {
                worst = worst.max((absorb_prob(&re).unwrap() - mr.absorb_prob_right).abs());
                worst = worst.max((mean_passage_closed(&re).unwrap() - mr.mean_steps_to_right.unwrap()).abs());
                let n_fail = mean_encoder_uses(EncoderStage::ReFail, p, width).unwrap().unwrap();
                worst = worst.max((n_fail - mr.mean_steps_to_left.unwrap()).abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("max |closed - oracle| {worst:.2e} over 100 (p, w) points"))
}

fn quoted_resources() -> Outcome {
    let cfg = GateConfig::new(3, 2, 1, 4, 0.95).unwrap();
    let u = expected_uses(&cfg).unwrap();
    // n_r = 2 re-encodes with a 2/3 teleporter
    let re = markov_exact(&WalkProblem::reencoding(2.0 / 3.0, EncodingWidth::new(4)).unwrap()).unwrap();
    let oracle_e_re = (1.0 / re.absorb_prob_right - 1.0) * re.mean_steps_to_left.unwrap() + re.mean_steps_to_right.unwrap();
    let ok = (u.t_g - 7.5).abs() <= 1e-9 && (u.e_add - 16.0).abs() <= 0.05 && (u.e_re - oracle_e_re).abs() <= 1e-9;
    outcome(
        ok,
        format!(
            "T_g {} ; E_add {:.4} ; E_re formula {:.9} vs oracle {:.9} (reference {} reported, not gated)",
            u.t_g,
            u.e_add,
            u.e_re,
            oracle_e_re,
            reference::E_RE
        ),
    )
}

fn monte_carlo_grid() -> Outcome {
    let start = Instant::now();
    let model = FactoryCostModel::default();
    let mut configs = 0;
    let mut gated = 0;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for na in [2, 3, 4] {
        for nr in [2, 3] {
            for nt in [1, 2] {
                for w in [2, 4, 6] {
                    let cfg = GateConfig::new(na, nr, nt, w, 0.95).unwrap();
                    let seed = 1000 + u64::from(na * 1000 + nr * 100 + nt * 10 + w);
                    let r = mc_report(&cfg, 100_000, seed, &model).unwrap();
                    configs += 1;
                    for row in r.rows.iter().filter(|r| r.gated) {
                        gated += 1;
                        let z = row.z.unwrap_or(f64::INFINITY).abs();
                        worst = worst.max(z);
                        if row.pass != Some(true) {
                            failures.push(format!("({na},{nr},{nt},{w}) {} z={z:.2}", row.quantity));
                        }
                    }
                }
            }
        }
    }
    let detail = format!("{configs} configs, {gated} gated rows, max |z| {worst:.2}, failures {failures:?}");
    timed(Duration::from_secs(60), outcome(failures.is_empty(), detail), start)
}

fn budget(na: u32, nr: u32, nt: u32, w: u32) -> f64 {
    gate_budget(&GateConfig::new(na, nr, nt, w, 0.99).unwrap()).unwrap().finite().unwrap()
}

fn scaling() -> Outcome {
    let strictly = |na: u32, nt: u32, increasing: bool| {
        (1..30).all(|w| {
            let (a, b) = (budget(na, na, nt, w), budget(na, na, nt, w + 1));
            if increasing { b > a } else { b < a }
        })
    };
    // gated with the half gate teleporter; with n_t = 2 the budget first
    // rises (w = 1..3), reported only
    let half = strictly(1, 1, false);
    let half_nt2 = strictly(1, 2, false);
    let higher = [2, 3, 4, 5].iter().all(|&n| strictly(n, 1, true));

    let (code, csv) = run_cli(&["figscale", "--ptot", "0.99"]);
    let mut lines = csv.lines();
    let header_ok = lines.next() == Some("n_a,n_r,n_t,w,gate_budget");
    let rows: Vec<(u32, u32, u32, u32, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect();
    let at = |na, w| rows.iter().find(|r| (r.0, r.1, r.2, r.3) == (na, 2, 1, w)).map(|r| r.4);
    let ordered = (1..=30).all(|w| matches!((at(2, w), at(3, w), at(4, w)), (Some(a), Some(b), Some(c)) if a < b && b < c));
    let csv_half = rows.iter().filter(|r| (r.0, r.1, r.2) == (1, 1, 1)).collect::<Vec<_>>().windows(2).all(|p| p[1].4 < p[0].4);
    let ok = half && higher && code == 0 && header_ok && ordered && csv_half;
    outcome(
        ok,
        format!("half encoder decreasing {half} (n_t = 2: {half_nt2}, not gated), orders 2..5 increasing {higher}, CSV header {header_ok}, CSV ordering {ordered}, CSV half rows decreasing {csv_half}"),
    )
}

fn min_width() -> Outcome {
    let t = |n| TeleporterSpec::new(n).unwrap();
    let w = solve_min_w(0.95, t(3), t(2), t(1)).unwrap().map(|w| w.get());
    let p = |w| p_gate_cnot(&GateConfig::new(3, 2, 1, w, 0.95).unwrap()).unwrap();
    let (p4, p5) = (p(4), p(5));
    let ok = w == Some(5) && p4 < 0.95 && 0.95 <= p5 && (p4 - 0.932).abs() < 5e-4 && (p5 - 0.976).abs() < 5e-4;
    outcome(ok, format!("min w {w:?}; p_gate_cnot(4) {p4:.4}, p_gate_cnot(5) {p5:.4}"))
}

fn klm() -> Outcome {
    let exact = f_z_klm_exact(&rat(1, 4)) == rat(7, 52);
    let b = klm_resource_bound();
    let bound = (b.elim, b.cs) == (1000, 2250);
    let suppress = (1..38).all(|k| {
        let levels = klm_concat(f64::from(k) / 100.0, 5);
        levels.windows(2).all(|p| p[1].f < p[0].f || p[0].f == 0.0)
    });
    outcome(exact && bound && suppress, format!("F_Z(1/4) = 7/52: {exact}; bound ({}, {}); suppression below 0.38: {suppress}", b.elim, b.cs))
}

fn factory() -> Outcome {
    let start = Instant::now();
    let rows = factory_grid(0.95, 2..=5, 1, &FactoryCostModel::default()).unwrap();
    let min = *factory_minimum(&rows).unwrap();
    let dev_b = min.bell_states / reference::FACTORY_BELL - 1.0;
    let dev_e = min.elim_states / reference::FACTORY_ELIM - 1.0;
    let ok = min.n_a <= 2 && min.n_r <= 2 && dev_b.abs() <= 0.5 && dev_e.abs() <= 0.5;
    let detail = format!(
        "minimum at n_a={}, n_r={}, w={}: Bell {:.1} ({:+.1}%), Elim {:.1} ({:+.1}%) vs reference ({}, {})",
        min.n_a,
        min.n_r,
        min.w,
        min.bell_states,
        100.0 * dev_b,
        min.elim_states,
        100.0 * dev_e,
        reference::FACTORY_BELL,
        reference::FACTORY_ELIM
    );
    timed(Duration::from_secs(10), outcome(ok, detail), start)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut mismatched = Vec::new();
    let commands = [
        ("figscale", "csv"),
        ("resources", "json"),
        ("resources", "csv"),
        ("factory", "csv"),
        ("factory", "json"),
        ("mc", "json"),
        ("mc", "csv"),
        ("verify", "json"),
        ("klm-compare", "json"),
        ("klm-compare", "csv"),
    ];
    for (cmd, fmt) in commands {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{cmd}-{fmt}-{run}.{fmt}"));
            let p = path.to_str().unwrap();
            let (code, _) = run_cli(&[cmd, "--seed", "7", "--trials", "20000", "--format", fmt, "--out", p]);
            let mut bytes = std::fs::read(&path).unwrap_or_default();
            if fmt == "csv" {
                bytes.extend(std::fs::read(format!("{p}.meta.json")).unwrap_or_default());
            }
            outputs.push((code, bytes));
        }
        if outputs[0] != outputs[1] || outputs[0].0 != 0 || outputs[0].1.is_empty() {
            mismatched.push(format!("{cmd}/{fmt}"));
        }
    }
    outcome(mismatched.is_empty(), format!("{} command/format pairs, mismatches {mismatched:?}", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("single-rail elimination state and 12/441", elimination_single),
        ("seven-term intermediate state", seven_term),
        ("dual-rail elimination state and 12/441", elimination_dual),
        ("t_n growth equals reference for n = 1..5", tn_growth),
        ("parity-code gate suite", parity_suite),
        ("closed forms match the Markov oracle", closed_forms),
        ("resource values at (3, 2, 1, 4)", quoted_resources),
        ("Monte Carlo grid within 4 sigma", monte_carlo_grid),
        ("gate-budget scaling and figscale ordering", scaling),
        ("minimum width for 0.95", min_width),
        ("concatenated-code comparison", klm),
        ("factory-state minimum", factory),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
