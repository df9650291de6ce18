//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/support/tables.rs"]
mod tables;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hyperpure_core::efficiency::{p_one, p_two, ratio_r, sweep, EfficiencyParams, SweepAxis};
use hyperpure_core::optics::{hadamard_pol, hadamard_spatial};
use hyperpure_core::oracle::check_case;
use hyperpure_core::protocol::{
    closed_form_fidelity_general, closed_form_fidelity_pair, closed_form_success_pair, run_bitflip,
    run_general, run_phaseflip,
};
use hyperpure_core::scenario::{
    bitflip_pair, deterministic_pair, general_mixture, phaseflip_pair, standard_cases,
};
use hyperpure_core::state::{make_ghz_pol, make_ghz_spatial, Sign};
use hyperpure_core::CorrectionPlan;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn closed_form_grid(phase: bool) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &fa in &GRID {
        for &fb in &GRID {
            let r = if phase {
                run_phaseflip(&phaseflip_pair(3, fa, fb).unwrap())
            } else {
                run_bitflip(&bitflip_pair(3, fa, fb).unwrap())
            }
            .map_err(|e| e.to_string())?;
            let f = closed_form_fidelity_pair(fa, fb).unwrap();
            let p = closed_form_success_pair(fa, fb);
            worst = worst
                .max((r.output_fidelity.unwrap_or(f64::NAN) - f).abs())
                .max((r.success_probability - p).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-12 && secs < 1.0,
        format!("81 grid points, worst deviation {worst:.2e} (tol 1e-12), {secs:.3} s (limit 1 s)"),
    )
}

fn criterion_1() -> Outcome {
    closed_form_grid(false)
}

fn criterion_2() -> Outcome {
    closed_form_grid(true)
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    let mut minority = 0.0f64;
    for &fa in &GRID {
        for &fb in &GRID {
            let (input, plan) = deterministic_pair(3, fa, fb).unwrap();
            let r = run_general(&input, &plan).map_err(|e| e.to_string())?;
            worst = worst
                .max((r.output_fidelity.unwrap_or(f64::NAN) - 1.0).abs())
                .max((r.success_probability - 1.0).abs());
            let naive = run_general(&input, &CorrectionPlan::minority_flip(3).unwrap()).unwrap();
            minority = minority.max((naive.output_fidelity.unwrap() - fa).abs());
        }
    }
    println!("    info: minority-group flips instead leave fidelity = F_pol (max |F - F_pol| = {minority:.1e})");
    check(
        worst < 1e-12,
        format!("81 (F_pol, F_spatial) pairs with syndrome-decoded corrections, worst |F-1|,|p-1| = {worst:.2e}"),
    )
}

fn random_weights(rng: &mut StdRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_2024);
    let pol: Vec<_> = (0..4)
        .map(|i| make_ghz_pol(3, i, Sign::Plus).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = random_weights(&mut rng);
        let b = random_weights(&mut rng);
        let r = run_bitflip(&general_mixture(3, &a, &b).unwrap()).map_err(|e| e.to_string())?;
        let expect = closed_form_fidelity_general(&a, &b).unwrap();
        for (state, f) in pol.iter().zip(&expect) {
            let sim = r.fidelity_against(state).unwrap().unwrap();
            worst = worst.max((sim - f).abs());
        }
    }
    let mut gain_checked = 0;
    let mut gain_failed = 0;
    for _ in 0..200 {
        let f1 = rng.random_range(0.5..1.0);
        let f5 = rng.random_range(0.5..1.0);
        let split = |rng: &mut StdRng, f: f64| {
            let t: Vec<f64> = (0..3).map(|_| rng.random_range(0.01..1.0)).collect();
            let s: f64 = t.iter().sum();
            let mut w = vec![f];
            w.extend(t.iter().map(|x| (1.0 - f) * x / s));
            w
        };
        let a = split(&mut rng, f1);
        let b = split(&mut rng, f5);
        let r = run_bitflip(&general_mixture(3, &a, &b).unwrap()).unwrap();
        let f = r.fidelity_against(&pol[0]).unwrap().unwrap();
        gain_checked += 1;
        if f.is_nan() || f <= f1.max(f5) {
            gain_failed += 1;
        }
    }
    check(
        worst < 1e-12 && gain_failed == 0,
        format!(
            "20 random weight pairs, worst |F'_i - closed form| = {worst:.2e}; gain F'_1 > max(F_1, F_5) held in {}/{gain_checked}",
            gain_checked - gain_failed
        ),
    )
}

fn criterion_5() -> Outcome {
    let fs: Vec<f64> = (2..=5)
        .map(|m| {
            run_bitflip(&bitflip_pair(m, 0.8, 0.7).unwrap())
                .unwrap()
                .output_fidelity
                .unwrap()
        })
        .collect();
    let spread = fs.iter().fold(0.0f64, |acc, f| acc.max((f - fs[0]).abs()));
    check(
        spread < 1e-12,
        format!(
            "F' for m = 2..5 at (0.8, 0.7): {:.15} (spread {spread:.2e})",
            fs[0]
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut modes = std::collections::BTreeSet::new();
    for m in 2..=4 {
        for case in standard_cases(m).unwrap() {
            let dev = check_case(&case).map_err(|e| e.to_string())?;
            if dev.is_nan() || dev >= 1e-10 {
                return Err(format!("{} {}: deviation {dev:e}", case.mode, case.label));
            }
            worst = worst.max(dev);
            modes.insert(case.mode);
            cases += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-10 && secs < 60.0 && modes.len() == 4,
        format!(
            "{cases} cases over modes {modes:?}, m = 2..4, worst deviation {worst:.2e} (tol 1e-10), {secs:.2} s (limit 60 s)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let params = |n, l| EfficiencyParams::new(n, l);
    let r = ratio_r(&params(6, 100.0)).unwrap();
    let derived = 271225718675.93146;
    let mut ok = r > 1e10 && ((r - derived) / derived).abs() < 1e-12;

    let mut rows = Vec::new();
    for n in [3, 6] {
        let s = sweep(&params(n, 0.0), SweepAxis::Distance, 20.0, 100.0, 1.0).unwrap();
        ok &= s.windows(2).all(|w| w[1].r > w[0].r);
        rows.push(s);
    }
    ok &= rows[1]
        .iter()
        .zip(&rows[0])
        .all(|(six, three)| six.r > three.r);
    let by_n = sweep(&params(2, 25.0), SweepAxis::Photons, 2.0, 12.0, 1.0).unwrap();
    ok &= by_n.windows(2).all(|w| w[1].r > w[0].r);

    let mut identity = 0.0f64;
    let points = rows[0]
        .iter()
        .map(|row| (3, row.axis_value))
        .chain(rows[1].iter().map(|row| (6, row.axis_value)))
        .chain(by_n.iter().map(|row| (row.axis_value as u32, 25.0)));
    for (n, l) in points {
        let p = EfficiencyParams {
            p1: 0.62,
            ..params(n, l)
        };
        let one = p_one(&p).unwrap();
        identity = identity.max(((ratio_r(&p).unwrap() * p_two(&p).unwrap() - one) / one).abs());
    }
    ok &= identity < 1e-12;
    check(
        ok,
        format!(
            "R(N=6, L=100 km) = {r:.6e} > 1e10; R increasing in L (N=3, 6) and N (L=25 km); max rel |R p_two - p_one|/p_one = {identity:.1e}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut worst = 0.0f64;
    let mut signed = Vec::new();
    for i in 0..4 {
        for sign in [Sign::Plus, Sign::Minus] {
            let plus = sign == Sign::Plus;
            let j = tables::IMAGE_INDEX[i];
            let pairs = [
                (
                    "Phi",
                    hadamard_pol(&make_ghz_pol(3, i, sign).unwrap()).unwrap(),
                    tables::printed_pol(j, plus),
                ),
                (
                    "phi",
                    hadamard_spatial(&make_ghz_spatial(3, i, sign).unwrap()).unwrap(),
                    tables::printed_spatial(j, plus),
                ),
            ];
            for (name, image, printed) in pairs {
                let direct = tables::term_deviation(&image, &printed, 1.0);
                let flipped = tables::term_deviation(&image, &printed, -1.0);
                if flipped < direct {
                    signed.push(format!("{name}_{i}{}", if plus { "+" } else { "-" }));
                }
                worst = worst.max(direct.min(flipped));
            }
        }
    }
    check(
        worst < 1e-12,
        format!(
            "16 images match the printed tables term by term, worst {worst:.1e}; index map 0,1,2,3 -> 0,3,2,1; global phase -1 on {}",
            signed.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_hyperpure");
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/bitflip.toml");
    let dir = std::env::temp_dir().join(format!("hyperpure-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("run{i}.json"));
        let status = Command::new(exe)
            .arg("simulate")
            .arg(&config)
            .arg("--reproducible")
            .arg("--out")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("simulate exited with {status}"));
        }
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let identical = outputs[0] == outputs[1];
    let verify = |fault: bool| {
        let mut cmd = Command::new(exe);
        cmd.args(["verify", "--m", "3"]);
        if fault {
            cmd.arg("--inject-fault");
        }
        cmd.output()
            .map(|o| o.status.code())
            .map_err(|e| e.to_string())
    };
    let clean = verify(false)?;
    let faulty = verify(true)?;
    check(
        identical && clean == Some(0) && faulty == Some(1),
        format!(
            "reproducible runs byte-identical: {identical}; verify --m 3 exit {clean:?}; with corrupted gate row exit {faulty:?}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("closed-form equivalence, bit-flip", criterion_1),
        ("closed-form equivalence, phase-flip", criterion_2),
        ("deterministic mixed-error case", criterion_3),
        ("general four-term purification", criterion_4),
        ("photon-count independence", criterion_5),
        ("oracle equivalence", criterion_6),
        ("efficiency figures", criterion_7),
        ("Hadamard state tables", criterion_8),
        ("CLI determinism and mutation check", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
