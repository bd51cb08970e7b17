//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines print in order and uncaptured.

use charsum::arith::{is_prime, pow_mod};
use charsum::construct::{build_chi_g, build_paley, build_psi};
use charsum::numeric::ln_upper;
use charsum::sums::{
    certify_short_sum, certify_pigeonhole, chain_error_term, chain_lower_bound, compute_m, compute_m_with, gauss_sum,
    pigeonhole_test_characters, random_coefficients, PolyaExpansion, ScanConfig,
};
use charsum::{CharacterValue, DirichletCharacter, Parity};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

/// Relative tolerance on `|τ(χ)| = √q`.
const GAUSS_RTOL: f64 = 1e-9;
/// Absolute tolerance on the pigeonhole slack, scaled by `1 + Σ|a_n|`.
const PIGEONHOLE_RTOL: f64 = 1e-9;
/// Modulus agreement between the scan and the brute-force maximizer.
const M_ABS_TOL: f64 = 1e-9;
const PIGEONHOLE_SEED: u64 = 0;
const PIGEONHOLE_TRIALS: usize = 100;

#[derive(Debug, Deserialize)]
struct PolyaGolden {
    #[serde(rename = "K")]
    k: f64,
    seed: u64,
    characters: usize,
    t_per_character: usize,
    q_max: u64,
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn polya_golden() -> PolyaGolden {
    let text = std::fs::read_to_string(golden_dir().join("polya.json")).expect("golden file present");
    serde_json::from_str(&text).expect("golden file parses")
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs as f64, || {
        format!("took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

fn gauss_modulus_all_primitive() -> Outcome {
    let start = Instant::now();
    let mut count = 0u64;
    let mut worst = 0.0f64;
    for q in 1..=500u64 {
        for chi in DirichletCharacter::all(q).unwrap() {
            if !chi.profile().is_primitive {
                continue;
            }
            let root = (q as f64).sqrt();
            let rel = (gauss_sum(&chi).unwrap().norm() - root).abs() / root;
            worst = worst.max(rel);
            ensure(rel <= GAUSS_RTOL, || format!("{chi}: relative deviation {rel:e}"))?;
            count += 1;
        }
    }
    within(start.elapsed(), 10)?;
    Ok(format!("{count} primitive characters, max relative deviation {worst:.2e}"))
}

fn pigeonhole_random_trials() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(PIGEONHOLE_SEED);
    let mut min_scaled = f64::INFINITY;
    for psi in pigeonhole_test_characters() {
        ensure(psi.profile().is_primitive, || format!("{psi} is not primitive"))?;
        for _ in 0..PIGEONHOLE_TRIALS {
            let coeffs = random_coefficients(&mut rng, 50);
            ensure(coeffs.terms().iter().all(|&(n, a)| n.abs() <= 50 && a.norm() <= 1.0), || {
                "coefficient out of range".into()
            })?;
            let c = certify_pigeonhole(&coeffs, &psi).map_err(|e| e.to_string())?;
            let bound = -PIGEONHOLE_RTOL * (1.0 + coeffs.l1_norm());
            ensure(c.slack >= bound && c.passed(), || format!("{psi}: slack {}", c.slack))?;
            min_scaled = min_scaled.min(c.slack / (1.0 + coeffs.l1_norm()));
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!(
        "{} certificates, min slack/(1+Σ|a|) = {min_scaled:.3e}",
        3 * PIGEONHOLE_TRIALS
    ))
}

/// Smallest prime `m ≡ g+1 (mod 2g)`, by trial division.
fn smallest_prime_in_class(g: u64) -> u64 {
    let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    (1..).map(|k| g + 1 + 2 * g * (k - 1)).find(|&m| trial(m)).unwrap()
}

fn odd_order_g_characters() -> Outcome {
    let mut ms = Vec::new();
    for g in [2u64, 4, 6, 8, 10] {
        let a = build_psi(g).map_err(|e| format!("g={g}: {e}"))?;
        let psi = &a.psi;
        let m = a.m;
        ensure(psi.order() == g, || format!("g={g}: order {}", psi.order()))?;
        ensure(psi.evaluate(-1) == CharacterValue::MINUS_ONE, || format!("g={g}: ψ(−1) ≠ −1"))?;
        ensure(is_prime(m) && psi.modulus() == m && psi.conductor() == m, || {
            format!("g={g}: conductor {} of modulus {m}", psi.conductor())
        })?;
        ensure(m % (2 * g) == g + 1, || format!("g={g}: m = {m} mod 2g"))?;
        ensure(((m - 1) / g) % 2 == 1, || format!("g={g}: (m−1)/g even"))?;
        // order exactly g: ψ^k ≠ 1 at the primitive root for 0 < k < g
        let alpha = a.alpha;
        ensure((1..g).all(|k| pow_mod(alpha, k * (m - 1) / g, m) != 1), || "α not generating".into())?;
        ensure(m == smallest_prime_in_class(g), || format!("g={g}: m = {m} is not the smallest"))?;
        ms.push((g, m));
    }
    ensure(ms[..3] == [(2, 3), (4, 5), (6, 7)], || format!("{ms:?}"))?;
    Ok(format!("(g, m) = {ms:?}"))
}

/// Euler's criterion for an odd prime `p`.
fn legendre(a: u64, p: u64) -> i8 {
    match pow_mod(a % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `Q` for `N = 7` by direct search: `Q ≡ −1 (mod 8)` and `Q ≡ Q_p (mod p)`
/// with `Q_p` the least residue whose Legendre symbol is `χ_{−4}(p)`.
fn paley_crt_oracle(n: u64) -> u64 {
    let primes: Vec<u64> = (3..=n).filter(|&p| (2..p).all(|d| p % d != 0)).collect();
    let targets: Vec<(u64, u64)> = primes
        .iter()
        .map(|&p| {
            let want = if p % 4 == 1 { 1 } else { -1 };
            (p, (1..p).find(|&x| legendre(x, p) == want).unwrap())
        })
        .collect();
    let bound: u64 = 8 * primes.iter().product::<u64>();
    (1..bound)
        .find(|&x| x % 8 == 7 && targets.iter().all(|&(p, r)| x % p == r))
        .unwrap()
}

fn paley_characters() -> Outcome {
    let start = Instant::now();
    let mut qs = Vec::new();
    for n in [3u64, 5, 7, 11, 13, 17, 19] {
        let a = build_paley(n).map_err(|e| format!("N={n}: {e}"))?;
        let chi = &a.chi;
        let p = chi.profile();
        ensure(p.order == 2 && p.parity == Parity::Odd && p.is_primitive, || {
            format!("N={n}: profile {p:?}")
        })?;
        let e = chi.evaluator();
        ensure((1..=n).all(|k| e.value_u64(k) == CharacterValue::ONE), || format!("N={n}: χ(k) ≠ 1"))?;
        ensure(ln_upper(a.q) <= 2.0 * n as f64, || format!("N={n}: ½ log q > N"))?;
        // χ is the Jacobi symbol mod q
        ensure(
            (1..=200i64).all(|k| charsum::arith::jacobi(k, a.q).ok() == chi.evaluate(k).as_sign()),
            || format!("N={n}: disagrees with the Jacobi symbol"),
        )?;
        qs.push((n, a.crt_solution));
    }
    let oracle = paley_crt_oracle(7);
    let q7 = qs.iter().find(|(n, _)| *n == 7).unwrap().1;
    ensure(q7 == 311 && oracle == 311, || format!("N=7: Q = {q7}, oracle {oracle}"))?;
    ensure(
        (1..=7).all(|k| legendre(k, 311) == 1),
        || "311 fails Euler's criterion".into(),
    )?;
    within(start.elapsed(), 5)?;
    Ok(format!("(N, Q) = {qs:?}"))
}

fn short_sum_bound() -> Outcome {
    let start = Instant::now();
    let mut built = 0;
    let mut skipped = Vec::new();
    let mut min_slack = f64::INFINITY;
    for g in [2u64, 4, 6] {
        for n in [3u64, 5, 7, 11, 13] {
            let art = match build_chi_g(g, n) {
                Ok(a) => a,
                Err(e) => {
                    skipped.push(format!("({g},{n}): {}", e.category()));
                    continue;
                }
            };
            let c = certify_short_sum(&art).map_err(|e| e.to_string())?;
            ensure(c.passed(), || format!("(g,N)=({g},{n}): slack {}", c.slack))?;
            min_slack = min_slack.min(c.slack);
            built += 1;
        }
    }
    within(start.elapsed(), 10)?;
    ensure(built > 0, || "nothing buildable".into())?;
    Ok(format!(
        "{built} artifacts pass, min slack {min_slack:.4}{}",
        if skipped.is_empty() {
            String::new()
        } else {
            format!(", unbuildable: {}", skipped.join(" "))
        }
    ))
}

/// Plain left-to-right prefix sums of pointwise values; the smallest `t`
/// attaining the maximum within `M_ABS_TOL`.
fn brute_force_m(chi: &DirichletCharacter) -> (f64, u64) {
    let e = chi.evaluator();
    let q = chi.modulus();
    let mut s = Complex64::new(0.0, 0.0);
    let mut sums = Vec::with_capacity(q as usize);
    for t in 1..=q {
        s += e.value_u64(t).to_complex();
        sums.push(s.norm());
    }
    let max = sums.iter().cloned().fold(0.0, f64::max);
    let t = sums.iter().position(|&v| v >= max - M_ABS_TOL).unwrap() as u64 + 1;
    (max, t)
}

fn partial_sum_oracle() -> Outcome {
    let start = Instant::now();
    let mut count = 0u64;
    for q in 1..=500u64 {
        for chi in DirichletCharacter::all(q).unwrap() {
            if chi.is_principal() {
                continue;
            }
            let p = compute_m(&chi).map_err(|e| e.to_string())?;
            let (m, t) = brute_force_m(&chi);
            ensure((p.m_value - m).abs() <= M_ABS_TOL && p.argmax_t == t, || {
                format!("{chi}: scan ({}, {}) vs brute force ({m}, {t})", p.m_value, p.argmax_t)
            })?;
            count += 1;
        }
    }
    within(start.elapsed(), 60)?;
    Ok(format!("{count} nonprincipal characters agree"))
}

fn run_cli(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_charsum"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn headline_table() -> Outcome {
    let start = Instant::now();
    let ns = [7u64, 11, 13, 17, 19];
    let (code, csv) = run_cli(&["scan", "--g", "2", "--N", "7,11,13,17,19", "--seed", "0"])?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let csv = String::from_utf8(csv).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    ensure(lines.next() == Some(charsum::cli::CSV_HEADER), || "header mismatch".into())?;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    ensure(rows.len() == ns.len(), || format!("{} rows", rows.len()))?;
    let k = polya_golden().k;
    let mut report = Vec::new();
    for (row, &n) in rows.iter().zip(&ns) {
        ensure(row[1] == n.to_string() && row[11] == "ok", || format!("row {row:?}"))?;
        let ratio: f64 = row[8].parse().map_err(|_| format!("ratio {:?}", row[8]))?;
        ensure(ratio > 0.0, || format!("N={n}: ratio {ratio}"))?;
        let art = build_chi_g(2, n).map_err(|e| e.to_string())?;
        ensure(row[4] == art.q_g.to_string(), || format!("N={n}: q_g mismatch"))?;
        let d = chain_error_term(k, art.q_g);
        let bound = chain_lower_bound(&art, d);
        ensure(ratio >= bound, || format!("N={n}: ratio {ratio} < chain bound {bound}"))?;
        report.push(format!("N={n}: {ratio:.4} ≥ {bound:.4}"));
    }
    within(start.elapsed(), 300)?;
    Ok(report.join("; "))
}

/// The sample of even primitive characters for the residual bound: moduli
/// drawn uniformly from `[3, q_max]`, a uniformly random character of each,
/// kept when even and primitive.
fn polya_sample(g: &PolyaGolden) -> Vec<(DirichletCharacter, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut out = Vec::new();
    while out.len() < g.characters {
        let q = rng.gen_range(3..=g.q_max);
        let phi = charsum::arith::factorize(q as u128).unwrap().phi();
        let k = rng.gen_range(0..phi) as usize;
        let chi = DirichletCharacter::all(q).unwrap().nth(k).unwrap();
        if chi.parity() != Parity::Even || !chi.profile().is_primitive || chi.is_principal() {
            continue;
        }
        let ts = (0..g.t_per_character).map(|_| rng.gen_range(1..q)).collect();
        out.push((chi, ts));
    }
    out
}

fn polya_ratios(g: &PolyaGolden) -> Vec<(String, u64, f64)> {
    polya_sample(g)
        .into_iter()
        .flat_map(|(chi, ts)| {
            let q = chi.modulus();
            let p = PolyaExpansion::new(&chi, q).unwrap();
            let log_q = (q as f64).ln();
            ts.into_iter()
                .map(|t| (chi.to_string(), t, p.residual(t) / log_q))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn polya_residual_bound() -> Outcome {
    let start = Instant::now();
    let g = polya_golden();
    let ratios = polya_ratios(&g);
    ensure(ratios.len() == g.characters * g.t_per_character, || "sample size".into())?;
    let worst = ratios.iter().cloned().fold(("".to_string(), 0, 0.0), |a, b| if b.2 > a.2 { b } else { a });
    ensure(worst.2 <= g.k, || format!("{} at t={}: {} > K = {}", worst.0, worst.1, worst.2, g.k))?;
    within(start.elapsed(), 120)?;
    Ok(format!("max residual/log q = {:.4} ≤ K = {} ({} at t={})", worst.2, g.k, worst.0, worst.1))
}

fn performance_and_parallel() -> Outcome {
    let art = build_chi_g(2, 19).map_err(|e| e.to_string())?;
    let chi = &art.chi_g;
    ensure(chi.order() == 2, || "not quadratic".into())?;
    let start = Instant::now();
    let seq = compute_m(chi).map_err(|e| e.to_string())?;
    let t_seq = start.elapsed();
    within(t_seq, 60)?;
    let par = compute_m_with(
        chi,
        &ScanConfig {
            parallel: true,
            ..ScanConfig::default()
        },
    )
    .map_err(|e| e.to_string())?;
    ensure(seq.m_value.to_bits() == par.m_value.to_bits() && seq.argmax_t == par.argmax_t, || {
        format!("sequential ({}, {}) vs parallel ({}, {})", seq.m_value, seq.argmax_t, par.m_value, par.argmax_t)
    })?;
    Ok(format!(
        "q = {}: M = {} at t = {} in {:.1}s sequential, parallel bit-identical",
        chi.modulus(),
        seq.m_value,
        seq.argmax_t,
        t_seq.as_secs_f64()
    ))
}

fn scan_determinism() -> Outcome {
    let args = ["scan", "--g", "2", "--N", "7,11", "--seed", "0"];
    let (c1, a) = run_cli(&args)?;
    let (c2, b) = run_cli(&args)?;
    ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1}, {c2}"))?;
    ensure(!a.is_empty() && a == b, || "outputs differ".into())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&p1, &p2] {
        let (c, _) = run_cli(&[&args[..], &["--out", p.to_str().unwrap()]].concat())?;
        ensure(c == 0, || format!("exit code {c}"))?;
    }
    let (f1, f2) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    ensure(f1 == f2 && f1 == a, || "file outputs differ".into())?;
    Ok(format!("{} bytes identical across runs", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("gauss sum modulus for every primitive character, q ≤ 500", gauss_modulus_all_primitive),
        ("pigeonhole bound on random coefficients", pigeonhole_random_trials),
        ("odd order-g characters of prime conductor", odd_order_g_characters),
        ("odd quadratic characters equal to 1 up to N", paley_characters),
        ("short-sum harmonic lower bound", short_sum_bound),
        ("partial-sum maximum against brute force, q ≤ 500", partial_sum_oracle),
        ("headline ratio table and chain bound", headline_table),
        ("expansion residual bounded by K log q", polya_residual_bound),
        ("partial-sum scan at q ≈ 10^7, parallel bit-identical", performance_and_parallel),
        ("scan output is byte-identical across runs", scan_determinism),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {id:>2} {name} [{secs:.1}s]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id:>2} {name} [{secs:.1}s]: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
