//! Acceptance criteria 1-10. Runs as a plain binary (no libtest harness) and
//! prints one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use misfact::arith::{degree_budget, hyp_count, mis_count};
use misfact::roots::{find_roots_with, points_of_order, FamilyTarget};
use misfact::{orbit_classify, Degree, Exec, FactorEngine, FamilyIndex, IntPoly, Kind};
use rug::{Complex, Float, Integer};

/// Criterion 1 must finish within this.
const VERIFY_BUDGET: Duration = Duration::from_secs(300);
/// Criterion 7: residual bound, disk radius slack and oracle distance.
const RESIDUAL_LOG2: i32 = -64;
const DISK_SLACK_LOG2: i32 = -20;
const ORACLE_TOL: f64 = 1e-9;
/// Real root of z^3 + 2z^2 + z + 1, by 200 bisection steps on [-2, -1.7] in
/// 40-digit arithmetic.
const H3_REAL_ROOT: f64 = -1.754_877_666_246_692_7;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn deg(p: &IntPoly) -> Integer {
    match p.degree() {
        Degree::Finite(d) => Integer::from(d),
        Degree::NegInfinity => Integer::from(-1),
    }
}

fn misfact_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_misfact"))
        .args(args)
        .env_remove("MISFACT_CACHE_DIR")
        .output()
        .expect("misfact binary runs")
}

fn reassembly() -> Outcome {
    let t0 = Instant::now();
    let o = misfact_bin(&["verify", "--max-order", "16"]);
    let elapsed = t0.elapsed();
    let out = String::from_utf8_lossy(&o.stdout);
    let expected = FamilyIndex::up_to_order(16).len();
    check(o.status.code() == Some(0), || format!("verify exited with {:?}: {}", o.status.code(), out.trim()))?;
    check(out.contains(&format!("checked {expected} indices up to order 16: 0 failed")), || out.trim().to_string())?;
    check(elapsed < VERIFY_BUDGET, || format!("took {elapsed:?}, budget {VERIFY_BUDGET:?}"))?;
    Ok(format!("{expected} indices reassembled exactly in {:.1}s", elapsed.as_secs_f64()))
}

fn worked_example(e: &FactorEngine) -> Outcome {
    let t = e.factorize(FamilyIndex::new(2, 4).unwrap()).map_err(|x| x.to_string())?;
    let exps: Vec<(u32, u32)> = t.hyp_factors.iter().map(|(k, (_, x))| (*k, *x)).collect();
    check(exps == [(1, 3), (2, 2), (4, 2)], || format!("hyperbolic exponents {exps:?}"))?;
    let mis: Vec<((u32, u32), Integer)> = t.mis_factors.iter().map(|(k, m)| (*k, deg(m))).collect();
    let want = [((2, 1), Integer::from(1)), ((2, 2), Integer::from(2)), ((2, 4), Integer::from(12))];
    check(mis == want, || format!("Misiurewicz factors {mis:?}"))?;
    let s = e.family().simple_part(FamilyIndex::new(2, 4).unwrap()).map_err(|x| x.to_string())?;
    let p4 = e.family().orbit_poly(4).map_err(|x| x.to_string())?;
    check(s == &p4.square() + &IntPoly::from_i64s(&[0, 2]), || "s_{2,4} != p_4^2 + 2z".into())?;
    let o = misfact_bin(&["factor", "--ell", "2", "--n", "4", "--verify", "--out-dir", std::env::temp_dir().join("misfact-acceptance").to_str().unwrap()]);
    check(o.status.code() == Some(0), || "factor --verify failed".into())?;
    Ok("h_1^3 h_2^2 h_4^2 m_{2,1} m_{2,2} m_{2,4}, degrees 1,2,12; s_{2,4} = p_4^2 + 2z".into())
}

fn counting(e: &FactorEngine) -> Outcome {
    for n in 1..=10 {
        let h = e.gleason(n).map_err(|x| x.to_string())?;
        check(deg(&h) == hyp_count(n), || format!("deg h_{n} = {} but hyp_count = {}", deg(&h), hyp_count(n)))?;
    }
    let mut checked = 0;
    for i in FamilyIndex::up_to_order(12).into_iter().filter(|i| i.ell >= 2) {
        let m = e.misiurewicz_factor(i.ell, i.n).map_err(|x| x.to_string())?;
        check(deg(&m) == mis_count(i.ell, i.n), || format!("deg m{i} = {} but mis_count = {}", deg(&m), mis_count(i.ell, i.n)))?;
        checked += 1;
    }
    Ok(format!("hyp_count for n <= 10 and mis_count for {checked} indices match factor degrees"))
}

fn degree_identity() -> Outcome {
    for ell in 0..=12 {
        for n in 1..=12 {
            let r = degree_budget(ell, n).map_err(|x| x.to_string())?;
            check(r.degree_budget == Integer::from(1) << (ell + n - 1), || format!("({ell}, {n})"))?;
        }
    }
    Ok("budget = 2^(ell+n-1) for 0 <= ell <= 12, 1 <= n <= 12".into())
}

fn congruences(e: &FactorEngine) -> Outcome {
    let fam = e.family();
    for n in 0..=16u32 {
        let base = fam.orbit_poly(n).map_err(|x| x.to_string())?.truncate(n as usize + 1);
        for k in 1..=16 - n {
            let p = fam.orbit_poly(n + k).map_err(|x| x.to_string())?;
            check(p.truncate(n as usize + 1) == base, || format!("p_{} vs p_{n}", n + k))?;
        }
    }
    let mut count = 0;
    for i in FamilyIndex::up_to_order(16).into_iter().filter(|i| i.ell >= 1) {
        let q = fam.mt_poly(i).map_err(|x| x.to_string())?;
        let want = IntPoly::monomial(Integer::from(1) << (i.ell - 1), i.ell as usize + 1);
        check(q.truncate(i.ell as usize + 2) == want, || format!("q{i} low terms"))?;
        count += 1;
    }
    Ok(format!("stabilization up to p_16 and leading jets of {count} q_(ell,n)"))
}

fn squarefreeness(e: &FactorEngine) -> Outcome {
    let fam = e.family();
    for n in 1..=14 {
        check(fam.orbit_poly(n).map_err(|x| x.to_string())?.is_squarefree(), || format!("p_{n}"))?;
        check(e.gleason(n).map_err(|x| x.to_string())?.is_squarefree(), || format!("h_{n}"))?;
    }
    for i in FamilyIndex::up_to_order(14).into_iter().filter(|i| i.ell >= 1) {
        check(fam.simple_part(i).map_err(|x| x.to_string())?.is_squarefree(), || format!("s{i}"))?;
        check(!fam.mt_poly(i).map_err(|x| x.to_string())?.is_squarefree(), || format!("q{i} reported squarefree"))?;
        if i.ell >= 2 {
            check(e.misiurewicz_factor(i.ell, i.n).map_err(|x| x.to_string())?.is_squarefree(), || format!("m{i}"))?;
        }
    }
    Ok("p_n, h_n, s, m squarefree and q not, through order 14".into())
}

fn bisect_h3() -> f64 {
    let f = |x: f64| ((x + 2.0) * x + 1.0) * x + 1.0;
    let (mut a, mut b) = (-2.0f64, -1.7f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f(a) * f(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn root_solver(e: &FactorEngine) -> Outcome {
    let residual_bound = Float::with_val(64, 1) >> (-RESIDUAL_LOG2) as u32;
    let disk = Float::with_val(64, 2) + (Float::with_val(64, 1) >> (-DISK_SLACK_LOG2) as u32);
    let mut total = 0;
    let mut h3_real = None;
    for n in 1..=12 {
        let h = e.gleason(n).map_err(|x| x.to_string())?;
        let target = FamilyTarget::gleason(n, h.clone());
        let roots = find_roots_with(&target, 128, Exec::Parallel).map_err(|x| x.to_string())?;
        check(roots.len() == deg(&h), || format!("h_{n}: {} roots for degree {}", roots.len(), deg(&h)))?;
        for w in roots.windows(2) {
            check(w[0].value != w[1].value, || format!("h_{n}: repeated root"))?;
        }
        for r in &roots {
            check(r.residual < residual_bound, || format!("h_{n}: residual 2^{:.1}", r.residual_log2()))?;
            check(Float::with_val(64, r.value.abs_ref()) <= disk, || format!("h_{n}: root outside the disk"))?;
        }
        if n == 3 {
            h3_real = roots.iter().find(|r| r.value.imag().is_zero()).map(|r| r.value.real().to_f64());
        }
        total += roots.len();
    }
    let got = h3_real.ok_or("h_3 has no real root")?;
    let bisect = bisect_h3();
    check((bisect - H3_REAL_ROOT).abs() < 1e-15, || format!("bisection gives {bisect}"))?;
    check((got - H3_REAL_ROOT).abs() < ORACLE_TOL, || format!("h_3 real root {got}"))?;
    Ok(format!("{total} roots of h_1..h_12, residuals < 2^{RESIDUAL_LOG2}, h_3 real root {got:.10}"))
}

fn classification(e: &FactorEngine) -> Outcome {
    let pts = points_of_order(e, 10, 128, Exec::Parallel).map_err(|x| x.to_string())?;
    let bad: Vec<String> = pts
        .iter()
        .filter(|p| p.mismatch() || p.classified.is_none())
        .map(|p| format!("{} vs {:?}", p.kind, p.classified))
        .collect();
    check(bad.is_empty(), || format!("{} mismatches, first {}", bad.len(), bad[0]))?;
    Ok(format!("{} points of order <= 10 agree", pts.len()))
}

fn known_points() -> Outcome {
    let tol = misfact::roots::default_tolerance(128);
    let cases = [
        ((0, 0), Kind::Hyperbolic { period: 1 }),
        ((-1, 0), Kind::Hyperbolic { period: 2 }),
        ((-2, 0), Kind::Misiurewicz { preperiod: 2, period: 1 }),
        ((0, 1), Kind::Misiurewicz { preperiod: 2, period: 2 }),
        ((0, -1), Kind::Misiurewicz { preperiod: 2, period: 2 }),
    ];
    for (c, want) in cases {
        let got = orbit_classify(&Complex::with_val(128, c), 16, 16, &tol);
        check(got == want, || format!("{c:?}: {got}"))?;
    }
    Ok("0, -1, -2, i, -i".into())
}

fn determinism() -> Outcome {
    let roots = ["roots", "--max-order", "8", "--precision", "128"];
    let (a, b) = (misfact_bin(&roots), misfact_bin(&roots));
    check(a.status.success() && !a.stdout.is_empty(), || "roots failed".into())?;
    check(a.stdout == b.stdout, || "roots CSV differs between runs".into())?;
    let dir = std::env::temp_dir().join(format!("misfact-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|x| x.to_string())?;
    let mut sizes = Vec::new();
    for ext in ["ppm", "png"] {
        let mut images = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("plot{run}.{ext}"));
            let o = misfact_bin(&[
                "plot", "--center", "-0.75,0", "--width", "3", "--pixels", "320x240", "--max-iter", "200", "--max-order", "6",
                "--out", out.to_str().unwrap(),
            ]);
            check(o.status.success(), || format!("plot .{ext}: {}", String::from_utf8_lossy(&o.stderr)))?;
            images.push(std::fs::read(&out).map_err(|x| x.to_string())?);
        }
        check(images[0] == images[1], || format!(".{ext} images differ"))?;
        sizes.push(images[0].len());
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("CSV of {} bytes and images ({} / {} bytes) identical across runs", a.stdout.len(), sizes[0], sizes[1]))
}

fn main() -> ExitCode {
    let engine = FactorEngine::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("reassembly of q_(ell,n), ell+n <= 16", Box::new(reassembly)),
        ("worked factorization of q_(2,4)", Box::new(|| worked_example(&engine))),
        ("counting formulas vs factor degrees", Box::new(|| counting(&engine))),
        ("degree identity", Box::new(degree_identity)),
        ("trailing-coefficient congruences", Box::new(|| congruences(&engine))),
        ("squarefreeness", Box::new(|| squarefreeness(&engine))),
        ("root solver on h_n, n <= 12", Box::new(|| root_solver(&engine))),
        ("classification cross-check, order <= 10", Box::new(|| classification(&engine))),
        ("known points", Box::new(known_points)),
        ("determinism of roots and plot", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let result = run();
        let secs = t0.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
