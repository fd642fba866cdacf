use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use misfact::arith::degree_budget;
use misfact::render::{render_with, Image, PlotSpec};
use misfact::roots::{points_of_order, to_csv, MIN_PRECISION};
use misfact::{Exec, FactorEngine, Family, FamilyIndex};

use crate::cli::{CountArgs, CountFormat, FactorArgs, PlotArgs, PolyArgs, RootsArgs, VerifyArgs};

pub const CACHE_ENV: &str = "MISFACT_CACHE_DIR";

#[derive(Debug)]
pub enum Failure {
    /// bad flag values; exit code 2
    Usage(String),
    /// a reassembly did not match; exit code 1
    Verify(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Failure::Usage(msg.into()))
}

pub struct Session {
    pub engine: FactorEngine,
    pub exec: Exec,
    pub cap: u32,
}

pub fn engine(cap: u32) -> FactorEngine {
    let engine = FactorEngine::new(Family::new(cap));
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => engine.with_cache_dir(PathBuf::from(dir)),
        _ => engine,
    }
}

fn check_order(flag: &str, order: u32, cap: u32) -> Result<()> {
    if order > cap {
        return usage(format!("{flag}: order {order} exceeds the cap {cap} (raise it with --cap)"));
    }
    Ok(())
}

fn check_precision(bits: u32) -> Result<()> {
    if bits < MIN_PRECISION {
        return usage(format!("--precision must be at least {MIN_PRECISION}"));
    }
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing to stdout")?;
            stdout.flush().context("writing to stdout")?;
        }
    }
    Ok(())
}

pub fn poly(ctx: &Session, args: &PolyArgs) -> Result<()> {
    let ell = args.ell.unwrap_or(0);
    if args.ell.is_some() && args.n == 0 {
        return usage("--n must be at least 1");
    }
    check_order("--n", ell + args.n, ctx.cap)?;
    let family = ctx.engine.family();
    let p = match args.ell {
        None => (*family.orbit_poly(args.n).map_err(anyhow::Error::from)?).clone(),
        Some(ell) => {
            let idx = FamilyIndex::new(ell, args.n).map_err(anyhow::Error::from)?;
            family.mt_poly(idx).map_err(anyhow::Error::from)?
        }
    };
    emit(args.out.as_deref(), &p.to_text())
}

pub fn factor(ctx: &Session, args: &FactorArgs) -> Result<()> {
    if args.n == 0 {
        return usage("--n must be at least 1");
    }
    check_order("--n", args.ell + args.n, ctx.cap)?;
    let idx = FamilyIndex::new(args.ell, args.n).map_err(anyhow::Error::from)?;
    let table = ctx.engine.factorize(idx).map_err(anyhow::Error::from)?;
    let dir = &args.out_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut report = String::new();
    for (k, (h, exp)) in &table.hyp_factors {
        let path = dir.join(format!("h_{k}.poly"));
        fs::write(&path, h.to_text()).with_context(|| format!("writing {}", path.display()))?;
        report.push_str(&format!("h k={k} exp={exp} deg={} file={}\n", h.degree(), path.display()));
    }
    for ((j, k), m) in &table.mis_factors {
        let path = dir.join(format!("m_{j}_{k}.poly"));
        fs::write(&path, m.to_text()).with_context(|| format!("writing {}", path.display()))?;
        report.push_str(&format!("m l={j} k={k} deg={} file={}\n", m.degree(), path.display()));
    }
    if args.verify {
        let ok = ctx.engine.verify(&table).map_err(anyhow::Error::from)?;
        report.push_str(if ok { "verify=ok\n" } else { "verify=failed\n" });
        emit(None, &report)?;
        if !ok {
            return Err(Failure::Verify(format!("q_{{{},{}}} does not reassemble", args.ell, args.n)));
        }
        return Ok(());
    }
    emit(None, &report)
}

pub fn count(_ctx: &Session, args: &CountArgs) -> Result<()> {
    if args.n == 0 {
        return usage("--n must be at least 1");
    }
    let record = degree_budget(args.ell, args.n).map_err(anyhow::Error::from)?;
    let text = match args.format {
        CountFormat::Text => record.to_string(),
        CountFormat::Kv => record.to_kv(),
    };
    emit(None, &text)
}

pub fn roots(ctx: &Session, args: &RootsArgs) -> Result<()> {
    if args.max_order == 0 {
        return usage("--max-order must be at least 1");
    }
    check_order("--max-order", args.max_order, ctx.cap)?;
    check_precision(args.precision)?;
    let points = points_of_order(&ctx.engine, args.max_order, args.precision, ctx.exec).map_err(anyhow::Error::from)?;
    let mismatched = points.iter().filter(|p| p.mismatch()).count();
    if mismatched > 0 {
        eprintln!("warning: orbit classification disagrees with the source factor for {mismatched} points");
    }
    emit(args.out.as_deref(), &to_csv(&points))
}

pub fn verify(ctx: &Session, args: &VerifyArgs) -> Result<()> {
    if args.max_order == 0 {
        return usage("--max-order must be at least 1");
    }
    check_order("--max-order", args.max_order, ctx.cap)?;
    let results = ctx.engine.verify_sweep(args.max_order, ctx.exec);
    let mut failed = 0usize;
    for (idx, r) in &results {
        match r {
            Ok(true) => {}
            Ok(false) => {
                failed += 1;
                println!("FAIL {idx}: product of factors differs from q");
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {idx}: {e}");
            }
        }
    }
    println!("checked {} indices up to order {}: {} failed", results.len(), args.max_order, failed);
    if failed > 0 {
        return Err(Failure::Verify(format!("{failed} indices failed")));
    }
    Ok(())
}

pub fn plot(ctx: &Session, args: &PlotArgs) -> Result<()> {
    if args.max_iter == 0 {
        return usage("--max-iter must be at least 1");
    }
    if !(args.width.is_finite() && args.width > 0.0) {
        return usage("--width must be positive");
    }
    check_order("--max-order", args.max_order, ctx.cap)?;
    check_precision(args.precision)?;
    let png = args.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if png && !cfg!(feature = "png") {
        return usage("--out: PNG output needs the `png` feature");
    }
    let mut spec = PlotSpec::new(args.center, args.width, args.pixels, args.max_iter);
    spec.point_radius = args.point_radius;
    if args.max_order > 0 {
        spec.overlay = points_of_order(&ctx.engine, args.max_order, args.precision, ctx.exec).map_err(anyhow::Error::from)?;
    }
    let img = render_with(&spec, ctx.exec).map_err(anyhow::Error::from)?;
    if png {
        write_png(&img, &args.out)?;
    } else {
        img.write_ppm(&args.out).map_err(anyhow::Error::from).with_context(|| format!("writing {}", args.out.display()))?;
    }
    Ok(())
}

#[cfg(feature = "png")]
fn write_png(img: &Image, path: &Path) -> Result<()> {
    let buf = image::RgbImage::from_raw(img.width, img.height, img.rgb.clone()).expect("buffer size matches dimensions");
    buf.save_with_format(path, image::ImageFormat::Png).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(not(feature = "png"))]
fn write_png(_img: &Image, _path: &Path) -> Result<()> {
    unreachable!("rejected during argument checks")
}
