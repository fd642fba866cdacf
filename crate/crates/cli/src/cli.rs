use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use misfact::family::DEFAULT_CAP;
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "misfact", version, about = "Misiurewicz-Thurston polynomials: construction, factorization, roots and plots")]
pub struct Cli {
    /// Largest order ell+n (and orbit index) that may be constructed
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: u32,

    /// Worker threads; 0 uses every logical core, 1 runs sequentially
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print p_n, or q_{ell,n} = p_{ell+n} - p_ell when --ell is given
    Poly(PolyArgs),
    /// Factor q_{ell,n} into Gleason and Misiurewicz factors
    Factor(FactorArgs),
    /// Predicted factor counts and the degree budget of q_{ell,n}
    Count(CountArgs),
    /// Roots of all factors up to an order, as CSV
    Roots(RootsArgs),
    /// Factor and reassemble every q_{ell,n} up to an order
    Verify(VerifyArgs),
    /// Render the Mandelbrot set with the roots drawn on top
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub ell: Option<u32>,
    /// Write here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub n: u32,
    /// Also reassemble the product and compare with q_{ell,n}
    #[arg(long)]
    pub verify: bool,
    /// Directory for the factor files
    #[arg(long, default_value = "factors")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountFormat {
    Text,
    Kv,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = CountFormat::Text)]
    pub format: CountFormat,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long)]
    pub max_order: u32,
    /// Working precision in bits
    #[arg(long, default_value_t = 128)]
    pub precision: u32,
    /// Write here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub max_order: u32,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// `re,im` or `re`
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, default_value = "-0.75,0")]
    pub center: Complex64,
    /// Span of the real axis
    #[arg(long, default_value_t = 3.0)]
    pub width: f64,
    /// `WIDTHxHEIGHT`
    #[arg(long, value_parser = parse_pixels, default_value = "800x600")]
    pub pixels: (u32, u32),
    #[arg(long, default_value_t = 256)]
    pub max_iter: u32,
    /// Overlay the points of this order; 0 draws none
    #[arg(long, default_value_t = 0)]
    pub max_order: u32,
    #[arg(long, default_value_t = 128)]
    pub precision: u32,
    /// Overlay disk radius in pixels
    #[arg(long, default_value_t = 2)]
    pub point_radius: u32,
    /// `.ppm`, or `.png` when built with PNG support
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "0"),
    };
    let re: f64 = re.parse().map_err(|_| format!("bad real part `{re}`"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part `{im}`"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err("center must be finite".into());
    }
    Ok(Complex64::new(re, im))
}

fn parse_pixels(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let w: u32 = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let h: u32 = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    if w == 0 || h == 0 {
        return Err("pixel dimensions must be positive".into());
    }
    Ok((w, h))
}
