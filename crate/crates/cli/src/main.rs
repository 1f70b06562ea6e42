//! Command-line interface: rendering, symmetry reports and verification
//! with reproducible seeds.
//!
//! Exit codes: 0 = verified/success, 1 = refuted/failed check,
//! 2 = inconclusive, 3 = input error.

mod config;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use juliasym::dynamics::{
    derive_escape_radius, ergodic_potential, ergodic_potential_difference, escape_rate,
    escape_time_raster, sample_julia, PointCloud, Window,
};
use juliasym::mcmullen::{
    classify_mcmullen_symmetries, escape_radius as mcmullen_escape_radius, render_parameter_plane,
    Overlay,
};
use juliasym::parse::{parse_isometry, parse_map, MapKind, MapSpec};
use juliasym::sphere::SpherePoint;
use juliasym::symmetry::{
    check_commutation, classify_symmetry_group, commutation_scan, infer_conjugating_isometry,
    shared_julia_criterion, ClassifyConfig, SymmetryReport,
};
use juliasym::tolerances::{DEFAULT_BURN_IN, DEFAULT_HAUSDORFF_TOL, DEFAULT_MAX_ORDER, DEFAULT_SAMPLES};
use juliasym::{Error, Isometry};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "juliasym",
    version,
    about = "Julia-set symmetry analysis and rendering for rational maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Ppm,
    Png,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Ppm => "ppm",
            Format::Png => "png",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct WindowArg {
    cx: f64,
    cy: f64,
    w: f64,
}

fn parse_window_arg(s: &str) -> Result<WindowArg, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected cx,cy,w".into());
    }
    let nums: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|e| e.to_string())?;
    Ok(WindowArg {
        cx: nums[0],
        cy: nums[1],
        w: nums[2],
    })
}

#[derive(Clone, Copy, Debug)]
struct ResArg {
    w: usize,
    h: usize,
}

fn parse_res_arg(s: &str) -> Result<ResArg, String> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return Err("expected WxH".into());
    }
    let w = parts[0].trim().parse::<usize>().map_err(|e| e.to_string())?;
    let h = parts[1].trim().parse::<usize>().map_err(|e| e.to_string())?;
    Ok(ResArg { w, h })
}

#[derive(Subcommand)]
enum Command {
    /// Render the Julia set of a map as an escape-time image.
    RenderJulia(RenderJuliaArgs),
    /// Render the parameter plane of the family z^m + lambda/z^d.
    RenderParam(RenderParamArgs),
    /// Classify the symmetry group of a map's Julia set.
    Symmetries(SymmetriesArgs),
    /// Verify a commutation identity or a shared-Julia-set certificate.
    Verify(VerifyArgs),
    /// Check the invariance and consistency of the map's potentials.
    PotentialCheck(PotentialArgs),
}

#[derive(Args)]
struct RenderJuliaArgs {
    /// Map expression, e.g. "mcmullen(2,2,1)" or "(z^4+1)/(z^2)".
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    /// Window center and width: cx,cy,w.
    #[arg(long, default_value = "0,0,4", value_parser = parse_window_arg)]
    window: WindowArg,
    /// Image resolution WxH.
    #[arg(long, default_value = "800x800", value_parser = parse_res_arg)]
    res: ResArg,
    #[arg(long, default_value_t = 256)]
    iters: usize,
    /// Explicit escape radius; required when none can be derived.
    #[arg(long)]
    escape_radius: Option<f64>,
    #[arg(long, default_value = "julia.ppm")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    format: Format,
}

#[derive(Args)]
struct RenderParamArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    d: u32,
    #[arg(long, default_value = "0,0,4", value_parser = parse_window_arg)]
    window: WindowArg,
    #[arg(long, default_value = "800x800", value_parser = parse_res_arg)]
    res: ResArg,
    #[arg(long, default_value_t = 512)]
    iters: usize,
    #[arg(long, default_value = "param.ppm")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Ppm)]
    format: Format,
}

#[derive(Args)]
struct SymmetriesArgs {
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_HAUSDORFF_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// JSON report path; the text report always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// The algebraic certificates assume the map is not a Lattes
    /// example; pass false to mark the run inconclusive instead.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    assume_non_exceptional: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    /// Isometry expression, e.g. "i*z"; verifies R sigma = sigma^k R.
    #[arg(long, conflicts_with = "map2", allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Exponent k; scanned automatically when omitted.
    #[arg(long)]
    k: Option<usize>,
    /// Second map; verifies the shared-Julia-set certificate.
    #[arg(long, allow_hyphen_values = true)]
    map2: Option<String>,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long, allow_hyphen_values = true)]
    map: String,
    /// Isometry whose potential invariance is tested.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of evaluation points per statistic.
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not input errors.
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return 0;
            }
            let _ = e.print();
            return 3;
        }
    };
    let outcome = match cli.command {
        Command::RenderJulia(args) => cmd_render_julia(args),
        Command::RenderParam(args) => cmd_render_param(args),
        Command::Symmetries(args) => cmd_symmetries(args),
        Command::Verify(args) => cmd_verify(args),
        Command::PotentialCheck(args) => cmd_potential_check(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::InconclusiveClassification { reason, report }) => {
            eprintln!("inconclusive: {reason}");
            print!("{}", report.to_text());
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn sidecar_path(image_path: &Path) -> PathBuf {
    image_path.with_extension("json")
}

#[derive(serde::Serialize)]
struct RenderSidecar {
    config: RunConfig,
    map_degree: usize,
    escape_radius: f64,
    overlay: Option<Overlay>,
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Error> {
    let mut f = std::fs::File::create(path)?;
    let text = serde_json::to_string_pretty(value).expect("serializable");
    f.write_all(text.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

fn write_image(
    path: &Path,
    format: Format,
    width: usize,
    height: usize,
    rgb: &[u8],
) -> Result<(), Error> {
    match format {
        Format::Json => Ok(()),
        Format::Ppm => {
            let f = std::fs::File::create(path)?;
            juliasym::ppm::write_ppm(std::io::BufWriter::new(f), width, height, rgb)
        }
        Format::Png => {
            let path = path.with_extension("png");
            render::save_png(&path, width, height, rgb).map_err(Error::Io)
        }
    }
}

/// Escape radius for a parsed map: the family's closed form when the
/// input is a mcmullen(...) call, an explicit override, or the general
/// coefficient bound.
fn resolve_escape_radius(spec: &MapSpec, explicit: Option<f64>) -> Result<f64, Error> {
    if let Some(r) = explicit {
        if r <= 1.0 || !r.is_finite() {
            return Err(Error::InvalidWindow(format!("escape radius {r}")));
        }
        return Ok(r);
    }
    if let MapKind::McMullen(params) = &spec.kind {
        return Ok(mcmullen_escape_radius(params));
    }
    derive_escape_radius(&spec.map).ok_or(Error::MissingEscapeRadius)
}

fn cmd_render_julia(args: RenderJuliaArgs) -> Result<i32, Error> {
    let spec = parse_map(&args.map)?;
    spec.map.require_degree(1)?;
    let radius = resolve_escape_radius(&spec, args.escape_radius)?;
    let window = Window {
        center_re: args.window.cx,
        center_im: args.window.cy,
        width: args.window.w,
        height: args.window.w * args.res.h as f64 / args.res.w as f64,
    };
    let raster = escape_time_raster(&spec.map, window, (args.res.w, args.res.h), args.iters, radius)?;
    let rgb = render::julia_rgb(&raster, spec.map.degree());
    write_image(&args.out, args.format, args.res.w, args.res.h, &rgb)?;

    let mut config = RunConfig::new("render-julia");
    config.map = Some(spec.source.clone());
    config.window = [args.window.cx, args.window.cy, args.window.w];
    config.res = [args.res.w, args.res.h];
    config.iters = args.iters;
    config.escape_radius = Some(radius);
    config.out = Some(args.out.display().to_string());
    config.format = args.format.name().to_string();
    write_json(
        &sidecar_path(&args.out),
        &RenderSidecar {
            config,
            map_degree: spec.map.degree(),
            escape_radius: radius,
            overlay: None,
        },
    )?;
    Ok(0)
}

fn cmd_render_param(args: RenderParamArgs) -> Result<i32, Error> {
    let window = Window {
        center_re: args.window.cx,
        center_im: args.window.cy,
        width: args.window.w,
        height: args.window.w * args.res.h as f64 / args.res.w as f64,
    };
    let (raster, overlay) =
        render_parameter_plane(args.m, args.d, window, (args.res.w, args.res.h), args.iters)?;
    let rgb = render::param_rgb(&raster, &overlay);
    write_image(&args.out, args.format, args.res.w, args.res.h, &rgb)?;

    let mut config = RunConfig::new("render-param");
    config.m = Some(args.m);
    config.d = Some(args.d);
    config.window = [args.window.cx, args.window.cy, args.window.w];
    config.res = [args.res.w, args.res.h];
    config.iters = args.iters;
    config.out = Some(args.out.display().to_string());
    config.format = args.format.name().to_string();
    write_json(
        &sidecar_path(&args.out),
        &RenderSidecar {
            config,
            map_degree: (args.m + args.d) as usize,
            escape_radius: 0.0,
            overlay: Some(overlay),
        },
    )?;
    Ok(0)
}

fn finish_symmetries(
    args: &SymmetriesArgs,
    mut report: SymmetryReport,
    inconclusive: Option<String>,
) -> Result<i32, Error> {
    if !args.assume_non_exceptional {
        report.notes.push(
            "non-exceptionality not assumed: algebraic certificates are \
             conditional on the map not being a Lattes example"
                .to_string(),
        );
    }
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    print!("{}", report.to_text());
    if let Some(reason) = inconclusive {
        eprintln!("inconclusive: {reason}");
        return Ok(2);
    }
    if !args.assume_non_exceptional {
        return Ok(2);
    }
    Ok(0)
}

fn cmd_symmetries(args: SymmetriesArgs) -> Result<i32, Error> {
    let spec = parse_map(&args.map)?;
    spec.map.require_degree(2)?;
    let cloud = sample_julia(&spec.map, args.samples, DEFAULT_BURN_IN, args.seed)?;
    let result = classify_symmetry_group(
        &spec.map,
        &ClassifyConfig {
            max_order: args.max_order,
            cloud: &cloud,
            tol: args.tol,
        },
    );
    match result {
        Ok(mut report) => {
            annotate_mcmullen(&spec, &mut report);
            finish_symmetries(&args, report, None)
        }
        Err(Error::InconclusiveClassification { reason, report }) => {
            let mut report = *report;
            annotate_mcmullen(&spec, &mut report);
            finish_symmetries(&args, report, Some(reason))
        }
        Err(e) => Err(e),
    }
}

fn annotate_mcmullen(spec: &MapSpec, report: &mut SymmetryReport) {
    if let MapKind::McMullen(params) = &spec.kind {
        let exact = classify_mcmullen_symmetries(params);
        report
            .notes
            .push(format!("closed-form family classification: {exact}"));
        if params.m == params.d
            && (params.lambda.norm() - 1.0).abs() < juliasym::tolerances::MCMULLEN_NEAR_BOUNDARY
            && (params.lambda.norm() - 1.0).abs() > juliasym::tolerances::MCMULLEN_BOUNDARY_TOL
        {
            report.notes.push(
                "parameter is near |lambda| = 1; numeric Julia verification \
                 may be ambiguous this close to the regime boundary"
                    .to_string(),
            );
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let spec = parse_map(&args.map)?;
    spec.map.require_degree(2)?;

    if let Some(sigma_src) = &args.sigma {
        let sigma = parse_isometry(sigma_src)?;
        if let Some(k) = args.k {
            let (ok, residual) = check_commutation(&spec.map, &sigma, k);
            println!(
                "commutation R sigma = sigma^{k} R: residual {residual:.3e} -> {}",
                if ok { "VERIFIED" } else { "REFUTED" }
            );
            return Ok(if ok { 0 } else { 1 });
        }
        return match commutation_scan(&spec.map, &sigma, DEFAULT_MAX_ORDER) {
            Some((k, residual)) => {
                println!(
                    "commutation R sigma = sigma^{k} R: residual {residual:.3e} -> VERIFIED"
                );
                Ok(0)
            }
            None => {
                println!("no exponent k verifies R sigma = sigma^k R -> REFUTED");
                Ok(1)
            }
        };
    }

    if let Some(map2_src) = &args.map2 {
        let spec2 = parse_map(map2_src)?;
        spec2.map.require_degree(2)?;
        let mut candidates = vec![Isometry::identity()];
        if let Some(inferred) = infer_conjugating_isometry(&spec.map, &spec2.map) {
            candidates.push(inferred);
        }
        return match shared_julia_criterion(&spec.map, &spec2.map, &candidates) {
            Some(sigma) => {
                let sr = spec2.map.compose(&spec.map);
                let rs = spec.map.compose(&spec2.map);
                let residual = juliasym::RationalMap::from(&sigma)
                    .compose(&rs)
                    .residual(&sr);
                println!(
                    "shared Julia set certified: S R = sigma R S with sigma = {sigma}, \
                     residual {residual:.3e}"
                );
                Ok(0)
            }
            None => {
                println!("no candidate isometry satisfies S R = sigma R S: inconclusive");
                Ok(2)
            }
        };
    }

    Err(Error::Parse {
        position: 0,
        message: "verify needs either --sigma or --map2".into(),
    })
}

fn cmd_potential_check(args: PotentialArgs) -> Result<i32, Error> {
    let spec = parse_map(&args.map)?;
    spec.map.require_degree(2)?;
    let cloud = sample_julia(&spec.map, args.samples, DEFAULT_BURN_IN, args.seed)?;
    let insufficient = args.samples < 1000;
    let mut lines: Vec<String> = Vec::new();
    let mut all_pass = true;

    // Potential consistency: u + G - log||p|| is constant on the sphere.
    let lift = spec.map.lift();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x9e37_79b9);
    let points = sample_test_points(&mut rng, args.points, &cloud);
    let mut values = Vec::with_capacity(points.len());
    for p in &points {
        let u = ergodic_potential(p, &cloud)?;
        let g = escape_rate(&lift, p.homogeneous(), 40);
        values.push(u.value + g);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64).sqrt();
    let consistency_pass = std <= 0.05;
    all_pass &= consistency_pass;
    lines.push(format!(
        "potential consistency: std of (u + G - log||p||) over {} points = {:.4} \
         (bound 0.05) -> {}",
        points.len(),
        std,
        if consistency_pass { "PASS" } else { "FAIL" }
    ));

    // Invariance of the ergodic potential under sigma.
    if let Some(sigma_src) = &args.sigma {
        let sigma = parse_isometry(sigma_src)?;
        let test_points = sample_test_points(&mut rng, 20, &cloud);
        let mut failures = 0usize;
        let mut worst = 0.0_f64;
        for p in &test_points {
            let diff = ergodic_potential_difference(p, &sigma.apply(p), &cloud)?;
            let band = 3.0 * diff.stderr + 1e-12;
            if diff.value.abs() > band {
                failures += 1;
            }
            if diff.stderr > 0.0 {
                worst = worst.max(diff.value.abs() / diff.stderr);
            }
        }
        let invariance_pass = failures == 0;
        all_pass &= invariance_pass;
        lines.push(format!(
            "ergodic-potential invariance under {sigma}: {} of {} points within \
             3 stderr (worst {:.2} stderr) -> {}",
            test_points.len() - failures,
            test_points.len(),
            worst,
            if invariance_pass { "PASS" } else { "FAIL" }
        ));
    }

    if insufficient {
        lines.push(format!(
            "warning: insufficient samples ({}); statistics are unreliable below 1000",
            args.samples
        ));
    }
    for line in &lines {
        println!("{line}");
    }
    if let Some(path) = &args.out {
        #[derive(serde::Serialize)]
        struct PotentialReport<'a> {
            map: &'a str,
            samples: usize,
            seed: u64,
            lines: &'a [String],
            pass: bool,
            insufficient_samples: bool,
        }
        write_json(
            path,
            &PotentialReport {
                map: &spec.source,
                samples: args.samples,
                seed: args.seed,
                lines: &lines,
                pass: all_pass,
                insufficient_samples: insufficient,
            },
        )?;
    }
    if insufficient {
        return Ok(2);
    }
    Ok(if all_pass { 0 } else { 1 })
}

// Deterministic evaluation points away from the sampled Julia set, so
// the potential has no log pole at any of them.
fn sample_test_points(rng: &mut ChaCha8Rng, count: usize, cloud: &PointCloud) -> Vec<SpherePoint> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let p = SpherePoint::from_affine(z);
        let clear = cloud
            .points
            .iter()
            .take(2000)
            .all(|w| juliasym::chordal_distance(&p, w) > 1e-6);
        if clear {
            out.push(p);
        }
    }
    out
}
