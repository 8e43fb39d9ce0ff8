//! Command-line front end: `render`, `presets`, and `tune-sweep`.
//!
//! Exit statuses: 0 on success, 2 for flag or config errors, 3 when
//! `--function` does not parse, 4 for I/O failures.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use holedstar_core::funcexpr::builtin_presets;
use holedstar_core::raster::{
    encode_image, extract_contours, colorize, render_field, CellKind, ConfigError, ImageFormat,
    OutputMode, RenderConfig, RenderSettings,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FUNCTION: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "holedstar",
    version,
    about = "Render local invariant sets of holomorphic germs with equipotential models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render one image.
    Render {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Output file; `.png` selects PNG, anything else PPM.
        #[arg(long, default_value = "out.ppm")]
        out: PathBuf,
    },
    /// List the builtin germs.
    Presets,
    /// Render a sweep over comma-separated `--hole-radius` or `--branches`
    /// values into numbered files.
    TuneSweep {
        #[command(flatten)]
        flags: ConfigFlags,
        /// File name template; `sweep.ppm` becomes `sweep_01.ppm`, `sweep_02.ppm`, ...
        #[arg(long, default_value = "sweep.ppm")]
        out: PathBuf,
    },
}

/// Render parameters. Unset flags fall back to the config file, then to
/// the preset's suggestion, then to the default shown.
#[derive(Debug, Args)]
struct ConfigFlags {
    /// Key-value config file; flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Map f(z), e.g. "e^(2*pi*i*(3/7))*z + z^2". [default: z]
    #[arg(long, conflicts_with = "preset", allow_hyphen_values = true)]
    function: Option<String>,
    /// Builtin germ (see `holedstar presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Partial quotients of θ for θ-parametrised presets. [default: 3,10,20000]
    #[arg(long, value_name = "A1,A2,...")]
    theta_terms: Option<String>,
    /// Fixed point the models are centred on. [default: preset's, else 0,0]
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    anchor: Option<String>,
    /// equipotential-star, equipotential-circles, equipotential-grid,
    /// escape-time or approximation. [default: equipotential-star]
    #[arg(long)]
    method: Option<String>,
    /// Number of star branches. [default: 12]
    #[arg(long, allow_negative_numbers = true)]
    branches: Option<String>,
    /// Radius of the star's hole; 0 for an empty hole. [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    hole_radius: Option<String>,
    /// Ring width of the concentric-circles model. [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    ring_width: Option<String>,
    /// horizontal or vertical lines for the grid model. [default: horizontal]
    #[arg(long)]
    grid_orientation: Option<String>,
    /// Line spacing of the grid model. [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    grid_spacing: Option<String>,
    /// Plane rectangle. [default: preset's, else -2,2,2,-2]
    #[arg(long, value_name = "LEFT,RIGHT,TOP,BOTTOM", allow_hyphen_values = true)]
    viewport: Option<String>,
    /// Raster size in pixels. [default: 400x400]
    #[arg(long, value_name = "WxH")]
    size: Option<String>,
    /// Iteration count (equipotential) or cap (classical). [default: preset's, else 50]
    #[arg(long, allow_negative_numbers = true)]
    iters: Option<String>,
    /// Trapping-disc radius for escape-time. [default: 2.0]
    #[arg(long, allow_negative_numbers = true)]
    escape_radius: Option<String>,
    /// Successive-distance threshold for approximation. [default: 0.00001]
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<String>,
    /// mono-contour, indexed, random, rgb-cube or ordered-shades. [default: mono-contour]
    #[arg(long)]
    palette: Option<String>,
    /// Seed of the random palette. [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    seed: Option<String>,
    /// contour or filled. [default: contour]
    #[arg(long)]
    output: Option<String>,
    /// ppm or png. [default: from the --out extension]
    #[arg(long)]
    format: Option<String>,
}

impl ConfigFlags {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("function", &self.function),
            ("preset", &self.preset),
            ("theta_terms", &self.theta_terms),
            ("anchor", &self.anchor),
            ("method", &self.method),
            ("branches", &self.branches),
            ("hole_radius", &self.hole_radius),
            ("ring_width", &self.ring_width),
            ("grid_orientation", &self.grid_orientation),
            ("grid_spacing", &self.grid_spacing),
            ("viewport", &self.viewport),
            ("size", &self.size),
            ("iters", &self.iters),
            ("escape_radius", &self.escape_radius),
            ("epsilon", &self.epsilon),
            ("palette", &self.palette),
            ("seed", &self.seed),
            ("output", &self.output),
            ("format", &self.format),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

fn flag_name(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

fn config_failure(err: ConfigError, from_file: Option<&Path>) -> Failure {
    let code = match err {
        ConfigError::Function(_) => EXIT_FUNCTION,
        _ => EXIT_USAGE,
    };
    let message = match (&err, from_file) {
        (ConfigError::Syntax { .. }, Some(path)) => format!("{}: {err}", path.display()),
        (_, _) => match err.field() {
            Some(field) => format!("{}: {err}", flag_name(field)),
            None => err.to_string(),
        },
    };
    Failure { code, message }
}

/// Settings from the config file (if any) with flags layered on top.
/// `skip` names keys handled by the caller.
fn collect_settings(flags: &ConfigFlags, skip: &[&str]) -> Result<RenderSettings, Failure> {
    let mut settings = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::io(format!("--config {}: {e}", path.display())))?;
            RenderSettings::from_text(&text).map_err(|e| config_failure(e, Some(path)))?
        }
        None => RenderSettings::default(),
    };
    let mut overrides = RenderSettings::default();
    for (key, value) in flags.pairs() {
        if skip.contains(&key) {
            continue;
        }
        overrides
            .set(key, value)
            .map_err(|e| config_failure(e, None))?;
    }
    settings.merge(&overrides);
    Ok(settings)
}

fn output_format(settings: &RenderSettings, out: &Path) -> ImageFormat {
    settings.format.unwrap_or_else(|| ImageFormat::from_path(out))
}

struct RenderSummary {
    contour_pixels: usize,
    hole_pixels: usize,
    outside_pixels: usize,
    millis: u128,
}

fn render_to_file(
    config: &RenderConfig,
    format: ImageFormat,
    out: &Path,
) -> Result<RenderSummary, Failure> {
    let start = Instant::now();
    let field = render_field(config);
    let contours = extract_contours(&field);
    let image = match config.output {
        OutputMode::Contour => colorize(&field, &config.palette, Some(&contours)),
        OutputMode::Filled => colorize(&field, &config.palette, None),
    };
    let bytes = encode_image(&image, format).map_err(|e| Failure::io(e.to_string()))?;
    std::fs::write(out, bytes).map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
    let count = |kind| field.cells().iter().filter(|c| c.kind == kind).count();
    Ok(RenderSummary {
        contour_pixels: contours.len(),
        hole_pixels: count(CellKind::Hole),
        outside_pixels: count(CellKind::Outside),
        millis: start.elapsed().as_millis(),
    })
}

fn describe(settings: &RenderSettings) -> String {
    match (&settings.preset, &settings.function) {
        (Some(p), _) => format!("preset {p}"),
        (None, Some(f)) => format!("f(z) = {f}"),
        (None, None) => "f(z) = z".to_string(),
    }
}

fn print_summary(
    stdout: &mut dyn Write,
    what: &str,
    config: &RenderConfig,
    summary: &RenderSummary,
    out: &Path,
) {
    let vp = config.viewport;
    let _ = writeln!(
        stdout,
        "{what}: {} {}x{} iters={} -> {} ({} contour, {} hole, {} outside pixels; {} ms)",
        config.method.kind(),
        vp.width(),
        vp.height(),
        config.budget.max_iters(),
        out.display(),
        summary.contour_pixels,
        summary.hole_pixels,
        summary.outside_pixels,
        summary.millis,
    );
}

fn cmd_render(flags: &ConfigFlags, out: &Path, stdout: &mut dyn Write) -> Result<(), Failure> {
    let settings = collect_settings(flags, &[])?;
    let config = settings.resolve().map_err(|e| config_failure(e, None))?;
    let summary = render_to_file(&config, output_format(&settings, out), out)?;
    print_summary(stdout, &describe(&settings), &config, &summary, out);
    Ok(())
}

fn cmd_presets(stdout: &mut dyn Write) -> Result<(), Failure> {
    for p in builtin_presets() {
        let d = &p.defaults;
        let _ = writeln!(
            stdout,
            "{:<14} {}\n{:<14} fixed point {}, {} k={} hole={} iters={} viewport={:?}\n{:<14} {}\n",
            p.name,
            p.source,
            "",
            p.fixed_point,
            d.method,
            d.branches,
            d.hole_radius,
            d.iters,
            d.viewport,
            "",
            p.notes
        );
    }
    Ok(())
}

fn numbered(template: &Path, index: usize) -> PathBuf {
    let stem = template
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    let name = match template.extension() {
        Some(ext) => format!("{stem}_{index:02}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{index:02}"),
    };
    template.with_file_name(name)
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty()).collect()
}

fn cmd_sweep(flags: &ConfigFlags, out: &Path, stdout: &mut dyn Write) -> Result<(), Failure> {
    let radii = flags.hole_radius.as_deref().map(split_list).unwrap_or_default();
    let branches = flags.branches.as_deref().map(split_list).unwrap_or_default();
    let (key, values) = match (radii.len() > 1, branches.len() > 1) {
        (true, true) => {
            return Err(Failure::usage(
                "--hole-radius and --branches cannot both be swept at once",
            ))
        }
        (true, false) => ("hole_radius", radii),
        (false, true) => ("branches", branches),
        (false, false) => {
            return Err(Failure::usage(
                "tune-sweep needs a comma-separated list in --hole-radius or --branches",
            ))
        }
    };
    let base = collect_settings(flags, &[key])?;
    // resolve everything up front so a bad value fails before any file is written
    let mut configs = Vec::with_capacity(values.len());
    for value in &values {
        let mut settings = base.clone();
        settings
            .set(key, value)
            .map_err(|e| config_failure(e, None))?;
        let config = settings.resolve().map_err(|e| config_failure(e, None))?;
        configs.push((value.to_string(), settings, config));
    }
    for (i, (value, settings, config)) in configs.iter().enumerate() {
        let path = numbered(out, i + 1);
        let summary = render_to_file(config, output_format(settings, &path), &path)?;
        let what = format!("{} {}={value}", describe(settings), flag_name(key));
        print_summary(stdout, &what, config, &summary, &path);
    }
    Ok(())
}

/// Run with full argv (program name first) and return the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
            } else {
                let _ = write!(stdout, "{rendered}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Render { flags, out } => cmd_render(flags, out, stdout),
        Command::Presets => cmd_presets(stdout),
        Command::TuneSweep { flags, out } => cmd_sweep(flags, out, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbered_names() {
        assert_eq!(numbered(Path::new("a/sweep.ppm"), 3), PathBuf::from("a/sweep_03.ppm"));
        assert_eq!(numbered(Path::new("radius"), 12), PathBuf::from("radius_12"));
    }

    #[test]
    fn flag_names() {
        assert_eq!(flag_name("hole_radius"), "--hole-radius");
        assert_eq!(flag_name("iters"), "--iters");
    }

    #[test]
    fn lists() {
        assert_eq!(split_list("0.20, 0.15,0.10,"), vec!["0.20", "0.15", "0.10"]);
    }
}
