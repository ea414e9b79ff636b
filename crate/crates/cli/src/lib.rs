//! Command-line harness over `atspp-core`: instance generation, LP and
//! dual certificates, exact optima, the merge pipeline and ratio reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use atspp_core::closure::check_connectivity;
use atspp_core::exact::{exact_atsp_capped, exact_atspp_capped, DEFAULT_EXACT_CAP};
use atspp_core::instances::{
    gen_bem, gen_bem_raw, gen_fig1, gen_fig4, gen_random, nw_to_unweighted, split_vertex, RandomSpec, SplitStyle,
};
use atspp_core::merge::path_from_tour_pipeline;
use atspp_core::rational::{self, int, Rational};
use atspp_core::relaxation::{min_gap_dual, solve_relaxation};
use atspp_core::{Error, Instance};

#[derive(Debug, Parser)]
#[command(name = "atspp", about = "Held-Karp relaxation laboratory for ATSP and ATSP paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance as JSON.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Solve the relaxation and print its value and cut family.
    Lp { file: PathBuf },
    /// Print an optimal dual certificate.
    Dual {
        file: PathBuf,
        /// Minimise a_s - a_t over optimal duals.
        #[arg(long)]
        min_gap: bool,
    },
    /// Exact optimum by dynamic programming.
    Opt {
        file: PathBuf,
        /// Ignore the vertex cap of the exact solver.
        #[arg(long)]
        force: bool,
    },
    /// Tour-splitting and merging pipeline.
    Merge {
        file: PathBuf,
        #[arg(long, default_value = "3")]
        d: String,
    },
    /// Per-instance report: LP, OPT, ratio, potential gap, merge audit.
    Ratio {
        file: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Batch report over an instance family written as CSV.
    Report {
        #[arg(long, value_enum)]
        family: Family,
        /// Range `a..b` (inclusive) of family parameters.
        #[arg(long)]
        k: String,
        #[arg(long)]
        csv: PathBuf,
        /// Write "-" instead of wall times so the file is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Fig1,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenFamily {
    Fig1 {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    Fig4 {
        #[command(flatten)]
        output: Output,
    },
    Bem {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        i: usize,
        /// Skip the terminal identification.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        output: Output,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        node_weighted: bool,
        /// Closed-tour instance instead of an s-t instance.
        #[arg(long)]
        atsp: bool,
        #[command(flatten)]
        output: Output,
    },
    Split {
        file: PathBuf,
        /// Vertex id to split.
        #[arg(long)]
        v: String,
        #[arg(long, value_enum, default_value = "out-in")]
        style: Style,
        #[command(flatten)]
        output: Output,
    },
    Nw2uw {
        file: PathBuf,
        #[arg(long, default_value = "1/2")]
        eps: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Style {
    OutIn,
    Duplicate,
}

/// One row of a ratio report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub lp: Rational,
    pub opt: Option<Rational>,
    pub ratio: Option<Rational>,
    pub delta_star: Option<Rational>,
    /// `None` when the pipeline was skipped for size.
    pub merge_ok: Option<bool>,
    pub ms: u128,
}

impl RatioReport {
    pub const CSV_HEADER: &'static str = "name,n,m,lp,opt,ratio,delta_star,merge_ok,ms";

    pub fn csv_row(&self, timing: bool) -> String {
        let opt = self.opt.as_ref().map_or("skipped".to_string(), rational::format);
        let ratio = self.ratio.as_ref().map_or("n/a".to_string(), rational::format);
        let delta = self.delta_star.as_ref().map_or("n/a".to_string(), rational::format);
        let merge = match self.merge_ok {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "skipped",
        };
        let ms = if timing { self.ms.to_string() } else { "-".to_string() };
        format!("{},{},{},{},{opt},{ratio},{delta},{merge},{ms}", self.name, self.n, self.m, rational::format(&self.lp))
    }

    pub fn human(&self) -> String {
        let with_dec = |v: &Rational| format!("{} ({:.6})", rational::format(v), rational::approx(v));
        format!(
            "{}: n={} m={} LP={} OPT={} ratio={} delta_star={} merge={} ms={}",
            self.name,
            self.n,
            self.m,
            with_dec(&self.lp),
            self.opt.as_ref().map_or("skipped".to_string(), with_dec),
            self.ratio.as_ref().map_or("n/a".to_string(), with_dec),
            self.delta_star.as_ref().map_or("n/a".to_string(), with_dec),
            match self.merge_ok {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "skipped",
            },
            self.ms
        )
    }
}

/// Builds the report for one instance. OPT is skipped above `cap`
/// vertices, the pipeline when the augmented instance exceeds it.
pub fn ratio_report(instance: &Instance, cap: usize) -> atspp_core::Result<RatioReport> {
    let start = Instant::now();
    check_connectivity(instance)?;
    let (lp, _) = solve_relaxation(instance)?;
    let lp_value = lp.objective.clone();
    let opt = if instance.n() <= cap {
        Some(if instance.is_atspp() {
            exact_atspp_capped(instance, cap)?.1
        } else {
            exact_atsp_capped(instance, cap)?.1
        })
    } else {
        None
    };
    let ratio = match &opt {
        Some(o) if lp_value.is_positive() => Some(o / &lp_value),
        _ => None,
    };
    let (delta_star, merge_ok) = if instance.is_atspp() {
        let gap = min_gap_dual(instance, &lp)?;
        let merge_ok = if instance.n() < cap {
            match path_from_tour_pipeline(instance, &int(3), None) {
                Ok(_) => Some(true),
                Err(Error::SizeCap { .. }) => None,
                Err(_) => Some(false),
            }
        } else {
            None
        };
        (Some(gap.delta), merge_ok)
    } else {
        (None, None)
    };
    Ok(RatioReport {
        name: instance.name().to_string(),
        n: instance.n(),
        m: instance.m(),
        lp: lp_value,
        opt,
        ratio,
        delta_star,
        merge_ok,
        ms: start.elapsed().as_millis(),
    })
}

/// Rows for `family` over the inclusive parameter range, computed
/// concurrently and sorted by size then name.
pub fn family_report(family: Family, from: usize, to: usize) -> atspp_core::Result<Vec<RatioReport>> {
    let mut rows: Vec<RatioReport> = (from..=to)
        .into_par_iter()
        .map(|k| match family {
            Family::Fig1 => ratio_report(&gen_fig1(k).0, DEFAULT_EXACT_CAP),
        })
        .collect::<atspp_core::Result<_>>()?;
    rows.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.name.cmp(&b.name)));
    Ok(rows)
}

pub fn report_csv(rows: &[RatioReport], timing: bool) -> String {
    let mut out = String::from(RatioReport::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row(timing));
        out.push('\n');
    }
    out
}

fn parse_range(text: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = text.split_once("..").ok_or_else(|| anyhow!("expected a range like 2..8, got {text:?}"))?;
    let a: usize = a.trim().parse().with_context(|| format!("bad range start in {text:?}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().with_context(|| format!("bad range end in {text:?}"))?;
    if a > b {
        bail!("empty range {text:?}");
    }
    Ok((a, b))
}

fn parse_rational(text: &str) -> anyhow::Result<Rational> {
    Ok(rational::parse(text)?)
}

fn load(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Instance::from_json(&text)?)
}

fn save(instance: &Instance, path: &Path, out: &mut dyn Write) -> anyhow::Result<()> {
    fs::write(path, instance.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    writeln!(out, "wrote {} ({} vertices, {} edges) to {}", instance.name(), instance.n(), instance.m(), path.display())?;
    Ok(())
}

fn gen(family: GenFamily, out: &mut dyn Write) -> anyhow::Result<()> {
    match family {
        GenFamily::Fig1 { k, output } => {
            if k == 0 {
                bail!("fig1 needs k >= 1");
            }
            save(&gen_fig1(k).0, &output.out, out)
        }
        GenFamily::Fig4 { output } => save(&gen_fig4(), &output.out, out),
        GenFamily::Bem { l, i, raw, output } => {
            let (inst, _) = if raw { gen_bem_raw(l, i)? } else { gen_bem(l, i)? };
            save(&inst, &output.out, out)
        }
        GenFamily::Random { n, p, bound, seed, node_weighted, atsp, output } => {
            let p = rational::approx(&parse_rational(&p)?);
            let spec = RandomSpec { n, edge_probability: p, cost_bound: bound, seed, node_weighted, path_mode: !atsp };
            save(&gen_random(&spec)?, &output.out, out)
        }
        GenFamily::Split { file, v, style, output } => {
            let inst = load(&file)?;
            let idx = inst.vertex_index(&v)?;
            let style = match style {
                Style::OutIn => SplitStyle::OutIn,
                Style::Duplicate => SplitStyle::Duplicate,
            };
            save(&split_vertex(&inst, idx, style)?.0, &output.out, out)
        }
        GenFamily::Nw2uw { file, eps, output } => {
            let inst = load(&file)?;
            let (reduced, map) = nw_to_unweighted(&inst, &parse_rational(&eps)?)?;
            writeln!(out, "scale M = {}", rational::format(&map.scale))?;
            save(&reduced, &output.out, out)
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { family } => gen(family, out)?,
        Command::Lp { file } => {
            let inst = load(&file)?;
            check_connectivity(&inst)?;
            let (lp, _) = solve_relaxation(&inst)?;
            writeln!(out, "LP = {} ({:.6})", rational::format(&lp.objective), rational::approx(&lp.objective))?;
            let cuts: Vec<Vec<&str>> =
                lp.cuts.iter().map(|c| c.iter().map(|v| inst.vertex_name(v)).collect()).collect();
            let x: serde_json::Map<String, serde_json::Value> = inst
                .edges()
                .iter()
                .zip(&lp.x)
                .filter(|(_, x)| !x.is_zero())
                .map(|(e, x)| {
                    (format!("{}->{}", inst.vertex_name(e.tail), inst.vertex_name(e.head)), json!(rational::format(x)))
                })
                .collect();
            let body = json!({"lp": rational::format(&lp.objective), "x": x, "cuts": cuts});
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
        }
        Command::Dual { file, min_gap } => {
            let inst = load(&file)?;
            check_connectivity(&inst)?;
            let (lp, dual) = solve_relaxation(&inst)?;
            let body = if min_gap {
                let gap = min_gap_dual(&inst, &lp)?;
                writeln!(out, "delta_star = {} ({:.6})", rational::format(&gap.delta), rational::approx(&gap.delta))?;
                let mut body = gap.dual.to_json(&inst);
                body["delta_star"] = json!(rational::format(&gap.delta));
                body
            } else {
                dual.to_json(&inst)
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
        }
        Command::Opt { file, force } => {
            let inst = load(&file)?;
            check_connectivity(&inst)?;
            let cap = if force { usize::MAX } else { DEFAULT_EXACT_CAP };
            let (walk, cost) =
                if inst.is_atspp() { exact_atspp_capped(&inst, cap)? } else { exact_atsp_capped(&inst, cap)? };
            writeln!(out, "OPT = {} ({:.6})", rational::format(&cost), rational::approx(&cost))?;
            writeln!(out, "{}", serde_json::to_string_pretty(&walk.to_json(&inst))?)?;
        }
        Command::Merge { file, d } => {
            let inst = load(&file)?;
            check_connectivity(&inst)?;
            let d = parse_rational(&d)?;
            if d.is_negative() {
                bail!("d must be nonnegative");
            }
            let res = path_from_tour_pipeline(&inst, &d, None)?;
            writeln!(
                out,
                "LP = {}, delta_star = {}, tour cost C_R = {}, k = {}, walk cost = {}",
                rational::format(&res.lp),
                rational::format(&res.gap.delta),
                rational::format(&res.tour_cost),
                res.k,
                rational::format(&res.cost)
            )?;
            if let Some(b) = &res.tour_bound {
                writeln!(out, "audit: cost <= C_R - d*LP = {}", rational::format(b))?;
            }
            writeln!(out, "audit: cost <= L + (k-1)(LP + 2 delta) = {}", rational::format(&res.merge_bound))?;
            writeln!(out, "{}", serde_json::to_string_pretty(&res.walk.to_json(&inst))?)?;
        }
        Command::Ratio { file, force } => {
            let inst = load(&file)?;
            let cap = if force { usize::MAX } else { DEFAULT_EXACT_CAP };
            writeln!(out, "{}", ratio_report(&inst, cap)?.human())?;
        }
        Command::Report { family, k, csv, no_timing } => {
            let (a, b) = parse_range(&k)?;
            let rows = family_report(family, a, b)?;
            for row in &rows {
                writeln!(out, "{}", row.human())?;
            }
            fs::write(&csv, report_csv(&rows, !no_timing)).with_context(|| format!("cannot write {}", csv.display()))?;
        }
    }
    Ok(())
}

/// Runs one command line (including the program name). Returns the exit
/// code: 0 on success, 2 when the exact solver's size cap refuses the
/// instance, 1 on any other error.
pub fn run_command<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::SizeCap { .. }) => 2,
                _ => 1,
            }
        }
    }
}
