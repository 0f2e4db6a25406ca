//! Command-line driver for track construction, verification, cover
//! certificates and code reports in PG(4, q).
//!
//! Exit codes: 0 success (verified where applicable), 1 a verification found
//! a violation or incompleteness, 2 construction hypothesis refused, 3 I/O,
//! format or usage error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use pg4track::codes::{dodunekov_bound, elliptic_track_size, parity_check_from_track, track_upper_bound, CodeReport};
use pg4track::construct::{build_track, TrackFamily};
use pg4track::coverproof::{cover_witness, derivative_pair_witness, AffineTarget, TargetReport};
use pg4track::verify::{addable_points, brute_cover_search, is_track, uncovered_affine, CoverRestrict, VerifyReport};
use pg4track::{admissible_moduli, Error, PointSet, PointSetFile, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

/// Default RNG seed for sampled sweeps; pass --seed to override.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "pg4track", version, about = "Tracks in PG(4,q): construction, verification, covers and codes")]
struct Cli {
    /// Cap the rayon worker count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArg {
    /// Field order: an odd prime >= 5, not divisible by 3.
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the 2q+1-point track and write it as a point-set JSON file.
    Construct {
        #[command(flatten)]
        field: FieldArg,
        /// Build even when 3 is a square in F_q (the set will not be a track).
        #[arg(long)]
        force: bool,
        /// Output path; defaults to track_q<q>.json.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the track property and completeness; JSON report to stdout.
    Verify {
        #[arg(long, conflicts_with = "input")]
        q: Option<u64>,
        /// Read the point set from a JSON file instead of constructing it.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Completeness only: exit 0 iff no point can be added.
    Complete {
        #[arg(long, conflicts_with = "input")]
        q: Option<u64>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Constructive cover certificates for affine targets.
    Cover {
        #[command(flatten)]
        field: FieldArg,
        /// Single target a,b,c,d; otherwise sweeps targets.
        #[arg(long, value_parser = parse_target)]
        point: Option<[u64; 4]>,
        /// Sample size for the sweep (exhaustive when --exhaustive).
        #[arg(long, default_value_t = 100_000)]
        sample: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Affine points on no plane spanned by two derivative points and a curve
    /// point, each with an unrestricted witness when one exists.
    CoverGap {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100_000)]
        sample: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Point count of v^2 = 3F(u) and squareness of F for one target.
    Curve {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_parser = parse_target)]
        point: [u64; 4],
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Parameters of the code whose parity-check columns are the track points.
    Code {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Size bounds around the construction.
    Bounds {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV summary over all admissible q up to a limit.
    Report {
        #[arg(long)]
        qmax: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_target(s: &str) -> Result<[u64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected a,b,c,d".into());
    }
    let mut out = [0u64; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|e| format!("{e}"))?;
    }
    Ok(out)
}

enum Failure {
    /// Hypothesis refused (exit 2).
    Hypothesis(String),
    /// I/O or format problem (exit 3).
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::HypothesisFailed(_) => Failure::Hypothesis(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Hypothesis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn field(q: u64) -> Result<PrimeField, Failure> {
    Ok(PrimeField::new(q)?)
}

/// Writes pretty JSON to the path, or compact JSON to stdout.
fn emit<T: Serialize>(value: &T, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            let mut s = serde_json::to_string_pretty(value)?;
            s.push('\n');
            std::fs::write(path, s)?;
        }
        None => println!("{}", serde_json::to_string(value)?),
    }
    Ok(())
}

fn load_or_build(
    q: Option<u64>,
    input: Option<&PathBuf>,
    force: bool,
) -> Result<(PrimeField, PointSet), Failure> {
    match (q, input) {
        (Some(q), None) => {
            let f = field(q)?;
            let tr = build_track(&f, force)?;
            Ok((f, tr.full))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let file: PointSetFile = serde_json::from_str(&text)?;
            Ok(file.into_point_set()?)
        }
        _ => Err(Failure::Io("pass exactly one of --q or --input".into())),
    }
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Construct { field: fa, force, output } => {
            let f = field(fa.q)?;
            let tr: TrackFamily = build_track(&f, force)?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("track_q{}.json", fa.q)));
            emit(&tr.full.to_file(Some("track")), Some(&path))?;
            println!(
                "q={} size={} three_nonsquare={} output={}",
                fa.q,
                tr.full.len(),
                tr.three_nonsquare,
                path.display()
            );
            Ok(0)
        }
        Cmd::Verify { q, input, force, output } => {
            let (f, set) = load_or_build(q, input.as_ref(), force)?;
            let track = is_track(&f, &set)?;
            let completeness = if track.is_track {
                Some(addable_points(&f, &set)?)
            } else {
                None
            };
            let report = VerifyReport::new(&f, &track, completeness.as_ref());
            emit(&report, output.as_ref())?;
            let ok = track.is_track && completeness.as_ref().is_some_and(|c| c.is_complete);
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Complete { q, input, force, output } => {
            let (f, set) = load_or_build(q, input.as_ref(), force)?;
            let track = is_track(&f, &set)?;
            if !track.is_track {
                let report = VerifyReport::new(&f, &track, None);
                emit(&report, output.as_ref())?;
                return Ok(1);
            }
            let completeness = addable_points(&f, &set)?;
            let report = VerifyReport::new(&f, &track, Some(&completeness));
            emit(&report, output.as_ref())?;
            Ok(if completeness.is_complete { 0 } else { 1 })
        }
        Cmd::Cover { field: fa, point, sample, seed, exhaustive, output } => {
            let f = field(fa.q)?;
            if let Some([a, b, c, d]) = point {
                let tg = AffineTarget::new(&f, a, b, c, d);
                emit(&TargetReport::compute(&f, &tg), output.as_ref())?;
                return Ok(0);
            }
            let report = cover_sweep(&f, sample, seed, exhaustive);
            emit(&report, output.as_ref())?;
            Ok(0)
        }
        Cmd::CoverGap { field: fa, exhaustive, sample, seed, output } => {
            let f = field(fa.q)?;
            let tr = build_track(&f, false)?;
            let gaps = if exhaustive {
                cover_gap_exhaustive(&f, &tr)
            } else {
                cover_gap_sampled(&f, &tr, sample, seed)
            };
            emit(&gaps, output.as_ref())?;
            Ok(0)
        }
        Cmd::Curve { field: fa, point: [a, b, c, d], output } => {
            let f = field(fa.q)?;
            let tg = AffineTarget::new(&f, a, b, c, d);
            emit(&TargetReport::compute(&f, &tg), output.as_ref())?;
            Ok(0)
        }
        Cmd::Code { field: fa, output } => {
            let f = field(fa.q)?;
            let tr = build_track(&f, false)?;
            let spec = parity_check_from_track(&f, &tr.full)?;
            emit(&CodeReport::compute(&f, &spec), output.as_ref())?;
            Ok(0)
        }
        Cmd::Bounds { field: fa, output } => {
            let f = field(fa.q)?;
            #[derive(Serialize)]
            struct Bounds {
                q: u64,
                track_size: u64,
                upper_bound: u64,
                elliptic_size: u64,
                dodunekov: u64,
            }
            let q = f.q();
            emit(
                &Bounds {
                    q,
                    track_size: 2 * q + 1,
                    upper_bound: track_upper_bound(q),
                    elliptic_size: elliptic_track_size(q, q, 1),
                    dodunekov: dodunekov_bound(5, q),
                },
                output.as_ref(),
            )?;
            Ok(0)
        }
        Cmd::Report { qmax, output } => {
            let csv = report_csv(qmax)?;
            match output {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct CoverSweep {
    q: u64,
    targets: u64,
    on_track: u64,
    route_a: u64,
    route_b: u64,
    uncovered: Vec<[u64; 4]>,
}

fn cover_sweep(f: &PrimeField, sample: u64, seed: u64, exhaustive: bool) -> CoverSweep {
    use rayon::prelude::*;
    let q = f.q();
    let targets: Vec<[u64; 4]> = if exhaustive {
        let mut v = Vec::with_capacity((q * q * q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        v.push([a, b, c, d]);
                    }
                }
            }
        }
        v
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..sample)
            .map(|_| std::array::from_fn(|_| rng.random_range(0..q)))
            .collect()
    };
    let routes: Vec<Option<pg4track::coverproof::Route>> = targets
        .par_iter()
        .map(|&[a, b, c, d]| cover_witness(f, &AffineTarget::new(f, a, b, c, d)).map(|w| w.route))
        .collect();
    let mut sweep = CoverSweep {
        q,
        targets: targets.len() as u64,
        on_track: 0,
        route_a: 0,
        route_b: 0,
        uncovered: Vec::new(),
    };
    for (t, r) in targets.iter().zip(&routes) {
        match r {
            Some(pg4track::coverproof::Route::OnTrack) => sweep.on_track += 1,
            Some(pg4track::coverproof::Route::MatrixA) => sweep.route_a += 1,
            Some(pg4track::coverproof::Route::MatrixB) => sweep.route_b += 1,
            None => sweep.uncovered.push(*t),
        }
    }
    sweep
}

#[derive(Serialize)]
struct GapEntry {
    point: [u64; 5],
    witness: Option<[usize; 3]>,
}

#[derive(Serialize)]
struct GapReport {
    q: u64,
    mode: &'static str,
    checked: u64,
    gaps: Vec<GapEntry>,
}

fn cover_gap_exhaustive(f: &PrimeField, tr: &TrackFamily) -> GapReport {
    let uncovered = uncovered_affine(f, &tr.full, CoverRestrict::DerivativePairs);
    let gaps = uncovered
        .iter()
        .map(|p| GapEntry {
            point: *p.coords(),
            witness: brute_cover_search(f, p, &tr.full, CoverRestrict::Any)
                .expect("uncovered points are off the track")
                .first()
                .copied(),
        })
        .collect();
    let q = f.q();
    GapReport {
        q,
        mode: "exhaustive",
        checked: q * q * q * q,
        gaps,
    }
}

fn cover_gap_sampled(f: &PrimeField, tr: &TrackFamily, sample: u64, seed: u64) -> GapReport {
    use rayon::prelude::*;
    let q = f.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<[u64; 4]> = (0..sample)
        .map(|_| std::array::from_fn(|_| rng.random_range(0..q)))
        .collect();
    let hits: Vec<Option<[u64; 4]>> = targets
        .par_iter()
        .map(|&[a, b, c, d]| {
            let tg = AffineTarget::new(f, a, b, c, d);
            if derivative_pair_witness(f, &tg).is_none() {
                Some([a, b, c, d])
            } else {
                None
            }
        })
        .collect();
    let gaps = hits
        .into_iter()
        .flatten()
        .map(|[a, b, c, d]| {
            let tg = AffineTarget::new(f, a, b, c, d);
            let p = tg.point(f);
            GapEntry {
                point: *p.coords(),
                witness: brute_cover_search(f, &p, &tr.full, CoverRestrict::Any)
                    .ok()
                    .and_then(|w| w.first().copied()),
            }
        })
        .collect();
    GapReport {
        q,
        mode: "sampled",
        checked: sample,
        gaps,
    }
}

fn report_csv(qmax: u64) -> Result<String, Failure> {
    let mut out = String::from("q,size,is_track,is_complete,d,dual_d,upper_bound,elliptic_size\n");
    for q in admissible_moduli(qmax) {
        let f = field(q)?;
        let tr = build_track(&f, false)?;
        let track = is_track(&f, &tr.full)?;
        let complete = if track.is_track {
            addable_points(&f, &tr.full)?.is_complete
        } else {
            false
        };
        let spec = parity_check_from_track(&f, &tr.full)?;
        let d = spec.min_distance(&f);
        let dual_d = spec.dual_min_distance(&f);
        out.push_str(&format!(
            "{q},{},{},{},{d},{dual_d},{},{}\n",
            tr.full.len(),
            track.is_track,
            complete,
            track_upper_bound(q),
            elliptic_track_size(q, q, 1),
        ));
    }
    Ok(out)
}
