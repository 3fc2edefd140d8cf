//! `pbd`: command-line surface for the pascal-bratteli library.
//!
//! Exit codes: 0 success / all checks pass, 1 verification failure, 2 input
//! error, 3 computation error.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::ToPrimitive;

use pascal_bratteli::descriptor::{
    BandDescriptor, DiagramDescriptor, MeasureDescriptor, MeasureSpec,
    OrderDescriptor,
};
use pascal_bratteli::diagram::{Diagram, Vertex};
use pascal_bratteli::dot::order_dot;
use pascal_bratteli::measures::{
    eigen_vector_two_sided, format_rational, mu_lambda_cylinder, mu_lambda_total, parse_rational,
    sample_path, x_min_level_measure, TotalMass,
};
use pascal_bratteli::orders::{max_branching_audit, ExtremeKind};
use pascal_bratteli::subdiagrams::{
    band_disjointness, band_measure_dp, build_band_subdiagram, extension_limit, extension_value,
};
use pascal_bratteli::vershik::fiber_orbit;
use pascal_bratteli::verify::{run as run_suite, Suite};
use pascal_bratteli::Error;

#[derive(Parser)]
#[command(
    name = "pbd",
    about = "Pascal-Bratteli diagrams: orders, Vershik dynamics, exact tail-invariant measures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Constructed depth (levels) of the diagram.
    #[arg(long, global = true, default_value_t = 16)]
    depth: u32,
    /// Index window `lo:hi` for the two-sided diagram.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// RNG seed for sampling commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    Ok((
        lo.parse().map_err(|e| format!("window lo: {e}"))?,
        hi.parse().map_err(|e| format!("window hi: {e}"))?,
    ))
}

#[derive(Subcommand)]
enum Command {
    /// Exact cylinder masses, level tables, and totals of a measure.
    Measure {
        /// Measure descriptor JSON, e.g. '{"type":"bernoulli","p":"2/3"}'.
        #[arg(long)]
        spec: String,
        /// Report the minimal-path mass at this level.
        #[arg(long)]
        xmin_level: Option<u32>,
        /// Report the total eigenvector mass with a remainder bound.
        #[arg(long)]
        total: bool,
        /// Report the cylinder mass at this one-sided index.
        #[arg(long)]
        cylinder_index: Option<i64>,
        /// Report the two-sided eigenvector entry at this index.
        #[arg(long)]
        two_sided_index: Option<i64>,
    },
    /// Builds an edge order; dumps labels, audits, or DOT.
    Order {
        /// Order descriptor JSON, e.g. '{"kind":"segment"}'.
        #[arg(long)]
        spec: String,
        /// Diagram descriptor JSON; defaults to the Pascal diagram at --depth
        /// (or the two-sided diagram when --window is given).
        #[arg(long)]
        diagram: Option<String>,
        /// Run the fiber-consistency and branching audits.
        #[arg(long)]
        audit: bool,
        /// Report collapsed minimal-prefix counts at `m:n`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        min_prefixes: Option<(i64, i64)>,
    },
    /// Successor-map orbit of the path fiber over a vertex.
    Vershik {
        /// Order descriptor JSON.
        #[arg(long)]
        spec: String,
        /// Target vertex `index:level`.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        vertex: (i64, i64),
        /// Orbit length cap.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Band subdiagram: thresholds, exact mass, disjointness, sampling.
    Band {
        /// Bernoulli parameter as "num/den".
        #[arg(long)]
        p: String,
        /// Band half-width budget as "num/den".
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        /// Second parameter: report the least index where the bands separate.
        #[arg(long)]
        disjoint_from: Option<String>,
        /// Sample this many seeded paths and report the in-band fraction.
        #[arg(long)]
        sample: Option<u32>,
    },
    /// Anchored measure-extension partial values and their limit.
    Extend {
        /// Bernoulli parameter as "num/den".
        #[arg(long)]
        p: String,
        /// Subdiagram anchor index (one-sided, >= 1).
        #[arg(long, default_value_t = 1)]
        anchor: i64,
        /// Evaluation levels, e.g. "10,50,100".
        #[arg(long, default_value = "10,50,100,150,200", value_delimiter = ',')]
        schedule: Vec<u32>,
    },
    /// Runs the acceptance checks; exits 1 if any fail.
    Verify {
        /// Which checks: all, measures, orders, extension, bands.
        #[arg(default_value = "all")]
        suite: String,
        /// Include the slow deep ray-order check.
        #[arg(long)]
        slow: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Invalid(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(global: &GlobalArgs, text: &str) -> Result<(), Error> {
    match &global.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| if text.ends_with('\n') { Ok(()) } else { stdout.write_all(b"\n") })
                .map_err(|e| Error::Invalid(format!("writing stdout: {e}")))
        }
    }
}

fn default_diagram(global: &GlobalArgs) -> Result<Diagram, Error> {
    match global.window {
        Some((lo, hi)) => Diagram::gen_two_sided(global.depth, lo, hi),
        None => Ok(Diagram::pascal(global.depth)),
    }
}

fn rows_to_output(global: &GlobalArgs, header: &[&str], rows: &[Vec<String>]) -> Result<(), Error> {
    let text = match global.format {
        Format::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json | Format::Dot => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| ((*k).to_string(), serde_json::Value::String(v.clone())))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            serde_json::to_string_pretty(&objs).expect("rows serialize")
        }
    };
    emit(global, &text)
}

fn with_float(r: &BigRational) -> Vec<String> {
    vec![
        format_rational(r),
        r.to_f64().map_or_else(|| "inf".into(), |f| format!("{f:.12}")),
    ]
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Error> {
    let global = &cli.global;
    match &cli.command {
        Command::Measure {
            spec,
            xmin_level,
            total,
            cylinder_index,
            two_sided_index,
        } => {
            let spec: MeasureDescriptor = pascal_bratteli::descriptor::from_json(spec)?;
            let built = spec.build()?;
            let mut rows = Vec::new();
            match (&built, xmin_level) {
                (MeasureSpec::Bernoulli(p), Some(n)) => {
                    let mut row = vec![format!("xmin_level_{n}")];
                    row.extend(with_float(&x_min_level_measure(p, *n)));
                    rows.push(row);
                }
                (MeasureSpec::Eigen(_), Some(_)) => {
                    return Err(Error::Invalid(
                        "--xmin-level needs a Bernoulli measure".into(),
                    ))
                }
                _ => {}
            }
            match (&built, total) {
                (MeasureSpec::Eigen(l), true) => match mu_lambda_total(l, global.depth)? {
                    TotalMass::Finite {
                        total,
                        partial,
                        remainder_bound,
                    } => {
                        for (name, value) in [
                            ("total", total),
                            ("partial", partial),
                            ("remainder_bound", remainder_bound),
                        ] {
                            let mut row = vec![name.to_string()];
                            row.extend(with_float(&value));
                            rows.push(row);
                        }
                    }
                    TotalMass::Infinite { partial } => {
                        let mut row = vec!["diverging_partial".to_string()];
                        row.extend(with_float(&partial));
                        rows.push(row);
                    }
                },
                (MeasureSpec::Bernoulli(_), true) => {
                    return Err(Error::Invalid("--total needs an eigen measure".into()))
                }
                _ => {}
            }
            match (&built, cylinder_index) {
                (MeasureSpec::Eigen(l), Some(i)) => {
                    let mut row = vec![format!("cylinder_{i}_{}", global.depth)];
                    row.extend(with_float(&mu_lambda_cylinder(l, *i, global.depth)?));
                    rows.push(row);
                }
                (MeasureSpec::Bernoulli(p), Some(i)) => {
                    let v = Vertex::pascal(*i, i64::from(global.depth) - *i);
                    let mut row = vec![format!("cylinder_{i}_{}", global.depth)];
                    row.extend(with_float(&pascal_bratteli::measures::bernoulli_cylinder(
                        p, v,
                    )));
                    rows.push(row);
                }
                _ => {}
            }
            if let Some(i) = two_sided_index {
                let MeasureSpec::Bernoulli(p) = &built else {
                    return Err(Error::Invalid(
                        "--two-sided-index needs a Bernoulli measure".into(),
                    ));
                };
                let mut row = vec![format!("two_sided_{i}")];
                row.extend(with_float(&eigen_vector_two_sided(p, *i)));
                rows.push(row);
            }
            if rows.is_empty() {
                return Err(Error::Invalid(
                    "nothing to report; pass --xmin-level, --total, --cylinder-index, or --two-sided-index".into(),
                ));
            }
            rows_to_output(global, &["quantity", "value", "float"], &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Order {
            spec,
            diagram,
            audit,
            min_prefixes,
        } => {
            let spec: OrderDescriptor = pascal_bratteli::descriptor::from_json(spec)?;
            let d = match diagram {
                Some(j) => {
                    let desc: DiagramDescriptor = pascal_bratteli::descriptor::from_json(j)?;
                    desc.build()?
                }
                None => default_diagram(global)?,
            };
            let order = spec.build(&d)?;
            if global.format == Format::Dot {
                let dot = order_dot(&order)?;
                emit(global, &dot)?;
                return Ok(ExitCode::SUCCESS);
            }
            let mut rows = Vec::new();
            if *audit {
                order.audit_fiber_consistency()?;
                rows.push(vec!["fiber_consistency".into(), "ok".into()]);
                let b = max_branching_audit(&order)?;
                rows.push(vec![
                    "branching_vertices".into(),
                    b.branching_vertices.len().to_string(),
                ]);
                rows.push(vec![
                    "max_genuine_branchings_per_maximal_path".into(),
                    b.max_per_forward_maximal_path.to_string(),
                ]);
            }
            if let Some((m, n)) = min_prefixes {
                let (m, n) = (
                    u32::try_from(*m).map_err(|_| Error::Invalid("m must be >= 0".into()))?,
                    u32::try_from(*n).map_err(|_| Error::Invalid("n must be >= 0".into()))?,
                );
                let count = order.extreme_prefix_count(m, n, ExtremeKind::Min)?;
                rows.push(vec![format!("min_prefixes_{m}_{n}"), count.to_string()]);
            }
            if rows.is_empty() {
                emit(global, &pascal_bratteli::descriptor::labels_csv(&order))?;
            } else {
                rows_to_output(global, &["quantity", "value"], &rows)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Vershik { spec, vertex, cap } => {
            let spec: OrderDescriptor = pascal_bratteli::descriptor::from_json(spec)?;
            let d = default_diagram(global)?;
            let order = spec.build(&d)?;
            let (index, level) = *vertex;
            let level = u32::try_from(level)
                .map_err(|_| Error::Invalid("vertex level must be >= 0".into()))?;
            let v = match d.kind() {
                pascal_bratteli::diagram::DiagramKind::PascalStandard => {
                    Vertex::pascal(index, i64::from(level) - index)
                }
                _ => Vertex::new(index, level),
            };
            let orbit = fiber_orbit(&order, v, *cap)?;
            let dump = pascal_bratteli::descriptor::paths_json(&orbit);
            emit(
                global,
                &serde_json::to_string_pretty(&dump).expect("paths serialize"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Band {
            p,
            epsilon,
            disjoint_from,
            sample,
        } => {
            let param =
                pascal_bratteli::measures::BernoulliParam::new(parse_rational(p)?)?;
            let eps = parse_rational(epsilon)?;
            let (sub, spec) = build_band_subdiagram(&param, &eps, global.depth)?;
            let mass = band_measure_dp(&spec, global.depth);
            let mut rows = vec![
                vec![
                    "band_spec".into(),
                    pascal_bratteli::descriptor::to_json(&BandDescriptor::from_spec(&spec)),
                ],
                vec!["mass".into(), format_rational(&mass)],
                vec![
                    "mass_float".into(),
                    format!("{:.6}", mass.to_f64().unwrap_or(f64::NAN)),
                ],
            ];
            if let Some(q) = disjoint_from {
                let other =
                    pascal_bratteli::measures::BernoulliParam::new(parse_rational(q)?)?;
                let i = pascal_bratteli::subdiagrams::least_disjoint_index(&param, &other)?;
                rows.push(vec!["least_disjoint_index".into(), i.to_string()]);
                rows.push(vec![
                    "disjoint_at_4".into(),
                    band_disjointness(&param, &other, 4).to_string(),
                ]);
            }
            if let Some(n) = sample {
                let seed = global
                    .seed
                    .ok_or_else(|| Error::Invalid("--sample needs --seed".into()))?;
                let d = Diagram::pascal(global.depth);
                let mut hits = 0u32;
                for k in 0..*n {
                    let path = sample_path(
                        &d,
                        &param,
                        Vertex::pascal(0, 0),
                        global.depth,
                        seed.wrapping_add(u64::from(k)),
                    )?;
                    let in_band = path.edges().iter().all(|e| {
                        let (x, _) = e.range.pascal_coords();
                        spec.in_band(x, e.range.level)
                    });
                    if in_band {
                        hits += 1;
                    }
                }
                rows.push(vec![
                    "sampled_in_band_fraction".into(),
                    format!("{:.6}", f64::from(hits) / f64::from(*n)),
                ]);
            }
            rows.push(vec![
                "deep_level_width".into(),
                sub.level(global.depth).len().to_string(),
            ]);
            rows_to_output(global, &["quantity", "value"], &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Extend { p, anchor, schedule } => {
            let param =
                pascal_bratteli::measures::BernoulliParam::new(parse_rational(p)?)?;
            let report = extension_value(*anchor, &param, schedule)?;
            let mut rows: Vec<Vec<String>> = report
                .values
                .iter()
                .map(|(n, v)| {
                    let mut row = vec![n.to_string()];
                    row.extend(with_float(v));
                    row
                })
                .collect();
            match extension_limit(*anchor, &param) {
                Some(limit) => {
                    let mut row = vec!["limit".to_string()];
                    row.extend(with_float(&limit));
                    rows.push(row);
                }
                None => rows.push(vec![
                    "limit".into(),
                    "none".into(),
                    format!("diverging={}", report.diverging),
                ]),
            }
            rows_to_output(global, &["n", "value", "float"], &rows)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, slow } => {
            let suite: Suite = suite.parse()?;
            let results = run_suite(suite, *slow);
            let mut text = String::new();
            let mut all_passed = true;
            if global.format == Format::Json {
                let objs: Vec<serde_json::Value> = results
                    .iter()
                    .map(|r| {
                        serde_json::json!({
                            "name": r.name,
                            "suite": r.suite,
                            "passed": r.passed,
                            "details": r.details,
                        })
                    })
                    .collect();
                text = serde_json::to_string_pretty(&objs).expect("results serialize");
                all_passed = results.iter().all(|r| r.passed);
            } else {
                for r in &results {
                    all_passed &= r.passed;
                    text.push_str(&format!(
                        "{} {} ({}): {}\n",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.name,
                        r.suite,
                        r.details
                    ));
                }
            }
            emit(global, &text)?;
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
