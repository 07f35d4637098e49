//! `altmoments` command-line front end.
//!
//! Exit codes: 0 success or certified, 1 property violated, 2 usage or input
//! error.

mod input;
mod output;

use std::process::ExitCode;

use altmoments::compstruct::{
    composition_pmfs, definetti_allocation, deletion_projection, q_row_fd, regeneration_check,
    Composition, CompositionSampler, SamplingMethod, DEFAULT_CAP,
};
use altmoments::gof::{chi_square_gof, tally};
use altmoments::kconvex::{certify_k_alternating, k_associated, moments_kconvex_from_nu};
use altmoments::momentrep::{
    alt_sequence_from_nu, cdf_eval, density_eval, hausdorff_reconstruct, moments_from_nu,
    nu_moments_from_alt, ConvexCdf,
};
use altmoments::montecarlo::{sample_many, shard_rng};
use altmoments::rational::{self, Rational};
use altmoments::seqcalc::{
    a_from_c, c_from_a, certify_completely_alternating, certify_completely_monotone, df_condition,
    difference_table, triangular_rows, DepthCertificate, FiniteSequence,
};
use altmoments::subord::{moments_from_phi, newton_interpolate, nu_from_nutilde, phi_sequence};
use altmoments::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::Scale;
use output::{decimal, decimal_q, json, Csv};

#[derive(Debug)]
pub enum Failure {
    /// Malformed input or unusable arguments.
    Input(String),
    /// The property under test does not hold; carries the report to print.
    Violated { report: String, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCertified {
                ref certificate, ..
            } => Failure::Violated {
                report: json(certificate),
                message: e.to_string(),
            },
            other => Failure::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "altmoments",
    version,
    about = "Moments of convex distribution functions, completely alternating sequences and regenerative compositions"
)]
struct Cli {
    /// Output format; csv renders decimals to 12 significant digits.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Largest n for which compositions are enumerated exactly.
    #[arg(long, global = true, env = "ALTMOMENTS_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,

    /// Scale of the Lévy measure in subordinator data files.
    #[arg(long, global = true, value_enum, default_value = "nutilde")]
    scale: Scale,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Completely monotone.
    Cm,
    /// Completely alternating.
    Ca,
    /// Triangular array rows non-negative and nondecreasing; input c with c(0) = 1.
    Df,
    /// The k-associated sequence of the input moments is k-alternating.
    KAlt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Transform {
    /// a(0) = 0, a(n) = n c(n−1).
    AFromC,
    /// c(n) = a(n+1)/(n+1).
    CFromA,
    /// Moments of the mixing measure from a completely alternating a.
    NuMoments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Table {
    /// Rows j of ∇^j c(n).
    Differences,
    /// Rows n of c(n, m) = C(n,m) ∇^{n−m} c(m).
    Triangle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recursive,
    Paintbox,
}

impl From<Method> for SamplingMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Recursive => SamplingMethod::Recursive,
            Method::Paintbox => SamplingMethod::Paintbox,
        }
    }
}

#[derive(Debug, Args)]
struct SampleArgs {
    /// Subordinator data file or inline JSON.
    data: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    #[arg(long, value_enum, default_value = "recursive")]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify a sequence property up to its available depth.
    Certify {
        /// Sequence file (JSON array of "p/q" strings) or inline JSON.
        seq: String,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Convert between moment and completely alternating sequences.
    Transform {
        seq: String,
        #[arg(long = "op", value_enum)]
        op: Transform,
    },
    /// Difference table or triangular array of a sequence.
    Table {
        seq: String,
        #[arg(long, value_enum, default_value = "triangle")]
        kind: Table,
    },
    /// Moments c(0..=n) of the convex (or (k+1)-convex) CDF mixed by a measure.
    Moments {
        /// Mixing measure file or inline JSON.
        measure: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Print the completely alternating a(0..=n) instead.
        #[arg(long, conflicts_with = "k")]
        alt: bool,
    },
    /// CDF and density of the convex CDF on the grid i/points.
    Cdf {
        measure: String,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Laplace exponent at integers, or interpolated at a real λ.
    Phi {
        data: String,
        #[arg(long, required_unless_present = "lam")]
        n: Option<usize>,
        /// Evaluate at a real λ by Newton interpolation (requires --interp).
        #[arg(long, requires = "interp")]
        lam: Option<f64>,
        #[arg(long)]
        interp: bool,
        /// Number of integer nodes 0..=nodes used for interpolation.
        #[arg(long, default_value_t = 20)]
        nodes: usize,
        /// Print c(n) = Φ(n+1)/(n+1) instead; requires Φ(1) = 1.
        #[arg(long, conflicts_with = "lam")]
        moments: bool,
    },
    /// Rewrite subordinator data in the other scale.
    Convert { data: String },
    /// First-part probabilities q(n, m) for n = 1..=N.
    Qmatrix {
        data: String,
        #[arg(long)]
        n: usize,
    },
    /// Exact law of the random composition of n.
    Pmf {
        data: String,
        #[arg(long)]
        n: usize,
        /// Report the law of the sorted parts.
        #[arg(long)]
        partitions: bool,
    },
    /// Draw random compositions.
    Sample(SampleArgs),
    /// Chi-square goodness of fit of sampled compositions against the exact law.
    Gof {
        #[command(flatten)]
        sample: SampleArgs,
        /// Significance level; exit 1 when the p-value is not above it.
        #[arg(long, default_value_t = 1e-3)]
        alpha: f64,
    },
    /// Check that deleting a random ball from C_n gives the law of C_{n−1}.
    Consistency {
        data: String,
        #[arg(long)]
        n: usize,
    },
    /// Check the regenerative property of the law of C_n.
    Regeneration {
        data: String,
        #[arg(long)]
        n: usize,
    },
    /// Law of S_n/n from row n of the triangular array.
    Reconstruct {
        seq: String,
        #[arg(long)]
        n: usize,
    },
    /// Throw n uniform balls into the boxes cut by the breakpoints.
    Allocate {
        /// Nondecreasing breakpoints in [0,1], comma separated "p/q" values.
        #[arg(long, value_delimiter = ',', required = true)]
        breakpoints: Vec<String>,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violated { report, message }) => {
            print!("{report}");
            eprintln!("violated: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn json_only(cli: &Cli, what: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        Err(Failure::Input(format!("{what} has no csv output")))
    } else {
        Ok(())
    }
}

fn certificate_outcome(cert: DepthCertificate) -> Result<String, Failure> {
    if cert.is_certified() {
        Ok(json(&cert))
    } else {
        let message = match &cert.witness {
            Some(w) => format!("witness j={}, n={}, value={}", w.j, w.n, w.value),
            None => "no witness".into(),
        };
        Err(Failure::Violated {
            report: json(&cert),
            message,
        })
    }
}

fn sequence_output(cli: &Cli, seq: &FiniteSequence) -> String {
    match cli.format {
        Format::Json => json(seq),
        Format::Csv => {
            let mut csv = Csv::new(&["n", "value"]);
            for (n, v) in seq.values().iter().enumerate() {
                csv.row([n.to_string(), decimal_q(v)]);
            }
            csv.finish()
        }
    }
}

fn parts_field(c: &Composition) -> String {
    c.parts()
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let data = |source: &str| input::laplace_data(source, cli.scale);
    match &cli.command {
        Command::Certify { seq, mode, k } => {
            json_only(cli, "certify")?;
            let seq = input::sequence(seq)?;
            let cert = match mode {
                Mode::Cm => certify_completely_monotone(&seq),
                Mode::Ca => certify_completely_alternating(&seq),
                Mode::Df => df_condition(&seq)?,
                Mode::KAlt => certify_k_alternating(&k_associated(&seq, *k)?),
            };
            certificate_outcome(cert)
        }
        Command::Transform { seq, op } => {
            let seq = input::sequence(seq)?;
            let out = match op {
                Transform::AFromC => a_from_c(&seq),
                Transform::CFromA => c_from_a(&seq)?,
                Transform::NuMoments => nu_moments_from_alt(&seq)?,
            };
            Ok(sequence_output(cli, &out))
        }
        Command::Table { seq, kind } => {
            let seq = input::sequence(seq)?;
            let rows: Vec<Vec<Rational>> = match kind {
                Table::Differences => difference_table(&seq),
                Table::Triangle => triangular_rows(&seq)
                    .into_iter()
                    .map(|r| r.entries)
                    .collect(),
            };
            Ok(match cli.format {
                Format::Json => {
                    let rows: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| r.iter().map(rational::format).collect())
                        .collect();
                    json(&rows)
                }
                Format::Csv => {
                    let mut csv = Csv::new(&["row", "col", "value"]);
                    for (i, row) in rows.iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            csv.row([i.to_string(), j.to_string(), decimal_q(v)]);
                        }
                    }
                    csv.finish()
                }
            })
        }
        Command::Moments { measure, n, k, alt } => {
            let nu = input::measure(measure)?;
            let seq = match (k, alt) {
                (_, true) => alt_sequence_from_nu(&nu, *n),
                (Some(k), false) => moments_kconvex_from_nu(&nu, *k, *n)?,
                (None, false) => moments_from_nu(&nu, *n)?,
            };
            Ok(sequence_output(cli, &seq))
        }
        Command::Cdf { measure, points } => {
            if *points == 0 {
                return Err(Failure::Input("--points must be at least 1".into()));
            }
            let f = ConvexCdf::new(input::measure(measure)?)?;
            #[derive(Serialize)]
            struct Point {
                x: String,
                cdf: String,
                #[serde(skip_serializing_if = "Option::is_none")]
                density: Option<String>,
            }
            let mut exact = Vec::new();
            let mut csv = Csv::new(&["x", "F", "density"]);
            for i in 0..=*points {
                let x = rational::ratio(i as i64, *points as i64);
                let cdf = cdf_eval(&f, &x)?;
                let density = density_eval(&f, &x).ok();
                csv.row([
                    decimal_q(&x),
                    decimal_q(&cdf),
                    density.as_ref().map(decimal_q).unwrap_or_default(),
                ]);
                exact.push(Point {
                    x: rational::format(&x),
                    cdf: rational::format(&cdf),
                    density: density.as_ref().map(rational::format),
                });
            }
            Ok(match cli.format {
                Format::Json => json(&exact),
                Format::Csv => csv.finish(),
            })
        }
        Command::Phi {
            data: source,
            n,
            lam,
            interp: _,
            nodes,
            moments,
        } => {
            let d = data(source)?;
            if let Some(lam) = lam {
                if !lam.is_finite() || *lam < 0.0 {
                    return Err(Failure::Input(format!(
                        "--lam must be a non-negative real, got {lam}"
                    )));
                }
                let value = newton_interpolate(&phi_sequence(&d, *nodes), *lam);
                #[derive(Serialize)]
                struct Interpolated {
                    lambda: f64,
                    nodes: usize,
                    value: f64,
                }
                return Ok(match cli.format {
                    Format::Json => json(&Interpolated {
                        lambda: *lam,
                        nodes: *nodes,
                        value,
                    }),
                    Format::Csv => {
                        let mut csv = Csv::new(&["lambda", "phi"]);
                        csv.row([decimal(*lam), decimal(value)]);
                        csv.finish()
                    }
                });
            }
            let n = n.expect("clap requires --n without --lam");
            let seq = if *moments {
                moments_from_phi(&d, n)?
            } else {
                phi_sequence(&d, n)
            };
            Ok(sequence_output(cli, &seq))
        }
        Command::Convert { data: source } => {
            json_only(cli, "convert")?;
            let d = data(source)?;
            Ok(match cli.scale {
                Scale::Nutilde => json(&nu_from_nutilde(&d)),
                Scale::Nu => json(&d),
            })
        }
        Command::Qmatrix { data: source, n } => {
            let d = data(source)?;
            let rows = (1..=*n)
                .map(|m| q_row_fd(&d, m))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(match cli.format {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut csv = Csv::new(&["n", "m", "q"]);
                    for row in &rows {
                        for (i, q) in row.q.iter().enumerate() {
                            csv.row([row.n.to_string(), (i + 1).to_string(), decimal_q(q)]);
                        }
                    }
                    csv.finish()
                }
            })
        }
        Command::Pmf {
            data: source,
            n,
            partitions,
        } => {
            let d = data(source)?;
            let mut dist = composition_pmfs(&d, *n, cli.cap)?.pop().expect("n ≥ 1");
            if *partitions {
                dist = dist.to_partitions();
            }
            Ok(match cli.format {
                Format::Json => json(&dist),
                Format::Csv => {
                    let mut csv = Csv::new(&["parts", "p"]);
                    for (c, p) in &dist.pmf {
                        csv.row([parts_field(c), decimal_q(p)]);
                    }
                    csv.finish()
                }
            })
        }
        Command::Sample(args) => {
            let sampler = CompositionSampler::new(&data(&args.data)?, args.n)?;
            let draws = sample_many(&sampler, args.method.into(), args.count, args.seed);
            let method = format!("{:?}", args.method).to_lowercase();
            Ok(match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Samples<'a> {
                        seed: u64,
                        n: usize,
                        method: &'a str,
                        count: usize,
                        draws: &'a [Composition],
                    }
                    json(&Samples {
                        seed: args.seed,
                        n: args.n,
                        method: &method,
                        count: args.count,
                        draws: &draws,
                    })
                }
                Format::Csv => {
                    let comment = format!(
                        "seed={} n={} method={method} count={}",
                        args.seed, args.n, args.count
                    );
                    let mut csv = Csv::with_comment(&comment, &["draw", "parts"]);
                    for (i, c) in draws.iter().enumerate() {
                        csv.row([i.to_string(), parts_field(c)]);
                    }
                    csv.finish()
                }
            })
        }
        Command::Gof {
            sample: args,
            alpha,
        } => {
            json_only(cli, "gof")?;
            let d = data(&args.data)?;
            let exact = composition_pmfs(&d, args.n, cli.cap)?.pop().expect("n ≥ 1");
            let sampler = CompositionSampler::new(&d, args.n)?;
            let draws = sample_many(&sampler, args.method.into(), args.count, args.seed);
            let report = chi_square_gof(&tally(&draws), &exact);
            #[derive(Serialize)]
            struct Gof {
                statistic: f64,
                dof: usize,
                pvalue: f64,
                alpha: f64,
                passed: bool,
                seed: u64,
                n: usize,
                method: String,
                count: usize,
            }
            let out = Gof {
                statistic: report.statistic,
                dof: report.dof,
                pvalue: report.pvalue,
                alpha: *alpha,
                passed: report.passes(*alpha),
                seed: args.seed,
                n: args.n,
                method: format!("{:?}", args.method).to_lowercase(),
                count: args.count,
            };
            // serde_json renders an infinite statistic as null
            let text = json(&out);
            if out.passed {
                Ok(text)
            } else {
                Err(Failure::Violated {
                    report: text,
                    message: format!("p-value {} not above {alpha}", report.pvalue),
                })
            }
        }
        Command::Consistency { data: source, n } => {
            json_only(cli, "consistency")?;
            if *n < 2 {
                return Err(Failure::Input("consistency needs --n at least 2".into()));
            }
            let dists = composition_pmfs(&data(source)?, *n, cli.cap)?;
            let projected = deletion_projection(&dists[n - 1])?;
            let exact = &dists[n - 2];
            #[derive(Serialize)]
            struct Mismatch {
                parts: Composition,
                projected: String,
                exact: String,
            }
            #[derive(Serialize)]
            struct Report {
                n: usize,
                consistent: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                witness: Option<Mismatch>,
            }
            let witness = projected
                .pmf
                .keys()
                .chain(exact.pmf.keys())
                .find(|c| projected.prob(c) != exact.prob(c))
                .map(|c| Mismatch {
                    parts: c.clone(),
                    projected: rational::format(&projected.prob(c)),
                    exact: rational::format(&exact.prob(c)),
                });
            let report = Report {
                n: *n,
                consistent: witness.is_none(),
                witness,
            };
            let text = json(&report);
            if report.consistent {
                Ok(text)
            } else {
                Err(Failure::Violated {
                    report: text,
                    message: "deletion projection differs".into(),
                })
            }
        }
        Command::Regeneration { data: source, n } => {
            json_only(cli, "regeneration")?;
            let report = regeneration_check(&data(source)?, *n, cli.cap)?;
            let text = json(&report);
            if report.passed {
                Ok(text)
            } else {
                Err(Failure::Violated {
                    report: text,
                    message: "conditional law of the remainder differs".into(),
                })
            }
        }
        Command::Reconstruct { seq, n } => {
            let g = hausdorff_reconstruct(&input::sequence(seq)?, *n)?;
            Ok(match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Point {
                        x: String,
                        #[serde(rename = "F")]
                        f: String,
                    }
                    #[derive(Serialize)]
                    struct Reconstruction {
                        n: usize,
                        points: Vec<Point>,
                    }
                    let points = g
                        .points
                        .iter()
                        .map(|(x, f)| Point {
                            x: rational::format(x),
                            f: rational::format(f),
                        })
                        .collect();
                    json(&Reconstruction { n: *n, points })
                }
                Format::Csv => {
                    let mut csv = Csv::new(&["x", "F"]);
                    for (x, f) in &g.points {
                        csv.row([decimal_q(x), decimal_q(f)]);
                    }
                    csv.finish()
                }
            })
        }
        Command::Allocate {
            breakpoints,
            n,
            seed,
        } => {
            let xs = breakpoints
                .iter()
                .map(|b| {
                    rational::parse(b.trim())
                        .map_err(|e| Failure::Input(format!("breakpoint {b:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let alloc = definetti_allocation(&xs, *n, &mut shard_rng(*seed, 0))?;
            Ok(match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        seed: u64,
                        n: u64,
                        breakpoints: Vec<String>,
                        counts: &'a [u64],
                        residual: u64,
                    }
                    json(&Out {
                        seed: *seed,
                        n: *n,
                        breakpoints: xs.iter().map(rational::format).collect(),
                        counts: &alloc.counts,
                        residual: alloc.residual,
                    })
                }
                Format::Csv => {
                    let mut csv = Csv::with_comment(
                        &format!("seed={seed} n={n}"),
                        &["box", "right", "count"],
                    );
                    for (i, (x, c)) in xs.iter().zip(&alloc.counts).enumerate() {
                        csv.row([(i + 1).to_string(), decimal_q(x), c.to_string()]);
                    }
                    csv.row([
                        (xs.len() + 1).to_string(),
                        "1".into(),
                        alloc.residual.to_string(),
                    ]);
                    csv.finish()
                }
            })
        }
    }
}
