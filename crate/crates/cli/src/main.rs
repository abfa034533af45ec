use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fqpoints::bounds::{
    bound_affine, bound_bn, bound_equidimensional, bound_for_variety, bound_linear_arrangement, bound_question1,
    bound_serre, parts, tubular_report, BoundKind, Mode,
};
use fqpoints::constructions::{
    build_arrangement, build_flower, build_partial_spread, certify, exact_linear_count, linear_document, Certificate,
};
use fqpoints::groebner::{buchberger, hilbert, hyperplane_section, HilbertData, Ideal};
use fqpoints::incidence::{census_assumption1, census_linear_component};
use fqpoints::mpoly::{parse_poly, MonomialOrder};
use fqpoints::sweep::{run_sweep, SweepFamily};
use fqpoints::variety::{affine_chart, count_points, DEFAULT_POINT_BUDGET};
use fqpoints::{load_variety, GaloisField, LinearSubspace, ProjectivePoint, Report, Variety};

#[derive(Parser)]
#[command(name = "fqpoints", version, about = "Rational points of projective varieties over finite fields")]
struct Cli {
    /// Output format; sweeps default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cap on points visited by any enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_BUDGET)]
    budget: u64,
    /// Seed for the random choices some commands make.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Count rational points of a variety file.
    Count {
        #[arg(long)]
        variety: PathBuf,
        /// Also split the count along the hyperplane given by this linear form.
        #[arg(long)]
        chart: Option<String>,
    },
    /// Dimension, degree and Hilbert polynomial of each component.
    Hilbert {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Grevlex)]
        order: Order,
        /// Cut every component with this linear form first.
        #[arg(long)]
        section: Option<String>,
    },
    /// Evaluate a bound on a variety file or on a (dim:deg) sequence.
    Bound(BoundArgs),
    /// Build a linear configuration and certify its point count.
    Construct {
        #[command(subcommand)]
        what: Construction,
    },
    /// Build the point-hyperplane incidence graph and check its counts.
    Census {
        #[arg(long)]
        variety: PathBuf,
        /// Base point such as (1:0:0:0); defaults to the first rational point,
        /// or a random one when --seed is given.
        #[arg(long)]
        point: Option<String>,
        /// Use the graph that avoids this linear component.
        #[arg(long)]
        linear: Option<String>,
        /// Print the chain of inequalities instead of the report.
        #[arg(long)]
        trace: bool,
    },
    /// Exhaustive verification over a family of instances.
    Sweep {
        #[command(subcommand)]
        family: SweepCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Lex,
    Grevlex,
}

#[derive(Args)]
struct BoundArgs {
    /// Bound kind token, e.g. projective_thm31 or its short form thm31.
    #[arg(long)]
    kind: BoundKind,
    #[arg(long, conflicts_with_all = ["components", "n", "q"])]
    variety: Option<PathBuf>,
    /// Comma-separated dim:deg pairs, e.g. "1:3,0:2".
    #[arg(long, requires_all = ["q"])]
    components: Option<String>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    q: Option<i64>,
}

#[derive(Subcommand)]
enum Construction {
    /// Pairwise disjoint d-subspaces of P^n (2d < n).
    Spread(ConfigArgs),
    /// d-subspaces of P^n pairwise meeting in one common (2d-n)-subspace.
    Flower(ConfigArgs),
    /// Subspaces of the given dimensions attaining the arrangement bound.
    Arrangement {
        #[arg(long)]
        n: usize,
        /// Comma-separated dimensions.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// A variety file; the certificate goes to stderr, or stdout with --out.
    Var,
    Json,
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Every hypersurface of one degree in P^n(F_q).
    Hypersurfaces {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        degree: u32,
    },
    /// Spreads, flowers and arrangements over F_q.
    Constructions {
        #[arg(long)]
        q: u32,
    },
    /// The two π identities over a grid of indices.
    IdentityGrid {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5, 7, 8, 9])]
        qs: Vec<i64>,
        #[arg(long, default_value_t = 12)]
        max_index: i64,
    },
    /// Component and chart margins over a grid of (d, n, degree, q).
    LemmaGrid {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5, 7, 8, 9])]
        qs: Vec<i64>,
        #[arg(long, default_value_t = 6)]
        max_d: i64,
        #[arg(long, default_value_t = 8)]
        max_n: i64,
        #[arg(long, default_value_t = 10)]
        max_degree: i64,
    },
}

/// Bad input or a library error; exits with status 2. Failed checks are
/// reported through [`Output::ok`] instead.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

/// A rendered report plus whether its checks passed.
struct Output {
    text: String,
    ok: bool,
    /// Secondary text: stderr normally, stdout when the report goes to --out.
    note: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true, note: None }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn read_variety(path: &Path) -> Result<Variety, Failure> {
    let doc = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    load_variety(&doc).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn field_of_order(q: u64) -> Result<Arc<GaloisField>, Failure> {
    Ok(GaloisField::with_order(q)?.shared())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &out.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
                if let Some(note) = &out.note {
                    print!("{note}");
                }
            } else {
                if let Some(note) = &out.note {
                    eprint!("{note}");
                }
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    let csv = format == Some(Format::Csv);
    match &cli.command {
        Command::Count { variety, chart } => count_cmd(&read_variety(variety)?, chart.as_deref(), csv, cli.budget),
        Command::Hilbert { variety, order, section } => {
            hilbert_cmd(&read_variety(variety)?, *order, section.as_deref(), csv)
        }
        Command::Bound(args) => bound_cmd(args, csv, cli.budget),
        Command::Construct { what } => construct_cmd(what, csv, cli),
        Command::Census {
            variety,
            point,
            linear,
            trace,
        } => census_cmd(&read_variety(variety)?, point.as_deref(), linear.as_deref(), *trace, csv, cli),
        Command::Sweep { family } => {
            let spec = match family {
                SweepCmd::Hypersurfaces { n, q, degree } => SweepFamily::AllHypersurfaces {
                    n: *n,
                    q: *q,
                    degree: *degree,
                },
                SweepCmd::Constructions { q } => SweepFamily::Constructions { q: *q },
                SweepCmd::IdentityGrid { qs, max_index } => SweepFamily::IdentityGrid {
                    qs: qs.clone(),
                    max_index: *max_index,
                },
                SweepCmd::LemmaGrid {
                    qs,
                    max_d,
                    max_n,
                    max_degree,
                } => SweepFamily::LemmaGrid {
                    qs: qs.clone(),
                    max_d: *max_d,
                    max_n: *max_n,
                    max_degree: *max_degree,
                },
            };
            let report = run_sweep(&spec, cli.budget)?;
            let text = if format == Some(Format::Json) { json(&report) } else { report.to_csv() };
            Ok(Output {
                text,
                ok: report.passed(),
                note: (!report.passed()).then(|| format!("{} violated rows\n", report.violations)),
            })
        }
    }
}

fn count_cmd(v: &Variety, chart: Option<&str>, csv: bool, budget: u64) -> Outcome {
    let count = count_points(v, budget)?;
    let chart = match chart {
        Some(text) => {
            let h = parse_poly(text, &v.field, v.n + 1)?;
            Some(affine_chart(v, &h, budget)?)
        }
        None => None,
    };
    if csv {
        let mut header = vec!["count", "method"];
        let mut row = vec![count.value.to_string(), "enumeration".to_string()];
        if let Some(c) = &chart {
            header.extend(["section_count", "affine_count"]);
            row.extend([c.section_count.to_string(), c.affine_count.to_string()]);
        }
        return Ok(Output::ok(csv_text(&header, &[row])));
    }
    #[derive(Serialize)]
    struct CountOut<'a> {
        count: u64,
        method: fqpoints::variety::CountMethod,
        n: usize,
        q: u32,
        #[serde(skip_serializing_if = "Option::is_none")]
        chart: Option<&'a fqpoints::variety::AffineChart>,
    }
    let ok = chart
        .as_ref()
        .is_none_or(|c| c.projective_count == c.section_count + c.affine_count);
    Ok(Output {
        text: json(&CountOut {
            count: count.value,
            method: count.method,
            n: v.n,
            q: v.field.order(),
            chart: chart.as_ref(),
        }),
        ok,
        note: None,
    })
}

fn hilbert_cmd(v: &Variety, order: Order, section: Option<&str>, csv: bool) -> Outcome {
    let order = match order {
        Order::Lex => MonomialOrder::Lex,
        Order::Grevlex => MonomialOrder::Grevlex,
    };
    let h = section.map(|t| parse_poly(t, &v.field, v.n + 1)).transpose()?;
    #[derive(Serialize)]
    struct Entry {
        name: String,
        dim: i64,
        degree: i64,
        basis_size: usize,
        hilbert: HilbertData,
    }
    let mut entries = Vec::new();
    for c in &v.components {
        let ideal = Ideal::new(Arc::clone(&v.field), v.n + 1, c.ideal.clone())?;
        let (basis, data) = match &h {
            Some(h) => {
                let s = hyperplane_section(&ideal, h, order)?;
                (s.basis, s.hilbert)
            }
            None => {
                let b = buchberger(&ideal, order)?;
                let data = hilbert(&b)?;
                (b, data)
            }
        };
        entries.push(Entry {
            name: c.name.clone(),
            dim: data.dim,
            degree: data.degree,
            basis_size: basis.basis().len(),
            hilbert: data,
        });
    }
    if csv {
        let rows = entries
            .iter()
            .map(|e| {
                let coeffs: Vec<String> = e.hilbert.poly_coeffs.iter().map(|c| c.to_string()).collect();
                vec![
                    e.name.clone(),
                    e.dim.to_string(),
                    e.degree.to_string(),
                    coeffs.join(";"),
                ]
            })
            .collect::<Vec<_>>();
        return Ok(Output::ok(csv_text(&["component", "dim", "degree", "poly_coeffs"], &rows)));
    }
    Ok(Output::ok(json(&entries)))
}

fn parse_components(text: &str) -> Result<Vec<(i64, i64)>, Failure> {
    text.split(',')
        .map(|pair| {
            let (d, g) = pair
                .trim()
                .split_once(':')
                .ok_or_else(|| Failure(format!("expected dim:deg, found `{pair}`")))?;
            let d = d.trim().parse().map_err(|_| Failure(format!("bad dimension `{d}`")))?;
            let g = g.trim().parse().map_err(|_| Failure(format!("bad degree `{g}`")))?;
            Ok((d, g))
        })
        .collect()
}

fn bound_cmd(args: &BoundArgs, csv: bool, budget: u64) -> Outcome {
    let (report, count, dims, degs): (Report, Option<u64>, Vec<i64>, Vec<i64>) = if let Some(path) = &args.variety {
        let v = read_variety(path)?;
        let report = bound_for_variety(&v, args.kind)?;
        let count = count_points(&v, budget)?.value;
        let (dims, degs) = v.sequence().into_iter().map(|(_, d, g)| (d, g)).unzip();
        (report, Some(count), dims, degs)
    } else {
        let seq = parse_components(
            args.components
                .as_deref()
                .ok_or_else(|| Failure("give --variety or --components".into()))?,
        )?;
        let q = args.q.ok_or_else(|| Failure("--q is required".into()))?;
        let need_n = || args.n.ok_or_else(|| Failure("--n is required for this kind".into()));
        let ps = parts(&seq);
        let report = match args.kind {
            BoundKind::Affine => bound_affine(&ps, q)?,
            BoundKind::Projective => bound_bn(&ps, need_n()?, q, Mode::Ambient)?,
            BoundKind::Section => bound_bn(&ps, need_n()?, q, Mode::Section)?,
            BoundKind::Equidimensional => bound_equidimensional(&ps, need_n()?, q)?,
            BoundKind::Question1 => bound_question1(&ps, need_n()?, q)?,
            BoundKind::Serre => {
                let [(_, deg)] = seq[..] else {
                    return Err(Failure("the hypersurface bound takes one dim:deg pair".into()));
                };
                bound_serre(need_n()?, deg, q)?
            }
            BoundKind::LinearArrangement => {
                let dims: Vec<i64> = seq.iter().map(|p| p.0).collect();
                bound_linear_arrangement(&dims, need_n()?, q)?.report
            }
            BoundKind::Tubular => {
                let [(d, deg)] = seq[..] else {
                    return Err(Failure("the tubular count takes one dim:deg pair".into()));
                };
                tubular_report(deg, d, need_n()?, q)?
            }
        };
        let (dims, degs) = seq.into_iter().unzip();
        (report, None, dims, degs)
    };
    let exceeded = count.is_some_and(|c| c as i64 > report.total);
    // a point count above the conjectural bound is a finding, not a failure
    let ok = !exceeded || report.conjectural;
    let note = (exceeded && report.conjectural).then(|| "finding: count exceeds the conjectural bound\n".to_string());
    if csv {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
        let hyps: Vec<String> = report
            .hypotheses
            .iter()
            .map(|(k, s)| format!("{k}={}", serde_json::to_value(s).expect("serializes").as_str().unwrap_or("")))
            .collect();
        let row = vec![
            report.kind.token().to_string(),
            report.n.map(|n| n.to_string()).unwrap_or_default(),
            report.q.to_string(),
            join(&dims),
            join(&degs),
            report.total.to_string(),
            count.map(|c| c.to_string()).unwrap_or_default(),
            count.map(|c| (c as i64 == report.total).to_string()).unwrap_or_default(),
            hyps.join(";"),
        ];
        let header = ["kind", "n", "q", "dims", "degs", "bound", "count", "tight", "hypotheses"];
        return Ok(Output {
            text: csv_text(&header, &[row]),
            ok,
            note,
        });
    }
    #[derive(Serialize)]
    struct BoundOut<'a> {
        #[serde(flatten)]
        report: &'a Report,
        #[serde(skip_serializing_if = "Option::is_none")]
        count: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        within_bound: Option<bool>,
    }
    Ok(Output {
        text: json(&BoundOut {
            report: &report,
            count,
            within_bound: count.map(|_| !exceeded),
        }),
        ok,
        note,
    })
}

fn construct_cmd(what: &Construction, csv: bool, cli: &Cli) -> Outcome {
    #[derive(Serialize)]
    struct Built<'a> {
        construction: &'static str,
        n: usize,
        q: u64,
        dims: Vec<i64>,
        members: Vec<Vec<Vec<String>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        core: Option<Vec<Vec<String>>>,
        certificate: &'a Certificate,
    }
    let (name, n, q, emit, members, core, formula) = match what {
        Construction::Spread(a) => {
            let f = field_of_order(a.q)?;
            let s = build_partial_spread(a.n, a.d, a.r, &f)?;
            let formula = exact_linear_count(&s, &f)?;
            ("spread", a.n, a.q, a.emit, s.members, None, formula)
        }
        Construction::Flower(a) => {
            let f = field_of_order(a.q)?;
            let fl = build_flower(a.n, a.d, a.r, &f)?;
            let formula = exact_linear_count(&fl, &f)?;
            ("flower", a.n, a.q, a.emit, fl.petals, Some(fl.core), formula)
        }
        Construction::Arrangement { n, dims, q, emit } => {
            let f = field_of_order(*q)?;
            let dims: Vec<i64> = dims
                .split(',')
                .map(|d| d.trim().parse().map_err(|_| Failure(format!("bad dimension `{d}`"))))
                .collect::<Result<_, _>>()?;
            let a = build_arrangement(&dims, *n, &f)?;
            let formula = a.bound(&f)?;
            ("arrangement", *n, *q, *emit, a.members, None, formula)
        }
    };
    let f = field_of_order(q)?;
    let cert = certify(&f, n, &members, formula, cli.budget)?;
    let ok = cert.agrees;
    let rows = |l: &LinearSubspace| l.rows_text(&f);
    let built = Built {
        construction: name,
        n,
        q,
        dims: members.iter().map(LinearSubspace::dim).collect(),
        members: members.iter().map(rows).collect(),
        core: core.as_ref().map(rows),
        certificate: &cert,
    };
    match emit {
        Emit::Var => {
            Ok(Output {
                text: linear_document(&f, n, &members, "L"),
                ok,
                note: Some(json(&cert)),
            })
        }
        Emit::Json if csv => {
            let row = vec![
                name.to_string(),
                n.to_string(),
                q.to_string(),
                built.dims.iter().map(i64::to_string).collect::<Vec<_>>().join(";"),
                cert.formula.to_string(),
                cert.enumerated.map(|e| e.to_string()).unwrap_or_default(),
                cert.agrees.to_string(),
            ];
            Ok(Output {
                text: csv_text(&["construction", "n", "q", "dims", "formula", "enumerated", "agrees"], &[row]),
                ok,
                note: None,
            })
        }
        Emit::Json => Ok(Output {
            text: json(&built),
            ok,
            note: None,
        }),
    }
}

fn census_cmd(
    v: &Variety,
    point: Option<&str>,
    linear: Option<&str>,
    trace: bool,
    csv: bool,
    cli: &Cli,
) -> Outcome {
    let p = match point {
        Some(text) => ProjectivePoint::parse(&v.field, text)?,
        None => {
            let candidates: Vec<ProjectivePoint> = match linear {
                Some(name) => {
                    let l = v
                        .component(name)
                        .and_then(|c| c.linear_subspace())
                        .ok_or_else(|| Failure(format!("{name} is not a linear component")))?;
                    l.points(&v.field)
                }
                None => v.rational_points(cli.budget)?,
            };
            let chosen = match cli.seed {
                Some(s) => candidates.choose(&mut ChaCha8Rng::seed_from_u64(s)).cloned(),
                None => candidates.first().cloned(),
            };
            chosen.ok_or_else(|| Failure("the variety has no rational point".into()))?
        }
    };
    let census = match linear {
        Some(name) => census_linear_component(v, name, &p, cli.budget)?,
        None => census_assumption1(v, &p, cli.budget)?,
    };
    let ok = census.consistent();
    let text = if trace {
        census.trace()
    } else if csv {
        let row = vec![
            serde_json::to_value(census.regime).expect("serializes").as_str().unwrap_or("").to_string(),
            census.n.to_string(),
            census.q.to_string(),
            census.base_point.display(&v.field).to_string(),
            census.v1_size.to_string(),
            census.v2_size.to_string(),
            census.edge_count.to_string(),
            census.per_point_valency.to_string(),
            census.identity_holds.to_string(),
            ok.to_string(),
        ];
        csv_text(
            &["regime", "n", "q", "base_point", "v1", "v2", "edges", "per_point_valency", "identity", "consistent"],
            &[row],
        )
    } else {
        json(&census)
    };
    Ok(Output { text, ok, note: None })
}
