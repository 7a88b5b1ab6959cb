use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ddb_core::coset::DEFAULT_MAX_COSETS;
use ddb_core::{
    analyze_presentation, check_structural_rules, decide_flat, decide_spaceform,
    enumerate_descriptors, enumerate_gluings, h1_invariants, matrix_orbit_reduce, Assumptions,
    Base, EnumLimit, Error, Execution, GluingDatum, GluingMatrix, GroupOrder, Leaf, Pi1Report,
    Presentation, RuleStatus, SideDescriptor, SpaceFormDescriptor, Sublattice, Verdict,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "ddb",
    version,
    about = "Finitely presented groups and double disk bundle decisions"
)]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 2 when a result is unknown because the coset limit was hit.
    #[arg(long, global = true)]
    strict: bool,
    /// Maximum number of cosets defined during enumeration.
    #[arg(long, global = true, env = "DDB_COSET_LIMIT", value_name = "N")]
    coset_limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order of a finitely presented group.
    Order { presentation: String },
    /// Invariant factors of the abelianization.
    Abelianize { presentation: String },
    /// Fundamental group of one double disk bundle.
    Glue {
        #[arg(long)]
        leaf: LeafArg,
        #[arg(long)]
        minus: BaseArg,
        /// Defaults to the solid torus for a T2 leaf and the ball for S2.
        #[arg(long)]
        plus: Option<BaseArg>,
        /// Gluing matrix entries alpha,beta,gamma,delta; determinant -1 is
        /// reduced to its determinant 1 partner.
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,0,1")]
        matrix: String,
        #[arg(long, value_enum, default_value_t = SublatticeArg::First)]
        sublattice: SublatticeArg,
    },
    /// Every determinant-one gluing with entries in [-bound, bound].
    EnumerateGluings {
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        minus: BaseArg,
        #[arg(long, value_enum, default_value_t = SublatticeArg::First)]
        sublattice: SublatticeArg,
        /// Worker threads; 1 runs sequentially.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Decide a spherical space form given as descriptor JSON.
    DecideSpaceform { descriptor: String },
    /// Decide a flat manifold from its fundamental group.
    DecideFlat { presentation: String },
    /// All space form descriptors up to an order, with verdicts.
    Catalog {
        #[arg(long)]
        max_order: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate the structural necessary conditions on a group.
    CheckRules {
        presentation: String,
        #[arg(long)]
        aspherical: bool,
        #[arg(long)]
        ell_minus_zero: bool,
        #[arg(long)]
        both_ell_zero: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LeafArg {
    #[value(name = "S2")]
    S2,
    #[value(name = "T2")]
    T2,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    #[value(name = "pt")]
    Pt,
    #[value(name = "RP2")]
    Rp2,
    #[value(name = "S1")]
    S1,
    #[value(name = "T2")]
    T2,
    #[value(name = "K")]
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum SublatticeArg {
    First,
    Second,
    Diagonal,
}

impl From<BaseArg> for Base {
    fn from(b: BaseArg) -> Base {
        match b {
            BaseArg::Pt => Base::Point,
            BaseArg::Rp2 => Base::RP2,
            BaseArg::S1 => Base::Circle,
            BaseArg::T2 => Base::Torus2,
            BaseArg::K => Base::KleinBottle,
        }
    }
}

impl From<SublatticeArg> for Sublattice {
    fn from(s: SublatticeArg) -> Sublattice {
        match s {
            SublatticeArg::First => Sublattice::First,
            SublatticeArg::Second => Sublattice::Second,
            SublatticeArg::Diagonal => Sublattice::Diagonal,
        }
    }
}

/// What a successful run produced: text for stdout and whether any part of
/// it is unknown because of the coset limit.
struct Output {
    text: String,
    unknown: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", out.text);
            if out.unknown {
                eprintln!("warning: some results are unknown (coset limit reached)");
                if cli.strict {
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let limit = EnumLimit::new(cli.coset_limit.unwrap_or(DEFAULT_MAX_COSETS))?;
    match &cli.command {
        Command::Order { presentation } => {
            let p: Presentation = presentation.parse()?;
            let r = analyze_presentation(&p, limit)?;
            let text = if cli.json {
                pretty(&json!({ "presentation": p, "order": r.order }))
            } else {
                r.order.to_string()
            };
            Ok(Output {
                text,
                unknown: r.order == GroupOrder::Unknown,
            })
        }
        Command::Abelianize { presentation } => {
            let p: Presentation = presentation.parse()?;
            let h1 = h1_invariants(&p);
            let text = if cli.json {
                pretty(&json!(h1))
            } else {
                h1.to_string()
            };
            Ok(Output {
                text,
                unknown: false,
            })
        }
        Command::Glue {
            leaf,
            minus,
            plus,
            matrix,
            sublattice,
        } => {
            let leaf = match leaf {
                LeafArg::S2 => Leaf::Sphere2,
                LeafArg::T2 => Leaf::Torus2,
            };
            let plus = plus.map(Base::from).unwrap_or(match leaf {
                Leaf::Sphere2 => Base::Point,
                Leaf::Torus2 => Base::Circle,
            });
            let side = |b: Base| {
                let s = SideDescriptor::over(b);
                SideDescriptor::new(leaf, s.base(), s.fiber_dim())
            };
            let datum =
                GluingDatum::new(side((*minus).into())?, side(plus)?, parse_matrix(matrix)?)?
                    .with_sublattice((*sublattice).into());
            match datum.pi1(limit) {
                Ok(r) => Ok(Output {
                    unknown: r.order == GroupOrder::Unknown,
                    text: if cli.json {
                        pretty(&r.to_json())
                    } else {
                        report_table(&r)
                    },
                }),
                Err(Error::LimitExceeded(n)) => Ok(Output {
                    text: format!("unknown: coset limit {n} reached"),
                    unknown: true,
                }),
                Err(e) => Err(e),
            }
        }
        Command::EnumerateGluings {
            bound,
            minus,
            sublattice,
            jobs,
        } => {
            let side = SideDescriptor::over((*minus).into());
            if side.leaf() != Leaf::Torus2 {
                return Err(Error::InadmissibleSide(
                    "enumeration needs a side with torus boundary".into(),
                ));
            }
            let results = with_jobs(*jobs, |exec| {
                enumerate_gluings(*bound as i64, side, (*sublattice).into(), limit, exec)
            })?;
            let mut unknown = false;
            let mut rows = vec![header(&["matrix", "classification", "order", "H_1"])];
            let mut items = Vec::new();
            for (m, r) in &results {
                match r {
                    Ok(r) => {
                        unknown |= r.order == GroupOrder::Unknown;
                        rows.push(vec![
                            m.to_string(),
                            r.classification.to_string(),
                            r.order.to_string(),
                            r.invariant_factors.to_string(),
                        ]);
                        items.push(json!({ "matrix": m, "report": r.to_json() }));
                    }
                    Err(e) => {
                        unknown |= matches!(e, Error::LimitExceeded(_));
                        rows.push(vec![
                            m.to_string(),
                            format!("error: {e}"),
                            String::new(),
                            String::new(),
                        ]);
                        items.push(json!({ "matrix": m, "error": e.to_string() }));
                    }
                }
            }
            let text = if cli.json {
                pretty(&Value::Array(items))
            } else {
                table(&rows)
            };
            Ok(Output { text, unknown })
        }
        Command::DecideSpaceform { descriptor } => {
            let d: SpaceFormDescriptor = serde_json::from_str(descriptor)
                .map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
            let v = decide_spaceform(&d)?;
            Ok(Output {
                text: if cli.json {
                    pretty(&v.to_json())
                } else {
                    verdict_table(&d.to_string(), &v)
                },
                unknown: false,
            })
        }
        Command::DecideFlat { presentation } => {
            let p: Presentation = presentation.parse()?;
            let v = decide_flat(&h1_invariants(&p));
            Ok(Output {
                text: if cli.json {
                    pretty(&v.to_json())
                } else {
                    verdict_table(&p.to_string(), &v)
                },
                unknown: false,
            })
        }
        Command::Catalog { max_order, jobs } => {
            let entries = enumerate_descriptors(*max_order);
            let verdicts = with_jobs(*jobs, |exec| {
                exec.map(entries.clone(), |e| decide_spaceform(&e.descriptor))
            })?;
            let mut rows = vec![header(&[
                "descriptor",
                "order",
                "H_1",
                "verdict",
                "homogeneous",
                "coincidences",
            ])];
            let mut items = Vec::new();
            for (e, v) in entries.iter().zip(verdicts) {
                let v = v?;
                let coinc: Vec<String> = e.coincidences.iter().map(|c| c.to_string()).collect();
                rows.push(vec![
                    e.descriptor.to_string(),
                    e.order.to_string(),
                    v.evidence
                        .invariant_factors
                        .as_ref()
                        .map(|f| f.to_string())
                        .unwrap_or_default(),
                    v.answer.to_string(),
                    if v.evidence.homogeneous {
                        "yes".into()
                    } else {
                        String::new()
                    },
                    coinc.join("; "),
                ]);
                items.push(json!({ "entry": e, "verdict": v.to_json() }));
            }
            let text = if cli.json {
                pretty(&Value::Array(items))
            } else {
                table(&rows)
            };
            Ok(Output {
                text,
                unknown: false,
            })
        }
        Command::CheckRules {
            presentation,
            aspherical,
            ell_minus_zero,
            both_ell_zero,
        } => {
            let p: Presentation = presentation.parse()?;
            let report = analyze_presentation(&p, limit)?;
            let a = Assumptions {
                aspherical: *aspherical,
                ell_minus_zero: *ell_minus_zero,
                both_ell_zero: *both_ell_zero,
            };
            let outcomes = check_structural_rules(&report, a);
            let order_used = outcomes[1].status != RuleStatus::Inactive;
            let text = if cli.json {
                pretty(&json!({ "report": report.to_json(), "outcomes": outcomes }))
            } else {
                let mut rows = vec![header(&["rule", "status", "detail"])];
                rows.extend(outcomes.iter().map(|o| {
                    vec![
                        o.rule.to_string(),
                        format!("{:?}", o.status),
                        o.detail.clone(),
                    ]
                }));
                table(&rows)
            };
            Ok(Output {
                text,
                unknown: order_used && report.order == GroupOrder::Unknown,
            })
        }
    }
}

fn parse_matrix(s: &str) -> Result<GluingMatrix, Error> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Malformed(format!("matrix `{s}`: {e}")))?;
    match v[..] {
        [a, b, c, d] => matrix_orbit_reduce([a, b, c, d]),
        _ => Err(Error::Malformed(format!("matrix `{s}` needs four entries"))),
    }
}

#[cfg(feature = "parallel")]
fn with_jobs<R: Send>(
    jobs: Option<usize>,
    f: impl FnOnce(Execution) -> R + Send,
) -> Result<R, Error> {
    match jobs {
        Some(0) => Err(Error::Malformed("--jobs must be positive".into())),
        Some(1) => Ok(f(Execution::Sequential)),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Malformed(e.to_string()))?;
            Ok(pool.install(|| f(Execution::Parallel)))
        }
        None => Ok(f(Execution::Parallel)),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<R: Send>(
    jobs: Option<usize>,
    f: impl FnOnce(Execution) -> R + Send,
) -> Result<R, Error> {
    if jobs == Some(0) {
        return Err(Error::Malformed("--jobs must be positive".into()));
    }
    Ok(f(Execution::Sequential))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values print")
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|c| c.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    rows.iter()
        .map(|r| {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                .collect();
            line.join("  ").trim_end().to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn report_table(r: &Pi1Report) -> String {
    let mut rows = vec![
        vec!["presentation".into(), r.presentation.to_string()],
        vec!["H_1".into(), r.invariant_factors.to_string()],
        vec!["order".into(), r.order.to_string()],
        vec!["classification".into(), r.classification.to_string()],
    ];
    if let Some(m) = r.manifold {
        rows.push(vec!["manifold".into(), m.to_string()]);
    }
    for c in &r.certificate {
        rows.push(vec![
            "certificate".into(),
            format!("{} = {} in {}", c.lhs, c.rhs, c.group),
        ]);
    }
    for n in &r.notes {
        rows.push(vec!["note".into(), n.clone()]);
    }
    table(&rows)
}

fn verdict_table(subject: &str, v: &Verdict) -> String {
    let mut rows = vec![
        vec!["input".into(), subject.to_string()],
        vec!["answer".into(), v.answer.to_string()],
        vec![
            "rule".into(),
            v.rule
                .map(|r| r.to_string())
                .unwrap_or_else(|| "none".into()),
        ],
    ];
    if let Some(f) = &v.evidence.invariant_factors {
        rows.push(vec!["H_1".into(), f.to_string()]);
    }
    rows.push(vec!["order".into(), v.evidence.order.to_string()]);
    if let Some(c) = &v.evidence.classification {
        rows.push(vec!["classification".into(), c.to_string()]);
    }
    rows.push(vec![
        "homogeneous".into(),
        v.evidence.homogeneous.to_string(),
    ]);
    for n in &v.evidence.notes {
        rows.push(vec!["note".into(), n.clone()]);
    }
    table(&rows)
}
