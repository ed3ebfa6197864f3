use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cy_lines::algebra::Scalar;
use cy_lines::geometry::{lies_on, CompleteIntersection, Line};
use cy_lines::line_search::{
    build_family_2222, build_family_33, lines_2222, lines_33, Family2222Params, Family33Params,
};
use cy_lines::normal_bundle::{
    minimal_syzygy_degree, normalize_line_coords, restriction_matrix, splitting_from_outcome,
    SyzygyOutcome,
};
use cy_lines::report::{reproduce_paper, summary_table, ReproduceOptions};
use cy_lines::schubert::{expected_lines, LineCount};
use cy_lines::symmetry::{
    generate_group, groups, orbit, stabilizer, union_of_orbits, FiniteGroup, DEFAULT_GROUP_CAP,
};

#[derive(Parser)]
#[command(
    name = "cy-lines",
    about = "Lines on Calabi-Yau complete-intersection threefolds: construction, orbits, \
             normal bundles, and expected counts"
)]
struct Cli {
    /// Incidence tolerance for constructed lines and orbit members.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,

    /// Maximum syzygy degree searched by normal-bundle analysis.
    #[arg(long, global = true, default_value_t = 2)]
    max_t: usize,

    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Bound the worker pool for per-line analysis (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family selector: 33 for the (3,3) pencil, 2222 for the (2,2,2,2)
    /// family.
    #[arg(long)]
    family: String,

    /// λ as RE or RE,IM.
    #[arg(long, value_parser = parse_complex)]
    lambda: Scalar,

    /// μ as RE or RE,IM (2222 family only).
    #[arg(long, value_parser = parse_complex)]
    mu: Option<Scalar>,
}

#[derive(Subcommand)]
enum Command {
    /// Expected number of lines on a generic complete intersection.
    ExpectedCount {
        /// Comma-separated hypersurface degrees, e.g. 3,3.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,

        /// Ambient projective dimension n; defaults to k+3.
        #[arg(long)]
        ambient: Option<usize>,

        /// Also emit all Schur coefficients of the Chern product.
        #[arg(long)]
        schur: bool,
    },
    /// Construct the closed-form line families.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Expand constructed lines into orbits under the family's automorphism
    /// groups.
    Orbit {
        #[command(flatten)]
        family: FamilyArgs,

        /// Expand only the orbit of this seed (default: union of all seeds).
        #[arg(long)]
        seed_index: Option<usize>,
    },
    /// Normal-bundle splitting type of a line on a variety.
    NormalBundle {
        /// Variety JSON file ({"ambient_dim": n, "polys": [...]}).
        #[arg(long)]
        variety: PathBuf,

        /// Line JSON file ({"span": [[{re,im},...],[...]]}).
        #[arg(long)]
        line: PathBuf,
    },
    /// Certify incidence of lines against a variety.
    Verify {
        #[arg(long)]
        variety: PathBuf,

        /// JSON array of lines, or a construct report with a "solutions"
        /// field.
        #[arg(long)]
        lines: PathBuf,
    },
    /// Run every computation end to end and report pass/fail per stage.
    ReproducePaper {
        /// λ for the (3,3) pencil.
        #[arg(long, value_parser = parse_complex, default_value = "2")]
        lambda33: Scalar,

        /// λ for the (2,2,2,2) family.
        #[arg(long, value_parser = parse_complex, default_value = "2")]
        lambda2222: Scalar,

        /// μ for the (2,2,2,2) family.
        #[arg(long, value_parser = parse_complex, default_value = "3")]
        mu2222: Scalar,
    },
}

fn parse_complex(s: &str) -> Result<Scalar, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|e| format!("invalid number {p:?}: {e}"))
    };
    match parts.as_slice() {
        [re] => Ok(Scalar::new(parse(re)?, 0.0)),
        [re, im] => Ok(Scalar::new(parse(re)?, parse(im)?)),
        _ => Err("expected RE or RE,IM".to_string()),
    }
}

fn emit(out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

struct FamilyData {
    variety: CompleteIntersection,
    seeds: Vec<Line>,
    solutions_json: serde_json::Value,
    warnings: Vec<String>,
    group_g: FiniteGroup,
    group_h: FiniteGroup,
    group_gh: FiniteGroup,
}

fn build_family(args: &FamilyArgs) -> Result<FamilyData, String> {
    match args.family.as_str() {
        "33" => {
            let out = lines_33(Family33Params::new(args.lambda)).map_err(|e| e.to_string())?;
            Ok(FamilyData {
                variety: build_family_33(args.lambda),
                seeds: out.solutions.iter().map(|s| s.line.clone()).collect(),
                solutions_json: serde_json::to_value(&out.solutions).unwrap(),
                warnings: out.warnings,
                group_g: generate_group(&groups::g33_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
                group_h: generate_group(&groups::h33_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
                group_gh: generate_group(&groups::gh33_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
            })
        }
        "2222" => {
            let mu = args.mu.ok_or("--mu is required for family 2222")?;
            let out =
                lines_2222(Family2222Params::new(args.lambda, mu)).map_err(|e| e.to_string())?;
            Ok(FamilyData {
                variety: build_family_2222(args.lambda, mu),
                seeds: out.solutions.iter().map(|s| s.line.clone()).collect(),
                solutions_json: serde_json::to_value(&out.solutions).unwrap(),
                warnings: out.warnings,
                group_g: generate_group(&groups::g2222_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
                group_h: generate_group(&groups::h2222_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
                group_gh: generate_group(&groups::gh2222_generators(), DEFAULT_GROUP_CAP)
                    .map_err(|e| e.to_string())?,
            })
        }
        other => Err(format!("unknown family {other:?}; use 33 or 2222")),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::ExpectedCount {
            degrees,
            ambient,
            schur,
        } => {
            if degrees.is_empty() {
                return Err("--degrees must not be empty".into());
            }
            let ambient = ambient.unwrap_or(degrees.len() + 3);
            let result = expected_lines(degrees, ambient).map_err(|e| e.to_string())?;
            let mut payload = json!({
                "degrees": degrees,
                "ambient": ambient,
            });
            match result {
                LineCount::Count(c) => {
                    println!("{c}");
                    payload["count"] = json!(c.to_string());
                }
                LineCount::DimensionMismatch {
                    grassmannian_dim,
                    chern_degree,
                } => {
                    println!(
                        "dimension mismatch: Chern degree {chern_degree} vs Grassmannian \
                         dimension {grassmannian_dim}"
                    );
                    payload["dimension_mismatch"] = json!({
                        "grassmannian_dim": grassmannian_dim,
                        "chern_degree": chern_degree,
                    });
                }
            }
            if *schur {
                let product =
                    cy_lines::schubert::chern_product(degrees).map_err(|e| e.to_string())?;
                payload["schur_coefficients"] = json!(product
                    .schur_coeffs()
                    .iter()
                    .map(|((a, b), c)| json!({ "partition": [a, b], "coeff": c.to_string() }))
                    .collect::<Vec<_>>());
            }
            if cli.out.is_some() || *schur {
                emit(&cli.out, &payload)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct { family } => {
            let data = build_family(family)?;
            let payload = json!({
                "family": family.family,
                "lambda": { "re": family.lambda.re, "im": family.lambda.im },
                "mu": family.mu.map(|m| json!({ "re": m.re, "im": m.im })),
                "count": data.seeds.len(),
                "lines": data.solutions_json,
                "warnings": data.warnings,
            });
            emit(&cli.out, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Orbit { family, seed_index } => {
            let data = build_family(family)?;
            let seeds: Vec<Line> = match seed_index {
                Some(i) => vec![data
                    .seeds
                    .get(*i)
                    .ok_or(format!("seed index {i} out of range"))?
                    .clone()],
                None => data.seeds.clone(),
            };
            let union = union_of_orbits(&seeds, &data.group_gh, &data.variety, cli.tol)
                .map_err(|e| e.to_string())?;
            let mut max_residual: f64 = 0.0;
            let mut members_json = Vec::new();
            for seed in &seeds {
                let members = orbit(seed, &data.group_gh, &data.variety, cli.tol)
                    .map_err(|e| e.to_string())?;
                for m in &members {
                    let inc = lies_on(m, &data.variety, cli.tol).map_err(|e| e.to_string())?;
                    max_residual = max_residual.max(inc.residual);
                }
                members_json.push(json!(members));
            }
            let stab_g = stabilizer(&seeds[0], &data.group_g).map_err(|e| e.to_string())?;
            let stab_h = stabilizer(&seeds[0], &data.group_h).map_err(|e| e.to_string())?;
            let payload = json!({
                "family": family.family,
                "group_orders": {
                    "G": data.group_g.order(),
                    "H": data.group_h.order(),
                    "GxH": data.group_gh.order(),
                },
                "orbit_sizes": union.orbit_sizes,
                "stabilizer_orders": { "G": stab_g.order(), "H": stab_h.order() },
                "total": union.total,
                "disjoint": union.disjoint,
                "max_incidence_residual": max_residual,
                "orbits": members_json,
            });
            emit(&cli.out, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::NormalBundle { variety, line } => {
            let x: CompleteIntersection = read_json(variety)?;
            let l: Line = read_json(line)?;
            let inc = lies_on(&l, &x, cli.tol).map_err(|e| e.to_string())?;
            if !inc.incident {
                return Err(format!(
                    "line does not lie on the variety (residual {:.3e})",
                    inc.residual
                ));
            }
            let (xt, _witness) = normalize_line_coords(&x, &l).map_err(|e| e.to_string())?;
            let m = restriction_matrix(&xt).map_err(|e| e.to_string())?;
            let outcome = minimal_syzygy_degree(&m, cli.max_t);
            let splitting = splitting_from_outcome(&outcome).map_err(|e| e.to_string())?;
            let (degree, witness, syzygy_residual) = match &outcome {
                SyzygyOutcome::Found {
                    degree,
                    witness,
                    residual,
                    ..
                } => (
                    json!(degree),
                    witness
                        .iter()
                        .map(|f| {
                            f.coeffs()
                                .iter()
                                .map(|z| json!({ "re": z.re, "im": z.im }))
                                .collect::<Vec<_>>()
                        })
                        .collect::<Vec<_>>(),
                    *residual,
                ),
                SyzygyOutcome::NotFoundUpTo(t) => (json!(format!("> {t}")), vec![], 0.0),
            };
            let payload = json!({
                "splitting": [splitting.a, splitting.b],
                "tangent_dim": splitting.tangent_dim(),
                "syzygy_degree": degree,
                "witness_coeffs": witness,
                "residuals": {
                    "incidence": inc.residual,
                    "syzygy": syzygy_residual,
                },
            });
            emit(&cli.out, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { variety, lines } => {
            let x: CompleteIntersection = read_json(variety)?;
            let raw: serde_json::Value = read_json(lines)?;
            let line_values: Vec<serde_json::Value> = if let Some(arr) = raw.as_array() {
                arr.clone()
            } else if let Some(arr) = raw.get("lines").and_then(|v| v.as_array()) {
                arr.iter()
                    .map(|v| v.get("line").cloned().unwrap_or_else(|| v.clone()))
                    .collect()
            } else if let Some(arr) = raw.get("solutions").and_then(|v| v.as_array()) {
                arr.iter()
                    .map(|v| v.get("line").cloned().unwrap_or_else(|| v.clone()))
                    .collect()
            } else {
                return Err("expected a JSON array of lines or a construct report".into());
            };
            let mut results = Vec::new();
            let mut all_incident = true;
            for (i, v) in line_values.iter().enumerate() {
                let l: Line = serde_json::from_value(v.clone())
                    .map_err(|e| format!("line {i}: {e}"))?;
                let inc = lies_on(&l, &x, cli.tol).map_err(|e| e.to_string())?;
                all_incident &= inc.incident;
                results.push(json!({
                    "index": i,
                    "incident": inc.incident,
                    "residual": inc.residual,
                }));
            }
            let payload = json!({
                "all_incident": all_incident,
                "count": results.len(),
                "lines": results,
            });
            emit(&cli.out, &payload)?;
            Ok(if all_incident {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::ReproducePaper {
            lambda33,
            lambda2222,
            mu2222,
        } => {
            let opts = ReproduceOptions {
                lambda_33: *lambda33,
                lambda_2222: *lambda2222,
                mu_2222: *mu2222,
                tol: cli.tol,
            };
            let report = reproduce_paper(&opts);
            print!("{}", summary_table(&report));
            emit(&cli.out, &serde_json::to_value(&report).unwrap())?;
            Ok(match report.first_failure {
                None => ExitCode::SUCCESS,
                Some(stage) => ExitCode::from(stage as u8),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not configure thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
