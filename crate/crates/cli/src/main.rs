//! Command-line front end: load algebra descriptions, run the PBW checks,
//! the deformation constructions and the staged solver, and emit
//! machine-diffable JSON reports.
//!
//! Exit codes: 0 = pass, 1 = mathematical failure, 2 = input error.

use clap::{Parser, Subcommand};
use pbwforge_core::artinschelter::{self, FamilyTag};
use pbwforge_core::exterior::increasing_subsets;
use pbwforge_core::io;
use pbwforge_core::pbw::{self, DeformationData};
use pbwforge_core::scalar::Field;
use pbwforge_core::wedgedef::{self, EvenWedgeData, OddWedgeData};
use pbwforge_core::yoneda::AInfStructure;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pbwforge", version, about = "Exact PBW-deformation engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full PBW verification of a deformation datum (J1, J2, dimensions)
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        maxdeg: usize,
        /// truncation margin; defaults to N+2
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a cubic Artin-Schelter deformation family symbolically
    SolveAs {
        /// family tag (E, H, A, S1, S1_alpha1, S1_alpha1_aMinus2, S2,
        /// S2_plus1, S2_minus1, S2prime) or "all"
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a deformation of T(V)/(Lambda^N V) and verify it
    BuildWedge {
        #[arg(long)]
        v: usize,
        #[arg(long = "big-n")]
        n: usize,
        /// seed for randomly generated structure data (odd N only)
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file with explicit structure data (l/bracket/forms)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        allow_small_v: bool,
        #[arg(long, default_value_t = 6)]
        maxdeg: usize,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the deformed A-infinity structure and check both axiom families
    AinfCheck {
        #[arg(long)]
        input: PathBuf,
        /// degree bound for the exhaustive axiom checks; defaults to 2N+2
        #[arg(long)]
        degbound: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graded/filtered dimension table of a deformation datum
    Hilbert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        maxdeg: usize,
        #[arg(long)]
        margin: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Internal consistency battery
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(AppError::Input(msg)) => {
            eprintln!("input error: {}", msg);
            ExitCode::from(2)
        }
        Err(AppError::Math(msg)) => {
            eprintln!("failed: {}", msg);
            ExitCode::from(1)
        }
    }
}

enum AppError {
    Input(String),
    Math(String),
}

impl From<io::InputError> for AppError {
    fn from(e: io::InputError) -> Self {
        AppError::Input(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Input(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, contents: &str) -> Result<(), AppError> {
    match out {
        Some(path) => io::write_atomic(path, contents)?,
        None => print!("{}", contents),
    }
    Ok(())
}

fn load(input: &PathBuf) -> Result<DeformationData, AppError> {
    let json = std::fs::read_to_string(input)?;
    Ok(io::parse_algebra(&json)?)
}

fn thread_cap() -> usize {
    std::env::var("PBWFORGE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::Verify {
            input,
            maxdeg,
            margin,
            out,
        } => {
            let data = load(&input)?;
            if !data.is_numeric() {
                return Err(AppError::Input(
                    "verify requires numeric alpha matrices (no free parameters)".into(),
                ));
            }
            let margin = margin.unwrap_or_else(|| pbw::default_margin(data.n()));
            let report = pbw::pbw_verify(&data, maxdeg, margin)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let mut text =
                serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::SolveAs { family, out } => {
            if family == "all" {
                let tags: Vec<FamilyTag> = FamilyTag::all().to_vec();
                let cap = thread_cap();
                let mut rendered: Vec<(String, String)> = Vec::new();
                // families solve independently; run them in bounded batches
                for chunk in tags.chunks(cap.max(1)) {
                    let handles: Vec<_> = chunk
                        .iter()
                        .map(|&tag| {
                            std::thread::spawn(move || -> Result<(String, String), String> {
                                let fam =
                                    artinschelter::family_data(tag).map_err(|e| e.to_string())?;
                                let table = artinschelter::staged_solve(&fam)
                                    .map_err(|e| e.to_string())?;
                                if !artinschelter::verify_table(&fam, &table)
                                    .map_err(|e| e.to_string())?
                                {
                                    return Err(format!("{}: table fails verification", tag));
                                }
                                Ok((tag.name().to_string(), artinschelter::render_table(&table)))
                            })
                        })
                        .collect();
                    for h in handles {
                        let (name, text) =
                            h.join().expect("solver thread").map_err(AppError::Math)?;
                        rendered.push((name, text));
                    }
                }
                let mut all = String::new();
                for (_, text) in &rendered {
                    all.push_str(text);
                }
                emit(&out, &all)?;
                return Ok(ExitCode::SUCCESS);
            }
            let tag = FamilyTag::parse(&family)
                .ok_or_else(|| AppError::Input(format!("unknown family '{}'", family)))?;
            let fam = artinschelter::family_data(tag)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let table =
                artinschelter::staged_solve(&fam).map_err(|e| AppError::Math(e.to_string()))?;
            if !artinschelter::verify_table(&fam, &table)
                .map_err(|e| AppError::Math(e.to_string()))?
            {
                return Err(AppError::Math("solved table fails verification".into()));
            }
            emit(&out, &artinschelter::render_table(&table))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BuildWedge {
            v,
            n,
            seed,
            input,
            allow_small_v,
            maxdeg,
            margin,
            out,
        } => {
            let field = Field::rational();
            let (datum, warned) = if n % 2 == 1 {
                let data = match &input {
                    Some(path) => parse_odd_forms(path, v, n, &field)?,
                    None => wedgedef::random_odd_data(v, n, seed.unwrap_or(0), &field),
                };
                wedgedef::build_alpha_odd(&data, &field, allow_small_v)
                    .map_err(|e| AppError::Math(e.to_string()))?
            } else {
                let data = match &input {
                    Some(path) => parse_even_forms(path, v, n, &field)?,
                    None => {
                        return Err(AppError::Input(
                            "even N needs --input with bracket and form data".into(),
                        ))
                    }
                };
                wedgedef::build_alpha_even(&data, &field, allow_small_v)
                    .map_err(|e| AppError::Math(e.to_string()))?
            };
            let margin = margin.unwrap_or_else(|| pbw::default_margin(n).min(3));
            let report = pbw::pbw_verify(&datum, maxdeg, margin)
                .map_err(|e| AppError::Math(e.to_string()))?;
            #[derive(Serialize)]
            struct WedgeOutput {
                small_dimension_warning: bool,
                deformation: io::AlgebraDoc,
                report: pbw::CheckReport,
            }
            let output = WedgeOutput {
                small_dimension_warning: warned,
                deformation: io::algebra_to_doc(&datum),
                report,
            };
            let mut text = serde_json::to_string_pretty(&output).expect("serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(if output.report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::AinfCheck {
            input,
            degbound,
            out,
        } => {
            let data = load(&input)?;
            let degbound = degbound.unwrap_or(2 * data.n() + 2);
            let st = AInfStructure::build(&data, degbound, true)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let a1 = st
                .check_axiom_1(degbound, false)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let a2 = st
                .check_axiom_2(degbound)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let descent = st
                .descent_check(degbound)
                .map_err(|e| AppError::Math(e.to_string()))?;
            #[derive(Serialize)]
            struct Instance {
                p: usize,
                instance: String,
                residual: String,
            }
            #[derive(Serialize)]
            struct AxiomSection {
                pass: bool,
                checked: usize,
                failures: Vec<Instance>,
            }
            #[derive(Serialize)]
            struct AinfReport {
                verdict: String,
                degbound: usize,
                b_dims: Vec<usize>,
                axiom_1: AxiomSection,
                axiom_2: AxiomSection,
                descent: AxiomSection,
                products: BTreeMap<String, Vec<Vec<String>>>,
            }
            let section = |r: &pbwforge_core::yoneda::AxiomReport| AxiomSection {
                pass: r.pass(),
                checked: r.checked,
                failures: r
                    .failures
                    .iter()
                    .map(|f| Instance {
                        p: f.p,
                        instance: f.instance.clone(),
                        residual: f.residual.clone(),
                    })
                    .collect(),
            };
            let mut products = BTreeMap::new();
            for p in 1..data.n() {
                if let Some(t) = st.m_linear_table(p) {
                    products.insert(
                        format!("m_{}", p),
                        t.iter()
                            .map(|row| row.iter().map(|c| c.to_string()).collect())
                            .collect(),
                    );
                }
            }
            let pass = a1.pass() && a2.pass() && descent.pass();
            let report = AinfReport {
                verdict: if pass { "pass" } else { "fail" }.to_string(),
                degbound,
                b_dims: (0..=5).map(|k| st.yoneda().dim_b(k)).collect(),
                axiom_1: section(&a1),
                axiom_2: section(&a2),
                descent: section(&descent),
                products,
            };
            let mut text = serde_json::to_string_pretty(&report).expect("serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Hilbert {
            input,
            maxdeg,
            margin,
            out,
        } => {
            let data = load(&input)?;
            if !data.is_numeric() {
                return Err(AppError::Input(
                    "hilbert requires numeric alpha matrices".into(),
                ));
            }
            let margin = margin.unwrap_or_else(|| pbw::default_margin(data.n()));
            let filtered = pbw::filtered_dims_u(&data, maxdeg, margin)
                .map_err(|e| AppError::Math(e.to_string()))?;
            let graded = pbw::graded_dims_a(data.r_space(), data.field(), maxdeg);
            #[derive(Serialize)]
            struct Row {
                degree: usize,
                dim_a: u64,
                dim_a_cumulative: u64,
                dim_filtered_u: u64,
                matches: bool,
            }
            #[derive(Serialize)]
            struct HilbertReport {
                verdict: String,
                instability_warning: bool,
                rows: Vec<Row>,
            }
            let mut cum = 0;
            let rows: Vec<Row> = (0..=maxdeg)
                .map(|d| {
                    cum += graded[d];
                    Row {
                        degree: d,
                        dim_a: graded[d],
                        dim_a_cumulative: cum,
                        dim_filtered_u: filtered.dims[d],
                        matches: filtered.dims[d] == cum,
                    }
                })
                .collect();
            let report = HilbertReport {
                verdict: "ok".to_string(),
                instability_warning: !filtered.stable,
                rows,
            };
            let mut text = serde_json::to_string_pretty(&report).expect("serializes");
            text.push('\n');
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed } => selftest(seed),
    }
}

fn parse_scalar_list(
    vals: &[String],
    field: &Field,
    what: &str,
) -> Result<Vec<pbwforge_core::FieldElement>, AppError> {
    let ring = pbwforge_core::PolyRing::scalars(field);
    vals.iter()
        .map(|s| {
            pbwforge_core::expr::parse_scalar(&ring, s)
                .map_err(|e| AppError::Input(format!("{}: '{}': {}", what, s, e)))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct OddFormsDoc {
    l: Vec<String>,
    #[serde(default)]
    forms: BTreeMap<String, Vec<String>>,
}

#[derive(serde::Deserialize)]
struct EvenFormsDoc {
    bracket: Vec<Vec<String>>,
    #[serde(default)]
    forms: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    top_form: Option<Vec<String>>,
}

fn parse_forms_map(
    forms: &BTreeMap<String, Vec<String>>,
    field: &Field,
) -> Result<BTreeMap<usize, Vec<pbwforge_core::FieldElement>>, AppError> {
    let mut out = BTreeMap::new();
    for (k, vals) in forms {
        let deg: usize = k
            .parse()
            .map_err(|_| AppError::Input(format!("form degree '{}' is not a number", k)))?;
        out.insert(deg, parse_scalar_list(vals, field, &format!("form {}", k))?);
    }
    Ok(out)
}

fn parse_odd_forms(
    path: &PathBuf,
    v: usize,
    n: usize,
    field: &Field,
) -> Result<OddWedgeData, AppError> {
    let json = std::fs::read_to_string(path)?;
    let doc: OddFormsDoc =
        serde_json::from_str(&json).map_err(|e| AppError::Input(e.to_string()))?;
    Ok(OddWedgeData {
        v,
        n,
        l: parse_scalar_list(&doc.l, field, "linear form")?,
        forms: parse_forms_map(&doc.forms, field)?,
    })
}

fn parse_even_forms(
    path: &PathBuf,
    v: usize,
    n: usize,
    field: &Field,
) -> Result<EvenWedgeData, AppError> {
    let json = std::fs::read_to_string(path)?;
    let doc: EvenFormsDoc =
        serde_json::from_str(&json).map_err(|e| AppError::Input(e.to_string()))?;
    let expected_rows = increasing_subsets(v, 2).len();
    if doc.bracket.len() != expected_rows {
        return Err(AppError::Input(format!(
            "bracket has {} rows, expected {}",
            doc.bracket.len(),
            expected_rows
        )));
    }
    let mut bracket = Vec::with_capacity(expected_rows);
    for row in &doc.bracket {
        bracket.push(parse_scalar_list(row, field, "bracket")?);
    }
    Ok(EvenWedgeData {
        v,
        n,
        bracket,
        forms: parse_forms_map(&doc.forms, field)?,
        top_form: match &doc.top_form {
            None => None,
            Some(vals) => Some(parse_scalar_list(vals, field, "top form")?),
        },
    })
}

fn selftest(seed: u64) -> Result<ExitCode, AppError> {
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool| {
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        all_ok &= ok;
    };
    check(
        "sign table N=3",
        pbwforge_core::yoneda::sign_table(3) == vec![-1, -1, 1, 1],
    );
    check(
        "exact sequence (v,p) in {(2,2),(2,3),(3,3)}",
        pbwforge_core::freealg::exact_sequence_check(2, 2)
            && pbwforge_core::freealg::exact_sequence_check(2, 3)
            && pbwforge_core::freealg::exact_sequence_check(3, 3),
    );
    {
        let field = Field::rational();
        let data = wedgedef::random_odd_data(5, 3, seed, &field);
        let ok = match wedgedef::build_alpha_odd(&data, &field, false) {
            Ok((datum, _)) => pbw::pbw_verify(&datum, 4, 2)
                .map(|r| r.passed())
                .unwrap_or(false),
            Err(_) => false,
        };
        check("random odd wedge deformation verifies", ok);
    }
    {
        let fam = artinschelter::family_data(FamilyTag::E).map_err(|e| AppError::Math(e.to_string()))?;
        let table = artinschelter::staged_solve(&fam).map_err(|e| AppError::Math(e.to_string()))?;
        let ok = artinschelter::verify_table(&fam, &table).unwrap_or(false)
            && table.free == vec!["a11", "a21", "a3", "gamma"];
        check("type E staged solve", ok);
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
