use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use companion_basis::io::{parse_basis, parse_quiver, parse_triangulation, BasisDoc, QuiverDoc};
use companion_basis::root_lattice::positive_roots;
use companion_basis::type_a::default_end_pair;
use companion_basis::{
    classify, companion_basis_type_a, companion_basis_type_d, dimension_vectors, is_type_a, label, label_type_d,
    mutate_basis, quiver_from_triangulation, random_mutation_walk, strings_oracle, verify, Basis64, CartanType,
    ChoicePolicy, Direction, Error, Family, Labelling, Quiver, VerifyFailure,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "companion", version, about = "Companion bases for quivers of mutation type A and D")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Report the mutation type (A, or D with its structure).
    Classify(Input),
    /// Label a type-A quiver.
    Label {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        labelling: LabelFlags,
    },
    /// Label, construct and verify a companion basis.
    Basis {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        labelling: LabelFlags,
    },
    /// Check a basis against a quiver.
    Verify {
        #[command(flatten)]
        input: Input,
        /// Basis document.
        #[arg(long)]
        basis: PathBuf,
    },
    /// Mutate a quiver at a vertex.
    Mutate {
        #[command(flatten)]
        input: Input,
        /// Vertex id (0-based).
        #[arg(long)]
        at: usize,
    },
    /// Mutate a companion basis together with its quiver.
    MutateBasis {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        basis: PathBuf,
        /// Vertex id (0-based).
        #[arg(long)]
        at: usize,
        #[arg(long, value_enum)]
        direction: DirectionArg,
    },
    /// Generate a quiver by a seeded random mutation walk or from a triangulation.
    Gen(GenFlags),
    /// Dimension vectors of the positive roots in a companion basis.
    Dimvec {
        #[command(flatten)]
        input: Input,
        /// Basis document; constructed from the quiver when absent.
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Compare with the string modules of a type-A quiver.
        #[arg(long)]
        oracle: bool,
    },
    /// List the positive roots.
    Roots {
        #[arg(long = "type", value_enum)]
        family: FamilyArg,
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Args)]
struct Input {
    /// Quiver document; stdin when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct LabelFlags {
    /// Vertex id to label 1 (type A only).
    #[arg(long)]
    start: Option<usize>,
    /// Vertex id to label n (type A only).
    #[arg(long)]
    finish: Option<usize>,
    /// smallest, largest, or explicit:v1,v2,...
    #[arg(long, default_value = "smallest")]
    policy: String,
}

#[derive(Args)]
struct GenFlags {
    #[arg(long = "type", value_enum, required_unless_present = "triangulation")]
    family: Option<FamilyArg>,
    #[arg(long, required_unless_present = "triangulation")]
    rank: Option<usize>,
    /// Number of mutations.
    #[arg(long, default_value_t = 0)]
    walk: usize,
    /// Seed for the ChaCha8 generator choosing the mutation vertices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Triangulation document; replaces the random walk.
    #[arg(long, conflicts_with_all = ["family", "rank"])]
    triangulation: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "D", alias = "d")]
    D,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Inward,
    Outward,
}

/// A failed run: exit status and a JSON error document.
struct Failure {
    code: u8,
    doc: Value,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: 2, doc: json!({ "error": "malformed input", "detail": msg.to_string() }) }
    }

    fn unverified(f: &VerifyFailure) -> Self {
        Failure { code: 4, doc: json!({ "error": "verification failed", "failure": f }) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotTypeA | Error::NotTypeD(_) => {
                Failure { code: 3, doc: json!({ "error": "not mutation type A or D", "detail": e.to_string() }) }
            }
            Error::UnverifiedBasis(f) => Failure::unverified(&f),
            other => Failure::input(other),
        }
    }
}

struct Output {
    json: Value,
    text: String,
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
            Ok(s)
        }
    }
}

fn read_quiver(input: &Input) -> Result<Quiver, Failure> {
    Ok(parse_quiver(&read_input(input.input.as_deref())?, true)?)
}

fn read_basis(path: &Path) -> Result<Basis64, Failure> {
    Ok(parse_basis(&read_input(Some(path))?)?)
}

fn family(f: FamilyArg) -> Family {
    match f {
        FamilyArg::A => Family::A,
        FamilyArg::D => Family::D,
    }
}

fn row_text(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn quiver_output(q: &Quiver) -> Output {
    let doc = QuiverDoc::from_quiver(q);
    let mut text = format!("{} vertices\n", q.n());
    for [x, y] in &doc.arrows {
        text.push_str(&format!("{x} -> {y}\n"));
    }
    Output { json: serde_json::to_value(doc).expect("serializable"), text }
}

fn basis_text(doc: &BasisDoc) -> String {
    let mut text = format!("type {}{}\n", doc.cartan.family().letter(), doc.cartan.rank());
    for (i, row) in doc.basis.iter().enumerate() {
        let name = if doc.labels.is_some() { format!("beta_{}", i + 1) } else { format!("gamma_{i}") };
        text.push_str(&format!("{name}: {}\n", row_text(row)));
    }
    text
}

fn type_a_labelling(q: &Quiver, flags: &LabelFlags) -> Result<Labelling, Failure> {
    let policy: ChoicePolicy = flags.policy.parse()?;
    let (s, f) = match (flags.start, flags.finish) {
        (Some(s), Some(f)) => (s, f),
        (None, None) => default_end_pair(q)?,
        _ => return Err(Failure::input("--start and --finish go together")),
    };
    Ok(label(q, s, f, &policy)?)
}

/// Labelling and basis for a quiver of either type.
fn construct(q: &Quiver, flags: &LabelFlags) -> Result<(Labelling, Basis64), Failure> {
    if is_type_a(q) {
        let l = type_a_labelling(q, flags)?;
        let b = companion_basis_type_a(q, &l)?;
        return Ok((l, b));
    }
    if flags.start.is_some() || flags.finish.is_some() {
        return Err(Failure::input("--start and --finish apply to type A only"));
    }
    let s = classify(q)?;
    let l = label_type_d(q, &s, &flags.policy.parse()?)?;
    let b = companion_basis_type_d(q, &s, &l)?;
    Ok((l, b))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Classify(input) => {
            let q = read_quiver(&input)?;
            if is_type_a(&q) {
                return Ok(Output { json: json!({ "type": "A" }), text: format!("type A{}\n", q.n()) });
            }
            let s = classify(&q)?;
            let mut doc = json!({ "type": "D" });
            let fields = serde_json::to_value(&s).expect("serializable");
            doc.as_object_mut().expect("object").extend(fields.as_object().expect("object").clone());
            let mut text = format!("type D{}, kind {:?}", s.n, s.kind);
            if let (Some(m), Some(r)) = (s.m, s.r) {
                text.push_str(&format!(", m = {m}, r = {r}"));
            }
            text.push('\n');
            Ok(Output { json: doc, text })
        }
        Command::Label { input, labelling } => {
            let q = read_quiver(&input)?;
            let l = type_a_labelling(&q, &labelling)?;
            let text = l.labels.iter().enumerate().map(|(v, lab)| format!("{v}: {lab}\n")).collect();
            Ok(Output { json: serde_json::to_value(&l).expect("serializable"), text })
        }
        Command::Basis { input, labelling } => {
            let q = read_quiver(&input)?;
            let (l, b) = construct(&q, &labelling)?;
            verify(&q, &b).map_err(|f| Failure::unverified(&f))?;
            let doc = BasisDoc::from_basis(&b, Some(&l));
            let text = basis_text(&doc) + "verification: ok\n";
            let mut json = serde_json::to_value(doc).expect("serializable");
            json["verification"] = json!("ok");
            Ok(Output { json, text })
        }
        Command::Verify { input, basis } => {
            let q = read_quiver(&input)?;
            let b = read_basis(&basis)?;
            verify(&q, &b).map_err(|f| Failure::unverified(&f))?;
            Ok(Output { json: json!({ "verification": "ok" }), text: "verification: ok\n".into() })
        }
        Command::Mutate { input, at } => {
            let q = read_quiver(&input)?;
            Ok(quiver_output(&q.mutate(at)?))
        }
        Command::MutateBasis { input, basis, at, direction } => {
            let q = read_quiver(&input)?;
            let b = read_basis(&basis)?;
            let dir = match direction {
                DirectionArg::Inward => Direction::Inward,
                DirectionArg::Outward => Direction::Outward,
            };
            let doc = BasisDoc::from_basis(&mutate_basis(&q, &b, at, dir)?, None);
            Ok(Output { text: basis_text(&doc), json: serde_json::to_value(doc).expect("serializable") })
        }
        Command::Gen(g) => {
            let q = match (&g.triangulation, g.family, g.rank) {
                (Some(path), _, _) => quiver_from_triangulation(&parse_triangulation(&read_input(Some(path))?)?),
                (None, Some(f), Some(n)) => {
                    let seed = match f {
                        FamilyArg::A => Quiver::linear(CartanType::a(n)?.rank()),
                        FamilyArg::D => Quiver::dynkin_d(n)?,
                    };
                    random_mutation_walk(&seed, g.walk, g.seed)?.quiver
                }
                _ => return Err(Failure::input("gen needs --type and --rank, or --triangulation")),
            };
            Ok(quiver_output(&q))
        }
        Command::Dimvec { input, basis, oracle } => {
            let q = read_quiver(&input)?;
            let b = match &basis {
                Some(p) => read_basis(p)?,
                None => construct(&q, &LabelFlags { start: None, finish: None, policy: "smallest".into() })?.1,
            };
            let vectors = dimension_vectors(&q, &b)?;
            let mut json = json!({ "vectors": vectors });
            let mut text: String = vectors.iter().map(|v| row_text(v) + "\n").collect();
            if oracle {
                // strings are only available for type A
                let agrees = if is_type_a(&q) { Some(strings_oracle(&q)? == vectors) } else { None };
                json["oracle_agrees"] = json!(agrees);
                let shown = agrees.map_or("unavailable".to_string(), |a| a.to_string());
                text.push_str(&format!("oracle agrees: {shown}\n"));
            }
            Ok(Output { json, text })
        }
        Command::Roots { family: f, rank } => {
            let t = CartanType::new(family(f), rank)?;
            let roots: Vec<Vec<i64>> = positive_roots::<i64>(t).into_iter().map(|r| r.coeffs().to_vec()).collect();
            let text = roots.iter().map(|r| row_text(r) + "\n").collect();
            Ok(Output { json: json!({ "type": t, "roots": roots }), text })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let doc = json!({ "error": "malformed input", "detail": e.to_string().trim_end() });
            eprintln!("{doc}");
            return ExitCode::from(2);
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", out.json),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.doc);
            ExitCode::from(f.code)
        }
    }
}
