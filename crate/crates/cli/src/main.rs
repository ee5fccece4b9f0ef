//! `twistlab`: twists, word recovery, word equality and mesh braiding from the
//! command line. JSON goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 success or "true", 1 a legitimate negative answer, 2 bad
//! input, 3 an internal invariant breach.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::{json, Value};

use twistlab::acceptance::{run_suite, SuiteConfig};
use twistlab::meshbraid::divisor_boundary;
use twistlab::{
    equivalent, find_left_divisor, layer, left_divisible_by, profiles_equal, recover_word, to_decorated, twist_of_word, twist_word,
    words_equal_via_category, BraidWord, CompositionTable, DecoratedSet, DynkinDiagram, Error, Field, ProjComplex, Rational, F2, F3,
};

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "Spherical twists over ADE zigzag algebras")]
struct Cli {
    /// A2, A3, D4, D4' (flipped coloring), E6, ...
    #[arg(long, global = true, default_value = "A3")]
    diagram: String,

    #[arg(long, global = true, value_enum, default_value_t = FieldChoice::F2)]
    field: FieldChoice,

    /// Word length bound for sweeps.
    #[arg(long, global = true, default_value_t = 5)]
    max_len: usize,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldChoice {
    F2,
    F3,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Category,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply t_w to an object (default Λ) and print the minimized result.
    Twist {
        word: String,
        /// `lambda`, `P3`, `P2[-1]`, `lambda[2]`, a JSON file, or `-` for stdin.
        #[arg(long, default_value = "lambda")]
        object: String,
    },
    /// Recover a word from T_w. Given a word, runs the round trip.
    Recover {
        word: Option<String>,
        #[arg(long, conflicts_with = "word")]
        object: Option<String>,
    },
    /// Decide whether two positive words are equal in the braid monoid.
    BraidEq {
        w1: String,
        w2: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Find a second left divisor of a word by mesh braiding.
    MeshSolve {
        word: Option<String>,
        /// Decorated set JSON file, or `-` for stdin.
        #[arg(long, conflicts_with = "word")]
        set: Option<String>,
        /// The known divisor `i` (default: the first letter of the word).
        #[arg(long)]
        exclude: Option<usize>,
    },
    /// Run the acceptance sweeps.
    Selftest {
        /// Every diagram at the full acceptance scale instead of --diagram.
        #[arg(long)]
        full: bool,
        /// Replace the composition table with a broken one.
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
    /// Round trip on randomly sampled words; TWISTLAB_SEED fixes the sample.
    Sweep {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// Failure with its exit code.
struct Exit {
    code: u8,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotATwistImage(_) | Error::ZeroObject => 1,
            Error::Internal(_) => 3,
            _ => 2,
        };
        Exit { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Exit {
    Exit { code: 2, message: message.into() }
}

type Outcome = Result<(Value, String, u8), Exit>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.field {
        FieldChoice::F2 => run::<F2>(&cli),
        FieldChoice::F3 => run::<F3>(&cli),
        FieldChoice::Q => run::<Rational>(&cli),
    };
    match result {
        Ok((json, text, code)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("values serialise")),
                Format::Text | Format::Dot => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run<F: Field>(cli: &Cli) -> Outcome {
    let d: DynkinDiagram = cli.diagram.parse()?;
    match &cli.command {
        Command::Twist { word, object } => cmd_twist::<F>(cli, d, word, object),
        Command::Recover { word, object } => cmd_recover::<F>(cli, d, word.as_deref(), object.as_deref()),
        Command::BraidEq { w1, w2, mode } => cmd_braid_eq::<F>(d, w1, w2, *mode),
        Command::MeshSolve { word, set, exclude } => cmd_mesh_solve(cli, d, word.as_deref(), set.as_deref(), *exclude),
        Command::Selftest { full, corrupt_table } => cmd_selftest(cli, d, *full, *corrupt_table),
        Command::Sweep { samples } => cmd_sweep::<F>(cli, d, *samples),
    }
}

fn read_source(src: &str) -> Result<String, Exit> {
    if src == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| input_error(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(src).map_err(|e| input_error(format!("{src}: {e}")))
    }
}

fn read_json(src: &str) -> Result<Value, Exit> {
    serde_json::from_str(&read_source(src)?).map_err(|e| input_error(format!("{src}: {e}")))
}

/// `lambda`, `P<i>`, either with an optional `[n]` shift; anything else is a
/// JSON source.
fn parse_object<F: Field>(d: DynkinDiagram, spec: &str) -> Result<ProjComplex<F>, Exit> {
    let s = spec.trim();
    let (base, shift) = match s.strip_suffix(']').and_then(|t| t.split_once('[')) {
        Some((b, n)) => (b, n.trim().parse::<i64>().map_err(|_| input_error(format!("bad shift in {spec:?}")))?),
        None => (s, 0),
    };
    let obj = match base {
        "lambda" | "Lambda" | "Λ" => ProjComplex::sum_of_projectives(d),
        b if b.starts_with('P') && b[1..].parse::<usize>().is_ok() => ProjComplex::projective(d, b[1..].parse().expect("checked"))?,
        _ if shift == 0 => {
            // accept the output of `twist` as well as a bare complex
            let v = read_json(s)?;
            ProjComplex::from_json(d, v.get("complex").unwrap_or(&v))?
        }
        _ => return Err(input_error(format!("unknown object {spec:?}"))),
    };
    Ok(obj.shift(shift))
}

fn complex_text<F: Field>(x: &ProjComplex<F>) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for deg in x.degrees() {
        let names: Vec<String> = x.summands(deg).iter().map(|j| format!("P{j}")).collect();
        out.push_str(&format!("  {deg:>3}: {}\n", names.join(" + ")));
    }
    out
}

fn cmd_twist<F: Field>(cli: &Cli, d: DynkinDiagram, word: &str, object: &str) -> Outcome {
    let w = BraidWord::parse(d, word)?;
    let x = parse_object::<F>(d, object)?;
    let t = twist_word(&w, &x)?.minimize();
    let profile = t.profile();
    if cli.format == Format::Dot {
        return Err(input_error("dot output is only available for mesh-solve"));
    }
    let json = json!({"word": w.letters(), "complex": t.to_json(), "profile": profile.to_json()});
    let text = format!("t_{w}({object}) over {d}:\n{}profile {profile}\n", complex_text(&t));
    Ok((json, text, 0))
}

fn cmd_recover<F: Field>(cli: &Cli, d: DynkinDiagram, word: Option<&str>, object: Option<&str>) -> Outcome {
    if cli.format == Format::Dot {
        return Err(input_error("dot output is only available for mesh-solve"));
    }
    let (input, original) = match (word, object) {
        (Some(w), _) => {
            let w = BraidWord::parse(d, w)?;
            (twist_of_word::<F>(&w), Some(w))
        }
        (None, Some(o)) => (parse_object::<F>(d, o)?, None),
        (None, None) => (parse_object::<F>(d, "-")?, None),
    };
    let r = recover_word(&input)?;
    let verified = match &original {
        Some(w) => r.word.len() == w.len() && equivalent(&r.word, w)?,
        None => profiles_equal(&twist_of_word::<F>(&r.word), &input),
    };
    if !verified {
        return Err(Exit { code: 3, message: format!("recovered {} does not reproduce the input", r.word) });
    }
    let json = r.to_json(Some(verified));
    let text = format!("{}\nverified {verified}\n", r.word);
    Ok((json, text, 0))
}

fn cmd_braid_eq<F: Field>(d: DynkinDiagram, w1: &str, w2: &str, mode: Mode) -> Outcome {
    let a = BraidWord::parse(d, w1)?;
    let b = BraidWord::parse(d, w2)?;
    let oracle = matches!(mode, Mode::Oracle | Mode::Both).then(|| equivalent(&a, &b)).transpose()?;
    let category = matches!(mode, Mode::Category | Mode::Both).then(|| words_equal_via_category::<F>(&a, &b)).transpose()?;
    let equal = match (oracle, category) {
        (Some(x), Some(y)) if x != y => {
            return Err(Exit { code: 3, message: format!("oracle says {x}, category says {y} for {a} vs {b}") });
        }
        (Some(x), _) | (None, Some(x)) => x,
        (None, None) => unreachable!("every mode runs at least one check"),
    };
    let mut json = json!({"equal": equal});
    if let Some(x) = oracle {
        json["oracle"] = json!(x);
    }
    if let Some(y) = category {
        json["category"] = json!(y);
    }
    if mode == Mode::Both {
        json["agree"] = json!(true);
    }
    let text = format!("{a} {} {b}\n", if equal { "=" } else { "!=" });
    Ok((json, text, if equal { 0 } else { 1 }))
}

fn cmd_mesh_solve(cli: &Cli, d: DynkinDiagram, word: Option<&str>, set: Option<&str>, exclude: Option<usize>) -> Outcome {
    let s: DecoratedSet = match word {
        Some(w) => {
            let w = BraidWord::parse(d, w)?;
            let i = match exclude.or_else(|| w.letters().first().copied()) {
                Some(i) => i,
                None => return Err(input_error("the empty word has no divisor")),
            };
            d.check_vertex(i)?;
            to_decorated(&layer(&w), &divisor_boundary(&d, i))?
        }
        None => DecoratedSet::from_json(d, &read_json(set.unwrap_or("-"))?)?,
    };
    let (j, cert) = find_left_divisor(&s)?;
    let end = cert.replay(&s)?;
    let zero = end.vertices().find(|v| end.theta()[v] == 0);
    let replay_ok = zero.is_some_and(|z| z.vertex == j && Some(z.slice) == end.min_slice());
    let oracle_ok = left_divisible_by(&s.word_of(), j)?.is_some();
    if !replay_ok || !oracle_ok {
        return Err(Exit { code: 3, message: format!("divisor {j} failed verification (replay {replay_ok}, oracle {oracle_ok})") });
    }
    let json = json!({
        "divisor": j,
        "word": s.word_of().letters(),
        "moves": cert.len(),
        "braidings": cert.braidings(),
        "certificate": cert.to_json(),
        "replayed": replay_ok,
        "verified": oracle_ok,
    });
    let text = match cli.format {
        Format::Dot => end.to_dot(),
        _ => {
            let mut t = format!("s{j} left-divides {}\n", s.word_of());
            for m in &cert.moves {
                t.push_str(&format!("  {m}\n"));
            }
            t.push_str(&format!("{} moves, {} braidings, verified\n", cert.len(), cert.braidings()));
            t
        }
    };
    Ok((json, text, 0))
}

fn cmd_selftest(cli: &Cli, d: DynkinDiagram, full: bool, corrupt: bool) -> Outcome {
    let mut cfg = if full { SuiteConfig::full() } else { SuiteConfig::single(d, cli.max_len) };
    if corrupt {
        cfg.table = CompositionTable::CorruptedLoops;
    }
    let reports = run_suite(&cfg);
    let passed = reports.iter().all(|r| r.passed());
    let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    let json = json!({"passed": passed, "criteria": reports});
    Ok((json, text, if passed { 0 } else { 1 }))
}

fn cmd_sweep<F: Field>(cli: &Cli, d: DynkinDiagram, samples: usize) -> Outcome {
    let seed = match std::env::var("TWISTLAB_SEED") {
        Ok(s) => s.trim().parse::<u64>().map_err(|_| input_error(format!("TWISTLAB_SEED={s:?} is not an integer")))?,
        Err(_) => 0,
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let n = d.rank();
    let words: Vec<BraidWord> = (0..samples)
        .map(|_| {
            let len = rng.gen_range(0..=cli.max_len);
            let letters = (0..len).map(|_| rng.gen_range(1..=n)).collect();
            BraidWord::new(d, letters).expect("letters are vertices")
        })
        .collect();
    let failures: Vec<String> = words
        .par_iter()
        .filter_map(|w| match recover_word(&twist_of_word::<F>(w)) {
            Ok(r) if r.word.len() == w.len() && equivalent(&r.word, w).unwrap_or(false) => None,
            Ok(r) => Some(format!("{w} recovered as {}", r.word)),
            Err(e) => Some(format!("{w}: {e}")),
        })
        .collect();
    let json = json!({"seed": seed, "samples": samples, "failures": failures});
    let mut text = format!("seed {seed}: {} samples, {} failures\n", samples, failures.len());
    for f in &failures {
        text.push_str(&format!("  {f}\n"));
    }
    Ok((json, text, if failures.is_empty() { 0 } else { 3 }))
}
