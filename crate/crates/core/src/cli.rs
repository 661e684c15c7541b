//! Command-line front end: subcommands, JSON I/O and exit codes.
//!
//! Exit codes: 0 success or verified, 2 verification violation, 3 nothing
//! found (oracle exhausted, no witness, no certificate), 4 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::antiap::{diagonalize, verify_hitting, DiagonalState};
use crate::chains::{
    build_chain, build_htplus_prefix, build_word_chain, verify_chain, verify_htplus, verify_word_chain, BuildOptions,
    ChainFamily, StructureKind, WitnessChain, WordChain, WordChainFamily, XMatrix,
};
use crate::error::Error;
use crate::fg::{build_alpha_h, verify_alpha_h, AlphaH, SeqFamily, TargetAssignment};
use crate::foundation::{GroundWindow, WindowSet};
use crate::rado::{
    columns_condition, find_image_in_set, find_kernel_in_set, first_entries_condition, verify_certificate,
    RationalMatrix,
};
use crate::sumsets::DyadicOracle;
use crate::words::{
    find_variable_word, hj_line_free_coloring, infinite_alphabet_color, refute_line, Ordinal, VariableWord, Word,
    WordSet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ramsey", version, about = "Greedy Ramsey-chain constructors and exact verifiers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witness chains over families of large sets.
    #[command(subcommand)]
    Chains(ChainsCmd),
    /// Partition regularity of rational matrices.
    #[command(subcommand)]
    Rado(RadoCmd),
    /// Words, combinatorial lines and ordinal letters.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Two sequences meeting every infinite arithmetic progression.
    #[command(subcommand)]
    Antiap(AntiapCmd),
    /// The alpha/H construction over a finite family of sequences.
    #[command(subcommand)]
    Fg(FgCmd),
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the JSON artifact here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ChainsCmd {
    /// Build a witness chain for a family (numeric or word family).
    Build {
        #[arg(long)]
        family: PathBuf,
        /// ap, fs, image or kernel (ignored for word families).
        #[arg(long, default_value = "ap")]
        kind: String,
        /// Per-index lengths for ap and fs, comma separated.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
        /// Matrix JSON for image and kernel: one matrix or a list, one per index.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Oracle depth, overriding the family file.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, default_value_t = BuildOptions::default().x_max)]
        x_max: u64,
        /// Candidate evaluations per stage.
        #[arg(long, default_value_t = BuildOptions::default().budget)]
        budget: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify a witness chain (plain chain or certificate).
    Verify {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        witness: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build an I x J prefix of the two-index construction.
    HtplusBuild {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        depth: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify a two-index prefix (plain matrix or certificate).
    HtplusVerify {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        x: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum RadoCmd {
    /// Search for a columns condition certificate.
    Columns {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the first entries condition.
    FirstEntries {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Least x with every entry of M x in the set.
    Image(MatrixSearch),
    /// Least x in the set with M x = 0.
    Kernel(MatrixSearch),
}

#[derive(Args, Debug)]
struct MatrixSearch {
    #[arg(long)]
    matrix: PathBuf,
    /// Target set JSON; defaults to the whole window [1..n_max].
    #[arg(long)]
    set: Option<PathBuf>,
    #[arg(long, default_value_t = 1 << 16)]
    n_max: u64,
    #[arg(long, default_value_t = 64)]
    x_max: u64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Subcommand, Debug)]
enum WordsCmd {
    /// Exhaustive line check for r-colorings of {1..t}^n.
    Hj {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Least variable word whose line lies in a word set.
    FindLine {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        alphabet: Vec<u32>,
        #[arg(long)]
        max_len: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Parity of an ordinal given in normal form, e.g. '[[1,2],[0,3]]'.
    Parity {
        #[arg(long)]
        ordinal: String,
    },
    /// Color of a word over ordinals.
    Color {
        #[arg(long)]
        word: PathBuf,
    },
    /// Two substitutions of a variable word with different colors.
    RefuteLine {
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum AntiapCmd {
    Build {
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        out: OutArg,
    },
    Verify {
        #[arg(long)]
        state: PathBuf,
        /// Number of progressions to check; defaults to every stage.
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum FgCmd {
    Build {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long, default_value_t = DyadicOracle::DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = 1024)]
        a_max: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verify alpha/H (certificate, or family + targets + alpha-h).
    Verify {
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        targets: Option<PathBuf>,
        #[arg(long)]
        alpha_h: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Outcome {
    code: i32,
    artifact: Option<Value>,
    out: Option<PathBuf>,
    summary: String,
}

impl Outcome {
    fn new(code: i32, artifact: Value, out: &OutArg, summary: impl Into<String>) -> Self {
        Outcome {
            code,
            artifact: Some(artifact),
            out: out.out.clone(),
            summary: summary.into(),
        }
    }

    fn verdict(passed: bool, artifact: Value, out: &OutArg, what: &str, violations: usize) -> Self {
        if passed {
            Outcome::new(EXIT_OK, artifact, out, format!("{what}: verified"))
        } else {
            Outcome::new(EXIT_VIOLATION, artifact, out, format!("{what}: {violations} violation(s)"))
        }
    }
}

fn read_value(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn read<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    parse(read_value(path)?, &path.display().to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("artifacts serialize")
}

/// Splits a self-contained certificate `{"family": .., key: ..}` from a
/// plain artifact, preferring an explicitly given family file.
fn certificate_parts(family: Option<&Path>, artifact: &Path, key: &str) -> CliResult<(Value, Value)> {
    let mut v = read_value(artifact)?;
    let embedded = v.as_object_mut().and_then(|o| {
        let fam = o.remove("family")?;
        Some((fam, o.remove(key)))
    });
    match (family, embedded) {
        (Some(f), Some((_, Some(inner)))) => Ok((read_value(f)?, inner)),
        (Some(f), None) => Ok((read_value(f)?, v)),
        (None, Some((fam, Some(inner)))) => Ok((fam, inner)),
        (_, Some((_, None))) => Err(Failure::Input(format!(
            "{}: certificate lacks \"{key}\"",
            artifact.display()
        ))),
        (None, None) => Err(Failure::Input(format!(
            "{}: not a certificate and no --family given",
            artifact.display()
        ))),
    }
}

fn is_word_family(v: &Value) -> bool {
    v.get("alphabet").is_some()
}

fn with_depth(family: ChainFamily, depth: Option<u32>) -> CliResult<ChainFamily> {
    match depth {
        Some(d) => Ok(ChainFamily::new(family.sets().to_vec(), d)?),
        None => Ok(family),
    }
}

fn chains(cmd: ChainsCmd) -> CliResult<Outcome> {
    match cmd {
        ChainsCmd::Build {
            family,
            kind,
            lengths,
            matrix,
            depth,
            x_max,
            budget,
            out,
        } => {
            let raw = read_value(&family)?;
            if is_word_family(&raw) {
                let mut fam: WordChainFamily = parse(raw, "family")?;
                if let Some(d) = depth {
                    fam = WordChainFamily::new(fam.alphabet(), d as usize, fam.sets().to_vec())?;
                }
                let chain = build_word_chain(&fam)?;
                let summary = format!(
                    "word chain: {}",
                    chain.words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
                );
                return Ok(Outcome::new(EXIT_OK, json!({"family": fam, "chain": chain}), &out, summary));
            }
            let fam = with_depth(parse::<ChainFamily>(raw, "family")?, depth)?;
            let k = fam.len();
            let per_index = |lengths: Vec<usize>| -> CliResult<Vec<usize>> {
                match lengths.len() {
                    0 => Err(Failure::Input("--lengths is required for this kind".into())),
                    1 => Ok(vec![lengths[0]; k]),
                    _ => Ok(lengths),
                }
            };
            let matrices = |matrix: Option<PathBuf>| -> CliResult<Vec<RationalMatrix>> {
                let path = matrix.ok_or_else(|| Failure::Input("--matrix is required for this kind".into()))?;
                let v = read_value(&path)?;
                if v.is_array() {
                    parse(v, "matrix list")
                } else {
                    Ok(vec![parse(v, "matrix")?; k])
                }
            };
            let kind = match kind.as_str() {
                "ap" => StructureKind::Ap(per_index(lengths.clone())?),
                "fs" | "fs_seq" => StructureKind::FsSeq(per_index(lengths.clone())?),
                "image" => StructureKind::Image(matrices(matrix)?),
                "kernel" => StructureKind::Kernel(matrices(matrix)?),
                other => return Err(Failure::Input(format!("unknown kind {other:?}"))),
            };
            let chain = build_chain(&fam, &kind, &BuildOptions { x_max, budget })?;
            let summary = format!("{} chain of length {k}: built and verified", kind.name());
            Ok(Outcome::new(EXIT_OK, json!({"family": fam, "chain": chain}), &out, summary))
        }
        ChainsCmd::Verify { family, witness, out } => {
            let (fam, chain) = certificate_parts(family.as_deref(), &witness, "chain")?;
            if is_word_family(&fam) {
                let fam: WordChainFamily = parse(fam, "family")?;
                let chain: WordChain = parse(chain, "chain")?;
                let report = verify_word_chain(&fam, &chain)?;
                let n = report.violations.len();
                return Ok(Outcome::verdict(report.passed, to_value(&report), &out, "word chain", n));
            }
            let fam: ChainFamily = parse(fam, "family")?;
            let chain: WitnessChain = parse(chain, "chain")?;
            let report = verify_chain(&fam, &chain)?;
            let n = report.violations.len();
            Ok(Outcome::verdict(report.passed, to_value(&report), &out, "chain", n))
        }
        ChainsCmd::HtplusBuild {
            family,
            rows,
            cols,
            depth,
            out,
        } => {
            let fam = with_depth(read::<ChainFamily>(&family)?, depth)?;
            let x = build_htplus_prefix(&fam, rows, cols)?;
            let summary = format!("{rows}x{cols} prefix: built and verified");
            Ok(Outcome::new(EXIT_OK, json!({"family": fam, "x": x}), &out, summary))
        }
        ChainsCmd::HtplusVerify { family, x, out } => {
            let (fam, x) = certificate_parts(family.as_deref(), &x, "x")?;
            let fam: ChainFamily = parse(fam, "family")?;
            let x: XMatrix = parse(x, "x")?;
            let report = verify_htplus(&fam, &x)?;
            let n = report.violations.len();
            Ok(Outcome::verdict(report.passed, to_value(&report), &out, "prefix", n))
        }
    }
}

fn rado(cmd: RadoCmd) -> CliResult<Outcome> {
    match cmd {
        RadoCmd::Columns { matrix, out } => {
            let m: RationalMatrix = read(&matrix)?;
            match columns_condition(&m)? {
                Some(cert) => {
                    let replayed = verify_certificate(&m, &cert);
                    if !replayed {
                        return Err(Error::VerificationFailed("certificate failed replay".into()).into());
                    }
                    let v = json!({"matrix": m, "holds": true, "certificate": cert});
                    Ok(Outcome::new(EXIT_OK, v, &out, "columns condition holds (certificate replayed)"))
                }
                None => Ok(Outcome::new(
                    EXIT_NOT_FOUND,
                    json!({"matrix": m, "holds": false}),
                    &out,
                    "columns condition fails for every ordered column partition",
                )),
            }
        }
        RadoCmd::FirstEntries { matrix, out } => {
            let m: RationalMatrix = read(&matrix)?;
            let fe = first_entries_condition(&m)?;
            let code = if fe.holds { EXIT_OK } else { EXIT_NOT_FOUND };
            let summary = format!("first entries condition {}", if fe.holds { "holds" } else { "fails" });
            Ok(Outcome::new(code, json!({"matrix": m, "result": fe}), &out, summary))
        }
        RadoCmd::Image(s) => matrix_search(s, "image"),
        RadoCmd::Kernel(s) => matrix_search(s, "kernel"),
    }
}

fn matrix_search(s: MatrixSearch, which: &str) -> CliResult<Outcome> {
    let m: RationalMatrix = read(&s.matrix)?;
    let set: WindowSet = match &s.set {
        Some(p) => read(p)?,
        None => WindowSet::multiples(GroundWindow::new(s.n_max)?, 1)?,
    };
    let x = if which == "image" {
        find_image_in_set(&m, &set, s.x_max)
    } else {
        find_kernel_in_set(&m, &set, s.x_max)
    };
    match x {
        Some(x) => {
            let summary = format!("{which} witness x = {x:?}");
            Ok(Outcome::new(EXIT_OK, json!({"matrix": m, "set": set, "x": x}), &s.out, summary))
        }
        None => Ok(Outcome::new(
            EXIT_NOT_FOUND,
            json!({"matrix": m, "set": set, "x": null}),
            &s.out,
            format!("no {which} witness with entries in [1..{}]", s.x_max),
        )),
    }
}

fn words(cmd: WordsCmd) -> CliResult<Outcome> {
    match cmd {
        WordsCmd::Hj { t, r, n, out } => match hj_line_free_coloring(t, r, n)? {
            None => Ok(Outcome::new(
                EXIT_OK,
                json!({"t": t, "r": r, "n": n, "forced": true}),
                &out,
                format!("every {r}-coloring of {{1..{t}}}^{n} has a monochromatic line"),
            )),
            Some(colors) => Ok(Outcome::new(
                EXIT_NOT_FOUND,
                json!({"t": t, "r": r, "n": n, "forced": false, "coloring": colors}),
                &out,
                format!("line-free {r}-coloring of {{1..{t}}}^{n} found"),
            )),
        },
        WordsCmd::FindLine {
            set,
            alphabet,
            max_len,
            out,
        } => {
            let c: WordSet = read(&set)?;
            let max_len = max_len.unwrap_or(c.max_len);
            match find_variable_word(&c, &alphabet, max_len) {
                Some(w) => {
                    let summary = format!("line found: {w}");
                    Ok(Outcome::new(EXIT_OK, json!({"alphabet": alphabet, "word": w}), &out, summary))
                }
                None => Ok(Outcome::new(
                    EXIT_NOT_FOUND,
                    json!({"alphabet": alphabet, "word": null}),
                    &out,
                    format!("no variable word of length <= {max_len} has its line in the set"),
                )),
            }
        }
        WordsCmd::Parity { ordinal } => {
            let o: Ordinal = serde_json::from_str(&ordinal).map_err(|e| Failure::Input(format!("ordinal: {e}")))?;
            Ok(Outcome {
                code: EXIT_OK,
                artifact: None,
                out: None,
                summary: format!("{o}: {}", serde_json::to_value(o.parity()).expect("plain enum").as_str().unwrap_or("")),
            })
        }
        WordsCmd::Color { word } => {
            let w: Word<Ordinal> = read(&word)?;
            let w = Word::new(w.letters().to_vec())?;
            Ok(Outcome {
                code: EXIT_OK,
                artifact: None,
                out: None,
                summary: format!("color {}", infinite_alphabet_color(&w)),
            })
        }
        WordsCmd::RefuteLine { word, out } => {
            let w: VariableWord<Ordinal> = read(&word)?;
            let refuted = refute_line(&w);
            let summary = format!(
                "substituting {} gives color {}, substituting {} gives color {}",
                refuted.even, refuted.even_color, refuted.odd, refuted.odd_color
            );
            Ok(Outcome::new(EXIT_OK, json!({"word": w, "refutation": refuted}), &out, summary))
        }
    }
}

fn antiap(cmd: AntiapCmd) -> CliResult<Outcome> {
    match cmd {
        AntiapCmd::Build { count, out } => {
            let state = diagonalize(count);
            let report = verify_hitting(&state, count)?;
            if !report.passed {
                return Err(Error::VerificationFailed(format!("{:?}", report.violations[0])).into());
            }
            Ok(Outcome::new(EXIT_OK, to_value(&state), &out, format!("{count} stages built and verified")))
        }
        AntiapCmd::Verify { state, count, out } => {
            let state: DiagonalState = read(&state)?;
            let count = count.unwrap_or(state.stages());
            let report = verify_hitting(&state, count)?;
            let n = report.violations.len();
            Ok(Outcome::verdict(report.passed, to_value(&report), &out, "hitting", n))
        }
    }
}

fn window_of(r: &TargetAssignment) -> CliResult<GroundWindow> {
    let set = r
        .values()
        .next()
        .ok_or_else(|| Failure::Input("targets are empty".into()))?;
    Ok(set.window())
}

fn fg(cmd: FgCmd) -> CliResult<Outcome> {
    match cmd {
        FgCmd::Build {
            family,
            targets,
            depth,
            a_max,
            out,
        } => {
            let fam: SeqFamily = read(&family)?;
            let r: TargetAssignment = read(&targets)?;
            let oracle = DyadicOracle::new(window_of(&r)?, depth)?;
            let ah = build_alpha_h(&fam, &r, oracle, a_max)?;
            let summary = format!("alpha/H on {} subsets: built and verified", ah.len());
            Ok(Outcome::new(
                EXIT_OK,
                json!({"family": fam, "targets": r, "alpha_h": ah}),
                &out,
                summary,
            ))
        }
        FgCmd::Verify {
            certificate,
            family,
            targets,
            alpha_h,
            out,
        } => {
            let (fam, r, ah): (SeqFamily, TargetAssignment, AlphaH) = match (certificate, family, targets, alpha_h) {
                (Some(c), None, None, None) => {
                    let mut v = read_value(&c)?;
                    let mut take = |k: &str| {
                        v.get_mut(k)
                            .map(Value::take)
                            .ok_or_else(|| Failure::Input(format!("{}: certificate lacks \"{k}\"", c.display())))
                    };
                    let (f, r, a) = (take("family")?, take("targets")?, take("alpha_h")?);
                    (parse(f, "family")?, parse(r, "targets")?, parse(a, "alpha_h")?)
                }
                (None, Some(f), Some(r), Some(a)) => (read(&f)?, read(&r)?, read(&a)?),
                _ => {
                    return Err(Failure::Input(
                        "give either --certificate or all of --family, --targets and --alpha-h".into(),
                    ))
                }
            };
            let report = verify_alpha_h(&fam, &r, &ah)?;
            let n = report.violations.len();
            let mut o = Outcome::verdict(report.passed, to_value(&report), &out, "alpha/H", n);
            o.summary = format!("{} ({} chains checked)", o.summary, report.chains_checked);
            Ok(o)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleExhausted { .. } | Error::PrefixTooShort { .. } => EXIT_NOT_FOUND,
        Error::VerificationFailed(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code. Artifacts and the summary line go to `out` unless `--out`
/// redirects the artifact to a file.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Chains(c) => chains(c),
        Command::Rado(c) => rado(c),
        Command::Words(c) => words(c),
        Command::Antiap(c) => antiap(c),
        Command::Fg(c) => fg(c),
    };
    match result {
        Ok(o) => match emit(&o, out) {
            Ok(()) => o.code,
            Err(msg) => {
                let _ = writeln!(out, "error: {msg}");
                EXIT_INPUT
            }
        },
        Err(Failure::Input(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(out, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(o: &Outcome, out: &mut dyn Write) -> std::result::Result<(), String> {
    if let Some(artifact) = &o.artifact {
        let text = serde_json::to_string_pretty(artifact).expect("values serialize");
        match &o.out {
            Some(path) => fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?,
            None => writeln!(out, "{text}").map_err(|e| e.to_string())?,
        }
    }
    writeln!(out, "{}", o.summary).map_err(|e| e.to_string())
}
