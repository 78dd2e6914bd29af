use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use openbook::factorsearch::{peel_boundary, search_positive, SearchOptions, SearchOutcome, SearchProblem};
use openbook::homology::h1_of_word;
use openbook::kirby::{blow_down, h1_of_link, seifert_presentation, substitute_chain, FramedLinkPresentation, SeifertData};
use openbook::mcg::{boundary_exponent_delta, equal_classes, evaluate};
use openbook::surgery::{admissible_surgery, inadmissible_surgery, neg_continued_fraction};
use openbook::{OpenBook, Rational, Surface, TwistWord};

/// Exit status when a search finishes without finding a factorisation.
const EXIT_EXHAUSTED: u8 = 2;

#[derive(Parser)]
#[command(name = "openbook", version, about = "Open book monodromies: surgery, homology and factorisation search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negative continued fraction of a rational r < -1.
    Cf {
        #[arg(allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        json: bool,
    },
    /// Transverse surgery on a binding component (admissible for r < -1,
    /// inadmissible for r > 0).
    Surgery {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Binding component label (boundary index for a fresh open book).
        #[arg(long = "K", default_value = "1")]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        /// Number of negative twists for inadmissible surgery.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// First homology of the 3-manifold of an open book.
    H1 {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a word: images of the generators and homology actions.
    Eval {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether two words give the same mapping class.
    Equal {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Search for a positive factorisation over a curve alphabet.
    Search {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Word whose class is the target.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Space-separated curve names, in search order.
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        max_length: usize,
        #[arg(long, default_value_t = 3)]
        linear_depth: usize,
        #[arg(long)]
        no_prune_boundary: bool,
        #[arg(long)]
        no_prune_linear: bool,
        #[arg(long)]
        no_memo: bool,
        #[arg(long)]
        no_suffix_table: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Surgery presentation and homology of M(e0; r1, r2, r3).
    Seifert {
        #[arg(long, allow_hyphen_values = true)]
        e0: i64,
        /// Three comma-separated invariants in (0, 1], e.g. 1/2,1/3,1/4.
        #[arg(long)]
        r: String,
    },
    /// Homology and moves on a framed link given by linking data.
    Kirby {
        /// Comma-separated surgery coefficients.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Linking pairs `i-j:lk` (1-based).
        #[arg(long = "link", allow_hyphen_values = true)]
        links: Vec<String>,
        /// Blow down this component (label) before reporting.
        #[arg(long)]
        blow_down: Option<String>,
        /// Replace this component (label) by its integer chain.
        #[arg(long)]
        chain: Option<String>,
    },
    /// Run the relation and consistency checks of a catalog.
    Validate {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
    /// Print a catalog in the JSON schema accepted by --config.
    Export {
        #[command(flatten)]
        surface: SurfaceArgs,
    },
}

#[derive(Args)]
struct SurfaceArgs {
    /// Builtin surface: sigma11 or sigma12.
    #[arg(long)]
    surface: Option<String>,
    /// Catalog file in the JSON schema printed by `export`.
    #[arg(long, conflicts_with = "surface")]
    config: Option<PathBuf>,
}

impl SurfaceArgs {
    fn load(&self) -> Result<Surface> {
        match (&self.surface, &self.config) {
            (Some(name), None) => Ok(Surface::load_builtin(name)?),
            (None, Some(path)) => load_config(path),
            _ => bail!("pass exactly one of --surface or --config"),
        }
    }
}

/// Reads a catalog file and refuses it unless every validation check passes.
fn load_config(path: &PathBuf) -> Result<Surface> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let surface = Surface::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    let report = surface.validate_catalog()?;
    if let Some(fail) = report.first_failure() {
        bail!("catalog validation failed: {} {}", fail.name, fail.detail);
    }
    Ok(surface)
}

fn parse_rational(s: &str) -> Result<Rational> {
    Ok(s.parse::<Rational>()?)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Cf { r, json } => {
            let r = parse_rational(&r)?;
            let cf = neg_continued_fraction(r)?;
            if json {
                println!("{}", json!({ "r": r.to_string(), "entries": cf.entries(), "display": cf.to_string() }));
            } else {
                println!("{cf}");
            }
        }
        Command::Surgery { surface, word, k, r, n, json } => {
            let surface = surface.load()?;
            let word = TwistWord::parse_on(&surface, &word)?;
            let r = parse_rational(&r)?;
            let ob = OpenBook::new(surface, word)?;
            let out = if r.numer() > 0 {
                inadmissible_surgery(&ob, &k, r, n)?
            } else {
                if n.is_some() {
                    bail!("--n only applies to inadmissible surgery (r > 0)");
                }
                admissible_surgery(&ob, &k, r)?
            };
            if json {
                let v = json!({
                    "surface": out.surface.name,
                    "word": out.word.to_string(),
                    "bindings": out.bindings,
                });
                println!("{v}");
            } else {
                println!("surface: {}", out.surface.name);
                println!("word: {}", out.word);
            }
        }
        Command::H1 { surface, word, json } => {
            let surface = surface.load()?;
            let word = TwistWord::parse_on(&surface, &word)?;
            let h = h1_of_word(&surface, &word)?;
            if json {
                println!("{}", json!({ "free_rank": h.free_rank, "torsion": h.torsion, "display": h.to_string() }));
            } else {
                println!("H1: {h}");
            }
        }
        Command::Eval { surface, word } => {
            let surface = surface.load()?;
            let word = TwistWord::parse_on(&surface, &word)?;
            let class = evaluate(&surface, &word)?;
            let names = surface.spec.letter_names();
            println!("word: {word}");
            match &class.exact {
                Some(aut) => {
                    println!("images:");
                    for (n, img) in names.iter().zip(aut.images()) {
                        println!("  {n} -> {}", img.render(&names));
                    }
                }
                None => println!("images: unavailable (linear data only)"),
            }
            print!("M:\n{}R:\n{}D:\n{}", class.linear.m, class.linear.r, class.linear.d);
            if surface.spec.boundary_count() >= 2 {
                if let Ok(d) = boundary_exponent_delta(&surface, &word, 2, 1) {
                    println!("delta(2,1): {d}");
                }
                if let Ok(p) = peel_boundary(&surface, &word) {
                    println!("peeled: {}", p.residual_word);
                }
            }
            println!("H1: {}", h1_of_word(&surface, &word)?);
        }
        Command::Equal { surface, first, second } => {
            let surface = surface.load()?;
            let a = evaluate(&surface, &TwistWord::parse_on(&surface, &first)?)?;
            let b = evaluate(&surface, &TwistWord::parse_on(&surface, &second)?)?;
            println!("equal: {}", equal_classes(&a, &b)?);
        }
        Command::Search {
            surface,
            word,
            alphabet,
            max_length,
            linear_depth,
            no_prune_boundary,
            no_prune_linear,
            no_memo,
            no_suffix_table,
            parallel,
            json,
        } => {
            let surface = surface.load()?;
            let word = TwistWord::parse_on(&surface, &word)?;
            let alphabet: Vec<String> = alphabet.split_whitespace().map(String::from).collect();
            if alphabet.is_empty() {
                bail!("empty alphabet");
            }
            let problem = SearchProblem::from_word(&surface, &word, alphabet, max_length)?;
            let options = SearchOptions {
                prune_boundary: !no_prune_boundary,
                prune_linear: !no_prune_linear,
                linear_depth,
                memo: !no_memo,
                suffix_table: !no_suffix_table,
                parallel,
            };
            let outcome = search_positive(&problem, &options)?;
            if json {
                let mut v = serde_json::to_value(outcome.certificate())?;
                if let Some(w) = outcome.word() {
                    v["word"] = json!(w.to_string());
                }
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                if let Some(w) = outcome.word() {
                    println!("word: {w}");
                }
                print!("{}", outcome.certificate());
            }
            if let SearchOutcome::Exhausted(_) = outcome {
                return Ok(EXIT_EXHAUSTED);
            }
        }
        Command::Seifert { e0, r } => {
            let parts: Vec<Rational> = r.split(',').map(parse_rational).collect::<Result<_>>()?;
            let r: [Rational; 3] =
                parts.try_into().map_err(|_| anyhow!("expected exactly three Seifert invariants"))?;
            let data = SeifertData::new(e0, r)?;
            let link = seifert_presentation(&data);
            print!("{link}");
            println!("H1: {}", h1_of_link(&link));
        }
        Command::Kirby { coeffs, links, blow_down: down, chain } => {
            let refs: Vec<&str> = links.iter().map(String::as_str).collect();
            let mut link = FramedLinkPresentation::parse(&coeffs, &refs)?;
            if let Some(label) = chain {
                let i = link.index_of(&label)?;
                link = substitute_chain(&link, i)?;
            }
            if let Some(label) = down {
                let i = link.index_of(&label)?;
                link = blow_down(&link, i)?;
            }
            print!("{link}");
            println!("H1: {}", h1_of_link(&link));
        }
        Command::Validate { surface } => {
            let surface = match (&surface.surface, &surface.config) {
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    Surface::from_json(&text)?
                }
                _ => surface.load()?,
            };
            let report = surface.validate_catalog()?;
            print!("{}", report.render());
            if let Some(fail) = report.first_failure() {
                bail!("catalog validation failed: {}", fail.name);
            }
        }
        Command::Export { surface } => {
            print!("{}", surface.load()?.to_json());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
