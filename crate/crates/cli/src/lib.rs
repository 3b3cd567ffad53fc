//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and reports through the given streams; the binary is a thin
//! wrapper around it.
//!
//! Exit status: 0 on success, 1 when a comparison comes out false, 2 on any
//! input error (bad arguments, unreadable files, parse diagnostics, budgets).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use synctree::{
    approximant, bisimilar, bounded_bisim, branch_words, contract_scheme, delta_to_gamma,
    desugar_tilde, determinize, gamma_regular_to_right_linear, gamma_unary_to_delta, lang_equal,
    minimize, parse_lts, parse_scheme, path_language, right_linear_to_gamma_regular, seq_compose,
    unfold_lts, DetTree, Label, Lang, Scheme, Symbol, SyncTree,
};

#[derive(Parser, Debug)]
#[command(
    name = "synctree",
    version,
    about = "Recursion schemes over synchronization trees"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a scheme.
    Check { file: String },
    /// Print the n-th approximant of a scheme.
    Approx {
        file: String,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long, conflicts_with = "text")]
        dot: bool,
        #[arg(long)]
        text: bool,
    },
    /// Print the n-th Kleene iterate of the root as a term.
    Term {
        file: String,
        #[arg(short)]
        n: usize,
    },
    /// Rewrite a scheme into another signature or shape.
    Transform {
        file: String,
        #[arg(
            long,
            value_enum,
            required_unless_present = "contract",
            conflicts_with = "contract"
        )]
        to: Option<Target>,
        /// Comma-separated actions to erase.
        #[arg(long, value_delimiter = ',')]
        contract: Option<Vec<String>>,
    },
    /// Sequential composition of two schemes.
    Compose { first: String, second: String },
    /// Compare two schemes or trees. Each scheme consumes the next `-n`.
    Compare {
        first: String,
        second: String,
        #[arg(short, action = clap::ArgAction::Append)]
        n: Vec<usize>,
        /// iso, bisim, `bisim-d D` or lang.
        #[arg(long, num_args = 1..=2, required = true)]
        mode: Vec<String>,
    },
    /// Unfold an LTS from its initial state to depth d.
    LtsUnfold {
        file: String,
        #[arg(short)]
        d: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Minimize an approximant or tree up to bisimilarity.
    Minimize {
        file: String,
        #[arg(short)]
        n: Option<usize>,
    },
    /// Branch words of the canonical determinization.
    BranchWords {
        file: String,
        #[arg(short)]
        n: Option<usize>,
        /// Print the determinized tree as DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Words labelling root-to-exit paths, in shortlex order.
    Paths {
        file: String,
        #[arg(short)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Gamma,
    Delta,
    RightLinear,
    GammaRegular,
    Desugar,
}

/// An input error, reported with exit status 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

enum Input {
    Scheme(Scheme),
    Tree(SyncTree),
}

/// `arg` is a tree literal if it starts with `(`; otherwise it names a file
/// holding a tree literal or a scheme.
fn load(arg: &str) -> Result<Input, Failure> {
    let text = if arg.trim_start().starts_with('(') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure(format!("{arg}: {e}")))?
    };
    if text.trim_start().starts_with('(') {
        let t = text.trim().parse::<SyncTree>()?;
        Ok(Input::Tree(t))
    } else {
        parse_scheme(&text)
            .map(Input::Scheme)
            .map_err(|e| Failure(format!("{arg}:{e}")))
    }
}

fn load_scheme(arg: &str) -> Result<Scheme, Failure> {
    match load(arg)? {
        Input::Scheme(s) => Ok(s),
        Input::Tree(_) => Err(Failure(format!("{arg}: expected a scheme, found a tree"))),
    }
}

fn tree_of(arg: &str, n: Option<usize>) -> Result<SyncTree, Failure> {
    match load(arg)? {
        Input::Tree(t) => Ok(t),
        Input::Scheme(s) => {
            let n = n.ok_or_else(|| Failure(format!("{arg}: a scheme needs -n")))?;
            Ok(approximant(&s, n)?)
        }
    }
}

/// DOT text for a tree: vertices numbered breadth-first with siblings in
/// canonical order, exit edges labelled `!`.
pub fn render_dot(t: &SyncTree) -> String {
    let c = t.canonical_form();
    let mut out = String::from("digraph synctree {\n");
    for v in 0..c.num_vertices() {
        let _ = writeln!(out, "  n{v};");
    }
    for (u, l, v) in c.edges() {
        let _ = writeln!(out, "  n{u} -> n{v} [label=\"{}\"];", edge_label(l));
    }
    out.push_str("}\n");
    out
}

/// DOT text for a determinized tree; edges carry `(label,index)`.
pub fn render_det_dot(t: &DetTree) -> String {
    let mut out = String::from("digraph synctree {\n");
    for v in 0..t.num_vertices() {
        let _ = writeln!(out, "  n{v};");
    }
    for u in 0..t.num_vertices() {
        for (l, i, v) in t.children(u) {
            let _ = writeln!(out, "  n{u} -> n{v} [label=\"({},{i})\"];", edge_label(l));
        }
    }
    out.push_str("}\n");
    out
}

fn edge_label(l: &Label) -> String {
    match l {
        Label::Exit => "!".into(),
        Label::Action(a) => a.as_str().replace('\\', "\\\\").replace('"', "\\\""),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Check { file } => {
            let s = load_scheme(&file)?;
            let shape = if s.is_regular() {
                "regular"
            } else {
                "algebraic"
            };
            writeln!(
                out,
                "ok: {} scheme, {} equation(s), {shape}",
                s.kind(),
                s.equations.len()
            )?;
        }
        Command::Approx { file, n, dot, .. } => {
            let t = tree_of(&file, n)?;
            if dot {
                write!(out, "{}", render_dot(&t))?;
            } else {
                writeln!(out, "{t}")?;
            }
        }
        Command::Term { file, n } => {
            let s = load_scheme(&file)?;
            let t = s.expand(n)?;
            let mut text = String::new();
            t.write_with(&|i| s.equations[i].name.clone(), &mut text);
            writeln!(out, "{text}")?;
        }
        Command::Transform { file, to, contract } => {
            let s = load_scheme(&file)?;
            let r = match (to, contract) {
                (Some(Target::Gamma), _) => delta_to_gamma(&s)?,
                (Some(Target::Delta), _) => gamma_unary_to_delta(&s)?,
                (Some(Target::RightLinear), _) => gamma_regular_to_right_linear(&s)?,
                (Some(Target::GammaRegular), _) => right_linear_to_gamma_regular(&s)?,
                (Some(Target::Desugar), _) => desugar_tilde(&s)?,
                (None, Some(b)) => {
                    let b: BTreeSet<Symbol> = b.iter().map(|a| Symbol::new(a.trim())).collect();
                    contract_scheme(&s, &b)?
                }
                (None, None) => unreachable!("clap requires --to or --contract"),
            };
            write!(out, "{r}")?;
        }
        Command::Compose { first, second } => {
            let c = seq_compose(&load_scheme(&first)?, &load_scheme(&second)?)?;
            write!(out, "{c}")?;
        }
        Command::Compare {
            first,
            second,
            n,
            mode,
        } => {
            let mut stages = n.into_iter();
            let mut trees = Vec::new();
            for arg in [&first, &second] {
                trees.push(match load(arg)? {
                    Input::Tree(t) => t,
                    Input::Scheme(s) => {
                        let k = stages
                            .next()
                            .ok_or_else(|| Failure(format!("{arg}: a scheme needs -n")))?;
                        approximant(&s, k)?
                    }
                });
            }
            if stages.next().is_some() {
                return Err(Failure("more -n values than schemes".into()));
            }
            let (t1, t2) = (&trees[0], &trees[1]);
            let same = match (mode[0].as_str(), mode.get(1)) {
                ("iso", None) => t1.is_isomorphic(t2),
                ("bisim", None) => bisimilar(t1, t2),
                ("lang", None) => lang_equal(t1, t2),
                ("bisim-d", Some(d)) => {
                    let d: usize = d
                        .parse()
                        .map_err(|_| Failure(format!("bisim-d: bad depth {d:?}")))?;
                    bounded_bisim(t1, t2, d)
                }
                _ => return Err(Failure(format!("unknown mode {:?}", mode.join(" ")))),
            };
            writeln!(out, "{}", if same { "equal" } else { "different" })?;
            return Ok(if same { 0 } else { 1 });
        }
        Command::LtsUnfold { file, d, dot } => {
            let text =
                std::fs::read_to_string(&file).map_err(|e| Failure(format!("{file}: {e}")))?;
            let g = parse_lts(&text).map_err(|e| Failure(format!("{file}:{e}")))?;
            let t = unfold_lts(&g, d);
            if dot {
                write!(out, "{}", render_dot(&t))?;
            } else {
                writeln!(out, "{t}")?;
            }
        }
        Command::Minimize { file, n } => {
            writeln!(out, "{}", minimize(&tree_of(&file, n)?))?;
        }
        Command::BranchWords { file, n, dot } => {
            let d = determinize(&tree_of(&file, n)?);
            if dot {
                write!(out, "{}", render_det_dot(&d))?;
            } else {
                for w in branch_words(&d) {
                    writeln!(out, "{w}")?;
                }
            }
        }
        Command::Paths { file, n } => {
            let lang = path_language(&tree_of(&file, n)?);
            for w in lang.shortlex() {
                writeln!(out, "{}", Lang::render_word(w))?;
            }
        }
    }
    Ok(0)
}
