//! Command-line surface. `run` returns the exit code and the text to print,
//! so it can be exercised without spawning a process.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::Element;
use crate::basis;
use crate::error::Error;
use crate::expr::{self, AmbientContext};
use crate::forests::verify_theorem_sign;
use crate::operad::{classify, compose_raw};
use crate::rewrite::{self, term::raw_to_expr};
use crate::verify::{self, Case, DEFAULT_SEED};

/// Exit code for a failed check or internal assertion.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for malformed input.
pub const EXIT_USER: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "overlap-operad", version, about = "Normal forms and compositions in the homology of non-k-overlapping discs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relations,
    Composition,
    Signs,
    Confluence,
}

#[derive(Debug, clap::Args)]
pub struct Ambient {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate, then print the expression back.
    Parse {
        #[command(flatten)]
        ambient: Ambient,
        expr: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the normal form and its degree.
    Normalize {
        #[command(flatten)]
        ambient: Ambient,
        expr: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the degree of an expression.
    Degree {
        #[command(flatten)]
        ambient: Ambient,
        expr: String,
    },
    /// Compose `a ∘_at b` into ambient k1 + k2 - 2.
    Compose {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long)]
        at: u32,
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a verification suite; exit 0 iff every case passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3])]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4])]
        k: Vec<u32>,
        /// Random expressions per (d, k) cell for the confluence suite.
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print only failing cases.
        #[arg(long)]
        failures_only: bool,
    },
    /// List the canonical monomials of one arity.
    Basis {
        #[command(flatten)]
        ambient: Ambient,
        #[arg(long)]
        degree: Option<i64>,
    },
    /// Print the sign ledger of the nested-brace expansion.
    Signs {
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug, Serialize)]
struct AmbientJson {
    d: u32,
    k: u32,
    n: u32,
}

#[derive(Debug, Serialize)]
struct TermJson {
    coeff: String,
    monomial: String,
}

#[derive(Debug, Serialize)]
pub struct ElementJson {
    ambient: AmbientJson,
    degree: Option<i64>,
    terms: Vec<TermJson>,
}

pub fn element_json(el: &Element) -> ElementJson {
    ElementJson {
        ambient: AmbientJson { d: el.ctx.d, k: el.ctx.k, n: el.ctx.n },
        degree: el.degree(),
        terms: el
            .terms()
            .map(|(m, c)| TermJson { coeff: c.to_string(), monomial: m.to_string() })
            .collect(),
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn user(e: Error) -> Self {
        Outcome { code: EXIT_USER, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

fn degree_text(el: &Element) -> String {
    match el.degree() {
        Some(g) => g.to_string(),
        None if el.is_zero() => "none (zero)".into(),
        None => "mixed".into(),
    }
}

fn class_text(el: &Element) -> String {
    match classify(el) {
        Ok(c) => c.to_string(),
        Err(Error::ZeroElement) => "zero".into(),
        Err(e) => e.to_string(),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn context(a: &Ambient) -> Result<AmbientContext, Error> {
    AmbientContext::new(a.d, a.k, a.n)
}

fn render_cases(cases: &[Case], failures_only: bool) -> (bool, String) {
    let mut sorted: Vec<&Case> = cases.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out = String::new();
    for c in &sorted {
        if failures_only && c.pass {
            continue;
        }
        let tag = if c.pass { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            out.push_str(&format!("{tag}  {}\n", c.id));
        } else {
            out.push_str(&format!("{tag}  {}  {}\n", c.id, c.detail));
        }
    }
    let failed = sorted.iter().filter(|c| !c.pass).count();
    out.push_str(&format!("{} cases, {} passed, {} failed\n", sorted.len(), sorted.len() - failed, failed));
    (failed == 0, out)
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { ambient, expr: text, format } => {
            let r = context(&ambient).and_then(|ctx| expr::parse(&text, &ctx));
            match r {
                Ok(e) => match format {
                    Format::Text => Outcome::ok(expr::print(&e) + "\n"),
                    Format::Json => Outcome::ok(to_json(&serde_json::json!({
                        "ambient": {"d": ambient.d, "k": ambient.k, "n": ambient.n},
                        "expr": expr::print(&e),
                    }))),
                },
                Err(e) => Outcome::user(e),
            }
        }
        Command::Normalize { ambient, expr: text, format } => {
            let r = context(&ambient).and_then(|ctx| {
                let e = expr::parse(&text, &ctx)?;
                rewrite::normalize(&e, &ctx)
            });
            match r {
                Ok(el) => match format {
                    Format::Text => Outcome::ok(format!("{el}\ndegree: {}\n", degree_text(&el))),
                    Format::Json => Outcome::ok(to_json(&element_json(&el))),
                },
                Err(e) => Outcome::user(e),
            }
        }
        Command::Degree { ambient, expr: text } => {
            let r = context(&ambient).and_then(|ctx| {
                let e = expr::parse(&text, &ctx)?;
                let raw = rewrite::lower(&e, &ctx)?;
                let degs: std::collections::BTreeSet<i64> = raw.keys().map(|t| t.degree(ctx.dim())).collect();
                Ok(degs)
            });
            match r {
                Ok(degs) if degs.len() == 1 => Outcome::ok(format!("{}\n", degs.iter().next().unwrap())),
                Ok(degs) if degs.is_empty() => Outcome::ok("none (zero)\n".into()),
                Ok(_) => Outcome::user(Error::NonHomogeneous),
                Err(e) => Outcome::user(e),
            }
        }
        Command::Compose { d, k1, n1, k2, n2, at, a, b, format } => {
            let r = (|| {
                let ca = AmbientContext::new(d, k1, n1)?;
                let cb = AmbientContext::new(d, k2, n2)?;
                let ea = expr::parse(&a, &ca)?;
                let eb = expr::parse(&b, &cb)?;
                let na = rewrite::normalize(&ea, &ca)?;
                let nb = rewrite::normalize(&eb, &cb)?;
                let (ctx, pre) = compose_raw(&rewrite::lower(&ea, &ca)?, &ca, at, &rewrite::lower(&eb, &cb)?, &cb)?;
                let result = rewrite::normalize_raw(&pre, &ctx);
                Ok::<_, Error>((na, nb, pre, result))
            })();
            match r {
                Ok((na, nb, pre, result)) => {
                    let echo = if pre.is_empty() { "0".to_string() } else { expr::print(&raw_to_expr(&pre)) };
                    match format {
                        Format::Text => Outcome::ok(format!(
                            "a: {}\nb: {}\ncomposite: {echo}\nresult: {result}\nambient: {}\ndegree: {}\n",
                            class_text(&na),
                            class_text(&nb),
                            result.ctx,
                            degree_text(&result)
                        )),
                        Format::Json => Outcome::ok(to_json(&serde_json::json!({
                            "a": class_text(&na),
                            "b": class_text(&nb),
                            "composite": echo,
                            "result": element_json(&result),
                        }))),
                    }
                }
                Err(e) => Outcome::user(e),
            }
        }
        Command::Verify { suite, d, k, random, seed, failures_only } => {
            if let Some(bad) = d.iter().find(|&&x| x < 2) {
                return Outcome::user(Error::InvalidContext(format!("d = {bad}, need d >= 2")));
            }
            if let Some(bad) = k.iter().find(|&&x| x < 3) {
                return Outcome::user(Error::InvalidContext(format!("k = {bad}, suites need k >= 3")));
            }
            let cases = match suite {
                Suite::Relations => verify::relations_suite(&d, &k),
                Suite::Composition => {
                    let mut c = verify::composition_suite(&d, &k);
                    for &dd in &d {
                        c.extend(verify::worked_examples(dd));
                    }
                    c
                }
                Suite::Signs => verify::signs_suite(&k, &d),
                Suite::Confluence => verify::confluence_suite(&d, &k, random, seed),
            };
            let (ok, text) = render_cases(&cases, failures_only);
            Outcome { code: if ok { 0 } else { EXIT_FAILURE }, stdout: text, stderr: String::new() }
        }
        Command::Basis { ambient, degree } => match context(&ambient) {
            Ok(ctx) => {
                let ms = basis::enumerate(&ctx, degree);
                let mut out: String = ms.iter().map(|m| format!("{m}\n")).collect();
                out.push_str(&format!("count: {}\n", ms.len()));
                Outcome::ok(out)
            }
            Err(e) => Outcome::user(e),
        },
        Command::Signs { k1, k2, d, format } => match verify_theorem_sign(k1, k2, d as i64) {
            Ok(t) => match format {
                Format::Json => Outcome { code: if t.agree { 0 } else { EXIT_FAILURE }, stdout: to_json(&t), stderr: String::new() },
                Format::Text => {
                    let mut out = String::new();
                    out.push_str("summand side:\n");
                    for (what, s) in &t.right.steps {
                        out.push_str(&format!("  {s:+}  {what}\n"));
                    }
                    out.push_str(&format!("  running value after reordering: {:+}\n", t.right_intersection));
                    out.push_str(&format!("  total: {:+}\n", t.right.product));
                    out.push_str("product-of-trees side:\n");
                    for (what, s) in &t.left.steps {
                        out.push_str(&format!("  {s:+}  {what}\n"));
                    }
                    out.push_str(&format!("  total: {:+}\n", t.left.product));
                    out.push_str(&format!("stated common value: {:+}\n", t.claimed));
                    out.push_str(&format!("agree: {}\n", t.agree));
                    Outcome { code: if t.agree { 0 } else { EXIT_FAILURE }, stdout: out, stderr: String::new() }
                }
            },
            Err(e) => Outcome::user(e),
        },
    }
}

/// Parses arguments and runs; clap usage errors map to exit code 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USER } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
