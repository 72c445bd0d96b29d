//! `nms`: command-line front end for the flow-invariant toolkit.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use nms::census::{self, generate, parse_range, Family, AUDIT_BOUND_LIMIT};
use nms::homology::{closed_form_order, h1_match_report, h1_of_descriptor, surgery_presentation, AbelianGroup};
use nms::manifold::{
    identify, lens_homeomorphic, lens_normal_form, manifold_homeomorphic, seifert_isomorphic, Branch, LensSpace,
    ManifoldDescriptor,
};
use nms::{canonical_form, consistent, CensusWindow, FlowInvariant};

#[derive(Parser, Debug)]
#[command(name = "nms", version, about = "Invariants of twisted-saddle NMS flows and their ambient manifolds")]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check admissibility of l1,b1,l2,b2.
    Admissible {
        #[arg(allow_hyphen_values = true)]
        invariant: String,
    },
    /// Decide consistency of two invariants.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Canonical representative of the consistency class.
    Canon {
        #[arg(allow_hyphen_values = true)]
        invariant: String,
    },
    /// Ambient manifold, its normal form, branch and H1.
    Manifold {
        #[arg(allow_hyphen_values = true)]
        invariant: String,
    },
    /// H1 from the surgery model against the ambient manifold.
    Homology {
        #[arg(allow_hyphen_values = true)]
        invariant: String,
        /// +1, -1 or both.
        #[arg(long, default_value = "both", allow_hyphen_values = true)]
        saddle_sign: String,
    },
    /// Decide L(p,q) = L(p',q').
    LensHomeo {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        q: i64,
        #[arg(allow_hyphen_values = true)]
        p2: i64,
        #[arg(allow_hyphen_values = true)]
        q2: i64,
    },
    /// Decide isomorphism of two Seifert fibrations SFS((a,b),...).
    SeifertIso { a: String, b: String },
    /// Representatives of the classes over a manifold.
    Census {
        target: String,
        #[command(flatten)]
        window: WindowArgs,
        /// Also show family, template, branch and ambient manifold of each
        /// representative.
        #[arg(long)]
        audit: bool,
    },
    /// Sweep the admissible grid.
    Audit {
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Write one JSON line per admissible grid tuple.
    Catalog {
        #[command(flatten)]
        bound: BoundArg,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Args, Debug)]
struct WindowArgs {
    /// Range a..b of the parameter n.
    #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
    n: String,
    /// Range a..b of the parameter k.
    #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
    k: String,
}

#[derive(Args, Debug)]
struct BoundArg {
    /// Grid bound on |l_i| and |b_i|.
    #[arg(long, env = "NMS_AUDIT_BOUND", default_value_t = 5)]
    bound: i64,
}

enum Failure {
    /// Unparsable input: exit 2.
    Malformed(String),
    /// Well-formed input outside an operation's domain: exit 3.
    Precondition(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn precondition(e: impl std::fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

fn parse_invariant(s: &str) -> Result<FlowInvariant, Failure> {
    s.parse().map_err(|e| Failure::Malformed(format!("malformed invariant '{s}' {e}")))
}

fn parse_admissible(s: &str) -> Result<FlowInvariant, Failure> {
    let c = parse_invariant(s)?;
    c.require_admissible().map_err(precondition)?;
    Ok(c)
}

fn parse_manifold(s: &str) -> Result<ManifoldDescriptor, Failure> {
    let m: ManifoldDescriptor = s.parse().map_err(|e| Failure::Malformed(format!("malformed manifold '{s}' {e}")))?;
    m.validate().map_err(precondition)?;
    Ok(m)
}

fn parse_window(w: &WindowArgs) -> Result<CensusWindow, Failure> {
    let n = parse_range(&w.n).map_err(|e| Failure::Malformed(format!("--n: {e}")))?;
    let k = parse_range(&w.k).map_err(|e| Failure::Malformed(format!("--k: {e}")))?;
    CensusWindow::new(n, k).map_err(|e| Failure::Malformed(e.to_string()))
}

fn check_bound(bound: i64) -> Result<i64, Failure> {
    if (1..=AUDIT_BOUND_LIMIT).contains(&bound) {
        Ok(bound)
    } else {
        Err(Failure::Precondition(format!("--bound must be in 1..={AUDIT_BOUND_LIMIT}, got {bound}")))
    }
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Outcome {
    serde_json::to_writer(&mut *out, v).map_err(|e| Failure::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn sign_text(delta: i64) -> &'static str {
    if delta > 0 { "+1" } else { "-1" }
}

#[derive(Serialize)]
struct CatalogRow {
    invariant: FlowInvariant,
    canonical: FlowInvariant,
    manifold: String,
    h1: AbelianGroup,
    branch: Branch,
}

#[derive(Serialize)]
struct AuditRow {
    invariant: FlowInvariant,
    family: Family,
    template: usize,
    branch: Branch,
    manifold: ManifoldDescriptor,
    homeomorphic: bool,
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Admissible { invariant } => {
            let c = parse_invariant(&invariant)?;
            let failure = c.admissibility().err();
            if json {
                emit_json(out, &json!({
                    "invariant": c,
                    "admissible": failure.is_none(),
                    "reason": failure.map(|f| f.to_string()),
                }))?;
            } else {
                match failure {
                    None => writeln!(out, "admissible")?,
                    Some(f) => writeln!(out, "inadmissible: {f}")?,
                }
            }
        }
        Command::Equiv { a, b } => {
            let (a, b) = (parse_admissible(&a)?, parse_admissible(&b)?);
            let w = consistent(&a, &b).map_err(precondition)?;
            if json {
                emit_json(out, &json!({ "consistent": w.is_some(), "delta": w.map(|w| w.delta) }))?;
            } else {
                match w {
                    Some(w) => writeln!(out, "consistent (delta={}, shift={})", sign_text(w.delta), w.shift)?,
                    None => writeln!(out, "not consistent")?,
                }
            }
        }
        Command::Canon { invariant } => {
            let c = parse_admissible(&invariant)?;
            let canon = canonical_form(&c).map_err(precondition)?;
            if json {
                emit_json(out, &json!({ "invariant": c, "canonical": canon }))?;
            } else {
                writeln!(out, "{canon}")?;
            }
        }
        Command::Manifold { invariant } => {
            let c = parse_admissible(&invariant)?;
            let (branch, m) = identify(&c).map_err(precondition)?;
            let normal = m.normal_form().map_err(precondition)?;
            let h1 = h1_of_descriptor(&m).map_err(precondition)?;
            if json {
                emit_json(out, &json!({
                    "invariant": c,
                    "manifold": m,
                    "normal_form": normal,
                    "branch": branch,
                    "h1": h1,
                }))?;
            } else {
                writeln!(out, "manifold {m}")?;
                writeln!(out, "normal form {normal}")?;
                writeln!(out, "branch {branch}")?;
                writeln!(out, "H1 {h1}")?;
            }
        }
        Command::Homology { invariant, saddle_sign } => {
            let c = parse_admissible(&invariant)?;
            match saddle_sign.as_str() {
                "both" => {
                    let r = h1_match_report(&c).map_err(precondition)?;
                    if json {
                        emit_json(out, &r)?;
                    } else {
                        writeln!(out, "branch {} manifold {} H1 {}", r.branch, r.manifold, r.descriptor_h1)?;
                        if r.surgery.is_empty() {
                            writeln!(out, "no surgery model for this tuple")?;
                        }
                        for s in &r.surgery {
                            let verdict = if s.matches { "match" } else { "differs" };
                            writeln!(out, "saddle sign {}: H1 {} ({verdict})", sign_text(s.saddle_sign), s.h1)?;
                        }
                        writeln!(
                            out,
                            "closed-form orders: +1 -> {}, -1 -> {}",
                            r.closed_form_orders.plus, r.closed_form_orders.minus
                        )?;
                    }
                }
                text => {
                    let sign = match text {
                        "+1" | "1" => 1,
                        "-1" => -1,
                        other => {
                            return Err(Failure::Malformed(format!(
                                "--saddle-sign must be +1, -1 or both, got '{other}'"
                            )))
                        }
                    };
                    let h1 = surgery_presentation(&c, sign).map_err(precondition)?.group();
                    let order = closed_form_order(&c, sign);
                    if json {
                        emit_json(out, &json!({
                            "invariant": c,
                            "saddle_sign": sign,
                            "h1": h1,
                            "closed_form_order": order.to_string().parse::<Value>().unwrap_or(Value::Null),
                        }))?;
                    } else {
                        writeln!(out, "saddle sign {}: H1 {h1}", sign_text(sign))?;
                        writeln!(out, "closed-form order {order}")?;
                    }
                }
            }
        }
        Command::LensHomeo { p, q, p2, q2 } => {
            let a = LensSpace::new(p, q).map_err(precondition)?;
            let b = LensSpace::new(p2, q2).map_err(precondition)?;
            let same = lens_homeomorphic(&a, &b);
            let forms = [lens_normal_form(&a).map_err(precondition)?, lens_normal_form(&b).map_err(precondition)?];
            if json {
                emit_json(out, &json!({
                    "homeomorphic": same,
                    "normal_forms": [forms[0].to_string(), forms[1].to_string()],
                }))?;
            } else {
                let verdict = if same { "homeomorphic" } else { "not homeomorphic" };
                writeln!(out, "{verdict} ({} vs {})", forms[0], forms[1])?;
            }
        }
        Command::SeifertIso { a, b } => {
            let fibration = |s: &str| match parse_manifold(s)? {
                ManifoldDescriptor::Seifert(f) => Ok(f),
                _ => Err(Failure::Malformed(format!("'{s}' is not an SFS(...) descriptor"))),
            };
            let (x, y) = (fibration(&a)?, fibration(&b)?);
            let w = seifert_isomorphic(&x, &y).map_err(precondition)?;
            let euler = [x.euler_sum().map_err(precondition)?, y.euler_sum().map_err(precondition)?];
            if json {
                emit_json(out, &json!({
                    "isomorphic": w.is_some(),
                    "delta": w.as_ref().map(|w| w.delta),
                    "permutation": w.as_ref().map(|w| w.permutation.clone()),
                    "euler": [euler[0].to_string(), euler[1].to_string()],
                }))?;
            } else {
                match &w {
                    Some(w) => writeln!(out, "isomorphic (delta={}, permutation {:?})", sign_text(w.delta), w.permutation)?,
                    None => writeln!(out, "not isomorphic")?,
                }
                writeln!(out, "euler sums {} and {}", euler[0], euler[1])?;
            }
        }
        Command::Census { target, window, audit } => {
            let target = parse_manifold(&target)?;
            let window = parse_window(&window)?;
            let report = census::census(&target, &window).map_err(precondition)?;
            let mut detail = Vec::new();
            if audit {
                for r in generate(&target, &window).map_err(precondition)? {
                    let (branch, manifold) = identify(&r.invariant).map_err(precondition)?;
                    let homeomorphic = manifold_homeomorphic(&manifold, &target).map_err(precondition)?;
                    detail.push(AuditRow { invariant: r.invariant, family: r.family, template: r.template, branch, manifold, homeomorphic });
                }
            }
            if json {
                let mut v = serde_json::to_value(&report).map_err(|e| Failure::Io(e.into()))?;
                if audit {
                    v["audit"] = serde_json::to_value(&detail).map_err(|e| Failure::Io(e.into()))?;
                }
                emit_json(out, &v)?;
            } else {
                write!(out, "{}", report.render_text())?;
                for row in &detail {
                    writeln!(
                        out,
                        "  audit {} family={} template={} branch={} manifold={} {}",
                        row.invariant,
                        row.family,
                        row.template,
                        row.branch,
                        row.manifold,
                        if row.homeomorphic { "ok" } else { "MISMATCH" },
                    )?;
                }
            }
        }
        Command::Audit { bound, window } => {
            let bound = check_bound(bound.bound)?;
            let window = parse_window(&window)?;
            let report = census::audit(bound, &window).map_err(precondition)?;
            if json {
                emit_json(out, &report)?;
            } else {
                write!(out, "{}", report.render_text())?;
            }
        }
        Command::Catalog { bound, output } => {
            let bound = check_bound(bound.bound)?;
            let grid = census::admissible_grid(bound);
            let file = File::create(&output)?;
            let mut w = BufWriter::new(file);
            for c in &grid {
                let (branch, m) = identify(c).map_err(precondition)?;
                let row = CatalogRow {
                    invariant: *c,
                    canonical: canonical_form(c).map_err(precondition)?,
                    manifold: m.to_string(),
                    h1: h1_of_descriptor(&m).map_err(precondition)?,
                    branch,
                };
                serde_json::to_writer(&mut w, &row).map_err(|e| Failure::Io(e.into()))?;
                writeln!(w)?;
            }
            w.flush()?;
            if json {
                emit_json(out, &json!({ "rows": grid.len(), "path": output.display().to_string() }))?;
            } else {
                writeln!(out, "wrote {} rows to {}", grid.len(), output.display())?;
            }
        }
    }
    Ok(())
}

/// Parse `args` and run one command; returns the process exit code.
fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Malformed(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Precondition(m)) => {
            let _ = writeln!(err, "error: {m}");
            3
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = run(std::env::args_os(), &mut out, &mut io::stderr());
    let _ = out.flush();
    ExitCode::from(code)
}
