use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toposub::anyon_lab::{AnyonLab, DEFAULT_ANYON_WINDOW};
use toposub::builder::build_subsystem_code;
use toposub::catalog::{catalog_get, parse_catalog_spec};
use toposub::code::{CodeAnalysis, TorusCode, DEFAULT_WINDOW};
use toposub::theory::AnyonTheoryData;
use toposub::{Error, Result};

#[derive(Parser)]
#[command(name = "toposub", version, about = "Build and analyse translation-invariant Pauli subsystem codes on a torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a code descriptor (JSON).
    Build(Common),
    /// Counting identity and invariant suite for one or more torus sizes.
    Verify(Common),
    /// Extract the anyon theory.
    Anyons(Common),
}

#[derive(Args)]
struct Common {
    /// Catalog code, optionally `name:param` (e.g. `zN_1:5`).
    #[arg(long, group = "input")]
    catalog: Option<String>,
    /// Theory data, inline JSON or a path to a JSON file.
    #[arg(long, group = "input")]
    theory: Option<String>,
    /// Code descriptor file written by `build`.
    #[arg(long, group = "input")]
    code: Option<PathBuf>,
    /// Torus size (repeatable).
    #[arg(long = "L", value_name = "L")]
    sizes: Vec<usize>,
    /// Local window (verify: stabilizer window, anyons: strip width).
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, conflicts_with = "table")]
    json: bool,
    #[arg(long)]
    table: bool,
}

fn read_arg(text: &str) -> Result<String> {
    if text.trim_start().starts_with('{') {
        return Ok(text.to_string());
    }
    fs::read_to_string(text).map_err(|e| Error::Parse(format!("{}: {}", text, e)))
}

fn load(c: &Common, l: usize) -> Result<TorusCode> {
    if let Some(spec) = &c.catalog {
        let (name, par) = parse_catalog_spec(spec)?;
        return Ok(catalog_get(&name, par, l, l)?.0);
    }
    if let Some(t) = &c.theory {
        let data = AnyonTheoryData::from_json(&read_arg(t)?)?;
        return build_subsystem_code(&data, l, l);
    }
    if let Some(p) = &c.code {
        let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {}", p.display(), e)))?;
        let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
        let code = TorusCode::from_json(name, &text)?;
        if code.lattice.lx() == l && code.lattice.ly() == l {
            return Ok(code);
        }
        return code.resized(l, l);
    }
    Err(Error::Parse("one of --catalog, --theory or --code is required".into()))
}

fn sizes(c: &Common) -> Result<Vec<usize>> {
    if c.sizes.is_empty() {
        if c.code.is_some() {
            return Ok(vec![]);
        }
        return Err(Error::Parse("--L is required".into()));
    }
    if let Some(&l) = c.sizes.iter().find(|&&l| l < 2) {
        return Err(Error::InvalidLattice(format!("torus size {} (must be >= 2)", l)));
    }
    Ok(c.sizes.clone())
}

fn window(c: &Common, default: usize) -> Result<usize> {
    match c.window {
        Some(w) if w < 2 => Err(Error::Parse(format!("window {} (must be >= 2)", w))),
        Some(w) => Ok(w),
        None => Ok(default),
    }
}

/// Code at every requested size; a descriptor file without --L keeps its own size.
fn codes(c: &Common) -> Result<Vec<TorusCode>> {
    let ls = sizes(c)?;
    if ls.is_empty() {
        let p = c.code.as_ref().expect("checked in sizes");
        let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {}", p.display(), e)))?;
        let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
        return Ok(vec![TorusCode::from_json(name, &text)?]);
    }
    ls.iter().map(|&l| load(c, l)).collect()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(io::stdout().lock(), "{}", text);
            Ok(())
        }
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, format!("{}\n", text)).map_err(|e| Error::Parse(format!("{}: {}", p.display(), e)))
}

fn cmd_build(c: &Common) -> Result<i32> {
    let code = codes(c)?.into_iter().next().expect("at least one size");
    emit(&c.out, &code.to_json())?;
    Ok(0)
}

fn cmd_verify(c: &Common) -> Result<i32> {
    let w = window(c, DEFAULT_WINDOW)?;
    let mut reports = Vec::new();
    for code in codes(c)? {
        reports.push(CodeAnalysis::new(&code, w)?.report());
    }
    let all_hold = reports.iter().all(|r| r.identity_holds);
    let text = if c.json {
        serde_json::to_string(&reports).map_err(|e| Error::Json(e.to_string()))?
    } else {
        let mut s = format!("{:>3}  {:>28}  {:>28}  {:>20}  {:>8}  {}", "L", "dim_H", "|S|", "[G:S]", "[L:S]", "identity");
        for r in &reports {
            let l = if r.lx == r.ly { r.lx.to_string() } else { format!("{}x{}", r.lx, r.ly) };
            s.push_str(&format!(
                "\n{:>3}  {:>28}  {:>28}  {:>20}  {:>8}  {}",
                l,
                short(&r.dim_h),
                short(&r.order_s),
                short(&r.index_g_over_s),
                r.index_l_over_s,
                if r.identity_holds { "holds" } else { "FAILS" }
            ));
        }
        s
    };
    emit(&c.out, &text)?;
    if !all_hold {
        eprintln!("counting identity fails");
        return Ok(3);
    }
    Ok(0)
}

/// Long integers as the first and last six digits plus a digit count.
fn short(n: &str) -> String {
    if n.len() <= 28 {
        n.to_string()
    } else {
        format!("{}...{} ({}d)", &n[..6], &n[n.len() - 6..], n.len())
    }
}

fn cmd_anyons(c: &Common) -> Result<i32> {
    let w = window(c, DEFAULT_ANYON_WINDOW)?;
    let cs = codes(c)?;
    if cs.len() != 1 {
        return Err(Error::Parse("anyons takes exactly one --L".into()));
    }
    let a = CodeAnalysis::new(&cs[0], DEFAULT_WINDOW)?;
    let lab = AnyonLab::new(&a, w)?;
    let report = lab.report(&a);
    let rank = lab.orders.len();
    let units: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| (i == j) as i64).collect()).collect();
    let identity: Vec<bool> = report
        .anyons
        .iter()
        .map(|x| units.iter().all(|g| lab.braiding_phase(&x.label, g) == lab.braiding_from_statistics(&x.label, g)))
        .collect();
    let ok = lab.braiding_identity_holds() && identity.iter().all(|&b| b);
    let text = if c.json {
        serde_json::to_string(&report).map_err(|e| Error::Json(e.to_string()))?
    } else {
        let mut s = format!("fusion group: {}\n", report.fusion_group.iter().map(|n| format!("Z{}", n)).collect::<Vec<_>>().join(" x "));
        s.push_str(&format!("[L:S] = {}, window = {}\n", a.counting.index_l_over_s, w));
        s.push_str(&format!("{:<12} {:>5}  {:<18} {:<10} {:<11} {}", "label", "order", "theta", "detectable", "transparent", "identity"));
        for (x, id) in report.anyons.iter().zip(&identity) {
            s.push_str(&format!(
                "\n{:<12} {:>5}  {:<18} {:<10} {:<11} {}",
                format!("{:?}", x.label),
                x.order,
                x.theta.to_string(),
                x.detectable,
                x.transparent,
                if *id { "ok" } else { "FAIL" }
            ));
        }
        s.push_str("\nbraiding (generators):");
        for row in &report.braiding {
            s.push_str(&format!("\n  {}", row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("  ")));
        }
        s
    };
    emit(&c.out, &text)?;
    Ok(if ok { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Build(c) => cmd_build(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Anyons(c) => cmd_anyons(c),
    };
    match r {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
