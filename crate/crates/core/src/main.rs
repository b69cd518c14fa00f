use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cayley_tower::error::Error;
use cayley_tower::job::{
    self, parse_beta_flag, parse_config_block, parse_manifest, CheckKind, JobConfig,
};
use cayley_tower::report::Report;

#[derive(Parser)]
#[command(
    name = "cayley-tower",
    about = "Exact Jacobians, tower polynomials and their invariants for ell-towers over Cayley graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact irreducible character table of a catalog group.
    Chartab {
        #[arg(long)]
        group: String,
        /// json or text
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the tower, compute all invariants and emit the full report.
    Tower(JobArgs),
    /// Run a subset of the identity checks; exit status 0 iff all pass.
    Verify {
        /// Any of: factorization, class-number, artin, evaluation, sum-rule,
        /// coefficient-lemma, congruence, growth, all
        #[arg(required = true)]
        which: Vec<String>,
        #[command(flatten)]
        args: JobArgs,
    },
    /// Run every job in a manifest file and emit a CSV summary.
    Batch {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct JobArgs {
    /// key = value file mirroring the flags; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    group: Option<String>,
    /// "all" for every non-identity element, or a comma list of labels.
    #[arg(long)]
    gens: Option<String>,
    /// Comma list of class-representative label:value pairs.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    precision: Option<u32>,
    /// json or text
    #[arg(long)]
    format: Option<String>,
    /// Comma list of checks for the tower report; default all.
    #[arg(long)]
    checks: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl JobArgs {
    fn into_config(self) -> Result<(JobConfig, Option<PathBuf>), Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                    line: 0,
                    message: format!("cannot read {}: {e}", path.display()),
                })?;
                let block: Vec<(usize, &str)> =
                    text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
                parse_config_block(&block)?
            }
            None => JobConfig::default(),
        };
        if let Some(group) = self.group {
            cfg.group = group;
        }
        if let Some(gens) = self.gens {
            cfg.gens = gens;
        }
        if let Some(beta) = self.beta {
            cfg.beta = parse_beta_flag(&beta)?;
        }
        if let Some(ell) = self.ell {
            cfg.ell = ell;
        }
        if let Some(levels) = self.levels {
            cfg.levels = levels;
        }
        if let Some(precision) = self.precision {
            cfg.precision = precision;
        }
        if let Some(format) = self.format {
            cfg.format = format;
        }
        if let Some(checks) = self.checks {
            if checks == "all" {
                cfg.checks = CheckKind::ALL.to_vec();
            } else {
                cfg.checks = checks
                    .split(',')
                    .map(|c| {
                        CheckKind::parse(c.trim()).ok_or_else(|| Error::Config {
                            line: 0,
                            message: format!("unknown check {c:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
            }
        }
        if cfg.group.is_empty() {
            return Err(Error::Config { line: 0, message: "--group is required".into() });
        }
        Ok((cfg, self.out))
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn render_tower_text(report: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!("group         {}\n", report.group));
    s.push_str(&format!(
        "S             r = {} ({} elements)\n",
        report.s.r,
        report.s.elements.len()
    ));
    let beta: Vec<String> =
        report.beta.iter().map(|b| format!("{}:{}", b.class_rep, b.value)).collect();
    s.push_str(&format!("beta          {}\n", beta.join(", ")));
    s.push_str(&format!("ell           {}\n", report.ell));
    if let (Some(k), Some(mu), Some(lambda)) = (report.clearing_power, report.mu, report.lambda) {
        s.push_str(&format!("clearing K    {k}\n"));
        s.push_str(&format!("f_T coeffs    [{}]\n", report.f_coeffs.join(", ")));
        s.push_str(&format!("mu, lambda    {mu}, {lambda}\n"));
    }
    if !report.tower.is_empty() {
        s.push_str("tower         n  vertices  v_ell(kappa)\n");
        for row in &report.tower {
            s.push_str(&format!(
                "              {:<2} {:<9} {}\n",
                row.n, row.vertices, row.kappa_ell_valuation
            ));
        }
    }
    for line in check_lines(report) {
        s.push_str(&format!("check         {line}\n"));
    }
    s
}

fn check_lines(report: &Report) -> Vec<String> {
    let mut lines = Vec::new();
    let c = &report.checks;
    let fmt_res = |name: &str, r: &cayley_tower::report::CheckResult| -> String {
        match &r.detail {
            Some(d) if !r.passed() => format!("{name}: {} ({d})", r.status),
            _ => format!("{name}: {}", r.status),
        }
    };
    if let Some(r) = &c.factorization {
        lines.push(fmt_res("factorization", r));
    }
    if let Some(r) = &c.class_number {
        lines.push(fmt_res("class-number", r));
    }
    if let Some(r) = &c.artin {
        lines.push(fmt_res("artin", r));
    }
    if let Some(r) = &c.evaluation {
        let conv = r.convention.as_deref().unwrap_or("-");
        match &r.detail {
            Some(d) if r.status != "pass" => {
                lines.push(format!("evaluation: {} [{}] ({d})", r.status, conv))
            }
            _ => lines.push(format!("evaluation: {} [convention {}]", r.status, conv)),
        }
    }
    if let Some(r) = &c.sum_rule {
        lines.push(fmt_res("sum-rule", r));
    }
    if let Some(r) = &c.coefficient_lemma {
        lines.push(fmt_res("coefficient-lemma", r));
    }
    if let Some(r) = &c.congruence {
        lines.push(fmt_res("congruence", r));
    }
    if let Some(r) = &c.growth {
        let extra = match (r.nu, r.n0) {
            (Some(nu), Some(n0)) => format!(" [nu {nu}, n0 {n0}]"),
            _ => String::new(),
        };
        match &r.detail {
            Some(d) if r.status != "pass" => {
                lines.push(format!("growth: {}{extra} ({d})", r.status))
            }
            _ => lines.push(format!("growth: {}{extra}", r.status)),
        }
    }
    lines
}

fn render_chartab_text(report: &cayley_tower::report::ChartabReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "group {}  order {}  exponent {}\n",
        report.group, report.order, report.exponent
    ));
    let headers: Vec<String> =
        report.classes.iter().map(|c| format!("{}({})", c.rep, c.size)).collect();
    let value_strings: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|row| row.values.iter().map(render_cyclotomic).collect())
        .collect();
    let mut width = headers.iter().map(|h| h.len()).max().unwrap_or(1);
    for row in &value_strings {
        for v in row {
            width = width.max(v.len());
        }
    }
    s.push_str(&format!("{:>6} ", "deg"));
    for h in &headers {
        s.push_str(&format!("{h:>width$} "));
    }
    s.push('\n');
    for (i, row) in value_strings.iter().enumerate() {
        s.push_str(&format!("{:>6} ", report.rows[i].degree));
        for v in row {
            s.push_str(&format!("{v:>width$} "));
        }
        s.push('\n');
    }
    s
}

fn render_cyclotomic(v: &cayley_tower::report::SerializedCyclotomic) -> String {
    // compact: rational values print bare, others as coefficient vectors
    if v.coeffs.iter().skip(1).all(|c| c == "0") {
        v.coeffs.first().cloned().unwrap_or_else(|| "0".into())
    } else {
        format!("z{}[{}]", v.m, v.coeffs.join(","))
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Chartab { group, format, out } => {
            let report = job::run_chartab(&group)?;
            let text = match format.as_str() {
                "json" => serde_json::to_string_pretty(&report).expect("serializable"),
                "text" => render_chartab_text(&report),
                other => {
                    return Err(Error::Config {
                        line: 0,
                        message: format!("unknown format {other:?}"),
                    })
                }
            };
            emit(&text, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tower(args) => {
            let (config, out) = args.into_config()?;
            let job = job::resolve(&config)?;
            let report = job::run_tower(&job);
            let text = match config.format.as_str() {
                "json" => serde_json::to_string_pretty(&report).expect("serializable"),
                "text" => render_tower_text(&report),
                other => {
                    return Err(Error::Config {
                        line: 0,
                        message: format!("unknown format {other:?}"),
                    })
                }
            };
            emit(&text, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { which, args } => {
            let (mut config, out) = args.into_config()?;
            let mut selected = Vec::new();
            for name in &which {
                if name == "all" {
                    selected = CheckKind::ALL.to_vec();
                    break;
                }
                let kind = CheckKind::parse(name).ok_or_else(|| Error::Config {
                    line: 0,
                    message: format!("unknown check {name:?}"),
                })?;
                selected.push(kind);
            }
            selected.sort_unstable();
            selected.dedup();
            config.checks = selected;
            let job = job::resolve(&config)?;
            let report = job::run_tower(&job);
            for line in check_lines(&report) {
                println!("{line}");
            }
            if let Some(path) = out {
                emit(
                    &serde_json::to_string_pretty(&report).expect("serializable"),
                    &Some(path),
                )?;
            }
            let code = job::verify_exit_code(&report);
            Ok(ExitCode::from(code as u8))
        }
        Command::Batch { manifest, out } => {
            let text = std::fs::read_to_string(&manifest).map_err(|e| Error::Config {
                line: 0,
                message: format!("cannot read {}: {e}", manifest.display()),
            })?;
            let jobs = parse_manifest(&text)?;
            let csv = job::run_batch(&jobs);
            emit(&csv, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
