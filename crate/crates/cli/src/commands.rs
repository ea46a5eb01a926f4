use std::fs;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use udcp::bounds::{
    best_bound, classic_report, ineq3_value, main_bound, revalidate_certificate, verify_ineq3, warmup_bound,
    CertificateHeader, CertificateLine, Ineq3Certificate, Ineq3Constants, Ineq3Mode, Ineq3Options, Ineq3Outcome,
    MainOptions,
};
use udcp::code::{
    distance_census, extract_dense_subcode, format_code_file, format_word, parse_code_file, parse_word,
    van_tilborg_check,
};
use udcp::math::parse_rational;
use udcp::noise::{
    direct_joint_probability, exact_joint_probability, find_split, monte_carlo_joint, rng_for, rsse_check,
    sample_correlated, sandwich, CorrelationSpec, DirectCheck, SplitMode,
};
use udcp::search::{exhaustive_max_product, max_b_given_a_floor, unbalanced_frontier, Objective, SearchSpec};
use udcp::{BinaryCode, CodePair, CoordSet};

use crate::output::{digest, to_json_line, InputDigest};

#[derive(Debug, Parser)]
#[command(name = "udcp", version, about = "Uniquely decodable code pairs for the binary adder channel")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print a single JSON document instead of the indented rendering.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, env = "UDCP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    pub manifest: Option<String>,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Code file for A.
    #[arg(long)]
    pub a: String,
    /// Code file for B.
    #[arg(long)]
    pub b: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that every sum a + b is distinct.
    Verify(PairArgs),
    /// Distance census W_d of A x B, optionally restricted to a coordinate set.
    Census {
        #[command(flatten)]
        pair: PairArgs,
        /// One-based coordinates, comma separated.
        #[arg(long)]
        restrict: Option<String>,
        /// Also compare the census with the van Tilborg caps.
        #[arg(long)]
        van_tilborg: bool,
    },
    /// Exact Pr[a in A, b in B] under correlated noise.
    Prob {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        rho: f64,
        /// Correlated coordinates (one-based); the rest are independent.
        #[arg(long)]
        l: Option<String>,
        /// Cross-check by direct pair summation.
        #[arg(long)]
        direct: bool,
        /// Monte Carlo samples (0 skips sampling).
        #[arg(long, default_value_t = 0)]
        samples: u64,
        /// Density parameter; with --l, adds the finite-n bound sandwich.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Exact probability against the small-set expansion lower bound.
    RsseCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        rho: f64,
    },
    /// Find a coordinate split L with large projection of B.
    Split {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value_t = SplitArg::Exhaustive)]
        mode: SplitArg,
        /// Candidate sets drawn in sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Extract an epsilon-dense subcode of A with respect to L.
    Dense {
        #[arg(long)]
        a: String,
        #[arg(long)]
        l: String,
        /// Exact rational such as 1/10 or 0.25.
        #[arg(long)]
        epsilon: String,
        /// Write the subcode to this file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Upper bound on the rate of B when |A| = 2^((1-eps)n).
    Bound {
        #[arg(long, value_enum, default_value_t = MethodArg::Best)]
        method: MethodArg,
        #[arg(long)]
        epsilon: f64,
        /// Noise rate; optimized when omitted.
        #[arg(long)]
        rho: Option<f64>,
        /// Split fraction for the main route; worst case when omitted.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Check R(eps) < 0 on a range, by float sweep or interval certificate.
    VerifyIneq3 {
        #[arg(long, value_enum, default_value_t = ModeArg::Interval)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1e-5)]
        grid_step: f64,
        #[arg(long, default_value_t = 1e-8)]
        min_epsilon: f64,
        #[arg(long, default_value_t = 0.01)]
        max_epsilon: f64,
        #[arg(long, value_enum, default_value_t = ConstantsArg::Published)]
        constants: ConstantsArg,
        /// Write the certificate as JSON lines: a header, then one subinterval per line.
        #[arg(long)]
        out: Option<String>,
        /// Revalidate an existing certificate instead of building one.
        #[arg(long, conflicts_with = "out")]
        check: Option<String>,
        /// Point values of R, comma separated.
        #[arg(long)]
        spot: Option<String>,
    },
    /// Branch-and-bound search for optimal pairs.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MaxProduct)]
        objective: ObjectiveArg,
        #[arg(long)]
        a_floor: Option<u64>,
        /// Node budget; exit code 3 when exhausted.
        #[arg(long)]
        budget: Option<u64>,
        /// Disable symmetry reduction.
        #[arg(long)]
        no_symmetry: bool,
        /// Directory for witness code files and frontier.json.
        #[arg(long)]
        out: Option<String>,
    },
    /// Draw words correlated with x.
    Sample {
        #[arg(long)]
        x: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        l: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Census { .. } => "census",
            Command::Prob { .. } => "prob",
            Command::RsseCheck { .. } => "rsse-check",
            Command::Split { .. } => "split",
            Command::Dense { .. } => "dense",
            Command::Bound { .. } => "bound",
            Command::VerifyIneq3 { .. } => "verify-ineq3",
            Command::Search { .. } => "search",
            Command::Sample { .. } => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Exhaustive,
    Greedy,
    Sampled,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Warmup,
    Main,
    Classic,
    Best,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Float,
    Interval,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConstantsArg {
    Published,
    /// Re-derived from rho = 0.654, with +eps under the root.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    MaxProduct,
    /// Largest B for one A floor.
    MaxB,
    /// Largest B for every A floor from 2^n down to --a-floor.
    Frontier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    BudgetExhausted,
}

pub struct Context {
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Context { seed, inputs: Vec::new() }
    }

    fn read(&mut self, path: &str) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {path}"))?;
        self.inputs.push(digest(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{path} is not UTF-8"))
    }

    fn code(&mut self, path: &str) -> Result<BinaryCode> {
        let text = self.read(path)?;
        parse_code_file(&text).with_context(|| format!("in {path}"))
    }

    fn pair(&mut self, args: &PairArgs) -> Result<CodePair> {
        let a = self.code(&args.a)?;
        let b = self.code(&args.b)?;
        Ok(CodePair::new(a, b)?)
    }
}

/// Verification failures of the core library map to 2, everything else to 1.
pub fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<udcp::Error>() {
        Some(
            udcp::Error::NotVerified
            | udcp::Error::VanTilborgViolation { .. }
            | udcp::Error::CertificationFailed { .. },
        ) => 2,
        _ => 1,
    }
}

fn coords(n: usize, text: &str) -> Result<CoordSet> {
    let mut v = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        v.push(part.parse::<usize>().with_context(|| format!("bad coordinate {part:?}"))?);
    }
    Ok(CoordSet::from_one_based(n, &v)?)
}

fn floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad number {s:?}")))
        .collect()
}

fn ok(value: Value) -> Result<(Value, Status)> {
    Ok((value, Status::Ok))
}

fn check(value: Value, passed: bool) -> Result<(Value, Status)> {
    Ok((value, if passed { Status::Ok } else { Status::VerificationFailed }))
}

pub fn run(command: &Command, ctx: &mut Context) -> Result<(Value, Status)> {
    match command {
        Command::Verify(args) => verify(ctx, args),
        Command::Census { pair, restrict, van_tilborg } => census(ctx, pair, restrict.as_deref(), *van_tilborg),
        Command::Prob { pair, rho, l, direct, samples, epsilon } => {
            prob(ctx, pair, *rho, l.as_deref(), *direct, *samples, epsilon.as_deref())
        }
        Command::RsseCheck { pair, rho } => {
            let pair = ctx.pair(pair)?;
            let report = rsse_check(&pair, *rho)?;
            check(json!({ "n": pair.word_length(), "rsse": report }), report.holds)
        }
        Command::Split { pair, mode, samples, epsilon } => split(ctx, pair, *mode, *samples, *epsilon),
        Command::Dense { a, l, epsilon, out } => dense(ctx, a, l, epsilon, out.as_deref()),
        Command::Bound { method, epsilon, rho, lambda } => bound(*method, *epsilon, *rho, *lambda),
        Command::VerifyIneq3 { mode, grid_step, min_epsilon, max_epsilon, constants, out, check, spot } => {
            let options = Ineq3Options {
                mode: match mode {
                    ModeArg::Float => Ineq3Mode::Float,
                    ModeArg::Interval => Ineq3Mode::Interval,
                },
                grid_step: *grid_step,
                min_epsilon: *min_epsilon,
                max_epsilon: *max_epsilon,
                constants: match constants {
                    ConstantsArg::Published => Ineq3Constants::published(),
                    ConstantsArg::Derived => Ineq3Constants::derived(0.654)?,
                },
            };
            ineq3(ctx, &options, out.as_deref(), check.as_deref(), spot.as_deref())
        }
        Command::Search { n, objective, a_floor, budget, no_symmetry, out } => {
            search(*n, *objective, *a_floor, *budget, !*no_symmetry, out.as_deref())
        }
        Command::Sample { x, rho, l, count, stream } => sample(ctx.seed, x, *rho, l.as_deref(), *count, *stream),
    }
}

fn verify(ctx: &mut Context, args: &PairArgs) -> Result<(Value, Status)> {
    let pair = ctx.pair(args)?;
    let n = pair.word_length();
    let collision = pair.find_collision();
    let witness = collision.as_ref().map(|c| {
        eprintln!("collision: {}", c.describe(n));
        json!({
            "first": [format_word(c.first.0, n), format_word(c.first.1, n)],
            "second": [format_word(c.second.0, n), format_word(c.second.1, n)],
            "sum": c.sum,
            "text": c.describe(n),
        })
    });
    let body = json!({
        "n": n,
        "a_size": pair.a().len(),
        "b_size": pair.b().len(),
        "product": pair.product_size(),
        "udcp": collision.is_none(),
        "alpha": pair.alpha(),
        "beta": pair.beta(),
        "alpha_plus_beta": pair.alpha() + pair.beta(),
        "epsilon": pair.epsilon(),
        "collision": witness,
    });
    check(body, collision.is_none())
}

fn census(ctx: &mut Context, args: &PairArgs, restrict: Option<&str>, vt: bool) -> Result<(Value, Status)> {
    let pair = ctx.pair(args)?;
    let restriction = restrict.map(|r| coords(pair.word_length(), r)).transpose()?;
    let census = distance_census(&pair, restriction.as_ref())?;
    let mut body = json!({ "census": census });
    if vt {
        body["van_tilborg"] = serde_json::to_value(van_tilborg_check(&pair)?)?;
    }
    ok(body)
}

fn prob(
    ctx: &mut Context,
    args: &PairArgs,
    rho: f64,
    l: Option<&str>,
    direct: bool,
    samples: u64,
    epsilon: Option<&str>,
) -> Result<(Value, Status)> {
    let pair = ctx.pair(args)?;
    let n = pair.word_length();
    let l_set = l.map(|l| coords(n, l)).transpose()?;
    let spec = CorrelationSpec::new(n, rho, l_set)?;
    let mut report = exact_joint_probability(&pair, &spec)?;
    let mut passed = true;
    if direct {
        let p = direct_joint_probability(&pair, &spec);
        let relative_error = (report.probability - p).abs() / p.max(f64::MIN_POSITIVE);
        passed &= relative_error <= 1e-12;
        report.direct = Some(DirectCheck { probability: p, relative_error });
    }
    if samples > 0 {
        let mc = monte_carlo_joint(&pair, &spec, samples, ctx.seed)?;
        passed &= (mc.estimate - report.probability).abs() <= mc.radius.max(1.0 / samples as f64);
        report.monte_carlo = Some(mc);
    }
    if l_set.is_none() && pair.is_udcp() {
        report.rsse_lower_log2 = Some(rsse_check(&pair, rho)?.bound_log2);
    }
    let mut body = json!({ "probability": report });
    if let Some(eps) = epsilon {
        let Some(l_set) = &l_set else { bail!("--epsilon needs --l") };
        let s = sandwich(&pair, l_set, parse_rational(eps)?, rho)?;
        passed &= s.upper_holds && s.lower_holds;
        body["sandwich"] = serde_json::to_value(s)?;
    }
    check(body, passed)
}

fn split(
    ctx: &mut Context,
    args: &PairArgs,
    mode: SplitArg,
    samples: u64,
    eps: Option<f64>,
) -> Result<(Value, Status)> {
    let pair = ctx.pair(args)?;
    let mode = match mode {
        SplitArg::Exhaustive => SplitMode::Exhaustive,
        SplitArg::Greedy => SplitMode::Greedy,
        SplitArg::Sampled => SplitMode::Sampled { samples, seed: ctx.seed },
    };
    let report = find_split(&pair, mode, eps)?;
    // The floor is claimed only when both hypotheses hold.
    let claimed = report.fat_premise && report.density_precondition;
    let passed = !claimed || report.guarantee_met;
    check(json!({ "split": report }), passed)
}

fn dense(ctx: &mut Context, a: &str, l: &str, epsilon: &str, out: Option<&str>) -> Result<(Value, Status)> {
    let code = ctx.code(a)?;
    let l_set = coords(code.word_length(), l)?;
    let report = extract_dense_subcode(&code, &l_set, parse_rational(epsilon)?)?;
    if let Some(path) = out {
        fs::write(path, format_code_file(&report.subset)).with_context(|| format!("cannot write {path}"))?;
    }
    let dense = report.density.is_dense();
    check(json!({ "dense": report }), dense)
}

fn bound(method: MethodArg, epsilon: f64, rho: Option<f64>, lambda: Option<f64>) -> Result<(Value, Status)> {
    let report = match method {
        MethodArg::Warmup => warmup_bound(epsilon, rho)?,
        MethodArg::Main => main_bound(epsilon, &MainOptions { rho, lambda, allow_fallback: false })?,
        MethodArg::Classic => classic_report(epsilon)?,
        MethodArg::Best => {
            if rho.is_some() || lambda.is_some() {
                main_bound(epsilon, &MainOptions { rho, lambda, allow_fallback: true })?
            } else {
                best_bound(epsilon)?
            }
        }
    };
    ok(json!({ "bound": report }))
}

fn write_certificate(path: &str, cert: &Ineq3Certificate) -> Result<()> {
    let mut text = to_json_line(&cert.header)? + "\n";
    for line in &cert.lines {
        text.push_str(&to_json_line(line)?);
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("cannot write {path}"))
}

fn read_certificate(text: &str) -> Result<Ineq3Certificate> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: CertificateHeader = serde_json::from_str(lines.next().context("empty certificate")?)?;
    let lines = lines
        .enumerate()
        .map(|(i, l)| serde_json::from_str::<CertificateLine>(l).with_context(|| format!("certificate line {}", i + 2)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ineq3Certificate { header, lines })
}

fn ineq3(
    ctx: &mut Context,
    options: &Ineq3Options,
    out: Option<&str>,
    check_path: Option<&str>,
    spot: Option<&str>,
) -> Result<(Value, Status)> {
    let spots = match spot {
        Some(s) => floats(s)?
            .into_iter()
            .map(|e| Ok(json!({ "epsilon": e, "value": ineq3_value(e, &options.constants)? })))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    if let Some(path) = check_path {
        let cert = read_certificate(&ctx.read(path)?)?;
        revalidate_certificate(&cert)?;
        let passed = cert.header.all_negative;
        return check(json!({ "revalidated": true, "header": cert.header, "spot": spots }), passed);
    }
    if out.is_some() && options.mode == Ineq3Mode::Float {
        bail!("--out needs --mode interval");
    }
    let outcome = verify_ineq3(options)?;
    let passed = outcome.all_negative();
    let body = match &outcome {
        Ineq3Outcome::Float(sweep) => json!({ "mode": "float", "sweep": sweep, "spot": spots }),
        Ineq3Outcome::Interval(cert) => {
            if let Some(path) = out {
                write_certificate(path, cert)?;
            }
            json!({ "mode": "interval", "header": cert.header, "spot": spots })
        }
    };
    check(body, passed)
}

fn search(
    n: usize,
    objective: ObjectiveArg,
    a_floor: Option<u64>,
    budget: Option<u64>,
    symmetry: bool,
    out: Option<&str>,
) -> Result<(Value, Status)> {
    let base = match objective {
        ObjectiveArg::MaxProduct => SearchSpec::max_product(n),
        ObjectiveArg::MaxB | ObjectiveArg::Frontier => SearchSpec::frontier(n, a_floor),
    };
    let spec = SearchSpec { node_budget: budget, symmetry_reduction: symmetry, ..base };
    let (body, points, exhausted) = match objective {
        ObjectiveArg::MaxProduct | ObjectiveArg::MaxB => {
            if objective == ObjectiveArg::MaxB && a_floor.is_none() {
                bail!("--objective max-b needs --a-floor");
            }
            let outcome = match spec.objective {
                Objective::MaxProduct => exhaustive_max_product(&spec)?,
                Objective::MaxBGivenAFloor => max_b_given_a_floor(&spec)?,
            };
            let exhausted = outcome.log.budget_exhausted;
            let points = vec![outcome.point.clone()];
            (json!({ "search": outcome }), points, exhausted)
        }
        ObjectiveArg::Frontier => {
            let report = unbalanced_frontier(&spec)?;
            let exhausted = report.budget_exhausted;
            let points = report.points.clone();
            (json!({ "frontier": report }), points, exhausted)
        }
    };
    if let Some(dir) = out {
        let dir = Path::new(dir);
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let mut table = Vec::new();
        for p in &points {
            let stem = format!("n{}_a{}_b{}", p.n, p.a_size, p.b_size);
            let a_file = format!("{stem}.A.codes");
            let b_file = format!("{stem}.B.codes");
            fs::write(dir.join(&a_file), format_code_file(p.witness.a()))?;
            fs::write(dir.join(&b_file), format_code_file(p.witness.b()))?;
            table.push(json!({
                "n": p.n,
                "a_floor": p.a_floor,
                "a_size": p.a_size,
                "b_size": p.b_size,
                "product": p.product,
                "alpha": p.alpha,
                "beta": p.beta,
                "epsilon": p.epsilon,
                "optimal": p.optimal,
                "bound_curve": p.bound_curve,
                "a_file": a_file,
                "b_file": b_file,
            }));
        }
        let doc = json!({ "schema": crate::output::SCHEMA, "points": table });
        fs::write(dir.join("frontier.json"), to_json_line(&doc)? + "\n")?;
    }
    Ok((body, if exhausted { Status::BudgetExhausted } else { Status::Ok }))
}

fn sample(seed: u64, x: &str, rho: f64, l: Option<&str>, count: usize, stream: u64) -> Result<(Value, Status)> {
    let (word, n) = parse_word(x)?;
    let l_set = l.map(|l| coords(n, l)).transpose()?;
    let spec = CorrelationSpec::for_sampling(n, rho, l_set)?;
    let mut rng = rng_for(seed, stream);
    let mut words = Vec::with_capacity(count);
    let mut agree = 0u64;
    for _ in 0..count {
        let y = sample_correlated(word, &spec, &mut rng)?;
        agree += (n as u32 - (y ^ word).count_ones()) as u64;
        words.push(format_word(y, n));
    }
    let fraction = if count == 0 { 0.0 } else { agree as f64 / (count * n) as f64 };
    // Correlated coordinates agree with probability (1+ρ)/2, the others 1/2.
    let m = spec.correlated().len() as f64;
    let expected = (m * spec.agree_probability() + (n as f64 - m) * 0.5) / n as f64;
    ok(json!({
        "x": format_word(word, n),
        "n": n,
        "rho": rho,
        "l_set": spec.l_set,
        "seed": seed,
        "stream": stream,
        "samples": words,
        "agree_fraction": fraction,
        "expected_agree_fraction": expected,
    }))
}
