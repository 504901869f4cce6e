//! The `fpcoh` command line: reads fpc-1 documents, dispatches to the
//! library and prints deterministic reports.

pub mod doc;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpcoh::coleman::{aj_divisor, coleman_primitive};
use fpcoh::curves::{frobenius_matrix, point_count, render_integer_poly, to_geometry_package, FrobeniusData};
use fpcoh::fp::{
    aj_fp, aj_syn_semistable, cofinal_poly, cohomology_weight, complete_cocycle, evaluate_formula, fp_cohomology, fp_cohomology_with,
    fp_gram, AdmissiblePolynomial, ColemanLiftHandle, DiagonalInstance, FormulaInstance, IsogenyInstance,
};
use fpcoh::linalg::{dot, Matrix, Vector};
use fpcoh::padic::{BaseField, PadicNumber, PadicPoly};
use fpcoh::phin::clebsch_gordan;
use fpcoh::syntomic::{build_syntomic, syn_dims, GeometryPackage, Variant};
use fpcoh::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use doc::{CurveDoc, Envelope, FormulaPayload, Kind};
use report::Report;

pub const DEFAULT_PRECISION: u32 = 10;

#[derive(Parser, Debug)]
#[command(name = "fpcoh", version, about = "Finite-polynomial and syntomic cohomology of geometry packages and curves")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Working precision in p-adic digits; overrides the document and FPC_PRECISION.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Expected prime; a document with another prime is rejected.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Semistable,
    Good,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Semistable => Variant::Semistable,
            VariantArg::Good => Variant::Good,
        }
    }
}

/// A package given directly or through a curve.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub package: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frobenius matrix on H^1 of a curve in the basis x^i dx/y.
    Frob {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Numerator of the zeta function of a curve.
    Zeta {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Point counts over F_p and F_(p^2).
    Count {
        #[arg(long)]
        curve: PathBuf,
        /// Largest extension degree (1 or 2).
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Dimensions of syntomic P-cohomology.
    Syn {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long)]
        degree: Option<i32>,
        #[arg(long, value_enum, default_value_t = VariantArg::Semistable)]
        variant: VariantArg,
    },
    /// Finite-polynomial cohomology H^j_fp(n) and its short exact sequence.
    Fp {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: i32,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        /// Admissible polynomial; the cofinal one when omitted.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Coleman integrals of the basis forms from the first divisor point.
    Coleman {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long)]
        form: Option<String>,
    },
    /// Abel-Jacobi value of a divisor on a curve or a cycle on a package.
    Aj {
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        package: Option<PathBuf>,
        #[arg(long)]
        divisor: Option<PathBuf>,
        #[arg(long)]
        cycle: Option<PathBuf>,
        /// "(a + b*x)*dx/y" on a curve, or comma-separated cochain coordinates.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[arg(long, value_enum, default_value_t = VariantArg::Good)]
        variant: VariantArg,
    },
    /// Clebsch-Gordan decomposition of Sym^a H ⊗ Sym^b H for a rank-2 H^j.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: Option<i32>,
        /// "a,b"
        #[arg(long)]
        sym: String,
    },
    /// Gram matrix of the fp pairing H^i_fp(n) × H^(2d+1-i)_fp(m).
    Pair {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        degree: i32,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Both sides of a synthetic formula instance.
    Formula {
        #[arg(long)]
        instance: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::Parse { .. } => 2,
        Error::Precision { .. } => 3,
        Error::Domain(_) => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Validation(_) => "validation",
        Error::Parse { .. } => "parse",
        Error::Precision { .. } => "precision",
        Error::Domain(_) => "domain",
    }
}

struct Ctx {
    precision: Option<u32>,
    prime: Option<u64>,
    env_precision: Option<String>,
    inputs: Vec<(String, Vec<u8>)>,
}

impl Ctx {
    fn read(&mut self, label: &str, path: &Path) -> Result<(String, String)> {
        let source = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| Error::Parse { path: source.clone(), msg: format!("cannot read file: {e}") })?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse { path: source.clone(), msg: "file is not valid UTF-8".into() })?;
        self.inputs.push((label.to_string(), bytes));
        Ok((text, source))
    }

    fn envelope(&mut self, label: &str, path: &Path, kind: Kind) -> Result<(Envelope, String)> {
        let (text, source) = self.read(label, path)?;
        Ok((doc::read_envelope(&text, kind, &source)?, source))
    }

    fn field_for(&self, env: &Envelope, source: &str) -> Result<BaseField> {
        if let Some(p) = self.prime {
            if p != env.prime {
                return Err(Error::validation(format!("{source}: prime {} does not match --prime {p}", env.prime)));
            }
        }
        let precision = match (self.precision, env.precision) {
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => match &self.env_precision {
                Some(s) => s.trim().parse().map_err(|_| Error::validation(format!("FPC_PRECISION={s:?} is not a positive integer")))?,
                None => DEFAULT_PRECISION,
            },
        };
        BaseField::new(env.prime, precision).map_err(|e| match e {
            Error::Domain(m) => Error::validation(format!("{source}: {m}")),
            other => other,
        })
    }

    fn curve(&mut self, path: &Path) -> Result<(CurveDoc, BaseField)> {
        let (env, source) = self.envelope("curve", path, Kind::Curve)?;
        let field = self.field_for(&env, &source)?;
        Ok((doc::curve_from(&env, &field, &source)?, field))
    }

    fn package(&mut self, path: &Path) -> Result<GeometryPackage> {
        let (env, source) = self.envelope("package", path, Kind::Package)?;
        let field = self.field_for(&env, &source)?;
        doc::package_from(&env, &field, &source)
    }

    fn source(&mut self, s: &Source) -> Result<(GeometryPackage, Option<(CurveDoc, FrobeniusData)>)> {
        match (&s.curve, &s.package) {
            (Some(c), None) => {
                let (cd, field) = self.curve(c)?;
                let frob = frobenius_matrix(&cd.curve, field.precision())?;
                let g = to_geometry_package(&cd.curve, &frob)?;
                Ok((g, Some((cd, frob))))
            }
            (None, Some(p)) => Ok((self.package(p)?, None)),
            _ => Err(Error::validation("give exactly one of --curve and --package")),
        }
    }
}

fn form_name(i: usize) -> String {
    match i {
        0 => "dx/y".into(),
        1 => "x*dx/y".into(),
        _ => format!("x^{i}*dx/y"),
    }
}

fn render_matrix(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(doc::render).collect()).collect()
}

/// "(1 + 2*x)*dx/y" as coordinates in the basis x^i dx/y, i < 2g.
pub fn parse_curve_form(text: &str, genus: usize, field: &BaseField) -> Result<Vector> {
    let bad = |m: &str| Error::Parse { path: "--form".into(), msg: format!("{m}: {text:?}") };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let head = s.strip_suffix("dx/y").ok_or_else(|| bad("a curve form must end in dx/y"))?;
    let head = head.strip_suffix('*').unwrap_or(head);
    let head = match head {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        h => h.strip_prefix('(').and_then(|h| h.strip_suffix(')')).unwrap_or(h).to_string(),
    };
    let poly = PadicPoly::parse(&head.replace('x', "T"), field).map_err(|_| bad("malformed coefficient polynomial"))?;
    let n = 2 * genus;
    if poly.len() > n {
        return Err(Error::validation(format!("form {text:?} is outside the span of x^i dx/y for i < {n}")));
    }
    Ok((0..n).map(|i| poly.coeff(i)).collect())
}

fn parse_vector(text: &str, field: &BaseField) -> Result<Vector> {
    text.split(',')
        .map(|s| {
            doc::scalar(s.trim(), field).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { path: "--form".into(), msg },
                other => other,
            })
        })
        .collect()
}

fn parse_poly(text: &str, field: &BaseField) -> Result<PadicPoly> {
    PadicPoly::parse(text, field).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::Parse { path: "--poly".into(), msg },
        other => other,
    })
}

/// An admissible polynomial of the given weight; constant term 1 and purity
/// are input invariants.
fn admissible(text: &str, field: &BaseField, weight: i64) -> Result<AdmissiblePolynomial> {
    let poly = parse_poly(text, field)?;
    if !poly.coeff(0).sub(&field.one()).is_exact_zero() {
        return Err(Error::validation(format!("--poly {text:?} must have constant term 1")));
    }
    AdmissiblePolynomial::new(poly, weight).map_err(|e| match e {
        Error::Domain(m) => Error::validation(format!("--poly is not admissible: {m}")),
        other => other,
    })
}

/// A p-adic result cut back to the requested precision.
fn reported(x: &PadicNumber, field: &BaseField) -> PadicNumber {
    if x.is_exact() {
        x.in_field(field)
    } else {
        x.truncate_abs(field.precision() as i64).in_field(field)
    }
}

fn reported_row(v: &[PadicNumber], field: &BaseField) -> Vec<String> {
    v.iter().map(|x| doc::render(&reported(x, field))).collect()
}

/// Notes the working precision behind inexact results.
fn precision_warning(r: &mut Report, what: &str, values: &[PadicNumber], working: u32, field: &BaseField) {
    let abs = values.iter().filter_map(|x| reported(x, field).abs_precision()).min();
    if let Some(abs) = abs {
        r.warn(format!("precision consumed: {what} computed with {working} working digits, reported to O({}^{abs})", field.p()));
    }
}

fn execute(cli: &Cli, ctx: &mut Ctx, r: &mut Report) -> Result<()> {
    match &cli.command {
        Command::Frob { curve } => {
            let (cd, field) = ctx.curve(curve)?;
            let frob = frobenius_matrix(&cd.curve, field.precision())?;
            r.push("genus", cd.curve.genus().to_string());
            r.push_list("basis", (0..2 * cd.curve.genus()).map(form_name).collect());
            let m = &frob.matrix;
            r.push_matrix("frobenius", (0..m.rows()).map(|i| reported_row(&m.row(i), &field)).collect());
            r.push("numerator", render_integer_poly(&frob.numerator()?));
            precision_warning(r, "Frobenius matrix", m.entries(), frob.working_precision, &field);
        }
        Command::Zeta { curve } => {
            let (cd, field) = ctx.curve(curve)?;
            let frob = frobenius_matrix(&cd.curve, field.precision())?;
            let num = render_integer_poly(&frob.numerator()?);
            r.push("numerator", num.clone());
            r.push("zeta", format!("({num}) / ((1 - T)*(1 - {}*T))", field.p()));
        }
        Command::Count { curve, degree } => {
            let (cd, field) = ctx.curve(curve)?;
            if !(1..=2).contains(degree) {
                return Err(Error::domain(format!("point counts are available over F_p and F_(p^2), not degree {degree}")));
            }
            for k in 1..=*degree {
                r.push(format!("N_{k}"), point_count(&cd.coeffs, field.p(), k)?.to_string());
            }
        }
        Command::Syn { source, poly, twist, degree, variant } => {
            let (g, _) = ctx.source(source)?;
            let p = parse_poly(poly, &g.field)?;
            let syn = build_syntomic(&g, &p, *twist, (*variant).into())?;
            r.push("poly", p.to_string());
            for (i, d) in syn_dims(&syn)? {
                if degree.map_or(true, |j| j == i) {
                    r.push(format!("H^{i}"), d.to_string());
                }
            }
        }
        Command::Fp { source, degree, twist, poly } => {
            let (g, _) = ctx.source(source)?;
            let space = match poly {
                Some(text) => {
                    let w = cohomology_weight(&g, *degree)?.unwrap_or(*degree as i64);
                    fp_cohomology_with(&g, *degree, *twist, &admissible(text, &g.field, w)?)?
                }
                None => fp_cohomology(&g, *degree, *twist)?,
            };
            let chk = space.check()?;
            r.push("dim", space.dim().to_string());
            r.push("poly", space.poly.poly.to_string());
            r.push("sequence", format!("0 -> {} -> {} -> {} -> 0", chk.source_dim, chk.dim, chk.target_dim));
            r.push("exact", chk.holds().to_string());
        }
        Command::Coleman { curve, divisor, form } => {
            let (cd, field) = ctx.curve(curve)?;
            let (env, src) = ctx.envelope("divisor", divisor, Kind::Divisor)?;
            let d = doc::divisor_from(&env, &cd.curve, &src)?;
            let frob = frobenius_matrix(&cd.curve, field.precision())?;
            let omega = form.as_ref().map(|f| parse_curve_form(f, cd.curve.genus(), &field)).transpose()?;
            let base = &d[0].0;
            let mut all = Vec::new();
            for (k, (pt, _)) in d.iter().enumerate().skip(1) {
                let ints = coleman_primitive(&cd.curve, &frob, base, pt)?;
                r.push_list(format!("P0->P{k}"), reported_row(&ints, &field));
                if let Some(w) = &omega {
                    let v = dot(&w.iter().map(|c| c.in_field(ints[0].field())).collect::<Vec<_>>(), &ints, ints[0].field());
                    r.push(format!("value P0->P{k}"), doc::render(&reported(&v, &field)));
                    all.push(v);
                }
                all.extend(ints);
            }
            precision_warning(r, "integrals", &all, frob.working_precision, &field);
        }
        Command::Aj { curve, package, divisor, cycle, form, twist, variant } => match (curve, package, divisor, cycle) {
            (Some(c), None, Some(dpath), None) => {
                let (cd, field) = ctx.curve(c)?;
                let (env, src) = ctx.envelope("divisor", dpath, Kind::Divisor)?;
                let d = doc::divisor_from(&env, &cd.curve, &src)?;
                let omega = parse_curve_form(form, cd.curve.genus(), &field)?;
                let frob = frobenius_matrix(&cd.curve, field.precision())?;
                let v = aj_divisor(&cd.curve, &frob, &d, &omega)?;
                r.push("value", doc::render(&reported(&v, &field)));
                precision_warning(r, "value", &[v], frob.working_precision, &field);
            }
            (None, Some(ppath), None, Some(cpath)) => {
                let g = ctx.package(ppath)?;
                let (env, src) = ctx.envelope("cycle", cpath, Kind::Cycle)?;
                let cyc = doc::cycle_from(&env, &g.field, &src)?;
                for (name, _) in &cyc.summands {
                    if g.points.iter().all(|p| &p.name != name) {
                        return Err(Error::validation(format!("{src}: package {} has no point named {name:?}", g.name)));
                    }
                }
                let x = parse_vector(form, &g.field)?;
                let n = twist.unwrap_or(1);
                match variant {
                    VariantArg::Good => {
                        let space = fp_cohomology(&g, 1, n)?;
                        let c = complete_cocycle(&space.syn, 1, &x)?;
                        let v = aj_fp(&g, &space, &ColemanLiftHandle::Synthetic(c), &cyc)?;
                        r.push("value", doc::render(&reported(&v, &g.field)));
                        precision_warning(r, "value", &[v], g.field.precision(), &g.field);
                    }
                    VariantArg::Semistable => {
                        let poly = cofinal_poly(&g, 1)?;
                        let sx = build_syntomic(&g, &poly.poly, n, Variant::Semistable)?;
                        let c = complete_cocycle(&sx, 1, &x)?;
                        let out = aj_syn_semistable(&g, &poly, n, &cyc, &c)?;
                        r.push("value", doc::render(&reported(&out.value, &g.field)));
                        precision_warning(r, "value", &[out.value.clone()], g.field.precision(), &g.field);
                        r.warn(format!("lift dependence: {}", out.caveat));
                    }
                }
            }
            _ => return Err(Error::validation("aj needs --curve with --divisor, or --package with --cycle")),
        },
        Command::Decompose { source, degree, sym } => {
            let (g, _) = ctx.source(source)?;
            let (a, b) = sym
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Parse { path: "--sym".into(), msg: format!("expected \"a,b\", found {sym:?}") })?;
            let j = degree.unwrap_or(g.dimension);
            let pr = g.pairing.as_ref().ok_or_else(|| Error::domain("package has no pairing"))?;
            let form = pr.hk.get(j as usize).ok_or_else(|| Error::domain(format!("no pairing form in degree {j}")))?;
            let h = g.hk_cohomology(j)?;
            let gram = h.lift.transpose().mul(form).mul(&h.lift);
            let module = g.cohomology_module(j)?;
            let parts = clebsch_gordan(&module, &gram, a, b)?;
            let mut total = 0;
            for (k, s) in parts.iter().enumerate() {
                let jumps: Vec<String> = s.module.fil.jumps().iter().map(|l| l.to_string()).collect();
                let rank = a + b - 2 * k;
                total += s.module.dim();
                r.push(
                    format!("summand[{k}]"),
                    format!("Sym^{rank} H({}): dim {}, hodge jumps [{}]", s.twist, s.module.dim(), jumps.join(", ")),
                );
            }
            r.push("total", format!("{total} = {} x {}", a + 1, b + 1));
        }
        Command::Pair { source, degree, twist } => {
            let (g, _) = ctx.source(source)?;
            let pr = g.pairing.as_ref().ok_or_else(|| Error::domain("package has no pairing"))?;
            let m = pr.top_label() + 1 - twist;
            let other = 2 * g.dimension + 1 - degree;
            let a = fp_cohomology(&g, *degree, *twist)?;
            let b = fp_cohomology(&g, other, m)?;
            let rep = fp_gram(&g, &a, &b)?;
            r.push("left", format!("H^{degree}_fp({twist}) dim {}", a.dim()));
            r.push("right", format!("H^{other}_fp({m}) dim {}", b.dim()));
            r.push_matrix("gram", render_matrix(&rep.matrix));
            r.push("rank", rep.rank.to_string());
            r.push("det_valuation", rep.det_valuation.map_or("infinite".into(), |v| v.to_string()));
        }
        Command::Formula { instance } => {
            let (env, src) = ctx.envelope("formula", instance, Kind::Formula)?;
            let field = ctx.field_for(&env, &src)?;
            let f = doc::formula_from(&env, &field, &src)?;
            let inst = build_formula(&f, &field)?;
            let v = evaluate_formula(&inst)?;
            match &f {
                FormulaPayload::Diagonal { weights, .. } => r.push("family", format!("diagonal {weights:?}")),
                FormulaPayload::Isogeny { r: w, .. } => r.push("family", format!("isogeny r = {w}")),
            }
            r.push("lhs", doc::render(&reported(&v.lhs, &field)));
            r.push("rhs", doc::render(&reported(&v.rhs, &field)));
            r.push("agree", v.agree_to(field.precision() as i64).to_string());
        }
    }
    Ok(())
}

/// The instance described by a formula document.
pub fn build_formula(f: &FormulaPayload, field: &BaseField) -> Result<FormulaInstance> {
    Ok(match f {
        FormulaPayload::Diagonal { weights, seed, eigen } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            FormulaInstance::Diagonal(DiagonalInstance::random(&mut rng, field, *weights, *eigen)?)
        }
        FormulaPayload::Isogeny { r, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            FormulaInstance::Isogeny(IsogenyInstance::random(&mut rng, field, *r)?)
        }
    })
}

/// Writes through a temporary file in the same directory and renames it.
fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

/// Runs one invocation; `argv` includes the program name.
pub fn run<I, S>(argv: I, env_precision: Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut ctx = Ctx { precision: cli.precision, prime: cli.prime, env_precision, inputs: vec![] };
    let mut report = Report { command: argv.iter().skip(1).cloned().collect(), ..Report::default() };
    let result = execute(&cli, &mut ctx, &mut report);
    report.inputs = report::digest(&ctx.inputs);
    match result {
        Ok(()) => {
            let text = match cli.format {
                Format::Text => report.text(),
                Format::Json => report.json(),
            };
            match &cli.output {
                Some(path) => match write_atomically(path, &text) {
                    Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) },
                },
                None => Outcome { code: 0, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Text => Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") },
                Format::Json => {
                    let v = serde_json::json!({
                        "format_version": doc::FORMAT_VERSION,
                        "command": report.command,
                        "inputs": report.inputs,
                        "error": { "kind": error_kind(&e), "message": e.to_string() },
                    });
                    Outcome { code, stdout: doc::to_text(&v), stderr: String::new() }
                }
            }
        }
    }
}
