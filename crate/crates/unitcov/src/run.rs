//! Subcommand dispatch. Every command reads its input up front, computes,
//! re-verifies what it is about to emit, and only then writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use unitcov_core::boundary::{ball_bounds_check, kernel, perturbation_witness, KernelResult};
use unitcov_core::facets::{
    enumerate_facets, facet_hull, facet_rank, finish_hrep, is_product_form, membership_by_facets,
    supporting_offset, verify_facet, vertex_points, Membership, ProductForm, MAX_FACET_N,
    MIN_FACET_N,
};
use unitcov_core::hull::IncrementalHull;
use unitcov_core::model::pair_count;
use unitcov_core::rat::parse_rat;
use unitcov_core::realisability::{
    caratheodory_reduce, check_realisable_capped, reconstruct, verify_certificate, Certificate,
    DEFAULT_LP_CAP,
};
use unitcov_core::screen::{in_en, quad_form, screen, Verdict};
use unitcov_core::vertices::{enumerate_vertices_capped, DEFAULT_VERTEX_CAP};
use unitcov_core::{complete, Facet, Rat, TriArray};

use crate::error::{CliError, Result};
use crate::facet_file::{
    parse_checkpoint, render_checkpoint, render_listing, sha256_hex, write_atomic,
};
use crate::json::{
    ball_json, certificate_json, ints_json, kernel_json, membership_json, mixture_json, parse_json,
    parse_matrix, perturbation_json, product_form_json, rat_from_value, rat_json, screen_json,
    tri_from_entries, MatrixInput,
};

pub const VERTEX_CAP_VAR: &str = "UNITCOV_VERTEX_CAP";
pub const LP_CAP_VAR: &str = "UNITCOV_LP_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;
pub const EXIT_CAP: i32 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check {
        input: PathBuf,
    },
    Decompose {
        input: PathBuf,
    },
    Screen {
        input: PathBuf,
        bound: u32,
        en_only: bool,
    },
    Facets {
        n: usize,
        resume: Option<PathBuf>,
        matheron: bool,
        max_insertions: Option<usize>,
    },
    ProductForm {
        input: PathBuf,
    },
    VerifyNormal {
        input: PathBuf,
        n: usize,
    },
    Boundary {
        input: PathBuf,
        epsilon: Rat,
    },
    Vertices {
        n: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Decompose { .. } => "decompose",
            Command::Screen { .. } => "screen",
            Command::Facets { .. } => "facets",
            Command::ProductForm { .. } => "product-form",
            Command::VerifyNormal { .. } => "verify-normal",
            Command::Boundary { .. } => "boundary",
            Command::Vertices { .. } => "vertices",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::Check { input }
            | Command::Decompose { input }
            | Command::Screen { input, .. }
            | Command::ProductForm { input }
            | Command::VerifyNormal { input, .. }
            | Command::Boundary { input, .. } => Some(input),
            Command::Facets { .. } | Command::Vertices { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub vertex: usize,
    pub lp: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vertex: DEFAULT_VERTEX_CAP,
            lp: DEFAULT_LP_CAP,
        }
    }
}

impl Caps {
    /// Defaults overridden by `UNITCOV_VERTEX_CAP` and `UNITCOV_LP_CAP`.
    pub fn from_env() -> Result<Self> {
        let read = |var: &str, default: usize| -> Result<usize> {
            match std::env::var(var) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::input(format!("{var} must be a non-negative integer"))),
                Err(_) => Ok(default),
            }
        };
        Ok(Caps {
            vertex: read(VERTEX_CAP_VAR, DEFAULT_VERTEX_CAP)?,
            lp: read(LP_CAP_VAR, DEFAULT_LP_CAP)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub command: Command,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub caps: Caps,
}

/// Runs a job, writing to `--out` when given and to `stdout` otherwise.
/// Returns the exit code.
pub fn run(config: &JobConfig, stdout: &mut dyn Write) -> Result<i32> {
    if let Some(out) = &config.output {
        let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(p) = parent {
            if !p.is_dir() {
                return Err(CliError::input(format!(
                    "output directory {} does not exist",
                    p.display()
                )));
            }
        }
    }
    let input = match config.command.input() {
        Some(path) => {
            Some(fs::read(path).map_err(|e| CliError::io(path.display().to_string(), e))?)
        }
        None => None,
    };
    let (code, text) = execute(config, input.as_deref())?;
    match &config.output {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e))?,
    }
    Ok(code)
}

/// The pure part of [`run`]: input bytes in, exit code and output text out.
pub fn execute(config: &JobConfig, input: Option<&[u8]>) -> Result<(i32, String)> {
    let bytes = input.unwrap_or_default();
    match &config.command {
        Command::Check { .. } => check(config, bytes, false),
        Command::Decompose { .. } => check(config, bytes, true),
        Command::Screen { bound, en_only, .. } => screen_cmd(config, bytes, *bound, *en_only),
        Command::Facets {
            n,
            resume,
            matheron,
            max_insertions,
        } => facets_cmd(*n, resume.as_deref(), *matheron, *max_insertions),
        Command::ProductForm { .. } => product_form_cmd(config, bytes),
        Command::VerifyNormal { n, .. } => verify_normal_cmd(config, bytes, *n),
        Command::Boundary { epsilon, .. } => boundary_cmd(config, bytes, epsilon),
        Command::Vertices { n } => vertices_cmd(config, *n),
    }
}

fn envelope(config: &JobConfig, input: Option<&[u8]>, params: Value, result: Value) -> String {
    let doc = json!({
        "tool": "unitcov",
        "version": env!("CARGO_PKG_VERSION"),
        "command": config.command.name(),
        "input_sha256": input.map(sha256_hex),
        "params": params,
        "seed": config.seed,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialise");
    text.push('\n');
    text
}

fn self_check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::SelfCheck(what.to_string()))
    }
}

fn check(config: &JobConfig, bytes: &[u8], reduce: bool) -> Result<(i32, String)> {
    let parsed = parse_matrix(bytes)?;
    let kind = parsed.kind();
    let rho = parsed.into_tri()?;
    let cert = check_realisable_capped(&rho, config.caps.lp)?;
    self_check(
        verify_certificate(&rho, &cert),
        "certificate does not re-verify",
    )?;
    let params = json!({ "n": rho.n(), "input_kind": kind, "lp_cap": config.caps.lp });
    let (code, result) = match (&cert, reduce) {
        (Certificate::Realisable(m), true) => {
            let reduced = caratheodory_reduce(m);
            self_check(
                reconstruct(&reduced) == rho && reduced.len() <= pair_count(rho.n()) + 1,
                "reduced mixture does not reconstruct the input",
            )?;
            (
                EXIT_OK,
                json!({
                    "realisable": true,
                    "atoms": reduced.len(),
                    "mixture": mixture_json(&reduced),
                }),
            )
        }
        (Certificate::Realisable(_), false) => (
            EXIT_OK,
            json!({ "realisable": true, "certificate": certificate_json(&cert) }),
        ),
        (Certificate::Separated { .. }, _) => (
            EXIT_NEGATIVE,
            json!({ "realisable": false, "certificate": certificate_json(&cert) }),
        ),
    };
    Ok((code, envelope(config, Some(bytes), params, result)))
}

fn screen_cmd(
    config: &JobConfig,
    bytes: &[u8],
    bound: u32,
    en_only: bool,
) -> Result<(i32, String)> {
    let parsed = parse_matrix(bytes)?;
    let kind = parsed.kind();
    let full = match parsed {
        MatrixInput::Tri(t) => complete(&t),
        MatrixInput::Full(m) | MatrixInput::Covariogram(m) => m,
    };
    let report = screen(&full, bound, en_only)?;
    if let (Some(e), Some(v)) = (&report.witness, &report.value) {
        self_check(
            quad_form(&full, e)? == *v && *v < Rat::from_integer(1.into()),
            "screen witness does not reproduce its value",
        )?;
    }
    let code = match report.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Violation => EXIT_VIOLATION,
    };
    let params = json!({ "n": full.n(), "input_kind": kind, "bound": bound, "en_only": en_only });
    Ok((
        code,
        envelope(config, Some(bytes), params, screen_json(&report)),
    ))
}

fn facets_cmd(
    n: usize,
    resume: Option<&Path>,
    matheron: bool,
    max_insertions: Option<usize>,
) -> Result<(i32, String)> {
    if !(MIN_FACET_N..=MAX_FACET_N).contains(&n) {
        return Err(CliError::input(format!(
            "facet enumeration supports {MIN_FACET_N} <= n <= {MAX_FACET_N}"
        )));
    }
    let points = vertex_points(n)?;
    let mut hull = match resume.filter(|p| p.exists()) {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
            let (saved_n, state) = parse_checkpoint(&text)?;
            if saved_n != n {
                return Err(CliError::input(format!(
                    "checkpoint is for n = {saved_n}, not {n}"
                )));
            }
            IncrementalHull::from_state(points.clone(), state)?
        }
        None => facet_hull(n)?,
    };
    let mut budget = max_insertions;
    while !hull.is_done() {
        if budget == Some(0) {
            let (done, total) = hull.progress();
            return Err(CliError::Cap(format!(
                "stopped after the insertion budget ({done} of {total} points inserted)"
            )));
        }
        hull.step()?;
        budget = budget.map(|b| b - 1);
        if let Some(path) = resume {
            write_atomic(
                path,
                render_checkpoint(n, points.len(), &hull.state()).as_bytes(),
            )?;
        }
    }
    let hrep = finish_hrep(n, hull.into_facets())?;
    for f in &hrep.facets {
        self_check(verify_facet(n, &f.normal, &f.offset), "emitted a non-facet")?;
    }
    let comment = |f: &Facet| matheron_comment(n, f);
    let comments: Option<&dyn Fn(&Facet) -> String> = if matheron { Some(&comment) } else { None };
    Ok((EXIT_OK, render_listing(n, &hrep.facets, comments)))
}

fn matheron_comment(n: usize, f: &Facet) -> String {
    let neg: Vec<i64> = f.normal.iter().map(|v| -v).collect();
    let form = TriArray::from_ints(n, &neg).map(|t| is_product_form(&t));
    match form {
        Ok(ProductForm::Product(v)) => match v.as_integers() {
            Some(e) => {
                let coords: Vec<String> = e.coords.iter().map(ToString::to_string).collect();
                format!("e = {}", coords.join(" "))
            }
            None => "product form, not integral".to_string(),
        },
        _ => "not of product form".to_string(),
    }
}

fn product_form_cmd(config: &JobConfig, bytes: &[u8]) -> Result<(i32, String)> {
    let rho = parse_matrix(bytes)?.into_tri()?;
    let form = is_product_form(&rho);
    let mut result = product_form_json(&form);
    let code = match &form {
        ProductForm::Product(v) => {
            if let Some(rats) = v.as_rationals() {
                let back = TriArray::new(
                    rho.n(),
                    unitcov_core::pairs(rho.n())
                        .map(|(i, j)| &rats[i] * &rats[j])
                        .collect(),
                )?;
                self_check(back == rho, "product vector does not reproduce the input")?;
            }
            if let Some(e) = v.as_integers() {
                let (member, signing) = in_en(&e);
                result["integer_vector"] = ints_json(&e);
                result["in_en"] = Value::Bool(member);
                result["signing"] = json!(signing);
            }
            EXIT_OK
        }
        ProductForm::NotProduct(_) => EXIT_NEGATIVE,
    };
    let params = json!({ "n": rho.n() });
    Ok((code, envelope(config, Some(bytes), params, result)))
}

/// Reads `{"n", "normal", "sense"?, "offset"?}`. With `"sense": "ge"` the
/// inequality is `<x, normal> >= offset` and is flipped before checking.
fn verify_normal_cmd(config: &JobConfig, bytes: &[u8], n: usize) -> Result<(i32, String)> {
    let doc = parse_json(bytes)?;
    if let Some(file_n) = doc.get("n") {
        if file_n.as_u64() != Some(n as u64) {
            return Err(CliError::input(format!(
                "file has n = {file_n}, but --n {n} was given"
            )));
        }
    }
    let raw = doc
        .get("normal")
        .or_else(|| doc.get("entries"))
        .ok_or_else(|| CliError::input("missing `normal`"))?;
    let normal = tri_from_entries(n, raw, "normal")?;
    if !normal.is_integral() {
        return Err(CliError::input("normal must have integer coefficients"));
    }
    let coeffs: Vec<i64> = normal
        .entries()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            num_traits::ToPrimitive::to_i64(v.numer())
                .ok_or_else(|| CliError::input(format!("normal[{k}] is too large")))
        })
        .collect::<Result<_>>()?;
    let sense = match doc.get("sense").and_then(Value::as_str) {
        None | Some("le") => "le",
        Some("ge") => "ge",
        Some(other) => return Err(CliError::input(format!("unknown sense `{other}`"))),
    };
    let outer: Vec<i64> = if sense == "ge" {
        coeffs.iter().map(|v| -v).collect()
    } else {
        coeffs.clone()
    };
    let supporting = supporting_offset(n, &outer)?;
    let offset = match doc.get("offset") {
        Some(v) => {
            let o = rat_from_value(v, "offset")?;
            if sense == "ge" {
                -o
            } else {
                o
            }
        }
        None => supporting.clone(),
    };
    let points = vertex_points(n)?;
    let dot = |p: &[i64]| -> i128 {
        p.iter()
            .zip(&outer)
            .map(|(&a, &b)| i128::from(a) * i128::from(b))
            .sum()
    };
    let tight: Vec<Vec<i64>> = points
        .iter()
        .filter(|p| Rat::from_integer(dot(p).into()) == offset)
        .cloned()
        .collect();
    let valid = supporting <= offset;
    let is_facet = verify_facet(n, &outer, &offset);
    let neg: Vec<i64> = outer.iter().map(|v| -v).collect();
    let result = json!({
        "facet": is_facet,
        "valid": valid,
        "outer_normal": outer,
        "offset": rat_json(&offset),
        "vertex_max": rat_json(&supporting),
        "tight_vertices": tight.len(),
        "affine_rank": facet_rank(&tight),
        "required_rank": pair_count(n) - 1,
        "product_form_outer": product_form_json(&is_product_form(&TriArray::from_ints(n, &outer)?)),
        "product_form_inner": product_form_json(&is_product_form(&TriArray::from_ints(n, &neg)?)),
    });
    let params = json!({ "n": n, "sense": sense });
    let code = if is_facet { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((code, envelope(config, Some(bytes), params, result)))
}

fn boundary_cmd(config: &JobConfig, bytes: &[u8], epsilon: &Rat) -> Result<(i32, String)> {
    let rho = parse_matrix(bytes)?.into_tri()?;
    let n = rho.n();
    let ker = kernel(&rho);
    let ball = ball_bounds_check(&rho);
    let membership = if (MIN_FACET_N..=6).contains(&n) {
        Some(membership_by_facets(&rho, &enumerate_facets(n)?)?)
    } else {
        None
    };
    let mut result = json!({
        "singular": matches!(ker, KernelResult::Singular(_)),
        "kernel": kernel_json(&ker),
        "ball_class": ball_json(ball),
        "facet_class": membership.as_ref().map(membership_json),
    });
    if let KernelResult::Singular(w) = &ker {
        self_check(
            complete(&rho)
                .mul_vec(w.lambda())
                .iter()
                .all(num_traits::Zero::is_zero),
            "kernel vector does not annihilate the matrix",
        )?;
        if let Ok(p) = perturbation_witness(&rho, w, epsilon) {
            self_check(
                complete(&p.perturbed).quadratic(w.lambda()) == p.negativity_value
                    && p.negativity_value < Rat::from_integer(0.into()),
                "perturbation does not produce a negative form",
            )?;
            result["perturbation"] = perturbation_json(&p);
        }
    }
    let outside = matches!(membership, Some(Membership::Outside(_)))
        || matches!(ball, unitcov_core::boundary::BallClass::OutsideOuterBall);
    let params = json!({ "n": n, "epsilon": rat_json(epsilon) });
    let code = if outside { EXIT_NEGATIVE } else { EXIT_OK };
    Ok((code, envelope(config, Some(bytes), params, result)))
}

/// One JSON object per line: a header, then the vertices in order.
fn vertices_cmd(config: &JobConfig, n: usize) -> Result<(i32, String)> {
    let set = enumerate_vertices_capped(n, config.caps.vertex)?;
    let header = json!({
        "tool": "unitcov",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "vertices",
        "input_sha256": null,
        "params": { "n": n, "vertex_cap": config.caps.vertex },
        "seed": config.seed,
        "count": set.len(),
    });
    let mut out = header.to_string();
    out.push('\n');
    for (k, v) in set.vertices().iter().enumerate() {
        out.push_str(
            &json!({ "index": k, "signs": v.signs.signs(), "coords": v.coords }).to_string(),
        );
        out.push('\n');
    }
    Ok((EXIT_OK, out))
}

pub fn parse_epsilon(text: &str) -> Result<Rat> {
    parse_rat(text).map_err(|_| CliError::input(format!("epsilon \"{text}\" is not a rational")))
}
