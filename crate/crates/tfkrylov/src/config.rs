//! Experiment configuration: a flat text file of `key = value` lines.
//!
//! `#` starts a comment, blank lines are ignored, `seed` and `solver` may be
//! repeated to build lists and `seed` also accepts inclusive ranges `a..b`.
//! Every other key may appear at most once. Defaults depend on the problem,
//! so they are filled in after the whole file has been read.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tfkrylov_core::deblur::BoundaryCondition;
use tfkrylov_core::tfcg::{FirstStop, InnerSolver, TfConfig, FIRST_CYCLE_BREAKDOWN_TOL};
use tfkrylov_core::{ArnoldiOptions, ArnoldiVariant};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Problem {
    ILaplace1,
    ILaplace2,
    Baart,
    Heat,
    DeblurGaussian,
    DeblurMotion,
    DeblurWide,
}

impl Problem {
    pub const ALL: [Problem; 7] = [
        Problem::ILaplace1,
        Problem::ILaplace2,
        Problem::Baart,
        Problem::Heat,
        Problem::DeblurGaussian,
        Problem::DeblurMotion,
        Problem::DeblurWide,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Problem::ILaplace1 => "i_laplace_1",
            Problem::ILaplace2 => "i_laplace_2",
            Problem::Baart => "baart",
            Problem::Heat => "heat",
            Problem::DeblurGaussian => "deblur_gaussian",
            Problem::DeblurMotion => "deblur_motion",
            Problem::DeblurWide => "deblur_wide",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Problem::ILaplace1 => "inverse Laplace transform of exp(-t/2), Gauss-Laguerre quadrature",
            Problem::ILaplace2 => "inverse Laplace transform of t^2 exp(-t/2), Gauss-Laguerre quadrature",
            Problem::Baart => "first-kind Fredholm equation with kernel exp(s cos t)",
            Problem::Heat => "inverse heat equation as a Volterra equation, kappa = 1",
            Problem::DeblurGaussian => "anisotropic Gaussian blur s1=4 s2=1.3 rho=2, antireflective",
            Problem::DeblurMotion => "diagonal motion blur of length 17, antireflective",
            Problem::DeblurWide => "wide isotropic Gaussian s1=s2=6 d=31, reflective",
        }
    }

    pub fn is_deblur(self) -> bool {
        matches!(self, Problem::DeblurGaussian | Problem::DeblurMotion | Problem::DeblurWide)
    }

    /// Problem size; the image side for deblurring problems.
    pub fn default_n(self) -> usize {
        match self {
            Problem::ILaplace1 | Problem::ILaplace2 => 100,
            Problem::Baart | Problem::Heat => 200,
            _ => 64,
        }
    }

    pub fn default_eps_hat(self) -> f64 {
        match self {
            Problem::DeblurGaussian => 2e-2,
            Problem::DeblurMotion => 5e-3,
            Problem::DeblurWide => 5e-2,
            _ => 1e-2,
        }
    }

    pub fn default_tau_prime(self) -> f64 {
        match self {
            Problem::Baart | Problem::Heat => 1e-14,
            _ => 1e-15,
        }
    }

    pub fn default_m_max(self) -> usize {
        if self.is_deblur() {
            50
        } else {
            40
        }
    }

    pub fn default_psf_size(self) -> usize {
        match self {
            Problem::DeblurGaussian => 11,
            Problem::DeblurMotion => 17,
            Problem::DeblurWide => 31,
            _ => 0,
        }
    }

    pub fn default_boundary(self) -> BoundaryCondition {
        match self {
            Problem::DeblurWide => BoundaryCondition::Reflective,
            _ => BoundaryCondition::Antireflective,
        }
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Problem::ALL.into_iter().find(|p| p.tag() == s).ok_or_else(|| format!("unknown problem '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Gmres,
    Cgls,
    Cgne,
    TfCgls,
    TfCgne,
    RpGmres,
    Tsvd,
}

impl SolverKind {
    pub const ALL: [SolverKind; 7] = [
        SolverKind::Gmres,
        SolverKind::Cgls,
        SolverKind::Cgne,
        SolverKind::TfCgls,
        SolverKind::TfCgne,
        SolverKind::RpGmres,
        SolverKind::Tsvd,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SolverKind::Gmres => "gmres",
            SolverKind::Cgls => "cgls",
            SolverKind::Cgne => "cgne",
            SolverKind::TfCgls => "tf_cgls",
            SolverKind::TfCgne => "tf_cgne",
            SolverKind::RpGmres => "rp_gmres",
            SolverKind::Tsvd => "tsvd",
        }
    }

    pub fn is_transpose_free(self) -> bool {
        matches!(self, SolverKind::TfCgls | SolverKind::TfCgne)
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SolverKind::ALL.into_iter().find(|k| k.tag() == s).ok_or_else(|| format!("unknown solver '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub n: usize,
    pub eps_hat: f64,
    /// Ascending, without duplicates.
    pub seeds: Vec<u64>,
    /// In the order given.
    pub solvers: Vec<SolverKind>,
    /// First-cycle and discrepancy settings; `m_max` and `eta` also apply to
    /// the reference solvers.
    pub tf: TfConfig,
    /// Arnoldi flavour of GMRES and RP-GMRES.
    pub gmres_arnoldi: ArnoldiOptions,
    pub output_dir: PathBuf,
    pub timing: bool,
    /// Also write one `iter,rel_err,rel_res` file per (solver, seed).
    pub convergence: bool,
    pub psf_size: usize,
    pub boundary: BoundaryCondition,
    /// Scene for deblurring problems instead of the built-in phantom.
    pub image: Option<PathBuf>,
}

const KEYS: [&str; 21] = [
    "problem",
    "n",
    "eps_hat",
    "seed",
    "solver",
    "m_max",
    "k_max",
    "tau",
    "tau_prime",
    "eta",
    "first_stop",
    "arnoldi",
    "reorthogonalize",
    "range_restricted",
    "output_dir",
    "timing",
    "convergence",
    "psf_size",
    "boundary",
    "image",
    "breakdown_tol",
];

struct Entry {
    line: usize,
    value: String,
}

fn line_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::ConfigLine { line, message: message.into() }
}

fn parse_value<T: FromStr>(e: &Entry, key: &str) -> Result<T, HarnessError> {
    e.value.parse().map_err(|_| line_err(e.line, format!("invalid value '{}' for {key}", e.value)))
}

fn parse_bool(e: &Entry, key: &str) -> Result<bool, HarnessError> {
    match e.value.as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(line_err(e.line, format!("{key} expects true or false"))),
    }
}

fn parse_seeds(e: &Entry, out: &mut Vec<u64>) -> Result<(), HarnessError> {
    let bad = || line_err(e.line, format!("invalid seed '{}'", e.value));
    match e.value.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        }
        None => out.push(e.value.parse().map_err(|_| bad())?),
    }
    Ok(())
}

fn parse_first_stop(e: &Entry) -> Result<FirstStop, HarnessError> {
    match e.value.as_str() {
        "subdiag" => Ok(FirstStop::Subdiag),
        "sigma_product" => Ok(FirstStop::SigmaProduct),
        "both" => Ok(FirstStop::Both),
        v => v
            .strip_prefix("fixed:")
            .and_then(|m| m.parse().ok())
            .filter(|&m: &usize| m > 0)
            .map(FirstStop::Fixed)
            .ok_or_else(|| line_err(e.line, format!("invalid first_stop '{v}'"))),
    }
}

fn parse_boundary(e: &Entry) -> Result<BoundaryCondition, HarnessError> {
    match e.value.as_str() {
        "zero" => Ok(BoundaryCondition::Zero),
        "periodic" => Ok(BoundaryCondition::Periodic),
        "reflective" => Ok(BoundaryCondition::Reflective),
        "antireflective" => Ok(BoundaryCondition::Antireflective),
        v => Err(line_err(e.line, format!("unknown boundary '{v}'"))),
    }
}

/// Parses configuration text. `base_dir` anchors relative paths.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<ExperimentConfig, HarnessError> {
    let mut single: BTreeMap<&str, Entry> = BTreeMap::new();
    let mut seed_entries = Vec::new();
    let mut solver_entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| line_err(line, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let key = *KEYS.iter().find(|k| **k == key).ok_or_else(|| line_err(line, format!("unknown key '{key}'")))?;
        if value.is_empty() {
            return Err(line_err(line, format!("empty value for {key}")));
        }
        let entry = Entry { line, value: value.to_string() };
        match key {
            "seed" => seed_entries.push(entry),
            "solver" => solver_entries.push(entry),
            _ => {
                if let Some(prev) = single.insert(key, entry) {
                    return Err(line_err(line, format!("{key} already set on line {}", prev.line)));
                }
            }
        }
    }

    let problem: Problem = match single.get("problem") {
        Some(e) => e.value.parse().map_err(|m: String| line_err(e.line, m))?,
        None => return Err(HarnessError::Config("missing problem".into())),
    };

    let mut solvers = Vec::new();
    for e in &solver_entries {
        let s: SolverKind = e.value.parse().map_err(|m: String| line_err(e.line, m))?;
        if solvers.contains(&s) {
            return Err(line_err(e.line, format!("solver {} listed twice", s.tag())));
        }
        solvers.push(s);
    }
    let mut seeds = Vec::new();
    for e in &seed_entries {
        parse_seeds(e, &mut seeds)?;
    }
    seeds.sort_unstable();
    if seeds.windows(2).any(|w| w[0] == w[1]) {
        return Err(HarnessError::Config("duplicate seed".into()));
    }
    if seeds.is_empty() {
        return Err(HarnessError::Config("no seed given".into()));
    }
    if solvers.is_empty() {
        return Err(HarnessError::Config("no solver given".into()));
    }

    let get = |key: &str| single.get(key);
    let n = get("n").map(|e| parse_value(e, "n")).transpose()?.unwrap_or(problem.default_n());
    let eps_hat = get("eps_hat").map(|e| parse_value(e, "eps_hat")).transpose()?.unwrap_or(problem.default_eps_hat());
    if !(eps_hat >= 0.0) || !eps_hat.is_finite() {
        return Err(HarnessError::Config("eps_hat must be a finite nonnegative number".into()));
    }

    let mut tf = TfConfig {
        m_max: problem.default_m_max(),
        tau_prime: problem.default_tau_prime(),
        eps_hat: Some(eps_hat),
        ..TfConfig::default()
    };
    if let Some(e) = get("m_max") {
        tf.m_max = parse_value(e, "m_max")?;
    }
    if let Some(e) = get("k_max") {
        tf.k_max = Some(parse_value(e, "k_max")?);
    }
    if let Some(e) = get("tau") {
        tf.tau = parse_value(e, "tau")?;
    }
    if let Some(e) = get("tau_prime") {
        tf.tau_prime = parse_value(e, "tau_prime")?;
    }
    if let Some(e) = get("eta") {
        tf.eta = parse_value(e, "eta")?;
    }
    if let Some(e) = get("first_stop") {
        tf.first_stop = parse_first_stop(e)?;
    }
    if let Some(e) = get("range_restricted") {
        tf.range_restricted = parse_bool(e, "range_restricted")?;
    }
    let mut gmres_arnoldi = ArnoldiOptions::default();
    if let Some(e) = get("arnoldi") {
        let variant = match e.value.as_str() {
            "mgs" => ArnoldiVariant::ModifiedGramSchmidt,
            "householder" => ArnoldiVariant::Householder,
            v => return Err(line_err(e.line, format!("unknown arnoldi variant '{v}'"))),
        };
        tf.arnoldi.variant = variant;
        gmres_arnoldi.variant = variant;
    }
    if let Some(e) = get("reorthogonalize") {
        let r = parse_bool(e, "reorthogonalize")?;
        tf.arnoldi.reorthogonalize = r;
        gmres_arnoldi.reorthogonalize = r;
    }
    tf.arnoldi.breakdown_tol = match get("breakdown_tol") {
        Some(e) => parse_value(e, "breakdown_tol")?,
        None => FIRST_CYCLE_BREAKDOWN_TOL,
    };
    if !(tf.arnoldi.breakdown_tol > 0.0) {
        return Err(HarnessError::Config("breakdown_tol must be positive".into()));
    }
    tf.validate().map_err(|e| HarnessError::Config(e.to_string()))?;

    let output_dir = match get("output_dir") {
        Some(e) => base_dir.join(&e.value),
        None => base_dir.join("output"),
    };
    let timing = get("timing").map(|e| parse_bool(e, "timing")).transpose()?.unwrap_or(false);
    let convergence = get("convergence").map(|e| parse_bool(e, "convergence")).transpose()?.unwrap_or(false);
    let psf_size = get("psf_size").map(|e| parse_value(e, "psf_size")).transpose()?.unwrap_or(problem.default_psf_size());
    let boundary = get("boundary").map(parse_boundary).transpose()?.unwrap_or(problem.default_boundary());
    let image = get("image").map(|e| base_dir.join(&e.value));

    let cfg = ExperimentConfig {
        problem,
        n,
        eps_hat,
        seeds,
        solvers,
        tf,
        gmres_arnoldi,
        output_dir,
        timing,
        convergence,
        psf_size,
        boundary,
        image,
    };
    cfg.check()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Defaults for `problem` with the given seeds and solvers.
    pub fn new(problem: Problem, seeds: Vec<u64>, solvers: Vec<SolverKind>) -> Result<Self, HarnessError> {
        let mut text = format!("problem = {}\n", problem.tag());
        for s in &seeds {
            text.push_str(&format!("seed = {s}\n"));
        }
        for s in &solvers {
            text.push_str(&format!("solver = {}\n", s.tag()));
        }
        parse_config(&text, Path::new("."))
    }

    /// TF settings for one transpose-free solver.
    pub fn tf_for(&self, solver: SolverKind) -> TfConfig {
        let inner = if solver == SolverKind::TfCgne { InnerSolver::Cg } else { InnerSolver::Minres };
        TfConfig { inner, ..self.tf }
    }

    /// Problem/solver combinations that cannot run, rejected before any work.
    fn check(&self) -> Result<(), HarnessError> {
        let p = self.problem;
        if p.is_deblur() {
            if self.psf_size % 2 == 0 || self.psf_size == 0 {
                return Err(HarnessError::Config("psf_size must be odd".into()));
            }
            if self.n < 8 {
                return Err(HarnessError::Config("image side must be at least 8".into()));
            }
            for s in &self.solvers {
                let needs_transpose = matches!(s, SolverKind::Cgls | SolverKind::Cgne);
                if *s == SolverKind::Tsvd {
                    return Err(HarnessError::Config("tsvd needs a dense matrix; not available for deblurring".into()));
                }
                if needs_transpose && self.boundary == BoundaryCondition::Antireflective {
                    return Err(HarnessError::Config(format!(
                        "{} needs an exact transpose, which antireflective blur does not provide",
                        s.tag()
                    )));
                }
            }
        } else {
            let ok = match p {
                Problem::ILaplace1 | Problem::ILaplace2 => self.n >= 2,
                Problem::Baart => self.n >= 4 && self.n % 2 == 0,
                Problem::Heat => self.n >= 10 && self.n % 2 == 0,
                _ => true,
            };
            if !ok {
                return Err(HarnessError::Config(format!("invalid size n = {} for {}", self.n, p.tag())));
            }
            if self.image.is_some() {
                return Err(HarnessError::Config("image only applies to deblurring problems".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, HarnessError> {
        parse_config(text, Path::new("/base"))
    }

    #[test]
    fn defaults_follow_the_problem() {
        let c = parse("problem = baart\nseed = 1..3\nsolver = tf_cgls\nsolver = gmres\n").unwrap();
        assert_eq!(c.n, 200);
        assert_eq!(c.seeds, vec![1, 2, 3]);
        assert_eq!(c.solvers, vec![SolverKind::TfCgls, SolverKind::Gmres]);
        assert_eq!(c.tf.tau_prime, 1e-14);
        assert_eq!(c.tf.m_max, 40);
        assert_eq!(c.tf.eps_hat, Some(1e-2));
        assert_eq!(c.output_dir, PathBuf::from("/base/output"));

        let c = parse("problem = deblur_gaussian\nseed = 4\nsolver = rp_gmres\n").unwrap();
        assert_eq!((c.n, c.tf.m_max, c.psf_size), (64, 50, 11));
        assert_eq!(c.boundary, BoundaryCondition::Antireflective);
        assert_eq!(c.eps_hat, 2e-2);
        assert_eq!(c.tf.first_stop, FirstStop::SigmaProduct);
    }

    #[test]
    fn overrides_and_comments() {
        let text = "# heading\nproblem = i_laplace_1  # trailing\n\nn = 50\neps_hat = 1e-3\nseed = 7\nseed = 2\n\
                    solver = tf_cgne\nm_max = 25\nk_max = 9\nfirst_stop = fixed:12\narnoldi = householder\n\
                    timing = true\noutput_dir = out/x\n";
        let c = parse(text).unwrap();
        assert_eq!(c.seeds, vec![2, 7]);
        assert_eq!((c.n, c.eps_hat, c.tf.m_max, c.tf.k_max), (50, 1e-3, 25, Some(9)));
        assert_eq!(c.tf.first_stop, FirstStop::Fixed(12));
        assert_eq!(c.tf.arnoldi.variant, ArnoldiVariant::Householder);
        assert_eq!(c.tf_for(SolverKind::TfCgne).inner, InnerSolver::Cg);
        assert!(c.timing);
        assert_eq!(c.output_dir, PathBuf::from("/base/out/x"));
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("problem = nope\nseed = 1\nsolver = gmres\n", 1),
            ("problem = baart\nseed = 1\nsolver = lsqr\n", 3),
            ("problem = baart\nseed = 1\nsolver = gmres\ncolour = red\n", 4),
            ("problem = baart\nseed = x\nsolver = gmres\n", 2),
            ("problem = baart\nseed = 1\nsolver = gmres\nn = 10\nn = 12\n", 5),
            ("problem = baart\nseed = 1\nsolver = gmres\njunk\n", 4),
            ("problem = baart\nseed = 1\nsolver = gmres\nfirst_stop = fixed:0\n", 4),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(HarnessError::ConfigLine { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn invalid_combinations_are_config_errors() {
        for text in [
            "problem = baart\nsolver = gmres\n",
            "problem = baart\nseed = 1\n",
            "problem = baart\nseed = 1\nseed = 1\nsolver = gmres\n",
            "problem = baart\nseed = 1\nsolver = gmres\nn = 7\n",
            "problem = baart\nseed = 1\nsolver = gmres\neta = 1.0\n",
            "problem = deblur_gaussian\nseed = 1\nsolver = cgls\n",
            "problem = deblur_wide\nseed = 1\nsolver = tsvd\n",
            "seed = 1\nsolver = gmres\n",
        ] {
            let e = parse(text).unwrap_err();
            assert!(e.is_config(), "{text}: {e}");
        }
        assert!(parse("problem = deblur_wide\nseed = 1\nsolver = cgls\n").is_ok());
    }
}
