//! Strict `key = value` scenario configuration.
//!
//! One dotted key per line, `#` starts a comment. Every violation is
//! collected before reporting, and a key the chosen scenario does not read is
//! an error rather than being ignored.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cosserat_core::MaterialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    VerifyExterior,
    VerifyKinematics,
    VerifyVariational,
    Convergence,
    PlaneWave,
    SpinWave,
    ManufacturedStatic,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::VerifyExterior,
        Scenario::VerifyKinematics,
        Scenario::VerifyVariational,
        Scenario::Convergence,
        Scenario::PlaneWave,
        Scenario::SpinWave,
        Scenario::ManufacturedStatic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::VerifyExterior => "verify-exterior",
            Scenario::VerifyKinematics => "verify-kinematics",
            Scenario::VerifyVariational => "verify-variational",
            Scenario::Convergence => "convergence",
            Scenario::PlaneWave => "plane-wave",
            Scenario::SpinWave => "spin-wave",
            Scenario::ManufacturedStatic => "manufactured-static",
        }
    }

    fn uses(self, group: Group) -> bool {
        use Group::*;
        use Scenario::*;
        match group {
            Grid | Output => true,
            Material => matches!(self, VerifyVariational | PlaneWave | SpinWave | ManufacturedStatic),
            Run => matches!(self, VerifyVariational | PlaneWave | SpinWave),
            Seed => matches!(self, VerifyExterior | VerifyKinematics | VerifyVariational | Convergence),
        }
    }

    /// Whether the scenario integrates in time (and writes `timeseries.csv`).
    pub fn is_dynamic(self) -> bool {
        self.uses(Group::Run)
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                format!("unknown scenario '{s}' (expected one of {})", names.join(", "))
            })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    Grid,
    Material,
    Run,
    Seed,
    Output,
}

/// Keys in canonical order.
const KEYS: [(&str, Group); 16] = [
    ("scenario", Group::Output),
    ("grid.n", Group::Grid),
    ("grid.L", Group::Grid),
    ("material.rho", Group::Material),
    ("material.J", Group::Material),
    ("material.lambda", Group::Material),
    ("material.mu_e", Group::Material),
    ("material.kappa_c", Group::Material),
    ("material.alpha_t", Group::Material),
    ("material.beta_t", Group::Material),
    ("material.gamma_t", Group::Material),
    ("run.dt", Group::Run),
    ("run.steps", Group::Run),
    ("run.outputEvery", Group::Run),
    ("seed", Group::Seed),
    ("output", Group::Output),
];

/// Default step as a fraction of the CFL bound. Leapfrog energy oscillates
/// with relative amplitude about `(ω dt)² / 4`, which this keeps below 1e-4.
pub const DEFAULT_CFL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    /// `None` means [`DEFAULT_CFL_FRACTION`] of the CFL bound.
    pub dt: Option<f64>,
    pub steps: usize,
    /// Snapshot cadence; `None` writes no snapshots.
    pub output_every: Option<usize>,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            dt: None,
            steps: 4096,
            output_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub length: f64,
    pub material: MaterialParams,
    pub run: RunParams,
    pub seed: u64,
    pub output: PathBuf,
}

impl ScenarioConfig {
    /// A scenario with every other field at its default.
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            n: 32,
            length: 1.0,
            material: MaterialParams::default(),
            run: RunParams::default(),
            seed: 1,
            output: PathBuf::from("output"),
        }
    }

    /// Step used for time integration.
    pub fn dt(&self) -> f64 {
        self.run
            .dt
            .unwrap_or_else(|| DEFAULT_CFL_FRACTION * self.material.cfl_bound(self.length / self.n as f64))
    }

    /// Canonical text: the keys the scenario reads, in fixed order, with
    /// effective values. `parse_config(to_canonical())` returns `self`.
    pub fn to_canonical(&self) -> String {
        let m = &self.material;
        let mut out = String::new();
        for (key, group) in KEYS {
            if key != "scenario" && !self.scenario.uses(group) {
                continue;
            }
            let value = match key {
                "scenario" => self.scenario.name().to_string(),
                "grid.n" => self.n.to_string(),
                "grid.L" => format!("{:?}", self.length),
                "material.rho" => format!("{:?}", m.rho),
                "material.J" => format!("{:?}", m.j),
                "material.lambda" => format!("{:?}", m.lambda),
                "material.mu_e" => format!("{:?}", m.mu_e),
                "material.kappa_c" => format!("{:?}", m.kappa_c),
                "material.alpha_t" => format!("{:?}", m.alpha_t),
                "material.beta_t" => format!("{:?}", m.beta_t),
                "material.gamma_t" => format!("{:?}", m.gamma_t),
                "run.dt" => self.run.dt.map_or_else(|| "auto".to_string(), |d| format!("{d:?}")),
                "run.steps" => self.run.steps.to_string(),
                "run.outputEvery" => match self.run.output_every {
                    Some(k) => k.to_string(),
                    None => continue,
                },
                "seed" => self.seed.to_string(),
                "output" => self.output.display().to_string(),
                _ => unreachable!("key table and serializer disagree"),
            };
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

/// Every violation found in a config text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem(s)):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut errs = Vec::new();
    let mut entries: Vec<(usize, &str, &str)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            errs.push(format!("line {}: expected 'key = value', got '{line}'", lineno + 1));
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.iter().any(|(key, _)| *key == k) {
            errs.push(format!("line {}: unknown key '{k}'", lineno + 1));
        } else if entries.iter().any(|(_, key, _)| *key == k) {
            errs.push(format!("line {}: duplicate key '{k}'", lineno + 1));
        } else {
            entries.push((lineno + 1, k, v));
        }
    }

    let get = |key: &str| entries.iter().find(|(_, k, _)| *k == key).map(|(_, _, v)| *v);
    let scenario = match get("scenario") {
        None => {
            errs.push("missing key 'scenario'".into());
            None
        }
        Some(s) => match s.parse::<Scenario>() {
            Ok(s) => Some(s),
            Err(e) => {
                errs.push(e);
                None
            }
        },
    };
    let mut cfg = ScenarioConfig::new(scenario.unwrap_or(Scenario::VerifyExterior));

    if let Some(s) = scenario {
        for (lineno, key, _) in &entries {
            let group = KEYS.iter().find(|(k, _)| k == key).map(|(_, g)| *g);
            if *key != "scenario" && group.is_some_and(|g| !s.uses(g)) {
                errs.push(format!("line {lineno}: key '{key}' is not used by scenario '{s}'"));
            }
        }
    }

    if let Some(v) = get("grid.n") {
        match v.parse::<i64>() {
            Ok(n) if n >= 4 => cfg.n = n as usize,
            Ok(_) => errs.push("grid.n must be ≥ 4".into()),
            Err(_) => errs.push(format!("grid.n must be an integer, got '{v}'")),
        }
    }
    let mut positive = |key: &str, slot: &mut f64| {
        if let Some(v) = get(key) {
            match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x > 0.0 => *slot = x,
                Ok(_) => errs.push(format!("{key} must be a positive number, got '{v}'")),
                Err(_) => errs.push(format!("{key} must be a number, got '{v}'")),
            }
        }
    };
    positive("grid.L", &mut cfg.length);
    positive("material.rho", &mut cfg.material.rho);
    positive("material.J", &mut cfg.material.j);
    let m = &mut cfg.material;
    for (key, slot) in [
        ("material.lambda", &mut m.lambda),
        ("material.mu_e", &mut m.mu_e),
        ("material.kappa_c", &mut m.kappa_c),
        ("material.alpha_t", &mut m.alpha_t),
        ("material.beta_t", &mut m.beta_t),
        ("material.gamma_t", &mut m.gamma_t),
    ] {
        if let Some(v) = get(key) {
            match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x >= 0.0 => *slot = x,
                Ok(_) => errs.push(format!("{key} must be a non-negative number, got '{v}'")),
                Err(_) => errs.push(format!("{key} must be a number, got '{v}'")),
            }
        }
    }
    if let Err(e) = cfg.material.validate() {
        errs.push(format!("material: {e}"));
    }
    if let Some(v) = get("run.dt") {
        if v != "auto" {
            match v.parse::<f64>() {
                Ok(x) if x.is_finite() && x > 0.0 => cfg.run.dt = Some(x),
                Ok(_) => errs.push(format!("run.dt must be positive or 'auto', got '{v}'")),
                Err(_) => errs.push(format!("run.dt must be a number or 'auto', got '{v}'")),
            }
        }
    }
    let mut count = |key: &str| -> Option<usize> {
        let v = get(key)?;
        match v.parse::<i64>() {
            Ok(x) if x > 0 => Some(x as usize),
            Ok(_) => {
                errs.push(format!("{key} must be ≥ 1"));
                None
            }
            Err(_) => {
                errs.push(format!("{key} must be an integer, got '{v}'"));
                None
            }
        }
    };
    if let Some(s) = count("run.steps") {
        cfg.run.steps = s;
    }
    cfg.run.output_every = count("run.outputEvery");
    if let Some(v) = get("seed") {
        match v.parse::<u64>() {
            Ok(s) => cfg.seed = s,
            Err(_) => errs.push(format!("seed must be a non-negative integer, got '{v}'")),
        }
    }
    if let Some(v) = get("output") {
        if v.is_empty() {
            errs.push("output must not be empty".into());
        } else {
            cfg.output = PathBuf::from(v);
        }
    }

    if errs.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError { violations: errs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("scenario = plane-wave\ngrid.n = 16\ngrid.L = 2.0\n").unwrap();
        assert_eq!(cfg.scenario, Scenario::PlaneWave);
        assert_eq!((cfg.n, cfg.length), (16, 2.0));
        assert_eq!(cfg.material, MaterialParams::default());
        assert_eq!(cfg.run, RunParams::default());
        let text = cfg.to_canonical();
        assert!(text.contains("material.kappa_c = 0.5\n"));
        assert!(text.contains("run.dt = auto\n"));
        assert!(!text.contains("seed"));
    }

    #[test]
    fn negative_grid_is_rejected_with_message() {
        let e = parse_config("scenario = convergence\ngrid.n = -4\n").unwrap_err();
        assert_eq!(e.violations, vec!["grid.n must be ≥ 4".to_string()]);
    }

    #[test]
    fn every_violation_is_reported() {
        let text = "scenario = verify-exterior\ngrid.n = 2\ngrid.L = -1\nbogus = 3\nrun.steps = 10\nnot a pair\n";
        let e = parse_config(text).unwrap_err();
        assert_eq!(e.violations.len(), 5, "{e}");
        assert!(e.violations.iter().any(|v| v.contains("unknown key 'bogus'")));
        assert!(e.violations.iter().any(|v| v.contains("'run.steps' is not used")));
    }

    #[test]
    fn unknown_scenario_is_rejected() {
        let e = parse_config("scenario = warp-drive\n").unwrap_err();
        assert!(e.violations[0].starts_with("unknown scenario 'warp-drive'"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_config("# header\n\nscenario = spin-wave # inline\nrun.steps = 7\n").unwrap();
        assert_eq!(cfg.run.steps, 7);
    }

    #[test]
    fn inadmissible_material_is_rejected() {
        let e = parse_config("scenario = plane-wave\nmaterial.mu_e = 0\nmaterial.kappa_c = 0\nmaterial.lambda = 0\nmaterial.J = 0\n")
            .unwrap_err();
        assert!(e.violations.iter().any(|v| v.contains("material.J")));
    }

    #[test]
    fn desk_defaults_round_trip_to_canonical_form() {
        let text = "\
scenario = verify-variational
grid.n = 32
grid.L = 1.0
material.rho = 1.0
material.J = 0.1
material.lambda = 1.0
material.mu_e = 1.0
material.kappa_c = 0.5
material.alpha_t = 0.1
material.beta_t = 0.1
material.gamma_t = 0.2
run.dt = auto
run.steps = 4096
seed = 1
output = output
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.to_canonical(), text);
        assert_eq!(parse_config(&cfg.to_canonical()).unwrap(), cfg);
    }
}
