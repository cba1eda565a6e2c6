//! The seven scenarios. Each writes `summary.csv` (and, where relevant,
//! `orders.csv`, `timeseries.csv` and snapshots) into its output directory.

use std::f64::consts::TAU;
use std::fs;
use std::path::Path;

use cosserat_core::convergence::{
    self, find, manufactured_static_residual, order_rows, Order, OrderRow, StudyFields,
};
use cosserat_core::exterior::{exterior_derivative, torsion};
use cosserat_core::kinematics::{
    deformation_gradient, first_order_coframe_variation, linearize_coframe, linearized_strain,
    MotionField,
};
use cosserat_core::mat3;
use cosserat_core::random::{rng, SmoothMatrix, SmoothScalar, SmoothVector};
use cosserat_core::solver::dispersion::{branches, lattice_wavenumber, leapfrog_frequency};
use cosserat_core::solver::{angular_momentum_residual, constitutive, linear_momentum_residual, totals};
use cosserat_core::variational::{
    conjugate_forms, force_balance_residual, frame_volume_coefficients, functional_gradient_check,
    functional_gradient_check_with, linear_fit, moment_axial, moment_balance_residual,
    momentum_rates, noether_rotation_check, noether_translation_check, slice_residuals, Record,
    ResidualVariant, Trajectory,
};
use cosserat_core::{
    Coframe, Connection, FormField, Grid, LagrangianSpec, Leapfrog, MaterialParams,
    MicropolarState, Sources, ValueKind, VectorField,
};
use rand::Rng;

use crate::config::{Scenario, ScenarioConfig};
use crate::output::{snapshot_name, write_orders, write_summary, write_timeseries, write_vtk};
use crate::report::{Check, Report};
use crate::RunError;

/// Runs `cfg` and writes its artifacts into `out`.
pub fn run_scenario(cfg: &ScenarioConfig, out: &Path) -> Result<Report, RunError> {
    run_scenario_with_grids(cfg, out, None)
}

/// Like [`run_scenario`]; `grids` overrides the `{n, 2n, 4n}` list of the
/// convergence scenario.
pub fn run_scenario_with_grids(
    cfg: &ScenarioConfig,
    out: &Path,
    grids: Option<&[usize]>,
) -> Result<Report, RunError> {
    fs::create_dir_all(out)?;
    let checks = match cfg.scenario {
        Scenario::VerifyExterior => verify_exterior(cfg, out)?,
        Scenario::VerifyKinematics => verify_kinematics(cfg, out)?,
        Scenario::VerifyVariational => verify_variational(cfg, out)?,
        Scenario::Convergence => {
            let default = [cfg.n, 2 * cfg.n, 4 * cfg.n];
            convergence_scenario(cfg, out, grids.unwrap_or(&default))?
        }
        Scenario::PlaneWave => plane_wave(cfg, out)?,
        Scenario::SpinWave => spin_wave(cfg, out)?,
        Scenario::ManufacturedStatic => manufactured_static(cfg, out)?,
    };
    write_summary(&out.join("summary.csv"), &checks)?;
    Ok(Report {
        scenario: cfg.scenario.name().to_string(),
        checks,
    })
}

/// Every scenario at its defaults on an `n`-grid, each in its own
/// subdirectory of `out`.
pub fn verify_all(n: usize, out: &Path) -> Result<Vec<Report>, RunError> {
    Scenario::ALL
        .into_iter()
        .map(|s| {
            let mut cfg = ScenarioConfig::new(s);
            cfg.n = n;
            run_scenario(&cfg, &out.join(s.name()))
        })
        .collect()
}

fn grid(cfg: &ScenarioConfig) -> Result<Grid, RunError> {
    Ok(Grid::new(cfg.n, cfg.length)?)
}

fn study(cfg: &ScenarioConfig) -> StudyFields {
    StudyFields {
        seed: cfg.seed,
        amplitude: 1.0,
        length: cfg.length,
    }
}

/// Observed order of a registered residual between `n` and `2n`.
fn pair_order(
    cfg: &ScenarioConfig,
    label: &str,
    residual: &str,
    rows: &mut Vec<OrderRow>,
) -> Result<Check, RunError> {
    let spec = find(residual).expect("registered residual");
    let r = order_rows(&spec, &[cfg.n, 2 * cfg.n], &study(cfg))?;
    let check = Check::order(label, r[0].order);
    rows.extend(r);
    Ok(check)
}

fn verify_exterior(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let g = grid(cfg)?;
    let l = cfg.length;
    let mut r = rng(cfg.seed);
    let s = SmoothScalar::random(&mut r, l, 1.0);
    let m = SmoothMatrix::random(&mut r, l, 1.0);
    let forms = [
        FormField::from_fn(g, 0, ValueKind::Scalar, |x, _, _| s.value(x))?,
        FormField::from_fn(g, 1, ValueKind::Frame, |x, v, c| m.value(x)[v][c])?,
        FormField::from_fn(g, 1, ValueKind::So3, |x, v, c| m.value(x)[c][v])?,
    ];
    let mut dd = 0.0_f64;
    for f in &forms {
        dd = dd.max(exterior_derivative(&exterior_derivative(f)?)?.max_abs());
    }
    let e = Coframe::from_matrix_fn(g, |x| {
        let v = m.value(x);
        std::array::from_fn(|i| std::array::from_fn(|a| mat3::IDENTITY[i][a] + 0.1 * v[i][a]))
    })?;
    let flat = (&torsion(&e, &Connection::zero(g))? - &exterior_derivative(e.field())?).max_abs();

    let mut rows = Vec::new();
    let checks = vec![
        Check::at_most("dd_zero", dd, 1e-12),
        Check::at_most("flat_reduction", flat, 0.0),
        pair_order(cfg, "bianchi_1", "bianchi_1", &mut rows)?,
        pair_order(cfg, "bianchi_2", "bianchi_2", &mut rows)?,
        pair_order(cfg, "pure_gauge_flat", "curvature_pure_gauge", &mut rows)?,
        pair_order(cfg, "pure_gauge_torsion_free", "torsion_defect_free", &mut rows)?,
    ];
    write_orders(&out.join("orders.csv"), &rows)?;
    Ok(checks)
}

fn smooth_state(g: Grid, seed: u64, amplitude: f64) -> MicropolarState {
    let mut r = rng(seed);
    let l = g.length();
    let mut st = MicropolarState::zeros(g);
    st.displacement = SmoothVector::random(&mut r, l, amplitude).sample(&g);
    st.microrotation = SmoothVector::random(&mut r, l, amplitude).sample(&g);
    st.velocity = SmoothVector::random(&mut r, l, amplitude).sample(&g);
    st.spin = SmoothVector::random(&mut r, l, amplitude).sample(&g);
    st
}

/// `max |F_h - F|` for `y = X + 0.01 sin(2π X₂ / L) e₁`.
fn deformation_gradient_error(n: usize, l: f64) -> Result<f64, RunError> {
    let g = Grid::new(n, l)?;
    let k = TAU / l;
    let motion = MotionField::from_placement_fn(g, |x| [x[0] + 0.01 * (k * x[1]).sin(), x[1], x[2]])?;
    let f = deformation_gradient(&motion)?;
    let mut worst = 0.0_f64;
    for p in 0..g.len() {
        let x = g.position(p);
        let mut exact = mat3::IDENTITY;
        exact[0][1] = 0.01 * k * (k * x[1]).cos();
        worst = worst.max(mat3::max_abs_diff(&f.get(p), &exact));
    }
    Ok(worst)
}

/// `max |(e(ε) - I)/ε - δe|` for each `ε`.
pub fn linearization_defects(state: &MicropolarState, eps: &[f64]) -> Result<Vec<f64>, RunError> {
    let de = first_order_coframe_variation(state);
    let g = *state.grid();
    eps.iter()
        .map(|&e| {
            let t = linearize_coframe(state, e)?.to_tensor();
            let mut worst = 0.0_f64;
            for p in 0..g.len() {
                let (a, b) = (t.get(p), de.get(p));
                for i in 0..3 {
                    for j in 0..3 {
                        let fd = (a[i][j] - mat3::IDENTITY[i][j]) / e;
                        worst = worst.max((fd - b[i][j]).abs());
                    }
                }
            }
            Ok(worst)
        })
        .collect()
}

fn verify_kinematics(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let g = grid(cfg)?;
    let mut rows = Vec::new();
    let mut checks = vec![
        pair_order(cfg, "holonomic_torsion", "torsion_holonomic", &mut rows)?,
        pair_order(cfg, "compatibility", "compatibility", &mut rows)?,
        pair_order(cfg, "poincare", "poincare", &mut rows)?,
        pair_order(cfg, "lie_decomposition", "lie_decomposition", &mut rows)?,
    ];
    let (ec, ef) = (
        deformation_gradient_error(cfg.n, cfg.length)?,
        deformation_gradient_error(2 * cfg.n, cfg.length)?,
    );
    rows.push(OrderRow {
        residual: "deformation_gradient".into(),
        n_coarse: cfg.n,
        n_fine: 2 * cfg.n,
        err_coarse: ec,
        err_fine: ef,
        order: Order::classify(ec, ef),
    });
    checks.push(Check::order("deformation_gradient", Order::classify(ec, ef)));

    let mut r = rng(cfg.seed);
    let theta: [f64; 3] = std::array::from_fn(|_| r.gen_range(-0.1..0.1));
    let shift: [f64; 3] = std::array::from_fn(|_| r.gen_range(-0.1..0.1));
    let mut rigid = MicropolarState::zeros(g);
    rigid.displacement = VectorField::uniform(g, shift);
    rigid.macro_gradient = mat3::cross_matrix(theta);
    rigid.microrotation = VectorField::uniform(g, theta.map(|v| -v));
    let s = linearized_strain(&rigid);
    checks.push(Check::at_most(
        "matched_rigid_strain",
        s.strain.max_abs().max(s.wryness.max_abs()),
        1e-12,
    ));

    let state = smooth_state(g, cfg.seed ^ 0x5eed, 0.1);
    let d = linearization_defects(&state, &[1e-2, 1e-3, 1e-4])?;
    checks.push(Check::within("linearization_ratio_1", d[0] / d[1], 8.0, 12.0));
    checks.push(Check::within("linearization_ratio_2", d[1] / d[2], 8.0, 12.0));
    write_orders(&out.join("orders.csv"), &rows)?;
    Ok(checks)
}

/// Transverse spin waves odd about the periodic seam, so the lattice angular
/// momentum is conserved.
pub fn spin_wave_state(g: Grid, amplitude: f64) -> MicropolarState {
    let c = g.centroid();
    let k = TAU / g.length();
    let mut st = MicropolarState::zeros(g);
    st.spin = VectorField::from_fn(g, |x| {
        [
            0.5 * amplitude * (k * (x[1] - c[1])).sin(),
            0.0,
            amplitude * (k * (x[0] - c[0])).sin(),
        ]
    });
    st
}

fn run_records(
    lf: &mut Leapfrog,
    steps: usize,
    snapshots: Option<(usize, &Path)>,
    mut extra: impl FnMut(&MicropolarState),
) -> Result<Vec<Record>, RunError> {
    let m = *lf.material();
    let dt = lf.dt();
    let record = |n: usize, s: &MicropolarState| Record {
        step: n,
        time: n as f64 * dt,
        totals: totals(s, &m),
    };
    let mut out = vec![record(0, lf.state())];
    extra(lf.state());
    if let Some((_, dir)) = snapshots {
        write_vtk(&dir.join(snapshot_name(0)), lf.state(), 0)?;
    }
    for n in 1..=steps {
        lf.step()?;
        out.push(record(n, lf.state()));
        extra(lf.state());
        if let Some((every, dir)) = snapshots {
            if n % every == 0 {
                write_vtk(&dir.join(snapshot_name(n)), lf.state(), n)?;
            }
        }
    }
    Ok(out)
}

fn energy_drift(records: &[Record]) -> f64 {
    let e0 = records[0].totals.energy;
    records
        .iter()
        .map(|r| (r.totals.energy - e0).abs())
        .fold(0.0, f64::max)
        / e0.abs().max(f64::MIN_POSITIVE)
}

fn slope_error(records: &[Record], value: impl Fn(&Record) -> [f64; 3], expected: [f64; 3]) -> f64 {
    let t: Vec<f64> = records.iter().map(|r| r.time).collect();
    let norm = expected.iter().map(|v| v * v).sum::<f64>().sqrt();
    (0..3)
        .map(|a| {
            let y: Vec<f64> = records.iter().map(|r| value(r)[a]).collect();
            (linear_fit(&t, &y).slope - expected[a]).abs()
        })
        .fold(0.0, f64::max)
        / norm
}

fn verify_variational(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let g = grid(cfg)?;
    let m = cfg.material;
    let l = LagrangianSpec::new(m)?;
    let mut checks = Vec::new();

    // action gradient against the balance residuals
    let slices = 5;
    let traj = Trajectory {
        dt: 1.0,
        slices: (0..slices).map(|n| smooth_state(g, cfg.seed ^ (n as u64) << 8, 0.1)).collect(),
    };
    let dir = Trajectory {
        dt: 1.0,
        slices: (0..slices)
            .map(|n| {
                if n == 0 || n + 1 == slices {
                    MicropolarState::zeros(g)
                } else {
                    smooth_state(g, !cfg.seed ^ (n as u64) << 8, 0.1)
                }
            })
            .collect(),
    };
    let rep = functional_gradient_check(&l, &traj, &dir, &[1.0, 0.1])?;
    checks.push(Check::at_most("gradient_check", rep.min_relative_error, 1e-10));
    // negative control: with φ = 0 along the trajectory and δu = 0 the
    // coupling term is the whole gradient, so a flipped sign cannot hide
    let translating = Trajectory {
        dt: 1.0,
        slices: traj
            .slices
            .iter()
            .map(|s| MicropolarState {
                microrotation: VectorField::zeros(g),
                spin: VectorField::zeros(g),
                ..s.clone()
            })
            .collect(),
    };
    let twisting = Trajectory {
        dt: 1.0,
        slices: dir
            .slices
            .iter()
            .map(|s| MicropolarState {
                displacement: VectorField::zeros(g),
                velocity: VectorField::zeros(g),
                ..s.clone()
            })
            .collect(),
    };
    let neg = functional_gradient_check_with(&l, &translating, &twisting, &[1.0], |n| {
        slice_residuals(&l, &translating, n, ResidualVariant::FlippedCoupling)
    })?;
    checks.push(Check::at_least("negative_control", neg.min_relative_error, 1e-2));

    // form language against tensor residuals
    let st = smooth_state(g, cfg.seed ^ 0xf0, 0.3);
    let mut r = rng(cfg.seed ^ 0xf1);
    let len = cfg.length;
    let acc = SmoothVector::random(&mut r, len, 1.0).sample(&g);
    let sacc = SmoothVector::random(&mut r, len, 1.0).sample(&g);
    let src = Sources {
        force: SmoothVector::random(&mut r, len, 1.0).sample(&g),
        couple: SmoothVector::random(&mut r, len, 1.0).sample(&g),
    };
    let cf = conjugate_forms(&l, &st);
    let (pd, qd) = momentum_rates(&m, &acc, &sacc, &src);
    let w = Connection::zero(g);
    let fr = frame_volume_coefficients(&force_balance_residual(&cf, &w, &pd)?)?;
    let mr = moment_axial(&moment_balance_residual(&cf, &Coframe::identity(g), &w, &qd)?)?;
    let s = constitutive(&linearized_strain(&st), &m);
    let ft = linear_momentum_residual(&s.force, &src.force, &acc, m.rho);
    let mt = angular_momentum_residual(&s.force, &s.couple, &src.couple, &sacc, m.j);
    let diff = |a: &VectorField, b: &VectorField| {
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    checks.push(Check::at_most("form_tensor_force", diff(&fr, &ft), 1e-13));
    checks.push(Check::at_most("form_tensor_moment", diff(&mr, &mt), 1e-13));

    // Noether totals along solver runs
    let dt = cfg.dt();
    let steps = cfg.run.steps;
    let mut lf = Leapfrog::new(smooth_state(g, cfg.seed ^ 0xa0, 0.01), m, Sources::none(g), dt)?;
    let rec = run_records(&mut lf, steps, None, |_| {})?;
    checks.push(Check::at_most("noether_linear", noether_translation_check(&rec).max_relative_drift, 1e-10));

    let mut lf = Leapfrog::new(spin_wave_state(g, 0.01), m, Sources::none(g), dt)?;
    let snaps = cfg.run.output_every.map(|k| (k, out));
    let rec = run_records(&mut lf, steps, snaps, |_| {})?;
    let rot = noether_rotation_check(&rec);
    checks.push(Check::at_most("noether_angular", rot.max_relative_drift, 1e-4));
    checks.push(Check::flag("noether_angular_slope", rot.slope_consistent_with_zero));
    write_timeseries(&out.join("timeseries.csv"), &rec)?;

    let mut r = rng(cfg.seed ^ 0xb0);
    let f: [f64; 3] = std::array::from_fn(|_| r.gen_range(-0.1..0.1));
    let c: [f64; 3] = std::array::from_fn(|_| r.gen_range(-0.1..0.1));
    let vol = g.volume();
    let mut lf = Leapfrog::new(MicropolarState::zeros(g), m, Sources::uniform(g, f, [0.0; 3]), dt)?;
    let rec = run_records(&mut lf, steps, None, |_| {})?;
    checks.push(Check::at_most(
        "impulse_force_slope",
        slope_error(&rec, |r| r.totals.linear, f.map(|v| v * vol)),
        1e-6,
    ));
    // with κ_c = 0 a uniform couple only spins the microstructure
    let decoupled = MaterialParams { kappa_c: 0.0, ..m };
    let dt0 = cfg.run.dt.unwrap_or(dt.min(
        crate::config::DEFAULT_CFL_FRACTION * decoupled.cfl_bound(g.spacing()),
    ));
    let mut lf = Leapfrog::new(MicropolarState::zeros(g), decoupled, Sources::uniform(g, [0.0; 3], c), dt0)?;
    let rec = run_records(&mut lf, steps, None, |_| {})?;
    checks.push(Check::at_most(
        "impulse_couple_slope",
        slope_error(&rec, |r| r.totals.spin, c.map(|v| v * vol)),
        1e-6,
    ));
    Ok(checks)
}

fn convergence_scenario(cfg: &ScenarioConfig, out: &Path, grids: &[usize]) -> Result<Vec<Check>, RunError> {
    let table = convergence::convergence_study(grids, &study(cfg), None)?;
    write_orders(&out.join("orders.csv"), &table.rows)?;
    Ok(table
        .rows
        .iter()
        .map(|r| Check::order(format!("{}_{}_{}", r.residual, r.n_coarse, r.n_fine), r.order))
        .collect())
}

/// Frequency from the zero crossings of a sampled oscillation.
pub fn zero_crossing_frequency(samples: &[f64], dt: f64) -> Option<f64> {
    let mut crossings = Vec::new();
    for (n, w) in samples.windows(2).enumerate() {
        if w[0] == 0.0 || (w[0] < 0.0) != (w[1] < 0.0) {
            let frac = if w[0] == w[1] { 0.0 } else { w[0] / (w[0] - w[1]) };
            crossings.push((n as f64 + frac) * dt);
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}

/// Standing wave of the lowest branch at `k = 2π/L` along x, amplitude `a`,
/// at rest. Returns the state and the complex `(u, φ)` mode.
pub fn plane_wave_state(g: Grid, m: &MaterialParams, a: f64) -> (MicropolarState, [(f64, f64); 6], f64) {
    let k = TAU / g.length();
    let b = branches(m, lattice_wavenumber([k, 0.0, 0.0], g.spacing()))[0];
    let mut st = MicropolarState::zeros(g);
    let field = |off: usize| {
        VectorField::from_fn(g, |x| {
            let (c, s) = ((k * x[0]).cos(), (k * x[0]).sin());
            std::array::from_fn(|i| a * (b.mode[off + i].0 * c - b.mode[off + i].1 * s))
        })
    };
    st.displacement = field(0);
    st.microrotation = field(3);
    (st, b.mode, b.omega)
}

/// `M`-weighted projection of the state onto `Re(mode e^{ikx})`.
pub fn modal_amplitude(st: &MicropolarState, m: &MaterialParams, mode: &[(f64, f64); 6]) -> f64 {
    let g = st.grid();
    let k = TAU / g.length();
    let mut acc = 0.0;
    for p in 0..g.len() {
        let x = g.position(p)[0];
        let (c, s) = ((k * x).cos(), (k * x).sin());
        let (u, f) = (st.displacement.get(p), st.microrotation.get(p));
        for i in 0..3 {
            acc += m.rho * u[i] * (mode[i].0 * c - mode[i].1 * s);
            acc += m.j * f[i] * (mode[3 + i].0 * c - mode[3 + i].1 * s);
        }
    }
    acc
}

fn plane_wave(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let g = grid(cfg)?;
    let m = cfg.material;
    let dt = cfg.dt();
    let (st, mode, omega) = plane_wave_state(g, &m, 1e-3);
    let mut lf = Leapfrog::new(st, m, Sources::none(g), dt)?;
    let mut amp = Vec::with_capacity(cfg.run.steps + 1);
    let snaps = cfg.run.output_every.map(|k| (k, out));
    let rec = run_records(&mut lf, cfg.run.steps, snaps, |s| amp.push(modal_amplitude(s, &m, &mode)))?;
    write_timeseries(&out.join("timeseries.csv"), &rec)?;
    let predicted = leapfrog_frequency(omega, dt);
    let err = zero_crossing_frequency(&amp, dt).map_or(f64::INFINITY, |w| (w - predicted).abs() / predicted);
    Ok(vec![
        Check::at_most("energy_drift", energy_drift(&rec), 1e-4),
        Check::at_most("frequency_error", err, 1e-2),
    ])
}

fn spin_wave(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let g = grid(cfg)?;
    let mut lf = Leapfrog::new(spin_wave_state(g, 0.01), cfg.material, Sources::none(g), cfg.dt())?;
    let snaps = cfg.run.output_every.map(|k| (k, out));
    let rec = run_records(&mut lf, cfg.run.steps, snaps, |_| {})?;
    write_timeseries(&out.join("timeseries.csv"), &rec)?;
    let rot = noether_rotation_check(&rec);
    Ok(vec![
        Check::at_most("noether_linear", noether_translation_check(&rec).max_relative_drift, 1e-10),
        Check::at_most("noether_angular", rot.max_relative_drift, 1e-4),
        Check::flag("noether_angular_slope", rot.slope_consistent_with_zero),
        Check::at_most("energy_drift", energy_drift(&rec), 1e-4),
    ])
}

fn manufactured_static(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<Check>, RunError> {
    let grids = [cfg.n, 2 * cfg.n, 4 * cfg.n];
    let errs = grids
        .iter()
        .map(|&n| manufactured_static_residual(Grid::new(n, cfg.length)?, 0.01, &cfg.material))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<OrderRow> = grids
        .windows(2)
        .zip(errs.windows(2))
        .map(|(n, e)| OrderRow {
            residual: "manufactured_static".into(),
            n_coarse: n[0],
            n_fine: n[1],
            err_coarse: e[0],
            err_fine: e[1],
            order: Order::classify(e[0], e[1]),
        })
        .collect();
    write_orders(&out.join("orders.csv"), &rows)?;
    Ok(rows
        .iter()
        .map(|r| Check::order(format!("manufactured_order_{}_{}", r.n_coarse, r.n_fine), r.order))
        .collect())
}
