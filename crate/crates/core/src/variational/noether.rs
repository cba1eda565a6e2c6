use crate::error::Result;
use crate::solver::{totals, Leapfrog, Totals};

/// Totals of one step of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub step: usize,
    pub time: f64,
    pub totals: Totals,
}

/// Runs `steps` leapfrog steps and records the totals at step 0 and after
/// every step.
pub fn record_run(lf: &mut Leapfrog, steps: usize) -> Result<Vec<Record>> {
    let m = *lf.material();
    let dt = lf.dt();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Record {
        step: lf.steps_taken(),
        time: lf.time(),
        totals: totals(lf.state(), &m),
    });
    lf.run(steps, |n, s| {
        out.push(Record {
            step: n,
            time: n as f64 * dt,
            totals: totals(s, &m),
        })
    })?;
    Ok(out)
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len().min(y.len());
    let nf = n as f64;
    let mx = x[..n].iter().sum::<f64>() / nf;
    let my = y[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (a, b) in x[..n].iter().zip(&y[..n]) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = x[..n]
        .iter()
        .zip(&y[..n])
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let slope_stderr = if n > 2 && sxx > 0.0 {
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        slope_stderr,
    }
}

/// Drift of a conserved vector total over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    /// `max_t |X(t) - X(0)| / scale` over components.
    pub max_relative_drift: f64,
    /// Largest magnitude scale seen in the run.
    pub scale: f64,
    /// Per-component fit of `X(t)` against time.
    pub fits: [LinearFit; 3],
    /// Every slope is within 1.96 standard errors of zero, or its effect over
    /// the run is at roundoff level.
    pub slope_consistent_with_zero: bool,
}

fn drift(records: &[Record], value: impl Fn(&Totals) -> [f64; 3], scale: impl Fn(&Totals) -> f64) -> DriftReport {
    let scale = records
        .iter()
        .map(|r| scale(&r.totals))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let first = records.first().map(|r| value(&r.totals)).unwrap_or([0.0; 3]);
    let mut worst = 0.0_f64;
    for r in records {
        let v = value(&r.totals);
        for a in 0..3 {
            worst = worst.max((v[a] - first[a]).abs());
        }
    }
    let t: Vec<f64> = records.iter().map(|r| r.time).collect();
    let span = t.last().copied().unwrap_or(0.0) - t.first().copied().unwrap_or(0.0);
    let fits: [LinearFit; 3] = std::array::from_fn(|a| {
        let y: Vec<f64> = records.iter().map(|r| value(&r.totals)[a]).collect();
        linear_fit(&t, &y)
    });
    let slope_consistent_with_zero = fits
        .iter()
        .all(|f| f.slope.abs() <= 1.96 * f.slope_stderr || (f.slope * span).abs() <= 1e-12 * scale);
    DriftReport {
        max_relative_drift: worst / scale,
        scale,
        fits,
        slope_consistent_with_zero,
    }
}

/// Drift of the total linear momentum `Π = Σ h³ ρ u̇`, relative to `Σ h³ ρ|u̇|`.
pub fn noether_translation_check(records: &[Record]) -> DriftReport {
    drift(records, |t| t.linear, |t| t.linear_scale)
}

/// Drift of the total angular momentum (orbital minus spin, see
/// [`crate::solver::totals`]) relative to its magnitude scale.
pub fn noether_rotation_check(records: &[Record]) -> DriftReport {
    drift(records, |t| t.angular, |t| t.angular_scale)
}
