//! The named scans. Each one resolves its parameters, computes its rows and
//! returns a table plus a JSON summary.

use clap::ValueEnum;
use hfatom::comparison::solve_comparison;
use hfatom::fewbody::{
    assemble, extrapolate_delta_energy, extrapolate_energy, ground_state_in, simple_bounds, superharmonic_spot_check,
    Family, ModelParams, Regularization, SymmetrySector,
};
use hfatom::lanczos::LanczosConfig;
use hfatom::landau::{delta_bound, solve_scale, DeltaBoundInputs};
use hfatom::meanfield::{hyperstrong_energy, lower_bound, minimize_hyperstrong, Density1D};
use hfatom::par::map_ordered;
use hfatom::schrod1d::{delta_well_exact, Wavefunction1D};
use hfatom::Grid1D;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{usage, CliError};
use crate::table::{Cell, Table};

pub struct ScanOutput {
    pub table: Table,
    pub summary: Value,
    /// Rows whose computation raised an error.
    pub failed_rows: usize,
}

fn grid(half_width: f64, points: usize) -> Result<Grid1D, CliError> {
    Grid1D::new(half_width, points).map_err(|e| CliError::Usage(e.to_string()))
}

fn ladder(half_width: f64, points: &[usize]) -> Result<Vec<(Grid1D, Regularization)>, CliError> {
    if points.is_empty() {
        return usage("grid ladder needs at least one point count");
    }
    points
        .iter()
        .map(|&n| Ok((grid(half_width, n)?, Regularization::default())))
        .collect()
}

fn pairs(flat: &[f64], what: &str) -> Result<Vec<[f64; 2]>, CliError> {
    if !flat.len().is_multiple_of(2) {
        return usage(format!(
            "{what} needs an even number of coordinates, got {}",
            flat.len()
        ));
    }
    Ok(flat.chunks(2).map(|c| [c[0], c[1]]).collect())
}

fn joined(points: &[usize]) -> String {
    points.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn status<T>(r: &hfatom::Result<T>) -> Cell {
    match r {
        Ok(_) => "ok".into(),
        Err(e) => e.to_string().into(),
    }
}

const NAN: f64 = f64::NAN;

// ---------------------------------------------------------------- limit-scan

#[derive(Debug, Default, Clone, clap::Args, Serialize)]
pub struct LimitArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Field strengths, comma separated
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_ladder: Option<Vec<f64>>,
    /// Transverse positions as x1,y1,x2,y2,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_perp: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Limit value e(Z,N); computed when omitted
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_half_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_points: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitParams {
    pub z: f64,
    pub n: usize,
    pub b_ladder: Vec<f64>,
    pub y_perp: Vec<f64>,
    pub half_width: f64,
    pub points: usize,
    pub target: Option<f64>,
    pub target_half_width: f64,
    pub target_points: Vec<usize>,
    pub seed: u64,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            z: 1.0,
            n: 1,
            b_ladder: Vec::new(),
            y_perp: vec![1.0, 0.0],
            half_width: 40.0,
            points: 8001,
            target: None,
            target_half_width: 30.0,
            target_points: vec![201, 401],
            seed: 0,
        }
    }
}

struct Rung {
    length: f64,
    energy: f64,
    kinetic: f64,
    bound: f64,
}

pub fn limit_scan(p: &LimitParams) -> Result<ScanOutput, CliError> {
    if p.b_ladder.is_empty() {
        return usage("b_ladder is empty");
    }
    if let Some(b) = p.b_ladder.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return usage(format!("field strengths must be positive, got {b}"));
    }
    if p.n == 0 {
        return usage("n must be at least 1");
    }
    let y = pairs(&p.y_perp, "y_perp")?;
    if y.len() != p.n {
        return usage(format!("y_perp holds {} positions for n = {}", y.len(), p.n));
    }
    let g = grid(p.half_width, p.points)?;
    let target = match p.target {
        Some(t) => t,
        None if p.n == 1 => delta_well_exact(p.z)?.0.energy,
        None => extrapolate_delta_energy(p.z, p.n, &ladder(p.target_half_width, &p.target_points)?)?.energy,
    };

    let rung = |b: &f64| -> hfatom::Result<Rung> {
        let length = solve_scale(*b)?.length;
        let params = ModelParams::new(p.z, p.n).with_transverse(y.clone()).with_field(*b);
        let h = assemble(Family::ParametricScaled, params, g, Regularization::default())?;
        let gs = ground_state_in(&h, SymmetrySector::None, p.seed, &LanczosConfig::default())?;
        let (kinetic, bound) = if p.n == 1 {
            let psi = Wavefunction1D {
                grid: g,
                values: gs.values,
            };
            let r = y[0][0].hypot(y[0][1]);
            let t = psi.kinetic_energy();
            (t, p.z * delta_bound(&DeltaBoundInputs::new(1.0, t, r, *b)?)?)
        } else {
            (NAN, NAN)
        };
        Ok(Rung {
            length,
            energy: gs.report.energy,
            kinetic,
            bound,
        })
    };
    let results = map_ordered(&p.b_ladder, rung);

    let mut table = Table::new(&[
        "b_field",
        "length",
        "energy",
        "delta_bound",
        "kinetic",
        "target",
        "gap",
        "gap_decreasing",
        "status",
        "z",
        "n",
        "half_width",
        "points",
        "seed",
    ]);
    let mut prev_gap = f64::INFINITY;
    let mut monotone = true;
    let mut within_bound = true;
    let mut failed_rows = 0;
    for (b, r) in p.b_ladder.iter().zip(&results) {
        let (length, energy, kinetic, bound) = match r {
            Ok(x) => (x.length, x.energy, x.kinetic, x.bound),
            Err(_) => {
                failed_rows += 1;
                (NAN, NAN, NAN, NAN)
            }
        };
        let gap = (energy - target).abs();
        let decreasing = gap < prev_gap;
        monotone &= decreasing;
        if bound.is_finite() {
            within_bound &= gap <= bound;
        }
        prev_gap = gap;
        table.push(vec![
            (*b).into(),
            length.into(),
            energy.into(),
            bound.into(),
            kinetic.into(),
            target.into(),
            gap.into(),
            decreasing.into(),
            status(r),
            p.z.into(),
            p.n.into(),
            p.half_width.into(),
            p.points.into(),
            Cell::Int(p.seed as i64),
        ]);
    }
    Ok(ScanOutput {
        table,
        summary: json!({
            "target": target,
            "gap_decreasing": monotone,
            "gap_within_delta_bound": if p.n == 1 { json!(within_bound) } else { Value::Null },
            "failed_rows": failed_rows,
        }),
        failed_rows,
    })
}

// ------------------------------------------------------------ meanfield-scan

#[derive(Debug, Default, Clone, clap::Args, Serialize)]
pub struct MeanfieldArgs {
    /// Couplings λ = N/Z for the minimizer rows
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    /// Charges for the comparison-model rows
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_ladder: Option<Vec<f64>>,
    /// Coupling held fixed along the charge ladder
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_lambda: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff_tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeanfieldParams {
    pub lambdas: Vec<f64>,
    pub z_ladder: Vec<f64>,
    pub z_lambda: f64,
    pub half_width: f64,
    pub points: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub diff_tol: f64,
}

impl Default for MeanfieldParams {
    fn default() -> Self {
        Self {
            lambdas: vec![0.5, 1.0, 2.0],
            z_ladder: vec![5.0, 10.0, 20.0, 40.0],
            z_lambda: 1.0,
            // λ ≥ 2 needs room for the spreading tail.
            half_width: 100.0,
            points: 10001,
            max_iter: 50_000,
            tol: 1e-8,
            diff_tol: 1e-3,
        }
    }
}

pub fn meanfield_scan(p: &MeanfieldParams) -> Result<ScanOutput, CliError> {
    if let Some(l) = p
        .lambdas
        .iter()
        .chain([&p.z_lambda])
        .find(|l| !(**l >= 0.0 && l.is_finite()))
    {
        return usage(format!("couplings must be nonnegative, got {l}"));
    }
    if let Some(z) = p.z_ladder.iter().find(|z| z.is_nan() || **z <= 0.0) {
        return usage(format!("charges must be positive, got {z}"));
    }
    let g = grid(p.half_width, p.points)?;
    let mut table = Table::new(&[
        "kind",
        "lambda",
        "z",
        "closed_form",
        "numeric",
        "diff",
        "ok",
        "status",
        "half_width",
        "points",
        "tol",
    ]);
    let mut failed_rows = 0;
    let mut all_within = true;

    let minima = map_ordered(&p.lambdas, |&l| -> hfatom::Result<(f64, f64)> {
        let closed = hyperstrong_energy(l)?;
        if l == 0.0 {
            return Ok((closed, 0.0));
        }
        Ok((closed, minimize_hyperstrong(l, g, p.max_iter, p.tol)?.energy))
    });
    for (l, r) in p.lambdas.iter().zip(&minima) {
        let (closed, numeric) = match r {
            Ok(v) => *v,
            Err(_) => {
                failed_rows += 1;
                (NAN, NAN)
            }
        };
        let diff = (numeric - closed).abs();
        let ok = diff <= p.diff_tol;
        all_within &= ok;
        table.push(vec![
            "lambda".into(),
            (*l).into(),
            NAN.into(),
            closed.into(),
            numeric.into(),
            diff.into(),
            ok.into(),
            status(r),
            p.half_width.into(),
            p.points.into(),
            p.tol.into(),
        ]);
    }

    let target = hyperstrong_energy(p.z_lambda)?;
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for &z in &p.z_ladder {
        let n = p.z_lambda * z;
        let r = if (n - n.round()).abs() > 1e-9 {
            Err(hfatom::Error::Domain(format!("N = λZ = {n} is not an integer")))
        } else if n.round() == 0.0 {
            Ok(0.0)
        } else {
            solve_comparison(z, n.round() as usize).map(|s| s.energy / z)
        };
        let numeric = match &r {
            Ok(v) => *v,
            Err(_) => {
                failed_rows += 1;
                NAN
            }
        };
        let gap = (numeric - target).abs();
        let ok = gap < prev;
        decreasing &= ok;
        prev = gap;
        table.push(vec![
            "z_ladder".into(),
            p.z_lambda.into(),
            z.into(),
            target.into(),
            numeric.into(),
            gap.into(),
            ok.into(),
            status(&r),
            NAN.into(),
            Cell::Int(0),
            NAN.into(),
        ]);
    }
    Ok(ScanOutput {
        table,
        summary: json!({
            "lambda_rows_within_tol": all_within,
            "z_gap_decreasing": decreasing,
            "failed_rows": failed_rows,
        }),
        failed_rows,
    })
}

// ------------------------------------------------------------- bounds-report

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaChoice {
    #[default]
    Gaussian,
    Meanfield,
}

#[derive(Debug, Default, Clone, clap::Args, Serialize)]
pub struct BoundsArgs {
    /// Cases as Z:N, comma separated
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaChoice>,
    /// Standard deviation of the Gaussian trial density
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_half_width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// Refinement ladder of point counts for the few-body energy
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsParams {
    pub cases: Vec<String>,
    pub epsilon: f64,
    pub sigma: SigmaChoice,
    pub sigma_width: f64,
    pub sigma_half_width: f64,
    pub sigma_points: usize,
    pub half_width: f64,
    pub points: Vec<usize>,
    pub seed: u64,
}

impl Default for BoundsParams {
    fn default() -> Self {
        Self {
            cases: vec!["1:2".into(), "2:2".into(), "2:3".into()],
            epsilon: 0.25,
            sigma: SigmaChoice::Gaussian,
            sigma_width: 2.0,
            sigma_half_width: 30.0,
            sigma_points: 601,
            half_width: 16.0,
            points: vec![81, 101],
            seed: 1,
        }
    }
}

fn parse_case(s: &str) -> Result<(f64, usize), CliError> {
    let bad = || CliError::Usage(format!("case {s:?} is not of the form Z:N"));
    let (z, n) = s.split_once(':').ok_or_else(bad)?;
    let z: f64 = z.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if z.is_nan() || z <= 0.0 || n == 0 {
        return Err(bad());
    }
    Ok((z, n))
}

#[derive(Clone, Copy)]
struct BoundRow {
    lower: f64,
    lower_error: f64,
    numeric: f64,
    numeric_error: f64,
    upper: f64,
}

pub fn bounds_report(p: &BoundsParams) -> Result<ScanOutput, CliError> {
    let cases: Vec<(f64, usize)> = p.cases.iter().map(|c| parse_case(c)).collect::<Result<_, _>>()?;
    if cases.is_empty() {
        return usage("no cases given");
    }
    let sigma_grid = grid(p.sigma_half_width, p.sigma_points)?;
    let few_ladder = ladder(p.half_width, &p.points)?;
    let row = |z: f64, n: usize| -> hfatom::Result<BoundRow> {
        let sigma = match p.sigma {
            SigmaChoice::Gaussian => Density1D::gaussian(sigma_grid, p.sigma_width, 1.0)?,
            SigmaChoice::Meanfield => {
                let fine = Grid1D::new(p.sigma_half_width, 5 * (p.sigma_points - 1) + 1)?;
                let m = minimize_hyperstrong(n as f64 / z, fine, 50_000, 1e-8)?;
                m.density.resample(sigma_grid)?
            }
        };
        let cert = lower_bound(z, n, &sigma, p.epsilon)?;
        let numeric = extrapolate_energy(
            Family::DeltaRescaled,
            &ModelParams::new(z, n),
            &few_ladder,
            SymmetrySector::Bosonic,
            p.seed,
        )?;
        Ok(BoundRow {
            lower: cert.lower_bound,
            lower_error: cert.components.discretization_error,
            numeric: numeric.energy,
            numeric_error: numeric.error_estimate,
            upper: solve_comparison(z, n)?.energy,
        })
    };

    let mut table = Table::new(&[
        "z",
        "n",
        "lambda",
        "lower_bound",
        "lower_error",
        "numeric",
        "numeric_error",
        "upper",
        "ordering_ok",
        "status",
        "epsilon",
        "sigma",
        "half_width",
        "points",
        "seed",
    ]);
    let mut failed_rows = 0;
    let mut all_ok = true;
    for (z, n) in cases {
        let r = row(z, n);
        let v = match &r {
            Ok(v) => *v,
            Err(_) => {
                failed_rows += 1;
                BoundRow {
                    lower: NAN,
                    lower_error: NAN,
                    numeric: NAN,
                    numeric_error: NAN,
                    upper: NAN,
                }
            }
        };
        let slack = v.numeric_error + v.lower_error;
        let ok = v.lower <= v.numeric + slack && v.numeric <= v.upper + v.numeric_error;
        all_ok &= ok;
        table.push(vec![
            z.into(),
            n.into(),
            (n as f64 / z).into(),
            v.lower.into(),
            v.lower_error.into(),
            v.numeric.into(),
            v.numeric_error.into(),
            v.upper.into(),
            ok.into(),
            status(&r),
            p.epsilon.into(),
            match p.sigma {
                SigmaChoice::Gaussian => format!("gaussian:{}", p.sigma_width).into(),
                SigmaChoice::Meanfield => "meanfield".into(),
            },
            p.half_width.into(),
            joined(&p.points).into(),
            Cell::Int(p.seed as i64),
        ]);
    }
    Ok(ScanOutput {
        table,
        summary: json!({ "ordering_ok": all_ok, "failed_rows": failed_rows }),
        failed_rows,
    })
}

// ------------------------------------------------------- superharmonic-check

#[derive(Debug, Default, Clone, clap::Args, Serialize)]
pub struct SuperharmonicArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    /// Circle centres as x1,y1,x2,y2,...
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuperharmonicParams {
    pub z: f64,
    pub centers: Vec<f64>,
    pub radii: Vec<f64>,
    pub angular_points: usize,
    pub half_width: f64,
    pub points: usize,
    pub slack: f64,
}

impl Default for SuperharmonicParams {
    fn default() -> Self {
        Self {
            z: 1.0,
            centers: vec![1.0, 0.0, 2.0, 1.0, 0.5, 0.5],
            radii: vec![0.5, 1.0, 0.3],
            angular_points: 16,
            half_width: 60.0,
            points: 6001,
            slack: 1e-6,
        }
    }
}

pub fn superharmonic_check(p: &SuperharmonicParams) -> Result<ScanOutput, CliError> {
    let centers = pairs(&p.centers, "centers")?;
    if centers.len() != p.radii.len() {
        return usage(format!("{} centres but {} radii", centers.len(), p.radii.len()));
    }
    let g = grid(p.half_width, p.points)?;
    let mut table = Table::new(&[
        "center_x",
        "center_y",
        "radius",
        "center_energy",
        "circle_average",
        "lower_bound",
        "superharmonic_ok",
        "bounds_ok",
        "status",
        "z",
        "angular_points",
        "half_width",
        "points",
    ]);
    let mut failed_rows = 0;
    let mut all_ok = true;
    for (c, &radius) in centers.iter().zip(&p.radii) {
        let r = superharmonic_spot_check(p.z, *c, radius, p.angular_points, g);
        let (center_energy, average, bounds_ok) = match &r {
            Ok(s) => (s.center_energy, s.circle_average, s.bounds_ok),
            Err(_) => {
                failed_rows += 1;
                (NAN, NAN, false)
            }
        };
        let superharmonic = average <= center_energy + p.slack;
        all_ok &= superharmonic && bounds_ok;
        table.push(vec![
            c[0].into(),
            c[1].into(),
            radius.into(),
            center_energy.into(),
            average.into(),
            simple_bounds(p.z, &[*c]).0.into(),
            superharmonic.into(),
            bounds_ok.into(),
            status(&r),
            p.z.into(),
            p.angular_points.into(),
            p.half_width.into(),
            p.points.into(),
        ]);
    }
    Ok(ScanOutput {
        table,
        summary: json!({ "all_ok": all_ok, "failed_rows": failed_rows }),
        failed_rows,
    })
}

// ------------------------------------------------------------ unbinding-scan

#[derive(Debug, Default, Clone, clap::Args, Serialize)]
pub struct UnbindingArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnbindingParams {
    pub z: f64,
    pub n_max: usize,
    pub half_width: f64,
    pub points: Vec<usize>,
    pub seed: u64,
}

impl Default for UnbindingParams {
    fn default() -> Self {
        Self {
            z: 1.0,
            n_max: 3,
            half_width: 16.0,
            points: vec![61, 81],
            seed: 1,
        }
    }
}

/// Exploratory: where adding a particle stops lowering `ê(Z,N)`. No value
/// is asserted.
pub fn unbinding_scan(p: &UnbindingParams) -> Result<ScanOutput, CliError> {
    if p.z.is_nan() || p.z <= 0.0 || p.n_max == 0 {
        return usage("need z > 0 and n_max ≥ 1");
    }
    let few_ladder = ladder(p.half_width, &p.points)?;
    let mut table = Table::new(&[
        "n",
        "energy",
        "error",
        "ionization",
        "comparison",
        "binds",
        "status",
        "z",
        "half_width",
        "points",
        "seed",
    ]);
    let mut failed_rows = 0;
    let mut prev: Option<(f64, f64)> = Some((0.0, 0.0));
    let mut last_bound = 0;
    for n in 1..=p.n_max {
        let r = extrapolate_energy(
            Family::DeltaRescaled,
            &ModelParams::new(p.z, n),
            &few_ladder,
            SymmetrySector::Bosonic,
            p.seed,
        );
        let (energy, error) = match &r {
            Ok(e) => (e.energy, e.error_estimate),
            Err(_) => {
                failed_rows += 1;
                (NAN, NAN)
            }
        };
        let (ionization, binds) = match prev {
            Some((pe, perr)) if energy.is_finite() => {
                let d = pe - energy;
                (d, d > error + perr)
            }
            _ => (NAN, false),
        };
        if binds && last_bound == n - 1 {
            last_bound = n;
        }
        prev = energy.is_finite().then_some((energy, error));
        table.push(vec![
            n.into(),
            energy.into(),
            error.into(),
            ionization.into(),
            solve_comparison(p.z, n)?.energy.into(),
            binds.into(),
            status(&r),
            p.z.into(),
            p.half_width.into(),
            joined(&p.points).into(),
            Cell::Int(p.seed as i64),
        ]);
    }
    Ok(ScanOutput {
        table,
        summary: json!({ "largest_resolved_bound_n": last_bound, "failed_rows": failed_rows }),
        failed_rows,
    })
}
