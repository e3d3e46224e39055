//! Empirical constants for the harmonic-analysis inequalities the solver
//! analysis leans on. Each verifier samples a seeded ensemble, evaluates the
//! ratio `left side / right side` per sample and summarizes the spread.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::besov::{lp_block, lp_block_vector, low_pass, BesovIndex, BlockNorms, DyadicPartition};
use crate::error::{LabError, Result};
use crate::random::{random_scalar, random_scalar_from, random_solenoidal, rng};
use crate::rotation::{rotation_identity_residual, wave_split};
use crate::spectral::field::{physical_many, spectral_many};
use crate::spectral::{gradient, Exponent, Grid, SpectralScalarField, SpectralVectorField};

pub const REPORT_CSV_HEADER: &str = "lemma-id,sample-count,min-ratio,max-ratio,median,seed";

/// Spread of observed ratios for one inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalConstantReport {
    pub lemma_id: String,
    pub sample_count: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub median: f64,
    pub seed: u64,
}

impl EmpiricalConstantReport {
    pub fn from_ratios(lemma_id: impl Into<String>, mut ratios: Vec<f64>, seed: u64) -> Result<Self> {
        let lemma_id = lemma_id.into();
        if lemma_id.contains([',', '\n']) {
            return Err(LabError::InvalidParameter(format!("report id '{lemma_id}' is not CSV-safe")));
        }
        if ratios.is_empty() {
            return Err(LabError::InvalidParameter("empty ensemble".into()));
        }
        ratios.sort_by(f64::total_cmp);
        let n = ratios.len();
        let median = if n % 2 == 1 {
            ratios[n / 2]
        } else {
            0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
        };
        Ok(Self {
            lemma_id,
            sample_count: n,
            min_ratio: ratios[0],
            max_ratio: ratios[n - 1],
            median,
            seed,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.min_ratio.is_finite() && self.max_ratio.is_finite() && self.median.is_finite()
    }

    /// Relative gap of the max ratio and median to another report.
    pub fn relative_spread(&self, other: &Self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        rel(self.max_ratio, other.max_ratio).max(rel(self.median, other.median))
    }

    /// Ids never contain commas, so rows need no quoting.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{}",
            self.lemma_id, self.sample_count, self.min_ratio, self.max_ratio, self.median, self.seed
        )
    }
}

pub fn reports_to_csv(reports: &[EmpiricalConstantReport]) -> String {
    let mut s = format!("{REPORT_CSV_HEADER}\n");
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Parse a report CSV written by [`reports_to_csv`].
pub fn reports_from_csv(text: &str) -> Result<Vec<EmpiricalConstantReport>> {
    let mut lines = text.lines();
    if lines.next() != Some(REPORT_CSV_HEADER) {
        return Err(LabError::Csv { row: 1, message: "unexpected header".into() });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let row = i + 2;
            let bad = |m: &str| LabError::Csv { row, message: m.into() };
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(bad("expected 6 columns"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
            Ok(EmpiricalConstantReport {
                lemma_id: cols[0].to_string(),
                sample_count: cols[1].parse().map_err(|_| bad("bad sample count"))?,
                min_ratio: num(cols[2])?,
                max_ratio: num(cols[3])?,
                median: num(cols[4])?,
                seed: cols[5].parse().map_err(|_| bad("bad seed"))?,
            })
        })
        .collect()
}

/// Independent per-sample seeds derived from `seed`.
fn sample_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut r = rng(seed);
    (0..count).map(|_| r.gen()).collect()
}

fn require_ensemble(size: usize) -> Result<()> {
    if size == 0 {
        return Err(LabError::InvalidParameter("empty ensemble".into()));
    }
    Ok(())
}

/// Largest radius whose pairwise products stay alias-free on the grid.
pub fn product_safe_radius(grid: &Grid) -> f64 {
    (grid.n() / 4 - 1) as f64
}

/// Shells fully inside the resolved band and away from the mean.
fn interior_shells(partition: &DyadicPartition) -> Vec<i32> {
    (partition.j_min().max(1)..partition.j_max()).collect()
}

/// `‖|D|^k f‖_p / (2^{jk}‖f‖_p)` over random fields localized to one shell.
pub fn verify_bernstein(
    partition: &DyadicPartition,
    ensemble_size: usize,
    k_order: f64,
    p: Exponent,
    seed: u64,
) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    let grid = partition.grid();
    let shells = interior_shells(partition);
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&s| {
            let mut r = rng(s);
            let j = shells[r.gen_range(0..shells.len())];
            let f = lp_block(&random_scalar_from(grid, &mut r, grid.n() as f64), partition, j)?;
            let df = f.apply_multiplier(|xi| {
                let m = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                Complex64::new(m.powf(k_order), 0.0)
            })?;
            Ok(lp(&df, p) / (2f64.powf(j as f64 * k_order) * lp(&f, p)))
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalConstantReport::from_ratios(format!("bernstein[k={k_order};p={}]", p.label()), ratios, seed)
}

fn lp(f: &SpectralScalarField, p: Exponent) -> f64 {
    match p {
        Exponent::Two => f.lp_norm(p),
        _ => f.lp_norm_quadrature(p),
    }
}

/// Heat smoothing `‖e^{νtΔ}f‖_{B^{s1}} ≤ C(1 + t^{-(s1-s0)/2})‖f‖_{B^{s0}}`,
/// one ratio per sample and time.
#[allow(clippy::too_many_arguments)]
pub fn verify_heat_smoothing(
    partition: &DyadicPartition,
    nu: f64,
    ensemble_size: usize,
    s0: f64,
    s1: f64,
    times: &[f64],
    p: Exponent,
    q: Exponent,
    seed: u64,
) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    if s1 < s0 {
        return Err(LabError::InvalidParameter(format!("need s0 <= s1 (got {s0} > {s1})")));
    }
    if nu < 0.0 || times.is_empty() || times.iter().any(|t| !(*t > 0.0)) {
        return Err(LabError::InvalidParameter("need nu >= 0 and a nonempty list of positive times".into()));
    }
    let grid = partition.grid();
    let (lo, hi) = (BesovIndex::inhomogeneous(s0, p, q), BesovIndex::inhomogeneous(s1, p, q));
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&s| {
            let f = random_scalar(grid, s, grid.n() as f64 / 3.0);
            let base = BlockNorms::scalar(&f, partition, p).besov(&lo);
            times
                .iter()
                .map(|&t| {
                    let heated = f.apply_multiplier(|xi| {
                        Complex64::new((-nu * t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2])).exp(), 0.0)
                    })?;
                    let top = BlockNorms::scalar(&heated, partition, p).besov(&hi);
                    Ok(top / ((1.0 + t.powf(-0.5 * (s1 - s0))) * base))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalConstantReport::from_ratios("heat-smoothing", ratios.concat(), seed)
}

/// Which commutator bound to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorVariant {
    /// `[v·∇, Δ_j]θ` against `‖∇v‖_∞‖θ‖_{Ḃ^s} + ‖∇θ‖_∞‖v‖_{Ḃ^s}`, `s > 0`.
    Gradient,
    /// `[v·∇, Δ_j]θ` against `‖∇v‖_∞‖θ‖_{Ḃ^s} + ‖θ‖_∞‖v‖_{Ḃ^{s+1}}`, `s > -1`.
    LowRegularity,
    /// `(S_{j-2}u·∇)Δ_j u − Δ_j(u·∇)u` against `‖∇u‖_∞‖u‖_{B^s}`.
    Transport,
}

impl CommutatorVariant {
    pub fn id(self) -> &'static str {
        match self {
            CommutatorVariant::Gradient => "commutator",
            CommutatorVariant::LowRegularity => "commutator-low-regularity",
            CommutatorVariant::Transport => "transport-commutator",
        }
    }
}

/// `a·∇` applied to each scalar in `targets`, all band-limited so the product
/// is exact on the grid.
fn advect(a_phys: &[Vec<f64>], targets: &[&SpectralScalarField]) -> Vec<SpectralScalarField> {
    let grid = targets[0].grid();
    let parts: Vec<SpectralScalarField> = targets.iter().flat_map(|t| (0..3).map(|k| crate::spectral::partial(t, k))).collect();
    let refs: Vec<&SpectralScalarField> = parts.iter().collect();
    let d = physical_many(&refs);
    let products: Vec<Vec<f64>> = d
        .chunks(3)
        .map(|grad| {
            (0..grid.len())
                .map(|i| a_phys[0][i] * grad[0][i] + a_phys[1][i] * grad[1][i] + a_phys[2][i] * grad[2][i])
                .collect()
        })
        .collect();
    let slices: Vec<&[f64]> = products.iter().map(|v| v.as_slice()).collect();
    spectral_many(grid, &slices).expect("grid-sized")
}

/// `max_k ‖∂_k f‖_∞`.
fn grad_sup_scalar(f: &SpectralScalarField) -> f64 {
    gradient(f).to_physical().iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// One ratio per sample for the chosen commutator bound. Data are
/// band-limited to [`product_safe_radius`] so products carry no aliasing.
pub fn verify_commutator(
    partition: &DyadicPartition,
    ensemble_size: usize,
    s: f64,
    p: Exponent,
    q: Exponent,
    variant: CommutatorVariant,
    seed: u64,
) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    match variant {
        CommutatorVariant::Gradient if s <= 0.0 => {
            return Err(LabError::InvalidParameter(format!("commutator bound needs s > 0 (got {s})")))
        }
        CommutatorVariant::LowRegularity if s <= -1.0 => {
            return Err(LabError::InvalidParameter(format!("low-regularity bound needs s > -1 (got {s})")))
        }
        _ => {}
    }
    let grid = partition.grid();
    let radius = product_safe_radius(grid);
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&sd| {
            let mut r = rng(sd);
            let v = random_solenoidal(grid, r.gen(), radius);
            match variant {
                CommutatorVariant::Transport => Ok(transport_ratio(partition, &v, s, p, q)),
                _ => {
                    let theta = random_scalar(grid, r.gen(), radius);
                    Ok(scalar_commutator_ratio(partition, &v, &theta, s, p, q, variant))
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalConstantReport::from_ratios(variant.id(), ratios, seed)
}

/// Left and right sides of the scalar commutator bound.
pub fn scalar_commutator_sides(
    partition: &DyadicPartition,
    v: &SpectralVectorField,
    theta: &SpectralScalarField,
    s: f64,
    p: Exponent,
    q: Exponent,
    variant: CommutatorVariant,
) -> (f64, f64) {
    let v_phys = v.to_physical();
    let transported = advect(&v_phys, &[theta]).pop().expect("one target");
    let terms = partition.shells().map(|j| {
        let block = lp_block(theta, partition, j).expect("shell in range");
        let moved = advect(&v_phys, &[&block]).pop().expect("one target");
        let comm = &moved - &lp_block(&transported, partition, j).expect("shell in range");
        2f64.powf(s * j as f64) * lp(&comm, p)
    });
    let left = crate::besov::lq_sum(terms, q);
    let grad_v = crate::diagnostics::grad_sup(v);
    let hom = |s: f64| BesovIndex::homogeneous(s, p, q);
    let theta_norm = BlockNorms::scalar(theta, partition, p).besov(&hom(s));
    let right = match variant {
        CommutatorVariant::LowRegularity => {
            let theta_sup = lp(theta, Exponent::Infinity);
            grad_v * theta_norm + theta_sup * BlockNorms::vector(v, partition, p).besov(&hom(s + 1.0))
        }
        _ => grad_v * theta_norm + grad_sup_scalar(theta) * BlockNorms::vector(v, partition, p).besov(&hom(s)),
    };
    (left, right)
}

fn scalar_commutator_ratio(
    partition: &DyadicPartition,
    v: &SpectralVectorField,
    theta: &SpectralScalarField,
    s: f64,
    p: Exponent,
    q: Exponent,
    variant: CommutatorVariant,
) -> f64 {
    let (l, r) = scalar_commutator_sides(partition, v, theta, s, p, q, variant);
    l / r
}

/// Left and right sides of the transport commutator bound for solenoidal `u`.
pub fn transport_commutator_sides(
    partition: &DyadicPartition,
    u: &SpectralVectorField,
    s: f64,
    p: Exponent,
    q: Exponent,
) -> (f64, f64) {
    let u_phys = u.to_physical();
    let c = u.components();
    let advected = advect(&u_phys, &[&c[0], &c[1], &c[2]]);
    let advected = SpectralVectorField::new(advected.try_into().expect("three components")).expect("shared grid");
    let terms = partition.shells().map(|j| {
        let low = SpectralVectorField::new([0, 1, 2].map(|i| low_pass(&c[i], partition, j - 2))).expect("shared grid");
        let block = lp_block_vector(u, partition, j).expect("shell in range");
        let bc = block.components();
        let moved = advect(&low.to_physical(), &[&bc[0], &bc[1], &bc[2]]);
        let moved = SpectralVectorField::new(moved.try_into().expect("three components")).expect("shared grid");
        let diff = &moved - &lp_block_vector(&advected, partition, j).expect("shell in range");
        let norm = match p {
            Exponent::Two => diff.l2_norm(),
            _ => diff.lp_norm(p),
        };
        2f64.powf(s * j as f64) * norm
    });
    let left = crate::besov::lq_sum(terms, q);
    let right = crate::diagnostics::grad_sup(u)
        * BlockNorms::vector(u, partition, p).besov(&BesovIndex::inhomogeneous(s, p, q));
    (left, right)
}

fn transport_ratio(partition: &DyadicPartition, u: &SpectralVectorField, s: f64, p: Exponent, q: Exponent) -> f64 {
    let (l, r) = transport_commutator_sides(partition, u, s, p, q);
    l / r
}

/// Hölder exponents for the product bound: `1/p = 1/p1 + 1/p2 = 1/r1 + 1/r2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderSplit {
    pub p: Exponent,
    pub p1: Exponent,
    pub p2: Exponent,
    pub r1: Exponent,
    pub r2: Exponent,
}

impl HolderSplit {
    pub fn validate(&self) -> Result<()> {
        let ok = |a: Exponent, b: Exponent| (self.p.reciprocal() - a.reciprocal() - b.reciprocal()).abs() < 1e-12;
        if ok(self.p1, self.p2) && ok(self.r1, self.r2) {
            Ok(())
        } else {
            Err(LabError::InvalidParameter(format!(
                "invalid Hölder split: 1/{} != 1/{} + 1/{} or 1/{} + 1/{}",
                self.p.label(),
                self.p1.label(),
                self.p2.label(),
                self.r1.label(),
                self.r2.label()
            )))
        }
    }
}

/// Left and right sides of the homogeneous product bound.
pub fn product_sides(
    partition: &DyadicPartition,
    f: &SpectralScalarField,
    g: &SpectralScalarField,
    s: f64,
    q: Exponent,
    split: HolderSplit,
) -> (f64, f64) {
    let grid = f.grid();
    let phys = physical_many(&[f, g]);
    let prod: Vec<f64> = phys[0].iter().zip(&phys[1]).map(|(a, b)| a * b).collect();
    let fg = SpectralScalarField::to_spectral(grid, &prod).expect("grid-sized");
    let hom = |p| BesovIndex::homogeneous(s, p, q);
    let left = BlockNorms::scalar(&fg, partition, split.p).besov(&hom(split.p));
    let right = BlockNorms::scalar(f, partition, split.p1).besov(&hom(split.p1)) * lp(g, split.p2)
        + BlockNorms::scalar(g, partition, split.r1).besov(&hom(split.r1)) * lp(f, split.r2);
    (left, right)
}

/// Product bound over random band-limited pairs, one ratio per sample and split.
pub fn verify_product_estimate(
    partition: &DyadicPartition,
    ensemble_size: usize,
    s: f64,
    q: Exponent,
    splits: &[HolderSplit],
    seed: u64,
) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    if s <= 0.0 {
        return Err(LabError::InvalidParameter(format!("product bound needs s > 0 (got {s})")));
    }
    if splits.is_empty() {
        return Err(LabError::InvalidParameter("no Hölder splits given".into()));
    }
    for sp in splits {
        sp.validate()?;
    }
    let grid = partition.grid();
    let radius = product_safe_radius(grid);
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&sd| {
            let mut r = rng(sd);
            let f = random_scalar_from(grid, &mut r, radius);
            let g = random_scalar_from(grid, &mut r, radius);
            splits
                .iter()
                .map(|sp| {
                    let (l, rr) = product_sides(partition, &f, &g, s, q, *sp);
                    l / rr
                })
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>();
    EmpiricalConstantReport::from_ratios("product", ratios.concat(), seed)
}

/// Worst relative residual of the helical projection identities for one field.
pub fn helical_identity_residual(v: &SpectralVectorField) -> Result<f64> {
    let scale = v.l2_norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let split = wave_split(v);
    let plus = wave_split(&split.plus);
    let minus = wave_split(&split.minus);
    let residuals = [
        (&split.sum() - v).l2_norm(),
        plus.minus.l2_norm(),
        minus.plus.l2_norm(),
        (&plus.plus - &split.plus).l2_norm(),
        (&minus.minus - &split.minus).l2_norm(),
    ];
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(*r)) / scale;
    Ok(worst.max(rotation_identity_residual(v)?))
}

/// Helical identities over random solenoidal fields; "ratios" are residuals.
pub fn verify_helical_identities(grid: &Grid, ensemble_size: usize, seed: u64) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&s| helical_identity_residual(&random_solenoidal(grid, s, grid.n() as f64 / 2.0)))
        .collect::<Result<Vec<_>>>()?;
    EmpiricalConstantReport::from_ratios("helical-identities", ratios, seed)
}

/// `‖f‖_∞ / ‖f‖_{B^{3/2}_{2,1}}` over random fields.
pub fn verify_embedding(partition: &DyadicPartition, ensemble_size: usize, seed: u64) -> Result<EmpiricalConstantReport> {
    require_ensemble(ensemble_size)?;
    let grid = partition.grid();
    let idx = BesovIndex::inhomogeneous(1.5, Exponent::Two, Exponent::One);
    let ratios = sample_seeds(seed, ensemble_size)
        .par_iter()
        .map(|&s| {
            let f = random_scalar(grid, s, grid.n() as f64 / 3.0);
            lp(&f, Exponent::Infinity) / BlockNorms::scalar(&f, partition, Exponent::Two).besov(&idx)
        })
        .collect();
    EmpiricalConstantReport::from_ratios("embedding", ratios, seed)
}

/// Defaults for the built-in verifier suite.
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaSuite {
    pub n: usize,
    pub ensemble_size: usize,
    pub seed: u64,
    /// Also sample the `s > -1` commutator variant (off by default).
    pub low_regularity_commutator: bool,
}

impl Default for LemmaSuite {
    fn default() -> Self {
        Self { n: 32, ensemble_size: 100, seed: 1, low_regularity_commutator: false }
    }
}

impl LemmaSuite {
    /// One report per inequality, in a fixed order.
    pub fn run(&self) -> Result<Vec<EmpiricalConstantReport>> {
        use Exponent::*;
        let grid = Grid::periodic(self.n)?;
        let partition = DyadicPartition::new(&grid)?;
        let (m, seed) = (self.ensemble_size, self.seed);
        let splits = [
            HolderSplit { p: Two, p1: Two, p2: Infinity, r1: Two, r2: Infinity },
            HolderSplit { p: One, p1: Two, p2: Two, r1: Two, r2: Two },
        ];
        let mut out = vec![
            verify_bernstein(&partition, m, 1.0, Infinity, seed)?,
            verify_bernstein(&partition, m, 2.0, Two, seed)?,
            verify_product_estimate(&partition, m, 1.0, One, &splits, seed)?,
            verify_commutator(&partition, m, 1.0, Two, One, CommutatorVariant::Gradient, seed)?,
            verify_commutator(&partition, m, 2.5, Two, One, CommutatorVariant::Transport, seed)?,
            verify_heat_smoothing(&partition, 1.0, m, 1.5, 2.5, &[0.01, 0.1, 1.0], Two, One, seed)?,
            verify_helical_identities(&grid, m, seed)?,
            verify_embedding(&partition, m, seed)?,
        ];
        if self.low_regularity_commutator {
            out.push(verify_commutator(&partition, m, 0.5, Two, One, CommutatorVariant::LowRegularity, seed)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition() -> DyadicPartition {
        DyadicPartition::new(&Grid::periodic(16).unwrap()).unwrap()
    }

    #[test]
    fn report_statistics_and_csv_round_trip() {
        let r = EmpiricalConstantReport::from_ratios("x", vec![3.0, 1.0, 2.0, 4.0], 9).unwrap();
        assert_eq!((r.min_ratio, r.max_ratio, r.median), (1.0, 4.0, 2.5));
        assert!(EmpiricalConstantReport::from_ratios("x", vec![], 0).is_err());
        let csv = reports_to_csv(std::slice::from_ref(&r));
        assert!(csv.starts_with("lemma-id,sample-count,min-ratio,max-ratio,median,seed\n"));
        assert_eq!(reports_from_csv(&csv).unwrap(), vec![r]);
        assert!(matches!(reports_from_csv(&format!("{REPORT_CSV_HEADER}\nx,1,2\n")), Err(LabError::Csv { row: 2, .. })));
    }

    #[test]
    fn bernstein_mode_ratio_is_exact() {
        let p = partition();
        let f = SpectralScalarField::mode(p.grid(), [3, 0, 0], Complex64::new(1.0, 0.0));
        // |ξ| = 3 sits in shell 1 (support 1..4) and shell 2 (2..8)
        let block = lp_block(&f, &p, 2).unwrap();
        let df = block.apply_multiplier(|xi| Complex64::new(xi[0].abs(), 0.0)).unwrap();
        let ratio = df.lp_norm(Exponent::Two) / (4.0 * block.lp_norm(Exponent::Two));
        assert!((ratio - 0.75).abs() < 1e-14);
    }

    #[test]
    fn bernstein_laplacian_ratios_within_shell_bounds() {
        let r = verify_bernstein(&partition(), 20, 2.0, Exponent::Two, 3).unwrap();
        assert!(r.min_ratio >= 2f64.powi(-4) && r.max_ratio <= 2f64.powi(4), "{r:?}");
        assert!(verify_bernstein(&partition(), 0, 1.0, Exponent::Two, 3).is_err());
    }

    #[test]
    fn heat_smoothing_contracts_at_equal_regularity() {
        let p = partition();
        let r = verify_heat_smoothing(&p, 1.0, 10, 1.0, 1.0, &[0.1, 1.0], Exponent::Two, Exponent::One, 4).unwrap();
        assert!(r.max_ratio <= 0.5 + 1e-12);
        assert!(verify_heat_smoothing(&p, 1.0, 10, 2.0, 1.0, &[0.1], Exponent::Two, Exponent::One, 4).is_err());
    }

    #[test]
    fn commutator_vanishes_for_constant_velocity() {
        let p = partition();
        let g = p.grid();
        let v = SpectralVectorField::mode(g, [0, 0, 0], [Complex64::new(0.5, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.25, 0.0)]);
        let theta = random_scalar(g, 5, product_safe_radius(g));
        let (left, _) = scalar_commutator_sides(&p, &v, &theta, 1.0, Exponent::Two, Exponent::One, CommutatorVariant::Gradient);
        assert!(left <= 1e-12 * theta.lp_norm(Exponent::Two));
    }

    #[test]
    fn verifiers_are_seed_deterministic() {
        let p = partition();
        let a = verify_commutator(&p, 6, 1.0, Exponent::Two, Exponent::One, CommutatorVariant::Gradient, 7).unwrap();
        let b = verify_commutator(&p, 6, 1.0, Exponent::Two, Exponent::One, CommutatorVariant::Gradient, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_finite() && a.max_ratio > 0.0);
        let t = verify_commutator(&p, 4, 2.5, Exponent::Two, Exponent::One, CommutatorVariant::Transport, 7).unwrap();
        assert!(t.is_finite() && t.max_ratio > 0.0);
    }

    #[test]
    fn product_rejects_bad_split() {
        use Exponent::*;
        let bad = HolderSplit { p: Two, p1: Two, p2: Two, r1: Two, r2: Infinity };
        assert!(verify_product_estimate(&partition(), 4, 1.0, One, &[bad], 1).is_err());
        let good = HolderSplit { p: Two, p1: Two, p2: Infinity, r1: Infinity, r2: Two };
        let r = verify_product_estimate(&partition(), 4, 1.0, One, &[good], 1).unwrap();
        assert!(r.is_finite());
    }

    #[test]
    fn helical_identities_hold_to_roundoff() {
        let r = verify_helical_identities(&Grid::periodic(16).unwrap(), 5, 2).unwrap();
        assert!(r.max_ratio <= 1e-12);
    }
}
