//! Seeded numeric experiments probing the metric geometry of a Heintze
//! datum: norm lower bounds, box-counting dimension, the sandwich between a
//! derivation and its semisimple part, and coset divergence.
//!
//! Every experiment is a pure function of its inputs and a 64-bit seed;
//! identical calls reproduce bit-identical reports.

use crate::algebra::AlgebraError;
use crate::group;
use crate::heintze::HeintzeData;
use crate::linalg::Subspace;
use crate::metric::{normal_vector, MetricError, QuasiMetricModel};
use crate::rational::{to_f64, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExperimentError {
    #[error("exponent mu = {mu} must exceed the largest eigenvalue {lambda_max}")]
    MuTooSmall { mu: f64, lambda_max: f64 },
    #[error("exponent mu = {mu} must be greater than 1")]
    MuOutOfRange { mu: f64 },
    #[error("curve samples are all identical; nothing to cover")]
    DegenerateCurve,
    #[error(
        "no covering count fell in the resolvable window (4 <= N <= samples/50); \
         widen the scale range or add curve samples"
    )]
    ScalesOutOfResolution,
    #[error("the t-grid must contain at least two positive times")]
    EmptyGrid,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn regression_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// Outcome of the norm-versus-distance lower-bound experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBoundReport {
    pub mu: f64,
    /// Smallest sampled value of ϱ(e, exp X)^μ / ‖X‖ over the region
    /// ϱ ≥ 1; the claim under test is that this stays away from zero.
    pub c_hat: f64,
    /// Bins whose minimum ratio dropped below half the previous bin's —
    /// evidence of decay toward zero.
    pub violations: usize,
    /// Regression slope of log(min ratio) against the flow magnitude; a
    /// nonnegative slope means no downward trend.
    pub trend_slope: f64,
    /// (flow magnitude at bin center, minimum ratio in bin).
    pub bin_minima: Vec<(f64, f64)>,
    pub samples: usize,
}

/// Samples points with gauge ≥ 1 spread across magnitudes and reports the
/// smallest observed ratio ϱ(e, exp X)^μ / ‖X‖, binned by magnitude.
pub fn lemma31_check(
    h: &HeintzeData,
    mu: f64,
    sample_count: usize,
    seed: u64,
) -> Result<LowerBoundReport, ExperimentError> {
    let lambda_max = to_f64(h.max_eigenvalue());
    if mu <= lambda_max {
        return Err(ExperimentError::MuTooSmall { mu, lambda_max });
    }
    let model = QuasiMetricModel::new(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.dim();
    const SPREAD: f64 = 12.0;
    const BINS: usize = 12;
    let mut bin_min = vec![f64::INFINITY; BINS];
    let mut c_hat = f64::INFINITY;
    let mut used = 0;
    for _ in 0..sample_count {
        let w = normal_vector(&mut rng, n);
        let u: f64 = rng.random_range(0.0..SPREAD);
        let g0 = model.gauge(&w);
        if g0 <= 0.0 {
            continue;
        }
        // Normalize onto the unit sphere of the gauge, then push outward by
        // a random flow time: the gauge of the result is exactly e^u ≥ 1.
        let x = model.flow_semisimple(u - g0.ln(), &w);
        let gauge = model.gauge(&x);
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let ratio = gauge.powf(mu) / norm;
        c_hat = c_hat.min(ratio);
        let b = ((u / SPREAD * BINS as f64) as usize).min(BINS - 1);
        bin_min[b] = bin_min[b].min(ratio);
        used += 1;
    }
    let bin_minima: Vec<(f64, f64)> = bin_min
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_finite())
        .map(|(b, m)| ((b as f64 + 0.5) * SPREAD / BINS as f64, *m))
        .collect();
    let mut violations = 0;
    for pair in bin_minima.windows(2) {
        if pair[1].1 < 0.5 * pair[0].1 {
            violations += 1;
        }
    }
    let log_points: Vec<(f64, f64)> =
        bin_minima.iter().map(|&(u, m)| (u, m.ln())).collect();
    let (trend_slope, _) = if log_points.len() >= 2 {
        regression_slope(&log_points)
    } else {
        (0.0, 0.0)
    };
    Ok(LowerBoundReport { mu, c_hat, violations, trend_slope, bin_minima, samples: used })
}

/// Box-counting regression result.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    /// Regression slope of log N(r) against log 1/r.
    pub value: f64,
    /// Radii actually used, after the resolution filter (max, min).
    pub scale_range: (f64, f64),
    /// (log 1/r, log N(r)) pairs that entered the regression.
    pub regression_points: Vec<(f64, f64)>,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

/// Geometric grid of radii from `r_max` down to `r_min`.
pub fn geometric_scales(r_max: f64, r_min: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && r_max > r_min && r_min > 0.0);
    let step = (r_min / r_max).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| r_max * step.powi(i as i32)).collect()
}

/// Uniformly spaced samples of the segment s ↦ s · direction, s ∈ [0, 1].
pub fn segment_curve(direction: &[f64], samples: usize) -> Vec<Vec<f64>> {
    (0..samples)
        .map(|i| {
            let s = i as f64 / (samples - 1) as f64;
            direction.iter().map(|c| c * s).collect()
        })
        .collect()
}

/// Box-counting dimension of an ordered curve under the model quasi-metric:
/// greedy covering along the parameter order, then a log-log regression of
/// covering count against inverse radius.
///
/// Counts outside the window 4 ≤ N(r) ≤ samples/50 are excluded from the
/// regression: below it a fit is meaningless, above it the covering count
/// measures the sampling density instead of the curve. The report records
/// which radii survived.
pub fn hausdorff_dim_estimate(
    model: &QuasiMetricModel,
    curve: &[Vec<f64>],
    scales: &[f64],
) -> Result<DimensionEstimate, ExperimentError> {
    let first = curve.first().ok_or(ExperimentError::DegenerateCurve)?;
    if curve.iter().all(|p| p == first) {
        return Err(ExperimentError::DegenerateCurve);
    }
    let max_count = (curve.len() / 50).max(5);
    let mut regression_points = Vec::new();
    let mut used_scales = Vec::new();
    for &r in scales {
        let mut count = 1usize;
        let mut anchor = &curve[0];
        for p in &curve[1..] {
            if model.distance(anchor, p) > r {
                count += 1;
                anchor = p;
            }
        }
        if count < 4 || count > max_count {
            continue;
        }
        regression_points.push(((1.0 / r).ln(), (count as f64).ln()));
        used_scales.push(r);
    }
    if regression_points.len() < 2 {
        return Err(ExperimentError::ScalesOutOfResolution);
    }
    let (value, residual) = regression_slope(&regression_points);
    let scale_range = (
        used_scales.iter().cloned().fold(f64::MIN, f64::max),
        used_scales.iter().cloned().fold(f64::MAX, f64::min),
    );
    Ok(DimensionEstimate { value, scale_range, regression_points, residual })
}

/// Outcome of the comparison between a derivation's metric and its
/// semisimple part's.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichReport {
    pub mu: f64,
    /// Smallest constant C with (1/C)·ϱ_δ^μ ≤ ϱ ≤ C·ϱ_δ^{1/μ} over the
    /// sampled points (all taken in the bounded region ϱ_δ ≤ 1).
    pub c: f64,
    /// Largest sampled ϱ_δ^μ / ϱ (lower-bound side).
    pub lower_side: f64,
    /// Largest sampled ϱ / ϱ_δ^{1/μ} (upper-bound side).
    pub upper_side: f64,
    /// True when the derivation was already semisimple and the two metrics
    /// coincide exactly, making C = 1 with no sampling needed.
    pub trivial: bool,
    pub samples: usize,
}

/// Compares the homogeneous metric of the full derivation with that of its
/// semisimple part on sampled points with ϱ_δ ≤ 1.
///
/// The full-derivation metric assigns to exp(w) the value e^{t*}, where t*
/// is the flow time that brings w back to the unit sphere of the semisimple
/// gauge — the unique scale-covariant extension of that sphere.
pub fn diag_comparison_check(
    h: &HeintzeData,
    mu: f64,
    sample_count: usize,
    seed: u64,
) -> Result<SandwichReport, ExperimentError> {
    if mu <= 1.0 {
        return Err(ExperimentError::MuOutOfRange { mu });
    }
    let model = QuasiMetricModel::new(h)?;
    if model.is_diagonalizable() {
        return Ok(SandwichReport {
            mu,
            c: 1.0,
            lower_side: 1.0,
            upper_side: 1.0,
            trivial: true,
            samples: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.dim();
    let mut lower_side: f64 = 0.0;
    let mut upper_side: f64 = 0.0;
    let mut used = 0;
    for _ in 0..sample_count {
        let w0 = normal_vector(&mut rng, n);
        let g0 = model.gauge(&w0);
        if g0 <= 0.0 {
            continue;
        }
        let u: f64 = rng.random_range(0.0..4.0);
        // Gauge of w is exactly e^{-u} ∈ (0, 1].
        let w = model.flow_semisimple(-u - g0.ln(), &w0);
        let rho_delta = model.gauge(&w);
        let rho_alpha = flow_metric(&model, &w);
        if rho_alpha <= 0.0 {
            continue;
        }
        lower_side = lower_side.max(rho_delta.powf(mu) / rho_alpha);
        upper_side = upper_side.max(rho_alpha / rho_delta.powf(1.0 / mu));
        used += 1;
    }
    Ok(SandwichReport {
        mu,
        c: lower_side.max(upper_side),
        lower_side,
        upper_side,
        trivial: false,
        samples: used,
    })
}

/// Scale-covariant metric of the full (possibly non-semisimple) flow:
/// e^{t*} with gauge(e^{−t*·derivation} w) = 1, found by expanding a
/// bracket around the semisimple first guess and bisecting.
fn flow_metric(model: &QuasiMetricModel, w: &[f64]) -> f64 {
    let g = |t: f64| model.gauge(&model.flow(-t, w));
    let guess = model.gauge(w).ln();
    let mut lo = guess;
    let mut hi = guess;
    let mut expand = 1.0;
    while g(hi) > 1.0 {
        hi += expand;
        expand *= 2.0;
        if hi > guess + 1e3 {
            return f64::INFINITY;
        }
    }
    expand = 1.0;
    while g(lo) < 1.0 {
        lo -= expand;
        expand *= 2.0;
        if lo < guess - 1e3 {
            return 0.0;
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Which branch the coset experiment took.
#[derive(Clone, Debug, PartialEq)]
pub enum CosetBranch {
    /// log x normalizes the subalgebra: the coset stays within bounded
    /// distance, witnessed by the sampled maximum.
    Bounded { max_distance: f64 },
    /// log x does not normalize the subalgebra: distances grow like
    /// t^exponent along the witness curve.
    Divergent { exponent: f64, obstruction: Vec<Rat> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CosetReport {
    pub branch: CosetBranch,
    /// (t, sampled distance) along the grid.
    pub distances: Vec<(f64, f64)>,
}

/// Probes how far the conjugated one-parameter subgroup through a
/// subalgebra direction drifts from the subgroup itself.
///
/// Exact arithmetic decides the branch: if log x lies in the normalizer of
/// the subalgebra the distances stay bounded; otherwise the adjoint defect
/// W = Ad_x(Y₀) − Y₀ (computed exactly) is nonzero transverse to the
/// subalgebra, and the sampled distance curve's growth exponent is
/// reported.
pub fn coset_divergence_experiment(
    h: &HeintzeData,
    subalgebra: &Subspace,
    x: &[Rat],
    t_grid: &[f64],
    sample_count: usize,
    seed: u64,
) -> Result<CosetReport, ExperimentError> {
    let a = h.algebra();
    if !a.is_subalgebra(subalgebra)? {
        return Err(AlgebraError::NotASubalgebra.into());
    }
    if t_grid.iter().filter(|t| **t > 0.0).count() < 2 {
        return Err(ExperimentError::EmptyGrid);
    }
    let normalizer = a.normalizer(subalgebra)?;
    let model = QuasiMetricModel::new(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // The adjoint defect of each basis direction, exactly.
    let basis: Vec<Vec<Rat>> = subalgebra.basis_vectors().map(<[Rat]>::to_vec).collect();
    let defects: Vec<Vec<Rat>> = basis
        .iter()
        .map(|y0| {
            let conj = group::conjugate(a, x, y0).expect("dimensions match");
            conj.iter().zip(y0).map(|(c, y)| c - y).collect()
        })
        .collect();

    let in_normalizer = normalizer.contains(x);
    let escaping = basis
        .iter()
        .zip(&defects)
        .find(|(_, w)| !subalgebra.contains(w.as_slice()));
    // x normalizes the subalgebra exactly when no adjoint defect escapes it:
    // ad_{log x} is a polynomial in Ad_x − id, so the two tests must agree.
    assert_eq!(in_normalizer, escaping.is_none());

    let (y0, w) = match escaping {
        Some((y0, w)) => (y0.clone(), Some(w.clone())),
        // x normalizes: take the first basis direction, measure the drift.
        None => (basis[0].clone(), None),
    };

    let y0_f: Vec<f64> = y0.iter().map(to_f64).collect();
    let hbasis_f: Vec<Vec<f64>> =
        basis.iter().map(|b| b.iter().map(to_f64).collect()).collect();

    // Witness point at time t: x·exp(tY₀)·x⁻¹ = exp(t(Y₀ + W)), with W = 0
    // in the bounded branch.
    let w_f: Vec<f64> = match &w {
        Some(wv) => wv.iter().map(to_f64).collect(),
        None => {
            let conj = group::conjugate(a, x, &y0).expect("dimensions match");
            conj.iter().zip(&y0).map(|(c, y)| to_f64(c) - to_f64(y)).collect()
        }
    };

    let mut distances = Vec::new();
    for &t in t_grid.iter().filter(|t| **t > 0.0) {
        let target: Vec<f64> =
            y0_f.iter().zip(&w_f).map(|(y, d)| t * (y + d)).collect();
        // Shadow candidate: the same parameter point inside the subgroup.
        let shadow: Vec<f64> = y0_f.iter().map(|c| t * c).collect();
        let mut best = model.distance(&shadow, &target);
        for _ in 0..sample_count {
            let mut candidate = shadow.clone();
            for b in &hbasis_f {
                let c = (1.0 + t.abs()) * crate::metric::standard_normal(&mut rng);
                for (cand, bc) in candidate.iter_mut().zip(b) {
                    *cand += c * bc;
                }
            }
            best = best.min(model.distance(&candidate, &target));
        }
        distances.push((t, best));
    }

    let branch = if w.is_some() {
        let points: Vec<(f64, f64)> = distances
            .iter()
            .filter(|(t, d)| *t >= 1.0 && *d > 0.0)
            .map(|(t, d)| (t.ln(), d.ln()))
            .collect();
        let (exponent, _) = regression_slope(&points);
        CosetBranch::Divergent {
            exponent,
            obstruction: w.expect("divergent branch has a defect"),
        }
    } else {
        let max_distance =
            distances.iter().map(|(_, d)| *d).fold(0.0, f64::max);
        CosetBranch::Bounded { max_distance }
    };
    Ok(CosetReport { branch, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::rat;
    use crate::spectral::Derivation;

    #[test]
    fn lower_bound_holds_on_the_line() {
        let d = Derivation::diagonal(catalog::abelian(1), &[rat(1)]).unwrap();
        let h = HeintzeData::new(d).unwrap();
        let report = lemma31_check(&h, 2.0, 5000, 1).unwrap();
        // Here ϱ = ‖X‖ exactly, so the ratio is ‖X‖ ≥ 1 on the region and
        // grows with the magnitude.
        assert!(report.c_hat >= 1.0 - 1e-9, "c_hat = {}", report.c_hat);
        assert_eq!(report.violations, 0);
        assert!(report.trend_slope > 0.0);
    }

    #[test]
    fn lower_bound_on_the_triangle_group() {
        let h = catalog::triangle_data();
        let report = lemma31_check(&h, 6.0, 20_000, 7).unwrap();
        assert!(report.c_hat > 0.0);
        assert_eq!(report.violations, 0, "bins: {:?}", report.bin_minima);
    }

    #[test]
    fn mu_at_or_below_top_eigenvalue_is_rejected() {
        let h = catalog::triangle_data();
        assert_eq!(
            lemma31_check(&h, 5.0, 10, 0).unwrap_err(),
            ExperimentError::MuTooSmall { mu: 5.0, lambda_max: 5.0 }
        );
    }

    #[test]
    fn lemma31_is_deterministic() {
        let h = catalog::heisenberg_diagonal_data();
        let a = lemma31_check(&h, 3.0, 2000, 99).unwrap();
        let b = lemma31_check(&h, 3.0, 2000, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn segment_dimension_matches_the_eigenvalue() {
        let d = Derivation::diagonal(catalog::abelian(2), &[rat(1), rat(2)]).unwrap();
        let h = HeintzeData::new(d).unwrap();
        let model = QuasiMetricModel::new(&h).unwrap();
        let curve = segment_curve(&[0.0, 1.0], 60_000);
        let scales = geometric_scales(1.0, 0.01, 25);
        let est = hausdorff_dim_estimate(&model, &curve, &scales).unwrap();
        assert!(
            (est.value - 2.0).abs() < 0.2,
            "direction of weight 2 should have dimension ≈ 2, got {}",
            est.value
        );
        let curve1 = segment_curve(&[1.0, 0.0], 60_000);
        let est1 = hausdorff_dim_estimate(&model, &curve1, &scales).unwrap();
        assert!((est1.value - 1.0).abs() < 0.1, "got {}", est1.value);
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        let h = catalog::heisenberg_diagonal_data();
        let model = QuasiMetricModel::new(&h).unwrap();
        let flat = vec![vec![1.0, 1.0, 1.0]; 100];
        assert_eq!(
            hausdorff_dim_estimate(&model, &flat, &[0.5, 0.1]).unwrap_err(),
            ExperimentError::DegenerateCurve
        );
        // Scales far outside the resolvable window are refused, not fudged.
        let curve = segment_curve(&[1.0, 0.0, 0.0], 300);
        assert_eq!(
            hausdorff_dim_estimate(&model, &curve, &[1e6, 2e6]).unwrap_err(),
            ExperimentError::ScalesOutOfResolution
        );
    }

    #[test]
    fn sandwich_is_trivial_for_semisimple_data() {
        let report = diag_comparison_check(&catalog::triangle_data(), 1.5, 100, 0).unwrap();
        assert!(report.trivial);
        assert_eq!(report.c, 1.0);
    }

    #[test]
    fn sandwich_constant_finite_and_monotone_on_block_data() {
        let h = catalog::heisenberg_block_data();
        let c11 = diag_comparison_check(&h, 1.1, 3000, 5).unwrap();
        let c15 = diag_comparison_check(&h, 1.5, 3000, 5).unwrap();
        let c20 = diag_comparison_check(&h, 2.0, 3000, 5).unwrap();
        for r in [&c11, &c15, &c20] {
            assert!(!r.trivial);
            assert!(r.c.is_finite() && r.c > 0.0);
        }
        // With the same seed the sample set is identical, and each sample's
        // contribution is non-increasing in mu on the region ϱ_δ ≤ 1.
        assert!(c11.c >= c15.c && c15.c >= c20.c, "{} {} {}", c11.c, c15.c, c20.c);
    }

    #[test]
    fn sandwich_rejects_mu_at_most_one() {
        let h = catalog::heisenberg_block_data();
        assert_eq!(
            diag_comparison_check(&h, 1.0, 10, 0).unwrap_err(),
            ExperimentError::MuOutOfRange { mu: 1.0 }
        );
    }

    #[test]
    fn coset_divergence_on_the_heisenberg_group() {
        let h = catalog::heisenberg_diagonal_data();
        let span_x = Subspace::from_vectors(3, vec![vec![rat(1), rat(0), rat(0)]]);
        let x = vec![rat(0), rat(1), rat(0)]; // exp(Y)
        let t_grid = geometric_scales(1000.0, 1.0, 12);
        let report =
            coset_divergence_experiment(&h, &span_x, &x, &t_grid, 40, 3).unwrap();
        match report.branch {
            CosetBranch::Divergent { exponent, ref obstruction } => {
                // [Y, X] = −Z and higher terms vanish, so W = −Z exactly.
                assert_eq!(obstruction, &vec![rat(0), rat(0), rat(-1)]);
                assert!(
                    (exponent - 0.5).abs() < 0.1,
                    "expected square-root growth, got exponent {exponent}"
                );
            }
            ref other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn central_elements_stay_at_bounded_distance() {
        let h = catalog::heisenberg_diagonal_data();
        let span_x = Subspace::from_vectors(3, vec![vec![rat(1), rat(0), rat(0)]]);
        let x = vec![rat(0), rat(0), rat(3)]; // exp(3Z), central
        let t_grid = geometric_scales(1000.0, 1.0, 12);
        let report =
            coset_divergence_experiment(&h, &span_x, &x, &t_grid, 40, 3).unwrap();
        match report.branch {
            CosetBranch::Bounded { max_distance } => {
                assert!(max_distance.is_finite());
                // The conjugated curve is exp(tX) itself: x commutes.
                assert!(max_distance < 1e-9, "got {max_distance}");
            }
            ref other => panic!("expected bounded branch, got {other:?}"),
        }
    }

    #[test]
    fn ideals_always_take_the_bounded_branch() {
        let h = catalog::heisenberg_diagonal_data();
        let center = h.algebra().center();
        assert!(h.algebra().is_ideal(&center).unwrap());
        let t_grid = geometric_scales(100.0, 1.0, 8);
        for x in [vec![rat(1), rat(0), rat(0)], vec![rat(2), rat(-1), rat(5)]] {
            let report =
                coset_divergence_experiment(&h, &center, &x, &t_grid, 20, 1).unwrap();
            assert!(matches!(report.branch, CosetBranch::Bounded { .. }));
        }
    }

    #[test]
    fn non_subalgebras_are_rejected() {
        let h = catalog::heisenberg_diagonal_data();
        let not_closed = Subspace::from_vectors(
            3,
            vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]],
        );
        assert_eq!(
            coset_divergence_experiment(&h, &not_closed, &vec![rat(0); 3], &[1.0, 2.0], 5, 0)
                .unwrap_err(),
            ExperimentError::Algebra(AlgebraError::NotASubalgebra)
        );
    }
}
