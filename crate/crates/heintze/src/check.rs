//! Cross-module invariant suite: the structural laws the whole crate rests
//! on, executed over a built-in corpus of worked examples plus seeded random
//! instances, or over a user-supplied datum. Failures carry a counterexample
//! dump; negative controls verify that each detector actually fires.

use crate::algebra::NilpotentLieAlgebra;
use crate::catalog;
use crate::group::bch_product;
use crate::heintze::HeintzeData;
use crate::linalg::Subspace;
use crate::metric::{spread_point, QuasiMetricModel};
use crate::rational::{rat, ratio, Rat};
use crate::report::{CheckReport, PropertyResult};
use crate::spectral::{
    char_poly, is_audited_class, jordan_basis_bracket_audit, AuditRule, Derivation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Sample sizes and the seed for the randomized properties.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub random_graded_instances: usize,
    pub bch_triples: usize,
    pub homogeneity_samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            random_graded_instances: 100,
            bch_triples: 500,
            homogeneity_samples: 10_000,
            seed: 0,
        }
    }
}

/// Named worked examples covering every feature the suite exercises:
/// graph-built algebras, diagonal and non-diagonalizable derivations, and
/// higher nilpotency classes.
pub fn builtin_corpus() -> Vec<(String, HeintzeData)> {
    let abelian = Derivation::diagonal(catalog::abelian(3), &[rat(1), rat(2), rat(3)])
        .expect("abelian admits any weights");
    let filiform =
        Derivation::diagonal(catalog::filiform(4), &[rat(1), rat(1), rat(2), rat(3)])
            .expect("weights are graded");
    vec![
        ("triangle-graph".into(), catalog::triangle_data()),
        ("two-edges-graph".into(), catalog::two_edges_data()),
        ("heisenberg-diagonal".into(), catalog::heisenberg_diagonal_data()),
        ("heisenberg-block".into(), catalog::heisenberg_block_data()),
        ("five-dim-block".into(), catalog::five_dim_block_data()),
        ("abelian-3".into(), HeintzeData::new(abelian).expect("valid datum")),
        ("filiform-4".into(), HeintzeData::new(filiform).expect("valid datum")),
    ]
}

fn result(name: &str, cases: usize, counterexample: Option<String>) -> PropertyResult {
    PropertyResult {
        name: name.to_string(),
        passed: counterexample.is_none(),
        cases,
        counterexample,
    }
}

/// Rebuilding every corpus algebra from its own structure tensor must
/// succeed, and tensors violating antisymmetry or the Jacobi identity must
/// be rejected.
pub fn check_bracket_laws(corpus: &[(String, HeintzeData)]) -> PropertyResult {
    let algebras: Vec<(String, Arc<NilpotentLieAlgebra>)> =
        corpus.iter().map(|(n, h)| (n.clone(), h.algebra().clone())).collect();
    check_bracket_laws_for(&algebras)
}

/// Algebra-level form of [`check_bracket_laws`], for documents that carry
/// no derivation.
pub fn check_bracket_laws_for(algebras: &[(String, Arc<NilpotentLieAlgebra>)]) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    for (name, a) in algebras {
        let tensor: Vec<Rat> = (0..a.dim())
            .flat_map(|i| {
                (0..a.dim()).flat_map(move |j| {
                    (0..a.dim()).map(move |k| a.structure_constant(i, j, k).clone())
                })
            })
            .collect();
        cases += 1;
        if let Err(e) = NilpotentLieAlgebra::from_structure_tensor(a.dim(), tensor, None) {
            bad = Some(format!("{name}: revalidation failed: {e}"));
            break;
        }
    }

    // Negative control: drop one side of an antisymmetric pair.
    let mut tensor = vec![rat(0); 27];
    tensor[(0 * 3 + 1) * 3 + 2] = rat(1);
    cases += 1;
    if bad.is_none() && NilpotentLieAlgebra::from_structure_tensor(3, tensor, None).is_ok() {
        bad = Some("antisymmetry violation went undetected".into());
    }

    // Negative control: [e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e5, [e2,e4]=e5
    // breaks Jacobi on (e1,e2,e3).
    let triples = [
        (0usize, 1usize, 2usize, rat(1)),
        (0, 2, 3, rat(1)),
        (1, 2, 4, rat(1)),
        (1, 3, 4, rat(1)),
    ];
    cases += 1;
    if bad.is_none() && NilpotentLieAlgebra::new(5, &triples, None).is_ok() {
        bad = Some("jacobi violation went undetected".into());
    }
    result("bracket-laws", cases, bad)
}

/// Rebuilding every corpus derivation must pass the product-rule check, and
/// a matrix that breaks it must be rejected.
pub fn check_leibniz(corpus: &[(String, HeintzeData)]) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    for (name, h) in corpus {
        cases += 1;
        let rebuilt =
            Derivation::new(h.algebra().clone(), h.derivation().matrix().clone());
        if let Err(e) = rebuilt {
            bad = Some(format!("{name}: revalidation failed: {e}"));
            break;
        }
    }
    // diag(1,1,1) on the Heisenberg algebra violates 1 + 1 = 1 on [X,Y]=Z.
    cases += 1;
    if bad.is_none()
        && Derivation::diagonal(catalog::heisenberg(1), &[rat(1), rat(1), rat(1)]).is_ok()
    {
        bad = Some("product-rule violation went undetected".into());
    }
    result("derivation-leibniz", cases, bad)
}

/// Brackets of generalized eigenspaces must land in the eigenspace of the
/// summed eigenvalue (or vanish), on the corpus and on seeded random
/// graph/weight instances.
pub fn check_grading(
    corpus: &[(String, HeintzeData)],
    random_instances: usize,
    seed: u64,
) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    for (name, h) in corpus {
        cases += 1;
        match h.derivation().grading_check() {
            Ok(report) if report.passed() => {}
            Ok(report) => {
                bad = Some(format!(
                    "{name}: {}",
                    report.violations.first().map_or_else(String::new, |v| v.witness.clone())
                ));
                break;
            }
            Err(e) => {
                bad = Some(format!("{name}: {e}"));
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random_instances {
        if bad.is_some() {
            break;
        }
        let g = catalog::random_graph(&mut rng);
        let weights: Vec<Rat> =
            (0..g.vertex_count()).map(|_| catalog::random_positive_rat(&mut rng)).collect();
        cases += 1;
        let outcome = g
            .weighted_algebra(&weights)
            .map_err(|e| e.to_string())
            .and_then(|(_, d)| d.grading_check().map_err(|e| e.to_string()));
        match outcome {
            Ok(report) if report.passed() => {}
            Ok(report) => {
                bad = Some(format!(
                    "random instance {k}: {}",
                    report.violations.first().map_or_else(String::new, |v| v.witness.clone())
                ));
            }
            Err(e) => bad = Some(format!("random instance {k}: {e}")),
        }
    }
    result("eigenspace-grading", cases, bad)
}

/// Invariant ideals arising in normalizer chains seeded from the corpus.
fn invariant_ideals(h: &HeintzeData) -> Vec<Subspace> {
    let a = h.algebra();
    let mut seeds: Vec<Subspace> = vec![a.center(), a.derived_subalgebra(), h.u_alpha(), h.h_alpha()];
    for i in 0..a.dim() {
        seeds.push(Subspace::from_vectors(a.dim(), vec![a.basis_vector(i)]));
    }
    let mut members: Vec<Subspace> = Vec::new();
    for seed in seeds {
        if seed.dim() == 0 {
            continue;
        }
        let chain = a.normalizer_chain(&seed).expect("seeds are subalgebras");
        for member in chain {
            if !members.contains(&member) {
                members.push(member);
            }
        }
    }
    members.retain(|s| {
        a.is_ideal(s).unwrap_or(false)
            && s.basis_vectors().all(|b| s.contains(&h.derivation().apply(b)))
    });
    members
}

/// The characteristic polynomial must factor exactly through every
/// invariant ideal: p = p_restricted * p_induced.
pub fn check_charpoly_multiplicativity(corpus: &[(String, HeintzeData)]) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    'outer: for (name, h) in corpus {
        for ideal in invariant_ideals(h) {
            cases += 1;
            let outcome = (|| -> Result<bool, String> {
                let restricted =
                    h.derivation().restrict_to(&ideal).map_err(|e| e.to_string())?;
                let quotient =
                    h.algebra().quotient(&ideal).map_err(|e| e.to_string())?;
                let induced = h
                    .derivation()
                    .induced_on_quotient(&quotient)
                    .map_err(|e| e.to_string())?;
                Ok(char_poly(&restricted).mul(&char_poly(&induced)) == *h.char_poly())
            })();
            match outcome {
                Ok(true) => {}
                Ok(false) => {
                    bad = Some(format!(
                        "{name}: ideal of dim {} does not split the polynomial",
                        ideal.dim()
                    ));
                    break 'outer;
                }
                Err(e) => {
                    bad = Some(format!("{name}: {e}"));
                    break 'outer;
                }
            }
        }
    }
    result("charpoly-multiplicativity", cases, bad)
}

fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<Rat> {
    (0..n).map(|_| ratio(rng.random_range(-4..=4), rng.random_range(1..=3))).collect()
}

/// The truncated group product must be associative, exactly, on random
/// triples across nilpotency classes 2 through 4; the Heisenberg closed
/// form x + y + [x,y]/2 must match.
pub fn check_bch_associativity(triples: usize, seed: u64) -> PropertyResult {
    let algebras: Vec<Arc<NilpotentLieAlgebra>> = vec![
        catalog::heisenberg(1),
        catalog::triangle_graph().build_algebra(),
        catalog::filiform(4),
        catalog::free_nilpotent_2_3(),
        catalog::filiform(5),
        catalog::free_nilpotent_2_4(),
    ];
    check_bch_associativity_for(&algebras, triples, seed)
}

/// [`check_bch_associativity`] over a caller-chosen algebra list; algebras
/// beyond the supported nilpotency class are skipped.
pub fn check_bch_associativity_for(
    algebras: &[Arc<NilpotentLieAlgebra>],
    triples: usize,
    seed: u64,
) -> PropertyResult {
    let algebras: Vec<&Arc<NilpotentLieAlgebra>> = algebras
        .iter()
        .filter(|a| a.nilpotency_class() <= crate::group::MAX_BCH_CLASS)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut bad = None;
    if algebras.is_empty() {
        return result("bch-associativity", cases, bad);
    }
    for k in 0..triples {
        let a = algebras[k % algebras.len()];
        let x = random_vector(&mut rng, a.dim());
        let y = random_vector(&mut rng, a.dim());
        let z = random_vector(&mut rng, a.dim());
        cases += 1;
        let outcome = (|| -> Result<bool, String> {
            let xy = bch_product(a, &x, &y).map_err(|e| e.to_string())?;
            let yz = bch_product(a, &y, &z).map_err(|e| e.to_string())?;
            let left = bch_product(a, &xy, &z).map_err(|e| e.to_string())?;
            let right = bch_product(a, &x, &yz).map_err(|e| e.to_string())?;
            Ok(left == right)
        })();
        match outcome {
            Ok(true) => {}
            Ok(false) => {
                bad = Some(format!(
                    "triple {k} on a class-{} algebra of dim {}",
                    a.nilpotency_class(),
                    a.dim()
                ));
                break;
            }
            Err(e) => {
                bad = Some(format!("triple {k}: {e}"));
                break;
            }
        }
    }
    // Closed form on the Heisenberg algebra.
    let heis = catalog::heisenberg(1);
    for _ in 0..50 {
        if bad.is_some() {
            break;
        }
        let x = random_vector(&mut rng, 3);
        let y = random_vector(&mut rng, 3);
        cases += 1;
        let closed: Vec<Rat> = {
            let br = heis.bracket(&x, &y);
            x.iter()
                .zip(&y)
                .zip(&br)
                .map(|((xi, yi), bi)| xi + yi + bi / rat(2))
                .collect()
        };
        if bch_product(&heis, &x, &y).expect("class 2 is in range") != closed {
            bad = Some("Heisenberg closed form mismatch".into());
        }
    }
    result("bch-associativity", cases, bad)
}

/// The quasi-metric of a diagonal datum must scale exactly by e^t under the
/// flow, to within 1e-9 relative error on seeded samples.
pub fn check_homogeneity(
    corpus: &[(String, HeintzeData)],
    samples: usize,
    seed: u64,
) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    'outer: for (name, h) in corpus {
        if h.jordan().chains.iter().any(|c| c.len() > 1) {
            continue; // exact homogeneity is a theorem only for diagonal data
        }
        let model = match QuasiMetricModel::new(h) {
            Ok(m) => m,
            Err(e) => {
                bad = Some(format!("{name}: {e}"));
                break;
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = spread_point(&mut rng, model.dim());
            let y = spread_point(&mut rng, model.dim());
            let t: f64 = rng.random_range(-5.0..5.0);
            let base = model.distance(&x, &y);
            if base < 1e-12 {
                continue;
            }
            cases += 1;
            let moved = model.distance(&model.flow(t, &x), &model.flow(t, &y));
            let rel = ((-t).exp() * moved / base - 1.0).abs();
            if rel >= 1e-9 {
                bad = Some(format!("{name}: relative error {rel:.3e} at t = {t:.3}"));
                break 'outer;
            }
        }
    }
    result("metric-homogeneity", cases, bad)
}

/// The bracket-interplay audit must pass on every corpus datum in the
/// audited class, and corrupted chain bases must be flagged.
pub fn check_bracket_audits(corpus: &[(String, HeintzeData)]) -> PropertyResult {
    let mut cases = 0;
    let mut bad = None;
    for (name, h) in corpus {
        if !is_audited_class(h.algebra()) {
            continue;
        }
        cases += 1;
        match jordan_basis_bracket_audit(h.derivation(), h.jordan()) {
            Ok(report) if report.passed() => {}
            Ok(report) => {
                bad = Some(format!(
                    "{name}: {}",
                    report.violations.first().map_or_else(String::new, |v| v.witness.clone())
                ));
                break;
            }
            Err(e) => {
                bad = Some(format!("{name}: {e}"));
                break;
            }
        }
    }

    // Negative control: swapping a chain vector across chains on the
    // 3-dimensional block datum pairs chains of unequal length.
    if bad.is_none() {
        cases += 1;
        let h = catalog::heisenberg_block_data();
        let mut j = h.jordan().clone();
        let long = j.chains.iter().position(|c| c.len() == 2).expect("block chain");
        let short = j.chains.iter().position(|c| c.len() == 1).expect("center chain");
        let moved = j.chains[long].vectors[1].clone();
        j.chains[long].vectors[1] = j.chains[short].vectors[0].clone();
        j.chains[short].vectors[0] = moved;
        let report = jordan_basis_bracket_audit(h.derivation(), &j).expect("audited class");
        if report.passed() || !report.violations.iter().any(|v| v.rule == AuditRule::UnequalLengths)
        {
            bad = Some("cross-chain corruption went undetected".into());
        }
    }

    // Negative control: swapping a vector inside one chain of the
    // 5-dimensional datum makes an eigenvector bracket a non-top vector.
    if bad.is_none() {
        cases += 1;
        let h = catalog::five_dim_block_data();
        let mut j = h.jordan().clone();
        let chain = j.chains.iter().position(|c| c.len() == 2).expect("block chain");
        j.chains[chain].vectors.swap(0, 1);
        let report = jordan_basis_bracket_audit(h.derivation(), &j).expect("audited class");
        if report.passed() || !report.violations.iter().any(|v| v.rule == AuditRule::NonTopBracket)
        {
            bad = Some("intra-chain corruption went undetected".into());
        }
    }
    result("jordan-bracket-audit", cases, bad)
}

/// Dimension estimates on eigen-direction segments must recover the
/// eigenvalue: the snowflake consistency check of the numeric layer.
pub fn check_snowflake(corpus: &[(String, HeintzeData)]) -> PropertyResult {
    use crate::experiments::{geometric_scales, hausdorff_dim_estimate, segment_curve};
    let mut cases = 0;
    let mut bad = None;
    for (name, h) in corpus {
        if name != "abelian-3" {
            continue;
        }
        let model = QuasiMetricModel::new(h).expect("diagonal datum");
        for (i, lambda) in [(0usize, 1.0f64), (2, 3.0)] {
            cases += 1;
            let mut dir = vec![0.0; h.dim()];
            dir[i] = 1.0;
            let curve = segment_curve(&dir, 40_000);
            let scales = geometric_scales(1.0, 0.01, 20);
            match hausdorff_dim_estimate(&model, &curve, &scales) {
                Ok(est) if (est.value - lambda).abs() < 0.15 * lambda => {}
                Ok(est) => {
                    bad = Some(format!(
                        "{name}: direction {i} estimated {:.3}, expected {lambda}",
                        est.value
                    ));
                }
                Err(e) => bad = Some(format!("{name}: {e}")),
            }
        }
    }
    result("snowflake-dimension", cases, bad)
}

/// Runs every property over the given corpus.
pub fn run_suite(corpus: &[(String, HeintzeData)], config: &SuiteConfig) -> CheckReport {
    let properties = vec![
        check_bracket_laws(corpus),
        check_leibniz(corpus),
        check_grading(corpus, config.random_graded_instances, config.seed),
        check_charpoly_multiplicativity(corpus),
        check_bch_associativity(config.bch_triples, config.seed),
        check_homogeneity(corpus, config.homogeneity_samples, config.seed),
        check_bracket_audits(corpus),
        check_snowflake(corpus),
    ];
    CheckReport { passed: properties.iter().all(|p| p.passed), properties }
}

/// Runs the suite over the built-in corpus.
pub fn run_builtin_suite(config: &SuiteConfig) -> CheckReport {
    run_suite(&builtin_corpus(), config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_suite_passes() {
        let config = SuiteConfig {
            random_graded_instances: 20,
            bch_triples: 60,
            homogeneity_samples: 500,
            seed: 1,
        };
        let report = run_builtin_suite(&config);
        for p in &report.properties {
            assert!(p.passed, "{}: {:?}", p.name, p.counterexample);
            assert!(p.cases > 0, "{} ran no cases", p.name);
        }
        assert!(report.passed);
    }

    #[test]
    fn multiplicativity_sees_nontrivial_ideals() {
        let corpus = builtin_corpus();
        let triangle = corpus.iter().find(|(n, _)| n == "triangle-graph").unwrap();
        let ideals = invariant_ideals(&triangle.1);
        // Proper, nonzero ideals must appear, not just 0 and the algebra.
        assert!(ideals.iter().any(|s| s.dim() > 0 && s.dim() < 6), "{ideals:?}");
    }

    #[test]
    fn suite_runs_on_a_user_style_corpus() {
        let corpus = vec![("user".to_string(), catalog::heisenberg_block_data())];
        let config = SuiteConfig {
            random_graded_instances: 0,
            bch_triples: 30,
            homogeneity_samples: 100,
            seed: 5,
        };
        let report = run_suite(&corpus, &config);
        assert!(report.passed, "{report:?}");
    }
}
