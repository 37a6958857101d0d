//! Structured command reports. Every command emits both a human rendering
//! and a machine document; the machine documents round-trip through serde,
//! and identical inputs (and seeds) produce byte-identical output.

use crate::heintze::{ComparisonReport, Family, HeintzeData, Invariant, SpectrumProfile, Verdict};
use crate::io::ExactRat;
use crate::rational::fmt_rat;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanBlockEntry {
    pub eigenvalue: ExactRat,
    /// Block sizes at this eigenvalue, descending.
    pub block_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDto {
    pub jumps: Vec<ExactRat>,
    pub dims: Vec<usize>,
}

impl From<&SpectrumProfile> for ProfileDto {
    fn from(p: &SpectrumProfile) -> Self {
        ProfileDto {
            jumps: p.jumps.iter().map(ExactRat::from).collect(),
            dims: p.dims.clone(),
        }
    }
}

fn jordan_entries(sig: &[(crate::rational::Rat, Vec<usize>)]) -> Vec<JordanBlockEntry> {
    sig.iter()
        .map(|(ev, sizes)| JordanBlockEntry {
            eigenvalue: ev.into(),
            block_sizes: sizes.clone(),
        })
        .collect()
}

/// Full invariant sheet for one datum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeintzeSummary {
    pub dimension: usize,
    pub nilpotency_class: usize,
    pub labels: Vec<String>,
    pub trace: ExactRat,
    pub characteristic_polynomial: String,
    /// Ascending coefficients of the characteristic polynomial.
    pub char_poly_coefficients: Vec<ExactRat>,
    /// Eigenvalues with multiplicity, ascending.
    pub eigenvalues: Vec<ExactRat>,
    pub jordan: Vec<JordanBlockEntry>,
    pub diagonalizable: bool,
    pub carnot_type: bool,
    pub u_alpha_dim: usize,
    pub h_alpha_dim: usize,
    pub jump_set: Vec<ExactRat>,
    pub profile: ProfileDto,
}

impl HeintzeSummary {
    pub fn new(h: &HeintzeData) -> Self {
        HeintzeSummary {
            dimension: h.dim(),
            nilpotency_class: h.algebra().nilpotency_class(),
            labels: h.algebra().labels().to_vec(),
            trace: h.trace().into(),
            characteristic_polynomial: h.char_poly().to_string(),
            char_poly_coefficients: h.char_poly().coeffs().iter().map(ExactRat::from).collect(),
            eigenvalues: h.jordan().column_eigenvalues().iter().map(ExactRat::from).collect(),
            jordan: jordan_entries(&h.jordan().signature()),
            diagonalizable: h.jordan().chains.iter().all(|c| c.len() == 1),
            carnot_type: h.is_carnot_type(),
            u_alpha_dim: h.u_alpha().dim(),
            h_alpha_dim: h.h_alpha().dim(),
            jump_set: h.jump_set().iter().map(ExactRat::from).collect(),
            profile: (&h.spectrum_profile()).into(),
        }
    }
}

/// Reduced sheet for a bare algebra (no derivation attached).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub dimension: usize,
    pub nilpotency_class: usize,
    pub labels: Vec<String>,
    pub center_dim: usize,
    pub derived_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "lowercase")]
pub enum InspectReport {
    Heintze(HeintzeSummary),
    Algebra(AlgebraSummary),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantDto {
    CharacteristicPolynomial,
    JordanForm,
    CarnotType,
    SpectrumProfile,
}

impl From<&Invariant> for InvariantDto {
    fn from(i: &Invariant) -> Self {
        match i {
            Invariant::CharacteristicPolynomial => InvariantDto::CharacteristicPolynomial,
            Invariant::JordanForm => InvariantDto::JordanForm,
            Invariant::CarnotType => InvariantDto::CarnotType,
            Invariant::SpectrumProfile => InvariantDto::SpectrumProfile,
        }
    }
}

impl std::fmt::Display for InvariantDto {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InvariantDto::CharacteristicPolynomial => "characteristic polynomial",
            InvariantDto::JordanForm => "Jordan form",
            InvariantDto::CarnotType => "Carnot type",
            InvariantDto::SpectrumProfile => "spectrum profile",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    /// `"distinguished"` or `"not-distinguished"`.
    pub verdict: String,
    /// The invariant that separated the pair, when one did.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub invariant: Option<InvariantDto>,
    /// Scale applied to the right datum so the smallest eigenvalues agree.
    pub scale: ExactRat,
    pub left: CompareSide,
    pub right: CompareSide,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Per-datum evidence; the right side reflects the rescaled datum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareSide {
    pub characteristic_polynomial: String,
    pub char_poly_coefficients: Vec<ExactRat>,
    pub carnot_type: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub jordan: Option<Vec<JordanBlockEntry>>,
    pub profile: ProfileDto,
}

impl CompareReport {
    pub fn new(r: &ComparisonReport) -> Self {
        let (invariant, verdict) = match &r.verdict {
            Verdict::DistinguishedBy(i) => (Some(i.into()), "distinguished".to_string()),
            Verdict::NotDistinguished => (None, "not-distinguished".to_string()),
        };
        let side = |poly: &crate::poly::Polynomial,
                    carnot: bool,
                    jordan: Option<&Vec<(crate::rational::Rat, Vec<usize>)>>,
                    profile: &SpectrumProfile| CompareSide {
            characteristic_polynomial: poly.to_string(),
            char_poly_coefficients: poly.coeffs().iter().map(ExactRat::from).collect(),
            carnot_type: carnot,
            jordan: jordan.map(|s| jordan_entries(s)),
            profile: profile.into(),
        };
        CompareReport {
            verdict,
            invariant,
            scale: (&r.scale).into(),
            left: side(
                &r.char_polys.0,
                r.carnot.0,
                r.jordan_signatures.as_ref().map(|(l, _)| l),
                &r.profiles.0,
            ),
            right: side(
                &r.char_polys.1,
                r.carnot.1,
                r.jordan_signatures.as_ref().map(|(_, x)| x),
                &r.profiles.1,
            ),
            family: r.family.map(|f| {
                match f {
                    Family::Abelian => "abelian",
                    Family::Heisenberg => "heisenberg",
                }
                .to_string()
            }),
            note: r.note.clone(),
        }
    }

    pub fn distinguished(&self) -> bool {
        self.invariant.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEvaluation {
    pub p: ExactRat,
    /// Profile value at `p`, absent when the point is refused.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dimension: Option<usize>,
    /// Why the point was refused, when it was.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub trace: ExactRat,
    pub jump_set: Vec<ExactRat>,
    pub profile: ProfileDto,
    pub evaluations: Vec<ProfileEvaluation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HausdorffSegment {
    pub eigenvalue: ExactRat,
    pub direction_label: String,
    pub estimate: f64,
    pub scale_max: f64,
    pub scale_min: f64,
    pub regression_points: Vec<(f64, f64)>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum EstimateReport {
    Hausdorff {
        seed: u64,
        curve_samples: usize,
        segments: Vec<HausdorffSegment>,
    },
    Lemma31 {
        seed: u64,
        samples: usize,
        mu: f64,
        c_hat: f64,
        violations: usize,
        trend_slope: f64,
        bin_minima: Vec<(f64, f64)>,
    },
    DiagSandwich {
        seed: u64,
        samples: usize,
        sweeps: Vec<SandwichRow>,
    },
    Cosets {
        seed: u64,
        samples: usize,
        subalgebra_dim: usize,
        /// Logarithm of the translating element, in basis coordinates.
        element: Vec<ExactRat>,
        branch: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        growth_exponent: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        max_distance: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        obstruction: Option<Vec<ExactRat>>,
        distances: Vec<(f64, f64)>,
    },
    Triangle {
        seed: u64,
        samples: usize,
        constant: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub mu: f64,
    pub constant: f64,
    pub lower_side: f64,
    pub upper_side: f64,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

fn rats(xs: &[ExactRat]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| fmt_rat(&x.0)).collect();
    parts.join(", ")
}

impl InspectReport {
    pub fn human(&self) -> String {
        match self {
            InspectReport::Heintze(h) => h.human(),
            InspectReport::Algebra(a) => a.human(),
        }
    }
}

impl HeintzeSummary {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dimension          {}", self.dimension);
        let _ = writeln!(s, "nilpotency class   {}", self.nilpotency_class);
        let _ = writeln!(s, "basis              {}", self.labels.join(", "));
        let _ = writeln!(s, "trace              {}", fmt_rat(&self.trace.0));
        let _ = writeln!(s, "char poly          {}", self.characteristic_polynomial);
        let _ = writeln!(s, "eigenvalues        {}", rats(&self.eigenvalues));
        let jordan: Vec<String> = self
            .jordan
            .iter()
            .map(|j| {
                let sizes: Vec<String> =
                    j.block_sizes.iter().map(|b| b.to_string()).collect();
                format!("{}: [{}]", fmt_rat(&j.eigenvalue.0), sizes.join(", "))
            })
            .collect();
        let _ = writeln!(s, "jordan blocks      {}", jordan.join("; "));
        let _ = writeln!(s, "diagonalizable     {}", self.diagonalizable);
        let _ = writeln!(s, "carnot type        {}", self.carnot_type);
        let _ = writeln!(s, "dim u_alpha        {}", self.u_alpha_dim);
        let _ = writeln!(s, "dim h_alpha        {}", self.h_alpha_dim);
        let _ = writeln!(s, "jump set           {{{}}}", rats(&self.jump_set));
        let _ = writeln!(
            s,
            "profile jumps      {{{}}} with dims {:?}",
            rats(&self.profile.jumps),
            self.profile.dims
        );
        s
    }
}

impl AlgebraSummary {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dimension          {}", self.dimension);
        let _ = writeln!(s, "nilpotency class   {}", self.nilpotency_class);
        let _ = writeln!(s, "basis              {}", self.labels.join(", "));
        let _ = writeln!(s, "center dim         {}", self.center_dim);
        let _ = writeln!(s, "derived dim        {}", self.derived_dim);
        let _ = writeln!(s, "note               no derivation attached; spectral data omitted");
        s
    }
}

impl CompareReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        match &self.invariant {
            Some(i) => {
                let _ = writeln!(s, "verdict            distinguished by {i}");
            }
            None => {
                let _ = writeln!(s, "verdict            not distinguished");
            }
        }
        let _ = writeln!(s, "scale on right     {}", fmt_rat(&self.scale.0));
        if let Some(f) = &self.family {
            let _ = writeln!(s, "family             {f}");
        }
        let _ = writeln!(s, "left  char poly    {}", self.left.characteristic_polynomial);
        let _ = writeln!(s, "right char poly    {}", self.right.characteristic_polynomial);
        let _ = writeln!(
            s,
            "carnot type        left {}, right {}",
            self.left.carnot_type, self.right.carnot_type
        );
        if let (Some(l), Some(r)) = (&self.left.jordan, &self.right.jordan) {
            let fmt = |entries: &Vec<JordanBlockEntry>| {
                let parts: Vec<String> = entries
                    .iter()
                    .map(|j| format!("{}: {:?}", fmt_rat(&j.eigenvalue.0), j.block_sizes))
                    .collect();
                parts.join("; ")
            };
            let _ = writeln!(s, "left  jordan       {}", fmt(l));
            let _ = writeln!(s, "right jordan       {}", fmt(r));
        }
        let _ = writeln!(
            s,
            "left  profile      {{{}}} dims {:?}",
            rats(&self.left.profile.jumps),
            self.left.profile.dims
        );
        let _ = writeln!(
            s,
            "right profile      {{{}}} dims {:?}",
            rats(&self.right.profile.jumps),
            self.right.profile.dims
        );
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note               {n}");
        }
        s
    }
}

impl ProfileReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trace              {}", fmt_rat(&self.trace.0));
        let _ = writeln!(s, "jump candidates    {{{}}}", rats(&self.jump_set));
        let _ = writeln!(
            s,
            "profile jumps      {{{}}} with dims {:?}",
            rats(&self.profile.jumps),
            self.profile.dims
        );
        if !self.evaluations.is_empty() {
            let _ = writeln!(s, "evaluations:");
            for e in &self.evaluations {
                match (&e.dimension, &e.note) {
                    (Some(d), _) => {
                        let _ = writeln!(s, "  p = {:<8} dim {}", fmt_rat(&e.p.0), d);
                    }
                    (None, Some(n)) => {
                        let _ = writeln!(s, "  p = {:<8} refused: {}", fmt_rat(&e.p.0), n);
                    }
                    (None, None) => {
                        let _ = writeln!(s, "  p = {:<8} refused", fmt_rat(&e.p.0));
                    }
                }
            }
        }
        s
    }
}

impl EstimateReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        match self {
            EstimateReport::Hausdorff { seed, curve_samples, segments } => {
                let _ = writeln!(
                    s,
                    "experiment         hausdorff (seed {seed}, {curve_samples} curve samples)"
                );
                for seg in segments {
                    let _ = writeln!(
                        s,
                        "  direction {:<6} eigenvalue {:<6} estimate {:.4}  \
                         (scales {:.3}..{:.3}, {} points, residual {:.2e})",
                        seg.direction_label,
                        fmt_rat(&seg.eigenvalue.0),
                        seg.estimate,
                        seg.scale_max,
                        seg.scale_min,
                        seg.regression_points.len(),
                        seg.residual
                    );
                }
            }
            EstimateReport::Lemma31 {
                seed,
                samples,
                mu,
                c_hat,
                violations,
                trend_slope,
                ..
            } => {
                let _ = writeln!(s, "experiment         lemma31 (seed {seed}, {samples} samples)");
                let _ = writeln!(s, "mu                 {mu}");
                let _ = writeln!(s, "c_hat              {c_hat:.6e}");
                let _ = writeln!(s, "bin violations     {violations}");
                let _ = writeln!(s, "trend slope        {trend_slope:.4}");
            }
            EstimateReport::DiagSandwich { seed, samples, sweeps } => {
                let _ = writeln!(
                    s,
                    "experiment         diagsandwich (seed {seed}, {samples} samples)"
                );
                for row in sweeps {
                    if row.trivial {
                        let _ = writeln!(
                            s,
                            "  mu = {:<5} C = 1 (derivation is semisimple; metrics coincide)",
                            row.mu
                        );
                    } else {
                        let _ = writeln!(
                            s,
                            "  mu = {:<5} C = {:.6}  (lower side {:.6}, upper side {:.6})",
                            row.mu, row.constant, row.lower_side, row.upper_side
                        );
                    }
                }
            }
            EstimateReport::Cosets {
                seed,
                samples,
                subalgebra_dim,
                branch,
                growth_exponent,
                max_distance,
                obstruction,
                ..
            } => {
                let _ = writeln!(s, "experiment         cosets (seed {seed}, {samples} samples)");
                let _ = writeln!(s, "subalgebra dim     {subalgebra_dim}");
                let _ = writeln!(s, "branch             {branch}");
                if let Some(e) = growth_exponent {
                    let _ = writeln!(s, "growth exponent    {e:.4}");
                }
                if let Some(m) = max_distance {
                    let _ = writeln!(s, "max distance       {m:.6}");
                }
                if let Some(o) = obstruction {
                    let _ = writeln!(s, "obstruction        [{}]", rats(o));
                }
            }
            EstimateReport::Triangle { seed, samples, constant } => {
                let _ = writeln!(s, "experiment         triangle (seed {seed}, {samples} samples)");
                let _ = writeln!(s, "sampled constant   {constant:.6}");
            }
        }
        s
    }
}

impl CheckReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        for p in &self.properties {
            let mark = if p.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{mark}  {:<28} ({} cases)", p.name, p.cases);
            if let Some(c) = &p.counterexample {
                let _ = writeln!(s, "      counterexample: {c}");
            }
        }
        let _ = writeln!(s, "overall            {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::heintze::compare;

    #[test]
    fn inspect_summary_matches_the_worked_example() {
        let report = HeintzeSummary::new(&catalog::triangle_data());
        let evs: Vec<String> =
            report.eigenvalues.iter().map(|e| fmt_rat(&e.0)).collect();
        assert_eq!(evs, ["1", "2", "3", "3", "4", "5"]);
        assert!(!report.carnot_type);
        assert_eq!(report.profile.dims, vec![0, 3, 5, 6]);
        let human = report.human();
        assert!(human.contains("carnot type        false"), "{human}");
    }

    #[test]
    fn reports_round_trip_through_json() {
        let r = CompareReport::new(&compare(
            &catalog::triangle_data(),
            &catalog::two_edges_data(),
        ));
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: CompareReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(r.distinguished());
        assert_eq!(r.invariant, Some(InvariantDto::CharacteristicPolynomial));

        let inspect = InspectReport::Heintze(HeintzeSummary::new(&catalog::triangle_data()));
        let text = serde_json::to_string(&inspect).unwrap();
        let back: InspectReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inspect);

        let est = EstimateReport::Triangle { seed: 7, samples: 100, constant: 1.25 };
        let text = serde_json::to_string(&est).unwrap();
        let back: EstimateReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, est);
    }

    #[test]
    fn serialization_is_deterministic() {
        let make = || {
            serde_json::to_string_pretty(&CompareReport::new(&compare(
                &catalog::triangle_data(),
                &catalog::two_edges_data(),
            )))
            .unwrap()
        };
        assert_eq!(make(), make());
    }
}
