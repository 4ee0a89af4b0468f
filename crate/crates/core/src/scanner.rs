//! Corpus-scale classification: one report per graph, filtered buckets for
//! counterexample hunting, and the spectrum of observed `R_π` values.
//!
//! Classification enforces the known implication lattice as hard assertions
//! (walk-regular implies regular and reversible; distance-regular and
//! vertex-transitive each imply walk-regular). These are theorems, so a
//! violation can only be an implementation bug and aborts the scan with the
//! offending graph6 record rather than producing a bogus "counterexample".

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::electrical::{self, ElectricalError};
use crate::graph::Graph;
use crate::linalg::Rational;
use crate::symmetry;
use crate::walks::{self, WalkError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScanError {
    #[error("graph is not connected")]
    Disconnected,
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Electrical(#[from] ElectricalError),
}

/// Everything the toolkit can decide about one connected graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub regular: bool,
    pub degree: Option<usize>,
    pub walk_regular: bool,
    pub vertex_transitive: bool,
    pub distance_regular: bool,
    pub intersection_array: Option<String>,
    pub reversible: bool,
    #[serde(with = "crate::linalg::serde_rational_opt")]
    pub r_pi: Option<Rational>,
    pub spectral_gap: Option<f64>,
    #[serde(with = "crate::linalg::serde_rational")]
    pub max_hitting_asymmetry: Rational,
}

/// Classifies one connected graph, delegating to the walk, symmetry, and
/// electrical modules and asserting the implication lattice.
///
/// The 1-vertex graph is a degenerate case: it has no vertex pairs, so its
/// hitting times are vacuously symmetric (`reversible = true`), while `R_π`
/// and the spectral gap stay absent (`2m = 0` and `λ₂` does not exist).
pub fn classify(g: &Graph) -> Result<ClassificationReport, ScanError> {
    if !g.is_connected() {
        return Err(ScanError::Disconnected);
    }
    let graph6 = g.to_graph6();
    let n = g.n();
    let degree = g.regular_degree();
    let regular = degree.is_some();
    let walk_regular = walks::is_walk_regular(g);
    let vertex_transitive = symmetry::is_vertex_transitive(g);
    let intersection_array = symmetry::is_distance_regular(g)
        .expect("connectivity already checked")
        .map(|array| array.to_string());
    let distance_regular = intersection_array.is_some();

    let (reversible, r_pi, max_hitting_asymmetry) = if n == 1 {
        (true, None, crate::linalg::rat(0))
    } else {
        let report = electrical::is_reversible(g)?;
        (report.reversible, report.r_pi, report.max_asymmetry)
    };
    let spectral_gap = if regular && n >= 2 {
        Some(electrical::spectral_gap_estimate(g)?)
    } else {
        None
    };

    let lattice = [
        (walk_regular, regular, "walk_regular => regular"),
        (distance_regular, walk_regular, "distance_regular => walk_regular"),
        (vertex_transitive, walk_regular, "vertex_transitive => walk_regular"),
        (walk_regular, reversible, "walk_regular => reversible"),
    ];
    for (premise, conclusion, name) in lattice {
        assert!(
            !premise || conclusion,
            "implication lattice violated ({name}) on graph {graph6}"
        );
    }

    Ok(ClassificationReport {
        graph6,
        n,
        m: g.m(),
        regular,
        degree,
        walk_regular,
        vertex_transitive,
        distance_regular,
        intersection_array,
        reversible,
        r_pi,
        spectral_gap,
        max_hitting_asymmetry,
    })
}

/// The classification flags a filter expression can reference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyFlag {
    Regular,
    WalkRegular,
    VertexTransitive,
    DistanceRegular,
    Reversible,
}

impl PropertyFlag {
    pub const ALL_NAMES: &'static [&'static str] = &[
        "regular",
        "walk_regular",
        "vertex_transitive",
        "distance_regular",
        "reversible",
    ];

    fn name(self) -> &'static str {
        match self {
            PropertyFlag::Regular => "regular",
            PropertyFlag::WalkRegular => "walk_regular",
            PropertyFlag::VertexTransitive => "vertex_transitive",
            PropertyFlag::DistanceRegular => "distance_regular",
            PropertyFlag::Reversible => "reversible",
        }
    }

    fn read(self, report: &ClassificationReport) -> bool {
        match self {
            PropertyFlag::Regular => report.regular,
            PropertyFlag::WalkRegular => report.walk_regular,
            PropertyFlag::VertexTransitive => report.vertex_transitive,
            PropertyFlag::DistanceRegular => report.distance_regular,
            PropertyFlag::Reversible => report.reversible,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("filter expression is empty")]
    Empty,
    #[error("unknown property {0:?} (expected one of regular, walk_regular, vertex_transitive, distance_regular, reversible)")]
    UnknownProperty(String),
}

/// A conjunction of possibly negated property flags, e.g.
/// `walk_regular & !vertex_transitive`. `∧` and `¬` are accepted as
/// synonyms for `&` and `!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyExpr {
    terms: Vec<(bool, PropertyFlag)>,
}

impl PropertyExpr {
    pub fn matches(&self, report: &ClassificationReport) -> bool {
        self.terms
            .iter()
            .all(|&(negated, flag)| flag.read(report) != negated)
    }
}

impl FromStr for PropertyExpr {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, FilterError> {
        let mut terms = Vec::new();
        for raw_term in s.replace('∧', "&").split('&') {
            let mut term = raw_term.trim();
            let mut negated = false;
            loop {
                if let Some(rest) = term.strip_prefix('!').or_else(|| term.strip_prefix('¬')) {
                    negated = !negated;
                    term = rest.trim_start();
                } else {
                    break;
                }
            }
            if term.is_empty() {
                return Err(FilterError::Empty);
            }
            let flag = match term {
                "regular" => PropertyFlag::Regular,
                "walk_regular" => PropertyFlag::WalkRegular,
                "vertex_transitive" => PropertyFlag::VertexTransitive,
                "distance_regular" => PropertyFlag::DistanceRegular,
                "reversible" => PropertyFlag::Reversible,
                other => return Err(FilterError::UnknownProperty(other.to_string())),
            };
            terms.push((negated, flag));
        }
        if terms.is_empty() {
            return Err(FilterError::Empty);
        }
        Ok(PropertyExpr { terms })
    }
}

impl fmt::Display for PropertyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (negated, flag)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            if *negated {
                write!(f, "!")?;
            }
            write!(f, "{}", flag.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PropertyCounts {
    pub regular: usize,
    pub walk_regular: usize,
    pub vertex_transitive: usize,
    pub distance_regular: usize,
    pub reversible: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterBucket {
    pub filter: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    #[serde(with = "crate::linalg::serde_rational")]
    pub value: Rational,
    pub witness: String,
}

/// Deterministic summary of a whole-corpus scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    /// Stream entries seen, including skipped and failed ones.
    pub total: usize,
    pub disconnected_skipped: usize,
    pub errors: usize,
    pub counts: PropertyCounts,
    pub buckets: Vec<FilterBucket>,
    pub r_pi_spectrum: Vec<SpectrumEntry>,
}

/// Classifies every graph in the stream and aggregates.
///
/// Work is spread over `jobs` worker threads, but results are merged in
/// input order, so the summary is byte-identical for every `jobs` value.
/// Disconnected entries are counted and skipped; other per-graph errors are
/// tallied without aborting the scan.
pub fn scan_stream<I>(graphs: I, filters: &[PropertyExpr], jobs: usize) -> ScanSummary
where
    I: IntoIterator<Item = Graph>,
{
    assert!(jobs >= 1, "at least one worker required");
    let items: Vec<Graph> = graphs.into_iter().collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool");
    let results: Vec<Result<ClassificationReport, ScanError>> =
        pool.install(|| items.par_iter().map(classify).collect());

    let mut summary = ScanSummary {
        total: results.len(),
        disconnected_skipped: 0,
        errors: 0,
        counts: PropertyCounts::default(),
        buckets: filters
            .iter()
            .map(|f| FilterBucket {
                filter: f.to_string(),
                members: Vec::new(),
            })
            .collect(),
        r_pi_spectrum: Vec::new(),
    };
    let mut spectrum: BTreeMap<Rational, String> = BTreeMap::new();

    for result in results {
        let report = match result {
            Ok(report) => report,
            Err(ScanError::Disconnected) => {
                summary.disconnected_skipped += 1;
                continue;
            }
            Err(_) => {
                summary.errors += 1;
                continue;
            }
        };
        summary.counts.regular += usize::from(report.regular);
        summary.counts.walk_regular += usize::from(report.walk_regular);
        summary.counts.vertex_transitive += usize::from(report.vertex_transitive);
        summary.counts.distance_regular += usize::from(report.distance_regular);
        summary.counts.reversible += usize::from(report.reversible);
        for (expr, bucket) in filters.iter().zip(&mut summary.buckets) {
            if expr.matches(&report) {
                bucket.members.push(report.graph6.clone());
            }
        }
        if let Some(value) = &report.r_pi {
            spectrum
                .entry(value.clone())
                .or_insert_with(|| report.graph6.clone());
        }
    }

    summary.r_pi_spectrum = spectrum
        .into_iter()
        .map(|(value, witness)| SpectrumEntry { value, witness })
        .collect();
    summary
}

/// Exact `R_π` of every reversible graph in the stream, ascending,
/// deduplicated with the first witness kept.
pub fn r_pi_spectrum<I>(graphs: I) -> Vec<SpectrumEntry>
where
    I: IntoIterator<Item = Graph>,
{
    scan_stream(graphs, &[], 1).r_pi_spectrum
}

/// Renders a spectrum as CSV with columns `value_num,value_den,witness_graph6`.
pub fn spectrum_to_csv(entries: &[SpectrumEntry]) -> String {
    let mut out = String::from("value_num,value_den,witness_graph6\n");
    for entry in entries {
        out.push_str(&format!(
            "{},{},{}\n",
            entry.value.numer(),
            entry.value.denom(),
            entry.witness
        ));
    }
    out
}
