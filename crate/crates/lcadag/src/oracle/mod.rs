//! Deterministic instance generators and the law-checking corpus runner.

pub mod gen;
pub mod laws;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use lcadag_core::setsys::SetSystem;
use lcadag_core::transform::ominus_vertex;
use lcadag_core::{Dag, SizeIndex, VertexId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{DagDocument, FormatError, SystemDocument};
pub use gen::{gen_dag, gen_system, Flavor, GenError, GenParams};
pub use laws::{Case, Instance, LawId, Outcome};

/// Upper bound on law evaluations spent shrinking one counterexample.
const SHRINK_BUDGET: usize = 400;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The generator seed of trial `trial` of `law`.
pub fn trial_seed(seed: u64, law: LawId, trial: usize) -> u64 {
    let l = LawId::ALL.iter().position(|&x| x == law).expect("listed") as u64;
    splitmix(splitmix(seed ^ splitmix(l)).wrapping_add(trial as u64))
}

/// A failing instance in replayable form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    /// Seed that regenerates the original instance.
    pub trial_seed: u64,
    pub message: String,
    pub sizes: Vec<usize>,
    pub aux: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dag: Option<DagDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemDocument>,
    /// Size of the instance before shrinking.
    pub original_size: usize,
}

impl Counterexample {
    fn new(trial: usize, trial_seed: u64, original_size: usize, case: &Case, message: String) -> Self {
        let (dag, system) = match &case.instance {
            Instance::Dag(g) => (Some(DagDocument::from_dag(g)), None),
            Instance::System(s) => (None, Some(SystemDocument::from_system(s))),
        };
        Counterexample {
            trial,
            trial_seed,
            message,
            sizes: case.sizes.sizes().to_vec(),
            aux: case.aux,
            dag,
            system,
            original_size,
        }
    }

    /// Rebuilds the (shrunk) case.
    pub fn case(&self) -> Result<Case, FormatError> {
        let instance = match (&self.dag, &self.system) {
            (Some(d), _) => Instance::Dag(d.to_dag()?),
            (None, Some(s)) => Instance::System(s.to_system()?),
            (None, None) => return Err(FormatError::Invalid("no instance recorded".into())),
        };
        let sizes = if self.sizes.contains(&1) {
            SizeIndex::with_one(self.sizes.iter().copied())
        } else {
            SizeIndex::new(self.sizes.iter().copied())
        }
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
        Ok(Case {
            instance,
            sizes,
            aux: self.aux,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawReport {
    pub law: LawId,
    pub trials: usize,
    pub passed: usize,
    pub vacuous: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for LawReport {
    fn eq(&self, o: &Self) -> bool {
        (self.law, self.trials, self.passed, self.vacuous, self.failed)
            == (o.law, o.trials, o.passed, o.vacuous, o.failed)
            && self.counterexample == o.counterexample
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub params: GenParams,
    pub laws: Vec<LawReport>,
}

impl CorpusReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.failed == 0)
    }

    pub fn law(&self, id: LawId) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == id)
    }
}

/// Runs `law` on `case`, turning panics into failures.
pub fn run_case(law: LawId, case: &Case) -> Outcome {
    match catch_unwind(AssertUnwindSafe(|| law.check(case))) {
        Ok(o) => o,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::Fail(format!("panic: {msg}"))
        }
    }
}

enum Trial {
    Done(Outcome),
    Failed(Box<Case>, String),
    NoInstance(String),
}

fn run_trial(law: LawId, params: &GenParams, seed: u64) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match law.generate(&mut rng, params) {
        Err(e) => Trial::NoInstance(format!("generator: {e}")),
        Ok(case) => match run_case(law, &case) {
            Outcome::Fail(m) => Trial::Failed(Box::new(case), m),
            o => Trial::Done(o),
        },
    }
}

pub fn check_law(law: LawId, params: &GenParams, trials: usize) -> LawReport {
    let start = Instant::now();
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(law, params, trial_seed(params.seed, law, t)))
        .collect();
    let mut report = LawReport {
        law,
        trials,
        passed: 0,
        vacuous: 0,
        failed: 0,
        counterexample: None,
        elapsed: Duration::ZERO,
    };
    for (t, r) in results.into_iter().enumerate() {
        match r {
            Trial::Done(Outcome::Pass) => report.passed += 1,
            Trial::Done(Outcome::Vacuous) => report.vacuous += 1,
            Trial::Done(Outcome::Fail(_)) => unreachable!("failures are split out"),
            Trial::Failed(case, msg) => {
                report.failed += 1;
                if report.counterexample.is_none() {
                    let size = case.instance.size();
                    let (case, msg) = shrink(law, *case, msg);
                    let seed = trial_seed(params.seed, law, t);
                    report.counterexample = Some(Counterexample::new(t, seed, size, &case, msg));
                }
            }
            Trial::NoInstance(msg) => {
                report.failed += 1;
                if report.counterexample.is_none() {
                    report.counterexample = Some(Counterexample {
                        trial: t,
                        trial_seed: trial_seed(params.seed, law, t),
                        message: msg,
                        sizes: Vec::new(),
                        aux: 0,
                        dag: None,
                        system: None,
                        original_size: 0,
                    });
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Runs every law in `laws` for `trials` trials each.
pub fn check_corpus(laws: &[LawId], params: &GenParams, trials: usize) -> CorpusReport {
    CorpusReport {
        params: params.clone(),
        laws: laws.iter().map(|&l| check_law(l, params, trials)).collect(),
    }
}

fn without_edge(g: &Dag, e: (VertexId, VertexId)) -> Option<Dag> {
    let vertices = g.vertices().iter().map(|&v| (v, g.label(v).map(String::from)));
    let edges = g.edges().into_iter().filter(|&x| x != e);
    Dag::new(vertices, edges).ok()
}

fn without_member(s: &SetSystem, i: usize) -> SetSystem {
    s.with_members(
        s.members()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, m)| m.clone()),
    )
}

fn smaller(case: &Case) -> Vec<Case> {
    let with = |instance| Case {
        instance,
        sizes: case.sizes.clone(),
        aux: case.aux,
    };
    match &case.instance {
        Instance::Dag(g) => {
            let mut out: Vec<Case> = g
                .vertices()
                .iter()
                .filter_map(|&v| ominus_vertex(g, v).ok())
                .map(|h| with(Instance::Dag(h)))
                .collect();
            out.extend(
                g.edges()
                    .into_iter()
                    .filter_map(|e| without_edge(g, e))
                    .map(|h| with(Instance::Dag(h))),
            );
            out
        }
        Instance::System(s) => (0..s.len())
            .filter(|&i| s.members()[i].len() > 1)
            .map(|i| with(Instance::System(without_member(s, i))))
            .collect(),
    }
}

/// Greedy shrinking: take the first smaller case that still fails.
fn shrink(law: LawId, mut case: Case, mut msg: String) -> (Case, String) {
    let mut budget = SHRINK_BUDGET;
    'outer: while budget > 0 {
        for c in smaller(&case) {
            if budget == 0 {
                break 'outer;
            }
            budget -= 1;
            if let Outcome::Fail(m) = run_case(law, &c) {
                case = c;
                msg = m;
                continue 'outer;
            }
        }
        break;
    }
    (case, msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> GenParams {
        GenParams {
            seed: 7,
            leaves: [3, 5],
            internal: [1, 6],
            ..GenParams::default()
        }
    }

    #[test]
    fn every_law_passes_a_few_trials() {
        let r = check_corpus(LawId::ALL, &small(), 12);
        for l in &r.laws {
            assert_eq!(l.failed, 0, "{}: {:?}", l.law, l.counterexample);
            assert_eq!(l.passed + l.vacuous, 12);
        }
        assert!(r.all_passed());
    }

    #[test]
    fn reports_are_reproducible() {
        let laws = [LawId::OminusPreservation, LawId::HierarchyShapes];
        assert_eq!(check_corpus(&laws, &small(), 20), check_corpus(&laws, &small(), 20));
        let json = serde_json::to_string(&check_corpus(&laws, &small(), 5)).unwrap();
        let back: CorpusReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, check_corpus(&laws, &small(), 5));
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        // A law applied to the wrong instance kind always fails; the shrunk
        // case must still fail and not be larger.
        let g = lcadag_core::fixtures::b3();
        let case = Case {
            instance: Instance::Dag(g),
            sizes: SizeIndex::with_one([1, 2]).unwrap(),
            aux: 3,
        };
        let (small, msg) = shrink(LawId::HasseStructure, case.clone(), "x".into());
        assert!(small.instance.size() < case.instance.size());
        assert!(msg.contains("set system"));
        let ce = Counterexample::new(0, 0, 14, &small, msg);
        assert_eq!(ce.case().unwrap(), small);
    }
}
