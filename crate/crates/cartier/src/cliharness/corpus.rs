use serde::Serialize;

use crate::error::Result;

use super::cache::Cache;
use super::run::{run_scene, Flags, SceneReport, Status};
use super::scene::{parse_scene, LoadedScene};

/// Bundled example scenes as (file name, contents).
pub const CORPUS: &[(&str, &str)] = &[
    ("intro.json", include_str!("../../corpus/intro.json")),
    ("ass-pathology.json", include_str!("../../corpus/ass-pathology.json")),
    ("torsion-not-pure.json", include_str!("../../corpus/torsion-not-pure.json")),
    ("line-x.json", include_str!("../../corpus/line-x.json")),
    ("test-elements.json", include_str!("../../corpus/test-elements.json")),
    ("floor-p2.json", include_str!("../../corpus/floor-p2.json")),
    ("floor-p3.json", include_str!("../../corpus/floor-p3.json")),
    ("floor-p5.json", include_str!("../../corpus/floor-p5.json")),
    ("jumps-y.json", include_str!("../../corpus/jumps-y.json")),
    ("inclusion.json", include_str!("../../corpus/inclusion.json")),
    ("cusp-p7.json", include_str!("../../corpus/cusp-p7.json")),
    ("square-root.json", include_str!("../../corpus/square-root.json")),
    ("hypersurface-push.json", include_str!("../../corpus/hypersurface-push.json")),
    ("open-immersion-p2.json", include_str!("../../corpus/open-immersion-p2.json")),
    ("open-immersion-p3.json", include_str!("../../corpus/open-immersion-p3.json")),
    ("gauge.json", include_str!("../../corpus/gauge.json")),
    ("point.json", include_str!("../../corpus/point.json")),
    ("negative.json", include_str!("../../corpus/negative.json")),
    ("nilpotent.json", include_str!("../../corpus/nilpotent.json")),
];

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CorpusSummary {
    pub scenes: usize,
    pub tasks: usize,
    pub ok: usize,
    pub failed: usize,
    pub expected_negative: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub summary: CorpusSummary,
    pub scenes: Vec<SceneReport>,
}

impl CorpusReport {
    /// Expected negatives count as passing; any error or failure decides the code.
    pub fn exit_code(&self) -> i32 {
        self.scenes.iter().map(|s| s.exit_code(true)).find(|&c| c != 0).unwrap_or(0)
    }
}

/// Parsed bundled scenes, in corpus order.
pub fn corpus_scenes() -> Result<Vec<(String, crate::cliharness::Scene)>> {
    CORPUS.iter().map(|(name, text)| Ok((name.to_string(), parse_scene(text, name)?))).collect()
}

/// Runs the given scene texts and tallies the outcome.
pub fn run_scenes(scenes: &[(&str, &str)], flags: &Flags, mut cache: Option<&mut Cache>) -> CorpusReport {
    let mut reports = Vec::new();
    for (name, text) in scenes {
        let loaded = parse_scene(text, name).and_then(|s| LoadedScene::load(s, flags.e_max));
        let report = match loaded {
            Ok(scene) => run_scene(&scene, None, "corpus", flags, cache.as_deref_mut()),
            Err(e) => SceneReport::failed_to_load(name, "corpus", &e),
        };
        reports.push(report);
    }
    let mut summary = CorpusSummary { scenes: reports.len(), ..Default::default() };
    for r in &reports {
        if r.error.is_some() {
            summary.errors += 1;
        }
        for t in &r.tasks {
            summary.tasks += 1;
            match t.status {
                Status::Ok => summary.ok += 1,
                Status::Failed => summary.failed += 1,
                Status::ExpectedNegative => summary.expected_negative += 1,
                Status::Error => summary.errors += 1,
            }
        }
    }
    CorpusReport { summary, scenes: reports }
}

pub fn run_corpus(flags: &Flags, cache: Option<&mut Cache>) -> CorpusReport {
    run_scenes(CORPUS, flags, cache)
}
