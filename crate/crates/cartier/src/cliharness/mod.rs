//! Scene files, command dispatch, reports, the result cache and the bundled example corpus.

mod cache;
mod corpus;
mod run;
mod scene;

pub use cache::{cache_key, Cache, CacheMemo, CacheStats, ENGINE_VERSION};
pub use corpus::{corpus_scenes, run_corpus, run_scenes, CorpusReport, CorpusSummary, CORPUS};
pub use run::{
    exit_code_for, render_text, run_scene, ErrorRecord, Flags, Mismatch, SceneReport, Status, TaskReport, EXIT_CAP, EXIT_INVALID,
    EXIT_IO, EXIT_NEGATIVE, EXIT_OK, EXIT_PROPERTY,
};
pub use scene::{build_module, build_ring, parse_ideal, parse_scene, read_scene, CheckKind, LoadedScene, MapSpec, ModuleSpec, Op, RingSpec, Scene, Task};
