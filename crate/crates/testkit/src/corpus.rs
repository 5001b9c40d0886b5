use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use devctx_core::ingest::identity::IdentityEntry;
use devctx_core::ingest::write_jsonl;
use devctx_core::{run_extraction, AlgorithmSet, IdentityMap, MatchConfig, RevisionRecord, Store, TaskRecord};

/// Raw inputs for one store.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub revisions: Vec<RevisionRecord>,
    pub tasks: Vec<TaskRecord>,
    pub identity: IdentityMap,
}

impl Corpus {
    pub fn load(&self, cfg: &MatchConfig) -> Store {
        let mut store = Store::new();
        store
            .put_entities(&self.revisions, &self.tasks, &self.identity, cfg)
            .expect("corpus loads");
        store
    }

    /// Loaded and run through every extractor.
    pub fn extracted(&self, cfg: &MatchConfig) -> Store {
        let mut store = self.load(cfg);
        run_extraction(&mut store, cfg, &AlgorithmSet::all()).expect("extraction succeeds");
        store
    }

    /// Writes `revisions.jsonl`, `tasks.jsonl` and `identity.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<[PathBuf; 3]> {
        let revisions = dir.join("revisions.jsonl");
        let tasks = dir.join("tasks.jsonl");
        let identity = dir.join("identity.json");
        write_jsonl(fs::File::create(&revisions)?, &self.revisions)?;
        write_jsonl(fs::File::create(&tasks)?, &self.tasks)?;
        let entries: &[IdentityEntry] = self.identity.entries();
        fs::write(&identity, serde_json::to_vec_pretty(entries)?)?;
        Ok([revisions, tasks, identity])
    }
}
