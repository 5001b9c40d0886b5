//! Seeded random corpora.
//!
//! Names are drawn from a small vocabulary so that class names overlap,
//! nest inside each other and collide across packages, and texts mix exact
//! mentions with near misses (glued suffixes, case changes, digits).

use std::collections::BTreeSet;

use chrono::{DateTime, Duration, TimeZone, Utc};
use devctx_core::ingest::identity::IdentityEntry;
use devctx_core::ingest::{ChangeKind, ChangedPath, CommentRecord};
use devctx_core::{IdentityMap, MatchConfig, RevisionRecord, TaskRecord};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub revisions: usize,
    pub tasks: usize,
    pub resources: usize,
}

impl Shape {
    /// The bounds used for oracle comparison.
    pub const SMALL: Shape = Shape {
        revisions: 100,
        tasks: 50,
        resources: 40,
    };
    pub const SCALE: Shape = Shape {
        revisions: 5000,
        tasks: 2000,
        resources: 1000,
    };
}

const PARTS: &[&str] = &[
    "Grid", "Model", "View", "Job", "Queue", "Io", "Batch", "Service", "X", "Context", "Manager",
];
const PACKAGES: &[&str] = &[
    "eu/geclipse/core",
    "eu/geclipse/ui/views",
    "org/example/batch",
    "core",
    "io",
];
const WORDS: &[&str] = &[
    "the", "fails", "NPE", "in", "on", "load", "see", "fixed", "at", "when", "job", "grid", "model", "queue",
    "refresh", "null", "crash", "wizard", "version",
];
const SEPARATORS: &[&str] = &[" ", " ", " ", ", ", ". ", "(", ")", ": ", "_", "\n", "\tat ", "/", "-", "."];
const AUTHORS: &[&str] = &["alice", "Alice ", "ALICE", "bob", "b.smith", "carol", "dave", "  erin", "Frank"];
const ACCOUNTS: &[&str] = &[
    "alice", "bob@x.org", "carol@x.org", "", "  ", "dave", "frank@x.org", "gina@x.org",
];
const EXTRA_TEMPLATES: &[&str] = &["fixes <id>", "[<id>]", "<id> done", "issue:<id>"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A shape drawn uniformly within `bound` (at least one of each entity).
pub fn random_shape(rng: &mut impl Rng, bound: Shape) -> Shape {
    Shape {
        revisions: rng.random_range(1..=bound.revisions),
        tasks: rng.random_range(1..=bound.tasks),
        resources: rng.random_range(1..=bound.resources),
    }
}

/// A valid configuration with every knob varied.
pub fn random_config(rng: &mut impl Rng) -> MatchConfig {
    let mut cfg = MatchConfig {
        case_sensitive: rng.random_bool(0.5),
        min_class_name_length: rng.random_range(1..=5),
        bare_id_min_digits: rng.random_range(1..=4),
        max_changeset_size: *[2usize, 3, 5, 8, 50].choose(rng).unwrap(),
        cochange_min_weight: rng.random_range(1..=3),
        ..MatchConfig::default()
    };
    if rng.random_bool(0.5) {
        let mut templates = cfg.id_patterns.clone();
        templates.extend(EXTRA_TEMPLATES.iter().filter(|_| rng.random_bool(0.5)).map(|s| s.to_string()));
        templates.shuffle(rng);
        cfg.id_patterns = templates;
    }
    if rng.random_bool(0.3) {
        cfg.source_extensions.insert("xml".into());
    }
    if rng.random_bool(0.3) {
        cfg.source_root_markers = vec!["src".into()];
    }
    cfg
}

fn class_name(rng: &mut impl Rng) -> String {
    let n = rng.random_range(1..=2);
    (0..n).map(|_| *PARTS.choose(rng).unwrap()).collect()
}

fn random_path(rng: &mut impl Rng) -> String {
    let class = class_name(rng);
    let pkg = PACKAGES.choose(rng).unwrap();
    match rng.random_range(0..7) {
        0 | 1 => format!("plugin/src/{pkg}/{class}.java"),
        2 => format!("mod/src/main/java/{pkg}/{class}.java"),
        3 => format!("{class}.java"),
        4 => format!("docs/{}.txt", class.to_lowercase()),
        5 => format!("plugin/{class}.xml"),
        _ => format!("tests/src/test/java/{pkg}/{class}Test.java"),
    }
}

/// Forms a text might mention for a path: file name, stem, dotted package path.
fn mentions(path: &str) -> Vec<String> {
    let file = path.rsplit('/').next().unwrap().to_string();
    let stem = file.rsplit_once('.').map_or(file.clone(), |(s, _)| s.to_string());
    let dotted = path
        .split_once("/src/")
        .map(|(_, rest)| rest.trim_start_matches("main/java/").trim_start_matches("test/java/"))
        .and_then(|rest| rest.rsplit_once('.'))
        .map(|(no_ext, _)| no_ext.replace('/', "."));
    let mut out = vec![file, stem];
    out.extend(dotted);
    out
}

fn mangle(rng: &mut impl Rng, s: &str) -> String {
    match rng.random_range(0..10) {
        0 => s.to_lowercase(),
        1 => s.to_uppercase(),
        2 => format!("{s}{}", rng.random_range(0..10)),
        3 => format!("{s}s"),
        4 => format!("_{s}"),
        _ => s.to_string(),
    }
}

fn random_text(rng: &mut impl Rng, paths: &[String], max_tokens: usize) -> String {
    let n = rng.random_range(0..=max_tokens);
    let mut out = String::new();
    for i in 0..n {
        if i > 0 {
            out.push_str(SEPARATORS.choose(rng).unwrap());
        }
        if rng.random_bool(0.35) && !paths.is_empty() {
            let path = paths.choose(rng).unwrap();
            let forms = mentions(path);
            let form = forms.choose(rng).unwrap();
            if rng.random_bool(0.15) {
                let file = path.rsplit('/').next().unwrap();
                out.push_str(&format!("at {form}.run({file}:{})", rng.random_range(1..500)));
            } else {
                out.push_str(&mangle(rng, form));
            }
        } else {
            out.push_str(WORDS.choose(rng).unwrap());
        }
    }
    out
}

fn external_id(rng: &mut impl Rng) -> String {
    match rng.random_range(0..10) {
        0 => format!("GEC-{}", rng.random_range(1..60)),
        1 => format!("0{}", rng.random_range(1..99)),
        _ => {
            let digits = rng.random_range(1..=5);
            let lo = 10u32.pow(digits - 1);
            rng.random_range(lo..lo * 10).to_string()
        }
    }
}

fn reference(rng: &mut impl Rng, id: &str) -> String {
    let forms: &[&str] = &[
        "bug {}", "BUG\t{}", "Bug  {}", "debug {}", "#{}", "{}", "{}7", "x{}", "(#{})", "bugs {}", "bug{}",
        "fixes {}", "[{}]", "{} done", "issue:{}", "1{}",
    ];
    forms.choose(rng).unwrap().replace("{}", id)
}

fn random_message(rng: &mut impl Rng, ids: &[String], paths: &[String]) -> String {
    let mut parts = vec![random_text(rng, paths, 4)];
    for _ in 0..rng.random_range(0..=3) {
        if ids.is_empty() || rng.random_bool(0.2) {
            parts.push(rng.random_range(0..100_000).to_string());
        } else {
            let id = ids.choose(rng).unwrap();
            parts.push(reference(rng, id));
        }
    }
    parts.shuffle(rng);
    parts.join(*[" ", ": ", ", ", "\n"].choose(rng).unwrap())
}

fn identity(rng: &mut impl Rng) -> IdentityMap {
    let mut entries = Vec::new();
    if rng.random_bool(0.7) {
        entries.push(IdentityEntry {
            id: "dev:alice".into(),
            vcs: BTreeSet::from(["alice".into(), "Alice ".into()]),
            its: BTreeSet::from(["alice".into()]),
        });
    }
    if rng.random_bool(0.7) {
        entries.push(IdentityEntry {
            id: "dev:bob".into(),
            vcs: BTreeSet::from(["bob".into(), "b.smith".into()]),
            its: BTreeSet::from(["bob@x.org".into()]),
        });
    }
    IdentityMap::new(entries).expect("generated identity map is valid")
}

fn base_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2009, 1, 1, 0, 0, 0).unwrap()
}

/// A corpus with exactly the given numbers of revisions and tasks and at
/// most `shape.resources` distinct paths.
pub fn generate(seed: u64, shape: Shape) -> Corpus {
    let mut rng = rng(seed);
    let mut pool: BTreeSet<String> = BTreeSet::new();
    for _ in 0..shape.resources * 4 {
        if pool.len() >= shape.resources {
            break;
        }
        pool.insert(random_path(&mut rng));
    }
    let mut paths: Vec<String> = pool.into_iter().collect();
    paths.shuffle(&mut rng);
    let ids: Vec<String> = (0..shape.tasks).map(|_| external_id(&mut rng)).collect();
    let mut mentioned = paths.clone();
    // names of resources that no revision touches still show up in texts
    mentioned.push("plugin/src/core/Orphan.java".into());

    let mut revisions = Vec::with_capacity(shape.revisions);
    let mut clock = base_time();
    for i in 0..shape.revisions {
        clock += Duration::minutes(rng.random_range(1..600));
        let size = if rng.random_bool(0.05) {
            rng.random_range(1..=paths.len().min(12))
        } else {
            rng.random_range(1..=paths.len().min(4))
        };
        // every path appears in some revision when revisions allow
        let mut chosen: Vec<&String> = paths.choose_multiple(&mut rng, size).collect();
        if i < paths.len() && !chosen.contains(&&paths[i]) {
            chosen[0] = &paths[i];
        }
        let changed_paths = chosen
            .into_iter()
            .map(|p| ChangedPath {
                path: p.clone(),
                change_kind: *[ChangeKind::Added, ChangeKind::Modified, ChangeKind::Modified, ChangeKind::Deleted]
                    .choose(&mut rng)
                    .unwrap(),
            })
            .collect();
        revisions.push(RevisionRecord {
            revision_id: format!("r{}", 1000 + i),
            author: AUTHORS.choose(&mut rng).unwrap().to_string(),
            timestamp: clock,
            message: random_message(&mut rng, &ids, &mentioned),
            changed_paths,
        });
    }

    let mut tasks = Vec::with_capacity(shape.tasks);
    for (i, external_id) in ids.iter().enumerate() {
        let n = rng.random_range(0..=5);
        let mut comments: Vec<CommentRecord> = (0..n)
            .map(|_| CommentRecord {
                author: ACCOUNTS.choose(&mut rng).unwrap().to_string(),
                timestamp: base_time() + Duration::minutes(rng.random_range(0..200_000)),
                text: random_text(&mut rng, &mentioned, 12),
            })
            .collect();
        comments.sort_by_key(|c| c.timestamp);
        tasks.push(TaskRecord {
            task_id: format!("t{i}"),
            external_id: external_id.clone(),
            assignee: ACCOUNTS.choose(&mut rng).unwrap().to_string(),
            summary: random_text(&mut rng, &mentioned, 6),
            status: ["NEW", "ASSIGNED", "RESOLVED"].choose(&mut rng).unwrap().to_string(),
            comments,
        });
    }

    Corpus {
        revisions,
        tasks,
        identity: identity(&mut rng),
    }
}

/// Revisions to append to a corpus: new ids and paths drawn from the existing
/// ones, later than everything already there.
pub fn extra_revisions(seed: u64, corpus: &Corpus, n: usize) -> Vec<RevisionRecord> {
    let mut rng = rng(seed);
    let paths: Vec<String> = corpus
        .revisions
        .iter()
        .flat_map(|r| r.changed_paths.iter().map(|c| c.path.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ids: Vec<String> = corpus.tasks.iter().map(|t| t.external_id.clone()).collect();
    let mut clock = corpus.revisions.iter().map(|r| r.timestamp).max().unwrap_or_else(base_time);
    (0..n)
        .map(|i| {
            clock += Duration::minutes(rng.random_range(1..600));
            let size = rng.random_range(1..=paths.len().clamp(1, 4));
            RevisionRecord {
                revision_id: format!("x{seed}-{i}"),
                author: AUTHORS.choose(&mut rng).unwrap().to_string(),
                timestamp: clock,
                message: random_message(&mut rng, &ids, &paths),
                changed_paths: paths
                    .choose_multiple(&mut rng, size)
                    .map(|p| ChangedPath {
                        path: p.clone(),
                        change_kind: ChangeKind::Modified,
                    })
                    .collect(),
            }
        })
        .collect()
}
