//! Recomputes the fixture's expected outputs with the reference
//! implementation and writes them under `fixtures/expected/`.

use std::fs;

use devctx_core::MatchConfig;
use devctx_testkit::fixture;
use devctx_testkit::oracle::{counts, Model, ViewOracle};

fn main() -> std::io::Result<()> {
    let corpus = fixture::corpus();
    let cfg = MatchConfig::default();
    let model = Model::new(&corpus, &cfg);
    let rels = model.relations();
    let write = |name: &str, value: &serde_json::Value| {
        let mut text = serde_json::to_string_pretty(value).expect("json");
        text.push('\n');
        fs::write(fixture::expected_path(name), text)
    };
    write("counts.json", &counts(&rels))?;
    let views = ViewOracle::new(&model, &rels);
    for (kind, id) in fixture::FOCI {
        let view = views.context(kind, id, fixture::K).expect("focus exists");
        write(&fixture::view_file(kind, id), &view)?;
    }
    println!("wrote {}", fixture::dir().join("expected").display());
    Ok(())
}
