//! The command-line interface as a library call: write inputs, run
//! commands, read back the JSON documents.
//!
//! `cargo run --example cli_documents`

use sco::cli::run;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("sco-cli-example");
    std::fs::create_dir_all(&dir)?;
    let graph = dir.join("c5.json");
    std::fs::write(&graph, r#"{"n":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#)?;
    let wsm = dir.join("wsm.json");
    std::fs::write(&wsm, r#"{"k":1,"demands":[2],"sets":[{"members":[0],"cum_weights":[0,1,4]}]}"#)?;
    let g = graph.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["chromatic", "--graph", g],
        vec!["domatic", "--graph", g],
        vec!["ab-color", "--graph", g, "--a", "5", "--b", "2"],
        vec!["solve-partition", "--graph", g, "--predicate", "indep", "--parts", "2"],
        vec!["gen-domset", "--graph", g, "--r", "2"],
        vec!["solve-wsm", "--instance", wsm.to_str().unwrap()],
        vec!["verify", "--random", "50", "--seed", "1"],
    ];
    for args in commands {
        let out = run(std::iter::once("sco").chain(args.iter().copied()));
        println!("$ sco {}\n[exit {}] {}", args.join(" "), out.code, out.stdout.trim_end());
    }
    Ok(())
}
