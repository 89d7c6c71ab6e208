use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HAMMING_G6: &str = "F?]u_";
const HAMMING: &str = "1000011\n0100101\n0010110\n0001111\n";

fn elc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elc"))
        .args(args)
        .output()
        .expect("run elc")
}

fn ok(args: &[&str]) -> String {
    let out = elc(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = elc(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: "), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn hamming_graph_from_edge_list() {
    let g6 = ok(&[
        "convert",
        "-f",
        "edges",
        "-g",
        "1 6;1 7;2 5;2 7;3 5;3 6;4 5;4 6;4 7",
        "--to",
        "g6",
    ]);
    assert_eq!(g6.trim(), HAMMING_G6);
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "h.txt", HAMMING);
    assert_eq!(
        ok(&["code", "graph", "-i", &m]),
        format!("# columns: 1 2 3 4 5 6 7\n{HAMMING_G6}\n")
    );
}

#[test]
fn pivot_without_swap_gives_swapped_hamming_code() {
    let out = ok(&[
        "pivot",
        "2",
        "7",
        "-g",
        HAMMING_G6,
        "--no-swap",
        "--to",
        "code",
    ]);
    assert_eq!(out, "1000111\n0100101\n0010110\n0001011\n");
}

#[test]
fn pivot_definitions_agree() {
    for swap in [false, true] {
        let outs: Vec<String> = ["lc-compose", "classes", "bipartite"]
            .iter()
            .map(|d| {
                let mut args = vec!["pivot", "2", "7", "-g", HAMMING_G6, "--def", d];
                if swap {
                    args.push("--no-swap");
                }
                ok(&args)
            })
            .collect();
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{outs:?}");
    }
}

#[test]
fn pivot_small_graphs() {
    assert_eq!(ok(&["pivot", "1", "2", "-g", "A_"]), "A_\n");
    // P4 1-2-3-4 pivoted on {2,3} is the 4-cycle 1-3-2-4-1
    assert_eq!(
        ok(&["pivot", "2", "3", "-f", "edges", "-g", "1 2;2 3;3 4"]),
        "4\n1 3\n1 4\n2 3\n2 4\n"
    );
}

#[test]
fn pivot_errors() {
    assert!(fails(&["pivot", "1", "3", "-g", "Ch"]).contains("{1, 3} is not an edge"));
    assert!(fails(&["pivot", "1", "9", "-g", "Ch"]).contains("out of range"));
    fails(&["pivot", "1", "2", "-g", "C"]);
    fails(&["pivot", "1", "2", "-g", "C~", "--def", "bipartite"]);
}

#[test]
fn orbit_dumps() {
    let p4 = ok(&["orbit", "-g", "Ch"]);
    let lines: Vec<&str> = p4.lines().collect();
    assert!(
        lines[0].starts_with('#') && lines[0].contains(" 2 "),
        "{p4}"
    );
    assert_eq!(lines.len(), 3);
    assert_ne!(lines[1], lines[2]);

    let labeled = ok(&["orbit", "-g", HAMMING_G6, "--labeled"]);
    assert_eq!(labeled.lines().filter(|l| !l.starts_with('#')).count(), 28);
    assert_eq!(labeled.lines().nth(1), Some(HAMMING_G6));

    let stats = ok(&["orbit", "-g", HAMMING_G6, "--labeled", "--stats"]);
    assert!(stats.contains("size_labeled=28\n"), "{stats}");
    assert!(stats.contains("size_unlabeled=1\n"), "{stats}");
    assert!(stats.contains("delta_left=2\n"), "{stats}");

    let lc = ok(&["orbit", "-g", "A_", "--lc", "--stats"]);
    assert_eq!(lc, "size_unlabeled=1\n");
}

#[test]
fn orbit_rejects_disconnected_input() {
    let err = fails(&["orbit", "-f", "edges", "-g", "1 2;3 4"]);
    assert!(err.contains("components: {1,2} {3,4}"), "{err}");
    assert!(fails(&["orbit", "-g", HAMMING_G6, "--labeled", "--cap", "5"]).contains("cap"));
}

#[test]
fn code_actions() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.txt", HAMMING);
    // coordinates 2 and 7 interchanged
    let h27 = write(
        dir.path(),
        "h27.txt",
        "1100010\n0100101\n0010110\n0101110\n",
    );
    assert_eq!(ok(&["code", "mindist", "-i", &h]), "3\n");
    assert_eq!(ok(&["code", "mindist", "-i", &h, "--brute"]), "3\n");
    assert_eq!(ok(&["code", "infosets", "-i", &h]), "28\n");
    assert_eq!(ok(&["code", "infosets", "-i", &h, "--brute"]), "28\n");
    assert_eq!(ok(&["code", "equiv", &h27, "-i", &h]), "equivalent\n");
    let rep = write(
        dir.path(),
        "rep.txt",
        "1110000\n0001000\n0000100\n0000010\n",
    );
    assert_eq!(ok(&["code", "equiv", &rep, "-i", &h]), "not equivalent\n");
    assert!(ok(&["code", "summary", "-m", "11"]).starts_with("[2,1,2] self-dual"));
    assert!(ok(&["code", "summary", "-i", &h]).starts_with("[7,4,3]"));
    assert_eq!(
        ok(&["code", "standard", "-m", "0011;0101"]),
        "# columns: 2 3 1 4\n1001\n0101\n"
    );
    let dual = ok(&["code", "dual", "-i", &h]);
    assert!(dual.starts_with("# columns: "));
    assert_eq!(dual.lines().count(), 4);
    fails(&["code", "summary", "-m", "11;11"]);
    assert!(fails(&["code", "graph", "-m", "101;010;000"]).contains("rank"));
    assert!(fails(&["code", "graph", "-m", "10;10"]).contains("rank"));
    assert!(fails(&["code", "graph", "-m", "100;010"]).contains("column 3"));
}

#[test]
fn convert_formats() {
    let dot = ok(&["convert", "-g", "A_", "--to", "dot"]);
    assert!(dot.starts_with("graph G {") && dot.contains("1 -- 2"));
    let adj = ok(&["convert", "-g", "Ch", "--to", "adj"]);
    assert_eq!(adj, "0100\n1010\n0101\n0010\n");
    assert_eq!(
        ok(&[
            "convert",
            "-f",
            "adj",
            "-g",
            &adj.replace('\n', ";"),
            "--to",
            "g6"
        ]),
        "Ch\n"
    );
    fails(&["convert", "-g", "C~", "--to", "code"]);
}

#[test]
fn census_examples() {
    let table = ok(&["census", "bipartite", "8", "--codes"]);
    assert!(table.starts_with("n\ti\tt\ti_C\ti_Ciso\n"));
    assert!(table.lines().any(|l| l == "8\t43\t104\t76\t10"), "{table}");
    assert_eq!(ok(&["census", "bipartite", "1"]), "n\ti\tt\n1\t1\t1\n");

    let dir = tempfile::tempdir().unwrap();
    let c6 = write(dir.path(), "c6.g6", &ok(&["generate", "6"]));
    assert_eq!(ok(&["census", "stream", &c6]), "n\ti\n6\t35\n");
    assert_eq!(
        ok(&["census", "stream", &c6, "--lc", "--refine"]),
        "n\ti\ti_ELC\n6\t11\t35\n"
    );
    let general = ok(&["census", "general", "5"]);
    assert_eq!(
        general,
        "n\ti\tt\n1\t1\t1\n2\t1\t2\n3\t2\t4\n4\t4\t9\n5\t10\t21\n"
    );
}

#[test]
fn census_guards() {
    assert!(fails(&["census", "bipartite", "13"]).contains("guard"));
    assert!(fails(&["census", "general", "10"]).contains("guard"));
    let dir = tempfile::tempdir().unwrap();
    let mixed = write(dir.path(), "mixed.g6", "A_\nBw\n");
    fails(&["census", "stream", &mixed]);
    let disconnected = write(dir.path(), "d.g6", "A?\n");
    fails(&["census", "stream", &disconnected]);
}

#[test]
fn census_output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for threads in ["1", "4", "8"] {
        let out = dir.path().join(format!("t{threads}"));
        let table = ok(&[
            "census",
            "bipartite",
            "9",
            "--codes",
            "--threads",
            threads,
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().into_string().unwrap(),
                    fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        runs.push((table, files));
    }
    assert_eq!(runs[0].1.len(), 11);
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let reps = String::from_utf8(
        runs[0]
            .1
            .iter()
            .find(|(n, _)| n == "reps-09.txt")
            .unwrap()
            .1
            .clone(),
    )
    .unwrap();
    assert!(reps.starts_with("# n=9 orbits=110\n"));
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_elc"))
        .args(["census", "bipartite", "6"])
        .env("ELC_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_elc"))
        .args(["census", "bipartite", "6"])
        .env("ELC_THREADS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn generate_counts() {
    assert_eq!(ok(&["generate", "5"]).lines().count(), 21);
    assert_eq!(ok(&["generate", "7", "--bipartite"]).lines().count(), 44);
}
