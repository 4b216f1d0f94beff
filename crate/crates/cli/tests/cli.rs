use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn semiembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    /// Runs `gen` and stores its output.
    fn generated(&self, name: &str, args: &[&str]) -> PathBuf {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        let out = semiembed(&full);
        assert!(out.status.success(), "{}", stderr(&out));
        self.write(name, &stdout(&out))
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const Z2: &str = "2\n1 2\n2 1\n";

#[test]
fn z2_embeds_into_t2_once() {
    let f = Files::new();
    let z2 = f.write("z2.tbl", Z2);
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let out = semiembed(&["embed", s(&z2), s(&t2), "--all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2 3\n");
    let report = stderr(&out);
    assert!(report.contains("search space: "), "{report}");
    assert!(report.contains("nodes: "), "{report}");
    assert!(report.contains("dedup: none"), "{report}");
}

#[test]
fn text_format_puts_report_on_stdout() {
    let f = Files::new();
    let z2 = f.write("z2.tbl", Z2);
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let out = semiembed(&["embed", s(&z2), s(&t2), "--all", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.contains("search space: 3\n"), "{text}");
    assert!(text.ends_with("2 3\n"));
    assert!(stderr(&out).is_empty());
}

#[test]
fn gen_temperley_lieb_three() {
    let out = semiembed(&["gen", "--family", "TL", "--degree", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "5");
    assert_eq!(lines.len(), 6);
}

#[test]
fn gen_lists_elements_as_comments() {
    let out = semiembed(&["gen", "--family", "T", "--degree", "2", "--elements"]);
    let text = stdout(&out);
    assert!(text.starts_with("# 1 [1,1]\n# 2 [1,2]\n# 3 [2,1]\n# 4 [2,2]\n4\n"), "{text}");
}

#[test]
fn profile_mismatch_is_reported() {
    let f = Files::new();
    let z2 = f.write("z2.tbl", Z2);
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let out = semiembed(&["iso", s(&z2), s(&t2)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "profiles differ: order\n");

    // same order, different structure
    let z4 = f.write("z4.tbl", "4\n1 2 3 4\n2 3 4 1\n3 4 1 2\n4 1 2 3\n");
    let v4 = f.write("v4.tbl", "4\n1 2 3 4\n2 1 4 3\n3 4 1 2\n4 3 2 1\n");
    let out = semiembed(&["iso", s(&z4), s(&v4)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("profiles differ: "), "{}", stdout(&out));
}

#[test]
fn isomorphism_is_printed_as_a_line() {
    let f = Files::new();
    let a = f.write("a.tbl", "3\n1 2 3\n2 3 1\n3 1 2\n");
    let b = f.write("b.tbl", "3\n1 2 3\n2 1 3\n3 3 3\n");
    let c = f.write("c.tbl", "3\n3 1 2\n1 2 3\n2 3 1\n");
    let out = semiembed(&["iso", s(&a), s(&c)]);
    assert_eq!(out.status.code(), Some(0));
    let map: Vec<usize> = stdout(&out).split_whitespace().map(|w| w.parse().unwrap()).collect();
    assert_eq!(map.len(), 3);
    assert_eq!(map[0], 2, "identity goes to identity");
    assert_eq!(semiembed(&["iso", s(&a), s(&b)]).status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let t3 = f.generated("t3.gens", &["--family", "T", "--degree", "3", "--generators"]);
    let args = ["embed", s(&t2), s(&t3), "--up-to", "conjugation"];
    let first = semiembed(&args);
    let second = semiembed(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stderr, second.stderr);
    assert_eq!(stdout(&first).lines().count(), 3);
}

#[test]
fn no_partition_keeps_solution_lines() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let t3 = f.generated("t3.tbl", &["--family", "T", "--degree", "3"]);
    let pruned = semiembed(&["embed", s(&t2), s(&t3), "--all"]);
    let plain = semiembed(&["embed", s(&t2), s(&t3), "--all", "--no-partition"]);
    assert_eq!(pruned.stdout, plain.stdout);
    assert_ne!(pruned.stderr, plain.stderr, "node counts should differ");
    assert_eq!(stdout(&pruned).lines().count(), 24);
}

#[test]
fn threads_keep_solution_lines() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let t3 = f.generated("t3.tbl", &["--family", "T", "--degree", "3"]);
    let one = semiembed(&["embed", s(&t2), s(&t3), "--all"]);
    let many = semiembed(&["embed", s(&t2), s(&t3), "--all", "--threads", "3"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn limit_and_first_solution() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let t3 = f.generated("t3.tbl", &["--family", "T", "--degree", "3"]);
    let first = semiembed(&["embed", s(&t2), s(&t3)]);
    assert_eq!(stdout(&first).lines().count(), 1);
    let five = semiembed(&["embed", s(&t2), s(&t3), "--limit", "5"]);
    assert_eq!(stdout(&five).lines().count(), 5);
    assert!(stdout(&five).starts_with(&stdout(&first)));
}

#[test]
fn generator_file_and_table_agree() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let table = f.generated("t3.tbl", &["--family", "T", "--degree", "3"]);
    let gens = f.generated("t3.gens", &["--family", "T", "--degree", "3", "--generators"]);
    let a = semiembed(&["embed", s(&t2), s(&table), "--all"]);
    let b = semiembed(&["embed", s(&t2), s(&gens), "--all"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn counting_up_to_conjugation() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let t3 = f.generated("t3.gens", &["--family", "T", "--degree", "3", "--generators"]);
    let out = semiembed(&["count", s(&t2), s(&t3), "--up-to", "conjugation"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "embeddings: 24\nimages: 12\nclasses: 3\n");
    assert!(stderr(&out).contains("dedup: conjugation"));

    let none = semiembed(&["count", s(&t2), s(&t3)]);
    assert!(stderr(&none).contains("dedup: none"));
    assert!(stdout(&none).contains("classes: 12\n"));
}

#[test]
fn conjugation_needs_a_generator_file() {
    let f = Files::new();
    let z2 = f.write("z2.tbl", Z2);
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let out = semiembed(&["embed", s(&z2), s(&t2), "--up-to", "conjugation"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: "));
    let aut = semiembed(&["embed", s(&z2), s(&t2), "--up-to", "automorphism"]);
    assert_eq!(aut.status.code(), Some(0));
    assert!(stderr(&aut).contains("dedup: automorphism"));
}

#[test]
fn automorphisms_of_t2() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let out = semiembed(&["aut", s(&t2)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 2 3 4\n4 2 3 1\n");
    assert!(stderr(&out).contains("group order: 2"));
}

#[test]
fn minimal_degree_of_z3() {
    let f = Files::new();
    let z3 = f.write("z3.tbl", "3\n1 2 3\n2 3 1\n3 1 2\n");
    let out = semiembed(&["mindeg", s(&z3), "--family", "T", "--max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3\n");
    let none = semiembed(&["mindeg", s(&z3), "--family", "T", "--max", "2"]);
    assert_eq!(none.status.code(), Some(1));
    assert!(stdout(&none).is_empty());
}

#[test]
fn two_generated_hosts() {
    let f = Files::new();
    let t2 = f.generated("t2.tbl", &["--family", "T", "--degree", "2"]);
    let gens = f.generated("t2.gens", &["--family", "T", "--degree", "2", "--generators"]);
    let out = semiembed(&["twogen", s(&t2), s(&gens)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
    assert!(stderr(&out).contains("hits: 1"));
    let table = semiembed(&["twogen", s(&t2), s(&t2)]);
    assert_eq!(table.status.code(), Some(2));
}

#[test]
fn validate_and_profile() {
    let f = Files::new();
    let good = f.write("good.tbl", Z2);
    let bad = f.write("bad.tbl", "2\n2 1\n1 1\n");
    let ok = semiembed(&["validate", s(&good)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "order: 2\nassociative: yes\n");
    let no = semiembed(&["validate", s(&bad)]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).contains("associative: no"));

    let profile = semiembed(&["profile", s(&good)]);
    let text = stdout(&profile);
    assert!(text.contains("order: 2\n"), "{text}");
    assert!(text.contains("idempotent_count: 1\n"), "{text}");
}

#[test]
fn errors_exit_with_two() {
    let f = Files::new();
    let z2 = f.write("z2.tbl", Z2);
    let broken = f.write("broken.tbl", "2\n1 2\n2 x\n");
    assert_eq!(semiembed(&["embed", s(&z2), "/does/not/exist"]).status.code(), Some(2));
    let parse = semiembed(&["validate", s(&broken)]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(stderr(&parse).contains("line 3"), "{}", stderr(&parse));
    assert_eq!(semiembed(&["gen", "--family", "Q", "--degree", "2"]).status.code(), Some(2));
    assert_eq!(semiembed(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(semiembed(&["embed", s(&z2), s(&z2), "--all", "--limit", "2"]).status.code(), Some(2));
    assert_eq!(
        semiembed(&["gen", "--family", "BinRel", "--degree", "2", "--generators"]).status.code(),
        Some(2)
    );
}
