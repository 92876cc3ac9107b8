use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_meaningfock"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn no_arguments_prints_usage_and_exits_2() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_exits_2() {
    let o = run(&["classify", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inconsistent_fit_flags_exit_2() {
    let m = data("membership.csv");
    let o = run(&["fit", "--in", m.to_str().unwrap(), "--strategy", "fixed-theta"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_input_is_a_failure() {
    let o = run(&["classify", "--in", "/nonexistent/file.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn classify_types_donkey_as_d() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("typed.csv");
    let m = data("membership.csv");
    let o = run(&["classify", "--in", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert!(text.starts_with("pair_id,exemplar,mu_a,mu_b,mu_or,delta_d,k_d,type\n"));
    assert!(text.contains("pets_farm,Donkey,0.5,0.9,0.7,0.2,0.7,D\n"));
}

#[test]
fn min_sector2_fit_residuals() {
    let m = data("membership.csv");
    let o = run(&["fit", "--in", m.to_str().unwrap(), "--strategy", "min-sector2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (res, rep) = (col("residual"), col("representable"));
    let mut representable = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if &rec[rep] == "true" {
            representable += 1;
            assert!(rec[res].parse::<f64>().unwrap() <= 1e-9);
        } else {
            assert_eq!(&rec[res], "");
        }
    }
    assert!(representable > 0);
}

#[test]
fn fixed_theta_accepts_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, "pair_id,exemplar,mu_a,mu_b,mu_or\np,Donkey,0.5,0.9,0.7\n").unwrap();
    let o = run(&["fit", "--in", input.to_str().unwrap(), "--strategy", "fixed-theta", "--theta", "90"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(line.contains(",90.0,"), "{line}");
}

#[test]
fn verify_example_reports_discrepancy() {
    let o = run(&["verify-example"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("computed mu_or = 0.801265036455"));
    assert!(text.contains("claimed  mu_or = 0.7"));
    assert!(text.contains("abs discrepancy = 0.101265036455"));
}

#[test]
fn reconstruct_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("req.json");
    let out = dir.path().join("res.json");
    fs::write(&input, r#"{"p_a":[0.5,0.5],"p_b":[0.5,0.5],"p_or":[0.5,0.5]}"#).unwrap();
    let o = run(&["reconstruct", "--in", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert_eq!(v["phases_deg"].as_array().unwrap().len(), 2);
    assert_eq!(v["infeasible_exemplars"].as_array().unwrap().len(), 0);

    fs::write(&input, r#"{"p_a":[0.5,0.5],"p_b":[0.5,0.5],"p_or":[0.5,0.5],"extra":1}"#).unwrap();
    let o = run(&["reconstruct", "--in", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

fn build_space(dir: &Path) -> PathBuf {
    let space = dir.join("sample.space");
    let corpus = data("sample_corpus.tsv");
    let o = run(&["lsa", "build", "--corpus", corpus.to_str().unwrap(), "--out", space.to_str().unwrap(), "--k", "10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    space
}

#[test]
fn lsa_build_is_deterministic_and_sim_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = build_space(dir.path());
    let first = fs::read(&s1).unwrap();
    let s2 = build_space(dir.path());
    assert_eq!(first, fs::read(&s2).unwrap());
    assert_eq!(&first[..8], b"MFSPACE\0");

    let sp = s1.to_str().unwrap();
    let ab = stdout(&run(&["lsa", "sim", "--space", sp, "--a", "Donkey", "--b", "Pet or Farmyard Animal"]));
    let ba = stdout(&run(&["lsa", "sim", "--space", sp, "--a", "Pet or Farmyard Animal", "--b", "Donkey"]));
    assert_eq!(ab, ba);
    let v: f64 = ab.trim().parse().unwrap();
    assert!((-1.0..=1.0).contains(&v));
}

#[test]
fn batch_similarity_clip_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let space = build_space(dir.path());
    let sims = dir.path().join("sims.csv");
    let (p, m) = (data("pairs.csv"), data("membership.csv"));
    let o = run(&[
        "lsa", "sim", "--space", space.to_str().unwrap(),
        "--pairs", p.to_str().unwrap(), "--data", m.to_str().unwrap(),
        "--clip", "--out", sims.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&sims).unwrap();
    assert!(text.starts_with("pair_id,exemplar,s_a,s_b,s_or\n"));
    assert!(!text.contains(",-"));

    let o = run(&["threshold", "--in", sims.to_str().unwrap(), "--preset", "narrow"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("pair_id,exemplar,mu_a,mu_b,mu_or\n"));
    assert_eq!(out.lines().count(), text.lines().count());
}

#[test]
fn compare_formats() {
    let m = data("membership.csv");
    let ms = m.to_str().unwrap();
    let csv = stdout(&run(&["compare", "--reference", ms, "--model", ms]));
    assert!(csv.starts_with("pair_id,n,r_a,r_b,r_or\n"));
    let dot = stdout(&run(&["compare", "--reference", ms, "--model", ms, "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert!(!dot.contains("C -> D") && !dot.contains("D -> C"));
    let json = stdout(&run(&["compare", "--reference", ms, "--model", ms, "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["exemplars"].as_u64(), Some(32));
}

#[test]
fn report_outputs_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (p, m, c) = (data("pairs.csv"), data("membership.csv"), data("sample_corpus.tsv"));
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("rep{threads}"));
        let o = bin()
            .env("MEANINGFOCK_THREADS", threads)
            .args([
                "report", "--corpus", c.to_str().unwrap(), "--k", "10",
                "--pairs", p.to_str().unwrap(), "--data", m.to_str().unwrap(),
                "--out-dir", out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut files: Vec<_> = fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        let names: Vec<_> = files.iter().map(|f| f.file_name().unwrap().to_owned()).collect();
        assert!(names.iter().any(|n| n == "report.json"));
        assert!(names.iter().any(|n| n == "transitions_threshold-narrow.dot"));
        outputs.push(files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn bad_thread_count_rejected() {
    let o = bin().env("MEANINGFOCK_THREADS", "zero").arg("verify-example").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
