use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cftlab(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cftlab"))
        .args(args)
        .env("CFTLAB_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn ising_vacuum_character() {
    let cache = tempfile::tempdir().unwrap();
    let out = cftlab(
        &[
            "virasoro", "char", "-p", "3", "--pp", "4", "-r", "1", "-s", "1", "--order", "10",
            "--method", "bosonic",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["terms"][0], serde_json::json!({"exp": "0", "coeff": "1"}));
    // 1 + q^2 + q^3 + 2q^4 + ...
    assert_eq!(v["terms"][1], serde_json::json!({"exp": "2", "coeff": "1"}));
}

#[test]
fn methods_agree_and_csv_projects() {
    let cache = tempfile::tempdir().unwrap();
    let base = [
        "virasoro", "char", "-p", "4", "--pp", "5", "-r", "2", "-s", "2", "--order", "8",
    ];
    let mut outputs = Vec::new();
    for m in ["bosonic", "fermionic", "confsum", "enumerate"] {
        let mut args = base.to_vec();
        args.extend(["--method", m]);
        let out = cftlab(&args, cache.path());
        assert_eq!(out.status.code(), Some(0), "{m}");
        outputs.push(json(&out)["terms"].clone());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let mut args = base.to_vec();
    args.push("--csv");
    let out = cftlab(&args, cache.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("exp,coeff"));
    assert_eq!(lines.next(), Some("3/80,1"));
}

#[test]
fn out_of_range_models_are_usage_errors() {
    let cache = tempfile::tempdir().unwrap();
    let out = cftlab(
        &[
            "virasoro", "char", "-p", "2", "--pp", "5", "-r", "1", "-s", "1",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1 < p'/p < 2"), "{err}");
    let out = cftlab(
        &[
            "virasoro", "verify", "-p", "3", "--pp", "4", "--suite", "nope",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = cftlab(&["sl2", "verify", "-k", "0"], cache.path());
    assert_eq!(out.status.code(), Some(2));
    let out = cftlab(
        &[
            "virasoro", "char", "-p", "3", "--pp", "4", "-r", "1", "-s", "1", "--b", "1",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn full_ising_verification_passes_and_is_cached() {
    let cache = tempfile::tempdir().unwrap();
    let args = [
        "virasoro", "verify", "-p", "3", "--pp", "4", "--order", "30", "--suite", "all",
    ];
    let first = cftlab(&args, cache.path());
    assert_eq!(first.status.code(), Some(0));
    let report = json(&first);
    assert_eq!(report["status"], "pass");
    assert_eq!(report["job"]["suite"], "all");
    assert!(report["checks"].as_array().unwrap().len() > 50);
    let second = cftlab(&args, cache.path());
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8(second.stderr)
        .unwrap()
        .contains("(cached)"));
}

#[test]
fn sl2_level_one_character_and_verification() {
    let cache = tempfile::tempdir().unwrap();
    let out = cftlab(
        &[
            "sl2",
            "char",
            "-k",
            "1",
            "--mu",
            "0",
            "--q-order",
            "1",
            "--csv",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for row in ["-2,1,1", "0,0,1", "0,1,1", "2,1,1"] {
        assert!(text.lines().any(|l| l == row), "{row} missing from\n{text}");
    }
    for method in ["paths", "enumerate"] {
        let other = cftlab(
            &[
                "sl2",
                "char",
                "-k",
                "1",
                "--mu",
                "0",
                "--q-order",
                "1",
                "--csv",
                "--method",
                method,
            ],
            cache.path(),
        );
        assert_eq!(String::from_utf8(other.stdout).unwrap(), text, "{method}");
    }
    let out = cftlab(
        &[
            "sl2",
            "verify",
            "-k",
            "2",
            "--order",
            "8",
            "--z-order",
            "20",
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "pass");
}

#[test]
fn matrix_dump_has_exact_entries() {
    let cache = tempfile::tempdir().unwrap();
    let dump = cache.path().join("m.json");
    let out = cftlab(
        &[
            "virasoro",
            "verify",
            "-p",
            "5",
            "--pp",
            "7",
            "--order",
            "4",
            "--z-order",
            "8",
            "--suite",
            "matrix",
            "--dump-matrix",
            dump.to_str().unwrap(),
        ],
        cache.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&fs::read(&dump).unwrap()).unwrap();
    let items = v.as_array().unwrap();
    // middle labels r = 2, 3 with s = 1..6, eight shapes each
    assert_eq!(items.len(), 2 * 6 * 8);
    let m = &items[0]["matrix"];
    assert_eq!(m["entries"].as_array().unwrap().len(), 2);
    assert!(m["entries"][0][0].is_string());
}

fn index(dir: &Path) -> Value {
    serde_json::from_slice(&fs::read(dir.join("index.json")).unwrap()).unwrap()
}

fn reports(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "index.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn sweep_grid_cache_and_corruption() {
    let work = tempfile::tempdir().unwrap();
    let cache = work.path().join("cache");
    let config = work.path().join("sweep.toml");
    fs::write(
        &config,
        "virasoro = [[3, 4], [4, 5], [3, 5], [5, 7], [5, 8]]\nvirasoro_suites = [\"all\"]\n",
    )
    .unwrap();
    let out1 = work.path().join("out1");
    let run = |out: &Path| {
        cftlab(
            &[
                "sweep",
                "--config",
                config.to_str().unwrap(),
                "--jobs",
                "2",
                "--out",
                out.to_str().unwrap(),
            ],
            &cache,
        )
    };
    let first = run(&out1);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    let idx = index(&out1);
    assert_eq!(idx["failed"], 0);
    assert_eq!(idx["passed"], 30);
    assert!(String::from_utf8(first.stdout)
        .unwrap()
        .contains("30 passed, 0 failed"));

    let out2 = work.path().join("out2");
    assert_eq!(run(&out2).status.code(), Some(0));
    let idx2 = index(&out2);
    assert!(idx2["jobs"]
        .as_array()
        .unwrap()
        .iter()
        .all(|j| j["cached"] == true));
    assert_eq!(reports(&out1), reports(&out2));

    // corrupt one cache entry: it is recomputed to the same report
    let victim = fs::read_dir(&cache)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut raw = fs::read(&victim).unwrap();
    let n = raw.len();
    raw[n - 3] ^= 1;
    fs::write(&victim, raw).unwrap();
    let out3 = work.path().join("out3");
    assert_eq!(run(&out3).status.code(), Some(0));
    let idx3 = index(&out3);
    let fresh = idx3["jobs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|j| j["cached"] == false)
        .count();
    assert_eq!(fresh, 1);
    assert_eq!(reports(&out1), reports(&out3));
}

#[test]
fn sweep_rejects_bad_config() {
    let work = tempfile::tempdir().unwrap();
    let config = work.path().join("bad.toml");
    fs::write(&config, "virasoro = [[2, 5]]\n").unwrap();
    let out = cftlab(
        &[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--out",
            work.path().join("o").to_str().unwrap(),
        ],
        work.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
