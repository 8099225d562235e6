mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eogmark::format::{self, SignalFile};
use eogmark::reference::WATERMARK_BITS;
use eogmark::{IntSignal, Signal};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::Value;
use tempfile::TempDir;

fn eogmark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eogmark"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    }

    fn plain(&self, name: &str, s: &Signal) -> String {
        self.write(name, &format::write_plain(s))
    }

    fn quantized(&self, name: &str, s: &IntSignal) -> String {
        self.write(name, &format::write_quantized(s, None))
    }
}

fn read_quantized(path: &Path) -> IntSignal {
    match format::parse(&std::fs::read_to_string(path).unwrap(), None).unwrap() {
        SignalFile::Quantized { signal, .. } => signal,
        other => panic!("expected quantized file, got {other:?}"),
    }
}

/// Rewrites sample `index` (0-based, after the header) of a signal file.
fn mutate_sample(path: &Path, index: usize, f: impl Fn(i32) -> i32) {
    let text = std::fs::read_to_string(path).unwrap();
    let header = text.lines().take_while(|l| l.starts_with('#')).count();
    let lines: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(n, l)| {
            if n == header + index {
                f(l.parse().unwrap()).to_string()
            } else {
                l.to_owned()
            }
        })
        .collect();
    std::fs::write(path, lines.join("\n") + "\n").unwrap();
}

#[test]
fn features_on_spike_train() {
    let ws = Workspace::new();
    let input = ws.plain("train.txt", &common::five_spike_train());
    let out = eogmark(&["features", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout_json(&out);
    assert_eq!(json["blink_count"], 5);
    assert_eq!(json["mean_frequency"].as_f64(), Some(0.5));
    assert_eq!(json["blinks_per_interval"].as_f64(), Some(0.625));
    assert_eq!(json["mean_interval"].as_f64(), Some(2.0));
    assert_eq!(json["peak_index"], 250);
    assert_eq!(json["peak_time"].as_f64(), Some(1.0));
    assert_eq!(json["n_samples"], 2500);
    for key in [
        "mav",
        "std_dev",
        "variance",
        "auc",
        "peak_value",
        "valley_value",
        "valley_index",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn features_on_flat_signal_reports_and_fails() {
    let ws = Workspace::new();
    let input = ws.plain("flat.txt", &Signal::new(vec![1e-5; 500], 250.0).unwrap());
    let out = eogmark(&["features", &input]);
    assert_eq!(out.status.code(), Some(2));
    let json = stdout_json(&out);
    assert_eq!(json["variance"].as_f64(), Some(0.0));
    assert_eq!(json["blink_times"], Value::Array(vec![]));
    assert_eq!(json["mean_frequency"], Value::Null);
    assert!(stderr(&out).contains("at least 2 blinks"));
}

#[test]
fn features_bare_column_with_rate_flag() {
    let ws = Workspace::new();
    let input = ws.write("bare.txt", "0\n1\n0\n-1\n0\n");
    let out = eogmark(&["features", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sample rate"));
    let out = eogmark(&["features", &input, "--rate", "10"]);
    let json = stdout_json(&out);
    assert_eq!(json["peak_index"], 1);
    assert_eq!(json["valley_index"], 3);
    assert_eq!(json["valley_time"].as_f64(), Some(0.3));
}

#[test]
fn malformed_line_exits_2_with_line_number() {
    let ws = Workspace::new();
    let input = ws.write("bad.txt", "#WMEOG 1\n#rate 250\n0.5\nabc\n");
    let out = eogmark(&["features", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn odd_region_length_is_rejected() {
    let ws = Workspace::new();
    let input = ws.plain("s.txt", &common::five_spike_train());
    let out = eogmark(&["embed", &input, "--length", "127"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("even"), "{}", stderr(&out));
}

#[test]
fn zero_watermark_on_zero_region_changes_nothing() {
    let ws = Workspace::new();
    let zeros = IntSignal::new(vec![0; 200], 1_000_000, 250.0).unwrap();
    let input = ws.quantized("zero.txt", &zeros);
    let out_path = ws.path("marked.txt");
    let bits = "0".repeat(64);
    let out = eogmark(&[
        "embed",
        &input,
        "--bits",
        &bits,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(read_quantized(&out_path), zeros);
}

#[test]
fn explicit_reference_watermark_extracts_verbatim() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(7);
    let input = ws.plain("s.txt", &common::random_blinky(&mut rng));
    let marked = ws.path("m.txt");
    let out = eogmark(&[
        "embed",
        &input,
        "--bits",
        WATERMARK_BITS,
        "--out",
        marked.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = eogmark(&["extract", marked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(
        json["bits"].as_str().unwrap(),
        WATERMARK_BITS.replace(' ', "")
    );
    let p = &json["extracted_payload"];
    assert_eq!(
        p["mean_blink_frequency"].as_f64().unwrap() as f32,
        0.3911f32
    );
    assert_eq!(p["mean_blink_interval"].as_f64().unwrap() as f32, 0.3730f32);

    // The payload does not describe this signal.
    let out = eogmark(&["verify", marked.to_str().unwrap(), "--strict"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["payload_match"], false);
}

#[test]
fn truncated_watermarked_file_reports_line() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(8);
    let input = ws.plain("s.txt", &common::random_blinky(&mut rng));
    let marked = ws.path("m.txt");
    let out = eogmark(&["embed", &input, "--out", marked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&marked).unwrap();
    let truncated: String = text.lines().take(50).map(|l| format!("{l}\n")).collect();
    let cut = ws.write("cut.txt", &truncated);
    let out = eogmark(&["extract", &cut]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 51"), "{}", stderr(&out));
}

#[test]
fn extract_needs_watermark_header() {
    let ws = Workspace::new();
    let input = ws.plain("s.txt", &common::five_spike_train());
    let out = eogmark(&["extract", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a watermarked file"));
}

#[test]
fn overflow_exits_3_and_lists_pairs() {
    let ws = Workspace::new();
    let mut v = vec![0; 128];
    v[4] = i32::MAX;
    v[11] = i32::MIN + 1;
    let input = ws.quantized("big.txt", &IntSignal::new(v, 1, 250.0).unwrap());
    let out = eogmark(&["embed", &input, "--bits", &"1".repeat(64)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("[2, 5]"), "{}", stderr(&out));
}

#[test]
fn capacity_mismatch_exits_3() {
    let ws = Workspace::new();
    let input = ws.plain("s.txt", &common::five_spike_train());
    let out = eogmark(&["embed", &input, "--bits", &"1".repeat(63)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn commands_are_deterministic() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(9);
    let input = ws.plain("s.txt", &common::random_blinky(&mut rng));
    let a = eogmark(&["embed", &input, "--offset", "6"]);
    let b = eogmark(&["embed", &input, "--offset", "6"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let marked = ws.write("m.txt", std::str::from_utf8(&a.stdout).unwrap());
    let a = eogmark(&["verify", &marked]);
    let b = eogmark(&["verify", &marked]);
    assert_eq!(a.stdout, b.stdout);
    let a = eogmark(&["features", &input]);
    let b = eogmark(&["features", &input]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_tampering_inside_and_outside_region() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(10);
    let signal = common::random_blinky(&mut rng);
    let original = ws.quantized("orig.txt", &common::micro(&signal));
    let marked = ws.path("m.txt");
    let out = eogmark(&["embed", &original, "--out", marked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = eogmark(&[
        "verify",
        marked.to_str().unwrap(),
        "--original",
        &original,
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload_match"], true);
    assert_eq!(json["ber"].as_f64(), Some(0.0));
    assert_eq!(json["restored_identical"], true);

    // Inside the region: pair 10 carries a payload bit.
    let inside = ws.path("inside.txt");
    std::fs::copy(&marked, &inside).unwrap();
    mutate_sample(&inside, 20, |x| x ^ 1);
    let out = eogmark(&[
        "verify",
        inside.to_str().unwrap(),
        "--original",
        &original,
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["payload_match"], false);

    // Outside the region on baseline: payload still matches, restoration differs.
    let outside = ws.path("outside.txt");
    std::fs::copy(&marked, &outside).unwrap();
    mutate_sample(&outside, 140, |x| x + 1);
    let out = eogmark(&["verify", outside.to_str().unwrap(), "--original", &original]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload_match"], true);
    assert_eq!(json["restored_identical"], false);
}

#[test]
fn metrics_command() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(11);
    let signal = common::random_blinky(&mut rng);
    let original = ws.plain("orig.txt", &signal);
    let marked = ws.path("m.txt");
    let out = eogmark(&["embed", &original, "--out", marked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = eogmark(&["metrics", &original, marked.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json = stdout_json(&out);
    assert_eq!(json["ber"].as_f64(), Some(0.0));
    let linear = json["snr_linear"].as_f64().unwrap();
    let db = json["snr_db"].as_f64().unwrap();
    assert!((db - 10.0 * linear.log10()).abs() < 1e-9);
    assert!(json["max_abs_error"].as_u64().unwrap() > 0);

    let out = eogmark(&[
        "metrics",
        &original,
        marked.to_str().unwrap(),
        "--bits",
        &"0".repeat(64),
    ]);
    assert!(stdout_json(&out)["ber"].as_f64().unwrap() > 0.0);
}

#[test]
fn help_exits_zero_and_bad_flag_exits_2() {
    assert_eq!(eogmark(&["--help"]).status.code(), Some(0));
    assert_eq!(eogmark(&["embed", "x", "--nope"]).status.code(), Some(2));
}
