mod common;

use std::path::Path;
use std::process::{Command, Output};

fn sonify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonify"))
        .args(args)
        .env_remove("SONIFY_CONFIG")
        .output()
        .expect("spawn sonify")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_clean_fixture() {
    let o = sonify(&["validate", "--crime", s(&common::crime_csv()), "--growth", s(&common::growth_csv())]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("324 series start at 0"));
}

#[test]
fn validate_reports_missing_growth_region() {
    let dir = tempfile::tempdir().unwrap();
    let growth = std::fs::read_to_string(common::growth_csv()).unwrap();
    let trimmed: String = growth.lines().filter(|l| !l.starts_with("Kerala,")).map(|l| format!("{l}\n")).collect();
    let path = dir.path().join("g.csv");
    std::fs::write(&path, trimmed).unwrap();
    let o = sonify(&["validate", "--crime", s(&common::crime_csv()), "--growth", s(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("Kerala"));
}

#[test]
fn validate_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    std::fs::write(&path, "state,crime,yr,n\nDelhi,Rape,2001,1\n").unwrap();
    let o = sonify(&["validate", "--crime", s(&path), "--growth", s(&common::growth_csv())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn render_seq_writes_wav_and_graph() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("out.wav");
    let graph = dir.path().join("g.csv");
    let o = sonify(&[
        "render-seq", "--crime", s(&common::crime_csv()), "--growth", s(&common::growth_csv()),
        "--region", "West Bengal", "--category", "Rape", "--mode", "frequency",
        "--out", s(&wav), "--graph", s(&graph),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = hound::WavReader::open(&wav).unwrap();
    let secs = r.duration() as f64 / r.spec().sample_rate as f64;
    assert!((secs - 14.75).abs() <= 1.0 / 44_100.0, "{secs}");
    assert_eq!(r.spec().channels, 8);
    let g = std::fs::read_to_string(&graph).unwrap();
    let lines: Vec<&str> = g.lines().collect();
    assert_eq!(lines[0], "year,value");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("2001,0"));
}

#[test]
fn render_seq_usage_errors() {
    let o = sonify(&[
        "render-seq", "--crime", s(&common::crime_csv()), "--growth", s(&common::growth_csv()),
        "--region", "Goa", "--category", "Rape", "--mode", "tempo", "--out", "/tmp/never.wav",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = sonify(&[
        "render-seq", "--crime", s(&common::crime_csv()), "--growth", s(&common::growth_csv()),
        "--region", "Atlantis", "--category", "Rape", "--mode", "amplitude", "--out", "/tmp/never.wav",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Atlantis"));
}

#[test]
fn render_cmp_prints_values() {
    let dir = tempfile::tempdir().unwrap();
    let wav = dir.path().join("cmp.wav");
    let (crime, growth) = (common::crime_csv(), common::growth_csv());
    let base = ["render-cmp", "--crime", s(&crime), "--growth", s(&growth)];
    let mut args = base.to_vec();
    args.extend(["--fix", "state=Delhi", "--fix", "crime=Rape", "--compare", "2001,2012", "--out", s(&wav)]);
    let o = sonify(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("a: 2001 = 0"), "{out}");
    assert!(out.contains("louder: "));
    assert!(wav.is_file());

    let mut args = base.to_vec();
    args.extend(["--fix", "state=Delhi", "--fix", "year=2004", "--compare", "Rape,Rape", "--out", s(&wav)]);
    let o = sonify(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("louder: equal"));

    let mut args = base.to_vec();
    args.extend([
        "--fix", "state=Delhi", "--fix", "year=2004", "--fix", "crime=Rape",
        "--compare", "a,b", "--out", s(&wav),
    ]);
    assert_eq!(sonify(&args).status.code(), Some(1));
}

#[test]
fn config_env_fallback_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"crime_csv": "{}", "growth_csv": "/does/not/exist.csv", "spatial": "stereo"}}"#,
            s(&common::crime_csv())
        ),
    )
    .unwrap();
    let wav = dir.path().join("o.wav");
    let o = Command::new(env!("CARGO_BIN_EXE_sonify"))
        .args(["render-seq", "--growth", s(&common::growth_csv()), "--region", "Goa", "--category", "Rape"])
        .args(["--mode", "amplitude", "--out", s(&wav)])
        .env("SONIFY_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(hound::WavReader::open(&wav).unwrap().spec().channels, 2);
}

#[test]
fn serve_fails_fast_on_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"growth_csv": "g.csv"}"#).unwrap();
    let o = sonify(&["serve", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("crime_csv"));

    // occupy a port, then ask the service to bind it
    let busy = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = busy.local_addr().unwrap();
    std::fs::write(
        &cfg,
        format!(
            r#"{{"crime_csv": "{}", "growth_csv": "{}", "bind_addr": "{addr}"}}"#,
            s(&common::crime_csv()),
            s(&common::growth_csv())
        ),
    )
    .unwrap();
    let o = sonify(&["serve", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bind"));
}

#[test]
fn serve_answers_meta() {
    use std::io::{BufRead, BufReader, Read, Write};

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"crime_csv": "{}", "growth_csv": "{}", "bind_addr": "127.0.0.1:0"}}"#,
            s(&common::crime_csv()),
            s(&common::growth_csv())
        ),
    )
    .unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_sonify"))
        .args(["serve", "--config", s(&cfg)])
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();

    let mut conn = std::net::TcpStream::connect(&addr).unwrap();
    write!(conn, "GET /api/meta HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut resp = String::new();
    conn.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    let _ = child.wait();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains("\"regions\""));
}
