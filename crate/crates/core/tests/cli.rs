use std::io::Write;
use std::process::{Command, Output};

fn avgpi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avgpi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn noise_csv() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "t,y").unwrap();
    let mut x = 0.3f64;
    for t in 0..400 {
        // deterministic chaotic sequence, roughly uniform on (0, 1)
        x = 3.99 * x * (1.0 - x);
        writeln!(f, "{t},{x}").unwrap();
    }
    f
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&avgpi(&["--help"])), 0);
    assert_eq!(code(&avgpi(&["simulate", "--trials", "lots"])), 1);
    assert_eq!(code(&avgpi(&["frobnicate"])), 1);
}

#[test]
fn pi_prints_one_interval() {
    let f = noise_csv();
    let path = f.path().to_str().unwrap();
    let out = avgpi(&["pi", "--csv", path, "--column", "y", "--m", "20", "--method", "clt-original"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..3], &["clt-original", "20", "0.9"]);
    let (lo, hi): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
    assert!(lo < 0.5 && 0.5 < hi);
}

#[test]
fn input_errors_map_to_exit_codes() {
    let f = noise_csv();
    let path = f.path().to_str().unwrap();
    // unknown column and unsupported differencing are invalid input
    assert_eq!(code(&avgpi(&["pi", "--csv", path, "--column", "z", "--m", "5"])), 1);
    assert_eq!(
        code(&avgpi(&["pi", "--csv", path, "--column", "y", "--m", "5", "--method", "naive", "--d", "1"])),
        1
    );
    // missing file is an I/O error
    assert_eq!(code(&avgpi(&["pi", "--csv", "/nonexistent.csv", "--column", "y", "--m", "5"])), 3);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let f = noise_csv();
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "# rolling run").unwrap();
    writeln!(cfg, "csv = {}", f.path().display()).unwrap();
    writeln!(cfg, "column = y").unwrap();
    writeln!(cfg, "methods = qtl-original").unwrap();
    writeln!(cfg, "levels = 0.9").unwrap();
    writeln!(cfg, "format = csv").unwrap();
    let cfg_path = cfg.path().to_str().unwrap();

    let out = avgpi(&["poos", "--config", cfg_path, "--horizons", "20"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scenario,method,horizon,level,coverage,rel_width,n_trials,n_skips"));
    assert!(text.contains("poos:y,qtl-original,20,0.9,"));

    let out = avgpi(&["poos", "--config", cfg_path, "--methods", "clt-original"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("clt-original") && !text.contains("qtl-original"));

    assert_eq!(code(&avgpi(&["poos", "--config", "/nonexistent.conf"])), 3);
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "not a pair").unwrap();
    assert_eq!(code(&avgpi(&["poos", "--config", bad.path().to_str().unwrap()])), 1);
}
