use std::path::Path;
use std::process::{Command, Output};

const SMALL_DECOMP: &str = "[tolerances]\nsigma_samples = 1000.0\ntaylor_points = 20.0\n";

fn hriesz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hriesz")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn passing_run_exits_zero_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "k.toml",
        "[sweep]\nfar_r = [4.0, 8.0]\nray_angles = [0.0, 1.0]\nidentity_t = [1.0, 2.0]\n\
         [tolerances]\nkernel_k_max = 32.0\nidentity_k_max = 16.0\n",
    );
    let csv = dir.path().join("k.csv");
    let out = hriesz(&["kernel-decay", "--config", &cfg, "--out", csv.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("experiment_id"));
    assert!(text.lines().skip(1).all(|l| !l.contains(",fail")));
}

#[test]
fn failing_check_exits_one() {
    // the alpha = 5 splitting bound sits below double precision
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.toml", SMALL_DECOMP);
    let csv = dir.path().join("d.csv");
    let out = hriesz(&["decomp", "--config", &cfg, "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(std::fs::read_to_string(&csv).unwrap().contains(",fail"));
}

#[test]
fn seed_changes_the_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.toml", &format!("{SMALL_DECOMP}[sweep]\nalphas = [1.0]\n"));
    let csv = dir.path().join("d.csv");
    let first_line = |seed: &str| {
        let out = hriesz(&["decomp", "--config", &cfg, "--out", csv.to_str().unwrap(), "--seed", seed]);
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_owned()
    };
    assert_ne!(first_line("1"), first_line("2"));
    assert_eq!(first_line("1"), first_line("1"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let csv = csv.to_str().unwrap();
    for (name, text) in [
        ("syntax.toml", "[tolerances\n"),
        ("unknown.toml", "[tolerances]\nno_such_key = 1.0\n"),
        ("empty_sweep.toml", "[sweep]\nalphas = []\n"),
        ("bad_grid.toml", "[grid]\nm_z = 0\n"),
    ] {
        let cfg = write(dir.path(), name, text);
        let out = hriesz(&["decomp", "--config", &cfg, "--out", csv]);
        assert_eq!(code(&out), 2, "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = dir.path().join("missing.toml");
    assert_eq!(code(&hriesz(&["decomp", "--config", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&hriesz(&["decomp", "--threads", "0", "--out", csv])), 2);
}

#[test]
fn all_writes_one_file_per_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "all.toml",
        r#"
[plancherel]
grid = { m_z = 16, m_t = 16 }
spectral = { order = 12 }
sweep = { k_values = [4.0, 8.0], resolutions = [12.0, 16.0], eigen_k = [0.0], eigen_lambda = [1.0] }

[converge]
grid = { m_z = 12, m_t = 12 }
spectral = { k_max = 8, panels = 2, order = 4 }
maximal = { k_min = -1, k_max = 1, r_samples = 4 }
sweep = { r_exponents = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0] }

[square-scaling]
grid = { m_z = 12, m_t = 12 }
spectral = { k_max = 8, panels = 4, order = 4 }
maximal = { k_min = -1, k_max = 1, r_samples = 4 }
sweep = { delta_exponents = [2.0, 3.0], dilation_t = [2.0], dilation_r = [1.0, 2.0] }

[kernel-decay]
sweep = { far_r = [4.0, 8.0], ray_angles = [0.0, 1.0], identity_t = [1.0, 2.0] }
tolerances = { kernel_k_max = 32.0, identity_k_max = 16.0 }

[decomp]
tolerances = { sigma_samples = 1000.0, taylor_points = 20.0 }
sweep = { alphas = [1.0, 2.0] }
"#,
    );
    let out_dir = dir.path().join("reports");
    let out = hriesz(&["all", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert!(matches!(code(&out), 0 | 1), "{}", String::from_utf8_lossy(&out.stderr));
    let mut files: Vec<String> = std::fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(
        files,
        ["converge.csv", "decomp.csv", "kernel-decay.csv", "plancherel.csv", "square-scaling.csv"]
    );
}
