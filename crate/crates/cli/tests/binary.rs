use std::process::Command;

fn burstsync(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_burstsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exact_command_schema() {
    let out = burstsync(&["exact", "--alpha", "0.5", "--beta", "0.2", "--n", "2..8"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,R_n,J_n,E_n,H_D1_D0,H_D1_D0_Dn1,identity_residual"
    );
    assert_eq!(lines.count(), 7);
}

#[test]
fn exit_codes() {
    assert_eq!(
        burstsync(&["exact", "--alpha", "2", "--beta", "0.2", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        burstsync(&[
            "mc",
            "--alpha",
            "0.5",
            "--beta",
            "0.2",
            "--n",
            "8",
            "--samples",
            "9"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        burstsync(&["exact", "--alpha", "0.5", "--beta", "0.2", "--n", "14"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(burstsync(&["bogus"]).status.code(), Some(2));
    assert_eq!(burstsync(&[]).status.code(), Some(2));
}

#[test]
fn config_file_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let dumped = burstsync(&[
        "sweep",
        "--alpha",
        "0.5",
        "--betas",
        "0.05,0.02",
        "--n",
        "64",
        "--samples",
        "3000",
        "--seed",
        "7",
        "--dump-config",
    ]);
    assert!(dumped.status.success());
    std::fs::write(&cfg, &dumped.stdout).unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let path = dir.path().join(format!("out{threads}.csv"));
        let out = burstsync(&[
            "--config",
            cfg,
            "--threads",
            threads,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with(
        "n,beta,Rmin_hat,stderr,rmin_expansion,beta_log2_beta,g_hat,g_stderr,target\n"
    ));
    // rows ascend in beta
    let betas: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(betas, vec![0.02, 0.05]);
}
