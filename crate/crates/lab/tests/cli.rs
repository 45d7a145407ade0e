use std::fs;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stransform-lab")).args(args).output().expect("spawn")
}

fn lab_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stransform-lab"))
        .args(args)
        .env("STRANSFORM_LAB_THREADS", threads)
        .output()
        .expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Column `name` of a CSV document as reals.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(j).unwrap().parse().unwrap()).collect()
}

#[test]
fn transforms_headers_and_values() {
    let o = lab(&["transforms", "--measure", "uniform:0:2", "--z-grid", "0:2:0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("z,T_inv,S_tilde,ln_S_tilde,H_S,H_R\n"));
    let hs = column(&s, "H_S");
    assert_eq!(hs.len(), 5);
    assert_eq!(hs[0], 0.0);
    assert!((hs[2] - 0.1276134289).abs() < 1e-9);
    assert!(column(&s, "T_inv")[0].is_infinite());
    let w = column(&s, "T_inv")[2];
    assert!((w - 2.5100019498).abs() < 1e-9);
}

#[test]
fn transforms_point_mass_is_flat() {
    let o = lab(&["transforms", "--measure", "point:1", "--z", "0,0.5,3"]);
    assert!(o.status.success());
    assert!(column(&stdout(&o), "H_S").iter().all(|h| h.abs() < 1e-14));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["transforms", "--measure", "uniform:0"],
        vec!["transforms", "--measure", "gauss:0:1"],
        vec!["transforms", "--measure", "uniform:0:2", "--z-grid", "1,0.5"],
        vec!["transforms", "--measure", "uniform:0:2", "--z", "-0.5"],
        vec!["conjecture", "--beta", "1"],
        vec!["fig1", "--svg"],
        vec!["mc", "gibbs"],
        vec!["nonsense"],
    ] {
        let o = lab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = lab(&["transforms", "--measure", "uniform:0:2", "--z", "-0.5"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("-0.5"));
}

#[test]
fn fig1_outputs_and_trend() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = lab(&["fig1", "--n-list", "8,512", "--z-grid", "0,0.5,1", "--out", out, "--svg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let main = fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    assert!(main.starts_with("N,z,k,normalized_h_log,H_S,gap\n"));
    let (z, h, g) = (column(&main, "z"), column(&main, "normalized_h_log"), column(&main, "gap"));
    for i in 0..z.len() {
        if z[i] == 0.0 {
            assert_eq!(h[i], 0.0);
            assert_eq!(g[i], 0.0);
        }
    }
    let k = column(&main, "k");
    assert_eq!(k[5], 512.0);
    let inset = fs::read_to_string(dir.path().join("fig1_inset.csv")).unwrap();
    assert!(inset.starts_with("N,inv_N,gap\n"));
    let ig = column(&inset, "gap");
    assert!(ig[1].abs() < ig[0].abs());

    let svg = fs::read(dir.path().join("fig1.svg")).unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    lab(&["fig1", "--n-list", "8,512", "--z-grid", "0,0.5,1", "--out", dir2.path().to_str().unwrap(), "--svg"]);
    assert_eq!(svg, fs::read(dir2.path().join("fig1.svg")).unwrap());
}

#[test]
fn fig1_ones_has_no_gap() {
    let o = lab(&["fig1", "--measure", "ones:5", "--n-list", "8,64", "--z-grid", "0.5,1,2"]);
    assert!(o.status.success());
    assert!(column(&stdout(&o), "gap").iter().all(|g| g.abs() <= 1e-12));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "measure = uniform:0:2\nn_list = 8,16,32\nz_grid = 1\n").unwrap();
    let o = lab(&["fig1", "--config", cfg.to_str().unwrap(), "--n-list", "8,16"]);
    assert!(o.status.success());
    assert_eq!(column(&stdout(&o), "N"), vec![8.0, 16.0]);
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(lab(&["fig1", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_fast_passes_and_repeats() {
    let a = lab(&["verify", "--level", "fast", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let report = stdout(&a);
    for line in report.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["name", "status", "metric", "tolerance"] {
            assert!(v.get(key).is_some(), "{line}");
        }
        assert_eq!(v["status"], "pass");
    }
    let b = lab(&["verify", "--level", "fast", "--seed", "42"]);
    assert_eq!(report, stdout(&b));
}

#[test]
fn verify_flags_perturbed_derivative() {
    let o = lab(&["verify", "--perturb-s-tilde"]);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["status"] == "fail")
        .map(|v| v["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failing, vec!["h_s_derivative"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("h_s_derivative"));
}

#[test]
fn conjecture_columns_and_trend() {
    let o = lab(&["conjecture", "--n-list", "8,16,32,64,128", "--z1", "0.5", "--z2", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.starts_with("N,z1,z2,lhs,rhs,gap\n"));
    let g: Vec<f64> = column(&s, "gap").iter().map(|x| x.abs()).collect();
    let good = g.windows(2).filter(|w| w[1] <= w[0]).count();
    assert!(good as f64 >= 0.8 * (g.len() - 1) as f64, "{g:?}");

    let ones = stdout(&lab(&["conjecture", "--measure", "ones:4", "--n-list", "8,64"]));
    for (n, gap) in column(&ones, "N").iter().zip(column(&ones, "gap")) {
        assert!(gap.abs() <= n.ln() / n);
    }
}

#[test]
fn conjecture_rank_one_matches_transforms() {
    let conj = stdout(&lab(&["conjecture", "--n-list", "8", "--z1", "0.75", "--z2", "0"]));
    let mid: Vec<String> = (0..8).map(|i| format!("{}", (2 * i + 1) as f64 / 8.0)).collect();
    let spec = format!("empirical:{}", mid.join(","));
    let tr = stdout(&lab(&["transforms", "--measure", &spec, "--z", "0.75"]));
    let rhs = column(&conj, "rhs")[0];
    assert!((rhs - column(&tr, "H_S")[0]).abs() < 1e-12);
}

#[test]
fn mc_is_thread_count_independent() {
    let args = ["mc", "rank-one", "--a", "1,2,3,4", "--z", "1.3", "--beta", "0.7", "--samples", "20000", "--seed", "7"];
    let one = lab_env(&args, "1");
    let three = lab_env(&args, "3");
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, three.stdout);
    let s = stdout(&one);
    assert!(s.starts_with("mean,std_error,n_samples,reference,z_score\n"));
    assert!(column(&s, "z_score")[0] < 4.0);
}

#[test]
fn mc_other_estimators() {
    let ho = stdout(&lab(&["mc", "heckman-opdam", "--a", "0.3,1.1", "--z", "0.4,-0.2", "--samples", "20000"]));
    assert!(column(&ho, "z_score")[0] < 4.0);
    let mul = stdout(&lab(&["mc", "multiplicativity", "--a", "1,2,3", "--b", "0.5,1,4", "--z", "0.7", "--samples", "4000"]));
    assert!(column(&mul, "z_score")[0] < 4.0);
    let da = stdout(&lab(&["mc", "dixon-anderson", "--a", "1,2,3", "--samples", "3"]));
    assert_eq!(da.lines().count(), 1 + 3 * 2);
    assert_eq!(lab(&["mc", "multiplicativity", "--a", "1,2,3"]).status.code(), Some(2));
}
