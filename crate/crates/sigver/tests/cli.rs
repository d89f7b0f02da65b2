use std::path::PathBuf;
use std::process::{Command, Output};

use sigver::mm::{write_matrix_market, MmFormat, MmMatrix, MmSymmetry};
use sigver::DenseMatrix;

fn sigver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigver")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sigver-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_generated_pencil_writes_csv() {
    let csv = scratch("verify.csv");
    let o = sigver(&["verify", "-n", "12", "--seed", "5", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for m in ["P", "D", "S1", "S2"] {
        assert!(out.lines().any(|l| l.starts_with(m)), "{out}");
    }
    let text = std::fs::read_to_string(csv).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with(
        "n,nnz_A,nnz_B,method,status,sigma_min_lo,sigma_min_hi,inv_sigma_min_hi,rel_err,time_s,alpha,beta,delta,theta,tau"
    ));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn generated_files_feed_verify_and_oracle() {
    let a = scratch("a.mtx");
    let b = scratch("b.mtx");
    let gen_a = sigver(&["gen", "--kind", "randsvd", "-n", "6", "--kappa", "100", "--seed", "1", "--out", a.to_str().unwrap()]);
    assert!(gen_a.status.success());
    let gen_b = sigver(&["gen", "--kind", "spd-randsvd", "-n", "6", "--kappa", "10", "--seed", "2", "--out", b.to_str().unwrap(), "--format", "array"]);
    assert!(gen_b.status.success(), "{}", String::from_utf8_lossy(&gen_b.stderr));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let v = sigver(&["verify", "--mm-a", a, "--mm-b", b, "--method", "d,s2", "--delta-variant", "d2"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    let o = sigver(&["oracle", "--mm-a", a, "--mm-b", b]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn singular_pencil_is_inconclusive() {
    let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
    let pa = scratch("singular.mtx");
    let pb = scratch("identity.mtx");
    write_matrix_market(&MmMatrix::real(a, MmSymmetry::General), &pa, MmFormat::Coordinate).unwrap();
    write_matrix_market(&MmMatrix::real(DenseMatrix::identity(2), MmSymmetry::Symmetric), &pb, MmFormat::Coordinate).unwrap();
    let o = sigver(&["verify", "--mm-a", pa.to_str().unwrap(), "--mm-b", pb.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn bad_input_exits_with_two() {
    let missing = scratch("missing.mtx");
    let o = sigver(&["verify", "--mm-a", missing.to_str().unwrap(), "--mm-b", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = sigver(&["verify", "-n", "4", "--epsilon", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fem_verify_runs() {
    let o = sigver(&["verify", "--fem", "4,5,-15,0", "--method", "p,s2", "--epsilon", "1e-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("n = 16"));
}
