macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(assemble_and_solve);
example!(sparse_lu);
example!(coarse_spaces);
example!(decomposition);
example!(preconditioned_gmres);
example!(wavenumber_sweep);

use helmholtz_schwarz::prelude::*;

#[test]
fn assemble_and_solve_example_runs() {
    // second-order error at h = 1/64 and a smooth probe point
    let err = assemble_and_solve::run_example().unwrap();
    assert!(err < 1e-2, "error {err}");
}

#[test]
fn sparse_lu_example_runs() {
    assert!(sparse_lu::run_example().unwrap() < 1e-10);
}

#[test]
fn coarse_spaces_example_runs() {
    let stats = coarse_spaces::run_example().unwrap();
    assert!(stats[1].1 > stats[0].1);
}

#[test]
fn decomposition_example_runs() {
    assert!(decomposition::run_example().unwrap() < 1e-15);
}

#[test]
fn preconditioned_gmres_example_runs() {
    let counts = preconditioned_gmres::run_example().unwrap();
    assert_eq!(counts.len(), 6);
    assert!(counts.iter().all(|&(_, _, it)| it < 100));
}

#[test]
fn wavenumber_sweep_example_runs() {
    let rows = wavenumber_sweep::run_example().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .all(|r| r.iterations(CoarseKind::Bezier, PreconditionerKind::Shs2).is_some()));
}
