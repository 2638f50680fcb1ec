use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use coherence_bath_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cb_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn unbounded() -> CbEnvironment {
    CbEnvironment {
        mirror: false,
        u: 0.0,
        ax: 1.0 / 3.0,
        ay: 1.0 / 3.0,
        az: 1.0 / 3.0,
    }
}

#[test]
fn boundary_functions() {
    let mut v = 0.0;
    assert_eq!(unsafe { cb_f_parallel(0.1, &mut v) }, CbStatus::Ok);
    assert!((v - 0.992_017_125_935_542_4).abs() < 1e-13);
    assert_eq!(unsafe { cb_f_perpendicular(0.1, &mut v) }, CbStatus::Ok);
    assert!((v + 0.996_005_710_054_833_5).abs() < 1e-13);

    assert_eq!(unsafe { cb_f_parallel(-1.0, &mut v) }, CbStatus::InvalidArgument);
    assert!(last_error().contains('u'));
    assert_eq!(unsafe { cb_f_parallel(0.1, ptr::null_mut()) }, CbStatus::NullPointer);
}

#[test]
fn rates() {
    let env = CbEnvironment {
        mirror: true,
        u: 1e-7,
        ax: 0.0,
        ay: 0.0,
        az: 1.0,
    };
    let mut r = CbRates::default();
    assert_eq!(unsafe { cb_rate_coefficients(&env, &mut r) }, CbStatus::Ok);
    assert!((r.gamma_eff - 2.0).abs() < 1e-9);
    assert!((r.a_coeff - 0.5).abs() < 1e-9);
    assert_eq!(r.a_coeff, r.b_coeff);

    let bad = CbEnvironment { ax: 0.5, ..env };
    assert_eq!(unsafe { cb_rate_coefficients(&bad, &mut r) }, CbStatus::InvalidArgument);
    assert_eq!(unsafe { cb_rate_coefficients(ptr::null(), &mut r) }, CbStatus::NullPointer);
}

#[test]
fn single_atom_handle() {
    let env = unbounded();
    let mut rho = ptr::null_mut();
    let st = unsafe { cb_single_evolve(std::f64::consts::FRAC_PI_2, 0.0, 0.75, 100.0, &env, &mut rho) };
    assert_eq!(st, CbStatus::Ok);
    let mut dim = 0;
    unsafe { cb_density_dim(rho, &mut dim) };
    assert_eq!(dim, 2);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { cb_density_get(rho, 0, 0, &mut re, &mut im) }, CbStatus::Ok);
    assert!((re - 0.125).abs() < 1e-15);
    assert_eq!(unsafe { cb_density_get(rho, 0, 1, &mut re, &mut im) }, CbStatus::Ok);
    assert!(((re * re + im * im).sqrt() - 0.25).abs() < 1e-15);
    assert_eq!(unsafe { cb_density_get(rho, 2, 0, &mut re, &mut im) }, CbStatus::InvalidArgument);

    let mut c = 0.0;
    unsafe { cb_c_l1(rho, &mut c) };
    assert!((c - 0.5).abs() < 1e-15);
    let mut traj = 0.0;
    unsafe { cb_c_l1_trajectory(std::f64::consts::FRAC_PI_2, 0.75, &env, &mut traj) };
    assert!((traj - c).abs() < 1e-15);
    unsafe { cb_c_re(rho, &mut c) };
    unsafe { cb_c_re_trajectory(std::f64::consts::FRAC_PI_2, 0.75, &env, &mut traj) };
    assert!((traj - c).abs() < 1e-10);
    unsafe { cb_density_free(rho) };
    unsafe { cb_density_free(ptr::null_mut()) };
}

#[test]
fn bell_diagonal_handles() {
    let mut rho = ptr::null_mut();
    assert_eq!(unsafe { cb_bd_density(1.0, -1.0, 1.0, &mut rho) }, CbStatus::Ok);
    let mut evolved = ptr::null_mut();
    assert_eq!(
        unsafe { cb_apply_one_sided_channel(rho, 0.75, 0.0, &mut evolved) },
        CbStatus::Ok
    );
    let (mut l1, mut closed) = (0.0, 0.0);
    unsafe { cb_c_l1(evolved, &mut l1) };
    unsafe { cb_c_l1_bd(1.0, -1.0, 1.0, 0.75, &mut closed) };
    assert!((l1 - 0.5).abs() < 1e-15 && (closed - 0.5).abs() < 1e-15);
    let (mut re, mut re_closed) = (0.0, 0.0);
    unsafe { cb_c_re(evolved, &mut re) };
    unsafe { cb_c_re_bd(1.0, -1.0, 1.0, 0.75, &mut re_closed) };
    assert!((re - re_closed).abs() < 1e-10);
    unsafe {
        cb_density_free(evolved);
        cb_density_free(rho);
    }

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { cb_bd_density(1.0, 1.0, 1.0, &mut bad) }, CbStatus::Unphysical);
    assert!(bad.is_null());
    assert!(last_error().contains("(1 - c3 - (c1 + c2))/4"));
    assert_eq!(
        unsafe { cb_c_re_bd(0.0, 0.0, 0.0, 1.5, &mut re) },
        CbStatus::InvalidArgument
    );
}

#[test]
fn channel_rejects_single_qubit_handle() {
    let env = unbounded();
    let mut rho = ptr::null_mut();
    unsafe { cb_single_evolve(1.0, 0.0, 0.2, 10.0, &env, &mut rho) };
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { cb_apply_one_sided_channel(rho, 0.5, 0.0, &mut out) },
        CbStatus::InvalidArgument
    );
    unsafe { cb_density_free(rho) };
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/coherence_bath.h");
    let text = std::fs::read_to_string(&header).expect("generated header");
    for name in [
        "cb_f_parallel",
        "cb_single_evolve",
        "cb_apply_one_sided_channel",
        "cb_density_free",
        "cb_last_error_message",
        "CB_STATUS_UNPHYSICAL",
        "typedef struct CbDensityMatrix CbDensityMatrix;",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"coherence_bath.h\"\nint main(void) { CbDensityMatrix *h = 0; cb_density_free(h); return CB_STATUS_OK; }\n",
    )
    .unwrap();
    match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(status) => assert!(status.success()),
        Err(_) => eprintln!("no C compiler on PATH; skipped syntax check"),
    }
}
