use std::ffi::{CStr, CString};
use std::ptr;

use varisk_ffi::*;

struct Handle(*mut VariskDistribution);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { varisk_distribution_free(self.0) }
    }
}

fn parse(text: &str) -> Handle {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { varisk_distribution_parse(c.as_ptr(), &mut out) };
    assert_eq!(status, VariskStatus::Ok, "{}", last_error());
    Handle(out)
}

fn last_error() -> String {
    let p = varisk_last_error_message();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

fn status_name(s: VariskStatus) -> String {
    unsafe { CStr::from_ptr(varisk_status_name(s as i32)) }.to_string_lossy().into_owned()
}

#[test]
fn constructors_and_scalar_queries() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { varisk_distribution_pareto(1.0, 1.0, &mut p) }, VariskStatus::Ok);
    let p = Handle(p);
    let mut v = 0.0;
    unsafe {
        assert_eq!(varisk_cdf(p.0, 2.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(varisk_pdf(p.0, 2.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 0.25);
        assert_eq!(varisk_sf(p.0, 4.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 0.25);
        assert_eq!(varisk_quantile(p.0, 0.99, &mut v), VariskStatus::Ok);
        assert!((v - 100.0).abs() < 1e-9);
        assert_eq!(varisk_median(p.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 2.0);
        assert_eq!(varisk_var(p.0, 0.99, &mut v), VariskStatus::Ok);
        assert!((v - 100.0).abs() < 1e-9);
        assert_eq!(varisk_excess_var(p.0, 0.99, &mut v), VariskStatus::Ok);
        assert!((v - 98.0).abs() < 1e-9);
        assert_eq!(varisk_mean(p.0, &mut v), VariskStatus::Domain);
    }
    assert!(last_error().contains("mean"));

    let mut e = ptr::null_mut();
    assert_eq!(unsafe { varisk_distribution_exponential(1.0, &mut e) }, VariskStatus::Ok);
    let e = Handle(e);
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { varisk_distribution_affine(e.0, 2.0, 1.0, &mut a) }, VariskStatus::Ok);
    let a = Handle(a);
    unsafe {
        assert_eq!(varisk_mean(a.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 3.0);
    }

    let mut n = ptr::null_mut();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(varisk_distribution_normal(0.0, 1.0, &mut n), VariskStatus::Ok);
        assert_eq!(varisk_distribution_gamma(2.0, 1.0, &mut g), VariskStatus::Ok);
    }
    let (n, g) = (Handle(n), Handle(g));
    unsafe {
        assert_eq!(varisk_cdf(n.0, 0.0, &mut v), VariskStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(varisk_median(g.0, &mut v), VariskStatus::Ok);
        assert!((v - 1.678_346_990_016_660_7).abs() < 1e-12);
    }
}

#[test]
fn errors_map_to_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { varisk_distribution_pareto(-1.0, 1.0, &mut out) }, VariskStatus::InvalidParameter);
    assert!(out.is_null());
    assert!(last_error().starts_with("InvalidParameter"), "{}", last_error());
    assert_eq!(unsafe { varisk_distribution_pareto(1.0, 1.0, ptr::null_mut()) }, VariskStatus::NullPointer);

    let p = parse("pareto:1,1");
    let mut v = 0.0;
    assert_eq!(unsafe { varisk_quantile(p.0, 1.0, &mut v) }, VariskStatus::Domain);
    assert_eq!(unsafe { varisk_quantile(ptr::null(), 0.5, &mut v) }, VariskStatus::NullPointer);
    assert_eq!(unsafe { varisk_quantile(p.0, 0.5, ptr::null_mut()) }, VariskStatus::NullPointer);

    let bad = CString::new("cauchy:0,1").unwrap();
    assert_eq!(unsafe { varisk_distribution_parse(bad.as_ptr(), &mut out) }, VariskStatus::InvalidArgument);
    assert_eq!(unsafe { varisk_distribution_parse(ptr::null(), &mut out) }, VariskStatus::NullPointer);

    let mut report = std::mem::MaybeUninit::<VariskReport>::uninit();
    let status = unsafe { varisk_compare(p.0, p.0, 7, 0.9, ptr::null(), 1e-9, report.as_mut_ptr()) };
    assert_eq!(status, VariskStatus::InvalidArgument);

    let bad_settings = VariskSettings { abs_tolerance: 0.0, ..varisk_settings_default() };
    assert_eq!(
        unsafe { varisk_independent_var(p.0, p.0, 0.9, &bad_settings, &mut v) },
        VariskStatus::InvalidParameter
    );

    let tight = VariskSettings { max_subdivisions: 1, use_fast_paths: false, ..varisk_settings_default() };
    assert_eq!(unsafe { varisk_independent_cdf(p.0, p.0, 20.0, &tight, &mut v) }, VariskStatus::NonConvergence);
    assert_eq!(status_name(VariskStatus::NonConvergence), "NonConvergence");
    assert_eq!(status_name(VariskStatus::Domain), "DomainError");
    assert_eq!(unsafe { CStr::from_ptr(varisk_status_name(99)) }.to_str().unwrap(), "Unknown");
}

#[test]
fn last_error_is_per_thread() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { varisk_distribution_gamma(0.0, 1.0, &mut out) }, VariskStatus::InvalidParameter);
    let mine = last_error();
    std::thread::spawn(|| assert!(varisk_last_error_message().is_null())).join().unwrap();
    assert_eq!(last_error(), mine);
}

#[test]
fn aggregation_and_diversification() {
    let p = parse("pareto:1,1");
    let n = parse("normal:0,1");
    let e = parse("exp:1");
    let mut v = 0.0;
    unsafe {
        assert_eq!(varisk_independent_cdf(p.0, p.0, 4.0, ptr::null(), &mut v), VariskStatus::Ok);
        assert!((v - 0.362_673_463_916_486_3).abs() < 1e-12);
        assert_eq!(varisk_independent_var(p.0, p.0, 0.99, ptr::null(), &mut v), VariskStatus::Ok);
        assert!((v - 205.184_623_020_068_4).abs() < 1e-8);
        let numeric = VariskSettings { use_fast_paths: false, ..varisk_settings_default() };
        assert_eq!(varisk_independent_cdf(e.0, e.0, 2.0, &numeric, &mut v), VariskStatus::Ok);
        assert!((v - 0.593_994_150_290_161_9).abs() < 1e-10);

        let comps = [e.0 as *const _, e.0 as *const _, p.0 as *const _];
        assert_eq!(varisk_comonotone_var(comps.as_ptr(), 3, 0.9, &mut v), VariskStatus::Ok);
        assert!((v - (2.0 * 10f64.ln() + 10.0)).abs() < 1e-12);
        assert_eq!(varisk_comonotone_var(comps.as_ptr(), 1, 0.9, &mut v), VariskStatus::InvalidParameter);

        let mut r = std::mem::MaybeUninit::<VariskReport>::uninit();
        let dep = VariskDependence::Independent as i32;
        assert_eq!(varisk_compare(p.0, p.0, dep, 0.99, ptr::null(), 1e-9, r.as_mut_ptr()), VariskStatus::Ok);
        assert_eq!(r.assume_init().verdict, VariskVerdict::Harmful);
        assert_eq!(varisk_compare(n.0, n.0, dep, 0.99, ptr::null(), 1e-9, r.as_mut_ptr()), VariskStatus::Ok);
        assert_eq!(r.assume_init().verdict, VariskVerdict::Beneficial);
        let como = VariskDependence::Comonotone as i32;
        assert_eq!(varisk_compare(p.0, e.0, como, 0.9, ptr::null(), 1e-9, r.as_mut_ptr()), VariskStatus::Ok);
        assert_eq!(r.assume_init().verdict, VariskVerdict::Neutral);
    }
}

#[test]
fn crossover_buffer_protocol() {
    let e = parse("exp:1");
    let mut count = 0usize;
    let status = unsafe { varisk_crossover(e.0, e.0, ptr::null(), ptr::null_mut(), 0, &mut count) };
    assert_eq!(status, VariskStatus::BufferTooSmall);
    assert_eq!(count, 1);
    let mut roots = [0.0; 4];
    let status = unsafe { varisk_crossover(e.0, e.0, ptr::null(), roots.as_mut_ptr(), roots.len(), &mut count) };
    assert_eq!(status, VariskStatus::Ok);
    assert_eq!(count, 1);
    assert!((roots[0] - 0.715_331_9).abs() < 5e-7);

    let p = parse("pareto:1,1");
    let status = unsafe { varisk_crossover(p.0, p.0, ptr::null(), ptr::null_mut(), 0, &mut count) };
    assert_eq!(status, VariskStatus::Ok);
    assert_eq!(count, 0);
}

#[test]
fn eggs_and_monte_carlo() {
    let mut r = std::mem::MaybeUninit::<VariskEggsReport>::uninit();
    assert_eq!(unsafe { varisk_eggs(10, 0.3, 0.2, r.as_mut_ptr()) }, VariskStatus::Ok);
    let r = unsafe { r.assume_init() };
    assert!(!r.single_trip_prefers_split && r.long_run_prefers_split);
    assert_eq!(r.expected_single, 6.0);
    let mut bad = std::mem::MaybeUninit::<VariskEggsReport>::uninit();
    assert_eq!(unsafe { varisk_eggs(0, 0.3, 0.2, bad.as_mut_ptr()) }, VariskStatus::Domain);

    let e = parse("exp:1");
    let comps = [e.0 as *const _, e.0 as *const _];
    let mut a = std::mem::MaybeUninit::<VariskMcEstimate>::uninit();
    let mut b = std::mem::MaybeUninit::<VariskMcEstimate>::uninit();
    let dep = VariskDependence::Independent as i32;
    unsafe {
        assert_eq!(varisk_mc_var(comps.as_ptr(), 2, dep, 0.5, 200_000, 4, a.as_mut_ptr()), VariskStatus::Ok);
        assert_eq!(varisk_mc_var(comps.as_ptr(), 2, dep, 0.5, 200_000, 4, b.as_mut_ptr()), VariskStatus::Ok);
        let (a, b) = (a.assume_init(), b.assume_init());
        assert_eq!(a, b);
        assert!((a.estimate - 1.678_346_990_016_660_7).abs() <= a.ci_halfwidth);
        let mut c = std::mem::MaybeUninit::<VariskMcEstimate>::uninit();
        assert_eq!(varisk_mc_var(comps.as_ptr(), 2, dep, 0.5, 100, 4, c.as_mut_ptr()), VariskStatus::Domain);
    }
}

#[test]
fn version_and_defaults() {
    let v = unsafe { CStr::from_ptr(varisk_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let s = varisk_settings_default();
    assert_eq!(s.abs_tolerance, 1e-10);
    assert!(s.use_fast_paths);
    unsafe { varisk_distribution_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/varisk.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap()
        + &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/status.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|rest| rest.split('(').next())
        .collect();
    assert!(exports.len() >= 26, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from varisk.h");
    }
    for ty in ["typedef struct VariskDistribution VariskDistribution;", "VARISK_STATUS_NON_CONVERGENCE = 7", "VARISK_DEPENDENCE_INDEPENDENT = 1"] {
        assert!(header.contains(ty), "{ty}");
    }
}
