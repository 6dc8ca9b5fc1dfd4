//! Exercise the C surface from Rust: handle lifecycles, status codes, JSON
//! payloads, and the generated header.

use std::ffi::{CStr, CString};
use std::ptr;

use romlift_ffi::*;

fn cstring(text: &str) -> CString {
    CString::new(text).unwrap()
}

unsafe fn take_string(ptr: *mut std::ffi::c_char) -> String {
    assert!(!ptr.is_null());
    let text = CStr::from_ptr(ptr).to_str().unwrap().to_string();
    rl_string_free(ptr);
    text
}

unsafe fn last_error() -> String {
    take_string(rl_last_error())
}

const ORACLE_TEXT: &str = "n=1 m=1\n0 -> 1\n1 -> 0\n";

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(rl_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn oracle_round_trip() {
    unsafe {
        let text = cstring(ORACLE_TEXT);
        let mut oracle: *mut RlOracle = ptr::null_mut();
        assert_eq!(rl_oracle_parse(text.as_ptr(), &mut oracle), RlStatus::Ok);
        let mut rendered: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(rl_oracle_format(oracle, &mut rendered), RlStatus::Ok);
        assert_eq!(take_string(rendered), ORACLE_TEXT);
        rl_oracle_free(oracle);
    }
}

#[test]
fn parse_failures_set_the_error_message() {
    unsafe {
        let text = cstring("n=1 m=1\n0 => 1\n");
        let mut oracle: *mut RlOracle = ptr::null_mut();
        assert_eq!(rl_oracle_parse(text.as_ptr(), &mut oracle), RlStatus::Parse);
        assert!(last_error().contains("line 2"));

        assert_eq!(
            rl_oracle_parse(ptr::null(), &mut oracle),
            RlStatus::NullArgument
        );
    }
}

#[test]
fn circuit_output_distribution() {
    unsafe {
        let mut oracle: *mut RlOracle = ptr::null_mut();
        let text = cstring(ORACLE_TEXT);
        assert_eq!(rl_oracle_parse(text.as_ptr(), &mut oracle), RlStatus::Ok);

        // One classical query at x = 0; the output wire reads H(0) = 1.
        let circuit_json =
            cstring(r#"{"n":1,"m":1,"w":0,"layers":[{"oracle":true}],"output_wires":[1]}"#);
        let mut circuit: *mut RlCircuit = ptr::null_mut();
        assert_eq!(
            rl_circuit_parse_json(circuit_json.as_ptr(), &mut circuit),
            RlStatus::Ok
        );

        let mut rendered: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(rl_circuit_to_json(circuit, &mut rendered), RlStatus::Ok);
        let round_trip = take_string(rendered);
        assert!(round_trip.contains("\"oracle\": true"));

        let mut dist_json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            rl_output_distribution_json(circuit, oracle, &mut dist_json),
            RlStatus::Ok
        );
        let dist: serde_json::Value = serde_json::from_str(&take_string(dist_json)).unwrap();
        assert!((dist["1"].as_f64().unwrap() - 1.0).abs() < 1e-12);

        rl_circuit_free(circuit);
        rl_oracle_free(oracle);
    }
}

#[test]
fn prg_advantage_and_lift_report() {
    unsafe {
        let name = cstring("g_id");
        let mut prg: *mut RlPrg = ptr::null_mut();
        assert_eq!(rl_prg_by_name(name.as_ptr(), &mut prg), RlStatus::Ok);

        let dist_name = cstring("a_par");
        let mut advantage = 0.0f64;
        assert_eq!(
            rl_prg_advantage(prg, dist_name.as_ptr(), 1 << 20, &mut advantage),
            RlStatus::Ok
        );
        assert!((advantage - 0.625).abs() < 1e-12);

        let mut report_json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            rl_lift_report_json(prg, dist_name.as_ptr(), -1.0, 1 << 20, &mut report_json),
            RlStatus::Ok
        );
        let report: serde_json::Value = serde_json::from_str(&take_string(report_json)).unwrap();
        assert_eq!(report["pass"], true);
        assert!((report["adv_classical"].as_f64().unwrap() - 0.625).abs() < 1e-12);

        rl_prg_free(prg);
    }
}

#[test]
fn unknown_names_are_reported() {
    unsafe {
        let name = cstring("g_nope");
        let mut prg: *mut RlPrg = ptr::null_mut();
        assert_eq!(
            rl_prg_by_name(name.as_ptr(), &mut prg),
            RlStatus::UnknownName
        );
        assert!(last_error().contains("g_nope"));
    }
}

#[test]
fn sim_oracle_over_the_boundary() {
    unsafe {
        let mut oracle: *mut RlOracle = ptr::null_mut();
        let text = cstring(ORACLE_TEXT);
        assert_eq!(rl_oracle_parse(text.as_ptr(), &mut oracle), RlStatus::Ok);

        let circuit_json =
            cstring(r#"{"n":1,"m":1,"w":0,"layers":[{"oracle":true}],"output_wires":[1]}"#);
        let mut circuit: *mut RlCircuit = ptr::null_mut();
        assert_eq!(
            rl_circuit_parse_json(circuit_json.as_ptr(), &mut circuit),
            RlStatus::Ok
        );

        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            rl_sim_oracle_json(circuit, oracle, 0.0, &mut out),
            RlStatus::Ok
        );
        let result: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(result["queries"], 1);
        assert!(result["simulated_oracle"]
            .as_str()
            .unwrap()
            .contains("0 -> 1"));

        rl_circuit_free(circuit);
        rl_oracle_free(oracle);
    }
}

#[test]
fn verify_suite_over_the_boundary() {
    unsafe {
        let suite = cstring("pseudodet");
        let mut passed = 0i32;
        let mut out: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(
            rl_verify_suite_json(suite.as_ptr(), 7, 50, 1 << 20, &mut passed, &mut out),
            RlStatus::Ok
        );
        assert_eq!(passed, 1);
        let checks: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert!(checks.as_array().unwrap().len() >= 5);
    }
}

#[test]
fn header_is_generated_with_the_full_surface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/romlift.h"))
        .expect("build script wrote the header");
    for symbol in [
        "rl_version",
        "rl_last_error",
        "rl_string_free",
        "rl_oracle_parse",
        "rl_circuit_parse_json",
        "rl_prg_by_name",
        "rl_output_distribution_json",
        "rl_prg_advantage",
        "rl_lift_report_json",
        "rl_sim_oracle_json",
        "rl_verify_suite_json",
        "typedef struct RlOracle RlOracle;",
        "typedef struct RlCircuit RlCircuit;",
        "typedef struct RlPrg RlPrg;",
    ] {
        assert!(header.contains(symbol), "header is missing `{symbol}`");
    }
}
