use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use earcomb_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = earcomb_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

/// Takes ownership of a returned string.
unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    earcomb_string_free(p);
    s
}

const TWO_TRIANGLES: &str = r#"{"vertices":[1,2,3,4],"facets":[[1,2,3],[1,2,4]]}"#;

#[test]
fn boolean_decompose_and_verify() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(earcomb_boolean(4, &mut inst), EarcombStatus::Ok);
        assert_eq!(earcomb_instance_d(inst), 4);
        let s = [1usize, 3];
        let mut out = ptr::null_mut();
        assert_eq!(earcomb_decompose(inst, s.as_ptr(), s.len(), &mut out), EarcombStatus::Ok);
        let report = take(out);
        let v: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(v["runs"][0]["decomposition"]["ears"].as_array().unwrap().len(), 5);

        let mut verified = ptr::null_mut();
        assert_eq!(earcomb_verify(c(&report).as_ptr(), &mut verified), EarcombStatus::Ok);
        assert!(take(verified).contains("\"passed\":true"));
        earcomb_instance_free(inst);
    }
}

#[test]
fn every_rank_set_when_s_is_empty() {
    unsafe {
        let mut inst = ptr::null_mut();
        let k4 = include_str!("../../core/data/k4.json");
        assert_eq!(earcomb_geometric(c(k4).as_ptr(), &mut inst), EarcombStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(earcomb_decompose(inst, ptr::null(), 0, &mut out), EarcombStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        let sets: Vec<_> = v["runs"].as_array().unwrap().iter().map(|r| r["s"].clone()).collect();
        assert_eq!(sets, [serde_json::json!([1]), serde_json::json!([1, 2]), serde_json::json!([2])]);
        earcomb_instance_free(inst);
    }
}

#[test]
fn tampered_artifact_fails_certificate() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(earcomb_faceposet(c(TWO_TRIANGLES).as_ptr(), &mut inst), EarcombStatus::Ok);
        let s = [1usize];
        let mut out = ptr::null_mut();
        assert_eq!(earcomb_decompose(inst, s.as_ptr(), 1, &mut out), EarcombStatus::Ok);
        let mut v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        v["runs"][0]["decomposition"]["ears"].as_array_mut().unwrap().pop();
        let mut verified = ptr::null_mut();
        let status = earcomb_verify(c(&v.to_string()).as_ptr(), &mut verified);
        assert_eq!(status, EarcombStatus::CertificateFailed);
        assert!(take(verified).contains("\"passed\":false"));
        earcomb_instance_free(inst);
    }
}

#[test]
fn vectors_with_length_query() {
    unsafe {
        let json = c(TWO_TRIANGLES);
        let mut len = 0;
        assert_eq!(earcomb_f_vector(json.as_ptr(), ptr::null_mut(), 0, &mut len), EarcombStatus::BufferTooSmall);
        let mut f = vec![0i64; len];
        assert_eq!(earcomb_f_vector(json.as_ptr(), f.as_mut_ptr(), f.len(), &mut len), EarcombStatus::Ok);
        assert_eq!(f, [1, 4, 5, 2]);
        let mut h = [0i64; 4];
        assert_eq!(earcomb_h_vector(json.as_ptr(), h.as_mut_ptr(), 4, &mut len), EarcombStatus::Ok);
        assert_eq!(h, [1, 1, 0, 0]);
    }
}

#[test]
fn dominance() {
    unsafe {
        let (t, s) = ([1usize], [1usize, 3]);
        let mut out = false;
        assert_eq!(earcomb_dominates(4, t.as_ptr(), 1, s.as_ptr(), 2, &mut out), EarcombStatus::Ok);
        assert!(out);
        assert_eq!(earcomb_dominates(4, s.as_ptr(), 2, t.as_ptr(), 1, &mut out), EarcombStatus::Ok);
        assert!(!out);
        let bad = [4usize];
        assert_eq!(earcomb_dominates(4, bad.as_ptr(), 1, s.as_ptr(), 2, &mut out), EarcombStatus::InvalidInput);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(earcomb_boolean(4, ptr::null_mut()), EarcombStatus::NullPointer);
        assert_eq!(earcomb_geometric(ptr::null(), &mut inst), EarcombStatus::NullPointer);
        assert_eq!(earcomb_geometric(c("{").as_ptr(), &mut inst), EarcombStatus::InvalidInput);
        assert!(inst.is_null());
        assert!(!last_error().is_empty());

        // the second edge is disjoint from the first, so the order is not a shelling
        let bad = r#"{"vertices":[1,2,3,4,5],"facets":[[1,2],[4,5],[2,3],[3,4]]}"#;
        assert_eq!(earcomb_faceposet(c(bad).as_ptr(), &mut inst), EarcombStatus::InvalidInput);
        assert!(inst.is_null());

        // a successful call clears the message
        assert_eq!(earcomb_boolean(2, &mut inst), EarcombStatus::Ok);
        assert!(earcomb_last_error().is_null());
        let s = [2usize];
        let mut out: *mut c_char = ptr::NonNull::dangling().as_ptr();
        assert_eq!(earcomb_decompose(inst, s.as_ptr(), 1, &mut out), EarcombStatus::InvalidInput);
        assert!(out.is_null());
        assert_eq!(earcomb_instance_d(ptr::null()), 0);
        earcomb_instance_free(inst);
        earcomb_instance_free(ptr::null_mut());
        earcomb_string_free(ptr::null_mut());
    }
}

#[test]
fn c_program_links_against_header_and_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/abi-<hash> → target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libearcomb_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let bin = profile_dir.join("earcomb_ffi_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler runs");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
