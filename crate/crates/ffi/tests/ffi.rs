use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use twistcalc_ffi::*;

const FIG: &str = "signature 2 2\nvertex C1 genus 1\nvertex C2 genus 2\nedge q: C1 C2\n\
    leg z1: C1 order 2\nleg z2: C2 order 2\ntorsion C1: z1 - q order 2\naxiom C2: weierstrass z2\n";

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { tc_string_free(s) };
    out
}

fn parse(src: &str) -> (TcStatus, *mut TcDocument) {
    let c = CString::new(src).unwrap();
    let mut doc = ptr::null_mut();
    let st = unsafe { tc_document_parse(c.as_ptr(), &mut doc) };
    (st, doc)
}

fn run(doc: *const TcDocument, cmd: &str) -> (TcStatus, Option<String>, i32) {
    let c = CString::new(cmd).unwrap();
    let mut out = ptr::null_mut();
    let mut decided = -1;
    let st = unsafe { tc_run(doc, c.as_ptr(), false, &mut out, &mut decided) };
    (st, (!out.is_null()).then(|| take(out)), decided)
}

#[test]
fn parse_run_and_free() {
    let (st, doc) = parse(FIG);
    assert_eq!(st, TcStatus::Ok);
    let (st, json, decided) = run(doc, "check");
    assert_eq!((st, decided), (TcStatus::Ok, 1));
    let v: serde_json::Value = serde_json::from_str(&json.unwrap()).unwrap();
    assert_eq!(v["smoothable"], "yes");
    let (st, json, _) = run(doc, "spin");
    assert_eq!(st, TcStatus::Ok);
    assert!(json.unwrap().contains("\"parity\": \"odd\""));
    let mut printed = ptr::null_mut();
    assert_eq!(unsafe { tc_document_print(doc, &mut printed) }, TcStatus::Ok);
    assert!(take(printed).starts_with("signature 2 2\n"));
    unsafe { tc_document_free(doc) };
}

#[test]
fn errors_carry_messages() {
    let (st, doc) = parse("vertex C genus 1\nvertex C genus 2\n");
    assert_eq!(st, TcStatus::ParseError);
    assert!(doc.is_null());
    assert!(take(tc_last_error()).contains("2:8: duplicate vertex"));

    let (_, doc) = parse("chain g=3 t2=inf t3=inf\n");
    let (st, json, _) = run(doc, "explode");
    assert_eq!((st, json), (TcStatus::UnknownCommand, None));
    let (st, _, _) = run(doc, "check");
    assert_eq!(st, TcStatus::CommandFailed);
    assert!(!tc_last_error().is_null());
    let (st, json, decided) = run(doc, "chain");
    assert_eq!((st, decided), (TcStatus::Ok, 1));
    assert!(json.unwrap().contains("\"weierstrass\": false"));
    assert!(tc_last_error().is_null());
    unsafe { tc_document_free(doc) };

    let mut doc = ptr::null_mut();
    assert_eq!(
        unsafe { tc_document_parse(ptr::null(), &mut doc) },
        TcStatus::NullPointer
    );
    let bad = [0xffu8, 0];
    assert_eq!(
        unsafe { tc_document_parse(bad.as_ptr().cast(), &mut doc) },
        TcStatus::InvalidUtf8
    );
    unsafe { tc_document_free(ptr::null_mut()) };
    unsafe { tc_string_free(ptr::null_mut()) };
}

#[test]
fn undecided_report() {
    let (_, doc) = parse("signature 4\nvertex C1 genus 1\nvertex C2 genus 2\nedge q: C1 C2\nleg z: C1 order 4\n");
    let (st, _, decided) = run(doc, "check");
    assert_eq!((st, decided), (TcStatus::Ok, 0));
    unsafe { tc_document_free(doc) };
}

#[test]
fn numeric_helpers() {
    let mut out = -1;
    let inf = [0u64, 0];
    assert_eq!(
        unsafe { tc_chain_is_weierstrass(3, inf.as_ptr(), 2, &mut out) },
        TcStatus::Ok
    );
    assert_eq!(out, 0);
    let two = [2u64];
    assert_eq!(
        unsafe { tc_chain_is_weierstrass(2, two.as_ptr(), 1, &mut out) },
        TcStatus::Ok
    );
    assert_eq!(out, 1);
    assert_eq!(
        unsafe { tc_chain_is_weierstrass(3, two.as_ptr(), 1, &mut out) },
        TcStatus::InvalidArgument
    );

    let mut dim = 0;
    assert_eq!(
        unsafe { tc_stratum_dimension([4i64].as_ptr(), 1, false, &mut dim) },
        TcStatus::Ok
    );
    assert_eq!(dim, 6);
    assert_eq!(
        unsafe { tc_stratum_dimension([4i64].as_ptr(), 1, true, &mut dim) },
        TcStatus::Ok
    );
    assert_eq!(dim, 5);
    assert_eq!(
        unsafe { tc_stratum_dimension([3i64].as_ptr(), 1, false, &mut dim) },
        TcStatus::InvalidArgument
    );
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = include.join("twistcalc.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "tc_document_parse",
        "tc_run",
        "tc_string_free",
        "tc_last_error",
        "TC_STATUS_OK = 0",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let src = std::env::temp_dir().join(format!("twistcalc-header-{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"twistcalc.h\"\n\
         int main(void) {\n\
           TcDocument *doc = NULL; char *json = NULL; int32_t decided = 0;\n\
           if (tc_document_parse(\"chain g=2 t2=2\", &doc) != TC_STATUS_OK) return 1;\n\
           TcStatus st = tc_run(doc, \"chain\", false, &json, &decided);\n\
           tc_string_free(json); tc_document_free(doc);\n\
           return st == TC_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler; header checked textually only");
        return;
    };
    std::fs::remove_file(&src).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
