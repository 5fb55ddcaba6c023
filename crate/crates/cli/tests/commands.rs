use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use qcat_cli::format::{self, read_fincategory, read_presheaf, read_qcategory, read_qcategory_with_annex};
use qcat_core::fixtures::{f_sheaf, rs};
use qcat_core::qcat::sections_qcat;
use qcat_core::{FiberKind, MapSite, Presheaf};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.toml"))
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qcat(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_qcat")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Compares with `tests/golden/<name>`; `QCAT_BLESS=1` rewrites the file.
fn golden(name: &str, actual: &str) {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("QCAT_BLESS").is_some() {
        fs::create_dir_all(file.parent().unwrap()).unwrap();
        fs::write(&file, actual).unwrap();
    }
    let expected = fs::read_to_string(&file).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(actual, expected, "output differs from golden file {name}");
}

const FIXTURES: [&str; 12] = [
    "rs",
    "q3",
    "boolean",
    "chaotic2",
    "f-sheaf",
    "f-bad",
    "sections-f-sheaf",
    "sections-f-bad",
    "unit-x",
    "hom-sections-f-sheaf",
    "e-idem",
    "hom-e-idem",
];

#[test]
fn fixtures_match_the_builtin_generator() {
    for name in FIXTURES {
        let run = qcat(&["fixture", name]);
        assert_eq!(run.code, 0, "{name}: {}", run.stderr);
        assert_eq!(run.stdout, fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn canonical_documents_round_trip_byte_for_byte() {
    for name in FIXTURES {
        let text = fs::read_to_string(fixture(name)).unwrap();
        let doc = format::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(doc.to_text(), text, "{name}");
    }
}

#[test]
fn validate_accepts_fixtures() {
    for name in FIXTURES {
        let run = qcat(&["validate", path(&fixture(name))]);
        assert_eq!(run.code, 0, "{name}: {}", run.stderr);
        assert!(run.stdout.starts_with("verdict: VALID"));
    }
}

#[test]
fn validate_locates_a_corrupted_composition_table() {
    let text = fs::read_to_string(fixture("q3")).unwrap();
    // 1 + 1 is 2, not 0
    let corrupted = text.replace(r#"["∞", "∞", "2", "1"]"#, r#"["∞", "∞", "2", "0"]"#);
    assert_ne!(corrupted, text);
    let file = scratch("q3-corrupted.toml");
    fs::write(&file, corrupted).unwrap();
    let run = qcat(&["validate", path(&file)]);
    assert_eq!(run.code, 2);
    assert!(run.stdout.is_empty());
    assert!(run.stderr.contains("q3-corrupted.toml: quantaloid:"), "{}", run.stderr);

    let unknown = text.replace(r#"["∞", "2", "1", "0"]]"#, r#"["∞", "2", "1", "7"]]"#);
    let file = scratch("q3-unknown.toml");
    fs::write(&file, unknown).unwrap();
    let run = qcat(&["validate", path(&file)]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("quantaloid.compose[0] (* -> * -> *), row 3, column 3"), "{}", run.stderr);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(qcat(&["validate", "/nonexistent/file.toml"]).code, 2);
    let run = qcat(&["sigma", path(&fixture("rs"))]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("expected a presheaf document"));
    assert_eq!(qcat(&["no-such-command"]).code, 2);
}

#[test]
fn maps_of_rs() {
    let run = qcat(&["maps", path(&fixture("rs"))]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.ends_with("count: 6\n"));
    golden("maps-rs.out", &run.stdout);
    let q3 = qcat(&["maps", path(&fixture("q3"))]);
    golden("maps-q3.out", &q3.stdout);
}

#[test]
fn sigma_of_f_sheaf() {
    let run = qcat(&["sigma", path(&fixture("f-sheaf"))]);
    assert_eq!(run.code, 0);
    let n = read_qcategory(&run.stdout).unwrap();
    let (s, p) = (n.index_of("s").unwrap(), n.index_of("p").unwrap());
    assert_eq!(n.quantaloid().cell_name(n.m(s, p)), "U");
    assert_eq!(n.quantaloid().cell_name(n.m(p, s)), "∅");
    golden("sigma-f-sheaf.toml", &run.stdout);
}

#[test]
fn fibers_of_sections() {
    let run = qcat(&["fibers", "--symmetric", path(&fixture("sections-f-sheaf"))]);
    assert_eq!(run.code, 0);
    assert!(read_presheaf(&run.stdout).unwrap().is_isomorphic(&f_sheaf()));
    let bad = qcat(&["fibers", "--symmetric", path(&fixture("sections-f-bad"))]);
    let view = read_presheaf(&bad.stdout).unwrap();
    assert_eq!(view.fiber(rs().object("∅").unwrap()).len(), 1);
    golden("fibers-sections-f-bad.toml", &bad.stdout);
}

#[test]
fn complete_examples() {
    let run = qcat(&["complete", "--symmetric", path(&fixture("sections-f-sheaf"))]);
    assert_eq!(run.code, 0);
    let (c, annex) = read_qcategory_with_annex(&run.stdout).unwrap();
    assert!(c.is_isomorphic(&sections_qcat(&f_sheaf()).unwrap()));
    assert_eq!(annex.len(), c.len());

    let bad = qcat(&["complete", "--symmetric", path(&fixture("sections-f-bad"))]);
    let (merged, _) = read_qcategory_with_annex(&bad.stdout).unwrap();
    assert_eq!(merged.elements_of_type(rs().object("∅").unwrap()).count(), 1);
    golden("complete-sections-f-bad.toml", &bad.stdout);

    let file = scratch("completed.toml");
    fs::write(&file, &bad.stdout).unwrap();
    let again = qcat(&["complete", "--symmetric", path(&file)]);
    assert!(read_qcategory(&again.stdout).unwrap().is_isomorphic(&merged));
}

#[test]
fn roundtrip_verdicts() {
    let ok = qcat(&["roundtrip", path(&fixture("f-sheaf"))]);
    assert_eq!((ok.code, ok.stdout.as_str()), (0, "verdict: FIXED\n"));

    let out = scratch("roundtrip-f-bad.toml");
    let bad = qcat(&["roundtrip", path(&fixture("f-bad")), "--out", path(&out)]);
    assert_eq!(bad.code, 1);
    golden("roundtrip-f-bad.out", &bad.stdout);
    assert!(bad.stdout.contains("witness:") && bad.stdout.contains('∅'));
    let sheaf = read_presheaf(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sheaf.fiber(rs().object("∅").unwrap()).len(), 1);

    let terminal = Presheaf::terminal(Arc::new(MapSite::new(rs(), true).unwrap()), FiberKind::Set);
    let file = scratch("terminal.toml");
    fs::write(&file, format::write_presheaf(&terminal)).unwrap();
    assert_eq!(qcat(&["roundtrip", path(&file)]).stdout, "verdict: FIXED\n");
}

#[test]
fn check_fixed_presheaf_verdicts() {
    assert_eq!(qcat(&["check-fixed-presheaf", path(&fixture("f-sheaf"))]).code, 0);
    let bad = qcat(&["check-fixed-presheaf", path(&fixture("f-bad"))]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.starts_with("verdict: NOT-FIXED\nwitness:"));
}

#[test]
fn check_fixed_cat_verdicts() {
    let run = qcat(&["check-fixed-cat", "--symmetric", path(&fixture("sections-f-sheaf"))]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "verdict: FIXED\ndirect: FIXED\n"));
    // the join-of-maps formula alone does not see duplicated elements
    let bad = qcat(&["check-fixed-cat", "--symmetric", path(&fixture("sections-f-bad"))]);
    assert_eq!(bad.stdout, "verdict: FIXED\ndirect: NOT-FIXED\n");
    // U -> X is not a join of maps in R(S)
    let all = qcat(&["check-fixed-cat", path(&fixture("sections-f-sheaf"))]);
    assert_eq!(all.code, 1);
    golden("check-fixed-cat-all-maps.out", &all.stdout);
}

#[test]
fn karoubi_of_e_idem() {
    let run = qcat(&["karoubi", path(&fixture("e-idem"))]);
    assert_eq!(run.code, 0);
    let kar = read_fincategory(&run.stdout).unwrap();
    assert_eq!((kar.num_objects(), kar.num_arrows()), (2, 5));
    golden("karoubi-e-idem.toml", &run.stdout);
    let file = scratch("kar.toml");
    fs::write(&file, &run.stdout).unwrap();
    let twice = read_fincategory(&qcat(&["karoubi", path(&file)]).stdout).unwrap();
    assert_eq!(twice.num_objects(), 3);
}

#[test]
fn oracle_sheafify_examples() {
    let run = qcat(&["oracle-sheafify", path(&fixture("f-sheaf"))]);
    assert!(read_presheaf(&run.stdout).unwrap().is_isomorphic(&f_sheaf()));
    let bad = qcat(&["oracle-sheafify", path(&fixture("f-bad"))]);
    golden("oracle-sheafify-f-bad.toml", &bad.stdout);
}

#[test]
fn sampling_is_reproducible() {
    let rs_file = fixture("rs");
    let a = qcat(&["sample-presheaf", path(&rs_file), "--seed", "11"]);
    let b = qcat(&["sample-presheaf", path(&rs_file), "--seed", "11"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(read_presheaf(&a.stdout).unwrap().validate().is_ok());
    assert_eq!(qcat(&["sample-presheaf", path(&fixture("q3"))]).code, 2);
}

#[test]
fn out_flag_writes_the_document() {
    let file = scratch("sigma-out.toml");
    let run = qcat(&["sigma", path(&fixture("f-sheaf")), "--out", path(&file)]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.is_empty());
    assert_eq!(fs::read_to_string(&file).unwrap(), qcat(&["sigma", path(&fixture("f-sheaf"))]).stdout);
}
