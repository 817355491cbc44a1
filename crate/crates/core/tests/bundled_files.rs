//! The bundled certificate files and random map corpus: regenerated from the
//! builders and compared byte for byte (`SECAT_BLESS=1` rewrites them), then
//! checked from text.

use std::path::PathBuf;

use secat_core::chain::{ChainComplex, ChainDocument, ChainTextError, ChainWorkspace, ChainWriter, CHAIN_HEADER};
use secat_core::ganea::{
    parse_certificate, pinch, pinch_certificate, relcat, secat, suspension_compl_certificate, write_certificate,
    Certificate,
};
use secat_core::golden::random_map;

/// Seeds of the bundled corpus: every generator kind, and four maps whose
/// relcat exceeds secat.
const CORPUS_SEEDS: [u64; 16] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 27, 63, 83];

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn golden(name: &str, text: &str) {
    let path = data(name);
    if std::env::var_os("SECAT_BLESS").is_some() {
        std::fs::write(&path, text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
    assert_eq!(on_disk, text, "{} is stale; rerun with SECAT_BLESS=1", path.display());
}

fn pinch_text() -> String {
    let mut ws = ChainWorkspace::new();
    let x = ws.add_complex(ChainComplex::sphere(1), "S1");
    let p = pinch(&mut ws, x).unwrap();
    let c = pinch_certificate(&mut ws, &p).unwrap();
    format!("# pinch map of the suspension of S1\n{}", write_certificate(&ws, &Certificate::Relcat(c)))
}

/// Sends sigma to the zero map, so `rho ∘ sigma ≃ id` fails at stage 0.
fn tampered(text: &str) -> String {
    let sigma = text.lines().find_map(|l| l.strip_prefix("sigma ")).unwrap();
    let header = format!("map {sigma} : ");
    let ends = text.lines().find_map(|l| l.strip_prefix(header.as_str())).unwrap();
    let body = text.replace(&format!("sigma {sigma}\n"), &format!("zero tampered : {ends}\nsigma tampered\n"));
    body.replacen("# pinch map", "# sigma replaced by zero: pinch map", 1)
}

fn suspension_text() -> String {
    let mut ws = ChainWorkspace::new();
    let x = ws.add_complex(ChainComplex::sphere(1), "S1");
    let sc = suspension_compl_certificate(&mut ws, x).unwrap();
    format!(
        "# diagonal of the suspension of S1\n{}",
        write_certificate(&ws, &Certificate::Relcat(sc.certificate))
    )
}

fn corpus_name(seed: u64) -> String {
    format!("corpus/map-{seed:02}.chain")
}

fn corpus_text(seed: u64) -> String {
    let mut ws = ChainWorkspace::new();
    let f = random_map(seed, &mut ws).unwrap();
    let mut w = ChainWriter::new(CHAIN_HEADER);
    w.map_as(&ws, f, "iota");
    format!("# random map, seed {seed}\n{}", w.finish())
}

#[test]
fn corpus_is_current() {
    if std::env::var_os("SECAT_BLESS").is_some() {
        std::fs::create_dir_all(data("corpus")).unwrap();
    }
    for seed in CORPUS_SEEDS {
        golden(&corpus_name(seed), &corpus_text(seed));
    }
}

#[test]
fn corpus_relcat_exceeds_secat_by_at_most_one() {
    let mut gaps = Vec::new();
    for seed in CORPUS_SEEDS {
        let text = std::fs::read_to_string(data(&corpus_name(seed))).unwrap();
        let mut doc = ChainDocument::parse(&text).unwrap();
        let iota = doc.map("iota").unwrap();
        let s = secat(&mut doc.ws, iota, 4).unwrap().finite().unwrap();
        let r = relcat(&mut doc.ws, iota, 4).unwrap().finite().unwrap();
        assert!(s <= r && r <= s + 1, "seed {seed}: secat {s}, relcat {r}");
        gaps.push(r - s);
    }
    assert!(gaps.contains(&0) && gaps.contains(&1));
}

#[test]
fn bundled_files_are_current() {
    let pinch = pinch_text();
    golden("pinch.cert", &pinch);
    golden("pinch-tampered.cert", &tampered(&pinch));
    golden("suspension.cert", &suspension_text());
}

#[test]
fn pinch_file_validates_at_length_one() {
    let text = std::fs::read_to_string(data("pinch.cert")).unwrap();
    let mut doc = parse_certificate(&text).unwrap();
    assert_eq!(doc.certificate.validate(&mut doc.doc.ws), Ok(1));
    let target = doc.certificate.base().target;
    let r = relcat(&mut doc.doc.ws, target, 4).unwrap().finite().unwrap();
    assert!(r <= 1);
}

#[test]
fn suspension_file_validates_at_length_two() {
    let text = std::fs::read_to_string(data("suspension.cert")).unwrap();
    let mut doc = parse_certificate(&text).unwrap();
    assert_eq!(doc.certificate.validate(&mut doc.doc.ws), Ok(2));
    // its target is the diagonal of the suspension
    let target = doc.certificate.base().target;
    let s = doc.doc.ws.complex(target.src).clone();
    let product = doc.doc.ws.complex(target.tgt).clone();
    assert_eq!(s.betti().dim(2), 1);
    assert_eq!(product.betti().dim(2), 2);
}

#[test]
fn tampered_file_is_rejected_with_its_check_id() {
    let text = std::fs::read_to_string(data("pinch-tampered.cert")).unwrap();
    let mut doc = parse_certificate(&text).unwrap();
    let err = doc.certificate.validate(&mut doc.doc.ws).unwrap_err();
    assert_eq!(err.check, "rho-sigma");
    assert_eq!(err.stage, Some(0));
}

#[test]
fn corrupted_numbers_are_backend_errors() {
    let text = std::fs::read_to_string(data("pinch.cert")).unwrap();
    // the square's sides now differ where the witness cannot reach
    let corrupt = text.replacen(
        "map square1_lhs : SS1vS1 -> SS1vSS1\nat 2 = 1 ; 1",
        "map square1_lhs : SS1vS1 -> SS1vSS1\nat 2 = 2 ; 1",
        1,
    );
    assert_ne!(corrupt, text);
    assert!(matches!(parse_certificate(&corrupt), Err(ChainTextError::Backend { .. })));
}
