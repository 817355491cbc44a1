//! Ganea and Whitehead towers, invariants and certificates, generic over
//! any [`HomotopyCategory`](crate::hcat::HomotopyCategory).

mod certificate;
mod invariants;
mod text;
mod tower;
mod whitehead;

pub use invariants::{
    cat, cat_map, compl_map, compl_obj, diagonal, first_delta, relcat, relcat_on, secat, secat_on, InvariantResult,
    InvariantValue, DEFAULT_CAP,
};
pub use tower::{cofibre, fibre, join, GaneaStage, GaneaStep, GaneaTower, JoinData};
pub use whitehead::{diagonal_family, join_map, DiagonalFamily, JoinMap, Power, WhiteheadStage, WhiteheadTower};
pub use certificate::{
    cofibration_certificate, cofibre_certificate, equivalence_certificate, pinch, pinch_certificate,
    suspension_compl_certificate, validate_pushcat_certificate, validate_relcat_certificate, Pinch, PushcatCertificate,
    RelcatCertificate, Rejection, SuspensionCertificate, Verdict,
};
pub use text::{parse_certificate, write_certificate, Certificate, CertificateDocument, CERTIFICATE_HEADER};
