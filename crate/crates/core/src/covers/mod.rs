//! Galois covers of the formal disk: Kummer and Artin-Schreier covers,
//! their integral models, and the étale algebras of small degree over
//! `F_q((t))`.

mod artin_schreier;
mod etale;
mod kummer;
mod model;

pub use artin_schreier::{as_class_count, as_reduce, ASCover, AsReduction, LaurentPoly, RamDatum};
pub use etale::{
    artin_conductor, enumerate_etale, enumerate_fields, field_mass, serre_mass_check, Affine,
    CountTerm, EtaleAlgebraFamily, FieldFamily, FieldKind, JumpProgression, Resolvent,
};
pub use kummer::KummerCover;
pub use model::{uniformizer_disc_valuation, IntegralModel};

use crate::field::FieldError;
use crate::linalg::LinalgError;
use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("operation needs positive characteristic")]
    WrongCharacteristic,
    #[error("cover is unramified")]
    Unramified,
    #[error("base field has no primitive {0}-th root of unity")]
    NoRootOfUnity(u64),
    #[error("unsupported tower shape")]
    UnsupportedTower,
    #[error("unsupported degree {n} over F_{q}")]
    UnsupportedDegree { n: u32, q: u64 },
    #[error("invalid cover data: {0}")]
    InvalidCover(&'static str),
    #[error("integral model check failed: {0}")]
    ModelCheckFailed(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A connected cyclic cover of the formal disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverSpec {
    Kummer(KummerCover),
    ArtinSchreier(ASCover),
}

impl CoverSpec {
    pub fn degree(&self) -> u64 {
        match self {
            CoverSpec::Kummer(c) => c.l(),
            CoverSpec::ArtinSchreier(c) => c.p(),
        }
    }

    pub fn integral_model(&self, prec: i64) -> Result<IntegralModel, CoverError> {
        match self {
            CoverSpec::Kummer(c) => IntegralModel::kummer(c, prec),
            CoverSpec::ArtinSchreier(c) => IntegralModel::artin_schreier(c, prec),
        }
    }
}
