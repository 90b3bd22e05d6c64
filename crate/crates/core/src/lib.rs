//! Ramification groups, Herbrand functions and depth bookkeeping for local
//! field extensions, in exact rational arithmetic and with lower indices
//! normalized so that `val(F^×) = Z`.

pub mod arith;
pub mod classical;
pub mod error;
pub mod formats;
pub mod group;
pub mod lmfdb;
pub mod newton;
pub mod pl;
pub mod poly;
pub mod presets;
pub mod ramgroup;
pub mod random;
pub mod rat;
pub mod tower;
pub mod verify;

pub use arith::{CosetDepthData, ExtensionSummary, Glyph, NormImage};
pub use classical::ClassicalContext;
pub use error::{Error, FetchError, Result};
pub use group::{ElementSet, FiniteGroup};
pub use lmfdb::{LocalFieldRecord, TranslationTable};
pub use newton::{EisensteinPoly, PolynomialDepths};
pub use pl::PlFunc;
pub use poly::IntPoly;
pub use presets::Preset;
pub use ramgroup::{DepthFunction, DepthMultiset, ValidationReport};
pub use rat::{Depth, Rat};
pub use tower::TowerDatum;
