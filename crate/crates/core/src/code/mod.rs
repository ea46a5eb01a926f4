//! Binary-code algebra: codes, integer sumsets and difference sets, UDCP
//! verification, projections, distance censuses, the `(a ⊕ b, b \ a)`
//! encoding, dense subcodes and product composition.

mod census;
mod dense;
mod eta;
mod format;
mod pair;
mod word;

pub use census::{
    distance_census, van_tilborg_bound, van_tilborg_check, DistanceCensus, VanTilborgReport, VanTilborgRow,
};
pub use dense::{check_density, extract_dense_subcode, DenseSubcodeReport, DensityCheck};
pub use eta::{encode_eta, eta_collisions, EncodedPair, SplitEncoding};
pub use format::{format_code_file, parse_code_file};
pub use pair::{diffset, product_compose, sumset, CodePair, Collision, UdcpStatus};
pub use word::{format_word, parse_word, BinaryCode, TernaryKind, TernaryWord};
