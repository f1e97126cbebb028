//! Mori dream threefolds: chamber data, decompositions along the flag
//! surface and body assembly slice by slice.

mod body;
mod chambers;
mod model;

pub use body::{
    body_translation_vector, divisor_volume, limiting_body, okounkov_body, polyhedrality_report, slice_at,
    OkounkovBody3, PolyhedralityReport, ProfileInterval, SliceProfile, SliceRecord,
};
pub use chambers::{
    asymptotic_valuation_3, chamber_intervals, chamber_of, check_flag_admissibility, combine_shifts, mu_threefold,
    ord_flag, shift_l, t_partition, zariski_mds, AdmissibilityReport, ChamberMembership, MdsDecomposition,
    TInterval,
};
pub use model::{EffGenerator, MoriChamber, ThreefoldData, ThreefoldModel, Trilinear};
