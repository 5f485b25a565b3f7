//! The search pipeline: level generation, isomorph filtering, candidate
//! streams, the excluded-minor sieve and the level store.

mod class;
mod filter;
mod generate;
mod record;
mod sieve;
mod store;

pub use class::{ClassConfig, ClassSpec, Seed, BUILTIN_CLASSES};
pub use filter::{isomorph_filter, isomorph_filter_in_memory, FilterConfig, IsomorphFilter, Spillable};
pub use generate::{
    extension_candidates, generate_level, member_extensions, splice_candidates, splices_of, EngineConfig, IsoIndex,
};
pub use record::MemberRecord;
pub use sieve::{
    carrier_relevant, catalog_name, ch_hunt, counts_report, counts_tsv, delta_dual_closure, excluded_minors,
    is_member, sieve_excluded, splice_threshold, verify_base_excluded, BaseCheck, ChHuntReport, ExcludedReport,
};
pub use store::{fingerprint, LevelStore};
