//! Harvesting RDF data from SPARQL endpoints with LIMIT/OFFSET paging, and
//! running harvest, profile and check campaigns over many endpoints.
//!
//! Paging relies on `ORDER BY` for stable offsets. Endpoints that do not
//! order consistently may repeat triples across pages (absorbed by set
//! semantics) and skip others, so their triple counts can be low.

pub mod campaign;
pub mod harvest;
pub mod profile;
pub mod results;
pub mod source;

pub use campaign::{
    harvest_sources, load_campaign, run_campaign, CampaignOptions, CampaignRecord, CampaignResult, CampaignSummary,
    HarvestRecord, HarvestRunOptions, PersistError, SourceReport,
};
pub use harvest::{harvest, harvest_with, HarvestOptions, HarvestResult, HarvestStatus, Method, PageLog};
pub use profile::{default_classes, profile, ClassCount, ProfileRow};
pub use source::{load_sources, parse_sources, Source, SourceError};
