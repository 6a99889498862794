//! Security-cluster protocol: SC target selection, RSC negotiation, hash-chain
//! identity checks, cluster and pseudo-cluster formation, and history.

mod formation;
mod history;
mod identity;
mod negotiate;

pub use formation::{form_cluster, sc_select, ClusterCandidate, Formation, RoadClass};
pub use history::{
    history_fallback, select_consensus_candidates, ClusterEngine, ClusterHistory, ClusterState, Consensus,
    HistoryRecord, MemberVsc, NoopConsensus, CLAIM_TOLERANCE_BITS,
};
pub use identity::{
    chain_links, validate_identity, validate_vin, ChainExchange, ChainHash, ChainProof, VehicleIdentity, VIN_LEN,
};
pub use negotiate::{
    rsc_negotiate, HighwayEnv, Knob, Negotiation, RelayGains, SecrecyEnvironment, SecrecyKnobs,
};
