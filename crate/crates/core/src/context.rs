use crate::error::Result;
use crate::pair::{build_pair, HermitianPair, SpaceSpec};
use crate::restricted::{cascade, restricted_decomposition, RestrictedRootSystem, StronglyOrthogonalSet};
use crate::roots::{compute_root_datum, RootDatum};

/// Everything derived from a space spec that does not depend on parameters.
#[derive(Clone, Debug)]
pub struct SpaceContext {
    pub pair: HermitianPair,
    pub roots: RootDatum,
    pub sos: StronglyOrthogonalSet,
    pub rrs: RestrictedRootSystem,
}

impl SpaceContext {
    pub fn build(spec: SpaceSpec) -> Result<Self> {
        let pair = build_pair(spec)?;
        let roots = compute_root_datum(&pair)?;
        let sos = cascade(&pair, &roots)?;
        let rrs = restricted_decomposition(&pair, &sos)?;
        Ok(Self { pair, roots, sos, rrs })
    }

    pub fn spec(&self) -> SpaceSpec {
        self.pair.spec
    }

    pub fn rank(&self) -> usize {
        self.sos.rank()
    }
}
