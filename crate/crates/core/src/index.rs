//! One front end over every index kind: build parameters, byte-pattern
//! queries with 1-based results, and section lists for serialization.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rcsa::{RCsa, DEFAULT_BLOCK};
use crate::rindex::RIndex;
use crate::rlbwt::RunLengthBwt;
use crate::section::{Role, Section, SectionMap};
use crate::srcsa::SrCsa;
use crate::srindex::{SrIndex, Variant};
use crate::text::{Alphabet, SuffixBundle, Text};
use crate::trace::QueryTrace;
use crate::SaRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    Rlbwt,
    RIndex,
    SrIndex,
    RCsa,
    SrCsa,
}

impl IndexKind {
    pub const ALL: [IndexKind; 5] = [
        IndexKind::Rlbwt,
        IndexKind::RIndex,
        IndexKind::SrIndex,
        IndexKind::RCsa,
        IndexKind::SrCsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Rlbwt => "rlbwt",
            IndexKind::RIndex => "r-index",
            IndexKind::SrIndex => "sr-index",
            IndexKind::RCsa => "r-csa",
            IndexKind::SrCsa => "sr-csa",
        }
    }

    pub fn code(self) -> u64 {
        self as u64
    }

    pub fn from_code(code: u64) -> Result<Self> {
        Self::ALL
            .get(code as usize)
            .copied()
            .ok_or_else(|| Error::Format(format!("unknown index kind {code}")))
    }

    pub fn is_subsampled(self) -> bool {
        matches!(self, IndexKind::SrIndex | IndexKind::SrCsa)
    }

    pub fn uses_block(self) -> bool {
        matches!(self, IndexKind::RCsa | IndexKind::SrCsa)
    }

    pub fn can_locate(self) -> bool {
        self != IndexKind::Rlbwt
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown index kind {s:?}")))
    }
}

impl serde::Serialize for IndexKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Parameters of one index configuration. `s` and `variant` only matter
/// for subsampled kinds, `block` only for the CSA kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BuildParams {
    pub kind: IndexKind,
    pub s: usize,
    pub block: usize,
    pub variant: Variant,
}

impl BuildParams {
    pub fn new(kind: IndexKind) -> Self {
        Self {
            kind,
            s: 1,
            block: DEFAULT_BLOCK,
            variant: Variant::Plain,
        }
    }

    pub fn subsampled(kind: IndexKind, s: usize, variant: Variant) -> Self {
        Self {
            s,
            variant,
            ..Self::new(kind)
        }
    }

    pub fn with_block(mut self, block: usize) -> Self {
        self.block = block;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        if self.block == 0 {
            return Err(Error::InvalidParameter("block size must be at least 1".into()));
        }
        if !self.kind.is_subsampled() && (self.s != 1 || self.variant != Variant::Plain) {
            return Err(Error::InvalidParameter(format!(
                "{} takes no sampling factor or variant",
                self.kind
            )));
        }
        Ok(())
    }

    /// Short label such as `sr-index s=8 v2`.
    pub fn label(&self) -> String {
        let mut out = self.kind.name().to_string();
        if self.kind.is_subsampled() {
            out.push_str(&format!(" s={} v{}", self.s, self.variant.index()));
        }
        if self.kind.uses_block() && self.block != DEFAULT_BLOCK {
            out.push_str(&format!(" B={}", self.block));
        }
        out
    }

    /// The 39 configurations exercised by the oracle suite: every kind, and
    /// for subsampled kinds each variant with s in {1,2,4,8,16,64}.
    pub fn grid() -> Vec<BuildParams> {
        let mut out = Vec::new();
        for kind in IndexKind::ALL {
            if kind.is_subsampled() {
                for variant in Variant::ALL {
                    for s in [1, 2, 4, 8, 16, 64] {
                        out.push(Self::subsampled(kind, s, variant));
                    }
                }
            } else {
                out.push(Self::new(kind));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Engine {
    Rlbwt(RunLengthBwt),
    RIndex(RIndex),
    SrIndex(SrIndex),
    RCsa(RCsa),
    SrCsa(SrCsa),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnyIndex {
    params: BuildParams,
    alphabet: Alphabet,
    engine: Engine,
}

impl AnyIndex {
    pub fn build(text: &Text, params: BuildParams) -> Result<Self> {
        let bundle = SuffixBundle::build(text);
        Self::build_with(text, &bundle, params)
    }

    /// Builds from a precomputed bundle of `text`.
    pub fn build_with(text: &Text, bundle: &SuffixBundle, params: BuildParams) -> Result<Self> {
        params.validate()?;
        let sigma = text.sigma();
        let engine = match params.kind {
            IndexKind::Rlbwt => Engine::Rlbwt(RunLengthBwt::build(&bundle.bwt, sigma)),
            IndexKind::RIndex => Engine::RIndex(RIndex::build(bundle, sigma)),
            IndexKind::SrIndex => {
                Engine::SrIndex(SrIndex::build(bundle, sigma, params.s, params.variant)?)
            }
            IndexKind::RCsa => {
                Engine::RCsa(RCsa::build(bundle, text.symbols(), sigma, params.block)?)
            }
            IndexKind::SrCsa => Engine::SrCsa(SrCsa::build(
                bundle,
                text.symbols(),
                sigma,
                params.block,
                params.s,
                params.variant,
            )?),
        };
        Ok(Self {
            params,
            alphabet: text.alphabet().clone(),
            engine,
        })
    }

    pub fn params(&self) -> &BuildParams {
        &self.params
    }

    pub fn kind(&self) -> IndexKind {
        self.params.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Text length, sentinel included.
    pub fn len(&self) -> usize {
        match &self.engine {
            Engine::Rlbwt(x) => x.len(),
            Engine::RIndex(x) => x.len(),
            Engine::SrIndex(x) => x.len(),
            Engine::RCsa(x) => x.len(),
            Engine::SrCsa(x) => x.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    /// Number of BWT runs, which equals the number of Psi runs.
    pub fn runs(&self) -> usize {
        match &self.engine {
            Engine::Rlbwt(x) => x.runs(),
            Engine::RIndex(x) => x.rlbwt().runs(),
            Engine::SrIndex(x) => x.rlbwt().runs(),
            Engine::RCsa(x) => x.psi_runs().runs(),
            Engine::SrCsa(x) => x.psi_runs().runs(),
        }
    }

    /// Samples kept for locating, if the kind locates.
    pub fn kept_samples(&self) -> Option<usize> {
        match &self.engine {
            Engine::Rlbwt(_) => None,
            Engine::RIndex(x) => Some(x.samples().samples().len()),
            Engine::SrIndex(x) => Some(x.kept()),
            Engine::RCsa(x) => Some(x.samples().samples().len()),
            Engine::SrCsa(x) => Some(x.kept()),
        }
    }

    pub fn engine_rindex(&self) -> Option<&RIndex> {
        match &self.engine {
            Engine::RIndex(x) => Some(x),
            _ => None,
        }
    }

    pub fn engine_srindex(&self) -> Option<&SrIndex> {
        match &self.engine {
            Engine::SrIndex(x) => Some(x),
            _ => None,
        }
    }

    pub fn engine_rcsa(&self) -> Option<&RCsa> {
        match &self.engine {
            Engine::RCsa(x) => Some(x),
            _ => None,
        }
    }

    pub fn engine_srcsa(&self) -> Option<&SrCsa> {
        match &self.engine {
            Engine::SrCsa(x) => Some(x),
            _ => None,
        }
    }

    fn encode(&self, pattern: &[u8]) -> Result<Option<Vec<u8>>> {
        if pattern.is_empty() {
            return Err(Error::InvalidParameter("empty pattern".into()));
        }
        Ok(self.alphabet.encode(pattern))
    }

    /// Suffix-array range of `pattern` (0-based rows), `None` if absent.
    pub fn count_range(&self, pattern: &[u8]) -> Result<Option<SaRange>> {
        let Some(p) = self.encode(pattern)? else {
            return Ok(None);
        };
        Ok(match &self.engine {
            Engine::Rlbwt(x) => x.count(&p),
            Engine::RIndex(x) => x.rlbwt().count(&p),
            Engine::SrIndex(x) => x.rlbwt().count(&p),
            Engine::RCsa(x) => x.psi_runs().count(&p),
            Engine::SrCsa(x) => x.psi_runs().count(&p),
        })
    }

    pub fn count(&self, pattern: &[u8]) -> Result<usize> {
        Ok(self.count_range(pattern)?.map_or(0, |r| r.len()))
    }

    /// Range plus the toehold (`SA[ep]` for BWT kinds, `SA[sp]` for CSA
    /// kinds), 0-based.
    pub fn count_toehold(
        &self,
        pattern: &[u8],
        trace: &mut QueryTrace,
    ) -> Result<Option<(SaRange, usize)>> {
        let Some(p) = self.encode(pattern)? else {
            return Ok(None);
        };
        match &self.engine {
            Engine::Rlbwt(_) => Err(self.no_locate()),
            Engine::RIndex(x) => Ok(x.count_toehold(&p, trace)),
            Engine::SrIndex(x) => Ok(x.count_toehold(&p, trace)),
            Engine::RCsa(x) => Ok(x.count_toehold(&p, trace)),
            Engine::SrCsa(x) => Ok(x.count_toehold(&p, trace)),
        }
    }

    fn no_locate(&self) -> Error {
        Error::InvalidParameter(format!("{} indexes only count", self.kind()))
    }

    /// 1-based occurrence positions in the kind's natural order, with step
    /// counters.
    pub fn locate_traced(&self, pattern: &[u8]) -> Result<(Vec<usize>, QueryTrace)> {
        let mut trace = QueryTrace::default();
        let Some(p) = self.encode(pattern)? else {
            if !self.kind().can_locate() {
                return Err(self.no_locate());
            }
            return Ok((Vec::new(), trace));
        };
        let mut out = match &self.engine {
            Engine::Rlbwt(_) => return Err(self.no_locate()),
            Engine::RIndex(x) => x.locate_traced(&p, &mut trace),
            Engine::SrIndex(x) => x.locate_traced(&p, &mut trace),
            Engine::RCsa(x) => x.locate_traced(&p, &mut trace),
            Engine::SrCsa(x) => x.locate_traced(&p, &mut trace),
        };
        for v in &mut out {
            *v += 1;
        }
        Ok((out, trace))
    }

    /// 1-based occurrence positions; ascending when `sorted`.
    pub fn locate(&self, pattern: &[u8], sorted: bool) -> Result<Vec<usize>> {
        let (mut out, _) = self.locate_traced(pattern)?;
        if sorted {
            out.sort_unstable();
        }
        Ok(out)
    }

    pub fn sections(&self) -> Vec<Section> {
        let mut out = vec![Section::new("alphabet", Role::Counting, &self.alphabet)];
        match &self.engine {
            Engine::Rlbwt(x) => x.push_sections(&mut out),
            Engine::RIndex(x) => x.push_sections(&mut out),
            Engine::SrIndex(x) => x.push_sections(&mut out),
            Engine::RCsa(x) => x.push_sections(&mut out),
            Engine::SrCsa(x) => x.push_sections(&mut out),
        }
        out
    }

    pub fn from_sections(params: BuildParams, map: &SectionMap<'_>) -> Result<Self> {
        params.validate()?;
        let alphabet: Alphabet = map.get("alphabet")?;
        let engine = match params.kind {
            IndexKind::Rlbwt => Engine::Rlbwt(RunLengthBwt::from_sections(map)?),
            IndexKind::RIndex => Engine::RIndex(RIndex::from_sections(map)?),
            IndexKind::SrIndex => {
                Engine::SrIndex(SrIndex::from_sections(map, params.s, params.variant)?)
            }
            IndexKind::RCsa => Engine::RCsa(RCsa::from_sections(map)?),
            IndexKind::SrCsa => {
                Engine::SrCsa(SrCsa::from_sections(map, params.s, params.variant)?)
            }
        };
        let me = Self {
            params,
            alphabet,
            engine,
        };
        let engine_sigma = match &me.engine {
            Engine::Rlbwt(x) => x.sigma(),
            Engine::RIndex(x) => x.rlbwt().sigma(),
            Engine::SrIndex(x) => x.rlbwt().sigma(),
            Engine::RCsa(x) => x.psi_runs().sigma(),
            Engine::SrCsa(x) => x.psi_runs().sigma(),
        };
        if engine_sigma != me.alphabet.sigma() {
            return Err(Error::Format("alphabet size disagrees with the index".into()));
        }
        let block = match &me.engine {
            Engine::RCsa(x) => Some(x.psi_runs().block_size()),
            Engine::SrCsa(x) => Some(x.psi_runs().block_size()),
            _ => None,
        };
        if block.is_some_and(|b| b != me.params.block) {
            return Err(Error::Format("block size disagrees with the index".into()));
        }
        Ok(me)
    }

    /// Corrupts one locating sample. Exists so verification can be shown to
    /// catch a broken index.
    #[doc(hidden)]
    pub fn perturb(&mut self) {
        match &mut self.engine {
            Engine::Rlbwt(_) => {}
            Engine::RIndex(x) => x.perturb(),
            Engine::SrIndex(x) => x.perturb(),
            Engine::RCsa(x) => x.perturb(),
            Engine::SrCsa(x) => x.perturb(),
        }
    }
}
