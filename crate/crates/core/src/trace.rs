/// Step counters collected while answering a query.
///
/// `max_walk` is the longest run of consecutive LF or Psi steps spent
/// looking for a sample, for any single toehold or occurrence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct QueryTrace {
    pub backward_steps: u64,
    pub lf_steps: u64,
    pub psi_steps: u64,
    /// phi or inverse-phi evaluations whose offset from the mark was nonzero.
    pub phi_steps: u64,
    /// Occurrences read straight from a sample.
    pub sample_reads: u64,
    pub max_walk: u64,
}

impl QueryTrace {
    pub(crate) fn walk(&mut self, steps: u64) {
        self.max_walk = self.max_walk.max(steps);
    }

    pub fn merge(&mut self, other: &QueryTrace) {
        self.backward_steps += other.backward_steps;
        self.lf_steps += other.lf_steps;
        self.psi_steps += other.psi_steps;
        self.phi_steps += other.phi_steps;
        self.sample_reads += other.sample_reads;
        self.max_walk = self.max_walk.max(other.max_walk);
    }

    /// Walk steps of either direction.
    pub fn walk_steps(&self) -> u64 {
        self.lf_steps + self.psi_steps
    }
}
