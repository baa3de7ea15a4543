//! Blockade-constrained Hilbert space: independent sets of a graph stored as
//! bitmasks (bit `i` set means site `i` is in `|1>`).

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Partition};
use crate::scalar::{Real, C};
use crate::states::{BasisTag, StateVector};

/// Default cap on the number of sites.
pub const DEFAULT_SITE_CAP: usize = 32;

/// Configuration bitmask.
pub type Config = u32;

/// Sorted list of the independent-set configurations of a graph.
#[derive(Clone, Debug)]
pub struct ConstrainedBasis {
    graph: BipartiteGraph,
    configs: Vec<Config>,
    neighbor_masks: Vec<Config>,
}

/// Enumerates all blockade-satisfying configurations with the default cap.
pub fn enumerate_constrained_basis(graph: &BipartiteGraph) -> Result<ConstrainedBasis> {
    ConstrainedBasis::with_cap(graph, DEFAULT_SITE_CAP)
}

/// Per-site masks of graph neighbours.
pub fn neighbor_masks(graph: &BipartiteGraph) -> Vec<Config> {
    let mut masks = vec![0; graph.n_vertices()];
    for &(u, v) in graph.edges() {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

impl ConstrainedBasis {
    pub fn new(graph: &BipartiteGraph) -> Result<Self> {
        enumerate_constrained_basis(graph)
    }

    pub fn with_cap(graph: &BipartiteGraph, cap: usize) -> Result<Self> {
        let n = graph.n_vertices();
        if n > cap.min(DEFAULT_SITE_CAP) {
            return Err(Error::Resource(format!(
                "{n} sites exceeds the constrained-basis cap of {}",
                cap.min(DEFAULT_SITE_CAP)
            )));
        }
        let neighbor_masks = neighbor_masks(graph);
        let mut configs = Vec::new();
        // Descend from the highest site, trying 0 before 1, so the output is
        // already in ascending integer order.
        fn descend(site: usize, config: Config, forbidden: Config, masks: &[Config], out: &mut Vec<Config>) {
            if site == 0 {
                out.push(config);
                return;
            }
            let s = site - 1;
            descend(s, config, forbidden, masks, out);
            if forbidden & (1 << s) == 0 {
                descend(s, config | (1 << s), forbidden | masks[s], masks, out);
            }
        }
        descend(n, 0, 0, &neighbor_masks, &mut configs);
        Ok(Self { graph: graph.clone(), configs, neighbor_masks })
    }

    /// Wraps configurations produced elsewhere (the brute-force oracle).
    pub(crate) fn from_configs(graph: &BipartiteGraph, configs: Vec<Config>) -> Self {
        Self { graph: graph.clone(), configs, neighbor_masks: neighbor_masks(graph) }
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn n_sites(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[Config] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> Config {
        self.configs[index]
    }

    pub fn neighbor_masks(&self) -> &[Config] {
        &self.neighbor_masks
    }

    /// Whether `config` is an independent set of the graph.
    pub fn is_allowed(&self, config: Config) -> bool {
        let mut bits = config;
        while bits != 0 {
            let s = bits.trailing_zeros() as usize;
            if config & self.neighbor_masks[s] != 0 {
                return false;
            }
            bits &= bits - 1;
        }
        true
    }

    /// Position of `config` in basis order, `None` if it is blockaded.
    pub fn index_of(&self, config: u64) -> Result<Option<usize>> {
        let n = self.n_sites();
        if n < 64 && config >> n != 0 {
            return Err(Error::Argument(format!("configuration {config:#b} has bits beyond {n} sites")));
        }
        Ok(self.configs.binary_search(&(config as Config)).ok())
    }

    /// Configuration with every site of `side` excited.
    pub fn z2_config(&self, side: Partition) -> Config {
        self.graph.vertices_in(side).iter().fold(0, |acc, &v| acc | (1 << v))
    }

    /// Restricts a full `2^N` state to the constrained space and renormalises.
    /// Returns the projected state and the removed probability weight.
    pub fn project<T: Real>(&self, full: &StateVector<T>) -> Result<(StateVector<T>, T)> {
        let n = self.n_sites();
        if full.tag() != BasisTag::Full || full.dim() != 1usize << n {
            return Err(Error::Argument(format!(
                "expected a full-space state of dimension 2^{n}, got {:?} of dimension {}",
                full.tag(),
                full.dim()
            )));
        }
        let total = full.norm_sqr();
        let amps: Vec<C<T>> = self.configs.iter().map(|&c| full.amplitudes()[c as usize]).collect();
        let kept: T = amps.iter().map(|z| z.norm_sqr()).sum();
        if !(kept > T::zero()) || !(total > T::zero()) {
            return Err(Error::DegenerateState("projection onto the constrained space annihilates the state".into()));
        }
        let scale = kept.sqrt().recip();
        let amps = amps.into_iter().map(|z| z * scale).collect();
        let discarded = ((total - kept) / total).max(T::zero());
        Ok((StateVector::new(BasisTag::Constrained, amps)?, discarded))
    }

    /// Embeds constrained amplitudes into the full `2^N` space (zero elsewhere).
    pub fn embed<T: Real>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        if state.tag() != BasisTag::Constrained || state.dim() != self.dim() {
            return Err(Error::Argument("state is not over this constrained basis".into()));
        }
        let mut full = vec![C::new(T::zero(), T::zero()); 1usize << self.n_sites()];
        for (&c, &a) in self.configs.iter().zip(state.amplitudes()) {
            full[c as usize] = a;
        }
        StateVector::new(BasisTag::Full, full)
    }

    /// Site-ordered binary string (site 0 first).
    pub fn config_string(&self, config: Config) -> String {
        (0..self.n_sites()).map(|s| if config >> s & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// Parses a site-ordered binary string (site 0 first).
    pub fn parse_config(&self, text: &str) -> Result<u64> {
        if text.len() > 64 {
            return Err(Error::Argument("configuration string too long".into()));
        }
        text.chars().enumerate().try_fold(0u64, |acc, (s, ch)| match ch {
            '0' => Ok(acc),
            '1' => Ok(acc | 1 << s),
            _ => Err(Error::Argument(format!("invalid configuration character '{ch}'"))),
        })
    }

    /// Writes the basis as CSV: `index,config` with site-ordered strings.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,config")?;
        for (i, &c) in self.configs.iter().enumerate() {
            writeln!(out, "{i},{}", self.config_string(c))?;
        }
        Ok(())
    }
}

/// Isometry from the complete-bipartite spin sector into the constrained basis.
///
/// Returns `N+1` columns of length `dim`; column `j` is the normalised Dicke
/// state with sector index `j` (see [`crate::operators::SpinSector`]).
pub fn dicke_embedding<T: Real>(basis: &ConstrainedBasis) -> Result<Vec<Vec<T>>> {
    let g = basis.graph();
    let side = match g.kind() {
        crate::graph::GraphKind::CompleteBipartite { side } => side,
        _ => return Err(Error::UnsupportedGraph("Dicke embedding needs a complete bipartite graph".into())),
    };
    let a_mask = basis.z2_config(Partition::A);
    let b_mask = basis.z2_config(Partition::B);
    let sector_dim = 2 * side + 1;
    let mut columns = vec![vec![T::zero(); basis.dim()]; sector_dim];
    for (row, &c) in basis.configs().iter().enumerate() {
        let na = (c & a_mask).count_ones() as usize;
        let nb = (c & b_mask).count_ones() as usize;
        let col = match (na, nb) {
            (0, 0) => 0,
            (n, 0) => n,
            (0, n) => side + n,
            _ => unreachable!("complete bipartite configurations excite at most one side"),
        };
        columns[col][row] = T::one();
    }
    for col in &mut columns {
        let s: T = col.iter().copied().sum();
        let inv = s.sqrt().recip();
        col.iter_mut().for_each(|x| *x *= inv);
    }
    Ok(columns)
}
