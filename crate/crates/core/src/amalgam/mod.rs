//! Pomonoid amalgams `[U; S₁, S₂]`: words of the free product with the
//! E/S/M/O steps that generate the order of `S₁ ∗_U S₂`, and the tower of
//! free extensions `Y_n` whose direct limit is the amalgamated free product.

mod tower;
mod words;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pomonoid::{Pomonoid, PomonoidMorphism};
use crate::sposet::same_actor;

pub use tower::{
    build_tower, embeddability_report, size_guard_from_env, tower_vs_words, Embeddability, EmbeddabilityReport, LevelFlags,
    Refutation, Tower, TowerLevel, WordConsistency, DEFAULT_SIZE_GUARD,
};
pub use words::{replay_step, replay_trace, Letter, Reachability, StepKind, StepRecord, Word, WordSearch, WordVerdict};

/// A core `U` order-embedded into two factors.
#[derive(Clone, Debug)]
pub struct PoAmalgam {
    core: Arc<Pomonoid>,
    phi: [PomonoidMorphism; 2],
    tables: [words::Divisions; 2],
}

impl PoAmalgam {
    pub fn new(phi1: PomonoidMorphism, phi2: PomonoidMorphism) -> Result<PoAmalgam> {
        if !same_actor(&phi1.source, &phi2.source) {
            return Err(Error::ActorMismatch("the two embeddings start from different cores".into()));
        }
        for (i, phi) in [&phi1, &phi2].into_iter().enumerate() {
            if !phi.flags.order_embedding {
                return Err(Error::NotOrderEmbedding(format!("the embedding into factor {} is not an order embedding", i + 1)));
            }
        }
        let tables = [words::Divisions::new(&phi1), words::Divisions::new(&phi2)];
        Ok(PoAmalgam {
            core: phi1.source.clone(),
            phi: [phi1, phi2],
            tables,
        })
    }

    pub fn core(&self) -> &Arc<Pomonoid> {
        &self.core
    }

    /// Factor `S_{j+1}` for `j ∈ {0, 1}`.
    pub fn factor(&self, j: usize) -> &Arc<Pomonoid> {
        &self.phi[j].target
    }

    /// `φ_{j+1}: U → S_{j+1}`.
    pub fn embedding(&self, j: usize) -> &PomonoidMorphism {
        &self.phi[j]
    }

    /// `u ∈ U` written in factor `j`.
    pub fn core_letter(&self, j: usize, u: usize) -> usize {
        self.phi[j].apply(u)
    }

    /// The element of `U` whose image in factor `j` is `s`, if any.
    pub fn core_preimage(&self, j: usize, s: usize) -> Option<usize> {
        self.phi[j].preimage(s)
    }
}
