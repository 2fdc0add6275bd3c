//! Spin-order observables and classification of ground states.
//!
//! Order is read off the chain path `0, 1, .., n-1` of site indices: the two
//! perfectly alternating strings are the antiferromagnetic classes `AF1`
//! (starting spin up) and `AF2` (starting spin down); everything else,
//! including any degenerate ground state, is `Residual`.

use crate::encoding::GroundStateResult;
use crate::error::{Error, Result};
use crate::lattice::{LatticeGraph, Spin, SpinPattern};

/// The three order classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Af1,
    Af2,
    Residual,
}

/// Classification of one ground-state search result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderLabel {
    pub kind: OrderKind,
    /// Name of the matching 2D reference pattern, when one was requested
    /// and found.
    pub pattern_name: Option<String>,
    /// Whether the underlying ground state was degenerate.
    pub degenerate: bool,
}

/// Mean correlation `s_i s_{i+1}` along consecutive site indices.
///
/// `-1` for a perfectly alternating string, `+1` for a ferromagnetic one.
pub fn chain_correlation(s: &[Spin]) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::invalid("chain correlation needs at least 2 spins"));
    }
    check_spins(s)?;
    let sum: i32 = s.windows(2).map(|w| i32::from(w[0] * w[1])).sum();
    Ok(f64::from(sum) / (s.len() - 1) as f64)
}

/// Mean correlation `s_i s_j` over the edges of `lattice`.
pub fn lattice_correlation(s: &[Spin], lattice: &LatticeGraph) -> Result<f64> {
    if s.len() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_sites(),
            actual: s.len(),
        });
    }
    check_spins(s)?;
    let sum: i32 = lattice
        .edges()
        .iter()
        .map(|&(i, j)| i32::from(s[i] * s[j]))
        .sum();
    Ok(f64::from(sum) / lattice.edges().len() as f64)
}

/// Spin of site 0, which distinguishes `AF1` from `AF2`.
pub fn parity(s: &[Spin]) -> Result<Spin> {
    check_spins(s)?;
    s.first().copied().ok_or_else(|| Error::invalid("empty spin string"))
}

/// True when every consecutive pair of spins is anti-aligned.
pub fn is_alternating(s: &[Spin]) -> bool {
    s.windows(2).all(|w| w[0] == -w[1])
}

/// Classifies a ground state as `AF1`, `AF2`, or `Residual`.
///
/// Degenerate results are `Residual` regardless of their representative:
/// a state with an energy-tied partner carries no unambiguous order. The
/// alternation test is structural (exact string comparison), not a threshold
/// on the correlation value.
pub fn classify_order(result: &GroundStateResult) -> OrderLabel {
    if result.degenerate {
        return OrderLabel { kind: OrderKind::Residual, pattern_name: None, degenerate: true };
    }
    let s = &result.spin_string;
    let kind = if is_alternating(s) {
        if s[0] == 1 { OrderKind::Af1 } else { OrderKind::Af2 }
    } else {
        OrderKind::Residual
    };
    OrderLabel { kind, pattern_name: None, degenerate: false }
}

/// Matches a spin string against a template library, up to a global flip.
///
/// Returns the name of the first matching template, or `None`. Templates
/// typically come from [`LatticeGraph::reference_patterns`].
pub fn detect_2d_pattern<'a>(
    s: &[Spin],
    lattice: &LatticeGraph,
    templates: &'a [SpinPattern],
) -> Result<Option<&'a str>> {
    if s.len() != lattice.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_sites(),
            actual: s.len(),
        });
    }
    check_spins(s)?;
    for t in templates {
        if t.spins.len() != s.len() {
            continue;
        }
        let same = t.spins.iter().zip(s).all(|(&a, &b)| a == b);
        let flipped = t.spins.iter().zip(s).all(|(&a, &b)| a == -b);
        if same || flipped {
            return Ok(Some(&t.name));
        }
    }
    Ok(None)
}

fn check_spins(s: &[Spin]) -> Result<()> {
    if s.iter().any(|&v| v != 1 && v != -1) {
        return Err(Error::invalid("spin entries must be +1 or -1"));
    }
    Ok(())
}
