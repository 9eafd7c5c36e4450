//! Assembly of the full spectrum below a cutoff from the per-sector radial
//! solves, plus the counting function and Courant labels built on it.
//!
//! The angular sweep stops at degree_bound(cutoff) + 2: sectors past the
//! degree bound have their effective minimum above the cutoff, so their
//! bottom eigenvalue is too. The two extra sectors are solved anyway and
//! asserted empty, which turns that inequality into a runtime check.

use crate::error::{Error, Result};
use crate::potential::RadialPotential;
use crate::radial::{eigenvalues_below, RadialGrid, SpectralLine};
use rayon::prelude::*;

/// Relative clustering / counting tolerance on eigenvalues.
pub const CLUSTER_TOL: f64 = 1e-7;

fn cluster_tol(lambda: f64) -> f64 {
    CLUSTER_TOL * lambda.abs().max(1.0)
}

/// A degenerate level: all lines whose eigenvalues agree within the
/// clustering tolerance.
#[derive(Debug, Clone)]
pub struct Level {
    /// Multiplicity-weighted mean of the member eigenvalues.
    pub lambda: f64,
    pub total_multiplicity: u64,
    /// Indices into `SpectrumTable::lines`, sorted by (ell, n).
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SpectrumTable {
    /// All lines with lambda < cutoff, ascending in lambda.
    pub lines: Vec<SpectralLine>,
    pub cutoff: f64,
    pub ell_max: u32,
    pub dim: u32,
    levels: Vec<Level>,
}

/// One concrete eigenfunction of the full operator: a radial line paired
/// with one of its multiplicity-many angular factors.
#[derive(Debug, Clone, Copy)]
pub struct BasisElement {
    pub ell: u32,
    /// 1-based index into the angular basis of the (ell, d) sector.
    pub m_index: u64,
    /// Radial index (1-based, n - 1 radial zeros).
    pub n: u32,
    pub lambda: f64,
    /// Canonical Courant label: 1-based position in the lambda-ordered
    /// basis, degenerate levels ordered by (ell, n, m_index). Always
    /// >= counting(lambda) + 1.
    pub courant_index: u64,
}

/// Assemble with the scheme/extent defaults for this potential.
pub fn assemble(pot: &RadialPotential, d: u32, cutoff: f64) -> Result<SpectrumTable> {
    let grid = RadialGrid::default_for(pot, cutoff)?;
    assemble_with(pot, d, cutoff, &grid)
}

/// Assemble on an explicit grid.
pub fn assemble_with(
    pot: &RadialPotential,
    d: u32,
    cutoff: f64,
    grid: &RadialGrid,
) -> Result<SpectrumTable> {
    let p = pot.degree_bound(cutoff, d)?;
    let ell_max = p + 2;
    let per_sector: Vec<Vec<SpectralLine>> = (0..=ell_max)
        .into_par_iter()
        .map(|ell| eigenvalues_below(pot, ell, d, cutoff, grid))
        .collect::<Result<_>>()?;
    for (ell, lines) in per_sector.iter().enumerate() {
        if ell as u32 > p && !lines.is_empty() {
            return Err(Error::consistency(format!(
                "sector ell = {ell} beyond the degree bound {p} produced {} eigenvalues below {cutoff}",
                lines.len()
            )));
        }
    }
    let mut lines: Vec<SpectralLine> = per_sector.into_iter().flatten().collect();
    lines.sort_by(|x, y| {
        x.lambda
            .partial_cmp(&y.lambda)
            .unwrap()
            .then(x.ell.cmp(&y.ell))
            .then(x.n.cmp(&y.n))
    });
    let levels = build_levels(&lines);
    Ok(SpectrumTable { lines, cutoff, ell_max, dim: d, levels })
}

fn build_levels(lines: &[SpectralLine]) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let start_new = match levels.last() {
            None => true,
            Some(lv) => {
                let last = lines[*lv.members.last().unwrap()].lambda;
                (line.lambda - last) > cluster_tol(line.lambda)
            }
        };
        if start_new {
            levels.push(Level { lambda: 0.0, total_multiplicity: 0, members: Vec::new() });
        }
        levels.last_mut().unwrap().members.push(i);
    }
    for lv in &mut levels {
        lv.members.sort_by_key(|&i| (lines[i].ell, lines[i].n));
        let mut wsum = 0.0;
        let mut mult = 0u64;
        for &i in &lv.members {
            wsum += lines[i].lambda * lines[i].multiplicity as f64;
            mult += lines[i].multiplicity;
        }
        lv.lambda = wsum / mult as f64;
        lv.total_multiplicity = mult;
    }
    levels
}

impl SpectrumTable {
    /// Distinct levels after clustering, ascending.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Counting function N(lambda): total multiplicity strictly below
    /// lambda, where "strictly" uses the clustering tolerance so an
    /// eigenvalue is never counted against itself. Energies beyond the
    /// assembled cutoff are a range error, not a silent zero.
    pub fn counting(&self, lambda: f64) -> Result<u64> {
        if lambda > self.cutoff + cluster_tol(self.cutoff) {
            return Err(Error::domain(format!(
                "counting at lambda = {lambda} beyond the assembled cutoff {}",
                self.cutoff
            )));
        }
        let edge = lambda - cluster_tol(lambda);
        Ok(self
            .lines
            .iter()
            .take_while(|l| l.lambda < edge)
            .map(|l| l.multiplicity)
            .sum())
    }

    /// Minimal Courant label shared by every member of the level at this
    /// energy: counting(lambda) + 1.
    pub fn courant_label(&self, lambda: f64) -> Result<u64> {
        Ok(self.counting(lambda)? + 1)
    }

    /// Enumerate all basis elements with canonical Courant labels:
    /// distinct consecutive labels inside each degenerate level, ordered
    /// by (ell, n, m_index).
    pub fn basis(&self) -> Vec<BasisElement> {
        let mut out = Vec::new();
        let mut running = 0u64;
        for lv in &self.levels {
            for &i in &lv.members {
                let line = &self.lines[i];
                for m_index in 1..=line.multiplicity {
                    running += 1;
                    out.push(BasisElement {
                        ell: line.ell,
                        m_index,
                        n: line.n,
                        lambda: line.lambda,
                        courant_index: running,
                    });
                }
            }
        }
        out
    }
}
