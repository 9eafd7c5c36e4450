//! Shared fixtures for the benchmark targets.

use pleijel_core::potential::RadialPotential;
use pleijel_core::radial::RadialGrid;

pub fn oscillator_2d() -> (RadialPotential, RadialGrid) {
    let pot = RadialPotential::harmonic();
    let grid = RadialGrid::default_for(&pot, 100.0).expect("grid for the oscillator");
    (pot, grid)
}

pub fn hydrogen_3d() -> (RadialPotential, RadialGrid) {
    let pot = RadialPotential::coulomb();
    let grid = RadialGrid::default_for(&pot, -1.0 / 100.0).expect("grid for hydrogen");
    (pot, grid)
}
