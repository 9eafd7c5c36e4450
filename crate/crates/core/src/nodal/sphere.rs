//! Angular factors of separable eigenfunctions and their sign-region counts.
//!
//! Real basis indexing per degree, `m_index` starting at 1:
//!   d = 2: 1 -> cos(l theta), 2 -> sin(l theta)    (only 1 when l = 0)
//!   d = 3: 1 -> m = 0; 2k -> |m| = k cosine, 2k+1 -> |m| = k sine
//! Counting functions cover d in {2, 3}; in higher dimensions only the
//! zonal (axially symmetric) slice is supported, through the Gegenbauer
//! evaluation below.

use crate::constants::sh_multiplicity;
use crate::error::{Error, Result};

/// Decode an `m_index` into (|m|, is_sine). Errors outside 1..=multiplicity.
pub fn decode_m_index(ell: u32, m_index: u64, d: u32) -> Result<(u32, bool)> {
    if !(2..=3).contains(&d) {
        return Err(Error::domain(format!(
            "separable angular labels cover d = 2 and d = 3, got d = {d}"
        )));
    }
    let mult = sh_multiplicity(ell, d)?;
    if m_index == 0 || m_index > mult {
        return Err(Error::domain(format!(
            "m_index {m_index} out of range 1..={mult} for degree {ell}, d = {d}"
        )));
    }
    if d == 2 {
        // both labels carry angular frequency ell
        return Ok((ell, m_index == 2));
    }
    if m_index == 1 {
        return Ok((0, false));
    }
    let m = (m_index / 2) as u32;
    Ok((m, m_index % 2 == 1))
}

/// Number of sign regions of the angular factor on the unit sphere.
pub fn angular_cells(ell: u32, m_index: u64, d: u32) -> Result<u64> {
    let (m, _) = decode_m_index(ell, m_index, d)?;
    if ell == 0 {
        return Ok(1);
    }
    if d == 2 {
        return Ok(2 * u64::from(ell)); // 2l arcs of alternating sign
    }
    if m == 0 {
        Ok(u64::from(ell) + 1) // latitude bands between the l zeros of P_l
    } else {
        // 2m meridian wedges times (l - m + 1) latitude strips
        Ok(2 * u64::from(m) * (u64::from(ell) - u64::from(m) + 1))
    }
}

/// Sign regions of the zonal harmonic in any dimension: l + 1 latitude
/// bands, one per interval between consecutive Gegenbauer zeros.
pub fn zonal_cells(ell: u32) -> u64 {
    u64::from(ell) + 1
}

pub fn angular_value_d2(ell: u32, m_index: u64, theta: f64) -> Result<f64> {
    let (m, sine) = decode_m_index(ell, m_index, 2)?;
    let a = f64::from(m) * theta;
    Ok(if sine { a.sin() } else { a.cos() })
}

pub fn angular_value_d3(ell: u32, m_index: u64, theta: f64, phi: f64) -> Result<f64> {
    let (m, sine) = decode_m_index(ell, m_index, 3)?;
    let p = assoc_legendre(ell, m, theta.cos());
    let a = f64::from(m) * phi;
    Ok(p * if sine { a.sin() } else { a.cos() })
}

/// Associated Legendre P_l^m(x) up to a positive multiple: the (2m-1)!!
/// seed is dropped (it overflows long before the recurrence misbehaves and
/// only the sign pattern is consumed here).
pub fn assoc_legendre(ell: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= ell);
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = s.powi(m as i32);
    if ell == m {
        return pmm;
    }
    let fm = f64::from(m);
    let mut pm1 = x * (2.0 * fm + 1.0) * pmm;
    if ell == m + 1 {
        return pm1;
    }
    for l in (m + 2)..=ell {
        let fl = f64::from(l);
        let next = (x * (2.0 * fl - 1.0) * pm1 - (fl + fm - 1.0) * pmm) / (fl - fm);
        pmm = pm1;
        pm1 = next;
    }
    pm1
}

/// Gegenbauer C_l^alpha(x); alpha = (d - 2)/2 gives the zonal harmonic
/// profile on S^{d-1}.
pub fn gegenbauer(ell: u32, alpha: f64, x: f64) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let mut c0 = 1.0;
    let mut c1 = 2.0 * alpha * x;
    for l in 2..=ell {
        let fl = f64::from(l);
        let next = (2.0 * x * (fl + alpha - 1.0) * c1 - (fl + 2.0 * alpha - 2.0) * c0) / fl;
        c0 = c1;
        c1 = next;
    }
    c1
}
