//! Geometric sign-region counter for separable eigenfunctions.
//!
//! Independent of the combinatorial cell counting: the function
//! u = f(r) g(angles) is sampled on a product grid over an annulus, cells
//! are joined by union-find when they share a face and a nonzero sign, and
//! the number of components is read off. The resolution is doubled until
//! two successive runs agree; disagreement after three doublings is an
//! error rather than a guess.
//!
//! The grid starts at the caller's inner exclusion radius. Regions that
//! poke inside it keep their outer part, so the count is unchanged as long
//! as no sign region lies entirely inside the excluded ball, which is
//! exactly the regime the exclusion radius is chosen for. There are no
//! adjacency links across the polar axis in d = 3: axially symmetric
//! factors connect across the pole through the phi links already, and all
//! other factors vanish on the axis.

use crate::error::{Error, Result};
use crate::nodal::sphere::{assoc_legendre, decode_m_index, gegenbauer};
use crate::radial::RadialEigenfunction;
use std::f64::consts::PI;

pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "grid too large for 32-bit cell ids");
        UnionFind { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        // path halving
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] { (ra, rb) } else { (rb, ra) };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
    }
}

fn interp(radii: &[f64], values: &[f64], r: f64) -> f64 {
    match radii.binary_search_by(|p| p.partial_cmp(&r).unwrap()) {
        Ok(i) => values[i],
        Err(0) => values[0],
        Err(i) if i == radii.len() => values[i - 1],
        Err(i) => {
            let t = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
            values[i - 1] + t * (values[i] - values[i - 1])
        }
    }
}

fn signs(samples: &[f64]) -> Vec<i8> {
    let thr = 1e-9 * samples.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    samples
        .iter()
        .map(|&v| {
            if v.abs() <= thr {
                0
            } else if v > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

fn count_components_product(sign_axes: &[Vec<i8>], wrap: &[bool]) -> u64 {
    let dims: Vec<usize> = sign_axes.iter().map(Vec::len).collect();
    let total: usize = dims.iter().product();
    let mut sign = vec![0i8; total];
    // row-major over up to three axes
    let stride: Vec<usize> = {
        let mut s = vec![1; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    for (idx, sl) in sign.iter_mut().enumerate() {
        let mut p: i8 = 1;
        let mut rem = idx;
        for (ax, &st) in stride.iter().enumerate() {
            let coord = rem / st;
            rem %= st;
            p *= sign_axes[ax][coord];
            if p == 0 {
                break;
            }
        }
        *sl = p;
    }
    let mut uf = UnionFind::new(total);
    for idx in 0..total {
        if sign[idx] == 0 {
            continue;
        }
        let mut rem = idx;
        for (ax, &st) in stride.iter().enumerate() {
            let coord = rem / st;
            rem %= st;
            let neighbor = if coord + 1 < dims[ax] {
                idx + st
            } else if wrap[ax] && dims[ax] > 2 {
                idx - coord * st // wrap to coord 0
            } else {
                continue;
            };
            if sign[neighbor] == sign[idx] {
                uf.union(idx as u32, neighbor as u32);
            }
        }
    }
    let mut seen = vec![false; total];
    let mut count = 0u64;
    for (idx, &s) in sign.iter().enumerate().take(total) {
        if s == 0 {
            continue;
        }
        let root = uf.find(idx as u32) as usize;
        if !seen[root] {
            seen[root] = true;
            count += 1;
        }
    }
    count
}

fn radial_signs(rad: &RadialEigenfunction, r_inner: f64, r_outer: f64, nr: usize) -> Vec<i8> {
    let dr = (r_outer - r_inner) / nr as f64;
    let samples: Vec<f64> = (0..nr)
        .map(|i| interp(&rad.radii, &rad.values, r_inner + (i as f64 + 0.5) * dr))
        .collect();
    // scale against the full profile so a cell in a shallow lobe still counts
    let thr = 1e-9 * rad.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    samples.iter().map(|&v| if v.abs() <= thr { 0 } else if v > 0.0 { 1 } else { -1 }).collect()
}

fn count_at(
    rad: &RadialEigenfunction,
    m_index: u64,
    r_inner: f64,
    r_outer: f64,
    res: (usize, usize, usize),
) -> Result<u64> {
    let d = rad.dim;
    let (nr, nt, np) = res;
    let sr = radial_signs(rad, r_inner, r_outer, nr);
    match d {
        2 => {
            let (m, sine) = decode_m_index(rad.ell, m_index, 2)?;
            let g: Vec<f64> = (0..nt)
                .map(|k| {
                    let a = f64::from(m) * (k as f64 + 0.5) * 2.0 * PI / nt as f64;
                    if sine { a.sin() } else { a.cos() }
                })
                .collect();
            Ok(count_components_product(&[sr, signs(&g)], &[false, true]))
        }
        3 => {
            let (m, sine) = decode_m_index(rad.ell, m_index, 3)?;
            let gt: Vec<f64> = (0..nt)
                .map(|j| assoc_legendre(rad.ell, m, (((j as f64 + 0.5) * PI) / nt as f64).cos()))
                .collect();
            let gp: Vec<f64> = (0..np)
                .map(|k| {
                    let a = f64::from(m) * (k as f64 + 0.5) * 2.0 * PI / np as f64;
                    if m == 0 {
                        1.0
                    } else if sine {
                        a.sin()
                    } else {
                        a.cos()
                    }
                })
                .collect();
            Ok(count_components_product(&[sr, signs(&gt), signs(&gp)], &[false, false, true]))
        }
        _ => {
            if m_index != 1 {
                return Err(Error::domain(format!(
                    "only the axially symmetric slice is supported for d = {d}; use m_index = 1"
                )));
            }
            let alpha = (f64::from(d) - 2.0) / 2.0;
            let gt: Vec<f64> = (0..nt)
                .map(|j| gegenbauer(rad.ell, alpha, (((j as f64 + 0.5) * PI) / nt as f64).cos()))
                .collect();
            Ok(count_components_product(&[sr, signs(&gt)], &[false, false]))
        }
    }
}

/// Count the sign regions of f(r) g(angles) over the annulus
/// r_inner < r < r_outer by flood fill, refining until stable.
pub fn grid_nodal_count(
    rad: &RadialEigenfunction,
    m_index: u64,
    r_inner: f64,
    r_outer: f64,
) -> Result<u64> {
    if !(r_inner >= 0.0 && r_outer > r_inner) {
        return Err(Error::domain(format!(
            "need 0 <= r_inner < r_outer, got [{r_inner}, {r_outer}]"
        )));
    }
    if rad.dim < 2 {
        return Err(Error::domain("grid counting requires d >= 2".to_string()));
    }
    let mut res = match rad.dim {
        2 => (256usize, 1024usize, 1usize),
        3 => (32, 48, 96),
        _ => (256, 512, 1),
    };
    let mut prev: Option<u64> = None;
    let mut history = Vec::new();
    for _ in 0..4 {
        let c = count_at(rad, m_index, r_inner, r_outer, res)?;
        history.push(c);
        if prev == Some(c) {
            return Ok(c);
        }
        prev = Some(c);
        res = (res.0 * 2, res.1 * 2, if rad.dim == 3 { res.2 * 2 } else { res.2 });
    }
    Err(Error::convergence(format!(
        "sign-region count did not stabilize under refinement: counts {history:?} \
         for ell = {}, m_index = {m_index}, n = {}",
        rad.ell, rad.n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{RadialGrid, Spacing};

    // hand-built profile with prescribed sign structure, bypassing the solver
    fn synthetic(ell: u32, dim: u32, f: impl Fn(f64) -> f64, r_max: f64, zeros: usize) -> RadialEigenfunction {
        let grid = RadialGrid::new(1e-3, r_max, 4000, Spacing::Uniform).unwrap();
        let radii: Vec<f64> = (0..4000).map(|i| 1e-3 + (r_max - 1e-3) * i as f64 / 3999.0).collect();
        let values: Vec<f64> = radii.iter().map(|&r| f(r)).collect();
        RadialEigenfunction {
            ell,
            n: zeros as u32 + 1,
            lambda: 0.0,
            dim,
            grid,
            radii,
            values,
            zero_count: zeros,
            degenerate: false,
        }
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(1, 2);
        uf.union(4, 5);
        assert_eq!(uf.find(0), uf.find(2));
        assert_ne!(uf.find(0), uf.find(3));
        assert_ne!(uf.find(3), uf.find(5));
        assert_eq!(uf.find(4), uf.find(5));
    }

    #[test]
    fn planar_wedges_and_annuli() {
        // f = sin(pi r) on (0, 3): radial bands (0,1), (1,2), (2,3)
        let rad = synthetic(2, 2, |r| (PI * r).sin(), 3.0, 2);
        // ell = 2 cosine: 4 wedges per band
        assert_eq!(grid_nodal_count(&rad, 1, 0.05, 2.95).unwrap(), 12);
        // sine flavor identical count
        assert_eq!(grid_nodal_count(&rad, 2, 0.05, 2.95).unwrap(), 12);

        // axially symmetric: 3 full annuli, needs the wraparound links
        let rad0 = synthetic(0, 2, |r| (PI * r).sin(), 3.0, 2);
        assert_eq!(grid_nodal_count(&rad0, 1, 0.05, 2.95).unwrap(), 3);
    }

    #[test]
    fn wraparound_does_not_split_cells() {
        // cos(theta) with constant radial factor: exactly 2 half-disk
        // regions; a missing wrap link would report 3
        let rad = synthetic(1, 2, |_| 1.0, 2.0, 0);
        assert_eq!(grid_nodal_count(&rad, 1, 0.05, 1.95).unwrap(), 2);
    }

    #[test]
    fn spherical_product_counts() {
        // d = 3, ell = 3, |m| = 2 cosine (m_index 4): 4 wedges x 2 strips
        let rad = synthetic(3, 3, |r| (PI * r).sin(), 3.0, 2);
        assert_eq!(grid_nodal_count(&rad, 4, 0.05, 2.95).unwrap(), 3 * 8);
        // zonal m = 0: 4 latitude bands
        assert_eq!(grid_nodal_count(&rad, 1, 0.05, 2.95).unwrap(), 3 * 4);
        // sectoral |m| = 3 (m_index 7): 6 wedges, 1 strip
        assert_eq!(grid_nodal_count(&rad, 7, 0.05, 2.95).unwrap(), 3 * 6);
    }

    #[test]
    fn zonal_slice_higher_dimensions() {
        let rad = synthetic(2, 5, |r| (PI * r).sin(), 3.0, 2);
        assert_eq!(grid_nodal_count(&rad, 1, 0.05, 2.95).unwrap(), 3 * 3);
        assert!(grid_nodal_count(&rad, 2, 0.05, 2.95).is_err());
    }

    #[test]
    fn rejects_bad_windows() {
        let rad = synthetic(1, 2, |_| 1.0, 2.0, 0);
        assert!(grid_nodal_count(&rad, 1, -0.1, 1.0).is_err());
        assert!(grid_nodal_count(&rad, 1, 1.0, 0.5).is_err());
    }
}
