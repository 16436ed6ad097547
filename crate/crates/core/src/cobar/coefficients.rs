use rayon::prelude::*;

use super::complex::Cell;
use crate::coalg::Comodule;
use crate::error::Result;
use crate::exactlin::{cohomology_dims, sign, Matrix};

/// The cobar complex `C_+^{⊗i} ⊗ M` computing `Ext_C(k, M)`; basis
/// `x ⊗ m_b` at `pos(x) * dim M + b`.
#[derive(Clone, Debug)]
pub struct CoefficientComplex {
    pub dims: Vec<usize>,
    /// `maps[i]` goes from degree `i` to degree `i + 1`.
    pub maps: Vec<Matrix>,
}

impl CoefficientComplex {
    pub fn build(m: &Comodule, imax: usize) -> Result<Self> {
        let c = m.base();
        c.require_conilpotent()?;
        let field = c.field();
        let reduced = c.reduced_comul();
        let n = reduced.len();
        let dm = m.dim();
        let coaction: Vec<Vec<(usize, usize, crate::exactlin::Scalar)>> = (0..dm)
            .map(|b| m.coaction(b).iter().filter_map(|(a, j, s)| Some((c.reduced_position(*a)?, *j, s.clone()))).collect())
            .collect();
        let cells: Vec<Cell> = (0..=imax + 1).map(|i| Cell::full(n, i)).collect();
        let maps = (0..=imax)
            .into_par_iter()
            .map(|i| {
                let (src, dst) = (&cells[i], &cells[i + 1]);
                let last = sign(field, i);
                let mut trip = Vec::new();
                let mut buf = vec![0u32; i + 1];
                for k in 0..src.len() {
                    let t = src.tuple(k);
                    for s in 0..i {
                        let sg = sign(field, s);
                        buf[..s].copy_from_slice(&t[..s]);
                        buf[s + 2..].copy_from_slice(&t[s + 1..]);
                        for (a, b, v) in &reduced[t[s] as usize] {
                            buf[s] = *a as u32;
                            buf[s + 1] = *b as u32;
                            let row = dst.position(&buf).unwrap();
                            for mb in 0..dm {
                                trip.push((row * dm + mb, k * dm + mb, v * &sg));
                            }
                        }
                    }
                    buf[..i].copy_from_slice(t);
                    for (mb, terms) in coaction.iter().enumerate() {
                        for (a, j, v) in terms {
                            buf[i] = *a as u32;
                            let row = dst.position(&buf).unwrap();
                            trip.push((row * dm + j, k * dm + mb, v * &last));
                        }
                    }
                }
                Matrix::from_triplets(field, dst.len() * dm, src.len() * dm, trip)
            })
            .collect();
        Ok(CoefficientComplex { dims: cells[..=imax].iter().map(|c| c.len() * dm).collect(), maps })
    }

    pub fn d_squared_vanishes(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn cohomology(&self) -> Vec<usize> {
        cohomology_dims(&self.dims, &self.maps)
    }
}

/// `dim Ext^i_C(k, M)` for `i ≤ imax`.
pub fn cobar_with_coefficients(m: &Comodule, imax: usize) -> Result<Vec<usize>> {
    Ok(CoefficientComplex::build(m, imax)?.cohomology())
}
