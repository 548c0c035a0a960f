use nalgebra::DMatrix;

use super::bilinear;
use crate::error::{Error, Result};

/// Residual norm below which a vector counts as dependent on its predecessors.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

fn project_out(g: &DMatrix<f64>, v: &mut [f64], basis: &[Vec<f64>]) {
    // two passes keep the result orthogonal to rounding level
    for _ in 0..2 {
        for e in basis {
            let c = bilinear(g, v, e);
            v.iter_mut().zip(e).for_each(|(vi, ei)| *vi -= c * ei);
        }
    }
}

/// Gram-Schmidt against `g`. Nearly dependent inputs are rejected.
pub fn gram_schmidt(g: &DMatrix<f64>, vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        project_out(g, &mut w, &out);
        let norm = bilinear(g, &w, &w).max(0.0).sqrt();
        if norm < PIVOT_TOLERANCE {
            return Err(Error::DependentVectors { residual: norm });
        }
        w.iter_mut().for_each(|x| *x /= norm);
        out.push(w);
    }
    Ok(out)
}

/// A `g`-orthonormal frame whose last vector is `last` (normalised).
///
/// The other vectors come from the coordinate basis, picking at each step the
/// coordinate direction with the largest component orthogonal to what is
/// already chosen.
pub fn orthonormal_frame_ending_with(g: &DMatrix<f64>, last: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = last.len();
    let mut chosen = gram_schmidt(g, &[last.to_vec()])?;
    while chosen.len() < n {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for k in 0..n {
            let mut w = vec![0.0; n];
            w[k] = 1.0;
            project_out(g, &mut w, &chosen);
            let norm = bilinear(g, &w, &w).max(0.0).sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
        }
        let (norm, mut w) = best.expect("dimension is positive");
        if norm < PIVOT_TOLERANCE {
            return Err(Error::DependentVectors { residual: norm });
        }
        w.iter_mut().for_each(|x| *x /= norm);
        chosen.push(w);
    }
    chosen.rotate_left(1);
    Ok(chosen)
}
