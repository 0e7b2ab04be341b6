use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Periodic box `[0,l1) × [0,l2)` with `n1 × n2` nodes, its wavenumber
/// tables, and cached FFT plans for both directions.
///
/// Plans are immutable and `Send + Sync`; scratch space is allocated per
/// call, so one grid can serve many threads.
pub struct Grid {
    n1: usize,
    n2: usize,
    l1: f64,
    l2: f64,
    k1: Vec<f64>,
    k2: Vec<f64>,
    riesz: Vec<(f64, f64)>,
    kept: Vec<bool>,
    fwd1: Arc<dyn Fft<f64>>,
    inv1: Arc<dyn Fft<f64>>,
    fwd2: Arc<dyn Fft<f64>>,
    inv2: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n1", &self.n1)
            .field("n2", &self.n2)
            .field("l1", &self.l1)
            .field("l2", &self.l2)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2 && self.l1 == other.l1 && self.l2 == other.l2
    }
}

/// Scratch space for [`Grid::fft2_with`]; grows on first use.
#[derive(Debug, Default, Clone)]
pub(crate) struct FftWork {
    scratch: Vec<Complex64>,
    buf: Vec<Complex64>,
}

/// FFT-ordered signed index: `0, 1, …, n/2−1, −n/2, …, −1`.
#[inline]
fn signed(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

impl Grid {
    pub fn new(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Arc<Self>, SpectralError> {
        for (axis, n) in [("n1", n1), ("n2", n2)] {
            if n < 8 || n % 2 != 0 {
                return Err(SpectralError::BadSize { axis, n });
            }
        }
        for (axis, l) in [("l1", l1), ("l2", l2)] {
            if !(l > 0.0 && l.is_finite()) {
                return Err(SpectralError::BadPeriod { axis, l });
            }
        }
        let table = |n: usize, l: f64| -> Vec<f64> {
            (0..n).map(|i| 2.0 * PI * signed(i, n) as f64 / l).collect()
        };
        let (k1, k2) = (table(n1, l1), table(n2, l2));
        let mut riesz = Vec::with_capacity(n1 * n2);
        let mut kept = Vec::with_capacity(n1 * n2);
        let (c1, c2) = (n1 as f64 / 3.0, n2 as f64 / 3.0);
        for i1 in 0..n1 {
            for i2 in 0..n2 {
                let r = k1[i1].hypot(k2[i2]);
                if i1 == n1 / 2 || i2 == n2 / 2 || r == 0.0 {
                    riesz.push((0.0, 0.0));
                } else {
                    riesz.push((-k2[i2] / r, k1[i1] / r));
                }
                kept.push(
                    signed(i1, n1).unsigned_abs() as f64 <= c1
                        && signed(i2, n2).unsigned_abs() as f64 <= c2,
                );
            }
        }
        let mut planner = FftPlanner::<f64>::new();
        Ok(Arc::new(Self {
            n1,
            n2,
            l1,
            l2,
            k1,
            k2,
            riesz,
            kept,
            fwd1: planner.plan_fft_forward(n1),
            inv1: planner.plan_fft_inverse(n1),
            fwd2: planner.plan_fft_forward(n2),
            inv2: planner.plan_fft_inverse(n2),
        }))
    }

    /// Square `n × n` grid on the `2π × 2π` box.
    pub fn square(n: usize) -> Result<Arc<Self>, SpectralError> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k1(&self) -> &[f64] {
        &self.k1
    }

    pub fn k2(&self) -> &[f64] {
        &self.k2
    }

    /// Real factors `(a1, a2)` with `û_j = i·a_j·θ̂` for the SQG velocity,
    /// flat-indexed. Zero on the mean mode and on Nyquist rows and columns.
    pub(crate) fn riesz_symbols(&self) -> &[(f64, f64)] {
        &self.riesz
    }

    /// Flat mask of the modes surviving the two-thirds rule.
    pub(crate) fn dealias_mask(&self) -> &[bool] {
        &self.kept
    }

    pub fn dx1(&self) -> f64 {
        self.l1 / self.n1 as f64
    }

    pub fn dx2(&self) -> f64 {
        self.l2 / self.n2 as f64
    }

    /// Area element of the point-value quadrature.
    pub fn cell_area(&self) -> f64 {
        self.dx1() * self.dx2()
    }

    /// Factor turning `Σ|F̂|²` into the continuum `∫|f|²` over the box.
    pub fn plancherel_factor(&self) -> f64 {
        let n = self.len() as f64;
        self.l1 * self.l2 / (n * n)
    }

    #[inline]
    pub fn flat(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    #[inline]
    pub fn signed_index1(&self, i1: usize) -> i64 {
        signed(i1, self.n1)
    }

    #[inline]
    pub fn signed_index2(&self, i2: usize) -> i64 {
        signed(i2, self.n2)
    }

    /// Row/column position of the mode `−ξ`.
    #[inline]
    pub fn mirror(&self, i1: usize, i2: usize) -> (usize, usize) {
        ((self.n1 - i1) % self.n1, (self.n2 - i2) % self.n2)
    }

    #[inline]
    pub fn is_nyquist1(&self, i1: usize) -> bool {
        i1 == self.n1 / 2
    }

    #[inline]
    pub fn is_nyquist2(&self, i2: usize) -> bool {
        i2 == self.n2 / 2
    }

    /// Physical coordinates of node `(i1, i2)`.
    #[inline]
    pub fn point(&self, i1: usize, i2: usize) -> (f64, f64) {
        (i1 as f64 * self.dx1(), i2 as f64 * self.dx2())
    }

    /// Unnormalized 2D transform in place; `inverse` selects the sign of the
    /// exponent.
    pub(crate) fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        self.fft2_with(data, inverse, &mut FftWork::default());
    }

    /// [`fft2`](Self::fft2) with caller-owned buffers. Rows (contiguous,
    /// along x₂) are transformed as one batch; columns are gathered a few at
    /// a time into a contiguous buffer.
    pub(crate) fn fft2_with(&self, data: &mut [Complex64], inverse: bool, work: &mut FftWork) {
        const BLOCK: usize = 8;
        debug_assert_eq!(data.len(), self.len());
        let (row_plan, col_plan) = if inverse {
            (&self.inv2, &self.inv1)
        } else {
            (&self.fwd2, &self.fwd1)
        };
        let (n1, n2) = (self.n1, self.n2);
        let need = row_plan
            .get_inplace_scratch_len()
            .max(col_plan.get_inplace_scratch_len());
        work.scratch.resize(need, Complex64::default());
        work.buf.resize(BLOCK * n1, Complex64::default());
        let FftWork { scratch, buf } = work;
        row_plan.process_with_scratch(data, &mut scratch[..row_plan.get_inplace_scratch_len()]);

        let col_scratch = &mut scratch[..col_plan.get_inplace_scratch_len()];
        for c0 in (0..n2).step_by(BLOCK) {
            let w = BLOCK.min(n2 - c0);
            for (i1, row) in data.chunks_exact(n2).enumerate() {
                for (j, v) in row[c0..c0 + w].iter().enumerate() {
                    buf[j * n1 + i1] = *v;
                }
            }
            col_plan.process_with_scratch(&mut buf[..w * n1], col_scratch);
            for (i1, row) in data.chunks_exact_mut(n2).enumerate() {
                for (j, v) in row[c0..c0 + w].iter_mut().enumerate() {
                    *v = buf[j * n1 + i1];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_fft_order() {
        let g = Grid::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        assert_eq!(g.k1(), &[0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        let g = Grid::new(8, 8, 4.0 * PI, 2.0 * PI).unwrap();
        assert_eq!(g.k1(), &[0.0, 0.5, 1.0, 1.5, -2.0, -1.5, -1.0, -0.5]);
        assert_eq!(g.k2(), &[0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            Grid::new(7, 8, 1.0, 1.0),
            Err(SpectralError::BadSize { n: 7, .. })
        ));
        assert!(matches!(
            Grid::new(8, 6, 1.0, 1.0),
            Err(SpectralError::BadSize { n: 6, .. })
        ));
        assert!(matches!(
            Grid::new(8, 8, 0.0, 1.0),
            Err(SpectralError::BadPeriod { .. })
        ));
        assert!(matches!(
            Grid::new(8, 8, 1.0, f64::NAN),
            Err(SpectralError::BadPeriod { .. })
        ));
    }

    #[test]
    fn single_zero_mode_and_symmetry() {
        let g = Grid::new(16, 10, 3.0, 5.0).unwrap();
        for (k, n) in [(g.k1(), 16usize), (g.k2(), 10)] {
            assert_eq!(k.len(), n);
            assert_eq!(k.iter().filter(|&&v| v == 0.0).count(), 1);
            for i in 1..n {
                if i != n / 2 {
                    assert_eq!(k[i], -k[n - i]);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = Grid::new(12, 16, 1.5, 2.5).unwrap();
        let b = Grid::new(12, 16, 1.5, 2.5).unwrap();
        assert_eq!(a.k1(), b.k1());
        assert_eq!(*a, *b);
    }
}
