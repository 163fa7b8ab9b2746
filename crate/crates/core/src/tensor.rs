//! Dense row-major tensors and single-axis contractions.

use std::ops::Mul;

use rayon::prelude::*;

use crate::C64;

/// `out[.., i, ..] = Σ_j a[i][j] · input[.., j, ..]` along `axis`.
///
/// `a` is row-major with shape `(rows, shape[axis])`. Returns the new shape and data.
pub(crate) fn contract_axis<T>(
    input: &[C64],
    shape: &[usize],
    axis: usize,
    a: &[T],
    rows: usize,
) -> (Vec<usize>, Vec<C64>)
where
    T: Copy + Mul<C64, Output = C64> + Send + Sync,
{
    let cols = shape[axis];
    assert_eq!(a.len(), rows * cols, "matrix shape does not match axis length");
    assert_eq!(input.len(), shape.iter().product::<usize>());
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();

    let mut out = vec![C64::new(0.0, 0.0); outer * rows * inner];
    let block_out = rows * inner;
    let block_in = cols * inner;
    out.par_chunks_mut(block_out.max(1))
        .enumerate()
        .for_each(|(o, dst)| {
            let src = &input[o * block_in..(o + 1) * block_in];
            for i in 0..rows {
                let row = &mut dst[i * inner..(i + 1) * inner];
                for j in 0..cols {
                    let aij = a[i * cols + j];
                    let s = &src[j * inner..(j + 1) * inner];
                    for (r, &v) in row.iter_mut().zip(s) {
                        *r += aij * v;
                    }
                }
            }
        });

    let mut new_shape = shape.to_vec();
    new_shape[axis] = rows;
    (new_shape, out)
}

/// Applies `f` to every 1-D fibre along `axis`, in place.
pub(crate) fn map_fibres(
    data: &mut [C64],
    shape: &[usize],
    axis: usize,
    f: impl Fn(&mut [C64]) + Sync,
) {
    let len = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    if inner == 1 {
        data.par_chunks_mut(len).for_each(|c| f(c));
        return;
    }
    for o in 0..outer {
        let block = &mut data[o * len * inner..(o + 1) * len * inner];
        let fibres: Vec<Vec<C64>> = (0..inner)
            .into_par_iter()
            .map(|s| {
                let mut v: Vec<C64> = (0..len).map(|j| block[j * inner + s]).collect();
                f(&mut v);
                v
            })
            .collect();
        for (s, v) in fibres.into_iter().enumerate() {
            for (j, x) in v.into_iter().enumerate() {
                block[j * inner + s] = x;
            }
        }
    }
}

/// Unravels a flat row-major index.
pub(crate) fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for (k, &n) in shape.iter().enumerate().rev() {
        out[k] = flat % n;
        flat /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_matches_naive() {
        let shape = [2usize, 3, 4];
        let input: Vec<C64> = (0..24).map(|k| C64::new(k as f64, -(k as f64) / 3.0)).collect();
        let a: Vec<f64> = (0..15).map(|k| (k as f64).sin()).collect();
        let (s, out) = contract_axis(&input, &shape, 1, &a, 5);
        assert_eq!(s, vec![2, 5, 4]);
        for o in 0..2 {
            for i in 0..5 {
                for r in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..3 {
                        acc += a[i * 3 + j] * input[(o * 3 + j) * 4 + r];
                    }
                    assert!((out[(o * 5 + i) * 4 + r] - acc).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fibres_and_unravel() {
        let shape = [3usize, 2];
        let mut data: Vec<C64> = (0..6).map(|k| C64::new(k as f64, 0.0)).collect();
        map_fibres(&mut data, &shape, 0, |v| v.reverse());
        let re: Vec<f64> = data.iter().map(|c| c.re).collect();
        assert_eq!(re, vec![4.0, 5.0, 2.0, 3.0, 0.0, 1.0]);
        let mut idx = [0; 3];
        unravel(17, &[2, 3, 4], &mut idx);
        assert_eq!(idx, [1, 1, 1]);
    }
}
