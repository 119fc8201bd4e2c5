use super::matrix::{RealAntisymmetricMatrix, RealMatrix};
use crate::error::{Error, Result};

/// Pfaffian by Parlett-Reid tridiagonalization with partial pivoting.
pub fn pfaffian(m: &RealAntisymmetricMatrix) -> f64 {
    parlett_reid(m.as_matrix().clone())
}

/// Pfaffian of a dense matrix assumed antisymmetric (only the lower triangle
/// of each pivot column and the pivot row are read). The empty matrix has
/// Pfaffian 1.
pub fn pfaffian_dense(m: &RealMatrix) -> Result<f64> {
    if !m.dim().is_multiple_of(2) {
        return Err(Error::OddDimension(m.dim()));
    }
    Ok(parlett_reid(m.clone()))
}

fn parlett_reid(mut a: RealMatrix) -> f64 {
    let n = a.dim();
    let mut pf = 1.0;
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].abs();
        for r in (k + 2)..n {
            let v = a[(r, k)].abs();
            if v > best {
                best = v;
                kp = r;
            }
        }
        if kp != k + 1 {
            swap_symmetric(&mut a, k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<f64> = ((k + 2)..n).map(|j| a[(k, j)] / pivot).collect();
            let col: Vec<f64> = ((k + 2)..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    a[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}

fn swap_symmetric(a: &mut RealMatrix, i: usize, j: usize) {
    let n = a.dim();
    for c in 0..n {
        let t = a[(i, c)];
        a[(i, c)] = a[(j, c)];
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)];
        a[(r, i)] = a[(r, j)];
        a[(r, j)] = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Expansion along the first row: Pf(A) = Σ_j (-1)^{j+1} a_{0j} Pf(A without rows/cols 0, j).
    fn pfaffian_by_expansion(a: &RealMatrix) -> f64 {
        let n = a.dim();
        if n == 0 {
            return 1.0;
        }
        let mut total = 0.0;
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&c| c != j).collect();
            let minor = RealMatrix::from_fn(keep.len(), |r, c| a[(keep[r], keep[c])]);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * a[(0, j)] * pfaffian_by_expansion(&minor);
        }
        total
    }

    fn random_antisym(d: usize, rng: &mut ChaCha8Rng) -> RealAntisymmetricMatrix {
        RealAntisymmetricMatrix::from_upper(d, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn two_by_two() {
        let m = RealAntisymmetricMatrix::canonical(&[0.7]);
        assert_eq!(pfaffian(&m), 0.7);
    }

    #[test]
    fn four_by_four_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_antisym(4, &mut rng);
        let g = |i: usize, j: usize| m.get(i - 1, j - 1);
        let expected = g(1, 2) * g(3, 4) - g(1, 3) * g(2, 4) + g(1, 4) * g(2, 3);
        assert!((pfaffian(&m) - expected).abs() < 1e-14);
    }

    #[test]
    fn block_diagonal_product() {
        let m = RealAntisymmetricMatrix::canonical(&[0.5, -3.0]);
        assert!((pfaffian(&m) + 1.5).abs() < 1e-15);
    }

    #[test]
    fn matches_combinatorial_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for d in [2, 4, 6, 8, 10] {
            for _ in 0..5 {
                let m = random_antisym(d, &mut rng);
                let exact = pfaffian_by_expansion(m.as_matrix());
                assert!((pfaffian(&m) - exact).abs() <= 1e-10 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn square_is_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for d in (2..=16).step_by(2) {
            for _ in 0..10 {
                let m = random_antisym(d, &mut rng);
                let det =
                    nalgebra::DMatrix::from_row_slice(d, d, m.as_matrix().as_slice()).determinant();
                let pf = pfaffian(&m);
                assert!(
                    (pf * pf - det).abs() <= 1e-8 * det.abs().max(1e-300),
                    "d={d}"
                );
            }
        }
    }

    #[test]
    fn congruence_by_rotation_scales_by_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for d in (2..=12).step_by(2) {
            let m = random_antisym(d, &mut rng);
            let mut r = RealMatrix::identity(d);
            for _ in 0..(3 * d * d) {
                let p = rng.random_range(0..d);
                let q = (p + rng.random_range(1..d)) % d;
                r.rotate_rows(p, q, rng.random_range(0.0..std::f64::consts::TAU));
            }
            // A reflection flips det(R) to -1.
            let flip = rng.random_bool(0.5);
            if flip {
                for j in 0..d {
                    r[(0, j)] = -r[(0, j)];
                }
            }
            let det = if flip { -1.0 } else { 1.0 };
            let rotated = m.congruence(&r);
            assert!((pfaffian(&rotated) - det * pfaffian(&m)).abs() < 1e-8);
        }
    }

    #[test]
    fn empty_and_odd() {
        assert_eq!(pfaffian_dense(&RealMatrix::zeros(0)).unwrap(), 1.0);
        assert!(matches!(
            pfaffian_dense(&RealMatrix::zeros(3)),
            Err(Error::OddDimension(3))
        ));
        assert!(matches!(
            RealAntisymmetricMatrix::zeros(3),
            Err(Error::OddDimension(3))
        ));
    }
}
