//! Exact rational intertwiners between coset permutation representations.
//!
//! With the function-action convention `(P(g)f)(x) = f(x·g)`, a matrix `T`
//! intertwines (`T P'(g) = P(g) T` for all `g`) exactly when it is constant
//! on orbits of the diagonal right action on pairs of cosets. The space of
//! intertwiners is therefore spanned by orbit indicator matrices, and an
//! invertible element is found by trying deterministic small-integer
//! coefficient assignments, all in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{coset_action, permutation_character_equal, CosetAction, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// An exact intertwiner `T` with `T P'(g) = P(g) T` for all `g`, normalized
/// so the all-ones vector maps to the all-ones vector.
#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub dim: usize,
    /// Row-major rational entries.
    pub entries: Vec<BigRational>,
    /// Pair-orbit id of each (row, col) position.
    pub orbit_of: Vec<usize>,
    pub orbit_count: usize,
}

impl Intertwiner {
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    /// Entries converted to f64 for downstream floating-point operators.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(rational_to_f64).collect()
    }

    /// Clears denominators, yielding an integer matrix that still
    /// intertwines (scalar multiples of intertwiners intertwine).
    pub fn integer_scaled(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for e in &self.entries {
            lcm = num_integer::lcm(lcm, e.denom().clone());
        }
        self.entries
            .iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect()
    }

    /// Exact check of `T P'(g) = P(g) T`, i.e. `T[i·g][j·g] = T[i][j]`.
    pub fn intertwines(&self, a1: &CosetAction, a2: &CosetAction, g: usize) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let ig = a1.apply(g, i);
                let jg = a2.apply(g, j);
                if self.entries[ig * d + jg] != self.entries[i * d + j] {
                    return false;
                }
            }
        }
        true
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

/// Computes an invertible rational intertwiner between the coset
/// representations of `H\G` and `H'\G`.
///
/// Requires the pair to be almost conjugate with equal indices; the rows of
/// the result are indexed by `H\G`, the columns by `H'\G`.
pub fn intertwiner(group: &FiniteGroup, h1: &Subgroup, h2: &Subgroup) -> Result<Intertwiner> {
    if !permutation_character_equal(group, h1, h2) {
        return Err(Error::NotAlmostConjugate);
    }
    let a1 = coset_action(group, h1);
    let a2 = coset_action(group, h2);
    let d = a1.cosets();
    if d != a2.cosets() {
        return Err(Error::IndexMismatch(d, a2.cosets()));
    }

    // Orbits of the diagonal action g: (i, j) -> (i·g, j·g).
    let mut orbit_of = vec![usize::MAX; d * d];
    let mut orbit_count = 0;
    for start in 0..d * d {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbit_count;
        orbit_count += 1;
        let mut stack = vec![start];
        orbit_of[start] = id;
        while let Some(p) = stack.pop() {
            let (i, j) = (p / d, p % d);
            for g in 0..group.order() {
                let q = a1.apply(g, i) * d + a2.apply(g, j);
                if orbit_of[q] == usize::MAX {
                    orbit_of[q] = id;
                    stack.push(q);
                }
            }
        }
    }

    // Try deterministic coefficient assignments until one is invertible.
    for attempt in 0..64u64 {
        let coeffs: Vec<BigRational> = (0..orbit_count)
            .map(|o| BigRational::from(BigInt::from(coefficient(attempt, o))))
            .collect();
        let entries: Vec<BigRational> = orbit_of.iter().map(|&o| coeffs[o].clone()).collect();
        if !is_invertible(&entries, d) {
            continue;
        }
        // Row sums are constant (the all-ones vector spans a trivial
        // isotypic component on each side); normalize them to one.
        let row_sum: BigRational = entries[0..d].iter().fold(BigRational::zero(), |s, e| s + e);
        if row_sum.is_zero() {
            continue;
        }
        for i in 1..d {
            let s: BigRational = entries[i * d..(i + 1) * d]
                .iter()
                .fold(BigRational::zero(), |s, e| s + e);
            debug_assert_eq!(s, row_sum);
        }
        let entries: Vec<BigRational> = entries.into_iter().map(|e| e / &row_sum).collect();
        let result = Intertwiner {
            dim: d,
            entries,
            orbit_of,
            orbit_count,
        };
        for g in 0..group.order() {
            if !result.intertwines(&a1, &a2, g) {
                return Err(Error::NoInvertibleIntertwiner);
            }
        }
        return Ok(result);
    }
    Err(Error::NoInvertibleIntertwiner)
}

fn coefficient(attempt: u64, orbit: usize) -> i64 {
    // attempt 0: 1, 2, 3, ...; later attempts spread the values out so some
    // assignment escapes any proper subvariety of singular combinations.
    let o = orbit as i64;
    match attempt {
        0 => o + 1,
        1 => 2 * o + 1,
        _ => {
            let a = attempt as i64;
            1 + (o + 1) * (o + a) + a * a * o
        }
    }
}

/// Exact invertibility by fraction-free Gaussian elimination.
fn is_invertible(entries: &[BigRational], d: usize) -> bool {
    let mut m: Vec<BigRational> = entries.to_vec();
    for col in 0..d {
        let pivot_row = (col..d).find(|&r| !m[r * d + col].is_zero());
        let Some(p) = pivot_row else {
            return false;
        };
        if p != col {
            for c in 0..d {
                m.swap(col * d + c, p * d + c);
            }
        }
        let pivot = m[col * d + col].clone();
        for r in (col + 1)..d {
            if m[r * d + col].is_zero() {
                continue;
            }
            let factor = &m[r * d + col] / &pivot;
            for c in col..d {
                let sub = &factor * &m[col * d + c];
                m[r * d + c] -= sub;
            }
        }
    }
    (0..d).all(|i| !m[i * d + i].is_zero())
}

/// Exact rational determinant, exposed for tests on the integer-scaled
/// intertwiner.
pub fn determinant(entries: &[BigRational], d: usize) -> BigRational {
    let mut m: Vec<BigRational> = entries.to_vec();
    let mut det = BigRational::one();
    for col in 0..d {
        let pivot_row = (col..d).find(|&r| !m[r * d + col].is_zero());
        let Some(p) = pivot_row else {
            return BigRational::zero();
        };
        if p != col {
            for c in 0..d {
                m.swap(col * d + c, p * d + c);
            }
            det = -det;
        }
        let pivot = m[col * d + col].clone();
        det *= pivot.clone();
        for r in (col + 1)..d {
            if m[r * d + col].is_zero() {
                continue;
            }
            let factor = &m[r * d + col] / &pivot;
            for c in col..d {
                let sub = &factor * &m[col * d + c];
                m[r * d + c] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::matf2::gl3_f2;
    use crate::groups::DEFAULT_CLOSURE_CAP;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CLOSURE_CAP)
            .unwrap()
            .0
    }

    #[test]
    fn equal_subgroups_admit_an_intertwiner() {
        let g = s3();
        let t = (1..g.order()).find(|&x| g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[t]);
        let tw = intertwiner(&g, &h, &h).unwrap();
        assert_eq!(tw.dim, 3);
        // Row sums are one by normalization.
        let one: BigRational = BigRational::one();
        let sum: BigRational = (0..3).map(|j| tw.get(0, j).clone()).fold(BigRational::zero(), |a, b| a + b);
        assert_eq!(sum, one);
    }

    #[test]
    fn gassmann_pair_has_invertible_integer_intertwiner() {
        let ctx = gl3_f2().unwrap();
        let tw = intertwiner(&ctx.group, &ctx.h1, &ctx.h2).unwrap();
        assert_eq!(tw.dim, 7);
        // Two pair orbits: the coset incidence relation and its complement.
        assert_eq!(tw.orbit_count, 2);
        let scaled = tw.integer_scaled();
        let rat: Vec<BigRational> = scaled.iter().map(|x| BigRational::from(x.clone())).collect();
        let det = determinant(&rat, 7);
        assert!(!det.is_zero());
        assert!(rat.iter().all(|e| e.denom() == &BigInt::one()));
    }

    #[test]
    fn intertwining_checked_by_explicit_matrix_product() {
        let ctx = gl3_f2().unwrap();
        let tw = intertwiner(&ctx.group, &ctx.h1, &ctx.h2).unwrap();
        let a1 = coset_action(&ctx.group, &ctx.h1);
        let a2 = coset_action(&ctx.group, &ctx.h2);
        let d = tw.dim;
        // P(g)[x][y] = 1 iff y = x·g; check T P'(g) = P(g) T entrywise.
        for g in (0..ctx.group.order()).step_by(13) {
            for i in 0..d {
                for j in 0..d {
                    // (T P'(g))[i][j] = T[i][j·g⁻¹]; (P(g) T)[i][j] = T[i·g][j].
                    let jginv = (0..d).find(|&y| a2.apply(g, y) == j).unwrap();
                    let lhs = tw.get(i, jginv);
                    let rhs = tw.get(a1.apply(g, i), j);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn non_gassmann_input_is_rejected() {
        let g = s3();
        let t = (1..g.order()).find(|&x| g.mul(x, x) == 0).unwrap();
        let h = Subgroup::generated(&g, &[t]);
        let err = intertwiner(&g, &Subgroup::trivial(), &h).unwrap_err();
        assert!(matches!(err, Error::NotAlmostConjugate));
    }
}
