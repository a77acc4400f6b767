//! Moments up to order 3 over black cells.
//!
//! Cells are measured at their integer index at the analysis precision, with
//! unit mass per cell. A block covering a range of cells contributes the
//! closed-form sum of its monomials.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tree::{for_each_leaf, NodeRef, SpaceSpec, Store};

pub const MAX_ORDER: u32 = 3;

/// Moments indexed by exponent vectors of total order at most 3.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentList {
    k: usize,
    entries: BTreeMap<Vec<u8>, f64>,
}

/// Every exponent vector of length `k` and order at most [`MAX_ORDER`], by
/// increasing order.
pub fn multi_indices(k: usize) -> Vec<Vec<u8>> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e as u8);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, MAX_ORDER, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().map(|&e| u32::from(e)).sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

impl MomentList {
    fn zero(k: usize) -> Self {
        MomentList { k, entries: multi_indices(k).into_iter().map(|m| (m, 0.0)).collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Moment for an exponent vector; 0 for orders above 3.
    pub fn get(&self, exponents: &[u8]) -> f64 {
        self.entries.get(exponents).copied().unwrap_or(0.0)
    }

    /// `M(x_i x_j ...)` for a list of axes.
    pub fn of_axes(&self, axes: &[usize]) -> f64 {
        let mut e = vec![0u8; self.k];
        for &a in axes {
            e[a] += 1;
        }
        self.get(&e)
    }

    pub fn mass(&self) -> f64 {
        self.get(&vec![0; self.k])
    }

    pub fn gravity_center(&self) -> Result<Vec<f64>> {
        let m = self.mass();
        if m == 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok((0..self.k).map(|a| self.of_axes(&[a]) / m).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], f64)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    /// Moments of the coordinates `u_i = scale * sum_a axes[a][i] * x_a`,
    /// divided by `divisor`. On a centered list with orthonormal `axes` this
    /// is the list seen from those axes.
    pub fn in_axes(&self, axes: &[Vec<f64>], scale: f64, divisor: f64) -> MomentList {
        let k = self.k;
        let mut out = MomentList::zero(k);
        for (key, slot) in out.entries.iter_mut() {
            let factors: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat_n(i, usize::from(key[i]))).collect();
            let n = factors.len();
            let mut total = 0.0;
            let mut pick = vec![0usize; n];
            loop {
                let coef: f64 = factors.iter().zip(&pick).map(|(&i, &a)| scale * axes[a][i]).product();
                total += coef * self.of_axes(&pick);
                let mut j = 0;
                while j < n && pick[j] == k - 1 {
                    pick[j] = 0;
                    j += 1;
                }
                if j == n {
                    break;
                }
                pick[j] += 1;
            }
            *slot = total / divisor;
        }
        out
    }

    /// One `exponents,value` line per moment, exponents joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponents,value\n");
        let mut rows: Vec<_> = self.entries.iter().collect();
        rows.sort_by_key(|(m, _)| (m.iter().map(|&e| u32::from(e)).sum::<u32>(), std::cmp::Reverse((*m).clone())));
        for (m, v) in rows {
            let idx: Vec<String> = m.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "{},{}", idx.join(";"), v);
        }
        out
    }
}

/// `sum_{x=0}^{m-1} x^n` for n <= 3.
fn faulhaber(n: u8, m: u128) -> u128 {
    if m == 0 {
        return 0;
    }
    match n {
        0 => m,
        1 => m * (m - 1) / 2,
        2 => (m - 1) * m * (2 * m - 1) / 6,
        3 => {
            let t = m * (m - 1) / 2;
            t * t
        }
        _ => unreachable!("order above 3"),
    }
}

fn power_sum(n: u8, lo: u128, hi: u128) -> f64 {
    (faulhaber(n, hi) - faulhaber(n, lo)) as f64
}

/// Moments of the black cells of `tree` at `precision`.
pub fn moments(store: &Store, tree: NodeRef, space: &SpaceSpec, precision: u32) -> Result<MomentList> {
    let depth = space.depth_at(precision)?;
    let k = space.dim();
    let shift = space.r() - precision;
    let mut out = MomentList::zero(k);
    let keys: Vec<Vec<u8>> = out.entries.keys().cloned().collect();
    for_each_leaf(store, tree, space, depth, |n, b| {
        if !store.has_black(n) {
            return;
        }
        let mut sums = [[0.0f64; 4]; crate::tree::MAX_DIM];
        for (a, s) in sums.iter_mut().enumerate().take(k) {
            let lo = u128::from(b.lo[a] >> shift);
            let ext = u128::from((space.extent(b.level, a) >> shift).max(1));
            for (e, v) in s.iter_mut().enumerate() {
                *v = power_sum(e as u8, lo, lo + ext);
            }
        }
        for key in &keys {
            let term: f64 = key.iter().enumerate().map(|(a, &e)| sums[a][e as usize]).product();
            *out.entries.get_mut(key).expect("key from the list") += term;
        }
    });
    Ok(out)
}

fn binomial(n: u8, m: u8) -> f64 {
    match (n, m) {
        (_, 0) => 1.0,
        (n, m) if m == n => 1.0,
        (2, 1) => 2.0,
        (3, 1) | (3, 2) => 3.0,
        _ => 0.0,
    }
}

/// Moments about the gravity center:
/// `M(prod (X_i - XG_i)^n_i) = sum_m prod C(n_i, m_i) (-XG_i)^(n_i - m_i) M(X^m)`.
pub fn center_moments(m: &MomentList) -> Result<MomentList> {
    let g = m.gravity_center()?;
    let k = m.k;
    let mut out = MomentList::zero(k);
    for (key, slot) in out.entries.iter_mut() {
        let mut total = 0.0;
        let mut sub = vec![0u8; k];
        loop {
            let coef: f64 =
                (0..k).map(|a| binomial(key[a], sub[a]) * (-g[a]).powi(i32::from(key[a] - sub[a]))).product();
            total += coef * m.get(&sub);
            // Next sub-index below `key`, odometer style.
            let mut a = 0;
            while a < k && sub[a] == key[a] {
                sub[a] = 0;
                a += 1;
            }
            if a == k {
                break;
            }
            sub[a] += 1;
        }
        *slot = total;
    }
    for a in 0..k {
        let mut e = vec![0u8; k];
        e[a] = 1;
        out.entries.insert(e, 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::add_cell;

    #[test]
    fn index_count() {
        assert_eq!(multi_indices(1).len(), 4);
        assert_eq!(multi_indices(2).len(), 10);
        assert_eq!(multi_indices(3).len(), 20);
        assert_eq!(multi_indices(2)[0], vec![0, 0]);
    }

    #[test]
    fn full_square() {
        let s = Store::new();
        let sp = SpaceSpec::new(2, 2).unwrap();
        let m = moments(&s, NodeRef::BLACK, &sp, 2).unwrap();
        assert_eq!(m.mass(), 16.0);
        assert_eq!(m.gravity_center().unwrap(), vec![1.5, 1.5]);
        let w = moments(&s, NodeRef::WHITE, &sp, 2).unwrap();
        assert!(w.iter().all(|(_, v)| v == 0.0));
        assert_eq!(center_moments(&w), Err(Error::ZeroMass));
    }

    #[test]
    fn two_cells_on_a_line() {
        let mut s = Store::new();
        let sp = SpaceSpec::new(1, 2).unwrap();
        let t = add_cell(&mut s, NodeRef::WHITE, &sp, &[0], None).unwrap();
        let t = add_cell(&mut s, t, &sp, &[2], None).unwrap();
        let c = center_moments(&moments(&s, t, &sp, 2).unwrap()).unwrap();
        assert_eq!(c.get(&[1]), 0.0);
        assert_eq!(c.get(&[2]), 2.0);
        assert_eq!(c.get(&[3]), 0.0);
        assert!(c.to_csv().starts_with("exponents,value\n0,2\n1,0\n2,2\n"));
    }
}
