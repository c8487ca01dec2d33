//! Hankel determinants of coefficient sequences.
//!
//! For a sequence x_1, x_2, ... the order-h Hankel determinant
//! D_h(x_1..x_(2h-1)) is the determinant of the h x h matrix with entry
//! (i, j) = x_(i+j-1). Applied to the fractional coefficients of a series
//! these determinants locate the convergent denominator degrees: Delta_h is
//! nonzero exactly when h = deg(q_n) for some n. D_0 = 1 by convention.
//!
//! P_h and Q_h are the evaluations with the last one resp. two entries set
//! to zero; they isolate how D_(h+1) depends on its trailing arguments,
//! which is what the decomposition constructions steer.

use crate::algebra::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// D_h from the first 2h-1 entries of `coeffs` (canonical values < p).
/// h = 0 yields the empty determinant 1.
pub fn hankel_delta(field: PrimeField, coeffs: &[u64], h: usize) -> Result<FieldElement> {
    if h == 0 {
        return Ok(field.one());
    }
    let needed = 2 * h - 1;
    if coeffs.len() < needed {
        return Err(Error::InsufficientCoefficients {
            order: h,
            needed,
            got: coeffs.len(),
        });
    }
    let mut m = vec![0u64; h * h];
    for i in 0..h {
        for j in 0..h {
            m[i * h + j] = coeffs[i + j] % field.order();
        }
    }
    Ok(determinant(field, &mut m, h))
}

/// Determinant by Gaussian elimination with partial (first nonzero)
/// pivoting; exact over F_p.
fn determinant(field: PrimeField, m: &mut [u64], h: usize) -> FieldElement {
    let p = field.order();
    let mul = |a: u64, b: u64| ((a as u128) * (b as u128) % (p as u128)) as u64;
    let mut det = 1u64;
    for col in 0..h {
        let pivot_row = match (col..h).find(|&r| m[r * h + col] != 0) {
            Some(r) => r,
            None => return field.zero(),
        };
        if pivot_row != col {
            for j in 0..h {
                m.swap(col * h + j, pivot_row * h + j);
            }
            det = mul(det, p - 1);
        }
        let pivot = m[col * h + col];
        det = mul(det, pivot);
        let pivot_inv = field.el(pivot).inv().expect("pivot nonzero").value();
        for row in col + 1..h {
            let factor = mul(m[row * h + col], pivot_inv);
            if factor == 0 {
                continue;
            }
            for j in col..h {
                let sub = mul(factor, m[col * h + j]);
                m[row * h + j] = (m[row * h + j] + p - sub) % p;
            }
        }
    }
    field.el(det)
}

/// All Delta_h computable from a coefficient prefix: h = 1 ..
/// floor((len+1)/2), plus the set H of orders with Delta_h != 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    pub prefix_len: usize,
    /// values[h-1] = Delta_h
    pub values: Vec<FieldElement>,
    pub nonzero: Vec<usize>,
}

pub fn delta_profile(field: PrimeField, coeffs: &[u64]) -> DeltaProfile {
    let h_max = coeffs.len().div_ceil(2);
    let mut values = Vec::with_capacity(h_max);
    let mut nonzero = Vec::new();
    for h in 1..=h_max {
        let d = hankel_delta(field, coeffs, h).expect("length checked");
        if !d.is_zero() {
            nonzero.push(h);
        }
        values.push(d);
    }
    DeltaProfile {
        prefix_len: coeffs.len(),
        values,
        nonzero,
    }
}

/// P_h(x_1..x_(2h)) = D_(h+1)(x_1..x_(2h), 0): the part of D_(h+1) that
/// does not depend on the final entry.
pub fn p_h_eval(field: PrimeField, coeffs: &[u64], h: usize) -> Result<FieldElement> {
    if coeffs.len() < 2 * h {
        return Err(Error::InsufficientCoefficients {
            order: h,
            needed: 2 * h,
            got: coeffs.len(),
        });
    }
    let mut padded = coeffs[..2 * h].to_vec();
    padded.push(0);
    hankel_delta(field, &padded, h + 1)
}

/// Q_h(x_1..x_(2h-1)) = P_h(x_1..x_(2h-1), 0), defined over F_2 only,
/// where it isolates the dependence of P_h on x_(2h).
pub fn q_h_eval(field: PrimeField, coeffs: &[u64], h: usize) -> Result<FieldElement> {
    if field.order() != 2 {
        return Err(Error::WrongField {
            expected: 2,
            got: field.order(),
        });
    }
    if h == 0 || coeffs.len() < 2 * h - 1 {
        return Err(Error::InsufficientCoefficients {
            order: h,
            needed: 2 * h.max(1) - 1,
            got: coeffs.len(),
        });
    }
    let mut padded = coeffs[..2 * h - 1].to_vec();
    padded.push(0);
    p_h_eval(field, &padded, h)
}

/// Result of the bounded-degree class test; `witness` is the first order h
/// at which the required nonzero determinant vanished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FClassCheck {
    pub k: usize,
    pub ok: bool,
    pub witness: Option<usize>,
}

/// Finite-prefix test for "all partial quotient degrees <= k": for every
/// order k <= h <= floor((len+1)/2), if Delta_(h-1) .. Delta_(h-k+1) all
/// vanish then Delta_h must not. For k = 1 the hypothesis is empty, so the
/// test is simply that every computable Delta_h is nonzero.
pub fn f_class_check(field: PrimeField, coeffs: &[u64], k: usize) -> FClassCheck {
    assert!(k >= 1, "class index k must be >= 1");
    let profile = delta_profile(field, coeffs);
    let h_max = profile.values.len();
    let delta_is_zero = |h: usize| -> bool {
        // Delta_0 = 1 by convention
        h >= 1 && profile.values[h - 1].is_zero()
    };
    for h in k..=h_max {
        let hypothesis = (1..k).all(|i| delta_is_zero(h - i));
        if hypothesis && delta_is_zero(h) {
            return FClassCheck {
                k,
                ok: false,
                witness: Some(h),
            };
        }
    }
    FClassCheck {
        k,
        ok: true,
        witness: None,
    }
}
