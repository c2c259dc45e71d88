//! Divisibility conditions on `(n, k)` and the forced target profile.
//!
//! A 3-edge-balanced graph in `G(n, k)` must have
//!
//! * `(n + 1) | 2k(k-1)` (C1, from 2-edge balance), and
//! * `3(n+1)(n²-n-4) | 4k(k-1)(k-2)` (C2, from 3-edge balance),
//!
//! and its 3-edge profile is then fully determined by `(n, k)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::census::{Profile2, Profile3};
use crate::error::{Error, Result};
use crate::graph::pair_count;

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

fn pair_numerator(k: usize) -> BigUint {
    big(2) * big(k) * big(k.saturating_sub(1))
}

fn triple_numerator(k: usize) -> BigUint {
    big(4) * big(k) * big(k.saturating_sub(1)) * big(k.saturating_sub(2))
}

fn triple_modulus(n: usize) -> BigUint {
    // n² - n - 4 > 0 for n ≥ 3
    big(3) * big(n + 1) * (big(n) * big(n) - big(n) - big(4))
}

/// `(n + 1) | 2k(k - 1)`.
pub fn check_c1(n: usize, k: usize) -> bool {
    if let Some(num) = (k as u128).checked_mul(k.saturating_sub(1) as u128) {
        return (2 * num) % (n as u128 + 1) == 0;
    }
    pair_numerator(k).is_multiple_of(&big(n + 1))
}

/// `3(n+1)(n² - n - 4) | 4k(k-1)(k-2)`. Requires `n ≥ 3`.
pub fn check_c2(n: usize, k: usize) -> bool {
    assert!(n >= 3, "C2 is defined for n ≥ 3");
    if n < (1 << 30) && k < (1 << 30) {
        let (n, k) = (n as u128, k as u128);
        let modulus = 3 * (n + 1) * (n * n - n - 4);
        let num = 4 * k * k.saturating_sub(1) * k.saturating_sub(2);
        return num % modulus == 0;
    }
    triple_numerator(k).is_multiple_of(&triple_modulus(n))
}

/// Why a pair fails, or `None` if admissible.
pub fn inadmissibility_reason(n: usize, k: usize) -> Option<String> {
    let big_n = pair_count(n);
    if n < 6 {
        return Some(format!("n = {n} < 6; no nontrivial example exists for n ≤ 5"));
    }
    if k < 4 || k > big_n / 2 {
        return Some(format!(
            "k = {k} is outside the nontrivial range 4 ≤ k ≤ C(n,2)/2 = {}",
            big_n / 2
        ));
    }
    if !check_c1(n, k) {
        return Some(format!(
            "C1 fails: n+1 = {} does not divide 2k(k-1) = {}",
            n + 1,
            pair_numerator(k)
        ));
    }
    if !check_c2(n, k) {
        return Some(format!(
            "C2 fails: 3(n+1)(n^2-n-4) = {} does not divide 4k(k-1)(k-2) = {}",
            triple_modulus(n),
            triple_numerator(k)
        ));
    }
    None
}

/// `n ≥ 6`, `4 ≤ k ≤ C(n,2)/2`, C1 and C2.
pub fn is_admissible(n: usize, k: usize) -> bool {
    inadmissibility_reason(n, k).is_none()
}

fn require_admissible(n: usize, k: usize) -> Result<()> {
    match inadmissibility_reason(n, k) {
        None => Ok(()),
        Some(reason) => Err(Error::Inadmissible { n, k, reason }),
    }
}

/// All admissible pairs with `n ≤ n_max`, ordered by `n` then `k`, cut off
/// after `limit` entries. At least one bound must be given.
pub fn scan_admissible(n_max: Option<usize>, limit: Option<usize>) -> Result<Vec<(usize, usize)>> {
    if n_max.is_none() && limit.is_none() {
        return Err(Error::Config("scan needs an n bound or an entry limit".into()));
    }
    if limit == Some(0) {
        return Err(Error::Config("entry limit must be at least 1".into()));
    }
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut n = 6;
    while n_max.is_none_or(|m| n <= m) {
        let modulus = (n + 1) as u128;
        for k in 4..=pair_count(n) / 2 {
            // C1 first: cheap, and rejects almost everything.
            let kk = k as u128;
            if !(2 * kk * (kk - 1)).is_multiple_of(modulus) || !check_c2(n, k) {
                continue;
            }
            out.push((n, k));
            if out.len() == limit {
                return Ok(out);
            }
        }
        n += 1;
    }
    Ok(out)
}

/// The 3-edge and 2-edge profile every 3-edge-balanced graph in `G(n, k)`
/// must have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetProfile {
    pub n: usize,
    pub k: usize,
    pub profile3: Profile3,
    pub profile2: Profile2,
}

impl TargetProfile {
    /// Evaluates the forcing formulas for any `k` with integral results,
    /// without the `k ≤ C(n,2)/2` range restriction. Complements of balanced
    /// graphs land here.
    pub fn from_formulas(n: usize, k: usize) -> Result<Self> {
        if n < 6 || k < 3 || k > pair_count(n) {
            return Err(Error::Inadmissible {
                n,
                k,
                reason: "formulas need n ≥ 6 and 3 ≤ k ≤ C(n,2)".into(),
            });
        }
        let exact = |num: BigUint, den: BigUint, what: &str| -> Result<BigUint> {
            let (q, r) = num.div_rem(&den);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::Inadmissible {
                    n,
                    k,
                    reason: format!("{what} is not integral"),
                })
            }
        };
        let n3 = big(n - 3);
        let n4 = big(n - 4);
        let n5 = big(n - 5);
        let c = exact(triple_numerator(k), triple_modulus(n), "triangle count (C2)")?;
        let p = big(3) * &n3 * &c;
        let s = &n3 * &c;
        let d = exact(big(3) * &n3 * &n4 * &c, big(2), "P3+K2 count")?;
        let m = exact(&n3 * &n4 * &n5 * &c, big(8), "3K2 count")?;
        let a = exact(pair_numerator(k), big(n + 1), "P3 count (C1)")?;
        let pairs = big(k) * big(k - 1) / big(2);
        let b = pairs - &a;

        let to_u64 = |x: &BigUint| {
            x.to_u64()
                .ok_or_else(|| Error::Internal(format!("target entry {x} exceeds 64 bits")))
        };
        let profile3 = Profile3::new(to_u64(&c)?, to_u64(&p)?, to_u64(&s)?, to_u64(&d)?, to_u64(&m)?);
        let profile2 = Profile2 {
            a: to_u64(&a)?,
            b: to_u64(&b)?,
        };
        let triples = big(k) * big(k - 1) * big(k - 2) / big(6);
        if BigUint::from(profile3.total()) != triples {
            return Err(Error::Internal(format!(
                "target profile sums to {} instead of C(k,3) = {triples}",
                profile3.total()
            )));
        }
        Ok(TargetProfile {
            n,
            k,
            profile3,
            profile2,
        })
    }
}

/// Target profile for an admissible pair.
pub fn target_profile(n: usize, k: usize) -> Result<TargetProfile> {
    require_admissible(n, k)?;
    TargetProfile::from_formulas(n, k)
}
