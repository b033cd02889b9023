//! Projectivity over `W_n(S)` for modules given by a presentation over
//! `W_N(S)`, decided two ways: by elementary divisors and by exactness of
//! `X →p^{n-1} X →p X`.

use super::validate::{Failure, FailureCode};
use crate::error::{Error, Result};
use crate::semilinear::{image_length, solve_linear, Matrix, PresentedModule, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedReport {
    pub ambient_level: usize,
    pub n: usize,
    /// Per factor, `a_i` with `X ≅ ⊕ W_N/p^{a_i}`.
    pub invariants: Vec<Vec<usize>>,
    pub killed_by_p_n: bool,
    pub projective: bool,
    /// Ranks over `W_n` when projective.
    pub ranks: Option<Vec<usize>>,
    /// `tor_exact_check`, when `X` is killed by `p^n`.
    pub tor_exact: Option<bool>,
    pub failures: Vec<Failure>,
}

fn check_levels(x: &PresentedModule, n: usize) -> Result<()> {
    if n == 0 || n > x.ambient_level() {
        return Err(Error::LevelOutOfRange {
            level: n,
            min: 1,
            max: x.ambient_level(),
        });
    }
    Ok(())
}

/// `X` is killed by `p^n` iff every `a_i ≤ n`, and is projective over
/// `W_n` iff moreover every `a_i ∈ {0, n}`.
pub fn validate_bkn_presented(x: &PresentedModule, n: usize) -> Result<PresentedReport> {
    check_levels(x, n)?;
    let invariants = x.invariants();
    let killed_by_p_n = invariants.iter().flatten().all(|&a| a <= n);
    let mut failures = Vec::new();
    for (s, inv) in invariants.iter().enumerate() {
        if !inv.iter().all(|&a| a == 0 || a == n) {
            failures.push(Failure {
                code: FailureCode::ProjWn,
                factor: Some(s),
                residue: None,
            });
        }
    }
    let projective = failures.is_empty();
    let ranks = projective.then(|| {
        invariants
            .iter()
            .map(|inv| inv.iter().filter(|&&a| a == n).count())
            .collect()
    });
    let tor_exact = if killed_by_p_n {
        Some(tor_exact_check(x, n)?)
    } else {
        None
    };
    if tor_exact == Some(false) {
        failures.push(Failure {
            code: FailureCode::Tor,
            factor: None,
            residue: None,
        });
    }
    Ok(PresentedReport {
        ambient_level: x.ambient_level(),
        n,
        invariants,
        killed_by_p_n,
        projective,
        ranks,
        tor_exact,
        failures,
    })
}

/// Exactness of `X →p^{n-1} X →p X`, by lengths:
/// `len p^{n-1}X = len [p^{n-1}I | A] − len A` and
/// `len X[p] = r·N − len [pI | A]`, where `len` is the image length. The
/// first is contained in the second, so equality of the `f`-weighted sums
/// decides it.
pub fn tor_exact_check(x: &PresentedModule, n: usize) -> Result<bool> {
    check_levels(x, n)?;
    let big_n = x.ambient_level();
    let mut image_total = 0u64;
    let mut kernel_total = 0u64;
    for (a, &f) in x.blocks().iter().zip(x.base().degrees()) {
        let ring = a.ring();
        let r = a.rows();
        for j in 0..r {
            let mut e = vec![ring.zero(); r];
            e[j] = ring.p_power(n);
            if let Solution::NoSolution { .. } = solve_linear(a, &e) {
                return Err(Error::NotKilled { n });
            }
        }
        let len_a = image_length(a) as u64;
        let with = |k: usize| -> Result<u64> {
            let stacked = Matrix::scalar(ring, r, &ring.p_power(k)).hstack(a)?;
            Ok(image_length(&stacked) as u64)
        };
        let im = with(n - 1)? - len_a;
        let ker = (r * big_n) as u64 - with(1)?;
        image_total += u64::from(f) * im;
        kernel_total += u64::from(f) * ker;
    }
    Ok(image_total == kernel_total)
}
