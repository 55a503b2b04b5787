use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::core_model::{LabeledSample, Player};
use crate::error::{Error, Result};
use crate::hcn::{Formula, HedonicNet, Rule};
use crate::scalar::{convert, to_exact, Scalar};

/// Solves `A β = y` exactly, where row `r` of `A` marks which formula the
/// `r`-th sampled coalition containing `i` satisfies and `y` holds `v_i`.
/// Free unknowns are set to zero.
pub fn learn_hcn_linear<T: Scalar>(formulas: &[Formula], sample: &LabeledSample<T>, i: Player) -> Result<Vec<BigRational>> {
    let width = formulas.len();
    let mut rows: Vec<Vec<BigRational>> = sample
        .containing(i)
        .map(|e| {
            let mut row: Vec<BigRational> = formulas
                .iter()
                .map(|f| if f.eval(e.coalition) { BigRational::from_integer(1.into()) } else { BigRational::zero() })
                .collect();
            row.push(to_exact(e.value(i).expect("entry contains i")));
            row
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..width {
        // pivot on the largest magnitude in the column
        let Some(best) = (r..rows.len()).filter(|&k| !rows[k][c].is_zero()).max_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(r, best);
        let p = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[width].is_zero()) {
        return Err(Error::Inconsistent { player: i });
    }
    let mut beta = vec![BigRational::zero(); width];
    for (k, &c) in pivots.iter().enumerate() {
        beta[c] = rows[k][width].clone();
    }
    Ok(beta)
}

/// Runs the linear learner for every player with the same per-player
/// formula family and assembles the net.
pub fn learn_linear_net<T: Scalar>(
    n: usize,
    formulas: impl Fn(Player) -> Vec<Formula>,
    sample: &LabeledSample<T>,
) -> Result<HedonicNet<T>> {
    let rules = (0..n)
        .map(|i| {
            let phis = formulas(i);
            let beta = learn_hcn_linear(&phis, sample, i)?;
            Ok(phis.into_iter().zip(beta).map(|(f, b)| Rule::new(f, convert::<BigRational, T>(&b))).collect())
        })
        .collect::<Result<_>>()?;
    Ok(HedonicNet::new(rules))
}

/// The known formula families of the classes with linear encodings.
pub mod families {
    use super::*;

    pub fn additive(n: usize, i: Player) -> Vec<Formula> {
        (0..n).filter(|&j| j != i).map(Formula::var).collect()
    }

    pub fn fractional(n: usize, i: Player) -> Vec<Formula> {
        (0..n)
            .filter(|&j| j != i)
            .flat_map(|j| (2..=n).map(move |k| Formula::and([Formula::var(j), Formula::CardEq(k)])))
            .collect()
    }

    pub fn anonymous(n: usize, _i: Player) -> Vec<Formula> {
        (1..=n).map(Formula::CardEq).collect()
    }
}
