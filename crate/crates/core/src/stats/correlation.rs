// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

use super::outliers::exclude_pair;

/// Average ranks (1-based); tied values share the mean of their rank range.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho of two equally long series.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len(), "paired series");
    if x.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: x.len(),
        });
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Spearman's rho over the pairs where both sides are present.
pub fn spearman_paired(x: &[Option<f64>], y: &[Option<f64>]) -> Result<f64> {
    let (a, b) = complete_pairs(x, y);
    spearman(&a, &b)
}

fn complete_pairs(x: &[Option<f64>], y: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(x.len(), y.len(), "paired series");
    x.iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .unzip()
}

/// Two-sided p-value of rho under the t approximation with n - 2 degrees of freedom.
pub fn spearman_p_value(rho: f64, n: usize) -> f64 {
    if n < 3 {
        return 1.0;
    }
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// A Spearman correlation with the number of pairs it used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Correlation {
    pub rho: f64,
    pub n: usize,
    /// Parametric two-sided p-value.
    pub p_value: f64,
}

/// Correlates two series: drops pairs with a missing side, then (when
/// `exclusion_sd` is set) drops pairs lying outside mean ± k·SD on either
/// side, then computes Spearman's rho.
pub fn correlate(
    x: &[Option<f64>],
    y: &[Option<f64>],
    exclusion_sd: Option<f64>,
) -> Result<Correlation> {
    let (mut a, mut b) = complete_pairs(x, y);
    if let Some(k) = exclusion_sd {
        if a.len() >= 2 {
            let keep = exclude_pair(&a, &b, k)?;
            a = keep.iter().map(|&i| a[i]).collect();
            b = keep.iter().map(|&i| b[i]).collect();
        }
    }
    let rho = spearman(&a, &b)?;
    Ok(Correlation {
        rho,
        n: a.len(),
        p_value: spearman_p_value(rho, a.len()),
    })
}
