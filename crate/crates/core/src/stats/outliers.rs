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
use crate::error::{Error, Result};

/// Default width of the exclusion band, in standard deviations.
pub const DEFAULT_EXCLUSION_SD: f64 = 2.5;

/// Flags values inside `mean ± k·SD` (population SD) as retained.
///
/// A constant series has no defined band, so every value is retained.
pub fn outlier_mask(values: &[f64], k: f64) -> Result<Vec<bool>> {
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: values.len(),
        });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd == 0.0 {
        return Ok(vec![true; values.len()]);
    }
    Ok(values.iter().map(|v| (v - mean).abs() <= k * sd).collect())
}

/// Indices retained on both series of a pair.
pub fn exclude_pair(x: &[f64], y: &[f64], k: f64) -> Result<Vec<usize>> {
    let (mx, my) = (outlier_mask(x, k)?, outlier_mask(y, k)?);
    Ok((0..x.len()).filter(|&i| mx[i] && my[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_series_keeps_everything() {
        assert_eq!(outlier_mask(&[4.0; 6], 2.5).unwrap(), vec![true; 6]);
    }

    #[test]
    fn single_spike_is_dropped() {
        // mean 10, SD 30: the spike sits 3 SD out
        let mut v = vec![0.0; 9];
        v.push(100.0);
        let mask = outlier_mask(&v, 2.5).unwrap();
        assert_eq!(mask.iter().filter(|&&k| !k).count(), 1);
        assert!(!mask[9]);
        // but survives a 3 SD band
        assert!(outlier_mask(&v, 3.0).unwrap()[9]);
    }

    #[test]
    fn needs_two_values() {
        assert!(matches!(
            outlier_mask(&[1.0], 2.5),
            Err(Error::InsufficientData { .. })
        ));
    }

    proptest! {
        #[test]
        fn matches_brute_force_filter(values in proptest::collection::vec(-1e3f64..1e3, 2..60), k in 0.5f64..3.5) {
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let removed = values.iter().filter(|v| ((*v - mean) / var.sqrt()).abs() > k).count();
            let mask = outlier_mask(&values, k).unwrap();
            // skip values sitting on the boundary within rounding
            let borderline = values.iter().any(|v| (((v - mean).abs() / var.sqrt()) - k).abs() < 1e-9);
            prop_assume!(!borderline);
            prop_assert_eq!(mask.iter().filter(|&&keep| !keep).count(), removed);
        }
    }
}
