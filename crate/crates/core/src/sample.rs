use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

/// Draws `m` distinct indices without replacement, favouring heavier weights.
///
/// Uses exponential keys: item `n` gets `u_n^(1/w_n)` for uniform `u_n` and
/// the `m` largest keys win. Keys are compared as `ln(u_n) / w_n`. The
/// returned indices are sorted ascending.
pub fn weighted_sample<R: Rng + ?Sized>(
    weights: &[f64],
    m: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = weights.len();
    if m > n {
        return Err(Error::SampleTooLarge {
            requested: m,
            available: n,
        });
    }
    if let Some((index, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w > 0.0))
    {
        return Err(Error::BadWeight { index, value });
    }
    if m == n {
        return Ok((0..n).collect());
    }
    let mut keyed: Vec<(f64, usize)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            // u in (0, 1]
            let u = 1.0 - rng.random::<f64>();
            (libm::log(u) / w, i)
        })
        .collect();
    keyed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut picked: Vec<usize> = keyed[..m].iter().map(|&(_, i)| i).collect();
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rng as ChaCha;
    use alloc::vec;
    use rand::SeedableRng;

    #[test]
    fn exhaustion_and_errors() {
        let mut rng = ChaCha::seed_from_u64(1);
        assert_eq!(
            weighted_sample(&[0.1, 5.0, 2.0], 3, &mut rng).unwrap(),
            vec![0, 1, 2]
        );
        assert!(weighted_sample(&[1.0, 1.0], 3, &mut rng).is_err());
        assert!(weighted_sample(&[1.0, 0.0], 1, &mut rng).is_err());
        assert!(weighted_sample(&[1.0, f64::NAN], 1, &mut rng).is_err());
        assert_eq!(weighted_sample(&[1.0, 1.0], 0, &mut rng).unwrap(), vec![]);
    }

    #[test]
    fn dominant_weight_wins() {
        let mut rng = ChaCha::seed_from_u64(7);
        let w = [1.0, 1e-6, 1e-6, 1e-6];
        let hits = (0..100_000)
            .filter(|_| weighted_sample(&w, 1, &mut rng).unwrap() == vec![0])
            .count();
        assert!(hits as f64 / 1e5 > 0.999, "{hits}");
    }

    #[test]
    fn deterministic_for_seed() {
        let w: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let a = weighted_sample(&w, 5, &mut ChaCha::seed_from_u64(3)).unwrap();
        let b = weighted_sample(&w, 5, &mut ChaCha::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.windows(2).all(|p| p[0] < p[1]));
    }
}
