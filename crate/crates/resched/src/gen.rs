//! Instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resched_core::{makespan::adversarial_instance, Job, JobSet};

/// Ranges for random instances: volume log-uniform on `[v_min, v_max]`,
/// requirement uniform on `(r_min, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distribution {
    pub v_min: f64,
    pub v_max: f64,
    pub r_min: f64,
}

impl Default for Distribution {
    fn default() -> Self {
        Distribution { v_min: 0.1, v_max: 10.0, r_min: 0.05 }
    }
}

impl Distribution {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.v_min > 0.0 && self.v_max >= self.v_min && self.v_max.is_finite()) {
            return Err(format!("need 0 < vmin <= vmax, got {} and {}", self.v_min, self.v_max));
        }
        if !(0.0..1.0).contains(&self.r_min) {
            return Err(format!("need 0 <= rmin < 1, got {}", self.r_min));
        }
        Ok(())
    }
}

/// Deterministic for a fixed seed; equal volumes are perturbed apart.
pub fn random_instance(n: usize, seed: u64, dist: &Distribution) -> JobSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (dist.v_min.ln(), dist.v_max.ln());
    let jobs = (0..n)
        .map(|_| {
            let v = (lo + rng.gen::<f64>() * (hi - lo)).exp();
            let r = 1.0 - rng.gen::<f64>() * (1.0 - dist.r_min);
            Job::new(v, r).expect("generated job lies in range")
        })
        .collect();
    JobSet::new(jobs).perturb_ties()
}

pub fn adversarial(n: usize) -> JobSet {
    adversarial_instance(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let d = Distribution::default();
        assert_eq!(random_instance(5, 7, &d), random_instance(5, 7, &d));
        assert_ne!(random_instance(5, 7, &d), random_instance(5, 8, &d));
        assert!(random_instance(0, 7, &d).is_empty());
    }

    #[test]
    fn ranges() {
        let d = Distribution::default();
        let jobs = random_instance(500, 1, &d);
        assert!(jobs.is_non_degenerate());
        for j in &jobs {
            assert!((0.1..=10.0 * (1.0 + 1e-9)).contains(&j.volume()));
            assert!(j.requirement() > 0.05 && j.requirement() <= 1.0);
        }
    }

    #[test]
    fn adversarial_family() {
        let jobs = adversarial(3);
        let r: Vec<f64> = jobs.iter().map(|j| j.requirement()).collect();
        assert_eq!(r, vec![1.0, 0.5, 1.0 / 3.0]);
        assert!(jobs.iter().all(|j| (j.volume() - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn bad_distribution() {
        assert!(Distribution { v_min: 0.0, ..Default::default() }.validate().is_err());
        assert!(Distribution { r_min: 1.0, ..Default::default() }.validate().is_err());
        assert!(Distribution::default().validate().is_ok());
    }
}
