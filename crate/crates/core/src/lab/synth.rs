//! Synthetic defect-position ensembles: complete spatial randomness and a
//! clustered Neyman-Scott process with tunable correlation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};

use super::field::BoxSpec;
use super::LabError;

/// Derives a stream-independent sub-seed for one sweep cell from the master
/// seed and the cell's parameters, so that results do not depend on the
/// order in which cells are evaluated.
pub fn cell_seed(master_seed: u64, density_per_m3: f64, correlation: f64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ density_per_m3.to_bits());
    h = splitmix64(h ^ correlation.to_bits());
    h
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_density(density_per_m3: f64) -> Result<(), LabError> {
    if !(density_per_m3.is_finite() && density_per_m3 > 0.0) {
        return Err(LabError::InvalidConfig(format!(
            "defect density must be finite and positive, got {density_per_m3}"
        )));
    }
    Ok(())
}

fn sample_poisson_count(rng: &mut ChaCha8Rng, mean: f64) -> Result<usize, LabError> {
    let dist = Poisson::new(mean)
        .map_err(|e| LabError::InvalidConfig(format!("Poisson({mean}): {e}")))?;
    let n: f64 = dist.sample(rng);
    Ok(n as usize)
}

/// Homogeneous Poisson (complete spatial randomness) defect positions with
/// expected count `density * volume`.
pub fn synth_poisson(
    box_: &BoxSpec,
    density_per_m3: f64,
    seed: u64,
) -> Result<Vec<[f64; 3]>, LabError> {
    check_density(density_per_m3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sample_poisson_count(&mut rng, density_per_m3 * box_.volume_m3())?;
    let edges = box_.edges();
    Ok((0..n)
        .map(|_| {
            [
                rng.random_range(0.0..edges[0]),
                rng.random_range(0.0..edges[1]),
                rng.random_range(0.0..edges[2]),
            ]
        })
        .collect())
}

/// Mean cluster size as a function of the correlation knob `c` in [0, 1]:
/// 1 defect per parent at c = 0 (CSR) up to 20 at c = 1.
pub fn cluster_mean_size(correlation: f64) -> f64 {
    1.0 + 19.0 * correlation
}

/// Cluster spread as a function of `c`: a quarter of the shortest box edge
/// at c = 0 shrinking to 1% of it at c = 1.
pub fn cluster_sigma_m(box_: &BoxSpec, correlation: f64) -> f64 {
    box_.min_edge_m() * (0.25 - 0.24 * correlation)
}

/// Neyman-Scott clustered defect positions with expected count
/// `density * volume` and correlation knob `c` in [0, 1]: parent centres are
/// Poisson with intensity `density / mu(c)`, each spawning a Poisson-`mu(c)`
/// number of children scattered isotropically with a Gaussian of width
/// `sigma(c)` and wrapped periodically into the box.
pub fn synth_neyman_scott(
    box_: &BoxSpec,
    density_per_m3: f64,
    correlation: f64,
    seed: u64,
) -> Result<Vec<[f64; 3]>, LabError> {
    check_density(density_per_m3)?;
    if !(0.0..=1.0).contains(&correlation) || !correlation.is_finite() {
        return Err(LabError::InvalidConfig(format!(
            "correlation must lie in [0, 1], got {correlation}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu = cluster_mean_size(correlation);
    let sigma = cluster_sigma_m(box_, correlation);
    let normal: Normal<f64> = Normal::new(0.0, sigma)
        .map_err(|e| LabError::InvalidConfig(format!("Normal(0, {sigma}): {e}")))?;
    let n_parents =
        sample_poisson_count(&mut rng, density_per_m3 * box_.volume_m3() / mu)?;
    let edges = box_.edges();
    let mut points = Vec::new();
    for _ in 0..n_parents {
        let parent = [
            rng.random_range(0.0..edges[0]),
            rng.random_range(0.0..edges[1]),
            rng.random_range(0.0..edges[2]),
        ];
        let n_children = sample_poisson_count(&mut rng, mu)?;
        for _ in 0..n_children {
            let mut child = [0.0; 3];
            for (i, c) in child.iter_mut().enumerate() {
                *c = (parent[i] + normal.sample(&mut rng)).rem_euclid(edges[i]);
            }
            points.push(child);
        }
    }
    Ok(points)
}

/// Synthesises a defect ensemble for one sweep cell: CSR at `correlation = 0`
/// and Neyman-Scott clustering otherwise.
pub fn synth(
    box_: &BoxSpec,
    density_per_m3: f64,
    correlation: f64,
    seed: u64,
) -> Result<Vec<[f64; 3]>, LabError> {
    if correlation == 0.0 {
        synth_poisson(box_, density_per_m3, seed)
    } else {
        synth_neyman_scott(box_, density_per_m3, correlation, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_points_stay_inside_box() {
        let b = BoxSpec::new(1.0e-4, 2.0e-4, 0.5e-4).unwrap();
        let pts = synth_poisson(&b, 1.0e16, 7).unwrap();
        assert!(!pts.is_empty());
        assert!(pts.iter().all(|&p| b.contains(p)));
    }

    #[test]
    fn poisson_count_matches_intensity() {
        // Expected count rho V = 1000; the mean over seeds should land
        // within a few standard errors (sigma/sqrt(n_seeds) ~ 7).
        let b = BoxSpec::cube(1.0e-4).unwrap();
        let density = 1.0e15; // rho V = 1000
        let mean: f64 = (0..20)
            .map(|s| synth_poisson(&b, density, s).unwrap().len() as f64)
            .sum::<f64>()
            / 20.0;
        assert!((mean - 1000.0).abs() < 30.0, "mean count {mean}");
    }

    #[test]
    fn neyman_scott_count_matches_intensity() {
        let b = BoxSpec::cube(1.0e-4).unwrap();
        let density = 1.0e15;
        let mean: f64 = (0..20)
            .map(|s| synth_neyman_scott(&b, density, 0.8, s).unwrap().len() as f64)
            .sum::<f64>()
            / 20.0;
        // Clustered counts are over-dispersed (variance ~ rho V (1 + mu)),
        // so allow a wider band than the CSR case.
        assert!((mean - 1000.0).abs() < 120.0, "mean count {mean}");
    }

    #[test]
    fn neyman_scott_points_are_wrapped_into_box() {
        let b = BoxSpec::cube(1.0e-4).unwrap();
        let pts = synth_neyman_scott(&b, 1.0e15, 1.0, 3).unwrap();
        assert!(pts.iter().all(|&p| b.contains(p)));
    }

    #[test]
    fn clustering_raises_pair_concentration() {
        // A crude clustering witness: the fraction of points in the densest
        // octant of the box grows with the correlation knob.
        let b = BoxSpec::cube(1.0e-4).unwrap();
        let octant_peak = |pts: &[[f64; 3]]| {
            let mut counts = [0usize; 8];
            for p in pts {
                let idx = (p[0] > 0.5e-4) as usize
                    | ((p[1] > 0.5e-4) as usize) << 1
                    | ((p[2] > 0.5e-4) as usize) << 2;
                counts[idx] += 1;
            }
            *counts.iter().max().unwrap() as f64 / pts.len() as f64
        };
        let mut csr_peak = 0.0;
        let mut clustered_peak = 0.0;
        for s in 0..8 {
            csr_peak += octant_peak(&synth_poisson(&b, 2.0e15, s).unwrap());
            clustered_peak += octant_peak(&synth_neyman_scott(&b, 2.0e15, 1.0, s).unwrap());
        }
        assert!(
            clustered_peak > csr_peak * 1.1,
            "clustered {clustered_peak} vs csr {csr_peak}"
        );
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let b = BoxSpec::cube(1.0e-4).unwrap();
        let a = synth_poisson(&b, 1.0e15, 42).unwrap();
        let a2 = synth_poisson(&b, 1.0e15, 42).unwrap();
        assert_eq!(a.len(), a2.len());
        for (p, q) in a.iter().zip(a2.iter()) {
            assert_eq!(p.map(f64::to_bits), q.map(f64::to_bits));
        }
        let c = synth_poisson(&b, 1.0e15, 43).unwrap();
        assert!(a.len() != c.len() || a[0] != c[0]);
    }

    #[test]
    fn cell_seed_is_order_free_and_sensitive() {
        let s1 = cell_seed(5, 1.0e15, 0.0);
        assert_eq!(s1, cell_seed(5, 1.0e15, 0.0));
        assert_ne!(s1, cell_seed(5, 1.0e15, 0.5));
        assert_ne!(s1, cell_seed(5, 2.0e15, 0.0));
        assert_ne!(s1, cell_seed(6, 1.0e15, 0.0));
    }

    #[test]
    fn invalid_parameters_are_refused() {
        let b = BoxSpec::cube(1.0e-4).unwrap();
        assert!(synth_poisson(&b, 0.0, 1).is_err());
        assert!(synth_poisson(&b, -1.0, 1).is_err());
        assert!(synth_neyman_scott(&b, 1.0e15, 1.5, 1).is_err());
        assert!(synth_neyman_scott(&b, 1.0e15, -0.1, 1).is_err());
    }
}
