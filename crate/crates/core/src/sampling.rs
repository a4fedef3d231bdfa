//! Seeded sampling of cone points.
//!
//! Each sample index gets its own ChaCha stream, so results do not depend on
//! how samples are split across threads. Coefficients are quantized to
//! `k / COEFF_DEN` so the same samples are exact rationals on the exact path.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cone::PolyhedralCone;
use crate::linalg::{add, dot, scale};
use crate::scalar::{quantize_positive, Scalar};

pub const COEFF_DEN: i64 = 10_000;

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Smallest index whose check fails, evaluated in parallel.
pub fn first_failure<T: Send>(
    n: usize,
    check: impl Fn(usize) -> Option<T> + Sync + Send,
) -> Option<(usize, T)> {
    (0..n)
        .into_par_iter()
        .filter_map(|i| check(i).map(|t| (i, t)))
        .min_by_key(|(i, _)| *i)
}

#[derive(Debug, Clone)]
pub struct ConeSampler<S> {
    dim: usize,
    generators: Vec<Vec<S>>,
    /// For each facet normal, the generators lying on it.
    facet_generators: Vec<Vec<usize>>,
}

impl<S: Scalar> ConeSampler<S> {
    pub fn new(cone: &PolyhedralCone<S>) -> Self {
        let generators = cone.extreme_rays();
        let facet_generators = cone
            .facet_normals()
            .iter()
            .map(|a| {
                generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| dot(a, g).negligible(crate::linalg::norm(g)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        ConeSampler { dim: cone.dim(), generators, facet_generators }
    }

    pub fn generators(&self) -> &[Vec<S>] {
        &self.generators
    }

    fn positive_coeff(rng: &mut ChaCha8Rng) -> S {
        let g: f64 = rng.sample(StandardNormal);
        quantize_positive(g, COEFF_DEN)
    }

    fn combine(&self, idx: &[usize], rng: &mut ChaCha8Rng) -> Vec<S> {
        let mut x = vec![S::zero(); self.dim];
        for &i in idx {
            let c = Self::positive_coeff(rng);
            x = add(&x, &scale(&c, &self.generators[i]));
        }
        x
    }

    /// Strictly positive combination of all generators (interior when solid).
    pub fn interior_point(&self, rng: &mut ChaCha8Rng) -> Vec<S> {
        let all: Vec<usize> = (0..self.generators.len()).collect();
        self.combine(&all, rng)
    }

    /// Nonzero cone point; with probability 1/3 some generators are dropped
    /// so that boundary points are well represented.
    pub fn cone_point(&self, rng: &mut ChaCha8Rng) -> Vec<S> {
        let n = self.generators.len();
        if rng.random_range(0..3) == 0 {
            let mut idx: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if idx.is_empty() {
                idx.push(rng.random_range(0..n));
            }
            self.combine(&idx, rng)
        } else {
            self.interior_point(rng)
        }
    }

    pub fn num_facets(&self) -> usize {
        self.facet_generators.len()
    }

    /// Nonzero point on the face cut out by `facet`; `None` if that normal
    /// supports no nonzero face.
    pub fn boundary_point_on(&self, facet: usize, rng: &mut ChaCha8Rng) -> Option<Vec<S>> {
        let gens = &self.facet_generators[facet];
        if gens.is_empty() {
            return None;
        }
        let mut idx: Vec<usize> = gens.iter().copied().filter(|_| rng.random_bool(0.7)).collect();
        if idx.is_empty() {
            idx.push(gens[rng.random_range(0..gens.len())]);
        }
        Some(self.combine(&idx, rng))
    }

    /// Nonzero boundary point, cycling through facets by `index`.
    pub fn boundary_point(&self, index: usize, rng: &mut ChaCha8Rng) -> Vec<S> {
        let m = self.facet_generators.len();
        (0..m)
            .find_map(|k| self.boundary_point_on((index + k) % m, rng))
            .expect("a pointed solid cone has boundary faces")
    }

    /// Quantized Gaussian vector of the ambient space.
    pub fn space_point(&self, rng: &mut ChaCha8Rng) -> Vec<S> {
        (0..self.dim)
            .map(|_| {
                let g: f64 = rng.sample(StandardNormal);
                let q: S = quantize_positive(g, COEFF_DEN);
                if g < 0.0 {
                    -q
                } else {
                    q
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn samples_are_deterministic_and_in_cone() {
        let k = PolyhedralCone::<Rational>::new(
            2,
            vec![
                vec![Rational::from_i64(1), Rational::from_i64(0)],
                vec![Rational::from_i64(1), Rational::from_i64(1)],
            ],
        )
        .unwrap();
        let s = ConeSampler::new(&k);
        for i in 0..50 {
            let a = s.cone_point(&mut sample_rng(7, i));
            let b = s.cone_point(&mut sample_rng(7, i));
            assert_eq!(a, b);
            assert!(k.contains_scaled(&a, 0.0));
            let p = s.interior_point(&mut sample_rng(7, i));
            assert!(k.interior_contains(&p, 0.0).unwrap());
            let b = s.boundary_point(i as usize, &mut sample_rng(9, i));
            assert!(k.on_boundary(&b, 0.0));
        }
    }

    #[test]
    fn first_failure_returns_smallest_index() {
        let f = first_failure(1000, |i| (i % 97 == 5 && i > 100).then_some(i));
        assert_eq!(f, Some((102, 102)));
        assert!(first_failure(10, |_| None::<()>).is_none());
    }
}
