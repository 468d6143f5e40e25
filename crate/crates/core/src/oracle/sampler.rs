/// Deterministic Halton sequence in `[0, 1)^D`.
#[derive(Debug, Clone)]
pub struct Halton<const D: usize> {
    index: u64,
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

impl<const D: usize> Halton<D> {
    pub fn new() -> Self {
        assert!(D >= 1 && D <= PRIMES.len(), "Halton dimension out of range");
        // skip the origin
        Self { index: 1 }
    }
}

impl<const D: usize> Default for Halton<D> {
    fn default() -> Self {
        Self::new()
    }
}

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = [f64; D];

    fn next(&mut self) -> Option<[f64; D]> {
        let mut p = [0.0; D];
        for (v, &b) in p.iter_mut().zip(PRIMES.iter()) {
            *v = radical_inverse(self.index, b);
        }
        self.index += 1;
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        let v: Vec<f64> = (1..5).map(|i| radical_inverse(i, 2)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn deterministic_and_in_unit_cube() {
        let a: Vec<[f64; 3]> = Halton::<3>::new().take(200).collect();
        let b: Vec<[f64; 3]> = Halton::<3>::new().take(200).collect();
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|&x| (0.0..1.0).contains(&x)));
        let mean: f64 = a.iter().map(|p| p[1]).sum::<f64>() / 200.0;
        assert!((mean - 0.5).abs() < 0.02);
    }
}
