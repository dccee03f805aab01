//! Seeded random test functions and wave functions for property checks.

use std::sync::Arc;

use rand::rngs::Xoshiro256PlusPlus;
use rand::{RngExt, SeedableRng};

use crate::hilbert::WaveFunction;
use crate::kspace::Grid;
use crate::minkowski::{Vec4, C64};
use crate::testfn::{Mode, Polarization, Profile, ProfileKind, TestFunction};

/// Draws test functions whose spatial centres cluster around a common axis,
/// so that members of a family overlap on the light cone.
pub struct Sampler {
    rng: Xoshiro256PlusPlus,
    axis: [f64; 3],
    spread: f64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        let mut s = Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            axis: [0.0, 0.0, 1.0],
            spread: 0.5,
        };
        s.axis = s.unit3();
        s
    }

    /// Sets the relative spread of mode directions around the axis.
    pub fn with_spread(mut self, spread: f64) -> Self {
        self.spread = spread;
        self
    }

    fn direction(&mut self) -> [f64; 3] {
        let j = self.unit3();
        let v: [f64; 3] = std::array::from_fn(|i| self.axis[i] + self.spread * j[i]);
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / n)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn complex(&mut self, scale: f64) -> C64 {
        C64::new(self.uniform(-scale, scale), self.uniform(-scale, scale))
    }

    pub fn vector(&mut self, scale: f64) -> Vec4 {
        std::array::from_fn(|_| self.uniform(-scale, scale))
    }

    pub fn unit3(&mut self) -> [f64; 3] {
        loop {
            let v: [f64; 3] = std::array::from_fn(|_| self.uniform(-1.0, 1.0));
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 0.1 && n <= 1.0 {
                return v.map(|x| x / n);
            }
        }
    }

    /// A conserved mode whose box meets the positive light cone only at
    /// radii inside `[0.06, 2.94]`.
    pub fn mode(&mut self, amplitude: f64) -> Mode {
        let c0 = self.uniform(1.4, 1.6);
        let h0 = (c0 - 0.06).min(2.94 - c0);
        let n = self.direction();
        let center = [c0, n[0] * c0, n[1] * c0, n[2] * c0];
        let half_width = [
            h0,
            self.uniform(2.2, 3.0),
            self.uniform(2.2, 3.0),
            self.uniform(2.2, 3.0),
        ];
        let kind = if self.rng.random_bool(0.5) {
            ProfileKind::SeparableBump
        } else {
            ProfileKind::GaussianWindowedBump
        };
        let z = self.complex(1.0);
        let amp = z / z.norm() * amplitude * self.uniform(0.5, 1.0);
        let u = std::array::from_fn(|_| self.complex(1.0));
        let v = std::array::from_fn(|_| self.complex(1.0));
        let profile = Profile::new(kind, center, half_width, amp).expect("valid random profile");
        Mode::new(Polarization::Conserved { u, v }, profile)
    }

    pub fn test_function(&mut self, amplitude: f64) -> TestFunction {
        TestFunction::new(vec![self.mode(amplitude)])
    }

    pub fn family(&mut self, n: usize, amplitude: f64) -> Vec<TestFunction> {
        (0..n).map(|_| self.test_function(amplitude)).collect()
    }

    /// Smooth random wave function: a few complex plane waves in `k`.
    pub fn wave_function(&mut self, grid: &Arc<Grid>) -> WaveFunction {
        let terms: Vec<([C64; 3], [f64; 3])> = (0..3)
            .map(|_| {
                let c = std::array::from_fn(|_| self.complex(1.0));
                let b = std::array::from_fn(|_| self.uniform(-2.0, 2.0));
                (c, b)
            })
            .collect();
        WaveFunction::from_fn(grid.clone(), |n| {
            let mut out = [C64::new(0.0, 0.0); 3];
            for (c, b) in &terms {
                let ph = C64::from_polar(1.0, b[0] * n.k[0] + b[1] * n.k[1] + b[2] * n.k[2]);
                for i in 0..3 {
                    out[i] += c[i] * ph;
                }
            }
            out
        })
        .expect("finite random wave function")
    }
}
