//! Exact rational re-evaluation of the bound formulas, independent of the
//! floating-point implementation under test.

#![allow(dead_code)]

use contractive_core::metric::ModulusKind;
use contractive_core::Modulus;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `phi(t)` computed exactly from the modulus parameters.
pub fn phi_exact(m: &Modulus, t: &BigRational) -> BigRational {
    let p = m.params();
    match m.kind() {
        ModulusKind::Constant => q(p[0]),
        ModulusKind::RationalDecay => BigRational::one() / (BigRational::one() + q(p[0]) * t),
        ModulusKind::Nonexpansive => BigRational::one(),
        ModulusKind::PiecewiseTable => {
            let knots: Vec<(BigRational, BigRational)> =
                p.chunks(2).map(|c| (q(c[0]), q(c[1]))).collect();
            for w in knots.windows(2) {
                let ((t0, v0), (t1, v1)) = (&w[0], &w[1]);
                if t >= t0 && t < t1 {
                    return v0 + (t - t0) / (t1 - t0) * (v1 - v0);
                }
            }
            knots.last().unwrap().1.clone()
        }
    }
}

/// Smallest integer strictly above `v`, with the relative tie tolerance `1e-12`
/// applied to the exact value.
pub fn least_integer_above_exact(v: &BigRational) -> u64 {
    let one = BigRational::one();
    let scale = if *v > one { v.clone() } else { one.clone() };
    let shifted = v + q(1e-12) * scale;
    (shifted.floor() + one)
        .to_integer()
        .to_u64()
        .expect("bound fits in u64")
}

pub fn p2_k_exact(eps: f64, m: &Modulus, c0: f64, dtheta: f64) -> u64 {
    let e = q(eps);
    let gap = BigRational::one() - phi_exact(m, &e);
    least_integer_above_exact(&((int(2) * q(c0) + q(dtheta)) / (e * gap)))
}

pub fn p3_eps_exact(delta: f64, m: &Modulus) -> BigRational {
    let d = q(delta);
    let gap = BigRational::one() - phi_exact(m, &d);
    d * gap / int(8)
}

pub fn p4_k_exact(eps: f64, m: &Modulus, c0: f64) -> u64 {
    let e = q(eps);
    let gap = BigRational::one() - phi_exact(m, &e);
    least_integer_above_exact(&(int(4) * q(c0) / (gap * e)))
}

pub struct ExactConstants {
    pub delta0: BigRational,
    pub delta1: BigRational,
    pub delta: BigRational,
    pub k: u64,
}

pub fn stability_exact(radius: f64, eps: f64, m: &Modulus) -> ExactConstants {
    let one = BigRational::one();
    let (mr, e) = (q(radius), q(eps));
    let delta0 = &mr * (&one - phi_exact(m, &(&mr / int(2)))) / int(8);
    let delta1 = &e * (&one - phi_exact(m, &(&e / int(2)))) / int(8);
    let gap = &one - phi_exact(m, &e);
    let third = &e * &gap / int(4);
    let mut min = delta0.clone();
    for c in [&delta1, &third] {
        if *c < min {
            min = c.clone();
        }
    }
    let delta = min / int(2);
    let threshold = int(4) * (&mr + &one) / (&gap * &e) + int(4);
    ExactConstants {
        delta0,
        delta1,
        delta,
        k: least_integer_above_exact(&threshold),
    }
}

/// `|a - b| <= tol * max(1, |b|)`.
pub fn close(a: f64, b: &BigRational, tol: f64) -> bool {
    let diff = q(a) - b;
    let abs = |x: BigRational| if x < BigRational::zero() { -x } else { x };
    let scale = abs(b.clone());
    let scale = if scale > BigRational::one() {
        scale
    } else {
        BigRational::one()
    };
    abs(diff) <= q(tol) * scale
}

pub struct Draw {
    pub epsilon: f64,
    pub radius: f64,
    pub c0: f64,
    pub dtheta: f64,
    pub modulus: Modulus,
}

/// Rakotch modulus of a random kind with `1 - phi` kept away from 0 on the
/// drawn arguments.
pub fn random_modulus(rng: &mut ChaCha8Rng) -> Modulus {
    match rng.random_range(0..3) {
        0 => Modulus::constant(rng.random_range(0.0..0.95)).unwrap(),
        1 => Modulus::rational_decay_scaled(rng.random_range(0.5..5.0)).unwrap(),
        _ => {
            let n = rng.random_range(2..6);
            let mut knots = vec![(0.0, 1.0)];
            let (mut t, mut v) = (0.0, rng.random_range(0.5..0.99));
            for _ in 0..n {
                t += rng.random_range(0.05..2.0);
                knots.push((t, v));
                v *= rng.random_range(0.5..1.0);
            }
            Modulus::table(knots).unwrap()
        }
    }
}

pub fn random_draws(n: usize, seed: u64) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Draw {
            epsilon: rng.random_range(0.01..5.0),
            radius: rng.random_range(0.1..100.0),
            c0: rng.random_range(0.0..10.0),
            dtheta: rng.random_range(0.0..10.0),
            modulus: random_modulus(&mut rng),
        })
        .collect()
}
