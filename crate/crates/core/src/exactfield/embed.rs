//! Complex roots of minimal polynomials, used for the numeric embeddings.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::poly::{derivative, eval_complex};

/// Residual required of every refined root, relative to the coefficient scale.
pub const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RootError(pub f64);

fn coefficient_scale(f: &[BigRational], z: Complex64) -> f64 {
    let r = z.norm();
    f.iter().enumerate().map(|(i, c)| c.to_f64().unwrap().abs() * r.powi(i as i32)).sum::<f64>().max(1.0)
}

/// All complex roots of a monic squarefree polynomial.
///
/// Durand–Kerner iteration followed by Newton polishing. Roots are sorted by
/// argument in `[0, 2π)`, ties broken by larger real part first, and tiny
/// imaginary parts are snapped to zero.
pub fn find_roots(f: &[BigRational]) -> Result<Vec<Complex64>, RootError> {
    let n = f.len() - 1;
    let c: Vec<f64> = f.iter().map(|x| x.to_f64().unwrap()).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..n].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (radius / 2.0).min(1.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    let df = derivative(f);
    let mut worst = 0.0f64;
    for r in z.iter_mut() {
        for _ in 0..8 {
            let d = eval_complex(&df, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval_complex(f, *r) / d;
            *r -= step;
            if step.norm() < 1e-17 {
                break;
            }
        }
        if r.im.abs() < 1e-12 {
            r.im = 0.0;
        }
        worst = worst.max(eval_complex(f, *r).norm() / coefficient_scale(f, *r));
    }
    if worst > ROOT_TOLERANCE {
        return Err(RootError(worst));
    }
    z.sort_by(|a, b| {
        let arg = |w: &Complex64| {
            let t = w.im.atan2(w.re);
            if t < -1e-12 {
                t + 2.0 * PI
            } else {
                t.max(0.0)
            }
        };
        let (ta, tb) = (arg(a), arg(b));
        if (ta - tb).abs() < 1e-9 {
            b.re.partial_cmp(&a.re).unwrap()
        } else {
            ta.partial_cmp(&tb).unwrap()
        }
    });
    Ok(z)
}
