//! Univariate and bivariate standard normal distribution functions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use crate::quadrature::GaussLegendre;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal CDF, `Pr[Z <= x]`.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

struct GenzRules {
    small: GaussLegendre,
    medium: GaussLegendre,
    large: GaussLegendre,
}

fn genz_rules() -> &'static GenzRules {
    static RULES: OnceLock<GenzRules> = OnceLock::new();
    RULES.get_or_init(|| GenzRules {
        small: GaussLegendre::new(6),
        medium: GaussLegendre::new(12),
        large: GaussLegendre::new(20),
    })
}

/// Upper orthant probability `Pr[X > dh, Y > dk]` for standard normals with
/// correlation `r` (Drezner-Wesolowsky / Genz).
fn bvn_upper(dh: f64, dk: f64, r: f64) -> f64 {
    let rules = genz_rules();
    let rule = if r.abs() < 0.3 {
        &rules.small
    } else if r.abs() < 0.75 {
        &rules.medium
    } else {
        &rules.large
    };

    let h = dh;
    let mut k = dk;
    let mut hk = h * k;
    let mut bvn = 0.0;

    if r.abs() < 0.925 {
        if r != 0.0 {
            let hs = 0.5 * (h * h + k * k);
            let asr = r.asin();
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let sn = (0.5 * asr * (x + 1.0)).sin();
                bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
            bvn *= asr / (4.0 * PI);
        }
        return bvn + norm_cdf(-h) * norm_cdf(-k);
    }

    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let a_s = (1.0 - r) * (1.0 + r);
        let mut a = a_s.sqrt();
        let b_s = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 16.0;
        let asr = -0.5 * (b_s / a_s + hk);
        if asr > -100.0 {
            bvn = a
                * asr.exp()
                * (1.0 - c * (b_s - a_s) * (1.0 - d * b_s / 5.0) / 3.0 + c * d * a_s * a_s / 5.0);
        }
        if -hk < 100.0 {
            let b = b_s.sqrt();
            bvn -= (-0.5 * hk).exp()
                * SQRT_2PI
                * norm_cdf(-b / a)
                * b
                * (1.0 - c * b_s * (1.0 - d * b_s / 5.0) / 3.0);
        }
        a *= 0.5;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let xs = (a * (x + 1.0)).powi(2);
            let rs = (1.0 - xs).sqrt();
            let asr = -0.5 * (b_s / xs + hk);
            if asr > -100.0 {
                bvn += a
                    * w
                    * asr.exp()
                    * ((-hk * (1.0 - rs) / (2.0 * (1.0 + rs))).exp() / rs
                        - (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
        bvn *= -1.0 / (2.0 * PI);
    }
    if r > 0.0 {
        bvn + norm_cdf(-h.max(k))
    } else {
        let mut out = -bvn;
        if k > h {
            out += if h < 0.0 {
                norm_cdf(k) - norm_cdf(h)
            } else {
                norm_cdf(-h) - norm_cdf(-k)
            };
        }
        out
    }
}

/// `Pr[X <= h, Y <= v]` for a standard bivariate normal with correlation `rho`.
///
/// Infinite limits are accepted. `rho` is clamped to `[-1, 1]`.
pub fn bvn_cdf(h: f64, v: f64, rho: f64) -> f64 {
    if h == f64::NEG_INFINITY || v == f64::NEG_INFINITY {
        return 0.0;
    }
    if h == f64::INFINITY {
        return norm_cdf(v);
    }
    if v == f64::INFINITY {
        return norm_cdf(h);
    }
    let rho = rho.clamp(-1.0, 1.0);
    bvn_upper(-h, -v, rho).clamp(0.0, 1.0)
}
