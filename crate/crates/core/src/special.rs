//! Self-contained special functions: standard normal CDF/quantile and the
//! Airy pair (Ai, Ai′).
//!
//! Ai is evaluated from a table of (Ai, Ai′) seeded by the exponential
//! asymptotic series at x = 6 and propagated down to x = −12 by re-centred
//! Taylor expansions of the Airy ODE y″ = xy (the downward direction is the
//! stable one: the growing companion solution decays along it). Off the
//! table the two asymptotic regimes take over. Absolute accuracy is ~1e−13
//! across the working range; see the frozen reference tests.

use std::sync::OnceLock;

/// Standard normal CDF via erfc.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Complementary error function, |relative error| < 1e-13 on the real line.
///
/// Series for small arguments, continued fraction in the tail.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        // Laplace continued fraction: erfc(x) = exp(-x^2)/sqrt(pi) * cf.
        let x2 = x * x;
        let mut f = 0.0_f64;
        for k in (1..=60).rev() {
            f = 0.5 * k as f64 / (x + f);
        }
        (-x2).exp() / (std::f64::consts::PI.sqrt() * (x + f))
    }
}

fn erf_series(x: f64) -> f64 {
    // erf(x) = 2/sqrt(pi) * exp(-x^2) * sum 2^k x^(2k+1) / (1*3*...*(2k+1))
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= 2.0 * x2 / (2 * k + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() || k > 200 {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x2).exp() * sum
}

/// Standard normal quantile (inverse CDF), Wichura's AS 241 (PPND16).
/// Absolute error below 1e-15 for p in (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1), got {p}");
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly(&A_PPND, r) / poly(&B_PPND, r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let val = if r <= 5.0 {
        let s = r - 1.6;
        poly(&C_PPND, s) / poly(&D_PPND, s)
    } else {
        let s = r - 5.0;
        poly(&E_PPND, s) / poly(&F_PPND, s)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

const A_PPND: [f64; 8] = [
    3.387_132_872_796_366_5e0,
    1.331_416_678_917_843_8e2,
    1.971_590_950_306_551_3e3,
    1.373_169_376_550_946e4,
    4.592_195_393_154_987e4,
    6.726_577_092_700_87e4,
    3.343_057_558_358_813e4,
    2.509_080_928_730_122_7e3,
];
const B_PPND: [f64; 8] = [
    1.0,
    4.231_333_070_160_091e1,
    6.871_870_074_920_579e2,
    5.394_196_021_424_751e3,
    2.121_379_430_158_659_6e4,
    3.930_789_580_009_271e4,
    2.872_908_573_572_194_3e4,
    5.226_495_278_852_545_5e3,
];
const C_PPND: [f64; 8] = [
    1.423_437_110_749_683_5e0,
    4.630_337_846_156_546e0,
    5.769_497_221_460_691e0,
    3.647_848_324_763_204_5e0,
    1.270_458_252_452_368_4e0,
    2.417_807_251_774_506e-1,
    2.272_384_498_926_918_4e-2,
    7.745_450_142_783_414e-4,
];
const D_PPND: [f64; 8] = [
    1.0,
    2.053_191_626_637_759e0,
    1.676_384_830_183_803_8e0,
    6.897_673_349_851e-1,
    1.481_039_764_274_800_8e-1,
    1.519_866_656_361_645_7e-2,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_9e-9,
];
const E_PPND: [f64; 8] = [
    6.657_904_643_501_103e0,
    5.463_784_911_164_114e0,
    1.784_826_539_917_291_3e0,
    2.965_605_718_285_048_7e-1,
    2.653_218_952_657_612_4e-2,
    1.242_660_947_388_078_4e-3,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const F_PPND: [f64; 8] = [
    1.0,
    5.998_322_065_558_88e-1,
    1.369_298_809_227_358e-1,
    1.487_536_129_085_061_5e-2,
    7.868_691_311_456_133e-4,
    1.846_318_317_510_054_8e-5,
    1.421_511_758_316_446e-7,
    2.044_263_103_389_939_7e-15,
];

// ---------------------------------------------------------------------------
// Airy functions
// ---------------------------------------------------------------------------

/// Ai(x) and Ai′(x) as a pair.
pub fn airy_ai_pair(x: f64) -> (f64, f64) {
    if x > TABLE_HI {
        airy_asymptotic_positive(x)
    } else if x < TABLE_LO {
        airy_asymptotic_negative(x)
    } else {
        let table = airy_table();
        // Nearest centre; spacing 0.5, |x - centre| <= 0.25.
        let idx = ((TABLE_HI - x) / STEP).round() as usize;
        let idx = idx.min(table.len() - 1);
        let x0 = TABLE_HI - idx as f64 * STEP;
        let (a, ap) = table[idx];
        taylor_propagate(x0, a, ap, x - x0)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy_ai_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_ai_pair(x).1
}

const TABLE_HI: f64 = 6.0;
const TABLE_LO: f64 = -12.0;
const STEP: f64 = 0.5;

fn airy_table() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((TABLE_HI - TABLE_LO) / STEP).round() as usize + 1;
        let mut table = Vec::with_capacity(n);
        let (mut a, mut ap) = airy_asymptotic_positive(TABLE_HI);
        table.push((a, ap));
        let mut x0 = TABLE_HI;
        for _ in 1..n {
            let (na, nap) = taylor_propagate(x0, a, ap, -STEP);
            x0 -= STEP;
            a = na;
            ap = nap;
            table.push((a, ap));
        }
        table
    })
}

/// Taylor step for y'' = x y from centre x0 with data (y, y') by step h.
/// Coefficient recurrence: (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}.
fn taylor_propagate(x0: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    const TERMS: usize = 30;
    let mut c = [0.0_f64; TERMS + 2];
    c[0] = y;
    c[1] = yp;
    for k in 0..TERMS {
        let prev = if k == 0 { 0.0 } else { c[k - 1] };
        c[k + 2] = (x0 * c[k] + prev) / (((k + 2) * (k + 1)) as f64);
    }
    let mut val = 0.0;
    let mut der = 0.0;
    for k in (0..TERMS + 2).rev() {
        val = val * h + c[k];
        if k >= 1 {
            der = der * h + k as f64 * c[k];
        }
    }
    (val, der)
}

/// Exponential asymptotics for large positive x.
fn airy_asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let pre = (-zeta).exp() / (2.0 * sqrt_pi * x.powf(0.25));
    let pre_d = -(x.powf(0.25)) * (-zeta).exp() / (2.0 * sqrt_pi);
    // u_{k+1} = u_k (6k+1)(6k+5) / (72(k+1)); v_k = u_k (6k+1)/(1-6k).
    let mut u = 1.0_f64;
    let mut sum_u = 1.0_f64;
    let mut sum_v = 1.0_f64;
    let mut sign = 1.0_f64;
    let mut prev_term: f64 = 1.0;
    for k in 0..40 {
        let kf = k as f64;
        u *= (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0));
        let v = u * (6.0 * (kf + 1.0) + 1.0) / (1.0 - 6.0 * (kf + 1.0));
        sign = -sign;
        let zk = zeta.powi(k as i32 + 1);
        let term_u = sign * u / zk;
        if term_u.abs() > prev_term {
            break; // divergent tail reached
        }
        prev_term = term_u.abs();
        sum_u += term_u;
        sum_v += sign * v / zk;
    }
    (pre * sum_u, pre_d * sum_v)
}

/// Oscillatory asymptotics for large negative x.
fn airy_asymptotic_negative(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    // Split Poincaré series into even (cos-like) and odd parts.
    let mut u = vec![1.0_f64];
    let mut v = vec![1.0_f64];
    for k in 0..30 {
        let kf = k as f64;
        let next_u = u[k] * (6.0 * kf + 1.0) * (6.0 * kf + 5.0) / (72.0 * (kf + 1.0));
        u.push(next_u);
        v.push(next_u * (6.0 * (kf + 1.0) + 1.0) / (1.0 - 6.0 * (kf + 1.0)));
    }
    let mut p = 0.0_f64; // sum (-1)^k u_{2k} zeta^{-2k}
    let mut q = 0.0_f64; // sum (-1)^k u_{2k+1} zeta^{-2k-1}
    let mut pd = 0.0_f64; // same with v
    let mut qd = 0.0_f64;
    let mut best = f64::INFINITY;
    for k in 0..15 {
        let t_even = u[2 * k] / zeta.powi(2 * k as i32);
        if t_even.abs() > best {
            break;
        }
        best = t_even.abs();
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        p += s * t_even;
        q += s * u[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
        pd += s * v[2 * k] / zeta.powi(2 * k as i32);
        qd += s * v[2 * k + 1] / zeta.powi(2 * k as i32 + 1);
    }
    let phase = zeta + std::f64::consts::FRAC_PI_4;
    let (s, c) = phase.sin_cos();
    let ai = (s * p - c * q) / (sqrt_pi * z.powf(0.25));
    let aip = -(c * pd + s * qd) * z.powf(0.25) / sqrt_pi;
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen high-precision reference values (30-digit arithmetic).
    const AIRY_REF: [(f64, f64, f64); 24] = [
        (-100.0, 0.17675339323955288, -0.24229703166058381),
        (-50.0, -0.16188142361232092, 0.96898983727674909),
        (-25.0, 0.16352657883042947, 0.96237885138769741),
        (-12.0, -0.066555175054373129, 1.0231104533679707),
        (-10.0, 0.040241238486443191, 0.99626504413279006),
        (-9.5, 0.31910324771912820, -0.10809531881187124),
        (-7.3, 0.33577037051514728, -0.18009580448329366),
        (-6.0, -0.32914517362982311, 0.34593548728134289),
        (-4.5, 0.29215278105595947, -0.52336253231574770),
        (-2.0, 0.22740742820168558, 0.61825902074169104),
        (-1.0, 0.53556088329235212, -0.010160567116645209),
        (-0.5, 0.47572809161053959, -0.20408167033954739),
        (0.0, 0.35502805388781724, -0.25881940379280680),
        (0.3, 0.27880648195500492, -0.24514636421905480),
        (1.0, 0.13529241631288142, -0.15914744129679321),
        (2.0, 0.034924130423274379, -0.053090384433653632),
        (3.7, 0.0017455720006099785, -0.0034669407490276271),
        (4.5, 0.00033025032351430898, -0.00071786656755750889),
        (6.0, 9.9476943602528896e-6, -2.4765200397034955e-5),
        (7.0, 7.4921288639971671e-7, -2.0081508947387920e-6),
        (8.5, 1.0997009755195507e-8, -3.2377254404476023e-8),
        (10.0, 1.1047532552898686e-10, -3.5206336767389236e-10),
        (12.0, 1.3931846888753608e-13, -4.8547365549853085e-13),
        (15.0, 2.1649625207379923e-18, -8.4205679540177728e-18),
    ];

    #[test]
    fn airy_matches_reference_to_1e12() {
        for &(x, ai_ref, aip_ref) in &AIRY_REF {
            let (ai, aip) = airy_ai_pair(x);
            assert!(
                (ai - ai_ref).abs() < 1e-12,
                "Ai({x}) = {ai}, want {ai_ref}"
            );
            assert!(
                (aip - aip_ref).abs() < 1e-12,
                "Ai'({x}) = {aip}, want {aip_ref}"
            );
        }
    }

    #[test]
    fn airy_wronskian_like_consistency() {
        // d/dx [Ai'(x)^2 - x Ai(x)^2] = -Ai(x)^2 from the ODE; check by
        // central differences at scattered points.
        for &x in &[-8.3, -3.1, -0.7, 0.4, 2.2, 5.1] {
            let h = 1e-5;
            let f = |x: f64| {
                let (a, ap) = airy_ai_pair(x);
                ap * ap - x * a * a
            };
            let lhs = (f(x + h) - f(x - h)) / (2.0 * h);
            let a = airy_ai(x);
            assert!((lhs + a * a).abs() < 1e-7, "x={x}");
        }
    }

    const QUANTILE_REF: [(f64, f64); 12] = [
        (1e-09, -5.9978070150076869),
        (1e-06, -4.753424308822899),
        (0.001, -3.0902323061678135),
        (0.025, -1.9599639845400542),
        (0.1, -1.2815515655446004),
        (0.3, -0.52440051270804082),
        (0.5, 0.0),
        (0.7, 0.52440051270804066),
        (0.975, 1.9599639845400539),
        (0.999, 3.0902323061678133),
        (0.999999, 4.7534243088170878),
        (0.999999999, 5.9978070196016374),
    ];

    #[test]
    fn normal_quantile_matches_reference() {
        for &(p, q_ref) in &QUANTILE_REF {
            let q = normal_quantile(p);
            assert!((q - q_ref).abs() < 1e-9, "p={p}: {q} vs {q_ref}");
        }
    }

    const CDF_REF: [(f64, f64); 11] = [
        (-8.0, 6.2209605742717841e-16),
        (-5.0, 2.8665157187919391e-7),
        (-3.0, 0.0013498980316300945),
        (-1.0, 0.15865525393145705),
        (-0.5, 0.3085375387259869),
        (0.0, 0.5),
        (0.3, 0.61791142218895263),
        (1.0, 0.84134474606854295),
        (2.0, 0.97724986805182079),
        (4.0, 0.99996832875816688),
        (7.0, 0.99999999999872019),
    ];

    #[test]
    fn normal_cdf_matches_reference() {
        for &(x, c_ref) in &CDF_REF {
            let c = normal_cdf(x);
            assert!(
                (c - c_ref).abs() < 1e-14 * (1.0 + c_ref.abs()) + 1e-16,
                "x={x}: {c} vs {c_ref}"
            );
        }
    }

    #[test]
    fn cdf_and_quantile_are_inverse() {
        for &x in &[-4.0, -1.3, 0.0, 0.6, 2.7, 4.5] {
            let back = normal_quantile(normal_cdf(x));
            assert!((back - x).abs() < 1e-9, "x={x} back={back}");
        }
    }
}
