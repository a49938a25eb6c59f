//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = half * XGK[k];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[points[0], points[last]]`, treating interior points
/// as forced breakpoints. Stops when the summed error estimate is below
/// `abs_tol` or after `max_intervals` segments.
pub fn integrate_with_breaks(
    f: impl Fn(f64) -> f64,
    points: &[f64],
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    let mut segments: Vec<Segment> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();
    if segments.is_empty() {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            converged: true,
        };
    }
    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol || segments.len() >= max_intervals {
            let mut values: Vec<f64> = segments.iter().map(|s| s.value).collect();
            values.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
            return QuadResult {
                value: values.iter().sum(),
                error,
                intervals: segments.len(),
                converged: error <= abs_tol,
            };
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("nonempty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval can no longer be split in floating point.
            segments.push(Segment { error: 0.0, ..s });
            continue;
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> QuadResult {
    integrate_with_breaks(f, &[a, b], abs_tol, max_intervals)
}
