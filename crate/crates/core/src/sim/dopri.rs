//! Dormand–Prince 5(4) with dense output, for planar systems.

pub type State = [f64; 2];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[inline]
fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Result of one trial step from `(t, y)` with slope `k1 = rhs(y)`.
pub struct Trial {
    pub y: State,
    /// Slope at the new point (first stage of the next step).
    pub k7: State,
    /// Componentwise local error estimate.
    pub err: State,
    stages: [State; 6],
}

/// Runs the seven stages of one step of size `h`.
pub fn trial<F: Fn(&State) -> State>(rhs: &F, y: &State, k1: &State, h: f64) -> Trial {
    let k2 = rhs(&axpy(y, h, &[(A21, k1)]));
    let k3 = rhs(&axpy(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = rhs(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(&axpy(
        y,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ));
    let k6 = rhs(&axpy(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y1 = axpy(
        y,
        h,
        &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = rhs(&y1);
    let err = axpy(
        &[0.0, 0.0],
        h,
        &[
            (E1, k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
    );
    Trial {
        y: y1,
        k7,
        err,
        stages: [*k1, k3, k4, k5, k6, k7],
    }
}

/// Continuous extension over an accepted step `[t0, t0 + h]`.
pub struct Dense {
    pub t0: f64,
    pub h: f64,
    c: [State; 5],
}

impl Dense {
    pub fn new(t0: f64, h: f64, y0: &State, tr: &Trial) -> Self {
        let [k1, k3, k4, k5, k6, k7] = &tr.stages;
        let mut c = [[0.0; 2]; 5];
        for i in 0..2 {
            let ydiff = tr.y[i] - y0[i];
            let bspl = h * k1[i] - ydiff;
            c[0][i] = y0[i];
            c[1][i] = ydiff;
            c[2][i] = bspl;
            c[3][i] = ydiff - h * k7[i] - bspl;
            c[4][i] =
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Dense { t0, h, c }
    }

    pub fn eval(&self, t: f64) -> State {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let c = &self.c;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        out
    }
}

/// Scaled RMS norm of the error estimate.
pub fn error_norm(err: &State, y0: &State, y1: &State, rtol: f64, atol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        let sk = atol + rtol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sk).powi(2);
    }
    (acc / 2.0).sqrt()
}

/// Starting step from the usual two-probe estimate.
pub fn initial_step<F: Fn(&State) -> State>(
    rhs: &F,
    y: &State,
    k1: &State,
    rtol: f64,
    atol: f64,
    h_max: f64,
) -> f64 {
    let norm = |v: &State, w: &State| {
        let mut acc = 0.0;
        for i in 0..2 {
            let sk = atol + rtol * w[i].abs();
            acc += (v[i] / sk).powi(2);
        }
        (acc / 2.0).sqrt()
    };
    let d0 = norm(y, y);
    let d1 = norm(k1, y);
    let h0 = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
    .min(h_max);
    let y1 = axpy(y, h0, &[(1.0, k1)]);
    let k2 = rhs(&y1);
    let diff = [k2[0] - k1[0], k2[1] - k1[1]];
    let d2 = norm(&diff, y) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(h_max)
}

/// Fixed-step integration from `t = 0` to `t_end` in `n` equal steps.
pub fn fixed_steps<F: Fn(&State) -> State>(rhs: &F, y0: State, t_end: f64, n: usize) -> State {
    let h = t_end / n as f64;
    let mut y = y0;
    let mut k = rhs(&y);
    for _ in 0..n {
        let tr = trial(rhs, &y, &k, h);
        y = tr.y;
        k = tr.k7;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(y: &State) -> State {
        [1.0 - y[0], y[0] - y[1]]
    }

    fn exact(t: f64, y0: State) -> State {
        let e = (-t).exp();
        [
            1.0 + (y0[0] - 1.0) * e,
            1.0 + (y0[0] - 1.0) * t * e + (y0[1] - 1.0) * e,
        ]
    }

    #[test]
    fn tableau_consistency() {
        let a = [
            [A21, 0.0, 0.0, 0.0, 0.0],
            [A31, A32, 0.0, 0.0, 0.0],
            [A41, A42, A43, 0.0, 0.0],
            [A51, A52, A53, A54, 0.0],
            [A61, A62, A63, A64, A65],
        ];
        let c = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
        for (row, ci) in a.iter().zip(c) {
            assert!((row.iter().sum::<f64>() - ci).abs() < 1e-14);
        }
        assert!((B1 + B3 + B4 + B5 + B6 - 1.0).abs() < 1e-15);
        assert!((E1 + E3 + E4 + E5 + E6 + E7).abs() < 1e-15);
    }

    #[test]
    fn fifth_order_on_linear_system() {
        let y0 = [3.0, 0.5];
        let t = 2.0;
        let want = exact(t, y0);
        let err = |n| {
            let y = fixed_steps(&linear, y0, t, n);
            (y[0] - want[0]).abs().max((y[1] - want[1]).abs())
        };
        let (e1, e2) = (err(10), err(20));
        let order = (e1 / e2).log2();
        assert!((4.6..5.6).contains(&order), "observed order {order}");
    }

    #[test]
    fn dense_output_matches_endpoints() {
        let y0 = [0.2, 1.7];
        let k1 = linear(&y0);
        let tr = trial(&linear, &y0, &k1, 0.3);
        let d = Dense::new(1.0, 0.3, &y0, &tr);
        assert_eq!(d.eval(1.0), y0);
        let end = d.eval(1.3);
        assert!((end[0] - tr.y[0]).abs() < 1e-14 && (end[1] - tr.y[1]).abs() < 1e-14);
        let mid_err = |h: f64| {
            let tr = trial(&linear, &y0, &k1, h);
            let m = Dense::new(0.0, h, &y0, &tr).eval(h / 2.0);
            let w = exact(h / 2.0, y0);
            (m[0] - w[0]).abs().max((m[1] - w[1]).abs())
        };
        let (e1, e2) = (mid_err(0.2), mid_err(0.1));
        assert!(e1 < 1e-6);
        assert!((4.5..6.0).contains(&(e1 / e2).log2()), "{e1} {e2}");
    }
}
