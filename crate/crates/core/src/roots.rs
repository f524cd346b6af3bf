//! Sign-change scanning and safeguarded Newton refinement on a bracket.

/// A sign change of `h` on the scan grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// `h` vanished exactly at a grid point.
    Exact(f64),
    /// `h` changes sign strictly inside `[lo, hi]`.
    Bracket(f64, f64),
}

impl Crossing {
    pub fn lo(&self) -> f64 {
        match *self {
            Crossing::Exact(x) => x,
            Crossing::Bracket(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Crossing::Exact(x) => x,
            Crossing::Bracket(_, hi) => hi,
        }
    }

    /// Whether `x` lies in the crossing's span, widened by `tol` on each side.
    pub fn covers(&self, x: f64, tol: f64) -> bool {
        self.lo() - tol <= x && x <= self.hi() + tol
    }
}

/// Samples `h` at `n + 1` equally spaced points of `[lo, hi]` and reports
/// every sign change, in ascending order.
pub fn scan_sign_changes<F>(h: F, lo: f64, hi: f64, n: usize) -> Vec<Crossing>
where
    F: Fn(f64) -> f64,
{
    assert!(n >= 1, "scan needs at least one cell");
    let width = hi - lo;
    let grid = |i: usize| {
        if i == n {
            hi
        } else {
            lo + width * i as f64 / n as f64
        }
    };

    let mut out = Vec::new();
    let mut x_prev = grid(0);
    let mut v_prev = h(x_prev);
    if v_prev == 0.0 {
        out.push(Crossing::Exact(x_prev));
    }
    for i in 1..=n {
        let x = grid(i);
        let v = h(x);
        if v == 0.0 {
            out.push(Crossing::Exact(x));
        } else if v_prev != 0.0
            && v.is_finite()
            && v_prev.is_finite()
            && (v < 0.0) != (v_prev < 0.0)
        {
            out.push(Crossing::Bracket(x_prev, x));
        }
        x_prev = x;
        v_prev = v;
    }
    out
}

/// Locates a root of `h` inside a sign-change bracket.
///
/// `h` returns `(value, derivative)`. Newton steps are taken while they stay
/// inside the shrinking bracket; otherwise the step bisects. If Newton has
/// not converged after `max_newton` iterations the bracket is bisected down
/// to machine resolution. The returned point is the evaluated point with the
/// smallest `|h|`.
pub fn refine_root<F>(h: F, lo: f64, hi: f64, max_newton: usize) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let (f_lo, _) = h(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let (f_hi, _) = h(hi);
    if f_hi == 0.0 {
        return hi;
    }
    let lo_negative = f_lo < 0.0;

    let mut best = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo.abs())
    } else {
        (hi, f_hi.abs())
    };
    let mut track = |x: f64, fx: f64| {
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
    };

    let resolved = |lo: f64, hi: f64| hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs());

    let mut x = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..max_newton {
        let (fx, dfx) = h(x);
        track(x, fx);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() || resolved(lo, hi) {
            let (fn_, _) = h(next);
            track(next, fn_);
            converged = true;
            break;
        }
        x = next;
    }

    if !converged {
        for _ in 0..200 {
            if resolved(lo, hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let (fm, _) = h(mid);
            track(mid, fm);
            if fm == 0.0 {
                break;
            }
            if (fm < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    best.0
}

/// Newton steps from `x0` that are kept only while they reduce `|h|`.
pub fn polish<F>(h: F, x0: f64, max_steps: usize) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut fx, mut dfx) = h(x0);
    let mut x = x0;
    for _ in 0..max_steps {
        if fx == 0.0 || dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let cand = x - fx / dfx;
        if !cand.is_finite() {
            break;
        }
        let (fc, dfc) = h(cand);
        if fc.abs() >= fx.abs() {
            break;
        }
        x = cand;
        fx = fc;
        dfx = dfc;
    }
    x
}
