use num_complex::Complex64 as C64;

/// A scalar function known through its Taylor coefficients at a point.
///
/// `taylor(at, order)` returns `f⁽ⁿ⁾(at) / n!` for `n = 0..=order`, or an
/// explanation when `at` lies outside the domain.
pub trait AnalyticFunction {
    fn name(&self) -> &str;
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String>;
}

/// `exp(λ)`.
pub struct Exp;

impl AnalyticFunction for Exp {
    fn name(&self) -> &str {
        "exp"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        let e = at.exp();
        let mut out = Vec::with_capacity(order + 1);
        let mut fact = 1.0;
        for n in 0..=order {
            if n > 0 {
                fact *= n as f64;
            }
            out.push(e / fact);
        }
        Ok(out)
    }
}

/// `λ`.
pub struct Identity;

impl AnalyticFunction for Identity {
    fn name(&self) -> &str {
        "identity"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        let mut out = vec![C64::new(0.0, 0.0); order + 1];
        out[0] = at;
        if order >= 1 {
            out[1] = C64::new(1.0, 0.0);
        }
        Ok(out)
    }
}

/// `λ²`.
pub struct Square;

impl AnalyticFunction for Square {
    fn name(&self) -> &str {
        "square"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        let mut out = vec![C64::new(0.0, 0.0); order + 1];
        out[0] = at * at;
        if order >= 1 {
            out[1] = at * 2.0;
        }
        if order >= 2 {
            out[2] = C64::new(1.0, 0.0);
        }
        Ok(out)
    }
}

/// `1 / λ`.
pub struct Reciprocal;

impl AnalyticFunction for Reciprocal {
    fn name(&self) -> &str {
        "reciprocal"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        if at == C64::new(0.0, 0.0) {
            return Err("1/λ is singular at 0".into());
        }
        let r = -at.inv();
        let mut out = Vec::with_capacity(order + 1);
        let mut term = at.inv();
        for _ in 0..=order {
            out.push(term);
            term *= r;
        }
        Ok(out)
    }
}

/// `1 / (1 − λ)`.
pub struct Geometric;

impl AnalyticFunction for Geometric {
    fn name(&self) -> &str {
        "geometric"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        let d = C64::new(1.0, 0.0) - at;
        if d == C64::new(0.0, 0.0) {
            return Err("1/(1-λ) is singular at 1".into());
        }
        let r = d.inv();
        let mut out = Vec::with_capacity(order + 1);
        let mut term = r;
        for _ in 0..=order {
            out.push(term);
            term *= r;
        }
        Ok(out)
    }
}

fn on_cut(at: C64) -> bool {
    at.im == 0.0 && at.re <= 0.0
}

/// Principal power `λ^p`.
pub struct Power(pub C64);

impl AnalyticFunction for Power {
    fn name(&self) -> &str {
        "power"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        let p = self.0;
        if on_cut(at) {
            return Err(format!("λ^p has its branch cut at {at}"));
        }
        let mut out = Vec::with_capacity(order + 1);
        let mut binom = C64::new(1.0, 0.0);
        for n in 0..=order {
            if n > 0 {
                binom = binom * (p - (n as f64 - 1.0)) / n as f64;
            }
            out.push(binom * at.powc(p - n as f64));
        }
        Ok(out)
    }
}

/// Principal logarithm.
pub struct Log;

impl AnalyticFunction for Log {
    fn name(&self) -> &str {
        "log"
    }
    fn taylor(&self, at: C64, order: usize) -> Result<Vec<C64>, String> {
        if on_cut(at) {
            return Err(format!("log has its branch cut at {at}"));
        }
        let mut out = Vec::with_capacity(order + 1);
        out.push(at.ln());
        let r = -at.inv();
        let mut pow = -r;
        for n in 1..=order {
            out.push(pow / n as f64);
            pow *= r;
        }
        Ok(out)
    }
}
