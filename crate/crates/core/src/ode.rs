use num_complex::Complex64;

/// Classical fourth-order Runge-Kutta with scratch buffers reused across steps.
#[derive(Debug, Default)]
pub(crate) struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4 {
    pub(crate) fn new(n: usize) -> Self {
        let z = vec![Complex64::default(); n];
        Rk4 {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances `y` from `t` to `t + h`; `f(t, y, dy)` writes the derivative into `dy`.
    pub(crate) fn step<F>(&mut self, f: &mut F, t: f64, h: f64, y: &mut [Complex64])
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        let n = y.len();
        f(t, y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k1[i] * (h / 2.0);
        }
        f(t + h / 2.0, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k2[i] * (h / 2.0);
        }
        f(t + h / 2.0, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + self.k3[i] * h;
        }
        f(t + h, &self.tmp, &mut self.k4);
        for i in 0..n {
            y[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * (h / 6.0);
        }
    }
}

/// Uniform step sequence on `[0, t_end]` with spacing `dt`, ending with a partial step if needed.
pub(crate) fn step_times(t_end: f64, dt: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    let full = (t_end / dt).floor() as usize;
    for i in 1..=full {
        times.push(i as f64 * dt);
    }
    let last = *times.last().unwrap();
    if t_end - last > 1e-12 * t_end.max(1.0) {
        times.push(t_end);
    } else {
        *times.last_mut().unwrap() = t_end;
    }
    times
}
