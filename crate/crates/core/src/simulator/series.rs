use num_complex::Complex64;

/// Time series recorded by [`super::evolve`]. Every sequence has one entry
/// per sample time.
#[derive(Debug, Clone, Default)]
pub struct ObserverSeries {
    /// Integrator step actually used.
    pub dt: f64,
    /// Steps between samples.
    pub every: usize,
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub charge: Vec<f64>,
    /// Full energy norm `‖Ψ‖_E`.
    pub energy_norm: Vec<f64>,
    pub radii: Vec<f64>,
    /// `seminorms[k][s]` is `‖Ψ(t_s)‖_{E,radii[k]}`.
    pub seminorms: Vec<Vec<f64>>,
    /// `traces[J][s] = ψ(X_J, t_s)`.
    pub traces: Vec<Vec<Complex64>>,
    /// `momentum_traces[J][s] = π(X_J, t_s)`.
    pub momentum_traces: Vec<Vec<Complex64>>,
    /// Node coordinates of the probe traces.
    pub probe_positions: Vec<f64>,
    pub probe_traces: Vec<Vec<Complex64>>,
}

impl ObserverSeries {
    pub(super) fn new(dt: f64, every: usize, radii: Vec<f64>, oscillators: usize, probe_positions: Vec<f64>) -> Self {
        Self {
            dt,
            every,
            seminorms: vec![Vec::new(); radii.len()],
            radii,
            traces: vec![Vec::new(); oscillators],
            momentum_traces: vec![Vec::new(); oscillators],
            probe_traces: vec![Vec::new(); probe_positions.len()],
            probe_positions,
            ..Self::default()
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(super) fn push(
        &mut self,
        t: f64,
        energy: f64,
        charge: f64,
        energy_norm: f64,
        seminorms: Vec<f64>,
        psi: Vec<Complex64>,
        pi: Vec<Complex64>,
        probes: Vec<Complex64>,
    ) {
        self.times.push(t);
        self.energy.push(energy);
        self.charge.push(charge);
        self.energy_norm.push(energy_norm);
        for (dst, v) in self.seminorms.iter_mut().zip(seminorms) {
            dst.push(v);
        }
        for (dst, v) in self.traces.iter_mut().zip(psi) {
            dst.push(v);
        }
        for (dst, v) in self.momentum_traces.iter_mut().zip(pi) {
            dst.push(v);
        }
        for (dst, v) in self.probe_traces.iter_mut().zip(probes) {
            dst.push(v);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Spacing between consecutive samples.
    pub fn sample_dt(&self) -> f64 {
        self.dt * self.every as f64
    }

    /// `max_t |H(t) − H(0)| / max(|H(0)|, 1)`.
    pub fn energy_drift(&self) -> f64 {
        relative_drift(&self.energy)
    }

    pub fn charge_drift(&self) -> f64 {
        relative_drift(&self.charge)
    }

    /// Index of the sample closest to time `t`.
    pub fn index_near(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
    }

    /// CSV with columns `t, H, Q, E_norm, seminorm_R.., re_psi_J, im_psi_J`
    /// (J = 1..N), then `re_pi_J, im_pi_J` and the probe traces
    /// `re_probe_K, im_probe_K` (K = 1.., in the order of `probe_positions`).
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = vec!["t".into(), "H".into(), "Q".into(), "E_norm".into()];
        header.extend(self.radii.iter().map(|r| format!("seminorm_R{r}")));
        for j in 1..=self.traces.len() {
            header.push(format!("re_psi_{j}"));
            header.push(format!("im_psi_{j}"));
        }
        for j in 1..=self.momentum_traces.len() {
            header.push(format!("re_pi_{j}"));
            header.push(format!("im_pi_{j}"));
        }
        for k in 1..=self.probe_positions.len() {
            header.push(format!("re_probe_{k}"));
            header.push(format!("im_probe_{k}"));
        }
        w.write_record(&header)?;
        let fmt = |v: f64| format!("{v:.16e}");
        for s in 0..self.len() {
            let mut row = vec![fmt(self.times[s]), fmt(self.energy[s]), fmt(self.charge[s]), fmt(self.energy_norm[s])];
            row.extend(self.seminorms.iter().map(|k| fmt(k[s])));
            for trace in self.traces.iter().chain(&self.momentum_traces).chain(&self.probe_traces) {
                row.push(fmt(trace[s].re));
                row.push(fmt(trace[s].im));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else { return 0.0 };
    let scale = first.abs().max(1.0);
    values.iter().map(|v| (v - first).abs()).fold(0.0, f64::max) / scale
}
