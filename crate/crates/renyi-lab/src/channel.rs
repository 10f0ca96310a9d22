//! Classical-quantum channels, α-Holevo quantities and compound-channel
//! error bounds.
//!
//! A channel is a finite table `x ↦ W(x)` of density operators. With an
//! input distribution `p` it defines the classical-quantum state
//! `Ŵ(p) = Σ_x p(x) δ_x ⊗ W(x)`, whose block-diagonal structure makes every
//! divergence against product operators `p̂ ⊗ σ` a weighted sum of
//! single-block divergences:
//!
//! ```text
//! Q_α^old(Ŵ(p)‖p̂⊗σ) = Σ_x p(x) Tr W(x)^α σ^{1-α},
//! Q_α^new(Ŵ(p)‖p̂⊗σ) = Σ_x p(x) Tr (σ^c W(x) σ^c)^α,   c = (1-α)/2α.
//! ```
//!
//! The traditional α-Holevo quantity has the closed form
//! `χ_α^old(W,p) = (α/(α-1)) log Tr (Σ_x p(x) W(x)^α)^{1/α}`; no closed form
//! is known for the sandwiched one, which is computed here by descent over
//! the density manifold.

use crate::divergence::{log_q_old, log_sum_exp, umegaki, QNewEvaluator};
use crate::extreal::ExtReal;
use crate::linalg::{cr, kron, CMatrix};
use crate::operator::{
    support_power, tensor, trace_norm, DensityOp, HermitianOp, PSDOp,
};
use crate::{Error, Result};

/// A channel with a finite input alphabet.
#[derive(Debug, Clone)]
pub struct Channel {
    alphabet: Vec<String>,
    outputs: Vec<DensityOp>,
    output_dim: usize,
}

impl Channel {
    pub fn new(alphabet: Vec<String>, outputs: Vec<DensityOp>) -> Result<Self> {
        if alphabet.is_empty() || alphabet.len() != outputs.len() {
            return Err(Error::InvalidInput(
                "alphabet and output list must be non-empty and equally long".into(),
            ));
        }
        for (i, a) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate symbol {a:?}")));
            }
        }
        let output_dim = outputs[0].dim();
        for w in &outputs {
            if w.dim() != output_dim {
                return Err(Error::DimensionMismatch(w.dim(), output_dim));
            }
        }
        Ok(Channel { alphabet, outputs, output_dim })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn outputs(&self) -> &[DensityOp] {
        &self.outputs
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn output(&self, symbol: &str) -> Result<&DensityOp> {
        self.alphabet
            .iter()
            .position(|s| s == symbol)
            .map(|i| &self.outputs[i])
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// The average output `W(p) = Σ_x p(x) W(x)`.
    pub fn average(&self, p: &InputDist) -> Result<DensityOp> {
        let mut acc = CMatrix::zeros(self.output_dim, self.output_dim);
        for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
            acc += self.output(sym)?.matrix().clone().scale(prob);
        }
        DensityOp::from_matrix(acc)
    }

    /// The `n`-fold i.i.d. extension over the product alphabet (symbols are
    /// joined with an unlikely separator).
    pub fn iid_extension(&self, n: usize) -> Result<Channel> {
        if n == 0 {
            return Err(Error::InvalidInput("iid extension needs n >= 1".into()));
        }
        crate::check_dim_cap(self.output_dim.pow(n as u32))?;
        let mut alphabet = self.alphabet.clone();
        let mut outputs: Vec<HermitianOp> = self
            .outputs
            .iter()
            .map(|w| w.as_hermitian().clone())
            .collect();
        for _ in 1..n {
            let mut next_alpha = Vec::with_capacity(alphabet.len() * self.alphabet.len());
            let mut next_out = Vec::with_capacity(outputs.len() * self.outputs.len());
            for (a, w) in alphabet.iter().zip(&outputs) {
                for (b, v) in self.alphabet.iter().zip(&self.outputs) {
                    next_alpha.push(format!("{a}\u{1f}{b}"));
                    next_out.push(tensor(w, v.as_hermitian())?);
                }
            }
            alphabet = next_alpha;
            outputs = next_out;
        }
        let outputs = outputs
            .into_iter()
            .map(|h| DensityOp::new(PSDOp::wrap(h.matrix().clone())))
            .collect::<Result<Vec<_>>>()?;
        Channel::new(alphabet, outputs)
    }
}

/// A finitely supported input distribution with strictly positive weights.
#[derive(Debug, Clone)]
pub struct InputDist {
    symbols: Vec<String>,
    probs: Vec<f64>,
}

impl InputDist {
    pub fn new(symbols: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        if symbols.is_empty() || symbols.len() != probs.len() {
            return Err(Error::BadWeights(
                "symbols and probabilities must be non-empty and equally long".into(),
            ));
        }
        if probs.iter().any(|&p| p <= 0.0) {
            return Err(Error::BadWeights("probabilities must be strictly positive".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadWeights(format!("probabilities sum to {total}")));
        }
        Ok(InputDist { symbols, probs })
    }

    pub fn uniform(alphabet: &[String]) -> Result<Self> {
        let n = alphabet.len();
        if n == 0 {
            return Err(Error::EmptyInput("alphabet"));
        }
        InputDist::new(alphabet.to_vec(), vec![1.0 / n as f64; n])
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `n`-fold product distribution matching [`Channel::iid_extension`].
    pub fn iid_extension(&self, n: usize) -> Result<InputDist> {
        if n == 0 {
            return Err(Error::InvalidInput("iid extension needs n >= 1".into()));
        }
        let mut symbols = self.symbols.clone();
        let mut probs = self.probs.clone();
        for _ in 1..n {
            let mut next_s = Vec::with_capacity(symbols.len() * self.symbols.len());
            let mut next_p = Vec::with_capacity(probs.len() * self.probs.len());
            for (a, &pa) in symbols.iter().zip(&probs) {
                for (b, &pb) in self.symbols.iter().zip(&self.probs) {
                    next_s.push(format!("{a}\u{1f}{b}"));
                    next_p.push(pa * pb);
                }
            }
            symbols = next_s;
            probs = next_p;
        }
        InputDist::new(symbols, probs)
    }
}

/// The classical-quantum state `Ŵ(p) = Σ_x p(x) δ_x ⊗ W(x)` in
/// block-diagonal form.
#[derive(Debug, Clone)]
pub struct CQState {
    blocks: Vec<(f64, DensityOp)>,
}

impl CQState {
    pub fn blocks(&self) -> &[(f64, DensityOp)] {
        &self.blocks
    }

    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(|(p, w)| p * w.trace()).sum()
    }

    /// The classical marginal `p̂` (diagonal weights).
    pub fn classical_marginal(&self) -> Vec<f64> {
        self.blocks.iter().map(|(p, _)| *p).collect()
    }

    /// The system marginal `W(p) = Σ_x p(x) W(x)`.
    pub fn system_marginal(&self) -> DensityOp {
        let d = self.blocks[0].1.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (p, w) in &self.blocks {
            acc += w.matrix().clone().scale(*p);
        }
        DensityOp::new(PSDOp::wrap(acc)).expect("mixture of states")
    }

    /// Materializes the full operator on `H_X ⊗ H` (subject to the cap).
    pub fn to_operator(&self) -> Result<HermitianOp> {
        let k = self.blocks.len();
        let d = self.blocks[0].1.dim();
        crate::check_dim_cap(k * d)?;
        let mut acc = CMatrix::zeros(k * d, k * d);
        for (x, (p, w)) in self.blocks.iter().enumerate() {
            let mut delta = CMatrix::zeros(k, k);
            delta[(x, x)] = cr(*p);
            acc += kron(&delta, w.matrix());
        }
        Ok(HermitianOp::wrap(acc))
    }
}

/// Builds `Ŵ(p)`; every support symbol of `p` must be in the alphabet.
pub fn cq_state(w: &Channel, p: &InputDist) -> Result<CQState> {
    let mut blocks = Vec::with_capacity(p.symbols().len());
    for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
        blocks.push((prob, w.output(sym)?.clone()));
    }
    Ok(CQState { blocks })
}

/// `log Q_α^old(Ŵ(p)‖p̂⊗σ) = log Σ_x p(x) Tr W(x)^α σ^{1-α}`, blockwise.
pub fn log_q_old_cq(w: &Channel, p: &InputDist, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    let mut logs = Vec::with_capacity(p.symbols().len());
    for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
        logs.push(prob.ln() + log_q_old(w.output(sym)?.as_psd(), sigma, alpha)?);
    }
    Ok(log_sum_exp(&logs))
}

/// `log Q_α^new(Ŵ(p)‖p̂⊗σ)`, blockwise.
pub fn log_q_new_cq(w: &Channel, p: &InputDist, sigma: &PSDOp, alpha: f64) -> Result<f64> {
    let mut logs = Vec::with_capacity(p.symbols().len());
    for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
        let ev = QNewEvaluator::new(w.output(sym)?.as_psd(), sigma);
        logs.push(prob.ln() + ev.log_q(alpha));
    }
    Ok(log_sum_exp(&logs))
}

/// `D_α^old(Ŵ(p)‖p̂⊗σ)` with the support branch (`+∞` when some output
/// escapes the support of `σ` at `α > 1`).
pub fn d_old_cq(w: &Channel, p: &InputDist, sigma: &PSDOp, alpha: f64) -> Result<ExtReal> {
    if alpha > 1.0 {
        for sym in p.symbols() {
            if !crate::operator::support_contained(w.output(sym)?.as_psd(), sigma) {
                return Ok(ExtReal::Infinity);
            }
        }
    }
    let lq = log_q_old_cq(w, p, sigma, alpha)?;
    if !lq.is_finite() {
        return Ok(ExtReal::Infinity);
    }
    Ok(ExtReal::Finite(lq / (alpha - 1.0)))
}

/// Traditional α-Holevo quantity, closed form:
/// `χ_α^old(W,p) = (α/(α-1)) log Tr (Σ_x p(x) W(x)^α)^{1/α}`;
/// `α = 1` is routed to [`holevo`]. Equals `inf_σ D_α^old(Ŵ(p)‖p̂⊗σ)`.
pub fn chi_old(w: &Channel, p: &InputDist, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::AlphaRange { alpha, range: "(0, +inf)" });
    }
    if alpha == 1.0 {
        return holevo(w, p);
    }
    let omega_alpha = power_mixture(w, p, alpha)?;
    let tr_omega = {
        let pairs = omega_alpha.eigen();
        let thr = pairs.support_threshold();
        pairs
            .values
            .iter()
            .filter(|&&v| v > thr)
            .map(|&v| v.powf(1.0 / alpha))
            .sum::<f64>()
    };
    Ok(alpha / (alpha - 1.0) * tr_omega.ln())
}

/// `Σ_x p(x) W(x)^α` (the α-th power mixture whose `1/α`-th power is the
/// Sibson optimizer `ω`).
fn power_mixture(w: &Channel, p: &InputDist, alpha: f64) -> Result<PSDOp> {
    let d = w.output_dim();
    let mut acc = CMatrix::zeros(d, d);
    for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
        acc += support_power(w.output(sym)?.as_psd(), alpha)
            .matrix()
            .clone()
            .scale(prob);
    }
    Ok(PSDOp::wrap(acc))
}

/// The Holevo quantity `χ(W,p) = D₁(Ŵ(p)‖p̂⊗W(p)) = Σ_x p(x) D₁(W(x)‖W(p))`.
pub fn holevo(w: &Channel, p: &InputDist) -> Result<f64> {
    let avg = w.average(p)?;
    let mut acc = 0.0;
    for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
        let d = umegaki(w.output(sym)?.as_psd(), avg.as_psd())?
            .finite()
            .expect("supp W(x) is contained in supp W(p) for positive weights");
        acc += prob * d;
    }
    Ok(acc)
}

/// Result of the sandwiched α-Holevo optimization.
#[derive(Debug, Clone)]
pub struct ChiNewResult {
    pub value: f64,
    pub argmin_sigma: DensityOp,
    /// Accepted descent steps of the best run.
    pub iterations: usize,
    /// Sup-norm of the final finite-difference gradient (a stationarity
    /// proxy).
    pub residual: f64,
    /// False when the best run stopped on the iteration cap rather than on
    /// the value-change tolerance; the value is then the best found so far.
    pub converged: bool,
}

/// Configuration of the [`chi_new`] optimizer.
#[derive(Debug, Clone)]
pub struct ChiNewConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub value_tol: f64,
    pub seed: u64,
    /// Additional starting points for σ, tried alongside `W(p)`, `I/d` and
    /// the random restarts.
    pub extra_starts: Vec<DensityOp>,
}

impl Default for ChiNewConfig {
    fn default() -> Self {
        ChiNewConfig {
            restarts: 3,
            max_iters: 2000,
            value_tol: 1e-10,
            seed: 0x5eed,
            extra_starts: Vec::new(),
        }
    }
}

/// Sandwiched α-Holevo quantity `χ_α^new(W,p) = inf_σ D_α^new(Ŵ(p)‖p̂⊗σ)`,
/// computed by multiplicative-update descent in the exponential
/// parametrization `σ ∝ exp(H)` with a finite-difference gradient in `H`,
/// Armijo backtracking and multiple restarts. Always `≤ χ_α^old(W,p)`.
pub fn chi_new(w: &Channel, p: &InputDist, alpha: f64, config: &ChiNewConfig) -> Result<ChiNewResult> {
    if alpha.is_nan() || alpha <= 0.0 || alpha == 1.0 {
        return Err(Error::AlphaRange { alpha, range: "(0,1) U (1,+inf)" });
    }
    let d = w.output_dim();
    let outputs: Vec<&DensityOp> = p
        .symbols()
        .iter()
        .map(|sym| w.output(sym))
        .collect::<Result<Vec<_>>>()?;
    let probs = p.probs();

    // D_α^new(Ŵ(p)‖p̂⊗σ) from an eigensystem of H (σ = softmax of H)
    let objective = |h_pairs: &crate::linalg::EigenPairs| -> f64 {
        let z = log_sum_exp(&h_pairs.values);
        let sigma_mat = h_pairs.map(|lam| (lam - z).exp());
        let sigma = PSDOp::wrap(sigma_mat);
        let mut logs = Vec::with_capacity(outputs.len());
        for (wx, &prob) in outputs.iter().zip(probs) {
            let ev = QNewEvaluator::new(wx.as_psd(), &sigma);
            logs.push(prob.ln() + ev.log_q(alpha));
        }
        log_sum_exp(&logs) / (alpha - 1.0)
    };
    let eval_h = |h: &CMatrix| -> f64 { objective(&crate::linalg::hermitian_eigen(h)) };

    // Hermitian basis directions for the finite-difference gradient
    let mut directions: Vec<CMatrix> = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut e = CMatrix::zeros(d, d);
        e[(i, i)] = cr(1.0);
        directions.push(e);
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut re = CMatrix::zeros(d, d);
            re[(i, j)] = cr(inv_sqrt2);
            re[(j, i)] = cr(inv_sqrt2);
            directions.push(re);
            let mut im = CMatrix::zeros(d, d);
            im[(i, j)] = crate::linalg::c(0.0, -inv_sqrt2);
            im[(j, i)] = crate::linalg::c(0.0, inv_sqrt2);
            directions.push(im);
        }
    }

    let log_start = |sigma: &DensityOp| -> CMatrix {
        // H = log(σ + εI), support-regularized so every start is interior
        let pairs = sigma.eigen();
        pairs.map(|lam| (lam + 1e-12).ln())
    };

    let mut starts: Vec<DensityOp> = vec![w.average(p)?, DensityOp::maximally_mixed(d)];
    starts.extend(config.extra_starts.iter().cloned());
    let mut rng = crate::sample::substream(config.seed, 0);
    for _ in 0..config.restarts {
        starts.push(crate::sample::density(&mut rng, d, d));
    }

    let fd_step = 1e-5;
    let mut best: Option<(f64, CMatrix, usize, bool)> = None;
    for start in &starts {
        let mut h = log_start(start);
        let mut value = eval_h(&h);
        let mut step = 0.5;
        let mut iterations = 0;
        let mut converged = false;
        for _ in 0..config.max_iters {
            // finite-difference gradient in the Hermitian basis
            let mut grad = CMatrix::zeros(d, d);
            for dir in &directions {
                let plus = eval_h(&(&h + dir.clone().scale(fd_step)));
                let minus = eval_h(&(&h - dir.clone().scale(fd_step)));
                let g = (plus - minus) / (2.0 * fd_step);
                grad += dir.clone().scale(g);
            }
            let gnorm = grad.norm();
            if gnorm < 1e-14 {
                converged = true;
                break;
            }
            // Armijo backtracking on the objective value
            let mut accepted = false;
            let mut trial_step = step;
            for _ in 0..40 {
                let cand = &h - grad.clone().scale(trial_step / gnorm.max(1.0));
                let cand_value = eval_h(&cand);
                if cand_value < value - 1e-16 {
                    let improvement = value - cand_value;
                    h = cand;
                    value = cand_value;
                    step = (trial_step * 1.5).min(4.0);
                    iterations += 1;
                    accepted = true;
                    if improvement < config.value_tol {
                        converged = true;
                    }
                    break;
                }
                trial_step *= 0.5;
            }
            if !accepted {
                converged = true;
                break;
            }
            if converged {
                break;
            }
        }
        let better = match &best {
            None => true,
            Some((bv, _, _, _)) => value < *bv,
        };
        if better {
            best = Some((value, h, iterations, converged));
        }
    }

    let (value, h, iterations, converged) = best.expect("at least one start");
    let pairs = crate::linalg::hermitian_eigen(&h);
    let z = log_sum_exp(&pairs.values);
    let sigma = DensityOp::new(PSDOp::wrap(pairs.map(|lam| (lam - z).exp())))?;
    // residual: sup-norm of a fresh gradient at the final point
    let mut residual: f64 = 0.0;
    for dir in &directions {
        let plus = eval_h(&(&h + dir.clone().scale(fd_step)));
        let minus = eval_h(&(&h - dir.clone().scale(fd_step)));
        residual = residual.max(((plus - minus) / (2.0 * fd_step)).abs());
    }
    Ok(ChiNewResult { value, argmin_sigma: sigma, iterations, residual, converged })
}

/// The Sibson decomposition
/// `D_α^old(Ŵ(p)‖p̂⊗σ) = (α/(α-1)) log Tr ω + D_α^old(ω̄‖σ)` with
/// `ω = (Σ_x p(x) W(x)^α)^{1/α}` and `ω̄ = ω / Tr ω`; the residual vanishes
/// exactly at `σ = ω̄`, which is why `χ_α^old` has a closed form.
#[derive(Debug, Clone)]
pub struct SibsonDecomposition {
    pub total: ExtReal,
    pub rate_term: f64,
    pub residual_div: ExtReal,
    pub omega_bar: DensityOp,
}

pub fn sibson_decomposition(
    w: &Channel,
    p: &InputDist,
    sigma: &DensityOp,
    alpha: f64,
) -> Result<SibsonDecomposition> {
    if alpha.is_nan() || alpha <= 0.0 || alpha == 1.0 {
        return Err(Error::AlphaRange { alpha, range: "(0,1) U (1,+inf)" });
    }
    let omega_alpha = power_mixture(w, p, alpha)?;
    let omega = support_power(&omega_alpha, 1.0 / alpha);
    let tr_omega = omega.trace();
    let omega_bar = DensityOp::normalized(&omega);
    let rate_term = alpha / (alpha - 1.0) * tr_omega.ln();
    let total = d_old_cq(w, p, sigma.as_psd(), alpha)?;
    let residual_div =
        crate::divergence::d_renyi(omega_bar.as_psd(), sigma.as_psd(), alpha, crate::divergence::DivergenceFamily::Old)?;
    Ok(SibsonDecomposition { total, rate_term, residual_div, omega_bar })
}

/// `κ(c,α) = (1+c)^α (2+c+1/c)^{1-α}`, the constant of the random-coding
/// single-shot bound; `κ(1,α) ≤ 8` on `(0,1)`.
pub fn hn_kappa(c: f64, alpha: f64) -> f64 {
    (1.0 + c).powf(alpha) * (2.0 + c + 1.0 / c).powf(1.0 - alpha)
}

/// Random-coding error bound: some code of size `M` has average error at
/// most `κ(c,α) M^{1-α} Tr Ŵ(p)^α (p̂⊗W(p))^{1-α}` for every `α ∈ (0,1)`
/// and `c > 0` (the value may exceed 1 and is then vacuous).
pub fn hn_bound(w: &Channel, p: &InputDist, m: u64, alpha: f64, c: f64) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidInput("code size M must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaRange { alpha, range: "(0,1)" });
    }
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("c must be positive, got {c}")));
    }
    let avg = w.average(p)?;
    let q = log_q_old_cq(w, p, avg.as_psd(), alpha)?.exp();
    Ok(hn_kappa(c, alpha) * (m as f64).powf(1.0 - alpha) * q)
}

/// The inequality chain behind the compound-channel error bound, evaluated
/// on concrete channels with uniform mixing weights. Every value bounds the
/// previous one from above:
///
/// 1. `q_old_mixture`: `Q_α^old` of the mixture channel against its own
///    average output;
/// 2. `q_new_mixture`: the sandwiched `Q_α^new` of the same pair;
/// 3. `weighted_split`: `Σ_i γ_i^α Q_α^new(Ŵ_i(p)‖p̂⊗W̄(p))` from
///    subadditivity of the sandwiched quantity in its first argument;
/// 4. `sup_sigma_new`: `Σ_i γ_i^α sup_σ Q_α^new(Ŵ_i(p)‖p̂⊗σ)
///    = Σ_i γ_i^α e^{(α-1)χ_α^new(W_i,p)}`;
/// 5. `sup_sigma_old`: `Σ_i γ_i^α e^{α(α-1)χ_α^old(W_i,p)} d^{(α-1)²}` from
///    the family-comparison bound (per-block, densities, `α < 1`);
/// 6. `min_chi`: `|I| e^{α(α-1) min_i χ_α^old(W_i,p)} d^{(α-1)²}`.
#[derive(Debug, Clone)]
pub struct CompoundChain {
    pub q_old_mixture: f64,
    pub q_new_mixture: f64,
    pub weighted_split: f64,
    pub sup_sigma_new: f64,
    pub sup_sigma_old: f64,
    pub min_chi: f64,
}

impl CompoundChain {
    /// The chain as `(label, smaller, larger)` steps for auditing.
    pub fn steps(&self) -> Vec<(&'static str, f64, f64)> {
        vec![
            ("alt-mixture", self.q_old_mixture, self.q_new_mixture),
            ("subadditivity-split", self.q_new_mixture, self.weighted_split),
            ("sup-sigma", self.weighted_split, self.sup_sigma_new),
            ("family-comparison", self.sup_sigma_new, self.sup_sigma_old),
            ("min-chi", self.sup_sigma_old, self.min_chi),
        ]
    }
}

/// The compound-channel error bound together with its internal chain.
#[derive(Debug, Clone)]
pub struct CompoundBound {
    /// `8 |I|² exp[n(α-1)(α min_i χ_α^old(W_i,p) - R - (α-1) log dim H)]`.
    pub bound: f64,
    pub chain: CompoundChain,
}

fn check_compound_inputs(ws: &[Channel], p: &InputDist, alpha: f64) -> Result<()> {
    if ws.is_empty() {
        return Err(Error::EmptyInput("channel family"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaRange { alpha, range: "(0,1)" });
    }
    let dim = ws[0].output_dim();
    for w in ws {
        if w.output_dim() != dim {
            return Err(Error::DimensionMismatch(w.output_dim(), dim));
        }
        for sym in p.symbols() {
            w.output(sym)?;
        }
    }
    Ok(())
}

/// Uniform mixture channel `W̄(x) = (1/|I|) Σ_i W_i(x)` on the support of `p`.
fn mixture_channel(ws: &[Channel], p: &InputDist) -> Result<Channel> {
    let dim = ws[0].output_dim();
    let gamma = 1.0 / ws.len() as f64;
    let mut outputs = Vec::with_capacity(p.symbols().len());
    for sym in p.symbols() {
        let mut acc = CMatrix::zeros(dim, dim);
        for w in ws {
            acc += w.output(sym)?.matrix().clone().scale(gamma);
        }
        outputs.push(DensityOp::new(PSDOp::wrap(acc))?);
    }
    Channel::new(p.symbols().to_vec(), outputs)
}

/// Evaluates the compound error bound at rate `R` and block length `n`, and
/// exposes the single-letter inequality chain for auditing.
pub fn compound_error_bound(
    ws: &[Channel],
    p: &InputDist,
    rate: f64,
    n: usize,
    alpha: f64,
) -> Result<CompoundBound> {
    check_compound_inputs(ws, p, alpha)?;
    let chain = compound_chain(ws, p, alpha, &ChiNewConfig::default())?;
    let dim = ws[0].output_dim() as f64;
    let min_chi = ws
        .iter()
        .map(|w| chi_old(w, p, alpha))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let count = ws.len() as f64;
    let exponent =
        (n as f64) * (alpha - 1.0) * (alpha * min_chi - rate - (alpha - 1.0) * dim.ln());
    Ok(CompoundBound { bound: 8.0 * count * count * exponent.exp(), chain })
}

/// Evaluates the single-letter chain values (uniform weights, as in the
/// random-coding argument).
pub fn compound_chain(
    ws: &[Channel],
    p: &InputDist,
    alpha: f64,
    config: &ChiNewConfig,
) -> Result<CompoundChain> {
    check_compound_inputs(ws, p, alpha)?;
    let mixture = mixture_channel(ws, p)?;
    let avg = mixture.average(p)?;
    let gamma = 1.0 / ws.len() as f64;
    let dim = ws[0].output_dim() as f64;

    let q_old_mixture = log_q_old_cq(&mixture, p, avg.as_psd(), alpha)?.exp();
    let q_new_mixture = log_q_new_cq(&mixture, p, avg.as_psd(), alpha)?.exp();
    let mut weighted_split = 0.0;
    let mut sup_sigma_new = 0.0;
    let mut sup_sigma_old = 0.0;
    let mut min_chi_val = f64::INFINITY;
    for w in ws {
        weighted_split += gamma.powf(alpha) * log_q_new_cq(w, p, avg.as_psd(), alpha)?.exp();
        // χ_new with the mixture average as an extra start guarantees the
        // numerical sup dominates the concrete σ used one step earlier
        let mut cfg = config.clone();
        cfg.extra_starts.push(avg.clone());
        let chi_n = chi_new(w, p, alpha, &cfg)?;
        sup_sigma_new += gamma.powf(alpha) * ((alpha - 1.0) * chi_n.value).exp();
        let chi_o = chi_old(w, p, alpha)?;
        min_chi_val = min_chi_val.min(chi_o);
        sup_sigma_old += gamma.powf(alpha)
            * (alpha * (alpha - 1.0) * chi_o).exp()
            * dim.ln().exp().powf((alpha - 1.0) * (alpha - 1.0));
    }
    let min_chi = ws.len() as f64
        * (alpha * (alpha - 1.0) * min_chi_val).exp()
        * dim.powf((alpha - 1.0) * (alpha - 1.0));
    Ok(CompoundChain {
        q_old_mixture,
        q_new_mixture,
        weighted_split,
        sup_sigma_new,
        sup_sigma_old,
        min_chi,
    })
}

/// A rate-feasibility certificate for a compound channel.
#[derive(Debug, Clone, Copy)]
pub struct RateCertificate {
    pub feasible: bool,
    pub alpha_star: f64,
    /// Best decay rate found: the bound shrinks like `e^{-n·exponent}`
    /// (positive means the error probability vanishes exponentially).
    pub exponent: f64,
}

/// Searches `α ∈ (0,1)` for a positive decay exponent
/// `(1-α)(α min_i χ_α^old(W_i,p) - R - (α-1) log dim H)`; a feasible
/// certificate exists whenever `R < min_i χ(W_i,p)`.
pub fn compound_rate_certificate(
    ws: &[Channel],
    p: &InputDist,
    rate: f64,
) -> Result<RateCertificate> {
    if rate < 0.0 {
        return Err(Error::InvalidInput(format!("rate must be nonnegative, got {rate}")));
    }
    check_compound_inputs(ws, p, 0.5)?;
    let dim = ws[0].output_dim() as f64;
    let exponent_at = |alpha: f64| -> Result<f64> {
        let min_chi = ws
            .iter()
            .map(|w| chi_old(w, p, alpha))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Ok((1.0 - alpha) * (alpha * min_chi - rate - (alpha - 1.0) * dim.ln()))
    };
    let mut best = (f64::NEG_INFINITY, 0.5);
    let grid = 199;
    for i in 1..=grid {
        let alpha = i as f64 / (grid + 1) as f64;
        let e = exponent_at(alpha)?;
        if e > best.0 {
            best = (e, alpha);
        }
    }
    // golden refinement around the best grid point
    let lo = (best.1 - 1.0 / (grid + 1) as f64).max(1e-4);
    let hi = (best.1 + 1.0 / (grid + 1) as f64).min(1.0 - 1e-4);
    let g = |alpha: f64| exponent_at(alpha).unwrap_or(f64::NEG_INFINITY);
    let refined = crate::stein::golden_max(&g, lo, hi, 1e-10);
    let exponent = best.0.max(refined);
    Ok(RateCertificate { feasible: exponent > 0.0, alpha_star: best.1, exponent })
}

/// Numerical probe of whether the sandwiched α-Holevo quantity is additive
/// over i.i.d. extensions (open: only subadditivity
/// `χ_new(W⊗W, p⊗p) ≤ 2 χ_new(W, p)` follows from restricting to product
/// optimizers). Returns `(2 × single-letter value, two-letter value)`;
/// nothing is asserted about their equality.
pub fn chi_new_additivity_probe(
    w: &Channel,
    p: &InputDist,
    alpha: f64,
    config: &ChiNewConfig,
) -> Result<(f64, f64)> {
    let single = chi_new(w, p, alpha, config)?.value;
    let w2 = w.iid_extension(2)?;
    let p2 = p.iid_extension(2)?;
    let double = chi_new(&w2, &p2, alpha, config)?.value;
    Ok((2.0 * single, double))
}

/// Distance between channels on a common alphabet:
/// `max_x ‖A(x) - B(x)‖₁` (the finite-alphabet surrogate of the induced
/// superoperator norm).
pub fn channel_distance(a: &Channel, b: &Channel) -> Result<f64> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::InvalidInput("channels have different alphabets".into()));
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.outputs().iter().zip(b.outputs()) {
        worst = worst.max(trace_norm(&x.sub(y)?));
    }
    Ok(worst)
}

/// Greedy maximal δ-separated subset of a finite channel pool under
/// [`channel_distance`]; covers the pool to within `< δ`.
pub fn channel_net(pool: &[Channel], delta: f64) -> Result<Vec<Channel>> {
    if pool.is_empty() {
        return Err(Error::EmptyInput("channel pool"));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    let mut net: Vec<Channel> = Vec::new();
    for cand in pool {
        let mut separated = true;
        for kept in &net {
            if channel_distance(cand, kept)? < delta {
                separated = false;
                break;
            }
        }
        if separated {
            net.push(cand.clone());
        }
    }
    Ok(net)
}

/// Heuristic Holevo-capacity ascent: exponentiated-gradient (mirror) updates
/// `p(x) ∝ p(x) e^{D₁(W(x)‖W(p))}` on the simplex until the value change
/// drops below `tol`. Finds `sup_p χ(W,p)` in practice but carries no global
/// optimality certificate.
pub fn holevo_capacity_heuristic(
    w: &Channel,
    max_iters: usize,
    tol: f64,
) -> Result<(InputDist, f64)> {
    let mut p = InputDist::uniform(w.alphabet())?;
    let mut value = holevo(w, &p)?;
    for _ in 0..max_iters {
        let avg = w.average(&p)?;
        let mut weights: Vec<f64> = Vec::with_capacity(p.symbols().len());
        for (sym, &prob) in p.symbols().iter().zip(p.probs()) {
            let d = umegaki(w.output(sym)?.as_psd(), avg.as_psd())?
                .finite()
                .expect("supports match");
            weights.push(prob * d.exp());
        }
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|x| (x / total).max(1e-300)).collect();
        let total2: f64 = probs.iter().sum();
        let probs: Vec<f64> = probs.iter().map(|x| x / total2).collect();
        let next = InputDist::new(p.symbols().to_vec(), probs)?;
        let next_value = holevo(w, &next)?;
        let delta = (next_value - value).abs();
        p = next;
        value = next_value;
        if delta < tol {
            break;
        }
    }
    Ok((p, value))
}
