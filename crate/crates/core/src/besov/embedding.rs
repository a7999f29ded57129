use serde::Serialize;

use super::exponent::Exponent;
use super::norms::{lp_norm, BesovSpec};
use crate::field::Field;
use crate::lp::LittlewoodPaley;

/// Parameters of the embedding chain
/// `B^{s+ε}_{p,∞} ↪ B^{s,1}_{p,∞} ↪ B^s_{p,r̃}` and `B^{s+ε}_{p,∞} ↪ B^s_{p,1} ↪ B^s_{p,r̃}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EmbeddingParams {
    pub s: f64,
    pub epsilon: f64,
    pub p: Exponent,
    pub r_tilde: Exponent,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        Self {
            s: -1.0,
            epsilon: 0.5,
            p: Exponent::Finite(2.0),
            r_tilde: Exponent::Finite(2.0),
        }
    }
}

/// Ratios `‖f‖_target / ‖f‖_source`, one per embedding. Each must stay
/// bounded across fields and resolutions.
#[derive(Debug, Clone, Default, Serialize)]
pub struct EmbeddingReport {
    /// `‖f‖_{B⁰_{∞,∞}} / ‖f‖_∞`.
    pub linf_into_b0_inf_inf: f64,
    /// `‖f‖_∞ / ‖f‖_{B⁰_{∞,1}}`.
    pub b0_inf_1_into_linf: f64,
    /// `‖f‖_{B⁰_{p,∞}} / ‖f‖_p`.
    pub lp_into_b0_p_inf: f64,
    /// `‖f‖_p / ‖f‖_{B⁰_{p,1}}`.
    pub b0_p_1_into_lp: f64,
    /// `‖f‖_{B^{s,1}_{p,∞}} / ‖f‖_{B^{s+ε}_{p,∞}}`.
    pub shift_into_log: f64,
    /// `‖f‖_{B^s_{p,r̃}} / ‖f‖_{B^{s,1}_{p,∞}}`.
    pub log_into_r_tilde: f64,
    /// `‖f‖_{B^s_{p,1}} / ‖f‖_{B^{s+ε}_{p,∞}}`.
    pub shift_into_b_s_1: f64,
    /// `‖f‖_{B^s_{p,r̃}} / ‖f‖_{B^s_{p,1}}`.
    pub b_s_1_into_r_tilde: f64,
}

impl EmbeddingReport {
    pub fn ratios(&self) -> [(&'static str, f64); 8] {
        [
            ("linf_into_b0_inf_inf", self.linf_into_b0_inf_inf),
            ("b0_inf_1_into_linf", self.b0_inf_1_into_linf),
            ("lp_into_b0_p_inf", self.lp_into_b0_p_inf),
            ("b0_p_1_into_lp", self.b0_p_1_into_lp),
            ("shift_into_log", self.shift_into_log),
            ("log_into_r_tilde", self.log_into_r_tilde),
            ("shift_into_b_s_1", self.shift_into_b_s_1),
            ("b_s_1_into_r_tilde", self.b_s_1_into_r_tilde),
        ]
    }

    /// Componentwise maximum.
    pub fn max(&self, other: &EmbeddingReport) -> EmbeddingReport {
        EmbeddingReport {
            linf_into_b0_inf_inf: self.linf_into_b0_inf_inf.max(other.linf_into_b0_inf_inf),
            b0_inf_1_into_linf: self.b0_inf_1_into_linf.max(other.b0_inf_1_into_linf),
            lp_into_b0_p_inf: self.lp_into_b0_p_inf.max(other.lp_into_b0_p_inf),
            b0_p_1_into_lp: self.b0_p_1_into_lp.max(other.b0_p_1_into_lp),
            shift_into_log: self.shift_into_log.max(other.shift_into_log),
            log_into_r_tilde: self.log_into_r_tilde.max(other.log_into_r_tilde),
            shift_into_b_s_1: self.shift_into_b_s_1.max(other.shift_into_b_s_1),
            b_s_1_into_r_tilde: self.b_s_1_into_r_tilde.max(other.b_s_1_into_r_tilde),
        }
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Embedding ratios of one field. A zero field gives all zeros.
pub fn embedding_check(f: &Field, params: &EmbeddingParams) -> EmbeddingReport {
    let lp = LittlewoodPaley::default();
    let inf = Exponent::Infinity;
    let one = Exponent::Finite(1.0);
    let sup_blocks = lp.block_norms(f, inf);
    let p_blocks = lp.block_norms(f, params.p);
    let b = |blocks: &[f64], s: f64, r: Exponent, alpha: f64| BesovSpec { s, p: params.p, r, alpha }.combine(blocks);
    let plain = |blocks: &[f64], r: Exponent| BesovSpec::plain(0.0, inf, r).combine(blocks);

    let sup = lp_norm(f, inf);
    let lpn = lp_norm(f, params.p);
    let (s, eps) = (params.s, params.epsilon);
    let shifted = b(&p_blocks, s + eps, inf, 0.0);
    let log = b(&p_blocks, s, inf, 1.0);
    let r_tilde = b(&p_blocks, s, params.r_tilde, 0.0);
    let s_one = b(&p_blocks, s, one, 0.0);
    EmbeddingReport {
        linf_into_b0_inf_inf: ratio(plain(&sup_blocks, inf), sup),
        b0_inf_1_into_linf: ratio(sup, plain(&sup_blocks, one)),
        lp_into_b0_p_inf: ratio(b(&p_blocks, 0.0, inf, 0.0), lpn),
        b0_p_1_into_lp: ratio(lpn, b(&p_blocks, 0.0, one, 0.0)),
        shift_into_log: ratio(log, shifted),
        log_into_r_tilde: ratio(r_tilde, log),
        shift_into_b_s_1: ratio(s_one, shifted),
        b_s_1_into_r_tilde: ratio(r_tilde, s_one),
    }
}
