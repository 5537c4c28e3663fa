//! Membership in principal ideals and their kernels, in g-coordinates.
//!
//! With `g^a(t) = g(t - a)`, an operator `A` lies in the principal ideal `I(B)`
//! when `g_A ≥ b + g_B^a` eventually for some shifts `a, b`, and in the kernel
//! `I_0(B)` when `g_A - g_B^a → +∞` for some `a`.
//!
//! Closed-form pairs are decided exactly by comparing asymptotic expansions.
//! Everything else is decided on a finite horizon and may come out undecided.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{pointwise_min, shift, EigenvalueFunction, Expansion, GFunction, Profile};
use crate::grid;
use crate::indices::{regularity_of, EstimatorConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealConfig {
    /// Horizon for functions without an intrinsic one.
    pub horizon: f64,
    /// Exact-mode witnesses are also checked on a logarithmic grid out to here.
    pub far_horizon: f64,
    /// Horizontal shifts `a` are searched over the integers in `[-shift_max, shift_max]`.
    pub shift_max: u32,
    pub tail_window: f64,
    pub grid_points: usize,
    pub tol: f64,
    /// Levels `c` of the kernel test `g_A - g_B^a > c`.
    pub kernel_levels: Vec<f64>,
    /// Relative margin by which tail slopes must differ to refute membership.
    pub slope_margin: f64,
}

impl Default for IdealConfig {
    fn default() -> Self {
        Self {
            horizon: 40.0,
            far_horizon: 1e6,
            shift_max: 50,
            tail_window: 0.5,
            grid_points: 4000,
            tol: 1e-9,
            kernel_levels: vec![1.0, 10.0, 100.0],
            slope_margin: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMode {
    Exact,
    HorizonLimited,
}

/// `g_A(t) ≥ b + g_B(t - a)` on the checked grid from `t0` to `t_end`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftWitness {
    pub a: f64,
    pub b: f64,
    #[serde(with = "crate::serde_ext")]
    pub t0: f64,
    #[serde(with = "crate::serde_ext")]
    pub t_end: f64,
    pub grid_points: usize,
}

/// Past `t0`, the gap `g_A - g_B^a` stays above `c` on the checked grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelLevel {
    pub c: f64,
    #[serde(with = "crate::serde_ext")]
    pub t0: f64,
}

/// Why membership fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// `g_A` grows strictly slower than every shift of `g_B`.
    GrowthDeficit {
        a: Expansion,
        b: Expansion,
    },
    /// Equal growth, so `g_A - g_B^a` stays bounded for every `a`.
    BoundedGap {
        #[serde(with = "crate::serde_ext")]
        limit: f64,
    },
    /// Tail slopes on the horizon, `s_A < s_B` with margin, and the gap keeps
    /// falling for every searched shift.
    TailSlopes { s_a: f64, s_b: f64 },
    /// `B` has finite rank but `A` does not.
    FiniteRankBase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealDecision {
    pub verdict: Membership,
    pub witness: Option<ShiftWitness>,
    pub refutation: Option<Refutation>,
    pub mode: DecisionMode,
    /// Kernel decisions only: the thresholds `t0(c)` found for each level.
    pub kernel_levels: Vec<KernelLevel>,
}

impl IdealDecision {
    fn member(witness: ShiftWitness, mode: DecisionMode) -> Self {
        Self { verdict: Membership::Member, witness: Some(witness), refutation: None, mode, kernel_levels: vec![] }
    }

    fn non_member(refutation: Refutation, mode: DecisionMode) -> Self {
        Self { verdict: Membership::NonMember, witness: None, refutation: Some(refutation), mode, kernel_levels: vec![] }
    }

    fn undecided() -> Self {
        Self {
            verdict: Membership::Undecided,
            witness: None,
            refutation: None,
            mode: DecisionMode::HorizonLimited,
            kernel_levels: vec![],
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict == Membership::Member
    }
}

/// Cases settled by finite rank alone.
fn finite_rank_case(a: &Profile, b: &Profile) -> Option<IdealDecision> {
    if a.is_finite_rank() {
        // g_A = +∞ past the support, above any shift of g_B
        let t0 = a.support_end().map_or(f64::NEG_INFINITY, f64::ln);
        let w = ShiftWitness { a: 0.0, b: 0.0, t0, t_end: f64::INFINITY, grid_points: 0 };
        return Some(IdealDecision::member(w, DecisionMode::Exact));
    }
    if b.is_finite_rank() {
        return Some(IdealDecision::non_member(Refutation::FiniteRankBase, DecisionMode::Exact));
    }
    None
}

fn exact_pair(a: &Profile, b: &Profile) -> Option<(Expansion, Expansion)> {
    if a.horizon().is_some() || b.horizon().is_some() {
        return None;
    }
    Some((a.expansion()?, b.expansion()?))
}

/// A horizontal shift that leaves `g_B^a` growing strictly slower than `g_A`
/// when both grow exponentially, and 0 otherwise.
fn exact_shift(ea: &Expansion, eb: &Expansion) -> f64 {
    if ea.exp_rate > 0.0 && eb.exp_rate >= ea.exp_rate {
        (eb.exp_rate / ea.exp_rate).ln() + std::f64::consts::LN_2
    } else {
        0.0
    }
}

fn exact_grid(cfg: &IdealConfig) -> Vec<f64> {
    let near = grid::uniform(0.0, cfg.horizon, cfg.grid_points);
    let far = grid::logarithmic(cfg.horizon.max(1.0), cfg.far_horizon.max(cfg.horizon.max(1.0) * 2.0), cfg.grid_points / 2);
    grid::merged(near, far, 0.0, f64::INFINITY)
}

/// `g_A(t) - g_B(t - a)` on `ts`, skipping points where it is undefined
/// (both infinite).
fn gaps(a: &Profile, b: &Profile, shift_a: f64, ts: &[f64]) -> Vec<(f64, f64)> {
    ts.iter()
        .map(|&t| (t, a.g(t) - b.g(t - shift_a)))
        .filter(|(_, d)| !d.is_nan())
        .collect()
}

fn min_gap(g: &[(f64, f64)]) -> f64 {
    g.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
}

/// Decides `A ∈ I(B)`.
pub fn in_principal_ideal(g_a: &GFunction, g_b: &GFunction, cfg: &IdealConfig) -> Result<IdealDecision> {
    principal_of(g_a.profile(), g_b.profile(), cfg)
}

pub(crate) fn principal_of(a: &Profile, b: &Profile, cfg: &IdealConfig) -> Result<IdealDecision> {
    if let Some(d) = finite_rank_case(a, b) {
        return Ok(d);
    }
    if let Some((ea, eb)) = exact_pair(a, b) {
        return Ok(exact_principal(a, b, &ea, &eb, cfg));
    }
    horizon_principal(a, b, cfg)
}

fn exact_principal(a: &Profile, b: &Profile, ea: &Expansion, eb: &Expansion, cfg: &IdealConfig) -> IdealDecision {
    // shifts can always rescale an exponential rate, never a slope or log order
    let comparable = Expansion { exp_rate: if ea.exp_rate > 0.0 && eb.exp_rate > 0.0 { ea.exp_rate } else { eb.exp_rate }, ..*eb };
    if ea.growth_cmp(&comparable) == Ordering::Less {
        return IdealDecision::non_member(Refutation::GrowthDeficit { a: *ea, b: *eb }, DecisionMode::Exact);
    }
    let shift_a = exact_shift(ea, eb);
    let ts = exact_grid(cfg);
    let g = gaps(a, b, shift_a, &ts);
    let shifted = eb.shifted(shift_a, 0.0);
    let mut b_const = min_gap(&g);
    if ea.growth_cmp(&shifted) == Ordering::Equal {
        b_const = b_const.min(ea.constant - shifted.constant);
    }
    let w = ShiftWitness { a: shift_a, b: b_const, t0: ts[0], t_end: ts[ts.len() - 1], grid_points: g.len() };
    IdealDecision::member(w, DecisionMode::Exact)
}

/// Common horizon of two functions and the tail grid used on it.
struct HorizonGrid {
    t_end: f64,
    b_horizon: Option<f64>,
    ts: Vec<f64>,
}

fn horizon_grid(a: &Profile, b: &Profile, cfg: &IdealConfig, from: f64) -> HorizonGrid {
    let t_end = match (a.horizon(), b.horizon()) {
        (Some(x), Some(y)) => x.min(y),
        (x, y) => x.or(y).unwrap_or(cfg.horizon),
    };
    let t0 = from * t_end;
    let base = grid::uniform(t0, t_end, cfg.grid_points);
    let mut extra = Vec::new();
    if let Some(bps) = b.g_breakpoints() {
        extra.extend(bps);
    }
    if let Some(bps) = a.g_breakpoints() {
        // the gap is smallest just before g_A jumps
        extra.extend(bps.iter().map(|&t| t - 1e-12 * t.abs().max(1.0)));
    }
    HorizonGrid { t_end, b_horizon: b.horizon(), ts: grid::merged(base, extra, t0, t_end) }
}

/// Shifts in search order `0, 1, -1, 2, …`. On a horizon `T` they are capped at
/// `(1 - ω)T / 2`, so the shifted `g_B` is still sampled in its own tail.
fn shift_order(cfg: &IdealConfig, t_end: f64) -> impl Iterator<Item = f64> {
    let cap = ((1.0 - cfg.tail_window) * t_end / 2.0).floor().max(0.0) as i64;
    let m = (cfg.shift_max as i64).min(cap);
    std::iter::once(0).chain((1..=m).flat_map(|k| [k, -k])).map(|k| k as f64)
}

/// Points of the grid where `g_B(t - a)` is known.
fn admissible(hg: &HorizonGrid, shift_a: f64) -> Vec<f64> {
    hg.ts.iter().copied().filter(|&t| hg.b_horizon.is_none_or(|h| t - shift_a <= h)).collect()
}

fn tail_slope(p: &Profile, t0: f64, t1: f64) -> f64 {
    (p.g(t1) - p.g(t0)) / (t1 - t0)
}

fn horizon_principal(a: &Profile, b: &Profile, cfg: &IdealConfig) -> Result<IdealDecision> {
    let hg = horizon_grid(a, b, cfg, cfg.tail_window);
    for shift_a in shift_order(cfg, hg.t_end) {
        let ts = admissible(&hg, shift_a);
        if ts.len() < 10 {
            continue;
        }
        let g = gaps(a, b, shift_a, &ts);
        let mid = 0.5 * (ts[0] + ts[ts.len() - 1]);
        let first = g.iter().filter(|p| p.0 < mid).map(|p| p.1).fold(f64::INFINITY, f64::min);
        let second = g.iter().filter(|p| p.0 >= mid).map(|p| p.1).fold(f64::INFINITY, f64::min);
        if !first.is_finite() && first > 0.0 {
            continue;
        }
        // left limits at jumps are sampled a relative 1e-12 early
        if second >= first - cfg.tol * (1.0 + first.abs() + hg.t_end) {
            let w = ShiftWitness { a: shift_a, b: first.min(second), t0: ts[0], t_end: ts[ts.len() - 1], grid_points: g.len() };
            return Ok(IdealDecision::member(w, DecisionMode::HorizonLimited));
        }
    }
    let t0 = cfg.tail_window * hg.t_end;
    let (s_a, s_b) = (tail_slope(a, t0, hg.t_end), tail_slope(b, t0, hg.t_end));
    if s_b > 0.0 && s_a < s_b * (1.0 - cfg.slope_margin) {
        return Ok(IdealDecision::non_member(Refutation::TailSlopes { s_a, s_b }, DecisionMode::HorizonLimited));
    }
    Ok(IdealDecision::undecided())
}

/// Decides `A ∈ I_0(B)`.
pub fn in_kernel(g_a: &GFunction, g_b: &GFunction, cfg: &IdealConfig) -> Result<IdealDecision> {
    kernel_of(g_a.profile(), g_b.profile(), cfg)
}

pub(crate) fn kernel_of(a: &Profile, b: &Profile, cfg: &IdealConfig) -> Result<IdealDecision> {
    if let Some(mut d) = finite_rank_case(a, b) {
        if let Some(w) = d.witness {
            d.kernel_levels = cfg.kernel_levels.iter().map(|&c| KernelLevel { c, t0: w.t0 }).collect();
        }
        return Ok(d);
    }
    if let Some((ea, eb)) = exact_pair(a, b) {
        return Ok(exact_kernel(a, b, &ea, &eb, cfg));
    }
    horizon_kernel(a, b, cfg)
}

/// First grid point past which the gap stays above `c`.
fn threshold(g: &[(f64, f64)], c: f64) -> Option<f64> {
    let last_bad = g.iter().rposition(|p| p.1 <= c);
    match last_bad {
        None => g.first().map(|p| p.0),
        Some(i) if i + 1 < g.len() => Some(g[i + 1].0),
        Some(_) => None,
    }
}

fn exact_kernel(a: &Profile, b: &Profile, ea: &Expansion, eb: &Expansion, cfg: &IdealConfig) -> IdealDecision {
    let principal = exact_principal(a, b, ea, eb, cfg);
    if !principal.is_member() {
        return principal;
    }
    let shift_a = exact_shift(ea, eb);
    let shifted = eb.shifted(shift_a, 0.0);
    if ea.growth_cmp(&shifted) != Ordering::Greater {
        return IdealDecision::non_member(
            Refutation::BoundedGap { limit: ea.constant - shifted.constant },
            DecisionMode::Exact,
        );
    }
    let g = gaps(a, b, shift_a, &exact_grid(cfg));
    let mut d = principal;
    d.kernel_levels = cfg
        .kernel_levels
        .iter()
        .map(|&c| KernelLevel { c, t0: threshold(&g, c).unwrap_or(f64::INFINITY) })
        .collect();
    d
}

fn horizon_kernel(a: &Profile, b: &Profile, cfg: &IdealConfig) -> Result<IdealDecision> {
    let principal = horizon_principal(a, b, cfg)?;
    if principal.verdict == Membership::NonMember {
        return Ok(principal);
    }
    let hg = horizon_grid(a, b, cfg, 0.0);
    for shift_a in shift_order(cfg, hg.t_end) {
        let ts = admissible(&hg, shift_a);
        if ts.len() < 10 {
            continue;
        }
        let g = gaps(a, b, shift_a, &ts);
        let cutoff = ts[0] + 0.9 * (ts[ts.len() - 1] - ts[0]);
        let levels: Option<Vec<KernelLevel>> = cfg
            .kernel_levels
            .iter()
            .map(|&c| threshold(&g, c).filter(|&t0| t0 <= cutoff).map(|t0| KernelLevel { c, t0 }))
            .collect();
        if let Some(levels) = levels {
            let b_const = min_gap(&g);
            let w = ShiftWitness { a: shift_a, b: b_const, t0: ts[0], t_end: ts[ts.len() - 1], grid_points: g.len() };
            let mut d = IdealDecision::member(w, DecisionMode::HorizonLimited);
            d.kernel_levels = levels;
            return Ok(d);
        }
    }
    Ok(IdealDecision::undecided())
}

/// Decides `A ∈ I(B)` through a regular `T ∈ I(B)` with `g_A ≥ g_T`. For
/// regular `B` the shifted `g_T = b + g_B^a` of the membership witness is such a
/// `T`, so the decision coincides with [`in_principal_ideal`].
pub fn regular_domination(
    g_a: &GFunction,
    b: &EigenvalueFunction,
    cfg: &IdealConfig,
    estimator: &EstimatorConfig,
    tol: f64,
) -> Result<IdealDecision> {
    let reg = regularity_of(b.profile(), tol, estimator)?;
    if !reg.regular {
        return Err(Error::NotRegular { lower: reg.report.delta_lower, upper: reg.report.delta_upper });
    }
    let d = principal_of(g_a.profile(), b.profile(), cfg)?;
    if let Some(w) = d.witness {
        // g_T = b + g_B^a must lie below g_A on the witness range
        let g_t = b.profile().shifted(w.a, w.b);
        let hg = horizon_grid(g_a.profile(), &g_t, cfg, if d.mode == DecisionMode::Exact { 0.0 } else { cfg.tail_window });
        let ok = hg.ts.iter().filter(|&&t| t >= w.t0).all(|&t| {
            let (x, y) = (g_a.profile().g(t), g_t.g(t));
            x.is_nan() || y.is_nan() || x >= y - cfg.tol * (1.0 + y.abs())
        });
        if !ok {
            return Err(Error::VerificationFailed("regular dominator does not lie below g_A".into()));
        }
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `f, g ∈ H ⇒ f ∧ g ∈ H`.
    Meet,
    /// `f ∈ H, g ≥ f ⇒ g ∈ H`.
    Domination,
    /// `f ∈ H ⇒ f + c ∈ H`.
    VerticalShift,
    /// `f ∈ H ⇒ f^a ∈ H`.
    HorizontalShift,
    /// `f ∈ H_0 ⇒ f ∈ H`.
    KernelInIdeal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub axiom: Axiom,
    /// Index of the generator `B` in the family.
    pub base: usize,
    pub f: usize,
    pub g: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: usize,
    /// Checks skipped because a decision came out undecided.
    pub inconclusive: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

const AXIOM_SHIFTS: [f64; 2] = [-5.0, 5.0];

/// Whether `g ≥ f` everywhere, judged from expansions and a grid.
fn dominates(g: &Profile, f: &Profile, cfg: &IdealConfig) -> bool {
    let asymptotic = match (g.expansion(), f.expansion()) {
        (Some(eg), Some(ef)) => eg.lex_cmp(&ef) != Ordering::Less,
        _ => false,
    };
    asymptotic && exact_grid(cfg).iter().chain(&grid::uniform(-10.0, 0.0, 100)).all(|&t| g.g(t) >= f.g(t))
}

/// Spot-checks the closure properties of the principal face `H(B)` for every
/// `B` in the family, on all members and pairs of members.
pub fn face_axioms_check(family: &[GFunction], cfg: &IdealConfig) -> Result<AxiomReport> {
    let mut report = AxiomReport { checks: 0, inconclusive: 0, counterexamples: vec![] };
    let expect = |report: &mut AxiomReport, d: &IdealDecision, axiom, base, f, g: Option<usize>, what: &str| {
        report.checks += 1;
        match d.verdict {
            Membership::Member => {}
            Membership::Undecided => report.inconclusive += 1,
            Membership::NonMember => report.counterexamples.push(Counterexample {
                axiom,
                base,
                f,
                g,
                detail: format!("{what} is not a member: {:?}", d.refutation),
            }),
        }
    };
    for (k, base) in family.iter().enumerate() {
        let bp = base.profile();
        let members: Vec<bool> =
            family.iter().map(|f| principal_of(f.profile(), bp, cfg).map(|d| d.is_member())).collect::<Result<_>>()?;
        for (i, f) in family.iter().enumerate() {
            let fp = f.profile();
            let kernel = kernel_of(fp, bp, cfg)?;
            if kernel.is_member() {
                let d = principal_of(fp, bp, cfg)?;
                expect(&mut report, &d, Axiom::KernelInIdeal, k, i, None, "kernel member");
            }
            if !members[i] {
                continue;
            }
            for c in AXIOM_SHIFTS {
                let d = principal_of(shift(f, 0.0, c).profile(), bp, cfg)?;
                expect(&mut report, &d, Axiom::VerticalShift, k, i, None, &format!("f + {c}"));
                let d = principal_of(shift(f, c, 0.0).profile(), bp, cfg)?;
                expect(&mut report, &d, Axiom::HorizontalShift, k, i, None, &format!("f^{c}"));
            }
            // f(· + 5) ≥ f since g is non-decreasing
            let d = principal_of(shift(f, -5.0, 0.0).profile(), bp, cfg)?;
            expect(&mut report, &d, Axiom::Domination, k, i, None, "f(· + 5)");
            for (j, g) in family.iter().enumerate() {
                if j == i {
                    continue;
                }
                if dominates(g.profile(), fp, cfg) {
                    let d = principal_of(g.profile(), bp, cfg)?;
                    expect(&mut report, &d, Axiom::Domination, k, i, Some(j), "dominating member");
                }
                if j > i && members[j] {
                    let d = principal_of(pointwise_min(f, g).profile(), bp, cfg)?;
                    expect(&mut report, &d, Axiom::Meet, k, i, Some(j), "f ∧ g");
                }
            }
        }
    }
    Ok(report)
}
