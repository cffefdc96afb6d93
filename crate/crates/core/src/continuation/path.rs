use crate::metric::{MappingInstance, MetricError, Point};

use super::boundary::check_leray_schauder;
use super::bounds::{apriori_norm_bound, step_size};
use super::ContinuationError;

/// Smallest parameter increment accepted before the tracer gives up.
pub const MIN_STEP: f64 = 1e-14;

/// Default ball-radius cap for the step rule.
pub const DEFAULT_R_CAP: f64 = 1.0;

/// Settings shared by [`trace_path`] and [`limit_fixed_point`].
#[derive(Clone, Debug, PartialEq)]
pub struct PathConfig {
    /// Lipschitz reporting cap; also where non-Rakotch paths stop.
    pub q: f64,
    pub inner_tol: f64,
    pub max_inner_iter: usize,
    pub target_t: f64,
    /// Bound on `|T x_t|`; estimated along the path when absent.
    pub m_bound: Option<f64>,
    pub r_cap: f64,
    /// Extra multipliers tried by the boundary check besides the aligned one.
    pub lambda_grid: Vec<f64>,
}

impl PathConfig {
    pub fn new(q: f64, inner_tol: f64, target_t: f64) -> PathConfig {
        PathConfig {
            q,
            inner_tol,
            max_inner_iter: 100_000,
            target_t,
            m_bound: None,
            r_cap: DEFAULT_R_CAP,
            lambda_grid: (1..=40).map(|i| 1.0 + 0.25 * i as f64).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ContinuationError> {
        let fail = |msg: String| Err(ContinuationError::Argument(msg));
        if !(self.q > 0.0 && self.q < 1.0) {
            return fail(format!("q must lie in (0, 1), got {}", self.q));
        }
        if !(self.inner_tol > 0.0) {
            return fail(format!(
                "inner tolerance must be positive, got {}",
                self.inner_tol
            ));
        }
        if self.max_inner_iter == 0 {
            return fail("max_inner_iter must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.target_t) {
            return fail(format!(
                "target t must lie in [0, 1], got {}",
                self.target_t
            ));
        }
        if let Some(m) = self.m_bound {
            if !(m > 0.0 && m.is_finite()) {
                return fail(format!("M bound must be positive, got {m}"));
            }
        }
        if !(self.r_cap > 0.0) {
            return fail(format!("r cap must be positive, got {}", self.r_cap));
        }
        Ok(())
    }
}

/// One accepted point `(t, x_t)` of a path with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct PathEntry {
    pub t: f64,
    pub x: Point,
    /// `|x - tTx|` at acceptance.
    pub inner_residual: f64,
    /// Increment allowed by the step rule (schedule gap for limit paths).
    pub step_bound: f64,
    /// Radius of the invariant ball used for the step (zero for schedule jumps).
    pub r_used: f64,
}

/// The extracted `t -> 1` limit.
#[derive(Clone, Debug, PartialEq)]
pub struct Terminal {
    pub x1: Point,
    pub on_boundary: bool,
    /// `|x1 - T x1|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationPath {
    pub map: String,
    pub entries: Vec<PathEntry>,
    pub q: f64,
    pub inner_tol: f64,
    /// Bound on `|T x_t|` over the entries (given or running maximum).
    pub m_bound: f64,
    pub terminal: Option<Terminal>,
}

impl ContinuationPath {
    pub fn last(&self) -> &PathEntry {
        self.entries.last().expect("path holds its origin entry")
    }

    /// Audit every path invariant and return the failed ones as messages.
    pub fn audit(&self, map: &MappingInstance) -> Vec<String> {
        let space = map.space();
        let domain = map.domain();
        let mut failures = Vec::new();
        let norm_t0 = map
            .apply(&space.zero())
            .map(|p| space.norm(&p))
            .unwrap_or(f64::NAN);
        let bounds = apriori_norm_bound(norm_t0, self.q, map.modulus()).ok();

        for (i, e) in self.entries.iter().enumerate() {
            if e.t < 1.0 && !domain.interior_contains(space, &e.x) {
                failures.push(format!("entry {i} (t = {}) is not interior", e.t));
            }
            if !(e.inner_residual <= self.inner_tol) {
                failures.push(format!(
                    "entry {i} inner residual {:e} above tolerance",
                    e.inner_residual
                ));
            }
            let norm = space.norm(&e.x);
            if let Some(b) = bounds {
                if e.t <= self.q && norm > b.nonexpansive + 1e-9 {
                    failures.push(format!("entry {i} violates |x_t| <= |T0|/(1-q): {norm}"));
                }
                if let Some(r) = b.rakotch {
                    if e.t < 1.0 && norm > r + 1e-9 {
                        failures.push(format!("entry {i} violates the Rakotch norm bound: {norm}"));
                    }
                }
            }
        }
        for (i, w) in self.entries.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            if !(b.t > a.t) {
                failures.push(format!("entries {i}, {} are not increasing in t", i + 1));
            }
            let gap = space.distance(&a.x, &b.x);
            if b.t <= self.q {
                let bound = (a.t - b.t).abs() * self.m_bound / (1.0 - self.q);
                if gap > bound + 2.0 * self.inner_tol {
                    failures.push(format!(
                        "entries {i}, {} violate the Lipschitz bound",
                        i + 1
                    ));
                }
            }
            if b.r_used > 0.0 && b.step_bound > 0.0 && gap > b.r_used + 2.0 * self.inner_tol {
                failures.push(format!("entry {} left its invariant ball", i + 1));
            }
        }
        failures
    }
}

fn check_t(t: f64) -> Result<(), ContinuationError> {
    if (0.0..1.0).contains(&t) {
        Ok(())
    } else {
        Err(ContinuationError::Argument(format!(
            "t must lie in [0, 1), got {t}"
        )))
    }
}

/// Fixed point of `tT` by the iteration `x <- tTx` from `x_init`.
///
/// Returns `(x, |x - tTx|)` once the residual is at most `inner_tol`. Fails when
/// an iterate leaves the closed domain or after `max_inner_iter` iterations.
pub fn solve_at_t(
    map: &MappingInstance,
    t: f64,
    x_init: &Point,
    inner_tol: f64,
    max_inner_iter: usize,
) -> Result<(Point, f64), ContinuationError> {
    check_t(t)?;
    if !(inner_tol > 0.0) {
        return Err(ContinuationError::Argument(format!(
            "inner tolerance must be positive, got {inner_tol}"
        )));
    }
    map.space().check_dim(x_init)?;
    if !map.contains(x_init) {
        return Err(MetricError::OutsideDomain {
            point: x_init.iter().copied().collect(),
        }
        .into());
    }
    let space = map.space();
    let mut x = x_init.clone();
    for iteration in 0.. {
        let y = map.apply(&x)? * t;
        let residual = space.distance(&x, &y);
        if residual <= inner_tol {
            return Ok((x, residual));
        }
        if iteration == max_inner_iter {
            return Err(ContinuationError::NonConvergence {
                t,
                iterations: iteration,
                residual,
            });
        }
        if !map.contains(&y) {
            return Err(ContinuationError::DomainExit {
                t,
                point: y.iter().copied().collect(),
            });
        }
        x = y;
    }
    unreachable!()
}

/// Walks `t` upward from a path point using the ball-invariance step rule.
struct Tracer<'a> {
    map: &'a MappingInstance,
    cfg: &'a PathConfig,
    entries: Vec<PathEntry>,
    m_seen: f64,
}

impl<'a> Tracer<'a> {
    fn start(
        map: &'a MappingInstance,
        cfg: &'a PathConfig,
    ) -> Result<Tracer<'a>, ContinuationError> {
        cfg.validate()?;
        let space = map.space();
        let origin = space.zero();
        if !map.domain().interior_contains(space, &origin) {
            return Err(ContinuationError::OriginNotInterior);
        }
        let m_seen = space.norm(&map.apply(&origin)?);
        Ok(Tracer {
            map,
            cfg,
            entries: vec![PathEntry {
                t: 0.0,
                x: origin,
                inner_residual: 0.0,
                step_bound: 0.0,
                r_used: 0.0,
            }],
            m_seen,
        })
    }

    fn current(&self) -> &PathEntry {
        self.entries.last().expect("origin entry")
    }

    fn ls_tol(&self, p: &Point) -> f64 {
        let image = self.map.apply(p).map(|y| self.map.norm(&y)).unwrap_or(0.0);
        4.0 * self.cfg.inner_tol * (1.0 + image)
    }

    /// Turn a boundary approach near `x` at parameter `t` into an LS-violation
    /// error when the condition fails there.
    fn boundary_violation(&self, t: f64, x: &Point) -> Result<(), ContinuationError> {
        let space = self.map.space();
        let Some(p) = self.map.domain().nearest_boundary_point(space, x) else {
            return Ok(());
        };
        if space.norm(&p) == 0.0 {
            return Err(ContinuationError::OriginNotInterior);
        }
        let tol = self.ls_tol(&p);
        let report = check_leray_schauder(self.map, &p, &self.cfg.lambda_grid, tol)?;
        match report.violation {
            Some(lambda) => Err(ContinuationError::LsViolation {
                t,
                x: p.iter().copied().collect(),
                lambda,
            }),
            None => Ok(()),
        }
    }

    /// Accept `x` as the path point at `t`, checking the boundary first.
    fn accept(
        &mut self,
        t: f64,
        x: Point,
        residual: f64,
        step_bound: f64,
        r_used: f64,
    ) -> Result<(), ContinuationError> {
        let space = self.map.space();
        let domain = self.map.domain();
        if domain.boundary_distance(space, &x) <= self.cfg.inner_tol {
            self.boundary_violation(t, &x)?;
            if !domain.interior_contains(space, &x) {
                return Err(ContinuationError::DomainExit {
                    t,
                    point: x.iter().copied().collect(),
                });
            }
        }
        self.m_seen = self.m_seen.max(space.norm(&self.map.apply(&x)?));
        self.entries.push(PathEntry {
            t,
            x,
            inner_residual: residual,
            step_bound,
            r_used,
        });
        Ok(())
    }

    fn solve_from_current(&self, t: f64) -> Result<(Point, f64), ContinuationError> {
        let cur = self.current();
        match solve_at_t(
            self.map,
            t,
            &cur.x,
            self.cfg.inner_tol,
            self.cfg.max_inner_iter,
        ) {
            Err(ContinuationError::DomainExit { t: te, point }) => {
                self.boundary_violation(te, &cur.x)?;
                Err(ContinuationError::DomainExit { t: te, point })
            }
            other => other,
        }
    }

    /// Advance to `target` with the step rule, one accepted entry per step.
    fn advance_to(&mut self, target: f64) -> Result<(), ContinuationError> {
        let space = self.map.space();
        while self.current().t < target {
            let cur = self.current();
            let t0 = cur.t;
            let r = self
                .map
                .domain()
                .boundary_distance(space, &cur.x)
                .min(self.cfg.r_cap);
            let norm_tx = space.norm(&self.map.apply(&cur.x)?);
            // any q in (t0, 1) admits the step; the midpoint keeps steps balanced
            let q_step = 0.5 * (1.0 + t0);
            let h = step_size(r, q_step, norm_tx, t0)?;
            if h < MIN_STEP {
                self.boundary_violation(t0, &cur.x)?;
                return Err(ContinuationError::Stall { t: t0, step: h });
            }
            let t_new = (t0 + h).min(target);
            let (x, residual) = self.solve_from_current(t_new)?;
            self.accept(t_new, x, residual, h, r)?;
        }
        Ok(())
    }

    fn finish(self, terminal: Option<Terminal>, m_bound: Option<f64>) -> ContinuationPath {
        ContinuationPath {
            map: self.map.name().to_string(),
            entries: self.entries,
            q: self.cfg.q,
            inner_tol: self.cfg.inner_tol,
            m_bound: m_bound.or(self.cfg.m_bound).unwrap_or(self.m_seen),
            terminal,
        }
    }
}

/// Track the fixed points `x_t` of `tT` from `(0, 0)` up to `cfg.target_t`
/// (or `cfg.q` for maps whose modulus is not Rakotch).
///
/// Each step takes `r` as the boundary distance of the current point (capped at
/// `cfg.r_cap`), advances `t` by [`step_size`] and re-solves warm-started from
/// the previous point. Approaching the boundary triggers a Leray-Schauder check
/// whose failure is reported as [`ContinuationError::LsViolation`].
pub fn trace_path(
    map: &MappingInstance,
    cfg: &PathConfig,
) -> Result<ContinuationPath, ContinuationError> {
    if cfg.target_t >= 1.0 {
        return Err(ContinuationError::Argument(
            "trace_path needs target t < 1; use limit_fixed_point for t -> 1".into(),
        ));
    }
    let mut tracer = Tracer::start(map, cfg)?;
    let stop = if map.modulus().is_rakotch() {
        cfg.target_t
    } else {
        cfg.target_t.min(cfg.q)
    };
    tracer.advance_to(stop)?;
    Ok(tracer.finish(None, None))
}

/// Result of [`limit_fixed_point`].
#[derive(Clone, Debug, PartialEq)]
pub struct LimitResult {
    pub x1: Point,
    pub on_boundary: bool,
    /// Last schedule parameter used.
    pub t_final: f64,
    /// `|x1 - T x1|`.
    pub residual: f64,
    /// `|T x_t|` bound used in the stopping rule.
    pub m_bound: f64,
    /// `max |x_{t_n} - x1| / (1 - t_n)` over the schedule.
    pub empirical_modulus: f64,
    /// Schedule points with the terminal record attached.
    pub path: ContinuationPath,
}

/// `x1 = lim_{t -> 1} x_t` for Rakotch maps, along `t_n = 1 - 2^-n`.
pub fn limit_fixed_point(
    map: &MappingInstance,
    cfg: &PathConfig,
    final_tol: f64,
) -> Result<LimitResult, ContinuationError> {
    limit_fixed_point_with_ratio(map, cfg, final_tol, 0.5)
}

/// As [`limit_fixed_point`] along `t_n = 1 - ratio^n`.
///
/// Stops at the first `t_n` with `(1 - t_n) M / (1 - phi(final_tol)) < final_tol`,
/// which forces `|x_{t_n} - x1| < final_tol`. `M` is `cfg.m_bound` if set,
/// otherwise the a-priori bound `|T0| + max(1, |T0| / (1 - phi(1)))` (raised to
/// any larger `|T x_t|` seen on the way).
pub fn limit_fixed_point_with_ratio(
    map: &MappingInstance,
    cfg: &PathConfig,
    final_tol: f64,
    ratio: f64,
) -> Result<LimitResult, ContinuationError> {
    let modulus = map.modulus();
    if !modulus.is_rakotch() {
        return Err(ContinuationError::NotApplicable(format!(
            "modulus {modulus} is not Rakotch; the t -> 1 limit need not exist"
        )));
    }
    if !(final_tol > 0.0) {
        return Err(ContinuationError::Argument(format!(
            "final tolerance must be positive, got {final_tol}"
        )));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(ContinuationError::Argument(format!(
            "schedule ratio must lie in (0, 1), got {ratio}"
        )));
    }
    let mut tracer = Tracer::start(map, cfg)?;
    let space = map.space();
    let norm_t0 = tracer.m_seen;
    let rakotch_radius = apriori_norm_bound(norm_t0, cfg.q, modulus)?
        .rakotch
        .expect("Rakotch modulus");
    let m_apriori = cfg.m_bound.unwrap_or(norm_t0 + rakotch_radius);
    let gap = 1.0 - modulus.eval(final_tol)?;

    let mut tail = 1.0;
    loop {
        tail *= ratio;
        let t = 1.0 - tail;
        if t <= tracer.current().t {
            return Err(ContinuationError::Stall { t, step: 0.0 });
        }
        let t_prev = tracer.current().t;
        match tracer.solve_from_current(t) {
            // schedule jumps use no invariant ball
            Ok((x, residual)) => tracer.accept(t, x, residual, t - t_prev, 0.0)?,
            // the direct jump left the domain: walk there with the step rule
            Err(ContinuationError::DomainExit { .. }) => tracer.advance_to(t)?,
            Err(e) => return Err(e),
        }
        let m = m_apriori.max(tracer.m_seen);
        if (1.0 - t) * m / gap < final_tol {
            break;
        }
    }

    let m_bound = m_apriori.max(tracer.m_seen);
    let last = tracer.current();
    let x1 = last.x.clone();
    let t_final = last.t;
    let residual = space.distance(&x1, &map.apply(&x1)?);
    if !(residual <= 10.0 * final_tol) {
        return Err(ContinuationError::LimitCertificate {
            residual,
            tol: 10.0 * final_tol,
        });
    }
    let on_boundary = map.domain().boundary_distance(space, &x1) <= final_tol;
    let empirical_modulus = tracer
        .entries
        .iter()
        .filter(|e| e.t < t_final)
        .map(|e| space.distance(&e.x, &x1) / (1.0 - e.t))
        .fold(0.0, f64::max);
    let terminal = Terminal {
        x1: x1.clone(),
        on_boundary,
        residual,
    };
    Ok(LimitResult {
        x1,
        on_boundary,
        t_final,
        residual,
        m_bound,
        empirical_modulus,
        path: tracer.finish(Some(terminal), Some(m_bound)),
    })
}
