use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{
    Arrivals, PipelineConfig, QueueDiscipline, ServiceTime, SeverityMix, Thinning, HOURS_PER_WEEK,
};
use crate::error::{Error, Result};
use crate::model::{CostBreakdown, Fraction, Hours, Money, Rational, Severity, Stage};

const ARRIVAL_STREAM: u64 = 0;
const SEVERITY_STREAM: u64 = 1;
const SERVICE_STREAM_BASE: u64 = 2;
const THINNING_STREAM_BASE: u64 = 6;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StageResult {
    pub stage: Stage,
    pub weekly_capacity_hours: Option<Hours>,
    pub items_in: u64,
    pub items_out: u64,
    pub items_dropped: u64,
    pub end_backlog: u64,
    /// Items whose service finished, whether they passed or were thinned.
    pub served: u64,
    pub busy_hours: Hours,
    pub completed_service_hours: Hours,
    /// Busy hours over capacity hours; absent when capacity is unbounded.
    pub utilization: Option<Rational>,
    /// Served items per week.
    pub throughput_per_week: Rational,
}

impl StageResult {
    pub fn is_conserved(&self) -> bool {
        self.items_in == self.items_out + self.items_dropped + self.end_backlog
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SimResult {
    pub config_digest: String,
    pub seed: u64,
    pub horizon_weeks: u32,
    pub arrivals: u64,
    pub stages: Vec<StageResult>,
    /// Items that passed validation.
    pub accepted: u64,
    pub accepted_fixes_shipped: u64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub shipped_by_severity: BTreeMap<Severity, u64>,
    /// Shipped fixes per triage busy hour; absent when no triage hours were used.
    pub accepted_fixes_per_maintainer_hour: Option<Rational>,
    pub first_fix_shipped_hours: Option<f64>,
    pub total_cost: CostBreakdown,
    pub total: Money,
}

impl SimResult {
    pub fn stage(&self, stage: Stage) -> &StageResult {
        &self.stages[stage.index()]
    }
}

#[derive(Clone, Copy, Debug)]
struct Item {
    severity: Option<Severity>,
}

struct Thinner {
    p: Fraction,
    mode: Thinning,
    rng: ChaCha8Rng,
    exits: u64,
}

impl Thinner {
    fn pass(&mut self) -> bool {
        let (n, d) = (u128::from(self.p.numerator()), u128::from(self.p.denominator()));
        let k = u128::from(self.exits);
        self.exits += 1;
        match self.mode {
            // Exact Bernoulli(n/d): u/2^64 < n/d.
            Thinning::Bernoulli => u128::from(self.rng.next_u64()) * d < n << 64,
            Thinning::Deterministic => (k + 1) * n / d > k * n / d,
        }
    }
}

struct InService {
    item: Item,
    remaining: i64,
    total: i64,
}

struct StageState {
    stage: Stage,
    queues: [VecDeque<Item>; 3],
    current: Option<InService>,
    capacity: Option<i64>,
    budget: Option<i64>,
    service: ServiceTime,
    service_rng: ChaCha8Rng,
    thinner: Option<Thinner>,
    items_in: u64,
    items_out: u64,
    items_dropped: u64,
    served: u64,
    busy: i64,
    completed: i64,
}

fn class_of(item: &Item) -> usize {
    match item.severity {
        None | Some(Severity::High) => 0,
        Some(Severity::Moderate) => 1,
        Some(Severity::Low) => 2,
    }
}

impl StageState {
    fn new(stage: Stage, config: &PipelineConfig) -> Self {
        let sc = config.stages.get(stage);
        let thin = |p: Fraction, stream: u64| Thinner {
            p,
            mode: config.thinning,
            rng: rng_for(config.seed, THINNING_STREAM_BASE + stream),
            exits: 0,
        };
        let thinner = match stage {
            Stage::Validation => Some(thin(config.acceptance.pi_s, 0)),
            Stage::Impact => Some(thin(config.acceptance.pi_e, 1)),
            _ => None,
        };
        let capacity = sc.weekly_capacity_hours.map(Hours::units);
        Self {
            stage,
            queues: Default::default(),
            current: None,
            capacity,
            budget: capacity.map(|_| 0),
            service: sc.service_hours,
            service_rng: rng_for(config.seed, SERVICE_STREAM_BASE + stage.index() as u64),
            thinner,
            items_in: 0,
            items_out: 0,
            items_dropped: 0,
            served: 0,
            busy: 0,
            completed: 0,
        }
    }

    fn enqueue(&mut self, item: Item) {
        self.items_in += 1;
        self.queues[class_of(&item)].push_back(item);
    }

    fn backlog(&self) -> u64 {
        self.queues.iter().map(|q| q.len() as u64).sum::<u64>() + u64::from(self.current.is_some())
    }

    fn refill(&mut self) {
        self.budget = self.capacity;
    }

    /// Service requirement of the next item started here, in 10^-4 h units.
    ///
    /// Drawn in start order, so the k-th service at a stage needs the same
    /// work whichever item it happens to be.
    fn draw_service(&mut self) -> i64 {
        match self.service {
            ServiceTime::Fixed(h) => h.units(),
            ServiceTime::Range { lo, hi, distribution } => {
                let x = distribution.sample(lo.to_f64(), hi.to_f64(), &mut self.service_rng);
                Hours::from_f64(x)
                    .map(Hours::units)
                    .unwrap_or(lo.units())
                    .clamp(lo.units(), hi.units())
            }
        }
    }

    /// Serves as much as the remaining budget allows; returns items passed downstream.
    fn drain(&mut self, out: &mut Vec<Item>) {
        loop {
            if self.current.is_none() {
                let Some(item) = self.queues.iter_mut().find_map(VecDeque::pop_front) else {
                    break;
                };
                let total = self.draw_service();
                self.current = Some(InService {
                    item,
                    remaining: total,
                    total,
                });
            }
            let job = self.current.as_mut().expect("set above");
            if job.remaining > 0 {
                let spend = match self.budget {
                    Some(b) => b.min(job.remaining),
                    None => job.remaining,
                };
                if spend == 0 {
                    break;
                }
                job.remaining -= spend;
                self.busy += spend;
                if let Some(b) = self.budget.as_mut() {
                    *b -= spend;
                }
                if job.remaining > 0 {
                    break;
                }
            }
            let done = self.current.take().expect("set above");
            self.served += 1;
            self.completed += done.total;
            let passes = self.thinner.as_mut().is_none_or(Thinner::pass);
            if passes {
                self.items_out += 1;
                out.push(done.item);
            } else {
                self.items_dropped += 1;
            }
        }
    }

    fn result(&self, weeks: u32) -> Result<StageResult> {
        let utilization = self.capacity.map(|cap| {
            let available = i128::from(cap) * i128::from(weeks);
            if available == 0 {
                Rational::zero()
            } else {
                Rational::new(i128::from(self.busy), available).expect("positive")
            }
        });
        Ok(StageResult {
            stage: self.stage,
            weekly_capacity_hours: self.capacity.map(Hours::from_units).transpose()?,
            items_in: self.items_in,
            items_out: self.items_out,
            items_dropped: self.items_dropped,
            end_backlog: self.backlog(),
            served: self.served,
            busy_hours: Hours::from_units(self.busy)?,
            completed_service_hours: Hours::from_units(self.completed)?,
            utilization,
            throughput_per_week: Rational::new(i128::from(self.served), i128::from(weeks))?,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum EventKind {
    WeekStart,
    Arrival,
}

#[derive(Clone, Copy, Debug)]
struct Event {
    time: f64,
    kind: EventKind,
    seq: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.kind.cmp(&other.kind))
            .then(self.seq.cmp(&other.seq))
    }
}

fn arrival_times(config: &PipelineConfig) -> Result<Vec<f64>> {
    let horizon = config.horizon_hours();
    let rate = config.arrivals.per_week();
    let mut times = Vec::new();
    if rate == 0.0 {
        return Ok(times);
    }
    match config.arrivals {
        Arrivals::Deterministic { .. } => {
            for k in 0u64.. {
                let t = k as f64 * HOURS_PER_WEEK / rate;
                if t >= horizon {
                    break;
                }
                times.push(t);
            }
        }
        Arrivals::Poisson { .. } => {
            let gap = Exp::new(rate / HOURS_PER_WEEK)
                .map_err(|e| Error::InvalidConfig(format!("arrival rate: {e}")))?;
            let mut rng = rng_for(config.seed, ARRIVAL_STREAM);
            let mut t = gap.sample(&mut rng);
            while t < horizon {
                times.push(t);
                t += gap.sample(&mut rng);
            }
        }
    }
    Ok(times)
}

fn draw_severity(mix: &SeverityMix, rng: &mut ChaCha8Rng) -> Severity {
    let x: f64 = rng.random();
    if x < mix.high.to_f64() {
        Severity::High
    } else if x < mix.high.to_f64() + mix.moderate.to_f64() {
        Severity::Moderate
    } else {
        Severity::Low
    }
}

/// Runs one replication of the pipeline over the configured horizon.
///
/// Weekly capacity budgets refill at each week start and do not carry over;
/// an item that cannot finish keeps its remaining work into the next week.
/// Service consumes budget, not clock time, so a completion happens at the
/// event that funded it.
pub fn simulate(config: &PipelineConfig) -> Result<SimResult> {
    config.validate()?;
    let weeks = config.horizon_weeks;
    let mut events = BinaryHeap::new();
    let mut seq = 0u64;
    for w in 0..weeks {
        events.push(Reverse(Event {
            time: f64::from(w) * HOURS_PER_WEEK,
            kind: EventKind::WeekStart,
            seq,
        }));
        seq += 1;
    }
    let arrivals = arrival_times(config)?;
    for &t in &arrivals {
        events.push(Reverse(Event {
            time: t,
            kind: EventKind::Arrival,
            seq,
        }));
        seq += 1;
    }

    let mut stages: Vec<StageState> = Stage::ALL.iter().map(|&s| StageState::new(s, config)).collect();
    let mut severity_rng = rng_for(config.seed, SEVERITY_STREAM);
    let mut shipped_by_severity = BTreeMap::new();
    let mut first_shipped = None;
    let mut buffer = Vec::new();

    while let Some(Reverse(event)) = events.pop() {
        match event.kind {
            EventKind::WeekStart => stages.iter_mut().for_each(StageState::refill),
            EventKind::Arrival => {
                let severity = match config.queue_discipline {
                    QueueDiscipline::Fifo => None,
                    QueueDiscipline::SeverityPriority(mix) => Some(draw_severity(&mix, &mut severity_rng)),
                };
                stages[0].enqueue(Item { severity });
            }
        }
        for i in 0..stages.len() {
            buffer.clear();
            stages[i].drain(&mut buffer);
            match stages.get_mut(i + 1) {
                Some(next) => buffer.iter().for_each(|item| next.enqueue(*item)),
                None => {
                    if !buffer.is_empty() && first_shipped.is_none() {
                        first_shipped = Some(event.time);
                    }
                    for item in &buffer {
                        if let Some(s) = item.severity {
                            *shipped_by_severity.entry(s).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
    }

    let results = stages
        .iter()
        .map(|s| s.result(weeks))
        .collect::<Result<Vec<_>>>()?;
    let arrivals = arrivals.len() as u64;
    let mut total_cost = CostBreakdown {
        c_g: config.generation_cost_per_candidate.checked_mul_count(arrivals)?,
        ..CostBreakdown::default()
    };
    for r in &results {
        let rate = config.stages.get(r.stage).hourly_rate;
        total_cost.set_component(r.stage, rate.cost_of(r.completed_service_hours)?);
    }
    let total = crate::cost::total_cost(&total_cost)?;
    let triage = &results[Stage::Triage.index()];
    let shipped = triage.items_out;
    let per_hour = (!triage.busy_hours.is_zero())
        .then(|| crate::metrics::fixes_per_maintainer_hour(shipped, triage.busy_hours))
        .transpose()?;

    Ok(SimResult {
        config_digest: config.digest(),
        seed: config.seed,
        horizon_weeks: weeks,
        arrivals,
        accepted: results[Stage::Validation.index()].items_out,
        accepted_fixes_shipped: shipped,
        shipped_by_severity,
        accepted_fixes_per_maintainer_hour: per_hour,
        first_fix_shipped_hours: first_shipped,
        stages: results,
        total_cost,
        total,
    })
}

/// Runs one replication per seed in parallel; results are in `seeds` order.
pub fn simulate_seeds(config: &PipelineConfig, seeds: &[u64]) -> Result<Vec<SimResult>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let mut c = config.clone();
            c.seed = seed;
            simulate(&c)
        })
        .collect()
}
