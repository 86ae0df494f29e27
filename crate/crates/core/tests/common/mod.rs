#![allow(dead_code)]

use std::collections::BTreeMap;

use bugonomics::lint::{
    Artifact, ArtifactFlag, BoundKind, CampaignReport, ContextValue, Count, CountRange, Expenditure,
    GroundingEvidence, ImpactStatus, MoneyRange, OwnershipModel, PatchStatus, ReviewPackage, SeveritySplit,
};
use bugonomics::model::{Fraction, HourlyRate, Hours, Money};
use bugonomics::sim::{
    Acceptance, Arrivals, PipelineConfig, QueueDiscipline, ServiceTime, SeverityMix, StageConfig,
    StageConfigs, Thinning,
};
use proptest::prelude::*;
use proptest::sample::select;

pub fn money(max_micros: i64) -> impl Strategy<Value = Money> {
    (0..=max_micros).prop_map(|m| Money::from_micros(m).unwrap())
}

pub fn hours(max_units: i64) -> impl Strategy<Value = Hours> {
    (0..=max_units).prop_map(|u| Hours::from_units(u).unwrap())
}

pub fn rate() -> impl Strategy<Value = HourlyRate> {
    (0..=50_000i64).prop_map(|cents| HourlyRate::new(Money::from_micros(cents * 10_000).unwrap()).unwrap())
}

/// A fraction in (0, 1].
pub fn proportion(max_den: u64) -> impl Strategy<Value = Fraction> {
    (1..=max_den)
        .prop_flat_map(|d| (1..=d, Just(d)))
        .prop_map(|(n, d)| Fraction::new(n, d).unwrap())
}

fn maybe_range(n: u64, widen: u64) -> Count {
    if widen == 0 {
        Count::Exact(n)
    } else {
        Count::Range(CountRange::new(n, n + widen).unwrap())
    }
}

/// A complete report: every reporting field present, counts consistent.
pub fn complete_report() -> CampaignReport {
    let mut r = CampaignReport::new("complete");
    r.raw_candidates = Some(Count::Exact(400));
    r.deduplicated_candidates = Some(Count::Exact(250));
    r.submitted_reports = Some(Count::Exact(112));
    r.accepted_findings = Some(Count::Exact(22));
    r.severity = Some(SeveritySplit {
        high: Some(14),
        moderate: Some(6),
        low: Some(2),
        exhaustive: true,
    });
    r.impact_status = Some(ImpactStatus {
        exploitable: 2,
        assessed: Some(10),
    });
    r.grounding_evidence = Some(GroundingEvidence {
        reproducer: true,
        trace: true,
        ..Default::default()
    });
    r.validation_hours = Some("140".parse().unwrap());
    r.impact_hours = Some("60.5".parse().unwrap());
    r.maintainer_review_hours = Some("33".parse().unwrap());
    r.patch_status = Some(PatchStatus {
        patched: 20,
        tested: 18,
        pending: 2,
    });
    r.time_to_first_useful_finding = Some("20".parse().unwrap());
    r.run_count = Some(Count::Exact(1000));
    r.failed_run_cost = Some("1200".parse().unwrap());
    r.scaffold_effort_hours = Some("80".parse().unwrap());
    r.total_expenditure = Some(Expenditure::Exact("20000".parse().unwrap()));
    r
}

/// Reports that pass lint without fatal findings, with every optional field
/// independently present or absent.
pub fn conformant_report() -> impl Strategy<Value = CampaignReport> {
    let funnel = (0..500u64, 0..300u64, 0..300u64, 0..300u64, 0..20u64, 0..5u64);
    let present = proptest::collection::vec(any::<bool>(), 20);
    let amounts = (
        money(50_000_000_000),
        money(50_000_000_000),
        hours(100_000_000),
        hours(100_000_000),
        hours(100_000_000),
        hours(100_000_000),
        rate(),
        select(vec![
            None,
            Some(BoundKind::UpperBound),
            Some(BoundKind::LowerBound),
            Some(BoundKind::Estimate),
        ]),
    );
    let splits = (any::<u64>(), any::<u64>(), any::<u64>(), any::<u64>());
    let extras = (
        proptest::collection::btree_map(
            "[a-z]{1,8}",
            prop_oneof![
                any::<u64>().prop_map(ContextValue::Count),
                "[ -~]{0,12}".prop_map(ContextValue::Text),
            ],
            0..3,
        ),
        proptest::collection::btree_map(
            "x_[a-z]{1,6}",
            prop_oneof![
                any::<i64>().prop_map(serde_json::Value::from),
                "[ -~]{0,12}".prop_map(serde_json::Value::from),
                any::<bool>().prop_map(serde_json::Value::from),
            ],
            0..3,
        ),
        "[a-z0-9_]{1,16}",
        proptest::option::of("[ -~]{0,30}"),
    );
    (funnel, present, amounts, splits, extras).prop_map(
        |((accepted, d1, d2, d3, widen, gap), p, amounts, split, extras)| {
            let (m1, m2, h1, h2, h3, h4, labor, bound) = amounts;
            let (context, extra, id, description) = extras;
            let submitted = accepted + d1;
            let dedup = submitted + widen + d2;
            let raw = dedup + d3;
            let mut r = CampaignReport::new(id);
            r.description = description;
            let mut flag = p.into_iter();
            let mut on = || flag.next().unwrap();
            if on() {
                r.raw_candidates = Some(Count::Exact(raw));
            }
            if on() {
                r.deduplicated_candidates = Some(Count::Exact(dedup));
            }
            if on() {
                r.submitted_reports = Some(maybe_range(submitted, widen));
            }
            if on() {
                r.accepted_findings = Some(maybe_range(accepted.saturating_sub(gap), gap.min(accepted)));
            }
            if on() && submitted > 0 {
                r.declared_precision = Some(Fraction::new(accepted, submitted).unwrap());
            }
            if on() && accepted > 0 {
                let high = split.0 % (accepted + 1);
                let moderate = split.1 % (accepted - high + 1);
                let low = split.2 % (accepted - high - moderate + 1);
                r.severity = Some(SeveritySplit {
                    high: Some(high),
                    moderate: (split.3 & 1 == 0).then_some(moderate),
                    low: Some(low),
                    exhaustive: false,
                });
            }
            if on() {
                let exploitable = split.1 % (accepted + 1);
                r.impact_status = Some(ImpactStatus {
                    exploitable,
                    assessed: (split.3 & 2 == 0)
                        .then_some(exploitable + split.2 % (accepted - exploitable + 1)),
                });
            }
            if on() {
                r.grounding_evidence = Some(GroundingEvidence {
                    reproducer: split.0 & 1 == 0,
                    trace: split.0 & 2 == 0,
                    path_constraints: split.0 & 4 == 0,
                    attacker_control: split.0 & 8 == 0,
                    affected_configs: split.0 & 16 == 0,
                });
            }
            if on() {
                r.validation_hours = Some(h1);
            }
            if on() {
                r.impact_hours = Some(h2);
            }
            if on() {
                r.remediation_hours = Some(h3);
            }
            if on() {
                r.maintainer_review_hours = Some(h4);
            }
            if on() {
                r.labor_rate = Some(labor);
            }
            if on() {
                r.patch_status = Some(PatchStatus {
                    patched: split.0 % (accepted + 1),
                    tested: split.1 % (accepted + 1),
                    pending: split.2 % (accepted + 1),
                });
            }
            if on() {
                r.time_to_first_useful_finding = Some(h1);
            }
            if on() {
                r.run_count = Some(maybe_range(raw, widen));
            }
            if on() {
                r.failed_run_cost = Some(m1);
            }
            if on() {
                r.scaffold_effort_hours = Some(h2);
            }
            if on() {
                r.total_expenditure = Some(if split.3 & 4 == 0 {
                    Expenditure::Exact(m1)
                } else {
                    Expenditure::Range(MoneyRange {
                        lo: m1.min(m2),
                        hi: m1.max(m2),
                        reported_as: bound,
                    })
                });
            }
            r.context = context;
            r.extra = extra;
            r
        },
    )
}

fn stage_config(fixed_only: bool) -> impl Strategy<Value = StageConfig> {
    let service = if fixed_only {
        (1..=80_000i64)
            .prop_map(|u| ServiceTime::Fixed(Hours::from_units(u).unwrap()))
            .boxed()
    } else {
        prop_oneof![
            (0..=80_000i64).prop_map(|u| ServiceTime::Fixed(Hours::from_units(u).unwrap())),
            (1..=40_000i64, 0..=40_000i64).prop_map(|(lo, w)| ServiceTime::Range {
                lo: Hours::from_units(lo).unwrap(),
                hi: Hours::from_units(lo + w).unwrap(),
                distribution: Default::default(),
            }),
        ]
        .boxed()
    };
    (service, proptest::option::of(0..=800_000i64), rate()).prop_map(|(service_hours, cap, hourly_rate)| {
        StageConfig {
            service_hours,
            weekly_capacity_hours: cap.map(|u| Hours::from_units(u).unwrap()),
            hourly_rate,
        }
    })
}

fn fraction_or_one() -> impl Strategy<Value = Fraction> {
    prop_oneof![Just(Fraction::one()), proportion(20), Just(Fraction::zero())]
}

/// Small pipelines: up to six weeks, up to 40 arrivals a week.
pub fn pipeline_config(fixed_only: bool) -> impl Strategy<Value = PipelineConfig> {
    let stages = (
        stage_config(fixed_only),
        stage_config(fixed_only),
        stage_config(fixed_only),
        stage_config(fixed_only),
    );
    let discipline = prop_oneof![
        Just(QueueDiscipline::Fifo),
        (1..5u64, 0..5u64, 0..5u64).prop_map(|(h, m, l)| {
            let d = h + m + l;
            QueueDiscipline::SeverityPriority(SeverityMix {
                high: Fraction::new(h, d).unwrap(),
                moderate: Fraction::new(m, d).unwrap(),
                low: Fraction::new(l, d).unwrap(),
            })
        }),
    ];
    (
        1..=6u32,
        any::<bool>(),
        0.0..40.0f64,
        any::<u64>(),
        stages,
        (fraction_or_one(), fraction_or_one()),
        select(vec![Thinning::Bernoulli, Thinning::Deterministic]),
        discipline,
        money(100_000_000),
    )
        .prop_map(
            |(
                weeks,
                poisson,
                per_week,
                seed,
                (v, i, r, t),
                (pi_s, pi_e),
                thinning,
                queue_discipline,
                gen,
            )| {
                let arrivals = if poisson {
                    Arrivals::Poisson { per_week }
                } else {
                    Arrivals::Deterministic { per_week }
                };
                PipelineConfig {
                    horizon_weeks: weeks,
                    arrivals,
                    seed,
                    stages: StageConfigs {
                        validation: v,
                        impact: i,
                        remediation: r,
                        triage: t,
                    },
                    acceptance: Acceptance { pi_s, pi_e },
                    thinning,
                    queue_discipline,
                    generation_cost_per_candidate: gen,
                }
            },
        )
}

/// A pipeline and a copy with more weekly capacity at one stage.
pub fn capacity_pair() -> impl Strategy<Value = (PipelineConfig, PipelineConfig)> {
    (pipeline_config(false), 0..4usize, 1..=400_000i64, any::<bool>()).prop_map(
        |(base, idx, extra, unbound)| {
            let mut more = base.clone();
            let stage = bugonomics::model::Stage::ALL[idx];
            let cfg = more.stages.get_mut(stage);
            cfg.weekly_capacity_hours = match (cfg.weekly_capacity_hours, unbound) {
                (_, true) | (None, _) => None,
                (Some(c), false) => Some(Hours::from_units(c.units() + extra).unwrap()),
            };
            (base, more)
        },
    )
}

pub fn review_package() -> impl Strategy<Value = ReviewPackage> {
    (
        select(OwnershipModel::ALL.to_vec()),
        proptest::collection::vec((any::<bool>(), proptest::option::of("[a-z/._-]{1,12}")), 16),
    )
        .prop_map(|(model, flags)| {
            let artifacts: BTreeMap<Artifact, ArtifactFlag> = Artifact::ALL
                .iter()
                .zip(flags)
                .filter_map(|(a, (present, evidence))| {
                    (present || evidence.is_some()).then_some((*a, ArtifactFlag { present, evidence }))
                })
                .collect();
            ReviewPackage {
                ownership_model: model,
                artifacts,
            }
        })
}
