use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use super::engine::{simulate, SimResult};
use crate::error::{Error, Result};
use crate::model::{Hours, Rational, Stage};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StageRank {
    pub stage: Stage,
    /// End-of-horizon backlog per week.
    pub backlog_growth_per_week: Rational,
    pub utilization: Rational,
    pub is_bottleneck: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BottleneckReport {
    /// Capacity-bounded stages, most constraining first.
    pub ranking: Vec<StageRank>,
    pub bottleneck: Option<Stage>,
    /// Extra shipped fixes per week from one more capacity hour per week at the bottleneck.
    pub marginal_fixes_per_week: Option<Rational>,
}

/// Ranks bounded stages by backlog growth, then utilization, then pipeline order.
///
/// A stage is only flagged when its backlog actually grew: a saturated stage
/// that kept up is not what limits throughput.
pub fn bottleneck_report(result: &SimResult, config: &PipelineConfig) -> Result<BottleneckReport> {
    if result.config_digest != config.digest() {
        return Err(Error::MismatchedResult);
    }
    let weeks = i128::from(config.horizon_weeks);
    let mut ranking: Vec<StageRank> = result
        .stages
        .iter()
        .filter_map(|s| {
            s.utilization.map(|u| StageRank {
                stage: s.stage,
                backlog_growth_per_week: Rational::new(i128::from(s.end_backlog), weeks)
                    .expect("positive horizon"),
                utilization: u,
                is_bottleneck: false,
            })
        })
        .collect();
    ranking.sort_by(|a, b| {
        b.backlog_growth_per_week
            .cmp(&a.backlog_growth_per_week)
            .then(b.utilization.cmp(&a.utilization))
            .then(a.stage.index().cmp(&b.stage.index()))
    });
    let bottleneck = ranking
        .first_mut()
        .filter(|r| r.backlog_growth_per_week.is_positive())
        .map(|r| {
            r.is_bottleneck = true;
            r.stage
        });
    let marginal_fixes_per_week = match bottleneck {
        Some(stage) => {
            let mut more = config.clone();
            let sc = more.stages.get_mut(stage);
            let cap = sc.weekly_capacity_hours.expect("ranked stages are bounded");
            sc.weekly_capacity_hours = Some(cap.checked_add(Hours::whole(1))?);
            let rerun = simulate(&more)?;
            let delta = i128::from(rerun.accepted_fixes_shipped) - i128::from(result.accepted_fixes_shipped);
            Some(Rational::new(delta, weeks)?)
        }
        None => None,
    };
    Ok(BottleneckReport {
        ranking,
        bottleneck,
        marginal_fixes_per_week,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Arrivals, StageConfig};

    #[test]
    fn validation_is_the_bottleneck() {
        let mut c = PipelineConfig::new(10, Arrivals::Deterministic { per_week: 10.0 });
        c.stages.validation = StageConfig::new(Hours::whole(1), Some(Hours::whole(5)));
        let r = simulate(&c).unwrap();
        let b = bottleneck_report(&r, &c).unwrap();
        assert_eq!(b.bottleneck, Some(Stage::Validation));
        assert_eq!(b.ranking[0].backlog_growth_per_week, Rational::from_integer(5));
        assert_eq!(b.marginal_fixes_per_week, Some(Rational::one()));
    }

    #[test]
    fn unbounded_pipeline_has_no_ranking() {
        let c = PipelineConfig::new(3, Arrivals::Deterministic { per_week: 4.0 });
        let b = bottleneck_report(&simulate(&c).unwrap(), &c).unwrap();
        assert!(b.ranking.is_empty());
        assert_eq!(b.bottleneck, None);
    }

    #[test]
    fn ties_follow_pipeline_order() {
        let mut c = PipelineConfig::new(3, Arrivals::Deterministic { per_week: 0.0 });
        c.stages.triage = StageConfig::new(Hours::whole(1), Some(Hours::whole(2)));
        c.stages.impact = StageConfig::new(Hours::whole(1), Some(Hours::whole(2)));
        let b = bottleneck_report(&simulate(&c).unwrap(), &c).unwrap();
        let order: Vec<_> = b.ranking.iter().map(|r| r.stage).collect();
        assert_eq!(order, vec![Stage::Impact, Stage::Triage]);
        assert_eq!(b.bottleneck, None);
    }

    #[test]
    fn mismatched_pair_rejected() {
        let c = PipelineConfig::new(3, Arrivals::Deterministic { per_week: 4.0 });
        let r = simulate(&c).unwrap();
        let mut other = c.clone();
        other.seed = 9;
        assert!(matches!(
            bottleneck_report(&r, &other),
            Err(Error::MismatchedResult)
        ));
    }
}
