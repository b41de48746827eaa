//! Per-link budgets, association policies, SINR with an interference
//! decomposition, and a two-user superposition-coding rate kernel.

use rand_chacha::ChaCha8Rng;

use crate::airchannel::{
    expected_channel_gain, los_probability, sample_channel_gain, ChannelMode, EnvParams,
};
use crate::antenna::{bs_tx_gain, uav_rx_gain, LobeTag, UavAntenna};
use crate::error::{Result, SimError};
use crate::scenario::{BsSite, Position3D};

/// Received power of one candidate link together with how it came about.
#[derive(Debug, Clone, Copy)]
pub struct LinkBudget {
    pub bs_index: usize,
    /// Received power in watts.
    pub rx_power: f64,
    /// Lobe of the station pattern that carries the link.
    pub lobe: LobeTag,
    pub p_los: f64,
    /// 3D distance in meters.
    pub distance: f64,
}

/// Rule for picking the serving station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssociationPolicy {
    /// Smallest distance wins.
    Closest,
    /// Largest received power wins.
    Strongest,
}

impl AssociationPolicy {
    pub fn label(&self) -> &'static str {
        match self {
            AssociationPolicy::Closest => "closest",
            AssociationPolicy::Strongest => "strongest",
        }
    }
}

/// Distance notion used by closest association.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosestMetric {
    #[default]
    ThreeDim,
    Horizontal,
}

/// Serving SINR with the interference split by originating lobe.
#[derive(Debug, Clone, Copy)]
pub struct SinrReport {
    pub serving_index: usize,
    /// Linear signal-to-interference-plus-noise ratio.
    pub sinr: f64,
    pub signal: f64,
    pub interference_main: f64,
    pub interference_side: f64,
    pub noise: f64,
}

/// Budget of the link from one station to the UAV.
///
/// Received power is the product of transmit power, the station lobe gain,
/// the UAV receive gain, and the large-scale channel gain — the mixture in
/// `Expected` mode or one Bernoulli realization in `Bernoulli` mode.
pub fn link_budget(
    bs_index: usize,
    site: &BsSite,
    uav_pos: &Position3D,
    uav_ant: &UavAntenna,
    env: &EnvParams,
    mode: ChannelMode,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<LinkBudget> {
    let distance = site.position.distance_3d(uav_pos);
    if distance == 0.0 {
        return Err(SimError::CoincidentEndpoints);
    }
    let (tx_gain, lobe) = bs_tx_gain(&site.antenna, &site.position, uav_pos)?;
    let rx_gain = uav_rx_gain(uav_ant, uav_pos, &site.position)?;
    let r = site.position.horizontal_distance(uav_pos);
    let p_los = los_probability(site.position.h, uav_pos.h, r, env);
    let channel_gain = match mode {
        ChannelMode::Expected => expected_channel_gain(distance, p_los, env)?,
        ChannelMode::Bernoulli => {
            let rng = rng.ok_or(SimError::RngRequired)?;
            sample_channel_gain(distance, p_los, env, rng)?
        }
    };
    Ok(LinkBudget {
        bs_index,
        rx_power: site.tx_power * tx_gain * rx_gain * channel_gain,
        lobe,
        p_los,
        distance,
    })
}

/// Budgets for every station toward the UAV, in station order.
pub fn compute_budgets(
    sites: &[BsSite],
    uav_pos: &Position3D,
    uav_ant: &UavAntenna,
    env: &EnvParams,
    mode: ChannelMode,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<Vec<LinkBudget>> {
    sites
        .iter()
        .enumerate()
        .map(|(i, site)| link_budget(i, site, uav_pos, uav_ant, env, mode, rng.as_deref_mut()))
        .collect()
}

/// Index of the serving station under the given policy.
///
/// Ties break toward the lowest index, so association is deterministic.
pub fn associate(
    policy: AssociationPolicy,
    budgets: &[LinkBudget],
    distances: &[f64],
) -> Result<usize> {
    if budgets.is_empty() {
        return Err(SimError::NoCandidates);
    }
    if distances.len() != budgets.len() {
        return Err(SimError::InvalidConfig(format!(
            "distance list length {} does not match {} budgets",
            distances.len(),
            budgets.len()
        )));
    }
    let mut best = 0;
    for i in 1..budgets.len() {
        let better = match policy {
            AssociationPolicy::Closest => distances[i] < distances[best],
            AssociationPolicy::Strongest => budgets[i].rx_power > budgets[best].rx_power,
        };
        if better {
            best = i;
        }
    }
    Ok(best)
}

/// SINR of the serving link, with non-serving powers summed by lobe.
pub fn sinr(budgets: &[LinkBudget], serving: usize, noise: f64) -> Result<SinrReport> {
    if serving >= budgets.len() {
        return Err(SimError::ServingIndexOutOfRange {
            index: serving,
            len: budgets.len(),
        });
    }
    if !(noise > 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "noise power must be positive, got {noise}"
        )));
    }
    let mut interference_main = 0.0;
    let mut interference_side = 0.0;
    for (i, budget) in budgets.iter().enumerate() {
        if i == serving {
            continue;
        }
        match budget.lobe {
            LobeTag::MainLobe => interference_main += budget.rx_power,
            LobeTag::SideLobe => interference_side += budget.rx_power,
        }
    }
    let signal = budgets[serving].rx_power;
    Ok(SinrReport {
        serving_index: serving,
        sinr: signal / (interference_main + interference_side + noise),
        signal,
        interference_main,
        interference_side,
        noise,
    })
}

/// Spectral efficiencies of a two-user downlink pair sharing one resource
/// via superposition coding.
///
/// `gamma_*` are gain-to-noise ratios (per watt). The strong user decodes
/// and cancels the weak user's signal first; the weak user decodes its own
/// signal treating the strong user's as noise. `beta_weak` is the fraction
/// of `p_total` given to the weak user.
pub fn noma_pair_rates(
    gamma_strong: f64,
    gamma_weak: f64,
    p_total: f64,
    beta_weak: f64,
) -> Result<(f64, f64)> {
    if !(gamma_weak > 0.0 && gamma_strong >= gamma_weak) {
        return Err(SimError::InvalidConfig(format!(
            "gains must satisfy strong >= weak > 0, got strong {gamma_strong} weak {gamma_weak}"
        )));
    }
    if !(0.0..=1.0).contains(&beta_weak) {
        return Err(SimError::InvalidConfig(format!(
            "beta_weak must lie in [0, 1], got {beta_weak}"
        )));
    }
    if !(p_total >= 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "total power must be non-negative, got {p_total}"
        )));
    }
    let p_strong = (1.0 - beta_weak) * p_total;
    let p_weak = beta_weak * p_total;
    let rate_strong = (1.0 + p_strong * gamma_strong).log2();
    let rate_weak = (1.0 + p_weak * gamma_weak / (p_strong * gamma_weak + 1.0)).log2();
    Ok((rate_strong, rate_weak))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::BsAntenna;
    use crate::scenario::{RngStream, ScenarioConfig};
    use proptest::prelude::*;

    fn site_at(x: f64, y: f64, h: f64) -> BsSite {
        BsSite {
            position: Position3D::new(x, y, h),
            tx_power: crate::units::dbw_to_watts(-6.0),
            antenna: BsAntenna::default(),
        }
    }

    #[test]
    fn budget_is_the_product_of_its_factors() {
        // Main-lobe geometry at 100 m range and pure-LOS gain at 100 m
        // distance: 0.2512 W * 10 * 0.895 * 3.388e-8.
        let env = EnvParams {
            // Zero building coverage cannot satisfy validate(), but a tiny
            // one makes every span LOS-certain without changing the gain.
            a: 1e-12,
            ..EnvParams::default()
        };
        let site = site_at(0.0, 0.0, 30.0);
        // Horizontal 99.49 m, vertical 10 m: 3D distance 100 m, main lobe.
        let r = (100.0f64 * 100.0 - 100.0).sqrt();
        let uav = Position3D::new(r, 0.0, 40.0);
        let budget = link_budget(
            0,
            &site,
            &uav,
            &UavAntenna::omni(),
            &env,
            ChannelMode::Expected,
            None,
        )
        .unwrap();
        assert_eq!(budget.lobe, LobeTag::MainLobe);
        assert_eq!(budget.p_los, 1.0);
        assert!((budget.distance - 100.0).abs() < 1e-9);
        assert!(
            (budget.rx_power - 7.61e-8).abs() / 7.61e-8 < 1e-2,
            "rx {}",
            budget.rx_power
        );
    }

    #[test]
    fn zero_receive_gain_zeroes_the_budget() {
        let env = EnvParams::default();
        let site = site_at(500.0, 0.0, 30.0);
        let uav = Position3D::new(0.0, 0.0, 100.0);
        // Narrow cone pointing down, station far outside it, zero back gain.
        let ant = UavAntenna::directional_down(30.0, 0.0);
        let budget =
            link_budget(0, &site, &uav, &ant, &env, ChannelMode::Expected, None).unwrap();
        assert_eq!(budget.rx_power, 0.0);
    }

    #[test]
    fn bernoulli_with_certain_los_equals_expected() {
        let env = EnvParams::default();
        let site = site_at(10.0, 0.0, 30.0); // r = 10 m: LOS probability 1
        let uav = Position3D::new(0.0, 0.0, 100.0);
        let expected = link_budget(
            0,
            &site,
            &uav,
            &UavAntenna::omni(),
            &env,
            ChannelMode::Expected,
            None,
        )
        .unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        let sampled = link_budget(
            0,
            &site,
            &uav,
            &UavAntenna::omni(),
            &env,
            ChannelMode::Bernoulli,
            Some(&mut rng),
        )
        .unwrap();
        assert_eq!(expected.p_los, 1.0);
        assert_eq!(expected.rx_power, sampled.rx_power);
    }

    #[test]
    fn bernoulli_without_rng_is_rejected() {
        let env = EnvParams::default();
        let site = site_at(10.0, 0.0, 30.0);
        let uav = Position3D::new(0.0, 0.0, 100.0);
        assert!(matches!(
            link_budget(
                0,
                &site,
                &uav,
                &UavAntenna::omni(),
                &env,
                ChannelMode::Bernoulli,
                None
            ),
            Err(SimError::RngRequired)
        ));
    }

    #[test]
    fn single_candidate_wins_under_both_policies() {
        let env = EnvParams::default();
        let sites = vec![site_at(100.0, 0.0, 30.0)];
        let uav = Position3D::new(0.0, 0.0, 100.0);
        let budgets = compute_budgets(
            &sites,
            &uav,
            &UavAntenna::omni(),
            &env,
            ChannelMode::Expected,
            None,
        )
        .unwrap();
        let distances: Vec<f64> = budgets.iter().map(|b| b.distance).collect();
        assert_eq!(associate(AssociationPolicy::Closest, &budgets, &distances).unwrap(), 0);
        assert_eq!(
            associate(AssociationPolicy::Strongest, &budgets, &distances).unwrap(),
            0
        );
    }

    #[test]
    fn policies_disagree_when_a_distant_main_lobe_wins() {
        // A nearby station serving through its side lobe against a distant
        // one whose main lobe covers the UAV: strongest association must
        // pick the distant station exactly when its received power is
        // larger, while closest sticks with the nearby one.
        let env = EnvParams::default();
        let sites = vec![site_at(150.0, 0.0, 30.0), site_at(400.0, 0.0, 30.0)];
        let uav = Position3D::new(0.0, 0.0, 70.0);
        let budgets = compute_budgets(
            &sites,
            &uav,
            &UavAntenna::omni(),
            &env,
            ChannelMode::Expected,
            None,
        )
        .unwrap();
        assert_eq!(budgets[0].lobe, LobeTag::SideLobe);
        assert_eq!(budgets[1].lobe, LobeTag::MainLobe);
        assert!(
            budgets[1].rx_power > budgets[0].rx_power,
            "main-lobe power {} should beat side-lobe power {}",
            budgets[1].rx_power,
            budgets[0].rx_power
        );
        let distances: Vec<f64> = budgets.iter().map(|b| b.distance).collect();
        assert_eq!(associate(AssociationPolicy::Closest, &budgets, &distances).unwrap(), 0);
        assert_eq!(
            associate(AssociationPolicy::Strongest, &budgets, &distances).unwrap(),
            1
        );
    }

    #[test]
    fn ties_break_to_the_lowest_index() {
        let budget = LinkBudget {
            bs_index: 0,
            rx_power: 1e-9,
            lobe: LobeTag::SideLobe,
            p_los: 1.0,
            distance: 100.0,
        };
        let budgets = vec![budget, budget, budget];
        let distances = vec![100.0, 100.0, 100.0];
        assert_eq!(associate(AssociationPolicy::Closest, &budgets, &distances).unwrap(), 0);
        assert_eq!(
            associate(AssociationPolicy::Strongest, &budgets, &distances).unwrap(),
            0
        );
    }

    #[test]
    fn empty_budget_list_is_rejected() {
        assert!(matches!(
            associate(AssociationPolicy::Closest, &[], &[]),
            Err(SimError::NoCandidates)
        ));
    }

    #[test]
    fn unit_sinr_when_signal_equals_noise() {
        let budgets = vec![LinkBudget {
            bs_index: 0,
            rx_power: 4e-15,
            lobe: LobeTag::MainLobe,
            p_los: 1.0,
            distance: 100.0,
        }];
        let report = sinr(&budgets, 0, 4e-15).unwrap();
        assert_eq!(report.sinr, 1.0);
        assert_eq!(report.interference_main, 0.0);
        assert_eq!(report.interference_side, 0.0);
    }

    #[test]
    fn duplicate_interferer_halves_the_sinr() {
        let serving = LinkBudget {
            bs_index: 0,
            rx_power: 1e-9,
            lobe: LobeTag::MainLobe,
            p_los: 1.0,
            distance: 100.0,
        };
        let interferer = LinkBudget {
            bs_index: 1,
            rx_power: 2e-10,
            lobe: LobeTag::SideLobe,
            p_los: 1.0,
            distance: 300.0,
        };
        let noise = 1e-20; // negligible against the interference
        let one = sinr(&[serving, interferer], 0, noise).unwrap();
        let two = sinr(&[serving, interferer, interferer], 0, noise).unwrap();
        assert!((one.sinr / two.sinr - 2.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_range_serving_index_is_rejected() {
        let budgets = vec![LinkBudget {
            bs_index: 0,
            rx_power: 1e-9,
            lobe: LobeTag::MainLobe,
            p_los: 1.0,
            distance: 100.0,
        }];
        assert!(matches!(
            sinr(&budgets, 3, 1e-15),
            Err(SimError::ServingIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sinr_matches_summation_oracle_on_a_random_drop() {
        // Recompute every term from scratch over one ten-station drop and
        // compare against the composed pipeline.
        let cfg = ScenarioConfig::default();
        let sites = cfg.bs_sites(RngStream::new(42, 0)).unwrap();
        let uav = cfg.uav_position(100.0);
        let budgets = compute_budgets(
            &sites,
            &uav,
            &cfg.uav_antenna,
            &cfg.env,
            ChannelMode::Expected,
            None,
        )
        .unwrap();
        let distances: Vec<f64> = budgets.iter().map(|b| b.distance).collect();
        let serving = associate(AssociationPolicy::Strongest, &budgets, &distances).unwrap();
        let report = sinr(&budgets, serving, cfg.noise_power).unwrap();

        let mut oracle_total = 0.0;
        let mut oracle_signal = 0.0;
        for (i, site) in sites.iter().enumerate() {
            let dx = site.position.x - uav.x;
            let dy = site.position.y - uav.y;
            let dh = site.position.h - uav.h;
            let r = (dx * dx + dy * dy).sqrt();
            let d = (dx * dx + dy * dy + dh * dh).sqrt();
            let m = (r * (cfg.env.a * cfg.env.b).sqrt() / 1000.0 - 1.0).floor() as i64;
            let mut p_los = 1.0;
            for n in 0..=m {
                let hn = site.position.h
                    - (n as f64 + 0.5) * (site.position.h - uav.h) / (m + 1) as f64;
                p_los *= 1.0 - (-(hn * hn) / (2.0 * cfg.env.c * cfg.env.c)).exp();
            }
            let (lower, upper) = crate::antenna::main_lobe_height_window(
                &cfg.bs_antenna,
                site.position.h,
                r,
            );
            let g_t = if uav.h > lower && uav.h < upper {
                cfg.bs_antenna.main_gain
            } else {
                cfg.bs_antenna.side_gain
            };
            let g_c = p_los * cfg.env.gain_los * d.powf(-cfg.env.alpha_los)
                + (1.0 - p_los) * cfg.env.gain_nlos * d.powf(-cfg.env.alpha_nlos);
            let p_rx = cfg.bs_tx_power * g_t * (29_000.0 / (180.0 * 180.0)) * g_c;
            oracle_total += p_rx;
            if i == serving {
                oracle_signal = p_rx;
            }
        }
        let oracle_sinr = oracle_signal / (oracle_total - oracle_signal + cfg.noise_power);
        assert!(
            (report.sinr - oracle_sinr).abs() / oracle_sinr < 1e-12,
            "pipeline {} oracle {}",
            report.sinr,
            oracle_sinr
        );
    }

    #[test]
    fn noma_rates_hand_cases() {
        let (rs, rw) = noma_pair_rates(1.0, 1.0, 1.0, 0.5).unwrap();
        assert!((rs - 1.5f64.log2()).abs() < 1e-12);
        assert!((rw - (4.0f64 / 3.0).log2()).abs() < 1e-12);

        let (rs, rw) = noma_pair_rates(2.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(rs, 0.0);
        assert!((rw - 2f64.log2()).abs() < 1e-12);

        let (rs, rw) = noma_pair_rates(2.0, 1.0, 1.0, 0.0).unwrap();
        assert!((rs - 3f64.log2()).abs() < 1e-12);
        assert_eq!(rw, 0.0);
    }

    #[test]
    fn noma_rejects_unsorted_gains() {
        assert!(noma_pair_rates(1.0, 2.0, 1.0, 0.5).is_err());
        assert!(noma_pair_rates(1.0, 0.0, 1.0, 0.5).is_err());
        assert!(noma_pair_rates(2.0, 1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn noma_rates_move_monotonically_with_beta() {
        let mut prev = noma_pair_rates(3.0, 0.5, 2.0, 0.0).unwrap();
        for i in 1..=100 {
            let beta = i as f64 / 100.0;
            let cur = noma_pair_rates(3.0, 0.5, 2.0, beta).unwrap();
            assert!(cur.0 <= prev.0 + 1e-12, "strong rate rose at beta {beta}");
            assert!(cur.1 + 1e-12 >= prev.1, "weak rate fell at beta {beta}");
            prev = cur;
        }
    }

    proptest! {
        #[test]
        fn strongest_choice_dominates_every_budget(
            powers in proptest::collection::vec(1e-15f64..1e-6, 1..20),
        ) {
            let budgets: Vec<LinkBudget> = powers
                .iter()
                .enumerate()
                .map(|(i, &p)| LinkBudget {
                    bs_index: i,
                    rx_power: p,
                    lobe: LobeTag::SideLobe,
                    p_los: 1.0,
                    distance: 100.0 + i as f64,
                })
                .collect();
            let distances: Vec<f64> = budgets.iter().map(|b| b.distance).collect();
            let chosen = associate(AssociationPolicy::Strongest, &budgets, &distances).unwrap();
            prop_assert!(budgets.iter().all(|b| budgets[chosen].rx_power >= b.rx_power));
        }

        #[test]
        fn sinr_is_scale_invariant(
            powers in proptest::collection::vec(1e-15f64..1e-6, 2..12),
            noise in 1e-18f64..1e-9,
            scale in 1e-3f64..1e3,
        ) {
            let budgets: Vec<LinkBudget> = powers
                .iter()
                .enumerate()
                .map(|(i, &p)| LinkBudget {
                    bs_index: i,
                    rx_power: p,
                    lobe: if i % 2 == 0 { LobeTag::MainLobe } else { LobeTag::SideLobe },
                    p_los: 1.0,
                    distance: 100.0,
                })
                .collect();
            let scaled: Vec<LinkBudget> = budgets
                .iter()
                .map(|b| LinkBudget { rx_power: b.rx_power * scale, ..*b })
                .collect();
            let base = sinr(&budgets, 0, noise).unwrap();
            let alt = sinr(&scaled, 0, noise * scale).unwrap();
            prop_assert!((base.sinr - alt.sinr).abs() / base.sinr < 1e-12);
        }

        #[test]
        fn interference_split_sums_to_the_total(
            powers in proptest::collection::vec(1e-15f64..1e-6, 2..12),
        ) {
            let budgets: Vec<LinkBudget> = powers
                .iter()
                .enumerate()
                .map(|(i, &p)| LinkBudget {
                    bs_index: i,
                    rx_power: p,
                    lobe: if i % 3 == 0 { LobeTag::MainLobe } else { LobeTag::SideLobe },
                    p_los: 1.0,
                    distance: 100.0,
                })
                .collect();
            let report = sinr(&budgets, 0, 1e-15).unwrap();
            let total: f64 = powers[1..].iter().sum();
            let split = report.interference_main + report.interference_side;
            prop_assert!((split - total).abs() <= 1e-12 * total.max(1e-300));
        }
    }
}
