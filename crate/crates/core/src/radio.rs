//! Path loss, received power, SINR, and the concurrent-transmission
//! feasibility test.
//!
//! All SINR arithmetic is in linear units (mW, Hz); dB enters only through
//! [`db_to_linear`] at configuration boundaries. Every operation here is a
//! pure function of its inputs, and a [`RadioModel`] is immutable after
//! construction, so models are freely shared across concurrent runs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::network::{adjacent, Link, NodeId, Topology};

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * libm::log10(lin)
}

/// How the beam indicator f resolves for a pair of active links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamPolicy {
    /// Non-adjacent link pairs never interfere (the evaluation assumption:
    /// nonadjacent links are able to be scheduled for concurrent
    /// transmissions). Makes the pairing feasibility test constant-true on
    /// non-adjacent sets.
    AdjacencyOnly,
    /// Ideal flat-top sector antenna of the given beamwidth at every node;
    /// interference flows iff both endpoints' beams cover the line of sight.
    SectorBeam { beamwidth_rad: f64 },
}

/// Minimum-SINR table: ascending `(min_sinr_linear, rate_pkts_per_slot)`
/// rows; MS(c) is the inverse lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    rows: Vec<(f64, u32)>,
}

impl RateTable {
    /// Rows must be strictly increasing in both threshold and rate.
    pub fn new(rows: Vec<(f64, u32)>) -> Result<Self, RadioError> {
        if rows.is_empty() {
            return Err(RadioError::BadModel("rate table is empty".into()));
        }
        for w in rows.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(RadioError::BadModel(
                    "rate table must be strictly increasing".into(),
                ));
            }
        }
        Ok(RateTable { rows })
    }

    /// Thresholds 6 dB apart starting at 10 dB for the given ascending rates.
    pub fn spaced_6db(rates: &[u32]) -> Result<Self, RadioError> {
        let rows = rates
            .iter()
            .enumerate()
            .map(|(i, &r)| (db_to_linear(10.0 + 6.0 * i as f64), r))
            .collect();
        RateTable::new(rows)
    }

    /// Default table for the 4-rate alphabet {1,2,3,4} packets/slot.
    pub fn default_four() -> Self {
        RateTable::spaced_6db(&[1, 2, 3, 4]).unwrap()
    }

    /// MS(c): the minimum linear SINR supporting rate `c`.
    pub fn min_sinr(&self, rate: u32) -> Result<f64, RadioError> {
        self.rows
            .iter()
            .find(|&&(_, r)| r == rate)
            .map(|&(s, _)| s)
            .ok_or(RadioError::RateNotInTable { rate })
    }

    pub fn rows(&self) -> &[(f64, u32)] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadioError {
    BadModel(String),
    /// Co-located nodes or otherwise non-positive distance.
    NonPositiveDistance,
    /// MS(c) lookup failed: a scheduled link carries a rate with no row.
    RateNotInTable { rate: u32 },
}

impl fmt::Display for RadioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadioError::BadModel(msg) => write!(f, "bad radio model: {msg}"),
            RadioError::NonPositiveDistance => write!(f, "distance must be positive"),
            RadioError::RateNotInTable { rate } => {
                write!(f, "rate {rate} has no entry in the rate table")
            }
        }
    }
}

/// Radio-layer constants: transmit power, reference path loss, path loss
/// exponent, MUI factor, bandwidth, noise density, the MS(c) table, and the
/// beam-indicator policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RadioModel {
    pub tx_power_mw: f64,
    /// PL(d0) in dB at d0 = 1 m; the scaling factor is k0 = 10^(PL(d0)/10).
    pub ref_loss_db: f64,
    pub path_loss_exp: f64,
    pub mui_factor: f64,
    pub bandwidth_hz: f64,
    pub noise_psd_mw_per_hz: f64,
    pub rate_table: RateTable,
    pub beam_policy: BeamPolicy,
}

impl RadioModel {
    pub fn new(
        tx_power_mw: f64,
        ref_loss_db: f64,
        path_loss_exp: f64,
        mui_factor: f64,
        bandwidth_hz: f64,
        noise_psd_mw_per_hz: f64,
        rate_table: RateTable,
        beam_policy: BeamPolicy,
    ) -> Result<Self, RadioError> {
        if tx_power_mw <= 0.0 {
            return Err(RadioError::BadModel("tx power must be > 0".into()));
        }
        if path_loss_exp <= 0.0 {
            return Err(RadioError::BadModel("path loss exponent must be > 0".into()));
        }
        if bandwidth_hz <= 0.0 {
            return Err(RadioError::BadModel("bandwidth must be > 0".into()));
        }
        if noise_psd_mw_per_hz <= 0.0 {
            return Err(RadioError::BadModel("noise density must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&mui_factor) {
            return Err(RadioError::BadModel("MUI factor must be in [0,1]".into()));
        }
        Ok(RadioModel {
            tx_power_mw,
            ref_loss_db,
            path_loss_exp,
            mui_factor,
            bandwidth_hz,
            noise_psd_mw_per_hz,
            rate_table,
            beam_policy,
        })
    }

    /// 60 GHz LOS defaults: 10 mW transmit power, −68 dB reference loss at
    /// 1 m, exponent 2, MUI factor 1, 2.16 GHz channel, −174 dBm/Hz noise.
    pub fn default_60ghz(rate_table: RateTable, beam_policy: BeamPolicy) -> Self {
        RadioModel::new(
            10.0,
            -68.0,
            2.0,
            1.0,
            2.16e9,
            db_to_linear(-174.0),
            rate_table,
            beam_policy,
        )
        .unwrap()
    }

    pub fn k0(&self) -> f64 {
        db_to_linear(self.ref_loss_db)
    }

    pub fn noise_mw(&self) -> f64 {
        self.bandwidth_hz * self.noise_psd_mw_per_hz
    }
}

/// Received power k0 · P_t · d^(−γ) in mW.
pub fn received_power(model: &RadioModel, dist_m: f64) -> Result<f64, RadioError> {
    if dist_m <= 0.0 {
        return Err(RadioError::NonPositiveDistance);
    }
    Ok(model.k0() * model.tx_power_mw * libm::pow(dist_m, -model.path_loss_exp))
}

/// Per-node active beam directions for one pairing. A node in any pairing
/// has exactly one active beam; idle nodes are absent and contribute no
/// interference.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamState {
    dirs: BTreeMap<NodeId, (f64, f64)>,
}

impl BeamState {
    pub fn empty() -> Self {
        BeamState {
            dirs: BTreeMap::new(),
        }
    }

    /// Beams for a pairing: each sender aims at its receiver and vice versa.
    pub fn for_pairing(topology: &Topology, links: &[Link]) -> Self {
        let mut dirs = BTreeMap::new();
        for l in links {
            let s = topology.position(l.src);
            let r = topology.position(l.dst);
            let d = s.distance(&r);
            if d > 0.0 {
                dirs.insert(l.src, ((r.x - s.x) / d, (r.y - s.y) / d));
                dirs.insert(l.dst, ((s.x - r.x) / d, (s.y - r.y) / d));
            }
        }
        BeamState { dirs }
    }

    pub fn direction(&self, node: NodeId) -> Option<(f64, f64)> {
        self.dirs.get(&node).copied()
    }
}

/// Whether the sender of `interferer` and the receiver of `victim` direct
/// their beams towards each other, under the given policy.
pub fn beam_indicator(
    policy: &BeamPolicy,
    topology: &Topology,
    interferer: Link,
    victim: Link,
    beams: &BeamState,
) -> bool {
    match policy {
        // 0 for every non-adjacent link pair; adjacent pairs never share a
        // pairing so the value only matters for non-adjacent ones.
        BeamPolicy::AdjacencyOnly => adjacent(interferer, victim),
        BeamPolicy::SectorBeam { beamwidth_rad } => {
            let tx = interferer.src;
            let rx = victim.dst;
            if tx == rx {
                return true;
            }
            let (Some(tx_beam), Some(rx_beam)) =
                (beams.direction(tx), beams.direction(rx))
            else {
                return false;
            };
            let p_tx = topology.position(tx);
            let p_rx = topology.position(rx);
            let d = p_tx.distance(&p_rx);
            if d == 0.0 {
                return true;
            }
            let los = ((p_rx.x - p_tx.x) / d, (p_rx.y - p_tx.y) / d);
            let cos_half = libm::cos(beamwidth_rad / 2.0);
            let tx_dot = tx_beam.0 * los.0 + tx_beam.1 * los.1;
            let rx_dot = rx_beam.0 * -los.0 + rx_beam.1 * -los.1;
            tx_dot >= cos_half - 1e-12 && rx_dot >= cos_half - 1e-12
        }
    }
}

/// SINR of `victim` among the simultaneously active links:
/// signal / (W·N0 + ρ·Σ f·k0·P_t·l^(−γ)).
pub fn sinr(
    model: &RadioModel,
    topology: &Topology,
    victim: Link,
    active: &[Link],
    beams: &BeamState,
) -> f64 {
    debug_assert!(active.contains(&victim));
    let signal = received_power(model, topology.distance(victim.src, victim.dst))
        .expect("victim link has positive length");
    let mut interference = 0.0;
    for l in active {
        if *l == victim {
            continue;
        }
        if beam_indicator(&model.beam_policy, topology, *l, victim, beams) {
            let d = topology.distance(l.src, victim.dst);
            if d > 0.0 {
                interference += model.k0() * model.tx_power_mw * libm::pow(d, -model.path_loss_exp);
            }
        }
    }
    signal / (model.noise_mw() + model.mui_factor * interference)
}

/// Concurrent-transmission test: every link in the set must reach the SINR
/// its rate requires. Under [`BeamPolicy::AdjacencyOnly`] this is always
/// true for non-adjacent sets; rates absent from the table are still a
/// configuration error.
pub fn pairing_feasible(
    model: &RadioModel,
    topology: &Topology,
    links: &[Link],
    beams: &BeamState,
) -> Result<bool, RadioError> {
    let mut thresholds = Vec::with_capacity(links.len());
    for l in links {
        thresholds.push(model.rate_table.min_sinr(topology.rate(*l))?);
    }
    if matches!(model.beam_policy, BeamPolicy::AdjacencyOnly) {
        return Ok(true);
    }
    for (l, ms) in links.iter().zip(thresholds) {
        if sinr(model, topology, *l, links, beams) < ms {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Point;
    use alloc::string::ToString;
    use alloc::vec;

    fn line_topology(spacing: f64, n: usize) -> Topology {
        let pos = (0..n)
            .map(|i| Point::new(i as f64 * spacing, 0.0))
            .collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Topology::new(pos, labels, NodeId(0), vec![1, 2, 3, 4]).unwrap()
    }

    fn default_model(policy: BeamPolicy) -> RadioModel {
        RadioModel::default_60ghz(RateTable::default_four(), policy)
    }

    #[test]
    fn received_power_reference_distance() {
        let m = default_model(BeamPolicy::AdjacencyOnly);
        let p = received_power(&m, 1.0).unwrap();
        assert!((p - m.k0() * m.tx_power_mw).abs() < 1e-18);
    }

    #[test]
    fn received_power_inverse_square() {
        let m = default_model(BeamPolicy::AdjacencyOnly);
        let p2 = received_power(&m, 2.0).unwrap();
        let p4 = received_power(&m, 4.0).unwrap();
        assert!((p2 / p4 - 4.0).abs() < 1e-9);
    }

    #[test]
    fn received_power_default_scenario_at_5m() {
        // hand-computed 10^(-68/10) * 10 * 5^(-2)
        let m = default_model(BeamPolicy::AdjacencyOnly);
        let expect = 6.33957276984445e-8;
        let got = received_power(&m, 5.0).unwrap();
        assert!((got - expect).abs() / expect < 1e-12, "got {got}");
    }

    #[test]
    fn received_power_rejects_zero_distance() {
        let m = default_model(BeamPolicy::AdjacencyOnly);
        assert_eq!(received_power(&m, 0.0), Err(RadioError::NonPositiveDistance));
    }

    #[test]
    fn beam_indicator_adjacency_only() {
        let t = line_topology(1.0, 4);
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[a, b]);
        assert!(!beam_indicator(&BeamPolicy::AdjacencyOnly, &t, a, b, &beams));
        assert!(!beam_indicator(&BeamPolicy::AdjacencyOnly, &t, b, a, &beams));
    }

    #[test]
    fn beam_indicator_sector_aligned_and_off_axis() {
        // four collinear nodes: 0 -> 1 transmits towards 2 -> 3's receiver
        let t = line_topology(1.0, 4);
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[a, b]);
        let sector = BeamPolicy::SectorBeam {
            beamwidth_rad: 60f64.to_radians(),
        };
        // 0's beam (towards 1) also points at 3; 3's beam (towards 2) points
        // back at 0: mutual alignment.
        assert!(beam_indicator(&sector, &t, a, b, &beams));

        // receiver of `a` is node 1, behind sender 2's beam: 2 beams at 3
        // (away from 1) -> no interference from b into a.
        assert!(!beam_indicator(&sector, &t, b, a, &beams));
    }

    #[test]
    fn beam_indicator_sector_orthogonal() {
        // interferer beams 90 degrees off the victim line of sight
        let pos = vec![
            Point::new(0.0, 0.0), // 0: sender of interferer
            Point::new(0.0, 1.0), // 1: its receiver (north)
            Point::new(5.0, 0.0), // 2: victim sender
            Point::new(1.0, 0.0), // 3: victim receiver (east of 0)
        ];
        let labels = (0..4).map(|i| i.to_string()).collect();
        let t = Topology::new(pos, labels, NodeId(0), vec![1, 2, 3, 4]).unwrap();
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[a, b]);
        let sector = BeamPolicy::SectorBeam {
            beamwidth_rad: 60f64.to_radians(),
        };
        assert!(!beam_indicator(&sector, &t, a, b, &beams));
    }

    #[test]
    fn sinr_no_interferer_is_snr() {
        let t = line_topology(2.0, 4);
        let m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 30f64.to_radians(),
        });
        let v = Link::new(NodeId(0), NodeId(1));
        let beams = BeamState::for_pairing(&t, &[v]);
        let s = sinr(&m, &t, v, &[v], &beams);
        let snr = received_power(&m, 2.0).unwrap() / m.noise_mw();
        assert!((s - snr).abs() / snr < 1e-12);
    }

    #[test]
    fn sinr_mui_factor_zero_kills_interference() {
        let t = line_topology(1.0, 4);
        let mut m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 180f64.to_radians(),
        });
        m.mui_factor = 0.0;
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[a, b]);
        let with = sinr(&m, &t, b, &[a, b], &beams);
        let alone = sinr(&m, &t, b, &[b], &beams);
        assert_eq!(with, alone);
    }

    #[test]
    fn sinr_two_link_hand_computation() {
        // victim 2->3 at 1 m, interferer 0->1 whose sender is 2 m from the
        // victim receiver and beam-aligned under a wide sector.
        let pos = vec![
            Point::new(0.0, 0.0), // interferer sender
            Point::new(5.0, 0.0), // interferer receiver (east)
            Point::new(3.0, 0.0), // victim sender
            Point::new(2.0, 0.0), // victim receiver, 2 m east of node 0
        ];
        let labels = (0..4).map(|i| i.to_string()).collect();
        let t = Topology::new(pos, labels, NodeId(0), vec![1, 2, 3, 4]).unwrap();
        let m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 360f64.to_radians(),
        });
        let a = Link::new(NodeId(0), NodeId(1));
        let v = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[a, v]);
        // spreadsheet-style evaluation: k0*Pt = 10^(-6.8)*10
        let k0pt = libm::pow(10.0, -6.8) * 10.0;
        let signal = k0pt * libm::pow(1.0, -2.0);
        let interference = k0pt * libm::pow(2.0, -2.0);
        let noise = 2.16e9 * libm::pow(10.0, -17.4);
        let expect = signal / (noise + 1.0 * interference);
        let got = sinr(&m, &t, v, &[a, v], &beams);
        assert!((got - expect).abs() / expect < 1e-12, "got {got} want {expect}");
    }

    #[test]
    fn sinr_monotone_in_interferers() {
        let t = line_topology(1.5, 6);
        let m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 360f64.to_radians(),
        });
        let v = Link::new(NodeId(0), NodeId(1));
        let i1 = Link::new(NodeId(2), NodeId(3));
        let i2 = Link::new(NodeId(4), NodeId(5));
        let beams = BeamState::for_pairing(&t, &[v, i1, i2]);
        let s0 = sinr(&m, &t, v, &[v], &beams);
        let s1 = sinr(&m, &t, v, &[v, i1], &beams);
        let s2 = sinr(&m, &t, v, &[v, i1, i2], &beams);
        assert!(s0 >= s1 && s1 >= s2);
    }

    #[test]
    fn sinr_scale_consistent_when_noise_vanishes() {
        let t = line_topology(1.5, 4);
        let mut m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 360f64.to_radians(),
        });
        m.noise_psd_mw_per_hz = 1e-300;
        let v = Link::new(NodeId(0), NodeId(1));
        let i1 = Link::new(NodeId(2), NodeId(3));
        let beams = BeamState::for_pairing(&t, &[v, i1]);
        let s1 = sinr(&m, &t, v, &[v, i1], &beams);
        m.tx_power_mw *= 7.5;
        let s2 = sinr(&m, &t, v, &[v, i1], &beams);
        assert!((s1 - s2).abs() / s1 < 1e-9);
    }

    #[test]
    fn pairing_feasible_adjacency_only_always_true() {
        let mut t = line_topology(1.0, 6);
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        t.set_rate(a, 4).unwrap();
        t.set_rate(b, 4).unwrap();
        let m = default_model(BeamPolicy::AdjacencyOnly);
        let beams = BeamState::for_pairing(&t, &[a, b]);
        assert!(pairing_feasible(&m, &t, &[a, b], &beams).unwrap());
    }

    #[test]
    fn pairing_feasible_singleton_with_budget() {
        let mut t = line_topology(1.0, 2);
        let a = Link::new(NodeId(0), NodeId(1));
        t.set_rate(a, 1).unwrap();
        let m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 60f64.to_radians(),
        });
        let beams = BeamState::for_pairing(&t, &[a]);
        // 1 m link: SNR ~ 22.7 dB > MS(1) = 10 dB
        assert!(pairing_feasible(&m, &t, &[a], &beams).unwrap());
    }

    #[test]
    fn pairing_feasible_mutual_interference_below_threshold() {
        // two co-channel links aimed through each other at close range; the
        // cross distance equals the link length so SINR ~ 0 dB < MS.
        let pos = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.001),
            Point::new(0.0, 0.001),
        ];
        let labels = (0..4).map(|i| i.to_string()).collect();
        let mut t = Topology::new(pos, labels, NodeId(0), vec![1, 2, 3, 4]).unwrap();
        let a = Link::new(NodeId(0), NodeId(1));
        let b = Link::new(NodeId(2), NodeId(3));
        t.set_rate(a, 1).unwrap();
        t.set_rate(b, 1).unwrap();
        let m = default_model(BeamPolicy::SectorBeam {
            beamwidth_rad: 90f64.to_radians(),
        });
        let beams = BeamState::for_pairing(&t, &[a, b]);
        assert!(!pairing_feasible(&m, &t, &[a, b], &beams).unwrap());
        // removing the interferer restores feasibility
        let solo = BeamState::for_pairing(&t, &[a]);
        assert!(pairing_feasible(&m, &t, &[a], &solo).unwrap());
    }

    #[test]
    fn pairing_feasible_missing_rate_is_config_error() {
        let mut t = line_topology(1.0, 2);
        let a = Link::new(NodeId(0), NodeId(1));
        t.set_rate(a, 3).unwrap();
        let table = RateTable::new(vec![(db_to_linear(10.0), 1)]).unwrap();
        let m = RadioModel::default_60ghz(table, BeamPolicy::AdjacencyOnly);
        let beams = BeamState::for_pairing(&t, &[a]);
        assert_eq!(
            pairing_feasible(&m, &t, &[a], &beams),
            Err(RadioError::RateNotInTable { rate: 3 })
        );
    }

    #[test]
    fn model_invariants_enforced() {
        assert!(RateTable::new(vec![(2.0, 2), (1.0, 3)]).is_err());
        assert!(RateTable::new(vec![(1.0, 2), (2.0, 2)]).is_err());
        let table = RateTable::default_four();
        assert!(RadioModel::new(0.0, -68.0, 2.0, 1.0, 1e9, 1e-17, table.clone(),
            BeamPolicy::AdjacencyOnly).is_err());
        assert!(RadioModel::new(1.0, -68.0, 2.0, 1.5, 1e9, 1e-17, table,
            BeamPolicy::AdjacencyOnly).is_err());
    }
}
