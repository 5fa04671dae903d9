//! Synthetic network and graph instances, drop generation, and their text
//! serialization.
//!
//! Generated gains are divided by the noise power in mW, so generated
//! instances have unit noise and the power cap is the transmit power in mW.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{FpError, Result};
use crate::matrix::{CMat, Complex64};
use crate::rng::seeded;
use crate::textfmt::{join, KeyValueDoc};

/// `128.1 + 37.6 log10(d_km) + shadow_db`.
pub fn pathloss_db(d_km: f64, shadow_db: f64) -> f64 {
    128.1 + 37.6 * d_km.log10() + shadow_db
}

/// `x` dBm in mW.
pub fn dbm_to_mw(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn mw_to_dbm(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Single-antenna interference network: link `i` is transmitter `i` to receiver `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance {
    /// `gains[(i, j)] = |h_ij|^2`, transmitter `j` to receiver `i`.
    pub gains: DMatrix<f64>,
    /// Eavesdropper gains `|h~_ij|^2`, transmitter `j` to eavesdropper `i`.
    pub eve_gains: Option<DMatrix<f64>>,
    pub noise: f64,
    pub eve_noise: f64,
    pub power_cap: f64,
    pub weights: Vec<f64>,
    pub seed: u64,
}

impl NetworkInstance {
    pub fn new(gains: DMatrix<f64>, noise: f64, power_cap: f64) -> Result<Self> {
        let n = gains.nrows();
        let net = Self { gains, eve_gains: None, noise, eve_noise: 1.0, power_cap, weights: vec![1.0; n], seed: 0 };
        net.validate()?;
        Ok(net)
    }

    pub fn with_eavesdroppers(mut self, eve_gains: DMatrix<f64>, eve_noise: f64) -> Result<Self> {
        self.eve_gains = Some(eve_gains);
        self.eve_noise = eve_noise;
        self.validate()?;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = weights;
        self.validate()?;
        Ok(self)
    }

    pub fn links(&self) -> usize {
        self.gains.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gains.nrows();
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        if n == 0 || !self.gains.is_square() {
            return bad("gain matrix must be square and nonempty".into());
        }
        if self.gains.iter().any(|g| !(*g >= 0.0)) {
            return bad("channel gains must be nonnegative".into());
        }
        if let Some(e) = &self.eve_gains {
            if e.shape() != (n, n) || e.iter().any(|g| !(*g >= 0.0)) {
                return bad("eavesdropper gains must be a nonnegative square matrix of the link count".into());
            }
        }
        if !(self.noise > 0.0) || !(self.eve_noise > 0.0) {
            return bad("noise powers must be positive".into());
        }
        if !(self.power_cap > 0.0) {
            return bad("power cap must be positive".into());
        }
        if self.weights.len() != n || self.weights.iter().any(|w| !(*w > 0.0)) {
            return bad("one positive weight per link is required".into());
        }
        Ok(())
    }

    /// `SINR_i = g_ii p_i / (sum_{j != i} g_ij p_j + sigma^2)`.
    pub fn sinr(&self, p: &[f64]) -> Vec<f64> {
        let n = self.links();
        (0..n)
            .map(|i| {
                let interference: f64 = (0..n).filter(|&j| j != i).map(|j| self.gains[(i, j)] * p[j]).sum();
                self.gains[(i, i)] * p[i] / (interference + self.noise)
            })
            .collect()
    }

    pub fn weighted_sum_rate(&self, p: &[f64]) -> f64 {
        self.sinr(p).iter().zip(&self.weights).map(|(s, w)| w * s.ln_1p()).sum()
    }

    pub fn to_text(&self) -> String {
        let mut doc = KeyValueDoc::new();
        doc.set("", "kind", "siso");
        doc.set("", "seed", self.seed);
        doc.set("", "links", self.links());
        doc.set("", "noise", format!("{:?}", self.noise));
        doc.set("", "power_cap", format!("{:?}", self.power_cap));
        doc.set_list("", "weights", &self.weights);
        write_matrix(&mut doc, "gains", &self.gains);
        if let Some(e) = &self.eve_gains {
            doc.set("", "eve_noise", format!("{:?}", self.eve_noise));
            write_matrix(&mut doc, "eve_gains", e);
        }
        doc.render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = KeyValueDoc::parse(text)?;
        expect_kind(&doc, "siso")?;
        let gains = read_matrix(&doc, "gains")?;
        let eve_gains = if doc.sections().contains(&"eve_gains") { Some(read_matrix(&doc, "eve_gains")?) } else { None };
        let net = Self {
            gains,
            eve_gains,
            noise: doc.required_value("", "noise")?,
            eve_noise: doc.value_or("", "eve_noise", 1.0)?,
            power_cap: doc.required_value("", "power_cap")?,
            weights: doc.required_list("", "weights")?,
            seed: doc.value_or("", "seed", 0)?,
        };
        net.validate()?;
        Ok(net)
    }
}

/// Multi-cell MIMO downlink: `L` cells, `K` users each, `M` transmit and `N`
/// receive antennas, `d` streams.
#[derive(Debug, Clone, PartialEq)]
pub struct MimoInstance {
    pub cells: usize,
    pub users: usize,
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub streams: usize,
    /// `channels[user_index(i, k)][j] = H_{ik,j}` (`N x M`), BS `j` to user `(i, k)`.
    pub channels: Vec<Vec<CMat>>,
    pub noise: f64,
    /// Per-BS sum power budget.
    pub power_cap: f64,
    pub weights: Vec<f64>,
    pub seed: u64,
}

impl MimoInstance {
    pub fn user_index(&self, cell: usize, user: usize) -> usize {
        cell * self.users + user
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        let total = self.cells * self.users;
        if total == 0 || self.tx_antennas == 0 || self.rx_antennas == 0 || self.streams == 0 {
            return bad("cells, users, antennas and streams must be positive".into());
        }
        if self.channels.len() != total || self.channels.iter().any(|row| row.len() != self.cells) {
            return bad("one channel per (user, BS) pair is required".into());
        }
        if self.channels.iter().flatten().any(|h| h.shape() != (self.rx_antennas, self.tx_antennas)) {
            return bad("every channel must be N x M".into());
        }
        if !(self.noise > 0.0) || !(self.power_cap > 0.0) {
            return bad("noise and power cap must be positive".into());
        }
        if self.weights.len() != total || self.weights.iter().any(|w| !(*w > 0.0)) {
            return bad("one positive weight per user is required".into());
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut doc = KeyValueDoc::new();
        doc.set("", "kind", "mimo");
        doc.set("", "seed", self.seed);
        doc.set("", "cells", self.cells);
        doc.set("", "users", self.users);
        doc.set("", "tx_antennas", self.tx_antennas);
        doc.set("", "rx_antennas", self.rx_antennas);
        doc.set("", "streams", self.streams);
        doc.set("", "noise", format!("{:?}", self.noise));
        doc.set("", "power_cap", format!("{:?}", self.power_cap));
        doc.set_list("", "weights", &self.weights);
        for (u, row) in self.channels.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                write_cmatrix(&mut doc, &format!("channel.{u}.{j}"), h);
            }
        }
        doc.render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = KeyValueDoc::parse(text)?;
        expect_kind(&doc, "mimo")?;
        let cells: usize = doc.required_value("", "cells")?;
        let users: usize = doc.required_value("", "users")?;
        let channels = (0..cells * users)
            .map(|u| (0..cells).map(|j| read_cmatrix(&doc, &format!("channel.{u}.{j}"))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let inst = Self {
            cells,
            users,
            tx_antennas: doc.required_value("", "tx_antennas")?,
            rx_antennas: doc.required_value("", "rx_antennas")?,
            streams: doc.required_value("", "streams")?,
            channels,
            noise: doc.required_value("", "noise")?,
            power_cap: doc.required_value("", "power_cap")?,
            weights: doc.required_list("", "weights")?,
            seed: doc.value_or("", "seed", 0)?,
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// Uplink pilot-contamination instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotInstance {
    pub cells: usize,
    pub users: usize,
    pub antennas: usize,
    pub pilot_len: usize,
    /// Per-pilot power budget `rho`.
    pub pilot_power: f64,
    pub noise: f64,
    /// `beta[i][j * users + q]`: large-scale gain from user `(j, q)` to BS `i`.
    pub beta: Vec<Vec<f64>>,
    pub seed: u64,
}

impl PilotInstance {
    pub fn beta(&self, bs: usize, cell: usize, user: usize) -> f64 {
        self.beta[bs][cell * self.users + user]
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        if self.cells == 0 || self.users == 0 || self.antennas == 0 || self.pilot_len == 0 {
            return bad("cells, users, antennas and pilot length must be positive".into());
        }
        if !(self.pilot_power > 0.0) || !(self.noise >= 0.0) {
            return bad("pilot power must be positive and noise nonnegative".into());
        }
        if self.beta.len() != self.cells || self.beta.iter().any(|r| r.len() != self.cells * self.users) {
            return bad("beta must hold one row per BS and one entry per user".into());
        }
        if self.beta.iter().flatten().any(|b| !(*b >= 0.0)) {
            return bad("large-scale gains must be nonnegative".into());
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut doc = KeyValueDoc::new();
        doc.set("", "kind", "pilot");
        doc.set("", "seed", self.seed);
        doc.set("", "cells", self.cells);
        doc.set("", "users", self.users);
        doc.set("", "antennas", self.antennas);
        doc.set("", "pilot_len", self.pilot_len);
        doc.set("", "pilot_power", format!("{:?}", self.pilot_power));
        doc.set("", "noise", format!("{:?}", self.noise));
        let flat: Vec<f64> = self.beta.iter().flatten().copied().collect();
        write_matrix(&mut doc, "beta", &DMatrix::from_row_slice(self.cells, self.cells * self.users, &flat));
        doc.render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = KeyValueDoc::parse(text)?;
        expect_kind(&doc, "pilot")?;
        let m = read_matrix(&doc, "beta")?;
        let inst = Self {
            cells: doc.required_value("", "cells")?,
            users: doc.required_value("", "users")?,
            antennas: doc.required_value("", "antennas")?,
            pilot_len: doc.required_value("", "pilot_len")?,
            pilot_power: doc.required_value("", "pilot_power")?,
            noise: doc.required_value("", "noise")?,
            beta: (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect(),
            seed: doc.value_or("", "seed", 0)?,
        };
        inst.validate()?;
        Ok(inst)
    }
}

/// Uplink with several candidate users per cell, one of which is scheduled.
#[derive(Debug, Clone, PartialEq)]
pub struct UplinkInstance {
    /// `gains[i][j][u]`: gain from candidate `u` of cell `j` to BS `i`.
    pub gains: Vec<Vec<Vec<f64>>>,
    /// `weights[j][u]`: rate weight of candidate `u` in cell `j`.
    pub weights: Vec<Vec<f64>>,
    pub noise: f64,
    pub power_cap: f64,
    pub seed: u64,
}

impl UplinkInstance {
    pub fn cells(&self) -> usize {
        self.gains.len()
    }

    pub fn candidates(&self, cell: usize) -> usize {
        self.weights[cell].len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        let l = self.gains.len();
        if l == 0 || self.weights.len() != l {
            return bad("one weight list per cell is required".into());
        }
        if self.weights.iter().any(|w| w.is_empty() || w.iter().any(|v| !(*v > 0.0))) {
            return bad("every cell needs at least one candidate with a positive weight".into());
        }
        for row in &self.gains {
            if row.len() != l || row.iter().zip(&self.weights).any(|(g, w)| g.len() != w.len()) {
                return bad("gain table does not match the candidate lists".into());
            }
        }
        if self.gains.iter().flatten().flatten().any(|g| !(*g >= 0.0)) {
            return bad("gains must be nonnegative".into());
        }
        if !(self.noise > 0.0) || !(self.power_cap > 0.0) {
            return bad("noise and power cap must be positive".into());
        }
        Ok(())
    }

    /// SISO network formed by scheduling `schedule[j]` in each cell `j`.
    pub fn scheduled_network(&self, schedule: &[usize]) -> Result<NetworkInstance> {
        let l = self.cells();
        let gains = DMatrix::from_fn(l, l, |i, j| self.gains[i][j][schedule[j]]);
        let weights = (0..l).map(|j| self.weights[j][schedule[j]]).collect();
        NetworkInstance::new(gains, self.noise, self.power_cap)?.with_weights(weights)
    }
}

/// Similarity graph for normalized-cut clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub w: DMatrix<f64>,
    pub clusters: usize,
    pub seed: u64,
}

impl GraphInstance {
    pub fn new(w: DMatrix<f64>, clusters: usize) -> Result<Self> {
        let g = Self { w, clusters, seed: 0 };
        g.validate()?;
        Ok(g)
    }

    pub fn nodes(&self) -> usize {
        self.w.nrows()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.nodes()).map(|i| self.w.row(i).sum()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FpError::InvalidProblem(m));
        let n = self.w.nrows();
        if n == 0 || !self.w.is_square() {
            return bad("similarity matrix must be square and nonempty".into());
        }
        if self.clusters == 0 || self.clusters > n {
            return bad(format!("cluster count {} is not in 1..={n}", self.clusters));
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.w[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return bad(format!("w[{i},{j}] = {v} is outside [0, 1]"));
                }
                if (v - self.w[(j, i)]).abs() > 1e-12 {
                    return bad("similarity matrix must be symmetric".into());
                }
            }
        }
        if self.degrees().iter().any(|d| !(*d > 0.0)) {
            return bad("every node needs a positive degree".into());
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut doc = KeyValueDoc::new();
        doc.set("", "kind", "graph");
        doc.set("", "seed", self.seed);
        doc.set("", "clusters", self.clusters);
        write_matrix(&mut doc, "w", &self.w);
        doc.render()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = KeyValueDoc::parse(text)?;
        expect_kind(&doc, "graph")?;
        let g = Self { w: read_matrix(&doc, "w")?, clusters: doc.required_value("", "clusters")?, seed: doc.value_or("", "seed", 0)? };
        g.validate()?;
        Ok(g)
    }
}

fn expect_kind(doc: &KeyValueDoc, kind: &str) -> Result<()> {
    let got = doc.require("", "kind")?;
    if got != kind {
        return Err(FpError::InvalidConfig(format!("expected a `{kind}` instance, found `{got}`")));
    }
    Ok(())
}

fn write_matrix(doc: &mut KeyValueDoc, name: &str, m: &DMatrix<f64>) {
    doc.set(name, "rows", m.nrows());
    doc.set(name, "cols", m.ncols());
    let row_major: Vec<f64> = (0..m.nrows()).flat_map(|r| m.row(r).iter().copied().collect::<Vec<_>>()).collect();
    doc.set(name, "data", join(&row_major));
}

fn read_matrix(doc: &KeyValueDoc, name: &str) -> Result<DMatrix<f64>> {
    let rows: usize = doc.required_value(name, "rows")?;
    let cols: usize = doc.required_value(name, "cols")?;
    let data: Vec<f64> = doc.required_list(name, "data")?;
    if data.len() != rows * cols {
        return Err(FpError::ShapeMismatch(format!("[{name}] holds {} values for a {rows}x{cols} matrix", data.len())));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

fn write_cmatrix(doc: &mut KeyValueDoc, name: &str, m: &CMat) {
    doc.set(name, "rows", m.nrows());
    doc.set(name, "cols", m.ncols());
    let (re, im): (Vec<f64>, Vec<f64>) =
        (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |c| (r, c))).map(|(r, c)| (m[(r, c)].re, m[(r, c)].im)).unzip();
    doc.set(name, "re", join(&re));
    doc.set(name, "im", join(&im));
}

fn read_cmatrix(doc: &KeyValueDoc, name: &str) -> Result<CMat> {
    let rows: usize = doc.required_value(name, "rows")?;
    let cols: usize = doc.required_value(name, "cols")?;
    let re: Vec<f64> = doc.required_list(name, "re")?;
    let im: Vec<f64> = doc.required_list(name, "im")?;
    if re.len() != rows * cols || im.len() != rows * cols {
        return Err(FpError::ShapeMismatch(format!("[{name}] does not hold {rows}x{cols} values")));
    }
    Ok(CMat::from_fn(rows, cols, |r, c| Complex64::new(re[r * cols + c], im[r * cols + c])))
}

/// Distance-dependent attenuation in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pathloss {
    /// `128.1 + 37.6 log10(d_km)`.
    Macro,
    /// `10 alpha log10(d_km)`, i.e. `d^-alpha` with `d` in km.
    Exponent(f64),
}

impl Pathloss {
    pub fn db(self, d_km: f64) -> f64 {
        match self {
            Pathloss::Macro => pathloss_db(d_km, 0.0),
            Pathloss::Exponent(alpha) => 10.0 * alpha * d_km.log10(),
        }
    }
}

/// Drop geometry shared by the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub cells: usize,
    pub users_per_cell: usize,
    /// BS-to-BS distance.
    pub isd_km: f64,
    pub min_dist_km: f64,
    /// Log-normal shadowing standard deviation; zero disables shadowing.
    pub shadowing_db: f64,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    pub pathloss: Pathloss,
}

impl Default for Topology {
    fn default() -> Self {
        Self { cells: 3, users_per_cell: 1, isd_km: 0.8, min_dist_km: 0.035, shadowing_db: 8.0, tx_power_dbm: 43.0, noise_dbm: -100.0, pathloss: Pathloss::Macro }
    }
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(FpError::BadTopology(m.into()));
        if self.cells == 0 || self.users_per_cell == 0 {
            return bad("cell and user counts must be at least one");
        }
        if !(self.isd_km > 0.0) || !(self.min_dist_km > 0.0) {
            return bad("distances must be positive");
        }
        if self.min_dist_km >= self.isd_km / 2.0 {
            return bad("minimum distance must be below the cell radius");
        }
        if !(self.shadowing_db >= 0.0) {
            return bad("shadowing deviation must be nonnegative");
        }
        if matches!(self.pathloss, Pathloss::Exponent(a) if !(a > 0.0)) {
            return bad("pathloss exponent must be positive");
        }
        Ok(())
    }

    /// BS positions on a grid wrapped into a torus.
    fn sites(&self) -> (Vec<(f64, f64)>, (f64, f64)) {
        let cols = (self.cells as f64).sqrt().ceil() as usize;
        let rows = self.cells.div_ceil(cols);
        let sites = (0..self.cells).map(|c| ((c % cols) as f64 * self.isd_km, (c / cols) as f64 * self.isd_km)).collect();
        (sites, (cols as f64 * self.isd_km, rows as f64 * self.isd_km))
    }
}

/// Positions and BS-to-user distances of one drop.
struct Drop {
    /// `dist[i][j * users + u]`: distance from BS `i` to user `u` of cell `j`.
    dist: Vec<Vec<f64>>,
}

fn torus_distance(a: (f64, f64), b: (f64, f64), size: (f64, f64)) -> f64 {
    let dx = (a.0 - b.0).abs() % size.0;
    let dy = (a.1 - b.1).abs() % size.1;
    let dx = dx.min(size.0 - dx);
    let dy = dy.min(size.1 - dy);
    (dx * dx + dy * dy).sqrt()
}

fn drop_users<R: Rng>(topo: &Topology, rng: &mut R) -> Drop {
    let (sites, size) = topo.sites();
    let radius = topo.isd_km / 2.0;
    let mut users = Vec::with_capacity(topo.cells * topo.users_per_cell);
    for site in &sites {
        for _ in 0..topo.users_per_cell {
            // Uniform over the annulus [min_dist, radius].
            let u: f64 = rng.random();
            let r = (topo.min_dist_km.powi(2) + u * (radius.powi(2) - topo.min_dist_km.powi(2))).sqrt();
            let theta = rng.random::<f64>() * std::f64::consts::TAU;
            users.push((site.0 + r * theta.cos(), site.1 + r * theta.sin()));
        }
    }
    let dist = sites
        .iter()
        .map(|s| users.iter().map(|u| torus_distance(*s, *u, size).max(topo.min_dist_km)).collect())
        .collect();
    Drop { dist }
}

fn gain_from<R: Rng>(topo: &Topology, d_km: f64, rng: &mut R) -> f64 {
    let shadow = if topo.shadowing_db > 0.0 {
        Normal::new(0.0, topo.shadowing_db).expect("positive deviation").sample(rng)
    } else {
        0.0
    };
    dbm_to_mw(-topo.pathloss.db(d_km) - shadow - topo.noise_dbm)
}

/// Downlink SISO drop with one user per cell: `gains[(i, j)]` is BS `j` to the
/// user of cell `i`, normalized by the noise power. Noise is 1 and the power
/// cap is the transmit power in mW.
pub fn generate_network(topo: &Topology, seed: u64) -> Result<NetworkInstance> {
    topo.validate()?;
    if topo.users_per_cell != 1 {
        return Err(FpError::BadTopology("a SISO interference network has one user per cell".into()));
    }
    let mut rng = seeded(seed);
    let drop = drop_users(topo, &mut rng);
    let l = topo.cells;
    let gains = DMatrix::from_fn(l, l, |i, j| gain_from(topo, drop.dist[j][i], &mut rng));
    let mut net = NetworkInstance::new(gains, 1.0, dbm_to_mw(topo.tx_power_dbm))?;
    net.seed = seed;
    Ok(net)
}

/// Pilot instance with pathloss-generated large-scale gains including the
/// pilot transmit power; noise is 1 and `pilot_power` scales on top.
pub fn generate_pilot_instance(topo: &Topology, antennas: usize, pilot_len: usize, pilot_power: f64, seed: u64) -> Result<PilotInstance> {
    topo.validate()?;
    let mut rng = seeded(seed);
    let drop = drop_users(topo, &mut rng);
    let beta = drop
        .dist
        .iter()
        .map(|row| row.iter().map(|&d| dbm_to_mw(topo.tx_power_dbm) * gain_from(topo, d, &mut rng)).collect())
        .collect();
    let inst = PilotInstance {
        cells: topo.cells,
        users: topo.users_per_cell,
        antennas,
        pilot_len,
        pilot_power,
        noise: 1.0,
        beta,
        seed,
    };
    inst.validate()?;
    Ok(inst)
}

/// MIMO downlink drop with Rayleigh small-scale fading on top of pathloss.
/// Noise is 1 and the per-BS budget is the transmit power in mW.
pub fn generate_mimo(topo: &Topology, tx_antennas: usize, rx_antennas: usize, streams: usize, seed: u64) -> Result<MimoInstance> {
    topo.validate()?;
    let mut rng = seeded(seed);
    let drop = drop_users(topo, &mut rng);
    let total = topo.cells * topo.users_per_cell;
    let channels = (0..total)
        .map(|u| {
            (0..topo.cells)
                .map(|j| {
                    let g = gain_from(topo, drop.dist[j][u], &mut rng).sqrt() / 2f64.sqrt();
                    CMat::from_fn(rx_antennas, tx_antennas, |_, _| {
                        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)) * g
                    })
                })
                .collect()
        })
        .collect();
    let inst = MimoInstance {
        cells: topo.cells,
        users: topo.users_per_cell,
        tx_antennas,
        rx_antennas,
        streams,
        channels,
        noise: 1.0,
        power_cap: dbm_to_mw(topo.tx_power_dbm),
        weights: vec![1.0; total],
        seed,
    };
    inst.validate()?;
    Ok(inst)
}

/// Uplink drop with `users_per_cell` scheduling candidates per cell and
/// random weights in `[0.5, 1.5)`.
pub fn generate_uplink(topo: &Topology, seed: u64) -> Result<UplinkInstance> {
    topo.validate()?;
    let mut rng = seeded(seed);
    let drop = drop_users(topo, &mut rng);
    let (l, k) = (topo.cells, topo.users_per_cell);
    let gains = (0..l)
        .map(|i| (0..l).map(|j| (0..k).map(|u| gain_from(topo, drop.dist[i][j * k + u], &mut rng)).collect()).collect())
        .collect();
    let weights = (0..l).map(|_| (0..k).map(|_| 0.5 + rng.random::<f64>()).collect()).collect();
    let inst = UplinkInstance { gains, weights, noise: 1.0, power_cap: dbm_to_mw(topo.tx_power_dbm), seed };
    inst.validate()?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_examples() {
        assert_eq!(pathloss_db(1.0, 0.0), 128.1);
        assert!((pathloss_db(0.5, 0.0) - 116.78).abs() < 5e-3);
        assert!((dbm_to_mw(10.0) - 10.0).abs() < 1e-12);
        assert!((dbm_to_mw(-10.0) - 0.1).abs() < 1e-15);
        assert_eq!(dbm_to_mw(0.0), 1.0);
        assert!((mw_to_dbm(dbm_to_mw(43.0)) - 43.0).abs() < 1e-12);
    }

    #[test]
    fn generation_is_deterministic() {
        let topo = Topology::default();
        assert_eq!(generate_network(&topo, 7).unwrap(), generate_network(&topo, 7).unwrap());
        assert_ne!(generate_network(&topo, 7).unwrap(), generate_network(&topo, 8).unwrap());
        let g = generate_network(&topo, 7).unwrap();
        assert!(g.gains.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn bad_topologies() {
        let t = Topology { cells: 0, ..Topology::default() };
        assert!(matches!(generate_network(&t, 0), Err(FpError::BadTopology(_))));
        let t = Topology { isd_km: -1.0, ..Topology::default() };
        assert!(matches!(generate_network(&t, 0), Err(FpError::BadTopology(_))));
        let t = Topology { min_dist_km: 0.5, ..Topology::default() };
        assert!(matches!(generate_network(&t, 0), Err(FpError::BadTopology(_))));
    }

    #[test]
    fn torus_wraps() {
        assert!((torus_distance((0.0, 0.0), (1.9, 0.0), (2.0, 2.0)) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn text_round_trips() {
        let topo = Topology::default();
        let mut net = generate_network(&topo, 3).unwrap();
        net.eve_gains = Some(net.gains.map(|g| g * 0.5));
        assert_eq!(NetworkInstance::from_text(&net.to_text()).unwrap(), net);
        let p = generate_pilot_instance(&Topology { users_per_cell: 2, tx_power_dbm: 23.0, ..topo.clone() }, 4, 3, 1.0, 4).unwrap();
        assert_eq!(PilotInstance::from_text(&p.to_text()).unwrap(), p);
        let m = generate_mimo(&Topology { cells: 2, ..topo.clone() }, 2, 2, 1, 5).unwrap();
        assert_eq!(MimoInstance::from_text(&m.to_text()).unwrap(), m);
        let g = GraphInstance::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]), 2).unwrap();
        assert_eq!(GraphInstance::from_text(&g.to_text()).unwrap(), g);
        assert!(GraphInstance::from_text(&net.to_text()).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(GraphInstance::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.2, 1.0]), 2).is_err());
        assert!(GraphInstance::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.3, 1.3, 1.0]), 2).is_err());
        assert!(GraphInstance::new(DMatrix::identity(2, 2), 3).is_err());
    }
}
