use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    ring_bonds, AdaptConfig, AnsatzBlueprint, AnsatzConfig, Entangler, Family, GeneratorTerm, HeaConfig,
    HvaConfig, HvaInit, MeraConfig, Mixer, PoolSpec, QaoaConfig, QcnnConfig, QceConfig, QceMode, QnnConfig,
    SpaConfig, UccConfig,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{bonds, Boundary, HamiltonianSpec, Pauli, PauliString, PauliSum};
use crate::sim::{parse_bitstring, Angle, Circuit, Gate};

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Circuit under construction with parameters allocated as `<FAMILY>_<k>`.
struct Builder {
    family: Family,
    circuit: Circuit,
}

impl Builder {
    fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(config_err("n must be at least 1"));
        }
        Ok(Self { family, circuit: Circuit::new(n) })
    }

    fn param(&mut self) -> usize {
        let name = self.family.param_name(self.circuit.num_parameters());
        self.circuit.param(&name)
    }

    fn push(&mut self, gate: Gate, targets: &[usize]) -> Result<()> {
        self.circuit.push(gate, targets).map(|_| ())
    }

    fn rot(&mut self, axis: Pauli, q: usize) -> Result<usize> {
        let p = self.param();
        self.push(rotation(axis, Angle::param(p)), &[q])?;
        Ok(p)
    }

    /// `RZ·RY·RZ` with three fresh parameters.
    fn euler(&mut self, q: usize) -> Result<()> {
        self.rot(Pauli::Z, q)?;
        self.rot(Pauli::Y, q)?;
        self.rot(Pauli::Z, q)?;
        Ok(())
    }

    fn reference(&mut self, bits: Option<&str>) -> Result<()> {
        let Some(bits) = bits else { return Ok(()) };
        let n = self.circuit.num_qubits();
        if bits.len() != n {
            return Err(config_err(format!("reference `{bits}` must have {n} bits")));
        }
        let index = parse_bitstring(bits)?;
        for q in 0..n {
            if index >> q & 1 == 1 {
                self.push(Gate::X, &[q])?;
            }
        }
        Ok(())
    }

    fn finish(self) -> Circuit {
        self.circuit
    }
}

fn rotation(axis: Pauli, a: Angle) -> Gate {
    match axis {
        Pauli::X => Gate::RX(a),
        Pauli::Y => Gate::RY(a),
        Pauli::Z => Gate::RZ(a),
    }
}

/// Append `exp(-i·prefactor·θ/2·P)` for parameter `param`.
pub(crate) fn push_pauli_exponential(c: &mut Circuit, p: &PauliString, param: usize, prefactor: f64) -> Result<()> {
    if p.is_identity() {
        return Err(Error::EmptyGenerator);
    }
    if p.num_qubits() != c.num_qubits() {
        return Err(Error::QubitMismatch { expected: c.num_qubits(), got: p.num_qubits() });
    }
    let qubits: Vec<(usize, Pauli)> = p.letters().iter().map(|(q, l)| (*q, *l)).collect();
    let basis = |c: &mut Circuit, inverse: bool| -> Result<()> {
        for &(q, l) in &qubits {
            match l {
                Pauli::X => {
                    c.push(Gate::H, &[q])?;
                }
                Pauli::Y => {
                    let a = if inverse { -FRAC_PI_2 } else { FRAC_PI_2 };
                    c.push(Gate::RX(a.into()), &[q])?;
                }
                Pauli::Z => {}
            }
        }
        Ok(())
    };
    basis(c, false)?;
    for w in qubits.windows(2) {
        c.push(Gate::CNOT, &[w[0].0, w[1].0])?;
    }
    let last = qubits.last().expect("non-identity").0;
    c.push(Gate::RZ(Angle::affine(param, prefactor, 0.0)), &[last])?;
    for w in qubits.windows(2).rev() {
        c.push(Gate::CNOT, &[w[0].0, w[1].0])?;
    }
    basis(c, true)
}

/// Circuit for `exp(-i·prefactor·θ/2·P)` with one parameter called `param`.
pub fn pauli_exponential(p: &PauliString, param: &str, prefactor: f64) -> Result<Circuit> {
    let mut c = Circuit::new(p.num_qubits());
    let i = c.param(param);
    push_pauli_exponential(&mut c, p, i, prefactor)?;
    Ok(c)
}

/// Exponentiate one weighted term with the cheapest native gate.
fn push_term(c: &mut Circuit, p: &PauliString, param: usize, prefactor: f64) -> Result<()> {
    let angle = Angle::affine(param, prefactor, 0.0);
    let letters: Vec<(usize, Pauli)> = p.letters().iter().map(|(q, l)| (*q, *l)).collect();
    match letters.as_slice() {
        [] => Ok(()),
        [(q, l)] => c.push(rotation(*l, angle), &[*q]).map(|_| ()),
        [(a, Pauli::Z), (b, Pauli::Z)] => c.push(Gate::ZZ(angle), &[*a, *b]).map(|_| ()),
        _ => push_pauli_exponential(c, p, param, prefactor),
    }
}

pub(crate) fn build(config: &AnsatzConfig) -> Result<Circuit> {
    match config {
        AnsatzConfig::Ucc(c) => build_ucc(c),
        AnsatzConfig::Hea(c) => build_hea(c),
        AnsatzConfig::Adapt(c) => build_adapt(c),
        AnsatzConfig::Spa(c) => build_spa(c),
        AnsatzConfig::Qaoa(c) => build_qaoa(c),
        AnsatzConfig::Hva(c) => build_hva(c),
        AnsatzConfig::Qce(c) => build_qce(c),
        AnsatzConfig::Mera(c) => build_mera(c),
        AnsatzConfig::Qnn(c) => build_qnn(c),
        AnsatzConfig::Qcnn(c) => build_qcnn(c),
    }
}

fn build_ucc(cfg: &UccConfig) -> Result<Circuit> {
    if cfg.groups.is_empty() || cfg.groups.iter().any(|g| g.is_empty()) {
        return Err(config_err("UCC needs at least one non-empty generator group"));
    }
    let mut b = Builder::new(Family::Ucc, cfg.n)?;
    b.reference(cfg.reference.as_deref())?;
    for group in &cfg.groups {
        let p = b.param();
        for term in group {
            let (coef, s) = term.resolve(cfg.n)?;
            push_pauli_exponential(&mut b.circuit, &s, p, coef)?;
        }
    }
    Ok(b.finish())
}

/// UCC blueprint from weighted generator groups; each group shares a parameter.
pub fn ucc_ansatz(groups: &[Vec<(f64, PauliString)>], reference: Option<&str>) -> Result<AnsatzBlueprint> {
    let n = groups
        .iter()
        .flatten()
        .map(|(_, p)| p.num_qubits())
        .next()
        .ok_or_else(|| config_err("UCC needs at least one generator"))?;
    let groups = groups
        .iter()
        .map(|g| g.iter().map(|(c, p)| GeneratorTerm::Weighted(*c, p.to_string())).collect())
        .collect();
    AnsatzBlueprint::new(AnsatzConfig::Ucc(UccConfig { n, groups, reference: reference.map(str::to_string) }))
}

fn build_hea(cfg: &HeaConfig) -> Result<Circuit> {
    let n = cfg.n;
    if n < 2 || cfg.layers < 1 {
        return Err(config_err("HEA needs n ≥ 2 and layers ≥ 1"));
    }
    if cfg.entangler == Entangler::Figure2 && n != 4 {
        return Err(config_err(format!("figure2 entangler needs n = 4, got {n}")));
    }
    let mut b = Builder::new(Family::Hea, n)?;
    for _ in 0..cfg.layers {
        for q in 0..n {
            b.rot(Pauli::X, q)?;
            b.rot(Pauli::Z, q)?;
            b.rot(Pauli::X, q)?;
        }
        match cfg.entangler {
            Entangler::CnotRing => {
                for i in 0..n {
                    b.push(Gate::CNOT, &[i, (i + 1) % n])?;
                }
            }
            Entangler::CzRing => {
                for (i, j) in ring_bonds(n) {
                    b.push(Gate::CZ, &[i, j])?;
                }
            }
            Entangler::Figure2 => {
                for i in 0..n {
                    let p = b.param();
                    b.push(Gate::controlled(1, Gate::RY(Angle::param(p))), &[i, (i + 1) % n])?;
                }
            }
        }
    }
    Ok(b.finish())
}

pub fn hea_ansatz(n: usize, layers: usize, entangler: Entangler) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Hea(HeaConfig { n, layers, entangler }))
}

/// The one- and two-site ADAPT pool of strings containing at least one `Y`.
pub fn y_local_pool(n: usize) -> Vec<PauliString> {
    let mut pool: Vec<PauliString> =
        (0..n).map(|i| PauliString::single(n, i, Pauli::Y).expect("index in range")).collect();
    let pairs = [(Pauli::X, Pauli::Y), (Pauli::Y, Pauli::X), (Pauli::Y, Pauli::Y), (Pauli::Y, Pauli::Z), (Pauli::Z, Pauli::Y)];
    for i in 0..n {
        for j in i + 1..n {
            for (a, b) in pairs {
                pool.push(PauliString::new(n, [(i, a), (j, b)]).expect("distinct indices"));
            }
        }
    }
    pool
}

fn build_adapt(cfg: &AdaptConfig) -> Result<Circuit> {
    let mut b = Builder::new(Family::Adapt, cfg.n)?;
    b.reference(cfg.reference.as_deref())?;
    for s in &cfg.operators {
        let p = PauliString::parse(s, cfg.n)?;
        let k = b.param();
        push_pauli_exponential(&mut b.circuit, &p, k, 1.0)?;
    }
    Ok(b.finish())
}

/// ADAPT circuit for an explicit operator sequence.
pub fn adapt_ansatz(n: usize, operators: &[PauliString], reference: Option<&str>) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Adapt(AdaptConfig {
        n,
        pool: PoolSpec::default(),
        operators: operators.iter().map(|p| p.to_string()).collect(),
        epsilon: super::default_epsilon(),
        max_depth: super::default_depth(),
        reference: reference.map(str::to_string),
    }))
}

/// Append the particle-number-conserving A gate on `(lo, hi)`.
fn push_a_gate(c: &mut Circuit, lo: usize, hi: usize, theta: usize, phi: usize) -> Result<()> {
    c.push(Gate::CNOT, &[hi, lo])?;
    c.push(Gate::R2(Angle::param(theta), Angle::param(phi)), &[hi])?;
    c.push(Gate::CNOT, &[lo, hi])?;
    c.push(Gate::RZ(Angle::affine(phi, -1.0, -PI)), &[hi])?;
    c.push(Gate::RY(Angle::affine(theta, -1.0, -FRAC_PI_2)), &[hi])?;
    c.push(Gate::CNOT, &[hi, lo])?;
    Ok(())
}

/// Two-qubit A(θ, φ) gate with parameters named `theta` and `phi`.
pub fn spa_a_gate(theta: &str, phi: &str) -> Result<Circuit> {
    let mut c = Circuit::new(2);
    let t = c.param(theta);
    let p = c.param(phi);
    push_a_gate(&mut c, 0, 1, t, p)?;
    Ok(c)
}

fn build_spa(cfg: &SpaConfig) -> Result<Circuit> {
    let n = cfg.n;
    if n < 2 || cfg.layers < 1 {
        return Err(config_err("SPA needs n ≥ 2 and layers ≥ 1"));
    }
    let mut b = Builder::new(Family::Spa, n)?;
    for _ in 0..cfg.layers {
        for start in [1, 0] {
            for lo in (start..n - 1).step_by(2) {
                let t = b.param();
                let p = b.param();
                push_a_gate(&mut b.circuit, lo, lo + 1, t, p)?;
            }
        }
    }
    Ok(b.finish())
}

pub fn spa_ansatz(n: usize, layers: usize) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Spa(SpaConfig { n, layers }))
}

fn require_spec<'a>(spec: &'a Option<HamiltonianSpec>, family: Family, key: &str, n: usize) -> Result<&'a HamiltonianSpec> {
    let s = spec.as_ref().ok_or_else(|| config_err(format!("{family} needs `{key}`")))?;
    if s.num_qubits() != n {
        return Err(Error::QubitMismatch { expected: n, got: s.num_qubits() });
    }
    Ok(s)
}

fn build_qaoa(cfg: &QaoaConfig) -> Result<Circuit> {
    let n = cfg.n;
    if cfg.layers < 1 {
        return Err(config_err("QAOA needs layers ≥ 1"));
    }
    let cost = require_spec(&cfg.cost, Family::Qaoa, "cost", n)?.build()?.sum;
    if cfg.mixer == Mixer::XMixer && !cost.is_diagonal() {
        return Err(config_err("x_mixer needs a diagonal cost (Z and ZZ terms only)"));
    }
    let mut b = Builder::new(Family::Qaoa, n)?;
    for q in 0..n {
        b.push(Gate::H, &[q])?;
    }
    for _ in 0..cfg.layers {
        let gamma = b.param();
        for (c, p) in cost.terms() {
            push_term(&mut b.circuit, p, gamma, 2.0 * c)?;
        }
        let beta = b.param();
        match cfg.mixer {
            Mixer::XMixer => {
                for q in 0..n {
                    b.push(Gate::RX(Angle::affine(beta, 2.0, 0.0)), &[q])?;
                }
            }
            Mixer::XyRing => {
                for (i, j) in ring_bonds(n) {
                    for l in [Pauli::X, Pauli::Y] {
                        let s = PauliString::new(n, [(i, l), (j, l)])?;
                        push_pauli_exponential(&mut b.circuit, &s, beta, 2.0)?;
                    }
                }
            }
        }
    }
    Ok(b.finish())
}

/// QAOA with cost unitary `Π exp(-iγ c_j P_j)` and the chosen mixer; parameters `γ_1, β_1, …`.
pub fn qaoa_ansatz(cost: &PauliSum, mixer: Mixer, p: usize) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Qaoa(QaoaConfig {
        n: cost.num_qubits(),
        layers: p,
        mixer,
        cost: Some(HamiltonianSpec::from_sum(cost)),
    }))
}

/// Bond-parity groups for chain models whose terms are listed bond by bond,
/// followed by single-site terms.
fn parity_groups(n: usize, boundary: Boundary, per_bond: usize, singles: usize) -> Vec<Vec<usize>> {
    let b = bonds(n, boundary);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (k, (i, _)) in b.iter().enumerate() {
        let target = if i % 2 == 0 { &mut even } else { &mut odd };
        target.extend(k * per_bond..(k + 1) * per_bond);
    }
    let mut groups = vec![even, odd];
    groups.retain(|g| !g.is_empty());
    if singles > 0 {
        let base = b.len() * per_bond;
        groups.push((base..base + singles).collect());
    }
    groups
}

/// Greedy partition: each term joins the first group it commutes with.
fn greedy_groups(h: &PauliSum) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, (_, p)) in h.terms().iter().enumerate() {
        match groups.iter_mut().find(|g| g.iter().all(|&i| h.terms()[i].1.commutes_with(p))) {
            Some(g) => g.push(k),
            None => groups.push(vec![k]),
        }
    }
    groups
}

fn default_groups(spec: &HamiltonianSpec, h: &PauliSum) -> Vec<Vec<usize>> {
    match spec {
        HamiltonianSpec::Tfim { n, g, boundary } if *g != 0.0 && h.len() == bonds(*n, *boundary).len() + n => {
            parity_groups(*n, *boundary, 1, *n)
        }
        HamiltonianSpec::Heisenberg { n, j, boundary } if *j != 0.0 => parity_groups(*n, *boundary, 3, 0),
        _ => greedy_groups(h),
    }
}

fn check_partition(h: &PauliSum, groups: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; h.len()];
    for g in groups {
        if g.is_empty() {
            return Err(config_err("empty HVA group"));
        }
        for &i in g {
            if i >= h.len() {
                return Err(config_err(format!("group index {i} exceeds {} terms", h.len())));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(config_err(format!("term {i} appears in two groups")));
            }
        }
        for (a, &i) in g.iter().enumerate() {
            for &j in &g[a + 1..] {
                if !h.terms()[i].1.commutes_with(&h.terms()[j].1) {
                    return Err(config_err(format!("terms {i} and {j} in one group do not commute")));
                }
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(config_err(format!("partition misses term {i} ({})", h.terms()[i].1)));
    }
    Ok(())
}

fn build_hva(cfg: &HvaConfig) -> Result<Circuit> {
    let n = cfg.n;
    if cfg.layers < 1 {
        return Err(config_err("HVA needs layers ≥ 1"));
    }
    let spec = require_spec(&cfg.hamiltonian, Family::Hva, "hamiltonian", n)?;
    let h = spec.build()?.sum;
    let groups = match &cfg.groups {
        Some(g) => g.clone(),
        None => default_groups(spec, &h),
    };
    check_partition(&h, &groups)?;
    let mut b = Builder::new(Family::Hva, n)?;
    for q in 0..n {
        match cfg.init {
            HvaInit::Plus => b.push(Gate::H, &[q])?,
            HvaInit::Neel if q % 2 == 1 => b.push(Gate::X, &[q])?,
            _ => {}
        }
    }
    for _ in 0..cfg.layers {
        for g in &groups {
            let p = b.param();
            for &i in g {
                let (c, s) = &h.terms()[i];
                push_term(&mut b.circuit, s, p, *c)?;
            }
        }
    }
    Ok(b.finish())
}

/// HVA over `h` with an explicit commuting partition (term indices).
pub fn hva_ansatz(h: &PauliSum, groups: Vec<Vec<usize>>, p: usize, init: HvaInit) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Hva(HvaConfig {
        n: h.num_qubits(),
        layers: p,
        hamiltonian: Some(HamiltonianSpec::from_sum(h)),
        groups: Some(groups),
        init,
    }))
}

/// HVA for the transverse-field Ising model: even-bond ZZ, odd-bond ZZ and
/// X groups after a Hadamard layer.
pub fn tfim_hva(n: usize, g: f64, boundary: Boundary, p: usize) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Hva(HvaConfig {
        n,
        layers: p,
        hamiltonian: Some(HamiltonianSpec::Tfim { n, g, boundary }),
        groups: None,
        init: HvaInit::Plus,
    }))
}

fn build_qce(cfg: &QceConfig) -> Result<Circuit> {
    let n = cfg.n;
    if cfg.features.len() > n {
        return Err(config_err(format!("{} features for {n} qubits", cfg.features.len())));
    }
    if cfg.layers < 1 {
        return Err(config_err("QCE needs layers ≥ 1"));
    }
    let mut b = Builder::new(Family::Qce, n)?;
    match cfg.mode {
        QceMode::Figure => {
            if n != 4 || cfg.features.len() > 3 {
                return Err(config_err("figure mode needs n = 4 and at most 3 features"));
            }
            for q in 0..3 {
                let x = cfg.features.get(q).copied().unwrap_or(0.0);
                b.push(Gate::RX(x.into()), &[q])?;
            }
            b.push(Gate::H, &[3])?;
            for _ in 0..cfg.layers {
                for pair in [[0, 1], [2, 3], [1, 2], [0, 3]] {
                    let p = b.param();
                    b.push(Gate::ZZ(Angle::param(p)), &pair)?;
                }
                for q in 0..4 {
                    b.rot(Pauli::Y, q)?;
                }
            }
        }
        QceMode::General => {
            for q in 0..n {
                match cfg.features.get(q) {
                    Some(&x) => b.push(Gate::RX(x.into()), &[q])?,
                    None => b.push(Gate::H, &[q])?,
                }
            }
            for _ in 0..cfg.layers {
                if n >= 2 {
                    for (i, j) in ring_bonds(n) {
                        let p = b.param();
                        b.push(Gate::ZZ(Angle::param(p)), &[i, j])?;
                    }
                }
                for q in 0..n {
                    b.rot(Pauli::Y, q)?;
                }
            }
        }
    }
    Ok(b.finish())
}

/// Data-embedding circuit for feature vector `x` followed by trainable layers.
pub fn qce_embedding(x: &[f64], n: usize, mode: QceMode, layers: usize) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Qce(QceConfig { n, features: x.to_vec(), mode, layers }))
}

fn power_of_two_in(n: usize, allowed: &[usize], family: Family) -> Result<()> {
    if !allowed.contains(&n) {
        return Err(config_err(format!("{family} needs n in {allowed:?}, got {n}")));
    }
    Ok(())
}

fn build_mera(cfg: &MeraConfig) -> Result<Circuit> {
    let n = cfg.n;
    power_of_two_in(n, &[2, 4, 8, 16], Family::Mera)?;
    let mut b = Builder::new(Family::Mera, n)?;
    for width in mera_widths(n) {
        let lo = (n - width) / 2;
        let active: Vec<usize> = (lo..lo + width).collect();
        for pair in active.chunks(2) {
            b.push(Gate::CNOT, &[pair[0], pair[1]])?;
        }
        for &q in &active {
            b.euler(q)?;
        }
        let odd: Vec<usize> = active[1..width - 1].to_vec();
        for pair in odd.chunks(2) {
            b.push(Gate::CNOT, &[pair[0], pair[1]])?;
        }
        for &q in &odd {
            b.euler(q)?;
        }
    }
    Ok(b.finish())
}

/// Active widths of the MERA super-layers, innermost first: `2, 4, ..., n`.
pub fn mera_widths(n: usize) -> Vec<usize> {
    std::iter::successors(Some(2usize), |w| Some(w * 2)).take_while(|&w| w <= n).collect()
}

/// MERA circuit growing from the two central wires outward, `log2 n` super-layers.
pub fn mera_ansatz(n: usize) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Mera(MeraConfig { n }))
}

/// Two-qubit block `U3⊗U3 · CNOT · U3⊗U3` over twelve given parameters.
fn push_conv(c: &mut Circuit, a: usize, b: usize, p: &[usize]) -> Result<()> {
    let u3 = |k: usize| Gate::U3(Angle::param(p[k]), Angle::param(p[k + 1]), Angle::param(p[k + 2]));
    c.push(u3(0), &[a])?;
    c.push(u3(3), &[b])?;
    c.push(Gate::CNOT, &[a, b])?;
    c.push(u3(6), &[a])?;
    c.push(u3(9), &[b])?;
    Ok(())
}

fn active_after_pool(active: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let m = active.len();
    let keep = active[m / 4..3 * m / 4].to_vec();
    let mut pooled = Vec::new();
    for &q in &active[..m / 4] {
        pooled.push((q, keep[0]));
    }
    for &q in &active[3 * m / 4..] {
        pooled.push((q, *keep.last().expect("non-empty")));
    }
    (keep, pooled)
}

fn build_qcnn(cfg: &QcnnConfig) -> Result<Circuit> {
    let n = cfg.n;
    power_of_two_in(n, &[4, 8, 16], Family::Qcnn)?;
    let mut b = Builder::new(Family::Qcnn, n)?;
    let mut active: Vec<usize> = (0..n).collect();
    while active.len() > 2 {
        let conv: Vec<usize> = (0..12).map(|_| b.param()).collect();
        let v: Vec<usize> = (0..3).map(|_| b.param()).collect();
        for pair in active[1..active.len() - 1].chunks(2) {
            push_conv(&mut b.circuit, pair[0], pair[1], &conv)?;
        }
        for pair in active.chunks(2) {
            push_conv(&mut b.circuit, pair[0], pair[1], &conv)?;
        }
        let (keep, pooled) = active_after_pool(&active);
        for (m, s) in pooled {
            let gates = [Gate::RZ(Angle::param(v[0])), Gate::RY(Angle::param(v[1])), Gate::RZ(Angle::param(v[2]))];
            if cfg.measured {
                let r = b.circuit.measure(m)?;
                for g in gates {
                    b.circuit.push_conditioned(g, &[s], r)?;
                }
            } else {
                for g in gates {
                    b.push(Gate::controlled(1, g), &[m, s])?;
                }
            }
        }
        active = keep;
    }
    let f: Vec<usize> = (0..12).map(|_| b.param()).collect();
    push_conv(&mut b.circuit, active[0], active[1], &f)?;
    Ok(b.finish())
}

pub fn qcnn_ansatz(n: usize, measured: bool) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Qcnn(QcnnConfig { n, measured }))
}

/// Qubit whose `⟨Z⟩` is the QCNN output.
pub fn qcnn_readout(n: usize) -> usize {
    n / 2 - 1
}

fn build_qnn(cfg: &QnnConfig) -> Result<Circuit> {
    if cfg.n != 4 {
        return Err(config_err(format!("QNN filters act on 2×2 patches and need n = 4, got {}", cfg.n)));
    }
    if cfg.layers < 1 {
        return Err(config_err("QNN needs layers ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut b = Builder::new(Family::Qnn, 4)?;
    for _ in 0..cfg.layers {
        for q in 0..4 {
            let axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
            b.rot(axis, q)?;
        }
        let mut order = [0usize, 1, 2, 3];
        order.shuffle(&mut rng);
        b.push(Gate::CNOT, &[order[0], order[1]])?;
        b.push(Gate::CNOT, &[order[2], order[3]])?;
    }
    Ok(b.finish())
}

/// Seeded random variational filter for quanvolution.
pub fn qnn_filter(layers: usize, seed: u64) -> Result<AnsatzBlueprint> {
    AnsatzBlueprint::new(AnsatzConfig::Qnn(QnnConfig { n: 4, layers, seed }))
}
