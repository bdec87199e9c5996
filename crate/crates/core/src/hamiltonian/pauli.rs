use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis; qubits absent from `letters`
/// carry the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliString {
    num_qubits: usize,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self { num_qubits, letters: BTreeMap::new() }
    }

    pub fn new(num_qubits: usize, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in letters {
            if q >= num_qubits {
                return Err(Error::TargetOutOfRange { qubit: q, num_qubits });
            }
            if map.insert(q, p).is_some() {
                return Err(Error::DuplicateTarget(q));
            }
        }
        Ok(Self { num_qubits, letters: map })
    }

    pub fn single(num_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::new(num_qubits, [(qubit, p)])
    }

    /// Parse a whitespace-separated list like `"X0 Z3"`; `""` or `"I"` is the identity.
    pub fn parse(s: &str, num_qubits: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok.eq_ignore_ascii_case("I") {
                continue;
            }
            let mut chars = tok.chars();
            let p = chars
                .next()
                .and_then(Pauli::from_letter)
                .ok_or_else(|| Error::PauliParse(tok.to_string()))?;
            let q: usize = chars.as_str().parse().map_err(|_| Error::PauliParse(tok.to_string()))?;
            letters.push((q, p));
        }
        Self::new(num_qubits, letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn letters(&self) -> &BTreeMap<usize, Pauli> {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        self.letters.get(&q).copied()
    }

    /// (x-mask, z-mask) symplectic form: X → x, Z → z, Y → both.
    pub fn masks(&self) -> (usize, usize) {
        self.letters.iter().fold((0, 0), |(x, z), (&q, &p)| match p {
            Pauli::X => (x | 1 << q, z),
            Pauli::Y => (x | 1 << q, z | 1 << q),
            Pauli::Z => (x, z | 1 << q),
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .filter(|(q, p)| other.get(**q).is_some_and(|o| o != **p))
            .count();
        anti % 2 == 0
    }

    pub fn is_diagonal(&self) -> bool {
        self.letters.values().all(|&p| p == Pauli::Z)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.letters.iter().map(|(q, p)| format!("{}{}", p.letter(), q)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Real-weighted sum of distinct Pauli strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, terms: Vec::new() }
    }

    /// Build from possibly repeated terms: duplicates are summed in first-seen
    /// order and zero coefficients dropped.
    pub fn from_terms(num_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut order: Vec<(f64, PauliString)> = Vec::new();
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        for (c, p) in terms {
            if p.num_qubits() != num_qubits {
                return Err(Error::QubitMismatch { expected: num_qubits, got: p.num_qubits() });
            }
            if !c.is_finite() {
                return Err(Error::Invalid(format!("non-finite coefficient for {p}")));
            }
            match index.get(&p) {
                Some(&i) => order[i].0 += c,
                None => {
                    index.insert(p.clone(), order.len());
                    order.push((c, p));
                }
            }
        }
        order.retain(|(c, _)| *c != 0.0);
        Ok(Self { num_qubits, terms: order })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_diagonal())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_terms(self.num_qubits, self.terms.iter().map(|(c, p)| (c * s, p.clone())))
            .expect("scaling preserves validity")
    }

    /// Parse terms like `coeff  X0 Z3`, one or more per line. Terms on one
    /// line are joined by standalone `+` / `-`; a missing coefficient is 1.
    /// Blank lines and `#` comments are skipped. The qubit count is the
    /// explicit `num_qubits` if given, otherwise one more than the largest
    /// index mentioned.
    pub fn parse(text: &str, num_qubits: Option<usize>) -> Result<Self> {
        let mut raw = Vec::new();
        let mut max_q = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            for (sign, tokens) in split_terms(line) {
                let bad = || Error::PauliParse(format!("line {}: malformed term in `{line}`", lineno + 1));
                let (coef, letters) = match tokens.first().map(|t| t.parse::<f64>()) {
                    Some(Ok(c)) => (c, &tokens[1..]),
                    Some(Err(_)) => (1.0, &tokens[..]),
                    None => return Err(bad()),
                };
                if !coef.is_finite() {
                    return Err(bad());
                }
                let rest = letters.join(" ");
                let probe = PauliString::parse(&rest, usize::MAX)?;
                if let Some(&q) = probe.letters().keys().next_back() {
                    max_q = max_q.max(q + 1);
                }
                raw.push((sign * coef, rest));
            }
        }
        let n = num_qubits.unwrap_or(max_q.max(1));
        let terms = raw
            .into_iter()
            .map(|(c, s)| PauliString::parse(&s, n).map(|p| (c, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, terms)
    }

    pub fn to_text(&self) -> String {
        self.terms.iter().map(|(c, p)| format!("{c}  {p}\n")).collect()
    }
}

fn split_terms(line: &str) -> Vec<(f64, Vec<&str>)> {
    let mut out = vec![(1.0, Vec::new())];
    for tok in line.split_whitespace() {
        match tok {
            "+" | "-" => out.push((if tok == "-" { -1.0 } else { 1.0 }, Vec::new())),
            _ => out.last_mut().expect("non-empty").1.push(tok),
        }
    }
    if out[0].1.is_empty() && out.len() > 1 {
        out.remove(0);
    }
    out
}
