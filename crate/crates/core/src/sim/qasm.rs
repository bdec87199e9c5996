//! OpenQASM 2.0 text export.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

use super::circuit::{Circuit, Operation, ParameterBinding};
use super::gate::{Angle, Gate};
use crate::error::{Error, Result};

/// Format like C's `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn q(i: usize) -> String {
    format!("q[{i}]")
}

fn emit_gate(out: &mut Vec<String>, gate: &Gate, t: &[usize]) -> Result<()> {
    let val = |a: &Angle| match a {
        Angle::Fixed(v) => Ok(*v),
        Angle::Param { .. } => Err(Error::Unbound(gate.name())),
    };
    let g = format_g17;
    match gate {
        Gate::H => out.push(format!("h {};", q(t[0]))),
        Gate::X => out.push(format!("x {};", q(t[0]))),
        Gate::Y => out.push(format!("y {};", q(t[0]))),
        Gate::Z => out.push(format!("z {};", q(t[0]))),
        Gate::S => out.push(format!("s {};", q(t[0]))),
        Gate::RX(a) => out.push(format!("rx({}) {};", g(val(a)?), q(t[0]))),
        Gate::RY(a) => out.push(format!("ry({}) {};", g(val(a)?), q(t[0]))),
        Gate::RZ(a) => out.push(format!("rz({}) {};", g(val(a)?), q(t[0]))),
        Gate::R2(theta, phi) => {
            out.push(format!("ry({}) {};", g(val(theta)? + FRAC_PI_2), q(t[0])));
            out.push(format!("rz({}) {};", g(val(phi)? + PI), q(t[0])));
        }
        Gate::U3(a, b, c) => {
            out.push(format!("u3({},{},{}) {};", g(val(a)?), g(val(b)?), g(val(c)?), q(t[0])))
        }
        Gate::ZZ(a) => {
            out.push(format!("cx {},{};", q(t[0]), q(t[1])));
            out.push(format!("rz({}) {};", g(val(a)?), q(t[1])));
            out.push(format!("cx {},{};", q(t[0]), q(t[1])));
        }
        Gate::CNOT => out.push(format!("cx {},{};", q(t[0]), q(t[1]))),
        Gate::CZ => out.push(format!("cz {},{};", q(t[0]), q(t[1]))),
        Gate::SWAP => {
            out.push(format!("cx {},{};", q(t[0]), q(t[1])));
            out.push(format!("cx {},{};", q(t[1]), q(t[0])));
            out.push(format!("cx {},{};", q(t[0]), q(t[1])));
        }
        Gate::Controlled { controls: 1, inner } => {
            let (c, tg) = (q(t[0]), q(t[1]));
            match inner.as_ref() {
                Gate::X => out.push(format!("cx {c},{tg};")),
                Gate::Y => out.push(format!("cy {c},{tg};")),
                Gate::Z => out.push(format!("cz {c},{tg};")),
                Gate::H => out.push(format!("ch {c},{tg};")),
                Gate::RZ(a) => out.push(format!("crz({}) {c},{tg};", g(val(a)?))),
                Gate::RY(a) => out.push(format!("cu3({},0,0) {c},{tg};", g(val(a)?))),
                Gate::RX(a) => out.push(format!(
                    "cu3({},{},{}) {c},{tg};",
                    g(val(a)?),
                    g(-FRAC_PI_2),
                    g(FRAC_PI_2)
                )),
                Gate::U3(a, b, l) => {
                    out.push(format!("cu3({},{},{}) {c},{tg};", g(val(a)?), g(val(b)?), g(val(l)?)))
                }
                _ => return Err(Error::Export(gate.name())),
            }
        }
        Gate::Controlled { controls: 2, inner } if matches!(inner.as_ref(), Gate::X) => {
            out.push(format!("ccx {},{},{};", q(t[0]), q(t[1]), q(t[2])))
        }
        Gate::Controlled { .. } => return Err(Error::Export(gate.name())),
    }
    Ok(())
}

/// Render `circuit` with `binding` as OpenQASM 2.0. Each measurement gets
/// its own one-bit register `m<k>` so conditioned gates can test it with
/// `if(m<k>==1)`.
pub fn to_qasm(circuit: &Circuit, binding: &ParameterBinding) -> Result<String> {
    let params = binding.resolve(circuit)?;
    let mut text = String::new();
    writeln!(text, "OPENQASM 2.0;").unwrap();
    writeln!(text, "include \"qelib1.inc\";").unwrap();
    writeln!(text, "qreg q[{}];", circuit.num_qubits()).unwrap();
    for k in 0..circuit.num_measurements() {
        writeln!(text, "creg m{k}[1];").unwrap();
    }
    let mut record = 0usize;
    for op in circuit.ops() {
        match op {
            Operation::Gate { gate, targets, condition } => {
                let mut lines = Vec::new();
                emit_gate(&mut lines, &gate.bind(&params), targets)?;
                for line in lines {
                    match condition {
                        Some(r) => writeln!(text, "if(m{r}==1) {line}").unwrap(),
                        None => writeln!(text, "{line}").unwrap(),
                    }
                }
            }
            Operation::Measure { qubit } => {
                writeln!(text, "measure q[{qubit}] -> m{record}[0];").unwrap();
                record += 1;
            }
        }
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::execute::{circuit_to_unitary, max_deviation_mod_phase};

    #[test]
    fn g17_formatting() {
        assert_eq!(format_g17(0.5), "0.5");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(FRAC_PI_2), "1.5707963267948966");
        assert_eq!(format_g17(-3.0), "-3");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(123456.0), "123456");
    }

    #[test]
    fn rx_and_cx_lines() {
        let mut c = Circuit::new(2);
        c.push(Gate::RX(0.5.into()), &[0]).unwrap();
        c.push(Gate::CNOT, &[0, 1]).unwrap();
        let text = to_qasm(&c, &ParameterBinding::new()).unwrap();
        assert!(text.starts_with("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\n"));
        assert!(text.lines().any(|l| l == "rx(0.5) q[0];"));
        assert!(text.lines().any(|l| l == "cx q[0],q[1];"));
    }

    #[test]
    fn zz_decomposition_matches_gate() {
        let theta = 0.813;
        let mut native = Circuit::new(2);
        native.push(Gate::ZZ(theta.into()), &[0, 1]).unwrap();
        let text = to_qasm(&native, &ParameterBinding::new()).unwrap();
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, vec!["cx q[0],q[1];", "rz(0.81299999999999994) q[1];", "cx q[0],q[1];"]);

        let mut decomposed = Circuit::new(2);
        decomposed.push(Gate::CNOT, &[0, 1]).unwrap();
        decomposed.push(Gate::RZ(theta.into()), &[1]).unwrap();
        decomposed.push(Gate::CNOT, &[0, 1]).unwrap();
        let a = circuit_to_unitary(&native, &ParameterBinding::new()).unwrap();
        let b = circuit_to_unitary(&decomposed, &ParameterBinding::new()).unwrap();
        assert!(max_deviation_mod_phase(&a, &b) < 1e-12);
    }

    #[test]
    fn conditionals_and_unmapped_gates() {
        let mut c = Circuit::new(2);
        c.push(Gate::H, &[0]).unwrap();
        let r = c.measure(0).unwrap();
        c.push_conditioned(Gate::X, &[1], r).unwrap();
        let text = to_qasm(&c, &ParameterBinding::new()).unwrap();
        assert!(text.contains("creg m0[1];\n"));
        assert!(text.contains("measure q[0] -> m0[0];\nif(m0==1) x q[1];\n"));

        let mut bad = Circuit::new(3);
        bad.push(Gate::controlled(2, Gate::RY(0.1.into())), &[0, 1, 2]).unwrap();
        match to_qasm(&bad, &ParameterBinding::new()) {
            Err(Error::Export(name)) => assert_eq!(name, "C2-RY"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn export_is_deterministic() {
        let mut c = Circuit::new(1);
        let p = c.param("t");
        c.push(Gate::RY(Angle::param(p)), &[0]).unwrap();
        let mut b = ParameterBinding::new();
        b.insert("t", 0.3);
        assert_eq!(to_qasm(&c, &b).unwrap(), to_qasm(&c, &b).unwrap());
    }
}
