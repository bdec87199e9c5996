use std::path::{Path, PathBuf};

use ansatz_forge::ansatz::AnsatzConfig;
use ansatz_forge::sim::{to_qasm, ParameterBinding};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::{from_value, parse_json, read_text};
use crate::output::{to_json_pretty, write_atomic};

pub struct ExportArgs<'a> {
    /// Path to a blueprint config, `-` for standard input, or inline JSON.
    pub config: &'a str,
    pub binding: Option<PathBuf>,
    pub zeros: bool,
    pub deferred: bool,
    pub output: Option<PathBuf>,
    pub json: bool,
}

fn read_config(arg: &str) -> CliResult<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::io("<stdin>", e))?
    } else {
        read_text(Path::new(arg))?
    };
    parse_json(&text, "config")
}

/// A binding file is a `{name: value}` object or a run result carrying `best_params`.
fn read_binding(path: &Path) -> CliResult<ParameterBinding> {
    let mut v = parse_json(&read_text(path)?, &path.display().to_string())?;
    if let Some(inner) = v.get_mut("best_params") {
        return from_value(inner.take(), "best_params");
    }
    from_value(v, "binding")
}

pub fn cmd_export(args: ExportArgs) -> CliResult<()> {
    let mut config: AnsatzConfig = from_value(read_config(args.config)?, "config")?;
    if args.deferred {
        if let AnsatzConfig::Qcnn(c) = &mut config {
            c.measured = false;
        }
    }
    let circuit = config.build()?;
    if circuit.has_mid_circuit_measurement() {
        return Err(CliError::usage(
            "circuit has a mid-circuit measurement with classically conditioned gates; pass --deferred to export the coherent controlled form",
        ));
    }
    let binding = match (&args.binding, args.zeros) {
        (Some(_), true) => return Err(CliError::usage("--binding and --zeros are mutually exclusive")),
        (Some(path), false) => read_binding(path)?,
        (None, true) => ParameterBinding::zeros(&circuit),
        (None, false) if circuit.num_parameters() == 0 => ParameterBinding::new(),
        (None, false) => {
            return Err(CliError::usage(format!(
                "circuit has {} parameters; pass --binding <file> or --zeros",
                circuit.num_parameters()
            )))
        }
    };
    let qasm = to_qasm(&circuit, &binding)?;

    if let Some(out) = &args.output {
        let dir = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let name = out
            .file_name()
            .ok_or_else(|| CliError::usage(format!("--output {}: not a file path", out.display())))?;
        write_atomic(dir, &name.to_string_lossy(), qasm.as_bytes())?;
    }
    if args.json {
        let doc = json!({
            "family": config.family().name(),
            "num_qubits": circuit.num_qubits(),
            "num_parameters": circuit.num_parameters(),
            "output": args.output.as_ref().map(|p| p.display().to_string()),
            "qasm": qasm,
        });
        println!("{}", to_json_pretty(&doc));
    } else if args.output.is_none() {
        print!("{qasm}");
    }
    Ok(())
}
