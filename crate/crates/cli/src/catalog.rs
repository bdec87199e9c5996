use ansatz_forge::ansatz::{catalog_list, catalog_show, suggestions, CatalogEntry, VqaClass};
use ansatz_forge::Error;

use crate::error::{CliError, CliResult};
use crate::output::to_json_pretty;

pub fn cmd_list(json: bool) -> CliResult<()> {
    let list = catalog_list();
    if json {
        println!("{}", to_json_pretty(&list));
        return Ok(());
    }
    for class in [VqaClass::Vqe, VqaClass::Qaoa, VqaClass::Qml] {
        println!("{}", class.name());
        for e in list.iter().filter(|e| e.vqa_class == class) {
            println!("  {:<6}{}", e.family.name(), e.title);
            println!("        {}", e.description);
        }
    }
    Ok(())
}

pub fn cmd_show(family: &str, json: bool) -> CliResult<()> {
    let entry = catalog_show(family).map_err(|e| match e {
        Error::UnknownFamily { name, valid } => {
            let close = suggestions(&name);
            let hint = if close.is_empty() {
                format!("valid families: {}", valid.join(", "))
            } else {
                format!("did you mean: {}? valid families: {}", close.join(", "), valid.join(", "))
            };
            CliError::usage(format!("unknown ansatz family `{name}`; {hint}"))
        }
        other => other.into(),
    })?;
    if json {
        println!("{}", to_json_pretty(&entry));
    } else {
        print_entry(&entry);
    }
    Ok(())
}

fn print_entry(e: &CatalogEntry) {
    println!("{} ({}), {}", e.family.name(), e.title, e.vqa_class.name());
    println!();
    println!("Description:   {}", e.description);
    println!("Intent:        {}", e.intent);
    println!("Applicability: {}", e.applicability);
    println!("References:    {}", e.references.join(", "));
    if !e.extensions.is_empty() {
        println!("Extensions:    {}", e.extensions.join(", "));
    }
    println!();
    println!("Config schema:");
    println!("{}", to_json_pretty(&e.config_schema));
    println!("Example config:");
    println!("{}", to_json_pretty(&e.example_config));
}
