//! The line-oriented variety description format.
//!
//! ```text
//! field p=2 k=2 modulus=x^2+x+1
//! space n=3
//! component name=twisted dim=1 deg=3 irreducible=yes
//!   poly x0*x2 - x1^2
//!   poly x1*x3 - x2^2
//! ```
//!
//! Everything after `#` is a comment. A value may contain spaces as long as
//! no word in it contains `=`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::gf::GaloisField;
use crate::mpoly::parse_poly;

use super::{Component, Irreducibility, Variety, VarietyError};

fn parse_err(line: usize, message: impl Into<String>) -> VarietyError {
    VarietyError::Parse {
        line,
        message: message.into(),
    }
}

fn key_values(line: usize, words: &[&str]) -> Result<Vec<(String, String)>, VarietyError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for w in words {
        match w.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(' ');
                    v.push_str(w);
                }
                None => return Err(parse_err(line, format!("expected key=value, found `{w}`"))),
            },
        }
    }
    Ok(out)
}

fn int_value<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, VarietyError> {
    v.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("`{key}` needs an integer, found `{v}`")))
}

struct Block {
    name: String,
    dim: Option<i64>,
    deg: Option<i64>,
    irreducible: Irreducibility,
    polys: Vec<(usize, String)>,
}

pub fn load_variety(doc: &str) -> Result<Variety, VarietyError> {
    let mut field: Option<Arc<GaloisField>> = None;
    let mut n: Option<usize> = None;
    let mut blocks: Vec<Block> = Vec::new();

    for (idx, raw) in doc.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        match head {
            "field" => {
                if field.is_some() {
                    return Err(parse_err(line, "duplicate `field` line"));
                }
                let (mut p, mut k, mut modulus) = (None, 1u32, None);
                for (key, v) in key_values(line, &words)? {
                    match key.as_str() {
                        "p" => p = Some(int_value::<u32>(line, "p", &v)?),
                        "k" => k = int_value(line, "k", &v)?,
                        "modulus" => modulus = Some(v),
                        other => return Err(parse_err(line, format!("unknown field key `{other}`"))),
                    }
                }
                let p = p.ok_or_else(|| parse_err(line, "`field` needs p="))?;
                field = Some(GaloisField::new(p, k, modulus.as_deref())?.shared());
            }
            "space" => {
                for (key, v) in key_values(line, &words)? {
                    match key.as_str() {
                        "n" => n = Some(int_value(line, "n", &v)?),
                        other => return Err(parse_err(line, format!("unknown space key `{other}`"))),
                    }
                }
                if n.is_none() {
                    return Err(parse_err(line, "`space` needs n="));
                }
            }
            "component" => {
                let mut b = Block {
                    name: format!("X{}", blocks.len() + 1),
                    dim: None,
                    deg: None,
                    irreducible: Irreducibility::Unstated,
                    polys: Vec::new(),
                };
                for (key, v) in key_values(line, &words)? {
                    match key.as_str() {
                        "name" => b.name = v,
                        "dim" => b.dim = Some(int_value(line, "dim", &v)?),
                        "deg" => b.deg = Some(int_value(line, "deg", &v)?),
                        "irreducible" => {
                            b.irreducible = match v.as_str() {
                                "yes" => Irreducibility::Yes,
                                "declared" => Irreducibility::Declared,
                                _ => return Err(parse_err(line, "irreducible= takes yes or declared")),
                            }
                        }
                        other => return Err(parse_err(line, format!("unknown component key `{other}`"))),
                    }
                }
                if blocks.iter().any(|o| o.name == b.name) {
                    return Err(parse_err(line, format!("duplicate component name `{}`", b.name)));
                }
                blocks.push(b);
            }
            "poly" => {
                let b = blocks
                    .last_mut()
                    .ok_or_else(|| parse_err(line, "`poly` outside a component"))?;
                if rest.trim().is_empty() {
                    return Err(parse_err(line, "empty polynomial"));
                }
                b.polys.push((line, rest.trim().to_string()));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }

    let field = field.ok_or_else(|| parse_err(0, "missing `field` line"))?;
    let n = n.ok_or_else(|| parse_err(0, "missing `space` line"))?;
    let mut components = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut gens = Vec::with_capacity(b.polys.len());
        for (line, text) in &b.polys {
            gens.push(parse_poly(text, &field, n + 1).map_err(|e| parse_err(*line, e.to_string()))?);
        }
        components.push(Component::new(
            &b.name,
            &field,
            n + 1,
            gens,
            b.dim,
            b.deg,
            b.irreducible,
        )?);
    }
    Variety::new(field, n, components)
}

/// One component block for [`write_variety`].
#[derive(Debug, Clone)]
pub struct ComponentDoc {
    pub name: String,
    pub dim: Option<i64>,
    pub deg: Option<i64>,
    pub irreducible: bool,
    pub polys: Vec<String>,
}

/// Renders a document that [`load_variety`] reads back.
pub fn write_variety(field: &GaloisField, n: usize, comps: &[ComponentDoc]) -> String {
    let mut out = String::new();
    let _ = write!(out, "field p={} k={}", field.characteristic(), field.degree());
    if let Some(m) = field.modulus_text() {
        let _ = write!(out, " modulus={}", m.replace(' ', ""));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "space n={n}");
    for c in comps {
        let _ = write!(out, "component name={}", c.name);
        if let Some(d) = c.dim {
            let _ = write!(out, " dim={d}");
        }
        if let Some(d) = c.deg {
            let _ = write!(out, " deg={d}");
        }
        if c.irreducible {
            out.push_str(" irreducible=yes");
        }
        out.push('\n');
        for p in &c.polys {
            let _ = writeln!(out, "  poly {p}");
        }
    }
    out
}

impl Variety {
    pub fn to_document(&self) -> String {
        let comps: Vec<ComponentDoc> = self
            .components
            .iter()
            .map(|c| ComponentDoc {
                name: c.name.clone(),
                dim: c.declared_dim,
                deg: c.declared_deg,
                irreducible: c.irreducible != Irreducibility::Unstated,
                polys: c.ideal.iter().map(|p| p.to_text()).collect(),
            })
            .collect();
        write_variety(&self.field, self.n, &comps)
    }
}
