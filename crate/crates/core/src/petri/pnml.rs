//! PNML (P/T subset) reader.
//!
//! Pages are flattened, graphics are ignored. A `<toolspecific tool="nupn">`
//! section, when present and well formed, supplies the unit partition.

use std::collections::HashMap;

use roxmltree::{Document, Node};
use thiserror::Error;

use super::net::{NetBuilder, NetError, PetriNet};

#[derive(Debug, Error)]
pub enum PnmlError {
    #[error("malformed XML: {0}")]
    Xml(#[from] roxmltree::Error),
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("no <net> element found")]
    NoNet,
    #[error("unsupported net type '{0}' (only P/T nets are handled)")]
    NetType(String),
    #[error("element <{0}> without id")]
    MissingId(&'static str),
    #[error("invalid integer '{text}' in {context}")]
    BadInteger { text: String, context: String },
    #[error("arc '{arc}' references undeclared node '{node}'")]
    UndeclaredNode { arc: String, node: String },
    #[error("arc '{0}' must connect a place and a transition")]
    BadArc(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

/// Result of reading a PNML file: the net plus any non-fatal diagnostics.
#[derive(Debug)]
pub struct PnmlDocument {
    pub net: PetriNet,
    pub warnings: Vec<String>,
}

enum NodeRef {
    Place(usize),
    Transition(usize),
}

pub fn parse_pnml(bytes: &[u8]) -> Result<PnmlDocument, PnmlError> {
    let text = std::str::from_utf8(bytes).map_err(|_| PnmlError::Utf8)?;
    let doc = Document::parse(text)?;
    let net_node = doc
        .descendants()
        .find(|n| n.has_tag_name("net"))
        .ok_or(PnmlError::NoNet)?;
    if let Some(ty) = net_node.attribute("type") {
        if !ty.contains("ptnet") {
            return Err(PnmlError::NetType(ty.to_string()));
        }
    }

    let mut builder = NetBuilder::new();
    let mut ids: HashMap<String, NodeRef> = HashMap::new();
    let mut arcs = Vec::new();
    let mut nupn = None;

    for node in net_node.descendants() {
        match node.tag_name().name() {
            "place" => {
                let id = node.attribute("id").ok_or(PnmlError::MissingId("place"))?;
                let tokens = match child_text(node, "initialMarking") {
                    Some(t) => parse_int(t, || format!("initial marking of '{id}'"))?,
                    None => 0,
                };
                let p = builder.place(id, tokens);
                ids.insert(id.to_string(), NodeRef::Place(p));
            }
            "transition" => {
                let id = node.attribute("id").ok_or(PnmlError::MissingId("transition"))?;
                let t = builder.transition(id);
                ids.insert(id.to_string(), NodeRef::Transition(t));
            }
            "arc" => arcs.push(node),
            "toolspecific" if node.attribute("tool") == Some("nupn") => nupn = Some(node),
            _ => {}
        }
    }

    for arc in arcs {
        let id = arc.attribute("id").unwrap_or("?").to_string();
        let endpoint = |attr: &str| -> Result<&NodeRef, PnmlError> {
            let name = arc.attribute(attr).unwrap_or_default();
            ids.get(name).ok_or_else(|| PnmlError::UndeclaredNode {
                arc: id.clone(),
                node: name.to_string(),
            })
        };
        let weight = match child_text(arc, "inscription") {
            Some(t) => parse_int(t, || format!("inscription of arc '{id}'"))?,
            None => 1,
        };
        match (endpoint("source")?, endpoint("target")?) {
            (NodeRef::Place(p), NodeRef::Transition(t)) => {
                builder.input(*p, *t, weight);
            }
            (NodeRef::Transition(t), NodeRef::Place(p)) => {
                builder.output(*t, *p, weight);
            }
            _ => return Err(PnmlError::BadArc(id)),
        }
    }

    let mut warnings = Vec::new();
    if let Some(section) = nupn {
        match read_units(section, &ids) {
            Ok((units, safe)) => {
                let mut trial = NetBuilder::new();
                // Validate the partition on a throwaway builder first so a bad
                // unit section never poisons the net itself.
                let n_places = ids.values().filter(|r| matches!(r, NodeRef::Place(_))).count();
                for i in 0..n_places {
                    trial.place(format!("#{i}"), 0);
                }
                for (name, places) in &units {
                    trial.unit(name.clone(), places.clone());
                }
                match trial.build() {
                    Ok(_) => {
                        for (name, places) in units {
                            builder.unit(name, places);
                        }
                        builder.declare_safe(safe);
                    }
                    Err(e) => warnings.push(format!("ignoring NUPN units: {e}")),
                }
            }
            Err(msg) => warnings.push(format!("ignoring NUPN units: {msg}")),
        }
    }
    let net = builder.build()?;
    Ok(PnmlDocument { net, warnings })
}

/// Writes `net` as a PNML P/T net, including its NUPN units if any.
/// Place and transition names become element ids.
pub fn write_pnml(net: &PetriNet, id: &str) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n");
    let _ = writeln!(
        out,
        "  <net id=\"{}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">",
        escape(id)
    );
    out.push_str("    <page id=\"page0\">\n");
    for (p, place) in net.places().iter().enumerate() {
        let m = net.initial_marking()[p];
        if m == 0 {
            let _ = writeln!(out, "      <place id=\"{}\"/>", escape(&place.name));
        } else {
            let _ = writeln!(
                out,
                "      <place id=\"{}\"><initialMarking><text>{m}</text></initialMarking></place>",
                escape(&place.name)
            );
        }
    }
    for t in net.transitions() {
        let _ = writeln!(out, "      <transition id=\"{}\"/>", escape(&t.name));
    }
    let mut k = 0;
    let mut arc = |out: &mut String, src: &str, dst: &str, w: u32| {
        k += 1;
        let ins = if w == 1 {
            String::new()
        } else {
            format!("<inscription><text>{w}</text></inscription>")
        };
        let _ = writeln!(
            out,
            "      <arc id=\"a{k}\" source=\"{}\" target=\"{}\">{ins}</arc>",
            escape(src),
            escape(dst)
        );
    };
    for t in net.transitions() {
        for a in &t.pre {
            arc(&mut out, &net.places()[a.place].name, &t.name, a.weight);
        }
        for a in &t.post {
            arc(&mut out, &t.name, &net.places()[a.place].name, a.weight);
        }
    }
    out.push_str("    </page>\n");
    if let Some(units) = net.units() {
        out.push_str("    <toolspecific tool=\"nupn\" version=\"1.1\">\n");
        let _ = writeln!(
            out,
            "      <structure units=\"{}\" safe=\"{}\">",
            units.len(),
            net.declared_safe()
        );
        for u in units {
            let names: Vec<String> = u.places.iter().map(|&p| escape(&net.places()[p].name)).collect();
            let _ = writeln!(
                out,
                "        <unit id=\"{}\"><places>{}</places></unit>",
                escape(&u.name),
                names.join(" ")
            );
        }
        out.push_str("      </structure>\n    </toolspecific>\n");
    }
    out.push_str("  </net>\n</pnml>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn read_units(
    section: Node,
    ids: &HashMap<String, NodeRef>,
) -> Result<(Vec<(String, Vec<usize>)>, bool), String> {
    let structure = section
        .children()
        .find(|n| n.has_tag_name("structure"))
        .ok_or("missing <structure>")?;
    let safe = structure.attribute("safe") == Some("true");
    let mut units = Vec::new();
    for unit in structure.children().filter(|n| n.has_tag_name("unit")) {
        let name = unit.attribute("id").ok_or("unit without id")?.to_string();
        let mut places = Vec::new();
        if let Some(list) = unit.children().find(|n| n.has_tag_name("places")) {
            for pid in list.text().unwrap_or_default().split_whitespace() {
                match ids.get(pid) {
                    Some(NodeRef::Place(p)) => places.push(*p),
                    _ => return Err(format!("unit '{name}' lists unknown place '{pid}'")),
                }
            }
        }
        units.push((name, places));
    }
    Ok((units, safe))
}

/// Text of `<tag><text>..</text></tag>` directly under `node`.
fn child_text<'a>(node: Node<'a, 'a>, tag: &str) -> Option<&'a str> {
    let child = node.children().find(|n| n.has_tag_name(tag))?;
    child
        .descendants()
        .find(|n| n.has_tag_name("text"))
        .and_then(|n| n.text())
        .map(str::trim)
}

fn parse_int(text: &str, context: impl FnOnce() -> String) -> Result<u32, PnmlError> {
    text.trim().parse::<u32>().map_err(|_| PnmlError::BadInteger {
        text: text.to_string(),
        context: context(),
    })
}
