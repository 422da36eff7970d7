//! Line-oriented structure file format.
//!
//! ```text
//! # comments start with '#'
//! DOMAINS
//! S bounded
//! U1 quasiline
//! U2 unbounded nonquasiline frontier
//! NESTING
//! U1 < S
//! ORTHO
//! U1 _|_ U2
//! CONTAINERS
//! U1 -> S
//! ACTION
//! gen a: U1 -> U2
//! orbits <= 2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Domain, IndexStructure, StructureError};

/// Raw `ACTION` section: partial permutations per generator plus the
/// declared bound on the number of orbits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionSpec {
    pub generators: Vec<(String, Vec<(String, String)>)>,
    pub orbit_bound: Option<usize>,
}

impl ActionSpec {
    pub fn generator_names(&self) -> Vec<&str> {
        self.generators.iter().map(|(n, _)| n.as_str()).collect()
    }

    fn entry(&mut self, name: &str) -> &mut Vec<(String, String)> {
        if let Some(i) = self.generators.iter().position(|(n, _)| n == name) {
            &mut self.generators[i].1
        } else {
            self.generators.push((name.to_string(), Vec::new()));
            &mut self.generators.last_mut().unwrap().1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFile {
    pub structure: IndexStructure,
    pub action: Option<ActionSpec>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Domains,
    Nesting,
    Ortho,
    Containers,
    Action,
}

pub fn parse_structure_file(text: &str) -> Result<StructureFile, StructureError> {
    let mut section = Section::None;
    let mut domains: Vec<Domain> = Vec::new();
    let mut nesting = Vec::new();
    let mut ortho = Vec::new();
    let mut containers = Vec::new();
    let mut action: Option<ActionSpec> = None;
    let mut seen_nest = BTreeSet::new();
    let mut seen_ortho = BTreeSet::new();
    let mut seen_gen: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |m: &str| StructureError::Syntax { line: line_no, message: m.to_string() };
        match line {
            "DOMAINS" => {
                section = Section::Domains;
                continue;
            }
            "NESTING" => {
                section = Section::Nesting;
                continue;
            }
            "ORTHO" => {
                section = Section::Ortho;
                continue;
            }
            "CONTAINERS" => {
                section = Section::Containers;
                continue;
            }
            "ACTION" => {
                section = Section::Action;
                action.get_or_insert_with(ActionSpec::default);
                continue;
            }
            _ => {}
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::None => return Err(syntax("content before any section header")),
            Section::Domains => {
                let id = tokens[0];
                let mut bounded = None;
                let mut quasiline = None;
                let mut frontier = false;
                for flag in &tokens[1..] {
                    match *flag {
                        "bounded" | "unbounded" => {
                            let b = *flag == "bounded";
                            if bounded.is_some_and(|old| old != b) {
                                return Err(syntax("conflicting boundedness flags"));
                            }
                            bounded = Some(b);
                        }
                        "quasiline" => {
                            quasiline = Some(true);
                            if bounded == Some(true) {
                                return Err(syntax("a quasiline cannot be bounded"));
                            }
                            bounded = Some(false);
                        }
                        "nonquasiline" => quasiline = Some(false),
                        "frontier" => frontier = true,
                        other => return Err(syntax(&format!("unknown domain flag `{other}`"))),
                    }
                }
                let bounded = bounded.ok_or_else(|| StructureError::MissingBoundedness(id.to_string()))?;
                if domains.iter().any(|d| d.id == id) {
                    return Err(StructureError::Duplicate(format!("domain `{id}`")));
                }
                domains.push(Domain { id: id.to_string(), bounded, quasiline, frontier });
            }
            Section::Nesting => {
                let [u, "<", v] = tokens.as_slice() else {
                    return Err(syntax("expected `U < V`"));
                };
                if !seen_nest.insert((u.to_string(), v.to_string())) {
                    return Err(StructureError::Duplicate(format!("nesting `{u} < {v}`")));
                }
                nesting.push((u.to_string(), v.to_string()));
            }
            Section::Ortho => {
                let [u, "_|_", v] = tokens.as_slice() else {
                    return Err(syntax("expected `U _|_ V`"));
                };
                let key = if u <= v { (u.to_string(), v.to_string()) } else { (v.to_string(), u.to_string()) };
                if !seen_ortho.insert(key) {
                    return Err(StructureError::Duplicate(format!("orthogonality `{u} _|_ {v}`")));
                }
                ortho.push((u.to_string(), v.to_string()));
            }
            Section::Containers => {
                let [u, "->", w] = tokens.as_slice() else {
                    return Err(syntax("expected `U -> W`"));
                };
                containers.push((u.to_string(), w.to_string()));
            }
            Section::Action => {
                let spec = action.as_mut().expect("ACTION header creates the spec");
                match tokens.as_slice() {
                    ["orbits", "<=", k] => {
                        let k: usize = k.parse().map_err(|_| syntax("orbit bound must be a non-negative integer"))?;
                        if spec.orbit_bound.replace(k).is_some() {
                            return Err(StructureError::Duplicate("orbit bound".into()));
                        }
                    }
                    ["gen", name, u, "->", v] if name.ends_with(':') => {
                        let name = name.trim_end_matches(':');
                        if name.is_empty() {
                            return Err(syntax("empty generator name"));
                        }
                        if !seen_gen.entry(name.to_string()).or_default().insert(u.to_string()) {
                            return Err(StructureError::Duplicate(format!("image of `{u}` under `{name}`")));
                        }
                        spec.entry(name).push((u.to_string(), v.to_string()));
                    }
                    _ => return Err(syntax("expected `gen <name>: U -> V` or `orbits <= k`")),
                }
            }
        }
    }
    let structure = IndexStructure::new(domains, &nesting, &ortho, &containers)?;
    if let Some(spec) = &action {
        for (_, map) in &spec.generators {
            for (u, v) in map {
                structure.index_of(u)?;
                structure.index_of(v)?;
            }
        }
    }
    Ok(StructureFile { structure, action })
}

/// Writes a structure (and optionally an action) in the file format read by
/// [`parse_structure_file`].
pub fn render_structure_file(s: &IndexStructure, action: Option<&ActionSpec>) -> String {
    let mut out = String::new();
    out.push_str("DOMAINS\n");
    for d in s.domains() {
        let mut flags = Vec::new();
        match (d.bounded, d.quasiline) {
            (false, Some(true)) => flags.push("quasiline"),
            (true, q) => {
                flags.push("bounded");
                if q == Some(false) {
                    flags.push("nonquasiline");
                }
            }
            (false, q) => {
                flags.push("unbounded");
                if q == Some(false) {
                    flags.push("nonquasiline");
                }
            }
        }
        if d.frontier {
            flags.push("frontier");
        }
        let _ = writeln!(out, "{} {}", d.id, flags.join(" "));
    }
    out.push_str("NESTING\n");
    for (u, v) in s.declared_nesting() {
        let _ = writeln!(out, "{} < {}", s.id(u), s.id(v));
    }
    out.push_str("ORTHO\n");
    for (u, v) in s.declared_orthogonality() {
        let _ = writeln!(out, "{} _|_ {}", s.id(u), s.id(v));
    }
    out.push_str("CONTAINERS\n");
    for u in 0..s.len() {
        if let Some(w) = s.container(u) {
            let _ = writeln!(out, "{} -> {}", s.id(u), s.id(w));
        }
    }
    if let Some(a) = action {
        out.push_str("ACTION\n");
        for (name, map) in &a.generators {
            for (u, v) in map {
                let _ = writeln!(out, "gen {name}: {u} -> {v}");
            }
        }
        if let Some(k) = a.orbit_bound {
            let _ = writeln!(out, "orbits <= {k}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: &str = "\
# Z^2 with its standard structure
DOMAINS
S bounded
U1 quasiline
U2 quasiline
NESTING
U1 < S
U2 < S
ORTHO
U1 _|_ U2
CONTAINERS
U1 -> S
U2 -> S
ACTION
gen e1: S -> S
orbits <= 3
";

    #[test]
    fn parses_z2() {
        let f = parse_structure_file(Z2).unwrap();
        assert_eq!(f.structure.len(), 3);
        assert!(f.structure.domain(f.structure.index_of("U1").unwrap()).quasiline == Some(true));
        let a = f.action.unwrap();
        assert_eq!(a.orbit_bound, Some(3));
        assert_eq!(a.generator_names(), vec!["e1"]);
    }

    #[test]
    fn round_trip() {
        let f = parse_structure_file(Z2).unwrap();
        let text = render_structure_file(&f.structure, f.action.as_ref());
        assert_eq!(parse_structure_file(&text).unwrap(), f);
    }

    #[test]
    fn rejects_duplicates_and_dangling_ids() {
        let dup = "DOMAINS\nS bounded\nS bounded\n";
        assert!(matches!(parse_structure_file(dup), Err(StructureError::Duplicate(_))));
        let dup_ortho = "DOMAINS\nS bounded\nA unbounded\nB unbounded\nORTHO\nA _|_ B\nB _|_ A\n";
        assert!(matches!(parse_structure_file(dup_ortho), Err(StructureError::Duplicate(_))));
        let dangling = "DOMAINS\nS bounded\nNESTING\nX < S\n";
        assert_eq!(parse_structure_file(dangling), Err(StructureError::UnknownDomain("X".into())));
        let no_flag = "DOMAINS\nS\n";
        assert_eq!(parse_structure_file(no_flag), Err(StructureError::MissingBoundedness("S".into())));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let bad = "DOMAINS\nS bounded\nNESTING\nS << T\n";
        assert!(matches!(parse_structure_file(bad), Err(StructureError::Syntax { line: 4, .. })));
        assert!(matches!(parse_structure_file("S bounded\n"), Err(StructureError::Syntax { line: 1, .. })));
    }
}
