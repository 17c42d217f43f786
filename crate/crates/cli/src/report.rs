//! Reports: one ordered structure rendered both as line-oriented text and
//! as a TOML dump with the same keys.

use toml::{Table, Value as TomlValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Text(String),
    Int(i64),
    Bool(bool),
    List(Vec<String>),
}

impl From<String> for Entry {
    fn from(s: String) -> Self {
        Entry::Text(s)
    }
}

impl From<&str> for Entry {
    fn from(s: &str) -> Self {
        Entry::Text(s.to_string())
    }
}

impl From<bool> for Entry {
    fn from(b: bool) -> Self {
        Entry::Bool(b)
    }
}

impl From<usize> for Entry {
    fn from(n: usize) -> Self {
        Entry::Int(n as i64)
    }
}

impl From<u32> for Entry {
    fn from(n: u32) -> Self {
        Entry::Int(n as i64)
    }
}

impl From<Vec<String>> for Entry {
    fn from(v: Vec<String>) -> Self {
        Entry::List(v)
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    pub name: String,
    /// Rendered as an array of tables in the dump.
    pub repeated: bool,
    pub entries: Vec<(String, Entry)>,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Section { name: name.to_string(), repeated: false, entries: Vec::new() }
    }

    pub fn repeated(name: &str) -> Self {
        Section { repeated: true, ..Section::new(name) }
    }

    pub fn put(&mut self, key: &str, value: impl Into<Entry>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub manifest: String,
    pub seed: u64,
    pub assumptions: Vec<String>,
    pub sections: Vec<Section>,
    pub verdict: String,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, manifest: &str, seed: u64, assumptions: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            manifest: manifest.to_string(),
            seed,
            assumptions,
            sections: Vec::new(),
            verdict: String::new(),
            exit_code: 0,
        }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn version_line() -> String {
        format!("lndkit {VERSION} (core {})", lndkit::VERSION)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&Self::version_line());
        out.push('\n');
        out.push_str(&format!("command: {}\nmanifest: {}\nseed: {}\n", self.command, self.manifest, self.seed));
        out.push_str("assumptions:\n");
        for a in &self.assumptions {
            out.push_str(&format!("  {a}\n"));
        }
        for s in &self.sections {
            out.push_str(&format!("\n[{}]\n", s.name));
            for (k, v) in &s.entries {
                match v {
                    Entry::Text(t) => out.push_str(&format!("  {k}: {t}\n")),
                    Entry::Int(n) => out.push_str(&format!("  {k}: {n}\n")),
                    Entry::Bool(b) => out.push_str(&format!("  {k}: {b}\n")),
                    Entry::List(items) if items.is_empty() => out.push_str(&format!("  {k}: (none)\n")),
                    Entry::List(items) => {
                        out.push_str(&format!("  {k}:\n"));
                        for it in items {
                            out.push_str(&format!("    - {it}\n"));
                        }
                    }
                }
            }
        }
        out.push_str(&format!("\nverdict: {}\nexit: {}\n", self.verdict, self.exit_code));
        out
    }

    pub fn toml(&self) -> String {
        let mut head = Table::new();
        head.insert("version".into(), VERSION.into());
        head.insert("core_version".into(), lndkit::VERSION.into());
        head.insert("command".into(), self.command.clone().into());
        head.insert("manifest".into(), self.manifest.clone().into());
        head.insert("seed".into(), TomlValue::Integer(self.seed as i64));
        head.insert("assumptions".into(), strings(&self.assumptions));
        head.insert("verdict".into(), self.verdict.clone().into());
        head.insert("exit_code".into(), TomlValue::Integer(self.exit_code as i64));
        let mut root = Table::new();
        root.insert("report".into(), TomlValue::Table(head));
        for s in &self.sections {
            let mut t = Table::new();
            for (k, v) in &s.entries {
                let v = match v {
                    Entry::Text(x) => x.clone().into(),
                    Entry::Int(n) => TomlValue::Integer(*n),
                    Entry::Bool(b) => TomlValue::Boolean(*b),
                    Entry::List(items) => strings(items),
                };
                t.insert(k.clone(), v);
            }
            let key = s.name.replace([' ', '-'], "_");
            if s.repeated {
                match root.entry(key).or_insert_with(|| TomlValue::Array(Vec::new())) {
                    TomlValue::Array(a) => a.push(TomlValue::Table(t)),
                    _ => unreachable!("section kinds are not mixed"),
                }
            } else {
                root.insert(key, TomlValue::Table(t));
            }
        }
        toml::to_string(&root).expect("report tables serialize")
    }
}

fn strings(v: &[String]) -> TomlValue {
    TomlValue::Array(v.iter().map(|s| TomlValue::String(s.clone())).collect())
}
