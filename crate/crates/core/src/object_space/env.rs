use rustc_hash::FxHashMap;
use std::fmt;

use thiserror::Error;

use super::Int;

/// Variable bindings by name. Only integers can be bound.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Env {
    vars: FxHashMap<Box<str>, Int>,
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    #[inline]
    pub fn get(&self, name: &str) -> Option<&Int> {
        self.vars.get(name)
    }

    #[inline]
    pub fn set(&mut self, name: &str, value: Int) {
        match self.vars.get_mut(name) {
            Some(slot) => *slot = value,
            None => {
                self.vars.insert(name.into(), value);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Bindings in ascending name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Int)> {
        let mut entries: Vec<(&str, &Int)> = self.vars.iter().map(|(k, v)| (&**k, v)).collect();
        entries.sort_unstable_by_key(|&(k, _)| k);
        entries.into_iter()
    }

    /// Names bound in exactly one of the two environments or bound to different values.
    pub fn differences<'a>(&'a self, other: &'a Env) -> Vec<&'a str> {
        let mut names: Vec<&str> = self
            .iter()
            .filter(|(k, v)| other.get(k) != Some(*v))
            .map(|(k, _)| k)
            .chain(other.iter().filter(|(k, _)| self.get(k).is_none()).map(|(k, _)| k))
            .collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    /// Parses the `.env` format: one `name = integer` binding per line, `#` comments.
    pub fn parse(text: &str) -> Result<Env, EnvFileError> {
        let mut env = Env::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = parse_binding(line).map_err(|message| EnvFileError { line: line_no, message })?;
            if env.get(name).is_some() {
                return Err(EnvFileError { line: line_no, message: format!("`{name}` bound twice") });
            }
            env.set(name, value);
        }
        Ok(env)
    }

    /// Renders the `.env` format accepted by [`Env::parse`].
    pub fn to_env_file(&self) -> String {
        self.to_string()
    }
}

/// Parses a single `name = integer` binding, as used on the command line and in `.env` files.
pub fn parse_binding(text: &str) -> Result<(&str, Int), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected `name = value`, found {text:?}"))?;
    let (name, value) = (name.trim(), value.trim());
    if !is_identifier(name) {
        return Err(format!("invalid variable name {name:?}"));
    }
    let value = value.parse::<Int>().map_err(|e| e.to_string())?;
    Ok((name, value))
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct EnvFileError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value) in self.iter() {
            writeln!(f, "{name} = {value}")?;
        }
        Ok(())
    }
}

impl<S: Into<String>, V: Into<Int>> FromIterator<(S, V)> for Env {
    fn from_iter<I: IntoIterator<Item = (S, V)>>(iter: I) -> Env {
        Env { vars: iter.into_iter().map(|(k, v)| (k.into().into_boxed_str(), v.into())).collect() }
    }
}

/// Index of a variable in a [`SymbolTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bijection between variable ids `0..n` and names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    ids: FxHashMap<String, VarId>,
}

impl SymbolTable {
    pub fn new() -> SymbolTable {
        SymbolTable::default()
    }

    /// Returns the id of `name`, allocating the next free id on first sight.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    /// Builds a table from names in id order; `None` if a name repeats.
    pub fn from_names<I, S>(names: I) -> Option<SymbolTable>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut table = SymbolTable::new();
        for name in names {
            let before = table.len();
            table.intern(name.as_ref());
            if table.len() == before {
                return None;
            }
        }
        Some(table)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Slot-array environment used by the compiled backends: one slot per symbol,
/// empty until the variable is bound.
#[derive(Debug, Clone)]
pub struct Slots<'s> {
    symbols: &'s SymbolTable,
    values: Vec<Option<Int>>,
}

impl<'s> Slots<'s> {
    /// Loads the bindings of `env` that the symbol table knows about.
    pub fn bind(symbols: &'s SymbolTable, env: &Env) -> Slots<'s> {
        let values = symbols.names().iter().map(|name| env.get(name).cloned()).collect();
        Slots { symbols, values }
    }

    pub fn symbols(&self) -> &'s SymbolTable {
        self.symbols
    }

    #[inline]
    pub fn get(&self, id: VarId) -> Option<&Option<Int>> {
        self.values.get(id.index())
    }

    #[inline]
    pub fn get_mut(&mut self, id: VarId) -> Option<&mut Option<Int>> {
        self.values.get_mut(id.index())
    }

    /// Writes every bound slot back into `env`, keeping bindings the program never touched.
    pub fn write_back(self, env: &mut Env) {
        for (name, value) in self.symbols.names().iter().zip(self.values) {
            if let Some(v) = value {
                env.set(name, v);
            }
        }
    }
}
