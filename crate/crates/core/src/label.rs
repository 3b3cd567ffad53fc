use std::fmt;
use std::sync::Arc;

/// An action symbol. Cheap to clone; compares by its text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Edge label of a synchronization tree.
///
/// The derived order places every action before `Exit`, and actions are
/// ordered by their text. Determinization and rendering rely on this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Action(Symbol),
    Exit,
}

impl Label {
    pub fn action(name: &str) -> Self {
        Label::Action(Symbol::new(name))
    }

    pub fn is_exit(&self) -> bool {
        matches!(self, Label::Exit)
    }

    pub fn as_action(&self) -> Option<&Symbol> {
        match self {
            Label::Action(s) => Some(s),
            Label::Exit => None,
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Action(s) => f.write_str(s.as_str()),
            Label::Exit => f.write_str("!"),
        }
    }
}

// Internal labels used by the tau constructions. None of them is a valid
// identifier in the scheme grammar, so they never collide with user actions.
pub(crate) const UNIT_LABEL: &str = "1";

pub(crate) fn sum_branch_label(i: usize) -> String {
    format!("+{i}")
}
