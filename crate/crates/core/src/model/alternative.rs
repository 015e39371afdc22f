use std::cmp::Ordering;
use std::fmt;

/// Index of a player, `0..n`.
pub type Player = usize;

/// Index of an activity class in [`Instance::classes`](super::Instance::classes).
pub type ClassId = usize;

/// An element of the outcome space: an activity performed by a group of a
/// given size, or staying alone with the void activity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alternative {
    Void,
    Activity { class: ClassId, size: usize },
}

impl Alternative {
    pub fn new(class: ClassId, size: usize) -> Self {
        Alternative::Activity { class, size }
    }

    pub fn class(&self) -> Option<ClassId> {
        match *self {
            Alternative::Void => None,
            Alternative::Activity { class, .. } => Some(class),
        }
    }

    pub fn size(&self) -> usize {
        match *self {
            Alternative::Void => 1,
            Alternative::Activity { size, .. } => size,
        }
    }

    pub fn is_void(&self) -> bool {
        matches!(self, Alternative::Void)
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alternative::Void => write!(f, "(void,1)"),
            Alternative::Activity { class, size } => write!(f, "(#{class},{size})"),
        }
    }
}

/// Outcome of comparing two alternatives from one player's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preference {
    Strict,
    Indifferent,
    Worse,
}

impl From<Ordering> for Preference {
    fn from(ord: Ordering) -> Self {
        match ord {
            Ordering::Greater => Preference::Strict,
            Ordering::Equal => Preference::Indifferent,
            Ordering::Less => Preference::Worse,
        }
    }
}
