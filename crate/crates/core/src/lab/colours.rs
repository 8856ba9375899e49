//! The red/blue partition of types used to show that the bad-bounds
//! environment keeps declarations of different labels apart.
//!
//! `e.E` and every function type are blue. A declaration `{E: E1 .. E2}` is
//! red when `E1` is `Bot` or blue and `E2` is `Top` or blue. Nothing else is
//! coloured.

use crate::syntax::{label, var, Type, TypeLabel, VarName};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    pub var: VarName,
    pub label: TypeLabel,
}

impl Default for Colouring {
    fn default() -> Self {
        Colouring { var: var("e"), label: label("E") }
    }
}

impl Colouring {
    pub fn new(var: VarName, label: TypeLabel) -> Colouring {
        Colouring { var, label }
    }

    pub fn is_blue(&self, t: &Type) -> bool {
        match t {
            Type::Path(x, a) => *x == self.var && *a == self.label,
            Type::All(..) => true,
            _ => false,
        }
    }

    pub fn is_red(&self, t: &Type) -> bool {
        match t {
            Type::Decl(a, lo, hi) => {
                *a == self.label
                    && (**lo == Type::Bot || self.is_blue(lo))
                    && (**hi == Type::Top || self.is_blue(hi))
            }
            _ => false,
        }
    }
}

pub fn is_blue(t: &Type) -> bool {
    Colouring::default().is_blue(t)
}

pub fn is_red(t: &Type) -> bool {
    Colouring::default().is_red(t)
}
