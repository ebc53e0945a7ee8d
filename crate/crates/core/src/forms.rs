//! Named forms used throughout the tests and the command line.

use crate::form::GramForm;

fn from(rows: &[&[i64]]) -> GramForm {
    GramForm::from_ints(rows).expect("named forms are positive definite")
}

pub fn cubic(n: usize) -> GramForm {
    GramForm::identity(n)
}

pub fn a2() -> GramForm {
    from(&[&[2, 1], &[1, 2]])
}

pub fn fcc() -> GramForm {
    from(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]])
}

pub fn bcc() -> GramForm {
    from(&[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]])
}

pub fn d4() -> GramForm {
    from(&[&[2, 0, -1, 0], &[0, 2, -1, 0], &[-1, -1, 2, -1], &[0, 0, -1, 2]])
}

/// `(name, form)` for the standard corpus.
pub fn corpus() -> Vec<(&'static str, GramForm)> {
    vec![
        ("Z2", cubic(2)),
        ("A2", a2()),
        ("Z3", cubic(3)),
        ("FCC", fcc()),
        ("BCC", bcc()),
        ("Z4", cubic(4)),
        ("D4", d4()),
    ]
}
