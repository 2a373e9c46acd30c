//! The three worked 3x3 examples, stored exactly.
//!
//! Entries are kept as `p/q + (r/s) sqrt(3)` and only converted to floating
//! point when a matrix is requested, so every displayed matrix is reproduced
//! to the last bit that double precision allows.

use crate::linalg::{re, ComplexMatrix};
use faer::Mat;

/// `p/q + (r/s) sqrt(3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: (i64, i64),
    pub root3: (i64, i64),
}

impl Surd {
    pub const fn ratio(p: i64, q: i64) -> Self {
        Self {
            rational: (p, q),
            root3: (0, 1),
        }
    }

    pub const fn with_root3(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self {
            rational: (p, q),
            root3: (r, s),
        }
    }

    pub fn value(self) -> f64 {
        let (p, q) = self.rational;
        let (r, s) = self.root3;
        p as f64 / q as f64 + (r as f64 / s as f64) * 3f64.sqrt()
    }
}

const fn q(p: i64, d: i64) -> Surd {
    Surd::ratio(p, d)
}

const fn w(p: i64, d: i64, r: i64, s: i64) -> Surd {
    Surd::with_root3(p, d, r, s)
}

const Z: Surd = q(0, 1);
const ONE: Surd = q(1, 1);

pub fn exact_matrix<const C: usize>(rows: &[[Surd; C]]) -> ComplexMatrix {
    Mat::from_fn(rows.len(), C, |i, j| re(rows[i][j].value()))
}

/// A matrix printed alongside an example, with the name used in reports.
#[derive(Clone, Debug)]
pub struct Displayed {
    pub name: &'static str,
    pub matrix: ComplexMatrix,
}

/// A scalar stated in an example.
#[derive(Clone, Debug)]
pub struct StatedValue {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct BuiltinExample {
    pub id: u8,
    pub a: ComplexMatrix,
    pub m_inv: ComplexMatrix,
    pub b: ComplexMatrix,
    pub nc: usize,
    pub nu1: usize,
    pub nu2: usize,
    pub displayed: Vec<Displayed>,
    pub stated: Vec<StatedValue>,
}

impl BuiltinExample {
    pub fn displayed(&self, name: &str) -> Option<&ComplexMatrix> {
        self.displayed.iter().find(|d| d.name == name).map(|d| &d.matrix)
    }

    pub fn stated(&self, name: &str) -> Option<f64> {
        self.stated.iter().find(|s| s.name == name).map(|s| s.value)
    }
}

fn identity3() -> ComplexMatrix {
    exact_matrix(&[[ONE, Z, Z], [Z, ONE, Z], [Z, Z, ONE]])
}

/// Block-diagonal `B` that makes a diagonalizable `A` B-normal although the
/// block `D` is not diagonal.
pub fn example_one() -> BuiltinExample {
    let a = exact_matrix(&[
        [q(7, 8), q(-5, 8), q(5, 8)],
        [q(-5, 8), q(7, 8), q(5, 8)],
        [Z, Z, q(3, 2)],
    ]);
    let b = exact_matrix(&[
        [q(5, 8), q(-3, 8), q(-1, 8)],
        [q(-3, 8), q(5, 8), q(-1, 8)],
        [q(-1, 8), q(-1, 8), q(7, 24)],
    ]);
    let displayed = vec![
        Displayed {
            name: "V_r",
            matrix: exact_matrix(&[[ONE, Z, ONE], [ONE, ONE, Z], [Z, ONE, ONE]]),
        },
        Displayed {
            name: "Lambda",
            matrix: exact_matrix(&[[q(1, 4), Z, Z], [Z, q(3, 2), Z], [Z, Z, q(3, 2)]]),
        },
        Displayed {
            name: "V_l",
            matrix: exact_matrix(&[[q(-1, 1), q(-1, 1), Z], [q(-1, 1), ONE, Z], [ONE, Z, ONE]]),
        },
        Displayed {
            name: "D",
            matrix: exact_matrix(&[[q(2, 1), Z, Z], [Z, q(2, 1), ONE], [Z, ONE, q(2, 1)]]),
        },
        Displayed {
            name: "P_sharp",
            matrix: exact_matrix(&[[ONE], [ONE], [Z]]),
        },
        Displayed {
            name: "R_sharp",
            matrix: exact_matrix(&[[q(-1, 1)], [q(-1, 1)], [ONE]]),
        },
        Displayed {
            name: "Pi_sharp",
            matrix: exact_matrix(&[
                [q(1, 2), q(1, 2), q(-1, 2)],
                [q(1, 2), q(1, 2), q(-1, 2)],
                [Z, Z, Z],
            ]),
        },
    ];
    BuiltinExample {
        id: 1,
        a,
        m_inv: identity3(),
        b,
        nc: 1,
        nu1: 1,
        nu2: 1,
        displayed,
        stated: vec![StatedValue {
            name: "lambda_next_distance",
            value: 0.5,
        }],
    }
}

/// A defective `A` (a Jordan block) for which both error operators still
/// have norm 1/4.
pub fn example_two() -> BuiltinExample {
    let h = q(1, 2);
    let a = exact_matrix(&[[h, Z, Z], [Z, h, ONE], [Z, Z, h]]);
    let b = exact_matrix(&[[ONE, Z, Z], [Z, ONE, q(-2, 1)], [Z, q(-2, 1), q(6, 1)]]);
    let displayed = vec![
        Displayed {
            name: "M_hat_inv",
            matrix: exact_matrix(&[[q(3, 4), Z, Z], [Z, q(11, 4), ONE], [Z, ONE, q(3, 8)]]),
        },
        Displayed {
            name: "M_hat_inv_B",
            matrix: exact_matrix(&[[q(3, 4), Z, Z], [Z, q(3, 4), q(1, 2)], [Z, q(1, 4), q(1, 4)]]),
        },
        Displayed {
            name: "V_hat",
            matrix: exact_matrix(&[
                [ONE, Z, Z],
                [Z, w(1, 1, -1, 1), w(1, 1, 1, 1)],
                [Z, ONE, ONE],
            ]),
        },
        Displayed {
            name: "P_hat",
            matrix: exact_matrix(&[[Z], [w(1, 1, -1, 1)], [ONE]]),
        },
        Displayed {
            name: "R_star",
            matrix: exact_matrix(&[[Z], [w(-2, 1, -2, 1)], [w(12, 1, 8, 1)]]),
        },
        Displayed {
            name: "Pi_hat",
            matrix: exact_matrix(&[
                [Z, Z, Z],
                [Z, w(1, 2, -1, 6), w(0, 1, -1, 3)],
                [Z, w(0, 1, -1, 6), w(1, 2, 1, 6)],
            ]),
        },
        Displayed {
            name: "E_plus_11",
            matrix: exact_matrix(&[
                [q(1, 4), Z, Z],
                [Z, w(-1, 8, 1, 8), w(3, 4, -1, 2)],
                [Z, w(-1, 8, 1, 12), w(5, 8, -3, 8)],
            ]),
        },
        Displayed {
            name: "E_11",
            matrix: exact_matrix(&[
                [q(1, 4), Z, Z],
                [Z, w(1, 8, -1, 24), w(-1, 2, 1, 4)],
                [Z, w(0, 1, 1, 24), w(1, 8, -1, 8)],
            ]),
        },
    ];
    let stated = vec![
        StatedValue {
            name: "mu_1",
            value: w(1, 2, -1, 4).value(),
        },
        StatedValue {
            name: "mu_2",
            value: 0.75,
        },
        StatedValue {
            name: "mu_3",
            value: w(1, 2, 1, 4).value(),
        },
        StatedValue {
            name: "norm_E_plus_11",
            value: 0.25,
        },
        StatedValue {
            name: "norm_E_11",
            value: 0.25,
        },
    ];
    BuiltinExample {
        id: 2,
        a,
        m_inv: identity3(),
        b,
        nc: 1,
        nu1: 1,
        nu2: 1,
        displayed,
        stated,
    }
}

/// Diagonalizable `A` with a `B` outside the admissible set: the sharp
/// transfers give a divergent `E^{1,1}`.
///
/// The (3,3) entry of `A` is 1/3, as forced by the printed factorization
/// `V_r Lambda V_r^-1` and by the printed `I - A`.
pub fn example_three() -> BuiltinExample {
    let a = exact_matrix(&[[q(1, 4), Z, q(1, 12)], [Z, q(1, 2), Z], [Z, Z, q(1, 3)]]);
    let b = exact_matrix(&[[q(4, 1), Z, Z], [Z, q(2, 1), ONE], [Z, ONE, ONE]]);
    let displayed = vec![
        Displayed {
            name: "V_r",
            matrix: exact_matrix(&[[ONE, Z, ONE], [Z, ONE, Z], [Z, Z, ONE]]),
        },
        Displayed {
            name: "Lambda",
            matrix: exact_matrix(&[[q(1, 4), Z, Z], [Z, q(1, 2), Z], [Z, Z, q(1, 3)]]),
        },
        Displayed {
            name: "V_l",
            matrix: exact_matrix(&[[ONE, Z, Z], [Z, ONE, Z], [q(-1, 1), Z, ONE]]),
        },
        Displayed {
            name: "M_hat_inv_B",
            matrix: exact_matrix(&[
                [q(55, 144), q(1, 36), q(5, 72)],
                [q(-1, 6), q(5, 6), q(1, 12)],
                [q(4, 9), q(-2, 9), q(4, 9)],
            ]),
        },
        Displayed {
            name: "P_sharp",
            matrix: exact_matrix(&[[ONE], [Z], [Z]]),
        },
        Displayed {
            name: "R_sharp",
            matrix: exact_matrix(&[[ONE], [Z], [q(-1, 1)]]),
        },
        Displayed {
            name: "I_minus_A",
            matrix: exact_matrix(&[[q(3, 4), Z, q(-1, 12)], [Z, q(1, 2), Z], [Z, Z, q(2, 3)]]),
        },
        Displayed {
            name: "E_11_sharp",
            matrix: exact_matrix(&[[Z, Z, q(4, 9)], [Z, q(1, 4), Z], [Z, Z, q(4, 9)]]),
        },
    ];
    let stated = vec![
        StatedValue {
            name: "norm_E_11_sharp",
            value: ((1294465f64.sqrt() + 1217.0) / 1296.0).sqrt(),
        },
        StatedValue {
            name: "norm_Pi_sharp",
            value: 3.0,
        },
    ];
    BuiltinExample {
        id: 3,
        a,
        m_inv: identity3(),
        b,
        nc: 1,
        nu1: 1,
        nu2: 1,
        displayed,
        stated,
    }
}

pub fn builtin(id: u8) -> Option<BuiltinExample> {
    match id {
        1 => Some(example_one()),
        2 => Some(example_two()),
        3 => Some(example_three()),
        _ => None,
    }
}
