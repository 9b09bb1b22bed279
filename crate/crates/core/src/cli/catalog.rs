//! Built-in example groups.

use crate::group::{cyclic_group, symmetric_group, FiniteGroup};
use crate::narygroup::{b_derived, derived, nary_from_table, PolyadicGroup};

pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    pub build: fn() -> PolyadicGroup,
}

fn binary(g: FiniteGroup) -> PolyadicGroup {
    let flat: Vec<usize> = g.table().concat();
    nary_from_table(2, g.order(), flat, g.label()).expect("catalog group is valid")
}

fn s3() -> FiniteGroup {
    symmetric_group(3).expect("S3 is in range")
}

pub const CATALOG: &[Builtin] = &[
    Builtin { name: "trivial", description: "trivial group, 2-ary", build: || binary(cyclic_group(1)) },
    Builtin { name: "z2", description: "Z2 as a 2-ary group", build: || binary(cyclic_group(2)) },
    Builtin { name: "z4", description: "Z4 as a 2-ary group", build: || binary(cyclic_group(4)) },
    Builtin { name: "s3", description: "S3 as a 2-ary group", build: || binary(s3()) },
    Builtin { name: "der3_z2", description: "ternary group derived from Z2", build: || derived(&cyclic_group(2), 3).unwrap() },
    Builtin {
        name: "der3_b1_z2",
        description: "ternary group x+y+z+1 on Z2, not derived from any binary group",
        build: || b_derived(&cyclic_group(2), 1, 3).unwrap(),
    },
    Builtin { name: "der3_s3", description: "ternary group derived from S3", build: || derived(&s3(), 3).unwrap() },
    Builtin { name: "der4_z3", description: "4-ary group derived from Z3", build: || derived(&cyclic_group(3), 4).unwrap() },
    Builtin {
        name: "der3_b2_z4",
        description: "ternary group x+y+z+2 on Z4",
        build: || b_derived(&cyclic_group(4), 2, 3).unwrap(),
    },
    Builtin {
        name: "der4_b1_z3",
        description: "4-ary group w+x+y+z+1 on Z3",
        build: || b_derived(&cyclic_group(3), 1, 4).unwrap(),
    },
    Builtin {
        name: "table3_b1_z2",
        description: "der3_b1_z2 stored as a full ternary table",
        build: || {
            let g = b_derived(&cyclic_group(2), 1, 3).unwrap();
            nary_from_table(3, 2, g.to_table(), "table(der^3_1(Z2))").expect("catalog group is valid")
        },
    },
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    CATALOG.iter().find(|b| b.name == name)
}
