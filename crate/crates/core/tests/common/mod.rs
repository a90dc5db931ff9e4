#![allow(dead_code)]

pub mod oracles;

use mmgeom::Field;

pub fn gf(q: u32) -> Field {
    let (p, k) = match q {
        4 => (2, 2),
        8 => (2, 3),
        9 => (3, 2),
        _ => (q, 1),
    };
    Field::new(p, k).unwrap()
}
