//! Randomized self-check run by `fmw selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, Poly};
use crate::bridge::roundtrip_check;
use crate::corr::moves::move_split_roots;
use crate::corr::{AxisSpec, CorrTerm};
use crate::gw::{gw_equal, GwElem};
use crate::mw::{mw_is_zero, MwElem};
use crate::quadform::Decision;

const UNITS: [i64; 10] = [-7, -5, -3, -2, -1, 2, 3, 5, 6, 7];

pub struct Report {
    pub lines: Vec<String>,
    pub failures: usize,
}

fn tally(name: &str, n: usize, f: impl Fn(usize) -> bool, r: &mut Report) {
    let ok = (0..n).filter(|&i| f(i)).count();
    if ok < n {
        r.failures += n - ok;
    }
    r.lines.push(format!("{}: {}/{}", name, ok, n));
}

pub fn selftest(seed: u64, n: usize) -> Report {
    let k = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws: Vec<(i64, i64, i64)> = Vec::new();
    for _ in 0..n {
        draws.push((
            *UNITS.choose(&mut rng).unwrap(),
            *UNITS.choose(&mut rng).unwrap(),
            rng.gen_range(-20..=20),
        ));
    }
    let mut r = Report {
        lines: vec![format!("seed {}", seed)],
        failures: 0,
    };
    tally(
        "gw sum relation",
        n,
        |i| {
            let (a, b, _) = draws[i];
            if a + b == 0 {
                return true;
            }
            let f = |v: i64| GwElem::one_form(&k.from_int(v)).unwrap();
            let lhs = f(a).add(&f(b));
            let rhs = f(a + b).add(&f((a + b) * a * b));
            gw_equal(&lhs, &rhs).unwrap() == Decision::Equal
        },
        &mut r,
    );
    tally(
        "steinberg",
        n,
        |i| {
            let c = draws[i].2;
            if c == 0 || c == 1 {
                return true;
            }
            let s = MwElem::symbol(&k, &[k.from_int(c), k.from_int(1 - c)]).unwrap();
            mw_is_zero(&s) == Decision::Equal
        },
        &mut r,
    );
    tally(
        "phi after psi",
        n,
        |i| {
            let (a, b, c) = draws[i];
            let x = MwElem::symbol(&k, &[k.from_int(a), k.from_int(b)]).unwrap();
            let y = x.gw_mul(&GwElem::one_form(&k.from_int(c.max(1))).unwrap());
            roundtrip_check(&x.add(&y).unwrap()).unwrap() == Decision::Equal
        },
        &mut r,
    );
    tally(
        "split roots certified",
        n,
        |i| {
            let (a, b, _) = draws[i];
            if a == b {
                return true;
            }
            let f = Poly::from_ints(&k, &[-a, 1]).mul(&Poly::from_ints(&k, &[-b, 1]));
            let t = CorrTerm::new(&k, &k, vec![AxisSpec::point(f).unwrap()]).unwrap();
            let c = move_split_roots(&t, 0).unwrap().certify().unwrap();
            c.degree_preserved && c.phi_preserved == Some(Decision::Equal)
        },
        &mut r,
    );
    r
}
