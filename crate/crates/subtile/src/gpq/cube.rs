//! The 24-element rotation group of the cube, generated by the quarter
//! turns `S` (about the y-axis) and `U` (about the x-axis), with exact
//! integer matrices, multiplication tables, coset tags and canonical words.

use std::fmt;
use std::sync::OnceLock;

pub type Mat3i = [[i32; 3]; 3];

pub const IDENTITY: Mat3i = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
/// `R_y^{2π/4}`
pub const S_MAT: Mat3i = [[0, 0, 1], [0, 1, 0], [-1, 0, 0]];
/// `R_x^{2π/4}`
pub const U_MAT: Mat3i = [[1, 0, 0], [0, 0, -1], [0, 1, 0]];

pub fn mat_mul(a: &Mat3i, b: &Mat3i) -> Mat3i {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, row) in b.iter().enumerate() {
                out[i][j] += a[i][k] * row[j];
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coset {
    H1,
    H1S,
    H1SU,
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coset::H1 => write!(f, "H1"),
            Coset::H1S => write!(f, "H1·S"),
            Coset::H1SU => write!(f, "H1·S·U"),
        }
    }
}

/// A letter of a canonical cube word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubeLetter {
    S,
    U,
}

/// Which signed coordinate axis a unit vector is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    PlusX,
    MinusX,
    Other,
}

pub struct CubeGroup {
    pub elems: Vec<Mat3i>,
    pub mul: Vec<[u8; 24]>,
    pub inv: [u8; 24],
    pub id: u8,
    pub s: u8,
    pub u: u8,
    pub coset: [Coset; 24],
    /// For elements of H1: the exponents `(a, b)` with `h = (S²)^a · U^b`.
    pub h1_exponents: [Option<(u8, u8)>; 24],
    /// BFS-shortest word over {S, U} for every element.
    pub words: Vec<Vec<CubeLetter>>,
    /// Image of the x axis under each element.
    pub x_image: [Axis; 24],
    /// Order of each element (1, 2, 3 or 4).
    pub order: [u8; 24],
}

impl CubeGroup {
    pub fn get() -> &'static CubeGroup {
        static CUBE: OnceLock<CubeGroup> = OnceLock::new();
        CUBE.get_or_init(CubeGroup::build)
    }

    fn build() -> CubeGroup {
        let mut elems: Vec<Mat3i> = vec![IDENTITY];
        let mut words: Vec<Vec<CubeLetter>> = vec![Vec::new()];
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &idx in &frontier {
                for (letter, gen) in [(CubeLetter::S, S_MAT), (CubeLetter::U, U_MAT)] {
                    let m = mat_mul(&elems[idx], &gen);
                    if !elems.contains(&m) {
                        let mut w = words[idx].clone();
                        w.push(letter);
                        elems.push(m);
                        words.push(w);
                        next.push(elems.len() - 1);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(elems.len(), 24, "cube group must have 24 elements");

        let index_of = |m: &Mat3i| -> u8 {
            elems.iter().position(|e| e == m).expect("closed under product") as u8
        };
        let mut mul = vec![[0u8; 24]; 24];
        for i in 0..24 {
            for j in 0..24 {
                mul[i][j] = index_of(&mat_mul(&elems[i], &elems[j]));
            }
        }
        let mut inv = [0u8; 24];
        for i in 0..24 {
            for j in 0..24 {
                if mul[i][j as usize] == 0 {
                    inv[i] = j;
                    break;
                }
            }
        }
        let s = index_of(&S_MAT);
        let u = index_of(&U_MAT);
        // H1 = {(S²)^a U^b}
        let s2 = mul[s as usize][s as usize];
        let mut h1_exponents = [None; 24];
        for a in 0..2u8 {
            for b in 0..4u8 {
                let mut e = 0u8;
                for _ in 0..a {
                    e = mul[e as usize][s2 as usize];
                }
                for _ in 0..b {
                    e = mul[e as usize][u as usize];
                }
                if h1_exponents[e as usize].is_none() {
                    h1_exponents[e as usize] = Some((a, b));
                }
            }
        }
        let mut coset = [Coset::H1; 24];
        let mut seen = [false; 24];
        for i in 0..24u8 {
            if h1_exponents[i as usize].is_some() {
                coset[i as usize] = Coset::H1;
                seen[i as usize] = true;
            }
        }
        for i in 0..24u8 {
            if h1_exponents[i as usize].is_some() {
                let hs = mul[i as usize][s as usize];
                coset[hs as usize] = Coset::H1S;
                assert!(!seen[hs as usize], "cosets overlap");
                seen[hs as usize] = true;
            }
        }
        for i in 0..24u8 {
            if h1_exponents[i as usize].is_some() {
                let hs = mul[i as usize][s as usize];
                let hsu = mul[hs as usize][u as usize];
                coset[hsu as usize] = Coset::H1SU;
                assert!(!seen[hsu as usize], "cosets overlap");
                seen[hsu as usize] = true;
            }
        }
        assert!(seen.iter().all(|x| *x), "cosets must partition the group");

        let mut x_image = [Axis::Other; 24];
        for (i, m) in elems.iter().enumerate() {
            let col = (m[0][0], m[1][0], m[2][0]);
            x_image[i] = match col {
                (1, 0, 0) => Axis::PlusX,
                (-1, 0, 0) => Axis::MinusX,
                _ => Axis::Other,
            };
        }

        let mut order = [1u8; 24];
        for i in 0..24 {
            let mut acc = i as u8;
            let mut n = 1;
            while acc != 0 {
                acc = mul[acc as usize][i];
                n += 1;
            }
            order[i] = n;
        }

        CubeGroup {
            elems,
            mul,
            inv,
            id: 0,
            s,
            u,
            coset,
            h1_exponents,
            words,
            x_image,
            order,
        }
    }

    pub fn times(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    pub fn power(&self, a: u8, n: i64) -> u8 {
        let (base, reps) = if n < 0 {
            (self.inv[a as usize], n.unsigned_abs())
        } else {
            (a, n as u64)
        };
        let mut out = self.id;
        for _ in 0..reps {
            out = self.times(out, base);
        }
        out
    }

    pub fn s_power(&self, n: i64) -> u8 {
        self.power(self.s, n.rem_euclid(4))
    }

    pub fn u_power(&self, n: i64) -> u8 {
        self.power(self.u, n.rem_euclid(4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_the_24_element_group() {
        let g = CubeGroup::get();
        assert_eq!(g.elems.len(), 24);
        let orders: Vec<u8> = g.order.to_vec();
        for &o in &orders {
            assert!([1, 2, 3, 4].contains(&o));
        }
        // identity, S and U basic sanity
        assert_eq!(g.order[g.id as usize], 1);
        assert_eq!(g.order[g.s as usize], 4);
        assert_eq!(g.order[g.u as usize], 4);
        // SUS = USU (the braid-like relation used by the rewriting)
        let sus = g.times(g.times(g.s, g.u), g.s);
        let usu = g.times(g.times(g.u, g.s), g.u);
        assert_eq!(sus, usu);
    }

    #[test]
    fn coset_membership_matches_the_listing() {
        let g = CubeGroup::get();
        // H1 = {1, U, U², U³, S², S²U, S²U², S²U³}
        let s2 = g.times(g.s, g.s);
        let mut h1 = vec![g.id];
        let mut e = g.id;
        for _ in 0..3 {
            e = g.times(e, g.u);
            h1.push(e);
        }
        let mut e = s2;
        h1.push(s2);
        for _ in 0..3 {
            e = g.times(e, g.u);
            h1.push(e);
        }
        for &e in &h1 {
            assert_eq!(g.coset[e as usize], Coset::H1);
        }
        // S²U ∈ H1, S ∈ H1S, SU ∈ H1SU
        assert_eq!(g.coset[g.times(s2, g.u) as usize], Coset::H1);
        assert_eq!(g.coset[g.s as usize], Coset::H1S);
        assert_eq!(g.coset[g.times(g.s, g.u) as usize], Coset::H1SU);
    }

    #[test]
    fn h1_pushes_through_x_rotations() {
        // every H1 element maps the x axis to ±x
        let g = CubeGroup::get();
        for i in 0..24u8 {
            let in_h1 = g.h1_exponents[i as usize].is_some();
            let fixes_x_axis = matches!(g.x_image[i as usize], Axis::PlusX | Axis::MinusX);
            assert_eq!(in_h1, fixes_x_axis);
        }
    }
}
