//! The Lie algebra `a^ε_d = ⊕_{l<N/2} a_l` with
//! `a_l = (gl(V_l) ⊕ gl(V_{l+1})) ⋉ n(V_l, V_{l+1})`, given by structure
//! constants.
//!
//! Each summand `a_l` is realised inside `gl(V_{l+1} ⊕ C ⊕ V_l)`:
//!
//! | generator            | matrix unit                     |
//! |----------------------|---------------------------------|
//! | `A(l)_{ij}`          | `E_{(V_l,j),(V_l,i)}`           |
//! | `A′(l+1)_{ij}`       | `E_{(V_{l+1},j),(V_{l+1},i)}`   |
//! | `B(l)_{ij}`          | `E_{(V_l,j),(V_{l+1},i)}`       |
//! | `q(l)^{(j)}`         | `E_{(V_l,j),C}`                 |
//! | `p(l+1)^{(i)}`       | `E_{C,(V_{l+1},i)}`             |
//!
//! so the bracket is the matrix commutator and Jacobi holds by
//! construction. The resulting table reads
//!
//! ```text
//! [A_ij, A_km]   = δ_im A_kj − δ_jk A_im
//! [A_ij, q_k]    = δ_ik q_j
//! [A′_ij, p_k]   = −δ_jk p_i
//! [A_ij, B_km]   = δ_im B_kj
//! [A′_ij, B_km]  = −δ_jk B_im
//! [q_j, p_i]     = B_ij
//! ```
//!
//! With this table the entries of `B_lA_l + A′_{l+1}B_l + p_{l+1}q_l`
//! span an `ad`-invariant subspace, both classically and in `U(a)`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadratic::DimVector;
use crate::rational::Q;

/// Kinds in PBW order: `A′ < A < B < q < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GenKind {
    APrime,
    A,
    B,
    Q,
    P,
}

impl GenKind {
    pub fn symbol(self) -> &'static str {
        match self {
            GenKind::APrime => "A'",
            GenKind::A => "A",
            GenKind::B => "B",
            GenKind::Q => "q",
            GenKind::P => "p",
        }
    }
}

/// A coordinate generator. Vectors use `i` (`p`) or `j` (`q`) and leave the
/// other index at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub kind: GenKind,
    pub l: usize,
    pub i: usize,
    pub j: usize,
}

impl Generator {
    pub fn a(l: usize, i: usize, j: usize) -> Self {
        Generator {
            kind: GenKind::A,
            l,
            i,
            j,
        }
    }

    pub fn a_prime(l: usize, i: usize, j: usize) -> Self {
        Generator {
            kind: GenKind::APrime,
            l,
            i,
            j,
        }
    }

    pub fn b(l: usize, i: usize, j: usize) -> Self {
        Generator {
            kind: GenKind::B,
            l,
            i,
            j,
        }
    }

    pub fn q(l: usize, j: usize) -> Self {
        Generator {
            kind: GenKind::Q,
            l,
            i: 0,
            j,
        }
    }

    pub fn p(l: usize, i: usize) -> Self {
        Generator {
            kind: GenKind::P,
            l,
            i,
            j: 0,
        }
    }

    /// Summand `a_k` containing this generator.
    pub fn summand(&self) -> usize {
        match self.kind {
            GenKind::APrime | GenKind::P => self.l - 1,
            _ => self.l,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = (self.i + 1, self.j + 1);
        match self.kind {
            GenKind::A | GenKind::APrime | GenKind::B => {
                write!(f, "{}{}[{i},{j}]", self.kind.symbol(), self.l)
            }
            GenKind::Q => write!(f, "q{}[{j}]", self.l),
            GenKind::P => write!(f, "p{}[{i}]", self.l),
        }
    }
}

/// Index of a generator in PBW order.
pub type GenId = u32;

/// Sparse linear combination of generators, sorted by id.
pub type LieElement = Vec<(GenId, Q)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Slot {
    Lower(usize),
    Centre,
    Upper(usize),
}

#[derive(Clone, Debug)]
pub struct LiePresentation {
    dims: DimVector,
    gens: Vec<Generator>,
    index: HashMap<Generator, GenId>,
    table: HashMap<(GenId, GenId), LieElement>,
    weights: Vec<Vec<i64>>,
    modulus: Vec<i64>,
}

impl LiePresentation {
    pub fn new(dims: &DimVector) -> Result<Self> {
        let h = dims.half();
        let d = dims.d();
        let mut gens = Vec::new();
        for l in 0..h {
            for i in 0..d[l] {
                for j in 0..d[l] {
                    gens.push(Generator::a(l, i, j));
                }
            }
            for i in 0..d[l + 1] {
                for j in 0..d[l + 1] {
                    gens.push(Generator::a_prime(l + 1, i, j));
                }
                for j in 0..d[l] {
                    gens.push(Generator::b(l, i, j));
                }
                gens.push(Generator::p(l + 1, i));
            }
            for j in 0..d[l] {
                gens.push(Generator::q(l, j));
            }
        }
        gens.sort();
        let index: HashMap<Generator, GenId> = gens
            .iter()
            .enumerate()
            .map(|(k, g)| (*g, k as GenId))
            .collect();

        let unit = |g: &Generator| -> (Slot, Slot) {
            match g.kind {
                GenKind::A => (Slot::Lower(g.j), Slot::Lower(g.i)),
                GenKind::APrime => (Slot::Upper(g.j), Slot::Upper(g.i)),
                GenKind::B => (Slot::Lower(g.j), Slot::Upper(g.i)),
                GenKind::Q => (Slot::Lower(g.j), Slot::Centre),
                GenKind::P => (Slot::Centre, Slot::Upper(g.i)),
            }
        };
        let mut by_unit: HashMap<(usize, Slot, Slot), GenId> = HashMap::new();
        for (k, g) in gens.iter().enumerate() {
            let (r, c) = unit(g);
            by_unit.insert((g.summand(), r, c), k as GenId);
        }
        let mut table = HashMap::new();
        for (x, gx) in gens.iter().enumerate() {
            for (y, gy) in gens.iter().enumerate() {
                if gx.summand() != gy.summand() {
                    continue;
                }
                let k = gx.summand();
                let (r1, c1) = unit(gx);
                let (r2, c2) = unit(gy);
                let mut terms: Vec<(GenId, Q)> = Vec::new();
                let mut add = |r: Slot, c: Slot, s: i64| -> Result<()> {
                    let id = by_unit.get(&(k, r, c)).ok_or_else(|| {
                        Error::InvalidGenerator(format!("bracket [{gx}, {gy}] leaves the algebra"))
                    })?;
                    terms.push((*id, Q::from_integer(s.into())));
                    Ok(())
                };
                if c1 == r2 {
                    add(r1, c2, 1)?;
                }
                if c2 == r1 {
                    add(r2, c1, -1)?;
                }
                let el = normalize(terms);
                if !el.is_empty() {
                    table.insert((x as GenId, y as GenId), el);
                }
            }
        }

        // Weights: torus of GL(V_l) for inner l, sign group of O(V_l) for
        // outer l (mod 2), then the nilpotent degree.
        let mut offset = vec![0; h + 1];
        let mut modulus = Vec::new();
        for l in 0..=h {
            offset[l] = modulus.len();
            for _ in 0..d[l] {
                modulus.push(if dims.is_outer(l) { 2 } else { 0 });
            }
        }
        modulus.push(0);
        let width = modulus.len();
        let slot_weight = |k: usize, s: Slot| -> Vec<i64> {
            let mut w = vec![0; width];
            match s {
                Slot::Lower(a) => w[offset[k] + a] = 1,
                Slot::Upper(a) => w[offset[k + 1] + a] = 1,
                Slot::Centre => {}
            }
            w
        };
        let weights = gens
            .iter()
            .map(|g| {
                let (r, c) = unit(g);
                let (wr, wc) = (slot_weight(g.summand(), r), slot_weight(g.summand(), c));
                let mut w: Vec<i64> = wr.iter().zip(&wc).map(|(a, b)| a - b).collect();
                w[width - 1] = match g.kind {
                    GenKind::A | GenKind::APrime => 0,
                    GenKind::Q | GenKind::P => 1,
                    GenKind::B => 2,
                };
                reduce_weight(&mut w, &modulus);
                w
            })
            .collect();

        Ok(LiePresentation {
            dims: dims.clone(),
            gens,
            index,
            table,
            weights,
            modulus,
        })
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: GenId) -> Generator {
        self.gens[id as usize]
    }

    pub fn id(&self, g: &Generator) -> Result<GenId> {
        self.index
            .get(g)
            .copied()
            .ok_or_else(|| Error::InvalidGenerator(g.to_string()))
    }

    /// `[x, y]` for basis elements.
    pub fn bracket(&self, x: GenId, y: GenId) -> &[(GenId, Q)] {
        self.table.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    pub fn bracket_elements(&self, x: &[(GenId, Q)], y: &[(GenId, Q)]) -> LieElement {
        let mut out = Vec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (c, cc) in self.bracket(*a, *b) {
                    out.push((*c, ca * cb * cc));
                }
            }
        }
        normalize(out)
    }

    pub fn weight(&self, id: GenId) -> &[i64] {
        &self.weights[id as usize]
    }

    pub fn weight_width(&self) -> usize {
        self.modulus.len()
    }

    pub fn add_weights(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut w: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        reduce_weight(&mut w, &self.modulus);
        w
    }

    pub fn zero_weight(&self) -> Vec<i64> {
        vec![0; self.modulus.len()]
    }

    /// Nilpotent degree component of a weight: `A, A′ ↦ 0`, `q, p ↦ 1`, `B ↦ 2`.
    pub fn nilpotent_degree(w: &[i64]) -> i64 {
        *w.last().unwrap_or(&0)
    }

    /// Returns the first triple violating antisymmetry or Jacobi.
    pub fn check_structure(&self) -> Option<(GenId, GenId, GenId)> {
        let n = self.len() as GenId;
        for x in 0..n {
            for y in 0..n {
                let xy = normalize(self.bracket(x, y).to_vec());
                let yx: LieElement = self.bracket(y, x).iter().map(|(g, c)| (*g, -c)).collect();
                if xy != normalize(yx) {
                    return Some((x, y, y));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut acc = Vec::new();
                    let one = |g| vec![(g, Q::one())];
                    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                        let inner = self.bracket_elements(&one(b), &one(c));
                        acc.extend(self.bracket_elements(&one(a), &inner));
                    }
                    if !normalize(acc).is_empty() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Whether `[x, y]` is weight-homogeneous of weight `w(x) + w(y)`.
    pub fn grading_is_additive(&self) -> bool {
        self.table.iter().all(|((x, y), el)| {
            let w = self.add_weights(self.weight(*x), self.weight(*y));
            el.iter().all(|(g, _)| self.weight(*g) == w.as_slice())
        })
    }
}

fn reduce_weight(w: &mut [i64], modulus: &[i64]) {
    for (x, m) in w.iter_mut().zip(modulus) {
        if *m > 0 {
            *x = x.rem_euclid(*m);
        }
    }
}

/// Sorts by generator, merges repeats and drops zeros.
pub fn normalize(mut terms: Vec<(GenId, Q)>) -> LieElement {
    terms.sort_by_key(|(g, _)| *g);
    let mut out: LieElement = Vec::with_capacity(terms.len());
    for (g, c) in terms {
        match out.last_mut() {
            Some((h, acc)) if *h == g => *acc += c,
            _ => out.push((g, c)),
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lie(n: usize, d: &[usize]) -> LiePresentation {
        LiePresentation::new(&DimVector::new(n, d.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn generator_count_and_order() {
        let g = lie(2, &[1, 1]);
        let names: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["A'1[1,1]", "A0[1,1]", "B0[1,1]", "q0[1]", "p1[1]"]);
        assert_eq!(lie(4, &[1, 1, 1]).len(), 10);
        assert_eq!(
            lie(4, &[2, 1, 1]).len(),
            4 + 1 + 2 + 2 + 1 + 1 + 1 + 1 + 1 + 1
        );
    }

    #[test]
    fn scalar_brackets() {
        let g = lie(2, &[1, 1]);
        let id = |x| g.id(&x).unwrap();
        let (a, ap, b, qq, p) = (
            id(Generator::a(0, 0, 0)),
            id(Generator::a_prime(1, 0, 0)),
            id(Generator::b(0, 0, 0)),
            id(Generator::q(0, 0)),
            id(Generator::p(1, 0)),
        );
        assert_eq!(g.bracket(qq, p), &[(b, q(1))]);
        assert_eq!(g.bracket(a, qq), &[(qq, q(1))]);
        assert_eq!(g.bracket(ap, p), &[(p, q(-1))]);
        assert_eq!(g.bracket(a, b), &[(b, q(1))]);
        assert_eq!(g.bracket(ap, b), &[(b, q(-1))]);
        assert!(g.bracket(b, qq).is_empty() && g.bracket(b, p).is_empty());
        assert!(g.bracket(a, ap).is_empty());
    }

    #[test]
    fn gl_block_bracket() {
        let g = lie(4, &[0, 2, 1]);
        let id = |x| g.id(&x).unwrap();
        // [A_12, A_21] = A_22 - A_11
        let el = g
            .bracket(id(Generator::a(1, 0, 1)), id(Generator::a(1, 1, 0)))
            .to_vec();
        let mut expect = vec![
            (id(Generator::a(1, 1, 1)), q(1)),
            (id(Generator::a(1, 0, 0)), q(-1)),
        ];
        expect.sort_by_key(|t| t.0);
        assert_eq!(el, expect);
    }

    #[test]
    fn structure_sweeps_pass() {
        for (n, d) in [
            (2, vec![1, 1]),
            (2, vec![2, 1]),
            (4, vec![1, 1, 1]),
            (4, vec![1, 2, 1]),
        ] {
            let g = lie(n, &d);
            assert_eq!(g.check_structure(), None);
            assert!(g.grading_is_additive());
        }
    }
}
