//! Free graded-commutative algebras `ΛV` and Sullivan algebras.

use crate::linalg::GradedSpace;
use crate::q::{Lin, Q};
use crate::Error;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Exponent vector, one entry per generator.
pub type Mono = Vec<u32>;
pub type Poly = Lin<Mono>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    /// Generators with homological degrees (Sullivan generators have negative degree).
    pub gens: GradedSpace,
}

impl PolyRing {
    pub fn new(gens: GradedSpace) -> Self {
        PolyRing { gens }
    }

    pub fn n(&self) -> usize {
        self.gens.dim()
    }

    pub fn odd(&self, i: usize) -> bool {
        self.gens.deg(i).rem_euclid(2) == 1
    }

    pub fn one(&self) -> Mono {
        vec![0; self.n()]
    }

    pub fn gen(&self, i: usize) -> Poly {
        let mut m = self.one();
        m[i] = 1;
        Poly::basis(m)
    }

    pub fn constant(&self, c: Q) -> Poly {
        Poly::single(self.one(), c)
    }

    pub fn mono_degree(&self, m: &Mono) -> i64 {
        m.iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * self.gens.deg(i))
            .sum()
    }

    pub fn mono_len(m: &Mono) -> u32 {
        m.iter().sum()
    }

    /// Product of monomials with its sign, or `None` if an odd generator would square.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Option<(Mono, bool)> {
        let mut neg = false;
        let mut out = a.clone();
        for j in 0..self.n() {
            if b[j] == 0 {
                continue;
            }
            if self.odd(j) {
                if a[j] > 0 {
                    return None;
                }
                // move odd b_j left past the odd letters of a with larger index
                let passes: u32 = (j + 1..self.n())
                    .filter(|&i| self.odd(i))
                    .map(|i| a[i])
                    .sum();
                if passes % 2 == 1 {
                    neg = !neg;
                }
            }
            out[j] += b[j];
        }
        Some((out, neg))
    }

    pub fn mul(&self, p: &Poly, r: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, c) in p.iter() {
            for (b, e) in r.iter() {
                if let Some((m, neg)) = self.mul_mono(a, b) {
                    let v = c * e;
                    out.add_term(m, if neg { -v } else { v });
                }
            }
        }
        out
    }

    pub fn pow(&self, p: &Poly, k: u32) -> Poly {
        let mut out = self.constant(Q::one());
        for _ in 0..k {
            out = self.mul(&out, p);
        }
        out
    }

    /// Letters of a monomial in generator order, with repetition.
    pub fn letters(m: &Mono) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    /// Apply the degree −1 derivation determined by its values on generators.
    pub fn apply_derivation(&self, dgen: &[Poly], p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.iter() {
            let letters = Self::letters(m);
            let mut prefix = self.constant(Q::one());
            let mut prefix_deg = 0i64;
            for (k, &i) in letters.iter().enumerate() {
                let mut suffix = self.constant(Q::one());
                for &j in &letters[k + 1..] {
                    suffix = self.mul(&suffix, &self.gen(j));
                }
                let term = self.mul(&self.mul(&prefix, &dgen[i]), &suffix);
                let s = if prefix_deg.rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                out.add_scaled(&term, &s);
                prefix = self.mul(&prefix, &self.gen(i));
                prefix_deg += self.gens.deg(i);
            }
        }
        out
    }

    /// Monomials of word length `1..` whose cohomological degree is at most `max_codeg`.
    /// Requires every generator to have positive cohomological degree.
    pub fn monomials_upto(&self, max_codeg: i64) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = self.one();
        fn rec(r: &PolyRing, i: usize, budget: i64, cur: &mut Mono, out: &mut Vec<Mono>) {
            if i == r.n() {
                if PolyRing::mono_len(cur) > 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let cd = -r.gens.deg(i);
            let maxe = if r.odd(i) {
                1
            } else {
                (budget / cd.max(1)) as u32
            };
            for e in 0..=maxe {
                if e as i64 * cd > budget {
                    break;
                }
                cur[i] = e;
                rec(r, i + 1, budget - e as i64 * cd, cur, out);
            }
            cur[i] = 0;
        }
        rec(self, 0, max_codeg, &mut cur, &mut out);
        out.sort_by_key(|m| {
            (
                -self.mono_degree(m),
                PolyRing::mono_len(m),
                std::cmp::Reverse(m.clone()),
            )
        });
        out
    }

    pub fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e == 1 {
                parts.push(self.gens.name(i).to_string());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.gens.name(i), e));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn fmt_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.iter().enumerate() {
            let cs = crate::q::fmt_q(c);
            let neg = cs.starts_with('-');
            let a = cs.trim_start_matches('-');
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let mono = self.fmt_mono(m);
            if mono == "1" {
                s.push_str(a);
            } else {
                if a != "1" {
                    s.push_str(a);
                    s.push('*');
                }
                s.push_str(&mono);
            }
        }
        s
    }
}

/// A Sullivan algebra `(ΛV, d)`; generators in positive cohomological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanModel {
    pub ring: PolyRing,
    pub d: Vec<Poly>,
}

impl SullivanModel {
    pub fn new(gens: GradedSpace, d: Vec<Poly>) -> Result<Self, Error> {
        for b in &gens.basis {
            if b.degree >= 0 {
                return Err(Error::Domain(format!(
                    "generator {} must have positive cohomological degree",
                    b.name
                )));
            }
        }
        let m = SullivanModel {
            ring: PolyRing::new(gens),
            d,
        };
        for (i, p) in m.d.iter().enumerate() {
            for (mono, _) in p.iter() {
                if m.ring.mono_degree(mono) != m.ring.gens.deg(i) - 1 {
                    return Err(Error::Domain(format!(
                        "d {} is not homogeneous of cohomological degree {}",
                        m.ring.gens.name(i),
                        1 - m.ring.gens.deg(i)
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn differential(&self, p: &Poly) -> Poly {
        self.ring.apply_derivation(&self.d, p)
    }

    pub fn d_squared_zero(&self) -> bool {
        (0..self.ring.n()).all(|i| self.differential(&self.d[i]).is_zero())
    }

    pub fn is_minimal(&self) -> bool {
        self.d
            .iter()
            .all(|p| p.iter().all(|(m, _)| PolyRing::mono_len(m) >= 2))
    }

    pub fn is_quadratic(&self) -> bool {
        self.d
            .iter()
            .all(|p| p.iter().all(|(m, _)| PolyRing::mono_len(m) == 2))
    }

    /// Generators ordered so that each differential only involves earlier generators, or the
    /// cycle that prevents it.
    pub fn nilpotence_order(&self) -> Result<Vec<usize>, Vec<usize>> {
        let n = self.ring.n();
        let deps: Vec<BTreeSet<usize>> = self
            .d
            .iter()
            .map(|p| {
                p.iter()
                    .flat_map(|(m, _)| (0..n).filter(|&j| m[j] > 0).collect::<Vec<_>>())
                    .collect()
            })
            .collect();
        topo_sort(n, &deps)
    }
}

/// Topological order of `0..n` where `deps[i]` must precede `i`; on failure returns a cycle.
pub fn topo_sort(n: usize, deps: &[BTreeSet<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let mut state = vec![0u8; n];
    let mut order = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn visit(
        i: usize,
        deps: &[BTreeSet<usize>],
        state: &mut [u8],
        order: &mut Vec<usize>,
        stack: &mut Vec<usize>,
    ) -> Result<(), Vec<usize>> {
        if state[i] == 2 {
            return Ok(());
        }
        if state[i] == 1 {
            let pos = stack.iter().position(|&x| x == i).unwrap();
            let mut cyc = stack[pos..].to_vec();
            cyc.push(i);
            return Err(cyc);
        }
        state[i] = 1;
        stack.push(i);
        for &j in &deps[i] {
            visit(j, deps, state, order, stack)?;
        }
        stack.pop();
        state[i] = 2;
        order.push(i);
        Ok(())
    }
    for i in 0..n {
        visit(i, deps, &mut state, &mut order, &mut stack)?;
    }
    Ok(order)
}

/// The nonzero part of the coefficient table of `p` keyed by monomial.
pub fn coefficients(p: &Poly) -> BTreeMap<Mono, Q> {
    p.terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    fn cpn(n: u32) -> SullivanModel {
        let gens = GradedSpace::from_degrees(&[("x", -2), ("y", -(2 * n as i64 + 1))]);
        let r = PolyRing::new(gens.clone());
        let dy = r.pow(&r.gen(0), n + 1);
        SullivanModel::new(gens, vec![Poly::zero(), dy]).unwrap()
    }

    #[test]
    fn odd_squares_vanish() {
        let r = PolyRing::new(GradedSpace::from_degrees(&[("a", -1), ("b", -1)]));
        assert!(r.mul(&r.gen(0), &r.gen(0)).is_zero());
        let ab = r.mul(&r.gen(0), &r.gen(1));
        let ba = r.mul(&r.gen(1), &r.gen(0));
        assert_eq!(ab, ba.neg());
    }

    #[test]
    fn cpn_model() {
        let m = cpn(2);
        assert!(m.d_squared_zero());
        assert!(m.is_minimal());
        assert_eq!(m.nilpotence_order().unwrap(), vec![0, 1]);
        let xy = m.ring.mul(&m.ring.gen(0), &m.ring.gen(1));
        let mut want = m.ring.pow(&m.ring.gen(0), 4);
        want = want.scaled(&q(1));
        assert_eq!(m.differential(&xy), want);
    }

    #[test]
    fn cycle_detected() {
        let gens = GradedSpace::from_degrees(&[("a", -3), ("b", -3)]);
        let r = PolyRing::new(gens.clone());
        // not a valid dga, only the dependency graph matters here
        let m = SullivanModel {
            ring: r.clone(),
            d: vec![r.gen(1), r.gen(0)],
        };
        assert!(m.nilpotence_order().is_err());
    }
}
