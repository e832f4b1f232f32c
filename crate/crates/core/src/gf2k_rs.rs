//! GF(2^k) arithmetic, polynomials over it, and the Reed-Solomon layer used
//! to repair wrong blocks.
//!
//! Evaluation points are the field elements in increasing integer order:
//! `a_1 = 0, a_2 = 1, ...`. Blocks `X_1..X_m` define the unique polynomial of
//! degree `< m` through `(a_i, X_i)`; the `s` extra values are that polynomial
//! at `a_{m+1}..a_{m+s}`. Correction runs Gao's decoder (interpolation plus a
//! partial extended Euclid) over all `m + s` points.

use crate::error::{contract, Error, Result};

/// Irreducible (primitive) polynomials for `k = 2..=16`, bit `i` = coefficient
/// of `x^i`.
const MODULI: [u32; 15] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003,
    0x1100B,
];

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// An element of some GF(2^k), as its polynomial-basis integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(2^k) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct Gf2k {
    k: u32,
    modulus: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2k {
    pub fn new(k: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&k) {
            return Err(contract(format!(
                "field degree {k} outside {MIN_DEGREE}..={MAX_DEGREE}"
            )));
        }
        let modulus = MODULI[(k - MIN_DEGREE) as usize];
        let size = 1usize << k;
        let order = size - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; size];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << k) != 0 {
                x ^= modulus;
            }
        }
        if x != 1 {
            return Err(Error::Invariant(format!("modulus {modulus:#x} is not primitive")));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Gf2k {
            k,
            modulus,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        1 << self.k
    }

    pub fn elem(&self, v: u32) -> Result<FieldElem> {
        if (v as usize) < self.size() {
            Ok(FieldElem(v))
        } else {
            Err(contract(format!("{v} is not an element of GF(2^{})", self.k)))
        }
    }

    /// The `i`-th evaluation point, 1-based: `a_i = i - 1`.
    pub fn point(&self, i: usize) -> FieldElem {
        debug_assert!(i >= 1 && i <= self.size());
        FieldElem((i - 1) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        FieldElem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(contract("zero has no inverse"));
        }
        let order = self.size() - 1;
        Ok(FieldElem(self.exp[(order - self.log[a.0 as usize] as usize) % order]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// Carry-less shift-and-add product, independent of the log tables.
pub fn mul_reference(k: u32, modulus: u32, a: u32, b: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << k) != 0 {
            a ^= modulus;
        }
    }
    acc
}

/// Polynomial with coefficients low to high; no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> FieldElem {
        *self.coeffs.last().unwrap_or(&FieldElem::ZERO)
    }

    pub fn eval(&self, f: &Gf2k, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &Gf2k, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Poly::from_coeffs((0..len).map(|i| f.add(get(self, i), get(other, i))).collect())
    }

    pub fn mul(&self, f: &Gf2k, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, f: &Gf2k, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = divisor.degree() else {
            return Err(contract("polynomial division by zero"));
        };
        let inv_lead = f.inv(divisor.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![FieldElem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, inv_lead);
            quot[i - dd] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.add(rem[i - dd + j], f.mul(factor, d));
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }
}

/// The unique polynomial of degree `< m` through `m` points with distinct
/// abscissae (Newton divided differences).
pub fn interpolate(f: &Gf2k, points: &[(FieldElem, FieldElem)]) -> Result<Poly> {
    let m = points.len();
    if m > f.size() {
        return Err(contract(format!("{m} points exceed the field size {}", f.size())));
    }
    let mut seen = vec![false; f.size()];
    for &(x, _) in points {
        if x.0 as usize >= f.size() {
            return Err(contract(format!("{} is not a field element", x.0)));
        }
        if std::mem::replace(&mut seen[x.0 as usize], true) {
            return Err(contract(format!("duplicate abscissa {}", x.0)));
        }
    }
    // In characteristic 2 subtraction is addition.
    let mut dd: Vec<FieldElem> = points.iter().map(|p| p.1).collect();
    for level in 1..m {
        for i in (level..m).rev() {
            let num = f.add(dd[i], dd[i - 1]);
            let den = f.add(points[i].0, points[i - level].0);
            dd[i] = f.div(num, den)?;
        }
    }
    // Horner on the Newton form: P = dd0 + (x - x0)(dd1 + (x - x1)(...)).
    let mut acc = Poly::zero();
    for i in (0..m).rev() {
        let factor = Poly::from_coeffs(vec![points[i].0, FieldElem::ONE]);
        acc = acc.mul(f, &factor).add(f, &Poly::constant(dd[i]));
    }
    Ok(acc)
}

fn check_capacity(f: &Gf2k, m: usize, s: usize) -> Result<()> {
    if m == 0 {
        return Err(contract("at least one block is required"));
    }
    if m + s > f.size() {
        return Err(contract(format!(
            "m + s = {} exceeds the field size {}",
            m + s,
            f.size()
        )));
    }
    Ok(())
}

/// Values at `a_{m+1}..a_{m+s}` of the polynomial through the blocks.
pub fn rs_extra_evals(f: &Gf2k, blocks: &[FieldElem], s: usize) -> Result<Vec<FieldElem>> {
    let m = blocks.len();
    check_capacity(f, m, s)?;
    let points: Vec<_> = blocks.iter().enumerate().map(|(i, &v)| (f.point(i + 1), v)).collect();
    let p = interpolate(f, &points)?;
    Ok((m + 1..=m + s).map(|i| p.eval(f, f.point(i))).collect())
}

/// Recovers the blocks from possibly corrupted `received` values and
/// error-free `extra` values.
///
/// Returns `None` when no polynomial of degree `< m` agrees with all but at
/// most `floor((s - 1) / 2)` of the `m + s` values. Always succeeds when fewer
/// than `s / 2` entries of `received` are wrong.
pub fn rs_correct(
    f: &Gf2k,
    received: &[FieldElem],
    extra: &[FieldElem],
) -> Result<Option<Vec<FieldElem>>> {
    let m = received.len();
    let s = extra.len();
    check_capacity(f, m, s)?;
    let values: Vec<FieldElem> = received.iter().chain(extra).copied().collect();
    let n = m + s;
    let xs: Vec<FieldElem> = (1..=n).map(|i| f.point(i)).collect();
    let budget = s.saturating_sub(1) / 2;

    let Some(p) = gao_decode(f, &xs, &values, m)? else {
        return Ok(None);
    };
    let evals: Vec<FieldElem> = xs.iter().map(|&x| p.eval(f, x)).collect();
    let disagreements = evals.iter().zip(&values).filter(|(a, b)| a != b).count();
    if disagreements > budget {
        return Ok(None);
    }
    Ok(Some(evals[..m].to_vec()))
}

/// Gao's algorithm: the message polynomial of degree `< k`, if the received
/// word is within `floor((n - k) / 2)` of a codeword.
fn gao_decode(f: &Gf2k, xs: &[FieldElem], values: &[FieldElem], k: usize) -> Result<Option<Poly>> {
    let n = xs.len();
    let points: Vec<_> = xs.iter().copied().zip(values.iter().copied()).collect();
    let g1 = interpolate(f, &points)?;
    let mut g0 = Poly::constant(FieldElem::ONE);
    for &x in xs {
        g0 = g0.mul(f, &Poly::from_coeffs(vec![x, FieldElem::ONE]));
    }

    // Partial extended Euclid tracking only the g1 cofactor.
    let (mut r_prev, mut r_cur) = (g0, g1);
    let (mut v_prev, mut v_cur) = (Poly::zero(), Poly::constant(FieldElem::ONE));
    while r_cur.degree().is_some_and(|d| 2 * d >= n + k) {
        let (q, r) = r_prev.div_rem(f, &r_cur)?;
        let v_next = v_prev.add(f, &q.mul(f, &v_cur));
        r_prev = std::mem::replace(&mut r_cur, r);
        v_prev = std::mem::replace(&mut v_cur, v_next);
    }
    if v_cur.is_zero() {
        return Ok(None);
    }
    let (msg, rem) = r_cur.div_rem(f, &v_cur)?;
    if !rem.is_zero() || msg.degree().is_some_and(|d| d >= k) {
        return Ok(None);
    }
    Ok(Some(msg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all(f: &Gf2k) -> impl Iterator<Item = FieldElem> {
        (0..f.size() as u32).map(FieldElem)
    }

    #[test]
    fn every_modulus_is_primitive() {
        for k in MIN_DEGREE..=MAX_DEGREE {
            let f = Gf2k::new(k).unwrap();
            // x generates the full multiplicative group.
            let mut x = 1u32;
            let mut order = 0usize;
            loop {
                x = mul_reference(k, f.modulus(), x, 2);
                order += 1;
                if x == 1 {
                    break;
                }
            }
            assert_eq!(order, f.size() - 1, "k = {k}");
        }
        assert!(Gf2k::new(1).is_err());
        assert!(Gf2k::new(17).is_err());
    }

    #[test]
    fn characteristic_two() {
        let f = Gf2k::new(4).unwrap();
        for a in all(&f) {
            assert_eq!(f.add(a, a), FieldElem::ZERO);
        }
    }

    #[test]
    fn inverses_in_gf8() {
        let f = Gf2k::new(3).unwrap();
        for x in all(&f).skip(1) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElem::ONE);
        }
        assert!(f.inv(FieldElem::ZERO).is_err());
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for k in 2..=4 {
            let f = Gf2k::new(k).unwrap();
            for a in all(&f) {
                for b in all(&f) {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b).0, mul_reference(k, f.modulus(), a.0, b.0));
                    for c in all(&f) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_randomized_large_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 5..=16 {
            let f = Gf2k::new(k).unwrap();
            for _ in 0..2000 {
                let [a, b, c] = [0; 3].map(|_| FieldElem(rng.gen_range(0..f.size() as u32)));
                assert_eq!(f.mul(a, b).0, mul_reference(k, f.modulus(), a.0, b.0));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn interpolate_single_point_is_constant() {
        let f = Gf2k::new(4).unwrap();
        let p = interpolate(&f, &[(FieldElem(5), FieldElem(9))]).unwrap();
        assert_eq!(p, Poly::constant(FieldElem(9)));
    }

    #[test]
    fn interpolate_recovers_quadratic() {
        let f = Gf2k::new(4).unwrap();
        let q = Poly::from_coeffs(vec![FieldElem(3), FieldElem(7), FieldElem(12)]);
        let pts: Vec<_> = [1u32, 4, 9].iter().map(|&x| (FieldElem(x), q.eval(&f, FieldElem(x)))).collect();
        assert_eq!(interpolate(&f, &pts).unwrap(), q);
        let dup = [(FieldElem(1), FieldElem(0)), (FieldElem(1), FieldElem(2))];
        assert!(interpolate(&f, &dup).is_err());
    }

    #[test]
    fn interpolate_evaluate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Gf2k::new(8).unwrap();
        for _ in 0..50 {
            let m = rng.gen_range(1..40);
            let coeffs: Vec<_> = (0..m).map(|_| FieldElem(rng.gen_range(0..256))).collect();
            let p = Poly::from_coeffs(coeffs);
            let pts: Vec<_> = (1..=m).map(|i| (f.point(i), p.eval(&f, f.point(i)))).collect();
            let back = interpolate(&f, &pts).unwrap();
            assert_eq!(back, p);
            for &(x, y) in &pts {
                assert_eq!(back.eval(&f, x), y);
            }
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Gf2k::new(5).unwrap();
        for _ in 0..200 {
            let a = Poly::from_coeffs((0..rng.gen_range(0..12)).map(|_| FieldElem(rng.gen_range(0..32))).collect());
            let b = Poly::from_coeffs((0..rng.gen_range(1..6)).map(|_| FieldElem(rng.gen_range(1..32))).collect());
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.div_rem(&f, &b).unwrap();
            assert_eq!(q.mul(&f, &b).add(&f, &r), a);
            assert!(r.degree() < b.degree() || r.is_zero());
        }
    }

    #[test]
    fn extra_evals_edges() {
        let f = Gf2k::new(4).unwrap();
        assert!(rs_extra_evals(&f, &[FieldElem(3)], 0).unwrap().is_empty());
        assert_eq!(rs_extra_evals(&f, &[FieldElem(6)], 5).unwrap(), vec![FieldElem(6); 5]);
        assert!(rs_extra_evals(&f, &[FieldElem(1); 10], 7).is_err());
    }

    #[test]
    fn extra_evals_match_independent_horner() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Gf2k::new(4).unwrap();
        for _ in 0..100 {
            let blocks: Vec<_> = (0..4).map(|_| FieldElem(rng.gen_range(0..16))).collect();
            let pts: Vec<_> = blocks.iter().enumerate().map(|(i, &b)| (FieldElem(i as u32), b)).collect();
            let p = interpolate(&f, &pts).unwrap();
            let horner: Vec<_> = (4..8u32)
                .map(|x| {
                    p.coeffs().iter().rev().fold(0u32, |acc, c| {
                        mul_reference(4, f.modulus(), acc, x) ^ c.0
                    })
                })
                .map(FieldElem)
                .collect();
            assert_eq!(rs_extra_evals(&f, &blocks, 4).unwrap(), horner);
        }
    }

    #[test]
    fn correct_without_errors_is_identity() {
        let f = Gf2k::new(8).unwrap();
        let blocks: Vec<_> = (0..20).map(|i| FieldElem(i * 7 % 256)).collect();
        let extra = rs_extra_evals(&f, &blocks, 6).unwrap();
        assert_eq!(rs_correct(&f, &blocks, &extra).unwrap(), Some(blocks));
    }

    #[test]
    fn corrects_every_error_count_below_half_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (k, m, s) in [(4, 4, 4), (4, 6, 7), (8, 32, 16), (8, 40, 9)] {
            let f = Gf2k::new(k).unwrap();
            for _ in 0..200 {
                let blocks: Vec<_> = (0..m).map(|_| FieldElem(rng.gen_range(0..f.size() as u32))).collect();
                let extra = rs_extra_evals(&f, &blocks, s).unwrap();
                let errors = rng.gen_range(0..=(s - 1) / 2);
                let mut received = blocks.clone();
                for i in rand::seq::index::sample(&mut rng, m, errors.min(m)) {
                    received[i] = FieldElem(received[i].0 ^ rng.gen_range(1..f.size() as u32));
                }
                assert_eq!(rs_correct(&f, &received, &extra).unwrap(), Some(blocks.clone()));
            }
        }
    }

    #[test]
    fn gf16_single_error_exhaustive() {
        let f = Gf2k::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let blocks: Vec<_> = (0..4).map(|_| FieldElem(rng.gen_range(0..16))).collect();
            let extra = rs_extra_evals(&f, &blocks, 4).unwrap();
            for pos in 0..4 {
                for delta in 1..16 {
                    let mut received = blocks.clone();
                    received[pos] = FieldElem(received[pos].0 ^ delta);
                    assert_eq!(rs_correct(&f, &received, &extra).unwrap(), Some(blocks.clone()));
                }
            }
        }
    }

    /// Nearest degree-<4 polynomial by scanning all 16^4 of them.
    fn nearest_by_scan(f: &Gf2k, values: &[FieldElem]) -> Vec<(usize, Vec<FieldElem>)> {
        let mut best: Vec<(usize, Vec<FieldElem>)> = Vec::new();
        let mut best_dist = usize::MAX;
        for code in 0..(1u32 << 16) {
            let coeffs: Vec<_> = (0..4).map(|j| FieldElem((code >> (4 * j)) & 15)).collect();
            let p = Poly::from_coeffs(coeffs);
            let evals: Vec<_> = (1..=values.len()).map(|i| p.eval(f, f.point(i))).collect();
            let dist = evals.iter().zip(values).filter(|(a, b)| a != b).count();
            if dist < best_dist {
                best_dist = dist;
                best.clear();
            }
            if dist == best_dist {
                best.push((dist, evals[..4].to_vec()));
            }
        }
        best
    }

    #[test]
    fn gf16_two_errors_never_confidently_wrong() {
        let f = Gf2k::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let budget = (4 - 1) / 2;
        for _ in 0..40 {
            let blocks: Vec<_> = (0..4).map(|_| FieldElem(rng.gen_range(0..16))).collect();
            let extra = rs_extra_evals(&f, &blocks, 4).unwrap();
            let mut received = blocks.clone();
            for i in rand::seq::index::sample(&mut rng, 4, 2) {
                received[i] = FieldElem(received[i].0 ^ rng.gen_range(1..16));
            }
            let values: Vec<_> = received.iter().chain(&extra).copied().collect();
            let nearest = nearest_by_scan(&f, &values);
            match rs_correct(&f, &received, &extra).unwrap() {
                Some(out) => {
                    assert_eq!(nearest.len(), 1);
                    assert!(nearest[0].0 <= budget);
                    assert_eq!(out, nearest[0].1);
                }
                None => assert!(nearest[0].0 > budget || nearest.len() > 1),
            }
        }
    }
}
