//! Linear algebra over GF(2) and binary linear codes.
//!
//! A [`LinearCode`] is defined by a full-rank parity-check matrix `H`. Its
//! generator is derived once at construction: the information set is chosen
//! by eliminating `H` from the rightmost column leftwards, so codes whose last
//! `n - k` columns are independent come out systematic on the first `k`
//! positions, and other codes record which positions carry the message.

use std::collections::HashMap;

use rand::Rng;

use crate::bitword::{hamming_distance, Word};
use crate::error::{contract, Error, Result};

/// Largest block length accepted by [`list_decode_exhaustive`].
pub const LIST_DECODE_MAX_N: usize = 24;

/// Dense binary matrix stored as one [`Word`] per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Word>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(contract("matrix dimensions must be positive"));
        }
        Ok(BitMatrix {
            rows,
            cols,
            data: vec![Word::zeros(cols)?; rows],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Word>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(contract("matrix needs at least one row"));
        };
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(contract("matrix rows differ in length"));
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<Self> {
        if rows == 0 {
            return Err(contract("matrix dimensions must be positive"));
        }
        let data = (0..rows)
            .map(|_| Word::random(cols, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Word {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    pub fn column(&self, c: usize) -> Word {
        Word::from_bits((0..self.rows).map(|r| self.get(r, c))).expect("rows > 0")
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &Word) -> Result<Word> {
        if x.len() != self.cols {
            return Err(contract(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Word::from_bits(self.data.iter().map(|row| row.dot(x).expect("lengths checked")))
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols).map(|c| self.column(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| m[r].get(c)) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot).unwrap();
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Header of two little-endian `u64` dimensions (rows, cols), then all
    /// entries row-major, packed LSB-first like a [`Word`].
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols as u64).to_le_bytes());
        let flat = Word::from_bits(self.data.iter().flat_map(|r| r.iter())).expect("non-empty");
        out.extend_from_slice(&flat.packed_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 {
            return Err(Error::Malformed("matrix header shorter than 16 bytes".into()));
        }
        let rows = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        let cols = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        let total = rows
            .checked_mul(cols)
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::Malformed(format!("bad matrix dimensions {rows}x{cols}")))?;
        if bytes.len() - 16 != total.div_ceil(8) {
            return Err(Error::Malformed("matrix payload length mismatch".into()));
        }
        let flat = Word::from_packed(&bytes[16..], total)?;
        let data = (0..rows)
            .map(|r| flat.slice_padded(r * cols, cols))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(data)
    }
}

/// A single solution of `H t = b` with free variables set to zero, or `None`
/// when `b` is outside the column space.
pub fn solve_affine(h: &BitMatrix, b: &Word) -> Result<Option<Word>> {
    if b.len() != h.rows() {
        return Err(contract(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            h.rows()
        )));
    }
    // Augmented rows: coefficients plus the right-hand side bit.
    let mut rows: Vec<(Word, bool)> = (0..h.rows()).map(|r| (h.row(r).clone(), b.get(r))).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..h.cols() {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].0.get(c)) else {
            continue;
        };
        rows.swap(rank, p);
        let (prow, pbit) = rows[rank].clone();
        for (r, (row, bit)) in rows.iter_mut().enumerate() {
            if r != rank && row.get(c) {
                row.xor_assign(&prow).unwrap();
                *bit ^= pbit;
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rows[rank..].iter().any(|(_, bit)| *bit) {
        return Ok(None);
    }
    let mut t = Word::zeros(h.cols())?;
    for (r, &c) in pivots.iter().enumerate() {
        t.set(c, rows[r].1);
    }
    Ok(Some(t))
}

/// Binary linear `[n, k]` code given by its parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    h: BitMatrix,
    generator: BitMatrix,
    info_set: Vec<usize>,
}

impl LinearCode {
    /// Builds the code from a full-row-rank parity-check matrix.
    pub fn from_parity_check(h: BitMatrix) -> Result<Self> {
        let n = h.cols();
        let r = h.rows();
        if r >= n {
            return Err(contract(format!("parity-check matrix {r}x{n} leaves no message bits")));
        }
        if h.rank() != r {
            return Err(contract("parity-check matrix is not full row rank"));
        }
        let k = n - r;

        // Reduce H, choosing pivots right to left.
        let mut m: Vec<Word> = (0..r).map(|i| h.row(i).clone()).collect();
        let mut pivot_of_row = Vec::with_capacity(r);
        let mut rank = 0;
        for c in (0..n).rev() {
            let Some(p) = (rank..r).find(|&i| m[i].get(c)) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row.get(c) {
                    row.xor_assign(&pivot).unwrap();
                }
            }
            pivot_of_row.push(c);
            rank += 1;
            if rank == r {
                break;
            }
        }
        let info_set: Vec<usize> = (0..n).filter(|c| !pivot_of_row.contains(c)).collect();
        let gen_rows = info_set
            .iter()
            .map(|&f| {
                let mut g = Word::zeros(n)?;
                g.set(f, true);
                for (i, &p) in pivot_of_row.iter().enumerate() {
                    if m[i].get(f) {
                        g.set(p, true);
                    }
                }
                Ok(g)
            })
            .collect::<Result<Vec<_>>>()?;
        let generator = BitMatrix::from_rows(gen_rows)?;
        Ok(LinearCode {
            n,
            k,
            h,
            generator,
            info_set,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// `k x n` generator whose restriction to [`LinearCode::info_set`] is the
    /// identity.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Positions that carry the message bits, ascending.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// True when the message occupies the first `k` positions.
    pub fn is_systematic(&self) -> bool {
        self.info_set.iter().copied().eq(0..self.k)
    }

    /// Codeword carrying `message` on the information set.
    pub fn encode(&self, message: &Word) -> Result<Word> {
        if message.len() != self.k {
            return Err(contract(format!(
                "message of length {} for a code of dimension {}",
                message.len(),
                self.k
            )));
        }
        let mut c = Word::zeros(self.n)?;
        for (i, bit) in message.iter().enumerate() {
            if bit {
                c.xor_assign(self.generator.row(i))?;
            }
        }
        Ok(c)
    }

    pub fn is_codeword(&self, x: &Word) -> Result<bool> {
        Ok(syndrome(self, x)?.is_zero())
    }

    /// All `2^k` codewords in Gray-code order.
    pub fn codewords(&self) -> Result<Vec<Word>> {
        if self.k > LIST_DECODE_MAX_N {
            return Err(Error::Capability(format!(
                "enumerating 2^{} codewords is beyond the supported scale",
                self.k
            )));
        }
        let mut out = Vec::with_capacity(1 << self.k);
        let mut c = Word::zeros(self.n)?;
        out.push(c.clone());
        for i in 1u64..(1 << self.k) {
            c.xor_assign(self.generator.row(i.trailing_zeros() as usize))?;
            out.push(c.clone());
        }
        Ok(out)
    }

    pub fn min_distance(&self) -> Result<usize> {
        Ok(self
            .codewords()?
            .iter()
            .map(Word::count_ones)
            .filter(|&w| w > 0)
            .min()
            .unwrap_or(self.n + 1))
    }
}

pub fn syndrome(code: &LinearCode, x: &Word) -> Result<Word> {
    code.h.mul_vec(x)
}

/// Samples `H` uniformly among full-row-rank `(n-k) x n` matrices.
pub fn random_linear_code<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return Err(contract(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    for _ in 0..1000 {
        let h = BitMatrix::random(n - k, n, rng)?;
        if h.rank() == n - k {
            return LinearCode::from_parity_check(h);
        }
    }
    Err(Error::ProbabilisticFailure(format!(
        "no full-rank {}x{n} parity-check matrix in 1000 draws",
        n - k
    )))
}

/// Every codeword within `radius` of `y`, lexicographically ordered.
///
/// Enumerates whichever is smaller: the `2^k` codewords or the radius ball
/// around `y`.
pub fn list_decode_exhaustive(code: &LinearCode, y: &Word, radius: usize) -> Result<Vec<Word>> {
    if code.n > LIST_DECODE_MAX_N {
        return Err(Error::Capability(format!(
            "exhaustive list decoding supports n <= {LIST_DECODE_MAX_N}, got {}; use smaller parameters",
            code.n
        )));
    }
    if y.len() != code.n {
        return Err(contract(format!("word of length {} for block length {}", y.len(), code.n)));
    }
    let radius = radius.min(code.n);
    let ball = ball_size_u64(radius, code.n);
    let mut out = if ball < (1u64 << code.k) {
        list_by_ball(code, y, radius)?
    } else {
        list_by_codewords(code, y, radius)?
    };
    out.sort();
    Ok(out)
}

fn ball_size_u64(r: usize, n: usize) -> u64 {
    let mut term = 1u64;
    let mut total = 1u64;
    for i in 1..=r {
        term = term * (n - i + 1) as u64 / i as u64;
        total += term;
    }
    total
}

pub(crate) fn list_by_codewords(code: &LinearCode, y: &Word, radius: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for c in code.codewords()? {
        if hamming_distance(&c, y)? <= radius {
            out.push(c);
        }
    }
    Ok(out)
}

pub(crate) fn list_by_ball(code: &LinearCode, y: &Word, radius: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for_each_pattern(code.n, radius, |e| {
        let c = y.xor(e)?;
        if code.is_codeword(&c)? {
            out.push(c);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Largest list [`list_decode_exhaustive`] can return at `radius`.
///
/// The list at `y` has one entry per error `e` of weight `<= radius` with
/// `H e = H y`, so it depends only on the syndrome of `y`.
pub fn max_list_size(code: &LinearCode, radius: usize) -> Result<usize> {
    if code.n > LIST_DECODE_MAX_N {
        return Err(Error::Capability(format!(
            "list-size enumeration supports n <= {LIST_DECODE_MAX_N}, got {}",
            code.n
        )));
    }
    let mut counts: HashMap<Word, usize> = HashMap::new();
    for_each_pattern(code.n, radius, |e| {
        *counts.entry(syndrome(code, e)?).or_default() += 1;
        Ok(())
    })?;
    Ok(counts.values().copied().max().unwrap_or(1))
}

/// Calls `f` on every word of weight `<= radius`, lowest weight first.
fn for_each_pattern(n: usize, radius: usize, mut f: impl FnMut(&Word) -> Result<()>) -> Result<()> {
    fn rec(
        e: &mut Word,
        start: usize,
        left: usize,
        f: &mut dyn FnMut(&Word) -> Result<()>,
    ) -> Result<()> {
        if left == 0 {
            return f(e);
        }
        for i in start..e.len() {
            e.flip(i);
            rec(e, i + 1, left - 1, f)?;
            e.flip(i);
        }
        Ok(())
    }
    let mut e = Word::zeros(n)?;
    for w in 0..=radius.min(n) {
        rec(&mut e, 0, w, &mut f)?;
    }
    Ok(())
}

/// Syndrome-table decoder: maps each syndrome reachable by an error of weight
/// `<= radius` to that error. Construction fails if two such errors share a
/// syndrome, i.e. if the code does not uniquely decode to `radius`.
#[derive(Clone, Debug)]
pub struct SyndromeDecoder {
    code: LinearCode,
    radius: usize,
    leaders: HashMap<Word, Word>,
}

impl SyndromeDecoder {
    pub fn new(code: &LinearCode, radius: usize) -> Result<Self> {
        if code.n - code.k > 24 {
            return Err(Error::Capability("syndrome table limited to 24 check bits".into()));
        }
        let mut leaders = HashMap::new();
        let mut clash = false;
        for_each_pattern(code.n, radius, |e| {
            if leaders.insert(syndrome(code, e)?, e.clone()).is_some() {
                clash = true;
            }
            Ok(())
        })?;
        if clash {
            return Err(contract(format!(
                "[{}, {}] code does not uniquely decode radius {radius}",
                code.n, code.k
            )));
        }
        Ok(SyndromeDecoder {
            code: code.clone(),
            radius,
            leaders,
        })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The codeword within `radius` of `y`, if one exists.
    pub fn decode(&self, y: &Word) -> Result<Option<Word>> {
        let s = syndrome(&self.code, y)?;
        match self.leaders.get(&s) {
            Some(e) => Ok(Some(y.xor(e)?)),
            None => Ok(None),
        }
    }
}

/// The `[7, 4]` Hamming code; column `j` of `H` is the binary form of `j + 1`.
pub fn hamming_7_4() -> LinearCode {
    let rows = (0..3)
        .map(|r| Word::from_bits((1..=7u32).map(|j| (j >> r) & 1 == 1)).unwrap())
        .collect();
    LinearCode::from_parity_check(BitMatrix::from_rows(rows).unwrap()).unwrap()
}

/// Nearest-codeword decoding up to the code's unique-decoding radius
/// `floor((d - 1) / 2)`.
pub fn unique_decode(code: &LinearCode, y: &Word) -> Result<Option<Word>> {
    let radius = code.min_distance()?.saturating_sub(1) / 2;
    SyndromeDecoder::new(code, radius)?.decode(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(n: usize, i: usize) -> Word {
        let mut e = Word::zeros(n).unwrap();
        e.set(i, true);
        e
    }

    #[test]
    fn hamming_parameters() {
        let code = hamming_7_4();
        assert_eq!((code.n(), code.k()), (7, 4));
        assert!((code.rate() - 4.0 / 7.0).abs() < 1e-15);
        assert!(code.is_systematic());
        assert_eq!(code.min_distance().unwrap(), 3);
    }

    #[test]
    fn syndrome_of_unit_vector_is_column() {
        let code = hamming_7_4();
        for i in 0..7 {
            let s = syndrome(&code, &unit(7, i)).unwrap();
            assert_eq!(s, code.parity_check().column(i));
            assert_eq!(s.to_u64().unwrap(), i as u64 + 1);
        }
    }

    #[test]
    fn syndrome_linearity_and_codewords() {
        let code = hamming_7_4();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for c in code.codewords().unwrap() {
            assert!(syndrome(&code, &c).unwrap().is_zero());
        }
        for _ in 0..100 {
            let x = Word::random(7, &mut rng).unwrap();
            let y = Word::random(7, &mut rng).unwrap();
            let lhs = syndrome(&code, &x.xor(&y).unwrap()).unwrap();
            let rhs = syndrome(&code, &x).unwrap().xor(&syndrome(&code, &y).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hamming_corrects_every_single_error() {
        let code = hamming_7_4();
        let words = code.codewords().unwrap();
        assert_eq!(words.len(), 16);
        for c in &words {
            assert_eq!(unique_decode(&code, c).unwrap().as_ref(), Some(c));
            for i in 0..7 {
                let mut y = c.clone();
                y.flip(i);
                assert_eq!(unique_decode(&code, &y).unwrap().as_ref(), Some(c));
            }
        }
    }

    #[test]
    fn systematic_encoding_keeps_message_prefix() {
        let code = hamming_7_4();
        for m in 0..16u64 {
            let msg = Word::from_u64(m, 4).unwrap();
            let c = code.encode(&msg).unwrap();
            assert!(code.is_codeword(&c).unwrap());
            assert_eq!(c.slice_padded(0, 4).unwrap(), msg);
        }
        // H G^T = 0.
        let g = code.generator();
        for i in 0..g.rows() {
            assert!(syndrome(&code, g.row(i)).unwrap().is_zero());
        }
    }

    #[test]
    fn non_systematic_layout_records_info_set() {
        // Last two columns equal: they cannot both be pivots.
        let h = BitMatrix::from_rows(vec!["1011".parse().unwrap(), "0111".parse().unwrap()]).unwrap();
        let code = LinearCode::from_parity_check(h).unwrap();
        assert!(!code.is_systematic());
        assert_eq!(code.info_set().len(), 2);
        for m in 0..4u64 {
            let msg = Word::from_u64(m, 2).unwrap();
            let c = code.encode(&msg).unwrap();
            assert!(code.is_codeword(&c).unwrap());
            for (i, &pos) in code.info_set().iter().enumerate() {
                assert_eq!(c.get(pos), msg.get(i));
            }
        }
    }

    #[test]
    fn solve_affine_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = BitMatrix::random(5, 12, &mut rng).unwrap();
        let zero = solve_affine(&h, &Word::zeros(5).unwrap()).unwrap().unwrap();
        assert!(zero.is_zero());
        let id = BitMatrix::identity(6).unwrap();
        let b: Word = "101101".parse().unwrap();
        assert_eq!(solve_affine(&id, &b).unwrap(), Some(b));
        assert!(solve_affine(&h, &Word::zeros(4).unwrap()).is_err());
    }

    #[test]
    fn solve_affine_detects_inconsistency() {
        let h = BitMatrix::from_rows(vec!["110".parse().unwrap(), "110".parse().unwrap()]).unwrap();
        assert_eq!(solve_affine(&h, &"10".parse().unwrap()).unwrap(), None);
        assert!(solve_affine(&h, &"11".parse().unwrap()).unwrap().is_some());
    }

    #[test]
    fn solve_affine_resubstitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let rows = rng.gen_range(1..=10);
            let cols = rng.gen_range(1..=20);
            let h = BitMatrix::random(rows, cols, &mut rng).unwrap();
            let x = Word::random(cols, &mut rng).unwrap();
            let b = h.mul_vec(&x).unwrap();
            let t = solve_affine(&h, &b).unwrap().expect("consistent by construction");
            assert_eq!(h.mul_vec(&t).unwrap(), b);
        }
    }

    #[test]
    fn random_codes_have_full_rank_and_2k_codewords() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let n = rng.gen_range(2..=16);
            let k = rng.gen_range(1..n);
            let code = random_linear_code(n, k, &mut rng).unwrap();
            assert_eq!(code.parity_check().rank(), n - k);
            // Null space by full enumeration of the cube.
            let zeros = (0..1u64 << n)
                .filter(|&v| code.is_codeword(&Word::from_u64(v, n).unwrap()).unwrap())
                .count();
            assert_eq!(zeros, 1 << k);
        }
        let single_parity = random_linear_code(9, 8, &mut rng).unwrap();
        assert_eq!(single_parity.parity_check().rows(), 1);
        assert!(!single_parity.parity_check().row(0).is_zero());
        assert!(random_linear_code(5, 5, &mut rng).is_err());
        assert!(random_linear_code(5, 0, &mut rng).is_err());
    }

    fn cube_oracle(code: &LinearCode, y: &Word, radius: usize) -> Vec<Word> {
        (0..1u64 << code.n())
            .map(|v| Word::from_u64(v, code.n()).unwrap())
            .filter(|z| code.is_codeword(z).unwrap() && hamming_distance(z, y).unwrap() <= radius)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    #[test]
    fn list_decoding_matches_cube_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, k) in [(12, 4), (14, 5), (10, 7), (13, 9)] {
            let code = random_linear_code(n, k, &mut rng).unwrap();
            for _ in 0..10 {
                let y = Word::random(n, &mut rng).unwrap();
                for radius in 0..=4 {
                    let oracle = cube_oracle(&code, &y, radius);
                    assert_eq!(list_decode_exhaustive(&code, &y, radius).unwrap(), oracle);
                    let mut a = list_by_ball(&code, &y, radius).unwrap();
                    let mut b = list_by_codewords(&code, &y, radius).unwrap();
                    a.sort();
                    b.sort();
                    assert_eq!(a, oracle);
                    assert_eq!(b, oracle);
                }
            }
        }
    }

    #[test]
    fn list_decoding_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let code = random_linear_code(10, 3, &mut rng).unwrap();
        let y = Word::random(10, &mut rng).unwrap();
        assert_eq!(list_decode_exhaustive(&code, &y, 10).unwrap().len(), 8);
        let c = code.codewords().unwrap()[5].clone();
        assert_eq!(list_decode_exhaustive(&code, &c, 0).unwrap(), vec![c]);
        let big = random_linear_code(25, 3, &mut rng).unwrap();
        assert!(matches!(
            list_decode_exhaustive(&big, &Word::zeros(25).unwrap(), 1),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn syndrome_decoder_rejects_ambiguous_radius() {
        let code = hamming_7_4();
        assert!(SyndromeDecoder::new(&code, 1).is_ok());
        assert!(SyndromeDecoder::new(&code, 2).is_err());
    }

    #[test]
    fn matrix_bytes_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = BitMatrix::random(5, 13, &mut rng).unwrap();
        let bytes = m.to_bytes();
        assert_eq!(bytes.len(), 16 + (65usize).div_ceil(8));
        assert_eq!(BitMatrix::from_bytes(&bytes).unwrap(), m);
        assert_eq!(m.transpose().transpose(), m);
    }

    proptest::proptest! {
        #[test]
        fn solve_is_right_inverse_of_syndrome(seed in 0u64..10_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let code = random_linear_code(15, 6, &mut rng).unwrap();
            let x = Word::random(15, &mut rng).unwrap();
            let s = syndrome(&code, &x).unwrap();
            let t = solve_affine(code.parity_check(), &s).unwrap().unwrap();
            proptest::prop_assert_eq!(syndrome(&code, &t).unwrap(), s);
        }
    }
}
