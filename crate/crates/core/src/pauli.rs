//! Pauli strings in the binary symplectic representation.
//!
//! A string on `n <= 64` qubits is stored as two bit masks plus a global
//! phase `i^k`. Bit `q` of each mask refers to qubit `q`, and qubit 0 is the
//! leftmost letter of the text form. A site with both bits set is the letter
//! `Y` itself (not `XZ`), so `"XYZ"` has phase exponent 0.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can describe.
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    /// The `(x, z)` bit pair of the letter.
    pub const fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::I => '1',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn parse(c: char) -> Option<Self> {
        match c {
            '1' | 'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Global phase `i^k`, `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub const fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub const fn exponent(self) -> u8 {
        self.0
    }

    pub const fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Real sign for `+1`/`-1`, `None` for `±i`.
    pub const fn sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    /// `(re, im)` of `i^k`.
    pub const fn to_complex_parts(self) -> (f64, f64) {
        match self.0 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    }

    pub const fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

/// `i^phase * P_0 ⊗ P_1 ⊗ ... ⊗ P_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

#[inline]
fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_width(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    Ok(())
}

impl PauliString {
    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(Self { n, x: 0, z: 0, phase: Phase::ONE })
    }

    /// Build from masks; bits above `n` must be clear.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        check_width(n)?;
        let m = width_mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::MaskOutOfRange { n });
        }
        Ok(Self { n, x, z, phase })
    }

    /// Letters listed by qubit, `+1` phase.
    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        check_width(letters.len())?;
        let mut p = Self { n: letters.len(), x: 0, z: 0, phase: Phase::ONE };
        for (q, l) in letters.iter().enumerate() {
            p.set(q, *l);
        }
        Ok(p)
    }

    /// Sparse constructor: `letters` as `(qubit, letter)` pairs on an identity
    /// background. Repeated qubits are rejected.
    pub fn from_sparse(n: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        let mut seen = 0u64;
        for &(q, l) in letters {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if seen >> q & 1 == 1 {
                return Err(Error::DuplicateQubit { qubit: q });
            }
            seen |= 1 << q;
            p.set(q, l);
        }
        Ok(p)
    }

    /// `Z` on every qubit of `mask`.
    pub fn z_on(n: usize, mask: u64) -> Result<Self> {
        Self::from_masks(n, 0, mask, Phase::ONE)
    }

    /// `X` on every qubit of `mask`.
    pub fn x_on(n: usize, mask: u64) -> Result<Self> {
        Self::from_masks(n, mask, 0, Phase::ONE)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn negated(self) -> Self {
        let phase = self.phase.mul(Phase::MINUS_ONE);
        self.with_phase(phase)
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    fn set(&mut self, q: usize, l: Letter) {
        let (xb, zb) = l.bits();
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | if xb { bit } else { 0 };
        self.z = (self.z & !bit) | if zb { bit } else { 0 };
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn support_vec(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.support() >> q & 1 == 1).collect()
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.support() == 0
    }

    /// Hermitian strings are exactly those with a real global phase.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Number of `Y` letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    fn check_same_width(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let xl = x1 & !z1;
        let yl = x1 & z1;
        let zl = !x1 & z1;
        let xr = x2 & !z2;
        let yr = x2 & z2;
        let zr = !x2 & z2;
        // XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
        let plus = (xl & yr) | (yl & zr) | (zl & xr);
        let minus = (yl & xr) | (zl & yr) | (xl & zr);
        let k = self.phase.exponent() as i64 + other.phase.exponent() as i64
            + plus.count_ones() as i64
            - minus.count_ones() as i64;
        Self { n: self.n, x: x1 ^ x2, z: z1 ^ z2, phase: Phase::from_exponent(k) }
    }

    /// Symplectic inner product parity: `true` when the strings commute.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_width(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Place this string into a register of `n_out` qubits, moving qubit `q`
    /// to `map[q]`. Identity letters are ignored, so `map` entries for qubits
    /// outside the support may be anything below `n_out`.
    pub fn embed(&self, n_out: usize, map: &[usize]) -> Result<Self> {
        check_width(n_out)?;
        if map.len() != self.n {
            return Err(Error::QubitCountMismatch { left: self.n, right: map.len() });
        }
        let mut out = Self { n: n_out, x: 0, z: 0, phase: self.phase };
        let mut used = 0u64;
        for q in self.support_vec() {
            let t = map[q];
            if t >= n_out {
                return Err(Error::QubitOutOfRange { qubit: t, n: n_out });
            }
            if used >> t & 1 == 1 {
                return Err(Error::DuplicateQubit { qubit: t });
            }
            used |= 1 << t;
            out.set(t, self.letter(q));
        }
        Ok(out)
    }

    /// Restriction to the qubits listed in `keep`, in that order. The phase
    /// is kept.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let mut out = Self::identity(keep.len())?.with_phase(self.phase);
        for (i, &q) in keep.iter().enumerate() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
            out.set(i, self.letter(q));
        }
        Ok(out)
    }
}

/// Multiply a non-empty list left to right.
pub fn product(items: &[PauliString]) -> Result<PauliString> {
    let (first, rest) = items.split_first().ok_or(Error::EmptyInput)?;
    rest.iter().try_fold(*first, |acc, p| acc.multiply(p))
}

/// `true` iff every pair in `set` anticommutes.
pub fn pairwise_anticommuting(set: &[PauliString]) -> Result<bool> {
    for (i, p) in set.iter().enumerate() {
        for q in &set[i + 1..] {
            if p.commutes(q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase.exponent() {
            0 => {}
            1 => f.write_str("i")?,
            2 => f.write_str("-")?,
            _ => f.write_str("-i")?,
        }
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional `+`, `-`, `i`, `+i` or `-i` prefix followed by the
    /// letters `1`, `I`, `X`, `Y`, `Z`.
    fn from_str(text: &str) -> Result<Self> {
        let (phase, body, offset) = if let Some(rest) = text.strip_prefix("-i") {
            (Phase::MINUS_I, rest, 2)
        } else if let Some(rest) = text.strip_prefix("+i") {
            (Phase::I, rest, 2)
        } else if let Some(rest) = text.strip_prefix('-') {
            (Phase::MINUS_ONE, rest, 1)
        } else if let Some(rest) = text.strip_prefix('+') {
            (Phase::ONE, rest, 1)
        } else if let Some(rest) = text.strip_prefix('i') {
            (Phase::I, rest, 1)
        } else {
            (Phase::ONE, text, 0)
        };
        if body.is_empty() {
            return Err(Error::Parse { position: offset, message: String::from("no Pauli letters") });
        }
        let mut letters = Vec::with_capacity(body.len());
        for (i, c) in body.chars().enumerate() {
            let l = Letter::parse(c).ok_or_else(|| Error::Parse {
                position: offset + i,
                message: alloc::format!("unexpected symbol {c:?}"),
            })?;
            letters.push(l);
        }
        Ok(PauliString::from_letters(&letters)?.with_phase(phase))
    }
}
