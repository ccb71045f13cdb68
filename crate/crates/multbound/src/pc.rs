//! Power-commutator presentations of finite p-groups.
//!
//! A presentation has generators `g1 … gn`, all of relative order `p`,
//! power relations `gi^p = w` and commutator relations `[gj, gi] = w`
//! (`j > i`) where every right-hand side is a normal word over strictly
//! higher-indexed generators.  Collection from the left turns arbitrary
//! words into normal form; a presentation passing the standard overlap
//! tests defines a group of order exactly `p^n`.

use std::fmt;

use thiserror::Error;

use crate::group::TableGroup;

/// Default cap on the number of elements a presentation may be
/// materialised to.
pub const DEFAULT_TABLE_CAP: u64 = 2048;

#[derive(Debug, Error)]
pub enum PcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("inconsistent presentation: {0}")]
    Inconsistent(ConsistencyFailure),
    #[error("group order {order} exceeds table cap {cap}")]
    CapExceeded { order: u64, cap: u64 },
}

/// The first overlap test that failed, if any.  Generator indices are
/// 1-based, matching the file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConsistencyFailure {
    /// `(gk gj) gi != gk (gj gi)` for `k > j > i`.
    Associativity { k: usize, j: usize, i: usize },
    /// `gj^p gi != gj^(p-1) (gj gi)` for `j > i`.
    PowerLeft { j: usize, i: usize },
    /// `gj gi^p != (gj gi) gi^(p-1)` for `j > i`.
    PowerRight { j: usize, i: usize },
    /// `gi^p gi != gi gi^p`.
    PowerSelf { i: usize },
}

impl fmt::Display for ConsistencyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConsistencyFailure::Associativity { k, j, i } => {
                write!(f, "(g{k} g{j}) g{i} != g{k} (g{j} g{i})")
            }
            ConsistencyFailure::PowerLeft { j, i } => {
                write!(f, "g{j}^p g{i} != g{j}^(p-1) (g{j} g{i})")
            }
            ConsistencyFailure::PowerRight { j, i } => {
                write!(f, "g{j} g{i}^p != (g{j} g{i}) g{i}^(p-1)")
            }
            ConsistencyFailure::PowerSelf { i } => write!(f, "g{i}^p g{i} != g{i} g{i}^p"),
        }
    }
}

/// An element in normal form `g1^e1 … gn^en`, all exponents in `[0, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalWord {
    pub exps: Vec<u32>,
}

impl NormalWord {
    pub fn identity(ngens: usize) -> Self {
        NormalWord { exps: vec![0; ngens] }
    }

    /// The word consisting of the single generator `gen` (0-based).
    pub fn generator(ngens: usize, gen: usize) -> Self {
        let mut w = Self::identity(ngens);
        w.exps[gen] = 1;
        w
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "g{}", i + 1)?;
            } else {
                write!(f, "g{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A power-commutator presentation.  `pow[i]` is the normal word for
/// `g_{i+1}^p` and `comm[j][i]` the one for `[g_{j+1}, g_{i+1}]`
/// (`j > i`, 0-based storage); both default to the identity.
#[derive(Debug, Clone)]
pub struct PcPresentation {
    pub p: u64,
    pub ngens: usize,
    pow: Vec<NormalWord>,
    comm: Vec<Vec<NormalWord>>,
}

fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parse a presentation from the line-oriented text format.
///
/// `#` starts a comment; `/` may be used instead of a newline so that
/// one-line inputs like `"p 3 / n 3 / comm 2 1 : g3 1"` work.
pub fn parse_presentation(text: &str) -> Result<PcPresentation, PcError> {
    let err = |line: usize, msg: String| PcError::Parse { line, msg };

    // Logical statements with their source line numbers.
    let mut stmts: Vec<(usize, Vec<&str>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        for chunk in content.split('/') {
            let toks: Vec<&str> = chunk.split_whitespace().collect();
            if !toks.is_empty() {
                stmts.push((line, toks));
            }
        }
    }

    let mut it = stmts.into_iter();
    let (pline, ptoks) = it
        .next()
        .ok_or_else(|| err(1, "empty presentation".into()))?;
    if ptoks.len() != 2 || ptoks[0] != "p" {
        return Err(err(pline, "expected `p <prime>`".into()));
    }
    let p: u64 = ptoks[1]
        .parse()
        .map_err(|_| err(pline, format!("bad prime `{}`", ptoks[1])))?;
    if !is_prime(p) {
        return Err(err(pline, format!("{p} is not prime")));
    }

    let (nline, ntoks) = it
        .next()
        .ok_or_else(|| err(pline, "expected `n <count>` after `p`".into()))?;
    if ntoks.len() != 2 || ntoks[0] != "n" {
        return Err(err(nline, "expected `n <count>`".into()));
    }
    let ngens: usize = ntoks[1]
        .parse()
        .map_err(|_| err(nline, format!("bad generator count `{}`", ntoks[1])))?;

    let mut pres = PcPresentation {
        p,
        ngens,
        pow: vec![NormalWord::identity(ngens); ngens],
        comm: (0..ngens)
            .map(|j| vec![NormalWord::identity(ngens); j])
            .collect(),
    };
    let mut pow_seen = vec![false; ngens];
    let mut comm_seen: Vec<Vec<bool>> = (0..ngens).map(|j| vec![false; j]).collect();

    // Parse a right-hand-side word `g<k> <e> ...`; indices must be
    // strictly increasing and greater than `min_index` (1-based).
    let parse_word = |line: usize, toks: &[&str], min_index: usize| -> Result<NormalWord, PcError> {
        if toks.len() % 2 != 0 {
            return Err(err(line, "word must be (<gk> <ek>) pairs".into()));
        }
        let mut w = NormalWord::identity(ngens);
        let mut last = min_index;
        for pair in toks.chunks(2) {
            let g = pair[0];
            if !g.starts_with('g') {
                return Err(err(line, format!("expected generator, got `{g}`")));
            }
            let idx: usize = g[1..]
                .parse()
                .map_err(|_| err(line, format!("bad generator `{g}`")))?;
            if idx == 0 || idx > ngens {
                return Err(err(line, format!("generator index {idx} out of range 1..={ngens}")));
            }
            if idx <= last {
                return Err(err(
                    line,
                    format!("generator g{idx} must have index > {last} (normal form, higher-indexed only)"),
                ));
            }
            let e: u64 = pair[1]
                .parse()
                .map_err(|_| err(line, format!("bad exponent `{}`", pair[1])))?;
            if e == 0 || e >= p {
                return Err(err(line, format!("exponent {e} out of range 1..={}", p - 1)));
            }
            w.exps[idx - 1] = e as u32;
            last = idx;
        }
        Ok(w)
    };

    for (line, toks) in it {
        match toks[0] {
            "pow" => {
                let colon = toks
                    .iter()
                    .position(|&t| t == ":")
                    .ok_or_else(|| err(line, "expected `pow <i> : <word>`".into()))?;
                if colon != 2 {
                    return Err(err(line, "expected `pow <i> : <word>`".into()));
                }
                let i: usize = toks[1]
                    .parse()
                    .map_err(|_| err(line, format!("bad index `{}`", toks[1])))?;
                if i == 0 || i > ngens {
                    return Err(err(line, format!("pow index {i} out of range 1..={ngens}")));
                }
                if pow_seen[i - 1] {
                    return Err(err(line, format!("duplicate pow relation for g{i}")));
                }
                pow_seen[i - 1] = true;
                pres.pow[i - 1] = parse_word(line, &toks[3..], i)?;
            }
            "comm" => {
                let colon = toks
                    .iter()
                    .position(|&t| t == ":")
                    .ok_or_else(|| err(line, "expected `comm <j> <i> : <word>`".into()))?;
                if colon != 3 {
                    return Err(err(line, "expected `comm <j> <i> : <word>`".into()));
                }
                let j: usize = toks[1]
                    .parse()
                    .map_err(|_| err(line, format!("bad index `{}`", toks[1])))?;
                let i: usize = toks[2]
                    .parse()
                    .map_err(|_| err(line, format!("bad index `{}`", toks[2])))?;
                if j == 0 || j > ngens || i == 0 || i > ngens {
                    return Err(err(line, format!("comm indices ({j}, {i}) out of range 1..={ngens}")));
                }
                if j <= i {
                    return Err(err(line, format!("comm requires j > i, got j={j}, i={i}")));
                }
                if comm_seen[j - 1][i - 1] {
                    return Err(err(line, format!("duplicate comm relation for [g{j}, g{i}]")));
                }
                comm_seen[j - 1][i - 1] = true;
                // The RHS only needs indices above `i` for collection to
                // terminate; index `j` itself may appear (and must, to
                // express e.g. conjugation g1^-1 g2 g1 = g2^2).
                pres.comm[j - 1][i - 1] = parse_word(line, &toks[4..], i)?;
            }
            other => {
                return Err(err(line, format!("unknown statement `{other}`")));
            }
        }
    }

    Ok(pres)
}

impl PcPresentation {
    pub fn order(&self) -> u64 {
        self.p.pow(self.ngens as u32)
    }

    pub fn identity(&self) -> NormalWord {
        NormalWord::identity(self.ngens)
    }

    pub fn power_relation(&self, i: usize) -> &NormalWord {
        &self.pow[i]
    }

    /// `[g_j, g_i]` for 0-based `j > i`.
    pub fn comm_relation(&self, j: usize, i: usize) -> &NormalWord {
        &self.comm[j][i]
    }

    /// Multiply two normal words, collecting the result to normal form.
    pub fn multiply(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        let mut acc = a.clone();
        for i in 0..self.ngens {
            for _ in 0..b.exps[i] {
                acc = self.mult_gen(&acc, i);
            }
        }
        acc
    }

    /// `w * g_i` for a normal word `w` and 0-based generator `i`.
    ///
    /// Writing `w = h * g_i^e * t` with `h` on lower and `t` on higher
    /// generators, `w g_i = h * g_i^(e+1) * (g_i^-1 t g_i)`; the
    /// conjugate stays on higher generators so the result is normal.
    fn mult_gen(&self, w: &NormalWord, i: usize) -> NormalWord {
        let conj = self.conjugate_tail(w, i);
        let e = w.exps[i] + 1;
        let mut out = NormalWord::identity(self.ngens);
        out.exps[..i].copy_from_slice(&w.exps[..i]);
        if e as u64 == self.p {
            out.exps[i] = 0;
            let tail = self.multiply(&self.pow[i], &conj);
            out.exps[i + 1..].copy_from_slice(&tail.exps[i + 1..]);
        } else {
            out.exps[i] = e;
            out.exps[i + 1..].copy_from_slice(&conj.exps[i + 1..]);
        }
        out
    }

    /// `g_i^-1 * (part of w above i) * g_i`, using
    /// `g_i^-1 g_k g_i = g_k [g_k, g_i]` letter by letter.
    fn conjugate_tail(&self, w: &NormalWord, i: usize) -> NormalWord {
        let mut acc = NormalWord::identity(self.ngens);
        for k in i + 1..self.ngens {
            for _ in 0..w.exps[k] {
                acc = self.mult_gen(&acc, k);
                acc = self.multiply(&acc, &self.comm[k][i]);
            }
        }
        acc
    }

    /// Order of the element represented by `a`.
    pub fn element_order(&self, a: &NormalWord) -> u64 {
        let mut acc = a.clone();
        let mut ord = 1;
        while !acc.is_identity() {
            acc = self.multiply(&acc, a);
            ord += 1;
        }
        ord
    }

    pub fn inverse(&self, a: &NormalWord) -> NormalWord {
        if a.is_identity() {
            return a.clone();
        }
        let ord = self.element_order(a);
        self.power(a, ord as i64 - 1)
    }

    pub fn power(&self, a: &NormalWord, k: i64) -> NormalWord {
        if k < 0 {
            return self.power(&self.inverse(a), -k);
        }
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    /// `a^-1 b^-1 a b` in normal form.
    pub fn commutator(&self, a: &NormalWord, b: &NormalWord) -> NormalWord {
        let mut w = self.inverse(a);
        w = self.multiply(&w, &self.inverse(b));
        w = self.multiply(&w, a);
        self.multiply(&w, b)
    }

    /// Collect an arbitrary word of signed generator letters
    /// (0-based generator, exponent) to normal form.
    pub fn collect(&self, letters: &[(usize, i64)]) -> NormalWord {
        let mut acc = self.identity();
        for &(g, e) in letters {
            assert!(g < self.ngens, "generator index {g} out of range");
            let gen = NormalWord::generator(self.ngens, g);
            acc = self.multiply(&acc, &self.power(&gen, e));
        }
        acc
    }

    /// Run the overlap tests; `Ok(())` certifies that the presentation
    /// defines a group of order exactly `p^n`.
    pub fn consistency_check(&self) -> Result<(), ConsistencyFailure> {
        let n = self.ngens;
        let gen = |i: usize| NormalWord::generator(n, i);
        let gen_pow = |i: usize, e: u32| {
            let mut w = NormalWord::identity(n);
            w.exps[i] = e;
            w
        };
        let pm1 = (self.p - 1) as u32;

        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    let lhs = self.multiply(&self.multiply(&gen(k), &gen(j)), &gen(i));
                    let rhs = self.multiply(&gen(k), &self.multiply(&gen(j), &gen(i)));
                    if lhs != rhs {
                        return Err(ConsistencyFailure::Associativity {
                            k: k + 1,
                            j: j + 1,
                            i: i + 1,
                        });
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                // gj^p gi vs gj^(p-1) (gj gi)
                let lhs = self.multiply(&self.pow[j], &gen(i));
                let rhs = self.multiply(&gen_pow(j, pm1), &self.multiply(&gen(j), &gen(i)));
                if lhs != rhs {
                    return Err(ConsistencyFailure::PowerLeft { j: j + 1, i: i + 1 });
                }
                // gj gi^p vs (gj gi) gi^(p-1)
                let lhs = self.multiply(&gen(j), &self.pow[i]);
                let rhs = self.multiply(&self.multiply(&gen(j), &gen(i)), &gen_pow(i, pm1));
                if lhs != rhs {
                    return Err(ConsistencyFailure::PowerRight { j: j + 1, i: i + 1 });
                }
            }
        }
        for i in 0..n {
            let lhs = self.multiply(&self.pow[i], &gen(i));
            let rhs = self.multiply(&gen(i), &self.pow[i]);
            if lhs != rhs {
                return Err(ConsistencyFailure::PowerSelf { i: i + 1 });
            }
        }
        Ok(())
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_check().is_ok()
    }

    /// Index of a normal word in the mixed-radix element enumeration
    /// (identity is 0).
    pub fn word_index(&self, w: &NormalWord) -> usize {
        let mut idx = 0usize;
        for i in (0..self.ngens).rev() {
            idx = idx * self.p as usize + w.exps[i] as usize;
        }
        idx
    }

    pub fn index_word(&self, mut idx: usize) -> NormalWord {
        let mut w = self.identity();
        for i in 0..self.ngens {
            w.exps[i] = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        w
    }

    /// Materialise the full multiplication table.
    ///
    /// The presentation must pass [`Self::consistency_check`] and the
    /// order must not exceed `cap`.
    pub fn materialize_table(&self, cap: u64) -> Result<TableGroup, PcError> {
        if let Err(f) = self.consistency_check() {
            return Err(PcError::Inconsistent(f));
        }
        let order = self.order();
        if order > cap {
            return Err(PcError::CapExceeded { order, cap });
        }
        let order = order as usize;
        let words: Vec<NormalWord> = (0..order).map(|i| self.index_word(i)).collect();
        let mut table = vec![0u32; order * order];
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                table[i * order + j] = self.word_index(&self.multiply(a, b)) as u32;
            }
        }
        Ok(TableGroup::from_table(self.p, table, Some(words)))
    }
}
