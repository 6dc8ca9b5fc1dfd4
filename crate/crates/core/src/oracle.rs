//! Partial-function algebra over `{0,1}^n -> {0,1}^m` and exhaustive or
//! seeded generation of the total functions consistent with a partial one.
//!
//! A [`PartialFunction`] is a finite map defined on a subset of `{0,1}^n`; an
//! [`Oracle`] is defined everywhere. The operations here mirror the usual
//! set-theoretic ones: [`Oracle::patch`] overrides an oracle on the domain of
//! a partial function, [`PartialFunction::combine`] unions two compatible
//! partial functions, [`Oracle::subtract`] keeps exactly the points a partial
//! function leaves open, and [`identity_extend`] closes a partial function
//! with the identity map.
//!
//! Enumeration order is fixed: [`enumerate_consistent`] lists functions in
//! lexicographic order of the value vector over the undefined points, so
//! every exhaustive loop in the crate is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::bits::{format_bits, parse_bits};
use crate::{Error, Result};

/// A partial map from `{0,1}^n` to `{0,1}^m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartialFunction {
    n: u32,
    m: u32,
    entries: BTreeMap<u32, u32>,
}

/// A total map from `{0,1}^n` to `{0,1}^m`, stored as a table of length `2^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Oracle {
    n: u32,
    m: u32,
    table: Vec<u32>,
}

impl PartialFunction {
    /// The empty partial function on the given signature.
    pub fn empty(n: u32, m: u32) -> Self {
        assert!(n <= 20 && m <= 20, "signature too large for a table");
        PartialFunction {
            n,
            m,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(n: u32, m: u32, entries: &[(u32, u32)]) -> Result<Self> {
        let mut f = PartialFunction::empty(n, m);
        for &(x, y) in entries {
            f.insert(x, y)?;
        }
        Ok(f)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn get(&self, x: u32) -> Option<u32> {
        self.entries.get(&x).copied()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.entries.contains_key(&x)
    }

    /// Domain size |D_f|.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Points of the domain in ascending order.
    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().map(|(&x, &y)| (x, y))
    }

    /// Insert a point, rejecting a conflicting value for an existing point.
    pub fn insert(&mut self, x: u32, y: u32) -> Result<()> {
        debug_assert!(x < 1 << self.n && y < 1 << self.m);
        match self.entries.get(&x) {
            Some(&old) if old != y => Err(Error::Conflict(x)),
            _ => {
                self.entries.insert(x, y);
                Ok(())
            }
        }
    }

    /// Union of two compatible partial functions. Errors with the first
    /// conflicting point if the inputs disagree somewhere; that signals a
    /// caller bug, not bad data.
    pub fn combine(&self, other: &PartialFunction) -> Result<PartialFunction> {
        check_signature(self.n, self.m, other.n, other.m)?;
        let mut out = self.clone();
        for (x, y) in other.entries() {
            out.insert(x, y)?;
        }
        Ok(out)
    }

    /// Restriction of `self` to the points where `other` is undefined.
    /// Errors if the two disagree on a common point.
    pub fn without(&self, other: &PartialFunction) -> Result<PartialFunction> {
        check_signature(self.n, self.m, other.n, other.m)?;
        let mut out = PartialFunction::empty(self.n, self.m);
        for (x, y) in self.entries() {
            match other.get(x) {
                None => out.insert(x, y)?,
                Some(o) if o != y => return Err(Error::Inconsistent(x)),
                Some(_) => {}
            }
        }
        Ok(out)
    }

    /// True if every defined point of `self` agrees with the oracle.
    pub fn consistent_with(&self, oracle: &Oracle) -> bool {
        self.n == oracle.n && self.m == oracle.m && self.entries().all(|(x, y)| oracle.get(x) == y)
    }
}

impl Oracle {
    pub fn from_table(n: u32, m: u32, table: Vec<u32>) -> Self {
        assert_eq!(table.len(), 1usize << n, "table must cover all 2^n points");
        assert!(table.iter().all(|&y| y < 1 << m), "value out of range");
        Oracle { n, m, table }
    }

    /// The constant-`y` oracle.
    pub fn constant(n: u32, m: u32, y: u32) -> Self {
        Oracle::from_table(n, m, vec![y; 1 << n])
    }

    /// The identity oracle on `n`-bit strings.
    pub fn identity(n: u32) -> Self {
        Oracle::from_table(n, n, (0..1u32 << n).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn get(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// The oracle that agrees with `f` on its domain and with `self`
    /// elsewhere.
    pub fn patch(&self, f: &PartialFunction) -> Result<Oracle> {
        check_signature(self.n, self.m, f.n, f.m)?;
        let mut table = self.table.clone();
        for (x, y) in f.entries() {
            table[x as usize] = y;
        }
        Ok(Oracle {
            n: self.n,
            m: self.m,
            table,
        })
    }

    /// The partial function equal to `self` exactly where `f` is undefined.
    /// Requires `self` to be consistent with `f`.
    pub fn subtract(&self, f: &PartialFunction) -> Result<PartialFunction> {
        check_signature(self.n, self.m, f.n, f.m)?;
        for (x, y) in f.entries() {
            if self.get(x) != y {
                return Err(Error::Inconsistent(x));
            }
        }
        let mut out = PartialFunction::empty(self.n, self.m);
        for x in 0..1u32 << self.n {
            if !f.contains(x) {
                out.insert(x, self.get(x))?;
            }
        }
        Ok(out)
    }

    /// The full graph of the oracle as a partial function.
    pub fn graph(&self) -> PartialFunction {
        let mut out = PartialFunction::empty(self.n, self.m);
        for x in 0..1u32 << self.n {
            out.insert(x, self.get(x)).expect("fresh map");
        }
        out
    }
}

fn check_signature(n: u32, m: u32, got_n: u32, got_m: u32) -> Result<()> {
    if n != got_n || m != got_m {
        return Err(Error::SignatureMismatch {
            expected_n: n,
            expected_m: m,
            got_n,
            got_m,
        });
    }
    Ok(())
}

/// Close a partial function with the identity map: the resulting oracle is
/// `f` on its domain and `x -> x` elsewhere. Only defined for `m = n`.
pub fn identity_extend(f: &PartialFunction) -> Result<Oracle> {
    if f.n != f.m {
        return Err(Error::WidthMismatch { n: f.n, m: f.m });
    }
    Oracle::identity(f.n).patch(f)
}

/// Close a partial function with an arbitrary fill oracle. This is the
/// `m != n` escape hatch for callers that cannot use [`identity_extend`].
pub fn default_extend(f: &PartialFunction, fill: &Oracle) -> Result<Oracle> {
    fill.patch(f)
}

/// Number of total functions consistent with `h`: `2^(m * (2^n - |D_h|))`.
pub fn consistent_count(h: &PartialFunction) -> u128 {
    let free = (1u64 << h.n) - h.len() as u64;
    let exponent = h.m as u64 * free;
    if exponent >= 128 {
        u128::MAX
    } else {
        1u128 << exponent
    }
}

/// All total functions consistent with `h`, exactly once each, in
/// lexicographic order of the value vector over the undefined points
/// (undefined points taken in ascending order, first point most
/// significant).
pub fn enumerate_consistent(h: &PartialFunction, budget: u64) -> Result<Vec<Oracle>> {
    let count = consistent_count(h);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: count,
            budget,
        });
    }
    Ok(iter_consistent(h).collect())
}

/// Iterator form of [`enumerate_consistent`], for loops that do not want to
/// hold the whole family. The budget check is the caller's responsibility.
pub fn iter_consistent(h: &PartialFunction) -> impl Iterator<Item = Oracle> + '_ {
    let free: Vec<u32> = (0..1u32 << h.n).filter(|&x| !h.contains(x)).collect();
    let mut base = vec![0u32; 1 << h.n];
    for (x, y) in h.entries() {
        base[x as usize] = y;
    }
    let total = consistent_count(h) as u64;
    let m = h.m;
    let n = h.n;
    (0..total).map(move |idx| {
        let mut table = base.clone();
        // idx spells the value vector in base 2^m, first free point most
        // significant.
        for (j, &x) in free.iter().enumerate() {
            let shift = m as u64 * (free.len() - 1 - j) as u64;
            table[x as usize] = ((idx >> shift) as u32) & ((1 << m) - 1);
        }
        Oracle { n, m, table }
    })
}

/// Draw a uniform total function consistent with `h`, deterministically in
/// the RNG state.
pub fn sample_consistent<R: Rng + ?Sized>(h: &PartialFunction, rng: &mut R) -> Oracle {
    let mut table = vec![0u32; 1 << h.n];
    for x in 0..1u32 << h.n {
        table[x as usize] = match h.get(x) {
            Some(y) => y,
            None => rng.gen_range(0..1u32 << h.m),
        };
    }
    Oracle {
        n: h.n,
        m: h.m,
        table,
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_oracle_text(&self.graph()))
    }
}

/// Render a (partial) function in the line-oriented text format:
///
/// ```text
/// n=2 m=1
/// 00 -> 1
/// 11 -> 0
/// ```
///
/// Points are listed in ascending order; undefined points are omitted.
pub fn format_oracle_text(f: &PartialFunction) -> String {
    let mut out = format!("n={} m={}\n", f.n, f.m);
    for (x, y) in f.entries() {
        out.push_str(&format_bits(x, f.n));
        out.push_str(" -> ");
        out.push_str(&format_bits(y, f.m));
        out.push('\n');
    }
    out
}

/// Parse the text format produced by [`format_oracle_text`]. Blank lines and
/// `#` comments are ignored. The result may be partial; use
/// [`parse_oracle_text_total`] to require a full table.
pub fn parse_oracle_text(text: &str) -> Result<PartialFunction> {
    let mut f: Option<PartialFunction> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if f.is_none() {
            let (n, m) = parse_header(line).ok_or_else(|| Error::Parse {
                line: lineno,
                msg: format!("expected header `n=<int> m=<int>`, got `{line}`"),
            })?;
            f = Some(PartialFunction::empty(n, m));
            continue;
        }
        let f = f.as_mut().expect("header parsed");
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected `x_bits -> y_bits`, got `{line}`"),
        })?;
        let (x, xw) = parse_bits(lhs.trim()).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("bad input bits `{}`", lhs.trim()),
        })?;
        let (y, yw) = parse_bits(rhs.trim()).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("bad output bits `{}`", rhs.trim()),
        })?;
        if xw != f.n() || yw != f.m() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!(
                    "widths {}->{} do not match header n={} m={}",
                    xw,
                    yw,
                    f.n(),
                    f.m()
                ),
            });
        }
        f.insert(x, y).map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("point {} listed twice with different values", lhs.trim()),
        })?;
    }
    f.ok_or(Error::Parse {
        line: 0,
        msg: "missing header line `n=<int> m=<int>`".into(),
    })
}

/// Parse the text format and require every point to be present.
pub fn parse_oracle_text_total(text: &str) -> Result<Oracle> {
    let f = parse_oracle_text(text)?;
    if f.len() != 1 << f.n() {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "oracle is missing {} of {} points",
                (1 << f.n()) - f.len(),
                1 << f.n()
            ),
        });
    }
    Ok(identity_like_total(&f))
}

fn identity_like_total(f: &PartialFunction) -> Oracle {
    let mut table = vec![0u32; 1 << f.n()];
    for (x, y) in f.entries() {
        table[x as usize] = y;
    }
    Oracle {
        n: f.n(),
        m: f.m(),
        table,
    }
}

fn parse_header(line: &str) -> Option<(u32, u32)> {
    let mut n = None;
    let mut m = None;
    for part in line.split_whitespace() {
        if let Some(v) = part.strip_prefix("n=") {
            n = v.parse().ok();
        } else {
            let v = part.strip_prefix("m=")?;
            m = v.parse().ok();
        }
    }
    match (n, m) {
        (Some(n), Some(m)) if n > 0 && m > 0 && n <= 20 && m <= 20 => Some((n, m)),
        _ => None,
    }
}
