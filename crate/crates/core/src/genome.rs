//! Multicellular GEP genome representation.
//!
//! A [`Chromosome`] holds a pool of *ordinary* genes, each with a head, a tail
//! and a Dc domain, and one *homeotic* gene per decision variable. Ordinary
//! genes evaluate to real numbers; homeotic genes combine those numbers through
//! gene-reference terminals `g0..g(n-1)` into the coordinates of a candidate
//! point.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Function symbols understood by the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Sqrt,
    Exp,
}

impl Op {
    /// The four arithmetic operators every problem gets.
    pub const BASE: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

    pub fn arity(self) -> usize {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Div => 2,
            Op::Sin | Op::Cos | Op::Sqrt | Op::Exp => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
            Op::Sin => 'S',
            Op::Cos => 'C',
            Op::Sqrt => 'Q',
            Op::Exp => 'E',
        }
    }

    pub fn from_symbol(c: char) -> Option<Op> {
        Some(match c {
            '+' => Op::Add,
            '-' => Op::Sub,
            '*' => Op::Mul,
            '/' => Op::Div,
            'S' => Op::Sin,
            'C' => Op::Cos,
            'Q' => Op::Sqrt,
            'E' => Op::Exp,
            _ => return None,
        })
    }
}

/// One position of a gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Function(Op),
    /// Literal terminal `a`..`j`, standing for the digits 0..9.
    Digit(u8),
    /// The `?` terminal, bound to a constant through the Dc domain.
    Constant,
    /// Dc-domain letter `A`, `B`, ...: an index into the constant set.
    Dc(u8),
    /// Homeotic terminal `gk`: the value of ordinary gene `k`.
    GeneRef(u8),
}

impl Symbol {
    pub fn arity(self) -> usize {
        match self {
            Symbol::Function(op) => op.arity(),
            _ => 0,
        }
    }

    pub fn is_function(self) -> bool {
        matches!(self, Symbol::Function(_))
    }

    /// Parses a head or tail token: `+`, `a`, `?`, `g1`, ...
    ///
    /// Dc letters share characters with operators (`C`, `E`, `Q`, `S`), so
    /// they have their own parser, [`Symbol::parse_dc`].
    pub fn parse(token: &str) -> Option<Symbol> {
        let mut chars = token.chars();
        let first = chars.next()?;
        let rest = chars.as_str();
        if first == 'g' && !rest.is_empty() {
            return rest.parse().ok().map(Symbol::GeneRef);
        }
        if !rest.is_empty() {
            return None;
        }
        if let Some(op) = Op::from_symbol(first) {
            return Some(Symbol::Function(op));
        }
        match first {
            '?' => Some(Symbol::Constant),
            'a'..='j' => Some(Symbol::Digit(first as u8 - b'a')),
            _ => None,
        }
    }

    pub fn parse_dc(c: char) -> Option<Symbol> {
        c.is_ascii_uppercase().then(|| Symbol::Dc(c as u8 - b'A'))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::Function(op) => write!(f, "{}", op.symbol()),
            Symbol::Digit(d) => write!(f, "{}", (b'a' + d) as char),
            Symbol::Constant => f.write_str("?"),
            Symbol::Dc(i) => write!(f, "{}", (b'A' + i) as char),
            Symbol::GeneRef(k) => write!(f, "g{k}"),
        }
    }
}

/// Maximum number of Dc letters (`A`..`Z`).
pub const MAX_CONSTANTS: usize = 26;

/// Function set, terminal set and Dc alphabet for one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSet {
    functions: Vec<Op>,
    constant_count: usize,
}

impl SymbolSet {
    /// Base operators `+ - * /` plus the given problem-specific operators.
    pub fn new(extra: &[Op], constant_count: usize) -> Result<Self> {
        if constant_count == 0 || constant_count > MAX_CONSTANTS {
            return Err(Error::config(format!(
                "constant set size must be in 1..={MAX_CONSTANTS}, got {constant_count}"
            )));
        }
        let mut functions = Op::BASE.to_vec();
        for &op in extra {
            if !functions.contains(&op) {
                functions.push(op);
            }
        }
        Ok(SymbolSet { functions, constant_count })
    }

    pub fn functions(&self) -> &[Op] {
        &self.functions
    }

    /// `?` followed by the digits `a..j`.
    pub fn terminals(&self) -> Vec<Symbol> {
        std::iter::once(Symbol::Constant).chain((0..10).map(Symbol::Digit)).collect()
    }

    pub fn dc_alphabet(&self) -> Vec<Symbol> {
        (0..self.constant_count as u8).map(Symbol::Dc).collect()
    }

    pub fn constant_count(&self) -> usize {
        self.constant_count
    }

    pub fn max_arity(&self) -> usize {
        self.functions.iter().map(|op| op.arity()).max().unwrap_or(0)
    }
}

/// Tail length that guarantees every head decodes: `t = h·(M−1) + 1`.
pub fn tail_length(head_len: usize, max_arity: usize) -> usize {
    head_len * (max_arity - 1) + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneLayout {
    pub ordinary_head_len: usize,
    pub ordinary_tail_len: usize,
    pub homeotic_head_len: usize,
    pub homeotic_tail_len: usize,
    pub dc_len: usize,
    pub n_ordinary: usize,
    pub n_homeotic: usize,
}

impl GeneLayout {
    pub fn new(
        ordinary_head_len: usize,
        homeotic_head_len: usize,
        n_ordinary: usize,
        n_homeotic: usize,
        max_arity: usize,
    ) -> Result<Self> {
        if ordinary_head_len == 0 || homeotic_head_len == 0 {
            return Err(Error::config("gene head lengths must be positive"));
        }
        if n_ordinary == 0 || n_ordinary > u8::MAX as usize + 1 {
            return Err(Error::config(format!("ordinary gene count must be in 1..=256, got {n_ordinary}")));
        }
        if n_homeotic == 0 {
            return Err(Error::config("at least one homeotic gene is required"));
        }
        if max_arity == 0 {
            return Err(Error::config("function set must contain an operator"));
        }
        let ordinary_tail_len = tail_length(ordinary_head_len, max_arity);
        Ok(GeneLayout {
            ordinary_head_len,
            ordinary_tail_len,
            homeotic_head_len,
            homeotic_tail_len: tail_length(homeotic_head_len, max_arity),
            dc_len: ordinary_tail_len,
            n_ordinary,
            n_homeotic,
        })
    }

    pub fn ordinary_len(&self) -> usize {
        self.ordinary_head_len + self.ordinary_tail_len + self.dc_len
    }

    pub fn homeotic_len(&self) -> usize {
        self.homeotic_head_len + self.homeotic_tail_len
    }

    /// Number of symbols in the flat linearization of a chromosome.
    pub fn flat_len(&self) -> usize {
        self.n_ordinary * self.ordinary_len() + self.n_homeotic * self.homeotic_len()
    }
}

/// A single gene. Homeotic genes have an empty Dc domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gene {
    pub head: Vec<Symbol>,
    pub tail: Vec<Symbol>,
    pub dc: Vec<Symbol>,
}

impl Gene {
    /// Symbol at K-expression position `i` (head followed by tail).
    #[inline]
    pub fn symbol(&self, i: usize) -> Symbol {
        if i < self.head.len() {
            self.head[i]
        } else {
            self.tail[i - self.head.len()]
        }
    }

    /// Head plus tail length.
    pub fn coding_len(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    fn parts(&self) -> [&[Symbol]; 3] {
        [&self.head, &self.tail, &self.dc]
    }

    fn parts_mut(&mut self) -> [&mut Vec<Symbol>; 3] {
        [&mut self.head, &mut self.tail, &mut self.dc]
    }
}

impl fmt::Display for Gene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts().into_iter().enumerate() {
            if i > 0 && !part.is_empty() {
                f.write_str("|")?;
            }
            for (j, s) in part.iter().enumerate() {
                // gene references are multi-character tokens
                if j > 0 && matches!(s, Symbol::GeneRef(_)) {
                    f.write_str(" ")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    OrdinaryHead,
    OrdinaryTail,
    Dc,
    HomeoticHead,
    HomeoticTail,
}

impl Region {
    pub const ALL: [Region; 5] =
        [Region::OrdinaryHead, Region::OrdinaryTail, Region::Dc, Region::HomeoticHead, Region::HomeoticTail];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::OrdinaryHead | Region::HomeoticHead => "head",
            Region::OrdinaryTail | Region::HomeoticTail => "tail",
            Region::Dc => "Dc domain",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    pub ordinary: Vec<Gene>,
    pub homeotic: Vec<Gene>,
}

impl Chromosome {
    pub fn flat_len(&self) -> usize {
        self.ordinary.iter().chain(&self.homeotic).map(|g| g.coding_len() + g.dc.len()).sum()
    }

    /// All positions in flat order: ordinary genes (head, tail, Dc), then
    /// homeotic genes (head, tail).
    pub fn slots(&self) -> impl Iterator<Item = &Symbol> {
        self.ordinary.iter().chain(&self.homeotic).flat_map(|g| g.parts().into_iter().flatten())
    }

    pub fn slots_mut(&mut self) -> impl Iterator<Item = &mut Symbol> {
        self.ordinary
            .iter_mut()
            .chain(self.homeotic.iter_mut())
            .flat_map(|g| g.parts_mut().into_iter().flat_map(|p| p.iter_mut()))
    }

    /// Mutable access to flat position `pos` together with its region.
    pub fn slot_mut(&mut self, mut pos: usize) -> Option<(&mut Symbol, Region)> {
        const ORDINARY: [Region; 3] = [Region::OrdinaryHead, Region::OrdinaryTail, Region::Dc];
        const HOMEOTIC: [Region; 3] = [Region::HomeoticHead, Region::HomeoticTail, Region::Dc];
        let n_ordinary = self.ordinary.len();
        for (gi, gene) in self.ordinary.iter_mut().chain(self.homeotic.iter_mut()).enumerate() {
            let regions = if gi < n_ordinary { ORDINARY } else { HOMEOTIC };
            for (part, region) in gene.parts_mut().into_iter().zip(regions) {
                if pos < part.len() {
                    return Some((&mut part[pos], region));
                }
                pos -= part.len();
            }
        }
        None
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.ordinary.iter().enumerate() {
            writeln!(f, "ordinary {i}: {g}")?;
        }
        for (i, g) in self.homeotic.iter().enumerate() {
            writeln!(f, "homeotic {i}: {g}")?;
        }
        Ok(())
    }
}

/// The shared random numerical constants indexed by Dc letters.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSet {
    pub values: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

impl ConstantSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Draws `n` values uniformly from `[lo, hi]`.
pub fn random_constant_set<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<ConstantSet> {
    if n == 0 {
        return Err(Error::config("constant set must not be empty"));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::config(format!("constant range [{lo}, {hi}] is empty or unbounded")));
    }
    let values = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    Ok(ConstantSet { values, lo, hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneKind {
    Ordinary,
    Homeotic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    GeneCount { expected: usize, found: usize },
    Length { expected: usize, found: usize },
    FunctionInTail(Symbol),
    NotInAlphabet(Symbol),
}

/// One broken structural rule, located by gene and position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: GeneKind,
    pub gene: usize,
    pub region: Option<Region>,
    pub position: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            GeneKind::Ordinary => "ordinary",
            GeneKind::Homeotic => "homeotic",
        };
        match &self.rule {
            Rule::GeneCount { expected, found } => {
                return write!(f, "expected {expected} {kind} genes, found {found}")
            }
            _ => write!(f, "{kind} gene {}", self.gene)?,
        }
        if let Some(region) = self.region {
            write!(f, " {region}")?;
        }
        if let Some(pos) = self.position {
            write!(f, " position {pos}")?;
        }
        match &self.rule {
            Rule::GeneCount { .. } => unreachable!(),
            Rule::Length { expected, found } => {
                write!(f, ": length {found}, expected {expected}")
            }
            Rule::FunctionInTail(s) => write!(f, ": tail contains function symbol '{s}'"),
            Rule::NotInAlphabet(s) => write!(f, ": symbol '{s}' is not in the legal alphabet"),
        }
    }
}

/// Layout and symbol set bundled with the per-region alphabets derived from them.
#[derive(Debug, Clone)]
pub struct Encoding {
    layout: GeneLayout,
    symbols: SymbolSet,
    alphabets: [Vec<Symbol>; 5],
}

impl Encoding {
    pub fn new(layout: GeneLayout, symbols: SymbolSet) -> Result<Self> {
        let m = symbols.max_arity();
        if layout.ordinary_tail_len != tail_length(layout.ordinary_head_len, m)
            || layout.homeotic_tail_len != tail_length(layout.homeotic_head_len, m)
        {
            return Err(Error::config("gene tail lengths do not match the function set arity"));
        }
        if layout.dc_len != layout.ordinary_tail_len {
            return Err(Error::config("Dc length must equal the ordinary tail length"));
        }
        let functions: Vec<Symbol> = symbols.functions().iter().map(|&op| Symbol::Function(op)).collect();
        let terminals = symbols.terminals();
        let gene_refs: Vec<Symbol> = (0..layout.n_ordinary).map(|k| Symbol::GeneRef(k as u8)).collect();
        let alphabets = [
            functions.iter().chain(&terminals).copied().collect(),
            terminals,
            symbols.dc_alphabet(),
            functions.iter().chain(&gene_refs).copied().collect(),
            gene_refs,
        ];
        Ok(Encoding { layout, symbols, alphabets })
    }

    pub fn layout(&self) -> &GeneLayout {
        &self.layout
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    /// Legal symbols for a region.
    pub fn alphabet(&self, region: Region) -> &[Symbol] {
        &self.alphabets[region.index()]
    }

    fn random_part<R: Rng + ?Sized>(&self, region: Region, len: usize, rng: &mut R) -> Vec<Symbol> {
        let alphabet = self.alphabet(region);
        (0..len).map(|_| *alphabet.choose(rng).expect("alphabets are non-empty")).collect()
    }

    /// Every position drawn uniformly from its region's alphabet.
    pub fn random_chromosome<R: Rng + ?Sized>(&self, rng: &mut R) -> Chromosome {
        let l = &self.layout;
        let ordinary = (0..l.n_ordinary)
            .map(|_| Gene {
                head: self.random_part(Region::OrdinaryHead, l.ordinary_head_len, rng),
                tail: self.random_part(Region::OrdinaryTail, l.ordinary_tail_len, rng),
                dc: self.random_part(Region::Dc, l.dc_len, rng),
            })
            .collect();
        let homeotic = (0..l.n_homeotic)
            .map(|_| Gene {
                head: self.random_part(Region::HomeoticHead, l.homeotic_head_len, rng),
                tail: self.random_part(Region::HomeoticTail, l.homeotic_tail_len, rng),
                dc: Vec::new(),
            })
            .collect();
        Chromosome { ordinary, homeotic }
    }

    pub fn validate(&self, c: &Chromosome) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let l = &self.layout;
        let specs = [
            (
                GeneKind::Ordinary,
                &c.ordinary,
                l.n_ordinary,
                [
                    (Region::OrdinaryHead, l.ordinary_head_len),
                    (Region::OrdinaryTail, l.ordinary_tail_len),
                    (Region::Dc, l.dc_len),
                ],
            ),
            (
                GeneKind::Homeotic,
                &c.homeotic,
                l.n_homeotic,
                [
                    (Region::HomeoticHead, l.homeotic_head_len),
                    (Region::HomeoticTail, l.homeotic_tail_len),
                    (Region::Dc, 0),
                ],
            ),
        ];
        for (kind, genes, expected_count, regions) in specs {
            if genes.len() != expected_count {
                out.push(Violation {
                    kind,
                    gene: 0,
                    region: None,
                    position: None,
                    rule: Rule::GeneCount { expected: expected_count, found: genes.len() },
                });
            }
            for (gi, gene) in genes.iter().enumerate() {
                for (part, (region, expected_len)) in gene.parts().into_iter().zip(regions) {
                    if part.len() != expected_len {
                        out.push(Violation {
                            kind,
                            gene: gi,
                            region: Some(region),
                            position: None,
                            rule: Rule::Length { expected: expected_len, found: part.len() },
                        });
                    }
                    let alphabet = self.alphabet(region);
                    for (pos, &s) in part.iter().enumerate() {
                        if alphabet.contains(&s) {
                            continue;
                        }
                        let tail = matches!(region, Region::OrdinaryTail | Region::HomeoticTail);
                        let rule = if tail && s.is_function() {
                            Rule::FunctionInTail(s)
                        } else {
                            Rule::NotInAlphabet(s)
                        };
                        out.push(Violation {
                            kind,
                            gene: gi,
                            region: Some(region),
                            position: Some(pos),
                            rule,
                        });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn encoding(h: usize, n_ordinary: usize, n_homeotic: usize) -> Encoding {
        let symbols = SymbolSet::new(&[], 10).unwrap();
        let layout = GeneLayout::new(h, h, n_ordinary, n_homeotic, symbols.max_arity()).unwrap();
        Encoding::new(layout, symbols).unwrap()
    }

    #[test]
    fn tail_length_matches_head_rule() {
        assert_eq!(tail_length(3, 2), 4);
        assert_eq!(tail_length(6, 2), 7);
        assert_eq!(tail_length(4, 2), 5);
        assert_eq!(tail_length(5, 3), 11);
    }

    #[test]
    fn default_layout_lengths() {
        let symbols = SymbolSet::new(&[Op::Sin], 10).unwrap();
        let l = GeneLayout::new(6, 4, 2, 3, symbols.max_arity()).unwrap();
        assert_eq!((l.ordinary_tail_len, l.homeotic_tail_len, l.dc_len), (7, 5, 7));
        assert_eq!(l.flat_len(), 2 * 20 + 3 * 9);
    }

    #[test]
    fn symbol_set_invariants() {
        let s = SymbolSet::new(&[Op::Sin, Op::Sqrt, Op::Sin], 10).unwrap();
        assert_eq!(s.functions().len(), 6);
        assert_eq!(s.max_arity(), 2);
        let terminals = s.terminals();
        assert_eq!(terminals.len(), 11);
        assert!(terminals.contains(&Symbol::Constant));
        let rendered: String = terminals.iter().map(|t| t.to_string()).collect();
        assert_eq!(rendered, "?abcdefghij");
        assert!(SymbolSet::new(&[], 0).is_err());
        assert!(SymbolSet::new(&[], 27).is_err());
    }

    #[test]
    fn symbol_parse_display() {
        for tok in ["+", "-", "*", "/", "S", "C", "Q", "E", "?", "a", "j", "g0", "g12"] {
            let s = Symbol::parse(tok).unwrap();
            assert_eq!(s.to_string(), tok);
        }
        assert_eq!(Symbol::parse("C"), Some(Symbol::Function(Op::Cos)));
        assert_eq!(Symbol::parse_dc('C'), Some(Symbol::Dc(2)));
        assert_eq!(Symbol::parse_dc('J').unwrap().to_string(), "J");
        assert_eq!(Symbol::parse_dc('?'), None);
        assert_eq!(Symbol::parse("k"), None);
        assert_eq!(Symbol::parse("ab"), None);
    }

    #[test]
    fn random_chromosome_is_valid_and_deterministic() {
        let enc = encoding(3, 2, 1);
        let a = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(9));
        let b = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(enc.validate(&a), Ok(()));
        assert_eq!(a.flat_len(), enc.layout().flat_len());
        assert_eq!(a.slots().count(), a.flat_len());
    }

    #[test]
    fn function_in_ordinary_tail_is_reported() {
        let enc = encoding(3, 2, 1);
        let mut c = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(1));
        c.ordinary[1].tail[2] = Symbol::Function(Op::Add);
        let v = enc.validate(&c).unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].gene, 1);
        assert_eq!(v[0].position, Some(2));
        assert_eq!(v[0].rule, Rule::FunctionInTail(Symbol::Function(Op::Add)));
        assert!(v[0].to_string().contains("tail contains function symbol"));
    }

    #[test]
    fn literal_in_homeotic_head_is_reported() {
        let enc = encoding(3, 2, 1);
        let mut c = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(2));
        c.homeotic[0].head[0] = Symbol::Digit(0);
        let v = enc.validate(&c).unwrap_err();
        assert_eq!(v[0].kind, GeneKind::Homeotic);
        assert_eq!(v[0].region, Some(Region::HomeoticHead));
        assert_eq!(v[0].rule, Rule::NotInAlphabet(Symbol::Digit(0)));
    }

    #[test]
    fn wrong_lengths_and_counts_are_reported() {
        let enc = encoding(3, 2, 2);
        let mut c = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(3));
        c.ordinary[0].dc.pop();
        c.homeotic.pop();
        let v = enc.validate(&c).unwrap_err();
        assert!(v.iter().any(|v| v.rule == Rule::Length { expected: 4, found: 3 }));
        assert!(v.iter().any(|v| v.rule == Rule::GeneCount { expected: 2, found: 1 }));
        // Dc letter outside the alphabet
        let mut c = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(3));
        c.ordinary[0].dc[0] = Symbol::Dc(15);
        assert!(enc.validate(&c).is_err());
    }

    #[test]
    fn slot_mut_walks_flat_order() {
        let enc = encoding(3, 2, 1);
        let mut c = enc.random_chromosome(&mut ChaCha8Rng::seed_from_u64(4));
        let flat: Vec<Symbol> = c.slots().copied().collect();
        let l = *enc.layout();
        for (pos, expected) in flat.iter().enumerate() {
            let (s, region) = c.slot_mut(pos).unwrap();
            assert_eq!(s, expected);
            assert!(enc.alphabet(region).contains(s));
        }
        assert!(c.slot_mut(l.flat_len()).is_none());
        let (_, r) = c.slot_mut(l.ordinary_head_len).unwrap();
        assert_eq!(r, Region::OrdinaryTail);
        let (_, r) = c.slot_mut(2 * l.ordinary_len()).unwrap();
        assert_eq!(r, Region::HomeoticHead);
    }

    #[test]
    fn constant_set_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cs = random_constant_set(10, -5.12, 5.12, &mut rng).unwrap();
        assert_eq!(cs.len(), 10);
        assert!(cs.values.iter().all(|v| (-5.12..=5.12).contains(v)));
        let eps = 1e-9;
        let tight = random_constant_set(1, 0.0, eps, &mut rng).unwrap();
        assert!((0.0..=eps).contains(&tight.values[0]));
        assert!(random_constant_set(3, 1.0, 1.0, &mut rng).is_err());
        assert!(random_constant_set(3, 2.0, 1.0, &mut rng).is_err());
        assert!(random_constant_set(0, 0.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn constant_set_mean_is_centered() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cs = random_constant_set(100_000, 0.0, 1.0, &mut rng).unwrap();
        let mean = cs.values.iter().sum::<f64>() / cs.len() as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn positions_are_uniform_over_their_alphabet() {
        // chi-squared goodness of fit per position, 10_000 samples
        let enc = encoding(3, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<Chromosome> = (0..10_000).map(|_| enc.random_chromosome(&mut rng)).collect();
        let mut probe = samples[0].clone();
        for pos in 0..enc.layout().flat_len() {
            let region = probe.slot_mut(pos).unwrap().1;
            let alphabet = enc.alphabet(region);
            let mut counts = vec![0usize; alphabet.len()];
            for c in &samples {
                let s = c.slots().nth(pos).unwrap();
                counts[alphabet.iter().position(|a| a == s).unwrap()] += 1;
            }
            let expected = samples.len() as f64 / alphabet.len() as f64;
            let chi2: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
            // df <= 14; 99.9th percentile of chi2(14) is 36.1
            assert!(chi2 < 36.2, "position {pos} ({region:?}): chi2 {chi2}");
        }
    }
}
