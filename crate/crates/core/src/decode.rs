//! Karva (K-expression) decoding and evaluation.
//!
//! A gene is read breadth-first: the first symbol is the root and every
//! function node claims the next `arity` unclaimed symbols as its children.
//! The `k`-th expressed `?` is bound to the constant named by the `k`-th Dc
//! letter.

use std::fmt;

use crate::genome::{Chromosome, ConstantSet, Gene, Op, Symbol};

/// Denominators smaller than this make `/` return 1.
pub const DIVISION_GUARD: f64 = 1e-12;
/// Largest exponent passed to `exp`.
pub const EXP_CLAMP: f64 = 700.0;

/// Total versions of the function symbols.
pub fn protected_apply(op: Op, args: &[f64]) -> f64 {
    debug_assert_eq!(args.len(), op.arity());
    match op {
        Op::Add => args[0] + args[1],
        Op::Sub => args[0] - args[1],
        Op::Mul => args[0] * args[1],
        Op::Div => {
            if args[1].abs() < DIVISION_GUARD {
                1.0
            } else {
                args[0] / args[1]
            }
        }
        Op::Sin => args[0].sin(),
        Op::Cos => args[0].cos(),
        Op::Sqrt => args[0].abs().sqrt(),
        Op::Exp => args[0].min(EXP_CLAMP).exp(),
    }
}

/// Number of leading symbols that make up the expression tree.
pub fn expressed_len(gene: &Gene) -> usize {
    let mut open = 1usize;
    let mut i = 0;
    let n = gene.coding_len();
    while open > 0 && i < n {
        open = open + gene.symbol(i).arity() - 1;
        i += 1;
    }
    i
}

/// Number of `?` terminals inside the expressed region.
pub fn expressed_constants(gene: &Gene) -> usize {
    (0..expressed_len(gene)).filter(|&i| gene.symbol(i) == Symbol::Constant).count()
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprTree {
    Digit(u8),
    /// A `?` resolved to entry `index` of the constant set.
    Constant {
        index: usize,
    },
    GeneRef(usize),
    Apply {
        op: Op,
        children: Vec<ExprTree>,
    },
}

impl ExprTree {
    pub fn eval(&self, constants: &[f64], gene_values: &[f64]) -> f64 {
        match self {
            ExprTree::Digit(d) => f64::from(*d),
            ExprTree::Constant { index } => constants.get(*index).copied().unwrap_or(f64::NAN),
            ExprTree::GeneRef(k) => gene_values.get(*k).copied().unwrap_or(f64::NAN),
            ExprTree::Apply { op, children } => {
                let args: Vec<f64> = children.iter().map(|c| c.eval(constants, gene_values)).collect();
                protected_apply(*op, &args)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ExprTree::Apply { children, .. } => 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ExprTree::Apply { children, .. } => 1 + children.iter().map(|c| c.size()).sum::<usize>(),
            _ => 1,
        }
    }
}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprTree::Digit(d) => write!(f, "{d}"),
            ExprTree::Constant { index } => write!(f, "c[{}]", (b'A' + *index as u8) as char),
            ExprTree::GeneRef(k) => write!(f, "g{k}"),
            ExprTree::Apply { op, children } => match (op.arity(), children.as_slice()) {
                (2, [l, r]) => write!(f, "({l} {} {r})", op.symbol()),
                _ => {
                    let name = match op {
                        Op::Sin => "sin",
                        Op::Cos => "cos",
                        Op::Sqrt => "sqrt",
                        Op::Exp => "exp",
                        _ => unreachable!("binary operators handled above"),
                    };
                    write!(f, "{name}({})", children[0])
                }
            },
        }
    }
}

/// Builds the phenotype tree of a gene, binding each expressed `?` to its Dc letter.
///
/// The gene must be structurally valid (its tail long enough for its head).
pub fn build_tree(gene: &Gene) -> ExprTree {
    let len = expressed_len(gene);
    let mut first_child = Vec::with_capacity(len);
    let mut constant_slot = Vec::with_capacity(len);
    let mut next = 1;
    let mut seen_constants = 0;
    for i in 0..len {
        first_child.push(next);
        next += gene.symbol(i).arity();
        constant_slot.push(seen_constants);
        if gene.symbol(i) == Symbol::Constant {
            seen_constants += 1;
        }
    }
    fn node(gene: &Gene, i: usize, first_child: &[usize], constant_slot: &[usize]) -> ExprTree {
        match gene.symbol(i) {
            Symbol::Function(op) => ExprTree::Apply {
                op,
                children: (0..op.arity())
                    .map(|c| node(gene, first_child[i] + c, first_child, constant_slot))
                    .collect(),
            },
            Symbol::Digit(d) => ExprTree::Digit(d),
            Symbol::Constant => {
                let index = match gene.dc.get(constant_slot[i]) {
                    Some(Symbol::Dc(j)) => *j as usize,
                    _ => usize::MAX,
                };
                ExprTree::Constant { index }
            }
            Symbol::GeneRef(k) => ExprTree::GeneRef(k as usize),
            // a Dc letter outside the Dc domain has no value
            Symbol::Dc(_) => ExprTree::Constant { index: usize::MAX },
        }
    }
    node(gene, 0, &first_child, &constant_slot)
}

/// Evaluates a gene directly from its linear form, without building a tree.
///
/// Children of a node always sit to its right, so a single right-to-left pass
/// sees every child before its parent.
pub fn eval_gene(gene: &Gene, constants: &[f64], gene_values: &[f64]) -> f64 {
    let len = expressed_len(gene);
    let mut values = [0.0f64; 64];
    let mut heap;
    let values: &mut [f64] = if len <= values.len() {
        &mut values[..len]
    } else {
        heap = vec![0.0; len];
        &mut heap
    };
    let mut next = len;
    let mut rnc = (0..len).filter(|&i| gene.symbol(i) == Symbol::Constant).count();
    for i in (0..len).rev() {
        let s = gene.symbol(i);
        values[i] = match s {
            Symbol::Function(op) => {
                // only a malformed gene can run out of children
                let Some(start) = next.checked_sub(op.arity()) else {
                    return f64::NAN;
                };
                next = start;
                protected_apply(op, &values[next..next + op.arity()])
            }
            Symbol::Digit(d) => f64::from(d),
            Symbol::Constant => {
                rnc -= 1;
                match gene.dc.get(rnc) {
                    Some(Symbol::Dc(j)) => constants.get(*j as usize).copied().unwrap_or(f64::NAN),
                    _ => f64::NAN,
                }
            }
            Symbol::GeneRef(k) => gene_values.get(k as usize).copied().unwrap_or(f64::NAN),
            Symbol::Dc(_) => f64::NAN,
        };
    }
    values[0]
}

pub fn eval_ordinary(gene: &Gene, constants: &ConstantSet) -> f64 {
    eval_gene(gene, &constants.values, &[])
}

/// Values of the ordinary genes, in order.
pub fn ordinary_values(c: &Chromosome, constants: &ConstantSet) -> Vec<f64> {
    c.ordinary.iter().map(|g| eval_ordinary(g, constants)).collect()
}

/// Decodes a chromosome into a point, one coordinate per homeotic gene.
pub fn eval_chromosome(c: &Chromosome, constants: &ConstantSet) -> Vec<f64> {
    let ordinary = ordinary_values(c, constants);
    c.homeotic.iter().map(|g| eval_gene(g, &[], &ordinary)).collect()
}

/// True when some expressed `?` in an ordinary gene reaches the decoded point.
pub fn uses_constants(c: &Chromosome) -> bool {
    c.ordinary.iter().any(|g| expressed_constants(g) > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::parse(&c.to_string()).unwrap()).collect()
    }

    fn gene(head: &str, tail: &str, dc: &str) -> Gene {
        let dc = dc.chars().map(|c| Symbol::parse_dc(c).unwrap()).collect();
        Gene { head: parse(head), tail: parse(tail), dc }
    }

    fn homeotic(tokens: &[&str], head_len: usize) -> Gene {
        let syms: Vec<Symbol> = tokens.iter().map(|t| Symbol::parse(t).unwrap()).collect();
        Gene { head: syms[..head_len].to_vec(), tail: syms[head_len..].to_vec(), dc: vec![] }
    }

    fn constants(values: Vec<f64>) -> ConstantSet {
        ConstantSet { values, lo: -10.0, hi: 10.0 }
    }

    #[test]
    fn one_level_tree() {
        let t = build_tree(&gene("*?b", "aaaa", "AAAA"));
        assert_eq!(
            t,
            ExprTree::Apply {
                op: Op::Mul,
                children: vec![ExprTree::Constant { index: 0 }, ExprTree::Digit(1)]
            }
        );
    }

    #[test]
    fn terminal_root_is_a_leaf() {
        let g = gene("aab", "aaaa", "AAAA");
        assert_eq!(build_tree(&g), ExprTree::Digit(0));
        assert_eq!(build_tree(&g).depth(), 0);
        assert_eq!(expressed_len(&g), 1);
    }

    #[test]
    fn breadth_first_fill() {
        // + claims (*, a); * claims (b, c)
        let t = build_tree(&gene("+*a", "bcaa", "AAAA"));
        let expected = ExprTree::Apply {
            op: Op::Add,
            children: vec![
                ExprTree::Apply { op: Op::Mul, children: vec![ExprTree::Digit(1), ExprTree::Digit(2)] },
                ExprTree::Digit(0),
            ],
        };
        assert_eq!(t, expected);
        assert_eq!(t.to_string(), "((1 * 2) + 0)");
    }

    #[test]
    fn constant_bound_through_dc() {
        let mut values = vec![0.0; 10];
        values[3] = 0.87227;
        let g = gene("*?b", "aaaa", "DAAB");
        assert_eq!(eval_ordinary(&g, &constants(values)), 0.87227);
    }

    #[test]
    fn digits_are_literals() {
        let cs = constants(vec![0.5; 10]);
        assert_eq!(eval_ordinary(&gene("abc", "aaaa", "AAAA"), &cs), 0.0);
        assert_eq!(eval_ordinary(&gene("+bc", "aaaa", "AAAA"), &cs), 3.0);
    }

    #[test]
    fn second_constant_uses_second_dc_letter() {
        let cs = constants(vec![1.0, 2.0, 3.0, 4.0]);
        // (? - ?) with Dc "CA.." => 3 - 1
        let g = gene("-??", "aaaa", "CAAA");
        assert_eq!(eval_ordinary(&g, &cs), 2.0);
        // the tail's '?' is not expressed
        let g = gene("-a?", "?aaa", "CBAA");
        assert_eq!(eval_ordinary(&g, &cs), -3.0);
    }

    #[test]
    fn protected_operators() {
        assert_eq!(protected_apply(Op::Div, &[5.0, 0.0]), 1.0);
        assert_eq!(protected_apply(Op::Div, &[5.0, 1e-13]), 1.0);
        assert_eq!(protected_apply(Op::Div, &[6.0, 3.0]), 2.0);
        assert_eq!(protected_apply(Op::Sqrt, &[-4.0]), 2.0);
        assert!((protected_apply(Op::Sin, &[1.0]) - 0.8414709848).abs() < 1e-10);
        assert!(protected_apply(Op::Exp, &[1e6]).is_finite());
        assert_eq!(protected_apply(Op::Exp, &[1e6]), 700f64.exp());
        assert_eq!(protected_apply(Op::Cos, &[0.0]), 1.0);
    }

    #[test]
    fn homeotic_identity_and_sum() {
        let cs = constants(vec![0.0; 10]);
        let c = Chromosome {
            ordinary: vec![gene("+bb", "aaaa", "AAAA"), gene("+bc", "aaaa", "AAAA")],
            homeotic: vec![
                homeotic(&["g0", "+", "g1", "g1", "g0"], 2),
                homeotic(&["+", "g0", "g1", "g1", "g0"], 2),
            ],
        };
        assert_eq!(eval_chromosome(&c, &cs), vec![2.0, 5.0]);
    }

    #[test]
    fn homeotic_genes_are_independent() {
        let cs = constants(vec![0.0; 10]);
        let mut c = Chromosome {
            ordinary: vec![gene("+bb", "aaaa", "AAAA"), gene("*cc", "aaaa", "AAAA")],
            homeotic: vec![
                homeotic(&["-", "g0", "g1", "g1", "g0"], 2),
                homeotic(&["+", "g0", "g1", "g1", "g0"], 2),
            ],
        };
        let before = eval_chromosome(&c, &cs);
        c.homeotic[1] = homeotic(&["*", "g1", "g1", "g1", "g0"], 2);
        let after = eval_chromosome(&c, &cs);
        assert_eq!(before[0], after[0]);
        assert_eq!(after[1], 16.0);
    }

    #[test]
    fn all_function_heads_fit_in_the_tail() {
        // worst case: every head position is a binary operator
        for h in 1..20 {
            let g = Gene {
                head: vec![Symbol::Function(Op::Add); h],
                tail: vec![Symbol::Digit(1); crate::genome::tail_length(h, 2)],
                dc: vec![],
            };
            assert_eq!(expressed_len(&g), 2 * h + 1);
            assert_eq!(eval_gene(&g, &[], &[]), (h + 1) as f64);
            assert_eq!(build_tree(&g).size(), 2 * h + 1);
        }
    }
}
