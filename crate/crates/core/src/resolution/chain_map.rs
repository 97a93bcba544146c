//! Comparison maps `φ: X → A^{⊗(•+2)}` and `ψ: A^{⊗(•+2)} → X` between the
//! bicomplex resolution and the bar resolution of `A`, lifted degreewise.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::algebra::{Basis, GradedSkewAlgebra};
use super::bicomplex::BiComplexX;
use super::free::{BimoduleMap, Generator, GradedFreeBimodule, Term, TruncatedComplex};
use crate::error::{Error, Result};
use crate::linear::sparse::Accumulator;
use crate::linear::{SparseMap, SparseSolver, SparseVec};

/// The bar resolution `A ⊗ A^{⊗n} ⊗ A` restricted to generators of total degree
/// `≤` the ring's cap; generators are tuples of homogeneous basis elements.
pub struct TruncatedBar {
    complex: TruncatedComplex,
    tuples: Vec<Vec<Vec<Basis>>>,
    positions: Vec<HashMap<Vec<Basis>, usize>>,
}

impl TruncatedBar {
    pub fn new(ring: Arc<GradedSkewAlgebra>, len: usize) -> Self {
        let cap = ring.max_degree();
        let group = ring.group().clone();
        let mut tuples: Vec<Vec<Vec<Basis>>> = vec![vec![Vec::new()]];
        for n in 1..=len {
            let mut next = Vec::new();
            for t in &tuples[n - 1] {
                let used: usize = t.iter().map(|b| b.0).sum();
                for d in 0..=cap - used {
                    for i in 0..ring.dim(d) {
                        let mut t = t.clone();
                        t.push((d, i));
                        next.push(t);
                    }
                }
            }
            tuples.push(next);
        }
        let positions: Vec<HashMap<Vec<Basis>, usize>> = tuples
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect())
            .collect();
        let modules: Vec<Arc<GradedFreeBimodule>> = tuples
            .iter()
            .map(|ts| {
                let gens = ts
                    .iter()
                    .map(|t| Generator {
                        degree: t.iter().map(|b| b.0).sum(),
                        grade: t.iter().fold(group.identity(), |acc, b| group.mul(acc, ring.grade(b.1))),
                    })
                    .collect();
                Arc::new(GradedFreeBimodule::new(ring.clone(), gens))
            })
            .collect();
        let field = ring.field();
        let one = ring.group_element(group.identity());
        let diffs = (1..=len)
            .map(|n| {
                let target = &modules[n - 1];
                let pos = &positions[n - 1];
                let images = tuples[n]
                    .iter()
                    .map(|t| {
                        let mut acc = Accumulator::new();
                        let gen = |sub: &[Basis]| pos[sub];
                        acc.add(
                            target.index(Term { left: t[0], gen: gen(&t[1..]), right: one }),
                            &field.one(),
                        );
                        for i in 1..n {
                            let sign = field.from_i64(if i % 2 == 1 { -1 } else { 1 });
                            let (a, b) = (t[i - 1], t[i]);
                            for (k, c) in ring.multiply_basis(a, b) {
                                let mut merged = t[..i - 1].to_vec();
                                merged.push((a.0 + b.0, k));
                                merged.extend_from_slice(&t[i + 1..]);
                                let at = Term { left: one, gen: gen(&merged), right: one };
                                acc.add(target.index(at), &(&sign * &c));
                            }
                        }
                        let sign = field.from_i64(if n % 2 == 1 { -1 } else { 1 });
                        acc.add(
                            target.index(Term { left: one, gen: gen(&t[..n - 1]), right: t[n - 1] }),
                            &sign,
                        );
                        acc.finish()
                    })
                    .collect();
                BimoduleMap::new(modules[n].clone(), target.clone(), images)
            })
            .collect();
        TruncatedBar {
            complex: TruncatedComplex::new(modules, diffs),
            tuples,
            positions,
        }
    }

    pub fn complex(&self) -> &TruncatedComplex {
        &self.complex
    }

    pub fn tuples(&self, n: usize) -> &[Vec<Basis>] {
        &self.tuples[n]
    }

    pub fn position(&self, n: usize, tuple: &[Basis]) -> Option<usize> {
        self.positions[n].get(tuple).copied()
    }
}

/// Outcome of the verification of the lifted maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainMapReport {
    pub max_n: usize,
    pub polydeg_cap: usize,
    /// `δ_n φ_n = φ_{n−1} d_n` for every `n ≤ max_n`.
    pub phi_is_chain_map: bool,
    /// `d_n ψ_n = ψ_{n−1} δ_n` for every `n ≤ max_n`.
    pub psi_is_chain_map: bool,
    /// `ψ_n φ_n = id` on `X_{0,n}`, per `n`.
    pub identity_on_x0n: Vec<bool>,
    /// `ψ_1 φ_1 = id` on all of `X_1`.
    pub identity_on_x1: bool,
}

impl ChainMapReport {
    pub fn ok(&self) -> bool {
        self.phi_is_chain_map && self.psi_is_chain_map && self.identity_on_x0n.iter().all(|b| *b)
    }
}

pub struct ChainMaps {
    pub bar: TruncatedBar,
    pub phi: Vec<BimoduleMap>,
    pub psi: Vec<BimoduleMap>,
    pub report: ChainMapReport,
}

/// Source columns of one block and their elimination.
type Block = Arc<(Vec<usize>, SparseSolver)>;

/// Solves `f(w) = b` inside one (degree, grade) block, caching the eliminations.
struct BlockSolver<'a> {
    map: &'a BimoduleMap,
    cache: Mutex<HashMap<(usize, usize), Block>>,
}

impl<'a> BlockSolver<'a> {
    fn new(map: &'a BimoduleMap) -> Self {
        BlockSolver {
            map,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn solve(&self, degree: usize, grade: usize, b: &SparseVec) -> Option<SparseVec> {
        let entry = {
            let mut cache = self.cache.lock().expect("solver cache");
            cache
                .entry((degree, grade))
                .or_insert_with(|| {
                    let src = self.map.source();
                    let cols: Vec<usize> = src
                        .grades(degree)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, g)| *g == grade)
                        .map(|(i, _)| i)
                        .collect();
                    let one = src.ring().field().one();
                    let columns = cols.iter().map(|&j| self.map.apply(degree, &[(j, one.clone())])).collect();
                    let m = SparseMap::new(src.ring().field(), self.map.target().dim(degree), columns);
                    Arc::new((cols, SparseSolver::new(&m)))
                })
                .clone()
        };
        let (cols, solver) = &*entry;
        let mut x: SparseVec = solver.solve(b)?.into_iter().map(|(j, c)| (cols[j], c)).collect();
        x.sort_by_key(|(i, _)| *i);
        Some(x)
    }
}

fn is_generator(x: &SparseVec, m: &GradedFreeBimodule, gen: usize) -> bool {
    *x == m.generator_element(gen)
}

/// Lifts `φ_n, ψ_n` for `n ≤ max_n` on pieces of degree `≤` the ring's cap.
///
/// `φ` is the standard embedding on `X_{0,n}` and `ψ` inverts it there; the
/// remaining values are the deterministic pivot-column solutions of
/// `δ_n φ_n = φ_{n−1} d_n` and `d_n ψ_n = ψ_{n−1} δ_n`.
pub fn lift_chain_map(x: &BiComplexX, max_n: usize) -> Result<ChainMaps> {
    if x.len() < max_n {
        return Err(Error::HypothesisViolation(format!("X must reach homological degree {max_n}")));
    }
    if x.piece_rank(0, 0) != 1 {
        return Err(Error::HypothesisViolation("X_0 must be A ⊗ A".into()));
    }
    let ring = x.ring().clone();
    let field = ring.field();
    let cap = ring.max_degree();
    let dim_v = ring.dim_v();
    let e = ring.group().identity();
    let bar = TruncatedBar::new(ring.clone(), max_n);
    let xs = x.total();
    let bs = bar.complex();

    let id0 = |src: &Arc<GradedFreeBimodule>, tgt: &Arc<GradedFreeBimodule>| {
        BimoduleMap::new(src.clone(), tgt.clone(), vec![tgt.generator_element(0)])
    };
    let mut phi = vec![id0(xs.module(0), bs.module(0))];
    let mut psi = vec![id0(bs.module(0), xs.module(0))];

    for n in 1..=max_n {
        let xn = xs.module(n);
        let bn = bs.module(n);
        let d = xs.differential(n);
        let delta = bs.differential(n);
        let x0n = x.piece(0, n);

        // φ_n
        let delta_solver = BlockSolver::new(delta);
        let mut phi_images = Vec::with_capacity(xn.rank());
        for (gi, g) in xn.generators().iter().enumerate() {
            if g.degree > cap {
                phi_images.push(Vec::new());
                continue;
            }
            let rhs = phi[n - 1].apply(g.degree, d.image(gi));
            let image = if x0n.contains(&gi) {
                let y = &x.d_component(n)[gi - x0n.start];
                let mut acc = Accumulator::new();
                for (w, c) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let word = crate::group::index_word(w, n, dim_v);
                    let tuple: Vec<Basis> = word.iter().map(|&a| ring.letter(a)).collect();
                    let gen = bar.position(n, &tuple).expect("letter tuples lie below the cap");
                    let one = ring.group_element(e);
                    acc.add(bn.index(Term { left: one, gen, right: one }), c);
                }
                acc.finish()
            } else {
                let canonical = (n == 1).then(|| {
                    let t = vec![ring.group_element(g.grade)];
                    bn.generator_element(bar.position(1, &t).expect("group elements are generators"))
                });
                match canonical.filter(|c| delta.apply(0, c) == rhs) {
                    Some(c) => c,
                    None => delta_solver
                        .solve(g.degree, g.grade, &rhs)
                        .ok_or(Error::LiftFailed { n, degree: g.degree })?,
                }
            };
            phi_images.push(image);
        }
        let phi_n = BimoduleMap::new(xn.clone(), bn.clone(), phi_images);

        // ψ_n
        let d_solver = BlockSolver::new(d);
        let tuples = bar.tuples(n);
        let solve_psi = |t: usize| -> Result<SparseVec> {
            let g = &bn.generators()[t];
            let rhs = psi[n - 1].apply(g.degree, delta.image(t));
            d_solver
                .solve(g.degree, g.grade, &rhs)
                .ok_or(Error::LiftFailed { n, degree: g.degree })
        };
        let mut psi_images: Vec<Option<SparseVec>> = vec![None; tuples.len()];
        // Letter tuples: basis of V^{⊗n} made of the rref basis r_t of K^n and the
        // non-pivot words; ψ(r_t) is the generator of X_{0,n}.
        let k = x.d_component(n);
        let pivots: Vec<usize> = k
            .iter()
            .map(|r| r.iter().position(|c| !c.is_zero()).expect("nonzero basis vector"))
            .collect();
        let letter_tuple = |w: usize| -> Vec<Basis> {
            crate::group::index_word(w, n, dim_v).iter().map(|&a| ring.letter(a)).collect()
        };
        if n <= cap {
            let words = dim_v.pow(n as u32);
            let mut non_pivot = HashMap::new();
            for w in (0..words).filter(|w| !pivots.contains(w)) {
                let t = bar.position(n, &letter_tuple(w)).expect("letter tuple");
                let v = solve_psi(t)?;
                non_pivot.insert(w, v.clone());
                psi_images[t] = Some(v);
            }
            for (ti, (r, p)) in k.iter().zip(&pivots).enumerate() {
                let mut acc = Accumulator::new();
                acc.add_scaled(&xn.generator_element(x0n.start + ti), &field.one());
                for (w, c) in r.iter().enumerate() {
                    if w != *p && !c.is_zero() {
                        acc.add_scaled(&non_pivot[&w], &-c);
                    }
                }
                let inv = r[*p].inv();
                let v: SparseVec = acc.finish().into_iter().map(|(i, c)| (i, &c * &inv)).collect();
                let t = bar.position(n, &letter_tuple(*p)).expect("letter tuple");
                psi_images[t] = Some(v);
            }
        }
        for t in 0..tuples.len() {
            if psi_images[t].is_some() {
                continue;
            }
            if n == 1 && tuples[t][0].0 == 0 {
                // ψ_1(1⊗g⊗1) = 1⊗g⊗1 in X_{1,0} when φ_1 hits it
                let hit = x.piece(1, 0).find(|&gi| is_generator(phi_n.image(gi), bn, t));
                if let Some(gi) = hit {
                    psi_images[t] = Some(xn.generator_element(gi));
                    continue;
                }
            }
            psi_images[t] = Some(solve_psi(t)?);
        }
        let psi_n = BimoduleMap::new(bn.clone(), xn.clone(), psi_images.into_iter().map(Option::unwrap).collect());
        phi.push(phi_n);
        psi.push(psi_n);
    }

    let phi_is_chain_map = (1..=max_n).all(|n| {
        bs.differential(n).compose(&phi[n]).images() == phi[n - 1].compose(xs.differential(n)).images()
    });
    let psi_is_chain_map = (1..=max_n).all(|n| {
        xs.differential(n).compose(&psi[n]).images() == psi[n - 1].compose(bs.differential(n)).images()
    });
    let round_trip: Vec<BimoduleMap> = (0..=max_n).map(|n| psi[n].compose(&phi[n])).collect();
    let identity_on = |n: usize, gens: std::ops::Range<usize>| {
        let m = xs.module(n);
        gens.into_iter()
            .filter(|&gi| m.generators()[gi].degree <= cap)
            .all(|gi| is_generator(round_trip[n].image(gi), m, gi))
    };
    let identity_on_x0n = (0..=max_n).map(|n| identity_on(n, x.piece(0, n))).collect();
    let identity_on_x1 = max_n >= 1 && identity_on(1, 0..xs.module(1).rank());
    let report = ChainMapReport {
        max_n,
        polydeg_cap: cap,
        phi_is_chain_map,
        psi_is_chain_map,
        identity_on_x0n,
        identity_on_x1,
    };
    Ok(ChainMaps { bar, phi, psi, report })
}

impl ChainMaps {
    /// `ψ_n φ_n = id` on every basis vector of `X_{0,n}` in degrees `≤ cap`, checked piecewise.
    pub fn identity_on_x0n_pieces(&self, x: &BiComplexX, n: usize, cap: usize) -> bool {
        let m = x.total().module(n);
        let range = x.piece(0, n);
        let one = m.ring().field().one();
        (0..=cap).all(|d| {
            (0..m.dim(d))
                .filter(|&i| range.contains(&m.term(d, i).gen))
                .all(|i| {
                    let v = vec![(i, one.clone())];
                    self.psi[n].apply(d, &self.phi[n].apply(d, &v)) == v
                })
        })
    }
}
