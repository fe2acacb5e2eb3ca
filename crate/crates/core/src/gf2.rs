//! Gaussian elimination for affine linear systems over GF(2).
//!
//! Rows are bitsets over the unknowns. Reduction is deterministic: pivots are
//! chosen in increasing column order and the reduced form is fully
//! back-substituted, so the same input always yields the same output.

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    bits: Vec<u64>,
    rhs: bool,
    /// Which original equations were combined into this row.
    origin: Vec<u64>,
}

impl Row {
    fn new(num_vars: usize, num_eqs: usize) -> Self {
        Row {
            bits: vec![0; num_vars.div_ceil(64)],
            rhs: false,
            origin: vec![0; num_eqs.div_ceil(64).max(1)],
        }
    }

    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_in(&mut self, other: &Row) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        for (a, b) in self.origin.iter_mut().zip(&other.origin) {
            *a ^= b;
        }
        self.rhs ^= other.rhs;
    }

    fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn lowest_set(&self) -> Option<usize> {
        for (w, &word) in self.bits.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                out.push(w * 64 + word.trailing_zeros() as usize);
                word &= word - 1;
            }
        }
        out
    }
}

/// Fully reduced (RREF) consistent system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedSystem {
    pub num_unknowns: usize,
    pub rank: usize,
    /// Reduced rows as (sorted term indices, rhs), ordered by pivot column.
    pub rows: Vec<(Vec<usize>, bool)>,
    pub pivots: Vec<usize>,
    /// One solution: free variables 0, pivot variables forced.
    pub particular_solution: Vec<bool>,
}

impl ReducedSystem {
    pub fn num_free(&self) -> usize {
        self.num_unknowns - self.rank
    }

    /// Number of solutions, as a power of two exponent.
    pub fn solution_count_log2(&self) -> usize {
        self.num_free()
    }

    /// Whether the affine relation `sum of terms = rhs` holds in every
    /// solution of the system.
    pub fn implies(&self, terms: &[usize], rhs: bool) -> bool {
        let mut row = Row::new(self.num_unknowns, 0);
        for &t in terms {
            // A repeated term cancels.
            row.bits[t / 64] ^= 1 << (t % 64);
        }
        row.rhs = rhs;
        for (i, &p) in self.pivots.iter().enumerate() {
            if row.get(p) {
                for &t in &self.rows[i].0 {
                    row.bits[t / 64] ^= 1 << (t % 64);
                }
                row.rhs ^= self.rows[i].1;
            }
        }
        row.is_zero() && !row.rhs
    }
}

/// Outcome of solving an affine GF(2) system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Consistent(ReducedSystem),
    /// Indices of an irreducible unsatisfiable subset of the input equations.
    Inconsistent { core: Vec<usize> },
}

/// Row-reduces the system `equations` (each a set of unknown indices and a
/// right-hand side) over `num_unknowns` variables.
pub fn solve(num_unknowns: usize, equations: &[(Vec<usize>, bool)]) -> SolveOutcome {
    match eliminate(num_unknowns, equations) {
        Ok(reduced) => SolveOutcome::Consistent(reduced),
        Err(core) => SolveOutcome::Inconsistent {
            core: minimize_core(num_unknowns, equations, core),
        },
    }
}

fn eliminate(
    num_unknowns: usize,
    equations: &[(Vec<usize>, bool)],
) -> Result<ReducedSystem, Vec<usize>> {
    let mut rows: Vec<Row> = Vec::with_capacity(equations.len());
    for (e, (terms, rhs)) in equations.iter().enumerate() {
        let mut row = Row::new(num_unknowns, equations.len());
        for &t in terms {
            assert!(t < num_unknowns, "term index out of range");
            row.bits[t / 64] ^= 1 << (t % 64);
        }
        row.rhs = *rhs;
        row.origin[e / 64] |= 1 << (e % 64);
        rows.push(row);
    }

    let mut pivot_rows: Vec<Row> = Vec::new();
    for mut row in rows {
        let mut became_pivot = false;
        loop {
            let Some(col) = row.lowest_set() else { break };
            match pivot_rows.iter().find(|r| r.lowest_set() == Some(col)) {
                Some(existing) => {
                    let existing = existing.clone();
                    row.xor_in(&existing);
                }
                None => {
                    pivot_rows.push(row.clone());
                    became_pivot = true;
                    break;
                }
            }
        }
        if !became_pivot && row.is_zero() && row.rhs {
            // 0 = 1: the origin set certifies the contradiction.
            let mut core = Vec::new();
            for (w, &word) in row.origin.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    core.push(w * 64 + word.trailing_zeros() as usize);
                    word &= word - 1;
                }
            }
            return Err(core);
        }
    }

    pivot_rows.sort_by_key(|r| r.lowest_set());
    // Back-substitution to reach RREF.
    for i in (0..pivot_rows.len()).rev() {
        let pivot = pivot_rows[i].lowest_set().expect("pivot row");
        for j in 0..i {
            if pivot_rows[j].get(pivot) {
                let lower = pivot_rows[i].clone();
                pivot_rows[j].xor_in(&lower);
            }
        }
    }

    let pivots: Vec<usize> = pivot_rows
        .iter()
        .map(|r| r.lowest_set().expect("pivot row"))
        .collect();
    let mut particular = vec![false; num_unknowns];
    for (row, &p) in pivot_rows.iter().zip(&pivots) {
        // Free variables are 0, so each pivot takes its row's rhs.
        particular[p] = row.rhs;
    }
    Ok(ReducedSystem {
        num_unknowns,
        rank: pivot_rows.len(),
        rows: pivot_rows
            .iter()
            .map(|r| (r.support(), r.rhs))
            .collect(),
        pivots,
        particular_solution: particular,
    })
}

/// Greedy deletion: shrink a contradiction certificate until removing any
/// single equation makes the rest satisfiable.
fn minimize_core(
    num_unknowns: usize,
    equations: &[(Vec<usize>, bool)],
    mut core: Vec<usize>,
) -> Vec<usize> {
    core.sort_unstable();
    let mut i = 0;
    while i < core.len() {
        let mut candidate = core.clone();
        candidate.remove(i);
        let subset: Vec<(Vec<usize>, bool)> =
            candidate.iter().map(|&e| equations[e].clone()).collect();
        if eliminate(num_unknowns, &subset).is_err() {
            core = candidate;
        } else {
            i += 1;
        }
    }
    core
}
