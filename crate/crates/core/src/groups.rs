//! Finite groups given by Cayley tables, their left actions on finite point
//! sets, orbits, subgroups, homomorphisms and invariant measures.
//!
//! Element ordering of every constructed group: the identity is element 0,
//! the generators follow in the order they were given (duplicates and the
//! identity skipped), and the remaining elements are appended in the
//! breadth-first order in which they are first reached as `x * g` with `x`
//! scanned in index order and `g` scanned in generator order. This makes the
//! Cayley table of a named group reproducible byte-for-byte.
//!
//! Every finite action is proper, so no separate properness check exists.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

pub const MAX_GROUP_ORDER: usize = 10_000;

/// Groups up to this order get a full triple-by-triple associativity check.
const EXHAUSTIVE_ASSOCIATIVITY_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("unknown group name `{0}`")]
    UnknownGroupName(String),
    #[error("group order exceeds {MAX_GROUP_ORDER}")]
    OrderTooLarge,
    #[error("element {element} is out of range for a group of order {order}")]
    BadElement { element: usize, order: usize },
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("expected {expected} orbit masses, got {found}")]
    MassCountMismatch { expected: usize, found: usize },
    #[error("orbit mass must be positive and finite, got {0}")]
    BadMass(f64),
}

/// A finite group with an explicit multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    name: String,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    /// For every non-identity element `x`, a pair `(y, i)` with
    /// `x = y * generators[i]` and `y` reached earlier in breadth-first order.
    words: Vec<WordStep>,
    bfs_order: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a Cayley table and attach a generating set.
    pub fn from_table(
        name: impl Into<String>,
        cayley: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self, GroupError> {
        let n = cayley.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::OrderTooLarge);
        }
        for row in &cayley {
            if row.len() != n {
                return Err(GroupError::InvalidTable("table is not square".into()));
            }
            if !is_permutation(row) {
                return Err(GroupError::InvalidTable(
                    "rows are not a Latin square".into(),
                ));
            }
        }
        for col in 0..n {
            let column: Vec<usize> = cayley.iter().map(|row| row[col]).collect();
            if !is_permutation(&column) {
                return Err(GroupError::InvalidTable(
                    "columns are not a Latin square".into(),
                ));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| cayley[e][x] == x && cayley[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| cayley[x][y] == identity)
                .expect("Latin square rows contain the identity");
        }
        for &g in &generators {
            if g >= n {
                return Err(GroupError::BadElement {
                    element: g,
                    order: n,
                });
            }
        }
        let (words, bfs_order) =
            breadth_first_words(&cayley, identity, &generators).ok_or_else(|| {
                GroupError::InvalidTable("generators do not generate the group".into())
            })?;

        let group = FiniteGroup {
            name: name.into(),
            cayley,
            identity,
            inverses,
            generators,
            words,
            bfs_order,
        };
        if let Some((a, b, c)) = group.associativity_violation() {
            return Err(GroupError::InvalidTable(format!(
                "associativity fails for ({a}, {b}, {c})"
            )));
        }
        Ok(group)
    }

    /// Close `generators` under `mul` and tabulate the resulting group.
    ///
    /// Returns the group together with its elements in index order.
    pub fn generate<T, F>(
        name: impl Into<String>,
        identity: T,
        generators: &[T],
        mul: F,
    ) -> Result<(Self, Vec<T>), GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut gen_idx = Vec::new();
        for g in generators {
            if !index.contains_key(g) {
                index.insert(g.clone(), elements.len());
                elements.push(g.clone());
                gen_idx.push(elements.len() - 1);
            }
        }

        // right_mul[i][x] = index of x * gen_i
        let mut right_mul: Vec<Vec<usize>> = vec![Vec::new(); gen_idx.len()];
        let mut x = 0;
        while x < elements.len() {
            for (i, &g) in gen_idx.iter().enumerate() {
                let y = mul(&elements[x], &elements[g]);
                let idx = match index.get(&y) {
                    Some(&idx) => idx,
                    None => {
                        if elements.len() >= MAX_GROUP_ORDER {
                            return Err(GroupError::OrderTooLarge);
                        }
                        index.insert(y.clone(), elements.len());
                        elements.push(y);
                        elements.len() - 1
                    }
                };
                right_mul[i].push(idx);
            }
            x += 1;
        }

        let n = elements.len();
        let words = breadth_first_words_from_right_mul(&right_mul, n, &gen_idx);
        let mut cayley = vec![vec![0usize; n]; n];
        for (a, row) in cayley.iter_mut().enumerate() {
            row[0] = a;
            for b in 1..n {
                let (parent, gi) = words[b].expect("every non-identity element has a word");
                row[b] = right_mul[gi][row[parent]];
            }
        }
        let group = FiniteGroup::from_table(name, cayley, gen_idx)?;
        Ok((group, elements))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `(y, i)` with `x = y * generators()[i]`, or `None` for the identity.
    pub fn word_step(&self, x: usize) -> Option<(usize, usize)> {
        self.words[x]
    }

    /// Elements in breadth-first order from the identity; every element's
    /// word parent precedes it.
    pub fn breadth_first_order(&self) -> &[usize] {
        &self.bfs_order
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.cayley[a][b] == self.cayley[b][a]))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn check_element(&self, x: usize) -> Result<(), GroupError> {
        if x >= self.order() {
            return Err(GroupError::BadElement {
                element: x,
                order: self.order(),
            });
        }
        Ok(())
    }

    fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        let thirds: Vec<usize> = if n <= EXHAUSTIVE_ASSOCIATIVITY_ORDER {
            (0..n).collect()
        } else {
            // Right-associativity against every generator implies full
            // associativity by induction on word length.
            self.generators.clone()
        };
        for a in 0..n {
            for b in 0..n {
                let ab = self.cayley[a][b];
                for &c in &thirds {
                    if self.cayley[ab][c] != self.cayley[a][self.cayley[b][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Subgroup consisting of `elements`, re-indexed in the order given.
    ///
    /// Returns the subgroup as a standalone group plus the embedding map
    /// (subgroup index -> parent index).
    pub fn restrict(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let mut local = HashMap::new();
        for (i, &x) in elements.iter().enumerate() {
            self.check_element(x)?;
            local.insert(x, i);
        }
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let ab = self.mul(a, b);
                table[i][j] = *local.get(&ab).ok_or_else(|| {
                    GroupError::InvalidTable(format!("subset not closed: {a} * {b} = {ab}"))
                })?;
            }
        }
        let mut gens = Vec::new();
        let mut reached = vec![self.identity];
        for &x in elements {
            if !reached.contains(&x) {
                gens.push(local[&x]);
                let gens_parent: Vec<usize> = gens.iter().map(|&g| elements[g]).collect();
                reached = subgroup_generated(self, &gens_parent)?;
            }
        }
        let name = format!("{}|{}", self.name, elements.len());
        Ok((
            FiniteGroup::from_table(name, table, gens)?,
            elements.to_vec(),
        ))
    }
}

fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    for &x in row {
        if x >= row.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// `(parent, generator index)` for every non-identity element.
type WordStep = Option<(usize, usize)>;

fn breadth_first_words(
    cayley: &[Vec<usize>],
    identity: usize,
    generators: &[usize],
) -> Option<(Vec<WordStep>, Vec<usize>)> {
    let n = cayley.len();
    let mut words = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    seen[identity] = true;
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for (i, &g) in generators.iter().enumerate() {
            let y = cayley[x][g];
            if !seen[y] {
                seen[y] = true;
                words[y] = Some((x, i));
                queue.push_back(y);
            }
        }
    }
    seen.iter().all(|&s| s).then_some((words, order))
}

fn breadth_first_words_from_right_mul(
    right_mul: &[Vec<usize>],
    n: usize,
    gen_idx: &[usize],
) -> Vec<Option<(usize, usize)>> {
    let mut words = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    // Generators are reached directly from the identity.
    for (i, &g) in gen_idx.iter().enumerate() {
        if !seen[g] {
            seen[g] = true;
            words[g] = Some((0, i));
        }
    }
    for x in 0..n {
        for (i, rm) in right_mul.iter().enumerate() {
            let y = rm[x];
            if !seen[y] {
                seen[y] = true;
                words[y] = Some((x, i));
            }
        }
    }
    words
}

/// Build one of the named groups.
///
/// Grammar: `cyclic:<n>`, `dihedral:<n>`, `symmetric:<n>`,
/// `binary_tetrahedral`, and `<name>x<name>` for direct products.
pub fn make_named_group(name: &str) -> Result<FiniteGroup, GroupError> {
    let name = name.trim();
    if name.contains('x') {
        let mut factors = name.split('x').map(make_named_group);
        let first = factors
            .next()
            .ok_or_else(|| GroupError::UnknownGroupName(name.into()))??;
        return factors.try_fold(first, |acc, f| direct_product(&acc, &f?));
    }
    let unknown = || GroupError::UnknownGroupName(name.to_string());
    if name == "binary_tetrahedral" {
        return Ok(binary_tetrahedral()?.0);
    }
    let (kind, arg) = name.split_once(':').ok_or_else(unknown)?;
    let n: usize = arg.trim().parse().map_err(|_| unknown())?;
    if n == 0 {
        return Err(unknown());
    }
    match kind.trim() {
        "cyclic" => cyclic(n),
        "dihedral" => dihedral(n),
        "symmetric" => symmetric(n),
        _ => Err(unknown()),
    }
}

/// Integers mod `n`; element `k` is `k`.
pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    if n > MAX_GROUP_ORDER {
        return Err(GroupError::OrderTooLarge);
    }
    let gens: Vec<usize> = if n > 1 { vec![1] } else { vec![] };
    let (g, _) = FiniteGroup::generate(format!("cyclic:{n}"), 0usize, &gens, |a, b| (a + b) % n)?;
    Ok(g)
}

/// Symmetries of the regular `n`-gon; generators are the rotation `r` and
/// the reflection `s`. Elements are realized as `(rotation, flipped)` pairs.
pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    Ok(dihedral_elements(n)?.0)
}

/// Dihedral group plus each element as `(rotation steps, reflected)`.
pub fn dihedral_elements(n: usize) -> Result<(FiniteGroup, Vec<(usize, bool)>), GroupError> {
    if 2 * n > MAX_GROUP_ORDER {
        return Err(GroupError::OrderTooLarge);
    }
    let mul = |a: &(usize, bool), b: &(usize, bool)| {
        let rot = if a.1 {
            (a.0 + n - b.0) % n
        } else {
            (a.0 + b.0) % n
        };
        (rot, a.1 ^ b.1)
    };
    FiniteGroup::generate(
        format!("dihedral:{n}"),
        (0, false),
        &[(1 % n, false), (0, true)],
        mul,
    )
}

/// Permutations of `n` symbols generated by `(0 1)` and `(0 1 ... n-1)`.
pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
    let order = (1..=n).try_fold(1usize, |acc, k| {
        acc.checked_mul(k).filter(|&v| v <= MAX_GROUP_ORDER)
    });
    if order.is_none() {
        return Err(GroupError::OrderTooLarge);
    }
    let id: Vec<usize> = (0..n).collect();
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t = id.clone();
        t.swap(0, 1);
        gens.push(t);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    let (g, _) = FiniteGroup::generate(format!("symmetric:{n}"), id, &gens, |a, b| compose(a, b))?;
    Ok(g)
}

/// `(a o b)(i) = a(b(i))`
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub type Quaternion = [f64; 4];

/// The 24 unit quaternions `±1, ±i, ±j, ±k, (±1 ± i ± j ± k)/2`, generated by
/// `i` and `(1 + i + j + k)/2`.
///
/// Returns the group and each element as `(w, x, y, z)` with `q = w + xi + yj + zk`.
pub fn binary_tetrahedral() -> Result<(FiniteGroup, Vec<Quaternion>), GroupError> {
    // Doubled integer coordinates keep the closure exact.
    let mul = |a: &[i32; 4], b: &[i32; 4]| {
        let [a0, a1, a2, a3] = *a;
        let [b0, b1, b2, b3] = *b;
        let q = [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ];
        q.map(|v| v / 2)
    };
    let (g, elems) = FiniteGroup::generate(
        "binary_tetrahedral",
        [2, 0, 0, 0],
        &[[0, 2, 0, 0], [1, 1, 1, 1]],
        mul,
    )?;
    let quats = elems
        .iter()
        .map(|q| q.map(|v| f64::from(v) / 2.0))
        .collect();
    Ok((g, quats))
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    if a.order().saturating_mul(b.order()) > MAX_GROUP_ORDER {
        return Err(GroupError::OrderTooLarge);
    }
    let gens: Vec<(usize, usize)> = a
        .generators()
        .iter()
        .map(|&g| (g, b.identity()))
        .chain(b.generators().iter().map(|&h| (a.identity(), h)))
        .collect();
    let (g, _) = FiniteGroup::generate(
        format!("{}x{}", a.name(), b.name()),
        (a.identity(), b.identity()),
        &gens,
        |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1)),
    )?;
    Ok(g)
}

/// Smallest subgroup containing `gens` (and the identity), sorted ascending.
pub fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Result<Vec<usize>, GroupError> {
    for &x in gens {
        g.check_element(x)?;
    }
    let mut inside = vec![false; g.order()];
    inside[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok((0..g.order()).filter(|&x| inside[x]).collect())
}

/// Whether `elements` is closed under multiplication and contains the identity.
pub fn is_subgroup(g: &FiniteGroup, elements: &[usize]) -> bool {
    let mut inside = vec![false; g.order()];
    for &x in elements {
        if x >= g.order() {
            return false;
        }
        inside[x] = true;
    }
    inside[g.identity()]
        && elements
            .iter()
            .all(|&a| elements.iter().all(|&b| inside[g.mul(a, b)]))
}

/// All subgroups, each sorted, in lexicographic order. Brute force over
/// subgroups generated by at most two elements plus closure under joins,
/// which reaches every subgroup of a finite group.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut found: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    for x in 0..g.order() {
        found.insert(subgroup_generated(g, &[x]).expect("valid element"));
    }
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let before = found.len();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let mut gens = a.clone();
                gens.extend_from_slice(b);
                found.insert(subgroup_generated(g, &gens).expect("valid elements"));
            }
        }
        if found.len() == before {
            break;
        }
    }
    found.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismCheck {
    pub holds: bool,
    /// First pair `(k1, k2)` with `f(k1 k2) != f(k1) f(k2)`.
    pub violation: Option<(usize, usize)>,
}

/// Exhaustive check of `f(k1 k2) = f(k1) f(k2)` over all pairs.
pub fn check_homomorphism(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    map: &[usize],
) -> Result<HomomorphismCheck, GroupError> {
    if map.len() != src.order() {
        return Err(GroupError::InvalidTable(format!(
            "map has {} entries for a group of order {}",
            map.len(),
            src.order()
        )));
    }
    for &y in map {
        dst.check_element(y)?;
    }
    for a in 0..src.order() {
        for b in 0..src.order() {
            if map[src.mul(a, b)] != dst.mul(map[a], map[b]) {
                return Ok(HomomorphismCheck {
                    holds: false,
                    violation: Some((a, b)),
                });
            }
        }
    }
    Ok(HomomorphismCheck {
        holds: true,
        violation: None,
    })
}

/// A left action `phi -> k phi` of a finite group on `{0, .., space_size - 1}`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    space_size: usize,
    perms: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Validates bijectivity, `perm[e] = id` and `perm[k1 k2] = perm[k1] o perm[k2]`
    /// for every pair.
    pub fn new(
        group: Arc<FiniteGroup>,
        space_size: usize,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        if space_size == 0 {
            return Err(GroupError::InvalidAction("empty space".into()));
        }
        if perms.len() != group.order() {
            return Err(GroupError::InvalidAction(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        for (k, p) in perms.iter().enumerate() {
            if p.len() != space_size || !is_permutation(p) {
                return Err(GroupError::InvalidAction(format!(
                    "element {k} does not act bijectively"
                )));
            }
        }
        if perms[group.identity()]
            .iter()
            .enumerate()
            .any(|(i, &x)| i != x)
        {
            return Err(GroupError::InvalidAction(
                "identity does not act trivially".into(),
            ));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = &perms[group.mul(a, b)];
                if (0..space_size).any(|x| ab[x] != perms[a][perms[b][x]]) {
                    return Err(GroupError::InvalidAction(format!(
                        "compatibility fails for ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GroupAction {
            group,
            space_size,
            perms,
        })
    }

    /// Extend permutations given on the generators to the whole group.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        space_size: usize,
        generator_perms: &[Vec<usize>],
    ) -> Result<Self, GroupError> {
        if generator_perms.len() != group.generators().len() {
            return Err(GroupError::InvalidAction(format!(
                "{} generator images for {} generators",
                generator_perms.len(),
                group.generators().len()
            )));
        }
        for p in generator_perms {
            if p.len() != space_size || !is_permutation(p) {
                return Err(GroupError::InvalidAction(
                    "generator image is not a permutation".into(),
                ));
            }
        }
        let mut perms: Vec<Vec<usize>> = vec![Vec::new(); group.order()];
        for &x in group.breadth_first_order() {
            perms[x] = match group.word_step(x) {
                None => (0..space_size).collect(),
                Some((parent, gi)) => compose(&perms[parent], &generator_perms[gi]),
            };
        }
        GroupAction::new(group, space_size, perms)
    }

    /// Left multiplication of the group on itself.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let perms = group.cayley().to_vec();
        let n = group.order();
        GroupAction {
            group,
            space_size: n,
            perms,
        }
    }

    pub fn trivial(group: Arc<FiniteGroup>, space_size: usize) -> Self {
        let perms = vec![(0..space_size).collect(); group.order()];
        GroupAction {
            group,
            space_size,
            perms,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    pub fn perm(&self, k: usize) -> &[usize] {
        &self.perms[k]
    }

    pub fn apply(&self, k: usize, point: usize) -> usize {
        self.perms[k][point]
    }

    pub fn orbit_of(&self, point: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.perms.iter().map(|p| p[point]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    pub fn stabilizer(&self, point: usize) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&k| self.perms[k][point] == point)
            .collect()
    }

    /// Orbit partition; blocks sorted internally and ordered by their least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.space_size];
        let mut out = Vec::new();
        for p in 0..self.space_size {
            if assigned[p] {
                continue;
            }
            let orbit = self.orbit_of(p);
            for &q in &orbit {
                assigned[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Orbit index of each point, consistent with [`GroupAction::orbits`].
    pub fn orbit_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.space_size];
        for (i, orbit) in self.orbits().iter().enumerate() {
            for &p in orbit {
                ids[p] = i;
            }
        }
        ids
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_of(0).len() == self.space_size
    }

    /// The same action seen as an action of the subgroup on `elements`.
    pub fn restrict(&self, elements: &[usize]) -> Result<GroupAction, GroupError> {
        let (sub, embed) = self.group.restrict(elements)?;
        let perms = embed.iter().map(|&k| self.perms[k].clone()).collect();
        GroupAction::new(Arc::new(sub), self.space_size, perms)
    }

    /// The action restricted to an invariant subset of points, re-indexed in
    /// the order of `points`.
    pub fn restrict_space(&self, points: &[usize]) -> Result<GroupAction, GroupError> {
        let mut local = vec![usize::MAX; self.space_size];
        for (i, &p) in points.iter().enumerate() {
            if p >= self.space_size {
                return Err(GroupError::InvalidAction(format!("point {p} out of range")));
            }
            local[p] = i;
        }
        let mut perms = Vec::with_capacity(self.group.order());
        for p in &self.perms {
            let mut q = Vec::with_capacity(points.len());
            for &x in points {
                let y = local[p[x]];
                if y == usize::MAX {
                    return Err(GroupError::InvalidAction("subset is not invariant".into()));
                }
                q.push(y);
            }
            perms.push(q);
        }
        GroupAction::new(self.group.clone(), points.len(), perms)
    }
}

/// Counting measure on the group; left- and right-invariant.
pub fn haar_measure(g: &FiniteGroup) -> Vec<f64> {
    vec![1.0; g.order()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Haar measure obtained as the invariant measure of left (resp. right)
/// multiplication, with total mass equal to the group order.
pub fn haar_measure_from_translations(g: &Arc<FiniteGroup>, side: Side) -> Vec<f64> {
    let action = match side {
        Side::Left => GroupAction::regular(g.clone()),
        Side::Right => {
            // k acts by x -> x k^{-1}, a left action.
            let perms = (0..g.order())
                .map(|k| (0..g.order()).map(|x| g.mul(x, g.inverse(k))).collect())
                .collect();
            GroupAction::new(g.clone(), g.order(), perms).expect("right translation is an action")
        }
    };
    let masses = vec![g.order() as f64; action.orbits().len()];
    invariant_measure(&action, &masses)
        .expect("one mass per orbit")
        .weights
}

/// A measure on the points of a finite space, uniform on each orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMeasure {
    pub weights: Vec<f64>,
    /// Total mass assigned to each orbit, in the order of [`GroupAction::orbits`].
    pub per_orbit_normalization: Vec<f64>,
}

impl InvariantMeasure {
    pub fn weight(&self, point: usize) -> f64 {
        self.weights[point]
    }

    pub fn total_mass(&self) -> f64 {
        self.per_orbit_normalization.iter().sum()
    }

    /// Exact check of `weight(k phi) == weight(phi)`.
    pub fn is_invariant_under(&self, act: &GroupAction) -> bool {
        (0..act.group().order()).all(|k| {
            (0..act.space_size()).all(|p| self.weights[act.apply(k, p)] == self.weights[p])
        })
    }
}

/// `weight(phi) = mass(orbit of phi) / |orbit of phi|`.
pub fn invariant_measure(
    act: &GroupAction,
    per_orbit_mass: &[f64],
) -> Result<InvariantMeasure, GroupError> {
    let orbits = act.orbits();
    if per_orbit_mass.len() != orbits.len() {
        return Err(GroupError::MassCountMismatch {
            expected: orbits.len(),
            found: per_orbit_mass.len(),
        });
    }
    let mut weights = vec![0.0; act.space_size()];
    for (orbit, &mass) in orbits.iter().zip(per_orbit_mass) {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(GroupError::BadMass(mass));
        }
        let w = mass / orbit.len() as f64;
        for &p in orbit {
            weights[p] = w;
        }
    }
    Ok(InvariantMeasure {
        weights,
        per_orbit_normalization: per_orbit_mass.to_vec(),
    })
}

/// Dihedral group of the `n`-gon acting on its vertices `0..n`.
pub fn dihedral_on_polygon(n: usize) -> Result<GroupAction, GroupError> {
    let group = Arc::new(dihedral(n)?);
    let rotate: Vec<usize> = (0..n).map(|v| (v + 1) % n).collect();
    let reflect: Vec<usize> = (0..n).map(|v| (n - v) % n).collect();
    let gens: Vec<Vec<usize>> = match group.generators().len() {
        // n = 1: the rotation is the identity and was dropped.
        1 => vec![reflect],
        _ => vec![rotate, reflect],
    };
    GroupAction::from_generators(group, n, &gens)
}
