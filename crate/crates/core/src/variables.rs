//! Conceptual variables: functions from a finite space to a finite set of
//! labelled values, together with the group-theoretic notions built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{self, FiniteGroup, GroupAction, GroupError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VariableError {
    #[error("space sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("value id {value} at point {point} has no label ({labels} labels)")]
    UnknownValue {
        point: usize,
        value: usize,
        labels: usize,
    },
    #[error("label {0} is never attained")]
    UnattainedLabel(usize),
    #[error("variable is not permissible: {0}")]
    NotPermissible(Witness),
    #[error("element-wise maximal set is not a subgroup ({0:?})")]
    NotClosed(Vec<usize>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A value label: a real number, or a symbol for non-numeric variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Real(f64),
    Symbol(String),
}

impl Label {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Label::Real(x) => Some(*x),
            Label::Symbol(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Real(x) => write!(f, "{x}"),
            Label::Symbol(s) => f.write_str(s),
        }
    }
}

/// A function on `{0, .., space_size - 1}` taking values in a finite label set.
///
/// Serialized as `{"values": [...], "labels": [...], "accessible": bool}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVariable")]
pub struct ConceptualVariable {
    values: Vec<usize>,
    labels: Vec<Label>,
    accessible: bool,
}

fn default_accessible() -> bool {
    true
}

#[derive(Deserialize)]
struct RawVariable {
    values: Vec<usize>,
    labels: Vec<Label>,
    #[serde(default = "default_accessible")]
    accessible: bool,
}

impl TryFrom<RawVariable> for ConceptualVariable {
    type Error = VariableError;

    fn try_from(raw: RawVariable) -> Result<Self, Self::Error> {
        let mut v = ConceptualVariable::new(raw.values, raw.labels)?;
        v.accessible = raw.accessible;
        Ok(v)
    }
}

impl ConceptualVariable {
    pub fn new(values: Vec<usize>, labels: Vec<Label>) -> Result<Self, VariableError> {
        let mut hit = vec![false; labels.len()];
        for (point, &value) in values.iter().enumerate() {
            if value >= labels.len() {
                return Err(VariableError::UnknownValue {
                    point,
                    value,
                    labels: labels.len(),
                });
            }
            hit[value] = true;
        }
        if let Some(missing) = hit.iter().position(|&h| !h) {
            return Err(VariableError::UnattainedLabel(missing));
        }
        Ok(ConceptualVariable {
            values,
            labels,
            accessible: true,
        })
    }

    /// Variable with the given real value at each point. Labels are the
    /// distinct values in ascending order.
    pub fn from_reals(point_values: &[f64]) -> Self {
        let mut distinct: Vec<f64> = point_values.to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let values = point_values
            .iter()
            .map(|x| {
                distinct
                    .iter()
                    .position(|d| d == x)
                    .expect("value is listed")
            })
            .collect();
        ConceptualVariable {
            values,
            labels: distinct.into_iter().map(Label::Real).collect(),
            accessible: true,
        }
    }

    /// Variable given by value ids whose labels are the ids themselves.
    pub fn from_ids(values: Vec<usize>) -> Result<Self, VariableError> {
        let count = values.iter().max().map_or(0, |m| m + 1);
        let labels = (0..count).map(|i| Label::Real(i as f64)).collect();
        ConceptualVariable::new(values, labels)
    }

    pub fn with_accessible(mut self, accessible: bool) -> Self {
        self.accessible = accessible;
        self
    }

    pub fn space_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, point: usize) -> usize {
        self.values[point]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn value_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_accessible(&self) -> bool {
        self.accessible
    }

    /// Real labels, or `None` if any label is symbolic.
    pub fn real_labels(&self) -> Option<Vec<f64>> {
        self.labels.iter().map(Label::as_real).collect()
    }

    /// One point carrying each value id.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.labels.len()];
        for (p, &v) in self.values.iter().enumerate() {
            if reps[v] == usize::MAX {
                reps[v] = p;
            }
        }
        reps
    }

    /// Same point-to-value map with a new label list.
    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Self, VariableError> {
        let mut v = ConceptualVariable::new(self.values.clone(), labels)?;
        v.accessible = self.accessible;
        Ok(v)
    }

    /// `phi -> theta(k phi)`
    pub fn compose_with(&self, act: &GroupAction, k: usize) -> Result<Self, VariableError> {
        check_sizes(self, act)?;
        let values = (0..self.space_size())
            .map(|p| self.values[act.apply(k, p)])
            .collect();
        let mut v = ConceptualVariable::new(values, self.labels.clone())?;
        v.accessible = self.accessible;
        Ok(v)
    }
}

fn check_sizes(var: &ConceptualVariable, act: &GroupAction) -> Result<(), VariableError> {
    if var.space_size() != act.space_size() {
        return Err(VariableError::SizeMismatch {
            left: var.space_size(),
            right: act.space_size(),
        });
    }
    Ok(())
}

/// A group element `k` and two points with equal values whose images under
/// `k` have different values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub element: usize,
    pub first: usize,
    pub second: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} separates points {} and {}",
            self.element, self.first, self.second
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permissibility {
    pub permissible: bool,
    pub witness: Option<Witness>,
}

/// Exhaustive test of: `theta(p1) = theta(p2)` implies `theta(k p1) = theta(k p2)`
/// for every group element `k`.
pub fn is_permissible(
    var: &ConceptualVariable,
    act: &GroupAction,
) -> Result<Permissibility, VariableError> {
    check_sizes(var, act)?;
    let n = var.space_size();
    for k in 0..act.group().order() {
        for p1 in 0..n {
            for p2 in p1 + 1..n {
                if var.value(p1) == var.value(p2)
                    && var.value(act.apply(k, p1)) != var.value(act.apply(k, p2))
                {
                    return Ok(Permissibility {
                        permissible: false,
                        witness: Some(Witness {
                            element: k,
                            first: p1,
                            second: p2,
                        }),
                    });
                }
            }
        }
    }
    Ok(Permissibility {
        permissible: true,
        witness: None,
    })
}

/// The action induced on value ids by a permissible variable.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub base: GroupAction,
    pub variable: ConceptualVariable,
    /// `induced_perm[k][theta(phi)] = theta(k phi)`
    pub induced_perm: Vec<Vec<usize>>,
    pub kernel: Vec<usize>,
    /// Image of the base group among the permutations of value ids.
    pub image_group: Arc<FiniteGroup>,
    /// Index in `image_group` of the image of each element of the base group.
    pub homomorphism: Vec<usize>,
    /// The image group acting on the value ids.
    pub image_action: GroupAction,
}

impl InducedAction {
    pub fn value_action(&self) -> &GroupAction {
        &self.image_action
    }
}

pub fn induce_group(
    var: &ConceptualVariable,
    act: &GroupAction,
) -> Result<InducedAction, VariableError> {
    let check = is_permissible(var, act)?;
    if let Some(w) = check.witness {
        return Err(VariableError::NotPermissible(w));
    }
    let reps = var.representatives();
    let group = act.group();
    let induced_perm: Vec<Vec<usize>> = (0..group.order())
        .map(|k| reps.iter().map(|&p| var.value(act.apply(k, p))).collect())
        .collect();
    let identity: Vec<usize> = (0..var.value_count()).collect();
    let kernel = (0..group.order())
        .filter(|&k| induced_perm[k] == identity)
        .collect();

    let gen_images: Vec<Vec<usize>> = group
        .generators()
        .iter()
        .map(|&g| induced_perm[g].clone())
        .collect();
    let (image, elements) = FiniteGroup::generate(
        format!("image({})", group.name()),
        identity,
        &gen_images,
        |a, b| groups::compose(a, b),
    )?;
    let lookup: BTreeMap<&Vec<usize>, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let homomorphism = induced_perm.iter().map(|p| lookup[p]).collect();
    let image = Arc::new(image);
    let image_action = GroupAction::new(image.clone(), var.value_count(), elements)?;

    Ok(InducedAction {
        base: act.clone(),
        variable: var.clone(),
        induced_perm,
        kernel,
        image_group: image,
        homomorphism,
        image_action,
    })
}

/// All `h` for which some permutation `g` of value ids satisfies
/// `theta(h phi) = g(theta(phi))` for every point, verified to be a subgroup.
pub fn maximal_permissible_subgroup(
    var: &ConceptualVariable,
    act: &GroupAction,
) -> Result<Vec<usize>, VariableError> {
    check_sizes(var, act)?;
    let group = act.group();
    let elements: Vec<usize> = (0..group.order())
        .filter(|&h| induced_value_permutation(var, act, h).is_some())
        .collect();
    if !groups::is_subgroup(group, &elements) {
        return Err(VariableError::NotClosed(elements));
    }
    Ok(elements)
}

/// The permutation `g` of value ids with `theta(h phi) = g(theta(phi))`, if
/// one exists.
pub fn induced_value_permutation(
    var: &ConceptualVariable,
    act: &GroupAction,
    h: usize,
) -> Option<Vec<usize>> {
    let mut g = vec![usize::MAX; var.value_count()];
    for p in 0..var.space_size() {
        let from = var.value(p);
        let to = var.value(act.apply(h, p));
        if g[from] == usize::MAX {
            g[from] = to;
        } else if g[from] != to {
            return None;
        }
    }
    let mut seen = vec![false; g.len()];
    for &t in &g {
        if seen[t] {
            return None;
        }
        seen[t] = true;
    }
    Some(g)
}

/// `alpha <= beta` iff `alpha = f(beta)` for some `f`; returns `f` as a table
/// from value ids of `beta` to value ids of `alpha`.
pub fn accessibility_leq(
    alpha: &ConceptualVariable,
    beta: &ConceptualVariable,
) -> Result<Option<Vec<usize>>, VariableError> {
    if alpha.space_size() != beta.space_size() {
        return Err(VariableError::SizeMismatch {
            left: alpha.space_size(),
            right: beta.space_size(),
        });
    }
    let mut f = vec![usize::MAX; beta.value_count()];
    for p in 0..alpha.space_size() {
        let b = beta.value(p);
        let a = alpha.value(p);
        if f[b] == usize::MAX {
            f[b] = a;
        } else if f[b] != a {
            return Ok(None);
        }
    }
    Ok(Some(f))
}

/// Variables of `family` that are accessible and have no strictly finer
/// accessible variable in `family`.
pub fn maximal_in_family(family: &[ConceptualVariable]) -> Result<Vec<usize>, VariableError> {
    let mut out = Vec::new();
    for (i, theta) in family.iter().enumerate() {
        if !theta.is_accessible() {
            continue;
        }
        let mut maximal = true;
        for (j, other) in family.iter().enumerate() {
            if i == j || !other.is_accessible() {
                continue;
            }
            let below = accessibility_leq(theta, other)?.is_some();
            let above = accessibility_leq(other, theta)?.is_some();
            if below && !above {
                maximal = false;
                break;
            }
        }
        if maximal {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{check_homomorphism, cyclic};

    fn z4_shift() -> GroupAction {
        GroupAction::regular(Arc::new(cyclic(4).unwrap()))
    }

    fn parity() -> ConceptualVariable {
        ConceptualVariable::from_ids(vec![0, 1, 0, 1]).unwrap()
    }

    fn low_half() -> ConceptualVariable {
        // 1 on {0, 1}, 0 on {2, 3}
        ConceptualVariable::from_reals(&[1.0, 1.0, 0.0, 0.0])
    }

    #[test]
    fn construction_invariants() {
        assert!(matches!(
            ConceptualVariable::new(vec![0, 2], vec![Label::Real(0.0), Label::Real(1.0)]),
            Err(VariableError::UnknownValue {
                point: 1,
                value: 2,
                ..
            })
        ));
        assert!(matches!(
            ConceptualVariable::new(vec![0, 0], vec![Label::Real(0.0), Label::Real(1.0)]),
            Err(VariableError::UnattainedLabel(1))
        ));
        let v = low_half();
        assert_eq!(v.values(), &[1, 1, 0, 0]);
        assert_eq!(v.real_labels().unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn serde_round_trip() {
        let v = ConceptualVariable::new(
            vec![0, 1, 1],
            vec![Label::Symbol("up".into()), Label::Real(-0.5)],
        )
        .unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: ConceptualVariable = serde_json::from_str(&json).unwrap();
        assert_eq!(v, back);
        let bad: Result<ConceptualVariable, _> =
            serde_json::from_str(r#"{"values":[0,3],"labels":[1.0,2.0]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn permissibility_examples() {
        let act = z4_shift();
        assert!(is_permissible(&parity(), &act).unwrap().permissible);

        let check = is_permissible(&low_half(), &act).unwrap();
        assert!(!check.permissible);
        assert_eq!(
            check.witness,
            Some(Witness {
                element: 1,
                first: 0,
                second: 1
            })
        );

        let constant = ConceptualVariable::from_ids(vec![0; 4]).unwrap();
        assert!(is_permissible(&constant, &act).unwrap().permissible);
        let injective = ConceptualVariable::from_ids(vec![3, 1, 0, 2]).unwrap();
        assert!(is_permissible(&injective, &act).unwrap().permissible);

        let short = ConceptualVariable::from_ids(vec![0, 1]).unwrap();
        assert!(matches!(
            is_permissible(&short, &act),
            Err(VariableError::SizeMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn induced_group_of_parity() {
        let act = z4_shift();
        let induced = induce_group(&parity(), &act).unwrap();
        assert_eq!(induced.kernel, vec![0, 2]);
        assert_eq!(induced.image_group.order(), 2);
        assert_eq!(induced.induced_perm[1], vec![1, 0]);
        let z2 = cyclic(2).unwrap();
        assert_eq!(induced.image_group.cayley(), z2.cayley());
        let hom =
            check_homomorphism(act.group(), &induced.image_group, &induced.homomorphism).unwrap();
        assert!(hom.holds);
    }

    #[test]
    fn induced_group_extremes() {
        let act = z4_shift();
        let injective = ConceptualVariable::from_ids(vec![2, 0, 3, 1]).unwrap();
        let induced = induce_group(&injective, &act).unwrap();
        assert_eq!(induced.kernel, vec![0]);
        assert_eq!(induced.image_group.order(), 4);

        let constant = ConceptualVariable::from_ids(vec![0; 4]).unwrap();
        let induced = induce_group(&constant, &act).unwrap();
        assert_eq!(induced.kernel, vec![0, 1, 2, 3]);
        assert_eq!(induced.image_group.order(), 1);

        assert!(matches!(
            induce_group(&low_half(), &act),
            Err(VariableError::NotPermissible(Witness { element: 1, .. }))
        ));
    }

    #[test]
    fn maximal_subgroup_examples() {
        let act = z4_shift();
        assert_eq!(
            maximal_permissible_subgroup(&low_half(), &act).unwrap(),
            vec![0, 2]
        );
        assert_eq!(
            maximal_permissible_subgroup(&parity(), &act).unwrap(),
            vec![0, 1, 2, 3]
        );
        let injective = ConceptualVariable::from_ids(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(
            maximal_permissible_subgroup(&injective, &act).unwrap(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn accessibility_examples() {
        let identity = ConceptualVariable::from_ids(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(
            accessibility_leq(&parity(), &identity).unwrap(),
            Some(vec![0, 1, 0, 1])
        );
        let constant = ConceptualVariable::from_ids(vec![0; 4]).unwrap();
        assert_eq!(accessibility_leq(&identity, &constant).unwrap(), None);
        assert_eq!(
            accessibility_leq(&parity(), &parity()).unwrap(),
            Some(vec![0, 1])
        );
        let short = ConceptualVariable::from_ids(vec![0]).unwrap();
        assert!(accessibility_leq(&short, &identity).is_err());
    }

    #[test]
    fn maximal_within_family() {
        let identity = ConceptualVariable::from_ids(vec![0, 1, 2, 3]).unwrap();
        let hidden = identity.clone().with_accessible(false);
        let family = vec![parity(), low_half(), identity];
        assert_eq!(maximal_in_family(&family).unwrap(), vec![2]);
        let family = vec![parity(), low_half(), hidden];
        assert_eq!(maximal_in_family(&family).unwrap(), vec![0, 1]);
    }
}
