//! C4.5-style decision tree.
//!
//! Splits maximize gain ratio. Continuous attributes use binary threshold
//! splits with candidate cuts at midpoints between consecutive distinct
//! values; nominal attributes split multiway, one branch per observed
//! category. A split is admissible only when every branch receives at least
//! `min_leaf` instances. After growing, the tree is pruned bottom-up with
//! pessimistic error estimates: a subtree collapses to a leaf when the
//! leaf's estimated error count does not exceed the subtree's.
//!
//! Ties everywhere break deterministically: attributes in index order,
//! thresholds ascending, classes by lowest index.

use crate::data::{AttrKind, Matrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeParams {
    /// Pruning confidence level; smaller prunes harder.
    pub confidence: f64,
    /// Minimum instances each branch of a split must receive.
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> TreeParams {
        TreeParams { confidence: 0.25, min_leaf: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Leaf {
        class: usize,
        n: usize,
        errors: usize,
    },
    Split {
        attr: usize,
        /// `Some(t)`: two children, `<= t` then `> t`. `None`: nominal,
        /// children parallel to `cats`.
        threshold: Option<f64>,
        cats: Vec<i64>,
        majority: usize,
        n: usize,
        errors: usize,
        children: Vec<Node>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeModel {
    width: usize,
    root: Node,
    unpruned_nodes: usize,
}

impl TreeModel {
    pub fn fit(
        x: &Matrix,
        kinds: &[AttrKind],
        labels: &[usize],
        n_classes: usize,
        params: &TreeParams,
    ) -> TreeModel {
        let idx: Vec<usize> = (0..x.rows()).collect();
        let mut root = build(x, kinds, labels, &idx, n_classes, params);
        let unpruned_nodes = count_nodes(&root);
        prune(&mut root, params.confidence);
        TreeModel { width: x.cols(), root, unpruned_nodes }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn node_count(&self) -> usize {
        count_nodes(&self.root)
    }

    pub fn unpruned_node_count(&self) -> usize {
        self.unpruned_nodes
    }

    pub fn predict_row(&self, row: &[f64]) -> usize {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, .. } => return *class,
                Node::Split { attr, threshold, cats, majority, children, .. } => {
                    let v = row[*attr];
                    node = match threshold {
                        Some(t) => {
                            if v <= *t {
                                &children[0]
                            } else {
                                &children[1]
                            }
                        }
                        None => match cats.iter().position(|&c| c == v as i64) {
                            Some(k) => &children[k],
                            // category unseen in training: fall back to the
                            // node's majority class
                            None => return *majority,
                        },
                    };
                }
            }
        }
    }
}

fn count_nodes(node: &Node) -> usize {
    match node {
        Node::Leaf { .. } => 1,
        Node::Split { children, .. } => 1 + children.iter().map(count_nodes).sum::<usize>(),
    }
}

fn class_counts(labels: &[usize], idx: &[usize], n_classes: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n_classes];
    for &i in idx {
        counts[labels[i]] += 1;
    }
    counts
}

fn majority_of(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &n) in counts.iter().enumerate().skip(1) {
        if n > counts[best] {
            best = c;
        }
    }
    best
}

fn entropy_of(counts: &[usize]) -> f64 {
    crate::entropy::class_entropy(counts)
}

/// Chosen split for one node: the attribute, how it branches, and the index
/// groups each branch receives.
#[derive(Clone, Debug, PartialEq)]
pub enum SplitChoice {
    Threshold { attr: usize, t: f64, sides: [Vec<usize>; 2] },
    Categories { attr: usize, cats: Vec<i64>, groups: Vec<Vec<usize>> },
}

/// Best admissible split of `idx` by gain ratio, or `None` when no split
/// helps. Replacement is strictly-greater, so earlier attributes and lower
/// thresholds win ties.
pub fn choose_split(
    x: &Matrix,
    kinds: &[AttrKind],
    labels: &[usize],
    idx: &[usize],
    n_classes: usize,
    min_leaf: usize,
) -> Option<SplitChoice> {
    let n = idx.len();
    let parent = entropy_of(&class_counts(labels, idx, n_classes));
    let mut best_ratio = 0.0f64;
    let mut best: Option<SplitChoice> = None;

    for (attr, kind) in kinds.iter().enumerate().take(x.cols()) {
        match kind {
            AttrKind::Continuous => {
                let mut order: Vec<usize> = idx.to_vec();
                order.sort_by(|&a, &b| {
                    x.value(a, attr)
                        .partial_cmp(&x.value(b, attr))
                        .unwrap()
                        .then(a.cmp(&b))
                });
                let mut left = vec![0usize; n_classes];
                let mut right = class_counts(labels, &order, n_classes);
                for k in 0..n - 1 {
                    left[labels[order[k]]] += 1;
                    right[labels[order[k]]] -= 1;
                    let a = x.value(order[k], attr);
                    let b = x.value(order[k + 1], attr);
                    if a == b {
                        continue;
                    }
                    let n_left = k + 1;
                    let n_right = n - n_left;
                    if n_left < min_leaf || n_right < min_leaf {
                        continue;
                    }
                    let t = (a + b) / 2.0;
                    let wl = n_left as f64 / n as f64;
                    let wr = n_right as f64 / n as f64;
                    let gain = parent - wl * entropy_of(&left) - wr * entropy_of(&right);
                    if gain <= 1e-12 {
                        continue;
                    }
                    let split_info = -wl * wl.log2() - wr * wr.log2();
                    let ratio = gain / split_info;
                    if ratio > best_ratio {
                        best_ratio = ratio;
                        best = Some(SplitChoice::Threshold {
                            attr,
                            t,
                            sides: [order[..n_left].to_vec(), order[n_left..].to_vec()],
                        });
                    }
                }
            }
            AttrKind::Nominal => {
                let mut cats: Vec<i64> = Vec::new();
                let mut groups: Vec<Vec<usize>> = Vec::new();
                for &i in idx {
                    let code = x.value(i, attr) as i64;
                    match cats.iter().position(|&c| c == code) {
                        Some(k) => groups[k].push(i),
                        None => {
                            cats.push(code);
                            groups.push(vec![i]);
                        }
                    }
                }
                let order: Vec<usize> = {
                    let mut o: Vec<usize> = (0..cats.len()).collect();
                    o.sort_by_key(|&k| cats[k]);
                    o
                };
                let cats: Vec<i64> = order.iter().map(|&k| cats[k]).collect();
                let groups: Vec<Vec<usize>> = order.iter().map(|&k| groups[k].clone()).collect();
                if cats.len() < 2 || groups.iter().any(|g| g.len() < min_leaf) {
                    continue;
                }
                let mut gain = parent;
                let mut split_info = 0.0;
                for g in &groups {
                    let w = g.len() as f64 / n as f64;
                    gain -= w * entropy_of(&class_counts(labels, g, n_classes));
                    split_info -= w * w.log2();
                }
                if gain <= 1e-12 || split_info <= 0.0 {
                    continue;
                }
                let ratio = gain / split_info;
                if ratio > best_ratio {
                    best_ratio = ratio;
                    best = Some(SplitChoice::Categories { attr, cats, groups });
                }
            }
        }
    }
    best
}

fn build(
    x: &Matrix,
    kinds: &[AttrKind],
    labels: &[usize],
    idx: &[usize],
    n_classes: usize,
    params: &TreeParams,
) -> Node {
    let counts = class_counts(labels, idx, n_classes);
    let majority = majority_of(&counts);
    let errors = idx.len() - counts[majority];
    if errors == 0 {
        return Node::Leaf { class: majority, n: idx.len(), errors };
    }
    match choose_split(x, kinds, labels, idx, n_classes, params.min_leaf) {
        None => Node::Leaf { class: majority, n: idx.len(), errors },
        Some(SplitChoice::Threshold { attr, t, sides }) => {
            let children = sides
                .iter()
                .map(|side| build(x, kinds, labels, side, n_classes, params))
                .collect();
            Node::Split {
                attr,
                threshold: Some(t),
                cats: Vec::new(),
                majority,
                n: idx.len(),
                errors,
                children,
            }
        }
        Some(SplitChoice::Categories { attr, cats, groups }) => {
            let children = groups
                .iter()
                .map(|g| build(x, kinds, labels, g, n_classes, params))
                .collect();
            Node::Split {
                attr,
                threshold: None,
                cats,
                majority,
                n: idx.len(),
                errors,
                children,
            }
        }
    }
}

/// Pessimistic count of errors a leaf with `n` instances and `e` observed
/// training errors is charged: the upper confidence bound on the true error
/// rate times `n`. With no observed errors the bound solves
/// `(1 - rate)^n = confidence` exactly; otherwise it is the normal-
/// approximation upper bound on a binomial proportion.
fn added_errors(e: usize, n: usize, confidence: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    if e == 0 {
        return nf * (1.0 - confidence.powf(1.0 / nf));
    }
    if e >= n {
        return e as f64;
    }
    let z = probit(1.0 - confidence);
    let f = e as f64 / nf;
    let bound = (f + z * z / (2.0 * nf)
        + z * (f / nf - f * f / nf + z * z / (4.0 * nf * nf)).sqrt())
        / (1.0 + z * z / nf);
    bound.min(1.0) * nf
}

fn pessimistic_errors(node: &Node, confidence: f64) -> f64 {
    match node {
        Node::Leaf { n, errors, .. } => added_errors(*errors, *n, confidence),
        Node::Split { children, .. } => {
            children.iter().map(|c| pessimistic_errors(c, confidence)).sum()
        }
    }
}

fn prune(node: &mut Node, confidence: f64) {
    if let Node::Split { majority, n, errors, children, .. } = node {
        for child in children.iter_mut() {
            prune(child, confidence);
        }
        let as_leaf = added_errors(*errors, *n, confidence);
        let as_subtree: f64 =
            children.iter().map(|c| pessimistic_errors(c, confidence)).sum();
        if as_leaf <= as_subtree + 1e-9 {
            *node = Node::Leaf { class: *majority, n: *n, errors: *errors };
        }
    }
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// |error| < 1.2e-9 on (0, 1)).
fn probit(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "probit domain");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p > 1.0 - P_LOW {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}
