//! Topes, the tope graph, and graph convexity.

use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::minors::is_simple;
use crate::sign::{ElemSet, Sign, SignVector};
use crate::system::SignSystem;

/// Full-support members of a simple system.
pub fn topes(s: &SignSystem) -> Result<Vec<SignVector>> {
    if !is_simple(s) {
        return Err(Error::Precondition("system is not simple".into()));
    }
    Ok(s.iter().filter(|x| x.is_full()).cloned().collect())
}

/// Topes joined when they differ in exactly one element.
#[derive(Clone, Debug)]
pub struct TopeGraph {
    topes: Vec<SignVector>,
    index: HashMap<SignVector, usize>,
    adj: Vec<Vec<usize>>,
}

impl TopeGraph {
    pub fn new(s: &SignSystem) -> Result<TopeGraph> {
        let topes = topes(s)?;
        if topes.is_empty() {
            return Err(Error::Precondition("system has no topes".into()));
        }
        Ok(TopeGraph::from_topes(topes))
    }

    pub fn from_topes(topes: Vec<SignVector>) -> TopeGraph {
        let index: HashMap<SignVector, usize> = topes
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let adj = topes
            .iter()
            .map(|t| {
                (0..t.len())
                    .filter_map(|e| index.get(&t.with(e, -t.get(e))).copied())
                    .collect()
            })
            .collect();
        TopeGraph { topes, index, adj }
    }

    pub fn topes(&self) -> &[SignVector] {
        &self.topes
    }

    pub fn len(&self) -> usize {
        self.topes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topes.is_empty()
    }

    pub fn index_of(&self, t: &SignVector) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// BFS distances from `i`; `usize::MAX` where unreachable.
    pub fn distances_from(&self, i: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.len()];
        d[i] = 0;
        let mut q = VecDeque::from([i]);
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v] {
                if d[w] == usize::MAX {
                    d[w] = d[v] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn distance(&self, a: &SignVector, b: &SignVector) -> Result<usize> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        match self.distances_from(i)[j] {
            usize::MAX => Err(Error::Precondition("tope graph is disconnected".into())),
            d => Ok(d),
        }
    }

    fn require(&self, t: &SignVector) -> Result<usize> {
        self.index_of(t)
            .ok_or_else(|| Error::Precondition(format!("{t} is not a tope")))
    }

    /// First pair (in tope order) whose graph distance differs from the
    /// separator size, or `None` if the graph is a partial cube.
    pub fn partial_cube_violation(&self) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|i| {
            let d = self.distances_from(i);
            (0..self.len())
                .find(|&j| d[j] != self.topes[i].separator(&self.topes[j]).count())
                .map(|j| (i, j))
        })
    }

    pub fn is_partial_cube(&self) -> bool {
        self.partial_cube_violation().is_none()
    }

    pub fn diameter(&self) -> usize {
        (0..self.len())
            .map(|i| self.distances_from(i).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Topes conformal to `x`.
    pub fn convex_set(&self, x: &SignVector) -> Vec<usize> {
        (0..self.len()).filter(|&i| x.leq(&self.topes[i])).collect()
    }

    /// Graph-convex hull by closing under shortest paths.
    pub fn interval_closure(&self, start: &[usize]) -> Vec<usize> {
        let n = self.len();
        let mut inside = vec![false; n];
        for &i in start {
            inside[i] = true;
        }
        let dist: Vec<Vec<usize>> = (0..n).map(|i| self.distances_from(i)).collect();
        loop {
            let members: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
            let mut grew = false;
            for v in 0..n {
                if inside[v] {
                    continue;
                }
                let on_path = members.iter().any(|&a| {
                    members
                        .iter()
                        .any(|&b| dist[a][v].saturating_add(dist[v][b]) == dist[a][b])
                });
                if on_path {
                    inside[v] = true;
                    grew = true;
                }
            }
            if !grew {
                return (0..n).filter(|&i| inside[i]).collect();
            }
        }
    }

    /// Topes within distance `k` of `base`, for `k = 0..=radius`, each
    /// replaced by its convex hull.
    pub fn convex_ball_sequence(
        &self,
        base: &SignVector,
        radius: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let b = self.require(base)?;
        let d = self.distances_from(b);
        (0..=radius)
            .map(|k| {
                let ball: Vec<SignVector> = (0..self.len())
                    .filter(|&i| d[i] <= k)
                    .map(|i| self.topes[i].clone())
                    .collect();
                Ok(self.convex_set(&convex_hull_vector(&ball)?))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut edges = Vec::new();
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                if i < j {
                    edges.push([self.topes[i].to_string(), self.topes[j].to_string()]);
                }
            }
        }
        json!({
            "topes": self.topes.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph topes {\n");
        for (i, t) in self.topes.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{t}\"];\n"));
        }
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                if i < j {
                    s.push_str(&format!("  n{i} -- n{j};\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Zero wherever two members of `b` disagree, their common sign elsewhere.
pub fn convex_hull_vector(b: &[SignVector]) -> Result<SignVector> {
    let first = b
        .first()
        .ok_or_else(|| Error::Precondition("convex hull of no topes".into()))?;
    let mut out = first.clone();
    let mut mixed = ElemSet::empty(first.len());
    for t in b {
        for u in b {
            mixed = mixed.union(&u.separator(t));
        }
    }
    for e in mixed.iter() {
        out.set(e, Sign::Zero);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::examples::{four_lines, full_system, two_point_line};
    use crate::realize::DEFAULT_SEED;

    fn sv(s: &str) -> SignVector {
        SignVector::parse(s).unwrap()
    }

    #[test]
    fn square_is_a_four_cycle() {
        let g = TopeGraph::new(&full_system(2)).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.distance(&sv("++"), &sv("--")).unwrap(), 2);
        assert!(g.is_partial_cube());
    }

    #[test]
    fn four_lines_distances() {
        let l = four_lines().covectors(DEFAULT_SEED).unwrap();
        let g = TopeGraph::new(&l).unwrap();
        assert_eq!(g.len(), 9);
        assert!(g.is_partial_cube());
        assert!(g.max_degree() <= 4);
        let t = &g.topes()[0];
        assert_eq!(g.distance(t, t).unwrap(), 0);
    }

    #[test]
    fn hull_formula() {
        assert_eq!(convex_hull_vector(&[sv("+-")]).unwrap(), sv("+-"));
        let all: Vec<SignVector> = ["++", "+-", "-+", "--"].map(sv).to_vec();
        assert_eq!(convex_hull_vector(&all).unwrap(), sv("00"));
        assert!(convex_hull_vector(&[]).is_err());
    }

    #[test]
    fn ball_sequence_on_the_square() {
        let g = TopeGraph::new(&full_system(2)).unwrap();
        let seq = g.convex_ball_sequence(&sv("++"), 2).unwrap();
        let names = |v: &Vec<usize>| {
            v.iter()
                .map(|&i| g.topes()[i].to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(&seq[0]), ["++"]);
        // The two neighbours of ++ are joined by a geodesic through --, so
        // the radius-one hull is already everything.
        assert_eq!(names(&seq[1]), ["--", "-+", "+-", "++"]);
        let ball: Vec<usize> = ["++", "+-", "-+"]
            .iter()
            .map(|t| g.index_of(&sv(t)).unwrap())
            .collect();
        assert_eq!(g.interval_closure(&ball), seq[1]);
    }

    #[test]
    fn interval_closure_matches_hull_on_a_line() {
        let g = TopeGraph::new(&two_point_line()).unwrap();
        let ends = [
            g.index_of(&sv("++")).unwrap(),
            g.index_of(&sv("--")).unwrap(),
        ];
        assert_eq!(g.interval_closure(&ends).len(), 3);
        let x = convex_hull_vector(&[sv("++"), sv("--")]).unwrap();
        assert_eq!(g.convex_set(&x), g.interval_closure(&ends));
    }

    #[test]
    fn rejects_non_simple() {
        let s = SignSystem::from_strings(&["a", "b"], &["++", "00", "--"]).unwrap();
        assert!(TopeGraph::new(&s).is_err());
    }
}
