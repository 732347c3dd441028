//! Edge-colored Cayley and Schreier graphs and their adjacency spectra.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::groups::{coset_action, FiniteGroup, Subgroup};

/// A vertex set with one successor permutation per generator color.
///
/// The edge `v → succ[c][v]` encodes right multiplication by the generator
/// carrying color `c`; fixed points are loops.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredGraph {
    pub vertex_count: usize,
    /// Generator display labels, one per color.
    pub colors: Vec<String>,
    /// Per color, a permutation of the vertices.
    pub succ: Vec<Vec<usize>>,
}

impl ColoredGraph {
    pub fn new(vertex_count: usize, colors: Vec<String>, succ: Vec<Vec<usize>>) -> Result<Self> {
        if colors.is_empty() || colors.len() != succ.len() {
            return Err(Error::InvalidGroup("colors/successors mismatch".into()));
        }
        for s in &succ {
            if s.len() != vertex_count {
                return Err(Error::InvalidGroup("successor length mismatch".into()));
            }
            let mut seen = vec![false; vertex_count];
            for &v in s {
                if v >= vertex_count || seen[v] {
                    return Err(Error::InvalidGroup("successor map is not a bijection".into()));
                }
                seen[v] = true;
            }
        }
        Ok(ColoredGraph {
            vertex_count,
            colors,
            succ,
        })
    }

    /// The same graph with renamed colors (for matching tile glue labels).
    pub fn with_colors(mut self, colors: &[&str]) -> Result<Self> {
        if colors.len() != self.colors.len() {
            return Err(Error::InvalidGroup("color count mismatch".into()));
        }
        self.colors = colors.iter().map(|c| c.to_string()).collect();
        Ok(self)
    }

    /// Predecessor under color `c` (the inverse permutation).
    pub fn pred(&self, c: usize, v: usize) -> usize {
        self.succ[c]
            .iter()
            .position(|&w| w == v)
            .expect("successor maps are bijections")
    }

    /// Summed directed adjacency matrix over all colors.
    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.vertex_count;
        let mut a = DMatrix::zeros(n, n);
        for s in &self.succ {
            for (v, &w) in s.iter().enumerate() {
                a[(v, w)] += 1.0;
            }
        }
        a
    }

    /// Whether the graph is connected under all colors (ignoring direction).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count;
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for c in 0..self.colors.len() {
                for w in [self.succ[c][v], self.pred(c, v)] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Plain-text export: one `color v0 v1 ...` successor line per color.
    pub fn render(&self) -> String {
        let mut out = format!("vertices {}\n", self.vertex_count);
        for (c, s) in self.colors.iter().zip(&self.succ) {
            let vals: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{c} {}\n", vals.join(" ")));
        }
        out
    }

    /// DOT export with one edge per (vertex, color).
    pub fn to_dot(&self, name: &str) -> String {
        let palette = ["red", "blue", "green", "orange", "purple", "brown"];
        let mut out = format!("digraph \"{name}\" {{\n");
        for v in 0..self.vertex_count {
            out.push_str(&format!("  {v};\n"));
        }
        for (c, s) in self.succ.iter().enumerate() {
            let color = palette[c % palette.len()];
            for (v, &w) in s.iter().enumerate() {
                out.push_str(&format!(
                    "  {v} -> {w} [color={color}, label=\"{}\"];\n",
                    self.colors[c]
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Cayley graph of `(G, S)`: one vertex per element, `succ_s(g) = g·s`.
pub fn cayley_graph(group: &FiniteGroup, generators: &[usize]) -> Result<ColoredGraph> {
    if generators.iter().any(|&s| s == group.identity()) {
        return Err(Error::IdentityGenerator);
    }
    let n = group.order();
    let colors = generators
        .iter()
        .map(|&s| group.label(s).map(str::to_string).unwrap_or_else(|| format!("g{s}")))
        .collect();
    let succ = generators
        .iter()
        .map(|&s| (0..n).map(|g| group.mul(g, s)).collect())
        .collect();
    ColoredGraph::new(n, colors, succ)
}

/// Schreier graph of `H\G` with respect to `S`: the quotient of the Cayley
/// graph by left multiplication with `H`.
pub fn schreier_graph(
    group: &FiniteGroup,
    h: &Subgroup,
    generators: &[usize],
) -> Result<ColoredGraph> {
    if generators.iter().any(|&s| s == group.identity()) {
        return Err(Error::IdentityGenerator);
    }
    let action = coset_action(group, h);
    let d = action.cosets();
    let colors = generators
        .iter()
        .map(|&s| group.label(s).map(str::to_string).unwrap_or_else(|| format!("g{s}")))
        .collect();
    let succ = generators
        .iter()
        .map(|&s| (0..d).map(|c| action.apply(s, c)).collect())
        .collect();
    ColoredGraph::new(d, colors, succ)
}

/// Eigenvalues of `A + Aᵗ`, sorted ascending.
///
/// Symmetrization keeps the spectrum real; loops contribute 2 to the
/// diagonal, matching the tiling module's self-gluing convention.
pub fn symmetrized_adjacency_spectrum(graph: &ColoredGraph) -> Vec<f64> {
    let a = graph.adjacency();
    let sym = &a + a.transpose();
    let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).expect("real eigenvalues"));
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_CLOSURE_CAP;

    fn z3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 2, 0]], DEFAULT_CLOSURE_CAP)
            .unwrap()
            .0
    }

    #[test]
    fn z3_cycle_spectrum() {
        let g = z3();
        let gen = (1..3).find(|&x| x != 0).unwrap();
        let graph = cayley_graph(&g, &[gen]).unwrap();
        assert_eq!(graph.vertex_count, 3);
        let spec = symmetrized_adjacency_spectrum(&graph);
        let expected = [-1.0, -1.0, 2.0];
        for (a, b) in spec.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn identity_generator_is_rejected() {
        let g = z3();
        assert!(matches!(
            cayley_graph(&g, &[0]),
            Err(Error::IdentityGenerator)
        ));
    }

    #[test]
    fn repeated_generator_gives_two_identical_colors() {
        let g = z3();
        let graph = cayley_graph(&g, &[1, 1]).unwrap();
        assert_eq!(graph.colors.len(), 2);
        assert_eq!(graph.succ[0], graph.succ[1]);
    }

    #[test]
    fn one_vertex_all_loop_graph_spectrum() {
        let graph = ColoredGraph::new(1, vec!["a".into(), "b".into()], vec![vec![0], vec![0]]).unwrap();
        let spec = symmetrized_adjacency_spectrum(&graph);
        assert_eq!(spec.len(), 1);
        assert!((spec[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn schreier_of_trivial_subgroup_is_cayley() {
        let g = z3();
        let cay = cayley_graph(&g, &[1]).unwrap();
        let sch = schreier_graph(&g, &Subgroup::trivial(), &[1]).unwrap();
        assert_eq!(cay, sch);
    }

    #[test]
    fn schreier_of_whole_group_is_a_loop_bouquet() {
        let g = z3();
        let sch = schreier_graph(&g, &Subgroup::whole(&g), &[1]).unwrap();
        assert_eq!(sch.vertex_count, 1);
        assert_eq!(sch.succ[0], vec![0]);
    }
}
