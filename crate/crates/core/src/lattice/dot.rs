//! Graphviz DOT rendering of Hasse diagrams.

/// Emits a DOT digraph with one node per element and one edge per covering
/// pair `(lower, upper)`, drawn bottom-up.
pub fn hasse_dot(title: &str, names: &[String], covers: &[(usize, usize)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{title}\" {{\n"));
    out.push_str("  rankdir=BT;\n  node [shape=box];\n");
    for (i, name) in names.iter().enumerate() {
        out.push_str(&format!("  n{i} [label=\"{}\"];\n", escape(name)));
    }
    for &(lo, hi) in covers {
        out.push_str(&format!("  n{lo} -> n{hi};\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::downset::PartitionLattice;
    use crate::lattice::text::format_partition;

    #[test]
    fn partition_lattice_dot() {
        let lat = PartitionLattice::new(3).unwrap();
        let names: Vec<String> = lat.elements().iter().map(format_partition).collect();
        let covers = lat.covers();
        let dot = hasse_dot("P_I(3)", &names, &covers);
        assert_eq!(dot.matches(" -> ").count(), covers.len());
        // bottom covers: the three two-block partitions cover the bottom;
        // the top covers each of them: 3 + 3 edges
        assert_eq!(covers.len(), 6);
        assert!(dot.contains("1|2|3"));
    }
}
