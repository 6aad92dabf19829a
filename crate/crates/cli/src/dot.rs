//! DOT rendering of lattices and quotient posets, with partition blocks as
//! clusters.

use std::fmt::Write;

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// A `digraph` with edges pointing upward. When `clusters` is given, each
/// block becomes one `subgraph cluster_k` holding its node declarations.
pub fn lattice_dot(
    name: &str,
    labels: &[String],
    covers: &[(usize, usize)],
    clusters: Option<&[Vec<usize>]>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=box];");
    match clusters {
        None => {
            for (i, label) in labels.iter().enumerate() {
                let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(label));
            }
        }
        Some(blocks) => {
            for (k, block) in blocks.iter().enumerate() {
                let _ = writeln!(out, "  subgraph cluster_{k} {{");
                let _ = writeln!(out, "    style=rounded;");
                for &i in block {
                    let _ = writeln!(out, "    n{i} [label=\"{}\"];", escape(&labels[i]));
                }
                let _ = writeln!(out, "  }}");
            }
        }
    }
    for &(lo, hi) in covers {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}
