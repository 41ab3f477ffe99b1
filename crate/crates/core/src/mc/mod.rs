//! Global model checking by labelling, in time polynomial in the sizes of
//! the model and the formula.

mod labeling;
mod sublist;

pub use labeling::{global_check, label, ContextView, LabelStore};
pub use sublist::{sub_list, EntryKind, OrderedSubList, QueryContext, QueryOccurrence, SubEntry};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::telescope;
    use crate::model::extension;
    use crate::parser::parse_formula;

    fn check(text: &str) -> Vec<usize> {
        let m = telescope();
        let f = parse_formula(text).unwrap();
        let got = global_check(&m, &f).unwrap();
        assert_eq!(got, extension(&m, &f).unwrap(), "labelling disagrees with evaluation on {text}");
        got
    }

    #[test]
    fn telescope_queries() {
        // Budget fails at w3 and w4, so the query holds vacuously there.
        assert_eq!(check("[? n,m : p] C{n,m} p"), vec![0, 2, 3]);
        assert_eq!(check("K{l} (b[m] >= 9)"), vec![0, 1, 2, 3]);
        assert_eq!(check("p"), vec![0, 2]);
        assert_eq!(check("[? n,m : p] K{l} (C{n,m} p | C{n,m} ~p)"), vec![0, 1, 2, 3]);
        assert_eq!(check("[? n,m : p] false"), vec![2, 3]);
        // The first query spends all of m's budget, so a second one is vacuous.
        assert_eq!(check("[? n,m : p] [? n,m : p] false"), vec![0, 1, 2, 3]);
    }

    #[test]
    fn conjunction_order() {
        let list = sub_list(&parse_formula("p & q").unwrap());
        let names: Vec<String> = (0..list.len()).map(|k| list.describe(k)).collect();
        assert_eq!(names, ["p", "q", "p & q"]);
    }

    #[test]
    fn knowledge_of_query() {
        let list = sub_list(&parse_formula("K{i} [? G : p] q").unwrap());
        let names: Vec<String> = (0..list.len()).map(|k| list.describe(k)).collect();
        assert_eq!(names, ["p", "[?G:p]", "(q)^[?G:p]", "[? G : p] q", "K{i} [? G : p] q"]);
    }
}
