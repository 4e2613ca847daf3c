use operad_workbench::strictify::{check_strictness, strictify, StrictifyBounds, StrictnessBounds};
use operad_workbench::weakcat::instances::{indiscrete_monoid, tagged_monoid, terminal, z2_monoidal};
use operad_workbench::weakcat::{coherence_check, Category, CoherenceBounds, WeakPCategoryData};

const BUNDLED: &str = include_str!("../data/indiscrete_monoid_weakcat.json");

fn corpus() -> Vec<WeakPCategoryData> {
    vec![
        indiscrete_monoid(2).unwrap(),
        indiscrete_monoid(3).unwrap(),
        tagged_monoid(2).unwrap(),
        z2_monoidal(false).unwrap(),
        z2_monoidal(true).unwrap(),
        terminal().unwrap(),
    ]
}

#[test]
fn bundled_file_is_indiscrete_z3() {
    let w = indiscrete_monoid(3).unwrap();
    assert_eq!(BUNDLED.trim_end(), w.to_json().trim_end());
    assert_eq!(WeakPCategoryData::from_json(BUNDLED).unwrap().to_json(), w.to_json());
}

#[test]
fn json_round_trips() {
    for w in corpus() {
        let back = WeakPCategoryData::from_json(&w.to_json()).unwrap();
        assert_eq!(back.to_json(), w.to_json(), "{}", w.name);
        assert!(back.validate().passed(), "{}", w.name);
    }
}

#[test]
fn object_counts_are_bounded_lists() {
    // the terminal target has one element per arity, so objects of st A up to
    // arity 3 are lists of objects of W of length ≤ 3
    for w in [indiscrete_monoid(2).unwrap(), terminal().unwrap(), z2_monoidal(false).unwrap()] {
        let s = strictify(&w, &StrictifyBounds::default()).unwrap();
        let a = w.object_count();
        assert_eq!(s.object_count(), (0..=3).map(|n| a.pow(n)).sum::<usize>(), "{}", w.name);
    }
}

#[test]
fn coherent_data_strictifies() {
    let bounds = CoherenceBounds::default();
    let mut coherent = 0;
    for w in corpus() {
        if !coherence_check(&w, &bounds).passed() {
            continue;
        }
        coherent += 1;
        let s = strictify(&w, &StrictifyBounds::default()).unwrap();
        let r = check_strictness(&s, &StrictnessBounds::default());
        assert!(r.passed(), "{}: {r}", w.name);
    }
    assert_eq!(coherent, corpus().len() - 1);
}
