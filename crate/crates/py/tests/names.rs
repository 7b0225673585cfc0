use splinewidth::nwidth::FunctionClass;
use splinewidth::ConstraintFamily;
use splinewidth_py::{parse_class, parse_family};

#[test]
fn family_names_round_trip() {
    for fam in [
        ConstraintFamily::Full,
        ConstraintFamily::Periodic(2),
        ConstraintFamily::EvenZero,
        ConstraintFamily::OddZero,
        ConstraintFamily::Mixed,
        ConstraintFamily::ReducedOdd,
    ] {
        assert_eq!(parse_family(&fam.name(), 5).unwrap(), fam);
    }
    // bare "periodic" takes p conditions
    assert_eq!(parse_family("periodic", 4).unwrap(), ConstraintFamily::Periodic(4));
    assert!(parse_family("periodic(x)", 3).is_err());
    assert!(parse_family("bogus", 3).is_err());
}

#[test]
fn class_names_match_the_library() {
    for c in [FunctionClass::APer, FunctionClass::AFull, FunctionClass::A0, FunctionClass::A1, FunctionClass::A2] {
        assert_eq!(parse_class(c.name()).unwrap(), c);
    }
    assert!(parse_class("a3").is_err());
}
