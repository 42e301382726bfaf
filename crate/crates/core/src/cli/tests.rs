use super::*;
use crate::finqg::BundledInstance;
use crate::scalars::rat;

const FILES: [(BundledInstance, &str); 5] = [
    (
        BundledInstance::CZ2,
        include_str!("../../instances/c_z2.json"),
    ),
    (
        BundledInstance::FZ2,
        include_str!("../../instances/f_z2.json"),
    ),
    (
        BundledInstance::CS3,
        include_str!("../../instances/c_s3.json"),
    ),
    (
        BundledInstance::FS3,
        include_str!("../../instances/f_s3.json"),
    ),
    (
        BundledInstance::KacPaljutkin,
        include_str!("../../instances/kac_paljutkin.json"),
    ),
];

fn finite(text: &str) -> AlgebraSpec {
    match parse_instance(text, "test.json", None).unwrap() {
        Instance::Finite { spec, .. } => spec,
        Instance::Suq2 { .. } => panic!("expected a finite instance"),
    }
}

fn cfg(degree: usize) -> RunConfig {
    RunConfig::new(degree, default_z_grid(), None).unwrap()
}

#[test]
fn instance_files_match_the_builders() {
    for (b, text) in FILES {
        let spec = finite(text);
        assert_eq!(spec, b.spec(), "{}", b.name());
        assert_eq!(instance_json(&b.spec()), text, "{}", b.name());
    }
    assert_eq!(finite(FILES[0].1).dim, 2);
}

#[test]
fn suq2_file_loads() {
    let inst =
        parse_instance(include_str!("../../instances/suq2.json"), "suq2.json", None).unwrap();
    match &inst {
        Instance::Suq2 { engine, name } => {
            assert_eq!(engine.q(), &rat(1, 2));
            assert_eq!(engine.degree_cap(), 6);
            assert_eq!(name, "suq2");
        }
        Instance::Finite { .. } => panic!("expected SU_q(2)"),
    }
    let over = parse_instance(
        include_str!("../../instances/suq2.json"),
        "suq2.json",
        Some(&rat(1, 3)),
    )
    .unwrap();
    match over {
        Instance::Suq2 { engine, .. } => assert_eq!(engine.q(), &rat(1, 3)),
        Instance::Finite { .. } => panic!("expected SU_q(2)"),
    }
}

#[test]
fn integer_rows_equal_string_rows() {
    let a = r#"{"kind": "finite", "dim": 1, "mult": [[0, 0, 0, "1"]], "star": [[0, 0, "1"]],
               "unit": ["1"], "comult": [[0, 0, 0, "1"]]}"#;
    let b = r#"{"kind": "finite", "dim": 1, "mult": [[0, 0, 0, 1, 1, 0, 1]],
               "star": [[0, 0, 2, 2, 0, 5]], "unit": [["1", "0"]],
               "comult": [[0, 0, 0, "1", "0"]]}"#;
    assert_eq!(finite(a), finite(b));
}

#[test]
fn non_associative_file_names_the_triple() {
    let err = parse_instance(
        include_str!("../../instances/faults/c_z2_non_associative.json"),
        "bad.json",
        None,
    )
    .err()
    .expect("non-associative input is rejected");
    let msg = err.to_string();
    assert!(matches!(err, CliError::Validation { .. }));
    assert!(
        msg.contains("associativity") && msg.contains("(g1, e, g1)"),
        "{msg}"
    );
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn parse_errors_locate_the_problem() {
    let err = parse_instance("{\n  \"kind\": \"finite\",\n  \"dim\": }", "x.json", None)
        .err()
        .unwrap();
    assert!(matches!(err, CliError::Syntax { line: 3, .. }), "{err}");

    let bad_q = r#"{"kind": "suq2", "q": "half", "degree_cap": 4}"#;
    let err = parse_instance(bad_q, "x.json", None).err().unwrap();
    assert!(
        matches!(&err, CliError::Field { field, .. } if field == "q"),
        "{err}"
    );

    let bad_row = r#"{"kind": "finite", "dim": 1, "mult": [[0, 0, 3, "1"]], "star": [],
                      "unit": ["1"], "comult": []}"#;
    let err = parse_instance(bad_row, "x.json", None).err().unwrap();
    assert!(
        matches!(&err, CliError::Field { field, .. } if field == "mult[0]"),
        "{err}"
    );

    let float = r#"{"kind": "suq2", "q": 0.5, "degree_cap": 4}"#;
    assert!(parse_instance(float, "x.json", None).is_err());
}

#[test]
fn q_override_is_rejected_for_finite_files() {
    let err = parse_instance(FILES[0].1, "c_z2.json", Some(&rat(1, 2)))
        .err()
        .unwrap();
    assert!(matches!(err, CliError::Config(_)));
}

#[test]
fn z_grids() {
    assert_eq!(parse_z_grid("default").unwrap(), default_z_grid());
    let g = parse_z_grid("0, 1, -i, 0.5+0.25i, 2i").unwrap();
    assert_eq!(
        g,
        vec![
            Cx::new(0.0, 0.0),
            Cx::new(1.0, 0.0),
            Cx::new(0.0, -1.0),
            Cx::new(0.5, 0.25),
            Cx::new(0.0, 2.0)
        ]
    );
    assert!(matches!(parse_z_grid("1,,2"), Err(CliError::Config(_))));
    assert!(matches!(parse_z_grid("one"), Err(CliError::Config(_))));
}

#[test]
fn suites_parse() {
    assert_eq!("identities".parse::<Suite>().unwrap(), Suite::Identities);
    assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
    assert!(matches!("laws".parse::<Suite>(), Err(CliError::Config(_))));
    assert!(RunConfig::new(4, default_z_grid(), Some(0.0)).is_err());
}

#[test]
fn degree_above_cap_is_a_configuration_error() {
    let inst =
        parse_instance(include_str!("../../instances/suq2.json"), "suq2.json", None).unwrap();
    let err = run_suite(&inst, Suite::Hopf, &cfg(7)).err().unwrap();
    assert!(matches!(err, CliError::Config(_)));
}

#[test]
fn json_report_is_ordered_and_deterministic() {
    let inst = parse_instance(FILES[0].1, "c_z2.json", None).unwrap();
    let c = cfg(6);
    let r = run_suite(&inst, Suite::Hopf, &c).unwrap();
    assert!(r.pass());
    let a = render_json(&inst, &c, &r);
    let b = render_json(&inst, &c, &run_suite(&inst, Suite::Hopf, &c).unwrap());
    assert_eq!(a, b);
    let pos = |k: &str| a.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("suite") < pos("instance"));
    assert!(pos("instance") < pos("config"));
    assert!(pos("config") < pos("entries"));
    assert!(a.contains("\"residual\": 0.0000000000000000e0"));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["suite"], "hopf");
    assert_eq!(v["instance"], "c_z2");
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn float_repr_has_seventeen_significant_digits() {
    assert_eq!(float_repr(0.1), "1.0000000000000001e-1");
    assert_eq!(float_repr(0.0), "0.0000000000000000e0");
    assert_eq!(float_repr(f64::INFINITY), "\"inf\"");
    for x in [0.1, 1.0 / 3.0, 2.5e-300, 12345.678] {
        assert_eq!(float_repr(x).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn all_suite_prefixes_entries() {
    let inst = parse_instance(FILES[0].1, "c_z2.json", None).unwrap();
    let r = run_suite(&inst, Suite::All, &cfg(6)).unwrap();
    assert!(r.pass(), "{r}");
    for s in Suite::EACH {
        assert!(r
            .entries
            .iter()
            .any(|e| e.id.starts_with(&format!("{}.", s.name()))));
    }
    assert_eq!(exit_code(&r), 0);
}
