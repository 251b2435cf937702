use phica_core::io::{
    parse_rule_json, read_map_table_csv, rule_field, rule_to_json, trace_csv, trace_pgm,
    write_map_table_csv,
};
use phica_core::{
    make_cyclic, run, Alphabet, Configuration, GroupHom, LinearLocalRule, LocalRule, PhiCA,
    VectorAlphabet, DEFAULT_BUDGET,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn rule_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = Alphabet::new(3).unwrap();
    let phi = GroupHom::from_generator_image(&make_cyclic(4).unwrap(), &make_cyclic(6).unwrap(), 3).unwrap();
    let t = PhiCA::new(phi, LocalRule::random(a, vec![0, 2, 5], &mut rng).unwrap()).unwrap();
    let json = rule_to_json(&t, None).unwrap();
    assert_eq!(parse_rule_json(&json).unwrap(), t);
}

#[test]
fn classical_rule_omits_phi() {
    let a = Alphabet::new(2).unwrap();
    let t = PhiCA::classical(&make_cyclic(4).unwrap(), LocalRule::from_fn(a, vec![1, 3], |p| p[0] ^ p[1]).unwrap()).unwrap();
    let json = rule_to_json(&t, None).unwrap();
    assert!(!json.contains("phi"));
    assert_eq!(parse_rule_json(&json).unwrap(), t);
}

#[test]
fn linear_rule_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let field = VectorAlphabet::new(2, 2).unwrap();
    let rule = LinearLocalRule::random(field, vec![0, 1], &mut rng).unwrap().to_local_rule().unwrap();
    let t = PhiCA::classical(&make_cyclic(3).unwrap(), rule).unwrap();
    let json = rule_to_json(&t, Some(field)).unwrap();
    assert_eq!(rule_field(&json).unwrap(), Some(field));
    assert_eq!(parse_rule_json(&json).unwrap(), t);
}

#[test]
fn rule_json_rejects_inconsistent_input() {
    assert!(parse_rule_json("{").is_err());
    // the map 1 -> 1 is not a homomorphism Z2 -> Z4
    let bad_phi = r#"{"group":"Z4","phi":{"domain":"Z2","codomain":"Z4","generator_image":1},"memory":[0],"table":{"0":0,"1":1}}"#;
    assert!(parse_rule_json(bad_phi).is_err());
    let short_table = r#"{"group":"Z4","memory":[0,1],"table":{"00":0}}"#;
    assert!(parse_rule_json(short_table).is_err());
}

#[test]
fn map_table_csv_round_trip() {
    let a = Alphabet::new(2).unwrap();
    let t = PhiCA::classical(&make_cyclic(4).unwrap(), LocalRule::from_fn(a, vec![0, 1], |p| p[0] & p[1]).unwrap()).unwrap();
    let table = t.tabulate(DEFAULT_BUDGET).unwrap();
    let mut buf = Vec::new();
    write_map_table_csv(&table, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("input,output\n"));
    assert_eq!(text.lines().count(), 17);
    assert_eq!(read_map_table_csv(buf.as_slice(), a).unwrap(), table);
}

#[test]
fn trace_formats() {
    let a = Alphabet::new(2).unwrap();
    let t = PhiCA::classical(&make_cyclic(4).unwrap(), LocalRule::from_fn(a, vec![1, 3], |p| p[0] ^ p[1]).unwrap()).unwrap();
    let trace = run(&t, &Configuration::parse("1,0,0,0", a).unwrap(), 2).unwrap();
    assert_eq!(trace_csv(&trace), "1,0,0,0\n0,1,0,1\n0,0,0,0\n");
    let pgm = trace_pgm(&trace, a);
    let header = b"P5\n4 3\n255\n";
    assert_eq!(&pgm[..header.len()], header);
    assert_eq!(&pgm[header.len()..], &[255, 0, 0, 0, 0, 255, 0, 255, 0, 0, 0, 0]);
}
