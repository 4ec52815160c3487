use cgsb_core::confmod::{base_ruleset, mod_reduce, ModElement, ModTerm, Root};
use cgsb_core::freelie::{LieSpec, LsWord};
use cgsb_core::gsb::*;
use cgsb_core::linear::q;
use cgsb_core::opalg::OpLetter;
use cgsb_core::poisson::{encode, p_bracket, p_equal_conformal, p_mul, PoissonElement, PoissonMonomial};
use cgsb_core::rules::{RuleBody, RuleSet, DEFAULT_FUEL};

fn spec2() -> LieSpec {
    LieSpec::free_on(&["x", "y"]).unwrap()
}

fn w(spec: &LieSpec, s: &str) -> LsWord {
    spec.parse_word(s).unwrap()
}

fn mono(spec: &LieSpec, names: &[&str]) -> PoissonElement {
    PoissonElement::basis(PoissonMonomial::new(names.iter().map(|n| w(spec, n)).collect()))
}

fn l(n: u32, a: &LsWord) -> OpLetter {
    OpLetter::L(n, a.clone())
}

fn small() -> Bounds {
    Bounds { max_n: 2, max_s: 2, max_word_len: 4, ..Bounds::default() }
}

fn tag(rules: &RuleSet, i: usize) -> &str {
    &rules.rule(i).id
}

#[test]
fn overlaps_include_the_leibniz_pairing() {
    let spec = spec2();
    let rules = base_ruleset(&spec);
    let (x, y) = (w(&spec, "x"), w(&spec, "y"));
    let word = ModTerm::new(vec![OpLetter::Ry(0), OpLetter::D, l(2, &y)], Root::X(x.clone()));
    let comps = overlaps(&rules, &small());
    assert!(comps.iter().any(|c| c.overlap == Overlap::Term(word.clone())
        && c.kind == CompositionKind::LeftMultiplication(OpLetter::Ry(0))
        && tag(&rules, c.rule_a) == "dL2"
        && tag(&rules, c.rule_b) == "Rd"));
    // ∂ in front of L_0^x1
    let word = ModTerm::new(vec![OpLetter::D, l(0, &x)], Root::One);
    assert!(comps.iter().any(|c| c.overlap == Overlap::Term(word.clone()) && tag(&rules, c.rule_a) == "L0-1"));
    // L_2^ab and R_n^a∂ share no letter
    assert!(!comps.iter().any(|c| {
        let (a, b) = (tag(&rules, c.rule_a), tag(&rules, c.rule_b));
        (a == "L2-swap" && b == "Rad") || (a == "Rad" && b == "L2-swap")
    }));
}

#[test]
fn leibniz_residual_appears_without_the_rule() {
    let spec = spec2();
    let base = base_ruleset(&spec);
    let without = base.without("leibniz");
    let (x, y) = (w(&spec, "x"), w(&spec, "y"));
    // a = y > b = x
    let word = ModTerm::new(vec![OpLetter::Ry(0), OpLetter::D, l(2, &y)], Root::X(x.clone()));
    let pick = |rules: &RuleSet| {
        overlaps(rules, &small())
            .into_iter()
            .find(|c| c.overlap == Overlap::Term(word.clone()) && tag(rules, c.rule_b) == "Rd")
            .unwrap()
    };
    let c = pick(&without);
    let r = composition_residual(&c, &without, DEFAULT_FUEL).unwrap();
    let mut want = ModElement::basis(ModTerm::new(vec![l(0, &x), l(1, &y)], Root::One));
    want.add_term(q(-1), ModTerm::new(vec![l(1, &w(&spec, "xy"))], Root::One));
    assert_eq!(r, Residual::Module(want));
    let c = pick(&base);
    assert!(composition_residual(&c, &base, DEFAULT_FUEL).unwrap().is_zero());
}

#[test]
fn replay_catalogue() {
    let spec = LieSpec::free_on(&["a", "b", "c"]).unwrap();
    for case in PROOF_CASES {
        let r = replay_proof(case, &spec).unwrap();
        assert!(r.chain_matches(), "{}", case);
        assert!(r.residual().is_zero(), "{}", case);
    }
    let r = replay_proof("DsxR1", &spec).unwrap();
    assert_eq!(r.instances.len(), 3);
    assert!(matches!(replay_proof("G33xR0", &spec), Err(GsbError::UnknownCase(_))));
    // alternative spellings
    assert_eq!(replay_proof("G12p×R0", &spec).unwrap().case, "G12'xR0");
}

#[test]
fn replay_g12_matches_catalogued_value() {
    let spec = LieSpec::free_on(&["a", "b", "c"]).unwrap();
    let r = replay_proof("G12xR0", &spec).unwrap();
    let [a, b, c] = r.letters.clone();
    let want = ModElement::term(q(-2), ModTerm::new(vec![l(1, &b), l(1, &c), l(1, &a)], Root::One));
    assert_eq!(r.instances[0].left, want);
    assert_eq!(r.instances[0].right, want);
}

#[test]
fn ideal_rules_orient_relations() {
    let spec = spec2();
    let (x, y, xy) = (w(&spec, "x"), w(&spec, "y"), w(&spec, "xy"));
    let last = |rs: &RuleSet| match &rs.rules().last().unwrap().body {
        RuleBody::Mod { lhs, rhs } => (lhs.clone(), rhs.clone()),
        _ => panic!("module rule expected"),
    };
    let rs = ideal_rules(&[mono(&spec, &["x", "y"])], &spec).unwrap();
    assert_eq!(last(&rs), (ModTerm::new(vec![l(1, &x), l(1, &y)], Root::One), ModElement::zero()));

    let s = &mono(&spec, &["x", "x"]) - &mono(&spec, &["y"]);
    let rs = ideal_rules(&[s], &spec).unwrap();
    assert_eq!(
        last(&rs),
        (ModTerm::new(vec![l(1, &x), l(1, &x)], Root::One), ModElement::basis(ModTerm::new(vec![l(1, &y)], Root::One)))
    );

    let s = p_bracket(&spec, &mono(&spec, &["x"]), &mono(&spec, &["y"]));
    let rs = ideal_rules(&[s], &spec).unwrap();
    assert_eq!(last(&rs), (ModTerm::new(vec![l(1, &xy)], Root::One), ModElement::zero()));

    assert_eq!(ideal_rules(&[PoissonElement::zero()], &spec).unwrap_err(), GsbError::ZeroRelation(0));
    let s = &mono(&spec, &["x"]) + &mono(&spec, &[]);
    assert_eq!(ideal_rules(&[s], &spec).unwrap_err(), GsbError::UnitInIdeal(0));
}

#[test]
fn completion_closes_a_poisson_ideal() {
    let spec = spec2();
    let rs = ideal_rules(&[mono(&spec, &["x", "y"])], &spec).unwrap();
    let bounds = Bounds { max_degree: Some(3), ..Bounds::default() };
    let rep = complete(&rs, &bounds, DEFAULT_FUEL, 20).unwrap();
    assert!(!rep.exhausted);
    assert!(rep.residuals.is_empty());
    assert!(rep.new_rule_count > 0);
    let done = &rep.rules;
    let x = mono(&spec, &["x"]);
    let xy = mono(&spec, &["x", "y"]);
    let zero = PoissonElement::zero();
    // {x, xy} = x·(xy) and x·y·y lie in the ideal, x·x does not
    let bxy = p_bracket(&spec, &x, &xy);
    assert!(p_equal_conformal(&bxy, &zero, done, DEFAULT_FUEL).unwrap());
    assert!(!p_equal_conformal(&bxy, &zero, &rs, DEFAULT_FUEL).unwrap());
    assert!(p_equal_conformal(&mono(&spec, &["x", "y", "y"]), &zero, done, DEFAULT_FUEL).unwrap());
    assert!(p_equal_conformal(&mono(&spec, &["x", "x", "y"]), &zero, done, DEFAULT_FUEL).unwrap());
    assert!(!p_equal_conformal(&mono(&spec, &["x", "x"]), &zero, done, DEFAULT_FUEL).unwrap());
    assert!(!p_equal_conformal(&mono(&spec, &["xy"]), &zero, done, DEFAULT_FUEL).unwrap());
    // {y, xy} = -y·(xy)
    let y = mono(&spec, &["y"]);
    assert!(p_equal_conformal(&p_bracket(&spec, &y, &xy), &zero, done, DEFAULT_FUEL).unwrap());
    // a degree-4 multiple still reduces through the suffix rules
    let m = p_mul(&(&x + &y), &bxy);
    assert!(p_equal_conformal(&m, &zero, done, DEFAULT_FUEL).unwrap());
}

#[test]
fn derived_rules_are_consequences() {
    // Each ∂-free derived rule of the x·y ideal decodes to a combination of
    // x·y and its degree-3 consequences.
    let spec = spec2();
    let rs = ideal_rules(&[mono(&spec, &["x", "y"])], &spec).unwrap();
    let bounds = Bounds { max_degree: Some(3), ..Bounds::default() };
    let rep = complete(&rs, &bounds, DEFAULT_FUEL, 20).unwrap();
    let x = mono(&spec, &["x"]);
    let y = mono(&spec, &["y"]);
    let xy = mono(&spec, &["x", "y"]);
    let gens = [
        xy.clone(),
        p_mul(&x, &xy),
        p_mul(&y, &xy),
        p_bracket(&spec, &x, &xy),
        p_bracket(&spec, &y, &xy),
    ];
    // oriented rules spanning the listed consequences
    let mut span = rs.clone();
    for (i, g) in gens.iter().enumerate() {
        let m = mod_reduce(&encode(g), &span, DEFAULT_FUEL).unwrap();
        if let Some((t, _)) = cgsb_core::confmod::leading(&m) {
            let lead = t.clone();
            let m = m.monic_by(&lead);
            let rhs = &ModElement::basis(lead.clone()) - &m;
            span.push(cgsb_core::rules::RewriteRule { id: format!("g{}", i), body: RuleBody::Mod { lhs: lead, rhs } });
        }
    }
    for r in rep.rules.rules().iter().skip(rs.len()) {
        if let RuleBody::Mod { lhs, rhs } = &r.body {
            let e = &ModElement::basis(lhs.clone()) - rhs;
            if e.keys().any(|t| !matches!(t.pbw_shape(), Some((_, 0)))) {
                continue;
            }
            let p = cgsb_core::poisson::decode(&e).unwrap();
            assert!(mod_reduce(&encode(&p), &span, DEFAULT_FUEL).unwrap().is_zero(), "rule {}", r.id);
        }
    }
}

#[test]
fn completion_is_deterministic_and_trivial_when_empty() {
    let spec = spec2();
    let rs = ideal_rules(&[mono(&spec, &["x", "y"])], &spec).unwrap();
    let bounds = Bounds { max_degree: Some(3), ..Bounds::default() };
    let a = complete(&rs, &bounds, DEFAULT_FUEL, 20).unwrap();
    let b = complete(&rs, &bounds, DEFAULT_FUEL, 20).unwrap();
    assert_eq!(a.rules.rules(), b.rules.rules());
    assert_eq!(a.checked, b.checked);

    let none = complete(&ideal_rules(&[], &spec).unwrap(), &Bounds { max_n: 0, ..Bounds::default() }, DEFAULT_FUEL, 5)
        .unwrap();
    assert_eq!((none.checked, none.new_rule_count, none.exhausted), (0, 0, false));
    let none = complete(&RuleSet::empty(spec.clone()), &Bounds::default(), DEFAULT_FUEL, 5).unwrap();
    assert_eq!((none.checked, none.exhausted), (0, false));
}

#[test]
fn round_limit_is_reported() {
    let spec = spec2();
    let rs = ideal_rules(&[mono(&spec, &["x", "y"])], &spec).unwrap();
    let bounds = Bounds { max_degree: Some(3), ..Bounds::default() };
    let rep = complete(&rs, &bounds, DEFAULT_FUEL, 1).unwrap();
    assert!(rep.exhausted);
    assert!(!rep.residuals.is_empty());
}
