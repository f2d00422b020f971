use qroot::roots::{mth_root, root_exists, RootOptions, RootOutcome};
use qroot::verify::{random_instance, verify_root, EigenClass, Force, Profile};

fn run(classes: Vec<EigenClass>, m: usize, max_size: usize, seeds: std::ops::Range<u64>) -> Vec<String> {
    let mut failures = Vec::new();
    let profile = Profile { classes, max_size, m, force: Force::Admit };
    for seed in seeds {
        let inst = random_instance(seed, &profile).unwrap();
        match mth_root(&inst.b, &inst.h, m, &RootOptions::default()) {
            Ok(RootOutcome::Root(r)) => {
                let rep = verify_root(&r.root_quaternion(), &inst.b, &inst.h, m, 1e-8).unwrap();
                if !rep.passed {
                    failures.push(format!("seed {seed}: verify failed {rep:?}"));
                }
            }
            Ok(RootOutcome::NoRoot(d)) => failures.push(format!("seed {seed}: refused {d:?} for {:?}", inst.spec)),
            Err(e) => failures.push(format!("seed {seed}: {e} for {:?}", inst.spec)),
        }
    }
    failures
}

#[test]
fn admissible_instances_all_classes() {
    let all = vec![EigenClass::Positive, EigenClass::Nonreal, EigenClass::Negative, EigenClass::Zero];
    let mut failures = Vec::new();
    for m in 2..=4 {
        failures.extend(run(all.clone(), m, 8, 0..40));
    }
    for f in &failures {
        println!("{f}");
    }
    assert!(failures.is_empty(), "{} failures", failures.len());
}

#[test]
fn refusal_instances_are_refused() {
    for (classes, m) in [(vec![EigenClass::Negative, EigenClass::Positive], 2), (vec![EigenClass::Zero], 3)] {
        let profile = Profile { classes, max_size: 8, m, force: Force::Refuse };
        for seed in 0..20 {
            let inst = random_instance(seed, &profile).unwrap();
            assert!(!root_exists(&inst.spec, m).unwrap().exists);
            match mth_root(&inst.b, &inst.h, m, &RootOptions::default()).unwrap() {
                RootOutcome::NoRoot(d) => assert!(d.certificate.is_some()),
                RootOutcome::Root(_) => panic!("seed {seed}: root returned for refusing spec {:?}", inst.spec),
            }
        }
    }
}
