use std::collections::BTreeMap;
use std::process::{Command, Output};

use bohm_core::{alpha_eq, normalize, parse, print, Budget, Name, Term};
use bohm_core::{verify_transformation, BohmTransformation};
use serde_json::Value;

fn bohm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    bohm(args).status.code().expect("exited normally")
}

fn stdout(args: &[&str]) -> String {
    let out = bohm(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn terms(v: &Value) -> Vec<Term> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| parse(s.as_str().unwrap()).unwrap())
        .collect()
}

// Rebuilds the transformation from a JSON report and checks it independently.
fn check_report(n1: &str, n2: &str, report: &Value) {
    assert_eq!(report["verified"], true);
    let substitutions: BTreeMap<Name, Term> = report["substitutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let y = Name::from(e["variable"].as_str().unwrap());
            (y, parse(e["nabla"].as_str().unwrap()).unwrap())
        })
        .collect();
    let bt = BohmTransformation {
        substitutions,
        applied_args: terms(&report["args"]),
        out_var_1: report["v1"].as_str().unwrap().into(),
        out_var_2: report["v2"].as_str().unwrap().into(),
        swapped: false,
    };
    let (a, b) = (parse(n1).unwrap(), parse(n2).unwrap());
    assert!(
        verify_transformation(&a, &b, &bt, Budget::DEFAULT),
        "{report}"
    );
}

#[test]
fn normalize_command() {
    let out = stdout(&["normalize", r"(\x.\y.\z. x z (y z)) (\x.\y.x) (\x.\y.x)"]);
    assert!(alpha_eq(
        &parse(out.trim()).unwrap(),
        &parse(r"\z. z").unwrap()
    ));
    assert_eq!(stdout(&["normalize", r"\x. x"]).trim(), r"\x. x");
    let theta_g = r"(\a.\f. f (a a f)) (\a.\f. f (a a f)) g";
    assert_eq!(code(&["normalize", theta_g, "--budget", "20"]), 3);
    let v = json(&["normalize", "3"]);
    assert!(alpha_eq(
        &parse(v["normal_form"].as_str().unwrap()).unwrap(),
        &parse(r"\f.\x. f (f (f x))").unwrap()
    ));
}

#[test]
fn separate_command() {
    let (k, zero) = (r"\x.\y.x", r"\x.\y.y");
    let report = json(&["separate", k, zero]);
    check_report(k, zero, &report);
    let args = report["args"].as_array().unwrap();
    assert_eq!(
        &args[args.len() - 2..],
        &[Value::from("v1"), Value::from("v2")]
    );

    let n1 = r"\t1.\t2.\t3. t1 (\u. t2) (\v. t2 t1 (\z.\s. z v)) t3";
    let n2 = r"\u.\v. u (\t. v) (\x. v u \z. z)";
    check_report(n1, n2, &json(&["separate", n1, n2]));

    let (y1, y2) = ("y1 y2 (y1 y2 y3)", "y1 y2 (y1 y3 y3)");
    let report = json(&["separate", y1, y2]);
    check_report(y1, y2, &report);
    assert_eq!(report["substitutions"].as_array().unwrap().len(), 3);
}

#[test]
fn separate_errors() {
    let out = bohm(&["separate", r"\x.x", r"\x.x"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not-separable: terms are alpha-equal"));
    let out = bohm(&["separate", r"(\x.x) y", "y"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains(r"(\x. x) y"));
    assert_eq!(code(&["separate", "x ("]), 2);
    assert_eq!(code(&["separate", "x"]), 2);
}

#[test]
fn terms_from_a_file() {
    let dir = std::env::temp_dir().join(format!("bohm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.txt");
    std::fs::write(
        &path,
        "# Church numerals\n\\x.\\y. x (x (x y))\n\n\\x.\\y. x (x y)\n",
    )
    .unwrap();
    let arg = format!("@{}", path.display());
    check_report(
        r"\x.\y. x (x (x y))",
        r"\x.\y. x (x y)",
        &json(&["separate", &arg]),
    );
    assert_eq!(code(&["separate", "@/nonexistent/bohm/terms"]), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn discriminate_command() {
    let (k, zero) = (r"\x.\y.x", r"\x.\y.y");
    for (c1, c2) in [(k, zero), ("3", "2")] {
        let v = json(&["discriminate", c1, c2]);
        assert_eq!(v["verified"], true);
        let delta = parse(v["delta"].as_str().unwrap()).unwrap();
        assert!(delta.is_closed());
        let c1 = parse_alias(c1);
        let c2 = parse_alias(c2);
        for (c, want) in [(c1, k), (c2, zero)] {
            let got = normalize(&Term::app(delta.clone(), c), Budget::DEFAULT)
                .normal()
                .unwrap();
            assert!(alpha_eq(&got, &parse(want).unwrap()), "{}", print(&got));
        }
    }
    let v = json(&["discriminate", k, zero, "--x1", "I", "--x2", "S"]);
    assert_eq!(v["verified"], true);
    assert_eq!(code(&["discriminate", k, zero, "--x1", "a"]), 6);
    assert_eq!(code(&["discriminate", r"\x.x y", r"\x.x"]), 6);
}

fn parse_alias(s: &str) -> Term {
    match s {
        "3" => parse(r"\x.\y. x (x (x y))").unwrap(),
        "2" => parse(r"\x.\y. x (x y)").unwrap(),
        _ => parse(s).unwrap(),
    }
}

#[test]
fn invert_command() {
    let v = json(&["invert", r"\x.x"]);
    let i = parse(r"\x.x").unwrap();
    assert!(alpha_eq(&parse(v["delta"].as_str().unwrap()).unwrap(), &i));
    assert!(alpha_eq(&parse(v["nabla"].as_str().unwrap()).unwrap(), &i));
    assert_eq!(v["g"], 0);

    for f in [r"\x.\y. y x", r"\x.\y. x", r"\f.\x. f (f x)"] {
        let v = json(&["invert", f]);
        assert_eq!(v["verified"], true);
        let delta = parse(v["delta"].as_str().unwrap()).unwrap();
        let nabla = parse(v["nabla"].as_str().unwrap()).unwrap();
        let t = Term::app(
            delta,
            Term::app(parse(f).unwrap(), Term::app(nabla, Term::var("z"))),
        );
        let got = normalize(&t, Budget::DEFAULT).normal().unwrap();
        assert!(alpha_eq(&got, &Term::var("z")), "{f}");
    }
    let out = bohm(&["invert", r"\y. \x. x"]);
    assert_eq!(out.status.code(), Some(7));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constant-function"));
}

#[test]
fn third_command() {
    let v = json(&["third", r"\x.x", r"\x.\y.x", r"\x.\y.y"]);
    assert_eq!(v["delta_on_first"], "equal");
    assert_eq!(v["delta_on_second"], "equal");
    assert_eq!(v["fixed_point"], true);
    assert!(parse(v["c"].as_str().unwrap()).unwrap().is_closed());
    let probe = v["probe_first"].as_str().unwrap();
    assert!(
        probe.starts_with("unknown") || probe == "distinct",
        "{probe}"
    );
    assert_eq!(code(&["third", r"\z.\x.x", "K", "0"]), 8);
}

#[test]
fn selftest_command() {
    let v = json(&["selftest", "--seed", "11", "--cases", "60"]);
    assert_eq!(v["cases"], 60);
    for key in [
        "separate_failures",
        "discriminate_failures",
        "invert_failures",
    ] {
        assert_eq!(v[key].as_array().unwrap().len(), 0, "{key}");
    }
}

#[test]
fn zero_budget_is_a_usage_error() {
    assert_eq!(code(&["normalize", "x", "--budget", "0"]), 2);
}
