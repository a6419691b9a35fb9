//! Named cases and their parameter overrides.

use dhmaps::cases::{
    BuildOptions, CasePackage, Example1Params, Example2Params, Example3Params, Theorem3Params,
};
use dhmaps::{Complex64, Spinor};

use crate::config::{CaseParams, RValue, C};
use crate::error::CliError;

type BuildFn = fn(&CaseParams, &BuildOptions) -> Result<(CasePackage, CaseParams), CliError>;

pub struct CaseEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Keys of the parameter file this case reads.
    pub keys: &'static [&'static str],
    build: BuildFn,
}

const THEOREM3_KEYS: &[&str] = &["big_r", "r", "m", "a", "b", "c", "d"];

pub const CASES: &[CaseEntry] = &[
    CaseEntry {
        name: "theorem3",
        summary: "cylinder S^1 x H^1 in H^3 with the two-principal-curvature spinor field",
        keys: THEOREM3_KEYS,
        build: |p, o| build_theorem3(p, o, Theorem3Params::reference(), true),
    },
    CaseEntry {
        name: "theorem3-broken-d0",
        summary: "theorem3 with d_0 doubled (negative control, conditions not checked)",
        keys: THEOREM3_KEYS,
        build: |p, o| build_theorem3(p, o, Theorem3Params::broken_d0(), false),
    },
    CaseEntry {
        name: "example1",
        summary: "flat torus in CP^2 from non-conformal harmonic data, affine twistor spinor",
        keys: &["r", "mu", "psi0", "psi1"],
        build: |p, o| build_example1(p, o, false),
    },
    CaseEntry {
        name: "example1-literal",
        summary: "example1 with amplitudes r_j instead of sqrt(r_j) (negative control)",
        keys: &["r", "mu", "psi0", "psi1"],
        build: |p, o| build_example1(p, o, true),
    },
    CaseEntry {
        name: "example2",
        summary: "Veronese-type minimal sphere phi_p: S^2 -> CP^n with round twistor spinors",
        keys: &["p", "n", "psi0", "psi1"],
        build: build_example2,
    },
    CaseEntry {
        name: "example3",
        summary: "horosphere R^n -> H^(n+1) with Psi = Psi_0 + X.Phi/(n-2)",
        keys: &["n", "phi", "psi0"],
        build: build_example3,
    },
];

pub fn lookup(name: &str) -> Result<&'static CaseEntry, CliError> {
    CASES
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CliError::UnknownCase(name.to_string()))
}

impl CaseEntry {
    /// Build the case, returning it with the effective parameters.
    pub fn build(&self, params: Option<&CaseParams>, opts: &BuildOptions) -> Result<(CasePackage, CaseParams), CliError> {
        let empty = CaseParams::default();
        let p = params.unwrap_or(&empty);
        let given = set_keys(p);
        if let Some(k) = given.iter().find(|k| !self.keys.contains(k)) {
            return Err(CliError::Config(format!("parameter `{k}` is not used by case {}", self.name)));
        }
        (self.build)(p, opts)
    }
}

fn set_keys(p: &CaseParams) -> Vec<&'static str> {
    let mut out = Vec::new();
    let mut mark = |set: bool, k| {
        if set {
            out.push(k)
        }
    };
    mark(p.big_r.is_some(), "big_r");
    mark(p.r.is_some(), "r");
    mark(p.m.is_some(), "m");
    mark(p.a.is_some(), "a");
    mark(p.b.is_some(), "b");
    mark(p.c.is_some(), "c");
    mark(p.d.is_some(), "d");
    mark(p.mu.is_some(), "mu");
    mark(p.psi0.is_some(), "psi0");
    mark(p.psi1.is_some(), "psi1");
    mark(p.phi.is_some(), "phi");
    mark(p.p.is_some(), "p");
    mark(p.n.is_some(), "n");
    out
}

fn cx(c: C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn cs(v: &[C]) -> Vec<Complex64> {
    v.iter().copied().map(cx).collect()
}

fn spinor(v: &[C]) -> Spinor {
    Spinor::new(cs(v))
}

fn back(z: Complex64) -> C {
    [z.re, z.im]
}

fn backs(v: &[Complex64]) -> Vec<C> {
    v.iter().copied().map(back).collect()
}

fn back_spinor(s: &Spinor) -> Vec<C> {
    backs(s.components())
}

fn scalar_r(p: &CaseParams) -> Result<Option<f64>, CliError> {
    match &p.r {
        None => Ok(None),
        Some(RValue::Scalar(v)) => Ok(Some(*v)),
        Some(RValue::Vector(_)) => Err(CliError::Config("`r` must be a number for this case".into())),
    }
}

/// Constructor errors name the violated condition; they are validation
/// failures rather than configuration errors.
fn validated<T>(r: dhmaps::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Validation)
}

fn build_theorem3(
    p: &CaseParams,
    opts: &BuildOptions,
    mut t: Theorem3Params,
    check: bool,
) -> Result<(CasePackage, CaseParams), CliError> {
    if let Some(v) = p.big_r {
        t.big_r = v;
    }
    if let Some(v) = scalar_r(p)? {
        t.r = v;
    }
    if let Some(v) = p.m {
        t.m = v;
    }
    if let Some(v) = p.a {
        t.a = cx(v);
    }
    if let Some(v) = p.b {
        t.b = cx(v);
    }
    if let Some(v) = &p.c {
        t.c = cs(v);
    }
    if let Some(v) = &p.d {
        t.d = cs(v);
    }
    let case = validated(if check { t.build_with(opts) } else { t.build_unchecked(opts) })?;
    let eff = CaseParams {
        big_r: Some(t.big_r),
        r: Some(RValue::Scalar(t.r)),
        m: Some(t.m),
        a: Some(back(t.a)),
        b: Some(back(t.b)),
        c: Some(backs(&t.c)),
        d: Some(backs(&t.d)),
        ..Default::default()
    };
    Ok((case, eff))
}

fn build_example1(p: &CaseParams, opts: &BuildOptions, literal: bool) -> Result<(CasePackage, CaseParams), CliError> {
    let mut e = Example1Params::reference();
    match &p.r {
        Some(RValue::Vector(v)) => e.r = v.clone(),
        Some(RValue::Scalar(_)) => return Err(CliError::Config("`r` must be an array for this case".into())),
        None => {}
    }
    if let Some(v) = &p.mu {
        e.mu = cs(v);
    }
    if let Some(v) = &p.psi0 {
        e.psi0 = spinor(v);
    }
    if let Some(v) = &p.psi1 {
        e.psi1 = spinor(v);
    }
    let case = validated(if literal { e.build_literal_amplitudes(opts) } else { e.build_with(opts) })?;
    let eff = CaseParams {
        r: Some(RValue::Vector(e.r.clone())),
        mu: Some(backs(&e.mu)),
        psi0: Some(back_spinor(&e.psi0)),
        psi1: Some(back_spinor(&e.psi1)),
        ..Default::default()
    };
    Ok((case, eff))
}

fn build_example2(p: &CaseParams, opts: &BuildOptions) -> Result<(CasePackage, CaseParams), CliError> {
    let mut e = Example2Params::reference();
    if let Some(v) = p.p {
        e.p = v;
    }
    if let Some(v) = p.n {
        e.n = v;
    }
    if let Some(v) = &p.psi0 {
        e.psi0 = spinor(v);
    }
    if let Some(v) = &p.psi1 {
        e.psi1 = spinor(v);
    }
    let case = validated(e.build_with(opts))?;
    let eff = CaseParams {
        p: Some(e.p),
        n: Some(e.n),
        psi0: Some(back_spinor(&e.psi0)),
        psi1: Some(back_spinor(&e.psi1)),
        ..Default::default()
    };
    Ok((case, eff))
}

fn build_example3(p: &CaseParams, opts: &BuildOptions) -> Result<(CasePackage, CaseParams), CliError> {
    let mut e = match p.n {
        Some(n) => validated(Example3Params::reference_in(n))?,
        None => Example3Params::reference(),
    };
    if let Some(v) = &p.phi {
        e.phi = spinor(v);
    }
    if let Some(v) = &p.psi0 {
        e.psi0 = spinor(v);
    }
    let case = validated(e.build_with(opts))?;
    let eff = CaseParams {
        n: Some(e.n),
        phi: Some(back_spinor(&e.phi)),
        psi0: Some(back_spinor(&e.psi0)),
        ..Default::default()
    };
    Ok((case, eff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_case_builds_with_defaults() {
        for c in CASES {
            let (case, eff) = c.build(None, &BuildOptions::default()).unwrap();
            assert!(!case.grid.is_empty());
            for k in set_keys(&eff) {
                assert!(c.keys.contains(&k), "{} reports {k}", c.name);
            }
        }
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(lookup("theorem3-broken-d0").unwrap().name, "theorem3-broken-d0");
        assert!(matches!(lookup("nope"), Err(CliError::UnknownCase(_))));
    }

    #[test]
    fn foreign_keys_rejected() {
        let p = CaseParams { p: Some(1), ..Default::default() };
        assert!(matches!(lookup("theorem3").unwrap().build(Some(&p), &BuildOptions::default()), Err(CliError::Config(_))));
    }

    #[test]
    fn overrides_reach_the_constructor() {
        let p = CaseParams { d: Some(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]), ..Default::default() };
        match lookup("theorem3").unwrap().build(Some(&p), &BuildOptions::default()) {
            Err(CliError::Validation(dhmaps::Error::Constraint { name, .. })) => assert!(name.contains("d_0")),
            other => panic!("{:?}", other.map(|_| ())),
        }
        let p = CaseParams { n: Some(4), ..Default::default() };
        let (case, eff) = lookup("example3").unwrap().build(Some(&p), &BuildOptions::default()).unwrap();
        assert_eq!(case.grid.dim(), 4);
        assert_eq!(eff.phi.unwrap().len(), 4);
    }
}
