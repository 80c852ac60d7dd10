//! Invariant suite for a single system.

use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Value};
use twisted_weyl::cocycle::{is_heisenberg, verify_cocycle};
use twisted_weyl::fourier::{self, PhaseFunction};
use twisted_weyl::linalg;
use twisted_weyl::symmetry;
use twisted_weyl::{random, weyl, Error, WeylSystem};

/// Largest group the suite accepts.
pub const MAX_ORDER: usize = 4096;
const REGULAR_REP_MAX_ORDER: usize = 256;
const SAMPLES: usize = 10;

pub enum Status {
    Pass,
    Fail(String),
    Skip(String),
}

pub struct Check {
    pub name: &'static str,
    pub status: Status,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail(detail()) };
        Check { name, status }
    }

    fn skip(name: &'static str, why: impl Into<String>) -> Self {
        Check {
            name,
            status: Status::Skip(why.into()),
        }
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail(_))
    }

    pub fn line(&self) -> String {
        match &self.status {
            Status::Pass => format!("PASS {}", self.name),
            Status::Fail(d) => format!("FAIL {}: {d}", self.name),
            Status::Skip(d) => format!("SKIP {}: {d}", self.name),
        }
    }

    pub fn json(&self) -> Value {
        let (status, detail) = match &self.status {
            Status::Pass => ("pass", None),
            Status::Fail(d) => ("fail", Some(d.clone())),
            Status::Skip(d) => ("skip", Some(d.clone())),
        };
        json!({ "name": self.name, "status": status, "detail": detail })
    }
}

fn random_function(sys: &WeylSystem, rng: &mut impl Rng) -> PhaseFunction {
    PhaseFunction::new(sys.spec().clone(), random::random_function(sys.order(), rng)).expect("sized to the group")
}

fn worst<F: FnMut() -> f64>(n: usize, mut f: F) -> f64 {
    (0..n).map(|_| f()).fold(0.0, f64::max)
}

pub fn run(sys: &WeylSystem, seed: u64, tol: f64) -> Vec<Check> {
    let mut rng = random::seeded(seed);
    let mut checks = Vec::new();
    let c = sys.cocycle();

    checks.push(Check::new("cocycle axioms", verify_cocycle(c), || "cocycle identity or normalization at 0 fails".into()));
    checks.push(Check::new("heisenberg multiplier", is_heisenberg(c), || "Phi is not an isomorphism".into()));

    let err = weyl::projective_rep_error(sys);
    checks.push(Check::new("projective relation", err <= 1e-12 && weyl::verify_projective_rep(sys), || {
        format!("W(x)W(y) = sigma(x,y)W(x+y) off by {err:e}")
    }));
    checks.push(Check::new("irreducible basis", weyl::verify_irreducible_basis(sys), || {
        "Weyl operators are not an orthogonal basis".into()
    }));
    match weyl::verify_exchange_relations(sys) {
        Ok(ok) => checks.push(Check::new("exchange relations", ok, || "commutation phases differ from Phi".into())),
        Err(e) => checks.push(Check::skip("exchange relations", e.to_string())),
    }
    if sys.order() <= REGULAR_REP_MAX_ORDER {
        match weyl::regular_rep_error(c) {
            Ok(e) => checks.push(Check::new("regular representation", e <= 1e-12, || format!("error {e:e}"))),
            Err(e) => checks.push(Check::skip("regular representation", e.to_string())),
        }
    } else {
        checks.push(Check::skip("regular representation", format!("group order above {REGULAR_REP_MAX_ORDER}")));
    }

    let plancherel = worst(SAMPLES, || {
        let f = random_function(sys, &mut rng);
        let g = random_function(sys, &mut rng);
        let lhs = fourier::inner(sys, &f, &g);
        let ff = fourier::twisted_fourier(sys, &f).expect("sized");
        let fg = fourier::twisted_fourier(sys, &g).expect("sized");
        (lhs - (&ff * fg.adjoint()).trace()).norm()
    });
    checks.push(Check::new("twisted plancherel", plancherel <= tol, || format!("error {plancherel:e}")));

    let round_trip = worst(SAMPLES, || {
        let rho = random::random_state(sys.dim(), &mut rng);
        let chi = fourier::char_function(sys, &rho).expect("sized");
        let back = fourier::twisted_fourier(sys, &chi).expect("sized");
        linalg::max_abs_diff(&back, &rho)
    });
    checks.push(Check::new("characteristic round trip", round_trip <= tol, || format!("error {round_trip:e}")));

    let symplectic = worst(SAMPLES, || {
        let f = random_function(sys, &mut rng);
        let back = fourier::inverse_symplectic_fourier(sys, &fourier::symplectic_fourier(sys, &f).expect("sized")).expect("sized");
        back.max_abs_diff(&f)
    });
    checks.push(Check::new("symplectic fourier inversion", symplectic <= tol, || format!("error {symplectic:e}")));

    let norm = worst(SAMPLES, || {
        let rho = random::random_state(sys.dim(), &mut rng);
        let w = fourier::wigner(sys, &rho).expect("sized");
        let dual = sys.spec().haar().dual_point_weight();
        (w.values().iter().sum::<Complex64>() * dual - Complex64::new(1.0, 0.0)).norm()
    });
    checks.push(Check::new("wigner normalization", norm <= tol, || format!("error {norm:e}")));

    if sys.is_normalized() {
        let e = worst(SAMPLES, || {
            let rho = random::random_state(sys.dim(), &mut rng);
            let a = random::random_hermitian(sys.dim(), &mut rng);
            let (q, cl) = fourier::expectation_identity(sys, &rho, &a).expect("normalized, sized");
            (q - cl).abs()
        });
        checks.push(Check::new("expectation identity", e <= tol, || format!("error {e:e}")));
    } else {
        checks.push(Check::skip("expectation identity", "requires a normalized cocycle"));
    }

    checks.push(covariance(sys, &mut rng));
    checks
}

fn covariance(sys: &WeylSystem, rng: &mut impl Rng) -> Check {
    const NAME: &str = "clifford covariance";
    let sp = match symmetry::enumerate_symplectic(sys.cocycle()) {
        Ok(sp) => sp,
        Err(Error::SearchSpaceTooLarge { size, budget }) => {
            return Check::skip(NAME, format!("symplectic search space {size} exceeds budget {budget}"));
        }
        Err(e) => return Check::skip(NAME, e.to_string()),
    };
    for _ in 0..SAMPLES {
        let s = &sp.maps[rng.random_range(0..sp.maps.len())];
        let y = sys.element(rng.random_range(0..sys.order()));
        let rho = random::random_state(sys.dim(), rng);
        match symmetry::covariance_check(sys, &rho, &y, s) {
            Ok(true) => {}
            Ok(false) => return Check::new(NAME, false, || format!("fails for y={} and S={:?}", y.label(), s.to_rows())),
            Err(e) => return Check::new(NAME, false, || e.to_string()),
        }
    }
    Check::new(NAME, true, String::new)
}
