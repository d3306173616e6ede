use std::f64::consts::FRAC_1_SQRT_2;

use causal_game::fock::{
    apply_beamsplitter, cnot_basis_phase, cnot_feedback_zero_time, cnot_open_loop,
    dual_rail_distribution, mode_selective_mirror, DualRailQubit, FockState,
    SingleModeMixedState, CONTROL_RAILS, OUTPUT_RAILS,
};
use num_complex::Complex64;

const TOL: f64 = 1e-12;

pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

fn check(name: impl Into<String>, passed: bool) -> CheckResult {
    CheckResult { name: name.into(), passed }
}

fn mirror(eta: f64) -> bool {
    let (Ok(sim), Ok(closed)) =
        (mode_selective_mirror(eta, true), SingleModeMixedState::closed_form(eta))
    else {
        return false;
    };
    sim.max_deviation(&closed) <= TOL
}

fn beamsplitter_involution() -> bool {
    let amps = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let Ok(s) = FockState::single_photon(&["i", "j"], 2, &amps) else {
        return false;
    };
    let Ok(twice) = apply_beamsplitter(&s, "i", "j").and_then(|t| apply_beamsplitter(&t, "i", "j"))
    else {
        return false;
    };
    let same = s.terms().all(|(occ, a)| (twice.amplitude(occ) - a).norm() <= TOL);
    same
}

fn cnot_basis(control: bool, target: bool) -> bool {
    let Ok(out) = cnot_open_loop(&DualRailQubit::basis(control), &DualRailQubit::basis(target))
    else {
        return false;
    };
    let Ok(p) = dual_rail_distribution(&out, CONTROL_RAILS, OUTPUT_RAILS) else {
        return false;
    };
    let flipped = control ^ target;
    let occ = [u8::from(!control), u8::from(control), u8::from(!flipped), u8::from(flipped)];
    (p[control as usize][flipped as usize] - 1.0).abs() <= TOL
        && (out.amplitude(&occ) - cnot_basis_phase(control, target)).norm() <= TOL
}

fn cnot_bell() -> bool {
    let Ok(plus) = DualRailQubit::from_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2) else {
        return false;
    };
    let Ok(out) = cnot_open_loop(&plus, &DualRailQubit::zero()) else {
        return false;
    };
    let Ok(p) = dual_rail_distribution(&out, CONTROL_RAILS, OUTPUT_RAILS) else {
        return false;
    };
    (p[0][0] - 0.5).abs() <= TOL && (p[1][1] - 0.5).abs() <= TOL && p[0][1] + p[1][0] <= TOL
}

fn feedback(alpha: f64, beta: f64) -> bool {
    let Ok(q) = DualRailQubit::from_real(alpha, beta) else {
        return false;
    };
    cnot_feedback_zero_time(&q).is_ok_and(|got| got == (q.alpha.norm_sqr(), q.beta.norm_sqr()))
}

pub fn run_checks() -> Vec<CheckResult> {
    let mut out = Vec::new();
    for eta in [0.0, 0.25, 0.6, 1.0] {
        out.push(check(format!("mirror eta={eta}: partial trace = diag(1-eta, eta)"), mirror(eta)));
    }
    out.push(check(
        "mirror without photon leaves vacuum",
        mode_selective_mirror(0.6, false).is_ok_and(|s| s.eta == 0.0),
    ));
    out.push(check("beamsplitter applied twice is the identity", beamsplitter_involution()));
    for control in [false, true] {
        for target in [false, true] {
            out.push(check(
                format!(
                    "cnot |{}{}> -> |{}{}>",
                    control as u8,
                    target as u8,
                    control as u8,
                    (control ^ target) as u8
                ),
                cnot_basis(control, target),
            ));
        }
    }
    out.push(check("cnot |+0> gives Bell correlations", cnot_bell()));
    for (a, b, label) in
        [(1.0, 0.0, "|0>"), (0.0, 1.0, "|1>"), (FRAC_1_SQRT_2, FRAC_1_SQRT_2, "|+>")]
    {
        out.push(check(format!("zero-time feedback on {label} is the identity"), feedback(a, b)));
    }
    out
}
