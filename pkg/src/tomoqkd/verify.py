"""Property suites: closed forms, MUB structure, round trips, inequalities.

Each suite returns a list of named checks with a pass flag and a detail
string, so the command line can print one line per check and emit a
machine-readable summary. The closed-form expressions here are the
analytic benchmarks the numerical pipeline is measured against.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .channels import (
    amplitude_damping_qubit,
    depolarizing,
    identity_channel,
    joint_state,
    kraus_to_affine,
    kraus_to_joint_state,
    probabilistic_rotation,
    random_kraus_channel,
    rotation,
)
from .keyrate import dplus1_rate, holevo_qudit, qst_rate, rfi_rate
from .qmath import (
    bell_diagonalize,
    binary_entropy,
    mub_family,
    trace_distance,
    weyl_operator,
)
from .tomography import (
    affine_from_biases,
    biases_from_channel,
    error_vectors,
    predict_probabilities,
    process_to_joint_state,
    solve_process_matrix,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _plg(x: float) -> float:
    return 0.0 if x <= 0.0 else x * np.log2(x)


def ad_qst_closed_form(p: float) -> float:
    """Tomography rate of the qubit amplitude damping channel."""
    h = binary_entropy
    return 1.0 + 0.5 * h(p) - h(p / 2.0) - ((1.0 + p) / 2.0) * h(1.0 / (1.0 + p))


def ad_mutual_information_closed_form(p: float) -> float:
    return 0.5 + binary_entropy((1.0 + p) / 2.0) + _plg(p / 2.0) + _plg((1.0 - p) / 2.0)


def ad_holevo_closed_form(p: float) -> float:
    return binary_entropy(p / 2.0) - 0.5 * binary_entropy(p)


def ad_rfi_closed_form(p: float) -> float:
    """RFI rate of the qubit amplitude damping channel."""
    root = np.sqrt(1.0 - p)
    t1 = (2.0 - p - 2.0 * root) / 4.0
    t2 = (2.0 - p + 2.0 * root) / 4.0
    return 1.0 + (p / 2.0) * np.log2(p / 4.0) + _plg(t1) + _plg(t2) if p > 0.0 else 1.0


def rotation_closed_form(a_x: float, a_y: float) -> float:
    """Shared rate of both protocols for a fixed rotation misalignment."""
    return 1.0 - binary_entropy((1.0 + np.cos(a_x) * np.cos(a_y)) / 2.0)


def prob_rotation_joint_entropy_closed_form(alpha: float) -> float:
    return binary_entropy((1.0 - np.cos(alpha)) / 4.0)


def prob_rotation_qst_closed_form(alpha: float) -> float:
    c = np.cos(alpha)
    h = binary_entropy
    return 1.0 - h((1.0 - c) / 4.0) - h((1.0 - c) / 2.0) + h((1.0 + np.sqrt((1.0 + c * c) / 2.0)) / 2.0)


def prob_rotation_rfi_closed_form(alpha: float) -> float:
    c = np.cos(alpha)
    return (1.0 + c) / 2.0 - binary_entropy((1.0 - c) / 2.0)


def conditional_info_gap(x: float, r_zz: float) -> float:
    """f(x) = h((1+x)/2) - h((1-Rzz+x)/2)/2 - h((1+Rzz+x)/2)/2.

    f(t_z) is I(A:B) of a Z-translated qubit state; its minimum over the
    admissible x sits at x = 0, which is what makes the twirled state the
    least informative one compatible with the observables.
    """
    h = binary_entropy
    return h((1.0 + x) / 2.0) - 0.5 * h((1.0 - r_zz + x) / 2.0) - 0.5 * h((1.0 + r_zz + x) / 2.0)


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def suite_closed_forms(seed: int = 0) -> list[CheckResult]:
    checks = []
    tol = 1e-9

    ps = np.linspace(0.0, 0.9, 19)
    worst = 0.0
    for p in ps:
        rho = joint_state(amplitude_damping_qubit(p))
        worst = max(worst, abs(qst_rate(rho).raw_rate - ad_qst_closed_form(p)))
        worst = max(worst, abs(rfi_rate(rho).raw_rate - ad_rfi_closed_form(p)))
    checks.append(_check("amplitude-damping-closed-forms", worst < tol,
                         f"max |pipeline - formula| = {worst:.2e} over {ps.size} damping values"))

    worst = 0.0
    angles = np.linspace(0.0, np.pi, 8)
    for ax in angles:
        for ay in angles:
            rho = joint_state(rotation(ay, ax, 0.3))
            target = rotation_closed_form(ax, ay)
            worst = max(worst, abs(qst_rate(rho).raw_rate - target))
            worst = max(worst, abs(rfi_rate(rho).raw_rate - target))
            worst = max(worst, abs(holevo_qudit(rho)))
    checks.append(_check("rotation-closed-form", worst < tol,
                         f"max deviation {worst:.2e} on an 8x8 angle grid, Holevo included"))

    worst = 0.0
    for alpha in np.linspace(0.05, np.pi - 0.05, 15):
        rho = joint_state(probabilistic_rotation(alpha))
        worst = max(worst, abs(qst_rate(rho).raw_rate - prob_rotation_qst_closed_form(alpha)))
        worst = max(worst, abs(rfi_rate(rho).raw_rate - prob_rotation_rfi_closed_form(alpha)))
    checks.append(_check("probabilistic-rotation-closed-form", worst < tol,
                         f"max deviation {worst:.2e} over 15 angles"))

    rho3 = joint_state(identity_channel(3))
    dev = abs(qst_rate(rho3).raw_rate - np.log2(3.0))
    q = error_vectors(predict_probabilities(depolarizing(3, 0.0)))
    dev = max(dev, abs(dplus1_rate(q, 3).raw_rate - np.log2(3.0)))
    checks.append(_check("noiseless-qutrit-rate", dev < tol,
                         f"identity and zero-noise depolarizing reach log2(3) within {dev:.2e}"))
    return checks


def suite_mub(seed: int = 0) -> list[CheckResult]:
    checks = []
    for d in (2, 3, 5, 7):
        fam = mub_family(d)
        ortho = max(
            float(np.max(np.abs(b.conj().T @ b - np.eye(d)))) for b in fam.bases
        )
        unbiased = 0.0
        for g in range(d + 1):
            for e in range(g + 1, d + 1):
                overlaps = np.abs(fam.bases[g].conj().T @ fam.bases[e]) ** 2
                unbiased = max(unbiased, float(np.max(np.abs(overlaps - 1.0 / d))))
        diag = 0.0
        for k in range(d):
            b = fam.bases[k + 1]
            m = b.conj().T @ weyl_operator(1, k, d) @ b
            diag = max(diag, float(np.max(np.abs(m - np.diag(np.diag(m))))))
        ok = ortho < 1e-12 and unbiased < 1e-12 and diag < 1e-12
        checks.append(_check(f"mub-structure-d{d}", ok,
                             f"orthonormality {ortho:.1e}, unbiasedness {unbiased:.1e}, "
                             f"Weyl diagonalization {diag:.1e}"))

    for d in (2, 3):
        table = predict_probabilities(identity_channel(d))
        dev = 0.0
        for g in range(d + 1):
            for e in range(d + 1):
                block = table.block(g, e)
                target = np.eye(d) / d if g == e else np.full((d, d), 1.0 / d**2)
                dev = max(dev, float(np.max(np.abs(block - target))))
        checks.append(_check(f"identity-table-anchors-d{d}", dev < 1e-12,
                             f"matched 1/d and crossed 1/d^2 within {dev:.1e}"))
    return checks


def suite_roundtrip(seed: int = 42) -> list[CheckResult]:
    checks = []
    rng = np.random.default_rng(seed)
    for d in (2, 3, 5):
        worst_td = 0.0
        worst_res = 0.0
        for idx in range(5):
            ch = random_kraus_channel(d, rng)
            table = predict_probabilities(ch)
            pm = solve_process_matrix(table)
            td = trace_distance(process_to_joint_state(pm), kraus_to_joint_state(ch))
            worst_td = max(worst_td, td)
            worst_res = max(worst_res, pm.residual)
            if td >= 1e-8:
                checks.append(_check(f"tomography-roundtrip-d{d}", False,
                                     f"channel {idx} (seed {seed}): trace distance {td:.2e}"))
                break
        else:
            checks.append(_check(f"tomography-roundtrip-d{d}", True,
                                 f"5 channels, max trace distance {worst_td:.2e}, "
                                 f"max residual {worst_res:.2e}"))

    worst = 0.0
    for _ in range(20):
        ch = random_kraus_channel(2, rng)
        aff = affine_from_biases(biases_from_channel(kraus_to_affine(ch)))
        worst = max(worst, trace_distance(joint_state(aff), kraus_to_joint_state(ch)))
    checks.append(_check("affine-bias-roundtrip", worst < 1e-10,
                         f"20 qubit channels, max trace distance {worst:.2e}"))
    return checks


def suite_inequalities(seed: int = 42, n_qubit: int = 1000, n_qudit: int = 200) -> list[CheckResult]:
    checks = []
    tol = 1e-9
    rng = np.random.default_rng(seed)

    margin = np.inf
    where = -1
    for idx in range(n_qubit):
        rho = kraus_to_joint_state(random_kraus_channel(2, rng))
        m = qst_rate(rho).raw_rate - rfi_rate(rho).raw_rate
        if m < margin:
            margin, where = m, idx
    checks.append(_check("qubit-protocol-ordering", margin > -tol,
                         f"min(tomography - rfi) = {margin:.3e} over {n_qubit} channels "
                         f"(seed {seed}, worst index {where})"))

    rate_margin = np.inf
    chi_margin = np.inf
    where_rate = where_chi = -1
    for idx in range(n_qudit):
        ch = random_kraus_channel(3, rng)
        rho = kraus_to_joint_state(ch)
        q = error_vectors(predict_probabilities(ch))
        m = qst_rate(rho).raw_rate - dplus1_rate(q, 3).raw_rate
        c = holevo_qudit(bell_diagonalize(rho, 3)) - holevo_qudit(rho)
        if m < rate_margin:
            rate_margin, where_rate = m, idx
        if c < chi_margin:
            chi_margin, where_chi = c, idx
    checks.append(_check("qudit-rate-ordering", rate_margin > -tol,
                         f"min(tomography - (d+1)-basis) = {rate_margin:.3e} over "
                         f"{n_qudit} qutrit channels (seed {seed}, worst index {where_rate})"))
    checks.append(_check("holevo-bell-diagonal-ordering", chi_margin > -tol,
                         f"min(chi_diag - chi) = {chi_margin:.3e} over {n_qudit} "
                         f"qutrit channels (seed {seed}, worst index {where_chi})"))

    conv_margin = np.inf
    where_conv = (-1, 0.0)
    for idx in range(n_qudit):
        d = 2 if idx % 2 == 0 else 3
        rho1 = kraus_to_joint_state(random_kraus_channel(d, rng))
        rho2 = kraus_to_joint_state(random_kraus_channel(d, rng))
        chi1, chi2 = holevo_qudit(rho1), holevo_qudit(rho2)
        for lam in (0.25, 0.5, 0.75):
            mixed = holevo_qudit(lam * rho1 + (1.0 - lam) * rho2)
            m = mixed - (lam * chi1 + (1.0 - lam) * chi2)
            if m < conv_margin:
                conv_margin, where_conv = m, (idx, lam)
    checks.append(_check("eve-ambiguity-convexity", conv_margin > -tol,
                         f"min(chi_mixed - mixture of chi) = {conv_margin:.3e} over "
                         f"{n_qudit} channel pairs (seed {seed}, worst {where_conv})"))

    worst_arg = 0.0
    ok = True
    for r_zz in np.linspace(0.1, 0.9, 9):
        xs = np.linspace(-(1.0 - r_zz), 1.0 - r_zz, 201)
        vals = np.array([conditional_info_gap(x, r_zz) for x in xs])
        x_min = xs[int(np.argmin(vals))]
        if abs(x_min) > 1e-12:
            ok = False
            worst_arg = max(worst_arg, abs(x_min))
    checks.append(_check("info-gap-minimum-at-zero", ok,
                         "grid minimum of f(x) sits at x = 0 for all sampled correlations"
                         if ok else f"minimum displaced by {worst_arg:.2e}"))
    return checks


SUITES = {
    "closed-forms": suite_closed_forms,
    "mub": suite_mub,
    "roundtrip": suite_roundtrip,
    "inequalities": suite_inequalities,
}


def run_suite(name: str, seed: int = 42) -> tuple[list[CheckResult], dict]:
    """Run one named suite; returns the checks and a summary dict."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    checks = SUITES[name](seed)
    summary = {
        "suite": name,
        "seed": seed,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
    return checks, summary
