"""Reference values computed without touching the package under test.

Everything here is plain numpy plus closed-form algebra, so the test
modules can compare pipeline output against independently evaluated
numbers. Log base 2 throughout.
"""

import numpy as np


def plg(x):
    """x * log2(x) with 0 log 0 = 0, elementwise."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    mask = x > 0.0
    out[mask] = x[mask] * np.log2(x[mask])
    return out if out.ndim else float(out)


def h2(x: float) -> float:
    return float(-plg(x) - plg(1.0 - x))


def shannon(p) -> float:
    return float(-np.sum(plg(np.asarray(p, dtype=float))))


def vn_entropy(rho) -> float:
    evals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return float(-np.sum(plg(np.clip(evals, 0.0, None))))


def classical_mi(joint) -> float:
    """I(A:B) of a joint pmf given as a 2d array, brute force."""
    joint = np.asarray(joint, dtype=float)
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    return shannon(pa) + shannon(pb) - shannon(joint.ravel())


# ---------------------------------------------------------------------------
# qubit amplitude damping, decay probability p

def ad_joint_matrix(p: float) -> np.ndarray:
    """Computational-basis joint state of a Bell pair through damping."""
    s = np.sqrt(1.0 - p)
    return 0.25 * np.array(
        [
            [2.0, 0.0, 0.0, 2.0 * s],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 2.0 * p, 0.0],
            [2.0 * s, 0.0, 0.0, 2.0 - 2.0 * p],
        ]
    )


def ad_bell_matrix(p: float) -> np.ndarray:
    """Same state in the Bell basis ordered (Phi+, Psi+, Psi-, Phi-)."""
    s = np.sqrt(1.0 - p)
    return 0.25 * np.array(
        [
            [2.0 - p + 2.0 * s, 0.0, 0.0, p],
            [0.0, p, -p, 0.0],
            [0.0, -p, p, 0.0],
            [p, 0.0, 0.0, 2.0 - p - 2.0 * s],
        ]
    )


def ad_mi(p: float) -> float:
    return h2((1.0 + p) / 2.0) - h2(p) / 2.0


def ad_qst(p: float) -> float:
    return (
        1.0
        + h2(p) / 2.0
        - h2(p / 2.0)
        - ((1.0 + p) / 2.0) * h2(1.0 / (1.0 + p))
    )


def ad_holevo(p: float) -> float:
    return ad_mi(p) - ad_qst(p)


def ad_rfi(p: float) -> float:
    s = np.sqrt(1.0 - p)
    t1 = (2.0 - p - 2.0 * s) / 4.0
    t2 = (2.0 - p + 2.0 * s) / 4.0
    return float(1.0 + (p / 2.0) * np.log2(p / 4.0) + plg(t1) + plg(t2)) if p > 0 else 1.0


# ---------------------------------------------------------------------------
# rotation and probabilistic rotation channels

def rotation_rate(a_x: float, a_y: float) -> float:
    """Both protocols on a misaligned unitary rotation."""
    return 1.0 - h2((1.0 + np.cos(a_x) * np.cos(a_y)) / 2.0)


def prob_rot_joint_entropy(alpha: float) -> float:
    return h2((1.0 - np.cos(alpha)) / 4.0)


def prob_rot_qst(alpha: float) -> float:
    c = np.cos(alpha)
    return (
        1.0
        - h2((1.0 - c) / 4.0)
        - h2((1.0 - c) / 2.0)
        + h2((1.0 + np.sqrt((1.0 + c * c) / 2.0)) / 2.0)
    )


def prob_rot_rfi(alpha: float) -> float:
    c = np.cos(alpha)
    return (1.0 + c) / 2.0 - h2((1.0 - c) / 2.0)


# ---------------------------------------------------------------------------
# polarization dependent loss

def pdl_rate(eta0: float, eta1: float) -> float:
    return h2(eta0 / (eta0 + eta1))


def random_unitary(n: int, rng) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1.0j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
