"""Asymptotic Devetak-Winter key rates for the three protocols.

All rates are direct-reconciliation I(A:B) - chi(A:E) in bits. The
tomography-based rate uses the full joint state; the RFI rate uses the
twirled state rho' that Alice and Bob can pin down without a shared
reference frame; the (d+1)-basis rate uses only matched-basis error
vectors and the Bell spectrum they imply.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClippedSpectrumWarning,
    DomainError,
    InconsistentStatisticsError,
    NonuniformMarginalWarning,
    ZeroProbabilityOutcomeError,
)
from .qmath import (
    PAULI,
    bell_basis,
    conditional_bob_state,
    shannon_entropy,
    validate_density_matrix,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class KeyRateReport:
    """Per-protocol rate record; raw_rate = mutual_information - holevo."""

    protocol: str
    mutual_information: float
    holevo: float
    raw_rate: float
    clipped_rate: float


def _report(protocol: str, mi: float, chi: float, raw: float | None = None) -> KeyRateReport:
    raw = mi - chi if raw is None else raw
    return KeyRateReport(
        protocol=protocol,
        mutual_information=mi,
        holevo=chi,
        raw_rate=raw,
        clipped_rate=max(0.0, raw),
    )


def _joint_dim(rho: np.ndarray) -> int:
    d = int(round(np.sqrt(rho.shape[0])))
    if d * d != rho.shape[0]:
        raise DomainError(f"joint state dimension {rho.shape[0]} is not square")
    return d


def mutual_information_qudit(rho_ab: np.ndarray) -> float:
    """Classical I(A:B) of the computational-basis joint distribution.

    Equals log2 d + sum_ij delta_ij log2 delta_ij + H(Bob marginal) when
    Alice's marginal is uniform; a NonuniformMarginalWarning is emitted
    when it is not (the classical I(A:B) is still returned).
    """
    rho_ab = validate_density_matrix(rho_ab, name="rho_ab")
    d = _joint_dim(rho_ab)
    delta = np.clip(np.real(np.diag(rho_ab)).reshape(d, d), 0.0, None)
    delta /= delta.sum()
    p_alice = delta.sum(axis=1)
    if np.max(np.abs(p_alice - 1.0 / d)) > 1e-6:
        warnings.warn(
            "Alice's computational marginal deviates from uniform",
            NonuniformMarginalWarning,
            stacklevel=2,
        )
    return (
        shannon_entropy(p_alice)
        + shannon_entropy(delta.sum(axis=0))
        - shannon_entropy(delta.ravel())
    )


def holevo_qudit(rho_ab: np.ndarray) -> float:
    """chi(A:E) = S(rho_AB) - (1/d) sum_i S(<i|rho|i>_A normalized)."""
    rho_ab = validate_density_matrix(rho_ab, name="rho_ab")
    d = _joint_dim(rho_ab)
    total = von_neumann_entropy(rho_ab)
    for i in range(d):
        try:
            cond, _ = conditional_bob_state(rho_ab, i)
        except ZeroProbabilityOutcomeError:
            continue  # zero-probability outcome contributes nothing
        total -= von_neumann_entropy(cond) / d
    return total


def qst_rate(rho_ab: np.ndarray) -> KeyRateReport:
    """Tomography-based rate from the full joint state."""
    mi = mutual_information_qudit(rho_ab)
    chi = holevo_qudit(rho_ab)
    return _report("qst", mi, chi)


@dataclass(frozen=True)
class RfiObservables:
    """QBER Q and the frame-independent correlation sum C."""

    Q: float
    C: float

    def __post_init__(self):
        if not (-1e-9 <= self.Q <= 1.0 + 1e-9):
            raise DomainError(f"Q={self.Q!r} outside [0, 1]")
        if not (-1e-9 <= self.C <= 2.0 + 1e-9):
            raise DomainError(f"C={self.C!r} outside [0, 2]")


def rfi_observables(rho_ab: np.ndarray) -> RfiObservables:
    """Q = (1 - <ZZ>)/2 and C = <XX>^2 + <XY>^2 + <YX>^2 + <YY>^2."""
    rho_ab = validate_density_matrix(rho_ab, name="rho_ab")
    if rho_ab.shape != (4, 4):
        raise DomainError("RFI observables are defined for qubit joint states")
    zz = np.real(np.trace(np.kron(PAULI["z"], PAULI["z"]) @ rho_ab))
    c = 0.0
    for a in ("x", "y"):
        for b in ("x", "y"):
            c += np.real(np.trace(np.kron(PAULI[a], PAULI[b]) @ rho_ab)) ** 2
    return RfiObservables(Q=float((1.0 - zz) / 2.0), C=float(c))


_BELL4 = bell_basis(2)  # columns: Phi+, Phi-, Psi+, Psi-


def rfi_state(rho_ab: np.ndarray) -> np.ndarray:
    """The state rho' that the RFI observables determine.

    In the Bell basis (Phi+, Phi-, Psi+, Psi-) all coherences vanish
    except the (Phi-, Phi+) and (Psi-, Psi+) pairs, which retain only
    their imaginary parts. This is spectrum-equivalent to the
    real-coherence form obtained by a diagonal phase conjugation.
    """
    rho_ab = validate_density_matrix(rho_ab, name="rho_ab")
    if rho_ab.shape != (4, 4):
        raise DomainError("rfi_state is defined for qubit joint states")
    rb = _BELL4.conj().T @ rho_ab @ _BELL4
    out = np.diag(np.diag(rb)).astype(complex)
    out[1, 0] = 1.0j * np.imag(rb[1, 0])
    out[0, 1] = np.conj(out[1, 0])
    out[3, 2] = 1.0j * np.imag(rb[3, 2])
    out[2, 3] = np.conj(out[3, 2])
    return _BELL4 @ out @ _BELL4.conj().T


def rfi_rate(rho_ab: np.ndarray) -> KeyRateReport:
    """RFI rate r = 1 - S(rho'); the report carries I and chi of rho'."""
    rho_p = rfi_state(rho_ab)
    mi = mutual_information_qudit(rho_p)
    chi = holevo_qudit(rho_p)
    return _report("rfi", mi, chi, raw=1.0 - von_neumann_entropy(rho_p))


def bell_lambdas(q: dict, d: int) -> np.ndarray:
    """Bell spectrum lambda_jk from the d+1 matched-basis error vectors.

    lambda_jk = (1/d) (sum_s q_1s^((sj + k) mod d) + q_01^((-j) mod d) - 1),
    the index pairing under which the family labeled by U_1s contributes
    its Weyl displacement s*j + k. Small negative entries (noisy input)
    are clipped with a warning; clipping beyond 1e-3 raises.
    """
    lam = np.zeros((d, d))
    q01 = np.asarray(q[(0, 1)], dtype=float)
    for j in range(d):
        for k in range(d):
            acc = q01[(-j) % d] - 1.0
            for s in range(d):
                acc += q[(1, s)][(s * j + k) % d]
            lam[j, k] = acc / d
    worst = float(np.min(lam))
    if worst < -1e-3:
        raise InconsistentStatisticsError(
            f"Bell spectrum entry {worst:.3e} below the -1e-3 clipping bound"
        )
    if worst < 0.0:
        warnings.warn(
            f"clipped negative Bell-spectrum entries (min {worst:.3e})",
            ClippedSpectrumWarning,
            stacklevel=2,
        )
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
    return lam


def dplus1_rate(q: dict, d: int) -> KeyRateReport:
    """Conventional (d+1)-basis rate from matched-basis error vectors.

    I = log2 d - H(q_01) and chi = H(lambda) - H(q_01), so the raw rate
    collapses to log2 d - H(lambda).
    """
    lam = bell_lambdas(q, d)
    h_key = shannon_entropy(np.asarray(q[(0, 1)], dtype=float))
    h_lam = shannon_entropy(lam.ravel())
    mi = np.log2(d) - h_key
    chi = h_lam - h_key
    return _report("dplus1", float(mi), float(chi))
