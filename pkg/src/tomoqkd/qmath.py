"""Matrix and information-theoretic primitives.

Everything here is dimension-generic for prime d: Shannon and von Neumann
entropies (base 2 throughout), Weyl operators, generalized Bell states,
mutually unbiased bases, and conditional-state extraction from a joint
state. All Bloch-vector conventions elsewhere in the package use the
coordinate order (theta_z, theta_x, theta_y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidDistributionError,
    NotPositiveSemidefiniteError,
    UnsupportedDimensionError,
    ZeroProbabilityOutcomeError,
)

AXES = ("z", "x", "y")

PAULI = {
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
}


def _xlog2(p: np.ndarray) -> np.ndarray:
    """Entry-wise p*log2(p) with the 0*log0 = 0 convention."""
    out = np.zeros_like(p, dtype=float)
    mask = p > 0.0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def shannon_entropy(p) -> float:
    """H(p) = -sum p_i log2 p_i in bits.

    Entries below -1e-9 or a total deviating from 1 by more than 1e-6
    raise InvalidDistributionError; tiny negative round-off is clipped.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size == 0 or np.min(p) < -1e-9:
        raise InvalidDistributionError(f"negative probability {np.min(p):.3e}")
    total = float(np.sum(p))
    if abs(total - 1.0) > 1e-6:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
    return float(-np.sum(_xlog2(np.clip(p, 0.0, None))))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x)."""
    x = float(x)
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise DomainError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    return float(-np.sum(_xlog2(np.array([x, 1.0 - x]))))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -sum lambda_i log2 lambda_i over the eigenvalue spectrum.

    Eigenvalues in [-1e-10, 0) are treated as round-off and clipped;
    anything lower raises NotPositiveSemidefiniteError.
    """
    evals = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    if np.min(evals) < -1e-10:
        raise NotPositiveSemidefiniteError(
            f"eigenvalue {np.min(evals):.3e} below PSD tolerance"
        )
    return float(-np.sum(_xlog2(np.clip(evals, 0.0, None))))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n**0.5) + 1))


def _require_prime(d: int) -> int:
    d = int(d)
    if not is_prime(d):
        raise UnsupportedDimensionError(f"dimension {d} is not prime")
    return d


def weyl_operator(j: int, k: int, d: int) -> np.ndarray:
    """U_jk = sum_s omega^{sk} |s+j mod d><s| with omega = exp(2 pi i / d)."""
    d = _require_prime(d)
    if not (0 <= j < d and 0 <= k < d):
        raise DomainError(f"Weyl labels ({j}, {k}) outside 0..{d - 1}")
    omega = np.exp(2.0j * np.pi / d)
    u = np.zeros((d, d), dtype=complex)
    for s in range(d):
        u[(s + j) % d, s] = omega ** (s * k)
    return u


def maximally_entangled_state(d: int) -> np.ndarray:
    """|Phi_00> = (1/sqrt d) sum_s |s, s> as a length d^2 vector."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0
    return v / np.sqrt(d)


def bell_state(j: int, k: int, d: int) -> np.ndarray:
    """|Phi_jk> = (I x U_jk)|Phi_00> = (1/sqrt d) sum_s omega^{sk} |s, s+j>."""
    u = weyl_operator(j, k, d)
    return np.kron(np.eye(d, dtype=complex), u) @ maximally_entangled_state(d)


def bell_basis(d: int) -> np.ndarray:
    """d^2 x d^2 unitary whose column j*d+k is |Phi_jk>."""
    cols = [bell_state(j, k, d) for j in range(d) for k in range(d)]
    return np.stack(cols, axis=1)


def bell_diagonalize(rho: np.ndarray, d: int) -> np.ndarray:
    """Zero out all off-diagonal elements in the generalized Bell basis."""
    b = bell_basis(d)
    diag = np.real(np.diag(b.conj().T @ np.asarray(rho, dtype=complex) @ b))
    return (b * diag) @ b.conj().T


@dataclass(frozen=True, eq=False)
class MubFamily:
    """The d+1 mutually unbiased bases of a prime dimension.

    bases[gamma] is a d x d matrix whose columns are the basis vectors;
    gamma = 0 is the computational basis (the key basis, eigenbasis of
    U_01) and gamma = k+1 is the eigenbasis of U_1k.
    """

    dim: int
    bases: tuple

    def stacked(self) -> np.ndarray:
        """All d(d+1) basis vectors as columns of one d x d(d+1) matrix."""
        return np.concatenate(self.bases, axis=1)


def mub_family(d: int) -> MubFamily:
    """Construct the full MUB set for prime d.

    For odd primes the family k+1 has vectors with components
    omega^{a s^2 + m s}/sqrt(d) where a = k * inverse(2) mod d, which is
    the quadratic (Wootters-Fields) form indexed so that each family
    diagonalizes its Weyl operator U_1k. For d = 2 the three bases are
    the Z, X and Y eigenbases.
    """
    d = _require_prime(d)
    bases = [np.eye(d, dtype=complex)]
    if d == 2:
        for k in range(2):
            b = np.array([[1.0, 1.0], [1.0j**k, -(1.0j**k)]], dtype=complex)
            bases.append(b / np.sqrt(2.0))
    else:
        omega = np.exp(2.0j * np.pi / d)
        inv2 = pow(2, -1, d)
        s = np.arange(d)
        for k in range(d):
            a = (k * inv2) % d
            # column m of the family: omega^{(a s^2 + m s) mod d} / sqrt d
            exponents = (a * s[:, None] ** 2 + s[:, None] * s[None, :]) % d
            bases.append(omega**exponents / np.sqrt(d))
    return MubFamily(dim=d, bases=tuple(bases))


def validate_density_matrix(rho: np.ndarray, *, name: str = "rho") -> np.ndarray:
    """Check Hermiticity and unit trace at 1e-10; returns the array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"{name} must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise DomainError(f"{name} is not Hermitian within 1e-10")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
        raise DomainError(f"{name} trace {np.trace(rho)!r} is not 1 within 1e-10")
    return rho


def conditional_bob_state(rho_ab: np.ndarray, i: int):
    """Extract Bob's state conditioned on Alice's computational outcome i.

    Returns (normalized d x d block, outcome probability). The block is
    <i| rho_AB |i> on Alice's side; its trace is the probability of the
    outcome.
    """
    rho_ab = np.asarray(rho_ab, dtype=complex)
    d2 = rho_ab.shape[0]
    d = int(round(np.sqrt(d2)))
    if d * d != d2:
        raise DomainError(f"joint state dimension {d2} is not a perfect square")
    if not (0 <= i < d):
        raise DomainError(f"Alice outcome {i} outside 0..{d - 1}")
    block = rho_ab[i * d : (i + 1) * d, i * d : (i + 1) * d]
    prob = float(np.real(np.trace(block)))
    if prob < 1e-12:
        raise ZeroProbabilityOutcomeError(f"outcome {i} has probability {prob:.3e}")
    return block / prob, prob


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) || a - b ||_1 for Hermitian matrices."""
    diff = np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))
