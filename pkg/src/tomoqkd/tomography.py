"""Channel estimation from measurement statistics.

Two reconstruction paths live here. For qubits, the affine map (R, t) is
read off the output biases of the six eigenstate preparations. For prime
d, the joint outcome probabilities over all d+1 MUB families determine a
process matrix chi expanding the channel over MUB projectors; solving the
d^2(d+1)^2 linear equations in the least-squares sense and projecting the
induced joint state to the PSD cone reconstructs the channel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    AffineQubitChannel,
    KrausChannel,
    _apply_affine_operator,
    apply_affine,
    kraus_apply,
)
from .errors import (
    DomainError,
    InconsistentDataError,
    ReconstructionFailureError,
    ReconstructionWarning,
)
from .qmath import AXES, MubFamily, mub_family

_AXIS_VECTORS = {"z": np.array([1.0, 0.0, 0.0]),
                 "x": np.array([0.0, 1.0, 0.0]),
                 "y": np.array([0.0, 0.0, 1.0])}


@dataclass(frozen=True, eq=False)
class BiasTable:
    """Output biases Q_ab0, Q_ab1 indexed by (Alice axis a, Bob axis b)."""

    q0: np.ndarray  # shape (3, 3), axis order (z, x, y)
    q1: np.ndarray

    def __post_init__(self):
        for name in ("q0", "q1"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(3, 3)
            if np.max(np.abs(arr)) > 1.0 + 1e-9:
                raise DomainError(f"{name} entries must lie in [-1, 1]")
            object.__setattr__(self, name, arr)


def biases_from_channel(ch: AffineQubitChannel) -> BiasTable:
    """Measured output biases of the six Bloch-axis eigenstates.

    Q_ab0 is the bias toward outcome 0_b when 0_a was sent, and Q_ab1 the
    bias toward outcome 1_b when 1_a was sent, so Q_ab0 = R_ba + t_b and
    Q_ab1 = R_ba - t_b.
    """
    q0 = np.zeros((3, 3))
    q1 = np.zeros((3, 3))
    for ia, a in enumerate(AXES):
        out0 = apply_affine(ch, _AXIS_VECTORS[a])
        out1 = apply_affine(ch, -_AXIS_VECTORS[a])
        for ib, b in enumerate(AXES):
            q0[ia, ib] = out0 @ _AXIS_VECTORS[b]
            q1[ia, ib] = out1 @ -_AXIS_VECTORS[b]
    return BiasTable(q0=q0, q1=q1)


def affine_from_biases(bias: BiasTable) -> AffineQubitChannel:
    """Invert the bias relations: R_ba = (Q_ab0 + Q_ab1)/2, t_b = (Q_ab0 - Q_ab1)/2."""
    r = (bias.q0 + bias.q1).T / 2.0
    # each Alice axis yields the same t in the exact case; average for noise
    t = np.mean(bias.q0 - bias.q1, axis=0) / 2.0
    return AffineQubitChannel(R=r, t=t)


@dataclass(frozen=True, eq=False)
class JointProbabilityTable:
    """Joint outcome probabilities p[(gamma, l), (eta, s)] over MUB pairs.

    Rows index Alice's (family, outcome) lexicographically, columns Bob's.
    Each (gamma, eta) block of shape (d, d) is a joint distribution.
    """

    dim: int
    values: np.ndarray

    def __post_init__(self):
        d = self.dim
        size = d * (d + 1)
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (size, size):
            raise DomainError(f"table shape {arr.shape}, expected {(size, size)}")
        if np.min(arr) < -1e-9:
            raise DomainError(f"negative probability {np.min(arr):.3e} in table")
        sums = arr.reshape(d + 1, d, d + 1, d).sum(axis=(1, 3))
        if np.max(np.abs(sums - 1.0)) > 1e-6:
            raise DomainError("a basis-pair block does not sum to 1 within 1e-6")
        object.__setattr__(self, "values", arr)

    def block(self, gamma: int, eta: int) -> np.ndarray:
        d = self.dim
        return self.values[gamma * d : (gamma + 1) * d, eta * d : (eta + 1) * d]


def _conjugate_outcome_vectors(mub: MubFamily) -> np.ndarray:
    # Bob announces outcomes against the conjugated family vectors so the
    # identity channel correlates outcome m with outcome m in every family
    return mub.stacked().conj()


def predict_probabilities(ch: KrausChannel, mub: MubFamily | None = None) -> JointProbabilityTable:
    """Exact joint outcome probabilities of the tomography measurements.

    p[(gamma, l), (eta, s)] = (1/d) Tr[ E(conj P_l^(gamma)) conj P_s^(eta) ],
    the conjugation implementing both the steering of Alice's outcome onto
    Bob's input and Bob's conjugate outcome labeling.
    """
    if isinstance(ch, AffineQubitChannel):
        d = 2
        send = lambda rho: _apply_affine_operator(ch, rho)
    else:
        d = ch.dim
        send = lambda rho: kraus_apply(ch, rho)
    mub = mub or mub_family(d)
    alice = mub.stacked().conj()  # steered input vectors, columns
    bob = _conjugate_outcome_vectors(mub)
    size = d * (d + 1)
    values = np.zeros((size, size))
    for col in range(size):
        sigma = send(np.outer(alice[:, col], alice[:, col].conj()))
        row = np.real(np.einsum("ij,ij->j", bob.conj(), sigma @ bob))
        values[col, :] = row / d
    return JointProbabilityTable(dim=d, values=values)


def table_from_state(rho_ab: np.ndarray, mub: MubFamily | None = None) -> JointProbabilityTable:
    """Joint outcome probabilities read directly off a joint state.

    Alice projects onto the plain family vectors, Bob onto the conjugated
    ones; agrees with predict_probabilities on the state induced by any
    channel, and works for states with no channel behind them.
    """
    rho_ab = np.asarray(rho_ab, dtype=complex)
    d = int(round(np.sqrt(rho_ab.shape[0])))
    if rho_ab.shape != (d * d, d * d):
        raise DomainError(f"joint state shape {rho_ab.shape} is not (d^2, d^2)")
    mub = mub or mub_family(d)
    alice = mub.stacked()
    bob = _conjugate_outcome_vectors(mub)
    size = d * (d + 1)
    # kets[:, i, j] = alice_i (x) bob_j, evaluated for all pairs at once
    kets = np.einsum("ai,bj->abij", alice, bob).reshape(d * d, size, size)
    values = np.real(np.einsum("kij,kl,lij->ij", kets.conj(), rho_ab, kets))
    return JointProbabilityTable(dim=d, values=np.clip(values, 0.0, None))


def error_vectors(table: JointProbabilityTable) -> dict:
    """Per-family distributions of the outcome difference t = a - b mod d.

    Family gamma = 0 (computational, Weyl label (0, 1)) and families
    gamma = s + 1 (Weyl labels (1, s)) each give a length-d vector built
    from the matched-basis block, renormalized over the block.
    """
    d = table.dim
    a_idx, b_idx = np.indices((d, d))
    diff = (a_idx - b_idx) % d
    out = {}
    for gamma in range(d + 1):
        block = table.block(gamma, gamma)
        q = np.array([block[diff == t].sum() for t in range(d)])
        q /= q.sum()
        label = (0, 1) if gamma == 0 else (1, gamma - 1)
        out[label] = q
    return out


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """Hermitian chi expanding a channel over the d(d+1) MUB projectors."""

    dim: int
    chi: np.ndarray
    residual: float = 0.0
    flagged: bool = False
    mub: MubFamily = field(default=None, repr=False)

    def __post_init__(self):
        if self.mub is None:
            object.__setattr__(self, "mub", mub_family(self.dim))


def _apply_process(chi: np.ndarray, stacked: np.ndarray, rho: np.ndarray) -> np.ndarray:
    # E(rho) = sum_AB chi_AB P_A rho P_B = Psi (chi o K) Psi^dag, K = Psi^dag rho Psi
    k = stacked.conj().T @ rho @ stacked
    return stacked @ (chi * k) @ stacked.conj().T


def _process_joint_state(chi: np.ndarray, stacked: np.ndarray, d: int) -> np.ndarray:
    rho = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            rho += np.kron(e, _apply_process(chi, stacked, e))
    rho /= d
    tr = np.real(np.trace(rho))
    if abs(tr) < 1e-12:
        raise ReconstructionFailureError("reconstructed state has zero trace")
    return (rho + rho.conj().T) / (2.0 * tr)


def _psd_project_chi(chi: np.ndarray, stacked: np.ndarray, d: int) -> np.ndarray:
    """Clip the induced joint state to the PSD cone and refit chi.

    The clipped joint state is an explicit Choi operator; its scaled
    eigenvectors are Kraus operators, and expanding each of them over the
    projector frame rebuilds a chi whose induced map is exactly CP.
    """
    rho = _process_joint_state(chi, stacked, d)
    evals, evecs = np.linalg.eigh(rho)
    evals = np.clip(evals, 0.0, None)
    evals /= evals.sum()
    size = stacked.shape[1]
    frame = np.stack([np.outer(stacked[:, m], stacked[:, m].conj()).ravel() for m in range(size)], axis=1)
    chi_psd = np.zeros((size, size), dtype=complex)
    for mu, w in zip(evals, evecs.T):
        if mu <= 1e-15:
            continue
        kraus = np.sqrt(d * mu) * w.reshape(d, d).T
        coeff, *_ = np.linalg.lstsq(frame, kraus.ravel(), rcond=None)
        chi_psd += np.outer(coeff, coeff.conj())
    return (chi_psd + chi_psd.conj().T) / 2.0


def solve_process_matrix(
    table: JointProbabilityTable,
    *,
    strict: bool = True,
    residual_threshold: float = 1e-4,
) -> ProcessMatrix:
    """Least-squares solve of the d^2(d+1)^2 probability equations.

    The Hermitian chi is parametrized by its real diagonal and the real
    and imaginary parts of the upper triangle. Each table entry gives one
    equation whose coefficient matrix is rank one in the projector frame.
    After the solve the induced joint state is projected to the PSD cone
    and chi is refit from it.

    With strict=True (noiseless contract) a residual above
    residual_threshold raises InconsistentDataError; otherwise it only
    sets the flagged attribute and emits ReconstructionWarning.
    """
    d = table.dim
    mub = mub_family(d)
    stacked = mub.stacked()
    size = d * (d + 1)
    # w[A, x] = <psi_A | conj psi_x>; the equation for table entry (x, y)
    # has rank-one coefficients outer(z, z*)/d with z = w[:, x] * conj(w[:, y])
    w = stacked.conj().T @ stacked.conj()
    iu = np.triu_indices(size, 1)
    n_offdiag = iu[0].size
    n_unknowns = size + 2 * n_offdiag
    coeffs = np.zeros((size * size, n_unknowns))
    rhs = np.zeros(size * size)
    row = 0
    for x in range(size):
        zx = w[:, x]
        for y in range(size):
            z = zx * np.conj(w[:, y])
            c = np.outer(z, z.conj()) / d
            coeffs[row, :size] = np.real(np.diag(c))
            coeffs[row, size : size + n_offdiag] = 2.0 * np.real(c[iu])
            coeffs[row, size + n_offdiag :] = -2.0 * np.imag(c[iu])
            rhs[row] = table.values[x, y]
            row += 1
    solution, *_ = np.linalg.lstsq(coeffs, rhs, rcond=None)
    residual = float(np.linalg.norm(coeffs @ solution - rhs))

    chi = np.zeros((size, size), dtype=complex)
    chi[np.diag_indices(size)] = solution[:size]
    chi[iu] = solution[size : size + n_offdiag] + 1.0j * solution[size + n_offdiag :]
    chi = chi + np.triu(chi, 1).conj().T

    if residual > residual_threshold:
        if strict:
            raise InconsistentDataError(
                f"solver residual {residual:.3e} exceeds {residual_threshold:.1e}"
            )
        warnings.warn(
            f"solver residual {residual:.3e} exceeds {residual_threshold:.1e}",
            ReconstructionWarning,
            stacklevel=2,
        )
    chi = _psd_project_chi(chi, stacked, d)
    return ProcessMatrix(
        dim=d,
        chi=chi,
        residual=residual,
        flagged=residual > residual_threshold,
        mub=mub,
    )


def process_apply(pm: ProcessMatrix, rho: np.ndarray) -> np.ndarray:
    """Apply the reconstructed channel to a d x d state."""
    return _apply_process(pm.chi, pm.mub.stacked(), np.asarray(rho, dtype=complex))


def process_to_joint_state(pm: ProcessMatrix) -> np.ndarray:
    """Joint state (id x E_chi)(|Phi_00><Phi_00|), normalized to unit trace."""
    rho = _process_joint_state(pm.chi, pm.mub.stacked(), pm.dim)
    evals = np.linalg.eigvalsh(rho)
    if np.min(evals) < -1e-6:
        raise ReconstructionFailureError(
            f"reconstructed joint state eigenvalue {np.min(evals):.3e}"
        )
    return rho
