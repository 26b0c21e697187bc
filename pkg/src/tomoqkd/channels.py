"""Channel representations and the catalog of physical noise models.

A qubit channel is an affine Bloch-vector map (R, t) in the coordinate
order (theta_z, theta_x, theta_y); a qudit channel is a list of Kraus
operators. Either representation can be turned into the joint state
rho_AB = (id x E)(|Phi_00><Phi_00|) that every key-rate formula consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidChannelError,
    NotCompletelyPositiveError,
)
from .qmath import AXES, PAULI, maximally_entangled_state, weyl_operator


@dataclass(frozen=True, eq=False)
class AffineQubitChannel:
    """Bloch-vector map v -> R v + t, coordinates ordered (z, x, y)."""

    R: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "R", np.asarray(self.R, dtype=float).reshape(3, 3))
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float).reshape(3))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map given by operators A_i with sum A_i^dag A_i = I."""

    dim: int
    operators: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.operators)
        object.__setattr__(self, "operators", ops)
        total = sum(a.conj().T @ a for a in ops)
        if np.max(np.abs(total - np.eye(self.dim))) > 1e-9:
            raise InvalidChannelError("Kraus operators violate completeness")


def apply_affine(ch: AffineQubitChannel, bloch) -> np.ndarray:
    """Map a Bloch vector through the channel: R @ bloch + t."""
    v = np.asarray(bloch, dtype=float).reshape(3)
    if np.linalg.norm(v) > 1.0 + 1e-9:
        raise DomainError(f"Bloch vector norm {np.linalg.norm(v):.6f} exceeds 1")
    return ch.R @ v + ch.t


def _apply_affine_operator(ch: AffineQubitChannel, e: np.ndarray) -> np.ndarray:
    # linear extension of the affine map to arbitrary 2x2 operators:
    # E = (alpha I + m . sigma)/2 with alpha = Tr E, m_k = Tr(sigma_k E)
    alpha = np.trace(e)
    m = np.array([np.trace(PAULI[a] @ e) for a in AXES])
    m_out = ch.R @ m + alpha * ch.t
    out = alpha * np.eye(2, dtype=complex)
    for comp, axis in zip(m_out, AXES):
        out = out + comp * PAULI[axis]
    return out / 2.0


def affine_to_joint_state(ch: AffineQubitChannel) -> np.ndarray:
    """(id x E)(|Phi_00><Phi_00|) for a qubit affine channel."""
    rho = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            rho += 0.5 * np.kron(e, _apply_affine_operator(ch, e))
    rho = (rho + rho.conj().T) / 2.0
    if np.min(np.linalg.eigvalsh(rho)) < -1e-9:
        raise NotCompletelyPositiveError("affine map is not completely positive")
    return rho


def kraus_apply(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """E(rho) = sum_i A_i rho A_i^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise DomainError(f"state shape {rho.shape} does not match dim {ch.dim}")
    out = np.zeros_like(rho)
    for a in ch.operators:
        out += a @ rho @ a.conj().T
    return out


def kraus_to_joint_state(ch: KrausChannel) -> np.ndarray:
    """(id x E)(|Phi_00><Phi_00|) for a Kraus channel of any prime d."""
    d = ch.dim
    phi = maximally_entangled_state(d)
    rho = np.zeros((d * d, d * d), dtype=complex)
    eye = np.eye(d, dtype=complex)
    for a in ch.operators:
        v = np.kron(eye, a) @ phi
        rho += np.outer(v, v.conj())
    return (rho + rho.conj().T) / 2.0


def joint_state(ch) -> np.ndarray:
    """Joint state of Alice's kept half and Bob's channel output."""
    if isinstance(ch, AffineQubitChannel):
        return affine_to_joint_state(ch)
    if isinstance(ch, KrausChannel):
        return kraus_to_joint_state(ch)
    raise DomainError(f"unsupported channel type {type(ch).__name__}")


def kraus_to_affine(ch: KrausChannel) -> AffineQubitChannel:
    """Affine (R, t) form of a qubit Kraus channel.

    R_ba = Tr[sigma_b E(sigma_a)] / 2 and t_b = Tr[sigma_b E(I)] / 2 in
    the (z, x, y) ordering.
    """
    if ch.dim != 2:
        raise DomainError("affine form exists for qubit channels only")
    paulis = [PAULI[a] for a in AXES]
    r = np.zeros((3, 3))
    t = np.zeros(3)
    out_id = kraus_apply(ch, np.eye(2, dtype=complex))
    for b, sb in enumerate(paulis):
        t[b] = 0.5 * np.real(np.trace(sb @ out_id))
        for a, sa in enumerate(paulis):
            r[b, a] = 0.5 * np.real(np.trace(sb @ kraus_apply(ch, sa)))
    return AffineQubitChannel(R=r, t=t)


# --- rotation factor matrices in (z, x, y) Bloch coordinates ---


def _rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def _rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


# --- channel catalog ---


def _check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name}={value!r} outside [0, 1]")
    return value


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(dim=d, operators=(np.eye(d, dtype=complex),))


def amplitude_damping_qubit(p: float) -> AffineQubitChannel:
    """Qubit amplitude damping with decay probability p."""
    p = _check_unit_interval(p, "p")
    r = np.diag([1.0 - p, np.sqrt(1.0 - p), np.sqrt(1.0 - p)])
    return AffineQubitChannel(R=r, t=np.array([p, 0.0, 0.0]))


def amplitude_damping_qutrit(alpha: float) -> KrausChannel:
    """Qutrit amplitude damping with decay parameter alpha."""
    alpha = _check_unit_interval(alpha, "alpha")
    a0 = np.diag([1.0, np.sqrt(1.0 - alpha), 1.0 - alpha]).astype(complex)
    a1 = np.zeros((3, 3), dtype=complex)
    a1[0, 1] = np.sqrt(alpha)
    a1[1, 2] = np.sqrt(2.0 * alpha * (1.0 - alpha))
    a2 = np.zeros((3, 3), dtype=complex)
    a2[0, 2] = alpha
    return KrausChannel(dim=3, operators=(a0, a1, a2))


def depolarizing(d: int, q: float) -> KrausChannel:
    """E(rho) = (1-q) rho + q I/d realized through the Weyl operators."""
    q = _check_unit_interval(q, "q")
    ops = [np.sqrt(1.0 - q + q / d**2) * np.eye(d, dtype=complex)]
    for j in range(d):
        for k in range(d):
            if j == 0 and k == 0:
                continue
            ops.append(np.sqrt(q) / d * weyl_operator(j, k, d))
    return KrausChannel(dim=d, operators=tuple(ops))


def rotation(a_y: float, a_x: float, a_z: float) -> AffineQubitChannel:
    """Unitary rotation channel R_y(a_y) R_x(a_x) R_z(a_z)."""
    r = _rot_y(a_y) @ _rot_x(a_x) @ _rot_z(a_z)
    return AffineQubitChannel(R=r, t=np.zeros(3))


def probabilistic_rotation(alpha: float) -> AffineQubitChannel:
    """Equal mixture of a rotation by alpha about x and about y."""
    r = 0.5 * (_rot_x(alpha) + _rot_y(alpha))
    return AffineQubitChannel(R=r, t=np.zeros(3))


def averaged_drift_channel(
    a: float,
    b: float,
    g: float,
    sigma: float,
    n_samples: int = 100_000,
    *,
    seed: int,
) -> AffineQubitChannel:
    """Monte Carlo mean of R_y(g+Dg) R_x(b+Db) R_z(a+Da).

    The angle jitters are i.i.d. Normal(0, sigma^2) and model slow random
    birefringence drift around a mean rotation. The sample mean over
    n_samples draws is deterministic for a fixed seed.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be at least 1")
    if sigma == 0.0:
        return rotation(g, b, a)
    rng = np.random.default_rng(seed)
    delta = rng.normal(0.0, sigma, size=(int(n_samples), 3))
    angles = delta + np.array([a, b, g])

    def stack(template, angle):
        c, s = np.cos(angle), np.sin(angle)
        out = np.tile(np.asarray(template, dtype=float), (angle.size, 1, 1))
        return out, c, s

    rz, c, s = stack(np.eye(3), angles[:, 0])
    rz[:, 1, 1] = c
    rz[:, 1, 2] = -s
    rz[:, 2, 1] = s
    rz[:, 2, 2] = c
    rx, c, s = stack(np.eye(3), angles[:, 1])
    rx[:, 0, 0] = c
    rx[:, 0, 2] = -s
    rx[:, 2, 0] = s
    rx[:, 2, 2] = c
    ry, c, s = stack(np.eye(3), angles[:, 2])
    ry[:, 0, 0] = c
    ry[:, 0, 1] = -s
    ry[:, 1, 0] = s
    ry[:, 1, 1] = c
    mean_r = np.mean(ry @ rx @ rz, axis=0)
    return AffineQubitChannel(R=mean_r, t=np.zeros(3))


def pdl_state(eta0: float, eta1: float) -> np.ndarray:
    """Joint state after polarization dependent loss on a Bell pair.

    eta0 and eta1 are the transmittances of |0> and |1>; the surviving
    coincidences form the pure state (sqrt(eta0)|00> + sqrt(eta1)|11>),
    renormalized.
    """
    for name, eta in (("eta0", eta0), ("eta1", eta1)):
        if not (0.0 < eta <= 1.0):
            raise DomainError(f"{name}={eta!r} outside (0, 1]")
    v = np.zeros(4, dtype=complex)
    v[0] = np.sqrt(eta0)
    v[3] = np.sqrt(eta1)
    v /= np.sqrt(eta0 + eta1)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class PmdConfig:
    """Parameters of the polarization-mode-dispersion state.

    beta is the misalignment of the fibre's principal states from Alice's
    basis; R_overlap is the temporal autocorrelation R(tau_B) between the
    two polarization modes' wave packets. tau_A = 0 keeps Alice's photon
    local. eta1/eta2 and the alpha phases override the simple real
    geometry and are accepted without further physical validation.
    """

    beta: float
    R_overlap: float
    tau_A: float = 0.0
    tau_B: float = 1.0
    eta1: complex | None = None
    eta2: complex | None = None
    alpha1: float = 0.0
    alpha2: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.R_overlap <= 1.0):
            raise DomainError(f"R_overlap={self.R_overlap!r} outside [0, 1]")


def pmd_state(cfg: PmdConfig) -> np.ndarray:
    """Polarization density matrix after PMD, temporal modes traced out.

    The four branches |s_A s_B>, |s_A s_B'>, |s_A' s_B>, |s_A' s_B'>
    carry amplitudes (eta1, eta2, -eta2* e^{i a2}, eta1* e^{i a1})/sqrt 2
    and group delays +-(tau_A -+ tau_B)/2. Tracing the temporal mode
    leaves a Gram matrix of branch overlaps, interpolated from R_overlap
    by a Gaussian autocorrelation R(tau) = R_overlap^((tau/tau_B)^2).
    """
    cb, sb = np.cos(cfg.beta), np.sin(cfg.beta)
    eta1 = cb if cfg.eta1 is None else complex(cfg.eta1)
    eta2 = -sb if cfg.eta2 is None else complex(cfg.eta2)
    coeff = np.array(
        [
            eta1,
            eta2,
            -np.conj(eta2) * np.exp(1.0j * cfg.alpha2),
            np.conj(eta1) * np.exp(1.0j * cfg.alpha1),
        ],
        dtype=complex,
    ) / np.sqrt(2.0)

    s_a, s_a_p = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    s_b, s_b_p = np.array([cb, sb]), np.array([-sb, cb])
    kets = [
        np.kron(s_a, s_b),
        np.kron(s_a, s_b_p),
        np.kron(s_a_p, s_b),
        np.kron(s_a_p, s_b_p),
    ]
    delays = np.array(
        [
            (cfg.tau_A - cfg.tau_B) / 2.0,
            (cfg.tau_A + cfg.tau_B) / 2.0,
            -(cfg.tau_A + cfg.tau_B) / 2.0,
            -(cfg.tau_A - cfg.tau_B) / 2.0,
        ]
    )

    def autocorr(tau: float) -> float:
        if tau == 0.0:
            return 1.0
        if cfg.tau_B == 0.0:
            return 1.0
        return float(cfg.R_overlap ** ((tau / cfg.tau_B) ** 2))

    rho = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            overlap = autocorr(delays[i] - delays[j])
            rho += coeff[i] * np.conj(coeff[j]) * overlap * np.outer(kets[i], kets[j])
    rho = (rho + rho.conj().T) / 2.0
    return rho / np.real(np.trace(rho))


def transmittance(beta_c: float, l: float, eta_b: float) -> float:
    """Channel transmittance eta_B * 10^(-beta_c * l / 10)."""
    if beta_c < 0.0 or l < 0.0 or not (0.0 <= eta_b <= 1.0):
        raise DomainError("transmittance parameters outside domain")
    return float(eta_b * 10.0 ** (-beta_c * l / 10.0))


def random_kraus_channel(d: int, rng, n_ops: int | None = None) -> KrausChannel:
    """Haar-style random CPTP channel from a QR-orthonormalized isometry."""
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    n_ops = d * d if n_ops is None else int(n_ops)
    g = rng.normal(size=(n_ops * d, d)) + 1.0j * rng.normal(size=(n_ops * d, d))
    q, _ = np.linalg.qr(g)
    ops = tuple(q[i * d : (i + 1) * d, :] for i in range(n_ops))
    return KrausChannel(dim=d, operators=ops)
