"""Plain-text file formats: probability tables, sweep results, fixtures.

Every writer emits locale-independent decimal text with 12 significant
digits and Unix newlines, so identical inputs produce identical bytes on
any platform. Probability tables carry a small key=value header line so
the dimension and normalization convention travel with the data.
"""

from __future__ import annotations

import logging
import re

import numpy as np

from .errors import DomainError, TableParseError
from .tomography import JointProbabilityTable, predict_probabilities, table_from_state

log = logging.getLogger(__name__)

BLOCK_NORMALIZED = "block-normalized-joint"
ROW_CONDITIONAL = "row-conditional"


def fmt12(x: float) -> str:
    """12-significant-digit shortest decimal form."""
    return f"{float(x):.12g}"


def write_probability_table(
    table: JointProbabilityTable, path, convention: str = BLOCK_NORMALIZED
) -> None:
    lines = [f"# dim={table.dim} convention={convention}"]
    values = table.values
    if convention == ROW_CONDITIONAL:
        values = values * table.dim
    for row in values:
        lines.append(",".join(fmt12(v) for v in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_header(line: str, path) -> dict:
    if not line.startswith("#"):
        raise TableParseError(f"{path}: missing header line")
    fields = dict(re.findall(r"(\w+)=([\w\-\.]+)", line))
    if "dim" not in fields:
        raise TableParseError(f"{path}: header does not declare dim")
    return fields


def read_probability_table(path, convention: str | None = None) -> JointProbabilityTable:
    """Parse and validate a probability-table file.

    Experimental tables are only approximately normalized, so each basis
    block is renormalized to exactly 1 and the largest correction is
    logged. Entries below -1e-6 are a hard parse failure. The convention
    argument overrides the header tag ("block-normalized-joint" treats
    entries as joint probabilities, "row-conditional" as p(b | a) rows).
    """
    with open(path) as fh:
        raw_lines = [ln.strip() for ln in fh if ln.strip()]
    if not raw_lines:
        raise TableParseError(f"{path}: empty file")
    header = _parse_header(raw_lines[0], path)
    try:
        d = int(header["dim"])
    except ValueError as exc:
        raise TableParseError(f"{path}: bad dim {header['dim']!r}") from exc
    convention = convention or header.get("convention", BLOCK_NORMALIZED)
    if convention not in (BLOCK_NORMALIZED, ROW_CONDITIONAL):
        raise TableParseError(f"{path}: unknown convention {convention!r}")

    size = d * (d + 1)
    body = raw_lines[1:]
    if len(body) != size:
        raise TableParseError(f"{path}: expected {size} data rows, found {len(body)}")
    values = np.zeros((size, size))
    for i, line in enumerate(body):
        parts = line.split(",")
        if len(parts) != size:
            raise TableParseError(
                f"{path}: row {i + 1} has {len(parts)} entries, expected {size}"
            )
        for j, token in enumerate(parts):
            try:
                values[i, j] = float(token)
            except ValueError as exc:
                raise TableParseError(
                    f"{path}: row {i + 1} column {j + 1}: bad number {token!r}"
                ) from exc
    if np.min(values) < -1e-6:
        i, j = np.unravel_index(np.argmin(values), values.shape)
        raise TableParseError(
            f"{path}: row {i + 1} column {j + 1}: negative probability {values[i, j]:.3e}"
        )
    values = np.clip(values, 0.0, None)
    if convention == ROW_CONDITIONAL:
        values = values / d

    blocks = values.reshape(d + 1, d, d + 1, d)
    sums = blocks.sum(axis=(1, 3))
    if np.any(sums <= 0.0):
        raise TableParseError(f"{path}: a basis-pair block sums to zero")
    correction = float(np.max(np.abs(sums - 1.0)))
    if correction > 1e-3:
        raise TableParseError(
            f"{path}: block normalization off by {correction:.3e}, beyond 1e-3"
        )
    if correction > 0.0:
        log.info("renormalized %s: largest block correction %.3e", path, correction)
    values = (blocks / sums[:, None, :, None]).reshape(size, size)
    return JointProbabilityTable(dim=d, values=values)


def write_fixture(channel, noise: float, seed: int, path) -> JointProbabilityTable:
    """Write the predicted table of a channel, optionally with sampling noise.

    channel may also be a joint density matrix for sources that are
    states rather than maps. Multiplicative noise (1 + noise * N(0,1))
    per entry, clipped at zero and block-renormalized, stands in for
    finite-statistics fluctuations. Deterministic for a fixed seed; the
    written table is returned.
    """
    if isinstance(channel, np.ndarray):
        table = table_from_state(channel)
    else:
        table = predict_probabilities(channel)
    values = table.values
    if noise < 0.0:
        raise DomainError(f"noise={noise!r} must be nonnegative")
    if noise > 0.0:
        rng = np.random.default_rng(seed)
        values = values * (1.0 + noise * rng.normal(size=values.shape))
        values = np.clip(values, 0.0, None)
        d = table.dim
        blocks = values.reshape(d + 1, d, d + 1, d)
        values = (blocks / blocks.sum(axis=(1, 3))[:, None, :, None]).reshape(
            values.shape
        )
        table = JointProbabilityTable(dim=table.dim, values=values)
    write_probability_table(table, path)
    return table


def format_sweep(rows, *, channel: str, parameter: str, protocols) -> list[str]:
    """CSV lines for sweep results, one row per parameter value.

    rows is a sequence of (parameter value, {protocol: KeyRateReport})
    pairs; they are emitted in increasing parameter order with the four
    rate fields per protocol.
    """
    protocols = list(protocols)
    header = [parameter]
    for proto in protocols:
        header += [
            f"{proto}_mutual_information",
            f"{proto}_holevo",
            f"{proto}_raw_rate",
            f"{proto}_clipped_rate",
        ]
    lines = [
        f"# channel={channel} parameter={parameter} protocols={','.join(protocols)}",
        ",".join(header),
    ]
    for value, reports in sorted(rows, key=lambda item: item[0]):
        cells = [fmt12(value)]
        for proto in protocols:
            rep = reports[proto]
            cells += [
                fmt12(rep.mutual_information),
                fmt12(rep.holevo),
                fmt12(rep.raw_rate),
                fmt12(rep.clipped_rate),
            ]
            if not all(np.isfinite(float(c)) for c in cells[1:]):
                raise DomainError(f"non-finite rate at {parameter}={value!r}")
        lines.append(",".join(cells))
    return lines


def write_sweep(rows, path, *, channel: str, parameter: str, protocols) -> None:
    lines = format_sweep(rows, channel=channel, parameter=parameter, protocols=protocols)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sweep(path):
    """Read back a sweep CSV as (header list, float array)."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(tok) for tok in ln.split(",")] for ln in lines[1:]])
    return header, data


def write_complex_matrix(path, matrix: np.ndarray, kind: str) -> None:
    """CSV form of a complex matrix: alternating re,im cell pairs."""
    matrix = np.asarray(matrix, dtype=complex)
    lines = [f"# rows={matrix.shape[0]} cols={matrix.shape[1]} kind={kind}"]
    for row in matrix:
        cells = []
        for z in row:
            cells += [fmt12(z.real), fmt12(z.imag)]
        lines.append(",".join(cells))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
