"""Experiment configuration: JSON schema, validation, model construction.

A config fully determines one experiment: the code, the Hamiltonian, the
initial state, the protocol variant, and the (tau, M, epsilon) grids.
Complex numbers are written as [re, im] pairs; plain numbers are accepted
as reals.  Grid fields accept either a scalar or a list.  epsilon entries
may be the string "inf" for the projective limit.

Schema (JSON object keys):

    generators     required  list of Pauli strings, e.g. ["ZZI", "IZZ"]
    bath_dim       required  positive integer
    terms          required  list of {"system": str, "bath": matrix,
                             "profile": optional list of
                             {"t0": num, "t1": num, "scale": num}}
    tau_grid       required  positive number or nonempty list (alias "tau")
    M_grid         required  positive integer or nonempty list (alias "M")
    epsilon_grid   required  positive number / "inf" or nonempty list
                             (alias "epsilon")
    protocol       optional  "group" (default) or "generators"
    logical_state  optional  length-2^k vector, default [1, 0, ...]
    bath_state     optional  bath_dim x bath_dim density matrix,
                             default maximally mixed
    tolerance      optional  bound-comparison slack, default 1e-9
    out_dir        optional  output directory for reports
    seed           optional  integer recorded in reports
"""

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import pauli_algebra as pa
from .dynamics import initial_joint_state
from .errors import ConfigError, ZenoBenchError
from .stabilizer import (
    HamiltonianSpec,
    HamiltonianTerm,
    ProfileSegment,
    build_code,
)

DEFAULT_BOUND_TOLERANCE = 1e-9

_KNOWN_KEYS = {
    "generators",
    "bath_dim",
    "terms",
    "tau",
    "tau_grid",
    "M",
    "M_grid",
    "epsilon",
    "epsilon_grid",
    "protocol",
    "logical_state",
    "bath_state",
    "tolerance",
    "out_dir",
    "seed",
}


def _complex_entry(value, path):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in value
        )
    ):
        return complex(value[0], value[1])
    raise ConfigError(path, f"expected a number or [re, im] pair, got {value!r}")


def _complex_matrix(value, path):
    if not isinstance(value, list) or not value:
        raise ConfigError(path, "expected a nonempty list of matrix rows")
    rows = []
    width = None
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise ConfigError(f"{path}[{i}]", "expected a nonempty row list")
        entries = [
            _complex_entry(entry, f"{path}[{i}][{j}]")
            for j, entry in enumerate(row)
        ]
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise ConfigError(
                f"{path}[{i}]", f"row length {len(entries)} != {width}"
            )
        rows.append(entries)
    return np.array(rows, dtype=complex)


def _complex_vector(value, path):
    if not isinstance(value, list) or not value:
        raise ConfigError(path, "expected a nonempty list")
    return np.array(
        [_complex_entry(v, f"{path}[{i}]") for i, v in enumerate(value)],
        dtype=complex,
    )


def _positive_number(value, path, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(path, f"expected a finite number, got {value!r}")
    if v < 0 or (v == 0 and not allow_zero):
        raise ConfigError(path, f"expected a positive number, got {value!r}")
    return v


def _grid(raw, scalar_key, grid_key, parse_entry):
    """Resolve a scalar-or-list grid field into a nonempty tuple."""
    present = [k for k in (scalar_key, grid_key) if k in raw]
    if not present:
        raise ConfigError(grid_key, f"missing required field ({scalar_key} or {grid_key})")
    if len(present) == 2:
        raise ConfigError(grid_key, f"give either {scalar_key} or {grid_key}, not both")
    key = present[0]
    value = raw[key]
    entries = value if isinstance(value, list) else [value]
    if not entries:
        raise ConfigError(key, "grid must be nonempty")
    return tuple(
        parse_entry(entry, f"{key}[{i}]" if isinstance(value, list) else key)
        for i, entry in enumerate(entries)
    )


def _epsilon_entry(value, path):
    if value == "inf":
        return math.inf
    return _positive_number(value, path)


def _m_entry(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if value < 1:
        raise ConfigError(path, f"cycle count must be at least 1, got {value}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description plus the raw dictionary it came from."""

    generators: tuple
    bath_dim: int
    terms: tuple  # (system string, bath ndarray, profile tuple or None)
    protocol: str
    logical_state: np.ndarray
    bath_state: np.ndarray
    tau_grid: tuple
    M_grid: tuple
    epsilon_grid: tuple
    tolerance: float
    out_dir: str
    seed: int
    raw: dict


def parse_config(raw):
    """Validate a config dictionary; every complaint carries its field path."""
    if not isinstance(raw, dict):
        raise ConfigError("$", "top-level config must be a JSON object")
    for key in raw:
        if key not in _KNOWN_KEYS:
            raise ConfigError(key, "unknown field")

    generators = raw.get("generators")
    if not isinstance(generators, list) or not generators:
        raise ConfigError("generators", "expected a nonempty list of Pauli strings")
    for i, g in enumerate(generators):
        if not isinstance(g, str):
            raise ConfigError(f"generators[{i}]", f"expected a string, got {g!r}")

    bath_dim = raw.get("bath_dim")
    if isinstance(bath_dim, bool) or not isinstance(bath_dim, int) or bath_dim < 1:
        raise ConfigError("bath_dim", f"expected a positive integer, got {bath_dim!r}")

    terms_raw = raw.get("terms")
    if not isinstance(terms_raw, list) or not terms_raw:
        raise ConfigError("terms", "expected a nonempty list of Hamiltonian terms")
    terms = []
    for i, term in enumerate(terms_raw):
        path = f"terms[{i}]"
        if not isinstance(term, dict):
            raise ConfigError(path, "expected an object")
        for key in term:
            if key not in {"system", "bath", "profile"}:
                raise ConfigError(f"{path}.{key}", "unknown field")
        system = term.get("system")
        if not isinstance(system, str):
            raise ConfigError(f"{path}.system", "expected a Pauli string")
        if "bath" not in term:
            raise ConfigError(f"{path}.bath", "missing required field")
        bath = _complex_matrix(term["bath"], f"{path}.bath")
        if bath.shape != (bath_dim, bath_dim):
            raise ConfigError(
                f"{path}.bath",
                f"expected a {bath_dim}x{bath_dim} matrix, got {bath.shape}",
            )
        profile = None
        if "profile" in term and term["profile"] is not None:
            if not isinstance(term["profile"], list) or not term["profile"]:
                raise ConfigError(f"{path}.profile", "expected a nonempty list")
            segments = []
            for j, seg in enumerate(term["profile"]):
                seg_path = f"{path}.profile[{j}]"
                if not isinstance(seg, dict) or set(seg) != {"t0", "t1", "scale"}:
                    raise ConfigError(
                        seg_path, "expected an object with t0, t1, scale"
                    )
                t0 = _positive_number(seg["t0"], f"{seg_path}.t0", allow_zero=True)
                t1 = _positive_number(seg["t1"], f"{seg_path}.t1", allow_zero=True)
                if not isinstance(seg["scale"], (int, float)) or isinstance(
                    seg["scale"], bool
                ):
                    raise ConfigError(f"{seg_path}.scale", "expected a number")
                if t1 <= t0:
                    raise ConfigError(seg_path, f"t1 = {t1} must exceed t0 = {t0}")
                segments.append(ProfileSegment(t0, t1, float(seg["scale"])))
            profile = tuple(segments)
        terms.append((system, bath, profile))

    protocol = raw.get("protocol", "group")
    if protocol not in ("group", "generators"):
        raise ConfigError(
            "protocol", f'expected "group" or "generators", got {protocol!r}'
        )

    n = len(generators[0])
    q_bar = len(generators)
    k = n - q_bar
    if k < 0:
        raise ConfigError("generators", f"{q_bar} generators on {n} qubits")
    if "logical_state" in raw:
        logical = _complex_vector(raw["logical_state"], "logical_state")
        if logical.size != 2**k:
            raise ConfigError(
                "logical_state",
                f"expected length {2**k} for k = {k}, got {logical.size}",
            )
        if float(np.linalg.norm(logical)) < 1e-12:
            raise ConfigError("logical_state", "vector is zero")
    else:
        logical = np.zeros(2**k, dtype=complex)
        logical[0] = 1.0

    if "bath_state" in raw:
        bath_state = _complex_matrix(raw["bath_state"], "bath_state")
        if bath_state.shape != (bath_dim, bath_dim):
            raise ConfigError(
                "bath_state",
                f"expected {bath_dim}x{bath_dim}, got {bath_state.shape}",
            )
    else:
        bath_state = np.eye(bath_dim, dtype=complex) / bath_dim

    tau_grid = _grid(raw, "tau", "tau_grid", lambda v, p: _positive_number(v, p, allow_zero=True))
    m_grid = _grid(raw, "M", "M_grid", _m_entry)
    epsilon_grid = _grid(raw, "epsilon", "epsilon_grid", _epsilon_entry)

    tolerance = DEFAULT_BOUND_TOLERANCE
    if "tolerance" in raw:
        tolerance = _positive_number(raw["tolerance"], "tolerance")
    out_dir = raw.get("out_dir", ".")
    if not isinstance(out_dir, str):
        raise ConfigError("out_dir", f"expected a string, got {out_dir!r}")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed", f"expected an integer, got {seed!r}")

    return ExperimentConfig(
        generators=tuple(generators),
        bath_dim=bath_dim,
        terms=tuple(terms),
        protocol=protocol,
        logical_state=logical,
        bath_state=bath_state,
        tau_grid=tau_grid,
        M_grid=m_grid,
        epsilon_grid=epsilon_grid,
        tolerance=tolerance,
        out_dir=out_dir,
        seed=seed,
        raw=raw,
    )


def load_config(path):
    """Read and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("$", f"cannot read config file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON in {path}: {exc}")
    return parse_config(raw)


def build_model(config):
    """Construct (code, hamiltonian, initial state) from a validated config.

    Structural defects in the domain data (bad Pauli strings, anticommuting
    generators, non-Hermitian bath blocks) surface as ConfigError with the
    field that caused them; hypothesis violations (undetectable couplings)
    are left to decompose_hamiltonian so they keep their own error type.
    """
    try:
        gen_ops = [pa.pauli_from_string(g) for g in config.generators]
    except ZenoBenchError as exc:
        raise ConfigError("generators", str(exc)) from exc
    try:
        code = build_code(gen_ops)
    except ZenoBenchError as exc:
        raise ConfigError("generators", str(exc)) from exc

    built_terms = []
    for i, (system, bath, profile) in enumerate(config.terms):
        try:
            system_op = pa.pauli_from_string(system)
            term = HamiltonianTerm(system_op, bath, profile, index=i)
        except ZenoBenchError as exc:
            raise ConfigError(f"terms[{i}]", str(exc)) from exc
        built_terms.append(term)
    try:
        hspec = HamiltonianSpec(code.n, config.bath_dim, built_terms)
    except ZenoBenchError as exc:
        raise ConfigError("terms", str(exc)) from exc

    try:
        rho0 = initial_joint_state(
            code, config.logical_state, config.bath_state
        )
    except ZenoBenchError as exc:
        raise ConfigError("bath_state", str(exc)) from exc
    return code, hspec, rho0


def config_hash(raw):
    """Stable hash of the raw config dictionary for report provenance."""
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
