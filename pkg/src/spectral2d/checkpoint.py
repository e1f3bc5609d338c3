"""
Binary checkpoints of spectral states with a JSON sidecar.

The byte layout is documented in docs/checkpoint-format.md: a 64-byte
little-endian header followed by the rfft2 coefficient arrays as complex128.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Tuple

import numpy as np

from ..core.errors import InvalidInputError
from .state import SpectralState

logger = logging.getLogger("lagexp.spectral2d.checkpoint")

MAGIC = b"LGXS"
VERSION = 1
FLAG_RHS = 1

HEADER = np.dtype([
    ("magic", "S4"),
    ("version", "<u4"),
    ("M", "<u4"),
    ("flags", "<u4"),
    ("periods", "<f8", (2,)),
    ("nu", "<f8"),
    ("t", "<f8"),
    ("mean_flow", "<f8", (2,)),
])
COEFF = np.dtype("<c16")


def encode_state(state: SpectralState) -> bytes:
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["M"] = state.M
    header["flags"] = FLAG_RHS if state.rhs_hat is not None else 0
    header["periods"] = state.periods
    header["nu"] = state.nu
    header["t"] = state.t
    header["mean_flow"] = state.mean_flow
    parts = [header.tobytes(), np.ascontiguousarray(state.omega_hat, dtype=COEFF).tobytes()]
    if state.rhs_hat is not None:
        parts.append(np.ascontiguousarray(state.rhs_hat, dtype=COEFF).tobytes())
    return b"".join(parts)


def decode_state(data: bytes) -> SpectralState:
    if len(data) < HEADER.itemsize:
        raise InvalidInputError("Checkpoint is shorter than its header")
    header = np.frombuffer(data[:HEADER.itemsize], dtype=HEADER)[0]
    if bytes(header["magic"]) != MAGIC:
        raise InvalidInputError("Not a lagexp spectral checkpoint (bad magic)")
    if int(header["version"]) != VERSION:
        raise InvalidInputError(f"Unsupported checkpoint version {int(header['version'])}")
    M = int(header["M"])
    shape = (M, M // 2 + 1)
    block = shape[0] * shape[1] * COEFF.itemsize
    has_rhs = bool(int(header["flags"]) & FLAG_RHS)
    expected = HEADER.itemsize + block * (2 if has_rhs else 1)
    if len(data) != expected:
        raise InvalidInputError(f"Checkpoint has {len(data)} bytes, expected {expected}")
    offset = HEADER.itemsize
    omega_hat = np.frombuffer(data[offset:offset + block], dtype=COEFF).reshape(shape).astype(complex)
    rhs_hat = None
    if has_rhs:
        offset += block
        rhs_hat = np.frombuffer(data[offset:offset + block], dtype=COEFF).reshape(shape).astype(complex)
    return SpectralState(
        M=M,
        periods=tuple(float(p) for p in header["periods"]),
        nu=float(header["nu"]),
        t=float(header["t"]),
        omega_hat=omega_hat,
        mean_flow=tuple(float(u) for u in header["mean_flow"]),
        rhs_hat=rhs_hat,
    )


def sidecar(state: SpectralState, filename: str, payload: bytes) -> Dict[str, Any]:
    return {
        "format": "lagexp-spectral-state",
        "version": VERSION,
        "file": filename,
        "bytes": len(payload),
        "sha256": hashlib.sha256(payload).hexdigest(),
        "M": state.M,
        "periods": list(state.periods),
        "nu": state.nu,
        "t": state.t,
        "mean_flow": list(state.mean_flow),
        "energy": state.energy(),
        "has_rhs": state.rhs_hat is not None,
    }


def write_checkpoint(state: SpectralState, directory: Path, index: int) -> Tuple[Path, Path]:
    """Write state_<index>.bin and its state_<index>.json sidecar"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"state_{index:05d}"
    payload = encode_state(state)
    bin_path = directory / f"{stem}.bin"
    json_path = directory / f"{stem}.json"
    bin_path.write_bytes(payload)
    with open(json_path, "w") as f:
        json.dump(sidecar(state, bin_path.name, payload), f, indent=2, sort_keys=True)
    logger.debug(f"Checkpoint t={state.t:g} written to {bin_path}")
    return bin_path, json_path


def read_checkpoint(path: Path, verify: bool = True) -> SpectralState:
    """Read a .bin checkpoint; with ``verify`` the sidecar checksum is checked when present"""
    path = Path(path)
    payload = path.read_bytes()
    meta_path = path.with_suffix(".json")
    if verify and meta_path.exists():
        with open(meta_path, "r") as f:
            meta = json.load(f)
        if meta.get("sha256") != hashlib.sha256(payload).hexdigest():
            raise InvalidInputError(f"Checksum mismatch for {path}")
    return decode_state(payload)
