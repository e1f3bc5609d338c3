"""
JSON codec for semigroups, polynomials, field expansions and trajectory expansions.

Exact rationals travel as "p/q" strings, floats as JSON numbers (Python's
repr is round-trip exact).
"""
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..core.errors import FieldSchemaError, InvalidInputError
from ..utils.utils import config_hash
from .engine import TrajectoryExpansion
from .field import DEFAULT_M_MAX, ExpansionTerm, FieldExpansion, PolyField, TrigField
from .polyvec import PolyVec, as_scalar, is_exact_value
from .semigroup import (
    Semigroup,
    build_semigroup,
    fraction_string,
    periodic_stokes_generators,
    to_fraction,
)

logger = logging.getLogger("lagexp.expansion.serialization")

FORMAT_VERSION = "1"


def scalar_to_json(value) -> Any:
    """Fraction -> "p/q" string, everything else -> float"""
    if isinstance(value, Fraction):
        return fraction_string(value)
    return float(value)


def scalar_from_json(value) -> Any:
    """Inverse of scalar_to_json; ints and "p/q" strings are exact"""
    if isinstance(value, str):
        return to_fraction(value)
    if isinstance(value, bool):
        raise FieldSchemaError(f"Boolean is not a number: {value!r}")
    if isinstance(value, (int, float)):
        return as_scalar(value)
    raise FieldSchemaError(f"Cannot read a number from {value!r}")


def polyvec_to_json(p: PolyVec) -> Dict[str, Any]:
    return {"dim": p.dim, "coeffs": [[scalar_to_json(c) for c in vec] for vec in p.coeffs]}


def polyvec_from_json(data: Dict[str, Any]) -> PolyVec:
    try:
        dim = int(data["dim"])
        rows = [[scalar_from_json(c) for c in vec] for vec in data["coeffs"]]
    except (KeyError, TypeError) as e:
        raise FieldSchemaError(f"Malformed polynomial entry: {e}")
    return PolyVec.from_coeffs(rows, dim)


def semigroup_from_config(data: Dict[str, Any]) -> Semigroup:
    """
    Build a semigroup from a config block.

    Either ``generators`` (list of rationals) or ``stokes`` ({dim, count,
    aspect}) must be given, together with ``nu`` and ``n_cap``.
    """
    if "n_cap" not in data:
        raise InvalidInputError("Semigroup config needs 'n_cap'")
    nu = data.get("nu", 1)
    if "generators" in data:
        generators = list(data["generators"])
    elif "stokes" in data:
        box = data["stokes"]
        generators = periodic_stokes_generators(
            int(box["dim"]), int(box.get("count", 8)), box.get("aspect")
        )
    else:
        raise InvalidInputError("Semigroup config needs 'generators' or 'stokes'")
    return build_semigroup(generators, nu, data["n_cap"])


def semigroup_to_json(sg: Semigroup) -> Dict[str, Any]:
    return {
        "generators": [str(g) for g in sg.generators],
        "nu": fraction_string(sg.nu),
        "n_cap": sg.n_cap,
        "exponents": [fraction_string(mu) for mu in sg.mus()],
    }


def _trig_from_json(data: Dict[str, Any], dim: int, periods, m_max: int) -> TrigField:
    if "modes" not in data:
        raise FieldSchemaError("Trig coefficient needs a 'modes' table")
    modes = {}
    for entry in data["modes"]:
        kappa = tuple(int(k) for k in entry["k"])
        re = [float(c) for c in entry["re"]]
        im = [float(c) for c in entry.get("im", [0.0] * dim)]
        if len(re) != dim or len(im) != dim:
            raise FieldSchemaError(f"Mode {kappa} coefficient does not have {dim} components")
        vec = [complex(a, b) for a, b in zip(re, im)]
        if kappa in modes or tuple(-k for k in kappa) in modes:
            raise FieldSchemaError(f"Duplicate Fourier mode {kappa} (or its conjugate)")
        modes[kappa] = vec
    return TrigField(dim, periods, modes, divergence_free=bool(data.get("divergence_free", False)),
                     m_max=m_max)


def _trig_to_json(f: TrigField) -> Dict[str, Any]:
    modes = []
    for kappa, coeff in sorted(f.modes.items()):
        modes.append({
            "k": list(kappa),
            "re": [float(c.real) for c in coeff],
            "im": [float(c.imag) for c in coeff],
        })
    return {"modes": modes, "divergence_free": f.divergence_free}


def _poly_from_json(data: Dict[str, Any], dim: int, m_max: int) -> PolyField:
    if "monomials" not in data:
        raise FieldSchemaError("Polynomial coefficient needs a 'monomials' table")
    monomials: Dict[tuple, List] = {}
    for entry in data["monomials"]:
        powers = tuple(int(p) for p in entry["powers"])
        coeffs = [scalar_from_json(c) for c in entry["coeffs"]]
        if powers in monomials:
            monomials[powers] = [a + b for a, b in zip(monomials[powers], coeffs)]
        else:
            monomials[powers] = coeffs
    return PolyField(dim, monomials, m_max=m_max)


def _poly_to_json(f: PolyField) -> Dict[str, Any]:
    return {"monomials": [
        {"powers": list(powers), "coeffs": [scalar_to_json(c) for c in coeff]}
        for powers, coeff in sorted(f.monomials.items())
    ]}


def field_expansion_from_json(data: Dict[str, Any], sg: Semigroup) -> FieldExpansion:
    """
    Ingest a field expansion.

    ``order`` defaults to the largest stored term index. Absent indices up to
    the order are zero terms.
    """
    kind = data.get("type")
    if kind not in ("trig", "poly"):
        raise FieldSchemaError(f"Field type must be 'trig' or 'poly', got {kind!r}")
    dim = int(data["dim"])
    m_max = int(data.get("m_max", DEFAULT_M_MAX))
    periods = None
    if kind == "trig":
        periods = tuple(float(p) for p in data.get("periods", [])) or None
        if periods is None:
            raise FieldSchemaError("Trig fields need 'periods'")

    terms: Dict[int, ExpansionTerm] = {}
    for entry in data.get("terms", []):
        n = int(entry["n"])
        if n in terms:
            raise FieldSchemaError(f"Term index {n} appears twice")
        raw = entry.get("time_coeffs", [])
        if not raw:
            raise FieldSchemaError(f"Term {n} has no time coefficients")
        if kind == "trig":
            coeffs = tuple(_trig_from_json(c, dim, periods, m_max) for c in raw)
        else:
            coeffs = tuple(_poly_from_json(c, dim, m_max) for c in raw)
        terms[n] = ExpansionTerm(n=n, time_coeffs=coeffs)

    order = int(data.get("order", max(terms, default=0)))
    if order >= 1 and 1 not in terms:
        raise FieldSchemaError("The leading term q_1 is missing (give an empty monomial or mode table for zero)")
    if order > sg.n_cap:
        raise FieldSchemaError(f"Field order {order} exceeds the semigroup cap {sg.n_cap}")
    mean_flow = tuple(scalar_from_json(u) for u in data.get("mean_flow", [])) or ()
    fe = FieldExpansion(dim=dim, sg=sg, terms=terms, order=order, kind=kind,
                        periods=periods, mean_flow=mean_flow)
    logger.debug(f"Loaded {kind} field expansion: dim {dim}, {len(terms)} stored terms, order {order}")
    return fe


def field_expansion_to_json(fe: FieldExpansion) -> Dict[str, Any]:
    terms = []
    for n in sorted(fe.terms):
        encode = _trig_to_json if fe.kind == "trig" else _poly_to_json
        terms.append({"n": n, "time_coeffs": [encode(c) for c in fe.terms[n].time_coeffs]})
    data = {
        "type": fe.kind,
        "dim": fe.dim,
        "order": fe.order,
        "m_max": fe.max_derivative_order(),
        "terms": terms,
        "mean_flow": [scalar_to_json(u) for u in fe.mean_flow],
    }
    if fe.periods is not None:
        data["periods"] = list(fe.periods)
    return data


def field_hash(fe: FieldExpansion) -> str:
    """sha256 of the canonical JSON of the field and its semigroup"""
    return config_hash({"semigroup": semigroup_to_json(fe.sg), "field": field_expansion_to_json(fe)})


def trajectory_expansion_to_json(te: TrajectoryExpansion,
                                 provenance: Optional[Dict[str, Any]] = None,
                                 fe: Optional[FieldExpansion] = None) -> Dict[str, Any]:
    """
    Serialize a computed expansion with exponents as fraction strings.

    When the source field ``fe`` is given its hash joins the provenance block.
    """
    block = {
        "x_star": [scalar_to_json(c) for c in te.x_star],
        "N": te.N,
        "mode": "exact" if te.exact else "float",
    }
    if fe is not None:
        block["field_hash"] = field_hash(fe)
    block.update(provenance or {})
    return {
        "format_version": FORMAT_VERSION,
        "dim": te.dim,
        "x_star": [scalar_to_json(c) for c in te.x_star],
        "mean_flow": [scalar_to_json(u) for u in te.mean_flow],
        "semigroup": semigroup_to_json(te.sg),
        "N": te.N,
        "exact": te.exact,
        "zetas": [
            {
                "n": n,
                "mu": fraction_string(te.sg.mu(n)),
                "mu_decimal": float(te.sg.mu(n)),
                "zeta": polyvec_to_json(te.zetas[n]),
                "residual": te.residuals.get(n, 0.0),
            }
            for n in sorted(te.zetas)
        ],
        "provenance": block,
    }


def trajectory_expansion_from_json(data: Dict[str, Any]) -> TrajectoryExpansion:
    sg_data = data["semigroup"]
    sg = build_semigroup(sg_data["generators"], sg_data["nu"], int(sg_data["n_cap"]))
    zetas = {int(entry["n"]): polyvec_from_json(entry["zeta"]) for entry in data.get("zetas", [])}
    residuals = {int(entry["n"]): float(entry.get("residual", 0.0)) for entry in data.get("zetas", [])}
    x_star = tuple(scalar_from_json(c) for c in data["x_star"])
    exact = bool(data.get("exact", False)) and all(is_exact_value(c) for c in x_star)
    return TrajectoryExpansion(
        x_star=x_star,
        mean_flow=tuple(scalar_from_json(u) for u in data.get("mean_flow", [0] * len(x_star))),
        zetas=zetas,
        sg=sg,
        N=int(data["N"]),
        exact=exact,
        residuals=residuals,
    )
