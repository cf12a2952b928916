"""JSON encoding of problems, certificates, solutions and models.

Schema pickzeta/1: complex numbers are [re, im] pairs of binary64,
matrices are row-major nested lists, field names are snake_case.  Every
certificate carries the tolerances used and the conjugation convention.
"""

from __future__ import annotations

import json

import numpy as np

from .dirichlet import CoefficientSeries
from .errors import ValidationError
from .kernels import DIAGONAL, KernelSpec, ZETA_POWER
from .pick import CONVENTION, InterpolationProblem, PickCertificate
from .realization import DirichletMultiplier, RealizationModel
from .schur import HalfPlaneSchurFunction, RationalSchurFunction

SCHEMA = "pickzeta/1"


def encode_complex(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(value) -> complex:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ValidationError(f"complex values are [re, im] pairs; got {value!r}")
    return complex(float(value[0]), float(value[1]))


def encode_vector(vec) -> list:
    return [encode_complex(z) for z in np.asarray(vec).ravel()]


def decode_vector(values) -> np.ndarray:
    return np.array([decode_complex(v) for v in values], dtype=complex)


def encode_matrix(mat) -> list:
    mat = np.asarray(mat)
    return [[encode_complex(z) for z in row] for row in mat]


def decode_matrix(rows) -> np.ndarray:
    return np.array([[decode_complex(v) for v in row] for row in rows], dtype=complex)


def encode_kernel(spec: KernelSpec) -> dict:
    out = {"kind": spec.kind}
    if spec.kind == ZETA_POWER:
        out["power"] = spec.power
    if spec.kind == DIAGONAL:
        out["coeffs"] = encode_vector(spec.coeffs.coeffs)
    return out


def decode_kernel(data) -> KernelSpec:
    if not isinstance(data, dict) or "kind" not in data:
        raise ValidationError("kernel must be an object with a 'kind' field")
    kind = data["kind"]
    power = int(data.get("power", 1))
    coeffs = None
    if "coeffs" in data:
        coeffs = CoefficientSeries(decode_vector(data["coeffs"]))
    return KernelSpec(kind, power=power, coeffs=coeffs)


def encode_problem(problem: InterpolationProblem) -> dict:
    return {
        "schema": SCHEMA,
        "nodes": encode_vector(problem.nodes),
        "targets": encode_vector(problem.targets),
        "kernel": encode_kernel(problem.kernel),
        "psd_tol": problem.psd_tol,
        "rank_tol": problem.rank_tol,
    }


def decode_problem(data) -> InterpolationProblem:
    if not isinstance(data, dict):
        raise ValidationError("problem file must hold a JSON object")
    missing = {"nodes", "targets", "kernel"} - set(data)
    if missing:
        raise ValidationError(f"problem is missing fields: {sorted(missing)}")
    return InterpolationProblem(
        nodes=tuple(decode_vector(data["nodes"])),
        targets=tuple(decode_vector(data["targets"])),
        kernel=decode_kernel(data["kernel"]),
        psd_tol=float(data.get("psd_tol", 1e-10)),
        rank_tol=float(data.get("rank_tol", 1e-8)),
    )


def encode_certificate(cert: PickCertificate) -> dict:
    return {
        "schema": SCHEMA,
        "matrix": encode_matrix(cert.matrix),
        "min_eigenvalue": cert.min_eigenvalue,
        "max_eigenvalue": cert.max_eigenvalue,
        "spectral_norm": cert.spectral_norm,
        "numerical_rank": cert.numerical_rank,
        "psd": cert.psd,
        "margin": cert.margin,
        "inconclusive": cert.inconclusive,
        "psd_tol": cert.psd_tol,
        "rank_tol": cert.rank_tol,
        "witness": encode_vector(cert.witness),
        "convention": CONVENTION,
    }


def encode_solution(solution) -> dict:
    if isinstance(solution, HalfPlaneSchurFunction):
        return {
            "schema": SCHEMA,
            "domain": "half_plane",
            "disc_solution": encode_solution(solution.disc_function),
        }
    if not isinstance(solution, RationalSchurFunction):
        raise ValidationError(f"cannot serialize {type(solution).__name__}")
    if solution.representation == "blaschke":
        return {
            "schema": SCHEMA,
            "domain": "disc",
            "representation": "blaschke",
            "zeros": encode_vector(solution.zeros),
            "unimodular": encode_complex(solution.unimodular),
        }
    return {
        "schema": SCHEMA,
        "domain": "disc",
        "representation": "schur_steps",
        "steps": [
            {"node": encode_complex(n), "parameter": encode_complex(g)}
            for n, g in solution.steps
        ],
        "terminal": encode_complex(solution.terminal),
    }


def decode_solution(data):
    if not isinstance(data, dict):
        raise ValidationError("solution file must hold a JSON object")
    if data.get("domain") == "half_plane":
        return HalfPlaneSchurFunction(decode_solution(data["disc_solution"]))
    rep = data.get("representation")
    if rep == "blaschke":
        return RationalSchurFunction.from_blaschke(
            decode_vector(data["zeros"]), decode_complex(data["unimodular"]))
    if rep == "schur_steps":
        steps = [(decode_complex(s["node"]), decode_complex(s["parameter"]))
                 for s in data["steps"]]
        return RationalSchurFunction(steps=steps, terminal=decode_complex(data["terminal"]))
    raise ValidationError(f"unknown solution representation {rep!r}")


def encode_multiplier(phi: DirichletMultiplier) -> dict:
    return {
        "schema": SCHEMA,
        "coeffs": encode_vector(phi.coeffs),
        "label": phi.label,
        "declared_norm": phi.declared_norm,
    }


def decode_multiplier(data) -> DirichletMultiplier:
    if not isinstance(data, dict) or "coeffs" not in data:
        raise ValidationError("multiplier must be an object with a 'coeffs' field")
    return DirichletMultiplier(decode_vector(data["coeffs"]),
                               label=str(data.get("label", "")))


def encode_model(model: RealizationModel) -> dict:
    return {
        "schema": SCHEMA,
        "points": encode_vector(model.points),
        "trunc": model.trunc,
        "rank": model.rank,
        "alpha": encode_complex(model.alpha),
        "psi": encode_matrix(model.psi) if model.psi.size else [],
        "a": encode_complex(model.a),
        "beta": encode_vector(model.beta),
        "gamma": encode_vector(model.gamma),
        "d_left": encode_matrix(model.d_left) if model.d_left.size else [],
        "d_right": encode_matrix(model.d_right) if model.d_right.size else [],
        "certificates": {k: float(v) for k, v in model.certificates.items()},
        "multiplier": encode_multiplier(model.multiplier) if model.multiplier else None,
    }


def decode_model(data) -> RealizationModel:
    from .dirichlet import mobius_range  # local: heavy sieve only when needed

    if not isinstance(data, dict):
        raise ValidationError("model file must hold a JSON object")
    trunc = int(data["trunc"])
    rank = int(data["rank"])
    dim = trunc * rank
    psi = decode_matrix(data["psi"]) if data.get("psi") else np.zeros((0, 0), complex)
    d_left = decode_matrix(data["d_left"]) if data.get("d_left") else np.zeros((dim, 0), complex)
    d_right = decode_matrix(data["d_right"]) if data.get("d_right") else np.zeros((dim, 0), complex)
    mult = decode_multiplier(data["multiplier"]) if data.get("multiplier") else None
    mu_sqrt = np.sqrt(1.0 + mobius_range(trunc)[1:].astype(float))
    return RealizationModel(
        points=tuple(decode_vector(data["points"])),
        trunc=trunc,
        rank=rank,
        alpha=decode_complex(data["alpha"]),
        psi=psi,
        a=decode_complex(data["a"]),
        beta=decode_vector(data["beta"]),
        gamma=decode_vector(data["gamma"]),
        d_left=d_left,
        d_right=d_right,
        mu_sqrt=mu_sqrt,
        certificates=dict(data.get("certificates", {})),
        multiplier=mult,
    )


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_json(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
