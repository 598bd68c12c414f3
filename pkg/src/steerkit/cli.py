"""``steerkit`` command line interface.

Every command prints one JSON report to stdout::

    {"command": ..., "inputs": {...}, "results": {...},
     "residuals": {...}, "status": "ok" | {"error": code, "message": ...}}

Exit status is 0 when the command succeeded and every residual is within its
tolerance, 1 when a residual or invariant failed, 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import antilinear as al
from . import fine_structure as fs
from . import steering as st
from .errors import DimensionMismatch, NotUnit, ParseError, SteerError
from .invariants import run_suite
from .numerics import max_abs
from .state import load_state, reduced_density, schmidt

RESIDUAL_TOL = 1e-10


class FileNotFound(SteerError):
    code = "FileNotFound"


class Report(dict):
    """JSON-ready report; ``tolerances`` is kept out of the serialized form."""

    def __init__(self, command: str, inputs: dict):
        super().__init__(command=command, inputs=inputs, results={}, residuals={}, status="ok")
        self.tolerances: dict[str, float] = {}
        self.failed = False

    def residual(self, name: str, value: float, tolerance: float = RESIDUAL_TOL):
        self["residuals"][name] = float(value)
        self.tolerances[name] = tolerance

    def error(self, exc: Exception):
        code = getattr(exc, "code", type(exc).__name__)
        self["status"] = {"error": code, "message": str(exc)}

    @property
    def ok(self) -> bool:
        return self["status"] == "ok"

    @property
    def exit_code(self) -> int:
        if not self.ok:
            return 2
        over = any(v > self.tolerances.get(k, RESIDUAL_TOL) for k, v in self["residuals"].items())
        return 1 if over or self.failed else 0


# -- serialization ---------------------------------------------------------------

def _encode(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"non-finite number {x!r} in report")
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_encode(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v) for v in seq) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent + 1) for v in seq) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(report: dict) -> str:
    """Serialize with every float at 17 significant digits."""
    return _encode(report) + "\n"


def _complex_vector(v) -> dict:
    v = np.asarray(v, dtype=complex)
    return {"re": [float(x) for x in v.real], "im": [float(x) for x in v.imag]}


def parse_vector(text: str) -> np.ndarray:
    """Parse ``re,im;re,im;...`` (an imaginary part may be omitted)."""
    comps = []
    for i, chunk in enumerate(text.strip().split(";")):
        parts = [p.strip() for p in chunk.split(",")]
        if not 1 <= len(parts) <= 2 or not all(parts):
            raise ParseError(f"vector component {i}: expected 're,im', got {chunk!r}")
        try:
            re = float(parts[0])
            im = float(parts[1]) if len(parts) == 2 else 0.0
        except ValueError:
            raise ParseError(f"vector component {i}: {chunk!r} is not numeric") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"vector component {i}: non-finite value")
        comps.append(complex(re, im))
    return np.array(comps)


def _state_inputs(path) -> tuple[dict, object]:
    path = Path(path)
    if not path.exists():
        raise FileNotFound(f"{path}: no such file")
    state = load_state(path)
    return {"state_file": str(path), "d1": state.d1, "d2": state.d2}, state


# -- commands --------------------------------------------------------------------

def cmd_schmidt(state_file) -> Report:
    report = Report("schmidt", {"state_file": str(state_file)})
    try:
        report["inputs"], state = _state_inputs(state_file)
        sd = schmidt(state)
        report["results"] = {
            "coefficients": [float(x) for x in sd.coefficients],
            "eigenvalues": [float(x) for x in sd.eigenvalues],
            "rank": sd.rank,
        }
        report.residual("reconstruction", max_abs(sd.reconstruct() - state.coeffs))
    except SteerError as exc:
        report.error(exc)
    return report


def cmd_steer(state_file, psi: str, normalize: bool = False) -> Report:
    report = Report("steer", {"state_file": str(state_file), "psi": psi, "normalize": normalize})
    try:
        inputs, state = _state_inputs(state_file)
        report["inputs"].update(inputs)
        vec = parse_vector(psi)
        if vec.shape[0] != state.d1:
            raise DimensionMismatch(f"psi has {vec.shape[0]} components, state has d1 = {state.d1}")
        if normalize:
            norm = np.linalg.norm(vec)
            if norm == 0:
                raise NotUnit("cannot normalize the zero vector")
            vec = vec / norm
        out = st.steer_elementary(state, vec)
        report["results"] = {
            "probability": out.probability,
            "possible": out.possible,
            "distant_state": _complex_vector(out.distant_state) if out.possible else None,
        }
        if out.possible:
            ref = st.trace_rule_oracle(state, np.outer(vec, vec.conj()))
            report.residual("oracle_probability", abs(out.probability - ref.probability), 1e-12)
            report.residual("oracle_state", max_abs(out.distant_density() - ref.distant_density()))
    except SteerError as exc:
        report.error(exc)
    return report


def cmd_polar(state_file) -> Report:
    report = Report("polar", {"state_file": str(state_file)})
    try:
        report["inputs"], state = _state_inputs(state_file)
        a = al.from_state(state)
        polar = al.polar_factorize(a, state)
        report["results"] = {
            "rank": polar.rank,
            "schmidt_coefficients": [float(x) for x in polar.schmidt.coefficients],
        }
        for key, value in al.factorization_residuals(a, polar).items():
            report.residual(key, value)
        rho1, rho2 = reduced_density(state, 1), reduced_density(state, 2)
        report.residual("similarity", al.check_similarity(polar, rho1, rho2))
        report.residual("antiunitarity", al.antiunitarity_residual(polar))
    except SteerError as exc:
        report.error(exc)
    return report


def cmd_classify(spectrum: str, coeffs: str) -> Report:
    report = Report("classify", {"spectrum": spectrum, "coeffs": coeffs})
    try:
        spec = fs.as_spectrum(fs.parse_model(spectrum))
        model = fs.parse_model(coeffs)
        report["inputs"].update(spectrum_model=str(spec), coeffs_model=fs.format_model(model))
        tier = fs.classify_vector(spec, model)
        results = {
            "tier": tier.value,
            "summable": {f"s{s}": fs.summable(spec, model, s) for s in (0, 1, 2)},
            "steering_image": None,
            "arrow": None,
        }
        if tier is fs.Tier.NotInSpace:
            results["image_error"] = "NotInDomain"
        else:
            image, (src, dst) = fs.steering_image(spec, model)
            results["steering_image"] = fs.format_model(image)
            results["arrow"] = [src.value, dst.value]
        report["results"] = results
    except (SteerError, ValueError) as exc:
        if not isinstance(exc, SteerError):
            exc = ParseError(str(exc))
        report.error(exc)
    return report


def cmd_verify(state_file, seed: int = 0, trials: int = 100) -> Report:
    report = Report("verify", {"state_file": str(state_file), "seed": seed, "trials": trials})
    try:
        inputs, state = _state_inputs(state_file)
        report["inputs"].update(inputs)
        checks = run_suite(state, seed, trials)
        report["results"] = {
            "checks": [c.as_dict() for c in checks],
            "all_passed": all(c.passed for c in checks),
        }
        for c in checks:
            report.residual(c.name, c.max_residual, c.tolerance)
        report.failed = not report["results"]["all_passed"]
    except SteerError as exc:
        report.error(exc)
    return report


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steerkit", description="Schrodinger steering of bipartite pure states.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", metavar="OUT", help="also write the report to this file")
        return p

    p = add("schmidt", "Schmidt coefficients and rank of a state file")
    p.add_argument("state_file")
    p = add("steer", "steer the distant subsystem by the event |psi><psi|")
    p.add_argument("state_file")
    p.add_argument("psi", help="vector as 're,im;re,im;...' (use -- before negative leading values)")
    p.add_argument("--normalize", action="store_true", help="rescale psi to unit norm")
    p = add("polar", "both polar factorizations and the correlation operator")
    p.add_argument("state_file")
    p = add("classify", "range tier of a coefficient model for a spectrum model")
    p.add_argument("spectrum", help="decay model: pow:q | exp:d | powexp:q,d | finite:v1,...")
    p.add_argument("coeffs", help="decay model of the coefficients")
    p = add("verify", "run the seeded invariant suite on a state file")
    p.add_argument("state_file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schmidt":
        report = cmd_schmidt(args.state_file)
    elif args.command == "steer":
        report = cmd_steer(args.state_file, args.psi, args.normalize)
    elif args.command == "polar":
        report = cmd_polar(args.state_file)
    elif args.command == "classify":
        report = cmd_classify(args.spectrum, args.coeffs)
    else:
        if args.trials < 1:
            build_parser().error("--trials must be at least 1")
        report = cmd_verify(args.state_file, args.seed, args.trials)
    text = to_json(report)
    sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
