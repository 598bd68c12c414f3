"""Range tiers of density operators with infinite-dimensional range.

Vectors and spectra are modelled by symbolic decay laws for the magnitudes
of their coefficients in the eigenbasis of rho:

    pow:q            |a_k| = k^-q
    exp:d            |a_k| = d^k                (0 < d < 1)
    powexp:q,d       |a_k| = k^-q d^k
    finite:v1,...    |a_k| = v_k, zero beyond the list

Membership of ``psi = sum_k a_k psi_k`` in R(rho^{s/2}) is decided by
convergence of ``sum_k |a_k|^2 r_k^-s``, which for these families reduces to
the p-series and geometric tests.  Everything except finite-support values
is exact rational arithmetic.

Internally a model is ``k^-power * base^k`` where ``base`` is kept as a
product of rational numbers raised to rational exponents, so square roots of
exponential spectra stay exact.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidModel, NotInDomain, ParseError, UnsupportedCombination

Factors = tuple[tuple[Fraction, Fraction], ...]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidModel(f"parameter must be finite, got {x!r}")
        # the decimal literal the user meant, not the binary expansion
        return Fraction(repr(x))
    return Fraction(x)


def _normalize_factors(factors: Iterable[tuple[Fraction, Fraction]]) -> Factors:
    merged: dict[Fraction, Fraction] = {}
    for b, e in factors:
        if b <= 0:
            raise InvalidModel(f"exponential base must be positive, got {b}")
        if b == 1 or e == 0:
            continue
        merged[b] = merged.get(b, Fraction(0)) + e
    return tuple(sorted((b, e) for b, e in merged.items() if e != 0))


def _compare_base_to_one(factors: Factors) -> int:
    """Sign of ``prod b^e - 1``, decided exactly."""
    if not factors:
        return 0
    lcm = 1
    for _, e in factors:
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    # prod b^(e*lcm) has integer exponents and the same position relative to 1
    value = Fraction(1)
    for b, e in factors:
        value *= b ** int(e * lcm)
    return (value > 1) - (value < 1)


def _format_number(x) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class DecayModel:
    """Magnitude law ``|a_k| = k^-power * base^k`` (k >= 1), or explicit finite values."""

    power: Fraction = Fraction(0)
    factors: Factors = ()
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "power", _frac(self.power))
        object.__setattr__(self, "factors", _normalize_factors((_frac(b), _frac(e)) for b, e in self.factors))
        if self.values is not None:
            vals = tuple(float(v) for v in self.values)
            if not all(math.isfinite(v) for v in vals):
                raise InvalidModel("finite-support values must be finite")
            if self.power != 0 or self.factors:
                raise InvalidModel("finite-support model carries no decay law")
            object.__setattr__(self, "values", tuple(abs(v) for v in vals))

    # -- constructors ---------------------------------------------------------

    @classmethod
    def power_law(cls, q) -> "DecayModel":
        return cls(power=_frac(q))

    @classmethod
    def exponential(cls, delta) -> "DecayModel":
        delta = _frac(delta)
        if not 0 < delta < 1:
            raise InvalidModel(f"exponential base must lie in (0, 1), got {delta}")
        return cls(factors=((delta, Fraction(1)),))

    @classmethod
    def power_exp(cls, q, delta) -> "DecayModel":
        delta = _frac(delta)
        if not 0 < delta < 1:
            raise InvalidModel(f"exponential base must lie in (0, 1), got {delta}")
        return cls(power=_frac(q), factors=((delta, Fraction(1)),))

    @classmethod
    def finite(cls, values: Sequence[float]) -> "DecayModel":
        return cls(values=tuple(values))

    # -- queries --------------------------------------------------------------

    @property
    def kind(self) -> str:
        if self.values is not None:
            return "finite"
        if self.factors and self.power != 0:
            return "powexp"
        if self.factors:
            return "exp"
        return "pow"

    @property
    def is_finite(self) -> bool:
        return self.values is not None

    @property
    def base(self) -> float:
        return math.prod(float(b) ** float(e) for b, e in self.factors)

    def base_sign(self) -> int:
        """Sign of ``base - 1``, exact."""
        return _compare_base_to_one(self.factors)

    def log_terms(self, count: int) -> np.ndarray:
        """``log |a_k|`` for ``k = 1..count`` (``-inf`` for zero terms)."""
        k = np.arange(1, count + 1, dtype=float)
        if self.values is not None:
            vals = np.zeros(count)
            n = min(count, len(self.values))
            vals[:n] = self.values[:n]
            with np.errstate(divide="ignore"):
                return np.log(vals)
        log_base = sum(float(e) * math.log(float(b)) for b, e in self.factors)
        return -float(self.power) * np.log(k) + k * log_base

    def terms(self, count: int) -> np.ndarray:
        return np.exp(self.log_terms(count))

    def __str__(self) -> str:
        return format_model(self)

    # -- algebra on magnitudes -----------------------------------------------

    def __pow__(self, exponent) -> "DecayModel":
        e = _frac(exponent)
        if self.values is not None:
            if e < 0 and any(v == 0 for v in self.values):
                raise InvalidModel("cannot invert a zero term")
            return DecayModel(values=tuple(v ** float(e) if v else 0.0 for v in self.values))
        return DecayModel(power=self.power * e, factors=tuple((b, x * e) for b, x in self.factors))

    def __mul__(self, other: "DecayModel") -> "DecayModel":
        if not isinstance(other, DecayModel):
            return NotImplemented
        if self.values is None and other.values is None:
            return DecayModel(power=self.power + other.power, factors=self.factors + other.factors)
        # zero beyond the shorter finite support
        if self.values is not None and other.values is not None:
            n = min(len(self.values), len(other.values))
        else:
            n = len(self.values if self.values is not None else other.values)
        a, b = self.terms(n), other.terms(n)
        return DecayModel(values=tuple(float(x) for x in a * b))


@dataclass(frozen=True)
class SpectralModel:
    """Positive, summable eigenvalue sequence ``r_k`` of a density operator (up to scale)."""

    decay: DecayModel

    def __post_init__(self):
        d = self.decay
        if d.values is not None:
            if not d.values or any(v <= 0 for v in d.values):
                raise InvalidModel("finite spectrum must be nonempty and strictly positive")
        elif not _series_converges(d.power, d.base_sign()):
            raise InvalidModel(f"spectrum {format_model(d)} is not summable")

    @property
    def finite_rank(self) -> int | None:
        return None if self.decay.values is None else len(self.decay.values)

    def __str__(self) -> str:
        return format_model(self.decay)


class Tier(enum.Enum):
    Range = "Range"
    SqrtRangeOnly = "SqrtRangeOnly"
    ClosureOnly = "ClosureOnly"
    NotInSpace = "NotInSpace"

    def __str__(self) -> str:
        return self.value


def _series_converges(power: Fraction, base_sign: int) -> bool:
    """``sum_k k^-power * B^k`` with ``sign(B - 1) = base_sign``."""
    if base_sign < 0:
        return True
    if base_sign > 0:
        return False
    return power > 1


def as_spectrum(spectrum) -> SpectralModel:
    if isinstance(spectrum, SpectralModel):
        return spectrum
    if isinstance(spectrum, DecayModel):
        return SpectralModel(spectrum)
    if isinstance(spectrum, str):
        return SpectralModel(parse_model(spectrum))
    raise TypeError(f"cannot interpret {spectrum!r} as a spectrum")


def as_model(coeffs) -> DecayModel:
    if isinstance(coeffs, DecayModel):
        return coeffs
    if isinstance(coeffs, str):
        return parse_model(coeffs)
    raise TypeError(f"cannot interpret {coeffs!r} as a decay model")


def _on_spectrum_support(spectrum: SpectralModel, coeffs: DecayModel) -> DecayModel:
    # a finite spectrum only has finitely many eigenvectors to expand over
    n = spectrum.finite_rank
    if n is None or (coeffs.values is not None and len(coeffs.values) <= n):
        return coeffs
    return DecayModel(values=tuple(float(x) for x in coeffs.terms(n)))


def general_term(spectrum, coeffs, s) -> DecayModel:
    """Magnitude model of ``|a_k|^2 r_k^-s``."""
    spectrum, coeffs = as_spectrum(spectrum), as_model(coeffs)
    coeffs = _on_spectrum_support(spectrum, coeffs)
    return coeffs ** 2 * spectrum.decay ** (-_frac(s))


def summable(spectrum, coeffs, s: int) -> bool:
    """Exact convergence of ``sum_k |a_k|^2 r_k^-s`` for ``s`` in {0, 1, 2}."""
    if s not in (0, 1, 2):
        raise ValueError(f"inverse power must be 0, 1 or 2, got {s!r}")
    term = general_term(spectrum, coeffs, s)
    if term.values is not None:
        return True
    if term.kind not in ("pow", "exp", "powexp"):
        raise UnsupportedCombination(f"no convergence rule for {term.kind}")
    return _series_converges(term.power, term.base_sign())


def classify_vector(spectrum, coeffs) -> Tier:
    if not summable(spectrum, coeffs, 0):
        return Tier.NotInSpace
    if summable(spectrum, coeffs, 2):
        return Tier.Range
    if summable(spectrum, coeffs, 1):
        return Tier.SqrtRangeOnly
    return Tier.ClosureOnly


def sqrt_image(spectrum, coeffs) -> DecayModel:
    """Coefficient model of ``rho^{1/2} psi``: ``r_k^{1/2} a_k``."""
    spectrum, coeffs = as_spectrum(spectrum), as_model(coeffs)
    if classify_vector(spectrum, coeffs) is Tier.NotInSpace:
        raise NotInDomain(f"{format_model(coeffs)} is not square-summable")
    coeffs = _on_spectrum_support(spectrum, coeffs)
    return coeffs * spectrum.decay ** Fraction(1, 2)


def correlation_image(coeffs) -> DecayModel:
    """Coefficient model of ``U psi`` in the partner eigenbasis.

    The correlation operator only conjugates coefficients, so magnitudes and
    hence the model are unchanged.
    """
    return as_model(coeffs)


def steering_image(spectrum, coeffs) -> tuple[DecayModel, tuple[Tier, Tier]]:
    """Image under the steering map ``rho2^{1/2} U Q1`` with both spectra equal."""
    spectrum, coeffs = as_spectrum(spectrum), as_model(coeffs)
    source = classify_vector(spectrum, coeffs)
    if source is Tier.NotInSpace:
        raise NotInDomain(f"{format_model(coeffs)} is not square-summable")
    image = sqrt_image(spectrum, correlation_image(coeffs))
    return image, (source, classify_vector(spectrum, image))


# tier each map sends its source tier into
SQRT_ARROWS = {
    Tier.ClosureOnly: Tier.SqrtRangeOnly,
    Tier.SqrtRangeOnly: Tier.Range,
    Tier.Range: Tier.Range,
}


@dataclass
class PartitionReport:
    spectrum: SpectralModel
    samples: list[DecayModel]
    tiers: list[Tier]
    consistent: bool
    groups: dict[Tier, list[int]] = field(default_factory=dict)

    def counts(self) -> dict[str, int]:
        return {t.value: len(self.groups.get(t, [])) for t in Tier}

    def table(self) -> str:
        rows = [("#", "coefficients", "s=0", "s=1", "s=2", "tier")]
        for i, (m, t) in enumerate(zip(self.samples, self.tiers)):
            flags = ["yes" if summable(self.spectrum, m, s) else "no" for s in (0, 1, 2)]
            rows.append((str(i), format_model(m), *flags, t.value))
        widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return f"spectrum {self.spectrum}\n" + "\n".join(lines)


def decomposition_report(spectrum, samples: Sequence) -> PartitionReport:
    """Sort sample vectors into the disjoint pieces of the closure of R(rho)."""
    spectrum = as_spectrum(spectrum)
    models = [as_model(m) for m in samples]
    if not models:
        raise ValueError("need at least one sample")
    tiers = [classify_vector(spectrum, m) for m in models]
    groups: dict[Tier, list[int]] = {t: [] for t in Tier}
    for i, t in enumerate(tiers):
        groups[t].append(i)
    consistent = True
    for m, t in zip(models, tiers):
        s0, s1, s2 = (summable(spectrum, m, s) for s in (0, 1, 2))
        if (s2 and not s1) or (s1 and not s0):
            consistent = False
        pieces = [s2, s1 and not s2, s0 and not s1]
        if s0 and sum(pieces) != 1:
            consistent = False
        expected = [Tier.Range, Tier.SqrtRangeOnly, Tier.ClosureOnly][pieces.index(True)] if s0 else Tier.NotInSpace
        if expected is not t:
            consistent = False
    return PartitionReport(spectrum, models, tiers, consistent, groups)


# -- numerical shadow ----------------------------------------------------------

def log_partial_sums(spectrum, coeffs, s, count: int) -> np.ndarray:
    """``log sum_{k<=K} |a_k|^2 r_k^-s`` for ``K = 1..count``, evaluated in floats."""
    spectrum, coeffs = as_spectrum(spectrum), as_model(coeffs)
    log_terms = 2 * coeffs.log_terms(count) - float(s) * spectrum.decay.log_terms(count)
    if spectrum.finite_rank is not None:
        log_terms[spectrum.finite_rank:] = -np.inf
    return np.logaddexp.accumulate(log_terms)


def doubling_ratios(spectrum, coeffs, s, exponents=range(4, 13)) -> np.ndarray:
    """``S(2K) / S(K)`` for consecutive ``K = 2^e`` in ``exponents``."""
    exponents = list(exponents)
    sums = log_partial_sums(spectrum, coeffs, s, 2 ** max(exponents))
    logs = np.array([sums[2 ** e - 1] for e in exponents])
    with np.errstate(invalid="ignore", over="ignore"):
        ratios = np.exp(np.diff(logs))
    return np.where(np.isnan(ratios), 1.0, ratios)


# -- text syntax -----------------------------------------------------------------

def _parse_number(text: str, source: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{source}: {text.strip()!r} is not a decimal number") from None
    return value


def parse_model(text: str) -> DecayModel:
    """Parse ``pow:q``, ``exp:d``, ``powexp:q,d`` or ``finite:v1,v2,...``."""
    source = repr(text)
    kind, sep, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if not sep or not rest.strip():
        raise ParseError(f"{source}: expected '<kind>:<parameters>'")
    params = [_parse_number(p, source) for p in rest.split(",")]
    try:
        if kind == "pow" and len(params) == 1:
            return DecayModel.power_law(params[0])
        if kind == "exp" and len(params) == 1:
            return DecayModel.exponential(params[0])
        if kind == "powexp" and len(params) == 2:
            return DecayModel.power_exp(*params)
        if kind == "finite":
            return DecayModel.finite([float(p) for p in params])
    except InvalidModel as exc:
        raise ParseError(f"{source}: {exc}") from None
    raise ParseError(f"{source}: unknown kind {kind!r} or wrong parameter count")


def format_model(model: DecayModel) -> str:
    if model.values is not None:
        return "finite:" + ",".join(_format_number(v) for v in model.values)
    kind = model.kind
    if kind == "pow":
        return f"pow:{_format_number(model.power)}"
    if kind == "exp":
        return f"exp:{_format_number(model.base)}"
    return f"powexp:{_format_number(model.power)},{_format_number(model.base)}"
