"""Operator config files.

Line-based key = value grammar ('#' starts a comment). Every file picks one
operator kind and the keys that kind needs:

    kind = laurent          coefficients = a0, a1, ..., aK   (a_{-k} = a_k)
    kind = symbol           shape = cosines | square
                            cosines: coefficients = c0, c1, ...  (f = c0 + sum c_k cos kx)
                            square:  low, high, jump (radians, f even)
                            band = K (default len(coefficients)-1 for cosines)
                            quadrature_points = N (default 4096)
    kind = almost_mathieu   theta = t
                            potential = zero | linear:c | cosine:c | step:a,b
    kind = permutation      limit = N

Symbol configs also expose the symbol itself, which the Szego command needs;
the operator is the Laurent matrix of the band-K Fourier coefficients.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .compression import Filtration
from .errors import ConfigError
from .operators import (
    BILATERAL,
    UNILATERAL,
    SymbolSpec,
    almost_mathieu_operator,
    appendix_permutation,
    fourier_coefficients,
    laurent_operator,
    make_potential,
    permutation_operator,
)

DEFAULT_QUADRATURE_POINTS = 4096


@dataclass(frozen=True)
class BuiltOperator:
    kind: str
    spec: object
    filtration: Filtration
    symbol: Optional[SymbolSpec] = None
    echo: Optional[dict] = None


def parse_config_text(text: str) -> dict:
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        cfg[key.strip().lower()] = value.strip()
    return cfg


def parse_config_file(path) -> dict:
    with open(path) as fh:
        return parse_config_text(fh.read())


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _require(cfg, key, kind):
    if key not in cfg:
        raise ConfigError(f"kind={kind} requires key {key!r}")
    return cfg[key]


def _cosine_symbol(coeffs):
    c = np.asarray(coeffs, dtype=float)

    def f(x, _c=c):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, _c[0])
        for k in range(1, _c.size):
            out = out + _c[k] * np.cos(k * x)
        return out

    return f


def _square_symbol(low, high, jump):
    if not (0.0 < jump < math.pi):
        raise ConfigError("square symbol jump must lie in (0, pi)")

    def f(x, _lo=low, _hi=high, _j=jump):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= _j, _hi, _lo)

    return f


def build_operator(cfg: dict) -> BuiltOperator:
    """Instantiate the operator (and symbol, when there is one) a parsed
    config describes."""
    kind = cfg.get("kind")
    if kind is None:
        raise ConfigError("config must set kind")
    kind = kind.strip().lower()
    echo = dict(sorted(cfg.items()))

    if kind == "laurent":
        half = _floats(_require(cfg, "coefficients", kind))
        if not half:
            raise ConfigError("laurent needs at least a_0")
        full = half[:0:-1] + half
        spec = laurent_operator(full)
        return BuiltOperator(kind, spec, Filtration(BILATERAL), echo=echo)

    if kind == "symbol":
        shape = cfg.get("shape", "cosines").strip().lower()
        npts = int(cfg.get("quadrature_points", DEFAULT_QUADRATURE_POINTS))
        if shape == "cosines":
            coeffs = _floats(_require(cfg, "coefficients", kind))
            if not coeffs:
                raise ConfigError("cosines symbol needs coefficients")
            f = _cosine_symbol(coeffs)
            band = int(cfg.get("band", len(coeffs) - 1))
        elif shape == "square":
            low = float(_require(cfg, "low", kind))
            high = float(_require(cfg, "high", kind))
            jump = float(_require(cfg, "jump", kind))
            f = _square_symbol(low, high, jump)
            band = int(_require(cfg, "band", kind))
        else:
            raise ConfigError(f"unknown symbol shape {shape!r}")
        sym = SymbolSpec(f, quadrature_points=npts)
        spec = laurent_operator(fourier_coefficients(sym, band))
        return BuiltOperator(kind, spec, Filtration(BILATERAL), symbol=sym, echo=echo)

    if kind == "almost_mathieu":
        theta = float(_require(cfg, "theta", kind))
        v = make_potential(cfg.get("potential", "zero"))
        spec = almost_mathieu_operator(v, theta)
        return BuiltOperator(kind, spec, Filtration(BILATERAL), echo=echo)

    if kind == "permutation":
        limit = int(_require(cfg, "limit", kind))
        spec = permutation_operator(appendix_permutation(limit))
        return BuiltOperator(kind, spec, Filtration(UNILATERAL), echo=echo)

    raise ConfigError(f"unknown operator kind {kind!r}")


def build_operator_file(path) -> BuiltOperator:
    return build_operator(parse_config_file(path))
