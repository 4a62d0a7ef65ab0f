"""Parser for the compact state description strings used by the CLI.

Grammar (modifiers apply left to right)::

    spec      := base ("+" modifier)*
    base      := "ghz:" N | "sps:" AXES ":" SIGNS | "haar:" N ":" SEED
               | "json:" PATH
    modifier  := "depol:" LAMBDA | "mix:" WEIGHT ":" base

``mix`` forms ``(1 - weight) * current + weight * other``.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .pauli import StabilizerProductState
from .states import (
    QuantumState,
    apply_depolarizing,
    ghz,
    make_sps,
    mix,
    random_pure,
    state_from_json,
)

__all__ = ["StateSpecError", "parse_state_spec", "planted_state"]


class StateSpecError(ValueError):
    pass


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise StateSpecError(f"bad {what}: {text!r}") from None


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise StateSpecError(f"bad {what}: {text!r}") from None


def _parse_base(text: str) -> QuantumState:
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "ghz" and len(args) == 1:
            return ghz(_int(args[0], "qubit count"))
        if kind == "sps" and len(args) == 2:
            return make_sps(StabilizerProductState.from_strings(args[0], args[1]))
        if kind == "haar" and len(args) == 2:
            n = _int(args[0], "qubit count")
            seed = _int(args[1], "seed")
            return random_pure(n, np.random.default_rng(seed))
        if kind == "json" and rest:
            return state_from_json(Path(rest).read_text())
    except StateSpecError:
        raise
    except (ValueError, OSError) as exc:
        raise StateSpecError(f"{text!r}: {exc}") from None
    raise StateSpecError(f"unrecognized state {text!r}")


def parse_state_spec(spec: str) -> QuantumState:
    """Build a state from e.g. ``"sps:XYZYZ:01001+depol:0.1"``."""
    base, *mods = spec.strip().split("+")
    rho = _parse_base(base)
    for mod in mods:
        name, _, rest = mod.partition(":")
        if name == "depol":
            lam = _float(rest, "depolarizing strength")
            if not 0 <= lam <= 1:
                raise StateSpecError(f"depolarizing strength {lam} outside [0, 1]")
            rho = apply_depolarizing(rho, lam)
        elif name == "mix":
            weight, _, other = rest.partition(":")
            w = _float(weight, "mixture weight")
            sigma = _parse_base(other)
            if sigma.n != rho.n or not 0 <= w <= 1:
                raise StateSpecError(f"cannot mix {other!r} with weight {weight}")
            rho = mix(rho, sigma, w)
        else:
            raise StateSpecError(f"unrecognized modifier {mod!r}")
    return rho


def planted_state(spec: str) -> StabilizerProductState | None:
    """The stabilizer product state named by an ``sps:`` base, if any."""
    base = spec.strip().split("+")[0]
    kind, _, rest = base.partition(":")
    if kind != "sps":
        return None
    axes, _, signs = rest.partition(":")
    return StabilizerProductState.from_strings(axes, signs)
