"""Resource budgets.

Precedence: explicit argument > CLI flag > config file > environment > default.
The config file is plain ``key = value`` lines (``#`` starts a comment)::

    max_states = 20000000
    max_product_states = 5000000
    time_limit = 600
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import DomainError

DEFAULT_MAX_STATES = 20_000_000
DEFAULT_MAX_PRODUCT_STATES = 5_000_000


@dataclass(frozen=True)
class Budgets:
    max_states: int = DEFAULT_MAX_STATES
    max_product_states: int = DEFAULT_MAX_PRODUCT_STATES
    time_limit: float | None = None


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        raise DomainError(f"{name} must be an integer, got {raw!r}") from None


def from_env() -> Budgets:
    return Budgets(
        max_states=_env_int("PURSUIT_BUDGET_STATES", DEFAULT_MAX_STATES),
        max_product_states=_env_int("PURSUIT_BUDGET_PRODUCT_STATES", DEFAULT_MAX_PRODUCT_STATES),
    )


def parse_config(text: str, base: Budgets | None = None) -> Budgets:
    base = base or from_env()
    known = {f.name: f for f in fields(Budgets)}
    updates = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        try:
            updates[key] = float(value) if key == "time_limit" else int(value.replace("_", ""))
        except ValueError:
            raise DomainError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return replace(base, **updates)


def load_config(path) -> Budgets:
    with open(path) as fh:
        return parse_config(fh.read())


_current: Budgets | None = None


def current() -> Budgets:
    return _current if _current is not None else from_env()


def set_current(b: Budgets | None) -> None:
    global _current
    _current = b
