"""Flat ``name = value`` text format used for parameters, configs and scenarios.

One assignment per line, ``#`` starts a comment, dotted keys give section
structure (``controller.H = 40``).  Values are parsed as bool, int, float or
bare string, in that order.  Serialization is deterministic (keys written in
the order given) so files round-trip byte-identically.
"""

from __future__ import annotations

from .errors import ConfigError


def parse_value(text: str):
    text = text.strip()
    low = text.lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))  # normalizes numpy scalars too
    return str(value)


def loads(text: str) -> dict:
    """Parse key-value text into a flat dict keyed by the dotted names."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'name = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = parse_value(value)
    return out


def dumps(items: dict, header: str | None = None) -> str:
    lines = []
    if header:
        for h in header.splitlines():
            lines.append(f"# {h}")
    for key, value in items.items():
        lines.append(f"{key} = {format_value(value)}")
    return "\n".join(lines) + "\n"


def load(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(items: dict, path, header: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(items, header=header))


def apply_overrides(items: dict, overrides) -> dict:
    """Apply ``key=value`` strings on top of a flat dict, returning a copy."""
    merged = dict(items)
    for entry in overrides:
        if "=" not in entry:
            raise ConfigError(f"override must look like key=value, got {entry!r}")
        key, _, value = entry.partition("=")
        merged[key.strip()] = parse_value(value)
    return merged
