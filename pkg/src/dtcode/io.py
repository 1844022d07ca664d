"""JSON formats for channel specs and codebooks."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .channel import ChannelSpec, InputAlphabet, InterferenceAlphabet, StateCombiner
from .errors import InvariantViolation, ParseError


def _reject_unknown(obj: dict, allowed: set[str], where: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        prefix = f"{where}." if where else ""
        raise InvariantViolation(prefix + extra[0], "unknown field")


def _reals(value, field: str) -> tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise InvariantViolation(field, "expected a nonempty list of numbers")
    out = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise InvariantViolation(field, f"not a finite number: {v!r}")
        out.append(float(v))
    return tuple(out)


def spec_from_dict(obj: Any) -> ChannelSpec:
    if not isinstance(obj, dict):
        raise InvariantViolation("<root>", "expected a JSON object")
    _reject_unknown(obj, {"input", "interference", "combiner", "sigma"}, "")
    for key in ("input", "interference"):
        if key not in obj:
            raise InvariantViolation(key, "missing required field")
    inputs = InputAlphabet(_reals(obj["input"], "input"))

    inter = obj["interference"]
    if not isinstance(inter, dict):
        raise InvariantViolation("interference", "expected an object")
    _reject_unknown(inter, {"values", "pmf"}, "interference")
    if "values" not in inter:
        raise InvariantViolation("interference.values", "missing required field")
    values = _reals(inter["values"], "interference.values")
    pmf = inter.get("pmf", "uniform")
    if pmf == "uniform":
        interference = InterferenceAlphabet(values, None)
    else:
        interference = InterferenceAlphabet(values, _reals(pmf, "interference.pmf"))

    comb = obj.get("combiner", "additive")
    if isinstance(comb, str):
        combiner = StateCombiner(comb)
    elif isinstance(comb, dict):
        _reject_unknown(comb, {"table"}, "combiner")
        table = comb.get("table")
        if not isinstance(table, list):
            raise InvariantViolation("combiner.table", "expected a list of rows")
        rows = tuple(_reals(row, f"combiner.table[{i}]") for i, row in enumerate(table))
        combiner = StateCombiner("tabulated", rows)
    else:
        raise InvariantViolation("combiner", "expected a string or an object with a table")

    sigma = obj.get("sigma")
    if sigma is not None and (isinstance(sigma, bool) or not isinstance(sigma, (int, float))):
        raise InvariantViolation("sigma", "expected a number")
    return ChannelSpec(inputs, interference, combiner, sigma)


def spec_to_dict(spec: ChannelSpec) -> dict:
    out: dict[str, Any] = {
        "input": list(spec.input.values),
        "interference": {"values": list(spec.interference.values),
                         "pmf": list(spec.interference.pmf)},
    }
    if spec.combiner.kind == "tabulated":
        out["combiner"] = {"table": [list(r) for r in spec.combiner.table]}
    else:
        out["combiner"] = spec.combiner.kind
    if spec.sigma is not None:
        out["sigma"] = spec.sigma
    return out


def _read_json(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def load_spec(path) -> ChannelSpec:
    return spec_from_dict(_read_json(path))


@dataclass(frozen=True)
class Codebook:
    """Ordered codewords; a symbol is an index tuple, or a bare input index."""

    codewords: tuple[tuple, ...]

    def __post_init__(self):
        cws = tuple(tuple(tuple(s) if isinstance(s, (list, tuple)) else s for s in cw)
                    for cw in self.codewords)
        object.__setattr__(self, "codewords", cws)

    @property
    def n(self) -> int:
        return len(self.codewords[0]) if self.codewords else 0

    def __len__(self):
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def __getitem__(self, i):
        return self.codewords[i]

    @property
    def raw(self) -> bool:
        """True when symbols are bare input indices."""
        return bool(self.codewords) and not isinstance(self.codewords[0][0], tuple)


def _index(v, field):
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise InvariantViolation(field, f"expected a nonnegative integer index, got {v!r}")
    return v


def codebook_from_dict(obj: Any) -> Codebook:
    if not isinstance(obj, dict):
        raise InvariantViolation("<root>", "expected a JSON object")
    _reject_unknown(obj, {"n", "codewords"}, "")
    if "codewords" not in obj:
        raise InvariantViolation("codewords", "missing required field")
    cws = obj["codewords"]
    if not isinstance(cws, list) or not cws:
        raise InvariantViolation("codewords", "expected a nonempty list")
    n = obj.get("n", None)
    if n is not None:
        _index(n, "n")
    out = []
    raw = None
    for i, cw in enumerate(cws):
        if not isinstance(cw, list) or not cw:
            raise InvariantViolation(f"codewords[{i}]", "expected a nonempty list of symbols")
        length = len(cw) if n is None else n
        if len(cw) != length or (out and len(cw) != len(out[0])):
            raise InvariantViolation(f"codewords[{i}]", "ragged codeword length")
        syms = []
        for j, s in enumerate(cw):
            field = f"codewords[{i}][{j}]"
            is_raw = not isinstance(s, list)
            if raw is None:
                raw = is_raw
            elif raw != is_raw:
                raise InvariantViolation(field, "mixes raw indices and symbol tuples")
            if is_raw:
                syms.append(_index(s, field))
            else:
                syms.append(tuple(_index(c, field) for c in s))
        out.append(tuple(syms))
    if not raw and len({len(s) for cw in out for s in cw}) != 1:
        raise InvariantViolation("codewords", "symbols have different lengths")
    return Codebook(tuple(out))


def codebook_to_dict(cb) -> dict:
    cws = [[list(s) if isinstance(s, tuple) else s for s in cw] for cw in cb]
    return {"n": len(cws[0]) if cws else 0, "codewords": cws}


def load_codebook(path) -> Codebook:
    return codebook_from_dict(_read_json(path))


def save_codebook(cb, path) -> None:
    Path(path).write_text(json.dumps(codebook_to_dict(cb)) + "\n")


def check_codebook(cb: Codebook, spec: ChannelSpec) -> None:
    """Validate codebook indices against a channel."""
    for i, cw in enumerate(cb):
        for j, s in enumerate(cw):
            field = f"codewords[{i}][{j}]"
            if isinstance(s, tuple):
                if len(s) != spec.Q:
                    raise InvariantViolation(field, f"symbol length {len(s)} != Q={spec.Q}")
                if any(c >= spec.M for c in s):
                    raise InvariantViolation(field, f"index out of range for M={spec.M}")
            elif s >= spec.M:
                raise InvariantViolation(field, f"index out of range for M={spec.M}")
