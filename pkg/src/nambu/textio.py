"""Text grammar for tensors and the structure-file schema.

Tensor grammar (parsing and canonical printing)::

    tensor :=  ['-'] term (('+' | '-') term)*  |  '0'
    term   :=  [poly '*'] blade  |  poly
    blade  :=  axis ('^' axis)*
    axis   :=  'dx' INT   (form basis)    |   'd' INT   (multivector basis)

so ``d1^d2`` is the bivector on indices (1,2), ``x3*d3`` a vector field,
``x1*dx1^dx2 - dx3^dx4`` a 2-form combination.  A ``poly`` coefficient is
any expression in the polynomial grammar; it must be parenthesized when it
contains '+' or '-' at top level.  Canonical printing orders blades by their
index tuples, omits unit coefficients, and prints the zero tensor as ``0``.

Structure files are JSON documents with schema tag ``nambu-structure/1``::

    {
      "schema": "nambu-structure/1",
      "dimension": 3,
      "order": 3,
      "lambda": [{"index": [1, 2, 3], "coeff": "x3"}],
      "volume": {"constant": "1", "exponent": "0"},      # optional
      "checks": ["fundamental-identity", ...],           # optional
      "jet_degree": 3                                    # optional
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ParseError
from .exterior import Form, Multivector
from .poly import Polynomial, format_polynomial, parse_polynomial

SCHEMA = "nambu-structure/1"


# -- tensor printing ----------------------------------------------------------


def _blade_text(indices: tuple[int, ...], kind: str) -> str:
    prefix = "dx" if kind == "form" else "d"
    return "^".join(f"{prefix}{i}" for i in indices)


def format_tensor(tensor) -> str:
    """Canonical text of a Form or Multivector."""
    kind = "form" if isinstance(tensor, Form) else "mv"
    if tensor.is_zero():
        return "0"
    if tensor.degree == 0:
        return format_polynomial(tensor.scalar())
    pieces: list[str] = []
    for indices in sorted(tensor.components):
        coeff = tensor.components[indices]
        blade = _blade_text(indices, kind)
        body, negative = _coefficient_text(coeff, blade)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces)


def _coefficient_text(coeff: Polynomial, blade: str) -> tuple[str, bool]:
    """Render one component; factor a single leading sign out when possible."""
    if coeff == Polynomial.one(coeff.num_vars):
        return blade, False
    if coeff == -Polynomial.one(coeff.num_vars):
        return blade, True
    if len(coeff.terms) == 1:
        [(exps, value)] = coeff.terms.items()
        magnitude = Polynomial.monomial(exps, abs(value))
        return f"{format_polynomial(magnitude)}*{blade}", value < 0
    return f"({format_polynomial(coeff)})*{blade}", False


# -- tensor parsing -----------------------------------------------------------


def parse_form(text: str, m: int, degree: int) -> Form:
    return _parse_tensor(text, m, degree, Form)


def parse_multivector(text: str, m: int, degree: int) -> Multivector:
    return _parse_tensor(text, m, degree, Multivector)


def _parse_tensor(text: str, m: int, degree: int, cls):
    text = text.strip()
    if not text:
        raise ParseError("empty tensor expression")
    result = cls.zero(m, degree)
    for sign, chunk in _split_terms(text):
        if chunk.strip() == "0":
            continue
        term = _parse_term(chunk.strip(), m, degree, cls)
        result = result + (term if sign > 0 else -term)
    return result


def _split_terms(text: str):
    """Split on top-level '+' and '-' (outside parentheses)."""
    depth = 0
    sign = 1
    start = 0
    terms: list[tuple[int, str]] = []
    i = 0
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        start = 1
        i = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", location=f"column {i + 1}")
        elif ch in "+-" and depth == 0:
            terms.append((sign, text[start:i]))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    if depth:
        raise ParseError("unbalanced '('")
    terms.append((sign, text[start:]))
    return terms


def _parse_term(chunk: str, m: int, degree: int, cls):
    if not chunk:
        raise ParseError("empty term in tensor expression")
    # Split coefficient from the blade: the blade is the trailing run of
    # axis factors joined by '^'; everything before the '*' that precedes
    # the first axis symbol is the polynomial coefficient.
    blade_start = _find_blade(chunk, cls)
    if blade_start is None:
        if degree != 0:
            raise ParseError(
                f"term {chunk!r} has no basis blade but tensor degree is {degree}"
            )
        return cls.from_scalar(parse_polynomial(chunk, m))
    coeff_text = chunk[:blade_start].rstrip()
    if coeff_text.endswith("*"):
        coeff_text = coeff_text[:-1].rstrip()
    coeff = parse_polynomial(coeff_text, m) if coeff_text else Polynomial.one(m)
    indices = _parse_blade(chunk[blade_start:], m, cls)
    if len(indices) != degree:
        raise ParseError(
            f"blade {chunk[blade_start:]!r} has degree {len(indices)}, expected {degree}"
        )
    return cls.basis(m, indices) * coeff


def _find_blade(chunk: str, cls) -> int | None:
    """Index where the trailing blade starts, or None for a pure scalar."""
    marker = "dx" if cls is Form else "d"
    depth = 0
    for i, ch in enumerate(chunk):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch == "d":
            if cls is Form and chunk.startswith("dx", i) and _digits_follow(chunk, i + 2):
                return i
            if cls is Multivector and not chunk.startswith("dx", i) and _digits_follow(
                chunk, i + 1
            ):
                return i
    return None


def _digits_follow(chunk: str, i: int) -> bool:
    return i < len(chunk) and chunk[i].isdigit()


def _parse_blade(text: str, m: int, cls) -> tuple[int, ...]:
    indices: list[int] = []
    for axis in text.split("^"):
        axis = axis.strip()
        prefix = "dx" if cls is Form else "d"
        if not axis.startswith(prefix) or not axis[len(prefix) :].isdigit():
            raise ParseError(f"malformed basis axis {axis!r}")
        index = int(axis[len(prefix) :])
        if not 1 <= index <= m:
            raise ParseError(f"axis index {index} outside chart of dimension {m}")
        indices.append(index)
    if len(set(indices)) != len(indices):
        raise ParseError(f"repeated index in blade {text!r}")
    if indices != sorted(indices):
        raise ParseError(f"blade indices must be strictly increasing in {text!r}")
    return tuple(indices)


# -- structure files ----------------------------------------------------------


@dataclass(frozen=True)
class StructureFile:
    """Validated content of a structure file."""

    dimension: int
    order: int
    nvector: Multivector
    volume_constant: Fraction
    volume_exponent: Polynomial
    checks: tuple[str, ...] | None
    jet_degree: int | None

    def structure(self):
        from .structure import NambuStructure

        return NambuStructure(self.dimension, self.order, self.nvector)

    def volume(self):
        from .cohomology import VolumeForm

        return VolumeForm(self.volume_constant, self.volume_exponent)


def load_structure_text(text: str) -> StructureFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return load_structure_dict(doc)


def load_structure_file(path: str | Path) -> StructureFile:
    return load_structure_text(Path(path).read_text(encoding="utf-8"))


def _require(doc: dict, key: str, kind, location: str):
    if key not in doc:
        raise ParseError(f"missing required field {key!r}", location=location)
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(
            f"field {key!r} must be of type {kind.__name__}", location=f"{location}.{key}"
        )
    return value


def load_structure_dict(doc: Any) -> StructureFile:
    if not isinstance(doc, dict):
        raise ParseError("structure file must be a JSON object", location="$")
    schema = _require(doc, "schema", str, "$")
    if schema != SCHEMA:
        raise ParseError(f"unsupported schema {schema!r}, expected {SCHEMA!r}", "$.schema")
    m = _require(doc, "dimension", int, "$")
    n = _require(doc, "order", int, "$")
    if m < 1:
        raise ParseError("dimension must be positive", "$.dimension")
    if not 2 <= n <= m:
        raise ParseError(f"order must satisfy 2 <= n <= dimension, got {n}", "$.order")
    entries = _require(doc, "lambda", list, "$")
    components: dict[tuple[int, ...], Polynomial] = {}
    for pos, entry in enumerate(entries):
        location = f"$.lambda[{pos}]"
        if not isinstance(entry, dict):
            raise ParseError("component must be an object", location)
        index = _require(entry, "index", list, location)
        if len(index) != n or not all(isinstance(i, int) for i in index):
            raise ParseError(f"index must list {n} integers", f"{location}.index")
        if any(a >= b for a, b in zip(index, index[1:])):
            raise ParseError("index must be strictly increasing", f"{location}.index")
        if not all(1 <= i <= m for i in index):
            raise ParseError(f"index entries must lie in 1..{m}", f"{location}.index")
        key = tuple(index)
        if key in components:
            raise ParseError(f"duplicate index {index}", f"{location}.index")
        coeff_text = _require(entry, "coeff", str, location)
        try:
            coeff = parse_polynomial(coeff_text, m)
        except ParseError as exc:
            raise ParseError(str(exc), f"{location}.coeff") from exc
        components[key] = coeff
    nvector = Multivector(m, n, components)

    constant = Fraction(1)
    exponent = Polynomial.zero(m)
    if "volume" in doc:
        volume = doc["volume"]
        if not isinstance(volume, dict):
            raise ParseError("volume must be an object", "$.volume")
        if "constant" in volume:
            text = volume["constant"]
            if not isinstance(text, str):
                raise ParseError("volume constant must be a string", "$.volume.constant")
            try:
                constant = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"invalid rational {text!r}", "$.volume.constant") from exc
            if constant == 0:
                raise ParseError("volume constant must be nonzero", "$.volume.constant")
        if "exponent" in volume:
            text = volume["exponent"]
            if not isinstance(text, str):
                raise ParseError("volume exponent must be a string", "$.volume.exponent")
            try:
                exponent = parse_polynomial(text, m)
            except ParseError as exc:
                raise ParseError(str(exc), "$.volume.exponent") from exc

    checks: tuple[str, ...] | None = None
    if "checks" in doc:
        raw = doc["checks"]
        if not isinstance(raw, list) or not all(isinstance(c, str) for c in raw):
            raise ParseError("checks must be a list of strings", "$.checks")
        checks = tuple(raw)

    jet_degree: int | None = None
    if "jet_degree" in doc:
        raw = doc["jet_degree"]
        if not isinstance(raw, int) or isinstance(raw, bool) or raw < 2:
            raise ParseError("jet_degree must be an integer >= 2", "$.jet_degree")
        jet_degree = raw

    return StructureFile(
        dimension=m,
        order=n,
        nvector=nvector,
        volume_constant=constant,
        volume_exponent=exponent,
        checks=checks,
        jet_degree=jet_degree,
    )
