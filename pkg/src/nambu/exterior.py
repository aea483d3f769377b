"""Skew-symmetric tensor calculus with polynomial coefficients.

Forms and multivectors on an ``m``-dimensional chart are stored on strictly
increasing multi-indices only; permutation signs are computed when
components are assembled, never stored.  Degree-1 multivectors double as
vector fields.

Conventions (fixed once, used everywhere):

* pairing: ``<dx^I, d_J> = delta_IJ`` for increasing multi-indices, so
  ``pair(omega, P) = sum_I omega_I * P^I``;
* contraction of a form into a multivector is the adjoint of left wedge:
  ``<gamma, contract_form(alpha, P)> = <alpha ^ gamma, P>`` for every test
  form ``gamma``.  With this choice the Hamiltonian field of ``alpha``
  applied to ``f`` equals the full bracket pairing with no extra sign;
* interior product by a vector field is evaluation in the first slot:
  ``contract_vec(X, omega)(Y1, ..) = omega(X, Y1, ..)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import ChartMismatchError, DegreeError
from .poly import Polynomial

_Scalar = Union[int, Fraction, Polynomial]

# strictly increasing chart indices, 1-based
MultiIndex = tuple[int, ...]


def check_multi_index(indices: tuple[int, ...], m: int) -> None:
    if any(not 1 <= i <= m for i in indices):
        raise DegreeError(f"multi-index {indices} outside chart range 1..{m}")
    if any(a >= b for a, b in zip(indices, indices[1:])):
        raise DegreeError(f"multi-index {indices} is not strictly increasing")


def merge_sign(left: tuple[int, ...], right: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted union for concatenating two increasing multi-indices.

    Returns ``(0, ())`` when the indices overlap.  The sign is the parity of
    the permutation sorting ``left + right``, i.e. ``(-1)**inversions``.
    """
    inversions = 0
    for a in left:
        for b in right:
            if a == b:
                return 0, ()
            if a > b:
                inversions += 1
    merged = tuple(sorted(left + right))
    return (-1 if inversions % 2 else 1), merged


class _Alternating:
    """Shared implementation of forms and multivectors."""

    __slots__ = ("m", "degree", "components")

    def __init__(
        self,
        m: int,
        degree: int,
        components: Mapping[tuple[int, ...], Polynomial] | None = None,
    ):
        if m < 1:
            raise ValueError(f"chart dimension must be positive, got {m}")
        if degree < 0:
            raise DegreeError(f"tensor degree must be non-negative, got {degree}")
        normalized: dict[tuple[int, ...], Polynomial] = {}
        for indices, coeff in (components or {}).items():
            indices = tuple(indices)
            if len(indices) != degree:
                raise DegreeError(
                    f"multi-index {indices} has length {len(indices)}, expected {degree}"
                )
            check_multi_index(indices, m)
            if coeff.num_vars != m:
                raise ChartMismatchError(
                    f"coefficient on {coeff.num_vars} variables, chart has {m}"
                )
            if not coeff.is_zero():
                normalized[indices] = coeff
        if degree > m and normalized:
            raise DegreeError(f"nonzero tensor of degree {degree} > dimension {m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "components", normalized)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, m: int, degree: int):
        return cls(m, degree)

    @classmethod
    def basis(cls, m: int, indices: Iterable[int]):
        """Unit basis tensor on the given strictly increasing indices."""
        indices = tuple(indices)
        return cls(m, len(indices), {indices: Polynomial.one(m)})

    @classmethod
    def from_scalar(cls, value: Polynomial):
        return cls(value.num_vars, 0, {(): value})

    # -- linear structure ----------------------------------------------------

    def _check_compatible(self, other: _Alternating) -> None:
        if type(self) is not type(other):
            raise DegreeError(
                f"kind mismatch: {type(self).__name__} vs {type(other).__name__}"
            )
        if self.m != other.m:
            raise ChartMismatchError(f"chart dimension mismatch: {self.m} vs {other.m}")
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def _wrap(self, components: dict[tuple[int, ...], Polynomial], degree: int | None = None):
        tensor = type(self).__new__(type(self))
        object.__setattr__(tensor, "m", self.m)
        object.__setattr__(tensor, "degree", self.degree if degree is None else degree)
        object.__setattr__(tensor, "components", components)
        return tensor

    def __add__(self, other):
        self._check_compatible(other)
        result = dict(self.components)
        for indices, coeff in other.components.items():
            acc = result.get(indices)
            if acc is None:
                result[indices] = coeff
            else:
                acc = acc + coeff
                if acc.is_zero():
                    del result[indices]
                else:
                    result[indices] = acc
        return self._wrap(result)

    def __neg__(self):
        return self._wrap({i: -c for i, c in self.components.items()})

    def __sub__(self, other):
        self._check_compatible(other)
        return self + (-other)

    def __mul__(self, scalar: _Scalar):
        """Multiplication by a rational or polynomial scalar."""
        if isinstance(scalar, (int, Fraction)):
            scalar = Polynomial.constant(self.m, scalar)
        if not isinstance(scalar, Polynomial):
            return NotImplemented
        if scalar.num_vars != self.m:
            raise ChartMismatchError(
                f"scalar on {scalar.num_vars} variables, chart has {self.m}"
            )
        result: dict[tuple[int, ...], Polynomial] = {}
        for indices, coeff in self.components.items():
            product = coeff * scalar
            if not product.is_zero():
                result[indices] = product
        return self._wrap(result)

    __rmul__ = __mul__

    # -- queries -----------------------------------------------------------

    def component(self, indices: Iterable[int]) -> Polynomial:
        """Coefficient on an increasing multi-index (zero when absent)."""
        indices = tuple(indices)
        check_multi_index(indices, self.m)
        return self.components.get(indices, Polynomial.zero(self.m))

    def scalar(self) -> Polynomial:
        """The single coefficient of a degree-0 tensor."""
        if self.degree != 0:
            raise DegreeError(f"tensor has degree {self.degree}, not 0")
        return self.components.get((), Polynomial.zero(self.m))

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other: object) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return (
            self.m == other.m
            and self.degree == other.degree
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.m, self.degree,
                     frozenset(self.components.items())))

    def __repr__(self) -> str:
        from .textio import format_tensor

        return f"{type(self).__name__}({self.m}, {self.degree}, {format_tensor(self)!r})"


class Form(_Alternating):
    """Differential k-form with polynomial coefficients."""


class Multivector(_Alternating):
    """Skew-symmetric k-vector field with polynomial coefficients."""


def wedge(a, b):
    """Graded-skew wedge product of two tensors of the same kind."""
    if type(a) is not type(b):
        raise DegreeError(f"kind mismatch: {type(a).__name__} vs {type(b).__name__}")
    if a.m != b.m:
        raise ChartMismatchError(f"chart dimension mismatch: {a.m} vs {b.m}")
    degree = a.degree + b.degree
    result: dict[tuple[int, ...], Polynomial] = {}
    for ia, ca in a.components.items():
        for ib, cb in b.components.items():
            sign, merged = merge_sign(ia, ib)
            if sign == 0:
                continue
            product = ca * cb
            if sign < 0:
                product = -product
            acc = result.get(merged)
            if acc is None:
                acc = product
            else:
                acc = acc + product
            if acc.is_zero():
                result.pop(merged, None)
            else:
                result[merged] = acc
    # Degree overflow (> m) can only produce the zero tensor; keep the
    # nominal degree so callers see an exact zero of the expected grade.
    return type(a)(a.m, degree, result)


def pair(omega: Form, mv: Multivector) -> Polynomial:
    """Canonical pairing of a k-form with a k-vector."""
    if not isinstance(omega, Form) or not isinstance(mv, Multivector):
        raise DegreeError("pair expects (Form, Multivector)")
    if omega.m != mv.m:
        raise ChartMismatchError(f"chart dimension mismatch: {omega.m} vs {mv.m}")
    if omega.degree != mv.degree:
        raise DegreeError(f"degree mismatch: {omega.degree} vs {mv.degree}")
    total = Polynomial.zero(omega.m)
    small, large = omega.components, mv.components
    if len(large) < len(small):
        small, large = large, small
    for indices, coeff in small.items():
        other = large.get(indices)
        if other is not None:
            total = total + coeff * other
    return total


def contract_form(alpha: Form, mv: Multivector) -> Multivector:
    """Contraction ``i(alpha)P``, adjoint of left wedge on the form side.

    Defined by ``<gamma, i(alpha)P> = <alpha ^ gamma, P>`` for every form
    ``gamma`` of the complementary degree.
    """
    if not isinstance(alpha, Form) or not isinstance(mv, Multivector):
        raise DegreeError("contract_form expects (Form, Multivector)")
    if alpha.m != mv.m:
        raise ChartMismatchError(f"chart dimension mismatch: {alpha.m} vs {mv.m}")
    if alpha.degree > mv.degree:
        raise DegreeError(
            f"cannot contract degree {alpha.degree} form into degree {mv.degree} multivector"
        )
    result: dict[tuple[int, ...], Polynomial] = {}
    for ia, ca in alpha.components.items():
        index_set = set(ia)
        for ib, cb in mv.components.items():
            if not index_set.issubset(ib):
                continue
            rest = tuple(i for i in ib if i not in index_set)
            sign, _ = merge_sign(ia, rest)
            product = ca * cb
            if sign < 0:
                product = -product
            acc = result.get(rest)
            acc = product if acc is None else acc + product
            if acc.is_zero():
                result.pop(rest, None)
            else:
                result[rest] = acc
    return Multivector(mv.m, mv.degree - alpha.degree, result)


def contract_vec(vector: Multivector, omega: Form) -> Form:
    """Interior product ``i_X omega``: evaluation of ``omega`` in its first slot."""
    if not isinstance(vector, Multivector) or vector.degree != 1:
        raise DegreeError("contract_vec expects a degree-1 multivector")
    if not isinstance(omega, Form):
        raise DegreeError("contract_vec expects a Form")
    if vector.m != omega.m:
        raise ChartMismatchError(f"chart dimension mismatch: {vector.m} vs {omega.m}")
    if omega.degree < 1:
        raise DegreeError("cannot contract a vector into a 0-form")
    result: dict[tuple[int, ...], Polynomial] = {}
    for indices, coeff in omega.components.items():
        for position, j in enumerate(indices):
            xj = vector.components.get((j,))
            if xj is None:
                continue
            rest = indices[:position] + indices[position + 1 :]
            product = coeff * xj
            if position % 2:
                product = -product
            acc = result.get(rest)
            acc = product if acc is None else acc + product
            if acc.is_zero():
                result.pop(rest, None)
            else:
                result[rest] = acc
    return Form(omega.m, omega.degree - 1, result)


def differential(f: Polynomial) -> Form:
    """The exact 1-form df."""
    m = f.num_vars
    return Form(m, 1, {(j,): f.diff(j) for j in range(1, m + 1)})


def ext_d(omega: Form) -> Form:
    """Coordinate exterior derivative."""
    if not isinstance(omega, Form):
        raise DegreeError("ext_d expects a Form")
    result: dict[tuple[int, ...], Polynomial] = {}
    for indices, coeff in omega.components.items():
        for j in range(1, omega.m + 1):
            derivative = coeff.diff(j)
            if derivative.is_zero():
                continue
            sign, merged = merge_sign((j,), indices)
            if sign == 0:
                continue
            if sign < 0:
                derivative = -derivative
            acc = result.get(merged)
            acc = derivative if acc is None else acc + derivative
            if acc.is_zero():
                result.pop(merged, None)
            else:
                result[merged] = acc
    return Form(omega.m, omega.degree + 1, result)


def apply_vec(vector: Multivector, f: Polynomial) -> Polynomial:
    """Vector field acting on a function: ``sum_j X^j df/dx^j``."""
    if not isinstance(vector, Multivector) or vector.degree != 1:
        raise DegreeError("apply_vec expects a degree-1 multivector")
    if vector.m != f.num_vars:
        raise ChartMismatchError(f"chart dimension mismatch: {vector.m} vs {f.num_vars}")
    total = Polynomial.zero(vector.m)
    for (j,), coeff in vector.components.items():
        total = total + coeff * f.diff(j)
    return total


def lie_form(vector: Multivector, omega: Form) -> Form:
    """Lie derivative of a form, Cartan formula ``i_X d + d i_X``."""
    result = contract_vec(vector, ext_d(omega))
    if omega.degree >= 1:
        result = result + ext_d(contract_vec(vector, omega))
    return result


def lie_mv(vector: Multivector, mv: Multivector) -> Multivector:
    """Lie derivative of a multivector by the component formula.

    ``(L_X P)^I = X(P^I) - sum_s sum_j (d_j X^{i_s}) P^{i_1 .. j .. i_k}``
    where the replaced index string is re-sorted with its skew sign.
    For degree 1 this is the bracket of vector fields.
    """
    if not isinstance(vector, Multivector) or vector.degree != 1:
        raise DegreeError("lie_mv expects a degree-1 multivector")
    if not isinstance(mv, Multivector):
        raise DegreeError("lie_mv expects a Multivector")
    if vector.m != mv.m:
        raise ChartMismatchError(f"chart dimension mismatch: {vector.m} vs {mv.m}")
    m = mv.m
    result: dict[tuple[int, ...], Polynomial] = {}

    def accumulate(indices: tuple[int, ...], value: Polynomial) -> None:
        if value.is_zero():
            return
        acc = result.get(indices)
        acc = value if acc is None else acc + value
        if acc.is_zero():
            result.pop(indices, None)
        else:
            result[indices] = acc

    if mv.degree == 0:
        scalar = mv.components.get(())
        if scalar is not None:
            accumulate((), apply_vec(vector, scalar))
        return Multivector(m, 0, result)

    # derivatives[(j, i)] = d(X^i)/dx^j, nonzero entries only
    derivatives: dict[tuple[int, int], Polynomial] = {}
    for (i,), coeff in vector.components.items():
        for j in range(1, m + 1):
            partial = coeff.diff(j)
            if not partial.is_zero():
                derivatives[(j, i)] = partial
    for indices, coeff in mv.components.items():
        accumulate(indices, apply_vec(vector, coeff))
        # Stored component P^B feeds every output component obtained by
        # swapping one index ``old`` of B for a new index ``t``, weighted by
        # -d(X^t)/dx^old and the two re-sorting signs.
        for position, old in enumerate(indices):
            rest = indices[:position] + indices[position + 1 :]
            sign_old = -1 if position % 2 else 1
            for t in range(1, m + 1):
                partial = derivatives.get((old, t))
                if partial is None:
                    continue
                sign_t, merged = merge_sign((t,), rest)
                if sign_t == 0:
                    continue
                value = partial * coeff
                if sign_old * sign_t > 0:
                    value = -value
                accumulate(merged, value)
    return Multivector(m, mv.degree, result)
