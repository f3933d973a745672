"""Alternating forms on an n-dimensional space over a ScalarField.

A KForm is a sparse map from strictly increasing 1-based index tuples to
Scalar coefficients.  Index tuples are 1-based so that catalog data can
be transcribed verbatim in the e^1..e^n coframe notation.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeZero, DimensionMismatch, IndexOutOfRange, ParseError
from .scalars import QQ, Scalar, ast_to_scalar, parse_expression, tokenize


def merge_sign(left, right):
    """Concatenate two strictly increasing tuples, returning (sign, merged)
    with the shuffle sign, or (0, None) when an index repeats."""
    sign = 1
    merged = []
    i, j = 0, 0
    while i < len(left) and j < len(right):
        a, b = left[i], right[j]
        if a == b:
            return 0, None
        if a < b:
            merged.append(a)
            i += 1
        else:
            # right[j] jumps over the remaining len(left)-i entries of left
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(b)
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return sign, tuple(merged)


class KForm:
    """Alternating k-form with Scalar coefficients."""

    __slots__ = ("field", "dim", "degree", "coeffs")

    def __init__(self, field, dim, degree, coeffs=None):
        if not 0 <= degree <= dim:
            # forms of degree > dim are identically zero; normalize the range
            degree = max(0, min(degree, dim))
            coeffs = {}
        self.field = field
        self.dim = dim
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 1 <= i <= dim for i in idx):
                raise IndexOutOfRange(f"bad index tuple {idx} for degree {degree}, dim {dim}")
            if any(idx[t] >= idx[t + 1] for t in range(len(idx) - 1)):
                raise IndexOutOfRange(f"index tuple {idx} is not strictly increasing")
            if not c.is_zero():
                clean[idx] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(field, dim, degree):
        return KForm(field, dim, degree, {})

    @staticmethod
    def basis(field, dim, indices, coeff=1):
        indices = tuple(indices)
        c = coeff if isinstance(coeff, Scalar) else field.scalar(coeff)
        return KForm(field, dim, len(indices), {indices: c})

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, KForm) and self.dim == other.dim
                and self.degree == other.degree and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.coeffs.items())))

    def _check_compatible(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch(f"dim {self.dim} vs {other.dim}")

    # -- linear structure -----------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise DimensionMismatch(f"degree {self.degree} vs {other.degree}")
        coeffs = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            s = coeffs.get(idx)
            s = c if s is None else s + c
            if s.is_zero():
                coeffs.pop(idx, None)
            else:
                coeffs[idx] = s
        return KForm(self.field, self.dim, self.degree, coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return KForm(self.field, self.dim, self.degree,
                     {i: -c for i, c in self.coeffs.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            scalar = self.field.scalar(scalar)
        if not isinstance(scalar, Scalar):
            return NotImplemented
        return KForm(self.field, self.dim, self.degree,
                     {i: c * scalar for i, c in self.coeffs.items()})

    __rmul__ = __mul__

    # -- exterior operations ---------------------------------------------------

    def wedge(self, other):
        self._check_compatible(other)
        degree = self.degree + other.degree
        if degree > self.dim:
            return KForm.zero(self.field, self.dim, self.dim)
        coeffs = {}
        for i1, c1 in self.coeffs.items():
            for i2, c2 in other.coeffs.items():
                sign, merged = merge_sign(i1, i2)
                if sign == 0:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                s = coeffs.get(merged)
                s = c if s is None else s + c
                if s.is_zero():
                    coeffs.pop(merged, None)
                else:
                    coeffs[merged] = s
        return KForm(self.field, self.dim, degree, coeffs)

    def interior(self, vector):
        """Interior product with a coordinate vector (length = dim)."""
        if self.degree == 0:
            raise DegreeZero("cannot contract a 0-form")
        if len(vector) != self.dim:
            raise DimensionMismatch(f"vector length {len(vector)} vs dim {self.dim}")
        out = KForm.zero(self.field, self.dim, self.degree - 1)
        for idx, c in self.coeffs.items():
            for pos, i in enumerate(idx):
                x = vector[i - 1]
                if isinstance(x, (int, Fraction)):
                    x = self.field.scalar(x)
                if x.is_zero():
                    continue
                term = c * x
                if pos % 2:
                    term = -term
                rest = idx[:pos] + idx[pos + 1:]
                out = out + KForm(self.field, self.dim, self.degree - 1, {rest: term})
        return out

    def __call__(self, *vectors):
        """Evaluate on degree-many coordinate vectors; returns a Scalar."""
        if len(vectors) != self.degree:
            raise DimensionMismatch(f"{self.degree}-form applied to {len(vectors)} vectors")
        form = self
        for v in vectors:
            if form.degree == 0:
                break
            form = form.interior(v)
        return form.coeffs.get((), self.field.zero())

    # -- coefficient maps ----------------------------------------------------------

    def map_coeffs(self, fn, field=None):
        field = field or self.field
        out = {}
        for idx, c in self.coeffs.items():
            v = fn(c)
            if not v.is_zero():
                out[idx] = v
        return KForm(field, self.dim, self.degree, out)

    def instantiate(self, assignment):
        """Evaluate all coefficients at a rational point; result lives over QQ."""
        return self.map_coeffs(lambda c: QQ.scalar(c.eval(assignment)), QQ)

    def subs(self, assignment):
        return self.map_coeffs(lambda c: c.subs(assignment))

    # -- printing -------------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            atom = "e" + "".join(str(i) for i in idx) if idx else "1"
            if c == self.field.one():
                pieces.append(atom)
            elif c == -self.field.one():
                pieces.append(f"-{atom}")
            else:
                cs = str(c)
                if any(ch in cs for ch in "+- ") and not (cs.startswith("-") and " " not in cs):
                    cs = f"({cs})"
                pieces.append(f"{cs}*{atom}")
        out = pieces[0]
        for p in pieces[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = __str__


def wedge(a, b):
    return a.wedge(b)


def interior_product(vector, a):
    return a.interior(vector)


def basis_tuples(dim, degree):
    """All strictly increasing index tuples, in lexicographic order."""
    out = []

    def rec(start, prefix):
        if len(prefix) == degree:
            out.append(tuple(prefix))
            return
        for i in range(start, dim + 1):
            prefix.append(i)
            rec(i + 1, prefix)
            prefix.pop()

    rec(1, [])
    return out


# -- textual form syntax ------------------------------------------------------------
#
# Sums of terms `coefficient*eIJK` in the scalars expression grammar,
# e.g. "s*e12 + e34", "-e4", "(t1^2+t2^2-t4)/t4^2*e12".  A bare "0"
# denotes the zero form of the requested degree.


def parse_form(field, dim, text, degree=None):
    ast = parse_expression(text)
    kind, value = _form_from_ast(ast, field, dim)
    if kind == "scalar":
        if value.is_zero():
            return KForm.zero(field, dim, degree if degree is not None else 0)
        raise ParseError(f"expression {text!r} has no basis form factor")
    if degree is not None and value.degree != degree and not value.is_zero():
        raise ParseError(f"expected a {degree}-form in {text!r}, got degree {value.degree}")
    return value


def _is_form_atom(name, dim):
    if len(name) < 2 or name[0] != "e" or not name[1:].isdigit():
        return None
    indices = tuple(int(d) for d in name[1:])
    if any(not 1 <= i <= dim for i in indices):
        raise IndexOutOfRange(f"index out of range in {name!r} (dim {dim})")
    if any(indices[t] >= indices[t + 1] for t in range(len(indices) - 1)):
        raise ParseError(f"indices must be strictly increasing in {name!r}")
    return indices


def _form_from_ast(node, field, dim):
    op = node[0]
    if op == "num":
        return "scalar", field.scalar(node[1])
    if op == "var":
        indices = _is_form_atom(node[1], dim)
        if indices is not None:
            return "form", KForm.basis(field, dim, indices)
        return "scalar", field.var(node[1])
    if op == "neg":
        kind, v = _form_from_ast(node[1], field, dim)
        return kind, -v
    if op in ("add", "sub"):
        k1, v1 = _form_from_ast(node[1], field, dim)
        k2, v2 = _form_from_ast(node[2], field, dim)
        if k1 != k2:
            if k1 == "scalar" and v1.is_zero():
                return k2, (v2 if op == "add" else -v2)
            if k2 == "scalar" and v2.is_zero():
                return k1, v1
            raise ParseError("cannot add a scalar and a form")
        try:
            return k1, (v1 + v2 if op == "add" else v1 - v2)
        except DimensionMismatch as exc:
            raise ParseError(f"mixed degrees in a form expression: {exc}") from None
    if op == "mul":
        k1, v1 = _form_from_ast(node[1], field, dim)
        k2, v2 = _form_from_ast(node[2], field, dim)
        if k1 == "form" and k2 == "form":
            raise ParseError("wedge products are not part of the form syntax")
        if k1 == "form" or k2 == "form":
            return "form", v1 * v2 if k2 == "scalar" else v2 * v1
        return "scalar", v1 * v2
    if op == "div":
        k1, v1 = _form_from_ast(node[1], field, dim)
        k2, v2 = _form_from_ast(node[2], field, dim)
        if k2 == "form":
            raise ParseError("cannot divide by a form")
        if k1 == "form":
            return "form", v1 * (field.one() / v2)
        return "scalar", v1 / v2
    if op == "pow":
        kind, v = _form_from_ast(node[1], field, dim)
        if kind == "form":
            raise ParseError("form powers are not part of the form syntax")
        return "scalar", v ** node[2]
    if op == "call":
        raise ParseError(f"function {node[1]!r} is not allowed in forms")
    raise ParseError(f"bad expression node {op!r}")
