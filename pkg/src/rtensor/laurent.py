"""Laurent polynomials in one variable N with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction


class Laurent:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(e)] = clean.get(int(e), 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent({0: other})
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent({e: c * Fraction(other) for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent({0: other})
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __call__(self, N):
        N = Fraction(N)
        return sum((c * N ** e for e, c in self.terms.items()), Fraction(0))

    @property
    def leading_exponent(self):
        return max(self.terms) if self.terms else None

    @property
    def leading_coefficient(self):
        return self.terms[max(self.terms)] if self.terms else Fraction(0)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.terms.values())

    def to_dict(self):
        return {str(e): str(c) for e, c in sorted(self.terms.items(), reverse=True)}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                var = "N" if e == 1 else f"N^{e}"
                body = var if a == 1 else f"{a}{var}" if a.denominator == 1 else f"({a}){var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__
