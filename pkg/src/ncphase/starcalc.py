"""Deformed Moyal star-product calculus on the Gaussian-times-polynomial class.

Function values follow one convention everywhere:

    F(z) = prefactor * poly(z) * exp(z^T Q z)

with z = (x1, x2, p1, p2) in four dimensions or z = (x1, p1) in two, Q a real
symmetric matrix, and poly a sparse map from per-variable exponent tuples to
coefficients. Normalizable states have negative-definite Q.

The star product is the exponential of the bidifferential pairing built from
the antisymmetric deformation matrix B (hbar on x-p pairs, mu on x1-x2, nu on
p1-p2). Two product routes are implemented, covering every computation the
library needs while staying exactly testable:

  * a terminating series when one factor is a pure polynomial, and
  * the star-exponential group law for Gaussians generated by a shared
    two-square quadratic form (or a commuting family of them).

Intermediate series terms are genuinely complex; public helpers expose real
and imaginary parts separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

Monomial = tuple[int, ...]
PolyMap = dict[Monomial, complex]

# relative pruning threshold applied after differentiation passes
PRUNE_REL = 1e-15

# |k*s| may touch 1 (pure-state projector limit) but not exceed it
_UNIT_SLACK = 1e-9

_MATCH_RTOL = 1e-10


@dataclass(frozen=True)
class PhaseVariables:
    """Variable block and deformation constants of a phase space.

    dimension 4 means (x1, x2, p1, p2); dimension 2 means the reduced single
    pair (x1, p1), where only the hbar term of the star product survives, so
    mu and nu are forced to zero.
    """

    dimension: int
    hbar: float = 1.0
    mu: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.dimension not in (2, 4):
            raise ValueError("dimension must be 2 or 4")
        if not self.hbar > 0.0:
            raise ValueError("hbar must be strictly positive")
        if self.dimension == 2 and (self.mu != 0.0 or self.nu != 0.0):
            object.__setattr__(self, "mu", 0.0)
            object.__setattr__(self, "nu", 0.0)

    def deformation_matrix(self) -> np.ndarray:
        """Antisymmetric commutator matrix B with [z_a, z_b] = i*B_ab."""
        h, mu, nu = self.hbar, self.mu, self.nu
        if self.dimension == 2:
            return np.array([[0.0, h], [-h, 0.0]])
        return np.array(
            [
                [0.0, mu, h, 0.0],
                [-mu, 0.0, 0.0, h],
                [-h, 0.0, 0.0, nu],
                [0.0, -h, -nu, 0.0],
            ]
        )


def _prune(poly: Mapping[Monomial, complex]) -> PolyMap:
    if not poly:
        return {}
    top = max(abs(c) for c in poly.values())
    if top == 0.0:
        return {}
    cut = PRUNE_REL * top
    return {k: c for k, c in poly.items() if abs(c) > cut}


def _poly_add(a: PolyMap, b: PolyMap, scale: complex = 1.0) -> PolyMap:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0.0) + scale * c
        if s == 0.0:
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _poly_mul(a: PolyMap, b: PolyMap) -> PolyMap:
    out: PolyMap = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(e1 + e2 for e1, e2 in zip(k1, k2))
            out[k] = out.get(k, 0.0) + c1 * c2
    return out


def _poly_diff(poly: PolyMap, axis: int) -> PolyMap:
    out: PolyMap = {}
    for k, c in poly.items():
        if k[axis]:
            kk = list(k)
            kk[axis] -= 1
            out[tuple(kk)] = out.get(tuple(kk), 0.0) + c * k[axis]
    return out


@dataclass(frozen=True)
class GaussPoly:
    """Sparse polynomial times a centered Gaussian over a phase-variable block."""

    variables: PhaseVariables
    prefactor: float
    exponent: np.ndarray
    poly: PolyMap = field(default_factory=dict)

    def __post_init__(self):
        d = self.variables.dimension
        Q = np.asarray(self.exponent, dtype=float)
        if Q.shape != (d, d):
            raise ValueError(f"exponent must be {d}x{d}")
        if not np.allclose(Q, Q.T, atol=1e-12 * (1.0 + abs(Q).max())):
            raise ValueError("exponent matrix must be symmetric")
        object.__setattr__(self, "exponent", 0.5 * (Q + Q.T))
        object.__setattr__(self, "poly", _prune(self.poly))

    @classmethod
    def constant(cls, variables: PhaseVariables, value: float = 1.0) -> "GaussPoly":
        d = variables.dimension
        return cls(variables, 1.0, np.zeros((d, d)), {(0,) * d: value})

    @classmethod
    def gaussian(cls, variables: PhaseVariables, prefactor: float,
                 exponent: np.ndarray) -> "GaussPoly":
        d = variables.dimension
        return cls(variables, prefactor, exponent, {(0,) * d: 1.0})

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.poly), default=0)

    def is_pure_gaussian(self, tol: float = 1e-14) -> bool:
        """True when the polynomial part is a constant."""
        const = self.constant_coefficient()
        rest = sum(abs(c) for k, c in self.poly.items() if any(k))
        return rest <= tol * max(1.0, abs(const))

    def constant_coefficient(self) -> complex:
        d = self.variables.dimension
        return self.poly.get((0,) * d, 0.0)

    def scaled(self, factor: float) -> "GaussPoly":
        return GaussPoly(self.variables, self.prefactor * factor,
                         self.exponent, dict(self.poly))

    def __add__(self, other: "GaussPoly") -> "GaussPoly":
        if self.variables != other.variables:
            raise ValueError("cannot add functions over different variable blocks")
        scale = abs(self.exponent).max() + abs(other.exponent).max() + 1.0
        if not np.allclose(self.exponent, other.exponent, atol=1e-12 * scale):
            raise ValueError("cannot add functions with different Gaussian exponents")
        merged = _poly_add(
            {k: self.prefactor * c for k, c in self.poly.items()},
            other.poly, scale=other.prefactor,
        )
        return GaussPoly(self.variables, 1.0, self.exponent, merged)

    def pointwise_mul(self, other: "GaussPoly") -> "GaussPoly":
        """Ordinary (commutative) product; exponents add, polynomials multiply."""
        if self.variables != other.variables:
            raise ValueError("cannot multiply functions over different variable blocks")
        return GaussPoly(
            self.variables,
            self.prefactor * other.prefactor,
            self.exponent + other.exponent,
            _poly_mul(self.poly, other.poly),
        )

    def real_part(self) -> "GaussPoly":
        return GaussPoly(self.variables, self.prefactor, self.exponent,
                         {k: c.real for k, c in self.poly.items()})

    def imag_part(self) -> "GaussPoly":
        return GaussPoly(self.variables, self.prefactor, self.exponent,
                         {k: complex(c).imag for k, c in self.poly.items()})

    def max_imag_coefficient(self) -> float:
        return max((abs(complex(c).imag) for c in self.poly.values()), default=0.0)

    def value(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (..., dimension)."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.variables.dimension:
            raise ValueError("points have the wrong trailing dimension")
        quad = np.einsum("...i,ij,...j->...", pts, self.exponent, pts)
        has_complex = any(complex(c).imag != 0.0 for c in self.poly.values())
        acc = np.zeros(pts.shape[:-1], dtype=complex if has_complex else float)
        for mono, coeff in self.poly.items():
            term = np.full(pts.shape[:-1], coeff if has_complex else complex(coeff).real)
            for axis, power in enumerate(mono):
                if power:
                    term = term * pts[..., axis] ** power
            acc += term
        return self.prefactor * acc * np.exp(quad)


@dataclass(frozen=True)
class QuadraticForm:
    """Two-square quadratic Hamiltonian H = (a.x + b.p)^2 + (c.x + d.p)^2.

    The coefficient vectors have one entry per oscillator (two in the full
    space, one in the reduced pair). The scalar k controls star-exponentials
    of the form; it is cached at construction and recomputable at will.
    """

    variables: PhaseVariables
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]
    d: tuple[float, ...]

    def __post_init__(self):
        n = self.variables.dimension // 2
        for name in ("a", "b", "c", "d"):
            vec = tuple(float(x) for x in getattr(self, name))
            if len(vec) != n:
                raise ValueError(f"vector {name} must have length {n}")
            object.__setattr__(self, name, vec)
        object.__setattr__(self, "k", k_constant(self))

    @property
    def first_form(self) -> np.ndarray:
        """Coefficients of a.x + b.p over (x..., p...)."""
        return np.array(self.a + self.b)

    @property
    def second_form(self) -> np.ndarray:
        return np.array(self.c + self.d)

    @property
    def matrix(self) -> np.ndarray:
        """Symmetric matrix S with H(z) = z^T S z (positive semidefinite)."""
        u, v = self.first_form, self.second_form
        return np.outer(u, u) + np.outer(v, v)

    def poly(self) -> GaussPoly:
        """The Hamiltonian as a pure polynomial (zero Gaussian part)."""
        d = self.variables.dimension
        S = self.matrix
        out: PolyMap = {}
        for i in range(d):
            for j in range(i, d):
                coeff = S[i, j] if i == j else 2.0 * S[i, j]
                if coeff != 0.0:
                    mono = [0] * d
                    mono[i] += 1
                    mono[j] += 1
                    out[tuple(mono)] = out.get(tuple(mono), 0.0) + coeff
        return GaussPoly(self.variables, 1.0, np.zeros((d, d)), out)

    @classmethod
    def from_matrix(cls, variables: PhaseVariables, S: np.ndarray,
                    tol: float = 1e-10) -> "QuadraticForm":
        """Recover a two-square decomposition of a PSD matrix of rank <= 2.

        The split into two squares is not unique; any rotation of the pair
        leaves |k| and all star-exponentials unchanged.
        """
        S = np.asarray(S, dtype=float)
        scale = abs(S).max() or 1.0
        vals, vecs = np.linalg.eigh(S)
        if vals.min() < -tol * scale:
            raise ValueError("matrix is not positive semidefinite")
        big = [i for i in range(len(vals)) if vals[i] > tol * scale]
        if len(big) > 2:
            raise ValueError("matrix has rank > 2: not a two-square form")
        n = variables.dimension // 2
        forms = [np.sqrt(vals[i]) * vecs[:, i] for i in big]
        while len(forms) < 2:
            forms.append(np.zeros(variables.dimension))
        u, v = forms
        return cls(variables, tuple(u[:n]), tuple(u[n:]), tuple(v[:n]), tuple(v[n:]))


def k_constant(form: QuadraticForm) -> float:
    """Scalar k = (a.d - b.c) hbar + (a^c) mu + (b^d) nu of a two-square form."""
    a, b, c, d = (np.array(v) for v in (form.a, form.b, form.c, form.d))
    pv = form.variables
    k = pv.hbar * (float(a @ d) - float(b @ c))
    if pv.dimension == 4:
        k += pv.mu * (a[0] * c[1] - a[1] * c[0])
        k += pv.nu * (b[0] * d[1] - b[1] * d[0])
    return k


def star_exp(form: QuadraticForm, t: float) -> GaussPoly:
    """Closed-form star-exponential of a two-square quadratic Hamiltonian.

    Returns (1/cosh(k t)) * exp(H tanh(k t)/k) as a pure Gaussian; at k = 0
    the analytic limit exp(H t) is used. |k t| beyond the cosh overflow
    threshold is rejected.
    """
    k = form.k
    kt = k * t
    if abs(kt) > 700.0:
        raise ValueError("k*t out of range: cosh overflow")
    if k == 0.0:
        scale, pref = t, 1.0
    else:
        scale, pref = math.tanh(kt) / k, 1.0 / math.cosh(kt)
    return GaussPoly.gaussian(form.variables, pref, scale * form.matrix)


def _pair_matrix(variables: PhaseVariables) -> dict[tuple[int, int], complex]:
    """Nonzero entries of the bidifferential pairing (i/2) B."""
    B = variables.deformation_matrix()
    out = {}
    d = variables.dimension
    for a in range(d):
        for b in range(d):
            if B[a, b] != 0.0:
                out[(a, b)] = 0.5j * B[a, b]
    return out


def _gauss_diff(poly: PolyMap, Q: np.ndarray, axis: int) -> PolyMap:
    """Polynomial part of d/dz_axis [poly * exp(z Q z)]."""
    d = Q.shape[0]
    out = _poly_diff(poly, axis)
    for j in range(d):
        if Q[axis, j] != 0.0:
            mono = tuple(1 if i == j else 0 for i in range(d))
            out = _poly_add(out, _poly_mul(poly, {mono: 2.0 * Q[axis, j]}))
    return _prune(out)


def _star_series(fpoly: PolyMap, gpoly: PolyMap, gQ: np.ndarray,
                 pair: dict[tuple[int, int], complex]) -> PolyMap:
    """Terminating series for (polynomial f) star (g), derivatives of f on the
    left slot of the pairing. Terminates at the total degree of f."""
    d = gQ.shape[0]
    zero = (0,) * d
    deg = max((sum(k) for k in fpoly), default=0)

    f_cache: dict[Monomial, PolyMap] = {zero: dict(fpoly)}
    g_cache: dict[Monomial, PolyMap] = {zero: dict(gpoly)}

    def f_deriv(alpha: Monomial) -> PolyMap:
        if alpha not in f_cache:
            axis = next(i for i, n in enumerate(alpha) if n)
            parent = list(alpha)
            parent[axis] -= 1
            f_cache[alpha] = _poly_diff(f_deriv(tuple(parent)), axis)
        return f_cache[alpha]

    def g_deriv(beta: Monomial) -> PolyMap:
        if beta not in g_cache:
            axis = next(i for i, n in enumerate(beta) if n)
            parent = list(beta)
            parent[axis] -= 1
            g_cache[beta] = _gauss_diff(g_deriv(tuple(parent)), gQ, axis)
        return g_cache[beta]

    terms: dict[tuple[Monomial, Monomial], complex] = {(zero, zero): 1.0 + 0.0j}
    out: PolyMap = {}
    factorial = 1.0
    for order in range(deg + 1):
        if order:
            factorial *= order
            nxt: dict[tuple[Monomial, Monomial], complex] = {}
            for (al, be), coeff in terms.items():
                for (a, b), pab in pair.items():
                    al2 = list(al)
                    al2[a] += 1
                    be2 = list(be)
                    be2[b] += 1
                    key = (tuple(al2), tuple(be2))
                    nxt[key] = nxt.get(key, 0.0) + coeff * pab
            terms = nxt
        for (al, be), coeff in terms.items():
            df = f_deriv(al)
            if not df:
                continue
            dg = g_deriv(be)
            if not dg:
                continue
            out = _poly_add(out, _poly_mul(df, dg), scale=coeff / factorial)
    return _prune(out)


def _require_zero_exponent(g: GaussPoly, who: str) -> None:
    if abs(g.exponent).max() > 1e-14:
        raise ValueError(f"{who} must have a zero Gaussian part")


def star_product_poly_left(left: GaussPoly, right: GaussPoly) -> GaussPoly:
    """left star right with a pure-polynomial left factor (terminating series).

    The result carries right's Gaussian exponent and may have complex
    polynomial coefficients; use real_part()/imag_part() to split them.
    """
    if left.variables != right.variables:
        raise ValueError("operands live on different variable blocks")
    _require_zero_exponent(left, "left factor")
    pair = _pair_matrix(left.variables)
    poly = _star_series(left.poly, right.poly, right.exponent, pair)
    return GaussPoly(left.variables, left.prefactor * right.prefactor,
                     right.exponent, poly)


def star_product_poly_right(left: GaussPoly, right: GaussPoly) -> GaussPoly:
    """left star right with a pure-polynomial right factor.

    Reuses the left-factor series with the pairing transposed (B is
    antisymmetric, so the roles swap with a sign).
    """
    if left.variables != right.variables:
        raise ValueError("operands live on different variable blocks")
    _require_zero_exponent(right, "right factor")
    pair = {(a, b): -p for (a, b), p in _pair_matrix(left.variables).items()}
    poly = _star_series(right.poly, left.poly, left.exponent, pair)
    return GaussPoly(left.variables, left.prefactor * right.prefactor,
                     left.exponent, poly)


def _gaussian_scale(g: GaussPoly) -> tuple[float, np.ndarray]:
    """Fold a pure Gaussian to (total prefactor, exponent)."""
    if not g.is_pure_gaussian():
        raise ValueError("operand is not a pure Gaussian")
    const = g.constant_coefficient()
    if abs(complex(const).imag) > 1e-12 * abs(const):
        raise ValueError("operand has a complex constant part")
    return g.prefactor * complex(const).real, g.exponent


def _mode_scales(Q: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    """Solve Q = sum_f s_f * M_f in the least-squares sense and validate."""
    A = np.stack([m.ravel() for m in mats], axis=1)
    s, *_ = np.linalg.lstsq(A, Q.ravel(), rcond=None)
    resid = abs(A @ s - Q.ravel()).max()
    if resid > _MATCH_RTOL * (abs(Q).max() + 1.0):
        raise ValueError(
            "exponent is not a combination of the given forms: outside the "
            "supported Gaussian class"
        )
    return s


def _infer_form(g: GaussPoly) -> QuadraticForm:
    Q = g.exponent
    vals = np.linalg.eigvalsh(Q)
    scale = abs(vals).max() or 1.0
    if vals.min() >= -1e-12 * scale:
        S = Q
    elif vals.max() <= 1e-12 * scale:
        S = -Q
    else:
        raise ValueError(
            "indefinite exponent: not a scalar multiple of a two-square form"
        )
    return QuadraticForm.from_matrix(g.variables, S)


def gaussian_star(left: GaussPoly, right: GaussPoly,
                  forms: QuadraticForm | Sequence[QuadraticForm] | None = None,
                  ) -> GaussPoly:
    """Star product of two Gaussians generated by shared quadratic forms.

    Each operand must be exp of a combination of the given forms (a single
    shared form when forms is omitted and inferred). Per form, scales compose
    by the tanh addition law

        s_out = (s_L + s_R) / (1 + k^2 s_L s_R),

    with the prefactor picking up 1/(1 + k^2 s_L s_R). This equals converting
    to star-exponential parameters, adding, and converting back, but stays
    finite at the pure-state boundary |k s| = 1. Scales with |k s| > 1 are
    outside the normalizable class and rejected.
    """
    if left.variables != right.variables:
        raise ValueError("operands live on different variable blocks")
    pref_l, Ql = _gaussian_scale(left)
    pref_r, Qr = _gaussian_scale(right)
    d = left.variables.dimension

    # a constant operand is a scalar multiple of the star identity
    if abs(Ql).max() < 1e-14:
        return GaussPoly.gaussian(right.variables, pref_l * pref_r, Qr)
    if abs(Qr).max() < 1e-14:
        return GaussPoly.gaussian(left.variables, pref_l * pref_r, Ql)

    if forms is None:
        mode_forms = [_infer_form(left)]
    elif isinstance(forms, QuadraticForm):
        mode_forms = [forms]
    else:
        mode_forms = list(forms)

    mats = [f.matrix for f in mode_forms]
    sl = _mode_scales(Ql, mats)
    sr = _mode_scales(Qr, mats)

    out_Q = np.zeros((d, d))
    pref = pref_l * pref_r
    for f, s1, s2 in zip(mode_forms, sl, sr):
        k = f.k
        for s in (s1, s2):
            if abs(k * s) > 1.0 + _UNIT_SLACK:
                raise ValueError(
                    "|k*s| > 1: Gaussian narrower than the minimal cell, "
                    "outside the star-exponential class"
                )
        denom = 1.0 + k**2 * s1 * s2
        if denom <= _UNIT_SLACK:
            raise ValueError("singular star product: k^2 s_L s_R -> -1")
        out_Q += ((s1 + s2) / denom) * f.matrix
        pref /= denom
    return GaussPoly.gaussian(left.variables, pref, out_Q)


def star_power(g: GaussPoly, n: int,
               forms: QuadraticForm | Sequence[QuadraticForm] | None = None,
               ) -> GaussPoly:
    """n-fold star product of a Gaussian with itself (n >= 1)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("star power requires a positive integer order")
    if forms is None and n > 1:
        forms = [_infer_form(g)]
    out = g
    for _ in range(n - 1):
        out = gaussian_star(out, g, forms=forms)
    return out


def star_log_gaussian(g: GaussPoly,
                      form: QuadraticForm | None = None,
                      ) -> tuple[float, GaussPoly]:
    """Star logarithm of a positive Gaussian in the star-exponential class.

    Writes g = p * exp(s H) = p cosh(k t) * exp_star(H t) with
    t = arctanh(k s)/k, so

        ln_star(g) = ln(p) - (1/2) ln(1 - k^2 s^2) + t * H,

    returned as (additive constant, quadratic polynomial). Requires
    |k s| < 1 strictly; the projector boundary has no star logarithm.
    """
    pref, Q = _gaussian_scale(g)
    if pref <= 0.0:
        raise ValueError("star logarithm requires a positive prefactor")
    d = g.variables.dimension
    if abs(Q).max() < 1e-14:
        return math.log(pref), GaussPoly(g.variables, 1.0, np.zeros((d, d)), {})
    if form is None:
        form = _infer_form(g)
    (s,) = _mode_scales(Q, [form.matrix])
    k = form.k
    ks = k * s
    if abs(ks) >= 1.0 - _UNIT_SLACK:
        raise ValueError("|k*s| >= 1: outside the domain of the star logarithm")
    t = s if k == 0.0 else math.atanh(ks) / k
    const = math.log(pref) - 0.5 * math.log1p(-(ks * ks))
    return const, form.poly().scaled(t)
