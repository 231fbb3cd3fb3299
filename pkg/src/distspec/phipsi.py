"""Closed-form Phi-functions of paths and cycles and the secular equation for rho.

For a component ``K`` and ``lam > 2``::

    Phi_K(lam) = 1^T (lam I - A(K))^{-1} 1

and the Psi-function of a graph ``G`` with complement ``H0`` is the sum of
``Phi_K`` over the components of ``H0``.  When ``diam(G) <= 2`` the distance
matrix is ``J - I + A(H0)`` and ``rho(G) + 1`` is the unique root of
``Psi(lam) = 1``.

All theta-power expressions are written in terms of ``u = theta**-(k+1)``,
which lies in ``(0, 1)``; nothing here overflows for large ``k``.
"""

from __future__ import annotations

import decimal
import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ConvergenceError, DomainError
from .graph import (Graph, ShapeKind, adjacency_matrix, complement_diameter_witness,
                    components, cycle_graph, disjoint_union, path_graph)
from .spectral import SpectralResult

__all__ = [
    "Theta",
    "ComplementConfig",
    "phi_cycle",
    "phi_path",
    "r_k",
    "psi",
    "psi_regime",
    "phi_path_increment",
    "increment_deficit",
    "increment_log_deficit",
    "rho_via_secular",
    "Comparison",
    "compare_rho",
    "psi_difference",
    "SECULAR_TOL",
    "AGREEMENT_TOL",
]

SECULAR_TOL = 1e-12
AGREEMENT_TOL = 1e-8
_BISECT_WIDTH = 1e-13


def _check_lambda(lam):
    if not lam > 2:
        raise DomainError(f"lambda must exceed 2, got {lam!r}")


@dataclass(frozen=True)
class Theta:
    """The larger root of ``x**2 - lam*x + 1``, so ``theta + 1/theta == lam``."""

    lam: float
    theta: float

    @classmethod
    def from_lambda(cls, lam: float) -> Theta:
        _check_lambda(lam)
        # (lam-2)(lam+2) avoids squaring-then-subtracting near lam = 2
        return cls(lam, (lam + math.sqrt((lam - 2.0) * (lam + 2.0))) / 2.0)


def r_k(k: int, theta: float) -> float:
    if not theta > 1:
        raise DomainError(f"theta must exceed 1, got {theta!r}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    u = theta ** -(k + 1)
    return (1.0 - (1.0 + theta) * u / (1.0 + u)) / (theta - 1.0)


def phi_cycle(ell: int, lam: float) -> float:
    if ell < 3:
        raise DomainError(f"cycle length must be >= 3, got {ell}")
    _check_lambda(lam)
    return ell / (lam - 2.0)


def phi_path(k: int, lam: float) -> float:
    if k < 1:
        raise DomainError(f"path order must be >= 1, got {k}")
    _check_lambda(lam)
    if k == 1:
        return 1.0 / lam
    theta = Theta.from_lambda(lam).theta
    return (k - 2.0 * r_k(k, theta)) / (lam - 2.0)


def _u_pair(k, lam):
    theta = Theta.from_lambda(lam).theta
    return theta ** -(k + 1), theta ** -(k + 2)


def phi_path_increment(k: int, lam: float) -> float:
    """``Phi_{P_{k+1}}(lam) - Phi_{P_k}(lam)`` in product form.

    ``(1/(lam-2)) * prod_{j=1,2} (theta^(k+j) - 1)/(theta^(k+j) + 1)``.
    The identity holds for every ``k >= 1``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    _check_lambda(lam)
    u1, u2 = _u_pair(k, lam)
    h = (1.0 - u1) / (1.0 + u1) * ((1.0 - u2) / (1.0 + u2))
    return h / (lam - 2.0)


def increment_deficit(k: int, lam: float) -> float:
    """``1 - (lam - 2) * phi_path_increment(k, lam)``, computed without cancellation.

    Strictly positive and strictly decreasing in ``k``; resolves the
    convexity gap even when the increment itself rounds to ``1/(lam-2)``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    _check_lambda(lam)
    u1, u2 = _u_pair(k, lam)
    a = 2.0 * u1 / (1.0 + u1)
    b = 2.0 * u2 / (1.0 + u2)
    return a + b - a * b


def increment_log_deficit(k: int, lam: float) -> float:
    """Natural log of :func:`increment_deficit`, valid where the deficit underflows."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    _check_lambda(lam)
    log_theta = math.log(Theta.from_lambda(lam).theta)
    lu1 = -(k + 1) * log_theta
    lu2 = lu1 - log_theta
    u1, u2 = math.exp(lu1), math.exp(lu2)
    log_a = math.log(2.0) + lu1 - math.log1p(u1)
    b = 2.0 * u2 / (1.0 + u2)
    b_over_a = math.exp(-log_theta) * (1.0 + u1) / (1.0 + u2)
    return log_a + math.log1p(b_over_a - b)


# ---------------------------------------------------------------- configurations

_TOKEN = re.compile(r"^([CP])(\d+)$")


@dataclass(frozen=True)
class ComplementConfig:
    """A disjoint union of cycles and paths, described by component sizes.

    ``paths`` may contain 1 (an isolated vertex of the complement).
    Sizes are kept sorted so equal multisets compare equal.
    """

    cycles: tuple = ()
    paths: tuple = ()

    def __post_init__(self):
        cycles = tuple(sorted(int(c) for c in self.cycles))
        paths = tuple(sorted(int(p) for p in self.paths))
        if any(c < 3 for c in cycles):
            raise ValueError(f"cycle lengths must be >= 3: {cycles}")
        if any(p < 1 for p in paths):
            raise ValueError(f"path orders must be >= 1: {paths}")
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "paths", paths)

    @property
    def n_cycle_vertices(self) -> int:
        return sum(self.cycles)

    @property
    def n_path_vertices(self) -> int:
        return sum(self.paths)

    @property
    def n(self) -> int:
        return self.n_cycle_vertices + self.n_path_vertices

    @property
    def t(self) -> int:
        return len(self.cycles)

    @property
    def n_components(self) -> int:
        return len(self.cycles) + len(self.paths)

    @property
    def n_edges(self) -> int:
        return self.n_cycle_vertices + sum(p - 1 for p in self.paths)

    def to_graph(self) -> Graph:
        """Cycles first, then paths, each on a consecutive label range."""
        parts = [cycle_graph(c) for c in self.cycles] + [path_graph(p) for p in self.paths]
        return disjoint_union(*parts)

    @classmethod
    def from_graph(cls, h0: Graph) -> ComplementConfig:
        cycles, paths = [], []
        for verts, shape in components(h0):
            if shape.kind is ShapeKind.CYCLE:
                cycles.append(shape.size)
            elif shape.kind is ShapeKind.PATH:
                paths.append(shape.size)
            else:
                raise ContractError(f"component on {sorted(verts)} is neither a path nor a cycle")
        return cls(tuple(cycles), tuple(paths))

    @classmethod
    def parse(cls, text: str) -> ComplementConfig:
        """Parse ``"C3+P4+P4"`` (``,`` or whitespace also separate tokens)."""
        cycles, paths = [], []
        for tok in re.split(r"[+,\s]+", text.strip()):
            if not tok:
                continue
            mt = _TOKEN.match(tok.upper())
            if not mt:
                raise ValueError(f"bad component token {tok!r}; use e.g. C3 or P4")
            (cycles if mt.group(1) == "C" else paths).append(int(mt.group(2)))
        return cls(tuple(cycles), tuple(paths))

    def __str__(self):
        return "+".join([f"C{c}" for c in self.cycles] + [f"P{p}" for p in self.paths])


def psi_regime(h0) -> str:
    """Which hypothesis makes the secular equation valid for ``h0``.

    ``"cycles-and-paths"``: all components cycles or paths, at least two of
    them, n >= 4.  ``"diameter-2"``: anything else whose complement still has
    diameter <= 2.  Raises ContractError otherwise.
    """
    if isinstance(h0, ComplementConfig):
        if h0.n >= 4 and h0.n_components >= 2:
            return "cycles-and-paths"
        h0 = h0.to_graph()
    if h0.n < 4:
        raise ContractError(f"the secular equation needs n >= 4, got n={h0.n}")
    bad = complement_diameter_witness(h0)
    if bad is not None:
        raise ContractError(f"complement has diameter > 2 (vertices {bad[0]}, {bad[1]})")
    comps = components(h0)
    if len(comps) >= 2 and all(s.kind is not ShapeKind.OTHER for _, s in comps):
        return "cycles-and-paths"
    return "diameter-2"


def _psi_config(config: ComplementConfig, lam: float) -> float:
    total = config.n_cycle_vertices / (lam - 2.0)
    for k, mult in Counter(config.paths).items():
        total += mult * phi_path(k, lam)
    return total


def _phi_block(a: np.ndarray, lam: float) -> float:
    m = lam * np.eye(a.shape[0]) - a
    y = np.linalg.solve(m, np.ones(a.shape[0]))
    if not (y > 0).all():
        raise DomainError(f"lambda={lam} does not exceed the component's spectral radius")
    return float(y.sum())


def psi(h0, lam: float) -> float:
    """Psi-function: closed forms for cycles and paths, linear solves for other components."""
    _check_lambda(lam)
    if isinstance(h0, ComplementConfig):
        return _psi_config(h0, lam)
    a = adjacency_matrix(h0, dtype=float)
    total = 0.0
    for verts, shape in components(h0):
        if shape.kind is ShapeKind.CYCLE:
            total += phi_cycle(shape.size, lam)
        elif shape.kind is ShapeKind.PATH:
            total += phi_path(shape.size, lam)
        else:
            idx = sorted(verts)
            total += _phi_block(a[np.ix_(idx, idx)], lam)
    return total


def _max_degree(h0) -> int:
    if isinstance(h0, ComplementConfig):
        if h0.cycles or any(p >= 3 for p in h0.paths):
            return 2
        return 1 if any(p == 2 for p in h0.paths) else 0
    return max(h0.degrees(), default=0)


def rho_via_secular(h0, tol: float = SECULAR_TOL) -> SpectralResult:
    """Distance spectral radius of the complement of ``h0`` from ``Psi(rho + 1) = 1``.

    ``h0`` is a :class:`ComplementConfig` or a :class:`Graph`.  The root is
    bracketed in ``[max(3, D+1), n + max(2, D)]`` (``D`` the max degree of
    ``h0``; ``[3, n+2]`` for cycles and paths), bisected to width 1e-13 and
    polished by at most three Newton steps.  ``residual`` is
    ``|Psi(rho+1) - 1|``.
    """
    regime = psi_regime(h0)
    n = h0.n
    deg = _max_degree(h0)
    lo, hi = max(3.0, deg + 1.0), float(n + max(2, deg))

    def f(lam):
        return psi(h0, lam) - 1.0

    f_lo, f_hi = f(lo), f(hi)
    if not f_lo > 0:
        raise ContractError(f"bracket failure: Psi({lo}) - 1 = {f_lo:.3e} is not positive")
    if abs(f_hi) <= tol:
        return SpectralResult(hi - 1.0, "secular", abs(f_hi), 0)
    if not f_hi < 0:
        raise ContractError(f"bracket failure: Psi({hi}) - 1 = {f_hi:.3e} is not negative")
    iterations = 0
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        iterations += 1
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    best = abs(f(lam))
    for _ in range(3):
        if best == 0.0:
            break
        h = 1e-6 * lam
        slope = (f(lam + h) - f(lam - h)) / (2 * h)
        cand = lam - f(lam) / slope
        iterations += 1
        if not (lo <= cand <= hi):
            break
        r = abs(f(cand))
        if r >= best:
            break
        lam, best = cand, r
    if best > tol:
        raise ConvergenceError(f"secular residual {best:.3e} exceeds tol {tol:.1e}",
                               best=SpectralResult(lam - 1.0, "secular", best, iterations))
    return SpectralResult(lam - 1.0, "secular", best, iterations)


def _phi_path_dec(k, lam, theta, one):
    if k == 1:
        return one / lam
    u = one / theta ** (k + 1)
    r = (one - (one + theta) * u / (one + u)) / (theta - one)
    return (k - 2 * r) / (lam - 2)


def psi_difference(config_a: ComplementConfig, config_b: ComplementConfig, lam: float) -> float:
    """``Psi_a(lam) - Psi_b(lam)`` evaluated in extended precision.

    Configurations with paths of similar sizes differ in Psi only through
    terms of order ``theta**-(k+1)``, far below double precision once ``k``
    is moderate.  The closed forms are evaluated with the stdlib
    :mod:`decimal` module at ``40 + (k_max + 2) * log10(theta)`` digits, so the
    difference keeps about 40 significant digits; the result is then
    rounded to a float (whose exponent range covers it).
    """
    _check_lambda(lam)
    theta_f = Theta.from_lambda(lam).theta
    kmax = max(config_a.paths + config_b.paths + (1,))
    digits = 40 + math.ceil((kmax + 2) * math.log10(theta_f))
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        one = decimal.Decimal(1)
        lam_d = decimal.Decimal(lam)
        theta = (lam_d + ((lam_d - 2) * (lam_d + 2)).sqrt()) / 2

        def total(cfg):
            acc = decimal.Decimal(cfg.n_cycle_vertices) / (lam_d - 2)
            for k, mult in Counter(cfg.paths).items():
                acc += mult * _phi_path_dec(k, lam_d, theta, one)
            return acc

        return float(total(config_a) - total(config_b))


@dataclass(frozen=True)
class Comparison:
    """Outcome of :func:`compare_rho`.

    ``order`` is ``"<"``, ``">"`` or ``"="`` for ``rho_a`` versus ``rho_b``.
    With ``method == "psi-gap"`` the certificate is ``Psi_a(rho_b + 1) - 1``;
    with ``"roots"`` it is ``rho_a - rho_b``.
    """

    order: str
    certificate: float
    method: str
    rho_a: float | None
    rho_b: float

    def to_dict(self) -> dict:
        return {"order": self.order, "certificate": self.certificate, "method": self.method,
                "rho_a": self.rho_a, "rho_b": self.rho_b}


def compare_rho(config_a, config_b, tol: float = SECULAR_TOL, tie_tol: float = 1e-9) -> Comparison:
    """Order ``rho`` of two complements using one root solve when possible.

    Evaluates ``Psi_a`` at ``rho_b + 1``: since ``Psi_a`` is strictly
    decreasing and equals 1 at ``rho_a + 1``, the sign of ``Psi_a - 1`` there
    decides the order.  Gaps within ``10*tol`` are re-evaluated with
    :func:`psi_difference` when both inputs are configurations; only an
    exact zero there (or graph inputs) falls back to solving both roots.
    """
    rb = rho_via_secular(config_b, tol=tol).value
    gap = psi(config_a, rb + 1.0) - 1.0
    if gap < -10 * tol:
        return Comparison("<", gap, "psi-gap", None, rb)
    if gap > 10 * tol:
        return Comparison(">", gap, "psi-gap", None, rb)
    if isinstance(config_a, ComplementConfig) and isinstance(config_b, ComplementConfig):
        hp = psi_difference(config_a, config_b, rb + 1.0)
        if hp != 0.0:
            return Comparison("<" if hp < 0 else ">", hp, "psi-gap-extended", None, rb)
    ra = rho_via_secular(config_a, tol=tol).value
    diff = ra - rb
    order = "=" if abs(diff) <= tie_tol else ("<" if diff < 0 else ">")
    return Comparison(order, diff, "roots", ra, rb)
