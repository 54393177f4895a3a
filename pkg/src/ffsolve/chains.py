"""Numerics for the staggered distance-k chain family.

The independence polynomial of the chain graph on N unit cells obeys a
k-term recursion whose coefficients are the elementary symmetric
polynomials of the squared couplings, so everything here works from the
coupling vector alone.  Dispersion relations and gap scans are finite-N:
the spectrum is computed at two sizes and the trend decides gapless vs
gapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ComplexRootError, ModelError
from .indpoly import IndependencePolynomial, SingleParticleEnergies

GAPLESS_RATIO_MARGIN = 0.1


@dataclass(frozen=True)
class ChainSpec:
    """N unit cells of block size k with squared couplings b2[0..k-1]."""

    n_cells: int
    k: int
    b2: tuple[float, ...]

    def __post_init__(self):
        if self.n_cells < 1:
            raise ModelError(f"N must be >= 1, got {self.n_cells}")
        if self.k < 2:
            raise ModelError(f"k must be >= 2, got {self.k}")
        if len(self.b2) != self.k:
            raise ModelError(f"expected {self.k} squared couplings, got {len(self.b2)}")
        if any(b < 0 for b in self.b2):
            raise ModelError("squared couplings must be nonnegative")


def elementary_symmetric(b2: Sequence[float]) -> tuple[float, ...]:
    """e_0..e_k of the squared couplings, one-pass recurrence, e_0 = 1."""
    e = [1.0] + [0.0] * len(b2)
    for count, w in enumerate(b2, start=1):
        for j in range(count, 0, -1):
            e[j] += e[j - 1] * w
    return tuple(e)


def chain_polynomial(spec: ChainSpec) -> IndependencePolynomial:
    """P for the chain graph via the symmetric k-term recursion.

    In the x variable: P_N = P_{N-1} + sum_l (-1)^(l+1) e_l x^l P_{N-l},
    with P_0 = 1 and P of negative index 0.  Coefficientwise this equals
    the enumeration-based polynomial of the same graph.
    """
    e = elementary_symmetric(spec.b2)
    polys: list[list[float]] = [[1.0]]
    for n in range(1, spec.n_cells + 1):
        # alpha of the n-cell chain is n, so the new polynomial has degree n
        new = list(polys[n - 1]) + [0.0] * (n - len(polys[n - 1]) + 1)
        for ell in range(1, spec.k + 1):
            if n - ell < 0:
                break
            sign = -1.0 if ell % 2 == 0 else 1.0
            for pos, c in enumerate(polys[n - ell]):
                new[pos + ell] += sign * e[ell] * c
        polys.append(new)
    return IndependencePolynomial(tuple(polys[spec.n_cells]))


@dataclass(frozen=True)
class RecursionMatrix:
    """Banded Toeplitz matrix of the chain recursion, bandwidth k+1.

    Its eigenvalues with the standing-wave boundary conditions are the
    squared single-particle energies.
    """

    size: int
    entries: tuple[float, ...]  # e_0..e_k

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size))
        for s in range(self.size):
            for ell, el in enumerate(self.entries):
                sp = s - ell + 1
                if 0 <= sp < self.size:
                    m[s, sp] = el
        return m


def recursion_matrix(spec: ChainSpec) -> RecursionMatrix:
    return RecursionMatrix(spec.n_cells, elementary_symmetric(spec.b2))


def boundary_vector(spec: ChainSpec, eps_sq: float) -> np.ndarray:
    """v_1..v_{N+1} with v_s = eps^(2s) P_{chain(s-1)}(-eps^(-2)).

    Built by the recursion v_{s+1} = eps^2 v_s - sum_l e_l v_{s-l+1} with
    v_0 = ... = v_{2-k} = 0 and v_1 = eps^2.  Uniformly rescaled when the
    entries grow past float range (scaling preserves the identities).
    """
    e = elementary_symmetric(spec.b2)
    vs = [0.0] * (spec.k - 1) + [eps_sq]  # indices 2-k .. 0 are zeros, then v_1
    for s in range(1, spec.n_cells + 1):
        acc = eps_sq * vs[-1]
        for ell in range(1, spec.k + 1):
            acc -= e[ell] * vs[-ell]
        vs.append(acc)
        top = max(abs(v) for v in vs)
        if top > 1e250:
            vs = [v / top for v in vs]
    return np.array(vs[spec.k - 1:])  # v_1 .. v_{N+1}


def verify_boundary(spec: ChainSpec, eps: float, rel_tol: float = 1e-8) -> bool:
    """Both boundary conditions: v_{N+1} = 0 and R v = eps^2 v componentwise."""
    v = boundary_vector(spec, eps * eps)
    scale = max(np.max(np.abs(v)), 1e-300)
    if abs(v[-1]) > rel_tol * scale:
        return False
    interior = v[:-1]
    resid = recursion_matrix(spec).matrix @ interior - (eps * eps) * interior
    # row N of the matrix product assumes v_{N+1} = 0, which we just checked
    return bool(np.max(np.abs(resid)) <= rel_tol * scale)


def _boundary_eval(e: Sequence[float], n_cells: int, ws: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalized v_{N+1}(w), its w-derivative, and the accumulated
    rescaling log, for a vector of w values, via the chain recursion.

    The monomial coefficients of the chain polynomial become
    catastrophically ill-conditioned beyond a few dozen cells (the Horner
    noise floor exceeds the value scale between adjacent roots), while the
    forward recursion stays sign-exact, so root bisection works on this
    evaluation instead.  Values are normalized by the running window
    maximum, which makes them dimensionless but preserves signs and zeros.
    """
    k = len(e) - 1
    ws = np.asarray(ws, dtype=float)
    win = [np.zeros_like(ws) for _ in range(k - 1)] + [ws.copy()]
    dwin = [np.zeros_like(ws) for _ in range(k - 1)] + [np.ones_like(ws)]
    log_scale = np.zeros_like(ws)
    for _ in range(n_cells):
        nxt = ws * win[-1]
        dnxt = win[-1] + ws * dwin[-1]
        for ell in range(1, k + 1):
            nxt = nxt - e[ell] * win[-ell]
            dnxt = dnxt - e[ell] * dwin[-ell]
        win.append(nxt)
        win.pop(0)
        dwin.append(dnxt)
        dwin.pop(0)
        scale = np.maximum.reduce([np.abs(w) for w in win])
        scale = np.where(scale > 0, scale, 1.0)
        with np.errstate(divide="ignore"):
            log_scale = log_scale + np.log(scale)
        win = [w / scale for w in win]
        dwin = [w / scale for w in dwin]
    return win[-1], dwin[-1], log_scale


def _bisect_boundary(e, n, los, his, sls, derivative=False):
    idx = 1 if derivative else 0
    for _ in range(90):
        mid = 0.5 * (los + his)
        sm = np.sign(_boundary_eval(e, n, mid)[idx])
        go_right = (sm == sls) | (sm == 0)
        los = np.where(go_right, mid, los)
        his = np.where(go_right, his, mid)
        if np.all(his - los <= 1e-14 * np.maximum(np.abs(los), np.abs(his))):
            break
    return 0.5 * (los + his)


def _sign_change_roots(e, n, grid, vals, derivative=False):
    signs = np.sign(vals)
    flip = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if len(flip) == 0:
        return []
    roots = _bisect_boundary(e, n, grid[flip].copy(), grid[flip + 1].copy(),
                             signs[flip].copy(), derivative)
    exact = [float(g) for g, s in zip(grid, signs) if s == 0]
    return sorted(roots.tolist() + exact)


def _chain_w_roots(spec: ChainSpec) -> list[float]:
    """All N roots of v_{N+1} in w = eps^2.

    Simple roots come from sign changes on a geometric grid.  Pairs that
    are degenerate to machine precision (dimerized chains split levels
    exponentially in N) produce no sign change; they are recovered as
    near-zeros of v at the bracketed roots of dv/dw, counted twice.
    """
    e = elementary_symmetric(spec.b2)
    n = spec.n_cells
    bound = sum(e)  # Gershgorin row sum of the recursion matrix
    lo = bound * 1e-18
    grid = np.unique(np.concatenate([
        [lo * 1e-4],
        np.geomspace(lo, bound, max(6 * n, 64)),
        np.linspace(bound / (4 * n), bound, 4 * n),
    ]))
    vals = _boundary_eval(e, n, grid)[0]
    signs = np.sign(vals)

    def flips(s):
        return int(np.sum(s[:-1] * s[1:] < 0))

    last = flips(signs)
    stale = 0
    while last < n and len(grid) < 200_000 and stale < 2:
        mids1 = grid[:-1] + (grid[1:] - grid[:-1]) / 3.0
        mids2 = grid[:-1] + 2.0 * (grid[1:] - grid[:-1]) / 3.0
        mids = np.concatenate([mids1, mids2])
        ms = np.sign(_boundary_eval(e, n, mids)[0])
        grid = np.concatenate([grid, mids])
        signs = np.concatenate([signs, ms])
        order = np.argsort(grid)
        grid, signs = grid[order], signs[order]
        now = flips(signs)
        stale = stale + 1 if now == last else 0
        last = now

    vals, dvals, _ = _boundary_eval(e, n, grid)
    roots = _sign_change_roots(e, n, grid, vals)
    missing = n - len(roots)
    if missing > 0:
        candidates = []
        for r in _sign_change_roots(e, n, grid, dvals, derivative=True):
            if roots and min(abs(r - x) for x in roots) <= 1e-9 * max(abs(r), 1e-300):
                continue
            v_here = abs(_boundary_eval(e, n, np.array([r]))[0][0])
            if v_here <= 1e-8:
                candidates.append((v_here, r))
        for v_here, r in sorted(candidates):
            if missing <= 0:
                break
            # even multiplicity from the local log-slope: |v(r+d)| ~ C d^m,
            # using the true magnitude log|v| = log|v_norm| + accumulated scale
            delta = 1e-4 * max(abs(r), 1e-12)
            vn, _, ls = _boundary_eval(e, n, np.array([r + delta, r + 2 * delta]))
            if np.all(np.abs(vn) > 0):
                logs = np.log(np.abs(vn)) + ls
                m_est = (logs[1] - logs[0]) / math.log(2.0)
                m = max(2, 2 * round(m_est / 2))
            else:
                m = 2
            m = min(m, missing)
            roots.extend([r] * m)
            missing -= m
    return sorted(roots)[: n]


def chain_energies(spec: ChainSpec) -> SingleParticleEnergies:
    """All N single-particle energies of the chain.

    At desk scale this matches single_particle_energies applied to
    chain_polynomial; the recursion-based evaluation keeps it accurate
    for hundreds of cells.  The residual reported is the normalized
    boundary value |v_{N+1}| / max_s |v_s| at the returned roots.
    """
    ws = _chain_w_roots(spec)
    if len(ws) < spec.n_cells:
        raise ComplexRootError(len(ws), spec.n_cells)
    merged: list[tuple[float, int]] = []
    for w in ws:
        if merged and abs(w - merged[-1][0]) < 1e-9 * abs(w):
            merged[-1] = (merged[-1][0], merged[-1][1] + 1)
        else:
            merged.append((w, 1))
    energies = tuple((math.sqrt(w), m) for w, m in merged)
    resid = 0.0
    for w, _ in merged:
        v = boundary_vector(spec, w)
        resid = max(resid, abs(v[-1]) / max(np.max(np.abs(v)), 1e-300))
    return SingleParticleEnergies(energies, resid)


def dispersion(spec: ChainSpec, momenta: Sequence[float] | None = None
               ) -> list[tuple[float, float]]:
    """Finite-size dispersion points (p_j, eps_j).

    Momenta p_j = pi j / (N+1) follow open-boundary standing-wave
    counting; energies are attached in descending order so the monotone
    branch decreases toward p = pi (a labeling convention).  When a
    momentum grid is supplied its points are mapped to the nearest bins,
    which requires N >= len(momenta).
    """
    eng = chain_energies(spec)
    eps_desc = sorted(eng.flat(), reverse=True)
    n = spec.n_cells
    points = [(math.pi * (j + 1) / (n + 1), eps_desc[j]) for j in range(n)]
    if momenta is None:
        return points
    if len(momenta) > n:
        raise ModelError(f"momentum grid of {len(momenta)} needs N >= that, got {n}")
    out = []
    for p in momenta:
        j = min(range(n), key=lambda i: abs(points[i][0] - p))
        out.append((points[j][0], points[j][1]))
    return out


def _min_energy(spec: ChainSpec) -> float:
    """Smallest single-particle energy of the chain."""
    return chain_energies(spec).energies[0][0]


@dataclass(frozen=True)
class ScanPoint:
    b2: tuple[float, ...]
    gap_small: float
    gap_large: float
    gapless: bool


def gap_scan(k: int, coupling_grid: Sequence[Sequence[float]], n_small: int,
             n_large: int, margin: float = GAPLESS_RATIO_MARGIN) -> list[ScanPoint]:
    """Two-size gap trend per grid point.

    A point is flagged gapless when the minimum energy shrinks at least
    as fast as the system grows: gap(N') / gap(N) < N/N' + margin.
    """
    if not n_small < n_large:
        raise ModelError("need two sizes N < N'")
    out = []
    threshold = n_small / n_large + margin
    for b2 in coupling_grid:
        b2 = tuple(float(v) for v in b2)
        gap_s = _min_energy(ChainSpec(n_small, k, b2))
        gap_l = _min_energy(ChainSpec(n_large, k, b2))
        gapless = gap_l < threshold * gap_s
        out.append(ScanPoint(b2, gap_s, gap_l, gapless))
    return out


def others_equal_grid(k: int, vary_index: int, values: Sequence[float],
                      total: float = 1.0) -> list[tuple[float, ...]]:
    """Grid where one squared coupling takes each value and the rest split
    the remaining weight equally (sum of squares normalized to ``total``)."""
    grid = []
    for v in values:
        if not 0 <= v <= total:
            raise ModelError(f"squared coupling {v} outside [0, {total}]")
        rest = (total - v) / (k - 1)
        b2 = [rest] * k
        b2[vary_index] = v
        grid.append(tuple(b2))
    return grid
