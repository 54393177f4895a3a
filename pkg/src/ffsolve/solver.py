"""Operator-level solution machinery: independent-set charges, transfer
operators, the simplicial mode, the nonlocal eigenmodes built from it,
and residual checks for the structural identities they satisfy.

Sign convention: with psi_j = T(-u_j) chi T(u_j) / N_j (u_j = 1/e_j > 0)
the ladder relations read [H, psi_j] = +2 e_j psi_j and
[H, psi_j^dagger] = -2 e_j psi_j^dagger, and the Hamiltonian is
reconstructed as sum_j e_j [psi_j, psi_j^dagger].  The three statements
are a package: flipping which member of the pair is called psi_j flips
the first two and negates the third.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConditioningError, DegenerateModeError, NotSimplicialError
from .graphs import WeightedGraph, bits, frustration_graph
from .indpoly import (
    IndependencePolynomial,
    SingleParticleEnergies,
    iter_independent_set_masks,
    weighted_independence_polynomial,
)
from .models import Hamiltonian
from .paulis import (
    OperatorSum,
    PauliTerm,
    multiply,
    opsum_anticomm,
    opsum_comm,
    opsum_mul,
    to_dense,
)


def _term_opsums(h: Hamiltonian) -> list[OperatorSum]:
    return [OperatorSum.from_term(t, c) for c, t in h.terms]


def _set_product(h: Hamiltonian, mask: int) -> tuple[float, PauliTerm]:
    """Product of the Hamiltonian terms in an independent set.

    The factors commute, so the order is immaterial; couplings multiply
    into a real prefactor and the Pauli product keeps an exact phase.
    """
    coeff = 1.0
    prod = PauliTerm.identity(h.n)
    for v in bits(mask):
        c, t = h.terms[v]
        coeff *= c
        prod = multiply(prod, t)
    return coeff, prod


def charge(h: Hamiltonian, k: int, graph: WeightedGraph | None = None) -> OperatorSum:
    """Independent-set charge: sum over k-vertex independent sets of the
    products of the corresponding terms.  k=0 gives the identity, k=1 the
    Hamiltonian itself."""
    if graph is None:
        graph = frustration_graph(h)
    if k < 0:
        raise ValueError("charge order must be nonnegative")
    acc: dict[tuple[int, int], complex] = {}
    count = 0
    for mask in iter_independent_set_masks(graph, max_size=k):
        if mask.bit_count() != k:
            continue
        count += 1
        coeff, prod = _set_product(h, mask)
        key = (prod.x, prod.z)
        acc[key] = acc.get(key, 0.0) + coeff * prod.phase
    if count == 0:
        raise ValueError(f"no independent sets of size {k}")
    return OperatorSum(h.n, acc)


@dataclass(frozen=True)
class TransferOperator:
    """The charge list Q^(0)..Q^(alpha); evaluate(u) = sum_j (-u)^j Q^(j)."""

    n: int
    charges: tuple[OperatorSum, ...]

    @property
    def alpha(self) -> int:
        return len(self.charges) - 1

    def evaluate(self, u: float) -> OperatorSum:
        acc = OperatorSum.zero(self.n)
        coef = 1.0
        for q in self.charges:
            acc = acc + coef * q
            coef *= -u
        return acc

    def derivative(self, u: float) -> OperatorSum:
        """d/du of evaluate(u): sum_j -j (-u)^(j-1) Q^(j)."""
        acc = OperatorSum.zero(self.n)
        coef = 1.0  # (-u)^(j-1)
        for j, q in enumerate(self.charges):
            if j >= 1:
                acc = acc + (-j * coef) * q
                coef *= -u
        return acc


def transfer(h: Hamiltonian, graph: WeightedGraph | None = None) -> TransferOperator:
    if graph is None:
        graph = frustration_graph(h)
    grouped: dict[int, list[int]] = {}
    for mask in iter_independent_set_masks(graph):
        grouped.setdefault(mask.bit_count(), []).append(mask)
    alpha = max(grouped)
    charges = []
    for k in range(alpha + 1):
        acc: dict[tuple[int, int], complex] = {}
        for mask in grouped.get(k, ()):
            coeff, prod = _set_product(h, mask)
            key = (prod.x, prod.z)
            acc[key] = acc.get(key, 0.0) + coeff * prod.phase
        charges.append(OperatorSum(h.n, acc))
    return TransferOperator(h.n, tuple(charges))


def sub_hamiltonian(h: Hamiltonian, vertices: Iterable[int]) -> Hamiltonian | None:
    """Hamiltonian restricted to a subset of term indices (same qubit count).

    Returns None for the empty subset, whose transfer operator is the
    identity."""
    keep = sorted(set(vertices))
    if not keep:
        return None
    return Hamiltonian(h.n, tuple(h.terms[v] for v in keep))


def sub_transfer(h: Hamiltonian, vertices: Iterable[int]) -> TransferOperator:
    sub = sub_hamiltonian(h, vertices)
    if sub is None:
        return TransferOperator(h.n, (OperatorSum.identity(h.n),))
    return transfer(sub)


# -- structural identity residuals -------------------------------------------

def charges_commute_residual(h: Hamiltonian, graph: WeightedGraph | None = None) -> float:
    """max over r < s of the largest coefficient of [Q^(r), Q^(s)]."""
    t = transfer(h, graph)
    worst = 0.0
    for r in range(1, t.alpha + 1):
        for s in range(r + 1, t.alpha + 1):
            worst = max(worst, opsum_comm(t.charges[r], t.charges[s]).max_abs_coeff())
    return worst


def transfer_factorization_residual(h: Hamiltonian, u: float,
                                    t: TransferOperator | None = None,
                                    poly: IndependencePolynomial | None = None) -> float:
    """max coefficient of T(u) T(-u) - P(-u^2) I."""
    graph = frustration_graph(h)
    if t is None:
        t = transfer(h, graph)
    if poly is None:
        poly = weighted_independence_polynomial(graph)
    prod = opsum_mul(t.evaluate(u), t.evaluate(-u))
    expected = poly.at_minus_u2(u) * OperatorSum.identity(h.n)
    return (prod - expected).max_abs_coeff()


def clique_transfer_recurrence_residual(h: Hamiltonian, clique: Sequence[int],
                                        u: float, side: str = "left",
                                        simplicial: bool = False) -> float:
    """Residual of the transfer-operator clique recurrence at one u.

    General cliques:   T_G = T_{G-K} - u sum_v h_v T_{G-N[v]}
    Simplicial cliques: T_G = T_{G-K} - u sum_v h_v T_{G-K_v}
    with K_v the closed neighborhood of v minus the rest of K.  Both hold
    with h_v on either side of the reduced transfer operator.
    """
    graph = frustration_graph(h)
    kset = sorted(set(clique))
    kmask = 0
    for v in kset:
        kmask |= 1 << v
    if not graph.is_clique(kmask):
        raise ValueError(f"{kset} is not a clique")
    full = transfer(h, graph).evaluate(u)
    rest = [v for v in range(graph.n) if v not in kset]
    acc = sub_transfer(h, rest).evaluate(u)
    ops = _term_opsums(h)
    for v in kset:
        if simplicial:
            kv = graph.closed_adj(v) & ~(kmask & ~(1 << v))
            reduced_vs = [w for w in range(graph.n) if not (kv >> w) & 1]
        else:
            reduced_vs = [w for w in range(graph.n) if not (graph.closed_adj(v) >> w) & 1]
        tv = sub_transfer(h, reduced_vs).evaluate(u)
        if side == "left":
            acc = acc - u * opsum_mul(ops[v], tv)
        elif side == "right":
            acc = acc - u * opsum_mul(tv, ops[v])
        else:
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return (full - acc).max_abs_coeff()


# -- simplicial extension and modes -------------------------------------------

def _is_simplicial_clique(graph: WeightedGraph, kmask: int) -> bool:
    if kmask == 0 or not graph.is_clique(kmask):
        return False
    for v in bits(kmask):
        kv = graph.closed_adj(v) & ~(kmask & ~(1 << v))
        if not graph.is_clique(kv):
            return False
    return True


def simplicial_extension(h: Hamiltonian, ks: Sequence[int]) -> tuple[Hamiltonian, PauliTerm]:
    """Ancilla construction of the simplicial mode.

    Every term indexed by the simplicial clique ``ks`` gains an X on a
    fresh qubit; the mode chi is Z on that qubit, so it anticommutes with
    exactly the clique terms and the frustration graph is unchanged.
    """
    graph = frustration_graph(h)
    kmask = 0
    for v in ks:
        if not 0 <= v < len(h.terms):
            raise NotSimplicialError(f"vertex {v} out of range")
        kmask |= 1 << v
    if not _is_simplicial_clique(graph, kmask):
        raise NotSimplicialError(f"{sorted(set(ks))} is not a simplicial clique")
    n = h.n + 1
    new_terms = []
    for i, (c, t) in enumerate(h.terms):
        x = t.x | ((1 << h.n) if (kmask >> i) & 1 else 0)
        new_terms.append((c, PauliTerm(n, x, t.z, 0)))
    chi = PauliTerm.from_ops(n, {h.n: "Z"})
    return Hamiltonian(n, tuple(new_terms)), chi


def clique_from_mode(hext: Hamiltonian, chi: PauliTerm) -> list[int]:
    """Term indices anticommuting with chi (recovers the simplicial clique)."""
    from .paulis import commutes
    return [i for i, (_, t) in enumerate(hext.terms) if not commutes(t, chi)]


@dataclass(frozen=True)
class IncognitoMode:
    """One nonlocal fermionic eigenmode on the ancilla-extended system."""

    index: int
    u: float
    energy: float
    norm: float
    op: OperatorSum

    @property
    def dag(self) -> OperatorSum:
        return self.op.dagger()


class _ModeContext:
    """Shared data for building all modes of one extended Hamiltonian."""

    def __init__(self, hext: Hamiltonian, chi: PauliTerm,
                 energies: SingleParticleEnergies):
        self.hext = hext
        self.chi = chi
        self.graph = frustration_graph(hext)
        self.transfer = transfer(hext, self.graph)
        self.poly = weighted_independence_polynomial(self.graph)
        ks = clique_from_mode(hext, chi)
        if not ks:
            raise NotSimplicialError("chi commutes with every Hamiltonian term")
        reduced, _ = self.graph.remove_set(ks)
        self.poly_minus_ks = weighted_independence_polynomial(reduced)
        self.energies = energies


def incognito_mode(hext: Hamiltonian, chi: PauliTerm, index: int,
                   energies: SingleParticleEnergies,
                   _ctx: _ModeContext | None = None) -> IncognitoMode:
    """Build mode ``index`` (0-based into the ascending energy list).

    Requires the energy to be simple: the normalization involves the
    derivative of the independence polynomial at the root, which vanishes
    for repeated roots.
    """
    flat = energies.flat()
    if not 0 <= index < len(flat):
        raise ValueError(f"mode index {index} out of range")
    for e, m in energies.energies:
        if m > 1 and abs(e - flat[index]) <= 1e-9 * e:
            raise DegenerateModeError(
                f"energy {e:.12g} has multiplicity {m}; mode construction refused")
    ctx = _ctx or _ModeContext(hext, chi, energies)
    eps = flat[index]
    u = 1.0 / eps
    x = -u * u
    nsq = 16.0 * u * u * ctx.poly_minus_ks(x) * ctx.poly.deriv(x)
    if not nsq > 0:
        raise ConditioningError(
            f"normalization squared is {nsq:.3e} at mode {index}; "
            "expected positive (interlacing of the reduced polynomial)")
    norm = float(np.sqrt(nsq))
    chi_op = OperatorSum.from_term(chi)
    op = opsum_mul(opsum_mul(ctx.transfer.evaluate(-u), chi_op), ctx.transfer.evaluate(u))
    return IncognitoMode(index, u, eps, norm, (1.0 / norm) * op)


def all_modes(hext: Hamiltonian, chi: PauliTerm,
              energies: SingleParticleEnergies) -> list[IncognitoMode]:
    ctx = _ModeContext(hext, chi, energies)
    return [incognito_mode(hext, chi, j, energies, _ctx=ctx)
            for j in range(len(energies.flat()))]


def reconstruct(modes: Sequence[IncognitoMode],
                energies: SingleParticleEnergies) -> OperatorSum:
    """sum_k e_k [psi_k, psi_k^dagger]; equals the extended Hamiltonian."""
    flat = energies.flat()
    if len(modes) != len(flat):
        raise ValueError(f"need all {len(flat)} modes, got {len(modes)}")
    n = modes[0].op.n
    acc = OperatorSum.zero(n)
    for mode in modes:
        acc = acc + mode.energy * opsum_comm(mode.op, mode.dag)
    return acc


def mode_car_residual(modes: Sequence[IncognitoMode]) -> float:
    """Worst deviation from the canonical anticommutation relations."""
    n = modes[0].op.n
    ident = OperatorSum.identity(n)
    worst = 0.0
    for i, mi in enumerate(modes):
        for j, mj in enumerate(modes):
            pair = opsum_anticomm(mi.op, mj.dag)
            target = ident if i == j else OperatorSum.zero(n)
            worst = max(worst, (pair - target).max_abs_coeff())
            if j >= i:
                worst = max(worst, opsum_anticomm(mi.op, mj.op).max_abs_coeff())
    return worst


def ladder_residual(hext: Hamiltonian, mode: IncognitoMode) -> float:
    """Residual of [H, psi] - 2 e psi (equivalently [H, psi^dag] + 2 e psi^dag)."""
    hop = OperatorSum.from_terms(hext.n, hext.terms)
    raise_part = (opsum_comm(hop, mode.op) - 2.0 * mode.energy * mode.op).max_abs_coeff()
    lower_part = (opsum_comm(hop, mode.dag) + 2.0 * mode.energy * mode.dag).max_abs_coeff()
    return max(raise_part, lower_part)


def higher_hamiltonian(h: Hamiltonian, k: int,
                       energies: SingleParticleEnergies) -> OperatorSum:
    """Closed form for the k-th commuting Hamiltonian of the hierarchy.

    H^(k) = sum_j u_j^(-k) / d_u[P(-u^2)]_{u_j}
            * [T(-u_j) T'(u_j) - (-1)^k T(u_j) T'(-u_j)],
    requiring simple roots.  k=1 reproduces the Hamiltonian itself.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if any(m > 1 for _, m in energies.energies):
        raise DegenerateModeError("higher Hamiltonians need simple roots")
    graph = frustration_graph(h)
    t = transfer(h, graph)
    poly = weighted_independence_polynomial(graph)
    acc = OperatorSum.zero(h.n)
    sign = (-1.0) ** k
    for eps, _ in energies.energies:
        u = 1.0 / eps
        x = -u * u
        denom = -2.0 * u * poly.deriv(x)
        term = opsum_mul(t.evaluate(-u), t.derivative(u)) \
            - sign * opsum_mul(t.evaluate(u), t.derivative(-u))
        acc = acc + (u ** (-k) / denom) * term
    return acc


def check_fundamental_identity(hext: Hamiltonian, chi: PauliTerm,
                               ks: Sequence[int], u: float) -> float:
    """Dense operator-norm residual of the simplicial-clique identity

    T(u) (1 + u sum_{v in ks} h_v) chi T(-u)
        = P(-u^2) (1 - u sum_{v in ks} h_v) chi .
    """
    graph = frustration_graph(hext)
    t = transfer(hext, graph)
    poly = weighted_independence_polynomial(graph)
    hsum = OperatorSum.from_terms(hext.n, [hext.terms[v] for v in ks])
    ident = OperatorSum.identity(hext.n)
    chi_op = OperatorSum.from_term(chi)
    lhs = opsum_mul(opsum_mul(t.evaluate(u), ident + u * hsum),
                    opsum_mul(chi_op, t.evaluate(-u)))
    rhs = poly.at_minus_u2(u) * opsum_mul(ident - u * hsum, chi_op)
    return float(np.linalg.norm(to_dense(lhs - rhs), 2))


def zero_eigenvector_residual(mode: IncognitoMode, t: TransferOperator) -> float:
    """T(u_j) psi_j and psi_j^dag T(u_j) both vanish."""
    tu = t.evaluate(mode.u)
    return max(opsum_mul(tu, mode.op).max_abs_coeff(),
               opsum_mul(mode.dag, tu).max_abs_coeff())


def exchange_algebra_residual(mode: IncognitoMode, t: TransferOperator,
                              u: float) -> float:
    """(u_j + u) T(u) psi_j - (u_j - u) psi_j T(u) vanishes for any u."""
    tu = t.evaluate(u)
    lhs = (mode.u + u) * opsum_mul(tu, mode.op)
    rhs = (mode.u - u) * opsum_mul(mode.op, tu)
    return (lhs - rhs).max_abs_coeff()
