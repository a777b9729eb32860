"""Solving for the stable-letter dilations and the translation parts on generators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..freegrp import abelianization
from ..intlinalg import solve_integer_system
from ..ogroup import Q, Z, Z2, LexVector, OAutomorphism
from ..treecalc import end_homomorphism, scale_action
from .graph import GraphOfGroups

SCALE_Q = "scaleq"
SHEAR_Z2 = "shearz2"
STRATEGIES = (SCALE_Q, SHEAR_Z2)


class InfeasibleError(ValueError):
    def __init__(self, message: str, edge: Optional[str] = None, tau_e=None, tau_ebar=None):
        super().__init__(message)
        self.edge = edge
        self.tau_e = tau_e
        self.tau_ebar = tau_ebar


def edge_tau(G: GraphOfGroups, ends: dict, eid: str) -> LexVector:
    """tau_e(alpha_e(s_e)) in the tree of the origin vertex."""
    e = G.edge(eid)
    v = G.vertex(e.origin)
    return end_homomorphism(v.action, ends[eid], v.embed(e.alpha))


def solve_dilation(strategy: str, a: LexVector, b: LexVector, edge: Optional[str] = None) -> OAutomorphism:
    """An o-automorphism theta with theta(a) = b, for positive a and b."""
    strategy = strategy.lower()
    if strategy == SCALE_Q:
        if a.sig != Q:
            raise InfeasibleError(f"scaleq needs weights in Q, got {a.sig}", edge, a, -b)
        return OAutomorphism.scale(b.coords[0] / a.coords[0], Q)
    if strategy == SHEAR_Z2:
        if a.sig != Z2:
            raise InfeasibleError(f"shearz2 needs weights in ZxZ, got {a.sig}", edge, a, -b)
        (p, q), (p2, q2) = a.coords, b.coords
        if p != p2:
            raise InfeasibleError(
                f"a shear fixes the leading coordinate: tau_e = {a}, tau_ebar = {-b}", edge, a, -b
            )
        if p == 0:
            if q != q2:
                raise InfeasibleError(f"no shear moves {a} to {b}", edge, a, -b)
            return OAutomorphism.identity(Z2)
        if (q2 - q) % p:
            raise InfeasibleError(f"shear parameter {(q2 - q)}/{p} is not an integer", edge, a, -b)
        return OAutomorphism.shear((q2 - q) // p, Z2)
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class ThetaSolution:
    thetas: dict  # edge id -> OAutomorphism (identity where g_e = 1)
    graph: GraphOfGroups  # with tree-side rescalings applied
    rescalings: dict = field(default_factory=dict)  # vertex id -> OAutomorphism
    taus: dict = field(default_factory=dict)  # edge id -> tau_e(alpha_e(s_e))

    def __getitem__(self, eid):
        return self.thetas[eid]


def solve_theta_ge(G: GraphOfGroups, ends: dict, strategy: str) -> ThetaSolution:
    sig = G.sig
    ident = OAutomorphism.identity(sig)
    thetas = {e.id: ident for e in G.edges}
    rescalings = {}
    # tree side: walk out from the first vertex, rescaling each new vertex tree
    vertices = {v.id: v for v in G.vertices}
    root = G.vertices[0].id
    done = {root}
    queue = deque([root])
    while queue:
        near = queue.popleft()
        for e in G.edges:
            if not e.in_tree or e.origin != near:
                continue
            far = G.terminus(e.id)
            if far in done:
                continue
            done.add(far)
            queue.append(far)
            f = G.reverse(e.id)  # origin at the far vertex
            if f.alpha is None:
                continue
            cur = G.with_vertices(vertices.values())
            t_far = edge_tau(cur, ends, f.id)
            t_near = edge_tau(cur, ends, e.id)
            eta = solve_dilation(strategy, abs(t_far), abs(t_near), f.id)
            rescalings[far] = eta
            vertices[far] = vertices[far].with_action(scale_action(vertices[far].action, eta))
    H = G.with_vertices([vertices[v.id] for v in G.vertices])
    taus = {e.id: edge_tau(H, ends, e.id) for e in H.edges if e.alpha is not None}
    for e in H.positive_edges():
        r = H.reverse(e.id)
        if e.alpha is None:
            continue
        te, tr = taus[e.id], taus[r.id]
        if te.sign() * tr.sign() >= 0:
            raise InfeasibleError("end homomorphism values do not have opposite signs", e.id, te, tr)
        if e.in_tree:
            if te + tr != LexVector.zero(sig):
                raise ArithmeticError(f"tree edge {e.id} not balanced after rescaling")
            continue
        theta = solve_dilation(strategy, te, -tr, e.id)
        if theta(te) + tr != LexVector.zero(sig):
            raise ArithmeticError(f"solver postcondition failed on {e.id}")
        thetas[e.id] = theta
    return ThetaSolution(thetas, H, rescalings, taus)


@dataclass
class C5Solution:
    feasible: bool
    rhos: dict  # (vertex id, generator name) -> int
    equations: list  # (label, coefficients dict, rhs)
    certificate: str = ""

    def to_json(self) -> dict:
        out = {"feasible": self.feasible}
        if self.feasible:
            out["rho"] = {f"{v}.{g}": r for (v, g), r in self.rhos.items()}
        else:
            out["certificate"] = self.certificate
        return out


def c5_equations(G: GraphOfGroups, ends: dict) -> list:
    """Per positive edge: sum u_i rho_i = mu and sum v_i rho_i = mu with mu = -(tau_e + tau_ebar)."""
    eqs = []
    for e in G.positive_edges():
        if e.alpha is None:
            continue
        r = G.reverse(e.id)
        mu = -(edge_tau(G, ends, e.id) + edge_tau(G, ends, r.id))
        rhs = mu.coords[0]
        for side in (e, r):
            v = G.vertex(side.origin)
            exps = abelianization(side.alpha, v.alphabet.rank)
            coeffs = {(v.id, n): c for n, c in zip(v.alphabet.names, exps) if c}
            eqs.append((side.id, coeffs, rhs))
    return eqs


def solve_c5_prime(G: GraphOfGroups, ends: dict) -> C5Solution:
    if G.sig != Z:
        raise ValueError("the integer translation-part solver needs weights in Z")
    variables = [(v.id, n) for v in G.vertices for n in v.alphabet.names]
    eqs = c5_equations(G, ends)
    A = [[coeffs.get(x, 0) for x in variables] for _, coeffs, _ in eqs]
    b = [rhs for _, _, rhs in eqs]
    res = solve_integer_system(A, b)
    if not res.feasible:
        label = eqs[res.row][0] if res.row is not None and res.row < len(eqs) else "?"
        cert = f"echelon row {res.row} (from edge {label}): {res.reason}"
        return C5Solution(False, {}, eqs, cert)
    rhos = dict(zip(variables, res.solution))
    for label, coeffs, rhs in eqs:
        if sum(c * rhos[x] for x, c in coeffs.items()) != rhs:
            raise ArithmeticError(f"substitution check failed on {label}")
    return C5Solution(True, rhos, eqs)
