"""Greedy weak-regularity decomposition in a Hilbert space.

Given ``a`` in the unit ball and a dictionary ``R`` of atoms of norm at most
one, repeatedly remove the best-correlated atom::

    a_{i+1} = a_i - <r, a_i> r

until ``||a_i||_R <= 1/sqrt(k)``. Since each step lowers ``||a_i||^2`` by
``<r, a_i>^2 (2 - ||r||^2) >= 1/k``, at most ``k`` steps are taken and
``a - a_i`` is a combination of at most ``k`` atoms with coefficients in
``[-1, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

from .config import DEFAULT_TOL, Tolerances
from .errors import PreconditionError
from .hilbert import (EXACT, Dictionary, SymTensor, hilbert_norm, inner, seminorm)


@dataclass(frozen=True)
class Decomposition:
    """Record of one greedy run.

    ``target`` is the decomposed element, ``energy_log[i] = ||a_i||^2`` for
    ``i = 0..steps``, and ``certified`` is False when the dictionary's
    seminorm is only a lower bound (then the final threshold test proves
    nothing about the true residual seminorm).
    """
    target: SymTensor
    atoms: tuple
    coeffs: tuple
    residual: SymTensor
    energy_log: tuple
    k: int
    certified: bool = True
    final_seminorm: float = 0.0

    @property
    def steps(self) -> int:
        return len(self.atoms)

    def approximant(self) -> SymTensor:
        out = SymTensor.zeros(self.target.order, self.target.dim)
        for c, r in zip(self.coeffs, self.atoms):
            out = out + c * r
        return out

    def to_dict(self) -> dict:
        return {
            "target": self.target.to_dict(),
            "atoms": [a.to_dict() for a in self.atoms],
            "coeffs": list(self.coeffs),
            "residual": self.residual.to_dict(),
            "energy_log": list(self.energy_log),
            "k": self.k,
            "steps": self.steps,
            "certified": self.certified,
            "final_seminorm": self.final_seminorm,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Decomposition":
        return cls(
            target=SymTensor.from_dict(doc["target"]),
            atoms=tuple(SymTensor.from_dict(a) for a in doc["atoms"]),
            coeffs=tuple(float(c) for c in doc["coeffs"]),
            residual=SymTensor.from_dict(doc["residual"]),
            energy_log=tuple(float(e) for e in doc["energy_log"]),
            k=int(doc["k"]),
            certified=bool(doc.get("certified", True)),
            final_seminorm=float(doc.get("final_seminorm", 0.0)),
        )


def greedy_decompose(a: SymTensor, d: Dictionary, k: int,
                     tol: Tolerances = DEFAULT_TOL) -> Decomposition:
    """Approximate ``a`` by at most ``k`` dictionary atoms.

    The best atom (the seminorm witness) is taken at every step. The loop
    continues only while ``||a_i||_R > 1/sqrt(k) + tol.stop_slack``.

    Raises:
        PreconditionError: ``k < 1`` or ``||a|| > 1``.
    """
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    if hilbert_norm(a) > 1.0 + tol.atol:
        raise PreconditionError(f"||a|| = {hilbert_norm(a):.6g} exceeds 1")
    threshold = 1.0 / math.sqrt(k) + tol.stop_slack
    cur = a
    atoms: List[SymTensor] = []
    coeffs: List[float] = []
    energy = [inner(a, a)]
    sv = seminorm(cur, d, tol)
    while sv.value > threshold and len(atoms) < k:
        r = sv.witness
        c = inner(r, cur)
        cur = cur - c * r
        atoms.append(r)
        coeffs.append(c)
        energy.append(inner(cur, cur))
        sv = seminorm(cur, d, tol)
    return Decomposition(a, tuple(atoms), tuple(coeffs), cur, tuple(energy), k,
                         certified=(d.kind == EXACT and sv.value <= threshold),
                         final_seminorm=sv.value)


@dataclass
class EnergyReport:
    # per step: (||a_i||^2, coeff, ||r||^2, ||a_{i+1}||^2, predicted, violation)
    rows: list = field(default_factory=list)
    max_violation: float = 0.0
    chain_ok: bool = True
    max_chain_excess: float = 0.0
    coeff_mismatch: float = 0.0

    @property
    def passed(self) -> bool:
        tol = DEFAULT_TOL.atol
        return self.max_violation <= tol and self.chain_ok and self.coeff_mismatch <= tol

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "max_violation": self.max_violation,
                "chain_ok": self.chain_ok, "max_chain_excess": self.max_chain_excess,
                "coeff_mismatch": self.coeff_mismatch, "passed": self.passed}


def _reconstruction_defect(dec: Decomposition) -> float:
    return hilbert_norm(dec.target - (dec.approximant() + dec.residual))


def verify_energy_identity(dec: Decomposition, d: Dictionary = None,
                           tol: Tolerances = DEFAULT_TOL) -> EnergyReport:
    """Recompute ``||a_{i+1}||^2 = ||a_i||^2 - <r,a_i>^2 (2 - ||r||^2)`` per step.

    The iterates are rebuilt from ``target`` and the recorded atoms, so the
    check does not trust ``energy_log``. Also checks the chained bound
    ``||a_i||^2 <= 1 - i/k`` for every step the loop took. ``d`` is accepted
    for interface symmetry; the identity does not depend on it.

    Raises:
        PreconditionError: the decomposition does not reconstruct its target.
    """
    defect = _reconstruction_defect(dec)
    if defect > tol.atol:
        raise PreconditionError(f"inconsistent decomposition: reconstruction defect {defect:.3g}")
    report = EnergyReport()
    cur = dec.target
    for i, (c, r) in enumerate(zip(dec.coeffs, dec.atoms), start=1):
        e_prev = inner(cur, cur)
        proj = inner(r, cur)
        report.coeff_mismatch = max(report.coeff_mismatch, abs(proj - c))
        r2 = inner(r, r)
        cur = cur - proj * r
        e_next = inner(cur, cur)
        predicted = e_prev - proj ** 2 * (2.0 - r2)
        viol = abs(e_next - predicted)
        report.rows.append((e_prev, proj, r2, e_next, predicted, viol))
        report.max_violation = max(report.max_violation, viol)
        excess = e_next - (1.0 - i / dec.k)
        report.max_chain_excess = max(report.max_chain_excess, excess)
        if excess > tol.atol:
            report.chain_ok = False
    return report


def q_k_membership(dec: Decomposition, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``target - residual`` is a ``[-1, 1]`` combination of the atoms."""
    if any(not (-1.0 <= c <= 1.0) for c in dec.coeffs):
        return False
    if len(dec.coeffs) > dec.k:
        return False
    return _reconstruction_defect(dec) <= tol.atol
