"""
Upper bounds on the heat current exchanged with one bath.

For a bath with uncorrelated channels ``(A_k, xi_k)``:

* ``bound1 = 4 ||H|| sum_k xi_k ||A_k||^2``
* ``bound_commutator = 2 sum_k xi_k ||[A_k, H]|| ||A_k||``
* ``bound2 = 2 sum_k xi_k dE_k ||A_k||^2``

where ``dE_k`` is the largest energy gap bridged by a nonzero matrix
element of ``A_k`` in the energy eigenbasis.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .numcore import EnergyBasis, hermitian_eig, operator_norm
from .spectral import XI_CONVENTION_NOTE

REL_SLACK = 1e-9
LEMMA_SLACK = 1e-9
ABS_SLACK = 1e-13


class BoundViolation(AssertionError):
    pass


def _commutator_norm(A, H):
    # ||C|| = sqrt(lambda_max(C^dag C)) keeps real inputs on the real eigensolver
    C = A @ H - H @ A
    lam = np.linalg.eigvalsh(C.conj().T @ C)[-1]
    return float(np.sqrt(max(lam, 0.0)))


def _basis(H, basis=None):
    return basis if basis is not None else hermitian_eig(H)


def bound1(H, bath):
    """``4 ||H|| sum_k xi_k ||A_k||^2``."""
    h = operator_norm(H)
    return float(4 * h * sum(m.xi * operator_norm(A) ** 2 for A, m in bath.channels))


def bound_commutator(H, bath):
    """``2 sum_k xi_k ||[A_k, H]|| ||A_k||``."""
    return float(2 * sum(m.xi * _commutator_norm(A, H) * operator_norm(A)
                         for A, m in bath.channels))


def delta_e(A, basis: EnergyBasis, element_tol=None, return_note=False):
    """Largest ``|E_i - E_j|`` over energy-basis elements with ``|A_ij| > element_tol``.

    ``element_tol`` defaults to ``1e-10 ||A||``.
    """
    A = np.asarray(A)
    if A.shape != (basis.dim, basis.dim):
        raise ValueError(f"operator shape {A.shape} does not match basis dim {basis.dim}")
    if element_tol is None:
        element_tol = 1e-10 * operator_norm(A)
    At = basis.to_energy_basis(A)
    E = basis.eigenvalues
    mask = np.abs(At) > element_tol
    gaps = np.abs(E[:, None] - E[None, :])[mask]
    val = float(gaps.max()) if gaps.size else 0.0
    note = None
    if val <= basis.degeneracy_tolerance:
        val = 0.0
        note = "operator numerically zero or diagonal"
    return (val, note) if return_note else val


def bound2(H, bath, element_tol=None, basis=None):
    """``2 sum_k xi_k dE_k ||A_k||^2``."""
    basis = _basis(H, basis)
    return float(2 * sum(m.xi * delta_e(A, basis, element_tol) * operator_norm(A) ** 2
                         for A, m in bath.channels))


def commutator_lemma_check(A, H, delta_e_value):
    """Check ``||[A, H]|| <= dE ||A||`` (+1e-9); returns ``(ok, slack)``."""
    slack = delta_e_value * operator_norm(A) - _commutator_norm(A, H)
    return bool(slack >= -LEMMA_SLACK), float(slack)


@dataclass
class BoundReport:
    bound1: float
    bound_commutator: float
    bound2: Optional[float]
    delta_e_per_channel: List[float]
    measured_current_abs: float
    saturation_ratio_1: Optional[float]
    saturation_ratio_2: Optional[float]
    xi_convention_note: str = XI_CONVENTION_NOTE
    operator_norms: List[float] = field(default_factory=list)
    violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {k: getattr(self, k) for k in (
            'bound1', 'bound_commutator', 'bound2', 'delta_e_per_channel',
            'measured_current_abs', 'saturation_ratio_1', 'saturation_ratio_2',
            'operator_norms', 'xi_convention_note', 'violations', 'notes')}


def _ratio(x, bound):
    return x / bound if bound > 0 else None


def _exceeds(x, bound):
    return x > bound * (1 + REL_SLACK) + ABS_SLACK


def check_bounds(H, bath, measured_current, element_tol=None, basis=None, strict=True):
    """Evaluate all bounds for one bath against a measured current.

    With ``strict=True`` a violated ordering raises :class:`BoundViolation`;
    otherwise the violation is listed in the report.
    """
    basis = _basis(H, basis)
    Jabs = abs(float(measured_current))
    norms = [operator_norm(A) for A in bath.operators]
    xis = [m.xi for m in bath.models]
    b1 = float(4 * operator_norm(H) * sum(x * n ** 2 for x, n in zip(xis, norms)))
    bc = float(2 * sum(x * _commutator_norm(A, H) * n
                       for x, A, n in zip(xis, bath.operators, norms)))
    dEs, notes = [], []
    for A, _ in bath.channels:
        dE, note = delta_e(A, basis, element_tol, return_note=True)
        dEs.append(dE)
        if note:
            notes.append(note)
    b2 = float(2 * sum(x * dE * n ** 2 for x, dE, n in zip(xis, dEs, norms)))
    violations = []
    if _exceeds(Jabs, bc):
        violations.append(f"|J| = {Jabs:.17g} exceeds bound_commutator = {bc:.17g}")
    if _exceeds(bc, b1):
        violations.append(f"bound_commutator = {bc:.17g} exceeds bound1 = {b1:.17g}")
    if _exceeds(Jabs, b2):
        violations.append(f"|J| = {Jabs:.17g} exceeds bound2 = {b2:.17g}")
    if b1 == 0:
        notes.append("all bounds vanish; saturation ratios undefined")
    rep = BoundReport(b1, bc, b2, dEs, Jabs, _ratio(Jabs, b1), _ratio(Jabs, b2),
                      operator_norms=norms,
                      violations=violations, notes=notes)
    if strict and violations:
        raise BoundViolation("; ".join(violations))
    return rep
