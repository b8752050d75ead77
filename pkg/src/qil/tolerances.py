"""Single source of truth for every numerical tolerance used by the library.

All validation thresholds live here so tests and library code agree by
construction. Values are absolute unless noted.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    qubit_norm: float = 1e-12          # |alpha|^2 + |beta|^2 = 1
    state_norm: float = 1e-10          # register Euclidean norm = 1
    unitary: float = 1e-10             # U^dag U = I
    hermitian: float = 1e-10           # H = H^dag
    projector: float = 1e-10           # M^2 = M, M >= 0
    completeness: float = 1e-10        # sum M^dag M = I
    orthogonality: float = 1e-10       # M_i^dag M_j = 0
    probability_sum: float = 1e-10     # outcome probabilities sum to 1
    encoder_norm: float = 1e-12        # encoded register norm = 1
    residue_defect: float = 1e-12      # linear + residue vs exact collapse
    density_trace: float = 1e-10       # Tr(rho) = 1
    eigenvalue_floor: float = 1e-10    # physicality: eigenvalues >= -floor
    purity_match: float = 1e-12        # purity formulas pairwise agreement
    recovery: float = 1e-10            # tomography forward-inverse, entrywise
    evolution_compose: float = 1e-9    # U(t1+t2) = U(t1) U(t2)


TOL = Tolerances()
