"""Total, bipartite, and genuinely tripartite correlation quantifiers.

Pure three-qubit states get exact closed forms built from one-qubit
entropies and pairwise entanglement of formation, after relabeling parties
so the pairwise mutual informations satisfy I(ab) >= I(ac) >= I(bc). Mixed
states fall back to measurement optimization and are flagged as such.
Includes the named state families, the five-amplitude canonical form, the
residual three-tangle, and the n-party generalization of the genuine-total
quantifier.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalInvariantError, UnsupportedInputError, ValidationError
from .qstate import (
    DensityMatrix,
    PureState,
    density_of,
    partial_trace,
    permute_parties,
    relative_entropy,
    von_neumann_entropy,
)
from .bipartite import (
    GRID_DEFAULT,
    REFINE_ITERS_DEFAULT,
    REFINE_TOL_DEFAULT,
    TIE_TOL,
    MeasurementBasis,
    _min_conditional_entropy,
    _outcome_entropy_sum,
    concurrence,
    eof_from_concurrence,
    one_to_rest_concurrence,
    symmetrized_classical,
    symmetrized_discord,
    to_pure,
)

CUT_PRODUCT_TOL = 1e-6
DOUBLE_GRID_DEFAULT = 30
SWEEP_STEP_DEFAULT = 0.01
CROSSOVER_TOL = 1e-4

CSV_HEADER = "p,family,T,J,D,T2,T3,J2,J3,D2,D3,tangle"


@dataclass(frozen=True)
class PartyOrdering:
    """Relabeling (a, b, c) under which I(ab) >= I(ac) >= I(bc).

    permutation holds the original labels in their canonical roles;
    sorted_mutual_infos are the pairwise mutual informations in that order.
    Ties break lexicographically on the original labels, with 1e-10 slack.
    """

    permutation: tuple
    sorted_mutual_infos: tuple

    def __post_init__(self):
        i_ab, i_ac, i_bc = self.sorted_mutual_infos
        if i_ab < i_ac - TIE_TOL or i_ac < i_bc - TIE_TOL:
            raise InternalInvariantError(
                f"mutual informations not descending: {self.sorted_mutual_infos!r}"
            )


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation quantifiers of a three-qubit state, in bits.

    tangle is dimensionless and None on the optimizer (mixed) path, where
    the residual formula does not apply.
    """

    T: float
    J: float
    D: float
    T2: float
    T3: float
    J2: float
    J3: float
    D2: float
    D3: float
    tangle: float | None
    pairwise_mutual: tuple
    cut_mutual: tuple
    ordering: PartyOrdering
    pure: bool
    method: str

    def __post_init__(self):
        # optimizer results carry grid/refinement noise; closed forms do not
        slack = 1e-9 if self.method == "closed-form" else 1e-6
        checks = [self.T3 - (self.T - self.T2), self.J3 - (self.J - self.J2),
                  self.D3 - (self.D - self.D2)]
        if self.method == "closed-form":
            checks.append(self.T - (self.J + self.D))
        worst = max(abs(x) for x in checks)
        if worst > slack:
            raise InternalInvariantError(f"report decomposition off by {worst:.3e}")
        fields = [self.T, self.J, self.D, self.T2, self.T3, self.J2, self.J3,
                  self.D2, self.D3]
        if self.tangle is not None:
            fields.append(self.tangle)
        low = min(fields)
        if low < -slack:
            raise InternalInvariantError(f"negative report field {low!r}")

    def to_dict(self):
        return {
            "T": self.T, "J": self.J, "D": self.D,
            "T2": self.T2, "T3": self.T3,
            "J2": self.J2, "J3": self.J3,
            "D2": self.D2, "D3": self.D3,
            "tangle": self.tangle,
            "pairwise_mutual": list(self.pairwise_mutual),
            "cut_mutual": list(self.cut_mutual),
            "ordering": {
                "permutation": list(self.ordering.permutation),
                "sorted_mutual_infos": list(self.ordering.sorted_mutual_infos),
            },
            "pure": self.pure,
            "method": self.method,
        }


@dataclass(frozen=True)
class AcinForm:
    """Five-amplitude canonical form of a three-qubit pure state.

    lambda0 |000> + lambda1 e^{i theta} |100> + lambda2 |101>
    + lambda3 |110> + lambda4 |111>, with nonnegative lambdas whose squares
    sum to one.
    """

    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    theta: float = 0.0

    def __post_init__(self):
        lams = self.lambdas
        if min(lams) < -1e-12:
            raise ValidationError(f"negative coefficient in {lams!r}")
        total = sum(x * x for x in lams)
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"coefficient squares sum to {total!r}, not 1")
        if not -1e-12 <= self.theta < 2 * math.pi + 1e-12:
            raise ValidationError(f"theta {self.theta!r} outside [0, 2*pi)")

    @property
    def lambdas(self):
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3,
                self.lambda4)


def _as_three_party(rho, what):
    if isinstance(rho, PureState):
        rho = density_of(rho)
    if not isinstance(rho, DensityMatrix):
        raise ValidationError(f"{what} expects a PureState or DensityMatrix")
    if rho.n_parties != 3:
        raise ValidationError(f"{what} expects 3 parties, got {rho.n_parties}")
    return rho


def _pure_three(psi, what):
    if isinstance(psi, DensityMatrix):
        psi = to_pure(psi)  # raises UnsupportedInputError when mixed
    if not isinstance(psi, PureState):
        raise ValidationError(f"{what} expects a PureState or DensityMatrix")
    if psi.n_qubits != 3:
        raise ValidationError(f"{what} expects three qubits, got {psi.n_qubits}")
    return psi


def _entropies_and_pairs(rho):
    labels = rho.parties
    s1 = {x: von_neumann_entropy(partial_trace(rho, [x])) for x in labels}
    pair_rho = {}
    pair_i = {}
    for i, j in itertools.combinations(labels, 2):
        red = partial_trace(rho, [i, j])
        pair_rho[(i, j)] = red
        pair_i[(i, j)] = s1[i] + s1[j] - von_neumann_entropy(red)
    return s1, pair_rho, pair_i


def _pair_lookup(table, i, j):
    return table[(i, j)] if (i, j) in table else table[(j, i)]


def total_information(rho) -> float:
    """T = S(rho_a) + S(rho_b) + S(rho_c) - S(rho)."""
    rho = _as_three_party(rho, "total_information")
    s1 = [von_neumann_entropy(partial_trace(rho, [x])) for x in rho.parties]
    value = sum(s1) - von_neumann_entropy(rho)
    if value < -1e-9:
        raise InternalInvariantError(f"total information {value!r} < 0")
    return max(0.0, value)


def canonical_ordering(rho) -> PartyOrdering:
    """Relabeling making the pairwise mutual informations descending.

    Candidate permutations are scanned in lexicographic order of the
    original labels, so fully symmetric states keep the identity.
    """
    rho = _as_three_party(rho, "canonical_ordering")
    _, _, pair_i = _entropies_and_pairs(rho)
    for perm in itertools.permutations(sorted(rho.parties)):
        x, y, z = perm
        i_xy = _pair_lookup(pair_i, x, y)
        i_xz = _pair_lookup(pair_i, x, z)
        i_yz = _pair_lookup(pair_i, y, z)
        if i_xy >= i_xz - TIE_TOL and i_xz >= i_yz - TIE_TOL:
            return PartyOrdering(perm, (i_xy, i_xz, i_yz))
    raise InternalInvariantError("no permutation orders the mutual informations")


def genuine_total(rho) -> float:
    """T3 = T - max pairwise mutual information."""
    rho = _as_three_party(rho, "genuine_total")
    _, _, pair_i = _entropies_and_pairs(rho)
    value = total_information(rho) - max(pair_i.values())
    return max(0.0, value)


def genuine_total_via_relative_entropy(rho) -> float:
    """min over the three cuts of S(rho || rho_ij (x) rho_k).

    Independent route to genuine_total: builds each two-versus-one product
    state explicitly and measures the relative-entropy distance.
    """
    rho = _as_three_party(rho, "genuine_total_via_relative_entropy")
    values = []
    for k in rho.parties:
        ij = [x for x in rho.parties if x != k]
        product = np.kron(partial_trace(rho, ij).matrix,
                          partial_trace(rho, [k]).matrix)
        sigma = permute_parties(DensityMatrix(product, ij + [k]), rho.parties)
        values.append(relative_entropy(rho, sigma))
    return min(values)


class _ClosedForm:
    """Shared scaffolding for the pure-state closed forms."""

    __slots__ = ("psi", "rho", "s1", "pair_rho", "pair_i", "order", "eof",
                 "s_rho")

    def __init__(self, psi):
        self.psi = psi
        self.rho = density_of(psi)
        self.s1, self.pair_rho, self.pair_i = _entropies_and_pairs(self.rho)
        self.s_rho = von_neumann_entropy(self.rho)
        self.order = canonical_ordering(self.rho)
        self.eof = {
            pair: eof_from_concurrence(concurrence(red))
            for pair, red in self.pair_rho.items()
        }

    def e(self, i, j):
        return _pair_lookup(self.eof, i, j)

    def s(self, x):
        return self.s1[x]

    @property
    def abc(self):
        return self.order.permutation

    def discord_dir(self, i, j):
        # D_{i:j} with measurement on j; k is the remaining party
        (k,) = [x for x in self.psi.labels if x not in (i, j)]
        return self.s(j) - self.s(k) + self.e(i, k)

    def pair_discord(self, i, j):
        return min(self.discord_dir(i, j), self.discord_dir(j, i))

    def pair_classical(self, i, j):
        # J_{i:j} = S_i - E_ik; symmetrized value is the larger direction
        (k,) = [x for x in self.psi.labels if x not in (i, j)]
        j_ij = self.s(i) - self.e(i, k)
        (k2,) = [x for x in self.psi.labels if x not in (j, i)]
        j_ji = self.s(j) - self.e(j, k2)
        return max(j_ij, j_ji)

    def cut_mutual(self):
        out = []
        a, b, c = self.abc
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            s_pair = von_neumann_entropy(_pair_lookup(self.pair_rho, x, y))
            out.append(s_pair + self.s(z) - self.s_rho)
        return tuple(out)


def total_classical_pure(psi) -> float:
    """J = S(rho_b) + S(rho_c) - E(rho_bc) in the canonical ordering."""
    cf = _ClosedForm(_pure_three(psi, "total_classical_pure"))
    _, b, c = cf.abc
    return max(0.0, cf.s(b) + cf.s(c) - cf.e(b, c))


def total_discord_pure(psi) -> float:
    """D = S(rho_a) + E(rho_bc) in the canonical ordering."""
    cf = _ClosedForm(_pure_three(psi, "total_discord_pure"))
    a, b, c = cf.abc
    return max(0.0, cf.s(a) + cf.e(b, c))


def bipartite_parts_pure(psi) -> tuple:
    """(J2, D2): the bipartite shares of the total correlations.

    J2 is the largest symmetrized pairwise classical correlation, which the
    closed form S(rho_b) - E(rho_bc) realizes exactly. D2 uses the ordered
    closed form S(rho_a) - S(rho_c) + E(rho_bc) whenever every cut mutual
    information exceeds 1e-6; on states that are product across some cut the
    definitional minimum over the three symmetrized pairwise discords is
    returned instead (for those states the ordered form and the definition
    disagree, and the definition wins).
    """
    cf = _ClosedForm(_pure_three(psi, "bipartite_parts_pure"))
    a, b, c = cf.abc
    j2 = max(0.0, cf.s(b) - cf.e(b, c))
    if min(cf.cut_mutual()) > CUT_PRODUCT_TOL:
        d2 = cf.s(a) - cf.s(c) + cf.e(b, c)
    else:
        d2 = min(cf.pair_discord(i, j)
                 for i, j in itertools.combinations(cf.psi.labels, 2))
    return j2, max(0.0, d2)


def genuine_classical(psi) -> float:
    """J3 = S(rho_c), the smallest one-qubit entropy."""
    cf = _ClosedForm(_pure_three(psi, "genuine_classical"))
    return cf.s(cf.abc[2])


def genuine_discord(psi) -> float:
    """D3 = S(rho_c); genuine classical and quantum correlations coincide."""
    cf = _ClosedForm(_pure_three(psi, "genuine_discord"))
    return cf.s(cf.abc[2])


def three_tangle(psi) -> float:
    """Residual tangle tau = C_a^2 - C_ab^2 - C_ac^2 of a pure state."""
    psi = _pure_three(psi, "three_tangle")
    rho = density_of(psi)
    first = psi.labels[0]
    c_one = one_to_rest_concurrence(partial_trace(rho, [first]))
    tau = c_one * c_one
    for other in psi.labels[1:]:
        c_pair = concurrence(partial_trace(rho, [first, other]))
        tau -= c_pair * c_pair
    if tau < -1e-9:
        raise InternalInvariantError(f"residual tangle {tau!r} < 0")
    return max(0.0, tau)


def acin_state(form: AcinForm, labels=None) -> PureState:
    """State vector of the canonical five-amplitude form."""
    if not isinstance(form, AcinForm):
        raise ValidationError("acin_state expects an AcinForm")
    amp = np.zeros(8, dtype=complex)
    l0, l1, l2, l3, l4 = form.lambdas
    amp[0b000] = l0
    amp[0b100] = l1 * complex(math.cos(form.theta), math.sin(form.theta))
    amp[0b101] = l2
    amp[0b110] = l3
    amp[0b111] = l4
    return PureState(amp, labels)


def ghz_state(n_qubits: int = 3, labels=None) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2)."""
    if not 2 <= int(n_qubits) <= 6:
        raise ValidationError(f"n_qubits {n_qubits!r} outside 2..6")
    amp = np.zeros(2 ** int(n_qubits), dtype=complex)
    amp[0] = amp[-1] = 1.0 / math.sqrt(2.0)
    return PureState(amp, labels)


def w_state(labels=None) -> PureState:
    """(|001> + |010> + |100>)/sqrt(3)."""
    amp = np.zeros(8, dtype=complex)
    amp[0b001] = amp[0b010] = amp[0b100] = 1.0 / math.sqrt(3.0)
    return PureState(amp, labels)


def _check_p(p):
    p = float(p)
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise ValidationError(f"p {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def family_ghz_tilde(p: float, labels=None) -> PureState:
    """sqrt(p) GHZ + sqrt(1-p) |100>; the branches are orthogonal."""
    p = _check_p(p)
    amp = np.zeros(8, dtype=complex)
    amp[0b000] = amp[0b111] = math.sqrt(p / 2.0)
    amp[0b100] = math.sqrt(1.0 - p)
    return PureState(amp, labels)


def family_w_tilde(p: float, labels=None) -> PureState:
    """sqrt(p) W + sqrt(1-p) |000>; the branches are orthogonal."""
    p = _check_p(p)
    amp = np.zeros(8, dtype=complex)
    amp[0b001] = amp[0b010] = amp[0b100] = math.sqrt(p / 3.0)
    amp[0b000] = math.sqrt(1.0 - p)
    return PureState(amp, labels)


FAMILIES = {"ghz_tilde": family_ghz_tilde, "w_tilde": family_w_tilde}


def correlation_report(state, require_pure=False, grid=GRID_DEFAULT,
                       refine_iters=REFINE_ITERS_DEFAULT,
                       tol=REFINE_TOL_DEFAULT) -> CorrelationReport:
    """Assemble every quantifier for a three-qubit state.

    Pure inputs (largest eigenvalue above 1 - 1e-8) take the closed-form
    path; mixed inputs run the measurement optimizers and leave tangle
    unset. require_pure turns a mixed input into an error instead.
    """
    rho = _as_three_party(state, "correlation_report")
    try:
        psi = to_pure(state if isinstance(state, PureState) else rho)
    except UnsupportedInputError:
        if require_pure:
            raise
        psi = None
    if psi is not None:
        return _report_pure(psi)
    return _report_mixed(rho, grid, refine_iters, tol)


def _clip(x, slack=1e-9):
    if x < -slack:
        raise InternalInvariantError(f"negative quantifier {x!r}")
    return max(0.0, float(x))


def _report_pure(psi):
    cf = _ClosedForm(psi)
    a, b, c = cf.abc
    t = sum(cf.s1.values()) - cf.s_rho
    j = cf.s(b) + cf.s(c) - cf.e(b, c)
    d = cf.s(a) + cf.e(b, c)
    i_sorted = cf.order.sorted_mutual_infos
    t2 = i_sorted[0]
    j2 = max(cf.s(b) - cf.e(b, c), 0.0)
    if min(cf.cut_mutual()) > CUT_PRODUCT_TOL:
        d2 = cf.s(a) - cf.s(c) + cf.e(b, c)
    else:
        d2 = min(cf.pair_discord(i, j2_)
                 for i, j2_ in itertools.combinations(psi.labels, 2))
    return CorrelationReport(
        T=_clip(t), J=_clip(j), D=_clip(d),
        T2=_clip(t2), T3=_clip(t - t2),
        J2=_clip(j2), J3=_clip(j - j2),
        D2=_clip(d2), D3=_clip(d - d2),
        tangle=three_tangle(psi),
        pairwise_mutual=i_sorted,
        cut_mutual=cf.cut_mutual(),
        ordering=cf.order,
        pure=True,
        method="closed-form",
    )


def _report_mixed(rho, grid, refine_iters, tol):
    s1, pair_rho, pair_i = _entropies_and_pairs(rho)
    order = canonical_ordering(rho)
    t = total_information(rho)
    j = total_classical_mixed(rho, grid=grid, refine_iters=refine_iters, tol=tol)
    d = t - j
    kwargs = dict(grid=grid, refine_iters=refine_iters, tol=tol)
    j2 = max(symmetrized_classical(red, **kwargs) for red in pair_rho.values())
    d2 = min(symmetrized_discord(red, **kwargs) for red in pair_rho.values())
    i_sorted = order.sorted_mutual_infos
    t2 = i_sorted[0]
    a, b, c = order.permutation
    cut = []
    s_rho = von_neumann_entropy(rho)
    for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
        s_pair = von_neumann_entropy(_pair_lookup(pair_rho, x, y))
        cut.append(s_pair + s1[z] - s_rho)
    soft = 1e-6  # optimizer noise budget; closed forms keep the 1e-9 default
    return CorrelationReport(
        T=_clip(t), J=_clip(j, soft), D=_clip(d, soft),
        T2=_clip(t2), T3=_clip(t - t2),
        J2=_clip(j2, soft), J3=_clip(j - j2, soft),
        D2=_clip(d2, soft), D3=_clip(d - d2, soft),
        tangle=None,
        pairwise_mutual=i_sorted,
        cut_mutual=tuple(cut),
        ordering=order,
        pure=False,
        method="optimizer",
    )


def sweep_families(p_grid, families=("ghz_tilde", "w_tilde")):
    """Closed-form reports for each family at each p, as (p, family, report)."""
    rows = []
    for name in families:
        if name not in FAMILIES:
            raise ValidationError(f"unknown family {name!r}")
    for name in families:
        build = FAMILIES[name]
        for p in p_grid:
            rows.append((float(p), name, correlation_report(build(p))))
    return rows


def find_discord_crossover(p_lo=0.0, p_hi=1.0, step=SWEEP_STEP_DEFAULT,
                           tol=CROSSOVER_TOL):
    """Smallest p where the W-family total discord exceeds the GHZ-family's.

    Scans the grid for a sign change of the difference and bisects it down
    to the requested tolerance. Returns None when no crossover exists in
    the range.
    """

    def gap(p):
        return (total_discord_pure(family_w_tilde(p))
                - total_discord_pure(family_ghz_tilde(p)))

    grid = np.arange(p_lo, p_hi + step / 2.0, step)
    previous = None
    for p in grid:
        g = gap(float(p))
        if previous is not None and previous[1] <= 0.0 < g:
            lo, hi = previous[0], float(p)
            while hi - lo > tol:
                mid = (lo + hi) / 2.0
                if gap(mid) > 0.0:
                    hi = mid
                else:
                    lo = mid
            return (lo + hi) / 2.0
        previous = (float(p), g)
    return None


def _double_conditioned_grids(rho, slot_i, slot_j, u_vecs, v_vecs):
    """Outcome-resolved conditional states of the unmeasured qubit.

    Returns an array of shape (len(u), len(v), 4, 2, 2): the four product
    outcomes (u v, u v-perp, u-perp v, u-perp v-perp), each an unnormalized
    2x2 state of the remaining party.
    """
    slot_k = 3 - slot_i - slot_j
    perm = [slot_i, slot_j, slot_k]
    t = rho.matrix.reshape((2,) * 6).transpose(perm + [3 + p for p in perm])
    uc, vc = u_vecs.conj(), v_vecs.conj()
    m_uv = np.einsum("ax,by,xyzXYZ,aX,bY->abzZ", uc, vc, t, u_vecs, v_vecs,
                     optimize=True)
    m_u = np.einsum("ax,xyzXyZ,aX->azZ", uc, t, u_vecs, optimize=True)
    m_v = np.einsum("by,xyzxYZ,bY->bzZ", vc, t, v_vecs, optimize=True)
    r_k = np.einsum("xyzxyZ->zZ", t)
    o_uvp = m_u[:, None] - m_uv
    o_upv = m_v[None, :] - m_uv
    o_upvp = r_k[None, None] - m_u[:, None] - m_v[None, :] + m_uv
    return np.stack([m_uv, o_uvp, o_upv, o_upvp], axis=2)


def _angle_vectors(thetas, phis):
    th = np.repeat(thetas, phis.size)
    ph = np.tile(phis, thetas.size)
    vecs = np.empty((th.size, 2), dtype=complex)
    vecs[:, 0] = np.cos(th / 2.0)
    vecs[:, 1] = np.exp(1j * ph) * np.sin(th / 2.0)
    return th, ph, vecs


def double_conditional_entropy(rho, k, bases) -> float:
    """S(rho_k | product measurements on the other two parties).

    bases is a pair of MeasurementBasis for the two measured parties in
    their rho.parties order.
    """
    rho = _as_three_party(rho, "double_conditional_entropy")
    k = str(k)
    if k not in rho.parties:
        raise ValidationError(f"unknown party {k!r}; have {rho.parties!r}")
    basis_i, basis_j = bases
    measured = [x for x in rho.parties if x != k]
    slot_i, slot_j = (rho.parties.index(x) for x in measured)
    cond = _double_conditioned_grids(
        rho, slot_i, slot_j,
        basis_i.vector()[None, :], basis_j.vector()[None, :],
    )
    return float(_outcome_entropy_sum(cond)[0, 0])


def min_double_conditional_entropy(rho, k, grid=DOUBLE_GRID_DEFAULT,
                                   refine_iters=REFINE_ITERS_DEFAULT,
                                   tol=REFINE_TOL_DEFAULT) -> float:
    """Minimum of the double conditional entropy over product measurements.

    Four Bloch angles are scanned on a grid (grid points per angle) and the
    best point is refined with Nelder-Mead. For pure global states every
    product measurement already yields zero.
    """
    rho = _as_three_party(rho, "min_double_conditional_entropy")
    k = str(k)
    if k not in rho.parties:
        raise ValidationError(f"unknown party {k!r}; have {rho.parties!r}")
    measured = [x for x in rho.parties if x != k]
    slot_i, slot_j = (rho.parties.index(x) for x in measured)
    g = int(grid)
    thetas = np.linspace(0.0, math.pi, g)
    phis = np.linspace(0.0, 2.0 * math.pi, g, endpoint=False)
    th_u, ph_u, u_vecs = _angle_vectors(thetas, phis)
    best = math.inf
    best_idx = (0, 0)
    # chunk the u grid to bound the (chunk, g*g, 4, 2, 2) intermediate
    chunk = max(1, 131072 // (u_vecs.shape[0] * 4))
    for start in range(0, u_vecs.shape[0], chunk):
        u_block = u_vecs[start:start + chunk]
        cond = _double_conditioned_grids(rho, slot_i, slot_j, u_block, u_vecs)
        values = _outcome_entropy_sum(cond)
        flat = int(values.argmin())
        v_min = float(values.reshape(-1)[flat])
        if v_min < best - TIE_TOL:
            best = v_min
            best_idx = (start + flat // u_vecs.shape[0], flat % u_vecs.shape[0])
    iu, iv = best_idx
    x0 = [th_u[iu], ph_u[iu], th_u[iv], ph_u[iv]]

    def objective(x):
        u = np.array([math.cos(x[0] / 2.0),
                      complex(math.cos(x[1]), math.sin(x[1])) * math.sin(x[0] / 2.0)])
        v = np.array([math.cos(x[2] / 2.0),
                      complex(math.cos(x[3]), math.sin(x[3])) * math.sin(x[2] / 2.0)])
        cond = _double_conditioned_grids(rho, slot_i, slot_j,
                                         u[None, :], v[None, :])
        return float(_outcome_entropy_sum(cond)[0, 0])

    from scipy.optimize import minimize  # deferred import, optimizer path only

    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"maxiter": int(refine_iters), "xatol": tol,
                            "fatol": tol})
    return min(best, float(res.fun))


def total_classical_mixed(rho, grid=GRID_DEFAULT,
                          refine_iters=REFINE_ITERS_DEFAULT,
                          tol=REFINE_TOL_DEFAULT) -> float:
    """Best-effort total classical correlations of a possibly mixed state.

    Maximizes S(rho_j) - S(j|i) + S(rho_k) - S(k|ji) over the six party
    permutations with projective-measurement optimizers, so the result is a
    lower bound to the POVM-defined quantity.
    """
    rho = _as_three_party(rho, "total_classical_mixed")
    labels = rho.parties
    s1 = {x: von_neumann_entropy(partial_trace(rho, [x])) for x in labels}
    single_min = {}
    for i, j in itertools.permutations(labels, 2):
        red = partial_trace(rho, [i, j])
        slot = red.parties.index(i)
        single_min[(j, i)], _ = _min_conditional_entropy(
            red, slot, grid, refine_iters, tol
        )
    double_min = {
        k: min_double_conditional_entropy(rho, k, refine_iters=refine_iters,
                                          tol=tol)
        for k in labels
    }
    best = 0.0
    for i, j, k in itertools.permutations(labels):
        value = s1[j] - single_min[(j, i)] + s1[k] - double_min[k]
        best = max(best, value)
    return best


def _pure_n(psi, what):
    if isinstance(psi, DensityMatrix):
        psi = to_pure(psi)
    if not isinstance(psi, PureState):
        raise ValidationError(f"{what} expects a PureState or DensityMatrix")
    if not 3 <= psi.n_qubits <= 6:
        raise UnsupportedInputError(
            f"{what} supports 3 to 6 parties, got {psi.n_qubits}"
        )
    return psi


def genuine_total_n(psi) -> float:
    """Smallest bipartite mutual information over all 2^(n-1)-1 cuts."""
    psi = _pure_n(psi, "genuine_total_n")
    rho = density_of(psi)
    labels = psi.labels
    s_rho = von_neumann_entropy(rho)
    best = math.inf
    rest = labels[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            part = (labels[0],) + combo
            if len(part) == len(labels):
                continue
            comp = [x for x in labels if x not in part]
            value = (von_neumann_entropy(partial_trace(rho, part))
                     + von_neumann_entropy(partial_trace(rho, comp))
                     - s_rho)
            best = min(best, value)
    return max(0.0, best)


def genuine_qc_n(psi) -> float:
    """Genuine n-party classical correlations = genuine discord = T_n / 2."""
    return genuine_total_n(psi) / 2.0
