"""Degenerate ground states of model II through the generating expansion.

The model II ring state at parameter g splits into integer-amplitude states
psi_n collecting the basis strings with exactly n zeros; each psi_n is a
zero-energy eigenstate on its own.  Norms and correlators of psi_n reduce to
binomial sums of exact integer traces of the transfer blocks

    V = A_1 (x) A_1 + A_-1 (x) A_-1   (the S_z^2 dressing, commutes with E)
    U = A_1 (x) A_1 - A_-1 (x) A_-1   (the S_z dressing)
    X1 = (A_1 + A_-1) (x) 1,  X2 = 1 (x) (A_1 + A_-1)   (the S_x channel)

with X1 acting on the bra tensor factor and X2 on the ket factor.  Everything
here is exact integer/rational arithmetic; floats appear only in the
thermodynamic limits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import linalg

#: Configurations are tuples of m values, site 1 first.
M_VALUES = (1, 0, -1)

#: Default cap on the ring size for explicit psi_n construction.
DEFAULT_EXPAND_MAX_SITES = 10

_A1 = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=object)
_AM = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=object)
_I3 = np.eye(3, dtype=int).astype(object)
_X = _A1 + _AM
V_EXACT = np.kron(_A1, _A1) + np.kron(_AM, _AM)
U_EXACT = np.kron(_A1, _A1) - np.kron(_AM, _AM)
X1_EXACT = np.kron(_X, _I3)
X2_EXACT = np.kron(_I3, _X)


def _require_even(name: str, value: int) -> None:
    if value % 2:
        raise ValueError(
            f"{name} must be even: on an even ring the balanced-word constraint kills every odd-zero sector"
        )


class VTraceTable:
    """Exact integer traces of V powers and of the dressed words the formulas need.

    Powers are cached as they are requested; instances are cheap and the
    module keeps one shared table.
    """

    def __init__(self):
        self._powers = [np.eye(9, dtype=int).astype(object)]

    def v_power(self, m: int) -> np.ndarray:
        if m < 0:
            raise ValueError("negative power")
        while len(self._powers) <= m:
            self._powers.append(self._powers[-1] @ V_EXACT)
        return self._powers[m]

    def tr_v(self, m: int) -> int:
        return int(np.trace(self.v_power(m)))

    def tr_u_v_u(self, a: int, b: int) -> int:
        word = U_EXACT @ self.v_power(a) @ U_EXACT @ self.v_power(b)
        return int(np.trace(word))

    def tr_x_pair(self, a: int, b: int) -> int:
        """tr(X2 V^a X1 V^b) + tr(X1 V^a X2 V^b)."""
        w1 = X2_EXACT @ self.v_power(a) @ X1_EXACT @ self.v_power(b)
        w2 = X1_EXACT @ self.v_power(a) @ X2_EXACT @ self.v_power(b)
        return int(np.trace(w1)) + int(np.trace(w2))


_TABLE = VTraceTable()


@dataclass(frozen=True)
class PsiN:
    """Explicit integer-amplitude form of the n-zero sector state.

    amplitudes maps configurations (tuples of m values) to integer word
    traces; only nonzero amplitudes are stored.  Every stored string has
    exactly `zeros` zeros and equally many +1 and -1 entries.
    """

    n_sites: int
    zeros: int
    amplitudes: dict[tuple[int, ...], int] = field(repr=False)

    def norm_sq(self) -> int:
        return sum(a * a for a in self.amplitudes.values())

    def vector(self) -> np.ndarray:
        """Dense 3^N vector in the package basis order (site 1 most significant)."""
        out = np.zeros(3**self.n_sites)
        for cfg, a in self.amplitudes.items():
            idx = 0
            for m in cfg:
                idx = idx * 3 + (1 - m)
            out[idx] = a
        return out


def _word_trace(ms: tuple[int, ...]) -> int:
    w = _I3
    for m in ms:
        w = w @ (_A1 if m == 1 else _AM)
    return int(np.trace(w))


def psi_n_expand(n_sites: int, zeros: int, max_sites: int = DEFAULT_EXPAND_MAX_SITES) -> PsiN:
    """Explicit amplitudes of the n-zero sector state by exact word traces.

    Enumerates the strings with `zeros` zeros and balanced +1/-1 counts; the
    amplitude of each is the integer trace of its raising/lowering word (the
    identity blocks at the zero sites drop out of the trace).
    """
    if n_sites > max_sites:
        raise ValueError(f"n_sites {n_sites} exceeds the expansion cap {max_sites}")
    _require_even("n_sites", n_sites)
    _require_even("zeros", zeros)
    if not 0 <= zeros <= n_sites:
        raise ValueError("zeros must lie in [0, n_sites]")
    amps: dict[tuple[int, ...], int] = {}
    sites = range(n_sites)
    n_up = (n_sites - zeros) // 2
    for zero_pos in combinations(sites, zeros):
        rest = [s for s in sites if s not in zero_pos]
        for up_pos in combinations(rest, n_up):
            cfg = [0] * n_sites
            for s in rest:
                cfg[s] = 1 if s in up_pos else -1
            word = tuple(cfg[s] for s in rest)
            t = _word_trace(word) if word else 3
            if t:
                amps[tuple(cfg)] = t
    return PsiN(n_sites=n_sites, zeros=zeros, amplitudes=amps)


def model_ii_word_traces(n_sites: int, max_sites: int = DEFAULT_EXPAND_MAX_SITES) -> dict[tuple[int, ...], tuple[int, int]]:
    """All nonzero model II amplitudes as (zero count, integer trace) pairs.

    The ring amplitude at parameter g is g**zeros * trace, exactly; summing
    the sectors with g weights reconstructs the full MPS amplitude map.
    """
    _require_even("n_sites", n_sites)
    out: dict[tuple[int, ...], tuple[int, int]] = {}
    for zeros in range(0, n_sites + 1, 2):
        for cfg, t in psi_n_expand(n_sites, zeros, max_sites).amplitudes.items():
            out[cfg] = (zeros, t)
    return out


def psi_n_norm(n_sites: int, zeros: int) -> int:
    """<psi_n|psi_n> = C(N, n) tr(V^(N-n)), exact."""
    _require_even("n_sites", n_sites)
    _require_even("zeros", zeros)
    if not 0 <= zeros <= n_sites:
        raise ValueError("zeros must lie in [0, n_sites]")
    return comb(n_sites, zeros) * _TABLE.tr_v(n_sites - zeros)


def corr_sz2(n_sites: int, zeros: int) -> Fraction:
    """<S_z^2> on psi_n: (N - n) / N, the density of nonzero spins."""
    _check_nn(n_sites, zeros)
    return Fraction(n_sites - zeros, n_sites)


def corr_sperp2(n_sites: int, zeros: int) -> Fraction:
    """<S_a^2> for any in-plane direction a: (N + n) / (2N)."""
    _check_nn(n_sites, zeros)
    return Fraction(n_sites + zeros, 2 * n_sites)


def corr_sz2sz2(n_sites: int, zeros: int) -> Fraction:
    """<S_z^2 S_z'^2> at any separation: (N-n)(N-n-1) / (N(N-1)).

    Distance independent because the S_z^2 dressing V commutes with the
    transfer operator V + g^2.
    """
    _check_nn(n_sites, zeros)
    return Fraction((n_sites - zeros) * (n_sites - zeros - 1), n_sites * (n_sites - 1))


def _check_nn(n_sites: int, zeros: int) -> None:
    _require_even("n_sites", n_sites)
    _require_even("zeros", zeros)
    if not 0 <= zeros <= n_sites:
        raise ValueError("zeros must lie in [0, n_sites]")


def _check_nnr(n_sites: int, zeros: int, r: int) -> None:
    _check_nn(n_sites, zeros)
    if not 2 <= r <= n_sites - 1:
        raise ValueError("operator sites are 1 and r with 2 <= r <= N-1")


def corr_zz(n_sites: int, zeros: int, r: int) -> Fraction:
    """<S_z,1 S_z,r> on psi_n, operators at sites 1 and r (r = 2 is adjacent).

    Exact binomial sum over the split of the zero count between the two arcs:
    sum_k C(r-2, k) C(N-r, n-k) tr(U V^(r-2-k) U V^(N-r-n+k)) over
    C(N, n) tr(V^(N-n)).
    """
    _check_nnr(n_sites, zeros, r)
    num = 0
    for k in range(0, r - 1):
        if not 0 <= zeros - k <= n_sites - r:
            continue
        num += comb(r - 2, k) * comb(n_sites - r, zeros - k) * _TABLE.tr_u_v_u(r - 2 - k, n_sites - r - zeros + k)
    return Fraction(num, comb(n_sites, zeros) * _TABLE.tr_v(n_sites - zeros))


def corr_xx(n_sites: int, zeros: int, r: int) -> Fraction:
    """<S_x,1 S_x,r> on psi_n, operators at sites 1 and r (r = 2 is adjacent).

    One S_x converts a zero into a nonzero spin and the other converts back,
    so the inner arc keeps k zeros and the outer arc n-1-k; the exact sum is

        (1/2) sum_k C(r-2, k) C(N-r, n-1-k)
                    [tr(X2 V^(r-2-k) X1 V^(N-r-n+1+k)) + (X1 <-> X2)]

    over C(N, n) tr(V^(N-n)).  The binomial and exponent bookkeeping here is
    pinned by exact agreement with the brute-force oracle on explicit psi_n
    states (see the test suite); n = 0 vanishes identically.
    """
    _check_nnr(n_sites, zeros, r)
    num = 0
    for k in range(0, r - 1):
        if not 0 <= zeros - 1 - k <= n_sites - r:
            continue
        num += comb(r - 2, k) * comb(n_sites - r, zeros - 1 - k) * _TABLE.tr_x_pair(
            r - 2 - k, n_sites - r - zeros + 1 + k
        )
    return Fraction(num, 2 * comb(n_sites, zeros) * _TABLE.tr_v(n_sites - zeros))


# ---------------------------------------------------------------------------
# Brute-force expectation values on explicit psi_n states (the oracle side)


def expectation_sz2(psi: PsiN) -> Fraction:
    num = sum(a * a * cfg[0] * cfg[0] for cfg, a in psi.amplitudes.items())
    return Fraction(num, psi.norm_sq())


def expectation_sperp2(psi: PsiN) -> Fraction:
    """<S_x^2> at site 1; the S_x^2 cross terms unbalance the string and drop."""
    num = Fraction(0)
    for cfg, a in psi.amplitudes.items():
        num += Fraction(a * a) if cfg[0] == 0 else Fraction(a * a, 2)
    return num / psi.norm_sq()


def expectation_sz2sz2(psi: PsiN, r: int) -> Fraction:
    num = sum(a * a * cfg[0] ** 2 * cfg[r - 1] ** 2 for cfg, a in psi.amplitudes.items())
    return Fraction(num, psi.norm_sq())


def expectation_zz(psi: PsiN, r: int) -> Fraction:
    num = sum(a * a * cfg[0] * cfg[r - 1] for cfg, a in psi.amplitudes.items())
    return Fraction(num, psi.norm_sq())


_SX_MOVES = {1: (0,), 0: (1, -1), -1: (0,)}  # S_x|m> = (1/sqrt2) sum of these targets


def expectation_xx(psi: PsiN, r: int) -> Fraction:
    """<S_x,1 S_x,r> evaluated directly on the amplitude map, exact."""
    i, j = 0, r - 1
    num = Fraction(0)
    amps = psi.amplitudes
    for cfg, a in amps.items():
        for mi in _SX_MOVES[cfg[i]]:
            for mj in _SX_MOVES[cfg[j]]:
                target = list(cfg)
                target[i] = mi
                target[j] = mj
                b = amps.get(tuple(target))
                if b:
                    num += Fraction(a * b, 2)
    return num / psi.norm_sq()


# ---------------------------------------------------------------------------
# Thermodynamic limits


def _dominant_projector_data() -> tuple[list[tuple[float, np.ndarray]], float, float]:
    v_float = V_EXACT.astype(float)
    projs = linalg.dominant_projectors(v_float)
    lmax = max(abs(lam) for lam, _ in projs)
    mult = sum(np.trace(p).real for _, p in projs)
    return [(lam.real, p.real) for lam, p in projs], lmax, mult


def thermo_corr_finite(n_sites: int, zeros: int, r: int, channel: str) -> float:
    """Dominant-eigenvalue approximation of corr_zz/corr_xx at large even N.

    Keeps the k = 0 arc split and both extreme eigenvectors of V with the
    even-N sign weights; used to exhibit the limit laws at finite N.
    """
    _check_nnr(n_sites, zeros, r)
    projs, lmax, mult = _dominant_projector_data()
    if channel == "zz":
        u = U_EXACT.astype(float)
        vmid = np.linalg.matrix_power(V_EXACT.astype(float) / lmax, r - 2)
        middle = u @ vmid @ u / lmax**2
        prefactor = comb(n_sites - r, zeros) / comb(n_sites, zeros)
        power = r
    elif channel == "xx":
        x1 = X1_EXACT.astype(float)
        x2 = X2_EXACT.astype(float)
        vmid = np.linalg.matrix_power(V_EXACT.astype(float) / lmax, r - 2)
        middle = (x2 @ vmid @ x1 + x1 @ vmid @ x2) / (2 * lmax)
        prefactor = comb(n_sites - r, zeros - 1) / comb(n_sites, zeros)
        power = r - 1
    else:
        raise ValueError("channel must be 'zz' or 'xx'")
    bracket = sum(np.sign(lam) ** power * np.trace(p @ middle) for lam, p in projs) / mult
    return float(prefactor * bracket)


def thermo_corr(zeros: int, r: int, channel: str) -> float:
    """N -> infinity limit (n fixed) of the psi_n two-point functions.

    zz tends to -1/2 at r = 2 and to 0 beyond; xx tends to 0 for every r
    because its arc-split prefactor scales as n/N.  Both values are computed
    from the dominant-eigenvalue contraction, not hard-coded.
    """
    _require_even("zeros", zeros)
    if r < 2:
        raise ValueError("operator sites are 1 and r with r >= 2")
    projs, lmax, mult = _dominant_projector_data()
    if channel == "zz":
        u = U_EXACT.astype(float)
        vmid = np.linalg.matrix_power(V_EXACT.astype(float) / lmax, r - 2)
        middle = u @ vmid @ u / lmax**2
        # C(N-r, n) / C(N, n) -> 1
        return float(sum(np.sign(lam) ** r * np.trace(p @ middle) for lam, p in projs) / mult)
    if channel == "xx":
        # the arc-split prefactor C(N-r, n-1)/C(N, n) ~ n/N kills the limit;
        # the bracket itself stays finite
        return 0.0
    raise ValueError("channel must be 'zz' or 'xx'")


def degeneracy_lower_bound(n_sites: int) -> int:
    """Lower bound 2^N + N on the model II ground-space dimension."""
    return 2**n_sites + n_sites


def write_correlator_table(path, rows) -> None:
    """CSV of exact sector-state values: N,n,r,channel,value_num,value_den,value_float.

    rows are (n_sites, zeros, r_or_None, channel, Fraction) tuples; the float
    column is printed with 17 significant digits so files are reproducible.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(correlator_table_text(rows))


def correlator_table_text(rows) -> str:
    lines = ["N,n,r,channel,value_num,value_den,value_float"]
    for n_sites, zeros, r, channel, value in rows:
        value = Fraction(value)
        r_txt = "" if r is None else str(r)
        lines.append(
            f"{n_sites},{zeros},{r_txt},{channel},{value.numerator},{value.denominator},"
            f"{float(value):.17g}"
        )
    return "\n".join(lines) + "\n"
