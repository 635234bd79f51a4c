"""Specializations of the system: the NC Q-system and the quantum T-system.

The Q-system side is checked numerically with finite-field matrices (its
recursion inverts sums).  The quantum side is pure exponent bookkeeping, done
exactly in units of q^(1/8).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from flint import nmod_mat

from .errors import SingularIntermediate, UndefinedCommutation
from .oracle import P61, _random_matrix, identity, inverse

# -- NC Q-system -------------------------------------------------------------------


@dataclass
class QSystemState:
    """R_0..R_n over F_p together with the conserved C and K."""

    modulus: int
    dim: int
    seed: int
    R: list[nmod_mat]
    C: nmod_mat = field(init=False)
    K: nmod_mat = field(init=False)

    def __post_init__(self):
        r0, r1 = self.R[0], self.R[1]
        r0i, r1i = inverse(r0), inverse(r1)
        self.C = r1i * r0 * r1 * r0i
        self.K = r1 * r0i + r1i * r0i + r1i * r0

    def one(self) -> nmod_mat:
        return identity(self.dim, self.modulus)


def qsystem_initial(seed: int = 0, d: int = 4, p: int = P61, max_retries: int = 20) -> QSystemState:
    rng = random.Random(seed)
    for _ in range(max_retries):
        r0, r1 = _random_matrix(rng, d, p), _random_matrix(rng, d, p)
        if r0.det() != 0 and r1.det() != 0:
            return QSystemState(p, d, seed, [r0, r1])
    raise SingularIntermediate(f"no invertible R0, R1 for seed {seed}")


def qsystem_iterate(state: QSystemState, n_max: int) -> QSystemState:
    """Extend to R_{n_max} with R_{n+1} = (R_n + R_n^-1) R_{n-1}^-1 R_n."""
    R = list(state.R)
    while len(R) <= n_max:
        rn, rp = R[-1], R[-2]
        R.append((rn + inverse(rn)) * inverse(rp) * rn)
    return QSystemState(state.modulus, state.dim, state.seed, R)


def qsystem_scalar(n_max: int, r0: Fraction = Fraction(1), r1: Fraction = Fraction(1)) -> list[Fraction]:
    """Commutative 1x1 iteration, exact over the rationals."""
    R = [Fraction(r0), Fraction(r1)]
    while len(R) <= n_max:
        R.append((R[-1] + 1 / R[-1]) / R[-2] * R[-1])
    return R


def check_qsystem(state: QSystemState) -> dict:
    """Conservation of C and K and the equivalent forms of the recursion, for every n available."""
    R, C, K, one = state.R, state.C, state.K, state.one()
    n_top = len(R) - 1
    checks: dict[str, list[int]] = {name: [] for name in (
        "recursion", "C_conserved", "K_conserved", "quasicommutation", "quasicommutation_inverse_form",
        "recursion_with_C", "recursion_with_C_reversed")}
    failures = {name: [] for name in checks}

    def record(name: str, n: int, ok: bool) -> None:
        checks[name].append(n)
        if not ok:
            failures[name].append(n)

    for n in range(0, n_top):
        rn, rn1 = R[n], R[n + 1]
        rni, rn1i = inverse(rn), inverse(rn1)
        record("C_conserved", n, rn1i * rn * rn1 * rni == C)
        record("quasicommutation", n, rn * rn1 == rn1 * C * rn)
        record("quasicommutation_inverse_form", n, rni * rn1 * C == rn1 * rni)
        if n >= 1:
            rp = R[n - 1]
            record("recursion", n, rn1 * rni * rp == rn + rni)
            record("K_conserved", n, rn1 * rni + rni * rp == K)
            record("recursion_with_C", n, rn1 * C * rp == one + rn * rn)
            record("recursion_with_C_reversed", n, rp * rn1 * C == one + rn * C * rn * C)
    out = [{"name": k, "checked": len(v), "failed": len(failures[k]), "failures": failures[k]}
           for k, v in checks.items()]
    return {"n_max": n_top, "seed": state.seed, "identities": out,
            "ok": all(x["failed"] == 0 for x in out)}


# -- exponent tables ---------------------------------------------------------------


def a_exp(j: int, k: int) -> int:
    return -((j - k + 2) // 4)


def b_exp(j: int, k: int) -> int:
    return (j + k + 2) // 4


def c_exp(j: int, k: int) -> int:
    return (j + k) // 4


def d_exp(j: int, k: int) -> int:
    return -((j - k) // 4)


def alpha8(j: int, k: int) -> int:
    """8 * alpha_{j,k} = 2(2k+1) - (j-k)^2."""
    return 2 * (2 * k + 1) - (j - k) ** 2


def beta8(j: int, k: int) -> int:
    """8 * beta_{j,k} = 2(2j-1) - (j-k)^2."""
    return 2 * (2 * j - 1) - (j - k) ** 2


@dataclass(frozen=True)
class ExponentTables:
    a: Callable[[int, int], int] = a_exp
    b: Callable[[int, int], int] = b_exp
    c: Callable[[int, int], int] = c_exp
    d: Callable[[int, int], int] = d_exp
    alpha8: Callable[[int, int], int] = alpha8
    beta8: Callable[[int, int], int] = beta8

    def alpha(self, j: int, k: int) -> Fraction:
        return Fraction(self.alpha8(j, k), 8)

    def beta(self, j: int, k: int) -> Fraction:
        return Fraction(self.beta8(j, k), 8)


def _seq_closed_forms(m: int) -> tuple[int, int, int, int]:
    """a(m), b(m), c(m), d(m) for trivial initial data."""
    return -((m + 1) // 2), (m + 1) // 2, m // 2, -(m // 2)


_a, _b, _c, _d = a_exp, b_exp, c_exp, d_exp

# centred at (j, k) with j + k odd
_SYSTEM = {
    "a(j+1,k) = a(j,k-1)": lambda j, k: _a(j + 1, k) == _a(j, k - 1),
    "a(j,k-1) = d(j-1,k) - 1": lambda j, k: _a(j, k - 1) == _d(j - 1, k) - 1,
    "b(j+1,k) - 1 = c(j,k-1)": lambda j, k: _b(j + 1, k) - 1 == _c(j, k - 1),
    "c(j,k-1) = c(j-1,k)": lambda j, k: _c(j, k - 1) == _c(j - 1, k),
    "c(j+1,k) = b(j,k-1)": lambda j, k: _c(j + 1, k) == _b(j, k - 1),
    "b(j,k-1) = b(j-1,k)": lambda j, k: _b(j, k - 1) == _b(j - 1, k),
    "d(j+1,k) = d(j,k-1)": lambda j, k: _d(j + 1, k) == _d(j, k - 1),
    "d(j,k-1) = a(j-1,k)": lambda j, k: _d(j, k - 1) == _a(j - 1, k),
    "a(j,k+1) = a(j-1,k)": lambda j, k: _a(j, k + 1) == _a(j - 1, k),
    "b(j-1,k) - c(j+1,k) = 0": lambda j, k: _b(j - 1, k) - _c(j + 1, k) == 0,
    "b(j,k+1) - c(j,k-1) = 1": lambda j, k: _b(j, k + 1) - _c(j, k - 1) == 1,
    "a(j,k+1) = d(j,k-1)": lambda j, k: _a(j, k + 1) == _d(j, k - 1),
}

# centred at (j, k) with j + k even: the identities used to reduce Gamma and Delta
_CONSERVED = {
    "a(j-1,k+1) = d(j,k)": lambda j, k: _a(j - 1, k + 1) == _d(j, k),
    "a(j,k) = d(j+1,k-1)": lambda j, k: _a(j, k) == _d(j + 1, k - 1),
    "b(j-1,k+1) = b(j,k)": lambda j, k: _b(j - 1, k + 1) == _b(j, k),
    "c(j,k) = c(j+1,k-1)": lambda j, k: _c(j, k) == _c(j + 1, k - 1),
    "b(j,k) = c(j-1,k-1) + 1": lambda j, k: _b(j, k) == _c(j - 1, k - 1) + 1,
    "b(j+1,k+1) = c(j,k) + 1": lambda j, k: _b(j + 1, k + 1) == _c(j, k) + 1,
    "a(j,k) = a(j+1,k+1)": lambda j, k: _a(j, k) == _a(j + 1, k + 1),
    "d(j-1,k-1) = d(j,k)": lambda j, k: _d(j - 1, k - 1) == _d(j, k),
    "closed form via (j-k)/2 and (j+k)/2": lambda j, k: (
        _a(j, k) == _seq_closed_forms((j - k) // 2)[0] and _b(j, k) == _seq_closed_forms((j + k) // 2)[1]
        and _c(j, k) == _seq_closed_forms((j + k) // 2)[2] and _d(j, k) == _seq_closed_forms((j - k) // 2)[3]),
}


def _sequence_recursions(m_range: int) -> list[int]:
    bad = []
    if _seq_closed_forms(0) != (0, 0, 0, 0):
        bad.append(0)
    for m in range(-m_range, m_range + 1):
        a, b, c, d = _seq_closed_forms(m)
        pa, pb, pc, pd = _seq_closed_forms(m - 1)
        if not (a == pd - 1 and b == pc + 1 and c == pb and d == pa):
            bad.append(m)
    return bad


def _run_table(table: dict, rng: int, parity: int) -> list[dict]:
    out = []
    for name, fn in table.items():
        checked, failed = 0, []
        for j in range(-rng, rng + 1):
            for k in range(-rng, rng + 1):
                if (j + k) % 2 != parity:
                    continue
                checked += 1
                if not fn(j, k):
                    failed.append([j, k])
        out.append({"name": name, "checked": checked, "failed": len(failed), "failures": failed[:20]})
    return out


def check_exponent_system(rng: int = 50) -> dict:
    """All relations of the a, b, c, d system and the identities derived from it."""
    ids = _run_table(_SYSTEM, rng, 1) + _run_table(_CONSERVED, rng, 0)
    seq_bad = _sequence_recursions(rng)
    ids.append({"name": "a(m)=d(m-1)-1, b(m)=c(m-1)+1, c(m)=b(m-1), d(m)=a(m-1)",
                "checked": 2 * rng + 1, "failed": len(seq_bad), "failures": seq_bad[:20]})
    return {"range": rng, "identities": ids, "ok": all(x["failed"] == 0 for x in ids)}


# -- embedding of the Q-system -------------------------------------------------------


class _Powers:
    def __init__(self, C: nmod_mat, one: nmod_mat):
        self._pos = [one, C]
        self._neg = [one, inverse(C)]

    def __call__(self, n: int) -> nmod_mat:
        seq = self._pos if n >= 0 else self._neg
        n = abs(n)
        while len(seq) <= n:
            seq.append(seq[-1] * seq[1])
        return seq[n]


def embed_qsystem(state: QSystemState, j_range: range, k_range: range) -> dict:
    """Build T = C^-a R_k C^b and T* = C^-c R_k C^d and check the T-system consequences.

    ``gamma_reduction`` is the conjugation formula C^f K C^-f with f = floor((j-k)/4);
    ``gamma_reduction_shifted`` uses C^-floor((j-k+2)/4) on the right instead.
    """
    R, C, K, one = state.R, state.C, state.K, state.one()
    Cp = _Powers(C, one)
    n_top = len(R) - 1

    def T(j: int, k: int) -> nmod_mat:
        if not 0 <= k <= n_top:
            raise IndexError(k)
        return Cp(-a_exp(j, k)) * R[k] * Cp(b_exp(j, k))

    def B(j: int, k: int) -> nmod_mat:
        if not 0 <= k <= n_top:
            raise IndexError(k)
        return Cp(-c_exp(j, k)) * R[k] * Cp(d_exp(j, k))

    def gamma(j, k):
        return T(j - 1, k + 1) * inverse(T(j, k)) + inverse(B(j, k)) * B(j + 1, k - 1)

    def delta(j, k):
        return inverse(T(j, k)) * T(j + 1, k + 1) + B(j - 1, k - 1) * inverse(B(j, k))

    Ci = inverse(C)
    odd = {
        "tsystem": lambda j, k: T(j, k + 1) * B(j, k - 1) == one + T(j - 1, k) * B(j + 1, k),
        "quasicommutation_right": lambda j, k:
            inverse(T(j, k - 1)) * T(j + 1, k) == B(j + 1, k) * inverse(B(j, k - 1)),
        "quasicommutation_left": lambda j, k:
            T(j - 1, k) * inverse(T(j, k - 1)) == inverse(B(j, k - 1)) * B(j - 1, k),
        "tsystem_conjugated": lambda j, k:
            T(j, k + 1) * B(j, k - 1) - T(j - 1, k) * B(j + 1, k) - one
            == Cp(-a_exp(j, k + 1)) * (R[k + 1] * C * R[k - 1] - R[k] * R[k] - one) * Cp(d_exp(j, k - 1)),
    }
    even = {
        "periodicity": lambda j, k: T(j + 4, k) == C * T(j, k) * C,
        "periodicity_bullet": lambda j, k: B(j + 4, k) == Ci * B(j, k) * Ci,
        "gamma_reduction": lambda j, k:
            gamma(j, k) == Cp((j - k) // 4) * K * Cp(-((j - k) // 4)),
        "gamma_reduction_shifted": lambda j, k:
            gamma(j, k) == Cp((j - k) // 4) * K * Cp(-((j - k + 2) // 4)),
        "delta_reduction": lambda j, k:
            delta(j, k) == Cp(-((j + k + 2) // 4)) * K * Cp((j + k) // 4),
    }
    out = []
    for table, parity in ((odd, 1), (even, 0)):
        for name, fn in table.items():
            checked, failed = 0, []
            for k in k_range:
                for j in j_range:
                    if (j + k) % 2 != parity:
                        continue
                    try:
                        ok = fn(j, k)
                    except IndexError:
                        continue
                    checked += 1
                    if not ok:
                        failed.append([j, k])
            out.append({"name": name, "checked": checked, "failed": len(failed), "failures": failed})
    return {"seed": state.seed, "window": {"j": [j_range.start, j_range.stop - 1],
                                           "k": [k_range.start, k_range.stop - 1]},
            "identities": out, "ok": all(x["failed"] == 0 for x in out)}


# -- quantum T-system ----------------------------------------------------------------


@dataclass(frozen=True)
class QWord:
    """q^(q8/8) times an ordered product of tau_{j,k}^e letters."""

    q8: int
    letters: tuple[tuple[int, int, int], ...]  # (j, k, exponent)

    @classmethod
    def tau(cls, j: int, k: int, e: int = 1) -> QWord:
        return cls(0, ((j, k, e),))

    def __mul__(self, other: QWord) -> QWord:
        return QWord(self.q8 + other.q8, _merge(self.letters + other.letters))

    def scale(self, q8: int) -> QWord:
        return QWord(self.q8 + q8, self.letters)

    def inverse(self) -> QWord:
        return QWord(-self.q8, tuple((j, k, -e) for j, k, e in reversed(self.letters)))

    def __str__(self) -> str:
        q = Fraction(self.q8, 8)
        parts = [] if q == 0 else [f"q^{q}"]
        parts += [f"tau[{j},{k}]" + ("" if e == 1 else f"^{e}") for j, k, e in self.letters]
        return " ".join(parts) or "1"


def _merge(letters) -> tuple[tuple[int, int, int], ...]:
    out: list[tuple[int, int, int]] = []
    for j, k, e in letters:
        if out and out[-1][:2] == (j, k):
            e += out.pop()[2]
        if e:
            out.append((j, k, e))
    return tuple(out)


def commutation_exponent(x: tuple[int, int], y: tuple[int, int]) -> int:
    """e with tau_x tau_y = q^e tau_y tau_x, for letters in the same or adjacent rows."""
    (i, kx), (j, ky) = x, y
    if kx == ky:
        return 0
    if abs(kx - ky) != 1:
        raise UndefinedCommutation(f"no commutation rule for tau{x} and tau{y}")
    s = (-1) ** (abs(i - j) // 2)
    return s if kx < ky else -s


def quantum_normal_order(w: QWord) -> QWord:
    """Sort letters by (k, j), collecting q-powers from each adjacent swap."""
    letters = list(_merge(w.letters))
    q8 = w.q8
    changed = True
    while changed:
        changed = False
        for n in range(len(letters) - 1):
            (jx, kx, ex), (jy, ky, ey) = letters[n], letters[n + 1]
            if (kx, jx) > (ky, jy):
                # x^ex y^ey = q^(e ex ey) y^ey x^ex
                q8 += 8 * commutation_exponent((jx, kx), (jy, ky)) * ex * ey
                letters[n], letters[n + 1] = letters[n + 1], letters[n]
                changed = True
        letters = list(_merge(letters))
    return QWord(q8, tuple(letters))


def _T(j: int, k: int) -> QWord:
    return QWord(alpha8(j, k), ((j, k, 1),))


def _Tb(j: int, k: int) -> QWord:
    return QWord(-beta8(j, k), ((j, k, 1),))


# centred at (j, k) with j + k odd; each entry gives two sides that must agree
_EXPONENT_CONDITIONS = {
    "alpha(j,k+1) - beta(j,k-1) = 1": lambda j, k: alpha8(j, k + 1) - beta8(j, k - 1) == 8,
    "alpha(j-1,k) - beta(j+1,k) = 0": lambda j, k: alpha8(j - 1, k) - beta8(j + 1, k) == 0,
    "alpha(j+1,k) - alpha(j,k-1) = beta(j,k-1) - beta(j+1,k) + 1": lambda j, k:
        alpha8(j + 1, k) - alpha8(j, k - 1) == beta8(j, k - 1) - beta8(j + 1, k) + 8,
    "alpha(j,k-1) - alpha(j-1,k) = beta(j,k-1) - beta(j-1,k) - 1": lambda j, k:
        alpha8(j, k - 1) - alpha8(j - 1, k) == beta8(j, k - 1) - beta8(j - 1, k) - 8,
    "alpha(j+1,k) + alpha(j-1,k) - alpha(j,k+1) - alpha(j,k-1) = 0": lambda j, k:
        alpha8(j + 1, k) + alpha8(j - 1, k) - alpha8(j, k + 1) - alpha8(j, k - 1) == 0,
    "alpha(j-1,k) - alpha(j-1,k+2) + alpha(j,k+1) - alpha(j,k-1) = 1": lambda j, k:
        alpha8(j - 1, k) - alpha8(j - 1, k + 2) + alpha8(j, k + 1) - alpha8(j, k - 1) == 8,
}


def _patch_checks(j: int, k: int) -> dict[str, bool]:
    out = {}
    # main relation, term by term: T T* must become q tau tau and tau tau
    lhs = _T(j, k + 1) * _Tb(j, k - 1)
    out["qt_leading_term"] = lhs == QWord(8, ((j, k + 1, 1), (j, k - 1, 1)))
    rhs = _T(j - 1, k) * _Tb(j + 1, k)
    out["qt_product_term"] = quantum_normal_order(rhs) == quantum_normal_order(
        QWord(0, ((j + 1, k, 1), (j - 1, k, 1))))
    # the quasi-commutations must be consequences of the tau commutation rules
    left = _T(j, k - 1).inverse() * _T(j + 1, k)
    right = _Tb(j + 1, k) * _Tb(j, k - 1).inverse()
    out["quasicommutation_right"] = quantum_normal_order(left) == quantum_normal_order(right)
    left = _T(j - 1, k) * _T(j, k - 1).inverse()
    right = _Tb(j, k - 1).inverse() * _Tb(j - 1, k)
    out["quasicommutation_left"] = quantum_normal_order(left) == quantum_normal_order(right)
    return out


def check_quantum_reduction(rng: int = 50, patch: int = 4) -> dict:
    """Exponent conditions over |j|,|k| <= rng and the formal patch check for |j|, k <= patch.

    ``ok`` covers everything in the report; ``qt_ok`` only the exponent
    conditions of the main relation and its formal patch check.
    """
    conditions = _run_table(_EXPONENT_CONDITIONS, rng, 1)
    names = ("qt_leading_term", "qt_product_term", "quasicommutation_right", "quasicommutation_left")
    patch_out = {n: {"name": n, "checked": 0, "failed": 0, "failures": []} for n in names}
    for k in range(1, patch + 1):
        for j in range(-patch, patch + 1):
            if (j + k) % 2 != 1:
                continue
            for n, ok in _patch_checks(j, k).items():
                patch_out[n]["checked"] += 1
                if not ok:
                    patch_out[n]["failed"] += 1
                    patch_out[n]["failures"].append([j, k])
    patch_list = list(patch_out.values())
    qt_names = {"alpha(j,k+1) - beta(j,k-1) = 1", "alpha(j-1,k) - beta(j+1,k) = 0",
                "qt_leading_term", "qt_product_term"}
    everything = conditions + patch_list
    return {
        "range": rng,
        "patch": patch,
        "exponent_conditions": conditions,
        "patch_checks": patch_list,
        "qt_ok": all(x["failed"] == 0 for x in everything if x["name"] in qt_names),
        "ok": all(x["failed"] == 0 for x in everything),
    }
