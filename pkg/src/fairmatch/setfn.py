"""Set functions over small ground sets.

Tables are indexed by subset bitmask.  The neighborhood functions
``nu_c(W)`` (left vertices of color ``c`` whose whole neighborhood lies in
``W``) and ``n_c(W)`` (left vertices of color ``c`` with a neighbor in
``W``) drive every Hall-type constraint in the FPT solvers.  The touching
separator finder produces a modular function squeezed between a
supermodular lower envelope and a modular upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalError
from .model import Instance

MAX_TABLE_GROUND = 24
MAX_SEPARATOR_GROUND = 8


@dataclass(frozen=True)
class SetFunctionTable:
    ground_size: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.ground_size <= MAX_TABLE_GROUND:
            raise InputError(f"ground size must lie in [0, {MAX_TABLE_GROUND}]")
        vals = tuple(int(x) for x in self.values)
        if len(vals) != 1 << self.ground_size:
            raise InputError(f"expected {1 << self.ground_size} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, mask: int) -> int:
        return self.values[mask]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    @classmethod
    def from_array(cls, values) -> "SetFunctionTable":
        values = list(values)
        m = max(len(values) - 1, 0).bit_length()
        return cls(m, tuple(values))

    @classmethod
    def from_singletons(cls, singles, offset: int = 0) -> "SetFunctionTable":
        """Modular table ``offset + sum of singles over X``."""
        singles = list(singles)
        m = len(singles)
        vals = [offset] * (1 << m)
        for mask in range(1, 1 << m):
            low = mask & -mask
            vals[mask] = vals[mask ^ low] + singles[low.bit_length() - 1]
        return cls(m, tuple(vals))

    def to_json(self) -> dict:
        return {"values": list(self.values)}


# ---------------------------------------------------------------------------
# neighborhood functions


def _check_color(instance: Instance, c: int) -> None:
    if not 0 <= c < instance.num_colors:
        raise InputError(f"invalid color id {c}")


def _mask_of(W) -> int:
    if isinstance(W, (int, np.integer)):
        return int(W)
    return sum(1 << v for v in set(W))


def nu_c(instance: Instance, c: int, W) -> int:
    """``|{u in U_c : N(u) ⊆ W}|``; ``W`` is a bitmask or an iterable."""
    _check_color(instance, c)
    w = _mask_of(W)
    masks = instance.left_masks
    return sum(1 for u in instance.color_classes[c] if masks[u] & ~w == 0)


def n_c(instance: Instance, c: int, W) -> int:
    """``|{u in U_c : N(u) ∩ W ≠ ∅}|``."""
    _check_color(instance, c)
    w = _mask_of(W)
    masks = instance.left_masks
    return sum(1 for u in instance.color_classes[c] if masks[u] & w)


def neighborhood_tables(instance: Instance) -> tuple[np.ndarray, np.ndarray]:
    """``(nu, N)`` arrays of shape ``(|C|, 2^k)`` for every color and subset."""
    k = instance.k
    if k > MAX_TABLE_GROUND:
        raise InputError(f"k = {k} too large for subset tables")
    masks = np.asarray(instance.left_masks, dtype=np.int64)
    colors = np.asarray(instance.left_colors, dtype=np.int64)
    # group left vertices by (color, neighborhood) so the work scales with
    # the number of distinct neighborhoods rather than with n
    keys, mult = np.unique(np.stack([colors, masks]), axis=1, return_counts=True)
    ws = np.arange(1 << k, dtype=np.int64)
    inside = (keys[1][None, :] & ~ws[:, None]) == 0
    touch = (keys[1][None, :] & ws[:, None]) != 0
    nu = np.zeros((instance.num_colors, 1 << k), dtype=np.int64)
    nn = np.zeros_like(nu)
    for j in range(keys.shape[1]):
        c = keys[0, j]
        nu[c] += inside[:, j] * mult[j]
        nn[c] += touch[:, j] * mult[j]
    return nu, nn


def nu_table(instance: Instance, c: int) -> SetFunctionTable:
    _check_color(instance, c)
    return SetFunctionTable(instance.k, tuple(neighborhood_tables(instance)[0][c]))


def n_table(instance: Instance, c: int) -> SetFunctionTable:
    _check_color(instance, c)
    return SetFunctionTable(instance.k, tuple(neighborhood_tables(instance)[1][c]))


# ---------------------------------------------------------------------------
# predicates


def _as_array(f) -> tuple[np.ndarray, int]:
    if isinstance(f, SetFunctionTable):
        return f.array(), f.ground_size
    arr = np.asarray(f, dtype=np.int64)
    return arr, max(len(arr) - 1, 0).bit_length()


def _singleton_extension(arr: np.ndarray, m: int) -> np.ndarray:
    """The modular table agreeing with ``arr`` on ∅ and singletons."""
    base = int(arr[0])
    singles = [int(arr[1 << i]) - base for i in range(m)]
    return SetFunctionTable.from_singletons(singles, offset=base).array()


def check_modular(f) -> bool:
    arr, m = _as_array(f)
    return bool(np.array_equal(arr, _singleton_extension(arr, m)))


def supermodular_violations(g, limit: int = 10) -> list[tuple[int, int]]:
    """Pairs ``(X, Y)`` with ``g(X) + g(Y) > g(X|Y) + g(X&Y)``."""
    arr, m = _as_array(g)
    size = 1 << m
    found: list[tuple[int, int]] = []
    ys = np.arange(size)
    for x in range(size):
        bad = arr[x] + arr[ys] > arr[x | ys] + arr[x & ys]
        for y in np.nonzero(bad)[0][: limit - len(found)]:
            found.append((x, int(y)))
        if len(found) >= limit:
            break
    return found


def check_supermodular(g) -> bool:
    """``g(X) + g(Y) <= g(X ∪ Y) + g(X ∩ Y)`` for all pairs."""
    arr, m = _as_array(g)
    if m <= 11:
        return not supermodular_violations(arr, limit=1)
    # local form (equivalent): g(X+a) + g(X+b) <= g(X+a+b) + g(X)
    xs = np.arange(1 << m)
    for a in range(m):
        for b in range(a + 1, m):
            sel = xs[((xs >> a) & 1 == 0) & ((xs >> b) & 1 == 0)]
            ia, ib = sel | (1 << a), sel | (1 << b)
            if np.any(arr[ia] + arr[ib] > arr[ia | ib] + arr[sel]):
                return False
    return True


# ---------------------------------------------------------------------------
# touching separation


class SeparationPreconditionError(InputError):
    """Raised with a list of human-readable failures when inputs are invalid."""

    def __init__(self, failures: list[str]):
        super().__init__("; ".join(failures))
        self.failures = failures


def convolve_max(g, f) -> np.ndarray:
    """``g'(X) = max over T ⊆ X of g(T) + f(X \\ T)``."""
    ga, m = _as_array(g)
    fa, _ = _as_array(f)
    out = np.empty_like(ga)
    for x in range(1 << m):
        best = ga[0] + fa[x]  # T = ∅; the loop covers every nonempty T
        t = x
        while t:
            best = max(best, ga[t] + fa[x ^ t])
            t = (t - 1) & x
        out[x] = best
    return out


@dataclass(frozen=True)
class Separator:
    singletons: tuple[int, ...]
    table: SetFunctionTable
    touching_value: int


def _separator_preconditions(fa, fpa, ga, m) -> list[str]:
    failures = []
    for name, arr in (("f", fa), ("f'", fpa), ("g", ga)):
        if arr[0] != 0:
            failures.append(f"{name}(∅) = {int(arr[0])} ≠ 0")
    for name, arr in (("f", fa), ("f'", fpa)):
        if not check_modular(arr):
            bad = np.nonzero(arr != _singleton_extension(arr, m))[0]
            failures.append(f"{name} not modular at subsets {bad[:5].tolist()}")
    viol = supermodular_violations(ga, limit=3)
    if viol:
        failures.append(f"g not supermodular at pairs {viol}")
    over = np.nonzero(np.maximum(fa, ga) > fpa)[0]
    if len(over):
        failures.append(f"max(f, g) > f' at subsets {over[:5].tolist()}")
    return failures


def find_touching_separator(f, f_prime, g) -> Separator:
    """Modular ``h`` with ``max(f, g) <= h <= f'`` and ``h(S) = g'(S)``.

    Raises :class:`SeparationPreconditionError` when an input condition
    fails.  A missing separator under valid inputs is an internal error.
    """
    fa, m = _as_array(f)
    fpa, m2 = _as_array(f_prime)
    ga, m3 = _as_array(g)
    if not (m == m2 == m3):
        raise InputError("tables have different ground sizes")
    if m > MAX_SEPARATOR_GROUND:
        raise InputError(f"separator search supports ground sets up to {MAX_SEPARATOR_GROUND}")
    failures = _separator_preconditions(fa, fpa, ga, m)
    if failures:
        raise SeparationPreconditionError(failures)

    gp = convolve_max(ga, fa)
    full = (1 << m) - 1
    target = int(gp[full])
    lo = [int(gp[1 << i]) for i in range(m)]
    hi = [int(fpa[1 << i]) for i in range(m)]
    # suffix sums of the value ranges, for the total-sum feasibility cut
    lo_suf = [0] * (m + 1)
    hi_suf = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        lo_suf[i] = lo_suf[i + 1] + lo[i]
        hi_suf[i] = hi_suf[i + 1] + hi[i]

    values = [0] * m
    h_prefix = np.zeros(1 << m, dtype=np.int64)  # h on subsets of the assigned prefix

    def ok_prefix(i: int) -> bool:
        # every subset X whose highest element is i must satisfy h(X) >= g'(X)
        # after adding the optimistic upper values of the unassigned elements
        top = 1 << i
        rest_hi = [(1 << j, hi[j]) for j in range(i + 1, m)]
        for low in range(top):
            x = low | top
            h_prefix[x] = h_prefix[low] + values[i]
            # optimistic completion: all supersets within unassigned elements
            if h_prefix[x] < gp[x]:
                return False
        if rest_hi:
            for low in range(top << 1):
                base = int(h_prefix[low])
                extra_mask = 0
                extra = 0
                for bit, val in rest_hi:
                    extra_mask |= bit
                    extra += val
                # the full optimistic completion bound for this prefix subset
                sub = extra_mask
                while sub:
                    opt = base + sum(val for bit, val in rest_hi if sub & bit)
                    if opt < gp[low | sub]:
                        return False
                    sub = (sub - 1) & extra_mask
        return True

    def dfs(i: int, total: int) -> bool:
        if i == m:
            return total == target
        need = target - total
        for val in range(lo[i], hi[i] + 1):
            rem = need - val
            if rem < lo_suf[i + 1] or rem > hi_suf[i + 1]:
                continue
            values[i] = val
            if ok_prefix(i) and dfs(i + 1, total + val):
                return True
        return False

    if m == 0:
        return Separator((), SetFunctionTable(0, (0,)), 0)
    if not dfs(0, 0):
        raise InternalError("no touching separator found although preconditions hold")
    table = SetFunctionTable.from_singletons(values)
    arr = table.array()
    if not (np.all(arr >= np.maximum(fa, ga)) and np.all(arr <= fpa) and arr[full] == target):
        raise InternalError("separator search returned an invalid function")
    return Separator(tuple(values), table, target)
