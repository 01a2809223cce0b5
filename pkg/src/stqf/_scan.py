"""Vectorized exhaustive scans for big-support minimality.

For a full-support vector (support = rank, 3 or 4) the lowering analysis
closes into a finite criterion: x is q-minimal iff its nu-dominant
monomials number at least two, are all tangible, and every pair of them
covers the support with its index sets.  Each failing vector has an
explicit witness (a restriction x(S), a tangible partner of a ghost
coordinate, or a strict drop), and every surviving vector admits no
lowering: dominants avoiding a coordinate number at most one, so any
one-coordinate drop lands on a tangible or strictly smaller value.  The
scans below evaluate that criterion over integer windows with numpy; the
acceptance harness re-verifies survivors (and sampled rejects) with the
exact element-level oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quadratic import QuadraticForm
from .semiring import G, T, ZERO, Elem
from .tmodule import Vector

NEG = -10_000  # level sentinel for the zero element


def _monomial_index_sets(rank: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [(i,) for i in range(rank)]
    out += [(i, j) for i in range(rank) for j in range(i + 1, rank)]
    return out


def _pair_cover_table(rank: int) -> np.ndarray:
    """cover[mask] = every pair of set monomials unions to the full support."""
    sets = _monomial_index_sets(rank)
    full = frozenset(range(rank))
    n = len(sets)
    table = np.zeros(1 << n, dtype=bool)
    for mask in range(1 << n):
        chosen = [frozenset(sets[k]) for k in range(n) if mask >> k & 1]
        if len(chosen) < 2:
            continue
        table[mask] = all(
            (chosen[a] | chosen[b]) == full
            for a in range(len(chosen))
            for b in range(a + 1, len(chosen))
        )
    return table


def _element_pool(window: Sequence[int], with_zero: bool) -> tuple[np.ndarray, np.ndarray]:
    levels, ghosts = [], []
    if with_zero:
        levels.append(NEG)
        ghosts.append(False)
    for v in window:
        levels.append(v)
        ghosts.append(False)
        levels.append(v)
        ghosts.append(True)
    return np.array(levels, dtype=np.int16), np.array(ghosts, dtype=bool)


def _decode_elem(level: int, ghost: bool) -> Elem:
    if level <= NEG + 100:
        return ZERO
    return G(int(level)) if ghost else T(int(level))


@dataclass
class ScanEntry:
    form_codes: tuple[int, ...]   # pool indices per coefficient slot
    vec_codes: tuple[int, ...]    # pool indices per coordinate
    dominant_mask: int


@dataclass
class ScanResult:
    rank: int
    window: tuple[int, ...]
    pairs_scanned: int
    minimal: list[ScanEntry]
    reject_sample: list[ScanEntry]


class _Space:
    def __init__(self, rank: int, window: Sequence[int]):
        self.rank = rank
        self.window = tuple(window)
        self.mon_sets = _monomial_index_sets(rank)
        self.n_mon = len(self.mon_sets)
        self.coeff_lv, self.coeff_gh = _element_pool(window, with_zero=True)
        self.coord_lv, self.coord_gh = _element_pool(window, with_zero=False)
        self.cover = _pair_cover_table(rank)
        self.powers = (1 << np.arange(self.n_mon)).astype(np.int32)

    def coord_contrib(self, coords_lv: np.ndarray, coords_gh: np.ndarray):
        """Per-monomial coordinate level/ghost contributions, rows aligned
        with the input coordinate rows."""
        cols_lv, cols_gh = [], []
        for s in self.mon_sets:
            if len(s) == 1:
                cols_lv.append(2 * coords_lv[:, s[0]].astype(np.int32))
                cols_gh.append(coords_gh[:, s[0]])
            else:
                i, j = s
                cols_lv.append(coords_lv[:, i].astype(np.int32) + coords_lv[:, j])
                cols_gh.append(coords_gh[:, i] | coords_gh[:, j])
        return np.stack(cols_lv, axis=1), np.stack(cols_gh, axis=1)

    def minimal_mask(self, mono_lv: np.ndarray, mono_gh: np.ndarray):
        """Apply the dominance criterion along the last (monomial) axis."""
        top = mono_lv.max(axis=-1)
        dominant = mono_lv == top[..., None]
        alive = top > NEG // 2
        n_dom = dominant.sum(axis=-1)
        ghost_dom = (dominant & mono_gh).any(axis=-1)
        dmask = (dominant * self.powers).sum(axis=-1)
        ok = alive & (n_dom >= 2) & ~ghost_dom & self.cover[dmask]
        return ok, dmask

    def decode_form(self, codes: Sequence[int]) -> QuadraticForm:
        rank = self.rank
        elems = [_decode_elem(self.coeff_lv[c], self.coeff_gh[c]) for c in codes]
        diag = tuple(elems[:rank])
        upper = {}
        for k, s in enumerate(self.mon_sets[rank:]):
            upper[s] = elems[rank + k]
        return QuadraticForm.make(diag, upper)

    def decode_vector(self, codes: Sequence[int]) -> Vector:
        return Vector(tuple(_decode_elem(self.coord_lv[c], self.coord_gh[c])
                            for c in codes))


def _mixed_radix(indices: np.ndarray, n_digits: int, base: int) -> np.ndarray:
    digits = np.empty((indices.size, n_digits), dtype=np.int16)
    rem = indices.astype(np.int64).copy()
    for d in range(n_digits - 1, -1, -1):
        digits[:, d] = rem % base
        rem //= base
    return digits


def scan_full_support(rank: int, window: Sequence[int], diag_zero: bool = False,
                      chunk: int = 2048, reject_every: int = 100_000) -> ScanResult:
    """Exhaustive scan of all coefficient/coordinate combinations.

    ``diag_zero`` restricts to forms with vanishing diagonal (the stratum
    that carries every support-4 minimal vector shape).  One reject per
    ``reject_every`` scanned pairs is kept for oracle spot checks.
    """
    sp = _Space(rank, window)
    n_coeff_slots = sp.n_mon
    coeff_pool = len(sp.coeff_lv)
    diag_slots = rank if diag_zero else 0

    # coordinate side, computed once: all full-support vectors
    coord_pool = len(sp.coord_lv)
    n_vec = coord_pool ** rank
    vec_codes = _mixed_radix(np.arange(n_vec), rank, coord_pool)
    coords_lv = sp.coord_lv[vec_codes]
    coords_gh = sp.coord_gh[vec_codes]
    vec_lv, vec_gh = sp.coord_contrib(coords_lv, coords_gh)

    free_slots = n_coeff_slots - diag_slots
    n_forms = coeff_pool ** free_slots
    minimal: list[ScanEntry] = []
    rejects: list[ScanEntry] = []
    scanned = 0
    for start in range(0, n_forms, chunk):
        idx = np.arange(start, min(start + chunk, n_forms))
        free_codes = _mixed_radix(idx, free_slots, coeff_pool)
        if diag_zero:
            codes = np.zeros((idx.size, n_coeff_slots), dtype=np.int16)
            codes[:, rank:] = free_codes
        else:
            codes = free_codes
        form_lv = sp.coeff_lv[codes].astype(np.int32)
        form_gh = sp.coeff_gh[codes]
        mono_lv = form_lv[:, None, :] + vec_lv[None, :, :]
        mono_gh = form_gh[:, None, :] | vec_gh[None, :, :]
        ok, dmask = sp.minimal_mask(mono_lv, mono_gh)
        for fi, vi in np.argwhere(ok):
            minimal.append(ScanEntry(tuple(int(c) for c in codes[fi]),
                                     tuple(int(c) for c in vec_codes[vi]),
                                     int(dmask[fi, vi])))
        block = idx.size * n_vec
        lo = scanned
        scanned += block
        want = range(lo // reject_every + 1, scanned // reject_every + 1)
        for k in want:
            flat = k * reject_every - lo - 1
            fi, vi = divmod(flat, n_vec)
            if not ok[fi, vi]:
                rejects.append(ScanEntry(tuple(int(c) for c in codes[fi]),
                                         tuple(int(c) for c in vec_codes[vi]),
                                         int(dmask[fi, vi])))
    return ScanResult(rank, sp.window, scanned, minimal, rejects)


def scan_random(rank: int, window: Sequence[int], count: int,
                rng: np.random.Generator, chunk: int = 200_000) -> ScanResult:
    """Random (form, full-support vector) pairs, same criterion."""
    sp = _Space(rank, window)
    coeff_pool = len(sp.coeff_lv)
    coord_pool = len(sp.coord_lv)
    minimal: list[ScanEntry] = []
    rejects: list[ScanEntry] = []
    done = 0
    while done < count:
        n = min(chunk, count - done)
        codes = rng.integers(0, coeff_pool, size=(n, sp.n_mon), dtype=np.int16)
        vcodes = rng.integers(0, coord_pool, size=(n, rank), dtype=np.int16)
        coords_lv = sp.coord_lv[vcodes]
        coords_gh = sp.coord_gh[vcodes]
        vec_lv, vec_gh = sp.coord_contrib(coords_lv, coords_gh)
        mono_lv = sp.coeff_lv[codes].astype(np.int32) + vec_lv
        mono_gh = sp.coeff_gh[codes] | vec_gh
        ok, dmask = sp.minimal_mask(mono_lv, mono_gh)
        for i in np.argwhere(ok).ravel():
            minimal.append(ScanEntry(tuple(int(c) for c in codes[i]),
                                     tuple(int(c) for c in vcodes[i]),
                                     int(dmask[i])))
        step = max(1, n // 50)
        for i in range(0, n, step):
            if not ok[i]:
                rejects.append(ScanEntry(tuple(int(c) for c in codes[i]),
                                         tuple(int(c) for c in vcodes[i]),
                                         int(dmask[i])))
        done += n
    return ScanResult(rank, sp.window, done, minimal, rejects)


def entry_objects(sp_rank: int, window: Sequence[int], entry: ScanEntry):
    sp = _Space(sp_rank, window)
    return sp.decode_form(entry.form_codes), sp.decode_vector(entry.vec_codes)
