"""Brute-force oracles kept independent of the library's algorithms."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def trace_faces(rotations, dart_count):
    """Walk faces by hand: leave along a half-edge, arrive at its partner,
    turn to the next half-edge counterclockwise at the arrival vertex."""
    where = {}
    for cyc in rotations:
        for k, d in enumerate(cyc):
            where[d] = (cyc, k)
    seen = set()
    faces = []
    for start in range(dart_count):
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            arrive = d + 1 if d % 2 == 0 else d - 1
            cyc, k = where[arrive]
            d = cyc[(k + 1) % len(cyc)]
        faces.append(face)
    return faces


def invariants_by_hand(rotations, dart_count):
    V = len(rotations)
    E = dart_count // 2
    n = len(trace_faces(rotations, dart_count))
    two_g = 2 - n - (V - E)
    return n, two_g // 2


def _perm_cycles(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        c, d = [], s
        while d not in seen:
            seen.add(d)
            c.append(d)
            d = perm[d]
        out.append(tuple(c))
    return out


def _connected(sigma):
    n = len(sigma)
    seen, todo = {0}, [0]
    while todo:
        d = todo.pop()
        for e in (sigma[d], d ^ 1):
            if e not in seen:
                seen.add(e)
                todo.append(e)
    return len(seen) == n


def _faces(sigma):
    return _perm_cycles([sigma[d ^ 1] for d in range(len(sigma))])


def brute_isomorphic(s1, lab1, s2, lab2) -> bool:
    """Search all dart bijections for one commuting with sigma and the pairing
    and carrying the per-dart face labels ``lab1`` to ``lab2``."""
    n = len(s1)
    if n != len(s2):
        return False
    for m in itertools.permutations(range(n)):
        if all(m[d ^ 1] == m[d] ^ 1 for d in range(n)) and \
                all(m[s1[d]] == s2[m[d]] for d in range(n)) and \
                all(lab1[d] == lab2[m[d]] for d in range(n)):
            return True
    return False


def brute_automorphism_count(sigma, labels=None) -> int:
    n = len(sigma)
    lab = labels or [0] * n
    count = 0
    for m in itertools.permutations(range(n)):
        if all(m[d ^ 1] == m[d] ^ 1 for d in range(n)) and \
                all(m[sigma[d]] == sigma[m[d]] for d in range(n)) and \
                all(lab[d] == lab[m[d]] for d in range(n)):
            count += 1
    return count


def brute_objects(genus: int, boundaries: int):
    """Every labelled fat graph class with valences >= 3, by exhaustion over
    all permutations of up to 2(6g+3n-6) darts and pairwise isomorphism tests."""
    top = 6 * genus + 3 * boundaries - 6
    reps = []
    for E in range(1, top + 1):
        n = 2 * E
        for sigma in itertools.permutations(range(n)):
            cyc = _perm_cycles(sigma)
            if any(len(c) < 3 for c in cyc):
                continue
            if not _connected(sigma):
                continue
            faces = _faces(sigma)
            if len(faces) != boundaries:
                continue
            if 2 - boundaries - (len(cyc) - E) != 2 * genus:
                continue
            for perm in itertools.permutations(range(1, boundaries + 1)):
                lab = [0] * n
                for f, l in zip(faces, perm):
                    for d in f:
                        lab[d] = l
                if not any(brute_isomorphic(sigma, lab, s2, l2) for s2, l2 in reps):
                    reps.append((sigma, lab))
    return reps


def sympy_rank(dense) -> int:
    if not dense or not dense[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x
                          for x in row] for row in dense]).rank()


def minor_rank(dense) -> int:
    """Largest k with a nonzero k x k minor."""
    rows, cols = len(dense), len(dense[0]) if dense else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                if sympy.Matrix([[dense[i][j] for j in cs] for i in rs]).det() != 0:
                    return k
    return 0
