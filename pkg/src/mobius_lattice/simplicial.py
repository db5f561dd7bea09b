"""Abstract simplicial complexes, Euler characteristics and order complexes.

Faces are stored as bitmasks over the vertex index.  Two degenerate complexes
are kept distinct on purpose: the empty complex (no faces at all, reduced
Euler characteristic 0) and the complex whose only face is the empty set
(reduced Euler characteristic -1).  The second one shows up naturally as the
face family of a vertex-free identity instance and must contribute an
alternating face sum of 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotDownwardClosed
from .poset import FinitePoset, _bits


class SimplicialComplex:
    """Explicit complex: an indexed vertex tuple plus a set of face masks."""

    __slots__ = ("vertices", "faces", "_index")

    def __init__(self, vertices: Sequence, faces: Iterable[int]):
        self.vertices = tuple(vertices)
        self.faces = frozenset(faces)
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def is_empty(self) -> bool:
        return not self.faces

    def face_count(self) -> int:
        return len(self.faces)

    def face_sets(self) -> list:
        """Faces as sorted tuples of vertex labels, smallest first."""
        out = [tuple(self.vertices[i] for i in _bits(mask)) for mask in self.faces]
        return sorted(out, key=lambda f: (len(f), [str(v) for v in f]))

    def face_lists(self) -> dict:
        """Deterministic dump: faces per dimension as lists of vertex labels."""
        by_dim: dict = {}
        for mask in self.faces:
            labels = sorted(str(self.vertices[i]) for i in _bits(mask))
            by_dim.setdefault(len(labels) - 1, []).append(labels)
        return {dim: sorted(faces) for dim, faces in sorted(by_dim.items())}

    def __repr__(self) -> str:
        return (f"SimplicialComplex({len(self.vertices)} vertices, "
                f"{len(self.faces)} faces)")


def complex_from_faces(vertices: Sequence, faces: Iterable[Iterable],
                       strict: bool = False) -> SimplicialComplex:
    """Build a complex from a family of faces given as vertex collections.

    Non-strict mode takes the downward closure of the family.  Strict mode
    instead rejects input that is not already closed -- used where the family
    is a complex by construction and a gap would mean a bug upstream.
    """
    vertices = tuple(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    masks = set()
    for face in faces:
        mask = 0
        for v in face:
            mask |= 1 << index[v]
        masks.add(mask)
    if strict:
        for mask in masks:
            for i in _bits(mask):
                if mask & ~(1 << i) not in masks:
                    raise NotDownwardClosed(
                        f"face {mask:b} lacks a subset in strict mode")
        for i in range(len(vertices)):
            if (1 << i) not in masks:
                raise NotDownwardClosed(
                    f"vertex {vertices[i]!r} has no singleton face")
        return SimplicialComplex(vertices, masks)
    closed = set()
    stack = list(masks)
    while stack:
        mask = stack.pop()
        if mask in closed:
            continue
        closed.add(mask)
        for i in _bits(mask):
            stack.append(mask & ~(1 << i))
    return SimplicialComplex(vertices, closed)


@dataclass(frozen=True)
class EulerReport:
    """Face counts per dimension i >= 0 plus both characteristics."""

    face_counts: tuple
    chi: int
    chi_reduced: int


def euler(c: SimplicialComplex) -> EulerReport:
    """Exact Euler characteristic and its reduced variant.

    The empty complex has chi = 0 and reduced 0; any nonempty complex (even
    one whose only face is the empty set) has reduced chi = chi - 1.
    """
    counts: dict = {}
    for mask in c.faces:
        dim = bin(mask).count("1") - 1
        if dim >= 0:
            counts[dim] = counts.get(dim, 0) + 1
    top = max(counts) if counts else -1
    face_counts = tuple(counts.get(i, 0) for i in range(top + 1))
    chi = sum((-1) ** i * f for i, f in enumerate(face_counts))
    chi_reduced = 0 if c.is_empty() else chi - 1
    return EulerReport(face_counts, chi, chi_reduced)


def face_alternating_sum(c: SimplicialComplex) -> int:
    """Sum of (-1)^|F| over all faces, the empty face included."""
    return sum((-1) ** bin(mask).count("1") for mask in c.faces)


def order_complex(poset: FinitePoset) -> SimplicialComplex:
    """Complex whose faces are the chains of the poset.

    The empty chain is always a face, so the order complex of the empty poset
    is the one-face complex {0} rather than the empty complex; that is the
    convention under which mu of the bounded poset equals the reduced Euler
    characteristic.
    """
    n = poset.size
    faces = {0}

    def grow(mask: int, last: int) -> None:
        faces.add(mask)
        above = poset.up[last] & ~(1 << last)
        for j in _bits(above):
            grow(mask | (1 << j), j)

    for i in range(n):
        grow(1 << i, i)
    return SimplicialComplex(poset.items, faces)
