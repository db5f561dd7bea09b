"""Stabilizer ideals in irreducible linear groups and the identities that tie
them together.

For an irreducible group G <= GL(n, q) and a subgroup H, five integers are
computed along independent code paths and compared:

* minus the Mobius value, bottom to top, of the ideal of subgroups dominated
  by a subspace stabilizer (with G adjoined as maximum);
* the alternating sum over families of invariant subspaces whose stabilizers
  intersect to something strictly bigger than H;
* the same alternating sum taken over subsets of the distinct stabilizers;
* minus the reduced Euler characteristic of the complex carried by the
  invariant subspaces;
* minus the reduced Euler characteristic of the complex carried by the
  stabilizers.

No quantity is derived from another: the Mobius value comes from the poset
recursion on the explicitly built ideal, the sums from a pruned powerset walk
and the Euler characteristics from explicit face counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    PowersetTooLarge,
    ReducibleAmbientGroup,
    SubgroupNotContained,
)
from .group import (
    INTERVAL_CAP,
    POWERSET_CAP,
    GroupSet,
    SubgroupRef,
    is_irreducible,
    overgroup_interval,
    stabilizer,
)
from .linalg import invariant_subspaces
from .poset import BoundedPoset, FinitePoset, _bits, mobius_row
from .simplicial import complex_from_faces, euler


@dataclass(frozen=True)
class StabilizerFamily:
    """Invariant subspaces of H paired with their stabilizers in G.

    ``pairs`` runs over all proper non-trivial H-invariant subspaces W in
    canonical order; ``distinct_stabilizers`` deduplicates the stabilizers.
    Every stabilizer contains H, because H maps each of its invariant
    subspaces to itself.
    """

    subgroup: SubgroupRef
    pairs: tuple
    distinct_stabilizers: tuple


def _check_pair(group: GroupSet, subgroup: SubgroupRef) -> None:
    if subgroup.parent is not group:
        raise SubgroupNotContained("subgroup handle built on a different group")
    if not is_irreducible(group):
        raise ReducibleAmbientGroup(
            "ambient group fixes a proper non-trivial subspace")


def stabilizer_family(group: GroupSet, subgroup: SubgroupRef) -> StabilizerFamily:
    _check_pair(group, subgroup)
    invariant = invariant_subspaces(subgroup.generator_matrices(), group.n,
                                    proper_nontrivial=True)
    pairs = []
    for w in invariant:
        stab = stabilizer(group, w)
        if not subgroup.member_ids <= stab.member_ids:
            raise RuntimeError("stabilizer lost the subgroup; action is broken")
        pairs.append((w, stab))
    distinct = {}
    for _, stab in pairs:
        distinct[stab.member_ids] = stab
    stabs = tuple(sorted(distinct.values(), key=SubgroupRef.sort_key))
    return StabilizerFamily(subgroup, tuple(pairs), stabs)


class ReducibleIdeal:
    """The order ideal generated by the stabilizer family, plus its closure.

    ``members`` are the subgroups K with H <= K <= M for some stabilizer M,
    a genuine order ideal of the overgroup interval; ``hat`` is the bounded
    poset with G adjoined as maximum.  When H has no proper invariant
    subspace the ideal is empty and ``hat`` degenerates to the two-element
    chain {H, G}.
    """

    __slots__ = ("members", "ideal", "hat", "bottom_item", "top_item")

    def __init__(self, members: Sequence[SubgroupRef], ideal: FinitePoset,
                 hat: BoundedPoset, bottom_item: SubgroupRef,
                 top_item: SubgroupRef):
        self.members = tuple(members)
        self.ideal = ideal
        self.hat = hat
        self.bottom_item = bottom_item
        self.top_item = top_item


def build_ideal(group: GroupSet, subgroup: SubgroupRef, family: StabilizerFamily,
                all_subgroups: Optional[Sequence[SubgroupRef]] = None,
                max_interval: int = INTERVAL_CAP) -> ReducibleIdeal:
    """Assemble the ideal of subgroups dominated by a stabilizer.

    With ``all_subgroups`` supplied (a complete subgroup list of the group)
    the members are obtained by filtering; otherwise each interval
    [H, M] is enumerated directly.  Both routes produce the same set.
    """
    _check_pair(group, subgroup)
    if subgroup.order == group.order:
        raise ValueError("the ideal is defined for proper subgroups only")
    members_set = {}
    if family.distinct_stabilizers:
        if all_subgroups is not None:
            for k in all_subgroups:
                if subgroup.member_ids <= k.member_ids and any(
                        k.member_ids <= m.member_ids
                        for m in family.distinct_stabilizers):
                    members_set[k.member_ids] = k
        else:
            for m in family.distinct_stabilizers:
                for k in overgroup_interval(group, subgroup, top=m,
                                            cap=max_interval):
                    members_set[k.member_ids] = k
        if len(members_set) > max_interval:
            raise PowersetTooLarge(
                f"ideal has {len(members_set)} members, cap {max_interval}")
    members = sorted(members_set.values(), key=SubgroupRef.sort_key)
    ideal_poset = FinitePoset.from_leq(
        members, lambda a, b: a.member_ids <= b.member_ids)
    top = group.full_subgroup()
    hat_items = list(members) + [top]
    if not members:
        hat_items = [subgroup, top]
    hat_poset = FinitePoset.from_leq(
        hat_items, lambda a, b: a.member_ids <= b.member_ids)
    bottom_idx = hat_poset.index_of(subgroup if not members else members[0])
    # the minimum must be H itself: every member contains H and H is a member
    if hat_poset.items[bottom_idx].member_ids != subgroup.member_ids:
        raise RuntimeError("ideal lost its minimum; enumeration is broken")
    hat = BoundedPoset(hat_poset, bottom_idx, hat_poset.index_of(top))
    _validate_meets(hat_poset, members_set, subgroup, top)
    return ReducibleIdeal(members, ideal_poset, hat, subgroup, top)


def _validate_meets(hat_poset: FinitePoset, members_set: dict,
                    subgroup: SubgroupRef, top: SubgroupRef) -> None:
    """Meets in the hat are subgroup intersections; check they are members.

    K1 ^ K2 contains H and sits below any stabilizer dominating K1, so the
    intersection belongs to the ideal whenever K1 does; a miss means the
    enumeration itself is broken.
    """
    items = hat_poset.items
    for i, a in enumerate(items):
        if a is top:
            continue
        for b in items[i + 1:]:
            if b is top:
                continue
            inter = a.member_ids & b.member_ids
            if inter not in members_set and inter != subgroup.member_ids:
                raise RuntimeError(
                    "ideal is not closed under intersection; not a lattice")


def mu_ideal(ideal: ReducibleIdeal) -> int:
    """Mobius value from H to G inside the bounded ideal, by the recursion."""
    row = mobius_row(ideal.hat.base, ideal.hat.bottom)
    return row[ideal.hat.top]


@dataclass(frozen=True)
class AlternatingSums:
    """The three alternating sums attached to a stabilizer family.

    ``stabilizer_sum`` runs over subsets of the distinct stabilizers whose
    intersection exceeds H, ``stabilizer_complement_sum`` over those whose
    intersection equals H, and ``subspace_sum`` over subsets of the invariant
    subspaces whose stabilizers intersect to more than H.  The empty
    intersection counts as the whole group, so the empty set always lands in
    the first and third families.
    """

    stabilizer_sum: int
    stabilizer_complement_sum: int
    subspace_sum: int


def _pruned_sums(sets: Sequence[frozenset], ambient: frozenset,
                 target: frozenset):
    """Alternating sums over subsets with intersection != target and == target.

    Depth-first walk keeping the running intersection.  Intersections only
    shrink and already contain the target, so once the running value hits the
    target the whole branch lies in the complement family; the signs of that
    subtree cancel pairwise except at the full prefix, which is the only
    bookkeeping left.  Cross-checked against naive enumeration in tests.
    """
    not_target = 0
    equals_target = 0

    def walk(i: int, sign: int, inter: frozenset) -> None:
        nonlocal not_target, equals_target
        if i == len(sets):
            not_target += sign
            return
        taken = inter & sets[i]
        if taken == target:
            if i == len(sets) - 1:
                equals_target += -sign
        else:
            walk(i + 1, -sign, taken)
        walk(i + 1, sign, inter)

    if ambient == target:
        raise ValueError("ambient group equals the target subgroup")
    walk(0, 1, ambient)
    return not_target, equals_target


def alternating_sums(group: GroupSet, subgroup: SubgroupRef,
                     family: StabilizerFamily,
                     max_powerset: int = POWERSET_CAP) -> AlternatingSums:
    _check_pair(group, subgroup)
    n_stabs = len(family.distinct_stabilizers)
    n_spaces = len(family.pairs)
    if max(n_stabs, n_spaces) > max_powerset:
        raise PowersetTooLarge(
            f"family sizes ({n_stabs} stabilizers, {n_spaces} subspaces) "
            f"exceed powerset cap {max_powerset}")
    ambient = group.full_subgroup().member_ids
    target = subgroup.member_ids
    stab_sets = [m.member_ids for m in family.distinct_stabilizers]
    space_sets = [stab.member_ids for _, stab in family.pairs]
    stab_sum, stab_complement = _pruned_sums(stab_sets, ambient, target)
    space_sum, _ = _pruned_sums(space_sets, ambient, target)
    return AlternatingSums(stab_sum, stab_complement, space_sum)


def _faces(sets: Sequence[frozenset], ambient: frozenset,
           target: frozenset) -> set:
    """All subsets (as masks) whose intersection differs from the target."""
    faces = set()

    def walk(i: int, mask: int, inter: frozenset) -> None:
        if i == len(sets):
            faces.add(mask)
            return
        taken = inter & sets[i]
        if taken != target:
            walk(i + 1, mask | (1 << i), taken)
        walk(i + 1, mask, inter)

    walk(0, 0, ambient)
    return faces


def build_complexes(group: GroupSet, subgroup: SubgroupRef,
                    family: StabilizerFamily,
                    max_powerset: int = POWERSET_CAP):
    """The two complexes carried by a stabilizer family.

    The first has the invariant subspaces with stabilizer bigger than H as
    vertices; a set of subspaces is a face when their stabilizers intersect
    to more than H.  The second lives on the distinct stabilizers other than
    H itself, with faces the subsets intersecting to more than H.  Shrinking
    a face can only grow the intersection, so both families are complexes by
    construction; strict validation would surface a bug, never repair one.
    """
    _check_pair(group, subgroup)
    target = subgroup.member_ids
    ambient = group.full_subgroup().member_ids
    space_pairs = [(w, stab) for w, stab in family.pairs
                   if stab.member_ids != target]
    space_vertices = [w for w, _ in space_pairs]
    space_sets = [stab.member_ids for _, stab in space_pairs]
    stab_vertices = [m for m in family.distinct_stabilizers
                     if m.member_ids != target]
    stab_sets = [m.member_ids for m in stab_vertices]
    if max(len(space_vertices), len(stab_vertices)) > max_powerset:
        raise PowersetTooLarge(
            f"complex vertex sets exceed powerset cap {max_powerset}")

    def to_complex(vertices, sets):
        masks = _faces(sets, ambient, target)
        families = [[vertices[i] for i in _bits(mask)] for mask in masks]
        return complex_from_faces(vertices, families, strict=True)

    stab_labels = [f"M{idx}(order={m.order})"
                   for idx, m in enumerate(stab_vertices)]
    return (to_complex(space_vertices, space_sets),
            to_complex(stab_labels, stab_sets))


@dataclass(frozen=True)
class IdentityReport:
    """All quantities of the five-way identity for one (G, H) pair."""

    mu_ideal: int
    subspace_sum: int
    stabilizer_sum: int
    stabilizer_complement_sum: int
    subspace_chi_reduced: int
    stabilizer_chi_reduced: int
    mu_full: Optional[int] = None
    decomposition_residual: Optional[int] = None

    @property
    def all_equal(self) -> bool:
        return (-self.mu_ideal == self.subspace_sum == self.stabilizer_sum
                == -self.subspace_chi_reduced == -self.stabilizer_chi_reduced)

    def values(self) -> tuple:
        return (-self.mu_ideal, self.subspace_sum, self.stabilizer_sum,
                -self.subspace_chi_reduced, -self.stabilizer_chi_reduced)

    def to_dict(self) -> dict:
        out = {
            "mu_ideal": self.mu_ideal,
            "subspace_sum": self.subspace_sum,
            "stabilizer_sum": self.stabilizer_sum,
            "stabilizer_complement_sum": self.stabilizer_complement_sum,
            "subspace_chi_reduced": self.subspace_chi_reduced,
            "stabilizer_chi_reduced": self.stabilizer_chi_reduced,
            "all_equal": self.all_equal,
        }
        if self.mu_full is not None:
            out["mu_full"] = self.mu_full
        if self.decomposition_residual is not None:
            out["decomposition_residual"] = self.decomposition_residual
        return out


def verify_identities(group: GroupSet, subgroup: SubgroupRef,
                      all_subgroups: Optional[Sequence[SubgroupRef]] = None,
                      max_interval: int = INTERVAL_CAP,
                      max_powerset: int = POWERSET_CAP,
                      with_decomposition: bool = False) -> IdentityReport:
    """Compute the five quantities independently and report them together.

    Requires a proper subgroup of an irreducible group.  When
    ``with_decomposition`` is set, the Mobius value over the full overgroup
    interval and the residual of the ideal/complement decomposition are
    attached as well.
    """
    _check_pair(group, subgroup)
    if subgroup.order == group.order:
        raise ValueError("identities are verified for proper subgroups only")
    family = stabilizer_family(group, subgroup)
    ideal = build_ideal(group, subgroup, family, all_subgroups=all_subgroups,
                        max_interval=max_interval)
    mu_hat = mu_ideal(ideal)
    sums = alternating_sums(group, subgroup, family, max_powerset=max_powerset)
    subspace_cx, stab_cx = build_complexes(group, subgroup, family,
                                           max_powerset=max_powerset)
    chi1 = euler(subspace_cx).chi_reduced
    chi2 = euler(stab_cx).chi_reduced
    mu_full = residual = None
    if with_decomposition:
        mu_full, residual = _decomposition(group, subgroup, ideal, mu_hat,
                                           all_subgroups=all_subgroups,
                                           max_interval=max_interval)
    return IdentityReport(mu_hat, sums.subspace_sum, sums.stabilizer_sum,
                          sums.stabilizer_complement_sum, chi1, chi2,
                          mu_full, residual)


def _interval_members(group: GroupSet, low: SubgroupRef, high: SubgroupRef,
                      all_subgroups, max_interval: int) -> list:
    if all_subgroups is not None:
        return sorted((k for k in all_subgroups
                       if low.member_ids <= k.member_ids <= high.member_ids),
                      key=SubgroupRef.sort_key)
    return overgroup_interval(group, low, top=high, cap=max_interval)


def _interval_row(group: GroupSet, low: SubgroupRef, high: SubgroupRef,
                  all_subgroups, max_interval: int):
    members = _interval_members(group, low, high, all_subgroups, max_interval)
    poset = FinitePoset.from_leq(members,
                                 lambda a, b: a.member_ids <= b.member_ids)
    row = mobius_row(poset, poset.index_of(low))
    return members, poset, row


def mobius_between(group: GroupSet, low: SubgroupRef,
                   high: Optional[SubgroupRef] = None,
                   all_subgroups: Optional[Sequence[SubgroupRef]] = None,
                   max_interval: int = INTERVAL_CAP) -> int:
    """Mobius value mu(low, high) inside the subgroup lattice of the group."""
    if high is None:
        high = group.full_subgroup()
    if not low.member_ids <= high.member_ids:
        from .errors import NotASubgroup
        raise NotASubgroup("low endpoint is not contained in the high one")
    _, poset, row = _interval_row(group, low, high, all_subgroups, max_interval)
    return row[poset.index_of(high)]


def _decomposition(group: GroupSet, subgroup: SubgroupRef,
                   ideal: ReducibleIdeal, mu_hat: int, all_subgroups,
                   max_interval: int):
    top = group.full_subgroup()
    members, poset, row = _interval_row(group, subgroup, top, all_subgroups,
                                        max_interval)
    mu_full = row[poset.index_of(top)]
    in_ideal = {k.member_ids for k in ideal.members}
    outside = 0
    for k in members:
        if (k.member_ids not in in_ideal
                and k.member_ids != subgroup.member_ids
                and k.member_ids != top.member_ids):
            outside += row[poset.index_of(k)]
    residual = mu_full - mu_hat + outside
    return mu_full, residual


def decomposition_residual(group: GroupSet, subgroup: SubgroupRef,
                           all_subgroups: Optional[Sequence[SubgroupRef]] = None,
                           max_interval: int = INTERVAL_CAP) -> int:
    """Residual of the split of mu(H, G) into the ideal value and the rest.

    mu(H, G) should equal the ideal Mobius value minus the sum of mu(H, K)
    over proper overgroups K strictly above H and outside the ideal; the
    returned integer is zero exactly when that holds.  For subgroups with no
    invariant subspace the ideal is empty and the split collapses to the
    defining recursion of the Mobius function.
    """
    _check_pair(group, subgroup)
    family = stabilizer_family(group, subgroup)
    ideal = build_ideal(group, subgroup, family, all_subgroups=all_subgroups,
                        max_interval=max_interval)
    mu_hat = mu_ideal(ideal)
    _, residual = _decomposition(group, subgroup, ideal, mu_hat,
                                 all_subgroups, max_interval)
    return residual
