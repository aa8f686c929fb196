"""Half-full trees: the reconstruction-tree shape and its merge algebra.

A haft over L leaf slots is a sequence of complete binary trees whose leaf
counts are the set bits of L (strictly decreasing powers of two, largest
first), joined by a right-leaning spine of internal nodes. Leaves carry the
orphaned endpoints that the tree reconnects; internal nodes are virtual
helpers identified by fresh vids.

The shape is what makes repair cheap:

* Leaf depth is at most floor(log2 L) + 1, comfortably inside the
  2*ceil(log2 L) + 1 contract, because tree i sits at spine depth i and has
  log-size at most log2 L - i + 1.
* Two hafts merge like binary addition: equal-size complete trees pair up
  under one fresh internal node (a carry) and everything else is untouched,
  so only the spine and the carried trees cost anything.

Simulator assignment maps every internal node to a leaf slot inside its own
subtree: the leftmost eligible leaf of its right subtree (falling back to
the leftmost eligible leaf of the whole subtree when the right half has no
eligible slot). This rule is injective, so a leaf slot simulates at most one
internal node, which caps the de-simulated degree gain per slot at 4 real
edges (2 when the simulated internal sits at the bottom level).

All structures here are immutable values; merging shares subtrees freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .virtual_graph import VidSource, VNode, virt


class HaftError(ValueError):
    """Base class for haft contract violations."""


class EmptySlotsError(HaftError):
    pass


class OriginOverlapError(HaftError):
    pass


class UnassignableError(HaftError):
    pass


@dataclass(frozen=True, order=True)
class LeafSlot:
    """One leaf of a reconstruction tree.

    endpoint   orphaned neighbor occupying the slot (real or virtual node)
    origin     the consumed edge this slot descends from, as a sorted id pair;
               unique across all live slots of all trees
    processor  the processor answering for this slot: the endpoint itself when
               real, its simulator when virtual; None marks an ineligible slot
    """

    processor: int | None
    origin: tuple[int, int]
    endpoint: VNode


@dataclass(frozen=True)
class Leaf:
    slot: LeafSlot


@dataclass(frozen=True)
class Internal:
    vid: int
    left: "HaftNode"
    right: "HaftNode"


HaftNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class Haft:
    """Complete trees in strictly decreasing power-of-two sizes, plus the
    spine vids; spine[i] joins trees[i] (left child) with the rest."""

    trees: tuple[HaftNode, ...]
    spine: tuple[int, ...]

    @property
    def leaf_count(self) -> int:
        return sum(leaf_count(t) for t in self.trees)

    def root(self) -> HaftNode | None:
        """The whole haft as one tree, materializing the spine."""
        if not self.trees:
            return None
        node = self.trees[-1]
        for i in range(len(self.trees) - 2, -1, -1):
            node = Internal(self.spine[i], self.trees[i], node)
        return node


# -- structure queries ------------------------------------------------------


def leaf_count(node: HaftNode) -> int:
    if isinstance(node, Leaf):
        return 1
    return leaf_count(node.left) + leaf_count(node.right)


def leaves(node: HaftNode) -> list[LeafSlot]:
    """Leaf slots in left-to-right order."""
    if isinstance(node, Leaf):
        return [node.slot]
    return leaves(node.left) + leaves(node.right)


def haft_slots(h: Haft) -> list[LeafSlot]:
    out: list[LeafSlot] = []
    for t in h.trees:
        out.extend(leaves(t))
    return out


def node_vids(node: HaftNode) -> list[int]:
    if isinstance(node, Leaf):
        return []
    return [node.vid] + node_vids(node.left) + node_vids(node.right)


def haft_vids(h: Haft) -> set[int]:
    out = set(h.spine)
    for t in h.trees:
        out.update(node_vids(t))
    return out


def leaf_depths(h: Haft) -> list[int]:
    """Depth of every leaf below the haft root, left to right."""
    root = h.root()
    if root is None:
        return []
    out: list[int] = []

    def walk(node: HaftNode, depth: int) -> None:
        if isinstance(node, Leaf):
            out.append(depth)
        else:
            walk(node.left, depth + 1)
            walk(node.right, depth + 1)

    walk(root, 0)
    return out


def ceil_log2(x: int) -> int:
    if x <= 1:
        return 0
    return (x - 1).bit_length()


# -- construction -----------------------------------------------------------


def _assemble(items: list[HaftNode], vids: VidSource) -> Haft:
    """Binary-counter combine: complete trees of equal size pair under a fresh
    carry node, smallest sizes first; per size the queue order is input order
    with carries appended. Spine vids are minted last, left to right."""
    queues: dict[int, list[HaftNode]] = {}
    for item in items:
        queues.setdefault(leaf_count(item), []).append(item)
    result: list[HaftNode] = []
    while queues:
        size = min(queues)
        queue = queues.pop(size)
        while len(queue) >= 2:
            left, right = queue.pop(0), queue.pop(0)
            queues.setdefault(size * 2, []).append(Internal(vids.take(), left, right))
        if queue:
            result.append(queue[0])
    trees = tuple(reversed(result))
    spine = tuple(vids.take() for _ in range(max(0, len(trees) - 1)))
    return Haft(trees=trees, spine=spine)


def build_haft(slots: Iterable[LeafSlot], vids: VidSource) -> Haft:
    """Haft over the given slots, preserving their order left to right."""
    slot_list = list(slots)
    if not slot_list:
        raise EmptySlotsError("cannot build a haft over zero slots")
    _check_origins(slot_list)
    return _assemble([Leaf(s) for s in slot_list], vids)


def merge_hafts(a: Haft, b: Haft, vids: VidSource) -> Haft:
    """Binary addition of two hafts; untouched complete trees keep their vids."""
    _check_origins(haft_slots(a) + haft_slots(b))
    return _assemble(list(a.trees) + list(b.trees), vids)


def _check_origins(slots: list[LeafSlot]) -> None:
    seen: set[tuple[int, int]] = set()
    for s in slots:
        if s.origin in seen:
            raise OriginOverlapError(f"origin {s.origin} occupies two leaf slots")
        seen.add(s.origin)


# -- simulator assignment -----------------------------------------------------


def assign_simulators(h: Haft) -> dict[int, LeafSlot]:
    """Assign each internal vid the leftmost eligible leaf of its right
    subtree (whole-subtree fallback). Injective and subtree-local."""
    root = h.root()
    assignment: dict[int, LeafSlot] = {}
    if root is None or isinstance(root, Leaf):
        return assignment

    def first_eligible(node: HaftNode) -> LeafSlot | None:
        if isinstance(node, Leaf):
            return node.slot if node.slot.processor is not None else None
        return first_eligible(node.left) or first_eligible(node.right)

    def walk(node: HaftNode) -> None:
        if isinstance(node, Leaf):
            return
        slot = first_eligible(node.right) or first_eligible(node.left)
        if slot is None:
            raise UnassignableError(f"no eligible slot in subtree of vid {node.vid}")
        assignment[node.vid] = slot
        walk(node.left)
        walk(node.right)

    walk(root)
    taken: set[LeafSlot] = set()
    for vid in sorted(assignment):
        slot = assignment[vid]
        if slot in taken:
            raise UnassignableError(f"slot {slot.origin} would simulate two internals")
        taken.add(slot)
    return assignment


def to_virtual_edges(
    h: Haft, assignment: dict[int, LeafSlot]
) -> tuple[list[tuple[int, int]], list[tuple[VNode, VNode]]]:
    """Translate a haft into virtual-graph material.

    Returns (declarations, edges): one (vid, simulator processor) per internal
    node and one VNode pair per parent-child tree edge.
    """
    root = h.root()
    decls: list[tuple[int, int]] = []
    edges: list[tuple[VNode, VNode]] = []
    if root is None or isinstance(root, Leaf):
        return decls, edges

    def vnode_of(node: HaftNode) -> VNode:
        if isinstance(node, Leaf):
            return node.slot.endpoint
        return virt(node.vid)

    def walk(node: HaftNode) -> None:
        if isinstance(node, Leaf):
            return
        slot = assignment[node.vid]
        if slot.processor is None:
            raise UnassignableError(f"vid {node.vid} assigned an ineligible slot")
        decls.append((node.vid, slot.processor))
        for child in (node.left, node.right):
            edges.append((virt(node.vid), vnode_of(child)))
            walk(child)

    walk(root)
    return decls, edges


# -- healing-time decomposition ----------------------------------------------


def split_out(h: Haft, dead_processor: int) -> tuple[list[HaftNode], list[int]]:
    """Dissolve a haft around the slots answering to a dead processor.

    Returns (pieces, dissolved): the maximal complete subtrees containing no
    dead slot, in left-to-right order with all vids intact, plus the vids of
    every dissolved internal node (ancestors of dead slots and the spine).
    """
    pieces: list[HaftNode] = []
    dissolved: list[int] = []

    def walk(node: HaftNode) -> tuple[list[HaftNode], bool]:
        if isinstance(node, Leaf):
            dead = node.slot.processor == dead_processor
            return ([] if dead else [node]), dead
        left_pieces, left_dead = walk(node.left)
        right_pieces, right_dead = walk(node.right)
        if not (left_dead or right_dead):
            return [node], False
        dissolved.append(node.vid)
        return left_pieces + right_pieces, True

    for tree in h.trees:
        tree_pieces, _ = walk(tree)
        pieces.extend(tree_pieces)
    dissolved.extend(h.spine)
    return pieces, dissolved


# -- validation ---------------------------------------------------------------


def _complete_size(node: HaftNode) -> int | None:
    """Leaf count if the subtree is a complete binary tree, else None."""
    if isinstance(node, Leaf):
        return 1
    ls = _complete_size(node.left)
    rs = _complete_size(node.right)
    if ls is None or rs is None or ls != rs:
        return None
    return ls + rs


def validate_haft(h: Haft) -> list[str]:
    """Shape audit; empty list means every haft invariant holds."""
    problems: list[str] = []
    sizes = []
    for i, tree in enumerate(h.trees):
        size = _complete_size(tree)
        if size is None:
            problems.append(f"tree-not-complete: index {i}")
            size = leaf_count(tree)
        sizes.append(size)
    for s in sizes:
        if s & (s - 1):
            problems.append(f"size-not-power-of-two: {s}")
    if any(a <= b for a, b in zip(sizes, sizes[1:])):
        problems.append(f"sizes-not-strictly-decreasing: {sizes}")
    if len(h.spine) != max(0, len(h.trees) - 1):
        problems.append(f"spine-length: {len(h.spine)} for {len(h.trees)} trees")
    vids = list(h.spine)
    for tree in h.trees:
        vids.extend(node_vids(tree))
    if len(vids) != len(set(vids)):
        problems.append("duplicate-vids")
    total = sum(sizes)
    if total:
        bound = ceil_log2(total) + len(h.trees)
        depths = leaf_depths(h)
        if depths and max(depths) > bound:
            problems.append(f"depth-bound: max {max(depths)} > {bound}")
    slots = haft_slots(h)
    if len({s.origin for s in slots}) != len(slots):
        problems.append("duplicate-origins")
    return problems
