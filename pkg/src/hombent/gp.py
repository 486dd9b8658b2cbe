"""Expression trees over a Boolean function set, for the symbolic genotype.

Trees evaluate to full truth tables. Evaluation packs each intermediate
truth table into a single Python integer (bit i = value at input index i),
so every node costs a couple of native bitwise operations regardless of n.

Function set and arities:

    NOT(a)      = 1 ^ a
    OR(a, b)    = a | b
    XOR(a, b)   = a ^ b
    AND(a, b)   = a & b
    AND2(a, b)  = a & NOT(b)
    XNOR(a, b)  = NOT(a ^ b)
    IF(a, b, c) = (a & b) | (NOT(a) & c)   -- multiplexer on a
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from hombent.core import bits_to_int, int_to_bits

ARITY = {"NOT": 1, "OR": 2, "XOR": 2, "AND": 2, "AND2": 2, "XNOR": 2, "IF": 3}
FUNCTION_SET = tuple(ARITY)

DEFAULT_MAX_DEPTH = 8
DEFAULT_INIT_DEPTHS = (2, 6)


class GpNode:
    """One tree node: an operator with children, or a variable leaf "x<j>"."""

    __slots__ = ("op", "children")

    def __init__(self, op: str, children=()):
        self.op = op
        self.children = list(children)

    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self):
        return to_sexpr(self)


@dataclass
class GpTree:
    """A genotype: root node plus its cached depth."""

    root: GpNode
    depth: int = field(default=-1)

    def __post_init__(self):
        if self.depth < 0:
            self.depth = node_depth(self.root)


def node_depth(node: GpNode) -> int:
    """Edge-count depth; a lone leaf has depth 0."""
    if node.is_leaf():
        return 0
    return 1 + max(node_depth(c) for c in node.children)


def node_size(node: GpNode) -> int:
    return 1 + sum(node_size(c) for c in node.children)


def clone(node: GpNode) -> GpNode:
    return GpNode(node.op, [clone(c) for c in node.children])


def _collect(node: GpNode, depth=0, parent=None, slot=0, out=None):
    """All (node, parent, slot, depth) tuples in preorder."""
    if out is None:
        out = []
    out.append((node, parent, slot, depth))
    for i, child in enumerate(node.children):
        _collect(child, depth + 1, node, i, out)
    return out


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _variable_columns(n: int) -> tuple[int, ...]:
    """Truth-table integers of x_1 .. x_n (x_1 the most significant input bit)."""
    cols = []
    for j in range(1, n + 1):
        bits = (np.arange(1 << n) >> (n - j)) & 1
        cols.append(bits_to_int(bits.astype(np.uint8)))
    return tuple(cols)


def _eval_node(node: GpNode, columns, full: int) -> int:
    op = node.op
    if not node.children:
        return columns[int(op[1:]) - 1]
    a = _eval_node(node.children[0], columns, full)
    if op == "NOT":
        return a ^ full
    b = _eval_node(node.children[1], columns, full)
    if op == "OR":
        return a | b
    if op == "XOR":
        return a ^ b
    if op == "AND":
        return a & b
    if op == "AND2":
        return a & (b ^ full)
    if op == "XNOR":
        return (a ^ b) ^ full
    c = _eval_node(node.children[2], columns, full)
    return (a & b) | ((a ^ full) & c)  # IF


def eval_tree(tree: GpTree, n: int) -> np.ndarray:
    """Raw truth table of the tree over all 2^n inputs (uint8 bits)."""
    full = (1 << (1 << n)) - 1
    value = _eval_node(tree.root, _variable_columns(n), full)
    return int_to_bits(value, 1 << n)


# ---------------------------------------------------------------------------
# Random construction
# ---------------------------------------------------------------------------

def _grow(n, rng, depth, max_depth, min_depth):
    if depth >= max_depth:
        return GpNode(f"x{int(rng.integers(1, n + 1))}")
    if depth >= min_depth and rng.random() < 0.3:
        return GpNode(f"x{int(rng.integers(1, n + 1))}")
    op = FUNCTION_SET[int(rng.integers(len(FUNCTION_SET)))]
    return GpNode(op, [_grow(n, rng, depth + 1, max_depth, min_depth) for _ in range(ARITY[op])])


def _full(n, rng, depth, max_depth):
    if depth >= max_depth:
        return GpNode(f"x{int(rng.integers(1, n + 1))}")
    op = FUNCTION_SET[int(rng.integers(len(FUNCTION_SET)))]
    return GpNode(op, [_full(n, rng, depth + 1, max_depth) for _ in range(ARITY[op])])


def random_tree(n, rng, max_depth=DEFAULT_MAX_DEPTH, init_depths=DEFAULT_INIT_DEPTHS) -> GpTree:
    """Ramped half-and-half: random target depth in init_depths, grow or full."""
    lo, hi = init_depths
    target = int(rng.integers(lo, hi + 1))
    if rng.random() < 0.5:
        root = _full(n, rng, 0, target)
    else:
        root = _grow(n, rng, 0, target, min_depth=lo)
    return GpTree(root)


# ---------------------------------------------------------------------------
# Variation
# ---------------------------------------------------------------------------

def _replace(child_tree_root, parent, slot, replacement):
    if parent is None:
        return replacement
    parent.children[slot] = replacement
    return child_tree_root


def _cx_subtree(a: GpNode, b: GpNode, rng) -> GpNode:
    """Plain subtree exchange at independent uniform points."""
    work = clone(a)
    _, parent, slot, _ = _pick(_collect(work), rng)
    donor, _, _, _ = _pick(_collect(b), rng)
    return _replace(work, parent, slot, clone(donor))


def _common_region(a: GpNode, b: GpNode):
    """Aligned positions of the two trees: the root, plus children of any
    aligned pair whose nodes have equal arity."""
    pairs = []

    def walk(x, y, px, slot, depth):
        pairs.append((x, y, px, slot, depth))
        if len(x.children) == len(y.children):
            for i, (cx, cy) in enumerate(zip(x.children, y.children)):
                walk(cx, cy, x, i, depth + 1)

    walk(a, b, None, 0, 0)
    return pairs


def _cx_one_point(a: GpNode, b: GpNode, rng) -> GpNode:
    """Swap subtrees at one point chosen uniformly in the common region."""
    work = clone(a)
    pairs = _common_region(work, b)
    _, donor, parent, slot, _ = _pick(pairs, rng)
    return _replace(work, parent, slot, clone(donor))


def _cx_uniform(a: GpNode, b: GpNode, rng) -> GpNode:
    """Node-by-node merge over the common region; outside it, the whole
    subtree comes from the parent picked at the boundary."""

    def merge(x, y):
        primary = x if rng.random() < 0.5 else y
        if len(x.children) == len(y.children) and x.children:
            return GpNode(primary.op, [merge(cx, cy) for cx, cy in zip(x.children, y.children)])
        return clone(primary)

    return merge(a, b)


def _cx_size_fair(a: GpNode, b: GpNode, rng) -> GpNode:
    """Replacement subtree drawn only from donors of comparable size
    (at most 2*s+1 nodes for a removed subtree of s nodes)."""
    work = clone(a)
    node, parent, slot, _ = _pick(_collect(work), rng)
    s = node_size(node)
    donors = [entry for entry in _collect(b) if node_size(entry[0]) <= 2 * s + 1]
    donor, _, _, _ = _pick(donors, rng)
    return _replace(work, parent, slot, clone(donor))


def _cx_context_preserving(a: GpNode, b: GpNode, rng) -> GpNode:
    """Swap only at a coordinate (child-index path) valid in both trees."""

    def collect_paths(node, path, out):
        out[path] = node
        for i, c in enumerate(node.children):
            collect_paths(c, path + (i,), out)

    map_a, map_b = {}, {}
    collect_paths(a, (), map_a)
    collect_paths(b, (), map_b)
    shared = sorted(set(map_a) & set(map_b))
    path = shared[int(rng.integers(len(shared)))]
    work = clone(a)
    node = work
    for i in path[:-1]:
        node = node.children[i]
    donor = clone(map_b[path])
    if path:
        node.children[path[-1]] = donor
        return work
    return donor


def _pick(entries, rng):
    return entries[int(rng.integers(len(entries)))]


_CROSSOVERS = (_cx_subtree, _cx_one_point, _cx_uniform, _cx_size_fair, _cx_context_preserving)


def gp_crossover(p1: GpTree, p2: GpTree, rng, max_depth=DEFAULT_MAX_DEPTH, retries=10) -> GpTree:
    """One of the five crossover operators, uniformly at random.

    Children deeper than max_depth are rejected and regenerated; after
    `retries` failures the first parent is copied unchanged.
    """
    for _ in range(retries):
        op = _CROSSOVERS[int(rng.integers(len(_CROSSOVERS)))]
        root = op(p1.root, p2.root, rng)
        depth = node_depth(root)
        if depth <= max_depth:
            return GpTree(root, depth)
    return GpTree(clone(p1.root), p1.depth)


def subtree_mutation(tree: GpTree, n: int, rng, max_depth=DEFAULT_MAX_DEPTH) -> GpTree:
    """Replace a uniformly chosen node's subtree with a fresh random one,
    sized so the result stays within max_depth."""
    work = clone(tree.root)
    node, parent, slot, depth = _pick(_collect(work), rng)
    budget = max_depth - depth
    fresh = _grow(n, rng, 0, budget, min_depth=min(2, budget))
    root = _replace(work, parent, slot, fresh)
    return GpTree(root)


def gp_variation(p1: GpTree, p2: GpTree, n: int, rng, p_mut: float,
                 max_depth=DEFAULT_MAX_DEPTH) -> GpTree:
    """Crossover followed by subtree mutation with probability p_mut."""
    child = gp_crossover(p1, p2, rng, max_depth)
    if rng.random() < p_mut:
        child = subtree_mutation(child, n, rng, max_depth)
    return child


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_sexpr(node: GpNode) -> str:
    if node.is_leaf():
        return node.op
    return "(" + " ".join([node.op] + [to_sexpr(c) for c in node.children]) + ")"


def parse_sexpr(text: str) -> GpTree:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse() -> GpNode:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            op = tokens[pos]
            pos += 1
            if op not in ARITY:
                raise ValueError(f"unknown operator {op!r} at token {pos - 1}")
            children = [parse() for _ in range(ARITY[op])]
            if tokens[pos] != ")":
                raise ValueError(f"expected ')' at token {pos}")
            pos += 1
            return GpNode(op, children)
        if tok == ")":
            raise ValueError(f"unexpected ')' at token {pos - 1}")
        if not tok.startswith("x") or not tok[1:].isdigit():
            raise ValueError(f"invalid leaf {tok!r} at token {pos - 1}")
        return GpNode(tok)

    root = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens starting at {pos}")
    return GpTree(root)
