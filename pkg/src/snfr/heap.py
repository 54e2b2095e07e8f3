"""Meldable min-heap (pairing heap) used to carry green-edge candidates up the tree."""

from __future__ import annotations


class _Node:
    __slots__ = ("key", "item", "child", "sibling")

    def __init__(self, key, item):
        self.key = key
        self.item = item
        self.child = None
        self.sibling = None


def _link(a: _Node, b: _Node) -> _Node:
    if b.key < a.key:
        a, b = b, a
    b.sibling = a.child
    a.child = b
    return a


class PairingHeap:
    """Min-heap with O(1) insert/meld and amortized O(log n) delete-min.

    Keys must be mutually comparable; ``meld`` empties the donor heap.

    >>> h = PairingHeap()
    >>> h.insert(3, "c"); h.insert(1, "a")
    >>> h.find_min()
    (1, 'a')
    """

    __slots__ = ("_root", "_size")

    def __init__(self):
        self._root = None
        self._size = 0

    def __len__(self):
        return self._size

    def __bool__(self):
        return self._root is not None

    def insert(self, key, item=None) -> None:
        node = _Node(key, item)
        self._root = node if self._root is None else _link(self._root, node)
        self._size += 1

    def find_min(self):
        if self._root is None:
            raise IndexError("find_min on empty heap")
        return self._root.key, self._root.item

    def delete_min(self):
        root = self._root
        if root is None:
            raise IndexError("delete_min on empty heap")
        # two-pass pairing, iterative to stay clear of the recursion limit
        pairs = []
        cur = root.child
        while cur is not None:
            a = cur
            b = a.sibling
            if b is None:
                a.sibling = None
                pairs.append(a)
                break
            cur = b.sibling
            a.sibling = b.sibling = None
            pairs.append(_link(a, b))
        merged = None
        for node in reversed(pairs):
            merged = node if merged is None else _link(node, merged)
        self._root = merged
        self._size -= 1
        return root.key, root.item

    def meld(self, other: PairingHeap) -> None:
        if other is self or other._root is None:
            return
        if self._root is None:
            self._root = other._root
        else:
            self._root = _link(self._root, other._root)
        self._size += other._size
        other._root = None
        other._size = 0
