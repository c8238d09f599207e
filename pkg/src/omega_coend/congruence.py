"""Union-find over hashable items

Leaders are always the earliest-added member of their class, so class
representatives do not depend on the order of unions.
"""
from typing import Dict, Generic, Hashable, Iterable, List, TypeVar

T = TypeVar("T", bound=Hashable)


class UnionFind(Generic[T]):
    def __init__(self, items: Iterable[T] = ()) -> None:
        self._parent: Dict[T, T] = {}
        self._order: Dict[T, int] = {}
        self.dirty = False
        for item in items:
            self.add(item)

    def __contains__(self, item: object) -> bool:
        return item in self._parent

    def __len__(self) -> int:
        return len(self._parent)

    def add(self, item: T) -> T:
        if item not in self._parent:
            self._parent[item] = item
            self._order[item] = len(self._order)
        return item

    def find(self, item: T) -> T:
        self.add(item)
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        # path compression
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: T, b: T) -> T:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        self.dirty = True
        if self._order[rb] < self._order[ra]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        return ra

    def same(self, a: T, b: T) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> List[List[T]]:
        """Members grouped by leader, both in insertion order"""
        groups: Dict[T, List[T]] = {}
        for item in self._order:
            groups.setdefault(self.find(item), []).append(item)
        return list(groups.values())
