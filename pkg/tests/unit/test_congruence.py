"""Tests for omega_coend.congruence module"""
from omega_coend.congruence import UnionFind


class TestUnionFind:
    """Tests for UnionFind"""

    def test_singletons(self):
        """A fresh structure should keep every item in its own class"""
        uf = UnionFind("abc")

        assert uf.classes() == [["a"], ["b"], ["c"]]
        assert not uf.dirty

    def test_leader_is_earliest_member(self):
        """union() should keep the earliest-added item as leader either way round"""
        uf = UnionFind(["x", "y", "z"])

        uf.union("z", "y")
        uf.union("y", "x")

        assert uf.find("z") == "x"
        assert uf.classes() == [["x", "y", "z"]]

    def test_union_marks_dirty_only_on_merge(self):
        """union() of items already together should not mark the structure dirty"""
        uf = UnionFind([1, 2])
        uf.union(1, 1)

        assert not uf.dirty

        uf.union(1, 2)

        assert uf.dirty
        assert uf.same(2, 1)

    def test_find_adds_unknown_items(self):
        """find() should register an item it has not seen"""
        uf = UnionFind()

        assert uf.find(("L", "u0")) == ("L", "u0")
        assert ("L", "u0") in uf
        assert len(uf) == 1

    def test_long_chain_compresses(self):
        """find() should reach the leader of a long chain"""
        uf = UnionFind(range(50))
        for i in range(49, 0, -1):
            uf.union(i, i - 1)

        assert all(uf.find(i) == 0 for i in range(50))
        assert len(uf.classes()) == 1
