"""Tests for omega_coend.cache module"""
from omega_coend.cache import PresentationCache, cached_free_operad
from omega_coend.collection import build_complex
from omega_coend.operads import Bounds, OperadPresentation, Property
from omega_coend.terms import Unit

BOUNDS = Bounds(max_dim=1, max_width=3, max_size=2)


class TestPresentationCache:
    """Tests for PresentationCache and cached_free_operad()"""

    def test_store_then_load(self, tmp_path):
        """A second build should read the cells written by the first"""
        first = cached_free_operad(build_complex(0, 1), Property.ID_U, BOUNDS, cache_dir=tmp_path)

        fresh = OperadPresentation(build_complex(0, 1), Property.ID_U, BOUNDS)
        loaded = PresentationCache(tmp_path).load(fresh)

        assert loaded
        assert fresh.cells == first.cells
        assert len(list(tmp_path.glob("*.json"))) == 1

    def test_miss_on_empty_directory(self, tmp_path):
        """load() should report a miss when nothing is cached"""
        P = OperadPresentation(build_complex(0, 1), Property.ID, BOUNDS)

        assert not PresentationCache(tmp_path).load(P)

    def test_key_depends_on_bounds(self, tmp_path):
        """Different bounds should give different entries"""
        cache = PresentationCache(tmp_path)
        a = OperadPresentation(build_complex(0, 1), Property.ID, BOUNDS)
        b = OperadPresentation(build_complex(0, 1), Property.ID, Bounds(max_dim=1, max_width=2, max_size=2))

        assert cache.key(a) != cache.key(b)
        assert cache.key(a) == cache.key(OperadPresentation(build_complex(0, 1), Property.ID, BOUNDS, label="x"))

    def test_congruence_is_restored(self, tmp_path):
        """A strict presentation should come back with its classes"""
        cached_free_operad(build_complex(0, 1), Property.S, BOUNDS, cache_dir=tmp_path)

        again = cached_free_operad(build_complex(0, 1), Property.S, BOUNDS, cache_dir=tmp_path)

        alg = again.algebra
        mu = alg.generator("mu(1,0)")
        x = alg.compose(mu, [mu, Unit("1", 1)])
        y = alg.compose(mu, [Unit("1", 1), mu])
        assert again.congruence.same(x, y)

    def test_no_directory(self):
        """Without a cache directory the operad should simply be saturated"""
        P = cached_free_operad(build_complex(0, 1), Property.ID, BOUNDS)

        assert P.counts() == [1, 4]

    def test_strict_composites_across_classes_reload(self, tmp_path, two_globes):
        """Cells pasted across identified boundaries should parse back on a cache hit"""
        bounds = Bounds(max_dim=2, max_width=2, max_size=3)
        first = cached_free_operad(two_globes, Property.S, bounds, cache_dir=tmp_path)

        fresh = OperadPresentation(two_globes, Property.S, bounds)
        loaded = PresentationCache(tmp_path).load(fresh)

        alg = fresh.algebra
        composite = alg.compose(fresh.generator("m"), [fresh.generator("alpha"), fresh.generator("beta")])
        assert loaded
        assert fresh.cells == first.cells
        assert fresh.is_stored(composite)
        assert fresh.class_of(composite) == first.class_of(composite)
