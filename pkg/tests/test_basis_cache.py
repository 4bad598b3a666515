from basis_cache import BasisCache, decode_basis, encode_basis
from groebner_engine import Ideal, basis_cache_context, engine_counters_context
from polynomial_ring import gradient


def test_store_then_load(tmp_path, rational_quintic):
    cache = BasisCache(tmp_path)
    basis = Ideal(gradient(rational_quintic)).basis()
    key = cache.key_for(basis.polys, "grevlex")
    cache.store(key, basis.polys)
    assert cache.path_for(key).exists()
    assert cache.path_for(key).parent.name == key[:2]
    assert cache.load(key, basis.ring) == basis.polys
    assert cache.hits == 1


def test_missing_entry(tmp_path, plane):
    cache = BasisCache(tmp_path)
    assert cache.load("ab" * 32, plane.ring) is None
    assert cache.misses == 1


def test_key_depends_on_order(tmp_path, nodal_cubic):
    cache = BasisCache(tmp_path)
    generators = gradient(nodal_cubic)
    assert cache.key_for(generators, "grevlex") != cache.key_for(generators, "lex")
    assert cache.key_for(generators, "grevlex") == cache.key_for(list(generators), "grevlex")


def test_corrupt_entry_is_ignored(tmp_path, nodal_cubic):
    cache = BasisCache(tmp_path)
    basis = Ideal(gradient(nodal_cubic)).basis()
    key = cache.key_for(gradient(nodal_cubic), "grevlex")
    cache.store(key, basis.polys)
    cache.path_for(key).write_bytes(b"JSGB garbage")
    assert cache.load(key, basis.ring) is None


def test_encoding_preserves_rational_coefficients(poly, plane):
    polys = [poly("x0^2/3 - 7*x1*x2"), poly("-x2^5 + 123456789012345678901234567890*x0")]
    assert decode_basis(encode_basis(polys), plane.ring) == polys


def test_clear(tmp_path, nodal_cubic):
    cache = BasisCache(tmp_path)
    basis = Ideal(gradient(nodal_cubic)).basis()
    cache.store(cache.key_for(basis.polys, "grevlex"), basis.polys)
    assert cache.clear() == 1
    assert cache.clear() == 0


def test_ideal_reads_through_the_cache(tmp_path, rational_quintic):
    cache = BasisCache(tmp_path)
    counters = {}
    cache_token = basis_cache_context.set(cache)
    counter_token = engine_counters_context.set(counters)
    try:
        first = Ideal(gradient(rational_quintic)).basis()
        second = Ideal(gradient(rational_quintic)).basis()
    finally:
        engine_counters_context.reset(counter_token)
        basis_cache_context.reset(cache_token)
    assert first.polys == second.polys
    assert counters["cache_hits"] == 1
    assert counters["bases_computed"] == 1
