import numpy as np
import pytest

from src.data.cache import GraphCache, cache_key
from src.data.encode import encode
from src.data.normalize import normalize
from src.data.vocab import build_vocab
from src.errors import CacheCorrupt

from conftest import AND_MODULE, dfg_of


@pytest.fixture
def encoded():
    g = normalize(dfg_of(AND_MODULE))
    vocab = build_vocab([g])
    return g, vocab, encode(g, vocab, "and2", "Trojan")


def test_get_after_put(tmp_path, encoded):
    g, vocab, t = encoded
    cache = GraphCache(str(tmp_path))
    key = cache_key(g, vocab.fingerprint)
    assert cache.get(key) is None
    cache.put(key, t)
    got = cache.get(key, vocab.fingerprint)
    assert got.equals(t)
    assert got.x.dtype == np.float64
    assert (cache.hits, cache.misses) == (1, 1)


def test_key_depends_on_vocab(encoded):
    g, vocab, _ = encoded
    assert cache_key(g, vocab.fingerprint) != cache_key(g, "other")


def test_stale_fingerprint_is_a_miss(tmp_path, encoded):
    g, vocab, t = encoded
    cache = GraphCache(str(tmp_path))
    key = cache_key(g, vocab.fingerprint)
    cache.put(key, t)
    assert cache.get(key, "another-vocab") is None


def test_corrupt_entry(tmp_path, encoded):
    g, vocab, t = encoded
    cache = GraphCache(str(tmp_path))
    key = cache_key(g, vocab.fingerprint)
    cache.put(key, t)
    with open(cache.path(key), "r+b") as fh:
        fh.truncate(40)
    with pytest.raises(CacheCorrupt):
        cache.get(key)
