import pytest

from shopminer.errors import FixtureMissError, TransportError
from shopminer.harvest.fetcher import (
    FetchRequest,
    FetchResponse,
    FixtureFetcher,
    FixtureStore,
)


def test_request_rejects_non_get():
    with pytest.raises(TransportError):
        FetchRequest(url="http://x.test/", method="POST")


def test_request_rejects_relative_url():
    with pytest.raises(TransportError):
        FetchRequest(url="/thread/t1")


def test_response_status_range_enforced():
    with pytest.raises(TransportError):
        FetchResponse(url="http://x.test/", status=99, body=b"")


def test_store_round_trip(tmp_path):
    store = FixtureStore(tmp_path)
    store.put("http://x.test/a", b"hello", status=200, fetched_at="2020-03-15T12:00:00Z")
    store.put("http://x.test/b", b"world", status=404)
    a = store.get("http://x.test/a")
    assert (a.status, a.body, a.fetched_at) == (200, b"hello", "2020-03-15T12:00:00Z")
    assert store.get("http://x.test/b").status == 404


def test_fixture_miss_raises(tmp_path):
    FixtureStore(tmp_path).put("http://x.test/a", b"")
    with pytest.raises(FixtureMissError):
        FixtureFetcher(tmp_path).fetch(FetchRequest(url="http://x.test/unknown"))


def test_body_cap_enforced(tmp_path):
    store = FixtureStore(tmp_path)
    store.put("http://x.test/big", b"x" * 64)
    fetcher = FixtureFetcher(tmp_path, body_cap=16)
    with pytest.raises(TransportError, match="cap"):
        fetcher.fetch(FetchRequest(url="http://x.test/big"))


def test_store_overwrite_updates_entry(tmp_path):
    store = FixtureStore(tmp_path)
    store.put("http://x.test/a", b"v1")
    store.put("http://x.test/a", b"v2")
    assert store.get("http://x.test/a").body == b"v2"


def test_unsupported_index_version_rejected(tmp_path):
    from shopminer.errors import DataError

    store = FixtureStore(tmp_path)
    store.put("http://x.test/a", b"v1")
    index = tmp_path / "index.json"
    index.write_text(index.read_text().replace('"version": 1', '"version": 9'))
    with pytest.raises(DataError, match="version"):
        store.get("http://x.test/a")
