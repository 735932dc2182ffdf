import gzip
import io
import tarfile

import pytest
import requests

from pathhom.config.settings import settings
from pathhom.data_sources import snap
from pathhom.errors import DatasetError

CONTACTS = b"1 2 10\n2 1 20\n"


class FakeResponse:
    def __init__(self, payload: bytes = b"", status: int = 200):
        self.payload = payload
        self.status_code = status

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False

    def raise_for_status(self):
        if self.status_code >= 400:
            raise requests.exceptions.HTTPError(f"HTTP {self.status_code}", response=self)

    def iter_content(self, chunk_size=1):
        for start in range(0, len(self.payload), chunk_size):
            yield self.payload[start:start + chunk_size]


@pytest.fixture
def toy_dataset(monkeypatch):
    monkeypatch.setitem(settings.DATASETS, "toy", {
        "url": "https://example.org/data/toy.txt.gz",
        "file": "toy.txt",
        "window": "day",
        "days": None,
    })
    monkeypatch.setattr(snap.time, "sleep", lambda seconds: None)
    return "toy"


def test_download_and_unpack_gzip(monkeypatch, tmp_path, toy_dataset):
    calls = []

    def fake_get(url, **kwargs):
        calls.append(url)
        return FakeResponse(gzip.compress(CONTACTS))

    monkeypatch.setattr(snap.requests, "get", fake_get)
    path = snap.download_dataset(toy_dataset, tmp_path)

    assert path == tmp_path / "toy.txt"
    assert path.read_bytes() == CONTACTS
    assert calls == ["https://example.org/data/toy.txt.gz"]

    # Present files are not fetched again.
    snap.download_dataset(toy_dataset, tmp_path)
    assert len(calls) == 1


def test_retries_on_timeout(monkeypatch, tmp_path, toy_dataset):
    attempts = []

    def flaky_get(url, **kwargs):
        attempts.append(url)
        if len(attempts) == 1:
            raise requests.exceptions.Timeout()
        return FakeResponse(gzip.compress(CONTACTS))

    monkeypatch.setattr(snap.requests, "get", flaky_get)
    assert snap.download_dataset(toy_dataset, tmp_path).read_bytes() == CONTACTS
    assert len(attempts) == 2


def test_retries_on_busy_server(monkeypatch, tmp_path, toy_dataset):
    statuses = [503, 200]
    monkeypatch.setattr(snap.requests, "get",
                        lambda url, **kwargs: FakeResponse(gzip.compress(CONTACTS), statuses.pop(0)))
    assert snap.download_dataset(toy_dataset, tmp_path).exists()


def test_not_found_is_a_dataset_error(monkeypatch, tmp_path, toy_dataset):
    monkeypatch.setattr(snap.requests, "get", lambda url, **kwargs: FakeResponse(status=404))
    with pytest.raises(DatasetError) as exc:
        snap.download_dataset(toy_dataset, tmp_path)
    assert exc.value.details["status"] == 404
    assert exc.value.exit_code == 2


def test_unpack_tarball(tmp_path):
    archive = tmp_path / "bundle.tar.bz2"
    with tarfile.open(archive, "w:bz2") as tar:
        info = tarfile.TarInfo("bundle/out.toy")
        info.size = len(CONTACTS)
        tar.addfile(info, io.BytesIO(CONTACTS))

    assert snap._unpack(archive, "out.toy", tmp_path).read_bytes() == CONTACTS
    with pytest.raises(DatasetError):
        snap._unpack(archive, "missing", tmp_path)


def test_unknown_dataset():
    with pytest.raises(DatasetError):
        snap.dataset_path("nope")


@pytest.mark.network
def test_email_dataset_downloads(tmp_path):
    path = snap.download_dataset("email", tmp_path)
    assert path.stat().st_size > 0
