import json

import pytest

from exceptions import DictionaryFormatError
from inverse import build_dictionary
from storage_manager import StorageManager


@pytest.fixture
def storage():
    return StorageManager()


def test_missing_dictionary_loads_as_none(storage, tmp_path):
    assert storage.load_dictionary(tmp_path / "absent.json") is None


def test_dictionary_save_and_load(storage, tmp_path):
    dictionary = build_dictionary(5)
    target = storage.save_dictionary(dictionary, tmp_path / "cache" / "dictionary.json")
    assert target.exists()
    assert not target.with_suffix(".json.tmp").exists()
    loaded = storage.load_dictionary(target)
    assert loaded.max_p == 5
    assert loaded.entries == dictionary.entries


def test_unreadable_dictionary_raises(storage, tmp_path):
    target = tmp_path / "dictionary.json"
    target.write_text("{not json")
    with pytest.raises(DictionaryFormatError):
        storage.load_dictionary(target)


def test_get_or_build_reuses_a_covering_cache(storage, tmp_path, mocker):
    target = tmp_path / "dictionary.json"
    storage.save_dictionary(build_dictionary(6), target)
    build = mocker.patch("storage_manager.build_dictionary")
    dictionary = storage.get_or_build_dictionary(5, target)
    assert dictionary.max_p == 6
    build.assert_not_called()


def test_get_or_build_rebuilds_a_short_cache(storage, tmp_path):
    target = tmp_path / "dictionary.json"
    storage.save_dictionary(build_dictionary(4), target)
    dictionary = storage.get_or_build_dictionary(6, target)
    assert dictionary.max_p == 6
    assert storage.load_dictionary(target).max_p == 6


def test_get_or_build_ignores_a_corrupt_cache(storage, tmp_path):
    target = tmp_path / "dictionary.json"
    target.write_text(json.dumps({"schema_version": 1, "max_p": 4, "entries": [{"p": 3}]}))
    dictionary = storage.get_or_build_dictionary(4, target)
    assert dictionary.tree_count == 3
    assert storage.load_dictionary(target).tree_count == 3


def test_get_or_build_survives_unwritable_cache(storage, tmp_path, mocker):
    mocker.patch.object(storage, "save_dictionary", side_effect=OSError("read-only"))
    dictionary = storage.get_or_build_dictionary(4, tmp_path / "dictionary.json")
    assert dictionary.max_p == 4


def test_published_catalog_fixture(storage):
    entries = storage.load_published_catalog()
    assert len(entries) == 91
    flagged = [(e.p, e.p_pen, e.index) for e in entries if e.flagged]
    assert flagged == [(8, 4, 6), (8, 4, 8), (9, 4, 5), (9, 4, 7), (9, 4, 9), (9, 4, 11), (9, 5, 14), (9, 7, 2)]
    assert all(e.reading for e in entries if e.flagged)


def test_published_catalog_errors(storage, tmp_path):
    with pytest.raises(DictionaryFormatError):
        storage.load_published_catalog(tmp_path / "absent.json")

    wrong_version = tmp_path / "v2.json"
    wrong_version.write_text(json.dumps({"schema_version": 2, "entries": []}))
    with pytest.raises(DictionaryFormatError):
        storage.load_published_catalog(wrong_version)

    unread = tmp_path / "flagged.json"
    unread.write_text(json.dumps({"schema_version": 1, "entries": [
        {"p": 9, "p_pen": 7, "index": 2, "printed": "18^2-1", "flagged": True}
    ]}))
    with pytest.raises(DictionaryFormatError):
        storage.load_published_catalog(unread)
