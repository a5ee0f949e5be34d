import pytest

from priorlex.errors import DataError
from priorlex.gold_lexica import (
    align_to_swn,
    default_lemma_candidates,
    filter_all_zero,
    load_gold,
)
from priorlex.swn_store import parse_swn_file


@pytest.fixture
def align_store(tmp_path):
    text = (
        "v\t00000001\t0.125\t0\tyellow#1\tg\n"
        "n\t00000002\t0.25\t0\tyellow#1 writer#1\tg\n"
        "a\t00000003\t0.375\t0\tyellow#1\tg\n"
        "n\t00000004\t0\t0\tstone#1\tg\n"
        "v\t00000005\t0\t0.5\tstop#1\tg\n"
        "n\t00000006\t0.625\t0\twin#1\tg\n"
        "a\t00000007\t0.5\t0.125\tgood#1\tg\n"
        "r\t00000008\t0.5\t0\tgood#1\tg\n"
    )
    path = tmp_path / "swn.txt"
    path.write_text(text)
    return parse_swn_file(path)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_load_anew_rescales_to_unit_range(tmp_path):
    path = write(tmp_path, "anew.csv", "word,valence\nwin, 8.38\ncalm, 5.0\nstop, 2.0\n")
    raw = load_gold(path, "anew")
    assert raw.kind == "continuous"
    scores = {w: s for w, s, _ in raw.records}
    assert scores["win"] == pytest.approx(0.845)
    assert scores["calm"] == 0.0
    assert scores["stop"] == pytest.approx(-0.75)


def test_load_warr_same_shape_as_anew(tmp_path):
    path = write(tmp_path, "warr.csv", "Word,V.Mean.Sum\nhappy,8.0\n")
    raw = load_gold(path, "warr")
    assert raw.provenance == "warr"
    assert raw.records == [("happy", 0.75, None)]


def test_load_gi_labels_and_tags(tmp_path):
    path = write(
        tmp_path,
        "gi.csv",
        "WIN,noun,Positiv\nSTOP,verb,Negativ\nGOOD,modif,Positiv\nABOUND#1,,Positiv\n",
    )
    raw = load_gold(path, "gi")
    assert raw.kind == "binary"
    assert ("win", 1.0, ("n",)) in raw.records
    assert ("stop", -1.0, ("v",)) in raw.records
    assert ("good", 1.0, ("a", "r")) in raw.records
    assert raw.discarded_sense_tagged == 1
    assert all(w != "abound" for w, _, _ in raw.records)


def test_load_generic_tsv_with_optional_pos(tmp_path):
    path = write(tmp_path, "gold.tsv", "win#n\t0.9\nstone\t-0.5\n")
    raw = load_gold(path, "generic_tsv")
    assert raw.kind == "continuous"
    assert ("win", 0.9, ("n",)) in raw.records
    assert ("stone", -0.5, None) in raw.records


def test_load_generic_tsv_detects_binary(tmp_path):
    path = write(tmp_path, "gold.tsv", "win#n\t1\nstone\t-1\n")
    assert load_gold(path, "generic_tsv").kind == "binary"
    assert load_gold(path, "generic_tsv", kind="continuous").kind == "continuous"


def test_unknown_format_is_fatal(tmp_path):
    path = write(tmp_path, "x.csv", "a,1\n")
    with pytest.raises(DataError):
        load_gold(path, "nonsense")


def test_missing_columns_fatal(tmp_path):
    path = write(tmp_path, "anew.csv", "word\nwin\n")
    with pytest.raises(DataError):
        load_gold(path, "anew")


def test_valence_outside_scale_fatal(tmp_path):
    path = write(tmp_path, "anew.csv", "word,valence\nwin,12.0\n")
    with pytest.raises(DataError):
        load_gold(path, "anew")


def test_align_expands_untagged_word_to_all_swn_pos(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nyellow,7.0\n")
    gold, report = align_to_swn(load_gold(path, "anew"), align_store)
    assert set(gold.entries) == {"yellow#v", "yellow#n", "yellow#a"}
    assert set(gold.entries.values()) == {0.5}
    assert report.aligned_direct == 1


def test_align_single_pos_word(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nwriter,6.0\n")
    gold, _ = align_to_swn(load_gold(path, "anew"), align_store)
    assert set(gold.entries) == {"writer#n"}


def test_align_lemmatizes_inflected_forms(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nwriters,6.0\nstopped,2.0\n")
    gold, report = align_to_swn(load_gold(path, "anew"), align_store)
    assert "writer#n" in gold.entries
    assert "stop#v" in gold.entries
    assert report.aligned_lemmatized == 2


def test_align_drops_unknown_words_and_counts(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nquokka,7.0\nwriter,6.0\n")
    gold, report = align_to_swn(load_gold(path, "anew"), align_store)
    assert "writer#n" in gold.entries
    assert report.dropped == 1
    assert report.input_words == 2


def test_align_respects_declared_tags(tmp_path, align_store):
    path = write(tmp_path, "gi.csv", "GOOD,modif,Positiv\nWIN,noun,Positiv\n")
    gold, _ = align_to_swn(load_gold(path, "gi"), align_store)
    assert set(gold.entries) == {"good#a", "good#r", "win#n"}
    assert gold.entries["good#a"] == 1.0


def test_align_merges_duplicates_with_mean(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nwriter,6.0\nwriter,8.0\n")
    gold, report = align_to_swn(load_gold(path, "anew"), align_store)
    assert gold.entries["writer#n"] == pytest.approx(0.5)
    assert report.duplicates_merged == 1


def test_align_is_idempotent(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nyellow,7.0\nwriters,6.0\n")
    gold, _ = align_to_swn(load_gold(path, "anew"), align_store)
    realigned, report = align_to_swn(gold.to_raw(), align_store)
    assert realigned.entries == gold.entries
    assert report.dropped == 0


def test_align_counts_balance(tmp_path, align_store):
    path = write(
        tmp_path, "anew.csv", "word,valence\nyellow,7.0\nquokka,3.0\nwriter,6.0\n"
    )
    gold, report = align_to_swn(load_gold(path, "anew"), align_store)
    assert report.aligned_direct + report.aligned_lemmatized + report.dropped == report.input_words
    assert all(key.rsplit("#", 1)[0] in {"yellow", "writer"} for key in gold.entries)


def test_aligned_keys_exist_in_store(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nyellow,7.0\ngood,8.0\nstones,4.0\n")
    gold, _ = align_to_swn(load_gold(path, "anew"), align_store)
    for key in gold.entries:
        lemma, pos = key.rsplit("#", 1)
        assert align_store.profile(key) is not None


def test_filter_all_zero(tmp_path, align_store):
    path = write(tmp_path, "anew.csv", "word,valence\nstones,4.0\nwriter,6.0\n")
    gold, _ = align_to_swn(load_gold(path, "anew"), align_store)
    assert "stone#n" in gold.entries
    filtered, removed = filter_all_zero(gold, align_store)
    assert removed == 1
    assert "stone#n" not in filtered.entries
    assert "writer#n" in filtered.entries


def test_filter_all_zero_missing_key_fatal(align_store, tmp_path):
    path = write(tmp_path, "gold.tsv", "writer#n\t0.5\n")
    gold, _ = align_to_swn(load_gold(path, "generic_tsv"), align_store)
    gold.entries["ghost#n"] = 0.1
    with pytest.raises(DataError):
        filter_all_zero(gold, align_store)


def test_binary_duplicate_conflict_dropped(tmp_path, align_store):
    path = write(tmp_path, "gi.csv", "WIN,noun,Positiv\nWIN,noun,Negativ\n")
    gold, report = align_to_swn(load_gold(path, "gi"), align_store)
    assert "win#n" not in gold.entries
    assert report.duplicates_merged == 1


def test_default_lemma_candidates():
    assert "carry" in default_lemma_candidates("carries")
    assert "stop" in default_lemma_candidates("stopped")
    assert "run" in default_lemma_candidates("running")
    assert "love" in default_lemma_candidates("loved")
    assert "box" in default_lemma_candidates("boxes")
    assert "cat" in default_lemma_candidates("cats")
