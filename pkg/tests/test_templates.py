import numpy as np
import pytest

from sketchocr.exceptions import ConfigurationError, DimensionError, FormatError
from sketchocr.matcher import match_score
from sketchocr.raster import BinaryImage, save_pnm
from sketchocr.templates import SET_FILE, build_set, ingest, load_set, save_set


def _glyph(seed, size=10):
    rng = np.random.default_rng(seed)
    px = rng.random((size, size)) < 0.5
    px[0, 0] = True
    return BinaryImage(px)


@pytest.fixture
def manifest(tmp_path):
    lines = []
    for i, label in enumerate("CAB"):
        name = f"g{i}.pbm"
        (tmp_path / name).write_bytes(save_pnm(_glyph(i)))
        lines.append(f"{label}\t{name}")
    (tmp_path / "gray.pgm").write_bytes(b"P2\n2 2\n255\n0 255\n255 0\n")
    lines.append("Ж\tgray.pgm")
    path = tmp_path / "manifest.tsv"
    path.write_text("# comment\n" + "\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_ingest(manifest):
    tset = ingest(manifest, bias=0.5, canvas=(32, 32), margin=2, name="mine")
    assert tset.labels == ["A", "B", "C", "Ж"]
    assert tset.name == "mine" and tset.canvas == (32, 32) and tset.bias == 0.5
    for e in tset.entries:
        assert e.image.extent == (32, 32)
        assert e.sketch.n_black > 0
        assert match_score(e.sketch, e.centroid, e.image).accuracy == 100.0


def test_ingest_duplicate_label(tmp_path):
    (tmp_path / "a.pbm").write_bytes(save_pnm(_glyph(0)))
    (tmp_path / "m.tsv").write_text("A\ta.pbm\nA\ta.pbm\n")
    with pytest.raises(ConfigurationError, match="'A'"):
        ingest(tmp_path / "m.tsv")


def test_ingest_rejects_multichar_label(tmp_path):
    (tmp_path / "a.pbm").write_bytes(save_pnm(_glyph(0)))
    (tmp_path / "m.tsv").write_text("AB\ta.pbm\n")
    with pytest.raises(ConfigurationError):
        ingest(tmp_path / "m.tsv")


def test_ingest_blank_glyph_skipped(tmp_path):
    (tmp_path / "a.pbm").write_bytes(save_pnm(_glyph(0)))
    (tmp_path / "blank.pbm").write_bytes(save_pnm(BinaryImage.blank(5, 5)))
    (tmp_path / "m.tsv").write_text("A\ta.pbm\nZ\tblank.pbm\n")
    with pytest.warns(UserWarning, match="Z"):
        tset = ingest(tmp_path / "m.tsv")
    assert tset.labels == ["A"]


def test_ingest_missing_file(tmp_path):
    (tmp_path / "m.tsv").write_text("A\tnope.pbm\n")
    with pytest.raises(OSError):
        ingest(tmp_path / "m.tsv")


def test_save_load_round_trip(manifest, tmp_path):
    tset = ingest(manifest, canvas=(24, 20), margin=3)
    out = save_set(tset, tmp_path / "saved")
    again = load_set(out)
    assert again == tset
    assert (out / SET_FILE).read_text(encoding="utf-8").splitlines()[0] == \
        f"#SKETCHSET v1\t{tset.name}\t24\t20\t0.4\t3"


def test_empty_name_round_trip(tmp_path):
    tset = build_set("", {"x": _glyph(4)}, 0.3, (16, 16), 1)
    assert load_set(save_set(tset, tmp_path / "s")) == tset


def test_ingest_deterministic_bytes(manifest, tmp_path):
    a = save_set(ingest(manifest, name="n"), tmp_path / "a")
    b = save_set(ingest(manifest, name="n"), tmp_path / "b")
    files = sorted(p.name for p in a.iterdir())
    assert files == sorted(p.name for p in b.iterdir())
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_unwritable_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError):
        save_set(build_set("s", {"x": _glyph(1)}), blocker / "sub")


def test_load_unsupported_version(tmp_path):
    (tmp_path / SET_FILE).write_text("#SKETCHSET v2\tn\t64\t64\t0.4\t4\n")
    with pytest.raises(FormatError, match="unsupported version"):
        load_set(tmp_path)


def test_load_dimension_mismatch(tmp_path):
    tset = build_set("s", {"Q": _glyph(1)}, canvas=(16, 16), margin=1)
    save_set(tset, tmp_path)
    (tmp_path / "U+0051.pbm").write_bytes(save_pnm(_glyph(1, 12)))
    with pytest.raises(DimensionError, match="'Q'"):
        load_set(tmp_path)


def test_load_missing_image(tmp_path):
    save_set(build_set("s", {"Q": _glyph(1)}), tmp_path)
    (tmp_path / "U+0051.pbm").unlink()
    with pytest.raises(OSError):
        load_set(tmp_path)


def test_fixture_sets_shape(fixture_sets):
    for name, tset in fixture_sets.items():
        assert tset.name == name
        assert tset.labels == [chr(c) for c in range(ord("A"), ord("Z") + 1)]
        assert tset.canvas == (64, 64)
