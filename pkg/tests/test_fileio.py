import csv
import io
import json
from pathlib import Path

import numpy as np
import pytest

from oamhilbert import ComplexField, ConfigError, Grid
from oamhilbert.exceptions import FieldMagicError, FieldTruncatedError, FieldVersionError
from oamhilbert.fileio import (
    csv_text,
    field_from_bytes,
    field_to_bytes,
    load_config,
    read_field,
    read_pgm,
    write_csv,
    write_field,
    write_intensity_pgm,
    write_json,
    write_phase_pgm,
)

from conftest import WAVELENGTH, random_field

GOLDEN = Path(__file__).parent / "data" / "golden_8x8.oamf"


def golden_field():
    j, i = np.mgrid[0:8, 0:8]
    return ComplexField(Grid(8, 8, 1e-4, 2e-4), (j * 8 + i) + 1j * (i - j) / 4, 1550e-9)


def test_round_trip_bitwise(tmp_path, rng):
    f = random_field(rng, Grid(64, 64, 1e-5, 1e-5))
    path = tmp_path / "f.oamf"
    write_field(f, path)
    g = read_field(path)
    assert g.grid == f.grid and g.wavelength == f.wavelength
    assert np.array_equal(g.samples.view(np.uint64), f.samples.view(np.uint64))
    assert path.stat().st_size == 40 + 64 * 64 * 16
    assert not list(tmp_path.glob(".*tmp"))


def test_golden_file_read_and_write(tmp_path):
    g = read_field(GOLDEN)
    ref = golden_field()
    assert g.grid == ref.grid and g.wavelength == ref.wavelength
    assert np.array_equal(g.samples, ref.samples)
    # row j holds y index j, x fastest
    assert g.samples[1, 0] == 8 - 0.25j
    assert field_to_bytes(ref) == GOLDEN.read_bytes()


def test_bad_magic():
    data = b"XXXX" + GOLDEN.read_bytes()[4:]
    with pytest.raises(FieldMagicError, match="magic"):
        field_from_bytes(data)


def test_truncated_payload(tmp_path):
    data = GOLDEN.read_bytes()
    path = tmp_path / "cut.oamf"
    path.write_bytes(data[:-100])
    with pytest.raises(FieldTruncatedError, match="expected 1024 bytes, got 924"):
        read_field(path)
    with pytest.raises(FieldTruncatedError):
        field_from_bytes(data[:20])
    with pytest.raises(FieldTruncatedError):
        field_from_bytes(data + b"\0")


def test_bad_version():
    data = bytearray(GOLDEN.read_bytes())
    data[4:8] = (2).to_bytes(4, "little")
    with pytest.raises(FieldVersionError, match="version 2"):
        field_from_bytes(bytes(data))


def test_pgm_images(tmp_path):
    f = golden_field()
    write_intensity_pgm(f, tmp_path / "i.pgm")
    write_phase_pgm(f, tmp_path / "p.pgm")
    data = (tmp_path / "i.pgm").read_bytes()
    assert data.startswith(b"P5\n8 8\n65535\n") and len(data) == 13 + 8 * 8 * 2
    img = read_pgm(tmp_path / "i.pgm")
    assert img.shape == (8, 8)
    # brightest sample is the last row of the field, which is the top image row
    assert img[0, 7] == 65535 and img.min() == 0
    phase = read_pgm(tmp_path / "p.pgm")
    assert phase[-1, 0] == 32768  # phase 0 maps to mid-grey


def test_csv_precision(tmp_path):
    rows = [(1, np.pi, -1e-7 / 3), (2, 1 / 3, 12345.6789012)]
    write_csv(tmp_path / "t.csv", ["k", "a", "b"], rows)
    parsed = list(csv.reader(io.StringIO((tmp_path / "t.csv").read_text())))
    assert parsed[0] == ["k", "a", "b"]
    for got, want in zip(parsed[1:], rows):
        assert int(got[0]) == want[0]
        for s, v in zip(got[1:], want[1:]):
            assert float(s) == pytest.approx(v, rel=5e-9)
            assert len(s.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 9
    assert csv_text(["x"], [(0.1,)]) == "x\n0.1\n"


def test_json_sorted(tmp_path):
    write_json(tmp_path / "r.json", {"b": 1, "a": [1.5]})
    assert json.loads((tmp_path / "r.json").read_text()) == {"a": [1.5], "b": 1}
    assert (tmp_path / "r.json").read_text().index('"a"') < (tmp_path / "r.json").read_text().index('"b"')


def test_config_validation(tmp_path):
    good = {"beam": {"wavelength": WAVELENGTH, "waist": 1e-3}, "modes": [{"l": 3}, {"l": 6, "re": 0.5}],
            "grating": {"M": [3, 6], "period": 1e-4}, "antenna": {"Ns": [6, 9], "sigma": None}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(good))
    assert load_config(path) == good
    for bad in ({"beam": {"waist": 1e-3, "colour": "red"}}, {"extra": 1}, {"grid": {"nx": 4}},
                {"beam": {"waist": -1}}):
        path.write_text(json.dumps(bad))
        with pytest.raises(ConfigError):
            load_config(path)
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(path)
