"""Document parsing/printing round trips and command-line behavior."""

import json
from fractions import Fraction

import pytest

from l1geo import (
    BoxUnion,
    CellSet,
    L1Ball,
    ParseError,
    RatBox,
    from_object,
    parse_set,
    print_set,
    to_object,
)
from l1geo.cli import main

F = Fraction


CELLSET_DOC = """
{
  "kind": "cellset",
  "dimension": 2,
  "resolution": "1/2",
  "cells": [[0, 0], [1, 0], [0, 1]]
}
"""

BOXUNION_DOC = """
{
  "kind": "boxunion",
  "dimension": 2,
  "boxes": [
    {"min": ["0", "0"], "max": ["3/2", "1"]},
    {"min": ["1", "0"], "max": ["2", "2"]}
  ]
}
"""

BALL_DOC = """
{
  "kind": "shape",
  "dimension": 2,
  "shape": {
    "type": "ball",
    "center": ["1/2", "0"],
    "radius": "5/4"
  }
}
"""


class TestParsing:
    def test_cellset(self):
        doc = parse_set(CELLSET_DOC)
        assert doc.kind == "cellset"
        assert doc.dimension == 2
        assert doc.resolution == F(1, 2)
        assert set(doc.cells) == {(0, 0), (1, 0), (0, 1)}

    def test_boxunion(self):
        doc = parse_set(BOXUNION_DOC)
        assert doc.kind == "boxunion"
        assert len(doc.boxes) == 2
        assert doc.boxes[0] == ((F(0), F(0)), (F(3, 2), F(1)))

    def test_ball(self):
        doc = parse_set(BALL_DOC)
        assert doc.kind == "shape"
        assert doc.center == (F(1, 2), F(0))
        assert doc.radius == F(5, 4)

    def test_round_trips(self):
        for text in (CELLSET_DOC, BOXUNION_DOC, BALL_DOC):
            doc = parse_set(text)
            assert parse_set(print_set(doc)) == doc

    def test_object_round_trips(self):
        for text in (CELLSET_DOC, BOXUNION_DOC, BALL_DOC):
            doc = parse_set(text)
            assert from_object(to_object(doc)) == parse_set(print_set(doc))

    def test_to_object_types(self):
        assert isinstance(to_object(parse_set(CELLSET_DOC)), CellSet)
        assert isinstance(to_object(parse_set(BOXUNION_DOC)), BoxUnion)
        assert isinstance(to_object(parse_set(BALL_DOC)), L1Ball)

    def test_integer_resolution(self):
        doc = parse_set(
            '{"kind": "cellset", "dimension": 1, "resolution": "1", "cells": [[0]]}'
        )
        assert to_object(doc).resolution == 1


class TestParseErrors:
    def bad(self, text, fragment):
        with pytest.raises(ParseError) as err:
            parse_set(text)
        assert fragment in str(err.value)

    def test_invalid_json(self):
        self.bad("{not json", "line 1")

    def test_unknown_kind(self):
        self.bad('{"kind": "polygon", "dimension": 2}', "kind")

    def test_missing_field(self):
        self.bad('{"kind": "cellset", "dimension": 2, "resolution": "1"}', "cells")

    def test_unknown_field(self):
        self.bad(
            '{"kind": "cellset", "dimension": 1, "resolution": "1", '
            '"cells": [[0]], "color": "red"}',
            "color",
        )

    def test_duplicate_cell(self):
        self.bad(
            '{"kind": "cellset", "dimension": 1, "resolution": "1", "cells": [[0], [0]]}',
            "duplicate",
        )

    def test_dimension_mismatch(self):
        self.bad(
            '{"kind": "cellset", "dimension": 2, "resolution": "1", "cells": [[0]]}',
            "2 integers",
        )

    def test_zero_denominator(self):
        self.bad(
            '{"kind": "cellset", "dimension": 1, "resolution": "1/0", "cells": [[0]]}',
            "1/0",
        )

    def test_float_rejected(self):
        self.bad(
            '{"kind": "cellset", "dimension": 1, "resolution": 0.5, "cells": [[0]]}',
            "rational",
        )

    def test_min_above_max(self):
        self.bad(
            '{"kind": "boxunion", "dimension": 1, "boxes": [{"min": ["2"], "max": ["1"]}]}',
            "min",
        )

    def test_bad_radius(self):
        self.bad(
            '{"kind": "shape", "dimension": 1, '
            '"shape": {"type": "ball", "center": ["0"], "radius": "0"}}',
            "radius",
        )


@pytest.fixture
def tromino_file(tmp_path):
    path = tmp_path / "tromino.json"
    path.write_text(
        json.dumps(
            {
                "kind": "cellset",
                "dimension": 2,
                "resolution": "1",
                "cells": [[0, 0], [1, 0], [0, 1]],
            }
        )
    )
    return str(path)


@pytest.fixture
def gap_file(tmp_path):
    path = tmp_path / "gap.json"
    path.write_text(
        json.dumps(
            {
                "kind": "cellset",
                "dimension": 2,
                "resolution": "1",
                "cells": [[0, 0], [2, 0]],
            }
        )
    )
    return str(path)


class TestCli:
    def test_check_convex_pass(self, tromino_file, capsys):
        assert main(["check-convex", tromino_file]) == 0
        assert "convex" in capsys.readouterr().out

    def test_check_convex_fail_with_witness(self, gap_file, capsys):
        assert main(["check-convex", gap_file]) == 1
        out = capsys.readouterr().out
        assert "[0, 0]" in out and "[2, 0]" in out

    def test_check_convex_json(self, gap_file, capsys):
        assert main(["check-convex", "--json", gap_file]) == 1
        payload = json.loads(capsys.readouterr().out)
        assert payload["convex"] is False
        assert payload["witness"] == [[0, 0], [2, 0]]

    def test_volumes(self, tromino_file, capsys):
        assert main(["volumes", tromino_file]) == 0
        out = capsys.readouterr().out
        assert "1" in out and "4" in out and "3" in out

    def test_volumes_json(self, tromino_file, capsys):
        assert main(["volumes", "--json", tromino_file]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["intrinsic_volumes"] == ["1", "4", "3"]

    def test_volumes_ball_closed_form(self, tmp_path, capsys):
        path = tmp_path / "ball.json"
        path.write_text(BALL_DOC)
        assert main(["volumes", str(path)]) == 0

    def test_pixellate_then_volumes(self, tmp_path, capsys):
        shape = tmp_path / "ball.json"
        shape.write_text(
            json.dumps(
                {
                    "kind": "shape",
                    "dimension": 2,
                    "shape": {"type": "ball", "center": ["0", "0"], "radius": "1"},
                }
            )
        )
        assert main(["pixellate", str(shape), "--resolution", "1"]) == 0
        doc = parse_set(capsys.readouterr().out)
        assert doc.kind == "cellset"
        assert len(doc.cells) == 12
        pix = tmp_path / "pix.json"
        pix.write_text(print_set(doc))
        assert main(["volumes", "--json", str(pix)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["intrinsic_volumes"] == ["1", "8", "12"]

    def test_convexify(self, gap_file, capsys):
        assert main(["convexify", gap_file]) == 0
        doc = parse_set(capsys.readouterr().out)
        assert (1, 0) in set(doc.cells)

    def test_steiner(self, tromino_file, capsys):
        assert main(["steiner", tromino_file, "--max-dilation", "2"]) == 0
        assert "pass" in capsys.readouterr().out.lower()

    def test_crofton(self, tromino_file, capsys):
        assert main(["crofton", tromino_file]) == 0
        capsys.readouterr()
        assert main(["crofton", tromino_file, "--k", "1", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["records"]

    def test_kubota(self, tromino_file, capsys):
        assert main(["kubota", tromino_file, "--k", "1"]) == 0

    def test_kubota_bad_k(self, tromino_file, capsys):
        assert main(["kubota", tromino_file, "--k", "9"]) == 2

    def test_kinematic_exact(self, tromino_file, capsys):
        assert main(["kinematic", tromino_file]) == 0
        out = capsys.readouterr().out
        assert "8" in out

    def test_kinematic_box_flags(self, tromino_file, capsys):
        assert (
            main(
                [
                    "kinematic",
                    tromino_file,
                    "--box-min",
                    "0,0",
                    "--box-max",
                    "3/2,1",
                ]
            )
            == 0
        )

    def test_kinematic_mc(self, tromino_file, capsys):
        assert (
            main(
                [
                    "kinematic",
                    tromino_file,
                    "--degree",
                    "1",
                    "--samples",
                    "2000",
                    "--seed",
                    "3",
                    "--json",
                ]
            )
            == 0
        )
        payload = json.loads(capsys.readouterr().out)
        rec = payload["records"][0]
        assert rec["kind"] == "mc"
        assert rec["passed"] is True

    def test_product(self, tromino_file, tmp_path, capsys):
        other = tmp_path / "interval.json"
        other.write_text(
            json.dumps(
                {
                    "kind": "cellset",
                    "dimension": 1,
                    "resolution": "1",
                    "cells": [[0], [1]],
                }
            )
        )
        assert main(["product", tromino_file, str(other)]) == 0

    def test_gen_pipes_into_check(self, tmp_path, capsys):
        assert main(["gen", "--bound", "4", "--density", "0.4", "--seed", "11"]) == 0
        doc_text = capsys.readouterr().out
        gen = tmp_path / "gen.json"
        gen.write_text(doc_text)
        assert main(["check-convex", str(gen)]) == 0

    def test_gen_deterministic(self, capsys):
        assert main(["gen", "--seed", "4", "--mode", "staircase"]) == 0
        first = capsys.readouterr().out
        assert main(["gen", "--seed", "4", "--mode", "staircase"]) == 0
        assert capsys.readouterr().out == first

    def test_verify_small(self, capsys):
        assert main(["verify", "steiner", "--instances", "2", "--dimension", "2"]) == 0
        assert "pass" in capsys.readouterr().out.lower()

    def test_verify_json_deterministic(self, capsys):
        args = [
            "verify",
            "valuation",
            "--instances",
            "2",
            "--dimension",
            "2",
            "--json",
        ]
        assert main(args) == 0
        a = json.loads(capsys.readouterr().out)
        assert main(args) == 0
        b = json.loads(capsys.readouterr().out)
        a.pop("runtime_seconds")
        b.pop("runtime_seconds")
        assert a == b
        assert a["records"]

    def test_malformed_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert main(["check-convex", str(bad)]) == 2
        assert "line" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["volumes", "/nonexistent/path.json"]) == 2

    def test_wrong_kind_for_command(self, tmp_path, capsys):
        shape = tmp_path / "shape.json"
        shape.write_text(BALL_DOC)
        assert main(["check-convex", str(shape)]) == 2

    def test_bad_usage(self):
        with pytest.raises(SystemExit) as err:
            main(["no-such-command"])
        assert err.value.code == 2

    def test_stdin_dash(self, tromino_file, capsys, monkeypatch):
        import io

        text = open(tromino_file).read()
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
        assert main(["volumes", "-"]) == 0
