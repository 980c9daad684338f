from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simkit.errors import FlagCountMismatch, SimIndexError, SimkitError, SimSyntaxError
from simkit.simio import parse_sim, write_sim
from simkit.tracing import FloorModel, add_line, compute_corners, finalize_space
from simkit.tracing.script import replay_script

DATA = Path(__file__).parent / "data"
GOLDEN = (DATA / "golden_s2.sim").read_bytes()


class TestGoldenRecord:
    def test_structure(self):
        m = parse_sim(GOLDEN)
        assert len(m.corners) == 27
        assert len(m.entrance_corners) == 2
        [sp] = m.spaces
        assert sp.id == "s2"
        assert int(sp.space_type) == 0
        assert sp.name == "217"
        assert sp.corners == [1, 3, 27, 19, 12]
        assert sp.wall_flags == [True, True, True, True, False]

    def test_wall_pairs(self):
        m = parse_sim(GOLDEN)
        [sp] = m.spaces
        n = len(sp.corners)
        pairs = [(sp.corners[i], sp.corners[(i + 1) % n]) for i in range(n)]
        present = [p for p, f in zip(pairs, sp.wall_flags) if f]
        absent = [p for p, f in zip(pairs, sp.wall_flags) if not f]
        assert present == [(1, 3), (3, 27), (27, 19), (19, 12)]
        assert absent == [(12, 1)]

    def test_entrance_on_third_wall(self):
        m = parse_sim(GOLDEN)
        [sp] = m.spaces
        [ent] = sp.entrances
        assert ent.id == "e2"
        assert ent.wall_index == 3
        assert ent.endpoints == (1, 2)
        # the third wall joins corners 27 and 19
        pair = (sp.corners[2], sp.corners[3])
        assert pair == (27, 19)

    def test_reserializes_byte_identically(self):
        assert write_sim(parse_sim(GOLDEN)) == GOLDEN


def traced_model():
    script = """
    add_line horizontal 100
    add_line horizontal 200
    add_line vertical 100
    add_line vertical 200
    add_line vertical 300
    compute_corners
    begin_space
    pick_corner 1
    pick_corner 2
    pick_corner 5
    pick_corner 4
    set_wall 1 on
    set_wall 2 on
    set_wall 3 on
    set_wall 4 on
    add_entrance 1 130 100 160 100
    finalize_space 217 room
    begin_space
    pick_corner 2
    pick_corner 3
    pick_corner 6
    pick_corner 5
    set_wall 1 on
    set_wall 2 on
    set_wall 4 on
    finalize_space 218 room
    """
    model, warnings = replay_script(script)
    assert not warnings
    return model


class TestRoundTrip:
    def test_bytes_fixed_point(self):
        b = write_sim(traced_model())
        assert write_sim(parse_sim(b)) == b

    def test_model_round_trip(self):
        m = traced_model()
        m2 = parse_sim(write_sim(m))
        assert [(c.id, c.x, c.y) for c in m2.corners] == [
            (c.id, c.x, c.y) for c in m.corners
        ]
        assert [(c.id, c.x, c.y) for c in m2.entrance_corners] == [
            (c.id, c.x, c.y) for c in m.entrance_corners
        ]
        assert m2.spaces == m.spaces

    def test_triangle_minimal_record(self):
        m = FloorModel(400, 400)
        add_line(m, "horizontal", offset=100)
        add_line(m, "vertical", offset=100)
        add_line(m, "oblique", anchor=(100, 300), angle_deg=135)
        compute_corners(m)
        assert len(m.corners) == 3
        finalize_space(m, [c.id for c in m.corners], [True] * 3, None, "tri", "room")
        b = write_sim(m)
        record = b.decode().splitlines()[-1]
        toks = record.strip("{}").split()
        assert toks[3] == "3"
        assert len(toks) == 4 + 3 + 3  # header + indices + flags, no quadruple

    def test_two_entrances_two_quadruples_ordered(self):
        script = """
        add_line horizontal 100
        add_line horizontal 200
        add_line vertical 100
        add_line vertical 200
        compute_corners
        begin_space
        pick_corner 1
        pick_corner 2
        pick_corner 3
        pick_corner 4
        set_wall 1 on
        set_wall 2 on
        set_wall 3 on
        set_wall 4 on
        add_entrance 1 110 100 120 100
        add_entrance 1 160 100 180 100
        finalize_space 217 room
        """
        m, _ = replay_script(script)
        record = write_sim(m).decode().splitlines()[-1]
        toks = record.strip("{}").split()
        quads = toks[4 + 4 + 4 :]
        assert quads == ["e1", "1", "1", "2", "e2", "1", "3", "4"]

    def test_empty_document(self):
        m = FloorModel(100, 100)
        b = write_sim(m)
        m2 = parse_sim(b)
        assert m2.corners == [] and m2.spaces == []
        assert write_sim(m2) == b


class TestParseErrors:
    def doc(self, spaces, n_corners=5, n_ecorners=2):
        lines = [
            "sim 1.0",
            f"element wall_corner {n_corners}",
            f"element entrance_corner {n_ecorners}",
            f"element space {len(spaces)}",
        ]
        coords = [(100, 100), (300, 100), (300, 300), (180, 300), (100, 260)]
        for i in range(n_corners):
            x, y = coords[i % 5]
            lines.append(f"{x + (i // 5):.3f} {y:.3f}")
        for i in range(n_ecorners):
            lines.append(f"{200 + i * 10:.3f} {300:.3f}")
        lines.extend(spaces)
        return ("\n".join(lines) + "\n").encode()

    def test_flag_count_mismatch(self):
        doc = self.doc(["{s1 0 a 5 1 2 3 4 5 1 1 1 1}"])
        with pytest.raises(FlagCountMismatch):
            parse_sim(doc)

    def test_bad_corner_index(self):
        doc = self.doc(["{s1 0 a 4 1 2 3 9 1 1 1 1}"])
        with pytest.raises(SimIndexError):
            parse_sim(doc)

    def test_bad_entrance_index(self):
        doc = self.doc(["{s1 0 a 5 1 2 3 4 5 1 1 1 1 1 e1 3 1 9}"])
        with pytest.raises(SimIndexError):
            parse_sim(doc)

    def test_missing_magic(self):
        with pytest.raises(SimSyntaxError):
            parse_sim(b"ply 1.0\n")

    def test_truncated(self):
        with pytest.raises(SimSyntaxError):
            parse_sim(GOLDEN[: len(GOLDEN) // 2])

    @settings(max_examples=200, deadline=None)
    @given(st.binary(max_size=400))
    def test_fuzz_never_crashes(self, data):
        try:
            parse_sim(data)
        except SimkitError:
            pass

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=300))
    def test_fuzz_text_never_crashes(self, text):
        try:
            parse_sim(("sim 1.0\n" + text).encode())
        except SimkitError:
            pass
