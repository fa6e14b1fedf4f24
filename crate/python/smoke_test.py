#!/usr/bin/env python3
"""Smoke test for the rgbtiling_py extension module.

Builds nothing itself: it looks for the compiled cdylib under target/
(release preferred), exposes it under the importable name, and runs a
handful of end-to-end checks. Build first with

    cargo build --release -p rgbtiling-py
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib():
    candidates = [
        ROOT / "target" / "release" / "librgbtiling_py.so",
        ROOT / "target" / "debug" / "librgbtiling_py.so",
        ROOT / "target" / "release" / "librgbtiling_py.dylib",
        ROOT / "target" / "debug" / "librgbtiling_py.dylib",
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("cdylib not found; run `cargo build --release -p rgbtiling-py` first")


def import_module():
    lib = locate_cdylib()
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="rgbtiling_py_"))
    suffix = ".so" if lib.suffix == ".so" else ".so"  # CPython loads .so on mac too
    shutil.copy2(lib, tmp / ("rgbtiling_py" + suffix))
    sys.path.insert(0, str(tmp))
    import rgbtiling_py

    return rgbtiling_py


def main():
    rt = import_module()

    k4 = rt.Graph.k4()
    assert k4.vertex_count == 4 and k4.edge_count == 6 and k4.face_count == 4
    assert k4.is_mpg() and k4.one_piece()
    assert k4.euler_degree_residual() == 0
    assert k4.count_4colorings() == 24

    # Exactly three R-tilings on K4, each extending to two RGB tilings.
    tilings = rt.r_tilings(k4)
    assert len(tilings) == 3 == rt.count_r_tilings(k4)
    for t in tilings:
        t.validate("r")
        assert t.find_red_odd_cycle() is None
        assert t.is_grand()
        assert t.count_rgb_extensions() == 2
        for ext in t.extend_to_rgb():
            ext.validate("rgb")
            assert ext.quadrangulation_residual("R") == 0

    # Generator class counts for small sizes.
    classes = rt.enumerate_mpgs(7)
    assert [len(classes[n]) for n in (4, 5, 6, 7)] == [1, 1, 2, 5]

    # Coloring dictionary round trip on the identity coloring of K4.
    t = rt.coloring_to_tiling(k4, [1, 2, 3, 4])
    t.validate("rgb")
    back = t.to_coloring(0)
    assert back[0] == 1 and len(back) == 4

    # The icosahedron has no nontrivial triangles.
    ico = rt.Graph.icosahedron()
    assert ico.nontrivial_triangles() == []

    # The (5,5) annulus is not One Piece and carries the classic
    # odd-cycle-free non-grand tiling, found by the hunt.
    ann = rt.Graph.annulus(5)
    assert not ann.one_piece()
    report = json.loads(rt.hunt_counterexample(5, 5))
    assert report["instances"], "hunt must find instances on (5,5) belts"
    witness = report["instances"][0]["witness"]
    assert witness["black_count"] % 2 == 1

    # Canal lines of a K4 tiling: one ring through all four triangles.
    lines = tilings[0].canal_lines("R")
    assert len(lines) == 1
    kind, triangles, crossings, deja_vu = lines[0]
    assert kind == "ring" and len(triangles) == 4 and len(deja_vu) == 2

    # JSON round trip through the generic reader.
    g = rt.Graph.from_json(k4.to_json())
    assert g.canonical_code() == k4.canonical_code()

    # A quick verification suite at a small bound.
    reports = json.loads(rt.verify_suite("one-piece", 6))
    assert all(r["failures"] == 0 for r in reports)

    print("smoke test passed")


if __name__ == "__main__":
    main()
