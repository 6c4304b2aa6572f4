"""Smoke test for the python bindings: drives one Session end to end.

Run directly (``python3 tests/python/test_smoke.py``); a nonzero exit means
failure. The fixture is the two-base pair GG / CC whose ensemble has exactly
two structures: the empty one and the full two-arc hybrid.
"""

import math

from riafold import Session

R = ">seqA|sp1\nGG\n"
S = ">seqB|sp1\nCC\n"


def main():
    s = Session(R, S, format="fasta", zero_energy=True)
    assert s.n == 2 and s.m_len == 2
    assert s.z == 2.0
    assert math.isclose(s.free_energy, -0.6163 * math.log(2.0), rel_tol=1e-12)

    pm = s.pair_probabilities()
    ext = pm["ext"]
    assert abs(ext[1][1] - 0.5) < 1e-12
    assert abs(ext[2][2] - 0.5) < 1e-12
    assert ext[1][2] == 0.0 and ext[2][1] == 0.0
    assert all(v == 0.0 for row in pm["interior_r"] for v in row)
    assert all(v == 0.0 for row in pm["interior_s"] for v in row)

    hp = s.hybrid_probabilities()
    assert set(hp) == {(1, 2, 1, 2)}
    assert abs(hp[(1, 2, 1, 2)] - 0.5) < 1e-12

    draws = s.sample(20, seed=5)
    assert len(draws) == 20
    seen = set()
    for r_line, s_line in draws:
        assert (r_line, s_line) in {("..", ".."), ("[[", "]]")}
        seen.add((r_line, s_line))
    assert len(seen) == 2, "20 draws from a 50/50 ensemble hit both structures"
    assert s.sample(20, seed=5) == draws, "equal seeds give equal draws"

    value, stderr, exact = s.contact_region_probability("R", 1, 1)
    assert exact and stderr == 0.0 and abs(value - 0.5) < 1e-12
    value, _, exact = s.contact_region_probability("s", 1, 2)
    assert exact and abs(value - 0.5) < 1e-12

    blocked = Session(
        R, S, format="fasta", zero_energy=True,
        r_constraints="xx", s_constraints="xx",
    )
    assert blocked.z == 1.0 and blocked.free_energy == 0.0
    assert blocked.sample(3) == [("..", "..")] * 3

    # Default energy model: the hybrid is favorable, so z > 2.
    rich = Session(R, S, format="fasta")
    assert rich.z > 2.0

    try:
        Session(R, S, format="stockholm")
    except RuntimeError as e:
        assert "format" in str(e)
    else:
        raise AssertionError("bad format was accepted")

    try:
        s.contact_region_probability("Q", 1, 1)
    except RuntimeError as e:
        assert "strand" in str(e)
    else:
        raise AssertionError("bad strand was accepted")

    print("python smoke: ok")


if __name__ == "__main__":
    main()
