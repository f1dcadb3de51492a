"""Smoke test for the rapprox_py extension.

Build and install first:
    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
"""

import json

import rapprox_py as rp


def main():
    p = rp.ProjPoint([2, 4, 6])
    assert p.coords == [1, 2, 3] and p.height == 3
    cusp = rp.ProjPoint.parse("0:0:1")
    assert cusp.distance(rp.ProjPoint([5, 1, 125])) == (1, 25)

    assert len(rp.enumerate_p1(10)) == rp.counting_function(1, 10)
    assert len(rp.enumerate_p2(4)) == rp.counting_function(2, 4)
    assert rp.alpha_along("cusp", rp.ProjPoint([1, 0])) == "3/2"
    assert rp.alpha_along("line", rp.ProjPoint([1, 1]), 3) == "3"

    dp5 = rp.Preset("blowup_p2:4")
    assert len(dp5.nef_rays()) == 10
    assert dp5.is_dual_pair()
    assert dp5.intersect("L-E1-E2", "L-E1-E2") == "-1"
    alpha, winners = dp5.predict(
        [("line", "L-E1", 1), ("cusp", "3L-2E1-E2-E3-E4", 2)], "3L-E1-E2-E3-E4"
    )
    assert alpha == "2" and winners == ["cusp", "line"], (alpha, winners)

    case2 = rp.Preset("case2:3")
    assert case2.table(["F", "D1", "D2", "D3"]) == [
        [0, 1, 1, 1],
        [1, 3, 3, 3],
        [1, 3, 2, 3],
        [1, 3, 3, 2],
    ]

    report = json.loads(
        rp.run_scenario(json.dumps({"task": "alpha", "preset": "cusp", "max_height": 200}))
    )
    assert report["predicted_alpha"] == "3/2"
    assert abs(report["tail_median_gamma"] - 1.5) < 0.1

    suite = json.loads(rp.verify())
    assert suite["failed"] == 0, suite["failed"]

    try:
        rp.Preset("nosuch:1")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown preset accepted")

    print("rapprox_py smoke test passed: %d checks in the verify suite" % suite["total"])


if __name__ == "__main__":
    main()
