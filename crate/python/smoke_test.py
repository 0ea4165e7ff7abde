"""Smoke test for the `wtp` extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import json
import math

import wtp

BASES = [2, 3]
CARPET = [[0, 0], [1, 1], [0, 2]]


def close(x, y, tol):
    assert abs(x - y) < tol, (x, y)


def main():
    dim_h = wtp.hausdorff_dimension(BASES, CARPET)
    close(dim_h, math.log2(1 + 2 ** math.log(2, 3)), 1e-12)
    close(wtp.minkowski_dimension(BASES, CARPET), 1.3691, 1e-4)

    h = wtp.weighted_entropy(BASES, CARPET)
    close(h / math.log(2), dim_h, 1e-12)

    series = wtp.estimate(BASES, CARPET, 6, exponents=[0.5])
    assert [n for n, _ in series] == list(range(1, 7))
    assert all(rate >= wtp.weighted_entropy(BASES, CARPET, [0.5]) - 1e-12 for _, rate in series)

    config = json.dumps({"system": {"sponge": {"bases": BASES, "digits": CARPET}}})
    report = json.loads(wtp.run("check", config, n_max=4))
    assert all(c["passed"] for c in report["checks"]), report["checks"]

    try:
        wtp.hausdorff_dimension([3, 2], CARPET)
    except ValueError:
        pass
    else:
        raise AssertionError("unsorted bases accepted")

    print("smoke test passed: dim_H = %.10f" % dim_h)


if __name__ == "__main__":
    main()
