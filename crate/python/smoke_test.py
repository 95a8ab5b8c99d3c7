"""Smoke test for the Python bindings.

Build the extension first, for example with `pip install ./crates/python`
(maturin) or by copying the cdylib built with
`cargo build --release -p grassmann-schur-py --features extension-module`
to `grassmann_schur.so` on the Python path.
"""

import json
import math
import pathlib

import grassmann_schur as gs

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "crates" / "cli" / "tests" / "golden"


def read(name):
    return (GOLDEN / name).read_text()


def main():
    ctx = gs.Context(generators=4)
    one = ctx.scalar(1.0)
    i1 = ctx.generator(1)
    z = one + i1
    assert z.invert() == one - i1
    assert (z * z.invert()) == one
    assert (i1 * i1).norm1() == 0.0
    assert z.body == 1 + 0j

    w = ctx.scalar(2.0 + 0j) + ctx.generator(2)
    root = w.kth_root(2)
    assert ((root * root) - w).norm1() < 1e-12

    try:
        i1.invert()
    except gs.GrassmannError as e:
        assert str(e).startswith("BodyZero")
    else:
        raise AssertionError("nilpotent element inverted")

    spec = json.loads(gs.toeplitz_extend(ctx, read("spec.json"), read("eta.json")))
    golden = json.loads(read("toeplitz_extend.out.json"))["spec"]
    assert len(spec["r"]) == len(golden["r"])

    rhos, how = gs.schur_coefficients(ctx, read("series.json"), 5)
    assert how == "max_steps" and len(rhos) == 5
    assert abs(rhos[1].body - 0.3 / 0.84) < 1e-12

    solution = json.loads(gs.np_solve(ctx, read("np_data.json")))
    assert solution["degree"] == 32 and solution["truncated"]

    a, c, p = (ctx.parse(read(n)) for n in ("a.json", "c.json", "p.json"))
    assert gs.blaschke_eval(a, c, p, a).norm1() < 1e-12
    zero = ctx.scalar(0.0)
    value = gs.blaschke_eval(zero, one, one, ctx.scalar(0.5))
    assert math.isclose(value.body.real, 0.5)

    print("python smoke test passed")


if __name__ == "__main__":
    main()
