"""Smoke test for the `pfl` extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/pfl-*.whl
Then: python python/smoke_test.py   (or pytest python/)
"""

from fractions import Fraction

import pfl


def test_family_basics():
    f = pfl.Family(3, [[1], [2], [3]])
    assert len(f) == 3 and f.n == 3
    assert [2] in f and [1, 2] not in f
    assert not f.is_partition_free(3)
    assert f.partition_witness(3) == [[1], [2], [3]]
    assert not f.is_dependent(3)
    assert pfl.Family.parse(f.to_json()) == f
    assert pfl.Family.parse(f.to_text()) == f


def test_bad_input_raises():
    for bad in ([[4]], [[1, 2], [2, 1]]):
        try:
            pfl.Family(3, bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"accepted {bad}")


def test_up_set_is_extremal():
    up = pfl.Family.up_set(5, 2)
    assert len(up) == pfl.up_set_bound(3, 2) == 26
    assert up.is_partition_free(3)
    res = pfl.p_exact(5, 3, prove_unique=True)
    assert res["p"] == 26 and res["unique"] == "yes" and res["proven"]
    assert res["optimal_families"][0]["sets"] == up.sets()


def test_inequalities():
    two_layers = pfl.Family.layers(5, [2, 3])
    r = pfl.three_layer(two_layers, 2, 1)
    assert r["lhs"] == r["rhs"] == Fraction(2)
    f = pfl.Family.layers(7, [2, 3])
    r = pfl.cross_layer([f] * 4, 2, 1)
    assert r["lhs"] == r["rhs"] == 12
    up = pfl.Family.up_set(5, 2)
    assert pfl.cross_sum([up] * 3)["lhs"] == 78
    assert pfl.profile_inequality(up, [1, 2, 2])["satisfied"]
    assert pfl.tuple_audit(up, [1, 2, 2])["max_present"] <= 2
    try:
        pfl.three_layer(pfl.Family(5, [[1, 2], [3], [4, 5]]), 2, 1)
    except pfl.HypothesisError:
        pass
    else:
        raise AssertionError("hypothesis not checked")


def test_derivation_and_cyclic():
    d = pfl.derive(3, 2, alternative=True)
    assert d["implied_bound"] == 26
    assert d["alternative"]["exceeds_one"]
    assert pfl.ratio_identity(4, 3, 2)["exceeds"] is not None
    f = pfl.Family(5, [[1], [1, 2], [2, 3, 4]])
    cert = pfl.injection(f, 2, 1, order=[3, 1, 4, 5, 2])
    assert cert["valid"] and cert["hits"] <= cert["bound"]
    table = pfl.expectation(f, 3, 2, 1)
    assert all(row["equal"] for row in table["rows"])


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
    print("all smoke tests passed")
