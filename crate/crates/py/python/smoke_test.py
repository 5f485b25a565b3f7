"""Smoke test for the minorforge Python bindings.

Build and install with
    pip install --no-build-isolation -e crates/py
then run
    python crates/py/python/smoke_test.py
"""

import tempfile

import minorforge_py as mf


def main():
    d = mf.find_proxy("D")
    assert d.stanza() == "pf=D q=11 images=2=2 F=2,6,10", d.stanza()
    try:
        mf.verify_proxy("D", 7, [2])
    except ValueError as e:
        assert "(2, 2, 2)" in str(e), e
    else:
        raise AssertionError("GF(7) accepted as a dyadic proxy")

    f7 = mf.Matroid.named("F7")
    assert (f7.n, f7.rank, f7.basis_count()) == (7, 3, 28)
    assert f7.dual().dual() == f7
    assert f7.delete(0).is_isomorphic(mf.Matroid.named("M(K4)"))
    assert not f7.has_minor(mf.Matroid.uniform(2, 4))
    assert len(mf.Matroid.named("T8").delta_y_class()) == 1
    assert mf.Matroid.parse(f7.serialize()) == f7

    fano_minus = mf.LinearRep(3, [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1]])
    assert fano_minus.matroid().catalog_name() == "F7-"
    assert mf.confined_rep("dyadic", mf.Matroid.named("F7")) is None
    assert mf.confined_rep("dyadic", mf.Matroid.named("P8")) is not None

    with tempfile.TemporaryDirectory() as store:
        counts = mf.generate("2regular", 8, store)
        assert {n: sum(c.values()) for n, c in counts.items()} == {5: 2, 6: 1, 7: 4, 8: 25}, counts
        assert mf.counts("2regular", store) == counts
        assert len(mf.members("2regular", 8, store)) == 25
        found = mf.excluded_minors("dyadic", 8, store)
        assert [m.catalog_name() for m in found[8]] == ["T8"], found

    print("minorforge python smoke test passed")


if __name__ == "__main__":
    main()
