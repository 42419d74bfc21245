"""Catalog construction, validation, and determinism."""

import pytest

from ihcalc.catalog import (
    CatalogError,
    _BUILDERS,
    catalog_build,
    catalog_entries,
    catalog_entry,
    catalog_table,
)
from ihcalc.exactalg import INTEGERS, PrimeField, RATIONALS
from ihcalc.ihcore import Perversity, ih_homology, ordinary_homology
from ihcalc.simplicial import verify_pseudomanifold


# integral homology of each triangulated entry: (free ranks, torsion)
# all derived from the standard closed forms for these spaces
EXPECTED_HOMOLOGY = {
    "S0": ((2,), ((),)),
    "S1": ((1, 1), ((), ())),
    "S2": ((1, 0, 1), ((), (), ())),
    "T2": ((1, 2, 1), ((), (), ())),
    "RP2": ((1, 0, 0), ((), (2,), ())),
    "Klein": ((1, 1, 0), ((), (2,), ())),
    "genus2": ((1, 4, 1), ((), (), ())),
    "CP2": ((1, 0, 1, 0, 1), ((), (), (), (), ())),
    "CP2#CP2": ((1, 0, 2, 0, 1), ((), (), (), (), ())),
    "L2_1": ((1, 0, 0, 1), ((), (2,), (), ())),
    "L3_1": ((1, 0, 0, 1), ((), (3,), (), ())),
    "L5_1": ((1, 0, 0, 1), ((), (5,), (), ())),
    "J_L3": ((1, 1, 0, 1, 1), ((), (3,), (3,), (), ())),
}

ORIENTABLE = {
    "S0": True, "S1": True, "S2": True, "T2": True, "RP2": False,
    "Klein": False, "genus2": True, "CP2": True, "CP2#CP2": True,
    "L2_1": True, "L3_1": True, "L5_1": True, "J_L3": True,
}


@pytest.mark.parametrize("name", sorted(EXPECTED_HOMOLOGY))
def test_triangulated_homology(name):
    X = catalog_build(name)
    h = ordinary_homology(X.complex, INTEGERS)
    assert (h.free_ranks, h.torsion) == EXPECTED_HOMOLOGY[name]
    rep = verify_pseudomanifold(X)
    assert rep.is_pseudomanifold and rep.irreducible
    assert rep.orientable == ORIENTABLE[name]


class TestStratifiedEntries:
    def test_cone_rp2_skeleta(self):
        X = catalog_build("cone_RP2")
        assert X.n == 3
        assert len(X.skeleton(0)) == 1
        rep = verify_pseudomanifold(X)
        # a compact cone has boundary, so face regularity fails there
        assert rep.dimensional_homogeneity and rep.no_codim_one
        assert not rep.face_regularity

    def test_suspensions(self):
        for name, n, poles in (("S_RP2", 3, 2), ("SS_RP2", 4, 2), ("S_T2", 3, 2), ("SJ_L3", 5, 2)):
            X = catalog_build(name)
            assert X.n == n
            assert len(X.skeleton(0).vertices) == poles
            assert verify_pseudomanifold(X).is_pseudomanifold

    def test_sj_f_vector(self):
        # frozen from the build: suspension of the simplified J
        X = catalog_build("SJ_L3")
        f = X.complex.f_vector()
        assert f[0] == X.complex.f_vector()[0]
        assert len(f) == 6
        assert X.complex.euler_characteristic() == 2


class TestDeterminism:
    @pytest.mark.parametrize("name", ["RP2", "T2", "L3_1", "S_RP2"])
    def test_rebuild_identical(self, name):
        # builders are pure; two fresh runs give the same simplex sets
        a = _BUILDERS[name]()
        b = _BUILDERS[name]()
        assert a.complex == b.complex
        assert a.skeleta == b.skeleta

    def test_cache_returns_same_object(self):
        assert catalog_build("S2") is catalog_build("S2")


class TestManifest:
    def test_every_entry_resolvable(self):
        for e in catalog_entries():
            assert catalog_entry(e.name) == e
            if e.kind == "triangulated":
                X = catalog_build(e.name)
                assert X.n == e.dimension
            else:
                t = catalog_table(
                    e.name, Perversity.lower_middle(e.dimension), "Q"
                )
                assert t.n == e.dimension

    def test_unknown_names(self):
        with pytest.raises(CatalogError):
            catalog_build("nope")
        with pytest.raises(CatalogError):
            catalog_entry("nope")
        with pytest.raises(CatalogError):
            catalog_table("nope", Perversity.lower_middle(4), "Q")

    def test_formula_entry_not_buildable(self):
        with pytest.raises(CatalogError):
            catalog_build("X8_SY")


class TestLensSpaces:
    @pytest.mark.parametrize("p,name", [(2, "L2_1"), (3, "L3_1"), (5, "L5_1")])
    def test_fundamental_torsion(self, p, name):
        X = catalog_build(name)
        h = ordinary_homology(X.complex, INTEGERS)
        assert h.torsion_at(1) == (p,)

    def test_l3_middle_ih_matches_ordinary(self):
        # a manifold's intersection homology is its homology
        X = catalog_build("L3_1")
        m = Perversity.lower_middle(3)
        a = ih_homology(X, m, INTEGERS)
        b = ordinary_homology(X.complex, INTEGERS)
        assert a.as_dict()["degrees"] == b.as_dict()["degrees"]


class TestFormulaEntries:
    def test_uhat_default_euler_number(self):
        t = catalog_table("Uhat_S2", Perversity.lower_middle(4), "Z3")
        assert t.dims == (1, 0, 0, 0, 1)

    def test_x8_tables_have_dimension_eight(self):
        m8 = Perversity.lower_middle(8)
        for name in ("X8_SJ", "X8_SY"):
            assert catalog_table(name, m8, "Z3").n == 8
