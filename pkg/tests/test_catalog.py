"""Loading, cross-validation, and row-level verification of the catalog."""

import json
import random

import pytest

from lckverify.catalog import (
    builtin_catalog_text,
    load_builtin,
    load_catalog,
    mutate_omega_sign,
    verify_catalog,
    verify_entry,
    verify_equivalence,
)
from lckverify.errors import SchemaError
from lckverify.lck import lee_form, verify_lck


@pytest.fixture(scope="module")
def catalog():
    return load_builtin()


def test_counts(catalog):
    assert len(catalog.entries) >= 18
    assert sum(len(e.complex_structures) for e in catalog.entries) >= 25
    assert len(catalog.family_ids()) >= 30
    assert catalog.table_rows == catalog.family_ids()


def test_load_empty_catalog():
    cat = load_catalog('{"schema_version": 1, "entries": []}')
    assert cat.entries == []


def test_load_rejects_bad_schema_version():
    with pytest.raises(SchemaError):
        load_catalog('{"schema_version": 99, "entries": []}')


def test_load_rejects_witness_outside_region():
    doc = json.loads(builtin_catalog_text())
    entry = next(e for e in doc["entries"] if e["id"] == "rh3")
    entry["lck_families"][0]["witnesses"][0] = {"s": "-1"}  # violates s > 0
    with pytest.raises(SchemaError) as err:
        load_catalog(json.dumps(doc))
    assert "witnesses[0]" in str(err.value)


def test_load_rejects_unknown_j_reference():
    doc = json.loads(builtin_catalog_text())
    entry = next(e for e in doc["entries"] if e["id"] == "rh3")
    entry["lck_families"][0]["J"] = "nonsense"
    with pytest.raises(SchemaError):
        load_catalog(json.dumps(doc))


def test_load_rejects_manifest_mismatch():
    doc = json.loads(builtin_catalog_text())
    doc["table_rows"] = doc["table_rows"][:-1]
    with pytest.raises(SchemaError) as err:
        load_catalog(json.dumps(doc))
    assert "manifest" in str(err.value)


def test_verify_entry_rh3(catalog):
    records = verify_entry(catalog.get("rh3"))
    assert all(r.passed for r in records)
    ids = [r.id for r in records]
    assert "rh3/jacobi" in ids
    assert "rh3/center" in ids
    assert "rh3/J:J/complex" in ids
    assert any(i.startswith("rh3/lck:main/vaisman") for i in ids)


def test_verify_entry_d4p_delta_never_vaisman(catalog):
    records = verify_entry(catalog.get("d4p_delta"))
    assert all(r.passed for r in records)


def test_verify_entry_h4_obstructions(catalog):
    records = verify_entry(catalog.get("h4"))
    assert all(r.passed for r in records)
    assert any(r.id.startswith("h4/nolck:") for r in records)


def test_verify_equivalences(catalog):
    for eid in ("rh3", "rr3_1"):
        records = verify_equivalence(catalog.get(eid))
        assert records and all(r.passed for r in records)
        assert any(r.id.endswith("normal_form") for r in records)


def test_identity_chain_is_a_no_op(catalog):
    import copy

    entry = copy.deepcopy(catalog.get("rr3_1"))
    chain = entry.equivalences[0]
    chain.chain = [["1", "0", "0", "0", "0", "1", "0", "0",
                    "0", "0", "1", "0", "0", "0", "0", "1"]]
    chain.expected_theta = chain.start_theta
    chain.expected_omega = chain.start_omega
    records = verify_equivalence(entry)
    assert all(r.passed for r in records)


def test_full_catalog_passes(catalog):
    records = verify_catalog(catalog)
    failures = [r for r in records if not r.passed]
    assert not failures, failures


def test_parallel_matches_serial(catalog):
    serial = verify_catalog(catalog, entry_ids=["rh3", "u2", "gl2"], jobs=1)
    parallel = verify_catalog(catalog, entry_ids=["rh3", "u2", "gl2"], jobs=4)
    assert [(r.id, r.status) for r in serial] == [(r.id, r.status) for r in parallel]


def test_d_squared_zero_on_random_forms(catalog):
    """d^2 = 0 beyond the coframe, symbolically, for every catalog algebra."""
    from lckverify.exterior import KForm, basis_tuples

    rng = random.Random(21)
    for entry in catalog.entries:
        g = entry.algebra()
        F = g.field
        for degree in (1, 2):
            coeffs = {idx: F.scalar(rng.randint(-2, 2))
                      for idx in basis_tuples(4, degree)}
            form = KForm(F, 4, degree, coeffs)
            assert g.ce_d(g.ce_d(form)).is_zero(), entry.id


def test_ad_bracket_identity_all_entries(catalog):
    """ad_[x,y] = [ad_x, ad_y] on random vectors for every catalog algebra."""
    from lckverify import linalg

    rng = random.Random(23)
    for entry in catalog.entries:
        g = entry.algebra()
        F = g.field
        x = [F.scalar(rng.randint(-2, 2)) for _ in range(4)]
        y = [F.scalar(rng.randint(-2, 2)) for _ in range(4)]
        lhs = g.ad_matrix(g.bracket(x, y))
        rhs = linalg.mat_sub(linalg.mat_mul(g.ad_matrix(x), g.ad_matrix(y)),
                             linalg.mat_mul(g.ad_matrix(y), g.ad_matrix(x)))
        assert linalg.mat_eq(lhs, rhs), entry.id


def test_mutation_smoke(catalog):
    """Flipping any single sign in five randomly chosen stored forms must
    break at least one check."""
    rng = random.Random(20260810)
    rows = [(e, f) for e in catalog.entries for f in e.lck_families]
    for entry, fam in rng.sample(rows, 5):
        nterms = len(entry.family_structure(fam).omega.coeffs)
        mutated = mutate_omega_sign(entry, fam, rng.randrange(nterms))
        report = verify_lck(mutated)
        broke = not report.passed
        if not broke:
            theta, closed = lee_form(mutated.algebra, mutated.omega)
            broke = not (closed and (theta - mutated.theta).is_zero())
        assert broke, f"{entry.id}/{fam.name} survived a sign flip"
