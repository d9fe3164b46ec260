import pytest

import histforce as hf


def test_generate_encode_decode_roundtrip():
    p = hf.generate(seed=3, width=3, height=2)
    assert p.height == 2
    assert p.width == 3
    text = p.encode()
    q = hf.decode(text)
    assert q.equals(p)
    assert q.encode() == text
    assert q.id == p.id
    assert len(p.id) == 16


def test_components_and_orders():
    p = hf.generate(seed=8, width=2, height=2)
    for alpha in range(p.height + 1):
        comps = hf.components(p, alpha)
        assert comps, "every level has components"
        for c in comps:
            assert c.height == alpha
            assert hf.leq(c, p)
    spine = hf.pr_component(p, 0)
    assert hf.leq_pr(spine, p)


def test_transform_stays_in_extension_class():
    q = hf.generate(seed=9, width=3, height=1)
    p = hf.components(q, 0)[1]
    r = hf.transform(p, q)
    assert hf.leq_pr(p, r)
    assert hf.leq(r, q) and hf.leq(q, r)


def test_closure_and_u_set():
    p = hf.generate(seed=12, width=2, height=3)
    z = hf.close(p, [2])
    assert hf.is_closed(p, z)
    assert 2 in z
    assert hf.u_set(p, sorted(range(p.height))) == list(p.support)


def test_width6_chain_table_and_majority():
    parts = [(hf.Condition.atomic(6, i), [i]) for i in range(6)]
    q = hf.Condition.amalgamate(0, hf.Term.var(0), [], parts)
    assert len(q.rows) == 48
    assert hf.maj_chain_length(q) == 2
    assert q.history(0, 0) == 7  # theta-plus-one encodes as width + 1
    assert q.history(3, 0) == 3
    assert q.fingerprint(3) == [0]


def test_run_suite_all_pass():
    p = hf.generate(seed=4, width=3, height=2)
    reports = hf.run_suite(p)
    assert len(reports) >= 8
    bad = [r for r in reports if r["verdict"] != "pass"]
    assert bad == []
    names = [r["name"] for r in reports]
    assert "clauses" in names
    assert len(set(names)) == len(names)


def test_errors_are_typed():
    with pytest.raises(hf.FormatError):
        hf.decode("{not json")
    with pytest.raises(hf.InvalidInput):
        hf.generate(seed=0, width=1)
    with pytest.raises(hf.Error):
        hf.Condition.atomic(1, 0)
