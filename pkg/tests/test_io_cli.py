import json

import pytest

from omstate.baer import BaerStarSemigroup, IeStarSemigroup, pc_as_oml
from omstate.cli import main
from omstate.config import RunConfig
from omstate.coordinatize import generate_s0
from omstate.errors import InvalidSpec, NotAnIeLattice
from omstate.ie import IeLattice
from omstate.io import algebra_from_json, algebra_to_json, dump_algebra, load_algebra
from omstate.oml import Oml
from omstate.states import enumerate_states


@pytest.fixture
def files(tmp_path, lat, ie_algebras):
    out = {}
    for key, A in {**lat, **{k.replace("/", "_"): v for k, v in ie_algebras.items()}}.items():
        p = tmp_path / f"{key}.json"
        dump_algebra(A, p)
        out[key] = str(p)
    p = tmp_path / "s0_mo2.json"
    dump_algebra(generate_s0(ie_algebras["MO2/σ"]).ie, p)
    out["S0_MO2"] = str(p)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# ------------------------------------------------------------------- files


def test_round_trip_all_kinds(lat, ie_algebras, star_algebras, tmp_path):
    for L in lat.values():
        back = algebra_from_json(algebra_to_json(L))
        assert isinstance(back, Oml) and (back.leq == L.leq).all() and back.names == L.names
    for L in ie_algebras.values():
        back = algebra_from_json(json.loads(dump_algebra(L)))
        assert isinstance(back, IeLattice) and (back.s == L.s).all()
    for S in star_algebras.values():
        p = tmp_path / "s.json"
        dump_algebra(S, p)
        back = load_algebra(p)
        assert isinstance(back, IeStarSemigroup)
        assert (back.base.mul == S.base.mul).all() and (back.s == S.s).all()
    back = algebra_from_json(algebra_to_json(star_algebras["S0(2/id)"].base))
    assert isinstance(back, BaerStarSemigroup)


def test_names_accepted_in_files():
    data = {"names": ["0", "p", "q", "1"], "covers": [["0", "p"], ["0", "q"], ["p", "1"], ["q", "1"]],
            "neg": ["1", "q", "p", "0"], "zero": "0", "one": "1", "s": ["0", "p", "q", "1"]}
    L = algebra_from_json(data)
    assert isinstance(L, IeLattice) and L.n == 4


def test_bad_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InvalidSpec):
        load_algebra(p)
    with pytest.raises(InvalidSpec):
        algebra_from_json({"names": ["0", "1"], "neg": [1, 0], "zero": 0, "one": 1})
    with pytest.raises(NotAnIeLattice):
        algebra_from_json({"names": ["0", "1"], "covers": [[0, 1]], "neg": [1, 0], "zero": 0, "one": 1,
                           "s": [1, 1]})


def test_run_config_env(monkeypatch):
    monkeypatch.setenv("OMSTATE_VAR_CAP", "4")
    monkeypatch.setenv("OMSTATE_FORMAT", "json")
    cfg = RunConfig.from_env(worker_count=2)
    assert cfg.var_cap == 4 and cfg.output_format == "json" and cfg.worker_count == 2
    assert RunConfig.from_env(var_cap=2).var_cap == 2
    monkeypatch.setenv("OMSTATE_ELEMENT_CAP", "lots")
    with pytest.raises(ValueError):
        RunConfig.from_env()
    with pytest.raises(ValueError):
        RunConfig(output_format="xml")


# --------------------------------------------------------------------- CLI


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "paper")
    assert code == 0
    assert "(b,c)" in out.replace(" ", "")
    assert "¬a" in out and "s(x′ ∨ (y′ ∧ x′′)) = s(x′) ∨ s(y′ ∧ x′′)" in out


def test_build_and_verify(capsys, files, tmp_path):
    code, out, _ = run(capsys, "build", files["MO2"], "--verify")
    assert code == 0
    assert run(capsys, "verify-oml", files["MO2x2"])[0] == 0
    # a non-orthomodular hexagon (benzene ring)
    hexagon = {"names": ["0", "a", "b", "¬b", "¬a", "1"],
               "covers": [[0, 1], [1, 3], [3, 5], [0, 2], [2, 4], [4, 5]],
               "neg": [5, 4, 3, 2, 1, 0], "zero": 0, "one": 5}
    p = tmp_path / "hex.json"
    p.write_text(json.dumps(hexagon))
    assert run(capsys, "verify-oml", p)[0] == 1
    assert run(capsys, "verify-baer", files["S0_MO2"])[0] == 0


def test_states_and_internalize(capsys, files, tmp_path):
    code, out, _ = run(capsys, "--format", "json", "states", files["MO2"], "--class", "state")
    assert code == 0
    data = json.loads(out)
    assert len(data["states"]) == 4
    emit = tmp_path / "ie.json"
    code, _, _ = run(capsys, "internalize", files["B4"], "0101", "--emit", emit)
    assert code == 0 and isinstance(load_algebra(emit), IeLattice)
    assert run(capsys, "internalize", files["B4"], "1111")[0] == 1
    assert run(capsys, "internalize", files["B4"], "01")[0] == 2


def test_check_variety(capsys, files):
    assert run(capsys, "check-variety", files["B4_σa"], "--tag", "ITE_B")[0] == 0
    assert run(capsys, "check-variety", files["MO2x2_example"], "--tag", "ITE_B")[0] == 1


def test_coordinatize_and_full_s(capsys, files, tmp_path):
    emit = tmp_path / "s0.json"
    code, out, _ = run(capsys, "coordinatize", files["MO2"], "--emit", emit)
    assert code == 0 and "18" in out
    assert load_algebra(emit).m == 18
    assert run(capsys, "coordinatize", files["MO2x2"], "--cap", "5")[0] == 3
    code, out, _ = run(capsys, "full-s", files["B4"])
    assert code == 0 and "16" in out
    assert run(capsys, "full-s", files["2^3"])[0] == 3


def test_extend(capsys, files, tmp_path):
    S = load_algebra(files["S0_MO2"])
    pc = pc_as_oml(S.base)
    bits = enumerate_states(pc.oml)[0].bits()
    emit = tmp_path / "ext.json"
    code, out, _ = run(capsys, "extend", files["S0_MO2"], "--state", bits, "--emit", emit)
    assert code == 0
    ext = out.split("extended: ")[1].strip()
    assert len(ext) == S.base.m
    assert "".join(ext[e] for e in pc.elements) == bits
    assert isinstance(load_algebra(emit), IeStarSemigroup)
    assert run(capsys, "extend", files["S0_MO2"], "--state", "1" * pc.oml.n)[0] == 1


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "x & y = y & x")
    assert code == 0
    assert "(x1'' . x2')' . x2'" in out or "(x′′·y′)′·y′" in out
    assert run(capsys, "translate", "x &")[0] == 2


def test_check_eq(capsys, files):
    code, out, _ = run(capsys, "check-eq", files["MO2"], "x & (y | z) = (x & y) | (x & z)")
    assert code == 1 and "x=a, y=¬a, z=b" in out
    assert run(capsys, "check-eq", files["B4"], "x & (y | z) = (x & y) | (x & z)")[0] == 0
    assert run(capsys, "check-eq", files["S0_MO2"], "--named", "S-COMMUTE")[0] == 0
    assert run(capsys, "check-eq", files["S0_MO2"], "--named", "DIST*")[0] == 1
    assert run(capsys, "check-eq", files["B4"], "x1&x2&x3&x4 = x4&x3&x2&x1")[0] == 3
    assert run(capsys, "--var-cap", "4", "check-eq", files["B4"], "x1&x2&x3&x4 = x4&x3&x2&x1")[0] == 0
    assert run(capsys, "check-eq", files["B4"], "s(x) = x")[0] == 2
    code, out, _ = run(capsys, "--format", "json", "check-eq", files["MO2"], "x & y = y & x")
    assert code == 0 and json.loads(out)["results"][0]["holds"] is True


def test_product_iso_and_lift_hom(capsys, files):
    assert run(capsys, "product-iso", files["2"], files["2"])[0] == 0
    assert run(capsys, "lift-hom", files["B4"], files["2"], "--map", "0:0,a:1,¬a:0,1:1")[0] == 0
    assert run(capsys, "lift-hom", files["B4"], files["2"], "--map", "[0, 1, 1, 1]")[0] == 1


def test_usage_errors(capsys, files):
    assert run(capsys)[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "verify-oml", "/no/such/file.json")[0] == 2
    assert run(capsys, "--workers", "0", "verify-oml", files["2"])[0] == 2
    assert run(capsys, "--element-cap", "4", "verify-oml", files["MO2"])[0] == 3
