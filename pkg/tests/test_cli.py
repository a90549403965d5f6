"""Golden-file tests for every CLI path. Set DIOPHDEF_UPDATE_GOLDEN=1 to rewrite the expected outputs."""
import json
import os
import re
import subprocess
import sys
from pathlib import Path

import pytest

from diophdef.cli import main

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
UPDATE = os.environ.get("DIOPHDEF_UPDATE_GOLDEN") == "1"


def at(name):
    return "@" + str(INPUTS / name)


CASES = {
    "field_info": ["field", "info", "--ring", "zzeta8"],
    "field_unit": ["field", "unit", "--ring", "zsqrt2"],
    "field_norm": ["field", "norm", "--ring", "zi", "--x", "[2, 1]"],
    "field_embed": ["field", "embed", "--ring", "zsqrt2", "--x", "[1, 1]", "--digits", "15"],
    "ideal_hnf": ["ideal", "hnf", "--ring", "zi", "--ideal", '{"gens": [[6, 0], [2, 2]]}'],
    "ideal_factor": ["ideal", "factor", "--ring", "zi", "--ideal", '{"gens": [[30, 0]]}'],
    "ideal_contains": ["ideal", "contains", "--ring", "zsqrt2", "--ideal", '{"gens": [[0, 1]]}', "--x", "[4, 2]"],
    "ideal_reduce": ["ideal", "reduce", "--ring", "zsqrt2", "--ideal", '{"gens": [[3, 0]]}', "--x", "[7, -5]"],
    "poly_combine": ["poly", "combine", "--system", at("system_zi.json")],
    "poly_gadget_nonzero": ["poly", "gadget", "nonzero", "--ring", "zsqrt2"],
    "poly_gadget_unit": ["poly", "gadget", "unit", "--ring", "zz"],
    "poly_gadget_totpos": ["poly", "gadget", "totpos", "--ring", "zz"],
    "poly_transport": ["poly", "transport", "--system", at("system_zz.json"), "--def", at("def_squares_zi.json")],
    "poly_intersect": ["poly", "intersect", "--def", at("def_evens.json"), "--def", at("def_thirds.json")],
    "poly_solve": ["poly", "solve", "--system", at("system_zi.json"), "--box", "2"],
    "poly_solve_fixed": ["poly", "solve", "--system", at("system_zz.json"), "--box", "3", "--fixed", '{"x": 1}'],
    "bounds_c_of_m": ["bounds", "c-of-m", "2"],
    "bounds_d_alpha": ["bounds", "d-alpha", "--m", "2", "--ring", "zsqrt2", "--alpha", "[3, 1]"],
    "bounds_capture_finite": ["bounds", "capture", "--cert", at("cert_finite.json")],
    "bounds_capture_totreal": ["bounds", "capture", "--cert", at("cert_totreal.json")],
    "bounds_capture_quad": ["bounds", "capture", "--cert", at("cert_quad.json")],
    "bounds_four_squares": ["bounds", "four-squares", "--ring", "zsqrt2", "--x", "[3, 1]"],
    "bounds_search": ["bounds", "search", "--variant", "totreal", "--extension", "cm-sqrt2",
                      "--alpha", "[5, 0, 0, 0]"],
    "group_make": ["group", "make", "--instance", "gm-sqrt2", "--value", "[3, 2]"],
    "group_make_coords": ["group", "make", "--instance", "curve-32a", "--coords", "[[1], [1], [0]]"],
    "group_add": ["group", "add", "--p", at("point_gm.json"), "--q", at("point_gm.json")],
    "group_pow": ["group", "pow", "--p", at("point_curve.json"), "--n", "3"],
    "group_kernel": ["group", "kernel", "--p", at("point_gm.json"), "--ideal", '{"gens": [[3, 0]]}', "--order"],
    "group_partial": ["group", "partial", "--p", at("point_gm.json")],
    "group_stability_check": ["group", "stability-check", "--fixture", "cm-sqrt2", "--k", "4"],
    "group_bset": ["group", "bset", "--fixture", "cm-sqrt2"],
    "capture_witness": ["capture", "witness", "--variant", "totreal", "--alpha", "3"],
    "capture_assign": ["capture", "assign", "--def", at("def_cm.json"), "--witness", at("witness.json")],
    "capture_verify_witness": ["capture", "verify", "--witness", at("witness.json")],
    "capture_verify_assignment": ["capture", "verify", "--def", at("def_cm.json"),
                                  "--assignment", at("assignment.json")],
    "selftest_quick": ["selftest", "quick"],
    # failures
    "err_malformed": ["poly", "combine", "--system", at("malformed.json")],
    "err_unknown_ring": ["field", "info", "--ring", "nope"],
    "err_bad_flag": ["field", "info", "--ring", "zz", "--bogus"],
    "err_missing_file": ["poly", "combine", "--system", "@/nonexistent.json"],
    "err_off_curve": ["group", "make", "--instance", "curve-32a", "--value", "[1, 1]"],
    "err_search_exhausted": ["capture", "witness", "--fixture", "gm-sqrt2", "--variant", "finite", "--alpha", "7"],
    "err_bad_cert": ["bounds", "capture", "--cert", at("cert_bad.json")],
    "err_bad_assignment": ["capture", "verify", "--def", at("def_cm.json"), "--assignment", at("assignment_bad.json")],
}

EXPECTED_RC = {"err_malformed": 64, "err_unknown_ring": 64, "err_bad_flag": 64, "err_missing_file": 64,
               "err_off_curve": 65, "err_search_exhausted": 66, "err_bad_cert": 67, "err_bad_assignment": 67}


def normalize(text):
    return re.sub(r"\(\d+\.\d+s /", "(Ts /", text)


def run(argv, capsys):
    rc = main(argv)
    cap = capsys.readouterr()
    return rc, normalize(cap.out), cap.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    rc, out, err = run(CASES[name], capsys)
    assert rc == EXPECTED_RC.get(name, 0), err
    if name.startswith("err_"):
        assert out == "" and err.strip()
        text = f"exit {rc}\n"
    else:
        text = out
    path = GOLDEN / f"{name}.out"
    if UPDATE or not path.exists():
        if not UPDATE:
            pytest.fail(f"missing golden file {path.name}; rerun with DIOPHDEF_UPDATE_GOLDEN=1")
        path.write_text(text, encoding="utf-8")
    assert text == path.read_text(encoding="utf-8")


def test_error_messages_name_the_problem(capsys):
    _, _, err = run(CASES["err_bad_cert"], capsys)
    assert "congruence" in err or "clause" in err
    _, _, err = run(CASES["err_unknown_ring"], capsys)
    assert "nope" in err


@pytest.mark.parametrize("where", ["global", "leaf"])
def test_out_file_matches_stdout(where, tmp_path, capsys):
    target = tmp_path / "o.json"
    argv = CASES["group_make"]
    argv = ["--out", str(target), *argv] if where == "global" else [*argv, "--out", str(target)]
    assert main(argv) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8") == (GOLDEN / "group_make.out").read_text(encoding="utf-8")


def test_witness_then_verify_chain(tmp_path, capsys):
    w = tmp_path / "w.json"
    assert main(["capture", "witness", "--alpha", "4", "--out", str(w)]) == 0
    assert main(["capture", "verify", "--witness", "@" + str(w)]) == 0
    assert capsys.readouterr().out.strip() == "alpha ∈ O_K: [4, 0]"


def test_emit_is_deterministic(capsys):
    main(["capture", "emit"])
    first = capsys.readouterr().out
    assert main(["--seed", "7", "capture", "emit"]) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["definition"]["t"] == "alpha"


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "diophdef.cli", "bounds", "c-of-m", "1"],
                         capture_output=True, text=True, check=False)
    assert (res.returncode, res.stdout) == (0, "8\n")
