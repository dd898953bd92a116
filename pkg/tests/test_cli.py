"""CLI contract: spec parsing, NDJSON records, exit codes, explain."""
import json

import pytest

from skewlab.cli import RECORD_FIELDS, SpecError, main, parse_spec

GOOD_SPEC = """\
ring Z4
checks reduced, sigma_rigid, weak_sigma_rigid
expect reduced=fails, sigma_rigid=fails, weak_sigma_rigid=holds
"""


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# --- parsing ------------------------------------------------------------------


def test_parse_and_serialize_fixpoint():
    spec = parse_spec(GOOD_SPEC)
    text1 = spec.serialize()
    text2 = parse_spec(text1).serialize()
    assert text1 == text2
    assert spec.instance == "Z4/id"
    assert [c.name for c in spec.checks] == [
        "reduced",
        "sigma_rigid",
        "weak_sigma_rigid",
    ]


def test_instance_label_precedence():
    assert parse_spec("ring Z4\ninstance mylabel\n").instance == "mylabel"
    assert parse_spec("system swap-ore\n").instance == "swap-ore"
    assert parse_spec("ring Z2xZ2\nmaps swap\n").instance == "Z2xZ2/swap"


def test_comments_and_semicolons():
    spec = parse_spec("ring Z4; checks reduced  # trailing comment\n")
    assert spec.ring_name == "Z4" and len(spec.checks) == 1


def test_expect_pulls_in_undeclared_checks():
    spec = parse_spec("ring Z4\nexpect weak_sigma_rigid=holds\n")
    assert [c.name for c in spec.checks] == ["weak_sigma_rigid"]


def test_parse_errors_carry_position():
    with pytest.raises(SpecError) as e:
        parse_spec("ring Z4\nfrobnicate yes\n")
    assert str(e.value).startswith("line 2, col 1: unknown statement")
    with pytest.raises(SpecError):
        parse_spec("ring Z4\nring Z6\n")
    with pytest.raises(SpecError) as e:
        parse_spec("ring Z4\nexpect reduced=maybe\n")
    assert "CHECK=STATUS" in str(e.value)
    with pytest.raises(SpecError) as e:
        parse_spec("ring Z4\ncheck nosuchprop\n")
    assert "unknown check" in str(e.value)


# --- check subcommand -----------------------------------------------------------


def test_check_json_records(tmp_path, capsys):
    path = write(tmp_path, "good.spec", GOOD_SPEC)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0 and err == ""
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 3
    for rec in recs:
        assert tuple(rec)[: len(RECORD_FIELDS)] == RECORD_FIELDS
        assert rec["expected"] == rec["status"]
        assert rec["context"]["source"] == "spec"
    assert recs[0]["witness"] == {"element": "2", "nilpotent": True}
    assert recs[1]["witness"]["element"] == "2"
    assert recs[2]["status"] == "holds"


def test_check_text_output(tmp_path, capsys):
    path = write(tmp_path, "good.spec", GOOD_SPEC + "output text\n")
    code, out, err = run_cli(capsys, "check", path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("[FAILS  ] reduced on Z4/id")
    assert "expected fails: ok" in lines[0]


def test_expect_mismatch_exits_1(tmp_path, capsys):
    path = write(tmp_path, "bad.spec", "ring Z4\nexpect reduced=holds\n")
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 1
    rec = json.loads(out.splitlines()[0])
    assert rec["status"] == "fails" and rec["expected"] == "holds"
    assert rec["mismatch"] is True


def test_unknown_ring_diagnostic(tmp_path, capsys):
    path = write(tmp_path, "bad.spec", "ring Q8\ncheck reduced\n")
    code, out, err = run_cli(capsys, "check", path)
    assert code == 2 and out == ""
    assert "line 1, col 1: unknown ring 'Q8'" in err


def test_unknown_map_reported_at_reference_site(tmp_path, capsys):
    path = write(tmp_path, "bad.spec", "ring Z4\nmaps id, nosuch\ncheck reduced\n")
    code, out, err = run_cli(capsys, "check", path)
    assert code == 2
    assert "line 2, col 10: unknown map 'nosuch' on Z4" in err


def test_zero_commutation_coefficient_rejected(tmp_path, capsys):
    path = write(
        tmp_path, "bad.spec", "ring Z3\nmaps id, id\nc[1,2] = 0\ncheck reduced\n"
    )
    code, out, err = run_cli(capsys, "check", path)
    assert code == 2
    assert (
        "line 3, col 1: axiom violation c_nonzero[1,2]: x2*x1 rewrite needs "
        "a nonzero leading coefficient on x1*x2, got 0" in err
    )


def test_missing_file_exits_2(capsys):
    code, out, err = run_cli(capsys, "check", "/nonexistent/path.spec")
    assert code == 2 and "error:" in err


def test_explicit_ring_tables(tmp_path, capsys):
    spec = (
        'ring F2 add=[[0,1],[1,0]] mul=[[0,0],[0,1]] one=1 names=["z","u"]\n'
        "check reduced\nexpect reduced=holds\n"
    )
    path = write(tmp_path, "f2.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["status"] == "holds" and rec["instance"] == "F2/id"
    # serialize of an explicit-table spec reparses to the same text
    parsed = parse_spec(spec)
    assert parse_spec(parsed.serialize()).serialize() == parsed.serialize()


def test_explicit_map_images(tmp_path, capsys):
    spec = (
        "ring Z2xZ2\nmap s = [0, 2, 1, 3]\nmaps s\n"
        "check weak_sigma_rigid\nexpect weak_sigma_rigid=fails\n"
    )
    path = write(tmp_path, "swap.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["witness"]["element"] == "(0|1)" and rec["witness"]["map"] == "s"


def test_broken_map_images_rejected(tmp_path, capsys):
    path = write(
        tmp_path, "bad.spec", "ring Z4\nmap m = [0, 1, 1, 1]\nmaps m\ncheck reduced\n"
    )
    code, out, err = run_cli(capsys, "check", path)
    assert code == 2 and "line 2, col 1" in err


def test_derivation_spec_matches_builtin_ore(tmp_path, capsys):
    spec = (
        "ring Z2xZ2\nmap s = swap\nderivation dd = id-minus s\n"
        "maps s\ndeltas dd\n"
        "check sigma_delta_skew_armendariz degree_bound=1\n"
        "expect sigma_delta_skew_armendariz=fails\n"
    )
    path = write(tmp_path, "ore.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    w = rec["witness"]
    assert w["f"] == "(0|1)*x1 + (0|1)" and w["g"] == "(0|1)"
    assert (w["pairs_checked"], w["zero_products"]) == (78, 30)


def test_builtin_system_spec(tmp_path, capsys):
    spec = (
        "system quantum-plane(Z3,2)\n"
        "check sigma_skew_armendariz degree_bound=1\n"
        "expect sigma_skew_armendariz=holds_up_to_bound\n"
    )
    path = write(tmp_path, "qp.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["bound"]["polys"] == 27


def test_system_cannot_mix_with_maps(tmp_path, capsys):
    path = write(tmp_path, "bad.spec", "system swap-ore\nmaps id\ncheck reduced\n")
    code, out, err = run_cli(capsys, "check", path)
    assert code == 2 and "cannot be combined" in err


def test_s_ring_defaults_to_block_subset(tmp_path, capsys):
    spec = (
        "system s-negate-b(Z3)\n"
        "check weak_sigma_skew_armendariz degree_bound=1\n"
        "expect weak_sigma_skew_armendariz=fails\n"
    )
    path = write(tmp_path, "s3.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["witness"]["subset"] == "block-elementary"
    assert rec["witness"]["pairs_checked"] == 46347


# --- verify-theorems -------------------------------------------------------------


def test_verify_theorems_single_instance(tmp_path, capsys):
    code, out, err = run_cli(
        capsys, "verify-theorems", "--instance", "Z4/id", "--json"
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 7
    summary = json.loads(lines[-1])
    assert summary["record"] == "summary"
    assert (summary["theorems"], summary["passed"], summary["failed"]) == (6, 6, 0)
    recs = [json.loads(l) for l in lines[:-1]]
    assert [r["theorem"] for r in recs] == [
        "catalog_flags",
        "rigid_iff_weak_reduced",
        "nil_transfer",
        "idempotent_fixed",
        "ideal_decomposition",
        "ni_weak_rigid_implies_weak_armendariz",
    ]
    assert all(r["status"] == "pass" for r in recs)


def test_verify_theorems_unknown_instance(capsys):
    code, out, err = run_cli(capsys, "verify-theorems", "--instance", "Z5/id")
    assert code == 2 and "unknown instance" in err


def strip_wall(text):
    return [
        {k: v for k, v in json.loads(line).items() if k != "wall_ms"}
        for line in text.splitlines()
    ]


def test_verify_theorems_backend_identical(capsys):
    import skewlab.kernels as K

    _, out_nb, _ = run_cli(
        capsys, "verify-theorems", "--instance", "M2(Z2)/id", "--json",
        "--backend", "numba" if K.HAVE_NUMBA else "numpy",
    )
    _, out_np, _ = run_cli(
        capsys, "verify-theorems", "--instance", "M2(Z2)/id", "--json",
        "--backend", "numpy",
    )
    assert strip_wall(out_nb) == strip_wall(out_np)


def test_verify_theorems_text_summary(capsys):
    code, out, err = run_cli(capsys, "verify-theorems", "--instance", "Z6/id")
    assert code == 0
    assert out.splitlines()[0].startswith("[PASS   ] catalog_flags on Z6/id")
    assert "6 checks: 6 passed, 0 vacuous, 0 failed" in out


# --- catalog ----------------------------------------------------------------------


def test_catalog_json(capsys):
    code, out, err = run_cli(capsys, "catalog", "list", "--json")
    assert code == 0
    listing = json.loads(out)
    assert len(listing["rings"]) == 9
    assert len(listing["systems"]) == 11
    assert len(listing["instances"]) == 10
    sizes = {r["name"]: r["size"] for r in listing["rings"]}
    assert sizes["S(Z4)"] == 4**12 and sizes["M2(Z2)"] == 16


def test_catalog_text(capsys):
    code, out, err = run_cli(capsys, "catalog", "list")
    assert code == 0
    assert "S(Z4)" in out and "swap-ore" in out and "R3(Z2)/id" in out


# --- explain ----------------------------------------------------------------------


def test_explain_roundtrip_property_witness(tmp_path, capsys):
    spec = (
        "ring M2(Z2)\ncheck sigma_skew_armendariz degree_bound=1\n"
        "expect sigma_skew_armendariz=fails\n"
    )
    path = write(tmp_path, "m2.spec", spec)
    code, out, err = run_cli(capsys, "check", path, "--json")
    assert code == 0
    ndjson = write(tmp_path, "m2.ndjson", out)
    code, out, err = run_cli(capsys, "explain", ndjson)
    assert code == 0
    assert out.splitlines()[0].startswith("[ok ]")


def test_explain_detects_tampering(tmp_path, capsys):
    spec = (
        "ring M2(Z2)\ncheck sigma_skew_armendariz degree_bound=1\n"
        "expect sigma_skew_armendariz=fails\n"
    )
    path = write(tmp_path, "m2.spec", spec)
    _, out, _ = run_cli(capsys, "check", path, "--json")
    rec = json.loads(out.splitlines()[0])
    rec["witness"]["f_terms"][0]["coeff"] = "[1,0;0,1]"
    ndjson = write(tmp_path, "tampered.ndjson", json.dumps(rec) + "\n")
    code, out, err = run_cli(capsys, "explain", ndjson, "--json")
    assert code == 1
    row = json.loads(out.splitlines()[0])
    assert row["verified"] is False
    assert "do not multiply to zero" in row["explanation"]


def test_explain_theorem_records(tmp_path, capsys):
    _, out, _ = run_cli(capsys, "verify-theorems", "--instance", "Z4/id", "--json")
    ndjson = write(tmp_path, "z4.ndjson", out)
    code, out, err = run_cli(capsys, "explain", ndjson, "--json")
    assert code == 0
    rows = [json.loads(l) for l in out.splitlines()]
    assert len(rows) == 6  # summary line is skipped
    assert all(r["verified"] for r in rows)


def test_explain_empty_file(tmp_path, capsys):
    ndjson = write(tmp_path, "empty.ndjson", "\n")
    code, out, err = run_cli(capsys, "explain", ndjson)
    assert code == 2 and "no records" in err


# --- argparse plumbing --------------------------------------------------------------


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert capsys.readouterr().out.startswith("skewlab ")


def test_invalid_backend_rejected(capsys):
    with pytest.raises(SystemExit) as e:
        main(["check", "x.spec", "--backend", "cuda"])
    assert e.value.code == 2
