import json

import pytest

from src import __version__
from src.cli.app import EXIT_OK, EXIT_USAGE, TOOL_NAME, main

QUIET = ["--log-file", "", "--log-level", "WARNING"]
FAST = ["--pad", "0", "--window", "1", "--points", "16"]


def run(capsys, *argv):
    code = main(list(argv) + QUIET)
    return code, capsys.readouterr().out


def test_chern(capsys):
    code, out = run(capsys, "chern", "--c2", "1,1,0")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["tool"] == TOOL_NAME
    assert doc["version"] == __version__
    assert doc["status"] == "success"
    assert doc["config"]["c2"] == [1, 1, 0]
    assert doc["result"]["c2"] == [1, 1, 0]
    assert doc["result"]["c3"] == 0
    assert doc["result"]["ranks"] == [2, 4, 0]
    assert doc["result"]["chi_end"] == -4


def test_output_is_canonical_json(capsys):
    _, out = run(capsys, "chern", "--c2", "1,1,1", "--shape", "global")
    assert out == json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n"


def test_generate_then_verify(capsys, tmp_path):
    path = tmp_path / "monad.json"
    code, out = run(capsys, "generate", "--c2", "1,1,0", "--seed", "4", "-o", str(path), *FAST)
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["result"]["valid"]
    assert summary["result"]["written"] == str(path)
    assert json.loads(path.read_text())["format"] == "segre-monad-v1"

    code, out = run(capsys, "verify", "-i", str(path), *FAST)
    assert code == EXIT_OK
    result = json.loads(out)["result"]
    assert result["passed"]
    assert result["stability"]["level"] == "stable-within-window"


def test_generate_embeds_monad_without_output(capsys):
    code, out = run(capsys, "generate", "--c2", "1,1,0", "--prime", "101", *FAST)
    assert code == EXIT_OK
    assert json.loads(out)["result"]["monad"]["field"] == {"type": "prime", "p": 101}


def test_table_written_to_file(capsys, tmp_path):
    path = tmp_path / "table.json"
    code, out = run(capsys, "table", "--c2", "1,1,0", "-o", str(path), *FAST)
    assert code == EXIT_OK
    assert out == ""
    result = json.loads(path.read_text())["result"]
    assert result["matches_expected"]
    assert len(result["rows"]) == 8


def test_ext(capsys):
    code, out = run(capsys, "ext", "--c2", "1,1,0", "--pad", "0", "--no-pad-check")
    assert code == EXIT_OK
    result = json.loads(out)["result"]
    assert [result["hom"], result["ext1"], result["ext2"], result["ext3"]] == [1, 5, 0, 0]


def test_bad_shape_is_a_usage_error(capsys):
    code, out = run(capsys, "generate", "--c2", "1,0,0")
    assert code == EXIT_USAGE
    assert json.loads(out)["status"] == "error"


def test_missing_c2(capsys):
    code, out = run(capsys, "table")
    assert code == EXIT_USAGE
    assert "--c2" in json.loads(out)["message"]


def test_ulrich_on_wrong_charge(capsys):
    code, out = run(capsys, "ulrich", "--c2", "1,1,1", *FAST)
    assert code == EXIT_USAGE
    assert json.loads(out)["error_code"] == "WRONG_CHARGE"


def test_ulrich_passes_at_charge_two(capsys):
    code, out = run(capsys, "ulrich", "--c2", "0,1,1", *FAST)
    assert code == EXIT_OK
    assert json.loads(out)["result"]["passed"]


def test_corrupted_input(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"format": "segre-monad-v1", ')
    code, out = run(capsys, "verify", "-i", str(path), *FAST)
    assert code == EXIT_USAGE
    assert json.loads(out)["status"] == "error"


def test_field_mismatch_on_input(capsys, tmp_path):
    path = tmp_path / "monad.json"
    run(capsys, "generate", "--c2", "1,1,0", "-o", str(path), *FAST)
    code, _ = run(capsys, "table", "-i", str(path), "--prime", "101", *FAST)
    assert code == EXIT_USAGE


def test_non_prime_modulus_is_a_usage_error(capsys):
    code, out = run(capsys, "generate", "--c2", "1,1,0", "--prime", "100", *FAST)
    assert code == EXIT_USAGE
    assert json.loads(out)["error_code"] == "NOT_PRIME"


def test_config_reports_field_of_input_file(capsys, tmp_path):
    path = tmp_path / "monad.json"
    code, _ = run(capsys, "generate", "--c2", "1,1,0", "--prime", "101", "-o", str(path), *FAST)
    assert code == EXIT_OK
    code, out = run(capsys, "table", "-i", str(path), *FAST)
    assert code == EXIT_OK
    config = json.loads(out)["config"]
    assert config["prime"] == 101
    assert config["rational"] is False

    code, out = run(capsys, "table", "-i", str(path), "--format", "text", *FAST)
    assert out.splitlines()[1].startswith("field=F_101 ")


def test_classify(capsys):
    code, out = run(capsys, "classify", "--bound", "10")
    assert code == EXIT_OK
    classes = json.loads(out)["result"]["classes"]
    assert len(classes) == 60
    assert all(sum(c["c2"]) == 2 * c["l"] ** 2 for c in classes)


def test_text_format(capsys):
    code, out = run(capsys, "chern", "--c2", "2,0,1", "--format", "text")
    assert code == EXIT_OK
    first = out.splitlines()[0]
    assert first == f"{TOOL_NAME} {__version__} chern: PASS"
    assert "chi_end" in out


def test_jump_text_has_vanishing_grid(capsys):
    code, out = run(capsys, "jump", "--c2", "1,1,0", "--family", "1", "--format", "text", *FAST)
    assert code == EXIT_OK
    assert "family 1 vanishing grid:" in out


def test_unknown_command_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE