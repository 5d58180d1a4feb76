import json

from veclog.cli import main
from veclog.lamp import quality_source

QUERY_TABLE = "3 4\n1100\n1111\n0011\n#labels\nrows: r1 r2 r3\n"
DIAG_TABLE = "3 3\n110\n011\n100\n#labels\ncols: f1 f2 f3\n"
MEMORY_INSTANCE = "13 15 2 5\n" + "\n".join(
    f"{r} {c}" for r, c in sorted({(2, 2), (2, 5), (2, 8), (4, 3), (5, 5),
                                   (5, 8), (7, 2), (8, 5), (9, 3), (9, 7)})) + "\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def value_of(out, key):
    for line in out.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    raise AssertionError(f"{key!r} not in report:\n{out}")


class TestQuery:
    def test_row_match(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", QUERY_TABLE)
        code, out, _ = run(capsys, "query", table, "1100")
        assert code == 0
        assert value_of(out, "row-1 (r1)") == "feasible"
        assert value_of(out, "row-3 (r3)") == "contradictory"
        assert value_of(out, "feasible-rows") == "1 2"
        assert value_of(out, "best-rows") == "1"
        assert value_of(out, "best-quality") == "(0/4)"
        assert value_of(out, "status") == "ok"

    def test_worked_pair_as_single_row_table(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", "1 12\n000011110101\n")
        code, out, _ = run(capsys, "query", table, "110011001100")
        assert code == 0
        assert value_of(out, "best-quality") == "(6/12)"

    def test_malformed_symbol_names_position(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", "2 3\n110\n121\n")
        code, _, err = run(capsys, "query", table, "110")
        assert code == 2
        assert "line 3" in err and "column 2" in err

    def test_width_mismatch(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", QUERY_TABLE)
        code, _, err = run(capsys, "query", table, "11")
        assert code == 2
        assert "width" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "query", str(tmp_path / "absent.tbl"), "11")
        assert code == 2

    def test_arith_mode(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", "2 2\nxx\n01\n")
        code, out, _ = run(capsys, "query", table, "1x", "--arith")
        assert code == 0
        assert "quality 5/6" in value_of(out, "row-1")
        assert value_of(out, "best-rows") == "1"
        assert value_of(out, "best-quality") == "5/6"

    def test_json_mode(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", QUERY_TABLE)
        code, out, _ = run(capsys, "query", table, "1100", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["best-quality"] == "(0/4)"
        assert doc["status"] == "ok"

    def test_byte_identical_reruns(self, capsys, tmp_path):
        table = write(tmp_path, "t.tbl", QUERY_TABLE)
        _, first, _ = run(capsys, "query", table, "1100")
        _, second, _ = run(capsys, "query", table, "1100")
        assert first == second


class TestDiagnose:
    def test_single(self, capsys, tmp_path):
        table = write(tmp_path, "d.tbl", DIAG_TABLE)
        code, out, _ = run(capsys, "diagnose", table, "110")
        assert code == 0
        assert value_of(out, "candidate-vector") == "010"
        assert value_of(out, "candidates") == "f2"
        assert value_of(out, "status") == "ok"

    def test_inconsistent(self, capsys, tmp_path):
        table = write(tmp_path, "d.tbl", "3 3\n110\n011\n010\n")
        code, out, _ = run(capsys, "diagnose", table, "110")
        assert code == 1
        assert value_of(out, "candidates") == "(none)"
        assert value_of(out, "status") == "inconsistent"

    def test_multiple(self, capsys, tmp_path):
        table = write(tmp_path, "d.tbl", DIAG_TABLE)
        code, out, _ = run(capsys, "diagnose", table, "110",
                           "--mode", "multiple")
        assert code == 0
        assert value_of(out, "candidate-vector") == "011"

    def test_response_width_mismatch(self, capsys, tmp_path):
        table = write(tmp_path, "d.tbl", DIAG_TABLE)
        code, _, err = run(capsys, "diagnose", table, "1101")
        assert code == 2
        assert "height" in err


class TestRepair:
    def test_memory_module(self, capsys, tmp_path):
        instance = write(tmp_path, "m.rep", MEMORY_INSTANCE)
        code, out, _ = run(capsys, "repair", instance)
        assert code == 0
        assert value_of(out, "greedy-mask") == "11111000000"
        assert value_of(out, "greedy-cover") == "C2 C3 C5 C7 C8"
        assert value_of(out, "plan") == "valid"
        assert "C2->spare-column-1" in value_of(out, "remap")
        assert value_of(out, "status") == "ok"

    def test_oracle_lists_all_minimum_covers(self, capsys, tmp_path):
        instance = write(tmp_path, "m.rep", MEMORY_INSTANCE)
        code, out, _ = run(capsys, "repair", instance, "--oracle")
        assert code == 0
        assert value_of(out, "oracle-minimum") == "5"
        assert value_of(out, "oracle-cover-count") == "3"
        assert value_of(out, "oracle-cover-1") == "C2 C3 C5 C7 C8"
        assert value_of(out, "oracle-cover-2") == "C2 C3 C5 C8 R9"
        assert value_of(out, "oracle-cover-3") == "C2 C5 C8 R4 R9"
        assert value_of(out, "ratio") == "5/5 = 1.000"

    def test_not_repairable(self, capsys, tmp_path):
        # six faults on distinct rows and columns, but only five spare
        # columns and no spare rows
        text = "8 8 0 5\n" + "".join(f"{k} {k}\n" for k in range(1, 7))
        instance = write(tmp_path, "bad.rep", text)
        code, out, _ = run(capsys, "repair", instance)
        assert code == 1
        assert value_of(out, "status") == "not-repairable"

    def test_nothing_to_repair(self, capsys, tmp_path):
        instance = write(tmp_path, "ok.rep", "4 4 1 1\n")
        code, out, _ = run(capsys, "repair", instance)
        assert code == 0
        assert value_of(out, "status") == "nothing-to-repair"

    def test_bad_instance_file(self, capsys, tmp_path):
        instance = write(tmp_path, "bad.rep", "4 4 1\n")
        code, _, err = run(capsys, "repair", instance)
        assert code == 2


class TestSim:
    def test_quality_program(self, capsys, tmp_path):
        program = write(tmp_path, "q.lamp", quality_source())
        data = write(tmp_path, "d.tbl", "1 12\n000011110101\n")
        code, out, _ = run(capsys, "sim", program, data,
                           "--reg", "mb=110011001100")
        assert code == 0
        assert value_of(out, "mc") == "110000111001"
        assert value_of(out, "md") == "111111000000"
        assert int(value_of(out, "steps")) == 11

    def test_dots_rendering(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp", "SETALL ma\nDEVOR mb 2 ma\nHALT\n")
        data = write(tmp_path, "d.tbl", "1 4\n0000\n")
        code, out, _ = run(capsys, "sim", program, data, "--dots")
        assert code == 0
        assert value_of(out, "ma") == "1111"
        assert value_of(out, "mb") == ".1.."

    def test_dump_memory(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp",
                        "SETALL ma\nSTOREROW A[1] ma\nHALT\n")
        data = write(tmp_path, "d.tbl", "2 3\n000\n010\n")
        code, out, _ = run(capsys, "sim", program, data, "--dump-memory")
        assert code == 0
        assert value_of(out, "memory-1") == "111"
        assert value_of(out, "memory-2") == "010"

    def test_assembler_error_is_input_error(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp", "FROB ma\n")
        data = write(tmp_path, "d.tbl", "1 2\n00\n")
        code, _, err = run(capsys, "sim", program, data)
        assert code == 2
        assert "line 1" in err

    def test_runtime_fault_is_domain_error(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp",
                        "LOOP 100\nNOP ma ma\nENDLOOP\nHALT\n")
        data = write(tmp_path, "d.tbl", "1 2\n00\n")
        code, out, _ = run(capsys, "sim", program, data, "--max-steps", "10")
        assert code == 1
        assert "fault" in value_of(out, "status")

    def test_bad_register_preset(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp", "HALT\n")
        data = write(tmp_path, "d.tbl", "1 2\n00\n")
        code, _, err = run(capsys, "sim", program, data, "--reg", "zz=00")
        assert code == 2

    def test_grid_manifest(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp", "LOADROW ma A[1]\nHALT\n")
        data = write(tmp_path, "d.tbl", "1 3\n101\n")
        manifest = write(tmp_path, "grid.txt",
                         "# one line per cell\n" + "p.lamp d.tbl\n" * 16)
        code, out, _ = run(capsys, "sim", "--grid", manifest)
        assert code == 0
        assert value_of(out, "cell-1-1-ma") == "101"
        assert value_of(out, "cell-4-4-ma") == "101"
        assert value_of(out, "status") == "ok"

    def test_grid_error_names_cell(self, capsys, tmp_path):
        good = write(tmp_path, "p.lamp", "HALT\n")
        bad = write(tmp_path, "bad.lamp", "LOADROW ma A[5]\nHALT\n")
        data = write(tmp_path, "d.tbl", "1 3\n101\n")
        lines = ["p.lamp d.tbl"] * 16
        lines[6] = "bad.lamp d.tbl"  # cell (2,3)
        manifest = write(tmp_path, "grid.txt", "\n".join(lines) + "\n")
        code, out, _ = run(capsys, "sim", "--grid", manifest)
        assert code == 1
        assert "cell (2,3)" in value_of(out, "status")
        assert good  # paths referenced through the manifest

    def test_grid_needs_sixteen_lines(self, capsys, tmp_path):
        manifest = write(tmp_path, "grid.txt", "p.lamp d.tbl\n" * 3)
        code, _, err = run(capsys, "sim", "--grid", manifest)
        assert code == 2

    def test_sim_needs_both_files(self, capsys, tmp_path):
        program = write(tmp_path, "p.lamp", "HALT\n")
        code, _, err = run(capsys, "sim", program)
        assert code == 2


class TestQuality:
    def test_reference_values(self, capsys):
        code, out, _ = run(capsys, "quality", "--fault-prob", "0.1",
                           "--faults", "10", "--testability", "0.5",
                           "--scan", "1", "--logic", "1")
        assert code == 0
        assert value_of(out, "yield") == "0.348678"
        assert value_of(out, "fault-level") == "0.409510"
        assert value_of(out, "verification-time") == "0.250000"
        assert value_of(out, "hardware-redundancy") == "0.500000"
        assert value_of(out, "quality") == "0.386503"

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, "quality", "--fault-prob", "1.5",
                           "--faults", "10", "--testability", "0.5",
                           "--scan", "1", "--logic", "1")
        assert code == 2

    def test_json(self, capsys):
        code, out, _ = run(capsys, "quality", "--fault-prob", "0",
                           "--faults", "3", "--testability", "1",
                           "--scan", "1", "--logic", "1", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["yield"] == "1.000000"
