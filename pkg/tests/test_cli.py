import pytest

from spinecycles import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------ simple output --


def test_discs_exact_strings(capsys):
    code, out, _ = run(capsys, "discs", "3", "3")
    assert code == 0
    assert out.strip() == "{-107,-104,-92,-83,-59,-44,-23,-11,-8}"
    code, out, _ = run(capsys, "discs", "3", "1")
    assert out.strip() == "{-11,-8}"
    code, out, _ = run(capsys, "discs", "3", "3", "--exact")
    assert out.strip() == "{-107,-104,-92,-83,-59,-44,-23}"


def test_bound_output(capsys):
    code, out, _ = run(capsys, "bound", "3", "3")
    assert code == 0
    assert "M=2782" in out
    code, out, _ = run(capsys, "bound", "5", "3")
    assert "M=61876" in out
    code, out, _ = run(capsys, "bound", "2", "6")
    assert "M=15746.25" in out and "M_strong=3778.25" in out


def test_predict_output(capsys):
    code, out, _ = run(capsys, "predict", "3", "3", "4643")
    assert code == 0
    assert "n_s=4" in out and "n_t=8" in out and "valid=true" in out


def test_predict_experimental_flag(capsys):
    code, out, _ = run(capsys, "predict", "3", "4", "2801")
    assert code == 0
    assert "experimental=true" in out


def test_graph_output_and_dot(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "graph", "101", "2", "--dot", str(dot))
    assert code == 0
    assert "vertices=9" in out and "spine=7" in out
    text = dot.read_text()
    assert text.count("doublecircle") == 7


def test_graph_accepts_external_phi(capsys, tmp_path):
    from spinecycles.ssgraph import ModularPolynomialData

    data = ModularPolynomialData.load(2)
    path = tmp_path / "phi2.txt"
    lines = [f"{i} {k} {c}" for (i, k), c in sorted(data.table.items()) if i >= k]
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "graph", "101", "2", "--phi", str(path))
    assert code == 0 and "vertices=9" in out


# ------------------------------------------------------------------ census --


def test_census_csv_structure_and_agreement(capsys, tmp_path):
    out_csv = tmp_path / "c.csv"
    code, out, _ = run(
        capsys,
        "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "2900",
        "--oracle", "--skip-tainted", "-o", str(out_csv),
    )
    assert code == 0
    assert "mismatched_untainted=0" in out
    lines = out_csv.read_text().splitlines()
    assert lines[0] == ",".join(cli.CSV_COLUMNS)
    first = dict(zip(cli.CSV_COLUMNS, lines[1].split(",")))
    assert first["p"] == "2789"
    assert first["ns_formula"] == first["ns_graph"] == "6"
    assert first["agreement"] == "true"
    assert first["tainted"] == "false"
    assert first["limit"] == "7"


def test_census_byte_identical_runs(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(
            capsys,
            "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "3100",
            "--seed", "5", "-o", str(path),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_census_records_bound_violations_per_row(capsys, tmp_path):
    out_csv = tmp_path / "low.csv"
    code, out, _ = run(
        capsys,
        "census", "--ell", "3", "--r", "3", "--pmin", "17", "--pmax", "120",
        "-o", str(out_csv),
    )
    assert code == 0
    assert "errors=" in out and "errors=0" not in out
    rows = out_csv.read_text().splitlines()[1:]
    # primes at or below max |D| = 107 have empty formula fields, sweep continues
    low = dict(zip(cli.CSV_COLUMNS, rows[0].split(",")))
    assert low["ns_formula"] == ""
    high = dict(zip(cli.CSV_COLUMNS, rows[-1].split(",")))
    assert high["p"] == "113" and high["ns_formula"] != ""


def test_census_running_average_and_avg_start(capsys, tmp_path):
    out_csv = tmp_path / "avg.csv"
    code, _, _ = run(
        capsys,
        "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "3000",
        "--avg-start", "2797", "-o", str(out_csv),
    )
    assert code == 0
    rows = [dict(zip(cli.CSV_COLUMNS, ln.split(","))) for ln in out_csv.read_text().splitlines()[1:]]
    assert rows[0]["p"] == "2789" and rows[0]["running_avg"] == ""
    assert rows[1]["p"] == "2791" and rows[1]["running_avg"] == ""
    started = [r for r in rows if r["running_avg"]]
    assert started[0]["p"] == "2797"
    # average of a single row equals its own n_s
    assert float(started[0]["running_avg"]) == float(started[0]["ns_formula"])


def test_census_jobs_matches_sequential(capsys, tmp_path):
    a, b = tmp_path / "seq.csv", tmp_path / "par.csv"
    run(capsys, "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "2920",
        "--oracle", "-o", str(a))
    run(capsys, "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "2920",
        "--oracle", "--jobs", "2", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_census_single_worked_prime_row(capsys, tmp_path):
    out_csv = tmp_path / "single.csv"
    code, _, _ = run(
        capsys,
        "census", "--ell", "3", "--r", "3", "--pmin", "4643", "--pmax", "4643",
        "--oracle", "-o", str(out_csv),
    )
    assert code == 0
    row = dict(zip(cli.CSV_COLUMNS, out_csv.read_text().splitlines()[1].split(",")))
    assert (row["ns_formula"], row["nt_formula"]) == ("4", "8")
    assert (row["ns_graph"], row["nt_graph"]) == ("4", "8")
    assert row["vertex_count"] == "388" and row["agreement"] == "true"
    # a row with spine cycles must see a nonempty spine
    assert int(row["ns_graph"]) > 0 and int(row["spine_size"]) > 0


def test_census_formula_sweep_average_band(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, out, _ = run(
        capsys,
        "census", "--ell", "3", "--r", "3", "--pmin", "2789", "--pmax", "10000",
        "-o", str(out_csv),
    )
    assert code == 0
    avg_line = next(ln for ln in out.splitlines() if ln.startswith("final_running_avg="))
    avg = float(avg_line.split("=")[1].split()[0])
    assert 6 <= avg <= 8


def test_census_oracle_requires_builtin_or_phi(capsys, tmp_path):
    code, _, err = run(
        capsys,
        "census", "--ell", "11", "--r", "2", "--pmin", "2789", "--pmax", "2800",
        "--oracle", "-o", str(tmp_path / "x.csv"),
    )
    assert code == 2 and "--phi" in err


# ---------------------------------------------------------------- validate --


def test_validate_passes_on_clean_primes(capsys):
    code, out, _ = run(capsys, "validate", "--ell", "3", "--r", "3",
                       "--primes", "2789,2791,2797")
    assert code == 0
    assert out.count(" ok") == 3


def test_validate_even_case(capsys):
    code, out, _ = run(capsys, "validate", "--ell", "2", "--r", "6",
                       "--primes", "3779,3793,3797")
    assert code == 0


def test_validate_power_of_two_reported_not_enforced(capsys):
    code, out, _ = run(capsys, "validate", "--ell", "3", "--r", "4",
                       "--primes", "2789,2791")
    assert code == 0
    assert "power of two" in out


def test_validate_rejects_prime_below_bound(capsys):
    code, _, err = run(capsys, "validate", "--ell", "3", "--r", "3", "--primes", "2777")
    assert code == 2
    assert "bound" in err


# ---------------------------------------------------------------- residues --


def test_residues_header_and_worked_entry(capsys, tmp_path):
    out_file = tmp_path / "res.txt"
    code, out, _ = run(capsys, "residues", "3", "3", "--sample", "4", "-o", str(out_file))
    assert code == 0
    text = out_file.read_text()
    assert "modulus=13786935448" in text
    assert "modulus=13786935448" in out  # echoed to stdout
    assert "residue=2789 n_s=6 n_t=6" in text
    assert "# spine-avoiding residues" in text


def test_residues_rejects_power_of_two(capsys, tmp_path):
    code, _, err = run(capsys, "residues", "3", "4", "-o", str(tmp_path / "x.txt"))
    assert code == 2


# -------------------------------------------------------------- exit codes --


def test_usage_error_exit_2(capsys):
    assert run(capsys, "discs", "4", "3")[0] == 2  # ell not prime
    assert run(capsys, "predict", "3", "3", "4642")[0] == 2  # p composite
    with pytest.raises(SystemExit) as exc:
        cli.main(["census", "--ell", "3"])  # missing required args
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main(["nonsense"])
