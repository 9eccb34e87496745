import os

import pytest

from graphclust.cli import main
from graphclust.bench import BenchConfig, run_benchmark, emit_plot_data, amdahl_speedup
from graphclust.io import IdMap, read_ordering, read_partition
from graphclust.graph import Partition
from graphclust.synthetic import ring_of_cliques


BARBELL = "0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture
def barbell_file(tmp_path):
    return write(tmp_path, "barbell.txt", BARBELL)


def test_modularity_command(tmp_path, barbell_file, capsys):
    part = write(tmp_path, "p.txt", "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n")
    assert main(["modularity", "--graph", barbell_file, "--partition", part]) == 0
    out = capsys.readouterr().out.strip()
    assert abs(float(out) - 5.0 / 14.0) < 1e-12


def test_cluster_louvain(tmp_path, barbell_file, capsys):
    out_path = str(tmp_path / "louvain.txt")
    rc = main(["cluster", "--algorithm", "louvain", "--input", barbell_file,
               "--output", out_path])
    assert rc == 0
    assert abs(float(capsys.readouterr().out.strip()) - 5.0 / 14.0) < 1e-12
    p = read_partition(out_path, IdMap(range(6)))
    assert p.as_sets() == {frozenset({0, 1, 2}), frozenset({3, 4, 5})}


def test_cluster_lpa_writes_partition_and_prints_q(tmp_path, barbell_file, capsys):
    out_path = str(tmp_path / "lpa.txt")
    rc = main(["cluster", "--algorithm", "lpa", "--input", barbell_file,
               "--output", out_path, "--seed", "3"])
    assert rc == 0
    float(capsys.readouterr().out.strip())  # prints the modularity score
    p = read_partition(out_path, IdMap(range(6)))
    assert 1 <= p.community_count <= 6


def test_cluster_lpa_isolates_stay_singletons(tmp_path, capsys):
    # vertices that carry only self-loops have no neighbors to copy from
    loops = write(tmp_path, "loops.txt", "0 0\n1 1\n2 2\n")
    out_path = str(tmp_path / "iso.txt")
    rc = main(["cluster", "--algorithm", "lpa", "--input", loops,
               "--output", out_path, "--allow-self-loops"])
    assert rc == 0
    assert read_partition(out_path, IdMap(range(3))) == Partition.singletons(3)


def test_cluster_lpa_score(tmp_path, barbell_file, capsys):
    out_path = str(tmp_path / "score.txt")
    rc = main(["cluster", "--algorithm", "lpa-score", "--input", barbell_file,
               "--output", out_path])
    assert rc == 0
    read_partition(out_path, IdMap(range(6)))


def test_cluster_llp_writes_ordering(tmp_path, barbell_file, capsys):
    out_path = str(tmp_path / "order.txt")
    rc = main(["cluster", "--algorithm", "llp", "--input", barbell_file,
               "--output", out_path, "--k", "2"])
    assert rc == 0
    ordering = read_ordering(out_path, IdMap(range(6)))
    assert sorted(ordering.rank) == list(range(6))


def test_cluster_kmeans_fixed_k(tmp_path, capsys):
    pts = write(tmp_path, "pts.txt", "0 0.0\n1 1.0\n2 100.0\n3 101.0\n")
    out_path = str(tmp_path / "km.txt")
    rc = main(["cluster", "--algorithm", "kmeans", "--input", pts,
               "--output", out_path, "--k", "2"])
    assert rc == 0
    captured = capsys.readouterr()
    assert abs(float(captured.out.strip()) - 1.0) < 1e-9
    assert "k=2" in captured.err
    p = read_partition(out_path, IdMap(range(4)))
    assert p.as_sets() == {frozenset({0, 1}), frozenset({2, 3})}


def test_cluster_kmeans_search_default(tmp_path, capsys):
    pts = write(tmp_path, "pts.txt", "0 0.0\n1 1.0\n2 100.0\n3 101.0\n")
    rc = main(["cluster", "--algorithm", "kmeans", "--input", pts,
               "--output", str(tmp_path / "km.txt")])
    assert rc == 0
    assert "k=2" in capsys.readouterr().err


def test_cluster_slink(tmp_path, capsys):
    pts = write(tmp_path, "pts.txt", "0 0.0\n1 1.0\n2 100.0\n3 101.0\n")
    out_path = str(tmp_path / "slink.txt")
    rc = main(["cluster", "--algorithm", "slink", "--input", pts,
               "--output", out_path, "--cut-distance", "5.0"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "2"
    p = read_partition(out_path, IdMap(range(4)))
    assert p.as_sets() == {frozenset({0, 1}), frozenset({2, 3})}


def test_cluster_slink_requires_cut(tmp_path, capsys):
    pts = write(tmp_path, "pts.txt", "0 0.0\n1 1.0\n")
    rc = main(["cluster", "--algorithm", "slink", "--input", pts,
               "--output", str(tmp_path / "x.txt")])
    assert rc == 1
    assert "cut-distance" in capsys.readouterr().err


def test_cluster_deterministic_output_bytes(tmp_path, barbell_file, capsys):
    a, b = str(tmp_path / "a.txt"), str(tmp_path / "b.txt")
    for out in (a, b):
        assert main(["cluster", "--algorithm", "lpa", "--input", barbell_file,
                     "--output", out, "--seed", "11"]) == 0
    capsys.readouterr()
    with open(a, "rb") as fa, open(b, "rb") as fb:
        assert fa.read() == fb.read()


# ----------------------------------------------------------------- exit codes


def test_usage_errors_exit_1(tmp_path, capsys):
    assert main(["no-such-command"]) == 1
    assert main(["cluster", "--algorithm", "lpa"]) == 1  # missing required flags
    assert main(["cluster", "--algorithm", "bogus", "--input", "x",
                 "--output", "y"]) == 1
    graph = write(tmp_path, "g.txt", "0 1\n")
    assert main(["bench", "--algorithm", "lpa", "--input", graph,
                 "--out", str(tmp_path / "o"), "--workers", "fast"]) == 1
    capsys.readouterr()


def test_data_errors_exit_2(tmp_path, capsys):
    missing = str(tmp_path / "nope.txt")
    assert main(["modularity", "--graph", missing, "--partition", missing]) == 2
    bad_graph = write(tmp_path, "bad.txt", "1 x\n")
    assert main(["cluster", "--algorithm", "lpa", "--input", bad_graph,
                 "--output", str(tmp_path / "o.txt")]) == 2
    graph = write(tmp_path, "g.txt", "0 1\n")
    short = write(tmp_path, "short.txt", "0 0\n")
    assert main(["modularity", "--graph", graph, "--partition", short]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for sub in ("cluster", "modularity", "bench", "fit-amdahl", "convert"):
        assert sub in out


def test_subcommand_help_lists_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--algorithm", "--input", "--workers", "--reps",
                 "--max-iterations", "--seed", "--dataset", "--out", "--no-figures"):
        assert flag in out


# ----------------------------------------------------------- path resolution


def test_data_env_prefix(tmp_path, monkeypatch, capsys):
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    (data_dir / "g.txt").write_text(BARBELL)
    part = write(tmp_path, "p.txt", "\n".join(f"{v} 0" for v in range(6)) + "\n")
    monkeypatch.setenv("GRAPHCLUST_DATA", str(data_dir))
    monkeypatch.chdir(tmp_path)
    assert main(["modularity", "--graph", "g.txt", "--partition", part]) == 0
    capsys.readouterr()


def test_existing_relative_path_wins_over_env(tmp_path, monkeypatch, capsys):
    # a file that exists relative to cwd must not be shadowed by the prefix
    data_dir = tmp_path / "data"
    data_dir.mkdir()
    (data_dir / "g.txt").write_text("9 9\n")
    monkeypatch.setenv("GRAPHCLUST_DATA", str(data_dir))
    monkeypatch.chdir(tmp_path)
    write(tmp_path, "g.txt", BARBELL)
    part = write(tmp_path, "p.txt", "\n".join(f"{v} 0" for v in range(6)) + "\n")
    assert main(["modularity", "--graph", "g.txt", "--partition", part]) == 0
    capsys.readouterr()


# -------------------------------------------------------------------- convert


def test_convert_remaps_and_reports(tmp_path, capsys):
    src = write(tmp_path, "raw.txt", "# c\n100 200\n300 100\n")
    dst = str(tmp_path / "dense.txt")
    idmap_path = str(tmp_path / "ids.tsv")
    rc = main(["convert", "--input", src, "--output", dst, "--id-map", idmap_path])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "vertices=3 edges=2"
    with open(dst) as fh:
        assert fh.read() == "0\t1\n0\t2\n"
    with open(idmap_path) as fh:
        assert fh.read() == "100\t0\n200\t1\n300\t2\n"


# ---------------------------------------------------------------------- bench


def test_bench_command_writes_all_artifacts(tmp_path, capsys):
    graph = write(tmp_path, "ring.txt", ring_edges())
    out_dir = str(tmp_path / "bench")
    rc = main(["bench", "--algorithm", "lpa", "--input", graph,
               "--workers", "1,2", "--reps", "2", "--max-iterations", "2",
               "--out", out_dir])
    assert rc == 0
    for name in ("timings.csv", "times.dat", "speedup.dat", "times.png", "speedup.png"):
        assert os.path.exists(os.path.join(out_dir, name)), name
    out = capsys.readouterr().out
    assert "parallel fraction P=" in out
    assert "serial fraction" in out


def test_bench_no_figures(tmp_path, capsys):
    graph = write(tmp_path, "ring.txt", ring_edges())
    out_dir = str(tmp_path / "bench")
    rc = main(["bench", "--algorithm", "lpa", "--input", graph,
               "--workers", "1,2", "--reps", "1", "--max-iterations", "2",
               "--out", out_dir, "--no-figures"])
    assert rc == 0
    assert not os.path.exists(os.path.join(out_dir, "times.png"))
    assert os.path.exists(os.path.join(out_dir, "timings.csv"))
    capsys.readouterr()


def test_bench_worker_range_syntax(tmp_path, capsys):
    graph = write(tmp_path, "ring.txt", ring_edges())
    out_dir = str(tmp_path / "bench")
    rc = main(["bench", "--algorithm", "lpa", "--input", graph,
               "--workers", "1..2", "--reps", "1", "--max-iterations", "1",
               "--out", out_dir, "--no-figures"])
    assert rc == 0
    lines = open(os.path.join(out_dir, "timings.csv")).read().splitlines()
    assert len(lines) == 3  # header + W=1 + W=2
    capsys.readouterr()


# ----------------------------------------------------------------- fit-amdahl


def test_fit_amdahl_command(tmp_path, capsys):
    def runner(algorithm, g, workers, max_iterations, seed):
        return 8.0 / amdahl_speedup(0.95, workers)

    table = run_benchmark(
        BenchConfig("lpa", "synthetic", workers=tuple(range(1, 11)), reps=2),
        ring_of_cliques(3, 3),
        runner=runner,
    )
    emit_plot_data(table, None, tmp_path)
    rc = main(["fit-amdahl", "--csv", str(tmp_path / "timings.csv")])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("lpa\tsynthetic\tP=0.9500")


def test_fit_amdahl_rejects_garbage(tmp_path, capsys):
    bad = write(tmp_path, "bad.csv", "not,a,timings,file\n")
    assert main(["fit-amdahl", "--csv", bad]) == 2
    capsys.readouterr()


def ring_edges():
    g = ring_of_cliques(4, 4)
    lines = []
    for v in range(g.vertex_count):
        ids, _ = g.neighbors(v)
        lines.extend(f"{v} {j}" for j in ids.tolist() if j > v)
    return "\n".join(lines) + "\n"
