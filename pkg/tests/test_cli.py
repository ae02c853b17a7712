import numpy as np
import pytest

from sketchlab import mmio
from sketchlab.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_tall_sparse_scaled(tmp_path):
    out = tmp_path / "a.mtx"
    assert run("gen", "tall-sparse", "--scale", 256, "--seed", 1, "--out", out) == 0
    A = mmio.read_matrix_market(out)
    assert (A.nrows, A.ncols) == (8192, 512)
    density = A.nnz / (A.nrows * A.ncols)
    assert abs(density - 0.05) < 0.005


def test_gen_short_sparse_density(tmp_path):
    out = tmp_path / "s.mtx"
    assert run("gen", "short-sparse", "--scale", 1024, "--seed", 2, "--out", out) == 0
    A = mmio.read_matrix_market(out)
    assert (A.nrows, A.ncols) == (128, 8192)
    assert abs(A.nnz / (A.nrows * A.ncols) - 0.025) < 0.005


def test_gen_dense(tmp_path):
    out = tmp_path / "d.bin"
    assert run("gen", "tall-dense", "--scale", 8192, "--seed", 0, "--out", out) == 0
    M = mmio.read_dense(out)
    assert (M.nrows, M.ncols) == (256, 512)


def _small_mtx(tmp_path, seed=3):
    p = tmp_path / "in.mtx"
    assert run("gen", "tall-sparse", "--scale", 16384, "--seed", seed,
               "--out", p) == 0  # 128 x 512
    return p


def test_gram_threads_identical_output(tmp_path):
    src = _small_mtx(tmp_path)
    outs = []
    report = tmp_path / "r.csv"
    for t in (1, 4):
        out = tmp_path / f"g{t}.bin"
        assert run("gram", "--in", src, "--gram-algo", "rowpart",
                   "--threads", t, "--out", out, "--report", report) == 0
        outs.append(mmio.read_dense(out).array)
    denom = np.linalg.norm(outs[0])
    assert np.linalg.norm(outs[0] - outs[1]) <= 1e-12 * denom
    lines = report.read_text().strip().splitlines()
    assert lines[0].startswith("operation,")
    assert len(lines) == 3  # header + both runs


def test_gram_lowmem_threads_bitwise(tmp_path):
    src = _small_mtx(tmp_path)
    outs = []
    for t in (1, 8):
        out = tmp_path / f"l{t}.bin"
        assert run("gram", "--in", src, "--gram-algo", "lowmem",
                   "--threads", t, "--out", out) == 0
        outs.append(mmio.read_dense(out).array)
    assert np.array_equal(outs[0], outs[1])


def test_sketch_cs_and_cg_m0_agree(tmp_path):
    src = _small_mtx(tmp_path)
    o1, o2 = tmp_path / "cs.bin", tmp_path / "cg.bin"
    assert run("sketch-cs", "--in", src, "--r", 64, "--seed", 5, "--out", o1) == 0
    assert run("sketch-cg", "--in", src, "--m", 0, "--r", 64, "--seed", 5,
               "--out", o2) == 0
    assert np.array_equal(mmio.read_dense(o1).array, mmio.read_dense(o2).array)


def test_sketch_gauss_runs_and_reports(tmp_path):
    src = _small_mtx(tmp_path)
    out = tmp_path / "gs.bin"
    rep = tmp_path / "rep.csv"
    assert run("sketch-gauss", "--in", src, "--m", "2d", "--seed", 1,
               "--out", out, "--report", rep) == 0
    M = mmio.read_dense(out)
    assert (M.nrows, M.ncols) == (1024, 512)
    assert rep.exists()


def test_rownorms_cli(tmp_path, gen):
    src = _small_mtx(tmp_path)
    A = mmio.read_matrix_market(src)
    B = gen.standard_normal((A.ncols, 8))
    bfile = tmp_path / "B.bin"
    mmio.write_dense(bfile, B)
    out = tmp_path / "x.bin"
    assert run("rownorms", "--in", src, "--b", bfile, "--out", out) == 0
    x = mmio.read_vector(out)
    want = ((A.to_dense() @ B) ** 2).sum(axis=1)
    assert np.linalg.norm(x - want) <= 1e-10 * np.linalg.norm(want)


def _skinny_mtx(tmp_path, gen, n=300, d=10):
    # Small column count: the SVD-backed commands run at app scale.
    from conftest import random_csr

    A = random_csr(gen, n, d, 0.3)
    p = tmp_path / "skinny.mtx"
    mmio.write_matrix_market(p, A)
    return p, A


def test_css_cli(tmp_path, gen):
    src, A = _skinny_mtx(tmp_path, gen)
    out = tmp_path / "sel.txt"
    assert run("css", "--in", src, "--k", 4, "--seed", 2, "--out", out) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    assert len(lines) == A.ncols
    sel = [int(x) for x in lines]
    assert len(set(sel)) == A.ncols


def test_lstsq_cli(tmp_path, gen):
    src, A = _skinny_mtx(tmp_path, gen)
    b = gen.standard_normal(A.nrows)
    bfile = tmp_path / "b.bin"
    mmio.write_vector(bfile, b)
    out = tmp_path / "x.bin"
    assert run("lstsq", "--in", src, "--b", bfile, "--algo", "gram",
               "--out", out) == 0
    x = mmio.read_vector(out)
    want, *_ = np.linalg.lstsq(A.to_dense(), b, rcond=None)
    assert np.linalg.norm(x - want) <= 1e-6 * np.linalg.norm(want)


def test_leverage_cli(tmp_path, gen):
    src, A = _skinny_mtx(tmp_path, gen)
    out = tmp_path / "theta.bin"
    assert run("leverage", "--in", src, "--algo", "exact", "--out", out) == 0
    theta = mmio.read_vector(out)
    assert theta.shape == (A.nrows,)
    assert theta.min() >= -1e-12 and theta.max() <= 1.0 + 1e-8


def test_rownorms_dense_input_cli(tmp_path, gen):
    a = gen.standard_normal((40, 6))
    B = gen.standard_normal((6, 3))
    afile, bfile, out = tmp_path / "a.bin", tmp_path / "B.bin", tmp_path / "x.bin"
    mmio.write_dense(afile, a)
    mmio.write_dense(bfile, B)
    assert run("rownorms", "--in", afile, "--b", bfile, "--out", out) == 0
    want = ((a @ B) ** 2).sum(axis=1)
    assert np.linalg.norm(mmio.read_vector(out) - want) <= 1e-10 * np.linalg.norm(want)


def test_sketch_gauss_dense_input_cli(tmp_path, gen):
    from sketchlab.gaussian import sketch_gaussian_dense

    a = gen.standard_normal((30, 4))
    afile, out = tmp_path / "a.bin", tmp_path / "c.bin"
    mmio.write_dense(afile, a)
    assert run("sketch-gauss", "--in", afile, "--m", 12, "--seed", 5,
               "--out", out) == 0
    want = sketch_gaussian_dense(a, 12, seed=5)
    assert np.array_equal(mmio.read_dense(out).array, want)


def test_gram_accum_beta_cli(tmp_path, gen):
    src = _small_mtx(tmp_path)
    A = mmio.read_matrix_market(src)
    c0 = gen.standard_normal((A.ncols, A.ncols))
    accum, out = tmp_path / "c0.bin", tmp_path / "c.bin"
    mmio.write_dense(accum, c0)
    assert run("gram", "--in", src, "--alpha", 2.0, "--beta", -0.5,
               "--accum", accum, "--out", out) == 0
    want = 2.0 * A.to_dense().T @ A.to_dense() - 0.5 * c0
    got = mmio.read_dense(out).array
    assert np.linalg.norm(got - want) <= 1e-12 * np.linalg.norm(want)


def test_sketch_cs_variants_cli(tmp_path):
    src = _small_mtx(tmp_path)
    o1, o2 = tmp_path / "coo.bin", tmp_path / "bccs.bin"
    assert run("sketch-cs", "--in", src, "--r", 48, "--seed", 3,
               "--variant", "coo", "--out", o1) == 0
    assert run("sketch-cs", "--in", src, "--r", 48, "--seed", 3,
               "--variant", "bccs", "--out", o2) == 0
    assert np.array_equal(mmio.read_dense(o1).array, mmio.read_dense(o2).array)


def test_leverage_sketched_cli(tmp_path, gen):
    src, A = _skinny_mtx(tmp_path, gen, n=400, d=6)
    out = tmp_path / "theta.bin"
    assert run("leverage", "--in", src, "--algo", "sketched", "--m", 0,
               "--r", 720, "--r2", 64, "--seed", 4, "--out", out) == 0
    theta = mmio.read_vector(out)
    from sketchlab.leverage import leverage_exact

    exact = leverage_exact(A).theta
    mask = exact >= 1.0 / A.nrows
    assert np.abs(theta[mask] - exact[mask]).max() / exact[mask].max() <= 0.5


def test_balance_cli(tmp_path):
    out = tmp_path / "bal.csv"
    assert run("balance", "--n", 2000, "--r", 64, "--p", 4, "--trials", 20,
               "--seed", 3, "--out", out) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "trial,worker,Y,bound,violated"
    assert len(lines) == 1 + 20 * 4
    total = 2000 * 26
    for t in range(20):
        rows = lines[1 + t * 4: 1 + (t + 1) * 4]
        assert sum(int(r.split(",")[2]) for r in rows) == total


def test_bench_smoke(tmp_path):
    rep = tmp_path / "bench.csv"
    assert run("bench", "gram-rowpart", "--preset", "tall-sparse",
               "--scale", 16384, "--threads", "1", "--backends", "numpy",
               "--report", rep) == 0
    lines = rep.read_text().strip().splitlines()
    assert lines[0].split(",")[:6] == ["operation", "backend", "preset", "n", "d", "m"]
    assert len(lines) == 1 + 15  # 3 rounds of 5, warm-up excluded


def test_cli_error_paths(tmp_path):
    assert run("gram", "--in", tmp_path / "missing.mtx",
               "--out", tmp_path / "o.bin") == 1
    with pytest.raises(SystemExit) as ei:
        run("gram", "--nonsense")
    assert ei.value.code == 2


def test_env_seed(tmp_path, monkeypatch):
    src = _small_mtx(tmp_path)
    o1, o2, o3 = (tmp_path / f"{i}.bin" for i in range(3))
    monkeypatch.setenv("SKETCHLAB_SEED", "9")
    assert run("sketch-cs", "--in", src, "--r", 32, "--out", o1) == 0
    assert run("sketch-cs", "--in", src, "--r", 32, "--seed", 9, "--out", o2) == 0
    monkeypatch.setenv("SKETCHLAB_SEED", "10")
    assert run("sketch-cs", "--in", src, "--r", 32, "--out", o3) == 0
    a, b, c = (mmio.read_dense(p).array for p in (o1, o2, o3))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
