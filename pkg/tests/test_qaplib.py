import itertools

import numpy as np
import pytest

from gmrelax.core import Permutation
from gmrelax.oracle import brute_force_gm
from gmrelax.qaplib import (
    QapInstance,
    QaplibParseError,
    load_suite,
    benchmark_manifest,
    parse_qaplib,
    qap_cost,
    qap_cost_frobenius,
    serialize_qaplib,
)

from conftest import qaplib_data_dir

MINIMAL = "2 0 1 1 0 0 3 3 0"


def read_solution_file(path):
    """QAPLIB .sln layout: 'n optimum' then the permutation, 1-based."""
    tokens = path.read_text().split()
    n, opt = int(tokens[0]), float(tokens[1])
    perm = np.array([int(t) - 1 for t in tokens[2 : 2 + n]])
    return n, opt, Permutation(perm)


class TestParse:
    def test_minimal_hand_instance(self):
        inst = parse_qaplib(MINIMAL, name="tiny")
        assert inst.n == 2
        assert inst.flow.tolist() == [[0.0, 1.0], [1.0, 0.0]]
        assert inst.distance.tolist() == [[0.0, 3.0], [3.0, 0.0]]

    def test_arbitrary_whitespace(self):
        inst = parse_qaplib("2\n\n0 1\n1 0\n\n0 3\n3 0\n")
        assert inst.n == 2

    def test_truncated_file_reports_counts(self):
        with pytest.raises(QaplibParseError, match="expected 9 tokens for n=2, found 7"):
            parse_qaplib("2 0 1 1 0 0 3")

    def test_non_numeric_token_reports_position(self):
        with pytest.raises(QaplibParseError, match="position 3"):
            parse_qaplib("2 0 1 x 0 0 3 3 0")

    def test_round_trip(self, rng):
        inst = QapInstance(
            name="rt", n=4, flow=rng.integers(0, 9, (4, 4)).astype(float),
            distance=rng.integers(0, 9, (4, 4)).astype(float),
        )
        again = parse_qaplib(serialize_qaplib(inst), name="rt")
        assert np.array_equal(again.flow, inst.flow)
        assert np.array_equal(again.distance, inst.distance)


class TestQapCost:
    def test_zero_flow(self, rng):
        inst = QapInstance("z", 3, np.zeros((3, 3)), rng.random((3, 3)))
        for _ in range(5):
            assert qap_cost(inst, Permutation.random(3, rng)) == 0.0

    def test_hand_instance_identity(self):
        inst = parse_qaplib(MINIMAL)
        assert qap_cost(inst, Permutation.identity(2)) == 6.0

    def test_expansion_identity(self, rng):
        inst = QapInstance(
            "e", 5, rng.random((5, 5)), rng.random((5, 5))
        )
        for _ in range(10):
            p = Permutation.random(5, rng)
            fro = qap_cost_frobenius(inst, p)
            expected = (
                float(np.sum(inst.flow**2))
                + float(np.sum(inst.distance**2))
                - 2.0 * qap_cost(inst, p)
            )
            assert fro == pytest.approx(expected, rel=1e-6)

    def test_min_cost_agrees_with_matching_reformulation(self, rng):
        # minimizing qap_cost over permutations is the same problem as
        # brute-force matching on the pair (distance, -flow)
        n = 6
        inst = QapInstance(
            "bf", n, rng.integers(0, 9, (n, n)).astype(float),
            rng.integers(0, 9, (n, n)).astype(float),
        )
        costs = {
            p: qap_cost(inst, Permutation(np.array(p)))
            for p in itertools.permutations(range(n))
        }
        best = min(costs.values())
        direct_argmin = {p for p, c in costs.items() if c <= best + 1e-9}
        gm = brute_force_gm(inst.distance, -inst.flow)
        gm_argmin = {tuple(p.map.tolist()) for p in gm.optimizers}
        assert gm_argmin == direct_argmin
        const = float(np.sum(inst.flow**2) + np.sum(inst.distance**2))
        assert gm.optimal_value == pytest.approx(const + 2.0 * best, rel=1e-9)


class TestChr12c:
    def test_published_optimum(self):
        data_dir = qaplib_data_dir()
        dat = data_dir / "chr12c.dat"
        sln = data_dir / "chr12c.sln"
        if not (dat.is_file() and sln.is_file()):
            pytest.skip("chr12c.dat/.sln not available")
        inst = parse_qaplib(dat.read_text(), name="chr12c")
        assert inst.n == 12
        n, opt, perm = read_solution_file(sln)
        assert n == 12
        assert qap_cost(inst, perm) == opt == 11156


class TestLoadSuite:
    def test_empty_directory(self, tmp_path):
        instances, skipped = load_suite(tmp_path)
        assert instances == [] and skipped == []

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_suite(tmp_path / "nope")

    def test_valid_plus_corrupt(self, tmp_path):
        (tmp_path / "good.dat").write_text(MINIMAL)
        (tmp_path / "bad.dat").write_text("3 1 2")
        instances, skipped = load_suite(tmp_path)
        assert [i.name for i in instances] == ["good"]
        assert len(skipped) == 1 and skipped[0][0] == "bad.dat"

    def test_sorted_by_name(self, tmp_path):
        (tmp_path / "zz.dat").write_text(MINIMAL)
        (tmp_path / "aa.dat").write_text(MINIMAL)
        instances, _ = load_suite(tmp_path)
        assert [i.name for i in instances] == ["aa", "zz"]

    def test_manifest_lists_sixteen(self):
        names = benchmark_manifest()
        assert len(names) == 16
        assert "chr12c" in names and "tai35a" in names
