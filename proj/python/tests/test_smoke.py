# phishhook: phishing smart-contract detection from EVM bytecode
# Copyright 2026 The phishhook Authors.
# SPDX-License-Identifier: Apache-2.0

import math
import random

import numpy as np
import pytest

import phishhook


def test_disassemble_golden():
    rows = phishhook.disassemble("0x6080604052")
    assert rows == [
        (0, "PUSH1", "0x80", 3, False),
        (2, "PUSH1", "0x40", 3, False),
        (4, "MSTORE", None, 3, False),
    ]
    assert phishhook.disassemble(bytes([0x60, 0x80])) == [(0, "PUSH1", "0x80", 3, False)]
    assert phishhook.opcode_counts("6080604052") == {"PUSH1": 2, "MSTORE": 1}


def test_errors_carry_kind():
    with pytest.raises(phishhook.PhishhookError, match="^decode: "):
        phishhook.disassemble("0x6")


def _blobs(n, seed):
    rng = np.random.default_rng(seed)
    y = np.array([i % 2 for i in range(n)])
    x = rng.normal(size=(n, 4)) + 2.5 * y[:, None]
    return x, y


@pytest.mark.parametrize("family", ["rf", "gbdt", "logreg", "svm", "knn"])
def test_train_predict_save(family, tmp_path):
    x, y = _blobs(80, 1)
    extra = {"n_trees": 20} if family in ("rf", "gbdt") else {}
    columns = ["ADD", "CALL", "GAS", "SSTORE"]
    model = phishhook.train(x, y, family=family, columns=columns, seed=3, **extra)
    assert model.family == family
    assert model.n_features == 4
    accuracy = float(np.mean(model.predict(x) == y))
    assert accuracy > 0.9
    proba = model.predict_proba(x)
    assert proba.shape == (80,) and np.all((proba >= 0) & (proba <= 1))
    for binary in (False, True):
        path = tmp_path / f"model_{binary}"
        model.save(str(path), binary=binary)
        again = phishhook.load_model(str(path))
        np.testing.assert_array_equal(again.predict_proba(x), proba)
    unnamed = phishhook.train(x, y, family=family, seed=3, **extra)
    with pytest.raises(phishhook.PhishhookError, match="^validation: "):
        unnamed.save(str(tmp_path / "unnamed"))


def test_shap_local_accuracy():
    x, y = _blobs(60, 2)
    model = phishhook.train(x, y, family="rf", n_trees=15)
    base, values, raw = model.shap(x[0])
    assert math.isclose(base + sum(values), raw, abs_tol=1e-9)
    with pytest.raises(phishhook.PhishhookError, match="^shape: "):
        model.predict(x[:, :3])
    with pytest.raises(phishhook.PhishhookError, match="^validation: "):
        phishhook.train(x, y, family="rf", bogus=1)


def test_statistics_match_scipy():
    stats = pytest.importorskip("scipy.stats")
    rng = random.Random(5)
    groups = [[rng.gauss(mu, 1.0) for _ in range(20)] for mu in (0.0, 0.5, 1.5)]
    h, p = phishhook.kruskal_wallis(groups)
    ref = stats.kruskal(*groups)
    assert math.isclose(h, ref.statistic, rel_tol=1e-12)
    assert math.isclose(p, ref.pvalue, rel_tol=1e-9)
    f, fp = phishhook.friedman(groups)
    ref = stats.friedmanchisquare(*groups)
    assert math.isclose(f, ref.statistic, rel_tol=1e-12)
    assert math.isclose(fp, ref.pvalue, rel_tol=1e-9)
    t, tp = phishhook.wilcoxon(groups[0][:12], groups[1][:12])
    ref = stats.wilcoxon(groups[0][:12], groups[1][:12], method="exact")
    assert t == ref.statistic
    assert math.isclose(tp, ref.pvalue, rel_tol=1e-12)
    w, wp = phishhook.shapiro_wilk(groups[2])
    ref = stats.shapiro(groups[2])
    assert abs(w - ref.statistic) < 1e-5
    assert math.isclose(wp, ref.pvalue, rel_tol=1e-3)
    assert phishhook.holm([0.01, 0.04]) == pytest.approx([0.02, 0.04])
    assert phishhook.cliffs_delta([4, 5, 6], [1, 2, 3])[0] == 1.0
    assert len(phishhook.dunn(groups)) == 3
    assert phishhook.aut([0.9, 0.8, 1.0]) == pytest.approx(0.875, abs=1e-12)


def test_metrics():
    m = phishhook.metrics([1] * 6 + [1] * 2 + [0] * 4 + [0] * 8, [1] * 6 + [0] * 2 + [1] * 4 + [0] * 8)
    assert m["accuracy"] == pytest.approx(0.7)
    assert m["precision"] == pytest.approx(0.75)
    assert m["recall"] == pytest.approx(0.6)


def test_corpus_features_and_cv(tmp_path):
    rng = random.Random(7)
    lines = ["address,bytecode,label"]
    for i in range(40):
        phishing = i % 2 == 0
        ops = ["60016001", "6000", "5a", "f1" if phishing else "01", "55" if phishing else "50"]
        body = "".join(rng.choice(ops) for _ in range(40))
        if phishing:
            body += "5af1" * 6
        lines.append(f"0x{i + 1:040x},0x{body},{'phishing' if phishing else 'benign'}")
    path = tmp_path / "corpus.csv"
    path.write_text("\n".join(lines) + "\n")
    x, y, ids, columns = phishhook.histogram_features(str(path))
    assert x.shape == (40, len(columns)) and y.sum() == 20 and len(ids) == 40
    assert columns == sorted(columns)
    records = phishhook.cross_validate(str(path), "rf", k=4, seeds=[0, 1], n_trees=10)
    assert len(records) == 8
    assert sum(r["accuracy"] for r in records) / 8 > 0.8
