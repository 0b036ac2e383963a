import csv
import io
import json
import math

import numpy as np

from dyadic_lorentz.report import VerificationReport, dumps_reports, jsonable, reports_to_csv


def test_json_shape():
    rep = VerificationReport("x", {"a": 1}, {"v": np.float64(2.5)}, {"v": 3}, np.bool_(True))
    obj = rep.to_json()
    assert obj == {"check": "x", "params": {"a": 1}, "observed": {"v": 2.5}, "bound": {"v": 3}, "pass": True}
    assert VerificationReport.from_json(obj).to_json() == obj


def test_nonfinite_values():
    assert jsonable([math.inf, -math.inf, math.nan]) == ["inf", "-inf", "nan"]
    assert jsonable(np.array([1, 2])) == [1, 2]
    text = dumps_reports({"r": VerificationReport("y", observed={"q": math.inf})})
    assert json.loads(text)["r"]["observed"]["q"] == "inf"


def test_bool():
    assert not VerificationReport("z", passed=False)


def test_csv_rows():
    reps = [VerificationReport("a", {"p": 1}, {"x": 1.5}, {}, True),
            VerificationReport("a", {"p": 2}, {"x": 2.5, "ys": [1, 2]}, {}, False)]
    rows = list(csv.DictReader(io.StringIO(reports_to_csv(reps))))
    assert [r["pass"] for r in rows] == ["True", "False"]
    assert rows[1]["observed.x"] == "2.5" and rows[1]["observed.ys"] == "[1, 2]"
    assert rows[0]["observed.ys"] == ""
