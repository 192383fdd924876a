# Copyright 2026 The Retrofit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import pathlib

import pytest

import retrofit

ROOT = pathlib.Path(__file__).resolve().parents[2]


def test_lambda_listing_matches_golden():
    golden = ROOT / "tests" / "golden"
    out = retrofit.transform_source("lambda.cpp", (golden / "lambda.in.cpp").read_text())
    assert not out["failed"]
    assert "LambdaFunctor__12_1" in out["text"]
    assert retrofit.find_features(out["text"]) == []
    assert retrofit.check_syntax(out["text"]) == []
    assert out["edit_counts"]["lambda"] > 0


def test_features_and_markers():
    assert retrofit.find_features("int x = 1;") == []
    assert retrofit.find_features("struct A { int a = 1; };") == ["member-init"]
    assert retrofit.check_syntax("[[x]] int a;") == ["attribute-remains"]


def test_log_lists_only_needed_passes():
    out = retrofit.transform_source("a.cpp", "void f() { auto x = 1; }")
    passes = {entry["pass"] for entry in out["log"]}
    assert "transform_auto" in passes
    assert "transform_lambda" not in passes
    assert out["trace"].startswith("# retrofit trace 1")


def test_failure_is_reported():
    out = retrofit.transform_source("bad.cpp", "void f() {\n")
    assert out["failed"]
    assert out["failure"]


def write_project(tmp_path):
    proj = tmp_path / "proj"
    (proj / "src").mkdir(parents=True)
    (proj / "src" / "a.cpp").write_text("int a() {\n  auto v = 2;\n  return v;\n}\n")
    db = proj / "compile_commands.json"
    db.write_text(json.dumps([{
        "directory": str(proj / "src"),
        "command": "c++ -c a.cpp",
        "file": str(proj / "src" / "a.cpp"),
    }]))
    return proj, db


def test_project_run_status_and_trace(tmp_path):
    proj, db = write_project(tmp_path)
    work = tmp_path / "work"
    assert [reasons for _, reasons in retrofit.stale(str(proj), str(db), str(work))] == [["new"]]
    summary = retrofit.run(str(proj), str(db), str(work))
    assert summary["exit_code"] == 0
    assert summary["transformed"] == 1
    assert "int v = 2;" in (work / "src" / "a.cpp").read_text()
    assert retrofit.stale(str(proj), str(db), str(work)) == []
    assert retrofit.trace(str(work / "src" / "a.cpp"), 1) == (str(proj / "src" / "a.cpp"), 1, True)
    path, line, exact = retrofit.trace(str(work / "src" / "a.cpp"), 2)
    assert (line, exact) == (2, False)
    assert retrofit.run(str(proj), str(db), str(work))["transformed"] == 0


def test_errors_raise(tmp_path):
    proj, db = write_project(tmp_path)
    with pytest.raises(retrofit.RetrofitError):
        retrofit.run(str(proj), str(db), str(proj))
    retrofit.run(str(proj), str(db), str(tmp_path / "work"))
    with pytest.raises(retrofit.RetrofitError):
        retrofit.trace(str(tmp_path / "work" / "src" / "a.cpp"), 99)
