"""Smoke test for the jmcalc_py extension.

Builds the extension with cargo if no compiled module is importable, then
exercises the main entry points.
"""

import importlib
import json
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
HERE = pathlib.Path(__file__).resolve().parent


def load():
    try:
        return importlib.import_module("jmcalc_py")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "jmcalc-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libjmcalc_py.so"
    shutil.copy(lib, HERE / "jmcalc_py.so")
    sys.path.insert(0, str(HERE))
    return importlib.import_module("jmcalc_py")


def main():
    jm = load()

    t = jm.Triple("1/2", "3/2", "5/2")
    main_sum = t.main_decomposition()
    assert len(main_sum) == 11 and set(main_sum.values()) == {1}, main_sum
    assert "tri-abc(1/2,3/2,5/2)" not in main_sum

    sizes = [len(w) for w in t.filtration()]
    assert sizes == [2, 4, 4, 1], sizes

    cands = sorted(str(a) for a in t.ds_candidates())
    assert len(cands) == 3, cands

    assert t.verify_lemma("L4.2-mult2") == "pass"
    report = json.loads(t.report_json())
    assert report["summary"]["fail"] == 0 and report["summary"]["partial"] == 0, report["summary"]
    assert len(report["checks"]) == len(jm.check_ids())

    terms = jm.Expr("ind(d(1/2,1/2), sigma)").mu_star("1")
    assert len(terms) == 3, terms

    assert jm.multiplicity("d(-3/2,5/2)", "sigma", "ind(d(1/2,3/2)*d(1/2,5/2), sigma)") == "2"
    assert len(jm.decomposition("seg-times-strict", ["1/2", "3/2", "5/2"])) == 6

    a = jm.Atom("tri+(1/2,3/2,5/2)")
    assert a.is_discrete_series() and str(a) == "tri+(1/2,3/2,5/2)"

    try:
        jm.Triple("3/2", "1/2", "5/2")
    except ValueError:
        pass
    else:
        raise AssertionError("ordering violation accepted")

    print("python smoke test ok:", jm.__version__)


if __name__ == "__main__":
    main()
