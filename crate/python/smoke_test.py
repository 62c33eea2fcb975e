"""Smoke test for the cmgrade_py extension.

Build first with `cargo build -p cmgrade-py` (or `--release`); the script
loads the shared library straight from target/.
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    names = ["libcmgrade_py.so", "libcmgrade_py.dylib", "cmgrade_py.dll"]
    for profile in ("release", "debug"):
        for n in names:
            p = ROOT / "target" / profile / n
            if p.exists():
                loader = importlib.machinery.ExtensionFileLoader("cmgrade_py", str(p))
                spec = importlib.util.spec_from_file_location("cmgrade_py", p, loader=loader)
                mod = importlib.util.module_from_spec(spec)
                loader.exec_module(mod)
                return mod
    sys.exit("cmgrade_py not built; run `cargo build -p cmgrade-py` first")


def main():
    cm = load()

    r = cm.Ring(["x", "y", "z"], ["x*y", "x*z"])
    assert r.krull_dim() == 2
    a = r.ideal(["y"])
    assert a.height() == 0
    primes = sorted(str(p) for p in a.minimal_primes())
    assert primes == ["(y, x)", "(z, y)"], primes
    assert r.ideal(["y", "z"]).grade()["value"] == 0
    assert r.ideal(["x", "y"]).grade("ext")["value"] == r.ideal(["x", "y"]).grade("koszul")["value"]

    p = cm.Ring(["x", "y"])
    g = p.ideal(["x", "y"]).grade("hgrade", n_max=2)
    assert g["value"] == 2 and g["witness"]["kind"] == "stabilization"
    assert math.isinf(p.ideal(["1"]).grade()["value"])
    assert p.ideal(["x"]).grade(module=[["x"]])["value"] == 0

    assert cm.cm_check(p, "fg")["verdict"] == "pass"
    assert cm.cm_check(r, "fg")["verdict"] == "fail"
    audit = cm.implication_audit(cm.Ring(["a", "b", "c"], ["b^2 - a*c"]))
    assert audit["violations"] == []

    v, gens = cm.veronese(["x", "y"], 2)
    assert gens == ["x^2", "x*y", "y^2"]
    assert v.relations == ["t1^2 - t0*t2"]

    assert cm.valuation_conditions(1)["ideals"] is True
    assert cm.valuation_conditions(2)["ideals"] is False
    rep = cm.perfect_closure(2, ["x", "z"], 1, ["x^(1/2)"])
    assert rep["grade"] == rep["next_grade"] == 1

    s = cm.Session()
    out = s.exec("ring R = GF(2)[x1,x2,x3] / (x1, x2^2, x3^3); grade koszul irrelevant expect 0;")
    assert out[-1]["pass"] is True
    assert "R" in s.names()

    try:
        cm.Ring(["x"], field="GF(4)")
    except cm.CmgradeError as e:
        assert "4" in str(e)
    else:
        raise AssertionError("GF(4) accepted")

    results = cm.run_corpus(["truncation"])
    assert len(results) == 3 and all(x["pass"] for x in results)
    print("cmgrade_py smoke test: ok")


if __name__ == "__main__":
    main()
