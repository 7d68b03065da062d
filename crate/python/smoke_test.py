"""Smoke test for the polemono extension module.

Build and run:
    cargo build --release -p polemono-py
    cp target/release/libpolemono.so python/polemono.so
    python3 python/smoke_test.py
or install with `maturin develop -m crates/python/Cargo.toml`.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import polemono  # noqa: E402


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok: {what}")


def main():
    f = polemono.Polynomial("(x^2+y^2)^4+(y^4+z^4)^2")
    check(f.degree == 8, "torus curve has degree 8")
    check(len(f.gradient()) == 3, "gradient has three components")

    r = polemono.analyze(f)
    check((r.mu, r.tau) == (24, 24), "torus curve mu = tau = 24")
    check(r.q0 == 11, "torus curve q0 = 11")
    check(r.status == "certified-wh", "weighted homogeneous status")
    check(r.pole_spectrum(1) == [(14, 8, 1), (16, 8, 1), (18, 8, 1)], "Sp_P^1 of the torus curve")
    check((10, 8, 20) in r.pole_spectrum(0), "coefficient 20 at t^{10/8}")

    doc = json.loads(r.to_json())
    check(doc["schema"] == polemono.SCHEMA == "polemono/1", "JSON schema tag")
    check(r.to_json() == polemono.analyze(f).to_json(), "deterministic JSON")

    s = polemono.analyze("x^5+y^4*z+x^3*y^2", mode="full")
    check((8, 5) in s.bs_roots, "8/5 is a certified root for x^5+y^4z+x^3y^2")
    check(s.all_certified, "Euler certificate passes")

    for text, exc in [
        ("x^2*y", polemono.NonReducedError),
        ("x^3+y^3", polemono.CentralPencilError),
        ("x^2+y^3", polemono.NotHomogeneousError),
    ]:
        try:
            polemono.analyze(text)
        except exc:
            check(True, f"{text} raises {exc.__name__}")
        else:
            raise SystemExit(f"FAIL: {text} did not raise")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
