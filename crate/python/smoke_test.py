"""Smoke test for the Python bindings.

Build and install first, e.g.
    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/cherednik_py-*.whl
"""

import json

import cherednik_py as ch


def main():
    r = ch.dunkl_commute_check("S3", 4)
    assert r["failure"] is None, r

    pbw = ch.pbw_dimension("B2", 2)
    assert pbw["rank"] == pbw["expected"] == 8 * 15, pbw

    euler = ch.euler_check("S3", t="1")
    assert all(ok for _, ok in euler["relations"]), euler

    satake = ch.satake_check("Z2", 4)
    assert satake["center_dim"] == satake["spherical_dim"] == 9, satake

    quasi = ch.quasi_check(1, 12)
    assert quasi["invariance"]["stable"]
    assert quasi["hilbert_series"]["numerator"] == [1, 0, 0, 1]
    assert ch.quasi_check(1, 12, c="1/3")["invariance"]["witness"] is not None

    kz = ch.kz_monodromy(3, ["1/10", "-0.05"], eta="0.2")
    assert kz["report"]["max_deviation"] < 1e-8, kz
    assert kz["roots"]["passed"]
    assert len(ch.kz_tau(4)) == 4

    assert ch.orbifold_group_order("g=0;2,3,5") == 60
    assert ch.orbifold_group_order("g=0;2,3,7") is None
    obs = ch.sphere_obstruction("g=0;2,3,3")
    assert obs["coefficients"] == [6, 6, 4, 4, 4, 4, 4, 4], obs
    assert ch.signature_verdict("g=0;2,2,2,2")["verdict"] == "expected-flat"

    assert ch.hecke_rank("cyclic", n=4)["rank_at_cap"] == 4
    assert ch.hecke_rank("A2")["rank_at_cap"] == 6

    sig = ch.OrbifoldSignature("g=0;2,3,4")
    assert (sig.genus, sig.orders, sig.geometry, sig.chi_orb) == (0, [2, 3, 4], "spherical", "1/12")
    try:
        ch.OrbifoldSignature("g=0;1")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid signature accepted")

    code, out, _ = ch.run_cli(["--json", "hecke", "group", "--signature", "g=0;2,3,3"])
    assert code == 0 and json.loads(out)["witness"]["group_order"] == 12
    code, _, err = ch.run_cli(["verify", "dunkl", "--group", "nope"])
    assert code == 2 and "unknown group" in err

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
