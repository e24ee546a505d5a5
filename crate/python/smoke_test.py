"""Smoke test for the compiled extension: run after `maturin develop` in crates/python."""

import json

import tesstopo


def main() -> None:
    cubic = {"VE": 6, "EP": 4, "PV": 4, "xi": 0, "kappa": 0, "psi": 0, "tau": 0}
    d = tesstopo.derive(cubic)
    assert d["lambda_E"] == "3" and d["mu_ZV"] == "8", d

    feasible, flags, violations = tesstopo.classify(cubic)
    assert feasible and not violations, (flags, violations)

    ids = tesstopo.catalog_ids()
    assert "ex16_parallel_pyramids" in ids
    entry = tesstopo.catalog_entry("ex16_parallel_pyramids")
    measured = tesstopo.measure("parallel_pyramids")
    for key, value in entry.items():
        if key != "lambda_V" and value is not None:
            assert measured[key] == value, (key, measured[key], value)

    samples = tesstopo.sample_feasible(5, 7)
    assert len(samples) == 5
    assert samples == tesstopo.sample_feasible(5, 7)

    code, out, err = tesstopo.run_cli(["check", "--catalog", "ex04_stit"])
    assert code == 0, err
    assert json.loads(out)["feasible"] is True

    print("smoke test passed")


if __name__ == "__main__":
    main()
