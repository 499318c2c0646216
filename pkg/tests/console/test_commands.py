import json

import pytest

from cleo import CommandTester

from qkdnet.console import Application

from ..conftest import fixture_path
from ..conftest import guaranteed
from ..conftest import two_nodes
from ..conftest import write_scenario


@pytest.fixture
def app():
    return Application()


def execute(app, name, args):
    tester = CommandTester(app.find(name))
    status = tester.execute(args)

    return status, tester.io.fetch_output(), tester.io.fetch_error()


def test_run(app, tmpdir):
    out = str(tmpdir.join("results"))
    status, output, _ = execute(
        app, "run", "--scenario {} --out {}".format(fixture_path("ring5.json"), out)
    )

    assert status == 0
    assert "1 circuit(s) established, 0 rejected" in output
    assert "Results written to {}".format(out) in output

    metrics = json.loads(tmpdir.join("results", "metrics.json").read())
    assert metrics["circuits"]["vc-contract"]["reroutes"] == 1
    assert metrics["network"]["seed"] == 42
    assert not tmpdir.join("results", "trace.jsonl").exists()


def test_run_is_reproducible(app, tmpdir):
    for name in ("first", "second"):
        status, _, _ = execute(
            app,
            "run",
            "--scenario {} --out {}".format(
                fixture_path("access.json"), str(tmpdir.join(name))
            ),
        )
        assert status == 0

    assert (
        tmpdir.join("first", "metrics.json").read()
        == tmpdir.join("second", "metrics.json").read()
    )


def test_run_with_seed_and_samples(app, tmpdir):
    path = write_scenario(tmpdir, two_nodes([guaranteed("A", "B")], duration=3.0))
    status, _, _ = execute(
        app,
        "run",
        "--scenario {} --out {} --seed 7 --sample-interval 0.5".format(
            path, str(tmpdir)
        ),
    )
    metrics = json.loads(tmpdir.join("metrics.json").read())

    assert status == 0
    assert metrics["network"]["seed"] == 7
    assert len(metrics["samples"]) == 5


def test_run_frame_trace(app, tmpdir):
    path = write_scenario(tmpdir, two_nodes([guaranteed("A", "B")], duration=1.0))
    status, _, _ = execute(
        app, "run", "--scenario {} --out {} --trace frame".format(path, str(tmpdir))
    )
    records = [
        json.loads(line)
        for line in tmpdir.join("trace.jsonl").read().splitlines()
    ]
    kinds = {record["kind"] for record in records}

    assert status == 0
    assert {"activation", "frame", "delivery"} <= kinds
    assert [r["ordinal"] for r in records] == sorted(r["ordinal"] for r in records)


def test_run_invalid_scenario(app, tmpdir):
    status, _, error = execute(
        app,
        "run",
        "--scenario {} --out {}".format(
            fixture_path("invalid_endpoint.json"), str(tmpdir)
        ),
    )

    assert status == 1
    assert "topology.links[0].endpoints[1]" in error
    assert not tmpdir.join("metrics.json").exists()


def test_run_missing_file(app, tmpdir):
    status, _, error = execute(
        app,
        "run",
        "--scenario {} --out {}".format(str(tmpdir.join("nope.json")), str(tmpdir)),
    )

    assert status == 2
    assert "Cannot read" in error


@pytest.mark.parametrize(
    "args",
    ["", "--trace everything", "--seed abc", "--sample-interval=-1"],
)
def test_run_bad_options(app, tmpdir, args):
    scenario = "" if args == "" else "--scenario {} ".format(fixture_path("chain.json"))
    status, _, _ = execute(
        app, "run", "{}--out {} {}".format(scenario, str(tmpdir), args).strip()
    )

    assert status == 1


def test_validate(app):
    status, output, _ = execute(
        app, "validate", "--scenario {}".format(fixture_path("ring5.json"))
    )

    assert status == 0
    assert output.strip() == "OK"


def test_validate_warns(app):
    status, output, _ = execute(
        app, "validate", "--scenario {}".format(fixture_path("long_link.json"))
    )

    assert status == 0
    assert "Warning: topology.links[0]: length 150.0 km exceeds d_max 120.0 km" in output
    assert output.strip().endswith("OK")


def test_validate_invalid(app):
    status, _, error = execute(
        app, "validate", "--scenario {}".format(fixture_path("duplicate_node.json"))
    )

    assert status == 1
    assert "duplicate node id" in error


def test_validate_mistyped_config(app, tmpdir):
    path = write_scenario(tmpdir, two_nodes(w_load=None))
    status, _, error = execute(app, "validate", "--scenario {}".format(path))

    assert status == 1
    assert "config.w_load" in error


def test_validate_not_json(app, tmpdir):
    path = tmpdir.join("broken.json")
    path.write("{")
    status, _, error = execute(app, "validate", "--scenario {}".format(str(path)))

    assert status == 1
    assert "not a JSON document" in error


def test_sweep(app, tmpdir):
    status, output, _ = execute(
        app,
        "sweep",
        "--scenario {} --param link.length --range 0:30:15 --seeds 1,2 --out {}".format(
            fixture_path("length_sweep.json"), str(tmpdir)
        ),
    )
    lines = tmpdir.join("sweep.csv").read().splitlines()

    assert status == 0
    assert "6 run(s) written to" in output
    assert lines[0].startswith("parameter,value,seed,mean_key_rate")
    assert len(lines) == 7


def test_sweep_values(app, tmpdir):
    status, _, _ = execute(
        app,
        "sweep",
        "--scenario {} --param links.A-B.qber --values 0,0.15 --out {}".format(
            fixture_path("length_sweep.json"), str(tmpdir)
        ),
    )
    lines = tmpdir.join("sweep.csv").read().splitlines()

    assert status == 0
    assert len(lines) == 3
    assert lines[2].startswith("links.A-B.qber,0.15,0,0.0,")


@pytest.mark.parametrize(
    "args",
    [
        "--param bogus --values 1",
        "--param link.length",
        "--param link.length --range 1:0:1",
        "--param link.length --values 0 --seeds x",
        "--param admission_factor --values 2",
    ],
)
def test_sweep_invalid(app, tmpdir, args):
    status, _, error = execute(
        app,
        "sweep",
        "--scenario {} --out {} {}".format(
            fixture_path("length_sweep.json"), str(tmpdir), args
        ),
    )

    assert status == 1
    assert error
    assert not tmpdir.join("sweep.csv").exists()
