import json
import subprocess
import sys

import pytest


def satcurv_cli(*args):
    """The producer CLI; the harness only talks to it through files."""
    proc = subprocess.run(
        [sys.executable, "-m", "satcurv.cli", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Small labeled train/test datasets plus a rewired copy of the test set."""
    root = tmp_path_factory.mktemp("corpus")
    satcurv_cli(
        "gen", "--k", "3", "--n", "12", "--alpha", "2.0", "--seed", "3",
        "--count", "12", "--label", "--out", str(root / "train"),
    )
    satcurv_cli(
        "gen", "--k", "3", "--n", "12", "--alpha", "2.0", "--seed", "4",
        "--count", "5", "--label", "--out", str(root / "test"),
    )
    manifest = json.loads((root / "test" / "manifest.json").read_text())
    for iters, name in ((8, "rewired"), (0, "rewired0")):
        out_dir = root / name
        out_dir.mkdir()
        for entry in manifest["instances"]:
            satcurv_cli(
                "rewire", "--in", str(root / "test" / entry["path"]),
                "--iters", str(iters), "--p", "0.3", "--seed", "0",
                "--out", str(out_dir / entry["path"]),
            )
        (out_dir / "manifest.json").write_text(json.dumps(manifest))
    return root
