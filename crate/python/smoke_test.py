"""Builds the pyglq extension and checks a few GL(3,2) numbers through it.

    python3 python/smoke_test.py
"""

import importlib.util
import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build() -> pathlib.Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "glq-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libpyglq.so"
    if not lib.exists():
        sys.exit(f"missing {lib}")
    return lib


def load(lib: pathlib.Path):
    dest = pathlib.Path(tempfile.mkdtemp()) / "pyglq.so"
    shutil.copy(lib, dest)
    found = importlib.util.spec_from_file_location("pyglq", dest)
    mod = importlib.util.module_from_spec(found)
    found.loader.exec_module(mod)
    return mod


def main() -> None:
    glq = load(build())

    sizes = dict(glq.classes(2, 3))
    assert sum(sizes.values()) == 168, sizes

    assert glq.hoffman_bound(2, 3, 1, "points") == "24"
    assert glq.hoffman_bound(2, 3, 1, "spaces") == "24"

    code, docs = glq.verify(2, 3, 1, tasks="qt,weights,bound")
    assert code == 0, code
    docs = [json.loads(d) for d in docs]
    qt = docs[0]["result"]["direct"]["entries"]
    assert qt == [["1", "1"], ["-1", "0"]], qt
    assert all(d["schema_version"] == glq.SCHEMA_VERSION for d in docs)

    code, _ = glq.verify(6, 2)
    assert code == 2

    try:
        glq.verify(2, 3, mode="lines")
    except ValueError:
        pass
    else:
        raise AssertionError("bad mode accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
