#!/usr/bin/env python3
"""Run the CLI over a grid of inputs and validate every JSON report against schema/v1."""
import json
import pathlib
import subprocess
import sys

import jsonschema
import referencing

SCHEMA_DIR = pathlib.Path(__file__).resolve().parent.parent / "schema" / "v1"


def registry():
    resources = []
    for path in SCHEMA_DIR.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], referencing.Resource.from_contents(doc)))
    return referencing.Registry().with_resources(resources)


def main(cli):
    reg = registry()
    runs = []
    for q in (2, 3, 4, 5):
        for cmd in ("component-groups", "cuspidal", "quotient-graph", "quaternion", "verify"):
            runs.append((cmd, [cmd, "--q", str(q), "--format", "json"]))
    runs += [("census", ["drinfeld-census", "--q", "2", "--place", "T"]),
             ("census", ["drinfeld-census", "--q", "3", "--place", "T^2+1"]),
             ("census", ["drinfeld-census", "--q", "4", "--place", "T+1"])]
    failed = 0
    for schema, args in runs:
        out = subprocess.run([cli, *args], capture_output=True, text=True, check=True).stdout
        doc = json.loads(SCHEMA_DIR.joinpath(schema + ".json").read_text())
        errors = list(jsonschema.Draft202012Validator(doc, registry=reg).iter_errors(json.loads(out)))
        for e in errors[:5]:
            print(" ".join(args), ":", e.message, "at", list(e.absolute_path))
        failed += bool(errors)
    print(f"{len(runs) - failed}/{len(runs)} reports valid")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
