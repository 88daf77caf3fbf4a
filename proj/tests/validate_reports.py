"""Run the CLI on every example spec and validate inputs and reports against the schemas."""

import json
import pathlib
import subprocess
import sys

import jsonschema

COMMANDS = {
    "verify_overlap.json": ["verify", "expect"],
    "reduce_uniform.json": ["reduce"],
    "expect_mixture.json": ["expect", "verify", "reduce"],
    "evolve_spin1.json": ["evolve"],
    "moments_d5.json": ["moments"],
}


def main() -> int:
    cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
    spec_schema = json.loads((root / "docs/spec.schema.json").read_text())
    report_schema = json.loads((root / "docs/report.schema.json").read_text())
    failures = 0
    for name, commands in COMMANDS.items():
        path = root / "specs" / name
        jsonschema.validate(json.loads(path.read_text()), spec_schema)
        for command in commands:
            proc = subprocess.run([cli, command, "--spec", str(path)], capture_output=True, text=True)
            if proc.returncode != 0:
                print(f"FAIL {name} {command}: exit {proc.returncode}\n{proc.stderr}")
                failures += 1
                continue
            try:
                jsonschema.validate(json.loads(proc.stdout), report_schema)
            except jsonschema.ValidationError as e:
                print(f"FAIL {name} {command}: {e.message}")
                failures += 1
                continue
            print(f"ok   {name} {command}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
