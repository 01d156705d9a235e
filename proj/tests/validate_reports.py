"""Runs every CLI command with --report json on the corpus and validates
each report against the shipped schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

from jsonschema import Draft202012Validator

NO_ROLES = """package Bare public
  system Top
  end Top;
  system implementation Top.impl
  end Top.impl;
end Bare;
"""


def main():
    cli, schema_dir, corpus_dir = sys.argv[1:4]
    solver = sys.argv[4] if len(sys.argv) > 4 else ""
    validators = {}
    for name in ("check", "verify", "claims", "generate"):
        schema = json.loads((pathlib.Path(schema_dir) / f"{name}.schema.json").read_text())
        Draft202012Validator.check_schema(schema)
        validators[name] = Draft202012Validator(schema)

    failures = []
    runs = 0

    bad = {"command": "verify", "root": "UAS.impl", "k": 5, "exit_code": 0,
           "results": [{"obligation": "x", "component_path": "y", "status": "bogus", "k": 1}]}
    if validators["verify"].is_valid(bad):
        failures.append("verify schema accepts an unknown status")

    def run(command, args, expect=None):
        nonlocal runs
        runs += 1
        p = subprocess.run([cli, command, "--report", "json", *args], capture_output=True, text=True)
        label = f"{command} {' '.join(args)}"
        try:
            report = json.loads(p.stdout)
        except json.JSONDecodeError as e:
            failures.append(f"{label}: not JSON ({e}): {p.stdout[:200]!r} {p.stderr[:200]!r}")
            return
        errors = sorted(validators[command].iter_errors(report), key=lambda e: e.path)
        for e in errors[:3]:
            failures.append(f"{label}: {'/'.join(map(str, e.absolute_path))}: {e.message[:200]}")
        if report.get("exit_code") != p.returncode:
            failures.append(f"{label}: exit_code {report.get('exit_code')} but process exited {p.returncode}")
        if expect is not None and p.returncode != expect:
            failures.append(f"{label}: expected exit {expect}, got {p.returncode}")

    with tempfile.TemporaryDirectory() as tmp:
        for entry in sorted(pathlib.Path(corpus_dir).iterdir()):
            if not (entry / "manifest.json").exists():
                continue
            files = [str(entry)]
            root = ["--root", "UAS.impl"]
            run("check", root + files, 0)
            run("verify", root + ["--backend", "enumerate"] + files)
            run("verify", root + ["--backend", "enumerate", "--k", "1"] + files)
            if solver:
                run("verify", root + ["--backend", "smt", "--solver", solver] + files)
            run("claims", root + ["--backend", "enumerate"] + files)
            out = str(pathlib.Path(tmp) / entry.name)
            run("generate", root + ["--backend", "enumerate", "--out", out] + files)
            run("generate", root + ["--backend", "enumerate", "--force", "--out", out] + files, 0)

        baseline = str(pathlib.Path(corpus_dir) / "uas_baseline")
        run("verify", ["--root", "UAS.impl", "--backend", "smt", "--solver", "/nonexistent/solver", baseline], 4)
        run("check", ["--root", "UAS.nope", baseline], 1)
        run("claims", ["--root", "UAS.nope", baseline], 1)
        bare = pathlib.Path(tmp) / "bare.uadl"
        bare.write_text(NO_ROLES)
        run("claims", ["--root", "Bare::Top.impl", str(bare)], 1)
        run("generate", ["--root", "Bare::Top.impl", "--out", str(pathlib.Path(tmp) / "bare"), str(bare)], 1)

    for f in failures:
        print("FAIL", f)
    print(f"{runs} reports checked, {len(failures)} problems")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
