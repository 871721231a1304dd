"""Runs every mma-lab subcommand that emits JSON and validates the output
against the report schema, plus the bundled configurations in dump mode."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def run(exe, *args):
    proc = subprocess.run([exe, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)} exited with {proc.returncode}: {proc.stderr}")
    return proc.stdout


def main():
    exe, schema_path, configs = sys.argv[1], sys.argv[2], Path(sys.argv[3])
    schema = json.loads(Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        small = tmp / "small.json"
        small.write_text(json.dumps({"reps": 4, "n": [30, 40], "cases": [{"case": "exp", "alpha": 0.75}]}))
        one = tmp / "one.json"
        one.write_text(json.dumps({"reps": 1, "n": 30, "cases": [{"case": "poly", "alpha": 1}]}))
        run(exe, "simulate", str(small), "--dump-rep", "1", "--dump-dir", str(tmp))
        theta = tmp / "theta.csv"
        theta.write_text("0.8\n0.4\n0.1\n")

        reports = {
            "simulate": run(exe, "simulate", str(small)),
            "simulate R=1": run(exe, "simulate", str(one)),
            "table2": run(exe, "table2", str(small), "--format", "json", "--methods", "WR1,MR2"),
            "riskratio": run(exe, "riskratio", str(small), "--format", "json"),
            "fit": run(exe, "fit", "--design", str(tmp / "X.csv"), "--response", str(tmp / "y.csv"), "--header",
                       "--truth", str(tmp / "f.csv"), "--candidates", "g1", "--sigma2", "lsq"),
            "fit discrete": run(exe, "fit", "--design", str(tmp / "X.csv"), "--response", str(tmp / "y.csv"),
                                "--header", "--discrete", "3", "--sigma2", "rice:2"),
            "oracle": run(exe, "oracle", "--theta", "poly:1", "--n", "500", "--candidates", "g2"),
            "oracle file": run(exe, "oracle", "--theta", f"file:{theta}", "--n", "50"),
            "psi": run(exe, "psi", "--theta", "exp:0.5", "--n", "200", "--candidates", "ms:2,2"),
        }
        for cfg in sorted(configs.iterdir()):
            run(exe, "simulate", str(cfg), "--dump-rep", "0", "--dump-dir", str(tmp / cfg.stem))
            print(f"{cfg.name}: loads")
        failures = 0
        for name, text in reports.items():
            errors = sorted(validator.iter_errors(json.loads(text)), key=lambda e: list(e.path))
            for e in errors[:5]:
                print(f"{name}: {list(e.path)}: {e.message}")
            failures += bool(errors)
            print(f"{name}: {'ok' if not errors else 'INVALID'}")

    if failures:
        sys.exit(f"{failures} report(s) failed validation")


if __name__ == "__main__":
    main()
