"""Validate `catenary classify` / `catenary sweep` output against the report schema."""

import json
import subprocess
import sys

import jsonschema


def run(cli, *args):
    out = subprocess.run([cli, *args], check=False, capture_output=True, text=True)
    if out.returncode != 0:
        sys.exit(f"{' '.join(args)} exited {out.returncode}: {out.stderr}")
    return json.loads(out.stdout)


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        validator = jsonschema.Draft202012Validator(json.load(f))

    reports = [run(cli, "classify", "--alpha", a, "--r0", r)
               for a, r in [("1", "0.25"), ("1", "2"), ("-3", "2"), ("1", "0.5"), ("-0.5", "3")]]
    reports += run(cli, "sweep", "--alpha-grid", "-2,0.5", "--r0", "0.5,1.5")

    for rep in reports:
        validator.validate(rep)

    # the schema must reject what the reader rejects
    bad = dict(reports[0], colour="blue")
    if validator.is_valid(bad):
        sys.exit("schema accepted an unknown field")
    missing = {k: v for k, v in reports[0].items() if k != "period"}
    if validator.is_valid(missing):
        sys.exit("schema accepted a periodic report without a period")
    print(f"{len(reports)} reports valid")


if __name__ == "__main__":
    main()
