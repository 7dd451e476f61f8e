"""Run the katz1 CLI on a few configurations and validate the JSON reports."""

import json
import re
import subprocess
import sys

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
with open(schema_path) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

runs = [
    ["compute", "--level", "491", "--p", "2", "--qexp", "30", "--stats"],
    ["compute", "--level", "7", "--p", "2"],
    ["compute", "--level", "229", "--p", "2"],
    ["compute", "--level", "23", "--p", "3", "--character", "quadratic", "--qexp", "12"],
    ["compute", "--level", "1429", "--p", "2"],
    ["scan", "--levels", "220..300", "--primes-only", "--p", "2", "--all", "--stats"],
    ["verify", "mod2-direct"],
    ["verify", "eigenspaces", "--levels", "5..60"],
]

failed = 0
for args in runs:
    out = subprocess.run([cli, *args, "--json"], capture_output=True, text=True)
    if out.returncode != 0:
        print("FAIL", args, "exit", out.returncode, out.stderr)
        failed += 1
        continue
    doc = json.loads(out.stdout)
    errors = list(validator.iter_errors(doc))
    for e in errors:
        print("FAIL", args, "/".join(map(str, e.absolute_path)), e.message[:200])
    failed += bool(errors)

    # the text report carries the same numbers
    if args[0] == "compute":
        text = subprocess.run([cli, *args], capture_output=True, text=True, check=True).stdout
        for key, label in [("dimension", "Dimension"), ("cutoff", "Bound")]:
            m = re.search(label + r" = (\d+)", text)
            if not m or int(m.group(1)) != doc[key]:
                print("FAIL", args, "text/json mismatch on", key)
                failed += 1
    elif args[0] == "scan":
        text = subprocess.run([cli, *args], capture_output=True, text=True, check=True).stdout
        rows = {int(l.split()[0]): l.split() for l in text.splitlines() if l.strip() and l.split()[0].isdigit()}
        for r in doc["rows"]:
            t = rows.get(r["level"])
            h = "-" if r["h"] is None else str(r["h"])
            if t is None or t[1:4] != [str(r["d"]), h, str(r["max_upo"])]:
                print("FAIL", args, "text/json mismatch at level", r["level"])
                failed += 1

print("validated", len(runs), "reports,", failed, "failures")
sys.exit(1 if failed else 0)
