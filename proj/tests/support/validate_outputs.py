"""Runs the tool on a synthetic dataset and checks its JSON outputs against
the shipped schemas and its SVG output for well-formed XML."""
import json
import pathlib
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

import jsonschema


def main(tool, synth, schemas):
    schemas = pathlib.Path(schemas)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        subprocess.run([synth, str(tmp / "raw"), "0.0084", "0.089", "0.82", "0.13", "100", "3", "0.04"], check=True)
        subprocess.run([tool, "prepare", "--quiet", "--three-month", str(tmp / "raw/three_month.csv"),
                        "--ten-year", str(tmp / "raw/ten_year.csv"), "--cpi", str(tmp / "raw/cpi.csv"),
                        "-o", str(tmp / "prep")], check=True)
        subprocess.run([tool, "estimate", "--quiet", "--data", str(tmp / "prep"), "--replicates", "40",
                        "--steps-per-year", "12", "-o", str(tmp / "est")], check=True)
        subprocess.run([tool, "estimate", "--quiet", "--data", str(tmp / "prep"), "--no-bias-correction",
                        "--no-quantiles", "-o", str(tmp / "raw_est")], check=True)
        subprocess.run([tool, "simulate", "--quiet", "--report", str(tmp / "est/report.json"), "--reps", "5",
                        "--steps-per-year", "12", "--ten-year-correlation", "0.3", "-o", str(tmp / "sim")],
                       check=True)
        subprocess.run([tool, "curve", "--quiet", "--report", str(tmp / "est/report.json"), "--replicates", "30",
                        "-o", str(tmp / "curve")], check=True)

        report = json.loads((schemas / "report.schema.json").read_text())
        stats = json.loads((schemas / "statistics.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(report)
        jsonschema.Draft202012Validator.check_schema(stats)
        for path in ("est/report.json", "raw_est/report.json"):
            jsonschema.validate(json.loads((tmp / path).read_text()), report,
                                cls=jsonschema.Draft202012Validator)
        jsonschema.validate(json.loads((tmp / "sim/statistics.json").read_text()), stats,
                            cls=jsonschema.Draft202012Validator)
        root = ET.parse(tmp / "curve/curve.svg").getroot()
        assert root.tag == "{http://www.w3.org/2000/svg}svg", root.tag
        assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 3
    print("outputs match schemas")


if __name__ == "__main__":
    main(*sys.argv[1:4])
