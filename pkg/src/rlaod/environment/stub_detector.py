"""Loopback detector for wire-protocol tests and bridge development.

Speaks the JSON-lines detector protocol on stdio, answering every request
with a fixed set of detections. Run as:

    python -m rlaod.environment.stub_detector [--fixture resp.json]
        [--context-length N] [--sleep SECONDS] [--drop-key KEY] [--garbage]

The fixture JSON may contain "detections" and either "context" (a full
vector) or "context_length".
"""

from __future__ import annotations

import argparse
import json
import sys
import time


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixture", help="JSON file with detections/context to echo")
    parser.add_argument("--context-length", type=int, default=512)
    parser.add_argument("--sleep", type=float, default=0.0)
    parser.add_argument("--drop-key", choices=["detections", "context", "id"])
    parser.add_argument("--garbage", action="store_true", help="respond with non-JSON")
    args = parser.parse_args(argv)

    detections = []
    context = None
    if args.fixture:
        with open(args.fixture) as fh:
            fixture = json.load(fh)
        detections = fixture.get("detections", [])
        context = fixture.get("context")
        if context is None and "context_length" in fixture:
            args.context_length = fixture["context_length"]
    if context is None:
        context = [0.0] * args.context_length

    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        if args.sleep:
            time.sleep(args.sleep)
        if args.garbage:
            sys.stdout.write("this is not json\n")
            sys.stdout.flush()
            continue
        response = {"id": request["id"], "detections": detections, "context": context}
        if args.drop_key:
            del response[args.drop_key]
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
