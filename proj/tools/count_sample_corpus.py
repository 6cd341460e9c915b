#!/usr/bin/env python3
"""Counts cards and per-task placement examples in a corpus file, straight
from the JSON, for cross-checking the engine's loader and example derivation.

    python3 tools/count_sample_corpus.py data/sample_corpus.json
"""

import json
import sys


def main(path):
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    locations = {l["id"]: l for l in doc.get("locations", [])}
    objects = {o["id"]: o for o in doc.get("objects", [])}
    field = {"location": "neighbors", "character": "characters", "object": "objects"}
    examples = {}
    for task, splits in doc.get("splits", {}).items():
        examples[task] = {}
        for split, ids in splits.items():
            n = 0
            for i in ids:
                if task == "container":
                    n += len(objects[i].get("contained_examples", []))
                else:
                    n += len(locations[i].get(field[task], []))
            examples[task][split] = n
    out = {
        "locations": len(doc.get("locations", [])),
        "filler_locations": len(doc.get("filler_locations", [])),
        "characters": len(doc.get("characters", [])),
        "objects": len(doc.get("objects", [])),
        "examples": examples,
        "total_examples": sum(sum(v.values()) for v in examples.values()),
    }
    json.dump(out, sys.stdout, indent=1, sort_keys=True)
    print()


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample_corpus.json")
