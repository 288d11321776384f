"""Classify every subcomplex of the enumerated family and tabulate the verdicts.

    python3 scripts/family_census.py --geometry C2:p=2 --triples 200 --seed 0
"""

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from crbuild.crengine import classify
from crbuild.families import subcomplex_family
from crbuild.geometries import build_geometry


@dataclass
class CensusConfig:
    geometry: str = "A2:p=2"
    triples: int = 200
    seed: int = 0


def census(cfg: CensusConfig) -> dict:
    b = build_geometry(cfg.geometry)
    family = subcomplex_family(b, seed=cfg.seed, triples=cfg.triples)
    kinds = Counter()
    by_size = Counter()
    outside = 0
    centre_types = Counter()
    for omega in family:
        v = classify(omega, seed=cfg.seed)
        kinds[v.kind] += 1
        by_size[(len(omega), v.kind)] += 1
        if v.centre is not None:
            centre_types[str(sorted(v.centre.type))] += 1
            outside += not v.centre_in_omega
    return {
        "config": asdict(cfg),
        "chambers": b.n,
        "family_size": len(family),
        "verdicts": dict(sorted(kinds.items())),
        "centre_types": dict(sorted(centre_types.items())),
        "centres_outside_omega": outside,
        "by_size": {f"{n}:{k}": c for (n, k), c in sorted(by_size.items())},
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--geometry", default="A2:p=2")
    ap.add_argument("--triples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(json.dumps(census(CensusConfig(args.geometry, args.triples, args.seed)), indent=1))


if __name__ == "__main__":
    main()
